//! Sends every member of C_3 with at most 5 edges to its mobile and back.

use girthmaps::bijection::{map_to_mobile, mobile_to_map};
use girthmaps::mobile::MobileSpec;
use girthmaps::oracle::rooted_maps_by_insertion;
use girthmaps::orientation::GirthSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut done = std::collections::BTreeSet::new();
    for p in rooted_maps_by_insertion(5)?.into_iter().flatten() {
        if p.map.is_empty() || p.outer_degree() != 3 || p.map.girth() != Some(3) || !done.insert(p.plane_code()) {
            continue;
        }
        let img = map_to_mobile(&p, None, GirthSpec::Plain(3))?;
        let back = mobile_to_map(&img.mobile, MobileSpec::DBranching(3))?;
        println!(
            "faces {:?} -> mobile with {} vertices, {} buds, black degrees {:?}; closure isomorphic: {}",
            p.inner_face_degrees(),
            img.mobile.n_vertices(),
            img.mobile.n_buds(),
            img.mobile.black_degrees(),
            back.plane().plane_code() == p.plane_code()
        );
    }
    Ok(())
}
