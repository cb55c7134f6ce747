//! Rooted planar maps by edges through both generation strategies.

use girthmaps::oracle::{rooted_maps_by_insertion, rooted_maps_by_permutations};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let levels = rooted_maps_by_insertion(5)?;
    for (k, level) in levels.iter().enumerate() {
        let perm = if k <= 4 { rooted_maps_by_permutations(k)?.len().to_string() } else { "-".into() };
        println!("{k} edges: {} by insertion, {perm} by permutations", level.len());
    }
    Ok(())
}
