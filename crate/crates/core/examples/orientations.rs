//! Suitable orientations in each family, with their classification flags.

use girthmaps::map::{CombinatorialMap, PlaneMap};
use girthmaps::orientation::{classify, geodesic_biorientation, suitable_orientation, GirthSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let triangle = PlaneMap::new(CombinatorialMap::from_cycles(6, &[vec![0, 5], vec![1, 2], vec![3, 4]])?, 0)?;
    let doubled = PlaneMap::new(CombinatorialMap::from_cycles(4, &[vec![0, 2], vec![1, 3]])?, 0)?;
    for (name, p, spec) in [
        ("triangle", &triangle, GirthSpec::Plain(3)),
        ("double edge", &doubled, GirthSpec::Plain(2)),
        ("double edge", &doubled, GirthSpec::Bipartite(1)),
    ] {
        let o = suitable_orientation(p, None, spec)?;
        println!("{name} {spec:?}: weights {:?}, {:?}", o.weight, classify(p, &o)?);
    }
    match suitable_orientation(&triangle, None, GirthSpec::Plain(2)) {
        Ok(_) => println!("unexpected orientation"),
        Err(e) => println!("triangle with d = 2: {e}"),
    }
    let geo = geodesic_biorientation(&triangle.map, triangle.map.vertex(0));
    println!("geodesic biorientation of the triangle: {:?}", geo.weight);
    Ok(())
}
