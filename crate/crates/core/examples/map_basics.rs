//! Builds a few small maps, prints their girth, faces and dual, and writes
//! the triangle in the JSON map format.

use girthmaps::map::{CombinatorialMap, MapFile, PlaneMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // half-edges 2k and 2k+1 form an edge; cycles list the rotation at each vertex
    let triangle = PlaneMap::new(CombinatorialMap::from_cycles(6, &[vec![0, 5], vec![1, 2], vec![3, 4]])?, 0)?;
    let doubled = PlaneMap::new(CombinatorialMap::from_cycles(4, &[vec![0, 2], vec![1, 3]])?, 0)?;
    for (name, p) in [("triangle", &triangle), ("double edge", &doubled)] {
        let m = &p.map;
        println!(
            "{name}: {} vertices, {} edges, face degrees {:?}, girth {:?}, bipartite {}",
            m.n_vertices(),
            m.n_edges(),
            m.face_degrees(),
            m.girth(),
            m.is_bipartite()
        );
        let (dual, marked) = p.dual();
        println!("  dual: vertex degrees {:?}, marked vertex {marked}", dual.vertices().iter().map(Vec::len).collect::<Vec<_>>());
        println!("  subdivision girth {:?}", p.subdivide().plane.map.girth());
    }
    println!("{}", serde_json::to_string_pretty(&MapFile::from_plane(&triangle))?);
    Ok(())
}
