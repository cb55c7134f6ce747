//! Generating-function coefficients next to brute-force counts, and the
//! closed formulas.

use girthmaps::oracle::count_girth_class;
use girthmaps::series::{count_bipartite, count_loopless, count_simple_bipartite, f_d, FaceVars};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let degrees = [2, 3, 4];
    let vars = FaceVars::faces(&degrees, 2);
    let f = f_d(2, &vars);
    println!("profile  series  oracle");
    for (prof, n) in count_girth_class(2, &degrees, 2)? {
        println!("{prof:?}  {}  {n}", f.coeff(&vars.exponent_of(&prof).unwrap()));
    }
    println!("loopless: {:?}", (0..8).map(count_loopless).map(|c| c.to_string()).collect::<Vec<_>>());
    println!("simple bipartite, two squares: {}", count_simple_bipartite(&[2]));
    println!("bipartite, one hexagon: {}", count_bipartite(&[0, 0, 1]));
    Ok(())
}
