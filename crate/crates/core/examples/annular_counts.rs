//! Annular maps of type (2, 3): girth table from brute force against the
//! annular series.

use girthmaps::oracle::annular_girth_table;
use girthmaps::series::{g_annular, g_annular_extraction, solve_w, FaceVars};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, q) = (2, 3);
    let faces = [3];
    println!("(separating, non-separating) -> rooted maps");
    for (girths, n) in annular_girth_table(p, q, &faces)? {
        println!("{girths:?} -> {n}");
    }
    let vars = FaceVars::faces(&[2, 3], 1);
    let exp = vars.exponent_of(&faces).unwrap();
    for d in 1..=3 {
        let w = solve_w(d, &vars);
        for e in 1..=2 {
            println!("G d={d} e={e}: {}", g_annular(&w, e, p as i64, q as i64).coeff(&exp));
        }
        println!("  e = p by extraction: {}", g_annular_extraction(&w, p as i64, q as i64).coeff(&exp));
    }
    Ok(())
}
