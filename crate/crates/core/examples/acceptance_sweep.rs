//! Runs every acceptance sweep and prints one line per criterion.

use std::time::Instant;

use girthmaps::verify;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs: Vec<(&str, Box<dyn Fn() -> Result<verify::Report, girthmaps::oracle::OracleError>>)> = vec![
        ("roundtrip", Box::new(|| verify::roundtrip(6, &[1, 2, 3, 4]))),
        ("orientations", Box::new(|| verify::orientations(5))),
        ("counts", Box::new(|| verify::counts(&[1, 2, 3], 5, 3))),
        ("loopless", Box::new(|| verify::loopless(4, 20))),
        ("formulas", Box::new(|| verify::formulas(5))),
        ("annular", Box::new(|| verify::annular(4, 4, 2))),
        ("mobiles", Box::new(|| verify::mobiles(&[1, 2, 3, 4], 5, 3))),
        ("special-cases", Box::new(|| verify::special_cases(4, 3))),
    ];
    for (name, run) in runs {
        if std::env::args().nth(1).is_some_and(|a| a != name) {
            continue;
        }
        let start = Instant::now();
        let report = run()?;
        println!("{report} [{:.1?}]", start.elapsed());
        for f in report.failures.iter().take(std::env::var("SHOW").ok().and_then(|s| s.parse().ok()).unwrap_or(5)) {
            println!("    {:?}: {}", f.code, f.detail);
        }
    }
    Ok(())
}
