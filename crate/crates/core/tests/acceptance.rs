//! Acceptance suite: one line per criterion. Runs without the libtest
//! harness so every line is printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use girthmaps::verify::{self, Report};

type Run = fn() -> Result<Report, girthmaps::oracle::OracleError>;

fn main() -> ExitCode {
    let criteria: [(&str, Run); 8] = [
        ("C_d round trip, <= 6 edges, d in 1..=4", || verify::roundtrip(6, &[1, 2, 3, 4])),
        ("orientation existence and uniqueness, <= 5 edges", || verify::orientations(5)),
        ("F_d coefficients, d in 1..=3, degrees <= 5, <= 3 inner faces", || verify::counts(&[1, 2, 3], 5, 3)),
        ("loopless maps and the Motzkin identities to t^20", || verify::loopless(4, 20)),
        ("bipartite closed formulas, <= 5 edges", || verify::formulas(5)),
        ("annular series, p, q <= 4, <= 2 faces of degree <= 4", || verify::annular(4, 4, 2)),
        ("mobiles with a marked exposed bud, d in 1..=4", || verify::mobiles(&[1, 2, 3, 4], 5, 3)),
        ("special cases", || verify::special_cases(4, 3)),
    ];
    let mut failed = 0;
    for (what, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(report) => {
                if !report.passed() {
                    failed += 1;
                }
                println!("{report} [{what}; {:.2?}]", start.elapsed());
            }
            Err(e) => {
                failed += 1;
                println!("FAIL [{what}]: {e}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
