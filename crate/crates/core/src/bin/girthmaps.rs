use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use girthmaps::bijection::{annular_to_mobile, map_to_mobile, mobile_to_map, phi_inverse, BijectionError, GirthMap};
use girthmaps::map::{parse_map, MapError, MapFile, ParsedMap};
use girthmaps::mobile::{MobileError, MobileFile, MobileSpec};
use girthmaps::oracle::{count_girth_class, rooted_maps_by_insertion, OracleError};
use girthmaps::orientation::{suitable_orientation, GirthSpec, OrientError, OrientationRecord};
use girthmaps::series::{
    b_annular, count_bipartite, count_loopless, count_simple_bipartite, f_d, g_annular, loopless_series, solve_v, solve_w,
    FaceVars, Series,
};
use girthmaps::verify::{self, Report};

#[derive(Parser)]
#[command(name = "girthmaps", version, about = "Plane maps of prescribed girth and their mobiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Args, Clone, Debug, Default)]
struct Family {
    /// Girth parameter; 0 selects the vertex-rooted case.
    #[arg(long)]
    d: Option<i64>,
    /// Bipartite girth parameter (girth 2b).
    #[arg(long)]
    b: Option<i64>,
    /// Outer degree of an annular type (r for the bipartite family).
    #[arg(long)]
    p: Option<i64>,
    /// Inner root degree of an annular type (s for the bipartite family).
    #[arg(long)]
    q: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Girth of a map file.
    Girth { map: PathBuf },
    /// Separating and non-separating girths of an annular map file.
    AnnularGirths { map: PathBuf },
    /// The suitable orientation of a map.
    Orient {
        map: PathBuf,
        #[command(flatten)]
        family: Family,
    },
    /// The mobile of a map.
    Mobile {
        map: PathBuf,
        #[command(flatten)]
        family: Family,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Closure of a mobile back into a map.
    Close {
        mobile: PathBuf,
        #[command(flatten)]
        family: Family,
    },
    /// Inverse master bijection: the bioriented map of a mobile.
    Invert { mobile: PathBuf },
    /// Coefficients of F_d (or E_b with --bipartite) by face profile.
    Series {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        /// Maximal number of inner faces.
        #[arg(long, default_value_t = 4)]
        max_n: u32,
        #[arg(long)]
        bipartite: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Coefficients of the annular series G (or B with --bipartite).
    AnnularSeries {
        #[command(flatten)]
        family: Family,
        /// Separating girth bound (c for the bipartite family).
        #[arg(long)]
        e: i64,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long)]
        bipartite: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Closed counting formulas.
    Formula {
        #[arg(value_enum)]
        which: FormulaKind,
        /// Face counts by degree (see README) for the bipartite formulas.
        #[arg(value_delimiter = ',')]
        counts: Vec<u64>,
        #[arg(long, default_value_t = 6)]
        max_n: u64,
    },
    /// Brute-force counts: rooted maps by edges, or C_d by face profile with --d.
    Enumerate {
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        max_n: usize,
    },
    /// Acceptance sweeps.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        d: Vec<i64>,
        #[arg(long)]
        max_e: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormulaKind {
    Loopless,
    SimpleBipartite,
    Bipartite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Roundtrip,
    Orientations,
    Counts,
    Annular,
    Formulas,
    Loopless,
    SpecialCases,
    Mobiles,
}

#[derive(Debug)]
enum CliError {
    Failed(String),
    Validation(String),
    Class(String),
    Guard(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Class(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<MobileError> for CliError {
    fn from(e: MobileError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<OrientError> for CliError {
    fn from(e: OrientError) -> Self {
        match e {
            OrientError::Invalid(_) => CliError::Validation(e.to_string()),
            _ => CliError::Class(e.to_string()),
        }
    }
}

impl From<BijectionError> for CliError {
    fn from(e: BijectionError) -> Self {
        match e {
            BijectionError::Orient(o) => o.into(),
            BijectionError::Mobile(m) => m.into(),
            BijectionError::Map(m) => m.into(),
            BijectionError::Other(s) => CliError::Class(s),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Guard(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn girth_spec(f: &Family, m: &ParsedMap) -> Result<GirthSpec, CliError> {
    let check = |flag: Option<i64>, actual: i64, name: &str| match flag {
        Some(x) if x != actual => Err(CliError::Validation(format!("--{name} {x} does not match the map ({actual})"))),
        _ => Ok(()),
    };
    let outer = m.plane().outer_degree() as i64;
    match (f.d, f.b, m) {
        (Some(0), None, ParsedMap::Plane(_)) => Ok(GirthSpec::Zero),
        (Some(d), None, ParsedMap::Plane(_)) => Ok(GirthSpec::Plain(d)),
        (None, Some(b), ParsedMap::Plane(_)) => Ok(GirthSpec::Bipartite(b)),
        (Some(d), None, ParsedMap::Annular(a)) => {
            let q = a.inner_degree() as i64;
            check(f.p, outer, "p")?;
            check(f.q, q, "q")?;
            Ok(GirthSpec::Annular { d, p: outer, q })
        }
        (None, Some(b), ParsedMap::Annular(a)) => {
            let s = a.inner_degree() as i64;
            check(f.p, outer / 2, "p")?;
            check(f.q, s / 2, "q")?;
            Ok(GirthSpec::AnnularBipartite { b, r: outer / 2, s: s / 2 })
        }
        _ => Err(CliError::Validation("give exactly one of --d and --b".into())),
    }
}

fn mobile_spec(f: &Family) -> Result<MobileSpec, CliError> {
    match (f.d, f.b, f.p, f.q) {
        (Some(0), None, None, None) => Ok(MobileSpec::ZeroBranching),
        (Some(d), None, None, None) => Ok(MobileSpec::DBranching(d)),
        (None, Some(b), None, None) => Ok(MobileSpec::BDibranching(b)),
        (Some(d), None, Some(p), Some(q)) => Ok(MobileSpec::Typed { d, p, q }),
        (None, Some(b), Some(r), Some(s)) => Ok(MobileSpec::TypedBipartite { b, r, s }),
        _ => Err(CliError::Validation("give --d or --b, plus both --p and --q for annular types".into())),
    }
}

fn table(s: &Series, header: &[String], format: Format) -> String {
    let rows: Vec<(Vec<u32>, String)> = s.terms().map(|(e, c)| (e.clone(), c.to_string())).collect();
    match format {
        Format::Json => {
            let v: Vec<_> = rows.iter().map(|(e, c)| serde_json::json!({ "exponents": e, "coefficient": c })).collect();
            json(&serde_json::json!({ "variables": header, "terms": v }))
        }
        _ => {
            let mut out = header.join(",") + ",coefficient\n";
            for (e, c) in rows {
                let cells: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                out += &format!("{},{c}\n", cells.join(","));
            }
            out
        }
    }
}

fn face_vars(degrees: &[usize], bound: u32) -> (FaceVars, Vec<String>) {
    let header = degrees.iter().map(|d| format!("x{d}")).collect();
    (FaceVars::faces(degrees, bound), header)
}

fn run_suite(
    suite: Suite,
    max_edges: Option<usize>,
    d: &[i64],
    max_e: Option<usize>,
    max_n: Option<usize>,
) -> Result<Vec<Report>, OracleError> {
    let ds = |default: &[i64]| if d.is_empty() { default.to_vec() } else { d.to_vec() };
    let du: Vec<usize> = ds(&[1, 2, 3]).iter().map(|&x| x as usize).collect();
    Ok(match suite {
        Suite::Roundtrip => vec![verify::roundtrip(max_edges.unwrap_or(6), &ds(&[1, 2, 3, 4]))?],
        Suite::Orientations => vec![verify::orientations(max_edges.unwrap_or(5))?],
        Suite::Counts => vec![verify::counts(&du, 5, max_n.unwrap_or(3))?],
        Suite::Loopless => vec![verify::loopless(max_n.unwrap_or(4), 20)?],
        Suite::Formulas => vec![verify::formulas(max_e.unwrap_or(5))?],
        Suite::Annular => vec![verify::annular(4, 4, max_n.unwrap_or(2))?],
        Suite::Mobiles => vec![verify::mobiles(&ds(&[1, 2, 3, 4]), 5, max_n.unwrap_or(3))?],
        Suite::SpecialCases => vec![verify::special_cases(max_edges.unwrap_or(4), 3)?],
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Girth { map } => {
            let m = parse_map(&read(&map)?)?;
            Ok(match m.plane().map.girth() {
                Some(g) => g.to_string(),
                None => "none".into(),
            })
        }
        Command::AnnularGirths { map } => match parse_map(&read(&map)?)? {
            ParsedMap::Plane(_) => Err(CliError::Validation("the map has no inner root face".into())),
            ParsedMap::Annular(a) => {
                let g = a.girths();
                let show = |x: Option<usize>| x.map_or("none".to_string(), |v| v.to_string());
                Ok(format!("separating {}\nnon-separating {}", show(g.separating), show(g.non_separating)))
            }
        },
        Command::Orient { map, family } => {
            let m = parse_map(&read(&map)?)?;
            let spec = girth_spec(&family, &m)?;
            let inner = match &m {
                ParsedMap::Annular(a) => Some(a.inner),
                ParsedMap::Plane(_) => None,
            };
            let o = suitable_orientation(m.plane(), inner, spec)?;
            Ok(json(&o.to_records()))
        }
        Command::Mobile { map, family, format } => {
            let m = parse_map(&read(&map)?)?;
            let spec = girth_spec(&family, &m)?;
            let img = match &m {
                ParsedMap::Plane(p) => map_to_mobile(p, None, spec)?,
                ParsedMap::Annular(a) => annular_to_mobile(a, spec)?,
            };
            Ok(match format {
                Format::Dot => img.mobile.dot(),
                _ => json(&MobileFile::from_mobile(&img.mobile)),
            })
        }
        Command::Close { mobile, family } => {
            let file: MobileFile =
                serde_json::from_str(&read(&mobile)?).map_err(|e| CliError::Validation(e.to_string()))?;
            let t = file.to_mobile()?;
            let spec = mobile_spec(&family)?;
            Ok(match mobile_to_map(&t, spec)? {
                GirthMap::Plane(p) => json(&MapFile::from_plane(&p)),
                GirthMap::Annular(a) => json(&MapFile::from_annular(&a)),
            })
        }
        Command::Invert { mobile } => {
            let file: MobileFile =
                serde_json::from_str(&read(&mobile)?).map_err(|e| CliError::Validation(e.to_string()))?;
            let (p, o) = phi_inverse(&file.to_mobile()?)?;
            #[derive(Serialize)]
            struct Out {
                map: MapFile,
                orientation: Vec<OrientationRecord>,
            }
            Ok(json(&Out { map: MapFile::from_plane(&p), orientation: o.to_records() }))
        }
        Command::Series { family, degrees, max_n, bipartite, format } => {
            let (vars, header) = face_vars(&degrees, max_n);
            let s = match (bipartite, family.d, family.b) {
                (false, Some(d), None) if d >= 1 => f_d(d as usize, &vars),
                (true, None, Some(b)) if b >= 1 => solve_v(b as usize, &vars).e(),
                _ => return Err(CliError::Validation("use --d D, or --bipartite --b B".into())),
            };
            Ok(table(&s, &header, format))
        }
        Command::AnnularSeries { family, e, degrees, max_n, bipartite, format } => {
            let (vars, header) = face_vars(&degrees, max_n);
            let (Some(p), Some(q)) = (family.p, family.q) else {
                return Err(CliError::Validation("--p and --q are required".into()));
            };
            let s = match (bipartite, family.d, family.b) {
                (false, Some(d), None) if d >= 1 => g_annular(&solve_w(d as usize, &vars), e, p, q),
                (true, None, Some(b)) if b >= 1 => b_annular(&solve_v(b as usize, &vars), e, p, q),
                _ => return Err(CliError::Validation("use --d D, or --bipartite --b B".into())),
            };
            Ok(table(&s, &header, format))
        }
        Command::Formula { which, counts, max_n } => match which {
            FormulaKind::Loopless => {
                let series = loopless_series(max_n as u32).univariate_coeffs();
                let mut out = String::from("n,formula,series\n");
                for n in 0..=max_n {
                    out += &format!("{n},{},{}\n", count_loopless(n), series[n as usize]);
                }
                Ok(out)
            }
            FormulaKind::SimpleBipartite | FormulaKind::Bipartite if counts.iter().all(|&c| c == 0) => {
                Err(CliError::Validation("at least one face is required".into()))
            }
            FormulaKind::SimpleBipartite => Ok(count_simple_bipartite(&counts).to_string()),
            FormulaKind::Bipartite => Ok(count_bipartite(&counts).to_string()),
        },
        Command::Enumerate { max_edges, d, degrees, max_n } => match d {
            None => {
                let levels = rooted_maps_by_insertion(max_edges)?;
                let mut out = String::from("edges,rooted_maps\n");
                for (k, l) in levels.iter().enumerate() {
                    out += &format!("{k},{}\n", l.len());
                }
                Ok(out)
            }
            Some(d) => {
                let mut out = String::from("faces,count\n");
                for (prof, n) in count_girth_class(d, &degrees, max_n)? {
                    let cells: Vec<String> = prof.iter().map(|x| x.to_string()).collect();
                    out += &format!("{},{n}\n", cells.join(" "));
                }
                Ok(out)
            }
        },
        Command::Verify { suite, max_edges, d, max_e, max_n, format } => {
            let reports = run_suite(suite, max_edges, &d, max_e, max_n)?;
            let text = match format {
                Format::Json => json(&reports),
                _ => reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
            };
            if reports.iter().all(Report::passed) {
                Ok(text)
            } else {
                Err(CliError::Failed(text))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        // a closed pipe (e.g. `| head`) is not an error
        Ok(out) => {
            let _ = writeln!(io::stdout().lock(), "{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(out)) => {
            let _ = writeln!(io::stdout().lock(), "{}", out.trim_end());
            ExitCode::from(1)
        }
        Err(e) => {
            let msg = match &e {
                CliError::Validation(s) | CliError::Class(s) | CliError::Guard(s) | CliError::Failed(s) => s,
            };
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
