//! Command-line front end.
//!
//! Exit codes: 0 success, 2 an identity or bound check failed, 3 bad input.

use std::fs::File;
use std::io::{BufWriter, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use arithgeom::curveres::{
    classify_pair, ideal_member_on, lct_of_tree, pair_discrepancies, resolve, IdealKind,
    ValuationData, DEFAULT_MAX_DEPTH,
};
use arithgeom::experiments::{
    gcd_bounds_check, gcd_family_check, mdlaw_param, sample_param_points, write_csv, GcdFamily,
};
use arithgeom::json::{
    parse_bipoly, parse_curve, parse_param_curve, parse_point, parse_rat, parse_snc_pair,
    parse_subscheme,
};
use arithgeom::snc::{classify, discrep, loci_divisors, totaldiscrep, vojta_reduced_divisor};
use arithgeom::{heights, Rat};
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "arithgeom",
    version,
    about = "Heights, log discrepancies and curve resolution over Q"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// JSON arguments are inline when they start with `{` or `[`, otherwise a file
/// path (`-` for stdin).
#[derive(Subcommand)]
enum Command {
    /// Height, counting and proximity function of a subscheme at a point.
    HeightEval { subscheme: String, point: String },
    /// Discrepancies and class of an SNC pair.
    ClassifySnc { pair: String },
    /// Resolve a plane curve germ at the origin (or at "at").
    ResolveCurve {
        curve: String,
        /// Boundary coefficients to evaluate the pair (A^2, cC) at.
        #[arg(long = "c", value_name = "RAT")]
        c: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
    /// Membership of g in the ideal H, J or I of (A^2, cC).
    Member {
        curve: String,
        /// Auxiliary function as {"terms": [[[i, j], "c"], ...]}.
        g: String,
        #[arg(long = "c", value_name = "RAT")]
        c: String,
        #[arg(long, default_value = "J")]
        kind: String,
    },
    /// Height law h_O = (m/d) h + O(1) on points of a parametrized curve.
    Mdlaw {
        param: String,
        #[arg(long, default_value_t = 30)]
        bound: i64,
        #[arg(long = "h-min", default_value_t = 20.0)]
        h_min: f64,
        /// Write per-point rows to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact gcd identities along a power family.
    #[command(allow_negative_numbers = true)]
    GcdFamily {
        /// pure, shifted or mixed
        kind: String,
        d: u32,
        m: u32,
        amin: i64,
        amax: i64,
    },
    /// Empirical constants in C1' M^(m/d - eps) <= gcd(x, y) <= C2' M^(m/d + eps).
    GcdBounds {
        param: String,
        #[arg(long, default_value_t = 30)]
        bound: i64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
}

enum Failure {
    Input(String),
    Violation(String),
}

impl From<arithgeom::Error> for Failure {
    fn from(e: arithgeom::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_arg(s: &str) -> Result<String, Failure> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(s.to_string());
    }
    let mut buf = String::new();
    let res = if s == "-" {
        std::io::stdin().read_to_string(&mut buf).map(|_| ())
    } else {
        File::open(s)
            .and_then(|mut f| f.read_to_string(&mut buf))
            .map(|_| ())
    };
    res.map_err(|e| Failure::Input(format!("{s}: {e}")))?;
    Ok(buf)
}

fn rat(s: &str) -> Result<Rat, Failure> {
    Ok(parse_rat(s)?)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    let as_json = cli.json;
    match cli.command {
        Command::HeightEval { subscheme, point } => {
            let z = parse_subscheme(&read_arg(&subscheme)?)?;
            let x = parse_point(&read_arg(&point)?)?;
            let t = heights::q_decompose(&z, &x)?;
            if as_json {
                print_json(
                    &json!({ "point": x.to_string(), "h": t.height, "N": t.counting, "m": t.proximity }),
                );
            } else {
                println!("point {x}");
                println!("h = {}", t.height);
                println!("N = {}", t.counting);
                println!("m = {}", t.proximity);
            }
        }
        Command::ClassifySnc { pair } => {
            let p = parse_snc_pair(&read_arg(&pair)?)?;
            let (d, t, c) = (discrep(&p), totaldiscrep(&p), classify(&p));
            if as_json {
                print_json(
                    &json!({ "discrep": d.to_string(), "totaldiscrep": t.to_string(), "class": c }),
                );
            } else {
                println!("discrep      = {d}");
                println!("totaldiscrep = {t}");
                println!("class        = {c}");
            }
        }
        Command::ResolveCurve {
            curve,
            c,
            max_depth,
        } => {
            let f = parse_curve(&read_arg(&curve)?)?;
            let tree = resolve(&f, max_depth)?;
            let vd = ValuationData::new(&tree);
            let lct = lct_of_tree(&vd);
            let mut pairs = Vec::new();
            for cs in &c {
                let cv = rat(cs)?;
                let rows = pair_discrepancies(&tree, &vd, &cv)?;
                let class = classify_pair(&tree, &vd, &cv)?;
                let loci = loci_divisors(&rows);
                let reduced = vojta_reduced_divisor(&rows)?;
                pairs.push((cv, rows, class, loci, reduced));
            }
            if as_json {
                let pj: Vec<_> = pairs
                    .iter()
                    .map(|(cv, rows, class, loci, reduced)| {
                        json!({ "c": cv.to_string(), "class": class, "rows": rows.rows(), "loci": loci, "reduced": reduced })
                    })
                    .collect();
                print_json(&json!({
                    "curve": f.poly().to_string(),
                    "nodes": tree.summary(),
                    "k": vd.k,
                    "v": vd.v,
                    "lct": lct.to_string(),
                    "pairs": pj,
                }));
            } else {
                println!("curve {}", f.poly());
                println!(
                    "{:<6}{:<8}{:<16}{:>6}{:>6}{:>6}",
                    "node", "parent", "proximate to", "mult", "k", "v"
                );
                for (i, s) in tree.summary().iter().enumerate() {
                    println!(
                        "{:<6}{:<8}{:<16}{:>6}{:>6}{:>6}",
                        s.id,
                        s.parent.clone().unwrap_or_else(|| "-".into()),
                        if s.proximate_to.is_empty() {
                            "-".into()
                        } else {
                            s.proximate_to.join(",")
                        },
                        s.multiplicity,
                        vd.k[i],
                        vd.v[i]
                    );
                }
                println!("lct = {lct}");
                for (cv, rows, class, loci, reduced) in &pairs {
                    println!("c = {cv}: {class}");
                    for r in rows.rows() {
                        println!("  {:<4} a = {:<8} b = {}", r.id, r.a.to_string(), r.b);
                    }
                    let join = |s: &std::collections::BTreeSet<String>| {
                        s.iter().cloned().collect::<Vec<_>>().join(",")
                    };
                    println!(
                        "  non-sc {{{}}} non-klt {{{}}} non-lc {{{}}} reduced {{{}}}",
                        join(&loci.non_sc),
                        join(&loci.non_klt),
                        join(&loci.non_lc),
                        join(reduced)
                    );
                }
            }
        }
        Command::Member { curve, g, c, kind } => {
            let f = parse_curve(&read_arg(&curve)?)?;
            let g = parse_bipoly(&read_arg(&g)?)?;
            let cv = rat(&c)?;
            let kind: IdealKind = kind.parse()?;
            let tree = resolve(&f, DEFAULT_MAX_DEPTH)?;
            let vd = ValuationData::new(&tree);
            let member = ideal_member_on(&tree, &vd, &cv, &g, kind)?;
            if as_json {
                print_json(
                    &json!({ "kind": kind, "c": cv.to_string(), "g": g.to_string(), "member": member }),
                );
            } else {
                println!("{member}");
            }
        }
        Command::Mdlaw {
            param,
            bound,
            h_min,
            out,
        } => {
            let pc = parse_param_curve(&read_arg(&param)?)?;
            let (report, rows) = mdlaw_param(&pc, bound, h_min)?;
            if let Some(path) = out {
                let file = File::create(&path)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                write_csv(BufWriter::new(file), &rows)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            if as_json {
                print_json(&serde_json::to_value(&report).expect("serializable"));
            } else {
                println!(
                    "m = {}, d = {}, samples = {}",
                    report.m, report.d, report.samples
                );
                println!("max |residual|           = {}", report.max_abs_residual);
                match report.max_abs_residual_high {
                    Some(v) => println!(
                        "max |residual| (h >= {}) = {v} over {} samples",
                        report.h_min, report.high_samples
                    ),
                    None => println!("max |residual| (h >= {}) = n/a (no samples)", report.h_min),
                }
                println!("slope fit                = {}", report.slope_fit);
                println!("exactly zero residuals   = {}", report.exact_zero_residuals);
            }
        }
        Command::GcdFamily {
            kind,
            d,
            m,
            amin,
            amax,
        } => {
            let kind: GcdFamily = kind.parse()?;
            let report = gcd_family_check(kind, d, m, amin, amax)?;
            if as_json {
                print_json(&serde_json::to_value(&report).expect("serializable"));
            } else {
                println!(
                    "{kind:?} d={d} m={m} a in [{amin}, {amax}]: {} checked, {} skipped, {} violations",
                    report.checked,
                    report.skipped,
                    report.violations.len()
                );
                for v in &report.violations {
                    println!("  a = {}: gcd = {}, expected {}", v.a, v.gcd, v.expected);
                }
            }
            if !report.violations.is_empty() {
                return Err(Failure::Violation(format!(
                    "{} gcd identity violations",
                    report.violations.len()
                )));
            }
        }
        Command::GcdBounds {
            param,
            bound,
            eps,
            delta,
        } => {
            let pc = parse_param_curve(&read_arg(&param)?)?;
            let points: Vec<_> = sample_param_points(&pc, bound)?
                .into_iter()
                .map(|s| s.point)
                .collect();
            let report = gcd_bounds_check(pc.curve(), &points, eps, delta)?;
            if as_json {
                print_json(&serde_json::to_value(&report).expect("serializable"));
            } else {
                println!(
                    "m = {}, d = {}, {} points used, {} filtered",
                    report.m, report.d, report.used, report.filtered_out
                );
                println!(
                    "exponents [{}, {}]",
                    report.exponent_window.0, report.exponent_window.1
                );
                println!("C1' = {}", report.c1);
                println!("C2' = {}", report.c2);
                println!("violations = {}", report.violations);
            }
            if report.violations > 0 {
                return Err(Failure::Violation(format!(
                    "{} points violate the fitted bounds",
                    report.violations
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
    }
}
