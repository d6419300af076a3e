//! Command-line front end. [`run`] parses arguments, dispatches to the
//! computation modules and renders a [`Report`].
//!
//! Exit codes: 0 on success, 1 on a domain error (the report carries the
//! error), 2 on unreadable or malformed input.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::divisor::{class_group, gorenstein_report, multisection_class_group, DivisorClass};
use crate::error::Error;
use crate::fan::{validate_fan, Fan, RawFan, ValidationOptions};
use crate::frobenius::{self, frobenius_decompose, ffrt_class_set_capped, EnumerationOptions};
use crate::graded::{
    self, invariant_ring_class_group, is_n_small, monomial_ideal_height_capped,
    quasi_gorenstein_invariants, surjective_grading_check_capped, veronese_report, DiagonalAction,
    MonomialIdealData, WeightedPolyRing,
};
use crate::report::{self, Report};

#[derive(Parser, Debug)]
#[command(name = "torix", version, about = "Exact class-group and Frobenius computations for toric varieties and diagonal actions")]
struct Cli {
    /// Emit the JSON report instead of the text listing.
    #[arg(long, global = true)]
    json: bool,

    /// Reject non-primitive rays instead of normalizing them.
    #[arg(long, global = true)]
    strict: bool,

    /// Check that maximal cones pairwise meet in common faces.
    #[arg(long, global = true)]
    check_intersections: bool,

    /// Bound on enumerated items (defaults depend on the command).
    #[arg(long, global = true, env = "TORIX_CAP")]
    cap: Option<u64>,

    /// Worker threads for parallel enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class group of the toric variety and the classes of the ray divisors.
    Classgroup { fan: PathBuf },
    /// Canonical class, principality and Gorenstein flags.
    Canonical { fan: PathBuf },
    /// Cartier test for a torus-invariant divisor.
    Cartier {
        fan: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// Decomposition of a Frobenius pushforward into rank-one summands.
    Frobenius {
        fan: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        /// Free coordinates of the source class (default 0).
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
    /// Classes that can occur as summands of any Frobenius pushforward of O.
    FfrtSet { fan: PathBuf },
    /// Class group of the multisection ring of the given divisors.
    Multisection {
        fan: PathBuf,
        #[arg(long, allow_hyphen_values = true, required = true)]
        divisor: Vec<String>,
    },
    /// Smallness, class group or quasi-Gorenstein flag for a diagonal action.
    Action {
        kind: ActionKind,
        /// Invariant factors of the character group.
        #[arg(long)]
        group: String,
        /// Per-variable weights separated by ';', coordinates by ','.
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Class group and quasi-Gorenstein flag of a Veronese subring.
    Veronese {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
    },
    /// Height of a squarefree monomial ideal given by generator supports.
    Height {
        /// 1-based supports separated by ';', e.g. "1,2;3,4".
        #[arg(long, allow_hyphen_values = true)]
        supports: String,
        #[arg(long)]
        nvars: usize,
    },
    /// Bounded surjectivity check of multiplication between graded pieces.
    Surjcheck {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long)]
        bound: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ActionKind {
    Small,
    Classgroup,
    Qgor,
}

impl ActionKind {
    fn name(self) -> &'static str {
        match self {
            ActionKind::Small => "small",
            ActionKind::Classgroup => "classgroup",
            ActionKind::Qgor => "qgor",
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Step<T> = std::result::Result<T, Failure>;

struct Success {
    results: Value,
    warnings: Vec<String>,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };

    let mut inputs = Map::new();
    let outcome = match cli.threads {
        Some(0) => Err(Failure::Input("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut inputs)),
            Err(e) => Err(Failure::Input(format!("cannot start thread pool: {e}"))),
        },
        None => execute(&cli, &mut inputs),
    };

    let name = command_name(&cli.command);
    let render = |r: &Report| if cli.json { r.to_json() } else { r.to_text() };
    match outcome {
        Ok(s) => Outcome {
            code: 0,
            stdout: render(&Report::success(name, Value::Object(inputs), s.results, s.warnings)),
            stderr: String::new(),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: 1,
            stderr: format!("error: {e}\n"),
            stdout: render(&Report::failure(name, Value::Object(inputs), e)),
        },
        Err(Failure::Input(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classgroup { .. } => "classgroup",
        Command::Canonical { .. } => "canonical",
        Command::Cartier { .. } => "cartier",
        Command::Frobenius { .. } => "frobenius",
        Command::FfrtSet { .. } => "ffrt-set",
        Command::Multisection { .. } => "multisection",
        Command::Action { .. } => "action",
        Command::Veronese { .. } => "veronese",
        Command::Height { .. } => "height",
        Command::Surjcheck { .. } => "surjcheck",
    }
}

fn execute(cli: &Cli, inputs: &mut Map<String, Value>) -> Step<Success> {
    let options = ValidationOptions {
        strict: cli.strict,
        check_intersections: cli.check_intersections,
    };
    match &cli.command {
        Command::Classgroup { fan } => {
            let (fan, warnings) = load_fan(fan, options, inputs)?;
            let results = report::class_group(&fan, class_group(&fan));
            Ok(Success { results, warnings })
        }
        Command::Canonical { fan } => {
            let (fan, mut warnings) = load_fan(fan, options, inputs)?;
            let g = gorenstein_report(&fan);
            if g.canonical_is_cartier.is_none() {
                warnings.push(format!(
                    "rays {:?} lie in no maximal cone; the Cartier test does not apply",
                    fan.coneless_rays()
                ));
            }
            Ok(Success { results: report::canonical(&fan, &g), warnings })
        }
        Command::Cartier { fan, divisor } => {
            let (fan, warnings) = load_fan(fan, options, inputs)?;
            let coeffs = parse_divisor(&fan, divisor)?;
            inputs.insert("divisor".into(), report::ints(&coeffs));
            let d = fan.divisor(coeffs.clone())?;
            let data = d.cartier()?;
            let results = report::cartier(&coeffs, &d.class(), d.is_principal().principal, &data);
            Ok(Success { results, warnings })
        }
        Command::Frobenius { fan, p, e, class } => {
            let (fan, warnings) = load_fan(fan, options, inputs)?;
            inputs.insert("p".into(), json!(p));
            inputs.insert("e".into(), json!(e));
            let cap = cli.cap.unwrap_or(frobenius::DEFAULT_CAP);
            inputs.insert("cap".into(), json!(cap));
            let cg = class_group(&fan);
            let source = match class {
                None => cg.group.zero(),
                Some(text) => {
                    let free = parse_ints(text, "--class")?;
                    inputs.insert("class".into(), report::ints(&free));
                    if cg.group.torsion().is_empty() {
                        cg.group.element(free, Vec::new()).map_err(|_| {
                            Failure::Input(format!(
                                "--class needs {} coordinates",
                                cg.group.rank()
                            ))
                        })?
                    } else {
                        cg.group.zero()
                    }
                }
            };
            let d = frobenius_decompose(
                &fan,
                *p,
                *e,
                &DivisorClass(source),
                EnumerationOptions { cap, parallel: true },
            )?;
            Ok(Success { results: report::frobenius(&d), warnings })
        }
        Command::FfrtSet { fan } => {
            let (fan, warnings) = load_fan(fan, options, inputs)?;
            let cap = cli.cap.unwrap_or(frobenius::DEFAULT_CAP);
            inputs.insert("cap".into(), json!(cap));
            let set = ffrt_class_set_capped(&fan, cap)?;
            Ok(Success { results: report::ffrt(&set), warnings })
        }
        Command::Multisection { fan, divisor } => {
            let (fan, warnings) = load_fan(fan, options, inputs)?;
            let coeffs = divisor
                .iter()
                .map(|d| parse_divisor(&fan, d))
                .collect::<Step<Vec<_>>>()?;
            inputs.insert(
                "divisors".into(),
                Value::Array(coeffs.iter().map(|c| report::ints(c)).collect()),
            );
            let divisors = coeffs
                .into_iter()
                .map(|c| fan.divisor(c))
                .collect::<crate::Result<Vec<_>>>()?;
            let m = multisection_class_group(&fan, &divisors)?;
            let results = report::multisection(&class_group(&fan).group, &m);
            Ok(Success { results, warnings })
        }
        Command::Action { kind, group, weights, level } => {
            let factors = parse_ints(group, "--group")?;
            let weights = parse_rows(weights, "--weights")?;
            inputs.insert("kind".into(), json!(kind.name()));
            inputs.insert("group".into(), report::ints(&factors));
            inputs.insert(
                "weights".into(),
                Value::Array(weights.iter().map(|w| report::ints(w)).collect()),
            );
            let action = DiagonalAction::from_presentation(&factors, &weights)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let mut results = report::action(&action);
            let extra = match kind {
                ActionKind::Small => {
                    inputs.insert("level".into(), json!(level));
                    report::smallness(&is_n_small(&action, *level))
                }
                ActionKind::Classgroup => {
                    json!({ "class_group": report::group(&invariant_ring_class_group(&action)?) })
                }
                ActionKind::Qgor => report::quasi_gorenstein(&quasi_gorenstein_invariants(&action)?),
            };
            merge(&mut results, extra);
            Ok(Success { results, warnings: Vec::new() })
        }
        Command::Veronese { n, d } => {
            inputs.insert("n".into(), json!(n));
            inputs.insert("d".into(), json!(d));
            let v = veronese_report(*n, *d)?;
            Ok(Success { results: report::veronese(&v), warnings: Vec::new() })
        }
        Command::Height { supports, nvars } => {
            let sets = parse_supports(supports, *nvars)?;
            inputs.insert(
                "supports".into(),
                json!(sets.iter().map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>()),
            );
            inputs.insert("nvars".into(), json!(nvars));
            let cap = cli.cap.unwrap_or(graded::DEFAULT_CAP);
            let ideal = MonomialIdealData::new(sets).map_err(|e| Failure::Input(e.to_string()))?;
            let h = monomial_ideal_height_capped(&ideal, *nvars, cap)?;
            Ok(Success { results: report::height(&h), warnings: Vec::new() })
        }
        Command::Surjcheck { weights, sigma, bound } => {
            let weights = parse_i64_rows(weights, "--weights")?;
            let sigma = parse_i64_rows(sigma, "--sigma")?;
            inputs.insert("weights".into(), json!(weights));
            inputs.insert("sigma".into(), json!(sigma));
            inputs.insert("bound".into(), json!(bound));
            let s = weights.first().map_or(0, Vec::len);
            let ring = WeightedPolyRing::new(s, weights).map_err(|e| Failure::Input(e.to_string()))?;
            if let Some(g) = sigma.iter().find(|g| g.len() != s) {
                return Err(Failure::Input(format!(
                    "--sigma generator {g:?} does not have {s} coordinates"
                )));
            }
            let cap = cli.cap.unwrap_or(graded::DEFAULT_CAP);
            let r = surjective_grading_check_capped(&ring, &sigma, *bound, cap)?;
            let mut warnings = Vec::new();
            if r.surjective {
                warnings.push(format!(
                    "bounded check: degrees with coordinates in [-{bound}, {bound}] and monomials of total degree <= {}",
                    r.degree_cap
                ));
            }
            Ok(Success { results: report::surjectivity(&r), warnings })
        }
    }
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(x)) = (target, extra) {
        t.extend(x);
    }
}

fn load_fan(
    path: &PathBuf,
    options: ValidationOptions,
    inputs: &mut Map<String, Value>,
) -> Step<(Fan, Vec<String>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read fan file {}: {e}", path.display())))?;
    let raw: RawFan = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("malformed fan file {}: {e}", path.display())))?;
    let fan = validate_fan(&raw, options).map_err(|e| Failure::Input(e.to_string()))?;
    inputs.insert("fan_file".into(), json!(path.display().to_string()));
    inputs.insert("fan".into(), report::fan_summary(&fan));
    let warnings = raw
        .rays
        .iter()
        .zip(fan.rays())
        .enumerate()
        .filter(|(_, (r, f))| r != f)
        .map(|(i, (r, f))| format!("ray {i} = {r:?} replaced by its primitive generator {f:?}"))
        .collect();
    Ok((fan, warnings))
}

fn parse_ints(text: &str, flag: &str) -> Step<Vec<BigInt>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Failure::Input(format!("{flag}: {:?} is not an integer", t.trim())))
        })
        .collect()
}

fn parse_rows(text: &str, flag: &str) -> Step<Vec<Vec<BigInt>>> {
    text.split(';').map(|row| parse_ints(row, flag)).collect()
}

fn parse_i64_rows(text: &str, flag: &str) -> Step<Vec<Vec<i64>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|t| {
                    t.trim().parse::<i64>().map_err(|_| {
                        Failure::Input(format!("{flag}: {:?} is not a 64-bit integer", t.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_divisor(fan: &Fan, text: &str) -> Step<Vec<BigInt>> {
    let coeffs = parse_ints(text, "--divisor")?;
    if coeffs.len() != fan.ray_count() {
        return Err(Failure::Input(format!(
            "--divisor has {} coefficients but the fan has {} rays",
            coeffs.len(),
            fan.ray_count()
        )));
    }
    Ok(coeffs)
}

fn parse_supports(text: &str, nvars: usize) -> Step<Vec<std::collections::BTreeSet<usize>>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|part| {
            let mut set = std::collections::BTreeSet::new();
            for t in part.split(',') {
                let i: usize = t.trim().parse().map_err(|_| {
                    Failure::Input(format!("--supports: {:?} is not a variable index", t.trim()))
                })?;
                if i == 0 || i > nvars {
                    return Err(Failure::Input(format!(
                        "--supports: variable {i} outside 1..={nvars}"
                    )));
                }
                set.insert(i - 1);
            }
            Ok(set)
        })
        .collect()
}
