use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use derange::asymptotics::{
    asym_b, asym_diagonal_e, asym_e3, asym_e4, invert_uvw, AsymptoticEstimate, UvwPoint,
};
use derange::master::{bezout_bound, DegreeMatrix};
use derange::nash::{
    b_bound, b_bound_by_series, b_bound_by_subgames, b_bound_refined, tmne_max_with,
};
use derange::recurrences::e_by_recurrence;
use derange::{e, Error, ExactCount, Method, Profile};

mod output;
mod verify;

use output::{Format, Report};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "derange",
    version,
    about = "Block derangements and Nash equilibrium counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Report wall-clock time in JSON output (otherwise `elapsed_ms` is null).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Count block derangements E(n_1, ..., n_S).
    E {
        /// Comma-separated block sizes, e.g. 2,2,2.
        #[arg(long)]
        profile: Profile,
        #[arg(long, default_value = "auto")]
        method: Method,
        /// Recompute with a second method and exit 3 if they differ.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Maximal number of totally mixed Nash equilibria for option counts m_j.
    Tmne {
        #[arg(long)]
        options: Profile,
        #[arg(long, default_value = "auto")]
        method: Method,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Upper bound B on the number of all Nash equilibria.
    B {
        #[arg(long)]
        options: Profile,
        /// Drop one factor C(m_j, 1) from each subgame term.
        #[arg(long)]
        refined: bool,
        #[arg(long, value_enum, default_value_t = BPath::Direct)]
        via: BPath,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Multihomogeneous Bezout number of a degree matrix.
    Bezout {
        /// Block sizes (variables per block).
        #[arg(long)]
        blocks: Profile,
        /// Degree matrix file (`N S` header, then N rows); `-` reads stdin.
        /// Defaults to the matrix of the TMNE system for the blocks.
        file: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Asymptotic estimate next to the exact value.
    Asym {
        #[arg(long, value_enum)]
        family: Family,
        /// Size parameter (franel, diag, e4).
        #[arg(long)]
        n: Option<u32>,
        /// Number of players (diag).
        #[arg(long)]
        s: Option<u32>,
        /// Triple for e3, option counts for b.
        #[arg(long)]
        profile: Option<Profile>,
        /// Four positive integers for e4.
        #[arg(long)]
        direction: Option<Profile>,
        /// `u,v,w` for e4 instead of a direction.
        #[arg(long, value_delimiter = ',')]
        uvw: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run identity checks over grids.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        /// Largest total N for cross-method.
        #[arg(long, default_value_t = 10)]
        max_n: u32,
        /// Largest part for grid suites.
        #[arg(long)]
        max: Option<u32>,
        /// Sequence fixtures (`id<TAB>index<TAB>value`).
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BPath {
    Direct,
    Subgames,
    Series,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Franel,
    Diag,
    E3,
    E4,
    B,
}

enum Failure {
    Invalid(String),
    Disagree(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn timed<T>(out: &OutputArgs, f: impl FnOnce() -> T) -> (T, Option<u128>) {
    let start = Instant::now();
    let value = f();
    (value, out.timing.then(|| start.elapsed().as_millis()))
}

fn second_method(profile: &Profile, first: Method) -> Method {
    if profile.total() <= 10 && first.resolve() != Method::Oracle {
        Method::Oracle
    } else if first.resolve() != Method::Recurrence {
        Method::Recurrence
    } else {
        Method::Laguerre
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::E {
            profile,
            method,
            check,
            out,
        } => {
            let (value, elapsed) = timed(&out, || e(&profile, method));
            let value = value?;
            let mut report = Report::new(&profile, &value, method.resolve().name(), elapsed);
            if check {
                let other = second_method(&profile, method);
                let again = e(&profile, other)?;
                report = report.checked(other.name(), &again);
                if again != value {
                    report.print(out.format);
                    return Err(Failure::Disagree(format!(
                        "{} gives {value}, {} gives {again}",
                        method.resolve(),
                        other
                    )));
                }
            }
            report.print(out.format);
        }
        Command::Tmne {
            options,
            method,
            out,
        } => {
            let (value, elapsed) = timed(&out, || tmne_max_with(&options, method));
            Report::new(&options, &value?, method.resolve().name(), elapsed).print(out.format);
        }
        Command::B {
            options,
            refined,
            via,
            out,
        } => {
            let (value, elapsed) = timed(&out, || match (refined, via) {
                (true, _) => b_bound_refined(&options),
                (false, BPath::Direct) => b_bound(&options),
                (false, BPath::Subgames) => b_bound_by_subgames(&options),
                (false, BPath::Series) => b_bound_by_series(&options),
            });
            let label = match (refined, via) {
                (true, _) => "refined",
                (false, BPath::Direct) => "direct",
                (false, BPath::Subgames) => "subgames",
                (false, BPath::Series) => "series",
            };
            Report::new(&options, &value?, label, elapsed).print(out.format);
        }
        Command::Bezout { blocks, file, out } => {
            let matrix = match file {
                None => DegreeMatrix::tmne(&blocks),
                Some(path) => read_text(&path)?.parse()?,
            };
            let (value, elapsed) = timed(&out, || bezout_bound(&blocks, &matrix));
            Report::new(&blocks, &value?, "bezout", elapsed).print(out.format);
        }
        Command::Asym {
            family,
            n,
            s,
            profile,
            direction,
            uvw,
            format,
        } => asym(family, n, s, profile, direction, uvw, format)?,
        Command::Verify {
            suite,
            max_n,
            max,
            fixtures,
        } => {
            let fixtures = match fixtures {
                Some(path) => read_text(&path)?,
                None => verify::BUNDLED_FIXTURES.to_string(),
            };
            if !verify::run(suite, max_n, max, &fixtures)? {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Invalid(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn need<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Invalid(format!("family {family} needs --{flag}")))
}

fn asym(
    family: Family,
    n: Option<u32>,
    s: Option<u32>,
    profile: Option<Profile>,
    direction: Option<Profile>,
    uvw: Option<Vec<f64>>,
    format: Format,
) -> Result<(), Failure> {
    let (name, args, estimate, exact): (
        &str,
        serde_json::Value,
        AsymptoticEstimate,
        Option<ExactCount>,
    ) = match family {
        Family::Franel => {
            let n = need(n, "n", "franel")?;
            let exact = e_by_recurrence(&Profile::from(vec![n; 3]));
            (
                "franel",
                json!({ "n": n }),
                asym_diagonal_e(3, n)?,
                Some(exact),
            )
        }
        Family::Diag => {
            let n = need(n, "n", "diag")?;
            let s = need(s, "s", "diag")?;
            let exact = e_by_recurrence(&Profile::from(vec![n; s as usize]));
            (
                "diag",
                json!({ "s": s, "n": n }),
                asym_diagonal_e(s, n)?,
                Some(exact),
            )
        }
        Family::E3 => {
            let p = need(profile, "profile", "e3")?;
            let &[a, b, c] = p.parts() else {
                return Err(Failure::Invalid(
                    "family e3 needs a three-part profile".into(),
                ));
            };
            (
                "e3",
                json!({ "profile": p.parts() }),
                asym_e3(a, b, c)?,
                Some(e_by_recurrence(&p)),
            )
        }
        Family::E4 => {
            let n = need(n, "n", "e4")?;
            // the estimate is indexed by the direction scaled to sum 4
            let (point, exact_parts, index) = match (direction, uvw) {
                (Some(d), None) => {
                    let &[d1, d2, d3, d4] = d.parts() else {
                        return Err(Failure::Invalid("--direction needs four parts".into()));
                    };
                    let dir = [d1, d2, d3, d4];
                    let total: u32 = dir.iter().sum();
                    if dir.contains(&0) || !(n * total).is_multiple_of(4) {
                        return Err(Failure::Invalid(format!(
                            "direction parts must be positive and n * {total} divisible by 4"
                        )));
                    }
                    let point = invert_uvw(dir.map(f64::from))?;
                    let parts: Vec<u32> = dir.iter().map(|x| x * n).collect();
                    (point, Some(parts), n * total / 4)
                }
                (None, Some(v)) => {
                    if v.len() != 3 {
                        return Err(Failure::Invalid("--uvw needs three values u,v,w".into()));
                    }
                    let point = UvwPoint::new(v[0], v[1], v[2])?;
                    let scaled = point.direction().map(|x| x * f64::from(n));
                    let whole = scaled.iter().all(|x| (x - x.round()).abs() < 1e-6);
                    let parts = whole.then(|| {
                        scaled
                            .iter()
                            .map(|x| x.round() as u32)
                            .collect::<Vec<u32>>()
                    });
                    (point, parts, n)
                }
                _ => {
                    return Err(Failure::Invalid(
                        "family e4 needs exactly one of --direction and --uvw".into(),
                    ))
                }
            };
            let exact = exact_parts.map(|p| e_by_recurrence(&Profile::from(p)));
            let args = json!({
                "n": n,
                "u": point.u(), "v": point.v(), "w": point.w(),
                "direction": point.direction(),
            });
            ("e4", args, asym_e4(&point, index)?, exact)
        }
        Family::B => {
            let p = need(profile, "profile", "b")?;
            let exact = b_bound(&p)?;
            (
                "b",
                json!({ "options": p.parts() }),
                asym_b(&p)?,
                Some(exact),
            )
        }
    };
    output::print_asym(name, args, &estimate, exact.as_ref(), format);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Disagree(msg)) => {
            eprintln!("error: methods disagree: {msg}");
            ExitCode::from(EXIT_DISAGREE)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_FAILURE),
    }
}
