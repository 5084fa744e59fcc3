//! `confun`: check complexes for the local obstructions, evaluate
//! characteristic numbers, generate witnesses, and analyse polynomial
//! operators. Reports are JSON on stdout.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use confun::invariants::{
    char_number, check_space, link_report_from_profile, BaseProfile, CharIndex, Invariant,
    InvariantError, LinkReport, Mode, NonzeroSet, DEFAULT_CAP,
};
use confun::io::{ComplexFile, Loaded};
use confun::polyops::{binomial_decompose, in_8a, in_script_p, in_script_p_recursive, mod8_reduce, Polynomial};
use confun::witness::{generate_witness, WitnessError};

#[derive(Parser)]
#[command(name = "confun", version, about = "Local obstructions for real algebraic sets on simplicial complexes")]
struct Cli {
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Base,
    Extended,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Base => Mode::Base,
            ModeArg::Extended => Mode::Extended,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyAction {
    Check,
    Decompose,
    Mod8,
}

#[derive(Subcommand)]
enum Command {
    /// Euler conditions, depth-two numbers and characteristic numbers of a complex.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "extended")]
        mode: ModeArg,
        /// Largest nonzero set listed in full.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// One characteristic number, e.g. `--index extended:82`.
    Charnum {
        file: PathBuf,
        #[arg(long)]
        index: String,
    },
    /// All nonzero characteristic numbers.
    Charnums {
        file: PathBuf,
        #[arg(long)]
        nonzero: bool,
        #[arg(long, value_enum, default_value = "extended")]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Build and verify a complex on which only the given invariant is odd.
    Witness {
        /// `chi` or `<base|extended>:<hex mask>`.
        #[arg(long)]
        index: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Operator-ring membership, binomial coordinates, or mod-8 reduction.
    Poly {
        #[arg(value_enum)]
        action: PolyAction,
        /// Coefficients lowest degree first, e.g. `0,0,-1/2,0,1/2`.
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Run the property suites on generated corpora.
    Selftest {
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// 0 pass, 1 obstruction found, 2 input error, 3 internal verification failure.
enum Outcome {
    Pass,
    Obstruction,
    Input,
    Verification,
}

impl Outcome {
    fn code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Obstruction => 1,
            Outcome::Input => 2,
            Outcome::Verification => 3,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Obstruction => "obstruction",
            Outcome::Input => "input error",
            Outcome::Verification => "verification failure",
        }
    }
}

struct Failure {
    outcome: Outcome,
    message: String,
}

fn input(message: impl ToString) -> Failure {
    Failure {
        outcome: Outcome::Input,
        message: message.to_string(),
    }
}

type Run = Result<(Outcome, Value), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (outcome, mut report) = match run(&cli.command) {
        Ok(r) => r,
        Err(f) => {
            let body = json!({ "error": f.message });
            (f.outcome, body)
        }
    };
    let obj = report.as_object_mut().expect("reports are objects");
    let mut full = serde_json::Map::new();
    full.insert("command".into(), echo(&cli.command));
    full.insert("outcome".into(), outcome.name().into());
    full.append(obj);
    if cli.timing {
        full.insert("timing_ms".into(), json!(start.elapsed().as_millis() as u64));
    }
    let text = serde_json::to_string_pretty(&Value::Object(full)).expect("json");
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(outcome.code())
}

fn echo(c: &Command) -> Value {
    match c {
        Command::Check { file, mode, cap } => {
            json!({"name": "check", "file": file, "mode": Mode::from(*mode).tag(), "cap": cap})
        }
        Command::Charnum { file, index } => json!({"name": "charnum", "file": file, "index": index}),
        Command::Charnums { file, mode, cap, .. } => {
            json!({"name": "charnums", "file": file, "mode": Mode::from(*mode).tag(), "cap": cap})
        }
        Command::Witness { index, output } => json!({"name": "witness", "index": index, "output": output}),
        Command::Poly { action, coeffs } => {
            let a = match action {
                PolyAction::Check => "check",
                PolyAction::Decompose => "decompose",
                PolyAction::Mod8 => "mod8",
            };
            json!({"name": "poly", "action": a, "coeffs": coeffs})
        }
        Command::Selftest { size, seed } => json!({"name": "selftest", "size": size, "seed": seed}),
    }
}

fn run(c: &Command) -> Run {
    match c {
        Command::Check { file, mode, cap } => check(file, (*mode).into(), *cap),
        Command::Charnum { file, index } => charnum(file, index),
        Command::Charnums { file, nonzero, mode, cap } => charnums(file, *nonzero, (*mode).into(), *cap),
        Command::Witness { index, output } => witness(index, output),
        Command::Poly { action, coeffs } => poly(*action, coeffs),
        Command::Selftest { size, seed } => selftest(*size, *seed),
    }
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    ComplexFile::parse(&text)
        .and_then(|f| f.load())
        .map_err(|e| input(format!("{}: {e}", path.display())))
}

fn invariant_failure(e: InvariantError) -> Failure {
    match e {
        InvariantError::Dimension(..) | InvariantError::MalformedIndex(_) | InvariantError::MaskRange { .. } | InvariantError::NoNBit(_) => input(e),
        _ => Failure {
            outcome: Outcome::Obstruction,
            message: e.to_string(),
        },
    }
}

fn nonzero_json(n: &NonzeroSet) -> Value {
    json!({
        "count": n.count,
        "novel_count": n.novel_count,
        "cap": n.cap,
        "truncated": n.indices.is_none(),
        "indices": n.indices.as_ref().map(|l| l.iter().map(|i| i.to_string()).collect::<Vec<_>>()),
        "masks": n.masks.iter().map(|m| format!("{m:x}")).collect::<Vec<_>>(),
    })
}

/// Human-readable list of what failed.
fn failures(r: &LinkReport) -> Vec<String> {
    let mut out = Vec::new();
    let names = ["1", "φβ", "φγ", "βγ", "φβγ"];
    for (ok, name) in r.euler.as_array().iter().zip(names) {
        if !ok {
            out.push(format!("euler condition for {name}"));
        }
    }
    if let Some(d) = &r.depth_two {
        if d.chi_odd {
            out.push("χ is odd".into());
        }
        for (odd, name) in d.integrals_odd.iter().zip(&names[1..]) {
            if *odd {
                out.push(format!("∫{name} dχ is odd"));
            }
        }
    }
    if let Some(n) = &r.nonzero {
        match &n.indices {
            Some(list) => out.extend(list.iter().filter(|i| i.is_novel()).map(|i| format!("a({i}) = 1"))),
            None => out.push(format!("{} nonzero characteristic numbers", n.count)),
        }
    }
    out
}

fn link_json(r: &LinkReport) -> Value {
    json!({
        "euler_characteristic": r.euler_characteristic,
        "euler": r.euler,
        "half_link_phi_zero": r.half_link_phi_zero,
        "base_integral": r.base_integral,
        "depth_two": r.depth_two,
        "nonzero": r.nonzero.as_ref().map(nonzero_json),
        "failures": failures(r),
        "passes": r.passes,
    })
}

fn check(file: &Path, mode: Mode, cap: u64) -> Run {
    let l = load(file)?;
    let k = l.complex.clone();
    let mut report = json!({
        "name": l.name,
        "dim": k.dim(),
        "f_vector": k.f_vector(),
    });
    let passes = match k.dim() {
        d if d > 4 => return Err(input(format!("dimension {d} > 4"))),
        4 => {
            let s = check_space(&k, cap).map_err(invariant_failure)?;
            let points: Vec<Value> = s
                .failures
                .iter()
                .map(|p| json!({"simplex": p.simplex, "link": link_json(&p.base), "extended_passes": p.extended_passes}))
                .collect();
            report["points_checked"] = json!(s.points_checked);
            report["failing_points"] = json!(points);
            s.passes
        }
        _ => {
            let p = BaseProfile::new(k.clone()).map_err(invariant_failure)?;
            let r = link_report_from_profile(&p, mode, cap);
            report["link"] = link_json(&r);
            r.passes
        }
    };
    if let Some(phi) = &l.function {
        report["function"] = json!({
            "integral": phi.euler_integral(),
            "integer_valued": phi.is_integer_valued(),
            "euler": phi.is_euler().ok(),
            "in_ideal_i": phi.in_ideal_i().ok(),
            "half_link_zero": phi.half_link().values().iter().all(|v| v.is_zero()),
        });
    }
    report["passes"] = json!(passes);
    Ok((if passes { Outcome::Pass } else { Outcome::Obstruction }, report))
}

fn profile(l: &Loaded) -> Result<BaseProfile, Failure> {
    if l.complex.dim() > 3 {
        return Err(input(format!(
            "characteristic numbers are taken on links, of dimension ≤ 3; this complex has dimension {}",
            l.complex.dim()
        )));
    }
    BaseProfile::new(l.complex.clone()).map_err(invariant_failure)
}

fn charnum(file: &Path, index: &str) -> Run {
    let idx: CharIndex = index.parse().map_err(input)?;
    let l = load(file)?;
    let p = profile(&l)?;
    let v = char_number(&p, idx).map_err(invariant_failure)?;
    Ok((
        Outcome::Pass,
        json!({
            "name": l.name,
            "index": idx,
            "factors": idx.factor_names(),
            "novel": idx.is_novel(),
            "value": u8::from(v),
        }),
    ))
}

fn charnums(file: &Path, nonzero: bool, mode: Mode, cap: u64) -> Run {
    if !nonzero {
        return Err(input("only `--nonzero` enumeration is supported; use `charnum` for one index"));
    }
    let l = load(file)?;
    let p = profile(&l)?;
    let n = confun::invariants::nonzero_char_numbers(&p, mode, cap).map_err(invariant_failure)?;
    Ok((Outcome::Pass, json!({"name": l.name, "nonzero": nonzero_json(&n)})))
}

fn witness(index: &str, output: &Path) -> Run {
    let target: Invariant = index.parse().map_err(input)?;
    let w = generate_witness(target).map_err(|e| match e {
        WitnessError::TrivialIndex(_) | WitnessError::UnknownBlock(_) => input(e),
        e => Failure {
            outcome: Outcome::Verification,
            message: e.to_string(),
        },
    })?;
    let provenance = serde_json::to_value(&w.provenance).expect("provenance serializes");
    let file = ComplexFile::from_complex(&format!("witness {target}"), &w.complex, None)
        .with_provenance(provenance.clone());
    std::fs::write(output, file.to_text()).map_err(|e| input(format!("{}: {e}", output.display())))?;
    Ok((
        Outcome::Pass,
        json!({
            "target": target.to_string(),
            "output": output,
            "f_vector": w.complex.f_vector(),
            "euler_characteristic": w.complex.euler_characteristic(),
            "verification": provenance["verification"],
        }),
    ))
}

fn poly(action: PolyAction, coeffs: &str) -> Run {
    let p = Polynomial::parse_coefficients(coeffs).map_err(input)?;
    let report = match action {
        PolyAction::Check => {
            let fast = in_script_p(&p);
            let slow = in_script_p_recursive(&p);
            if fast != slow {
                return Err(Failure {
                    outcome: Outcome::Verification,
                    message: format!("membership tests disagree on {p}"),
                });
            }
            json!({
                "polynomial": p.to_string(),
                "integer_valued": binomial_decompose(&p).is_ok(),
                "in_script_p": fast,
                "in_8a": in_8a(&p),
            })
        }
        PolyAction::Decompose => {
            let d = binomial_decompose(&p).map_err(input)?;
            json!({
                "polynomial": p.to_string(),
                "binomial_coordinates": d.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "in_script_p": in_script_p(&p),
            })
        }
        PolyAction::Mod8 => {
            let r = mod8_reduce(&p).map_err(input)?;
            json!({
                "polynomial": p.to_string(),
                "generators": ["1", "t", "t^2-t", "t^3-t", "P4", "P5"],
                "coordinates": r.coords,
                "residual": r.residual.to_string(),
                "residual_in_8a": in_8a(&r.residual),
            })
        }
    };
    Ok((Outcome::Pass, report))
}

fn selftest(size: usize, seed: u64) -> Run {
    let r = confun::selftest::run(size, seed);
    let outcome = if r.passes { Outcome::Pass } else { Outcome::Verification };
    Ok((outcome, serde_json::to_value(&r).expect("report serializes")))
}
