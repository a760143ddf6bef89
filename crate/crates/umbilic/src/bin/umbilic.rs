//! Command-line front end: classify groups, construct umbilic surfaces,
//! run the verification suite, and export JSON/CSV reports.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use umbilic::algebra::{NonUnimodularParams, StructureConstants};
use umbilic::classify::{
    classify_nonunimodular, classify_unimodular, exact_branch_conflict_nonunimodular,
    exact_branch_conflict_unimodular, validate_report_json, ClassificationReport,
};
use umbilic::construct::{
    build_invariant_surface, solve_profile_closed, solve_profile_shooting, InvarianceDirection,
};
use umbilic::verify::{run_all, VerifyConfig};
use umbilic::Error;

#[derive(Parser)]
#[command(name = "umbilic", version, about = "Totally umbilical surfaces in 3D metric Lie groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the totally umbilical surfaces of a metric Lie group.
    Classify {
        /// Unimodular structure constants c1 c2 c3.
        #[arg(long, num_args = 3, value_name = "C", allow_hyphen_values = true)]
        unimodular: Option<Vec<f64>>,
        /// Non-unimodular parameters a b.
        #[arg(long, num_args = 2, value_name = "P", allow_hyphen_values = true)]
        nonunimodular: Option<Vec<f64>>,
        /// Reject inputs whose branch conditions hold only up to tolerance.
        #[arg(long)]
        exact: bool,
    },
    /// Construct an umbilic profile and its invariant surface as CSV.
    Construct {
        /// Closed-form profile mode; takes a=<a> lambda=<L> [step=<h>].
        #[arg(long)]
        profile: bool,
        /// Shooting mode in the diag(1, c) model; takes c=<c> [z0=<z>] [step=<h>].
        #[arg(long)]
        shooting: bool,
        /// Output path for the profile CSV; the surface grid goes next to it.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        /// key=value parameters.
        #[arg(value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// Run the verification property suite.
    Verify {
        /// RNG seed (the UMBILIC_SEED environment variable overrides this).
        #[arg(long)]
        seed: Option<u64>,
        /// Sample count for the randomized properties.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Self-test hook: force the named property to fail.
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Emit the classification catalog for the canonical parameter table.
    Report {
        /// Write the JSON catalog here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::RootFindingFailure(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Classify {
            unimodular,
            nonunimodular,
            exact,
        } => cmd_classify(unimodular, nonunimodular, exact),
        Cmd::Construct {
            profile,
            shooting,
            out,
            params,
        } => cmd_construct(profile, shooting, &out, &params),
        Cmd::Verify {
            seed,
            samples,
            corrupt,
        } => Ok(cmd_verify(seed, samples, corrupt)),
        Cmd::Report { out } => cmd_report(out.as_deref()),
    }
}

fn print_report(report: &ClassificationReport) -> Result<(), Error> {
    let value = report.to_json();
    validate_report_json(&value)
        .map_err(|e| Error::ParameterOutOfRange(format!("schema violation: {e}")))?;
    println!("{}", serde_json::to_string_pretty(report).expect("serializable"));
    Ok(())
}

fn cmd_classify(
    unimodular: Option<Vec<f64>>,
    nonunimodular: Option<Vec<f64>>,
    exact: bool,
) -> Result<ExitCode, Error> {
    match (unimodular, nonunimodular) {
        (Some(c), None) => {
            let c = StructureConstants::new(c[0], c[1], c[2]);
            if exact {
                if let Some(conflict) = exact_branch_conflict_unimodular(&c) {
                    return Err(Error::ParameterOutOfRange(format!(
                        "ambiguous branch under --exact: {conflict}"
                    )));
                }
            }
            print_report(&classify_unimodular(&c))?;
            Ok(ExitCode::SUCCESS)
        }
        (None, Some(p)) => {
            let p = NonUnimodularParams::new(p[0], p[1])?;
            if exact {
                if let Some(conflict) = exact_branch_conflict_nonunimodular(&p) {
                    return Err(Error::ParameterOutOfRange(format!(
                        "ambiguous branch under --exact: {conflict}"
                    )));
                }
            }
            print_report(&classify_nonunimodular(&p))?;
            Ok(ExitCode::SUCCESS)
        }
        _ => Err(Error::ParameterOutOfRange(
            "classify requires exactly one of --unimodular c1 c2 c3 or --nonunimodular a b".into(),
        )),
    }
}

fn parse_kv(params: &[String]) -> Result<HashMap<String, f64>, Error> {
    let mut map = HashMap::new();
    for p in params {
        let (key, value) = p.split_once('=').ok_or_else(|| {
            Error::ParameterOutOfRange(format!("expected key=value, got {p:?}"))
        })?;
        let value: f64 = value.parse().map_err(|_| {
            Error::ParameterOutOfRange(format!("invalid numeric value in {p:?}"))
        })?;
        map.insert(key.to_string(), value);
    }
    Ok(map)
}

fn surface_path(profile_path: &Path) -> PathBuf {
    let stem = profile_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "surface".into());
    profile_path.with_file_name(format!("{stem}.surface.csv"))
}

fn cmd_construct(
    profile: bool,
    shooting: bool,
    out: &Path,
    params: &[String],
) -> Result<ExitCode, Error> {
    let kv = parse_kv(params)?;
    let step = kv.get("step").copied().unwrap_or(1e-3);
    let (curve, directions) = if shooting {
        let c = *kv.get("c").ok_or_else(|| {
            Error::ParameterOutOfRange("shooting mode requires c=<c>".into())
        })?;
        let z0 = kv.get("z0").copied().unwrap_or(0.0);
        (
            solve_profile_shooting(c, z0, step, 5.0)?,
            vec![InvarianceDirection::XInvariant],
        )
    } else if profile {
        let a = *kv.get("a").ok_or_else(|| {
            Error::ParameterOutOfRange("profile mode requires a=<a>".into())
        })?;
        let lambda = *kv.get("lambda").ok_or_else(|| {
            Error::ParameterOutOfRange("profile mode requires lambda=<L>".into())
        })?;
        (
            solve_profile_closed(a, lambda, 5.0, step)?,
            vec![
                InvarianceDirection::XInvariant,
                InvarianceDirection::YInvariant,
            ],
        )
    } else {
        return Err(Error::ParameterOutOfRange(
            "construct requires --profile or --shooting".into(),
        ));
    };

    let mut file = File::create(out)
        .map_err(|e| Error::ParameterOutOfRange(format!("cannot create {}: {e}", out.display())))?;
    curve.export_csv(&mut file)?;

    let mut worst = 0.0f64;
    let grid_path = surface_path(out);
    let mut grid_file = File::create(&grid_path).map_err(|e| {
        Error::ParameterOutOfRange(format!("cannot create {}: {e}", grid_path.display()))
    })?;
    for (idx, dir) in directions.iter().enumerate() {
        let patch = build_invariant_surface(&curve, *dir)?;
        if idx == 0 {
            patch.export_grid_csv(24, 24, &mut grid_file)?;
        }
        // interior umbilicity summary, away from the truncated profile ends
        let d = patch.domain;
        for i in 1..10 {
            for j in 1..10 {
                let u = d.u_min + (d.u_max - d.u_min) * (0.05 + 0.9 * i as f64 / 10.0);
                let v = d.v_min + (d.v_max - d.v_min) * (0.05 + 0.9 * j as f64 / 10.0);
                let s = patch.shape_operator(u, v)?;
                worst = worst.max(s.relative_residual());
            }
        }
    }
    println!(
        "wrote {} and {}; max relative umbilicity residual {:.3e}",
        out.display(),
        grid_path.display(),
        worst
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(seed: Option<u64>, samples: usize, corrupt: Option<String>) -> ExitCode {
    let seed = std::env::var("UMBILIC_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .or(seed)
        .unwrap_or(0);
    let cfg = VerifyConfig {
        seed,
        samples,
        corrupt,
    };
    let reports = run_all(&cfg);
    let mut all_pass = true;
    for r in &reports {
        let status = if r.pass() { "PASS" } else { "FAIL" };
        all_pass &= r.pass();
        println!(
            "{status}  {:<38} max violation {:>12.5e}  threshold {:>9.1e}",
            r.name, r.max_violation, r.threshold
        );
    }
    if all_pass {
        println!("all {} properties passed (seed {seed})", reports.len());
        ExitCode::SUCCESS
    } else {
        println!("verification FAILED (seed {seed})");
        ExitCode::from(1)
    }
}

/// The canonical catalog: the six unimodular group-table rows plus
/// representative non-unimodular parameters, one report each.
fn catalog() -> Vec<ClassificationReport> {
    let uni = [
        (1.0, 1.0, 1.0),
        (1.0, 1.0, -1.0),
        (1.0, 1.0, 0.0),
        (1.0, 0.0, -1.0),
        (1.0, 0.0, 0.0),
        (0.0, 0.0, 0.0),
        (2.0, 1.0, -1.0),
    ];
    let nonuni = [(0.0, 0.7), (1.0, 0.0), (0.5, 0.0), (0.5, 1.0), (1.0, 0.5)];
    let mut out = Vec::new();
    for (c1, c2, c3) in uni {
        out.push(classify_unimodular(&StructureConstants::new(c1, c2, c3)));
    }
    for (a, b) in nonuni {
        out.push(classify_nonunimodular(
            &NonUnimodularParams::new(a, b).expect("catalog parameters are valid"),
        ));
    }
    out
}

fn cmd_report(out: Option<&Path>) -> Result<ExitCode, Error> {
    let reports = catalog();
    for r in &reports {
        validate_report_json(&r.to_json())
            .map_err(|e| Error::ParameterOutOfRange(format!("schema violation: {e}")))?;
    }
    let text = serde_json::to_string_pretty(&reports).expect("serializable");
    match out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| {
                Error::ParameterOutOfRange(format!("cannot create {}: {e}", path.display()))
            })?;
            f.write_all(text.as_bytes())
                .and_then(|_| f.write_all(b"\n"))
                .map_err(|e| Error::ParameterOutOfRange(format!("write failed: {e}")))?;
            println!("wrote {} reports to {}", reports.len(), path.display());
        }
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
