//! Command-line front end: load instance documents, run classification,
//! region/sum-rate evaluation, noisy-interference certification, numerical
//! radius computations and the bundled example reproductions.
//!
//! Exit codes: 0 on success, 1 on domain infeasibility (the requested
//! regime's conditions fail — output still carries the formula value tagged
//! as not proven capacity), 2 on input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use icap_core::capacity::{
    aligned_strong_region, mixed_sum_capacity, noisy_sum_capacity, very_strong_region, RateRegion,
};
use icap_core::channel::{load_instance, matrix_from_str, matrix_from_value, ChannelInstance};
use icap_core::matlib::{numerical_radius_detailed, CMatrix, ToleranceConfig};
use icap_core::regimes::{check_noisy_two_sided, classify, Regime, RegimeReport};
use icap_core::verify::{run_all_examples, run_example};

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Parser)]
#[command(
    name = "icap",
    about = "Regime classification and capacity evaluation for two-user vector Gaussian interference channels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Eigenvalue nonnegativity slack for semidefinite tests.
    #[arg(long = "tol-eig", global = true)]
    tol_eig: Option<f64>,
    /// Relative residual for matrix equality tests (env: ICAP_TOL_EQ).
    #[arg(long = "tol-eq", global = true)]
    tol_eq: Option<f64>,
    /// Angle samples for the numerical-radius grid.
    #[arg(long = "radius-grid", global = true)]
    radius_grid: Option<usize>,
    /// Rate units for rendered values.
    #[arg(long, value_enum, default_value = "nats", global = true)]
    units: Units,
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    output: Output,
    /// JSON file with offset overrides {"B1": [...], "B2": [...]}.
    #[arg(long = "offset-b", global = true)]
    offset_b: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Nats,
    Bits,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all regime verdicts for an instance document.
    Classify { input: PathBuf },
    /// Compute the capacity region for the strongest satisfied region
    /// regime (or a chosen one).
    Region {
        input: PathBuf,
        /// Force a region family instead of choosing by classification.
        #[arg(long, value_enum)]
        regime: Option<RegionChoice>,
        /// Emit the vertex polyline as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Compute the sum-rate capacity for the first satisfied sum-rate
    /// regime.
    Sumrate { input: PathBuf },
    /// Construct the noisy-interference certificate (alignment matrices,
    /// radii, fixed-point solutions).
    Riccati { input: PathBuf },
    /// Numerical radius of a single matrix file.
    Radius {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Reproduce one bundled example (1..=5).
    Example { id: usize },
    /// Reproduce all bundled examples and write verify-report.json.
    VerifyAll {
        /// Destination of the machine-readable report.
        #[arg(long, default_value = "verify-report.json")]
        report_path: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionChoice {
    VeryStrong,
    AlignedStrong,
}

fn main() -> ExitCode {
    // Die quietly on closed pipes (e.g. `icap ... | head`) instead of
    // panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.message);
            ExitCode::from(2)
        }
    }
}

struct CliError {
    code: &'static str,
    message: String,
}

fn input_error(code: &'static str, message: impl Into<String>) -> CliError {
    CliError {
        code,
        message: message.into(),
    }
}

fn tolerances(opts: &GlobalOpts) -> Result<ToleranceConfig, CliError> {
    let mut tol = ToleranceConfig::default();
    if let Ok(v) = std::env::var("ICAP_TOL_EQ") {
        tol.eq_tol = v
            .parse()
            .map_err(|_| input_error("E_TOL", "ICAP_TOL_EQ is not a number"))?;
    }
    if let Some(v) = opts.tol_eig {
        tol.eig_floor = v;
    }
    if let Some(v) = opts.tol_eq {
        tol.eq_tol = v;
    }
    if let Some(v) = opts.radius_grid {
        tol.radius_grid = v;
    }
    tol.validate().map_err(|m| input_error("E_TOL", m))?;
    Ok(tol)
}

fn read_instance(path: &PathBuf, tol: &ToleranceConfig) -> Result<ChannelInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error("E_IO", format!("{}: {e}", path.display())))?;
    load_instance(&text, tol).map_err(|e| input_error("E_INPUT", e.to_string()))
}

fn read_offsets(opts: &GlobalOpts) -> Result<(Option<CMatrix>, Option<CMatrix>), CliError> {
    let Some(path) = &opts.offset_b else {
        return Ok((None, None));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error("E_IO", format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| input_error("E_INPUT", e.to_string()))?;
    let map = value
        .as_object()
        .ok_or_else(|| input_error("E_INPUT", "offset file must be a JSON object"))?;
    let get = |key: &str| -> Result<Option<CMatrix>, CliError> {
        map.get(key)
            .map(|v| matrix_from_value(v, key).map_err(|e| input_error("E_INPUT", e.to_string())))
            .transpose()
    };
    Ok((get("B1")?, get("B2")?))
}

/// Convert a nats value for display in the selected units.
fn display_rate(value: f64, units: Units) -> f64 {
    match units {
        Units::Nats => value,
        Units::Bits => value / LN2,
    }
}

fn unit_label(units: Units) -> &'static str {
    match units {
        Units::Nats => "nats",
        Units::Bits => "bits",
    }
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let tol = tolerances(&cli.opts)?;
    match &cli.command {
        Command::Classify { input } => cmd_classify(input, &cli.opts, &tol),
        Command::Region { input, regime, csv } => cmd_region(input, *regime, *csv, &cli.opts, &tol),
        Command::Sumrate { input } => cmd_sumrate(input, &cli.opts, &tol),
        Command::Riccati { input } => cmd_riccati(input, &cli.opts, &tol),
        Command::Radius { matrix } => cmd_radius(matrix, &cli.opts, &tol),
        Command::Example { id } => cmd_example(*id, &cli.opts, &tol),
        Command::VerifyAll { report_path } => cmd_verify_all(report_path, &cli.opts, &tol),
    }
}

fn cmd_classify(
    input: &PathBuf,
    opts: &GlobalOpts,
    tol: &ToleranceConfig,
) -> Result<ExitCode, CliError> {
    let inst = read_instance(input, tol)?;
    let report = classify(&inst, tol).map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
    match opts.output {
        Output::Json => print_json(&report.to_json()),
        Output::Table => {
            println!("{:<18} {:<26} {:>14}", "regime", "verdict", "margin");
            for (regime, v) in &report.verdicts {
                println!(
                    "{:<18} {:<26} {:>14}  {}",
                    regime.name(),
                    v.satisfaction.label(),
                    v.margin
                        .map(|m| format!("{m:.6e}"))
                        .unwrap_or_else(|| "-".into()),
                    v.note.as_deref().unwrap_or("")
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn region_json(region: &RateRegion, units: Units, capacity: bool, family: &str) -> Value {
    let mut v = region.to_json();
    let obj = v.as_object_mut().unwrap();
    obj.insert("family".into(), json!(family));
    obj.insert("is_capacity_region".into(), json!(capacity));
    obj.insert("units".into(), json!("nats"));
    if units == Units::Bits {
        let bounds_bits: Vec<Value> = region
            .bounds
            .iter()
            .map(|b| {
                json!({
                    "coeffs": [b.coeffs.0, b.coeffs.1],
                    "limit": b.limit / LN2,
                })
            })
            .collect();
        let vertices_bits: Vec<Value> = region
            .vertices
            .iter()
            .map(|(a, b)| json!([a / LN2, b / LN2]))
            .collect();
        obj.insert("bounds_bits".into(), Value::Array(bounds_bits));
        obj.insert("vertices_bits".into(), Value::Array(vertices_bits));
    }
    v
}

fn cmd_region(
    input: &PathBuf,
    choice: Option<RegionChoice>,
    csv: bool,
    opts: &GlobalOpts,
    tol: &ToleranceConfig,
) -> Result<ExitCode, CliError> {
    let inst = read_instance(input, tol)?;
    let report = classify(&inst, tol).map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
    let aligned_ok =
        report.is_satisfied(Regime::AlignedStrong) || report.is_satisfied(Regime::AlignedStrongZ);
    let very_ok =
        report.is_satisfied(Regime::VeryStrong) || report.is_satisfied(Regime::VeryStrongZ);
    let compute = |c: RegionChoice| -> Result<RateRegion, CliError> {
        match c {
            RegionChoice::VeryStrong => {
                very_strong_region(&inst, tol).map_err(|e| input_error("E_COMPUTE", e.to_string()))
            }
            RegionChoice::AlignedStrong => aligned_strong_region(&inst, tol)
                .map_err(|e| input_error("E_COMPUTE", e.to_string())),
        }
    };
    let (family, region, capacity) = match choice {
        Some(RegionChoice::VeryStrong) => (
            "very-strong-rectangle",
            compute(RegionChoice::VeryStrong)?,
            very_ok,
        ),
        Some(RegionChoice::AlignedStrong) => (
            "aligned-strong-pentagon",
            compute(RegionChoice::AlignedStrong)?,
            aligned_ok,
        ),
        None => {
            if aligned_ok {
                (
                    "aligned-strong-pentagon",
                    compute(RegionChoice::AlignedStrong)?,
                    true,
                )
            } else if very_ok {
                (
                    "very-strong-rectangle",
                    compute(RegionChoice::VeryStrong)?,
                    true,
                )
            } else {
                (
                    "aligned-strong-pentagon",
                    compute(RegionChoice::AlignedStrong)?,
                    false,
                )
            }
        }
    };

    if csv {
        println!("R1,R2");
        for (r1, r2) in &region.vertices {
            println!(
                "{},{}",
                display_rate(*r1, opts.units),
                display_rate(*r2, opts.units)
            );
        }
    } else {
        match opts.output {
            Output::Json => print_json(&region_json(&region, opts.units, capacity, family)),
            Output::Table => {
                println!(
                    "{family} ({}){}",
                    unit_label(opts.units),
                    if capacity {
                        ""
                    } else {
                        "  [formula value, not proven capacity]"
                    }
                );
                for b in &region.bounds {
                    let expr = match b.coeffs {
                        (1, 0) => "R1",
                        (0, 1) => "R2",
                        _ => "R1+R2",
                    };
                    println!("  {expr} <= {:.6}", display_rate(b.limit, opts.units));
                }
                println!("  vertices:");
                for (r1, r2) in &region.vertices {
                    println!(
                        "    ({:.6}, {:.6})",
                        display_rate(*r1, opts.units),
                        display_rate(*r2, opts.units)
                    );
                }
            }
        }
    }
    Ok(if capacity {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// (formula name, value in nats, components, is proven capacity).
type SumRateChoice = (String, f64, Vec<(String, f64)>, bool);

fn sum_rate_choice(
    inst: &ChannelInstance,
    report: &RegimeReport,
    tol: &ToleranceConfig,
) -> Result<SumRateChoice, CliError> {
    // Precedence: noisy (exact TIN formulas), mixed, aligned strong, very
    // strong. All satisfied regimes agree on the sum capacity; the first
    // satisfied one supplies the formula.
    if report.is_satisfied(Regime::NoisyZ) || report.is_satisfied(Regime::NoisyTwoSided) {
        let instance = if inst.is_mirror_zic() {
            inst.swap_users()
        } else {
            inst.clone()
        };
        let c = noisy_sum_capacity(&instance, tol)
            .map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
        return Ok((c.formula.name().to_string(), c.value, c.components, true));
    }
    if report.is_satisfied(Regime::MixedAligned) {
        let mirrored = report
            .verdict(Regime::MixedAligned)
            .and_then(|v| v.note.as_deref())
            .map(|n| n.contains("mirrored"))
            .unwrap_or(false);
        let instance = if mirrored {
            inst.swap_users()
        } else {
            inst.clone()
        };
        let c = mixed_sum_capacity(&instance, tol)
            .map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
        return Ok((c.formula.name().to_string(), c.value, c.components, true));
    }
    if report.is_satisfied(Regime::AlignedStrong) || report.is_satisfied(Regime::AlignedStrongZ) {
        let region = aligned_strong_region(inst, tol)
            .map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
        let value = region.max_sum_rate();
        return Ok((
            "aligned-strong-region-sum".to_string(),
            value,
            vec![("max R1+R2 over region".to_string(), value)],
            true,
        ));
    }
    if report.is_satisfied(Regime::VeryStrong) || report.is_satisfied(Regime::VeryStrongZ) {
        let region =
            very_strong_region(inst, tol).map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
        let value = region.max_sum_rate();
        return Ok((
            "interference-free-rectangle-sum".to_string(),
            value,
            vec![("max R1+R2 over rectangle".to_string(), value)],
            true,
        ));
    }
    // No regime satisfied: report the TIN formula value, tagged.
    let instance = if inst.is_mirror_zic() {
        inst.swap_users()
    } else {
        inst.clone()
    };
    let c =
        noisy_sum_capacity(&instance, tol).map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
    Ok((c.formula.name().to_string(), c.value, c.components, false))
}

fn cmd_sumrate(
    input: &PathBuf,
    opts: &GlobalOpts,
    tol: &ToleranceConfig,
) -> Result<ExitCode, CliError> {
    let inst = read_instance(input, tol)?;
    let report = classify(&inst, tol).map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
    let (formula, value, components, capacity) = sum_rate_choice(&inst, &report, tol)?;
    match opts.output {
        Output::Json => {
            let comps: Vec<Value> = components
                .iter()
                .map(|(k, v)| json!({"name": k, "value_nats": v}))
                .collect();
            let mut obj = Map::new();
            obj.insert("value_nats".into(), json!(value));
            if opts.units == Units::Bits {
                obj.insert("value_bits".into(), json!(value / LN2));
            }
            obj.insert("formula".into(), json!(formula));
            obj.insert("is_capacity".into(), json!(capacity));
            obj.insert("components".into(), Value::Array(comps));
            obj.insert(
                "satisfied_regimes".into(),
                Value::Array(
                    report
                        .satisfied_regimes()
                        .iter()
                        .map(|r| json!(r.name()))
                        .collect(),
                ),
            );
            print_json(&Value::Object(obj));
        }
        Output::Table => {
            println!(
                "sum rate: {:.6} {} [{}]{}",
                display_rate(value, opts.units),
                unit_label(opts.units),
                formula,
                if capacity {
                    ""
                } else {
                    "  [formula value, not proven capacity]"
                }
            );
            for (name, v) in &components {
                println!("  {name}: {:.6}", display_rate(*v, opts.units));
            }
        }
    }
    Ok(if capacity {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_riccati(
    input: &PathBuf,
    opts: &GlobalOpts,
    tol: &ToleranceConfig,
) -> Result<ExitCode, CliError> {
    let inst = read_instance(input, tol)?;
    let (b1, b2) = read_offsets(opts)?;
    let (verdict, cert) = check_noisy_two_sided(&inst, b1.as_ref(), b2.as_ref(), tol)
        .map_err(|e| input_error("E_COMPUTE", e.to_string()))?;
    match opts.output {
        Output::Json => {
            let mut v = cert.to_json();
            v.as_object_mut()
                .unwrap()
                .insert("verdict".into(), json!(verdict.satisfaction.label()));
            print_json(&v);
        }
        Output::Table => {
            println!(
                "noisy-interference certificate: {}",
                verdict.satisfaction.label()
            );
            for (k, val) in &verdict.metrics {
                println!("  {k}: {val:.6}");
            }
            if let Some(n) = &verdict.note {
                println!("  note: {n}");
            }
        }
    }
    Ok(if verdict.satisfaction.is_satisfied() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_radius(
    matrix: &PathBuf,
    opts: &GlobalOpts,
    tol: &ToleranceConfig,
) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(matrix)
        .map_err(|e| input_error("E_IO", format!("{}: {e}", matrix.display())))?;
    let m = matrix_from_str(&text).map_err(|e| input_error("E_INPUT", e.to_string()))?;
    let est =
        numerical_radius_detailed(&m, tol).map_err(|e| input_error("E_INPUT", e.to_string()))?;
    match opts.output {
        Output::Json => print_json(&json!({
            "radius": est.value,
            "bracket_width": est.bracket_width,
        })),
        Output::Table => println!(
            "numerical radius: {:.9} (bracket width {:.2e})",
            est.value, est.bracket_width
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_example(id: usize, opts: &GlobalOpts, tol: &ToleranceConfig) -> Result<ExitCode, CliError> {
    let report = run_example(id, tol).map_err(|e| input_error("E_INPUT", e.to_string()))?;
    match opts.output {
        Output::Json => print_json(&report.to_json()),
        Output::Table => print!("{}", report.render_table()),
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_verify_all(
    report_path: &PathBuf,
    opts: &GlobalOpts,
    tol: &ToleranceConfig,
) -> Result<ExitCode, CliError> {
    let reports = run_all_examples(tol).map_err(|e| input_error("E_INPUT", e.to_string()))?;
    let all_pass = reports.iter().all(|r| r.pass);
    let json_report = json!({
        "all_pass": all_pass,
        "examples": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    std::fs::write(
        report_path,
        serde_json::to_string_pretty(&json_report).expect("serializable"),
    )
    .map_err(|e| input_error("E_IO", format!("{}: {e}", report_path.display())))?;
    match opts.output {
        Output::Json => print_json(&json_report),
        Output::Table => {
            for r in &reports {
                print!("{}", r.render_table());
            }
            println!(
                "overall: {} (report written to {})",
                if all_pass { "PASS" } else { "FAIL" },
                report_path.display()
            );
        }
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
