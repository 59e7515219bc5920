use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use mees_core::linalg::{fidelity, verify_unitary, ComplexMatrix};
use mees_core::model::{mees_from_beta, schmidt_entropy, solve_beta_g, MeesSolution};
use mees_core::montecarlo::{
    run_scatter, sample_haar_full, sample_rng, sample_schmidt, scan_mees_curve, uniform_grid, CurveScan, Histogram2D,
    Measure, SamplerConfig, Scatter,
};
use mees_core::synthesis::{build_us, build_us_general, compose_tilde, global_plan, GatePlan, MssgKind};
use mees_core::thermal::{
    closed_form_report, ground_state, interaction_hamiltonian, report_global_unitary_dense, report_simple,
    v_strength, ProtocolReport, Target,
};
use mees_core::{ApproachKind, BipartiteSystem, DensePureState, Error, SchmidtState};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    HamiltonianArgs, MeesArgs, MonteCarloArgs, OperatorArg, OutArgs, ScanArgs, SynthArgs, SystemArgs, TargetArgs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    Check(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Io(m) => f.write_str(m),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_system(args: &SystemArgs) -> CliResult<BipartiteSystem> {
    match (&args.spectra, &args.system_file) {
        (Some(s), None) => Ok(BipartiteSystem::from_inline(s)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(BipartiteSystem::from_json(&text)?)
        }
        _ => Err(CliError::Usage("give exactly one of --spectra or --system-file".into())),
    }
}

fn out_dir(out: &OutArgs) -> CliResult<Option<PathBuf>> {
    match &out.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn config<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

fn system_json(system: &BipartiteSystem) -> Value {
    json!({ "spectra": system.to_file(), "swapped": system.swapped() })
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",")
}

fn phases_for(n: usize, phases: &Option<Vec<f64>>) -> Vec<f64> {
    phases.clone().unwrap_or_else(|| vec![0.0; n])
}

fn resolve_target(system: &BipartiteSystem, t: &TargetArgs) -> CliResult<Target> {
    let n = system.n_a();
    let with_phases = |s: SchmidtState| -> CliResult<Target> {
        match &t.phases {
            Some(p) => Ok(Target::Schmidt(s.with_phases(p.clone())?)),
            None => Ok(Target::Schmidt(s)),
        }
    };
    if let Some(w) = &t.weights {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() }.into());
        }
        return Ok(Target::Schmidt(SchmidtState::new(w.clone(), phases_for(n, &t.phases))?));
    }
    if let Some(e) = t.entanglement {
        return with_phases(solve_beta_g(system, e)?.state);
    }
    if let Some(b) = t.beta_g {
        return with_phases(mees_from_beta(system, b)?.state);
    }
    if let Some(seed) = t.random_target {
        let mut rng = sample_rng(seed, 0);
        return Ok(match Measure::from(t.measure) {
            Measure::HaarSchmidt => Target::Schmidt(sample_schmidt(system, &mut rng)),
            Measure::HaarFull => Target::Dense(sample_haar_full(system, &mut rng)),
        });
    }
    Err(CliError::Usage("a target is required: --weights, --entanglement, --beta-g or --random-target".into()))
}

fn target_json(target: &Target) -> Value {
    match target {
        Target::Schmidt(s) => json!({ "weights": s.weights, "phases": s.phases }),
        Target::Dense(d) => dense_json(d),
    }
}

fn dense_json(d: &DensePureState) -> Value {
    json!({ "amplitudes": d.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>() })
}

pub fn mees(args: &MeesArgs) -> CliResult<()> {
    let system = load_system(&args.system)?;
    let sol: MeesSolution = match (args.entanglement, args.beta_g) {
        (Some(e), None) => solve_beta_g(&system, e)?,
        (None, Some(b)) => mees_from_beta(&system, b)?,
        _ => return Err(CliError::Usage("give exactly one of --entanglement or --beta-g".into())),
    };
    let entanglement = schmidt_entropy(&sol.state);
    println!("beta_g = {:.16e}", sol.beta_g);
    println!("z_g = {:.16e}", sol.z_g);
    println!("e_g = {:.16e}", sol.e_g);
    println!("entanglement = {entanglement:.16e}");
    println!("weights = {}", fmt_list(&sol.state.weights));
    if let Some(dir) = out_dir(&args.out)? {
        let value = json!({
            "config": config(args),
            "system": system_json(&system),
            "beta_g": sol.beta_g,
            "z_g": sol.z_g,
            "e_g": sol.e_g,
            "entanglement": entanglement,
            "state": sol.state,
        });
        write_json(&dir.join("mees.json"), &value)?;
    }
    Ok(())
}

pub fn synth(args: &SynthArgs) -> CliResult<()> {
    let system = load_system(&args.system)?;
    let target = resolve_target(&system, &args.target)?;
    let (u, plan): (ComplexMatrix, Option<GatePlan>) = match (&target, args.operator) {
        (Target::Schmidt(s), OperatorArg::Us) => (build_us(&system, s)?, Some(global_plan(s)?)),
        (Target::Dense(d), OperatorArg::Us) => (build_us_general(&system, d)?, None),
        (Target::Schmidt(s), op) => {
            let kind = if op == OperatorArg::Ua { MssgKind::A } else { MssgKind::B };
            let (u, plan) = compose_tilde(kind, &system, s)?;
            (u, Some(plan))
        }
        (Target::Dense(_), _) => {
            return Err(Error::InvalidState("UA and UB need a Schmidt-form target".into()).into());
        }
    };
    let want = target.dense(&system)?;
    let prepared = u.apply(DensePureState::basis(&system, 0, 0).amplitudes());
    let fid = fidelity(&prepared, want.amplitudes());
    let deviation = verify_unitary(&u).max();
    println!("operator = {}", args.operator.name());
    println!("fidelity = {fid:.16e}");
    println!("unitarity_deviation = {deviation:.16e}");
    if let Some(dir) = out_dir(&args.out)? {
        let value = json!({
            "config": config(args),
            "system": system_json(&system),
            "operator": args.operator,
            "target": target_json(&target),
            "unitary": u,
            "gate_plan": plan,
            "fidelity": fid,
            "unitarity_deviation": deviation,
        });
        write_json(&dir.join("unitary.json"), &value)?;
    }
    Ok(())
}

fn closed_report(approach: ApproachKind, system: &BipartiteSystem, target: &Target, eps: f64) -> Option<ProtocolReport> {
    match target {
        Target::Schmidt(s) => closed_form_report(approach, system, s, eps).ok(),
        Target::Dense(d) => match approach {
            ApproachKind::Simple => {
                let v = v_strength(system, approach, eps).ok()?.value;
                report_simple(approach, system, target, v).ok()
            }
            ApproachKind::GlobalUnitary => report_global_unitary_dense(system, d).ok(),
            _ => None,
        },
    }
}

pub fn hamiltonian(args: &HamiltonianArgs) -> CliResult<()> {
    let system = load_system(&args.system)?;
    let target = resolve_target(&system, &args.target)?;
    let approach = ApproachKind::from(args.approach);
    let h = interaction_hamiltonian(approach, &system, &target, args.epsilon)?;
    let direct = h.report(&system)?;
    let closed = closed_report(approach, &system, &target, args.epsilon);
    let (_, g) = ground_state(&(&system.h0() + &h.matrix))?;
    let ground_fidelity = fidelity(g.amplitudes(), target.dense(&system)?.amplitudes());
    let coupling = v_strength(&system, approach, args.epsilon).ok();
    println!("approach = {approach}");
    println!("eta = {:.16e}", direct.eta);
    println!("e_exp = {:.16e}", direct.e_exp);
    if let Some(c) = &closed {
        println!("eta_closed_form = {:.16e}", c.eta);
        println!("e_exp_closed_form = {:.16e}", c.e_exp);
    }
    println!("ground_state_fidelity = {ground_fidelity:.16e}");
    if let Some(dir) = out_dir(&args.out)? {
        let value = json!({
            "config": config(args),
            "system": system_json(&system),
            "approach": approach,
            "target": target_json(&target),
            "coupling": coupling,
            "interaction": h.matrix,
            "first_principles": direct,
            "closed_form": closed,
            "ground_state_fidelity": ground_fidelity,
        });
        write_json(&dir.join("hamiltonian.json"), &value)?;
    }
    Ok(())
}

fn check_orderings(scan: &CurveScan) -> Result<usize, String> {
    let col = |a| scan.index_of(a);
    let e = &scan.e_exp_norm;
    let mut checks = 0;
    for (p, &at) in scan.e_norm.iter().enumerate() {
        if let Some(g) = col(ApproachKind::GlobalUnitary) {
            for m in [ApproachKind::MssgA, ApproachKind::MssgB].into_iter().filter_map(col) {
                checks += 1;
                if e[g][p] < e[m][p] {
                    return Err(format!("global-unitary expense below {} at {at}", scan.approaches[m]));
                }
            }
        }
        if let (Some(s), Some(m)) = (col(ApproachKind::Simple), col(ApproachKind::ModifiedSimple)) {
            checks += 1;
            if e[m][p] > e[s][p] {
                return Err(format!("modified-simple expense above simple at {at}"));
            }
        }
    }
    Ok(checks)
}

pub fn scan(args: &ScanArgs) -> CliResult<()> {
    let system = load_system(&args.system)?;
    if args.points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let approaches: Vec<ApproachKind> = if args.approach.is_empty() {
        ApproachKind::ALL.to_vec()
    } else {
        args.approach.iter().map(|a| ApproachKind::from(*a)).collect()
    };
    let scan = scan_mees_curve(&system, &approaches, &uniform_grid(&system, args.points), args.epsilon)?;
    for (p, why) in &scan.failures {
        eprintln!("point {p}: {why}");
    }
    if args.check {
        let n = check_orderings(&scan).map_err(CliError::Check)?;
        eprintln!("orderings hold ({n} comparisons)");
    }
    match out_dir(&args.out)? {
        Some(dir) => {
            let mut w = create(&dir.join("scan.csv"))?;
            scan.write_csv(&mut w)?;
            w.flush()?;
            let value = json!({
                "config": config(args),
                "system": system_json(&system),
                "points": scan.e_norm.len(),
                "approaches": scan.approaches,
                "failures": scan.failures,
            });
            write_json(&dir.join("scan.json"), &value)?;
        }
        None => scan.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn write_histogram(dir: &Path, stem: &str, scatter: &Scatter, hist: &Histogram2D, cfg: &Value) -> CliResult<()> {
    let mut w = create(&dir.join(format!("{stem}.csv")))?;
    hist.write_csv(&mut w)?;
    w.flush()?;
    write_json(&dir.join(format!("{stem}.json")), &scatter.sidecar(hist, cfg.clone()))
}

pub fn montecarlo(args: &MonteCarloArgs) -> CliResult<()> {
    let system = load_system(&args.system)?;
    let approach = ApproachKind::from(args.approach);
    let measure = args.measure.map(Measure::from).unwrap_or_else(|| Measure::default_for(approach));
    let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut sampler = SamplerConfig::new(args.seed, args.count, measure, workers);
    sampler.leak = args.epsilon;
    let dir = out_dir(&args.out)?.unwrap_or_else(|| PathBuf::from("."));
    let start = Instant::now();
    let scatter = run_scatter(&system, approach, &sampler, (args.bins.x, args.bins.y))?;
    let elapsed = start.elapsed();
    let cfg = json!({ "args": config(args), "sampler": sampler, "system": system_json(&system) });
    let name = approach.name().replace('-', "_");
    write_histogram(&dir, &format!("{name}_efficiency"), &scatter, &scatter.efficiency, &cfg)?;
    write_histogram(&dir, &format!("{name}_expense"), &scatter, &scatter.expense, &cfg)?;
    if args.curve_points > 0 {
        let curve = scan_mees_curve(&system, &[approach], &uniform_grid(&system, args.curve_points), args.epsilon)?;
        let mut w = create(&dir.join(format!("{name}_mees.csv")))?;
        curve.write_csv(&mut w)?;
        w.flush()?;
        let value = json!({
            "config": cfg,
            "points": curve.e_norm.len(),
            "x_norm": scatter.expense.x_norm,
            "y_norm_expense": scatter.expense.y_norm,
            "failures": curve.failures,
        });
        write_json(&dir.join(format!("{name}_mees.json")), &value)?;
    }
    println!("approach = {approach}");
    println!("measure = {measure}");
    println!("samples = {}", args.count);
    println!("binned = {}", scatter.efficiency.total());
    println!("skipped = {}", scatter.skipped);
    println!("clamped = {} / {}", scatter.efficiency.clamped(), scatter.expense.clamped());
    println!("workers = {workers}");
    println!("elapsed_s = {:.3}", elapsed.as_secs_f64());
    println!("out_dir = {}", dir.display());
    Ok(())
}
