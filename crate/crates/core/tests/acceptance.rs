//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p mees-core --test acceptance`.

use std::time::{Duration, Instant};

use mees_core::fixtures::{fixture, FixtureName, TwoQubitParams};
use mees_core::linalg::{fidelity, hermitian_eigen};
use mees_core::model::{embed, solve_beta_g};
use mees_core::montecarlo::{
    envelope_onset, mees_dominance, run_scatter, sample_haar_full, sample_rng, sample_schmidt, scan_mees_curve,
    uniform_grid, Measure, SamplerConfig,
};
use mees_core::synthesis::{build_us, compose_tilde, MssgKind};
use mees_core::thermal::{
    closed_form_report, expense_differences, ground_state, h_modified_simple, h_simple, h_unitary,
    interaction_hamiltonian, report_global_unitary_dense, report_simple, v_strength, ProtocolReport, Target,
    DEFAULT_LEAK,
};
use mees_core::{ApproachKind, BipartiteSystem, ComplexMatrix, SchmidtState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn example_system() -> BipartiteSystem {
    BipartiteSystem::from_inline("0,2,4;0,1,6,9").unwrap()
}

fn random_spectrum(rng: &mut ChaCha8Rng, n: usize) -> String {
    let mut level = 0.0;
    let mut out = vec!["0".to_string()];
    for _ in 1..n {
        level += rng.random_range(0.3..2.5);
        out.push(format!("{level}"));
    }
    out.join(",")
}

fn random_system(rng: &mut ChaCha8Rng, na: usize, nb: usize) -> BipartiteSystem {
    let spec = format!("{};{}", random_spectrum(rng, na), random_spectrum(rng, nb));
    BipartiteSystem::from_inline(&spec).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, || format!("runtime {elapsed:.2?} exceeds {limit:?}"))
}

fn two_qubit_fixtures() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = TwoQubitParams::new(
            rng.random_range(0.2..3.0),
            rng.random_range(0.2..3.0),
            rng.random_range(0.01..0.99),
            rng.random_range(-3.2..3.2),
            rng.random_range(-3.2..3.2),
        )
        .unwrap();
        let s = p.system().map_err(|e| e.to_string())?;
        let target = p.target().unwrap();
        let vs = rng.random_range(0.5..3.0);
        let vl = rng.random_range(0.5..3.0);
        let us = build_us(&s, &target).unwrap();
        let ua = compose_tilde(MssgKind::A, &s, &target).unwrap().0;
        let ub = compose_tilde(MssgKind::B, &s, &target).unwrap().0;
        let pairs: [(FixtureName, ComplexMatrix, f64); 8] = [
            (FixtureName::Us, us.clone(), 0.0),
            (FixtureName::UaTilde, ua.clone(), 0.0),
            (FixtureName::UbTilde, ub.clone(), 0.0),
            (FixtureName::HSi, h_simple(&embed(&target, &s).unwrap(), vs, &s).unwrap(), vs),
            (FixtureName::HSim, h_modified_simple(&target, vl, &s).unwrap(), vl),
            (FixtureName::HS, h_unitary(&us, &s).unwrap(), 0.0),
            (FixtureName::HA, h_unitary(&ua, &s).unwrap(), 0.0),
            (FixtureName::HB, h_unitary(&ub, &s).unwrap(), 0.0),
        ];
        for (name, general, coupling) in pairs {
            let d = general.max_abs_diff(&fixture(name, &p, coupling));
            worst = worst.max(d);
            check(d <= 1e-12, || format!("{name} differs by {d:e} at {p:?}"))?;
        }
    }
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("50 draws x 8 matrices, worst deviation {worst:.1e}, {:.2?}", t.elapsed()))
}

fn sorted_h0(system: &BipartiteSystem) -> Vec<f64> {
    let mut d = system.h0_diagonal();
    d.sort_by(f64::total_cmp);
    d
}

fn ground_state_suite() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst_fid: f64 = 0.0;
    let mut worst_spec: f64 = 0.0;
    let mut runs = 0;
    for (na, nb) in [(2, 2), (2, 3), (3, 4)] {
        for approach in ApproachKind::ALL {
            for k in 0..100u64 {
                let s = random_system(&mut rng, na, nb);
                let target = if approach.reaches_any_state() {
                    Target::Dense(sample_haar_full(&s, &mut sample_rng(1000 + k, k)))
                } else {
                    Target::Schmidt(sample_schmidt(&s, &mut sample_rng(2000 + k, k)))
                };
                let h = interaction_hamiltonian(approach, &s, &target, DEFAULT_LEAK).map_err(|e| e.to_string())?;
                let total = &s.h0() + &h.matrix;
                let (_, g) = ground_state(&total).map_err(|e| e.to_string())?;
                let want = target.dense(&s).unwrap();
                let f = fidelity(g.amplitudes(), want.amplitudes());
                worst_fid = worst_fid.max(1.0 - f);
                check(f > 1.0 - 1e-9, || format!("{approach} {na}x{nb}: fidelity {f}"))?;
                if approach.is_unitary() {
                    let (vals, _) = hermitian_eigen(&total);
                    let d = vals.iter().zip(sorted_h0(&s)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    worst_spec = worst_spec.max(d);
                    check(d <= 1e-9, || format!("{approach} {na}x{nb}: spectrum moved by {d:e}"))?;
                }
                runs += 1;
            }
        }
    }
    within(t.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{runs} targets, worst 1-F {worst_fid:.1e}, worst spectrum shift {worst_spec:.1e}, {:.2?}",
        t.elapsed()
    ))
}

fn compare(closed: &ProtocolReport, direct: &ProtocolReport) -> f64 {
    rel(closed.eta, direct.eta).max(rel(closed.e_exp, direct.e_exp))
}

fn closed_vs_first_principles() -> Outcome {
    let t = Instant::now();
    let s = example_system();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    let mut targets: Vec<SchmidtState> = (0..100).map(|k| sample_schmidt(&s, &mut sample_rng(22, k))).collect();
    for _ in 0..20 {
        let e = rng.random_range(0.01..0.99) * s.max_entanglement();
        targets.push(solve_beta_g(&s, e).unwrap().state);
    }
    for target in &targets {
        for approach in ApproachKind::ALL {
            let closed = closed_form_report(approach, &s, target, DEFAULT_LEAK).map_err(|e| e.to_string())?;
            let direct = interaction_hamiltonian(approach, &s, &Target::Schmidt(target.clone()), DEFAULT_LEAK)
                .and_then(|h| h.report(&s))
                .map_err(|e| e.to_string())?;
            let d = compare(&closed, &direct);
            worst = worst.max(d);
            check(d <= 1e-9, || format!("{approach}: relative deviation {d:e}"))?;
            n += 1;
        }
    }
    let vs = v_strength(&s, ApproachKind::Simple, DEFAULT_LEAK).unwrap().value;
    for k in 0..100 {
        let d = sample_haar_full(&s, &mut sample_rng(23, k));
        let target = Target::Dense(d.clone());
        let closed = [
            report_simple(ApproachKind::Simple, &s, &target, vs).unwrap(),
            report_global_unitary_dense(&s, &d).unwrap(),
        ];
        for c in closed {
            let direct = interaction_hamiltonian(c.approach, &s, &target, DEFAULT_LEAK)
                .and_then(|h| h.report(&s))
                .map_err(|e| e.to_string())?;
            let dv = compare(&c, &direct);
            worst = worst.max(dv);
            check(dv <= 1e-9, || format!("{} on a general state: relative deviation {dv:e}", c.approach))?;
            n += 1;
        }
    }
    within(t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{n} comparisons, worst relative deviation {worst:.1e}, {:.2?}", t.elapsed()))
}

struct Expenses {
    simple: f64,
    modified: f64,
    global: f64,
    a: f64,
    b: f64,
}

fn expenses(s: &BipartiteSystem, t: &SchmidtState) -> Expenses {
    let e = |a| closed_form_report(a, s, t, DEFAULT_LEAK).unwrap().e_exp;
    Expenses {
        simple: e(ApproachKind::Simple),
        modified: e(ApproachKind::ModifiedSimple),
        global: e(ApproachKind::GlobalUnitary),
        a: e(ApproachKind::MssgA),
        b: e(ApproachKind::MssgB),
    }
}

fn inequality_suite() -> Outcome {
    let t = Instant::now();
    let s = example_system();
    let bound = 2.0 * (s.diag_energies()[s.n_a() - 1] - s.ground_energy());
    let mut targets: Vec<SchmidtState> = (0..1000).map(|k| sample_schmidt(&s, &mut sample_rng(24, k))).collect();
    targets.extend(uniform_grid(&s, 200).into_iter().map(|e| solve_beta_g(&s, e).unwrap().state));
    let mut min_gap = f64::INFINITY;
    for target in &targets {
        let x = expenses(&s, target);
        let d = expense_differences(&s, target).unwrap();
        check(x.global >= x.a && x.global >= x.b, || format!("global below an MSSG expense at {target:?}"))?;
        check(d.global_minus_a >= 0.0 && d.global_minus_b >= 0.0, || "negative expense difference".into())?;
        check(x.global <= bound, || format!("global expense {} above {bound}", x.global))?;
        check(x.modified <= x.simple, || format!("modified simple above simple at {target:?}"))?;
        min_gap = min_gap.min(bound - x.global);
    }
    within(t.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{} targets, smallest bound slack {min_gap:.3}, {:.2?}", targets.len(), t.elapsed()))
}

fn five_approach_comparison() -> Outcome {
    let t = Instant::now();
    let s = example_system();
    let scan = scan_mees_curve(&s, &ApproachKind::ALL, &uniform_grid(&s, 200), DEFAULT_LEAK).unwrap();
    check(scan.failures.is_empty(), || format!("{:?}", scan.failures))?;
    let col = |a| scan.index_of(a).unwrap();
    let (si, mo, gl, ma, mb) = (
        col(ApproachKind::Simple),
        col(ApproachKind::ModifiedSimple),
        col(ApproachKind::GlobalUnitary),
        col(ApproachKind::MssgA),
        col(ApproachKind::MssgB),
    );
    let mut crossings = Vec::new();
    for p in 0..scan.e_norm.len() {
        let e = &scan.e_exp_norm;
        let eta = &scan.eta;
        check(e[gl][p] > e[ma][p] && e[gl][p] > e[mb][p], || format!("global not worst at {}", scan.e_norm[p]))?;
        check(eta[gl][p] < eta[ma][p] && eta[gl][p] < eta[mb][p], || "global efficiency not lowest".into())?;
        check(e[mo][p] < e[si][p] && eta[mo][p] > eta[si][p], || format!("modified above simple at {}", scan.e_norm[p]))?;
        if p > 0 && (e[mb][p] - e[ma][p]).signum() != (e[mb][p - 1] - e[ma][p - 1]).signum() {
            crossings.push(scan.e_norm[p]);
        }
    }
    check(!crossings.is_empty(), || "MSSG curves never cross".into())?;
    within(t.elapsed(), Duration::from_secs(2))?;
    Ok(format!("200 points, MSSG crossing near x = {:.3}, {:.2?}", crossings[0], t.elapsed()))
}

fn dominance() -> Outcome {
    let t = Instant::now();
    let s = example_system();
    let mut summary = Vec::new();
    for approach in [ApproachKind::Simple, ApproachKind::GlobalUnitary] {
        let cfg = SamplerConfig::new(2024, 1_000_000, Measure::HaarFull, 8);
        let sc = run_scatter(&s, approach, &cfg, (200, 200)).map_err(|e| e.to_string())?;
        let cols = mees_dominance(&s, &sc, 0.01, 100).map_err(|e| e.to_string())?;
        check(!cols.is_empty(), || "no populated columns".into())?;
        if let Some(c) = cols.iter().find(|c| !c.holds()) {
            return Err(format!("{approach}: MEES {:.4} not below 1st percentile {:.4} at x <= {:.3}", c.mees, c.quantile_floor, c.x_hi));
        }
        let margin = cols.iter().map(|c| c.quantile_floor - c.mees).fold(f64::INFINITY, f64::min);
        summary.push(format!("{approach}: {} columns, min margin {margin:.3}", cols.len()));
    }
    within(t.elapsed(), Duration::from_secs(600))?;
    Ok(format!("{}, {:.2?}", summary.join("; "), t.elapsed()))
}

fn envelope_break() -> Outcome {
    let t = Instant::now();
    let s = example_system();
    let mut onsets = Vec::new();
    for seed in [1u64, 2, 3] {
        let cfg = SamplerConfig::new(seed, 1_000_000, Measure::HaarSchmidt, 8);
        let sc = run_scatter(&s, ApproachKind::ModifiedSimple, &cfg, (200, 200)).map_err(|e| e.to_string())?;
        let o = envelope_onset(&sc.efficiency, 100, 3e-4).ok_or("empty envelope")?;
        check((0.60..=0.66).contains(&o.onset), || format!("seed {seed}: onset {}", o.onset))?;
        let rise = o.max_rise_above(0.66);
        check(rise <= 0.0, || format!("seed {seed}: envelope rises by {rise:e} above 0.66"))?;
        onsets.push(format!("{:.4}", o.onset));
    }
    Ok(format!("onsets {} for seeds 1-3, {:.2?}", onsets.join(", "), t.elapsed()))
}

/// `ln Z + β⟨E⟩` written out independently of the library.
fn oracle_entropy(e: &[f64], beta: f64) -> f64 {
    let w: Vec<f64> = e.iter().map(|x| (-beta * (x - e[0])).exp()).collect();
    let z: f64 = w.iter().sum();
    -w.iter().map(|x| x / z).filter(|p| *p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

fn beta_oracle() -> Outcome {
    let t = Instant::now();
    let s = example_system();
    let e = s.diag_energies().to_vec();
    let step = 1e-5;
    let grid: Vec<f64> = (0..=5_000_000).map(|k| oracle_entropy(&e, k as f64 * step)).collect();
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let target = s.max_entanglement() * (0.005 + 0.99 * k as f64 / 99.0);
        let solved = solve_beta_g(&s, target).map_err(|e| e.to_string())?.beta_g;
        let idx = grid.partition_point(|h| *h > target);
        check(idx < grid.len(), || format!("grid too short for {target}"))?;
        let scanned = idx as f64 * step;
        worst = worst.max((solved - scanned).abs());
        check((solved - scanned).abs() <= 1e-4, || format!("E = {target}: {solved} vs grid {scanned}"))?;
    }
    within(t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("100 values, worst |Δβ| {worst:.1e}, {:.2?}", t.elapsed()))
}

fn determinism() -> Outcome {
    let t = Instant::now();
    let s = example_system();
    for (approach, measure) in [(ApproachKind::Simple, Measure::HaarFull), (ApproachKind::MssgA, Measure::HaarSchmidt)] {
        let runs: Vec<_> = [1, 4, 8]
            .into_iter()
            .map(|w| run_scatter(&s, approach, &SamplerConfig::new(99, 50_000, measure, w), (200, 200)).unwrap())
            .collect();
        for r in &runs[1..] {
            check(r.efficiency == runs[0].efficiency && r.expense == runs[0].expense, || {
                format!("{approach}: grids differ between worker counts")
            })?;
        }
    }
    Ok(format!("2 approaches x workers {{1, 4, 8}} identical, {:.2?}", t.elapsed()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("two-qubit fixture equivalence", two_qubit_fixtures),
        ("ground-state suite", ground_state_suite),
        ("closed form vs first principles", closed_vs_first_principles),
        ("inequality suite", inequality_suite),
        ("five-approach comparison", five_approach_comparison),
        ("MEES dominance of sampled expense", dominance),
        ("efficiency envelope break", envelope_break),
        ("beta_g solver oracle", beta_oracle),
        ("Monte-Carlo determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
