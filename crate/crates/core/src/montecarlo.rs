//! Random-state sampling, scatter histograms and MEES curve scans.
//!
//! Sample `k` of a run draws from `ChaCha8` seeded with the run seed and set to
//! stream `k`, so the output depends only on `(seed, count, measure, system)`
//! and not on how the indices are split between workers.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{
    entanglement_entropy, mees_from_beta, schmidt_entropy, solve_beta_g, BipartiteSystem, DensePureState,
    SchmidtState,
};
use crate::thermal::{
    best_report, interaction_hamiltonian, report_global_unitary_dense, report_simple, v_strength, ApproachKind,
    ProtocolReport, Target, DEFAULT_LEAK,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Haar measure on the full `N_S`-dimensional state space.
    HaarFull,
    /// Haar measure on the span of the diagonal kets `|E_i⟩`.
    HaarSchmidt,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::HaarFull => "haar-full",
            Measure::HaarSchmidt => "haar-schmidt",
        }
    }

    /// Measure used when none is given.
    pub fn default_for(approach: ApproachKind) -> Self {
        if approach.reaches_any_state() {
            Measure::HaarFull
        } else {
            Measure::HaarSchmidt
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar-full" => Ok(Measure::HaarFull),
            "haar-schmidt" => Ok(Measure::HaarSchmidt),
            _ => Err(Error::InvalidConfig(format!("unknown measure `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: u64,
    pub measure: Measure,
    pub workers: usize,
    /// Bath leak fixing the projector strength of the simple approaches.
    pub leak: f64,
}

impl SamplerConfig {
    pub fn new(seed: u64, count: u64, measure: Measure, workers: usize) -> Self {
        SamplerConfig { seed, count, measure, workers, leak: DEFAULT_LEAK }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidConfig("count must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        if !(self.leak > 0.0 && self.leak < 1.0) {
            return Err(Error::InvalidLeak(self.leak));
        }
        Ok(())
    }
}

/// Independent generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_gaussians(n: usize, rng: &mut impl RngCore) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

fn normalized_gaussians(n: usize, rng: &mut impl RngCore) -> Vec<C64> {
    loop {
        let mut v = complex_gaussians(n, rng);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-150 {
            v.iter_mut().for_each(|z| *z /= norm);
            return v;
        }
    }
}

pub fn sample_haar_full(system: &BipartiteSystem, rng: &mut impl RngCore) -> DensePureState {
    DensePureState::normalized(normalized_gaussians(system.n_s(), rng)).expect("nonzero gaussian vector")
}

pub fn sample_schmidt(system: &BipartiteSystem, rng: &mut impl RngCore) -> SchmidtState {
    let v = normalized_gaussians(system.n_a(), rng);
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    SchmidtState {
        weights: v.iter().map(|z| z.norm_sqr() / total).collect(),
        phases: v.iter().map(|z| z.arg()).collect(),
    }
}

/// Count grid over `[0, 1] × [0, 1]` after dividing by `x_norm`, `y_norm`.
///
/// Bins are half-open with the top edge folded into the last bin; points
/// outside the square land in the nearest edge bin and are tallied in
/// `clamped`. Each column also keeps the exact extreme `y` it has seen.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram2D {
    pub bins_x: usize,
    pub bins_y: usize,
    pub x_norm: f64,
    pub y_norm: f64,
    counts: Vec<u64>,
    col_min: Vec<f64>,
    col_max: Vec<f64>,
    clamped: u64,
}

impl Histogram2D {
    pub fn new(bins_x: usize, bins_y: usize, x_norm: f64, y_norm: f64) -> Result<Self> {
        if bins_x == 0 || bins_y == 0 {
            return Err(Error::InvalidConfig("histogram needs at least one bin per axis".into()));
        }
        if !(x_norm > 0.0 && y_norm > 0.0) {
            return Err(Error::InvalidConfig("normalization constants must be positive".into()));
        }
        Ok(Histogram2D {
            bins_x,
            bins_y,
            x_norm,
            y_norm,
            counts: vec![0; bins_x * bins_y],
            col_min: vec![f64::INFINITY; bins_x],
            col_max: vec![f64::NEG_INFINITY; bins_x],
            clamped: 0,
        })
    }

    fn bin(v: f64, n: usize) -> (usize, bool) {
        if v.is_nan() || v < 0.0 {
            (0, true)
        } else if v > 1.0 {
            (n - 1, true)
        } else {
            (((v * n as f64) as usize).min(n - 1), false)
        }
    }

    /// Adds the raw point `(x, y)`; it is normalized here.
    pub fn add(&mut self, x: f64, y: f64) {
        let (xn, yn) = (x / self.x_norm, y / self.y_norm);
        let (i, cx) = Self::bin(xn, self.bins_x);
        let (j, cy) = Self::bin(yn, self.bins_y);
        self.counts[i * self.bins_y + j] += 1;
        self.col_min[i] = self.col_min[i].min(yn);
        self.col_max[i] = self.col_max[i].max(yn);
        if cx || cy {
            self.clamped += 1;
        }
    }

    pub fn merge(&mut self, other: &Histogram2D) -> Result<()> {
        if (self.bins_x, self.bins_y, self.x_norm, self.y_norm) != (other.bins_x, other.bins_y, other.x_norm, other.y_norm)
        {
            return Err(Error::GeometryMismatch);
        }
        self.counts.iter_mut().zip(&other.counts).for_each(|(a, b)| *a += b);
        for i in 0..self.bins_x {
            self.col_min[i] = self.col_min[i].min(other.col_min[i]);
            self.col_max[i] = self.col_max[i].max(other.col_max[i]);
        }
        self.clamped += other.clamped;
        Ok(())
    }

    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[ix * self.bins_y + iy]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn clamped(&self) -> u64 {
        self.clamped
    }

    pub fn column_total(&self, ix: usize) -> u64 {
        self.counts[ix * self.bins_y..(ix + 1) * self.bins_y].iter().sum()
    }

    /// Smallest and largest normalized `y` in column `ix`.
    pub fn column_range(&self, ix: usize) -> Option<(f64, f64)> {
        (self.column_total(ix) > 0).then(|| (self.col_min[ix], self.col_max[ix]))
    }

    pub fn x_edges(&self, ix: usize) -> (f64, f64) {
        (ix as f64 / self.bins_x as f64, (ix + 1) as f64 / self.bins_x as f64)
    }

    pub fn y_edges(&self, iy: usize) -> (f64, f64) {
        (iy as f64 / self.bins_y as f64, (iy + 1) as f64 / self.bins_y as f64)
    }

    /// Lower edge of the `y` bin in which the cumulative count of column `ix`
    /// first reaches the fraction `q`. The true quantile lies at or above it.
    pub fn column_quantile_floor(&self, ix: usize, q: f64) -> Option<f64> {
        let total = self.column_total(ix);
        if total == 0 {
            return None;
        }
        let needed = (q * total as f64).ceil().max(1.0) as u64;
        let mut acc = 0;
        for iy in 0..self.bins_y {
            acc += self.count(ix, iy);
            if acc >= needed {
                return Some(self.y_edges(iy).0);
            }
        }
        None
    }

    /// Rows `(bin_center_x, bin_center_y, count)` for every bin.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# x_norm,y_norm,count")?;
        for ix in 0..self.bins_x {
            let (x0, x1) = self.x_edges(ix);
            for iy in 0..self.bins_y {
                let (y0, y1) = self.y_edges(iy);
                writeln!(w, "{:.16e},{:.16e},{}", 0.5 * (x0 + x1), 0.5 * (y0 + y1), self.count(ix, iy))?;
            }
        }
        Ok(())
    }
}

/// Both scatter histograms of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Scatter {
    pub approach: ApproachKind,
    pub config: SamplerConfig,
    /// `(E / ln N_A, η)`
    pub efficiency: Histogram2D,
    /// `(E / ln N_A, E_exp / (2 (max σ(H_0) - E_0)))`
    pub expense: Histogram2D,
    /// Samples without excitation, for which `η` is 0/0.
    pub skipped: u64,
}

impl Scatter {
    /// JSON sidecar describing a histogram file of this run.
    pub fn sidecar(&self, hist: &Histogram2D, extra: serde_json::Value) -> serde_json::Value {
        json!({
            "bins_x": hist.bins_x,
            "bins_y": hist.bins_y,
            "x_norm": hist.x_norm,
            "y_norm": hist.y_norm,
            "seed": self.config.seed,
            "count": self.config.count,
            "approach": self.approach,
            "measure": self.config.measure,
            "skipped": self.skipped,
            "clamped": hist.clamped(),
            "config": extra,
        })
    }
}

/// `2 (max σ(H_0) - E_0)`, the expense normalization.
pub fn expense_norm(system: &BipartiteSystem) -> f64 {
    2.0 * (system.max_energy() - system.ground_energy())
}

struct Evaluator<'a> {
    system: &'a BipartiteSystem,
    approach: ApproachKind,
    measure: Measure,
    leak: f64,
    v: f64,
}

impl Evaluator<'_> {
    /// `(entanglement, report)`, or `None` for a sample without excitation.
    fn eval(&self, rng: &mut ChaCha8Rng) -> Result<Option<(f64, ProtocolReport)>> {
        let (ent, res) = match self.measure {
            Measure::HaarSchmidt => {
                let s = sample_schmidt(self.system, rng);
                (schmidt_entropy(&s), best_report(self.approach, self.system, &s, self.leak))
            }
            Measure::HaarFull => {
                let d = sample_haar_full(self.system, rng);
                let ent = entanglement_entropy(&d, self.system);
                let res = match self.approach {
                    ApproachKind::Simple => report_simple(self.approach, self.system, &Target::Dense(d), self.v),
                    _ => match report_global_unitary_dense(self.system, &d) {
                        Err(Error::ZeroLambda0) => {
                            interaction_hamiltonian(self.approach, self.system, &Target::Dense(d), self.leak)
                                .and_then(|h| h.report(self.system))
                        }
                        other => other,
                    },
                };
                (ent, res)
            }
        };
        match res {
            Ok(r) => Ok(Some((ent, r))),
            Err(Error::ZeroEntanglementTarget) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

struct Acc {
    eff: Histogram2D,
    exp: Histogram2D,
    skipped: u64,
    error: Option<(u64, Error)>,
}

impl Acc {
    fn push(mut self, ev: &Evaluator, seed: u64, k: u64) -> Self {
        if self.error.is_some() {
            return self;
        }
        match ev.eval(&mut sample_rng(seed, k)) {
            Ok(Some((ent, r))) => {
                self.eff.add(ent, r.eta);
                self.exp.add(ent, r.e_exp);
            }
            Ok(None) => self.skipped += 1,
            Err(e) => self.error = Some((k, e)),
        }
        self
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn join(mut self, other: Acc) -> Self {
        self.eff.merge(&other.eff).expect("same geometry");
        self.exp.merge(&other.exp).expect("same geometry");
        self.skipped += other.skipped;
        self.error = match (self.error, other.error) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Samples `config.count` states, evaluates `approach` on each and bins
/// `(entanglement, η)` and `(entanglement, E_exp)`.
///
/// The diagonal-sector approaches only accept [`Measure::HaarSchmidt`].
pub fn run_scatter(
    system: &BipartiteSystem,
    approach: ApproachKind,
    config: &SamplerConfig,
    bins: (usize, usize),
) -> Result<Scatter> {
    config.validate()?;
    if config.measure == Measure::HaarFull && !approach.reaches_any_state() {
        return Err(Error::MeasureMismatch { approach: approach.to_string(), measure: config.measure.to_string() });
    }
    let v = match approach {
        ApproachKind::Simple | ApproachKind::ModifiedSimple => v_strength(system, approach, config.leak)?.value,
        _ => 0.0,
    };
    let ev = Evaluator { system, approach, measure: config.measure, leak: config.leak, v };
    let x_norm = system.max_entanglement();
    let eff = Histogram2D::new(bins.0, bins.1, x_norm, 1.0)?;
    let exp = Histogram2D::new(bins.0, bins.1, x_norm, expense_norm(system))?;
    let empty = || Acc { eff: eff.clone(), exp: exp.clone(), skipped: 0, error: None };
    let acc = accumulate(&ev, config, empty)?;
    if let Some((_, e)) = acc.error {
        return Err(e);
    }
    Ok(Scatter { approach, config: *config, efficiency: acc.eff, expense: acc.exp, skipped: acc.skipped })
}

#[cfg(feature = "parallel")]
fn accumulate(ev: &Evaluator, config: &SamplerConfig, empty: impl Fn() -> Acc + Sync + Send) -> Result<Acc> {
    use rayon::prelude::*;
    if config.workers == 1 {
        return Ok((0..config.count).fold(empty(), |a, k| a.push(ev, config.seed, k)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(pool.install(|| {
        (0..config.count)
            .into_par_iter()
            .fold(&empty, |a, k| a.push(ev, config.seed, k))
            .reduce(&empty, Acc::join)
    }))
}

#[cfg(not(feature = "parallel"))]
fn accumulate(ev: &Evaluator, config: &SamplerConfig, empty: impl Fn() -> Acc) -> Result<Acc> {
    Ok((0..config.count).fold(empty(), |a, k| a.push(ev, config.seed, k)))
}

/// Protocol reports along the MEES family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveScan {
    pub approaches: Vec<ApproachKind>,
    /// Entanglement divided by `ln N_A`.
    pub e_norm: Vec<f64>,
    /// `eta[a][p]` for approach `a` at grid point `p`; NaN where the point failed.
    pub eta: Vec<Vec<f64>>,
    pub e_exp_norm: Vec<Vec<f64>>,
    pub failures: Vec<(usize, String)>,
}

impl CurveScan {
    pub fn index_of(&self, approach: ApproachKind) -> Option<usize> {
        self.approaches.iter().position(|a| *a == approach)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut header = vec!["e_norm".to_string()];
        for a in &self.approaches {
            header.push(format!("{}_eta", a.name()));
            header.push(format!("{}_e_exp_norm", a.name()));
        }
        writeln!(w, "{}", header.join(","))?;
        for p in 0..self.e_norm.len() {
            let mut row = vec![format!("{:.16e}", self.e_norm[p])];
            for a in 0..self.approaches.len() {
                row.push(format!("{:.16e}", self.eta[a][p]));
                row.push(format!("{:.16e}", self.e_exp_norm[a][p]));
            }
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// `n` equally spaced entanglement values strictly inside `(0, ln N_A)`.
pub fn uniform_grid(system: &BipartiteSystem, n: usize) -> Vec<f64> {
    let max = system.max_entanglement();
    (1..=n).map(|i| max * i as f64 / (n + 1) as f64).collect()
}

/// MEES at each entanglement value of `e_grid` (nats) and the reports of
/// every requested approach. Failed points are recorded, not fatal.
pub fn scan_mees_curve(
    system: &BipartiteSystem,
    approaches: &[ApproachKind],
    e_grid: &[f64],
    leak: f64,
) -> Result<CurveScan> {
    if !(leak > 0.0 && leak < 1.0) {
        return Err(Error::InvalidLeak(leak));
    }
    let max = system.max_entanglement();
    let norm = expense_norm(system);
    let mut scan = CurveScan {
        approaches: approaches.to_vec(),
        e_norm: e_grid.iter().map(|e| e / max).collect(),
        eta: vec![vec![f64::NAN; e_grid.len()]; approaches.len()],
        e_exp_norm: vec![vec![f64::NAN; e_grid.len()]; approaches.len()],
        failures: Vec::new(),
    };
    for (p, &e) in e_grid.iter().enumerate() {
        let mees = match solve_beta_g(system, e) {
            Ok(m) => m,
            Err(err) => {
                scan.failures.push((p, err.to_string()));
                continue;
            }
        };
        for (a, &approach) in approaches.iter().enumerate() {
            match best_report(approach, system, &mees.state, leak) {
                Ok(r) => {
                    scan.eta[a][p] = r.eta;
                    scan.e_exp_norm[a][p] = r.e_exp / norm;
                }
                Err(err) => scan.failures.push((p, format!("{approach}: {err}"))),
            }
        }
    }
    Ok(scan)
}

/// Report for the MEES at normalized entanglement `x ∈ (0, 1]`; `x = 1` is
/// the uniform-weight limit `β_g = 0`.
pub fn mees_report_at(system: &BipartiteSystem, approach: ApproachKind, x: f64, leak: f64) -> Result<ProtocolReport> {
    let mees = if x >= 1.0 { mees_from_beta(system, 0.0)? } else { solve_beta_g(system, x * system.max_entanglement())? };
    best_report(approach, system, &mees.state, leak)
}

/// One entanglement column of a dominance check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DominanceColumn {
    pub x_hi: f64,
    pub samples: u64,
    /// MEES expense (normalized) at the column's upper edge.
    pub mees: f64,
    /// Floor of the sampled quantile.
    pub quantile_floor: f64,
}

impl DominanceColumn {
    pub fn holds(&self) -> bool {
        self.mees < self.quantile_floor
    }
}

/// Compares the MEES expense with the `q` quantile of the sampled expense in
/// every column holding at least `min_samples` samples. Both sides are
/// conservative: the MEES is taken at the column's upper edge (its expense
/// grows with entanglement) and the quantile is replaced by its bin floor.
pub fn mees_dominance(
    system: &BipartiteSystem,
    scatter: &Scatter,
    q: f64,
    min_samples: u64,
) -> Result<Vec<DominanceColumn>> {
    let h = &scatter.expense;
    let mut out = Vec::new();
    for ix in 0..h.bins_x {
        let samples = h.column_total(ix);
        if samples < min_samples {
            continue;
        }
        let x_hi = h.x_edges(ix).1;
        let r = mees_report_at(system, scatter.approach, x_hi, scatter.config.leak)?;
        let quantile_floor = h.column_quantile_floor(ix, q).expect("nonempty column");
        out.push(DominanceColumn { x_hi, samples, mees: r.e_exp / h.y_norm, quantile_floor });
    }
    Ok(out)
}

/// Upper envelope of the sampled efficiency and where it starts to fall.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeOnset {
    /// `(bin center, largest η)` for every column with enough samples.
    pub envelope: Vec<(f64, f64)>,
    pub plateau: f64,
    /// Center of the last column whose envelope is within `tol` of the plateau.
    pub onset: f64,
}

impl EnvelopeOnset {
    /// Largest rise of the envelope between consecutive columns above `x`.
    pub fn max_rise_above(&self, x: f64) -> f64 {
        self.envelope
            .windows(2)
            .filter(|w| w[0].0 > x)
            .map(|w| w[1].1 - w[0].1)
            .fold(0.0, f64::max)
    }
}

pub fn envelope_onset(efficiency: &Histogram2D, min_samples: u64, tol: f64) -> Option<EnvelopeOnset> {
    let envelope: Vec<(f64, f64)> = (0..efficiency.bins_x)
        .filter(|&ix| efficiency.column_total(ix) >= min_samples)
        .map(|ix| {
            let (x0, x1) = efficiency.x_edges(ix);
            (0.5 * (x0 + x1), efficiency.column_range(ix).expect("nonempty").1)
        })
        .collect();
    let plateau = envelope.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let onset = envelope.iter().rev().find(|p| p.1 >= plateau - tol)?.0;
    Some(EnvelopeOnset { envelope, plateau, onset })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys34() -> BipartiteSystem {
        BipartiteSystem::from_inline("0,2,4;0,1,6,9").unwrap()
    }

    #[test]
    fn samples_are_normalized_and_reproducible() {
        let s = sys34();
        for k in 0..50 {
            let d = sample_haar_full(&s, &mut sample_rng(7, k));
            let n: f64 = d.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
            assert_eq!(d, sample_haar_full(&s, &mut sample_rng(7, k)));
            let t = sample_schmidt(&s, &mut sample_rng(7, k));
            assert!((t.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_ne!(sample_haar_full(&s, &mut sample_rng(7, 0)), sample_haar_full(&s, &mut sample_rng(7, 1)));
    }

    #[test]
    fn histogram_binning_rules() {
        let mut h = Histogram2D::new(4, 2, 2.0, 1.0).unwrap();
        h.add(0.0, 0.0);
        h.add(2.0, 1.0);
        h.add(0.5, 0.5);
        h.add(-1.0, 3.0);
        assert_eq!(h.count(0, 0), 1);
        assert_eq!(h.count(3, 1), 1);
        assert_eq!(h.count(1, 1), 1);
        assert_eq!(h.count(0, 1), 1);
        assert_eq!(h.total(), 4);
        assert_eq!(h.clamped(), 1);
        assert_eq!(h.column_range(0), Some((0.0, 3.0)));
        let mut g = Histogram2D::new(4, 2, 2.0, 1.0).unwrap();
        g.add(0.1, 0.1);
        let mut hg = h.clone();
        hg.merge(&g).unwrap();
        let mut gh = g.clone();
        gh.merge(&h).unwrap();
        assert_eq!(hg, gh);
        assert_eq!(hg.total(), 5);
        assert_eq!(h.clone().merge(&Histogram2D::new(4, 3, 2.0, 1.0).unwrap()), Err(Error::GeometryMismatch));
    }

    #[test]
    fn quantile_floor() {
        let mut h = Histogram2D::new(1, 10, 1.0, 1.0).unwrap();
        for k in 0..100 {
            h.add(0.5, 0.3 + 0.005 * k as f64);
        }
        assert!((h.column_quantile_floor(0, 0.01).unwrap() - 0.3).abs() < 1e-12);
        assert!((h.column_quantile_floor(0, 0.5).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_sample_run() {
        let s = sys34();
        for approach in ApproachKind::ALL {
            let cfg = SamplerConfig::new(3, 1, Measure::default_for(approach), 1);
            let sc = run_scatter(&s, approach, &cfg, (10, 10)).unwrap();
            assert_eq!(sc.efficiency.total(), 1);
            assert_eq!(sc.expense.total(), 1);
        }
    }

    #[test]
    fn measure_mismatch() {
        let s = sys34();
        for approach in [ApproachKind::ModifiedSimple, ApproachKind::MssgA, ApproachKind::MssgB] {
            let cfg = SamplerConfig::new(3, 10, Measure::HaarFull, 1);
            assert!(matches!(run_scatter(&s, approach, &cfg, (10, 10)), Err(Error::MeasureMismatch { .. })));
        }
        let cfg = SamplerConfig::new(3, 0, Measure::HaarFull, 1);
        assert!(run_scatter(&s, ApproachKind::Simple, &cfg, (10, 10)).is_err());
    }

    #[test]
    fn curve_scan_shape() {
        let s = sys34();
        let grid = uniform_grid(&s, 20);
        let scan = scan_mees_curve(&s, &ApproachKind::ALL, &grid, DEFAULT_LEAK).unwrap();
        assert!(scan.failures.is_empty());
        assert!(scan.e_norm.windows(2).all(|w| w[0] < w[1]));
        assert!(scan.e_norm[0] > 0.0 && scan.e_norm[19] < 1.0);
        let mut buf = Vec::new();
        scan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("e_norm,simple_eta,simple_e_exp_norm,modified-simple_eta"));
        assert_eq!(text.lines().count(), 21);
        let bad = scan_mees_curve(&s, &[ApproachKind::Simple], &[0.0, 0.5], DEFAULT_LEAK).unwrap();
        assert_eq!(bad.failures.len(), 1);
        assert!(bad.eta[0][0].is_nan() && bad.eta[0][1].is_finite());
    }
}
