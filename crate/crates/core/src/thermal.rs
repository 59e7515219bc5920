//! Zero-temperature thermalization protocols.
//!
//! An interaction `H_I` is switched on so that the ground state of
//! `H_0 + H_I` is the target; the system relaxes into it and `H_I` is switched
//! off again. The protocol stores `⟨H_0⟩_ψ - E_0` and costs at least
//! `E_exp = ⟨H_I⟩_{E_0} - ⟨H_I⟩_ψ`; the efficiency is their ratio.
//!
//! Five interactions are built here: the simple and modified simple
//! projector interactions and the three unitary ones `U H_0 U† - H_0` with
//! `U ∈ {U_S, Ũ_A, Ũ_B}`. Every report exists both as a closed form in the
//! target's weights and as a direct evaluation of matrix expectation values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, verify_unitary, ComplexMatrix, C64};
use crate::model::{
    embed, energy_expectation, solve_thermal_beta, thermal_weights, BipartiteSystem, DensePureState, SchmidtState,
    WEIGHT_EPS,
};
use crate::synthesis::{build_us, build_us_general, compose_tilde, tail_weights, MssgKind};

/// Below this, both numerator and expense are taken as zero.
const ZERO_EXPENSE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproachKind {
    Simple,
    ModifiedSimple,
    GlobalUnitary,
    MssgA,
    MssgB,
}

impl ApproachKind {
    pub const ALL: [ApproachKind; 5] = [
        ApproachKind::Simple,
        ApproachKind::ModifiedSimple,
        ApproachKind::GlobalUnitary,
        ApproachKind::MssgA,
        ApproachKind::MssgB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ApproachKind::Simple => "simple",
            ApproachKind::ModifiedSimple => "modified-simple",
            ApproachKind::GlobalUnitary => "global-unitary",
            ApproachKind::MssgA => "mssg-a",
            ApproachKind::MssgB => "mssg-b",
        }
    }

    /// Whether the approach can reach targets outside the diagonal sector.
    pub fn reaches_any_state(self) -> bool {
        matches!(self, ApproachKind::Simple | ApproachKind::GlobalUnitary)
    }

    pub fn is_unitary(self) -> bool {
        matches!(self, ApproachKind::GlobalUnitary | ApproachKind::MssgA | ApproachKind::MssgB)
    }
}

impl fmt::Display for ApproachKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ApproachKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ApproachKind::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownApproach(s.to_string()))
    }
}

/// Projector strength `V_X` fixed by a bath leak `ε = e^{-βΔ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingStrength {
    pub value: f64,
    pub leak: f64,
    pub bath_beta: f64,
    pub gap: f64,
}

pub const DEFAULT_LEAK: f64 = 1e-3;

/// `V_X = Δ [1 + ln(N_X - 1) / (βΔ)]` with `β = ln(1/ε)/Δ`; `N_X` is `N_S` for the
/// simple approach and `N_A` for the modified one.
pub fn v_strength(system: &BipartiteSystem, kind: ApproachKind, leak: f64) -> Result<CouplingStrength> {
    if !(leak > 0.0 && leak < 1.0) {
        return Err(Error::InvalidLeak(leak));
    }
    let levels = match kind {
        ApproachKind::Simple => system.n_s(),
        ApproachKind::ModifiedSimple => system.n_a(),
        other => return Err(Error::NotSimpleApproach(other.to_string())),
    };
    let gap = system.gap();
    let bath_beta = (1.0 / leak).ln() / gap;
    let value = gap * (1.0 + ((levels - 1) as f64).ln() / (bath_beta * gap));
    Ok(CouplingStrength { value, leak, bath_beta, gap })
}

/// Target of a protocol: diagonal-sector or arbitrary.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Schmidt(SchmidtState),
    Dense(DensePureState),
}

impl Target {
    pub fn dense(&self, system: &BipartiteSystem) -> Result<DensePureState> {
        match self {
            Target::Schmidt(s) => embed(s, system),
            Target::Dense(d) => Ok(d.clone()),
        }
    }

    /// `|⟨E_0|ψ⟩|²`
    pub fn ground_weight(&self) -> f64 {
        match self {
            Target::Schmidt(s) => s.weights[0],
            Target::Dense(d) => d.amplitudes()[0].norm_sqr(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InteractionHamiltonian {
    pub matrix: ComplexMatrix,
    pub approach: ApproachKind,
    pub target: Target,
}

#[derive(Serialize)]
struct InteractionRepr<'a> {
    approach: ApproachKind,
    matrix: &'a ComplexMatrix,
}

impl Serialize for InteractionHamiltonian {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InteractionRepr { approach: self.approach, matrix: &self.matrix }.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportMethod {
    ClosedForm,
    FirstPrinciples,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub approach: ApproachKind,
    pub eta: f64,
    pub e_exp: f64,
    pub method: ReportMethod,
}

fn report(approach: ApproachKind, method: ReportMethod, stored: f64, e_exp: f64) -> Result<ProtocolReport> {
    if stored.abs() <= ZERO_EXPENSE && e_exp.abs() <= ZERO_EXPENSE {
        return Err(Error::ZeroEntanglementTarget);
    }
    Ok(ProtocolReport { approach, eta: stored / e_exp, e_exp, method })
}

fn projector(state: &DensePureState) -> ComplexMatrix {
    ComplexMatrix::outer(state.amplitudes(), state.amplitudes())
}

/// `H_I = -V|ψ⟩⟨ψ| - H_0`, so that `H_0 + H_I = -V|ψ⟩⟨ψ|`.
pub fn h_simple(target: &DensePureState, v: f64, system: &BipartiteSystem) -> Result<ComplexMatrix> {
    if target.len() != system.n_s() {
        return Err(Error::DimensionMismatch { expected: system.n_s(), got: target.len() });
    }
    Ok(&projector(target).scale(C64::new(-v, 0.0)) - &system.h0())
}

/// `H_I = -V|ψ⟩⟨ψ| - Σ_i E_i |E_i⟩⟨E_i|`; only the diagonal sector is touched.
pub fn h_modified_simple(target: &SchmidtState, v: f64, system: &BipartiteSystem) -> Result<ComplexMatrix> {
    let psi = embed(target, system)?;
    let mut h = projector(&psi).scale(C64::new(-v, 0.0));
    for (i, e) in system.diag_energies().iter().enumerate() {
        let k = system.diag_index(i);
        h[(k, k)] -= e;
    }
    Ok(h)
}

/// `H_I = U H_0 U† - H_0`
pub fn h_unitary(u: &ComplexMatrix, system: &BipartiteSystem) -> Result<ComplexMatrix> {
    if u.dim() != system.n_s() {
        return Err(Error::DimensionMismatch { expected: system.n_s(), got: u.dim() });
    }
    let dev = verify_unitary(u).max();
    if dev > 1e-8 {
        return Err(Error::NotUnitary(dev));
    }
    let h0 = system.h0();
    let rotated = &(u * &h0) * &u.adjoint();
    Ok(&rotated - &h0)
}

/// `X_0 … X_{N-1}` of the closed-form interaction block for energies `e`.
fn x_coefficients(e: &[f64], weights: &[f64]) -> Vec<f64> {
    let n = e.len();
    let g = tail_weights(weights);
    let lam = weights;
    let mut x = vec![0.0; n];
    let mut running = 0.0;
    for i in 1..n {
        x[i] = e[0] - e[i] / g[i - 1] + running;
        running += lam[i] * e[i] / (g[i] * g[i - 1]);
    }
    // running = Σ_{i≥1} λ_i e_i / (γ_i γ_{i-1})
    x[0] = (e[0] * (lam[0] - 1.0) + lam[0] * running) / lam[0];
    x
}

/// `Λ_{ij} X_α` with `α = max(i, j)` if `ij = 0`, else `min(i, j)`.
fn closed_form_block(e: &[f64], target: &SchmidtState) -> Result<Vec<Vec<C64>>> {
    if target.weights[0] < WEIGHT_EPS {
        return Err(Error::ZeroLambda0);
    }
    let n = e.len();
    let x = x_coefficients(e, &target.weights);
    let (lam, th) = (&target.weights, &target.phases);
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let alpha = if i * j == 0 { i.max(j) } else { i.min(j) };
                    C64::from_polar((lam[i] * lam[j]).sqrt(), th[i] - th[j]) * x[alpha]
                })
                .collect()
        })
        .collect())
}

/// Closed form of `U_S H_0 U_S† - H_0`: nonzero only on the diagonal sector.
pub fn h_global_closed_form(target: &SchmidtState, system: &BipartiteSystem) -> Result<ComplexMatrix> {
    if target.len() != system.n_a() {
        return Err(Error::DimensionMismatch { expected: system.n_a(), got: target.len() });
    }
    let block = closed_form_block(system.diag_energies(), target)?;
    let mut h = ComplexMatrix::zeros(system.n_s());
    for (i, row) in block.iter().enumerate() {
        for (j, &z) in row.iter().enumerate() {
            h[(system.diag_index(i), system.diag_index(j))] = z;
        }
    }
    Ok(h)
}

/// Closed form of `Ũ H_0 Ũ† - H_0` for the MSSG unitaries.
pub fn h_mssg_closed_form(kind: MssgKind, target: &SchmidtState, system: &BipartiteSystem) -> Result<ComplexMatrix> {
    let na = system.n_a();
    if target.len() != na {
        return Err(Error::DimensionMismatch { expected: na, got: target.len() });
    }
    let mut h = ComplexMatrix::zeros(system.n_s());
    match kind {
        MssgKind::A => {
            let local: Vec<f64> = (0..na).map(|i| system.a(i)).collect();
            let block = closed_form_block(&local, target)?;
            for i in 0..na {
                for j in 0..na {
                    for k in 0..na {
                        let mut z = block[i][j];
                        if i == j {
                            z += system.b(k) - system.b((i + k) % na);
                        }
                        h[(system.index(i, (i + k) % na), system.index(j, (j + k) % na))] = z;
                    }
                    for k in na..system.n_b() {
                        h[(system.index(i, k), system.index(j, k))] = block[i][j];
                    }
                }
            }
        }
        MssgKind::B => {
            let local: Vec<f64> = (0..na).map(|i| system.b(i)).collect();
            let block = closed_form_block(&local, target)?;
            for i in 0..na {
                for j in 0..na {
                    for k in 0..na {
                        let mut z = block[i][j];
                        if i == j {
                            z += system.a(k) - system.a((k + i) % na);
                        }
                        h[(system.index((k + i) % na, i), system.index((k + j) % na, j))] = z;
                    }
                }
            }
        }
    }
    Ok(h)
}

/// Interaction Hamiltonian for `approach`, built from its defining formula
/// (the unitary ones via `U H_0 U† - H_0` with the synthesized unitary).
pub fn interaction_hamiltonian(
    approach: ApproachKind,
    system: &BipartiteSystem,
    target: &Target,
    leak: f64,
) -> Result<InteractionHamiltonian> {
    let schmidt = || match target {
        Target::Schmidt(s) => Ok(s),
        Target::Dense(_) => Err(Error::InvalidState(format!("{approach} needs a Schmidt-form target"))),
    };
    let matrix = match approach {
        ApproachKind::Simple => {
            let v = v_strength(system, approach, leak)?.value;
            h_simple(&target.dense(system)?, v, system)?
        }
        ApproachKind::ModifiedSimple => {
            let v = v_strength(system, approach, leak)?.value;
            h_modified_simple(schmidt()?, v, system)?
        }
        ApproachKind::GlobalUnitary => {
            let u = match target {
                Target::Schmidt(s) => build_us(system, s)?,
                Target::Dense(d) => build_us_general(system, d)?,
            };
            h_unitary(&u, system)?
        }
        ApproachKind::MssgA | ApproachKind::MssgB => {
            let kind = if approach == ApproachKind::MssgA { MssgKind::A } else { MssgKind::B };
            h_unitary(&compose_tilde(kind, system, schmidt()?)?.0, system)?
        }
    };
    Ok(InteractionHamiltonian { matrix, approach, target: target.clone() })
}

/// `η` and `E_exp` straight from expectation values of `h_i`.
pub fn protocol_report_first_principles(
    h_i: &ComplexMatrix,
    approach: ApproachKind,
    system: &BipartiteSystem,
    target: &DensePureState,
) -> Result<ProtocolReport> {
    let e0 = DensePureState::basis(system, 0, 0);
    let e_exp = h_i.expectation(e0.amplitudes()).re - h_i.expectation(target.amplitudes()).re;
    let stored = energy_expectation(target, system) - system.ground_energy();
    report(approach, ReportMethod::FirstPrinciples, stored, e_exp)
}

impl InteractionHamiltonian {
    pub fn report(&self, system: &BipartiteSystem) -> Result<ProtocolReport> {
        protocol_report_first_principles(&self.matrix, self.approach, system, &self.target.dense(system)?)
    }
}

/// Simple / modified simple: `E_exp = ⟨H_0⟩_ψ - E_0 + V (1 - λ_0)`.
pub fn report_simple(approach: ApproachKind, system: &BipartiteSystem, target: &Target, v: f64) -> Result<ProtocolReport> {
    let stored = match target {
        Target::Schmidt(s) => crate::model::schmidt_energy(s, system),
        Target::Dense(d) => energy_expectation(d, system),
    } - system.ground_energy();
    let e_exp = stored + v * (1.0 - target.ground_weight());
    report(approach, ReportMethod::ClosedForm, stored, e_exp)
}

/// `Σ_{i≥1} λ_i e_i / (γ_i γ_{i-1})` and `Σ_{i≥1} λ_i e_i`.
fn weighted_sums(e: &[f64], weights: &[f64]) -> (f64, f64) {
    let g = tail_weights(weights);
    (1..e.len()).fold((0.0, 0.0), |(r, s), i| (r + weights[i] * e[i] / (g[i] * g[i - 1]), s + weights[i] * e[i]))
}

/// Global unitary on an arbitrary state whose weights `weights[k] = |⟨e_k|ψ⟩|²`
/// refer to eigenvectors `e_k` with energies `e[k]`, `e[0]` the ground energy:
/// `E_exp = Σ λ_i e_i [1 + λ_0/(γ_i γ_{i-1})] - 2 e_0 (1 - λ_0)`.
fn global_unitary_general(e: &[f64], weights: &[f64]) -> Result<ProtocolReport> {
    let lam0 = weights[0];
    if lam0 < WEIGHT_EPS {
        return Err(Error::ZeroLambda0);
    }
    let (r, s) = weighted_sums(e, weights);
    let stored = e[0] * (lam0 - 1.0) + s;
    let e_exp = s + lam0 * r - 2.0 * e[0] * (1.0 - lam0);
    report(ApproachKind::GlobalUnitary, ReportMethod::ClosedForm, stored, e_exp)
}

pub fn report_global_unitary(system: &BipartiteSystem, target: &SchmidtState) -> Result<ProtocolReport> {
    global_unitary_general(system.diag_energies(), &target.weights)
}

/// Global unitary built with [`build_us_general`] for a dense target.
pub fn report_global_unitary_dense(system: &BipartiteSystem, target: &DensePureState) -> Result<ProtocolReport> {
    let weights: Vec<f64> = target.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    global_unitary_general(&system.h0_diagonal(), &weights)
}

/// `E_exp^A = Σ λ_i [E_i + λ_0 A_i/(γ_i γ_{i-1})] - (A_0 + E_0)(1 - λ_0)`; for B
/// the roles of the A and B levels are exchanged.
pub fn report_mssg(kind: MssgKind, system: &BipartiteSystem, target: &SchmidtState) -> Result<ProtocolReport> {
    let lam = &target.weights;
    if lam[0] < WEIGHT_EPS {
        return Err(Error::ZeroLambda0);
    }
    let na = system.n_a();
    let local: Vec<f64> = match kind {
        MssgKind::A => (0..na).map(|i| system.a(i)).collect(),
        MssgKind::B => (0..na).map(|i| system.b(i)).collect(),
    };
    let e = system.diag_energies();
    let (r, _) = weighted_sums(&local, lam);
    let (_, s) = weighted_sums(e, lam);
    let stored = s - e[0] * (1.0 - lam[0]);
    let e_exp = s + lam[0] * r - (local[0] + e[0]) * (1.0 - lam[0]);
    let approach = if kind == MssgKind::A { ApproachKind::MssgA } else { ApproachKind::MssgB };
    report(approach, ReportMethod::ClosedForm, stored, e_exp)
}

/// Differences of expended energy between the unitary approaches for one target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpenseDifferences {
    /// `E_exp^S - E_exp^A = λ_0 Σ λ_i B_i/(γ_i γ_{i-1}) - B_0 (1 - λ_0)`
    pub global_minus_a: f64,
    pub global_minus_b: f64,
    /// `E_exp^B - E_exp^A = λ_0 Σ λ_i (B_i - A_i)/(γ_i γ_{i-1}) - (B_0 - A_0)(1 - λ_0)`
    pub b_minus_a: f64,
}

pub fn expense_differences(system: &BipartiteSystem, target: &SchmidtState) -> Result<ExpenseDifferences> {
    let lam = &target.weights;
    if lam[0] < WEIGHT_EPS {
        return Err(Error::ZeroLambda0);
    }
    let na = system.n_a();
    let a: Vec<f64> = (0..na).map(|i| system.a(i)).collect();
    let b: Vec<f64> = (0..na).map(|i| system.b(i)).collect();
    let (ra, _) = weighted_sums(&a, lam);
    let (rb, _) = weighted_sums(&b, lam);
    let tail = 1.0 - lam[0];
    Ok(ExpenseDifferences {
        global_minus_a: lam[0] * rb - b[0] * tail,
        global_minus_b: lam[0] * ra - a[0] * tail,
        b_minus_a: lam[0] * (rb - ra) - (b[0] - a[0]) * tail,
    })
}

/// Closed-form report for any approach on a Schmidt-form target.
pub fn closed_form_report(
    approach: ApproachKind,
    system: &BipartiteSystem,
    target: &SchmidtState,
    leak: f64,
) -> Result<ProtocolReport> {
    match approach {
        ApproachKind::Simple | ApproachKind::ModifiedSimple => {
            let v = v_strength(system, approach, leak)?.value;
            report_simple(approach, system, &Target::Schmidt(target.clone()), v)
        }
        ApproachKind::GlobalUnitary => report_global_unitary(system, target),
        ApproachKind::MssgA => report_mssg(MssgKind::A, system, target),
        ApproachKind::MssgB => report_mssg(MssgKind::B, system, target),
    }
}

/// Closed form where it is defined, first-principles evaluation otherwise
/// (unitary approaches with `λ_0 = 0`).
pub fn best_report(approach: ApproachKind, system: &BipartiteSystem, target: &SchmidtState, leak: f64) -> Result<ProtocolReport> {
    match closed_form_report(approach, system, target, leak) {
        Err(Error::ZeroLambda0) => {
            let target = Target::Schmidt(target.clone());
            interaction_hamiltonian(approach, system, &target, leak)?.report(system)
        }
        other => other,
    }
}

/// Diagonal-sector state minimizing the modified-simple expense at fixed
/// entanglement: thermal weights of the fictitious spectrum
/// `Ẽ_0 = 0`, `Ẽ_i = E_i - E_0 + V_L`.
pub fn minimize_expense_modified_simple(system: &BipartiteSystem, entanglement: f64, v_l: f64) -> Result<SchmidtState> {
    let e0 = system.ground_energy();
    let fictitious: Vec<f64> = system
        .diag_energies()
        .iter()
        .enumerate()
        .map(|(i, e)| if i == 0 { 0.0 } else { e - e0 + v_l })
        .collect();
    let beta = solve_thermal_beta(&fictitious, entanglement)?;
    SchmidtState::real(normalize(thermal_weights(&fictitious, beta)))
}

fn normalize(mut w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

/// Lowest eigenpair of a Hermitian matrix; the eigenvector's largest
/// amplitude is made real and positive.
pub fn ground_state(h_total: &ComplexMatrix) -> Result<(f64, DensePureState)> {
    let dev = h_total.hermiticity_deviation();
    if dev > 1e-10 * h_total.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let (vals, vecs) = hermitian_eigen(h_total);
    let mut v = vecs.into_iter().next().ok_or(Error::ZeroVector)?;
    let lead = v.iter().copied().fold(C64::new(0.0, 0.0), |m, z| if z.norm() > m.norm() { z } else { m });
    let phase = lead.conj() / lead.norm();
    v.iter_mut().for_each(|z| *z *= phase);
    Ok((vals[0], DensePureState::normalized(v)?))
}
