//! Unitaries mapping the ground state `|E_0⟩` onto a target state.
//!
//! Three constructions are provided: the global unitary `U_S` acting on the
//! diagonal sector of the whole space, and the two "mostly single-system gate"
//! unitaries `Ũ_A = CNOT_A (U_A ⊗ I)` and `Ũ_B = CNOT_B (I ⊗ U_B)`. All of them
//! are built from the same Gram–Schmidt completion of the target, which also
//! factors into two-level rotations followed by a phase gate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::model::{BipartiteSystem, DensePureState, SchmidtState, WEIGHT_EPS};

/// Orthonormal completion of a target vector.
///
/// `vectors[k]` are expressed in the original basis and the associated
/// unitary is `Σ_k |vectors[k]⟩⟨e_k|`, which maps `e_0` onto the target.
/// When the target has no weight on `e_0`, the completion is computed in the
/// relabelled basis where `e_0` and `e_{swap_index}` are exchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSchmidtBasis {
    pub vectors: Vec<Vec<C64>>,
    /// Tail weights `γ_k = λ_0 + Σ_{i>k} λ_i` (relabelled frame), `γ_0 = 1`.
    pub gammas: Vec<f64>,
    pub swap_index: Option<usize>,
}

impl GramSchmidtBasis {
    pub fn unitary(&self) -> ComplexMatrix {
        let n = self.vectors.len();
        let mut u = ComplexMatrix::zeros(n);
        for (k, v) in self.vectors.iter().enumerate() {
            for i in 0..n {
                u[(i, k)] = v[i];
            }
        }
        u
    }
}

/// Weights, phases and the relabelling permutation of a target.
struct Frame {
    weights: Vec<f64>,
    phases: Vec<f64>,
    /// `perm[k]` is the original index of relabelled level `k`.
    perm: Vec<usize>,
    swap_index: Option<usize>,
}

fn frame(weights: &[f64], phases: &[f64]) -> Result<Frame> {
    let n = weights.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swap_index = None;
    if weights[0] < WEIGHT_EPS {
        let star = weights.iter().position(|&w| w > WEIGHT_EPS).ok_or(Error::ZeroVector)?;
        perm.swap(0, star);
        swap_index = Some(star);
    }
    Ok(Frame {
        weights: perm.iter().map(|&p| weights[p]).collect(),
        phases: perm.iter().map(|&p| phases[p]).collect(),
        perm,
        swap_index,
    })
}

/// `γ_0 = 1`, `γ_k = λ_0 + Σ_{i>k} λ_i` for `k ≥ 1` (equal to `1 - Σ_{i=1}^k λ_i`).
pub(crate) fn tail_weights(weights: &[f64]) -> Vec<f64> {
    let n = weights.len();
    let mut gammas = vec![0.0; n];
    let mut tail = 0.0;
    for k in (1..n).rev() {
        gammas[k] = weights[0] + tail;
        tail += weights[k];
    }
    gammas[0] = 1.0;
    gammas
}

pub fn gram_schmidt_basis(target: &[C64]) -> Result<GramSchmidtBasis> {
    let n = target.len();
    let nrm = crate::linalg::norm(target);
    if n == 0 || nrm < 1e-12 {
        return Err(Error::ZeroVector);
    }
    let target: Vec<C64> = target.iter().map(|z| z / nrm).collect();
    let weights: Vec<f64> = target.iter().map(|z| z.norm_sqr()).collect();
    let phases: Vec<f64> = target.iter().map(|z| z.arg()).collect();
    let f = frame(&weights, &phases)?;
    let gammas = tail_weights(&f.weights);
    let (lam, th) = (&f.weights, &f.phases);

    let mut vectors = vec![target];
    for k in 1..n {
        let mut v = vec![ZERO; n];
        let den = (gammas[k] * gammas[k - 1]).sqrt();
        v[f.perm[k]] = C64::new((gammas[k] / gammas[k - 1]).sqrt(), 0.0);
        v[f.perm[0]] = -C64::from_polar((lam[0] * lam[k]).sqrt() / den, th[0] - th[k]);
        for i in k + 1..n {
            v[f.perm[i]] = -C64::from_polar((lam[k] * lam[i]).sqrt() / den, th[i] - th[k]);
        }
        vectors.push(v);
    }
    Ok(GramSchmidtBasis { vectors, gammas, swap_index: f.swap_index })
}

/// `N_A × N_A` unitary taking level 0 onto the Schmidt-form target.
fn local_unitary(target: &SchmidtState) -> Result<ComplexMatrix> {
    Ok(gram_schmidt_basis(&target.amplitudes())?.unitary())
}

fn check_len(target: &SchmidtState, system: &BipartiteSystem) -> Result<()> {
    if target.len() != system.n_a() {
        return Err(Error::DimensionMismatch { expected: system.n_a(), got: target.len() });
    }
    Ok(())
}

/// Global unitary: acts on the diagonal kets `|E_i⟩` and is the identity on
/// every `|A_i B_j⟩` with `i ≠ j`.
pub fn build_us(system: &BipartiteSystem, target: &SchmidtState) -> Result<ComplexMatrix> {
    check_len(target, system)?;
    let w = local_unitary(target)?;
    let mut u = ComplexMatrix::identity(system.n_s());
    for i in 0..system.n_a() {
        for j in 0..system.n_a() {
            u[(system.diag_index(i), system.diag_index(j))] = w[(i, j)];
        }
    }
    Ok(u)
}

/// Unitary with `U|E_0⟩ = target` for an arbitrary dense target, completing
/// `{target, |A_0 B_1⟩, |A_0 B_2⟩, …}` in product-basis order.
pub fn build_us_general(system: &BipartiteSystem, target: &DensePureState) -> Result<ComplexMatrix> {
    if target.len() != system.n_s() {
        return Err(Error::DimensionMismatch { expected: system.n_s(), got: target.len() });
    }
    Ok(gram_schmidt_basis(target.amplitudes())?.unitary())
}

/// `U_A ⊗ I_B`
pub fn build_ua(system: &BipartiteSystem, target: &SchmidtState) -> Result<ComplexMatrix> {
    check_len(target, system)?;
    Ok(local_unitary(target)?.kron(&ComplexMatrix::identity(system.n_b())))
}

/// `I_A ⊗ U_B`, with `U_B` acting on the first `N_A` levels of B.
pub fn build_ub(system: &BipartiteSystem, target: &SchmidtState) -> Result<ComplexMatrix> {
    check_len(target, system)?;
    let w = local_unitary(target)?;
    let mut ub = ComplexMatrix::identity(system.n_b());
    for i in 0..system.n_a() {
        for j in 0..system.n_a() {
            ub[(i, j)] = w[(i, j)];
        }
    }
    Ok(ComplexMatrix::identity(system.n_a()).kron(&ub))
}

fn permutation(system: &BipartiteSystem, map: impl Fn(usize, usize) -> (usize, usize)) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(system.n_s());
    for i in 0..system.n_a() {
        for j in 0..system.n_b() {
            let (ti, tj) = map(i, j);
            u[(system.index(ti, tj), system.index(i, j))] = ONE;
        }
    }
    u
}

/// `|A_i B_j⟩ → |A_i B_{(i+j) mod N_A}⟩` for `j < N_A`, identity for `j ≥ N_A`.
pub fn cnot_a(system: &BipartiteSystem) -> ComplexMatrix {
    let na = system.n_a();
    permutation(system, |i, j| if j < na { (i, (i + j) % na) } else { (i, j) })
}

/// `|A_i B_j⟩ → |A_{(i+j) mod N_A} B_j⟩` for `j < N_A`, identity for `j ≥ N_A`.
pub fn cnot_b(system: &BipartiteSystem) -> ComplexMatrix {
    let na = system.n_a();
    permutation(system, |i, j| if j < na { ((i + j) % na, j) } else { (i, j) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MssgKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// Exchanges levels 0 and `index`; only present for targets with `λ_0 = 0`.
    Swap,
    Rotation,
    FinalPhase,
}

/// One gate of the rotation decomposition.
///
/// A rotation mixes levels 0 and `index`:
/// `|0⟩ → c|0⟩ + e^{iθ} s|i⟩`, `|i⟩ → c|i⟩ - e^{-iθ} s|0⟩`.
/// The final phase multiplies level 0 by `e^{iθ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationFactor {
    pub kind: FactorKind,
    pub index: usize,
    /// `√(γ_i / γ_{i-1})`
    pub c: f64,
    /// `√(λ_i / γ_{i-1})`
    pub s: f64,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subsystem {
    WholeS,
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CnotTag {
    None,
    OnA,
    OnB,
}

/// Ordered gate sequence; `factors[0]` is applied first.
///
/// With a leading swap, rotation indices refer to the relabelled levels in
/// which 0 and the swap index are exchanged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GatePlan {
    pub factors: Vec<RotationFactor>,
    pub cnot: CnotTag,
    pub acting: Subsystem,
}

/// Two-level rotations `U_1 … U_{N-1}` plus the final phase `U_N` for a
/// Schmidt-form target, applied in ascending order. Requires `λ_0 > 0`.
pub fn decompose_rotations(target: &SchmidtState) -> Result<GatePlan> {
    if target.weights[0] < WEIGHT_EPS {
        return Err(Error::ZeroLambda0);
    }
    Ok(GatePlan { factors: rotation_factors(&target.weights, &target.phases), cnot: CnotTag::None, acting: Subsystem::WholeS })
}

fn rotation_factors(weights: &[f64], phases: &[f64]) -> Vec<RotationFactor> {
    let gammas = tail_weights(weights);
    let n = weights.len();
    let mut factors: Vec<RotationFactor> = (1..n)
        .map(|i| RotationFactor {
            kind: FactorKind::Rotation,
            index: i,
            c: (gammas[i] / gammas[i - 1]).sqrt(),
            s: (weights[i] / gammas[i - 1]).sqrt(),
            theta: phases[i],
        })
        .collect();
    factors.push(RotationFactor { kind: FactorKind::FinalPhase, index: n, c: 1.0, s: 0.0, theta: phases[0] });
    factors
}

/// Decomposition for any Schmidt-form target: a leading swap when `λ_0 = 0`,
/// then the rotations of the relabelled target.
fn plan_for(target: &SchmidtState, acting: Subsystem, cnot: CnotTag) -> Result<GatePlan> {
    let f = frame(&target.weights, &target.phases)?;
    let mut factors = Vec::new();
    if let Some(star) = f.swap_index {
        factors.push(RotationFactor { kind: FactorKind::Swap, index: star, c: 0.0, s: 1.0, theta: 0.0 });
    }
    factors.extend(rotation_factors(&f.weights, &f.phases));
    Ok(GatePlan { factors, cnot, acting })
}

impl GatePlan {
    /// Product of the gates as a matrix on the local space of dimension `n`.
    pub fn local_matrix(&self, n: usize) -> ComplexMatrix {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut u = ComplexMatrix::identity(n);
        for f in &self.factors {
            let mut g = ComplexMatrix::identity(n);
            match f.kind {
                FactorKind::Swap => {
                    let (a, b) = (0, f.index);
                    g[(a, a)] = ZERO;
                    g[(b, b)] = ZERO;
                    g[(a, b)] = ONE;
                    g[(b, a)] = ONE;
                    perm.swap(0, f.index);
                }
                FactorKind::Rotation => {
                    let (z, i) = (perm[0], perm[f.index]);
                    g[(z, z)] = C64::new(f.c, 0.0);
                    g[(i, i)] = C64::new(f.c, 0.0);
                    g[(i, z)] = C64::from_polar(f.s, f.theta);
                    g[(z, i)] = -C64::from_polar(f.s, -f.theta);
                }
                FactorKind::FinalPhase => {
                    let z = perm[0];
                    g[(z, z)] = C64::from_polar(1.0, f.theta);
                }
            }
            u = &g * &u;
        }
        u
    }

    /// Full `N_S × N_S` operator, including the trailing CNOT.
    pub fn recompose(&self, system: &BipartiteSystem) -> ComplexMatrix {
        let na = system.n_a();
        let local = self.local_matrix(na);
        let body = match self.acting {
            Subsystem::WholeS => {
                let mut u = ComplexMatrix::identity(system.n_s());
                for i in 0..na {
                    for j in 0..na {
                        u[(system.diag_index(i), system.diag_index(j))] = local[(i, j)];
                    }
                }
                u
            }
            Subsystem::A => local.kron(&ComplexMatrix::identity(system.n_b())),
            Subsystem::B => {
                let mut ub = ComplexMatrix::identity(system.n_b());
                for i in 0..na {
                    for j in 0..na {
                        ub[(i, j)] = local[(i, j)];
                    }
                }
                ComplexMatrix::identity(na).kron(&ub)
            }
        };
        match self.cnot {
            CnotTag::None => body,
            CnotTag::OnA => &cnot_a(system) * &body,
            CnotTag::OnB => &cnot_b(system) * &body,
        }
    }

    /// Applies the gates one by one to a local vector.
    pub fn apply_local(&self, v: &[C64]) -> Vec<C64> {
        let mut perm: Vec<usize> = (0..v.len()).collect();
        let mut out = v.to_vec();
        for f in &self.factors {
            match f.kind {
                FactorKind::Swap => {
                    out.swap(0, f.index);
                    perm.swap(0, f.index);
                }
                FactorKind::Rotation => {
                    let (z, i) = (perm[0], perm[f.index]);
                    let (a0, ai) = (out[z], out[i]);
                    out[z] = a0 * f.c - C64::from_polar(f.s, -f.theta) * ai;
                    out[i] = ai * f.c + C64::from_polar(f.s, f.theta) * a0;
                }
                FactorKind::FinalPhase => {
                    let z = perm[0];
                    out[z] *= C64::from_polar(1.0, f.theta);
                }
            }
        }
        out
    }
}

/// Gate plan of the global unitary `U_S` for any Schmidt-form target.
pub fn global_plan(target: &SchmidtState) -> Result<GatePlan> {
    plan_for(target, Subsystem::WholeS, CnotTag::None)
}

/// `Ũ_A = CNOT_A (U_A ⊗ I)` or `Ũ_B = CNOT_B (I ⊗ U_B)` with its gate plan.
pub fn compose_tilde(
    kind: MssgKind,
    system: &BipartiteSystem,
    target: &SchmidtState,
) -> Result<(ComplexMatrix, GatePlan)> {
    let (local, cnot, plan) = match kind {
        MssgKind::A => (build_ua(system, target)?, cnot_a(system), plan_for(target, Subsystem::A, CnotTag::OnA)?),
        MssgKind::B => (build_ub(system, target)?, cnot_b(system), plan_for(target, Subsystem::B, CnotTag::OnB)?),
    };
    Ok((&cnot * &local, plan))
}
