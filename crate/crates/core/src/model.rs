//! Bipartite system, entanglement entropy and minimum-energy entangled states.
//!
//! Energies use ħ = k_B = 1; β carries inverse-energy units and entropies are
//! in nats. Product-basis kets `|A_i B_j⟩` are stored at index `i·N_B + j`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};

/// Weights below this are treated as exactly zero.
pub const WEIGHT_EPS: f64 = 1e-14;

/// Nondecreasing list of at least two real energy levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    levels: Vec<f64>,
}

impl Spectrum {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::EmptySpectrum(levels.len()));
        }
        for (k, &x) in levels.iter().enumerate() {
            if !x.is_finite() || (k > 0 && x < levels[k - 1]) {
                return Err(Error::UnsortedSpectrum { index: k });
            }
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    fn shifted(&self, by: f64) -> Self {
        Self { levels: self.levels.iter().map(|x| x - by).collect() }
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let levels = Vec::<f64>::deserialize(d)?;
        Spectrum::new(levels).map_err(serde::de::Error::custom)
    }
}

/// On-disk system description: `{ "spectrum_a": [..], "spectrum_b": [..] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub spectrum_a: Vec<f64>,
    pub spectrum_b: Vec<f64>,
}

impl SystemFile {
    pub fn build(&self) -> Result<BipartiteSystem> {
        build_system(Spectrum::new(self.spectrum_a.clone())?, Spectrum::new(self.spectrum_b.clone())?)
    }
}

/// Two local spectra with `N_A ≤ N_B` and nondegenerate local ground states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteSystem {
    spectrum_a: Spectrum,
    spectrum_b: Spectrum,
    /// True when the arguments to [`build_system`] were exchanged to get `N_A ≤ N_B`.
    swapped: bool,
    /// Amounts subtracted from the A and B levels by [`BipartiteSystem::shifted`].
    offset: (f64, f64),
    diag_energies: Vec<f64>,
}

pub fn build_system(spec_a: Spectrum, spec_b: Spectrum) -> Result<BipartiteSystem> {
    let (a, b, swapped) = if spec_a.len() > spec_b.len() {
        (spec_b, spec_a, true)
    } else {
        (spec_a, spec_b, false)
    };
    let (la, lb) = (a.levels(), b.levels());
    if la[1] <= la[0] {
        return Err(Error::DegenerateGround(if swapped { 'B' } else { 'A' }));
    }
    if lb[1] <= lb[0] {
        return Err(Error::DegenerateGround(if swapped { 'A' } else { 'B' }));
    }
    let diag_energies = (0..a.len()).map(|i| la[i] + lb[i]).collect();
    Ok(BipartiteSystem { spectrum_a: a, spectrum_b: b, swapped, offset: (0.0, 0.0), diag_energies })
}

impl BipartiteSystem {
    /// Parses `"a0,a1,..;b0,b1,.."`.
    pub fn from_inline(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(';').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidConfig(format!("expected two `;`-separated spectra, got `{spec}`")));
        }
        let parse = |s: &str| -> Result<Vec<f64>> {
            s.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::InvalidConfig(format!("`{t}`: {e}"))))
                .collect()
        };
        build_system(Spectrum::new(parse(parts[0])?)?, Spectrum::new(parse(parts[1])?)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<SystemFile>(text)?.build()
    }

    pub fn to_file(&self) -> SystemFile {
        SystemFile {
            spectrum_a: self.spectrum_a.levels().to_vec(),
            spectrum_b: self.spectrum_b.levels().to_vec(),
        }
    }

    /// Same system with both local ground energies moved to zero.
    pub fn shifted(&self) -> Self {
        let (a0, b0) = (self.a(0), self.b(0));
        let a = self.spectrum_a.shifted(a0);
        let b = self.spectrum_b.shifted(b0);
        let diag_energies = (0..a.len()).map(|i| a.levels()[i] + b.levels()[i]).collect();
        Self {
            spectrum_a: a,
            spectrum_b: b,
            swapped: self.swapped,
            offset: (self.offset.0 + a0, self.offset.1 + b0),
            diag_energies,
        }
    }

    pub fn spectrum_a(&self) -> &Spectrum {
        &self.spectrum_a
    }

    pub fn spectrum_b(&self) -> &Spectrum {
        &self.spectrum_b
    }

    pub fn swapped(&self) -> bool {
        self.swapped
    }

    pub fn offset(&self) -> (f64, f64) {
        self.offset
    }

    pub fn n_a(&self) -> usize {
        self.spectrum_a.len()
    }

    pub fn n_b(&self) -> usize {
        self.spectrum_b.len()
    }

    pub fn n_s(&self) -> usize {
        self.n_a() * self.n_b()
    }

    pub fn a(&self, i: usize) -> f64 {
        self.spectrum_a.levels()[i]
    }

    pub fn b(&self, j: usize) -> f64 {
        self.spectrum_b.levels()[j]
    }

    /// `E_i = A_i + B_i`, `0 ≤ i < N_A`.
    pub fn diag_energies(&self) -> &[f64] {
        &self.diag_energies
    }

    pub fn ground_energy(&self) -> f64 {
        self.diag_energies[0]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_b() + j
    }

    /// Product-basis index of `|E_i⟩ = |A_i B_i⟩`.
    pub fn diag_index(&self, i: usize) -> usize {
        self.index(i, i)
    }

    /// Eigenvalues of `H_0` in product-basis order.
    pub fn h0_diagonal(&self) -> Vec<f64> {
        let mut d = Vec::with_capacity(self.n_s());
        for i in 0..self.n_a() {
            for j in 0..self.n_b() {
                d.push(self.a(i) + self.b(j));
            }
        }
        d
    }

    pub fn h0(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.h0_diagonal())
    }

    pub fn max_energy(&self) -> f64 {
        self.a(self.n_a() - 1) + self.b(self.n_b() - 1)
    }

    /// `Δ = min(A_1 - A_0, B_1 - B_0)`
    pub fn gap(&self) -> f64 {
        (self.a(1) - self.a(0)).min(self.b(1) - self.b(0))
    }

    /// `ln N_A`, the largest entanglement a pure state can carry.
    pub fn max_entanglement(&self) -> f64 {
        (self.n_a() as f64).ln()
    }
}

/// State supported on the diagonal kets: `Σ_i e^{iθ_i} √λ_i |E_i⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtState {
    pub weights: Vec<f64>,
    pub phases: Vec<f64>,
}

impl SchmidtState {
    pub fn new(weights: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if weights.len() != phases.len() {
            return Err(Error::DimensionMismatch { expected: weights.len(), got: phases.len() });
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidState("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights, phases })
    }

    /// Weights with all phases zero.
    pub fn real(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        Self::new(weights, vec![0.0; n])
    }

    /// Reads weights and phases off (not necessarily normalized) amplitudes.
    pub fn from_amplitudes(amps: &[C64]) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm2.sqrt() < 1e-12 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            weights: amps.iter().map(|z| z.norm_sqr() / norm2).collect(),
            phases: amps.iter().map(|z| z.arg()).collect(),
        })
    }

    /// `|E_0⟩`
    pub fn ground(n: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[0] = 1.0;
        Self { weights, phases: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        self.weights
            .iter()
            .zip(&self.phases)
            .map(|(&w, &t)| C64::from_polar(w.sqrt(), t))
            .collect()
    }

    pub fn with_phases(mut self, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != self.weights.len() {
            return Err(Error::DimensionMismatch { expected: self.weights.len(), got: phases.len() });
        }
        self.phases = phases;
        Ok(self)
    }
}

/// Unit-norm amplitude vector over the product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensePureState {
    amplitudes: Vec<C64>,
}

impl DensePureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n = crate::linalg::norm(&amplitudes);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("norm {n} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = crate::linalg::norm(&amplitudes);
        if n < 1e-12 {
            return Err(Error::ZeroVector);
        }
        amplitudes.iter_mut().for_each(|z| *z /= n);
        Ok(Self { amplitudes })
    }

    pub fn basis(system: &BipartiteSystem, i: usize, j: usize) -> Self {
        let mut amplitudes = vec![ZERO; system.n_s()];
        amplitudes[system.index(i, j)] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// Minimum-energy entangled state at a given entanglement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeesSolution {
    pub beta_g: f64,
    /// Partition function of the diagonal energies measured from `E_0`,
    /// `Σ_i e^{-β_g (E_i - E_0)}`.
    pub z_g: f64,
    /// `⟨H_0⟩` of the state (absolute, not shifted).
    pub e_g: f64,
    pub state: SchmidtState,
}

/// `-Σ p ln p` with `0 ln 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p >= WEIGHT_EPS).map(|&p| -p * p.ln()).sum()
}

pub fn schmidt_entropy(state: &SchmidtState) -> f64 {
    shannon_entropy(&state.weights)
}

/// Schmidt coefficients (squared singular values) of the `N_A × N_B` amplitude matrix.
pub fn schmidt_coefficients(state: &DensePureState, system: &BipartiteSystem) -> Vec<f64> {
    let m = DMatrix::from_row_slice(system.n_a(), system.n_b(), state.amplitudes());
    m.singular_values().iter().map(|s| s * s).collect()
}

pub fn entanglement_entropy(state: &DensePureState, system: &BipartiteSystem) -> f64 {
    shannon_entropy(&schmidt_coefficients(state, system))
}

/// `Σ_i e^{-β (E_i - E_0)}` over the diagonal energies.
pub fn partition_function(system: &BipartiteSystem, beta: f64) -> f64 {
    let e0 = system.ground_energy();
    system.diag_energies().iter().map(|e| (-beta * (e - e0)).exp()).sum()
}

/// Thermal weights over `energies` at inverse temperature `beta`.
pub(crate) fn thermal_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// `ln Z + β⟨E⟩`, energies measured from the minimum.
pub(crate) fn thermal_entropy(energies: &[f64], beta: f64) -> f64 {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    let mean: f64 = w.iter().zip(energies).map(|(x, e)| x * (e - e0)).sum::<f64>() / z;
    z.ln() + beta * mean
}

/// Inverse temperature at which the thermal distribution over `energies`
/// has entropy `target`. Bracketed bisection; the bracket grows geometrically
/// from `β = 1` until the entropy drops below the target.
pub(crate) fn solve_thermal_beta(energies: &[f64], target: f64) -> Result<f64> {
    let max = (energies.len() as f64).ln();
    if !(target > 0.0 && target < max) {
        return Err(Error::OutOfRange { value: target, max });
    }
    let lo_e = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let hi_e = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi_e - lo_e <= 0.0 {
        return Err(Error::NonMonotone);
    }
    let f = |b: f64| thermal_entropy(energies, b) - target;
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::OutOfRange { value: target, max });
        }
    }
    let mut lo = 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn mees_at(system: &BipartiteSystem, beta: f64) -> MeesSolution {
    let energies = system.diag_energies();
    let weights = thermal_weights(energies, beta);
    let e0 = system.ground_energy();
    let e_g = e0 + weights.iter().zip(energies).map(|(p, e)| p * (e - e0)).sum::<f64>();
    let n = weights.len();
    MeesSolution {
        beta_g: beta,
        z_g: partition_function(system, beta),
        e_g,
        state: SchmidtState { weights, phases: vec![0.0; n] },
    }
}

/// MEES carrying entanglement `entanglement` (nats); phases default to zero.
pub fn solve_beta_g(system: &BipartiteSystem, entanglement: f64) -> Result<MeesSolution> {
    let beta = solve_thermal_beta(system.diag_energies(), entanglement)?;
    Ok(mees_at(system, beta))
}

/// MEES for a given `β_g ≥ 0`, no root solve.
pub fn mees_from_beta(system: &BipartiteSystem, beta: f64) -> Result<MeesSolution> {
    if beta < 0.0 || !beta.is_finite() {
        return Err(Error::OutOfRange { value: beta, max: f64::INFINITY });
    }
    Ok(mees_at(system, beta))
}

/// `Σ_i e^{iθ_i} √λ_i |A_i B_i⟩`
pub fn embed(state: &SchmidtState, system: &BipartiteSystem) -> Result<DensePureState> {
    if state.len() != system.n_a() {
        return Err(Error::DimensionMismatch { expected: system.n_a(), got: state.len() });
    }
    let mut amplitudes = vec![ZERO; system.n_s()];
    for (i, z) in state.amplitudes().into_iter().enumerate() {
        amplitudes[system.diag_index(i)] = z;
    }
    DensePureState::normalized(amplitudes)
}

/// `⟨ψ|H_0|ψ⟩`
pub fn energy_expectation(state: &DensePureState, system: &BipartiteSystem) -> f64 {
    state
        .amplitudes()
        .iter()
        .zip(system.h0_diagonal())
        .map(|(c, e)| c.norm_sqr() * e)
        .sum()
}

/// `⟨φ|H_0|φ⟩` for a diagonal-sector state, without embedding.
pub fn schmidt_energy(state: &SchmidtState, system: &BipartiteSystem) -> f64 {
    state.weights.iter().zip(system.diag_energies()).map(|(w, e)| w * e).sum()
}
