//! Closed-form 4×4 matrices for a pair of qubits `H_X = ω_X σ_z / 2`.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with `σ_z|0⟩ = -|0⟩`, so the local
//! spectra are `{-ω_X/2, +ω_X/2}` and no shift to a zero ground level is made.
//! The target is `e^{iθ_0}√λ |00⟩ + e^{iθ_1}√(1-λ) |11⟩`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{build_system, BipartiteSystem, SchmidtState, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub lambda: f64,
    pub theta_0: f64,
    pub theta_1: f64,
}

impl TwoQubitParams {
    pub fn new(omega_a: f64, omega_b: f64, lambda: f64, theta_0: f64, theta_1: f64) -> Result<Self> {
        for w in [omega_a, omega_b] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidConfig(format!("qubit frequency must be positive, got {w}")));
            }
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidState(format!("lambda must lie in [0, 1], got {lambda}")));
        }
        Ok(TwoQubitParams { omega_a, omega_b, lambda, theta_0, theta_1 })
    }

    /// MEES at inverse temperature `β`: `1/λ = 1 + e^{-2βω}`.
    pub fn from_beta(omega_a: f64, omega_b: f64, beta: f64, theta_0: f64, theta_1: f64) -> Result<Self> {
        let omega = 0.5 * (omega_a + omega_b);
        Self::new(omega_a, omega_b, 1.0 / (1.0 + (-2.0 * beta * omega).exp()), theta_0, theta_1)
    }

    /// Inverse of [`from_beta`](Self::from_beta); `None` outside `λ ∈ (1/2, 1)`.
    pub fn beta(&self) -> Option<f64> {
        (self.lambda > 0.5 && self.lambda < 1.0)
            .then(|| -(1.0 / self.lambda - 1.0).ln() / (2.0 * self.omega()))
    }

    pub fn omega(&self) -> f64 {
        0.5 * (self.omega_a + self.omega_b)
    }

    pub fn delta_a(&self) -> f64 {
        0.5 * (self.omega_a - self.omega_b)
    }

    pub fn delta_b(&self) -> f64 {
        -self.delta_a()
    }

    pub fn system(&self) -> Result<BipartiteSystem> {
        let (a, b) = (0.5 * self.omega_a, 0.5 * self.omega_b);
        build_system(Spectrum::new(vec![-a, a])?, Spectrum::new(vec![-b, b])?)
    }

    pub fn target(&self) -> Result<SchmidtState> {
        SchmidtState::new(vec![self.lambda, 1.0 - self.lambda], vec![self.theta_0, self.theta_1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixtureName {
    Us,
    UaTilde,
    UbTilde,
    HSi,
    HSim,
    HS,
    HA,
    HB,
    HEmp,
}

impl FixtureName {
    pub const ALL: [FixtureName; 9] = [
        FixtureName::Us,
        FixtureName::UaTilde,
        FixtureName::UbTilde,
        FixtureName::HSi,
        FixtureName::HSim,
        FixtureName::HS,
        FixtureName::HA,
        FixtureName::HB,
        FixtureName::HEmp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureName::Us => "US",
            FixtureName::UaTilde => "UA_tilde",
            FixtureName::UbTilde => "UB_tilde",
            FixtureName::HSi => "H_si",
            FixtureName::HSim => "H_sim",
            FixtureName::HS => "H_S",
            FixtureName::HA => "H_A",
            FixtureName::HB => "H_B",
            FixtureName::HEmp => "H_emp",
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FixtureName::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

/// Looks a fixture up by name.
pub fn fixture_by_name(name: &str, p: &TwoQubitParams, coupling: f64) -> Result<ComplexMatrix> {
    Ok(fixture(name.parse()?, p, coupling))
}

/// `coupling` is `V_S` for `H_si`, `V_L` for `H_sim` and `g` for `H_emp`;
/// the other fixtures ignore it.
pub fn fixture(name: FixtureName, p: &TwoQubitParams, coupling: f64) -> ComplexMatrix {
    let re = |x: f64| C64::new(x, 0.0);
    let z = re(0.0);
    let l = p.lambda;
    let sl = l.sqrt();
    let sm = (1.0 - l).sqrt();
    let r = (l * (1.0 - l)).sqrt();
    let e0 = C64::from_polar(1.0, p.theta_0);
    let e1 = C64::from_polar(1.0, p.theta_1);
    let d = C64::from_polar(1.0, p.theta_0 - p.theta_1);
    let dc = d.conj();
    let w = p.omega();
    let v = coupling;
    let rows: [[C64; 4]; 4] = match name {
        FixtureName::Us => [
            [e0 * sl, z, z, -d * sm],
            [z, re(1.0), z, z],
            [z, z, re(1.0), z],
            [e1 * sm, z, z, re(sl)],
        ],
        FixtureName::UaTilde => [
            [e0 * sl, z, -d * sm, z],
            [z, e0 * sl, z, -d * sm],
            [z, e1 * sm, z, re(sl)],
            [e1 * sm, z, re(sl), z],
        ],
        FixtureName::UbTilde => [
            [e0 * sl, -d * sm, z, z],
            [z, z, e1 * sm, re(sl)],
            [z, z, e0 * sl, -d * sm],
            [e1 * sm, re(sl), z, z],
        ],
        FixtureName::HSi => [
            [re(w - v * l), z, z, -d * v * r],
            [z, re(p.delta_a()), z, z],
            [z, z, re(p.delta_b()), z],
            [-dc * v * r, z, z, re(-v * (1.0 - l) - w)],
        ],
        FixtureName::HSim => [
            [re(w - v * l), z, z, -d * v * r],
            [z, z, z, z],
            [z, z, z, z],
            [-dc * v * r, z, z, re(-v * (1.0 - l) - w)],
        ],
        FixtureName::HS => {
            let s = 2.0 * w;
            [
                [re(s * (1.0 - l)), z, z, -d * s * r],
                [z, z, z, z],
                [z, z, z, z],
                [-dc * s * r, z, z, re(s * (l - 1.0))],
            ]
        }
        FixtureName::HA => {
            let (s, q) = (p.omega_a, p.omega_b / p.omega_a);
            [
                [re(s * (1.0 - l)), z, z, -d * s * r],
                [z, re(s * (1.0 - l)), -d * s * r, z],
                [z, -dc * s * r, re(s * (l - 1.0 + q)), z],
                [-dc * s * r, z, z, re(s * (l - 1.0 - q))],
            ]
        }
        FixtureName::HB => {
            let (s, q) = (p.omega_b, p.omega_a / p.omega_b);
            [
                [re(s * (1.0 - l)), z, z, -d * s * r],
                [z, re(s * (l - 1.0 + q)), -dc * s * r, z],
                [z, -d * s * r, re(s * (1.0 - l)), z],
                [-dc * s * r, z, z, re(s * (l - 1.0 - q))],
            ]
        }
        FixtureName::HEmp => [
            [z, z, z, re(v)],
            [z, z, z, z],
            [z, z, z, z],
            [re(v), z, z, z],
        ],
    };
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.to_vec()).collect();
    ComplexMatrix::from_rows(&rows).expect("4x4 fixture")
}

/// Whether `a = α b` for some real `α`, up to `tol` on entrywise ratios.
pub fn proportional(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    let mut ratio: Option<C64> = None;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        match (x.norm() > tol, y.norm() > tol) {
            (false, false) => {}
            (true, true) => {
                let q = x / y;
                match ratio {
                    None => ratio = Some(q),
                    Some(r) if (q - r).norm() > tol => return false,
                    _ => {}
                }
            }
            _ => return false,
        }
    }
    true
}
