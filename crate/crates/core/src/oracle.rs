//! Born-rule construction of the qubit pre/post-selection tables.
//!
//! Works directly with states, projectors and the weak Z operation as real
//! 2-vectors and 2x2 matrices; it never touches the closed-form coefficient
//! vectors, so agreement between the two is a genuine check.

use crate::error::Result;
use crate::generators::QubitPair;
use crate::model::{Outcome, ProbabilityTable, Sign};

type Vec2 = [f64; 2];
type Mat2 = [[f64; 2]; 2];

const PAULI_Z: Mat2 = [[1.0, 0.0], [0.0, -1.0]];

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn outer(a: Vec2, b: Vec2) -> Mat2 {
    [[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]]
}

fn matmul(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn add(a: Mat2, b: Mat2) -> Mat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

fn scale(k: f64, a: Mat2) -> Mat2 {
    [[k * a[0][0], k * a[0][1]], [k * a[1][0], k * a[1][1]]]
}

fn apply(a: Mat2, v: Vec2) -> Vec2 {
    [dot(a[0], v), dot(a[1], v)]
}

fn trace(a: Mat2) -> f64 {
    a[0][0] + a[1][1]
}

/// `<v|A|v>`.
fn expectation(v: Vec2, a: Mat2) -> f64 {
    dot(v, apply(a, v))
}

/// Eigenvector of Z for outcome `s`.
fn z_eigenstate(s: Sign) -> Vec2 {
    match s {
        Sign::Plus => [1.0, 0.0],
        Sign::Minus => [0.0, 1.0],
    }
}

/// The weak Z operation `E_s rho = (rho + s lam/2 (Z rho + rho Z)) / 2`.
pub fn weak_operation(rho: Mat2, s: Sign, lam: f64) -> Mat2 {
    let anti = add(matmul(PAULI_Z, rho), matmul(rho, PAULI_Z));
    scale(0.5, add(rho, scale(s.value() * lam / 2.0, anti)))
}

/// How the intermediate Z measurement is performed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasurementMode {
    /// Projective measurement in the Z eigenbasis.
    Strong,
    /// The weak operation with the given weakness parameter.
    Weak(f64),
}

/// `Pr(s | psi)` under the given measurement.
pub fn prob_s_given_psi(pair: &QubitPair, mode: MeasurementMode, psi: Sign, s: Sign) -> f64 {
    let pre = pair.pre_state(psi);
    match mode {
        MeasurementMode::Strong => dot(z_eigenstate(s), pre).powi(2),
        MeasurementMode::Weak(lam) => trace(weak_operation(outer(pre, pre), s, lam)),
    }
}

/// `Pr(s, phi | psi)` under the given measurement.
pub fn prob_s_phi_given_psi(
    pair: &QubitPair,
    mode: MeasurementMode,
    psi: Sign,
    s: Sign,
    phi: Sign,
) -> f64 {
    let pre = pair.pre_state(psi);
    let post = pair.post_state(phi);
    match mode {
        MeasurementMode::Strong => {
            let ket = z_eigenstate(s);
            dot(ket, pre).powi(2) * dot(post, ket).powi(2)
        }
        MeasurementMode::Weak(lam) => expectation(post, weak_operation(outer(pre, pre), s, lam)),
    }
}

/// Joint table with `Pr(psi) = 1/2`.
pub fn quantum_oracle(theta: f64, mode: MeasurementMode) -> Result<ProbabilityTable> {
    let pair = QubitPair::new(theta)?;
    if let MeasurementMode::Weak(lam) = mode {
        crate::generators::WeakMeasurement::new(lam, &pair)?;
    }
    let mut p = [0.0; 8];
    for o in Outcome::all() {
        p[o.index()] = 0.5 * prob_s_phi_given_psi(&pair, mode, o.psi, o.s, o.phi);
    }
    ProbabilityTable::new(p)
}

/// `<post|Z|pre> / <post|pre>` for the given pre- and post-selection labels.
pub fn weak_value_of_z(pair: &QubitPair, psi: Sign, phi: Sign) -> f64 {
    let pre = pair.pre_state(psi);
    let post = pair.post_state(phi);
    dot(post, apply(PAULI_Z, pre)) / dot(post, pre)
}
