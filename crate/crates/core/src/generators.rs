//! Named model families: strong and weak qubit measurements, the classical
//! disturbance model, the maximal classical model and the box world.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CoefficientVector, Outcome, ProbabilityTable, Sign};
use crate::oracle;

/// Pre-selection states `(cos t/2, sin t/2)` and post-selection states
/// `(cos t/2, -sin t/2)` with their orthogonal complements.
///
/// Labels: the first pre-selection state is `psi = +1`, the first
/// post-selection state is `phi = -1`; complements carry the opposite sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitPair {
    theta: f64,
}

impl QubitPair {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(Error::domain(
                "theta",
                theta,
                "must lie in the open interval (0, pi/2)",
            ));
        }
        Ok(QubitPair { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn pre_state(&self, psi: Sign) -> [f64; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        match psi {
            Sign::Plus => [c, s],
            Sign::Minus => [-s, c],
        }
    }

    pub fn post_state(&self, phi: Sign) -> [f64; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        match phi {
            Sign::Minus => [c, -s],
            Sign::Plus => [s, c],
        }
    }
}

/// Weakness parameter of the intermediate Z measurement, `0 <= lam <= cos(theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakMeasurement {
    lam: f64,
}

impl WeakMeasurement {
    pub fn new(lam: f64, pair: &QubitPair) -> Result<Self> {
        let bound = pair.theta().cos();
        if !(0.0..=bound).contains(&lam) {
            return Err(Error::domain(
                "lambda",
                lam,
                format!("must lie in [0, cos(theta)] = [0, {bound}]"),
            ));
        }
        Ok(WeakMeasurement { lam })
    }

    pub fn lam(&self) -> f64 {
        self.lam
    }
}

/// `(0, 0, 0, cos t, -cos^2 t, -cos t, 0)` without domain checks.
pub fn strong_coefficients(theta: f64) -> CoefficientVector {
    let c = theta.cos();
    CoefficientVector::new([0.0, 0.0, 0.0, c, -c * c, -c, 0.0])
}

/// `(0, 0, 0, lam cos t, -cos 2t, -lam cos t, 0)` without domain checks.
pub fn weak_coefficients(theta: f64, lam: f64) -> CoefficientVector {
    let c = theta.cos();
    CoefficientVector::new([0.0, 0.0, 0.0, lam * c, -(2.0 * theta).cos(), -lam * c, 0.0])
}

pub fn quantum_strong(theta: f64) -> Result<CoefficientVector> {
    QubitPair::new(theta)?;
    Ok(strong_coefficients(theta))
}

pub fn quantum_weak(theta: f64, lam: f64) -> Result<CoefficientVector> {
    let pair = QubitPair::new(theta)?;
    WeakMeasurement::new(lam, &pair)?;
    Ok(weak_coefficients(theta, lam))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakValueReport {
    pub z_w: f64,
    pub amplified_shift: f64,
}

/// Weak value of Z for the pre-selection `psi = +1` and post-selection `phi = -1`
/// states, and the shift `lam z_w psi` it predicts for the `phi = -psi` ensemble.
pub fn weak_value(theta: f64, lam: f64, psi: Sign) -> Result<WeakValueReport> {
    let pair = QubitPair::new(theta)?;
    WeakMeasurement::new(lam, &pair)?;
    let z_w = oracle::weak_value_of_z(&pair, Sign::Plus, Sign::Minus);
    Ok(WeakValueReport {
        z_w,
        amplified_shift: lam * z_w * psi.value(),
    })
}

/// `(0, 0, delta, lam, 0, 0, 0)`: `phi` depends on `psi`, `s` tracks `psi`.
pub fn classical_disturbance(lam: f64, delta: f64) -> Result<CoefficientVector> {
    if !(0.0..=1.0).contains(&lam) {
        return Err(Error::domain("lambda", lam, "must lie in [0, 1]"));
    }
    if !(delta > 0.0 && delta < 1.0 - lam) {
        return Err(Error::domain(
            "delta",
            delta,
            format!("must lie in (0, 1 - lambda) = (0, {})", 1.0 - lam),
        ));
    }
    Ok(CoefficientVector::new([
        0.0, 0.0, delta, lam, 0.0, 0.0, 0.0,
    ]))
}

/// Only `c7 = 1`: `p = (1 + psi s phi) / 8`.
pub fn classical_maximal() -> CoefficientVector {
    CoefficientVector::new([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
}

/// A ball placed uniformly at random in one of a set of boxes at cube vertices.
/// Each box `(x, y, z)` reads out deterministically as `psi = x` (left/right),
/// `s = y` (front/back) and `phi = z` (top/bottom).
#[derive(Clone, Debug, PartialEq)]
pub struct BoxWorld {
    boxes: Vec<[Sign; 3]>,
}

impl BoxWorld {
    /// The four even-parity vertices, `x y z = +1`.
    pub fn canonical() -> Self {
        use Sign::{Minus as M, Plus as P};
        BoxWorld {
            boxes: vec![[P, P, P], [P, M, M], [M, P, M], [M, M, P]],
        }
    }

    pub fn new(boxes: Vec<[Sign; 3]>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::Format("box world needs at least one box".into()));
        }
        for (i, b) in boxes.iter().enumerate() {
            if boxes[..i].contains(b) {
                return Err(Error::Format(format!("duplicate box {b:?}")));
            }
        }
        Ok(BoxWorld { boxes })
    }

    pub fn boxes(&self) -> &[[Sign; 3]] {
        &self.boxes
    }

    pub fn is_canonical(&self) -> bool {
        self.boxes.len() == 4
            && self
                .boxes
                .iter()
                .all(|[x, y, z]| *x * *y * *z == Sign::Plus)
    }
}

pub fn box_world_model(world: &BoxWorld) -> ProbabilityTable {
    let w = 1.0 / world.boxes.len() as f64;
    let mut p = [0.0; 8];
    for &[x, y, z] in &world.boxes {
        p[Outcome::new(x, y, z).index()] += w;
    }
    ProbabilityTable::new(p).expect("uniform placement over boxes is a valid table")
}

/// The named families with their parameters, as exposed on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Qs { theta: f64 },
    Qw { theta: f64, lambda: f64 },
    Cd { lambda: f64, delta: f64 },
    Cmax,
    Boxes,
}

impl Generator {
    pub const NAMES: [&'static str; 5] = ["qs", "qw", "cd", "cmax", "boxes"];

    /// Builds a generator from its name and optional parameters, reporting missing ones.
    pub fn from_name(
        name: &str,
        theta: Option<f64>,
        lambda: Option<f64>,
        delta: Option<f64>,
    ) -> Result<Self> {
        let need = |v: Option<f64>, p: &str| {
            v.ok_or_else(|| Error::Format(format!("generator {name} requires --{p}")))
        };
        Ok(match name {
            "qs" => Generator::Qs {
                theta: need(theta, "theta")?,
            },
            "qw" => Generator::Qw {
                theta: need(theta, "theta")?,
                lambda: need(lambda, "lambda")?,
            },
            "cd" => Generator::Cd {
                lambda: need(lambda, "lambda")?,
                delta: need(delta, "delta")?,
            },
            "cmax" => Generator::Cmax,
            "boxes" => Generator::Boxes,
            other => {
                return Err(Error::Format(format!(
                    "unknown generator {other:?}; expected one of {:?}",
                    Self::NAMES
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::Qs { .. } => "qs",
            Generator::Qw { .. } => "qw",
            Generator::Cd { .. } => "cd",
            Generator::Cmax => "cmax",
            Generator::Boxes => "boxes",
        }
    }

    pub fn coefficients(&self) -> Result<CoefficientVector> {
        match *self {
            Generator::Qs { theta } => quantum_strong(theta),
            Generator::Qw { theta, lambda } => quantum_weak(theta, lambda),
            Generator::Cd { lambda, delta } => classical_disturbance(lambda, delta),
            Generator::Cmax => Ok(classical_maximal()),
            Generator::Boxes => Ok(box_world_model(&BoxWorld::canonical()).coefficients()),
        }
    }

    pub fn table(&self) -> Result<ProbabilityTable> {
        match self {
            Generator::Boxes => Ok(box_world_model(&BoxWorld::canonical())),
            other => other.coefficients()?.to_table(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::shift_report;
    use std::f64::consts::FRAC_PI_3;

    const P: Sign = Sign::Plus;
    const M: Sign = Sign::Minus;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn strong_at_sixty_degrees() {
        let c = quantum_strong(FRAC_PI_3).unwrap();
        assert!(close(
            c.as_array(),
            &[0.0, 0.0, 0.0, 0.5, -0.25, -0.5, 0.0],
            1e-15
        ));
    }

    #[test]
    fn strong_tends_to_uniform_near_right_angle() {
        let c = quantum_strong(FRAC_PI_2 - 1e-9).unwrap();
        assert!(c.as_array().iter().all(|v| v.abs() < 1e-8));
        assert!(strong_coefficients(FRAC_PI_2)
            .as_array()
            .iter()
            .all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn strong_shifts() {
        for theta in [0.2, 0.7, FRAC_PI_3, 1.3] {
            let r = shift_report(&quantum_strong(theta).unwrap().to_table().unwrap()).unwrap();
            let c = theta.cos();
            assert!((r.pre(P).unwrap() - c).abs() < 1e-14);
            assert!((r.pre(M).unwrap() + c).abs() < 1e-14);
            assert!((r.post(P, M).unwrap() - 2.0 * c / (1.0 + c * c)).abs() < 1e-14);
        }
    }

    #[test]
    fn weak_at_sixty_degrees() {
        let c = quantum_weak(FRAC_PI_3, 0.4).unwrap();
        assert!(close(
            c.as_array(),
            &[0.0, 0.0, 0.0, 0.2, 0.5, -0.2, 0.0],
            1e-15
        ));
    }

    #[test]
    fn weak_without_strength_has_no_shift() {
        let c = quantum_weak(0.9, 0.0).unwrap();
        let nonzero: Vec<_> = (1..=7).filter(|&k| c.get(k) != 0.0).collect();
        assert_eq!(nonzero, vec![5]);
        let r = shift_report(&c.to_table().unwrap()).unwrap();
        for (psi, phi) in crate::model::pairs() {
            assert_eq!(r.pre(psi), Some(0.0));
            assert_eq!(r.post(psi, phi), Some(0.0));
        }
    }

    #[test]
    fn weak_at_positivity_boundary() {
        let lam = FRAC_PI_3.cos();
        let c = quantum_weak(FRAC_PI_3, lam).unwrap();
        let t = c.to_table().unwrap();
        assert!(t.get(Outcome::new(P, M, M)).abs() < 1e-16);
    }

    #[test]
    fn weak_domain() {
        assert!(quantum_weak(FRAC_PI_3, 0.51).is_err());
        assert!(quantum_weak(FRAC_PI_3, -0.1).is_err());
        assert!(quantum_weak(0.0, 0.1).is_err());
        assert!(quantum_strong(FRAC_PI_2).is_err());
        assert!(quantum_strong(-0.3).is_err());
    }

    #[test]
    fn weak_value_report() {
        let r = weak_value(FRAC_PI_3, 0.4, M).unwrap();
        assert!((r.z_w - 2.0).abs() < 1e-14);
        assert!((r.amplified_shift + 0.8).abs() < 1e-14);
    }

    #[test]
    fn disturbance_model() {
        let c = classical_disturbance(0.5, 0.4).unwrap();
        assert_eq!(c.as_array(), &[0.0, 0.0, 0.4, 0.5, 0.0, 0.0, 0.0]);
        let r = shift_report(&c.to_table().unwrap()).unwrap();
        assert!((r.post(P, M).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!(r.apss());

        let c = classical_disturbance(0.5, 1e-9).unwrap();
        let r = shift_report(&c.to_table().unwrap()).unwrap();
        assert!((r.post(P, M).unwrap() - 0.5).abs() < 1e-8);

        assert!(classical_disturbance(0.5, 0.6).is_err());
        assert!(classical_disturbance(0.5, 0.0).is_err());
    }

    #[test]
    fn canonical_box_world_is_maximal_model() {
        let bw = BoxWorld::canonical();
        assert!(bw.is_canonical());
        let t = box_world_model(&bw);
        assert_eq!(t, classical_maximal().to_table().unwrap());
        let d = t.conditional_s(P, M).unwrap();
        assert_eq!(d.prob(M), 1.0);
    }

    #[test]
    fn single_box_is_point_mass() {
        let bw = BoxWorld::new(vec![[M, P, M]]).unwrap();
        assert!(!bw.is_canonical());
        assert_eq!(
            box_world_model(&bw),
            ProbabilityTable::point_mass(Outcome::new(M, P, M))
        );
        assert!(BoxWorld::new(vec![]).is_err());
        assert!(BoxWorld::new(vec![[P, P, P], [P, P, P]]).is_err());
    }

    #[test]
    fn generator_names() {
        let g = Generator::from_name("qw", Some(1.0), Some(0.3), None).unwrap();
        assert_eq!(g.name(), "qw");
        assert!(Generator::from_name("qw", Some(1.0), None, None).is_err());
        assert!(Generator::from_name("nope", None, None, None).is_err());
        assert_eq!(
            Generator::Boxes.table().unwrap(),
            Generator::Cmax.table().unwrap()
        );
    }
}
