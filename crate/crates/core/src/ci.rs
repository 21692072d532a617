//! Conditional independence of `s` and `phi` given `psi`.
//!
//! The verdict comes from the operational factorization test on the table:
//! for each `psi` with nonzero probability, `E[s phi|psi] = E[s|psi] E[phi|psi]`
//! (for two `±1` variables zero covariance is equivalent to independence).
//!
//! Two coefficient-level diagnostics are reported alongside:
//!
//! * the `c1 = 0` matching conditions `c6 = c2 c3 + c4 c5` and `c7 = c2 c5 + c3 c4`;
//! * the general conditions `c6 + c1 c7 = c2 c3 + c4 c5` and
//!   `c7 + c1 c6 = c2 c5 + c3 c4`, which reduce to the former when `c1 = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CoefficientVector, Outcome, ProbabilityTable, Sign};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CIReport {
    /// `|E[s phi|psi] - E[s|psi] E[phi|psi]|` indexed by `b(psi)`; `None` where `Pr(psi)` is null.
    pub factor_residual: [Option<f64>; 2],
    /// `(|c6 - c2 c3 - c4 c5|, |c7 - c2 c5 - c3 c4|)`.
    pub paper_residuals: (f64, f64),
    /// `(|c6 + c1 c7 - c2 c3 - c4 c5|, |c7 + c1 c6 - c2 c5 - c3 c4|)`.
    pub general_residuals: (f64, f64),
    pub is_ci: bool,
}

impl CIReport {
    pub fn factor_residual(&self, psi: Sign) -> Option<f64> {
        self.factor_residual[psi.bit()]
    }
}

pub fn ci_report(table: &ProbabilityTable) -> CIReport {
    let mut factor_residual = [None; 2];
    for psi in Sign::BOTH {
        let mass = table.prob_psi(psi);
        if mass <= tol::NULL_EVENT {
            continue;
        }
        let (mut es, mut ephi, mut esphi) = (0.0, 0.0, 0.0);
        for o in Outcome::all().filter(|o| o.psi == psi) {
            let p = table.get(o) / mass;
            es += o.s.value() * p;
            ephi += o.phi.value() * p;
            esphi += o.s.value() * o.phi.value() * p;
        }
        factor_residual[psi.bit()] = Some((esphi - es * ephi).abs());
    }

    let c = table.coefficients();
    let is_ci = factor_residual
        .iter()
        .flatten()
        .all(|&r| r <= tol::CONDITIONAL_INDEPENDENCE);
    CIReport {
        factor_residual,
        paper_residuals: paper_residuals(&c),
        general_residuals: general_residuals(&c),
        is_ci,
    }
}

/// Residuals of the coefficient conditions derived with `c1 = 0`.
pub fn paper_residuals(c: &CoefficientVector) -> (f64, f64) {
    let k = |i| c.get(i);
    (
        (k(6) - k(2) * k(3) - k(4) * k(5)).abs(),
        (k(7) - k(2) * k(5) - k(3) * k(4)).abs(),
    )
}

/// Residuals of the coefficient conditions valid for any `c1`.
pub fn general_residuals(c: &CoefficientVector) -> (f64, f64) {
    let k = |i| c.get(i);
    (
        (k(6) + k(1) * k(7) - k(2) * k(3) - k(4) * k(5)).abs(),
        (k(7) + k(1) * k(6) - k(2) * k(5) - k(3) * k(4)).abs(),
    )
}

/// A model built as `Pr(psi) Pr(s|psi) Pr(phi|psi)`, conditionally independent by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductModel {
    /// `Pr(psi = +1)`.
    pub psi_plus: f64,
    /// `Pr(s = +1 | psi)` indexed by `b(psi)`.
    pub s_plus: [f64; 2],
    /// `Pr(phi = +1 | psi)` indexed by `b(psi)`.
    pub phi_plus: [f64; 2],
}

impl ProductModel {
    pub fn new(psi_plus: f64, s_plus: [f64; 2], phi_plus: [f64; 2]) -> Result<Self> {
        let params = [
            ("psi_plus", psi_plus),
            ("s_plus", s_plus[0]),
            ("s_plus", s_plus[1]),
            ("phi_plus", phi_plus[0]),
            ("phi_plus", phi_plus[1]),
        ];
        for (name, v) in params {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(name, v, "probability must lie in [0, 1]"));
            }
        }
        Ok(ProductModel {
            psi_plus,
            s_plus,
            phi_plus,
        })
    }

    /// Reads the five probabilities from a flat slice, clamping each into `[0, 1]`.
    pub fn from_clamped(x: &[f64]) -> Self {
        let c = |v: f64| v.clamp(0.0, 1.0);
        ProductModel {
            psi_plus: c(x[0]),
            s_plus: [c(x[1]), c(x[2])],
            phi_plus: [c(x[3]), c(x[4])],
        }
    }

    pub fn params(&self) -> [f64; 5] {
        [
            self.psi_plus,
            self.s_plus[0],
            self.s_plus[1],
            self.phi_plus[0],
            self.phi_plus[1],
        ]
    }

    pub fn table(&self) -> ProbabilityTable {
        let pick = |p_plus: f64, sign: Sign| match sign {
            Sign::Plus => p_plus,
            Sign::Minus => 1.0 - p_plus,
        };
        let mut p = [0.0; 8];
        for o in Outcome::all() {
            let b = o.psi.bit();
            p[o.index()] = pick(self.psi_plus, o.psi)
                * pick(self.s_plus[b], o.s)
                * pick(self.phi_plus[b], o.phi);
        }
        ProbabilityTable::new(p).expect("product of probabilities is a valid table")
    }
}
