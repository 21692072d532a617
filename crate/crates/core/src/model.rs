//! Three-dichotomous-variable models: outcomes, coefficient vectors and
//! probability tables, plus the exact marginal and conditional queries.
//!
//! A model assigns probability
//!
//! ```text
//! p(psi, s, phi) = 1/8 [1 + c1 psi + c2 s + c3 phi + c4 psi s + c5 psi phi + c6 s phi + c7 psi s phi]
//! ```
//!
//! to each of the eight sign assignments. Tables are stored flat with index
//! `4 b(psi) + 2 b(s) + b(phi)` where `b(+1) = 0` and `b(-1) = 1`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tol;

/// A dichotomous outcome, `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Bit used by the flat table index: `+1 -> 0`, `-1 -> 1`.
    pub fn bit(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self.flip()
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Sign::from_i64(v)
            .ok_or_else(|| serde::de::Error::custom(format!("sign must be +1 or -1, got {v}")))
    }
}

/// One joint assignment of the pre-selection, intermediate and post-selection outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub psi: Sign,
    pub s: Sign,
    pub phi: Sign,
}

impl Outcome {
    pub fn new(psi: Sign, s: Sign, phi: Sign) -> Self {
        Outcome { psi, s, phi }
    }

    pub fn index(self) -> usize {
        4 * self.psi.bit() + 2 * self.s.bit() + self.phi.bit()
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < 8, "outcome index {index} out of range");
        Outcome {
            psi: Sign::from_bit(index >> 2),
            s: Sign::from_bit(index >> 1),
            phi: Sign::from_bit(index),
        }
    }

    /// All eight assignments in flat-index order.
    pub fn all() -> impl Iterator<Item = Outcome> {
        (0..8).map(Outcome::from_index)
    }

    /// Values of the monomials `psi, s, phi, psi s, psi phi, s phi, psi s phi`.
    pub fn monomials(self) -> [f64; 7] {
        let (a, b, c) = (self.psi.value(), self.s.value(), self.phi.value());
        [a, b, c, a * b, a * c, b * c, a * b * c]
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(psi={}, s={}, phi={})", self.psi, self.s, self.phi)
    }
}

/// Neumaier summation. Entries near a facet are small differences of O(1)
/// terms, so plain summation would lose most of their relative precision.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for t in terms {
        let next = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - next) + t
        } else {
            (t - next) + sum
        };
        sum = next;
    }
    sum + comp
}

/// The correlation coefficients `(c1, ..., c7)`; `c0 = 1` is implicit.
///
/// Any finite vector can be held. Positivity is checked when the vector is
/// turned into a [`ProbabilityTable`] (see [`CoefficientVector::to_table`]) or
/// via [`CoefficientVector::try_new`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientVector([f64; 7]);

impl CoefficientVector {
    pub const ZERO: CoefficientVector = CoefficientVector([0.0; 7]);

    pub fn new(c: [f64; 7]) -> Self {
        CoefficientVector(c)
    }

    /// Builds a vector and checks that it describes a valid model.
    pub fn try_new(c: [f64; 7]) -> Result<Self> {
        let v = CoefficientVector(c);
        v.to_table()?;
        Ok(v)
    }

    pub fn as_array(&self) -> &[f64; 7] {
        &self.0
    }

    /// Coefficient `c_k` for `k` in `0..=7`, with `c_0 = 1`.
    pub fn get(&self, k: usize) -> f64 {
        match k {
            0 => 1.0,
            1..=7 => self.0[k - 1],
            _ => panic!("coefficient index {k} out of range"),
        }
    }

    /// `8 p(outcome)`, the bracket of the expansion. May be negative for invalid vectors.
    pub fn scaled_entry(&self, outcome: Outcome) -> f64 {
        let m = outcome.monomials();
        compensated_sum(std::iter::once(1.0).chain(self.0.iter().zip(m).map(|(c, m)| c * m)))
    }

    pub fn to_table(&self) -> Result<ProbabilityTable> {
        ProbabilityTable::from_coefficients(self)
    }

    pub fn is_valid(&self) -> bool {
        self.to_table().is_ok()
    }

    /// Relabels `s -> -s`, negating every coefficient whose monomial contains `s`.
    pub fn flip_s(&self) -> Self {
        let c = self.0;
        CoefficientVector([c[0], -c[1], c[2], -c[3], c[4], -c[5], -c[6]])
    }

    pub fn max_abs_diff(&self, other: &CoefficientVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Joint distribution `Pr(psi, s, phi)` as eight nonnegative entries summing to one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityTable([f64; 8]);

impl ProbabilityTable {
    /// Validates entries: each must be finite and at least `-POSITIVITY`, and the
    /// total within `NORMALIZATION` of one. Slightly negative entries are clamped
    /// to zero and the table renormalized.
    pub fn new(p: [f64; 8]) -> Result<Self> {
        for (i, &v) in p.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    field: format!("table entry {}", Outcome::from_index(i)),
                    value: v,
                });
            }
            if v < -tol::POSITIVITY {
                return Err(Error::PositivityViolation {
                    outcome: Outcome::from_index(i),
                    value: v,
                });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { sum });
        }
        Self::clamped(p)
    }

    fn clamped(mut p: [f64; 8]) -> Result<Self> {
        let mut clamped = false;
        for (i, v) in p.iter_mut().enumerate() {
            if *v < -tol::POSITIVITY {
                return Err(Error::PositivityViolation {
                    outcome: Outcome::from_index(i),
                    value: *v,
                });
            }
            if *v < 0.0 {
                *v = 0.0;
                clamped = true;
            }
        }
        if clamped {
            let sum: f64 = p.iter().sum();
            p.iter_mut().for_each(|v| *v /= sum);
        }
        Ok(ProbabilityTable(p))
    }

    pub fn from_coefficients(c: &CoefficientVector) -> Result<Self> {
        for (k, &v) in c.as_array().iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    field: format!("c{}", k + 1),
                    value: v,
                });
            }
        }
        let mut p = [0.0; 8];
        for o in Outcome::all() {
            p[o.index()] = c.scaled_entry(o) / 8.0;
        }
        Self::clamped(p)
    }

    pub fn uniform() -> Self {
        ProbabilityTable([0.125; 8])
    }

    pub fn point_mass(outcome: Outcome) -> Self {
        let mut p = [0.0; 8];
        p[outcome.index()] = 1.0;
        ProbabilityTable(p)
    }

    pub fn entries(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn get(&self, outcome: Outcome) -> f64 {
        self.0[outcome.index()]
    }

    /// Moments of the seven monomials; the inverse of [`ProbabilityTable::from_coefficients`].
    pub fn coefficients(&self) -> CoefficientVector {
        let mut c = [0.0; 7];
        for o in Outcome::all() {
            let p = self.get(o);
            for (ck, m) in c.iter_mut().zip(o.monomials()) {
                *ck += m * p;
            }
        }
        CoefficientVector(c)
    }

    pub fn prob_psi(&self, psi: Sign) -> f64 {
        let b = 4 * psi.bit();
        self.0[b..b + 4].iter().sum()
    }

    pub fn marginal_psiphi(&self) -> PsiPhiTable {
        let mut m = [0.0; 4];
        for o in Outcome::all() {
            m[pair_index(o.psi, o.phi)] += self.get(o);
        }
        PsiPhiTable(m)
    }

    /// `Pr(s | psi, phi)`, or `None` when the conditioning event is null.
    pub fn conditional_s(&self, psi: Sign, phi: Sign) -> Option<SDistribution> {
        let plus = self.get(Outcome::new(psi, Sign::Plus, phi));
        let minus = self.get(Outcome::new(psi, Sign::Minus, phi));
        let total = plus + minus;
        (total > tol::NULL_EVENT).then(|| SDistribution {
            plus: plus / total,
            minus: minus / total,
        })
    }

    /// `Pr(s | psi)`, or `None` when `Pr(psi)` is null.
    pub fn conditional_s_given_psi(&self, psi: Sign) -> Option<SDistribution> {
        let plus: f64 = Sign::BOTH
            .iter()
            .map(|&phi| self.get(Outcome::new(psi, Sign::Plus, phi)))
            .sum();
        let minus: f64 = Sign::BOTH
            .iter()
            .map(|&phi| self.get(Outcome::new(psi, Sign::Minus, phi)))
            .sum();
        let total = plus + minus;
        (total > tol::NULL_EVENT).then(|| SDistribution {
            plus: plus / total,
            minus: minus / total,
        })
    }

    /// Relabels `s -> -s`.
    pub fn flip_s(&self) -> Self {
        let mut p = [0.0; 8];
        for o in Outcome::all() {
            p[Outcome::new(o.psi, -o.s, o.phi).index()] = self.get(o);
        }
        ProbabilityTable(p)
    }

    pub fn max_abs_diff(&self, other: &ProbabilityTable) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl<'de> Deserialize<'de> for ProbabilityTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let p = <[f64; 8]>::deserialize(deserializer)?;
        ProbabilityTable::new(p).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn pair_index(psi: Sign, phi: Sign) -> usize {
    2 * psi.bit() + phi.bit()
}

/// The four `(psi, phi)` pairs in index order `2 b(psi) + b(phi)`.
pub fn pairs() -> [(Sign, Sign); 4] {
    [
        (Sign::Plus, Sign::Plus),
        (Sign::Plus, Sign::Minus),
        (Sign::Minus, Sign::Plus),
        (Sign::Minus, Sign::Minus),
    ]
}

/// Marginal `Pr(psi, phi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PsiPhiTable([f64; 4]);

impl PsiPhiTable {
    pub fn get(&self, psi: Sign, phi: Sign) -> f64 {
        self.0[pair_index(psi, phi)]
    }

    pub fn entries(&self) -> &[f64; 4] {
        &self.0
    }
}

/// A distribution over the intermediate outcome `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SDistribution {
    pub plus: f64,
    pub minus: f64,
}

impl SDistribution {
    pub fn prob(&self, s: Sign) -> f64 {
        match s {
            Sign::Plus => self.plus,
            Sign::Minus => self.minus,
        }
    }

    /// `E[s]`.
    pub fn mean(&self) -> f64 {
        self.plus - self.minus
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        [self.plus, self.minus]
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .fold(0.0, |acc, h| acc + h)
    }
}
