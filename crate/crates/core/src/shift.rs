//! Pre-selected and post-selected shifts of the intermediate outcome and
//! detection of anomalous post-selected shifts.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{pair_index, pairs, CoefficientVector, Outcome, ProbabilityTable, Sign};
use crate::tol;

/// `E[s|psi]` and `E[s|psi,phi]` for every conditioning event, with margins
/// `|post| - |pre|`. Undefined entries (null conditioning events) are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftReport {
    pre: [Option<f64>; 2],
    post: [Option<f64>; 4],
    margin: [Option<f64>; 4],
    apss: bool,
    witnesses: Vec<(Sign, Sign)>,
}

impl ShiftReport {
    pub fn pre(&self, psi: Sign) -> Option<f64> {
        self.pre[psi.bit()]
    }

    pub fn post(&self, psi: Sign, phi: Sign) -> Option<f64> {
        self.post[pair_index(psi, phi)]
    }

    pub fn margin(&self, psi: Sign, phi: Sign) -> Option<f64> {
        self.margin[pair_index(psi, phi)]
    }

    /// `|post| / |pre|`, reported only where the pre-selected shift is nonzero.
    pub fn ratio(&self, psi: Sign, phi: Sign) -> Option<f64> {
        let pre = self.pre(psi)?;
        let post = self.post(psi, phi)?;
        (pre.abs() > tol::NULL_EVENT).then(|| post.abs() / pre.abs())
    }

    pub fn apss(&self) -> bool {
        self.apss
    }

    pub fn witnesses(&self) -> &[(Sign, Sign)] {
        &self.witnesses
    }

    /// Largest defined margin and the first pair (in index order) attaining it.
    pub fn max_margin(&self) -> Option<(f64, (Sign, Sign))> {
        let mut best: Option<(f64, (Sign, Sign))> = None;
        for (psi, phi) in pairs() {
            if let Some(m) = self.margin(psi, phi) {
                if best.is_none_or(|(b, _)| m > b) {
                    best = Some((m, (psi, phi)));
                }
            }
        }
        best
    }
}

/// Computes all shifts by direct summation over the table.
pub fn shift_report(table: &ProbabilityTable) -> Result<ShiftReport> {
    let mut pre = [None; 2];
    for psi in Sign::BOTH {
        let mut mass = 0.0;
        let mut weighted = 0.0;
        for o in Outcome::all().filter(|o| o.psi == psi) {
            mass += table.get(o);
            weighted += o.s.value() * table.get(o);
        }
        if mass > tol::NULL_EVENT {
            pre[psi.bit()] = Some(weighted / mass);
        }
    }
    if pre.iter().all(Option::is_none) {
        return Err(Error::DegenerateModel);
    }

    let mut post = [None; 4];
    let mut margin = [None; 4];
    let mut witnesses = Vec::new();
    for (psi, phi) in pairs() {
        let plus = table.get(Outcome::new(psi, Sign::Plus, phi));
        let minus = table.get(Outcome::new(psi, Sign::Minus, phi));
        let mass = plus + minus;
        if mass <= tol::NULL_EVENT {
            continue;
        }
        let value = (plus - minus) / mass;
        let k = pair_index(psi, phi);
        post[k] = Some(value);
        if let Some(p) = pre[psi.bit()] {
            let m = value.abs() - p.abs();
            margin[k] = Some(m);
            if m > tol::ANOMALY {
                witnesses.push((psi, phi));
            }
        }
    }

    Ok(ShiftReport {
        pre,
        post,
        margin,
        apss: !witnesses.is_empty(),
        witnesses,
    })
}

/// `E[s|psi] = (c2 + c4 psi) / (1 + c1 psi)`, or `None` if `Pr(psi)` is null.
pub fn pre_shift_closed_form(c: &CoefficientVector, psi: Sign) -> Option<f64> {
    let a = psi.value();
    let denom = 1.0 + c.get(1) * a;
    (denom / 2.0 > tol::NULL_EVENT).then(|| (c.get(2) + c.get(4) * a) / denom)
}

/// `E[s|psi,phi] = (c2 + c4 psi + c6 phi + c7 psi phi) / (1 + c1 psi + c3 phi + c5 psi phi)`,
/// or `None` if `Pr(psi, phi)` is null.
pub fn post_shift_closed_form(c: &CoefficientVector, psi: Sign, phi: Sign) -> Option<f64> {
    let (a, b) = (psi.value(), phi.value());
    let denom = 1.0 + c.get(1) * a + c.get(3) * b + c.get(5) * a * b;
    (denom / 4.0 > tol::NULL_EVENT)
        .then(|| (c.get(2) + c.get(4) * a + c.get(6) * b + c.get(7) * a * b) / denom)
}

fn sign_key(s: Sign) -> String {
    s.to_string()
}

fn pair_key(psi: Sign, phi: Sign) -> String {
    format!("{psi},{phi}")
}

#[derive(Serialize)]
struct PairSerial {
    psi: Sign,
    phi: Sign,
}

#[derive(Serialize)]
struct ShiftReportSerial {
    pre: BTreeMap<String, Option<f64>>,
    post: BTreeMap<String, Option<f64>>,
    margin: BTreeMap<String, Option<f64>>,
    ratio: BTreeMap<String, Option<f64>>,
    apss: bool,
    witnesses: Vec<PairSerial>,
}

impl Serialize for ShiftReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let by_pair = |f: &dyn Fn(Sign, Sign) -> Option<f64>| {
            pairs()
                .into_iter()
                .map(|(psi, phi)| (pair_key(psi, phi), f(psi, phi)))
                .collect()
        };
        ShiftReportSerial {
            pre: Sign::BOTH
                .iter()
                .map(|&s| (sign_key(s), self.pre(s)))
                .collect(),
            post: by_pair(&|a, b| self.post(a, b)),
            margin: by_pair(&|a, b| self.margin(a, b)),
            ratio: by_pair(&|a, b| self.ratio(a, b)),
            apss: self.apss,
            witnesses: self
                .witnesses
                .iter()
                .map(|&(psi, phi)| PairSerial { psi, phi })
                .collect(),
        }
        .serialize(serializer)
    }
}
