//! Parameter sweeps over a generator family, emitted as CSV.
//!
//! Header layout: one column per swept parameter (`theta`, `lambda`, `delta`
//! in that order, as the family requires), then for each requested quantity:
//!
//! | quantity       | columns                                                   |
//! |----------------|-----------------------------------------------------------|
//! | `pre`          | `pre_p`, `pre_m`                                          |
//! | `post`         | `post_pp`, `post_pm`, `post_mp`, `post_mm`                |
//! | `margin`       | `margin_pp`, `margin_pm`, `margin_mp`, `margin_mm`        |
//! | `z_w`          | `z_w`                                                     |
//! | `ci_residuals` | `ci_factor_p`, `ci_factor_m`, `ind1_residual`, `ind2_residual` |
//! | `min_slack`    | `min_slack`                                               |
//!
//! Suffixes name the signs of `psi` then `phi` (`p` for +1, `m` for -1).
//! Undefined values (null conditioning events) are empty cells.
//!
//! Quantum families accept the closed interval `theta in [0, pi/2]` here.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::str::FromStr;

use crate::ci::ci_report;
use crate::error::{Error, Result};
use crate::generators::{self, Generator};
use crate::model::{pairs, CoefficientVector, ProbabilityTable, Sign};
use crate::polytope::min_slack;
use crate::shift::shift_report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Pre,
    Post,
    Margin,
    ZW,
    CiResiduals,
    MinSlack,
}

impl Quantity {
    fn columns(self) -> Vec<&'static str> {
        match self {
            Quantity::Pre => vec!["pre_p", "pre_m"],
            Quantity::Post => vec!["post_pp", "post_pm", "post_mp", "post_mm"],
            Quantity::Margin => vec!["margin_pp", "margin_pm", "margin_mp", "margin_mm"],
            Quantity::ZW => vec!["z_w"],
            Quantity::CiResiduals => {
                vec![
                    "ci_factor_p",
                    "ci_factor_m",
                    "ind1_residual",
                    "ind2_residual",
                ]
            }
            Quantity::MinSlack => vec!["min_slack"],
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pre" => Quantity::Pre,
            "post" => Quantity::Post,
            "margin" => Quantity::Margin,
            "z_w" => Quantity::ZW,
            "ci_residuals" => Quantity::CiResiduals,
            "min_slack" => Quantity::MinSlack,
            other => return Err(Error::Format(format!("unknown sweep output {other:?}"))),
        })
    }
}

fn decimal_places(x: f64) -> Option<i32> {
    (0..=9).find(|&d| {
        let scaled = x * 10f64.powi(d);
        (scaled - scaled.round()).abs() <= 8.0 * f64::EPSILON * scaled.abs().max(1.0)
    })
}

/// Inclusive grid `start, start + step, ..., <= stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn single(v: f64) -> Self {
        ParamRange {
            start: v,
            stop: v,
            step: 1.0,
        }
    }

    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if step.is_nan() || step <= 0.0 {
            return Err(Error::Format(format!(
                "sweep step must be positive, got {step}"
            )));
        }
        if stop.is_nan() || start.is_nan() || stop < start {
            return Err(Error::Format(format!(
                "sweep stop {stop} is below start {start}"
            )));
        }
        Ok(ParamRange { start, stop, step })
    }

    /// Parses `value` or `start:stop:step`.
    pub fn parse(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("not a number: {t:?}")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(ParamRange::single(num(v)?)),
            [a, b, c] => ParamRange::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::Format(format!(
                "expected value or start:stop:step, got {s:?}"
            ))),
        }
    }

    /// Grid points. When start and step are short decimals (`0.1:1.4:0.1`) the
    /// points are rounded to that many decimals, so `0.3` is not `0.30000000000000004`.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        let scale = decimal_places(self.start)
            .zip(decimal_places(self.step))
            .map(|(a, b)| 10f64.powi(a.max(b)));
        (0..=n)
            .map(|k| {
                let v = self.start + k as f64 * self.step;
                scale.map_or(v, |s| (v * s).round() / s)
            })
            .collect()
    }

    fn scaled(&self, k: f64) -> Self {
        ParamRange {
            start: self.start * k,
            stop: self.stop * k,
            step: self.step * k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub family: String,
    pub theta: Option<ParamRange>,
    pub lambda: Option<ParamRange>,
    pub delta: Option<ParamRange>,
    pub outputs: Vec<Quantity>,
}

impl SweepSpec {
    /// Converts the theta range from degrees.
    pub fn theta_in_degrees(mut self) -> Self {
        self.theta = self.theta.map(|r| r.scaled(std::f64::consts::PI / 180.0));
        self
    }

    fn params(&self) -> Result<Vec<(&'static str, ParamRange)>> {
        let wanted: &[&str] = match self.family.as_str() {
            "qs" => &["theta"],
            "qw" => &["theta", "lambda"],
            "cd" => &["lambda", "delta"],
            "cmax" | "boxes" => &[],
            other => return Err(Error::Format(format!("unknown generator {other:?}"))),
        };
        let given = [
            ("theta", self.theta),
            ("lambda", self.lambda),
            ("delta", self.delta),
        ];
        let mut out = vec![];
        for (name, range) in given {
            match (wanted.contains(&name), range) {
                (true, Some(r)) => out.push((name, r)),
                (true, None) => {
                    return Err(Error::Format(format!(
                        "{} sweep requires --{name}",
                        self.family
                    )))
                }
                (false, Some(_)) => {
                    return Err(Error::Format(format!("{} takes no --{name}", self.family)))
                }
                (false, None) => {}
            }
        }
        Ok(out)
    }

    pub fn header(&self) -> Result<Vec<String>> {
        let mut h: Vec<String> = self.params()?.iter().map(|(n, _)| n.to_string()).collect();
        for q in &self.outputs {
            h.extend(q.columns().into_iter().map(String::from));
        }
        Ok(h)
    }
}

fn closed_theta(theta: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
        return Err(Error::domain("theta", theta, "sweeps accept [0, pi/2]"));
    }
    Ok(theta)
}

struct Point {
    theta: Option<f64>,
    coefficients: CoefficientVector,
    table: ProbabilityTable,
}

fn build_point(family: &str, values: &[(&str, f64)]) -> Result<Point> {
    let get = |n: &str| values.iter().find(|(k, _)| *k == n).map(|(_, v)| *v);
    let (theta, coefficients) = match family {
        "qs" => {
            let t = closed_theta(get("theta").expect("validated"))?;
            (Some(t), generators::strong_coefficients(t))
        }
        "qw" => {
            let t = closed_theta(get("theta").expect("validated"))?;
            let lam = get("lambda").expect("validated");
            let bound = t.cos().max(0.0);
            if !(lam >= 0.0 && lam <= bound + 1e-12) {
                return Err(Error::domain(
                    "lambda",
                    lam,
                    format!("must lie in [0, cos(theta)] = [0, {bound}] at theta = {t}"),
                ));
            }
            (Some(t), generators::weak_coefficients(t, lam))
        }
        other => {
            let g = Generator::from_name(other, None, get("lambda"), get("delta"))?;
            (None, g.coefficients()?)
        }
    };
    let table = coefficients.to_table()?;
    Ok(Point {
        theta,
        coefficients,
        table,
    })
}

fn cell(v: Option<f64>) -> String {
    v.filter(|x| x.is_finite())
        .map(|x| format!("{x:?}"))
        .unwrap_or_default()
}

fn row(spec: &SweepSpec, values: &[(&str, f64)]) -> Result<Vec<String>> {
    let point = build_point(&spec.family, values)?;
    let shifts = shift_report(&point.table)?;
    let mut out: Vec<String> = values.iter().map(|(_, v)| format!("{v:?}")).collect();
    for q in &spec.outputs {
        match q {
            Quantity::Pre => out.extend(Sign::BOTH.iter().map(|&s| cell(shifts.pre(s)))),
            Quantity::Post => out.extend(pairs().iter().map(|&(a, b)| cell(shifts.post(a, b)))),
            Quantity::Margin => out.extend(pairs().iter().map(|&(a, b)| cell(shifts.margin(a, b)))),
            Quantity::ZW => {
                // <phi|Z|psi> / <phi|psi> = 1 / cos(theta) for the qubit families
                out.push(cell(point.theta.map(|t| 1.0 / t.cos())))
            }
            Quantity::CiResiduals => {
                let r = ci_report(&point.table);
                out.extend(r.factor_residual.iter().map(|v| cell(*v)));
                out.push(cell(Some(r.paper_residuals.0)));
                out.push(cell(Some(r.paper_residuals.1)));
            }
            Quantity::MinSlack => out.push(cell(Some(min_slack(&point.coefficients).slack))),
        }
    }
    Ok(out)
}

/// Evaluates every grid point; fails on the first invalid point.
pub fn run_sweep(spec: &SweepSpec) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let header = spec.header()?;
    let params = spec.params()?;
    let mut grid: Vec<Vec<(&str, f64)>> = vec![vec![]];
    for (name, range) in &params {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                range.values().into_iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push((*name, v));
                    p
                })
            })
            .collect();
    }
    let rows = grid
        .iter()
        .map(|values| row(spec, values))
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}

pub fn sweep_csv(spec: &SweepSpec) -> Result<String> {
    let (header, rows) = run_sweep(spec)?;
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(&header)?;
    for r in &rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes the sweep to `path` via a sibling temporary file, so a failed sweep leaves no file behind.
pub fn write_sweep(spec: &SweepSpec, path: &Path) -> Result<()> {
    let text = sweep_csv(spec)?;
    let tmp = path.with_extension("partial");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
