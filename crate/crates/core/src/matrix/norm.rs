//! Unitarily invariant norms as symmetric gauge functions of singular values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::svd::singular_values;
use super::ComplexMatrix;
use crate::error::{invalid, Error, Result};

/// A unitarily invariant norm: Schatten-p (`p` in `[1, ∞]`) or Ky Fan-k.
///
/// In text and JSON a spec is written `schatten:<p>` (with `inf` for the
/// operator norm) or `kyfan:<k>`. A bare number or `inf` means Schatten.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    Schatten(f64),
    KyFan(usize),
}

impl NormSpec {
    pub const TRACE: NormSpec = NormSpec::Schatten(1.0);
    pub const FROBENIUS: NormSpec = NormSpec::Schatten(2.0);
    pub const OPERATOR: NormSpec = NormSpec::Schatten(f64::INFINITY);

    /// Checks the parameter without reference to a matrix shape.
    pub fn validate(&self) -> Result<()> {
        match *self {
            NormSpec::Schatten(p) if p.is_nan() || p < 1.0 => Err(Error::InvalidNorm(format!(
                "Schatten exponent must be >= 1, got {p}"
            ))),
            NormSpec::KyFan(0) => Err(Error::InvalidNorm("Ky Fan index must be >= 1".into())),
            _ => Ok(()),
        }
    }

    /// Checks the spec against `r` available singular values.
    pub fn validate_for(&self, r: usize) -> Result<()> {
        self.validate()?;
        if let NormSpec::KyFan(k) = *self {
            if k > r {
                return Err(Error::InvalidNorm(format!(
                    "Ky Fan index {k} exceeds {r} singular values"
                )));
            }
        }
        Ok(())
    }

    pub fn is_operator(&self) -> bool {
        matches!(*self, NormSpec::Schatten(p) if p == f64::INFINITY)
    }

    pub fn is_trace(&self) -> bool {
        matches!(*self, NormSpec::Schatten(p) if p == 1.0)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormSpec::Schatten(p) if p == f64::INFINITY => write!(f, "schatten:inf"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (family, param) = match s.split_once(':') {
            Some((f, p)) => (f, p),
            None => ("schatten", s.as_str()),
        };
        let spec = match family {
            "schatten" | "s" | "p" => {
                let p = match param {
                    "inf" | "infinity" | "∞" => f64::INFINITY,
                    other => other.parse::<f64>().map_err(|_| {
                        Error::InvalidNorm(format!("bad Schatten exponent '{other}'"))
                    })?,
                };
                NormSpec::Schatten(p)
            }
            "kyfan" | "k" => NormSpec::KyFan(
                param
                    .parse()
                    .map_err(|_| Error::InvalidNorm(format!("bad Ky Fan index '{param}'")))?,
            ),
            other => return Err(Error::InvalidNorm(format!("unknown norm family '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Evaluates the symmetric gauge function of `spec` on `values`
/// (absolute values are taken; order does not matter).
pub fn gauge_norm(values: &[f64], spec: NormSpec) -> Result<f64> {
    spec.validate_for(values.len())?;
    let mut abs: Vec<f64> = values.iter().map(|x| x.abs()).collect();
    abs.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted_gauge(&abs, spec))
}

/// Gauge of nonnegative values already sorted descending; spec assumed valid.
pub(crate) fn sorted_gauge(s: &[f64], spec: NormSpec) -> f64 {
    let top = s.first().copied().unwrap_or(0.0);
    match spec {
        NormSpec::Schatten(p) if p == f64::INFINITY => top,
        NormSpec::Schatten(1.0) => s.iter().sum(),
        NormSpec::Schatten(2.0) => s.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormSpec::Schatten(p) => {
            if top == 0.0 {
                return 0.0;
            }
            let acc: f64 = s.iter().map(|x| (x / top).powf(p)).sum();
            top * acc.powf(1.0 / p)
        }
        NormSpec::KyFan(k) => s.iter().take(k).sum(),
    }
}

/// `‖A‖` under `spec`, computed from the singular values of `A`.
pub fn ui_norm(a: &ComplexMatrix, spec: NormSpec) -> Result<f64> {
    spec.validate_for(a.rows().min(a.cols()))?;
    Ok(sorted_gauge(&singular_values(a)?, spec))
}

/// Norm of the diagonal part of a square matrix, `‖Diag(S_11, …, S_rr)‖`.
///
/// Never exceeds `ui_norm(S, spec)`: the diagonal part is the average of
/// `D_ε S D_ε` over all sign diagonals `D_ε`.
pub fn diag_pinch_norm(s: &ComplexMatrix, spec: NormSpec) -> Result<f64> {
    if !s.is_square() {
        return invalid(format!(
            "pinching needs a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        ));
    }
    let d: Vec<f64> = s.diagonal().iter().map(|z| z.norm()).collect();
    gauge_norm(&d, spec)
}

/// Weights `w` (aligned with descending `s`) with dual norm at most one and
/// `Σ w_i s_i = ‖s‖`: a supporting functional of the norm at `s`.
pub(crate) fn dual_weights(s: &[f64], spec: NormSpec) -> Vec<f64> {
    let r = s.len();
    let mut w = vec![0.0; r];
    if r == 0 {
        return w;
    }
    let total = sorted_gauge(s, spec);
    match spec {
        NormSpec::KyFan(k) => w.iter_mut().take(k).for_each(|x| *x = 1.0),
        NormSpec::Schatten(1.0) => w.iter_mut().for_each(|x| *x = 1.0),
        NormSpec::Schatten(p) if p == f64::INFINITY || total == 0.0 => w[0] = 1.0,
        NormSpec::Schatten(p) => {
            for (wi, si) in w.iter_mut().zip(s) {
                *wi = (si / total).powf(p - 1.0);
            }
        }
    }
    w
}

/// Weights `d ≥ 0` (aligned with descending `s`) on the unit sphere of the
/// gauge maximizing `Σ d_i s_i`, i.e. the singular values of the maximizer of
/// `Re tr(X† σ)` over the unit ball when `s` are the singular values of `X`.
pub(crate) fn ball_maximizer_weights(s: &[f64], spec: NormSpec) -> Vec<f64> {
    let r = s.len();
    let mut d = vec![0.0; r];
    if r == 0 {
        return d;
    }
    let top = s[0];
    if top == 0.0 {
        d[0] = 1.0;
        return d;
    }
    match spec {
        NormSpec::Schatten(1.0) => d[0] = 1.0,
        NormSpec::Schatten(p) if p == f64::INFINITY => d.iter_mut().for_each(|x| *x = 1.0),
        NormSpec::Schatten(p) => {
            // Hölder equality: d_i ∝ s_i^(p'-1) with 1/p + 1/p' = 1.
            let q = p / (p - 1.0);
            let raw: Vec<f64> = s.iter().map(|x| (x / top).powf(q - 1.0)).collect();
            let nrm = sorted_gauge(&raw, spec);
            for (di, ri) in d.iter_mut().zip(raw) {
                *di = ri / nrm;
            }
        }
        NormSpec::KyFan(k) => {
            // Extreme points of the Ky Fan ball in the positive orthant are
            // flat vectors 1/min(j, k) on the leading j coordinates.
            let mut best_j = 1;
            let mut best = f64::NEG_INFINITY;
            let mut prefix = 0.0;
            for (j, &x) in s.iter().enumerate() {
                prefix += x;
                let val = prefix / (j + 1).min(k) as f64;
                if val > best {
                    best = val;
                    best_j = j + 1;
                }
            }
            let h = 1.0 / best_j.min(k) as f64;
            d.iter_mut().take(best_j).for_each(|x| *x = h);
        }
    }
    d
}
