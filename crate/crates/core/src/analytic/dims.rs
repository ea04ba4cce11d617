use serde::Serialize;

use super::ModelParams;
use crate::error::Result;

/// Dimension of the limit set together with the exponents and amplitudes of
/// the lower-order terms of `E V_0(C_m)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionReport {
    /// `log(M^d p) / log M`. Meaningful as a dimension only when `non_empty` holds.
    pub d: f64,
    /// Dimension `log(M p^2) / log M` of the intersection of two independent copies on a line.
    pub d_prime: f64,
    pub d2: Option<f64>,
    pub d3: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    /// `M^d p > 1`.
    pub non_empty: bool,
}

pub fn dims(par: &ModelParams) -> Result<DimensionReport> {
    let (m, p) = (par.m as f64, par.p);
    if p <= 0.0 {
        return Err(par.domain("dimension", None, "p > 0"));
    }
    let log_m = m.ln();
    let d = par.dim as f64 + p.ln() / log_m;
    let d_prime = 1.0 + 2.0 * p.ln() / log_m;
    let planar = par.dim == 2;
    let c2 = 4.0 * m * (1.0 - p) / (m - p);
    let c3 = -2.0 * m * (m - 1.0) * p * (1.0 - p * p) / ((m - p) * (m - p * p));
    Ok(DimensionReport {
        d,
        d_prime,
        d2: planar.then_some(d - 1.0),
        d3: planar.then_some(2.0 * d - 3.0),
        c2: planar.then_some(c2),
        c3: planar.then_some(c3),
        non_empty: par.non_empty_regime(),
    })
}
