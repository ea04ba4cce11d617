//! Closed-form expectations and rescaled limits of the Minkowski functionals
//! of fractal percolation in one and two dimensions.
//!
//! All formulas are generic over [`Scalar`], so they can be evaluated both in
//! `f64` and in exact rational arithmetic.

mod dims;
mod one_d;
mod two_d;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

pub use dims::{dims, DimensionReport};
pub use one_d::{
    ev_isolated_1d, ev_vk_1d, ev_vk_complement_1d, ev_vk_intersect_1d, limit_vck_1d,
    limit_vk_1d, limit_vk_intersect_1d, Copies,
};
pub use two_d::{
    c_tilde, ev_v0_2d_expansion, ev_vc0_2d_expansion, ev_vk_2d, intersection_series_terms_2d,
    limit_vc0_2d_via_series, limit_vck_2d, limit_vk_2d, limit_v0_2d_via_series,
    tail_amplitude, vbar0_2d_finite, vbar0_2d_tail, vbarc0_2d_finite, ComplementExpansion,
};

/// Model parameters `(M, p, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params<S> {
    pub m: u32,
    pub p: S,
    pub dim: u8,
}

pub type ModelParams = Params<f64>;
pub type ExactParams = Params<Exact>;

impl<S: Scalar> Params<S> {
    pub fn new(m: u32, p: S, dim: u8) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("M must be at least 2, got {m}")));
        }
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidParams(format!("d must be 1 or 2, got {dim}")));
        }
        let pf = p.to_f64();
        if !(p >= S::zero() && p <= S::one()) || pf.is_nan() {
            return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {pf}")));
        }
        Ok(Self { m, p, dim })
    }

    pub fn m_s(&self) -> S {
        S::int(self.m as i64)
    }

    /// Mean offspring number `M^d p` of the underlying Galton-Watson tree.
    pub fn mean_offspring(&self) -> S {
        self.m_s().powu(self.dim as u32) * self.p.clone()
    }

    /// `M^d p > 1`, the regime in which the limit set is nonempty with positive probability.
    pub fn non_empty_regime(&self) -> bool {
        self.mean_offspring() > S::one()
    }

    /// Scale factor `r^{n(D-k)} = M^{kn} / (M^d p)^n` for the rescaled functionals.
    pub fn rescale(&self, n: u32, k: u8) -> Result<S> {
        if self.p <= S::zero() {
            return Err(self.domain("rescaling factor", Some(k), "p > 0"));
        }
        Ok(self.m_s().powu(k as u32 * n) / self.mean_offspring().powu(n))
    }

    pub(crate) fn domain(&self, quantity: &'static str, k: Option<u8>, requirement: &'static str) -> Error {
        Error::Domain {
            quantity,
            m: self.m,
            p: self.p.to_f64(),
            k,
            requirement,
        }
    }

    pub(crate) fn require_dim(&self, quantity: &'static str, dim: u8) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::WrongDimension { quantity, expected: dim, got: self.dim })
        }
    }

    pub(crate) fn require_order(&self, k: u8) -> Result<()> {
        if k <= self.dim {
            Ok(())
        } else {
            Err(Error::InvalidOrder { k, dim: self.dim })
        }
    }

    /// `p > 1/M^e`, written without division so it is exact in both scalar types.
    pub fn p_exceeds_inverse_power(&self, e: u32) -> bool {
        self.m_s().powu(e) * self.p.clone() > S::one()
    }
}

impl ModelParams {
    pub fn to_exact(&self) -> Option<ExactParams> {
        Some(Params { m: self.m, p: crate::scalar::exact_from_f64(self.p)?, dim: self.dim })
    }
}

impl ExactParams {
    pub fn to_f64(&self) -> ModelParams {
        Params { m: self.m, p: Scalar::to_f64(&self.p), dim: self.dim }
    }
}

/// Which approximating set a functional is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// The construction step `F_n`.
    F,
    /// Its closed complement `C_n` in the unit cube.
    C,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::F => "F",
            Target::C => "C",
        })
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(Target::F),
            "C" | "c" => Ok(Target::C),
            other => Err(Error::InvalidParams(format!("unknown target {other:?}"))),
        }
    }
}

/// Mutual position of neighbouring first-level squares with a nonempty intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Configuration {
    /// Two squares sharing a side; `2M(M-1)` occurrences.
    Side,
    /// Two squares sharing only a corner; `2(M-1)^2` occurrences.
    Corner2,
    /// Three squares around a common corner; `4(M-1)^2` occurrences.
    Corner3,
    /// Four squares around a common corner; `(M-1)^2` occurrences.
    Corner4,
}

impl Configuration {
    pub const ALL: [Configuration; 4] =
        [Configuration::Side, Configuration::Corner2, Configuration::Corner3, Configuration::Corner4];

    /// Signed inclusion-exclusion multiplicity in a grid of `M x M` squares.
    pub fn signed_count(self, m: u32) -> i64 {
        let m = m as i64;
        match self {
            Configuration::Side => -2 * m * (m - 1),
            Configuration::Corner2 => -2 * (m - 1) * (m - 1),
            Configuration::Corner3 => 4 * (m - 1) * (m - 1),
            Configuration::Corner4 => -(m - 1) * (m - 1),
        }
    }

    pub(crate) fn corner_order(self) -> Option<u32> {
        match self {
            Configuration::Side => None,
            Configuration::Corner2 => Some(2),
            Configuration::Corner3 => Some(3),
            Configuration::Corner4 => Some(4),
        }
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "side" => Ok(Configuration::Side),
            "corner2" => Ok(Configuration::Corner2),
            "corner3" => Ok(Configuration::Corner3),
            "corner4" => Ok(Configuration::Corner4),
            other => Err(Error::InvalidConfiguration(other.to_string())),
        }
    }
}

/// Intrinsic volume `V_k([0,1]^d)` of the unit cube.
///
/// By the Steiner formula, `V_k` of the unit cube in `R^d` is the number of
/// `k`-dimensional coordinate faces through a fixed vertex, `binom(d, k)`.
pub fn q(d: u8, k: u8) -> Option<i64> {
    match (d, k) {
        (1, 0) | (1, 1) => Some(1),
        (2, 0) | (2, 2) => Some(1),
        (2, 1) => Some(2),
        _ => None,
    }
}

/// Pointwise large-`M` limit of `V̄_0(F)`: `1 - 4p + 4p^2 - p^3`.
pub fn large_m_v<S: Scalar>(p: &S) -> S {
    let p2 = p.clone() * p.clone();
    let p3 = p2.clone() * p.clone();
    S::sum([S::one(), -(S::int(4) * p.clone()), S::int(4) * p2, -p3])
}

/// Pointwise large-`M` limit of `-V̄ᶜ_0(F)`: `p^3 - 2p + 1`.
pub fn large_m_vc<S: Scalar>(p: &S) -> S {
    let p3 = p.powu(3);
    S::sum([p3, -(S::int(2) * p.clone()), S::one()])
}

/// Finite-level rescaled functionals `v̄_k(n)` for `n = 0..=n_max` and their limit.
#[derive(Clone, Debug, PartialEq)]
pub struct RescaledSeries<S> {
    pub target: Target,
    pub k: u8,
    pub terms: Vec<S>,
    pub limit: Option<S>,
}

/// Expected `V_k` of the level-`n` set in either dimension.
pub fn ev_vk<S: Scalar>(par: &Params<S>, n: u32, k: u8, target: Target) -> Result<S> {
    match (par.dim, target) {
        (1, Target::F) => ev_vk_1d(par, n, k),
        (1, Target::C) => ev_vk_complement_1d(par, n, k, Copies::One),
        _ => ev_vk_2d(par, n, k, target),
    }
}

/// Rescaled limit `V̄_k` (target `F`) or `V̄ᶜ_k` (target `C`) in either dimension.
pub fn limit_vk<S: Scalar>(par: &Params<S>, k: u8, target: Target) -> Result<S> {
    match (par.dim, target) {
        (1, Target::F) => limit_vk_1d(par, k),
        (1, Target::C) => limit_vck_1d(par, k),
        (_, Target::F) => limit_vk_2d(par, k),
        (_, Target::C) => limit_vck_2d(par, k),
    }
}

pub fn rescaled_series<S: Scalar>(
    par: &Params<S>,
    k: u8,
    target: Target,
    n_max: u32,
) -> Result<RescaledSeries<S>> {
    par.require_order(k)?;
    let terms = (0..=n_max)
        .map(|n| Ok(ev_vk(par, n, k, target)? * par.rescale(n, k)?))
        .collect::<Result<Vec<_>>>()?;
    let limit = match limit_vk(par, k, target) {
        Ok(v) => Some(v),
        Err(Error::Domain { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(RescaledSeries { target, k, terms, limit })
}
