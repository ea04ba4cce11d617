//! Zeros and minimum of the limit curves `p ↦ V̄_0(F)` and `p ↦ -V̄ᶜ_0(F)`.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::analytic::{limit_vck_2d, limit_vk_2d, ModelParams};
use crate::error::{Error, Result};

/// Margin kept from the open ends of the search interval `(1/M^2, 1)`.
pub const EPS: f64 = 1e-9;

const ROOT_WIDTH: f64 = 1e-12;
const MIN_WIDTH: f64 = 1e-10;
const SCAN_POINTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub value: f64,
    /// Final bracket `(lo, hi)` with a sign change.
    pub bracket: (f64, f64),
    /// Function value at `value`.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Minimum {
    pub value: f64,
    pub bracket: (f64, f64),
    /// Function value at `value`.
    pub minimum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub m: u32,
    pub p0: Root,
    pub pmin: Minimum,
    pub p1: Root,
    pub known_bounds: Option<(f64, f64)>,
}

fn search_interval(m: u32) -> (f64, f64) {
    (1.0 / (m as f64 * m as f64) + EPS, 1.0 - EPS)
}

/// `V̄_0(F)` as a function of `p` for fixed `M`.
pub fn vbar0(m: u32, p: f64) -> Result<f64> {
    limit_vk_2d(&ModelParams::new(m, p, 2)?, 0)
}

/// `-V̄ᶜ_0(F)` as a function of `p` for fixed `M`.
pub fn neg_vbarc0(m: u32, p: f64) -> Result<f64> {
    Ok(-limit_vck_2d(&ModelParams::new(m, p, 2)?, 0)?)
}

/// Bisection for a zero of `f` on `[lo, hi]`, requiring `f(lo) > 0 > f(hi)`.
fn bisect(quantity: &'static str, m: u32, lo: f64, hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<Root> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if !(fa > 0.0 && fb < 0.0) {
        return Err(Error::NoSignChange { quantity, m, lo, hi });
    }
    while b - a > ROOT_WIDTH {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(Root { value: mid, bracket: (mid, mid), residual: 0.0 });
        }
        if fm > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let (ra, rb) = (f(a)?, f(b)?);
    let value = if ra.abs() <= rb.abs() { a } else { b };
    Ok(Root { value, bracket: (a, b), residual: ra.abs().min(rb.abs()) })
}

pub fn find_p0(m: u32) -> Result<Root> {
    let (lo, hi) = search_interval(m);
    bisect("V̄_0", m, lo, hi, |p| vbar0(m, p))
}

pub fn find_p1(m: u32) -> Result<Root> {
    let (lo, hi) = search_interval(m);
    bisect("-V̄ᶜ_0", m, lo, hi, |p| neg_vbarc0(m, p))
}

/// Minimizer of `V̄_0`, located by golden-section search after a grid scan has
/// confirmed a single sign change of the finite differences.
pub fn find_pmin(m: u32) -> Result<Minimum> {
    let (lo, hi) = search_interval(m);
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let values = grid.iter().map(|&p| vbar0(m, p)).collect::<Result<Vec<_>>>()?;
    let signs: Vec<bool> = values.windows(2).map(|w| w[1] - w[0] > 0.0).collect();
    let sign_changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if sign_changes != 1 || signs[0] || !signs[signs.len() - 1] {
        return Err(Error::NotUnimodal { quantity: "V̄_0", m, sign_changes });
    }
    let turn = signs.iter().position(|&up| up).expect("one sign change");
    let mut a = grid[turn.saturating_sub(1)];
    let mut b = grid[(turn + 1).min(SCAN_POINTS - 1)];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (vbar0(m, c)?, vbar0(m, d)?);
    while b - a > MIN_WIDTH {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = vbar0(m, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = vbar0(m, d)?;
        }
    }
    let value = 0.5 * (a + b);
    Ok(Minimum { value, bracket: (a, b), minimum: vbar0(m, value)? })
}

/// Published bounds `(lower, upper)` on the percolation threshold `p_c(M)`.
pub fn known_bounds(m: u32) -> Option<(f64, f64)> {
    match m {
        0 | 1 => None,
        2 => Some((0.881, 0.993)),
        3 => Some((0.784, 0.940)),
        4 => Some((0.556f64.max((1.0f64 / 4.0).sqrt()), 0.972)),
        _ => {
            let lower = (1.0 / m as f64).sqrt().max(0.556);
            Some((lower, 0.9999))
        }
    }
}

pub fn threshold_report(m: u32) -> Result<ThresholdReport> {
    Ok(ThresholdReport {
        m,
        p0: find_p0(m)?,
        pmin: find_pmin(m)?,
        p1: find_p1(m)?,
        known_bounds: known_bounds(m),
    })
}

/// Zero crossing of a Monte Carlo curve with a bootstrap confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroCrossing {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// Bootstrap replicates in which the resampled curve had a crossing.
    pub replicates: usize,
}

/// First downward zero crossing of a curve given as `(p, value)` points, by linear interpolation.
pub fn first_crossing(points: &[(f64, f64)]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((p0, v0), (p1, v1)) = (w[0], w[1]);
        (v0 > 0.0 && v1 <= 0.0).then(|| p0 + (p1 - p0) * v0 / (v0 - v1))
    })
}

/// Parametric bootstrap of [`first_crossing`]: each point `(p, mean, stderr)` is
/// redrawn from a normal law and the crossing recomputed. Returns the central
/// `level` interval, e.g. `0.95`.
pub fn mc_zero_crossing(
    points: &[(f64, f64, f64)],
    resamples: usize,
    level: f64,
    seed: u64,
) -> Option<ZeroCrossing> {
    let estimate = first_crossing(&points.iter().map(|&(p, v, _)| (p, v)).collect::<Vec<_>>())?;
    let mut rng = StdRng::seed_from_u64(seed);
    let laws: Vec<Normal<f64>> = points.iter().filter_map(|&(_, v, s)| Normal::new(v, s.max(0.0)).ok()).collect();
    if laws.len() != points.len() {
        return None;
    }
    let mut draws: Vec<f64> = (0..resamples)
        .filter_map(|_| {
            let curve: Vec<(f64, f64)> =
                points.iter().zip(&laws).map(|(&(p, _, _), law)| (p, law.sample(&mut rng))).collect();
            first_crossing(&curve)
        })
        .collect();
    if draws.is_empty() {
        return None;
    }
    draws.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    let pick = |q: f64| draws[((q * (draws.len() - 1) as f64).round() as usize).min(draws.len() - 1)];
    Some(ZeroCrossing { estimate, lower: pick(tail), upper: pick(1.0 - tail), replicates: draws.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_m_values() {
        let p0 = find_p0(2).unwrap();
        assert!((p0.value - 0.70752).abs() < 1e-4);
        assert!(p0.residual < 1e-12);
        assert!(p0.bracket.1 - p0.bracket.0 < 1e-12);
        let pmin = find_pmin(2).unwrap();
        assert!((pmin.value - 0.86798).abs() < 1e-4);
        let p1 = find_p1(2).unwrap();
        assert!((p1.value - 0.81054).abs() < 1e-4);
    }

    #[test]
    fn bounds_table() {
        assert_eq!(known_bounds(2), Some((0.881, 0.993)));
        assert_eq!(known_bounds(3), Some((0.784, 0.940)));
        assert_eq!(known_bounds(4), Some((0.556, 0.972)));
        assert!(known_bounds(17).unwrap().0 >= 0.556);
        assert_eq!(known_bounds(1), None);
    }

    #[test]
    fn ordering_for_many_m() {
        for m in 2..=64 {
            let r = threshold_report(m).unwrap();
            assert!(r.p0.value < r.pmin.value, "M={m}");
            assert!(1.0 / ((m * m) as f64) < r.p0.value && r.pmin.value < 1.0);
        }
    }

    #[test]
    fn crossing_interpolation() {
        let pts = [(0.1, 1.0), (0.2, 0.5), (0.3, -0.5), (0.4, -1.0)];
        assert!((first_crossing(&pts).unwrap() - 0.25).abs() < 1e-15);
        let noisy: Vec<(f64, f64, f64)> = pts.iter().map(|&(p, v)| (p, v, 0.05)).collect();
        let z = mc_zero_crossing(&noisy, 500, 0.95, 1).unwrap();
        assert!(z.lower <= z.estimate && z.estimate <= z.upper);
        assert!(z.upper - z.lower < 0.05);
        assert_eq!(first_crossing(&[(0.1, 1.0), (0.2, 2.0)]), None);
    }
}
