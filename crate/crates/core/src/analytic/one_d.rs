//! Fractal percolation on the unit interval, written `K_n` for the level-`n`
//! set and `D_n` for its closed complement.

use super::Params;
use crate::error::Result;
use crate::scalar::Scalar;

/// Whether a functional is taken of one set or of the intersection of two
/// independent copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Copies {
    One,
    Two,
}

/// `1 - x^n`.
fn bracket<S: Scalar>(x: S, n: u32) -> S {
    S::one() - x.powu(n)
}

/// `(M-1) p / (M-p) * [1 - (p/M)^n]`, shared by most one-dimensional formulas.
fn tail_p<S: Scalar>(par: &Params<S>, n: u32) -> S {
    let (m, p) = (par.m_s(), par.p.clone());
    (m.clone() - S::one()) * p.clone() / (m.clone() - p.clone()) * bracket(p / m, n)
}

/// `(M-1) p^2 / (M-p^2) * [1 - (p^2/M)^n]`.
fn tail_p2<S: Scalar>(par: &Params<S>, n: u32) -> S {
    let (m, p2) = (par.m_s(), par.p.clone() * par.p.clone());
    (m.clone() - S::one()) * p2.clone() / (m.clone() - p2.clone()) * bracket(p2 / m, n)
}

pub fn ev_vk_1d<S: Scalar>(par: &Params<S>, n: u32, k: u8) -> Result<S> {
    par.require_dim("E V_k(K_n)", 1)?;
    par.require_order(k)?;
    let p = par.p.clone();
    Ok(match k {
        1 => p.powu(n),
        _ => (par.m_s() * p).powu(n) * (S::one() - tail_p(par, n)),
    })
}

pub fn ev_vk_intersect_1d<S: Scalar>(par: &Params<S>, n: u32, k: u8) -> Result<S> {
    par.require_dim("E V_k(K_n ∩ K'_n)", 1)?;
    par.require_order(k)?;
    let p = par.p.clone();
    let p2 = p.clone() * p;
    if k == 1 {
        return Ok(p2.powu(n));
    }
    let m = par.m_s();
    let inner = S::sum([
        S::int(3),
        -(S::int(2) / m.powu(n)),
        -(S::int(4) * tail_p(par, n)),
        tail_p2(par, n),
    ]);
    Ok((m * p2).powu(n) * inner)
}

/// Expected number of isolated points of the intersection of two independent copies.
pub fn ev_isolated_1d<S: Scalar>(par: &Params<S>, n: u32) -> Result<S> {
    par.require_dim("E N(K_n ∩ K'_n)", 1)?;
    let m = par.m_s();
    let p2 = par.p.clone() * par.p.clone();
    let inner = S::sum([
        S::int(2),
        -(S::int(2) / m.powu(n)),
        -(S::int(4) * tail_p(par, n)),
        S::int(2) * tail_p2(par, n),
    ]);
    Ok((m * p2).powu(n) * inner)
}

pub fn ev_vk_complement_1d<S: Scalar>(par: &Params<S>, n: u32, k: u8, copies: Copies) -> Result<S> {
    par.require_dim("E V_k(D_n)", 1)?;
    par.require_order(k)?;
    let pn = par.p.powu(n);
    let m = par.m_s();
    let mp_n = (m.clone() * par.p.clone()).powu(n);
    Ok(match (copies, k) {
        (Copies::One, 1) => S::one() - pn,
        (Copies::Two, 1) => S::sum([S::one(), -(S::int(2) * pn.clone()), pn.clone() * pn]),
        (Copies::One, _) => S::sum([mp_n * (S::one() - tail_p(par, n)), S::one(), -(S::int(2) * pn)]),
        (Copies::Two, _) => {
            let mp2_n = (m * par.p.clone() * par.p.clone()).powu(n);
            S::sum([
                S::int(2) * mp_n * (S::one() - tail_p(par, n)),
                S::one(),
                -(S::int(4) * pn.clone()),
                S::int(2) * pn.clone() * pn,
                mp2_n * (tail_p2(par, n) - S::one()),
            ])
        }
    })
}

pub fn limit_vk_1d<S: Scalar>(par: &Params<S>, k: u8) -> Result<S> {
    par.require_dim("V̄_k(K)", 1)?;
    par.require_order(k)?;
    if !par.p_exceeds_inverse_power(1) {
        return Err(par.domain("V̄_k(K)", Some(k), "p > 1/M"));
    }
    let (m, p) = (par.m_s(), par.p.clone());
    Ok(match k {
        1 => S::one(),
        _ => m.clone() * (S::one() - p.clone()) / (m - p),
    })
}

pub fn limit_vk_intersect_1d<S: Scalar>(par: &Params<S>, k: u8) -> Result<S> {
    par.require_dim("V̄_k(K ∩ K')", 1)?;
    par.require_order(k)?;
    if k == 1 {
        return Ok(S::one());
    }
    let (m, p) = (par.m_s(), par.p.clone());
    let p2 = p.clone() * p.clone();
    let m1 = m.clone() - S::one();
    Ok(S::sum([
        S::int(3),
        -(S::int(4) * p * m1.clone() / (m.clone() - par.p.clone())),
        p2.clone() * m1 / (m - p2),
    ]))
}

/// Rescaled limit of the complement functionals, obtained by letting `n → ∞`
/// in the rescaled finite-level complement formulas.
pub fn limit_vck_1d<S: Scalar>(par: &Params<S>, k: u8) -> Result<S> {
    par.require_dim("V̄ᶜ_k(K)", 1)?;
    par.require_order(k)?;
    if !par.p_exceeds_inverse_power(1) {
        return Err(par.domain("V̄ᶜ_k(K)", Some(k), "p > 1/M"));
    }
    let (m, p) = (par.m_s(), par.p.clone());
    Ok(match k {
        1 => S::zero(),
        _ => S::one() - p.clone() * (m.clone() - S::one()) / (m - p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn par(m: u32, p: f64) -> Params<f64> {
        Params::new(m, p, 1).unwrap()
    }

    #[test]
    fn level_one_examples() {
        assert!((ev_vk_1d(&par(2, 0.5), 1, 0).unwrap() - 0.75).abs() < 1e-15);
        assert!((ev_vk_1d(&par(3, 0.5), 2, 1).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(ev_vk_intersect_1d(&par(2, 0.5), 1, 1).unwrap(), 0.25);
        let d = ev_vk_complement_1d(&par(2, 0.5), 1, 0, Copies::One).unwrap();
        assert!((d - 0.75).abs() < 1e-15);
        let dd = ev_vk_complement_1d(&par(2, 0.5), 1, 1, Copies::Two).unwrap();
        assert!((dd - 0.25).abs() < 1e-15);
    }

    #[test]
    fn level_zero_conventions() {
        for m in 2..6 {
            for &p in &[0.0, 0.3, 1.0] {
                let a = par(m, p);
                assert_eq!(ev_vk_1d(&a, 0, 0).unwrap(), 1.0);
                assert_eq!(ev_vk_1d(&a, 0, 1).unwrap(), 1.0);
                assert!((ev_vk_intersect_1d(&a, 0, 0).unwrap() - 1.0).abs() < 1e-15);
                assert!(ev_isolated_1d(&a, 0).unwrap().abs() < 1e-15);
                assert!(ev_vk_complement_1d(&a, 0, 0, Copies::One).unwrap().abs() < 1e-15);
                assert!(ev_vk_complement_1d(&a, 0, 0, Copies::Two).unwrap().abs() < 1e-15);
            }
        }
    }

    #[test]
    fn full_interval() {
        let a = par(2, 1.0);
        assert!((ev_vk_intersect_1d(&a, 5, 0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ev_isolated_1d(&a, 3).unwrap(), 0.0);
        assert_eq!(ev_vk_complement_1d(&a, 4, 0, Copies::One).unwrap(), 0.0);
        assert_eq!(limit_vk_1d(&a, 0).unwrap(), 0.0);
        assert_eq!(limit_vck_1d(&a, 0).unwrap(), 0.0);
        assert_eq!(limit_vk_intersect_1d(&a, 0).unwrap(), 0.0);
    }

    #[test]
    fn limits() {
        assert_eq!(limit_vk_1d(&par(2, 0.75), 1).unwrap(), 1.0);
        assert_eq!(limit_vk_intersect_1d(&par(2, 0.5), 1).unwrap(), 1.0);
        assert_eq!(limit_vck_1d(&par(5, 0.5), 1).unwrap(), 0.0);
        let a = par(2, 0.75);
        assert!((limit_vck_1d(&a, 0).unwrap() - limit_vk_1d(&a, 0).unwrap()).abs() < 1e-15);
        assert!(limit_vk_1d(&par(2, 0.5), 0).is_err());
        assert!(limit_vck_1d(&par(4, 0.2), 0).is_err());
    }

    #[test]
    fn large_m_limits() {
        for &p in &[0.2, 0.5, 0.9] {
            let a = par(1_000_000, p);
            assert!((limit_vk_1d(&a, 0).unwrap() - (1.0 - p)).abs() < 1e-5);
            let f = 3.0 - 4.0 * p + p * p;
            assert!((limit_vk_intersect_1d(&a, 0).unwrap() - f).abs() < 1e-5);
        }
    }

    #[test]
    fn wrong_dimension() {
        let a = Params::new(2, 0.5, 2).unwrap();
        assert!(ev_vk_1d(&a, 1, 0).is_err());
    }

    #[test]
    fn recursions_hold_exactly() {
        for m in 2..5u32 {
            for (a, b) in [(1, 5), (1, 2), (4, 5), (2, 3)] {
                let pe = Exact::ratio(a, b);
                let e = Params::new(m, pe.clone(), 1).unwrap();
                let mm = Exact::int(m as i64);
                for n in 1..=20u32 {
                    let v = ev_vk_1d(&e, n, 0).unwrap();
                    let prev = ev_vk_1d(&e, n - 1, 0).unwrap();
                    let rhs = mm.clone() * pe.clone() * prev - (mm.clone() - Exact::int(1)) * pe.powu(2 * n);
                    assert_eq!(v, rhs);

                    let g = ev_isolated_1d(&e, n).unwrap();
                    let gp = ev_isolated_1d(&e, n - 1).unwrap();
                    let q = Exact::int(1) - pe.powu(n);
                    let rhs = mm.clone() * pe.powu(2) * gp
                        + (mm.clone() - Exact::int(1)) * Exact::int(2) * pe.powu(2 * n) * q.clone() * q;
                    assert_eq!(g, rhs);
                }
            }
        }
    }
}
