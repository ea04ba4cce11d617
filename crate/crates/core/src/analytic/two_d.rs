//! Fractal percolation in the unit square.

use super::{q, Configuration, Copies, Params, Target};
use super::{ev_vk_complement_1d, ev_vk_intersect_1d};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn line<S: Scalar>(par: &Params<S>) -> Params<S> {
    Params { m: par.m, p: par.p.clone(), dim: 1 }
}

fn require_positive_dimension<S: Scalar>(par: &Params<S>, quantity: &'static str, k: u8) -> Result<()> {
    if par.p_exceeds_inverse_power(2) {
        Ok(())
    } else {
        Err(par.domain(quantity, Some(k), "p > 1/M^2"))
    }
}

/// Coefficients `[c, b, a, e]` of the finite-level expansion
/// `v̄_0(n) = 1 - c[1-(p/M)^n] + b[1-(p/M^2)^n] - a[1-(p^2/M^2)^n] + e[1-(p^3/M^2)^n]`.
fn expansion_coefficients<S: Scalar>(par: &Params<S>) -> [S; 4] {
    let (m, p) = (par.m_s(), par.p.clone());
    let one = S::one();
    let m1 = m.clone() - one.clone();
    let (p2, p3) = (p.clone() * p.clone(), p.powu(3));
    let m2 = m.clone() * m.clone();
    let c = tail_amplitude(par);
    let b = S::int(2) * p.clone() * (m2.clone() - one) / (m2.clone() - p.clone());
    let a = S::int(4) * p2.clone() * m1.clone() * m1.clone() / ((m.clone() - p.clone()) * (m.clone() - p));
    let e = p3.clone() * m1.clone() * m1 * (m.clone() + p2.clone()) / ((m - p2) * (m2 - p3));
    [c, b, a, e]
}

/// Geometric rates `[p/M, p/M^2, p^2/M^2, p^3/M^2]` of the finite-level expansion.
fn expansion_rates<S: Scalar>(par: &Params<S>) -> [S; 4] {
    let (m, p) = (par.m_s(), par.p.clone());
    let m2 = m.clone() * m.clone();
    [p.clone() / m, p.clone() / m2.clone(), p.powu(2) / m2.clone(), p.powu(3) / m2]
}

/// Amplitude `c` of the leading correction `v̄_0(n) - V̄_0(F) ~ c (p/M)^n`.
pub fn tail_amplitude<S: Scalar>(par: &Params<S>) -> S {
    let (m, p) = (par.m_s(), par.p.clone());
    let m1 = m.clone() - S::one();
    let p2 = p.clone() * p.clone();
    let inner = S::sum([
        S::int(3) / m1.clone(),
        -(S::int(4) * p.clone() / (m.clone() - p.clone())),
        p2.clone() / (m.clone() - p2),
    ]);
    S::int(2) * p.clone() * m1.clone() * m1 / (m - p) * inner
}

/// Rescaled finite-level Euler characteristic `v̄_0(n) = (M^2 p)^{-n} E V_0(F_n)`.
pub fn vbar0_2d_finite<S: Scalar>(par: &Params<S>, n: u32) -> Result<S> {
    par.require_dim("v̄_0(n)", 2)?;
    require_positive_dimension(par, "v̄_0(n)", 0)?;
    let [c, b, a, e] = expansion_coefficients(par);
    let [q1, q2, q3, q4] = expansion_rates(par);
    let br = |x: S| S::one() - x.powu(n);
    Ok(S::sum([S::one(), -(c * br(q1)), b * br(q2), -(a * br(q3)), e * br(q4)]))
}

/// `v̄_0(n) - V̄_0(F)`, evaluated from its four geometric terms without cancellation.
pub fn vbar0_2d_tail<S: Scalar>(par: &Params<S>, n: u32) -> Result<S> {
    par.require_dim("v̄_0(n) - V̄_0", 2)?;
    require_positive_dimension(par, "v̄_0(n) - V̄_0", 0)?;
    let [c, b, a, e] = expansion_coefficients(par);
    let [q1, q2, q3, q4] = expansion_rates(par);
    Ok(S::sum([c * q1.powu(n), -(b * q2.powu(n)), a * q3.powu(n), -(e * q4.powu(n))]))
}

/// `E V_0(F_n)` from the finite-level expansion multiplied out; valid for all `p`.
pub fn ev_v0_2d_expansion<S: Scalar>(par: &Params<S>, n: u32) -> Result<S> {
    par.require_dim("E V_0(F_n)", 2)?;
    let (m, p) = (par.m_s(), par.p.clone());
    let [c, b, a, e] = expansion_coefficients(par);
    let limit = S::sum([S::one(), -c.clone(), b.clone(), -a.clone(), e.clone()]);
    let pn = p.powu(n);
    Ok(S::sum([
        limit * (m.clone() * m.clone() * p.clone()).powu(n),
        c * (m * p.clone() * p).powu(n),
        -(b * pn.powu(2)),
        a * pn.powu(3),
        -(e * pn.powu(4)),
    ]))
}

pub fn limit_vk_2d<S: Scalar>(par: &Params<S>, k: u8) -> Result<S> {
    par.require_dim("V̄_k(F)", 2)?;
    par.require_order(k)?;
    require_positive_dimension(par, "V̄_k(F)", k)?;
    let (m, p) = (par.m_s(), par.p.clone());
    Ok(match k {
        2 => S::one(),
        1 => S::int(2) * m.clone() * (S::one() - p.clone()) / (m - p),
        _ => {
            let [c, b, a, e] = expansion_coefficients(par);
            S::sum([S::one(), -c, b, -a, e])
        }
    })
}

/// `V̄_0(F)` assembled from the summed contributions of the four intersection configurations.
pub fn limit_v0_2d_via_series<S: Scalar>(par: &Params<S>) -> Result<S> {
    par.require_dim("V̄_0(F)", 2)?;
    require_positive_dimension(par, "V̄_0(F)", 0)?;
    let (m, p) = (par.m_s(), par.p.clone());
    let one = S::one();
    let m1 = m.clone() - one.clone();
    let m2 = m.clone() * m.clone();
    let (p2, p3) = (p.powu(2), p.powu(3));
    let first = S::int(2) * m1.clone() * m1.clone() * p.clone() / (m.clone() - p.clone())
        * S::sum([
            S::int(3) / m1.clone(),
            -(S::int(4) * p.clone() / (m.clone() - p.clone())),
            p2.clone() / (m.clone() - p2.clone()),
        ]);
    let second = S::int(2) * m.clone() * m1.clone() * m1.clone() * p.clone()
        * S::sum([
            S::int(2) / (m1.clone() * (m2.clone() - p.clone())),
            -(S::int(4) * p.clone() / ((m.clone() - p.clone()) * (m2.clone() - p2.clone()))),
            p2.clone() / ((m.clone() - p2.clone()) * (m2.clone() - p3.clone())),
        ]);
    let e1 = first - second;
    let corners = m1.clone()
        * m1
        * S::sum([
            -(S::int(2) * p.clone() / (m2.clone() - p.clone())),
            S::int(4) * p2.clone() / (m2.clone() - p2),
            -(p3.clone() / (m2 - p3)),
        ]);
    Ok(S::sum([one, -e1, corners]))
}

pub fn limit_vck_2d<S: Scalar>(par: &Params<S>, k: u8) -> Result<S> {
    par.require_dim("V̄ᶜ_k(F)", 2)?;
    par.require_order(k)?;
    let (m, p) = (par.m_s(), par.p.clone());
    match k {
        0 => {
            require_positive_dimension(par, "V̄ᶜ_0(F)", 0)?;
            Ok(vc0_closed_form(par))
        }
        1 => {
            if !par.p_exceeds_inverse_power(1) {
                return Err(par.domain("V̄ᶜ_1(F)", Some(1), "p > 1/M"));
            }
            let one = S::one();
            let m1 = m.clone() - one.clone();
            let mp1 = m.clone() * p.clone() - one.clone();
            let head = S::int(2) * m.clone() * (one.clone() - p.clone()) / mp1.clone();
            let e1 = S::int(2)
                * m1.clone()
                * S::sum([one / mp1, -(S::int(2) / m1), p.clone() / (m - p)]);
            Ok(head - e1)
        }
        _ => Err(par.domain("V̄ᶜ_2(F)", Some(k), "k < D")),
    }
}

fn vc0_closed_form<S: Scalar>(par: &Params<S>) -> S {
    let (m, p) = (par.m_s(), par.p.clone());
    let m1 = m.clone() - S::one();
    let m2 = m.clone() * m.clone();
    let p3 = p.powu(3);
    let cubic = S::sum([p3.clone(), m1.clone() * p.powu(2), m1 * p.clone(), -m.clone()]);
    m2.clone() * (S::one() - p.clone()) * cubic / ((m2 - p3) * (m - p))
}

/// `V̄ᶜ_0(F)` assembled from the summed contributions of the four intersection configurations.
pub fn limit_vc0_2d_via_series<S: Scalar>(par: &Params<S>) -> Result<S> {
    par.require_dim("V̄ᶜ_0(F)", 2)?;
    require_positive_dimension(par, "V̄ᶜ_0(F)", 0)?;
    let (m, p) = (par.m_s(), par.p.clone());
    let one = S::one();
    let m1 = m.clone() - one.clone();
    let m2 = m.clone() * m.clone();
    let m2p1 = m2.clone() * p.clone() - one.clone();
    let (p2, p3) = (p.powu(2), p.powu(3));
    let head = m2.clone() * (one.clone() - p.clone()) / m2p1.clone();
    let e1 = S::sum([
        S::int(2) * m.clone() * m1.clone() / (m.clone() - p.clone())
            * S::sum([
                S::int(2) * (one.clone() - p.clone()) / m1.clone(),
                S::int(2) * m1.clone() * p.clone() / (m2.clone() - p.clone()),
                -(p.clone() * (one.clone() - p2.clone()) / (m.clone() - p2.clone())),
            ]),
        -(S::int(2) * m.clone() * m1.clone() * m1.clone() * p3.clone()
            / ((m.clone() - p2.clone()) * (m2.clone() - p3.clone()))),
        S::int(2) * m.clone() * m1.clone() / m2p1.clone(),
        -(S::int(8) * m.clone() / (m.clone() + one.clone())),
        S::int(4) * m.clone() * m1.clone() * p.clone() / (m2.clone() - p.clone()),
    ]);
    // Corner sums of (1 - p^n)^l against r^{nD}, binomially expanded.
    let corner = |l: u32| -> S {
        let mut binom = 1i64;
        let mut terms = Vec::new();
        for j in 0..=l {
            let sign = if j % 2 == 0 { one.clone() } else { -one.clone() };
            let x = if j == 0 { one.clone() / p.clone() } else { p.powu(j - 1) };
            let term = if j == 0 {
                one.clone() / m2p1.clone()
            } else {
                x.clone() / (m2.clone() - x)
            };
            terms.push(sign * S::int(binom) * term);
            binom = binom * (l as i64 - j as i64) / (j as i64 + 1);
        }
        m1.clone() * m1.clone() * S::sum(terms)
    };
    let e2 = S::int(2) * corner(2);
    let e3 = S::int(4) * corner(3);
    let e4 = corner(4);
    Ok(S::sum([head, -e1, -e2, e3, -e4]))
}

/// Amplitude of the `M^{(4D-8)m}` term in the exact expansion of `E V_0(C_m)`.
pub fn c_tilde<S: Scalar>(par: &Params<S>) -> S {
    let (m, p) = (par.m_s(), par.p.clone());
    let m1 = m.clone() - S::one();
    let (p2, p3) = (p.powu(2), p.powu(3));
    -(m1.clone() * m1 * p3.clone() * (m.clone() + p2.clone()) / ((m.clone() - p2) * (m.clone() * m - p3)))
}

/// Terms of the exact expansion of `E V_0(C_m)` and the rescaled value `v̄ᶜ_0(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplementExpansion<S> {
    /// `v̄ᶜ_0(m) = M^{-Dm} E V_0(C_m)`.
    pub vbar: S,
    /// `E V_0(C_m)`.
    pub expectation: S,
    /// `V̄ᶜ_0(F) M^{Dm}`.
    pub leading: S,
    /// `c_2 M^{D_2 m}`.
    pub first_sub: S,
    /// `c_3 M^{D_3 m}`.
    pub second_sub: S,
    /// The constant term, always 1.
    pub constant: S,
    /// The terms in `M^{(D-2)m}`, `M^{(2D-4)m}` and `M^{(4D-8)m}`, which vanish as `m → ∞` for `p < 1`.
    pub vanishing: [S; 3],
}

fn complement_terms<S: Scalar>(par: &Params<S>, m_lvl: u32) -> (S, S, S, [S; 3]) {
    let (m, p) = (par.m_s(), par.p.clone());
    let one = S::one();
    let m1 = m.clone() - one.clone();
    let p2 = p.clone() * p.clone();
    let leading = vc0_closed_form(par) * (m.clone() * m.clone() * p.clone()).powu(m_lvl);
    let c2 = S::int(4) * m.clone() * (one.clone() - p.clone()) / (m.clone() - p.clone());
    let c3 = -(S::int(2) * m.clone() * m1.clone() * p.clone() * (one - p2.clone())
        / ((m.clone() - p.clone()) * (m.clone() - p2.clone())));
    let first = c2 * (m.clone() * p.clone()).powu(m_lvl);
    let second = c3 * (m.clone() * p2).powu(m_lvl);
    let pm = p.powu(m_lvl);
    let vanishing = [
        -(S::int(4) * pm.clone()),
        S::int(4) * p.clone() * m1 / (m - p) * pm.powu(2),
        c_tilde(par) * pm.powu(4),
    ];
    (leading, first, second, vanishing)
}

/// `E V_0(C_m)` from its exact expansion; valid for all `p`.
pub fn ev_vc0_2d_expansion<S: Scalar>(par: &Params<S>, m_lvl: u32) -> Result<S> {
    par.require_dim("E V_0(C_m)", 2)?;
    let (a, b, c, [d, e, f]) = complement_terms(par, m_lvl);
    Ok(S::sum([a, b, c, S::one(), d, e, f]))
}

pub fn vbarc0_2d_finite<S: Scalar>(par: &Params<S>, m_lvl: u32) -> Result<ComplementExpansion<S>> {
    par.require_dim("v̄ᶜ_0(m)", 2)?;
    require_positive_dimension(par, "v̄ᶜ_0(m)", 0)?;
    let (leading, first_sub, second_sub, vanishing) = complement_terms(par, m_lvl);
    let expectation = S::sum(
        [leading.clone(), first_sub.clone(), second_sub.clone(), S::one()]
            .into_iter()
            .chain(vanishing.iter().cloned()),
    );
    let vbar = expectation.clone() * par.rescale(m_lvl, 0)?;
    Ok(ComplementExpansion {
        vbar,
        expectation,
        leading,
        first_sub,
        second_sub,
        constant: S::one(),
        vanishing,
    })
}

/// Expected `V_k` of the intersection of the level-`n` pieces in one configuration of
/// neighbouring first-level squares.
pub fn intersection_series_terms_2d<S: Scalar>(
    par: &Params<S>,
    configuration: Configuration,
    n: u32,
    k: u8,
    target: Target,
) -> Result<S> {
    par.require_dim("intersection term", 2)?;
    par.require_order(k)?;
    if n == 0 {
        return Err(Error::InvalidParams("intersection terms start at level n = 1".into()));
    }
    let (m, p) = (par.m_s(), par.p.clone());
    let one = S::one();
    let pn = p.powu(n);
    if let Some(l) = configuration.corner_order() {
        return Ok(match (k, target) {
            (0, Target::F) => pn.powu(l),
            (0, Target::C) => (one - pn).powu(l),
            _ => S::zero(),
        });
    }
    let m1 = m.clone() - one.clone();
    let p2 = p.clone() * p.clone();
    Ok(match (k, target) {
        (0, Target::F) => {
            let inner = S::sum([
                S::int(3) / m.clone(),
                -(S::int(2) / m.powu(n)),
                -(S::int(4) * m1.clone() / (m.clone() - p.clone())
                    * (p.clone() / m.clone() - (p.clone() / m.clone()).powu(n))),
                m1.clone() / (m.clone() - p2.clone())
                    * (p2.clone() / m.clone() - (p2.clone() / m.clone()).powu(n)),
            ]);
            (m * p2).powu(n) * inner
        }
        (1, Target::F) => pn.powu(2) / m,
        (0, Target::C) => S::sum([
            S::int(2)
                * (m.clone() * p.clone()).powu(n)
                * ((one.clone() - p.clone()) / (m.clone() - p.clone())
                    + m1.clone() / (m.clone() - p.clone()) * (p.clone() / m.clone()).powu(n)),
            one.clone(),
            -(S::int(4) * pn.clone()),
            S::int(2) * pn.powu(2),
            -((m.clone() * p2.clone()).powu(n)
                * ((one - p2.clone()) / (m.clone() - p2.clone())
                    + m1 / (m.clone() - p2.clone()) * (p2 / m).powu(n))),
        ]),
        (1, Target::C) => S::sum([one, -(S::int(2) * pn.clone()), pn.powu(2)]) / m,
        _ => S::zero(),
    })
}

/// Side term computed from the one-dimensional results, independently of the
/// closed forms in [`intersection_series_terms_2d`].
fn side_term_from_line<S: Scalar>(par: &Params<S>, n: u32, k: u8, target: Target) -> Result<S> {
    let lp = line(par);
    let (m, p) = (par.m_s(), par.p.clone());
    let one = S::one();
    let p2 = p.clone() * p.clone();
    Ok(match (k, target) {
        (0, Target::F) => p2 * ev_vk_intersect_1d(&lp, n - 1, 0)?,
        (1, Target::F) => p2 * ev_vk_intersect_1d(&lp, n - 1, 1)? / m,
        (_, Target::C) if k <= 1 => {
            let both = ev_vk_complement_1d(&lp, n - 1, k, Copies::Two)?;
            let single = ev_vk_complement_1d(&lp, n - 1, k, Copies::One)?;
            let q = one.clone() - p.clone();
            let v = S::sum([p2 * both, S::int(2) * p * q.clone() * single, q.clone() * q]);
            if k == 1 {
                v / m
            } else {
                v
            }
        }
        _ => S::zero(),
    })
}

/// `E V_k(F_n)` or `E V_k(C_n)` by the self-similarity recursion over levels.
pub fn ev_vk_2d<S: Scalar>(par: &Params<S>, n: u32, k: u8, target: Target) -> Result<S> {
    par.require_dim("E V_k(F_n)", 2)?;
    par.require_order(k)?;
    let (m, p) = (par.m_s(), par.p.clone());
    let qk = S::int(q(2, k).expect("k checked"));
    let shrink = m.powu(k as u32);
    let m2 = m.clone() * m.clone();
    let growth = m2.clone() * p.clone() / shrink.clone();
    let fresh = match target {
        Target::F => S::zero(),
        Target::C => m2 * (S::one() - p.clone()) / shrink * qk.clone(),
    };
    let mut v = match target {
        Target::F => qk,
        Target::C => S::zero(),
    };
    for level in 1..=n {
        let mut terms = vec![growth.clone() * v, fresh.clone()];
        for config in Configuration::ALL {
            let t = match config {
                Configuration::Side => side_term_from_line(par, level, k, target)?,
                _ => intersection_series_terms_2d(par, config, level, k, target)?,
            };
            terms.push(S::int(config.signed_count(par.m)) * t);
        }
        v = S::sum(terms);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn par(m: u32, p: f64) -> Params<f64> {
        Params::new(m, p, 2).unwrap()
    }

    fn exact(m: u32, a: i64, b: i64) -> Params<Exact> {
        Params::new(m, Exact::ratio(a, b), 2).unwrap()
    }

    #[test]
    fn full_square() {
        let a = par(2, 1.0);
        for n in 0..6 {
            let v = vbar0_2d_finite(&a, n).unwrap();
            assert!((v - 0.25f64.powi(n as i32)).abs() < 1e-15);
            assert!((ev_vk_2d(&a, n, 0, Target::F).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(limit_vk_2d(&a, 0).unwrap(), 0.0);
        assert_eq!(limit_vk_2d(&a, 1).unwrap(), 0.0);
        assert_eq!(limit_vk_2d(&a, 2).unwrap(), 1.0);
        assert_eq!(limit_vck_2d(&par(3, 1.0), 0).unwrap(), 0.0);
        let c = vbarc0_2d_finite(&a, 3).unwrap();
        assert!(c.expectation.abs() < 1e-12);
    }

    #[test]
    fn series_terms_examples() {
        let a = par(2, 0.5);
        let v = intersection_series_terms_2d(&a, Configuration::Corner4, 2, 0, Target::F).unwrap();
        assert_eq!(v, 0.5f64.powi(8));
        let v = intersection_series_terms_2d(&a, Configuration::Corner2, 1, 0, Target::C).unwrap();
        assert_eq!(v, 0.25);
        let v = intersection_series_terms_2d(&a, Configuration::Side, 1, 1, Target::F).unwrap();
        assert_eq!(v, 0.125);
        assert!(intersection_series_terms_2d(&a, Configuration::Side, 0, 0, Target::F).is_err());
    }

    #[test]
    fn closed_side_terms_match_line_reduction() {
        for m in 2..6 {
            for (a, b) in [(1, 5), (1, 2), (4, 5), (1, 1), (0, 1)] {
                let e = exact(m, a, b);
                for n in 1..8 {
                    for target in [Target::F, Target::C] {
                        for k in 0..=2 {
                            let closed =
                                intersection_series_terms_2d(&e, Configuration::Side, n, k, target).unwrap();
                            let reduced = side_term_from_line(&e, n, k, target).unwrap();
                            assert_eq!(closed, reduced, "M={m} p={a}/{b} n={n} k={k} {target}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_equals_recursion_exactly() {
        for m in [2, 3, 5] {
            for (a, b) in [(0, 1), (1, 5), (1, 2), (4, 5), (1, 1)] {
                let e = exact(m, a, b);
                for n in 0..8 {
                    let rec = ev_vk_2d(&e, n, 0, Target::F).unwrap();
                    assert_eq!(ev_v0_2d_expansion(&e, n).unwrap(), rec);
                    let rec_c = ev_vk_2d(&e, n, 0, Target::C).unwrap();
                    if n > 0 {
                        assert_eq!(ev_vc0_2d_expansion(&e, n).unwrap(), rec_c, "M={m} p={a}/{b} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn limit_routes_agree_exactly() {
        for m in [2, 3, 4, 7] {
            for (a, b) in [(1, 2), (4, 5), (9, 10), (1, 1), (2, 7)] {
                let e = exact(m, a, b);
                if !e.p_exceeds_inverse_power(2) {
                    continue;
                }
                assert_eq!(limit_v0_2d_via_series(&e).unwrap(), limit_vk_2d(&e, 0).unwrap());
                assert_eq!(limit_vc0_2d_via_series(&e).unwrap(), limit_vck_2d(&e, 0).unwrap());
                if e.p_exceeds_inverse_power(1) {
                    assert_eq!(limit_vck_2d(&e, 1).unwrap(), limit_vk_2d(&e, 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn complement_limit_matches_truncated_series() {
        let a = par(2, 0.5);
        let rd: f64 = 1.0 / (4.0 * 0.5);
        let mut terms: Vec<f64> = (0..=200).map(|n| (1.0 - 0.5) / 0.5 * rd.powi(n)).collect();
        for n in 1..=200u32 {
            let scale = rd.powi(n as i32);
            for config in Configuration::ALL {
                let t = intersection_series_terms_2d(&a, config, n, 0, Target::C).unwrap();
                terms.push(config.signed_count(2) as f64 * scale * t);
            }
        }
        let total = crate::scalar::neumaier_sum(terms);
        assert!((total - limit_vck_2d(&a, 0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(limit_vk_2d(&par(2, 0.25), 0), Err(Error::Domain { .. })));
        assert!(vbar0_2d_finite(&par(2, 0.2), 3).is_err());
        assert!(limit_vck_2d(&par(4, 0.2), 1).is_err());
        assert!(limit_vck_2d(&par(4, 0.2), 0).is_ok());
        assert!(limit_vck_2d(&par(4, 0.9), 2).is_err());
    }

    #[test]
    fn c_tilde_vs_stated_form() {
        let e = exact(3, 2, 5);
        let [_, _, _, last] = expansion_coefficients(&e);
        assert_eq!(c_tilde(&e), -last);
    }
}
