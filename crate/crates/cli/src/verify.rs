//! Self-checks of the formulas against the oracle, the sampler and each other.

use fracperc::analytic::{
    ev_vk, intersection_series_terms_2d, limit_vck_1d, limit_vck_2d, limit_vk_1d, limit_vk_2d, Configuration,
    Params, Target,
};
use fracperc::geometry::{euler_crosscheck, minkowski};
use fracperc::lattice::BitGrid;
use fracperc::montecarlo::{run_experiment, Experiment};
use fracperc::oracle::{enumerate_2d, enumerate_configuration_2d};
use fracperc::rng::TreeKey;
use fracperc::thresholds::{find_p0, find_p1, find_pmin, neg_vbarc0, vbar0};
use fracperc::{Exact, Result, Scalar};
use serde::Serialize;

/// Source of the expectations under test; replaced by a deliberately wrong
/// implementation in negative-control tests.
pub trait Expectations {
    fn ev_vk<S: Scalar>(&self, par: &Params<S>, n: u32, k: u8, target: Target) -> Result<S>;

    fn series_term<S: Scalar>(
        &self,
        par: &Params<S>,
        config: Configuration,
        n: u32,
        k: u8,
        target: Target,
    ) -> Result<S>;

    fn limit_vk<S: Scalar>(&self, par: &Params<S>, k: u8, target: Target) -> Result<S>;
}

/// The library's closed forms.
pub struct Analytic;

impl Expectations for Analytic {
    fn ev_vk<S: Scalar>(&self, par: &Params<S>, n: u32, k: u8, target: Target) -> Result<S> {
        ev_vk(par, n, k, target)
    }

    fn series_term<S: Scalar>(
        &self,
        par: &Params<S>,
        config: Configuration,
        n: u32,
        k: u8,
        target: Target,
    ) -> Result<S> {
        intersection_series_terms_2d(par, config, n, k, target)
    }

    fn limit_vk<S: Scalar>(&self, par: &Params<S>, k: u8, target: Target) -> Result<S> {
        match (par.dim, target) {
            (1, Target::F) => limit_vk_1d(par, k),
            (1, Target::C) => limit_vck_1d(par, k),
            (_, Target::F) => limit_vk_2d(par, k),
            (_, Target::C) => limit_vck_2d(par, k),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GroupReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub max_residual: f64,
    pub failures: Vec<String>,
}

impl GroupReport {
    fn new(name: &str) -> Self {
        Self { name: name.into(), passed: true, ..Default::default() }
    }

    /// Records one comparison; `residual` is in the group's natural units.
    fn check(&mut self, ok: bool, residual: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        }
        if !ok {
            self.passed = false;
            self.failures.push(what());
        }
    }

    fn error(&mut self, err: impl std::fmt::Display) {
        self.checks += 1;
        self.passed = false;
        self.failures.push(err.to_string());
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub groups: Vec<GroupReport>,
}

fn oracle_group(exp: &impl Expectations) -> GroupReport {
    let mut g = GroupReport::new("oracle");
    let ps = [(1, 5), (1, 2), (4, 5)];
    for (m, n_max) in [(2u32, 2u32), (3, 1)] {
        for (a, b) in ps {
            let pe = Exact::ratio(a, b);
            let ex = Params::new(m, pe.clone(), 2).expect("valid");
            let fl = Params::new(m, a as f64 / b as f64, 2).expect("valid");
            for n in 0..=n_max {
                for target in [Target::F, Target::C] {
                    for k in 0..=2u8 {
                        let mut compare = |label: String, exact: Result<Exact>, float: Result<f64>, oracle: Result<Exact>| {
                            match (exact, float, oracle) {
                                (Ok(e), Ok(f), Ok(o)) => {
                                    let of = o.to_f64();
                                    let rel = if of == 0.0 { f.abs() } else { ((f - of) / of).abs() };
                                    g.check(e == o && rel <= 1e-12, rel, || format!("{label}: analytic {e} vs oracle {o}"));
                                }
                                (e, f, o) => {
                                    for err in [e.err(), f.err(), o.err()].into_iter().flatten() {
                                        g.error(format!("{label}: {err}"));
                                    }
                                }
                            }
                        };
                        let label = format!("M={m} p={a}/{b} n={n} V{k}({target})");
                        compare(
                            label.clone(),
                            exp.ev_vk(&ex, n, k, target),
                            exp.ev_vk(&fl, n, k, target),
                            enumerate_2d(m, &pe, n, k, target),
                        );
                        if n == 0 {
                            continue;
                        }
                        for config in Configuration::ALL {
                            compare(
                                format!("{label} {config:?}"),
                                exp.series_term(&ex, config, n, k, target),
                                exp.series_term(&fl, config, n, k, target),
                                enumerate_configuration_2d(m, &pe, n, config, k, target),
                            );
                        }
                    }
                }
            }
        }
    }
    g
}

fn limits_group(exp: &impl Expectations) -> GroupReport {
    let mut g = GroupReport::new("limits");
    for m in [2u32, 3, 4, 7, 16] {
        for num in 1..10i64 {
            let p = Exact::ratio(num, 10);
            let par = Params::new(m, p.clone(), 2).expect("valid");
            let label = format!("M={m} p={p}");
            if par.p_exceeds_inverse_power(2) {
                match exp.limit_vk(&par, 2, Target::F) {
                    Ok(v) => g.check(v == Exact::int(1), 0.0, || format!("{label}: area limit {v}")),
                    Err(e) => g.error(e),
                }
            }
            if par.p_exceeds_inverse_power(1) {
                let closed = Exact::int(2) * Exact::int(m as i64) * (Exact::int(1) - &p) / (Exact::int(m as i64) - &p);
                match (exp.limit_vk(&par, 1, Target::F), exp.limit_vk(&par, 1, Target::C)) {
                    (Ok(a), Ok(b)) => g.check(a == closed && b == closed, 0.0, || format!("{label}: {a} / {b}")),
                    (a, b) => g.error(format!("{label}: {:?} {:?}", a.err(), b.err())),
                }
                let line = Params::new(m, p.clone(), 1).expect("valid");
                match (exp.limit_vk(&line, 0, Target::F), exp.limit_vk(&line, 0, Target::C)) {
                    (Ok(a), Ok(b)) => g.check(a == b, 0.0, || format!("{label}: line limits {a} / {b}")),
                    (a, b) => g.error(format!("{label}: {:?} {:?}", a.err(), b.err())),
                }
            }
        }
    }
    g
}

fn geometry_group(seed: u64) -> GroupReport {
    let mut g = GroupReport::new("geometry");
    for i in 0..2000u64 {
        let key = TreeKey::new(seed, i);
        let side = 8 + (key.bits(0, 0) % 57) as usize;
        let density = [0.2, 0.5, 0.8][(i % 3) as usize];
        let grid = BitGrid::from_fn(side, side, |x, y| key.uniform(1, (y * side + x) as u64) < density);
        let v = minkowski(&grid, 1.0);
        let euler = euler_crosscheck(&grid);
        g.check(v.v0 == euler, (v.v0 - euler).abs() as f64, || format!("grid {i}: V0 {} vs {euler}", v.v0));
    }
    g
}

fn thresholds_group() -> GroupReport {
    let mut g = GroupReport::new("thresholds");
    for m in [2u32, 3, 4, 8, 64, 1024] {
        let (p0, p1, pmin) = match (find_p0(m), find_p1(m), find_pmin(m)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (a, b, c) => {
                [a.err(), b.err(), c.err()].into_iter().flatten().for_each(|e| g.error(e));
                continue;
            }
        };
        let r0 = vbar0(m, p0.value).map(f64::abs).unwrap_or(f64::INFINITY);
        let r1 = neg_vbarc0(m, p1.value).map(f64::abs).unwrap_or(f64::INFINITY);
        g.check(r0 < 1e-10 && r1 < 1e-10, r0.max(r1), || format!("M={m}: residuals {r0:e}, {r1:e}"));
        g.check(p0.value < pmin.value, 0.0, || format!("M={m}: p0 {} >= pmin {}", p0.value, pmin.value));
    }
    g
}

fn montecarlo_group(exp: &impl Expectations, seed: u64) -> GroupReport {
    let mut g = GroupReport::new("montecarlo");
    for (m, n, p) in [(2u32, 4u32, 0.6), (3, 3, 0.8)] {
        let params = match Params::new(m, p, 2) {
            Ok(par) => par,
            Err(e) => {
                g.error(e);
                continue;
            }
        };
        let rows = match run_experiment(&Experiment::new(params.clone(), n, 4000, seed)) {
            Ok(rows) => rows,
            Err(e) => {
                g.error(e);
                continue;
            }
        };
        for row in rows {
            let k = row.functional.order().expect("Minkowski functional");
            match exp.ev_vk(&params, n, k, row.target) {
                Ok(analytic) => {
                    let z = (row.estimate.mean - analytic).abs() / row.estimate.stderr();
                    g.check(z < 4.0, z, || {
                        format!("M={m} n={n} p={p} {}({}): {} vs {analytic} ({z:.2}σ)", row.functional, row.target, row.estimate.mean)
                    });
                }
                Err(e) => g.error(e),
            }
        }
    }
    g
}

/// Runs the requested groups against `exp`.
pub fn verify(exp: &impl Expectations, groups: &[String], seed: u64) -> VerifyReport {
    let groups: Vec<GroupReport> = groups
        .iter()
        .map(|name| match name.as_str() {
            "oracle" => oracle_group(exp),
            "limits" => limits_group(exp),
            "geometry" => geometry_group(seed),
            "thresholds" => thresholds_group(),
            "montecarlo" => montecarlo_group(exp, seed),
            other => {
                let mut g = GroupReport::new(other);
                g.error("unknown group");
                g
            }
        })
        .collect();
    VerifyReport { passed: groups.iter().all(|g| g.passed), groups }
}
