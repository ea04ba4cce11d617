//! Exhaustive enumeration of all keep/drop outcomes of small subdivision trees.
//!
//! Expectations are computed exactly in rational arithmetic. Only the subtrees
//! of surviving nodes are expanded: a discarded node's descendants cannot
//! influence the level-`n` set, and their outcome probabilities sum to one.

mod interval;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::analytic::{Configuration, Target};
use crate::error::{Error, Result};
use crate::geometry::minkowski_counts;
use crate::lattice::BitGrid;
use crate::scalar::{Exact, Scalar};

pub use interval::IntervalSet1D;

/// Largest number of non-root tree nodes the oracle will enumerate.
pub const MAX_TREE_NODES: u64 = 21;

/// Level-`n` occupancy mask (bit `y * M^n + x`) with its exact probability.
pub type Outcome = (u64, Exact);

/// Random set whose functional is enumerated on the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Set1D {
    /// `K_n`.
    K,
    /// Closed complement `D_n` of `K_n` in `[0, 1]`.
    D,
    /// `K_n ∩ K'_n` for two independent copies.
    KK,
    /// `D_n ∩ D'_n` for two independent copies.
    DD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity1D {
    V0,
    V1,
    /// Number of isolated points.
    Isolated,
    ContainsZero,
    ContainsOne,
}

fn tree_nodes(m: u32, dim: u8, n: u32) -> Option<u64> {
    let per_level = (m as u64).checked_pow(dim as u32)?;
    (1..=n).try_fold(0u64, |acc, l| acc.checked_add(per_level.checked_pow(l)?))
}

fn check_envelope(m: u32, dim: u8, n: u32, p: &Exact) -> Result<()> {
    if m < 2 || !(dim == 1 || dim == 2) {
        return Err(Error::InvalidParams(format!("oracle needs M >= 2 and d in {{1, 2}}, got M={m}, d={dim}")));
    }
    if *p < Exact::zero() || *p > Exact::one() {
        return Err(Error::InvalidParams("p must lie in [0, 1]".into()));
    }
    match tree_nodes(m, dim, n) {
        Some(t) if t <= MAX_TREE_NODES => Ok(()),
        _ => Err(Error::InstanceTooLarge(format!(
            "M={m}, d={dim}, n={n} has more than {MAX_TREE_NODES} tree nodes"
        ))),
    }
}

/// Level-`n` outcomes with integer weights over the common denominator `denom`.
struct Weighted {
    outcomes: Vec<(u64, BigInt)>,
    denom: BigInt,
}

/// With `p = a/b`, every node of level `l` contributes a factor with denominator `b`,
/// so weights stay integral over `b^T`, `T` the number of non-root nodes.
fn weighted_distribution(m: u32, dim: u8, n: u32, p: &Exact) -> Result<Weighted> {
    check_envelope(m, dim, n, p)?;
    let (a, b) = (p.numer().clone(), p.denom().clone());
    let c = &b - &a;
    let per_level = (m as u64).pow(dim as u32);
    let mut states: HashMap<u64, BigInt> = HashMap::from([(1u64, BigInt::one())]);
    let mut width = 1u64;
    let mut exponent = 0usize;
    for level in 1..=n {
        let slots = per_level.pow(level) as usize;
        let pow = |base: &BigInt| -> Vec<BigInt> {
            std::iter::successors(Some(BigInt::one()), |x| Some(x * base)).take(slots + 1).collect()
        };
        let (pa, pc, pb) = (pow(&a), pow(&c), pow(&b));
        let mut next: HashMap<u64, BigInt> = HashMap::new();
        for (mask, weight) in states {
            let children = children_of(mask, width, m, dim);
            let k_all = children.len();
            for subset in 0u64..(1 << k_all) {
                let kept = subset.count_ones() as usize;
                let w = &weight * &pa[kept] * &pc[k_all - kept] * &pb[slots - k_all];
                if w.is_zero() {
                    continue;
                }
                let mut child_mask = 0u64;
                for (i, &child) in children.iter().enumerate() {
                    if subset >> i & 1 == 1 {
                        child_mask |= 1 << child;
                    }
                }
                *next.entry(child_mask).or_insert_with(BigInt::zero) += w;
            }
        }
        states = next;
        width *= m as u64;
        exponent += slots;
    }
    let mut outcomes: Vec<(u64, BigInt)> = states.into_iter().collect();
    outcomes.sort_by_key(|(mask, _)| *mask);
    Ok(Weighted { outcomes, denom: num_traits::pow(b, exponent) })
}

/// Exact distribution of the level-`n` set over all outcomes of the tree.
pub fn level_distribution(m: u32, dim: u8, n: u32, p: &Exact) -> Result<Vec<Outcome>> {
    let dist = weighted_distribution(m, dim, n, p)?;
    Ok(dist.outcomes.into_iter().map(|(mask, w)| (mask, Exact::new(w, dist.denom.clone()))).collect())
}

fn children_of(mask: u64, width: u64, m: u32, dim: u8) -> Vec<u32> {
    let m = m as u64;
    let child_width = width * m;
    let rows = if dim == 2 { width } else { 1 };
    let mut out = Vec::new();
    for y in 0..rows {
        for x in 0..width {
            if mask >> (y * width + x) & 1 == 0 {
                continue;
            }
            let child_rows = if dim == 2 { m } else { 1 };
            for j in 0..child_rows {
                for i in 0..m {
                    out.push(((y * m + j) * child_width + x * m + i) as u32);
                }
            }
        }
    }
    out
}

/// `Σ f(x) w / denom`, summing the integer weights per distinct value of `f` first.
fn expectation<T>(items: impl IntoIterator<Item = (T, BigInt)>, denom: &BigInt, mut f: impl FnMut(&T) -> Exact) -> Exact {
    let mut groups: HashMap<Exact, BigInt> = HashMap::new();
    for (x, w) in items {
        *groups.entry(f(&x)).or_insert_with(BigInt::zero) += w;
    }
    let total = groups.into_iter().fold(Exact::zero(), |acc, (v, w)| acc + v * Exact::from_integer(w));
    total / Exact::from_integer(denom.clone())
}

fn indicator(b: bool) -> Exact {
    if b {
        Exact::one()
    } else {
        Exact::zero()
    }
}

fn quantity_of(set: &IntervalSet1D, quantity: Quantity1D) -> Exact {
    match quantity {
        Quantity1D::V0 => Exact::int(set.v0()),
        Quantity1D::V1 => set.v1(),
        Quantity1D::Isolated => Exact::int(set.isolated()),
        Quantity1D::ContainsZero => indicator(set.contains_zero()),
        Quantity1D::ContainsOne => indicator(set.contains_one()),
    }
}

/// Exact expectation of a functional of `K_n`, `D_n` or of the intersection of two independent copies.
pub fn enumerate_1d(m: u32, p: &Exact, n: u32, set: Set1D, quantity: Quantity1D) -> Result<Exact> {
    let dist = weighted_distribution(m, 1, n, p)?;
    let cells = m.pow(n);
    let all = if cells == 64 { !0 } else { (1u64 << cells) - 1 };
    let scale = Exact::ratio(1, cells as i64);
    let complement = matches!(set, Set1D::D | Set1D::DD);
    let sets: Vec<(IntervalSet1D, BigInt)> = dist
        .outcomes
        .into_iter()
        .map(|(mask, w)| {
            let mask = if complement { all & !mask } else { mask };
            (IntervalSet1D::from_cells(mask, cells, &scale), w)
        })
        .collect();
    Ok(match set {
        Set1D::K | Set1D::D => expectation(sets, &dist.denom, |s| quantity_of(s, quantity)),
        Set1D::KK | Set1D::DD => {
            let pairs = sets.iter().flat_map(|(a, wa)| sets.iter().map(move |(b, wb)| (a.intersect(b), wa * wb)));
            expectation(pairs, &(&dist.denom * &dist.denom), |s| quantity_of(s, quantity))
        }
    })
}

fn grid_of(mask: u64, side: usize, target: Target) -> BitGrid {
    let g = BitGrid::from_fn(side, side, |x, y| mask >> (y * side + x) & 1 == 1);
    match target {
        Target::F => g,
        Target::C => g.inverted(),
    }
}

/// Exact expectation of `V_k(F_n)` or `V_k(C_n)` in the unit square.
pub fn enumerate_2d(m: u32, p: &Exact, n: u32, k: u8, target: Target) -> Result<Exact> {
    if k > 2 {
        return Err(Error::InvalidOrder { k, dim: 2 });
    }
    let dist = weighted_distribution(m, 2, n, p)?;
    let side = m.pow(n) as usize;
    let s = Exact::ratio(1, side as i64);
    Ok(expectation(dist.outcomes, &dist.denom, |&mask| {
        let v = minkowski_counts(&grid_of(mask, side, target), 1.0);
        match k {
            0 => Exact::int(v.v0),
            1 => Exact::int(2 * v.faces - v.edges_shared) * &s,
            _ => Exact::int(v.faces) * &s * &s,
        }
    }))
}

/// Exact expectation of `V_k` of the intersection of the level-`n` pieces lying in
/// neighbouring first-level squares, for one intersection configuration.
pub fn enumerate_configuration_2d(
    m: u32,
    p: &Exact,
    n: u32,
    configuration: Configuration,
    k: u8,
    target: Target,
) -> Result<Exact> {
    if k > 2 {
        return Err(Error::InvalidOrder { k, dim: 2 });
    }
    if n == 0 {
        return Err(Error::InvalidParams("intersection terms start at level n = 1".into()));
    }
    let dist = weighted_distribution(m, 2, n, p)?;
    let side = m.pow(n) as usize;
    let block = side / m as usize;
    let scale = Exact::ratio(1, side as i64);
    Ok(expectation(dist.outcomes, &dist.denom, |&mask| {
        let g = grid_of(mask, side, target);
        match configuration.corner_cells(block) {
            None => {
                // Blocks (0,0) and (0,1) meet along the horizontal segment y = block.
                let row_mask = |y: usize| (0..block).filter(|&x| g.get(x, y)).fold(0u64, |acc, x| acc | 1 << x);
                let upper = IntervalSet1D::from_cells(row_mask(block - 1), block as u32, &scale);
                let lower = IntervalSet1D::from_cells(row_mask(block), block as u32, &scale);
                let cut = upper.intersect(&lower);
                match k {
                    0 => Exact::int(cut.v0()),
                    1 => cut.v1(),
                    _ => Exact::zero(),
                }
            }
            Some(cells) => {
                let all = cells.iter().all(|&(x, y)| g.get(x, y));
                if k == 0 {
                    indicator(all)
                } else {
                    Exact::zero()
                }
            }
        }
    }))
}

impl Configuration {
    /// Cells around the corner `(block, block)` that belong to the configuration's squares.
    fn corner_cells(self, block: usize) -> Option<Vec<(usize, usize)>> {
        let (lo, hi) = (block - 1, block);
        match self {
            Configuration::Side => None,
            Configuration::Corner2 => Some(vec![(lo, lo), (hi, hi)]),
            Configuration::Corner3 => Some(vec![(lo, lo), (hi, lo), (lo, hi)]),
            Configuration::Corner4 => Some(vec![(lo, lo), (hi, lo), (lo, hi), (hi, hi)]),
        }
    }
}
