//! Realizations of `F_n` (and `C_n`) as bit lattices.

use serde::Serialize;

use crate::analytic::{ModelParams, Target};
use crate::error::{Error, Result};
use crate::lattice::BitGrid;
use crate::rng::TreeKey;

/// Hard cap on the number of lattice cells, `2^34`.
pub const MAX_CELL_BITS: u32 = 34;

/// Default memory budget for a single lattice: 2 GiB.
pub const DEFAULT_BUDGET_BYTES: u64 = 2 << 30;

/// How uniforms are shared between runs at different `p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Coupling {
    /// The same uniform per tree node for every `p`, so `F_n(p) ⊆ F_n(p')` for `p ≤ p'`.
    #[default]
    Shared,
    /// The uniforms are additionally keyed by `p`.
    Independent,
}

/// One sampled level-`n` set together with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRealization {
    pub params: ModelParams,
    pub n: u32,
    pub seed: u64,
    pub sample_index: u64,
    pub target: Target,
    pub grid: BitGrid,
}

impl GridRealization {
    /// Number of cells per axis, `M^n`.
    pub fn side(&self) -> usize {
        self.grid.width()
    }

    /// Side length `M^{-n}` of one cell.
    pub fn cell_size(&self) -> f64 {
        (self.params.m as f64).powi(-(self.n as i32))
    }
}

/// Closed complement in the unit cube: swaps `F_n` and `C_n`.
pub fn complement(real: &GridRealization) -> GridRealization {
    GridRealization {
        target: match real.target {
            Target::F => Target::C,
            Target::C => Target::F,
        },
        grid: real.grid.inverted(),
        ..real.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampler {
    pub budget_bytes: u64,
    pub coupling: Coupling,
}

impl Default for Sampler {
    fn default() -> Self {
        Self { budget_bytes: DEFAULT_BUDGET_BYTES, coupling: Coupling::Shared }
    }
}

/// `M^n`, if it fits.
pub fn side_len(m: u32, n: u32) -> Option<u64> {
    (m as u64).checked_pow(n)
}

impl Sampler {
    pub fn with_coupling(coupling: Coupling) -> Self {
        Self { coupling, ..Self::default() }
    }

    /// Checks that a level-`n` lattice for `params` fits the resource limits and returns its side.
    pub fn check_budget(&self, params: &ModelParams, n: u32) -> Result<usize> {
        let too_large = || {
            Error::ResourceGuard(format!(
                "lattice for M={}, d={}, n={} exceeds {} cells or the {} byte budget",
                params.m, params.dim, n, 1u64 << MAX_CELL_BITS, self.budget_bytes
            ))
        };
        let side = side_len(params.m, n).ok_or_else(too_large)?;
        let height = if params.dim == 2 { side } else { 1 };
        let cells = side.checked_mul(height).ok_or_else(too_large)?;
        let bytes = side.div_ceil(64).checked_mul(height * 8).ok_or_else(too_large)?;
        if cells > 1u64 << MAX_CELL_BITS || bytes > self.budget_bytes {
            return Err(too_large());
        }
        usize::try_from(side).map_err(|_| too_large())
    }

    fn key(&self, params: &ModelParams, seed: u64, sample_index: u64) -> TreeKey {
        let key = TreeKey::new(seed, sample_index);
        match self.coupling {
            Coupling::Shared => key,
            Coupling::Independent => key.salted(params.p.to_bits()),
        }
    }

    /// Samples `F_n` by depth-first expansion of the surviving nodes of the subdivision tree.
    ///
    /// The child with coordinates `(x, y)` at level `l` is kept iff its uniform,
    /// addressed by `(l, y * M^l + x)`, is below `p`. The root is always kept.
    pub fn sample(&self, params: &ModelParams, n: u32, seed: u64, sample_index: u64) -> Result<GridRealization> {
        let side = self.check_budget(params, n)?;
        let height = if params.dim == 2 { side } else { 1 };
        let mut grid = BitGrid::new(side, height);
        let key = self.key(params, seed, sample_index);
        let mut walker = Walker { key, m: params.m as u64, p: params.p, n, planar: params.dim == 2, grid: &mut grid };
        walker.expand(0, 0, 0, 1);
        Ok(GridRealization { params: params.clone(), n, seed, sample_index, target: Target::F, grid })
    }

    /// Number of kept children of the root; one draw of the offspring law.
    pub fn root_offspring(&self, params: &ModelParams, seed: u64, sample_index: u64) -> u32 {
        let key = self.key(params, seed, sample_index);
        let children = (params.m as u64).pow(params.dim as u32);
        (0..children).filter(|&i| key.uniform(1, i) < params.p).count() as u32
    }
}

struct Walker<'a> {
    key: TreeKey,
    m: u64,
    p: f64,
    n: u32,
    planar: bool,
    grid: &'a mut BitGrid,
}

impl Walker<'_> {
    /// Expands the kept node `(x, y)` at `level`, whose level has `width` nodes per row.
    fn expand(&mut self, level: u32, x: u64, y: u64, width: u64) {
        if level == self.n {
            self.grid.set(x as usize, y as usize, true);
            return;
        }
        let child_level = level + 1;
        let child_width = width * self.m;
        let rows = if self.planar { self.m } else { 1 };
        for j in 0..rows {
            let cy = y * self.m + j;
            for i in 0..self.m {
                let cx = x * self.m + i;
                if self.key.uniform(child_level, cy * child_width + cx) < self.p {
                    self.expand(child_level, cx, cy, child_width);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: u32, p: f64, d: u8) -> ModelParams {
        ModelParams::new(m, p, d).unwrap()
    }

    #[test]
    fn trivial_probabilities() {
        let s = Sampler::default();
        let full = s.sample(&params(3, 1.0, 2), 3, 5, 0).unwrap();
        assert_eq!(full.grid, BitGrid::filled(27, 27));
        let empty = s.sample(&params(2, 0.0, 2), 4, 5, 0).unwrap();
        assert!(empty.grid.is_empty());
        let zero = s.sample(&params(2, 0.0, 2), 0, 5, 0).unwrap();
        assert_eq!(zero.grid.count_ones(), 1);
    }

    #[test]
    fn line_lattice() {
        let r = Sampler::default().sample(&params(3, 0.7, 1), 4, 9, 2).unwrap();
        assert_eq!((r.grid.width(), r.grid.height()), (81, 1));
    }

    #[test]
    fn complement_roundtrip() {
        let r = Sampler::default().sample(&params(2, 0.6, 2), 5, 1, 0).unwrap();
        let c = complement(&r);
        assert_eq!(c.target, Target::C);
        assert_eq!(r.grid.count_ones() + c.grid.count_ones(), 32 * 32);
        assert_eq!(complement(&c), r);
        assert!(complement(&Sampler::default().sample(&params(2, 1.0, 2), 3, 0, 0).unwrap()).grid.is_empty());
    }

    #[test]
    fn budget_guard() {
        let s = Sampler::default();
        assert!(matches!(s.sample(&params(2, 0.5, 2), 18, 0, 0), Err(Error::ResourceGuard(_))));
        assert!(s.check_budget(&params(2, 0.5, 2), 17).is_ok());
        assert!(s.check_budget(&params(2, 0.5, 1), 34).is_ok());
        assert!(s.check_budget(&params(2, 0.5, 1), 35).is_err());
        assert!(s.check_budget(&params(1000, 0.5, 2), 10).is_err());
        let small = Sampler { budget_bytes: 1024, ..Sampler::default() };
        assert!(small.check_budget(&params(2, 0.5, 2), 7).is_err());
    }

    #[test]
    fn coupling_modes() {
        let shared = Sampler::default();
        let lo = shared.sample(&params(2, 0.5, 2), 6, 3, 1).unwrap();
        let hi = shared.sample(&params(2, 0.8, 2), 6, 3, 1).unwrap();
        assert!(lo.grid.is_subset_of(&hi.grid));
        let ind = Sampler::with_coupling(Coupling::Independent);
        let a = ind.sample(&params(2, 0.8, 2), 6, 3, 1).unwrap();
        assert_ne!(a.grid, hi.grid);
    }
}
