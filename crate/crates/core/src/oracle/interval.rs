use num_traits::{One, Zero};

use crate::scalar::{Exact, Scalar};

/// Finite union of disjoint closed intervals of the line with exact endpoints.
/// A component `[a, a]` is an isolated point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet1D {
    components: Vec<(Exact, Exact)>,
}

impl IntervalSet1D {
    /// Builds the set from arbitrary closed intervals, merging overlapping or touching ones.
    pub fn from_intervals(mut intervals: Vec<(Exact, Exact)>) -> Self {
        intervals.retain(|(a, b)| a <= b);
        intervals.sort();
        let mut components: Vec<(Exact, Exact)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match components.last_mut() {
                Some((_, end)) if a <= *end => {
                    if b > *end {
                        *end = b;
                    }
                }
                _ => components.push((a, b)),
            }
        }
        Self { components }
    }

    /// Union of the cells `[i/M^n, (i+1)/M^n]` whose bit is set in `mask`, for `i < cells`.
    pub fn from_cells(mask: u64, cells: u32, scale: &Exact) -> Self {
        let mut intervals = Vec::new();
        let mut i = 0;
        while i < cells {
            if mask >> i & 1 == 1 {
                let start = i;
                while i < cells && mask >> i & 1 == 1 {
                    i += 1;
                }
                intervals.push((Exact::int(start as i64) * scale, Exact::int(i as i64) * scale));
            } else {
                i += 1;
            }
        }
        Self { components: intervals }
    }

    pub fn components(&self) -> &[(Exact, Exact)] {
        &self.components
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for (a, b) in &self.components {
            for (c, d) in &other.components {
                let lo = if a > c { a } else { c };
                let hi = if b < d { b } else { d };
                if lo <= hi {
                    out.push((lo.clone(), hi.clone()));
                }
            }
        }
        Self::from_intervals(out)
    }

    pub fn contains(&self, x: &Exact) -> bool {
        self.components.iter().any(|(a, b)| a <= x && x <= b)
    }

    /// Euler characteristic: the number of components.
    pub fn v0(&self) -> i64 {
        self.components.len() as i64
    }

    /// Total length.
    pub fn v1(&self) -> Exact {
        self.components.iter().fold(Exact::zero(), |acc, (a, b)| acc + (b - a))
    }

    /// Number of degenerate components.
    pub fn isolated(&self) -> i64 {
        self.components.iter().filter(|(a, b)| a == b).count() as i64
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Exact::zero())
    }

    pub fn contains_one(&self) -> bool {
        self.contains(&Exact::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Exact {
        Exact::ratio(a, b)
    }

    #[test]
    fn cells_merge_into_runs() {
        let s = IntervalSet1D::from_cells(0b1011, 4, &r(1, 4));
        assert_eq!(s.components(), &[(r(0, 1), r(1, 2)), (r(3, 4), r(1, 1))]);
        assert_eq!(s.v0(), 2);
        assert_eq!(s.v1(), r(3, 4));
        assert!(s.contains_zero() && s.contains_one());
    }

    #[test]
    fn intersections_create_points() {
        let a = IntervalSet1D::from_cells(0b01, 2, &r(1, 2));
        let b = IntervalSet1D::from_cells(0b10, 2, &r(1, 2));
        let c = a.intersect(&b);
        assert_eq!(c.components(), &[(r(1, 2), r(1, 2))]);
        assert_eq!((c.v0(), c.isolated()), (1, 1));
        assert_eq!(c.v1(), r(0, 1));
        assert!(c.v0() - c.isolated() >= 0);
    }

    #[test]
    fn merging() {
        let s = IntervalSet1D::from_intervals(vec![(r(1, 2), r(1, 1)), (r(0, 1), r(1, 2)), (r(3, 1), r(2, 1))]);
        assert_eq!(s.components(), &[(r(0, 1), r(1, 1))]);
    }
}
