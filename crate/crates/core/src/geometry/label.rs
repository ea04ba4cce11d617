use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::lattice::BitGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Connectivity {
    /// Edge neighbours only.
    Four,
    /// Edge and corner neighbours; closed squares touching at a corner are connected.
    Eight,
}

impl Connectivity {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            4 => Some(Connectivity::Four),
            8 => Some(Connectivity::Eight),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    /// Left to right.
    Horizontal,
    /// Top to bottom.
    Vertical,
}

/// Connected components of the present cells of a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabeling {
    pub width: usize,
    pub height: usize,
    pub connectivity: Connectivity,
    /// Row-major component label per cell; 0 for absent cells, otherwise `1..=component_count`.
    pub labels: Vec<u32>,
    pub component_count: u32,
    /// Labels of the components touching both opposite sides, per axis.
    pub spanning_components: [Vec<u32>; 2],
}

impl ClusterLabeling {
    pub fn spans(&self, axis: Axis) -> bool {
        !self.spanning_components[axis as usize].is_empty()
    }

    pub fn label_at(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Cells of the components spanning `axis`, or spanning either axis when `axis` is `None`.
    pub fn spanning_mask(&self, axis: Option<Axis>) -> BitGrid {
        let mut keep = vec![false; self.component_count as usize + 1];
        let axes: &[Axis] = match axis {
            Some(Axis::Horizontal) => &[Axis::Horizontal],
            Some(Axis::Vertical) => &[Axis::Vertical],
            None => &[Axis::Horizontal, Axis::Vertical],
        };
        for &a in axes {
            for &l in &self.spanning_components[a as usize] {
                keep[l as usize] = true;
            }
        }
        BitGrid::from_fn(self.width, self.height, |x, y| keep[self.label_at(x, y) as usize])
    }
}

/// Labels the components of the present cells with a union-find pass.
pub fn label(grid: &BitGrid, connectivity: Connectivity) -> ClusterLabeling {
    let (w, h) = (grid.width(), grid.height());
    let mut ids = vec![u32::MAX; w * h];
    let mut uf: UnionFind<u32> = UnionFind::new(0);
    for (x, y) in grid.iter_ones() {
        let id = uf.new_set();
        ids[y * w + x] = id;
        let mut join = |nx: usize, ny: usize| {
            let other = ids[ny * w + nx];
            if other != u32::MAX {
                uf.union(id, other);
            }
        };
        if x > 0 {
            join(x - 1, y);
        }
        if y > 0 {
            join(x, y - 1);
            if connectivity == Connectivity::Eight {
                if x > 0 {
                    join(x - 1, y - 1);
                }
                if x + 1 < w {
                    join(x + 1, y - 1);
                }
            }
        }
    }

    let mut compact = vec![0u32; uf.len()];
    let mut count = 0u32;
    let mut labels = vec![0u32; w * h];
    for (cell, &id) in ids.iter().enumerate() {
        if id == u32::MAX {
            continue;
        }
        let root = uf.find_mut(id) as usize;
        if compact[root] == 0 {
            count += 1;
            compact[root] = count;
        }
        labels[cell] = compact[root];
    }

    let n = count as usize + 1;
    let (mut left, mut right, mut top, mut bottom) = (vec![false; n], vec![false; n], vec![false; n], vec![false; n]);
    if w > 0 && h > 0 {
        for y in 0..h {
            left[labels[y * w] as usize] = true;
            right[labels[y * w + w - 1] as usize] = true;
        }
        for x in 0..w {
            top[labels[x] as usize] = true;
            bottom[labels[(h - 1) * w + x] as usize] = true;
        }
    }
    let both = |a: &[bool], b: &[bool]| (1..n as u32).filter(|&l| a[l as usize] && b[l as usize]).collect();
    ClusterLabeling {
        width: w,
        height: h,
        connectivity,
        labels,
        component_count: count,
        spanning_components: [both(&left, &right), both(&top, &bottom)],
    }
}

/// Euler characteristic as 8-connected components of the present cells minus
/// the 4-connected components of absent cells that do not reach the lattice border.
pub fn euler_crosscheck(grid: &BitGrid) -> i64 {
    let components = label(grid, Connectivity::Eight).component_count as i64;
    let background = label(&grid.inverted(), Connectivity::Four);
    let (w, h) = (background.width, background.height);
    let mut touches = vec![false; background.component_count as usize + 1];
    for y in 0..h {
        for x in 0..w {
            if x == 0 || y == 0 || x + 1 == w || y + 1 == h {
                touches[background.label_at(x, y) as usize] = true;
            }
        }
    }
    let holes = touches[1..].iter().filter(|&&t| !t).count() as i64;
    components - holes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_empty() {
        let full = label(&BitGrid::filled(9, 9), Connectivity::Four);
        assert_eq!(full.component_count, 1);
        assert!(full.spans(Axis::Horizontal) && full.spans(Axis::Vertical));
        let empty = label(&BitGrid::new(9, 9), Connectivity::Eight);
        assert_eq!(empty.component_count, 0);
        assert!(!empty.spans(Axis::Horizontal) && !empty.spans(Axis::Vertical));
    }

    #[test]
    fn diagonal_pair() {
        let g = BitGrid::from_ascii(&["#.", ".#"]);
        assert_eq!(label(&g, Connectivity::Eight).component_count, 1);
        assert_eq!(label(&g, Connectivity::Four).component_count, 2);
        assert!(label(&g, Connectivity::Eight).spans(Axis::Horizontal));
        assert!(!label(&g, Connectivity::Four).spans(Axis::Horizontal));
    }

    #[test]
    fn anti_diagonal_is_joined() {
        let g = BitGrid::from_ascii(&[".#", "#."]);
        assert_eq!(label(&g, Connectivity::Eight).component_count, 1);
    }

    #[test]
    fn labels_are_consistent() {
        let g = BitGrid::from_ascii(&["##..#", "#...#", "..#..", "#####"]);
        let l = label(&g, Connectivity::Four);
        assert_eq!(l.component_count, 3);
        assert_eq!(l.label_at(0, 0), l.label_at(0, 1));
        assert_ne!(l.label_at(0, 0), l.label_at(4, 0));
        assert_eq!(l.label_at(2, 2), l.label_at(0, 3));
        assert_eq!(l.spanning_components[0].len(), 1);
        let mask = l.spanning_mask(Some(Axis::Horizontal));
        assert_eq!(mask.count_ones(), 6);
    }

    #[test]
    fn crosscheck_examples() {
        assert_eq!(euler_crosscheck(&BitGrid::from_ascii(&["...", ".#.", "..."])), 1);
        assert_eq!(euler_crosscheck(&BitGrid::from_ascii(&["###", "#.#", "###"])), 0);
        assert_eq!(euler_crosscheck(&BitGrid::from_ascii(&["#.#", ".#.", "#.#"])), 1);
        assert_eq!(euler_crosscheck(&BitGrid::from_ascii(&["##", "#.", ".."])), 1);
        assert_eq!(euler_crosscheck(&BitGrid::from_ascii(&[".#.", "#.#", ".#."])), 0);
    }
}
