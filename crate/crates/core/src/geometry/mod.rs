//! Minkowski functionals and connectivity of unions of closed lattice squares.

mod label;

use serde::Serialize;

use crate::lattice::BitGrid;
use crate::sampler::GridRealization;

pub use label::{euler_crosscheck, label, Axis, ClusterLabeling, Connectivity};

/// Lattice counts and intrinsic volumes of a union of closed cells.
///
/// For planar lattices the counts refer to squares, grid edges and grid
/// vertices. For a line lattice `faces` counts unit intervals, `vertices_any`
/// counts their endpoints and both edge counts are zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MinkowskiValues {
    pub faces: i64,
    pub edges_any: i64,
    pub edges_shared: i64,
    pub vertices_any: i64,
    pub v0: i64,
    pub v1: f64,
    pub v2: f64,
    pub cell_size: f64,
}

impl MinkowskiValues {
    fn planar(faces: i64, edges_any: i64, edges_shared: i64, vertices_any: i64, cell_size: f64) -> Self {
        Self {
            faces,
            edges_any,
            edges_shared,
            vertices_any,
            v0: vertices_any - edges_any + faces,
            v1: cell_size * (2 * faces - edges_shared) as f64,
            v2: cell_size * cell_size * faces as f64,
            cell_size,
        }
    }

    /// Functional `V_k` as a float.
    pub fn vk(&self, k: u8) -> f64 {
        match k {
            0 => self.v0 as f64,
            1 => self.v1,
            _ => self.v2,
        }
    }
}

/// Window type of the 2x2 neighbourhood `a b / c d` around a grid vertex, with
/// `a` the cell up-left of the vertex and `d` the cell down-right.
/// Entries are `(vertex, edges_any, edges_shared, face)` contributions of the
/// vertex together with its right and downward edges and its down-right face.
const WINDOW_TABLE: [[i64; 4]; 16] = {
    let mut t = [[0i64; 4]; 16];
    let mut idx = 0;
    while idx < 16 {
        let a = (idx & 1) as i64;
        let b = ((idx >> 1) & 1) as i64;
        let c = ((idx >> 2) & 1) as i64;
        let d = ((idx >> 3) & 1) as i64;
        let vertex = if a | b | c | d != 0 { 1 } else { 0 };
        t[idx] = [vertex, (b | d) + (c | d), (b & d) + (c & d), d];
        idx += 1;
    }
    t
};

/// Histogram of the 16 window types over all `(width+1) x (height+1)` grid vertices.
pub fn window_histogram(grid: &BitGrid) -> [u64; 16] {
    let mut hist = [0u64; 16];
    let (w, h) = (grid.width(), grid.height());
    let wpr = grid.words_per_row();
    let zero_row = vec![0u64; wpr];
    for y in 0..=h {
        let above = if y == 0 { &zero_row[..] } else { grid.row(y - 1) };
        let below = if y == h { &zero_row[..] } else { grid.row(y) };
        let mut idx = 0usize;
        let mut x = 0usize;
        for wi in 0..wpr {
            let (wa, wb) = (above[wi], below[wi]);
            let bits = (w - wi * 64).min(64);
            if wa == 0 && wb == 0 && idx == 0 {
                hist[0] += bits as u64;
                x += bits;
                continue;
            }
            for bit in 0..bits {
                let na = ((wa >> bit) & 1) as usize;
                let nb = ((wb >> bit) & 1) as usize;
                idx = ((idx >> 1) & 0b0101) | (na << 1) | (nb << 3);
                hist[idx] += 1;
            }
            x += bits;
        }
        debug_assert_eq!(x, w);
        // Vertex on the right border: only the left column of the window is occupied.
        idx = (idx >> 1) & 0b0101;
        hist[idx] += 1;
    }
    hist
}

/// Minkowski functionals of a planar lattice via the 2x2 window lookup table.
pub fn minkowski(grid: &BitGrid, cell_size: f64) -> MinkowskiValues {
    let hist = window_histogram(grid);
    let mut acc = [0i64; 4];
    for (t, &count) in hist.iter().enumerate() {
        for (a, &v) in acc.iter_mut().zip(&WINDOW_TABLE[t]) {
            *a += v * count as i64;
        }
    }
    MinkowskiValues::planar(acc[3], acc[1], acc[2], acc[0], cell_size)
}

/// Minkowski functionals of a planar lattice by word-parallel counting of
/// faces, edges and vertices. Independent of the lookup path in [`minkowski`].
pub fn minkowski_counts(grid: &BitGrid, cell_size: f64) -> MinkowskiValues {
    let (h, wpr) = (grid.height(), grid.words_per_row());
    let zero_row = vec![0u64; wpr];
    let spill = grid.width().is_multiple_of(64);
    let (mut faces, mut e_any, mut e_shared, mut verts) = (0i64, 0i64, 0i64, 0i64);
    let pc = |x: u64| x.count_ones() as i64;
    for y in 0..=h {
        let above = if y == 0 { &zero_row[..] } else { grid.row(y - 1) };
        let below = if y == h { &zero_row[..] } else { grid.row(y) };
        let (mut carry_a, mut carry_b) = (0u64, 0u64);
        for wi in 0..wpr {
            let (a, b) = (above[wi], below[wi]);
            // Cells left of each vertex: the row shifted by one position.
            let (sa, sb) = ((a << 1) | carry_a, (b << 1) | carry_b);
            carry_a = a >> 63;
            carry_b = b >> 63;
            faces += pc(b);
            e_any += pc(a | b) + pc(sb | b);
            e_shared += pc(a & b) + pc(sb & b);
            verts += pc(a | b | sa | sb);
        }
        if spill {
            // The shifted row overflows into the vertex column past the last word.
            verts += pc(carry_a | carry_b);
            e_any += pc(carry_b);
        }
    }
    MinkowskiValues::planar(faces, e_any, e_shared, verts, cell_size)
}

/// Functionals of a union of closed unit intervals stored in the first row of `grid`:
/// `V_0` is the number of runs and `V_1 = s * popcount`.
pub fn minkowski_line(grid: &BitGrid, cell_size: f64) -> MinkowskiValues {
    let row = grid.row(0);
    let mut runs = 0i64;
    let mut prev_top = 0u64;
    for &w in row {
        // A run starts at every set bit whose left neighbour is clear.
        let starts = w & !((w << 1) | prev_top);
        runs += starts.count_ones() as i64;
        prev_top = w >> 63;
    }
    let faces = grid.count_ones() as i64;
    MinkowskiValues {
        faces,
        edges_any: 0,
        edges_shared: 0,
        vertices_any: faces + runs,
        v0: runs,
        v1: cell_size * faces as f64,
        v2: 0.0,
        cell_size,
    }
}

/// Functionals of a realization in its ambient dimension.
pub fn minkowski_of(real: &GridRealization) -> MinkowskiValues {
    if real.params.dim == 1 {
        minkowski_line(&real.grid, real.cell_size())
    } else {
        minkowski(&real.grid, real.cell_size())
    }
}
