//! Bit-packed rectangular lattices.

use std::io::{self, Write};

/// Row-major bit lattice. Row `y` occupies `words_per_row` words; bit `x % 64`
/// of word `x / 64` is cell `(x, y)`. Padding bits past `width` are always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitGrid {
    width: usize,
    height: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitGrid {
    pub fn new(width: usize, height: usize) -> Self {
        let words_per_row = width.div_ceil(64);
        Self { width, height, words_per_row, words: vec![0; words_per_row * height] }
    }

    pub fn filled(width: usize, height: usize) -> Self {
        let mut g = Self::new(width, height);
        g.words.iter_mut().for_each(|w| *w = !0);
        g.clear_padding();
        g
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    g.set(x, y, true);
                }
            }
        }
        g
    }

    /// Parses rows of `#`/`1` (present) and `.`/`0` (absent); whitespace is ignored.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let cells: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().filter(|c| !c.is_whitespace()).map(|c| c == '#' || c == '1').collect())
            .collect();
        let width = cells.first().map_or(0, Vec::len);
        Self::from_fn(width, cells.len(), |x, y| cells[y][x])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn row(&self, y: usize) -> &[u64] {
        &self.words[y * self.words_per_row..(y + 1) * self.words_per_row]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        (self.words[y * self.words_per_row + x / 64] >> (x % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        debug_assert!(x < self.width && y < self.height);
        let w = &mut self.words[y * self.words_per_row + x / 64];
        let bit = 1u64 << (x % 64);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    /// Sets every cell of the `w x h` rectangle with top-left corner `(x0, y0)`.
    pub fn fill_rect(&mut self, x0: usize, y0: usize, w: usize, h: usize) {
        for y in y0..y0 + h {
            let row = &mut self.words[y * self.words_per_row..(y + 1) * self.words_per_row];
            let mut x = x0;
            let end = x0 + w;
            while x < end {
                let off = x % 64;
                let take = (64 - off).min(end - x);
                let mask = if take == 64 { !0 } else { ((1u64 << take) - 1) << off };
                row[x / 64] |= mask;
                x += take;
            }
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn invert(&mut self) {
        self.words.iter_mut().for_each(|w| *w = !*w);
        self.clear_padding();
    }

    pub fn inverted(&self) -> Self {
        let mut g = self.clone();
        g.invert();
        g
    }

    /// Cellwise `self ⊆ other`.
    pub fn is_subset_of(&self, other: &BitGrid) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn and(&self, other: &BitGrid) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn or(&self, other: &BitGrid) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    fn zip_words(&self, other: &BitGrid, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!((self.width, self.height), (other.width, other.height), "lattice shapes differ");
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Self { width: self.width, height: self.height, words_per_row: self.words_per_row, words }
    }

    /// Sub-lattice `[x0, x0 + w) x [y0, y0 + h)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Self {
        Self::from_fn(w, h, |x, y| self.get(x0 + x, y0 + y))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |y| {
            self.row(y).iter().enumerate().flat_map(move |(wi, &word)| {
                let mut w = word;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi * 64 + b, y))
                })
            })
        })
    }

    fn clear_padding(&mut self) {
        let rem = self.width % 64;
        if rem == 0 || self.words_per_row == 0 {
            return;
        }
        let mask = (1u64 << rem) - 1;
        for y in 0..self.height {
            self.words[y * self.words_per_row + self.words_per_row - 1] &= mask;
        }
    }

    /// Writes the lattice as a plain (P1) portable bitmap; present cells are black.
    pub fn write_pbm<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "P1")?;
        writeln!(out, "{} {}", self.width, self.height)?;
        let mut line = Vec::with_capacity(71);
        for y in 0..self.height {
            for x in 0..self.width {
                line.push(if self.get(x, y) { b'1' } else { b'0' });
                if line.len() == 70 {
                    line.push(b'\n');
                    out.write_all(&line)?;
                    line.clear();
                }
            }
            if !line.is_empty() {
                line.push(b'\n');
                out.write_all(&line)?;
                line.clear();
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_fill() {
        let mut g = BitGrid::new(130, 3);
        g.set(129, 2, true);
        assert!(g.get(129, 2));
        g.fill_rect(60, 0, 10, 2);
        assert_eq!(g.count_ones(), 21);
        assert!(g.get(63, 1) && g.get(64, 1) && !g.get(70, 1));
        g.set(129, 2, false);
        assert_eq!(g.count_ones(), 20);
    }

    #[test]
    fn invert_respects_padding() {
        let g = BitGrid::new(70, 2).inverted();
        assert_eq!(g.count_ones(), 140);
        assert_eq!(g.inverted(), BitGrid::new(70, 2));
        assert_eq!(BitGrid::filled(70, 2), g);
    }

    #[test]
    fn ones_iterator() {
        let g = BitGrid::from_ascii(&["#..", "..#"]);
        assert_eq!(g.iter_ones().collect::<Vec<_>>(), vec![(0, 0), (2, 1)]);
    }

    #[test]
    fn pbm_format() {
        let g = BitGrid::from_ascii(&["#.", ".#"]);
        let mut buf = Vec::new();
        g.write_pbm(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "P1\n2 2\n10\n01\n");
    }
}
