//! Partitions of the hypercube into cells contained in radius-one Hamming balls.

use crate::error::{Error, Result};

pub const MAX_COVERING_ARITY: usize = 12;

/// A partition of `{0,1}^n` into cells, each cell inside the radius-one ball
/// around its center and containing that center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCovering {
    dim: usize,
    centers: Vec<u32>,
    cells: Vec<Vec<u32>>,
}

impl BallCovering {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centers(&self) -> &[u32] {
        &self.centers
    }

    /// Cell `i` belongs to `centers()[i]`; points inside a cell are sorted.
    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    /// Number of cells, `s`.
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Checks the partition and ball-containment invariants.
    pub fn check(&self) -> Result<()> {
        let mut owner = vec![None; 1 << self.dim];
        for (i, (c, cell)) in self.centers.iter().zip(&self.cells).enumerate() {
            if !cell.contains(c) {
                return Err(Error::Construction(format!(
                    "center {c} missing from its cell"
                )));
            }
            for &x in cell {
                if (x ^ c).count_ones() > 1 {
                    return Err(Error::Construction(format!("{x} is far from center {c}")));
                }
                if owner[x as usize].replace(i).is_some() {
                    return Err(Error::Construction(format!("{x} lies in two cells")));
                }
            }
        }
        if owner.iter().any(Option::is_none) {
            return Err(Error::Construction("cells do not cover the cube".into()));
        }
        Ok(())
    }
}

/// Covers `{0,1}^n` with radius-one balls: a perfect Hamming code when
/// `n = 2^r - 1`, otherwise a greedy covering.
pub fn cover_hypercube(n: usize) -> Result<BallCovering> {
    if n == 0 || n > MAX_COVERING_ARITY {
        return Err(Error::ArityOutOfRange(n, 1, MAX_COVERING_ARITY));
    }
    if (n + 1).is_power_of_two() {
        Ok(hamming_code_covering(n))
    } else {
        Ok(greedy_covering(n))
    }
}

/// Syndrome of `x` for the Hamming parity-check matrix whose column `i` is
/// the binary expansion of `i + 1`.
fn syndrome(x: u32) -> u32 {
    let mut s = 0;
    let mut bits = x;
    while bits != 0 {
        let i = bits.trailing_zeros();
        s ^= i + 1;
        bits &= bits - 1;
    }
    s
}

fn hamming_code_covering(n: usize) -> BallCovering {
    let size = 1u32 << n;
    let centers: Vec<u32> = (0..size).filter(|&x| syndrome(x) == 0).collect();
    let mut slot = vec![usize::MAX; size as usize];
    for (i, &c) in centers.iter().enumerate() {
        slot[c as usize] = i;
    }
    let mut cells = vec![Vec::new(); centers.len()];
    for x in 0..size {
        let s = syndrome(x);
        let codeword = if s == 0 { x } else { x ^ (1 << (s - 1)) };
        cells[slot[codeword as usize]].push(x);
    }
    BallCovering {
        dim: n,
        centers,
        cells,
    }
}

fn greedy_covering(n: usize) -> BallCovering {
    let size = 1u32 << n;
    let ball = |c: u32| std::iter::once(c).chain((0..n).map(move |i| c ^ (1 << i)));
    let mut covered = vec![false; size as usize];
    let mut gain: Vec<usize> = vec![n + 1; size as usize];
    let mut remaining = size as usize;
    let mut chosen = Vec::new();
    while remaining > 0 {
        // most newly covered points, lowest index on ties
        let (best, _) = gain
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (c, &g)| if g > acc.1 { (c, g) } else { acc });
        let best = best as u32;
        chosen.push(best);
        for y in ball(best) {
            if !covered[y as usize] {
                covered[y as usize] = true;
                remaining -= 1;
                for z in ball(y) {
                    gain[z as usize] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    let mut is_center = vec![usize::MAX; size as usize];
    for (i, &c) in chosen.iter().enumerate() {
        is_center[c as usize] = i;
    }
    let mut cells = vec![Vec::new(); chosen.len()];
    for x in 0..size {
        let cell = if is_center[x as usize] != usize::MAX {
            is_center[x as usize]
        } else {
            chosen
                .iter()
                .position(|&c| (c ^ x).count_ones() <= 1)
                .expect("greedy covering covers every point")
        };
        cells[cell].push(x);
    }
    BallCovering {
        dim: n,
        centers: chosen,
        cells,
    }
}
