use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Largest supported column count for subspace enumeration; covers both
/// conventional inputs (`n <= 24`) and stacked graphs (`n + m <= 24`).
pub const MAX_ENUM_COLS: u32 = 24;

/// A surjective linear map from `ncols` bits onto `rank` bits, stored
/// as one bitmask per output row in reduced row echelon form.
///
/// Column `j` (0-based) corresponds to mask bit `ncols - 1 - j`, so
/// masks read left to right like the variable order `x_1, x_2, ...`.
/// Applying the map produces an output index with row 0 at the most
/// significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    ncols: u32,
    rows: Vec<u64>,
    pivot_cols: Vec<u32>,
}

impl LinearMap {
    pub fn ncols(&self) -> u32 {
        self.ncols
    }

    pub fn rank(&self) -> u32 {
        self.rows.len() as u32
    }

    /// Row masks, one per output bit, in echelon order.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// 0-based pivot column of each row, strictly increasing.
    pub fn pivot_cols(&self) -> &[u32] {
        &self.pivot_cols
    }

    /// Projects an `ncols`-bit index to a `rank`-bit outcome.
    pub fn apply(&self, w: u64) -> u64 {
        apply_rows(&self.rows, w)
    }

    /// Renders each row as a sum of variable names: columns below
    /// `n_inputs` become `x1, x2, ...` and the rest `y1, y2, ...`.
    pub fn render_rows(&self, n_inputs: u32) -> Vec<String> {
        self.rows
            .iter()
            .map(|&row| render_row(self.ncols, row, n_inputs))
            .collect()
    }
}

pub(crate) fn apply_rows(rows: &[u64], w: u64) -> u64 {
    let r = rows.len();
    let mut z = 0u64;
    for (i, &row) in rows.iter().enumerate() {
        z |= (((row & w).count_ones() & 1) as u64) << (r - 1 - i);
    }
    z
}

pub(crate) fn render_row(ncols: u32, row: u64, n_inputs: u32) -> String {
    let mut parts = Vec::new();
    for j in 0..ncols {
        if row >> (ncols - 1 - j) & 1 == 1 {
            if j < n_inputs {
                parts.push(format!("x{}", j + 1));
            } else {
                parts.push(format!("y{}", j - n_inputs + 1));
            }
        }
    }
    parts.join("+")
}

/// Rank of a GF(2) matrix given as row masks.
pub(crate) fn gf2_rank(rows: &[u64]) -> u32 {
    let mut basis = rows.to_vec();
    let mut rank = 0;
    for col in (0..64).rev() {
        let Some(pos) = (rank..basis.len()).find(|&i| basis[i] >> col & 1 == 1) else {
            continue;
        };
        basis.swap(rank, pos);
        let pivot = basis[rank];
        for (i, row) in basis.iter_mut().enumerate() {
            if i != rank && *row >> col & 1 == 1 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rank as u32
}

/// Reduces arbitrary row masks to the canonical reduced row echelon
/// form of their row space, dropping dependent rows. The result may
/// have rank 0 (no rows) if every input mask is zero.
pub fn canonicalize(ncols: u32, rows: &[u64]) -> Result<LinearMap> {
    if ncols < 1 || ncols > 63 {
        return Err(Error::ArityOutOfRange { got: ncols, max: 63 });
    }
    let full = (1u64 << ncols) - 1;
    for &row in rows {
        if row & !full != 0 {
            return Err(Error::ColumnMismatch {
                expected: ncols,
                got: 64 - row.leading_zeros(),
            });
        }
    }
    let mut work = rows.to_vec();
    let mut out_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut used = 0usize;
    for col in 0..ncols {
        let bit = 1u64 << (ncols - 1 - col);
        let Some(pos) = (used..work.len()).find(|&i| work[i] & bit != 0) else {
            continue;
        };
        work.swap(used, pos);
        let pivot = work[used];
        for (i, row) in work.iter_mut().enumerate() {
            if i != used && *row & bit != 0 {
                *row ^= pivot;
            }
        }
        pivot_cols.push(col);
        used += 1;
    }
    out_rows.extend_from_slice(&work[..used]);
    Ok(LinearMap {
        ncols,
        rows: out_rows,
        pivot_cols,
    })
}

/// Number of `r`-dimensional subspaces of GF(2)^ncols (equivalently,
/// of rank-`r` reduced row echelon forms): the Gaussian binomial
/// coefficient for q = 2. Zero when `r > ncols`.
pub fn gaussian_binomial(ncols: u32, r: u32) -> BigUint {
    if r > ncols {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        num *= (BigUint::one() << (ncols - i)) - BigUint::one();
        den *= (BigUint::one() << (i + 1)) - BigUint::one();
    }
    num / den
}

fn gaussian_binomial_u128(ncols: u32, r: u32) -> Option<u128> {
    gaussian_binomial(ncols, r).to_u128()
}

/// A half-open slice `lo..hi` of the canonical subspace enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubspaceRange {
    pub lo: u128,
    pub hi: u128,
}

impl SubspaceRange {
    pub fn len(&self) -> u128 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }
}

/// Splits the enumeration of rank-`r` maps on `ncols` columns into
/// `parts` contiguous ranges whose sizes differ by at most one.
/// Exactly `parts` ranges are returned; trailing ranges may be empty
/// when there are fewer subspaces than parts.
pub fn split_range(ncols: u32, r: u32, parts: usize) -> Result<Vec<SubspaceRange>> {
    check_enum_params(ncols, r)?;
    if parts == 0 {
        return Err(Error::ZeroJobs);
    }
    let total = gaussian_binomial_u128(ncols, r).ok_or(Error::EnumerationTooLarge)?;
    let chunk = total / parts as u128;
    let rem = total % parts as u128;
    let mut ranges = Vec::with_capacity(parts);
    let mut lo = 0u128;
    for i in 0..parts as u128 {
        let hi = lo + chunk + if i < rem { 1 } else { 0 };
        ranges.push(SubspaceRange { lo, hi });
        lo = hi;
    }
    Ok(ranges)
}

fn check_enum_params(ncols: u32, r: u32) -> Result<()> {
    if ncols < 1 || ncols > MAX_ENUM_COLS {
        return Err(Error::ArityOutOfRange { got: ncols, max: MAX_ENUM_COLS });
    }
    if r < 1 || r > ncols {
        return Err(Error::RankOutOfRange { ncols, r });
    }
    Ok(())
}

// Streaming cursor over all rank-r reduced row echelon forms.
//
// Canonical order: pivot-column sets ascend lexicographically, and
// within one pivot set the free entries count up as a binary number
// whose most significant bit is the first free position in row-major
// order. Position (row, col) is free when col is to the right of that
// row's pivot and is not itself a pivot column.
struct RrefCursor {
    ncols: u32,
    r: u32,
    pivots: Vec<u32>,
    slots: Vec<(usize, u32)>,
    rows: Vec<u64>,
    exhausted: bool,
}

impl RrefCursor {
    fn first(ncols: u32, r: u32) -> Self {
        let pivots: Vec<u32> = (0..r).collect();
        let mut cursor = Self {
            ncols,
            r,
            pivots,
            slots: Vec::new(),
            rows: Vec::new(),
            exhausted: false,
        };
        cursor.reset_rows();
        cursor
    }

    fn bit(&self, col: u32) -> u64 {
        1u64 << (self.ncols - 1 - col)
    }

    fn reset_rows(&mut self) {
        self.rows = self.pivots.iter().map(|&p| self.bit(p)).collect();
        self.slots.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for col in p + 1..self.ncols {
                if !self.pivots.contains(&col) {
                    self.slots.push((i, col));
                }
            }
        }
    }

    // Number of matrices sharing the current pivot set.
    fn block_len(&self) -> Result<u128> {
        1u128
            .checked_shl(self.slots.len() as u32)
            .ok_or(Error::EnumerationTooLarge)
    }

    // Positions the free entries at offset `index` within the current
    // pivot-set block.
    fn seek_in_block(&mut self, index: u128) {
        let width = self.slots.len();
        for (t, &(row, col)) in self.slots.iter().enumerate() {
            let bit = self.bit(col);
            if index >> (width - 1 - t) & 1 == 1 {
                self.rows[row] |= bit;
            } else {
                self.rows[row] &= !bit;
            }
        }
    }

    fn advance(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        // Binary increment over the free entries, last slot least
        // significant.
        for t in (0..self.slots.len()).rev() {
            let (row, col) = self.slots[t];
            let bit = self.bit(col);
            if self.rows[row] & bit == 0 {
                self.rows[row] |= bit;
                return true;
            }
            self.rows[row] &= !bit;
        }
        // Free entries wrapped around: lexicographic successor of the
        // pivot combination.
        let (ncols, r) = (self.ncols, self.r);
        let mut i = r as i64 - 1;
        while i >= 0 && self.pivots[i as usize] == ncols - r + i as u32 {
            i -= 1;
        }
        if i < 0 {
            self.exhausted = true;
            return false;
        }
        let i = i as usize;
        self.pivots[i] += 1;
        for j in i + 1..r as usize {
            self.pivots[j] = self.pivots[i] + (j - i) as u32;
        }
        self.reset_rows();
        true
    }

    // Skips directly to global index `index`; the cursor must be fresh.
    fn seek(&mut self, mut index: u128) -> Result<()> {
        loop {
            let block = self.block_len()?;
            if index < block {
                self.seek_in_block(index);
                return Ok(());
            }
            index -= block;
            // Move to the next pivot combination with free entries at
            // zero, reusing the wrap-around path of advance.
            self.seek_in_block(block - 1);
            if !self.advance() {
                return Err(Error::EnumerationTooLarge);
            }
        }
    }

    fn snapshot(&self) -> LinearMap {
        LinearMap {
            ncols: self.ncols,
            rows: self.rows.clone(),
            pivot_cols: self.pivots.clone(),
        }
    }
}

/// Iterator over every rank-`r` reduced row echelon form on `ncols`
/// columns in canonical order.
pub struct RrefIter {
    cursor: RrefCursor,
    done: bool,
}

impl Iterator for RrefIter {
    type Item = LinearMap;

    fn next(&mut self) -> Option<LinearMap> {
        if self.done {
            return None;
        }
        let item = self.cursor.snapshot();
        self.done = !self.cursor.advance();
        Some(item)
    }
}

/// Streams all rank-`r` subspaces of GF(2)^ncols as canonical matrices.
pub fn enumerate_rref(ncols: u32, r: u32) -> Result<RrefIter> {
    check_enum_params(ncols, r)?;
    Ok(RrefIter {
        cursor: RrefCursor::first(ncols, r),
        done: false,
    })
}

/// Visits the enumeration slice `range`, passing the global index, the
/// row masks, and the pivot columns of each matrix. The callback
/// borrows the cursor's buffers, so no per-item allocation occurs.
pub fn for_each_rref_in_range(
    ncols: u32,
    r: u32,
    range: SubspaceRange,
    mut visit: impl FnMut(u128, &[u64], &[u32]),
) -> Result<()> {
    check_enum_params(ncols, r)?;
    let total = gaussian_binomial_u128(ncols, r).ok_or(Error::EnumerationTooLarge)?;
    if range.lo > range.hi || range.hi > total {
        return Err(Error::RangeOutOfBounds {
            lo: range.lo,
            hi: range.hi,
            total,
        });
    }
    if range.is_empty() {
        return Ok(());
    }
    let mut cursor = RrefCursor::first(ncols, r);
    cursor.seek(range.lo)?;
    for index in range.lo..range.hi {
        visit(index, &cursor.rows, &cursor.pivots);
        if !cursor.advance() && index + 1 < range.hi {
            unreachable!("cursor exhausted before validated range end");
        }
    }
    Ok(())
}
