use std::fmt;

use crate::error::Error;
use crate::Result;

/// Largest supported number of inputs for a conventional Boolean function.
pub const MAX_ARITY: u32 = 24;

/// A Boolean function on `n` inputs, stored as a packed truth table.
///
/// Input assignments `(x_1, ..., x_n)` are indexed by the integer with
/// `x_1` as the most significant bit, so index 0 is the all-zero
/// assignment and index `2^n - 1` the all-one assignment. The same
/// convention applies to linear-form masks: the mask bit `n - j`
/// selects variable `x_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: u32,
    words: Vec<u64>,
}

impl BooleanFunction {
    /// Builds a function from its truth-table bits, index 0 first.
    pub fn from_bits(n: u32, bits: impl IntoIterator<Item = bool>) -> Result<Self> {
        check_arity(n)?;
        let len = 1usize << n;
        let mut words = vec![0u64; len.div_ceil(64)];
        let mut count = 0usize;
        for (i, bit) in bits.into_iter().enumerate() {
            if i >= len {
                count = i + 1;
                break;
            }
            if bit {
                words[i >> 6] |= 1u64 << (i & 63);
            }
            count = i + 1;
        }
        if count != len {
            return Err(Error::TableLengthMismatch {
                n,
                expected: len,
                got: count,
            });
        }
        Ok(Self { n, words })
    }

    /// Builds a function on `n <= 6` inputs from an integer truth table
    /// where bit `2^n - 1 - i` holds the value at index `i` (the same
    /// most-significant-first packing as the hex form).
    pub fn from_table_int(n: u32, table: u64) -> Result<Self> {
        check_arity(n)?;
        let len = 1u32 << n;
        if n > 6 {
            return Err(Error::ArityOutOfRange { got: n, max: 6 });
        }
        if n < 6 && table >> len != 0 {
            return Err(Error::TableLengthMismatch {
                n,
                expected: len as usize,
                got: (64 - table.leading_zeros()) as usize,
            });
        }
        Self::from_bits(n, (0..len).map(|i| table >> (len - 1 - i) & 1 == 1))
    }

    /// Parses a packed hex truth table of `2^n / 4` digits: index 0 sits
    /// at the most significant bit of the first digit. The arity is
    /// inferred from the digit count, so the string length must be a
    /// power of two.
    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::HexFormat("empty string".into()));
        }
        if !s.len().is_power_of_two() {
            return Err(Error::HexFormat(format!(
                "length {} is not a power of two",
                s.len()
            )));
        }
        let len = s.len() * 4;
        let n = len.trailing_zeros();
        if n > MAX_ARITY {
            return Err(Error::ArityOutOfRange { got: n, max: MAX_ARITY });
        }
        let mut digits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let d = ch
                .to_digit(16)
                .ok_or_else(|| Error::HexFormat(format!("invalid digit `{ch}`")))?;
            digits.push(d as u64);
        }
        Self::from_bits(
            n,
            (0..len).map(|i| digits[i / 4] >> (3 - i % 4) & 1 == 1),
        )
    }

    /// Renders the packed hex truth table. Requires `n >= 2` so that the
    /// table fills whole hex digits.
    pub fn to_hex(&self) -> Result<String> {
        if self.n < 2 {
            return Err(Error::HexFormat(
                "arity 1 table does not fill a hex digit".into(),
            ));
        }
        let mut out = String::with_capacity(self.len() / 4);
        for d in 0..self.len() / 4 {
            let i = (d * 4) as u32;
            let v = (self.value(i) as u32) << 3
                | (self.value(i + 1) as u32) << 2
                | (self.value(i + 2) as u32) << 1
                | self.value(i + 3) as u32;
            out.push(char::from_digit(v, 16).unwrap().to_ascii_uppercase());
        }
        Ok(out)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Truth-table length, `2^n`.
    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value at input index `x`. Panics if `x >= 2^n`.
    pub fn value(&self, x: u32) -> bool {
        assert!((x as usize) < self.len(), "input index out of range");
        self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    /// Hamming weight: the number of inputs mapped to 1.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Iterates the support, the input indices mapped to 1, in order.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len() as u32).filter(move |&x| self.value(x))
    }

    /// Substitutes an invertible affine change of input variables:
    /// returns `g` with `g(x) = f(Ax + b)`, where row `j` of `A` is the
    /// mask `rows[j]` (row 0 produces the new `x_1`).
    pub fn apply_affine_change(&self, rows: &[u64], b: u64) -> Result<Self> {
        let n = self.n;
        if rows.len() != n as usize {
            return Err(Error::ColumnMismatch {
                expected: n,
                got: rows.len() as u32,
            });
        }
        let full = (1u64 << n) - 1;
        if b & !full != 0 {
            return Err(Error::ColumnMismatch {
                expected: n,
                got: 64 - b.leading_zeros(),
            });
        }
        for &row in rows {
            if row & !full != 0 {
                return Err(Error::ColumnMismatch {
                    expected: n,
                    got: 64 - row.leading_zeros(),
                });
            }
        }
        if crate::subspace::gf2_rank(rows) != n {
            return Err(Error::SingularMatrix);
        }
        Self::from_bits(
            n,
            (0..self.len() as u32).map(|x| {
                let mut y = 0u64;
                for (j, &row) in rows.iter().enumerate() {
                    let bit = (row & x as u64).count_ones() as u64 & 1;
                    y |= bit << (n as usize - 1 - j);
                }
                self.value((y ^ b) as u32)
            }),
        )
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(hex) = self.to_hex() {
            write!(f, "BooleanFunction(n={}, {hex})", self.n)
        } else {
            write!(
                f,
                "BooleanFunction(n={}, bits={}{})",
                self.n,
                self.value(0) as u8,
                self.value(1) as u8
            )
        }
    }
}

pub(crate) fn check_arity(n: u32) -> Result<()> {
    if n < 1 || n > MAX_ARITY {
        return Err(Error::ArityOutOfRange { got: n, max: MAX_ARITY });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let f = BooleanFunction::from_hex("693C5A66").unwrap();
        assert_eq!(f.n(), 5);
        assert_eq!(f.weight(), 16);
        assert_eq!(f.to_hex().unwrap(), "693C5A66");
        let g = BooleanFunction::from_hex("693c5a66").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn hex_packing_is_msb_first() {
        // Digit 8 = binary 1000: only index 0 maps to 1.
        let f = BooleanFunction::from_hex("8").unwrap();
        assert_eq!(f.n(), 2);
        assert!(f.value(0));
        assert!(!f.value(1));
        assert!(!f.value(2));
        assert!(!f.value(3));
    }

    #[test]
    fn table_int_matches_hex() {
        let f = BooleanFunction::from_table_int(2, 0b1000).unwrap();
        assert_eq!(f.to_hex().unwrap(), "8");
        let g = BooleanFunction::from_table_int(4, 0x693C).unwrap();
        assert_eq!(g.to_hex().unwrap(), "693C");
    }

    #[test]
    fn support_matches_values() {
        let f = BooleanFunction::from_hex("693C5A66").unwrap();
        let support: Vec<u32> = f.support().collect();
        assert_eq!(support.len() as u64, f.weight());
        for x in 0..f.len() as u32 {
            assert_eq!(support.contains(&x), f.value(x));
        }
    }

    #[test]
    fn bad_hex_rejected() {
        assert!(matches!(
            BooleanFunction::from_hex("ABC"),
            Err(Error::HexFormat(_))
        ));
        assert!(matches!(
            BooleanFunction::from_hex("G8"),
            Err(Error::HexFormat(_))
        ));
        assert!(matches!(
            BooleanFunction::from_hex(""),
            Err(Error::HexFormat(_))
        ));
    }

    #[test]
    fn affine_change_by_identity_is_identity() {
        let f = BooleanFunction::from_hex("693C5A66").unwrap();
        let rows: Vec<u64> = (0..5).map(|j| 1u64 << (4 - j)).collect();
        let g = f.apply_affine_change(&rows, 0).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn affine_change_shift_is_involution() {
        let f = BooleanFunction::from_hex("693C5A66").unwrap();
        let rows: Vec<u64> = (0..5).map(|j| 1u64 << (4 - j)).collect();
        let g = f.apply_affine_change(&rows, 0b10110).unwrap();
        assert_ne!(f, g);
        assert_eq!(g.weight(), f.weight());
        let h = g.apply_affine_change(&rows, 0b10110).unwrap();
        assert_eq!(f, h);
    }

    #[test]
    fn affine_change_rejects_singular_matrix() {
        let f = BooleanFunction::from_hex("693C5A66").unwrap();
        let rows = vec![0b11000u64, 0b11000, 0b00100, 0b00010, 0b00001];
        assert!(matches!(
            f.apply_affine_change(&rows, 0),
            Err(Error::SingularMatrix)
        ));
    }
}
