use std::fmt;

use crate::boolean::BooleanFunction;
use crate::error::Error;
use crate::Result;

pub(crate) const MAX_TOTAL_BITS: u32 = 24;

/// A vectorial Boolean function (S-box) from `n` input bits to `m`
/// output bits, with `1 <= m <= n <= 16` and `n + m <= 24`.
///
/// The table is indexed by the input encoding of [`BooleanFunction`]
/// (`x_1` at the most significant bit); output values use the same
/// convention with `y_1` at the most significant of the `m` bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorialFunction {
    n: u32,
    m: u32,
    table: Vec<u16>,
}

impl VectorialFunction {
    pub fn new(n: u32, m: u32, table: Vec<u16>) -> Result<Self> {
        check_dims(n, m)?;
        let len = 1usize << n;
        if table.len() != len {
            return Err(Error::TableLengthMismatch {
                n,
                expected: len,
                got: table.len(),
            });
        }
        for (index, &value) in table.iter().enumerate() {
            if m < 16 && value >> m != 0 {
                return Err(Error::OutputOutOfRange { index, value, m });
            }
        }
        Ok(Self { n, m, table })
    }

    /// Builds a function whose whole table is packed into one integer:
    /// entry `x` occupies the `m` bits starting at bit `(2^n - 1 - x) * m`,
    /// so entry 0 sits in the most significant position. Requires
    /// `m * 2^n <= 64`.
    pub fn from_table_int(n: u32, m: u32, packed: u64) -> Result<Self> {
        check_dims(n, m)?;
        let len = 1u32 << n;
        let bits = m * len;
        if bits > 64 {
            return Err(Error::SpaceTooLarge { bits, cap: 64 });
        }
        if bits < 64 && packed >> bits != 0 {
            return Err(Error::TableLengthMismatch {
                n,
                expected: len as usize,
                got: (64 - packed.leading_zeros()).div_ceil(m) as usize,
            });
        }
        let mask = (1u64 << m) - 1;
        let table = (0..len)
            .map(|x| (packed >> ((len - 1 - x) * m) & mask) as u16)
            .collect();
        Self::new(n, m, table)
    }

    /// Parses a hex truth table with `ceil(m / 4)` digits per entry
    /// (one digit for `m <= 4`), entry 0 first, each entry's nibbles
    /// big-endian.
    pub fn from_hex(n: u32, m: u32, s: &str) -> Result<Self> {
        check_dims(n, m)?;
        let s = s.trim();
        let per = hex_digits_per_entry(m);
        let len = 1usize << n;
        if s.len() != len * per {
            return Err(Error::HexFormat(format!(
                "expected {} digits for n={n}, m={m}, got {}",
                len * per,
                s.len()
            )));
        }
        let mut digits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let d = ch
                .to_digit(16)
                .ok_or_else(|| Error::HexFormat(format!("invalid digit `{ch}`")))?;
            digits.push(d as u16);
        }
        let table = (0..len)
            .map(|x| {
                digits[per * x..per * (x + 1)]
                    .iter()
                    .fold(0u16, |acc, &d| acc << 4 | d)
            })
            .collect();
        Self::new(n, m, table)
    }

    /// Renders the hex truth table in the format of [`Self::from_hex`].
    pub fn to_hex(&self) -> String {
        let per = hex_digits_per_entry(self.m);
        let mut out = String::with_capacity(self.table.len() * per);
        for &v in &self.table {
            for d in (0..per).rev() {
                out.push(hex_digit(v >> (4 * d) & 0xF));
            }
        }
        out
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    /// Value at input index `x`. Panics if `x >= 2^n`.
    pub fn value(&self, x: u32) -> u16 {
        self.table[x as usize]
    }

    /// The graph point `(x, F(x))` encoded as an `n + m` bit index with
    /// the input in the high bits.
    pub fn graph_point(&self, x: u32) -> u32 {
        x << self.m | self.value(x) as u32
    }

    /// The component function `x -> b . F(x)` for a nonzero output mask
    /// `b` (bit `m - j` of `b` selects `y_j`).
    pub fn component(&self, b: u16) -> Result<BooleanFunction> {
        if b == 0 {
            return Err(Error::ZeroMask);
        }
        if self.m < 16 && b >> self.m != 0 {
            return Err(Error::OutputOutOfRange {
                index: 0,
                value: b,
                m: self.m,
            });
        }
        BooleanFunction::from_bits(
            self.n,
            self.table.iter().map(|&v| (v & b).count_ones() & 1 == 1),
        )
    }

    /// True when every output value is hit exactly `2^(n-m)` times.
    pub fn is_balanced(&self) -> bool {
        let mut hits = vec![0u32; 1 << self.m];
        for &v in &self.table {
            hits[v as usize] += 1;
        }
        let want = 1u32 << (self.n - self.m);
        hits.iter().all(|&h| h == want)
    }
}

impl fmt::Debug for VectorialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VectorialFunction(n={}, m={}, {})",
            self.n,
            self.m,
            self.to_hex()
        )
    }
}

fn check_dims(n: u32, m: u32) -> Result<()> {
    if n < 1 || n > 16 {
        return Err(Error::ArityOutOfRange { got: n, max: 16 });
    }
    if m < 1 || m > n || n + m > MAX_TOTAL_BITS {
        return Err(Error::ArityOutOfRange { got: m, max: n.min(MAX_TOTAL_BITS - n) });
    }
    Ok(())
}

fn hex_digits_per_entry(m: u32) -> usize {
    m.div_ceil(4) as usize
}

fn hex_digit(v: u16) -> char {
    char::from_digit(v as u32, 16).unwrap().to_ascii_uppercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_single_digit() {
        let s = "019EDB76F2C5A438";
        let f = VectorialFunction::from_hex(4, 4, s).unwrap();
        assert_eq!(f.value(0), 0x0);
        assert_eq!(f.value(2), 0x9);
        assert_eq!(f.to_hex(), s);
    }

    #[test]
    fn hex_round_trip_double_digit() {
        let table: Vec<u16> = (0..32).map(|x| (x * 7 + 3) % 32).collect();
        let f = VectorialFunction::new(5, 5, table).unwrap();
        let hex = f.to_hex();
        assert_eq!(hex.len(), 64);
        let g = VectorialFunction::from_hex(5, 5, &hex).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn graph_points_stack_input_over_output() {
        let f = VectorialFunction::from_hex(4, 4, "019EDB76F2C5A438").unwrap();
        assert_eq!(f.graph_point(0), 0x00);
        assert_eq!(f.graph_point(2), 0x29);
        assert_eq!(f.graph_point(15), 0xF8);
    }

    #[test]
    fn component_is_mask_parity() {
        let f = VectorialFunction::from_hex(4, 4, "019EDB76F2C5A438").unwrap();
        let g = f.component(0b0101).unwrap();
        for x in 0..16 {
            let v = f.value(x);
            let expected = (v >> 2 & 1) ^ (v & 1);
            assert_eq!(g.value(x) as u16, expected);
        }
        assert!(matches!(f.component(0), Err(Error::ZeroMask)));
    }

    #[test]
    fn table_int_packs_entry_zero_high() {
        let f = VectorialFunction::from_table_int(2, 1, 0b1000).unwrap();
        assert_eq!(f.table(), &[1, 0, 0, 0]);
        let g = VectorialFunction::from_table_int(2, 2, 0b00_01_10_11).unwrap();
        assert_eq!(g.table(), &[0, 1, 2, 3]);
    }

    #[test]
    fn balanced_detects_uniform_hits() {
        let f = VectorialFunction::from_hex(4, 4, "019EDB76F2C5A438").unwrap();
        assert!(f.is_balanced());
        let g = VectorialFunction::new(2, 1, vec![0, 0, 0, 1]).unwrap();
        assert!(!g.is_balanced());
        let h = VectorialFunction::new(2, 1, vec![0, 1, 1, 0]).unwrap();
        assert!(h.is_balanced());
    }

    #[test]
    fn dimension_checks() {
        assert!(VectorialFunction::new(2, 3, vec![0; 4]).is_err());
        assert!(VectorialFunction::new(17, 1, vec![0; 1 << 17]).is_err());
        assert!(VectorialFunction::new(16, 16, vec![0; 1 << 16]).is_err());
        assert!(matches!(
            VectorialFunction::new(2, 1, vec![0, 1, 2, 0]),
            Err(Error::OutputOutOfRange { index: 2, value: 2, m: 1 })
        ));
    }
}
