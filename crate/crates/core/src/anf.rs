use std::collections::BTreeSet;
use std::fmt;

use crate::boolean::{check_arity, BooleanFunction};
use crate::error::Error;
use crate::Result;

/// An algebraic normal form: a GF(2) sum of monomials over `x_1..x_n`.
///
/// Each monomial is stored as a variable mask aligned with the input
/// encoding (bit `n - j` selects `x_j`), so a monomial holds on exactly
/// the assignments whose index contains its mask. The empty mask is the
/// constant term 1, and the empty sum is the zero function.
#[derive(Clone, PartialEq, Eq)]
pub struct AnfExpression {
    n: u32,
    monomials: BTreeSet<u64>,
}

impl AnfExpression {
    /// Parses a sum of products such as `x1*x2*x3 + x1*x4 + 1`.
    /// Accepted tokens are `x1..xn`, `1`, and `0`; `+` separates terms
    /// and `*` separates factors. Duplicate terms cancel over GF(2).
    pub fn parse(n: u32, s: &str) -> Result<Self> {
        check_arity(n)?;
        if s.trim().is_empty() {
            return Err(Error::EmptyAnf);
        }
        let mut monomials = BTreeSet::new();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::EmptyAnf);
            }
            let mut mask = 0u64;
            let mut zero = false;
            for factor in term.split('*') {
                let factor = factor.trim();
                match factor {
                    "1" => {}
                    "0" => zero = true,
                    _ => {
                        let rest = factor
                            .strip_prefix('x')
                            .ok_or_else(|| Error::AnfToken(factor.into()))?;
                        let index: u32 = rest
                            .parse()
                            .map_err(|_| Error::AnfToken(factor.into()))?;
                        if index < 1 || index > n {
                            return Err(Error::VariableOutOfRange { index, n });
                        }
                        mask |= 1u64 << (n - index);
                    }
                }
            }
            if zero {
                continue;
            }
            if !monomials.insert(mask) {
                monomials.remove(&mask);
            }
        }
        Ok(Self { n, monomials })
    }

    /// Recovers the algebraic normal form of a truth table by the
    /// binary Moebius transform.
    pub fn from_function(f: &BooleanFunction) -> Self {
        let n = f.n();
        let len = f.len();
        let mut coeff: Vec<u8> = (0..len as u32).map(|x| f.value(x) as u8).collect();
        for b in 0..n {
            let bit = 1usize << b;
            for x in 0..len {
                if x & bit != 0 {
                    coeff[x] ^= coeff[x ^ bit];
                }
            }
        }
        let monomials = coeff
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == 1)
            .map(|(m, _)| m as u64)
            .collect();
        Self { n, monomials }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of monomials (the constant term counts as one).
    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }

    /// Algebraic degree; 0 for constants (including the zero function).
    pub fn degree(&self) -> u32 {
        self.monomials
            .iter()
            .map(|m| m.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Monomials as sorted lists of 1-based variable indices; the
    /// constant term is the empty list.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        self.sorted_masks()
            .into_iter()
            .map(|m| self.indices(m))
            .collect()
    }

    pub fn evaluate(&self, x: u32) -> bool {
        let x = x as u64;
        let mut acc = false;
        for &m in &self.monomials {
            acc ^= x & m == m;
        }
        acc
    }

    /// Expands the expression into its truth table.
    pub fn to_function(&self) -> BooleanFunction {
        BooleanFunction::from_bits(self.n, (0..1u32 << self.n).map(|x| self.evaluate(x)))
            .expect("arity validated at construction")
    }

    fn indices(&self, mask: u64) -> Vec<u32> {
        (1..=self.n).filter(|&j| mask >> (self.n - j) & 1 == 1).collect()
    }

    // Display order: degree descending, then variable indices
    // lexicographic (equivalently mask descending), constant last.
    fn sorted_masks(&self) -> Vec<u64> {
        let mut masks: Vec<u64> = self.monomials.iter().copied().collect();
        masks.sort_by(|a, b| {
            b.count_ones()
                .cmp(&a.count_ones())
                .then(b.cmp(a))
        });
        masks
    }
}

impl fmt::Display for AnfExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .sorted_masks()
            .into_iter()
            .map(|m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    self.indices(m)
                        .into_iter()
                        .map(|j| format!("x{j}"))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for AnfExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnfExpression(n={}, {})", self.n, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EXAMPLE: &str =
        "x1*x2*x3 + x1*x2*x4 + x1*x2*x5 + x1*x4 + x2*x5 + x3 + x4 + x5";

    #[test]
    fn parse_and_display_round_trip() {
        let e = AnfExpression::parse(5, EXAMPLE).unwrap();
        assert_eq!(e.to_string(), EXAMPLE);
        assert_eq!(e.monomial_count(), 8);
        assert_eq!(e.degree(), 3);
    }

    #[test]
    fn example_truth_table() {
        let e = AnfExpression::parse(5, EXAMPLE).unwrap();
        let f = e.to_function();
        assert_eq!(f.weight(), 16);
        assert_eq!(f.to_hex().unwrap(), "693C5A66");
    }

    #[test]
    fn moebius_round_trip() {
        let e = AnfExpression::parse(5, EXAMPLE).unwrap();
        let back = AnfExpression::from_function(&e.to_function());
        assert_eq!(e, back);
    }

    #[test]
    fn duplicate_terms_cancel() {
        let e = AnfExpression::parse(3, "x1 + x1").unwrap();
        assert_eq!(e.monomial_count(), 0);
        assert_eq!(e.to_string(), "0");
        assert_eq!(e.to_function().weight(), 0);
        let e = AnfExpression::parse(3, "x1*x2 + x2*x1 + 1").unwrap();
        assert_eq!(e.to_string(), "1");
    }

    #[test]
    fn constant_and_zero_tokens() {
        let one = AnfExpression::parse(2, "1").unwrap();
        assert_eq!(one.to_function().weight(), 4);
        let zero = AnfExpression::parse(2, "0").unwrap();
        assert_eq!(zero.to_function().weight(), 0);
        assert_eq!(AnfExpression::parse(2, "x1*x1").unwrap().to_string(), "x1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(AnfExpression::parse(3, ""), Err(Error::EmptyAnf)));
        assert!(matches!(
            AnfExpression::parse(3, "x1 + y2"),
            Err(Error::AnfToken(_))
        ));
        assert!(matches!(
            AnfExpression::parse(3, "x4"),
            Err(Error::VariableOutOfRange { index: 4, n: 3 })
        ));
        assert!(matches!(
            AnfExpression::parse(3, "x0"),
            Err(Error::VariableOutOfRange { index: 0, n: 3 })
        ));
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in 1u32..=6, masks in proptest::collection::btree_set(0u64..64, 0..12)) {
            let monomials: BTreeSet<u64> = masks.into_iter().map(|m| m & ((1 << n) - 1)).collect();
            let e = AnfExpression { n, monomials };
            let rendered = e.to_string();
            let parsed = if e.monomial_count() == 0 {
                AnfExpression::parse(n, "0").unwrap()
            } else {
                AnfExpression::parse(n, &rendered).unwrap()
            };
            prop_assert_eq!(e, parsed);
        }

        #[test]
        fn moebius_inverts_expansion(n in 1u32..=5, seed in any::<u64>()) {
            let len = 1usize << n;
            let mut state = seed;
            let f = BooleanFunction::from_bits(n, (0..len).map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                state >> 63 == 1
            })).unwrap();
            let e = AnfExpression::from_function(&f);
            prop_assert_eq!(e.to_function(), f);
        }
    }
}
