use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::One;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::boolean::BooleanFunction;
use crate::error::Error;
use crate::subspace::LinearMap;
use crate::vectorial::VectorialFunction;
use crate::Result;

/// The exact distribution induced on the `2^r` outcomes of a rank-`r`
/// projection: `counts[z]` inputs out of `denominator` land on outcome
/// `z`. Counts always sum to the denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedDistribution {
    r: u32,
    denom: u64,
    counts: Vec<u64>,
}

impl InducedDistribution {
    pub(crate) fn from_counts(r: u32, denom: u64, counts: Vec<u64>) -> Self {
        debug_assert_eq!(counts.len(), 1usize << r);
        debug_assert_eq!(counts.iter().sum::<u64>(), denom);
        Self { r, denom, counts }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of outcomes, `2^r`.
    pub fn outcome_count(&self) -> usize {
        self.counts.len()
    }

    pub fn denominator(&self) -> u64 {
        self.denom
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of outcomes with probability zero.
    pub fn zero_count(&self) -> u64 {
        self.counts.iter().filter(|&&c| c == 0).count() as u64
    }

    /// Exact probability of outcome `z`, reduced.
    pub fn probability(&self, z: u64) -> Ratio<u64> {
        Ratio::new(self.counts[z as usize], self.denom)
    }

    /// Probabilities as unreduced `count/denominator` strings, outcome
    /// order; the exact serialization form.
    pub fn fraction_strings(&self) -> Vec<String> {
        self.counts
            .iter()
            .map(|c| format!("{c}/{}", self.denom))
            .collect()
    }

    /// Probabilities as reduced fractions for display (`0` for
    /// impossible outcomes).
    pub fn reduced_fraction_strings(&self) -> Vec<String> {
        self.counts
            .iter()
            .map(|&c| {
                if c == 0 {
                    "0".to_string()
                } else {
                    let g = c.gcd(&self.denom);
                    format!("{}/{}", c / g, self.denom / g)
                }
            })
            .collect()
    }
}

impl Serialize for InducedDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.counts.len()))?;
        for s in self.fraction_strings() {
            seq.serialize_element(&s)?;
        }
        seq.end()
    }
}

/// Distribution induced by a conventional Boolean function: outcome `z`
/// counts the inputs in the support of `f` that the map sends to `z`,
/// over the denominator `weight(f)`. Requires a nonempty support.
pub fn induce_conventional(f: &BooleanFunction, map: &LinearMap) -> Result<InducedDistribution> {
    if map.ncols() != f.n() {
        return Err(Error::ColumnMismatch {
            expected: f.n(),
            got: map.ncols(),
        });
    }
    let v = f.weight();
    if v == 0 {
        return Err(Error::EmptySupport);
    }
    let mut counts = vec![0u64; 1 << map.rank()];
    for x in f.support() {
        counts[map.apply(x as u64) as usize] += 1;
    }
    Ok(InducedDistribution::from_counts(map.rank(), v, counts))
}

/// Distribution induced by an S-box through its graph: outcome `z`
/// counts the inputs `x` with `U(x, F(x)) = z`, over the denominator
/// `2^n`. The map must have `n + m` columns.
pub fn induce_vectorial(f: &VectorialFunction, map: &LinearMap) -> Result<InducedDistribution> {
    let ncols = f.n() + f.m();
    if map.ncols() != ncols {
        return Err(Error::ColumnMismatch {
            expected: ncols,
            got: map.ncols(),
        });
    }
    let mut counts = vec![0u64; 1 << map.rank()];
    for x in 0..1u32 << f.n() {
        counts[map.apply(f.graph_point(x) as u64) as usize] += 1;
    }
    Ok(InducedDistribution::from_counts(
        map.rank(),
        1 << f.n(),
        counts,
    ))
}

/// Shannon entropy of the distribution in bits.
pub fn support_entropy(d: &InducedDistribution) -> f64 {
    let denom = d.denominator() as f64;
    let mut acc = 0.0;
    for &c in d.counts() {
        if c > 0 {
            let p = c as f64 / denom;
            acc -= p * p.log2();
        }
    }
    acc
}

/// The exact class invariants of a distribution: the zero count and
/// the integer `prod c^c` over nonzero counts. Two distributions with
/// the same denominator have equal entropy exactly when their keys
/// are equal, and a lexicographically larger key pair means farther
/// from uniform (more zeros, then lower entropy).
pub fn class_key(d: &InducedDistribution) -> (u64, BigUint) {
    (d.zero_count(), entropy_key(d.counts()))
}

/// The integer entropy invariant `prod c^c` over the nonzero entries
/// of a count histogram. For counts summing to `D`, the entropy in
/// bits is `log2(D) - log2(key)/D`, so among histograms with equal
/// sums a larger key means lower entropy, exactly.
pub fn entropy_key(counts: &[u64]) -> BigUint {
    let mut key = BigUint::one();
    for &c in counts {
        if c > 1 {
            key *= BigUint::from(c).pow(c as u32);
        }
    }
    key
}

/// An equivalence class of induced distributions sharing the exact
/// invariants `(zero_count, entropy_key)` at one rank and denominator.
#[derive(Clone, Debug)]
pub struct DistributionClass {
    pub zero_count: u64,
    pub entropy_key: BigUint,
    /// Entropy of the members in bits (derived, for display).
    pub entropy_bits: f64,
    /// Number of subspaces inducing a distribution in this class.
    pub size: u64,
    /// The member induced by the earliest map in canonical order.
    pub representative: InducedDistribution,
    pub representative_map: LinearMap,
}

impl DistributionClass {
    pub fn new(representative: InducedDistribution, representative_map: LinearMap, size: u64) -> Self {
        let (zero_count, entropy_key) = class_key(&representative);
        let entropy_bits = support_entropy(&representative);
        Self {
            zero_count,
            entropy_key,
            entropy_bits,
            size,
            representative,
            representative_map,
        }
    }
}

/// Orders two classes by distance from uniform: `Greater` means more
/// distinguishable (more impossible outcomes, then lower entropy).
/// Classes must come from the same denominator for entropy keys to be
/// comparable.
pub fn compare_distribution_classes(
    a: &DistributionClass,
    b: &DistributionClass,
) -> Result<Ordering> {
    if a.representative.denominator() != b.representative.denominator() {
        return Err(Error::DenominatorMismatch(
            a.representative.denominator(),
            b.representative.denominator(),
        ));
    }
    Ok((a.zero_count, &a.entropy_key).cmp(&(b.zero_count, &b.entropy_key)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::canonicalize;
    use proptest::prelude::*;

    fn example() -> BooleanFunction {
        BooleanFunction::from_hex("693C5A66").unwrap()
    }

    #[test]
    fn conventional_projection_counts_support() {
        // Projecting the example function onto x4 + x5 splits its 16
        // support points 6/10.
        let map = canonicalize(5, &[0b00011]).unwrap();
        let d = induce_conventional(&example(), &map).unwrap();
        assert_eq!(d.denominator(), 16);
        assert_eq!(d.counts(), &[6, 10]);
        assert_eq!(d.probability(0), Ratio::new(3, 8));
        assert_eq!(d.fraction_strings(), vec!["6/16", "10/16"]);
        assert_eq!(d.reduced_fraction_strings(), vec!["3/8", "5/8"]);
    }

    #[test]
    fn conventional_projection_bias_matches_spectrum() {
        // 2(count_0 - count_1) = -numerator(a) for every nonzero mask.
        let f = example();
        let spectrum = crate::walsh_spectrum(&f);
        for a in 1..32u64 {
            let map = canonicalize(5, &[a]).unwrap();
            let d = induce_conventional(&f, &map).unwrap();
            let c0 = d.counts()[0] as i64;
            let c1 = d.counts()[1] as i64;
            assert_eq!(2 * (c0 - c1), -spectrum.numerator(a as u32));
        }
    }

    #[test]
    fn vectorial_projection_counts_graph() {
        let f = crate::gf_inverse_sbox(4, 0b10011).unwrap();
        let map = canonicalize(8, &[0b11101000]).unwrap();
        let d = induce_vectorial(&f, &map).unwrap();
        assert_eq!(d.denominator(), 16);
        assert_eq!(d.counts(), &[12, 4]);
        assert_eq!(d.reduced_fraction_strings(), vec!["3/4", "1/4"]);
    }

    #[test]
    fn vectorial_output_only_mask_counts_preimages() {
        // Projecting onto y1+y2+y3+y4 of a bijection splits by output
        // parity: 8 of 16 values have odd parity.
        let f = crate::gf_inverse_sbox(4, 0b10011).unwrap();
        let map = canonicalize(8, &[0b00001111]).unwrap();
        let d = induce_vectorial(&f, &map).unwrap();
        assert_eq!(d.counts(), &[8, 8]);
    }

    #[test]
    fn empty_support_is_rejected() {
        let f = BooleanFunction::from_bits(3, [false; 8]).unwrap();
        let map = canonicalize(3, &[0b100]).unwrap();
        assert!(matches!(
            induce_conventional(&f, &map),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn column_mismatch_is_rejected() {
        let map = canonicalize(4, &[0b1000]).unwrap();
        assert!(matches!(
            induce_conventional(&example(), &map),
            Err(Error::ColumnMismatch { expected: 5, got: 4 })
        ));
    }

    #[test]
    fn entropy_of_uniform_distribution_is_rank() {
        let d = InducedDistribution::from_counts(2, 16, vec![4, 4, 4, 4]);
        assert!((support_entropy(&d) - 2.0).abs() < 1e-12);
        let concentrated = InducedDistribution::from_counts(2, 16, vec![16, 0, 0, 0]);
        assert_eq!(support_entropy(&concentrated), 0.0);
    }

    #[test]
    fn entropy_key_orders_by_entropy() {
        // Same denominator: larger key must mean lower entropy.
        let spread = InducedDistribution::from_counts(2, 16, vec![5, 5, 5, 1]);
        let peaked = InducedDistribution::from_counts(2, 16, vec![10, 2, 2, 2]);
        assert!(support_entropy(&spread) > support_entropy(&peaked));
        assert!(class_key(&spread).1 < class_key(&peaked).1);
    }

    #[test]
    fn class_comparison_is_lexicographic() {
        let map = canonicalize(2, &[0b10, 0b01]).unwrap();
        let mk = |counts: Vec<u64>| {
            DistributionClass::new(
                InducedDistribution::from_counts(2, 16, counts),
                map.clone(),
                1,
            )
        };
        let uniform = mk(vec![4, 4, 4, 4]);
        let skewed = mk(vec![8, 4, 2, 2]);
        let zeroed = mk(vec![6, 6, 4, 0]);
        assert_eq!(
            compare_distribution_classes(&uniform, &skewed).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            compare_distribution_classes(&zeroed, &skewed).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            compare_distribution_classes(&skewed, &skewed).unwrap(),
            Ordering::Equal
        );
        let other = DistributionClass::new(
            InducedDistribution::from_counts(2, 12, vec![3, 3, 3, 3]),
            map,
            1,
        );
        assert!(matches!(
            compare_distribution_classes(&uniform, &other),
            Err(Error::DenominatorMismatch(16, 12))
        ));
    }

    #[test]
    fn serializes_as_fraction_array() {
        let d = InducedDistribution::from_counts(1, 16, vec![6, 10]);
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"["6/16","10/16"]"#
        );
    }

    proptest! {
        #[test]
        fn key_ignores_outcome_order(mut counts in proptest::collection::vec(0u64..20, 4)) {
            let base = entropy_key(&counts);
            counts.reverse();
            prop_assert_eq!(entropy_key(&counts), base);
        }

        #[test]
        fn key_determines_entropy(a in proptest::collection::vec(0u64..12, 4)) {
            let denom: u64 = a.iter().sum();
            prop_assume!(denom > 0);
            let d = InducedDistribution::from_counts(2, denom, a);
            let key = class_key(&d).1;
            // log2(D) - log2(key)/D recovers the entropy from the key.
            let h = (denom as f64).log2()
                - num_traits::ToPrimitive::to_f64(&key).unwrap().log2() / denom as f64;
            prop_assert!((h - support_entropy(&d)).abs() < 1e-9);
        }
    }
}
