use num_rational::Ratio;

use crate::boolean::BooleanFunction;
use crate::error::Error;
use crate::vectorial::VectorialFunction;
use crate::Result;

/// The Walsh spectrum of an `n`-input Boolean function.
///
/// The coefficient at mask `a` is the exact rational
/// `W_a = (1/2^n) * sum_x (-1)^(f(x) + a.x)`; only the integer
/// numerators over the implicit denominator `2^n` are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    numerators: Vec<i64>,
}

impl WalshSpectrum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Common denominator `2^n` of all coefficients.
    pub fn denominator(&self) -> i64 {
        1i64 << self.n
    }

    /// Integer numerator of the coefficient at mask `a`.
    pub fn numerator(&self, a: u32) -> i64 {
        self.numerators[a as usize]
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    /// Exact coefficient at mask `a`, reduced.
    pub fn value(&self, a: u32) -> Ratio<i64> {
        Ratio::new(self.numerator(a), self.denominator())
    }

    /// Largest absolute numerator over all masks, including `a = 0`.
    pub fn max_abs_numerator(&self) -> i64 {
        self.numerators.iter().map(|w| w.abs()).max().unwrap()
    }
}

/// Computes the full Walsh spectrum by the fast transform in
/// `O(n * 2^n)` operations.
pub fn walsh_spectrum(f: &BooleanFunction) -> WalshSpectrum {
    WalshSpectrum {
        n: f.n(),
        numerators: spectrum_numerators(f),
    }
}

pub(crate) fn spectrum_numerators(f: &BooleanFunction) -> Vec<i64> {
    let len = f.len();
    let mut buf: Vec<i64> = (0..len as u32)
        .map(|x| if f.value(x) { -1 } else { 1 })
        .collect();
    let mut h = 1;
    while h < len {
        for chunk in buf.chunks_mut(2 * h) {
            for i in 0..h {
                let (a, b) = (chunk[i], chunk[i + h]);
                chunk[i] = a + b;
                chunk[i + h] = a - b;
            }
        }
        h *= 2;
    }
    buf
}

/// Minimum Hamming distance from `f` to the affine functions (linear
/// forms and their complements): `2^(n-1) - max_a |W_a| * 2^(n-1)`.
pub fn classical_nonlinearity(f: &BooleanFunction) -> u64 {
    let spectrum = walsh_spectrum(f);
    let half = 1u64 << (f.n() - 1);
    half - spectrum.max_abs_numerator() as u64 / 2
}

/// Probability that the linear form `a.x` agrees with `f`, as an exact
/// fraction of the `2^n` inputs. The mask must be nonzero.
pub fn correlation_probability(f: &BooleanFunction, a: u64) -> Result<Ratio<u64>> {
    if a == 0 {
        return Err(Error::ZeroMask);
    }
    if a >> f.n() != 0 {
        return Err(Error::ColumnMismatch {
            expected: f.n(),
            got: 64 - a.leading_zeros(),
        });
    }
    let len = 1u64 << f.n();
    let agreements = (0..len as u32)
        .filter(|&x| ((a & x as u64).count_ones() & 1 == 1) == f.value(x))
        .count() as u64;
    Ok(Ratio::new(agreements, len))
}

/// True when `f` is bent: `n` even and every coefficient numerator has
/// absolute value `2^(n/2)`.
pub fn is_bent(f: &BooleanFunction) -> bool {
    if f.n() % 2 != 0 {
        return false;
    }
    let flat = 1i64 << (f.n() / 2);
    spectrum_numerators(f).iter().all(|w| w.abs() == flat)
}

/// True when every nonzero component `b.F` is bent.
pub fn is_perfect_nonlinear(f: &VectorialFunction) -> bool {
    if f.n() % 2 != 0 {
        return false;
    }
    (1..1u16 << f.m()).all(|b| is_bent(&f.component(b).expect("nonzero mask in range")))
}
