use crate::error::Error;
use crate::vectorial::VectorialFunction;
use crate::Result;

/// Tests irreducibility of a degree-`k` polynomial over GF(2) by trial
/// division against every polynomial of degree 1 through `k/2`.
/// The polynomial is given as a bitmask with bit `i` holding the
/// coefficient of `x^i`; bit `k` must be set.
pub fn is_irreducible(modulus: u64, k: u32) -> bool {
    if k == 0 || degree(modulus) != Some(k) {
        return false;
    }
    for d in 1..=k / 2 {
        for low in 0..1u64 << d {
            let divisor = 1u64 << d | low;
            if poly_rem(modulus, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Builds the multiplicative-inverse S-box of GF(2^k) for an
/// irreducible modulus, mapping 0 to 0. Field elements are identified
/// with `k`-bit strings through their coefficient vectors, so the
/// result is a vectorial function with `n = m = k`. Supports
/// `1 <= k <= 8`.
pub fn gf_inverse_sbox(k: u32, modulus: u64) -> Result<VectorialFunction> {
    if k < 1 || k > 8 {
        return Err(Error::ArityOutOfRange { got: k, max: 8 });
    }
    if degree(modulus) != Some(k) {
        return Err(Error::DegreeMismatch { modulus: modulus as u32, k });
    }
    if !is_irreducible(modulus, k) {
        return Err(Error::ReducibleModulus { modulus: modulus as u32 });
    }
    let order = 1u32 << k;
    let table = (0..order)
        .map(|x| {
            if x == 0 {
                0
            } else {
                // Fermat: x^(2^k - 2) is the inverse in GF(2^k)*.
                gf_pow(x as u64, (order - 2) as u64, modulus, k) as u16
            }
        })
        .collect();
    VectorialFunction::new(k, k, table)
}

fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b).expect("nonzero divisor");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

pub(crate) fn gf_mul(mut a: u64, mut b: u64, modulus: u64, k: u32) -> u64 {
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> k != 0 {
            a ^= modulus;
        }
    }
    acc
}

fn gf_pow(mut base: u64, mut exp: u64, modulus: u64, k: u32) -> u64 {
    let mut acc = 1u64;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = gf_mul(acc, base, modulus, k);
        }
        base = gf_mul(base, base, modulus, k);
        exp >>= 1;
    }
    acc
}
