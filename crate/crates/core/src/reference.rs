//! Built-in reference functions used by the documentation, the test
//! suite, and the CLI's reference tables.

use crate::anf::AnfExpression;
use crate::boolean::BooleanFunction;
use crate::gf::gf_inverse_sbox;
use crate::vectorial::VectorialFunction;

const FIVE_VARIABLE_ANF: &str =
    "x1*x2*x3 + x1*x2*x4 + x1*x2*x5 + x1*x4 + x2*x5 + x3 + x4 + x5";

/// A five-variable Boolean function with classical nonlinearity 12,
/// used throughout as a worked example. Truth table hex `693C5A66`.
pub fn five_variable_example() -> BooleanFunction {
    AnfExpression::parse(5, FIVE_VARIABLE_ANF)
        .expect("literal parses")
        .to_function()
}

/// The inversion S-box over GF(2^4) with modulus x^4 + x + 1,
/// mapping x to x^14 (0 to 0). Table hex `019EDB76F2C5A438`.
pub fn inversion_sbox_16() -> VectorialFunction {
    gf_inverse_sbox(4, 0b10011).expect("modulus is irreducible")
}
