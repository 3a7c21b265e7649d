use std::fs;

use rnl::{AnfExpression, BooleanFunction, VectorialFunction};

use crate::{SboxKind, SourceArgs};

/// The flag that supplied the function, for error attribution.
pub fn source_flag(source: &SourceArgs) -> &'static str {
    if source.anf.is_some() {
        "--anf"
    } else if source.tt.is_some() {
        "--tt"
    } else if source.tt_file.is_some() {
        "--tt-file"
    } else {
        "--sbox"
    }
}

fn read_hex(source: &SourceArgs) -> Result<(String, &'static str), String> {
    if let Some(tt) = &source.tt {
        return Ok((strip_whitespace(tt), "--tt"));
    }
    let path = source.tt_file.as_ref().expect("caller checked the source");
    let text =
        fs::read_to_string(path).map_err(|e| format!("--tt-file: {}: {e}", path.display()))?;
    Ok((strip_whitespace(&text), "--tt-file"))
}

fn strip_whitespace(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

pub fn build_boolean(source: &SourceArgs, n: Option<u32>) -> Result<BooleanFunction, String> {
    if let Some(anf) = &source.anf {
        let n = n.ok_or("--anf: requires --n")?;
        return Ok(AnfExpression::parse(n, anf)
            .map_err(|e| format!("--anf: {e}"))?
            .to_function());
    }
    if source.sbox.is_some() {
        return Err("--sbox: only valid with --mode vectorial".into());
    }
    let (hex, flag) = read_hex(source)?;
    let f = BooleanFunction::from_hex(&hex).map_err(|e| format!("{flag}: {e}"))?;
    if let Some(n) = n {
        if f.n() != n {
            return Err(format!(
                "{flag}: table has {} hex digits, so n = {}, but --n says {n}",
                hex.len(),
                f.n()
            ));
        }
    }
    Ok(f)
}

pub fn build_vectorial(
    source: &SourceArgs,
    n: Option<u32>,
    m: Option<u32>,
    k: Option<u32>,
    modulus: &Option<String>,
) -> Result<VectorialFunction, String> {
    if source.anf.is_some() {
        return Err("--anf: only valid with --mode boolean".into());
    }
    if let Some(SboxKind::Inverse) = source.sbox {
        let k = k.ok_or("--sbox: inverse requires --k")?;
        let modulus = modulus.as_ref().ok_or("--sbox: inverse requires --modulus")?;
        return rnl::gf_inverse_sbox(k, parse_modulus(modulus)?)
            .map_err(|e| format!("--modulus: {e}"));
    }
    if k.is_some() || modulus.is_some() {
        return Err("--k/--modulus: only valid with --sbox".into());
    }
    let n = n.ok_or("--n: required for a vectorial truth table")?;
    let m = m.ok_or("--m: required for a vectorial truth table")?;
    let (hex, flag) = read_hex(source)?;
    VectorialFunction::from_hex(n, m, &hex).map_err(|e| format!("{flag}: {e}"))
}

/// Parses a field modulus like `0x13` or `13` (hex either way).
pub fn parse_modulus(s: &str) -> Result<u64, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|_| format!("--modulus: `{s}` is not a hex polynomial"))
}
