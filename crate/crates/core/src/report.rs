use num_integer::Integer;
use serde::Serialize;

use crate::analysis::Mode;

/// Full result of classifying every rank-`r` projection of one
/// function: the headline parameters plus a summary of every
/// distribution class, most distinguishable first.
///
/// Serialized field names follow the established notation: `N_f` is
/// the zero count of the worst distribution, `H_f` its entropy in bits
/// (rounded to 5 decimals), `T_q` the number of subspaces attaining
/// it, `U_q` a representative map, and `q` that map's distribution as
/// exact `count/denominator` fractions.
#[derive(Clone, Debug, Serialize)]
pub struct NonlinearityReport {
    pub mode: Mode,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub r: u32,
    /// Number of rank-`r` subspaces scanned.
    pub u: u64,
    /// Number of distribution classes.
    pub c: usize,
    #[serde(rename = "N_f")]
    pub n_f: u64,
    #[serde(rename = "H_f")]
    pub h_f: f64,
    #[serde(rename = "T_q")]
    pub t_q: u64,
    #[serde(rename = "U_q")]
    pub u_q: Vec<String>,
    pub q: Vec<String>,
    pub classes: Vec<ClassSummary>,
}

/// One distribution class: zero count, entropy (bits, 5 decimals),
/// number of subspaces, and the representative's outcome counts.
#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "H")]
    pub h: f64,
    pub size: u64,
    pub counts: Vec<u64>,
}

impl NonlinearityReport {
    /// Denominator of the `q` fractions (weight of the function in
    /// conventional mode, `2^n` in vectorial mode).
    pub fn denominator(&self) -> u64 {
        self.q
            .first()
            .and_then(|s| s.split('/').nth(1))
            .and_then(|d| d.parse().ok())
            .expect("q fractions carry the denominator")
    }
}

pub(crate) fn round5(x: f64) -> f64 {
    (x * 1e5).round() / 1e5
}

/// Renders reports as a pretty-printed JSON array, one element per
/// requested rank.
pub fn reports_to_json(reports: &[NonlinearityReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("report serialization");
    s.push('\n');
    s
}

/// Renders reports as one markdown table, one row per rank, with the
/// `q` fractions reduced for readability.
pub fn reports_to_markdown(reports: &[NonlinearityReport]) -> String {
    let mut out = String::new();
    out.push_str("| r | u | c | U_q | q | N_f | H_f | T_q |\n");
    out.push_str("|--:|--:|--:|-----|---|----:|----:|----:|\n");
    for rep in reports {
        let u_q = rep.u_q.join("; ");
        let q = rep
            .q
            .iter()
            .map(|s| reduce_fraction(s))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {:.5} | {} |\n",
            rep.r, rep.u, rep.c, u_q, q, rep.n_f, rep.h_f, rep.t_q
        ));
    }
    out
}

/// Renders reports as CSV, one row per rank; list-valued columns are
/// joined with `;`.
pub fn reports_to_csv(reports: &[NonlinearityReport]) -> String {
    let mut out = String::from("mode,n,m,r,u,c,N_f,H_f,T_q,U_q,q\n");
    for rep in reports {
        let mode = serde_json::to_value(rep.mode)
            .expect("mode serialization")
            .as_str()
            .unwrap()
            .to_string();
        let m = rep.m.map(|m| m.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.5},{},{},{}\n",
            mode,
            rep.n,
            m,
            rep.r,
            rep.u,
            rep.c,
            rep.n_f,
            rep.h_f,
            rep.t_q,
            rep.u_q.join(";"),
            rep.q.join(";")
        ));
    }
    out
}

fn reduce_fraction(s: &str) -> String {
    let mut parts = s.split('/');
    let (Some(num), Some(den)) = (parts.next(), parts.next()) else {
        return s.to_string();
    };
    let (Ok(num), Ok(den)) = (num.parse::<u64>(), den.parse::<u64>()) else {
        return s.to_string();
    };
    if num == 0 {
        return "0".to_string();
    }
    let g = num.gcd(&den);
    format!("{}/{}", num / g, den / g)
}
