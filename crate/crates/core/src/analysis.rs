use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::thread;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::boolean::BooleanFunction;
use crate::dist::{support_entropy, InducedDistribution};
use crate::error::Error;
use crate::report::{round5, ClassSummary, NonlinearityReport};
use crate::subspace::{
    apply_rows, gaussian_binomial, render_row, split_range, SubspaceRange,
};
use crate::vectorial::VectorialFunction;
use crate::walsh::spectrum_numerators;
use crate::Result;

/// Whether a function is analyzed through its support (conventional)
/// or through its input/output graph (vectorial).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Conventional,
    Vectorial,
}

/// Borrowed handle over either kind of function.
#[derive(Clone, Copy)]
pub enum FunctionRef<'a> {
    Boolean(&'a BooleanFunction),
    Vectorial(&'a VectorialFunction),
}

impl FunctionRef<'_> {
    fn ncols(&self) -> u32 {
        match self {
            FunctionRef::Boolean(f) => f.n(),
            FunctionRef::Vectorial(f) => f.n() + f.m(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct CensusParams {
    mode: Mode,
    n: u32,
    m: Option<u32>,
    ncols: u32,
    r: u32,
    denom: u64,
    total: u128,
}

#[derive(Clone, Debug)]
struct ClassAccum {
    size: u128,
    first_index: u128,
    rep_counts: Vec<u64>,
    rep_rows: Vec<u64>,
}

/// Classification of one contiguous slice of the subspace enumeration,
/// mergeable with the other slices of the same scan.
pub struct PartialCensus {
    params: CensusParams,
    range: SubspaceRange,
    classes: BTreeMap<(u64, BigUint), ClassAccum>,
}

impl PartialCensus {
    pub fn range(&self) -> SubspaceRange {
        self.range
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

struct Prepared<'a> {
    params: CensusParams,
    target: FunctionRef<'a>,
    points: Vec<u32>,
}

fn prepare(target: FunctionRef, r: u32) -> Result<Prepared> {
    let ncols = target.ncols();
    if r < 1 || r > ncols {
        return Err(Error::RankOutOfRange { ncols, r });
    }
    let total = gaussian_binomial(ncols, r)
        .to_u128()
        .ok_or(Error::EnumerationTooLarge)?;
    let (mode, n, m, denom, points) = match target {
        FunctionRef::Boolean(f) => {
            if f.weight() == 0 {
                return Err(Error::EmptySupport);
            }
            let points: Vec<u32> = f.support().collect();
            (Mode::Conventional, f.n(), None, points.len() as u64, points)
        }
        FunctionRef::Vectorial(f) => {
            let points: Vec<u32> = (0..1u32 << f.n()).map(|x| f.graph_point(x)).collect();
            (
                Mode::Vectorial,
                f.n(),
                Some(f.m()),
                points.len() as u64,
                points,
            )
        }
    };
    Ok(Prepared {
        params: CensusParams {
            mode,
            n,
            m,
            ncols,
            r,
            denom,
            total,
        },
        target,
        points,
    })
}

struct CensusBuilder {
    classes: BTreeMap<(u64, BigUint), ClassAccum>,
    pows: HashMap<u64, BigUint>,
    counts: Vec<u64>,
    touched: Vec<u32>,
}

impl CensusBuilder {
    fn new(r: u32) -> Self {
        Self {
            classes: BTreeMap::new(),
            pows: HashMap::new(),
            counts: vec![0; 1 << r],
            touched: Vec::new(),
        }
    }

    fn observe(&mut self, points: &[u32], index: u128, rows: &[u64]) {
        for i in 0..self.touched.len() {
            self.counts[self.touched[i] as usize] = 0;
        }
        self.touched.clear();
        for &p in points {
            let z = apply_rows(rows, p as u64) as usize;
            if self.counts[z] == 0 {
                self.touched.push(z as u32);
            }
            self.counts[z] += 1;
        }
        self.record(index, rows);
    }

    fn observe_pair(&mut self, index: u128, rows: &[u64], c0: u64, c1: u64) {
        self.touched.clear();
        self.counts[0] = c0;
        self.counts[1] = c1;
        if c0 > 0 {
            self.touched.push(0);
        }
        if c1 > 0 {
            self.touched.push(1);
        }
        self.record(index, rows);
    }

    fn record(&mut self, index: u128, rows: &[u64]) {
        let zero = (self.counts.len() - self.touched.len()) as u64;
        for i in 0..self.touched.len() {
            let c = self.counts[self.touched[i] as usize];
            if c > 1 && !self.pows.contains_key(&c) {
                self.pows.insert(c, BigUint::from(c).pow(c as u32));
            }
        }
        let mut key = BigUint::one();
        for &z in &self.touched {
            let c = self.counts[z as usize];
            if c > 1 {
                key *= &self.pows[&c];
            }
        }
        match self.classes.entry((zero, key)) {
            Entry::Occupied(mut e) => e.get_mut().size += 1,
            Entry::Vacant(e) => {
                e.insert(ClassAccum {
                    size: 1,
                    first_index: index,
                    rep_counts: self.counts.clone(),
                    rep_rows: rows.to_vec(),
                });
            }
        }
    }
}

// The rank-1 scan has closed forms: a conventional projection onto the
// form `a` splits the support as c1 = (2v + S_a) / 4 by the spectrum
// numerator S_a, and a graph projection with input part `a` and output
// part `b` splits 2^n as c0 = (2^n + S_b(a)) / 2 by the component
// spectrum (uniformly for b = 0). Both reuse the generic enumeration
// cursor, so class representatives and indices match the generic path
// exactly.
fn scan_rank1(prep: &Prepared, range: SubspaceRange, builder: &mut CensusBuilder) -> Result<()> {
    let ncols = prep.params.ncols;
    match prep.target {
        FunctionRef::Boolean(f) => {
            let numerators = spectrum_numerators(f);
            let v = prep.params.denom as i64;
            crate::subspace::for_each_rref_in_range(ncols, 1, range, |index, rows, _| {
                let w = numerators[rows[0] as usize];
                debug_assert_eq!((2 * v + w).rem_euclid(4), 0);
                let c1 = ((2 * v + w) / 4) as u64;
                builder.observe_pair(index, rows, prep.params.denom - c1, c1);
            })
        }
        FunctionRef::Vectorial(f) => {
            let m = f.m();
            let half = 1u64 << (f.n() - 1);
            let spectra: Vec<Vec<i64>> = (1..1u16 << m)
                .map(|b| spectrum_numerators(&f.component(b).expect("nonzero mask")))
                .collect();
            crate::subspace::for_each_rref_in_range(ncols, 1, range, |index, rows, _| {
                let mask = rows[0];
                let a = (mask >> m) as usize;
                let b = (mask & ((1 << m) - 1)) as usize;
                let (c0, c1) = if b == 0 {
                    (half, half)
                } else {
                    let s = spectra[b - 1][a];
                    let c0 = ((2 * half as i64 + s) / 2) as u64;
                    (c0, 2 * half - c0)
                };
                builder.observe_pair(index, rows, c0, c1);
            })
        }
    }
}

fn scan(prep: &Prepared, range: SubspaceRange, force_generic: bool) -> Result<PartialCensus> {
    let params = prep.params.clone();
    let mut builder = CensusBuilder::new(params.r);
    if params.r == 1 && !force_generic {
        scan_rank1(prep, range, &mut builder)?;
    } else {
        crate::subspace::for_each_rref_in_range(params.ncols, params.r, range, |index, rows, _| {
            builder.observe(&prep.points, index, rows);
        })?;
    }
    Ok(PartialCensus {
        params,
        range,
        classes: builder.classes,
    })
}

/// Classifies the projections of one enumeration slice. Slices from
/// the same function and rank can be merged with [`merge_partials`];
/// together they must cover the enumeration exactly.
pub fn analyze_range(target: FunctionRef, r: u32, range: SubspaceRange) -> Result<PartialCensus> {
    let prep = prepare(target, r)?;
    scan(&prep, range, false)
}

/// Classifies every rank-`r` projection of the function and reports
/// the induced nonlinearity parameters.
pub fn analyze(target: FunctionRef, r: u32) -> Result<NonlinearityReport> {
    let prep = prepare(target, r)?;
    let range = SubspaceRange {
        lo: 0,
        hi: prep.params.total,
    };
    let census = scan(&prep, range, false)?;
    assemble(census.params, census.classes)
}

/// Same as [`analyze`], with the subspace enumeration split across
/// `jobs` worker threads. The output is byte-identical for every job
/// count.
pub fn analyze_jobs(target: FunctionRef, r: u32, jobs: usize) -> Result<NonlinearityReport> {
    if jobs == 0 {
        return Err(Error::ZeroJobs);
    }
    let prep = prepare(target, r)?;
    let ranges = split_range(prep.params.ncols, r, jobs)?;
    let parts: Vec<PartialCensus> = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&range| {
                let prep = &prep;
                scope.spawn(move || scan(prep, range, false))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    merge_partials(parts)
}

/// Combines partial censuses that together cover the whole subspace
/// enumeration of one scan, in any order, and reports the result.
/// Merging is commutative: class sizes add and the representative with
/// the lowest global index wins, so the report never depends on how
/// the enumeration was split.
pub fn merge_partials(parts: Vec<PartialCensus>) -> Result<NonlinearityReport> {
    let Some(first) = parts.first() else {
        return Err(Error::IncompleteCover);
    };
    let params = first.params.clone();
    if parts.iter().any(|p| p.params != params) {
        return Err(Error::ParameterMismatch);
    }
    let mut ranges: Vec<SubspaceRange> = parts.iter().map(|p| p.range).collect();
    ranges.sort_by_key(|r| (r.lo, r.hi));
    let mut cursor = 0u128;
    for range in &ranges {
        if range.lo != cursor || range.hi < range.lo {
            return Err(Error::IncompleteCover);
        }
        cursor = range.hi;
    }
    if cursor != params.total {
        return Err(Error::IncompleteCover);
    }

    let mut merged: BTreeMap<(u64, BigUint), ClassAccum> = BTreeMap::new();
    for part in parts {
        for (key, accum) in part.classes {
            match merged.entry(key) {
                Entry::Occupied(mut e) => {
                    let existing = e.get_mut();
                    existing.size += accum.size;
                    if accum.first_index < existing.first_index {
                        existing.first_index = accum.first_index;
                        existing.rep_counts = accum.rep_counts;
                        existing.rep_rows = accum.rep_rows;
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(accum);
                }
            }
        }
    }
    assemble(params, merged)
}

fn assemble(
    params: CensusParams,
    classes: BTreeMap<(u64, BigUint), ClassAccum>,
) -> Result<NonlinearityReport> {
    let u = params.total.to_u64().ok_or(Error::EnumerationTooLarge)?;
    let mut summaries = Vec::with_capacity(classes.len());
    let mut top: Option<(&ClassAccum, f64)> = None;
    for ((zero, _), accum) in classes.iter().rev() {
        let dist =
            InducedDistribution::from_counts(params.r, params.denom, accum.rep_counts.clone());
        let h = round5(support_entropy(&dist));
        if top.is_none() {
            top = Some((accum, h));
        }
        summaries.push(ClassSummary {
            n: *zero,
            h,
            size: accum.size.to_u64().expect("class size bounded by u"),
            counts: accum.rep_counts.clone(),
        });
    }
    let (top, top_h) = top.expect("census of a validated scan is nonempty");
    let u_q = top
        .rep_rows
        .iter()
        .map(|&row| render_row(params.ncols, row, params.n))
        .collect();
    let q = top
        .rep_counts
        .iter()
        .map(|c| format!("{c}/{}", params.denom))
        .collect();
    Ok(NonlinearityReport {
        mode: params.mode,
        n: params.n,
        m: params.m,
        r: params.r,
        u,
        c: summaries.len(),
        n_f: summaries[0].n,
        h_f: top_h,
        t_q: summaries[0].size,
        u_q,
        q,
        classes: summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::reports_to_json;

    fn example() -> BooleanFunction {
        BooleanFunction::from_hex("693C5A66").unwrap()
    }

    fn sorted(mut v: Vec<u64>) -> Vec<u64> {
        v.sort_unstable();
        v
    }

    #[test]
    fn example_function_rank_profile() {
        let f = example();
        let expected = [
            // (r, u, c, N_f, H_f, T_q, representative counts)
            (1u32, 31u64, 2usize, 0u64, 0.95443, 16u64, vec![10u64, 6]),
            (2, 155, 5, 0, 1.82319, 8, vec![5, 5, 1, 5]),
            (3, 155, 7, 1, 2.65564, 12, vec![3, 1, 1, 3, 2, 4, 0, 2]),
            (
                4,
                31,
                3,
                6,
                3.25,
                1,
                vec![1, 1, 1, 1, 0, 2, 2, 0, 0, 0, 2, 2, 0, 2, 0, 2],
            ),
        ];
        for (r, u, c, n_f, h_f, t_q, counts) in expected {
            let rep = analyze(FunctionRef::Boolean(&f), r).unwrap();
            assert_eq!(rep.mode, Mode::Conventional);
            assert_eq!((rep.r, rep.u, rep.c), (r, u, c));
            assert_eq!(rep.n_f, n_f, "zero count at r={r}");
            assert_eq!(rep.t_q, t_q, "top class size at r={r}");
            assert!((rep.h_f - h_f).abs() < 1e-5, "entropy at r={r}");
            assert_eq!(rep.classes[0].counts, counts, "representative at r={r}");
            assert_eq!(rep.denominator(), 16);
        }
    }

    #[test]
    fn rank_one_representative_map() {
        let f = example();
        let rep = analyze(FunctionRef::Boolean(&f), 1).unwrap();
        assert_eq!(rep.u_q, vec!["x1+x4+x5"]);
        assert_eq!(rep.q, vec!["10/16", "6/16"]);
    }

    #[test]
    fn inversion_sbox_low_ranks() {
        let f = crate::gf_inverse_sbox(4, 0b10011).unwrap();
        let rep = analyze(FunctionRef::Vectorial(&f), 1).unwrap();
        assert_eq!(rep.mode, Mode::Vectorial);
        assert_eq!((rep.u, rep.c, rep.n_f, rep.t_q), (255, 3, 0, 30));
        assert!((rep.h_f - 0.81128).abs() < 1e-5);
        assert_eq!(sorted(rep.classes[0].counts.clone()), vec![4, 12]);

        let rep = analyze(FunctionRef::Vectorial(&f), 2).unwrap();
        assert_eq!((rep.u, rep.c, rep.n_f, rep.t_q), (10795, 12, 1, 135));
        assert!((rep.h_f - 1.5).abs() < 1e-9);
        assert_eq!(sorted(rep.classes[0].counts.clone()), vec![0, 4, 4, 8]);
    }

    #[test]
    fn class_sizes_sum_to_subspace_count() {
        let f = example();
        for r in 1..=5 {
            let rep = analyze(FunctionRef::Boolean(&f), r).unwrap();
            let total: u64 = rep.classes.iter().map(|c| c.size).sum();
            assert_eq!(total, rep.u);
            // Classes are listed most distinguishable first.
            for pair in rep.classes.windows(2) {
                assert!(pair[0].n >= pair[1].n);
                if pair[0].n == pair[1].n {
                    assert!(pair[0].h <= pair[1].h);
                }
            }
        }
    }

    #[test]
    fn rank_one_closed_form_matches_generic_scan() {
        let f = example();
        let prep = prepare(FunctionRef::Boolean(&f), 1).unwrap();
        let range = SubspaceRange { lo: 0, hi: prep.params.total };
        let fast = scan(&prep, range, false).unwrap();
        let slow = scan(&prep, range, true).unwrap();
        assert_eq!(
            reports_to_json(&[assemble(fast.params.clone(), fast.classes).unwrap()]),
            reports_to_json(&[assemble(slow.params.clone(), slow.classes).unwrap()])
        );

        let g = crate::gf_inverse_sbox(4, 0b10011).unwrap();
        let prep = prepare(FunctionRef::Vectorial(&g), 1).unwrap();
        let range = SubspaceRange { lo: 0, hi: prep.params.total };
        let fast = scan(&prep, range, false).unwrap();
        let slow = scan(&prep, range, true).unwrap();
        assert_eq!(
            reports_to_json(&[assemble(fast.params.clone(), fast.classes).unwrap()]),
            reports_to_json(&[assemble(slow.params.clone(), slow.classes).unwrap()])
        );
    }

    #[test]
    fn job_count_never_changes_the_report() {
        let f = example();
        for r in [1, 2, 3] {
            let baseline = reports_to_json(&[analyze(FunctionRef::Boolean(&f), r).unwrap()]);
            for jobs in [1, 2, 3, 5, 8] {
                let parallel =
                    reports_to_json(&[analyze_jobs(FunctionRef::Boolean(&f), r, jobs).unwrap()]);
                assert_eq!(baseline, parallel, "r={r}, jobs={jobs}");
            }
        }
    }

    #[test]
    fn manual_split_merges_to_the_same_report() {
        let f = example();
        let direct = reports_to_json(&[analyze(FunctionRef::Boolean(&f), 2).unwrap()]);
        let ranges = split_range(5, 2, 4).unwrap();
        // Merge out of order to exercise commutativity.
        let mut parts: Vec<PartialCensus> = ranges
            .iter()
            .rev()
            .map(|&range| analyze_range(FunctionRef::Boolean(&f), 2, range).unwrap())
            .collect();
        parts.swap(0, 2);
        let merged = reports_to_json(&[merge_partials(parts).unwrap()]);
        assert_eq!(direct, merged);
    }

    #[test]
    fn merge_rejects_gaps_overlaps_and_mismatches() {
        let f = example();
        let part = |lo, hi| {
            analyze_range(FunctionRef::Boolean(&f), 2, SubspaceRange { lo, hi }).unwrap()
        };
        assert!(matches!(
            merge_partials(vec![part(0, 100)]),
            Err(Error::IncompleteCover)
        ));
        assert!(matches!(
            merge_partials(vec![part(0, 100), part(101, 155)]),
            Err(Error::IncompleteCover)
        ));
        assert!(matches!(
            merge_partials(vec![part(0, 100), part(90, 155)]),
            Err(Error::IncompleteCover)
        ));
        assert!(matches!(merge_partials(vec![]), Err(Error::IncompleteCover)));
        let other = analyze_range(FunctionRef::Boolean(&f), 3, SubspaceRange { lo: 0, hi: 155 })
            .unwrap();
        assert!(matches!(
            merge_partials(vec![part(0, 155), other]),
            Err(Error::ParameterMismatch)
        ));
    }

    #[test]
    fn rank_bounds_follow_the_mode() {
        let f = example();
        assert!(matches!(
            analyze(FunctionRef::Boolean(&f), 6),
            Err(Error::RankOutOfRange { ncols: 5, r: 6 })
        ));
        let g = crate::gf_inverse_sbox(4, 0b10011).unwrap();
        assert!(analyze(FunctionRef::Vectorial(&g), 8).is_ok());
        assert!(matches!(
            analyze(FunctionRef::Vectorial(&g), 9),
            Err(Error::RankOutOfRange { ncols: 8, r: 9 })
        ));
    }

    #[test]
    fn affine_change_preserves_the_profile()  {
        let f = example();
        let rows = vec![0b10010u64, 0b01001, 0b00111, 0b01100, 0b00001];
        let g = f.apply_affine_change(&rows, 0b01011).unwrap();
        assert_ne!(f, g);
        for r in 1..=5 {
            let a = analyze(FunctionRef::Boolean(&f), r).unwrap();
            let b = analyze(FunctionRef::Boolean(&g), r).unwrap();
            assert_eq!((a.u, a.c, a.n_f, a.t_q), (b.u, b.c, b.n_f, b.t_q));
            assert_eq!(a.h_f, b.h_f);
            let sizes_a: Vec<u64> = a.classes.iter().map(|c| c.size).collect();
            let sizes_b: Vec<u64> = b.classes.iter().map(|c| c.size).collect();
            assert_eq!(sizes_a, sizes_b);
        }
    }
}
