use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::io;
use std::thread;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::Error;
use crate::report::round5;
use crate::subspace::{apply_rows, for_each_rref_in_range, gaussian_binomial, SubspaceRange};
use crate::vectorial::VectorialFunction;
use crate::walsh::is_perfect_nonlinear;
use crate::Result;

/// Exhaustive scans are limited to functions whose whole truth table
/// fits in this many bits (`m * 2^n`), keeping full sweeps tractable.
pub const FULL_SCAN_BIT_CAP: u32 = 20;

const EXAMPLE_CAP: usize = 8;

/// Which functions a search visits.
#[derive(Clone, Copy)]
pub enum SearchScope<'a> {
    /// Every function from `n` to `m` bits, by ascending packed table.
    All,
    /// Every function in the full space that satisfies the predicate.
    Predicate(&'a (dyn Fn(&VectorialFunction) -> bool + Sync)),
    /// Exactly the listed candidates, in list order, any `n` and `m`.
    Candidates(&'a [VectorialFunction]),
}

/// An equivalence class of functions sharing the worst-case projection
/// invariants `(zero_count, entropy_key)` at one `(n, m, r)`.
#[derive(Clone, Debug)]
pub struct FunctionClass {
    pub n: u32,
    pub m: u32,
    pub r: u32,
    /// Impossible outcomes of the members' worst distribution.
    pub zero_count: u64,
    /// Exact `prod c^c` invariant of the worst distribution.
    pub entropy_key: BigUint,
    /// Entropy of the worst distribution in bits (derived).
    pub entropy_bits: f64,
    pub member_count: u64,
    /// Hex truth tables of the first few members in scan order.
    pub examples: Vec<String>,
}

/// Result of scanning a function space: every class in ascending
/// order, so `classes[0]` is the optimal (most nonlinear) class.
#[derive(Clone, Debug)]
pub struct OptimalSearchResult {
    pub n: u32,
    pub m: u32,
    pub r: u32,
    /// Number of functions analyzed (class sizes sum to this).
    pub scanned: u64,
    pub classes: Vec<FunctionClass>,
}

impl OptimalSearchResult {
    pub fn optimal(&self) -> &FunctionClass {
        &self.classes[0]
    }
}

/// Orders function classes from most to least nonlinear: `Less` means
/// the worst-case projection is closer to uniform (fewer impossible
/// outcomes, then higher entropy). The classes must come from the
/// same parameters.
pub fn compare_function_classes(a: &FunctionClass, b: &FunctionClass) -> Result<Ordering> {
    if (a.n, a.m, a.r) != (b.n, b.m, b.r) {
        return Err(Error::ParameterMismatch);
    }
    Ok((a.zero_count, &a.entropy_key).cmp(&(b.zero_count, &b.entropy_key)))
}

// Shared per-shard accumulator: class sizes plus the earliest members.
struct FnAccum {
    count: u64,
    first_ordinal: u64,
    examples: Vec<(u64, String)>,
}

struct ShardCensus {
    scanned: u64,
    classes: BTreeMap<(u64, BigUint), FnAccum>,
}

// Exact keys for one function's worst distribution. The narrow variant
// packs `prod c^c` into u128, valid whenever `2^n * n <= 126` bits,
// which covers every full sweep under the bit cap; candidate lists
// with larger domains take the arbitrary-precision path.
trait KeyOps {
    type Key: Ord;
    fn compute(&mut self, counts: &[u64], touched: &[u32]) -> Self::Key;
    fn widen(key: &Self::Key) -> BigUint;
}

struct NarrowKeys {
    pows: Vec<u128>,
}

impl NarrowKeys {
    fn new(denom: u64) -> Self {
        let pows = (0..=denom)
            .map(|c| {
                let mut acc = 1u128;
                for _ in 0..c {
                    acc *= c as u128;
                }
                acc
            })
            .collect();
        Self { pows }
    }
}

impl KeyOps for NarrowKeys {
    type Key = u128;

    fn compute(&mut self, counts: &[u64], touched: &[u32]) -> u128 {
        let mut key = 1u128;
        for &z in touched {
            key *= self.pows[counts[z as usize] as usize];
        }
        key
    }

    fn widen(key: &u128) -> BigUint {
        BigUint::from(*key)
    }
}

struct WideKeys {
    pows: HashMap<u64, BigUint>,
}

impl KeyOps for WideKeys {
    type Key = BigUint;

    fn compute(&mut self, counts: &[u64], touched: &[u32]) -> BigUint {
        for &z in touched {
            let c = counts[z as usize];
            if c > 1 && !self.pows.contains_key(&c) {
                self.pows.insert(c, BigUint::from(c).pow(c as u32));
            }
        }
        let mut key = BigUint::one();
        for &z in touched {
            let c = counts[z as usize];
            if c > 1 {
                key *= &self.pows[&c];
            }
        }
        key
    }

    fn widen(key: &BigUint) -> BigUint {
        key.clone()
    }
}

// The rank-r maps are re-enumerated per function when the subspace
// count is too large to keep resident.
enum MapSource {
    Resident { rows_flat: Vec<u64>, r: usize },
    Streamed { ncols: u32, r: u32, total: u128 },
}

impl MapSource {
    fn build(ncols: u32, r: u32) -> Result<Self> {
        let total = gaussian_binomial(ncols, r)
            .to_u128()
            .ok_or(Error::EnumerationTooLarge)?;
        let full = SubspaceRange { lo: 0, hi: total };
        if total <= 1 << 16 {
            let mut rows_flat = Vec::with_capacity((total as usize) * r as usize);
            for_each_rref_in_range(ncols, r, full, |_, rows, _| {
                rows_flat.extend_from_slice(rows);
            })?;
            Ok(MapSource::Resident {
                rows_flat,
                r: r as usize,
            })
        } else {
            // Validates the parameters up front.
            for_each_rref_in_range(ncols, r, SubspaceRange { lo: 0, hi: 0 }, |_, _, _| {})?;
            Ok(MapSource::Streamed { ncols, r, total })
        }
    }

    fn for_each(&self, mut visit: impl FnMut(&[u64])) -> Result<()> {
        match self {
            MapSource::Resident { rows_flat, r } => {
                for rows in rows_flat.chunks_exact(*r) {
                    visit(rows);
                }
                Ok(())
            }
            MapSource::Streamed { ncols, r, total } => for_each_rref_in_range(
                *ncols,
                *r,
                SubspaceRange { lo: 0, hi: *total },
                |_, rows, _| visit(rows),
            ),
        }
    }
}

struct SearchSpec<'a> {
    n: u32,
    m: u32,
    r: u32,
    scope: SearchScope<'a>,
    space: u64,
}

fn prepare_search<'a>(n: u32, m: u32, r: u32, scope: SearchScope<'a>) -> Result<SearchSpec<'a>> {
    // Validates the dimension constraints.
    VectorialFunction::new(n, m, vec![0; 1 << n])?;
    let space = match scope {
        SearchScope::All | SearchScope::Predicate(_) => {
            let bits = m << n;
            if bits > FULL_SCAN_BIT_CAP {
                return Err(Error::SpaceTooLarge {
                    bits,
                    cap: FULL_SCAN_BIT_CAP,
                });
            }
            1u64 << bits
        }
        SearchScope::Candidates(list) => list.len() as u64,
    };
    Ok(SearchSpec { n, m, r, scope, space })
}

fn scan_shard<K: KeyOps>(
    spec: &SearchSpec,
    maps: &MapSource,
    keys: &mut K,
    lo: u64,
    hi: u64,
) -> Result<ShardCensus> {
    let n = spec.n;
    let m = spec.m;
    let len = 1u32 << n;
    let outcomes = 1usize << spec.r;
    let mut points = vec![0u32; len as usize];
    let mut counts = vec![0u64; outcomes];
    let mut touched: Vec<u32> = Vec::new();
    let mut census = ShardCensus {
        scanned: 0,
        classes: BTreeMap::new(),
    };

    for ordinal in lo..hi {
        let function: Option<VectorialFunction> = match spec.scope {
            SearchScope::All => {
                let mask = (1u64 << m) - 1;
                for x in 0..len {
                    let value = (ordinal >> ((len - 1 - x) * m)) & mask;
                    points[x as usize] = x << m | value as u32;
                }
                None
            }
            SearchScope::Predicate(pred) => {
                let f = VectorialFunction::from_table_int(n, m, ordinal)
                    .expect("packed table within validated space");
                if !pred(&f) {
                    continue;
                }
                for x in 0..len {
                    points[x as usize] = f.graph_point(x);
                }
                Some(f)
            }
            SearchScope::Candidates(list) => {
                let f = &list[ordinal as usize];
                if f.n() != n || f.m() != m {
                    return Err(Error::ParameterMismatch);
                }
                for x in 0..len {
                    points[x as usize] = f.graph_point(x);
                }
                None
            }
        };

        let mut best: Option<(u64, K::Key)> = None;
        maps.for_each(|rows| {
            for i in 0..touched.len() {
                counts[touched[i] as usize] = 0;
            }
            touched.clear();
            for &p in &points {
                let z = apply_rows(rows, p as u64) as usize;
                if counts[z] == 0 {
                    touched.push(z as u32);
                }
                counts[z] += 1;
            }
            let zero = (outcomes - touched.len()) as u64;
            let key = keys.compute(&counts, &touched);
            let candidate = (zero, key);
            if best.as_ref().is_none_or(|b| *b < candidate) {
                best = Some(candidate);
            }
        })?;
        let (zero, key) = best.expect("at least one subspace");

        census.scanned += 1;
        match census.classes.entry((zero, K::widen(&key))) {
            Entry::Occupied(mut e) => {
                let accum = e.get_mut();
                accum.count += 1;
                if accum.examples.len() < EXAMPLE_CAP {
                    accum
                        .examples
                        .push((ordinal, member_hex(spec, ordinal, function.as_ref())));
                }
            }
            Entry::Vacant(e) => {
                e.insert(FnAccum {
                    count: 1,
                    first_ordinal: ordinal,
                    examples: vec![(ordinal, member_hex(spec, ordinal, function.as_ref()))],
                });
            }
        }
    }
    Ok(census)
}

fn member_hex(spec: &SearchSpec, ordinal: u64, built: Option<&VectorialFunction>) -> String {
    if let Some(f) = built {
        return f.to_hex();
    }
    match spec.scope {
        SearchScope::Candidates(list) => list[ordinal as usize].to_hex(),
        _ => VectorialFunction::from_table_int(spec.n, spec.m, ordinal)
            .expect("packed table within validated space")
            .to_hex(),
    }
}

fn shard_bounds(space: u64, jobs: usize) -> Vec<(u64, u64)> {
    let jobs = jobs as u64;
    let chunk = space / jobs;
    let rem = space % jobs;
    let mut bounds = Vec::with_capacity(jobs as usize);
    let mut lo = 0u64;
    for i in 0..jobs {
        let hi = lo + chunk + if i < rem { 1 } else { 0 };
        bounds.push((lo, hi));
        lo = hi;
    }
    bounds
}

fn run_scan(spec: &SearchSpec, jobs: usize) -> Result<ShardCensus> {
    if jobs == 0 {
        return Err(Error::ZeroJobs);
    }
    let maps = MapSource::build(spec.n + spec.m, spec.r)?;
    let bounds = shard_bounds(spec.space, jobs);
    let mut shards: Vec<ShardCensus> = thread::scope(|scope| {
        let handles: Vec<_> = bounds
            .iter()
            .map(|&(lo, hi)| {
                let spec = &spec;
                let maps = &maps;
                scope.spawn(move || {
                    if spec.n <= 4 {
                        scan_shard(spec, maps, &mut NarrowKeys::new(1 << spec.n), lo, hi)
                    } else {
                        scan_shard(
                            spec,
                            maps,
                            &mut WideKeys { pows: HashMap::new() },
                            lo,
                            hi,
                        )
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut merged = shards.remove(0);
    for shard in shards {
        merged.scanned += shard.scanned;
        for (key, accum) in shard.classes {
            match merged.classes.entry(key) {
                Entry::Occupied(mut e) => {
                    let existing = e.get_mut();
                    existing.count += accum.count;
                    existing.first_ordinal = existing.first_ordinal.min(accum.first_ordinal);
                    existing.examples.extend(accum.examples);
                    existing.examples.sort_by_key(|&(ordinal, _)| ordinal);
                    existing.examples.truncate(EXAMPLE_CAP);
                }
                Entry::Vacant(e) => {
                    e.insert(accum);
                }
            }
        }
    }
    if merged.scanned == 0 {
        return Err(Error::EmptyScope);
    }
    Ok(merged)
}

/// Scans a function space and groups every function by its worst-case
/// projection invariants at rank `r`, most nonlinear class first.
/// Full sweeps (`All` and `Predicate` scopes) require
/// `m * 2^n <= FULL_SCAN_BIT_CAP`; candidate lists have no cap. The
/// scan is sharded over `jobs` threads with deterministic output.
pub fn optimal_search(
    n: u32,
    m: u32,
    r: u32,
    scope: SearchScope,
    jobs: usize,
) -> Result<OptimalSearchResult> {
    let spec = prepare_search(n, m, r, scope)?;
    let census = run_scan(&spec, jobs)?;
    let denom = 1u64 << n;
    let classes = census
        .classes
        .into_iter()
        .map(|((zero_count, entropy_key), accum)| {
            let entropy_bits = (denom as f64).log2() - big_log2(&entropy_key) / denom as f64;
            FunctionClass {
                n,
                m,
                r,
                zero_count,
                entropy_bits,
                entropy_key,
                member_count: accum.count,
                examples: accum.examples.into_iter().map(|(_, hex)| hex).collect(),
            }
        })
        .collect();
    Ok(OptimalSearchResult {
        n,
        m,
        r,
        scanned: census.scanned,
        classes,
    })
}

fn big_log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("small value").log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit value");
    top.log2() + shift as f64
}

/// Comparison of the optimal class against the perfect nonlinear
/// functions over the same scope.
#[derive(Clone, Debug, Serialize)]
pub struct OptimalPnReport {
    pub n: u32,
    pub m: u32,
    pub r: u32,
    /// True when the optimal class is exactly the perfect nonlinear set.
    pub coincide: bool,
    pub optimal_count: u64,
    pub perfect_count: u64,
    pub optimal_not_perfect_count: u64,
    pub perfect_not_optimal_count: u64,
    /// Hex tables of the first few members on each side of the
    /// difference, scan order.
    pub optimal_not_perfect: Vec<String>,
    pub perfect_not_optimal: Vec<String>,
}

struct PnTally {
    optimal: u64,
    perfect: u64,
    opt_not_pn: u64,
    pn_not_opt: u64,
    opt_not_pn_examples: Vec<(u64, String)>,
    pn_not_opt_examples: Vec<(u64, String)>,
}

/// Runs [`optimal_search`], then rescans the same scope testing each
/// function for perfect nonlinearity (every nonzero component bent)
/// and reports whether the optimal class and the perfect nonlinear
/// set coincide, with counterexamples when they do not.
pub fn verify_optimal_vs_perfect(
    n: u32,
    m: u32,
    r: u32,
    scope: SearchScope,
    jobs: usize,
) -> Result<OptimalPnReport> {
    let search = optimal_search(n, m, r, scope, jobs)?;
    let optimal = search.optimal();
    let target = (optimal.zero_count, optimal.entropy_key.clone());

    let spec = prepare_search(n, m, r, scope)?;
    let maps = MapSource::build(n + m, r)?;
    let bounds = shard_bounds(spec.space, jobs.max(1));
    let tallies: Vec<PnTally> = thread::scope(|scope_| {
        let handles: Vec<_> = bounds
            .iter()
            .map(|&(lo, hi)| {
                let spec = &spec;
                let maps = &maps;
                let target = &target;
                scope_.spawn(move || pn_shard(spec, maps, target, lo, hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verify worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut total = PnTally {
        optimal: 0,
        perfect: 0,
        opt_not_pn: 0,
        pn_not_opt: 0,
        opt_not_pn_examples: Vec::new(),
        pn_not_opt_examples: Vec::new(),
    };
    for tally in tallies {
        total.optimal += tally.optimal;
        total.perfect += tally.perfect;
        total.opt_not_pn += tally.opt_not_pn;
        total.pn_not_opt += tally.pn_not_opt;
        total.opt_not_pn_examples.extend(tally.opt_not_pn_examples);
        total.pn_not_opt_examples.extend(tally.pn_not_opt_examples);
    }
    total.opt_not_pn_examples.sort_by_key(|&(ordinal, _)| ordinal);
    total.opt_not_pn_examples.truncate(EXAMPLE_CAP);
    total.pn_not_opt_examples.sort_by_key(|&(ordinal, _)| ordinal);
    total.pn_not_opt_examples.truncate(EXAMPLE_CAP);

    Ok(OptimalPnReport {
        n,
        m,
        r,
        coincide: total.opt_not_pn == 0 && total.pn_not_opt == 0,
        optimal_count: total.optimal,
        perfect_count: total.perfect,
        optimal_not_perfect_count: total.opt_not_pn,
        perfect_not_optimal_count: total.pn_not_opt,
        optimal_not_perfect: total
            .opt_not_pn_examples
            .into_iter()
            .map(|(_, hex)| hex)
            .collect(),
        perfect_not_optimal: total
            .pn_not_opt_examples
            .into_iter()
            .map(|(_, hex)| hex)
            .collect(),
    })
}

fn pn_shard(
    spec: &SearchSpec,
    maps: &MapSource,
    target: &(u64, BigUint),
    lo: u64,
    hi: u64,
) -> Result<PnTally> {
    let n = spec.n;
    let m = spec.m;
    let len = 1u32 << n;
    let outcomes = 1usize << spec.r;
    let mut counts = vec![0u64; outcomes];
    let mut touched: Vec<u32> = Vec::new();
    let mut points = vec![0u32; len as usize];
    let mut keys = WideKeys { pows: HashMap::new() };
    let mut tally = PnTally {
        optimal: 0,
        perfect: 0,
        opt_not_pn: 0,
        pn_not_opt: 0,
        opt_not_pn_examples: Vec::new(),
        pn_not_opt_examples: Vec::new(),
    };

    for ordinal in lo..hi {
        let function = match spec.scope {
            SearchScope::Candidates(list) => list[ordinal as usize].clone(),
            _ => VectorialFunction::from_table_int(n, m, ordinal)
                .expect("packed table within validated space"),
        };
        if let SearchScope::Predicate(pred) = spec.scope {
            if !pred(&function) {
                continue;
            }
        }
        for x in 0..len {
            points[x as usize] = function.graph_point(x);
        }
        let mut best: Option<(u64, BigUint)> = None;
        maps.for_each(|rows| {
            for i in 0..touched.len() {
                counts[touched[i] as usize] = 0;
            }
            touched.clear();
            for &p in &points {
                let z = apply_rows(rows, p as u64) as usize;
                if counts[z] == 0 {
                    touched.push(z as u32);
                }
                counts[z] += 1;
            }
            let zero = (outcomes - touched.len()) as u64;
            let key = keys.compute(&counts, &touched);
            let candidate = (zero, key);
            if best.as_ref().is_none_or(|b| *b < candidate) {
                best = Some(candidate);
            }
        })?;
        let is_optimal = best.as_ref() == Some(target);
        let is_pn = is_perfect_nonlinear(&function);
        if is_optimal {
            tally.optimal += 1;
        }
        if is_pn {
            tally.perfect += 1;
        }
        if is_optimal && !is_pn {
            tally.opt_not_pn += 1;
            if tally.opt_not_pn_examples.len() < EXAMPLE_CAP {
                tally.opt_not_pn_examples.push((ordinal, function.to_hex()));
            }
        }
        if is_pn && !is_optimal {
            tally.pn_not_opt += 1;
            if tally.pn_not_opt_examples.len() < EXAMPLE_CAP {
                tally.pn_not_opt_examples.push((ordinal, function.to_hex()));
            }
        }
    }
    Ok(tally)
}

#[derive(Serialize)]
struct CensusLine<'a> {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "H")]
    h: f64,
    size: u64,
    first_member_hex: &'a str,
}

fn census_line(class: &FunctionClass) -> CensusLine<'_> {
    CensusLine {
        n: class.zero_count,
        h: round5(class.entropy_bits),
        size: class.member_count,
        first_member_hex: &class.examples[0],
    }
}

/// Writes one JSON line per class, optimal first: the zero count `N`,
/// entropy `H` in bits, class size, and the earliest member.
pub fn write_census_jsonl<W: io::Write>(
    result: &OptimalSearchResult,
    writer: &mut W,
) -> io::Result<()> {
    for class in &result.classes {
        serde_json::to_writer(&mut *writer, &census_line(class))?;
        writeln!(writer)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SearchSummary<'a> {
    n: u32,
    m: u32,
    r: u32,
    scanned: u64,
    class_count: usize,
    optimal: CensusLine<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perfect_nonlinear: Option<&'a OptimalPnReport>,
}

/// Renders a search result (and optionally its perfect-nonlinearity
/// comparison) as pretty-printed JSON.
pub fn search_summary_json(
    result: &OptimalSearchResult,
    pn: Option<&OptimalPnReport>,
) -> String {
    let summary = SearchSummary {
        n: result.n,
        m: result.m,
        r: result.r,
        scanned: result.scanned,
        class_count: result.classes.len(),
        optimal: census_line(result.optimal()),
        perfect_nonlinear: pn,
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_variable_sweep_finds_odd_weight_optimum() {
        let result = optimal_search(2, 1, 1, SearchScope::All, 1).unwrap();
        assert_eq!(result.scanned, 16);
        let optimal = result.optimal();
        assert_eq!(optimal.zero_count, 0);
        assert_eq!(optimal.member_count, 8);
        assert_eq!(
            optimal.examples,
            vec!["0001", "0010", "0100", "0111", "1000", "1011", "1101", "1110"]
        );
        let total: u64 = result.classes.iter().map(|c| c.member_count).sum();
        assert_eq!(total, 16);
        for pair in result.classes.windows(2) {
            assert_eq!(
                compare_function_classes(&pair[0], &pair[1]).unwrap(),
                Ordering::Less
            );
        }
    }

    #[test]
    fn full_rank_collapses_to_one_class() {
        // The only full-rank map is the identity, and every graph hits
        // exactly 2^n of the 2^(n+m) outcomes once, so all functions
        // share one class with uniform support.
        let result = optimal_search(2, 2, 4, SearchScope::All, 2).unwrap();
        assert_eq!(result.scanned, 256);
        assert_eq!(result.classes.len(), 1);
        let class = result.optimal();
        assert_eq!(class.zero_count, 12);
        assert_eq!(class.member_count, 256);
        assert!((class.entropy_bits - 2.0).abs() < 1e-12);
    }

    #[test]
    fn balanced_predicate_restricts_the_scan() {
        let balanced: &(dyn Fn(&VectorialFunction) -> bool + Sync) =
            &|f: &VectorialFunction| f.is_balanced();
        let result = optimal_search(2, 1, 1, SearchScope::Predicate(balanced), 1).unwrap();
        assert_eq!(result.scanned, 6);
        let total: u64 = result.classes.iter().map(|c| c.member_count).sum();
        assert_eq!(total, 6);
        let members: Vec<String> = result
            .classes
            .iter()
            .flat_map(|c| c.examples.iter().cloned())
            .collect();
        for hex in members {
            let f = VectorialFunction::from_hex(2, 1, &hex).unwrap();
            assert!(f.is_balanced());
        }
    }

    #[test]
    fn candidate_list_ranks_entries() {
        let inverse = crate::gf_inverse_sbox(4, 0b10011).unwrap();
        let identity =
            VectorialFunction::new(4, 4, (0..16).collect()).unwrap();
        let list = [identity, inverse];
        let result = optimal_search(4, 4, 1, SearchScope::Candidates(&list), 1).unwrap();
        assert_eq!(result.scanned, 2);
        assert_eq!(result.classes.len(), 2);
        // The identity has linear components, so some projection is
        // constant; the inverse S-box never loses an outcome at rank 1.
        assert_eq!(result.optimal().examples, vec!["019EDB76F2C5A438"]);
        assert_eq!(result.optimal().zero_count, 0);
        assert_eq!(result.classes[1].zero_count, 1);
    }

    #[test]
    fn shard_count_never_changes_the_result() {
        let baseline = optimal_search(3, 1, 2, SearchScope::All, 1).unwrap();
        let base_json = search_summary_json(&baseline, None);
        for jobs in [2, 3, 5, 8] {
            let result = optimal_search(3, 1, 2, SearchScope::All, jobs).unwrap();
            assert_eq!(search_summary_json(&result, None), base_json);
            assert_eq!(result.classes.len(), baseline.classes.len());
            for (a, b) in result.classes.iter().zip(&baseline.classes) {
                assert_eq!(a.entropy_key, b.entropy_key);
                assert_eq!(a.member_count, b.member_count);
                assert_eq!(a.examples, b.examples);
            }
        }
    }

    #[test]
    fn two_variable_optimal_class_is_perfect_nonlinear() {
        let report = verify_optimal_vs_perfect(2, 1, 1, SearchScope::All, 2).unwrap();
        assert!(report.coincide);
        assert_eq!(report.optimal_count, 8);
        assert_eq!(report.perfect_count, 8);
        assert!(report.optimal_not_perfect.is_empty());
        assert!(report.perfect_not_optimal.is_empty());
    }

    #[test]
    fn odd_arity_optimum_is_not_perfect_nonlinear() {
        // No function on an odd number of inputs is perfect nonlinear.
        let report = verify_optimal_vs_perfect(3, 1, 1, SearchScope::All, 2).unwrap();
        assert!(!report.coincide);
        assert_eq!(report.perfect_count, 0);
        assert!(report.optimal_count > 0);
        assert_eq!(report.optimal_not_perfect_count, report.optimal_count);
    }

    #[test]
    fn scan_cap_and_empty_scope_are_rejected() {
        assert!(matches!(
            optimal_search(5, 1, 1, SearchScope::All, 1),
            Err(Error::SpaceTooLarge { bits: 32, cap: FULL_SCAN_BIT_CAP })
        ));
        let none: &(dyn Fn(&VectorialFunction) -> bool + Sync) = &|_: &VectorialFunction| false;
        assert!(matches!(
            optimal_search(2, 1, 1, SearchScope::Predicate(none), 1),
            Err(Error::EmptyScope)
        ));
        assert!(matches!(
            optimal_search(2, 1, 1, SearchScope::Candidates(&[]), 1),
            Err(Error::EmptyScope)
        ));
    }

    #[test]
    fn census_lines_are_valid_json_in_order() {
        let result = optimal_search(2, 1, 1, SearchScope::All, 1).unwrap();
        let mut buf = Vec::new();
        write_census_jsonl(&result, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<serde_json::Value> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), result.classes.len());
        assert_eq!(lines[0]["size"], 8);
        assert_eq!(lines[0]["first_member_hex"], "0001");
        let sizes: Vec<u64> = lines.iter().map(|l| l["size"].as_u64().unwrap()).collect();
        assert_eq!(sizes.iter().sum::<u64>(), 16);
    }

    #[test]
    fn summary_reports_the_optimal_line() {
        let result = optimal_search(2, 1, 1, SearchScope::All, 1).unwrap();
        let pn = verify_optimal_vs_perfect(2, 1, 1, SearchScope::All, 1).unwrap();
        let text = search_summary_json(&result, Some(&pn));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["scanned"], 16);
        assert_eq!(v["optimal"]["size"], 8);
        assert_eq!(v["perfect_nonlinear"]["coincide"], true);
    }

    #[test]
    fn big_log2_matches_f64_on_small_and_large_values() {
        for value in [1u64, 2, 3, 1000, u64::MAX] {
            let x = BigUint::from(value);
            assert!((big_log2(&x) - (value as f64).log2()).abs() < 1e-10);
        }
        let huge = BigUint::from(3u8).pow(400);
        assert!((big_log2(&huge) - 400.0 * 3f64.log2()).abs() < 1e-8);
    }
}
