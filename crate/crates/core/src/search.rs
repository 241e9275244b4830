//! Exhaustive and sampled enumeration over rotation symmetric functions.
//!
//! Sums of SANF terms are enumerated as subsets of a pool of precomputed
//! truth tables. Full subset enumeration walks a Gray code so each step XORs
//! a single table; the index range is split into fixed chunks that run in
//! parallel and are merged back in chunk order, so results do not depend on
//! the thread count.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bentlab::{
    corner_sums, degree_cap, gap_profile, m_corner_folded, m_entry, nonhom_structure, paired_form,
    sign_corner_pair, twice_odd_prime, Verdict,
};
use crate::boolfn::{check_vars, f0, monomial_mask, BooleanFunction};
use crate::error::{Error, Result};
use crate::rotsym::{
    canonical_index, complement_equiv_check, orbit_representatives, orbit_size, rotate,
    sim_equivalent, CycleKind, RotSymSpec, SanfTerm,
};

/// Default cap on exhaustively enumerated instances (`2^24`).
pub const DEFAULT_BUDGET: u64 = 1 << 24;
/// Sample count for checks that are random by nature.
pub const DEFAULT_SAMPLES: u64 = 10_000;
/// Largest `n` accepted by the searches and the verification suite.
pub const MAX_SEARCH_VARS: usize = 16;

const CHUNK: u64 = 1 << 12;
const BATCH: usize = 1 << 14;

/// Canonical representatives of the orbits of `d`-subsets of `{0..n-1}`,
/// in lexicographic order.
pub fn enumerate_terms(n: usize, d: usize) -> Result<Vec<SanfTerm>> {
    check_vars(n)?;
    if d == 0 || d > n {
        return Err(Error::Config(format!("degree {d} is outside 1..={n}")));
    }
    fn extend(n: usize, d: usize, current: &mut Vec<usize>, out: &mut Vec<SanfTerm>) {
        if current.len() == d {
            let t = SanfTerm::new(n, current.iter().copied()).expect("valid indices");
            if t.indices() == current.as_slice() {
                out.push(t);
            }
            return;
        }
        let start = current.last().map_or(0, |&x| x + 1);
        for x in start..n {
            current.push(x);
            extend(n, d, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0];
    extend(n, d, &mut current, &mut out);
    Ok(out)
}

/// Every SANF term on `n` variables, by degree then lexicographically.
pub fn all_terms(n: usize) -> Result<Vec<SanfTerm>> {
    let mut out = Vec::new();
    for d in 1..=n {
        out.extend(enumerate_terms(n, d)?);
    }
    Ok(out)
}

/// How many instances to visit and what to do when the space is too large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Exhaustive enumerations larger than this are refused.
    pub budget: u64,
    /// When set, spaces larger than this many instances are sampled instead.
    pub samples: Option<u64>,
    /// Largest subset size to consider.
    pub max_terms: Option<usize>,
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            samples: None,
            max_terms: None,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

/// Subset of a pool, either as a bitmask or as a sorted index list.
#[derive(Debug, Clone, Copy)]
pub enum Pick<'a> {
    Mask(u64),
    List(&'a [usize]),
}

impl Pick<'_> {
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Pick::Mask(mut m) => {
                let mut out = Vec::with_capacity(m.count_ones() as usize);
                while m != 0 {
                    out.push(m.trailing_zeros() as usize);
                    m &= m - 1;
                }
                out
            }
            Pick::List(l) => l.to_vec(),
        }
    }

    pub fn any(&self, mut f: impl FnMut(usize) -> bool) -> bool {
        match *self {
            Pick::Mask(mut m) => {
                while m != 0 {
                    if f(m.trailing_zeros() as usize) {
                        return true;
                    }
                    m &= m - 1;
                }
                false
            }
            Pick::List(l) => l.iter().any(|&i| f(i)),
        }
    }

    pub fn count(&self) -> usize {
        match *self {
            Pick::Mask(m) => m.count_ones() as usize,
            Pick::List(l) => l.len(),
        }
    }
}

/// Result of scanning a pool.
#[derive(Debug, Clone)]
pub struct Scan<R> {
    pub instances: u64,
    pub coverage: Coverage,
    pub hits: Vec<R>,
}

/// Number of nonempty subsets of `t` items with at most `max` members, saturating.
fn subset_count(t: usize, max: Option<usize>) -> u128 {
    let k = max.unwrap_or(t).min(t);
    if k == t {
        return if t >= 128 {
            u128::MAX
        } else {
            (1u128 << t) - 1
        };
    }
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 1..=k {
        binom = match binom.checked_mul((t - i + 1) as u128) {
            Some(v) => v / i as u128,
            None => return u128::MAX,
        };
        total = total.saturating_add(binom);
    }
    total
}

/// XOR-combinable truth tables on a common `n`.
#[derive(Debug, Clone)]
pub struct TablePool {
    n: usize,
    tables: Vec<Vec<u64>>,
}

impl TablePool {
    pub fn new(n: usize, tables: Vec<BooleanFunction>) -> Self {
        Self {
            n,
            tables: tables.into_iter().map(|f| f.words().to_vec()).collect(),
        }
    }

    pub fn from_terms(n: usize, terms: &[SanfTerm]) -> Self {
        Self::new(n, terms.iter().map(SanfTerm::build).collect())
    }

    /// One indicator table per rotation orbit: subsets are exactly the
    /// rotation symmetric functions.
    pub fn orbit_indicators(n: usize) -> Result<Self> {
        let reps = orbit_representatives(n)?;
        let tables = reps
            .iter()
            .map(|&r| {
                let members: BTreeSet<usize> = (0..n).map(|k| rotate(r, k, n)).collect();
                BooleanFunction::from_fn(n, |i| members.contains(&i))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(n, tables))
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    fn combine(&self, indices: impl IntoIterator<Item = usize>) -> BooleanFunction {
        let mut words = vec![0u64; self.tables.first().map_or(1, Vec::len)];
        for i in indices {
            for (w, t) in words.iter_mut().zip(&self.tables[i]) {
                *w ^= t;
            }
        }
        BooleanFunction::from_words(self.n, words).expect("pool tables share n")
    }

    /// Visits nonempty subsets (plus the empty one when `include_empty`) and
    /// keeps whatever `visit` returns, in enumeration order.
    pub fn scan<R, F>(&self, limits: &Limits, include_empty: bool, visit: F) -> Result<Scan<R>>
    where
        R: Send,
        F: Fn(Pick<'_>, &BooleanFunction) -> Option<R> + Sync,
    {
        let t = self.len();
        let count = subset_count(t, limits.max_terms) + u128::from(include_empty);
        let exhaustive = match limits.samples {
            Some(s) => count <= u128::from(s),
            None if count <= u128::from(limits.budget) => true,
            None => {
                return Err(Error::Budget {
                    required: count,
                    budget: limits.budget,
                })
            }
        };
        if !exhaustive {
            let samples = limits.samples.expect("sampling requested");
            return Ok(self.scan_sampled(samples, limits, include_empty, &visit));
        }
        let full = limits.max_terms.is_none_or(|k| k >= t);
        let (instances, hits) = if full && t < 64 {
            self.scan_gray(include_empty, &visit)
        } else {
            self.scan_combinations(limits.max_terms.unwrap_or(t), include_empty, &visit)
        };
        Ok(Scan {
            instances,
            coverage: Coverage::Exhaustive,
            hits,
        })
    }

    fn scan_gray<R, F>(&self, include_empty: bool, visit: &F) -> (u64, Vec<R>)
    where
        R: Send,
        F: Fn(Pick<'_>, &BooleanFunction) -> Option<R> + Sync,
    {
        let total = 1u64 << self.len();
        let chunks = total.div_ceil(CHUNK);
        let per_chunk: Vec<(u64, Vec<R>)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(total);
                let mut mask = lo ^ (lo >> 1);
                let mut f = self.combine(Pick::Mask(mask).indices());
                let mut words = f.words().to_vec();
                let mut seen = 0;
                let mut hits = Vec::new();
                for idx in lo..hi {
                    if idx > lo {
                        let bit = idx.trailing_zeros() as usize;
                        mask ^= 1 << bit;
                        for (w, t) in words.iter_mut().zip(&self.tables[bit]) {
                            *w ^= t;
                        }
                        f = BooleanFunction::from_words(self.n, words.clone())
                            .expect("pool tables share n");
                    }
                    if mask == 0 && !include_empty {
                        continue;
                    }
                    seen += 1;
                    if let Some(r) = visit(Pick::Mask(mask), &f) {
                        hits.push(r);
                    }
                }
                (seen, hits)
            })
            .collect();
        let instances = per_chunk.iter().map(|(s, _)| s).sum();
        (
            instances,
            per_chunk.into_iter().flat_map(|(_, h)| h).collect(),
        )
    }

    fn scan_combinations<R, F>(&self, max: usize, include_empty: bool, visit: &F) -> (u64, Vec<R>)
    where
        R: Send,
        F: Fn(Pick<'_>, &BooleanFunction) -> Option<R> + Sync,
    {
        let t = self.len();
        let mut instances = 0u64;
        let mut hits = Vec::new();
        if include_empty {
            instances += 1;
            if let Some(r) = visit(Pick::List(&[]), &self.combine([])) {
                hits.push(r);
            }
        }
        let mut batch: Vec<Vec<usize>> = Vec::with_capacity(BATCH);
        let mut flush = |batch: &mut Vec<Vec<usize>>| {
            let found: Vec<Option<R>> = batch
                .par_iter()
                .map(|s| visit(Pick::List(s), &self.combine(s.iter().copied())))
                .collect();
            instances += batch.len() as u64;
            hits.extend(found.into_iter().flatten());
            batch.clear();
        };
        for k in 1..=max.min(t) {
            // Lexicographic k-combinations of 0..t.
            let mut comb: Vec<usize> = (0..k).collect();
            loop {
                batch.push(comb.clone());
                if batch.len() == BATCH {
                    flush(&mut batch);
                }
                let Some(pos) = (0..k).rev().find(|&i| comb[i] < t - k + i) else {
                    break;
                };
                comb[pos] += 1;
                for i in pos + 1..k {
                    comb[i] = comb[i - 1] + 1;
                }
            }
        }
        flush(&mut batch);
        (instances, hits)
    }

    fn scan_sampled<R, F>(
        &self,
        samples: u64,
        limits: &Limits,
        include_empty: bool,
        visit: &F,
    ) -> Scan<R>
    where
        R: Send,
        F: Fn(Pick<'_>, &BooleanFunction) -> Option<R> + Sync,
    {
        let t = self.len();
        let max = limits.max_terms.unwrap_or(t).min(t);
        let mut rng = SplitMix64::seed_from_u64(limits.seed);
        let picks: Vec<Vec<usize>> = (0..samples)
            .map(|_| loop {
                let subset: Vec<usize> = if max == t {
                    (0..t).filter(|_| rng.next_u64() & 1 == 1).collect()
                } else {
                    let k = rng.gen_range(1..=max);
                    let mut s = sample(&mut rng, t, k).into_vec();
                    s.sort_unstable();
                    s
                };
                if include_empty || !subset.is_empty() {
                    break subset;
                }
            })
            .collect();
        let hits: Vec<R> = picks
            .par_iter()
            .filter_map(|s| visit(Pick::List(s), &self.combine(s.iter().copied())))
            .collect();
        Scan {
            instances: samples,
            coverage: Coverage::Sampled,
            hits,
        }
    }
}

/// Bent specs found by a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub bent: Vec<RotSymSpec>,
    pub instances: u64,
    pub coverage: Coverage,
}

fn spec_of(n: usize, terms: &[SanfTerm], pick: Pick<'_>) -> RotSymSpec {
    RotSymSpec::new(
        n,
        false,
        pick.indices().into_iter().map(|i| terms[i].clone()),
    )
    .expect("pool terms are distinct")
}

fn search_pool(n: usize, terms: &[SanfTerm], limits: &Limits) -> Result<SearchResult> {
    let pool = TablePool::from_terms(n, terms);
    let scan = pool.scan(limits, false, |pick, f| {
        f.is_bent().then(|| spec_of(n, terms, pick))
    })?;
    Ok(SearchResult {
        bent: scan.hits,
        instances: scan.instances,
        coverage: scan.coverage,
    })
}

fn require_even_search_vars(n: usize) -> Result<()> {
    check_vars(n)?;
    if n % 2 == 1 || n > MAX_SEARCH_VARS {
        return Err(Error::Config(format!(
            "searches need an even n ≤ {MAX_SEARCH_VARS}, got {n}"
        )));
    }
    Ok(())
}

/// Bent sums of distinct degree-`d` SANF terms.
pub fn search_homogeneous(n: usize, d: usize, limits: &Limits) -> Result<SearchResult> {
    require_even_search_vars(n)?;
    search_pool(n, &enumerate_terms(n, d)?, limits)
}

/// Short-cycle SANF terms of every degree.
pub fn short_cycle_terms(n: usize) -> Result<Vec<SanfTerm>> {
    Ok(all_terms(n)?
        .into_iter()
        .filter(|t| t.classify().kind == CycleKind::Short)
        .collect())
}

/// Bent sums built only from short-cycle terms.
pub fn search_short_cycle_sums(n: usize, limits: &Limits) -> Result<SearchResult> {
    require_even_search_vars(n)?;
    search_pool(n, &short_cycle_terms(n)?, limits)
}

/// Bent sums of quadratic SANF terms.
pub fn search_degree2(n: usize, limits: &Limits) -> Result<SearchResult> {
    require_even_search_vars(n)?;
    search_pool(n, &enumerate_terms(n, 2)?, limits)
}

/// Outcome of scanning every truth table on `n ≤ 4` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BentCensus {
    pub n: usize,
    pub tables: u64,
    pub bent: u64,
    /// Tables where bentness and maximal nonlinearity disagree.
    pub nonlinearity_mismatches: u64,
    /// Tables where bentness and `M = 2^n I` disagree.
    pub hadamard_mismatches: u64,
}

/// Counts bent functions among all `2^{2^n}` tables, `n ∈ {2, 4}`.
pub fn brute_force_bent_census(n: usize) -> Result<BentCensus> {
    if n != 2 && n != 4 {
        return Err(Error::Config(format!(
            "brute-force census supports n = 2 or 4, got {n}"
        )));
    }
    let len = 1usize << n;
    let max_nl = (1u64 << (n - 1)) - (1u64 << (n / 2 - 1));
    let rows: Vec<(bool, bool, bool)> = (0u64..1 << len)
        .into_par_iter()
        .map(|table| {
            let f = BooleanFunction::from_words(n, vec![table]).expect("table fits");
            let bent = f.is_bent();
            let nl = f.nonlinearity() == max_nl;
            // M_{i,j} depends on v_i ⊕ v_j only, so row 0 decides the whole matrix.
            let hadamard = (1..len).all(|j| m_entry(&f, 0, j) == 0);
            (bent, nl, hadamard)
        })
        .collect();
    Ok(BentCensus {
        n,
        tables: rows.len() as u64,
        bent: rows.iter().filter(|r| r.0).count() as u64,
        nonlinearity_mismatches: rows.iter().filter(|r| r.0 != r.1).count() as u64,
        hadamard_mismatches: rows.iter().filter(|r| r.0 != r.2).count() as u64,
    })
}

/// One line of the monomial rotation symmetric census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub spec: String,
    pub degree: usize,
    pub cycle_kind: CycleKind,
    pub monomials: usize,
    pub nonlinearity: u64,
    pub bent: bool,
}

/// Properties of every single-term spec on `n` variables.
pub fn mrs_census(n: usize) -> Result<Vec<CensusRow>> {
    check_vars(n)?;
    if n > MAX_SEARCH_VARS {
        return Err(Error::Config(format!("census needs n ≤ {MAX_SEARCH_VARS}")));
    }
    Ok(all_terms(n)?
        .par_iter()
        .map(|t| {
            let f = t.build();
            let class = t.classify();
            CensusRow {
                spec: t.to_string(),
                degree: t.degree(),
                cycle_kind: class.kind,
                monomials: class.monomial_count,
                nonlinearity: f.nonlinearity(),
                bent: f.is_bent(),
            }
        })
        .collect())
}

/// Groups of checks selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "all")]
    All,
    /// Results that hold for every even `n`.
    #[serde(rename = "sec2")]
    EvenN,
    /// Homogeneous results for `n = 2p`.
    #[serde(rename = "sec3")]
    TwicePrime,
    /// The cycle-length verdict for mixed-degree specs, `n = 2p`.
    #[serde(rename = "sec4")]
    Nonhomogeneous,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "sec2" => Ok(Suite::EvenN),
            "sec3" => Ok(Suite::TwicePrime),
            "sec4" => Ok(Suite::Nonhomogeneous),
            other => Err(Error::Config(format!("unknown suite {other:?}"))),
        }
    }
}

impl Suite {
    fn even_n(self) -> bool {
        matches!(self, Suite::All | Suite::EvenN)
    }
    fn twice_prime(self) -> bool {
        matches!(self, Suite::All | Suite::TwicePrime)
    }
    fn nonhomogeneous(self) -> bool {
        matches!(self, Suite::All | Suite::Nonhomogeneous)
    }
}

/// Configuration of [`verify_suite`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    /// Skip the pass over arbitrary rotation symmetric functions.
    pub homogeneous_only: bool,
    pub max_terms: Option<usize>,
    /// `None` enumerates exhaustively and fails when the budget is exceeded.
    pub samples: Option<u64>,
    pub seed: u64,
    pub budget: u64,
    pub suite: Suite,
}

impl SearchConfig {
    pub fn new(n: usize, suite: Suite) -> Self {
        Self {
            n,
            min_degree: 1,
            max_degree: n,
            homogeneous_only: false,
            max_terms: None,
            samples: None,
            seed: 1,
            budget: DEFAULT_BUDGET,
            suite,
        }
    }

    pub fn sampled(mut self, samples: u64, seed: u64) -> Self {
        self.samples = Some(samples);
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n % 2 == 1 || !(MIN_SUITE_VARS..=MAX_SEARCH_VARS).contains(&n) {
            return Err(Error::Config(format!(
                "n must be even and in {MIN_SUITE_VARS}..={MAX_SEARCH_VARS}, got {n}"
            )));
        }
        if self.min_degree == 0 || self.min_degree > self.max_degree || self.max_degree > n {
            return Err(Error::Config(format!(
                "degree range {}..={} is not inside 1..={n}",
                self.min_degree, self.max_degree
            )));
        }
        if self.samples == Some(0) {
            return Err(Error::Config("sample size must be at least 1".into()));
        }
        if self.max_terms == Some(0) {
            return Err(Error::Config("max terms must be at least 1".into()));
        }
        if matches!(self.suite, Suite::TwicePrime | Suite::Nonhomogeneous)
            && twice_odd_prime(n).is_none()
        {
            return Err(Error::NotTwicePrime { n });
        }
        Ok(())
    }

    fn limits(&self, salt: u64) -> Limits {
        Limits {
            budget: self.budget,
            samples: self.samples,
            max_terms: self.max_terms,
            seed: self
                .seed
                .wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        }
    }

    fn rng(&self, salt: u64) -> SplitMix64 {
        SplitMix64::seed_from_u64(self.limits(salt).seed)
    }

    fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        self.min_degree..=self.max_degree
    }
}

const MIN_SUITE_VARS: usize = 4;
const MAX_STORED_VIOLATIONS: usize = 10;

/// A counterexample, with the offending spec or truth table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub reproducer: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub instances: u64,
    pub coverage: Coverage,
    pub violations: Vec<Violation>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub n: usize,
    pub suite: Suite,
    pub seed: u64,
    pub samples: Option<u64>,
    pub passed: bool,
    pub entries: Vec<CheckEntry>,
    pub bent_specs: Vec<String>,
}

impl VerificationReport {
    pub fn violation_count(&self) -> usize {
        self.entries.iter().map(|e| e.violations.len()).sum()
    }

    pub fn entry(&self, check: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    /// JSON with every timing field zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for e in &mut r.entries {
            e.elapsed_ms = 0;
        }
        r
    }
}

/// Accumulates one check's counts and counterexamples.
struct Tally {
    check: &'static str,
    instances: u64,
    coverage: Coverage,
    violations: Vec<Violation>,
}

impl Tally {
    fn new(check: &'static str) -> Self {
        Self {
            check,
            instances: 0,
            coverage: Coverage::Exhaustive,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, reproducer: impl FnOnce() -> String, detail: &str) {
        self.instances += 1;
        if !ok && self.violations.len() < MAX_STORED_VIOLATIONS {
            self.violations.push(Violation {
                reproducer: reproducer(),
                detail: detail.to_string(),
            });
        }
    }

    fn merge(&mut self, other: Tally) {
        self.instances += other.instances;
        if other.coverage == Coverage::Sampled {
            self.coverage = Coverage::Sampled;
        }
        let room = MAX_STORED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations
            .extend(other.violations.into_iter().take(room));
    }

    fn finish(self, started: Instant) -> CheckEntry {
        CheckEntry {
            check: self.check.to_string(),
            instances: self.instances,
            coverage: self.coverage,
            violations: self.violations,
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }
}

struct Runner<'a> {
    config: &'a SearchConfig,
    entries: Vec<CheckEntry>,
    bent: BTreeSet<RotSymSpec>,
    failed: bool,
}

impl Runner<'_> {
    /// Runs one group of checks unless an earlier one already failed.
    fn run(
        &mut self,
        group: impl FnOnce(&SearchConfig, &mut BTreeSet<RotSymSpec>) -> Result<Vec<Tally>>,
    ) -> Result<()> {
        if self.failed {
            return Ok(());
        }
        let started = Instant::now();
        let tallies = group(self.config, &mut self.bent)?;
        for t in tallies {
            self.failed |= !t.violations.is_empty();
            self.entries.push(t.finish(started));
        }
        Ok(())
    }
}

/// Runs the selected checks. Checks stop at the first group with a
/// violation; the report then carries the reproducer and `passed = false`.
pub fn verify_suite(config: &SearchConfig) -> Result<VerificationReport> {
    config.validate()?;
    let n = config.n;
    let suite = config.suite;
    let p = twice_odd_prime(n);
    let mut runner = Runner {
        config,
        entries: Vec::new(),
        bent: BTreeSet::new(),
        failed: false,
    };

    if suite.even_n() {
        runner.run(|c, _| Ok(vec![check_f0(c)?]))?;
        runner.run(|c, _| check_index_pairs(c))?;
        runner.run(|c, _| Ok(vec![check_quadratic_single_terms(c)?]))?;
        runner.run(|c, _| Ok(vec![check_short_quadratic(c)?]))?;
        runner.run(|c, found| {
            Ok(vec![check_contains_f0(
                "quadratic-sums-contain-f0",
                search_degree2(c.n, &c.limits(3))?,
                found,
            )])
        })?;
        runner.run(|c, _| Ok(vec![check_jset_bound(c)?]))?;
        runner.run(|c, _| Ok(vec![check_short_single_terms(c)?]))?;
        runner.run(|c, found| {
            Ok(vec![check_contains_f0(
                "short-cycle-sums-contain-f0",
                search_short_cycle_sums(c.n, &c.limits(4))?,
                found,
            )])
        })?;
    }
    if let Some(p) = p {
        if suite.twice_prime() {
            runner.run(|c, _| check_orbit_sizes(c))?;
            runner.run(|c, _| check_single_terms_twice_prime(c, p))?;
            runner.run(|c, found| check_homogeneous_sums(c, p, found))?;
        }
        if !config.homogeneous_only && (suite.twice_prime() || suite.nonhomogeneous()) {
            runner.run(|c, found| check_rotation_symmetric_pass(c, p, found))?;
        }
    }

    let Runner {
        entries,
        bent,
        failed,
        ..
    } = runner;
    Ok(VerificationReport {
        schema: 1,
        n,
        suite,
        seed: config.seed,
        samples: config.samples,
        passed: !failed,
        entries,
        bent_specs: bent.iter().map(ToString::to_string).collect(),
    })
}

fn check_f0(c: &SearchConfig) -> Result<Tally> {
    let mut t = Tally::new("f0-weight-nonlinearity");
    let f = f0(c.n)?;
    let expected = (1u64 << (c.n - 1)) - (1u64 << (c.n / 2 - 1));
    t.record(
        f.weight() == expected && f.nonlinearity() == expected && f.is_bent(),
        || f.to_hex(),
        "f0 weight, nonlinearity or bentness differs from 2^(n-1) - 2^(n/2-1)",
    );
    Ok(t)
}

/// Doubling equivalence against rotation, and its complement symmetry.
fn check_index_pairs(c: &SearchConfig) -> Result<Vec<Tally>> {
    let n = c.n;
    let len = 1u64 << n;
    let pairs = u128::from(len) * u128::from(len);
    let all = pairs <= u128::from(c.budget) && c.samples.is_none_or(|s| pairs <= u128::from(s));
    let list: Vec<(usize, usize)> = if all {
        (0..len as usize)
            .flat_map(|i| (0..len as usize).map(move |j| (i, j)))
            .collect()
    } else {
        let mut rng = c.rng(1);
        (0..c.samples.unwrap_or(DEFAULT_SAMPLES))
            .map(|_| {
                (
                    rng.gen_range(0..len) as usize,
                    rng.gen_range(0..len) as usize,
                )
            })
            .collect()
    };
    let canon: Vec<usize> = (0..len as usize).map(|i| canonical_index(i, n)).collect();
    let flags: Vec<(bool, bool)> = list
        .par_iter()
        .map(|&(i, j)| {
            (
                sim_equivalent(i, j, n) == (canon[i] == canon[j]),
                complement_equiv_check(i, j, n),
            )
        })
        .collect();
    let mut doubling = Tally::new("index-doubling-equivalence");
    let mut complement = Tally::new("complement-equivalence");
    if !all {
        doubling.coverage = Coverage::Sampled;
        complement.coverage = Coverage::Sampled;
    }
    for (&(i, j), &(d, k)) in list.iter().zip(&flags) {
        doubling.record(
            d,
            || format!("({i},{j})"),
            "doubling disagrees with rotation",
        );
        complement.record(k, || format!("({i},{j})"), "complement pair disagrees");
    }
    Ok(vec![doubling, complement])
}

fn check_quadratic_single_terms(c: &SearchConfig) -> Result<Tally> {
    let n = c.n;
    let mut t = Tally::new("quadratic-bent-iff-half-shift");
    for k in 1..n {
        let term = SanfTerm::new(n, [0, k])?;
        t.record(
            term.build().is_bent() == (k == n / 2),
            || format!("x0x{k}"),
            "x0xk bentness does not match k = n/2",
        );
    }
    Ok(t)
}

fn check_short_quadratic(c: &SearchConfig) -> Result<Tally> {
    let n = c.n;
    let mut t = Tally::new("only-short-quadratic-is-f0");
    for term in enumerate_terms(n, 2)? {
        let short = term.classify().kind == CycleKind::Short;
        t.record(
            short == (term.indices() == [0, n / 2]),
            || term.to_string(),
            "quadratic short cycle other than x0x(n/2)",
        );
    }
    Ok(t)
}

fn check_contains_f0(
    check: &'static str,
    result: SearchResult,
    found: &mut BTreeSet<RotSymSpec>,
) -> Tally {
    let mut t = Tally::new(check);
    t.instances = result.instances;
    t.coverage = result.coverage;
    for spec in result.bent {
        if !spec.contains_f0() && t.violations.len() < MAX_STORED_VIOLATIONS {
            t.violations.push(Violation {
                reproducer: spec.to_string(),
                detail: "bent spec without x0x(n/2)".into(),
            });
        }
        found.insert(spec);
    }
    t
}

fn random_function(n: usize, rng: &mut impl RngCore) -> BooleanFunction {
    let words = (1usize << n).div_ceil(64);
    let mut w: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
    if n < 6 {
        w[0] &= (1u64 << (1 << n)) - 1;
    }
    BooleanFunction::from_words(n, w).expect("sized for n")
}

/// A random function with every monomial of degree ≥ 2 inside a random `J`
/// removed, so the J-set bound applies.
pub fn jset_instance(n: usize, rng: &mut impl RngCore) -> (BooleanFunction, BTreeSet<usize>) {
    let size = rng.gen_range(1..=n);
    let j: BTreeSet<usize> = sample(rng, n, size).into_iter().collect();
    let jmask = monomial_mask(n, &j.iter().copied().collect::<Vec<_>>());
    let mut coefficients = random_function(n, rng).words().to_vec();
    let mut sub = jmask;
    loop {
        // Every submask of J with at least two variables.
        if sub.count_ones() > 1 {
            coefficients[sub / 64] &= !(1u64 << (sub % 64));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & jmask;
    }
    let f = BooleanFunction::from_anf_words(n, coefficients).expect("sized for n");
    (f, j)
}

fn check_jset_bound(c: &SearchConfig) -> Result<Tally> {
    let n = c.n;
    let mut rng = c.rng(2);
    let instances: Vec<(BooleanFunction, BTreeSet<usize>)> =
        (0..c.samples.unwrap_or(DEFAULT_SAMPLES))
            .map(|_| jset_instance(n, &mut rng))
            .collect();
    let oks: Vec<bool> = instances
        .par_iter()
        .map(|(f, j)| match crate::bentlab::jset_bound(f, j) {
            Ok(Some(bound)) => f.nonlinearity() <= bound,
            _ => false,
        })
        .collect();
    let mut t = Tally::new("jset-nonlinearity-bound");
    t.coverage = Coverage::Sampled;
    for ((f, j), ok) in instances.iter().zip(oks) {
        t.record(
            ok,
            || format!("{} J={j:?}", f.to_hex()),
            "nonlinearity above the J-set bound",
        );
    }
    Ok(t)
}

fn check_short_single_terms(c: &SearchConfig) -> Result<Tally> {
    let n = c.n;
    let mut t = Tally::new("short-cycle-only-f0");
    for term in short_cycle_terms(n)? {
        t.record(
            term.build().is_bent() == (term.indices() == [0, n / 2]),
            || term.to_string(),
            "short-cycle term bentness does not match f0",
        );
    }
    Ok(t)
}

fn check_orbit_sizes(c: &SearchConfig) -> Result<Vec<Tally>> {
    let n = c.n;
    let third = ((1usize << n) - 1) / 3;
    let mut divides = Tally::new("orbit-size-divides-n");
    let mut two = Tally::new("orbit-size-two");
    for i in 0..1usize << n {
        let size = orbit_size(i, n);
        divides.record(
            n.is_multiple_of(size),
            || i.to_string(),
            "orbit size does not divide n",
        );
        two.record(
            (size == 2) == sim_equivalent(i, third, n),
            || i.to_string(),
            "size-2 orbit is not the alternating vector",
        );
    }
    Ok(vec![divides, two])
}

fn check_single_terms_twice_prime(c: &SearchConfig, p: usize) -> Result<Vec<Tally>> {
    let n = c.n;
    let mut full = Tally::new("full-cycle-not-bent");
    let mut only = Tally::new("homogeneous-mrs-only-f0");
    let mut paired = Tally::new("p-cycle-paired-form");
    for d in c.degrees() {
        for term in enumerate_terms(n, d)? {
            let class = term.classify();
            let bent = term.build().is_bent();
            if class.kind == CycleKind::Full {
                full.record(!bent, || term.to_string(), "full-cycle term is bent");
            }
            only.record(
                bent == (term.indices() == [0, p]),
                || term.to_string(),
                "single-term bentness does not match f0",
            );
            if class.monomial_count == p {
                let ok = d % 2 == 0 && paired_form(&term, p).is_some_and(|pf| pf.pairs() * 2 == d);
                paired.record(ok, || term.to_string(), "p-monomial term is not paired");
            }
        }
    }
    Ok(vec![full, only, paired])
}

/// Per-term facts reused for every subset in the homogeneous pass.
struct TermFacts {
    max_gap: usize,
    full_in_odd_band: bool,
}

fn check_homogeneous_sums(
    c: &SearchConfig,
    p: usize,
    found: &mut BTreeSet<RotSymSpec>,
) -> Result<Vec<Tally>> {
    let n = c.n;
    let cap = degree_cap(p)?;
    let mut parity = Tally::new("homogeneous-parity-structure");
    let mut odd = Tally::new("odd-index-criterion");
    let mut gap = Tally::new("gap-criterion");
    let mut degree = Tally::new("degree-cap");
    for d in c.degrees() {
        let terms = enumerate_terms(n, d)?;
        let facts: Vec<TermFacts> = terms
            .iter()
            .map(|t| {
                let kind = t.classify().kind;
                let odd = t.indices().iter().filter(|&&i| i % 2 == 1).count();
                TermFacts {
                    max_gap: gap_profile(t).max_gap,
                    full_in_odd_band: kind == CycleKind::Short
                        || (d >= 4 && (2..=d - 2).contains(&odd)),
                }
            })
            .collect();
        let pool = TablePool::from_terms(n, &terms);
        let odd_applies = d >= 4 && d % 2 == 0;
        // (spec, bent, odd certified, gap certified)
        let scan = pool.scan(&c.limits(100 + d as u64), false, |pick, f| {
            let odd_cert = odd_applies && !pick.any(|i| !facts[i].full_in_odd_band);
            let gap_cert = d >= 3 && !pick.any(|i| facts[i].max_gap > n / 2);
            let bent = f.is_bent();
            (bent || odd_cert || gap_cert)
                .then(|| (spec_of(n, &terms, pick), bent, odd_cert, gap_cert))
        })?;
        let subsets = scan.instances;
        let mut local_parity = Tally::new("homogeneous-parity-structure");
        let mut local_odd = Tally::new("odd-index-criterion");
        let mut local_gap = Tally::new("gap-criterion");
        let mut local_degree = Tally::new("degree-cap");
        for (spec, bent, odd_cert, gap_cert) in scan.hits {
            if bent {
                let r = spec
                    .terms()
                    .iter()
                    .filter(|t| t.classify().kind == CycleKind::Short)
                    .count();
                let l = spec.terms().len() - r;
                let ok = d % 2 == 0
                    && if d == 2 {
                        spec.contains_f0()
                    } else {
                        r % 2 == 1 && l >= 1
                    };
                local_parity.record(
                    ok,
                    || spec.to_string(),
                    "bent homogeneous spec breaks parity structure",
                );
                if d >= 3 {
                    local_degree.record(
                        d <= cap,
                        || spec.to_string(),
                        "bent homogeneous spec above degree cap",
                    );
                }
                found.insert(spec.clone());
            }
            if odd_cert {
                local_odd.record(
                    !bent,
                    || spec.to_string(),
                    "odd-index criterion certified a bent spec",
                );
            }
            if gap_cert {
                local_gap.record(
                    !bent,
                    || spec.to_string(),
                    "gap criterion certified a bent spec",
                );
            }
        }
        // Non-bent, uncertified subsets are consistent with every check.
        local_parity.instances = subsets;
        if d >= 3 {
            local_degree.instances = subsets;
        }
        for t in [
            &mut local_parity,
            &mut local_odd,
            &mut local_gap,
            &mut local_degree,
        ] {
            t.coverage = scan.coverage;
        }
        parity.merge(local_parity);
        odd.merge(local_odd);
        gap.merge(local_gap);
        degree.merge(local_degree);
    }
    Ok(vec![parity, odd, gap, degree])
}

/// One pass over rotation symmetric functions, all of them when they fit.
fn check_rotation_symmetric_pass(
    c: &SearchConfig,
    p: usize,
    found: &mut BTreeSet<RotSymSpec>,
) -> Result<Vec<Tally>> {
    let n = c.n;
    let pool = TablePool::orbit_indicators(n)?;
    let limits = Limits {
        max_terms: None,
        ..c.limits(5)
    };
    struct Outcome {
        hex: String,
        corner_ok: bool,
        bent: bool,
        signs_opposite: bool,
        verdict: Verdict,
        spec: Option<RotSymSpec>,
        has_f0: bool,
    }
    let scan = pool.scan(&limits, true, |_, f| {
        let folded = m_corner_folded(f);
        let reduced = corner_sums(f, p).map(|s| s.corner(n));
        let direct = if n <= 8 {
            m_entry(f, 0, f.len() - 1)
        } else {
            folded
        };
        let bent = f.is_bent();
        let (s0, s1) = sign_corner_pair(f);
        let spec = RotSymSpec::from_function(f).ok();
        let verdict = spec
            .as_ref()
            .and_then(|s| nonhom_structure(s).ok())
            .unwrap_or(Verdict::Inconclusive);
        Some(Outcome {
            hex: f.to_hex(),
            corner_ok: reduced == Ok(folded) && direct == folded,
            bent,
            signs_opposite: s0 == -s1,
            verdict,
            has_f0: spec.as_ref().is_some_and(RotSymSpec::contains_f0),
            spec: if bent { spec } else { None },
        })
    })?;
    let mut corner = Tally::new("corner-routes-agree");
    let mut signs = Tally::new("sign-corner-antisymmetry");
    let mut verdict = Tally::new("nonhomogeneous-structure");
    for o in &scan.hits {
        corner.record(
            o.corner_ok,
            || o.hex.clone(),
            "corner entry routes disagree",
        );
        if o.bent {
            signs.record(
                o.signs_opposite,
                || o.hex.clone(),
                "bent function with equal corner signs",
            );
        }
        let ok = match o.verdict {
            Verdict::RequiresF0 => !o.bent || o.has_f0,
            Verdict::NotBent => !o.bent,
            Verdict::Inconclusive => true,
        };
        verdict.record(
            ok,
            || o.hex.clone(),
            "cycle-length verdict contradicted by spectrum",
        );
    }
    for t in [&mut corner, &mut signs, &mut verdict] {
        t.coverage = scan.coverage;
    }
    found.extend(scan.hits.into_iter().filter_map(|o| o.spec));
    let mut out = Vec::new();
    if c.suite.twice_prime() {
        out.push(corner);
        out.push(signs);
    }
    if c.suite.nonhomogeneous() {
        out.push(verdict);
    }
    Ok(out)
}
