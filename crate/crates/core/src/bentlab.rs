//! Structural probes for bentness of rotation symmetric functions.
//!
//! A function is bent exactly when `A = (f̂(v_i ⊕ v_j))` is a Hadamard matrix,
//! i.e. when `M = A Aᵀ = 2^n I`. The probes here evaluate the corner entry
//! `M_{0, 2^n-1}` three ways, and collect the combinatorial predicates that
//! certify non-bentness without a full spectrum.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::boolfn::{monomial_mask, BooleanFunction};
use crate::error::{Error, Result};
use crate::rotsym::{
    canonical_index, is_rotation_symmetric, orbit_representatives, orbit_size, sim_equivalent,
    CycleKind, RotSymSpec, SanfTerm,
};

/// Whether `p` is an odd prime.
pub fn is_odd_prime(p: usize) -> bool {
    p >= 3
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// `Some(p)` when `n = 2p` with `p` an odd prime.
pub fn twice_odd_prime(n: usize) -> Option<usize> {
    (n.is_multiple_of(2) && is_odd_prime(n / 2)).then_some(n / 2)
}

fn require_twice_odd_prime(n: usize) -> Result<usize> {
    twice_odd_prime(n).ok_or(Error::NotTwicePrime { n })
}

/// `M_{i,j} = Σ_k f̂(v_i ⊕ v_k) f̂(v_k ⊕ v_j)`.
///
/// # Panics
///
/// If `i` or `j` is not below `2^n`.
pub fn m_entry(f: &BooleanFunction, i: usize, j: usize) -> i64 {
    assert!(i < f.len() && j < f.len(), "index out of range");
    (0..f.len())
        .map(|k| i64::from(f.sign(i ^ k) * f.sign(k ^ j)))
        .sum()
}

/// `M_{0,2^n-1}` folded onto the lower half: `Σ_{k<2^{n-1}} 2 f̂(v_k) f̂(v_{2^n-1-k})`.
pub fn m_corner_folded(f: &BooleanFunction) -> i64 {
    let top = f.len() - 1;
    (0..f.len() / 2)
        .map(|k| 2 * i64::from(f.sign(k) * f.sign(top - k)))
        .sum()
}

/// Orbit-grouped sums of the corner entry for a rotation symmetric function on
/// `n = 2p` variables.
///
/// - `a = f̂(v_0) f̂(v_{2^n-1})`;
/// - `b` sums `f̂(v_k) f̂(v_{2^n-1-k})` over full orbits not equivalent to their complement;
/// - `c` sums the same product over orbits of size `p`;
/// - `d` sums `f̂(v_k)²` over full orbits equivalent to their complement.
///
/// An orbit and its complement orbit contribute one summand together in `b`
/// and `c`, taken at the smaller representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerSums {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CornerSums {
    /// `2 + 2a + 2n·b + n·c + n·d`.
    pub fn corner(&self, n: usize) -> i64 {
        let n = n as i64;
        2 + 2 * self.a + 2 * n * self.b + n * self.c + n * self.d
    }
}

pub fn corner_sums(f: &BooleanFunction, p: usize) -> Result<CornerSums> {
    let n = f.n();
    if !is_odd_prime(p) || n != 2 * p {
        return Err(Error::NotTwicePrime { n });
    }
    if !is_rotation_symmetric(f) {
        return Err(Error::NotRotationSymmetric);
    }
    let top = f.len() - 1;
    let prod = |k: usize| i64::from(f.sign(k) * f.sign(top - k));
    let mut sums = CornerSums {
        a: prod(0),
        b: 0,
        c: 0,
        d: 0,
    };
    for &k in orbit_representatives(n)?.iter() {
        let size = orbit_size(k, n);
        let pair_leader = || k < canonical_index(top - k, n);
        if size == p {
            if pair_leader() {
                sums.c += prod(k);
            }
        } else if size == n {
            if sim_equivalent(k, top - k, n) {
                sums.d += i64::from(f.sign(k) * f.sign(k));
            } else if pair_leader() {
                sums.b += prod(k);
            }
        }
        // Sizes 1 and 2 are the all-zero/all-ones pair (`a`) and the
        // alternating pair, which contributes the constant 2.
    }
    Ok(sums)
}

/// The corner entry evaluated along each available route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerProbe {
    /// Full sum over all `k`.
    pub direct: i64,
    /// Lower-half sum with paired complements.
    pub folded: i64,
    /// Orbit-grouped sum, only for rotation symmetric `f` on `2p` variables.
    pub reduced: Option<i64>,
    pub sums: Option<CornerSums>,
}

impl CornerProbe {
    pub fn consistent(&self) -> bool {
        self.direct == self.folded && self.reduced.is_none_or(|r| r == self.folded)
    }
}

/// All three routes; errors unless `n = 2p` and `f` is rotation symmetric.
pub fn m_corner_reduced(f: &BooleanFunction, p: usize) -> Result<CornerProbe> {
    let sums = corner_sums(f, p)?;
    Ok(CornerProbe {
        direct: m_entry(f, 0, f.len() - 1),
        folded: m_corner_folded(f),
        reduced: Some(sums.corner(f.n())),
        sums: Some(sums),
    })
}

/// Every route that applies to `f`.
pub fn corner_probe(f: &BooleanFunction) -> CornerProbe {
    match twice_odd_prime(f.n()).map(|p| m_corner_reduced(f, p)) {
        Some(Ok(probe)) => probe,
        _ => CornerProbe {
            direct: m_entry(f, 0, f.len() - 1),
            folded: m_corner_folded(f),
            reduced: None,
            sums: None,
        },
    }
}

/// `(f̂(v_0), f̂(v_{2^n-1}))`. Bent rotation symmetric functions on `2p`
/// variables have opposite signs here.
pub fn sign_corner_pair(f: &BooleanFunction) -> (i32, i32) {
    (f.sign(0), f.sign(f.len() - 1))
}

/// Nonlinearity bound `2^{n-1} - 2^{|J|-1}` when no monomial of degree ≥ 2
/// lies inside `J`; `None` when one does or when `J` is empty.
pub fn jset_bound(f: &BooleanFunction, j: &BTreeSet<usize>) -> Result<Option<u64>> {
    let n = f.n();
    if let Some(&bad) = j.iter().find(|&&x| x >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    if j.is_empty() {
        return Ok(None);
    }
    let jmask = monomial_mask(n, &j.iter().copied().collect::<Vec<_>>());
    let inside = f
        .anf_masks()
        .into_iter()
        .any(|m| m.count_ones() > 1 && m & !jmask == 0);
    if inside {
        return Ok(None);
    }
    Ok(Some((1u64 << (n - 1)) - (1u64 << (j.len() - 1))))
}

/// A term with `p` monomials on `2p` variables: its index set is
/// `base ∪ (base + p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedForm {
    pub base: Vec<usize>,
    pub shift: usize,
}

impl PairedForm {
    /// Number of index pairs `{a, a + p}`.
    pub fn pairs(&self) -> usize {
        self.base.len()
    }
}

/// Splits a `p`-monomial term into its paired form; `None` when the term's
/// orbit does not have exactly `p` monomials or `n ≠ 2p`.
pub fn paired_form(term: &SanfTerm, p: usize) -> Option<PairedForm> {
    if term.n() != 2 * p || term.monomial_count() != p {
        return None;
    }
    let base: Vec<usize> = term.indices().iter().copied().filter(|&i| i < p).collect();
    let rebuilt: Vec<usize> = base
        .iter()
        .copied()
        .chain(base.iter().map(|a| a + p))
        .collect();
    let mut sorted = rebuilt.clone();
    sorted.sort_unstable();
    (sorted == term.indices()).then_some(PairedForm { base, shift: p })
}

/// Circular gaps between consecutive indices of a term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapProfile {
    pub term: String,
    pub gaps: Vec<usize>,
    pub max_gap: usize,
}

pub fn gap_profile(term: &SanfTerm) -> GapProfile {
    let idx = term.indices();
    let mut gaps: Vec<usize> = idx.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(idx[0] + term.n() - idx[idx.len() - 1]);
    GapProfile {
        term: term.to_string(),
        max_gap: gaps.iter().copied().max().unwrap_or(0),
        gaps,
    }
}

/// Largest gap over all terms of the spec; 0 when there are none.
pub fn s_f(spec: &RotSymSpec) -> usize {
    spec.terms()
        .iter()
        .map(|t| gap_profile(t).max_gap)
        .max()
        .unwrap_or(0)
}

/// Gap criterion for homogeneous specs of degree `d ≥ 3`: `true` certifies
/// the function is not bent (`s_f ≤ n/2`). `false` is inconclusive.
pub fn gap_criterion_nonbent(spec: &RotSymSpec) -> Result<bool> {
    if !is_homogeneous(spec) {
        return Err(Error::NotHomogeneous);
    }
    let d = spec.degree();
    if d < 3 {
        return Err(Error::DegreeTooSmall { degree: d, min: 3 });
    }
    Ok(s_f(spec) <= spec.n() / 2)
}

/// Highest degree `≥ 3` a homogeneous rotation symmetric bent function on
/// `2p` variables can have.
pub fn degree_cap(p: usize) -> Result<usize> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime { p });
    }
    // (p+3)/2 never exceeds the general n/2 = p cap for p ≥ 3.
    Ok(((p + 3) / 2).min(p))
}

/// Nonconstant terms all of one degree. The constant bit is ignored.
pub fn is_homogeneous(spec: &RotSymSpec) -> bool {
    spec.degree_set().len() == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Bent only if the spec contains `x_0 x_p`.
    RequiresF0,
    NotBent,
    Inconclusive,
}

/// Cycle-length classification for specs on `n = 2p` variables.
///
/// If every term has degree 2 or 2 or `n` monomials the function can only be
/// bent when it contains `f₀`. If an even number of terms have `p` monomials
/// and the rest have 2 or `n`, it is not bent.
pub fn nonhom_structure(spec: &RotSymSpec) -> Result<Verdict> {
    let n = spec.n();
    let p = require_twice_odd_prime(n)?;
    let counts: Vec<(usize, usize)> = spec
        .terms()
        .iter()
        .map(|t| (t.degree(), t.monomial_count()))
        .collect();
    let two_or_full = |c: usize| c == 2 || c == n;
    if counts.iter().all(|&(d, c)| d == 2 || two_or_full(c)) {
        return Ok(Verdict::RequiresF0);
    }
    let p_cycles = counts.iter().filter(|&&(_, c)| c == p).count();
    let rest_ok = counts.iter().all(|&(_, c)| c == p || two_or_full(c));
    if p_cycles % 2 == 0 && rest_ok {
        Ok(Verdict::NotBent)
    } else {
        Ok(Verdict::Inconclusive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermStructure {
    pub term: String,
    pub degree: usize,
    pub monomials: usize,
    pub kind: CycleKind,
    /// Odd indices in the representative (index 0 counts as even).
    pub odd_indices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub degree: usize,
    pub degree_set: Vec<usize>,
    pub homogeneous: bool,
    /// Short-cycle term count.
    pub r: usize,
    /// Full-cycle term count.
    pub l: usize,
    pub terms: Vec<TermStructure>,
    pub full_cycle_odd_counts: Vec<usize>,
    /// Homogeneous of even degree `d ≥ 4` on `2p` variables with every full
    /// cycle holding between 2 and `d - 2` odd indices: certified not bent.
    pub odd_index_nonbent: bool,
    pub s_f: usize,
    /// Cycle-length verdict, present when `n = 2p`.
    pub verdict: Option<Verdict>,
}

pub fn structure_report(spec: &RotSymSpec) -> StructureReport {
    let n = spec.n();
    let terms: Vec<TermStructure> = spec
        .terms()
        .iter()
        .map(|t| {
            let class = t.classify();
            TermStructure {
                term: t.to_string(),
                degree: t.degree(),
                monomials: class.monomial_count,
                kind: class.kind,
                odd_indices: t.indices().iter().filter(|&&i| i % 2 == 1).count(),
            }
        })
        .collect();
    let r = terms.iter().filter(|t| t.kind == CycleKind::Short).count();
    let full_cycle_odd_counts: Vec<usize> = terms
        .iter()
        .filter(|t| t.kind == CycleKind::Full)
        .map(|t| t.odd_indices)
        .collect();
    let degree = spec.degree();
    let homogeneous = is_homogeneous(spec);
    // A shift by one swaps the count r with d - r, so the band [2, d-2] is
    // the same whichever monomial of the orbit is inspected.
    let odd_index_nonbent = twice_odd_prime(n).is_some()
        && homogeneous
        && degree >= 4
        && degree.is_multiple_of(2)
        && full_cycle_odd_counts
            .iter()
            .all(|&c| (2..=degree - 2).contains(&c));
    StructureReport {
        n,
        degree,
        degree_set: spec.degree_set().into_iter().collect(),
        homogeneous,
        r,
        l: terms.len() - r,
        full_cycle_odd_counts,
        odd_index_nonbent,
        s_f: s_f(spec),
        verdict: nonhom_structure(spec).ok(),
        terms,
    }
}
