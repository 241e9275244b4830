//! Rotation orbits on `V_n` and the short algebraic normal form (SANF) of
//! rotation symmetric functions.
//!
//! The cyclic shift `ρ(x_0, …, x_{n-1}) = (x_1, …, x_{n-1}, x_0)` acts on an
//! index as a left rotation of its `n`-bit value, which is the same as
//! doubling modulo `2^n - 1` for every index except the all-ones vector.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::boolfn::{check_vars, mask_vars, monomial_mask, AnfForm, BooleanFunction};
use crate::error::{Error, Result};

/// Index of `ρ^k(v_i)`.
#[inline]
pub fn rotate(i: usize, k: usize, n: usize) -> usize {
    let k = k % n;
    let full = (1usize << n) - 1;
    if k == 0 {
        return i & full;
    }
    ((i << k) | (i >> (n - k))) & full
}

/// Size of the orbit of `v_i`, the least `k ≥ 1` with `ρ^k(v_i) = v_i`.
pub fn orbit_size(i: usize, n: usize) -> usize {
    (1..=n).find(|&k| rotate(i, k, n) == i).unwrap_or(n)
}

/// Least index in the orbit of `v_i`.
pub fn canonical_index(i: usize, n: usize) -> usize {
    (0..n).map(|k| rotate(i, k, n)).min().unwrap_or(i)
}

/// The orbit `O_n(v)` of a vector under all cyclic shifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub n: usize,
    /// `v, ρ(v), ρ²(v), …` up to the first repeat.
    pub members: Vec<usize>,
    pub size: usize,
}

impl Orbit {
    pub fn representative(&self) -> usize {
        self.members.iter().copied().min().unwrap_or(0)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }
}

pub fn orbit_of(i: usize, n: usize) -> Orbit {
    let size = orbit_size(i, n);
    Orbit {
        n,
        members: (0..size).map(|k| rotate(i, k, n)).collect(),
        size,
    }
}

fn representative_cache() -> &'static RwLock<HashMap<usize, Arc<Vec<usize>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<usize>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Least member of every orbit of `V_n`, ascending. Results are cached per `n`.
pub fn orbit_representatives(n: usize) -> Result<Arc<Vec<usize>>> {
    check_vars(n)?;
    if let Some(reps) = representative_cache().read().expect("cache lock").get(&n) {
        return Ok(Arc::clone(reps));
    }
    let len = 1usize << n;
    let mut visited = vec![0u64; len.div_ceil(64)];
    let mut reps = Vec::new();
    for i in 0..len {
        if visited[i / 64] >> (i % 64) & 1 == 1 {
            continue;
        }
        reps.push(i);
        let mut j = i;
        loop {
            visited[j / 64] |= 1 << (j % 64);
            j = rotate(j, 1, n);
            if j == i {
                break;
            }
        }
    }
    let reps = Arc::new(reps);
    representative_cache()
        .write()
        .expect("cache lock")
        .insert(n, Arc::clone(&reps));
    Ok(reps)
}

/// Number of orbits of each size, from the count of primitive binary
/// necklaces: `(1/d) Σ_{e | d} μ(d/e) 2^e` orbits of size `d` for each `d | n`.
pub fn orbit_counts_by_size(n: usize) -> Result<BTreeMap<usize, u64>> {
    check_vars(n)?;
    let divisors = |m: usize| (1..=m).filter(move |e| m.is_multiple_of(*e));
    Ok(divisors(n)
        .map(|d| {
            let total: i64 = divisors(d).map(|e| moebius_mu(d / e) * (1i64 << e)).sum();
            (d, (total / d as i64) as u64)
        })
        .collect())
}

fn moebius_mu(mut m: usize) -> i64 {
    let mut mu = 1;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            m /= q;
            if m.is_multiple_of(q) {
                return 0;
            }
            mu = -mu;
        }
        q += 1;
    }
    if m > 1 {
        mu = -mu;
    }
    mu
}

/// `v_i ~ v_j`, decided by doubling modulo `2^n - 1`.
///
/// The all-ones index is congruent to 0 modulo `2^n - 1`, so it is compared
/// directly instead.
pub fn sim_equivalent(i: usize, j: usize, n: usize) -> bool {
    let modulus = (1u64 << n) - 1;
    let (i, j) = (i as u64, j as u64);
    if i == modulus || j == modulus {
        return i == j;
    }
    let mut x = i;
    for _ in 1..=n {
        x = (2 * x) % modulus;
        if x == j {
            return true;
        }
    }
    false
}

/// `v_a ~ v_b` agrees with `v_{2^n-1-a} ~ v_{2^n-1-b}`. Always true.
pub fn complement_equiv_check(a: usize, b: usize, n: usize) -> bool {
    let top = (1usize << n) - 1;
    sim_equivalent(a, b, n) == sim_equivalent(top - a, top - b, n)
}

/// Whether `f(v_i) = f(ρ(v_i))` for every `i`.
pub fn is_rotation_symmetric(f: &BooleanFunction) -> bool {
    let n = f.n();
    (0..f.len()).all(|i| f.value(i) == f.value(rotate(i, 1, n)))
}

/// Short-cycle (fewer than `n` monomials) or full-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    Short,
    Full,
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CycleKind::Short => "short",
            CycleKind::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleClass {
    pub monomial_count: usize,
    pub kind: CycleKind,
}

/// Orbit representative `x_0 x_{i_2} ⋯ x_{i_l}` of a monomial rotation
/// symmetric function: the lexicographically least rotation containing 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SanfTerm {
    n: usize,
    indices: Vec<usize>,
}

impl Ord for SanfTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.indices.len(), &self.indices).cmp(&(
            other.n,
            other.indices.len(),
            &other.indices,
        ))
    }
}

impl PartialOrd for SanfTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SanfTerm {
    /// Canonicalises any nonempty index set to its orbit representative.
    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_vars(n)?;
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Parse(
                "a SANF term needs at least one variable".into(),
            ));
        }
        if let Some(&bad) = set.iter().find(|&&j| j >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        let indices = set
            .iter()
            .map(|&s| {
                let mut r: Vec<usize> = set.iter().map(|&x| (x + n - s) % n).collect();
                r.sort_unstable();
                r
            })
            .min()
            .expect("nonempty");
        Ok(Self { n, indices })
    }

    /// Parses `x0x2x5` or `0,2,5`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let parse_index = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad variable index {s:?} in term {text:?}")))
        };
        let indices = if text.starts_with('x') {
            text.split('x')
                .skip(1)
                .map(parse_index)
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(',')
                .map(parse_index)
                .collect::<Result<Vec<_>>>()?
        };
        let unique: BTreeSet<usize> = indices.iter().copied().collect();
        if unique.len() != indices.len() {
            return Err(Error::Parse(format!("repeated variable in term {text:?}")));
        }
        Self::new(n, indices)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    /// Characteristic vector of the index set, as a `V_n` index.
    pub fn mask(&self) -> usize {
        monomial_mask(self.n, &self.indices)
    }

    /// Number of distinct monomials in the rotation closure.
    pub fn monomial_count(&self) -> usize {
        orbit_size(self.mask(), self.n)
    }

    pub fn classify(&self) -> CycleClass {
        let monomial_count = self.monomial_count();
        CycleClass {
            monomial_count,
            kind: if monomial_count == self.n {
                CycleKind::Full
            } else {
                CycleKind::Short
            },
        }
    }

    /// Index masks of every monomial in the orbit.
    pub fn monomial_masks(&self) -> Vec<usize> {
        let mask = self.mask();
        (0..self.monomial_count())
            .map(|k| rotate(mask, k, self.n))
            .collect()
    }

    /// The ANF of the monomial rotation symmetric function this term generates.
    pub fn expand(&self) -> AnfForm {
        AnfForm::new(
            self.n,
            self.monomial_masks()
                .into_iter()
                .map(|m| mask_vars(self.n, m)),
        )
        .expect("rotations stay in range")
    }

    pub fn build(&self) -> BooleanFunction {
        BooleanFunction::from_anf(&self.expand()).expect("n already checked")
    }
}

impl fmt::Display for SanfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.indices {
            write!(f, "x{i}")?;
        }
        Ok(())
    }
}

/// SANF of a rotation symmetric function: a constant bit plus a set of
/// distinct orbit representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RotSymSpec {
    n: usize,
    constant: bool,
    terms: BTreeSet<SanfTerm>,
}

impl RotSymSpec {
    /// Rejects terms of the wrong `n` and terms that canonicalise to the same orbit.
    pub fn new(
        n: usize,
        constant: bool,
        terms: impl IntoIterator<Item = SanfTerm>,
    ) -> Result<Self> {
        check_vars(n)?;
        let mut set = BTreeSet::new();
        for t in terms {
            if t.n != n {
                return Err(Error::MismatchedVariables {
                    left: n,
                    right: t.n,
                });
            }
            let shown = t.to_string();
            if !set.insert(t) {
                return Err(Error::DuplicateTerm(shown));
            }
        }
        Ok(Self {
            n,
            constant,
            terms: set,
        })
    }

    /// Parses terms joined by `+`. A bare `1` is the constant and a bare `0`
    /// (or an empty string) is the zero function.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        check_vars(n)?;
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return Self::new(n, false, []);
        }
        let mut constant = false;
        let mut terms = Vec::new();
        for part in compact.split('+') {
            match part {
                "" => return Err(Error::Parse(format!("empty term in {text:?}"))),
                "1" if constant => return Err(Error::DuplicateTerm("1".into())),
                "1" => constant = true,
                _ => terms.push(SanfTerm::parse(n, part)?),
            }
        }
        Self::new(n, constant, terms)
    }

    /// Recovers the SANF of a rotation symmetric function.
    pub fn from_function(f: &BooleanFunction) -> Result<Self> {
        if !is_rotation_symmetric(f) {
            return Err(Error::NotRotationSymmetric);
        }
        let n = f.n();
        let mut constant = false;
        let mut terms = BTreeSet::new();
        for m in f.anf_masks() {
            if m == 0 {
                constant = true;
            } else if canonical_index(m, n) == m {
                // One monomial per orbit: the one with the least mask.
                terms.insert(SanfTerm::new(n, mask_vars(n, m))?);
            }
        }
        Ok(Self { n, constant, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn terms(&self) -> &BTreeSet<SanfTerm> {
        &self.terms
    }

    pub fn contains(&self, term: &SanfTerm) -> bool {
        self.terms.contains(term)
    }

    /// Whether `x_0 x_{n/2}` (the SANF of `f₀`) is one of the terms.
    pub fn contains_f0(&self) -> bool {
        self.n.is_multiple_of(2) && self.terms.iter().any(|t| t.indices == [0, self.n / 2])
    }

    /// Degrees of the nonconstant terms.
    pub fn degree_set(&self) -> BTreeSet<usize> {
        self.terms.iter().map(SanfTerm::degree).collect()
    }

    pub fn degree(&self) -> usize {
        self.degree_set().into_iter().max().unwrap_or(0)
    }

    /// Full ANF: every rotation of every term, plus the constant.
    pub fn expand(&self) -> AnfForm {
        let mut monomials: Vec<Vec<usize>> = self
            .terms
            .iter()
            .flat_map(|t| t.monomial_masks())
            .map(|m| mask_vars(self.n, m))
            .collect();
        if self.constant {
            monomials.push(Vec::new());
        }
        AnfForm::new(self.n, monomials).expect("rotations stay in range")
    }

    /// Truth table of the constant XOR every expanded term.
    pub fn build(&self) -> BooleanFunction {
        BooleanFunction::from_anf(&self.expand()).expect("n already checked")
    }
}

impl fmt::Display for RotSymSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.constant {
            parts.push("1".into());
        }
        parts.extend(self.terms.iter().map(ToString::to_string));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}
