//! Bit-packed Boolean functions on `V_n` and their transforms.
//!
//! Inputs are indexed lexicographically: the vector `v_i = (a_0, …, a_{n-1})`
//! has index `i = Σ a_j 2^(n-1-j)`, so variable `x_0` is the most significant
//! bit of the index. Every module in the crate shares this convention.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported variable count.
pub const MIN_VARS: usize = 2;
/// Largest supported variable count (truth table of 32 MiB).
pub const MAX_VARS: usize = 28;

const WORD_BITS: usize = 64;

// Bits whose in-word index has bit `s` set, for the six in-word strides.
const STRIDE_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

pub(crate) fn check_vars(n: usize) -> Result<()> {
    if (MIN_VARS..=MAX_VARS).contains(&n) {
        Ok(())
    } else {
        Err(Error::VariableCount {
            n,
            min: MIN_VARS,
            max: MAX_VARS,
        })
    }
}

/// Bit of a `V_n` index that carries variable `x_var`.
#[inline]
pub fn var_bit(n: usize, var: usize) -> usize {
    n - 1 - var
}

/// Index mask of the monomial `∏_{j ∈ vars} x_j`.
pub fn monomial_mask(n: usize, vars: &[usize]) -> usize {
    vars.iter().fold(0, |acc, &j| acc | 1 << var_bit(n, j))
}

/// Sorted variable list of an index mask.
pub fn mask_vars(n: usize, mask: usize) -> Vec<usize> {
    (0..n).filter(|&j| mask >> var_bit(n, j) & 1 == 1).collect()
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(WORD_BITS)
}

fn tail_mask(n: usize) -> u64 {
    let len = 1usize << n;
    if len >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// In-place binary Möbius transform over a packed table. It is an involution.
fn moebius_in_place(n: usize, words: &mut [u64]) {
    for (s, mask) in STRIDE_MASKS.iter().enumerate() {
        if s >= n {
            break;
        }
        let shift = 1 << s;
        for w in words.iter_mut() {
            *w ^= (*w << shift) & mask;
        }
    }
    let mut stride = 1;
    while stride < words.len() {
        for base in (0..words.len()).step_by(2 * stride) {
            for k in base..base + stride {
                words[k + stride] ^= words[k];
            }
        }
        stride *= 2;
    }
}

/// In-place unnormalised Walsh–Hadamard butterfly.
pub(crate) fn fwht_in_place(data: &mut [i32]) {
    let mut h = 1;
    while h < data.len() {
        for base in (0..data.len()).step_by(2 * h) {
            for k in base..base + h {
                let (a, b) = (data[k], data[k + h]);
                data[k] = a + b;
                data[k + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// A Boolean function `f: V_n → F_2` stored as a packed truth table.
///
/// Bit `i` of the table is `f(v_i)`. The value is immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 8 {
            write!(f, "BooleanFunction(n={}, {})", self.n, self.to_hex())
        } else {
            write!(f, "BooleanFunction(n={}, weight={})", self.n, self.weight())
        }
    }
}

impl BooleanFunction {
    /// The constant zero function.
    pub fn zero(n: usize) -> Result<Self> {
        check_vars(n)?;
        Ok(Self {
            n,
            words: vec![0; word_count(n)],
        })
    }

    /// The constant one function.
    pub fn one(n: usize) -> Result<Self> {
        check_vars(n)?;
        let mut words = vec![u64::MAX; word_count(n)];
        words[0] &= tail_mask(n);
        Ok(Self { n, words })
    }

    /// Builds a function by evaluating `f` at every index.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_vars(n)?;
        let mut words = vec![0u64; word_count(n)];
        for i in 0..1usize << n {
            if f(i) {
                words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        Ok(Self { n, words })
    }

    /// Builds a function from packed words (bit `i % 64` of word `i / 64` is `f(v_i)`).
    pub fn from_words(n: usize, mut words: Vec<u64>) -> Result<Self> {
        check_vars(n)?;
        if words.len() != word_count(n) {
            return Err(Error::TableLength {
                expected: 1 << n,
                actual: words.len() * WORD_BITS,
            });
        }
        if words[0] & !tail_mask(n) != 0 {
            return Err(Error::TableLength {
                expected: 1 << n,
                actual: WORD_BITS,
            });
        }
        words[0] &= tail_mask(n);
        Ok(Self { n, words })
    }

    /// The coordinate function `x_var`.
    pub fn variable(n: usize, var: usize) -> Result<Self> {
        check_vars(n)?;
        if var >= n {
            return Err(Error::IndexOutOfRange { index: var, n });
        }
        let bit = var_bit(n, var);
        Self::from_fn(n, |i| i >> bit & 1 == 1)
    }

    /// The linear function `x ↦ w·x`.
    pub fn linear(n: usize, w: usize) -> Result<Self> {
        check_vars(n)?;
        if w >> n != 0 {
            return Err(Error::IndexOutOfRange { index: w, n });
        }
        Self::from_fn(n, |i| (i & w).count_ones() & 1 == 1)
    }

    /// Evaluates the algebraic normal form with a fast Möbius transform.
    pub fn from_anf(anf: &AnfForm) -> Result<Self> {
        check_vars(anf.n)?;
        let mut words = vec![0u64; word_count(anf.n)];
        for m in &anf.monomials {
            let mask = monomial_mask(anf.n, m);
            words[mask / WORD_BITS] ^= 1 << (mask % WORD_BITS);
        }
        moebius_in_place(anf.n, &mut words);
        Ok(Self { n: anf.n, words })
    }

    /// Evaluates an ANF given as a packed coefficient table (bit `m` is the
    /// coefficient of the monomial with index mask `m`).
    pub(crate) fn from_anf_words(n: usize, mut coefficients: Vec<u64>) -> Result<Self> {
        check_vars(n)?;
        moebius_in_place(n, &mut coefficients);
        Self::from_words(n, coefficients)
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of truth-table entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Packed truth-table words.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `f(v_i)`.
    #[inline]
    pub fn value(&self, i: usize) -> bool {
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    /// Sign value `(-1)^f(v_i)`.
    #[inline]
    pub fn sign(&self, i: usize) -> i32 {
        if self.value(i) {
            -1
        } else {
            1
        }
    }

    /// Pointwise XOR.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self { n: self.n, words })
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::MismatchedVariables {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// Hamming weight, the number of ones in the truth table.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// `d(f, g) = wt(f ⊕ g)`.
    pub fn hamming_distance(&self, other: &Self) -> Result<u64> {
        self.same_vars(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a ^ b).count_ones()))
            .sum())
    }

    /// Index masks of the ANF monomials, ascending.
    pub(crate) fn anf_masks(&self) -> Vec<usize> {
        let mut words = self.words.clone();
        moebius_in_place(self.n, &mut words);
        let mut masks = Vec::new();
        for (k, &w) in words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                masks.push(k * WORD_BITS + b);
                w &= w - 1;
            }
        }
        masks
    }

    /// Algebraic normal form (inverse Möbius transform).
    pub fn to_anf(&self) -> AnfForm {
        AnfForm {
            n: self.n,
            monomials: self
                .anf_masks()
                .into_iter()
                .map(|m| mask_vars(self.n, m))
                .collect(),
        }
    }

    /// Algebraic degree; both constants have degree 0.
    pub fn degree(&self) -> usize {
        self.anf_masks()
            .into_iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Spectrum of `f` itself: `W(f)(w) = Σ_x f(x) (-1)^{w·x}`.
    pub fn walsh_plain(&self) -> WalshSpectrum {
        let mut data: Vec<i32> = (0..self.len()).map(|i| i32::from(self.value(i))).collect();
        fwht_in_place(&mut data);
        WalshSpectrum {
            n: self.n,
            coefficients: data,
        }
    }

    /// Spectrum of the sign function `(-1)^{f(x)}`.
    pub fn walsh_sign(&self) -> WalshSpectrum {
        let mut data: Vec<i32> = (0..self.len()).map(|i| self.sign(i)).collect();
        fwht_in_place(&mut data);
        WalshSpectrum {
            n: self.n,
            coefficients: data,
        }
    }

    /// Minimum distance to the affine functions, `2^{n-1} - max|W_f̂| / 2`.
    pub fn nonlinearity(&self) -> u64 {
        let max = u64::from(self.walsh_sign().max_abs());
        (1u64 << (self.n - 1)) - max / 2
    }

    /// Whether every sign-spectrum coefficient is `±2^{n/2}`. Always false for odd `n`.
    pub fn is_bent(&self) -> bool {
        if self.n % 2 == 1 {
            return false;
        }
        // A bent function has weight 2^{n-1} ± 2^{n/2-1}; reject early before the transform.
        let half = 1u64 << (self.n - 1);
        let dev = 1u64 << (self.n / 2 - 1);
        let wt = self.weight();
        if wt != half - dev && wt != half + dev {
            return false;
        }
        let target = 1u32 << (self.n / 2);
        self.walsh_sign()
            .coefficients
            .iter()
            .all(|c| c.unsigned_abs() == target)
    }

    /// Lowercase hex of the table read as the bit string `f(v_0) f(v_1) …`,
    /// four entries per digit, most significant bit first.
    pub fn to_hex(&self) -> String {
        let digits = self.len() / 4;
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let nibble = (0..4).fold(0u32, |acc, b| acc << 1 | u32::from(self.value(4 * d + b)));
            s.push(char::from_digit(nibble, 16).expect("nibble < 16"));
        }
        s
    }

    /// Parses the format written by [`BooleanFunction::to_hex`]; `n` is inferred from the length.
    pub fn from_hex(hex: &str) -> Result<Self> {
        let hex = hex.trim();
        let hex = hex.strip_prefix("0x").unwrap_or(hex);
        let bits = hex.len() * 4;
        if !bits.is_power_of_two() || bits < 4 {
            return Err(Error::Parse(format!(
                "hex table of {} digits is not 2^n/4 for any n",
                hex.len()
            )));
        }
        let n = bits.trailing_zeros() as usize;
        check_vars(n)?;
        let nibbles = hex
            .chars()
            .map(|c| {
                c.to_digit(16)
                    .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::from_fn(n, |i| nibbles[i / 4] >> (3 - i % 4) & 1 == 1)
    }

    /// Raw little-endian bytes: bit `j` of byte `k` is `f(v_{8k+j})`.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let len = self.len().div_ceil(8);
        self.words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(len)
            .collect()
    }

    /// Inverse of [`BooleanFunction::to_le_bytes`].
    pub fn from_le_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        check_vars(n)?;
        let len = (1usize << n).div_ceil(8);
        if bytes.len() != len {
            return Err(Error::TableLength {
                expected: 1 << n,
                actual: bytes.len() * 8,
            });
        }
        let mut words = vec![0u64; word_count(n)];
        for (k, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            words[k] = u64::from_le_bytes(buf);
        }
        Self::from_words(n, words)
    }
}

/// Algebraic normal form: a set of monomials, each a sorted list of variable
/// indices. The empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnfForm {
    n: usize,
    monomials: BTreeSet<Vec<usize>>,
}

impl AnfForm {
    /// Sums the given monomials over `F_2`; a monomial listed twice cancels.
    pub fn new<I, M>(n: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: IntoIterator<Item = usize>,
    {
        check_vars(n)?;
        let mut set = BTreeSet::new();
        for m in monomials {
            let vars: BTreeSet<usize> = m.into_iter().collect();
            if let Some(&bad) = vars.iter().find(|&&j| j >= n) {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
            let vars: Vec<usize> = vars.into_iter().collect();
            if !set.remove(&vars) {
                set.insert(vars);
            }
        }
        Ok(Self { n, monomials: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &BTreeSet<Vec<usize>> {
        &self.monomials
    }

    /// Largest monomial size; 0 for constants.
    pub fn degree(&self) -> usize {
        self.monomials.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Evaluates the polynomial at `v_i` directly, one monomial at a time.
    pub fn evaluate(&self, i: usize) -> bool {
        self.monomials
            .iter()
            .filter(|m| m.iter().all(|&j| i >> var_bit(self.n, j) & 1 == 1))
            .count()
            % 2
            == 1
    }

    /// JSON form: the sorted list of sorted index lists.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.monomials).expect("index lists serialize")
    }

    pub fn from_json(n: usize, json: &str) -> Result<Self> {
        let lists: Vec<Vec<usize>> =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(n, lists)
    }
}

/// Walsh spectrum indexed by `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshSpectrum {
    pub n: usize,
    pub coefficients: Vec<i32>,
}

impl WalshSpectrum {
    pub fn max_abs(&self) -> u32 {
        self.coefficients
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `Σ_w W(w)²`, equal to `2^{2n}` for a sign spectrum.
    pub fn energy(&self) -> u64 {
        self.coefficients
            .iter()
            .map(|&c| (i64::from(c) * i64::from(c)) as u64)
            .sum()
    }
}

/// `f₀ = ⊕_{i<m} x_i x_{m+i}` on `n = 2m` variables.
pub fn f0(n: usize) -> Result<BooleanFunction> {
    check_vars(n)?;
    if n % 2 == 1 {
        return Err(Error::Config(format!(
            "f0 needs an even variable count, got {n}"
        )));
    }
    let m = n / 2;
    BooleanFunction::from_anf(&AnfForm::new(n, (0..m).map(|i| [i, m + i]))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anf(n: usize, ms: &[&[usize]]) -> AnfForm {
        AnfForm::new(n, ms.iter().map(|m| m.iter().copied())).unwrap()
    }

    #[test]
    fn constant_one_from_empty_monomial() {
        let f = BooleanFunction::from_anf(&anf(2, &[&[]])).unwrap();
        assert_eq!(f, BooleanFunction::one(2).unwrap());
        assert_eq!(f.to_hex(), "f");
        assert_eq!(f.to_anf(), anf(2, &[&[]]));
    }

    #[test]
    fn xor_of_two_variables() {
        let f = BooleanFunction::from_anf(&anf(2, &[&[0], &[1]])).unwrap();
        let values: Vec<bool> = (0..4).map(|i| f.value(i)).collect();
        assert_eq!(values, [false, true, true, false]);
    }

    #[test]
    fn f0_small_weights() {
        assert_eq!(f0(4).unwrap().weight(), 6);
        assert_eq!(f0(6).unwrap().weight(), 28);
        let anf4 = anf(4, &[&[0, 2], &[1, 3]]);
        let f = BooleanFunction::from_anf(&anf4).unwrap();
        assert_eq!(f.to_anf(), anf4);
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn degrees_of_constants_and_cubic() {
        assert_eq!(BooleanFunction::zero(3).unwrap().degree(), 0);
        assert_eq!(BooleanFunction::one(3).unwrap().degree(), 0);
        let f = BooleanFunction::from_fn(3, |i| i == 7).unwrap();
        assert_eq!(f.degree(), 3);
    }

    #[test]
    fn walsh_of_constants() {
        let z = BooleanFunction::zero(2).unwrap();
        assert!(z.walsh_plain().coefficients.iter().all(|&c| c == 0));
        assert_eq!(z.walsh_sign().coefficients, [4, 0, 0, 0]);
        let one = BooleanFunction::one(2).unwrap();
        assert_eq!(one.walsh_plain().coefficients, [4, 0, 0, 0]);
        assert_eq!(f0(4).unwrap().walsh_plain().coefficients[0], 6);
    }

    #[test]
    fn f0_is_bent_and_full_cycle_is_not() {
        let f = f0(4).unwrap();
        assert!(f.walsh_sign().coefficients.iter().all(|c| c.abs() == 4));
        assert_eq!(f.nonlinearity(), 6);
        assert!(f0(6).unwrap().is_bent());
        assert_eq!(f0(6).unwrap().nonlinearity(), 28);

        let cyc =
            BooleanFunction::from_anf(&anf(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])).unwrap();
        // 16-point direct evaluation of the character sums.
        let direct: Vec<i32> = (0..16)
            .map(|w: usize| {
                (0..16usize)
                    .map(|x| {
                        let e = cyc.value(x) as u32 + (w & x).count_ones();
                        if e.is_multiple_of(2) {
                            1
                        } else {
                            -1
                        }
                    })
                    .sum()
            })
            .collect();
        assert_eq!(cyc.walsh_sign().coefficients, direct);
        assert!(direct.iter().any(|c| c.abs() != 4));
        assert!(!cyc.is_bent());
    }

    #[test]
    fn affine_functions_have_zero_nonlinearity() {
        for w in 0..16 {
            let l = BooleanFunction::linear(4, w).unwrap();
            assert_eq!(l.nonlinearity(), 0);
            let c = l.xor(&BooleanFunction::one(4).unwrap()).unwrap();
            assert_eq!(c.nonlinearity(), 0);
        }
        assert!(!BooleanFunction::zero(4).unwrap().is_bent());
        assert!(!BooleanFunction::from_fn(3, |i| i == 3).unwrap().is_bent());
    }

    #[test]
    fn distances() {
        let z = BooleanFunction::zero(3).unwrap();
        let o = BooleanFunction::one(3).unwrap();
        assert_eq!(z.hamming_distance(&z).unwrap(), 0);
        assert_eq!(z.hamming_distance(&o).unwrap(), 8);
        let f = f0(4).unwrap();
        let g = BooleanFunction::from_anf(&anf(4, &[&[0, 2], &[1, 3], &[2, 0], &[3, 1]]));
        // x0x2 listed twice cancels, so g is the zero function.
        assert_eq!(g.unwrap(), BooleanFunction::zero(4).unwrap());
        let h = BooleanFunction::from_anf(&anf(4, &[&[0, 2], &[1, 3], &[2, 0]])).unwrap();
        let oracle = (0..16).filter(|&i| f.value(i) != h.value(i)).count() as u64;
        assert_eq!(f.hamming_distance(&h).unwrap(), oracle);
        assert!(matches!(
            f.hamming_distance(&z),
            Err(Error::MismatchedVariables { left: 4, right: 3 })
        ));
    }

    #[test]
    fn variable_bit_order() {
        // x_0 is the most significant index bit.
        let x0 = BooleanFunction::variable(3, 0).unwrap();
        assert_eq!(x0.to_hex(), "0f");
        let x2 = BooleanFunction::variable(3, 2).unwrap();
        assert_eq!(x2.to_hex(), "55");
    }

    #[test]
    fn hex_and_bytes() {
        let f = f0(4).unwrap();
        assert_eq!(BooleanFunction::from_hex(&f.to_hex()).unwrap(), f);
        assert_eq!(
            BooleanFunction::from_le_bytes(4, &f.to_le_bytes()).unwrap(),
            f
        );
        let g = BooleanFunction::from_fn(2, |i| i == 0).unwrap();
        assert_eq!(g.to_hex(), "8");
        assert_eq!(g.to_le_bytes(), [1]);
        assert!(BooleanFunction::from_hex("abc").is_err());
        assert!(BooleanFunction::from_hex("zz").is_err());
        assert!(BooleanFunction::from_le_bytes(2, &[0x10]).is_err());
    }

    #[test]
    fn anf_json_is_sorted() {
        let a = anf(4, &[&[3, 1], &[2, 0]]);
        assert_eq!(a.to_json(), "[[0,2],[1,3]]");
        assert_eq!(AnfForm::from_json(4, "[[1,3],[0,2]]").unwrap(), a);
        assert!(AnfForm::new(4, [[0, 4]]).is_err());
    }

    #[test]
    fn variable_count_guard() {
        assert!(BooleanFunction::zero(1).is_err());
        assert!(BooleanFunction::zero(29).is_err());
        assert!(f0(5).is_err());
    }
}
