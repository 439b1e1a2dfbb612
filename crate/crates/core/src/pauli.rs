//! Weighted sums of Pauli strings with exact symbolic products.
//!
//! A string on `L` sites is stored as two bitmasks: bit `j` of `x` marks an
//! `X` component on site `j`, bit `j` of `z` a `Z` component, and both bits
//! together mark `Y`. Phases never live inside a string; they are carried by
//! the coefficient. Site 0 is the least significant bit of a basis index, and
//! `Z` acts as `+1` on bit value 0.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, LinearOperator};

/// Coefficients with modulus at or below this value are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Largest chain length that may be expanded into a dense matrix.
pub const DENSE_MAX_LEN: usize = 14;

/// Largest supported chain length (bitmask width).
pub const MAX_LEN: usize = 64;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' | '.' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of Pauli letters on a chain of fixed length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    len: usize,
    x: u64,
    z: u64,
}

fn check_len(len: usize) -> Result<()> {
    if (1..=MAX_LEN).contains(&len) {
        Ok(())
    } else {
        Err(Error::LengthOutOfRange {
            len,
            min: 1,
            max: MAX_LEN,
        })
    }
}

impl PauliString {
    pub fn identity(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(Self { len, x: 0, z: 0 })
    }

    /// Letters listed site 0 first, e.g. `"XZY"`.
    pub fn from_letters(letters: &str) -> Result<Self> {
        let len = letters.chars().count();
        let mut s = Self::identity(len)?;
        for (site, ch) in letters.chars().enumerate() {
            let p = Pauli::from_symbol(ch)
                .ok_or_else(|| Error::Parse(format!("unknown Pauli letter {ch:?}")))?;
            s = s.with(site, p);
        }
        Ok(s)
    }

    /// String with the given letters placed on sites; sites are reduced
    /// modulo the chain length (periodic boundary). Placing two letters on
    /// the same site is rejected because it would require a phase.
    pub fn from_sites(len: usize, sites: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(len)?;
        for &(site, p) in sites {
            let site = site % len;
            if s.letter(site) != Pauli::I {
                return Err(Error::InvalidArgument(format!(
                    "site {site} assigned twice"
                )));
            }
            s = s.with(site, p);
        }
        Ok(s)
    }

    /// Copy with site `site` replaced by `p`.
    pub fn with(mut self, site: usize, p: Pauli) -> Self {
        let bit = 1u64 << site;
        let (xb, zb) = p.bits();
        self.x = (self.x & !bit) | if xb { bit } else { 0 };
        self.z = (self.z & !bit) | if zb { bit } else { 0 };
        self
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn letter(&self, site: usize) -> Pauli {
        Pauli::from_bits(self.x >> site & 1 == 1, self.z >> site & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// `self * other = phase * result`.
    pub fn multiply(&self, other: &Self) -> (Complex64, Self) {
        debug_assert_eq!(self.len, other.len);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let result = Self {
            len: self.len,
            x,
            z,
        };
        // P(x,z) = i^{|x&z|} X^x Z^z, and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1
        let exponent = self.y_count() as i64 + other.y_count() as i64 - result.y_count() as i64
            + 2 * (self.z & other.x).count_ones() as i64;
        (I_POWERS[exponent.rem_euclid(4) as usize], result)
    }

    /// Whether the two strings commute.
    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Action on a basis state: `P|b⟩ = phase |b ^ x⟩`.
    #[inline]
    fn act(&self, basis: u64) -> (Complex64, u64) {
        let sign = if (basis & self.z).count_ones().is_multiple_of(2) {
            0
        } else {
            2
        };
        (
            I_POWERS[(self.y_count() as usize + sign) % 4],
            basis ^ self.x,
        )
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 0..self.len {
            write!(f, "{}", self.letter(site).symbol())?;
        }
        Ok(())
    }
}

/// Weighted sum of Pauli strings, canonically pruned.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    len: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(Self {
            len,
            terms: BTreeMap::new(),
        })
    }

    pub fn identity(len: usize) -> Result<Self> {
        let mut s = Self::zero(len)?;
        s.add_term(PauliString::identity(len)?, Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn from_terms(
        len: usize,
        terms: impl IntoIterator<Item = (PauliString, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(len)?;
        for (p, c) in terms {
            s.add_term(p, c)?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Number of stored (non-pruned) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    /// Accumulates `coeff * s`, pruning the entry if it cancels.
    pub fn add_term(&mut self, s: PauliString, coeff: Complex64) -> Result<()> {
        self.check_same_len(s.len)?;
        let entry = self.terms.entry(s).or_default();
        *entry += coeff;
        if entry.norm() <= PRUNE_THRESHOLD {
            self.terms.remove(&s);
        }
        Ok(())
    }

    fn check_same_len(&self, other: usize) -> Result<()> {
        if self.len == other {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                left: self.len,
                right: other,
            })
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > PRUNE_THRESHOLD);
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self {
            len: self.len,
            terms: self.terms.iter().map(|(s, c)| (*s, c * factor)).collect(),
        };
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other.len)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, *c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Exact product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other.len)?;
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (p, cp) in &self.terms {
            for (q, cq) in &other.terms {
                let (phase, r) = p.multiply(q);
                *acc.entry(r).or_default() += cp * cq * phase;
            }
        }
        let mut out = Self {
            len: self.len,
            terms: acc,
        };
        out.prune();
        Ok(out)
    }

    /// Exact commutator `self * other − other * self`.
    ///
    /// Commuting string pairs are skipped, so cancellations are structural;
    /// anticommuting pairs contribute `2 p q`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other.len)?;
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (p, cp) in &self.terms {
            for (q, cq) in &other.terms {
                if p.commutes_with(q) {
                    continue;
                }
                let (phase, r) = p.multiply(q);
                *acc.entry(r).or_default() += cp * cq * phase * 2.0;
            }
        }
        let mut out = Self {
            len: self.len,
            terms: acc,
        };
        out.prune();
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            len: self.len,
            terms: self.terms.iter().map(|(s, c)| (*s, c.conj())).collect(),
        }
    }

    /// Every Pauli string is Hermitian, so the sum is Hermitian exactly when
    /// all coefficients are real.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() <= PRUNE_THRESHOLD)
    }

    /// Dense `2^L x 2^L` matrix, for `L <= 14`.
    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        if self.len > DENSE_MAX_LEN {
            return Err(Error::LengthOutOfRange {
                len: self.len,
                min: 1,
                max: DENSE_MAX_LEN,
            });
        }
        let dim = 1usize << self.len;
        let mut m = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
        for (s, c) in &self.terms {
            for col in 0..dim as u64 {
                let (phase, row) = s.act(col);
                m[(row as usize, col as usize)] += c * phase;
            }
        }
        ComplexMatrix::new(m)
    }

    /// `Σ |c_s|`, an upper bound on the operator norm since each string has norm 1.
    pub fn triangle_norm_bound(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// `sqrt(Σ |c_s|²) = ‖P‖_F / sqrt(2^L)`, a lower bound on the operator norm
    /// by orthogonality of Pauli strings under the trace inner product.
    pub fn frobenius_lower_bound(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Parses the text produced by `Display`; blank lines and `#` comments
    /// are skipped.
    pub fn parse_with_len(text: &str, len: Option<usize>) -> Result<Self> {
        let mut out: Option<Self> = len.map(Self::zero).transpose()?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if fields.len() != 3 {
                return Err(err("expected `<re> <im> <letters>`"));
            }
            let re: f64 = fields[0].parse().map_err(|_| err("bad real part"))?;
            let im: f64 = fields[1].parse().map_err(|_| err("bad imaginary part"))?;
            if !(re.is_finite() && im.is_finite()) {
                return Err(err("non-finite coefficient"));
            }
            let s = PauliString::from_letters(fields[2]).map_err(|e| err(&e.to_string()))?;
            let sum = match out.as_mut() {
                Some(sum) => sum,
                None => out.insert(Self::zero(s.len())?),
            };
            sum.add_term(s, Complex64::new(re, im))
                .map_err(|e| err(&e.to_string()))?;
        }
        out.ok_or_else(|| Error::Parse("no terms and no length given".into()))
    }
}

impl fmt::Display for PauliSum {
    /// One term per line: `<coeff_re> <coeff_im> <letters>`, site 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in &self.terms {
            writeln!(f, "{} {} {}", c.re, c.im, s)?;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_len(s, None)
    }
}

impl LinearOperator for PauliSum {
    fn dim(&self) -> usize {
        1usize << self.len
    }

    fn apply_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for (s, c) in &self.terms {
            for (b, &xb) in x.iter().enumerate() {
                let (phase, target) = s.act(b as u64);
                out[target as usize] += c * phase * xb;
            }
        }
    }

    fn apply_adjoint_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for (s, c) in &self.terms {
            let cc = c.conj();
            for (b, &xb) in x.iter().enumerate() {
                let (phase, target) = s.act(b as u64);
                out[target as usize] += cc * phase * xb;
            }
        }
    }
}

/// `Σ_j coeff · P_j P_{j+1}` over all bonds of a periodic chain.
pub fn periodic_bond_sum(len: usize, coeff: f64, letter: Pauli) -> Result<PauliSum> {
    let mut sum = PauliSum::zero(len)?;
    for j in 0..len {
        let s = PauliString::from_sites(len, &[(j, letter), (j + 1, letter)])?;
        sum.add_term(s, Complex64::new(coeff, 0.0))?;
    }
    Ok(sum)
}
