//! Exact truncated multivariate power series over tagged coefficient rings.
//!
//! Series are sparse maps from monomials to nonzero coefficients, truncated by
//! total degree.  Iteration order is graded lexicographic (ascending total
//! degree, then descending exponent vector), which is also the canonical text
//! and JSON term order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("constant term {0} is not a unit in {1}")]
    NonUnitConstant(String, Ring),
    #[error("nonzero constant term where zero is required")]
    NonzeroConstantTerm,
    #[error("coefficient {coeff} of monomial {monomial} does not reduce into {target}")]
    NonReducible {
        coeff: String,
        monomial: String,
        target: Ring,
    },
    #[error("exp_series requires the Rationals coefficient ring")]
    ExpNeedsRationals,
    #[error("{0} is not invertible in {1}")]
    NonUnit(String, Ring),
    #[error("substitution image count {given} does not match variable count {expected}")]
    BadSubstitution { given: usize, expected: usize },
    #[error("exact division by {0} failed")]
    InexactDivision(String),
}

/// Tag selecting the exact arithmetic of a coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    /// Z
    Integers,
    /// Q
    Rationals,
    /// Z/m, canonical residues in [0, m)
    IntegersMod(u64),
    /// F_p, canonical residues in [0, p)
    PrimeField(u64),
}

impl Ring {
    pub fn modulus(&self) -> Option<u64> {
        match self {
            Ring::IntegersMod(m) | Ring::PrimeField(m) => Some(*m),
            _ => None,
        }
    }

    /// Characteristic-p prime fields and Z/p^m share residue arithmetic; this
    /// reports whether two tags may be mixed in a binary operation.
    pub fn compatible(&self, other: &Ring) -> bool {
        self == other
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Ring::Rationals => Coeff::Rat(BigRational::zero()),
            _ => Coeff::Int(BigInt::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.normalize(match self {
            Ring::Rationals => Coeff::Rat(BigRational::from(BigInt::from(v))),
            _ => Coeff::Int(BigInt::from(v)),
        })
    }

    pub fn from_bigint(&self, v: BigInt) -> Coeff {
        self.normalize(match self {
            Ring::Rationals => Coeff::Rat(BigRational::from(v)),
            _ => Coeff::Int(v),
        })
    }

    pub fn normalize(&self, c: Coeff) -> Coeff {
        match (self, c) {
            (Ring::IntegersMod(m) | Ring::PrimeField(m), Coeff::Int(v)) => {
                let m = BigInt::from(*m);
                let mut r = v % &m;
                if r.is_negative() {
                    r += &m;
                }
                Coeff::Int(r)
            }
            (_, c) => c,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            _ => panic!("mixed coefficient representations"),
        })
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.normalize(match a {
            Coeff::Int(x) => Coeff::Int(-x),
            Coeff::Rat(x) => Coeff::Rat(-x),
        })
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            _ => panic!("mixed coefficient representations"),
        })
    }

    pub fn inv(&self, a: &Coeff) -> Result<Coeff, SeriesError> {
        match (self, a) {
            (Ring::Rationals, Coeff::Rat(x)) => {
                if x.is_zero() {
                    Err(SeriesError::NonUnit("0".into(), *self))
                } else {
                    Ok(Coeff::Rat(x.recip()))
                }
            }
            (Ring::Integers, Coeff::Int(x)) => {
                if x.is_one() {
                    Ok(Coeff::Int(BigInt::one()))
                } else if (-x).is_one() {
                    Ok(Coeff::Int(-BigInt::one()))
                } else {
                    Err(SeriesError::NonUnit(x.to_string(), *self))
                }
            }
            (Ring::IntegersMod(m) | Ring::PrimeField(m), Coeff::Int(x)) => {
                let m = BigInt::from(*m);
                let e = x.extended_gcd(&m);
                if e.gcd.is_one() {
                    Ok(self.normalize(Coeff::Int(e.x)))
                } else {
                    Err(SeriesError::NonUnit(x.to_string(), *self))
                }
            }
            _ => panic!("mixed coefficient representations"),
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Int(x) => x.is_zero(),
            Coeff::Rat(x) => x.is_zero(),
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::IntegersMod(m) => write!(f, "Z/{m}"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact coefficient: big integer (also holding canonical modular
/// residues) or big rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
}

impl Coeff {
    pub fn to_string_canonical(&self) -> String {
        match self {
            Coeff::Int(x) => x.to_string(),
            Coeff::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
        }
    }

    pub fn parse(s: &str, ring: Ring) -> Option<Coeff> {
        let c = if let Some((n, d)) = s.split_once('/') {
            Coeff::Rat(BigRational::new(n.parse().ok()?, d.parse().ok()?))
        } else {
            match ring {
                Ring::Rationals => Coeff::Rat(BigRational::from(s.parse::<BigInt>().ok()?)),
                _ => Coeff::Int(s.parse().ok()?),
            }
        };
        Some(ring.normalize(c))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Coeff::Int(x) => Some(x),
            Coeff::Rat(_) => None,
        }
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rat(x) => Some(x),
            Coeff::Int(_) => None,
        }
    }
}

/// An exponent vector; one slot per ambient variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, slot: usize) -> Self {
        let mut e = vec![0; nvars];
        e[slot] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded, then descending lexicographic within a degree, so that the
        // BTreeMap iterates in canonical display order
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial / power series truncated at a total-degree bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    ring: Ring,
    nvars: usize,
    trunc: u32,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Series {
    pub fn zero(ring: Ring, nvars: usize, trunc: u32) -> Self {
        Series {
            ring,
            nvars,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Ring, nvars: usize, trunc: u32, c: Coeff) -> Self {
        let mut s = Series::zero(ring, nvars, trunc);
        s.add_term(Monomial::unit(nvars), c);
        s
    }

    pub fn one(ring: Ring, nvars: usize, trunc: u32) -> Self {
        Series::constant(ring, nvars, trunc, ring.one())
    }

    /// The series `c * x_slot^e`.
    pub fn monomial(ring: Ring, nvars: usize, trunc: u32, slot: usize, e: u32, c: Coeff) -> Self {
        let mut s = Series::zero(ring, nvars, trunc);
        let mut exps = vec![0; nvars];
        exps[slot] = e;
        s.add_term(Monomial(exps), c);
        s
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::unit(self.nvars))
    }

    /// Adds `c * m` in place, dropping over-trunc monomials and zero results.
    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if m.degree() > self.trunc {
            return;
        }
        let c = self.ring.normalize(c);
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.ring.add(e.get(), &c);
                if self.ring.is_zero(&sum) {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    /// Debug-mode normalization check: no zero coefficients, no over-trunc
    /// monomials, modular residues canonical.
    pub fn validate(&self) {
        for (m, c) in &self.terms {
            assert_eq!(m.0.len(), self.nvars);
            assert!(m.degree() <= self.trunc, "over-trunc monomial stored");
            assert!(!self.ring.is_zero(c), "zero coefficient stored");
            assert_eq!(*c, self.ring.normalize(c.clone()), "non-canonical residue");
        }
    }

    fn check_binary(&self, other: &Series) -> Result<(), SeriesError> {
        if !self.ring.compatible(&other.ring) {
            return Err(SeriesError::RingMismatch(self.ring, other.ring));
        }
        if self.nvars != other.nvars {
            return Err(SeriesError::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_binary(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Series::zero(self.ring, self.nvars, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        if cfg!(debug_assertions) {
            out.validate();
        }
        Ok(out)
    }

    pub fn negate(&self) -> Series {
        let mut out = Series::zero(self.ring, self.nvars, self.trunc);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.add(&other.negate())
    }

    pub fn scalar_mul(&self, c: &Coeff) -> Series {
        let c = self.ring.normalize(c.clone());
        let mut out = Series::zero(self.ring, self.nvars, self.trunc);
        if self.ring.is_zero(&c) {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(a, &c));
        }
        out
    }

    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_binary(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Series::zero(self.ring, self.nvars, trunc);
        for (ma, ca) in &self.terms {
            if ma.degree() > trunc {
                continue;
            }
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > trunc {
                    continue;
                }
                out.add_term(ma.mul(mb), self.ring.mul(ca, cb));
            }
        }
        if cfg!(debug_assertions) {
            out.validate();
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Series, SeriesError> {
        let mut acc = Series::one(self.ring, self.nvars, self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse up to trunc; the constant term must be a unit.
    /// Writes a = a0 (1 + h) with h of positive order and expands the
    /// geometric series in h.
    pub fn invert(&self) -> Result<Series, SeriesError> {
        let a0 = self.constant_term();
        let a0_inv = self.ring.inv(&a0).map_err(|_| {
            SeriesError::NonUnitConstant(a0.to_string_canonical(), self.ring)
        })?;
        let mut h = self.scalar_mul(&a0_inv);
        h.terms.remove(&Monomial::unit(self.nvars)); // h = a/a0 - 1
        let mut out = Series::one(self.ring, self.nvars, self.trunc);
        let mut power = Series::one(self.ring, self.nvars, self.trunc);
        let neg_h = h.negate();
        for _ in 0..self.trunc {
            if power.is_zero() {
                break;
            }
            power = power.mul(&neg_h)?;
            out = out.add(&power)?;
        }
        Ok(out.scalar_mul(&a0_inv))
    }

    /// Composite a(images[0], ..., images[nvars-1]), truncated.  Each image
    /// must have zero constant term unless `allow_constant_images` (for
    /// genuinely polynomial `a`, asserted by the caller).
    pub fn substitute(&self, images: &[Series]) -> Result<Series, SeriesError> {
        for im in images {
            if !self.ring.is_zero(&im.constant_term()) {
                return Err(SeriesError::NonzeroConstantTerm);
            }
        }
        self.substitute_poly(images)
    }

    /// Substitution without the zero-constant-term guard.
    pub fn substitute_poly(&self, images: &[Series]) -> Result<Series, SeriesError> {
        if images.len() != self.nvars {
            return Err(SeriesError::BadSubstitution {
                given: images.len(),
                expected: self.nvars,
            });
        }
        let (out_nvars, mut trunc) = match images.first() {
            Some(im) => (im.nvars, im.trunc.min(self.trunc)),
            None => (0, self.trunc),
        };
        for im in images {
            if im.nvars != out_nvars {
                return Err(SeriesError::ArityMismatch(im.nvars, out_nvars));
            }
            if !im.ring.compatible(&self.ring) {
                return Err(SeriesError::RingMismatch(im.ring, self.ring));
            }
            trunc = trunc.min(im.trunc);
        }
        // memoized image powers
        let mut powers: Vec<Vec<Series>> = (0..images.len())
            .map(|_| vec![Series::one(self.ring, out_nvars, trunc)])
            .collect();
        let mut out = Series::zero(self.ring, out_nvars, trunc);
        for (m, c) in &self.terms {
            let mut term = Series::constant(self.ring, out_nvars, trunc, c.clone());
            for (slot, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[slot].len() <= e as usize {
                    let next = powers[slot]
                        .last()
                        .unwrap()
                        .mul(&images[slot].with_trunc(trunc))?;
                    powers[slot].push(next);
                }
                term = term.mul(&powers[slot][e as usize])?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Same series with a (possibly tighter) truncation bound.
    pub fn with_trunc(&self, trunc: u32) -> Series {
        let mut out = Series::zero(self.ring, self.nvars, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// exp(a) = sum a^n / n!, requiring ring = Rationals and zero constant
    /// term.
    pub fn exp_series(&self) -> Result<Series, SeriesError> {
        if self.ring != Ring::Rationals {
            return Err(SeriesError::ExpNeedsRationals);
        }
        if !self.ring.is_zero(&self.constant_term()) {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Series::one(self.ring, self.nvars, self.trunc);
        let mut power = Series::one(self.ring, self.nvars, self.trunc);
        let mut factorial = BigInt::one();
        for n in 1..=self.trunc {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            factorial *= n;
            let inv = Coeff::Rat(BigRational::new(BigInt::one(), factorial.clone()));
            out = out.add(&power.scalar_mul(&inv))?;
        }
        Ok(out)
    }

    /// Coefficientwise reduction into `target`, failing on the first
    /// non-reducible coefficient.
    pub fn reduce(&self, target: Ring) -> Result<Series, SeriesError> {
        let mut out = Series::zero(target, self.nvars, self.trunc);
        for (m, c) in &self.terms {
            let mapped = match (c, target) {
                (Coeff::Int(v), Ring::Integers) => Coeff::Int(v.clone()),
                (Coeff::Int(v), Ring::Rationals) => Coeff::Rat(BigRational::from(v.clone())),
                (Coeff::Int(v), Ring::IntegersMod(_) | Ring::PrimeField(_)) => {
                    Coeff::Int(v.clone())
                }
                (Coeff::Rat(v), Ring::Rationals) => Coeff::Rat(v.clone()),
                (Coeff::Rat(v), Ring::Integers) => {
                    if v.denom().is_one() {
                        Coeff::Int(v.numer().clone())
                    } else {
                        return Err(SeriesError::NonReducible {
                            coeff: c.to_string_canonical(),
                            monomial: format_monomial(m),
                            target,
                        });
                    }
                }
                (Coeff::Rat(v), Ring::IntegersMod(md) | Ring::PrimeField(md)) => {
                    let m_big = BigInt::from(md);
                    let e = v.denom().extended_gcd(&m_big);
                    if !e.gcd.is_one() {
                        return Err(SeriesError::NonReducible {
                            coeff: c.to_string_canonical(),
                            monomial: format_monomial(m),
                            target,
                        });
                    }
                    Coeff::Int(v.numer() * e.x)
                }
            };
            out.add_term(m.clone(), mapped);
        }
        Ok(out)
    }

    /// Exact division by an integer scalar, erroring if any coefficient is
    /// not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Result<Series, SeriesError> {
        let mut out = Series::zero(self.ring, self.nvars, self.trunc);
        for (m, c) in &self.terms {
            let q = match c {
                Coeff::Int(v) => {
                    let (q, r) = num_integer::Integer::div_rem(v, d);
                    if !r.is_zero() {
                        return Err(SeriesError::InexactDivision(d.to_string()));
                    }
                    Coeff::Int(q)
                }
                Coeff::Rat(v) => Coeff::Rat(v / BigRational::from(d.clone())),
            };
            out.add_term(m.clone(), q);
        }
        Ok(out)
    }

    /// Sum of the degree-d terms.
    pub fn homogeneous_part(&self, d: u32) -> Series {
        let mut out = Series::zero(self.ring, self.nvars, self.trunc);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Lowest nonzero homogeneous part of (self - constant term); None for
    /// constants.
    pub fn leading_form(&self) -> Option<Series> {
        let d = self
            .terms
            .keys()
            .map(|m| m.degree())
            .filter(|&d| d > 0)
            .min()?;
        Some(self.homogeneous_part(d))
    }

    /// Restriction to terms with exponent exactly `e` in variable `slot`,
    /// with that variable deleted from the ambient set.
    pub fn extract_var_power(&self, slot: usize, e: u32) -> Series {
        let mut out = Series::zero(self.ring, self.nvars - 1, self.trunc);
        for (m, c) in &self.terms {
            if m.0[slot] == e {
                let mut exps = m.0.clone();
                exps.remove(slot);
                out.add_term(Monomial(exps), c.clone());
            }
        }
        out
    }

    /// Embeds into a larger ambient variable set, sending slot i to
    /// `slot_map[i]`.
    pub fn embed(&self, out_nvars: usize, slot_map: &[usize]) -> Series {
        assert_eq!(slot_map.len(), self.nvars);
        let mut out = Series::zero(self.ring, out_nvars, self.trunc);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; out_nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[slot_map[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Maximum total degree among stored terms (0 for the zero series).
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }
}

fn format_monomial(m: &Monomial) -> String {
    let factors: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

impl std::fmt::Display for Series {
    /// Canonical text form: graded-lex term order with explicit ring tag and
    /// trunc header.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} nvars={} trunc={}] ", self.ring, self.nvars, self.trunc)?;
        write!(f, "{}", self.term_string())
    }
}

impl Series {
    /// The polynomial body alone, without the ring/trunc header.
    pub fn term_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string_canonical();
            let (neg, abs) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = format_monomial(m);
            if mono == "1" {
                out.push_str(&abs);
            } else if abs == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&abs);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

/// JSON wire form: {ring, nvars, trunc, terms:[{exps, coeff}]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub ring: Ring,
    pub nvars: usize,
    pub trunc: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: String,
}

impl From<&Series> for SeriesJson {
    fn from(s: &Series) -> Self {
        SeriesJson {
            ring: s.ring,
            nvars: s.nvars,
            trunc: s.trunc,
            terms: s
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exps: m.0.clone(),
                    coeff: c.to_string_canonical(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for Series {
    type Error = SeriesError;

    fn try_from(j: &SeriesJson) -> Result<Series, SeriesError> {
        let mut s = Series::zero(j.ring, j.nvars, j.trunc);
        for t in &j.terms {
            let c = Coeff::parse(&t.coeff, j.ring).ok_or_else(|| {
                SeriesError::NonReducible {
                    coeff: t.coeff.clone(),
                    monomial: format!("{:?}", t.exps),
                    target: j.ring,
                }
            })?;
            s.add_term(Monomial(t.exps.clone()), c);
        }
        Ok(s)
    }
}
