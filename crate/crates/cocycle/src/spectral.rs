//! The tangent (filtration) spectral sequence: E₁-page enumeration and brute
//! verification of the §5 differential formulas at p = 2 and odd p.
//!
//! The formal coefficient c of a bud polynomial is an ordinary extra series
//! variable in slot 0; c-degree grading replaces nilpotent-coefficient
//! bookkeeping.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cochain::{delta2, theta_multiplicative, zeta, CochainError, Target};
use crate::series::{Monomial, Ring, Series, SeriesError};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("bud must have the shape 1 + c * (positive-degree terms)")]
    BadBud,
    #[error("indices must differ")]
    EqualIndices,
    #[error("texp requires zero constant term")]
    NonzeroConstant,
    #[error("p must be odd here")]
    EvenPrime,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// Coefficient field of an E₁ page.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    F2,
    OddPrime(u64),
    Rationals,
}

/// A monomial in the generators a_i (s = 1, t = p^i) and, at odd p, b_i
/// (s = 2, t = p^i).  Over ℚ the single exterior class b is stored as b_0
/// with t = 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct E1Class {
    /// (index, exponent), exponent > 0, indices strictly increasing
    pub a: Vec<(u32, u32)>,
    pub b: Vec<(u32, u32)>,
}

impl E1Class {
    pub fn s(&self) -> u32 {
        self.a.iter().map(|&(_, e)| e).sum::<u32>()
            + 2 * self.b.iter().map(|&(_, e)| e).sum::<u32>()
    }

    pub fn t(&self, p: u64) -> u64 {
        let deg = |i: u32| p.pow(i);
        self.a.iter().map(|&(i, e)| e as u64 * deg(i)).sum::<u64>()
            + self.b.iter().map(|&(i, e)| e as u64 * deg(i)).sum::<u64>()
    }
}

impl std::fmt::Display for E1Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for &(i, e) in &self.a {
            if e == 1 {
                parts.push(format!("a_{i}"));
            } else {
                parts.push(format!("a_{i}^{e}"));
            }
        }
        for &(i, e) in &self.b {
            if e == 1 {
                parts.push(format!("b_{i}"));
            } else {
                parts.push(format!("b_{i}^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// All generator monomials with 1 ≤ s ≤ s_max, 1 ≤ t ≤ t_max, keyed by (s, t).
pub fn e1_page(tag: FieldTag, s_max: u32, t_max: u64) -> BTreeMap<(u32, u64), Vec<E1Class>> {
    let p = match tag {
        FieldTag::F2 => 2,
        FieldTag::OddPrime(p) => p,
        FieldTag::Rationals => 2, // unused: only b_0 with t = 1 occurs
    };
    let mut indices = Vec::new();
    let mut w = 1u64;
    let mut i = 0u32;
    while w <= t_max {
        indices.push(i);
        i += 1;
        match w.checked_mul(p) {
            Some(next) => w = next,
            None => break,
        }
    }
    let mut out: BTreeMap<(u32, u64), Vec<E1Class>> = BTreeMap::new();
    let mut current = E1Class { a: Vec::new(), b: Vec::new() };

    fn emit(out: &mut BTreeMap<(u32, u64), Vec<E1Class>>, c: &E1Class, p: u64) {
        let s = c.s();
        if s >= 1 {
            out.entry((s, c.t(p))).or_default().push(c.clone());
        }
    }

    // choose a-exponents for indices[pos..], then b-exponents
    fn rec(
        tag: FieldTag,
        indices: &[u32],
        pos: usize,
        phase_b: bool,
        s: u32,
        t: u64,
        s_max: u32,
        t_max: u64,
        p: u64,
        current: &mut E1Class,
        out: &mut BTreeMap<(u32, u64), Vec<E1Class>>,
    ) {
        if pos == indices.len() {
            if !phase_b {
                match tag {
                    FieldTag::F2 => emit(out, current, p),
                    FieldTag::Rationals => emit(out, current, p),
                    FieldTag::OddPrime(_) => {
                        rec(tag, indices, 0, true, s, t, s_max, t_max, p, current, out)
                    }
                }
            } else {
                emit(out, current, p);
            }
            return;
        }
        let i = indices[pos];
        let deg = p.pow(i);
        if !phase_b {
            let max_e = match tag {
                FieldTag::F2 => u32::MAX,
                FieldTag::OddPrime(_) => 1,
                FieldTag::Rationals => 0, // no a classes over Q
            };
            let mut e = 0u32;
            loop {
                if e > 0 {
                    current.a.push((i, e));
                }
                rec(tag, indices, pos + 1, false, s + e, t + e as u64 * deg, s_max, t_max, p, current, out);
                if e > 0 {
                    current.a.pop();
                }
                e += 1;
                if e > max_e || s + e > s_max || t + e as u64 * deg > t_max {
                    break;
                }
            }
        } else {
            let max_e = match tag {
                FieldTag::OddPrime(_) => u32::MAX,
                _ => 0,
            };
            let mut e = 0u32;
            loop {
                if e > 0 {
                    current.b.push((i, e));
                }
                rec(tag, indices, pos + 1, true, s + 2 * e, t + e as u64 * deg, s_max, t_max, p, current, out);
                if e > 0 {
                    current.b.pop();
                }
                e += 1;
                if e > max_e || s + 2 * e > s_max || t + e as u64 * deg > t_max {
                    break;
                }
            }
        }
    }
    rec(tag, &indices, 0, false, 0, 0, s_max, t_max, p, &mut current, &mut out);

    if tag == FieldTag::Rationals {
        // exterior class b at (s, t) = (2, 1)
        let b = E1Class { a: vec![], b: vec![(0, 1)] };
        if s_max >= 2 && t_max >= 1 {
            out.entry((2, 1)).or_default().push(b);
        }
    }
    for v in out.values_mut() {
        v.sort();
        v.dedup();
    }
    out
}

/// Multiplicative coboundary of a bud polynomial 1 + c·m(x): δ² for k ≥ 2
/// cochain variables, δ¹ (realized as Θ²) for a univariate bud.  The
/// coefficient c is series variable 0.
pub fn bud_coboundary(u_bud: &Series) -> Result<Series, SpectralError> {
    let k = u_bud.nvars() - 1;
    if u_bud.ring().inv(&u_bud.constant_term()).is_err() {
        return Err(SpectralError::BadBud);
    }
    if k >= 2 {
        Ok(delta2(u_bud, Target::Multiplicative, 1)?)
    } else {
        Ok(theta_multiplicative(u_bud, 2, 1)?)
    }
}

/// Outcome of a differential verification.
#[derive(Debug, Clone)]
pub struct DifferentialCheck {
    /// the extracted c-power part of the coboundary
    pub computed: Series,
    pub expected: Series,
    pub matches: bool,
}

impl DifferentialCheck {
    fn new(computed: Series, expected: Series) -> Self {
        let matches = computed == expected;
        DifferentialCheck { computed, expected, matches }
    }
}

/// d(c a_i a_j) = c²(a_i² a_{j+1} − a_{i+1} a_j²) over 𝔽₂, checked by
/// extracting the c² part of δ²(1 + c x^{2^i} y^{2^j}) and comparing with
/// w^{2^i} x^{2^i} y^{2^{j+1}} + w^{2^{i+1}} x^{2^j} y^{2^j}.
pub fn differential_f2(i: u32, j: u32) -> Result<DifferentialCheck, SpectralError> {
    if i == j {
        return Err(SpectralError::EqualIndices);
    }
    let ring = Ring::PrimeField(2);
    let n = (1u32 << i) + (1u32 << j);
    let trunc = 2 + 2 * n;
    // bud 1 + c x^{2^i} y^{2^j} in (c, x, y)
    let mut bud = Series::one(ring, 3, trunc);
    bud.add_term(Monomial(vec![1, 1 << i, 1 << j]), ring.one());
    let d = bud_coboundary(&bud)?;
    let computed = d.extract_var_power(0, 2); // in (w, x, y)
    let mut expected = Series::zero(ring, 3, trunc);
    expected.add_term(Monomial(vec![1 << i, 1 << i, 1 << (j + 1)]), ring.one());
    expected.add_term(Monomial(vec![1 << (i + 1), 1 << j, 1 << j]), ring.one());
    Ok(DifferentialCheck::new(computed, expected))
}

/// d(c a_{i+1}) = c² a_{i+1}² over 𝔽₂: the c² part of the coboundary of the
/// univariate bud 1 + c x^{2^{i+1}} is x^{2^{i+1}} y^{2^{i+1}}.
pub fn differential_a_successor(i: u32) -> Result<DifferentialCheck, SpectralError> {
    let ring = Ring::PrimeField(2);
    let m = 1u32 << (i + 1);
    let trunc = 2 + 2 * m;
    let mut bud = Series::one(ring, 2, trunc);
    bud.add_term(Monomial(vec![1, m]), ring.one());
    let d = bud_coboundary(&bud)?;
    let computed = d.extract_var_power(0, 2);
    let mut expected = Series::zero(ring, 2, trunc);
    expected.add_term(Monomial(vec![m, m]), ring.one());
    Ok(DifferentialCheck::new(computed, expected))
}

/// texp(z) = Σ_{n=0}^{p−1} z^n / n!.
pub fn texp(z: &Series, p: u64) -> Result<Series, SpectralError> {
    if !z.ring().is_zero(&z.constant_term()) {
        return Err(SpectralError::NonzeroConstant);
    }
    let ring = z.ring();
    let mut out = Series::one(ring, z.nvars(), z.trunc());
    let mut power = Series::one(ring, z.nvars(), z.trunc());
    let mut factorial = ring.one();
    for n in 1..p {
        power = power.mul(z)?;
        factorial = ring.mul(&factorial, &ring.from_i64(n as i64));
        let inv = ring
            .inv(&factorial)
            .expect("n! invertible for n < p in F_p");
        out = out.add(&power.scalar_mul(&inv))?;
    }
    Ok(out)
}

/// d(c a_i a_j) = c^p(a_{i+1} b_{j+1} − a_{j+1} b_{i+1}) at odd p: the c^p
/// part of the four-factor texp product equals
/// w^{p^{i+1}} ζ_{p^{j+1},2}(x,y) − ζ_{p^{i+1},2}(w,x) y^{p^{j+1}}.
pub fn differential_odd(p: u64, i: u32, j: u32) -> Result<DifferentialCheck, SpectralError> {
    if p % 2 == 0 {
        return Err(SpectralError::EvenPrime);
    }
    if i == j {
        return Err(SpectralError::EqualIndices);
    }
    let ring = Ring::PrimeField(p);
    let pi = p.pow(i) as u32;
    let pj = p.pow(j) as u32;
    let n = pi + pj;
    let trunc = (p as u32) * (1 + n);
    // variables (c, w, x, y)
    let var = |s: usize| Series::monomial(ring, 4, trunc, s, 1, ring.one());
    let (c, w, x, y) = (var(0), var(1), var(2), var(3));
    let m = |a: &Series, b: &Series, ea: u32, eb: u32| -> Result<Series, SpectralError> {
        Ok(a.pow(ea)?.mul(&b.pow(eb)?)?)
    };
    let z1 = c.mul(&m(&x, &y, pi, pj)?)?;
    let z2 = c.mul(&m(&w.add(&x)?, &y, pi, pj)?)?.negate();
    let z3 = c.mul(&m(&w, &x.add(&y)?, pi, pj)?)?;
    let z4 = c.mul(&m(&w, &x, pi, pj)?)?.negate();
    let mut prod = Series::one(ring, 4, trunc);
    for z in [z1, z2, z3, z4] {
        prod = prod.mul(&texp(&z, p)?)?;
    }
    let computed = prod.extract_var_power(0, p as u32); // in (w, x, y)

    let t3 = trunc;
    // w^{p^{i+1}} zeta(p^{j+1}, 2)(x, y)
    let za = zeta(p.pow(j + 1), 2, ring)?.with_trunc(t3).embed(3, &[1, 2]);
    let wa = Series::monomial(ring, 3, t3, 0, p.pow(i + 1) as u32, ring.one());
    // zeta(p^{i+1}, 2)(w, x) * y^{p^{j+1}}
    let zb = zeta(p.pow(i + 1), 2, ring)?.with_trunc(t3).embed(3, &[0, 1]);
    let yb = Series::monomial(ring, 3, t3, 2, p.pow(j + 1) as u32, ring.one());
    let expected = wa.mul(&za)?.sub(&zb.mul(&yb)?)?;
    Ok(DifferentialCheck::new(computed, expected))
}
