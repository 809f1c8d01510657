//! Half-Weil forms for both targets, the δ₁e = u^p identity, the bivariate
//! decomposition of additive cocycles, and the power-pair obstruction test.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cochain::{delta2, zeta, CochainError, Target};
use crate::series::{Monomial, Ring, Series, SeriesError};

#[derive(Debug, Error)]
pub enum WeilError {
    #[error("input is not a symmetric cochain: {0}")]
    NotSymmetric(String),
    #[error("constant-term violation for the {0:?} target")]
    BadConstantTerm(Target),
    #[error("need at least {0} variables, got {1}")]
    TooFewVariables(usize, usize),
    #[error("no bivariate decomposition: residual term at {0}")]
    Residual(String),
    #[error("decomposition requires a prime-field coefficient ring, got {0}")]
    BadRing(Ring),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

fn check_symmetric(u: &Series, nparams: usize) -> Result<(), WeilError> {
    let k = u.nvars() - nparams;
    for i in 0..k.saturating_sub(1) {
        let mut map: Vec<usize> = (0..u.nvars()).collect();
        map.swap(nparams + i, nparams + i + 1);
        if u.embed(u.nvars(), &map) != *u {
            return Err(WeilError::NotSymmetric(format!(
                "not invariant under swapping variables {} and {}",
                i + 1,
                i + 2
            )));
        }
    }
    Ok(())
}

/// The substitution images (i·x₁, x₁, x₂, …, x_{k−1}) used by the half-Weil
/// forms, in an output ambient of `nparams + k − 1` variables.
fn half_weil_images(ring: Ring, nparams: usize, k: usize, trunc: u32, i: i64) -> Vec<Series> {
    let nvars = nparams + k - 1;
    let mut images: Vec<Series> = (0..nparams)
        .map(|s| Series::monomial(ring, nvars, trunc, s, 1, ring.one()))
        .collect();
    images.push(Series::monomial(ring, nvars, trunc, nparams, 1, ring.from_i64(i)));
    images.push(Series::monomial(ring, nvars, trunc, nparams, 1, ring.one()));
    for j in 2..k {
        images.push(Series::monomial(ring, nvars, trunc, nparams + j - 1, 1, ring.one()));
    }
    images
}

/// e = Π_{i=1}^{p−1} u(i·x₁, x₁, x₂, …, x_{k−1}).
pub fn half_weil_multiplicative(
    u: &Series,
    p: u64,
    nparams: usize,
) -> Result<Series, WeilError> {
    let k = u.nvars() - nparams;
    if k < 2 {
        return Err(WeilError::TooFewVariables(2, k));
    }
    if u.ring().inv(&u.constant_term()).is_err() {
        return Err(WeilError::BadConstantTerm(Target::Multiplicative));
    }
    check_symmetric(u, nparams)?;
    let ring = u.ring();
    let trunc = u.trunc();
    let mut out = Series::one(ring, nparams + k - 1, trunc);
    for i in 1..p as i64 {
        let factor = u.substitute_poly(&half_weil_images(ring, nparams, k, trunc, i))?;
        out = out.mul(&factor)?;
    }
    Ok(out)
}

/// e₊ = Σ_{i=1}^{p−1} u₊(i·x₁, x₁, x₂, …, x_{k−1}).
pub fn half_weil_additive(u_plus: &Series, p: u64, nparams: usize) -> Result<Series, WeilError> {
    let k = u_plus.nvars() - nparams;
    if k < 2 {
        return Err(WeilError::TooFewVariables(2, k));
    }
    if !u_plus.ring().is_zero(&u_plus.constant_term()) {
        return Err(WeilError::BadConstantTerm(Target::Additive));
    }
    check_symmetric(u_plus, nparams)?;
    let ring = u_plus.ring();
    let trunc = u_plus.trunc();
    let mut out = Series::zero(ring, nparams + k - 1, trunc);
    for i in 1..p as i64 {
        let term = u_plus.substitute(&half_weil_images(ring, nparams, k, trunc, i))?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// δ₁ doubling the (1-based) cochain slot `slot`:
/// e(…,x,…) ∘ e(…,x′,…) ∘ e(…,x+x′,…)^{−1} with ∘ the target group law.
pub fn delta1(
    e: &Series,
    slot: usize,
    target: Target,
    nparams: usize,
) -> Result<Series, WeilError> {
    let k = e.nvars() - nparams; // arity of e
    if slot < 1 || slot > k {
        return Err(WeilError::TooFewVariables(slot, k));
    }
    let ring = e.ring();
    let trunc = e.trunc();
    match target {
        Target::Additive => {
            if !ring.is_zero(&e.constant_term()) {
                return Err(WeilError::BadConstantTerm(target));
            }
        }
        Target::Multiplicative => {
            if ring.inv(&e.constant_term()).is_err() {
                return Err(WeilError::BadConstantTerm(target));
            }
        }
    }
    let nvars = nparams + k + 1;
    let var = |s: usize| Series::monomial(ring, nvars, trunc, s, 1, ring.one());
    // output cochain variables z_1 .. z_{k+1}; the doubled pair sits at
    // slots `slot` and `slot+1`
    let args = |doubled: Series| -> Vec<Series> {
        let mut images: Vec<Series> = (0..nparams).map(var).collect();
        for j in 1..=k {
            if j == slot {
                images.push(doubled.clone());
            } else if j < slot {
                images.push(var(nparams + j - 1));
            } else {
                images.push(var(nparams + j));
            }
        }
        images
    };
    let a = var(nparams + slot - 1);
    let b = var(nparams + slot);
    let t1 = e.substitute_poly(&args(a.clone()))?;
    let t2 = e.substitute_poly(&args(b.clone()))?;
    let t3 = e.substitute_poly(&args(a.add(&b)?))?;
    Ok(match target {
        Target::Additive => t1.add(&t2)?.sub(&t3)?,
        Target::Multiplicative => t1.mul(&t2)?.mul(&t3.invert()?)?,
    })
}

/// u₊ = Σ r_{n,m,I} ζ_{n,2}(x₁,x₂) x₃^m x^I over 𝔽_p, with I ranging over
/// exponents of x₄..x_k.
#[derive(Debug, Clone)]
pub struct BivariateDecomposition {
    pub p: u64,
    pub k: usize,
    pub trunc: u32,
    /// (n, m, I) -> r in [1, p)
    pub entries: BTreeMap<(u64, u64, Vec<u32>), u64>,
    /// always zero for valid inputs; decomposition refuses otherwise
    pub residual: Series,
}

impl BivariateDecomposition {
    pub fn reassemble(&self) -> Result<Series, WeilError> {
        let ring = Ring::PrimeField(self.p);
        let mut out = Series::zero(ring, self.k, self.trunc);
        for ((n, m, i_exps), &r) in &self.entries {
            let z = zeta(*n, 2, ring)?;
            let mut slot_map = vec![0usize; 2];
            slot_map[1] = 1;
            let mut term = z.with_trunc(self.trunc).embed(self.k, &slot_map);
            let mut rest = vec![0u32; self.k];
            rest[2] = *m as u32;
            for (idx, &e) in i_exps.iter().enumerate() {
                rest[3 + idx] = e;
            }
            let mut rest_series = Series::zero(ring, self.k, self.trunc);
            rest_series.add_term(Monomial(rest), ring.from_i64(r as i64));
            term = term.mul(&rest_series)?;
            out = out.add(&term)?;
        }
        out = out.add(&self.residual)?;
        Ok(out)
    }
}

/// Slicewise exact solve: the coefficient of each x₃^m x^I is a bivariate
/// symmetric cocycle of its degree n and so a scalar multiple of ζ_{n,2}.
pub fn bivariate_decompose(u_plus: &Series, p: u64) -> Result<BivariateDecomposition, WeilError> {
    let k = u_plus.nvars();
    if k < 3 {
        return Err(WeilError::TooFewVariables(3, k));
    }
    if u_plus.ring() != Ring::PrimeField(p) {
        return Err(WeilError::BadRing(u_plus.ring()));
    }
    let ring = u_plus.ring();
    // group terms by the (x3, ..., xk) tail
    let mut slices: BTreeMap<Vec<u32>, Series> = BTreeMap::new();
    for (mono, c) in u_plus.terms() {
        let tail = mono.0[2..].to_vec();
        let slice = slices
            .entry(tail)
            .or_insert_with(|| Series::zero(ring, 2, u_plus.trunc()));
        slice.add_term(Monomial(mono.0[..2].to_vec()), c.clone());
    }
    let mut entries = BTreeMap::new();
    for (tail, slice) in slices {
        let n = slice
            .terms()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0) as u64;
        let witness = |s: &Series| -> String {
            let (m, _) = s.terms().next().unwrap();
            let mut full = m.0.clone();
            full.extend(&tail);
            format!("{:?}", full)
        };
        if n < 2 {
            return Err(WeilError::Residual(witness(&slice)));
        }
        let z = zeta(n, 2, ring)?.with_trunc(slice.trunc());
        // leading-coefficient ratio, then verify the whole slice
        let (lead_m, lead_c) = z.terms().next().expect("zeta(n,2) mod p is nonzero");
        let num = slice.coeff(lead_m);
        let r = ring.mul(&num, &ring.inv(lead_c).expect("unit in F_p"));
        let diff = slice.sub(&z.scalar_mul(&r))?;
        if !diff.is_zero() {
            return Err(WeilError::Residual(witness(&diff)));
        }
        if ring.is_zero(&r) {
            continue;
        }
        let m = tail[0] as u64;
        let i_exps = tail[1..].to_vec();
        let r_u64 = u64::try_from(r.as_int().unwrap()).unwrap();
        entries.insert((n, m, i_exps), r_u64);
    }
    Ok(BivariateDecomposition {
        p,
        k,
        trunc: u_plus.trunc(),
        entries,
        residual: Series::zero(ring, k, u_plus.trunc()),
    })
}

/// Verdict of Thm. WeilObstructions' power-pair test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    Unobstructed,
    Obstructed { n: u64, m: u64, i: Vec<u32> },
}

fn is_power_of(p: u64, mut v: u64) -> bool {
    if v == 0 {
        return false;
    }
    while v % p == 0 {
        v /= p;
    }
    v == 1
}

/// Obstructed iff r_{p^a, p^b, I} ≠ r_{p^b, p^a, I} for some power pair.
/// Inhomogeneous inputs are tested on their leading form.
pub fn obstruction_test(u_plus: &Series, p: u64) -> Result<Obstruction, WeilError> {
    let lead = match u_plus.leading_form() {
        Some(l) => l,
        None => return Ok(Obstruction::Unobstructed),
    };
    let dec = bivariate_decompose(&lead, p)?;
    for ((n, m, i_exps), &r) in &dec.entries {
        if !is_power_of(p, *n) || !is_power_of(p, *m) || n == m {
            continue;
        }
        let partner = dec
            .entries
            .get(&(*m, *n, i_exps.clone()))
            .copied()
            .unwrap_or(0);
        if r != partner {
            return Ok(Obstruction::Obstructed {
                n: *n,
                m: *m,
                i: i_exps.clone(),
            });
        }
    }
    Ok(Obstruction::Unobstructed)
}

/// The classical Weil pairing of a trivariate multiplicative cocycle:
/// Π_{i=1}^{p−1} u(x₁, i·x₁, x₂) / u(x₁, i·x₂, x₂).
pub fn classical_weil(u: &Series, p: u64, nparams: usize) -> Result<Series, WeilError> {
    let k = u.nvars() - nparams;
    if k != 3 {
        return Err(WeilError::TooFewVariables(3, k));
    }
    if u.ring().inv(&u.constant_term()).is_err() {
        return Err(WeilError::BadConstantTerm(Target::Multiplicative));
    }
    check_symmetric(u, nparams)?;
    let ring = u.ring();
    let trunc = u.trunc();
    let nvars = nparams + 2;
    let var = |s: usize, c: i64| Series::monomial(ring, nvars, trunc, s, 1, ring.from_i64(c));
    let mut out = Series::one(ring, nvars, trunc);
    for i in 1..p as i64 {
        let mut num_images: Vec<Series> = (0..nparams).map(|s| var(s, 1)).collect();
        num_images.extend([var(nparams, 1), var(nparams, i), var(nparams + 1, 1)]);
        let mut den_images: Vec<Series> = (0..nparams).map(|s| var(s, 1)).collect();
        den_images.extend([var(nparams, 1), var(nparams + 1, i), var(nparams + 1, 1)]);
        let num = u.substitute_poly(&num_images)?;
        let den = u.substitute_poly(&den_images)?;
        out = out.mul(&num)?.mul(&den.invert()?)?;
    }
    Ok(out)
}

/// Convenience used by tests: δ₂-checked coboundary cocycle
/// Θ²f = f(x+y)/(f(x)f(y)).
pub fn coboundary_cocycle(f: &Series, nparams: usize) -> Result<Series, WeilError> {
    let u = crate::cochain::theta_multiplicative(f, 2, nparams)?;
    debug_assert_eq!(
        delta2(&u, Target::Multiplicative, nparams)?,
        Series::one(u.ring(), u.nvars() + 1, u.trunc())
    );
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::tau;
    use crate::numtheory::Partition;
    use crate::series::Coeff;

    fn part(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn half_weil_additive_weil_calculation() {
        // zeta(4,2) mod 2 = x^2 y^2 -> x^4
        let f2 = Ring::PrimeField(2);
        let u = zeta(4, 2, f2).unwrap();
        let e = half_weil_additive(&u, 2, 0).unwrap();
        assert_eq!(e.term_string(), "x1^4");

        // zeta(6,2) mod 2 -> 0
        let u = zeta(6, 2, f2).unwrap();
        assert!(half_weil_additive(&u, 2, 0).unwrap().is_zero());

        let zero = Series::zero(f2, 2, 6);
        assert!(half_weil_additive(&zero, 2, 0).unwrap().is_zero());
    }

    #[test]
    fn half_weil_additive_prime_powers() {
        // e_+(zeta(p^i, 2)) = -x^{p^i} mod p
        for (p, i) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let n = p.pow(i);
            let fp = Ring::PrimeField(p);
            let u = zeta(n, 2, fp).unwrap();
            let e = half_weil_additive(&u, p, 0).unwrap();
            let expected = Series::monomial(fp, 1, n as u32, 0, n as u32, fp.from_i64(-1));
            assert_eq!(e, expected, "p={p} n={n}");
        }
    }

    #[test]
    fn delta1_of_additive_half_weil_vanishes() {
        for (p, n) in [(2u64, 4u64), (2, 8), (3, 9), (3, 12)] {
            let fp = Ring::PrimeField(p);
            let u = zeta(n, 2, fp).unwrap();
            let e = half_weil_additive(&u, p, 0).unwrap();
            if !e.is_zero() {
                let d = delta1(&e, 1, Target::Additive, 0).unwrap();
                assert!(d.is_zero(), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn delta1_on_power_is_scaled_zeta() {
        // delta1(x^n, additive) = x^n + y^n - (x+y)^n = -phi(n,2) zeta(n,2)
        let r = Ring::Integers;
        for n in [4u64, 6, 9] {
            let e = Series::monomial(r, 1, n as u32, 0, n as u32, r.one());
            let d = delta1(&e, 1, Target::Additive, 0).unwrap();
            let phi = crate::numtheory::phi(n, 2).unwrap();
            let z = zeta(n, 2, r).unwrap();
            let scale = Coeff::Int(-num_bigint::BigInt::from(phi));
            assert_eq!(d, z.scalar_mul(&scale), "n={n}");
        }
    }

    #[test]
    fn delta1_multiplicative_identity() {
        let r = Ring::Rationals;
        let one = Series::one(r, 2, 4);
        assert_eq!(
            delta1(&one, 1, Target::Multiplicative, 0).unwrap(),
            Series::one(r, 3, 4)
        );
    }

    #[test]
    fn delta1_half_weil_is_pth_power() {
        // section-6 theorem on coboundary cocycles u = Theta^2 f over F_p
        for p in [2u64, 3, 5] {
            let fp = Ring::PrimeField(p);
            let trunc = 8;
            let mut f = Series::one(fp, 1, trunc);
            f.add_term(Monomial(vec![1]), fp.one());
            f.add_term(Monomial(vec![2]), fp.from_i64(1));
            let u = coboundary_cocycle(&f, 0).unwrap();
            let e = half_weil_multiplicative(&u, p, 0).unwrap();
            let d = delta1(&e, 1, Target::Multiplicative, 0).unwrap();
            assert_eq!(d, u.pow(p as u32).unwrap(), "p={p}");
        }
    }

    #[test]
    fn half_weil_multiplicative_trivial() {
        let r = Ring::Rationals;
        let one = Series::one(r, 3, 4);
        assert_eq!(
            half_weil_multiplicative(&one, 3, 0).unwrap(),
            Series::one(r, 2, 4)
        );
    }

    #[test]
    fn bivariate_decompose_basis_form() {
        // zeta(4,2) x3^2 over F2
        let f2 = Ring::PrimeField(2);
        let z = zeta(4, 2, f2).unwrap().with_trunc(6).embed(3, &[0, 1]);
        let mut x3sq = Series::zero(f2, 3, 6);
        x3sq.add_term(Monomial(vec![0, 0, 2]), f2.one());
        let u = z.mul(&x3sq).unwrap();
        let dec = bivariate_decompose(&u, 2).unwrap();
        assert_eq!(dec.entries, BTreeMap::from([((4, 2, vec![]), 1)]));
        assert_eq!(dec.reassemble().unwrap(), u);

        let empty = bivariate_decompose(&Series::zero(f2, 3, 6), 2).unwrap();
        assert!(empty.entries.is_empty());
    }

    #[test]
    fn bivariate_decompose_gathered_cocycle() {
        // tau(9,2,1) - tau(10,1,1) at p=3
        let f3 = Ring::PrimeField(3);
        let a = tau(&part(&[9, 2, 1]), 3, f3, 12);
        let b = tau(&part(&[10, 1, 1]), 3, f3, 12);
        let u = a.sub(&b).unwrap();
        let dec = bivariate_decompose(&u, 3).unwrap();
        assert_eq!(dec.reassemble().unwrap(), u);
        assert_eq!(
            dec.entries,
            BTreeMap::from([
                ((11, 1, vec![]), 2),
                ((10, 2, vec![]), 1),
                ((3, 9, vec![]), 1),
                ((2, 10, vec![]), 2),
            ])
        );
        // power pair (3, 9) has no (9, 3) partner: obstructed
        assert_eq!(
            obstruction_test(&u, 3).unwrap(),
            Obstruction::Obstructed {
                n: 3,
                m: 9,
                i: vec![]
            }
        );
    }

    #[test]
    fn decompose_rejects_noncocycle() {
        let f2 = Ring::PrimeField(2);
        let mut u = Series::zero(f2, 3, 6);
        u.add_term(Monomial(vec![3, 0, 1]), f2.one());
        assert!(matches!(
            bivariate_decompose(&u, 2),
            Err(WeilError::Residual(_))
        ));
    }

    #[test]
    fn obstruction_zeta_examples() {
        use crate::numtheory::{nu, nu_phi};
        let f2 = Ring::PrimeField(2);
        // xyz = zeta(3,3) mod 2: nu2 phi(3,3) = 1 > nu2(3) = 0 -> obstructed
        let u = zeta(3, 3, f2).unwrap();
        assert!(matches!(
            obstruction_test(&u, 2).unwrap(),
            Obstruction::Obstructed { .. }
        ));
        // zeta(4,3) mod 2: nu2 phi = 2 = nu2(4) -> unobstructed
        let u = zeta(4, 3, f2).unwrap();
        assert_eq!(obstruction_test(&u, 2).unwrap(), Obstruction::Unobstructed);

        for n in 4..=16u64 {
            for k in 3..=4u64.min(n) {
                let u = zeta(n, k, f2).unwrap();
                if u.is_zero() {
                    continue;
                }
                let verdict = obstruction_test(&u, 2).unwrap();
                let expect_clear = nu_phi(2, n, k) <= nu(2, n).unwrap();
                assert_eq!(
                    verdict == Obstruction::Unobstructed,
                    expect_clear,
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn obstruction_witness_canonical() {
        let f2 = Ring::PrimeField(2);
        let u = zeta(3, 3, f2).unwrap(); // xyz
        match obstruction_test(&u, 2).unwrap() {
            Obstruction::Obstructed { n, m, i } => {
                assert_eq!((n, m, i), (2, 1, vec![]));
            }
            _ => panic!("expected obstruction"),
        }
    }

    #[test]
    fn classical_weil_basics() {
        let r = Ring::Rationals;
        let one = Series::one(r, 3, 4);
        assert_eq!(classical_weil(&one, 3, 0).unwrap(), Series::one(r, 2, 4));

        // antisymmetry on a constructed trivariate cocycle
        for p in [2u64, 3] {
            let fp = Ring::PrimeField(p);
            let mut f = Series::one(fp, 1, 6);
            f.add_term(Monomial(vec![1]), fp.one());
            let u = crate::cochain::theta_multiplicative(&f, 3, 0).unwrap();
            let w = classical_weil(&u, p, 0).unwrap();
            let swapped = w.embed(2, &[1, 0]);
            assert_eq!(w.mul(&swapped).unwrap(), Series::one(fp, 2, 6), "p={p}");
        }
    }
}
