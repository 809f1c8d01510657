//! Symmetric 2-cochains of formal groups with additive source: the Θ^k
//! operators, coboundaries, the ζ polynomials, the gathering basis, a
//! brute-force linear-algebra oracle, and the gathering graph.
//!
//! Series in this module carry an optional block of leading "parameter"
//! variables (slots `0..nparams`) that coboundaries and symmetrization treat
//! as inert scalars; the cochain variables occupy the remaining slots.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::numtheory::{
    multinomial, partitions_at_most, partitions_exact, phi, power_p_partitions,
    shortest_power_p_length, NumTheoryError, Partition,
};
use crate::series::{Coeff, Monomial, Ring, Series, SeriesError};

#[derive(Debug, Error)]
pub enum CochainError {
    #[error("constant term must vanish for an additive cochain")]
    NonzeroConstant,
    #[error("constant term must be 1 for a multiplicative cochain")]
    NonUnitConstant,
    #[error("need at least {0} cochain variables, got {1}")]
    TooFewVariables(usize, usize),
    #[error("gather index {0} out of range for length {1}")]
    BadIndex(usize, usize),
    #[error("part {0} is not a power of {1}")]
    NotPowerOfP(u64, u64),
    #[error(
        "gathering depth {m} inadmissible for root {root} at p = {p}: \
         the root is not the shortest power-of-{p} partition and m >= p - 1"
    )]
    HypothesisViolated { p: u64, root: Partition, m: usize },
    #[error("problem size exceeds the dense-solver guard ({0} tau columns)")]
    SizeGuard(usize),
    #[error("zeta requires n >= k >= 1, got n = {0}, k = {1}")]
    BadZetaRange(u64, u64),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
}

/// Target formal group of a cochain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Additive,
    Multiplicative,
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

/// Θ^k for the additive target: Σ over nonempty X ⊆ {1..k} of
/// (−1)^{|X|} g(Σ_{i∈X} x_i).  `g` has `nparams + 1` variables; its last slot
/// is the one substituted into.
pub fn theta_additive(g: &Series, k: usize, nparams: usize) -> Result<Series, CochainError> {
    assert_eq!(g.nvars(), nparams + 1);
    if !g.ring().is_zero(&g.constant_term()) {
        return Err(CochainError::NonzeroConstant);
    }
    let nvars = nparams + k;
    let trunc = g.trunc();
    let ring = g.ring();
    let mut out = Series::zero(ring, nvars, trunc);
    for mask in 1u32..(1 << k) {
        let mut arg = Series::zero(ring, nvars, trunc);
        for i in 0..k {
            if mask & (1 << i) != 0 {
                arg = arg.add(&Series::monomial(ring, nvars, trunc, nparams + i, 1, ring.one()))?;
            }
        }
        let images = param_images(ring, nparams, nvars, trunc, arg);
        let term = g.substitute(&images)?;
        out = if mask.count_ones() % 2 == 0 {
            out.add(&term)?
        } else {
            out.sub(&term)?
        };
    }
    Ok(out)
}

/// Θ^k for the multiplicative target: Π over nonempty X of
/// f(Σ_{i∈X} x_i)^{(−1)^{|X|}}, with f(0) = 1.
pub fn theta_multiplicative(f: &Series, k: usize, nparams: usize) -> Result<Series, CochainError> {
    assert_eq!(f.nvars(), nparams + 1);
    if f.ring().inv(&f.constant_term()).is_err() {
        return Err(CochainError::NonUnitConstant);
    }
    let nvars = nparams + k;
    let trunc = f.trunc();
    let ring = f.ring();
    let mut out = Series::one(ring, nvars, trunc);
    for mask in 1u32..(1 << k) {
        let mut arg = Series::zero(ring, nvars, trunc);
        for i in 0..k {
            if mask & (1 << i) != 0 {
                arg = arg.add(&Series::monomial(ring, nvars, trunc, nparams + i, 1, ring.one()))?;
            }
        }
        let images = param_images(ring, nparams, nvars, trunc, arg);
        let factor = f.substitute(&images)?;
        let factor = if mask.count_ones() % 2 == 0 {
            factor
        } else {
            factor.invert()?
        };
        out = out.mul(&factor)?;
    }
    Ok(out)
}

fn param_images(ring: Ring, nparams: usize, nvars: usize, trunc: u32, main: Series) -> Vec<Series> {
    let mut images: Vec<Series> = (0..nparams)
        .map(|s| Series::monomial(ring, nvars, trunc, s, 1, ring.one()))
        .collect();
    images.push(main);
    images
}

/// δ² on a k-variable cochain (k ≥ 2), introducing the new variable in the
/// first cochain slot:
/// u(x₁,…,x_k) ∓ u(x₀+x₁,x₂,…,x_k) ± u(x₀,x₁+x₂,x₃,…,x_k) ∓ u(x₀,x₁,x₃,…,x_k).
pub fn delta2(u: &Series, target: Target, nparams: usize) -> Result<Series, CochainError> {
    let k = u.nvars() - nparams;
    if k < 2 {
        return Err(CochainError::TooFewVariables(2, k));
    }
    let ring = u.ring();
    let trunc = u.trunc();
    let nvars = nparams + k + 1;
    match target {
        Target::Additive => {
            if !ring.is_zero(&u.constant_term()) {
                return Err(CochainError::NonzeroConstant);
            }
        }
        Target::Multiplicative => {
            if ring.inv(&u.constant_term()).is_err() {
                return Err(CochainError::NonUnitConstant);
            }
        }
    }
    let var = |s: usize| Series::monomial(ring, nvars, trunc, s, 1, ring.one());
    let y = |i: usize| var(nparams + i); // y_0, ..., y_k in the output
    let with_params = |mains: Vec<Series>| -> Vec<Series> {
        let mut images: Vec<Series> = (0..nparams).map(var).collect();
        images.extend(mains);
        images
    };

    let t1 = u.substitute(&with_params((1..=k).map(y).collect()))?;
    let mut args2 = vec![y(0).add(&y(1))?];
    args2.extend((2..=k).map(y));
    let t2 = u.substitute(&with_params(args2))?;
    let mut args3 = vec![y(0), y(1).add(&y(2))?];
    args3.extend((3..=k).map(y));
    let t3 = u.substitute(&with_params(args3))?;
    let mut args4 = vec![y(0), y(1)];
    args4.extend((3..=k).map(y));
    let t4 = u.substitute(&with_params(args4))?;

    Ok(match target {
        Target::Additive => t1.sub(&t2)?.add(&t3)?.sub(&t4)?,
        Target::Multiplicative => t1.mul(&t2.invert()?)?.mul(&t3)?.mul(&t4.invert()?)?,
    })
}

/// Outcome of the symmetric-2-cocycle test, with a human-readable witness on
/// failure.
#[derive(Debug, Clone)]
pub struct CocycleCheck {
    pub symmetric: bool,
    pub cocycle: bool,
    pub witness: Option<String>,
}

impl CocycleCheck {
    pub fn passed(&self) -> bool {
        self.symmetric && self.cocycle
    }
}

/// Tests permutation invariance in the cochain variables plus vanishing of
/// δ² (equality with 1 for the multiplicative target).
pub fn is_symmetric_cocycle(
    u: &Series,
    target: Target,
    nparams: usize,
) -> Result<CocycleCheck, CochainError> {
    let k = u.nvars() - nparams;
    // adjacent transpositions generate S_k
    for i in 0..k.saturating_sub(1) {
        let mut map: Vec<usize> = (0..u.nvars()).collect();
        map.swap(nparams + i, nparams + i + 1);
        let swapped = u.embed(u.nvars(), &map);
        if swapped != *u {
            return Ok(CocycleCheck {
                symmetric: false,
                cocycle: false,
                witness: Some(format!(
                    "not invariant under swapping variables {} and {}",
                    i + 1,
                    i + 2
                )),
            });
        }
    }
    let d = delta2(u, target, nparams)?;
    let vanishes = match target {
        Target::Additive => d.is_zero(),
        Target::Multiplicative => d == Series::one(d.ring(), d.nvars(), d.trunc()),
    };
    Ok(CocycleCheck {
        symmetric: true,
        cocycle: vanishes,
        witness: if vanishes {
            None
        } else {
            let offending = match target {
                Target::Additive => d.clone(),
                Target::Multiplicative => {
                    d.sub(&Series::one(d.ring(), d.nvars(), d.trunc()))?
                }
            };
            let (m, c) = offending.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            Some(format!(
                "delta2 has term {} * {:?}",
                c.to_string_canonical(),
                m.0
            ))
        },
    })
}

/// ζ_{n,k} = φ(n,k)⁻¹ Σ_{λ ⊢ n, ℓ(λ) = k} binom(n; λ) x^λ, computed over ℤ
/// and reduced into `ring`.
pub fn zeta(n: u64, k: u64, ring: Ring) -> Result<Series, CochainError> {
    if n < k || k < 1 {
        return Err(CochainError::BadZetaRange(n, k));
    }
    let phi_nk = BigInt::from(phi(n, k)?);
    let mut out = Series::zero(Ring::Integers, k as usize, n as u32);
    for lam in partitions_exact(n, k) {
        let m = BigInt::from(multinomial(&lam)?);
        let (q, r) = m.div_rem(&phi_nk);
        debug_assert!(r.is_zero(), "phi must divide every multinomial");
        for mono in distinct_arrangements(&lam, k as usize) {
            out.add_term(mono, Coeff::Int(q.clone()));
        }
    }
    Ok(out.reduce(ring)?)
}

/// All distinct exponent vectors with multiset of nonzero entries `mu`,
/// padded with zeros to `k` slots.
fn distinct_arrangements(mu: &Partition, k: usize) -> Vec<Monomial> {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    *counts.entry(0).or_insert(0) += k - mu.len();
    for &part in mu.parts() {
        *counts.entry(part).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(
        counts: &mut BTreeMap<u64, usize>,
        current: &mut Vec<u32>,
        k: usize,
        out: &mut Vec<Monomial>,
    ) {
        if current.len() == k {
            out.push(Monomial(current.clone()));
            return;
        }
        let values: Vec<u64> = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&v, _)| v)
            .collect();
        for v in values {
            *counts.get_mut(&v).unwrap() -= 1;
            current.push(v as u32);
            rec(counts, current, k, out);
            current.pop();
            *counts.get_mut(&v).unwrap() += 1;
        }
    }
    rec(&mut counts, &mut current, k, &mut out);
    out
}

/// τ(μ) in k variables: the sum over distinct monomials with exponent
/// multiset μ (zero-padded), each with coefficient 1.
pub fn tau(mu: &Partition, k: usize, ring: Ring, trunc: u32) -> Series {
    assert!(mu.len() <= k, "partition longer than variable count");
    let mut out = Series::zero(ring, k, trunc);
    for mono in distinct_arrangements(mu, k) {
        out.add_term(mono, ring.one());
    }
    out
}

/// G_{i,j}: merge parts i and j (1-based) into their sum.
pub fn gather(lambda: &Partition, i: usize, j: usize) -> Result<Partition, CochainError> {
    let l = lambda.len();
    if i == j || i < 1 || j < 1 || i > l || j > l {
        return Err(CochainError::BadIndex(i.max(j), l));
    }
    let mut parts: Vec<u64> = lambda.parts().to_vec();
    let (a, b) = (parts[i - 1], parts[j - 1]);
    let (hi, lo) = (i.max(j) - 1, i.min(j) - 1);
    parts.remove(hi);
    parts.remove(lo);
    parts.push(a + b);
    Ok(Partition::new(parts))
}

/// T^m λ: all partitions reachable by exactly m gatherings.
pub fn gathered_set(lambda: &Partition, m: usize) -> BTreeSet<Partition> {
    let mut level: BTreeSet<Partition> = BTreeSet::new();
    level.insert(lambda.clone());
    for _ in 0..m {
        let mut next = BTreeSet::new();
        for lam in &level {
            for i in 1..=lam.len() {
                for j in (i + 1)..=lam.len() {
                    next.insert(gather(lam, i, j).unwrap());
                }
            }
        }
        level = next;
    }
    level
}

/// A gathered cocycle Σ_{μ ∈ T^m λ} c_μ τ(μ) over 𝔽_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatheredCocycle {
    pub p: u64,
    pub root: Partition,
    pub m: usize,
    /// nonzero coefficients c_μ in [1, p)
    pub terms: BTreeMap<Partition, u64>,
}

impl GatheredCocycle {
    pub fn degree(&self) -> u64 {
        self.root.total()
    }

    pub fn nvars(&self) -> usize {
        self.root.len() - self.m
    }

    pub fn expand(&self) -> Series {
        let k = self.nvars();
        let trunc = self.degree() as u32;
        let ring = Ring::PrimeField(self.p);
        let mut out = Series::zero(ring, k, trunc);
        for (mu, &c) in &self.terms {
            let t = tau(mu, k, ring, trunc).scalar_mul(&ring.from_i64(c as i64));
            out = out.add(&t).unwrap();
        }
        out
    }
}

/// The cocycle of Thm. AdditiveStructure: coefficients c_μ are read off from
/// ζ(|λ|, ℓ(λ) − m) mod p.  Requires λ shortest among power-of-p partitions
/// of |λ|, or m < p − 1.
pub fn gathered_cocycle(p: u64, lambda: &Partition, m: usize) -> Result<GatheredCocycle, CochainError> {
    for &part in lambda.parts() {
        if !is_power_of(p, part) {
            return Err(CochainError::NotPowerOfP(part, p));
        }
    }
    let n = lambda.total();
    let l = lambda.len();
    if m >= l {
        return Err(CochainError::BadIndex(m, l));
    }
    let shortest = l as u64 == shortest_power_p_length(p, n);
    if !shortest && m as u64 >= p - 1 {
        return Err(CochainError::HypothesisViolated {
            p,
            root: lambda.clone(),
            m,
        });
    }
    let k = (l - m) as u64;
    let phi_nk = BigInt::from(phi(n, k)?);
    let p_big = BigInt::from(p);
    let mut terms = BTreeMap::new();
    for mu in gathered_set(lambda, m) {
        let (q, r) = BigInt::from(multinomial(&mu)?).div_rem(&phi_nk);
        debug_assert!(r.is_zero());
        let c = q.mod_floor(&p_big);
        let c = u64::try_from(&c).unwrap();
        if c != 0 {
            terms.insert(mu, c);
        }
    }
    Ok(GatheredCocycle {
        p,
        root: lambda.clone(),
        m,
        terms,
    })
}

/// The gathering basis of the degree-n homogeneous symmetric additive
/// 2-cocycles in k variables over 𝔽_p: one element per power-of-p partition
/// root λ of n with ℓ(λ) ≥ k that satisfies the admissibility hypothesis at
/// depth m = ℓ(λ) − k.
pub fn additive_basis(p: u64, n: u64, k: u64) -> Result<Vec<GatheredCocycle>, CochainError> {
    let shortest = shortest_power_p_length(p, n);
    let mut out = Vec::new();
    for l in k..=n {
        for root in power_p_partitions(p, n, l) {
            let m = (l - k) as usize;
            if l == shortest || (m as u64) < p - 1 {
                out.push(gathered_cocycle(p, &root, m)?);
            }
        }
    }
    Ok(out)
}

/// Kernel of {symmetry + δ²} on homogeneous degree-n polynomials in k
/// variables over 𝔽_p, solved by exact sparse Gaussian elimination on the
/// τ(λ) basis of symmetric polynomials.
#[derive(Debug, Clone)]
pub struct CocycleSpace {
    pub p: u64,
    pub n: u64,
    pub k: u64,
    pub dim: usize,
    /// each kernel vector as τ-combination: (λ, coefficient)
    pub combos: Vec<Vec<(Partition, u64)>>,
    pub basis: Vec<Series>,
}

const TAU_COLUMN_GUARD: usize = 4000;

pub fn brute_force_cocycle_space(p: u64, n: u64, k: u64) -> Result<CocycleSpace, CochainError> {
    let taus = partitions_at_most(n, k);
    if taus.len() > TAU_COLUMN_GUARD {
        return Err(CochainError::SizeGuard(taus.len()));
    }
    let ring = Ring::PrimeField(p);
    let trunc = n as u32;

    // columns of the delta2 matrix, eliminated sparsely; pivot key = largest
    // monomial of the reduced column
    struct PivotCol {
        col: BTreeMap<Monomial, u64>,
        combo: Vec<u64>,
    }
    let mut pivots: HashMap<Monomial, PivotCol> = HashMap::new();
    let mut kernel: Vec<Vec<u64>> = Vec::new();

    let modp = |v: i64| -> u64 { v.rem_euclid(p as i64) as u64 };
    let inv_mod = |a: u64| -> u64 {
        // p prime, a != 0
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };

    for (j, lam) in taus.iter().enumerate() {
        let t = tau(lam, k as usize, ring, trunc);
        let d = delta2(&t, Target::Additive, 0)?;
        let mut col: BTreeMap<Monomial, u64> = d
            .terms()
            .map(|(m, c)| (m.clone(), u64::try_from(c.as_int().unwrap()).unwrap()))
            .collect();
        let mut combo = vec![0u64; taus.len()];
        combo[j] = 1;
        loop {
            let lead = match col.keys().next_back() {
                Some(m) => m.clone(),
                None => {
                    kernel.push(combo);
                    break;
                }
            };
            match pivots.get(&lead) {
                Some(piv) => {
                    let c = col[&lead];
                    for (m, &v) in &piv.col {
                        let cur = col.entry(m.clone()).or_insert(0);
                        *cur = modp(*cur as i64 - (c * v % p) as i64);
                        if *cur == 0 {
                            col.remove(m);
                        }
                    }
                    for (x, &v) in combo.iter_mut().zip(&piv.combo) {
                        *x = modp(*x as i64 - (c * v % p) as i64);
                    }
                }
                None => {
                    let s = inv_mod(col[&lead]);
                    for v in col.values_mut() {
                        *v = *v * s % p;
                    }
                    for v in combo.iter_mut() {
                        *v = *v * s % p;
                    }
                    pivots.insert(lead, PivotCol { col, combo });
                    break;
                }
            }
        }
    }

    let mut combos = Vec::new();
    let mut basis = Vec::new();
    for vec in kernel {
        let combo: Vec<(Partition, u64)> = taus
            .iter()
            .zip(&vec)
            .filter(|(_, &c)| c != 0)
            .map(|(lam, &c)| (lam.clone(), c))
            .collect();
        let mut s = Series::zero(ring, k as usize, trunc);
        for (lam, c) in &combo {
            s = s
                .add(&tau(lam, k as usize, ring, trunc).scalar_mul(&ring.from_i64(*c as i64)))
                .unwrap();
        }
        combos.push(combo);
        basis.push(s);
    }
    Ok(CocycleSpace {
        p,
        n,
        k,
        dim: combos.len(),
        combos,
        basis,
    })
}

/// Nodes are power-of-2 partitions of n grouped by length; edges are single
/// gatherings that land on another node (i.e. merge two equal parts).
#[derive(Debug, Clone)]
pub struct GatheringGraph {
    pub n: u64,
    /// length -> nodes of that length
    pub levels: BTreeMap<usize, Vec<Partition>>,
    /// (source of length l, target of length l-1)
    pub edges: Vec<(Partition, Partition)>,
}

pub fn gathering_graph(n: u64) -> GatheringGraph {
    let mut levels: BTreeMap<usize, Vec<Partition>> = BTreeMap::new();
    for l in 1..=n {
        let nodes = power_p_partitions(2, n, l);
        if !nodes.is_empty() {
            levels.insert(l as usize, nodes);
        }
    }
    let mut edges = Vec::new();
    for nodes in levels.values() {
        for lam in nodes {
            let mut seen = BTreeSet::new();
            for mu in gathered_set(lam, 1) {
                if mu.parts().iter().all(|&v| is_power_of(2, v)) && seen.insert(mu.clone()) {
                    edges.push((lam.clone(), mu));
                }
            }
        }
    }
    GatheringGraph { n, levels, edges }
}

/// Whether the subgraph on nodes of lengths `level` and `level − 1` is
/// connected through the gathering edges between them.
pub fn check_level_connectivity(g: &GatheringGraph, level: usize) -> bool {
    let empty = Vec::new();
    let upper = g.levels.get(&level).unwrap_or(&empty);
    let lower = g.levels.get(&(level - 1)).unwrap_or(&empty);
    let mut index: HashMap<&Partition, usize> = HashMap::new();
    for node in upper.iter().chain(lower) {
        let i = index.len();
        index.insert(node, i);
    }
    if index.len() <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (src, dst) in &g.edges {
        if let (Some(&a), Some(&b)) = (index.get(src), index.get(dst)) {
            if src.len() == level {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..parent.len()).all(|i| find(&mut parent, i) == root)
}
