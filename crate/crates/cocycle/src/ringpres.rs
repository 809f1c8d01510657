//! Artin–Hasse multiplicative extensions, generator classification for the
//! 2-primary presentation, the additive representing ring, and the strata
//! diagram.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochain::{additive_basis, theta_multiplicative, CochainError, GatheredCocycle};
use crate::numtheory::{d_count, d_prime, gamma, nu, nu_phi, phi, NumTheoryError, Partition};
use crate::series::{Coeff, Monomial, Ring, Series, SeriesError};

#[derive(Debug, Error)]
pub enum RingPresError {
    #[error("coefficient {coeff} of {monomial} is not {p}-integral")]
    NotPIntegral {
        p: u64,
        coeff: String,
        monomial: String,
    },
    #[error("need n >= k >= 1, got n = {0}, k = {1}")]
    BadRange(u64, u64),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
}

/// E_p(t) = exp(Σ t^{p^k} / p^k), coefficients verified p-integral.
pub fn artin_hasse(p: u64, trunc: u32) -> Result<Series, RingPresError> {
    let q = Ring::Rationals;
    let mut log = Series::zero(q, 1, trunc);
    let mut power = 1u64;
    let mut denom = BigInt::one();
    while power <= trunc as u64 {
        log.add_term(
            Monomial(vec![power as u32]),
            Coeff::Rat(BigRational::new(BigInt::one(), denom.clone())),
        );
        power = match power.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
        denom *= p;
    }
    let e = log.exp_series()?;
    check_p_integral(&e, p)?;
    Ok(e)
}

fn check_p_integral(s: &Series, p: u64) -> Result<(), RingPresError> {
    let p_big = BigInt::from(p);
    for (m, c) in s.terms() {
        if let Some(r) = c.as_rat() {
            let mut d = r.denom().clone();
            if (&d % &p_big) == BigInt::from(0) {
                let _ = &mut d;
                return Err(RingPresError::NotPIntegral {
                    p,
                    coeff: c.to_string_canonical(),
                    monomial: format!("{:?}", m.0),
                });
            }
        }
    }
    Ok(())
}

/// Θ^k applied to E_p(c x^n)^{p^{-ν}}, reduced mod p: a multiplicative
/// symmetric 2-cocycle in (c, x₁..x_k) whose c¹-part is c·ζ_{n,k}.
///
/// The internal coefficient c is rescaled by the p-adic unit
/// (−1)^k p^ν / φ(n,k) so the linearization is ζ itself rather than a unit
/// multiple.  Failure of p-integrality (the theorem's hypothesis on
/// ν_pφ vs ν_p n) is reported with the offending coefficient.
pub fn ah_extension(p: u64, n: u64, k: u64, trunc: u32) -> Result<Series, RingPresError> {
    if n < k || k < 1 {
        return Err(RingPresError::BadRange(n, k));
    }
    let q = Ring::Rationals;
    let nu_v = nu_phi(p, n, k);
    let phi_nk = BigInt::from(phi(n, k)?);
    let mut unit = BigRational::new(BigInt::from(p).pow(nu_v as u32), phi_nk);
    if k % 2 == 1 {
        unit = -unit;
    }
    // log = sum_j unit^{p^j} c^{p^j} x^{n p^j} / p^{j + nu}
    let mut log = Series::zero(q, 2, trunc);
    let mut j = 0u32;
    loop {
        let pj = (p as u128).pow(j);
        let deg = pj.saturating_mul((n + 1) as u128);
        if deg > trunc as u128 {
            break;
        }
        let pj = pj as u32;
        let mut coeff = BigRational::one();
        for _ in 0..pj {
            coeff *= &unit;
        }
        coeff /= BigRational::from(BigInt::from(p).pow(j + nu_v as u32));
        log.add_term(Monomial(vec![pj, pj * n as u32]), Coeff::Rat(coeff));
        j += 1;
    }
    let f = log.exp_series()?;
    let u_q = theta_multiplicative(&f, k as usize, 1)?;
    check_p_integral(&u_q, p)?;
    Ok(u_q.reduce(Ring::PrimeField(p))?)
}

/// Generator kinds of the 2-primary presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Polynomial,
    DividedPower,
    SquareZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingGenerator {
    pub degree: u64,
    pub index: u64,
    pub kind: GeneratorKind,
    /// 0 = free; otherwise the additive order of the generator
    pub additive_order: u64,
}

impl RingGenerator {
    pub fn name(&self) -> String {
        match self.kind {
            GeneratorKind::Polynomial => format!("z_{}", self.degree),
            _ => format!("b_{{{},{}}}", self.degree, self.index),
        }
    }
}

/// Base ring of the 2-primary presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PresentationRing {
    F2,
    Z2loc,
}

impl std::fmt::Display for PresentationRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PresentationRing::F2 => write!(f, "F_2"),
            PresentationRing::Z2loc => write!(f, "Z_(2)"),
        }
    }
}

/// Number of divided-power classes already landing in degree n at arity k:
/// the copies b_{n/2^j}^{[2^j]} of Γ-generators from smaller degrees.  Equals
/// γ₂(n,k) whenever the halving chain stays at degrees ≥ k; the closed form
/// overcounts once it drops below the arity (first at (n,k) = (8,5)), so the
/// direct count is what the square-zero index range must start from.
pub fn introduced_divided_powers(k: u64, n: u64) -> u64 {
    let mut count = 0u64;
    let mut n0 = n;
    while n0 % 2 == 0 {
        n0 /= 2;
        if n0 >= k && nu_phi(2, n0, k) > nu(2, n0).expect("n0 >= 1") {
            count += 1;
        }
    }
    count
}

/// Degree-by-degree generators of the main theorem's three tensor factors:
/// z_n when ν₂φ(n,k) ≤ ν₂n, else the divided power b_{n,γ₂(n,k)}, plus
/// square-zero b_{n,i} for c < i < D_{n,k} with c the number of divided-power
/// classes already present in degree n.
pub fn classify_generators(k: u64, n_max: u64, ring: PresentationRing) -> Vec<RingGenerator> {
    let sq_order = match ring {
        PresentationRing::F2 => 0,
        PresentationRing::Z2loc => 2,
    };
    let mut out = Vec::new();
    for n in k..=n_max {
        let g = gamma(2, n, k);
        if nu_phi(2, n, k) <= nu(2, n).expect("n >= 1") {
            out.push(RingGenerator {
                degree: n,
                index: 0,
                kind: GeneratorKind::Polynomial,
                additive_order: 0,
            });
        } else {
            out.push(RingGenerator {
                degree: n,
                index: g,
                kind: GeneratorKind::DividedPower,
                additive_order: 0,
            });
        }
        let c = introduced_divided_powers(k, n);
        for i in (c + 1)..d_count(2, n, k) {
            out.push(RingGenerator {
                degree: n,
                index: i,
                kind: GeneratorKind::SquareZero,
                additive_order: sq_order,
            });
        }
    }
    out
}

/// Number of degree-n algebra generators, counting the divided powers
/// b^{[2^j]} of lower-degree Γ-generators that land in degree n.  This is the
/// quantity that matches the additive cocycle dimension.
pub fn generator_count_in_degree(k: u64, n: u64) -> u64 {
    if n < k {
        return 0;
    }
    let copies = introduced_divided_powers(k, n);
    let d = d_count(2, n, k);
    // head (z_n or b_{n,gamma}) + divided-power copies + new square-zero
    1 + copies + d.saturating_sub(copies + 1)
}

/// The additive representing ring: free generators c_n (n ≥ k) plus, per
/// prime p, p-torsion generators b_{p,n,i} for 1 ≤ i < D′_p(n,k).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdditivePresentation {
    pub k: u64,
    pub n_max: u64,
    pub free_degrees: Vec<u64>,
    /// (p, n) -> number of torsion generators
    pub torsion: BTreeMap<(u64, u64), u64>,
}

pub fn additive_presentation(k: u64, n_max: u64, primes: &[u64]) -> AdditivePresentation {
    let free_degrees: Vec<u64> = (k..=n_max).collect();
    let mut torsion = BTreeMap::new();
    for &p in primes {
        for n in k..=n_max {
            let d = d_prime(p, n, k);
            if d > 1 {
                torsion.insert((p, n), d - 1);
            }
        }
    }
    AdditivePresentation {
        k,
        n_max,
        free_degrees,
        torsion,
    }
}

/// JSON-facing record of the 2-primary presentation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingPresentation {
    pub ring: String,
    pub k: u64,
    pub degrees: Vec<DegreeGenerators>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeGenerators {
    pub n: u64,
    pub generators: Vec<GeneratorRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub kind: GeneratorKind,
    pub order: u64,
}

pub fn present_ring(k: u64, n_max: u64, ring: PresentationRing) -> RingPresentation {
    let gens = classify_generators(k, n_max, ring);
    let mut degrees: Vec<DegreeGenerators> = Vec::new();
    for n in k..=n_max {
        let generators: Vec<GeneratorRecord> = gens
            .iter()
            .filter(|g| g.degree == n)
            .map(|g| GeneratorRecord {
                name: g.name(),
                kind: g.kind,
                order: g.additive_order,
            })
            .collect();
        degrees.push(DegreeGenerators { n, generators });
    }
    RingPresentation {
        ring: ring.to_string(),
        k,
        degrees,
    }
}

/// Text form mirroring the three-factor display of the main theorem.
pub fn present_ring_text(k: u64, n_max: u64, ring: PresentationRing) -> String {
    let gens = classify_generators(k, n_max, ring);
    let polys: Vec<String> = gens
        .iter()
        .filter(|g| g.kind == GeneratorKind::Polynomial)
        .map(|g| g.name())
        .collect();
    let divided: Vec<String> = gens
        .iter()
        .filter(|g| g.kind == GeneratorKind::DividedPower)
        .map(|g| g.name())
        .collect();
    let square_zero: Vec<String> = gens
        .iter()
        .filter(|g| g.kind == GeneratorKind::SquareZero)
        .map(|g| g.name())
        .collect();
    let quotient = match ring {
        PresentationRing::F2 => "<b^2>",
        PresentationRing::Z2loc => "<2b, b^2>",
    };
    format!(
        "{ring}[{}]\n  (x) Gamma[{}]\n  (x) {ring}[{}]/{quotient}\n  (k = {k}, {k} <= n <= {n_max})",
        polys.join(", "),
        divided.join(", "),
        square_zero.join(", "),
    )
}

/// One box of the stratification diagram.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrataNode {
    pub k: u64,
    pub root: Partition,
    pub m: usize,
    /// "c tau(mu)" summands
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrataEdge {
    /// "gather" (leftward) or "split" (rightward)
    pub kind: String,
    pub from_k: u64,
    pub from_root: Partition,
    pub to_k: u64,
    pub to_root: Partition,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrataDiagram {
    pub p: u64,
    pub n: u64,
    pub nodes: Vec<StrataNode>,
    pub edges: Vec<StrataEdge>,
}

fn cocycle_terms(gc: &GatheredCocycle) -> Vec<String> {
    gc.terms
        .iter()
        .map(|(mu, &c)| {
            if c == 1 {
                format!("tau{mu}")
            } else {
                format!("{c} tau{mu}")
            }
        })
        .collect()
}

/// All single splittings of one part p^a (a ≥ 1) into p parts p^{a−1}.
fn splits(p: u64, lambda: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, &part) in lambda.parts().iter().enumerate() {
        if part % p != 0 {
            continue;
        }
        let mut parts: Vec<u64> = lambda.parts().to_vec();
        parts.remove(idx);
        parts.extend(std::iter::repeat(part / p).take(p as usize));
        let mu = Partition::new(parts);
        if seen.insert(mu.clone()) {
            out.push(mu);
        }
    }
    out
}

pub fn strata_diagram(p: u64, n: u64, k_min: u64, k_max: u64) -> Result<StrataDiagram, RingPresError> {
    let mut nodes = Vec::new();
    let mut by_root: BTreeMap<Partition, Vec<u64>> = BTreeMap::new();
    for k in k_min..=k_max.min(n) {
        for gc in additive_basis(p, n, k)? {
            by_root.entry(gc.root.clone()).or_default().push(k);
            nodes.push(StrataNode {
                k,
                root: gc.root.clone(),
                m: gc.m,
                terms: cocycle_terms(&gc),
            });
        }
    }
    let mut edges = Vec::new();
    // leftward gathering edges: the same root at adjacent arities
    for (root, ks) in &by_root {
        for w in ks.windows(2) {
            if w[1] == w[0] + 1 {
                edges.push(StrataEdge {
                    kind: "gather".into(),
                    from_k: w[1],
                    from_root: root.clone(),
                    to_k: w[0],
                    to_root: root.clone(),
                });
            }
        }
    }
    // rightward splitting edges between depth-0 boxes
    for (root, ks) in &by_root {
        let k_home = root.len() as u64; // m = 0 column
        if !ks.contains(&k_home) {
            continue;
        }
        for mu in splits(p, root) {
            let mu_home = mu.len() as u64;
            if by_root.get(&mu).is_some_and(|v| v.contains(&mu_home)) {
                edges.push(StrataEdge {
                    kind: "split".into(),
                    from_k: k_home,
                    from_root: root.clone(),
                    to_k: mu_home,
                    to_root: mu,
                });
            }
        }
    }
    Ok(StrataDiagram { p, n, nodes, edges })
}
