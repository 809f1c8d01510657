//! Arithmetic functions behind the classification predicates: p-adic
//! valuations, digit sums, multinomial gcds, and power-of-p partition counts.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumTheoryError {
    #[error("nu(p, 0) is infinite")]
    ZeroValuation,
    #[error("no partitions of {n} into {k} parts")]
    NoSuchPartitions { n: u64, k: u64 },
    #[error("empty partition")]
    EmptyPartition,
}

/// A nonincreasing tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u64>);

impl Partition {
    /// Builds a partition from any list of positive parts, sorting it into
    /// canonical nonincreasing order.
    pub fn new(mut parts: Vec<u64>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "partition parts must be >= 1");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Largest e with p^e | n.
pub fn nu(p: u64, n: u64) -> Result<u64, NumTheoryError> {
    if n == 0 {
        return Err(NumTheoryError::ZeroValuation);
    }
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// p-adic valuation of a big integer; None for zero.
pub fn nu_big(p: u64, n: &BigUint) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return Some(e);
        }
        n = q;
        e += 1;
    }
}

/// Sum of base-p digits of n.
pub fn sigma(p: u64, n: u64) -> u64 {
    let mut n = n;
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// |lambda|! / prod lambda_i!, exact.
pub fn multinomial(lambda: &Partition) -> Result<BigUint, NumTheoryError> {
    if lambda.is_empty() {
        return Err(NumTheoryError::EmptyPartition);
    }
    // Incremental product of binomials: binom(s_1, l_1) binom(s_2, l_2) ...
    // with s_i the running partial sums.
    let mut acc = BigUint::one();
    let mut sum = 0u64;
    for &part in lambda.parts() {
        sum += part;
        acc *= binomial(sum, part);
    }
    Ok(acc)
}

/// binom(n, k) as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Legendre valuation nu_p(m!) = sum_j floor(m / p^j).
fn factorial_valuation(p: u64, m: u64) -> u64 {
    let mut acc = 0;
    let mut q = m / p;
    while q > 0 {
        acc += q;
        q /= p;
    }
    acc
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Per-prime tables of max_{lambda |- s, len k} sum_i nu_p(lambda_i !),
/// which turn the partition gcd into a product of prime powers.
struct PhiTables {
    n_max: u64,
    primes: Vec<u64>,
    // best[prime_idx][k][s], only for k <= s
    best: Vec<Vec<Vec<u32>>>,
}

impl PhiTables {
    fn build(n_max: u64) -> Self {
        let primes = primes_up_to(n_max);
        let n = n_max as usize;
        let mut best = Vec::with_capacity(primes.len());
        for &p in &primes {
            let cost: Vec<u32> = (0..=n as u64)
                .map(|m| factorial_valuation(p, m) as u32)
                .collect();
            // table[k][s]: max total factorial valuation over partitions of s
            // into exactly k positive parts; u32::MAX marks "no partition".
            let mut table = vec![vec![u32::MAX; n + 1]; n + 1];
            table[0][0] = 0;
            for k in 1..=n {
                for s in k..=n {
                    let mut b = u32::MAX;
                    for m in 1..=(s - k + 1) {
                        let prev = table[k - 1][s - m];
                        if prev != u32::MAX {
                            let v = prev + cost[m];
                            if b == u32::MAX || v > b {
                                b = v;
                            }
                        }
                    }
                    table[k][s] = b;
                }
            }
            best.push(table);
        }
        PhiTables { n_max, primes, best }
    }

    fn nu_phi(&self, prime_idx: usize, n: u64, k: u64) -> u64 {
        let p = self.primes[prime_idx];
        let top = factorial_valuation(p, n) as u32;
        let b = self.best[prime_idx][k as usize][n as usize];
        debug_assert_ne!(b, u32::MAX);
        (top - b) as u64
    }
}

static PHI_TABLES: Mutex<Option<PhiTables>> = Mutex::new(None);

fn with_phi_tables<T>(n: u64, f: impl FnOnce(&PhiTables) -> T) -> T {
    let mut guard = PHI_TABLES.lock().unwrap();
    let rebuild = match guard.as_ref() {
        Some(t) => t.n_max < n,
        None => true,
    };
    if rebuild {
        // Round up so repeated growing calls do not thrash the cache.
        *guard = Some(PhiTables::build(n.max(64)));
    }
    f(guard.as_ref().unwrap())
}

/// gcd over all partitions lambda of n with exactly k parts of
/// multinomial(lambda).
///
/// Computed as prod_p p^(nu_p(n!) - max_lambda sum_i nu_p(lambda_i!)) via a
/// per-prime table rather than by walking every partition; the gcd of a set
/// of integers is the product over p of p to the minimum valuation, and
/// nu_p(multinomial) = nu_p(n!) - sum nu_p(lambda_i!).  Unordered partitions
/// suffice since the multinomial is symmetric in the parts.
pub fn phi(n: u64, k: u64) -> Result<BigUint, NumTheoryError> {
    if n < k || k < 1 {
        return Err(NumTheoryError::NoSuchPartitions { n, k });
    }
    with_phi_tables(n, |tables| {
        let mut acc = BigUint::one();
        for (idx, &p) in tables.primes.iter().enumerate() {
            if p > n {
                break;
            }
            let e = tables.nu_phi(idx, n, k);
            if e > 0 {
                acc *= BigUint::from(p).pow(e as u32);
            }
        }
        Ok(acc)
    })
}

/// Kummer closed form max{0, ceil((k - sigma_p(n)) / (p-1))}.
pub fn nu_phi_kummer(p: u64, n: u64, k: u64) -> u64 {
    let s = sigma(p, n);
    if k <= s {
        0
    } else {
        (k - s).div_ceil(p - 1)
    }
}

/// gamma_p(n, k) = max{0, min{k - sigma_p(n), nu_p(n)}}.
pub fn gamma(p: u64, n: u64, k: u64) -> u64 {
    let s = sigma(p, n);
    if k <= s {
        0
    } else {
        (k - s).min(nu(p, n).expect("n >= 1"))
    }
}

/// All partitions of n into exactly k parts, each part a power of p
/// (p^0 allowed), in descending lexicographic order.
pub fn power_p_partitions(p: u64, n: u64, k: u64) -> Vec<Partition> {
    let mut powers = Vec::new();
    let mut w = 1u64;
    while w <= n {
        powers.push(w);
        match w.checked_mul(p) {
            Some(next) => w = next,
            None => break,
        }
    }
    powers.reverse(); // descending
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        powers: &[u64],
        start: usize,
        remaining: u64,
        slots: u64,
        stack: &mut Vec<u64>,
        out: &mut Vec<Partition>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(Partition::new(stack.clone()));
            }
            return;
        }
        for i in start..powers.len() {
            let w = powers[i];
            // all remaining slots get at most w, at least 1
            if w > remaining {
                continue;
            }
            if remaining > w * slots || remaining < (slots - 1) + w {
                continue;
            }
            stack.push(w);
            rec(powers, i, remaining - w, slots - 1, stack, out);
            stack.pop();
        }
    }
    rec(&powers, 0, n, k, &mut stack, &mut out);
    out
}

/// Coefficient of x^n t^k in prod_{i>=0} (1 - t x^{p^i})^{-1}, by truncated
/// product expansion.
pub fn d_count(p: u64, n: u64, k: u64) -> u64 {
    if n == 0 && k == 0 {
        return 1;
    }
    if k > n || n == 0 || k == 0 {
        return 0;
    }
    let nn = n as usize;
    let kk = k as usize;
    // table[s][j] after absorbing each geometric factor 1/(1 - t x^w)
    let mut table = vec![vec![0u64; kk + 1]; nn + 1];
    table[0][0] = 1;
    let mut w = 1u64;
    while w <= n {
        let wu = w as usize;
        for s in wu..=nn {
            for j in 1..=kk {
                table[s][j] += table[s - wu][j - 1];
            }
        }
        match w.checked_mul(p) {
            Some(next) => w = next,
            None => break,
        }
    }
    table[nn][kk]
}

/// Length of the shortest power-of-p partition of n.
pub fn shortest_power_p_length(p: u64, n: u64) -> u64 {
    // greedy base-p digits attain the minimum
    sigma(p, n)
}

/// D(p, n, k') where k' is the smallest length >= k admitting a power-of-p
/// partition of n; 0 if no such length exists.
pub fn d_prime(p: u64, n: u64, k: u64) -> u64 {
    for len in k..=n {
        let c = d_count(p, n, len);
        if c > 0 {
            return c;
        }
    }
    0
}

/// All partitions of n into exactly k positive parts (no power-of-p
/// restriction), used as an enumeration oracle in tests and by the
/// brute-force cocycle solver.
pub fn partitions_exact(n: u64, k: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(max: u64, remaining: u64, slots: u64, stack: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(Partition::new(stack.clone()));
            }
            return;
        }
        let hi = max.min(remaining - (slots - 1));
        for part in (1..=hi).rev() {
            stack.push(part);
            rec(part, remaining - part, slots - 1, stack, out);
            stack.pop();
        }
    }
    if k >= 1 && n >= k {
        rec(n, n, k, &mut stack, &mut out);
    }
    out
}

/// Partitions of n into at most k parts.
pub fn partitions_at_most(n: u64, k: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    for len in 1..=k.min(n) {
        out.extend(partitions_exact(n, len));
    }
    out
}

/// Memoized phi valuations for a single prime, used by the classifiers.
pub fn nu_phi(p: u64, n: u64, k: u64) -> u64 {
    thread_local! {
        static CACHE: std::cell::RefCell<HashMap<(u64, u64, u64), u64>> =
            std::cell::RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        if let Some(&v) = c.borrow().get(&(p, n, k)) {
            return v;
        }
        let v = with_phi_tables(n, |tables| {
            let idx = tables
                .primes
                .binary_search(&p)
                .expect("p must be prime and <= n_max");
            tables.nu_phi(idx, n, k)
        });
        c.borrow_mut().insert((p, n, k), v);
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn phi_by_enumeration(n: u64, k: u64) -> BigUint {
        let mut g = BigUint::zero();
        for lambda in partitions_exact(n, k) {
            g = g.gcd(&multinomial(&lambda).unwrap());
        }
        g
    }

    #[test]
    fn nu_basics() {
        assert_eq!(nu(2, 8).unwrap(), 3);
        assert_eq!(nu(2, 6).unwrap(), 1);
        assert_eq!(nu(3, 10).unwrap(), 0);
        assert_eq!(nu(2, 0), Err(NumTheoryError::ZeroValuation));
    }

    #[test]
    fn sigma_basics() {
        assert_eq!(sigma(2, 6), 2);
        assert_eq!(sigma(3, 12), 2);
        for i in 0..6 {
            assert_eq!(sigma(5, 5u64.pow(i)), 1);
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&Partition::new(vec![1, 1])).unwrap(), BigUint::from(2u32));
        assert_eq!(multinomial(&Partition::new(vec![4, 1, 1])).unwrap(), BigUint::from(30u32));
        assert_eq!(multinomial(&Partition::new(vec![2, 2, 2])).unwrap(), BigUint::from(90u32));
        assert_eq!(multinomial(&Partition::new(vec![])), Err(NumTheoryError::EmptyPartition));
    }

    #[test]
    fn phi_examples() {
        for n in 1..=12 {
            assert_eq!(phi(n, 1).unwrap(), BigUint::one());
        }
        assert_eq!(phi(4, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(phi(6, 3).unwrap(), BigUint::from(30u32));
        assert!(phi(3, 4).is_err());
    }

    #[test]
    fn phi_matches_enumeration_small() {
        for n in 1..=16 {
            for k in 1..=n {
                assert_eq!(
                    phi(n, k).unwrap(),
                    phi_by_enumeration(n, k),
                    "phi({n},{k})"
                );
            }
        }
    }

    #[test]
    fn phi_divides_every_multinomial() {
        for n in 1..=14 {
            for k in 1..=n {
                let p = phi(n, k).unwrap();
                for lambda in partitions_exact(n, k) {
                    let m = multinomial(&lambda).unwrap();
                    assert!((&m % &p).is_zero(), "phi({n},{k}) | multinomial{lambda}");
                }
            }
        }
    }

    #[test]
    fn kummer_formula_examples() {
        assert_eq!(nu_phi_kummer(2, 6, 3), 1);
        assert_eq!(nu_phi_kummer(2, 4, 2), 1);
        assert_eq!(nu_phi_kummer(3, 12, 2), 0); // k <= sigma
        assert_eq!(nu_big(2, &phi(6, 3).unwrap()), Some(1));
        assert_eq!(nu_big(2, &phi(4, 2).unwrap()), Some(1));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(2, 4, 3), 2);
        assert_eq!(gamma(2, 6, 2), 0);
        for k in 1..8 {
            assert_eq!(gamma(2, 1, k), 0);
        }
    }

    #[test]
    fn gamma_bounds() {
        for p in [2, 3, 5] {
            for n in 1..=60 {
                for k in 1..=n {
                    let g = gamma(p, n, k);
                    assert!(g <= nu(p, n).unwrap());
                    assert!(g <= (k as i64 - sigma(p, n) as i64).max(0) as u64);
                }
            }
        }
    }

    #[test]
    fn power_p_partition_examples() {
        assert_eq!(power_p_partitions(2, 4, 2), vec![Partition::new(vec![2, 2])]);
        assert_eq!(
            power_p_partitions(3, 12, 4),
            vec![
                Partition::new(vec![9, 1, 1, 1]),
                Partition::new(vec![3, 3, 3, 3])
            ]
        );
        assert_eq!(power_p_partitions(3, 12, 2), vec![Partition::new(vec![9, 3])]);
    }

    #[test]
    fn d_count_matches_enumeration() {
        for p in [2u64, 3, 5] {
            for n in 1..=40 {
                for k in 1..=n {
                    assert_eq!(
                        d_count(p, n, k),
                        power_p_partitions(p, n, k).len() as u64,
                        "D({p},{n},{k})"
                    );
                }
            }
        }
    }

    #[test]
    fn d_count_edges() {
        assert_eq!(d_count(2, 4, 2), 1);
        assert_eq!(d_count(3, 12, 4), 2);
        for p in [2u64, 3] {
            for n in 1..=10 {
                assert_eq!(d_count(p, n, n + 1), 0);
            }
        }
    }

    #[test]
    fn d_prime_examples() {
        assert_eq!(d_prime(3, 12, 2), 1);
        assert_eq!(d_prime(3, 12, 3), 2); // k' = 4, nodes (9,1,1,1) and (3,3,3,3)
        for i in 1..8 {
            assert_eq!(d_prime(2, 1 << i, 1), 1);
        }
        assert_eq!(d_prime(3, 2, 3), 0); // only (1,1) exists, no length >= 3
    }

    #[test]
    fn shortest_length_matches_enumeration() {
        for p in [2u64, 3, 5] {
            for n in 1..=40 {
                let by_scan = (1..=n)
                    .find(|&k| !power_p_partitions(p, n, k).is_empty())
                    .unwrap();
                assert_eq!(shortest_power_p_length(p, n), by_scan);
            }
        }
    }
}
