//! Acceptance gate: one pass/fail line per criterion, all exact.

use std::collections::{BTreeMap, BTreeSet};

use cocycle::cochain::{
    additive_basis, brute_force_cocycle_space, check_level_connectivity, delta2, gathering_graph,
    is_symmetric_cocycle, zeta, Target,
};
use cocycle::numtheory::{nu, nu_big, nu_phi, nu_phi_kummer, phi};
use cocycle::ringpres::{ah_extension, generator_count_in_degree, strata_diagram};
use cocycle::series::{Ring, Series};
use cocycle::spectral::{
    differential_a_successor, differential_f2, differential_odd, e1_page, E1Class, FieldTag,
};
use cocycle::weil::{
    delta1, half_weil_additive, half_weil_multiplicative, obstruction_test, Obstruction,
};

fn criterion_1_kummer() -> bool {
    for p in [2u64, 3, 5] {
        for n in 1..=200u64 {
            for k in 1..=n {
                let f = phi(n, k).unwrap();
                if nu_big(p, &f) != Some(nu_phi_kummer(p, n, k)) {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_2_cocycle_identity() -> bool {
    for n in 2..=20u64 {
        for k in 2..=4u64.min(n) {
            let z = zeta(n, k, Ring::Integers).unwrap();
            if !delta2(&z, Target::Additive, 0).unwrap().is_zero() {
                return false;
            }
        }
    }
    true
}

fn basis_vs_oracle(p: u64, n_max: u64, k_max: u64) -> bool {
    for n in 2..=n_max {
        for k in 2..=k_max.min(n) {
            let basis = additive_basis(p, n, k).unwrap();
            let oracle = brute_force_cocycle_space(p, n, k).unwrap();
            if basis.len() != oracle.dim {
                return false;
            }
            // span equality: each basis element lies in the kernel, and the
            // elements are independent (pairwise distinct roots, so distinct
            // leading tau terms); with matching dimension the spans agree
            let roots: BTreeSet<_> = basis.iter().map(|gc| gc.root.clone()).collect();
            if roots.len() != basis.len() {
                return false;
            }
            for gc in &basis {
                let chk = is_symmetric_cocycle(&gc.expand(), Target::Additive, 0).unwrap();
                if !chk.passed() {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_3_basis_vs_oracle() -> bool {
    basis_vs_oracle(2, 24, 5) && basis_vs_oracle(3, 18, 4)
}

fn cell(page: &BTreeMap<(u32, u64), Vec<E1Class>>, s: u32, t: u64) -> BTreeSet<String> {
    page.get(&(s, t))
        .map(|v| v.iter().map(|c| c.to_string()).collect())
        .unwrap_or_default()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn figure_matches(page: &BTreeMap<(u32, u64), Vec<E1Class>>, figure: &[(u64, &[&[&str]])]) -> bool {
    for &(t, row) in figure {
        for (s0, entries) in row.iter().enumerate() {
            if cell(page, s0 as u32 + 1, t) != set(entries) {
                return false;
            }
        }
    }
    true
}

fn criterion_4_figures() -> bool {
    // degree-12 strata diagram over F_3
    let d = strata_diagram(3, 12, 2, 6).unwrap();
    let nodes: BTreeSet<(u64, Vec<u64>, usize)> = d
        .nodes
        .iter()
        .map(|n| (n.k, n.root.parts().to_vec(), n.m))
        .collect();
    let expected_nodes: BTreeSet<(u64, Vec<u64>, usize)> = [
        (2, vec![9, 3], 0),
        (3, vec![9, 1, 1, 1], 1),
        (3, vec![3, 3, 3, 3], 1),
        (4, vec![9, 1, 1, 1], 0),
        (4, vec![3, 3, 3, 3], 0),
        (5, vec![3, 3, 3, 1, 1, 1], 1),
        (6, vec![3, 3, 3, 1, 1, 1], 0),
    ]
    .into_iter()
    .collect();
    if nodes != expected_nodes || d.nodes.len() != 7 {
        return false;
    }
    let edges: BTreeSet<(String, u64, Vec<u64>, u64, Vec<u64>)> = d
        .edges
        .iter()
        .map(|e| {
            (
                e.kind.clone(),
                e.from_k,
                e.from_root.parts().to_vec(),
                e.to_k,
                e.to_root.parts().to_vec(),
            )
        })
        .collect();
    let expected_edges: BTreeSet<(String, u64, Vec<u64>, u64, Vec<u64>)> = [
        ("gather", 4, vec![9, 1, 1, 1], 3, vec![9, 1, 1, 1]),
        ("gather", 4, vec![3, 3, 3, 3], 3, vec![3, 3, 3, 3]),
        ("gather", 6, vec![3, 3, 3, 1, 1, 1], 5, vec![3, 3, 3, 1, 1, 1]),
        ("split", 2, vec![9, 3], 4, vec![9, 1, 1, 1]),
        ("split", 2, vec![9, 3], 4, vec![3, 3, 3, 3]),
        ("split", 4, vec![9, 1, 1, 1], 6, vec![3, 3, 3, 1, 1, 1]),
        ("split", 4, vec![3, 3, 3, 3], 6, vec![3, 3, 3, 1, 1, 1]),
    ]
    .into_iter()
    .map(|(kind, fk, fr, tk, tr)| (kind.to_string(), fk, fr, tk, tr))
    .collect();
    if edges != expected_edges {
        return false;
    }

    // E1 page over F_2, s <= 6, t <= 8
    let page = e1_page(FieldTag::F2, 6, 8);
    let f2_figure: &[(u64, &[&[&str]])] = &[
        (8, &[&["a_3"], &["a_2^2"], &["a_1^2 a_2"], &["a_1^4", "a_0^2 a_1 a_2"], &["a_0^2 a_1^3", "a_0^4 a_2"], &["a_0^4 a_1^2"]]),
        (7, &[&[], &[], &["a_0 a_1 a_2"], &["a_0^3 a_2", "a_0 a_1^3"], &["a_0^3 a_1^2"], &["a_0^5 a_1"]]),
        (6, &[&[], &["a_1 a_2"], &["a_0^2 a_2", "a_1^3"], &["a_0^2 a_1^2"], &["a_0^4 a_1"], &["a_0^6"]]),
        (5, &[&[], &["a_0 a_2"], &["a_0 a_1^2"], &["a_0^3 a_1"], &["a_0^5"], &[]]),
        (4, &[&["a_2"], &["a_1^2"], &["a_0^2 a_1"], &["a_0^4"], &[], &[]]),
        (3, &[&[], &["a_0 a_1"], &["a_0^3"], &[], &[], &[]]),
        (2, &[&["a_1"], &["a_0^2"], &[], &[], &[], &[]]),
        (1, &[&["a_0"], &[], &[], &[], &[], &[]]),
    ];
    if !figure_matches(&page, f2_figure) {
        return false;
    }

    // E1 page over F_3, s <= 6, t <= 9; the printed (5,5) cell omits a_1 b_0^2
    let page = e1_page(FieldTag::OddPrime(3), 6, 9);
    let f3_figure: &[(u64, &[&[&str]])] = &[
        (9, &[&["a_2"], &["b_2"], &[], &[], &["a_1 b_1^2"], &["b_1^3"]]),
        (8, &[&[], &[], &[], &[], &[], &["a_0 a_1 b_0 b_1"]]),
        (7, &[&[], &[], &[], &["a_0 a_1 b_1"], &["a_1 b_0 b_1", "a_0 b_1^2"], &["b_0 b_1^2"]]),
        (6, &[&[], &[], &["a_1 b_1"], &["b_1^2"], &[], &["a_0 a_1 b_0^2"]]),
        (5, &[&[], &[], &[], &["a_0 a_1 b_0"], &["a_0 b_0 b_1", "a_1 b_0^2"], &["b_0^2 b_1"]]),
        (4, &[&[], &["a_0 a_1"], &["a_1 b_0", "a_0 b_1"], &["b_0 b_1"], &[], &[]]),
        (3, &[&["a_1"], &["b_1"], &[], &[], &["a_0 b_0^2"], &["b_0^3"]]),
        (2, &[&[], &[], &["a_0 b_0"], &["b_0^2"], &[], &[]]),
        (1, &[&["a_0"], &["b_0"], &[], &[], &[], &[]]),
    ];
    if !figure_matches(&page, f3_figure) {
        return false;
    }

    // over Q: a single exterior class in bidegree (2, 1)
    let page = e1_page(FieldTag::Rationals, 6, 9);
    page.len() == 1 && cell(&page, 2, 1) == set(&["b_0"])
}

fn criterion_5_differentials() -> bool {
    for i in 0..6u32 {
        for j in 0..6u32 {
            if i != j && (1u64 << i) + (1u64 << j) <= 40 {
                if !differential_f2(i, j).unwrap().matches {
                    return false;
                }
            }
        }
    }
    for i in 0..=4u32 {
        if !differential_a_successor(i).unwrap().matches {
            return false;
        }
    }
    for i in 0..=2u32 {
        for j in 0..=2u32 {
            if i != j && !differential_odd(3, i, j).unwrap().matches {
                return false;
            }
        }
    }
    true
}

/// Admissible (p, n, k) pairs of the Artin-Hasse theorem in the test range.
fn admissible_pairs() -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        for n in 2..=16u64 {
            for k in 2..=4u64.min(n) {
                if nu_phi(p, n, k) <= nu(p, n).unwrap() {
                    out.push((p, n, k));
                }
            }
        }
    }
    out
}

fn ah_cocycles() -> Result<Vec<(u64, Series)>, String> {
    let mut out = Vec::new();
    for (p, n, k) in admissible_pairs() {
        let trunc = 3 * n as u32;
        let u = ah_extension(p, n, k, trunc).map_err(|e| format!("({p},{n},{k}): {e}"))?;
        let chk = is_symmetric_cocycle(&u, Target::Multiplicative, 1)
            .map_err(|e| format!("({p},{n},{k}): {e}"))?;
        if !chk.passed() {
            return Err(format!("({p},{n},{k}): cocycle check failed"));
        }
        let lin = u.extract_var_power(0, 1);
        let z = zeta(n, k, Ring::PrimeField(p)).unwrap().with_trunc(trunc);
        if lin != z {
            return Err(format!("({p},{n},{k}): c^1-part is not zeta"));
        }
        out.push((p, u));
    }
    Ok(out)
}

fn criterion_7_half_weil(extensions: &[(u64, Series)]) -> bool {
    for (p, u) in extensions {
        let e = half_weil_multiplicative(u, *p, 1).unwrap();
        let d = delta1(&e, 1, Target::Multiplicative, 1).unwrap();
        if d != u.pow(*p as u32).unwrap() {
            return false;
        }
    }
    // Weil calculation table: e_+(zeta_{n,2} mod p) = -zeta_{n,1} iff n = p^i
    for p in [2u64, 3, 5] {
        for n in 2..=32u64 {
            let z = zeta(n, 2, Ring::PrimeField(p)).unwrap();
            let e = half_weil_additive(&z, p, 0).unwrap();
            let mut v = n;
            while v % p == 0 {
                v /= p;
            }
            if v == 1 {
                let ring = Ring::PrimeField(p);
                let expected =
                    Series::monomial(ring, 1, n as u32, 0, n as u32, ring.from_i64(-1));
                if e != expected {
                    return false;
                }
            } else if !e.is_zero() {
                return false;
            }
        }
    }
    true
}

fn criterion_8_obstruction_classification() -> bool {
    for k in [3u64, 4, 5] {
        for n in k..=24 {
            let zeta_unobstructed = nu_phi(2, n, k) <= nu(2, n).unwrap();
            let z = zeta(n, k, Ring::PrimeField(2)).unwrap();
            let z_verdict = obstruction_test(&z, 2).unwrap();
            if (z_verdict == Obstruction::Unobstructed) != zeta_unobstructed {
                println!("  zeta verdict mismatch at n={n} k={k}: {z_verdict:?} predicate {zeta_unobstructed}");
                return false;
            }
            let basis = additive_basis(2, n, k).unwrap();
            let mut unobstructed = 0usize;
            for gc in &basis {
                if obstruction_test(&gc.expand(), 2).unwrap() == Obstruction::Unobstructed {
                    unobstructed += 1;
                }
            }
            // at most the zeta stratum survives; it does survive when it is
            // the whole space
            if unobstructed > 1 {
                println!("  {unobstructed} unobstructed basis elements at n={n} k={k}");
                return false;
            }
            if unobstructed == 1 && !zeta_unobstructed {
                println!("  unobstructed element with obstructed zeta at n={n} k={k}");
                return false;
            }
            if basis.len() == 1 && zeta_unobstructed && unobstructed != 1 {
                println!("  lone element obstructed despite zeta at n={n} k={k}");
                return false;
            }
            // generator accounting against the additive dimension
            if generator_count_in_degree(k, n) != basis.len() as u64 {
                println!("  generator count {} vs dim {} at n={n} k={k}", generator_count_in_degree(k, n), basis.len());
                return false;
            }
        }
    }
    true
}

fn criterion_9_graph_lemma() -> bool {
    for n in 1..=64u64 {
        let g = gathering_graph(n);
        let lengths: Vec<usize> = g.levels.keys().copied().collect();
        for w in lengths.windows(2) {
            if w[1] == w[0] + 1 && !check_level_connectivity(&g, w[1]) {
                return false;
            }
        }
    }
    true
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    let mut report = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };

    report(
        "1 kummer agreement nu(phi) (p in {2,3,5}, k <= n <= 200)",
        criterion_1_kummer(),
    );
    report(
        "2 delta2(zeta(n,k)) = 0 over Z (n <= 20, k <= 4)",
        criterion_2_cocycle_identity(),
    );
    report(
        "3 gathered basis vs brute-force oracle (p=2 n<=24 k<=5; p=3 n<=18 k<=4)",
        criterion_3_basis_vs_oracle(),
    );
    report(
        "4 figure reproduction: degree-12 strata and both E1 pages",
        criterion_4_figures(),
    );
    report(
        "5 differential formulas (F2 2^i+2^j <= 40; a-successor i <= 4; p=3 i,j <= 2)",
        criterion_5_differentials(),
    );
    let extensions = ah_cocycles();
    report(
        "6 artin-hasse extensions cocycle + linearization (p in {2,3}, n <= 16, k <= 4)",
        extensions.is_ok(),
    );
    if let Err(e) = &extensions {
        println!("     criterion 6 failure: {e}");
    }
    report(
        "7 half-weil identity delta1(e) = u^p and the additive table (n <= 32)",
        criterion_7_half_weil(extensions.as_deref().unwrap_or(&[])),
    );
    report(
        "8 obstruction classification and generator accounting (p=2, n <= 24, k in {3,4,5})",
        criterion_8_obstruction_classification(),
    );
    report(
        "9 gathering graph level connectivity (n <= 64)",
        criterion_9_graph_lemma(),
    );

    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
