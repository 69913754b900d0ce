//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `--nocapture` to see the lines of passing tests.

mod common;

use common::{corpus, graph, report, CORPUS};
use hde_core::bounds::{
    alternating_sum, coeff_vector, fractional_edge_cover, hde_exact, hde_lower_chordal, hde_upper,
    homomorphisms_cover, ln_big, trivial_upper_bounds, HdeValue,
};
use hde_core::certificate::{builtin_p4_certificate, exhaustive_soundness, extract_certificate, verify_certificate, Certificate};
use hde_core::constructions::{build_TN_p4, build_Tn_upper, fiber_law, rs_graph, triangle_audit};
use hde_core::graph::{builtin, Graph, VertexSet};
use hde_core::hom::{count_homs, count_homs_fiber, enumerate_homs, ENUMERATION_CAP};
use hde_core::lp::enumerate_vertices;
use hde_core::mrf::{coefficient_entropy, pullback, uniform_hom_distribution};
use hde_core::polymatroid::{build_P_polytope, is_polymatroidal, k3_generators, lift_q, transform_L_inverse, SetFunction};
use hde_core::rational::{int, rat, Rational};
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn p(n: usize) -> Graph {
    builtin("path", &[n]).unwrap()
}

fn value(f: &Graph, g: &Graph) -> Option<Rational> {
    hde_exact(f, g).unwrap().rational().cloned()
}

/// Random chordal graph: each new vertex joins a subset of a clique of the
/// graph built so far.
fn random_chordal(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut cliques: Vec<Vec<usize>> = vec![vec![0]];
    for v in 1..n {
        let c = cliques.choose(rng).unwrap().clone();
        let nbrs: Vec<usize> = c.into_iter().filter(|_| rng.random_bool(0.6)).collect();
        edges.extend(nbrs.iter().map(|&u| (u, v)));
        let mut k = nbrs;
        k.push(v);
        cliques.push(k);
    }
    Graph::undirected(n, edges).unwrap()
}

/// Random graph with loops allowed; undirected when `sym`.
fn random_graph(rng: &mut ChaCha8Rng, n: usize, sym: bool, density: f64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !sym || u <= v)
        .filter(|_| rng.random_bool(density))
        .collect();
    if sym {
        Graph::undirected(n, pairs).unwrap()
    } else {
        Graph::new(n, pairs).unwrap()
    }
}

#[test]
fn criterion_1_exact_values_match_closed_forms() {
    let limit = Duration::from_secs(10);
    let mut cases: Vec<(Graph, Graph, Rational)> = vec![
        (graph("complete:2"), graph("complete:3"), rat(2, 3)),
        (graph("vee"), graph("dicycle:3"), int(1)),
    ];
    for n in 2..=8 {
        cases.push((p(2), p(n), rat(1, n.div_ceil(2) as i64)));
    }
    for m in 1..=7 {
        for n in 1..=7 {
            // P_1 has no edge, so nothing longer maps to it
            if n == 1 && m > 1 {
                continue;
            }
            if m >= n {
                cases.push((p(m), p(n), int(1)));
            } else if m % 2 == 1 {
                cases.push((p(m), p(n), rat(m as i64, n as i64)));
            }
        }
    }
    for n in 1..=2i64 {
        let table = [rat(1, n), rat(2, 2 * n + 1), rat(4 * n + 1, 4 * n * n + 3 * n + 1), rat(1, n + 1)];
        for (i, want) in table.into_iter().enumerate() {
            cases.push((p(4), p(4 * n as usize + i), want));
        }
    }
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (f, g, want) in &cases {
        let t = Instant::now();
        let got = value(f, g);
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        if got.as_ref() != Some(want) || dt > limit {
            bad.push(format!("HDE({}, {}) = {:?}, want {want}, {dt:?}", f.name(), g.name(), got));
        }
    }
    let anchors = value(&p(4), &p(6)) == Some(rat(5, 8)) && value(&p(4), &p(10)) == Some(rat(9, 23));
    let ok = bad.is_empty() && anchors;
    report(
        "criterion 1 (exact closed forms)",
        ok,
        &format!("{} instances, slowest {slowest:?}, mismatches {bad:?}", cases.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_2_upper_program_value() {
    let f = Graph::disjoint_union(&[graph("cycle:4"), graph("2*complete:1")]);
    let r = hde_upper(&f, &graph("complete:2")).unwrap();
    let ok = r.value == HdeValue::Finite(int(3));
    report("criterion 2 (upper(C4+2K1, K2) = 3)", ok, &format!("got {}", r.value));
    assert!(ok);
}

#[test]
fn criterion_3_sandwich() {
    let (mut below, mut equal, mut exact_pairs, mut bad) = (0, 0, 0, Vec::new());
    for ((fs, gs), (f, g)) in CORPUS.iter().zip(corpus()) {
        let lo = hde_lower_chordal(&f, &g).unwrap();
        let up = hde_upper(&f, &g).unwrap();
        match (&lo.value, &up.value) {
            (HdeValue::Undefined, HdeValue::Undefined) => {}
            (HdeValue::Finite(l), HdeValue::Finite(u)) if l <= u => {
                below += 1;
                if g.is_series_parallel() {
                    exact_pairs += 1;
                    if l == u {
                        equal += 1;
                    } else {
                        bad.push(format!("{fs}/{gs}: {l} < {u} on series-parallel G"));
                    }
                }
            }
            (l, u) => bad.push(format!("{fs}/{gs}: lower {l}, upper {u}")),
        }
    }
    let ok = bad.is_empty();
    report(
        "criterion 3 (lower <= upper, equality on series-parallel G)",
        ok,
        &format!("{below} finite pairs ordered, {equal}/{exact_pairs} equal where exact applies; {bad:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_4_edge_cover_cross_check() {
    let k2 = graph("complete:2");
    let mut seen = std::collections::BTreeSet::new();
    let mut checked = Vec::new();
    let mut bad = Vec::new();
    for (_, gs) in CORPUS {
        let g = graph(gs);
        if !seen.insert(gs) || !g.is_symmetric() || !g.is_connected() || !g.is_series_parallel() || g.n() > 7 {
            continue;
        }
        let h = value(&k2, &g).expect("K2 maps into every graph with an edge");
        let rho = fractional_edge_cover(&g).unwrap();
        if &h * &rho != Rational::one() {
            bad.push(format!("{gs}: {h} * {rho}"));
        }
        checked.push(gs);
    }
    let ok = bad.is_empty() && checked.len() >= 10;
    report("criterion 4 (HDE(K2,G) * rho(G) = 1)", ok, &format!("{} graphs {checked:?}; {bad:?}", checked.len()));
    assert!(ok);
}

#[test]
fn criterion_5_polytope_correctness() {
    let k3 = graph("complete:3");
    let mut verts = enumerate_vertices(&build_P_polytope(&k3).unwrap().lp);
    let mut gens: Vec<Vec<Rational>> = k3_generators().into_iter().map(|f| f.values().to_vec()).collect();
    verts.sort();
    gens.sort();
    let rs_half = *k3_generators()[7].get(VertexSet::singleton(0)) == rat(1, 2);
    let table_ok = verts == gens && rs_half;
    report("criterion 5a (vertices of P(K3) are the 8 generators)", table_ok, &format!("{} vertices", verts.len()));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut lines = Vec::new();
    let mut all = true;
    for gs in ["complete:2", "path:3", "complete:3", "cycle:4", "2*complete:1", "vee"] {
        let g = graph(gs);
        let n = g.n();
        let mut pass = 0;
        for _ in 0..100 {
            // random point of Q(G): nonnegative, Σ q(A)·CC(G|A) = 1
            let mut q = SetFunction::zero(n);
            let mut norm = 0i64;
            for a in VertexSet::full(n).subsets().skip(1) {
                let w = if rng.random_bool(0.5) { rng.random_range(0..6i64) } else { 0 };
                q.set(a, int(w));
                norm += w * g.connected_component_count(a) as i64;
            }
            if norm == 0 {
                q.set(VertexSet::full(n), int(1));
                norm = g.connected_component_count(VertexSet::full(n)) as i64;
            }
            let q = q.scale(&rat(1, norm));
            let p = transform_L_inverse(&lift_q(&q));
            pass += usize::from(is_polymatroidal(&p, &g, true).ok);
        }
        all &= pass == 100;
        lines.push(format!("{gs}: {pass}/100"));
    }
    report("criterion 5b (L^-1 q in P(G) for random q in Q(G))", all, &lines.join(", "));
    assert!(table_ok, "vertex table");
    assert!(all, "L^-1 q in P(G): {lines:?}");
}

#[test]
fn criterion_6_formal_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut coeff_ok = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=7);
        let f = random_chordal(&mut rng, n);
        let ord = f.elimination_ordering().unwrap();
        let k = rng.random_range(1..=6);
        let phi: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        coeff_ok += usize::from(coeff_vector(&f, &phi, &ord).unwrap().terms() == alternating_sum(&f, &phi).terms());
    }
    let (mut triples, mut worst, mut bound_ok) = (0, 0f64, true);
    let mut attempts = 0;
    while triples < 50 {
        attempts += 1;
        assert!(attempts < 100_000, "could not draw triples");
        let (nf, ng, nt) = (rng.random_range(1..=4), rng.random_range(1..=4), rng.random_range(1..=4));
        let f = random_chordal(&mut rng, nf);
        let g = random_graph(&mut rng, ng, true, 0.5);
        let t = random_graph(&mut rng, nt, true, 0.6);
        let homs = enumerate_homs(&f, &g, ENUMERATION_CAP).unwrap();
        if homs.is_empty() || count_homs(&g, &t).is_zero() {
            continue;
        }
        let phi = homs.choose(&mut rng).unwrap();
        let ord = f.elimination_ordering().unwrap();
        let x = uniform_hom_distribution(&g, &t).unwrap();
        let y = pullback(&x, &f, phi, &ord).unwrap();
        let h = y.entropy();
        worst = worst.max((h - coefficient_entropy(&x, &f, phi, &ord).unwrap()).abs());
        bound_ok &= h <= ln_big(&count_homs(&f, &t)) / std::f64::consts::LN_2 + 1e-9;
        triples += 1;
    }
    let ok = coeff_ok == 200 && worst <= 1e-9 && bound_ok;
    report(
        "criterion 6 (formal identities)",
        ok,
        &format!("coefficients {coeff_ok}/200; pullback max error {worst:.2e} over {triples}; entropy bound {bound_ok}"),
    );
    assert!(ok);
}

#[test]
fn criterion_7_certificates() {
    let mut bad = Vec::new();
    let mut verified: Vec<Certificate> = Vec::new();
    for n in 1..=5i64 {
        let c = builtin_p4_certificate(n as usize).unwrap();
        let v = verify_certificate(&c);
        let want = rat(4 * n + 1, 4 * n * n + 3 * n + 1);
        if !(v.ok && v.certified == Some(want) && c.total_weight() == int(4 * n * n + 3 * n + 1)) {
            bad.push(format!("builtin n={n}: {:?}", v.reason));
        }
        verified.push(c);
    }
    let mut round_trips = 0;
    for ((fs, gs), (f, g)) in CORPUS.iter().zip(corpus()) {
        let lo = hde_lower_chordal(&f, &g).unwrap();
        let Some(opt) = lo.rational() else { continue };
        let c = extract_certificate(&f, &g).unwrap();
        let back = Certificate::from_json(&c.to_json()).unwrap();
        let v = verify_certificate(&back);
        if v.ok && v.certified.as_ref() == Some(opt) {
            round_trips += 1;
            verified.push(back);
        } else {
            bad.push(format!("{fs}/{gs}: {:?}", v.reason));
        }
    }
    let mut targets = 0;
    for c in &verified {
        let s = exhaustive_soundness(c, 5).unwrap();
        targets += s.targets;
        if !s.failures.is_empty() {
            bad.push(format!("{}/{} fails on {}", c.f.name(), c.g.name(), s.failures[0].to_text()));
        }
    }
    let ok = bad.is_empty();
    report(
        "criterion 7 (certificates)",
        ok,
        &format!(
            "builtin n<=5, {round_trips} extracted round trips, {} certificates sound on {targets} targets; {bad:?}",
            verified.len()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_constructions() {
    // fiber law
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fs = ["path:2", "path:3", "path:4", "complete:3", "star:3", "vee", "dipath:3", "cycle:4", "2*complete:2"];
    let gs = ["complete:2", "path:3", "complete:3", "vee", "dicycle:3", "dipath:3"];
    let (mut fibers, mut fiber_bad) = (0, Vec::new());
    for gs_ in gs {
        let g = graph(gs_);
        let n = g.n();
        for _ in 0..3 {
            let mut q = SetFunction::zero(n);
            let mut norm = 0i64;
            for a in VertexSet::full(n).subsets().skip(1) {
                let w = rng.random_range(0..3i64);
                q.set(a, int(w));
                norm += w * g.connected_component_count(a) as i64;
            }
            let q = q.scale(&rat(1, norm.max(1)));
            if norm == 0 {
                continue;
            }
            for scale in 2..=4u64 {
                let t = build_Tn_upper(&g, &q, scale).unwrap();
                for fs_ in fs {
                    let f = graph(fs_);
                    let mut sum = num_bigint::BigUint::zero();
                    for phi in enumerate_homs(&f, &g, ENUMERATION_CAP).unwrap() {
                        let got = count_homs_fiber(&f, &t.target, &g, &t.projection, &phi).unwrap();
                        if got != fiber_law(&f, &q, scale, &phi) {
                            fiber_bad.push(format!("{fs_}->{gs_} n={scale} phi={phi:?}"));
                        }
                        sum += got;
                        fibers += 1;
                    }
                    if sum != count_homs(&f, &t.target) {
                        fiber_bad.push(format!("{fs_}->{gs_} n={scale}: fibers do not sum to the total"));
                    }
                }
            }
        }
    }
    let fiber_ok = fiber_bad.is_empty();
    report("criterion 8a (fiber law)", fiber_ok, &format!("{fibers} fibers; {fiber_bad:?}"));

    // random targets for P4 against P6
    let (p4, p6) = (p(4), p(6));
    let bound = 5.0 / 8.0 + 0.1;
    let mut means = Vec::new();
    let mut all_below = true;
    let mut lines = Vec::new();
    for big_n in [4u64, 8, 16] {
        let mut vals = Vec::new();
        for seed in 0..3 {
            let t = build_TN_p4(1, big_n, seed).unwrap();
            let r = ln_big(&count_homs(&p4, &t.target)) / ln_big(&count_homs(&p6, &t.target));
            all_below &= r <= bound;
            vals.push(r);
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        lines.push(format!("N={big_n}: {vals:.4?}"));
        means.push(mean - 5.0 / 8.0);
    }
    let shrinking = means.windows(2).all(|w| w[1] < w[0]);
    let p4_ok = all_below && shrinking;
    report(
        "criterion 8b (P4 targets: ratio <= 5/8 + 0.1, margin shrinking)",
        p4_ok,
        &format!("{}; mean margins {means:.4?}", lines.join(", ")),
    );

    // Ruzsa-Szemeredi audit
    let failing: Vec<usize> = (1..=200).filter(|&m| !triangle_audit(&rs_graph(m)).every_edge_in_exactly_one).collect();
    let rs_ok = failing.is_empty();
    report("criterion 8c (RS edge-in-one-triangle audit, m <= 200)", rs_ok, &format!("failing m: {failing:?}"));
    assert!(fiber_ok && p4_ok && rs_ok);
}

#[test]
fn criterion_9_lemma_properties() {
    let mut bad = Vec::new();
    let mut scaled = 0;
    for (fs, gs) in [("complete:2", "complete:3"), ("path:4", "path:6"), ("path:2", "path:5"), ("vee", "dicycle:3"), ("path:3", "cycle:4")] {
        let (f, g) = (graph(fs), graph(gs));
        let base = value(&f, &g).unwrap();
        for m in 1..=3usize {
            for n in 1..=2usize {
                let got = value(&f.copies(m), &g.copies(n));
                let want = &base * rat(m as i64, n as i64);
                if got.as_ref() != Some(&want) {
                    bad.push(format!("HDE({m}*{fs}, {n}*{gs}) = {got:?}, want {want}"));
                }
                scaled += 1;
            }
        }
    }
    let mut positivity = 0;
    let mut trivial = 0;
    for ((fs, gs), (f, g)) in CORPUS.iter().zip(corpus()) {
        if !g.is_series_parallel() {
            continue;
        }
        let Some(v) = value(&f, &g) else { continue };
        if (v > Rational::zero()) != homomorphisms_cover(&f, &g).unwrap() {
            bad.push(format!("positivity {fs}/{gs}: {v}"));
        }
        positivity += 1;
        for b in trivial_upper_bounds(&f, &g).unwrap() {
            if v > b {
                bad.push(format!("{fs}/{gs}: {v} above trivial bound {b}"));
            }
        }
        trivial += 1;
    }
    let ok = bad.is_empty();
    report(
        "criterion 9 (scaling, positivity, trivial bounds)",
        ok,
        &format!("{scaled} scaled instances, {positivity} positivity checks, {trivial} trivial-bound checks; {bad:?}"),
    );
    assert!(ok);
}
