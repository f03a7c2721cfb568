use super::*;
use crate::graph::generate_path;
use crate::oracles::lcl_count;
use crate::sim::{run_instance, run_preprocess, Execution, RecurrentInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, VecDeque};

fn spec(name: &str) -> LclSpec {
    bundled_spec(name).unwrap()
}

fn all_labellings(sigma: usize, n: usize) -> Vec<Vec<Label>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|l: Vec<Label>| {
                (0..sigma as Label).map(move |a| {
                    let mut l = l.clone();
                    l.push(a);
                    l
                })
            })
            .collect();
    }
    out
}

#[test]
fn mis_digraph_edges() {
    let s = spec("mis");
    let dg = s.digraph();
    let (i, o) = (s.label("I").unwrap(), s.label("O").unwrap());
    let v = |a, b| dg.vertex(a, b);
    assert!(dg.has_edge(v(o, i), v(i, o)));
    assert!(dg.has_edge(v(i, o), v(o, o)));
    assert!(dg.has_edge(v(o, o), v(o, i)));
    assert!(!dg.has_edge(v(o, o), v(o, o)));
    // every edge matches the rule written out by hand
    let rule = |a: Label, b: Label, c: Label| if b == i { a != i && c != i } else { a == i || c == i };
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                assert_eq!(dg.has_edge(v(a, b), v(b, c)), rule(a, b, c));
            }
        }
    }
}

#[test]
fn two_coloring_digraph_is_two_cycle() {
    let s = spec("two-coloring");
    let dg = s.digraph();
    assert_eq!(dg.edge_count(), 2);
    let (ab, ba) = (dg.vertex(0, 1), dg.vertex(1, 0));
    assert!(dg.has_edge(ab, ba) && dg.has_edge(ba, ab));
    assert_eq!(dg.starts(), vec![ab, ba]);
    assert_eq!(dg.terminals(), vec![ab, ba]);
}

#[test]
fn empty_rules_give_empty_digraph() {
    let s = LclSpec::empty("none", vec!["a".into(), "b".into()]).unwrap();
    let dg = s.digraph();
    assert_eq!(dg.edge_count(), 0);
    assert!(dg.starts().is_empty() && dg.terminals().is_empty());
    assert_eq!(classify(&s).unwrap().complexity, Complexity::ThetaN);
}

/// Residues of all walk lengths up to `max_len`, found by listing walks.
fn brute_residues(dg: &LabelDigraph, from_starts: bool, v: usize, k: usize, max_len: usize) -> BTreeSet<usize> {
    let mut found = BTreeSet::new();
    let mut frontier: Vec<usize> = (0..dg.alpha())
        .filter(|&u| if from_starts { dg.is_start(u) } else { u == v })
        .collect();
    for len in 0..=max_len {
        for &u in &frontier {
            if (from_starts && u == v) || (!from_starts && dg.is_terminal(u)) {
                found.insert(len % k);
            }
        }
        frontier = frontier.iter().flat_map(|&u| dg.successors(u).to_vec()).collect();
    }
    found
}

#[test]
fn walkspan_residues() {
    let s = spec("two-coloring");
    let dg = s.digraph();
    let spans = Walkspans::new(&dg, 2 * dg.alpha() * dg.alpha());
    let ab = dg.vertex(0, 1);
    assert_eq!(spans.residues_from_starts(ab, 2), vec![0, 1]);

    let s = spec("mis");
    let dg = s.digraph();
    let spans = Walkspans::new(&dg, 2 * dg.alpha() * dg.alpha());
    let io = dg.vertex(s.label("I").unwrap(), s.label("O").unwrap());
    assert_eq!(spans.residues_from_starts(io, 2), vec![0, 1]);
    assert_eq!(spans.residues_to_terminals(io, 2), vec![0, 1]);
    let expect: Vec<usize> = brute_residues(&dg, true, io, 2, 8).into_iter().collect();
    assert_eq!(expect, vec![0, 1]);
    let expect: Vec<usize> = brute_residues(&dg, false, io, 2, 8).into_iter().collect();
    assert_eq!(expect, vec![0, 1]);
}

#[test]
fn walkspans_agree_with_listing() {
    for s in bundled() {
        let dg = s.digraph();
        let spans = Walkspans::new(&dg, 10);
        for (k, v) in spans.candidates() {
            if k > 4 {
                continue;
            }
            let left: Vec<usize> = brute_residues(&dg, true, v, k, 10).into_iter().collect();
            let right: Vec<usize> = brute_residues(&dg, false, v, k, 10).into_iter().collect();
            assert_eq!(spans.residues_from_starts(v, k), left, "{} k={k} v={v}", s.name);
            assert_eq!(spans.residues_to_terminals(v, k), right, "{} k={k} v={v}", s.name);
        }
    }
}

#[test]
fn acyclic_digraph_has_no_candidates() {
    let s = spec("increasing");
    let dg = s.digraph();
    assert!(Walkspans::new(&dg, 100).candidates().is_empty());
}

#[test]
fn bundled_verdicts() {
    for (name, want) in [
        ("mis", Complexity::Theta1),
        ("two-coloring", Complexity::Theta1),
        ("three-coloring", Complexity::Theta1),
        ("dominating-set", Complexity::Theta1),
        ("anchored-two-coloring", Complexity::ThetaN),
        ("increasing", Complexity::ThetaN),
    ] {
        let c = classify(&spec(name)).unwrap();
        assert_eq!(c.complexity, want, "{name}");
        assert_eq!(c.witness.is_some(), want == Complexity::Theta1);
    }
}

fn replay_witness(s: &LclSpec, w: &Witness, cap: usize) {
    let dg = s.digraph();
    let edges_ok = |walk: &[usize]| walk.windows(2).all(|e| dg.has_edge(e[0], e[1]));
    assert_eq!(w.cycle.len(), w.k + 1);
    assert_eq!(w.cycle[0], w.v);
    assert_eq!(w.cycle[w.k], w.v);
    assert!(edges_ok(&w.cycle));
    for r in 0..w.k {
        let l = w.tables.left[r].as_ref().unwrap();
        assert!(dg.is_start(l[0]) && *l.last().unwrap() == w.v && edges_ok(l));
        assert_eq!((l.len() - 1) % w.k, r);
        assert!(l.len() - 1 <= cap);
        let rt = w.tables.right[r].as_ref().unwrap();
        assert!(rt[0] == w.v && dg.is_terminal(*rt.last().unwrap()) && edges_ok(rt));
        assert_eq!((rt.len() - 1) % w.k, r);
        assert!(rt.len() - 1 <= cap);
    }
}

#[test]
fn witnesses_replay_in_the_digraph() {
    for s in bundled() {
        let c = classify(&s).unwrap();
        if let Some(w) = &c.witness {
            replay_witness(&s, w, c.cap);
        }
    }
}

/// Smallest cap at which some candidate has every residue on both sides,
/// from a breadth-first search over (vertex, length mod k).
fn required_cap(s: &LclSpec) -> Option<usize> {
    let dg = s.digraph();
    let alpha = dg.alpha();
    let shortest = |sources: Vec<usize>, forward: bool, k: usize| -> Vec<Vec<Option<usize>>> {
        let mut dist = vec![vec![None; k]; alpha];
        let mut q = VecDeque::new();
        for u in sources {
            dist[u][0] = Some(0);
            q.push_back((u, 0));
        }
        while let Some((u, r)) = q.pop_front() {
            let d = dist[u][r].unwrap();
            let next = if forward { dg.successors(u) } else { dg.predecessors(u) };
            for &w in next {
                let r2 = (r + 1) % k;
                if dist[w][r2].is_none() {
                    dist[w][r2] = Some(d + 1);
                    q.push_back((w, r2));
                }
            }
        }
        dist
    };
    let mut best: Option<usize> = None;
    for k in 1..=alpha {
        let from_s = shortest(dg.starts(), true, k);
        let to_t = shortest(dg.terminals(), false, k);
        for v in 0..alpha {
            // closed walk of length k through v
            let mut layer = vec![false; alpha];
            layer[v] = true;
            for _ in 0..k {
                let mut next = vec![false; alpha];
                for u in (0..alpha).filter(|&u| layer[u]) {
                    for &w in dg.successors(u) {
                        next[w] = true;
                    }
                }
                layer = next;
            }
            let closed = layer[v];
            if !closed {
                continue;
            }
            let need = (0..k).map(|r| from_s[v][r].zip(to_t[v][r]).map(|(a, b)| a.max(b))).collect::<Option<Vec<_>>>();
            if let Some(need) = need {
                let m = need.into_iter().max().unwrap();
                best = Some(best.map_or(m, |b: usize| b.min(m)));
            }
        }
    }
    best
}

#[test]
fn coprime_cycles_flip_at_required_cap() {
    let (p1, p2) = (5, 7);
    let s = coprime_cycles(p1, p2);
    let need = required_cap(&s).expect("criterion holds with unbounded walks");
    assert!(need >= p1 * p2 - p1.max(p2), "need {need}");
    assert_eq!(classify_with_cap(&s, need - 1).unwrap().complexity, Complexity::ThetaN);
    let full = classify_with_cap(&s, need).unwrap();
    assert_eq!(full.complexity, Complexity::Theta1);
    replay_witness(&s, full.witness.as_ref().unwrap(), need);
    assert_eq!(classify(&s).unwrap().complexity, Complexity::Theta1);
}

#[test]
fn classification_is_monotone_in_cap() {
    let s = coprime_cycles(4, 5);
    let mut seen_theta1 = false;
    for cap in 0..40 {
        let c = classify_with_cap(&s, cap).unwrap().complexity;
        if seen_theta1 {
            assert_eq!(c, Complexity::Theta1, "cap {cap}");
        }
        seen_theta1 |= c == Complexity::Theta1;
    }
    assert!(seen_theta1);
}

#[test]
fn rule_check_matches_walk_check() {
    for s in bundled() {
        let dg = s.digraph();
        for n in 0..=9 {
            for l in all_labellings(s.sigma(), n) {
                assert_eq!(s.is_valid(&l), dg.accepts(&l), "{} {l:?}", s.name);
            }
            assert_eq!(dg.count_walks(n), lcl_count(&s, n), "{} n={n}", s.name);
        }
    }
}

#[test]
fn two_coloring_labellings() {
    let s = spec("two-coloring");
    assert!(s.is_valid(&[0, 1, 0, 1, 0]));
    assert!(!s.is_valid(&[0, 0]));
    assert!(!s.is_valid(&[1, 1, 1, 1]));
}

#[test]
fn feasibility_by_length() {
    let dg = spec("anchored-two-coloring").digraph();
    for n in 1..12 {
        assert_eq!(dg.feasible(n), n % 2 == 1, "n={n}");
    }
    let dg = spec("increasing").digraph();
    assert!(dg.feasible(3) && !dg.feasible(4));
}

#[test]
fn smallest_labelling_is_lexicographic_minimum() {
    for s in bundled() {
        let dg = s.digraph();
        for n in 0..=7 {
            let expect = all_labellings(s.sigma(), n).into_iter().find(|l| s.is_valid(l));
            assert_eq!(dg.smallest_labelling(n), expect, "{} n={n}", s.name);
        }
    }
}

#[test]
fn json_round_trip_and_errors() {
    for s in bundled() {
        assert_eq!(LclSpec::from_json(&s.to_json()).unwrap(), s);
    }
    let text = r#"{"sigma_out": ["I", "O"], "singletons": ["I"], "pairs": [["I","O"],["O","I"]],
        "triples": [["O","I","O"],["I","O","I"],["I","O","O"],["O","O","I"]]}"#;
    let parsed = LclSpec::from_json(text).unwrap();
    assert_eq!(parsed.triples, spec("mis").triples);
    assert!(matches!(LclSpec::from_json(r#"{"sigma_out": []}"#), Err(LclError::EmptyAlphabet)));
    assert!(matches!(
        LclSpec::from_json(r#"{"sigma_out": ["a"], "singletons": ["b"]}"#),
        Err(LclError::UnknownLabel(_))
    ));
    assert!(matches!(LclSpec::from_json(r#"{"sigma_out": ["a", "a"]}"#), Err(LclError::DuplicateLabel(_))));
    assert!(matches!(LclSpec::from_json("{"), Err(LclError::Parse(_))));
    let mut two_inputs = spec("mis");
    two_inputs.sigma_in = vec!["x".into(), "y".into()];
    assert!(matches!(classify(&two_inputs), Err(LclError::InputLabels(2))));
}

fn check_normalization(w: &WindowSpec, max_n: usize) -> Normalized {
    let norm = normalize_radius(w);
    for n in 0..=max_n {
        let mut valid = 0u128;
        for x in all_labellings(w.sigma_out.len(), n) {
            let orig = w.is_valid(&x);
            let enc = norm.encode(&x);
            if let Some(y) = &enc {
                assert_eq!(norm.decode(y), x);
            }
            assert_eq!(orig, enc.is_some_and(|y| norm.spec.is_valid(&y)), "{} {x:?}", w.name);
            valid += orig as u128;
        }
        if n != 2 {
            // encoding is injective, so equal counts leave no other valid labelling
            assert_eq!(lcl_count(&norm.spec, n), valid, "{} n={n}", w.name);
        } else {
            // a pair rule cannot tell the two ends of a 2-vertex path apart,
            // so mirrored encodings are accepted as well
            for y in all_labellings(norm.spec.sigma(), 2).into_iter().filter(|y| norm.spec.is_valid(y)) {
                let x = norm.decode(&y);
                let direct = norm.encode(&x) == Some(y.clone()) && w.is_valid(&x);
                let rx: Vec<Label> = x.iter().rev().copied().collect();
                let ry: Vec<Label> = y.iter().rev().copied().collect();
                let mirrored = norm.encode(&rx) == Some(ry) && w.is_valid(&rx);
                assert!(direct || mirrored, "{} {y:?}", w.name);
            }
        }
    }
    norm
}

#[test]
fn radius_one_normalizes_to_itself() {
    for s in bundled() {
        let norm = check_normalization(&WindowSpec::from_lcl(&s), 6);
        assert_eq!(norm.h, 0);
        assert_eq!(norm.spec.singletons, s.singletons);
        assert_eq!(norm.spec.pairs, s.pairs);
        assert_eq!(norm.spec.triples, s.triples);
    }
}

#[test]
fn radius_two_ruling_set_normalizes() {
    let w = ruling_radius2();
    let norm = check_normalization(&w, 8);
    let sigma = w.sigma_out.len();
    assert!(norm.spec.sigma() <= (sigma + 1).pow(3));
    assert!(norm.windows.iter().all(|b| b.len() == 3));
    assert_eq!(classify(&norm.spec).unwrap().complexity, Complexity::Theta1);
}

#[test]
fn asymmetric_ends_use_windows() {
    // the left end must be `a`, anything else is free
    let w = WindowSpec::from_predicate("left-a", 1, &["a", "b"], |b| b[0].is_some() || b[1] == Some(0));
    let norm = check_normalization(&w, 8);
    assert_eq!(norm.h, 1);
}

fn full(g: &crate::graph::Graph) -> RecurrentInstance {
    RecurrentInstance::all_edges(g)
}

fn solve(s: &LclSpec, solver: &PathSolver, n: usize, insts: &[RecurrentInstance]) -> Vec<usize> {
    let g = generate_path(n).unwrap();
    let pre = run_preprocess(&g, solver).unwrap();
    assert_eq!(pre.s_sup_bits(), 2);
    assert!((0..n).all(|v| pre.payload(v).len_bits() == 2));
    insts
        .iter()
        .map(|inst| {
            let rep = run_instance(&g, &pre, solver, inst, solver.round_bound() + 1).unwrap();
            assert!(validate_outputs(s, &g, inst, &rep.outputs).valid, "{} n={n} {inst:?}", s.name);
            rep.rounds
        })
        .collect()
}

#[test]
fn solver_on_full_paths() {
    for name in ["mis", "two-coloring", "dominating-set"] {
        let s = spec(name);
        let solver = PathSolver::new(&s).unwrap();
        let mut rounds = Vec::new();
        for n in [200, 1000] {
            let g = generate_path(n).unwrap();
            rounds.extend(solve(&s, &solver, n, &[full(&g)]));
        }
        assert!(rounds.iter().all(|&r| r == solver.round_bound()), "{name}: {rounds:?}");
    }
}

#[test]
fn solver_on_singletons() {
    let s = spec("mis");
    let solver = PathSolver::new(&s).unwrap();
    let g = generate_path(30).unwrap();
    let inst = RecurrentInstance::EdgeSubset(vec![false; g.m()]);
    let pre = run_preprocess(&g, &solver).unwrap();
    let rep = run_instance(&g, &pre, &solver, &inst, 1).unwrap();
    assert_eq!(rep.rounds, 0);
    assert!(rep.outputs.iter().all(|o| *o == Some(Some(s.label("I").unwrap()))));
}

#[test]
fn solver_on_every_subpath() {
    let s = spec("two-coloring");
    let solver = PathSolver::new(&s).unwrap();
    let n = 60;
    let g = generate_path(n).unwrap();
    let mut insts = Vec::new();
    for a in 0..n {
        for b in a..n {
            insts.push(RecurrentInstance::EdgeSubset((0..g.m()).map(|e| e >= a && e < b).collect()));
        }
    }
    solve(&s, &solver, n, &insts);
}

#[test]
fn solver_on_random_subpath_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["mis", "three-coloring", "dominating-set"] {
        let s = spec(name);
        let solver = PathSolver::new(&s).unwrap();
        let n = 900;
        let g = generate_path(n).unwrap();
        let insts: Vec<RecurrentInstance> = (0..4)
            .map(|_| {
                let p = [0.002, 0.01, 0.1][rng.random_range(0..3)];
                RecurrentInstance::EdgeSubset((0..g.m()).map(|_| !rng.random_bool(p)).collect())
            })
            .collect();
        solve(&s, &solver, n, &insts);
    }
}

#[test]
fn infeasible_lengths_are_reported() {
    // independent set with domination but no rule for a lone vertex
    let mut s = spec("mis");
    s.singletons.clear();
    let solver = PathSolver::new(&s).unwrap();
    let g = generate_path(12).unwrap();
    let inst = RecurrentInstance::EdgeSubset((0..g.m()).map(|e| e % 3 != 0).collect());
    let pre = run_preprocess(&g, &solver).unwrap();
    let rep = run_instance(&g, &pre, &solver, &inst, solver.round_bound()).unwrap();
    assert_eq!(rep.outputs[0], Some(None));
    assert!(validate_outputs(&s, &g, &inst, &rep.outputs).valid);
    // claiming infeasibility on a solvable subpath is rejected
    let mut wrong = rep.outputs.clone();
    wrong[1] = Some(None);
    wrong[2] = Some(None);
    assert!(!validate_outputs(&s, &g, &inst, &wrong).valid);
}

#[test]
fn linear_problems_have_no_solver() {
    assert!(matches!(PathSolver::new(&spec("anchored-two-coloring")), Err(LclError::NotConstant(_))));
    assert!(matches!(PathSolver::new(&spec("increasing")), Err(LclError::NotConstant(_))));
}

#[test]
fn preprocessing_rejects_non_paths() {
    let solver = PathSolver::new(&spec("mis")).unwrap();
    let star = crate::graph::generate_star(5).unwrap();
    assert!(run_preprocess(&star, &solver).is_err());
}

#[test]
fn speedup_validates_on_long_path() {
    let s = spec("mis");
    let solver = PathSolver::new(&s).unwrap();
    let t = solver.round_bound();
    let n = 500;
    let g = generate_path(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let insts = vec![full(&g), RecurrentInstance::EdgeSubset((0..g.m()).map(|_| !rng.random_bool(0.01)).collect())];
    for n0 in [8 * t, 4 * t + 1, 5 * t] {
        let sp = Speedup::new(solver.clone(), |_| t, n0).unwrap();
        let pre = run_preprocess(&g, &sp).unwrap();
        let reports = crate::sim::run_stream_with(Execution::Sequential, &g, &pre, &sp, &insts, 10 * t, |inst, out| {
            let flat: Vec<Option<Option<Label>>> = out.iter().map(|o| o.clone().flatten()).collect();
            validate_outputs(&s, &g, inst, &flat)
        });
        for r in &reports {
            assert!(r.error.is_none(), "{:?}", r.error);
            assert_eq!(r.valid, Some(true), "n0={n0}");
            if n0 <= n {
                assert!(r.rounds <= t);
            }
        }
    }
    assert!(matches!(Speedup::new(solver, |_| t, 4 * t), Err(LclError::InvalidN0 { .. })));
}
