//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Pass criterion numbers as arguments to run
//! a subset, e.g. `cargo test --test acceptance -- 3 7`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recurrent_core::cds_planar::{
    approx39, compute_nonrepetitive_coloring, ctas, Approx39Program, CtasOptions, NrcOptions, APPROX39_RADIUS,
};
use recurrent_core::cds_tree::{
    appr_distributed, appr_payload_bits, gen_path_lb_instances, p_up, ApprProgram, CdsInstance, PathLbKind,
};
use recurrent_core::color_completion::{
    build_set_family, cc_k_rounds, cc_no_preprocess, cc_priority_recoloring, cc_single_round, universe_size,
    DefaultColoring, FamilyCheck, FamilyCompletion, KRoundCompletion, PriorityRecoloring,
};
use recurrent_core::graph::{
    forest_decompose, generate_path, generate_random_graph, generate_random_planar, generate_random_tree,
    greedy_chromatic_upper, root_at, Graph,
};
use recurrent_core::lcl_paths::{
    bundled, bundled_spec, classify, classify_with_cap, coprime_cycles, validate_outputs, Complexity, Label, LclSpec,
    PathSolver, Speedup,
};
use recurrent_core::matching_mis::{
    degree_split, mis_by_coloring, mm_arboricity, mm_tree, ColorMis, ForestMatching, MisSplit, SubgraphInstance,
    SubgraphMis,
};
use recurrent_core::oracles::validate::{is_client_dominating, is_maximal_matching, is_proper_completion};
use recurrent_core::oracles::{cc_exact, cds_bruteforce, cds_tree_dp, lcl_count, CcObjective};
use recurrent_core::sim::{
    run_instance, run_preprocess, run_stream_with, Execution, NodeProgram, RecurrentInstance, Verdict,
};
use std::collections::{BTreeMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_clients(n: usize, rng: &mut ChaCha8Rng) -> CdsInstance {
    let p = rng.random_range(0.05..0.95);
    CdsInstance::new((0..n).map(|_| rng.random_bool(p)).collect())
}

fn random_rooted_tree(n: usize, rng: &mut ChaCha8Rng) -> recurrent_core::graph::RootedTree {
    let g = generate_random_tree(n, rng.random());
    let r = rng.random_range(0..n);
    root_at(&g, r).expect("generated trees are trees")
}

fn random_pc(g: &Graph, density: f64, max: u32, rng: &mut ChaCha8Rng) -> BTreeMap<usize, u32> {
    let mut pc = BTreeMap::new();
    for v in 0..g.n() {
        if rng.random_bool(density) {
            let c = rng.random_range(1..=max);
            if g.neighbors(v).iter().all(|w| pc.get(w) != Some(&c)) {
                pc.insert(v, c);
            }
        }
    }
    pc
}

/// Random graph with at least one edge.
fn random_sparse(n_max: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let n = rng.random_range(2..=n_max);
        let p = rng.random_range(0.05..0.6);
        let g = generate_random_graph(n, p, rng.random());
        if g.max_degree() > 0 {
            return g;
        }
    }
}

fn c1() -> Check {
    let mut rng = rng(1);
    let mut clients = 0;
    for i in 0..500 {
        let n = rng.random_range(1..=1000);
        let t = random_rooted_tree(n, &mut rng);
        let inst = random_clients(n, &mut rng);
        clients += inst.count();
        let d = p_up(&t, &inst, false).map_err(|e| e.to_string())?;
        ensure!(d.dominates(t.graph(), &inst), "pair {i}: p_up output does not dominate");
        let (opt, _) = cds_tree_dp(&t, &inst.clients);
        ensure!(d.size() == opt, "pair {i} (n={n}): p_up {} vs optimum {opt}", d.size());
    }
    for k in (2..=12).step_by(2) {
        let (g, inst) = gen_path_lb_instances(PathLbKind::C1, k).map_err(|e| e.to_string())?;
        let t = root_at(&g, 0).map_err(|e| e.to_string())?;
        let d = p_up(&t, &inst, false).map_err(|e| e.to_string())?;
        // v3, v7, ... are ids 2, 6, ...
        let want: Vec<usize> = (0..k).map(|i| 2 + 4 * i).collect();
        ensure!(d.vertices() == want, "C1 k={k}: {:?}", d.vertices());
        ensure!(cds_tree_dp(&t, &inst.clients).0 == k, "C1 k={k}: optimum differs from k");
    }
    Ok(format!("500 random pairs ({clients} clients) and C1 fixtures k=2..12 exact"))
}

fn c2() -> Check {
    let mut rng = rng(2);
    let mut failures = Vec::new();
    let mut worst: Vec<String> = Vec::new();
    for k in [5usize, 9, 17] {
        let mut max_ratio = 0.0f64;
        let mut bad = 0;
        for i in 0..200 {
            let n = rng.random_range(1..=2000);
            let t = random_rooted_tree(n, &mut rng);
            let inst = random_clients(n, &mut rng);
            let (set, report) = appr_distributed(&t, k, &inst).map_err(|e| e.to_string())?;
            ensure!(set.dominates(t.graph(), &inst), "k={k} tree {i}: appr output does not dominate");
            ensure!(report.rounds <= 2 * k + 1, "k={k} tree {i}: {} rounds", report.rounds);
            let (opt, _) = cds_tree_dp(&t, &inst.clients);
            // |D| <= (1 + 4/(k-1)) OPT  <=>  |D| (k-1) <= OPT (k+3)
            if set.size() * (k - 1) > opt * (k + 3) {
                bad += 1;
            }
            if opt > 0 {
                max_ratio = max_ratio.max(set.size() as f64 / opt as f64);
            }
        }
        if bad > 0 {
            failures.push(format!("k={k}: {bad}/200 instances above 1+4/(k-1)"));
        }
        worst.push(format!("k={k} max ratio {max_ratio:.4} (bound {:.4})", 1.0 + 4.0 / (k as f64 - 1.0)));

        let mut rounds = Vec::new();
        for n in [100usize, 1000, 10000] {
            let t = random_rooted_tree(n, &mut rng);
            let inst = random_clients(n, &mut rng);
            let prog = ApprProgram::new(k, t.root()).map_err(|e| e.to_string())?;
            let pre = run_preprocess(t.graph(), &prog).map_err(|e| e.to_string())?;
            ensure!(
                pre.s_sup_bits() <= appr_payload_bits(k),
                "k={k} n={n}: {} preprocessing bits, declared {}",
                pre.s_sup_bits(),
                appr_payload_bits(k)
            );
            let rep = run_instance(t.graph(), &pre, &prog, &inst.to_instance(), prog.round_bound())
                .map_err(|e| e.to_string())?;
            ensure!(rep.rounds <= 3 * k, "k={k} n={n}: {} rounds exceed 3k", rep.rounds);
            rounds.push(rep.rounds);
        }
        worst.push(format!("rounds {rounds:?} <= 3k"));
    }
    if failures.is_empty() {
        Ok(worst.join("; "))
    } else {
        Err(format!("{}; {}", failures.join("; "), worst.join("; ")))
    }
}

fn c3() -> Check {
    let mut rng = rng(3);
    let mut max_ratio = 0.0f64;
    for i in 0..200 {
        let n = rng.random_range(1..=18);
        let g = generate_random_planar(n, rng.random());
        let inst = random_clients(n, &mut rng);
        let d = approx39(&g, &inst);
        ensure!(d.dominates(&g, &inst), "graph {i}: approx39 output does not dominate");
        let (opt, _) = cds_bruteforce(&g, &inst.clients, 18).map_err(|e| e.to_string())?;
        ensure!(d.size() <= 39 * opt, "graph {i}: {} > 39 * {opt}", d.size());
        if opt > 0 {
            max_ratio = max_ratio.max(d.size() as f64 / opt as f64);
        }
    }
    let mut rounds = Vec::new();
    for n in [100usize, 1000, 10000] {
        let g = generate_random_planar(n, rng.random());
        let inst = random_clients(n, &mut rng);
        let pre = run_preprocess(&g, &Approx39Program).map_err(|e| e.to_string())?;
        let rep = run_instance(&g, &pre, &Approx39Program, &inst.to_instance(), APPROX39_RADIUS)
            .map_err(|e| e.to_string())?;
        ensure!(
            is_client_dominating(&g, &inst.clients, &rep.unwrap_outputs()),
            "n={n}: distributed output does not dominate"
        );
        ensure!(approx39(&g, &inst).members == rep.unwrap_outputs(), "n={n}: distributed and central outputs differ");
        rounds.push(rep.rounds);
    }
    ensure!(rounds.iter().all(|&r| r == rounds[0]), "rounds vary with n: {rounds:?}");
    Ok(format!("observed max ratio {max_ratio:.3} over 200 graphs; rounds {rounds:?} for n=10^2..10^4"))
}

fn c4() -> Check {
    let mut rng = rng(4);
    let mut levels = 0;
    let mut worst = [0.0f64; 2];
    for i in 0..100 {
        let n = rng.random_range(1..=18);
        let seed = rng.random();
        let g = generate_random_planar(n, seed);
        let inst = random_clients(n, &mut rng);
        let nrc = compute_nonrepetitive_coloring(&g, &NrcOptions { seed, ..Default::default() })
            .map_err(|e| e.to_string())?;
        let (opt, _) = cds_bruteforce(&g, &inst.clients, 18).map_err(|e| e.to_string())?;
        for (j, (eps, num, den)) in [(1.0, 2, 1), (0.5, 3, 2)].into_iter().enumerate() {
            let opts = CtasOptions { measure_diameters: true, ..Default::default() };
            let (d, run) = ctas(&g, &inst, eps, &nrc, &opts).map_err(|e| e.to_string())?;
            ensure!(d.dominates(&g, &inst), "graph {i} eps={eps}: output does not dominate");
            ensure!(d.size() * den <= opt * num, "graph {i} eps={eps}: {} vs OPT {opt}", d.size());
            if opt > 0 {
                worst[j] = worst[j].max(d.size() as f64 / opt as f64);
            }
            for (t, st) in run.trace.iter().enumerate() {
                ensure!(
                    st.decays(),
                    "graph {i} eps={eps} level {t}: weight {} -> {}",
                    st.weight,
                    st.weight_next
                );
                if let Some(m) = st.measured_diameter {
                    ensure!(m as u64 <= st.diameter_bound, "graph {i} level {t}: diameter {m} > {}", st.diameter_bound);
                }
                let next = run.trace.get(t + 1).map_or(run.clusters.diameter_bound, |s| s.diameter_bound);
                ensure!(next <= 3 * st.diameter_bound + 2, "graph {i} level {t}: d grows to {next}");
                levels += 1;
            }
        }
    }
    Ok(format!("{levels} contraction steps checked; max ratio {:.3} (eps=1), {:.3} (eps=0.5)", worst[0], worst[1]))
}

fn c5() -> Check {
    let mut graphs = 0;
    let mut max_used = 0;
    for n in 1..=40usize {
        for seed in 0..5u64 {
            let g = generate_random_planar(n, 1000 * n as u64 + seed);
            let nrc = compute_nonrepetitive_coloring(&g, &NrcOptions { seed, ..Default::default() })
                .map_err(|e| format!("n={n} seed={seed}: {e}"))?;
            ensure!(nrc.palette <= 768, "n={n}: palette {}", nrc.palette);
            ensure!(nrc.colors.iter().all(|&c| c >= 1 && c <= nrc.palette), "n={n}: color outside palette");
            nrc.verify(&g, None).map_err(|e| format!("n={n} seed={seed}: {e}"))?;
            max_used = max_used.max(nrc.colors.iter().copied().collect::<std::collections::BTreeSet<_>>().len());
            graphs += 1;
        }
    }
    Ok(format!("{graphs} planar graphs verified exhaustively; at most {max_used} distinct colors of 768"))
}

fn c6() -> Check {
    let mut rng = rng(6);
    // (a)
    for i in 0..1000 {
        let g = random_sparse(40, &mut rng);
        let dc = DefaultColoring::compute(&g);
        let pc = random_pc(&g, rng.random_range(0.0..0.7), 6, &mut rng);
        let c = cc_single_round(&g, &dc, &pc).map_err(|e| format!("(a) {i}: {e}"))?;
        ensure!(c.report.rounds == 1, "(a) {i}: {} rounds", c.report.rounds);
        ensure!(is_proper_completion(&g, &pc, &c.colors), "(a) {i}: improper");
        let bound = dc.chi as usize * g.max_degree();
        ensure!(c.stats.chi_new <= bound, "(a) {i}: chi_new {} > chi*Delta {bound}", c.stats.chi_new);
    }
    // (b)
    let mut runs_b = 0;
    for i in 0..300 {
        let g = random_sparse(40, &mut rng);
        let dc = DefaultColoring::compute(&g);
        let pc = random_pc(&g, rng.random_range(0.0..0.7), 6, &mut rng);
        let delta = g.max_degree();
        for k in 1..=dc.chi {
            let c = cc_k_rounds(&g, &dc, &pc, k).map_err(|e| format!("(b) {i} k={k}: {e}"))?;
            ensure!(c.report.rounds <= k as usize, "(b) {i} k={k}: {} rounds", c.report.rounds);
            ensure!(is_proper_completion(&g, &pc, &c.colors), "(b) {i} k={k}: improper");
            let bound = (dc.chi.div_ceil(k) as usize * delta).max(delta + 1);
            ensure!(c.stats.chi_new <= bound, "(b) {i} k={k}: chi_new {} > {bound}", c.stats.chi_new);
            runs_b += 1;
        }
    }
    // (c)
    let mut worst_c = 0.0f64;
    for i in 0..300 {
        let g = random_sparse(12, &mut rng);
        let dc = DefaultColoring::compute(&g);
        let pc = random_pc(&g, rng.random_range(0.0..0.7), 5, &mut rng);
        let c = cc_priority_recoloring(&g, &dc, &pc).map_err(|e| format!("(c) {i}: {e}"))?;
        ensure!(is_proper_completion(&g, &pc, &c.colors), "(c) {i}: improper");
        ensure!(c.stats.chi_new <= dc.chi as usize, "(c) {i}: chi_new {} > chi {}", c.stats.chi_new, dc.chi);
        let (opt_all, _) = cc_exact(&g, &pc, CcObjective::ChiAll, 12).map_err(|e| e.to_string())?;
        ensure!(c.stats.chi_all <= 2 * opt_all, "(c) {i}: chi_all {} > 2 * {opt_all}", c.stats.chi_all);
        worst_c = worst_c.max(c.stats.chi_all as f64 / opt_all.max(1) as f64);
    }
    // (d)
    let mut families = 0;
    for n in 2..=12usize {
        for delta in 1..=3usize {
            let fam = build_set_family(n, delta, 0).map_err(|e| format!("(d) n={n} delta={delta}: {e}"))?;
            ensure!(fam.m == universe_size(n, delta), "(d) n={n} delta={delta}: m={}", fam.m);
            fam.verify(FamilyCheck::Exhaustive, 0).map_err(|v| format!("(d) n={n} delta={delta}: {v:?}"))?;
            families += 1;
        }
    }
    for i in 0..500 {
        let g = loop {
            let g = random_sparse(12, &mut rng);
            if (1..=3).contains(&g.max_degree()) {
                break g;
            }
        };
        let fam = build_set_family(g.n(), g.max_degree(), 0).map_err(|e| e.to_string())?;
        let pc = random_pc(&g, rng.random_range(0.0..0.7), fam.m as u32, &mut rng);
        let c = cc_no_preprocess(&g, &pc, &fam).map_err(|e| format!("(d) trial {i}: {e}"))?;
        ensure!(c.report.rounds == 1, "(d) trial {i}: {} rounds", c.report.rounds);
        ensure!(is_proper_completion(&g, &pc, &c.colors), "(d) trial {i}: improper");
    }
    Ok(format!(
        "(a) 1000 single-round; (b) {runs_b} k-round runs; (c) max chi_all/OPT {worst_c:.3}; (d) {families} families exhaustive, 500 trials"
    ))
}

/// Smallest walk cap at which some closed walk of length `k <= alpha`
/// through a vertex `v` has every residue mod `k` reachable from a start and
/// to a terminal, by breadth-first search over (vertex, length mod k).
fn required_cap(s: &LclSpec) -> Option<usize> {
    let dg = s.digraph();
    let alpha = dg.alpha();
    let shortest = |sources: Vec<usize>, forward: bool, k: usize| {
        let mut dist = vec![vec![None; k]; alpha];
        let mut q = VecDeque::new();
        for u in sources {
            dist[u][0] = Some(0usize);
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
            if !layer[v] {
                continue;
            }
            let need: Option<Vec<usize>> =
                (0..k).map(|r| from_s[v][r].zip(to_t[v][r]).map(|(a, b)| a.max(b))).collect();
            if let Some(m) = need.and_then(|n| n.into_iter().max()) {
                best = Some(best.map_or(m, |b| b.min(m)));
            }
        }
    }
    best
}

fn all_labellings(sigma: usize, n: usize) -> Vec<Vec<Label>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|l| {
                (0..sigma as Label).map(move |c| {
                    let mut l = l.clone();
                    l.push(c);
                    l
                })
            })
            .collect();
    }
    out
}

/// Kahn's algorithm on the label digraph.
fn is_acyclic(s: &LclSpec) -> bool {
    let dg = s.digraph();
    let n = dg.alpha();
    let mut indeg: Vec<usize> = (0..n).map(|v| dg.predecessors(v).len()).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = queue.pop() {
        seen += 1;
        for &w in dg.successors(u) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    seen == n
}

fn subpath(g: &Graph, a: usize, b: usize) -> RecurrentInstance {
    RecurrentInstance::EdgeSubset((0..g.m()).map(|e| e >= a && e < b).collect())
}

fn c7() -> Check {
    // (a)
    let mut checked = 0u64;
    for s in bundled() {
        let dg = s.digraph();
        for n in 0..=10 {
            if (s.sigma() as f64).powi(n as i32) > 2e6 {
                continue;
            }
            let mut valid = 0u128;
            for l in all_labellings(s.sigma(), n) {
                ensure!(s.is_valid(&l) == dg.accepts(&l), "(a) {} {l:?}", s.name);
                valid += u128::from(s.is_valid(&l));
                checked += 1;
            }
            ensure!(valid == lcl_count(&s, n), "(a) {} n={n}: count mismatch", s.name);
        }
    }
    // (b)
    for (name, want) in [
        ("mis", Complexity::Theta1),
        ("two-coloring", Complexity::Theta1),
        ("increasing", Complexity::ThetaN),
    ] {
        let s = bundled_spec(name).ok_or(format!("missing spec {name}"))?;
        if want == Complexity::ThetaN {
            ensure!(is_acyclic(&s), "(b) {name}: digraph has a cycle");
        }
        let got = classify(&s).map_err(|e| e.to_string())?.complexity;
        ensure!(got == want, "(b) {name}: {got:?}");
    }
    // (c)
    let mut flips = Vec::new();
    for (p1, p2) in [(4, 5), (5, 7), (7, 9)] {
        let s = coprime_cycles(p1, p2);
        let need = required_cap(&s).ok_or("(c) criterion never holds")?;
        ensure!(need >= p1 * p2 - p1.max(p2), "(c) ({p1},{p2}): required cap {need} too small");
        let below = classify_with_cap(&s, need - 1).map_err(|e| e.to_string())?.complexity;
        let at = classify_with_cap(&s, need).map_err(|e| e.to_string())?.complexity;
        ensure!(below == Complexity::ThetaN && at == Complexity::Theta1, "(c) ({p1},{p2}): {below:?} / {at:?} at {need}");
        flips.push(format!("({p1},{p2})@{need}"));
    }
    // (d), (e)
    let mut rounds_by_spec = Vec::new();
    for s in bundled() {
        let solver = match PathSolver::new(&s) {
            Ok(p) => p,
            Err(_) => {
                ensure!(classify(&s).map_err(|e| e.to_string())?.complexity == Complexity::ThetaN, "(d) {}", s.name);
                continue;
            }
        };
        let g = generate_path(200).map_err(|e| e.to_string())?;
        let pre = run_preprocess(&g, &solver).map_err(|e| e.to_string())?;
        ensure!((0..200).all(|v| pre.payload(v).len_bits() == 2), "(e) {}: payload is not 2 bits", s.name);
        for a in 0..200 {
            for b in a..200 {
                let inst = subpath(&g, a, b);
                let rep = run_instance(&g, &pre, &solver, &inst, solver.round_bound()).map_err(|e| e.to_string())?;
                ensure!(validate_outputs(&s, &g, &inst, &rep.outputs).valid, "(d) {} subpath [{a},{b}]", s.name);
            }
        }
        let mut rounds = Vec::new();
        for n in [200usize, 2000, 20000] {
            let g = generate_path(n).map_err(|e| e.to_string())?;
            let pre = run_preprocess(&g, &solver).map_err(|e| e.to_string())?;
            ensure!(pre.s_sup_bits() == 2, "(e) {} n={n}: {} bits", s.name, pre.s_sup_bits());
            let inst = RecurrentInstance::all_edges(&g);
            let rep = run_instance(&g, &pre, &solver, &inst, solver.round_bound()).map_err(|e| e.to_string())?;
            ensure!(validate_outputs(&s, &g, &inst, &rep.outputs).valid, "(d) {} P_{n}", s.name);
            rounds.push(rep.rounds);
        }
        ensure!(rounds.iter().all(|&r| r == rounds[0]), "(d) {}: rounds {rounds:?}", s.name);
        rounds_by_spec.push(format!("{}={}", s.name, rounds[0]));
    }
    // (f)
    let s = bundled_spec("mis").ok_or("missing mis")?;
    let solver = PathSolver::new(&s).map_err(|e| e.to_string())?;
    let t = solver.round_bound();
    let g = generate_path(500).map_err(|e| e.to_string())?;
    let sp = Speedup::new(solver, |_| t, 4 * t + 1).map_err(|e| e.to_string())?;
    let pre = run_preprocess(&g, &sp).map_err(|e| e.to_string())?;
    let mut rng = rng(7);
    let mut insts = vec![RecurrentInstance::all_edges(&g)];
    insts.extend((0..20).map(|_| RecurrentInstance::EdgeSubset((0..g.m()).map(|_| !rng.random_bool(0.01)).collect())));
    let reports = run_stream_with(Execution::Sequential, &g, &pre, &sp, &insts, 10 * t, |inst, out| {
        let flat: Vec<Option<Option<Label>>> = out.iter().map(|o| o.clone().flatten()).collect();
        validate_outputs(&s, &g, inst, &flat)
    });
    for r in &reports {
        ensure!(r.error.is_none() && r.valid == Some(true), "(f) instance {}: {:?}", r.index, r.error);
    }
    Ok(format!(
        "(a) {checked} labellings; (c) flips {}; (d) rounds {}; (f) {} speedup runs",
        flips.join(" "),
        rounds_by_spec.join(" "),
        reports.len()
    ))
}

fn random_mask(g: &Graph, rng: &mut ChaCha8Rng) -> SubgraphInstance {
    let p = rng.random_range(0.1..=1.0);
    SubgraphInstance { active: (0..g.m()).map(|_| rng.random_bool(p)).collect() }
}

fn c8() -> Check {
    let mut rng = rng(8);
    for i in 0..500 {
        let n = rng.random_range(1..=1000);
        let t = random_rooted_tree(n, &mut rng);
        let inst = random_mask(t.graph(), &mut rng);
        let (m, rep) = mm_tree(&t, &inst).map_err(|e| e.to_string())?;
        ensure!(is_maximal_matching(t.graph(), &inst.active, &m.partner), "mm_tree {i}: not maximal");
        ensure!(rep.rounds <= 6, "mm_tree {i}: {} rounds", rep.rounds);
    }
    let mut max_forests = 0;
    for i in 0..100 {
        let n = rng.random_range(1..=2000);
        let g = generate_random_planar(n, rng.random());
        let fd = forest_decompose(&g, 6).map_err(|e| e.to_string())?;
        let inst = random_mask(&g, &mut rng);
        let (m, rep) = mm_arboricity(&g, &fd, &inst).map_err(|e| e.to_string())?;
        ensure!(is_maximal_matching(&g, &inst.active, &m.partner), "mm_arboricity {i}: not maximal");
        ensure!(rep.rounds <= 7 * fd.len(), "mm_arboricity {i}: {} rounds, {} forests", rep.rounds, fd.len());
        max_forests = max_forests.max(fd.len());
    }
    for i in 0..200 {
        let g = random_sparse(200, &mut rng);
        let (chi, colors) = greedy_chromatic_upper(&g);
        let inst = random_mask(&g, &mut rng);
        let (set, rep) = mis_by_coloring(&g, &colors, &inst).map_err(|e| e.to_string())?;
        ensure!(
            recurrent_core::oracles::validate::is_maximal_independent(&g, &inst.active, &set),
            "mis_by_coloring {i}: not a maximal independent set"
        );
        ensure!(rep.rounds <= chi, "mis_by_coloring {i}: {} rounds with {chi} colors", rep.rounds);
    }
    let mut splits = 0;
    for i in 0..200 {
        let g = loop {
            let g = random_sparse(300, &mut rng);
            if g.max_degree() >= 3 {
                break g;
            }
        };
        let delta = g.max_degree();
        for d in [2, 3, delta] {
            let part = degree_split(&g, d).map_err(|e| e.to_string())?;
            ensure!(
                part.max_induced_degree(&g) <= delta.div_ceil(d),
                "degree_split {i} d={d}: induced degree {} > {}",
                part.max_induced_degree(&g),
                delta.div_ceil(d)
            );
            splits += 1;
        }
    }
    Ok(format!("500 tree matchings; 100 planar matchings (up to {max_forests} forests); 200 MIS; {splits} splits"))
}

/// Mutates the inputs of vertices (or edges with both endpoints) farther
/// than `r` from the probed vertex.
fn mutate_far(
    g: &Graph,
    inst: &RecurrentInstance,
    far: &[bool],
    max_color: u32,
    rng: &mut ChaCha8Rng,
) -> RecurrentInstance {
    match inst {
        RecurrentInstance::ClientSet(c) => RecurrentInstance::ClientSet(
            c.iter().enumerate().map(|(v, &x)| if far[v] && rng.random_bool(0.5) { !x } else { x }).collect(),
        ),
        RecurrentInstance::Precoloring(pc) => {
            let mut pc = pc.clone();
            for v in (0..g.n()).filter(|&v| far[v]) {
                if !rng.random_bool(0.5) {
                    continue;
                }
                pc.remove(&v);
                if rng.random_bool(0.5) {
                    let c = rng.random_range(1..=max_color);
                    if g.neighbors(v).iter().all(|w| pc.get(w) != Some(&c)) {
                        pc.insert(v, c);
                    }
                }
            }
            RecurrentInstance::Precoloring(pc)
        }
        RecurrentInstance::EdgeSubset(mask) => RecurrentInstance::EdgeSubset(
            mask.iter()
                .enumerate()
                .map(|(e, &x)| {
                    let (u, v) = g.edge(e);
                    if far[u] && far[v] && rng.random_bool(0.5) {
                        !x
                    } else {
                        x
                    }
                })
                .collect(),
        ),
        other => other.clone(),
    }
}

/// Runs `count` probes; each picks an instance and a vertex, mutates inputs
/// outside the ball whose radius is the number of rounds of the base run,
/// and compares that vertex's output.
fn probe<P: NodeProgram>(
    name: &str,
    g: &Graph,
    p: &P,
    cap: usize,
    base: &[RecurrentInstance],
    max_color: u32,
    seed: u64,
) -> Result<usize, String> {
    let pre = run_preprocess(g, p).map_err(|e| format!("{name}: {e}"))?;
    let reports = base
        .iter()
        .map(|inst| run_instance(g, &pre, p, inst, cap).map_err(|e| format!("{name}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = rng(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        ensure!(attempts < 10_000, "{name}: could not find probes with inputs outside the ball");
        let i = rng.random_range(0..base.len());
        let (inst, rep) = (&base[i], &reports[i]);
        let v = rng.random_range(0..g.n());
        let dist = g.bfs(v);
        let far: Vec<bool> = dist.iter().map(|&d| d > rep.rounds).collect();
        let mutated = mutate_far(g, inst, &far, max_color, &mut rng);
        if &mutated == inst {
            continue;
        }
        let rep2 = run_instance(g, &pre, p, &mutated, cap).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            rep.outputs[v] == rep2.outputs[v],
            "{name}: output of {v} changed under a mutation beyond radius {}",
            rep.rounds
        );
        done += 1;
    }
    Ok(done)
}

fn json_of<P: NodeProgram>(
    exec: Execution,
    g: &Graph,
    p: &P,
    insts: &[RecurrentInstance],
    cap: usize,
) -> Result<String, String> {
    let pre = run_preprocess(g, p).map_err(|e| e.to_string())?;
    let reports = run_stream_with(exec, g, &pre, p, insts, cap, |_, _| Verdict::valid(true));
    Ok(reports.iter().map(|r| r.to_json()).collect::<Vec<_>>().join("\n"))
}

fn deterministic<P: NodeProgram>(name: &str, g: &Graph, p: &P, insts: &[RecurrentInstance], cap: usize) -> Check {
    let a = json_of(Execution::Sequential, g, p, insts, cap)?;
    let b = json_of(Execution::Sequential, g, p, insts, cap)?;
    let c = json_of(Execution::Parallel, g, p, insts, cap)?;
    ensure!(a == b, "{name}: repeated sequential runs differ");
    ensure!(a == c, "{name}: parallel run differs from sequential");
    Ok(name.to_string())
}

fn c9() -> Check {
    let mut rng = rng(9);
    let mut names = Vec::new();
    let mut probes = 0;

    let tree = random_rooted_tree(400, &mut rng);
    let tg = tree.graph();
    let appr = ApprProgram::new(5, tree.root()).map_err(|e| e.to_string())?;
    let clients: Vec<_> = (0..6).map(|_| random_clients(400, &mut rng).to_instance()).collect();
    probes += probe("appr", tg, &appr, appr.round_bound(), &clients, 0, 91)?;
    names.push(deterministic("appr", tg, &appr, &clients, appr.round_bound())?);

    let pg = generate_random_planar(400, 5);
    let pclients: Vec<_> = (0..6).map(|_| random_clients(400, &mut rng).to_instance()).collect();
    probes += probe("approx39", &pg, &Approx39Program, APPROX39_RADIUS, &pclients, 0, 92)?;
    names.push(deterministic("approx39", &pg, &Approx39Program, &pclients, APPROX39_RADIUS)?);

    let sg = generate_random_graph(300, 0.01, 6);
    let dc = DefaultColoring::compute(&sg);
    let pcs: Vec<_> =
        (0..6).map(|_| RecurrentInstance::Precoloring(random_pc(&sg, 0.3, 8, &mut rng))).collect();
    let single = KRoundCompletion::single_round(&sg, dc.clone());
    probes += probe("single-round", &sg, &single, single.round_cap(), &pcs, 8, 93)?;
    let kround = KRoundCompletion::new(&sg, dc.clone(), 2.min(dc.chi)).map_err(|e| e.to_string())?;
    probes += probe("k-round", &sg, &kround, kround.round_cap(), &pcs, 8, 94)?;
    names.push(deterministic("k-round", &sg, &kround, &pcs, kround.round_cap())?);
    let prio = PriorityRecoloring::new(dc);
    probes += probe("priority", &sg, &prio, prio.round_cap(), &pcs, 8, 95)?;
    names.push(deterministic("priority", &sg, &prio, &pcs, prio.round_cap())?);

    let cyc = recurrent_core::graph::generate_cycle(60).map_err(|e| e.to_string())?;
    let fam = build_set_family(60, 2, 0).map_err(|e| e.to_string())?;
    let fpcs: Vec<_> =
        (0..6).map(|_| RecurrentInstance::Precoloring(random_pc(&cyc, 0.3, fam.m as u32, &mut rng))).collect();
    let famc = FamilyCompletion::new(&fam);
    probes += probe("family", &cyc, &famc, 2, &fpcs, fam.m as u32, 96)?;
    names.push(deterministic("family", &cyc, &famc, &fpcs, 2)?);

    let path = generate_path(600).map_err(|e| e.to_string())?;
    let s = bundled_spec("mis").ok_or("missing mis")?;
    let solver = PathSolver::new(&s).map_err(|e| e.to_string())?;
    let masks: Vec<_> = (0..6)
        .map(|_| RecurrentInstance::EdgeSubset((0..path.m()).map(|_| !rng.random_bool(0.01)).collect()))
        .collect();
    probes += probe("path-solver", &path, &solver, solver.round_bound(), &masks, 0, 97)?;
    names.push(deterministic("path-solver", &path, &solver, &masks, solver.round_bound())?);
    let t = solver.round_bound();
    let short = generate_path(300).map_err(|e| e.to_string())?;
    let short_masks: Vec<_> = (0..6)
        .map(|_| RecurrentInstance::EdgeSubset((0..short.m()).map(|_| !rng.random_bool(0.005)).collect()))
        .collect();
    let sp = Speedup::new(solver, |_| t, 4 * t + 1).map_err(|e| e.to_string())?;
    probes += probe("speedup", &short, &sp, 10 * t, &short_masks, 0, 98)?;
    names.push(deterministic("speedup", &short, &sp, &short_masks, 10 * t)?);

    let fm = ForestMatching::tree(&tree);
    let tmasks: Vec<_> = (0..6).map(|_| random_mask(tg, &mut rng).to_instance()).collect();
    probes += probe("mm-tree", tg, &fm, fm.round_bound(), &tmasks, 0, 99)?;
    names.push(deterministic("mm-tree", tg, &fm, &tmasks, fm.round_bound())?);
    // a grid has room outside the larger ball
    let side = 40;
    let grid_edges: Vec<(usize, usize)> = (0..side * side)
        .flat_map(|v| {
            let right = (v % side + 1 < side).then_some((v, v + 1));
            let down = (v + side < side * side).then_some((v, v + side));
            right.into_iter().chain(down)
        })
        .collect();
    let grid = Graph::new(side * side, &grid_edges).map_err(|e| e.to_string())?;
    let fd = forest_decompose(&grid, 6).map_err(|e| e.to_string())?;
    let fa = ForestMatching::new(&grid, &fd).map_err(|e| e.to_string())?;
    let gmasks: Vec<_> = (0..6).map(|_| random_mask(&grid, &mut rng).to_instance()).collect();
    probes += probe("mm-arboricity", &grid, &fa, fa.round_bound(), &gmasks, 0, 100)?;
    names.push(deterministic("mm-arboricity", &grid, &fa, &gmasks, fa.round_bound())?);

    let (_, colors) = greedy_chromatic_upper(&sg);
    let cm = ColorMis::new(&sg, colors.clone()).map_err(|e| e.to_string())?;
    let smasks: Vec<_> = (0..6).map(|_| random_mask(&sg, &mut rng).to_instance()).collect();
    probes += probe("color-mis", &sg, &cm, cm.round_bound(), &smasks, 0, 101)?;
    names.push(deterministic("color-mis", &sg, &cm, &smasks, cm.round_bound())?);
    let parts = degree_split(&sg, 2.min(sg.max_degree())).map_err(|e| e.to_string())?.parts();
    let split = MisSplit::new(&sg, &parts, cm).map_err(|e| e.to_string())?;
    probes += probe("mis-split", &sg, &split, split.round_bound(), &smasks, 0, 102)?;
    names.push(deterministic("mis-split", &sg, &split, &smasks, split.round_bound())?);

    // centralized pipelines serialize identically too
    let nrc = compute_nonrepetitive_coloring(&generate_random_planar(18, 3), &NrcOptions::default())
        .map_err(|e| e.to_string())?;
    let g18 = generate_random_planar(18, 3);
    let inst18 = random_clients(18, &mut rng);
    let opts = CtasOptions { measure_diameters: true, ..Default::default() };
    let runs: Vec<String> = (0..2)
        .map(|_| {
            let (d, run) = ctas(&g18, &inst18, 0.5, &nrc, &opts).expect("ctas runs");
            format!("{:?}{}", d.vertices(), serde_json::to_string(&run).expect("serializable"))
        })
        .collect();
    ensure!(runs[0] == runs[1], "ctas: repeated runs differ");
    names.push("ctas".into());

    Ok(format!("{probes} locality probes over 11 programs; identical reports for {}", names.join(", ")))
}

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(usize, &str, fn() -> Check); 9] = [
        (1, "CDS exactness", c1),
        (2, "tree CTAS ratio", c2),
        (3, "planar 39-approximation", c3),
        (4, "planar CTAS", c4),
        (5, "non-repetitive coloring", c5),
        (6, "color completion", c6),
        (7, "LCL on paths", c7),
        (8, "matching and MIS", c8),
        (9, "determinism and locality", c9),
    ];
    let mut failed = 0;
    for (id, title, f) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} ({title}): PASS [{secs:.1}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} ({title}): FAIL [{secs:.1}s] {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
