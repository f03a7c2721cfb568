use super::*;
use crate::graph::{
    forest_decompose, generate_complete, generate_cycle, generate_path, generate_random_graph, generate_random_planar,
    generate_random_tree, greedy_chromatic_upper, root_at, ForestDecomposition, Graph,
};
use crate::oracles::validate::{is_maximal_independent, is_maximal_matching};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mask(g: &Graph, p: f64, rng: &mut ChaCha8Rng) -> SubgraphInstance {
    SubgraphInstance::new(g, (0..g.m()).map(|_| rng.random_bool(p)).collect()).unwrap()
}

#[test]
fn empty_instance_matches_nothing() {
    let t = root_at(&generate_random_tree(30, 1), 0).unwrap();
    let (m, report) = mm_tree(&t, &SubgraphInstance::empty(t.graph())).unwrap();
    assert_eq!(m.size(), 0);
    assert_eq!(report.valid, Some(true));
    assert_eq!(report.rounds, 0);
}

#[test]
fn single_active_edge_is_matched() {
    let t = root_at(&generate_random_tree(40, 2), 0).unwrap();
    for v in [5, 17, 39] {
        let p = t.parent(v).unwrap();
        let inst = SubgraphInstance::from_edges(t.graph(), &[(v, p)]).unwrap();
        let (m, report) = mm_tree(&t, &inst).unwrap();
        assert_eq!(m.partner[v], Some(p));
        assert_eq!(m.partner[p], Some(v));
        assert_eq!(m.size(), 1);
        assert!(report.rounds <= 6);
    }
}

#[test]
fn tree_matchings_are_maximal_within_six_rounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..40 {
        let n = rng.random_range(2..=1000);
        let g = generate_random_tree(n, seed);
        let t = root_at(&g, rng.random_range(0..n)).unwrap();
        for p in [1.0, 0.7, 0.3] {
            let inst = random_mask(&g, p, &mut rng);
            let (m, report) = mm_tree(&t, &inst).unwrap();
            assert!(is_maximal_matching(&g, &inst.active, &m.partner), "seed {seed} p {p}");
            assert!(report.rounds <= 6);
            // every matched edge joins a child to its parent, and the parent
            // side never requested in the phase of its child
            for e in m.edges(&g) {
                let (u, v) = g.edge(e);
                let (child, parent) = if t.parent(u) == Some(v) { (u, v) } else { (v, u) };
                assert_eq!(t.parent(child), Some(parent));
                assert_ne!(t.depth(child) % 2, t.depth(parent) % 2);
            }
        }
    }
}

#[test]
fn matches_go_to_the_lowest_requesting_child() {
    // star rooted at its center: every leaf requests in phase 1
    let g = crate::graph::generate_star(6).unwrap();
    let t = root_at(&g, 0).unwrap();
    let (m, _) = mm_tree(&t, &SubgraphInstance::full(&g)).unwrap();
    assert_eq!(m.partner[0], Some(1));
    let inst = SubgraphInstance::from_edges(&g, &[(0, 3), (0, 5)]).unwrap();
    let (m, _) = mm_tree(&t, &inst).unwrap();
    assert_eq!(m.partner[0], Some(3));
}

#[test]
fn one_forest_decomposition_equals_tree_matching() {
    let g = generate_random_tree(200, 9);
    let t = root_at(&g, 0).unwrap();
    let fd = ForestDecomposition { forests: vec![(0..g.m()).collect()] };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let inst = random_mask(&g, 0.8, &mut rng);
        let (a, ra) = mm_tree(&t, &inst).unwrap();
        let (b, rb) = mm_arboricity(&g, &fd, &inst).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra.rounds, rb.rounds);
    }
}

#[test]
fn four_cycle_with_two_forests() {
    let g = generate_cycle(4).unwrap();
    let fd = ForestDecomposition { forests: vec![vec![0, 1, 2], vec![3]] };
    let (m, report) = mm_arboricity(&g, &fd, &SubgraphInstance::full(&g)).unwrap();
    assert!(m.size() >= 1);
    assert_eq!(report.valid, Some(true));
    assert!(report.rounds <= 7 * 2);
}

#[test]
fn planar_matchings_are_maximal() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..10 {
        let g = generate_random_planar(300, seed);
        let fd = forest_decompose(&g, 6).unwrap();
        for p in [1.0, 0.5] {
            let inst = random_mask(&g, p, &mut rng);
            let (m, report) = mm_arboricity(&g, &fd, &inst).unwrap();
            assert!(is_maximal_matching(&g, &inst.active, &m.partner));
            assert!(report.rounds <= 7 * fd.len() && fd.len() <= 6);
        }
    }
}

#[test]
fn bad_decompositions_are_rejected() {
    let g = generate_cycle(4).unwrap();
    let cyclic = ForestDecomposition { forests: vec![vec![0, 1, 2, 3]] };
    assert!(matches!(mm_arboricity(&g, &cyclic, &SubgraphInstance::full(&g)), Err(MmError::InvalidDecomposition(_))));
    let partial = ForestDecomposition { forests: vec![vec![0, 1]] };
    assert!(matches!(ForestMatching::new(&g, &partial), Err(MmError::InvalidDecomposition(_))));
}

#[test]
fn no_active_edges_means_everyone_joins() {
    let g = generate_complete(5).unwrap();
    let colors = vec![1, 2, 3, 4, 5];
    let (set, report) = mis_by_coloring(&g, &colors, &SubgraphInstance::empty(&g)).unwrap();
    assert!(set.iter().all(|&s| s));
    assert_eq!(report.rounds, 0);
}

#[test]
fn colored_path_picks_the_ends() {
    let g = generate_path(3).unwrap();
    let (set, report) = mis_by_coloring(&g, &[1, 2, 1], &SubgraphInstance::full(&g)).unwrap();
    assert_eq!(set, vec![true, false, true]);
    assert!(report.rounds <= 2);
}

/// Sequential replay of the color schedule.
fn color_phases(g: &Graph, colors: &[u32], active: &[bool]) -> Vec<bool> {
    let max = colors.iter().copied().max().unwrap_or(0);
    let mut set = vec![false; g.n()];
    for c in 1..=max {
        for v in (0..g.n()).filter(|&v| colors[v] == c) {
            let blocked = g
                .neighbors(v)
                .iter()
                .zip(g.incident_edges(v))
                .any(|(&w, &e)| active[e] && set[w] && colors[w] < c);
            set[v] = !blocked;
        }
    }
    set
}

#[test]
fn greedy_coloring_mis_is_maximal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..25 {
        let g = generate_random_graph(rng.random_range(1..150), rng.random_range(0.01..0.2), seed);
        let (chi, colors) = greedy_chromatic_upper(&g);
        let inst = random_mask(&g, rng.random_range(0.2..1.0), &mut rng);
        let (set, report) = mis_by_coloring(&g, &colors, &inst).unwrap();
        assert!(is_maximal_independent(&g, &inst.active, &set));
        assert_eq!(set, color_phases(&g, &colors, &inst.active));
        assert!(report.rounds <= chi);
    }
}

#[test]
fn improper_colorings_are_rejected() {
    let g = generate_path(3).unwrap();
    for colors in [vec![1, 1, 2], vec![0, 1, 2], vec![1, 2]] {
        let r = mis_by_coloring(&g, &colors, &SubgraphInstance::full(&g));
        assert!(matches!(r, Err(MmError::InvalidColoring(_))), "{colors:?}");
    }
}

fn color_classes(colors: &[u32]) -> Vec<Vec<usize>> {
    let max = colors.iter().copied().max().unwrap_or(0) as usize;
    let mut parts = vec![Vec::new(); max];
    for (v, &c) in colors.iter().enumerate() {
        parts[c as usize - 1].push(v);
    }
    parts
}

#[test]
fn split_over_color_classes_reproduces_the_coloring_scheme() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..15 {
        let g = generate_random_graph(80, 0.08, seed);
        let (_, colors) = greedy_chromatic_upper(&g);
        let inst = random_mask(&g, 0.7, &mut rng);
        let (a, ra) = mis_by_coloring(&g, &colors, &inst).unwrap();
        let (b, rb) = mis_split(&g, &color_classes(&colors), EdgelessMis, &inst).unwrap();
        assert_eq!(a, b);
        assert!(rb.rounds <= color_classes(&colors).len() - 1);
        assert_eq!(ra.rounds, rb.rounds);
    }
}

#[test]
fn split_path_into_odd_and_even() {
    let g = generate_path(11).unwrap();
    let cover = vec![(0..11).step_by(2).collect(), (1..11).step_by(2).collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let inst = random_mask(&g, 0.6, &mut rng);
        let (set, report) = mis_split(&g, &cover, EdgelessMis, &inst).unwrap();
        assert!(is_maximal_independent(&g, &inst.active, &set));
        assert!(report.rounds <= 1);
    }
}

/// Line graph of the active edges of a tree, split by the parity of the
/// child's depth. Each part is a union of sibling cliques.
fn line_split(t: &crate::graph::RootedTree, active: &[bool]) -> (Graph, Vec<usize>, Vec<Vec<usize>>) {
    let g = t.graph();
    let kept: Vec<usize> = (0..g.m()).filter(|&e| active[e]).collect();
    let sub = g.edge_subgraph(|e| active[e]);
    let lg = line_graph(&sub);
    let mut cover = vec![Vec::new(), Vec::new()];
    for (i, &e) in kept.iter().enumerate() {
        let (u, v) = g.edge(e);
        let child = if t.parent(u) == Some(v) { u } else { v };
        cover[t.depth(child) % 2].push(i);
    }
    (lg, kept, cover)
}

#[test]
fn line_graph_split_gives_tree_matchings() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..20 {
        let g = generate_random_tree(rng.random_range(2..300), seed);
        let t = root_at(&g, 0).unwrap();
        let inst = random_mask(&g, if seed % 2 == 0 { 1.0 } else { 0.6 }, &mut rng);
        let (lg, kept, cover) = line_split(&t, &inst.active);
        let (set, report) = mis_split(&lg, &cover, CliqueMis, &SubgraphInstance::full(&lg)).unwrap();
        assert_eq!(report.valid, Some(true));
        assert!(report.rounds <= 2 + 1);
        let mut partner = vec![None; g.n()];
        for (i, _) in set.iter().enumerate().filter(|(_, &s)| s) {
            let (u, v) = g.edge(kept[i]);
            partner[u] = Some(v);
            partner[v] = Some(u);
        }
        assert!(is_maximal_matching(&g, &inst.active, &partner));
    }
}

#[test]
fn overlapping_cover_with_coloring_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for seed in 0..15 {
        let n = 60;
        let g = generate_random_graph(n, 0.1, seed);
        let k = rng.random_range(1..=4);
        let mut cover = vec![Vec::new(); k];
        for v in 0..n {
            cover[rng.random_range(0..k)].push(v);
            if rng.random_bool(0.3) {
                cover[rng.random_range(0..k)].push(v);
            }
        }
        let (_, colors) = greedy_chromatic_upper(&g);
        let inner = ColorMis::new(&g, colors).unwrap();
        let t = inner.round_bound();
        let inst = random_mask(&g, 0.8, &mut rng);
        let (set, report) = mis_split(&g, &cover, inner, &inst).unwrap();
        assert!(is_maximal_independent(&g, &inst.active, &set));
        assert!(report.rounds <= t * k + k - 1);
    }
}

#[test]
fn incomplete_cover_is_rejected() {
    let g = generate_path(4).unwrap();
    let r = mis_split(&g, &[vec![0, 1], vec![3]], EdgelessMis, &SubgraphInstance::full(&g));
    assert!(matches!(r, Err(MmError::InvalidCover(_))));
}

#[test]
fn degree_split_examples() {
    let g = generate_random_graph(50, 0.2, 1);
    let one = degree_split(&g, 1).unwrap();
    assert!(one.part.iter().all(|&p| p == 1));
    assert_eq!(one.max_induced_degree(&g), g.max_degree());

    let k4 = generate_complete(4).unwrap();
    let two = degree_split(&k4, 2).unwrap();
    assert!(two.parts().iter().all(|p| p.len() == 2));
    assert!(two.max_induced_degree(&k4) <= 2);

    for seed in 0..10 {
        let g = generate_random_graph(80, 0.1, seed);
        let full = degree_split(&g, g.max_degree()).unwrap();
        assert!(full.max_induced_degree(&g) <= 1);
    }
    assert!(matches!(degree_split(&k4, 0), Err(MmError::InvalidD { .. })));
    assert!(matches!(degree_split(&k4, 4), Err(MmError::InvalidD { .. })));
}

#[test]
fn degree_split_bound_and_move_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..30 {
        let g = generate_random_graph(rng.random_range(2..120), rng.random_range(0.05..0.5), seed);
        for d in 1..=g.max_degree().max(1) {
            let p = degree_split(&g, d).unwrap();
            assert!(p.max_induced_degree(&g) <= p.bound(&g));
            assert!(p.moves <= g.m());
        }
    }
}
