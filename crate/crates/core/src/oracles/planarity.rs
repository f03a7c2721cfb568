//! Planarity test by path addition (Demoucron, Malgrange and Pertuiset).
//!
//! Each biconnected component is embedded greedily: starting from a cycle,
//! repeatedly pick a fragment (a chord or a component of the unembedded part
//! with its attachments), preferring one that fits in a single face, and draw
//! a path of it through an admissible face. A fragment with no admissible
//! face proves non-planarity.

use crate::graph::Graph;
use std::collections::{BTreeSet, HashSet, VecDeque};

pub fn is_planar(g: &Graph) -> bool {
    let n = g.n();
    if n >= 3 && g.m() > 3 * n - 6 {
        return false;
    }
    biconnected_components(g).into_iter().all(|edges| {
        let mut verts: Vec<usize> = edges.iter().flat_map(|&e| [g.edge(e).0, g.edge(e).1]).collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() <= 4 {
            return true;
        }
        if edges.len() > 3 * verts.len() - 6 {
            return false;
        }
        let local: Vec<(usize, usize)> = edges
            .iter()
            .map(|&e| {
                let (u, v) = g.edge(e);
                (verts.binary_search(&u).unwrap(), verts.binary_search(&v).unwrap())
            })
            .collect();
        embed_biconnected(&Graph::new(verts.len(), &local).expect("component edges are simple"))
    })
}

/// Edge sets of the biconnected components (bridges form their own).
fn biconnected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut comps = Vec::new();
    for s in 0..n {
        if disc[s] != usize::MAX {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        // frames: (vertex, parent edge, next port)
        let mut frames: Vec<(usize, usize, usize)> = vec![(s, usize::MAX, 0)];
        while let Some(&mut (v, pe, ref mut port)) = frames.last_mut() {
            if *port < g.degree(v) {
                let w = g.neighbors(v)[*port];
                let e = g.incident_edges(v)[*port];
                *port += 1;
                if e == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut comp = Vec::new();
                        while let Some(e) = stack.pop() {
                            comp.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                }
            }
        }
    }
    comps
}

fn find_cycle(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut stack = vec![(0usize, usize::MAX)];
    while let Some((v, p)) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        parent[v] = p;
        for &w in g.neighbors(v) {
            if w == p {
                continue;
            }
            if seen[w] {
                // back edge closes a cycle w .. v
                let mut cycle = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    if x == usize::MAX {
                        break;
                    }
                    cycle.push(x);
                }
                if x == w {
                    return cycle;
                }
            } else {
                stack.push((w, v));
            }
        }
    }
    unreachable!("a biconnected graph with more than two vertices has a cycle")
}

struct Fragment {
    attachments: Vec<usize>,
    /// Interior vertices; empty for a chord.
    interior: Vec<usize>,
}

fn embed_biconnected(g: &Graph) -> bool {
    let n = g.n();
    let cycle = find_cycle(g);
    let mut embedded = vec![false; n];
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        embedded[a] = true;
        edges.insert((a.min(b), a.max(b)));
    }
    let mut faces = vec![cycle.clone(), cycle];
    loop {
        let fragments = fragments(g, &embedded, &edges);
        if fragments.is_empty() {
            return true;
        }
        let face_sets: Vec<HashSet<usize>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
        let mut choice = None;
        for (i, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|a| face_sets[f].contains(a)))
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((i, admissible[0]));
                    break;
                }
                _ if choice.is_none() => choice = Some((i, admissible[0])),
                _ => {}
            }
        }
        let (fi, face) = choice.expect("some fragment chosen");
        let path = fragment_path(g, &fragments[fi], &embedded);
        for w in path.windows(2) {
            edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &path {
            embedded[v] = true;
        }
        let f = faces.swap_remove(face);
        let (a, b) = (path[0], *path.last().unwrap());
        let pa = f.iter().position(|&x| x == a).unwrap();
        let pb = f.iter().position(|&x| x == b).unwrap();
        let walk = |from: usize, to: usize| {
            let mut out = vec![f[from]];
            let mut i = from;
            while i != to {
                i = (i + 1) % f.len();
                out.push(f[i]);
            }
            out
        };
        let inner = &path[1..path.len() - 1];
        let mut f1 = walk(pa, pb);
        f1.extend(inner.iter().rev());
        let mut f2 = walk(pb, pa);
        f2.extend(inner.iter());
        faces.push(f1);
        faces.push(f2);
    }
}

fn fragments(g: &Graph, embedded: &[bool], edges: &HashSet<(usize, usize)>) -> Vec<Fragment> {
    let n = g.n();
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        if embedded[u] && embedded[v] && !edges.contains(&(u, v)) {
            out.push(Fragment { attachments: vec![u, v], interior: Vec::new() });
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if embedded[s] || seen[s] {
            continue;
        }
        let mut interior = vec![s];
        let mut attach = BTreeSet::new();
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if embedded[w] {
                    attach.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    interior.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.push(Fragment { attachments: attach.into_iter().collect(), interior });
    }
    out
}

/// A path between two attachments through the fragment's interior.
fn fragment_path(g: &Graph, frag: &Fragment, embedded: &[bool]) -> Vec<usize> {
    if frag.interior.is_empty() {
        return frag.attachments.clone();
    }
    let a = frag.attachments[0];
    let b = frag.attachments[1];
    let inside: HashSet<usize> = frag.interior.iter().copied().collect();
    let mut prev = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for &w in g.neighbors(a) {
        if inside.contains(&w) {
            prev.insert(w, a);
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        if g.neighbors(v).contains(&b) {
            let mut path = vec![b, v];
            let mut x = v;
            while let Some(&p) = prev.get(&x) {
                path.push(p);
                if p == a {
                    break;
                }
                x = p;
            }
            path.reverse();
            return path;
        }
        for &w in g.neighbors(v) {
            if !embedded[w] && inside.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment interiors are connected and reach every attachment")
}
