use super::{Graph, GraphError};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;

/// Path `0 - 1 - ... - n-1`.
pub fn generate_path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidSize("a path needs at least one vertex".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges)
}

/// Star with center 0 and leaves `1..n`.
pub fn generate_star(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidSize("a star needs at least one vertex".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::new(n, &edges)
}

pub fn generate_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidSize("a cycle needs at least three vertices".into()));
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((0, n - 1));
    Graph::new(n, &edges)
}

pub fn generate_complete(n: usize) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges)
}

/// Uniformly random labelled tree, decoded from a random Prüfer sequence.
pub fn generate_random_tree(n: usize, seed: u64) -> Graph {
    if n <= 2 {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        return Graph::new(n, &edges).expect("tiny tree");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut remaining = vec![1usize; n];
    for &c in &code {
        remaining[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| remaining[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf, c));
        remaining[c] -= 1;
        if remaining[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Graph::new(n, &edges).expect("Prüfer decoding yields a simple tree")
}

/// Erdős–Rényi graph G(n, p).
pub fn generate_random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("distinct pairs")
}

/// Random planar graph keeping each edge with probability 0.7.
pub fn generate_random_planar(n: usize, seed: u64) -> Graph {
    generate_random_planar_with(n, seed, 0.7)
}

/// Random planar graph: a stacked triangulation of the sphere, shuffled by
/// random edge flips, then thinned by keeping every edge with probability
/// `keep`. Both operations preserve a planar embedding.
pub fn generate_random_planar_with(n: usize, seed: u64, keep: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = if n < 3 {
        (1..n).map(|i| (i - 1, i)).collect()
    } else {
        let mut tri = Triangulation::new();
        for v in 3..n {
            let f = rng.random_range(0..tri.faces.len());
            tri.stack(f, v);
        }
        let flips = if n >= 4 { 2 * n } else { 0 };
        for _ in 0..flips {
            let all: Vec<_> = tri.edge_faces.keys().copied().collect();
            if let Some(&e) = all.choose(&mut rng) {
                tri.flip(e);
            }
        }
        let mut edges: Vec<_> = tri.edge_faces.keys().copied().collect();
        edges.sort_unstable();
        edges
    };
    let kept: Vec<_> = edges.into_iter().filter(|_| rng.random_bool(keep)).collect();
    Graph::new(n, &kept).expect("triangulation edges are simple")
}

/// Combinatorial triangulation of the sphere stored as vertex triples.
struct Triangulation {
    faces: Vec<[usize; 3]>,
    edge_faces: BTreeMap<(usize, usize), Vec<usize>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Triangulation {
    fn new() -> Self {
        let mut t = Triangulation { faces: Vec::new(), edge_faces: BTreeMap::new() };
        t.add_face([0, 1, 2]);
        t.add_face([0, 2, 1]);
        t
    }

    fn add_face(&mut self, f: [usize; 3]) {
        let id = self.faces.len();
        self.faces.push(f);
        self.attach(id);
    }

    fn attach(&mut self, id: usize) {
        let f = self.faces[id];
        for i in 0..3 {
            self.edge_faces.entry(key(f[i], f[(i + 1) % 3])).or_default().push(id);
        }
    }

    fn detach(&mut self, id: usize) {
        let f = self.faces[id];
        for i in 0..3 {
            let k = key(f[i], f[(i + 1) % 3]);
            let list = self.edge_faces.get_mut(&k).expect("edge of a face");
            list.retain(|&x| x != id);
            if list.is_empty() {
                self.edge_faces.remove(&k);
            }
        }
    }

    /// Inserts `v` inside face `id`.
    fn stack(&mut self, id: usize, v: usize) {
        let [a, b, c] = self.faces[id];
        self.detach(id);
        self.faces[id] = [a, b, v];
        self.attach(id);
        self.add_face([b, c, v]);
        self.add_face([c, a, v]);
    }

    /// Replaces edge `e` by the other diagonal of its two faces when legal.
    fn flip(&mut self, e: (usize, usize)) {
        let Some(fs) = self.edge_faces.get(&e) else { return };
        if fs.len() != 2 {
            return;
        }
        let (f1, f2) = (fs[0], fs[1]);
        let apex = |f: [usize; 3]| f.into_iter().find(|&x| x != e.0 && x != e.1).expect("apex");
        let (c, d) = (apex(self.faces[f1]), apex(self.faces[f2]));
        if c == d || self.edge_faces.contains_key(&key(c, d)) {
            return;
        }
        self.detach(f1);
        self.detach(f2);
        self.faces[f1] = [e.0, d, c];
        self.faces[f2] = [d, e.1, c];
        self.attach(f1);
        self.attach(f2);
    }
}
