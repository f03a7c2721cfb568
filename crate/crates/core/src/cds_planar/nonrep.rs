use super::PlanarError;
use crate::graph::Graph;
use crate::sim::bits_for;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Upper bound on the non-repetitive chromatic number of planar graphs.
pub const DEFAULT_PALETTE: u32 = 768;

/// Vertex coloring in which no simple path of even length reads the same
/// color word in both halves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonRepetitiveColoring {
    /// Colors in `1..=palette`.
    pub colors: Vec<u32>,
    pub palette: u32,
}

impl NonRepetitiveColoring {
    pub fn verify(&self, g: &Graph, l_max: Option<usize>) -> Result<(), PlanarError> {
        match find_repetition(g, &self.colors, l_max) {
            Some(path) => Err(PlanarError::InvalidColoring(path)),
            None => Ok(()),
        }
    }

    pub fn payload_bits(&self) -> usize {
        bits_for(self.palette as usize + 1)
    }
}

/// Finds a simple path `x1..xl y1..yl` with `color(xi) = color(yi)` for all
/// `i`, with `l <= l_max` (all lengths when `None`).
///
/// Both halves grow in lock step from a same-colored start pair, so only
/// color-matched extensions are ever explored.
pub fn find_repetition(g: &Graph, colors: &[u32], l_max: Option<usize>) -> Option<Vec<usize>> {
    let n = g.n();
    let l_max = l_max.unwrap_or(n / 2).min(n / 2);
    if l_max == 0 {
        return None;
    }
    let mut by_color: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for v in 0..n {
        by_color.entry(colors[v]).or_default().push(v);
    }
    let mut used = vec![false; n];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for class in by_color.values() {
        for &x in class {
            for &y in class {
                if x == y {
                    continue;
                }
                xs.clear();
                ys.clear();
                xs.push(x);
                ys.push(y);
                used[x] = true;
                used[y] = true;
                let hit = grow(g, colors, l_max, &mut used, &mut xs, &mut ys);
                used[x] = false;
                used[y] = false;
                if hit {
                    xs.extend_from_slice(&ys);
                    return Some(xs);
                }
            }
        }
    }
    None
}

fn grow(g: &Graph, colors: &[u32], l_max: usize, used: &mut [bool], xs: &mut Vec<usize>, ys: &mut Vec<usize>) -> bool {
    let (xl, yl) = (*xs.last().unwrap(), *ys.last().unwrap());
    if g.has_edge(xl, ys[0]) {
        return true;
    }
    if xs.len() == l_max {
        return false;
    }
    for &a in g.neighbors(xl) {
        if used[a] {
            continue;
        }
        for &b in g.neighbors(yl) {
            if used[b] || a == b || colors[a] != colors[b] {
                continue;
            }
            used[a] = true;
            used[b] = true;
            xs.push(a);
            ys.push(b);
            if grow(g, colors, l_max, used, xs, ys) {
                return true;
            }
            xs.pop();
            ys.pop();
            used[a] = false;
            used[b] = false;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NrcOptions {
    pub palette: u32,
    pub seed: u64,
    /// Longest half-path checked; `None` checks every length.
    pub l_max: Option<usize>,
    pub max_resamples: usize,
}

impl Default for NrcOptions {
    fn default() -> Self {
        NrcOptions { palette: DEFAULT_PALETTE, seed: 0, l_max: None, max_resamples: 100_000 }
    }
}

/// Random coloring repaired by resampling one vertex of each repetition found.
pub fn compute_nonrepetitive_coloring(g: &Graph, opts: &NrcOptions) -> Result<NonRepetitiveColoring, PlanarError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let p = opts.palette.max(1);
    let mut colors: Vec<u32> = (0..g.n()).map(|_| rng.random_range(1..=p)).collect();
    for _ in 0..=opts.max_resamples {
        let Some(path) = find_repetition(g, &colors, opts.l_max) else {
            return Ok(NonRepetitiveColoring { colors, palette: p });
        };
        let v = path[rng.random_range(0..path.len())];
        colors[v] = rng.random_range(1..=p);
    }
    Err(PlanarError::NotFound { palette: p, attempts: opts.max_resamples })
}
