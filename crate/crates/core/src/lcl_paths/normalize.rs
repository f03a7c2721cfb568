//! Reduction of radius-`r` path LCLs to radius 1.
//!
//! Each output label of the reduced problem is a window: the original labels
//! at distances `-h..=h` from the vertex, with `None` past the ends of the
//! path. Overlapping windows of neighbors must agree, and every rule checks
//! the original `r`-ball of its center, which the rule's windows cover.

use super::{Label, LclSpec};
use std::collections::{BTreeSet, HashMap};

/// Labels at distances `-r..=r` from a center; `None` lies past an end.
pub type Ball = Vec<Option<Label>>;

/// A path LCL given by its allowed `r`-balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSpec {
    pub name: String,
    pub r: usize,
    pub sigma_out: Vec<String>,
    pub allowed: BTreeSet<Ball>,
}

impl WindowSpec {
    /// Keeps every ball that can occur on a path and satisfies `pred`.
    pub fn from_predicate(name: &str, r: usize, sigma_out: &[&str], pred: impl Fn(&[Option<Label>]) -> bool) -> Self {
        let allowed = windows(sigma_out.len(), r).into_iter().filter(|b| pred(b)).collect();
        WindowSpec { name: name.to_string(), r, sigma_out: sigma_out.iter().map(|s| s.to_string()).collect(), allowed }
    }

    /// The same problem written as radius-1 balls.
    pub fn from_lcl(spec: &LclSpec) -> Self {
        let mut allowed = BTreeSet::new();
        for &c in &spec.singletons {
            allowed.insert(vec![None, Some(c), None]);
        }
        for &(c, b) in &spec.pairs {
            allowed.insert(vec![None, Some(c), Some(b)]);
            allowed.insert(vec![Some(b), Some(c), None]);
        }
        for &(a, c, b) in &spec.triples {
            allowed.insert(vec![Some(a), Some(c), Some(b)]);
        }
        WindowSpec { name: spec.name.clone(), r: 1, sigma_out: spec.sigma_out.clone(), allowed }
    }

    pub fn is_valid(&self, labels: &[Label]) -> bool {
        (0..labels.len()).all(|i| self.allowed.contains(&ball(labels, i, self.r)))
    }
}

/// Labels around position `i`, padded with `None`.
pub fn ball(labels: &[Label], i: usize, r: usize) -> Ball {
    (0..=2 * r)
        .map(|t| {
            let p = i as isize + t as isize - r as isize;
            (p >= 0 && (p as usize) < labels.len()).then(|| labels[p as usize])
        })
        .collect()
}

/// All balls of radius `r` that occur on some path: a labelled center and
/// `None` only as an outer run on either side.
fn windows(sigma: usize, r: usize) -> Vec<Ball> {
    let len = 2 * r + 1;
    let base = sigma + 1;
    let total = base.pow(len as u32);
    (0..total)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let d = code % base;
                    code /= base;
                    (d > 0).then(|| (d - 1) as Label)
                })
                .collect::<Ball>()
        })
        .filter(|b| {
            b[r].is_some()
                && (1..=r).all(|t| b[t - 1].is_some() <= b[t].is_some())
                && (r + 1..len).all(|t| b[t].is_some() <= b[t - 1].is_some())
        })
        .collect()
}

/// A radius-1 spec over windows together with its decoding.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub spec: LclSpec,
    /// Original labels behind each new label.
    pub windows: Vec<Ball>,
    pub h: usize,
    index: HashMap<Ball, Label>,
}

impl Normalized {
    /// Window encoding of an original labelling; `None` if some window is
    /// not a label of the reduced problem (it then occurs in no valid labelling).
    pub fn encode(&self, labels: &[Label]) -> Option<Vec<Label>> {
        (0..labels.len()).map(|i| self.index.get(&ball(labels, i, self.h)).copied()).collect()
    }

    pub fn decode(&self, labels: &[Label]) -> Vec<Label> {
        labels.iter().map(|&l| self.windows[l as usize][self.h].expect("window center is a label")).collect()
    }
}

fn ends_symmetric(w: &WindowSpec) -> bool {
    let s = w.sigma_out.len() as Label;
    (0..s).all(|c| {
        (0..s).all(|b| w.allowed.contains(&vec![None, Some(c), Some(b)]) == w.allowed.contains(&vec![Some(b), Some(c), None]))
    })
}

/// Radius-1 equivalent of `w`. Radius-1 problems whose two ends obey the
/// same rules are rewritten without windows.
pub fn normalize_radius(w: &WindowSpec) -> Normalized {
    let sigma = w.sigma_out.len();
    if w.r <= 1 && ends_symmetric(w) {
        let s = sigma as Label;
        let has = |b: [Option<Label>; 3]| w.allowed.contains(b.as_slice());
        let spec = LclSpec::from_fn(
            &w.name,
            &w.sigma_out.iter().map(String::as_str).collect::<Vec<_>>(),
            |c| has([None, Some(c), None]),
            |c, b| has([None, Some(c), Some(b)]),
            |a, c, b| has([Some(a), Some(c), Some(b)]),
        )
        .expect("window spec has a valid alphabet");
        let windows: Vec<Ball> = (0..s).map(|c| vec![Some(c)]).collect();
        let index = windows.iter().enumerate().map(|(i, b)| (b.clone(), i as Label)).collect();
        return Normalized { spec, windows, h: 0, index };
    }

    let h = w.r.saturating_sub(1).max(1);
    let all = windows(sigma, h);
    let pos: HashMap<&Ball, usize> = all.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let symbols: Vec<Option<Label>> = std::iter::once(None).chain((0..sigma).map(|a| Some(a as Label))).collect();
    let shift_right = |b: &Ball, x: Option<Label>| -> Option<usize> {
        let mut nb: Ball = b[1..].to_vec();
        nb.push(x);
        pos.get(&nb).copied()
    };
    let shift_left = |b: &Ball, x: Option<Label>| -> Option<usize> {
        let mut nb: Ball = vec![x];
        nb.extend_from_slice(&b[..2 * h]);
        pos.get(&nb).copied()
    };
    // r-ball around index `c` of a stitched label run
    let ball_at = |run: &[Option<Label>], c: usize| -> Ball {
        (0..=2 * w.r)
            .map(|t| {
                let p = c as isize + t as isize - w.r as isize;
                if p < 0 || p as usize >= run.len() {
                    None
                } else {
                    run[p as usize]
                }
            })
            .collect()
    };

    let mut singletons = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    let mut triples = BTreeSet::new();
    for (i, a) in all.iter().enumerate() {
        let left_end = a[h - 1].is_none();
        let right_end = a[h + 1].is_none();
        if left_end && right_end && w.allowed.contains(&ball_at(a, h)) {
            singletons.insert(i);
        }
        for &x in &symbols {
            if left_end {
                if let Some(j) = shift_right(a, x).filter(|&j| all[j][h].is_some()) {
                    let mut run = a.clone();
                    run.push(x);
                    if w.allowed.contains(&ball_at(&run, h)) {
                        pairs.insert((i, j));
                    }
                }
            }
            if right_end {
                if let Some(j) = shift_left(a, x).filter(|&j| all[j][h].is_some()) {
                    let mut run = vec![x];
                    run.extend_from_slice(a);
                    if w.allowed.contains(&ball_at(&run, h + 1)) {
                        pairs.insert((i, j));
                    }
                }
            }
        }
    }
    for (j, b) in all.iter().enumerate() {
        for &x in &symbols {
            let Some(i) = shift_left(b, x).filter(|&i| all[i][h].is_some()) else { continue };
            for &y in &symbols {
                let Some(k) = shift_right(b, y).filter(|&k| all[k][h].is_some()) else { continue };
                let mut run = vec![x];
                run.extend_from_slice(b);
                run.push(y);
                if w.allowed.contains(&ball_at(&run, h + 1)) {
                    triples.insert((i, j, k));
                }
            }
        }
    }

    // drop windows that no rule mentions
    let mut used = vec![false; all.len()];
    for &i in &singletons {
        used[i] = true;
    }
    for &(i, j) in &pairs {
        used[i] = true;
        used[j] = true;
    }
    for &(i, j, k) in &triples {
        used[i] = true;
        used[j] = true;
        used[k] = true;
    }
    let mut remap = vec![Label::MAX; all.len()];
    let mut kept = Vec::new();
    for (i, b) in all.iter().enumerate() {
        if used[i] {
            remap[i] = kept.len() as Label;
            kept.push(b.clone());
        }
    }
    let name_of = |b: &Ball| {
        b.iter()
            .map(|x| x.map_or("_", |l| w.sigma_out[l as usize].as_str()))
            .collect::<Vec<_>>()
            .join(".")
    };
    let mut spec = LclSpec::empty(&format!("{}-r1", w.name), kept.iter().map(name_of).collect())
        .unwrap_or_else(|_| LclSpec::empty(&format!("{}-r1", w.name), vec!["unsatisfiable".into()]).expect("one label"));
    spec.singletons = singletons.into_iter().map(|i| remap[i]).collect();
    spec.pairs = pairs.into_iter().map(|(i, j)| (remap[i], remap[j])).collect();
    spec.triples = triples.into_iter().map(|(i, j, k)| (remap[i], remap[j], remap[k])).collect();
    let index = kept.iter().enumerate().map(|(i, b)| (b.clone(), i as Label)).collect();
    Normalized { spec, windows: kept, h, index }
}
