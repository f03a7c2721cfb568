//! Bundled problems.

use super::normalize::WindowSpec;
use super::{Label, LclSpec};

fn mis() -> LclSpec {
    // I = 0, O = 1; no two adjacent I, every O next to an I
    LclSpec::from_fn(
        "mis",
        &["I", "O"],
        |c| c == 0,
        |c, b| c != b,
        |a, c, b| if c == 0 { a == 1 && b == 1 } else { a == 0 || b == 0 },
    )
    .expect("static spec")
}

fn coloring(name: &str, colors: &[&str]) -> LclSpec {
    LclSpec::from_fn(name, colors, |_| true, |c, b| c != b, |a, c, b| a != c && c != b).expect("static spec")
}

fn dominating_set() -> LclSpec {
    // D = 0, N = 1
    LclSpec::from_fn(
        "dominating-set",
        &["D", "N"],
        |c| c == 0,
        |c, b| c == 0 || b == 0,
        |a, c, b| c == 0 || a == 0 || b == 0,
    )
    .expect("static spec")
}

/// Alternating labels starting with `a` at the left end; solvable only on
/// odd lengths and needs linear rounds.
fn anchored_two_coloring() -> LclSpec {
    LclSpec::from_fn("anchored-two-coloring", &["a", "b"], |c| c == 0, |c, b| c == 0 && b == 1, |a, c, b| a != c && c != b)
        .expect("static spec")
}

/// Strictly increasing labels; the label digraph has no cycle.
fn increasing() -> LclSpec {
    LclSpec::from_fn(
        "increasing",
        &["1", "2", "3"],
        |_| true,
        // one pair set serves both ends, so it only asks for distinct labels
        |c, b| c != b,
        |a, c, b| a < c && c < b,
    )
    .expect("static spec")
}

/// All bundled radius-1 problems.
pub fn bundled() -> Vec<LclSpec> {
    vec![
        mis(),
        coloring("two-coloring", &["a", "b"]),
        coloring("three-coloring", &["1", "2", "3"]),
        dominating_set(),
        anchored_two_coloring(),
        increasing(),
    ]
}

pub fn bundled_spec(name: &str) -> Option<LclSpec> {
    bundled().into_iter().find(|s| s.name == name)
}

/// Label digraph made of two closed walks of lengths `p1` and `p2` (both at
/// least 4) through the single shared vertex `(x, y)`, with start and terminal
/// set `{(a1, a2)}` on the first one. All residues need walks of about `p1 p2`.
pub fn coprime_cycles(p1: usize, p2: usize) -> LclSpec {
    assert!(p1 >= 4 && p2 >= 4, "cycle lengths must be at least 4");
    let mut names = vec!["x".to_string(), "y".to_string()];
    names.extend((1..=p1 - 2).map(|i| format!("a{i}")));
    names.extend((1..=p2 - 2).map(|i| format!("b{i}")));
    let mut spec = LclSpec::empty(&format!("coprime-{p1}-{p2}"), names).expect("distinct labels");
    let a = |i: usize| (1 + i) as Label;
    let b = |i: usize| (p1 - 1 + i) as Label;
    let first: Vec<Label> = [0, 1].into_iter().chain((1..=p1 - 2).map(a)).collect();
    let second: Vec<Label> = [0, 1].into_iter().chain((1..=p2 - 2).map(b)).collect();
    for seq in [&first, &second] {
        let p = seq.len();
        for i in 0..p {
            spec.triples.insert((seq[i], seq[(i + 1) % p], seq[(i + 2) % p]));
        }
    }
    spec.pairs.insert((a(1), a(2)));
    spec.pairs.insert((a(2), a(1)));
    spec
}

/// Radius-2 ruling set: no two adjacent `I`, and every `O` has an `I`
/// within distance 2.
pub fn ruling_radius2() -> WindowSpec {
    WindowSpec::from_predicate("ruling-2", 2, &["I", "O"], |ball| {
        let i = Some(0);
        if ball[2] == i {
            ball[1] != i && ball[3] != i
        } else {
            ball.contains(&i)
        }
    })
}
