use super::OracleError;
use crate::lcl_paths::{Label, LclSpec};

/// Every valid labelling of a path with `n` vertices, in lexicographic
/// order, by plain enumeration of `Σ^n`.
pub fn lcl_exhaustive(spec: &LclSpec, n: usize, cap: u64) -> Result<Vec<Vec<Label>>, OracleError> {
    let s = spec.sigma() as u64;
    let total = s.checked_pow(n as u32).filter(|&t| t <= cap).ok_or(OracleError::SizeCap { n, cap: cap as usize })?;
    let mut out = Vec::new();
    let mut labels = vec![0 as Label; n];
    for _ in 0..total {
        if spec.is_valid(&labels) {
            out.push(labels.clone());
        }
        // odometer, last position fastest
        for i in (0..n).rev() {
            labels[i] += 1;
            if (labels[i] as u64) < s {
                break;
            }
            labels[i] = 0;
        }
    }
    Ok(out)
}

/// Number of valid labellings, by a left-to-right scan over the last two labels.
pub fn lcl_count(spec: &LclSpec, n: usize) -> u128 {
    let s = spec.sigma();
    match n {
        0 => 1,
        1 => spec.singletons.len() as u128,
        _ => {
            let mut ways = vec![vec![0u128; s]; s];
            for &(a, b) in &spec.pairs {
                ways[a as usize][b as usize] = 1;
            }
            for _ in 2..n {
                let mut next = vec![vec![0u128; s]; s];
                for &(a, b, c) in &spec.triples {
                    let w = ways[a as usize][b as usize];
                    next[b as usize][c as usize] = next[b as usize][c as usize].saturating_add(w);
                }
                ways = next;
            }
            // the right end reads its pair backwards
            spec.pairs.iter().map(|&(c, b)| ways[b as usize][c as usize]).fold(0, u128::saturating_add)
        }
    }
}
