//! Exhaustive generation of all posets on up to N points, one representative
//! per isomorphism class, in a deterministic canonical order.

use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// Largest corpus size supported by exhaustive relation enumeration.
pub const MAX_CORPUS_POINTS: usize = 5;

/// All posets with `1..=max_points` points up to isomorphism, ordered by
/// size and then by canonical matrix encoding.
pub fn all_posets_up_to_iso(max_points: usize) -> Result<Vec<FiniteSpace>> {
    if max_points == 0 || max_points > MAX_CORPUS_POINTS {
        return Err(Error::Shape(format!(
            "corpus size must be in 1..={MAX_CORPUS_POINTS}"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max_points {
        out.extend(posets_of_size(n));
    }
    Ok(out)
}

/// All posets on exactly `n` points up to isomorphism.
pub fn posets_of_size(n: usize) -> Vec<FiniteSpace> {
    assert!(n >= 1 && n <= MAX_CORPUS_POINTS);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut canonical: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    for bits in 0u64..(1 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits & (1 << k) != 0 {
                leq[i][j] = true;
            }
        }
        // only consider relations that are already transitively closed and
        // antisymmetric; every poset appears this way exactly once
        if !is_partial_order(&leq) {
            continue;
        }
        canonical.insert(canonical_code(&leq, &perms));
    }
    canonical
        .into_iter()
        .map(|code| space_from_code(code, n))
        .collect()
}

fn is_partial_order(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && leq[j][i] {
                return false;
            }
            for k in 0..n {
                if leq[i][j] && leq[j][k] && !leq[i][k] && i != j && j != k {
                    return false;
                }
            }
        }
    }
    true
}

/// Minimum matrix encoding over all relabelings.
fn canonical_code(leq: &[Vec<bool>], perms: &[Vec<usize>]) -> u64 {
    let n = leq.len();
    let mut best = u64::MAX;
    for perm in perms {
        let mut code = 0u64;
        for i in 0..n {
            for j in 0..n {
                if leq[perm[i]][perm[j]] || i == j {
                    code |= 1 << (i * n + j);
                }
            }
        }
        best = best.min(code);
    }
    best
}

fn space_from_code(code: u64, n: usize) -> FiniteSpace {
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| code & (1 << (i * n + j)) != 0).collect())
        .collect();
    FiniteSpace::from_leq_matrix(labels, leq).expect("canonical code encodes a poset")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts_match_oeis() {
        // numbers of posets up to isomorphism on 1..5 points
        assert_eq!(posets_of_size(1).len(), 1);
        assert_eq!(posets_of_size(2).len(), 2);
        assert_eq!(posets_of_size(3).len(), 5);
        assert_eq!(posets_of_size(4).len(), 16);
        assert_eq!(posets_of_size(5).len(), 63);
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = all_posets_up_to_iso(4).unwrap();
        let b = all_posets_up_to_iso(4).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        assert_eq!(a.len(), 1 + 2 + 5 + 16);
    }

    #[test]
    fn members_are_pairwise_non_isomorphic() {
        let spaces = all_posets_up_to_iso(4).unwrap();
        let perms4 = permutations(4);
        for (a, b) in spaces
            .iter()
            .enumerate()
            .flat_map(|(i, a)| spaces[i + 1..].iter().map(move |b| (a, b)))
        {
            if a.len() != b.len() {
                continue;
            }
            let n = a.len();
            let to_leq = |s: &FiniteSpace| -> Vec<Vec<bool>> {
                (0..n)
                    .map(|i| (0..n).map(|j| s.leq(i, j)).collect())
                    .collect()
            };
            let perms: Vec<Vec<usize>> = perms4
                .iter()
                .filter(|p| p.len() >= n)
                .map(|p| p[..n].to_vec())
                .collect();
            let _ = perms;
            let pa = canonical_code(&to_leq(a), &permutations(n));
            let pb = canonical_code(&to_leq(b), &permutations(n));
            assert_ne!(pa, pb);
        }
    }
}
