//! Exact minimal set cover over bitmask universes (≤ 64 elements) by
//! branch and bound, returning the lexicographically least cover among
//! the minimum-cardinality ones.

/// Returns indices into `sets` forming a minimum cover of `universe`, or
/// `None` when no cover exists. Among minimum covers the ascending index
/// sequence is lexicographically least.
pub fn minimal_cover(universe: u64, sets: &[u64]) -> Option<Vec<usize>> {
    if universe == 0 {
        return Some(vec![]);
    }
    let union = sets.iter().fold(0u64, |a, &s| a | s);
    if union & universe != universe {
        return None;
    }
    let k = optimal_size(universe, sets)?;
    lex_least_of_size(universe, sets, k)
}

fn optimal_size(universe: u64, sets: &[u64]) -> Option<usize> {
    let max_size = sets.iter().map(|s| (s & universe).count_ones()).max()? as usize;
    if max_size == 0 {
        return None;
    }
    let mut best = usize::MAX;
    branch(universe, sets, max_size, 0, &mut best);
    if best == usize::MAX {
        None
    } else {
        Some(best)
    }
}

fn branch(uncovered: u64, sets: &[u64], max_size: usize, used: usize, best: &mut usize) {
    if uncovered == 0 {
        *best = (*best).min(used);
        return;
    }
    let lower = used + (uncovered.count_ones() as usize).div_ceil(max_size);
    if lower >= *best {
        return;
    }
    // branch on the uncovered element with the fewest candidate sets
    let mut pick = None;
    let mut pick_count = usize::MAX;
    let mut rest = uncovered;
    while rest != 0 {
        let e = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let count = sets.iter().filter(|&&s| s & (1 << e) != 0).count();
        if count < pick_count {
            pick_count = count;
            pick = Some(e);
        }
    }
    let e = pick.unwrap();
    for (_, &s) in sets.iter().enumerate().filter(|(_, &s)| s & (1 << e) != 0) {
        branch(uncovered & !s, sets, max_size, used + 1, best);
    }
}

/// Ordered DFS over ascending indices; the first complete cover of size `k`
/// found is the lexicographically least one.
fn lex_least_of_size(universe: u64, sets: &[u64], k: usize) -> Option<Vec<usize>> {
    fn dfs(
        uncovered: u64,
        sets: &[u64],
        from: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if uncovered == 0 {
            return true;
        }
        if remaining == 0 {
            return false;
        }
        // feasibility: the suffix must still be able to cover everything
        let suffix_union: u64 = sets[from..].iter().fold(0, |a, &s| a | s);
        if uncovered & !suffix_union != 0 {
            return false;
        }
        let max_size = sets[from..]
            .iter()
            .map(|s| (s & uncovered).count_ones() as usize)
            .max()
            .unwrap_or(0);
        if max_size == 0 || (uncovered.count_ones() as usize).div_ceil(max_size) > remaining {
            return false;
        }
        for i in from..sets.len() {
            if sets[i] & uncovered == 0 {
                continue;
            }
            chosen.push(i);
            if dfs(uncovered & !sets[i], sets, i + 1, remaining - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if dfs(universe, sets, 0, k, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_set_cover() {
        assert_eq!(minimal_cover(0b111, &[0b111, 0b011]), Some(vec![0]));
    }

    #[test]
    fn needs_two_sets() {
        let sets = [0b0011, 0b0110, 0b1100];
        assert_eq!(minimal_cover(0b1111, &sets), Some(vec![0, 2]));
    }

    #[test]
    fn no_cover() {
        assert_eq!(minimal_cover(0b111, &[0b011]), None);
    }

    #[test]
    fn empty_universe() {
        assert_eq!(minimal_cover(0, &[]), Some(vec![]));
    }

    #[test]
    fn lexicographic_tie_break() {
        // two distinct minimum covers: {0,3} and {1,2}; lex least is {0,3}
        let sets = [0b0011, 0b0011, 0b1100, 0b1100];
        assert_eq!(minimal_cover(0b1111, &sets), Some(vec![0, 2]));
    }

    #[test]
    fn exhaustive_cross_check_small() {
        // compare against brute force over all subsets of sets
        let sets = [0b00111u64, 0b01100, 0b11000, 0b10001, 0b01010];
        let universe = 0b11111u64;
        let mut best: Option<Vec<usize>> = None;
        for pick in 0u32..(1 << sets.len()) {
            let idx: Vec<usize> = (0..sets.len()).filter(|&i| pick & (1 << i) != 0).collect();
            let cov = idx.iter().fold(0u64, |a, &i| a | sets[i]);
            if cov & universe == universe {
                let better = match &best {
                    None => true,
                    Some(b) => idx.len() < b.len() || (idx.len() == b.len() && idx < *b),
                };
                if better {
                    best = Some(idx);
                }
            }
        }
        assert_eq!(minimal_cover(universe, &sets), best);
    }
}
