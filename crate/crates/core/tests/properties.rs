//! Randomized invariants over small posets, maps, and integer matrices.

use proptest::collection::vec;
use proptest::prelude::*;

use fintopo::chains::{self, Ring, SimplicialComplex};
use fintopo::grouphom::{self, IntMatrix};
use fintopo::homotopy::{continuous_maps, is_contractible, HomotopyEngine};
use fintopo::linalg::{FieldMatrix, FieldSpec};
use fintopo::snf::{smith_normal_form, verify_certificate};
use fintopo::space::{FiniteSpace, SpaceMap};

/// Random poset on `n` points: transitive closure of a random relation on the
/// (acyclic) order 0 < 1 < ... < n-1.
fn poset_strategy(max_points: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max_points).prop_flat_map(|n| {
        vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut leq = vec![vec![false; n]; n];
            for i in 0..n {
                leq[i][i] = true;
                for j in i + 1..n {
                    leq[i][j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if leq[i][k] && leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            FiniteSpace::from_leq_matrix(labels, leq).expect("closure is a partial order")
        })
    })
}

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        vec(vec(-bound..=bound, c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn down_sets_closed_under_union_and_intersection(x in poset_strategy(6)) {
        let (opens, truncated) = x.down_sets_capped(100_000);
        prop_assert!(!truncated);
        for &u in &opens {
            prop_assert!(x.is_down_set(u));
            for &v in &opens {
                prop_assert!(x.is_down_set(u | v));
                prop_assert!(x.is_down_set(u & v));
            }
        }
        // complement of a down-set is an up-set, i.e. a down-set of the dual only
        prop_assert!(opens.contains(&0));
        prop_assert!(opens.contains(&x.full_mask()));
    }

    #[test]
    fn components_partition_the_space(x in poset_strategy(6)) {
        let comps = x.components();
        let mut seen = 0u64;
        for &c in &comps {
            prop_assert!(c != 0);
            prop_assert_eq!(seen & c, 0);
            seen |= c;
        }
        prop_assert_eq!(seen, x.full_mask());
        prop_assert_eq!(comps.len() == 1, x.is_connected());
    }

    #[test]
    fn composition_of_continuous_maps_is_continuous(
        x in poset_strategy(4),
        y in poset_strategy(4),
        z in poset_strategy(4),
        pick in vec(any::<prop::sample::Index>(), 2),
    ) {
        let fs = continuous_maps(&x, &y, 100_000).unwrap();
        let gs = continuous_maps(&y, &z, 100_000).unwrap();
        if fs.is_empty() || gs.is_empty() {
            return Ok(());
        }
        let f = SpaceMap::new(x, y.clone(), pick[0].get(&fs).clone()).unwrap();
        let g = SpaceMap::new(y, z, pick[1].get(&gs).clone()).unwrap();
        prop_assert!(f.then(&g).is_ok());
    }

    #[test]
    fn homotopy_witnesses_validate(
        x in poset_strategy(3),
        y in poset_strategy(3),
        pick in vec(any::<prop::sample::Index>(), 2),
    ) {
        let maps = continuous_maps(&x, &y, 100_000).unwrap();
        if maps.is_empty() {
            return Ok(());
        }
        let f = SpaceMap::new(x.clone(), y.clone(), pick[0].get(&maps).clone()).unwrap();
        let g = SpaceMap::new(x, y, pick[1].get(&maps).clone()).unwrap();
        let engine = HomotopyEngine::default();
        if let Some(w) = engine.are_homotopic(&f, &g).unwrap() {
            w.validate().unwrap();
            prop_assert_eq!(w.first(), &f);
            prop_assert_eq!(w.last(), &g);
            let back = w.reversed();
            back.validate().unwrap();
            prop_assert_eq!(back.first(), &g);
        }
    }

    #[test]
    fn cones_are_contractible(x in poset_strategy(4)) {
        prop_assert!(is_contractible(&x.cone()));
    }

    #[test]
    fn snf_certificate_and_rank(m in matrix_strategy(5, 9)) {
        let snf = smith_normal_form(&m);
        prop_assert!(verify_certificate(&m, &snf));
        // diagonal entries divide successively
        for w in snf.d.windows(2) {
            if w[1] != num_bigint::BigInt::from(0) {
                prop_assert_eq!(&w[1] % &w[0], num_bigint::BigInt::from(0));
            }
        }
        // rank agrees with Gaussian elimination over Q
        let q = FieldMatrix::from_int_rows(FieldSpec::Q, &m);
        prop_assert_eq!(snf.rank, q.rank());
        // and dominates every modular rank
        for p in [2u64, 3, 5, 7] {
            prop_assert!(snf.rank_mod(p) <= snf.rank);
            let fp = FieldMatrix::from_int_rows(FieldSpec::Fp(p), &m);
            prop_assert_eq!(snf.rank_mod(p), fp.rank());
        }
    }

    #[test]
    fn cd_trivial_is_rational_rank(m in matrix_strategy(5, 9)) {
        let a = IntMatrix::new(m.clone()).unwrap();
        let q = FieldMatrix::from_int_rows(FieldSpec::Q, &m);
        prop_assert_eq!(grouphom::cd_trivial(&a), q.rank());
    }

    #[test]
    fn euler_poincare_over_q(x in poset_strategy(5)) {
        let k = SimplicialComplex::order_complex(&x);
        let h = chains::homology(&k, Ring::Q).unwrap();
        let alt: i64 = h
            .betti
            .iter()
            .enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        prop_assert_eq!(alt, k.euler_characteristic());
        // degree-0 Betti number counts connected components
        prop_assert_eq!(h.betti[0], x.components().len());
    }

    #[test]
    fn boundary_squares_to_zero(x in poset_strategy(5)) {
        let k = SimplicialComplex::order_complex(&x);
        for d in 1..=k.dim() {
            let upper = k.boundary_matrix(d + 1);
            let lower = k.boundary_matrix(d);
            if upper.is_empty() || lower.is_empty() {
                continue;
            }
            for col in 0..upper[0].len() {
                for row in 0..lower.len() {
                    let mut acc = 0i64;
                    for mid in 0..upper.len() {
                        acc += lower[row][mid] * upper[mid][col];
                    }
                    prop_assert_eq!(acc, 0);
                }
            }
        }
    }
}
