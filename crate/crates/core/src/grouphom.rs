//! Cohomological dimension of homomorphisms between finitely generated
//! free abelian groups at trivial coefficients, where cd(φ) = rank(A),
//! with audits of the restriction inequality and the retraction-square
//! equality claim over exhaustive-plus-random matrix corpora.

use crate::error::{Error, Result};
use crate::snf::smith_normal_form;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// φ: Z^cols → Z^rows as an integer matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn new(data: Vec<Vec<i64>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            data: (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    acc = acc
                        .checked_add(
                            self.data[i][k]
                                .checked_mul(other.data[k][j])
                                .ok_or_else(|| Error::Shape("matrix product overflow".into()))?,
                        )
                        .ok_or_else(|| Error::Shape("matrix product overflow".into()))?;
                }
                out.data[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("shape mismatch in subtraction".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] -= other.data[i][j];
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn rank(&self) -> usize {
        crate::snf::rank(&self.data)
    }
}

/// cd(φ) at trivial coefficients: the top k with Λ^k(φ*) ≠ 0, i.e.
/// rank(A). A lower bound for the full module-supremum definition.
pub fn cd_trivial(a: &IntMatrix) -> usize {
    a.rank()
}

/// hd(φ) at trivial coefficients; equals cd at this specialization.
pub fn hd_trivial(a: &IntMatrix) -> usize {
    a.rank()
}

/// Solves `m · x = b` over Z columnwise via SNF, or `None`.
fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(&m.data);
    // U m V = D  =>  m x = b  <=>  D y = U b with x = V y
    let ub: Vec<BigInt> = (0..m.rows)
        .map(|i| {
            (0..m.rows)
                .map(|k| &snf.u[i][k] * b[k].clone())
                .sum::<BigInt>()
        })
        .collect();
    let mut y = vec![BigInt::zero(); m.cols];
    for i in 0..m.rows {
        let d = snf.d.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            if (&ub[i] % &d) != BigInt::zero() {
                return None;
            }
            y[i] = &ub[i] / &d;
        }
    }
    let x: Vec<BigInt> = (0..m.cols)
        .map(|i| {
            (0..m.cols)
                .map(|k| &snf.v[i][k] * y[k].clone())
                .sum::<BigInt>()
        })
        .collect();
    Some(x)
}

/// The unique `A'` with `A·I_γ = I_λ·A'`, when the image condition holds.
pub fn restrict_hom(
    a: &IntMatrix,
    i_gamma: &IntMatrix,
    i_lambda: &IntMatrix,
) -> Result<IntMatrix> {
    let target = a.mul(i_gamma)?;
    if i_lambda.rows != target.rows {
        return Err(Error::Shape("inclusion codomain mismatch".into()));
    }
    let mut a_prime = IntMatrix::zero(i_lambda.cols, i_gamma.cols);
    for col in 0..target.cols {
        let b: Vec<BigInt> = (0..target.rows)
            .map(|r| BigInt::from(target.data[r][col]))
            .collect();
        let x = solve_integer(i_lambda, &b).ok_or_else(|| {
            Error::Image(format!(
                "A·I_gamma column {col} does not lie in the image of I_lambda"
            ))
        })?;
        for (r, v) in x.iter().enumerate() {
            a_prime.data[r][col] = v
                .to_i64()
                .ok_or_else(|| Error::NoIntegralSolution("solution exceeds i64".into()))?;
        }
    }
    // solutions are unique when I_lambda is a split inclusion; re-check
    let check = i_lambda.mul(&a_prime)?;
    if check != target {
        return Err(Error::NoIntegralSolution(
            "factorization check failed".into(),
        ));
    }
    Ok(a_prime)
}

/// A commuting retraction square of free-abelian homomorphisms.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HomSquare {
    pub a: IntMatrix,
    pub a_prime: IntMatrix,
    pub r_gamma: IntMatrix,
    pub r_lambda: IntMatrix,
    pub i_gamma: IntMatrix,
    pub i_lambda: IntMatrix,
}

impl HomSquare {
    /// Checks the three defining identities exactly.
    pub fn verify(&self) -> Result<()> {
        if !self.r_gamma.mul(&self.i_gamma)?.is_identity() {
            return Err(Error::SquareInvalid("R_gamma·I_gamma ≠ identity".into()));
        }
        if !self.r_lambda.mul(&self.i_lambda)?.is_identity() {
            return Err(Error::SquareInvalid("R_lambda·I_lambda ≠ identity".into()));
        }
        let lhs = self.a_prime.mul(&self.r_gamma)?;
        let rhs = self.r_lambda.mul(&self.a)?;
        if lhs != rhs {
            return Err(Error::SquareInvalid("A'·R_gamma ≠ R_lambda·A".into()));
        }
        let lhs = self.a.mul(&self.i_gamma)?;
        let rhs = self.i_lambda.mul(&self.a_prime)?;
        if lhs != rhs {
            return Err(Error::SquareInvalid("A·I_gamma ≠ I_lambda·A'".into()));
        }
        Ok(())
    }
}

/// Coordinate-subspace split inclusion: columns of the identity indexed
/// by `coords`, with the matching coordinate projection as retraction.
pub fn coordinate_inclusion(n: usize, coords: &[usize]) -> (IntMatrix, IntMatrix) {
    let mut inc = IntMatrix::zero(n, coords.len());
    let mut ret = IntMatrix::zero(coords.len(), n);
    for (j, &c) in coords.iter().enumerate() {
        inc.data[c][j] = 1;
        ret.data[j][c] = 1;
    }
    (inc, ret)
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, ops: usize) -> (IntMatrix, IntMatrix) {
    // product of elementary row additions; inverse built alongside
    let mut u = IntMatrix::identity(n);
    let mut u_inv = IntMatrix::identity(n);
    for _ in 0..ops {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c: i64 = rng.gen_range(-2..=2);
        for col in 0..n {
            u.data[i][col] += c * u.data[j][col];
        }
        for col in 0..n {
            u_inv.data[j][col] -= c * u_inv.data[i][col];
        }
    }
    (u, u_inv)
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Lemma31Violation {
    pub a: IntMatrix,
    pub i_gamma: IntMatrix,
    pub i_lambda: IntMatrix,
    pub a_prime: IntMatrix,
    pub cd_a: usize,
    pub cd_a_prime: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Lemma31Report {
    pub exhaustive_instances: usize,
    pub random_instances: usize,
    pub restrictions_found: usize,
    pub no_restriction: usize,
    pub violations: Vec<Lemma31Violation>,
    pub seed: u64,
}

impl Lemma31Report {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn lemma31_check(
    a: &IntMatrix,
    i_gamma: &IntMatrix,
    i_lambda: &IntMatrix,
    report: &mut Lemma31Report,
) {
    match restrict_hom(a, i_gamma, i_lambda) {
        Ok(a_prime) => {
            report.restrictions_found += 1;
            let cd_a = cd_trivial(a);
            let cd_a_prime = cd_trivial(&a_prime);
            if cd_a_prime > cd_a {
                report.violations.push(Lemma31Violation {
                    a: a.clone(),
                    i_gamma: i_gamma.clone(),
                    i_lambda: i_lambda.clone(),
                    a_prime,
                    cd_a,
                    cd_a_prime,
                });
            }
        }
        Err(_) => report.no_restriction += 1,
    }
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|bits| (0..n).filter(|i| bits & (1 << i) != 0).collect())
        .collect()
}

/// Lemma 3.1 audit: cd(φ') ≤ cd(φ) over an exhaustive corpus of small
/// matrices with coordinate-subspace inclusions, plus `random_count`
/// seeded instances with unimodularly twisted inclusions.
pub fn audit_lemma31(random_count: usize, seed: u64) -> Lemma31Report {
    let mut report = Lemma31Report {
        exhaustive_instances: 0,
        random_instances: 0,
        restrictions_found: 0,
        no_restriction: 0,
        violations: Vec::new(),
        seed,
    };
    // exhaustive: all A with entries in [-2,2] on dims up to 2x2, with all
    // coordinate-subspace inclusion pairs
    for rows in 1..=2usize {
        for cols in 1..=2usize {
            let cells = rows * cols;
            let mut counters = vec![0usize; cells];
            loop {
                let a = IntMatrix {
                    rows,
                    cols,
                    data: (0..rows)
                        .map(|i| (0..cols).map(|j| counters[i * cols + j] as i64 - 2).collect())
                        .collect(),
                };
                for gs in nonempty_subsets(cols) {
                    for ls in nonempty_subsets(rows) {
                        let (ig, _) = coordinate_inclusion(cols, &gs);
                        let (il, _) = coordinate_inclusion(rows, &ls);
                        report.exhaustive_instances += 1;
                        lemma31_check(&a, &ig, &il, &mut report);
                    }
                }
                // odometer over entries
                let mut pos = 0;
                loop {
                    if pos == cells {
                        break;
                    }
                    counters[pos] += 1;
                    if counters[pos] < 5 {
                        break;
                    }
                    counters[pos] = 0;
                    pos += 1;
                }
                if pos == cells {
                    break;
                }
            }
        }
    }
    // randomized larger instances
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while report.random_instances < random_count {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let a = IntMatrix {
            rows,
            cols,
            data: (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
                .collect(),
        };
        let g_size = rng.gen_range(1..=cols);
        let l_size = rng.gen_range(1..=rows);
        let mut g_coords: Vec<usize> = (0..cols).collect();
        let mut l_coords: Vec<usize> = (0..rows).collect();
        for i in (1..g_coords.len()).rev() {
            g_coords.swap(i, rng.gen_range(0..=i));
        }
        for i in (1..l_coords.len()).rev() {
            l_coords.swap(i, rng.gen_range(0..=i));
        }
        g_coords.truncate(g_size);
        l_coords.truncate(l_size);
        g_coords.sort_unstable();
        l_coords.sort_unstable();
        let (ig, _) = coordinate_inclusion(cols, &g_coords);
        let (il, _) = coordinate_inclusion(rows, &l_coords);
        // twist the inclusions by unimodular automorphisms of the ambient
        // groups so they are not coordinate subspaces
        let (ug, _) = random_unimodular(&mut rng, cols, 3);
        let (ul, _) = random_unimodular(&mut rng, rows, 3);
        let ig = ug.mul(&ig).expect("shapes match");
        let il = ul.mul(&il).expect("shapes match");
        report.random_instances += 1;
        lemma31_check(&a, &ig, &il, &mut report);
    }
    report
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SquareFinding {
    pub square: HomSquare,
    pub cd_a: usize,
    pub cd_a_prime: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Thm32Report {
    pub squares_checked: usize,
    pub equal: usize,
    /// squares where cd(φ') < cd(φ), each with all identities verified —
    /// descriptive findings, not assertion failures
    pub strict_less: Vec<SquareFinding>,
    pub seed: u64,
}

/// The documented instance: A = Id on Z², both subgroups the first
/// factor with coordinate projections as retractions. Commutes, yet
/// cd(A) = 2 > 1 = cd(A').
pub fn projection_square() -> HomSquare {
    let (i1, r1) = coordinate_inclusion(2, &[0]);
    HomSquare {
        a: IntMatrix::identity(2),
        a_prime: IntMatrix::identity(1),
        r_gamma: r1.clone(),
        r_lambda: r1,
        i_gamma: i1.clone(),
        i_lambda: i1,
    }
}

/// Random commuting square: with P_γ = I_γ·R_γ and P_λ = I_λ·R_λ,
/// A = I_λ·A'·R_γ + (1−P_λ)·B·(1−P_γ) satisfies all three identities
/// for any integer B.
pub fn random_square(rng: &mut ChaCha8Rng) -> HomSquare {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let gk = rng.gen_range(1..=n);
    let lk = rng.gen_range(1..=m);
    let g_coords: Vec<usize> = (0..gk).collect();
    let l_coords: Vec<usize> = (0..lk).collect();
    let (i_gamma, r_gamma) = coordinate_inclusion(n, &g_coords);
    let (i_lambda, r_lambda) = coordinate_inclusion(m, &l_coords);
    let a_prime = IntMatrix {
        rows: lk,
        cols: gk,
        data: (0..lk)
            .map(|_| (0..gk).map(|_| rng.gen_range(-3..=3)).collect())
            .collect(),
    };
    let b = IntMatrix {
        rows: m,
        cols: n,
        data: (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
            .collect(),
    };
    let p_gamma = i_gamma.mul(&r_gamma).unwrap();
    let p_lambda = i_lambda.mul(&r_lambda).unwrap();
    let core = i_lambda.mul(&a_prime).unwrap().mul(&r_gamma).unwrap();
    let comp_l = IntMatrix::identity(m).sub(&p_lambda).unwrap();
    let comp_g = IntMatrix::identity(n).sub(&p_gamma).unwrap();
    let tail = comp_l.mul(&b).unwrap().mul(&comp_g).unwrap();
    let mut a = core;
    for i in 0..a.rows {
        for j in 0..a.cols {
            a.data[i][j] += tail.data[i][j];
        }
    }
    HomSquare {
        a,
        a_prime,
        r_gamma,
        r_lambda,
        i_gamma,
        i_lambda,
    }
}

/// Theorem 3.2 audit: classify each valid square as equal or
/// strict-less in cd at trivial coefficients.
pub fn audit_theorem32(random_count: usize, seed: u64) -> Result<Thm32Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut squares = vec![projection_square()];
    for _ in 0..random_count {
        squares.push(random_square(&mut rng));
    }
    let mut report = Thm32Report {
        squares_checked: 0,
        equal: 0,
        strict_less: Vec::new(),
        seed,
    };
    for square in squares {
        square.verify()?;
        report.squares_checked += 1;
        let cd_a = cd_trivial(&square.a);
        let cd_a_prime = cd_trivial(&square.a_prime);
        // Lemma 3.1 direction can never fail here: A' is a compression of A
        debug_assert!(cd_a_prime <= cd_a);
        if cd_a_prime == cd_a {
            report.equal += 1;
        } else {
            report.strict_less.push(SquareFinding {
                square,
                cd_a,
                cd_a_prime,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent rank oracle: largest k with a nonzero k×k minor.
    fn minor_rank(a: &IntMatrix) -> usize {
        fn det(m: &[Vec<i64>]) -> i128 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            if n == 1 {
                return m[0][0] as i128;
            }
            let mut acc: i128 = 0;
            for (j, &x) in m[0].iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let sub: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let term = (x as i128) * det(&sub);
                acc += if j % 2 == 0 { term } else { -term };
            }
            acc
        }
        let max_k = a.rows.min(a.cols);
        for k in (1..=max_k).rev() {
            let row_sets = choose(a.rows, k);
            let col_sets = choose(a.cols, k);
            for rs in &row_sets {
                for cs in &col_sets {
                    let sub: Vec<Vec<i64>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| a.data[i][j]).collect())
                        .collect();
                    if det(&sub) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn cd_trivial_examples() {
        assert_eq!(cd_trivial(&IntMatrix::zero(3, 3)), 0);
        for n in 1..=5 {
            assert_eq!(cd_trivial(&IntMatrix::identity(n)), n);
        }
        let diag = IntMatrix::new(vec![vec![2, 0], vec![0, 0]]).unwrap();
        assert_eq!(cd_trivial(&diag), 1);
        assert_eq!(hd_trivial(&diag), cd_trivial(&diag));
    }

    #[test]
    fn cd_matches_exterior_power_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let a = IntMatrix {
                rows,
                cols,
                data: (0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect())
                    .collect(),
            };
            assert_eq!(cd_trivial(&a), minor_rank(&a), "matrix {a:?}");
        }
    }

    #[test]
    fn composition_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=4);
            let k = rng.gen_range(1..=4);
            let mk = |r: usize, c: usize, rng: &mut ChaCha8Rng| IntMatrix {
                rows: r,
                cols: c,
                data: (0..r)
                    .map(|_| (0..c).map(|_| rng.gen_range(-3..=3)).collect())
                    .collect(),
            };
            let a = mk(m, n, &mut rng);
            let b = mk(k, m, &mut rng);
            let ba = b.mul(&a).unwrap();
            assert!(cd_trivial(&ba) <= cd_trivial(&a).min(cd_trivial(&b)));
        }
    }

    #[test]
    fn restrict_identity_inclusions_gives_a() {
        let a = IntMatrix::new(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let id = IntMatrix::identity(2);
        assert_eq!(restrict_hom(&a, &id, &id).unwrap(), a);
    }

    #[test]
    fn restrict_first_factor() {
        let a = IntMatrix::identity(2);
        let (i1, _) = coordinate_inclusion(2, &[0]);
        let a_prime = restrict_hom(&a, &i1, &i1).unwrap();
        assert_eq!(a_prime, IntMatrix::identity(1));
    }

    #[test]
    fn restrict_span_sum_both_branches() {
        // Γ' = span(e1+e2) in Z^3, Λ' = span(e1): A' exists iff
        // A(e1+e2) is a multiple of e1
        let ig = IntMatrix::new(vec![vec![1], vec![1], vec![0]]).unwrap();
        let (il, _) = coordinate_inclusion(3, &[0]);
        let good =
            IntMatrix::new(vec![vec![1, 2, 0], vec![1, -1, 5], vec![2, -2, 7]]).unwrap();
        let a_prime = restrict_hom(&good, &ig, &il).unwrap();
        assert_eq!(a_prime.data, vec![vec![3]]);
        let bad = IntMatrix::new(vec![vec![1, 2, 0], vec![1, 1, 5], vec![2, -2, 7]]).unwrap();
        assert!(matches!(
            restrict_hom(&bad, &ig, &il),
            Err(Error::Image(_))
        ));
    }

    #[test]
    fn lemma31_audit_is_clean() {
        let report = audit_lemma31(250, 42);
        assert!(report.is_clean(), "violations: {:?}", report.violations);
        assert!(report.restrictions_found > 0);
        assert!(report.no_restriction > 0);
        assert_eq!(report.random_instances, 250);
    }

    #[test]
    fn lemma31_audit_deterministic() {
        let a = audit_lemma31(50, 7);
        let b = audit_lemma31(50, 7);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn projection_square_is_valid_and_strict() {
        let sq = projection_square();
        sq.verify().unwrap();
        assert_eq!(cd_trivial(&sq.a), 2);
        assert_eq!(cd_trivial(&sq.a_prime), 1);
    }

    #[test]
    fn theorem32_audit_runs_and_flags_projection_square() {
        let report = audit_theorem32(100, 42).unwrap();
        assert_eq!(report.squares_checked, 101);
        assert!(report
            .strict_less
            .iter()
            .any(|f| f.square == projection_square() && f.cd_a == 2 && f.cd_a_prime == 1));
        assert_eq!(
            report.equal + report.strict_less.len(),
            report.squares_checked
        );
    }

    #[test]
    fn random_squares_always_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            random_square(&mut rng).verify().unwrap();
        }
    }

    #[test]
    fn solve_integer_matches_known_solution() {
        let m = IntMatrix::new(vec![vec![2, 0], vec![0, 3]]).unwrap();
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = solve_integer(&m, &b).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
        let b = vec![BigInt::from(1), BigInt::from(3)];
        assert!(solve_integer(&m, &b).is_none());
    }
}
