//! Smith normal form of integer matrices with explicit unimodular
//! transforms. The fast path runs in checked `i64` arithmetic and promotes
//! the whole computation to arbitrary precision on overflow.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Scalar interface needed by the reduction; `i64` is fallible (overflow),
/// `BigInt` never fails.
pub trait SnfScalar: Clone + PartialEq + std::fmt::Debug {
    fn val_zero() -> Self;
    fn val_one() -> Self;
    fn vanishes(&self) -> bool;
    fn negative(&self) -> bool;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    /// Truncated quotient; `o` nonzero.
    fn checked_div_trunc(&self, o: &Self) -> Option<Self>;
    fn rem_by(&self, o: &Self) -> Option<Self>;
    fn abs_key(&self) -> Self;
    fn abs_lt(&self, o: &Self) -> bool;
}

impl SnfScalar for i64 {
    fn val_zero() -> Self {
        0
    }
    fn val_one() -> Self {
        1
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn negative(&self) -> bool {
        *self < 0
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i64::checked_add(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i64::checked_sub(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i64::checked_mul(*self, *o)
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn checked_div_trunc(&self, o: &Self) -> Option<Self> {
        i64::checked_div(*self, *o)
    }
    fn rem_by(&self, o: &Self) -> Option<Self> {
        i64::checked_rem(*self, *o)
    }
    fn abs_key(&self) -> Self {
        self.checked_abs().unwrap_or(i64::MAX)
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.abs_key() < o.abs_key()
    }
}

impl SnfScalar for BigInt {
    fn val_zero() -> Self {
        Zero::zero()
    }
    fn val_one() -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn checked_div_trunc(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn rem_by(&self, o: &Self) -> Option<Self> {
        Some(self % o)
    }
    fn abs_key(&self) -> Self {
        self.abs()
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.abs() < o.abs()
    }
}

/// `U · A · V = diag(d)` with `U`, `V` unimodular; `d` nonnegative with
/// `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub d: Vec<BigInt>,
    pub rank: usize,
}

impl Snf {
    /// Number of diagonal entries not divisible by `p` (= rank over Z/p).
    pub fn rank_mod(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.d.iter().filter(|d| !(*d % &p).vanishes()).count()
    }

    /// Diagonal entries > 1 (torsion coefficients of the cokernel summand).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.d
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }
}

struct Work<T> {
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
}

impl<T: SnfScalar> Work<T> {
    fn rows(&self) -> usize {
        self.a.len()
    }
    fn cols(&self) -> usize {
        self.a.first().map_or(0, |r| r.len())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in &mut self.a[i] {
            *x = x.checked_neg()?;
        }
        for x in &mut self.u[i] {
            *x = x.checked_neg()?;
        }
        Some(())
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Option<()> {
        for c in 0..self.cols() {
            let s = q.checked_mul(&self.a[t][c])?;
            self.a[i][c] = self.a[i][c].checked_sub(&s)?;
        }
        for c in 0..self.rows() {
            let s = q.checked_mul(&self.u[t][c])?;
            self.u[i][c] = self.u[i][c].checked_sub(&s)?;
        }
        Some(())
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Option<()> {
        for r in 0..self.rows() {
            let s = q.checked_mul(&self.a[r][t])?;
            self.a[r][j] = self.a[r][j].checked_sub(&s)?;
        }
        for r in 0..self.v.len() {
            let s = q.checked_mul(&self.v[r][t])?;
            self.v[r][j] = self.v[r][j].checked_sub(&s)?;
        }
        Some(())
    }
}

fn identity<T: SnfScalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::val_one() } else { T::val_zero() })
                .collect()
        })
        .collect()
}

fn reduce<T: SnfScalar>(a: Vec<Vec<T>>) -> Option<(Vec<Vec<T>>, Vec<Vec<T>>, Vec<Vec<T>>)> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut w = Work {
        a,
        u: identity(rows),
        v: identity(cols),
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        // pivot: minimal |nonzero| in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.a[i][j].vanishes() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if w.a[i][j].abs_lt(&w.a[pi][pj]) {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        'outer: loop {
            // clear column t
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[i][t].vanishes() {
                    continue;
                }
                let q = w.a[i][t].checked_div_trunc(&w.a[t][t])?;
                w.row_sub(i, t, &q)?;
                if !w.a[i][t].vanishes() {
                    w.swap_rows(t, i);
                    clean = false;
                }
            }
            if !clean {
                continue 'outer;
            }
            // clear row t
            for j in t + 1..cols {
                if w.a[t][j].vanishes() {
                    continue;
                }
                let q = w.a[t][j].checked_div_trunc(&w.a[t][t])?;
                w.col_sub(j, t, &q)?;
                if !w.a[t][j].vanishes() {
                    w.swap_cols(t, j);
                    continue 'outer;
                }
            }
            // divisibility: pivot must divide every remaining entry
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if w.a[i][j].rem_by(&w.a[t][t])?.vanishes() {
                        continue;
                    }
                    let one = T::val_one();
                    let minus_one = one.checked_neg()?;
                    w.row_sub(t, i, &minus_one)?; // row_t += row_i
                    continue 'outer;
                }
            }
            break;
        }
        if w.a[t][t].negative() {
            w.negate_row(t)?;
        }
    }
    Some((w.u, w.a, w.v))
}

fn to_bigint_matrix<T: SnfScalar + Into<BigInt>>(m: Vec<Vec<T>>) -> Vec<Vec<BigInt>> {
    m.into_iter()
        .map(|row| row.into_iter().map(Into::into).collect())
        .collect()
}

/// Computes the Smith normal form of an integer matrix.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Snf {
    let fast = reduce(a.to_vec());
    let (u, d_mat, v) = match fast {
        Some((u, d, v)) => (
            to_bigint_matrix(u),
            to_bigint_matrix(d),
            to_bigint_matrix(v),
        ),
        None => {
            let big: Vec<Vec<BigInt>> = a
                .iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            reduce(big).expect("BigInt reduction cannot overflow")
        }
    };
    let steps = a.len().min(a.first().map_or(0, |r| r.len()));
    let d: Vec<BigInt> = (0..steps).map(|i| d_mat[i][i].clone()).collect();
    let rank = d.iter().filter(|x| !x.vanishes()).count();
    Snf { u, v, d, rank }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].vanishes() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].vanishes()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Verifies `U·A·V = diag(d)` and that `U`, `V` are unimodular.
pub fn verify_certificate(a: &[Vec<i64>], snf: &Snf) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    // U (rows x rows) · A (rows x cols) · V (cols x cols)
    let mut ua = vec![vec![BigInt::zero(); cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            let mut s = BigInt::zero();
            for k in 0..rows {
                s += &snf.u[i][k] * &big[k][j];
            }
            ua[i][j] = s;
        }
    }
    for i in 0..rows {
        for j in 0..cols {
            let mut s = BigInt::zero();
            for k in 0..cols {
                s += &ua[i][k] * &snf.v[k][j];
            }
            let expected = if i == j && i < snf.d.len() {
                snf.d[i].clone()
            } else {
                BigInt::zero()
            };
            if s != expected {
                return false;
            }
        }
    }
    let det_u = determinant(&snf.u);
    let det_v = determinant(&snf.v);
    (det_u.abs() == BigInt::one()) && (det_v.abs() == BigInt::one())
}

/// Rank over Z (= rank over Q).
pub fn rank(a: &[Vec<i64>]) -> usize {
    smith_normal_form(a).rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &[Vec<i64>], expected_d: &[i64]) {
        let snf = smith_normal_form(a);
        assert!(verify_certificate(a, &snf), "certificate failed for {a:?}");
        let d: Vec<BigInt> = expected_d.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(snf.d, d, "diagonal mismatch for {a:?}");
    }

    #[test]
    fn diagonalizes_simple_matrices() {
        check(&[vec![1, 0], vec![0, 1]], &[1, 1]);
        check(&[vec![2, 0], vec![0, 3]], &[1, 6]);
        check(&[vec![0, 0], vec![0, 0]], &[0, 0]);
        check(&[vec![2, 4], vec![6, 8]], &[2, 4]);
    }

    #[test]
    fn divisibility_chain_holds() {
        let a = vec![vec![6, 4, 2], vec![4, 8, 6], vec![2, 6, 12]];
        let snf = smith_normal_form(&a);
        assert!(verify_certificate(&a, &snf));
        for w in snf.d.windows(2) {
            if !w[1].vanishes() {
                assert!((&w[1] % &w[0]).vanishes(), "divisibility broken: {:?}", snf.d);
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank(&[vec![2, 0], vec![0, 0]]), 1);
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 3);
    }

    #[test]
    fn rank_mod_prime() {
        let a = vec![vec![2, 0], vec![0, 3]];
        let snf = smith_normal_form(&a);
        assert_eq!(snf.rank, 2);
        assert_eq!(snf.rank_mod(2), 1);
        assert_eq!(snf.rank_mod(3), 1);
        assert_eq!(snf.rank_mod(5), 2);
    }

    #[test]
    fn overflow_promotes_to_bigint() {
        // entries near i64::MAX force the fallback path
        let big = i64::MAX / 2;
        let a = vec![vec![big, big - 1], vec![big - 1, big]];
        let snf = smith_normal_form(&a);
        assert!(verify_certificate(&a, &snf));
        assert_eq!(snf.rank, 2);
    }

    #[test]
    fn nonsquare_matrices() {
        check(&[vec![1, 2, 3]], &[1]);
        check(&[vec![2], vec![4], vec![6]], &[2]);
    }

    #[test]
    fn determinant_examples() {
        let m = |rows: &[[i64; 3]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        assert_eq!(
            determinant(&m(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])),
            BigInt::from(1)
        );
        assert_eq!(
            determinant(&m(&[[2, 0, 1], [1, 1, 0], [0, 3, 1]])),
            BigInt::from(5)
        );
        assert_eq!(
            determinant(&m(&[[1, 2, 3], [2, 4, 6], [0, 1, 1]])),
            BigInt::from(0)
        );
    }
}
