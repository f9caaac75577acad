//! Exact linear algebra over Q and Z/p, used by the cup-product bounds.
//! Scalars carry their field tag at runtime so matrices over different
//! primes can coexist without generics.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Q => Ok(()),
            FieldSpec::Fp(p) => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(Error::NonPrimeModulus(*p))
                }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Rat(BigRational::zero()),
            FieldSpec::Fp(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Rat(BigRational::one()),
            FieldSpec::Fp(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Rat(BigRational::from(BigInt::from(x))),
            FieldSpec::Fp(p) => Scalar::Mod(x.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Q, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Fp(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Q, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Fp(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Q, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Fp(p), Scalar::Mod(x)) => Scalar::Mod((p - x % p) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "division by zero");
        match (self, a) {
            (FieldSpec::Q, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            (FieldSpec::Fp(p), Scalar::Mod(x)) => Scalar::Mod(pow_mod(*x, p - 2, *p)),
            _ => panic!("scalar/field mismatch"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Rat(x) => write!(f, "{x}"),
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Dense matrix over a fixed field; rows of equal length.
#[derive(Clone, PartialEq, Debug)]
pub struct FieldMatrix {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Scalar>>,
}

impl FieldMatrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![vec![field.zero(); cols]; rows],
        }
    }

    pub fn from_int_rows(field: FieldSpec, m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        FieldMatrix {
            field,
            rows,
            cols,
            data: m
                .iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        }
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(src) = (row..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, src);
            let inv = f.inv(&self.data[row][col]);
            for c in col..self.cols {
                self.data[row][c] = f.mul(&self.data[row][c], &inv);
            }
            for r in 0..self.rows {
                if r != row && !self.data[r][col].is_zero() {
                    let factor = self.data[r][col].clone();
                    for c in col..self.cols {
                        let s = f.mul(&factor, &self.data[row][c]);
                        self.data[r][c] = f.sub(&self.data[r][c], &s);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m.data[pr][free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self · x = b`; free variables set to zero. `None` when
    /// inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let mut aug = FieldMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols + 1,
            data: self
                .data
                .iter()
                .zip(b)
                .map(|(row, rhs)| {
                    let mut r = row.clone();
                    r.push(rhs.clone());
                    r
                })
                .collect(),
        };
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.data[pr][self.cols].clone();
        }
        Some(x)
    }

    /// `self · v` for a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        self.data
            .iter()
            .map(|row| {
                let mut acc = f.zero();
                for (a, b) in row.iter().zip(v) {
                    acc = f.add(&acc, &f.mul(a, b));
                }
                acc
            })
            .collect()
    }
}

/// Whether `target` lies in the span of `vectors` (all over `field`).
pub fn in_span(field: FieldSpec, vectors: &[Vec<Scalar>], target: &[Scalar]) -> bool {
    if target.iter().all(Scalar::is_zero) {
        return true;
    }
    if vectors.is_empty() {
        return false;
    }
    let n = target.len();
    let without = FieldMatrix {
        field,
        rows: vectors.len(),
        cols: n,
        data: vectors.to_vec(),
    }
    .rank();
    let mut rows = vectors.to_vec();
    rows.push(target.to_vec());
    let with = FieldMatrix {
        field,
        rows: rows.len(),
        cols: n,
        data: rows,
    }
    .rank();
    with == without
}
