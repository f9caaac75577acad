//! Cup products on simplicial cochains over field coefficients, and the
//! derived bounds: cup-length (below cat) and zero-divisor cup-length
//! (below TC_r). The vertex order fixed at complex load is the total
//! order used by the front-face/back-face evaluation.

use crate::chains::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{FieldMatrix, FieldSpec, Scalar};

/// A cochain in a fixed degree; `values[i]` is the coefficient on the
/// i-th simplex of that degree (lexicographic order).
#[derive(Clone, PartialEq, Debug)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<Scalar>,
}

impl Cochain {
    pub fn zero(k: &SimplicialComplex, field: FieldSpec, degree: usize) -> Self {
        Cochain {
            degree,
            values: vec![field.zero(); k.simplices(degree).len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }
}

/// δ: C^p → C^{p+1}, the transpose of ∂_{p+1}.
pub fn coboundary(k: &SimplicialComplex, field: FieldSpec, a: &Cochain) -> Cochain {
    let p = a.degree;
    let boundary = k.boundary_matrix(p + 1);
    let cols = k.simplices(p + 1).len();
    let mut out = vec![field.zero(); cols];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc = field.zero();
        for (i, v) in a.values.iter().enumerate() {
            let coeff = boundary[i][j];
            if coeff != 0 {
                acc = field.add(&acc, &field.mul(&field.from_i64(coeff), v));
            }
        }
        *slot = acc;
    }
    Cochain {
        degree: p + 1,
        values: out,
    }
}

/// (a⌣b)(v_0..v_{p+q}) = a(v_0..v_p) · b(v_p..v_{p+q}).
pub fn cup_product(
    k: &SimplicialComplex,
    field: FieldSpec,
    a: &Cochain,
    b: &Cochain,
) -> Result<Cochain> {
    if a.values.len() != k.simplices(a.degree).len()
        || b.values.len() != k.simplices(b.degree).len()
    {
        return Err(Error::Shape(
            "cochain length does not match the complex".into(),
        ));
    }
    let (p, q) = (a.degree, b.degree);
    let target = k.simplices(p + q);
    let mut values = vec![field.zero(); target.len()];
    for (idx, simplex) in target.iter().enumerate() {
        let front = &simplex[..=p.min(simplex.len() - 1)];
        let back = &simplex[p..];
        let (Some(fi), Some(bi)) = (k.simplex_index(p, front), k.simplex_index(q, back)) else {
            continue;
        };
        values[idx] = field.mul(&a.values[fi], &b.values[bi]);
    }
    Ok(Cochain {
        degree: p + q,
        values,
    })
}

/// Cohomology of a complex over a field, with chosen cocycle
/// representatives per degree and the multiplication table of their
/// classes.
pub struct CohomologyRing {
    pub field: FieldSpec,
    pub complex: SimplicialComplex,
    /// basis[n] = cocycle representatives whose classes span H^n
    pub basis: Vec<Vec<Cochain>>,
    /// coboundary image generators per degree, used for class projection
    images: Vec<Vec<Vec<Scalar>>>,
}

impl CohomologyRing {
    pub fn new(k: &SimplicialComplex, field: FieldSpec) -> Result<Self> {
        field.validate()?;
        let dim = k.dim();
        let mut basis = Vec::with_capacity(dim + 1);
        let mut images = Vec::with_capacity(dim + 1);
        for n in 0..=dim {
            let n_cells = k.simplices(n).len();
            // cocycles: kernel of δ_n = kernel of ∂_{n+1}ᵀ
            let delta_rows = k.simplices(n + 1).len();
            let boundary = k.boundary_matrix(n + 1);
            let delta: Vec<Vec<i64>> = (0..delta_rows)
                .map(|j| (0..n_cells).map(|i| boundary[i][j]).collect())
                .collect();
            let cocycles = FieldMatrix::from_int_rows(field, &delta_with_shape(&delta, n_cells))
                .kernel_basis();
            // coboundaries: images of δ_{n-1} on standard basis cochains
            let mut image: Vec<Vec<Scalar>> = Vec::new();
            if n > 0 {
                let lower = k.boundary_matrix(n);
                for i in 0..k.simplices(n - 1).len() {
                    let col: Vec<Scalar> = (0..n_cells)
                        .map(|j| field.from_i64(lower[i][j]))
                        .collect();
                    if !col.iter().all(Scalar::is_zero) {
                        image.push(col);
                    }
                }
            }
            // pick cocycles independent modulo the coboundaries
            let mut chosen: Vec<Cochain> = Vec::new();
            let mut span: Vec<Vec<Scalar>> = image.clone();
            for z in cocycles {
                if !crate::linalg::in_span(field, &span, &z) {
                    span.push(z.clone());
                    chosen.push(Cochain {
                        degree: n,
                        values: z,
                    });
                }
            }
            basis.push(chosen);
            images.push(image);
        }
        Ok(CohomologyRing {
            field,
            complex: k.clone(),
            basis,
            images,
        })
    }

    pub fn betti(&self, n: usize) -> usize {
        self.basis.get(n).map_or(0, Vec::len)
    }

    /// Coordinates of the class of a cocycle in the degree-n basis.
    pub fn class_coords(&self, cocycle: &Cochain) -> Result<Vec<Scalar>> {
        let n = cocycle.degree;
        if n > self.complex.dim() {
            return Ok(Vec::new());
        }
        let f = self.field;
        let reps = &self.basis[n];
        let n_cells = self.complex.simplices(n).len();
        // columns: basis reps then coboundary generators
        let mut cols: Vec<Vec<Scalar>> = reps.iter().map(|c| c.values.clone()).collect();
        cols.extend(self.images[n].iter().cloned());
        let data: Vec<Vec<Scalar>> = (0..n_cells)
            .map(|row| cols.iter().map(|c| c[row].clone()).collect())
            .collect();
        let m = FieldMatrix {
            field: f,
            rows: n_cells,
            cols: cols.len(),
            data,
        };
        let x = m
            .solve(&cocycle.values)
            .ok_or_else(|| Error::Shape("cochain is not a cocycle".into()))?;
        Ok(x[..reps.len()].to_vec())
    }

    /// Product of two basis classes as coordinates in degree p+q.
    pub fn multiply_basis(&self, p: usize, i: usize, q: usize, j: usize) -> Result<Vec<Scalar>> {
        let prod = cup_product(
            &self.complex,
            self.field,
            &self.basis[p][i],
            &self.basis[q][j],
        )?;
        self.class_coords(&prod)
    }
}

fn delta_with_shape(delta: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    if delta.is_empty() {
        vec![vec![0; cols]]
    } else {
        delta.to_vec()
    }
}

/// Max m with a nonzero m-fold cup product of positive-degree classes.
pub fn cup_length(k: &SimplicialComplex, field: FieldSpec) -> Result<usize> {
    let ring = CohomologyRing::new(k, field)?;
    let positive: Vec<&Cochain> = (1..=k.dim()).flat_map(|n| ring.basis[n].iter()).collect();
    if positive.is_empty() {
        return Ok(0);
    }
    let mut frontier: Vec<Cochain> = positive.iter().map(|&c| c.clone()).collect();
    let mut length = 1;
    while length < k.dim() {
        let mut next = Vec::new();
        for x in &frontier {
            for &b in &positive {
                if x.degree + b.degree > k.dim() {
                    continue;
                }
                let prod = cup_product(k, field, x, b)?;
                if !ring.class_coords(&prod)?.iter().all(Scalar::is_zero) {
                    next.push(prod);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
        length += 1;
    }
    Ok(length)
}

/// Flat basis of H^*(K): (degree, index-within-degree) pairs.
struct FlatRing {
    degrees: Vec<usize>,
    /// mult[a][b] = coordinates of (basis a)·(basis b) in flat coords
    mult: Vec<Vec<Vec<Scalar>>>,
}

impl FlatRing {
    fn new(ring: &CohomologyRing) -> Result<Self> {
        let f = ring.field;
        let dim = ring.complex.dim();
        let mut degrees = Vec::new();
        let mut offsets = vec![0usize; dim + 2];
        for n in 0..=dim {
            offsets[n + 1] = offsets[n] + ring.betti(n);
            degrees.extend(std::iter::repeat(n).take(ring.betti(n)));
        }
        let t = degrees.len();
        let mut mult = vec![vec![vec![f.zero(); t]; t]; t];
        for a in 0..t {
            for b in 0..t {
                let (p, q) = (degrees[a], degrees[b]);
                let mut flat = vec![f.zero(); t];
                if p + q <= dim {
                    let coords =
                        ring.multiply_basis(p, a - offsets[p], q, b - offsets[q])?;
                    for (i, c) in coords.into_iter().enumerate() {
                        flat[offsets[p + q] + i] = c;
                    }
                }
                mult[a][b] = flat;
            }
        }
        Ok(FlatRing { degrees, mult })
    }

    fn dim(&self) -> usize {
        self.degrees.len()
    }
}

/// Nilpotency degree of the kernel of the r-fold multiplication
/// H^{⊗r} → H (Koszul signs throughout). Errors on disconnected
/// complexes, where the kernel contains idempotents.
pub fn zero_divisor_cup_length(k: &SimplicialComplex, field: FieldSpec, r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::Shape("zero-divisor length requires r >= 2".into()));
    }
    let ring = CohomologyRing::new(k, field)?;
    if ring.betti(0) != 1 {
        return Err(Error::Shape(
            "zero-divisor cup length requires a connected complex".into(),
        ));
    }
    let flat = FlatRing::new(&ring)?;
    let f = field;
    let t = flat.dim();
    let tensor_dim = t.pow(r as u32);
    let tuple_of = |mut idx: usize| -> Vec<usize> {
        let mut tup = vec![0; r];
        for slot in tup.iter_mut().rev() {
            *slot = idx % t;
            idx /= t;
        }
        tup
    };
    let index_of = |tup: &[usize]| -> usize { tup.iter().fold(0, |acc, &x| acc * t + x) };

    // structure constants of the tensor ring on basis tuples
    let tensor_mul = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![f.zero(); tensor_dim];
        for (xi, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            let xt = tuple_of(xi);
            for (yi, yc) in y.iter().enumerate() {
                if yc.is_zero() {
                    continue;
                }
                let yt = tuple_of(yi);
                // Koszul sign: move each y_i past x_{i+1}..x_r
                let mut sign = 0usize;
                for i in 0..r {
                    for j in i + 1..r {
                        sign += flat.degrees[yt[i]] * flat.degrees[xt[j]];
                    }
                }
                let mut coeff = f.mul(xc, yc);
                if sign % 2 == 1 {
                    coeff = f.neg(&coeff);
                }
                // componentwise products, distributing over H-basis
                let mut partial: Vec<(usize, Scalar)> = vec![(0, coeff)];
                let mut ok = true;
                let mut acc_tuple: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(r);
                for i in 0..r {
                    let prod = &flat.mult[xt[i]][yt[i]];
                    let terms: Vec<(usize, Scalar)> = prod
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(b, c)| (b, c.clone()))
                        .collect();
                    if terms.is_empty() {
                        ok = false;
                        break;
                    }
                    acc_tuple.push(terms);
                }
                if !ok {
                    continue;
                }
                // expand the product of sums across the r slots
                let mut states: Vec<(Vec<usize>, Scalar)> =
                    vec![(Vec::new(), partial.pop().unwrap().1)];
                for terms in &acc_tuple {
                    let mut next_states = Vec::new();
                    for (tup, c) in &states {
                        for (b, bc) in terms {
                            let mut t2 = tup.clone();
                            t2.push(*b);
                            next_states.push((t2, f.mul(c, bc)));
                        }
                    }
                    states = next_states;
                }
                for (tup, c) in states {
                    let idx = index_of(&tup);
                    out[idx] = f.add(&out[idx], &c);
                }
            }
        }
        out
    };

    // kernel of the multiplication map Δ_r : H^{⊗r} -> H
    let mut delta = FieldMatrix::zero(f, t, tensor_dim);
    for col in 0..tensor_dim {
        let tup = tuple_of(col);
        let mut acc = vec![f.zero(); t];
        // fold left: acc starts as basis tup[0]
        acc[tup[0]] = f.one();
        for &b in &tup[1..] {
            let mut next = vec![f.zero(); t];
            for (a, c) in acc.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (out_b, mc) in flat.mult[a][b].iter().enumerate() {
                    if !mc.is_zero() {
                        next[out_b] = f.add(&next[out_b], &f.mul(c, mc));
                    }
                }
            }
            acc = next;
        }
        for (row, c) in acc.into_iter().enumerate() {
            delta.data[row][col] = c;
        }
    }
    let kernel = delta.kernel_basis();
    if kernel.is_empty() {
        return Ok(0);
    }

    // breadth-first nilpotency: span bases of m-fold kernel products
    let cap = r * k.dim() + 1;
    let mut level: Vec<Vec<Scalar>> = kernel.clone();
    let mut m = 1;
    while m <= cap {
        let mut products: Vec<Vec<Scalar>> = Vec::new();
        for x in &level {
            for z in &kernel {
                let p = tensor_mul(x, z);
                if !p.iter().all(Scalar::is_zero) && !crate::linalg::in_span(f, &products, &p) {
                    products.push(p);
                }
            }
        }
        if products.is_empty() {
            return Ok(m);
        }
        level = products;
        m += 1;
    }
    Err(Error::Shape(
        "zero-divisor kernel not nilpotent within the degree bound".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteSpace;
    use rand::{Rng, SeedableRng};

    fn circle() -> SimplicialComplex {
        SimplicialComplex::order_complex(&FiniteSpace::pseudocircle())
    }

    #[test]
    fn unit_acts_as_identity() {
        let k = SimplicialComplex::torus();
        let f = FieldSpec::Q;
        let ring = CohomologyRing::new(&k, f).unwrap();
        let unit = &ring.basis[0][0];
        for n in 0..=k.dim() {
            for b in &ring.basis[n] {
                let prod = cup_product(&k, f, unit, b).unwrap();
                let coords = ring.class_coords(&prod).unwrap();
                let direct = ring.class_coords(b).unwrap();
                // unit may be a scalar multiple of the constant-1 cochain
                let scale = unit.values[0].clone();
                let scaled: Vec<Scalar> = direct.iter().map(|c| f.mul(c, &scale)).collect();
                assert_eq!(coords, scaled);
            }
        }
    }

    #[test]
    fn leibniz_rule_on_random_cochains() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let complexes = vec![
            circle(),
            SimplicialComplex::torus(),
            SimplicialComplex::projective_plane(),
            SimplicialComplex::order_complex(&FiniteSpace::pseudocircle().cone()),
        ];
        for k in &complexes {
            for field in [FieldSpec::Q, FieldSpec::Fp(2), FieldSpec::Fp(5)] {
                for _ in 0..5 {
                    for p in 0..k.dim() {
                        for q in 0..k.dim().saturating_sub(p) {
                            let rand_cochain = |rng: &mut rand_chacha::ChaCha8Rng, d: usize| {
                                Cochain {
                                    degree: d,
                                    values: (0..k.simplices(d).len())
                                        .map(|_| field.from_i64(rng.gen_range(-4..5)))
                                        .collect(),
                                }
                            };
                            let a = rand_cochain(&mut rng, p);
                            let b = rand_cochain(&mut rng, q);
                            let lhs =
                                coboundary(k, field, &cup_product(k, field, &a, &b).unwrap());
                            let da_b =
                                cup_product(k, field, &coboundary(k, field, &a), &b).unwrap();
                            let a_db =
                                cup_product(k, field, &a, &coboundary(k, field, &b)).unwrap();
                            // δ(a⌣b) = δa⌣b + (−1)^p a⌣δb
                            let rhs: Vec<Scalar> = da_b
                                .values
                                .iter()
                                .zip(&a_db.values)
                                .map(|(x, y)| {
                                    let y = if p % 2 == 1 { field.neg(y) } else { y.clone() };
                                    field.add(x, &y)
                                })
                                .collect();
                            assert_eq!(lhs.values, rhs, "Leibniz failed p={p} q={q}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cocycle_products_are_cocycles() {
        let k = SimplicialComplex::torus();
        let f = FieldSpec::Q;
        let ring = CohomologyRing::new(&k, f).unwrap();
        for p in 0..=k.dim() {
            for q in 0..=k.dim() - p {
                for a in &ring.basis[p] {
                    for b in &ring.basis[q] {
                        let prod = cup_product(&k, f, a, b).unwrap();
                        assert!(coboundary(&k, f, &prod).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn graded_commutativity_and_associativity() {
        for k in [SimplicialComplex::torus(), SimplicialComplex::projective_plane()] {
            for f in [FieldSpec::Q, FieldSpec::Fp(2), FieldSpec::Fp(3)] {
                let ring = CohomologyRing::new(&k, f).unwrap();
                let flat = FlatRing::new(&ring).unwrap();
                let t = flat.dim();
                for a in 0..t {
                    for b in 0..t {
                        let ab = &flat.mult[a][b];
                        let ba = &flat.mult[b][a];
                        let sign = flat.degrees[a] * flat.degrees[b];
                        let expect: Vec<Scalar> = ba
                            .iter()
                            .map(|c| if sign % 2 == 1 { f.neg(c) } else { c.clone() })
                            .collect();
                        assert_eq!(*ab, expect, "commutativity {a},{b}");
                        for c in 0..t {
                            // (ab)c = a(bc) via the flat table
                            let mut lhs = vec![f.zero(); t];
                            for (m, coeff) in ab.iter().enumerate() {
                                if coeff.is_zero() {
                                    continue;
                                }
                                for (out, mc) in flat.mult[m][c].iter().enumerate() {
                                    lhs[out] = f.add(&lhs[out], &f.mul(coeff, mc));
                                }
                            }
                            let bc = &flat.mult[b][c];
                            let mut rhs = vec![f.zero(); t];
                            for (m, coeff) in bc.iter().enumerate() {
                                if coeff.is_zero() {
                                    continue;
                                }
                                for (out, mc) in flat.mult[a][m].iter().enumerate() {
                                    rhs[out] = f.add(&rhs[out], &f.mul(coeff, mc));
                                }
                            }
                            assert_eq!(lhs, rhs, "associativity {a},{b},{c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cup_length_values() {
        let point = SimplicialComplex::order_complex(&FiniteSpace::point());
        assert_eq!(cup_length(&point, FieldSpec::Q).unwrap(), 0);
        assert_eq!(cup_length(&circle(), FieldSpec::Q).unwrap(), 1);
        assert_eq!(cup_length(&SimplicialComplex::torus(), FieldSpec::Q).unwrap(), 2);
        assert_eq!(
            cup_length(&SimplicialComplex::projective_plane(), FieldSpec::Fp(2)).unwrap(),
            2
        );
        assert_eq!(
            cup_length(&SimplicialComplex::projective_plane(), FieldSpec::Q).unwrap(),
            0
        );
    }

    #[test]
    fn cup_length_bounded_by_dimension_on_corpus() {
        for space in crate::corpus::all_posets_up_to_iso(4).unwrap() {
            let k = SimplicialComplex::order_complex(&space);
            for f in [FieldSpec::Q, FieldSpec::Fp(2)] {
                assert!(cup_length(&k, f).unwrap() <= k.dim(), "space {space:?}");
            }
        }
    }

    #[test]
    fn torus_one_classes_generate_h2() {
        let k = SimplicialComplex::torus();
        let f = FieldSpec::Q;
        let ring = CohomologyRing::new(&k, f).unwrap();
        assert_eq!(ring.betti(1), 2);
        assert_eq!(ring.betti(2), 1);
        let prod = cup_product(&k, f, &ring.basis[1][0], &ring.basis[1][1]).unwrap();
        let coords = ring.class_coords(&prod).unwrap();
        assert!(!coords.iter().all(Scalar::is_zero));
    }

    #[test]
    fn zero_divisor_lengths() {
        let point = SimplicialComplex::order_complex(&FiniteSpace::point());
        for r in 2..=4 {
            assert_eq!(zero_divisor_cup_length(&point, FieldSpec::Q, r).unwrap(), 0);
        }
        assert_eq!(zero_divisor_cup_length(&circle(), FieldSpec::Q, 2).unwrap(), 1);
        assert_eq!(
            zero_divisor_cup_length(&SimplicialComplex::torus(), FieldSpec::Q, 2).unwrap(),
            2
        );
    }

    #[test]
    fn zdcl_rejects_disconnected() {
        let k = SimplicialComplex::order_complex(&FiniteSpace::antichain(2));
        assert!(zero_divisor_cup_length(&k, FieldSpec::Q, 2).is_err());
    }
}
