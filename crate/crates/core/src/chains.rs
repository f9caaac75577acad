//! Simplicial complexes, boundary matrices, and (co)homology over Z, Q,
//! and Z/p via Smith normal form; cd/hd probes of spaces through their
//! order complexes.

use crate::error::{Error, Result};
use crate::linalg::is_prime;
use crate::snf::{smith_normal_form, verify_certificate, Snf};
use crate::space::FiniteSpace;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
    Zp(u64),
}

impl Ring {
    pub fn validate(&self) -> Result<()> {
        match self {
            Ring::Zp(p) if !is_prime(*p) => Err(Error::NonPrimeModulus(*p)),
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
            Ring::Zp(p) => write!(f, "Z/{p}"),
        }
    }
}

/// Simplices stored per dimension in sorted order; vertex order is the
/// load order and fixes all orientation/cup conventions downstream.
#[derive(Clone, PartialEq, Debug)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Builds the downward closure of `facets` (vertex-label lists).
    /// Non-maximal or duplicate facets are tolerated and absorbed.
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<String>]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::Shape(format!("duplicate vertex label {v:?}")));
            }
        }
        let index = |label: &String| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v == label)
                .ok_or_else(|| Error::Shape(format!("facet references unknown vertex {label:?}")))
        };
        let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
        for facet in facets {
            if facet.is_empty() {
                return Err(Error::Shape("empty facet".into()));
            }
            let mut idx = facet.iter().map(index).collect::<Result<Vec<usize>>>()?;
            idx.sort_unstable();
            idx.dedup();
            if idx.len() > 20 {
                return Err(Error::Shape(format!(
                    "facet with {} vertices exceeds supported size",
                    idx.len()
                )));
            }
            // all nonempty subsets
            let k = idx.len();
            for bits in 1u32..(1 << k) {
                let sub: Vec<usize> = (0..k).filter(|i| bits & (1 << i) != 0).map(|i| idx[i]).collect();
                closed.insert(sub);
            }
        }
        let dim = closed.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim];
        for s in closed {
            simplices[s.len() - 1].push(s);
        }
        for level in &mut simplices {
            level.sort();
        }
        Ok(SimplicialComplex {
            vertices,
            simplices,
        })
    }

    /// Nonempty chains of the poset, facets = maximal chains.
    pub fn order_complex(space: &FiniteSpace) -> Self {
        let n = space.len();
        let mut chains: Vec<Vec<String>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn extend(
            space: &FiniteSpace,
            stack: &mut Vec<usize>,
            out: &mut Vec<Vec<String>>,
        ) {
            let last = *stack.last().unwrap();
            let uppers: Vec<usize> = (0..space.len())
                .filter(|&j| j != last && space.leq(last, j))
                .collect();
            // keep only covers' upward continuations; any strictly-greater
            // element works since subsets are closed anyway
            if uppers.is_empty() {
                out.push(stack.iter().map(|&i| space.label(i).to_string()).collect());
                return;
            }
            for j in uppers {
                stack.push(j);
                extend(space, stack, out);
                stack.pop();
            }
        }
        for start in (0..n).filter(|&i| (0..n).all(|j| j == i || !space.leq(j, i))) {
            stack.push(start);
            extend(space, &mut stack, &mut chains);
            stack.pop();
        }
        let labels: Vec<String> = (0..n).map(|i| space.label(i).to_string()).collect();
        SimplicialComplex::from_facets(labels, &chains).expect("chains are valid facets")
    }

    /// Top simplex dimension; the empty-of-simplices complex has dim 0 by
    /// convention only when it has vertices (which `from_facets` forbids).
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    /// k-simplices (sorted vertex index lists) in lexicographic order.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn simplex_index(&self, k: usize, simplex: &[usize]) -> Option<usize> {
        self.simplices(k)
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .ok()
    }

    /// ∂_k : C_k → C_{k-1}; rows are (k−1)-simplices, columns k-simplices.
    /// ∂_0 is the 0×(#vertices) zero matrix.
    pub fn boundary_matrix(&self, k: usize) -> Vec<Vec<i64>> {
        if k == 0 {
            return Vec::new();
        }
        let rows = self.simplices(k - 1);
        let cols = self.simplices(k);
        let mut m = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, simplex) in cols.iter().enumerate() {
            for drop in 0..simplex.len() {
                let face: Vec<usize> = simplex
                    .iter()
                    .enumerate()
                    .filter(|&(pos, _)| pos != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let i = self
                    .simplex_index(k - 1, &face)
                    .expect("faces are simplices");
                m[i][j] += if drop % 2 == 0 { 1 } else { -1 };
            }
        }
        m
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, level)| {
                let c = level.len() as i64;
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Minimal 7-vertex torus triangulation (cyclic, vertices mod 7).
    pub fn torus() -> Self {
        let vertices: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
        let mut facets = Vec::new();
        for i in 0u32..7 {
            let f = |a: u32| format!("v{}", (i + a) % 7);
            facets.push(vec![f(0), f(1), f(3)]);
            facets.push(vec![f(0), f(2), f(3)]);
        }
        SimplicialComplex::from_facets(vertices, &facets).unwrap()
    }

    /// Minimal 6-vertex real projective plane (antipodal icosahedron
    /// quotient).
    pub fn projective_plane() -> Self {
        let vertices: Vec<String> = (1..=6).map(|i| format!("v{i}")).collect();
        let faces = [
            [1, 2, 5],
            [1, 2, 6],
            [1, 3, 4],
            [1, 3, 6],
            [1, 4, 5],
            [2, 3, 4],
            [2, 3, 5],
            [2, 4, 6],
            [3, 5, 6],
            [4, 5, 6],
        ];
        let facets: Vec<Vec<String>> = faces
            .iter()
            .map(|f| f.iter().map(|v| format!("v{v}")).collect())
            .collect();
        SimplicialComplex::from_facets(vertices, &facets).unwrap()
    }
}

/// JSON carrier for complexes: vertex labels plus facet lists.
#[derive(Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

impl ComplexFile {
    pub fn build(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_facets(self.vertices.clone(), &self.facets)
    }

    pub fn of(k: &SimplicialComplex) -> Self {
        let top = k.dim();
        let mut facets = Vec::new();
        for d in (0..=top).rev() {
            for s in k.simplices(d) {
                let labels: Vec<String> =
                    s.iter().map(|&v| k.vertices[v].clone()).collect();
                let contained = facets.iter().any(|f: &Vec<String>| {
                    labels.iter().all(|l| f.contains(l))
                });
                if !contained {
                    facets.push(labels);
                }
            }
        }
        ComplexFile {
            vertices: k.vertices.clone(),
            facets,
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct HomologySummary {
    pub ring: Ring,
    /// degree-indexed, 0..=dim
    pub betti: Vec<usize>,
    /// torsion coefficients per degree; nonempty only over Z
    pub torsion: Vec<Vec<u64>>,
}

impl HomologySummary {
    pub fn euler(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Degrees with nonzero group (free or torsion).
    pub fn top_nonzero(&self) -> Option<usize> {
        (0..self.betti.len())
            .filter(|&k| self.betti[k] > 0 || !self.torsion[k].is_empty())
            .max()
    }
}

fn certified_snf(m: &[Vec<i64>]) -> Snf {
    let snf = smith_normal_form(m);
    assert!(
        verify_certificate(m, &snf),
        "SNF certificate failed — arithmetic bug"
    );
    snf
}

fn torsion_u64(snf: &Snf) -> Vec<u64> {
    snf.torsion()
        .iter()
        .map(|t: &BigInt| t.to_u64().expect("desk-scale torsion fits u64"))
        .collect()
}

struct Ranks {
    /// per degree k: (#k-simplices, SNF of ∂_k)
    levels: Vec<(usize, Snf)>,
}

fn boundary_ranks(k: &SimplicialComplex) -> Ranks {
    let dim = k.dim();
    let levels = (0..=dim)
        .map(|d| {
            let m = k.boundary_matrix(d);
            let padded = if d == 0 {
                // 0×n zero matrix: SNF of an empty matrix
                Vec::new()
            } else {
                m
            };
            (k.simplices(d).len(), certified_snf(&padded))
        })
        .collect();
    Ranks { levels }
}

impl Ranks {
    fn rank(&self, d: usize, ring: Ring) -> usize {
        match self.levels.get(d) {
            None => 0,
            Some((_, snf)) => match ring {
                Ring::Z | Ring::Q => snf.rank,
                Ring::Zp(p) => snf.rank_mod(p),
            },
        }
    }
}

/// Homology of `k` with coefficients in `ring`.
pub fn homology(k: &SimplicialComplex, ring: Ring) -> Result<HomologySummary> {
    ring.validate()?;
    let ranks = boundary_ranks(k);
    let dim = k.dim();
    let mut betti = Vec::with_capacity(dim + 1);
    let mut torsion = Vec::with_capacity(dim + 1);
    for d in 0..=dim {
        let cells = ranks.levels[d].0;
        let b = cells - ranks.rank(d, ring) - ranks.rank(d + 1, ring);
        betti.push(b);
        let t = match ring {
            Ring::Z => ranks
                .levels
                .get(d + 1)
                .map(|(_, snf)| torsion_u64(snf))
                .unwrap_or_default(),
            _ => Vec::new(),
        };
        torsion.push(t);
    }
    Ok(HomologySummary {
        ring,
        betti,
        torsion,
    })
}

/// Cohomology of `k`. Over a field this equals homology; over Z the free
/// ranks agree and the torsion of H^n is the torsion of H_{n−1}
/// (universal coefficients).
pub fn cohomology(k: &SimplicialComplex, ring: Ring) -> Result<HomologySummary> {
    let mut h = homology(k, ring)?;
    if ring == Ring::Z {
        let mut shifted = vec![Vec::new(); h.torsion.len()];
        for d in 1..h.torsion.len() {
            shifted[d] = h.torsion[d - 1].clone();
        }
        h.torsion = shifted;
    }
    Ok(h)
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ProbeResult {
    pub ring: Ring,
    pub top_nonzero: Option<usize>,
}

/// cd/hd probe report. `value` is the max over the probe family and is a
/// lower bound for the module-supremum definition; `dim` caps it above.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DimReport {
    pub value: usize,
    pub upper_bound: usize,
    pub probes: Vec<ProbeResult>,
    pub lower_bound_only: bool,
}

/// Z, Q, and Z/p for every prime dividing a torsion coefficient of the
/// integral homology.
pub fn default_probes(k: &SimplicialComplex) -> Vec<Ring> {
    let mut probes = vec![Ring::Z, Ring::Q];
    let h = homology(k, Ring::Z).expect("Z is always valid");
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    for level in &h.torsion {
        for &t in level {
            let mut rest = t;
            let mut p = 2;
            while p * p <= rest {
                if rest % p == 0 {
                    primes.insert(p);
                    while rest % p == 0 {
                        rest /= p;
                    }
                }
                p += 1;
            }
            if rest > 1 {
                primes.insert(rest);
            }
        }
    }
    probes.extend(primes.into_iter().map(Ring::Zp));
    probes
}

fn dim_report(
    k: &SimplicialComplex,
    probes: &[Ring],
    summarize: fn(&SimplicialComplex, Ring) -> Result<HomologySummary>,
) -> Result<DimReport> {
    if probes.is_empty() {
        return Err(Error::Shape("probe list must be nonempty".into()));
    }
    let mut results = Vec::new();
    for &ring in probes {
        let h = summarize(k, ring)?;
        results.push(ProbeResult {
            ring,
            top_nonzero: h.top_nonzero(),
        });
    }
    let value = results
        .iter()
        .filter_map(|r| r.top_nonzero)
        .max()
        .unwrap_or(0);
    Ok(DimReport {
        value,
        upper_bound: k.dim(),
        probes: results,
        lower_bound_only: true,
    })
}

/// Max degree with nonvanishing cohomology across the probes.
pub fn cd_space(k: &SimplicialComplex, probes: &[Ring]) -> Result<DimReport> {
    dim_report(k, probes, cohomology)
}

/// Homological counterpart of [`cd_space`].
pub fn hd_space(k: &SimplicialComplex, probes: &[Ring]) -> Result<DimReport> {
    dim_report(k, probes, homology)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn betti(k: &SimplicialComplex, ring: Ring) -> Vec<usize> {
        homology(k, ring).unwrap().betti
    }

    #[test]
    fn order_complex_shapes() {
        let two_chain = SimplicialComplex::order_complex(&FiniteSpace::chain(2));
        assert_eq!(two_chain.simplices(0).len(), 2);
        assert_eq!(two_chain.simplices(1).len(), 1);

        let circle = SimplicialComplex::order_complex(&FiniteSpace::pseudocircle());
        assert_eq!(circle.simplices(0).len(), 4);
        assert_eq!(circle.simplices(1).len(), 4);
        assert_eq!(circle.dim(), 1);

        let discrete = SimplicialComplex::order_complex(&FiniteSpace::antichain(3));
        assert_eq!(discrete.dim(), 0);
        assert_eq!(discrete.simplices(0).len(), 3);
    }

    #[test]
    fn boundary_squares_to_zero() {
        for k in [
            SimplicialComplex::torus(),
            SimplicialComplex::projective_plane(),
            SimplicialComplex::order_complex(&FiniteSpace::pseudocircle().cone()),
        ] {
            for d in 1..=k.dim() {
                let a = k.boundary_matrix(d.saturating_sub(1));
                let b = k.boundary_matrix(d);
                if d == 1 || a.is_empty() {
                    continue;
                }
                for (j, _) in k.simplices(d).iter().enumerate() {
                    for i in 0..k.simplices(d - 2).len() {
                        let mut s = 0i64;
                        for (m, _) in k.simplices(d - 1).iter().enumerate() {
                            s += a[i][m] * b[m][j];
                        }
                        assert_eq!(s, 0, "∂∂ ≠ 0 at degree {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn point_homology() {
        let k = SimplicialComplex::order_complex(&FiniteSpace::point());
        let h = homology(&k, Ring::Z).unwrap();
        assert_eq!(h.betti, vec![1]);
        assert!(h.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn pseudocircle_is_a_circle() {
        let k = SimplicialComplex::order_complex(&FiniteSpace::pseudocircle());
        assert_eq!(betti(&k, Ring::Z), vec![1, 1]);
        assert_eq!(betti(&k, Ring::Q), vec![1, 1]);
        assert_eq!(betti(&k, Ring::Zp(2)), vec![1, 1]);
        let h = homology(&k, Ring::Z).unwrap();
        assert!(h.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn torus_betti_numbers() {
        let k = SimplicialComplex::torus();
        assert_eq!(k.simplices(0).len(), 7);
        assert_eq!(k.simplices(1).len(), 21);
        assert_eq!(k.simplices(2).len(), 14);
        assert_eq!(k.euler_characteristic(), 0);
        assert_eq!(betti(&k, Ring::Z), vec![1, 2, 1]);
        let h = homology(&k, Ring::Z).unwrap();
        assert!(h.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn projective_plane_torsion() {
        let k = SimplicialComplex::projective_plane();
        assert_eq!(k.euler_characteristic(), 1);
        let h = homology(&k, Ring::Z).unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion[0], Vec::<u64>::new());
        assert_eq!(h.torsion[1], vec![2]);
        // UCT: the Z/2 in H_1 reappears as H^2 torsion
        let hc = cohomology(&k, Ring::Z).unwrap();
        assert_eq!(hc.betti, vec![1, 0, 0]);
        assert_eq!(hc.torsion[2], vec![2]);
        // over Z/2 the plane looks nontrivial in every degree
        assert_eq!(betti(&k, Ring::Zp(2)), vec![1, 1, 1]);
        assert_eq!(betti(&k, Ring::Q), vec![1, 0, 0]);
    }

    #[test]
    fn euler_from_betti_matches_simplex_count() {
        for space in crate::corpus::all_posets_up_to_iso(4).unwrap() {
            let k = SimplicialComplex::order_complex(&space);
            let h = homology(&k, Ring::Q).unwrap();
            assert_eq!(h.euler(), k.euler_characteristic(), "space {space:?}");
        }
    }

    #[test]
    fn cd_hd_reports() {
        let point = SimplicialComplex::order_complex(&FiniteSpace::point());
        assert_eq!(cd_space(&point, &default_probes(&point)).unwrap().value, 0);

        let circle = SimplicialComplex::order_complex(&FiniteSpace::pseudocircle());
        let rep = cd_space(&circle, &default_probes(&circle)).unwrap();
        assert_eq!(rep.value, 1);
        assert_eq!(rep.upper_bound, 1);
        assert!(rep.lower_bound_only);

        let rp2 = SimplicialComplex::projective_plane();
        let probes = default_probes(&rp2);
        assert!(probes.contains(&Ring::Zp(2)));
        let rep = cd_space(&rp2, &probes).unwrap();
        assert_eq!(rep.value, 2);
        let z2 = rep
            .probes
            .iter()
            .find(|p| p.ring == Ring::Zp(2))
            .unwrap();
        assert_eq!(z2.top_nonzero, Some(2));
        let hd = hd_space(&rp2, &probes).unwrap();
        assert_eq!(hd.value, 2);
    }

    #[test]
    fn cd_bounded_by_dimension_on_corpus() {
        for space in crate::corpus::all_posets_up_to_iso(4).unwrap() {
            let k = SimplicialComplex::order_complex(&space);
            let rep = cd_space(&k, &default_probes(&k)).unwrap();
            assert!(rep.value <= k.dim(), "space {space:?}");
        }
    }

    #[test]
    fn nonprime_modulus_rejected() {
        let k = SimplicialComplex::torus();
        assert!(matches!(
            homology(&k, Ring::Zp(6)),
            Err(Error::NonPrimeModulus(6))
        ));
    }

    #[test]
    fn complex_file_roundtrip() {
        let k = SimplicialComplex::torus();
        let file = ComplexFile::of(&k);
        let rebuilt = file.build().unwrap();
        assert_eq!(rebuilt, k);
    }
}
