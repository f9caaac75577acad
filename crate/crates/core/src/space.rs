//! Finite posets carrying the Alexandrov topology, their continuous maps,
//! subspaces and products.
//!
//! Convention fixed once for the whole crate: open sets are the *down-sets*
//! of the order, so the minimal open neighborhood of `x` is the principal
//! down-set `↓x`. A point function is continuous iff it is order-preserving.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap from the `u64` bitmask representation of point subsets.
pub const MAX_POINTS: usize = 64;

#[derive(Debug, PartialEq, Eq, Hash)]
struct SpaceData {
    labels: Vec<String>,
    /// `up[i]` has bit `j` set iff `i ≤ j`.
    up: Vec<u64>,
    /// `down[i]` has bit `j` set iff `j ≤ i`.
    down: Vec<u64>,
}

/// A finite topological space, i.e. a finite poset with down-sets open.
/// Cheap to clone; immutable after validation.
#[derive(Clone, Eq)]
pub struct FiniteSpace {
    data: Arc<SpaceData>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data == other.data
    }
}

impl std::hash::Hash for FiniteSpace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.data.hash(state);
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSpace({:?})", self.data.labels)
    }
}

impl FiniteSpace {
    /// Validates a raw reflexive relation given as a boolean matrix
    /// (`leq[i][j]` meaning `i ≤ j`). The transitive closure is applied
    /// first; antisymmetry is checked on the closed relation.
    pub fn from_leq_matrix(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(MAX_POINTS));
        }
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!(
                "expected a {n}x{n} matrix matching {n} labels"
            )));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::Shape("duplicate point labels".into()));
            }
        }
        let mut up = vec![0u64; n];
        for (i, row) in leq.iter().enumerate() {
            up[i] |= 1 << i;
            for (j, &v) in row.iter().enumerate() {
                if v {
                    up[i] |= 1 << j;
                }
            }
        }
        // transitive closure, then antisymmetry
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = up[i];
                let mut rest = up[i];
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    acc |= up[j];
                }
                if acc != up[i] {
                    up[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if up[i] & (1 << j) != 0 && up[j] & (1 << i) != 0 {
                    return Err(Error::Cycle(vec![labels[i].clone(), labels[j].clone()]));
                }
            }
        }
        let mut down = vec![0u64; n];
        for i in 0..n {
            let mut rest = up[i];
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                down[j] |= 1 << i;
            }
        }
        Ok(FiniteSpace {
            data: Arc::new(SpaceData { labels, up, down }),
        })
    }

    /// Builds a space from covering relations `(lower, upper)` given by label.
    pub fn from_covers(labels: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let n = labels.len();
        let index = |l: &str| -> Result<usize> {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::Shape(format!("unknown point label {l:?}")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (a, b) in covers {
            let (i, j) = (index(a)?, index(b)?);
            leq[i][j] = true;
        }
        Self::from_leq_matrix(labels, leq)
    }

    /// One-point space.
    pub fn point() -> Self {
        Self::from_covers(vec!["*".into()], &[]).unwrap()
    }

    /// Chain `p0 < p1 < ... < p_{n-1}`.
    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| (format!("p{}", i - 1), format!("p{i}")))
            .collect();
        Self::from_covers(labels, &covers).unwrap()
    }

    /// Antichain on `n` points.
    pub fn antichain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        Self::from_covers(labels, &[]).unwrap()
    }

    /// The 4-point finite model of the circle: minimal points `a`, `b`
    /// under maximal points `c`, `d` with all mixed comparabilities.
    pub fn pseudocircle() -> Self {
        let labels = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let covers = [
            ("a".to_string(), "c".to_string()),
            ("a".to_string(), "d".to_string()),
            ("b".to_string(), "c".to_string()),
            ("b".to_string(), "d".to_string()),
        ];
        Self::from_covers(labels, &covers).unwrap()
    }

    /// Adds a single point above every existing point (non-Hausdorff cone).
    pub fn cone(&self) -> Self {
        let mut labels = self.labels().to_vec();
        let apex = "cone*".to_string();
        labels.push(apex.clone());
        let mut covers: Vec<(String, String)> = self.cover_relations();
        for l in self.labels() {
            covers.push((l.clone(), apex.clone()));
        }
        Self::from_covers(labels, &covers).unwrap()
    }

    pub fn len(&self) -> usize {
        self.data.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.data.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.data.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.data.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.data.up[i] & (1 << j) != 0
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// Bitmask of `{j : i ≤ j}`.
    pub fn up_mask(&self, i: usize) -> u64 {
        self.data.up[i]
    }

    /// Bitmask of `{j : j ≤ i}`, the minimal open neighborhood ↓i.
    pub fn down_mask(&self, i: usize) -> u64 {
        self.data.down[i]
    }

    pub fn comparable_mask(&self, i: usize) -> u64 {
        self.data.up[i] | self.data.down[i]
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Is `mask` a down-set (i.e. open)?
    pub fn is_down_set(&self, mask: u64) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.data.down[i] & !mask != 0 {
                return false;
            }
        }
        true
    }

    /// Streams all down-sets (including ∅ and the whole space) in a
    /// deterministic order, one per antichain of maximal elements.
    pub fn down_sets(&self) -> DownSetIter {
        DownSetIter {
            space: self.clone(),
            stack: vec![Frame {
                antichain: 0,
                down: 0,
                from: 0,
            }],
        }
    }

    /// Collects down-sets up to `max_count`; the flag reports truncation.
    pub fn down_sets_capped(&self, max_count: usize) -> (Vec<u64>, bool) {
        let mut it = self.down_sets();
        let mut out = Vec::new();
        for m in it.by_ref() {
            if out.len() == max_count {
                return (out, true);
            }
            out.push(m);
        }
        (out, false)
    }

    /// Connected components of the comparability graph, as bitmasks sorted
    /// by least member.
    pub fn components(&self) -> Vec<u64> {
        let n = self.len();
        let mut seen = 0u64;
        let mut out = Vec::new();
        for i in 0..n {
            if seen & (1 << i) != 0 {
                continue;
            }
            let mut comp = 1u64 << i;
            loop {
                let mut grown = comp;
                let mut rest = comp;
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    grown |= self.comparable_mask(j);
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Component mask containing point `i`.
    pub fn component_of(&self, i: usize) -> u64 {
        self.components()
            .into_iter()
            .find(|c| c & (1 << i) != 0)
            .unwrap()
    }

    /// Induced subspace on the points of `mask` (in ascending index order).
    pub fn subspace(&self, mask: u64) -> Subspace {
        let indices: Vec<usize> = (0..self.len()).filter(|i| mask & (1 << i) != 0).collect();
        let labels: Vec<String> = indices.iter().map(|&i| self.label(i).to_string()).collect();
        let m = indices.len();
        let mut leq = vec![vec![false; m]; m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                leq[a][b] = self.leq(i, j);
            }
        }
        let space = FiniteSpace::from_leq_matrix(labels, leq).expect("induced order is a poset");
        Subspace {
            parent: self.clone(),
            indices,
            space,
        }
    }

    /// Covering relations `(lower, upper)` by label, in index order.
    pub fn cover_relations(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                // covering: nothing strictly between
                let between = self.data.up[i] & self.data.down[j] & !(1 << i) & !(1 << j);
                if between == 0 {
                    out.push((self.label(i).to_string(), self.label(j).to_string()));
                }
            }
        }
        out
    }

    /// Maximal points of a subset mask (within the subset).
    pub fn maximal_in(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.data.up[i] & mask & !(1 << i) == 0 {
                out |= 1 << i;
            }
        }
        out
    }
}

struct Frame {
    antichain: u64,
    down: u64,
    from: usize,
}

/// Deterministic stream of down-sets generated by antichains of maximal
/// elements (DFS over ascending point indices).
pub struct DownSetIter {
    space: FiniteSpace,
    stack: Vec<Frame>,
}

impl Iterator for DownSetIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let frame = self.stack.pop()?;
        let n = self.space.len();
        for j in (frame.from..n).rev() {
            if frame.antichain & self.space.comparable_mask(j) == 0 {
                self.stack.push(Frame {
                    antichain: frame.antichain | (1 << j),
                    down: frame.down | self.space.down_mask(j),
                    from: j + 1,
                });
            }
        }
        Some(frame.down)
    }
}

/// An induced subspace together with its embedding data.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub parent: FiniteSpace,
    /// Ascending parent indices of the subspace points.
    pub indices: Vec<usize>,
    pub space: FiniteSpace,
}

impl Subspace {
    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, &i| m | (1 << i))
    }

    pub fn inclusion(&self) -> SpaceMap {
        SpaceMap::new(self.space.clone(), self.parent.clone(), self.indices.clone())
            .expect("inclusion of an induced subspace is monotone")
    }

    /// Parent index -> subspace index, if the point belongs to the subspace.
    pub fn to_sub(&self, parent_index: usize) -> Option<usize> {
        self.indices.iter().position(|&i| i == parent_index)
    }
}

/// An open subset of a fixed space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSet {
    pub space: FiniteSpace,
    pub members: u64,
}

impl OpenSet {
    pub fn new(space: FiniteSpace, members: u64) -> Result<Self> {
        if members & !space.full_mask() != 0 {
            return Err(Error::Shape("open set mask exceeds the space".into()));
        }
        if !space.is_down_set(members) {
            return Err(Error::Shape("subset is not a down-set".into()));
        }
        Ok(OpenSet { space, members })
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.space.len())
            .filter(|i| self.members & (1 << i) != 0)
            .map(|i| self.space.label(i).to_string())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }
}

/// An order-preserving (= continuous) point function between finite spaces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpaceMap {
    domain: FiniteSpace,
    codomain: FiniteSpace,
    map: Vec<usize>,
}

impl fmt::Debug for SpaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = (0..self.domain.len())
            .map(|i| format!("{}↦{}", self.domain.label(i), self.codomain.label(self.map[i])))
            .collect();
        write!(f, "SpaceMap{{{}}}", pairs.join(", "))
    }
}

impl SpaceMap {
    pub fn new(domain: FiniteSpace, codomain: FiniteSpace, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.len() {
            return Err(Error::Shape("assignment length != domain size".into()));
        }
        if map.iter().any(|&y| y >= codomain.len()) {
            return Err(Error::Shape("assignment target out of range".into()));
        }
        for i in 0..domain.len() {
            for j in 0..domain.len() {
                if domain.leq(i, j) && !codomain.leq(map[i], map[j]) {
                    return Err(Error::NotMonotone(format!(
                        "{} ≤ {} but {} ≰ {}",
                        domain.label(i),
                        domain.label(j),
                        codomain.label(map[i]),
                        codomain.label(map[j])
                    )));
                }
            }
        }
        Ok(SpaceMap { domain, codomain, map })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        SpaceMap {
            domain: space.clone(),
            codomain: space.clone(),
            map: (0..space.len()).collect(),
        }
    }

    pub fn constant(domain: &FiniteSpace, codomain: &FiniteSpace, target: usize) -> Self {
        assert!(target < codomain.len());
        SpaceMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map: vec![target; domain.len()],
        }
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    pub fn assignment(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_constant(&self) -> bool {
        self.map.windows(2).all(|w| w[0] == w[1])
    }

    /// Image as a bitmask in the codomain.
    pub fn image_mask(&self) -> u64 {
        self.map.iter().fold(0, |m, &y| m | (1 << y))
    }

    /// `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &SpaceMap) -> Result<SpaceMap> {
        if self.codomain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(SpaceMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            map: self.map.iter().map(|&i| other.map[i]).collect(),
        })
    }

    /// Pointwise `self(x) ≤ other(x)` for all x.
    pub fn pointwise_leq(&self, other: &SpaceMap) -> bool {
        self.map
            .iter()
            .zip(&other.map)
            .all(|(&a, &b)| self.codomain.leq(a, b))
    }

    /// Pointwise comparable in a single direction (a fence step).
    pub fn fence_comparable(&self, other: &SpaceMap) -> bool {
        self.pointwise_leq(other) || other.pointwise_leq(self)
    }

    /// Restriction to an induced subspace of the domain, with codomain
    /// either kept or replaced by a supplied subspace of it.
    pub fn restrict(&self, sub: &Subspace, new_codomain: Option<&Subspace>) -> Result<SpaceMap> {
        if sub.parent != self.domain {
            return Err(Error::Subspace("subspace of a different space".into()));
        }
        let restricted: Vec<usize> = sub.indices.iter().map(|&i| self.map[i]).collect();
        match new_codomain {
            None => SpaceMap::new(sub.space.clone(), self.codomain.clone(), restricted),
            Some(cod) => {
                if cod.parent != self.codomain {
                    return Err(Error::Subspace("codomain subspace of a different space".into()));
                }
                let mut mapped = Vec::with_capacity(restricted.len());
                for y in restricted {
                    match cod.to_sub(y) {
                        Some(s) => mapped.push(s),
                        None => {
                            return Err(Error::Image(format!(
                                "f({:?}) = {:?} not in the supplied codomain",
                                sub.space.labels(),
                                self.codomain.label(y)
                            )))
                        }
                    }
                }
                SpaceMap::new(sub.space.clone(), cod.space.clone(), mapped)
            }
        }
    }

    /// Restriction to a down-set of the domain, codomain unchanged.
    pub fn restrict_to_open(&self, members: u64) -> SpaceMap {
        let sub = self.domain.subspace(members);
        self.restrict(&sub, None).expect("restriction to a subspace")
    }
}

/// A finite product of spaces; points are tuples in row-major order
/// (last factor varies fastest), the order is componentwise.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    pub space: FiniteSpace,
    pub factors: Vec<FiniteSpace>,
    strides: Vec<usize>,
}

impl ProductSpace {
    pub fn new(factors: Vec<FiniteSpace>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Shape("product of an empty list".into()));
        }
        let total: usize = factors.iter().map(|f| f.len()).product();
        if total > MAX_POINTS {
            return Err(Error::TooManyPoints(MAX_POINTS));
        }
        let r = factors.len();
        let mut strides = vec![1usize; r];
        for k in (0..r - 1).rev() {
            strides[k] = strides[k + 1] * factors[k + 1].len();
        }
        let mut labels = Vec::with_capacity(total);
        let mut leq = vec![vec![false; total]; total];
        for idx in 0..total {
            let tup = Self::decode(idx, &factors, &strides);
            let parts: Vec<&str> = tup.iter().enumerate().map(|(k, &x)| factors[k].label(x)).collect();
            labels.push(format!("({})", parts.join(",")));
            for jdx in 0..total {
                let tup2 = Self::decode(jdx, &factors, &strides);
                leq[idx][jdx] = tup
                    .iter()
                    .zip(&tup2)
                    .enumerate()
                    .all(|(k, (&a, &b))| factors[k].leq(a, b));
            }
        }
        let space = FiniteSpace::from_leq_matrix(labels, leq)?;
        Ok(ProductSpace { space, factors, strides })
    }

    /// r-fold power of one space.
    pub fn power(base: &FiniteSpace, r: usize) -> Result<Self> {
        Self::new(vec![base.clone(); r])
    }

    fn decode(index: usize, factors: &[FiniteSpace], strides: &[usize]) -> Vec<usize> {
        factors
            .iter()
            .enumerate()
            .map(|(k, f)| (index / strides[k]) % f.len())
            .collect()
    }

    pub fn tuple_of(&self, index: usize) -> Vec<usize> {
        Self::decode(index, &self.factors, &self.strides)
    }

    pub fn index_of_tuple(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.strides)
            .map(|(&x, &s)| x * s)
            .sum()
    }

    /// Projection onto factor `k`.
    pub fn projection(&self, k: usize) -> SpaceMap {
        let map: Vec<usize> = (0..self.space.len()).map(|i| self.tuple_of(i)[k]).collect();
        SpaceMap::new(self.space.clone(), self.factors[k].clone(), map)
            .expect("projections are monotone")
    }

    /// Diagonal embedding of a common base, if all factors equal it.
    pub fn diagonal(&self, base: &FiniteSpace) -> Result<SpaceMap> {
        if self.factors.iter().any(|f| f != base) {
            return Err(Error::Shape("diagonal requires equal factors".into()));
        }
        let r = self.factors.len();
        let map: Vec<usize> = (0..base.len())
            .map(|x| self.index_of_tuple(&vec![x; r]))
            .collect();
        SpaceMap::new(base.clone(), self.space.clone(), map)
    }
}

// --- JSON file formats ---

/// On-disk space format: points plus covering relations; the transitive
/// closure is computed on load.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

impl SpaceFile {
    pub fn to_space(&self) -> Result<FiniteSpace> {
        let covers: Vec<(String, String)> = self
            .covers
            .iter()
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect();
        FiniteSpace::from_covers(self.points.clone(), &covers)
    }

    pub fn from_space(space: &FiniteSpace) -> Self {
        SpaceFile {
            points: space.labels().to_vec(),
            covers: space
                .cover_relations()
                .into_iter()
                .map(|(a, b)| [a, b])
                .collect(),
        }
    }
}

/// On-disk map format; `domain`/`codomain` are paths to space files.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MapFile {
    pub domain: String,
    pub codomain: String,
    pub assignment: std::collections::BTreeMap<String, String>,
}

impl MapFile {
    pub fn to_map(&self, domain: &FiniteSpace, codomain: &FiniteSpace) -> Result<SpaceMap> {
        let mut map = Vec::with_capacity(domain.len());
        for l in domain.labels() {
            let target = self
                .assignment
                .get(l)
                .ok_or_else(|| Error::Parse(format!("assignment missing point {l:?}")))?;
            let y = codomain
                .index_of(target)
                .ok_or_else(|| Error::Parse(format!("unknown codomain point {target:?}")))?;
            map.push(y);
        }
        SpaceMap::new(domain.clone(), codomain.clone(), map)
    }
}
