//! LS-category and sequential topological complexity of maps by exact
//! minimal-cover search over admissible open sets.
//!
//! An open `U ⊆ X` is admissible for `cat(f)` when `f|U` is null-homotopic;
//! an open `U ⊆ X^r` is admissible for `TC_r(f)` when the `r` maps
//! `x̄ ↦ f(x_j)` on `U` are pairwise homotopic (consecutive pairs suffice).
//! Both predicates are downward-closed, so minimal covers can be searched
//! over maximal admissible opens only.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::homotopy::{continuous_maps, FenceWitness, HomotopyEngine};
use crate::retracts::RetractionSquare;
use crate::setcover::minimal_cover;
use crate::space::{FiniteSpace, OpenSet, ProductSpace, SpaceMap};

/// Search budgets; exceeding one yields bracketing bounds, never a wrong
/// answer.
#[derive(Clone, Debug)]
pub struct Budgets {
    /// Cap on enumerated candidate open sets.
    pub max_open_sets: usize,
    /// Cap on the size of the r-fold product for TC.
    pub max_product_points: usize,
    /// Cap on continuous-map enumeration inside oracles.
    pub map_enum_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_open_sets: 200_000,
            max_product_points: 16,
            map_enum_cap: 200_000,
        }
    }
}

/// Per-part admissibility certificate.
#[derive(Clone, Debug)]
pub enum PartWitness {
    /// Fence from `f|U` to a constant map.
    Null(FenceWitness),
    /// Fences between consecutive factor projections on `U ⊆ X^r`.
    Planner(Vec<FenceWitness>),
}

/// An open cover with per-part admissibility witnesses.
#[derive(Clone, Debug)]
pub struct Cover {
    /// The covered space (`X` for cat, `X^r` for TC).
    pub space: FiniteSpace,
    pub parts: Vec<OpenSet>,
    pub witnesses: Vec<PartWitness>,
}

impl Cover {
    fn union_mask(&self) -> u64 {
        self.parts.iter().fold(0, |a, p| a | p.members)
    }

    /// Re-validates this cover as a `cat(f)` witness: parts are open, cover
    /// the space, and each stored fence runs from `f|U` to a constant.
    pub fn validate_cat(&self, f: &SpaceMap) -> Result<()> {
        if &self.space != f.domain() {
            return Err(Error::DomainMismatch);
        }
        self.validate_shape()?;
        for (part, witness) in self.parts.iter().zip(&self.witnesses) {
            let PartWitness::Null(fence) = witness else {
                return Err(Error::MissingWitness("expected a null-homotopy fence".into()));
            };
            fence.validate()?;
            let restricted = f.restrict_to_open(part.members);
            if fence.first() != &restricted {
                return Err(Error::MissingWitness(
                    "fence does not start at the restriction of f".into(),
                ));
            }
            if !fence.last().is_constant() {
                return Err(Error::MissingWitness("fence does not end at a constant".into()));
            }
        }
        Ok(())
    }

    /// Re-validates this cover as a `TC_r(f)` witness over `f.domain()^r`.
    pub fn validate_tc(&self, f: &SpaceMap, r: usize) -> Result<()> {
        let product = ProductSpace::power(f.domain(), r)?;
        if self.space != product.space {
            return Err(Error::DomainMismatch);
        }
        self.validate_shape()?;
        let factor_maps = factor_maps(&product, f)?;
        for (part, witness) in self.parts.iter().zip(&self.witnesses) {
            let PartWitness::Planner(fences) = witness else {
                return Err(Error::MissingWitness("expected projection fences".into()));
            };
            if fences.len() + 1 != r {
                return Err(Error::MissingWitness(format!(
                    "expected {} fences, found {}",
                    r - 1,
                    fences.len()
                )));
            }
            for (j, fence) in fences.iter().enumerate() {
                fence.validate()?;
                let pj = factor_maps[j].restrict_to_open(part.members);
                let pj1 = factor_maps[j + 1].restrict_to_open(part.members);
                if fence.first() != &pj || fence.last() != &pj1 {
                    return Err(Error::MissingWitness(format!(
                        "fence {j} endpoints do not match the factor projections"
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate_shape(&self) -> Result<()> {
        if self.parts.len() != self.witnesses.len() {
            return Err(Error::Shape("parts/witnesses length mismatch".into()));
        }
        for part in &self.parts {
            if part.space != self.space {
                return Err(Error::DomainMismatch);
            }
            if !self.space.is_down_set(part.members) {
                return Err(Error::Shape("cover part is not open".into()));
            }
        }
        if self.union_mask() != self.space.full_mask() {
            return Err(Error::Shape("parts do not cover the space".into()));
        }
        Ok(())
    }
}

/// The maps `x̄ ↦ f(x_j)` on the whole product, `j = 0..r-1`.
fn factor_maps(product: &ProductSpace, f: &SpaceMap) -> Result<Vec<SpaceMap>> {
    if product.factors.iter().any(|x| x != f.domain()) {
        return Err(Error::DomainMismatch);
    }
    (0..product.factors.len())
        .map(|j| product.projection(j).then(f))
        .collect()
}

/// `cat(f)`: the minimal `n` such that the domain is covered by `n+1` open
/// sets on which `f` is null-homotopic, with the witness cover.
pub fn cat_map(engine: &HomotopyEngine, f: &SpaceMap, budgets: &Budgets) -> Result<(usize, Cover)> {
    let x = f.domain().clone();
    if x.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let (downsets, truncated) = x.down_sets_capped(budgets.max_open_sets);
    let mut admissible: Vec<u64> = Vec::new();
    let mut witnesses: HashMap<u64, FenceWitness> = HashMap::new();
    for mask in downsets {
        if mask == 0 {
            continue;
        }
        let restricted = f.restrict_to_open(mask);
        if let Some(w) = engine.is_nullhomotopic(&restricted)? {
            admissible.push(mask);
            witnesses.insert(mask, w);
        }
    }
    if truncated {
        let upper = greedy_cover_size(x.full_mask(), &admissible);
        return Err(Error::SearchBudgetExceeded {
            context: format!("cat open-set enumeration cap {}", budgets.max_open_sets),
            lower: cat_lower_bound(f),
            upper: upper.map(|k| k - 1),
        });
    }
    let maximal = maximal_masks(&admissible);
    let chosen = minimal_cover(x.full_mask(), &maximal)
        .expect("principal down-sets are admissible, so a cover exists");
    let cover = Cover {
        space: x.clone(),
        parts: chosen
            .iter()
            .map(|&i| OpenSet::new(x.clone(), maximal[i]))
            .collect::<Result<Vec<_>>>()?,
        witnesses: chosen
            .iter()
            .map(|&i| PartWitness::Null(witnesses[&maximal[i]].clone()))
            .collect(),
    };
    cover.validate_cat(f)?;
    Ok((cover.parts.len() - 1, cover))
}

/// Decides whether `U ⊆ X^r` admits a sequential f-motion planner via the
/// projection-homotopy criterion, returning the r−1 fences when it does.
pub fn admits_planner(
    engine: &HomotopyEngine,
    product: &ProductSpace,
    u_mask: u64,
    f: &SpaceMap,
) -> Result<Option<Vec<FenceWitness>>> {
    if !product.space.is_down_set(u_mask) {
        return Err(Error::Shape("planner subset must be open".into()));
    }
    if u_mask == 0 {
        return Ok(Some(vec![]));
    }
    let factor_maps = factor_maps(product, f)?;
    let mut fences = Vec::with_capacity(factor_maps.len() - 1);
    for j in 0..factor_maps.len() - 1 {
        let pj = factor_maps[j].restrict_to_open(u_mask);
        let pj1 = factor_maps[j + 1].restrict_to_open(u_mask);
        match engine.are_homotopic(&pj, &pj1)? {
            Some(w) => fences.push(w),
            None => return Ok(None),
        }
    }
    Ok(Some(fences))
}

/// Rational cup-length of the domain's order complex, used as the
/// best-known lower bound when the identity-map search runs out of
/// budget. For non-identity maps no product bound is claimed.
fn cat_lower_bound(f: &SpaceMap) -> usize {
    let x = f.domain();
    let is_identity = f.domain() == f.codomain()
        && (0..x.len()).all(|i| f.apply(i) == i);
    if !is_identity || x.len() > 24 {
        return 0;
    }
    let k = crate::chains::SimplicialComplex::order_complex(x);
    crate::products::cup_length(&k, crate::linalg::FieldSpec::Q).unwrap_or(0)
}

/// `TC_r(f)`: minimal `k` with a cover of `X^r` by `k+1` planner-admissible
/// open sets, with the witness cover. `TC_r(X)` is the identity-map case.
pub fn tc_map(
    engine: &HomotopyEngine,
    f: &SpaceMap,
    r: usize,
    budgets: &Budgets,
) -> Result<(usize, Cover)> {
    if r < 2 {
        return Err(Error::Shape("TC requires r >= 2".into()));
    }
    let x = f.domain().clone();
    if x.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if !x.is_connected() || !f.codomain().is_connected() {
        return Err(Error::Shape(
            "TC is defined here for connected domain and codomain".into(),
        ));
    }
    let product = ProductSpace::power(&x, r)?;
    if product.space.len() > budgets.max_product_points {
        return Err(Error::SearchBudgetExceeded {
            context: format!(
                "product has {} points, budget {}",
                product.space.len(),
                budgets.max_product_points
            ),
            lower: 0,
            upper: None,
        });
    }
    let (downsets, truncated) = product.space.down_sets_capped(budgets.max_open_sets);
    let mut admissible: Vec<u64> = Vec::new();
    let mut witnesses: HashMap<u64, Vec<FenceWitness>> = HashMap::new();
    for mask in downsets {
        if mask == 0 {
            continue;
        }
        if let Some(ws) = admits_planner(engine, &product, mask, f)? {
            admissible.push(mask);
            witnesses.insert(mask, ws);
        }
    }
    if truncated {
        let upper = greedy_cover_size(product.space.full_mask(), &admissible);
        return Err(Error::SearchBudgetExceeded {
            context: format!("tc open-set enumeration cap {}", budgets.max_open_sets),
            lower: 0,
            upper: upper.map(|k| k - 1),
        });
    }
    let maximal = maximal_masks(&admissible);
    let chosen = minimal_cover(product.space.full_mask(), &maximal).ok_or_else(|| {
        Error::Shape("no planner-admissible cover exists (codomain obstruction)".into())
    })?;
    let cover = Cover {
        space: product.space.clone(),
        parts: chosen
            .iter()
            .map(|&i| OpenSet::new(product.space.clone(), maximal[i]))
            .collect::<Result<Vec<_>>>()?,
        witnesses: chosen
            .iter()
            .map(|&i| PartWitness::Planner(witnesses[&maximal[i]].clone()))
            .collect(),
    };
    cover.validate_tc(f, r)?;
    Ok((cover.parts.len() - 1, cover))
}

fn maximal_masks(masks: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == m))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn greedy_cover_size(universe: u64, sets: &[u64]) -> Option<usize> {
    let mut uncovered = universe;
    let mut count = 0;
    while uncovered != 0 {
        let best = sets
            .iter()
            .max_by_key(|&&s| (s & uncovered).count_ones())
            .copied()?;
        if best & uncovered == 0 {
            return None;
        }
        uncovered &= !best;
        count += 1;
    }
    Some(count)
}

/// One row of a planner table: a fence through the codomain hitting the
/// required waypoints in order.
#[derive(Clone, Debug)]
pub struct PlannerEntry {
    /// Index of the tuple inside the subset's subspace ordering.
    pub local_index: usize,
    /// Index of the tuple in the ambient product space.
    pub product_index: usize,
    /// Path through the codomain; consecutive points comparable.
    pub path: Vec<usize>,
    /// Positions in `path` where `f(x_j)` must occur, ascending.
    pub waypoints: Vec<usize>,
}

/// Discrete sequential f-motion planner on an open subset of `X^r`.
#[derive(Clone, Debug)]
pub struct PlannerTable {
    pub subset: OpenSet,
    pub entries: Vec<PlannerEntry>,
}

impl PlannerTable {
    /// Checks the waypoint axiom and fence validity of every entry.
    pub fn validate(&self, product: &ProductSpace, f: &SpaceMap) -> Result<()> {
        let y = f.codomain();
        for entry in &self.entries {
            let tuple = product.tuple_of(entry.product_index);
            if entry.waypoints.len() != tuple.len() {
                return Err(Error::Shape("one waypoint per factor required".into()));
            }
            for w in entry.path.windows(2) {
                if !y.comparable(w[0], w[1]) {
                    return Err(Error::Shape("planner path step not comparable".into()));
                }
            }
            let mut prev = None;
            for (j, &w) in entry.waypoints.iter().enumerate() {
                if w >= entry.path.len() {
                    return Err(Error::Shape("waypoint index out of range".into()));
                }
                if let Some(p) = prev {
                    if w < p {
                        return Err(Error::Shape("waypoints not ascending".into()));
                    }
                }
                prev = Some(w);
                if entry.path[w] != f.apply(tuple[j]) {
                    return Err(Error::Shape(format!(
                        "waypoint {j} misses f(x_{j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds the explicit planner table from the projection fences by
/// evaluating each fence at every tuple and concatenating the paths.
pub fn extract_planner(
    product: &ProductSpace,
    u_mask: u64,
    f: &SpaceMap,
    witnesses: &[FenceWitness],
) -> Result<PlannerTable> {
    let r = product.factors.len();
    if witnesses.len() + 1 != r {
        return Err(Error::MissingWitness(format!(
            "expected {} fences for r = {r}",
            r - 1
        )));
    }
    let subset = OpenSet::new(product.space.clone(), u_mask)?;
    let sub = product.space.subspace(u_mask);
    // endpoint sanity: fences must link consecutive factor projections
    let factor_maps = factor_maps(product, f)?;
    for (j, fence) in witnesses.iter().enumerate() {
        fence.validate()?;
        let pj = factor_maps[j].restrict_to_open(u_mask);
        let pj1 = factor_maps[j + 1].restrict_to_open(u_mask);
        if fence.first() != &pj || fence.last() != &pj1 {
            return Err(Error::MissingWitness(format!(
                "fence {j} does not link projection {j} to {}",
                j + 1
            )));
        }
    }
    let mut entries = Vec::with_capacity(sub.indices.len());
    for (local, &pidx) in sub.indices.iter().enumerate() {
        let mut path: Vec<usize> = Vec::new();
        let mut waypoints = vec![0usize];
        for fence in witnesses {
            let seg: Vec<usize> = fence.steps.iter().map(|s| s.apply(local)).collect();
            if path.is_empty() {
                path.extend(seg);
            } else {
                debug_assert_eq!(*path.last().unwrap(), seg[0]);
                path.extend(seg.into_iter().skip(1));
            }
            waypoints.push(path.len() - 1);
        }
        if witnesses.is_empty() {
            // r = 1 never happens (r >= 2), but keep the row well-formed
            path.push(f.apply(product.tuple_of(pidx)[0]));
        }
        entries.push(PlannerEntry {
            local_index: local,
            product_index: pidx,
            path,
            waypoints,
        });
    }
    let table = PlannerTable { subset, entries };
    table.validate(product, f)?;
    Ok(table)
}

/// Which invariant a cover witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictKind {
    Cat,
    Tc { r: usize },
}

/// The constructive cover restriction: parts become `U ∩ X'` (or
/// `U ∩ (X')^r`), and every fence step is post-composed with `r_Y`.
/// Empty parts are dropped; the result re-validates for `f'`.
pub fn restrict_cover(
    square: &RetractionSquare,
    cover: &Cover,
    kind: RestrictKind,
) -> Result<Cover> {
    square.verify().map_err(|e| Error::SquareInvalid(e.to_string()))?;
    match kind {
        RestrictKind::Cat => restrict_cover_cat(square, cover),
        RestrictKind::Tc { r } => restrict_cover_tc(square, cover, r),
    }
}

fn restrict_cover_cat(square: &RetractionSquare, cover: &Cover) -> Result<Cover> {
    if &cover.space != square.f.domain() {
        return Err(Error::DomainMismatch);
    }
    let x_prime = square.f_prime.domain().clone();
    let y_prime = square.f_prime.codomain().clone();
    let mut parts = Vec::new();
    let mut witnesses = Vec::new();
    for (part, witness) in cover.parts.iter().zip(&cover.witnesses) {
        let PartWitness::Null(fence) = witness else {
            return Err(Error::MissingWitness("cat restriction needs null fences".into()));
        };
        let v_ambient = part.members & square.x_sub.mask();
        if v_ambient == 0 {
            continue;
        }
        // local mask of V inside X'
        let mut v_local = 0u64;
        for (k, &xi) in square.x_sub.indices.iter().enumerate() {
            if v_ambient & (1 << xi) != 0 {
                v_local |= 1 << k;
            }
        }
        let u_sub = cover.space.subspace(part.members);
        let v_sub = x_prime.subspace(v_local);
        // transported fence: restrict each step to V and post-compose r_Y
        let mut steps = Vec::with_capacity(fence.steps.len());
        for s in &fence.steps {
            let assignment: Vec<usize> = v_sub
                .indices
                .iter()
                .map(|&local_xp| {
                    let ambient_x = square.x_sub.indices[local_xp];
                    let pos_in_u = u_sub
                        .to_sub(ambient_x)
                        .expect("V is contained in U");
                    square.r_y.apply(s.apply(pos_in_u))
                })
                .collect();
            steps.push(SpaceMap::new(
                v_sub.space.clone(),
                y_prime.clone(),
                assignment,
            )?);
        }
        parts.push(OpenSet::new(x_prime.clone(), v_local)?);
        witnesses.push(PartWitness::Null(FenceWitness::new(steps)?));
    }
    let out = Cover {
        space: x_prime,
        parts,
        witnesses,
    };
    out.validate_cat(&square.f_prime)?;
    Ok(out)
}

fn restrict_cover_tc(square: &RetractionSquare, cover: &Cover, r: usize) -> Result<Cover> {
    let x = square.f.domain().clone();
    let product = ProductSpace::power(&x, r)?;
    if cover.space != product.space {
        return Err(Error::DomainMismatch);
    }
    let x_prime = square.f_prime.domain().clone();
    let y_prime = square.f_prime.codomain().clone();
    let product_prime = ProductSpace::power(&x_prime, r)?;
    // ambient product indices of tuples with all components in X'
    let x_mask = square.x_sub.mask();
    let mut ambient_of_local: Vec<usize> = Vec::with_capacity(product_prime.space.len());
    for i in 0..product.space.len() {
        let tuple = product.tuple_of(i);
        if tuple.iter().all(|&c| x_mask & (1 << c) != 0) {
            ambient_of_local.push(i);
        }
    }
    debug_assert_eq!(ambient_of_local.len(), product_prime.space.len());
    let mut parts = Vec::new();
    let mut witnesses = Vec::new();
    for (part, witness) in cover.parts.iter().zip(&cover.witnesses) {
        let PartWitness::Planner(fences) = witness else {
            return Err(Error::MissingWitness("tc restriction needs planner fences".into()));
        };
        // V as a local mask in (X')^r
        let mut v_local = 0u64;
        for (local, &ambient) in ambient_of_local.iter().enumerate() {
            if part.members & (1 << ambient) != 0 {
                v_local |= 1 << local;
            }
        }
        if v_local == 0 {
            continue;
        }
        let u_sub = product.space.subspace(part.members);
        let v_sub = product_prime.space.subspace(v_local);
        let mut new_fences = Vec::with_capacity(fences.len());
        for fence in fences {
            let mut steps = Vec::with_capacity(fence.steps.len());
            for s in &fence.steps {
                let assignment: Vec<usize> = v_sub
                    .indices
                    .iter()
                    .map(|&local_pp| {
                        let ambient_p = ambient_of_local[local_pp];
                        let pos_in_u = u_sub.to_sub(ambient_p).expect("V is contained in U");
                        square.r_y.apply(s.apply(pos_in_u))
                    })
                    .collect();
                steps.push(SpaceMap::new(
                    v_sub.space.clone(),
                    y_prime.clone(),
                    assignment,
                )?);
            }
            new_fences.push(FenceWitness::new(steps)?);
        }
        parts.push(OpenSet::new(product_prime.space.clone(), v_local)?);
        witnesses.push(PartWitness::Planner(new_fences));
    }
    let out = Cover {
        space: product_prime.space.clone(),
        parts,
        witnesses,
    };
    out.validate_tc(&square.f_prime, r)?;
    Ok(out)
}

/// Independent decision of planner existence straight from the cover
/// definition: exhaustive reachability over all continuous maps `U → Y`
/// under pointwise-comparability steps, consecutive projections linked.
pub mod oracle {
    use super::*;

    pub fn has_planner_table(
        product: &ProductSpace,
        u_mask: u64,
        f: &SpaceMap,
        cap: usize,
    ) -> Result<bool> {
        if u_mask == 0 {
            return Ok(true);
        }
        let sub = product.space.subspace(u_mask);
        let y = f.codomain().clone();
        let maps = continuous_maps(&sub.space, &y, cap)?;
        let projections: Vec<Vec<usize>> = (0..product.factors.len())
            .map(|j| {
                sub.indices
                    .iter()
                    .map(|&pidx| f.apply(product.tuple_of(pidx)[j]))
                    .collect()
            })
            .collect();
        let leq_pt = |a: &[usize], b: &[usize]| a.iter().zip(b).all(|(&p, &q)| y.leq(p, q));
        for pair in projections.windows(2) {
            // reachability closure from pair[0]
            let start = maps
                .iter()
                .position(|m| *m == pair[0])
                .expect("projection is continuous");
            let goal = maps
                .iter()
                .position(|m| *m == pair[1])
                .expect("projection is continuous");
            let mut reached = vec![false; maps.len()];
            reached[start] = true;
            loop {
                let mut grew = false;
                for i in 0..maps.len() {
                    if reached[i] {
                        continue;
                    }
                    let touch = (0..maps.len()).any(|k| {
                        reached[k]
                            && (leq_pt(&maps[k], &maps[i]) || leq_pt(&maps[i], &maps[k]))
                    });
                    if touch {
                        reached[i] = true;
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            if !reached[goal] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> HomotopyEngine {
        HomotopyEngine::default()
    }

    #[test]
    fn cat_of_point_is_zero() {
        let p = FiniteSpace::point();
        let (n, cover) = cat_map(&engine(), &SpaceMap::identity(&p), &Budgets::default()).unwrap();
        assert_eq!(n, 0);
        assert_eq!(cover.parts.len(), 1);
    }

    #[test]
    fn cat_of_pseudocircle_is_one() {
        let p = FiniteSpace::pseudocircle();
        let (n, cover) = cat_map(&engine(), &SpaceMap::identity(&p), &Budgets::default()).unwrap();
        assert_eq!(n, 1);
        cover.validate_cat(&SpaceMap::identity(&p)).unwrap();
    }

    #[test]
    fn cat_of_cone_is_zero() {
        let c = FiniteSpace::pseudocircle().cone();
        let (n, _) = cat_map(&engine(), &SpaceMap::identity(&c), &Budgets::default()).unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn cat_of_discrete_two_points_is_one() {
        let d = FiniteSpace::antichain(2);
        let (n, _) = cat_map(&engine(), &SpaceMap::identity(&d), &Budgets::default()).unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn cat_of_map_bounded_by_cat_of_identity() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let c2 = FiniteSpace::chain(2);
        let f = SpaceMap::new(p.clone(), c2.clone(), vec![0, 0, 1, 1]).unwrap();
        let (nf, _) = cat_map(&e, &f, &Budgets::default()).unwrap();
        let (nid, _) = cat_map(&e, &SpaceMap::identity(&p), &Budgets::default()).unwrap();
        assert!(nf <= nid);
        assert_eq!(nf, 0); // codomain contractible
    }

    #[test]
    fn planner_on_principal_downset_admissible() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let product = ProductSpace::power(&p, 2).unwrap();
        let f = SpaceMap::identity(&p);
        for i in 0..product.space.len() {
            let u = product.space.down_mask(i);
            let ws = admits_planner(&e, &product, u, &f).unwrap();
            assert!(ws.is_some(), "principal down-set {i} should be admissible");
        }
    }

    #[test]
    fn whole_square_of_pseudocircle_not_admissible() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let product = ProductSpace::power(&p, 2).unwrap();
        let f = SpaceMap::identity(&p);
        let ws = admits_planner(&e, &product, product.space.full_mask(), &f).unwrap();
        assert!(ws.is_none());
    }

    #[test]
    fn tc_of_point_is_zero() {
        let e = engine();
        let p = FiniteSpace::point();
        for r in 2..=4 {
            let (k, _) = tc_map(&e, &SpaceMap::identity(&p), r, &Budgets::default()).unwrap();
            assert_eq!(k, 0);
        }
    }

    #[test]
    fn tc_of_contractible_spaces_is_zero() {
        let e = engine();
        for space in [
            FiniteSpace::chain(2),
            FiniteSpace::chain(3),
            FiniteSpace::chain(4),
            FiniteSpace::pseudocircle().cone().subspace(0b11101).space, // contractible 4-pt
        ] {
            assert!(crate::homotopy::is_contractible(&space));
            let (k, _) = tc_map(&e, &SpaceMap::identity(&space), 2, &Budgets::default()).unwrap();
            assert_eq!(k, 0, "space {space:?}");
        }
    }

    #[test]
    fn tc_of_pseudocircle_is_three() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let (k, cover) = tc_map(&e, &SpaceMap::identity(&p), 2, &Budgets::default()).unwrap();
        assert_eq!(k, 3);
        assert_eq!(cover.parts.len(), 4);
        cover.validate_tc(&SpaceMap::identity(&p), 2).unwrap();
    }

    #[test]
    fn tc_rejects_disconnected() {
        let e = engine();
        let d = FiniteSpace::antichain(2);
        assert!(tc_map(&e, &SpaceMap::identity(&d), 2, &Budgets::default()).is_err());
    }

    #[test]
    fn extract_planner_diagonal_is_short() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let product = ProductSpace::power(&p, 2).unwrap();
        let f = SpaceMap::identity(&p);
        // down-set of the diagonal tuple (a,a)
        let diag = product.index_of_tuple(&[0, 0]);
        let u = product.space.down_mask(diag);
        let ws = admits_planner(&e, &product, u, &f).unwrap().unwrap();
        let table = extract_planner(&product, u, &f, &ws).unwrap();
        table.validate(&product, &f).unwrap();
        // the diagonal entry passes through f(a) at both waypoints
        let entry = table
            .entries
            .iter()
            .find(|en| en.product_index == diag)
            .unwrap();
        assert_eq!(entry.path[entry.waypoints[0]], 0);
        assert_eq!(entry.path[entry.waypoints[1]], 0);
    }

    #[test]
    fn extract_planner_tables_validate_on_cover() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let f = SpaceMap::identity(&p);
        let product = ProductSpace::power(&p, 2).unwrap();
        let (_, cover) = tc_map(&e, &f, 2, &Budgets::default()).unwrap();
        for (part, witness) in cover.parts.iter().zip(&cover.witnesses) {
            let PartWitness::Planner(ws) = witness else { panic!() };
            let table = extract_planner(&product, part.members, &f, ws).unwrap();
            table.validate(&product, &f).unwrap();
        }
    }

    #[test]
    fn oracle_agrees_with_criterion_two_on_pseudocircle_square() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let product = ProductSpace::power(&p, 2).unwrap();
        let f = SpaceMap::identity(&p);
        for mask in product.space.down_sets().take(500) {
            let c2 = admits_planner(&e, &product, mask, &f).unwrap().is_some();
            let c1 = oracle::has_planner_table(&product, mask, &f, 500_000).unwrap();
            assert_eq!(c1, c2, "mask {mask:#b}");
        }
    }

    #[test]
    fn admissibility_downward_closed_spot_check() {
        let e = engine();
        let p = FiniteSpace::pseudocircle();
        let f = SpaceMap::identity(&p);
        let product = ProductSpace::power(&p, 2).unwrap();
        let admissible: Vec<u64> = product
            .space
            .down_sets()
            .filter(|&m| {
                m != 0 && admits_planner(&e, &product, m, &f).unwrap().is_some()
            })
            .collect();
        for &m in admissible.iter().take(20) {
            for sub in product.space.down_sets() {
                if sub != 0 && sub & m == sub {
                    assert!(admits_planner(&e, &product, sub, &f).unwrap().is_some());
                }
            }
        }
    }
}
