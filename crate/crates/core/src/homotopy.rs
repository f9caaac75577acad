//! Homotopy of maps between finite spaces.
//!
//! In a finite space two continuous maps are homotopic exactly when they are
//! connected by a *fence*: a sequence of continuous maps in which consecutive
//! entries are pointwise comparable in a single direction. The engine decides
//! homotopy by breadth-first search over that comparability graph and returns
//! the fence as an explicit certificate.

use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, SpaceMap, Subspace};

/// A certified homotopy: consecutive steps are pointwise comparable and every
/// step is continuous (enforced by `SpaceMap` construction).
#[derive(Clone, Debug)]
pub struct FenceWitness {
    pub steps: Vec<SpaceMap>,
}

impl FenceWitness {
    pub fn new(steps: Vec<SpaceMap>) -> Result<Self> {
        let w = FenceWitness { steps };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::Shape("fence must be nonempty".into()));
        }
        let d = self.steps[0].domain().clone();
        let c = self.steps[0].codomain().clone();
        for s in &self.steps {
            if s.domain() != &d || s.codomain() != &c {
                return Err(Error::DomainMismatch);
            }
        }
        for w in self.steps.windows(2) {
            if !w[0].fence_comparable(&w[1]) {
                return Err(Error::Shape("consecutive fence steps not comparable".into()));
            }
        }
        Ok(())
    }

    pub fn first(&self) -> &SpaceMap {
        self.steps.first().unwrap()
    }

    pub fn last(&self) -> &SpaceMap {
        self.steps.last().unwrap()
    }

    pub fn reversed(&self) -> FenceWitness {
        FenceWitness {
            steps: self.steps.iter().rev().cloned().collect(),
        }
    }

    /// Concatenation; endpoints must match.
    pub fn concat(&self, other: &FenceWitness) -> Result<FenceWitness> {
        if self.last() != other.first() {
            return Err(Error::Shape("fence endpoints do not match".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().skip(1).cloned());
        FenceWitness::new(steps)
    }

    /// Post-compose every step with `g` (stays a fence: composition with a
    /// continuous map preserves pointwise comparability).
    pub fn postcompose(&self, g: &SpaceMap) -> Result<FenceWitness> {
        let steps: Result<Vec<SpaceMap>> = self.steps.iter().map(|s| s.then(g)).collect();
        FenceWitness::new(steps?)
    }

    /// Restrict every step to a subspace of the shared domain.
    pub fn restrict(&self, sub: &Subspace) -> Result<FenceWitness> {
        let steps: Result<Vec<SpaceMap>> =
            self.steps.iter().map(|s| s.restrict(sub, None)).collect();
        FenceWitness::new(steps?)
    }

    /// JSON-friendly form: one assignment list per step, by domain order.
    pub fn serialize_steps(&self) -> Vec<Vec<String>> {
        self.steps
            .iter()
            .map(|s| {
                s.assignment()
                    .iter()
                    .map(|&y| s.codomain().label(y).to_string())
                    .collect()
            })
            .collect()
    }
}

/// Enumerates all continuous maps `domain -> codomain` in deterministic
/// (lexicographic) order, erroring out past `cap`.
pub fn continuous_maps(
    domain: &FiniteSpace,
    codomain: &FiniteSpace,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = domain.len();
    if n == 0 {
        return Ok(vec![vec![]]);
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(
        domain: &FiniteSpace,
        codomain: &FiniteSpace,
        current: &mut Vec<usize>,
        i: usize,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if i == domain.len() {
            if out.len() >= cap {
                return Err(Error::SearchBudgetExceeded {
                    context: format!("continuous map enumeration cap {cap}"),
                    lower: cap,
                    upper: None,
                });
            }
            out.push(current.clone());
            return Ok(());
        }
        'cand: for y in 0..codomain.len() {
            for j in 0..i {
                if domain.leq(j, i) && !codomain.leq(current[j], y) {
                    continue 'cand;
                }
                if domain.leq(i, j) && !codomain.leq(y, current[j]) {
                    continue 'cand;
                }
            }
            current[i] = y;
            rec(domain, codomain, current, i + 1, out, cap)?;
        }
        Ok(())
    }
    rec(domain, codomain, &mut current, 0, &mut out, cap)?;
    Ok(out)
}

/// Which adjacency the BFS used for a decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchPath {
    /// One-point modifications (complete for finite spaces).
    OnePoint,
    /// Full pairwise-comparability adjacency over all continuous maps.
    Full,
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Bound on memoized homotopy queries.
    pub cache_cap: usize,
    /// Bound on the continuous-map enumeration for the full-adjacency
    /// fallback; above it the one-point decision stands.
    pub full_bfs_cap: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            cache_cap: 20_000,
            full_bfs_cap: 20_000,
        }
    }
}

type CacheKey = (FiniteSpace, FiniteSpace, Vec<usize>, Vec<usize>);

/// Homotopy decision engine with a bounded memo cache. Safe for parallel
/// queries; results are deterministic regardless of scheduling.
pub struct HomotopyEngine {
    pub options: EngineOptions,
    cache: Mutex<HashMap<CacheKey, (Option<FenceWitness>, u64)>>,
    clock: std::sync::atomic::AtomicU64,
}

impl Default for HomotopyEngine {
    fn default() -> Self {
        Self::new(EngineOptions::default())
    }
}

impl HomotopyEngine {
    pub fn new(options: EngineOptions) -> Self {
        HomotopyEngine {
            options,
            cache: Mutex::new(HashMap::new()),
            clock: std::sync::atomic::AtomicU64::new(0),
        }
    }

    fn cache_get(&self, key: &CacheKey) -> Option<Option<FenceWitness>> {
        let mut cache = self.cache.lock().unwrap();
        let tick = self.clock.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        cache.get_mut(key).map(|e| {
            e.1 = tick;
            e.0.clone()
        })
    }

    fn cache_put(&self, key: CacheKey, value: Option<FenceWitness>) {
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= self.options.cache_cap {
            // evict the least recently used entry
            if let Some(k) = cache
                .iter()
                .min_by_key(|(_, (_, t))| *t)
                .map(|(k, _)| k.clone())
            {
                cache.remove(&k);
            }
        }
        let tick = self.clock.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        cache.insert(key, (value, tick));
    }

    /// Decide whether `f ≃ g`, returning a fence from `f` to `g` if so.
    pub fn are_homotopic(&self, f: &SpaceMap, g: &SpaceMap) -> Result<Option<FenceWitness>> {
        let (r, _) = self.are_homotopic_traced(f, g)?;
        Ok(r)
    }

    /// As `are_homotopic`, also reporting which adjacency decided.
    pub fn are_homotopic_traced(
        &self,
        f: &SpaceMap,
        g: &SpaceMap,
    ) -> Result<(Option<FenceWitness>, SearchPath)> {
        if f.domain() != g.domain() || f.codomain() != g.codomain() {
            return Err(Error::DomainMismatch);
        }
        if f.domain().is_empty() {
            // unique empty map
            return Ok((Some(FenceWitness::new(vec![f.clone()])?), SearchPath::OnePoint));
        }
        // normalize the key so (f,g) and (g,f) share a cache slot
        let swap = g.assignment() < f.assignment();
        let (a, b) = if swap { (g, f) } else { (f, g) };
        let key: CacheKey = (
            a.domain().clone(),
            a.codomain().clone(),
            a.assignment().to_vec(),
            b.assignment().to_vec(),
        );
        if let Some(hit) = self.cache_get(&key) {
            let r = hit.map(|w| if swap { w.reversed() } else { w });
            return Ok((r, SearchPath::OnePoint));
        }
        let found = self.one_point_bfs(a, b)?;
        let (result, path) = match found {
            Some(w) => (Some(w), SearchPath::OnePoint),
            None => {
                // fall back to the full adjacency when the map space is small
                match self.full_bfs(a, b) {
                    Ok(r) => (r, SearchPath::Full),
                    Err(Error::SearchBudgetExceeded { .. }) => (None, SearchPath::OnePoint),
                    Err(e) => return Err(e),
                }
            }
        };
        self.cache_put(key, result.clone());
        Ok((result.map(|w| if swap { w.reversed() } else { w }), path))
    }

    /// Decides by both adjacencies independently, bypassing the cache;
    /// exists so self-consistency checks can cross-examine the two paths.
    pub fn decide_both(
        &self,
        f: &SpaceMap,
        g: &SpaceMap,
    ) -> Result<(Option<FenceWitness>, Option<FenceWitness>)> {
        if f.domain() != g.domain() || f.codomain() != g.codomain() {
            return Err(Error::DomainMismatch);
        }
        Ok((self.one_point_bfs(f, g)?, self.full_bfs(f, g)?))
    }

    /// BFS over one-point modifications: neighbors differ at one point by a
    /// comparable value and stay continuous.
    fn one_point_bfs(&self, f: &SpaceMap, g: &SpaceMap) -> Result<Option<FenceWitness>> {
        let domain = f.domain();
        let codomain = f.codomain();
        let n = domain.len();
        let start: Vec<usize> = f.assignment().to_vec();
        let target: Vec<usize> = g.assignment().to_vec();
        if start == target {
            return Ok(Some(FenceWitness::new(vec![f.clone()])?));
        }
        let mut parent: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        parent.insert(start.clone(), start.clone());
        let mut queue = VecDeque::new();
        queue.push_back(start.clone());
        while let Some(cur) = queue.pop_front() {
            for i in 0..n {
                for y in 0..codomain.len() {
                    if y == cur[i] || !codomain.comparable(cur[i], y) {
                        continue;
                    }
                    // continuity check touching only point i
                    let ok = (0..n).all(|j| {
                        if j == i {
                            return true;
                        }
                        (!domain.leq(j, i) || codomain.leq(cur[j], y))
                            && (!domain.leq(i, j) || codomain.leq(y, cur[j]))
                    });
                    if !ok {
                        continue;
                    }
                    let mut next = cur.clone();
                    next[i] = y;
                    if parent.contains_key(&next) {
                        continue;
                    }
                    parent.insert(next.clone(), cur.clone());
                    if next == target {
                        return Ok(Some(self.reconstruct(domain, codomain, &parent, next)?));
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    /// BFS over all continuous maps with pairwise fence-comparability edges.
    fn full_bfs(&self, f: &SpaceMap, g: &SpaceMap) -> Result<Option<FenceWitness>> {
        let domain = f.domain();
        let codomain = f.codomain();
        let maps = continuous_maps(domain, codomain, self.options.full_bfs_cap)?;
        let index: HashMap<&Vec<usize>, usize> =
            maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let leq_pt = |a: &[usize], b: &[usize]| {
            a.iter().zip(b).all(|(&x, &y)| codomain.leq(x, y))
        };
        let start = *index.get(&f.assignment().to_vec()).expect("f is continuous");
        let goal = *index.get(&g.assignment().to_vec()).expect("g is continuous");
        let mut parent: HashMap<usize, usize> = HashMap::new();
        parent.insert(start, start);
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            if cur == goal {
                let mut chain = vec![cur];
                let mut c = cur;
                while parent[&c] != c {
                    c = parent[&c];
                    chain.push(c);
                }
                chain.reverse();
                let steps: Result<Vec<SpaceMap>> = chain
                    .into_iter()
                    .map(|i| SpaceMap::new(domain.clone(), codomain.clone(), maps[i].clone()))
                    .collect();
                return Ok(Some(FenceWitness::new(steps?)?));
            }
            for (next, m) in maps.iter().enumerate() {
                if parent.contains_key(&next) {
                    continue;
                }
                let cm = &maps[cur];
                if leq_pt(cm, m) || leq_pt(m, cm) {
                    parent.insert(next, cur);
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    fn reconstruct(
        &self,
        domain: &FiniteSpace,
        codomain: &FiniteSpace,
        parent: &HashMap<Vec<usize>, Vec<usize>>,
        end: Vec<usize>,
    ) -> Result<FenceWitness> {
        let mut chain = vec![end.clone()];
        let mut cur = end;
        while parent[&cur] != cur {
            cur = parent[&cur].clone();
            chain.push(cur.clone());
        }
        chain.reverse();
        let steps: Result<Vec<SpaceMap>> = chain
            .into_iter()
            .map(|m| SpaceMap::new(domain.clone(), codomain.clone(), m))
            .collect();
        FenceWitness::new(steps?)
    }

    /// Is `f` homotopic to a constant map? Tests one representative constant
    /// per codomain component that could possibly work (a fence never moves a
    /// point's image out of its component).
    pub fn is_nullhomotopic(&self, f: &SpaceMap) -> Result<Option<FenceWitness>> {
        if f.domain().is_empty() {
            return Err(Error::EmptyDomain);
        }
        let image = f.image_mask();
        for comp in f.codomain().components() {
            if image & !comp != 0 {
                continue; // image not inside this component
            }
            let rep = comp.trailing_zeros() as usize;
            let constant = SpaceMap::constant(f.domain(), f.codomain(), rep);
            if let Some(w) = self.are_homotopic(f, &constant)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

/// The deformation core of a space together with the maps exhibiting it.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: Subspace,
    /// Retraction of the ambient space onto the core.
    pub retraction: SpaceMap,
    /// Inclusion of the core.
    pub inclusion: SpaceMap,
}

/// Iterated beat-point removal. A point is a beat point when its strict
/// down-set has a maximum or its strict up-set has a minimum (within the
/// current subspace); removing it is a deformation retraction.
pub fn core(space: &FiniteSpace) -> CoreResult {
    let n = space.len();
    let mut mask = space.full_mask();
    // r[i] = representative of i in the current subspace
    let mut r: Vec<usize> = (0..n).collect();
    loop {
        let mut removed = false;
        'scan: for x in 0..n {
            if mask & (1 << x) == 0 {
                continue;
            }
            let strict_down = space.down_mask(x) & mask & !(1 << x);
            let strict_up = space.up_mask(x) & mask & !(1 << x);
            let target = beat_target(space, strict_down, true)
                .or_else(|| beat_target(space, strict_up, false));
            if let Some(y) = target {
                mask &= !(1 << x);
                for v in r.iter_mut() {
                    if *v == x {
                        *v = y;
                    }
                }
                removed = true;
                break 'scan;
            }
        }
        if !removed {
            break;
        }
    }
    let sub = space.subspace(mask);
    let assignment: Vec<usize> = r
        .iter()
        .map(|&v| sub.to_sub(v).expect("representative lies in the core"))
        .collect();
    let retraction = SpaceMap::new(space.clone(), sub.space.clone(), assignment)
        .expect("beat-point retraction is continuous");
    let inclusion = sub.inclusion();
    CoreResult {
        core: sub,
        retraction,
        inclusion,
    }
}

/// Maximum (resp. minimum) of `set`, if it has one.
fn beat_target(space: &FiniteSpace, set: u64, maximum: bool) -> Option<usize> {
    if set == 0 {
        return None;
    }
    let mut rest = set;
    while rest != 0 {
        let y = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let dominates = if maximum {
            set & !space.down_mask(y) == 0
        } else {
            set & !space.up_mask(y) == 0
        };
        if dominates {
            return Some(y);
        }
    }
    None
}

/// A space is contractible iff its core is a single point.
pub fn is_contractible(space: &FiniteSpace) -> bool {
    if space.is_empty() {
        return false;
    }
    core(space).core.space.len() == 1
}
