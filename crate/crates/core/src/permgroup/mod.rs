//! Permutation groups on the combined point+line index domain of a polygon.

mod chain;
mod collineations;

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::{Family, IncidencePolygon};
pub use chain::StabChain;
pub use collineations::{collineation_generators, is_duality, permutation_from_point_map, w3_duality};

/// Default order above which set stabilizers switch from the exhaustive filter to backtracking.
pub const DEFAULT_CEILING: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum PermGroupError {
    #[error("not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("generator {0} does not preserve incidence")]
    NotIncidencePreserving(usize),
    #[error("element {0} is outside the domain")]
    OutOfDomain(usize),
    #[error("group order {order} is above the ceiling {ceiling}")]
    AboveCeiling { order: u128, ceiling: u128 },
    #[error("no collineation group for {0}")]
    Unsupported(Family),
    #[error("orbit of the set exceeds {0} images")]
    OrbitTooLarge(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<u32>);

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermGroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(PermGroupError::NotBijection(n));
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|&(i, &x)| i as u32 != x).map(|(i, _)| i as u32)
    }

    /// Sorted image of a set.
    pub fn image_of_set(&self, s: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = s.iter().map(|&x| self.apply(x)).collect();
        v.sort_unstable();
        v
    }

    /// Sends points to points, lines to lines, and incident pairs to incident pairs.
    pub fn preserves_incidence(&self, polygon: &IncidencePolygon) -> bool {
        let np = polygon.num_points();
        if self.degree() != polygon.num_elements() {
            return false;
        }
        if (0..np).any(|p| self.apply(p as u32) as usize >= np) {
            return false;
        }
        (0..polygon.num_lines()).all(|l| {
            let gl = self.apply((l + np) as u32) as usize - np;
            polygon.points_on(l).iter().all(|&p| polygon.incident(self.apply(p) as usize, gl))
        })
    }
}

/// How a set stabilizer is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilizerMethod {
    /// exhaustive below the ceiling, backtrack above it
    #[default]
    Auto,
    Exhaustive,
    Backtrack,
}

/// A permutation group given by generators; the stabilizer chain is built on first use.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    ceiling: u128,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup { degree: self.degree, generators: self.generators.clone(), ceiling: self.ceiling, chain }
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermGroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermGroupError::DegreeMismatch { expected: degree, got: g.degree() });
            }
        }
        Ok(PermGroup { degree, generators, ceiling: DEFAULT_CEILING, chain: OnceLock::new() })
    }

    /// A group acting on a polygon; every generator must preserve incidence.
    pub fn on_polygon(polygon: &IncidencePolygon, generators: Vec<Permutation>) -> Result<Self, PermGroupError> {
        if let Some(i) = generators.iter().position(|g| !g.preserves_incidence(polygon)) {
            return Err(PermGroupError::NotIncidencePreserving(i));
        }
        PermGroup::new(polygon.num_elements(), generators)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), ceiling: DEFAULT_CEILING, chain: OnceLock::new() }
    }

    pub fn with_ceiling(mut self, ceiling: u128) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn ceiling(&self) -> u128 {
        self.ceiling
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::build(self.degree, &self.generators))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.chain().contains(g)
    }

    pub fn preserves_incidence(&self, polygon: &IncidencePolygon) -> bool {
        self.generators.iter().all(|g| g.preserves_incidence(polygon))
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain().random_element(self.degree, rng)
    }

    /// Product of `len` random generators (and inverses).
    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        if self.generators.is_empty() {
            return g;
        }
        for _ in 0..len {
            let s = &self.generators[rng.gen_range(0..self.generators.len())];
            g = if rng.gen_bool(0.5) { g.then(s) } else { g.then(&s.inverse()) };
        }
        g
    }

    /// The orbit of one domain element, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            let y = out[i] as u32;
            for g in &self.generators {
                let z = g.apply(y) as usize;
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The group orbits restricted to `subset`, each sorted, ordered by least element.
    pub fn orbits(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut member = vec![false; self.degree];
        for &x in subset {
            member[x] = true;
        }
        let mut done = vec![false; self.degree];
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut out = Vec::new();
        for x in sorted {
            if done[x] {
                continue;
            }
            let orb: Vec<usize> = self.orbit(x).into_iter().filter(|&y| member[y]).collect();
            for &y in &orb {
                done[y] = true;
            }
            out.push(orb);
        }
        out
    }

    /// Orbit lengths on `subset` as a multiset (length → multiplicity).
    pub fn orbit_multiset(&self, subset: &[usize]) -> OrbitMultiset {
        OrbitMultiset::from_lengths(self.orbits(subset).iter().map(Vec::len))
    }

    fn check_set(&self, s: &[usize]) -> Result<Vec<u32>, PermGroupError> {
        if let Some(&x) = s.iter().find(|&&x| x >= self.degree) {
            return Err(PermGroupError::OutOfDomain(x));
        }
        let mut v: Vec<u32> = s.iter().map(|&x| x as u32).collect();
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    /// Elements of the group, for small groups.
    pub fn elements(&self) -> Result<Vec<Permutation>, PermGroupError> {
        let order = self.order();
        if order > self.ceiling {
            return Err(PermGroupError::AboveCeiling { order, ceiling: self.ceiling });
        }
        let mut out = Vec::with_capacity(order as usize);
        self.chain().search(self.degree, &mut |_, _| true, &mut |g| out.push(g.clone()));
        Ok(out)
    }

    /// The subgroup fixing `s` setwise.
    pub fn set_stabilizer(&self, s: &[usize], method: StabilizerMethod) -> Result<PermGroup, PermGroupError> {
        let set = self.check_set(s)?;
        let mut member = vec![false; self.degree];
        for &x in &set {
            member[x as usize] = true;
        }
        let order = self.order();
        let exhaustive = match method {
            StabilizerMethod::Auto => order <= self.ceiling,
            StabilizerMethod::Exhaustive => {
                if order > self.ceiling {
                    return Err(PermGroupError::AboveCeiling { order, ceiling: self.ceiling });
                }
                true
            }
            StabilizerMethod::Backtrack => false,
        };
        let keeps = |g: &Permutation| set.iter().all(|&x| member[g.apply(x) as usize]);
        let builder = Mutex::new(SubgroupBuilder::new(self.degree, self.ceiling));
        let chain = self.chain();
        if exhaustive {
            // split on the first basic orbit
            let first: Vec<u32> = chain.levels().first().map(|l| l.orbit.clone()).unwrap_or_default();
            if first.is_empty() {
                return Ok(PermGroup::trivial(self.degree).with_ceiling(self.ceiling));
            }
            first.par_iter().for_each(|&b| {
                let mut found = Vec::new();
                chain.search_from(self.degree, b, &mut |_, _| true, &mut |g| {
                    if keeps(g) {
                        found.push(g.clone());
                    }
                });
                let mut sb = builder.lock().expect("no panics while holding the lock");
                for g in found {
                    sb.add(g);
                }
            });
        } else {
            let base = chain.base().to_vec();
            let mut sb = builder.lock().expect("unpoisoned");
            chain.search(
                self.degree,
                &mut |level, image| member[base[level] as usize] == member[image as usize],
                &mut |g| {
                    if keeps(g) {
                        sb.add(g.clone());
                    }
                },
            );
        }
        Ok(builder.into_inner().expect("unpoisoned").finish())
    }

    /// All images of a set, each sorted.
    pub fn set_orbit(&self, s: &[usize], limit: usize) -> Result<HashSet<Vec<u32>>, PermGroupError> {
        let start = self.check_set(s)?;
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for g in &self.generators {
                let img = g.image_of_set(&cur);
                if !seen.contains(&img) {
                    if seen.len() >= limit {
                        return Err(PermGroupError::OrbitTooLarge(limit));
                    }
                    seen.insert(img.clone());
                    queue.push_back(img);
                }
            }
        }
        Ok(seen)
    }

    /// The lexicographically least image of `s`, sorted.
    pub fn minimal_image(&self, s: &[usize]) -> Result<Vec<usize>, PermGroupError> {
        let limit = usize::try_from(self.ceiling).unwrap_or(usize::MAX);
        let orbit = self.set_orbit(s, limit)?;
        let min = orbit.into_iter().min().expect("the orbit contains the set itself");
        Ok(min.into_iter().map(|x| x as usize).collect())
    }
}

/// Accumulates elements into a group, keeping only generators that enlarge it.
struct SubgroupBuilder {
    group: PermGroup,
}

impl SubgroupBuilder {
    fn new(degree: usize, ceiling: u128) -> Self {
        SubgroupBuilder { group: PermGroup::trivial(degree).with_ceiling(ceiling) }
    }

    fn add(&mut self, g: Permutation) {
        if g.is_identity() || self.group.contains(&g) {
            return;
        }
        let mut gens = self.group.generators.clone();
        gens.push(g);
        self.group = PermGroup::new(self.group.degree, gens).expect("same degree").with_ceiling(self.group.ceiling);
    }

    fn finish(self) -> PermGroup {
        self.group
    }
}

/// Multiset of orbit lengths, printed as `{2,4,6,12^2}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitMultiset(pub BTreeMap<usize, usize>);

impl OrbitMultiset {
    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> Self {
        let mut m = BTreeMap::new();
        for l in lengths {
            *m.entry(l).or_insert(0) += 1;
        }
        OrbitMultiset(m)
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|(l, c)| l * c).sum()
    }

    pub fn count(&self) -> usize {
        self.0.values().sum()
    }

    /// Parses `{2,4,6,12^2}`; whitespace is ignored.
    pub fn parse(s: &str) -> Option<Self> {
        let inner: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = inner.strip_prefix('{')?.strip_suffix('}')?;
        let mut m = BTreeMap::new();
        if inner.is_empty() {
            return Some(OrbitMultiset(m));
        }
        for part in inner.split(',') {
            let (l, c) = match part.split_once('^') {
                Some((l, c)) => (l.parse().ok()?, c.parse().ok()?),
                None => (part.parse().ok()?, 1),
            };
            *m.entry(l).or_insert(0) += c;
        }
        Some(OrbitMultiset(m))
    }
}

impl fmt::Display for OrbitMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(l, c)| if *c == 1 { l.to_string() } else { format!("{l}^{c}") }).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> Permutation {
        Permutation::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap()
    }

    fn transposition(n: usize, a: u32, b: u32) -> Permutation {
        let mut v: Vec<u32> = (0..n as u32).collect();
        v.swap(a as usize, b as usize);
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn symmetric_and_cyclic_orders() {
        for n in 1..8usize {
            let s = PermGroup::new(n, vec![cycle(n), transposition(n, 0, 1.min(n as u32 - 1))]).unwrap();
            assert_eq!(s.order(), (1..=n as u128).product::<u128>());
            assert_eq!(PermGroup::new(n, vec![cycle(n)]).unwrap().order(), n as u128);
        }
        let id = PermGroup::trivial(5);
        assert_eq!(id.order(), 1);
        assert_eq!(id.orbits(&[0, 1, 2, 3, 4]).len(), 5);
    }

    #[test]
    fn bijection_checked() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
    }

    #[test]
    fn stabilizer_methods_agree_and_orbit_stabilizer_holds() {
        // S_4 x S_3 acting on 7 points
        let n = 7;
        let gens = vec![
            Permutation::from_images(vec![1, 2, 3, 0, 4, 5, 6]).unwrap(),
            transposition(n, 0, 1),
            Permutation::from_images(vec![0, 1, 2, 3, 5, 6, 4]).unwrap(),
            transposition(n, 4, 5),
        ];
        let g = PermGroup::new(n, gens).unwrap();
        assert_eq!(g.order(), 144);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let a = g.set_stabilizer(&s, StabilizerMethod::Exhaustive).unwrap();
            let b = g.set_stabilizer(&s, StabilizerMethod::Backtrack).unwrap();
            assert_eq!(a.order(), b.order());
            let orbit = g.set_orbit(&s, 1000).unwrap();
            assert_eq!(orbit.len() as u128 * a.order(), 144);
            let h = g.random_element(&mut rng);
            let moved: Vec<usize> = h
                .image_of_set(&s.iter().map(|&x| x as u32).collect::<Vec<_>>())
                .into_iter()
                .map(|x| x as usize)
                .collect();
            assert_eq!(g.minimal_image(&s).unwrap(), g.minimal_image(&moved).unwrap());
        }
    }

    #[test]
    fn elements_are_distinct_members() {
        let g = PermGroup::new(5, vec![cycle(5), transposition(5, 0, 1)]).unwrap();
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 120);
        let set: HashSet<_> = els.iter().cloned().collect();
        assert_eq!(set.len(), 120);
        assert!(els.iter().all(|e| g.contains(e)));
        let c = PermGroup::new(5, vec![cycle(5)]).unwrap();
        assert!(!c.contains(&transposition(5, 0, 1)));
    }

    #[test]
    fn orbit_multiset_format() {
        let m = OrbitMultiset::from_lengths([12, 2, 12, 6, 4]);
        assert_eq!(m.to_string(), "{2,4,6,12^2}");
        assert_eq!(OrbitMultiset::parse("{2, 4,6,12^2}"), Some(m.clone()));
        assert_eq!(m.total(), 36);
        assert_eq!(OrbitMultiset::parse("{}"), Some(OrbitMultiset::default()));
    }
}
