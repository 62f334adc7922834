//! Partial bijections between subsets of a finite point set.
//!
//! A `PartialBijection` is pure set-level data (it does not hold a
//! topology); whether it is a partial *homeomorphism* of a given space is a
//! separate check, [`PartialBijection::is_partial_homeomorphism`].
//!
//! Composition follows the left-to-right convention used throughout the
//! crate: `(h.compose(&k))(x) = k(h(x))`, with domain `h⁻¹(cod h ∩ dom k)`.

use crate::bits;
use crate::fintop::FiniteSpace;

/// A bijection between two subsets of `{0, …, points-1}`.
///
/// Equality is extensional: same ambient size, same domain, same map.
/// The derived ordering (domain bitset, then images) is the canonical
/// element order used everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    points: usize,
    domain: u64,
    /// Images of the domain points, in ascending order of domain point.
    images: Vec<usize>,
}

impl PartialBijection {
    /// The empty partial bijection (the zero of `I(X)`).
    pub fn empty(points: usize) -> Self {
        PartialBijection {
            points,
            domain: 0,
            images: Vec::new(),
        }
    }

    /// The identity on `set`.
    pub fn identity(points: usize, set: u64) -> Self {
        PartialBijection {
            points,
            domain: set,
            images: bits::iter(set).collect(),
        }
    }

    /// Builds from `(from, to)` pairs. Returns `None` if the pairs are not
    /// the graph of a bijection or mention points out of range.
    pub fn from_pairs(points: usize, pairs: &[(usize, usize)]) -> Option<Self> {
        let mut sorted = pairs.to_vec();
        sorted.sort_unstable();
        let mut domain = 0u64;
        let mut codomain = 0u64;
        for &(x, y) in &sorted {
            if x >= points || y >= points {
                return None;
            }
            if bits::contains(domain, x) || bits::contains(codomain, y) {
                return None;
            }
            domain |= 1 << x;
            codomain |= 1 << y;
        }
        Some(PartialBijection {
            points,
            domain,
            images: sorted.into_iter().map(|(_, y)| y).collect(),
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn codomain(&self) -> u64 {
        bits::from_iter(self.images.iter().copied())
    }

    /// Applies the map, `None` outside the domain.
    pub fn apply(&self, x: usize) -> Option<usize> {
        if bits::contains(self.domain, x) {
            let rank = bits::count(self.domain & bits::full(x));
            Some(self.images[rank])
        } else {
            None
        }
    }

    /// `{h(x) : x ∈ set ∩ dom h}`.
    pub fn image_of(&self, set: u64) -> u64 {
        bits::from_iter(bits::iter(set & self.domain).map(|x| self.apply(x).unwrap()))
    }

    /// `{x ∈ dom h : h(x) ∈ set}`.
    pub fn preimage_of(&self, set: u64) -> u64 {
        bits::from_iter(bits::iter(self.domain).filter(|&x| bits::contains(set, self.apply(x).unwrap())))
    }

    /// Graph as sorted `(from, to)` pairs.
    pub fn graph(&self) -> Vec<(usize, usize)> {
        bits::iter(self.domain)
            .zip(self.images.iter().copied())
            .collect()
    }

    /// Left-to-right composition: `(self.compose(&k))(x) = k(self(x))`.
    pub fn compose(&self, k: &PartialBijection) -> PartialBijection {
        assert_eq!(self.points, k.points, "composing over different point sets");
        let mid = self.codomain() & k.domain;
        let pairs: Vec<(usize, usize)> = bits::iter(self.preimage_of(mid))
            .map(|x| (x, k.apply(self.apply(x).unwrap()).unwrap()))
            .collect();
        PartialBijection::from_pairs(self.points, &pairs).expect("composite of bijections")
    }

    /// Domain and codomain swapped, map reversed.
    pub fn invert(&self) -> PartialBijection {
        let pairs: Vec<(usize, usize)> = self.graph().into_iter().map(|(x, y)| (y, x)).collect();
        PartialBijection::from_pairs(self.points, &pairs).expect("inverse of a bijection")
    }

    /// Restriction to `dom ∩ set`.
    pub fn restrict(&self, set: u64) -> PartialBijection {
        let pairs: Vec<(usize, usize)> = self
            .graph()
            .into_iter()
            .filter(|&(x, _)| bits::contains(set, x))
            .collect();
        PartialBijection::from_pairs(self.points, &pairs).expect("restriction of a bijection")
    }

    /// True iff `self` is a restriction of `other` (the natural order of
    /// `I(X)`).
    pub fn is_restriction_of(&self, other: &PartialBijection) -> bool {
        self.domain & !other.domain == 0
            && bits::iter(self.domain).all(|x| self.apply(x) == other.apply(x))
    }

    /// Union of graphs, if it is again a partial bijection.
    pub fn union(&self, other: &PartialBijection) -> Option<PartialBijection> {
        assert_eq!(self.points, other.points);
        let mut pairs = self.graph();
        for (x, y) in other.graph() {
            match self.apply(x) {
                Some(yy) if yy == y => {}
                Some(_) => return None,
                None => pairs.push((x, y)),
            }
        }
        PartialBijection::from_pairs(self.points, &pairs)
    }

    /// Continuity both ways with respect to `space`: the domain and
    /// codomain are open, preimages of opens are open, and images of opens
    /// are open.
    pub fn is_partial_homeomorphism(&self, space: &FiniteSpace) -> bool {
        if self.points != space.point_count() {
            return false;
        }
        if !space.is_open(self.domain) || !space.is_open(self.codomain()) {
            return false;
        }
        space
            .opens()
            .iter()
            .all(|&open| space.is_open(self.preimage_of(open)) && space.is_open(self.image_of(open)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::FiniteSpace;

    fn swap2() -> PartialBijection {
        PartialBijection::from_pairs(2, &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn identity_composition_meets_domains() {
        let id01 = PartialBijection::identity(2, 0b11);
        let id0 = PartialBijection::identity(2, 0b01);
        assert_eq!(id01.compose(&id0), id0);
        assert_eq!(id0.compose(&id01), id0);
    }

    #[test]
    fn swap_is_an_involution() {
        let s = swap2();
        assert_eq!(s.compose(&s), PartialBijection::identity(2, 0b11));
    }

    #[test]
    fn composition_domain_formula() {
        // (0↦1) then (1↦0) is the identity on {0}: the domain is the
        // preimage of cod ∩ dom = {1}, which is {0}.
        let up = PartialBijection::from_pairs(2, &[(0, 1)]).unwrap();
        let down = PartialBijection::from_pairs(2, &[(1, 0)]).unwrap();
        assert_eq!(up.compose(&down), PartialBijection::identity(2, 0b01));
        // And the other way: identity on {1}.
        assert_eq!(down.compose(&up), PartialBijection::identity(2, 0b10));
    }

    #[test]
    fn invert_involution() {
        let up = PartialBijection::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(up.invert(), PartialBijection::from_pairs(2, &[(1, 0)]).unwrap());
        assert_eq!(up.invert().invert(), up);
        let id = PartialBijection::identity(3, 0b101);
        assert_eq!(id.invert(), id);
    }

    #[test]
    fn continuity_on_sierpinski() {
        let space = FiniteSpace::sierpinski();
        // The full identity and the identity on the open point pass.
        assert!(PartialBijection::identity(2, 0b11).is_partial_homeomorphism(&space));
        assert!(PartialBijection::identity(2, 0b01).is_partial_homeomorphism(&space));
        assert!(PartialBijection::empty(2).is_partial_homeomorphism(&space));
        // The swap moves the open point onto the closed one: not continuous.
        assert!(!swap2().is_partial_homeomorphism(&space));
        // The identity on the closed point has a non-open domain.
        assert!(!PartialBijection::identity(2, 0b10).is_partial_homeomorphism(&space));
    }

    #[test]
    fn union_of_graphs() {
        let up = PartialBijection::from_pairs(2, &[(0, 1)]).unwrap();
        let down = PartialBijection::from_pairs(2, &[(1, 0)]).unwrap();
        assert_eq!(up.union(&down), Some(swap2()));
        let id0 = PartialBijection::identity(2, 0b01);
        // 0 ↦ 0 and 0 ↦ 1 clash.
        assert_eq!(id0.union(&up), None);
        // 0 ↦ 1 and 1 ↦ 1 are not jointly injective.
        let fix1 = PartialBijection::identity(2, 0b10);
        assert_eq!(up.union(&fix1), None);
    }
}
