//! Pseudogroups: sets of partial homeomorphisms closed under composition
//! and inversion, with closure witness tables.

use crate::bits;
use crate::fintop::FiniteSpace;
use crate::report::Report;

use super::partial::PartialBijection;
use super::table::InverseSemigroup;

/// A set of partial homeomorphisms of a space, closed under composition and
/// inversion, with the witnessing index tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pseudogroup {
    space: FiniteSpace,
    /// Canonically sorted, deduplicated elements.
    elements: Vec<PartialBijection>,
    /// Row-major composition index table.
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl Pseudogroup {
    /// Closes `generators` under composition and inversion. Panics if a
    /// generator is not a partial homeomorphism of `space`; use
    /// [`verify_pseudogroup`] for untrusted data.
    pub fn closure(space: &FiniteSpace, generators: Vec<PartialBijection>) -> Pseudogroup {
        for g in &generators {
            assert!(
                g.is_partial_homeomorphism(space),
                "generator {:?} is not a partial homeomorphism",
                g
            );
        }
        let mut elements: std::collections::BTreeSet<PartialBijection> =
            generators.into_iter().collect();
        loop {
            let snapshot: Vec<PartialBijection> = elements.iter().cloned().collect();
            let before = snapshot.len();
            for h in &snapshot {
                elements.insert(h.invert());
                for k in &snapshot {
                    elements.insert(h.compose(k));
                }
            }
            if elements.len() == before {
                break;
            }
        }
        let elements: Vec<PartialBijection> = elements.into_iter().collect();
        Self::from_closed(space, elements)
    }

    /// Wraps an already-closed, canonically sorted element list.
    fn from_closed(space: &FiniteSpace, elements: Vec<PartialBijection>) -> Pseudogroup {
        let index = |h: &PartialBijection| -> usize {
            elements
                .binary_search(h)
                .expect("pseudogroup is closed under the operation")
        };
        let n = elements.len();
        let mut mul = vec![0usize; n * n];
        for (i, h) in elements.iter().enumerate() {
            for (j, k) in elements.iter().enumerate() {
                mul[i * n + j] = index(&h.compose(k));
            }
        }
        let inv: Vec<usize> = elements.iter().map(|h| index(&h.invert())).collect();
        Pseudogroup {
            space: space.clone(),
            elements,
            mul,
            inv,
        }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn elements(&self) -> &[PartialBijection] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, h: &PartialBijection) -> Option<usize> {
        self.elements.binary_search(h).ok()
    }

    /// Full: contains the identity of every open set.
    pub fn is_full(&self) -> bool {
        self.space.opens().iter().all(|&u| {
            self.index_of(&PartialBijection::identity(self.space.point_count(), u))
                .is_some()
        })
    }

    /// Complete: full, and every partial homeomorphism that restricts into
    /// the pseudogroup on an open cover of its domain is itself a member.
    /// Enumerates all of `I(X)`, so only for small spaces.
    pub fn is_complete_pseudogroup(&self) -> bool {
        if !self.is_full() {
            return false;
        }
        for h in all_partial_homeomorphisms(&self.space) {
            let mut covered = 0u64;
            for &u in self.space.opens() {
                if u & !h.domain() == 0 && self.index_of(&h.restrict(u)).is_some() {
                    covered |= u;
                }
            }
            if covered == h.domain() && self.index_of(&h).is_none() {
                return false;
            }
        }
        true
    }
}

/// Checks that every element is a partial homeomorphism and that the set is
/// closed under composition and inversion.
pub fn verify_pseudogroup(space: &FiniteSpace, elements: &[PartialBijection]) -> Report {
    let mut report = Report::valid();
    let sorted: std::collections::BTreeSet<PartialBijection> = elements.iter().cloned().collect();
    if sorted.len() != elements.len() {
        report.push("no-duplicates", "duplicate elements".to_string());
    }
    for h in elements {
        if !h.is_partial_homeomorphism(space) {
            report.push(
                "partial-homeomorphism",
                format!("element with graph {:?} is not a partial homeomorphism", h.graph()),
            );
        }
    }
    if !report.is_valid() {
        return report;
    }
    for h in elements {
        if !sorted.contains(&h.invert()) {
            report.push(
                "closed-under-inverse",
                format!("inverse of {:?} is missing", h.graph()),
            );
        }
        for k in elements {
            if !sorted.contains(&h.compose(k)) {
                report.push(
                    "closed-under-composition",
                    format!("product of {:?} and {:?} is missing", h.graph(), k.graph()),
                );
            }
        }
    }
    report
}

/// All partial homeomorphisms of a space. Exponential in the point count;
/// guarded to small spaces.
pub fn all_partial_homeomorphisms(space: &FiniteSpace) -> Vec<PartialBijection> {
    let n = space.point_count();
    assert!(n <= 6, "I(X) enumeration is capped at 6 points");
    let mut out: Vec<PartialBijection> = Vec::new();
    for &u in space.opens() {
        for &v in space.opens() {
            if bits::count(u) != bits::count(v) {
                continue;
            }
            let targets: Vec<usize> = bits::to_vec(v);
            for perm in permutations(targets.len()) {
                let pairs: Vec<(usize, usize)> = bits::iter(u)
                    .zip(perm.iter().map(|&i| targets[i]))
                    .collect();
                let h = PartialBijection::from_pairs(n, &pairs).expect("bijection by construction");
                if h.is_partial_homeomorphism(space) {
                    out.push(h);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

/// The symmetric inverse monoid `I(X)`: all partial homeomorphisms of the
/// space, as a pseudogroup.
pub fn symmetric_inverse_monoid(space: &FiniteSpace) -> Pseudogroup {
    let elements = all_partial_homeomorphisms(space);
    let p = Pseudogroup::from_closed(space, elements);
    debug_assert!(verify_pseudogroup(&p.space, &p.elements).is_valid());
    p
}

/// Cayley-table semigroup whose elements index the pseudogroup's
/// bijections, plus the element dictionary.
pub fn abstract_from_pseudogroup(p: &Pseudogroup) -> (InverseSemigroup, Vec<PartialBijection>) {
    let ident_all =
        PartialBijection::identity(p.space.point_count(), p.space.universe());
    let unit_candidate = p.index_of(&ident_all);
    let s = InverseSemigroup::from_raw(p.len(), p.mul.clone(), p.inv.clone(), None);
    // The full identity is the unit only when it really is neutral (it
    // always is, since composing with it meets domains with the universe).
    let unit = unit_candidate.filter(|&e| {
        (0..s.size()).all(|x| s.mul(e, x) == x && s.mul(x, e) == x)
    });
    (
        InverseSemigroup::from_raw(p.len(), p.mul.clone(), p.inv.clone(), unit),
        p.elements.clone(),
    )
}

/// The Wagner–Preston data of an abstract inverse semigroup: the standard
/// faithful action on the discrete space with one point per element.
pub struct WagnerPreston {
    pub pseudogroup: Pseudogroup,
    /// Partial bijection assigned to each element, in element order.
    pub assign: Vec<PartialBijection>,
}

/// The Wagner–Preston representation. With the left-to-right composition
/// convention used throughout, `s` acts by `x ↦ x·s` on
/// `{x : x·(s·s*) = x}`; this makes `s ↦ θ_s` a homomorphism and the
/// resulting representation wide.
pub fn wagner_preston(s: &InverseSemigroup) -> WagnerPreston {
    let n = s.size();
    let space = FiniteSpace::discrete(n);
    let assign: Vec<PartialBijection> = (0..n)
        .map(|el| {
            let dom_check = s.mul(el, s.inv(el));
            let pairs: Vec<(usize, usize)> = (0..n)
                .filter(|&x| s.mul(x, dom_check) == x)
                .map(|x| (x, s.mul(x, el)))
                .collect();
            PartialBijection::from_pairs(n, &pairs)
                .expect("Wagner–Preston action is injective on its domain")
        })
        .collect();
    let mut elements = assign.clone();
    elements.sort_unstable();
    elements.dedup();
    let pseudogroup = Pseudogroup::from_closed(&space, elements);
    debug_assert!(verify_pseudogroup(&space, pseudogroup.elements()).is_valid());
    WagnerPreston {
        pseudogroup,
        assign,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::invsemi::verify_inverse_semigroup;

    #[test]
    fn sizes_of_symmetric_inverse_monoids() {
        // Independent counts: Σ_k C(n,k)² k!.
        assert_eq!(symmetric_inverse_monoid(&FiniteSpace::discrete(1)).len(), 2);
        assert_eq!(symmetric_inverse_monoid(&FiniteSpace::discrete(2)).len(), 7);
        assert_eq!(symmetric_inverse_monoid(&FiniteSpace::discrete(3)).len(), 34);
    }

    #[test]
    fn sierpinski_monoid_has_three_elements() {
        // Any homeomorphism X → X fixes the unique open point, so only the
        // empty map and the two partial identities survive the continuity
        // filter.
        let p = symmetric_inverse_monoid(&FiniteSpace::sierpinski());
        assert_eq!(p.len(), 3);
        for h in p.elements() {
            assert_eq!(h.domain(), h.codomain());
            assert!(h.is_restriction_of(&PartialBijection::identity(2, 0b11)));
        }
        assert!(p.is_full());
    }

    #[test]
    fn abstract_i2_is_valid_with_four_idempotents() {
        let p = symmetric_inverse_monoid(&FiniteSpace::discrete(2));
        let (s, dict) = abstract_from_pseudogroup(&p);
        assert_eq!(s.size(), 7);
        assert!(verify_inverse_semigroup(&s).is_valid());
        // Idempotents are exactly the partial identities, one per open set.
        let idem = s.idempotents();
        assert_eq!(idem.len(), 4);
        for &f in &idem {
            assert_eq!(dict[f].domain(), dict[f].codomain());
        }
        assert_eq!(s.unit(), p.index_of(&PartialBijection::identity(2, 0b11)));
    }

    #[test]
    fn abstract_singleton_space_monoid() {
        let p = symmetric_inverse_monoid(&FiniteSpace::discrete(1));
        let (s, _) = abstract_from_pseudogroup(&p);
        assert_eq!(s.size(), 2);
        assert!(verify_inverse_semigroup(&s).is_valid());
    }

    #[test]
    fn abstract_sierpinski_commutative_idempotent() {
        let p = symmetric_inverse_monoid(&FiniteSpace::sierpinski());
        let (s, _) = abstract_from_pseudogroup(&p);
        assert_eq!(s.size(), 3);
        assert!(verify_inverse_semigroup(&s).is_valid());
        for a in 0..3 {
            assert!(s.is_idempotent(a));
            for b in 0..3 {
                assert_eq!(s.mul(a, b), s.mul(b, a));
            }
        }
    }

    #[test]
    fn i_x_is_complete_pseudogroup() {
        for space in [
            FiniteSpace::discrete(1),
            FiniteSpace::discrete(2),
            FiniteSpace::sierpinski(),
        ] {
            let p = symmetric_inverse_monoid(&space);
            assert!(p.is_full());
            assert!(p.is_complete_pseudogroup());
        }
    }

    #[test]
    fn missing_composite_is_reported() {
        let space = FiniteSpace::discrete(2);
        let swap = PartialBijection::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        let report = verify_pseudogroup(&space, &[swap]);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "closed-under-composition"));
    }

    #[test]
    fn wagner_preston_of_z2_is_the_regular_action() {
        let z2 = corpus::cyclic_group(2);
        let wp = wagner_preston(&z2);
        // Two permutations of a 2-point set: identity and the swap.
        assert_eq!(wp.assign[0], PartialBijection::identity(2, 0b11));
        assert_eq!(
            wp.assign[1],
            PartialBijection::from_pairs(2, &[(0, 1), (1, 0)]).unwrap()
        );
    }

    #[test]
    fn wagner_preston_of_two_chain_is_nested_identities() {
        let chain = corpus::chain_semilattice(2);
        let wp = wagner_preston(&chain);
        // Bottom acts as the identity on {bottom}, top on everything.
        assert_eq!(wp.assign[0], PartialBijection::identity(2, 0b01));
        assert_eq!(wp.assign[1], PartialBijection::identity(2, 0b11));
    }

    #[test]
    fn wagner_preston_is_injective_across_corpus() {
        for (name, s) in corpus::semigroups() {
            let wp = wagner_preston(&s);
            for a in 0..s.size() {
                for b in (a + 1)..s.size() {
                    assert_ne!(wp.assign[a], wp.assign[b], "collision in {name}");
                }
            }
        }
    }
}
