//! Named small structures used throughout the test and acceptance suites.
//!
//! Groupoids are produced constructively (unit and pair groupoids, disjoint
//! unions, and germ groupoids of the representations below), never by
//! enumerating raw tables.

use crate::fintop::{all_topologies, FiniteSpace};
use crate::groupoid::{
    disjoint_union, group_as_groupoid, pair_groupoid, unit_groupoid, FiniteGroupoid,
};
use crate::invsemi::{
    abstract_from_pseudogroup, symmetric_inverse_monoid, InverseSemigroup, PartialBijection,
};
use crate::repr::Representation;

/// The cyclic group Z/n as an inverse monoid.
pub fn cyclic_group(n: usize) -> InverseSemigroup {
    assert!(n >= 1);
    InverseSemigroup::from_mul_fn(n, |a, b| (a + b) % n)
}

/// The Klein four-group Z/2 × Z/2.
pub fn klein_four_group() -> InverseSemigroup {
    InverseSemigroup::from_mul_fn(4, |a, b| a ^ b)
}

/// Chain semilattice 0 < 1 < … < n-1 with meet as multiplication.
pub fn chain_semilattice(n: usize) -> InverseSemigroup {
    assert!(n >= 1);
    InverseSemigroup::from_mul_fn(n, |a, b| a.min(b))
}

/// The Boolean semilattice on two generators (elements are bitmasks 0..4,
/// multiplication is intersection).
pub fn diamond_semilattice() -> InverseSemigroup {
    InverseSemigroup::from_mul_fn(4, |a, b| a & b)
}

/// The five-element Brandt semigroup: a zero plus the 2×2 matrix units
/// e11, e12, e21, e22 (indices 1..=4 in that order).
pub fn brandt_b2() -> InverseSemigroup {
    let unit_index = |i: usize, j: usize| 1 + 2 * i + j;
    InverseSemigroup::from_mul_fn(5, move |a, b| {
        if a == 0 || b == 0 {
            return 0;
        }
        let (i, j) = ((a - 1) / 2, (a - 1) % 2);
        let (k, l) = ((b - 1) / 2, (b - 1) % 2);
        if j == k {
            unit_index(i, l)
        } else {
            0
        }
    })
}

/// Abstract `I(X)` together with its element dictionary.
pub fn abstract_ix(space: &FiniteSpace) -> (InverseSemigroup, Vec<PartialBijection>) {
    abstract_from_pseudogroup(&symmetric_inverse_monoid(space))
}

/// Named abstract semigroups, all of size ≤ 7.
pub fn semigroups() -> Vec<(String, InverseSemigroup)> {
    let mut out: Vec<(String, InverseSemigroup)> = vec![
        ("z1".into(), cyclic_group(1)),
        ("z2".into(), cyclic_group(2)),
        ("z3".into(), cyclic_group(3)),
        ("z4".into(), cyclic_group(4)),
        ("v4".into(), klein_four_group()),
        ("chain1".into(), chain_semilattice(1)),
        ("chain2".into(), chain_semilattice(2)),
        ("chain3".into(), chain_semilattice(3)),
        ("diamond".into(), diamond_semilattice()),
        ("b2".into(), brandt_b2()),
    ];
    out.push(("i_point".into(), abstract_ix(&FiniteSpace::discrete(1)).0));
    out.push((
        "i_sierpinski".into(),
        abstract_ix(&FiniteSpace::sierpinski()).0,
    ));
    out.push(("i_discrete2".into(), abstract_ix(&FiniteSpace::discrete(2)).0));
    out
}

/// Named small spaces.
pub fn spaces() -> Vec<(String, FiniteSpace)> {
    vec![
        ("point".into(), FiniteSpace::discrete(1)),
        ("discrete2".into(), FiniteSpace::discrete(2)),
        ("discrete3".into(), FiniteSpace::discrete(3)),
        ("sierpinski".into(), FiniteSpace::sierpinski()),
        ("indiscrete2".into(), FiniteSpace::indiscrete(2)),
        (
            "three_chain".into(),
            crate::fintop::generate_topology(3, &[0b001, 0b011]),
        ),
    ]
}

/// The étale groupoid corpus: unit groupoids over every topology on at most
/// 3 points, pair groupoids on 1–3 points, and a few disjoint unions.
pub fn etale_groupoids() -> Vec<(String, FiniteGroupoid)> {
    let mut out: Vec<(String, FiniteGroupoid)> = Vec::new();
    for n in 0..=3usize {
        for (i, space) in all_topologies(n).into_iter().enumerate() {
            out.push((format!("unit_n{n}_t{i}"), unit_groupoid(&space)));
        }
    }
    for n in 1..=3usize {
        out.push((
            format!("pair{n}"),
            pair_groupoid(&FiniteSpace::discrete(n)).expect("discrete"),
        ));
    }
    let pair2 = pair_groupoid(&FiniteSpace::discrete(2)).expect("discrete");
    let unit1 = unit_groupoid(&FiniteSpace::discrete(1));
    let unit_sierp = unit_groupoid(&FiniteSpace::sierpinski());
    out.push(("pair2_plus_point".into(), disjoint_union(&pair2, &unit1)));
    out.push((
        "pair2_plus_sierpinski".into(),
        disjoint_union(&pair2, &unit_sierp),
    ));
    out.push(("pair2_plus_pair2".into(), disjoint_union(&pair2, &pair2)));
    // Isotropy: the canonical representation of a one-object group
    // groupoid is not faithful (all non-empty bisections act as the
    // identity of the point), so these exercise the witness-based germ
    // machinery where extensional reasoning would collapse arrows.
    let z2_groupoid = group_as_groupoid(&cyclic_group(2)).expect("group");
    let z3_groupoid = group_as_groupoid(&cyclic_group(3)).expect("group");
    out.push(("z2_one_object".into(), z2_groupoid.clone()));
    out.push(("z3_one_object".into(), z3_groupoid));
    out.push((
        "z2_plus_unit_sierpinski".into(),
        disjoint_union(&z2_groupoid, &unit_sierp),
    ));
    out
}

/// Wide (in fact unital where noted) representations for the equivalence
/// theorems: all Wagner–Preston representations of the corpus semigroups,
/// plus the identity representations of small symmetric inverse monoids.
pub fn wide_representations() -> Vec<(String, Representation)> {
    let mut out: Vec<(String, Representation)> = Vec::new();
    for (name, s) in semigroups() {
        out.push((format!("wp_{name}"), Representation::wagner_preston(&s)));
    }
    for space_name in ["point", "discrete2", "sierpinski"] {
        let space = spaces()
            .into_iter()
            .find(|(n, _)| n == space_name)
            .unwrap()
            .1;
        out.push((
            format!("identity_i_{space_name}"),
            Representation::tautological_ix(&space),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invsemi::verify_inverse_semigroup;

    #[test]
    fn all_corpus_semigroups_verify() {
        for (name, s) in semigroups() {
            assert!(
                verify_inverse_semigroup(&s).is_valid(),
                "{name} fails verification"
            );
            assert!(s.size() <= 7, "{name} exceeds the corpus size budget");
        }
    }

    #[test]
    fn brandt_is_not_a_monoid() {
        assert_eq!(brandt_b2().unit(), None);
        let b2 = brandt_b2();
        assert_eq!(b2.idempotents(), vec![0, 1, 4]);
    }
}
