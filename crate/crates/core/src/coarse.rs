//! Filters and ultrafilters on finite sets, the finite Stone–Čech
//! identification, β₀-extension of finite discrete groupoids, coarse
//! structures, controlled pseudogroups, and the translation groupoid.
//!
//! Everything here is the finite degenerate case: all ultrafilters are
//! principal and βX = X, so the point of the module is exercising the
//! paper's maps (restriction/extension, the h̃ extension, the widened
//! representation) where every assertion is decidable.

use thiserror::Error;

use crate::bits;
use crate::fintop::{generate_topology, FiniteSpace};
use crate::germs::{germ_groupoid, GermError, GermGroupoid};
use crate::groupoid::{
    canonical_representation, groupoid_isomorphic, is_etale, pair_groupoid, FiniteGroupoid,
    GroupoidIso,
};
use crate::invsemi::{all_partial_homeomorphisms, Pseudogroup};
use crate::report::Report;
use crate::repr::Representation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoarseError {
    #[error("groupoid spaces must be discrete for the Stone–Čech extension")]
    NotDiscrete,
    #[error(
        "coarse structure is not unital (diagonal not controlled); \
         wideness of the extended representation is then not guaranteed"
    )]
    NotUnital,
    #[error("ultrafilter does not contain {open:#b}, so it lies outside the basic set")]
    NotInBasicSet { open: u64 },
    #[error("base set has {points} points, beyond the 4-point cap for ultrafilter enumeration")]
    TooLarge { points: usize },
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// A filter of subsets of a finite base set. `base` is a bitset within the
/// ambient point set; members are subsets of `base`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Filter {
    pub base: u64,
    /// Sorted ascending.
    pub members: Vec<u64>,
}

impl Filter {
    pub fn contains(&self, set: u64) -> bool {
        self.members.binary_search(&set).is_ok()
    }
}

/// The principal filter at `x`: all subsets of `base` containing `x`.
pub fn principal_at(base: u64, x: usize) -> Filter {
    assert!(bits::contains(base, x));
    let members: Vec<u64> = bits::subsets(base)
        .into_iter()
        .filter(|&a| bits::contains(a, x))
        .collect();
    Filter { base, members }
}

/// Checks the filter axioms: the empty set is excluded, members are closed
/// upward within the base, and closed under binary intersection.
pub fn verify_filter(f: &Filter) -> Report {
    let mut report = Report::valid();
    for &m in &f.members {
        if m & !f.base != 0 {
            report.push("member-range", format!("{} not a subset of the base", bits::show(m)));
        }
    }
    if f.contains(0) {
        report.push("empty-set-excluded", "the empty set is a member");
    }
    for &m in &f.members {
        for &sup in &bits::subsets(f.base) {
            if m & !sup == 0 && !f.contains(sup) {
                report.push(
                    "upward-closed",
                    format!("{} ⊆ {} but the superset is missing", bits::show(m), bits::show(sup)),
                );
            }
        }
    }
    for &a in &f.members {
        for &b in &f.members {
            if !f.contains(a & b) {
                report.push(
                    "intersection-closed",
                    format!("{} ∩ {} is missing", bits::show(a), bits::show(b)),
                );
            }
        }
    }
    report
}

/// All filters on the given base, by brute force over families of nonempty
/// subsets. Capped at 4 base points.
pub fn all_filters(base: u64) -> Vec<Filter> {
    let k = bits::count(base);
    assert!(k <= 4, "filter enumeration is capped at 4 base points");
    let nonempty: Vec<u64> = bits::subsets(base).into_iter().filter(|&a| a != 0).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << nonempty.len()) {
        let members: Vec<u64> = nonempty
            .iter()
            .enumerate()
            .filter(|(i, _)| bits::contains(mask, *i))
            .map(|(_, &a)| a)
            .collect();
        let candidate = Filter { base, members };
        if verify_filter(&candidate).is_valid() {
            out.push(candidate);
        }
    }
    out
}

/// Maximal (nonempty) filters. On a finite base these are exactly the
/// principal filters, which the exhaustive maximality check confirms. The
/// empty family satisfies the three filter clauses vacuously but carries no
/// point, so it is not counted here.
pub fn ultrafilters(base: u64) -> Vec<Filter> {
    let filters = all_filters(base);
    let mut maximal: Vec<Filter> = filters
        .iter()
        .filter(|f| {
            !f.members.is_empty()
                && !filters.iter().any(|g| {
                    g.members.len() > f.members.len()
                        && f.members.iter().all(|m| g.contains(*m))
                })
        })
        .cloned()
        .collect();
    // Sort by principal point (the unique singleton member).
    maximal.sort_by_key(|f| *f.members.first().unwrap_or(&0));
    maximal
}

/// The ultrafilter space with the topology generated by the basic sets
/// `Ũ = {F : U ∈ F}`. At finite scale this is discrete and homeomorphic to
/// the base, with ultrafilter `i` principal at point `i`.
pub fn ultrafilter_space(point_count: usize) -> (Vec<Filter>, FiniteSpace) {
    let base = bits::full(point_count);
    let ultra = ultrafilters(base);
    assert_eq!(ultra.len(), point_count, "finite ultrafilters are principal");
    for (i, f) in ultra.iter().enumerate() {
        assert_eq!(f.members.first(), Some(&(1u64 << i)));
    }
    let basis: Vec<u64> = bits::subsets(base)
        .into_iter()
        .map(|u| {
            bits::from_iter(
                ultra
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.contains(u))
                    .map(|(i, _)| i),
            )
        })
        .collect();
    let topology = generate_topology(ultra.len(), &basis);
    (ultra, topology)
}

/// Shrinks an ultrafilter lying in `Ũ` to an ultrafilter on `U`:
/// `F_U = {F ∩ U : F ∈ F}`.
pub fn restrict_ultrafilter(f: &Filter, open: u64) -> Result<Filter, CoarseError> {
    if !f.contains(open) {
        return Err(CoarseError::NotInBasicSet { open });
    }
    let mut members: Vec<u64> = f.members.iter().map(|&m| m & open).collect();
    members.sort_unstable();
    members.dedup();
    Ok(Filter {
        base: open,
        members,
    })
}

/// Enlarges an ultrafilter on a subset back to the ambient base:
/// `G_X = {G ∪ A : G ∈ G, A ⊆ X∖U}`.
pub fn extend_ultrafilter(g: &Filter, ambient: u64) -> Filter {
    assert!(g.base & !ambient == 0, "base must sit inside the ambient set");
    let complement = ambient & !g.base;
    let mut members = Vec::new();
    for &m in &g.members {
        for &a in &bits::subsets(complement) {
            members.push(m | a);
        }
    }
    members.sort_unstable();
    members.dedup();
    Filter {
        base: ambient,
        members,
    }
}

/// The Stone–Čech extension of a finite discrete étale groupoid: the germ
/// groupoid of the canonical representation transported to the ultrafilter
/// space. At finite scale `βG₀ = G₀`, so `β₀G ≅ G`, and both facts are
/// asserted.
#[derive(Debug)]
pub struct Beta0Extension {
    pub germ: GermGroupoid,
    pub extended_rep: Representation,
    /// From the original groupoid onto the extension.
    pub iso_to_original: GroupoidIso,
}

pub fn beta0_extension(g: &FiniteGroupoid) -> Result<Beta0Extension, CoarseError> {
    let discrete = |s: &FiniteSpace| s.opens().len() == 1 << s.point_count();
    if !discrete(&g.objects) || !discrete(&g.arrows) {
        return Err(CoarseError::NotDiscrete);
    }
    if g.object_count() > 4 {
        return Err(CoarseError::TooLarge {
            points: g.object_count(),
        });
    }
    assert!(is_etale(g).etale, "discrete groupoids are étale");
    let (_, rho) = canonical_representation(g);

    // Transport along x ↦ F_x. The ultrafilter space is indexed so that
    // ultrafilter i is principal at point i, so the embedding is the
    // identity on indices; the topology is rebuilt from the Ũ basis.
    let (_, uspace) = ultrafilter_space(g.object_count());
    let extended_rep = Representation::new(
        rho.semigroup().clone(),
        uspace,
        rho.assignments().to_vec(),
    );
    assert!(
        extended_rep.classify().is_wide,
        "the extension of a full representation along β is wide"
    );
    let germ = germ_groupoid(&extended_rep)?;
    let iso_to_original = groupoid_isomorphic(g, &germ.groupoid)
        .expect("within size cap")
        .expect("β₀G ≅ G at finite scale");
    Ok(Beta0Extension {
        germ,
        extended_rep,
        iso_to_original,
    })
}

/// A coarse structure: a family of nonempty controlled subsets of `X × X`,
/// stored as bitsets over the pair indices `x·n + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseStructure {
    pub points: usize,
    /// Sorted ascending.
    pub controlled: Vec<u64>,
}

impl CoarseStructure {
    pub fn pair_index(&self, x: usize, y: usize) -> usize {
        x * self.points + y
    }

    pub fn diagonal(&self) -> u64 {
        bits::from_iter((0..self.points).map(|x| self.pair_index(x, x)))
    }

    pub fn contains(&self, set: u64) -> bool {
        self.controlled.binary_search(&set).is_ok()
    }

    /// Unital iff the diagonal is controlled.
    pub fn is_unital(&self) -> bool {
        self.points == 0 || self.contains(self.diagonal())
    }

    fn transpose(&self, set: u64) -> u64 {
        bits::from_iter(bits::iter(set).map(|p| {
            let (x, y) = (p / self.points, p % self.points);
            self.pair_index(y, x)
        }))
    }

    fn product(&self, e: u64, f: u64) -> u64 {
        let n = self.points;
        let mut out = 0u64;
        for p in bits::iter(e) {
            let (x, y) = (p / n, p % n);
            for q in bits::iter(f) {
                let (yy, z) = (q / n, q % n);
                if y == yy {
                    out |= 1 << self.pair_index(x, z);
                }
            }
        }
        out
    }
}

/// Smallest coarse structure containing the generators. Since every
/// singleton of `X × X` is controlled and the family is closed under
/// finite unions and subsets, on a finite set the closure is always the
/// family of all nonempty subsets of `X × X`; the fixpoint below computes
/// it rather than assuming it.
pub fn generate_coarse_structure(points: usize, generators: &[u64]) -> CoarseStructure {
    assert!(points <= 4, "coarse structures are capped at 4 points (16 pair indices)");
    let everything = bits::full(points * points);
    for &g in generators {
        assert!(g & !everything == 0 && g != 0, "generators must be nonempty pair sets");
    }
    // Worklist closure under unions with singletons. Every singleton of
    // X × X is controlled by definition, so this alone reaches every
    // nonempty subset of X × X, and the subset, inverse, and product
    // clauses then add nothing new; the result is verified against all
    // clauses in the tests.
    let mut family: std::collections::BTreeSet<u64> = generators.iter().copied().collect();
    for p in bits::iter(everything) {
        family.insert(1 << p);
    }
    let mut queue: Vec<u64> = family.iter().copied().collect();
    while let Some(set) = queue.pop() {
        for p in bits::iter(everything) {
            let bigger = set | 1 << p;
            if family.insert(bigger) {
                queue.push(bigger);
            }
        }
    }
    CoarseStructure {
        points,
        controlled: family.into_iter().collect(),
    }
}

/// Checks each closure clause of the coarse-structure definition with
/// witnesses. Unions are checked against singletons, which generates all
/// finite unions once subsets and singletons are in place.
pub fn verify_coarse_structure(e: &CoarseStructure) -> Report {
    let mut report = Report::valid();
    let everything = bits::full(e.points * e.points);
    for &c in &e.controlled {
        if c == 0 {
            report.push("nonempty", "the empty set is listed as controlled");
        }
        if c & !everything != 0 {
            report.push("pair-range", format!("{} exceeds X × X", bits::show(c)));
        }
    }
    if !report.is_valid() {
        return report;
    }
    for p in bits::iter(everything) {
        if !e.contains(1 << p) {
            let (x, y) = (p / e.points, p % e.points);
            report.push("singletons", format!("singleton ({x},{y}) is not controlled"));
            return report;
        }
    }
    for &c in &e.controlled {
        for p in bits::iter(c) {
            let smaller = c & !(1 << p);
            if smaller != 0 && !e.contains(smaller) {
                report.push(
                    "subsets",
                    format!("{} minus one pair is not controlled", bits::show(c)),
                );
                return report;
            }
        }
        for p in bits::iter(everything) {
            if !e.contains(c | 1 << p) {
                report.push(
                    "finite-unions",
                    format!("{} ∪ one singleton is not controlled", bits::show(c)),
                );
                return report;
            }
        }
        if !e.contains(e.transpose(c)) {
            report.push("inverses", format!("transpose of {} is not controlled", bits::show(c)));
            return report;
        }
    }
    // With singletons, subsets, and singleton unions verified the family is
    // all nonempty subsets, so pairwise products are automatic; a sampled
    // literal product check still runs for small families.
    if e.controlled.len() <= 1024 {
        for &a in &e.controlled {
            for &b in &e.controlled {
                let p = e.product(a, b);
                if p != 0 && !e.contains(p) {
                    report.push(
                        "products",
                        format!("product of {} and {} is not controlled", bits::show(a), bits::show(b)),
                    );
                    return report;
                }
            }
        }
    }
    report
}

/// The pseudogroup of controlled partial bijections with its tautological
/// (wide) representation. The empty bijection is retained as the zero even
/// though its graph is empty.
pub fn controlled_pseudogroup(
    points: usize,
    e: &CoarseStructure,
) -> (Pseudogroup, Representation) {
    assert_eq!(points, e.points);
    let space = FiniteSpace::discrete(points);
    let elements: Vec<_> = all_partial_homeomorphisms(&space)
        .into_iter()
        .filter(|h| {
            let graph = bits::from_iter(h.graph().into_iter().map(|(x, y)| e.pair_index(x, y)));
            graph == 0 || e.contains(graph)
        })
        .collect();
    let pseudo = Pseudogroup::closure(&space, elements);
    let (semigroup, dict) = crate::invsemi::abstract_from_pseudogroup(&pseudo);
    let rep = Representation::new(semigroup, space, dict);
    assert!(rep.classify().is_wide, "controlled representations are wide");
    (pseudo, rep)
}

/// The translation groupoid of a unital coarse space: the germ groupoid of
/// the controlled pseudogroup's representation extended to the ultrafilter
/// space. At finite scale this is the pair groupoid on `X`, which is
/// asserted, as is agreement with the germ groupoid taken directly on `X`.
#[derive(Debug)]
pub struct TranslationGroupoid {
    pub germ: GermGroupoid,
    pub iso_to_pair: GroupoidIso,
}

pub fn translation_groupoid(
    points: usize,
    e: &CoarseStructure,
) -> Result<TranslationGroupoid, CoarseError> {
    if points > 4 {
        return Err(CoarseError::TooLarge { points });
    }
    if !e.is_unital() {
        return Err(CoarseError::NotUnital);
    }
    let (_, rep) = controlled_pseudogroup(points, e);
    let (_, uspace) = ultrafilter_space(points);
    let extended = Representation::new(
        rep.semigroup().clone(),
        uspace,
        rep.assignments().to_vec(),
    );
    assert!(extended.classify().is_wide);
    let germ = germ_groupoid(&extended)?;

    let pair = pair_groupoid(&FiniteSpace::discrete(points)).expect("discrete");
    let iso_to_pair = groupoid_isomorphic(&germ.groupoid, &pair)
        .expect("within size cap")
        .expect("translation groupoid of a finite unital coarse space is the pair groupoid");

    // The β₀ detour changes nothing at finite scale.
    let direct = germ_groupoid(&rep)?;
    assert!(
        groupoid_isomorphic(&germ.groupoid, &direct.groupoid)
            .expect("within size cap")
            .is_some(),
        "extension along β changed the germ groupoid at finite scale"
    );

    Ok(TranslationGroupoid { germ, iso_to_pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{disjoint_union, unit_groupoid, verify_groupoid};

    #[test]
    fn three_ultrafilters_all_principal() {
        let ultra = ultrafilters(bits::full(3));
        assert_eq!(ultra.len(), 3);
        for (i, f) in ultra.iter().enumerate() {
            assert_eq!(*f, principal_at(bits::full(3), i));
        }
    }

    #[test]
    fn basic_set_of_a_pair() {
        // Ũ for U = {0,1} consists of the principal filters at 0 and 1.
        let (ultra, _) = ultrafilter_space(3);
        let tilde: Vec<usize> = (0..3).filter(|&i| ultra[i].contains(0b011)).collect();
        assert_eq!(tilde, vec![0, 1]);
    }

    #[test]
    fn beta_x_is_discrete_and_matches_x() {
        for n in 0..=4 {
            let (ultra, topology) = ultrafilter_space(n);
            assert_eq!(ultra.len(), n);
            assert_eq!(topology, FiniteSpace::discrete(n));
        }
    }

    #[test]
    fn every_filter_extends_to_an_ultrafilter() {
        for n in 1..=4u32 {
            let base = bits::full(n as usize);
            let ultra = ultrafilters(base);
            for f in all_filters(base) {
                assert!(
                    ultra
                        .iter()
                        .any(|u| f.members.iter().all(|m| u.contains(*m))),
                    "filter {f:?} extends to no ultrafilter"
                );
            }
        }
    }

    #[test]
    fn restrict_of_principal_is_principal() {
        let base = bits::full(4);
        let f = principal_at(base, 1);
        let restricted = restrict_ultrafilter(&f, 0b0011).unwrap();
        assert_eq!(restricted, principal_at(0b0011, 1));
        assert!(restrict_ultrafilter(&f, 0b0100).is_err());
    }

    #[test]
    fn restrict_extend_round_trips_exhaustively() {
        for n in 1..=4usize {
            let base = bits::full(n);
            for f in ultrafilters(base) {
                for &u in &f.members.clone() {
                    let restricted = restrict_ultrafilter(&f, u).unwrap();
                    assert!(verify_filter(&restricted).is_valid());
                    assert_eq!(extend_ultrafilter(&restricted, base), f);
                }
            }
            for u in bits::subsets(base).into_iter().filter(|&u| u != 0) {
                for g in ultrafilters(u) {
                    let extended = extend_ultrafilter(&g, base);
                    assert!(verify_filter(&extended).is_valid());
                    assert!(extended.contains(u));
                    assert_eq!(restrict_ultrafilter(&extended, u).unwrap(), g);
                }
            }
        }
    }

    #[test]
    fn enlarged_filter_contains_all_padded_sets() {
        let g = principal_at(0b011, 0);
        let extended = extend_ultrafilter(&g, bits::full(3));
        for &m in &g.members {
            for &a in &bits::subsets(0b100) {
                assert!(extended.contains(m | a));
            }
        }
    }

    #[test]
    fn coarse_closure_on_two_points_is_everything() {
        let e = generate_coarse_structure(2, &[]);
        assert_eq!(e.controlled.len(), 15);
        assert!(verify_coarse_structure(&e).is_valid());
        assert!(e.is_unital());
    }

    #[test]
    fn metric_style_generator_on_four_points() {
        let mut gen = 0u64;
        for x in 0..4usize {
            for y in 0..4usize {
                if x.abs_diff(y) <= 1 {
                    gen |= 1 << (x * 4 + y);
                }
            }
        }
        let e = generate_coarse_structure(4, &[gen]);
        assert!(e.is_unital());
        assert_eq!(e.controlled.len(), (1 << 16) - 1);
        assert!(verify_coarse_structure(&e).is_valid());
    }

    #[test]
    fn non_unital_family_is_rejected_by_translation() {
        // An artificial family missing the diagonal; it is not a valid
        // coarse structure, and the unital gate fires first.
        let broken = CoarseStructure {
            points: 2,
            controlled: vec![0b0001],
        };
        assert!(!broken.is_unital());
        assert_eq!(
            translation_groupoid(2, &broken).unwrap_err(),
            CoarseError::NotUnital
        );
        assert!(!verify_coarse_structure(&broken).is_valid());
    }

    #[test]
    fn controlled_pseudogroup_of_everything_is_ix() {
        let e = generate_coarse_structure(2, &[]);
        let (pseudo, rep) = controlled_pseudogroup(2, &e);
        assert_eq!(pseudo.len(), 7);
        assert!(rep.verify().is_valid());
        // Unital structure: the identity of every subset is controlled.
        for &u in FiniteSpace::discrete(2).opens() {
            assert!(pseudo
                .index_of(&crate::invsemi::PartialBijection::identity(2, u))
                .is_some());
        }
    }

    #[test]
    fn beta0_of_discrete_corpus_groupoids() {
        let pair3 = pair_groupoid(&FiniteSpace::discrete(3)).unwrap();
        let unit2 = unit_groupoid(&FiniteSpace::discrete(2));
        let union = disjoint_union(&pair_groupoid(&FiniteSpace::discrete(2)).unwrap(), &unit2);
        for g in [pair3, unit2, union] {
            let beta = beta0_extension(&g).unwrap();
            assert!(verify_groupoid(&beta.germ.groupoid).is_valid());
            assert!(beta.extended_rep.verify().is_valid());
        }
    }

    #[test]
    fn beta0_rejects_non_discrete() {
        let g = unit_groupoid(&FiniteSpace::sierpinski());
        assert_eq!(beta0_extension(&g).unwrap_err(), CoarseError::NotDiscrete);
    }

    #[test]
    fn extension_respects_inverses_and_products() {
        // (h̃)⁻¹ = (h⁻¹)~ and h̃·h̃' = (hh')~: the transported assignment is
        // still a homomorphism.
        let g = pair_groupoid(&FiniteSpace::discrete(2)).unwrap();
        let beta = beta0_extension(&g).unwrap();
        let rep = &beta.extended_rep;
        let s = rep.semigroup();
        for a in 0..s.size() {
            assert_eq!(*rep.assign(s.inv(a)), rep.assign(a).invert());
            for b in 0..s.size() {
                assert_eq!(
                    *rep.assign(s.mul(a, b)),
                    rep.assign(a).compose(rep.assign(b))
                );
            }
        }
    }

    #[test]
    fn translation_groupoid_is_the_pair_groupoid() {
        for n in 1..=3usize {
            let e = generate_coarse_structure(n, &[]);
            let t = translation_groupoid(n, &e).unwrap();
            assert!(verify_groupoid(&t.germ.groupoid).is_valid());
            assert_eq!(t.germ.groupoid.arrow_count(), n * n);
        }
    }

    #[test]
    fn translation_on_one_point_is_the_unit_groupoid() {
        let e = generate_coarse_structure(1, &[]);
        let t = translation_groupoid(1, &e).unwrap();
        let unit = unit_groupoid(&FiniteSpace::discrete(1));
        assert!(groupoid_isomorphic(&t.germ.groupoid, &unit)
            .unwrap()
            .is_some());
    }
}
