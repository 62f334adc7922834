//! Finite topological spaces as explicit families of open sets.
//!
//! Points are integers `0..point_count`; an open set is a `u64` bitset. The
//! family of opens is stored sorted ascending by bitset value with no
//! duplicates, so equality of spaces is plain field equality.
//!
//! For large families the verifier and the generator work through minimal
//! open neighbourhoods: in a finite space every point `x` has a smallest
//! open set containing it, and a family closed under unions and
//! intersections is exactly the family of all unions of its minimal opens
//! (plus the empty set). Small-scale tests cross-check this against the
//! literal pairwise closure conditions.

use crate::bits;
use crate::report::Report;

/// A finite topological space: a point count and its family of open sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    point_count: usize,
    opens: Vec<u64>,
}

impl FiniteSpace {
    /// Wraps raw data without checking the topology axioms; pair with
    /// [`verify_topology`]. Opens are sorted and deduplicated only by
    /// [`FiniteSpace::canonicalize`], not here, so that verification can
    /// report non-canonical input.
    pub fn from_raw(point_count: usize, opens: Vec<u64>) -> Self {
        assert!(point_count <= 64, "spaces are limited to 64 points");
        FiniteSpace { point_count, opens }
    }

    /// Sorts and deduplicates the family of opens.
    pub fn canonicalize(mut self) -> Self {
        self.opens.sort_unstable();
        self.opens.dedup();
        self
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Bitset of all points.
    pub fn universe(&self) -> u64 {
        bits::full(self.point_count)
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn is_open(&self, set: u64) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    /// Smallest open set containing `x`: the intersection of all opens
    /// containing `x`.
    pub fn minimal_open(&self, x: usize) -> u64 {
        debug_assert!(x < self.point_count);
        let mut acc = self.universe();
        for &open in &self.opens {
            if bits::contains(open, x) {
                acc &= open;
            }
        }
        acc
    }

    /// Minimal opens of all points.
    pub fn minimal_opens(&self) -> Vec<u64> {
        (0..self.point_count).map(|x| self.minimal_open(x)).collect()
    }

    /// The discrete topology: every subset is open.
    pub fn discrete(point_count: usize) -> Self {
        assert!(
            point_count <= 20,
            "discrete topology on {point_count} points has 2^{point_count} opens"
        );
        FiniteSpace {
            point_count,
            opens: bits::subsets(bits::full(point_count)),
        }
    }

    /// The indiscrete topology: only the empty set and the whole space.
    pub fn indiscrete(point_count: usize) -> Self {
        let mut opens = vec![0u64];
        if point_count > 0 {
            opens.push(bits::full(point_count));
        }
        FiniteSpace {
            point_count,
            opens: {
                opens.sort_unstable();
                opens.dedup();
                opens
            },
        }
    }

    /// Sierpiński space on points {0, 1}: the point 0 is open, 1 is not.
    pub fn sierpinski() -> Self {
        FiniteSpace {
            point_count: 2,
            opens: vec![0b00, 0b01, 0b11],
        }
    }

    /// Disjoint union; the points of `other` are shifted past `self`'s.
    pub fn disjoint_union(&self, other: &FiniteSpace) -> FiniteSpace {
        let n = self.point_count + other.point_count;
        assert!(n <= 64);
        let mut opens = Vec::with_capacity(self.opens.len() * other.opens.len());
        for &a in &self.opens {
            for &b in &other.opens {
                opens.push(a | b << self.point_count);
            }
        }
        opens.sort_unstable();
        opens.dedup();
        FiniteSpace {
            point_count: n,
            opens,
        }
    }
}

/// Checks every topology axiom on `candidate`, reporting a witness for each
/// violation. Valid iff the family is a topology stored in canonical form.
pub fn verify_topology(candidate: &FiniteSpace) -> Report {
    let mut report = Report::valid();
    let universe = candidate.universe();

    for &open in &candidate.opens {
        if open & !universe != 0 {
            report.push(
                "bitset-range",
                format!(
                    "open {} mentions points outside 0..{}",
                    bits::show(open),
                    candidate.point_count
                ),
            );
        }
    }
    for pair in candidate.opens.windows(2) {
        if pair[0] >= pair[1] {
            report.push(
                "canonical-order",
                format!(
                    "opens {} and {} out of ascending order or duplicated",
                    bits::show(pair[0]),
                    bits::show(pair[1])
                ),
            );
        }
    }
    if !report.is_valid() {
        // Closure checks below assume a sane, sorted family.
        return report;
    }

    if !candidate.is_open(0) {
        report.push("empty-set-open", "the empty set is missing".to_string());
    }
    if !candidate.is_open(universe) {
        report.push(
            "full-set-open",
            format!("the full set {} is missing", bits::show(universe)),
        );
    }
    if !report.is_valid() {
        return report;
    }

    // Powerset families are closed under everything.
    if candidate.opens.len() == 1 << candidate.point_count {
        return report;
    }

    // Intersection closure via minimal opens: walk the opens containing x
    // and intersect; the first step that leaves the family is a witness.
    let mut minimal = vec![universe; candidate.point_count];
    for x in 0..candidate.point_count {
        let mut acc = universe;
        for &open in &candidate.opens {
            if bits::contains(open, x) && acc & open != acc {
                let meet = acc & open;
                if !candidate.is_open(meet) {
                    report.push(
                        "intersection-closure",
                        format!(
                            "{} ∩ {} = {} is not open",
                            bits::show(acc),
                            bits::show(open),
                            bits::show(meet)
                        ),
                    );
                    return report;
                }
                acc = meet;
            }
        }
        minimal[x] = acc;
    }

    // Union closure: the family must contain every union of minimal opens,
    // and (automatically) nothing else. Grow unions one minimal open at a
    // time; the first union outside the family is a witness pair.
    let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let mut queue: Vec<u64> = vec![0];
    seen.insert(0);
    while let Some(u) = queue.pop() {
        for &m in &minimal {
            let joined = u | m;
            if seen.insert(joined) {
                if !candidate.is_open(joined) {
                    report.push(
                        "union-closure",
                        format!(
                            "{} ∪ {} = {} is not open",
                            bits::show(u),
                            bits::show(m),
                            bits::show(joined)
                        ),
                    );
                    return report;
                }
                queue.push(joined);
            }
        }
    }

    report
}

/// Smallest topology containing all `generators`. Idempotent: regenerating
/// from the result's opens returns an equal space.
pub fn generate_topology(point_count: usize, generators: &[u64]) -> FiniteSpace {
    assert!(point_count <= 64);
    let universe = bits::full(point_count);
    for &g in generators {
        assert!(
            g & !universe == 0,
            "generator {} is not a subset of the point set",
            bits::show(g)
        );
    }

    // Minimal open of x in the generated topology: the intersection of all
    // generators containing x (the whole space if none does). The topology
    // is then the set of all unions of minimal opens, plus the empty set.
    let minimal: Vec<u64> = (0..point_count)
        .map(|x| {
            generators
                .iter()
                .filter(|g| bits::contains(**g, x))
                .fold(universe, |acc, g| acc & g)
        })
        .collect();

    let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let mut queue: Vec<u64> = vec![0];
    seen.insert(0);
    while let Some(u) = queue.pop() {
        for &m in &minimal {
            let joined = u | m;
            if seen.insert(joined) {
                queue.push(joined);
            }
        }
    }
    if point_count == 0 {
        seen.insert(0);
    } else {
        // The full set is the union over all points, already reached unless
        // there are no points at all.
        debug_assert!(seen.contains(&universe));
    }

    let mut opens: Vec<u64> = seen.into_iter().collect();
    opens.sort_unstable();
    FiniteSpace { point_count, opens }
}

/// True iff distinct points have distinct families of open neighbourhoods.
/// A finite space is sober iff it is T0, so this doubles as the sobriety
/// test at finite scale.
pub fn is_t0(space: &FiniteSpace) -> bool {
    let minimal = space.minimal_opens();
    for x in 0..space.point_count() {
        for y in (x + 1)..space.point_count() {
            if minimal[x] == minimal[y] {
                return false;
            }
        }
    }
    true
}

/// All topologies on `point_count` points, by brute force over families of
/// subsets. Only sensible for `point_count <= 3` (29 topologies on 3 points).
pub fn all_topologies(point_count: usize) -> Vec<FiniteSpace> {
    assert!(point_count <= 3, "brute-force topology enumeration is capped");
    let universe = bits::full(point_count);
    let all_subsets = bits::subsets(universe);
    let n_subsets = all_subsets.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n_subsets) {
        let family: Vec<u64> = (0..n_subsets)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| all_subsets[i])
            .collect();
        let candidate = FiniteSpace::from_raw(point_count, family);
        if verify_topology(&candidate).is_valid() {
            out.push(candidate);
        }
    }
    out
}

/// True iff `f` (a total point map) is continuous: preimages of opens are
/// open. Equivalent minimal-open form: `f(minimal_open(x)) ⊆
/// minimal_open(f(x))` for all `x`.
pub fn is_continuous(domain: &FiniteSpace, codomain: &FiniteSpace, f: &[usize]) -> bool {
    assert_eq!(f.len(), domain.point_count());
    let dom_min = domain.minimal_opens();
    let cod_min = codomain.minimal_opens();
    (0..domain.point_count()).all(|x| {
        bits::iter(dom_min[x]).all(|y| bits::contains(cod_min[f[x]], f[y]))
    })
}

/// True iff `f` is an open map: images of opens are open. Equivalent
/// minimal-open form: every `f(minimal_open(x))` is open.
pub fn is_open_map(domain: &FiniteSpace, codomain: &FiniteSpace, f: &[usize]) -> bool {
    assert_eq!(f.len(), domain.point_count());
    (0..domain.point_count()).all(|x| {
        let image = bits::from_iter(bits::iter(domain.minimal_open(x)).map(|y| f[y]));
        codomain.is_open(image)
    })
}

/// Image of a point set under a total map.
pub fn image_of(f: &[usize], set: u64) -> u64 {
    bits::from_iter(bits::iter(set).map(|x| f[x]))
}

/// Preimage of a point set under a total map.
pub fn preimage_of(f: &[usize], domain_points: usize, set: u64) -> u64 {
    bits::from_iter((0..domain_points).filter(|&x| bits::contains(set, f[x])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_two_points_is_valid() {
        let space = FiniteSpace::discrete(2);
        assert_eq!(space.opens().len(), 4);
        assert!(verify_topology(&space).is_valid());
    }

    #[test]
    fn sierpinski_is_valid() {
        // Exhaustive union/intersection closure over all pairs.
        let space = FiniteSpace::sierpinski();
        for &a in space.opens() {
            for &b in space.opens() {
                assert!(space.is_open(a | b));
                assert!(space.is_open(a & b));
            }
        }
        assert!(verify_topology(&space).is_valid());
    }

    #[test]
    fn missing_full_set_is_invalid() {
        let candidate = FiniteSpace::from_raw(2, vec![0b00, 0b01]);
        let report = verify_topology(&candidate);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.axiom == "full-set-open"));
    }

    #[test]
    fn missing_union_is_detected() {
        let candidate = FiniteSpace::from_raw(3, vec![0b000, 0b001, 0b010, 0b111]);
        let report = verify_topology(&candidate);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.axiom == "union-closure"));
    }

    #[test]
    fn missing_intersection_is_detected() {
        let candidate = FiniteSpace::from_raw(3, vec![0b000, 0b011, 0b110, 0b111]);
        let report = verify_topology(&candidate);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "intersection-closure"));
    }

    #[test]
    fn malformed_bitset_reported() {
        let candidate = FiniteSpace::from_raw(2, vec![0b000, 0b100, 0b011]);
        let report = verify_topology(&candidate);
        assert!(report.violations.iter().any(|v| v.axiom == "bitset-range"));
    }

    #[test]
    fn generate_indiscrete() {
        let space = generate_topology(2, &[]);
        assert_eq!(space, FiniteSpace::indiscrete(2));
    }

    #[test]
    fn generate_discrete_from_singletons() {
        let space = generate_topology(3, &[0b001, 0b010, 0b100]);
        assert_eq!(space.opens().len(), 8);
        assert_eq!(space, FiniteSpace::discrete(3));
    }

    #[test]
    fn generate_two_singletons_of_three() {
        // Closure of {a} and {b} inside {a,b,c}: fixpoint under union and
        // intersection computed by hand.
        let space = generate_topology(3, &[0b001, 0b010]);
        assert_eq!(space.opens(), &[0b000, 0b001, 0b010, 0b011, 0b111]);
    }

    #[test]
    fn generation_is_idempotent() {
        for gens in [vec![], vec![0b01u64], vec![0b001, 0b110], vec![0b101, 0b011]] {
            let n = 3;
            let space = generate_topology(n, &gens);
            assert!(verify_topology(&space).is_valid());
            let again = generate_topology(n, space.opens());
            assert_eq!(space, again);
        }
    }

    #[test]
    fn t0_examples() {
        assert!(is_t0(&FiniteSpace::discrete(2)));
        assert!(!is_t0(&FiniteSpace::indiscrete(2)));
        // Sierpiński: the neighbourhood filters of 0 and 1 differ.
        assert!(is_t0(&FiniteSpace::sierpinski()));
    }

    #[test]
    fn t0_agrees_with_brute_force_up_to_four_points() {
        // Brute force: for all x != y some open contains exactly one of them.
        fn t0_brute(space: &FiniteSpace) -> bool {
            for x in 0..space.point_count() {
                for y in 0..space.point_count() {
                    if x != y {
                        let separated = space.opens().iter().any(|&u| {
                            bits::contains(u, x) != bits::contains(u, y)
                        });
                        if !separated {
                            return false;
                        }
                    }
                }
            }
            true
        }
        for n in 0..=3 {
            for space in all_topologies(n) {
                assert_eq!(is_t0(&space), t0_brute(&space));
            }
        }
        // A few 4-point spaces: discrete, indiscrete, and generated ones.
        for space in [
            FiniteSpace::discrete(4),
            FiniteSpace::indiscrete(4),
            generate_topology(4, &[0b0011, 0b0110]),
            generate_topology(4, &[0b0001, 0b0011, 0b0111]),
        ] {
            assert_eq!(is_t0(&space), t0_brute(&space));
        }
    }

    #[test]
    fn verify_agrees_with_literal_pairwise_closure() {
        // Oracle: literal pairwise union/intersection membership checks.
        fn literal_valid(space: &FiniteSpace) -> bool {
            let u = space.universe();
            if !space.is_open(0) || !space.is_open(u) {
                return false;
            }
            if space.opens().iter().any(|&o| o & !u != 0) {
                return false;
            }
            space.opens().iter().all(|&a| {
                space
                    .opens()
                    .iter()
                    .all(|&b| space.is_open(a | b) && space.is_open(a & b))
            })
        }
        // All sorted families on 3 points.
        let subsets = bits::subsets(bits::full(3));
        for mask in 0u32..(1 << subsets.len()) {
            let family: Vec<u64> = (0..subsets.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| subsets[i])
                .collect();
            let candidate = FiniteSpace::from_raw(3, family);
            assert_eq!(
                verify_topology(&candidate).is_valid(),
                literal_valid(&candidate),
                "disagreement on {:?}",
                candidate
            );
        }
    }

    #[test]
    fn count_of_small_topologies() {
        assert_eq!(all_topologies(0).len(), 1);
        assert_eq!(all_topologies(1).len(), 1);
        assert_eq!(all_topologies(2).len(), 4);
        assert_eq!(all_topologies(3).len(), 29);
    }

    #[test]
    fn generated_spaces_verify() {
        for n in 0..=4usize {
            let gens: Vec<Vec<u64>> = vec![
                vec![],
                (0..n).map(|i| 1u64 << i).collect(),
                (0..n.saturating_sub(1)).map(|i| 0b11 << i).collect(),
            ];
            for g in gens {
                let space = generate_topology(n, &g);
                assert!(verify_topology(&space).is_valid());
            }
        }
    }
}
