//! Local bisections of an étale groupoid and the canonical representation
//! `ρ_G` on the object space.

use crate::bits;
use crate::invsemi::{InverseSemigroup, PartialBijection};
use crate::repr::Representation;

use super::{is_etale, FiniteGroupoid};

/// The inverse monoid `I(G)` of local bisections: open arrow sets on which
/// both `d` and `r` are injective, under pointwise multiplication.
///
/// `ρ_G` can be non-faithful (parallel arrows induce the same partial map
/// on objects), so the monoid is kept abstract with the arrow-set
/// dictionary alongside.
#[derive(Debug, Clone)]
pub struct BisectionMonoid {
    pub semigroup: InverseSemigroup,
    /// Arrow set of each element, canonically sorted ascending.
    pub bisections: Vec<u64>,
}

impl BisectionMonoid {
    pub fn index_of(&self, arrow_set: u64) -> Option<usize> {
        self.bisections.binary_search(&arrow_set).ok()
    }
}

/// Enumerates all local bisections of an étale groupoid and builds their
/// Cayley table. The product of two bisections is their pointwise arrow
/// product, asserted to be a bisection again.
pub fn local_bisections(g: &FiniteGroupoid) -> BisectionMonoid {
    assert!(is_etale(g).etale, "local bisections need an étale groupoid");
    let bisections: Vec<u64> = g
        .arrows
        .opens()
        .iter()
        .copied()
        .filter(|&v| {
            let members: Vec<usize> = bits::to_vec(v);
            let mut d_seen = 0u64;
            let mut r_seen = 0u64;
            for &x in &members {
                if bits::contains(d_seen, g.dmap[x]) || bits::contains(r_seen, g.rmap[x]) {
                    return false;
                }
                d_seen |= 1 << g.dmap[x];
                r_seen |= 1 << g.rmap[x];
            }
            true
        })
        .collect();

    let index = |set: u64| -> usize {
        bisections
            .binary_search(&set)
            .expect("bisections are closed under the operations")
    };
    let n = bisections.len();
    let mut mul = vec![0usize; n * n];
    for (i, &v) in bisections.iter().enumerate() {
        for (j, &w) in bisections.iter().enumerate() {
            let mut product = 0u64;
            for x in bits::iter(v) {
                for y in bits::iter(w) {
                    if let Some(p) = g.compose(x, y) {
                        product |= 1 << p;
                    }
                }
            }
            mul[i * n + j] = index(product);
        }
    }
    let inv: Vec<usize> = bisections
        .iter()
        .map(|&v| index(bits::from_iter(bits::iter(v).map(|x| g.imap[x]))))
        .collect();
    let unit = Some(index(g.unit_image()));
    BisectionMonoid {
        semigroup: InverseSemigroup::from_raw(n, mul, inv, unit),
        bisections,
    }
}

/// The canonical representation of `I(G)` on `G0`: a bisection `V` acts by
/// `d(x) ↦ r(x)` for `x ∈ V`, a partial homeomorphism `d(V) → r(V)`.
pub fn canonical_representation(g: &FiniteGroupoid) -> (BisectionMonoid, Representation) {
    let monoid = local_bisections(g);
    let assign: Vec<PartialBijection> = monoid
        .bisections
        .iter()
        .map(|&v| {
            let pairs: Vec<(usize, usize)> =
                bits::iter(v).map(|x| (g.dmap[x], g.rmap[x])).collect();
            PartialBijection::from_pairs(g.object_count(), &pairs)
                .expect("d and r are injective on a bisection")
        })
        .collect();
    let rep = Representation::new(monoid.semigroup.clone(), g.objects.clone(), assign);
    (monoid, rep)
}
