//! Representations of inverse semigroups on finite spaces: classification
//! (unital / full / wide), the formal-restriction monoid `(Ω(X)↓M)`, the
//! quotient `M_X` with its full representation `ρ_X`, and the universal
//! factorization through `M_X`.

use std::collections::HashMap;

use thiserror::Error;

use crate::bits;
use crate::fintop::FiniteSpace;
use crate::invsemi::{
    is_homomorphism, wagner_preston, InverseSemigroup,
    PartialBijection,
};
use crate::report::Report;

/// A homomorphism from an abstract inverse semigroup into the partial
/// homeomorphisms of a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    semigroup: InverseSemigroup,
    space: FiniteSpace,
    assign: Vec<PartialBijection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub is_unital: bool,
    pub is_full: bool,
    pub is_wide: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReprError {
    #[error("representation is not unital")]
    NotUnital,
    #[error("representation is not wide: point {point} is not in the domain of any idempotent's image")]
    NotWide { point: usize },
    #[error("(Ω(X)↓M) would have {size} elements, beyond the {cap}-element cap")]
    TooLarge { size: usize, cap: usize },
}

impl Representation {
    pub fn new(
        semigroup: InverseSemigroup,
        space: FiniteSpace,
        assign: Vec<PartialBijection>,
    ) -> Self {
        assert_eq!(assign.len(), semigroup.size());
        Representation {
            semigroup,
            space,
            assign,
        }
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn assign(&self, s: usize) -> &PartialBijection {
        &self.assign[s]
    }

    pub fn assignments(&self) -> &[PartialBijection] {
        &self.assign
    }

    pub fn dom(&self, s: usize) -> u64 {
        self.assign[s].domain()
    }

    /// The Wagner–Preston representation of `s` on the discrete space with
    /// one point per element. Always wide.
    pub fn wagner_preston(s: &InverseSemigroup) -> Representation {
        let wp = wagner_preston(s);
        Representation::new(s.clone(), wp.pseudogroup.space().clone(), wp.assign)
    }

    /// The identity representation of the abstract `I(X)` on `X`.
    pub fn tautological_ix(space: &FiniteSpace) -> Representation {
        let (s, dict) = crate::corpus::abstract_ix(space);
        Representation::new(s, space.clone(), dict)
    }

    /// Homomorphism and continuity checks; nothing about the assignment is
    /// trusted.
    pub fn verify(&self) -> Report {
        let mut report = Report::valid();
        for (i, h) in self.assign.iter().enumerate() {
            if !h.is_partial_homeomorphism(&self.space) {
                report.push(
                    "assign-partial-homeomorphism",
                    format!("image of element {i} is not a partial homeomorphism"),
                );
            }
        }
        let n = self.semigroup.size();
        for a in 0..n {
            if self.assign[self.semigroup.inv(a)] != self.assign[a].invert() {
                report.push("assign-inverse", format!("ρ({a}*) ≠ ρ({a})⁻¹"));
            }
            for b in 0..n {
                let composite = self.assign[a].compose(&self.assign[b]);
                if self.assign[self.semigroup.mul(a, b)] != composite {
                    report.push("assign-homomorphism", format!("ρ({a}·{b}) ≠ ρ({a})ρ({b})"));
                }
            }
        }
        report
    }

    /// Classifies the representation. Full and unital each imply wide;
    /// both implications are asserted.
    pub fn classify(&self) -> Classification {
        let idem = self.semigroup.idempotents();
        let covered = idem.iter().fold(0u64, |acc, &f| acc | self.dom(f));
        let is_wide = covered == self.space.universe();

        let is_unital = match self.semigroup.unit() {
            Some(e) => {
                self.assign[e]
                    == PartialBijection::identity(self.space.point_count(), self.space.universe())
            }
            None => false,
        };

        // Full: the idempotents map bijectively onto the partial identities
        // of the open sets.
        let mut is_full = true;
        let mut seen: Vec<u64> = Vec::new();
        for &f in &idem {
            let image = &self.assign[f];
            let ident = PartialBijection::identity(self.space.point_count(), image.domain());
            if *image != ident {
                is_full = false;
                break;
            }
            seen.push(image.domain());
        }
        if is_full {
            seen.sort_unstable();
            let duplicates = seen.windows(2).any(|w| w[0] == w[1]);
            let onto = self.space.opens().iter().all(|u| seen.binary_search(u).is_ok());
            is_full = !duplicates && onto;
        }

        if is_full {
            assert!(is_wide, "a full representation must be wide");
        }
        if is_unital {
            assert!(is_wide, "a unital representation must be wide");
        }
        Classification {
            is_unital,
            is_full,
            is_wide,
        }
    }

    /// First point not covered by any idempotent's domain, when not wide.
    pub fn wideness_witness(&self) -> Option<usize> {
        let idem = self.semigroup.idempotents();
        let covered = idem.iter().fold(0u64, |acc, &f| acc | self.dom(f));
        bits::iter(self.space.universe() & !covered).next()
    }

    /// Adjoins a fresh unit to the semigroup and sends it to the identity
    /// of the whole space. Requires a wide representation; the result is
    /// unital.
    pub fn extend_to_unit(&self) -> Result<Representation, ReprError> {
        if let Some(point) = self.wideness_witness() {
            return Err(ReprError::NotWide { point });
        }
        let monoid = self.semigroup.adjoin_unit();
        let mut assign = self.assign.clone();
        assign.push(PartialBijection::identity(
            self.space.point_count(),
            self.space.universe(),
        ));
        Ok(Representation::new(monoid, self.space.clone(), assign))
    }
}

/// A formal restriction `(U, s)` of an element to an open subset of its
/// image's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalRestriction {
    pub element: usize,
    pub open: u64,
}

/// The inverse monoid `(Ω(X)↓M)` of all formal restrictions of a unital
/// representation.
#[derive(Debug, Clone)]
pub struct OmegaDownarrow {
    pub semigroup: InverseSemigroup,
    /// Dictionary from element index to formal restriction, canonically
    /// sorted by (element, open).
    pub elements: Vec<FormalRestriction>,
}

/// Builds `(Ω(X)↓M)` with product
/// `(U,s)(V,t) = (U ∩ ρ(s)⁻¹(V ∩ ρ(s)(U)), st)`, inverse
/// `(U,s)* = (ρ(s)(U), s*)`, and unit `(X, e)`.
pub fn omega_downarrow(rep: &Representation) -> Result<OmegaDownarrow, ReprError> {
    const OMEGA_CAP: usize = 20_000;
    if !rep.classify().is_unital {
        return Err(ReprError::NotUnital);
    }
    let m = rep.semigroup();
    let mut elements: Vec<FormalRestriction> = Vec::new();
    for s in 0..m.size() {
        for &u in rep.space().opens() {
            if u & !rep.dom(s) == 0 {
                elements.push(FormalRestriction { element: s, open: u });
            }
        }
    }
    if elements.len() > OMEGA_CAP {
        return Err(ReprError::TooLarge {
            size: elements.len(),
            cap: OMEGA_CAP,
        });
    }
    elements.sort_unstable();
    let index: HashMap<FormalRestriction, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, &fr)| (fr, i))
        .collect();

    let n = elements.len();
    let mut mul = vec![0usize; n * n];
    for (i, a) in elements.iter().enumerate() {
        let rho_s = rep.assign(a.element);
        for (j, b) in elements.iter().enumerate() {
            let mid = b.open & rho_s.image_of(a.open);
            let open = a.open & rho_s.preimage_of(mid);
            let fr = FormalRestriction {
                element: m.mul(a.element, b.element),
                open,
            };
            mul[i * n + j] = *index.get(&fr).unwrap_or_else(|| {
                panic!("product {fr:?} escaped (Ω(X)↓M)");
            });
        }
    }
    let inv: Vec<usize> = elements
        .iter()
        .map(|a| {
            let fr = FormalRestriction {
                element: m.inv(a.element),
                open: rep.assign(a.element).image_of(a.open),
            };
            index[&fr]
        })
        .collect();
    let unit = index[&FormalRestriction {
        element: m.unit().expect("unital representation"),
        open: rep.space().universe(),
    }];
    Ok(OmegaDownarrow {
        semigroup: InverseSemigroup::from_raw(n, mul, inv, Some(unit)),
        elements,
    })
}

/// One congruence class `[U, s]` of the relation `(U,s) ~ (U,t)` iff some
/// idempotent `f` with `U ⊆ dom ρ(f)` has `fs = ft`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MXClass {
    pub representative: FormalRestriction,
    pub members: Vec<FormalRestriction>,
}

/// The quotient monoid `M_X` with its full representation `ρ_X`.
#[derive(Debug, Clone)]
pub struct MxQuotient {
    pub omega: OmegaDownarrow,
    pub classes: Vec<MXClass>,
    /// Index of each omega element's class.
    pub class_of: Vec<usize>,
    pub semigroup: InverseSemigroup,
    pub representation: Representation,
}

/// Builds `M_X` by pairwise witness search over `E(M)` and equips it with
/// `ρ_X([U,s]) = ρ(s)|_U`.
pub fn mx_quotient(rep: &Representation) -> Result<MxQuotient, ReprError> {
    let omega = omega_downarrow(rep)?;
    let m = rep.semigroup();
    let idem = m.idempotents();
    let n = omega.elements.len();

    // Witness-based congruence; union-find keeps it an equivalence even
    // though the relation is already transitive.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let a = omega.elements[i];
            let b = omega.elements[j];
            if a.open != b.open {
                continue;
            }
            let related = idem.iter().any(|&f| {
                a.open & !rep.dom(f) == 0 && m.mul(f, a.element) == m.mul(f, b.element)
            });
            if related {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = rj.min(ri);
                }
            }
        }
    }

    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<MXClass> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        if class_of[root] == usize::MAX {
            class_of[root] = classes.len();
            classes.push(MXClass {
                representative: omega.elements[root],
                members: Vec::new(),
            });
        }
        class_of[i] = class_of[root];
        classes[class_of[i]].members.push(omega.elements[i]);
    }

    let k = classes.len();
    let mut mul = vec![0usize; k * k];
    let mut inv = vec![0usize; k];
    for (ci, class) in classes.iter().enumerate() {
        let i = omega.elements.binary_search(&class.representative).unwrap();
        inv[ci] = class_of[omega.semigroup.inv(i)];
        for (cj, other) in classes.iter().enumerate() {
            let j = omega.elements.binary_search(&other.representative).unwrap();
            mul[ci * k + cj] = class_of[omega.semigroup.mul(i, j)];
        }
    }
    let unit = class_of[omega.semigroup.unit().expect("omega is a monoid")];
    let semigroup = InverseSemigroup::from_raw(k, mul, inv, Some(unit));

    // Representation well-definedness: every member of a class restricts to
    // the same partial homeomorphism.
    let assign: Vec<PartialBijection> = classes
        .iter()
        .map(|class| {
            let fr = class.representative;
            let image = rep.assign(fr.element).restrict(fr.open);
            for member in &class.members {
                debug_assert_eq!(
                    rep.assign(member.element).restrict(member.open),
                    image,
                    "congruence class with inconsistent restrictions"
                );
            }
            image
        })
        .collect();
    let representation = Representation::new(semigroup.clone(), rep.space().clone(), assign);

    Ok(MxQuotient {
        omega,
        classes,
        class_of,
        semigroup,
        representation,
    })
}

impl MxQuotient {
    /// Class index of the formal restriction `(U, s)`.
    pub fn class_of_restriction(&self, fr: &FormalRestriction) -> Option<usize> {
        self.omega
            .elements
            .binary_search(fr)
            .ok()
            .map(|i| self.class_of[i])
    }

    /// The commuting square: for every idempotent `f` of `M`, the class
    /// `[dom ρ(f), f]` equals `[dom ρ(f), e]`.
    pub fn commuting_square_holds(&self, rep: &Representation) -> bool {
        let m = rep.semigroup();
        let e = m.unit().expect("unital representation");
        m.idempotents().iter().all(|&f| {
            let u = rep.dom(f);
            self.class_of_restriction(&FormalRestriction { element: f, open: u })
                == self.class_of_restriction(&FormalRestriction { element: e, open: u })
        })
    }

    /// The decomposition `[U,s] = [U,e]·[dom ρ(s), s]`, checked for every
    /// omega element.
    pub fn decomposition_holds(&self, rep: &Representation) -> bool {
        let m = rep.semigroup();
        let e = m.unit().expect("unital representation");
        self.omega.elements.iter().all(|fr| {
            let left = self
                .class_of_restriction(&FormalRestriction {
                    element: e,
                    open: fr.open,
                })
                .unwrap();
            let right = self
                .class_of_restriction(&FormalRestriction {
                    element: fr.element,
                    open: rep.dom(fr.element),
                })
                .unwrap();
            self.semigroup.mul(left, right) == self.class_of[self
                .omega
                .elements
                .binary_search(fr)
                .unwrap()]
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("alpha is not a monoid homomorphism into the target")]
    AlphaNotHomomorphism,
    #[error("beta is not a monoid homomorphism from the open-set semilattice")]
    BetaNotHomomorphism,
    #[error("outer square does not commute at idempotent {idempotent}")]
    NonCommutingSquare { idempotent: usize },
    #[error("hypothesis {which} fails at U={u:#b}, V={v:#b}, s={s}")]
    HypothesisViolated { which: char, u: u64, v: u64, s: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessEvidence {
    /// All homomorphisms `M_X → M'` were enumerated; exactly one commutes.
    ExhaustiveSearch,
    /// Size beyond the search budget; uniqueness follows from the
    /// decomposition `[U,s] = [U,e]·[dom ρ(s), s]` pinning all values.
    ProvedByConstruction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// The unique homomorphism `M_X → M'`, `ρ'[U,s] = β(U)·α(s)`.
    pub homomorphism: Vec<usize>,
    pub uniqueness: UniquenessEvidence,
}

const UNIQUENESS_SEARCH_BUDGET: usize = 10_000;

/// The universal property of `M_X`: given `α : M → M'` and
/// `β : Ω(X) → M'` making the outer square commute and satisfying the two
/// compatibility hypotheses, produces the unique `ρ' : M_X → M'` with
/// `ρ'[U,s] = β(U)·α(s)`.
///
/// `beta` is indexed like `rep.space().opens()`.
pub fn factor_through_mx(
    rep: &Representation,
    mx: &MxQuotient,
    target: &InverseSemigroup,
    alpha: &[usize],
    beta: &[usize],
) -> Result<Factorization, FactorError> {
    let m = rep.semigroup();
    let space = rep.space();
    let opens = space.opens();
    assert_eq!(alpha.len(), m.size());
    assert_eq!(beta.len(), opens.len());
    let beta_of = |u: u64| -> usize { beta[opens.binary_search(&u).expect("open set")] };

    if !is_homomorphism(alpha, m, target)
        || target.unit().map(|e| alpha[m.unit().unwrap()] != e).unwrap_or(true)
    {
        return Err(FactorError::AlphaNotHomomorphism);
    }
    let beta_hom = opens.iter().all(|&u| {
        opens
            .iter()
            .all(|&v| target.mul(beta_of(u), beta_of(v)) == beta_of(u & v))
    }) && Some(beta_of(space.universe())) == target.unit();
    if !beta_hom {
        return Err(FactorError::BetaNotHomomorphism);
    }

    for &f in &m.idempotents() {
        if alpha[f] != beta_of(rep.dom(f)) {
            return Err(FactorError::NonCommutingSquare { idempotent: f });
        }
    }

    for s in 0..m.size() {
        let rho_s = rep.assign(s);
        for &u in opens {
            if u & !rho_s.domain() != 0 {
                continue;
            }
            for &v in opens {
                // Hypothesis A: β(U ∩ ρ(s)⁻¹(V ∩ ρ(s)(U)))·α(s) = β(U)·α(s)·β(V).
                let w = u & rho_s.preimage_of(v & rho_s.image_of(u));
                let lhs = target.mul(beta_of(w), alpha[s]);
                let rhs = target.mul(target.mul(beta_of(u), alpha[s]), beta_of(v));
                if lhs != rhs {
                    return Err(FactorError::HypothesisViolated {
                        which: 'A',
                        u,
                        v,
                        s,
                    });
                }
            }
            // Hypothesis B: α(s*)·β(U) = β(ρ(s)(U))·α(s*).
            let lhs = target.mul(alpha[m.inv(s)], beta_of(u));
            let rhs = target.mul(beta_of(rho_s.image_of(u)), alpha[m.inv(s)]);
            if lhs != rhs {
                return Err(FactorError::HypothesisViolated {
                    which: 'B',
                    u,
                    v: 0,
                    s,
                });
            }
        }
    }

    // ρ'[U,s] = β(U)·α(s); well-defined across each congruence class.
    let mut homomorphism = vec![0usize; mx.semigroup.size()];
    for (ci, class) in mx.classes.iter().enumerate() {
        let values: Vec<usize> = class
            .members
            .iter()
            .map(|fr| target.mul(beta_of(fr.open), alpha[fr.element]))
            .collect();
        assert!(
            values.windows(2).all(|w| w[0] == w[1]),
            "β(U)·α(s) disagrees within a congruence class"
        );
        homomorphism[ci] = values[0];
    }
    assert!(
        is_homomorphism(&homomorphism, &mx.semigroup, target),
        "ρ' is not a homomorphism although the hypotheses hold"
    );

    // The diagram pins ρ' on the classes [U,e] and [dom ρ(s), s].
    let e = m.unit().unwrap();
    let mut pinned: Vec<Option<usize>> = vec![None; mx.semigroup.size()];
    for &u in opens {
        let c = mx
            .class_of_restriction(&FormalRestriction { element: e, open: u })
            .unwrap();
        pinned[c] = Some(beta_of(u));
    }
    for s in 0..m.size() {
        let c = mx
            .class_of_restriction(&FormalRestriction {
                element: s,
                open: rep.dom(s),
            })
            .unwrap();
        match pinned[c] {
            Some(v) => assert_eq!(v, alpha[s], "pinned values clash"),
            None => pinned[c] = Some(alpha[s]),
        }
    }

    let uniqueness = if mx.semigroup.size() * target.size() <= UNIQUENESS_SEARCH_BUDGET {
        let count = count_commuting_homomorphisms(&mx.semigroup, target, &pinned, 2);
        assert_eq!(count, 1, "expected exactly one commuting homomorphism");
        UniquenessEvidence::ExhaustiveSearch
    } else {
        UniquenessEvidence::ProvedByConstruction
    };

    Ok(Factorization {
        homomorphism,
        uniqueness,
    })
}

/// Counts homomorphisms `from → to` that agree with `pinned`, stopping at
/// `cap`. Backtracking with early product-consistency pruning.
fn count_commuting_homomorphisms(
    from: &InverseSemigroup,
    to: &InverseSemigroup,
    pinned: &[Option<usize>],
    cap: usize,
) -> usize {
    fn consistent(
        from: &InverseSemigroup,
        to: &InverseSemigroup,
        img: &[usize],
        k: usize,
    ) -> bool {
        for a in 0..=k {
            for b in 0..=k {
                let p = from.mul(a, b);
                if p <= k && to.mul(img[a], img[b]) != img[p] {
                    return false;
                }
            }
        }
        true
    }
    fn go(
        from: &InverseSemigroup,
        to: &InverseSemigroup,
        pinned: &[Option<usize>],
        img: &mut Vec<usize>,
        k: usize,
        cap: usize,
        count: &mut usize,
    ) {
        if *count >= cap {
            return;
        }
        if k == from.size() {
            *count += 1;
            return;
        }
        let candidates: Vec<usize> = match pinned[k] {
            Some(v) => vec![v],
            None => (0..to.size()).collect(),
        };
        for v in candidates {
            img.push(v);
            if consistent(from, to, img, k) {
                go(from, to, pinned, img, k + 1, cap, count);
            }
            img.pop();
        }
    }
    let mut count = 0;
    go(from, to, pinned, &mut Vec::new(), 0, cap, &mut count);
    count
}
