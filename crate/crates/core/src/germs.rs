//! The germ construction for full, unital, and wide representations,
//! germ-groupoid assembly, the equivalence and round-trip theorems, and
//! compatibly prime filters.
//!
//! Arrows are pairs (base point, germ class), never bare classes, so
//! non-T0 base spaces work without aliasing. For a wide non-unital
//! representation the construction goes through the adjoined-unit monoid
//! `S_e`; the stored classes are intersected back with `S`, which loses
//! nothing (the unit only enriches germs that contain idempotents). A
//! direct in-`S` germ computation serves as a cross-check oracle in the
//! tests.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::bits;
use crate::fintop::generate_topology;
use crate::groupoid::{
    canonical_representation, verify_groupoid_iso, BisectionMonoid, FiniteGroupoid, GroupoidIso,
};
use crate::invsemi::{OrderData, PrimalityContext};
use crate::repr::{mx_quotient, MxQuotient, Representation, ReprError};

/// A base point together with the set of semigroup elements locally equal
/// to the defining element at that point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Germ {
    pub base: usize,
    pub class: Vec<usize>,
}

/// Which case of the construction produced a germ groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Full,
    Unital,
    Wide,
}

/// An étale groupoid assembled from germs, with the dictionary from arrow
/// indices back to (base point, class) pairs.
#[derive(Debug, Clone)]
#[derive(PartialEq)]
pub struct GermGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Parallel to the groupoid's arrow indices.
    pub arrows: Vec<Germ>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("representation is not wide: point {point} is uncovered")]
    NotWide { point: usize },
    #[error("point {point} is outside the domain of ρ({element})")]
    PointOutsideDomain { element: usize, point: usize },
    #[error("germ groupoid would have {arrows} arrows, beyond the 64-arrow cap")]
    TooLarge { arrows: usize },
    #[error(transparent)]
    Repr(#[from] ReprError),
}

/// The germ of `s` at `x`: all `t` with `f·t = f·s` for some idempotent
/// `f`, where `x` lies in the domains of both `ρ(t)` and `ρ(f)`. Computed
/// by exhaustive search over `(t, f)` pairs.
pub fn germ_at(rep: &Representation, s: usize, x: usize) -> Result<Germ, GermError> {
    if !bits::contains(rep.dom(s), x) {
        return Err(GermError::PointOutsideDomain { element: s, point: x });
    }
    let semigroup = rep.semigroup();
    let idem: Vec<usize> = semigroup
        .idempotents()
        .into_iter()
        .filter(|&f| bits::contains(rep.dom(f), x))
        .collect();
    let class: Vec<usize> = (0..semigroup.size())
        .filter(|&t| {
            bits::contains(rep.dom(t), x)
                && idem
                    .iter()
                    .any(|&f| semigroup.mul(f, t) == semigroup.mul(f, s))
        })
        .collect();
    Ok(Germ { base: x, class })
}

/// Internal handle kept alongside a built germ groupoid: lets the
/// equivalence and round-trip maps translate (point, element) pairs to
/// arrow indices.
pub(crate) struct GermContext {
    /// The representation the construction ran on (`S`, `S_e`, or `M_X`).
    pub monoid_rep: Representation,
    /// `class_id[x][t]`: local class of element `t` at point `x`, or MAX.
    class_id: Vec<Vec<usize>>,
    /// `(x, local class id) → arrow index`.
    arrow_index: HashMap<(usize, usize), usize>,
}

impl GermContext {
    /// Arrow representing the germ of `elem` at `x`.
    pub fn arrow_of(&self, x: usize, elem: usize) -> Option<usize> {
        let class = *self.class_id.get(x)?.get(elem)?;
        if class == usize::MAX {
            return None;
        }
        self.arrow_index.get(&(x, class)).copied()
    }
}

/// Builds the germ groupoid of a wide representation, with units obtained
/// via the adjoined-unit monoid when the representation is not unital.
pub fn germ_groupoid(rep: &Representation) -> Result<GermGroupoid, GermError> {
    build(rep).map(|(g, _)| g)
}

pub(crate) fn build(rep: &Representation) -> Result<(GermGroupoid, GermContext), GermError> {
    let classification = rep.classify();
    let (monoid_rep, label_size, provenance) = if classification.is_unital {
        let provenance = if classification.is_full {
            Provenance::Full
        } else {
            Provenance::Unital
        };
        (rep.clone(), rep.semigroup().size(), provenance)
    } else if classification.is_wide {
        (
            rep.extend_to_unit()?,
            rep.semigroup().size(),
            Provenance::Wide,
        )
    } else {
        return Err(GermError::NotWide {
            point: rep.wideness_witness().expect("non-wide has a witness"),
        });
    };

    let monoid = monoid_rep.semigroup();
    let points = monoid_rep.space().point_count();
    let size = monoid.size();
    let idem = monoid.idempotents();

    // Per point: partition the elements whose domain contains the point by
    // the witnessed-agreement relation (an equivalence: two witnesses
    // compose to a common one).
    let mut class_id: Vec<Vec<usize>> = vec![vec![usize::MAX; size]; points];
    let mut members: Vec<Vec<Vec<usize>>> = vec![Vec::new(); points];
    for x in 0..points {
        let elems: Vec<usize> = (0..size)
            .filter(|&t| bits::contains(monoid_rep.dom(t), x))
            .collect();
        let idem_x: Vec<usize> = idem
            .iter()
            .copied()
            .filter(|&f| bits::contains(monoid_rep.dom(f), x))
            .collect();
        // Agreement with the class representative is the defining test;
        // this grouping relies on the relation being transitive, which the
        // self-consistency tests check independently.
        for &t in &elems {
            let found = members[x].iter().enumerate().find(|(_, class)| {
                let rep_elem = class[0];
                idem_x
                    .iter()
                    .any(|&f| monoid.mul(f, t) == monoid.mul(f, rep_elem))
            });
            match found {
                Some((cid, _)) => {
                    class_id[x][t] = cid;
                    members[x][cid].push(t);
                }
                None => {
                    class_id[x][t] = members[x].len();
                    members[x].push(vec![t]);
                }
            }
        }
    }

    // Arrows sorted by (base, full class).
    let mut arrow_keys: Vec<(usize, Vec<usize>)> = Vec::new();
    for (x, classes) in members.iter().enumerate() {
        for class in classes {
            arrow_keys.push((x, class.clone()));
        }
    }
    arrow_keys.sort();
    let n_arrows = arrow_keys.len();
    if n_arrows > 64 {
        return Err(GermError::TooLarge { arrows: n_arrows });
    }
    let mut arrow_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, (x, class)) in arrow_keys.iter().enumerate() {
        arrow_index.insert((*x, class_id[*x][class[0]]), i);
    }
    let ctx = GermContext {
        monoid_rep: monoid_rep.clone(),
        class_id,
        arrow_index,
    };

    // Structure maps; the range and the products are independent of the
    // representative because members of a class agree near the base point.
    let dmap: Vec<usize> = arrow_keys.iter().map(|(x, _)| *x).collect();
    let rmap: Vec<usize> = arrow_keys
        .iter()
        .map(|(x, class)| monoid_rep.assign(class[0]).apply(*x).unwrap())
        .collect();
    let unit = monoid.unit().expect("construction monoid is unital");
    let umap: Vec<usize> = (0..points)
        .map(|x| ctx.arrow_of(x, unit).expect("unit germ exists everywhere"))
        .collect();
    let imap: Vec<usize> = arrow_keys
        .iter()
        .enumerate()
        .map(|(i, (_, class))| {
            ctx.arrow_of(rmap[i], monoid.inv(class[0]))
                .expect("inverse germ exists")
        })
        .collect();

    let mut composable: Vec<(usize, usize)> = Vec::new();
    let mut mul: Vec<usize> = Vec::new();
    for (i, (x, class_a)) in arrow_keys.iter().enumerate() {
        for (j, (y, class_b)) in arrow_keys.iter().enumerate() {
            if rmap[i] != *y {
                continue;
            }
            let product = monoid.mul(class_a[0], class_b[0]);
            let target = ctx
                .arrow_of(*x, product)
                .expect("product germ exists at the base point");
            composable.push((i, j));
            mul.push(target);
        }
    }

    // Topology: U_s basis for full provenance, V_{s,U} otherwise (with s
    // ranging over the original semigroup in the wide case).
    let mut basis: Vec<u64> = Vec::new();
    match provenance {
        Provenance::Full => {
            for s in 0..size {
                let set = bits::from_iter(
                    bits::iter(monoid_rep.dom(s)).map(|x| ctx.arrow_of(x, s).unwrap()),
                );
                basis.push(set);
            }
        }
        Provenance::Unital | Provenance::Wide => {
            for s in 0..label_size {
                let dom = monoid_rep.dom(s);
                for &u in monoid_rep.space().opens() {
                    if u & !dom == 0 {
                        let set = bits::from_iter(
                            bits::iter(u).map(|x| ctx.arrow_of(x, s).unwrap()),
                        );
                        basis.push(set);
                    }
                }
            }
        }
    }
    let arrows_space = generate_topology(n_arrows, &basis);

    // Dictionary classes are intersected with the original semigroup; by
    // the unit-adjunction theorem this is injective per base point.
    let arrows: Vec<Germ> = arrow_keys
        .iter()
        .map(|(x, class)| Germ {
            base: *x,
            class: class.iter().copied().filter(|&t| t < label_size).collect(),
        })
        .collect();
    {
        let mut seen = BTreeSet::new();
        for germ in &arrows {
            assert!(
                seen.insert((germ.base, germ.class.clone())),
                "distinct extended germs collapsed after dropping the unit"
            );
            assert!(!germ.class.is_empty(), "a germ lost all labels");
        }
    }

    let groupoid = FiniteGroupoid {
        objects: rep.space().clone(),
        arrows: arrows_space,
        dmap,
        rmap,
        umap,
        imap,
        composable,
        mul,
    };
    Ok((
        GermGroupoid {
            groupoid,
            arrows,
            provenance,
        },
        ctx,
    ))
}

/// For a full representation: the sheaf topology generated by the sets
/// `U_s` coincides with the one generated by the sets `V_{s,U}`. Tested,
/// not assumed.
pub fn germ_topologies_coincide(rep: &Representation) -> bool {
    let (gg, ctx) = match build(rep) {
        Ok(pair) => pair,
        Err(_) => return false,
    };
    let monoid_rep = &ctx.monoid_rep;
    let size = monoid_rep.semigroup().size();
    let n_arrows = gg.groupoid.arrow_count();
    let mut us_basis = Vec::new();
    let mut v_basis = Vec::new();
    for s in 0..size {
        let dom = monoid_rep.dom(s);
        us_basis.push(bits::from_iter(
            bits::iter(dom).map(|x| ctx.arrow_of(x, s).unwrap()),
        ));
        for &u in monoid_rep.space().opens() {
            if u & !dom == 0 {
                v_basis.push(bits::from_iter(
                    bits::iter(u).map(|x| ctx.arrow_of(x, s).unwrap()),
                ));
            }
        }
    }
    generate_topology(n_arrows, &us_basis) == generate_topology(n_arrows, &v_basis)
}

/// The subspace topology induced on the unit arrows agrees with the
/// original topology of the object space.
pub fn object_subspace_coincides(gg: &GermGroupoid) -> bool {
    let g = &gg.groupoid;
    let unit_set = g.unit_image();
    let traces: BTreeSet<u64> = g
        .arrows
        .opens()
        .iter()
        .map(|&o| {
            bits::from_iter(
                (0..g.object_count()).filter(|&x| bits::contains(o & unit_set, g.umap[x])),
            )
        })
        .collect();
    let expected: BTreeSet<u64> = g.objects.opens().iter().copied().collect();
    traces == expected
}

/// Isomorphism witness for `Germs(S,ρ) ≅ Germs(S_e,ρ_e)`.
#[derive(Debug)]
pub struct WideUnitalEquivalence {
    pub wide: GermGroupoid,
    pub unital: GermGroupoid,
    /// From the wide-side groupoid to the unital-side groupoid; the
    /// identity on base points.
    pub iso: GroupoidIso,
}

/// Builds the germ groupoids of `(S, ρ)` and `(S_e, ρ_e)` and exhibits the
/// arrow bijection (identity on base points, classes enriched by the unit).
pub fn equiv_wide_unital(rep: &Representation) -> Result<WideUnitalEquivalence, GermError> {
    let (wide, _wide_ctx) = build(rep)?;
    let extended = rep.extend_to_unit()?;
    let (unital, unital_ctx) = build(&extended)?;

    let arrow_map: Vec<usize> = wide
        .arrows
        .iter()
        .map(|germ| {
            unital_ctx
                .arrow_of(germ.base, germ.class[0])
                .expect("wide germ corresponds to an extended germ")
        })
        .collect();
    let object_map: Vec<usize> = (0..wide.groupoid.object_count()).collect();
    let iso = GroupoidIso {
        object_map,
        arrow_map,
    };
    assert!(
        verify_groupoid_iso(&wide.groupoid, &unital.groupoid, &iso),
        "unit adjunction failed to produce an isomorphism of germ groupoids"
    );
    Ok(WideUnitalEquivalence { wide, unital, iso })
}

/// Isomorphism witness for `Germs(M,ρ) ≅ Germs(M_X,ρ_X)`.
#[derive(Debug)]
pub struct UnitalMxEquivalence {
    pub germ_m: GermGroupoid,
    pub germ_mx: GermGroupoid,
    pub mx: MxQuotient,
    /// From the `M_X` side to the `M` side: `germ_x [U,s] ↦ germ_x s`.
    pub iso: GroupoidIso,
}

/// Builds both germ groupoids of a unital representation and the canonical
/// germ-level bijection, checking it commutes with all structure maps and
/// matches the basic opens `V_{[U,s]} ↔ V_{s,U}`.
pub fn equiv_unital_mx(rep: &Representation) -> Result<UnitalMxEquivalence, GermError> {
    let (germ_m, m_ctx) = build(rep)?;
    let mx = mx_quotient(rep)?;
    let (germ_mx, mx_ctx) = build(&mx.representation)?;

    let arrow_map: Vec<usize> = germ_mx
        .arrows
        .iter()
        .map(|germ| {
            let class_index = germ.class[0];
            let fr = mx.classes[class_index].representative;
            m_ctx
                .arrow_of(germ.base, fr.element)
                .expect("germ of [U,s] maps to the germ of s")
        })
        .collect();
    let object_map: Vec<usize> = (0..germ_mx.groupoid.object_count()).collect();
    let iso = GroupoidIso {
        object_map,
        arrow_map,
    };
    assert!(
        verify_groupoid_iso(&germ_mx.groupoid, &germ_m.groupoid, &iso),
        "M_X germ groupoid is not isomorphic to the M germ groupoid"
    );

    // Basic opens correspond: V_{[U,s]} maps exactly onto V_{s,U}.
    for (ci, class) in mx.classes.iter().enumerate() {
        let fr = class.representative;
        let v_mx: BTreeSet<usize> = bits::iter(fr.open)
            .map(|x| mx_ctx.arrow_of(x, ci).unwrap())
            .collect();
        let expected: BTreeSet<usize> = bits::iter(fr.open)
            .map(|x| m_ctx.arrow_of(x, fr.element).unwrap())
            .collect();
        let image: BTreeSet<usize> = v_mx.iter().map(|&a| iso.arrow_map[a]).collect();
        assert_eq!(image, expected, "basic open V_[U,s] does not match V_s,U");
    }

    Ok(UnitalMxEquivalence {
        germ_m,
        germ_mx,
        mx,
        iso,
    })
}

/// Result of rebuilding an étale groupoid from its bisections.
#[derive(Debug)]
pub struct GroupoidRoundtrip {
    pub germ: GermGroupoid,
    pub bisections: BisectionMonoid,
    /// From the input groupoid to its germ groupoid: arrow `x` goes to
    /// (d(x), germ of any bisection containing `x`).
    pub iso: GroupoidIso,
}

/// `Germs(I(G), ρ_G) ≅ G`: builds the germ groupoid of the canonical full
/// representation and the explicit isomorphism, asserting the germ is
/// independent of the chosen bisection.
pub fn roundtrip_groupoid(g: &FiniteGroupoid) -> Result<GroupoidRoundtrip, GermError> {
    let (monoid, rep) = canonical_representation(g);
    let (germ, ctx) = build(&rep)?;

    let arrow_map: Vec<usize> = (0..g.arrow_count())
        .map(|x| {
            let holders: Vec<usize> = (0..monoid.bisections.len())
                .filter(|&v| bits::contains(monoid.bisections[v], x))
                .collect();
            assert!(!holders.is_empty(), "every arrow lies in some bisection");
            let arrows: BTreeSet<usize> = holders
                .iter()
                .map(|&v| ctx.arrow_of(g.dmap[x], v).expect("bisection germ"))
                .collect();
            assert_eq!(
                arrows.len(),
                1,
                "germ depends on the chosen bisection through arrow {x}"
            );
            *arrows.iter().next().unwrap()
        })
        .collect();
    let iso = GroupoidIso {
        object_map: (0..g.object_count()).collect(),
        arrow_map,
    };
    assert!(
        verify_groupoid_iso(g, &germ.groupoid, &iso),
        "groupoid is not isomorphic to the germs of its bisections"
    );
    Ok(GroupoidRoundtrip {
        germ,
        bisections: monoid,
        iso,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundtripError {
    #[error("representation is not full")]
    NotFull,
    #[error("semigroup is not complete; joinless compatible set {missing:?}")]
    NotComplete { missing: Option<Vec<usize>> },
    #[error("semigroup is not infinitely distributive; witness {witness:?}")]
    NotDistributive { witness: Option<(usize, Vec<usize>)> },
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// Result of rebuilding a complete inverse semigroup from its germ
/// groupoid.
#[derive(Debug)]
pub struct SemigroupRoundtrip {
    pub germ: GermGroupoid,
    pub bisections: BisectionMonoid,
    /// `s ↦ U_s`, an isomorphism onto the bisection monoid.
    pub iso: Vec<usize>,
}

/// `I(Germs(S,ρ)) ≅ S` for a complete, infinitely distributive `S` with a
/// full representation: the map `s ↦ U_s` is verified to be a semigroup
/// isomorphism commuting with the two representations, with surjectivity
/// witnessed by expressing every bisection as the join of a compatible set.
pub fn roundtrip_semigroup(rep: &Representation) -> Result<SemigroupRoundtrip, RoundtripError> {
    if !rep.classify().is_full {
        return Err(RoundtripError::NotFull);
    }
    let s = rep.semigroup();
    let completeness = crate::invsemi::complete_report(s);
    if !completeness.complete {
        return Err(RoundtripError::NotComplete {
            missing: completeness.missing,
        });
    }
    let distributivity = crate::invsemi::distributive_report(s);
    if !distributivity.distributive {
        return Err(RoundtripError::NotDistributive {
            witness: distributivity.witness,
        });
    }

    let (germ, ctx) = build(rep)?;
    let (bisections, germ_rep) = canonical_representation(&germ.groupoid);

    let u_sets: Vec<u64> = (0..s.size())
        .map(|el| {
            bits::from_iter(bits::iter(rep.dom(el)).map(|x| ctx.arrow_of(x, el).unwrap()))
        })
        .collect();
    let iso: Vec<usize> = u_sets
        .iter()
        .map(|&set| {
            bisections
                .index_of(set)
                .expect("U_s is an open bisection of the germ groupoid")
        })
        .collect();

    // Injectivity (from infinite distributivity, checked directly) and the
    // homomorphism property.
    {
        let mut seen = vec![false; bisections.semigroup.size()];
        for &i in &iso {
            assert!(!seen[i], "s ↦ U_s is not injective");
            seen[i] = true;
        }
    }
    assert!(
        crate::invsemi::is_homomorphism(&iso, s, &bisections.semigroup),
        "s ↦ U_s is not a homomorphism"
    );

    // Surjectivity: every bisection is ∨Z for the compatible set
    // Z = {s : U_s ⊆ B}.
    let data = OrderData::new(s);
    for (bi, &b) in bisections.bisections.iter().enumerate() {
        let z: Vec<usize> = (0..s.size()).filter(|&el| u_sets[el] & !b == 0).collect();
        for (i, &a) in z.iter().enumerate() {
            for &c in &z[i + 1..] {
                assert!(
                    data.compatible(a, c),
                    "cover of a bisection is not compatible"
                );
            }
        }
        let join = data.join_of(&z).expect("complete semigroup");
        assert_eq!(
            u_sets[join], b,
            "bisection {bi} is not the join of its basic cover"
        );
    }

    // Commutation with the representations: ρ(s) = ρ_G(U_s).
    for el in 0..s.size() {
        assert_eq!(
            rep.assign(el),
            germ_rep.assign(iso[el]),
            "U_(-) does not commute with the representations"
        );
    }

    Ok(SemigroupRoundtrip {
        germ,
        bisections,
        iso,
    })
}

/// Outcome of comparing germ classes with compatibly prime filters.
#[derive(Debug)]
pub struct CompatiblyPrimeReport {
    /// Distinct germ classes, as sorted element sets.
    pub germ_class_sets: Vec<Vec<usize>>,
    /// Compatibly prime filters under the downward-directed definition.
    pub prime_filters: Vec<Vec<usize>>,
    /// Set-level equality of the two collections.
    pub matches: bool,
    /// Compatibly prime filters under the meet-closed definition, when
    /// they differ from the directed ones.
    pub alternative_divergence: Option<Vec<Vec<usize>>>,
}

/// Enumerates the compatibly prime filters of a complete semigroup with a
/// full representation and matches them against the germ classes. Both
/// candidate filter definitions are computed; any divergence is reported,
/// not hidden.
pub fn compatibly_prime_report(
    rep: &Representation,
) -> Result<CompatiblyPrimeReport, RoundtripError> {
    if !rep.classify().is_full {
        return Err(RoundtripError::NotFull);
    }
    let s = rep.semigroup();
    let completeness = crate::invsemi::complete_report(s);
    if !completeness.complete {
        return Err(RoundtripError::NotComplete {
            missing: completeness.missing,
        });
    }
    let distributivity = crate::invsemi::distributive_report(s);
    if !distributivity.distributive {
        return Err(RoundtripError::NotDistributive {
            witness: distributivity.witness,
        });
    }

    let (germ, _) = build(rep)?;
    let germ_class_sets: Vec<Vec<usize>> = {
        let set: BTreeSet<Vec<usize>> = germ.arrows.iter().map(|g| g.class.clone()).collect();
        set.into_iter().collect()
    };

    let primality = PrimalityContext::new(s);
    let prime_filters: Vec<Vec<usize>> =
        crate::invsemi::filters(s, crate::invsemi::FilterVariant::DownwardDirected)
            .into_iter()
            .filter(|f| primality.is_prime(f))
            .collect();
    let prime_meet_closed: Vec<Vec<usize>> =
        crate::invsemi::filters(s, crate::invsemi::FilterVariant::MeetClosed)
            .into_iter()
            .filter(|f| primality.is_prime(f))
            .collect();

    let matches = germ_class_sets == prime_filters;
    let alternative_divergence = if prime_meet_closed != prime_filters {
        Some(prime_meet_closed)
    } else {
        None
    };
    Ok(CompatiblyPrimeReport {
        germ_class_sets,
        prime_filters,
        matches,
        alternative_divergence,
    })
}
