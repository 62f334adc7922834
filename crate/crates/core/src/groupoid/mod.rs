//! Finite topological groupoids: axiom verification, the étale property in
//! both characterizations, local bisections, and the canonical full
//! representation on the object space.

mod bisect;
mod iso;

pub use bisect::{canonical_representation, local_bisections, BisectionMonoid};
pub use iso::{
    groupoid_isomorphic, groupoid_isomorphic_with_cap, verify_groupoid_iso, GroupoidIso,
    IsoSizeError, DEFAULT_ARROW_CAP,
};

use thiserror::Error;

use crate::bits;
use crate::fintop::{image_of, verify_topology, FiniteSpace};
use crate::report::Report;

/// A finite topological groupoid. The multiplication is stored as a total
/// function on an explicit composable-pair list, making the pullback `G2` a
/// first-class object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub objects: FiniteSpace,
    pub arrows: FiniteSpace,
    /// Domain of each arrow.
    pub dmap: Vec<usize>,
    /// Range of each arrow.
    pub rmap: Vec<usize>,
    /// Unit arrow at each object.
    pub umap: Vec<usize>,
    /// Inverse of each arrow.
    pub imap: Vec<usize>,
    /// Sorted list of `(x, y)` with `r(x) = d(y)`.
    pub composable: Vec<(usize, usize)>,
    /// Product of each composable pair, aligned with `composable`.
    pub mul: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("pair groupoids are only defined over discrete spaces")]
    NotDiscrete,
    #[error("the semigroup is not a group; it has {idempotents} idempotents")]
    NotAGroup { idempotents: usize },
}

impl FiniteGroupoid {
    /// Builds the composable list and products from closures over a
    /// complete arrow description.
    pub fn from_maps(
        objects: FiniteSpace,
        arrows: FiniteSpace,
        dmap: Vec<usize>,
        rmap: Vec<usize>,
        umap: Vec<usize>,
        imap: Vec<usize>,
        product: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut composable = Vec::new();
        let mut mul = Vec::new();
        for x in 0..arrows.point_count() {
            for y in 0..arrows.point_count() {
                if rmap[x] == dmap[y] {
                    composable.push((x, y));
                    mul.push(product(x, y));
                }
            }
        }
        FiniteGroupoid {
            objects,
            arrows,
            dmap,
            rmap,
            umap,
            imap,
            composable,
            mul,
        }
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.point_count()
    }

    pub fn object_count(&self) -> usize {
        self.objects.point_count()
    }

    /// Product of two arrows, `None` when not composable.
    pub fn compose(&self, x: usize, y: usize) -> Option<usize> {
        self.composable
            .binary_search(&(x, y))
            .ok()
            .map(|k| self.mul[k])
    }

    /// Bitset of unit arrows.
    pub fn unit_image(&self) -> u64 {
        bits::from_iter(self.umap.iter().copied())
    }
}

/// The pair groupoid `X × X` of a discrete space: arrow `x·n + y` runs from
/// `x` to `y`, `d` and `r` are the two projections.
pub fn pair_groupoid(space: &FiniteSpace) -> Result<FiniteGroupoid, GroupoidError> {
    let n = space.point_count();
    if space.opens().len() != 1 << n {
        return Err(GroupoidError::NotDiscrete);
    }
    let arrows = FiniteSpace::discrete(n * n);
    let dmap: Vec<usize> = (0..n * n).map(|a| a / n).collect();
    let rmap: Vec<usize> = (0..n * n).map(|a| a % n).collect();
    let umap: Vec<usize> = (0..n).map(|x| x * n + x).collect();
    let imap: Vec<usize> = (0..n * n).map(|a| (a % n) * n + a / n).collect();
    Ok(FiniteGroupoid::from_maps(
        space.clone(),
        arrows,
        dmap,
        rmap,
        umap,
        imap,
        |x, y| (x / n) * n + (y % n),
    ))
}

/// The unit groupoid of a space: only identity arrows, `G1 = G0`.
pub fn unit_groupoid(space: &FiniteSpace) -> FiniteGroupoid {
    let n = space.point_count();
    let ident: Vec<usize> = (0..n).collect();
    FiniteGroupoid::from_maps(
        space.clone(),
        space.clone(),
        ident.clone(),
        ident.clone(),
        ident.clone(),
        ident,
        |x, _| x,
    )
}

/// Disjoint union of groupoids; the second summand's objects and arrows are
/// shifted.
pub fn disjoint_union(g: &FiniteGroupoid, h: &FiniteGroupoid) -> FiniteGroupoid {
    let obj_shift = g.object_count();
    let arr_shift = g.arrow_count();
    let objects = g.objects.disjoint_union(&h.objects);
    let arrows = g.arrows.disjoint_union(&h.arrows);
    let dmap: Vec<usize> = g
        .dmap
        .iter()
        .copied()
        .chain(h.dmap.iter().map(|&x| x + obj_shift))
        .collect();
    let rmap: Vec<usize> = g
        .rmap
        .iter()
        .copied()
        .chain(h.rmap.iter().map(|&x| x + obj_shift))
        .collect();
    let umap: Vec<usize> = g
        .umap
        .iter()
        .copied()
        .chain(h.umap.iter().map(|&x| x + arr_shift))
        .collect();
    let imap: Vec<usize> = g
        .imap
        .iter()
        .copied()
        .chain(h.imap.iter().map(|&x| x + arr_shift))
        .collect();
    let g_clone = g.clone();
    let h_clone = h.clone();
    FiniteGroupoid::from_maps(objects, arrows, dmap, rmap, umap, imap, move |x, y| {
        if x < arr_shift {
            g_clone.compose(x, y).expect("composable within summand")
        } else {
            h_clone
                .compose(x - arr_shift, y - arr_shift)
                .expect("composable within summand")
                + arr_shift
        }
    })
}

/// A finite group as a one-object discrete groupoid.
pub fn group_as_groupoid(
    group: &crate::invsemi::InverseSemigroup,
) -> Result<FiniteGroupoid, GroupoidError> {
    let idem = group.idempotents();
    if idem.len() != 1 || group.unit().is_none() {
        return Err(GroupoidError::NotAGroup {
            idempotents: idem.len(),
        });
    }
    let n = group.size();
    let g = group.clone();
    Ok(FiniteGroupoid::from_maps(
        FiniteSpace::discrete(1),
        FiniteSpace::discrete(n),
        vec![0; n],
        vec![0; n],
        vec![group.unit().unwrap()],
        (0..n).map(|x| group.inv(x)).collect(),
        move |x, y| g.mul(x, y),
    ))
}

/// Checks every algebraic groupoid axiom and every continuity condition.
pub fn verify_groupoid(g: &FiniteGroupoid) -> Report {
    let mut report = Report::valid();
    let n_arr = g.arrow_count();
    let n_obj = g.object_count();

    report.absorb(prefixed(verify_topology(&g.objects), "objects"));
    report.absorb(prefixed(verify_topology(&g.arrows), "arrows"));

    let shape_ok = g.dmap.len() == n_arr
        && g.rmap.len() == n_arr
        && g.imap.len() == n_arr
        && g.umap.len() == n_obj
        && g.composable.len() == g.mul.len()
        && g.dmap.iter().all(|&x| x < n_obj)
        && g.rmap.iter().all(|&x| x < n_obj)
        && g.imap.iter().all(|&x| x < n_arr)
        && g.umap.iter().all(|&x| x < n_arr)
        && g.mul.iter().all(|&x| x < n_arr)
        && g.composable
            .iter()
            .all(|&(x, y)| x < n_arr && y < n_arr);
    if !shape_ok {
        report.push("well-formed", "table lengths or indices out of range");
        return report;
    }
    if !report.is_valid() {
        return report;
    }

    // The composable list must be exactly {(x,y) : r(x) = d(y)}, sorted.
    let mut expected: Vec<(usize, usize)> = Vec::new();
    for x in 0..n_arr {
        for y in 0..n_arr {
            if g.rmap[x] == g.dmap[y] {
                expected.push((x, y));
            }
        }
    }
    if g.composable != expected {
        report.push(
            "composable-pairs",
            "stored composable-pair list differs from {(x,y) : r(x) = d(y)}",
        );
        return report;
    }

    for a in 0..n_obj {
        if g.dmap[g.umap[a]] != a || g.rmap[g.umap[a]] != a {
            report.push("unit-endpoints", format!("d(1_{a}) or r(1_{a}) ≠ {a}"));
        }
    }

    for x in 0..n_arr {
        match g.compose(g.umap[g.dmap[x]], x) {
            Some(y) if y == x => {}
            _ => report.push("left-unit", format!("1_d({x})·{x} ≠ {x}")),
        }
        match g.compose(x, g.umap[g.rmap[x]]) {
            Some(y) if y == x => {}
            _ => report.push("right-unit", format!("{x}·1_r({x}) ≠ {x}")),
        }
    }

    for (k, &(x, y)) in g.composable.iter().enumerate() {
        let xy = g.mul[k];
        if g.dmap[xy] != g.dmap[x] {
            report.push("domain-of-product", format!("d({x}·{y}) ≠ d({x})"));
        }
        if g.rmap[xy] != g.rmap[y] {
            report.push("range-of-product", format!("r({x}·{y}) ≠ r({y})"));
        }
    }

    'assoc: for &(x, y) in &g.composable {
        let xy = match g.compose(x, y) {
            Some(v) => v,
            None => continue,
        };
        for z in 0..n_arr {
            if g.rmap[y] != g.dmap[z] {
                continue;
            }
            let yz = g.compose(y, z).unwrap();
            if g.compose(xy, z) != g.compose(x, yz) {
                report.push(
                    "associativity",
                    format!("({x}·{y})·{z} ≠ {x}·({y}·{z})"),
                );
                break 'assoc;
            }
        }
    }

    for x in 0..n_arr {
        let xi = g.imap[x];
        if g.imap[xi] != x {
            report.push("inverse-involution", format!("({x}⁻¹)⁻¹ ≠ {x}"));
        }
        if g.dmap[xi] != g.rmap[x] || g.rmap[xi] != g.dmap[x] {
            report.push("inverse-endpoints", format!("endpoints of {x}⁻¹ are wrong"));
            continue;
        }
        if g.compose(x, xi) != Some(g.umap[g.dmap[x]]) {
            report.push("inverse-right", format!("{x}·{x}⁻¹ ≠ 1_d({x})"));
        }
        if g.compose(xi, x) != Some(g.umap[g.rmap[x]]) {
            report.push("inverse-left", format!("{x}⁻¹·{x} ≠ 1_r({x})"));
        }
    }

    // Continuity of d, r, i: preimage of every open is open (literal
    // definition; the families are explicit).
    for (name, f, codomain) in [
        ("d-continuous", &g.dmap, &g.objects),
        ("r-continuous", &g.rmap, &g.objects),
        ("i-continuous", &g.imap, &g.arrows),
    ] {
        for &open in codomain.opens() {
            let pre = crate::fintop::preimage_of(f, n_arr, open);
            if !g.arrows.is_open(pre) {
                report.push(name, format!("preimage of {} is not open", bits::show(open)));
                break;
            }
        }
    }
    for &open in g.arrows.opens() {
        let pre = crate::fintop::preimage_of(&g.umap, n_obj, open);
        if !g.objects.is_open(pre) {
            report.push(
                "u-continuous",
                format!("preimage of {} is not open", bits::show(open)),
            );
            break;
        }
    }

    // Continuity of multiplication on G2 with the subspace topology of the
    // product: the minimal open of (x, y) in G2 is
    // (minopen(x) × minopen(y)) ∩ G2, so continuity says every composable
    // pair in that square multiplies into minopen(x·y).
    let arrow_min = g.arrows.minimal_opens();
    'mulcont: for (k, &(x, y)) in g.composable.iter().enumerate() {
        let target = arrow_min[g.mul[k]];
        for xp in bits::iter(arrow_min[x]) {
            for yp in bits::iter(arrow_min[y]) {
                if let Some(p) = g.compose(xp, yp) {
                    if !bits::contains(target, p) {
                        report.push(
                            "m-continuous",
                            format!(
                                "product of ({xp},{yp}) near ({x},{y}) leaves the minimal open of {}",
                                g.mul[k]
                            ),
                        );
                        break 'mulcont;
                    }
                }
            }
        }
    }

    report
}

fn prefixed(mut r: Report, prefix: &str) -> Report {
    for v in &mut r.violations {
        v.axiom = format!("{prefix}-{}", v.axiom);
    }
    r
}

/// The étale property, decided through both characterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaleReport {
    pub etale: bool,
    /// d is an open map and u(G0) is open in G1.
    pub by_open_unit: bool,
    /// Every arrow has an open neighbourhood on which d restricts to a
    /// homeomorphism onto an open set.
    pub by_local_homeo: bool,
}

/// Computes both characterizations independently and asserts they agree;
/// a mismatch would falsify the cited equivalence at finite scale, so it is
/// a hard internal error.
pub fn is_etale(g: &FiniteGroupoid) -> EtaleReport {
    // (a) images of all opens under d are open, and u(G0) is open.
    let d_open = g
        .arrows
        .opens()
        .iter()
        .all(|&v| g.objects.is_open(image_of(&g.dmap, v)));
    let by_open_unit = d_open && g.arrows.is_open(g.unit_image());

    // (b) If any open neighbourhood of an arrow works, its minimal open
    // works: injectivity restricts, and the homeomorphism property passes
    // to open subsets. A bijection between finite spaces is a
    // homeomorphism iff it maps minimal opens onto minimal opens.
    let arrow_min = g.arrows.minimal_opens();
    let obj_min = g.objects.minimal_opens();
    let by_local_homeo = (0..g.arrow_count()).all(|a| {
        let w = arrow_min[a];
        let image = image_of(&g.dmap, w);
        if bits::count(image) != bits::count(w) || !g.objects.is_open(image) {
            return false;
        }
        bits::iter(w).all(|x| image_of(&g.dmap, arrow_min[x] & w) == obj_min[g.dmap[x]] & image)
    });

    assert_eq!(
        by_open_unit, by_local_homeo,
        "the two étale characterizations disagree on a valid groupoid"
    );
    EtaleReport {
        etale: by_open_unit,
        by_open_unit,
        by_local_homeo,
    }
}
