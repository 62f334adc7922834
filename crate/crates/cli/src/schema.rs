//! The on-disk JSON schema: one self-describing object per structure with
//! a `kind` discriminator, schema version field `v: 1`, explicit integer
//! indices, and bitsets as sorted integer arrays.
//!
//! Declared invariants are re-verified on load, never trusted.

use germoid_core::bits;
use germoid_core::fintop::FiniteSpace;
use germoid_core::groupoid::FiniteGroupoid;
use germoid_core::invsemi::{InverseSemigroup, PartialBijection};
use germoid_core::report::Report;
use germoid_core::repr::Representation;
use germoid_core::coarse::CoarseStructure;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub v: u32,
    pub kind: String,
    pub points: usize,
    pub opens: Vec<Vec<usize>>,
    /// Optional display names for points, used by the DOT export.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupFile {
    pub v: u32,
    pub kind: String,
    pub size: usize,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub unit: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialBijectionBody {
    /// Sorted domain points.
    pub domain: Vec<usize>,
    /// Images aligned with `domain`.
    pub image: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudogroupFile {
    pub v: u32,
    pub kind: String,
    pub space: SpaceFile,
    pub elements: Vec<PartialBijectionBody>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub v: u32,
    pub kind: String,
    pub semigroup: SemigroupFile,
    pub space: SpaceFile,
    pub assign: Vec<PartialBijectionBody>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidFile {
    pub v: u32,
    pub kind: String,
    pub objects: SpaceFile,
    pub arrows: SpaceFile,
    pub d: Vec<usize>,
    pub r: Vec<usize>,
    pub u: Vec<usize>,
    pub i: Vec<usize>,
    /// Composable pairs with their products: `[x, y, xy]`, sorted.
    pub mul: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoarseFile {
    pub v: u32,
    pub kind: String,
    pub points: usize,
    /// Controlled sets as sorted lists of `[x, y]` pairs.
    pub controlled: Vec<Vec<[usize; 2]>>,
}

/// A parsed structure file of any kind.
#[derive(Debug, Clone)]
pub enum StructureFile {
    Space(SpaceFile),
    Semigroup(SemigroupFile),
    Pseudogroup(PseudogroupFile),
    Representation(RepresentationFile),
    Groupoid(GroupoidFile),
    Coarse(CoarseFile),
}

impl StructureFile {
    pub fn kind(&self) -> &'static str {
        match self {
            StructureFile::Space(_) => "space",
            StructureFile::Semigroup(_) => "semigroup",
            StructureFile::Pseudogroup(_) => "pseudogroup",
            StructureFile::Representation(_) => "representation",
            StructureFile::Groupoid(_) => "groupoid",
            StructureFile::Coarse(_) => "coarse",
        }
    }
}

/// Failure modes of loading: syntactic problems exit 2, semantic ones 1.
#[derive(Debug)]
pub enum LoadError {
    Parse(String),
    Invalid(Report),
}

pub fn parse_structure(text: &str) -> Result<StructureFile, LoadError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| LoadError::Parse("missing \"kind\" field".into()))?
        .to_string();
    let version = value.get("v").and_then(|v| v.as_u64());
    if version != Some(SCHEMA_VERSION as u64) {
        return Err(LoadError::Parse(format!(
            "unsupported schema version {version:?}, expected {SCHEMA_VERSION}"
        )));
    }
    let parse = |e: serde_json::Error| LoadError::Parse(e.to_string());
    let file = match kind.as_str() {
        "space" => StructureFile::Space(serde_json::from_value(value).map_err(parse)?),
        "semigroup" => StructureFile::Semigroup(serde_json::from_value(value).map_err(parse)?),
        "pseudogroup" => StructureFile::Pseudogroup(serde_json::from_value(value).map_err(parse)?),
        "representation" => {
            StructureFile::Representation(serde_json::from_value(value).map_err(parse)?)
        }
        "groupoid" => StructureFile::Groupoid(serde_json::from_value(value).map_err(parse)?),
        "coarse" => StructureFile::Coarse(serde_json::from_value(value).map_err(parse)?),
        other => return Err(LoadError::Parse(format!("unknown kind {other:?}"))),
    };
    Ok(file)
}

pub fn to_json(file: &StructureFile) -> String {
    let text = match file {
        StructureFile::Space(f) => serde_json::to_string_pretty(f),
        StructureFile::Semigroup(f) => serde_json::to_string_pretty(f),
        StructureFile::Pseudogroup(f) => serde_json::to_string_pretty(f),
        StructureFile::Representation(f) => serde_json::to_string_pretty(f),
        StructureFile::Groupoid(f) => serde_json::to_string_pretty(f),
        StructureFile::Coarse(f) => serde_json::to_string_pretty(f),
    };
    let mut text = text.expect("schema types serialize");
    text.push('\n');
    text
}

// ---- conversions: core -> file ----

pub fn space_file(space: &FiniteSpace) -> SpaceFile {
    SpaceFile {
        v: SCHEMA_VERSION,
        kind: "space".into(),
        points: space.point_count(),
        opens: space.opens().iter().map(|&o| bits::to_vec(o)).collect(),
        names: None,
    }
}

pub fn semigroup_file(s: &InverseSemigroup) -> SemigroupFile {
    let n = s.size();
    SemigroupFile {
        v: SCHEMA_VERSION,
        kind: "semigroup".into(),
        size: n,
        mul: (0..n)
            .map(|a| (0..n).map(|b| s.mul(a, b)).collect())
            .collect(),
        inv: (0..n).map(|a| s.inv(a)).collect(),
        unit: s.unit(),
    }
}

pub fn bijection_body(h: &PartialBijection) -> PartialBijectionBody {
    let graph = h.graph();
    PartialBijectionBody {
        domain: graph.iter().map(|&(x, _)| x).collect(),
        image: graph.iter().map(|&(_, y)| y).collect(),
    }
}

pub fn representation_file(rep: &Representation) -> RepresentationFile {
    RepresentationFile {
        v: SCHEMA_VERSION,
        kind: "representation".into(),
        semigroup: semigroup_file(rep.semigroup()),
        space: space_file(rep.space()),
        assign: rep.assignments().iter().map(bijection_body).collect(),
    }
}

pub fn pseudogroup_file(
    space: &FiniteSpace,
    elements: &[PartialBijection],
) -> PseudogroupFile {
    PseudogroupFile {
        v: SCHEMA_VERSION,
        kind: "pseudogroup".into(),
        space: space_file(space),
        elements: elements.iter().map(bijection_body).collect(),
    }
}

pub fn groupoid_file(g: &FiniteGroupoid) -> GroupoidFile {
    GroupoidFile {
        v: SCHEMA_VERSION,
        kind: "groupoid".into(),
        objects: space_file(&g.objects),
        arrows: space_file(&g.arrows),
        d: g.dmap.clone(),
        r: g.rmap.clone(),
        u: g.umap.clone(),
        i: g.imap.clone(),
        mul: g
            .composable
            .iter()
            .zip(&g.mul)
            .map(|(&(x, y), &xy)| [x, y, xy])
            .collect(),
    }
}

pub fn coarse_file(e: &CoarseStructure) -> CoarseFile {
    CoarseFile {
        v: SCHEMA_VERSION,
        kind: "coarse".into(),
        points: e.points,
        controlled: e
            .controlled
            .iter()
            .map(|&set| {
                bits::iter(set)
                    .map(|p| [p / e.points, p % e.points])
                    .collect()
            })
            .collect(),
    }
}

// ---- conversions: file -> core, all re-verified by the caller ----

fn set_from_points(points: &[usize], cap_axiom: &str, report: &mut Report) -> u64 {
    let mut set = 0u64;
    for &p in points {
        if p >= 64 {
            report.push(cap_axiom, format!("point index {p} exceeds the 64-point cap"));
        } else {
            set |= 1 << p;
        }
    }
    set
}

pub fn space_from_file(f: &SpaceFile) -> Result<FiniteSpace, Report> {
    let mut report = Report::valid();
    if f.points > 64 {
        report.push("size-cap", format!("{} points exceed the 64-point cap", f.points));
        return Err(report);
    }
    if let Some(names) = &f.names {
        if names.len() != f.points {
            report.push("names-length", "names array does not match the point count");
        }
    }
    let opens: Vec<u64> = f
        .opens
        .iter()
        .map(|o| set_from_points(o, "size-cap", &mut report))
        .collect();
    if report.is_valid() {
        Ok(FiniteSpace::from_raw(f.points, opens))
    } else {
        Err(report)
    }
}

pub fn semigroup_from_file(f: &SemigroupFile) -> Result<InverseSemigroup, Report> {
    let mut report = Report::valid();
    if f.mul.len() != f.size || f.mul.iter().any(|row| row.len() != f.size) {
        report.push("table-shape", "mul table is not size × size");
    }
    if f.inv.len() != f.size {
        report.push("table-shape", "inv table length differs from size");
    }
    if !report.is_valid() {
        return Err(report);
    }
    let mul: Vec<usize> = f.mul.iter().flatten().copied().collect();
    Ok(InverseSemigroup::from_raw(f.size, mul, f.inv.clone(), f.unit))
}

pub fn bijection_from_body(
    body: &PartialBijectionBody,
    points: usize,
) -> Result<PartialBijection, Report> {
    let mut report = Report::valid();
    if body.domain.len() != body.image.len() {
        report.push("bijection-shape", "domain and image arrays differ in length");
        return Err(report);
    }
    let pairs: Vec<(usize, usize)> = body
        .domain
        .iter()
        .copied()
        .zip(body.image.iter().copied())
        .collect();
    match PartialBijection::from_pairs(points, &pairs) {
        Some(h) => Ok(h),
        None => {
            report.push(
                "bijection",
                format!("pairs {pairs:?} are not the graph of a partial bijection on {points} points"),
            );
            Err(report)
        }
    }
}

pub fn representation_from_file(
    f: &RepresentationFile,
) -> Result<Representation, Report> {
    let semigroup = semigroup_from_file(&f.semigroup)?;
    let space = space_from_file(&f.space)?;
    let mut report = Report::valid();
    if f.assign.len() != semigroup.size() {
        report.push("assign-length", "one partial bijection per element is required");
        return Err(report);
    }
    let mut assign = Vec::with_capacity(f.assign.len());
    for body in &f.assign {
        match bijection_from_body(body, space.point_count()) {
            Ok(h) => assign.push(h),
            Err(r) => {
                report.absorb(r);
                return Err(report);
            }
        }
    }
    Ok(Representation::new(semigroup, space, assign))
}

pub fn pseudogroup_from_file(
    f: &PseudogroupFile,
) -> Result<(FiniteSpace, Vec<PartialBijection>), Report> {
    let space = space_from_file(&f.space)?;
    let mut elements = Vec::with_capacity(f.elements.len());
    for body in &f.elements {
        elements.push(bijection_from_body(body, space.point_count())?);
    }
    Ok((space, elements))
}

pub fn groupoid_from_file(f: &GroupoidFile) -> Result<FiniteGroupoid, Report> {
    let objects = space_from_file(&f.objects)?;
    let arrows = space_from_file(&f.arrows)?;
    let mut composable: Vec<(usize, usize)> = Vec::with_capacity(f.mul.len());
    let mut mul: Vec<usize> = Vec::with_capacity(f.mul.len());
    for &[x, y, xy] in &f.mul {
        composable.push((x, y));
        mul.push(xy);
    }
    Ok(FiniteGroupoid {
        objects,
        arrows,
        dmap: f.d.clone(),
        rmap: f.r.clone(),
        umap: f.u.clone(),
        imap: f.i.clone(),
        composable,
        mul,
    })
}

pub fn coarse_from_file(f: &CoarseFile) -> Result<CoarseStructure, Report> {
    let mut report = Report::valid();
    if f.points * f.points > 64 {
        report.push(
            "size-cap",
            format!("{} points exceed the 8-point cap for pair bitsets", f.points),
        );
        return Err(report);
    }
    let controlled: Vec<u64> = f
        .controlled
        .iter()
        .map(|set| {
            let mut bitset = 0u64;
            for &[x, y] in set {
                if x >= f.points || y >= f.points {
                    report.push("pair-range", format!("pair ({x},{y}) out of range"));
                } else {
                    bitset |= 1 << (x * f.points + y);
                }
            }
            bitset
        })
        .collect();
    if report.is_valid() {
        Ok(CoarseStructure {
            points: f.points,
            controlled,
        })
    } else {
        Err(report)
    }
}
