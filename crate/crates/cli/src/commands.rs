//! Implementations of the CLI subcommands. Every structure is re-verified
//! on load; nothing declared in a file is trusted.
//!
//! Exit codes: 0 success, 1 domain failure (with a witness in the JSON
//! payload), 2 usage or parse failure.

use std::path::Path;

use serde::Serialize;

use germoid_core::coarse::{translation_groupoid, verify_coarse_structure, CoarseStructure};
use germoid_core::fintop::{verify_topology, FiniteSpace};
use germoid_core::germs::{germ_groupoid, roundtrip_groupoid, roundtrip_semigroup, RoundtripError};
use germoid_core::groupoid::{
    canonical_representation, is_etale, verify_groupoid, FiniteGroupoid,
};
use germoid_core::invsemi::{
    verify_inverse_semigroup, verify_pseudogroup, InverseSemigroup, PartialBijection,
};
use germoid_core::report::Report;
use germoid_core::repr::{mx_quotient, Representation};
use germoid_core::universal::universal_groupoid;

use crate::dot;
use crate::schema::{self, LoadError, StructureFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// A failed command: what to print and which code to exit with.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub payload: String,
}

pub type Outcome = Result<String, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        payload: message.into(),
    }
}

fn domain_error(message: impl std::fmt::Display) -> Failure {
    #[derive(Serialize)]
    struct ErrorJson {
        ok: bool,
        error: String,
    }
    Failure {
        code: EXIT_DOMAIN,
        payload: serde_json::to_string_pretty(&ErrorJson {
            ok: false,
            error: message.to_string(),
        })
        .unwrap()
            + "\n",
    }
}

#[derive(Serialize)]
struct ViolationJson {
    axiom: String,
    witness: String,
}

#[derive(Serialize)]
struct ReportJson {
    valid: bool,
    violations: Vec<ViolationJson>,
}

fn report_json(report: &Report) -> String {
    let json = ReportJson {
        valid: report.is_valid(),
        violations: report
            .violations
            .iter()
            .map(|v| ViolationJson {
                axiom: v.axiom.clone(),
                witness: v.witness.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json).unwrap() + "\n"
}

fn read_structure(path: &Path) -> Result<StructureFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    schema::parse_structure(&text).map_err(|e| match e {
        LoadError::Parse(msg) => usage(format!("{}: {msg}", path.display())),
        LoadError::Invalid(report) => Failure {
            code: EXIT_DOMAIN,
            payload: report_json(&report),
        },
    })
}

/// A structure converted to core types; conversion problems and axiom
/// violations are both reported as domain failures.
pub enum Loaded {
    Space(FiniteSpace),
    Semigroup(InverseSemigroup),
    Pseudogroup(FiniteSpace, Vec<PartialBijection>),
    Representation(Representation),
    Groupoid(FiniteGroupoid),
    Coarse(CoarseStructure),
}

fn prefixed(mut report: Report, prefix: &str) -> Report {
    for v in &mut report.violations {
        v.axiom = format!("{prefix}-{}", v.axiom);
    }
    report
}

/// Converts and re-verifies every declared invariant, returning the full
/// violation report when anything fails.
pub fn convert_and_verify(file: &StructureFile) -> Result<Loaded, Report> {
    match file {
        StructureFile::Space(f) => {
            let space = schema::space_from_file(f)?;
            let report = verify_topology(&space);
            if report.is_valid() {
                Ok(Loaded::Space(space))
            } else {
                Err(report)
            }
        }
        StructureFile::Semigroup(f) => {
            let s = schema::semigroup_from_file(f)?;
            let report = verify_inverse_semigroup(&s);
            if report.is_valid() {
                Ok(Loaded::Semigroup(s))
            } else {
                Err(report)
            }
        }
        StructureFile::Pseudogroup(f) => {
            let (space, elements) = schema::pseudogroup_from_file(f)?;
            let mut report = prefixed(verify_topology(&space), "space");
            report.absorb(verify_pseudogroup(&space, &elements));
            if report.is_valid() {
                Ok(Loaded::Pseudogroup(space, elements))
            } else {
                Err(report)
            }
        }
        StructureFile::Representation(f) => {
            let rep = schema::representation_from_file(f)?;
            let mut report = prefixed(verify_topology(rep.space()), "space");
            report.absorb(prefixed(
                verify_inverse_semigroup(rep.semigroup()),
                "semigroup",
            ));
            report.absorb(rep.verify());
            if report.is_valid() {
                Ok(Loaded::Representation(rep))
            } else {
                Err(report)
            }
        }
        StructureFile::Groupoid(f) => {
            let g = schema::groupoid_from_file(f)?;
            let report = verify_groupoid(&g);
            if report.is_valid() {
                Ok(Loaded::Groupoid(g))
            } else {
                Err(report)
            }
        }
        StructureFile::Coarse(f) => {
            let e = schema::coarse_from_file(f)?;
            let report = verify_coarse_structure(&e);
            if report.is_valid() {
                Ok(Loaded::Coarse(e))
            } else {
                Err(report)
            }
        }
    }
}

fn load_verified(path: &Path) -> Result<Loaded, Failure> {
    let file = read_structure(path)?;
    convert_and_verify(&file).map_err(|report| Failure {
        code: EXIT_DOMAIN,
        payload: report_json(&report),
    })
}

/// `germoid verify <file>`: exit 0 iff valid, with the report on stdout.
pub fn cmd_verify(path: &Path) -> Outcome {
    let file = read_structure(path)?;
    match convert_and_verify(&file) {
        Ok(_) => Ok(report_json(&Report::valid())),
        Err(report) => Err(Failure {
            code: EXIT_DOMAIN,
            payload: report_json(&report),
        }),
    }
}

/// `germoid construct <kind> <file...>`: runs a construction and emits the
/// resulting structure file.
pub fn cmd_construct(kind: &str, inputs: &[std::path::PathBuf]) -> Outcome {
    let one_input = || -> Result<&std::path::PathBuf, Failure> {
        match inputs {
            [single] => Ok(single),
            _ => Err(usage(format!(
                "construct {kind} takes exactly one input file, got {}",
                inputs.len()
            ))),
        }
    };
    let constructed: StructureFile = match kind {
        "germs" => {
            let Loaded::Representation(rep) = load_verified(one_input()?)? else {
                return Err(usage("construct germs expects a representation file"));
            };
            let gg = germ_groupoid(&rep).map_err(domain_error)?;
            StructureFile::Groupoid(schema::groupoid_file(&gg.groupoid))
        }
        "mx" => {
            let Loaded::Representation(rep) = load_verified(one_input()?)? else {
                return Err(usage("construct mx expects a representation file"));
            };
            let mx = mx_quotient(&rep).map_err(domain_error)?;
            StructureFile::Representation(schema::representation_file(&mx.representation))
        }
        "universal" => {
            let Loaded::Semigroup(s) = load_verified(one_input()?)? else {
                return Err(usage("construct universal expects a semigroup file"));
            };
            let gu = universal_groupoid(&s).map_err(domain_error)?;
            StructureFile::Groupoid(schema::groupoid_file(&gu.groupoid))
        }
        "beta0" => {
            let Loaded::Groupoid(g) = load_verified(one_input()?)? else {
                return Err(usage("construct beta0 expects a groupoid file"));
            };
            let beta = germoid_core::coarse::beta0_extension(&g).map_err(domain_error)?;
            StructureFile::Groupoid(schema::groupoid_file(&beta.germ.groupoid))
        }
        "translation" => {
            let Loaded::Coarse(e) = load_verified(one_input()?)? else {
                return Err(usage("construct translation expects a coarse file"));
            };
            let t = translation_groupoid(e.points, &e).map_err(domain_error)?;
            StructureFile::Groupoid(schema::groupoid_file(&t.germ.groupoid))
        }
        "bisections" => {
            let Loaded::Groupoid(g) = load_verified(one_input()?)? else {
                return Err(usage("construct bisections expects a groupoid file"));
            };
            if !is_etale(&g).etale {
                return Err(domain_error("groupoid is not étale"));
            }
            let (_, rep) = canonical_representation(&g);
            StructureFile::Representation(schema::representation_file(&rep))
        }
        other => {
            return Err(usage(format!(
                "unknown construct kind {other:?}; expected germs|mx|universal|beta0|translation|bisections"
            )))
        }
    };
    Ok(schema::to_json(&constructed))
}

/// `germoid roundtrip <file>`: groupoid files run the groupoid round trip,
/// representation files the semigroup one.
pub fn cmd_roundtrip(path: &Path) -> Outcome {
    #[derive(Serialize)]
    struct GroupoidIsoJson {
        ok: bool,
        kind: &'static str,
        objects: Vec<usize>,
        arrows: Vec<usize>,
    }
    #[derive(Serialize)]
    struct SemigroupIsoJson {
        ok: bool,
        kind: &'static str,
        elements: Vec<usize>,
    }
    match load_verified(path)? {
        Loaded::Groupoid(g) => {
            if !is_etale(&g).etale {
                return Err(domain_error("groupoid is not étale"));
            }
            let roundtrip = roundtrip_groupoid(&g).map_err(domain_error)?;
            Ok(serde_json::to_string_pretty(&GroupoidIsoJson {
                ok: true,
                kind: "groupoid",
                objects: roundtrip.iso.object_map,
                arrows: roundtrip.iso.arrow_map,
            })
            .unwrap()
                + "\n")
        }
        Loaded::Representation(rep) => match roundtrip_semigroup(&rep) {
            Ok(roundtrip) => Ok(serde_json::to_string_pretty(&SemigroupIsoJson {
                ok: true,
                kind: "semigroup",
                elements: roundtrip.iso,
            })
            .unwrap()
                + "\n"),
            Err(e @ RoundtripError::Germ(_)) => Err(domain_error(e)),
            Err(e) => Err(domain_error(e)),
        },
        _ => Err(usage(
            "roundtrip expects a groupoid file or a representation file",
        )),
    }
}

/// `germoid export-dot <file> [--show-units]`.
pub fn cmd_export_dot(path: &Path, show_units: bool) -> Outcome {
    let file = read_structure(path)?;
    let StructureFile::Groupoid(ref gf) = file else {
        return Err(usage("export-dot expects a groupoid file"));
    };
    let names = gf.objects.names.clone();
    match convert_and_verify(&file)? {
        Loaded::Groupoid(g) => Ok(dot::render(&g, names.as_deref(), show_units)),
        _ => unreachable!("kind checked above"),
    }
}

impl From<Report> for Failure {
    fn from(report: Report) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            payload: report_json(&report),
        }
    }
}

/// `germoid classify <rep-file>`.
pub fn cmd_classify(path: &Path) -> Outcome {
    #[derive(Serialize)]
    struct ClassificationJson {
        is_unital: bool,
        is_full: bool,
        is_wide: bool,
    }
    let Loaded::Representation(rep) = load_verified(path)? else {
        return Err(usage("classify expects a representation file"));
    };
    let c = rep.classify();
    Ok(serde_json::to_string_pretty(&ClassificationJson {
        is_unital: c.is_unital,
        is_full: c.is_full,
        is_wide: c.is_wide,
    })
    .unwrap()
        + "\n")
}
