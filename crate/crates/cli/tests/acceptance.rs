//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its elapsed time and asserting its runtime budget.
//!
//! Run with `cargo test -p germoid --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use germoid_cli::schema::{self, StructureFile};
use germoid_core::bits;
use germoid_core::coarse::{
    beta0_extension, extend_ultrafilter, generate_coarse_structure, restrict_ultrafilter,
    translation_groupoid, ultrafilters, verify_coarse_structure,
};
use germoid_core::corpus;
use germoid_core::fintop::{verify_topology, FiniteSpace};
use germoid_core::germs::{
    compatibly_prime_report, equiv_unital_mx, equiv_wide_unital, germ_groupoid,
    roundtrip_groupoid, roundtrip_semigroup,
};
use germoid_core::groupoid::{
    canonical_representation, group_as_groupoid, groupoid_isomorphic, is_etale, pair_groupoid,
    verify_groupoid, FiniteGroupoid,
};
use germoid_core::invsemi::{
    symmetric_inverse_monoid, verify_inverse_semigroup, verify_pseudogroup,
};
use germoid_core::repr::{mx_quotient, omega_downarrow, Representation};
use germoid_core::universal::{universal_groupoid, universal_representation};

fn finish(criterion: &str, description: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "acceptance {criterion} ({description}): PASS in {:.3}s (budget {:.0}s)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(
        elapsed < budget,
        "{criterion} exceeded its runtime budget: {elapsed:?} ≥ {budget:?}"
    );
}

/// Independent oracle for |I(X)|: enumerate all partial maps as raw arrays
/// and filter by injectivity and two-sided continuity computed straight
/// from the list of opens, without the library's bijection type.
fn count_partial_homeomorphisms_oracle(points: usize, opens: &[Vec<usize>]) -> usize {
    let is_open = |set: &BTreeSet<usize>| opens.iter().any(|o| o.iter().copied().collect::<BTreeSet<_>>() == *set);
    // Every partial map as an array of options.
    let mut maps: Vec<Vec<Option<usize>>> = vec![vec![]];
    for _ in 0..points {
        let mut next = Vec::new();
        for m in &maps {
            for choice in std::iter::once(None).chain((0..points).map(Some)) {
                let mut longer = m.clone();
                longer.push(choice);
                next.push(longer);
            }
        }
        maps = next;
    }
    maps.into_iter()
        .filter(|m| {
            let domain: BTreeSet<usize> = (0..points).filter(|&x| m[x].is_some()).collect();
            let image: BTreeSet<usize> = domain.iter().map(|&x| m[x].unwrap()).collect();
            if image.len() != domain.len() {
                return false;
            }
            if !is_open(&domain) || !is_open(&image) {
                return false;
            }
            // Preimages and images of every open must be open.
            opens.iter().all(|o| {
                let open: BTreeSet<usize> = o.iter().copied().collect();
                let preimage: BTreeSet<usize> = domain
                    .iter()
                    .copied()
                    .filter(|&x| open.contains(&m[x].unwrap()))
                    .collect();
                let forward: BTreeSet<usize> = domain
                    .iter()
                    .copied()
                    .filter(|x| open.contains(x))
                    .map(|x| m[x].unwrap())
                    .collect();
                is_open(&preimage) && is_open(&forward)
            })
        })
        .count()
}

#[test]
fn criterion_1_cardinality_oracles() {
    let started = Instant::now();
    let discrete_opens = |n: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
            .collect()
    };
    for (n, expected) in [(1usize, 2usize), (2, 7), (3, 34)] {
        let oracle = count_partial_homeomorphisms_oracle(n, &discrete_opens(n));
        assert_eq!(oracle, expected, "oracle count for discrete {n}");
        let monoid = symmetric_inverse_monoid(&FiniteSpace::discrete(n));
        assert_eq!(monoid.len(), expected, "library count for discrete {n}");
    }
    let sierpinski_opens = vec![vec![], vec![0], vec![0, 1]];
    assert_eq!(count_partial_homeomorphisms_oracle(2, &sierpinski_opens), 3);
    assert_eq!(symmetric_inverse_monoid(&FiniteSpace::sierpinski()).len(), 3);
    finish(
        "criterion 1",
        "cardinality oracles |I(X)| = 2, 7, 34, 3",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_axiom_suites_and_mutations() {
    let started = Instant::now();

    // Pseudogroups.
    for (name, space) in corpus::spaces() {
        let p = symmetric_inverse_monoid(&space);
        assert!(
            verify_pseudogroup(p.space(), p.elements()).is_valid(),
            "{name}"
        );
        let (s, _) = germoid_core::invsemi::abstract_from_pseudogroup(&p);
        assert!(verify_inverse_semigroup(&s).is_valid(), "{name}");
    }
    // Abstract semigroups, their Wagner–Preston pseudogroups, Ω↓M and M_X.
    for (name, s) in corpus::semigroups() {
        assert!(verify_inverse_semigroup(&s).is_valid(), "{name}");
        let wp = germoid_core::invsemi::wagner_preston(&s);
        assert!(
            verify_pseudogroup(wp.pseudogroup.space(), wp.pseudogroup.elements()).is_valid(),
            "{name}"
        );
        let rep = Representation::wagner_preston(&s).extend_to_unit().unwrap();
        let omega = omega_downarrow(&rep).unwrap();
        assert!(verify_inverse_semigroup(&omega.semigroup).is_valid(), "{name}");
        let mx = mx_quotient(&rep).unwrap();
        assert!(verify_inverse_semigroup(&mx.semigroup).is_valid(), "{name}");
        assert!(mx.representation.verify().is_valid(), "{name}");
    }
    // Germ groupoids of the wide corpus.
    for (name, rep) in corpus::wide_representations() {
        let gg = germ_groupoid(&rep).unwrap();
        assert!(verify_groupoid(&gg.groupoid).is_valid(), "{name}");
    }
    // Universal groupoids.
    for (name, s) in corpus::semigroups() {
        let gu = universal_groupoid(&s).unwrap();
        assert!(verify_groupoid(&gu.groupoid).is_valid(), "{name}");
    }
    // Translation groupoids.
    for n in 1..=3usize {
        let e = generate_coarse_structure(n, &[]);
        assert!(verify_coarse_structure(&e).is_valid());
        let t = translation_groupoid(n, &e).unwrap();
        assert!(verify_groupoid(&t.germ.groupoid).is_valid());
    }

    // Mutation tests: one corrupted entry each, every one caught.
    {
        let z3 = corpus::cyclic_group(3);
        let mut mul: Vec<usize> = (0..9).map(|k| z3.mul(k / 3, k % 3)).collect();
        mul[4] = 1; // 1·1 = 1 instead of 2
        let broken = germoid_core::invsemi::InverseSemigroup::from_raw(
            3,
            mul,
            vec![0, 2, 1],
            Some(0),
        );
        assert!(!verify_inverse_semigroup(&broken).is_valid());
    }
    {
        let mut g = pair_groupoid(&FiniteSpace::discrete(2)).unwrap();
        g.imap[1] = 1;
        assert!(!verify_groupoid(&g).is_valid());
    }
    {
        let mut g = pair_groupoid(&FiniteSpace::discrete(2)).unwrap();
        g.mul[0] = (g.mul[0] + 1) % 4;
        assert!(!verify_groupoid(&g).is_valid());
    }
    {
        let space = FiniteSpace::from_raw(2, vec![0b00, 0b01]);
        assert!(!verify_topology(&space).is_valid());
    }
    {
        let rep = Representation::tautological_ix(&FiniteSpace::sierpinski());
        let mut assign = rep.assignments().to_vec();
        assign.swap(0, 1);
        let broken = Representation::new(rep.semigroup().clone(), rep.space().clone(), assign);
        assert!(!broken.verify().is_valid());
    }
    {
        let mut e = generate_coarse_structure(2, &[]);
        let diag = e.diagonal();
        e.controlled.retain(|&c| c != diag);
        assert!(!verify_coarse_structure(&e).is_valid());
    }
    {
        let p = symmetric_inverse_monoid(&FiniteSpace::discrete(2));
        let elements: Vec<_> = p
            .elements()
            .iter()
            .filter(|h| h.domain() != 0)
            .cloned()
            .collect();
        assert!(!verify_pseudogroup(p.space(), &elements).is_valid());
    }

    finish(
        "criterion 2",
        "axiom suites plus mutation detection",
        started,
        Duration::from_secs(10),
    );
}

fn criterion_3_corpus() -> Vec<(String, FiniteGroupoid)> {
    let mut out = corpus::etale_groupoids();
    for (name, rep) in corpus::wide_representations() {
        let gg = germ_groupoid(&rep).unwrap();
        out.push((format!("germ_{name}"), gg.groupoid));
    }
    out
}

#[test]
fn criterion_3_round_trips() {
    let started = Instant::now();
    let corpus = criterion_3_corpus();
    assert!(corpus.len() >= 10, "corpus too small: {}", corpus.len());
    for (name, g) in &corpus {
        assert!(is_etale(g).etale, "{name}");
        // Theorem: Germs(I(G), ρ_G) ≅ G, with an explicit witness.
        let roundtrip = roundtrip_groupoid(g).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            germoid_core::groupoid::verify_groupoid_iso(g, &roundtrip.germ.groupoid, &roundtrip.iso),
            "{name}"
        );
        // Theorem: I(Germs(S, ρ)) ≅ S for S = I(G) with ρ_G.
        let (_, rep) = canonical_representation(g);
        let semigroup_roundtrip =
            roundtrip_semigroup(&rep).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            germoid_core::invsemi::is_homomorphism(
                &semigroup_roundtrip.iso,
                rep.semigroup(),
                &semigroup_roundtrip.bisections.semigroup
            ),
            "{name}"
        );
    }
    finish(
        "criterion 3",
        &format!("round trips over {} étale groupoids", corpus.len()),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_equivalence_theorems() {
    let started = Instant::now();
    let corpus_reps = corpus::wide_representations();
    assert!(corpus_reps.len() >= 6);
    // All Wagner–Preston representations of the ≤7-element corpus
    // semigroups are present.
    for (name, s) in corpus::semigroups() {
        assert!(s.size() <= 7);
        assert!(corpus_reps.iter().any(|(n, _)| n == &format!("wp_{name}")));
    }
    // The controlled pseudogroup of the unital coarse structure on three
    // points joins the corpus.
    let mut reps = corpus_reps;
    let coarse = generate_coarse_structure(3, &[]);
    let (_, controlled_rep) = germoid_core::coarse::controlled_pseudogroup(3, &coarse);
    reps.push(("controlled_3".into(), controlled_rep));

    for (name, rep) in &reps {
        // Theorem: Germs(S, ρ) ≅ Germs(S_e, ρ_e).
        let wide_unital = equiv_wide_unital(rep).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            wide_unital.wide.groupoid.arrow_count(),
            wide_unital.unital.groupoid.arrow_count(),
            "{name}"
        );
        // Theorem: Germs(M, ρ) ≅ Germs(M_X, ρ_X) for the unital extension.
        let extended = rep.extend_to_unit().unwrap();
        let unital_mx = equiv_unital_mx(&extended).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            germoid_core::groupoid::verify_groupoid_iso(
                &unital_mx.germ_mx.groupoid,
                &unital_mx.germ_m.groupoid,
                &unital_mx.iso
            ),
            "{name}"
        );
    }
    finish(
        "criterion 4",
        &format!("equivalence theorems over {} wide representations", reps.len()),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_5_universal_groupoid_sanity() {
    let started = Instant::now();
    // Groups: G_u is the group as a one-object groupoid.
    for (name, group) in [
        ("z1", corpus::cyclic_group(1)),
        ("z2", corpus::cyclic_group(2)),
        ("z3", corpus::cyclic_group(3)),
        ("z4", corpus::cyclic_group(4)),
        ("v4", corpus::klein_four_group()),
    ] {
        let gu = universal_groupoid(&group).unwrap();
        let expected = group_as_groupoid(&group).unwrap();
        assert!(
            groupoid_isomorphic(&gu.groupoid, &expected)
                .unwrap()
                .is_some(),
            "{name}: G_u is not the group"
        );
    }
    // Semilattices: only unit arrows.
    for (name, semilattice) in [
        ("chain2", corpus::chain_semilattice(2)),
        ("chain3", corpus::chain_semilattice(3)),
        ("diamond", corpus::diamond_semilattice()),
    ] {
        let gu = universal_groupoid(&semilattice).unwrap();
        assert_eq!(
            bits::count(gu.groupoid.unit_image()),
            gu.groupoid.arrow_count(),
            "{name}: non-unit arrow in a semilattice's universal groupoid"
        );
    }
    // ρ_u is wide for every corpus semigroup.
    for (name, s) in corpus::semigroups() {
        let (_, rep) = universal_representation(&s);
        assert!(rep.verify().is_valid(), "{name}");
        assert!(rep.classify().is_wide, "{name}");
        let gu = universal_groupoid(&s).unwrap();
        assert!(verify_groupoid(&gu.groupoid).is_valid(), "{name}");
        assert!(is_etale(&gu.groupoid).etale, "{name}");
    }
    finish(
        "criterion 5",
        "universal groupoids of groups and semilattices",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_6_degenerate_stone_cech() {
    let started = Instant::now();
    // All ultrafilters on at most 4 points are principal.
    for n in 0..=4usize {
        let base = bits::full(n);
        let ultra = ultrafilters(base);
        assert_eq!(ultra.len(), n);
        for f in &ultra {
            let point = bits::iter(f.members.first().copied().unwrap_or(0)).next().unwrap();
            assert_eq!(*f, germoid_core::coarse::principal_at(base, point));
        }
    }
    // Shrinking and enlarging are mutually inverse, exhaustively.
    for n in 1..=4usize {
        let base = bits::full(n);
        for f in ultrafilters(base) {
            for &u in &f.members.clone() {
                let down = restrict_ultrafilter(&f, u).unwrap();
                assert_eq!(extend_ultrafilter(&down, base), f);
            }
        }
        for u in bits::subsets(base).into_iter().filter(|&u| u != 0) {
            for g in ultrafilters(u) {
                let up = extend_ultrafilter(&g, base);
                assert_eq!(restrict_ultrafilter(&up, u).unwrap(), g);
            }
        }
    }
    // β₀G ≅ G for every finite discrete étale corpus groupoid.
    let discrete_corpus: Vec<(String, FiniteGroupoid)> = corpus::etale_groupoids()
        .into_iter()
        .filter(|(_, g)| {
            g.objects.opens().len() == 1 << g.object_count()
                && g.arrows.opens().len() == 1 << g.arrow_count()
        })
        .collect();
    assert!(discrete_corpus.len() >= 5);
    for (name, g) in &discrete_corpus {
        let beta = beta0_extension(g).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            germoid_core::groupoid::verify_groupoid_iso(g, &beta.germ.groupoid, &beta.iso_to_original),
            "{name}"
        );
    }
    // On a finite set the closure axioms admit exactly one coarse
    // structure (everything), it is unital, and its translation groupoid
    // is the pair groupoid.
    for n in 1..=3usize {
        let everything = generate_coarse_structure(n, &[]);
        for generators in [
            vec![],
            vec![everything.diagonal()],
            vec![bits::full(n * n)],
        ] {
            assert_eq!(generate_coarse_structure(n, &generators), everything);
        }
        assert!(everything.is_unital());
        let t = translation_groupoid(n, &everything).unwrap();
        let pair = pair_groupoid(&FiniteSpace::discrete(n)).unwrap();
        assert!(groupoid_isomorphic(&t.germ.groupoid, &pair)
            .unwrap()
            .is_some());
    }
    finish(
        "criterion 6",
        "principal ultrafilters, βU ≅ Ũ, β₀G ≅ G, translation groupoids",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_7_compatibly_prime_filters() {
    let started = Instant::now();
    // Complete corpus semigroups carrying full representations: the
    // symmetric inverse monoids, the open-set chain of the Sierpiński
    // space, and the bisection monoids of small corpus groupoids.
    let mut reps: Vec<(String, Representation)> = vec![
        (
            "i_point".into(),
            Representation::tautological_ix(&FiniteSpace::discrete(1)),
        ),
        (
            "i_discrete2".into(),
            Representation::tautological_ix(&FiniteSpace::discrete(2)),
        ),
        (
            "i_discrete3".into(),
            Representation::tautological_ix(&FiniteSpace::discrete(3)),
        ),
        (
            "i_sierpinski".into(),
            Representation::tautological_ix(&FiniteSpace::sierpinski()),
        ),
    ];
    {
        let space = FiniteSpace::sierpinski();
        let assign = space
            .opens()
            .iter()
            .map(|&u| germoid_core::invsemi::PartialBijection::identity(2, u))
            .collect();
        reps.push((
            "omega_sierpinski".into(),
            Representation::new(corpus::chain_semilattice(3), space, assign),
        ));
    }
    for (name, g) in corpus::etale_groupoids() {
        if g.arrow_count() <= 4 {
            let (_, rep) = canonical_representation(&g);
            reps.push((format!("bisections_{name}"), rep));
        }
    }

    for (name, rep) in &reps {
        let report = compatibly_prime_report(rep).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            report.matches,
            "{name}: germ classes {:?} differ from compatibly prime filters {:?}",
            report.germ_class_sets, report.prime_filters
        );
        // Any divergence of the alternative (meet-closed) filter reading is
        // reported, not hidden; on these complete semigroups binary meets
        // exist, so the definitions agree.
        assert!(
            report.alternative_divergence.is_none(),
            "{name}: the meet-closed filter variant diverges: {:?}",
            report.alternative_divergence
        );
    }
    // Exact counts from the worked examples.
    let i2 = compatibly_prime_report(&reps[1].1).unwrap();
    assert_eq!(i2.prime_filters.len(), 4);
    let chain = compatibly_prime_report(&reps[4].1).unwrap();
    assert_eq!(chain.prime_filters.len(), 2);
    finish(
        "criterion 7",
        &format!("germ classes = compatibly prime filters on {} semigroups", reps.len()),
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_8_cli_determinism() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, file: &StructureFile| {
        let path = dir.path().join(name);
        std::fs::write(&path, schema::to_json(file)).unwrap();
        path
    };

    let space = write(
        "sierpinski.json",
        &StructureFile::Space(schema::space_file(&FiniteSpace::sierpinski())),
    );
    let z2 = write(
        "z2.json",
        &StructureFile::Semigroup(schema::semigroup_file(&corpus::cyclic_group(2))),
    );
    let (i_sierp, i_sierp_dict) = corpus::abstract_ix(&FiniteSpace::sierpinski());
    let i_sierp_sg = write(
        "i_sierp.json",
        &StructureFile::Semigroup(schema::semigroup_file(&i_sierp)),
    );
    let pseudo = write(
        "pseudo.json",
        &StructureFile::Pseudogroup(schema::pseudogroup_file(
            &FiniteSpace::sierpinski(),
            &i_sierp_dict,
        )),
    );
    let rep_i2 = write(
        "rep_i2.json",
        &StructureFile::Representation(schema::representation_file(
            &Representation::tautological_ix(&FiniteSpace::discrete(2)),
        )),
    );
    let rep_sierp = write(
        "rep_sierp.json",
        &StructureFile::Representation(schema::representation_file(
            &Representation::tautological_ix(&FiniteSpace::sierpinski()),
        )),
    );
    let pair2 = write(
        "pair2.json",
        &StructureFile::Groupoid(schema::groupoid_file(
            &pair_groupoid(&FiniteSpace::discrete(2)).unwrap(),
        )),
    );
    let unit_sierp = write(
        "unit_sierp.json",
        &StructureFile::Groupoid(schema::groupoid_file(
            &germoid_core::groupoid::unit_groupoid(&FiniteSpace::sierpinski()),
        )),
    );
    let coarse2 = write(
        "coarse2.json",
        &StructureFile::Coarse(schema::coarse_file(&generate_coarse_structure(2, &[]))),
    );

    let as_str = |p: &std::path::PathBuf| p.to_str().unwrap().to_string();
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for file in [&space, &z2, &i_sierp_sg, &pseudo, &rep_i2, &rep_sierp, &pair2, &unit_sierp, &coarse2]
    {
        invocations.push(vec!["verify".into(), as_str(file)]);
    }
    for rep in [&rep_i2, &rep_sierp] {
        invocations.push(vec!["classify".into(), as_str(rep)]);
        invocations.push(vec!["construct".into(), "germs".into(), as_str(rep)]);
        invocations.push(vec!["construct".into(), "mx".into(), as_str(rep)]);
        invocations.push(vec!["roundtrip".into(), as_str(rep)]);
    }
    for sg in [&z2, &i_sierp_sg] {
        invocations.push(vec!["construct".into(), "universal".into(), as_str(sg)]);
    }
    for g in [&pair2, &unit_sierp] {
        invocations.push(vec!["construct".into(), "bisections".into(), as_str(g)]);
        invocations.push(vec!["roundtrip".into(), as_str(g)]);
        invocations.push(vec!["export-dot".into(), as_str(g)]);
        invocations.push(vec!["export-dot".into(), as_str(g), "--show-units".into()]);
    }
    invocations.push(vec!["construct".into(), "beta0".into(), as_str(&pair2)]);
    invocations.push(vec![
        "construct".into(),
        "translation".into(),
        as_str(&coarse2),
    ]);

    for args in &invocations {
        let run = || {
            std::process::Command::new(env!("CARGO_BIN_EXE_germoid"))
                .args(args)
                .output()
                .expect("binary runs")
        };
        let first = run();
        let second = run();
        assert_eq!(
            first.status.code(),
            second.status.code(),
            "exit code changed across runs: {args:?}"
        );
        assert_eq!(
            first.stdout, second.stdout,
            "stdout not byte-identical across runs: {args:?}"
        );
        assert_eq!(
            first.stderr, second.stderr,
            "stderr not byte-identical across runs: {args:?}"
        );
        assert_eq!(first.status.code(), Some(0), "command failed: {args:?}");
    }
    finish(
        "criterion 8",
        &format!("byte-identical CLI output across {} invocations", invocations.len()),
        started,
        Duration::from_secs(60),
    );
}
