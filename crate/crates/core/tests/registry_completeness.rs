use qid::{parse, Registry, Status, Tier};

const ANCHORS: &[&str] = &[
    "(1-10)", "(1-11)", "(1-12)", "(2-2)", "(2-3)", "(2-4)", "(2-4-1)", "(2-5)", "(2-6)", "(2-7)",
    "(2-16)", "(2-17)", "(2-19)", "(2-21)", "(2-22)", "(2-23)", "(2-24)", "(2-25)", "(2-26)", "(3-2)",
    "(3-3)", "(3-4)", "(3-5)", "(3-6)", "(3-8)", "(3-9)", "(3-10)", "(3-11)", "(3-12)", "(4-2)",
    "(4-3)", "(4-4)", "(4-5)", "(4-7)", "(4-8)", "(4-9)", "(4-10)", "F3 lemma",
];

#[test]
fn every_anchor_has_a_record() {
    let reg = Registry::bundled();
    for a in ANCHORS {
        assert!(reg.records().iter().any(|r| r.anchor.starts_with(a)), "no record anchored at {a}");
    }
}

#[test]
fn anchors_sit_in_the_expected_tiers() {
    let reg = Registry::bundled();
    for r in reg.records() {
        let classical = r.id.starts_with("classical-");
        assert_eq!(classical, r.tier == Tier::Classical, "{}", r.id);
    }
    for author in ["Chan-Mao", "Mao", "Kaur-Rana", "Wang", "Nath-Das"] {
        assert!(
            reg.by_tier(Some(Tier::Background)).any(|r| r.anchor.starts_with(author)),
            "no background claim by {author}"
        );
    }
    for id in ["def-A", "def-B", "def-B-inverted", "al-A", "al-B", "al-mu2"] {
        assert_eq!(reg.get(id).unwrap().tier, Tier::Core, "{id}");
    }
}

#[test]
fn every_expression_prints_and_parses_back() {
    let reg = Registry::bundled();
    for r in reg.records() {
        for side in [&r.lhs, &r.rhs] {
            let printed = side.to_string();
            assert_eq!(&parse(&printed).unwrap(), side, "{}: {printed}", r.id);
        }
    }
    for name in reg.def_names() {
        let e = reg.def(name).unwrap();
        assert_eq!(&parse(&e.to_string()).unwrap(), e, "{name}");
    }
}

#[test]
fn registry_files_round_trip_through_disk() {
    let dir = std::env::temp_dir().join(format!("qid-registry-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("identities.toml");
    std::fs::write(&path, Registry::bundled_source()).unwrap();
    let loaded = Registry::load(&path).unwrap();
    let ids = |r: &Registry| r.records().iter().map(|r| r.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&loaded), ids(&Registry::bundled()));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn small_orders_evaluate_without_errors() {
    let reg = Registry::bundled();
    for r in reg.records() {
        let out = qid::verify(r, r.order.min(12));
        assert_ne!(out.status, Status::Error, "{}: {}", r.id, out.message);
    }
}
