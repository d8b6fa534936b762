use jetbound::catalog::*;
use jetbound::exactmath::Factored;

/// Final bounds of every built-in case, frozen from verified runs. Only the
/// two quintic cases differ from their expected value (Chern number 84).
const GOLDEN: &[(&str, &str, bool)] = &[
    ("prop-lgr", "2^11·3^4·7", true),
    ("thmB-g9", "2^11·3^4·7", true),
    ("prop-ogr", "2^9·3^5·5·7", true),
    ("thmB-g7", "2^9·3^5·5·7", true),
    ("prop-g2", "2^6·3^5·5", true),
    ("thmB-g10", "2^6·3^5·5", true),
    ("prop-weighted", "2^7·3^5·5^3·7", true),
    ("prop-weighted-extended", "2^7·3^4·5^3·7", true),
    ("thmA-d1", "2^8·3^4·5^3·7", true),
    ("prop-quadric", "2^11·3^3·5·7^2", true),
    ("prop-quadric-extended", "2^10·3^3·5·7^2", true),
    ("thmB-g4-s", "2^10·3^3·5·7^2", true),
    ("prop-quintic", "2^6·3^3·5·7", false),
    ("thmB-g6", "2^7·3^3·5·7", false),
    ("thmA-d2", "2^10·3^6·5·7", true),
    ("thmA-d3", "2^10·3^5·5·11", true),
    ("thmB-g2", "2^9·3^4·5^6·7·13", true),
    ("thmB-g3-va", "2^11·3^10·5·7·61", true),
    ("thmB-g3-nva", "2^10·3^4·5·71", true),
    ("thmB-g4-ns", "2^10·3^5·5·7·43", true),
    ("thmA-d4", "2^14·3^2·5", true),
    ("thmB-g5", "2^24·3^2·5^2·7^2", true),
    ("thmB-g8", "2^12·3^2·5·11", true),
    ("xcheck-p4-cubic", "2^10·3^5·5·11", true),
];

#[test]
fn golden_final_bounds() {
    let cases = list_cases();
    assert_eq!(cases.len(), GOLDEN.len());
    for (id, bound, matches) in GOLDEN {
        let spec = find_case(&cases, id).unwrap();
        let r = run_spec(spec).unwrap();
        let want: Factored = bound.parse().unwrap();
        assert_eq!(r.final_bound.as_ref(), Some(&want), "{id}");
        assert_eq!(r.matches, *matches, "{id}");
        assert!(r.finite, "{id}");
    }
}

#[test]
fn quintic_cases_carry_the_chern_note() {
    for id in ["prop-quintic", "thmB-g6"] {
        let r = run_case(id).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("64") && n.contains("84")), "{id}: {:?}", r.notes);
    }
}

#[test]
fn reports_are_deterministic() {
    let a = serde_json::to_string(&run_case("prop-weighted").unwrap()).unwrap();
    let b = serde_json::to_string(&run_case("prop-weighted").unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["caseId"], "prop-weighted");
    assert_eq!(v["perDegree"][0]["i_l"], 450);
    assert_eq!(v["match"], true);
}

#[test]
fn user_case_file_round_trip() {
    let text = r#"
[[case]]
id = "p3-quartic"
pipeline = "formula"
formula = { kind = "hypersurface", n = 3, d = 4 }
transforms = ["deck"]
affinity = "chern_nonzero"
expected = "2^10·3^6·5·7"

[[case]]
id = "lgr-twice"
pipeline = "homogeneous"
space = { kind = "lagrangian", n = 3 }
fiber = { kind = "cayley", rank = 3 }
twist = 1
generators = [
  { name = "t1" }, { name = "t2" }, { name = "t3" },
  { name = "s1" }, { name = "s2" }, { name = "s3" },
]
transforms = ["center:2"]
affinity = "chern_nonzero"
expected = "2^11·3^4·7"
"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cases.toml");
    std::fs::write(&path, text).unwrap();
    let cases = load_cases(&path).unwrap();
    assert_eq!(cases.len(), 2);
    for c in &cases {
        assert!(run_spec(c).unwrap().matches, "{}", c.id);
    }
}

#[test]
fn bad_case_files_are_rejected() {
    assert!(matches!(parse_cases("[[case]]\nid = 3"), Err(CatalogError::Parse(_))));
    let missing = r#"
[[case]]
id = "x"
pipeline = "homogeneous"
affinity = "geometric"
expected = "2"
"#;
    let cases = parse_cases(missing);
    let err = match cases {
        Err(e) => e,
        Ok(c) => run_spec(&c[0]).unwrap_err(),
    };
    assert!(matches!(err, CatalogError::Invalid { .. }), "{err:?}");
    assert!(matches!(load_cases(std::path::Path::new("/nonexistent/cases.toml")), Err(CatalogError::Io { .. })));
}
