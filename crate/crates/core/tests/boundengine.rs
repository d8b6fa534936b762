use jetbound::boundengine::*;
use jetbound::catalog::{build_case_model, builtin_cases, find_case, run_case};
use jetbound::exactmath::{factorize, smith_normal_form, CokernelOrder, Factored, IntMatrix};
use num_bigint::{BigInt, BigUint};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn f(s: &str) -> Factored {
    s.parse().unwrap()
}

// ---------------------------------------------------------------------------
// Closed formulas, checked against a differently arranged evaluation:
// (d−1)ⁿ Π_{i=2}^{n+1} (d−1)^{n+1−i}((d−1)^i + (−1)^{i+1}) and, for d > 2,
// the quadric product written with the geometric-series quotient.
// ---------------------------------------------------------------------------

fn hypersurface_oracle(n: u32, d: u32) -> u128 {
    let q = (d - 1) as i128;
    let mut out = q.pow(n);
    for i in 2..=n + 1 {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        out *= q.pow(n + 1 - i) * (q.pow(i) + sign);
    }
    out as u128
}

fn quadric_oracle(k: u32, d: u32) -> u128 {
    assert!(d > 2);
    let q = (d - 1) as u128;
    let n = k / 2 + 1;
    let mut out = 2u128.pow(3 * n / 2);
    out *= (0..=k).map(|i| (i as u128 + 1) * q.pow(i)).sum::<u128>();
    for i in 1..=n {
        let num = q.pow(k + 2) - q.pow(k - 2 * (i - 1));
        assert_eq!(num % (q - 1), 0);
        out *= num / (q - 1);
    }
    out
}

#[test]
fn hypersurface_formula_against_oracle() {
    for n in 1..=5 {
        for d in 2..=7 {
            let got = hypersurface_bound(n, d).unwrap();
            assert_eq!(got, BigUint::from(hypersurface_oracle(n, d)), "n = {n}, d = {d}");
        }
    }
}

#[test]
fn quadric_formula_against_oracle() {
    for k in 2..=6 {
        for d in 3..=6 {
            let got = quadric_hypersurface_bound(k, d).unwrap();
            assert_eq!(got, BigUint::from(quadric_oracle(k, d)), "k = {k}, d = {d}");
        }
    }
}

#[test]
fn formula_values_of_the_theorem_items() {
    assert_eq!(factorize(&hypersurface_bound(4, 3).unwrap()), f("2^10·3^5·5·11"));
    assert_eq!(factorize(&hypersurface_bound(4, 4).unwrap()), f("2^11·3^10·5·7·61"));
    // The double covers get a factor 2 from the deck involution afterwards.
    assert_eq!(factorize(&hypersurface_bound(3, 4).unwrap()), f("2^9·3^6·5·7"));
    assert_eq!(factorize(&hypersurface_bound(3, 6).unwrap()), f("2^8·3^4·5^6·7·13"));
    assert_eq!(factorize(&quadric_hypersurface_bound(3, 4).unwrap()), f("2^9·3^4·5·71"));
    assert_eq!(factorize(&quadric_hypersurface_bound(4, 3).unwrap()), f("2^10·3^5·5·7·43"));
}

#[test]
fn quadric_formula_at_degree_two() {
    // Each inner sum has 2i terms equal to 1: 2^4 · 15 · (2·4·6).
    assert_eq!(quadric_hypersurface_bound(4, 2).unwrap(), BigUint::from(11520u32));
}

#[test]
fn formula_domain_errors() {
    assert!(matches!(hypersurface_bound(0, 3), Err(BoundError::Domain(_))));
    assert!(matches!(hypersurface_bound(3, 1), Err(BoundError::Domain(_))));
    assert!(matches!(quadric_hypersurface_bound(1, 3), Err(BoundError::Domain(_))));
    assert!(matches!(quadric_hypersurface_bound(3, 0), Err(BoundError::Domain(_))));
}

// ---------------------------------------------------------------------------
// Extended first degree.
// ---------------------------------------------------------------------------

#[test]
fn extended_first_cokernel_values() {
    assert_eq!(extended_first_cokernel(&big(-450), &big(210)), CokernelOrder::Finite(big(450)));
    assert_eq!(extended_first_cokernel(&big(-588), &big(260)), CokernelOrder::Finite(big(588)));
    assert_eq!(extended_first_cokernel(&big(1), &big(12345)), CokernelOrder::Finite(big(1)));
    assert_eq!(extended_first_cokernel(&big(0), &big(7)), CokernelOrder::infinite());
}

// ---------------------------------------------------------------------------
// S-matrices against reference matrices, compared through Smith forms.
// The homology bases differ: Schubert classes here, and for G2 the reference
// matrices live on the full flag variety, so column counts can differ too.
// ---------------------------------------------------------------------------

fn reference_divisors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    smith_normal_form(&IntMatrix::from_rows(rows).unwrap()).divisors
}

fn check_reference(case: &str, reference: &[(u32, Vec<Vec<i64>>)]) {
    let r = run_case(case).unwrap();
    for (l, rows) in reference {
        let d = r.per_degree.iter().find(|d| d.l == *l).unwrap_or_else(|| panic!("{case}: no block l = {l}"));
        assert_eq!(d.matrix.len(), rows.len(), "{case} l = {l} rows");
        assert_eq!(d.divisors, reference_divisors(rows), "{case} l = {l}");
    }
    // Degrees not listed have trivial cokernel.
    for d in &r.per_degree {
        if !reference.iter().any(|(l, _)| *l == d.l) {
            assert_eq!(d.cokernel, CokernelOrder::Finite(big(1)), "{case} l = {}", d.l);
        }
    }
}

#[test]
fn lagrangian_grassmannian_matrices() {
    check_reference(
        "prop-lgr",
        &[
            (1, vec![vec![36]]),
            (2, vec![vec![0, -12], vec![24, -30]]),
            (3, vec![vec![-28, -42, 21]]),
            (4, vec![vec![-8, 20, 12, 20]]),
            (6, vec![vec![16, -40, 0]]),
        ],
    );
}

#[test]
fn spinor_variety_matrices() {
    check_reference(
        "prop-ogr",
        &[
            (1, vec![vec![60]]),
            (2, vec![vec![0, -28], vec![24, -10]]),
            (3, vec![vec![36, -46, 50]]),
            (4, vec![vec![-6, 14, -34, 27, 8], vec![36, -34, 14, 9, -4]]),
            (5, vec![vec![3, -12, 48, -81, 30, 64, -92], vec![36, -34, 26, -15, 8, 6, -8]]),
            (6, vec![vec![0, -4, 20, -30, 8, 12, 4, -12, -20], vec![36, -34, 26, -3, -4, -6, 16, 6, -8]]),
        ],
    );
}

#[test]
fn g2_matrices() {
    check_reference(
        "prop-g2",
        &[(1, vec![vec![30]]), (2, vec![vec![0, 12], vec![-24, -36]]), (6, vec![vec![0, 0, -9]])],
    );
}

#[test]
fn lagrangian_decomposition_reproduces_the_euler_class() {
    let spec = find_case(builtin_cases(), "prop-lgr").unwrap();
    let cm = build_case_model(spec).unwrap();
    for order in [PivotOrder::Natural, PivotOrder::Reversed] {
        let coeffs = decompose_in_ideal(&cm.model, &cm.euler, &cm.group, order).unwrap();
        assert!(verify_decomposition(&cm.model, &cm.euler, &cm.group, &coeffs).unwrap());
    }
    let blocks = degree_blocks(&cm.model, &cm.euler, &cm.group, PivotOrder::Natural).unwrap();
    let l3 = blocks.iter().find(|b| b.s.l == 3).unwrap();
    assert_eq!(l3.s.matrix.to_rows(), vec![vec![big(-21), big(-42), big(-28)]]);
    assert_eq!(cokernel_product(&blocks), CokernelOrder::Finite(big(2i64.pow(12) * 81 * 7)));
}

// ---------------------------------------------------------------------------
// Transform chain.
// ---------------------------------------------------------------------------

fn formula_input(base: u64, chern: Option<i64>, transforms: Vec<Transform>, expected: &str) -> AssemblyInput {
    AssemblyInput {
        case_id: "t".into(),
        blocks: Vec::new(),
        base_value: Some(BigUint::from(base)),
        chern_number: chern.map(BigInt::from),
        transforms,
        expected: f(expected),
        notes: Vec::new(),
    }
}

#[test]
fn transforms_apply_in_order() {
    let r = assemble_bound(formula_input(12, Some(-5), vec![Transform::ChernFactor, Transform::Center(4), Transform::Deck], "30"))
        .unwrap();
    let values: Vec<String> = r.transforms.iter().map(|t| t.value.to_string()).collect();
    assert_eq!(values, ["2^2·3·5", "3·5", "2·3·5"]);
    assert!(r.matches && r.finite);
    assert_eq!(r.final_value.as_deref(), Some("30"));
}

#[test]
fn center_divides_by_the_gcd() {
    let r = assemble_bound(formula_input(18, None, vec![Transform::Center(4)], "9")).unwrap();
    assert_eq!(r.final_bound, Some(f("9")));
    let r = assemble_bound(formula_input(7, None, vec![Transform::Center(3)], "7")).unwrap();
    assert_eq!(r.final_bound, Some(f("7")));
}

#[test]
fn vanishing_chern_number_makes_the_bound_infinite() {
    let r = assemble_bound(formula_input(12, Some(0), vec![Transform::ChernFactor], "12")).unwrap();
    assert!(!r.finite && !r.matches);
    assert!(r.final_bound.is_none());
    assert!(!r.notes.is_empty());
}

#[test]
fn chern_factor_without_a_number_is_a_config_error() {
    let e = assemble_bound(formula_input(12, None, vec![Transform::ChernFactor], "12")).unwrap_err();
    assert!(matches!(e, BoundError::Config(_)));
    let e = assemble_bound(formula_input(12, Some(3), vec![Transform::ExtendedFirstDegree], "12")).unwrap_err();
    assert!(matches!(e, BoundError::Config(_)));
}

#[test]
fn transform_names_round_trip() {
    for t in [Transform::ChernFactor, Transform::ExtendedFirstDegree, Transform::Center(6), Transform::Deck] {
        assert_eq!(t.to_string().parse::<Transform>().unwrap(), t);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<Transform>(&json).unwrap(), t);
    }
    assert!("center:x".parse::<Transform>().is_err());
    assert!("rotate".parse::<Transform>().is_err());
}

#[test]
fn weighted_and_quadric_first_degree_is_extended() {
    for (case, first, extended) in [("prop-weighted-extended", 450, 450), ("prop-quadric-extended", 588, 588)] {
        let r = run_case(case).unwrap();
        let d1 = r.per_degree.iter().find(|d| d.l == 1).unwrap();
        assert_eq!(d1.matrix[0][0].magnitude(), &BigUint::from(first as u32), "{case}");
        let rec = r.transforms.iter().find(|t| t.transform == Transform::ExtendedFirstDegree).unwrap();
        assert!(rec.effect.ends_with(&extended.to_string()), "{case}: {}", rec.effect);
    }
}
