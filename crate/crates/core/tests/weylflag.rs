use jetbound::exactmath::rat;
use num_traits::Signed;
use jetbound::spaces::FlagFactor;
use jetbound::weights::Poly;
use jetbound::weylflag::*;
use proptest::prelude::*;

fn spaces() -> Vec<(&'static str, FlagFactor)> {
    vec![
        ("LGr(3,6)", FlagFactor::lagrangian(3).unwrap()),
        ("OGr(5,10)", FlagFactor::spinor(5).unwrap()),
        ("G2/P1", FlagFactor::g2().unwrap()),
        ("Gr(2,5)", FlagFactor::grassmannian(2, 5, false).unwrap()),
        ("Gr(2,6) SL", FlagFactor::grassmannian(2, 6, true).unwrap()),
        ("P2 SL", FlagFactor::grassmannian(1, 3, true).unwrap()),
        ("Q3", FlagFactor::odd_quadric(2).unwrap()),
    ]
}

#[test]
fn weyl_group_orders() {
    let expect = [48usize, 1920, 12, 120, 720, 6, 8];
    for ((name, f), want) in spaces().iter().zip(expect) {
        assert_eq!(f.weyl_order(), want, "{name}");
        assert_eq!(enumerate_weyl(f.datum()).unwrap().len(), want, "{name}");
    }
    assert_eq!(RootType::D.weyl_order(5), 1920);
    assert_eq!(RootType::C.weyl_order(3), 48);
}

#[test]
fn betti_numbers_of_the_flag_varieties() {
    // Classical counts: strict partitions in a staircase for LGr and OGr,
    // one cell per even degree for G2/P1 and the odd quadric.
    let expect: [Vec<usize>; 7] = [
        vec![1, 1, 1, 2, 1, 1, 1],
        vec![1, 1, 1, 2, 2, 2, 2, 2, 1, 1, 1],
        vec![1, 1, 1, 1, 1, 1],
        vec![1, 1, 2, 2, 2, 1, 1],
        vec![1, 1, 2, 2, 3, 2, 2, 1, 1],
        vec![1, 1, 1],
        vec![1, 1, 1, 1],
    ];
    for ((name, f), want) in spaces().iter().zip(expect) {
        assert_eq!(f.quotient().betti(), want, "{name}");
        assert_eq!(f.dim(), want.len() - 1, "{name}");
    }
}

#[test]
fn degrees_from_schubert_pairing() {
    // deg X = ⟨ω^dim, [X]⟩ for the hyperplane class; classical values.
    let expect = [16i64, 12, 18, 5, 14, 1, 2];
    for ((name, f), want) in spaces().iter().zip(expect) {
        let h = f.char_poly(f.omega());
        let top = f.quotient().top().clone();
        let deg = f.pair(&h.pow(f.dim() as u32), &top).unwrap();
        assert_eq!(deg.abs(), rat(want), "{name}");
    }
}

/// Order of s_i s_j, found by iterating its action on the coordinate ring.
fn braid_order(d: &RootDatum, i: usize, j: usize) -> usize {
    let n = d.nvars();
    let vars: Vec<Poly> = (0..n).map(|v| Poly::var(n, v)).collect();
    let mut cur = vars.clone();
    for m in 1..=12 {
        cur = cur.iter().map(|p| d.reflect(i, &d.reflect(j, p))).collect();
        if cur == vars {
            return m;
        }
    }
    panic!("s_{i} s_{j} has order above 12");
}

fn poly_from(n: usize, terms: &[(Vec<u16>, i64)]) -> Poly {
    let mut p = Poly::zero(n);
    for (e, c) in terms {
        let mut e = e.clone();
        e.resize(n, 0);
        p.add_term(e, rat(*c));
    }
    p
}

fn random_terms() -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u16..4, 5), -5i64..6), 1..5)
}

#[test]
fn g2_braid_order_is_six() {
    let f = FlagFactor::g2().unwrap();
    assert_eq!(braid_order(f.datum(), 0, 1), 6);
    let c3 = FlagFactor::lagrangian(3).unwrap();
    assert_eq!(braid_order(c3.datum(), 1, 2), 4);
    assert_eq!(braid_order(c3.datum(), 0, 1), 3);
    assert_eq!(braid_order(c3.datum(), 0, 2), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A_i A_j A_i … = A_j A_i A_j … with m_ij factors on each side.
    #[test]
    fn bgg_braid_relations(terms in random_terms()) {
        for (name, f) in spaces() {
            let d = f.datum();
            let p = poly_from(d.nvars(), &terms);
            for i in 0..d.rank() {
                for j in i + 1..d.rank() {
                    let m = braid_order(d, i, j);
                    let left: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
                    let right: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
                    prop_assert_eq!(bgg_apply(d, &left, &p).unwrap(), bgg_apply(d, &right, &p).unwrap(), "{} ({}, {})", name, i, j);
                }
            }
        }
    }

    #[test]
    fn divided_difference_squares_to_zero(terms in random_terms()) {
        for (name, f) in spaces() {
            let d = f.datum();
            let p = poly_from(d.nvars(), &terms);
            for i in 0..d.rank() {
                prop_assert!(bgg_apply(d, &[i, i], &p).unwrap().is_zero(), "{} A_{}²", name, i);
            }
        }
    }

    #[test]
    fn reflections_are_involutions(terms in random_terms()) {
        for (_, f) in spaces() {
            let d = f.datum();
            let p = poly_from(d.nvars(), &terms);
            for i in 0..d.rank() {
                prop_assert_eq!(d.reflect(i, &d.reflect(i, &p)), p.clone());
            }
        }
    }
}

#[test]
fn reduced_word_independence() {
    // Every reduced word of every Schubert representative gives the same
    // operator on a fixed polynomial of matching degree.
    for (name, f) in [("G2/P1", FlagFactor::g2().unwrap()), ("LGr(3,6)", FlagFactor::lagrangian(3).unwrap())] {
        let d = f.datum();
        let group = enumerate_weyl(d).unwrap();
        let n = d.nvars();
        let mut p = Poly::zero(n);
        for v in 0..n {
            p.add_assign_ref(&Poly::var(n, v).scale(&rat(v as i64 + 2)));
        }
        p.add_assign_ref(&Poly::var(n, 0));
        for w in f.reps() {
            let words = reduced_words(d, &group, w);
            assert!(!words.is_empty());
            let g = p.pow(w.length() as u32);
            let first = bgg_apply(d, &words[0], &g).unwrap();
            for word in &words[1..] {
                assert_eq!(bgg_apply(d, word, &g).unwrap(), first, "{name} word {word:?}");
            }
        }
    }
}

#[test]
fn divided_difference_of_a_root_is_two() {
    // (α − s(α))/α = 2α/α.
    let f = FlagFactor::grassmannian(1, 3, false).unwrap();
    let d = f.datum();
    let alpha = d.root_poly(0).clone();
    let out = d.divided_difference(0, &alpha).unwrap();
    assert_eq!(out, Poly::constant(d.nvars(), rat(2)));
}
