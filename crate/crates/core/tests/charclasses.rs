use std::sync::Arc;

use jetbound::charclasses::*;
use jetbound::exactmath::{rat, BigRat};
use jetbound::spaces::{FiberSpec, FlagFactor, TowerModel};
use jetbound::weights::Poly;
use num_traits::{One, Zero};

// ---------------------------------------------------------------------------
// Torus localization oracle.
//
// For X = Sp6/P or Spin10/P and the tower ℙ(E) over X with E a sum of r copies
// of L*, ∫ c_top(J(O(1))) is a sum over fixed points of c_top(J)|_p / e(T_p).
// Nothing here touches the Schubert presentation used by the engine.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Family {
    /// LGr(n, 2n): tangent weights −(a_i + a_j) for i ≤ j, L = −Σ a_i.
    Lagrangian,
    /// OGr⁺(n, 2n): tangent weights −(a_i + a_j) for i < j, L = −½ Σ a_i.
    Spinor,
}

fn elementary(ws: &[BigRat], k: usize) -> BigRat {
    let mut e = vec![BigRat::zero(); k + 1];
    e[0] = BigRat::one();
    for w in ws {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * w;
            e[j] += add;
        }
    }
    e[k].clone()
}

/// ∫ c_top(J(𝒪(1))) on ℙ(L*^{⊕r}) over the family; r = 1 is X itself with L^twist.
fn localized_chern_number(family: Family, n: usize, rank: usize, twist: i64) -> BigRat {
    // Generic torus parameters: distinct and with no vanishing sums.
    let eps: Vec<BigRat> = [101i64, 1009, 10007, 100003, 1000003][..n].iter().map(|&x| rat(x)).collect();
    let zeta: Vec<BigRat> = (0..rank).map(|i| rat(7 + 131 * i as i64 * (i as i64 + 3))).collect();
    let mut total = BigRat::zero();
    for mask in 0u32..(1 << n) {
        if matches!(family, Family::Spinor) && mask.count_ones() % 2 == 1 {
            continue;
        }
        let a: Vec<BigRat> =
            (0..n).map(|i| if mask >> i & 1 == 1 { -eps[i].clone() } else { eps[i].clone() }).collect();
        let sum: BigRat = a.iter().sum();
        let (tangent, l0) = match family {
            Family::Lagrangian => {
                let t = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| -(&a[i] + &a[j])).collect::<Vec<_>>();
                (t, -sum)
            }
            Family::Spinor => {
                let t = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| -(&a[i] + &a[j])).collect::<Vec<_>>();
                (t, -sum / rat(2))
            }
        };
        let l0 = l0 * rat(twist);
        for q in 0..rank {
            let o1 = &l0 - &zeta[q];
            let mut tt = tangent.clone();
            tt.extend((0..rank).filter(|&i| i != q).map(|i| &zeta[q] - &zeta[i]));
            let mut jet: Vec<BigRat> = zeta.iter().map(|z| &l0 - z).collect();
            jet.extend(tangent.iter().map(|t| &o1 - t));
            let euler: BigRat = tt.iter().product();
            total += elementary(&jet, tt.len()) / euler;
        }
    }
    total
}

fn tower(base: FlagFactor, fiber: FiberSpec) -> TowerModel {
    TowerModel::new(Arc::new(base), fiber).unwrap()
}

#[test]
fn localization_oracle_is_independent_of_torus_parameters() {
    // The sum is a number, so the oracle must return an integer; a sloppy
    // weight list shows up as a fraction.
    for (fam, n, r) in [(Family::Lagrangian, 3, 1), (Family::Lagrangian, 3, 3), (Family::Spinor, 5, 1)] {
        assert!(localized_chern_number(fam, n, r, 1).is_integer());
    }
}

#[test]
fn chern_number_of_lagrangian_grassmannian_tower() {
    let want = localized_chern_number(Family::Lagrangian, 3, 3, 1);
    assert_eq!(want, rat(108));
    let t = tower(FlagFactor::lagrangian(3).unwrap(), FiberSpec::Cayley { rank: 3, special: false });
    assert_eq!(chern_number(&t, LineBundleSpec { twist: 1 }).unwrap(), want);
}

#[test]
fn chern_number_of_spinor_tower() {
    let want = localized_chern_number(Family::Spinor, 5, 7, 1);
    assert_eq!(want, rat(420));
    let t = tower(FlagFactor::spinor(5).unwrap(), FiberSpec::Cayley { rank: 7, special: false });
    assert_eq!(chern_number(&t, LineBundleSpec { twist: 1 }).unwrap(), want);
}

#[test]
fn chern_number_on_bare_flag_factors() {
    for twist in [1, 2, 3] {
        let t = tower(FlagFactor::lagrangian(3).unwrap(), FiberSpec::Point);
        let got = chern_number(&t, LineBundleSpec { twist }).unwrap();
        assert_eq!(got, localized_chern_number(Family::Lagrangian, 3, 1, twist), "LGr twist {twist}");
    }
    let t = tower(FlagFactor::spinor(5).unwrap(), FiberSpec::Point);
    assert_eq!(chern_number(&t, LineBundleSpec { twist: 2 }).unwrap(), localized_chern_number(Family::Spinor, 5, 1, 2));
}

#[test]
fn jet_weight_count_is_dimension_plus_one() {
    let t = tower(FlagFactor::lagrangian(3).unwrap(), FiberSpec::Cayley { rank: 3, special: false });
    let w = jet_weights(&t, LineBundleSpec { twist: 1 }).unwrap();
    assert_eq!(w.count(), t.dim() + 1);
    assert_eq!(t.dim(), 8);
}

// ---------------------------------------------------------------------------
// The quintic del Pezzo threefold.
// ---------------------------------------------------------------------------

/// ∫ c₃(J(L)) on a Fano threefold from classical invariants, with L = −K:
/// c(J(L)) = (1 + L)·c(Ω⊗L) gives c₃(Ω) + 2c₂(Ω)L + 3c₁(Ω)L² + 4L³.
/// For V₅: χ_top = 4, c₂·H = 12, H³ = 5, −K = 2H.
fn v5_jet_chern_number() -> (i64, i64) {
    let (euler, c2h, h3) = (4i64, 12i64, 5i64);
    let c3_omega = -euler;
    let c2_omega_l = 2 * c2h;
    let c1_omega_l2 = -2 * 4 * h3;
    let l3 = 8 * h3;
    let full = c3_omega + 2 * c2_omega_l + 3 * c1_omega_l2 + 4 * l3;
    // L·c₂(Ω⊗L) = c₂(Ω)L + 2c₁(Ω)L² + 3L³.
    let partial = c2_omega_l + 2 * c1_omega_l2 + 3 * l3;
    (full, partial)
}

fn mono(e: [u16; 3], c: i64) -> Poly {
    Poly::monomial(3, e.to_vec(), rat(c))
}

#[test]
fn quintic_ring_constant_from_whitney_relations() {
    assert_eq!(quintic_ring_constant(-20, 64).unwrap(), rat(-64));
    // A perturbed datum still has a unique solution.
    assert_eq!(quintic_ring_constant(-10, 16).unwrap(), rat(-32));
}

#[test]
fn quintic_conormal_constants_are_determined() {
    assert_eq!(quintic_conormal_constants(-20, 64).unwrap(), (rat(-196), rat(-68)));
}

#[test]
fn quintic_equivariant_euler_class() {
    let q = QuinticDerivation::derive(-20, 64).unwrap();
    let want = &mono([0, 1, 1], 1440) + &mono([0, 0, 2], -23040);
    assert_eq!(q.euler, want);
    assert_eq!(q.model.normal_form(&q.euler_raw).unwrap(), want);
}

#[test]
fn quintic_classical_invariants() {
    let q = QuinticDerivation::derive(-20, 64).unwrap();
    let m = &q.model;
    // u = c₁ of the tautological subbundle, so H = −u, H³ = 5 and −K = 2H.
    let h = -Poly::var(3, 0);
    assert_eq!(m.fundamental_class_pairing(&h.pow(3)).unwrap(), rat(5));
    assert_eq!(q.line_class, h.scale(&rat(2)));
    assert_eq!(m.fundamental_class_pairing(&q.cotangent_chern[2]).unwrap(), rat(-4));
    assert_eq!(m.fundamental_class_pairing(&q.cotangent_chern[1].mul_ref(&h)).unwrap(), rat(12));
}

#[test]
fn quintic_chern_number_matches_classical_formula() {
    let q = QuinticDerivation::derive(-20, 64).unwrap();
    let (full, partial) = v5_jet_chern_number();
    assert_eq!((full, partial), (84, 64));
    assert_eq!(q.chern_number, rat(full));
    assert_eq!(q.chern_number_without_top_twist, rat(partial));
}

#[test]
fn quintic_model_is_well_formed() {
    let q = QuinticDerivation::derive(-20, 64).unwrap();
    assert!(q.model.is_well_formed());
    assert_eq!(q.model.dim(), 3);
}

// ---------------------------------------------------------------------------
// Chern class algebra.
// ---------------------------------------------------------------------------

#[test]
fn binomials() {
    assert_eq!(binomial(7, 3), rat(35));
    assert_eq!(binomial(3, 5), rat(0));
    assert_eq!(binomial(0, 0), rat(1));
}

#[test]
fn twist_of_a_line_sum() {
    // Ω = x ⊕ y (Chern roots), L = z: c(Ω⊗L) = (1 + x + z)(1 + y + z).
    let (x, y, z) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
    let c = vec![&x + &y, x.mul_ref(&y)];
    let tw = chern_of_twist(&c, &z);
    assert_eq!(tw[0], &(&x + &y) + &z.scale(&rat(2)));
    assert_eq!(tw[1], (&x + &z).mul_ref(&(&y + &z)));
}

#[test]
fn total_quotient_inverts_product() {
    let (x, y) = (Poly::var(2, 0), Poly::var(2, 1));
    let a = total(&[&x + &y, x.mul_ref(&y)], 2);
    let b = total(&[x.scale(&rat(3))], 2);
    let prod = total_product(&a, &b, 3);
    let back = total_quotient(&prod, &b, 3);
    assert_eq!(back[1], a[1]);
    assert_eq!(back[2], a[2]);
    assert!(back[3].is_zero());
}
