//! Root data, Weyl group enumeration, BGG divided differences and Schubert
//! pairings.

use std::collections::HashMap;

use num_traits::Zero;

use crate::exactmath::{rat, BigRat};
use crate::weights::{CharBasis, CharVec, LatticeTag, Poly, WeightsError};

/// Errors raised by the Weyl group layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("Weyl group exceeds {0} elements")]
    TooLarge(usize),
    #[error("reflection {0} is not an involution")]
    NotInvolution(usize),
    #[error("reflection {0} does not preserve the basis relations")]
    BreaksRelations(usize),
    #[error("root {0} does not divide g - s(g); the polynomial is not in the expected ring")]
    NotDivisible(usize),
    #[error(transparent)]
    Weights(#[from] WeightsError),
}

/// Cartan type tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    G2,
}

impl RootType {
    /// |W| by the classical formulas.
    pub fn weyl_order(self, rank: usize) -> u64 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        match self {
            RootType::A => fact(rank + 1),
            RootType::B | RootType::C => fact(rank) << rank,
            RootType::D => fact(rank) << (rank - 1),
            RootType::G2 => 12,
        }
    }
}

/// Simple roots and their reflections acting on a character basis.
#[derive(Debug, Clone)]
pub struct RootDatum {
    root_type: RootType,
    rank: usize,
    basis: CharBasis,
    simple_roots: Vec<CharVec>,
    root_polys: Vec<Poly>,
    /// `reflections[i][v]` is the image of free variable `v` under s_i.
    reflections: Vec<Vec<Poly>>,
}

impl RootDatum {
    /// Builds a datum from explicit reflection images of every basis symbol.
    pub fn from_images(
        root_type: RootType,
        basis: CharBasis,
        simple_roots: Vec<CharVec>,
        images: Vec<Vec<CharVec>>,
    ) -> Result<Self, WeylError> {
        let free = basis.free_symbols();
        let nfree = free.len();
        let mut reflections = Vec::new();
        for (i, imgs) in images.iter().enumerate() {
            // Relations must map to relations: image of an eliminated symbol
            // must agree with the image of its expression.
            let polys: Vec<Poly> = imgs.iter().map(|v| basis.to_poly(v)).collect();
            let symbol_polys = basis.symbol_polys();
            for (s, sp) in symbol_polys.iter().enumerate() {
                let via_free = sp.substitute(&free.iter().map(|&f| polys[f].clone()).collect::<Vec<_>>());
                if via_free != polys[s] {
                    return Err(WeylError::BreaksRelations(i));
                }
            }
            reflections.push(free.iter().map(|&f| polys[f].clone()).collect::<Vec<_>>());
        }
        let root_polys = simple_roots.iter().map(|r| basis.to_poly(r)).collect();
        let datum = RootDatum { root_type, rank: simple_roots.len(), basis, simple_roots, root_polys, reflections };
        for i in 0..datum.rank {
            let vars: Vec<Poly> = (0..nfree).map(|v| Poly::var(nfree, v)).collect();
            let twice: Vec<Poly> = datum.reflections[i].iter().map(|p| p.substitute(&datum.reflections[i])).collect();
            if twice != vars {
                return Err(WeylError::NotInvolution(i));
            }
        }
        Ok(datum)
    }

    /// Builds reflections s_α(v) = v − 2(v·α)/(α·α)·α for the standard inner
    /// product on the basis symbols (types A–D). Roots are given by their
    /// ambient coordinates, before any relation of the basis is applied, so
    /// the inner product is the orthonormal one even for SL_n.
    pub fn orthonormal(root_type: RootType, basis: CharBasis, simple_roots: Vec<Vec<i64>>) -> Result<Self, WeylError> {
        let n = basis.len();
        let mut images = Vec::new();
        for a in &simple_roots {
            let a: Vec<BigRat> = a.iter().map(|&x| rat(x)).collect();
            let norm: BigRat = a.iter().map(|x| x * x).sum();
            let mut imgs = Vec::new();
            for j in 0..n {
                let k = rat(2) * &a[j] / &norm;
                let coords: Vec<BigRat> = (0..n)
                    .map(|i| {
                        let delta = if i == j { rat(1) } else { BigRat::zero() };
                        delta - &k * &a[i]
                    })
                    .collect();
                imgs.push(basis.vector(coords, LatticeTag::Integer)?);
            }
            images.push(imgs);
        }
        let roots = simple_roots.iter().map(|a| basis.from_ints(a)).collect();
        Self::from_images(root_type, basis, roots, images)
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &CharBasis {
        &self.basis
    }

    pub fn nvars(&self) -> usize {
        self.basis.free_symbols().len()
    }

    pub fn simple_roots(&self) -> &[CharVec] {
        &self.simple_roots
    }

    pub fn root_poly(&self, i: usize) -> &Poly {
        &self.root_polys[i]
    }

    pub fn reflection(&self, i: usize) -> &[Poly] {
        &self.reflections[i]
    }

    /// Applies the simple reflection s_i to a polynomial: g ↦ g∘s_i.
    pub fn reflect(&self, i: usize, g: &Poly) -> Poly {
        g.substitute(&self.reflections[i])
    }

    /// The divided difference A_i g = (g − s_i g)/α_i.
    pub fn divided_difference(&self, i: usize, g: &Poly) -> Result<Poly, WeylError> {
        let diff = g - &self.reflect(i, g);
        if diff.is_zero() {
            return Ok(Poly::zero(g.nvars()));
        }
        diff.div_linear(&self.root_polys[i]).ok_or(WeylError::NotDivisible(i))
    }

    /// Action of the element with the given images on a polynomial.
    pub fn act(&self, w: &WeylElement, g: &Poly) -> Poly {
        g.substitute(&w.images)
    }

    fn identity_images(&self) -> Vec<Poly> {
        let n = self.nvars();
        (0..n).map(|v| Poly::var(n, v)).collect()
    }

    /// Images of w·s_i given the images of w.
    fn right_multiply(&self, w_images: &[Poly], i: usize) -> Vec<Poly> {
        self.reflections[i].iter().map(|p| p.substitute(w_images)).collect()
    }
}

/// A Weyl group element: one reduced word and the induced linear action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    word: Vec<usize>,
    images: Vec<Poly>,
}

impl WeylElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }
}

/// The full Weyl group, enumerated breadth-first so that every stored word
/// is reduced.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    index: HashMap<Vec<Poly>, usize>,
}

/// Upper bound on enumerated group sizes.
pub const MAX_WEYL_ORDER: usize = 100_000;

impl WeylGroup {
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, images: &[Poly]) -> Option<usize> {
        self.index.get(images).copied()
    }

    pub fn longest_length(&self) -> usize {
        self.elements.iter().map(WeylElement::length).max().unwrap_or(0)
    }
}

/// Enumerates W by breadth-first search over right multiplication by simple
/// reflections; elements are identified by their action matrices.
pub fn enumerate_weyl(datum: &RootDatum) -> Result<WeylGroup, WeylError> {
    let id = datum.identity_images();
    let mut elements = vec![WeylElement { word: vec![], images: id.clone() }];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &e in &frontier {
            for i in 0..datum.rank() {
                let imgs = datum.right_multiply(&elements[e].images, i);
                if index.contains_key(&imgs) {
                    continue;
                }
                if elements.len() >= MAX_WEYL_ORDER {
                    return Err(WeylError::TooLarge(MAX_WEYL_ORDER));
                }
                let mut word = elements[e].word.clone();
                word.push(i);
                index.insert(imgs.clone(), elements.len());
                next.push(elements.len());
                elements.push(WeylElement { word, images: imgs });
            }
        }
        frontier = next;
    }
    Ok(WeylGroup { elements, index })
}

/// BGG operator A_w = A_{i₁}∘…∘A_{i_k} for the word (i₁,…,i_k); the
/// rightmost letter acts first.
pub fn bgg_apply(datum: &RootDatum, word: &[usize], g: &Poly) -> Result<Poly, WeylError> {
    let mut cur = g.clone();
    for &i in word.iter().rev() {
        if cur.is_zero() {
            break;
        }
        cur = datum.divided_difference(i, &cur)?;
    }
    Ok(cur)
}

/// ⟨α*(g), e_w⟩ = (A_w g)(0).
pub fn schubert_pair(datum: &RootDatum, g: &Poly, w: &WeylElement) -> Result<BigRat, WeylError> {
    // Only the homogeneous part of degree l(w) survives evaluation at 0.
    let part = g.homogeneous_part(&vec![1; g.nvars()], w.length() as u32);
    if part.is_zero() {
        return Ok(BigRat::zero());
    }
    Ok(bgg_apply(datum, &w.word, &part)?.constant_term())
}

/// Minimal-length coset representatives of W/W_P for the parabolic subgroup
/// generated by `levi`.
#[derive(Debug, Clone)]
pub struct ParabolicQuotient {
    pub levi: Vec<usize>,
    pub reps: Vec<WeylElement>,
}

impl ParabolicQuotient {
    /// Number of representatives of each length (the Betti numbers of G/P).
    pub fn betti(&self) -> Vec<usize> {
        let top = self.reps.iter().map(WeylElement::length).max().unwrap_or(0);
        let mut b = vec![0; top + 1];
        for r in &self.reps {
            b[r.length()] += 1;
        }
        b
    }

    pub fn top(&self) -> &WeylElement {
        self.reps.iter().max_by_key(|r| r.length()).expect("nonempty quotient")
    }
}

/// Elements w with l(w·s) > l(w) for every s in `levi`, sorted by length
/// then enumeration order.
pub fn minimal_coset_reps(datum: &RootDatum, group: &WeylGroup, levi: &[usize]) -> ParabolicQuotient {
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for (k, w) in group.elements.iter().enumerate() {
        let minimal = levi.iter().all(|&s| {
            let imgs = datum.right_multiply(&w.images, s);
            let j = group.position(&imgs).expect("closed under multiplication");
            group.elements[j].length() > w.length()
        });
        if minimal {
            reps.push((w.length(), k));
        }
    }
    reps.sort();
    ParabolicQuotient { levi: levi.to_vec(), reps: reps.into_iter().map(|(_, k)| group.elements[k].clone()).collect() }
}

/// All reduced words of an element, found by depth-first search over
/// descents. Intended for tests on small groups.
pub fn reduced_words(datum: &RootDatum, group: &WeylGroup, w: &WeylElement) -> Vec<Vec<usize>> {
    fn rec(datum: &RootDatum, group: &WeylGroup, idx: usize, out: &mut Vec<Vec<usize>>, suffix: &mut Vec<usize>) {
        let w = &group.elements[idx];
        if w.length() == 0 {
            let mut word = suffix.clone();
            word.reverse();
            out.push(word);
            return;
        }
        for i in 0..datum.rank() {
            let imgs = datum.right_multiply(&w.images, i);
            let j = group.position(&imgs).expect("closed");
            if group.elements[j].length() < w.length() {
                suffix.push(i);
                rec(datum, group, j, out, suffix);
                suffix.pop();
            }
        }
    }
    let idx = group.position(&w.images).expect("element of the group");
    let mut out = Vec::new();
    rec(datum, group, idx, &mut out, &mut Vec::new());
    out.sort();
    out.dedup();
    out
}
