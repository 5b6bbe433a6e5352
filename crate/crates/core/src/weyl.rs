//! Root system and Weyl group of type `D_n` in Bourbaki conventions.
//!
//! Roots live in the ambient lattice `Z^n` spanned by the orthonormal basis
//! `e_1..e_n`; Weyl elements are signed permutations with an even number of
//! sign changes. Everything here is exact integer arithmetic and serves as
//! the oracle for the reduced-word machinery in [`crate::bsword`].

use crate::{Error, Result};

/// Integer vector in the ambient `Z^n` lattice of `D_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootVector {
    coords: Vec<i64>,
}

impl RootVector {
    pub fn new(coords: Vec<i64>) -> Self {
        RootVector { coords }
    }

    pub fn zero(n: usize) -> Self {
        RootVector { coords: vec![0; n] }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn dot(&self, other: &RootVector) -> i64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &RootVector) -> RootVector {
        RootVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> RootVector {
        RootVector {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// A `D_n` root has exactly two nonzero coordinates, both `+-1`.
    pub fn is_root(&self) -> bool {
        let nonzero: Vec<i64> = self.coords.iter().copied().filter(|&c| c != 0).collect();
        nonzero.len() == 2 && nonzero.iter().all(|&c| c == 1 || c == -1)
    }

    /// Positivity for `D_n` roots: the nonzero coordinate with the smallest
    /// index has coefficient `+1`.
    pub fn is_positive_root(&self) -> bool {
        debug_assert!(self.is_root());
        self.coords.iter().find(|&&c| c != 0) == Some(&1)
    }
}

/// Bourbaki simple root: `alpha_u = e_u - e_{u+1}` for `u <= n-1`,
/// `alpha_n = e_{n-1} + e_n`.
pub fn simple_root(n: usize, u: usize) -> Result<RootVector> {
    if n < 3 {
        return Err(Error::Argument(format!("rank must be >= 3, got {n}")));
    }
    if u < 1 || u > n {
        return Err(Error::Argument(format!("root index {u} out of [1,{n}]")));
    }
    let mut coords = vec![0; n];
    if u < n {
        coords[u - 1] = 1;
        coords[u] = -1;
    } else {
        coords[n - 2] = 1;
        coords[n - 1] = 1;
    }
    Ok(RootVector { coords })
}

/// `<gamma^vee, delta> = 2(gamma,delta)/(gamma,gamma)`. For roots of a simply
/// laced system this is the plain dot product.
pub fn coroot_pairing(gamma: &RootVector, delta: &RootVector) -> Result<i64> {
    let gg = gamma.dot(gamma);
    if gg == 0 {
        return Err(Error::Argument("coroot pairing against zero vector".into()));
    }
    Ok(2 * gamma.dot(delta) / gg)
}

/// Reflection `s_gamma(delta) = delta - <gamma^vee,delta> gamma`.
pub fn reflect(gamma: &RootVector, delta: &RootVector) -> Result<RootVector> {
    let c = coroot_pairing(gamma, delta)?;
    Ok(RootVector {
        coords: delta
            .coords
            .iter()
            .zip(&gamma.coords)
            .map(|(d, g)| d - c * g)
            .collect(),
    })
}

/// Whether `alpha_u` and `alpha_v` are adjacent in the `D_n` Dynkin diagram.
pub fn dynkin_adjacent(n: usize, u: usize, v: usize) -> Result<bool> {
    if u == v {
        return Ok(false);
    }
    let a = simple_root(n, u)?;
    let b = simple_root(n, v)?;
    Ok(a.dot(&b) != 0)
}

/// All `n(n-1)` positive roots `e_i - e_j` and `e_i + e_j`, `i < j`.
pub fn positive_roots(n: usize) -> Vec<RootVector> {
    let mut roots = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for sign in [-1i64, 1] {
                let mut coords = vec![0; n];
                coords[i] = 1;
                coords[j] = sign;
                roots.push(RootVector { coords });
            }
        }
    }
    roots
}

/// Signed permutation of `{1..n}` with an even number of sign changes.
///
/// The element maps `e_i` to `signs[i] * e_{perm[i]}` (indices 0-based
/// internally).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i64>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    /// Number of sign changes is even in type `D`.
    pub fn sign_product(&self) -> i64 {
        self.signs.iter().product()
    }

    pub fn apply(&self, v: &RootVector) -> RootVector {
        let mut coords = vec![0; self.perm.len()];
        for (i, &c) in v.coords().iter().enumerate() {
            coords[self.perm[i]] += c * self.signs[i];
        }
        RootVector { coords }
    }

    /// Composition `self . other`: apply `other` first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut signs = vec![0; n];
        for i in 0..n {
            perm[i] = self.perm[other.perm[i]];
            signs[i] = other.signs[i] * self.signs[other.perm[i]];
        }
        WeylElement { perm, signs }
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut signs = vec![0; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement { perm, signs }
    }
}

/// The simple reflection `s_u`: for `u < n` it swaps `e_u` and `e_{u+1}`;
/// `s_n` maps `e_{n-1} -> -e_n` and `e_n -> -e_{n-1}`.
pub fn simple_reflection(n: usize, u: usize) -> Result<WeylElement> {
    if n < 3 {
        return Err(Error::Argument(format!("rank must be >= 3, got {n}")));
    }
    if u < 1 || u > n {
        return Err(Error::Argument(format!("root index {u} out of [1,{n}]")));
    }
    let mut w = WeylElement::identity(n);
    if u < n {
        w.perm.swap(u - 1, u);
    } else {
        w.perm.swap(n - 2, n - 1);
        w.signs[n - 2] = -1;
        w.signs[n - 1] = -1;
    }
    Ok(w)
}

/// Product `s_{word[0]} ... s_{word[last]}` of simple reflections, the
/// rightmost letter acting first.
pub fn weyl_from_word(n: usize, word: &[usize]) -> Result<WeylElement> {
    let mut w = WeylElement::identity(n);
    for &u in word {
        w = w.compose(&simple_reflection(n, u)?);
    }
    Ok(w)
}

/// Coxeter length via inversion count: the number of positive roots sent to
/// negative roots.
pub fn length(w: &WeylElement) -> usize {
    positive_roots(w.rank())
        .iter()
        .filter(|r| !w.apply(r).is_positive_root())
        .count()
}

/// The unique maximal-length element of `W(D_n)`, of length `n(n-1)`.
///
/// `-1` lies in the Weyl group exactly when `n` is even; for odd `n` the
/// longest element negates `e_1..e_{n-1}` and fixes `e_n`.
pub fn longest_element(n: usize) -> Result<WeylElement> {
    if n < 3 {
        return Err(Error::Argument(format!("rank must be >= 3, got {n}")));
    }
    let mut w = WeylElement::identity(n);
    for s in w.signs.iter_mut() {
        *s = -1;
    }
    if n % 2 == 1 {
        w.signs[n - 1] = 1;
    }
    debug_assert_eq!(length(&w), n * (n - 1));
    Ok(w)
}

/// Maximal parabolic datum: the excluded simple root (here always `alpha_n`)
/// and the rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParabolicDatum {
    pub n: usize,
    pub excluded_root: usize,
}

impl ParabolicDatum {
    /// The parabolic for the spinor variety: `W_P` generated by all simple
    /// reflections except `s_n`.
    pub fn spinor(n: usize) -> Self {
        ParabolicDatum {
            n,
            excluded_root: n,
        }
    }
}

/// The unique minimal-length element of the coset `w W_P`, by greedy right
/// descent along the generators of `W_P`.
pub fn min_coset_rep(w: &WeylElement, p: &ParabolicDatum) -> WeylElement {
    let n = p.n;
    let mut rep = w.clone();
    let mut len = length(&rep);
    'outer: loop {
        for u in 1..=n {
            if u == p.excluded_root {
                continue;
            }
            let cand = rep.compose(&simple_reflection(n, u).expect("valid index"));
            let cand_len = length(&cand);
            if cand_len < len {
                rep = cand;
                len = cand_len;
                continue 'outer;
            }
        }
        return rep;
    }
}

/// A word is reduced iff its length equals the Coxeter length of its product.
pub fn is_reduced(n: usize, word: &[usize]) -> Result<bool> {
    let w = weyl_from_word(n, word)?;
    Ok(length(&w) == word.len())
}
