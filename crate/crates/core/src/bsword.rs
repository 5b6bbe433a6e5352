//! The explicit reduced word for the top coset of the spinor parabolic, its
//! inversion roots, the coroot pairing matrix, and the quiver with heights.
//!
//! The word of length `r = n(n-1)/2` is cut into blocks `[a_k+1, a_{k+1}]`
//! with `a_k = (k-1)(2n-k)/2`; inside block `k` the letter at offset `j` is
//! `alpha_{n-j}` for `j >= 2` and the fork letter (`alpha_n` or
//! `alpha_{n-1}`, by the parity of `n-k`) for `j = 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::weyl::{
    coroot_pairing, dynkin_adjacent, longest_element, min_coset_rep, reflect, simple_root,
    weyl_from_word, ParabolicDatum, RootVector,
};
use crate::{Error, Result};

/// The fixed reduced word for the minimal representative of `w_0 W_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorWord {
    n: usize,
    betas: Vec<usize>,
}

impl SpinorWord {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// Simple-root indices `beta_1..beta_r`, 1-based values.
    pub fn betas(&self) -> &[usize] {
        &self.betas
    }

    /// Letter at 1-based position `i`.
    pub fn beta(&self, i: usize) -> usize {
        self.betas[i - 1]
    }
}

/// Block boundary `a_k = (k-1)(2n-k)/2`, for `k` in `[1,n]`.
pub fn a_index(n: usize, k: usize) -> Result<usize> {
    if k < 1 || k > n {
        return Err(Error::Argument(format!("level {k} out of [1,{n}]")));
    }
    Ok((k - 1) * (2 * n - k) / 2)
}

/// Build the word for rank `n >= 3`.
pub fn spinor_word(n: usize) -> Result<SpinorWord> {
    if n < 3 {
        return Err(Error::Argument(format!("rank must be >= 3, got {n}")));
    }
    let r = n * (n - 1) / 2;
    let mut betas = Vec::with_capacity(r);
    for k in 1..n {
        let start = a_index(n, k)?;
        let end = a_index(n, k + 1)?;
        for i in (start + 1)..=end {
            let j = i - start;
            let letter = if j >= 2 {
                n - j
            } else if (n - k) % 2 == 1 {
                n
            } else {
                n - 1
            };
            betas.push(letter);
        }
    }
    debug_assert_eq!(betas.len(), r);
    Ok(SpinorWord { n, betas })
}

/// The inversion roots `gamma_i = s_{beta_1}...s_{beta_{i-1}}(beta_i)`.
pub fn gamma_roots(word: &SpinorWord) -> Vec<RootVector> {
    let n = word.n;
    let mut out = Vec::with_capacity(word.len());
    for i in 0..word.len() {
        let mut g = simple_root(n, word.betas[i]).expect("valid letter");
        for &b in word.betas[..i].iter().rev() {
            let s = simple_root(n, b).expect("valid letter");
            g = reflect(&s, &g).expect("simple root is nonzero");
        }
        out.push(g);
    }
    out
}

/// Lower-triangular matrix of coroot pairings `c[k][i] = <gamma_k^vee, gamma_i>`
/// for `1 <= k <= i <= r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    n: usize,
    r: usize,
    // entries[i-1][k-1] for k <= i.
    entries: Vec<Vec<i64>>,
}

impl PairingMatrix {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.r
    }

    /// `c[k][i]`, 1-based, requires `k <= i`.
    pub fn entry(&self, k: usize, i: usize) -> i64 {
        assert!(1 <= k && k <= i && i <= self.r);
        self.entries[i - 1][k - 1]
    }
}

pub fn pairing_matrix(word: &SpinorWord) -> PairingMatrix {
    let gammas = gamma_roots(word);
    let r = word.len();
    let mut entries = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(i + 1);
        for k in 0..=i {
            row.push(coroot_pairing(&gammas[k], &gammas[i]).expect("gamma_k is a root"));
        }
        entries.push(row);
    }
    PairingMatrix {
        n: word.n,
        r,
        entries,
    }
}

/// The quiver of the reduced word: vertices `1..r` labeled by simple roots,
/// arrows `(i,j)` with `i < j`, heights by longest directed path to `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    labels: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    heights: Vec<usize>,
}

impl Quiver {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Simple-root label of vertex `i` (1-based).
    pub fn label(&self, i: usize) -> usize {
        self.labels[i - 1]
    }

    /// Arrows as ordered pairs `(i,j)`, `i < j`, sorted lexicographically.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Height `h(i)`: vertex count of the longest directed path from `i`
    /// to the last vertex, so `h(r) = 1`.
    pub fn height(&self, i: usize) -> usize {
        self.heights[i - 1]
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Vertices `j` with an arrow `(j, i)`.
    pub fn predecessors(&self, i: usize) -> Result<Vec<usize>> {
        if i < 1 || i > self.len() {
            return Err(Error::Argument(format!(
                "vertex {i} out of [1,{}]",
                self.len()
            )));
        }
        Ok(self
            .arrows
            .iter()
            .filter(|&&(_, b)| b == i)
            .map(|&(a, _)| a)
            .collect())
    }
}

/// Arrow rule: `(i,j)` is an arrow iff `i < j`, the letters are equal or
/// adjacent in the Dynkin diagram, and no intermediate vertex carries either
/// letter.
pub fn build_quiver(word: &SpinorWord) -> Quiver {
    let n = word.n;
    let r = word.len();
    let mut arrows = Vec::new();
    for i in 1..=r {
        for j in (i + 1)..=r {
            let (bi, bj) = (word.beta(i), word.beta(j));
            let related = bi == bj || dynkin_adjacent(n, bi, bj).expect("valid letters");
            if !related {
                continue;
            }
            let blocked = (i + 1..j).any(|k| word.beta(k) == bi || word.beta(k) == bj);
            if !blocked {
                arrows.push((i, j));
            }
        }
    }
    // Longest-path heights, computed backwards over the ascending arrows.
    let mut heights = vec![1usize; r];
    for i in (1..r).rev() {
        let best = arrows
            .iter()
            .filter(|&&(a, _)| a == i)
            .map(|&(_, b)| heights[b - 1])
            .max();
        if let Some(h) = best {
            heights[i - 1] = h + 1;
        }
    }
    Quiver {
        n,
        labels: word.betas.clone(),
        arrows,
        heights,
    }
}

/// Occurrence count of each simple root in the word.
pub fn root_multiplicities(word: &SpinorWord) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for &b in &word.betas {
        *counts.entry(b).or_insert(0) += 1;
    }
    counts
}

/// Deterministic DOT rendering: vertices ascending, edges sorted by `(i,j)`.
pub fn dot_export(q: &Quiver) -> String {
    let mut out = String::from("digraph BS {\n");
    for i in 1..=q.len() {
        let _ = writeln!(out, "  \"v{i}\" [label=\"{i}:a{}\"];", q.label(i));
    }
    for &(i, j) in q.arrows() {
        let _ = writeln!(out, "  \"v{i}\" -> \"v{j}\";");
    }
    out.push_str("}\n");
    out
}

/// One failed clause instance: which clause, the indices, and the value seen.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaWitness {
    pub clause: String,
    pub k: usize,
    pub i: usize,
    pub value: i64,
}

/// Outcome of checking the pairing lemma on a word.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub n: usize,
    pub clause_i_pass: bool,
    pub clause_ii_pass: bool,
    pub prefix_sum_pass: bool,
    pub witnesses: Vec<LemmaWitness>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.clause_i_pass && self.clause_ii_pass && self.prefix_sum_pass
    }
}

/// Check, by brute force on the inversion roots:
/// (i)  `c[k-1][a_k+j] = 1` for `k` in `[2,n-1]`, `j` in `[1,n-k]`;
/// (ii) `c[j][i] = 1` for distinct `i,j` in `[1,n-1]`;
/// and the prefix-sum identity `gamma_i = beta_1 + ... + beta_i` for
/// `i <= n-1`.
pub fn verify_lemma(word: &SpinorWord) -> LemmaReport {
    let n = word.n;
    let pm = pairing_matrix(word);
    let gammas = gamma_roots(word);
    let mut report = LemmaReport {
        n,
        clause_i_pass: true,
        clause_ii_pass: true,
        prefix_sum_pass: true,
        witnesses: Vec::new(),
    };

    for k in 2..=(n - 1) {
        let ak = a_index(n, k).expect("k in range");
        for j in 1..=(n - k) {
            let i = ak + j;
            let v = pm.entry(k - 1, i);
            if v != 1 {
                report.clause_i_pass = false;
                report.witnesses.push(LemmaWitness {
                    clause: "i".into(),
                    k: k - 1,
                    i,
                    value: v,
                });
            }
        }
    }

    for j in 1..(n - 1) {
        for i in (j + 1)..=(n - 1) {
            let v = pm.entry(j, i);
            if v != 1 {
                report.clause_ii_pass = false;
                report.witnesses.push(LemmaWitness {
                    clause: "ii".into(),
                    k: j,
                    i,
                    value: v,
                });
            }
        }
    }

    let mut prefix = RootVector::zero(n);
    for i in 1..=(n - 1) {
        prefix = prefix.add(&simple_root(n, word.beta(i)).expect("valid letter"));
        if gammas[i - 1] != prefix {
            report.prefix_sum_pass = false;
            report.witnesses.push(LemmaWitness {
                clause: "prefix".into(),
                k: 0,
                i,
                value: 0,
            });
        }
    }

    report
}

/// The word represents the minimal coset representative of `w_0 W_P`.
pub fn represents_top_coset(word: &SpinorWord) -> bool {
    let n = word.n;
    let w = weyl_from_word(n, &word.betas).expect("valid word");
    let p = ParabolicDatum::spinor(n);
    let rep = min_coset_rep(&longest_element(n).expect("n >= 3"), &p);
    w == rep
}
