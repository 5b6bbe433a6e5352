//! Divisor and 1-cycle class arithmetic on the Bott-Samelson tower.
//!
//! Divisor classes are integer vectors over the section basis `xi_1..xi_r`;
//! 1-cycle classes are stored through their full vector of pairings with the
//! `xi_i`, which is faithful since the `xi_i` form a Picard basis. The
//! pushforward to the spinor variety is the degree functional `sum x_i`.

use serde::Serialize;

use crate::bsword::{PairingMatrix, Quiver};
use crate::{Error, Result};

/// Integer vector over the basis `(xi_1..xi_r)` of the Picard group of the
/// tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Pairing against a 1-cycle class.
    pub fn pair(&self, x: &OneCycleClass) -> i64 {
        self.coeffs
            .iter()
            .zip(x.pairings())
            .map(|(c, p)| c * p)
            .sum()
    }
}

/// 1-cycle class, as the vector of its pairings `x_i = class . xi_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OneCycleClass {
    pairings: Vec<i64>,
}

impl OneCycleClass {
    pub fn new(pairings: Vec<i64>) -> Self {
        OneCycleClass { pairings }
    }

    pub fn pairings(&self) -> &[i64] {
        &self.pairings
    }
}

/// Relative tangent classes `T_i` with coefficient `c[k][i]` on `xi_k` for
/// `k <= i` and zero above.
pub fn relative_tangent_classes(pm: &PairingMatrix) -> Vec<DivisorClass> {
    let r = pm.size();
    (1..=r)
        .map(|i| {
            let mut coeffs = vec![0; r];
            for (k, c) in coeffs.iter_mut().enumerate().take(i) {
                *c = pm.entry(k + 1, i);
            }
            DivisorClass { coeffs }
        })
        .collect()
}

/// The anticanonical class of the tower: coefficient `h(i) + 1` on `xi_i`.
pub fn anticanonical(q: &Quiver) -> DivisorClass {
    DivisorClass {
        coeffs: q.heights().iter().map(|&h| h as i64 + 1).collect(),
    }
}

/// Pullback of the ample generator of the Picard group: the all-ones vector.
pub fn ample_pullback(r: usize) -> Result<DivisorClass> {
    if r < 1 {
        return Err(Error::Argument("length must be >= 1".into()));
    }
    Ok(DivisorClass { coeffs: vec![1; r] })
}

/// Pushforward degree of a 1-cycle class.
pub fn degree(x: &OneCycleClass) -> i64 {
    x.pairings.iter().sum()
}

/// Membership in the cone: `x_i >= 0` for all `i` and `x_i > 0` for
/// `i` in `[1, n-2]`.
pub fn is_in_a1_plus(x: &OneCycleClass, n: usize) -> Result<bool> {
    let r = n * (n - 1) / 2;
    if x.pairings.len() != r {
        return Err(Error::Argument(format!(
            "class has length {}, expected r = {r}",
            x.pairings.len()
        )));
    }
    let nonneg = x.pairings.iter().all(|&v| v >= 0);
    let strict = x.pairings[..n - 2].iter().all(|&v| v > 0);
    Ok(nonneg && strict)
}

/// One fibration step of the positivity check.
#[derive(Clone, Debug, Serialize)]
pub struct FibrationStep {
    pub index: usize,
    /// `(T_i - xi_i) . class`
    pub value: i64,
    /// "free" when `class . xi_i > 0`, "rigid" otherwise.
    pub flag: &'static str,
}

/// Per-step values `(T_i - xi_i) . class` with the free/rigid flag; all
/// values must be positive on the cone.
pub fn fibration_positivity(x: &OneCycleClass, tangents: &[DivisorClass]) -> Vec<FibrationStep> {
    tangents
        .iter()
        .enumerate()
        .map(|(idx, t)| {
            let i = idx + 1;
            FibrationStep {
                index: i,
                value: t.pair(x) - x.pairings[idx],
                flag: if x.pairings[idx] > 0 { "free" } else { "rigid" },
            }
        })
        .collect()
}

/// Morphism-space dimension `-K . class` for a class in the cone.
pub fn mor_dimension(x: &OneCycleClass, q: &Quiver) -> Result<i64> {
    if !is_in_a1_plus(x, q.rank())? {
        return Err(Error::Domain(
            "dimension formula only holds on the positive cone".into(),
        ));
    }
    Ok(anticanonical(q).pair(x))
}

/// Upper bound `2(n-1)d - (n-2)(n-3)/2` on the morphism-space dimension.
pub fn dimension_bound(n: usize, d: i64) -> i64 {
    let n = n as i64;
    2 * (n - 1) * d - (n - 2) * (n - 3) / 2
}

/// All cone classes of pushforward degree `d`, in lexicographic order.
pub fn enumerate_positive_classes(n: usize, d: i64) -> Vec<OneCycleClass> {
    let r = n * (n - 1) / 2;
    let strict = n - 2;
    let mut out = Vec::new();
    if d < strict as i64 {
        return out;
    }
    let mut current = vec![0i64; r];
    fn rec(
        current: &mut Vec<i64>,
        pos: usize,
        remaining: i64,
        strict: usize,
        out: &mut Vec<OneCycleClass>,
    ) {
        let r = current.len();
        if pos == r {
            if remaining == 0 {
                out.push(OneCycleClass {
                    pairings: current.clone(),
                });
            }
            return;
        }
        let lo = if pos < strict { 1 } else { 0 };
        // Later strict positions still need at least 1 each.
        let later_min = strict.saturating_sub(pos + 1) as i64;
        for v in lo..=(remaining - later_min) {
            current[pos] = v;
            rec(current, pos + 1, remaining - v, strict, out);
        }
        current[pos] = 0;
    }
    rec(&mut current, 0, d, strict, &mut out);
    out
}

/// Exhaustive argmax of the dimension over the degree-`d` cone classes.
///
/// Returns the maximizer, its dimension, and whether it is unique.
pub fn extremal_class(n: usize, d: i64, q: &Quiver) -> Result<(OneCycleClass, i64, bool)> {
    let classes = enumerate_positive_classes(n, d);
    if classes.is_empty() {
        return Err(Error::Domain(format!(
            "no cone classes of degree {d} at rank {n}"
        )));
    }
    let anti = anticanonical(q);
    let mut best: Option<(OneCycleClass, i64)> = None;
    let mut unique = true;
    for x in classes {
        let dim = anti.pair(&x);
        match &best {
            None => best = Some((x, dim)),
            Some((_, b)) if dim > *b => {
                best = Some((x, dim));
                unique = true;
            }
            Some((_, b)) if dim == *b => unique = false,
            _ => {}
        }
    }
    let (x, dim) = best.expect("nonempty");
    Ok((x, dim, unique))
}

/// Dimension bookkeeping for the stratum of curves landing in a codimension-`k`
/// linear subspace.
#[derive(Clone, Debug, Serialize)]
pub struct StratumCount {
    pub n: usize,
    pub d: i64,
    pub k: usize,
    /// `(n-k)d + k(n-k)`
    pub dim_mk: i64,
    /// `(n-2)d + k(k-1)/2`
    pub fiber_dim: i64,
    /// `(2n-k-2)d + k(n-k) + k(k-1)/2`
    pub total_dim: i64,
    /// `2(n-1)d`
    pub bound: i64,
    pub admissible: bool,
}

pub fn stratum_dims(n: usize, d: i64, k: usize) -> Result<StratumCount> {
    if k < 2 || k > n - 1 {
        return Err(Error::Argument(format!("k = {k} out of [2,{}]", n - 1)));
    }
    if d < 1 {
        return Err(Error::Argument(format!("degree must be >= 1, got {d}")));
    }
    let (ni, ki) = (n as i64, k as i64);
    let dim_mk = (ni - ki) * d + ki * (ni - ki);
    let fiber_dim = (ni - 2) * d + ki * (ki - 1) / 2;
    let total_dim = (2 * ni - ki - 2) * d + ki * (ni - ki) + ki * (ki - 1) / 2;
    let bound = 2 * (ni - 1) * d;
    Ok(StratumCount {
        n,
        d,
        k,
        dim_mk,
        fiber_dim,
        total_dim,
        bound,
        admissible: total_dim < bound,
    })
}

/// Smallest degree from which every stratum `k` in `[2, n-1]` is admissible.
pub fn min_degree_threshold(n: usize) -> i64 {
    let mut d = 1i64;
    loop {
        let all = (2..=(n - 1)).all(|k| stratum_dims(n, d, k).expect("valid range").admissible);
        if all {
            return d;
        }
        d += 1;
    }
}

/// The two candidate incidence-fiber dimensions against the flag-variety
/// dimension. Only the flag-family value balances the penalty term.
#[derive(Clone, Debug, Serialize)]
pub struct IncidenceBalance {
    pub n: usize,
    /// `n(n-1)`
    pub dim_gb: i64,
    /// `2(n-1) + n(n-1)/2`
    pub fiber_a: i64,
    /// `(2n-3) + n(n-1)/2`
    pub fiber_b: i64,
    /// `(n-2)(n-3)/2`
    pub penalty: i64,
    pub balanced_a: bool,
    pub balanced_b: bool,
}

pub fn incidence_balance(n: usize) -> IncidenceBalance {
    let ni = n as i64;
    let dim_gb = ni * (ni - 1);
    let fiber_a = 2 * (ni - 1) + ni * (ni - 1) / 2;
    let fiber_b = (2 * ni - 3) + ni * (ni - 1) / 2;
    let penalty = (ni - 2) * (ni - 3) / 2;
    IncidenceBalance {
        n,
        dim_gb,
        fiber_a,
        fiber_b,
        penalty,
        balanced_a: dim_gb - fiber_a == penalty,
        balanced_b: dim_gb - fiber_b == penalty,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsword::{build_quiver, pairing_matrix, spinor_word};

    fn setup(n: usize) -> (Quiver, Vec<DivisorClass>) {
        let w = spinor_word(n).unwrap();
        (
            build_quiver(&w),
            relative_tangent_classes(&pairing_matrix(&w)),
        )
    }

    #[test]
    fn tangent_classes() {
        let (_, t4) = setup(4);
        assert_eq!(t4[0].coeffs(), &[2, 0, 0, 0, 0, 0]);
        assert_eq!(t4[1].coeffs(), &[1, 2, 0, 0, 0, 0]);
        assert_eq!(t4[3].coeffs(), &[1, 1, 0, 2, 0, 0]);
    }

    #[test]
    fn anticanonical_class() {
        let (q4, _) = setup(4);
        assert_eq!(anticanonical(&q4).coeffs(), &[6, 5, 4, 4, 3, 2]);
        let (q5, _) = setup(5);
        assert_eq!(anticanonical(&q5).coeffs()[0], 8);
        assert_eq!(*anticanonical(&q5).coeffs().last().unwrap(), 2);
    }

    #[test]
    fn tangent_sum_equals_anticanonical() {
        for n in 3..=9 {
            let (q, ts) = setup(n);
            let r = q.len();
            let mut total = vec![0i64; r];
            for t in &ts {
                for (acc, c) in total.iter_mut().zip(t.coeffs()) {
                    *acc += c;
                }
            }
            assert_eq!(total, anticanonical(&q).coeffs(), "n = {n}");
        }
    }

    #[test]
    fn ample_and_degree() {
        assert_eq!(ample_pullback(6).unwrap().coeffs(), &[1; 6]);
        assert_eq!(ample_pullback(10).unwrap().coeffs(), &[1; 10]);
        assert!(ample_pullback(0).is_err());
        let x = OneCycleClass::new(vec![2, 1, 0, 0, 0, 0]);
        assert_eq!(degree(&x), 3);
        assert_eq!(ample_pullback(6).unwrap().pair(&x), 3);
        assert_eq!(degree(&OneCycleClass::new(vec![0; 6])), 0);
    }

    #[test]
    fn cone_membership() {
        assert!(is_in_a1_plus(&OneCycleClass::new(vec![2, 1, 0, 0, 0, 0]), 4).unwrap());
        assert!(!is_in_a1_plus(&OneCycleClass::new(vec![0, 1, 1, 1, 0, 0]), 4).unwrap());
        assert!(!is_in_a1_plus(&OneCycleClass::new(vec![2, 1, -1, 0, 0, 0]), 4).unwrap());
        assert!(is_in_a1_plus(&OneCycleClass::new(vec![1, 1, 1]), 5).is_err());
    }

    #[test]
    fn positivity_report() {
        let (_, t4) = setup(4);
        let x = OneCycleClass::new(vec![2, 1, 0, 0, 0, 0]);
        let steps = fibration_positivity(&x, &t4);
        assert_eq!(steps[0].value, 2);
        assert_eq!(steps[0].flag, "free");
        assert_eq!(steps[2].flag, "rigid");
        assert!(steps.iter().all(|s| s.value > 0));
    }

    #[test]
    fn positivity_on_whole_cone() {
        for n in 3..=7usize {
            let (_, ts) = setup(n);
            for d in (n as i64 - 1)..=(n as i64 + 3) {
                for x in enumerate_positive_classes(n, d) {
                    let steps = fibration_positivity(&x, &ts);
                    assert!(steps.iter().all(|s| s.value > 0), "n={n} d={d} x={x:?}");
                }
            }
        }
    }

    #[test]
    fn dimensions() {
        let (q4, _) = setup(4);
        let x = OneCycleClass::new(vec![2, 1, 0, 0, 0, 0]);
        assert_eq!(mor_dimension(&x, &q4).unwrap(), 17);
        let (q5, _) = setup(5);
        let a0 = OneCycleClass::new(vec![4, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(mor_dimension(&a0, &q5).unwrap(), 45);
        // Full weight on xi_1: coefficient h(1)+1 = 2(n-1).
        let heavy = OneCycleClass::new(vec![3, 1, 0, 0, 0, 0]);
        assert!(mor_dimension(&heavy, &q4).is_ok());
        let bad = OneCycleClass::new(vec![0, 1, 0, 0, 0, 0]);
        assert!(mor_dimension(&bad, &q4).is_err());
    }

    #[test]
    fn weight_on_first_vertex_matches_expected_dimension() {
        // A class with all free weight on xi_1 (n = 3 has no other strict
        // slot) has dimension 2(n-1)d.
        let (q3, _) = setup(3);
        for d in 1..=6 {
            let x = OneCycleClass::new(vec![d, 0, 0]);
            assert_eq!(mor_dimension(&x, &q3).unwrap(), 4 * d);
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(dimension_bound(5, 6), 45);
        assert_eq!(dimension_bound(4, 3), 17);
        for d in 1..=5 {
            assert_eq!(dimension_bound(3, d), 4 * d);
        }
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_positive_classes(4, 3).len(), 6);
        assert!(enumerate_positive_classes(4, 1).is_empty());
        let c31 = enumerate_positive_classes(3, 1);
        assert_eq!(c31, vec![OneCycleClass::new(vec![1, 0, 0])]);
        // Lexicographic order.
        let cs = enumerate_positive_classes(4, 3);
        let mut sorted = cs.clone();
        sorted.sort();
        assert_eq!(cs, sorted);
    }

    #[test]
    fn extremal_classes() {
        let (q4, _) = setup(4);
        let (x, dim, unique) = extremal_class(4, 3, &q4).unwrap();
        assert_eq!(x.pairings(), &[2, 1, 0, 0, 0, 0]);
        assert_eq!(dim, 17);
        assert!(unique);
        let (q5, _) = setup(5);
        let (x, dim, unique) = extremal_class(5, 6, &q5).unwrap();
        assert_eq!(x.pairings(), &[4, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(dim, 45);
        assert!(unique);
        let (q3, _) = setup(3);
        let (x, dim, _) = extremal_class(3, 2, &q3).unwrap();
        assert_eq!(x.pairings(), &[2, 0, 0]);
        assert_eq!(dim, 8);
    }

    #[test]
    fn extremal_shape_and_uniqueness() {
        for n in 3..=7usize {
            let (q, _) = setup(n);
            for d in (n as i64 - 1)..=(n as i64 + 3) {
                let (x, dim, unique) = extremal_class(n, d, &q).unwrap();
                assert_eq!(dim, dimension_bound(n, d));
                assert!(unique, "n={n} d={d}");
                let r = n * (n - 1) / 2;
                let mut expected = vec![0i64; r];
                expected[0] = d - n as i64 + 3;
                for e in expected.iter_mut().take(n - 2).skip(1) {
                    *e = 1;
                }
                assert_eq!(x.pairings(), expected.as_slice(), "n={n} d={d}");
                // Everything else is strictly below the bound.
                let anti = anticanonical(&q);
                for y in enumerate_positive_classes(n, d) {
                    if y != x {
                        assert!(anti.pair(&y) < dim);
                    }
                }
            }
        }
    }

    #[test]
    fn strata() {
        let s = stratum_dims(5, 6, 2).unwrap();
        assert_eq!((s.total_dim, s.bound, s.admissible), (43, 48, true));
        let s = stratum_dims(5, 3, 2).unwrap();
        assert_eq!((s.total_dim, s.bound, s.admissible), (25, 24, false));
        let s = stratum_dims(5, 4, 2).unwrap();
        assert_eq!((s.total_dim, s.bound, s.admissible), (31, 32, true));
        assert!(stratum_dims(5, 4, 1).is_err());
        assert!(stratum_dims(5, 4, 5).is_err());
        assert!(stratum_dims(5, 0, 2).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(min_degree_threshold(5), 4);
        assert_eq!(min_degree_threshold(4), 3);
        assert_eq!(min_degree_threshold(3), 2);
        for n in 3..=12usize {
            let t = min_degree_threshold(n);
            assert_eq!(t, n as i64 - 1);
            // The binding stratum at d = t - 1 is k = 2.
            if t > 1 {
                assert!(!stratum_dims(n, t - 1, 2).unwrap().admissible);
            }
        }
    }

    #[test]
    fn incidence() {
        let b = incidence_balance(5);
        assert_eq!(b.dim_gb, 20);
        assert_eq!(b.fiber_b, 17);
        assert_eq!(b.penalty, 3);
        assert!(b.balanced_b);
        assert_eq!(b.fiber_a, 18);
        assert!(!b.balanced_a);
        let b3 = incidence_balance(3);
        assert_eq!(b3.penalty, 0);
        assert!(b3.balanced_b);
        for n in 3..=12 {
            let b = incidence_balance(n);
            assert!(b.balanced_b);
            if n >= 4 {
                assert!(!b.balanced_a);
            }
        }
    }
}
