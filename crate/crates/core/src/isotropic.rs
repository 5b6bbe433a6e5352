//! Exact geometry in a split quadratic space of dimension `2n`: maximal
//! isotropic subspaces through the skew-matrix chart, subspace lattice
//! operations, configuration-chain reconstruction, flag construction from
//! points, and the exhaustive skew rank census over prime fields.
//!
//! Coordinates: a vector is a length-`2n` row `(e_1..e_n, f_1..f_n)` with
//! `b(e_i, f_j) = delta_ij` and both families isotropic.

use std::collections::BTreeMap;

use rand::Rng;

use crate::field::{Field, Scalar};
use crate::linalg::{dot, sum_and_intersection, Matrix};
use crate::{Error, Result};

/// A `2n`-dimensional hyperbolic quadratic space over `Q` or `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HyperbolicSpace {
    n: usize,
    field: Field,
}

impl HyperbolicSpace {
    pub fn new(n: usize, field: Field) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("rank must be >= 2, got {n}")));
        }
        Ok(HyperbolicSpace { n, field })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// The standard hyperbolic pairing `b(u,v) = sum u_e[i] v_f[i] + u_f[i] v_e[i]`.
    pub fn bilinear(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let f = self.field;
        let n = self.n;
        let mut acc = f.zero();
        for i in 0..n {
            acc = f.add(&acc, &f.mul(&u[i], &v[n + i]));
            acc = f.add(&acc, &f.mul(&u[n + i], &v[i]));
        }
        acc
    }

    /// The quadratic form `q(v) = sum v_e[i] v_f[i]`.
    pub fn quadratic(&self, v: &[Scalar]) -> Scalar {
        let f = self.field;
        let n = self.n;
        let mut acc = f.zero();
        for i in 0..n {
            acc = f.add(&acc, &f.mul(&v[i], &v[n + i]));
        }
        acc
    }

    /// Basis vector `e_i` (1-based).
    pub fn e(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i - 1] = self.field.one();
        v
    }

    /// Basis vector `f_i` (1-based).
    pub fn f(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[self.n + i - 1] = self.field.one();
        v
    }
}

/// Linear subspace in canonical reduced row echelon form; equality of
/// subspaces is representation equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_rows(field: Field, ambient: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let mut m = Matrix::new(field, ambient, rows);
        let mut pivots = m.rref();
        m.rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        pivots.truncate(m.nrows());
        Subspace {
            field,
            ambient,
            basis: m,
            pivots,
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace::from_rows(field, ambient, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis_rows(&self) -> &[Vec<Scalar>] {
        &self.basis.rows
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` lies outside.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let f = self.field;
        // RREF pivot columns carry the coefficients directly.
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (row, c) in self.basis.rows.iter().zip(&coords) {
            for (res, b) in residual.iter_mut().zip(row) {
                let sub = f.mul(c, b);
                *res = f.sub(res, &sub);
            }
        }
        if residual.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.coords_of(v).is_some()
    }

    pub fn is_contained_in(&self, other: &Subspace) -> bool {
        self.basis.rows.iter().all(|r| other.contains_vector(r))
    }
}

/// Exact intersection of two subspaces.
pub fn meet(s: &Subspace, t: &Subspace) -> Result<Subspace> {
    check_same_ambient(s, t)?;
    let (_, int) = sum_and_intersection(&s.basis, &t.basis);
    Ok(Subspace::from_rows(s.field, s.ambient, int.rows))
}

/// Exact sum of two subspaces.
pub fn join(s: &Subspace, t: &Subspace) -> Result<Subspace> {
    check_same_ambient(s, t)?;
    let stacked = s.basis.stacked(&t.basis);
    Ok(Subspace::from_rows(s.field, s.ambient, stacked.rows))
}

fn check_same_ambient(s: &Subspace, t: &Subspace) -> Result<()> {
    if s.ambient != t.ambient || s.field != t.field {
        return Err(Error::Argument("ambient space mismatch".into()));
    }
    Ok(())
}

/// Whether both `b` and `q` vanish identically on the subspace.
pub fn is_totally_isotropic(h: &HyperbolicSpace, s: &Subspace) -> bool {
    let rows = s.basis_rows();
    for (i, u) in rows.iter().enumerate() {
        if !h.quadratic(u).is_zero() {
            return false;
        }
        for v in rows.iter().skip(i + 1) {
            if !h.bilinear(u, v).is_zero() {
                return false;
            }
        }
    }
    true
}

/// An `n x n` skew-symmetric matrix, the chart coordinate for maximal
/// isotropics transverse to `span(f)`. In characteristic 2 the diagonal is
/// required to vanish explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewChart {
    field: Field,
    entries: Vec<Vec<Scalar>>,
}

impl SkewChart {
    #[allow(clippy::needless_range_loop)]
    pub fn new(field: Field, entries: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = entries.len();
        for row in &entries {
            if row.len() != n {
                return Err(Error::Argument("chart matrix must be square".into()));
            }
        }
        for i in 0..n {
            if !entries[i][i].is_zero() {
                return Err(Error::Argument("chart diagonal must vanish".into()));
            }
            for j in (i + 1)..n {
                let neg = field.neg(&entries[j][i]);
                if entries[i][j] != neg {
                    return Err(Error::Argument(format!(
                        "chart matrix not skew at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(SkewChart { field, entries })
    }

    /// Build from the strictly upper triangle, row by row.
    #[allow(clippy::needless_range_loop)]
    pub fn from_upper(field: Field, n: usize, upper: &[Scalar]) -> Result<Self> {
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::Argument("wrong number of upper entries".into()));
        }
        let mut entries = vec![vec![field.zero(); n]; n];
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                entries[i][j] = upper[idx].clone();
                entries[j][i] = field.neg(&upper[idx]);
                idx += 1;
            }
        }
        SkewChart::new(field, entries)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn rank(&self) -> usize {
        let n = self.size();
        Matrix::new(self.field, n, self.entries.clone()).rank()
    }
}

/// Row space of `[I | A]`: the maximal isotropic with rows
/// `v_i = e_i + sum_j A_ij f_j`.
pub fn from_skew_chart(h: &HyperbolicSpace, chart: &SkewChart) -> Result<Subspace> {
    let n = h.rank();
    if chart.size() != n {
        return Err(Error::Argument(format!(
            "chart size {} does not match rank {n}",
            chart.size()
        )));
    }
    let f = h.field();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![f.zero(); 2 * n];
        row[i] = f.one();
        row[n..].clone_from_slice(&chart.entries[i]);
        rows.push(row);
    }
    Ok(Subspace::from_rows(f, 2 * n, rows))
}

/// `span(e_1..e_n)`, the reference maximal isotropic of the chart component.
pub fn span_e(h: &HyperbolicSpace) -> Subspace {
    let rows = (1..=h.rank()).map(|i| h.e(i)).collect();
    Subspace::from_rows(h.field(), h.dim(), rows)
}

/// The reference space used against the chart component: `span(e)` for odd
/// `n`, with the hyperbolic swap `e_n <-> f_n` applied when `n` is even so
/// that a generic chart point meets it in dimension 1.
pub fn reference_isotropic(h: &HyperbolicSpace) -> Subspace {
    let n = h.rank();
    let mut rows: Vec<Vec<Scalar>> = (1..n).map(|i| h.e(i)).collect();
    if n.is_multiple_of(2) {
        rows.push(h.f(n));
    } else {
        rows.push(h.e(n));
    }
    Subspace::from_rows(h.field(), h.dim(), rows)
}

fn require_maximal_isotropic(h: &HyperbolicSpace, s: &Subspace, name: &str) -> Result<()> {
    if s.dim() != h.rank() || !is_totally_isotropic(h, s) {
        return Err(Error::Argument(format!("{name} is not maximal isotropic")));
    }
    Ok(())
}

/// Membership in the open set `U`: the point meets `V` in dimension exactly 1.
pub fn membership_in_u(h: &HyperbolicSpace, x_r: &Subspace, v: &Subspace) -> Result<bool> {
    require_maximal_isotropic(h, x_r, "x_r")?;
    require_maximal_isotropic(h, v, "V")?;
    Ok(meet(x_r, v)?.dim() == 1)
}

/// Complete flag `F_1 subset ... subset F_m` of an `m`-dimensional space,
/// with `dim F_k = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteFlag {
    subspaces: Vec<Subspace>,
}

impl CompleteFlag {
    pub fn new(subspaces: Vec<Subspace>) -> Result<Self> {
        for (k, s) in subspaces.iter().enumerate() {
            if s.dim() != k + 1 {
                return Err(Error::Argument(format!(
                    "flag member {} has dimension {}, expected {}",
                    k + 1,
                    s.dim(),
                    k + 1
                )));
            }
            if k > 0 && !subspaces[k - 1].is_contained_in(s) {
                return Err(Error::Argument(format!(
                    "flag member {} does not contain member {k}",
                    k + 1
                )));
            }
        }
        Ok(CompleteFlag { subspaces })
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    /// `F_k`, 1-based.
    pub fn member(&self, k: usize) -> &Subspace {
        &self.subspaces[k - 1]
    }

    pub fn top(&self) -> &Subspace {
        self.subspaces.last().expect("nonempty flag")
    }
}

/// The reconstructed prefix of the configuration: the line `x_r meet V` and
/// the chain `x_i = line + F_{i-1}` of dimensions `1..=n-1`.
#[derive(Clone, Debug)]
pub struct ChainReconstruction {
    pub line: Subspace,
    pub chain: Vec<Subspace>,
}

/// Recover the first configuration spaces from a general point: the line
/// `x_r meet V` and the subspaces `line + F_{i-1}` for `i` in `[1, n-1]`.
pub fn reconstruct_chain(
    h: &HyperbolicSpace,
    x_r: &Subspace,
    v: &Subspace,
    flag: &CompleteFlag,
) -> Result<ChainReconstruction> {
    let n = h.rank();
    if flag.len() != n || flag.top() != v {
        return Err(Error::Argument("flag must be a complete flag of V".into()));
    }
    let line = meet(x_r, v)?;
    if line.dim() != 1 {
        return Err(Error::Domain(format!(
            "x_r meets V in dimension {}, not 1",
            line.dim()
        )));
    }
    let mut chain = Vec::with_capacity(n - 1);
    for i in 1..=(n - 1) {
        let x_i = if i == 1 {
            line.clone()
        } else {
            join(&line, flag.member(i - 1))?
        };
        if x_i.dim() != i {
            return Err(Error::Degenerate(format!(
                "line lies inside flag member {}",
                i - 1
            )));
        }
        chain.push(x_i);
    }
    Ok(ChainReconstruction { line, chain })
}

/// A point of `U` lies in the open cell iff its trace line on `V` is
/// contained in no proper flag subspace.
pub fn in_open_cell(
    _h: &HyperbolicSpace,
    x: &Subspace,
    v: &Subspace,
    flag: &CompleteFlag,
) -> Result<bool> {
    let line = meet(x, v)?;
    if line.dim() != 1 {
        return Err(Error::Domain("point is not in U".into()));
    }
    for k in 1..flag.len() {
        if line.is_contained_in(flag.member(k)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Build a complete flag of `V` with `q_i` in `F_{i+1}` but not in `F_i`,
/// by descending induction from `F_m = V`.
pub fn build_flag_from_points(v: &Subspace, points: &[Subspace]) -> Result<CompleteFlag> {
    let m = v.dim();
    let field = v.field();
    if points.len() != m - 1 {
        return Err(Error::Argument(format!(
            "expected {} points, got {}",
            m - 1,
            points.len()
        )));
    }
    let mut point_vectors = Vec::with_capacity(m - 1);
    for (idx, p) in points.iter().enumerate() {
        if p.dim() != 1 || !p.is_contained_in(v) {
            return Err(Error::Argument(format!(
                "point {} is not a line of V",
                idx + 1
            )));
        }
        point_vectors.push(p.basis_rows()[0].clone());
    }
    // General position: the first i points span an i-dimensional space.
    for i in 1..=(m - 1) {
        let span = Subspace::from_rows(field, v.ambient_dim(), point_vectors[..i].to_vec());
        if span.dim() != i {
            return Err(Error::Degenerate(format!(
                "points 1..{i} span dimension {}, expected {i}",
                span.dim()
            )));
        }
    }

    let mut members = vec![v.clone()];
    let mut upper = v.clone();
    for i in (1..m).rev() {
        // Choose F_i inside F_{i+1} containing q_1..q_{i-1} and avoiding q_i.
        let coords = |w: &[Scalar]| {
            upper
                .coords_of(w)
                .ok_or_else(|| Error::Degenerate("point escaped the flag member".into()))
        };
        let span_coords: Vec<Vec<Scalar>> = point_vectors[..i - 1]
            .iter()
            .map(|w| coords(w))
            .collect::<Result<_>>()?;
        let qi_coords = coords(&point_vectors[i - 1])?;
        let c = Matrix::new(field, i + 1, span_coords);
        let functionals = c.null_space();
        let phi = functionals
            .iter()
            .find(|y| !dot(&field, y, &qi_coords).is_zero())
            .ok_or_else(|| Error::Degenerate("no hyperplane avoids the point".into()))?;
        let hyperplane = Matrix::new(field, i + 1, vec![phi.clone()]).null_space();
        let rows: Vec<Vec<Scalar>> = hyperplane
            .iter()
            .map(|z| {
                let mut w = vec![field.zero(); v.ambient_dim()];
                for (zj, bj) in z.iter().zip(upper.basis_rows()) {
                    for (wc, bc) in w.iter_mut().zip(bj) {
                        let add = field.mul(zj, bc);
                        *wc = field.add(wc, &add);
                    }
                }
                w
            })
            .collect();
        let f_i = Subspace::from_rows(field, v.ambient_dim(), rows);
        if f_i.dim() != i {
            return Err(Error::Degenerate(
                "hyperplane construction collapsed".into(),
            ));
        }
        members.push(f_i.clone());
        upper = f_i;
    }
    members.reverse();
    CompleteFlag::new(members)
}

/// Fast rank of a skew matrix over `F_p`, entries given by the strictly
/// upper triangle encoded as base-`p` digits of `index`.
#[allow(clippy::needless_range_loop)]
fn skew_rank_mod_p(n: usize, p: u64, index: u128) -> usize {
    let mut a = vec![vec![0i64; n]; n];
    let mut rem = index;
    let pi = p as i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let digit = (rem % p as u128) as i64;
            rem /= p as u128;
            a[i][j] = digit;
            a[j][i] = (pi - digit) % pi;
        }
    }
    // Gaussian elimination mod p.
    let inv = |x: i64| -> i64 {
        let mut acc = 1i64;
        let mut b = x.rem_euclid(pi);
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % pi;
            }
            b = b * b % pi;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&i| a[i][col] % pi != 0) else {
            continue;
        };
        a.swap(row, pr);
        let iv = inv(a[row][col]);
        for c in col..n {
            a[row][c] = a[row][c] * iv % pi;
        }
        for i in 0..n {
            if i != row && a[i][col] % pi != 0 {
                let factor = a[i][col];
                for c in col..n {
                    a[i][c] = (a[i][c] - factor * a[row][c]).rem_euclid(pi);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == n {
            break;
        }
    }
    rank
}

/// Number of skew `n x n` matrices over `F_p`.
pub fn skew_census_size(n: usize, p: u64) -> u128 {
    let m = n * (n - 1) / 2;
    (0..m).fold(1u128, |acc, _| acc * p as u128)
}

/// Rank histogram of the skew matrices with chart index in `[lo, hi)`.
pub fn skew_rank_census_range(n: usize, p: u64, lo: u128, hi: u128) -> BTreeMap<usize, u64> {
    let mut counts = BTreeMap::new();
    let mut index = lo;
    while index < hi {
        let r = skew_rank_mod_p(n, p, index);
        *counts.entry(r).or_insert(0) += 1;
        index += 1;
    }
    counts
}

/// Exhaustive rank census of all skew `n x n` matrices over `F_p`.
pub fn skew_rank_census(n: usize, p: u64, cap: u128) -> Result<BTreeMap<usize, u64>> {
    let total = skew_census_size(n, p);
    if total > cap {
        return Err(Error::ResourceCap(format!(
            "census of {total} matrices exceeds cap {cap}"
        )));
    }
    Ok(skew_rank_census_range(n, p, 0, total))
}

/// Decode a census index into a chart over `F_p`.
pub fn skew_chart_from_index(n: usize, p: u64, index: u128) -> Result<SkewChart> {
    let field = Field::prime(p)?;
    let m = n * (n - 1) / 2;
    let mut upper = Vec::with_capacity(m);
    let mut rem = index;
    for _ in 0..m {
        upper.push(Scalar::Mod((rem % p as u128) as u64));
        rem /= p as u128;
    }
    SkewChart::from_upper(field, n, &upper)
}

/// A random skew chart with entries drawn by the field's sampler.
pub fn random_skew(n: usize, field: Field, rng: &mut impl Rng) -> SkewChart {
    let m = n * (n - 1) / 2;
    let upper: Vec<Scalar> = (0..m).map(|_| field.random(rng)).collect();
    SkewChart::from_upper(field, n, &upper).expect("skew by construction")
}

/// A random line of `sub` (retries until the sampled combination is nonzero).
pub fn random_point_in(sub: &Subspace, rng: &mut impl Rng) -> Subspace {
    let field = sub.field();
    loop {
        let mut w = vec![field.zero(); sub.ambient_dim()];
        for row in sub.basis_rows() {
            let c = field.random(rng);
            for (wc, bc) in w.iter_mut().zip(row) {
                let add = field.mul(&c, bc);
                *wc = field.add(wc, &add);
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            return Subspace::from_rows(field, sub.ambient_dim(), vec![w]);
        }
    }
}

/// `dim(V) - 1` random points of `P(V)` in general position.
pub fn random_general_points(v: &Subspace, rng: &mut impl Rng) -> Vec<Subspace> {
    let m = v.dim();
    let field = v.field();
    let mut points: Vec<Subspace> = Vec::new();
    let mut vectors: Vec<Vec<Scalar>> = Vec::new();
    while points.len() < m - 1 {
        let p = random_point_in(v, rng);
        let w = p.basis_rows()[0].clone();
        let mut cand = vectors.clone();
        cand.push(w.clone());
        let span = Subspace::from_rows(field, v.ambient_dim(), cand);
        if span.dim() == vectors.len() + 1 {
            vectors.push(w);
            points.push(p);
        }
    }
    points
}

/// A random complete flag of `v`, as nested spans of a random basis.
pub fn random_complete_flag(v: &Subspace, rng: &mut impl Rng) -> CompleteFlag {
    let m = v.dim();
    let field = v.field();
    let mut vectors: Vec<Vec<Scalar>> = Vec::new();
    let mut members = Vec::new();
    while vectors.len() < m {
        let p = random_point_in(v, rng);
        let w = p.basis_rows()[0].clone();
        let mut cand = vectors.clone();
        cand.push(w.clone());
        let span = Subspace::from_rows(field, v.ambient_dim(), cand);
        if span.dim() == vectors.len() + 1 {
            vectors.push(w);
            members.push(span);
        }
    }
    CompleteFlag::new(members).expect("nested spans")
}
