//! Exact integer matrices, Smith normal form, and Hermite-style lattice bases.
//!
//! Entries are arbitrary-precision (`num_bigint::BigInt`) throughout the
//! reduction kernel; intermediate entry growth during elimination must never
//! wrap. Callers that hold small data (group-ring coefficient vectors, element
//! coordinates) convert at the boundary.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(dim: usize, cols: &[Vec<BigInt>]) -> Self {
        IntMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += t;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }
                })
            })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// row[i] += q * row[k]
    fn row_add(&mut self, i: usize, k: usize, q: &BigInt) {
        assert_ne!(i, k);
        for j in 0..self.cols {
            if !self[(k, j)].is_zero() {
                let t = q * &self[(k, j)];
                self[(i, j)] += t;
            }
        }
    }

    /// col[j] += q * col[k]
    fn col_add(&mut self, j: usize, k: usize, q: &BigInt) {
        assert_ne!(j, k);
        for i in 0..self.rows {
            if !self[(i, k)].is_zero() {
                let t = q * &self[(i, k)];
                self[(i, j)] += t;
            }
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = t / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `S = U·M·V` with unimodular `U`, `V`. The diagonal of `S`
/// is nonnegative with each entry dividing the next; trailing entries are zero.
/// `u_inv`/`v_inv` are tracked during reduction so quotient constructions can
/// lift representatives without a separate inversion step.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `S` (length `min(rows, cols)`), including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Quotient-and-remainder with the remainder minimized in absolute value.
/// Keeps elimination entries small.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b); // truncated: a = q·b + r with |r| < |b|
    if &r.abs() * 2 > b.abs() {
        if r.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Computes the Smith normal form of `m`.
pub fn smith(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    // Row op A := E·A mirrors as U := E·U, U⁻¹ := U⁻¹·E⁻¹; column op A := A·E
    // mirrors as V := V·E, V⁻¹ := E⁻¹·V⁻¹.
    macro_rules! rswap {
        ($a:expr, $b:expr) => {{
            s.swap_rows($a, $b);
            u.swap_rows($a, $b);
            u_inv.swap_cols($a, $b);
        }};
    }
    macro_rules! cswap {
        ($a:expr, $b:expr) => {{
            s.swap_cols($a, $b);
            v.swap_cols($a, $b);
            v_inv.swap_rows($a, $b);
        }};
    }
    macro_rules! radd {
        // row[i] += q*row[k]
        ($i:expr, $k:expr, $q:expr) => {{
            let q: BigInt = $q;
            s.row_add($i, $k, &q);
            u.row_add($i, $k, &q);
            u_inv.col_add($k, $i, &(-&q));
        }};
    }
    macro_rules! cadd {
        // col[j] += q*col[k]
        ($j:expr, $k:expr, $q:expr) => {{
            let q: BigInt = $q;
            s.col_add($j, $k, &q);
            v.col_add($j, $k, &q);
            v_inv.row_add($k, $j, &(-&q));
        }};
    }

    let n = r.min(c);
    for t in 0..n {
        'pivot: loop {
            // Minimal-absolute-value nonzero entry of the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !s[(i, j)].is_zero()
                        && best.map_or(true, |(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => break 'pivot, // trailing submatrix is zero
            };
            rswap!(t, pi);
            cswap!(t, pj);

            let mut dirty = false;
            for i in t + 1..r {
                if !s[(i, t)].is_zero() {
                    let q = nearest_quotient(&s[(i, t)], &s[(t, t)]);
                    if !q.is_zero() {
                        radd!(i, t, -q);
                    }
                    if !s[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..c {
                if !s[(t, j)].is_zero() {
                    let q = nearest_quotient(&s[(t, j)], &s[(t, t)]);
                    if !q.is_zero() {
                        cadd!(j, t, -q);
                    }
                    if !s[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot; // strictly smaller entries exist; re-pick pivot
            }
            // Row and column are clear. Enforce that the pivot divides the
            // remainder of the matrix, folding offenders into this pivot slot.
            let mut offender = None;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    radd!(t, i, BigInt::one());
                    continue 'pivot;
                }
                None => break 'pivot,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        if s[(t, t)].is_zero() {
            break; // once a diagonal entry is zero the rest are too
        }
    }

    debug_assert_eq!(u.mul(m).mul(&v), s, "S = U·M·V violated");
    debug_assert!(u.mul(&u_inv).is_identity());
    debug_assert!(v.mul(&v_inv).is_identity());
    SmithForm { u, s, v, u_inv, v_inv }
}

/// Basis of the integer kernel `{x : Mx = 0}`: the columns of `V` matched to
/// zero diagonal entries of `S` (and to columns beyond the diagonal).
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let sf = smith(m);
    let n = m.rows.min(m.cols);
    let mut out = Vec::new();
    for j in 0..m.cols {
        let diag_zero = j >= n || sf.s[(j, j)].is_zero();
        if diag_zero {
            out.push(sf.v.col(j));
        }
    }
    out
}

/// Row-style Hermite basis of an integer lattice in `Z^cols`, kept canonical:
/// strictly increasing pivot columns, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`. Canonicity makes lattice equality a plain
/// structural comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hermite {
    pub cols: usize,
    /// Sorted by pivot column.
    rows: Vec<Vec<BigInt>>,
}

fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

impl Hermite {
    pub fn new(cols: usize) -> Self {
        Hermite { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, gens: impl IntoIterator<Item = Vec<BigInt>>) -> Self {
        let mut h = Hermite::new(cols);
        for g in gens {
            h.insert(g);
        }
        h
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn pivot_of(&self, idx: usize) -> usize {
        first_nonzero(&self.rows[idx]).expect("basis rows are nonzero")
    }

    /// Inserts a vector, returning true when it enlarged the lattice.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut grew = false;
        loop {
            let j = match first_nonzero(&v) {
                Some(j) => j,
                None => break,
            };
            // Find the basis row with this pivot, if any.
            let pos = self.rows.binary_search_by_key(&j, |r| first_nonzero(r).unwrap());
            match pos {
                Ok(idx) => {
                    let p = self.rows[idx][j].clone();
                    let q = v[j].div_floor(&p);
                    if !q.is_zero() {
                        for k in j..self.cols {
                            if !self.rows[idx][k].is_zero() {
                                let t = &q * &self.rows[idx][k];
                                v[k] -= t;
                            }
                        }
                    }
                    if v[j].is_zero() {
                        continue; // move on to the next column
                    }
                    // 0 < v[j] < p: v becomes the better row for this pivot.
                    std::mem::swap(&mut self.rows[idx], &mut v);
                    grew = true;
                }
                Err(idx) => {
                    if v[j].is_negative() {
                        for x in v.iter_mut() {
                            *x = -std::mem::take(x);
                        }
                    }
                    self.rows.insert(idx, v);
                    grew = true;
                    break;
                }
            }
        }
        if grew {
            self.back_reduce();
        }
        grew
    }

    /// Restores canonical form: entries above each pivot lie in `[0, pivot)`.
    fn back_reduce(&mut self) {
        for upper in 0..self.rows.len() {
            for lower in upper + 1..self.rows.len() {
                let p = self.pivot_of(lower);
                let piv = self.rows[lower][p].clone();
                let q = self.rows[upper][p].div_floor(&piv);
                if !q.is_zero() {
                    for k in p..self.cols {
                        if !self.rows[lower][k].is_zero() {
                            let t = &q * &self.rows[lower][k];
                            self.rows[upper][k] -= t;
                        }
                    }
                }
            }
        }
    }

    /// Reduces `v` modulo the lattice; the zero vector means membership.
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        for row in &self.rows {
            let j = first_nonzero(row).unwrap();
            if v[j].is_zero() {
                continue;
            }
            let q = v[j].div_floor(&row[j]);
            if !q.is_zero() {
                for k in j..self.cols {
                    if !row[k].is_zero() {
                        let t = &q * &row[k];
                        v[k] -= t;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Index of the lattice inside `Z^cols` restricted to its pivot columns is
    /// the product of pivots; for a full-rank lattice this is the index in
    /// `Z^cols`, i.e. the order of the quotient.
    pub fn pivot_product(&self) -> BigInt {
        let mut p = BigInt::one();
        for (idx, row) in self.rows.iter().enumerate() {
            let j = first_nonzero(row).unwrap();
            p *= &row[j];
            let _ = idx;
        }
        p
    }
}

/// Determinantal-divisor oracle: `d_1 ⋯ d_k = gcd` of all `k×k` minors.
/// Exponential in the matrix size; used only to cross-check `smith` on small
/// matrices in tests.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    let n = m.rows.min(m.cols);
    if n > 6 {
        return Err(Error::cap("minors oracle limited to 6x6".to_string()));
    }
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in combinations(m.rows, k) {
            for cols in combinations(m.cols, k) {
                let sub = IntMatrix::from_fn(k, k, |i, j| m[(rows[i], cols[j])].clone());
                g = g.gcd(&sub.det());
            }
        }
        if g.is_zero() {
            break; // all k×k minors vanish; remaining factors are zero
        }
        out.push(&g / &prev);
        prev = g;
    }
    while out.len() < n {
        out.push(BigInt::zero());
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let sf = smith(m);
        assert_eq!(sf.u.mul(m).mul(&sf.v), sf.s, "S = U·M·V");
        assert_eq!(sf.u.det().abs(), big(1), "U unimodular");
        assert_eq!(sf.v.det().abs(), big(1), "V unimodular");
        assert!(sf.u.mul(&sf.u_inv).is_identity());
        assert!(sf.v.mul(&sf.v_inv).is_identity());
        let d = sf.diagonal();
        for i in 0..d.len() {
            assert!(d[i] >= big(0));
            if i + 1 < d.len() && !d[i].is_zero() {
                if d[i + 1].is_zero() {
                    continue;
                }
                assert!((&d[i + 1] % &d[i]).is_zero(), "divisibility chain");
            }
            if d[i].is_zero() && i + 1 < d.len() {
                assert!(d[i + 1].is_zero(), "zeros trail");
            }
        }
        sf
    }

    #[test]
    fn smith_diag_2_3() {
        // Expected value frozen from the minors oracle: gcd of entries is 1,
        // determinant 6, so the factors are 1, 6.
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        let oracle = invariant_factors_by_minors(&m).unwrap();
        assert_eq!(oracle, vec![big(1), big(6)]);
        let sf = check_snf(&m);
        assert_eq!(sf.diagonal(), vec![big(1), big(6)]);
    }

    #[test]
    fn smith_2468() {
        // Frozen: D1 = gcd(2,4,6,8) = 2, D2 = |2·8 − 4·6| = 8, factors 2, 4.
        let m = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        let oracle = invariant_factors_by_minors(&m).unwrap();
        assert_eq!(oracle, vec![big(2), big(4)]);
        let sf = check_snf(&m);
        assert_eq!(sf.diagonal(), vec![big(2), big(4)]);
    }

    #[test]
    fn smith_rank_deficient_and_empty() {
        let m = IntMatrix::from_rows_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let sf = check_snf(&m);
        assert_eq!(sf.diagonal(), vec![big(1), big(0)]);

        let empty = IntMatrix::zero(0, 3);
        let sf = smith(&empty);
        assert_eq!(sf.s.rows, 0);
        assert_eq!(sf.v.rows, 3);

        let zero = IntMatrix::zero(2, 2);
        let sf = check_snf(&zero);
        assert_eq!(sf.diagonal(), vec![big(0), big(0)]);
    }

    #[test]
    fn smith_matches_minors_oracle_on_grid() {
        // Small deterministic sweep; the randomized sweep lives in the
        // property-test target.
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![4, 6], vec![6, 9]],
            vec![vec![0, 0], vec![0, 5]],
            vec![vec![1, 2], vec![3, 4]],
            vec![vec![-2, 4, 2], vec![6, -8, 0]],
            vec![vec![12]],
            vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 10]],
        ];
        for rows in cases {
            let m = IntMatrix::from_rows_i64(&rows);
            let sf = check_snf(&m);
            let diag: Vec<BigInt> = sf.diagonal();
            let oracle = invariant_factors_by_minors(&m).unwrap();
            assert_eq!(diag, oracle, "case {rows:?}");
        }
    }

    #[test]
    fn kernel_annihilates() {
        let m = IntMatrix::from_rows_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn hermite_membership_and_canonical_equality() {
        // Lattice spanned by (2,0) and (0,4), presented two different ways.
        let a = Hermite::from_rows(2, vec![vec![big(2), big(0)], vec![big(0), big(4)]]);
        let b = Hermite::from_rows(
            2,
            vec![vec![big(2), big(4)], vec![big(2), big(0)], vec![big(0), big(8)]],
        );
        assert_eq!(a, b);
        assert!(a.contains(&[big(4), big(8)]));
        assert!(!a.contains(&[big(1), big(0)]));
        assert!(!a.contains(&[big(0), big(2)]));
        assert_eq!(a.pivot_product(), big(8));
    }

    #[test]
    fn hermite_insert_reports_growth() {
        let mut h = Hermite::new(2);
        assert!(h.insert(vec![big(0), big(3)]));
        assert!(h.insert(vec![big(2), big(1)]));
        assert!(!h.insert(vec![big(2), big(4)]));
        assert_eq!(h.rank(), 2);
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.det(), big(-8));
        let m = IntMatrix::from_rows_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(m.det(), big(1));
        let m = IntMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det(), big(-1));
    }
}
