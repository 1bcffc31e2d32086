//! Finitely generated abelian groups in invariant-factor coordinates, with
//! homomorphisms, kernels, images, quotients, tensor and exterior squares.
//!
//! An element of an `FgAb` with factors `d_1 | d_2 | … | d_k` (followed by
//! zeros for free summands) is a coordinate vector reduced componentwise into
//! `[0, d_i)`; free coordinates are unreduced. All constructions reduce to the
//! exact integer-matrix layer in `matrix`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{kernel_basis, smith, Hermite, IntMatrix};
use crate::DEFAULT_ENUM_CAP;

/// Element of an `FgAb`, componentwise-reduced coordinates.
pub type AbElt = Vec<i64>;

/// Finitely generated abelian group `⊕ Z/d_i ⊕ Z^r` with `d_1 | d_2 | …`,
/// each `d_i > 1`, free summands recorded as trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FgAb {
    pub factors: Vec<i64>,
}

impl FgAb {
    /// Validates the invariant-factor convention: entries `> 1` in a
    /// divisibility chain, then zeros.
    pub fn new(factors: Vec<i64>) -> Result<Self> {
        let mut seen_zero = false;
        for (i, &d) in factors.iter().enumerate() {
            if d == 0 {
                seen_zero = true;
                continue;
            }
            if seen_zero || d <= 1 {
                return Err(Error::invalid(format!(
                    "invariant factors must be >1 then zeros, got {factors:?}"
                )));
            }
            if i > 0 && factors[i - 1] != 0 && d % factors[i - 1] != 0 {
                return Err(Error::invalid(format!(
                    "invariant factor chain broken at position {i}: {factors:?}"
                )));
            }
        }
        Ok(FgAb { factors })
    }

    pub fn trivial() -> Self {
        FgAb { factors: vec![] }
    }

    pub fn cyclic(n: i64) -> Self {
        assert!(n >= 0);
        if n == 1 {
            FgAb::trivial()
        } else {
            FgAb { factors: vec![n] }
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAb { factors: vec![0; rank] }
    }

    /// Canonicalizes an arbitrary list of cyclic orders (`0` meaning `Z`)
    /// into invariant factors, e.g. `[2,3] → [6]`.
    pub fn from_cyclic_orders(orders: &[i64]) -> Result<Self> {
        for &d in orders {
            if d < 0 {
                return Err(Error::invalid(format!("negative cyclic order {d}")));
            }
        }
        let n = orders.len();
        let diag = IntMatrix::from_fn(n, n, |i, j| {
            if i == j { BigInt::from(orders[i]) } else { BigInt::zero() }
        });
        Ok(cokernel(&diag).group)
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `None` when there is a free summand.
    pub fn order(&self) -> Option<BigInt> {
        let mut p = BigInt::from(1);
        for &d in &self.factors {
            if d == 0 {
                return None;
            }
            p *= d;
        }
        Some(p)
    }

    pub fn order_u64(&self) -> Result<u64> {
        self.order()
            .and_then(|o| o.to_u64())
            .ok_or_else(|| Error::cap(format!("group order out of range for {}", self)))
    }

    pub fn zero(&self) -> AbElt {
        vec![0; self.rank()]
    }

    pub fn is_zero(&self, e: &AbElt) -> bool {
        e.iter().all(|&x| x == 0)
    }

    pub fn reduce(&self, v: &[BigInt]) -> AbElt {
        assert_eq!(v.len(), self.rank());
        v.iter()
            .zip(&self.factors)
            .map(|(x, &d)| {
                if d == 0 {
                    x.to_i64().expect("free coordinate out of i64 range")
                } else {
                    x.mod_floor(&BigInt::from(d)).to_i64().unwrap()
                }
            })
            .collect()
    }

    pub fn reduce_i64(&self, v: &[i64]) -> AbElt {
        assert_eq!(v.len(), self.rank());
        v.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| if d == 0 { x } else { x.rem_euclid(d) })
            .collect()
    }

    pub fn add(&self, a: &AbElt, b: &AbElt) -> AbElt {
        self.reduce_i64(&a.iter().zip(b).map(|(&x, &y)| x + y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &AbElt) -> AbElt {
        self.reduce_i64(&a.iter().map(|&x| -x).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &AbElt, b: &AbElt) -> AbElt {
        self.add(a, &self.neg(b))
    }

    pub fn smul(&self, k: i64, a: &AbElt) -> AbElt {
        let v: Vec<BigInt> = a.iter().map(|&x| BigInt::from(k) * x).collect();
        self.reduce(&v)
    }

    pub fn unit(&self, i: usize) -> AbElt {
        let mut e = self.zero();
        if self.factors[i] != 1 {
            e[i] = 1;
        }
        self.reduce_i64(&e)
    }

    /// Additive order of an element (finite groups only).
    pub fn elt_order(&self, e: &AbElt) -> u64 {
        let mut ord: u64 = 1;
        for (&x, &d) in e.iter().zip(&self.factors) {
            assert!(d > 0, "element order in a free group");
            let d = d as u64;
            let x = x as u64;
            let o = d / d.gcd(&x.max(1));
            let o = if x == 0 { 1 } else { o };
            ord = ord.lcm(&o);
        }
        ord
    }

    /// All elements in mixed-radix order, first coordinate most significant.
    pub fn elements(&self) -> Result<Vec<AbElt>> {
        let order = self
            .order()
            .ok_or_else(|| Error::cap("cannot enumerate a group with free summands"))?;
        if order > BigInt::from(DEFAULT_ENUM_CAP) {
            return Err(Error::cap(format!(
                "enumeration refused: order {order} exceeds {DEFAULT_ENUM_CAP}"
            )));
        }
        let n = order.to_u64().unwrap() as usize;
        let mut out = Vec::with_capacity(n);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            // odometer: last coordinate fastest
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.factors[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Rank of an element under the `elements()` ordering.
    pub fn element_index(&self, e: &AbElt) -> u64 {
        let mut idx: u64 = 0;
        for (&x, &d) in e.iter().zip(&self.factors) {
            assert!(d > 0);
            idx = idx * d as u64 + x as u64;
        }
        idx
    }

    /// Relation lattice rows `d_i·e_i` for the finite factors.
    fn relation_rows(&self) -> Vec<Vec<BigInt>> {
        let n = self.rank();
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = BigInt::from(d);
                r
            })
            .collect()
    }
}

impl std::fmt::Display for FgAb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Presentation of a quotient `Z^ambient / colspan(M)` together with exact
/// projection and a section lifting elements back to the ambient lattice.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    pub ambient_rank: usize,
    pub group: FgAb,
    u: IntMatrix,
    u_inv: IntMatrix,
    kept: Vec<usize>,
}

impl QuotientPresentation {
    pub fn project(&self, v: &[BigInt]) -> AbElt {
        assert_eq!(v.len(), self.ambient_rank);
        let y = self.u.apply(v);
        let coords: Vec<BigInt> = self.kept.iter().map(|&i| y[i].clone()).collect();
        self.group.reduce(&coords)
    }

    pub fn project_i64(&self, v: &[i64]) -> AbElt {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.project(&big)
    }

    /// Section: `project(lift(e)) == e` for every element.
    pub fn lift(&self, e: &AbElt) -> Vec<BigInt> {
        assert_eq!(e.len(), self.group.rank());
        let mut y = vec![BigInt::zero(); self.ambient_rank];
        for (k, &i) in self.kept.iter().enumerate() {
            y[i] = BigInt::from(e[k]);
        }
        self.u_inv.apply(&y)
    }

    /// Map out of the quotient determined by images of the ambient basis
    /// vectors; fails if the assignment does not kill the relations.
    pub fn induced(&self, ambient_images: &[AbElt], codomain: &FgAb) -> Result<AbMap> {
        assert_eq!(ambient_images.len(), self.ambient_rank);
        let cols: Vec<AbElt> = (0..self.group.rank())
            .map(|k| {
                let z = self.lift(&self.group.unit(k));
                let mut acc = vec![BigInt::zero(); codomain.rank()];
                for (j, coeff) in z.iter().enumerate() {
                    if !coeff.is_zero() {
                        for (t, &c) in ambient_images[j].iter().enumerate() {
                            acc[t] += coeff * c;
                        }
                    }
                }
                codomain.reduce(&acc)
            })
            .collect();
        AbMap::new(self.group.clone(), codomain.clone(), cols)
    }
}

/// Cokernel `Z^rows(M) / colspan(M)`. Relations are the columns of `M`.
pub fn cokernel(m: &IntMatrix) -> QuotientPresentation {
    let n = m.rows;
    let sf = smith(m);
    let nd = n.min(m.cols);
    let mut kept = Vec::new();
    let mut factors = Vec::new();
    for i in 0..n {
        let d = if i < nd { sf.s[(i, i)].to_i64().expect("factor fits i64") } else { 0 };
        if d != 1 {
            kept.push(i);
            factors.push(d);
        }
    }
    let group = FgAb::new(factors).expect("smith yields a valid chain");
    QuotientPresentation { ambient_rank: n, group, u: sf.u, u_inv: sf.u_inv, kept }
}

/// Homomorphism of finitely generated abelian groups, stored as the reduced
/// images of the domain generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbMap {
    pub domain: FgAb,
    pub codomain: FgAb,
    /// `cols[i]` = image of the i-th domain generator.
    pub cols: Vec<AbElt>,
}

impl AbMap {
    /// Checks well-definedness: `d_i · cols[i] = 0` in the codomain.
    pub fn new(domain: FgAb, codomain: FgAb, cols: Vec<AbElt>) -> Result<Self> {
        if cols.len() != domain.rank() {
            return Err(Error::invalid(format!(
                "expected {} generator images, got {}",
                domain.rank(),
                cols.len()
            )));
        }
        let cols: Vec<AbElt> = cols.iter().map(|c| codomain.reduce_i64(c)).collect();
        for (i, c) in cols.iter().enumerate() {
            let d = domain.factors[i];
            if d != 0 && !codomain.is_zero(&codomain.smul(d, c)) {
                return Err(Error::invalid(format!(
                    "not a homomorphism: {d}·(generator {i} image) is nonzero"
                )));
            }
        }
        Ok(AbMap { domain, codomain, cols })
    }

    pub fn zero(domain: FgAb, codomain: FgAb) -> Self {
        let z = codomain.zero();
        let cols = vec![z; domain.rank()];
        AbMap { domain, codomain, cols }
    }

    pub fn identity(a: &FgAb) -> Self {
        let cols = (0..a.rank()).map(|i| a.unit(i)).collect();
        AbMap { domain: a.clone(), codomain: a.clone(), cols }
    }

    pub fn scalar(a: &FgAb, k: i64) -> Self {
        let cols = (0..a.rank()).map(|i| a.smul(k, &a.unit(i))).collect();
        AbMap { domain: a.clone(), codomain: a.clone(), cols }
    }

    pub fn apply(&self, x: &AbElt) -> AbElt {
        assert_eq!(x.len(), self.domain.rank());
        let mut acc = vec![BigInt::zero(); self.codomain.rank()];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                for (t, &c) in self.cols[i].iter().enumerate() {
                    acc[t] += BigInt::from(xi) * c;
                }
            }
        }
        self.codomain.reduce(&acc)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AbMap) -> AbMap {
        assert_eq!(other.codomain, self.domain, "composition domain mismatch");
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        AbMap { domain: other.domain.clone(), codomain: self.codomain.clone(), cols }
    }

    pub fn add(&self, other: &AbMap) -> AbMap {
        assert_eq!(self.domain, other.domain);
        assert_eq!(self.codomain, other.codomain);
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| self.codomain.add(a, b))
            .collect();
        AbMap { domain: self.domain.clone(), codomain: self.codomain.clone(), cols }
    }

    pub fn neg(&self) -> AbMap {
        let cols = self.cols.iter().map(|c| self.codomain.neg(c)).collect();
        AbMap { domain: self.domain.clone(), codomain: self.codomain.clone(), cols }
    }

    pub fn kernel(&self) -> AbSub {
        let m = self.domain.rank();
        let n = self.codomain.rank();
        // x ∈ ker iff M·x lies in the codomain relation lattice.
        let rel = self.codomain.relation_rows();
        let stacked = IntMatrix::from_fn(n, m + rel.len(), |i, j| {
            if j < m {
                BigInt::from(self.cols[j].get(i).copied().unwrap_or(0))
            } else {
                rel[j - m][i].clone()
            }
        });
        let gens: Vec<AbElt> = kernel_basis(&stacked)
            .into_iter()
            .map(|v| self.domain.reduce(&v[..m]))
            .collect();
        AbSub::new(self.domain.clone(), gens)
    }

    pub fn image(&self) -> AbSub {
        AbSub::new(self.codomain.clone(), self.cols.clone())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == Some(BigInt::from(1))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }
}

/// Subgroup of an `FgAb`: original generators plus a canonical Hermite basis
/// of the corresponding lattice (generators together with ambient relations),
/// so membership is back-substitution and equality is structural.
#[derive(Debug, Clone)]
pub struct AbSub {
    pub ambient: FgAb,
    pub gens: Vec<AbElt>,
    lattice: Hermite,
}

impl AbSub {
    pub fn new(ambient: FgAb, gens: Vec<AbElt>) -> Self {
        let n = ambient.rank();
        let mut lattice = Hermite::new(n);
        for r in ambient.relation_rows() {
            lattice.insert(r);
        }
        let gens: Vec<AbElt> = gens.iter().map(|g| ambient.reduce_i64(g)).collect();
        for g in &gens {
            lattice.insert(g.iter().map(|&x| BigInt::from(x)).collect());
        }
        AbSub { ambient, gens, lattice }
    }

    pub fn trivial(ambient: FgAb) -> Self {
        AbSub::new(ambient, vec![])
    }

    pub fn whole(ambient: FgAb) -> Self {
        let gens = (0..ambient.rank()).map(|i| ambient.unit(i)).collect();
        AbSub::new(ambient, gens)
    }

    pub fn contains(&self, e: &AbElt) -> bool {
        let v: Vec<BigInt> = self.ambient.reduce_i64(e).iter().map(|&x| BigInt::from(x)).collect();
        self.lattice.contains(&v)
    }

    /// Order of the subgroup when the ambient group is finite.
    pub fn order(&self) -> Option<BigInt> {
        let amb = self.ambient.order()?;
        let idx = self.lattice.pivot_product();
        debug_assert!((&amb % &idx).is_zero());
        Some(amb / idx)
    }

    pub fn insert(&mut self, e: &AbElt) -> bool {
        let e = self.ambient.reduce_i64(e);
        let grew = self.lattice.insert(e.iter().map(|&x| BigInt::from(x)).collect());
        if grew {
            self.gens.push(e);
        }
        grew
    }

    /// True iff the subgroup is all of the ambient group. Lattice membership
    /// of the units, so free ambients are handled too.
    pub fn is_whole(&self) -> bool {
        (0..self.ambient.rank()).all(|i| self.contains(&self.ambient.unit(i)))
    }
}

/// True iff the two subgroups of the same ambient group coincide as sets.
pub fn sub_equal(a: &AbSub, b: &AbSub) -> Result<bool> {
    if a.ambient != b.ambient {
        return Err(Error::invalid(format!(
            "sub_equal over different ambients: {} vs {}",
            a.ambient, b.ambient
        )));
    }
    Ok(a.lattice == b.lattice)
}

/// Tensor product `A ⊗ B` presented over `Z^{rank(A)·rank(B)}` by the
/// Kronecker relations of the two presentations.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub left: FgAb,
    pub right: FgAb,
    pub pres: QuotientPresentation,
    pub group: FgAb,
}

pub fn tensor(a: &FgAb, b: &FgAb) -> TensorProduct {
    let (m, n) = (a.rank(), b.rank());
    let amb = m * n;
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let slot = i * n + j;
            for d in [a.factors[i], b.factors[j]] {
                if d != 0 {
                    let mut r = vec![BigInt::zero(); amb];
                    r[slot] = BigInt::from(d);
                    rel_cols.push(r);
                }
            }
        }
    }
    let mrel = IntMatrix::from_cols(amb, &rel_cols);
    let pres = cokernel(&mrel);
    let group = pres.group.clone();
    TensorProduct { left: a.clone(), right: b.clone(), pres, group }
}

pub fn tensor_square(a: &FgAb) -> TensorProduct {
    tensor(a, a)
}

impl TensorProduct {
    pub fn slot(&self, i: usize, j: usize) -> usize {
        i * self.right.rank() + j
    }

    /// Bilinear encoder `x ⊗ y`.
    pub fn tens(&self, x: &AbElt, y: &AbElt) -> AbElt {
        assert_eq!(x.len(), self.left.rank());
        assert_eq!(y.len(), self.right.rank());
        let mut v = vec![BigInt::zero(); self.pres.ambient_rank];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    v[self.slot(i, j)] += BigInt::from(xi) * yj;
                }
            }
        }
        self.pres.project(&v)
    }

    /// Images of the elementary tensors of unit vectors; these generate.
    pub fn basis_images(&self) -> Vec<AbElt> {
        let mut out = Vec::new();
        for i in 0..self.left.rank() {
            for j in 0..self.right.rank() {
                out.push(self.tens(&self.left.unit(i), &self.right.unit(j)));
            }
        }
        out
    }
}

/// Exterior square `∧²A = (A⊗A)/⟨a⊗a, a⊗b + b⊗a⟩`, presented over the same
/// ambient lattice as the tensor square.
#[derive(Debug, Clone)]
pub struct ExteriorSquare {
    pub base: FgAb,
    pub pres: QuotientPresentation,
    pub group: FgAb,
}

pub fn exterior_square(a: &FgAb) -> ExteriorSquare {
    let m = a.rank();
    let amb = m * m;
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let slot = i * m + j;
            for d in [a.factors[i], a.factors[j]] {
                if d != 0 {
                    let mut r = vec![BigInt::zero(); amb];
                    r[slot] = BigInt::from(d);
                    rel_cols.push(r);
                }
            }
        }
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); amb];
        r[i * m + i] = BigInt::from(1);
        rel_cols.push(r);
    }
    for i in 0..m {
        for j in i + 1..m {
            let mut r = vec![BigInt::zero(); amb];
            r[i * m + j] = BigInt::from(1);
            r[j * m + i] = BigInt::from(1);
            rel_cols.push(r);
        }
    }
    let mrel = IntMatrix::from_cols(amb, &rel_cols);
    let pres = cokernel(&mrel);
    let group = pres.group.clone();
    ExteriorSquare { base: a.clone(), pres, group }
}

impl ExteriorSquare {
    pub fn wedge(&self, x: &AbElt, y: &AbElt) -> AbElt {
        let m = self.base.rank();
        let mut v = vec![BigInt::zero(); self.pres.ambient_rank];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    v[i * m + j] += BigInt::from(xi) * yj;
                }
            }
        }
        self.pres.project(&v)
    }
}

/// The alternation map `l2: ∧²A → A⊗A`, `a∧b ↦ a⊗b − b⊗a`.
pub fn l2_map(t: &TensorProduct, e: &ExteriorSquare) -> Result<AbMap> {
    assert_eq!(t.left, t.right, "l2 needs a tensor square");
    assert_eq!(t.left, e.base);
    let m = e.base.rank();
    let cols: Vec<AbElt> = (0..e.group.rank())
        .map(|k| {
            let z = e.pres.lift(&e.group.unit(k));
            let mut alt = vec![BigInt::zero(); m * m];
            for i in 0..m {
                for j in 0..m {
                    if !z[i * m + j].is_zero() {
                        alt[i * m + j] += &z[i * m + j];
                        alt[j * m + i] -= &z[i * m + j];
                    }
                }
            }
            t.pres.project(&alt)
        })
        .collect();
    AbMap::new(e.group.clone(), t.group.clone(), cols)
}

/// The canonical surjection `A⊗A → ∧²A`.
pub fn wedge_projection(t: &TensorProduct, e: &ExteriorSquare) -> Result<AbMap> {
    assert_eq!(t.left, t.right);
    assert_eq!(t.left, e.base);
    let cols: Vec<AbElt> = (0..t.group.rank())
        .map(|k| e.pres.project(&t.pres.lift(&t.group.unit(k))))
        .collect();
    AbMap::new(t.group.clone(), e.group.clone(), cols)
}

/// Direct sum `A ⊕ B` with its injections, presented over `Z^{rank A + rank B}`.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub left: FgAb,
    pub right: FgAb,
    pub pres: QuotientPresentation,
    pub group: FgAb,
}

pub fn dsum(a: &FgAb, b: &FgAb) -> DirectSum {
    let (m, n) = (a.rank(), b.rank());
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for (i, &d) in a.factors.iter().chain(b.factors.iter()).enumerate() {
        if d != 0 {
            let mut r = vec![BigInt::zero(); m + n];
            r[i] = BigInt::from(d);
            rel_cols.push(r);
        }
    }
    let mrel = IntMatrix::from_cols(m + n, &rel_cols);
    let pres = cokernel(&mrel);
    let group = pres.group.clone();
    DirectSum { left: a.clone(), right: b.clone(), pres, group }
}

impl DirectSum {
    fn embed(&self, x: &AbElt, y: &AbElt) -> AbElt {
        let mut v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        v.extend(y.iter().map(|&c| BigInt::from(c)));
        self.pres.project(&v)
    }

    pub fn inj_left(&self) -> AbMap {
        let cols = (0..self.left.rank())
            .map(|i| self.embed(&self.left.unit(i), &self.right.zero()))
            .collect();
        AbMap { domain: self.left.clone(), codomain: self.group.clone(), cols }
    }

    pub fn inj_right(&self) -> AbMap {
        let cols = (0..self.right.rank())
            .map(|j| self.embed(&self.left.zero(), &self.right.unit(j)))
            .collect();
        AbMap { domain: self.right.clone(), codomain: self.group.clone(), cols }
    }

    /// `[f, g]: A⊕B → C` from `f: A → C`, `g: B → C`.
    pub fn pair_out(&self, f: &AbMap, g: &AbMap) -> Result<AbMap> {
        assert_eq!(f.domain, self.left);
        assert_eq!(g.domain, self.right);
        assert_eq!(f.codomain, g.codomain);
        let images: Vec<AbElt> = f.cols.iter().chain(g.cols.iter()).cloned().collect();
        self.pres.induced(&images, &f.codomain)
    }

    /// `(f, g): X → A⊕B` from `f: X → A`, `g: X → B`.
    pub fn pair_in(&self, f: &AbMap, g: &AbMap) -> AbMap {
        assert_eq!(f.codomain, self.left);
        assert_eq!(g.codomain, self.right);
        assert_eq!(f.domain, g.domain);
        self.inj_left().compose(f).add(&self.inj_right().compose(g))
    }
}
