//! Integral group rings and relative polynomial maps.
//!
//! For a finite group `G` with integral group ring `ℤ(G)` and augmentation
//! ideal `I(G)`, a normalized map `f: G -> A` into an abelian group extends
//! linearly to `f̄: ℤ(G) -> A`.  `f` is *polynomial of degree ≤ n relative to
//! a normal subgroup B* when `f̄` vanishes on the coset `1 + I(B)I(G) +
//! I^{n+1}(G)`, equivalently `f(1) = 0` and `f̄` kills the ideal lattice
//! `I(B)I(G) + I^{n+1}(G)`.  The universal such map is the coset map
//! `p_n: a ↦ (a-1)` into the quotient
//!
//! ```text
//!     P_n(G,B) = I(G) / (I(B)I(G) + I^{n+1}(G)),
//! ```
//!
//! a finitely generated abelian group computed here as an explicit cokernel
//! over the basis `{a - 1 : a ≠ 1}` of `I(G)`.  For degree 2 and central `B`
//! the quotient carries a pairing `μ₂` on the tensor square of `G/BG′` that
//! mirrors the bilinear part of a quadratic map; [`factor_poly`] produces both
//! the factorization `f̄` through `p_n` and that bilinear part, cross-checked
//! against the group-theoretic one from [`crate::quadmaps`].

use serde::{Deserialize, Serialize};

use crate::abelian::{sub_equal, tensor_square, AbElt, AbMap, AbSub, FgAb, TensorProduct};
use crate::error::{Error, Result};
use crate::groups::{
    derived_subgroup, fgab_to_group, lower_central_series, product_subgroup, quotient,
    subquotient_ab, AbDictionary, FiniteGroup, GroupSpec, Quotient, Subgroup,
};
use crate::matrix::{Hermite, IntMatrix};
use crate::quadmaps::{bilinear_part, GroupFunction};
use crate::DEFAULT_ORDER_CAP;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Element of `ℤ(G)`: integer coefficients indexed by group element.
pub type RingElt = Vec<i64>;

/// Arithmetic context for `ℤ(G)`.
#[derive(Debug, Clone)]
pub struct GroupRing {
    pub group: FiniteGroup,
}

impl GroupRing {
    pub fn new(g: &FiniteGroup) -> Self {
        GroupRing { group: g.clone() }
    }

    pub fn zero(&self) -> RingElt {
        vec![0; self.group.size]
    }

    /// The basis element `a` itself.
    pub fn delta(&self, a: u32) -> RingElt {
        let mut v = self.zero();
        v[a as usize] = 1;
        v
    }

    pub fn one(&self) -> RingElt {
        self.delta(self.group.id())
    }

    /// The augmentation-ideal generator `a - 1`.
    pub fn aug_gen(&self, a: u32) -> RingElt {
        let mut v = self.zero();
        v[a as usize] += 1;
        v[self.group.id() as usize] -= 1;
        v
    }

    pub fn add(&self, x: &RingElt, y: &RingElt) -> RingElt {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &RingElt, y: &RingElt) -> RingElt {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn neg(&self, x: &RingElt) -> RingElt {
        x.iter().map(|a| -a).collect()
    }

    pub fn smul(&self, k: i64, x: &RingElt) -> RingElt {
        x.iter().map(|a| k * a).collect()
    }

    /// Convolution product through the multiplication table.
    pub fn mul(&self, x: &RingElt, y: &RingElt) -> RingElt {
        let mut out = self.zero();
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                out[self.group.mul(a as u32, b as u32) as usize] += xa * yb;
            }
        }
        out
    }

    /// Ring commutator `xy - yx`.
    pub fn bracket(&self, x: &RingElt, y: &RingElt) -> RingElt {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// Coefficient sum; zero exactly on the augmentation ideal.
    pub fn augmentation(&self, x: &RingElt) -> i64 {
        x.iter().sum()
    }

    pub fn is_zero(&self, x: &RingElt) -> bool {
        x.iter().all(|&a| a == 0)
    }
}

fn to_big(x: &RingElt) -> Vec<BigInt> {
    x.iter().map(|&a| BigInt::from(a)).collect()
}

fn to_i64_row(row: &[BigInt]) -> RingElt {
    row.iter()
        .map(|a| a.to_i64().expect("lattice coefficient fits in i64"))
        .collect()
}

/// Full-rank-or-less sublattice of `ℤ(G)` spanned by products of
/// augmentation-ideal generators.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    pub group: FiniteGroup,
    /// Generating products fed into the canonical form.
    pub gens: Vec<RingElt>,
    /// Canonical row Hermite form of the span.
    pub lattice: Hermite,
}

impl IdealLattice {
    pub fn contains(&self, x: &RingElt) -> bool {
        self.lattice.contains(&to_big(x))
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Basis rows converted back to ring elements.
    pub fn basis_elts(&self) -> Vec<RingElt> {
        self.lattice.basis().iter().map(|r| to_i64_row(r)).collect()
    }
}

/// `I^k(G)` as a lattice.  Built stage by stage: the span of all products
/// `(a₁-1)⋯(a_k-1)` over every group element equals the span of
/// `basis(I^{k-1}) · (a-1)`, which needs `|G|·rank` convolutions per stage
/// instead of `|G|^k`.  The budget guard still prices the `|G|^k` literal
/// product count, and closure under multiplication is asserted on all pairs
/// of basis rows.
pub fn ideal_power(g: &FiniteGroup, k: usize, budget: u64) -> Result<IdealLattice> {
    if k == 0 {
        return Err(Error::invalid("ideal power needs k >= 1"));
    }
    let literal = (g.size as u128).pow(k as u32);
    if literal > budget as u128 {
        return Err(Error::cap(format!(
            "ideal power needs {literal} generator products, over the budget of {budget}"
        )));
    }
    let ring = GroupRing::new(g);
    let id = g.id();
    let mut gens: Vec<RingElt> = g
        .elements()
        .filter(|&a| a != id)
        .map(|a| ring.aug_gen(a))
        .collect();
    let mut lattice = Hermite::from_rows(g.size, gens.iter().map(|v| to_big(v)));
    for _ in 2..=k {
        let basis = lattice.basis().iter().map(|r| to_i64_row(r)).collect::<Vec<_>>();
        let mut next = Hermite::new(g.size);
        let mut stage = Vec::new();
        for row in &basis {
            for a in g.elements().filter(|&a| a != id) {
                let prod = ring.mul(row, &ring.aug_gen(a));
                next.insert(to_big(&prod));
                stage.push(prod);
            }
        }
        lattice = next;
        gens = stage;
    }
    let out = IdealLattice { group: g.clone(), gens, lattice };
    for x in out.basis_elts() {
        for y in out.basis_elts() {
            assert!(out.contains(&ring.mul(&x, &y)), "ideal power not closed under products");
        }
    }
    Ok(out)
}

/// `I(B)I(G)` as a lattice, from the literal products `(b-1)(a-1)`.
pub fn ideal_product(g: &FiniteGroup, b: &Subgroup, budget: u64) -> Result<IdealLattice> {
    assert_eq!(&b.parent, g, "subgroup belongs to a different group");
    let count = (b.order() as u128) * (g.size as u128);
    if count > budget as u128 {
        return Err(Error::cap(format!(
            "ideal product needs {count} generator products, over the budget of {budget}"
        )));
    }
    let ring = GroupRing::new(g);
    let id = g.id();
    let mut gens = Vec::new();
    let mut lattice = Hermite::new(g.size);
    for &h in b.elements.iter().filter(|&&h| h != id) {
        for a in g.elements().filter(|&a| a != id) {
            let prod = ring.mul(&ring.aug_gen(h), &ring.aug_gen(a));
            lattice.insert(to_big(&prod));
            gens.push(prod);
        }
    }
    Ok(IdealLattice { group: g.clone(), gens, lattice })
}

/// `I(B)I(G) + I^{n+1}(G)`, the ideal a degree-n relative polynomial map
/// must annihilate.
pub fn relation_ideal(g: &FiniteGroup, b: &Subgroup, n: usize, budget: u64) -> Result<IdealLattice> {
    let power = ideal_power(g, n + 1, budget)?;
    let product = ideal_product(g, b, budget)?;
    let mut lattice = power.lattice.clone();
    for row in product.lattice.basis() {
        lattice.insert(row.clone());
    }
    let mut gens = product.gens;
    gens.extend(power.gens);
    Ok(IdealLattice { group: g.clone(), gens, lattice })
}

/// Position of a non-identity element in the `{a - 1}` basis of `I(G)`.
fn vslot(g: &FiniteGroup, a: u32) -> usize {
    debug_assert_ne!(a, g.id());
    if a < g.id() {
        a as usize
    } else {
        a as usize - 1
    }
}

/// Inverse of [`vslot`].
fn velt(g: &FiniteGroup, slot: usize) -> u32 {
    if (slot as u32) < g.id() {
        slot as u32
    } else {
        slot as u32 + 1
    }
}

/// The degree-n polynomial group `P_n(G,B) = I(G)/(I(B)I(G) + I^{n+1}(G))`
/// together with its coset map and, for degree 2 and central `B`, the tensor
/// pairing `μ₂`.
#[derive(Debug, Clone)]
pub struct PassiGroup {
    pub base: FiniteGroup,
    pub b: Subgroup,
    pub degree: usize,
    /// The divided ideal `I(B)I(G) + I^{n+1}(G)`.
    pub relations: IdealLattice,
    pres: crate::abelian::QuotientPresentation,
    pub group: FgAb,
    /// `G/BG′` in abelian coordinates, present when `μ₂` is.
    pub t: Option<AbDictionary>,
    pub tensor: Option<TensorProduct>,
    /// `μ₂(ā⊗b̄) = ρ₂((a-1)(b-1))`, defined for degree 2 and central `B`.
    pub mu: Option<AbMap>,
}

impl PassiGroup {
    pub fn ring(&self) -> GroupRing {
        GroupRing::new(&self.base)
    }

    /// Quotient map `ρ_n: I(G) -> P_n(G,B)`.  The argument must have
    /// augmentation zero.
    pub fn rho(&self, x: &RingElt) -> AbElt {
        assert_eq!(x.len(), self.base.size, "ring element over the wrong group");
        assert_eq!(x.iter().sum::<i64>(), 0, "rho is defined on the augmentation ideal");
        let mut v = vec![0i64; self.base.size - 1];
        for a in self.base.elements() {
            if a != self.base.id() {
                v[vslot(&self.base, a)] = x[a as usize];
            }
        }
        self.pres.project_i64(&v)
    }

    /// Universal polynomial map `p_n(a) = ρ_n(a - 1)`.
    pub fn p(&self, a: u32) -> AbElt {
        if a == self.base.id() {
            return self.group.zero();
        }
        let mut v = vec![0i64; self.base.size - 1];
        v[vslot(&self.base, a)] = 1;
        self.pres.project_i64(&v)
    }

    /// Factor a system of images of the `{a - 1}` basis through the quotient.
    pub fn induced(&self, images: &[AbElt], codomain: &FgAb) -> Result<AbMap> {
        self.pres.induced(images, codomain)
    }

    /// Group element whose coset `a - 1` occupies ambient slot `s`.
    pub fn basis_element(&self, s: usize) -> u32 {
        velt(&self.base, s)
    }
}

fn build_passi(
    g: &FiniteGroup,
    b: &Subgroup,
    n: usize,
    budget: u64,
    with_mu: bool,
) -> Result<PassiGroup> {
    assert_eq!(&b.parent, g, "subgroup belongs to a different group");
    if n == 0 {
        return Err(Error::invalid("polynomial group needs degree >= 1"));
    }
    if let Some((a, h)) = b.normality_witness() {
        return Err(Error::invalid(format!(
            "relative subgroup is not normal: {a}·{h}·{a}⁻¹ escapes"
        )));
    }
    let relations = relation_ideal(g, b, n, budget)?;
    let id = g.id();
    let cols: Vec<Vec<BigInt>> = relations
        .lattice
        .basis()
        .iter()
        .map(|row| {
            assert!(row.iter().sum::<BigInt>().is_zero(), "relation escapes I(G)");
            let mut v = vec![BigInt::zero(); g.size - 1];
            for a in g.elements() {
                if a != id {
                    v[vslot(g, a)] = row[a as usize].clone();
                }
            }
            v
        })
        .collect();
    let m = IntMatrix::from_cols(g.size - 1, &cols);
    let pres = crate::abelian::cokernel(&m);
    let group = pres.group.clone();
    let mut pg = PassiGroup {
        base: g.clone(),
        b: b.clone(),
        degree: n,
        relations,
        pres,
        group,
        t: None,
        tensor: None,
        mu: None,
    };
    let ring = pg.ring();
    for a in g.elements() {
        assert_eq!(pg.p(a), pg.rho(&ring.aug_gen(a)), "coset map disagrees with rho");
    }
    let central = b.elements.iter().all(|&h| g.elements().all(|a| g.comm(h, a) == id));
    if with_mu && n == 2 && central {
        let bgp = product_subgroup(b, &derived_subgroup(g))?;
        let t = subquotient_ab(g, &Subgroup::whole(g), &bgp)?;
        let ts = tensor_square(&t.group);
        let tr = t.group.rank();
        let rep_of_unit = |i: usize| -> u32 {
            t.reps[t.group.element_index(&t.group.unit(i)) as usize]
        };
        let mut images = vec![pg.group.zero(); tr * tr];
        for i in 0..tr {
            for j in 0..tr {
                let (ri, rj) = (rep_of_unit(i), rep_of_unit(j));
                images[ts.slot(i, j)] = pg.rho(&ring.mul(&ring.aug_gen(ri), &ring.aug_gen(rj)));
            }
        }
        let mu = ts.pres.induced(&images, &pg.group)?;
        for a in g.elements() {
            for c in g.elements() {
                let lhs = mu.apply(&ts.tens(t.to_ab(a), t.to_ab(c)));
                let rhs = pg.rho(&ring.mul(&ring.aug_gen(a), &ring.aug_gen(c)));
                assert_eq!(lhs, rhs, "tensor pairing depends on coset representatives");
            }
        }
        pg.t = Some(t);
        pg.tensor = Some(ts);
        pg.mu = Some(mu);
    }
    Ok(pg)
}

/// Series term `γ_m(G)` (1-indexed; constant past stabilization).
fn gamma_term(series: &[Subgroup], m: usize) -> &Subgroup {
    &series[(m - 1).min(series.len() - 1)]
}

/// Build `P_n(G,B)` for a normal subgroup `B`.
///
/// Beyond the construction itself this certifies the two collapse
/// isomorphisms: dividing `G` by `γ_{n+1}(G)` or enlarging `B` to `Bγ_n(G)`
/// leaves the quotient unchanged, witnessed by explicit induced bijections.
pub fn passi_group(g: &FiniteGroup, b: &Subgroup, n: usize, budget: u64) -> Result<PassiGroup> {
    let pg = build_passi(g, b, n, budget, true)?;
    let series = lower_central_series(g);

    let gn1 = gamma_term(&series, n + 1);
    let qt = quotient(g, gn1)?;
    let mut bbar: Vec<u32> = product_subgroup(b, gn1)?
        .elements
        .iter()
        .map(|&x| qt.proj.apply(x))
        .collect();
    bbar.sort_unstable();
    bbar.dedup();
    let bbar = Subgroup::new(&qt.group, bbar)?;
    let collapsed = build_passi(&qt.group, &bbar, n, budget, false)?;
    let images: Vec<AbElt> = (0..g.size - 1)
        .map(|s| collapsed.p(qt.proj.apply(velt(g, s))))
        .collect();
    let down = pg.pres.induced(&images, &collapsed.group)?;
    assert_eq!(pg.group.factors, collapsed.group.factors, "collapse by γ_{{n+1}} changes P_n");
    assert!(down.is_injective() && down.is_surjective(), "collapse map is not a bijection");

    let gn = gamma_term(&series, n);
    let b_wide = product_subgroup(b, gn)?;
    let widened = build_passi(g, &b_wide, n, budget, false)?;
    let images: Vec<AbElt> = (0..g.size - 1).map(|s| widened.p(velt(g, s))).collect();
    let widen = pg.pres.induced(&images, &widened.group)?;
    assert_eq!(pg.group.factors, widened.group.factors, "widening B by γ_n changes P_n");
    assert!(widen.is_injective() && widen.is_surjective(), "widening map is not a bijection");

    Ok(pg)
}

/// Map from a finite group into a finitely generated abelian group, stored
/// in invariant-factor coordinates.
#[derive(Debug, Clone)]
pub struct AbValuedMap {
    pub domain: FiniteGroup,
    pub codomain: FgAb,
    pub values: Vec<AbElt>,
}

impl AbValuedMap {
    pub fn new(domain: &FiniteGroup, codomain: &FgAb, values: Vec<AbElt>) -> Result<Self> {
        if values.len() != domain.size {
            return Err(Error::invalid(format!(
                "map table has {} entries for a domain of order {}",
                values.len(),
                domain.size
            )));
        }
        let values = values
            .iter()
            .map(|v| {
                if v.len() != codomain.rank() {
                    return Err(Error::invalid("value has the wrong coordinate length"));
                }
                Ok(codomain.reduce_i64(v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AbValuedMap { domain: domain.clone(), codomain: codomain.clone(), values })
    }

    pub fn from_fn(
        domain: &FiniteGroup,
        codomain: &FgAb,
        f: impl Fn(u32) -> AbElt,
    ) -> Result<Self> {
        let values = domain.elements().map(f).collect();
        Self::new(domain, codomain, values)
    }

    pub fn apply(&self, a: u32) -> &AbElt {
        &self.values[a as usize]
    }

    pub fn is_normalized(&self) -> bool {
        self.codomain.is_zero(&self.values[self.domain.id() as usize])
    }

    /// Deviation `f(ab) - f(a) - f(b)`; symmetric in the subtraction order
    /// because the codomain is abelian.
    pub fn deviation(&self, a: u32, b: u32) -> AbElt {
        let fab = self.apply(self.domain.mul(a, b));
        let s = self.codomain.add(self.apply(a), self.apply(b));
        self.codomain.sub(fab, &s)
    }

    /// Linear extension `f̄: ℤ(G) -> A`.
    pub fn fbar(&self, x: &RingElt) -> AbElt {
        let mut out = self.codomain.zero();
        for (a, &c) in x.iter().enumerate() {
            if c != 0 {
                out = self.codomain.add(&out, &self.codomain.smul(c, &self.values[a]));
            }
        }
        out
    }
}

/// Outcome of a polynomial-degree test.  A failing witness is an element of
/// the coset `1 + I(B)I(G) + I^{n+1}(G)` with nonzero image.
#[derive(Debug, Clone)]
pub struct PolyVerdict {
    pub degree: usize,
    pub relative: Vec<u32>,
    pub pass: bool,
    pub witness: Option<RingElt>,
}

/// Lattice route: `f` has degree ≤ n relative to `B` iff `f(1) = 0` and
/// `f̄` kills a basis of `I(B)I(G) + I^{n+1}(G)`.
pub fn is_polynomial(f: &AbValuedMap, n: usize, b: &Subgroup, budget: u64) -> Result<PolyVerdict> {
    assert_eq!(b.parent, f.domain, "subgroup belongs to a different group");
    let g = &f.domain;
    let ring = GroupRing::new(g);
    let ideal = relation_ideal(g, b, n, budget)?;
    let mut witness = None;
    if !f.is_normalized() {
        witness = Some(ring.one());
    } else {
        for row in ideal.basis_elts() {
            if !f.codomain.is_zero(&f.fbar(&row)) {
                witness = Some(ring.add(&ring.one(), &row));
                break;
            }
        }
    }
    Ok(PolyVerdict {
        degree: n,
        relative: b.elements.clone(),
        pass: witness.is_none(),
        witness,
    })
}

/// Checks that a failing witness still certifies failure: it lies in the
/// coset `1 + I(B)I(G) + I^{n+1}(G)` and `f̄` does not kill it.
pub fn poly_witness_reverifies(
    f: &AbValuedMap,
    n: usize,
    b: &Subgroup,
    verdict: &PolyVerdict,
    budget: u64,
) -> Result<bool> {
    let Some(w) = &verdict.witness else {
        return Ok(false);
    };
    let ring = GroupRing::new(&f.domain);
    let ideal = relation_ideal(&f.domain, b, n, budget)?;
    let shifted = ring.sub(w, &ring.one());
    Ok(ideal.contains(&shifted) && !f.codomain.is_zero(&f.fbar(w)))
}

/// Recursive route: degree ≤ 0 means `f = 0`; degree ≤ n means every partial
/// deviation `d_f(a,-)` has absolute degree ≤ n-1 and `d_f` kills `B×G`.
pub fn is_polynomial_rec(
    f: &AbValuedMap,
    n: usize,
    b: &Subgroup,
    budget: u64,
) -> Result<PolyVerdict> {
    assert_eq!(b.parent, f.domain, "subgroup belongs to a different group");
    let g = &f.domain;
    let cost = (g.size as u128).pow(n as u32 + 1);
    if cost > budget as u128 {
        return Err(Error::cap(format!(
            "recursive degree check needs {cost} evaluations, over the budget of {budget}"
        )));
    }
    let pass = rec_degree(f, n, budget)?
        && f.is_normalized()
        && b.elements.iter().all(|&h| {
            g.elements().all(|a| f.codomain.is_zero(&f.deviation(h, a)))
        });
    Ok(PolyVerdict { degree: n, relative: b.elements.clone(), pass, witness: None })
}

fn rec_degree(f: &AbValuedMap, n: usize, budget: u64) -> Result<bool> {
    if n == 0 {
        return Ok(f.values.iter().all(|v| f.codomain.is_zero(v)));
    }
    if !f.is_normalized() {
        return Ok(false);
    }
    for a in f.domain.elements() {
        let partial = AbValuedMap::from_fn(&f.domain, &f.codomain, |x| f.deviation(a, x))?;
        if !rec_degree(&partial, n - 1, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pointwise agreement of the group-theoretic deviation with the image of
/// the ring product `(a-1)(b-1)`, computing the product by full convolution.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationRingReport {
    pub pairs: u64,
    pub holds: bool,
    pub witness: Option<(u32, u32)>,
}

pub fn deviation_ring_identity(f: &AbValuedMap, budget: u64) -> Result<DeviationRingReport> {
    if !f.is_normalized() {
        return Err(Error::invalid("deviation identity needs a normalized map"));
    }
    let g = &f.domain;
    let cost = (g.size as u128).pow(4);
    if cost > budget as u128 {
        return Err(Error::cap(format!(
            "deviation identity needs {cost} ring operations, over the budget of {budget}"
        )));
    }
    let ring = GroupRing::new(g);
    let mut witness = None;
    'outer: for a in g.elements() {
        for b in g.elements() {
            let prod = ring.mul(&ring.aug_gen(a), &ring.aug_gen(b));
            if f.fbar(&prod) != f.deviation(a, b) {
                witness = Some((a, b));
                break 'outer;
            }
        }
    }
    Ok(DeviationRingReport {
        pairs: (g.size as u64) * (g.size as u64),
        holds: witness.is_none(),
        witness,
    })
}

/// Commutator bookkeeping inside `ℤ(G)`: the identity
/// `[a,b] - 1 = ([a-1, b-1])·a⁻¹·b⁻¹` as an exact coefficient-vector
/// equation, plus membership `I(γ_n(G)) ⊆ I^n(G)` checked elementwise on
/// the series term.
#[derive(Debug, Clone, Serialize)]
pub struct GammaIdealReport {
    pub ring_identity_holds: bool,
    pub identity_witness: Option<(u32, u32)>,
    pub membership_holds: bool,
    pub term_order: usize,
}

pub fn gamma_ideal_check(g: &FiniteGroup, n: usize, budget: u64) -> Result<GammaIdealReport> {
    if n < 2 {
        return Err(Error::invalid("series membership starts at n = 2"));
    }
    let cost = (g.size as u128).pow(4);
    if cost > budget as u128 {
        return Err(Error::cap(format!(
            "commutator identity needs {cost} ring operations, over the budget of {budget}"
        )));
    }
    let ring = GroupRing::new(g);
    let mut identity_witness = None;
    'outer: for a in g.elements() {
        for b in g.elements() {
            let lhs = ring.aug_gen(g.comm(a, b));
            let brk = ring.bracket(&ring.aug_gen(a), &ring.aug_gen(b));
            let rhs = ring.mul(&ring.mul(&brk, &ring.delta(g.inv(a))), &ring.delta(g.inv(b)));
            if lhs != rhs {
                identity_witness = Some((a, b));
                break 'outer;
            }
        }
    }
    let series = lower_central_series(g);
    let term = gamma_term(&series, n);
    let power = ideal_power(g, n, budget)?;
    let membership_holds = term
        .elements
        .iter()
        .all(|&c| power.contains(&ring.aug_gen(c)));
    Ok(GammaIdealReport {
        ring_identity_holds: identity_witness.is_none(),
        identity_witness,
        membership_holds,
        term_order: term.order(),
    })
}

/// Factorization of a polynomial map through the universal one.
#[derive(Debug, Clone)]
pub struct FactorPoly {
    /// `f̄: P_n(G,B) -> A` with `f̄ ∘ p_n = f`.
    pub fbar: AbMap,
    /// Bilinear part `w_f = f̄ ∘ μ₂` on the tensor square of `G/BG′`, when
    /// the pairing exists.
    pub w: Option<AbMap>,
}

/// Factor `f` through `p_n`.  Uniqueness of the factorization comes from the
/// coset-map values generating the quotient, which is asserted.  For degree 2
/// with central `B` the resulting bilinear part is cross-checked against the
/// group-theoretic bilinear part of `f` when the codomain is small enough to
/// materialize as a group table.
pub fn factor_poly(f: &AbValuedMap, p: &PassiGroup, budget: u64) -> Result<FactorPoly> {
    assert_eq!(f.domain, p.base, "map and quotient live over different groups");
    let verdict = is_polynomial(f, p.degree, &p.b, budget)?;
    if !verdict.pass {
        return Err(Error::invalid(format!(
            "map is not polynomial of degree <= {} relative to the subgroup",
            p.degree
        )));
    }
    let g = &p.base;
    let images: Vec<AbElt> = (0..g.size - 1).map(|s| f.apply(velt(g, s)).clone()).collect();
    let fbar = p.induced(&images, &f.codomain)?;
    for a in g.elements() {
        assert_eq!(&fbar.apply(&p.p(a)), f.apply(a), "factorization misses the map");
    }
    let span = AbSub::new(p.group.clone(), g.elements().map(|a| p.p(a)).collect());
    assert!(span.is_whole(), "coset-map values do not generate the quotient");
    let w = match (&p.mu, &p.t, &p.tensor) {
        (Some(mu), Some(t), Some(ts)) => {
            let w = fbar.compose(mu);
            for a in g.elements() {
                for c in g.elements() {
                    let lhs = w.apply(&ts.tens(t.to_ab(a), t.to_ab(c)));
                    assert_eq!(lhs, f.deviation(a, c), "bilinear part misses the deviation");
                }
            }
            if let Ok(order) = f.codomain.order_u64() {
                if order <= DEFAULT_ORDER_CAP {
                    let table = fgab_to_group(&f.codomain)?;
                    let gf = GroupFunction::new(
                        g,
                        &table.group,
                        f.values.iter().map(|v| table.index_of(v)).collect(),
                    )?;
                    let part = bilinear_part(&gf, &p.b, budget)?;
                    for a in g.elements() {
                        for c in g.elements() {
                            let via_group = table.elt_of(part.eval_in_codomain(a, c));
                            assert_eq!(
                                via_group,
                                &w.apply(&ts.tens(t.to_ab(a), t.to_ab(c))),
                                "ring and group bilinear parts disagree"
                            );
                        }
                    }
                }
            }
            Some(w)
        }
        _ => None,
    };
    Ok(FactorPoly { fbar, w })
}

/// `P_n(G,B)` as a module over `ℤ(G/B)` acting by left multiplication.
#[derive(Debug, Clone, Serialize)]
pub struct DerivationReport {
    /// `p_n(ab) = ā·p_n(b) + p_n(a)` over all pairs.
    pub derivation_holds: bool,
    pub derivation_witness: Option<(u32, u32)>,
    /// Left multiplication is constant on cosets of `B`.
    pub action_respects_cosets: bool,
    /// `I^n(G/B)` annihilates the module.
    pub module_nilpotent: bool,
}

pub fn derivation_check(p: &PassiGroup, budget: u64) -> Result<DerivationReport> {
    let g = &p.base;
    let ring = p.ring();
    let cost = (g.size as u128).pow(4);
    if cost > budget as u128 {
        return Err(Error::cap(format!(
            "derivation check needs {cost} ring operations, over the budget of {budget}"
        )));
    }
    let mut derivation_witness = None;
    'outer: for a in g.elements() {
        for b in g.elements() {
            let lhs = p.p(g.mul(a, b));
            let acted = p.rho(&ring.mul(&ring.delta(a), &ring.aug_gen(b)));
            let rhs = p.group.add(&acted, &p.p(a));
            if lhs != rhs {
                derivation_witness = Some((a, b));
                break 'outer;
            }
        }
    }
    let mut action_respects_cosets = true;
    'cosets: for a in g.elements() {
        for &h in &p.b.elements {
            let ah = g.mul(a, h);
            for s in 0..g.size - 1 {
                let u = ring.aug_gen(velt(g, s));
                if p.rho(&ring.mul(&ring.delta(ah), &u)) != p.rho(&ring.mul(&ring.delta(a), &u)) {
                    action_respects_cosets = false;
                    break 'cosets;
                }
            }
        }
    }
    let qb = quotient(g, &p.b)?;
    let power = ideal_power(&qb.group, p.degree, budget)?;
    let mut module_nilpotent = true;
    'nilp: for row in power.basis_elts() {
        let mut lift = ring.zero();
        for (c, &coeff) in row.iter().enumerate() {
            lift[qb.reps[c] as usize] += coeff;
        }
        for s in 0..g.size - 1 {
            let acted = ring.mul(&lift, &ring.aug_gen(velt(g, s)));
            if !p.group.is_zero(&p.rho(&acted)) {
                module_nilpotent = false;
                break 'nilp;
            }
        }
    }
    Ok(DerivationReport {
        derivation_holds: derivation_witness.is_none(),
        derivation_witness,
        action_respects_cosets,
        module_nilpotent,
    })
}

/// Right exactness of the coefficient sequence for an abelian normal `B`:
/// the image of `B` under `p_n` is exactly the kernel of the map induced by
/// `G -> G/B`, which is onto.
#[derive(Debug, Clone, Serialize)]
pub struct AugSequenceReport {
    pub surjective: bool,
    pub image_kernel_match: bool,
}

pub fn augmentation_sequence_check(
    g: &FiniteGroup,
    b: &Subgroup,
    n: usize,
    budget: u64,
) -> Result<AugSequenceReport> {
    for &x in &b.elements {
        for &y in &b.elements {
            if g.mul(x, y) != g.mul(y, x) {
                return Err(Error::invalid("coefficient subgroup must be abelian"));
            }
        }
    }
    let prel = passi_group(g, b, n, budget)?;
    let q = quotient(g, b)?;
    let pq = passi_group(&q.group, &Subgroup::trivial(&q.group), n, budget)?;
    let images: Vec<AbElt> = (0..g.size - 1)
        .map(|s| pq.p(q.proj.apply(velt(g, s))))
        .collect();
    let pi_map = prel.induced(&images, &pq.group)?;
    for &x in &b.elements {
        for &y in &b.elements {
            let lhs = prel.p(g.mul(x, y));
            let rhs = prel.group.add(&prel.p(x), &prel.p(y));
            assert_eq!(lhs, rhs, "coset map is not additive on the coefficient subgroup");
        }
    }
    let image = AbSub::new(prel.group.clone(), b.elements.iter().map(|&x| prel.p(x)).collect());
    let kernel = pi_map.kernel();
    Ok(AugSequenceReport {
        surjective: pi_map.is_surjective(),
        image_kernel_match: sub_equal(&image, &kernel)?,
    })
}

/// Degree verdict for a two-variable map, one slot at a time.
#[derive(Debug, Clone)]
pub struct BipolyVerdict {
    pub left_degree: usize,
    pub right_degree: usize,
    pub pass: bool,
    /// Failing slot, basepoint, and coset witness.
    pub witness: Option<(String, u32, RingElt)>,
}

/// A map `f: G×G -> A` is bipolynomial of bidegree ≤ (m,n) when every
/// partial map `a ↦ f(a,b₀)` has absolute degree ≤ m and every
/// `b ↦ f(a₀,b)` has absolute degree ≤ n, over all basepoints.
pub fn bipolynomial(
    g: &FiniteGroup,
    codomain: &FgAb,
    table: &[AbElt],
    m: usize,
    n: usize,
    budget: u64,
) -> Result<BipolyVerdict> {
    if table.len() != g.size * g.size {
        return Err(Error::invalid(format!(
            "bipolynomial table has {} entries for {} pairs",
            table.len(),
            g.size * g.size
        )));
    }
    let triv = Subgroup::trivial(g);
    let mut witness = None;
    'left: for b0 in g.elements() {
        let partial = AbValuedMap::from_fn(g, codomain, |a| {
            table[a as usize * g.size + b0 as usize].clone()
        })?;
        let v = is_polynomial(&partial, m, &triv, budget)?;
        if !v.pass {
            witness = Some(("left".to_string(), b0, v.witness.unwrap()));
            break 'left;
        }
    }
    if witness.is_none() {
        'right: for a0 in g.elements() {
            let partial = AbValuedMap::from_fn(g, codomain, |b| {
                table[a0 as usize * g.size + b as usize].clone()
            })?;
            let v = is_polynomial(&partial, n, &triv, budget)?;
            if !v.pass {
                witness = Some(("right".to_string(), a0, v.witness.unwrap()));
                break 'right;
            }
        }
    }
    Ok(BipolyVerdict { left_degree: m, right_degree: n, pass: witness.is_none(), witness })
}

/// In degree ≥ 2 the coset map turns group commutators into ring
/// commutators: `p([a,b]) = p(a)p(b) - p(b)p(a)` with the product taken in
/// the image of `ℤ(G)`.
pub fn commutator_product_identity(p: &PassiGroup, budget: u64) -> Result<bool> {
    let g = &p.base;
    let ring = p.ring();
    let cost = (g.size as u128).pow(4);
    if cost > budget as u128 {
        return Err(Error::cap(format!(
            "commutator identity needs {cost} ring operations, over the budget of {budget}"
        )));
    }
    for a in g.elements() {
        for b in g.elements() {
            let lhs = p.p(g.comm(a, b));
            let rhs = p.rho(&ring.bracket(&ring.aug_gen(a), &ring.aug_gen(b)));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Serialized codomain descriptor: cyclic orders, canonicalized on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FgAbSpec {
    pub factors: Vec<i64>,
}

/// File form of an abelian-valued map.  `values[a]` indexes into the
/// codomain's element enumeration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyMapSpec {
    #[serde(default)]
    pub domain: Option<GroupSpec>,
    #[serde(default)]
    pub codomain: Option<FgAbSpec>,
    pub values: Vec<u64>,
}

impl PolyMapSpec {
    pub fn realize(
        &self,
        fallback_domain: Option<&FiniteGroup>,
        fallback_codomain: Option<&FgAb>,
    ) -> Result<AbValuedMap> {
        let domain = match (&self.domain, fallback_domain) {
            (Some(spec), _) => crate::groups::construct(spec)?,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(Error::invalid("map file names no domain group")),
        };
        let codomain = match (&self.codomain, fallback_codomain) {
            (Some(spec), _) => FgAb::from_cyclic_orders(&spec.factors)?,
            (None, Some(c)) => c.clone(),
            (None, None) => return Err(Error::invalid("map file names no codomain")),
        };
        let elements = codomain.elements()?;
        let values = self
            .values
            .iter()
            .map(|&i| {
                elements
                    .get(i as usize)
                    .cloned()
                    .ok_or_else(|| {
                        Error::invalid(format!(
                            "value index {i} outside a codomain of order {}",
                            elements.len()
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        AbValuedMap::new(&domain, &codomain, values)
    }
}

/// Quotient context reused by callers that need `G/B` alongside `P_n(G,B)`.
pub fn base_quotient(p: &PassiGroup) -> Result<Quotient> {
    quotient(&p.base, &p.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, dihedral, elementary, quaternion8, symmetric, center};
    use crate::DEFAULT_BUDGET;

    fn b() -> u64 {
        DEFAULT_BUDGET
    }

    #[test]
    fn ring_arithmetic_on_c2() {
        let g = cyclic(2).unwrap();
        let ring = GroupRing::new(&g);
        let v = ring.aug_gen(1);
        let sq = ring.mul(&v, &v);
        assert_eq!(sq, ring.smul(-2, &v));
        let cube = ring.mul(&sq, &v);
        assert_eq!(cube, ring.smul(4, &v));
        assert_eq!(ring.augmentation(&cube), 0);
    }

    #[test]
    fn ideal_power_c2_is_scaled_augmentation() {
        let g = cyclic(2).unwrap();
        let p1 = ideal_power(&g, 1, b()).unwrap();
        assert_eq!(p1.basis_elts(), vec![vec![1, -1]]);
        let p3 = ideal_power(&g, 3, b()).unwrap();
        assert_eq!(p3.basis_elts(), vec![vec![4, -4]]);
        let ring = GroupRing::new(&g);
        assert!(p3.contains(&ring.smul(8, &ring.aug_gen(1))));
        assert!(!p3.contains(&ring.smul(2, &ring.aug_gen(1))));
    }

    #[test]
    fn staged_power_matches_literal_products() {
        for (g, k) in [
            (cyclic(4).unwrap(), 3),
            (dihedral(4).unwrap(), 2),
            (symmetric(3).unwrap(), 2),
            (cyclic(2).unwrap(), 4),
        ] {
            let staged = ideal_power(&g, k, b()).unwrap();
            let ring = GroupRing::new(&g);
            let id = g.id();
            let mut literal = Hermite::new(g.size);
            let mut tuples = vec![ring.one()];
            for _ in 0..k {
                tuples = tuples
                    .iter()
                    .flat_map(|t| {
                        g.elements()
                            .filter(|&a| a != id)
                            .map(|a| ring.mul(t, &ring.aug_gen(a)))
                            .collect::<Vec<_>>()
                    })
                    .collect();
            }
            for t in &tuples {
                literal.insert(to_big(t));
            }
            assert_eq!(staged.lattice.basis(), literal.basis());
        }
    }

    #[test]
    fn whole_subgroup_product_is_ideal_square() {
        let g = dihedral(4).unwrap();
        let prod = ideal_product(&g, &Subgroup::whole(&g), b()).unwrap();
        let sq = ideal_power(&g, 2, b()).unwrap();
        assert_eq!(prod.lattice.basis(), sq.lattice.basis());
    }

    #[test]
    fn passi_c2_degree_two_is_z4() {
        let g = cyclic(2).unwrap();
        let p = passi_group(&g, &Subgroup::trivial(&g), 2, b()).unwrap();
        assert_eq!(p.group.factors, vec![4]);
        assert_eq!(p.group.elt_order(&p.p(1)), 4);
    }

    #[test]
    fn whole_relative_subgroup_gives_abelianization() {
        let c2 = cyclic(2).unwrap();
        let p = passi_group(&c2, &Subgroup::whole(&c2), 2, b()).unwrap();
        assert_eq!(p.group.factors, vec![2]);
        let d4 = dihedral(4).unwrap();
        let p = passi_group(&d4, &Subgroup::whole(&d4), 2, b()).unwrap();
        assert_eq!(p.group.factors, vec![2, 2]);
    }

    #[test]
    fn passi_elementary_four_has_order_32() {
        let g = elementary(2, 2).unwrap();
        let p = passi_group(&g, &Subgroup::trivial(&g), 2, b()).unwrap();
        assert_eq!(p.group.order_u64().unwrap(), 32);
    }

    #[test]
    fn collapse_matches_smaller_quotient() {
        let s3 = symmetric(3).unwrap();
        let a3 = derived_subgroup(&s3);
        let p = passi_group(&s3, &a3, 2, b()).unwrap();
        assert_eq!(p.group.factors, vec![4]);
    }

    #[test]
    fn mu_pairing_on_c2() {
        let g = cyclic(2).unwrap();
        let p = passi_group(&g, &Subgroup::trivial(&g), 2, b()).unwrap();
        let (mu, t, ts) = (p.mu.as_ref().unwrap(), p.t.as_ref().unwrap(), p.tensor.as_ref().unwrap());
        let val = mu.apply(&ts.tens(t.to_ab(1), t.to_ab(1)));
        assert_eq!(val, p.group.smul(2, &p.p(1)));
        assert!(!p.group.is_zero(&val));
    }

    #[test]
    fn is_polynomial_examples() {
        let g = cyclic(6).unwrap();
        let zero = AbValuedMap::from_fn(&g, &FgAb::cyclic(5), |_| vec![0]).unwrap();
        assert!(is_polynomial(&zero, 0, &Subgroup::trivial(&g), b()).unwrap().pass);

        let c4 = cyclic(4).unwrap();
        let sq = AbValuedMap::from_fn(&c4, &FgAb::cyclic(8), |k| vec![(k as i64) * (k as i64)])
            .unwrap();
        let triv = Subgroup::trivial(&c4);
        assert!(is_polynomial(&sq, 2, &triv, b()).unwrap().pass);
        let v1 = is_polynomial(&sq, 1, &triv, b()).unwrap();
        assert!(!v1.pass);
        assert!(poly_witness_reverifies(&sq, 1, &triv, &v1, b()).unwrap());
    }

    #[test]
    fn non_homomorphism_fails_relative_to_whole_group() {
        let g = cyclic(4).unwrap();
        let f = AbValuedMap::new(&g, &FgAb::cyclic(2), vec![vec![0], vec![1], vec![0], vec![0]])
            .unwrap();
        let whole = Subgroup::whole(&g);
        let v = is_polynomial(&f, 2, &whole, b()).unwrap();
        assert!(!v.pass);
        assert!(poly_witness_reverifies(&f, 2, &whole, &v, b()).unwrap());
        let r = is_polynomial_rec(&f, 2, &whole, b()).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn lattice_and_recursive_verdicts_agree() {
        let c4 = cyclic(4).unwrap();
        let sq = AbValuedMap::from_fn(&c4, &FgAb::cyclic(8), |k| vec![(k as i64) * (k as i64)])
            .unwrap();
        for n in 0..=3 {
            for sub in [Subgroup::trivial(&c4), Subgroup::whole(&c4)] {
                let a = is_polynomial(&sq, n, &sub, b()).unwrap().pass;
                let r = is_polynomial_rec(&sq, n, &sub, b()).unwrap().pass;
                assert_eq!(a, r, "verdicts split at degree {n}");
            }
        }
        let c2 = cyclic(2).unwrap();
        let cod = FgAb::cyclic(4);
        let triv = Subgroup::trivial(&c2);
        for v in 0..4i64 {
            let f = AbValuedMap::new(&c2, &cod, vec![vec![0], vec![v]]).unwrap();
            for n in 0..=2 {
                let a = is_polynomial(&f, n, &triv, b()).unwrap().pass;
                let r = is_polynomial_rec(&f, n, &triv, b()).unwrap().pass;
                assert_eq!(a, r);
            }
        }
    }

    #[test]
    fn deviation_matches_ring_product() {
        let c4 = cyclic(4).unwrap();
        let sq = AbValuedMap::from_fn(&c4, &FgAb::cyclic(8), |k| vec![(k as i64) * (k as i64)])
            .unwrap();
        let rep = deviation_ring_identity(&sq, b()).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.pairs, 16);
        let d4 = dihedral(4).unwrap();
        let ab = crate::groups::abelianization(&d4);
        let f = AbValuedMap::from_fn(&d4, &ab.group, |a| ab.to_ab(a).clone()).unwrap();
        assert!(deviation_ring_identity(&f, b()).unwrap().holds);
    }

    #[test]
    fn gamma_ideal_on_dihedral_and_quaternion() {
        for g in [dihedral(4).unwrap(), quaternion8()] {
            let rep = gamma_ideal_check(&g, 2, b()).unwrap();
            assert!(rep.ring_identity_holds);
            assert!(rep.membership_holds);
            assert_eq!(rep.term_order, 2);
        }
        let c6 = cyclic(6).unwrap();
        let rep = gamma_ideal_check(&c6, 2, b()).unwrap();
        assert!(rep.ring_identity_holds);
        assert!(rep.membership_holds);
        assert_eq!(rep.term_order, 1);
    }

    #[test]
    fn derived_generator_in_ideal_square() {
        let g = dihedral(4).unwrap();
        let ring = GroupRing::new(&g);
        let sq = ideal_power(&g, 2, b()).unwrap();
        let r2 = g.mul(1, 1);
        assert!(derived_subgroup(&g).contains(r2));
        assert!(sq.contains(&ring.aug_gen(r2)));
    }

    #[test]
    fn factor_coset_map_is_identity() {
        let g = cyclic(4).unwrap();
        let p = passi_group(&g, &Subgroup::trivial(&g), 2, b()).unwrap();
        let f = AbValuedMap::from_fn(&g, &p.group.clone(), |a| p.p(a)).unwrap();
        let fac = factor_poly(&f, &p, b()).unwrap();
        for i in 0..p.group.rank() {
            assert_eq!(fac.fbar.apply(&p.group.unit(i)), p.group.unit(i));
        }
        let mu = p.mu.as_ref().unwrap();
        let w = fac.w.as_ref().unwrap();
        for i in 0..mu.domain.rank() {
            assert_eq!(w.apply(&mu.domain.unit(i)), mu.apply(&mu.domain.unit(i)));
        }
    }

    #[test]
    fn factor_square_map_doubles_tensor() {
        let g = cyclic(4).unwrap();
        let p = passi_group(&g, &Subgroup::trivial(&g), 2, b()).unwrap();
        let cod = FgAb::cyclic(8);
        let sq = AbValuedMap::from_fn(&g, &cod, |k| vec![(k as i64) * (k as i64)]).unwrap();
        let fac = factor_poly(&sq, &p, b()).unwrap();
        let (t, ts) = (p.t.as_ref().unwrap(), p.tensor.as_ref().unwrap());
        let w = fac.w.as_ref().unwrap();
        for i in 0..4u32 {
            for j in 0..4u32 {
                let val = w.apply(&ts.tens(t.to_ab(i), t.to_ab(j)));
                assert_eq!(val, cod.reduce_i64(&[2 * i as i64 * j as i64]));
            }
        }
    }

    #[test]
    fn factor_linear_map_has_zero_bilinear_part() {
        let g = cyclic(4).unwrap();
        let p = passi_group(&g, &Subgroup::trivial(&g), 2, b()).unwrap();
        let f = AbValuedMap::from_fn(&g, &FgAb::cyclic(2), |k| vec![k as i64]).unwrap();
        let fac = factor_poly(&f, &p, b()).unwrap();
        let w = fac.w.as_ref().unwrap();
        for i in 0..w.domain.rank() {
            assert!(w.codomain.is_zero(&w.apply(&w.domain.unit(i))));
        }
    }

    #[test]
    fn rejects_maps_of_higher_degree() {
        let g = cyclic(4).unwrap();
        let p = passi_group(&g, &Subgroup::trivial(&g), 1, b()).unwrap();
        let sq = AbValuedMap::from_fn(&g, &FgAb::cyclic(8), |k| vec![(k as i64) * (k as i64)])
            .unwrap();
        assert!(factor_poly(&sq, &p, b()).is_err());
    }

    #[test]
    fn derivation_reports_pass() {
        let c2 = cyclic(2).unwrap();
        let p = passi_group(&c2, &Subgroup::trivial(&c2), 2, b()).unwrap();
        let rep = derivation_check(&p, b()).unwrap();
        assert!(rep.derivation_holds && rep.action_respects_cosets && rep.module_nilpotent);

        let p1 = passi_group(&c2, &Subgroup::trivial(&c2), 1, b()).unwrap();
        let rep = derivation_check(&p1, b()).unwrap();
        assert!(rep.derivation_holds && rep.module_nilpotent);
        for x in c2.elements() {
            for y in c2.elements() {
                let lhs = p1.p(c2.mul(x, y));
                let rhs = p1.group.add(&p1.p(x), &p1.p(y));
                assert_eq!(lhs, rhs, "degree-1 coset map must be additive");
            }
        }

        let d4 = dihedral(4).unwrap();
        let z = center(&d4);
        let p = passi_group(&d4, &z, 2, b()).unwrap();
        let rep = derivation_check(&p, b()).unwrap();
        assert!(rep.derivation_holds && rep.action_respects_cosets && rep.module_nilpotent);
    }

    #[test]
    fn augmentation_sequence_on_s3() {
        let s3 = symmetric(3).unwrap();
        let a3 = derived_subgroup(&s3);
        let rep = augmentation_sequence_check(&s3, &a3, 2, b()).unwrap();
        assert!(rep.surjective);
        assert!(rep.image_kernel_match);
    }

    #[test]
    fn augmentation_sequence_rejects_nonabelian_coefficients() {
        let s3 = symmetric(3).unwrap();
        assert!(augmentation_sequence_check(&s3, &Subgroup::whole(&s3), 2, b()).is_err());
    }

    #[test]
    fn commutator_map_is_bipolynomial_on_sixteen_dihedral() {
        let g = dihedral(8).unwrap();
        assert_eq!(crate::groups::nilpotency_class(&g), Some(3));
        let der = derived_subgroup(&g);
        let dict = subquotient_ab(&g, &der, &Subgroup::trivial(&g)).unwrap();
        let mut table = Vec::with_capacity(g.size * g.size);
        for a in g.elements() {
            for c in g.elements() {
                table.push(dict.to_ab(g.comm(a, c)).clone());
            }
        }
        let v = bipolynomial(&g, &dict.group, &table, 2, 2, b()).unwrap();
        assert!(v.pass);
        let v1 = bipolynomial(&g, &dict.group, &table, 1, 1, b()).unwrap();
        assert!(!v1.pass);
        let (slot, base, w) = v1.witness.as_ref().unwrap();
        let partial = match slot.as_str() {
            "left" => AbValuedMap::from_fn(&g, &dict.group, |a| {
                table[a as usize * g.size + *base as usize].clone()
            })
            .unwrap(),
            _ => AbValuedMap::from_fn(&g, &dict.group, |c| {
                table[*base as usize * g.size + c as usize].clone()
            })
            .unwrap(),
        };
        let verdict = PolyVerdict {
            degree: 1,
            relative: vec![g.id()],
            pass: false,
            witness: Some(w.clone()),
        };
        assert!(poly_witness_reverifies(&partial, 1, &Subgroup::trivial(&g), &verdict, b())
            .unwrap());
    }

    #[test]
    fn tensor_map_is_bilinear_on_abelian_groups() {
        let g = crate::groups::direct_product(&cyclic(2).unwrap(), &cyclic(4).unwrap()).unwrap();
        let dict = subquotient_ab(&g, &Subgroup::whole(&g), &Subgroup::trivial(&g)).unwrap();
        let ts = tensor_square(&dict.group);
        let mut table = Vec::with_capacity(g.size * g.size);
        for a in g.elements() {
            for c in g.elements() {
                table.push(ts.tens(dict.to_ab(a), dict.to_ab(c)));
            }
        }
        let v = bipolynomial(&g, &ts.group, &table, 1, 1, b()).unwrap();
        assert!(v.pass);
    }

    #[test]
    fn coset_map_turns_commutators_into_ring_commutators() {
        for g in [dihedral(4).unwrap(), quaternion8()] {
            let p = passi_group(&g, &Subgroup::trivial(&g), 2, b()).unwrap();
            assert!(commutator_product_identity(&p, b()).unwrap());
        }
    }

    #[test]
    fn poly_map_spec_roundtrip() {
        let text = r#"{
            "domain": {"kind": "builtin", "family": "cyclic", "params": {"n": 4}},
            "codomain": {"factors": [8]},
            "values": [0, 1, 4, 1]
        }"#;
        let spec: PolyMapSpec = serde_json::from_str(text).unwrap();
        let f = spec.realize(None, None).unwrap();
        assert_eq!(f.values, vec![vec![0], vec![1], vec![4], vec![1]]);
        let triv = Subgroup::trivial(&f.domain);
        assert!(is_polynomial(&f, 2, &triv, b()).unwrap().pass);
        let bad: PolyMapSpec = serde_json::from_str(
            r#"{"codomain": {"factors": [2]}, "values": [0, 5]}"#,
        )
        .unwrap();
        let c2 = cyclic(2).unwrap();
        assert!(bad.realize(Some(&c2), None).is_err());
    }
}
