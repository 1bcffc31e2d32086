//! Deviation calculus for set maps between finite groups: quadraticity
//! certificates, radicals, bilinear parts, the identity suite, composition of
//! quadratic pairs, pointwise sums, and the 2-step nilpotency battery.
//!
//! The codomain is written multiplicatively throughout with one fixed
//! transliteration of additive formulas: "x + y" is x·y, "−x" is x⁻¹, and
//! subtraction order is preserved literally. Every formula below relies on
//! this convention; deviation is d_f(a, b) = f(ab)·f(b)⁻¹·f(a)⁻¹.

use serde::{Deserialize, Serialize};

use crate::abelian::{tensor, AbElt, AbMap, TensorProduct};
use crate::error::{Error, Result};
use crate::groups::{
    construct, derived_subgroup, direct_product, fgab_to_group, nilpotency_class,
    product_subgroup, subquotient_ab, AbDictionary, AbGroupTable, FiniteGroup, GroupHom,
    GroupSpec, Subgroup,
};
/// Total set map between finite groups; no homomorphism requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFunction {
    pub domain: FiniteGroup,
    pub codomain: FiniteGroup,
    pub table: Vec<u32>,
}

impl GroupFunction {
    pub fn new(domain: &FiniteGroup, codomain: &FiniteGroup, table: Vec<u32>) -> Result<Self> {
        if table.len() != domain.size {
            return Err(Error::invalid(format!(
                "map table has {} entries for a domain of order {}",
                table.len(),
                domain.size
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v as usize >= codomain.size) {
            return Err(Error::invalid(format!("map value {v} outside the codomain")));
        }
        Ok(GroupFunction { domain: domain.clone(), codomain: codomain.clone(), table })
    }

    pub fn from_fn(
        domain: &FiniteGroup,
        codomain: &FiniteGroup,
        f: impl Fn(u32) -> u32,
    ) -> Result<Self> {
        GroupFunction::new(domain, codomain, domain.elements().map(f).collect())
    }

    pub fn from_hom(h: &GroupHom) -> Self {
        GroupFunction {
            domain: h.domain.clone(),
            codomain: h.codomain.clone(),
            table: h.table.clone(),
        }
    }

    pub fn apply(&self, a: u32) -> u32 {
        self.table[a as usize]
    }

    /// d_f(a, b) = f(ab)·f(b)⁻¹·f(a)⁻¹.
    pub fn deviation(&self, a: u32, b: u32) -> u32 {
        let h = &self.codomain;
        let fab = self.apply(self.domain.mul(a, b));
        h.mul(fab, h.mul(h.inv(self.apply(b)), h.inv(self.apply(a))))
    }

    /// Pointwise product x ↦ f(x)·g(x), the transliteration of "f + g".
    pub fn pointwise_product(&self, g: &GroupFunction) -> GroupFunction {
        assert_eq!(self.domain, g.domain);
        assert_eq!(self.codomain, g.codomain);
        let table = self
            .table
            .iter()
            .zip(&g.table)
            .map(|(&x, &y)| self.codomain.mul(x, y))
            .collect();
        GroupFunction { domain: self.domain.clone(), codomain: self.codomain.clone(), table }
    }

    /// Pointwise inverse x ↦ f(x)⁻¹, the transliteration of "−f".
    pub fn pointwise_inverse(&self) -> GroupFunction {
        let table = self.table.iter().map(|&x| self.codomain.inv(x)).collect();
        GroupFunction { domain: self.domain.clone(), codomain: self.codomain.clone(), table }
    }
}

/// The squaring map a ↦ a².
pub fn squaring(g: &FiniteGroup) -> GroupFunction {
    GroupFunction::from_fn(g, g, |a| g.mul(a, a)).unwrap()
}

/// The power map a ↦ aⁿ.
pub fn power_map(g: &FiniteGroup, n: u32) -> GroupFunction {
    GroupFunction::from_fn(g, g, |a| g.pow(a, n as i64)).unwrap()
}

pub fn constant_identity(domain: &FiniteGroup, codomain: &FiniteGroup) -> GroupFunction {
    GroupFunction { domain: domain.clone(), codomain: codomain.clone(), table: vec![0; domain.size] }
}

/// Named law violated by a witness tuple; element indices are from the domain
/// unless the law speaks about the codomain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadWitness {
    pub law: String,
    pub elements: Vec<u32>,
}

/// Outcome of the quadraticity scan.
#[derive(Debug, Clone)]
pub struct QuadVerdict {
    pub is_linear: bool,
    pub is_quadratic: bool,
    /// Elements of the relative subgroup the scan used.
    pub relative: Vec<u32>,
    pub counterexample: Option<QuadWitness>,
    /// Subgroup generated by the image of f.
    pub i_f: Subgroup,
    /// Subgroup generated by the deviation values.
    pub d_f: Subgroup,
}

impl QuadVerdict {
    /// Re-evaluates the recorded counterexample against the map table.
    pub fn witness_reverifies(&self, f: &GroupFunction) -> bool {
        let Some(w) = &self.counterexample else { return false };
        let d = |a, b| f.deviation(a, b);
        let h = &f.codomain;
        match (w.law.as_str(), w.elements.as_slice()) {
            ("deviation-left-additivity", &[a, a2, b]) => {
                d(f.domain.mul(a, a2), b) != h.mul(d(a, b), d(a2, b))
            }
            ("deviation-right-additivity", &[a, b, b2]) => {
                d(a, f.domain.mul(b, b2)) != h.mul(d(a, b), d(a, b2))
            }
            ("deviation-centrality", &[a, b, c]) => h.comm(d(a, b), f.apply(c)) != 0,
            ("relative-left-vanishing", &[t, b]) => d(t, b) != 0,
            ("relative-right-vanishing", &[a, t]) => d(a, t) != 0,
            _ => false,
        }
    }
}

fn dev_table(f: &GroupFunction) -> Vec<u32> {
    let n = f.domain.size;
    let mut dev = vec![0u32; n * n];
    crate::scan::fill_rows(&mut dev, n, |a, row| {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = f.deviation(a as u32, b as u32);
        }
    });
    dev
}

/// Exhaustive quadraticity certificate relative `b`. Scans are lexicographic
/// and stop at the least witness; the operation refuses (rather than samples)
/// when the planned number of element evaluations exceeds `budget`.
pub fn quadratic_verdict(
    f: &GroupFunction,
    b: &Subgroup,
    budget: u64,
) -> Result<QuadVerdict> {
    assert_eq!(b.parent, f.domain, "relative subgroup must live in the domain");
    let n = f.domain.size as u64;
    let nb = b.order() as u64;
    let cost = 2 * n * n + 3 * n * n * n + 2 * nb * n + nb * nb;
    if cost > budget {
        return Err(Error::cap(format!(
            "quadraticity scan needs {cost} evaluations, over the budget of {budget}"
        )));
    }

    let dom = &f.domain;
    let h = &f.codomain;
    let nn = dom.size;
    let dev = dev_table(f);
    let d = |a: u32, bb: u32| dev[a as usize * nn + bb as usize];

    let is_linear = crate::scan::first_hit(n * n, |i| {
        let (a, bb) = ((i / n) as u32, (i % n) as u32);
        (f.apply(dom.mul(a, bb)) != h.mul(f.apply(a), f.apply(bb))).then_some(())
    })
    .is_none();

    // I_f and D_f are materialized before the centrality check; centrality in
    // I_f is established on the generators f(c).
    let mut im: Vec<u32> = f.table.clone();
    im.sort_unstable();
    im.dedup();
    let i_f = Subgroup::from_generators(h, &im)?;
    let mut devs: Vec<u32> = dev.clone();
    devs.sort_unstable();
    devs.dedup();
    let d_f = Subgroup::from_generators(h, &devs)?;

    let mut counterexample: Option<QuadWitness> = None;
    let witness = |law: &str, elements: Vec<u32>| QuadWitness { law: law.to_string(), elements };

    // d(a·a′, b) = d(a,b)·d(a′,b)
    if counterexample.is_none() {
        counterexample = crate::scan::first_hit(n, |a| {
            let a = a as u32;
            for a2 in 0..nn as u32 {
                let aa2 = dom.mul(a, a2);
                for bb in 0..nn as u32 {
                    if d(aa2, bb) != h.mul(d(a, bb), d(a2, bb)) {
                        return Some(witness("deviation-left-additivity", vec![a, a2, bb]));
                    }
                }
            }
            None
        });
    }
    // d(a, b·b′) = d(a,b)·d(a,b′)
    if counterexample.is_none() {
        counterexample = crate::scan::first_hit(n, |a| {
            let a = a as u32;
            for bb in 0..nn as u32 {
                for b2 in 0..nn as u32 {
                    if d(a, dom.mul(bb, b2)) != h.mul(d(a, bb), d(a, b2)) {
                        return Some(witness("deviation-right-additivity", vec![a, bb, b2]));
                    }
                }
            }
            None
        });
    }
    // [d(a,b), f(c)] = 1
    if counterexample.is_none() {
        counterexample = crate::scan::first_hit(n, |a| {
            let a = a as u32;
            for bb in 0..nn as u32 {
                let dab = d(a, bb);
                for c in 0..nn as u32 {
                    if h.comm(dab, f.apply(c)) != 0 {
                        return Some(witness("deviation-centrality", vec![a, bb, c]));
                    }
                }
            }
            None
        });
    }
    // d(B × G) = d(G × B) = 1
    if counterexample.is_none() {
        'rel: for &t in &b.elements {
            for g in 0..nn as u32 {
                if d(t, g) != 0 {
                    counterexample = Some(witness("relative-left-vanishing", vec![t, g]));
                    break 'rel;
                }
            }
        }
    }
    if counterexample.is_none() {
        'rel: for &t in &b.elements {
            for g in 0..nn as u32 {
                if d(g, t) != 0 {
                    counterexample = Some(witness("relative-right-vanishing", vec![g, t]));
                    break 'rel;
                }
            }
        }
    }

    let is_quadratic = counterexample.is_none();
    if is_quadratic {
        // consequences of quadraticity; a failure here is a library defect
        assert_eq!(f.apply(0), 0, "quadratic map not normalized");
        for &x in &b.elements {
            for &y in &b.elements {
                assert_eq!(
                    f.apply(dom.mul(x, y)),
                    h.mul(f.apply(x), f.apply(y)),
                    "restriction to the relative subgroup must be linear"
                );
            }
        }
    }
    Ok(QuadVerdict {
        is_linear,
        is_quadratic,
        relative: b.elements.clone(),
        counterexample,
        i_f,
        d_f,
    })
}

/// The largest subgroup relative to which a quadratic `f` stays quadratic:
/// all `a` with `d(a, b) = d(b, a) = 1` for every `b`.
pub fn radical(f: &GroupFunction, budget: u64) -> Result<Subgroup> {
    let v = quadratic_verdict(f, &Subgroup::trivial(&f.domain), budget)?;
    if !v.is_quadratic {
        return Err(Error::invalid("radical requested for a non-quadratic map"));
    }
    let dom = &f.domain;
    let n = dom.size;
    let dev = dev_table(f);
    let members: Vec<u32> = dom
        .elements()
        .filter(|&a| {
            (0..n as u32).all(|b| dev[a as usize * n + b as usize] == 0 && dev[b as usize * n + a as usize] == 0)
        })
        .collect();
    let rad = Subgroup::new(dom, members)?;

    // postconditions: contains G', f stays quadratic relative rad, and rad is
    // maximal (any one-element enlargement breaks the vanishing conditions,
    // which are the only B-dependent part of the verdict).
    for &c in &derived_subgroup(dom).elements {
        assert!(rad.contains(c), "derived subgroup escapes the radical");
    }
    assert!(quadratic_verdict(f, &rad, budget)?.is_quadratic);
    for x in dom.elements().filter(|&x| !rad.contains(x)) {
        let mut gens = rad.elements.clone();
        gens.push(x);
        let bigger = Subgroup::from_generators(dom, &gens)?;
        let escapes = bigger.elements.iter().any(|&t| {
            (0..n as u32).any(|g| {
                dev[t as usize * n + g as usize] != 0 || dev[g as usize * n + t as usize] != 0
            })
        });
        assert!(escapes, "radical is not maximal: adding {x} keeps the map quadratic");
    }
    Ok(rad)
}

/// The linear map on the tensor square of `T = G/BG'` induced by a deviation,
/// with its abelianized target `D_f` and the coset dictionaries.
#[derive(Debug, Clone)]
pub struct BilinearPart {
    /// Dictionary for `T = G/BG'`.
    pub t: AbDictionary,
    /// The tensor square of `T`.
    pub tensor: TensorProduct,
    /// Dictionary identifying `D_f` with an abelian group.
    pub d_ab: AbDictionary,
    /// `w_f` with `w_f(ā ⊗ b̄) = d_f(a, b)`.
    pub w: AbMap,
}

impl BilinearPart {
    /// `w_f(ā ⊗ b̄)` as an element of the abelianized `D_f`.
    pub fn eval(&self, a: u32, b: u32) -> AbElt {
        self.w.apply(&self.tensor.tens(self.t.to_ab(a), self.t.to_ab(b)))
    }

    /// Same value as an element of the codomain group.
    pub fn eval_in_codomain(&self, a: u32, b: u32) -> u32 {
        self.d_ab.from_ab(&self.eval(a, b))
    }
}

pub fn bilinear_part(f: &GroupFunction, b: &Subgroup, budget: u64) -> Result<BilinearPart> {
    let v = quadratic_verdict(f, b, budget)?;
    if !v.is_quadratic {
        return Err(Error::invalid(format!(
            "bilinear part requires a quadratic map; law {:?} failed",
            v.counterexample.map(|w| w.law)
        )));
    }
    let dom = &f.domain;
    let n = dom.size;
    let bgp = product_subgroup(b, &derived_subgroup(dom))?;
    let t = subquotient_ab(dom, &Subgroup::whole(dom), &bgp)?;
    let dev = dev_table(f);

    // deviation must only depend on the cosets modulo BG'
    let rep: Vec<u32> = dom.elements().map(|a| t.from_ab(t.to_ab(a))).collect();
    for a in 0..n {
        for bb in 0..n {
            if dev[a * n + bb] != dev[rep[a] as usize * n + rep[bb] as usize] {
                return Err(Error::invalid(format!(
                    "deviation is not coset-invariant at ({a}, {bb})"
                )));
            }
        }
    }

    let d_ab = subquotient_ab(&f.codomain, &v.d_f, &Subgroup::trivial(&f.codomain))?;
    let ts = tensor(&t.group, &t.group);
    let rank = t.group.rank();
    let mut ambient_images = Vec::with_capacity(rank * rank);
    for i in 0..rank {
        let ri = t.from_ab(&t.group.unit(i));
        for j in 0..rank {
            let rj = t.from_ab(&t.group.unit(j));
            ambient_images.push(d_ab.to_ab(dev[ri as usize * n + rj as usize]).clone());
        }
    }
    let w = ts.pres.induced(&ambient_images, &d_ab.group)?;

    let part = BilinearPart { t, tensor: ts, d_ab, w };
    for a in 0..n as u32 {
        for bb in 0..n as u32 {
            if part.eval_in_codomain(a, bb) != dev[a as usize * n + bb as usize] {
                return Err(Error::invalid(format!(
                    "bilinear part round trip fails at ({a}, {bb})"
                )));
            }
        }
    }
    Ok(part)
}

/// One named identity verdict with the least failing pair if any.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<(u32, u32)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub entries: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Checks the consequence identities of quadraticity, each exhaustively over
/// all pairs: product expansion in both central positions, deviation
/// recovery, values on inverses, right quotients, commutators, conjugates,
/// and the deviation of the pointwise-inverse map.
pub fn identity_suite(f: &GroupFunction, budget: u64) -> Result<IdentityReport> {
    let v = quadratic_verdict(f, &Subgroup::trivial(&f.domain), budget)?;
    if !v.is_quadratic {
        return Err(Error::invalid("identity suite requires a quadratic map"));
    }
    let dom = &f.domain;
    let h = &f.codomain;
    let n = dom.size;
    let dev = dev_table(f);
    let d = |a: u32, b: u32| dev[a as usize * n + b as usize];
    let neg = f.pointwise_inverse();

    let laws: Vec<(&str, Box<dyn Fn(u32, u32) -> bool>)> = vec![
        (
            "expansion-left",
            Box::new(|a, b| f.apply(dom.mul(a, b)) == h.mul(d(a, b), h.mul(f.apply(a), f.apply(b)))),
        ),
        (
            "expansion-right",
            Box::new(|a, b| f.apply(dom.mul(a, b)) == h.mul(h.mul(f.apply(a), f.apply(b)), d(a, b))),
        ),
        (
            "deviation-recovery",
            Box::new(|a, b| {
                d(a, b)
                    == h.mul(
                        h.inv(f.apply(a)),
                        h.mul(f.apply(dom.mul(a, b)), h.inv(f.apply(b))),
                    )
            }),
        ),
        (
            "inverse-value",
            Box::new(|a, _| f.apply(dom.inv(a)) == h.mul(h.inv(f.apply(a)), d(a, a))),
        ),
        (
            "right-quotient-value",
            Box::new(|a, b| {
                let ab1 = dom.mul(a, dom.inv(b));
                f.apply(ab1)
                    == h.mul(f.apply(a), h.mul(h.inv(f.apply(b)), h.inv(d(ab1, b))))
            }),
        ),
        (
            "commutator-value",
            Box::new(|a, b| {
                f.apply(dom.comm(a, b))
                    == h.mul(
                        h.comm(f.apply(a), f.apply(b)),
                        h.mul(d(a, b), h.inv(d(b, a))),
                    )
            }),
        ),
        (
            "conjugation-value",
            Box::new(|a, b| {
                f.apply(dom.conj(a, b))
                    == h.mul(h.conj(f.apply(a), f.apply(b)), h.mul(d(a, b), h.inv(d(b, a))))
            }),
        ),
        (
            // d_{-f}(a,b) = [-f(b), -f(a)] - d(a,b); collapses to
            // -d(b,a) - f[a,b] when the image closure is 2-step.
            "inverted-map-deviation",
            Box::new(|a, b| {
                neg.deviation(a, b)
                    == h.mul(
                        h.comm(h.inv(f.apply(b)), h.inv(f.apply(a))),
                        h.inv(d(a, b)),
                    )
            }),
        ),
    ];

    let mut entries = Vec::new();
    for (name, law) in laws {
        let mut witness = None;
        'scan: for a in 0..n as u32 {
            for b in 0..n as u32 {
                if !law(a, b) {
                    witness = Some((a, b));
                    break 'scan;
                }
            }
        }
        entries.push(IdentityCheck { name: name.to_string(), pass: witness.is_none(), witness });
    }
    Ok(IdentityReport { entries })
}

/// Outcome of composing a quadratic pair.
#[derive(Debug, Clone)]
pub struct PairComposition {
    pub composite: GroupFunction,
    /// The composite's deviation matched f∗d_g · (g×g)∗d_f on every pair.
    pub pointwise_derivation: bool,
    /// The bilinear-part identity on tensor generators; `None` when `D_g` is
    /// not contained in `BG'` so the induced map on quotients does not exist.
    pub tensor_derivation: Option<bool>,
}

/// Composes `K --g--> G --f--> H` after verifying the quadratic-pair
/// conditions: `g(A) ⊆ B` and the deviation of `f` vanishes against `D_g` on
/// both sides. Asserts the composite quadratic relative `A` and the
/// derivation property; failures of the latter signal a library defect.
pub fn pair_compose(
    g: &GroupFunction,
    a_sub: &Subgroup,
    f: &GroupFunction,
    b_sub: &Subgroup,
    budget: u64,
) -> Result<PairComposition> {
    if g.codomain != f.domain {
        return Err(Error::invalid("pair composition needs g codomain = f domain"));
    }
    let vg = quadratic_verdict(g, a_sub, budget)?;
    if !vg.is_quadratic {
        return Err(Error::invalid("inner map is not quadratic relative its subgroup"));
    }
    let vf = quadratic_verdict(f, b_sub, budget)?;
    if !vf.is_quadratic {
        return Err(Error::invalid("outer map is not quadratic relative its subgroup"));
    }
    for &x in &a_sub.elements {
        if !b_sub.contains(g.apply(x)) {
            return Err(Error::invalid(format!(
                "not a quadratic pair: g({x}) escapes the target subgroup"
            )));
        }
    }
    let mid = &f.domain;
    let nf = mid.size;
    let dev_f = dev_table(f);
    for &t in &vg.d_f.elements {
        for x in 0..nf as u32 {
            if dev_f[t as usize * nf + x as usize] != 0 || dev_f[x as usize * nf + t as usize] != 0
            {
                return Err(Error::invalid(format!(
                    "not a quadratic pair: deviation of the outer map meets D_g at ({t}, {x})"
                )));
            }
        }
    }

    let composite = GroupFunction {
        domain: g.domain.clone(),
        codomain: f.codomain.clone(),
        table: g.table.iter().map(|&x| f.apply(x)).collect(),
    };
    let vc = quadratic_verdict(&composite, a_sub, budget)?;
    if !vc.is_quadratic {
        return Err(Error::invalid(
            "composite of a verified quadratic pair is not quadratic: library defect",
        ));
    }

    // d_{f∘g}(a,b) = f(d_g(a,b)) · d_f(g(a), g(b)), in this order
    let k = &g.domain;
    let h = &f.codomain;
    for a in k.elements() {
        for b in k.elements() {
            let lhs = composite.deviation(a, b);
            let rhs = h.mul(
                f.apply(g.deviation(a, b)),
                dev_f[g.apply(a) as usize * nf + g.apply(b) as usize],
            );
            if lhs != rhs {
                return Err(Error::invalid(format!(
                    "derivation property fails pointwise at ({a}, {b}): library defect"
                )));
            }
        }
    }

    // When D_g ⊆ BG', g induces a linear map on the coset quotients and the
    // bilinear parts satisfy the same identity on tensor generators.
    let bgp = product_subgroup(b_sub, &derived_subgroup(mid))?;
    let tensor_derivation = if vg.d_f.elements.iter().all(|&t| bgp.contains(t)) {
        let wg = bilinear_part(g, a_sub, budget)?;
        let wf = bilinear_part(f, b_sub, budget)?;
        let wc = bilinear_part(&composite, a_sub, budget)?;
        // the induced map on coset quotients only sees the coset of g(a)
        let gbar_ok = k.elements().all(|a| {
            let via_rep = wf.t.to_ab(g.apply(wg.t.from_ab(wg.t.to_ab(a))));
            via_rep == wf.t.to_ab(g.apply(a))
        });
        if !gbar_ok {
            return Err(Error::invalid(
                "induced map on coset quotients is ill-defined despite D_g ⊆ BG': library defect",
            ));
        }
        let mut ok = true;
        'outer: for a in k.elements() {
            for b in k.elements() {
                let lhs = wc.eval_in_codomain(a, b);
                let f_of_wg = f.apply(wg.eval_in_codomain(a, b));
                let wf_at = wf.d_ab.from_ab(&wf.w.apply(&wf.tensor.tens(
                    wf.t.to_ab(g.apply(a)),
                    wf.t.to_ab(g.apply(b)),
                )));
                if lhs != h.mul(f_of_wg, wf_at) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if !ok {
            return Err(Error::invalid(
                "derivation property fails on tensor generators: library defect",
            ));
        }
        Some(true)
    } else {
        None
    };

    Ok(PairComposition { composite, pointwise_derivation: true, tensor_derivation })
}

/// Report for the pointwise-sum formula.
#[derive(Debug, Clone, Serialize)]
pub struct SumReport {
    pub d_f_central: bool,
    pub d_g_central: bool,
    pub formula_ok: bool,
}

/// For `f, g: G → H` with `(2_H, f)` and `(2_H, g)` quadratic pairs, checks
/// that `D_f` and `D_g` are central in `H` and that the pointwise product
/// satisfies d_{f+g}(a,b) = d_f(a,b)·d_g(a,b)·[f(b), g(a)] on every pair.
pub fn sum_check(f: &GroupFunction, g: &GroupFunction, budget: u64) -> Result<SumReport> {
    if f.domain != g.domain || f.codomain != g.codomain {
        return Err(Error::invalid("sum check needs maps with equal domain and codomain"));
    }
    let h = &f.codomain;
    let two_h = squaring(h);
    let triv_h = Subgroup::trivial(h);
    let v2 = quadratic_verdict(&two_h, &triv_h, budget)?;
    if !v2.is_quadratic {
        return Err(Error::invalid(
            "squaring on the codomain is not quadratic (codomain not 2-step nilpotent)",
        ));
    }
    let triv = Subgroup::trivial(&f.domain);
    let vf = quadratic_verdict(f, &triv, budget)?;
    let vg = quadratic_verdict(g, &triv, budget)?;
    if !vf.is_quadratic || !vg.is_quadratic {
        return Err(Error::invalid("sum check requires both maps quadratic"));
    }
    // pair condition for (2_H, ·): deviation of 2_H vanishes against D
    let nh = h.size;
    let dev2 = dev_table(&two_h);
    for (dsub, name) in [(&vf.d_f, "first"), (&vg.d_f, "second")] {
        for &t in &dsub.elements {
            for x in 0..nh as u32 {
                if dev2[t as usize * nh + x as usize] != 0
                    || dev2[x as usize * nh + t as usize] != 0
                {
                    return Err(Error::invalid(format!(
                        "(squaring, {name} map) is not a quadratic pair: witness ({t}, {x})"
                    )));
                }
            }
        }
    }
    let central = |dsub: &Subgroup| {
        dsub.elements.iter().all(|&t| h.elements().all(|x| h.comm(t, x) == 0))
    };
    let d_f_central = central(&vf.d_f);
    let d_g_central = central(&vg.d_f);
    if !d_f_central || !d_g_central {
        return Err(Error::invalid("deviation subgroup is not central: library defect"));
    }

    let s = f.pointwise_product(g);
    let dom = &f.domain;
    let mut formula_ok = true;
    'outer: for a in dom.elements() {
        for b in dom.elements() {
            let lhs = s.deviation(a, b);
            let base = h.mul(f.deviation(a, b), g.deviation(a, b));
            let rhs = h.mul(base, h.comm(f.apply(b), g.apply(a)));
            // second displayed form routes through the squaring deviation
            let rhs2 = h.mul(base, dev2[g.apply(a) as usize * nh + f.apply(b) as usize]);
            if lhs != rhs || lhs != rhs2 {
                formula_ok = false;
                break 'outer;
            }
        }
    }
    if !formula_ok {
        return Err(Error::invalid("pointwise sum formula fails: library defect"));
    }
    Ok(SumReport { d_f_central, d_g_central, formula_ok })
}

/// One evaluated property in the nilpotency battery; `skipped` carries the
/// refusal reason when the scan was over budget or the power group over cap.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyVerdict {
    pub name: String,
    pub holds: Option<bool>,
    pub skipped: Option<String>,
    pub witness: Option<QuadWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NilpotencyReport {
    pub class_le_2: bool,
    pub properties: Vec<PropertyVerdict>,
    /// Commutator-shuffle product and deviation identities on n-tuples;
    /// evaluated for 2-step groups when within budget.
    pub shuffle_product: Option<bool>,
    pub shuffle_deviation: Option<bool>,
    /// Evaluated properties in the equivalence block agree, and the one-way
    /// consequences hold.
    pub pattern_consistent: bool,
}

fn power_group(g: &FiniteGroup, n: u32) -> Result<FiniteGroup> {
    let mut p = g.clone();
    for _ in 1..n {
        p = direct_product(&p, g)?;
    }
    Ok(p)
}

/// Tuple digits of a power-group element, most significant first.
fn tuple_digits(mut idx: usize, base: usize, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for i in (0..n).rev() {
        out[i] = (idx % base) as u32;
        idx /= base;
    }
    out
}

/// Evaluates the five 2-step-nilpotency properties on `G` for tuple length
/// `n`: the class bound, the (n−1)-fold multiplication map, product maps of
/// identity/trivial tuples, squaring, and the n-th power map; asserts the
/// equivalence pattern over everything that could be evaluated.
pub fn nilpotency_battery(g: &FiniteGroup, n: u32, budget: u64) -> Result<NilpotencyReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::invalid(format!("tuple length {n} outside 2..=4")));
    }
    let size = g.size as u64;
    let power_order = size.checked_pow(n);
    if power_order.is_none() || power_order.unwrap() > crate::DEFAULT_ENUM_CAP {
        return Err(Error::cap(format!("|G|^{n} exceeds the enumeration cap")));
    }
    let triv = Subgroup::trivial(g);
    let class_le_2 = matches!(nilpotency_class(g), Some(c) if c <= 2);

    let mut properties = Vec::new();

    properties.push(PropertyVerdict {
        name: "class-at-most-2".into(),
        holds: Some(class_le_2),
        skipped: None,
        witness: None,
    });

    // multiplication map on the n-th power group
    let mu_verdict = match power_group(g, n) {
        Ok(p) => {
            let digits: Vec<Vec<u32>> =
                (0..p.size).map(|i| tuple_digits(i, g.size, n as usize)).collect();
            let mu = GroupFunction::from_fn(&p, g, |i| {
                digits[i as usize]
                    .iter()
                    .fold(0u32, |acc, &x| g.mul(acc, x))
            })
            .unwrap();
            match quadratic_verdict(&mu, &Subgroup::trivial(&p), budget) {
                Ok(v) => PropertyVerdict {
                    name: "multiplication-map-quadratic".into(),
                    holds: Some(v.is_quadratic),
                    skipped: None,
                    witness: v.counterexample,
                },
                Err(Error::CapExceeded(msg)) => PropertyVerdict {
                    name: "multiplication-map-quadratic".into(),
                    holds: None,
                    skipped: Some(msg),
                    witness: None,
                },
                Err(e) => return Err(e),
            }
        }
        Err(Error::CapExceeded(msg)) => PropertyVerdict {
            name: "multiplication-map-quadratic".into(),
            holds: None,
            skipped: Some(msg),
            witness: None,
        },
        Err(e) => return Err(e),
    };
    properties.push(mu_verdict);

    // product maps f_1 ⋯ f_n with each factor the identity or trivial map
    let mut product_holds = true;
    let mut product_witness = None;
    for mask in 0..(1u32 << n) {
        let table: Vec<u32> = g
            .elements()
            .map(|x| {
                (0..n).fold(0u32, |acc, i| {
                    let factor = if mask & (1 << i) != 0 { x } else { 0 };
                    g.mul(acc, factor)
                })
            })
            .collect();
        let f = GroupFunction { domain: g.clone(), codomain: g.clone(), table };
        let v = quadratic_verdict(&f, &triv, budget)?;
        if !v.is_quadratic {
            product_holds = false;
            product_witness = v.counterexample;
            break;
        }
    }
    properties.push(PropertyVerdict {
        name: "identity-trivial-product-maps-quadratic".into(),
        holds: Some(product_holds),
        skipped: None,
        witness: product_witness,
    });

    let vsq = quadratic_verdict(&squaring(g), &triv, budget)?;
    properties.push(PropertyVerdict {
        name: "squaring-quadratic".into(),
        holds: Some(vsq.is_quadratic),
        skipped: None,
        witness: vsq.counterexample,
    });

    let vpow = quadratic_verdict(&power_map(g, n), &triv, budget)?;
    properties.push(PropertyVerdict {
        name: "nth-power-quadratic".into(),
        holds: Some(vpow.is_quadratic),
        skipped: None,
        witness: vpow.counterexample,
    });

    // shuffle identities for 2-step groups:
    //   a1 b1 ⋯ an bn = Π_{i<j} [b_i, a_j] · (a1⋯an)(b1⋯bn)
    //   d_μ(a, b)      = Π_{i<j} [b_i, a_j]
    let (shuffle_product, shuffle_deviation) = if class_le_2 {
        let tuples = (g.size as u64).pow(n);
        let pairs = tuples * tuples;
        if pairs > budget {
            (None, None)
        } else {
            let gs = g.size;
            let mut comm = vec![0u32; gs * gs];
            for a in 0..gs as u32 {
                for b in 0..gs as u32 {
                    comm[a as usize * gs + b as usize] = g.comm(a, b);
                }
            }
            let digits: Vec<Vec<u32>> =
                (0..tuples as usize).map(|i| tuple_digits(i, gs, n as usize)).collect();
            let prods: Vec<u32> = digits
                .iter()
                .map(|t| t.iter().fold(0u32, |acc, &x| g.mul(acc, x)))
                .collect();
            let mut prod_ok = true;
            let mut dev_ok = true;
            'pairs: for ai in 0..tuples as usize {
                let a = &digits[ai];
                for bi in 0..tuples as usize {
                    let b = &digits[bi];
                    let mut interleaved = 0u32;
                    for i in 0..n as usize {
                        interleaved = g.mul(g.mul(interleaved, a[i]), b[i]);
                    }
                    let mut shuffle = 0u32;
                    for i in 0..n as usize {
                        for j in i + 1..n as usize {
                            shuffle = g.mul(shuffle, comm[b[i] as usize * gs + a[j] as usize]);
                        }
                    }
                    let rhs = g.mul(shuffle, g.mul(prods[ai], prods[bi]));
                    if interleaved != rhs {
                        prod_ok = false;
                        dev_ok = false;
                        break 'pairs;
                    }
                    // deviation of μ at (a, b): μ(ab)·μ(b)⁻¹·μ(a)⁻¹
                    let mut ab = 0u32;
                    for i in 0..n as usize {
                        ab = g.mul(ab, g.mul(a[i], b[i]));
                    }
                    let dmu = g.mul(ab, g.mul(g.inv(prods[bi]), g.inv(prods[ai])));
                    if dmu != shuffle {
                        dev_ok = false;
                        break 'pairs;
                    }
                }
            }
            (Some(prod_ok), Some(dev_ok))
        }
    } else {
        (None, None)
    };

    let equivalence_block: Vec<bool> = properties
        .iter()
        .take(4)
        .filter_map(|p| p.holds)
        .collect();
    let mut pattern_consistent =
        equivalence_block.windows(2).all(|w| w[0] == w[1]);
    if class_le_2 {
        // one-way consequences of 2-step nilpotency
        if properties[4].holds != Some(true) {
            pattern_consistent = false;
        }
        if shuffle_product == Some(false) || shuffle_deviation == Some(false) {
            pattern_consistent = false;
        }
    }

    Ok(NilpotencyReport {
        class_le_2,
        properties,
        shuffle_product,
        shuffle_deviation,
        pattern_consistent,
    })
}

/// Map description as read from input files; element indices parallel the
/// domain's element order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(default)]
    pub domain: Option<GroupSpec>,
    #[serde(default)]
    pub codomain: Option<GroupSpec>,
    pub values: Vec<u32>,
}

impl MapSpec {
    pub fn realize(
        &self,
        default_domain: Option<&FiniteGroup>,
        default_codomain: Option<&FiniteGroup>,
    ) -> Result<GroupFunction> {
        let domain = match (&self.domain, default_domain) {
            (Some(spec), _) => construct(spec)?,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(Error::parse("map file gives no domain")),
        };
        let codomain = match (&self.codomain, default_codomain) {
            (Some(spec), _) => construct(spec)?,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(Error::parse("map file gives no codomain")),
        };
        GroupFunction::new(&domain, &codomain, self.values.clone())
    }
}

/// The diagonal-square map `a ↦ ā ⊗ ā` into the tensor square of `G/BG'`,
/// realized on a multiplication table of the tensor square.
pub struct DiagonalSquare {
    pub map: GroupFunction,
    pub t: AbDictionary,
    pub tensor: TensorProduct,
    pub target: AbGroupTable,
}

pub fn diagonal_square(g: &FiniteGroup, b: &Subgroup) -> Result<DiagonalSquare> {
    let bgp = product_subgroup(b, &derived_subgroup(g))?;
    let t = subquotient_ab(g, &Subgroup::whole(g), &bgp)?;
    let ts = tensor(&t.group, &t.group);
    let target = fgab_to_group(&ts.group)?;
    let map = GroupFunction::from_fn(g, &target.group, |a| {
        target.index_of(&ts.tens(t.to_ab(a), t.to_ab(a)))
    })?;
    Ok(DiagonalSquare { map, t, tensor: ts, target })
}
