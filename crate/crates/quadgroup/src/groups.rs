//! Finite groups as validated multiplication tables: construction (builtins,
//! permutation closure, raw tables), subgroups and series, quotients,
//! abelianization with elementwise dictionaries, and table realizations of
//! finite abelian groups.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::abelian::{cokernel, AbElt, FgAb};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::{DEFAULT_ORDER_CAP, DEFAULT_RNG_SEED};

/// Strength of the associativity guarantee established at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AssocLevel {
    /// All `n³` triples checked.
    Exhaustive,
    /// All triples `(s, x, y)` with `s` in a generating set checked, which
    /// proves associativity by induction on word length, plus randomized
    /// spot checks.
    GeneratorCertified,
}

/// Finite group on indices `0..size` with identity at index 0.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub size: usize,
    pub label: String,
    pub assoc_level: AssocLevel,
    table: Arc<Vec<u32>>,
    inv: Arc<Vec<u32>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates the group axioms on the raw table. Associativity is checked
    /// on all triples up to order 512 and generator-certified above.
    pub fn from_table(label: impl Into<String>, size: usize, table: Vec<u32>) -> Result<Self> {
        let label = label.into();
        if size == 0 {
            return Err(Error::invalid("empty multiplication table"));
        }
        if size as u64 > DEFAULT_ORDER_CAP {
            return Err(Error::cap(format!(
                "group order {size} exceeds cap {DEFAULT_ORDER_CAP}"
            )));
        }
        if table.len() != size * size {
            return Err(Error::invalid(format!(
                "table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        for (pos, &v) in table.iter().enumerate() {
            if v as usize >= size {
                return Err(Error::invalid(format!(
                    "closure violated: entry {v} at ({}, {}) out of range",
                    pos / size,
                    pos % size
                )));
            }
        }
        let mul = |a: usize, b: usize| table[a * size + b] as usize;
        for a in 0..size {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(Error::invalid(format!("index 0 is not a two-sided identity at {a}")));
            }
        }
        let mut inv = vec![u32::MAX; size];
        for a in 0..size {
            match (0..size).find(|&b| mul(a, b) == 0 && mul(b, a) == 0) {
                Some(b) => inv[a] = b as u32,
                None => return Err(Error::invalid(format!("element {a} has no inverse"))),
            }
        }

        let assoc_level = if size <= 512 {
            if let Some(idx) = crate::scan::first_hit((size * size * size) as u64, |i| {
                let i = i as usize;
                let a = i / (size * size);
                let b = (i / size) % size;
                let c = i % size;
                (mul(mul(a, b), c) != mul(a, mul(b, c))).then_some(i)
            }) {
                let (a, b, c) = (idx / (size * size), (idx / size) % size, idx % size);
                return Err(Error::invalid(format!(
                    "associativity fails at triple ({a}, {b}, {c})"
                )));
            }
            AssocLevel::Exhaustive
        } else {
            let gens = greedy_generators(size, &|a, b| mul(a, b));
            for &s in &gens {
                for x in 0..size {
                    let sx = mul(s, x);
                    for y in 0..size {
                        if mul(sx, y) != mul(s, mul(x, y)) {
                            return Err(Error::invalid(format!(
                                "associativity fails at triple ({s}, {x}, {y})"
                            )));
                        }
                    }
                }
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(DEFAULT_RNG_SEED);
            for _ in 0..100_000 {
                let a = rng.gen_range(0..size);
                let b = rng.gen_range(0..size);
                let c = rng.gen_range(0..size);
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(Error::invalid(format!(
                        "associativity fails at triple ({a}, {b}, {c})"
                    )));
                }
            }
            AssocLevel::GeneratorCertified
        };

        Ok(FiniteGroup { size, label, assoc_level, table: Arc::new(table), inv: Arc::new(inv) })
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.size + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn id(&self) -> u32 {
        0
    }

    /// `a b a⁻¹`.
    pub fn conj(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.inv(a))
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.conj(a, b), self.inv(b))
    }

    pub fn pow(&self, a: u32, k: i64) -> u32 {
        let (mut base, mut k) = if k < 0 { (self.inv(a), (-k) as u64) } else { (a, k as u64) };
        let mut acc = 0u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn order_of(&self, a: u32) -> u64 {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size as u32
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size as u32)
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> u64 {
        self.elements().map(|a| self.order_of(a)).fold(1u64, |e, o| e.lcm(&o))
    }

    /// Greedy generating set in element order; empty for the trivial group.
    pub fn generating_set(&self) -> Vec<u32> {
        greedy_generators(self.size, &|a, b| self.mul(a as u32, b as u32) as usize)
            .into_iter()
            .map(|a| a as u32)
            .collect()
    }
}

/// Greedy generating set: scan indices in order, adding any element outside
/// the closure of the current set.
fn greedy_generators(size: usize, mul: &dyn Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut reach = vec![false; size];
    reach[0] = true;
    let mut reached = vec![0usize];
    for a in 1..size {
        if reach[a] {
            continue;
        }
        gens.push(a);
        // close the reachable set under right multiplication by all gens
        let mut queue = std::mem::take(&mut reached);
        let mut head = 0;
        reached = queue.clone();
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &s in &gens {
                let y = mul(x, s);
                if !reach[y] {
                    reach[y] = true;
                    queue.push(y);
                    reached.push(y);
                }
            }
        }
    }
    gens
}

/// Subgroup given by its sorted element list; `parent` clones are cheap
/// (shared tables).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub parent: FiniteGroup,
    pub elements: Vec<u32>,
}

impl Subgroup {
    /// Validates identity membership and closure under products.
    pub fn new(parent: &FiniteGroup, mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::invalid("subgroup must contain the identity"));
        }
        for &a in &elements {
            if a as usize >= parent.size {
                return Err(Error::invalid(format!("subgroup element {a} out of range")));
            }
        }
        for &a in &elements {
            for &b in &elements {
                let p = parent.mul(a, b);
                if elements.binary_search(&p).is_err() {
                    return Err(Error::invalid(format!(
                        "subgroup not closed: {a}·{b} = {p} missing"
                    )));
                }
            }
        }
        Ok(Subgroup { parent: parent.clone(), elements })
    }

    pub fn from_generators(parent: &FiniteGroup, gens: &[u32]) -> Result<Self> {
        for &g in gens {
            if g as usize >= parent.size {
                return Err(Error::invalid(format!("generator {g} out of range")));
            }
        }
        let mut seen = vec![false; parent.size];
        seen[0] = true;
        let mut queue = vec![0u32];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = parent.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        Ok(Subgroup { parent: parent.clone(), elements: queue })
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup { parent: parent.clone(), elements: vec![0] }
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup { parent: parent.clone(), elements: (0..parent.size as u32).collect() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: u32) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    /// `None` when normal; otherwise a witness `(g, h)` with `g h g⁻¹ ∉ H`.
    pub fn normality_witness(&self) -> Option<(u32, u32)> {
        for g in self.parent.elements() {
            for &h in &self.elements {
                if !self.contains(self.parent.conj(g, h)) {
                    return Some((g, h));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }
}

/// Product subgroup `A·B` when it is a subgroup (e.g. one factor normal).
pub fn product_subgroup(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    assert_eq!(a.parent, b.parent);
    let mut gens: Vec<u32> = a.elements.clone();
    gens.extend(&b.elements);
    Subgroup::from_generators(&a.parent, &gens)
}

/// Homomorphism of finite groups, validated on all pairs at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub domain: FiniteGroup,
    pub codomain: FiniteGroup,
    pub table: Vec<u32>,
}

impl GroupHom {
    pub fn new(domain: &FiniteGroup, codomain: &FiniteGroup, table: Vec<u32>) -> Result<Self> {
        if table.len() != domain.size {
            return Err(Error::invalid(format!(
                "hom table has {} entries for a domain of order {}",
                table.len(),
                domain.size
            )));
        }
        for &v in &table {
            if v as usize >= codomain.size {
                return Err(Error::invalid(format!("hom value {v} out of range")));
            }
        }
        for a in 0..domain.size {
            for b in 0..domain.size {
                let ab = domain.table[a * domain.size + b];
                if codomain.mul(table[a], table[b]) != table[ab as usize] {
                    return Err(Error::invalid(format!(
                        "not a homomorphism: f({a}·{b}) ≠ f({a})f({b})"
                    )));
                }
            }
        }
        Ok(GroupHom { domain: domain.clone(), codomain: codomain.clone(), table })
    }

    pub fn from_fn(
        domain: &FiniteGroup,
        codomain: &FiniteGroup,
        f: impl Fn(u32) -> u32,
    ) -> Result<Self> {
        GroupHom::new(domain, codomain, domain.elements().map(f).collect())
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom { domain: g.clone(), codomain: g.clone(), table: g.elements().collect() }
    }

    pub fn apply(&self, a: u32) -> u32 {
        self.table[a as usize]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.codomain != self.domain {
            return Err(Error::invalid("hom composition domain mismatch"));
        }
        Ok(GroupHom {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            table: other.table.iter().map(|&x| self.apply(x)).collect(),
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let elements = self
            .domain
            .elements()
            .filter(|&a| self.apply(a) == 0)
            .collect();
        Subgroup { parent: self.domain.clone(), elements }
    }

    pub fn image(&self) -> Subgroup {
        let mut elements: Vec<u32> = self.table.clone();
        elements.sort_unstable();
        elements.dedup();
        Subgroup { parent: self.codomain.clone(), elements }
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.codomain.size
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }
}

/// Subgroup generated by all commutators `[g, s]` with `g ∈ G`, `s ∈ S`.
fn commutator_subgroup(g: &FiniteGroup, s: &Subgroup) -> Subgroup {
    let mut gens = Vec::new();
    for a in g.elements() {
        for &b in &s.elements {
            let c = g.comm(a, b);
            if c != 0 {
                gens.push(c);
            }
        }
    }
    gens.sort_unstable();
    gens.dedup();
    Subgroup::from_generators(g, &gens).expect("commutators are valid elements")
}

pub fn derived_subgroup(g: &FiniteGroup) -> Subgroup {
    commutator_subgroup(g, &Subgroup::whole(g))
}

/// Lower central series `γ_1 = G`, `γ_{i+1} = [G, γ_i]`, up to and including
/// the first stabilized term.
pub fn lower_central_series(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let next = commutator_subgroup(g, series.last().unwrap());
        if next.elements == series.last().unwrap().elements {
            break;
        }
        series.push(next);
    }
    series
}

/// `Some(c)` with `γ_{c+1}` trivial, or `None` when the series stabilizes
/// above the trivial subgroup.
pub fn nilpotency_class(g: &FiniteGroup) -> Option<usize> {
    let series = lower_central_series(g);
    let last = series.last().unwrap();
    if last.order() == 1 {
        Some(series.len() - 1)
    } else {
        None
    }
}

pub fn center(g: &FiniteGroup) -> Subgroup {
    let elements = g
        .elements()
        .filter(|&a| g.elements().all(|b| g.mul(a, b) == g.mul(b, a)))
        .collect();
    Subgroup { parent: g.clone(), elements }
}

/// Quotient `G/N` with elements ordered by minimal coset representative, plus
/// the projection and the representative table.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub proj: GroupHom,
    /// `reps[i]` = minimal parent element of coset `i`.
    pub reps: Vec<u32>,
}

pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<Quotient> {
    assert_eq!(&n.parent, g);
    if let Some((a, h)) = n.normality_witness() {
        return Err(Error::invalid(format!(
            "subgroup is not normal: {a}·{h}·{a}⁻¹ escapes"
        )));
    }
    let mut coset_of = vec![usize::MAX; g.size];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset_of[a as usize] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(a);
        for &h in &n.elements {
            coset_of[g.mul(a, h) as usize] = idx;
        }
    }
    let m = reps.len();
    debug_assert_eq!(m * n.order(), g.size);
    let mut table = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = coset_of[g.mul(reps[i], reps[j]) as usize] as u32;
        }
    }
    let label = format!("{}/N{}", g.label, n.order());
    let q = FiniteGroup::from_table(label, m, table)?;
    let proj = GroupHom::new(g, &q, g.elements().map(|a| coset_of[a as usize] as u32).collect())?;
    Ok(Quotient { group: q, proj, reps })
}

/// Abelian section `H/N` in invariant-factor coordinates with elementwise
/// dictionaries in both directions.
#[derive(Debug, Clone)]
pub struct AbDictionary {
    pub group: FgAb,
    /// Parent-element-indexed images; `None` outside `H`.
    to_ab: Vec<Option<AbElt>>,
    /// FgAb `element_index`-indexed minimal parent representatives.
    pub reps: Vec<u32>,
}

impl AbDictionary {
    pub fn to_ab(&self, g: u32) -> &AbElt {
        self.to_ab[g as usize].as_ref().expect("element outside the subgroup")
    }

    pub fn try_to_ab(&self, g: u32) -> Option<&AbElt> {
        self.to_ab[g as usize].as_ref()
    }

    pub fn from_ab(&self, e: &AbElt) -> u32 {
        self.reps[self.group.element_index(e) as usize]
    }
}

/// `H/N` as an `FgAb` for `N` normal in `H` with abelian quotient. The
/// invariant factors come from a Smith reduction of the Schreier relation
/// lattice of a greedy generating set.
pub fn subquotient_ab(g: &FiniteGroup, h: &Subgroup, n: &Subgroup) -> Result<AbDictionary> {
    assert_eq!(&h.parent, g);
    assert_eq!(&n.parent, g);
    for &x in &n.elements {
        if !h.contains(x) {
            return Err(Error::invalid(format!("N element {x} outside H")));
        }
    }
    for &a in &h.elements {
        for &x in &n.elements {
            if !n.contains(g.conj(a, x)) {
                return Err(Error::invalid(format!("N not normal in H: conjugation by {a} moves {x} out")));
            }
        }
    }
    // cosets of N in H by minimal representative
    let mut coset_of = vec![usize::MAX; g.size];
    let mut reps: Vec<u32> = Vec::new();
    for &a in &h.elements {
        if coset_of[a as usize] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(a);
        for &x in &n.elements {
            coset_of[g.mul(a, x) as usize] = idx;
        }
    }
    let m = reps.len();
    let mul_c = |i: usize, j: usize| coset_of[g.mul(reps[i], reps[j]) as usize];
    for i in 0..m {
        for j in 0..m {
            if mul_c(i, j) != mul_c(j, i) {
                return Err(Error::invalid(format!(
                    "H/N is not abelian: cosets of {} and {} do not commute",
                    reps[i], reps[j]
                )));
            }
        }
    }

    let gens = greedy_generators(m, &mul_c);
    let k = gens.len();
    // Schreier vectors: one preimage in Z^k per coset, via BFS from the identity.
    let mut vecs: Vec<Option<Vec<i64>>> = vec![None; m];
    vecs[0] = Some(vec![0; k]);
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        for (gi, &s) in gens.iter().enumerate() {
            let d = mul_c(c, s);
            if vecs[d].is_none() {
                let mut v = vecs[c].clone().unwrap();
                v[gi] += 1;
                vecs[d] = Some(v);
                queue.push(d);
            }
        }
    }
    // Relation lattice: v(c) + e_i − v(c·g_i) over all cosets and generators.
    let mut rel_cols: Vec<Vec<num_bigint::BigInt>> = Vec::new();
    for c in 0..m {
        for (gi, &s) in gens.iter().enumerate() {
            let d = mul_c(c, s);
            let vc = vecs[c].as_ref().unwrap();
            let vd = vecs[d].as_ref().unwrap();
            let mut r: Vec<num_bigint::BigInt> =
                vc.iter().zip(vd).map(|(&a, &b)| num_bigint::BigInt::from(a - b)).collect();
            r[gi] += 1;
            if r.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                rel_cols.push(r);
            }
        }
    }
    let pres = cokernel(&IntMatrix::from_cols(k, &rel_cols));
    let group = pres.group.clone();
    debug_assert_eq!(group.order(), Some(num_bigint::BigInt::from(m)));

    let mut to_ab: Vec<Option<AbElt>> = vec![None; g.size];
    for &a in &h.elements {
        let c = coset_of[a as usize];
        let v: Vec<num_bigint::BigInt> =
            vecs[c].as_ref().unwrap().iter().map(|&x| num_bigint::BigInt::from(x)).collect();
        to_ab[a as usize] = Some(pres.project(&v));
    }
    let mut fg_reps = vec![u32::MAX; m];
    for &a in &h.elements {
        let e = to_ab[a as usize].as_ref().unwrap();
        let idx = group.element_index(e) as usize;
        if fg_reps[idx] == u32::MAX {
            fg_reps[idx] = a;
        }
    }
    Ok(AbDictionary { group, to_ab, reps: fg_reps })
}

pub fn abelianization(g: &FiniteGroup) -> AbDictionary {
    subquotient_ab(g, &Subgroup::whole(g), &derived_subgroup(g))
        .expect("G' is normal with abelian quotient")
}

/// Multiplication table of a finite `FgAb` plus mutually inverse dictionaries.
#[derive(Debug, Clone)]
pub struct AbGroupTable {
    pub ab: FgAb,
    pub group: FiniteGroup,
    els: Vec<AbElt>,
}

impl AbGroupTable {
    pub fn index_of(&self, e: &AbElt) -> u32 {
        self.ab.element_index(e) as u32
    }

    pub fn elt_of(&self, i: u32) -> &AbElt {
        &self.els[i as usize]
    }
}

pub fn fgab_to_group(a: &FgAb) -> Result<AbGroupTable> {
    let order = a.order_u64()?;
    if order > DEFAULT_ORDER_CAP {
        return Err(Error::cap(format!(
            "abelian group of order {order} exceeds table cap {DEFAULT_ORDER_CAP}"
        )));
    }
    let els = a.elements()?;
    let n = els.len();
    let mut table = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = a.element_index(&a.add(&els[i], &els[j])) as u32;
        }
    }
    let group = FiniteGroup::from_table(format!("{a}"), n, table)?;
    Ok(AbGroupTable { ab: a.clone(), group, els })
}

// ---------------------------------------------------------------------------
// builtin families

pub fn cyclic(n: u64) -> Result<FiniteGroup> {
    if n == 0 || n > DEFAULT_ORDER_CAP {
        return Err(Error::invalid(format!("cyclic order {n} out of range")));
    }
    let n = n as usize;
    let mut table = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = ((i + j) % n) as u32;
        }
    }
    FiniteGroup::from_table(format!("C{n}"), n, table)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Elementary abelian `(Z/p)^k`.
pub fn elementary(p: u64, k: u32) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let order = p.checked_pow(k).filter(|&o| o <= DEFAULT_ORDER_CAP).ok_or_else(|| {
        Error::cap(format!("p^k exceeds cap for p = {p}, k = {k}"))
    })?;
    let n = order as usize;
    let p = p as usize;
    let k = k as usize;
    // mixed-radix vectors over Z/p, first digit most significant
    let add = |a: usize, b: usize| {
        let (mut a, mut b, mut out, mut place) = (a, b, 0usize, 1usize);
        for _ in 0..k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    };
    let mut table = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = add(i, j) as u32;
        }
    }
    FiniteGroup::from_table(format!("E{p}^{k}"), n, table)
}

/// Dihedral group of order `2n`: pairs `(i, j)` with `j ∈ {0,1}` a flip,
/// indexed `i + n·j`.
pub fn dihedral(n: u64) -> Result<FiniteGroup> {
    if n == 0 || 2 * n > DEFAULT_ORDER_CAP {
        return Err(Error::invalid(format!("dihedral parameter {n} out of range")));
    }
    let n = n as usize;
    let size = 2 * n;
    let mut table = vec![0u32; size * size];
    for i in 0..n {
        for j in 0..2 {
            for k in 0..n {
                for l in 0..2 {
                    let rot = if j == 0 { (i + k) % n } else { (i + n - k % n) % n };
                    let idx = rot + n * ((j + l) % 2);
                    table[(i + n * j) * size + (k + n * l)] = idx as u32;
                }
            }
        }
    }
    FiniteGroup::from_table(format!("D{n}"), size, table)
}

/// Quaternion group of order 8: indices `0..8` are `1, i, j, k, −1, −i, −j, −k`.
pub fn quaternion8() -> FiniteGroup {
    // axis multiplication: (sign, axis) entries for axes 1,i,j,k
    const AX: [[(u32, u32); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut table = vec![0u32; 64];
    for a in 0..8u32 {
        for b in 0..8u32 {
            let (s1, a1) = (a / 4, a % 4);
            let (s2, a2) = (b / 4, b % 4);
            let (s3, ax) = AX[a1 as usize][a2 as usize];
            let sign = (s1 + s2 + s3) % 2;
            table[(a * 8 + b) as usize] = ax + 4 * sign;
        }
    }
    FiniteGroup::from_table("Q8", 8, table).expect("fixed table is a group")
}

/// Symmetric group on `n ≤ 5` letters; elements are one-line permutations in
/// lexicographic order, and `(στ)(x) = σ(τ(x))`.
pub fn symmetric(n: u32) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::invalid(format!("symmetric({n}) outside supported range 1..=5")));
    }
    let n = n as usize;
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        perms.push(cur.clone());
        // next_permutation in lex order
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let index: HashMap<Vec<u8>, u32> =
        perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
    let size = perms.len();
    let mut table = vec![0u32; size * size];
    for (i, s) in perms.iter().enumerate() {
        for (j, t) in perms.iter().enumerate() {
            let st: Vec<u8> = (0..n).map(|x| s[t[x] as usize]).collect();
            table[i * size + j] = index[&st];
        }
    }
    FiniteGroup::from_table(format!("S{}", n), size, table)
}

/// Heisenberg group mod `p`: unitriangular 3×3 matrices as triples `(a, b, c)`
/// with `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a·b')`, indexed `a + p·b + p²·c`.
pub fn heisenberg(p: u64) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p.pow(3) > DEFAULT_ORDER_CAP {
        return Err(Error::cap(format!("heisenberg({p}) exceeds the order cap")));
    }
    let p = p as usize;
    let n = p * p * p;
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a, b, c) = (x % p, (x / p) % p, x / (p * p));
        for y in 0..n {
            let (a2, b2, c2) = (y % p, (y / p) % p, y / (p * p));
            let idx = (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p);
            table[x * n + y] = idx as u32;
        }
    }
    FiniteGroup::from_table(format!("Heis{p}"), n, table)
}

/// Direct product with index `x·|H| + y`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let n = g
        .size
        .checked_mul(h.size)
        .filter(|&n| n as u64 <= DEFAULT_ORDER_CAP)
        .ok_or_else(|| Error::cap("direct product exceeds the order cap"))?;
    let mut table = vec![0u32; n * n];
    for x1 in 0..g.size {
        for y1 in 0..h.size {
            let a = x1 * h.size + y1;
            for x2 in 0..g.size {
                for y2 in 0..h.size {
                    let b = x2 * h.size + y2;
                    let prod = g.mul(x1 as u32, x2 as u32) as usize * h.size
                        + h.mul(y1 as u32, y2 as u32) as usize;
                    table[a * n + b] = prod as u32;
                }
            }
        }
    }
    FiniteGroup::from_table(format!("{}x{}", g.label, h.label), n, table)
}

/// Units `1 + a_1 T + … + a_{N−1} T^{N−1}` over `Z/m` with truncated
/// polynomial multiplication; index `Σ a_i · m^{i−1}`.
pub fn power_series_units(m: u64, big_n: u32) -> Result<FiniteGroup> {
    if m < 2 || big_n < 2 {
        return Err(Error::invalid(format!(
            "power_series_units needs modulus ≥ 2 and degree ≥ 2, got ({m}, {big_n})"
        )));
    }
    let coeffs = (big_n - 1) as usize;
    let order = (m as u128).checked_pow(coeffs as u32).filter(|&o| o <= DEFAULT_ORDER_CAP as u128);
    let Some(order) = order else {
        return Err(Error::cap(format!("power_series_units({m}, {big_n}) exceeds the order cap")));
    };
    let n = order as usize;
    let m = m as usize;
    let decode = |mut x: usize| -> Vec<usize> {
        let mut a = vec![0usize; coeffs + 1]; // a[0] unused, degree i at a[i]
        for i in 1..=coeffs {
            a[i] = x % m;
            x /= m;
        }
        a
    };
    let encode = |a: &[usize]| -> usize {
        let mut x = 0;
        for i in (1..=coeffs).rev() {
            x = x * m + a[i];
        }
        x
    };
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let a = decode(x);
        for y in 0..n {
            let b = decode(y);
            let mut c = vec![0usize; coeffs + 1];
            for k in 1..=coeffs {
                let mut v = a[k] + b[k];
                for i in 1..k {
                    v += a[i] * b[k - i];
                }
                c[k] = v % m;
            }
            table[x * n + y] = encode(&c) as u32;
        }
    }
    FiniteGroup::from_table(format!("U({m},{big_n})"), n, table)
}

/// Finite 2-step nilpotent Lie ring over `Z/m` given by structure constants.
#[derive(Debug, Clone)]
pub struct LieRing {
    pub modulus: u64,
    pub dim: usize,
    /// `bracket[i][j]` = coordinates of `[e_i, e_j]`.
    pub bracket: Vec<Vec<Vec<i64>>>,
}

impl LieRing {
    pub fn new(modulus: u64, dim: usize, entries: &[(usize, usize, Vec<i64>)]) -> Result<Self> {
        let m = modulus as i64;
        let zero = vec![0i64; dim];
        let mut bracket = vec![vec![zero.clone(); dim]; dim];
        for (i, j, v) in entries {
            if *i >= dim || *j >= dim || v.len() != dim {
                return Err(Error::invalid("lie bracket entry out of range"));
            }
            let vm: Vec<i64> = v.iter().map(|x| x.rem_euclid(m)).collect();
            let neg: Vec<i64> = vm.iter().map(|x| (-x).rem_euclid(m)).collect();
            bracket[*i][*j] = vm;
            bracket[*j][*i] = neg;
        }
        for i in 0..dim {
            if bracket[i][i].iter().any(|&x| x != 0) {
                return Err(Error::invalid(format!("bracket [e{i}, e{i}] must vanish")));
            }
            for j in 0..dim {
                for t in 0..dim {
                    let exp = (-bracket[j][i][t]).rem_euclid(m);
                    if bracket[i][j][t] != exp {
                        return Err(Error::invalid("bracket is not antisymmetric"));
                    }
                }
            }
        }
        let ring = LieRing { modulus, dim, bracket };
        // 2-step: [[e_i, e_j], e_k] = 0 for all basis triples
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let inner = &ring.bracket[i][j];
                    let mut acc = vec![0i64; dim];
                    for t in 0..dim {
                        if inner[t] != 0 {
                            for (s, &c) in ring.bracket[t][k].iter().enumerate() {
                                acc[s] = (acc[s] + inner[t] * c).rem_euclid(m);
                            }
                        }
                    }
                    if acc.iter().any(|&x| x != 0) {
                        return Err(Error::invalid(format!(
                            "lie ring is not 2-step nilpotent: [[e{i},e{j}],e{k}] ≠ 0"
                        )));
                    }
                }
            }
        }
        Ok(ring)
    }

    /// Heisenberg Lie ring: `[e_0, e_1] = e_2`, all other brackets zero.
    pub fn heisenberg(modulus: u64) -> Self {
        LieRing::new(modulus, 3, &[(0, 1, vec![0, 0, 1])]).expect("valid 2-step ring")
    }

    pub fn bracket_of(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let m = self.modulus as i64;
        let mut out = vec![0i64; self.dim];
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == 0 {
                    continue;
                }
                for (t, &c) in self.bracket[i][j].iter().enumerate() {
                    out[t] = (out[t] + x[i] * y[j] % m * c).rem_euclid(m);
                }
            }
        }
        out
    }
}

/// Lazard group of a 2-step Lie ring over odd `m`: `x ∘ y = x + y + ½[x, y]`.
pub fn lazard(ring: &LieRing) -> Result<FiniteGroup> {
    let m = ring.modulus;
    if m % 2 == 0 {
        return Err(Error::invalid(format!(
            "lazard needs an odd modulus so 2 is invertible, got {m}"
        )));
    }
    let order = (m as u128).checked_pow(ring.dim as u32).filter(|&o| o <= DEFAULT_ORDER_CAP as u128);
    let Some(order) = order else {
        return Err(Error::cap("lazard group exceeds the order cap"));
    };
    let half = ((m + 1) / 2) as i64; // inverse of 2 mod m
    let n = order as usize;
    let mi = m as i64;
    let dim = ring.dim;
    let decode = |mut x: usize| -> Vec<i64> {
        let mut v = vec![0i64; dim];
        for i in (0..dim).rev() {
            v[i] = (x % m as usize) as i64;
            x /= m as usize;
        }
        v
    };
    let encode = |v: &[i64]| -> usize {
        v.iter().fold(0usize, |acc, &c| acc * m as usize + c as usize)
    };
    let mut table = vec![0u32; n * n];
    for xi in 0..n {
        let x = decode(xi);
        for yi in 0..n {
            let y = decode(yi);
            let br = ring.bracket_of(&x, &y);
            let z: Vec<i64> = (0..dim)
                .map(|t| (x[t] + y[t] + half * br[t]).rem_euclid(mi))
                .collect();
            table[xi * n + yi] = encode(&z) as u32;
        }
    }
    FiniteGroup::from_table(format!("Lazard{m}d{dim}"), n, table)
}

/// Closure of permutation generators on `degree ≤ 12` points, elements indexed
/// by shortlex BFS discovery order.
pub fn from_permutations(degree: usize, gens: &[Vec<u8>]) -> Result<FiniteGroup> {
    if degree == 0 || degree > 12 {
        return Err(Error::invalid(format!("permutation degree {degree} outside 1..=12")));
    }
    for g in gens {
        let mut seen = vec![false; degree];
        if g.len() != degree {
            return Err(Error::invalid("permutation length differs from degree"));
        }
        for &x in g {
            if x as usize >= degree || seen[x as usize] {
                return Err(Error::invalid(format!("not a permutation: {g:?}")));
            }
            seen[x as usize] = true;
        }
    }
    let id: Vec<u8> = (0..degree as u8).collect();
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut els: Vec<Vec<u8>> = vec![id.clone()];
    index.insert(id, 0);
    let mut head = 0;
    while head < els.len() {
        let cur = els[head].clone();
        head += 1;
        for g in gens {
            // right multiplication: (cur·g)(x) = cur[g[x]]
            let next: Vec<u8> = (0..degree).map(|x| cur[g[x] as usize]).collect();
            if !index.contains_key(&next) {
                if els.len() as u64 >= DEFAULT_ORDER_CAP {
                    return Err(Error::cap(format!(
                        "permutation closure exceeds order cap {DEFAULT_ORDER_CAP}"
                    )));
                }
                index.insert(next.clone(), els.len() as u32);
                els.push(next);
            }
        }
    }
    let n = els.len();
    let mut table = vec![0u32; n * n];
    for (i, s) in els.iter().enumerate() {
        for (j, t) in els.iter().enumerate() {
            let st: Vec<u8> = (0..degree).map(|x| s[t[x] as usize]).collect();
            table[i * n + j] = index[&st];
        }
    }
    FiniteGroup::from_table(format!("perm{n}"), n, table)
}

// ---------------------------------------------------------------------------
// JSON specs

/// Group description as read from input files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Table { size: usize, table: Vec<Vec<u32>> },
    Perm { degree: usize, generators: Vec<Vec<u8>> },
    Builtin {
        family: String,
        #[serde(default)]
        params: serde_json::Value,
    },
}

fn param_u64(params: &serde_json::Value, key: &str) -> Result<u64> {
    params
        .get(key)
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::parse(format!("missing or non-integer parameter \"{key}\"")))
}

pub fn construct(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Table { size, table } => {
            let flat: Vec<u32> = table.iter().flatten().copied().collect();
            if table.len() != *size || table.iter().any(|r| r.len() != *size) {
                return Err(Error::parse("table is not size×size"));
            }
            FiniteGroup::from_table(format!("table{size}"), *size, flat)
        }
        GroupSpec::Perm { degree, generators } => from_permutations(*degree, generators),
        GroupSpec::Builtin { family, params } => match family.as_str() {
            "cyclic" => cyclic(param_u64(params, "n")?),
            "dihedral" => dihedral(param_u64(params, "n")?),
            "quaternion8" => Ok(quaternion8()),
            "symmetric" => symmetric(param_u64(params, "n")? as u32),
            "elementary" => elementary(param_u64(params, "p")?, param_u64(params, "k")? as u32),
            "heisenberg" => heisenberg(param_u64(params, "p")?),
            "product" => {
                let left: GroupSpec = serde_json::from_value(
                    params.get("left").cloned().ok_or_else(|| Error::parse("missing left factor"))?,
                )
                .map_err(|e| Error::parse(format!("left factor: {e}")))?;
                let right: GroupSpec = serde_json::from_value(
                    params
                        .get("right")
                        .cloned()
                        .ok_or_else(|| Error::parse("missing right factor"))?,
                )
                .map_err(|e| Error::parse(format!("right factor: {e}")))?;
                direct_product(&construct(&left)?, &construct(&right)?)
            }
            "power_series_units" => {
                power_series_units(param_u64(params, "m")?, param_u64(params, "N")? as u32)
            }
            "lazard" => {
                let p = param_u64(params, "p")?;
                let lie = params
                    .get("lie")
                    .ok_or_else(|| Error::parse("missing lie ring description"))?;
                let dim = lie
                    .get("dim")
                    .and_then(|v| v.as_u64())
                    .ok_or_else(|| Error::parse("missing lie dim"))? as usize;
                let mut entries = Vec::new();
                if let Some(brs) = lie.get("brackets").and_then(|v| v.as_array()) {
                    for b in brs {
                        let triple: (usize, usize, Vec<i64>) =
                            serde_json::from_value(b.clone())
                                .map_err(|e| Error::parse(format!("bracket entry: {e}")))?;
                        entries.push(triple);
                    }
                }
                lazard(&LieRing::new(p, dim, &entries)?)
            }
            other => Err(Error::parse(format!("unknown builtin family \"{other}\""))),
        },
    }
}

/// Subgroup description: explicit elements or generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupSpec {
    Elements { elements: Vec<u32> },
    Generators { generators: Vec<u32> },
}

pub fn construct_subgroup(parent: &FiniteGroup, spec: &SubgroupSpec) -> Result<Subgroup> {
    match spec {
        SubgroupSpec::Elements { elements } => Subgroup::new(parent, elements.clone()),
        SubgroupSpec::Generators { generators } => Subgroup::from_generators(parent, generators),
    }
}
