//! End-to-end acceptance sweep: numeric anchors for the universal and
//! degree-two constructions, exhaustive agreement between the two quadraticity
//! routes, exactness batteries over the group zoo, composition laws, free-word
//! evaluation, presented-data decisions against brute force, and CLI
//! determinism. Each check prints one `criterion NN: PASS` or `FAIL` line.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use quadgroup::abelian::{exterior_square, tensor_square, FgAb};
use quadgroup::groups::{
    abelianization, center, cyclic, derived_subgroup, dihedral, elementary, fgab_to_group,
    lazard, nilpotency_class, power_series_units, quaternion8, symmetric, FiniteGroup, GroupHom,
    LieRing, Subgroup,
};
use quadgroup::passi::{
    augmentation_sequence_check, derivation_check, gamma_ideal_check, is_polynomial, passi_group,
    AbValuedMap,
};
use quadgroup::quadmaps::{
    diagonal_square, identity_suite, nilpotency_battery, pair_compose, quadratic_verdict,
    squaring, GroupFunction,
};
use quadgroup::universal_q::{
    build_q, free_eval, induced_sequence_check, presented_build, presented_check, q_nilpotency,
    FreeWord, GenPair, Presentation, PresentedVerdict,
};
use quadgroup::verify::{
    abelianized_q_iso_check, central_sequence_check, central_subgroups, zoo_group, DEFAULT_ZOO,
};
use quadgroup::{Error, DEFAULT_BUDGET};

fn criterion<F: FnOnce()>(n: u32, body: F) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {n:02}: PASS"),
        Err(e) => {
            println!("criterion {n:02}: FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

fn elt_order(g: &FiniteGroup, x: u32) -> usize {
    let mut acc = x;
    let mut n = 1;
    while acc != 0 {
        acc = g.mul(acc, x);
        n += 1;
    }
    n
}

const TWO_STEP_ZOO: [&str; 7] = ["C2", "C4", "C2xC2", "C6", "Q8", "D4", "Heis3"];

/// Abelian targets of order at most 8, one per isomorphism class.
fn small_targets() -> Vec<FgAb> {
    [
        vec![],
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![2, 4],
        vec![2, 2, 2],
    ]
    .into_iter()
    .map(|f| FgAb::new(f).unwrap())
    .collect()
}

#[test]
fn criterion_01_smallest_universal_group_and_degree_two_target() {
    criterion(1, || {
        let c2 = cyclic(2).unwrap();
        let triv = Subgroup::trivial(&c2);
        let qg = build_q(&c2, &triv, DEFAULT_BUDGET).unwrap();
        assert_eq!(qg.group.size, 4);
        assert!(
            (0..4).any(|x| elt_order(&qg.group, x) == 4),
            "universal group of C2 is not cyclic"
        );
        let p = passi_group(&c2, &triv, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(p.group.factors, vec![4]);
        let iso = abelianized_q_iso_check(&c2, &triv, DEFAULT_BUDGET).unwrap();
        assert!(iso.all_pass(), "{}", serde_json::to_string(&iso).unwrap());
    });
}

#[test]
fn criterion_02_exactness_batteries_across_the_zoo() {
    criterion(2, || {
        for name in DEFAULT_ZOO {
            let g = zoo_group(name).unwrap();
            for b in central_subgroups(&g).unwrap() {
                let seq = central_sequence_check(&g, &b, DEFAULT_BUDGET).unwrap();
                assert!(
                    seq.all_pass(),
                    "sequences on {name} rel {:?}: {}",
                    b.elements,
                    serde_json::to_string(&seq).unwrap()
                );
                let iso = abelianized_q_iso_check(&g, &b, DEFAULT_BUDGET).unwrap();
                assert!(
                    iso.all_pass(),
                    "isomorphism on {name} rel {:?}: {}",
                    b.elements,
                    serde_json::to_string(&iso).unwrap()
                );
            }
        }
    });
}

#[test]
fn criterion_03_elementary_four_order_bookkeeping() {
    criterion(3, || {
        let e4 = elementary(2, 2).unwrap();
        let p = passi_group(&e4, &Subgroup::trivial(&e4), 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(p.group.order_u64().unwrap(), 32);
        // independent route: |T⊗T| · |G| / |∧²T| with all three orders coming
        // from invariant-factor computations
        let t = abelianization(&e4);
        let ts = tensor_square(&t.group);
        let ex = exterior_square(&t.group);
        assert_eq!(ts.group.order_u64().unwrap(), 16);
        assert_eq!(ex.group.order_u64().unwrap(), 2);
        let bookkeeping = ts.group.order_u64().unwrap() * e4.size as u64
            / ex.group.order_u64().unwrap();
        assert_eq!(bookkeeping, 32);
    });
}

#[test]
fn criterion_04_squaring_detects_two_step_nilpotency() {
    criterion(4, || {
        for name in TWO_STEP_ZOO {
            let g = zoo_group(name).unwrap();
            let v = quadratic_verdict(&squaring(&g), &Subgroup::trivial(&g), DEFAULT_BUDGET)
                .unwrap();
            assert!(v.is_quadratic, "squaring fails on {name}: {:?}", v.counterexample);
        }
        for name in ["S3", "D8"] {
            let g = zoo_group(name).unwrap();
            let f = squaring(&g);
            let v = quadratic_verdict(&f, &Subgroup::trivial(&g), DEFAULT_BUDGET).unwrap();
            assert!(!v.is_quadratic, "squaring unexpectedly quadratic on {name}");
            assert!(v.counterexample.is_some(), "no witness recorded on {name}");
            assert!(v.witness_reverifies(&f), "witness does not re-verify on {name}");
        }
        // commutator-shuffle identities on triples, exhaustive over all pairs
        // of 3-tuples
        let shuffle_budget = 1_000_000_000u64;
        for name in TWO_STEP_ZOO {
            let g = zoo_group(name).unwrap();
            let rep = nilpotency_battery(&g, 3, shuffle_budget).unwrap();
            assert_eq!(rep.shuffle_product, Some(true), "product shuffle on {name}");
            assert_eq!(rep.shuffle_deviation, Some(true), "deviation shuffle on {name}");
            assert!(rep.pattern_consistent, "battery pattern on {name}");
        }
    });
}

#[test]
fn criterion_05_identity_suite_across_generated_quadratic_maps() {
    criterion(5, || {
        for name in DEFAULT_ZOO {
            let g = zoo_group(name).unwrap();
            for b in central_subgroups(&g).unwrap() {
                let qg = build_q(&g, &b, DEFAULT_BUDGET).unwrap();
                let rep = identity_suite(&qg.q, DEFAULT_BUDGET).unwrap();
                assert!(rep.all_pass(), "universal map on {name} rel {:?}", b.elements);
            }
        }
        for name in TWO_STEP_ZOO {
            let g = zoo_group(name).unwrap();
            let rep = identity_suite(&squaring(&g), DEFAULT_BUDGET).unwrap();
            assert!(rep.all_pass(), "squaring on {name}");
        }
        let diag_cases: Vec<(FiniteGroup, Subgroup)> = vec![
            {
                let g = cyclic(4).unwrap();
                let b = Subgroup::new(&g, vec![0, 2]).unwrap();
                (g, b)
            },
            {
                let g = quaternion8();
                let b = center(&g);
                (g, b)
            },
            {
                let g = dihedral(4).unwrap();
                let b = center(&g);
                (g, b)
            },
            {
                let g = cyclic(6).unwrap();
                let b = Subgroup::trivial(&g);
                (g, b)
            },
        ];
        for (g, b) in &diag_cases {
            let ds = diagonal_square(g, b).unwrap();
            let rep = identity_suite(&ds.map, DEFAULT_BUDGET).unwrap();
            assert!(rep.all_pass(), "diagonal square on {} rel {:?}", g.label, b.elements);
        }
        // identity map of a Lazard group: deviation is half the bracket
        for p in [3u64, 5] {
            let ring = LieRing::heisenberg(p);
            let l = lazard(&ring).unwrap();
            let addg = fgab_to_group(&FgAb::new(vec![p as i64; 3]).unwrap()).unwrap();
            let idm = GroupFunction::from_fn(&l, &addg.group, |x| x).unwrap();
            let rep = identity_suite(&idm, DEFAULT_BUDGET).unwrap();
            assert!(rep.all_pass(), "lazard identity map mod {p}");
            let half = ((p + 1) / 2) as i64;
            for a in l.elements() {
                for b in l.elements() {
                    let xa = addg.elt_of(a).clone();
                    let xb = addg.elt_of(b).clone();
                    let br = ring.bracket_of(&xa, &xb);
                    let hb: Vec<i64> =
                        br.iter().map(|&v| (half * v).rem_euclid(p as i64)).collect();
                    let expect = addg.index_of(&addg.ab.reduce_i64(&hb));
                    assert_eq!(idm.deviation(a, b), expect, "half-bracket mod {p}");
                }
            }
        }
        // second coefficient of truncated power-series units: deviation is the
        // product of first coefficients
        for (m, nn) in [(2u64, 4u32), (3, 4)] {
            let g = power_series_units(m, nn).unwrap();
            let k = fgab_to_group(&FgAb::cyclic(m as i64)).unwrap();
            let c2map =
                GroupFunction::from_fn(&g, &k.group, |x| ((x as u64 / m) % m) as u32).unwrap();
            let rep = identity_suite(&c2map, DEFAULT_BUDGET).unwrap();
            assert!(rep.all_pass(), "coefficient map over Z/{m}");
            for a in g.elements() {
                for b in g.elements() {
                    let expect = (((a as u64 % m) * (b as u64 % m)) % m) as u32;
                    assert_eq!(c2map.deviation(a, b), expect, "c1·c1 over Z/{m}");
                }
            }
        }
    });
}

#[test]
fn criterion_06_composition_preserves_quadratic_structure() {
    criterion(6, || {
        let budget = 100_000_000u64;
        let mut composed = 0usize;
        let mut tensor_checked = 0usize;
        let mut run = |pc: Result<quadgroup::quadmaps::PairComposition, Error>, what: &str| {
            match pc {
                Ok(pc) => {
                    assert!(pc.pointwise_derivation, "pointwise derivation fails: {what}");
                    if let Some(t) = pc.tensor_derivation {
                        assert!(t, "tensor derivation fails: {what}");
                        tensor_checked += 1;
                    }
                    composed += 1;
                }
                Err(Error::CapExceeded(_)) => {}
                Err(e) => panic!("{what}: {e}"),
            }
        };

        // universal map followed by a homomorphism out of its group, and a
        // homomorphism into the base followed by the universal map
        for name in DEFAULT_ZOO {
            let g = zoo_group(name).unwrap();
            for b in central_subgroups(&g).unwrap() {
                let qg = build_q(&g, &b, budget).unwrap();
                let whole = Subgroup::whole(&qg.group);
                for f in [
                    GroupFunction::from_hom(&qg.proj),
                    GroupFunction::from_hom(&GroupHom::identity(&qg.group)),
                ] {
                    run(
                        pair_compose(&qg.q, &b, &f, &whole, budget),
                        &format!("q on {name} then hom"),
                    );
                }
                let idg = GroupFunction::from_hom(&GroupHom::identity(&g));
                run(
                    pair_compose(&idg, &Subgroup::trivial(&g), &qg.q, &b, budget),
                    &format!("identity then q on {name}"),
                );
            }
        }

        // cyclic towers composed with squaring in both orders
        for n in 2u64..=12 {
            let cn = cyclic(n).unwrap();
            let sq = squaring(&cn);
            for m in (1..n).filter(|m| n % m == 0) {
                let cm = cyclic(m).unwrap();
                let step = (n / m) as u32;
                let incl =
                    GroupFunction::from_hom(&GroupHom::from_fn(&cm, &cn, |k| k * step).unwrap());
                run(
                    pair_compose(&incl, &Subgroup::trivial(&cm), &sq, &Subgroup::trivial(&cn), budget),
                    &format!("C{m} into C{n} then squaring"),
                );
                let quot =
                    GroupHom::from_fn(&cn, &cm, |k| k % m as u32).unwrap();
                let ker = quot.kernel();
                let sqm = squaring(&cm);
                run(
                    pair_compose(
                        &GroupFunction::from_hom(&quot),
                        &ker,
                        &sqm,
                        &Subgroup::trivial(&cm),
                        budget,
                    ),
                    &format!("C{n} onto C{m} then squaring"),
                );
            }
        }

        // squaring followed by the universal map where the deviations collapse
        for name in ["C2", "C4", "C2xC2", "C6", "Q8", "D4"] {
            let g = zoo_group(name).unwrap();
            let sq = squaring(&g);
            for b in central_subgroups(&g).unwrap() {
                let qg = build_q(&g, &b, budget).unwrap();
                match pair_compose(&sq, &Subgroup::trivial(&g), &qg.q, &b, budget) {
                    Ok(pc) => {
                        assert!(pc.pointwise_derivation, "squaring then q on {name}");
                        if let Some(t) = pc.tensor_derivation {
                            assert!(t);
                            tensor_checked += 1;
                        }
                        composed += 1;
                    }
                    // legitimately not a quadratic pair when the squaring
                    // deviations escape the collapsed subgroup
                    Err(Error::Invalid(_)) | Err(Error::CapExceeded(_)) => {}
                    Err(e) => panic!("squaring then q on {name}: {e}"),
                }
            }
        }

        assert!(composed >= 100, "only {composed} composable pairs were generated");
        assert!(tensor_checked >= 50, "only {tensor_checked} tensor-generator checks ran");
    });
}

#[test]
fn criterion_07_free_word_formula_matches_fold_and_reduction() {
    criterion(7, || {
        for k in 1usize..=3 {
            let letters: Vec<(u32, i8)> =
                (0..k as u32).flat_map(|x| [(x, 1i8), (x, -1)]).collect();
            let mut words = 0u64;
            for len in 0..=6usize {
                let total = (letters.len() as u64).pow(len as u32);
                for code in 0..total {
                    let mut c = code;
                    let seq: Vec<(u32, i8)> = (0..len)
                        .map(|_| {
                            let l = letters[(c % letters.len() as u64) as usize];
                            c /= letters.len() as u64;
                            l
                        })
                        .collect();
                    let w = FreeWord::new(seq).unwrap();
                    // free_eval cross-checks the closed formula against the
                    // letter-fold oracle internally on every call
                    let v = free_eval(&w, k);
                    let vr = free_eval(&w.reduced(), k);
                    assert_eq!(
                        v.tensor, vr.tensor,
                        "free reduction changes the value of {:?}",
                        w.letters
                    );
                    words += 1;
                }
            }
            let expect: u64 = (0..=6u32).map(|l| (2 * k as u64).pow(l)).sum();
            assert_eq!(words, expect, "word enumeration over {k} letters is not exhaustive");
        }
    });
}

#[test]
fn criterion_08_presented_data_decision_matches_brute_force() {
    criterion(8, || {
        // flagship: single generator of order four into Z/8, data (1, 2)
        // builds k ↦ k² mod 8; pairing data 1 is rejected
        let c4 = cyclic(4).unwrap();
        let z8 = cyclic(8).unwrap();
        let pres = Presentation {
            generators: 1,
            relators: vec![FreeWord::new(vec![(0, 1); 4]).unwrap()],
            pi: Some((c4.clone(), vec![1])),
        };
        let good = GenPair { chi: vec![1], psi: vec![vec![2]] };
        assert!(matches!(
            presented_check(&pres, &z8, &good).unwrap(),
            PresentedVerdict::Accept
        ));
        let built = presented_build(&pres, &z8, &good, DEFAULT_BUDGET).unwrap();
        assert_eq!(built.table, vec![0, 1, 4, 1]);
        let bad = GenPair { chi: vec![1], psi: vec![vec![1]] };
        assert!(presented_check(&pres, &z8, &bad).unwrap().violates("exponent-pairing"));

        // single-generator cyclic presentations against brute force over all
        // normalized maps
        for k in 1usize..=4 {
            let gk = cyclic(k as u64).unwrap();
            let generator = if k == 1 { 0u32 } else { 1 };
            let pres = Presentation {
                generators: 1,
                relators: vec![FreeWord::new(vec![(0, 1); k]).unwrap()],
                pi: Some((gk.clone(), vec![generator])),
            };
            for target in small_targets().iter().filter(|t| !t.is_trivial()) {
                let h = fgab_to_group(target).unwrap();
                let hs = h.group.size as u32;
                let mut accept: BTreeSet<(u32, u32)> = BTreeSet::new();
                for chi in 0..hs {
                    for psi in 0..hs {
                        let gp = GenPair { chi: vec![chi], psi: vec![vec![psi]] };
                        if matches!(
                            presented_check(&pres, &h.group, &gp).unwrap(),
                            PresentedVerdict::Accept
                        ) {
                            accept.insert((chi, psi));
                        }
                    }
                }
                let mut oracle: BTreeSet<(u32, u32)> = BTreeSet::new();
                let triv = Subgroup::trivial(&gk);
                let count = (hs as u64).pow((gk.size - 1) as u32);
                for code in 0..count {
                    let mut table = vec![0u32; gk.size];
                    let mut c = code;
                    for slot in table.iter_mut().skip(1) {
                        *slot = (c % hs as u64) as u32;
                        c /= hs as u64;
                    }
                    let f = GroupFunction::new(&gk, &h.group, table).unwrap();
                    let v = quadratic_verdict(&f, &triv, DEFAULT_BUDGET).unwrap();
                    if v.is_quadratic {
                        oracle.insert((f.apply(generator), f.deviation(generator, generator)));
                    }
                }
                assert_eq!(
                    accept, oracle,
                    "accept-set mismatch for relator length {k} into {:?}",
                    target.factors
                );
            }
        }
    });
}

#[test]
fn criterion_09_polynomial_and_quadratic_verdicts_coincide() {
    criterion(9, || {
        let domains = vec![
            cyclic(1).unwrap(),
            cyclic(2).unwrap(),
            cyclic(3).unwrap(),
            cyclic(4).unwrap(),
            elementary(2, 2).unwrap(),
        ];
        let targets = small_targets();
        for g in &domains {
            for b in central_subgroups(g).unwrap() {
                for a in &targets {
                    let table = fgab_to_group(a).unwrap();
                    let hs = table.group.size as u64;
                    let total = hs.pow((g.size - 1) as u32);
                    for code in 0..total {
                        let mut tbl = vec![0u32; g.size];
                        let mut c = code;
                        for slot in tbl.iter_mut().skip(1) {
                            *slot = (c % hs) as u32;
                            c /= hs;
                        }
                        let gf = GroupFunction::new(g, &table.group, tbl.clone()).unwrap();
                        let av = AbValuedMap::from_fn(g, a, |x| {
                            table.elt_of(tbl[x as usize]).clone()
                        })
                        .unwrap();
                        let quad = quadratic_verdict(&gf, &b, DEFAULT_BUDGET)
                            .unwrap()
                            .is_quadratic;
                        let poly =
                            is_polynomial(&av, 2, &b, DEFAULT_BUDGET).unwrap().pass;
                        assert_eq!(
                            quad, poly,
                            "verdicts split on {} -> {:?} rel {:?}, table {:?}",
                            g.label, a.factors, b.elements, tbl
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_10_group_ring_checks() {
    criterion(10, || {
        let s3 = symmetric(3).unwrap();
        let a3 = derived_subgroup(&s3);
        let rep = augmentation_sequence_check(&s3, &a3, 2, DEFAULT_BUDGET).unwrap();
        assert!(rep.surjective && rep.image_kernel_match, "S3 rel A3");
        let d4 = dihedral(4).unwrap();
        let z = center(&d4);
        let rep = augmentation_sequence_check(&d4, &z, 2, DEFAULT_BUDGET).unwrap();
        assert!(rep.surjective && rep.image_kernel_match, "D4 rel center");

        for name in DEFAULT_ZOO {
            let g = zoo_group(name).unwrap();
            for n in 1..=2 {
                let p = passi_group(&g, &Subgroup::trivial(&g), n, DEFAULT_BUDGET).unwrap();
                let dr = derivation_check(&p, DEFAULT_BUDGET).unwrap();
                assert!(
                    dr.derivation_holds && dr.action_respects_cosets && dr.module_nilpotent,
                    "derivation structure fails on {name} at degree {n}: {dr:?}"
                );
            }
        }

        for name in ["D4", "Q8", "D8"] {
            let g = zoo_group(name).unwrap();
            let gr = gamma_ideal_check(&g, 2, DEFAULT_BUDGET).unwrap();
            assert!(
                gr.ring_identity_holds && gr.membership_holds,
                "ring commutator identity or series membership fails on {name}"
            );
        }
    });
}

#[test]
fn criterion_11_functor_bounds_and_induced_sequences() {
    criterion(11, || {
        for name in DEFAULT_ZOO {
            let g = zoo_group(name).unwrap();
            if nilpotency_class(&g).is_none() {
                continue;
            }
            let rep = q_nilpotency(&g, DEFAULT_BUDGET).unwrap();
            assert!(
                rep.bound_holds,
                "class bound fails on {name}: {:?} vs {:?}",
                rep.base_class, rep.q_class
            );
        }

        let c2 = cyclic(2).unwrap();
        let c4 = cyclic(4).unwrap();
        let alpha = GroupHom::from_fn(&c2, &c4, |k| 2 * k).unwrap();
        let beta = GroupHom::from_fn(&c4, &c2, |k| k % 2).unwrap();
        let rep = induced_sequence_check(&alpha, &beta, DEFAULT_BUDGET).unwrap();
        assert!(rep.q_beta_surjective && rep.exact_middle && rep.kernel_identity);

        let s3 = symmetric(3).unwrap();
        let a3 = derived_subgroup(&s3);
        let c3 = cyclic(3).unwrap();
        let rot = a3.elements.iter().copied().find(|&x| x != 0).unwrap();
        let alpha = GroupHom::from_fn(&c3, &s3, |k| {
            (0..k).fold(0u32, |acc, _| s3.mul(acc, rot))
        })
        .unwrap();
        let beta =
            GroupHom::from_fn(&s3, &c2, |x| if a3.contains(x) { 0 } else { 1 }).unwrap();
        let rep = induced_sequence_check(&alpha, &beta, DEFAULT_BUDGET).unwrap();
        assert!(rep.q_beta_surjective && rep.exact_middle && rep.kernel_identity);
    });
}

#[test]
fn criterion_12_cli_verification_is_deterministic() {
    criterion(12, || {
        let dir = tempfile::tempdir().unwrap();
        let bin = env!("CARGO_BIN_EXE_quadgroup");
        let mut runs = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("verify-{i}.json"));
            let out = Command::new(bin)
                .args(["verify", "--json"])
                .arg(&path)
                .output()
                .unwrap();
            assert!(
                out.status.success(),
                "verify run failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            runs.push((out.stdout, std::fs::read(&path).unwrap()));
        }
        assert!(!runs[0].1.is_empty());
        assert_eq!(runs[0].0, runs[1].0, "stdout differs between verify runs");
        assert_eq!(runs[0].1, runs[1].1, "JSON reports differ between verify runs");
    });
}
