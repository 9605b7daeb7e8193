//! Randomized invariants over lattices, structures and convolution algebras.

use std::collections::BTreeSet;

use convalg::algebra::Algebra;
use convalg::catalog::{self, Type2Variant};
use convalg::convolution::{iso_phi, lift_lattice_morphism, PMorphism};
use convalg::propcheck::{self, distributivity_failure, Settings};
use convalg::relstruct::is_p_morphism;
use convalg::termlang::{check_equation, CheckMode, Equation};
use convalg::{ConvAlgebra, FiniteLattice, LFunction, LatticeMorphism, Mode, RelSpec, RelStructure, Signature, SubsetAlgebra};
use proptest::prelude::*;

fn pool() -> Vec<FiniteLattice> {
    catalog::lattice_pool().into_iter().map(|(_, l)| l).collect()
}

fn any_lattice() -> impl Strategy<Value = FiniteLattice> {
    prop::sample::select(pool())
}

fn distributive_lattice() -> impl Strategy<Value = FiniteLattice> {
    prop::sample::select(pool().into_iter().filter(FiniteLattice::is_distributive).collect::<Vec<_>>())
}

/// Arity and mode of each relation plus a bitmask selecting tuples.
fn any_structure() -> impl Strategy<Value = RelStructure> {
    (1usize..=3, prop::collection::vec((0usize..=2, any::<bool>(), any::<u64>()), 1..=3)).prop_map(|(n, rels)| {
        let mut specs = Vec::new();
        let mut tuples = Vec::new();
        for (i, (arity, join, mask)) in rels.into_iter().enumerate() {
            let mode = if join { Mode::Join } else { Mode::Meet };
            specs.push(RelSpec::new(format!("r{i}"), arity, mode));
            let all = catalog::all_tuples(n, arity + 1);
            tuples.push(
                all.into_iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> (k % 64) & 1 == 1)
                    .map(|(_, t)| t)
                    .collect(),
            );
        }
        RelStructure::new(n, Signature::new(specs).unwrap(), tuples, None).unwrap()
    })
}

fn function(l: &FiniteLattice, n: usize, seed: &[usize]) -> LFunction {
    LFunction::new((0..n).map(|x| seed[x % seed.len()] % l.size()).collect())
}

fn seeds(k: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0usize..64, 3), k)
}

/// Triple scan used as the reference for the lattice classification.
fn complemented(l: &FiniteLattice) -> bool {
    (0..l.size()).all(|a| (0..l.size()).any(|b| l.meet(a, b) == l.bottom() && l.join(a, b) == l.top()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_laws(l in any_lattice(), a in 0usize..64, b in 0usize..64, c in 0usize..64) {
        let (a, b, c) = (a % l.size(), b % l.size(), c % l.size());
        prop_assert_eq!(l.join(a, l.meet(a, b)), a);
        prop_assert_eq!(l.meet(a, l.join(a, b)), a);
        prop_assert_eq!(l.meet(a, b), l.meet(b, a));
        prop_assert_eq!(l.join(a, b), l.join(b, a));
        prop_assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
        prop_assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
        prop_assert_eq!(l.leq(a, b), l.meet(a, b) == a);
    }

    #[test]
    fn classification_matches_brute_force(l in any_lattice()) {
        let distributive = distributivity_failure(&l).is_none();
        prop_assert_eq!(l.is_distributive(), distributive);
        prop_assert_eq!(l.is_boolean(), distributive && complemented(&l));
        let d = l.dual();
        prop_assert_eq!(d.is_distributive(), distributive);
    }

    #[test]
    fn heyting_residuation(l in distributive_lattice(), a in 0usize..64, b in 0usize..64, c in 0usize..64) {
        let (a, b, c) = (a % l.size(), b % l.size(), c % l.size());
        let i = l.heyting_implies(a, b).unwrap();
        prop_assert_eq!(l.leq(l.meet(a, c), b), l.leq(c, i));
    }

    #[test]
    fn generated_sublattice_is_least(l in any_lattice(), gens in prop::collection::vec(0usize..64, 0..4)) {
        let gens: Vec<usize> = gens.into_iter().map(|g| g % l.size()).collect();
        let sub = l.generated_sublattice(&gens).unwrap();
        let set: BTreeSet<usize> = sub.embedding.iter().copied().collect();
        let closed = |s: &BTreeSet<usize>| s.iter().all(|&a| s.iter().all(|&b| s.contains(&l.meet(a, b)) && s.contains(&l.join(a, b))));
        prop_assert!(closed(&set));
        prop_assert!(set.contains(&l.bottom()) && set.contains(&l.top()));
        prop_assert!(gens.iter().all(|g| set.contains(g)));
        for &e in &set {
            if gens.contains(&e) || e == l.bottom() || e == l.top() {
                continue;
            }
            let mut smaller = set.clone();
            smaller.remove(&e);
            prop_assert!(!closed(&smaller), "removing {} keeps closure", e);
        }
    }

    #[test]
    fn identity_and_folds_are_p_morphisms(x in any_structure()) {
        let n = x.carrier();
        let id: Vec<usize> = (0..n).collect();
        prop_assert!(is_p_morphism(&id, &x, &x).unwrap());
        let xx = x.disjoint_union(&x).unwrap();
        let xxx = xx.disjoint_union(&x).unwrap();
        let fold2: Vec<usize> = (0..2 * n).map(|i| i % n).collect();
        // X⊕X⊕X -> X⊕X sends the first two copies onto the first.
        let fold3: Vec<usize> = (0..3 * n).map(|i| if i < 2 * n { i % n } else { i - n }).collect();
        prop_assert!(is_p_morphism(&fold2, &xx, &x).unwrap());
        prop_assert!(is_p_morphism(&fold3, &xxx, &xx).unwrap());
        let composed: Vec<usize> = fold3.iter().map(|&i| fold2[i]).collect();
        prop_assert!(is_p_morphism(&composed, &xxx, &x).unwrap());
    }

    #[test]
    fn p_morphisms_compose(x in any_structure(), p in prop::collection::vec(0usize..3, 3), q in prop::collection::vec(0usize..3, 3)) {
        let n = x.carrier();
        let p: Vec<usize> = p[..n].iter().map(|v| v % n).collect();
        let q: Vec<usize> = q[..n].iter().map(|v| v % n).collect();
        if is_p_morphism(&p, &x, &x).unwrap() && is_p_morphism(&q, &x, &x).unwrap() {
            let qp: Vec<usize> = p.iter().map(|&i| q[i]).collect();
            prop_assert!(is_p_morphism(&qp, &x, &x).unwrap());
        }
    }

    #[test]
    fn ordered_relations_are_closed(n in 1usize..=3, order_mask in any::<u8>(), rel_mask in any::<u16>(), join in any::<bool>()) {
        // Orders: strict pairs i < j selected from the mask.
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .enumerate()
            .filter(|(k, _)| order_mask >> k & 1 == 1)
            .map(|(_, p)| p)
            .collect();
        let tuples: Vec<Vec<usize>> = catalog::all_tuples(n, 2)
            .into_iter()
            .enumerate()
            .filter(|(k, _)| rel_mask >> k & 1 == 1)
            .map(|(_, t)| t)
            .collect();
        let mode = if join { Mode::Join } else { Mode::Meet };
        let sig = Signature::new(vec![RelSpec::new("r", 1, mode)]).unwrap();
        if let Ok(x) = RelStructure::new(n, sig, vec![tuples], Some(&pairs)) {
            let ord = x.order().unwrap();
            let r = x.relation(0);
            // closed in the last coordinate: upward for join mode, downward for meet mode
            for t in r.tuples() {
                for b in 0..n {
                    let reached = if join { ord.le(t[1], b) } else { ord.le(b, t[1]) };
                    if reached {
                        prop_assert!(r.contains(&[t[0], b]), "{:?} from {:?}", [t[0], b], t);
                    }
                }
            }
        }
    }

    #[test]
    fn operations_are_monotone(l in any_lattice(), x in any_structure(), s in seeds(4)) {
        let alg = ConvAlgebra::new(l.clone(), x.clone());
        let n = x.carrier();
        for (i, spec) in x.signature().iter().enumerate() {
            if spec.arity == 0 {
                continue;
            }
            let args: Vec<LFunction> = (0..spec.arity).map(|k| function(&l, n, &s[k])).collect();
            let bigger = alg.join(&args[0], &function(&l, n, &s[3]));
            let mut raised = args.clone();
            raised[0] = bigger;
            prop_assert!(alg.leq(&alg.apply(i, &args).unwrap(), &alg.apply(i, &raised).unwrap()));
        }
    }

    #[test]
    fn iso_phi_is_a_homomorphism(x in any_structure(), s in seeds(3)) {
        let two = catalog::chain(2).unwrap();
        let alg = ConvAlgebra::new(two.clone(), x.clone());
        let sub = SubsetAlgebra::new(x.clone()).unwrap();
        let n = x.carrier();
        let args: Vec<LFunction> = (0..3).map(|k| function(&two, n, &s[k])).collect();
        let phi = |f: &LFunction| iso_phi(&two, f).unwrap();
        for (i, spec) in x.signature().iter().enumerate() {
            let a = &args[..spec.arity];
            let mapped: Vec<_> = a.iter().map(phi).collect();
            prop_assert_eq!(phi(&alg.apply(i, a).unwrap()), sub.complex_op(i, &mapped).unwrap());
        }
        prop_assert_eq!(phi(&alg.meet(&args[0], &args[1])), sub.meet(&phi(&args[0]), &phi(&args[1])));
        prop_assert_eq!(phi(&alg.join(&args[0], &args[1])), sub.join(&phi(&args[0]), &phi(&args[1])));
        prop_assert_eq!(phi(&alg.bottom()), sub.bottom());
        prop_assert_eq!(phi(&alg.top()), sub.top());
    }

    #[test]
    fn ordered_outputs_preserve_order(n in 1usize..=3, l in any_lattice(), s in seeds(2)) {
        let x = catalog::ordered_chain(n).unwrap();
        let alg = ConvAlgebra::ordered(l.clone(), x.clone()).unwrap();
        for i in 0..x.signature().len() {
            let f = function(&l, n, &s[0]);
            prop_assert!(alg.is_order_preserving(&alg.apply(i, &[f]).unwrap()));
        }
    }

    #[test]
    fn lifted_morphisms_commute(x in any_structure(), pick in 0usize..4, s in seeds(2)) {
        let c3 = catalog::chain(3).unwrap();
        let c2 = catalog::chain(2).unwrap();
        let b2 = catalog::boolean(2).unwrap();
        let phi = match pick {
            0 => LatticeMorphism::new(c3.clone(), c2.clone(), vec![0, 1, 1]),
            1 => LatticeMorphism::new(c3.clone(), c2.clone(), vec![0, 0, 1]),
            2 => LatticeMorphism::new(c3.clone(), b2.clone(), vec![0, 1, 3]),
            _ => LatticeMorphism::new(c2.clone(), c3.clone(), vec![0, 2]),
        }
        .unwrap();
        phi.validate().unwrap();
        let src = ConvAlgebra::new(phi.source.clone(), x.clone());
        let dst = ConvAlgebra::new(phi.target.clone(), x.clone());
        let lift = |f: &LFunction| lift_lattice_morphism(&phi, f, true).unwrap();
        let n = x.carrier();
        for (i, spec) in x.signature().iter().enumerate() {
            let args: Vec<LFunction> = (0..spec.arity).map(|k| function(&phi.source, n, &s[k])).collect();
            let mapped: Vec<LFunction> = args.iter().map(lift).collect();
            prop_assert_eq!(lift(&src.apply(i, &args).unwrap()), dst.apply(i, &mapped).unwrap());
        }
    }

    #[test]
    fn pullbacks_commute(x in any_structure(), l in any_lattice(), s in seeds(3)) {
        let n = x.carrier();
        let xx = x.disjoint_union(&x).unwrap();
        let fold: Vec<usize> = (0..2 * n).map(|i| i % n).collect();
        let p = PMorphism::new(fold, &xx, &x).unwrap();
        let src = ConvAlgebra::new(l.clone(), x.clone());
        let dst = ConvAlgebra::new(l.clone(), xx);
        for (i, spec) in x.signature().iter().enumerate() {
            let args: Vec<LFunction> = (0..spec.arity).map(|k| function(&l, n, &s[k])).collect();
            let pulled: Vec<LFunction> = args.iter().map(|a| p.pull(a)).collect();
            prop_assert_eq!(p.pull(&src.apply(i, &args).unwrap()), dst.apply(i, &pulled).unwrap());
        }
        let (a, b) = (function(&l, n, &s[0]), function(&l, n, &s[1]));
        prop_assert_eq!(p.pull(&src.meet(&a, &b)), dst.meet(&p.pull(&a), &p.pull(&b)));
        prop_assert_eq!(p.pull(&src.join(&a, &b)), dst.join(&p.pull(&a), &p.pull(&b)));
    }

    #[test]
    fn counterexamples_reproduce_and_samples_are_sound(
        l in any_lattice(), frame in 0usize..9, eq in 0usize..15, seed in any::<u64>()
    ) {
        let (_, x) = catalog::transfer_frames(0).swap_remove(frame);
        let eq: Equation = catalog::transfer_equations().swap_remove(eq);
        let alg = ConvAlgebra::new(l, x);
        let exhaustive = check_equation(&eq, &alg, CheckMode::Exhaustive, 1_000_000).unwrap();
        if let Some(cx) = exhaustive.counterexample() {
            let lhs = eq.lhs.compile(alg.signature(), eq.vars()).unwrap().eval(&alg, cx).unwrap();
            let rhs = eq.rhs.compile(alg.signature(), eq.vars()).unwrap().eval(&alg, cx).unwrap();
            prop_assert_ne!(lhs, rhs);
        }
        let sampled = check_equation(&eq, &alg, CheckMode::Sample { samples: 200, seed }, 1_000_000).unwrap();
        if !sampled.is_valid() {
            prop_assert!(!exhaustive.is_valid());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn verdicts_ignore_thread_count(l in any_lattice(), eq in 0usize..10) {
        let eq = catalog::group_equations().swap_remove(eq);
        let alg = ConvAlgebra::new(l.clone(), catalog::cyclic(2).unwrap());
        let in_pool = |threads: usize| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                let v = check_equation(&eq, &alg, CheckMode::Exhaustive, 1_000_000).unwrap();
                let r = propcheck::check_z2_associativity("t", &l, &Settings::default()).unwrap();
                (v.to_json(&alg, &eq).to_string(), r.to_json_line())
            })
        };
        prop_assert_eq!(in_pool(1), in_pool(4));
    }
}

#[test]
fn type2_relations_are_functional() {
    for n in 2..=5 {
        let t = catalog::type2_structure(n, Type2Variant::Join).unwrap();
        let x = &t.structure;
        for name in ["cap", "cup"] {
            let r = x.relation_by_name(name).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let outs = (0..n).filter(|&c| r.contains(&[a, b, c])).count();
                    assert_eq!(outs, 1, "{name}({a},{b})");
                }
            }
        }
        let star = x.relation_by_name("star").unwrap();
        for a in 0..n {
            let image: Vec<usize> = (0..n).filter(|&b| star.contains(&[a, b])).collect();
            assert_eq!(image.len(), 1);
            assert!(star.contains(&[image[0], a]), "involution at {a}");
        }
    }
}

#[test]
fn catalog_builds_are_identical() {
    for name in ["chain(4)", "boolean(3)", "M3", "N5", "product(chain(2),M3)", "dual(N5)"] {
        let a = serde_json::to_string(&catalog::get_lattice(name).unwrap().to_canonical_doc()).unwrap();
        let b = serde_json::to_string(&catalog::get_lattice(name).unwrap().to_canonical_doc()).unwrap();
        assert_eq!(a, b);
    }
    for name in ["Z(4)", "S3", "nabla(3)", "nabla_ext(2)", "ordered_chain(3)", "type2(3)", "type2_mixed(2)"] {
        let a = serde_json::to_string(&catalog::get_structure(name).unwrap().to_doc()).unwrap();
        let b = serde_json::to_string(&catalog::get_structure(name).unwrap().to_doc()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn laws_hold_on_the_distributive_pool() {
    let s = Settings::default();
    for (lname, l) in catalog::lattice_pool().into_iter().filter(|(_, l)| l.is_distributive() && l.size() <= 4) {
        for (xname, x) in catalog::structure_pool(1) {
            let alg = ConvAlgebra::new(l.clone(), x.clone());
            for (i, spec) in x.signature().iter().enumerate() {
                let kind = match spec.mode {
                    Mode::Join => propcheck::OperatorKind::Additive,
                    Mode::Meet => propcheck::OperatorKind::Multiplicative,
                };
                let inst = format!("{lname}^{xname}");
                let r = propcheck::check_operator(&inst, &alg, i, kind, &s).unwrap();
                assert!(r.passed(), "{}", r.to_json_line());
                let r = propcheck::check_finitely_supported(&inst, &alg, i, &s).unwrap();
                assert!(r.passed(), "{}", r.to_json_line());
            }
        }
    }
}
