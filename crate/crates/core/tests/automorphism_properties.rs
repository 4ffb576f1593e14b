use std::collections::HashSet;

use orthoset_core::perm::{automorphism_group, is_automorphism, AutContext, DEFAULT_GROUP_BUDGET};
use orthoset_core::{Orthoset, PermGroup, Permutation};
use proptest::collection::vec;
use proptest::prelude::*;

fn orthoset(lo: usize, hi: usize) -> impl Strategy<Value = Orthoset> {
    (lo..=hi).prop_flat_map(|n| {
        vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let idx = |p: usize, q: usize| p * (2 * n - p - 1) / 2 + q - p - 1;
            Orthoset::from_relation(n, |p, q| p < q && bits[idx(p, q)]).unwrap()
        })
    })
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation::from_images(prefix.clone()).unwrap());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn naive_aut(x: &Orthoset) -> Vec<Permutation> {
    all_permutations(x.len()).into_iter().filter(|g| is_automorphism(x, g)).collect()
}

fn naive_g_ef(x: &Orthoset, aut: &[Permutation], e: usize, f: usize) -> Vec<Permutation> {
    let fixed = x.ortho_complement(&x.set([e, f]));
    aut.iter().filter(|g| fixed.iter().all(|p| g.fixes(p))).cloned().collect()
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn automorphism_group_matches_brute_force(x in orthoset(1, 7)) {
        let naive = naive_aut(&x);
        let g = automorphism_group(&x);
        prop_assert_eq!(g.order(), naive.len() as u128);
        for a in &naive {
            prop_assert!(g.contains(a));
        }
        for s in g.generators() {
            prop_assert!(is_automorphism(&x, s));
        }
    }

    #[test]
    fn g_ef_matches_brute_force(x in orthoset(2, 6)) {
        let naive = naive_aut(&x);
        let ctx = AutContext::new(&x, DEFAULT_GROUP_BUDGET);
        for e in 0..x.len() {
            for f in (0..x.len()).filter(|&f| f != e) {
                let g = ctx.g_ef(e, f).unwrap();
                let elems = naive_g_ef(&x, &naive, e, f);
                prop_assert_eq!(g.order(), elems.len() as u128);
                prop_assert!(g.same_group(&ctx.g_ef(f, e).unwrap()));
                let orbit: HashSet<usize> = elems.iter().map(|s| s.apply(e)).collect();
                let mut orbit: Vec<usize> = orbit.into_iter().collect();
                orbit.sort_unstable();
                prop_assert_eq!(g.orbit(e), orbit.clone());
                // Automorphisms fixing {e,f}⊥ pointwise preserve {e,f}⊥⊥.
                let closure = x.ortho_closure(&x.set([e, f]));
                prop_assert!(orbit.iter().all(|&p| closure.contains(p)));
            }
        }
    }

    #[test]
    fn ht_matches_brute_force(x in orthoset(2, 5)) {
        let naive = naive_aut(&x);
        let n = x.len();
        let groups: Vec<Vec<Option<HashSet<Permutation>>>> = (0..n)
            .map(|e| (0..n).map(|f| (e != f).then(|| naive_g_ef(&x, &naive, e, f).into_iter().collect())).collect())
            .collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|e| (0..n).filter(move |&f| f != e).map(move |f| (e, f))).collect();
        let ht1 = pairs.iter().all(|&(e, f)| groups[e][f].as_ref().unwrap().iter().any(|s| s.apply(e) == f));
        let ht2 = pairs.iter().all(|&(e, f)| pairs.iter().all(|&(e2, f2)| {
            let g = groups[e][f].as_ref().unwrap();
            let h = groups[e2][f2].as_ref().unwrap();
            naive.iter().any(|t| t.apply(e) == e2 && g.len() == h.len() && h.iter().all(|s| g.contains(&s.conjugate_by(t))))
        }));
        let report = AutContext::new(&x, DEFAULT_GROUP_BUDGET).check_ht().unwrap();
        prop_assert_eq!(report.ht1, ht1);
        prop_assert_eq!(report.ht2, ht2);
    }

    #[test]
    fn chain_order_matches_naive_closure(n in 1usize..7, gens in vec(any::<prop::sample::Index>(), 0..3), p in 0usize..7) {
        let all = all_permutations(n);
        let gens: Vec<Permutation> = gens.iter().map(|i| i.get(&all).clone()).collect();
        let g = PermGroup::new(n, gens).unwrap();
        let naive = g.naive_closure(usize::MAX).unwrap();
        prop_assert_eq!(g.order(), naive.len() as u128);
        for s in &all {
            prop_assert_eq!(g.contains(s), naive.contains(s));
        }
        let p = p % n;
        let stab = g.pointwise_stabilizer([p]);
        prop_assert_eq!(stab.order(), naive.iter().filter(|s| s.fixes(p)).count() as u128);
        let elems: HashSet<Permutation> = g.elements(10_000).unwrap().into_iter().collect();
        prop_assert_eq!(elems, naive);
    }

    #[test]
    fn permutation_algebra(a in perm(6), b in perm(6), c in perm(6)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.pow(a.order()).is_identity());
        prop_assert_eq!(a.conjugate_by(&b).order(), a.order());
        prop_assert_eq!(a.compose(&b).apply(0), a.apply(b.apply(0)));
    }
}

#[test]
fn reference_automorphism_orders() {
    let cases = [
        (Orthoset::boolean(3).unwrap(), 6),
        (Orthoset::boolean(4).unwrap(), 24),
        (Orthoset::pairs(2).unwrap(), 8),
        (Orthoset::cycle(6).unwrap(), 12),
    ];
    for (x, order) in cases {
        assert_eq!(automorphism_group(&x).order(), order);
    }
}

#[test]
fn reference_g_ef_orders() {
    let orders = |x: &Orthoset| {
        let ctx = AutContext::new(x, DEFAULT_GROUP_BUDGET);
        let mut out: Vec<u128> = (0..x.len())
            .flat_map(|e| (0..x.len()).filter(move |&f| f != e).map(move |f| (e, f)))
            .map(|(e, f)| ctx.g_ef(e, f).unwrap().order())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    assert_eq!(orders(&Orthoset::boolean(4).unwrap()), vec![2]);
    assert_eq!(orders(&Orthoset::pairs(2).unwrap()), vec![8]);
    assert_eq!(orders(&Orthoset::cycle(6).unwrap()), vec![2, 12]);
}

#[test]
fn reference_transitivity_reports() {
    for x in [Orthoset::boolean(4).unwrap(), Orthoset::pairs(2).unwrap(), Orthoset::pairs(3).unwrap()] {
        let ctx = AutContext::new(&x, DEFAULT_GROUP_BUDGET);
        let ht = ctx.check_ht().unwrap();
        assert!(ht.ht1 && ht.ht2);
        assert!(ht.pairs.iter().all(|p| p.orbit_identity));
        assert!(ctx.check_dt().unwrap().dt2);
    }
    let c6 = Orthoset::cycle(6).unwrap();
    let ctx = AutContext::new(&c6, DEFAULT_GROUP_BUDGET);
    let ht = ctx.check_ht().unwrap();
    assert!(!ht.ht2);
    assert!(ht.pairs.iter().all(|p| p.orbit_identity));
    assert!(ctx.check_dt().unwrap().dt2);
}

#[test]
fn transport_fixes_the_common_complement() {
    let b5 = Orthoset::boolean(5).unwrap();
    let ctx = AutContext::new(&b5, DEFAULT_GROUP_BUDGET);
    let phi = ctx.transport(&[0, 1], &[1, 2]).unwrap().unwrap();
    assert_eq!((phi.apply(0), phi.apply(1)), (1, 2));
    assert!(phi.fixes(3) && phi.fixes(4));
    assert!(ctx.transport(&[0], &[1, 2]).is_err());
}
