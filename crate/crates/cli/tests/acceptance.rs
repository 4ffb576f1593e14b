//! Acceptance gate: one PASS/FAIL line per criterion, each bounded at 60 s.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use orthoset_core::perm::{automorphism_group, divisible_part, AutContext};
use orthoset_core::{verify_atom_space_duality, OrthoLattice, Orthoset, Permutation, PointSet};
use orthoset_field::{FieldElement, Tower};
use orthoset_lab::checks::{brute_force_automorphism_count, infinitesimal_report, pythagorean_identities, rotation_identities};
use orthoset_lab::{Status, DEFAULT_BUDGET};
use orthoset_qspace::{QuadraticSpace, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TIME_LIMIT: Duration = Duration::from_secs(60);
const CAP: usize = 1 << 16;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn naive_complement(x: &Orthoset, a: &PointSet) -> PointSet {
    x.set((0..x.len()).filter(|&p| a.iter().all(|q| x.orthogonal(p, q))))
}

fn random_subset(x: &Orthoset, rng: &mut ChaCha8Rng) -> PointSet {
    let p = rng.gen_range(0.0..1.0);
    x.set((0..x.len()).filter(|_| rng.gen_bool(p)))
}

/// Orthoclosed subsets counted over all `2^n` subsets.
fn naive_closed_count(x: &Orthoset) -> usize {
    (0u32..1 << x.len())
        .filter(|mask| {
            let a = x.set((0..x.len()).filter(|&p| mask & (1 << p) != 0));
            naive_complement(x, &naive_complement(x, &a)) == a
        })
        .count()
}

/// All automorphisms by exhaustive search, as image vectors.
fn brute_force_automorphisms(x: &Orthoset) -> Vec<Vec<usize>> {
    fn go(x: &Orthoset, img: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let p = img.len();
        if p == x.len() {
            out.push(img.clone());
            return;
        }
        for v in 0..x.len() {
            if !used[v] && (0..p).all(|q| x.orthogonal(p, q) == x.orthogonal(v, img[q])) {
                used[v] = true;
                img.push(v);
                go(x, img, used, out);
                img.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(x, &mut Vec::new(), &mut vec![false; x.len()], &mut out);
    out
}

fn naive_g_ef_order(x: &Orthoset, auts: &[Vec<usize>], e: usize, f: usize) -> usize {
    let fixed = naive_complement(x, &x.set([e, f]));
    auts.iter().filter(|s| fixed.iter().all(|p| s[p] == p)).count()
}

fn closure_operator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut subsets = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=10);
        let x = Orthoset::random(n, rng.gen_range(0.1..0.9), &mut rng).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let a = random_subset(&x, &mut rng);
            let b = a.union(&random_subset(&x, &mut rng));
            let (ca, cb) = (x.ortho_closure(&a), x.ortho_closure(&b));
            let ac = x.ortho_complement(&a);
            ensure(ac == naive_complement(&x, &a), || format!("orthoset {i}: complement differs from its definition"))?;
            ensure(ca == naive_complement(&x, &ac), || format!("orthoset {i}: closure is not the double complement"))?;
            ensure(a.is_subset(&ca), || format!("orthoset {i}: closure not extensive"))?;
            ensure(ca.is_subset(&cb), || format!("orthoset {i}: closure not monotone"))?;
            ensure(x.ortho_closure(&ca) == ca, || format!("orthoset {i}: closure not idempotent"))?;
            ensure(x.ortho_complement(&ca) == ac, || format!("orthoset {i}: A⊥ differs from A⊥⊥⊥"))?;
            subsets += 1;
        }
    }
    Ok(format!("200 orthosets, {subsets} subset pairs, exact set equality"))
}

fn boolean_correspondence() -> Outcome {
    for n in 3..=5 {
        let x = Orthoset::boolean(n).map_err(|e| e.to_string())?;
        let l = OrthoLattice::build(&x, CAP).map_err(|e| e.to_string())?;
        ensure(l.len() == 1 << n && naive_closed_count(&x) == 1 << n, || format!("B{n}: {} elements", l.len()))?;
        ensure(l.is_modular(), || format!("B{n}: not modular"))?;
        ensure(l.is_orthomodular(), || format!("B{n}: not orthomodular"))?;
        ensure(l.has_covering(), || format!("B{n}: no covering property"))?;
        ensure(l.is_atomistic(), || format!("B{n}: not atomistic"))?;
    }
    Ok("B3, B4, B5 have 8, 16, 32 elements and are modular, orthomodular, covering, atomistic".into())
}

fn generator_set() -> Vec<(String, Orthoset)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push((format!("boolean({n})"), Orthoset::boolean(n).unwrap()));
    }
    for k in 1..=4 {
        out.push((format!("pairs({k})"), Orthoset::pairs(k).unwrap()));
    }
    for n in 4..=9 {
        out.push((format!("cycle({n})"), Orthoset::cycle(n).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in 0..30 {
        let n = rng.gen_range(3..=9);
        out.push((format!("random({n}) #{s}"), Orthoset::random(n, 0.4, &mut rng).unwrap()));
    }
    out
}

fn duality() -> Outcome {
    let set = generator_set();
    let mut checked = 0;
    for (name, x) in set.iter().filter(|(_, x)| x.is_point_closed()) {
        let ok = verify_atom_space_duality(x, CAP).map_err(|e| format!("{name}: {e}"))?;
        ensure(ok, || format!("{name}: atom space is not isomorphic"))?;
        checked += 1;
    }
    ensure(checked >= 10, || format!("only {checked} point-closed instances"))?;
    Ok(format!("{checked} of {} instances point-closed, all isomorphic to their atom space", set.len()))
}

fn counterexample() -> Outcome {
    let x = Orthoset::cycle(6).map_err(|e| e.to_string())?;
    let l = OrthoLattice::build(&x, CAP).map_err(|e| e.to_string())?;
    ensure(l.len() == 14 && naive_closed_count(&x) == 14, || format!("{} elements", l.len()))?;
    ensure(x.is_point_closed(), || "not point-closed".into())?;
    ensure(!l.is_orthomodular(), || "lattice is orthomodular".into())?;
    let ctx = AutContext::new(&x, DEFAULT_BUDGET);
    let ht = ctx.check_ht().map_err(|e| e.to_string())?;
    ensure(!ht.ht2, || "HT2 holds".into())?;
    let w = ht.ht2_failure.ok_or("no HT2 witness")?;
    let orders = (w.reference_order, w.pair_order);
    ensure(orders == (12, 2), || format!("witness orders {orders:?}"))?;
    let naive = ctx.aut.naive_closure(1000).ok_or("naive closure overflow")?;
    let auts = brute_force_automorphisms(&x);
    ensure(naive.len() == 12 && auts.len() == 12, || format!("group orders {} and {}", naive.len(), auts.len()))?;
    ensure(auts.iter().all(|s| naive.contains(&Permutation::from_images(s.clone()).unwrap())), || "closures disagree".into())?;
    let (e, f) = w.reference;
    let (e2, f2) = w.pair;
    let oracle = (naive_g_ef_order(&x, &auts, e, f), naive_g_ef_order(&x, &auts, e2, f2));
    ensure(oracle == (12, 2), || format!("oracle G_ef orders {oracle:?}"))?;
    Ok(format!("C6: 14 elements, point-closed, not orthomodular, HT2 witness {:?}/{:?} orders 12 vs 2", w.reference, w.pair))
}

fn boolean_ht() -> Outcome {
    let x = Orthoset::boolean(4).map_err(|e| e.to_string())?;
    let ctx = AutContext::new(&x, DEFAULT_BUDGET);
    let ht = ctx.check_ht().map_err(|e| e.to_string())?;
    ensure(ht.ht1 && ht.ht2, || format!("HT1 {} HT2 {}", ht.ht1, ht.ht2))?;
    let auts = brute_force_automorphisms(&x);
    for e in 0..4 {
        for f in (0..4).filter(|&f| f != e) {
            let g = ctx.g_ef(e, f).map_err(|e| e.to_string())?;
            ensure(g.order() == 2, || format!("G_{e}{f} order {}", g.order()))?;
            ensure(naive_g_ef_order(&x, &auts, e, f) == 2, || format!("oracle G_{e}{f}"))?;
        }
    }
    Ok("B4: HT1 and HT2 hold, |G_ef| = 2 for all 12 pairs".into())
}

/// Elements with a `k`-th root for every `k` from 1 to the group order.
fn exhaustive_roots(elements: &[Permutation]) -> HashSet<Permutation> {
    let mut remaining: HashSet<Permutation> = elements.iter().cloned().collect();
    for k in 1..=elements.len() as u64 {
        if remaining.len() <= 1 {
            break;
        }
        let powers: HashSet<Permutation> = elements.iter().map(|s| s.pow(k)).collect();
        remaining.retain(|s| powers.contains(s));
    }
    remaining
}

fn finite_divisibility() -> Outcome {
    let mut instances: Vec<(String, Orthoset)> = Vec::new();
    for n in 2..=5 {
        instances.push((format!("boolean({n})"), Orthoset::boolean(n).unwrap()));
    }
    for k in 1..=3 {
        instances.push((format!("pairs({k})"), Orthoset::pairs(k).unwrap()));
    }
    for n in 4..=8 {
        instances.push((format!("cycle({n})"), Orthoset::cycle(n).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for s in 0..12 {
        let n = rng.gen_range(3..=7);
        instances.push((format!("random({n}) #{s}"), Orthoset::random(n, 0.4, &mut rng).unwrap()));
    }
    let mut pairs = 0;
    for (name, x) in &instances {
        let n = x.len();
        let id = Permutation::identity(n);
        let ctx = AutContext::new(x, DEFAULT_BUDGET);
        for e in 0..n {
            for f in (0..n).filter(|&f| f != e) {
                let g = ctx.g_ef(e, f).map_err(|e| e.to_string())?;
                let elements = g.elements(DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                let part = divisible_part(&g, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                ensure(part.elements == [id.clone()], || format!("{name} ({e},{f}): divisible part {:?}", part.elements))?;
                ensure(exhaustive_roots(&elements) == HashSet::from([id.clone()]), || format!("{name} ({e},{f}): root search"))?;
                let order = elements.len() as u64;
                ensure(elements.iter().all(|s| s.pow(order) == id), || format!("{name} ({e},{f}): ψ^|G| ≠ id"))?;
                pairs += 1;
            }
        }
        let dt = ctx.check_dt().map_err(|e| e.to_string())?;
        ensure(n < 2 || !dt.dt1, || format!("{name}: DT1 reported true"))?;
    }
    Ok(format!("{} instances, {pairs} pairs: divisible part is {{id}} by root search and order argument; DT1 false", instances.len()))
}

fn random_space(tower: &Tower, rng: &mut ChaCha8Rng) -> QuadraticSpace {
    let n = rng.gen_range(2..=4);
    QuadraticSpace::diagonal((0..n).map(|_| tower.from_int(rng.gen_range(1..=3))).collect()).unwrap()
}

fn random_coords(h: &QuadraticSpace, root: Option<&FieldElement>, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v: Vector = (0..h.dim())
            .map(|_| {
                let a = h.tower().from_int(rng.gen_range(-3..=3));
                match root {
                    Some(r) => a + h.tower().from_int(rng.gen_range(-2..=2)) * r,
                    None => a,
                }
            })
            .collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

fn rotation_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let tower = Tower::rationals();
        let sqrt2 = (i >= 50).then(|| tower.from_int(2).sqrt().unwrap());
        let h = random_space(&tower, &mut rng);
        let p = h.point(&random_coords(&h, sqrt2.as_ref(), &mut rng)).map_err(|e| e.to_string())?;
        let q = loop {
            let q = h.point(&random_coords(&h, sqrt2.as_ref(), &mut rng)).map_err(|e| e.to_string())?;
            if q != p {
                break q;
            }
        };
        let ok = rotation_identities(&h, &p, &q).map_err(|e| format!("rotation {i}: {e}"))?;
        ensure(ok, || format!("rotation {i} from {p} to {q}"))?;
    }
    Ok("50 rotations over Q and 50 over Q(√2) coordinates, exact equality".into())
}

fn random_element(tower: &Tower, extra: Option<&FieldElement>, rng: &mut ChaCha8Rng) -> FieldElement {
    let a = tower.from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
    match extra {
        Some(x) => a + tower.from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)) * x.pow(rng.gen_range(1..3)),
        None => a,
    }
}

fn pythagorean() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut terms_checked = 0;
    for i in 0..100 {
        let (tower, extra) = match i % 3 {
            0 => (Tower::rationals(), None),
            1 => {
                let q = Tower::rationals();
                let r = q.from_int(2).sqrt().unwrap();
                (q, Some(r))
            }
            _ => {
                let k = Tower::rational_functions();
                let t = k.t().unwrap();
                (k, Some(t))
            }
        };
        let (a, b) = (random_element(&tower, extra.as_ref(), &mut rng), random_element(&tower, extra.as_ref(), &mut rng));
        let terms: Vec<FieldElement> =
            (0..rng.gen_range(1..=6)).map(|_| random_element(&tower, extra.as_ref(), &mut rng)).collect();
        terms_checked += terms.len();
        let ok = pythagorean_identities(&a, &b, &terms).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(ok, || format!("pair {i}: ({a}, {b})"))?;
    }
    Ok(format!("100 pairs over Q, Q(√2), Q(t); {terms_checked} sampled squares, no zero sums"))
}

fn infinitesimal() -> Outcome {
    let k = Tower::rational_functions();
    let h = QuadraticSpace::identity(&k, 4).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let extra: Vec<Vector> = (0..20)
        .map(|_| loop {
            let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
            if v.iter().any(|&c| c != 0) {
                break h.vector_from_ints(&v);
            }
        })
        .collect();
    for len in 1..=4 {
        let (ok, details) = infinitesimal_report(&h, &extra, len).map_err(|e| e.to_string())?;
        ensure(ok, || format!("word length {len}: {details}"))?;
    }
    Ok("Q(t)^4: P(U) ≠ id, 24 infinitesimal displacements, ≈ examples hold, orbit confined for word lengths 1..4".into())
}

fn determinism() -> Outcome {
    let args = ["orthoset-lab", "suite", "--seed", "20261014"];
    let first = orthoset_lab::run(args).map_err(|e| e.to_string())?;
    let second = orthoset_lab::run(args).map_err(|e| e.to_string())?;
    std::env::set_var("ORTHOSET_LAB_THREADS", "1");
    let serial = orthoset_lab::run(args).map_err(|e| e.to_string());
    std::env::remove_var("ORTHOSET_LAB_THREADS");
    let serial = serial?;
    ensure(first.status == Status::Pass, || "default suite has failures".into())?;
    ensure(first.output == second.output, || "repeated runs differ".into())?;
    ensure(first.output == serial.output, || "single-threaded run differs".into())?;
    Ok(format!("default suite: {} bytes, identical across runs and thread counts", first.output.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closure operators", closure_operator),
        ("boolean correspondence", boolean_correspondence),
        ("atom-space duality", duality),
        ("C6 counterexample", counterexample),
        ("boolean homogeneous transitivity", boolean_ht),
        ("finite divisibility", finite_divisibility),
        ("rotation algebra", rotation_algebra),
        ("pythagorean and formally real", pythagorean),
        ("infinitesimal geometry", infinitesimal),
        ("suite determinism", determinism),
    ];
    // Core counts are small enough that a sanity check of the oracles costs nothing.
    assert_eq!(brute_force_automorphism_count(&Orthoset::cycle(6).unwrap()), 12);
    assert_eq!(automorphism_group(&Orthoset::pairs(2).unwrap()).order(), 8);
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > TIME_LIMIT => Err(format!("{msg}; exceeded {} s", TIME_LIMIT.as_secs())),
            other => other,
        };
        match result {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{:.2} s]", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{:.2} s]", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
