//! Named checks run by the suite. Each check is an invariant that must hold on
//! every instance it applies to; checks that do not apply report a skip.

use std::collections::HashSet;

use orthoset_core::perm::{automorphism_group, divisible_part, is_automorphism, AutContext};
use orthoset_core::{verify_atom_space_duality, OrthoLattice, Orthoset, PointSet};
use orthoset_field::{Base, FieldElement, Tower};
use orthoset_qspace::{Matrix, ProjPoint, QuadraticSpace, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::order_json;
use crate::instance::Instance;
use crate::suite::Budgets;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skip => "skip",
        }
    }
}

pub struct CheckResult {
    pub verdict: Verdict,
    pub details: Value,
}

fn verdict(ok: bool, details: Value) -> Result<CheckResult, CliError> {
    Ok(CheckResult { verdict: if ok { Verdict::Pass } else { Verdict::Fail }, details })
}

fn skip(reason: &str) -> Result<CheckResult, CliError> {
    Ok(CheckResult { verdict: Verdict::Skip, details: json!({ "reason": reason }) })
}

pub type CheckFn = fn(&Instance, &Budgets, &mut ChaCha8Rng) -> Result<CheckResult, CliError>;

pub const REGISTRY: &[(&str, CheckFn)] = &[
    ("closure-axioms", closure_axioms),
    ("rank-bound", rank_bound),
    ("lattice-laws", lattice_laws),
    ("boolean-correspondence", boolean_correspondence),
    ("atom-space-duality", atom_space_duality),
    ("automorphism-oracle", automorphism_oracle),
    ("g-ef-oracle", g_ef_oracle),
    ("transitivity", transitivity),
    ("divisible-part", divisible),
    ("rotation-algebra", rotation_algebra),
    ("pythagorean", pythagorean),
    ("og-axioms", og_axioms),
    ("infinitesimal-geometry", infinitesimal_geometry),
];

pub fn lookup(name: &str) -> Option<CheckFn> {
    REGISTRY.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
}

macro_rules! orthoset_or_skip {
    ($inst:expr) => {
        match $inst {
            Instance::Orthoset(x) => x,
            Instance::Space(_) => return skip("applies to orthosets"),
        }
    };
}

macro_rules! space_or_skip {
    ($inst:expr) => {
        match $inst {
            Instance::Space(h) => h,
            Instance::Orthoset(_) => return skip("applies to quadratic spaces"),
        }
    };
}

fn random_subset(x: &Orthoset, rng: &mut ChaCha8Rng) -> PointSet {
    let p = rng.gen_range(0.0..1.0);
    x.set((0..x.len()).filter(|_| rng.gen_bool(p)))
}

fn naive_complement(x: &Orthoset, a: &PointSet) -> PointSet {
    x.set((0..x.len()).filter(|&p| a.iter().all(|q| x.orthogonal(p, q))))
}

fn closure_axioms(inst: &Instance, _: &Budgets, rng: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    let trials = 32;
    let mut failures = 0;
    for _ in 0..trials {
        let a = random_subset(x, rng);
        let b = a.union(&random_subset(x, rng));
        let ca = x.ortho_closure(&a);
        let ac = x.ortho_complement(&a);
        let ok = a.is_subset(&ca)
            && ca.is_subset(&x.ortho_closure(&b))
            && x.ortho_closure(&ca) == ca
            && x.ortho_complement(&ca) == ac
            && ac == naive_complement(x, &a);
        failures += usize::from(!ok);
    }
    verdict(failures == 0, json!({ "trials": trials, "failures": failures }))
}

fn rank_bound(inst: &Instance, _: &Budgets, _: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    let r = x.rank().map_err(|e| CliError::Budget(e.to_string()))?;
    verdict(r <= x.len() && (r == x.len()) == x.is_boolean(), json!({ "rank": r, "points": x.len() }))
}

fn lattice_laws(inst: &Instance, b: &Budgets, rng: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    let l = OrthoLattice::build(x, b.lattice_cap)?;
    let n = l.len();
    let pairs: Vec<(usize, usize)> = if n * n <= 1 << 16 {
        (0..n).flat_map(|a| (0..n).map(move |c| (a, c))).collect()
    } else {
        (0..1 << 12).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    let (bot, top) = (l.bottom(), l.top());
    let unary = (0..n).all(|a| {
        let ac = l.occ(a);
        l.occ(ac) == a && l.meet(a, ac) == bot && l.join(a, ac) == top
    });
    let binary = pairs.iter().all(|&(a, c)| {
        l.element(l.meet(a, c)) == &l.element(a).intersection(l.element(c))
            && l.occ(l.join(a, c)) == l.meet(l.occ(a), l.occ(c))
            && l.leq(a, c) == l.leq(l.occ(c), l.occ(a))
    });
    verdict(unary && binary, json!({ "size": n, "pairs_checked": pairs.len() }))
}

fn boolean_correspondence(inst: &Instance, b: &Budgets, _: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    if !x.is_boolean() {
        return skip("orthogonality is not the inequality relation");
    }
    let l = OrthoLattice::build(x, b.lattice_cap)?;
    let details = json!({
        "size": l.len(),
        "modular": l.is_modular(),
        "orthomodular": l.is_orthomodular(),
        "covering": l.has_covering(),
        "atomistic": l.is_atomistic(),
    });
    let ok = l.len() == 1usize << x.len() && l.is_modular() && l.is_orthomodular() && l.has_covering() && l.is_atomistic();
    verdict(ok, details)
}

fn atom_space_duality(inst: &Instance, b: &Budgets, _: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    if !x.is_point_closed() {
        return skip("not point-closed");
    }
    let ok = verify_atom_space_duality(x, b.lattice_cap)?;
    verdict(ok, json!({ "isomorphic": ok }))
}

fn all_permutations(n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
        if prefix.len() == used.len() {
            f(prefix);
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, f);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    go(&mut Vec::new(), &mut vec![false; n], f);
}

/// Automorphisms counted by exhaustive search over all `n!` bijections.
pub fn brute_force_automorphism_count(x: &Orthoset) -> u64 {
    let mut count = 0;
    all_permutations(x.len(), &mut |img| {
        let ok = (0..img.len()).all(|p| (p + 1..img.len()).all(|q| x.orthogonal(p, q) == x.orthogonal(img[p], img[q])));
        count += u64::from(ok);
    });
    count
}

fn automorphism_oracle(inst: &Instance, b: &Budgets, _: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    let g = automorphism_group(x);
    let Some(naive) = g.naive_closure(b.group_budget as usize) else {
        return Err(CliError::Budget(format!("group exceeds {} elements", b.group_budget)));
    };
    let mut ok = g.order() == naive.len() as u128 && naive.iter().all(|s| is_automorphism(x, s));
    let brute = (x.len() <= 7).then(|| brute_force_automorphism_count(x));
    if let Some(c) = brute {
        ok &= u128::from(c) == g.order();
    }
    verdict(ok, json!({ "order": order_json(g.order()), "naive_closure": naive.len(), "brute_force": brute }))
}

fn g_ef_oracle(inst: &Instance, b: &Budgets, _: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    let ctx = AutContext::new(x, b.group_budget);
    let elements = ctx.aut.elements(b.group_budget)?;
    let mut ok = true;
    let mut orders = std::collections::BTreeSet::new();
    for e in 0..x.len() {
        for f in (0..x.len()).filter(|&f| f != e) {
            let g = ctx.g_ef(e, f)?;
            let fixed = x.ortho_complement(&x.set([e, f]));
            let naive: Vec<_> = elements.iter().filter(|s| fixed.iter().all(|p| s.fixes(p))).collect();
            let orbit: HashSet<usize> = naive.iter().map(|s| s.apply(e)).collect();
            let closure = x.ortho_closure(&x.set([e, f]));
            ok &= g.order() == naive.len() as u128
                && g.same_group(&ctx.g_ef(f, e)?)
                && g.orbit(e).len() == orbit.len()
                && orbit.iter().all(|&p| closure.contains(p));
            orders.insert(g.order());
        }
    }
    let orders: Vec<Value> = orders.into_iter().map(order_json).collect();
    verdict(ok, json!({ "distinct_orders": orders }))
}

fn transitivity(inst: &Instance, b: &Budgets, _: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    let ctx = AutContext::new(x, b.group_budget);
    let ht = ctx.check_ht()?;
    let reform = ctx.check_reformulations()?;
    // The verdict is recorded; the check is that (HT1) matches the per-pair orbit
    // data and that a reported non-conjugate pair is non-conjugate both ways.
    let mut ok = ht.ht1 == ht.pairs.iter().all(|p| p.orbit.contains(&p.f));
    if let Some(w) = &ht.ht2_failure {
        ok &= !ctx.conjugate_pair(w.reference, w.pair)? && !ctx.conjugate_pair(w.pair, w.reference)?;
    }
    let identity = ht.pairs.iter().filter(|p| p.orbit_identity).count();
    verdict(
        ok,
        json!({
            "ht1": ht.ht1,
            "ht2": ht.ht2,
            "ht2_failure": ht.ht2_failure,
            "orbit_identity_pairs": identity,
            "pairs": ht.pairs.len(),
            "reformulations": reform,
        }),
    )
}

/// Elements having a `k`-th root for every `k` up to the group order, by direct search.
fn exhaustive_roots(elements: &[orthoset_core::Permutation]) -> Vec<orthoset_core::Permutation> {
    let order = elements.len() as u64;
    let mut remaining: HashSet<_> = elements.iter().cloned().collect();
    for k in 1..=order {
        let powers: HashSet<_> = elements.iter().map(|s| s.pow(k)).collect();
        remaining.retain(|s| powers.contains(s));
        if remaining.len() <= 1 {
            break;
        }
    }
    let mut out: Vec<_> = remaining.into_iter().collect();
    out.sort();
    out
}

fn divisible(inst: &Instance, b: &Budgets, _: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let x = orthoset_or_skip!(inst);
    let ctx = AutContext::new(x, b.group_budget);
    let mut ok = true;
    let mut pairs = 0;
    for e in 0..x.len() {
        for f in (0..x.len()).filter(|&f| f != e) {
            let g = ctx.g_ef(e, f)?;
            let elements = g.elements(b.group_budget)?;
            // φ = ψ^{|G|} forces φ = id, so both searches must give the identity alone.
            let id = vec![orthoset_core::Permutation::identity(x.len())];
            ok &= divisible_part(&g, b.group_budget)?.elements == id && exhaustive_roots(&elements) == id;
            pairs += 1;
        }
    }
    let dt = ctx.check_dt()?;
    if x.len() >= 2 {
        ok &= !dt.dt1;
    }
    verdict(ok, json!({ "pairs": pairs, "dt0": dt.dt0, "dt1": dt.dt1, "dt2": dt.dt2, "explanation": dt.explanation }))
}

/// A copy of `h` over a fresh tower, so that checks do not share tower growth.
fn fresh(h: &QuadraticSpace) -> QuadraticSpace {
    QuadraticSpace::from_json(&h.to_json().to_string()).expect("round trip of a valid space")
}

fn random_vector(h: &QuadraticSpace, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v: Vec<i64> = (0..h.dim()).map(|_| rng.gen_range(-3..=3)).collect();
        if v.iter().any(|&c| c != 0) {
            return h.vector_from_ints(&v);
        }
    }
}

/// Checks every identity of the simple rotation taking `p` to `q`.
pub fn rotation_identities(h: &QuadraticSpace, p: &ProjPoint, q: &ProjPoint) -> Result<bool, CliError> {
    let (p, q) = (p.clone(), q.clone());
    let r = h.simple_rotation(&p, &q)?;
    let (u, w) = r.plane();
    let pm = r.plane_matrix();
    let mut ok = h.preserves_form(r.matrix())
        && r.apply_point(&p) == q
        && pm[0][0] == pm[1][1]
        && pm[0][1] == -&pm[1][0]
        && (r.alpha().square() + r.beta().square()).is_one();
    let back = h.simple_rotation(&q, &p)?;
    ok &= back.matrix().mul(r.matrix()).is_identity();
    let s = h.half_root(&r)?;
    ok &= s.matrix().mul(s.matrix()) == *r.matrix() && h.preserves_form(s.matrix());
    let quarter = h.rotation(u, w, h.tower().zero(), h.tower().one())?;
    ok &= h.rotation_commutes(&r, &s)? && h.rotation_commutes(&r, &quarter)? && h.rotation_commutes(&s, &quarter)?;
    ok &= h.det_label(r.matrix(), &[u.clone(), w.clone()], &[])? == 1;
    Ok(ok)
}

fn rotation_algebra(inst: &Instance, _: &Budgets, rng: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let h = space_or_skip!(inst);
    let samples = 8;
    let mut failures = 0;
    for _ in 0..samples {
        let h = fresh(h);
        let p = h.point(&random_vector(&h, rng))?;
        let q = loop {
            let q = h.point(&random_vector(&h, rng))?;
            if q != p {
                break q;
            }
        };
        failures += usize::from(!rotation_identities(&h, &p, &q)?);
    }
    verdict(failures == 0, json!({ "samples": samples, "failures": failures }))
}

fn random_scalar(tower: &Tower, rng: &mut ChaCha8Rng) -> FieldElement {
    let q = tower.from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
    match tower.base() {
        Base::Rationals => q,
        Base::RationalFunctions => {
            let t = tower.t().expect("rational-function base");
            q + tower.from_int(rng.gen_range(-3..=3)) * t.pow(rng.gen_range(0..3))
        }
    }
}

/// `√(α² + β²)` squares back, and the sum of squares of the nonzero `terms` is nonzero.
pub fn pythagorean_identities(a: &FieldElement, b: &FieldElement, terms: &[FieldElement]) -> Result<bool, CliError> {
    let sum = a.square() + b.square();
    let g = sum.sqrt().map_err(|e| CliError::Input(e.to_string()))?;
    let mut ok = g.square() == sum && !g.is_negative() && g.is_zero() == (a.is_zero() && b.is_zero());
    let nonzero: Vec<&FieldElement> = terms.iter().filter(|x| !x.is_zero()).collect();
    if let Some(first) = nonzero.first() {
        let s = nonzero.iter().fold(first.tower().zero(), |acc, x| acc + x.square());
        ok &= !s.is_zero();
    }
    Ok(ok)
}

fn pythagorean(inst: &Instance, _: &Budgets, rng: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let h = space_or_skip!(inst);
    let samples = 16;
    let mut failures = 0;
    for _ in 0..samples {
        let h = fresh(h);
        let tower = h.tower();
        let (a, b) = (random_scalar(tower, rng), random_scalar(tower, rng));
        let terms: Vec<FieldElement> = (0..rng.gen_range(1..5)).map(|_| random_scalar(tower, rng)).collect();
        failures += usize::from(!pythagorean_identities(&a, &b, &terms)?);
    }
    verdict(failures == 0, json!({ "samples": samples, "failures": failures }))
}

fn og_axioms(inst: &Instance, _: &Budgets, rng: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let h = space_or_skip!(inst);
    let mut pts = Vec::new();
    for v in (0..h.dim()).map(|i| h.basis_vector(i)).chain((0..6).map(|_| random_vector(h, rng))) {
        let p = h.point(&v)?;
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let r = h.check_og_axioms(&pts)?;
    verdict(r.og1 && r.og2, serde_json::to_value(&r).expect("serializable"))
}

/// Small rotation by `t` in the `e1, e2` plane, with its displacement, ≈ and probe checks.
pub fn infinitesimal_report(h: &QuadraticSpace, extra: &[Vector], word_length: usize) -> Result<(bool, Value), CliError> {
    let t = h.tower().t().map_err(|e| CliError::Input(e.to_string()))?;
    let (e1, e2) = (h.basis_vector(0), h.basis_vector(1));
    let plane = h.orthogonalize(&[e1.clone(), e2.clone()])?;
    let (u, w) = (h.normalize(&plane[0])?, h.normalize(&plane[1])?);
    let rot = h.small_rotation(&u, &w, &t)?;
    let p1 = h.point(&e1)?;
    let moves = rot.apply_point(&p1) != p1;
    let mut displaced = 0;
    let tests: Vec<Vector> = (0..h.dim()).map(|i| h.basis_vector(i)).chain(extra.iter().cloned()).collect();
    for x in &tests {
        displaced += usize::from(!h.displacement_is_infinitesimal(rot.matrix(), x)?);
    }
    let near: Vec<FieldElement> = e1.iter().zip(&e2).map(|(a, b)| a + &(&t * b)).collect();
    let near_equiv = h.approx_equiv(&p1, &h.point(&near)?)?;
    let p2 = h.point(&e2)?;
    let far_equiv = h.approx_equiv(&p1, &p2)?;
    let n = h.dim();
    let cycle = Matrix::from_columns((0..n).map(|j| h.basis_vector((j + 1) % n)).collect())?;
    let mut conjugators = vec![Matrix::identity(h.tower(), n)];
    if h.preserves_form(&cycle) {
        conjugators.push(cycle);
    }
    let probe = h.quasiprimitivity_probe(&rot, &conjugators, &[], &[(p1, p2)], word_length)?;
    let ok = moves && displaced == 0 && near_equiv && !far_equiv && probe.confined && probe.separated_targets == [0];
    let details = json!({
        "moves_e1": moves,
        "test_vectors": tests.len(),
        "non_infinitesimal_displacements": displaced,
        "e1_approx_e1_plus_t_e2": near_equiv,
        "e1_approx_e2": far_equiv,
        "probe": probe,
    });
    Ok((ok, details))
}

fn infinitesimal_geometry(inst: &Instance, b: &Budgets, rng: &mut ChaCha8Rng) -> Result<CheckResult, CliError> {
    let h = space_or_skip!(inst);
    if h.tower().base() != Base::RationalFunctions {
        return skip("needs the base Q(t)");
    }
    let h = fresh(h);
    let extra: Vec<Vector> = (0..20).map(|_| random_vector(&h, rng)).collect();
    let (ok, details) = infinitesimal_report(&h, &extra, b.word_length)?;
    verdict(ok, details)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_counts() {
        assert_eq!(brute_force_automorphism_count(&Orthoset::cycle(6).unwrap()), 12);
        assert_eq!(brute_force_automorphism_count(&Orthoset::boolean(4).unwrap()), 24);
    }

    #[test]
    fn exhaustive_roots_of_cyclic_group() {
        let c = orthoset_core::Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let elements: Vec<_> = (0..4).map(|k| c.pow(k)).collect();
        assert_eq!(exhaustive_roots(&elements), vec![orthoset_core::Permutation::identity(4)]);
    }
}
