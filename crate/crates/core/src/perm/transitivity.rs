use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::Serialize;

use super::search::{automorphism_group, find_automorphism, is_automorphism};
use super::{num_lcm, PermError, PermGroup, Permutation};
use crate::orthoset::Orthoset;

pub const DEFAULT_GROUP_BUDGET: u64 = 1_000_000;

/// The automorphism group of an orthoset together with its `G_ef` subgroups.
pub struct AutContext<'a> {
    pub x: &'a Orthoset,
    pub aut: PermGroup,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub e: usize,
    pub f: usize,
    pub order: u128,
    pub orbit: Vec<usize>,
    pub closure: Vec<usize>,
    pub ht1: bool,
    pub orbit_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyWitness {
    pub reference: (usize, usize),
    pub pair: (usize, usize),
    pub reference_order: u128,
    pub pair_order: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HtReport {
    pub ht1: bool,
    pub ht2: bool,
    /// First pair `(e, f)` with `f` outside the `G_ef`-orbit of `e`.
    pub ht1_failure: Option<(usize, usize)>,
    /// First pair not conjugate to the reference pair.
    pub ht2_failure: Option<ConjugacyWitness>,
    pub pairs: Vec<PairRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReformulationReport {
    pub ht1_prime: bool,
    pub ht2_prime: bool,
    pub ht1_double_prime: bool,
    pub ht2_double_prime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisiblePart {
    pub elements: Vec<Permutation>,
    /// Largest `k` examined; powers repeat with period dividing the exponent.
    pub checked_up_to: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DtPairRecord {
    pub e: usize,
    pub f: usize,
    pub g_ef_order: u128,
    pub divisible_part_size: usize,
    pub dt0: bool,
    pub dt1: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DtReport {
    pub dt0: bool,
    pub dt1: bool,
    pub dt2: bool,
    pub explanation: String,
    pub dt2_failure: Option<((usize, usize), (usize, usize))>,
    pub pairs: Vec<DtPairRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiprimitiveRecord {
    pub rotation: Permutation,
    pub normal_closure_order: u128,
    pub transitive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiprimitiveReport {
    pub quasiprimitive: bool,
    pub group_order: u128,
    pub rotations: Vec<QuasiprimitiveRecord>,
}

impl<'a> AutContext<'a> {
    pub fn new(x: &'a Orthoset, budget: u64) -> Self {
        AutContext { x, aut: automorphism_group(x), budget }
    }

    fn distinct_pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.x.len();
        (0..n).flat_map(move |e| (0..n).filter(move |&f| f != e).map(move |f| (e, f)))
    }

    /// Automorphisms fixing every point orthogonal to both `e` and `f`.
    pub fn g_ef(&self, e: usize, f: usize) -> Result<PermGroup, PermError> {
        if e == f {
            return Err(PermError::EqualPoints);
        }
        let fixed = self.x.ortho_complement(&self.x.set([e, f]));
        Ok(self.aut.pointwise_stabilizer(fixed.iter()))
    }

    pub fn check_orbit_identity(&self, e: usize, f: usize) -> Result<bool, PermError> {
        let orbit = self.g_ef(e, f)?.orbit(e);
        Ok(orbit == self.x.ortho_closure(&self.x.set([e, f])).to_vec())
    }

    fn pair_record(&self, e: usize, f: usize) -> Result<PairRecord, PermError> {
        let g = self.g_ef(e, f)?;
        let orbit = g.orbit(e);
        let closure = self.x.ortho_closure(&self.x.set([e, f])).to_vec();
        Ok(PairRecord {
            e,
            f,
            order: g.order(),
            ht1: orbit.contains(&f),
            orbit_identity: orbit == closure,
            orbit,
            closure,
        })
    }

    /// Whether some `τ` with `τ(e) = e'` satisfies `τ⁻¹ G_{e'f'} τ = G_ef`.
    pub fn conjugate_pair(&self, ef: (usize, usize), ef2: (usize, usize)) -> Result<bool, PermError> {
        let g = self.g_ef(ef.0, ef.1)?;
        let h = self.g_ef(ef2.0, ef2.1)?;
        if g.order() != h.order() {
            return Ok(false);
        }
        let flow = self.aut.for_each_mapping(ef.0, ef2.0, self.budget, |tau| {
            // Equal orders, so containment of the conjugated generators suffices.
            if h.generators().iter().all(|x| g.contains(&x.conjugate_by(tau))) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(flow.is_break())
    }

    /// Decides (HT1) and (HT2). Conjugacy via an automorphism sending `e` to `e'`
    /// is an equivalence relation on pairs, so every pair is compared with the first.
    pub fn check_ht(&self) -> Result<HtReport, PermError> {
        let mut pairs = Vec::new();
        for (e, f) in self.distinct_pairs() {
            pairs.push(self.pair_record(e, f)?);
        }
        let ht1_failure = pairs.iter().find(|r| !r.ht1).map(|r| (r.e, r.f));
        let mut ht2_failure = None;
        if let Some(reference) = pairs.first() {
            for r in &pairs[1..] {
                if !self.conjugate_pair((reference.e, reference.f), (r.e, r.f))? {
                    ht2_failure = Some(ConjugacyWitness {
                        reference: (reference.e, reference.f),
                        pair: (r.e, r.f),
                        reference_order: reference.order,
                        pair_order: r.order,
                    });
                    break;
                }
            }
        }
        Ok(HtReport { ht1: ht1_failure.is_none(), ht2: ht2_failure.is_none(), ht1_failure, ht2_failure, pairs })
    }

    pub fn check_ht1(&self) -> Result<bool, PermError> {
        for (e, f) in self.distinct_pairs() {
            if !self.g_ef(e, f)?.orbit(e).contains(&f) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn check_ht2(&self) -> Result<bool, PermError> {
        Ok(self.check_ht()?.ht2)
    }

    /// The primed and double-primed reformulations of homogeneous transitivity.
    pub fn check_reformulations(&self) -> Result<ReformulationReport, PermError> {
        let n = self.x.len();
        let mut orbits = vec![vec![Vec::new(); n]; n];
        let mut groups: Vec<Vec<Option<PermGroup>>> = (0..n).map(|_| (0..n).map(|_| None).collect()).collect();
        for (e, f) in self.distinct_pairs() {
            let g = self.g_ef(e, f)?;
            orbits[e][f] = g.orbit(e);
            groups[e][f] = Some(g);
        }
        let group = |e: usize, f: usize| groups[e][f].as_ref().expect("distinct pair");
        let mut r = ReformulationReport { ht1_prime: true, ht2_prime: true, ht1_double_prime: true, ht2_double_prime: true };
        for (e, f) in self.distinct_pairs() {
            let orbit = &orbits[e][f];
            let has_f = orbit.contains(&f);
            let has_third = orbit.iter().any(|&g| g != e && g != f);
            let has_perp = orbit.iter().any(|&g| self.x.orthogonal(g, e));
            r.ht1_prime &= has_f && has_third;
            r.ht1_double_prime &= has_f && orbit.len() >= 3 && has_perp;
            r.ht2_prime &= (0..n).any(|eb| self.x.orthogonal(e, eb) && group(e, eb).same_group(group(e, f)));
            for g in (0..n).filter(|&g| g != e) {
                if orbit.contains(&g) && !orbits[e][g].contains(&f) {
                    r.ht2_double_prime = false;
                }
            }
        }
        Ok(r)
    }

    /// An automorphism with `φ(e_i) = f_i` fixing every point orthogonal to all
    /// the `e_i` and `f_i`, for mutually orthogonal tuples of equal length.
    pub fn transport(&self, es: &[usize], fs: &[usize]) -> Result<Option<Permutation>, PermError> {
        if es.len() != fs.len() {
            return Err(PermError::InvalidArgument("tuples differ in length".into()));
        }
        for t in [es, fs] {
            if !self.x.is_perp_set(&self.x.set(t.iter().copied())) || t.iter().collect::<HashSet<_>>().len() != t.len() {
                return Err(PermError::InvalidArgument("tuple is not mutually orthogonal".into()));
            }
        }
        let fixed = self.x.ortho_complement(&self.x.set(es.iter().chain(fs).copied()));
        let mut constraints: Vec<(usize, usize)> = es.iter().copied().zip(fs.iter().copied()).collect();
        constraints.extend(fixed.iter().map(|p| (p, p)));
        Ok(find_automorphism(self.x, &constraints))
    }

    /// Runs (DT0)–(DT2) with `R_ef` computed by [`divisible_part`].
    pub fn check_dt(&self) -> Result<DtReport, PermError> {
        let mut pairs = Vec::new();
        let mut parts = Vec::new();
        for (e, f) in self.distinct_pairs() {
            let g = self.g_ef(e, f)?;
            let part = divisible_part(&g, self.budget)?;
            let set: HashSet<&Permutation> = part.elements.iter().collect();
            let closed = part.elements.iter().all(|a| {
                set.contains(&a.inverse()) && part.elements.iter().all(|b| set.contains(&a.compose(b)))
            });
            let abelian =
                part.elements.iter().all(|a| part.elements.iter().all(|b| a.compose(b) == b.compose(a)));
            pairs.push(DtPairRecord {
                e,
                f,
                g_ef_order: g.order(),
                divisible_part_size: part.elements.len(),
                dt0: closed && abelian,
                dt1: part.elements.iter().any(|p| p.apply(e) == f),
            });
            parts.push(part);
        }
        let mut dt2_failure = None;
        if let Some(reference) = pairs.first() {
            let r0: HashSet<&Permutation> = parts[0].elements.iter().collect();
            for (i, r) in pairs.iter().enumerate().skip(1) {
                // Same equivalence argument as for (HT2): compare with the first pair.
                let flow = self.aut.for_each_mapping(reference.e, r.e, self.budget, |tau| {
                    let ok = parts[i].elements.len() == r0.len()
                        && parts[i].elements.iter().all(|x| r0.contains(&x.conjugate_by(tau)));
                    if ok {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                })?;
                if flow.is_continue() {
                    dt2_failure = Some(((reference.e, reference.f), (r.e, r.f)));
                    break;
                }
            }
        }
        let dt0 = pairs.iter().all(|p| p.dt0);
        let dt1 = pairs.iter().all(|p| p.dt1);
        let explanation = if pairs.is_empty() {
            "no pairs of distinct points".to_string()
        } else {
            "R_ef trivial in finite groups: psi^|G| is the identity, so only the identity has every root".to_string()
        };
        Ok(DtReport { dt0, dt1, dt2: dt2_failure.is_none(), explanation, dt2_failure, pairs })
    }
}

/// Elements with a `k`-th root in `g` for every `k ≥ 1`, by intersecting the sets
/// of `k`-th powers. The `k`-th powers depend only on `k` modulo the exponent of
/// the group, so `k` up to the exponent covers all `k ≤ |G|`. Checked against the
/// finite-group answer `{identity}`.
pub fn divisible_part(g: &PermGroup, budget: u64) -> Result<DivisiblePart, PermError> {
    let elements = g.elements(budget)?;
    let exponent = elements.iter().fold(1u64, |acc, x| num_lcm(acc, x.order()));
    let mut remaining: HashSet<Permutation> = elements.iter().cloned().collect();
    let mut checked = 0;
    for k in 1..=exponent {
        checked = k;
        let powers: HashSet<Permutation> = elements.iter().map(|x| x.pow(k % x.order())).collect();
        remaining.retain(|x| powers.contains(x));
    }
    let mut out: Vec<Permutation> = remaining.into_iter().collect();
    out.sort();
    assert_eq!(out, vec![Permutation::identity(g.degree())], "divisible part of a finite group is trivial");
    Ok(DivisiblePart { elements: out, checked_up_to: checked })
}

/// For each nontrivial `ρ`, whether the normal closure of `ρ` in the group
/// generated by all the rotations acts transitively.
pub fn check_quasiprimitive(x: &Orthoset, rotations: &[Permutation]) -> Result<QuasiprimitiveReport, PermError> {
    for r in rotations {
        if r.degree() != x.len() {
            return Err(PermError::DegreeMismatch { expected: x.len(), found: r.degree() });
        }
        if !is_automorphism(x, r) {
            return Err(PermError::NotAutomorphism);
        }
    }
    let group = PermGroup::new(x.len(), rotations.to_vec())?;
    let mut records = Vec::new();
    for r in rotations.iter().filter(|r| !r.is_identity()) {
        let closure = group.normal_closure(std::slice::from_ref(r));
        records.push(QuasiprimitiveRecord {
            rotation: r.clone(),
            normal_closure_order: closure.order(),
            transitive: closure.orbit(0).len() == x.len(),
        });
    }
    Ok(QuasiprimitiveReport {
        quasiprimitive: records.iter().all(|r| r.transitive),
        group_order: group.order(),
        rotations: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_ef_orders() {
        let b4 = Orthoset::boolean(4).unwrap();
        let ctx = AutContext::new(&b4, DEFAULT_GROUP_BUDGET);
        assert_eq!(ctx.g_ef(0, 1).unwrap().order(), 2);
        assert_eq!(ctx.aut.pointwise_stabilizer([0, 1]).order(), 2);
        assert_eq!(ctx.g_ef(1, 1).err(), Some(PermError::EqualPoints));
        let c6 = Orthoset::cycle(6).unwrap();
        let ctx = AutContext::new(&c6, DEFAULT_GROUP_BUDGET);
        assert_eq!(ctx.g_ef(0, 2).unwrap().order(), 2);
        assert_eq!(ctx.g_ef(0, 1).unwrap().order(), 12);
    }

    #[test]
    fn ht_on_examples() {
        let b4 = Orthoset::boolean(4).unwrap();
        let r = AutContext::new(&b4, DEFAULT_GROUP_BUDGET).check_ht().unwrap();
        assert!(r.ht1 && r.ht2);
        let c6 = Orthoset::cycle(6).unwrap();
        let r = AutContext::new(&c6, DEFAULT_GROUP_BUDGET).check_ht().unwrap();
        assert!(!r.ht2);
        let w = r.ht2_failure.unwrap();
        assert_eq!((w.reference, w.pair, w.reference_order, w.pair_order), ((0, 1), (0, 2), 12, 2));
    }

    #[test]
    fn orbit_identity_on_c6() {
        let c6 = Orthoset::cycle(6).unwrap();
        let ctx = AutContext::new(&c6, DEFAULT_GROUP_BUDGET);
        assert_eq!(ctx.check_orbit_identity(0, 2), Ok(true));
        assert_eq!(ctx.check_orbit_identity(0, 3), Ok(true));
    }

    #[test]
    fn divisible_part_of_cyclic_group() {
        let c = Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        let g = PermGroup::new(6, vec![c]).unwrap();
        let part = divisible_part(&g, 100).unwrap();
        assert_eq!(part.elements, vec![Permutation::identity(6)]);
        assert_eq!(part.checked_up_to, 6);
        assert_eq!(divisible_part(&PermGroup::trivial(3), 10).unwrap().elements.len(), 1);
    }

    #[test]
    fn dt_on_finite_instances() {
        let b3 = Orthoset::boolean(3).unwrap();
        let r = AutContext::new(&b3, DEFAULT_GROUP_BUDGET).check_dt().unwrap();
        assert!(r.dt0 && !r.dt1 && r.dt2);
        let one = Orthoset::new(1, &[]).unwrap();
        let r = AutContext::new(&one, DEFAULT_GROUP_BUDGET).check_dt().unwrap();
        assert!(r.dt0 && r.dt1 && r.dt2);
    }

    #[test]
    fn quasiprimitive_examples() {
        let b4 = Orthoset::boolean(4).unwrap();
        let transpositions: Vec<Permutation> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| Permutation::from_cycles(4, &[&[a, b]]).unwrap()))
            .collect();
        assert!(check_quasiprimitive(&b4, &transpositions).unwrap().quasiprimitive);
        assert!(check_quasiprimitive(&b4, &[Permutation::identity(4)]).unwrap().quasiprimitive);
        let c6 = Orthoset::cycle(6).unwrap();
        let rot = Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        assert!(check_quasiprimitive(&c6, &[rot]).unwrap().quasiprimitive);
        let bad = Permutation::from_cycles(6, &[&[0, 1]]).unwrap();
        assert_eq!(check_quasiprimitive(&c6, &[bad]).err(), Some(PermError::NotAutomorphism));
    }

    #[test]
    fn transport_in_boolean() {
        let b4 = Orthoset::boolean(4).unwrap();
        let ctx = AutContext::new(&b4, DEFAULT_GROUP_BUDGET);
        let phi = ctx.transport(&[0, 1], &[2, 3]).unwrap().unwrap();
        assert_eq!((phi.apply(0), phi.apply(1)), (2, 3));
    }
}
