use std::collections::{HashSet, VecDeque};
use std::ops::ControlFlow;
use std::sync::OnceLock;

use super::{PermError, Permutation};

/// A permutation group given by generators. The stabilizer chain is built on
/// first use and cached.
pub struct PermGroup {
    n: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<Chain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup::new_unchecked(self.n, self.gens.clone())
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup").field("degree", &self.n).field("generators", &self.gens).finish()
    }
}

struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// Basic orbit in increasing point order.
    orbit: Vec<usize>,
    /// `transversal[β]` maps the base point to `β`.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(n: usize, base: usize, gens: Vec<Permutation>) -> Self {
        let mut level = Level { base, gens, orbit: Vec::new(), transversal: Vec::new() };
        level.recompute(n);
        level
    }

    fn recompute(&mut self, n: usize) {
        let mut transversal: Vec<Option<Permutation>> = vec![None; n];
        transversal[self.base] = Some(Permutation::identity(n));
        let mut queue = VecDeque::from([self.base]);
        while let Some(b) = queue.pop_front() {
            let u = transversal[b].clone().expect("visited");
            for g in &self.gens {
                let c = g.apply(b);
                if transversal[c].is_none() {
                    transversal[c] = Some(g.compose(&u));
                    queue.push_back(c);
                }
            }
        }
        self.orbit = (0..n).filter(|&p| transversal[p].is_some()).collect();
        self.transversal = transversal;
    }
}

/// Base and strong generating set, by the deterministic Schreier–Sims algorithm.
struct Chain {
    n: usize,
    levels: Vec<Level>,
}

impl Chain {
    fn build(n: usize, gens: &[Permutation], prefix: &[usize]) -> Chain {
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.fixes(b)) {
                base.push(g.first_moved().expect("nonidentity"));
            }
        }
        let mut levels: Vec<Level> = Vec::with_capacity(base.len());
        for (i, &b) in base.iter().enumerate() {
            let fixing: Vec<Permutation> =
                gens.iter().filter(|g| base[..i].iter().all(|&c| g.fixes(c))).cloned().collect();
            levels.push(Level::new(n, b, fixing));
        }
        let mut chain = Chain { n, levels };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            match self.find_missing(lvl) {
                None => i -= 1,
                Some((h, j)) => {
                    if j == self.levels.len() {
                        let b = h.first_moved().expect("nonidentity residue");
                        self.levels.push(Level::new(self.n, b, Vec::new()));
                    }
                    for l in lvl + 1..=j {
                        self.levels[l].gens.push(h.clone());
                        self.levels[l].recompute(self.n);
                    }
                    i = j + 1;
                }
            }
        }
    }

    /// A Schreier generator at level `lvl` that does not sift through the deeper levels.
    fn find_missing(&self, lvl: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[lvl];
        for &beta in &level.orbit {
            let u = level.transversal[beta].as_ref().expect("orbit point");
            for g in &level.gens {
                let gb = g.apply(beta);
                let ugb = level.transversal[gb].as_ref().expect("orbit is closed");
                let schreier = ugb.inverse().compose(g).compose(u);
                let (h, j) = self.strip(&schreier, lvl + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sifts `g` from level `start`; returns the residue and the level where sifting stopped.
    fn strip(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let beta = h.apply(level.base);
            match &level.transversal[beta] {
                None => return (h, l),
                Some(u) => h = u.inverse().compose(&h),
            }
        }
        (h, self.levels.len())
    }

    fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Calls `f` on every element of the stabilizer of the first `k` base points,
    /// each exactly once, in a fixed order.
    fn walk(
        &self,
        k: usize,
        prefix: &Permutation,
        f: &mut dyn FnMut(&Permutation) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == self.levels.len() {
            return f(prefix);
        }
        let level = &self.levels[k];
        for &beta in &level.orbit {
            let u = level.transversal[beta].as_ref().expect("orbit point");
            self.walk(k + 1, &prefix.compose(u), f)?;
        }
        ControlFlow::Continue(())
    }
}

impl PermGroup {
    pub fn new(n: usize, gens: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = gens.iter().find(|g| g.degree() != n) {
            return Err(PermError::DegreeMismatch { expected: n, found: g.degree() });
        }
        Ok(Self::new_unchecked(n, gens))
    }

    fn new_unchecked(n: usize, gens: Vec<Permutation>) -> Self {
        PermGroup { n, gens, chain: OnceLock::new() }
    }

    pub fn trivial(n: usize) -> Self {
        Self::new_unchecked(n, Vec::new())
    }

    /// The full symmetric group on `0..n`.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).expect("valid"));
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle]).expect("valid"));
        }
        Self::new_unchecked(n, gens)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    fn chain(&self) -> &Chain {
        self.chain.get_or_init(|| Chain::build(self.n, &self.gens, &[]))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.iter().all(Permutation::is_identity)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && self.chain().strip(g, 0).0.is_identity()
    }

    /// The base of the cached stabilizer chain.
    pub fn base(&self) -> Vec<usize> {
        self.chain().levels.iter().map(|l| l.base).collect()
    }

    /// Orbit of `p`, sorted.
    pub fn orbit(&self, p: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[p] = true;
        let mut queue = VecDeque::from([p]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&x| seen[x]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.n
    }

    /// Points fixed by every generator.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&p| self.gens.iter().all(|g| g.fixes(p))).collect()
    }

    /// Subgroup fixing each point of `points`, by rebuilding the chain with those
    /// points as a base prefix; the strong generators below the prefix generate it.
    pub fn pointwise_stabilizer(&self, points: impl IntoIterator<Item = usize>) -> PermGroup {
        let prefix: Vec<usize> = points.into_iter().collect();
        if prefix.is_empty() {
            return self.clone();
        }
        let chain = Chain::build(self.n, &self.gens, &prefix);
        let gens = chain.levels.get(prefix.len()).map(|l| l.gens.clone()).unwrap_or_default();
        let mut sub = Self::new_unchecked(self.n, gens);
        let tail = Chain {
            n: self.n,
            levels: chain.levels.into_iter().skip(prefix.len()).collect(),
        };
        let _ = sub.chain.set(tail);
        sub.gens.dedup();
        sub
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// `τ⁻¹ G τ`.
    pub fn conjugate(&self, tau: &Permutation) -> PermGroup {
        Self::new_unchecked(self.n, self.gens.iter().map(|g| g.conjugate_by(tau)).collect())
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Visits every element once; stops early if `f` breaks. The group order is
    /// checked against `budget` first.
    pub fn for_each_element(
        &self,
        budget: u64,
        mut f: impl FnMut(&Permutation) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, PermError> {
        if self.order() > budget as u128 {
            return Err(PermError::GroupTooLarge { budget });
        }
        let chain = self.chain();
        Ok(chain.walk(0, &Permutation::identity(self.n), &mut f))
    }

    pub fn elements(&self, budget: u64) -> Result<Vec<Permutation>, PermError> {
        let mut out = Vec::new();
        let _ = self.for_each_element(budget, |g| {
            out.push(g.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Visits the elements mapping `a` to `b`, as `u ∘ σ` with `u` a fixed coset
    /// representative and `σ` running over the stabilizer of `a`. At most
    /// `budget` candidates are visited.
    pub fn for_each_mapping(
        &self,
        a: usize,
        b: usize,
        budget: u64,
        mut f: impl FnMut(&Permutation) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, PermError> {
        let chain = Chain::build(self.n, &self.gens, &[a]);
        let Some(u) = chain.levels[0].transversal[b].clone() else {
            return Ok(ControlFlow::Continue(()));
        };
        let mut visited = 0u64;
        let mut over = false;
        let flow = chain.walk(1, &u, &mut |tau| {
            visited += 1;
            if visited > budget {
                over = true;
                return ControlFlow::Break(());
            }
            f(tau)
        });
        if over {
            return Err(PermError::GroupTooLarge { budget });
        }
        Ok(flow)
    }

    /// Smallest subgroup of `self` containing `seeds` and closed under conjugation
    /// by the generators of `self`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> PermGroup {
        let mut gens: Vec<Permutation> = seeds.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut closure = Self::new_unchecked(self.n, gens.clone());
        loop {
            let mut added = false;
            for h in closure.generators().to_vec() {
                for g in &self.gens {
                    let c = h.conjugate_by(g);
                    if !closure.contains(&c) {
                        gens.push(c);
                        closure = Self::new_unchecked(self.n, gens.clone());
                        added = true;
                    }
                }
            }
            if !added {
                return closure;
            }
        }
    }

    /// Breadth-first closure of the generators, independent of the chain. `None`
    /// if more than `limit` elements are found.
    pub fn naive_closure(&self, limit: usize) -> Option<HashSet<Permutation>> {
        let id = Permutation::identity(self.n);
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        Some(seen)
    }
}
