//! The ortholattice `C(X)` of orthoclosed subsets of a finite orthoset.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::orthoset::Orthoset;
use crate::pointset::PointSet;

pub const DEFAULT_CAP: usize = 65_536;

/// Lattices up to this size get precomputed meet and join tables.
const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has more than {cap} elements")]
    CapExceeded { count: usize, cap: usize },
    #[error("orthoset is not point-closed")]
    NotPointClosed,
    #[error("{0}")]
    InvalidArgument(String),
}

/// Element indices into [`OrthoLattice::elements`].
pub type Elem = usize;

pub struct OrthoLattice {
    x: Orthoset,
    elements: Vec<PointSet>,
    index: HashMap<PointSet, Elem>,
    occ: Vec<Elem>,
    atoms: Vec<Elem>,
    tables: OnceLock<Option<Tables>>,
    covers: OnceLock<Vec<Vec<Elem>>>,
}

struct Tables {
    meet: Vec<u32>,
    join: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HReport {
    pub h1: bool,
    pub h2: bool,
    pub h3: bool,
    pub h4: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProjectiveReport {
    pub ps1: bool,
    pub ps2: bool,
    pub ps3: bool,
}

#[derive(Serialize)]
struct HasseJson<'a> {
    elements: Vec<Vec<&'a str>>,
    covers: Vec<(Elem, Elem)>,
    occ: &'a [Elem],
}

impl OrthoLattice {
    /// Enumerates `C(X)` as the intersection closure of `{ {p}⊥ } ∪ {X}`.
    pub fn build(x: &Orthoset, cap: usize) -> Result<Self, LatticeError> {
        let n = x.len();
        let full = x.full_set();
        let mut seen: HashMap<PointSet, Elem> = HashMap::new();
        let mut found = vec![full.clone()];
        seen.insert(full, 0);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for p in 0..n {
                let next = found[i].intersection(x.neighbors(p));
                if seen.contains_key(&next) {
                    continue;
                }
                if found.len() == cap {
                    return Err(LatticeError::CapExceeded { count: cap + 1, cap });
                }
                seen.insert(next.clone(), found.len());
                queue.push_back(found.len());
                found.push(next);
            }
        }
        found.sort();
        let index: HashMap<PointSet, Elem> = found.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let occ = found.iter().map(|e| index[&x.ortho_complement(e)]).collect();
        let mut lattice = OrthoLattice {
            x: x.clone(),
            elements: found,
            index,
            occ,
            atoms: Vec::new(),
            tables: OnceLock::new(),
            covers: OnceLock::new(),
        };
        lattice.atoms = lattice.find_atoms();
        Ok(lattice)
    }

    /// Every atom contains some `{p}⊥⊥`, so the atoms are the minimal ones among those.
    fn find_atoms(&self) -> Vec<Elem> {
        let mut candidates: Vec<Elem> = (0..self.x.len())
            .map(|p| self.index[&self.x.ortho_closure(&PointSet::singleton(self.x.len(), p))])
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let minimal: Vec<Elem> = candidates
            .iter()
            .copied()
            .filter(|&a| !candidates.iter().any(|&b| b != a && self.leq(b, a)))
            .collect();
        minimal
    }

    pub fn orthoset(&self) -> &Orthoset {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements sorted by cardinality, then by member list.
    pub fn elements(&self) -> &[PointSet] {
        &self.elements
    }

    pub fn element(&self, i: Elem) -> &PointSet {
        &self.elements[i]
    }

    pub fn index_of(&self, set: &PointSet) -> Option<Elem> {
        self.index.get(set).copied()
    }

    pub fn bottom(&self) -> Elem {
        0
    }

    pub fn top(&self) -> Elem {
        self.elements.len() - 1
    }

    pub fn occ(&self, i: Elem) -> Elem {
        self.occ[i]
    }

    pub fn occ_table(&self) -> &[Elem] {
        &self.occ
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.elements[a].is_subset(&self.elements[b])
    }

    pub fn orthogonal(&self, a: Elem, b: Elem) -> bool {
        self.leq(a, self.occ[b])
    }

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| {
                let n = self.len();
                if n > TABLE_LIMIT {
                    return None;
                }
                let mut meet = vec![0u32; n * n];
                let mut join = vec![0u32; n * n];
                for a in 0..n {
                    for b in a..n {
                        let m = self.meet_direct(a, b) as u32;
                        let j = self.join_direct(a, b) as u32;
                        meet[a * n + b] = m;
                        meet[b * n + a] = m;
                        join[a * n + b] = j;
                        join[b * n + a] = j;
                    }
                }
                Some(Tables { meet, join })
            })
            .as_ref()
    }

    fn meet_direct(&self, a: Elem, b: Elem) -> Elem {
        self.index[&self.elements[a].intersection(&self.elements[b])]
    }

    fn join_direct(&self, a: Elem, b: Elem) -> Elem {
        self.index[&self.x.ortho_closure(&self.elements[a].union(&self.elements[b]))]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        match self.tables() {
            Some(t) => t.meet[a * self.len() + b] as Elem,
            None => self.meet_direct(a, b),
        }
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        match self.tables() {
            Some(t) => t.join[a * self.len() + b] as Elem,
            None => self.join_direct(a, b),
        }
    }

    pub fn join_all(&self, items: &[Elem]) -> Elem {
        let mut u = self.x.empty_set();
        for &i in items {
            u.union_with(&self.elements[i]);
        }
        self.index[&self.x.ortho_closure(&u)]
    }

    pub fn atoms(&self) -> &[Elem] {
        &self.atoms
    }

    pub fn is_atom(&self, a: Elem) -> bool {
        self.atoms.binary_search(&a).is_ok()
    }

    pub fn atoms_below(&self, a: Elem) -> Vec<Elem> {
        self.atoms.iter().copied().filter(|&p| self.leq(p, a)).collect()
    }

    /// Whether `a` is the join of the atoms below it.
    pub fn is_atom_join(&self, a: Elem) -> bool {
        self.join_all(&self.atoms_below(a)) == a
    }

    pub fn is_atomistic(&self) -> bool {
        (0..self.len()).all(|a| self.is_atom_join(a))
    }

    /// Upper covers of each element. The covers of `a` are the minimal sets among
    /// `(a ∪ {p})⊥⊥` for `p ∉ a`, since anything above `a` contains one of these.
    pub fn upper_covers(&self) -> &[Vec<Elem>] {
        self.covers.get_or_init(|| {
            (0..self.len())
                .map(|a| {
                    let base = &self.elements[a];
                    let mut cand = BTreeSet::new();
                    for p in base.complement().iter() {
                        let mut s = base.clone();
                        s.insert(p);
                        cand.insert(self.index[&self.x.ortho_closure(&s)]);
                    }
                    cand.iter()
                        .copied()
                        .filter(|&c| !cand.iter().any(|&d| d != c && self.leq(d, c)))
                        .collect()
                })
                .collect()
        })
    }

    pub fn covers(&self, a: Elem, b: Elem) -> bool {
        self.upper_covers()[a].contains(&b)
    }

    /// Number of elements in a longest chain, minus one.
    pub fn height(&self) -> usize {
        let covers = self.upper_covers();
        let mut longest = vec![0usize; self.len()];
        // Elements are sorted by cardinality, so covers point forward.
        for a in 0..self.len() {
            for &b in &covers[a] {
                longest[b] = longest[b].max(longest[a] + 1);
            }
        }
        longest[self.top()]
    }

    /// A triple `(a, b, c)` with `c ≤ b` and `(c ∨ a) ∧ b ≠ c ∨ (a ∧ b)`.
    pub fn modularity_witness(&self) -> Option<(Elem, Elem, Elem)> {
        for b in 0..self.len() {
            for c in 0..self.len() {
                if !self.leq(c, b) {
                    continue;
                }
                for a in 0..self.len() {
                    if self.meet(self.join(c, a), b) != self.join(c, self.meet(a, b)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        self.modularity_witness().is_none()
    }

    /// A pair `a ≤ b` with `b ≠ a ∨ (b ∧ a⊥)`. Any `c ≤ a⊥` with `a ∨ c = b`
    /// lies below `b ∧ a⊥`, so testing that one element is complete.
    pub fn orthomodularity_witness(&self) -> Option<(Elem, Elem)> {
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) && self.join(a, self.meet(b, self.occ[a])) != b {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_orthomodular(&self) -> bool {
        self.orthomodularity_witness().is_none()
    }

    fn covering_over(&self, elems: impl Iterator<Item = Elem>) -> bool {
        let covers = self.upper_covers();
        for a in elems {
            for &p in &self.atoms {
                if !self.leq(p, a) && !covers[a].contains(&self.join(a, p)) {
                    return false;
                }
            }
        }
        true
    }

    /// For every `a` and atom `p ≰ a`, `a ∨ p` covers `a`.
    pub fn has_covering(&self) -> bool {
        self.covering_over(0..self.len())
    }

    /// Covering property restricted to finite elements, i.e. joins of finitely
    /// many atoms; in a finite lattice these are the elements that are joins of atoms.
    pub fn has_finite_covering(&self) -> bool {
        self.covering_over((0..self.len()).filter(|&a| self.is_atom_join(a)))
    }

    /// Whether `x ↦ (x ∧ a, x ∧ a⊥)` is an isomorphism onto `[0,a] × [0,a⊥]`.
    pub fn is_decomposer(&self, a: Elem) -> bool {
        let ac = self.occ[a];
        let below_a: Vec<Elem> = (0..self.len()).filter(|&y| self.leq(y, a)).collect();
        let below_ac: Vec<Elem> = (0..self.len()).filter(|&z| self.leq(z, ac)).collect();
        if below_a.len() * below_ac.len() != self.len() {
            return false;
        }
        // (y, z) ↦ y ∨ z is monotone; if it is a left inverse of the monotone forward
        // map and the sizes agree, both are mutually inverse order isomorphisms.
        below_a.iter().all(|&y| {
            below_ac.iter().all(|&z| {
                let j = self.join(y, z);
                self.meet(j, a) == y && self.meet(j, ac) == z
            })
        })
    }

    pub fn is_irreducible(&self) -> bool {
        (0..self.len()).filter(|&a| a != self.bottom() && a != self.top()).all(|a| !self.is_decomposer(a))
    }

    pub fn check_h_conditions(&self) -> HReport {
        let atoms = &self.atoms;
        let h2 = atoms.iter().all(|&p| {
            atoms.iter().filter(|&&q| q != p).all(|&q| {
                let pq = self.join(p, q);
                atoms.iter().any(|&r| self.orthogonal(r, p) && self.join(p, r) == pq)
            })
        });
        let h3 = atoms.iter().all(|&p| {
            atoms.iter().filter(|&&q| q != p && self.orthogonal(p, q)).all(|&q| {
                let pq = self.join(p, q);
                atoms.iter().any(|&r| r != p && r != q && self.leq(r, pq))
            })
        });
        HReport { h1: self.has_finite_covering(), h2, h3, h4: self.height() >= 4 }
    }

    fn check_atoms(&self, set: &[Elem]) -> Result<(), LatticeError> {
        match set.iter().find(|&&a| !self.is_atom(a)) {
            Some(a) => Err(LatticeError::InvalidArgument(format!("element {} is not an atom", self.elements[*a]))),
            None => Ok(()),
        }
    }

    /// `A^∨`: atoms below the join of `A`.
    pub fn sup_closure(&self, set: &[Elem]) -> Result<Vec<Elem>, LatticeError> {
        self.check_atoms(set)?;
        let closure = self.atoms_below(self.join_all(set));
        debug_assert_eq!(closure, self.fin_closure_unchecked(set));
        Ok(closure)
    }

    /// `A^−`: atoms below the join of some finite subset of `A`. The joins of the
    /// prefixes of `A` form a chain whose union is the answer.
    pub fn fin_closure(&self, set: &[Elem]) -> Result<Vec<Elem>, LatticeError> {
        self.check_atoms(set)?;
        Ok(self.fin_closure_unchecked(set))
    }

    fn fin_closure_unchecked(&self, set: &[Elem]) -> Vec<Elem> {
        let mut acc = self.bottom();
        let mut out = BTreeSet::new();
        for &p in set {
            acc = self.join(acc, p);
            out.extend(self.atoms_below(acc));
        }
        out.into_iter().collect()
    }

    /// `p ⋆ q = { r atom : r ≤ p ∨ q }`.
    pub fn star(&self, p: Elem, q: Elem) -> Vec<Elem> {
        self.atoms_below(self.join(p, q))
    }

    /// `A^⋆`: smallest superset closed under `⋆`.
    pub fn star_closure(&self, set: &[Elem]) -> Result<Vec<Elem>, LatticeError> {
        self.check_atoms(set)?;
        let mut closed: BTreeSet<Elem> = set.iter().copied().collect();
        loop {
            let current: Vec<Elem> = closed.iter().copied().collect();
            let before = closed.len();
            for (i, &p) in current.iter().enumerate() {
                for &q in &current[i..] {
                    closed.extend(self.star(p, q));
                }
            }
            if closed.len() == before {
                return Ok(current);
            }
        }
    }

    fn star_set(&self, p: Elem, set: &[Elem]) -> BTreeSet<Elem> {
        set.iter().flat_map(|&q| self.star(p, q)).collect()
    }

    /// Projective-space axioms for `(A(L), ⋆)`.
    pub fn check_projective_axioms(&self) -> ProjectiveReport {
        let atoms = &self.atoms;
        let ps1 = atoms.iter().all(|&e| {
            self.star(e, e) == [e]
                && atoms.iter().all(|&f| {
                    let ef = self.star(e, f);
                    ef.contains(&e) && ef.contains(&f)
                })
        });
        let ps2 = atoms.iter().all(|&e| {
            atoms.iter().all(|&f| {
                let ef = self.star(e, f);
                ef.iter().all(|&g| ef.iter().all(|&h| g == h || self.star(g, h) == ef))
            })
        });
        let ps3 = atoms.iter().all(|&e| {
            atoms.iter().all(|&f| {
                atoms.iter().all(|&g| {
                    let left = self.star_set(e, &self.star(f, g));
                    // (e ⋆ f) ⋆ g = ⋃ { h ⋆ g : h ∈ e ⋆ f }
                    let right: BTreeSet<Elem> = self.star(e, f).iter().flat_map(|&h| self.star(h, g)).collect();
                    left == right
                })
            })
        });
        ProjectiveReport { ps1, ps2, ps3 }
    }

    /// An atom `r ⊥ P` with `⋁P ∨ q = ⋁P ∨ r`, least index first; `None` if there is none.
    pub fn exchange_atom(&self, perp: &[Elem], q: Elem) -> Result<Option<Elem>, LatticeError> {
        self.check_atoms(perp)?;
        self.check_atoms(&[q])?;
        self.check_mutually_orthogonal(perp)?;
        let base = self.join_all(perp);
        if self.leq(q, base) {
            return Err(LatticeError::InvalidArgument("atom lies below the join".into()));
        }
        let target = self.join(base, q);
        Ok(self
            .atoms
            .iter()
            .copied()
            .find(|&r| perp.iter().all(|&p| self.orthogonal(r, p)) && self.join(base, r) == target))
    }

    fn check_mutually_orthogonal(&self, set: &[Elem]) -> Result<(), LatticeError> {
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                if !self.orthogonal(a, b) {
                    return Err(LatticeError::InvalidArgument("atoms are not mutually orthogonal".into()));
                }
            }
        }
        Ok(())
    }

    /// For `E = ⋁basis` with `basis` mutually orthogonal atoms: every maximal `⊥`-set of
    /// atoms below `E` has `|basis|` elements and joins to `E`.
    pub fn dimension_check(&self, basis: &[Elem]) -> Result<bool, LatticeError> {
        self.check_atoms(basis)?;
        self.check_mutually_orthogonal(basis)?;
        let e = self.join_all(basis);
        let inside = self.atoms_below(e);
        let mut ok = true;
        let mut clique = Vec::new();
        self.maximal_perp_sets(&mut clique, inside.clone(), Vec::new(), &mut |q| {
            ok &= q.len() == basis.len() && self.join_all(q) == e;
        });
        Ok(ok)
    }

    /// Bron–Kerbosch over the atom orthogonality graph.
    fn maximal_perp_sets(&self, r: &mut Vec<Elem>, p: Vec<Elem>, x: Vec<Elem>, visit: &mut dyn FnMut(&[Elem])) {
        if p.is_empty() {
            if x.is_empty() {
                visit(r);
            }
            return;
        }
        let mut p = p;
        let mut x = x;
        while let Some(v) = p.first().copied() {
            let np = p.iter().copied().filter(|&w| w != v && self.orthogonal(v, w)).collect();
            let nx = x.iter().copied().filter(|&w| self.orthogonal(v, w)).collect();
            r.push(v);
            self.maximal_perp_sets(r, np, nx, visit);
            r.pop();
            p.remove(0);
            x.push(v);
        }
    }

    /// The atom space `A(L)` with `p ⊥ q` iff `p ≤ q⊥`, points in atom order.
    pub fn atom_space(&self) -> Orthoset {
        let n = self.atoms.len();
        Orthoset::from_relation(n, |i, j| self.orthogonal(self.atoms[i], self.atoms[j]))
            .expect("a lattice of a nonempty orthoset has an atom")
    }

    /// Hasse diagram in DOT; nodes labeled by their point sets.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", self.label_of(i).replace('"', "\\\""));
        }
        for (a, b) in self.cover_pairs() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    /// `{elements, covers, occ}` with elements as lists of point labels.
    pub fn to_json(&self) -> serde_json::Value {
        let labels = self.x.labels();
        let elements = self.elements.iter().map(|s| s.iter().map(|p| labels[p].as_str()).collect()).collect();
        let h = HasseJson { elements, covers: self.cover_pairs(), occ: &self.occ };
        serde_json::to_value(h).expect("serializable")
    }

    pub fn cover_pairs(&self) -> Vec<(Elem, Elem)> {
        self.upper_covers().iter().enumerate().flat_map(|(a, cs)| cs.iter().map(move |&b| (a, b))).collect()
    }

    pub fn label_of(&self, i: Elem) -> String {
        let names: Vec<&str> = self.elements[i].iter().map(|p| self.x.label(p)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Checks that `e ↦ {e}` is an orthoset isomorphism `X → A(C(X))`.
pub fn verify_atom_space_duality(x: &Orthoset, cap: usize) -> Result<bool, LatticeError> {
    if !x.is_point_closed() {
        return Err(LatticeError::NotPointClosed);
    }
    let l = OrthoLattice::build(x, cap)?;
    let n = x.len();
    let image: Vec<Option<Elem>> = (0..n).map(|p| l.index_of(&PointSet::singleton(n, p))).collect();
    let Some(image) = image.into_iter().collect::<Option<Vec<Elem>>>() else {
        return Ok(false);
    };
    let mut sorted = image.clone();
    sorted.sort_unstable();
    if sorted != l.atoms() {
        return Ok(false);
    }
    Ok((0..n).all(|p| (0..n).all(|q| x.orthogonal(p, q) == l.orthogonal(image[p], image[q]))))
}
