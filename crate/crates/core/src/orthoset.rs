use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pointset::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrthosetError {
    #[error("an orthoset must have at least one point")]
    Empty,
    #[error("point {0} is out of range")]
    OutOfRange(usize),
    #[error("point {0} cannot be orthogonal to itself")]
    SelfPair(String),
    #[error("pair ({0}, {1}) is listed twice")]
    DuplicatePair(String, String),
    #[error("point name {0:?} is listed twice")]
    DuplicatePoint(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("invalid orthoset file at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

/// Exceeded node budget in an exact search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search exceeded its budget of {budget} nodes")]
pub struct BudgetExceeded {
    pub budget: u64,
}

pub const DEFAULT_RANK_BUDGET: u64 = 10_000_000;

/// A finite set with a symmetric, irreflexive orthogonality relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orthoset {
    adj: Vec<PointSet>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct OrthosetFile {
    points: Vec<String>,
    orth: Vec<(String, String)>,
}

impl Orthoset {
    /// Points `0..n` with the given orthogonal pairs (unordered, each listed once).
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self, OrthosetError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, pairs)
    }

    pub fn with_labels(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrthosetError> {
        let n = labels.len();
        if n == 0 {
            return Err(OrthosetError::Empty);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(OrthosetError::DuplicatePoint(l.clone()));
            }
        }
        let mut adj = vec![PointSet::empty(n); n];
        for &(p, q) in pairs {
            for x in [p, q] {
                if x >= n {
                    return Err(OrthosetError::OutOfRange(x));
                }
            }
            if p == q {
                return Err(OrthosetError::SelfPair(labels[p].clone()));
            }
            if adj[p].contains(q) {
                return Err(OrthosetError::DuplicatePair(labels[p].clone(), labels[q].clone()));
            }
            adj[p].insert(q);
            adj[q].insert(p);
        }
        Ok(Orthoset { adj, labels })
    }

    /// Builds from a relation predicate, which is symmetrized; the diagonal is ignored.
    pub fn from_relation(n: usize, rel: impl Fn(usize, usize) -> bool) -> Result<Self, OrthosetError> {
        let mut pairs = Vec::new();
        for p in 0..n {
            for q in p + 1..n {
                if rel(p, q) || rel(q, p) {
                    pairs.push((p, q));
                }
            }
        }
        Self::new(n, &pairs)
    }

    /// `(X, ≠)`: every two distinct points are orthogonal.
    pub fn boolean(n: usize) -> Result<Self, OrthosetError> {
        Self::from_relation(n, |p, q| p != q)
    }

    /// `k` disjoint orthogonal pairs `2i ⊥ 2i+1`.
    pub fn pairs(k: usize) -> Result<Self, OrthosetError> {
        Self::from_relation(2 * k, |p, q| p / 2 == q / 2)
    }

    /// The cycle graph `i ⊥ i±1 (mod n)`, for `n ≥ 3`.
    pub fn cycle(n: usize) -> Result<Self, OrthosetError> {
        if n < 3 {
            return Self::new(n, if n == 2 { &[(0, 1)] } else { &[] });
        }
        Self::from_relation(n, |p, q| (p + 1) % n == q || (q + 1) % n == p)
    }

    /// Each pair orthogonal independently with probability `density`.
    pub fn random<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Self, OrthosetError> {
        let mut pairs = Vec::new();
        for p in 0..n {
            for q in p + 1..n {
                if rng.gen_bool(density) {
                    pairs.push((p, q));
                }
            }
        }
        Self::new(n, &pairs)
    }

    pub fn from_json(src: &str) -> Result<Self, OrthosetError> {
        let file: OrthosetFile = serde_json::from_str(src).map_err(|e| OrthosetError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let index: HashMap<&str, usize> = file.points.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup = |s: &String| index.get(s.as_str()).copied().ok_or_else(|| OrthosetError::UnknownPoint(s.clone()));
        let mut pairs = Vec::with_capacity(file.orth.len());
        for (a, b) in &file.orth {
            pairs.push((lookup(a)?, lookup(b)?));
        }
        Self::with_labels(file.points, &pairs)
    }

    pub fn to_json(&self) -> String {
        let orth = self.pairs_list().into_iter().map(|(p, q)| (self.labels[p].clone(), self.labels[q].clone())).collect();
        let file = OrthosetFile { points: self.labels.clone(), orth };
        serde_json::to_string(&file).expect("serializable")
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    /// Always false: empty orthosets are rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn orthogonal(&self, p: usize, q: usize) -> bool {
        self.adj[p].contains(q)
    }

    /// `{p}⊥`.
    pub fn neighbors(&self, p: usize) -> &PointSet {
        &self.adj[p]
    }

    /// Orthogonal pairs `(p, q)` with `p < q`, in lexicographic order.
    pub fn pairs_list(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|p| self.adj[p].iter().filter(move |&q| q > p).map(move |q| (p, q))).collect()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn set(&self, points: impl IntoIterator<Item = usize>) -> PointSet {
        PointSet::from_indices(self.len(), points)
    }

    /// `A⊥ = { q : q ⊥ p for all p ∈ A }`; the full set for `A = ∅`.
    pub fn ortho_complement(&self, a: &PointSet) -> PointSet {
        let mut out = self.full_set();
        for p in a.iter() {
            out.intersect_with(&self.adj[p]);
        }
        out
    }

    /// `A⊥⊥`.
    pub fn ortho_closure(&self, a: &PointSet) -> PointSet {
        self.ortho_complement(&self.ortho_complement(a))
    }

    pub fn is_closed(&self, a: &PointSet) -> bool {
        self.ortho_closure(a) == *a
    }

    pub fn is_point_closed(&self) -> bool {
        (0..self.len()).all(|p| {
            let s = PointSet::singleton(self.len(), p);
            self.ortho_closure(&s) == s
        })
    }

    pub fn is_boolean(&self) -> bool {
        (0..self.len()).all(|p| self.adj[p].len() == self.len() - 1)
    }

    /// Whether the points of `a` are mutually orthogonal.
    pub fn is_perp_set(&self, a: &PointSet) -> bool {
        a.iter().all(|p| a.difference(&self.adj[p]).to_vec() == [p])
    }

    /// Size of a largest `⊥`-set, by exact branch and bound.
    pub fn rank(&self) -> Result<usize, BudgetExceeded> {
        self.rank_with_budget(DEFAULT_RANK_BUDGET)
    }

    pub fn rank_with_budget(&self, budget: u64) -> Result<usize, BudgetExceeded> {
        let mut search = CliqueSearch { adj: &self.adj, best: 0, nodes: 0, budget };
        search.expand(0, self.full_set())?;
        Ok(search.best)
    }
}

struct CliqueSearch<'a> {
    adj: &'a [PointSet],
    best: usize,
    nodes: u64,
    budget: u64,
}

impl CliqueSearch<'_> {
    /// Greedy coloring of the candidates: the number of colors bounds any clique inside.
    fn color_bound(&self, cand: &PointSet) -> usize {
        let mut rest = cand.clone();
        let mut colors = 0;
        while !rest.is_empty() {
            colors += 1;
            let mut class = rest.clone();
            while let Some(v) = class.first() {
                class.remove(v);
                rest.remove(v);
                class = class.difference(&self.adj[v]);
            }
        }
        colors
    }

    fn expand(&mut self, size: usize, mut cand: PointSet) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded { budget: self.budget });
        }
        if cand.is_empty() {
            self.best = self.best.max(size);
            return Ok(());
        }
        while let Some(v) = cand.first() {
            if size + self.color_bound(&cand) <= self.best {
                return Ok(());
            }
            cand.remove(v);
            let next = cand.intersection(&self.adj[v]);
            self.expand(size + 1, next)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_complements() {
        let x = Orthoset::pairs(2).unwrap();
        assert_eq!(x.ortho_complement(&x.empty_set()), x.full_set());
        assert_eq!(x.ortho_complement(&x.set([0])).to_vec(), vec![1]);
        assert!(x.ortho_complement(&x.set([0, 2])).is_empty());
        assert_eq!(x.ortho_closure(&x.set([0])).to_vec(), vec![0]);
        assert_eq!(x.ortho_closure(&x.set([0, 2])), x.full_set());
    }

    #[test]
    fn point_closed_examples() {
        assert!(Orthoset::pairs(2).unwrap().is_point_closed());
        assert!(!Orthoset::new(3, &[(0, 1)]).unwrap().is_point_closed());
        assert!(Orthoset::cycle(6).unwrap().is_point_closed());
    }

    #[test]
    fn boolean_and_rank() {
        assert!(Orthoset::boolean(4).unwrap().is_boolean());
        assert!(!Orthoset::pairs(2).unwrap().is_boolean());
        assert!(Orthoset::boolean(1).unwrap().is_boolean());
        assert_eq!(Orthoset::boolean(5).unwrap().rank(), Ok(5));
        assert_eq!(Orthoset::pairs(2).unwrap().rank(), Ok(2));
        assert_eq!(Orthoset::cycle(6).unwrap().rank(), Ok(2));
        assert_eq!(Orthoset::new(3, &[]).unwrap().rank(), Ok(1));
    }

    #[test]
    fn rank_budget_is_enforced() {
        let x = Orthoset::boolean(12).unwrap();
        assert_eq!(x.rank_with_budget(3), Err(BudgetExceeded { budget: 3 }));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Orthoset::new(0, &[]), Err(OrthosetError::Empty));
        assert!(matches!(Orthoset::new(2, &[(1, 1)]), Err(OrthosetError::SelfPair(_))));
        assert!(matches!(Orthoset::new(2, &[(0, 1), (1, 0)]), Err(OrthosetError::DuplicatePair(..))));
        assert_eq!(Orthoset::new(2, &[(0, 2)]), Err(OrthosetError::OutOfRange(2)));
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"points": ["a", "a'", "b", "b'"], "orth": [["a", "a'"], ["b'", "b"]]}"#;
        let x = Orthoset::from_json(src).unwrap();
        assert_eq!(x, Orthoset::with_labels(x.labels().to_vec(), &[(0, 1), (2, 3)]).unwrap());
        assert_eq!(Orthoset::from_json(&x.to_json()).unwrap(), x);
        let dup = r#"{"points": ["a", "b"], "orth": [["a", "b"], ["b", "a"]]}"#;
        assert!(matches!(Orthoset::from_json(dup), Err(OrthosetError::DuplicatePair(..))));
        let bad = "{\"points\": [\"a\"],\n \"orth\": [[\"a\"]]}";
        assert!(matches!(Orthoset::from_json(bad), Err(OrthosetError::Json { line: 2, .. })));
        assert!(matches!(Orthoset::from_json(r#"{"points": [], "orth": []}"#), Err(OrthosetError::Empty)));
    }
}
