//! Automorphisms of the orthogonality graph by individualization and equitable
//! refinement. Every emitted permutation is checked explicitly.

use super::{PermGroup, Permutation};
use crate::orthoset::Orthoset;

/// Whether `g` preserves orthogonality in both directions.
pub fn is_automorphism(x: &Orthoset, g: &Permutation) -> bool {
    let n = x.len();
    g.degree() == n && (0..n).all(|p| (0..n).all(|q| x.orthogonal(p, q) == x.orthogonal(g.apply(p), g.apply(q))))
}

type Partition = Vec<Vec<usize>>;

/// One recorded split: cell position, splitter position, and the sorted neighbor counts.
type Trace = Vec<(usize, usize, Vec<usize>)>;

fn refine(x: &Orthoset, cells: &mut Partition) -> Trace {
    let mut trace = Vec::new();
    'outer: loop {
        for w in 0..cells.len() {
            for c in 0..cells.len() {
                if cells[c].len() == 1 {
                    continue;
                }
                let splitter = x.set(cells[w].iter().copied());
                let counts: Vec<usize> =
                    cells[c].iter().map(|&v| x.neighbors(v).intersection(&splitter).len()).collect();
                if counts.iter().all(|&k| k == counts[0]) {
                    continue;
                }
                let mut keyed: Vec<(usize, usize)> = counts.iter().copied().zip(cells[c].iter().copied()).collect();
                keyed.sort_unstable();
                let mut groups: Vec<Vec<usize>> = Vec::new();
                let mut last = None;
                for &(k, v) in &keyed {
                    if last != Some(k) {
                        groups.push(Vec::new());
                        last = Some(k);
                    }
                    groups.last_mut().expect("pushed").push(v);
                }
                let mut sorted_counts = counts;
                sorted_counts.sort_unstable();
                trace.push((c, w, sorted_counts));
                cells.splice(c..=c, groups);
                continue 'outer;
            }
        }
        return trace;
    }
}

fn individualize(cells: &Partition, v: usize) -> Partition {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for cell in cells {
        if cell.len() > 1 && cell.contains(&v) {
            out.push(vec![v]);
            out.push(cell.iter().copied().filter(|&u| u != v).collect());
        } else {
            out.push(cell.clone());
        }
    }
    out
}

fn shape(cells: &Partition) -> Vec<usize> {
    cells.iter().map(Vec::len).collect()
}

/// Searches for an automorphism carrying the ordered partition `left` onto `right`.
fn match_partitions(x: &Orthoset, mut left: Partition, mut right: Partition) -> Option<Permutation> {
    let tl = refine(x, &mut left);
    let tr = refine(x, &mut right);
    if tl != tr || shape(&left) != shape(&right) {
        return None;
    }
    let Some(pos) = left.iter().position(|c| c.len() > 1) else {
        let mut img = vec![0; x.len()];
        for (l, r) in left.iter().zip(&right) {
            img[l[0]] = r[0];
        }
        let g = Permutation::from_images(img).expect("discrete partitions give a bijection");
        return is_automorphism(x, &g).then_some(g);
    };
    let v = left[pos][0];
    let next_left = individualize(&left, v);
    for &w in &right[pos] {
        if let Some(g) = match_partitions(x, next_left.clone(), individualize(&right, w)) {
            return Some(g);
        }
    }
    None
}

fn orbit_contains(n: usize, gens: &[Permutation], from: usize, target: usize) -> bool {
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(p) = stack.pop() {
        if p == target {
            return true;
        }
        for g in gens {
            let q = g.apply(p);
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    false
}

/// Collects generators of the stabilizer of the individualized points of `cells`.
fn collect(x: &Orthoset, mut cells: Partition, fixed: &[usize], gens: &mut Vec<Permutation>) {
    refine(x, &mut cells);
    let Some(pos) = cells.iter().position(|c| c.len() > 1) else {
        return;
    };
    let v = cells[pos][0];
    let mut deeper = fixed.to_vec();
    deeper.push(v);
    collect(x, individualize(&cells, v), &deeper, gens);
    let target = individualize(&cells, v);
    for &w in &cells[pos][1..] {
        // Generators found so far all fix `fixed`; skip images already reached.
        let stab: Vec<Permutation> =
            gens.iter().filter(|g| fixed.iter().all(|&p| g.fixes(p))).cloned().collect();
        if orbit_contains(x.len(), &stab, v, w) {
            continue;
        }
        if let Some(g) = match_partitions(x, target.clone(), individualize(&cells, w)) {
            gens.push(g);
        }
    }
}

/// Generators of the full automorphism group of `(X, ⊥)`.
pub fn automorphism_group(x: &Orthoset) -> PermGroup {
    let mut gens = Vec::new();
    collect(x, vec![(0..x.len()).collect()], &[], &mut gens);
    for g in &gens {
        assert!(is_automorphism(x, g), "refinement search produced a non-automorphism");
    }
    PermGroup::new(x.len(), gens).expect("generators act on the orthoset's points")
}

/// An automorphism with `φ(a) = b` for each constraint `(a, b)`, by constrained
/// backtracking. The targets must be pairwise distinct, as must the sources.
pub fn find_automorphism(x: &Orthoset, constraints: &[(usize, usize)]) -> Option<Permutation> {
    let mut left: Partition = vec![(0..x.len()).collect()];
    let mut right = left.clone();
    for &(a, b) in constraints {
        let pl = left.iter().position(|c| c.contains(&a))?;
        let pr = right.iter().position(|c| c.contains(&b))?;
        if pl != pr {
            return None;
        }
        if left[pl].len() == 1 {
            continue;
        }
        left = individualize(&left, a);
        right = individualize(&right, b);
    }
    match_partitions(x, left, right)
}
