use std::collections::HashSet;

use orthoset_field::FieldElement;
use serde::Serialize;

use crate::matrix::{self, Matrix};
use crate::rotation::Rotation;
use crate::space::{ProjPoint, QuadraticSpace};
use crate::QspaceError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub start: String,
    pub points_reached: usize,
    pub confined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub word_length: usize,
    pub generators: usize,
    pub orbits: Vec<OrbitRecord>,
    /// Whether every orbit stays in the ≈-class of its start.
    pub confined: bool,
    /// Indices of target pairs `(x, y)` with `x ≉ y`.
    pub separated_targets: Vec<usize>,
    pub conclusion: String,
}

impl QuadraticSpace {
    /// `⟨x⟩ ≈ ⟨y⟩`: finite, non-infinitesimal representatives differ by an
    /// infinitesimal vector. Equivalent to the residual of `x` after projection
    /// onto `⟨y⟩` being infinitesimal relative to `x`. Over an Archimedean base
    /// this is equality of lines.
    pub fn approx_equiv(&self, p: &ProjPoint, q: &ProjPoint) -> Result<bool, QspaceError> {
        let (x, y) = (p.coords(), q.coords());
        let c = self.inner(x, y)? * self.inner(y, y)?.inv()?;
        let r = matrix::sub(x, &matrix::scale(&c, y));
        let ratio = self.inner_unchecked(&r, &r) * self.inner_unchecked(x, x).inv()?;
        Ok(ratio.is_infinitesimal())
    }

    /// `U(x) − x` is an infinitesimal vector.
    pub fn displacement_is_infinitesimal(&self, u: &Matrix, x: &[FieldElement]) -> Result<bool, QspaceError> {
        self.check_dim(x)?;
        let d = matrix::sub(&u.apply(x), x);
        Ok(self.inner_unchecked(&d, &d).is_infinitesimal())
    }

    /// The rotation `u ↦ s(u + a v)`, `v ↦ s(−a u + v)` with `s = 1/√(1 + a²)`,
    /// for orthonormal `u, v` and a nonzero infinitesimal `a`.
    pub fn small_rotation(&self, u: &[FieldElement], v: &[FieldElement], a: &FieldElement) -> Result<Rotation, QspaceError> {
        if a.is_zero() || !a.is_infinitesimal() {
            return Err(QspaceError::NotInfinitesimal);
        }
        let s = (self.tower().one() + a.square()).sqrt()?.inv()?;
        let beta = &s * a;
        let r = self.rotation(u, v, s, beta)?;
        assert!(r.matrix().determinant().is_one());
        for j in 0..self.dim() {
            assert!(self.displacement_is_infinitesimal(r.matrix(), &self.basis_vector(j))?);
        }
        Ok(r)
    }

    fn is_finite_matrix(&self, m: &Matrix) -> bool {
        (0..m.dim()).all(|i| (0..m.dim()).all(|j| m.get(i, j).is_finite_elem()))
    }

    /// Applies all words of length at most `word_length` in the conjugates
    /// `V⁻¹UV` and their inverses to each start point (the samples and the first
    /// point of every target pair), checking that images stay ≈ to the start.
    pub fn quasiprimitivity_probe(
        &self,
        u: &Rotation,
        conjugators: &[Matrix],
        samples: &[ProjPoint],
        targets: &[(ProjPoint, ProjPoint)],
        word_length: usize,
    ) -> Result<ProbeReport, QspaceError> {
        let mut gens = Vec::new();
        let u_inv = u.matrix().inverse().expect("rotations are invertible");
        for v in conjugators {
            if !self.preserves_form(v) {
                return Err(QspaceError::NotFormPreserving);
            }
            if !self.is_finite_matrix(v) {
                return Err(QspaceError::InvalidArgument("conjugators must have finite entries".into()));
            }
            let vi = v.inverse().expect("form-preserving matrices are invertible");
            gens.push(vi.mul(u.matrix()).mul(v));
            gens.push(vi.mul(&u_inv).mul(v));
        }
        let mut starts: Vec<ProjPoint> = samples.to_vec();
        starts.extend(targets.iter().map(|(x, _)| x.clone()));
        let mut orbits = Vec::new();
        for x in &starts {
            self.check_dim(x.coords())?;
            let mut seen: HashSet<ProjPoint> = HashSet::from([x.clone()]);
            let mut frontier = vec![x.clone()];
            for _ in 0..word_length {
                let mut next = Vec::new();
                for p in &frontier {
                    for g in &gens {
                        let img = p.image(g);
                        if seen.insert(img.clone()) {
                            next.push(img);
                        }
                    }
                }
                frontier = next;
            }
            let mut confined = true;
            for p in &seen {
                confined &= self.approx_equiv(x, p)?;
            }
            orbits.push(OrbitRecord { start: x.to_string(), points_reached: seen.len(), confined });
        }
        let mut separated = Vec::new();
        for (i, (x, y)) in targets.iter().enumerate() {
            if !self.approx_equiv(x, y)? {
                separated.push(i);
            }
        }
        let confined = orbits.iter().all(|o| o.confined);
        let conclusion = match (confined, separated.is_empty()) {
            (true, false) => "orbit confined to ≈-class; not quasiprimitive at this scale",
            (true, true) => "orbit confined to ≈-class; no separated target",
            (false, _) => "orbit leaves the ≈-class",
        };
        Ok(ProbeReport {
            word_length,
            generators: gens.len(),
            orbits,
            confined,
            separated_targets: separated,
            conclusion: conclusion.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use orthoset_field::Tower;

    use super::*;

    #[test]
    fn approx_examples() {
        let k = Tower::rational_functions();
        let h = QuadraticSpace::identity(&k, 3).unwrap();
        let t = k.t().unwrap();
        let (u, v) = (h.basis_vector(0), h.basis_vector(1));
        let p = h.point(&u).unwrap();
        let moved = h.point(&matrix::add(&u, &matrix::scale(&t, &v))).unwrap();
        assert_eq!(h.approx_equiv(&p, &moved), Ok(true));
        assert_eq!(h.approx_equiv(&p, &h.point(&v).unwrap()), Ok(false));
        assert_eq!(h.approx_equiv(&p, &p), Ok(true));
        let q = Tower::rationals();
        let hq = QuadraticSpace::identity(&q, 2).unwrap();
        let a = hq.point(&hq.vector_from_ints(&[1, 0])).unwrap();
        let b = hq.point(&hq.vector_from_ints(&[1000, 1])).unwrap();
        assert_eq!(hq.approx_equiv(&a, &b), Ok(false));
    }

    #[test]
    fn small_rotation_in_q_t_4() {
        let k = Tower::rational_functions();
        let h = QuadraticSpace::identity(&k, 4).unwrap();
        let t = k.t().unwrap();
        let (u, v) = (h.basis_vector(0), h.basis_vector(1));
        let r = h.small_rotation(&u, &v, &t).unwrap();
        let s = r.alpha().clone();
        assert_eq!(r.beta(), &(&s * &t));
        assert!((s.square() * (k.one() + t.square())).is_one());
        let p = h.point(&u).unwrap();
        let img = r.apply_point(&p);
        assert_ne!(img, p);
        assert_eq!(img, h.point(&matrix::add(&u, &matrix::scale(&t, &v))).unwrap());
        assert_eq!(h.small_rotation(&u, &v, &k.one()).err(), Some(QspaceError::NotInfinitesimal));
        assert_eq!(h.small_rotation(&u, &u, &t).err(), Some(QspaceError::NotOrthonormal));
    }

    #[test]
    fn probe_reports_confinement() {
        let k = Tower::rational_functions();
        let h = QuadraticSpace::identity(&k, 3).unwrap();
        let t = k.t().unwrap();
        let (e1, e2) = (h.basis_vector(0), h.basis_vector(1));
        let r = h.small_rotation(&e1, &e2, &t).unwrap();
        let id = Matrix::identity(&k, 3);
        let targets = [(h.point(&e1).unwrap(), h.point(&e2).unwrap())];
        let rep = h.quasiprimitivity_probe(&r, &[id.clone()], &[], &targets, 3).unwrap();
        assert!(rep.confined);
        assert_eq!(rep.separated_targets, vec![0]);
        assert_eq!(rep.conclusion, "orbit confined to ≈-class; not quasiprimitive at this scale");
        assert_eq!(rep.orbits[0].points_reached, 7);
        let zero = h.quasiprimitivity_probe(&r, &[id], &[], &targets, 0).unwrap();
        assert_eq!(zero.orbits[0].points_reached, 1);
    }
}
