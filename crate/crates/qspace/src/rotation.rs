use orthoset_field::FieldElement;
use serde_json::Value;

use crate::matrix::{self, Matrix, Vector};
use crate::space::{ProjPoint, QuadraticSpace};
use crate::QspaceError;

/// A simple rotation: `[[α, −β], [β, α]]` on the plane with orthonormal basis
/// `(u, w)` and the identity on its orthogonal complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    matrix: Matrix,
    u: Vector,
    w: Vector,
    alpha: FieldElement,
    beta: FieldElement,
}

impl Rotation {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn plane(&self) -> (&Vector, &Vector) {
        (&self.u, &self.w)
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn plane_matrix(&self) -> [[FieldElement; 2]; 2] {
        [[self.alpha.clone(), -&self.beta], [self.beta.clone(), self.alpha.clone()]]
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vector {
        self.matrix.apply(v)
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        p.image(&self.matrix)
    }

    pub fn is_identity(&self) -> bool {
        self.beta.is_zero() && self.alpha.is_one()
    }

    pub fn to_json(&self) -> Value {
        let pm = self.plane_matrix();
        serde_json::json!({
            "matrix": self.matrix.to_json(),
            "plane": [matrix::to_json(&self.u), matrix::to_json(&self.w)],
            "plane_matrix": [matrix::to_json(&pm[0]), matrix::to_json(&pm[1])],
        })
    }
}

impl QuadraticSpace {
    /// The rotation with plane basis `(u, w)` and angle data `(α, β)`.
    pub fn rotation(&self, u: &[FieldElement], w: &[FieldElement], alpha: FieldElement, beta: FieldElement) -> Result<Rotation, QspaceError> {
        self.check_dim(u)?;
        self.check_dim(w)?;
        if !self.norm2(u)?.is_one() || !self.norm2(w)?.is_one() || !self.inner(u, w)?.is_zero() {
            return Err(QspaceError::NotOrthonormal);
        }
        if !(alpha.square() + beta.square()).is_one() {
            return Err(QspaceError::InvalidArgument("alpha^2 + beta^2 must be 1".into()));
        }
        let gu = self.gram().apply(u);
        let gw = self.gram().apply(w);
        let am1 = &alpha - &self.tower().one();
        let cols = (0..self.dim())
            .map(|j| {
                // U e_j = e_j + (α−1)(⟨u,e_j⟩u + ⟨w,e_j⟩w) + β(⟨u,e_j⟩w − ⟨w,e_j⟩u)
                let (a, b) = (&gu[j], &gw[j]);
                let mut col = self.basis_vector(j);
                let uu = &(&am1 * a) - &(&beta * b);
                let ww = &(&am1 * b) + &(&beta * a);
                col = matrix::add(&col, &matrix::scale(&uu, u));
                matrix::add(&col, &matrix::scale(&ww, w))
            })
            .collect();
        let m = Matrix::from_columns(cols)?;
        debug_assert!(self.preserves_form(&m));
        Ok(Rotation { matrix: m, u: u.to_vec(), w: w.to_vec(), alpha, beta })
    }

    /// The simple rotation in the plane of `p` and `q` taking `p` to `q`, with
    /// the plane basis oriented so that `β ≥ 0`.
    pub fn simple_rotation(&self, p: &ProjPoint, q: &ProjPoint) -> Result<Rotation, QspaceError> {
        self.check_dim(p.coords())?;
        self.check_dim(q.coords())?;
        if p == q {
            return Err(QspaceError::EqualPoints);
        }
        let u = self.unit_vector(p);
        let vq = q.coords();
        let r = matrix::sub(vq, &matrix::scale(&self.inner_unchecked(vq, &u), &u));
        let w = self.normalize(&r)?;
        let qhat = self.unit_vector(q);
        let alpha = self.inner_unchecked(&qhat, &u);
        let beta = self.inner_unchecked(&qhat, &w);
        let rot = self.rotation(&u, &w, alpha, beta)?;
        debug_assert_eq!(&rot.apply_point(p), q);
        Ok(rot)
    }

    fn in_plane_of(&self, r: &Rotation, v: &[FieldElement]) -> bool {
        let (u, w) = r.plane();
        let proj = matrix::add(&matrix::scale(&self.inner_unchecked(v, u), u), &matrix::scale(&self.inner_unchecked(v, w), w));
        matrix::sub(v, &proj).iter().all(FieldElement::is_zero)
    }

    pub fn same_plane(&self, r1: &Rotation, r2: &Rotation) -> bool {
        self.in_plane_of(r1, r2.plane().0) && self.in_plane_of(r1, r2.plane().1)
    }

    /// `(α, β)` of `r2` expressed in the plane basis of `r1`.
    fn angle_in(&self, r1: &Rotation, r2: &Rotation) -> (FieldElement, FieldElement) {
        let img = r2.apply(&r1.u);
        (self.inner_unchecked(&img, &r1.u), self.inner_unchecked(&img, &r1.w))
    }

    /// `r1 ∘ r2` for rotations in the same plane.
    pub fn compose_rotations(&self, r1: &Rotation, r2: &Rotation) -> Result<Rotation, QspaceError> {
        if !self.same_plane(r1, r2) {
            return Err(QspaceError::PlaneMismatch);
        }
        let (a2, b2) = self.angle_in(r1, r2);
        let (a1, b1) = (&r1.alpha, &r1.beta);
        let alpha = &(a1 * &a2) - &(b1 * &b2);
        let beta = &(a1 * &b2) + &(b1 * &a2);
        self.rotation(&r1.u, &r1.w, alpha, beta)
    }

    pub fn inverse_rotation(&self, r: &Rotation) -> Rotation {
        self.rotation(&r.u, &r.w, r.alpha.clone(), -&r.beta).expect("same plane data")
    }

    pub fn rotation_pow(&self, r: &Rotation, k: u32) -> Rotation {
        let mut acc = self.rotation(&r.u, &r.w, self.tower().one(), self.tower().zero()).expect("same plane data");
        for _ in 0..k {
            acc = self.compose_rotations(&acc, r).expect("same plane");
        }
        acc
    }

    /// `S` in the same plane with `S² = R`, by the half-angle formulas.
    pub fn half_root(&self, r: &Rotation) -> Result<Rotation, QspaceError> {
        let one = self.tower().one();
        let (alpha, beta) = if (&r.alpha + &one).is_zero() {
            (self.tower().zero(), one)
        } else {
            let a = ((&one + &r.alpha) * self.tower().from_ratio(1, 2)).sqrt()?;
            let b = &r.beta * &(&a * &self.tower().from_int(2)).inv()?;
            (a, b)
        };
        let s = self.rotation(&r.u, &r.w, alpha, beta)?;
        debug_assert_eq!(s.matrix().mul(s.matrix()), r.matrix);
        Ok(s)
    }

    pub fn rotation_commutes(&self, r1: &Rotation, r2: &Rotation) -> Result<bool, QspaceError> {
        if !self.same_plane(r1, r2) {
            return Err(QspaceError::PlaneMismatch);
        }
        Ok(r1.matrix.mul(&r2.matrix) == r2.matrix.mul(&r1.matrix))
    }

    /// Determinant of `u` restricted to the span of `basis`. `u` must preserve the
    /// form, leave the span invariant and fix its orthogonal complement. The value
    /// is recomputed on the span enlarged by `extra` and must agree.
    pub fn det_label(&self, u: &Matrix, basis: &[Vector], extra: &[Vector]) -> Result<i8, QspaceError> {
        if !self.preserves_form(u) {
            return Err(QspaceError::NotFormPreserving);
        }
        let label = self.restricted_det(u, basis)?;
        if !extra.is_empty() {
            let enlarged: Vec<Vector> = basis.iter().chain(extra).cloned().collect();
            let again = self.restricted_det(u, &enlarged)?;
            assert_eq!(label, again, "restricted determinant depends on the invariant subspace");
        }
        Ok(label)
    }

    fn restricted_det(&self, u: &Matrix, basis: &[Vector]) -> Result<i8, QspaceError> {
        let b = self.orthogonalize(basis)?;
        let norms: Vec<FieldElement> = b.iter().map(|v| self.inner_unchecked(v, v).inv()).collect::<Result<_, _>>()?;
        let project = |x: &[FieldElement]| -> Vec<FieldElement> {
            b.iter().zip(&norms).map(|(v, n)| self.inner_unchecked(x, v) * n).collect()
        };
        let mut rows = Vec::new();
        for v in &b {
            let img = u.apply(v);
            let c = project(&img);
            let back = b.iter().zip(&c).fold(vec![self.tower().zero(); self.dim()], |acc, (v, k)| matrix::add(&acc, &matrix::scale(k, v)));
            if back != img {
                return Err(QspaceError::NotInvariant);
            }
            rows.push(c);
        }
        for j in 0..self.dim() {
            let e = self.basis_vector(j);
            let c = project(&e);
            let perp = b.iter().zip(&c).fold(e, |acc, (v, k)| matrix::sub(&acc, &matrix::scale(k, v)));
            if u.apply(&perp) != perp {
                return Err(QspaceError::NotInvariant);
            }
        }
        // Coordinates of U(b_i) form the columns of U|S.
        let d = Matrix::from_rows(rows)?.determinant();
        match (d.is_one(), (-&d).is_one()) {
            (true, _) => Ok(1),
            (_, true) => Ok(-1),
            _ => Err(QspaceError::NotFormPreserving),
        }
    }
}

#[cfg(test)]
mod tests {
    use orthoset_field::Tower;

    use super::*;

    #[test]
    fn pythagorean_rotation() {
        let q = Tower::rationals();
        let h = QuadraticSpace::identity(&q, 2).unwrap();
        let p = h.point(&h.basis_vector(0)).unwrap();
        let t = h.point(&h.vector_from_ints(&[3, 4])).unwrap();
        let r = h.simple_rotation(&p, &t).unwrap();
        let expect = [[q.from_ratio(3, 5), q.from_ratio(-4, 5)], [q.from_ratio(4, 5), q.from_ratio(3, 5)]];
        assert_eq!(r.plane_matrix(), expect);
        assert_eq!(r.matrix().rows(), vec![expect[0].to_vec(), expect[1].to_vec()]);
        let e2 = h.point(&h.basis_vector(1)).unwrap();
        let quarter = h.simple_rotation(&p, &e2).unwrap();
        assert_eq!((quarter.alpha(), quarter.beta()), (&q.zero(), &q.one()));
        assert_eq!(h.simple_rotation(&p, &p).err(), Some(QspaceError::EqualPoints));
    }

    #[test]
    fn half_root_examples() {
        let q = Tower::rationals();
        let h = QuadraticSpace::identity(&q, 2).unwrap();
        let p = h.point(&h.basis_vector(0)).unwrap();
        let r = h.simple_rotation(&p, &h.point(&h.vector_from_ints(&[3, 4])).unwrap()).unwrap();
        let s = h.half_root(&r).unwrap();
        let r5 = q.from_int(5).sqrt().unwrap();
        assert_eq!(s.alpha(), &(q.from_int(2) * r5.inv().unwrap()));
        assert_eq!(s.beta(), &r5.inv().unwrap());
        assert_eq!(s.matrix().mul(s.matrix()), *r.matrix());
        let half_turn = h.rotation(&h.basis_vector(0), &h.basis_vector(1), q.from_int(-1), q.zero()).unwrap();
        let quarter = h.half_root(&half_turn).unwrap();
        assert_eq!((quarter.alpha(), quarter.beta()), (&q.zero(), &q.one()));
        let id = h.rotation_pow(&r, 0);
        assert!(h.half_root(&id).unwrap().is_identity());
    }

    #[test]
    fn commuting_and_planes() {
        let q = Tower::rationals();
        let h = QuadraticSpace::identity(&q, 3).unwrap();
        let (e0, e1, e2) = (h.basis_vector(0), h.basis_vector(1), h.basis_vector(2));
        let r = h.rotation(&e0, &e1, q.from_ratio(3, 5), q.from_ratio(4, 5)).unwrap();
        let quarter = h.rotation(&e0, &e1, q.zero(), q.one()).unwrap();
        assert_eq!(h.rotation_commutes(&r, &quarter), Ok(true));
        assert_eq!(h.rotation_commutes(&r, &h.rotation_pow(&r, 0)), Ok(true));
        let other = h.rotation(&e1, &e2, q.zero(), q.one()).unwrap();
        assert_eq!(h.rotation_commutes(&r, &other), Err(QspaceError::PlaneMismatch));
    }

    #[test]
    fn determinant_labels() {
        let q = Tower::rationals();
        let h = QuadraticSpace::identity(&q, 3).unwrap();
        let (e0, e1, e2) = (h.basis_vector(0), h.basis_vector(1), h.basis_vector(2));
        let r = h.rotation(&e0, &e1, q.from_ratio(3, 5), q.from_ratio(4, 5)).unwrap();
        assert_eq!(h.det_label(r.matrix(), &[e0.clone(), e1.clone()], &[]), Ok(1));
        assert_eq!(h.det_label(r.matrix(), &[e0.clone(), e1.clone()], &[e2.clone()]), Ok(1));
        assert_eq!(h.det_label(r.matrix(), &[e0.clone()], &[]), Err(QspaceError::NotInvariant));
        let h2 = QuadraticSpace::identity(&q, 2).unwrap();
        let refl = Matrix::from_rows(vec![vec![q.from_int(-1), q.zero()], vec![q.zero(), q.one()]]).unwrap();
        assert_eq!(h2.det_label(&refl, &[h2.basis_vector(0), h2.basis_vector(1)], &[]), Ok(-1));
    }
}
