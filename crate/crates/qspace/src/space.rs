use std::fmt;

use orthoset_field::{Base, FieldElement, Tower};
use serde::Serialize;
use serde_json::Value;

use crate::matrix::{self, Matrix, Vector};
use crate::QspaceError;

/// A line `⟨v⟩`, stored with its first nonzero coordinate equal to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vector,
}

impl ProjPoint {
    pub fn new(v: &[FieldElement]) -> Result<Self, QspaceError> {
        let lead = v.iter().find(|x| !x.is_zero()).ok_or(QspaceError::ZeroVector)?;
        let inv = lead.inv()?;
        Ok(ProjPoint { coords: matrix::scale(&inv, v) })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `⟨U(x)⟩`.
    pub fn image(&self, u: &Matrix) -> ProjPoint {
        ProjPoint::new(&u.apply(&self.coords)).expect("invertible matrices send lines to lines")
    }

    pub fn to_json(&self) -> Value {
        matrix::to_json(&self.coords)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjPoint{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OgReport {
    pub og1: bool,
    pub og2: bool,
    pub triples_checked: usize,
    pub pairs_checked: usize,
}

/// `(K^n, ⟨·,·⟩)` with a positive-definite symmetric Gram matrix.
#[derive(Clone, Debug)]
pub struct QuadraticSpace {
    tower: Tower,
    gram: Matrix,
}

impl QuadraticSpace {
    pub fn new(gram: Matrix) -> Result<Self, QspaceError> {
        let n = gram.dim();
        if n < 2 {
            return Err(QspaceError::InvalidDimension(n));
        }
        if !gram.is_symmetric() {
            return Err(QspaceError::NotSymmetric);
        }
        // Pivots of symmetric elimination are ratios of consecutive leading minors.
        let mut a = gram.rows();
        for c in 0..n {
            if !a[c][c].is_positive() {
                return Err(QspaceError::NotPositiveDefinite);
            }
            let inv = a[c][c].inv()?;
            for r in c + 1..n {
                let f = &a[r][c] * &inv;
                let pivot_row = a[c].clone();
                a[r] = matrix::sub(&a[r], &matrix::scale(&f, &pivot_row));
            }
        }
        Ok(QuadraticSpace { tower: gram.tower().clone(), gram })
    }

    pub fn identity(tower: &Tower, n: usize) -> Result<Self, QspaceError> {
        if n == 0 {
            return Err(QspaceError::InvalidDimension(0));
        }
        Self::new(Matrix::identity(tower, n))
    }

    pub fn diagonal(entries: Vec<FieldElement>) -> Result<Self, QspaceError> {
        let n = entries.len();
        if n == 0 {
            return Err(QspaceError::InvalidDimension(0));
        }
        let zero = entries[0].tower().zero();
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { zero.clone() }).collect());
        Self::new(Matrix::from_rows(rows.collect())?)
    }

    /// Reads `{"field": "Q" | "Q(t)", "dim": n, "gram": [[expr, ...], ...]}`.
    pub fn from_json(src: &str) -> Result<Self, QspaceError> {
        let v: Value = serde_json::from_str(src).map_err(|e| QspaceError::Parse(e.to_string()))?;
        let tower = match v.get("field").and_then(Value::as_str) {
            Some("Q") => Tower::rationals(),
            Some("Q(t)") => Tower::rational_functions(),
            other => return Err(QspaceError::Parse(format!("unknown field {other:?}"))),
        };
        let gram = v.get("gram").and_then(Value::as_array).ok_or_else(|| QspaceError::Parse("missing gram".into()))?;
        let rows = gram.iter().map(|r| parse_vector(&tower, r)).collect::<Result<Vec<_>, _>>()?;
        if let Some(dim) = v.get("dim") {
            let dim = dim.as_u64().ok_or_else(|| QspaceError::Parse("dim must be a number".into()))? as usize;
            if dim != rows.len() {
                return Err(QspaceError::DimensionMismatch { expected: dim, found: rows.len() });
            }
        }
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn to_json(&self) -> Value {
        let field = match self.tower.base() {
            Base::Rationals => "Q",
            Base::RationalFunctions => "Q(t)",
        };
        serde_json::json!({ "field": field, "dim": self.dim(), "gram": self.gram.to_json() })
    }

    pub fn parse_vector(&self, value: &Value) -> Result<Vector, QspaceError> {
        let v = parse_vector(&self.tower, value)?;
        self.check_dim(&v)?;
        Ok(v)
    }

    pub fn vector_from_ints(&self, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| self.tower.from_int(x)).collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        (0..self.dim()).map(|j| if i == j { self.tower.one() } else { self.tower.zero() }).collect()
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub(crate) fn check_dim(&self, v: &[FieldElement]) -> Result<(), QspaceError> {
        if v.len() != self.dim() {
            return Err(QspaceError::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    pub fn inner(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement, QspaceError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.inner_unchecked(u, v))
    }

    pub(crate) fn inner_unchecked(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        let gv = self.gram.apply(v);
        u.iter().zip(&gv).fold(self.tower.zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm2(&self, u: &[FieldElement]) -> Result<FieldElement, QspaceError> {
        self.inner(u, u)
    }

    pub fn point(&self, v: &[FieldElement]) -> Result<ProjPoint, QspaceError> {
        self.check_dim(v)?;
        ProjPoint::new(v)
    }

    pub fn is_orthogonal(&self, p: &ProjPoint, q: &ProjPoint) -> Result<bool, QspaceError> {
        Ok(self.inner(p.coords(), q.coords())?.is_zero())
    }

    /// Gram–Schmidt without normalization. Vectors that depend on earlier ones
    /// leave a zero residual and are dropped.
    pub fn orthogonalize(&self, vectors: &[Vector]) -> Result<Vec<Vector>, QspaceError> {
        let mut out: Vec<(Vector, FieldElement)> = Vec::new();
        for v in vectors {
            self.check_dim(v)?;
            if matrix::is_zero(v) {
                return Err(QspaceError::ZeroVector);
            }
            let mut r = v.clone();
            for (o, oo) in &out {
                let c = self.inner_unchecked(v, o);
                if !c.is_zero() {
                    r = matrix::sub(&r, &matrix::scale(&(c * oo.inv()?), o));
                }
            }
            if !matrix::is_zero(&r) {
                let rr = self.inner_unchecked(&r, &r);
                out.push((r, rr));
            }
        }
        Ok(out.into_iter().map(|(v, _)| v).collect())
    }

    /// `v / √⟨v,v⟩`.
    pub fn normalize(&self, v: &[FieldElement]) -> Result<Vector, QspaceError> {
        let n2 = self.norm2(v)?;
        if n2.is_zero() {
            return Err(QspaceError::ZeroVector);
        }
        if n2.is_one() {
            return Ok(v.to_vec());
        }
        Ok(matrix::scale(&n2.sqrt()?.inv()?, v))
    }

    /// A unit vector in `p`.
    pub fn unit_vector(&self, p: &ProjPoint) -> Vector {
        self.normalize(p.coords()).expect("points are nonzero")
    }

    /// `Uᵀ·G·U = G`.
    pub fn preserves_form(&self, u: &Matrix) -> bool {
        u.dim() == self.dim() && u.transpose().mul(&self.gram).mul(u) == self.gram
    }

    /// (OG1) on the sampled triples, with `x` over a few combinations of `u, v`,
    /// and (OG2) with the witness `w = v − (⟨v,u⟩/⟨u,u⟩)u`.
    pub fn check_og_axioms(&self, sample: &[ProjPoint]) -> Result<OgReport, QspaceError> {
        for (i, p) in sample.iter().enumerate() {
            self.check_dim(p.coords())?;
            if sample[..i].contains(p) {
                return Err(QspaceError::InvalidArgument("sample points must be distinct".into()));
            }
        }
        let coeffs = [(1, 1), (1, -1), (2, 1), (1, 3)];
        let mut report = OgReport { og1: true, og2: true, triples_checked: 0, pairs_checked: 0 };
        for (i, p) in sample.iter().enumerate() {
            for (j, q) in sample.iter().enumerate().skip(i + 1) {
                let (u, v) = (p.coords(), q.coords());
                report.pairs_checked += 1;
                let c = self.inner_unchecked(v, u) * self.inner_unchecked(u, u).inv()?;
                let w = matrix::sub(v, &matrix::scale(&c, u));
                report.og2 &= !matrix::is_zero(&w) && self.inner_unchecked(&w, u).is_zero();
                for (k, r) in sample.iter().enumerate() {
                    if k == i || k == j || !self.is_orthogonal(r, p)? || !self.is_orthogonal(r, q)? {
                        continue;
                    }
                    report.triples_checked += 1;
                    for &(a, b) in &coeffs {
                        let x = matrix::add(
                            &matrix::scale(&self.tower.from_int(a), u),
                            &matrix::scale(&self.tower.from_int(b), v),
                        );
                        if !matrix::is_zero(&x) {
                            report.og1 &= self.inner_unchecked(r.coords(), &x).is_zero();
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

fn parse_vector(tower: &Tower, value: &Value) -> Result<Vector, QspaceError> {
    let items = value.as_array().ok_or_else(|| QspaceError::Parse("expected an array".into()))?;
    items
        .iter()
        .map(|x| match x {
            Value::String(s) => tower.parse(s).map_err(|e| QspaceError::Parse(format!("{s:?}: {e}"))),
            Value::Number(n) => n
                .as_i64()
                .map(|k| tower.from_int(k))
                .ok_or_else(|| QspaceError::Parse(format!("{n} is not an integer; use a string expression"))),
            other => Err(QspaceError::Parse(format!("unexpected entry {other}"))),
        })
        .collect()
}
