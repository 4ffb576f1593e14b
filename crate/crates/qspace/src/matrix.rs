use std::fmt;

use orthoset_field::{FieldElement, Tower};
use serde_json::Value;

use crate::QspaceError;

pub type Vector = Vec<FieldElement>;

pub(crate) fn add(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn scale(c: &FieldElement, a: &[FieldElement]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub(crate) fn is_zero(a: &[FieldElement]) -> bool {
    a.iter().all(FieldElement::is_zero)
}

pub(crate) fn to_json(v: &[FieldElement]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

/// A dense square matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn identity(tower: &Tower, n: usize) -> Self {
        let data = (0..n * n).map(|k| if k / n == k % n { tower.one() } else { tower.zero() }).collect();
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self, QspaceError> {
        let n = rows.len();
        if n == 0 {
            return Err(QspaceError::InvalidArgument("empty matrix".into()));
        }
        for r in &rows {
            if r.len() != n {
                return Err(QspaceError::DimensionMismatch { expected: n, found: r.len() });
            }
        }
        Ok(Matrix { n, data: rows.into_iter().flatten().collect() })
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: Vec<Vector>) -> Result<Self, QspaceError> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn tower(&self) -> &Tower {
        self.data[0].tower()
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.n..(i + 1) * self.n].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        Matrix { n, data: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect() }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let data = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).fold(self.tower().zero(), |acc, l| acc + self.get(i, l) * other.get(l, j))
            })
            .collect();
        Matrix { n, data }
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vector {
        (0..self.n).map(|i| (0..self.n).fold(self.tower().zero(), |acc, j| acc + self.get(i, j) * &v[j])).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn determinant(&self) -> FieldElement {
        let mut a = self.rows();
        let mut det = self.tower().one();
        for c in 0..self.n {
            let Some(p) = (c..self.n).find(|&r| !a[r][c].is_zero()) else {
                return self.tower().zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det = det * &a[c][c];
            let inv = a[c][c].inv().expect("pivot is nonzero");
            for r in c + 1..self.n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] * &inv;
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let mut a = self.rows();
        let mut b = Matrix::identity(self.tower(), n).rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            b.swap(p, c);
            let inv = a[c][c].inv().expect("pivot is nonzero");
            a[c] = scale(&inv, &a[c]);
            b[c] = scale(&inv, &b[c]);
            for r in (0..n).filter(|&r| r != c) {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                a[r] = sub(&a[r], &scale(&f, &a[c]));
                b[r] = sub(&b[r], &scale(&f, &b[c]));
            }
        }
        Some(Matrix { n, data: b.into_iter().flatten().collect() })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.rows().iter().map(|r| to_json(r)).collect())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}
