//! Exact rational scalars and matrices.
//!
//! Everything here is arbitrary precision; there is no floating point
//! anywhere in the crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `p/q`, or `p` when the denominator is 1.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Schema(format!("not a rational: {s:?}"));
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// JSON-facing rational: serializes as a string, accepts strings or integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl From<Rational> for Q {
    fn from(x: Rational) -> Self {
        Q(x)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => parse_rational(&s).map(Q).map_err(de::Error::custom),
            Raw::I(i) => Ok(Q(q(i))),
        }
    }
}

/// Least common multiple of the reduced denominators; 1 for the empty list.
pub fn lcm_denominators(values: &[Rational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Representative of `x` modulo 1 in `[0, 1)`.
pub fn mod_z(x: &Rational) -> Rational {
    x - x.floor()
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![Rational::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Builds from rows; `cols` disambiguates the zero-row case.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {r} has {} entries, expected {cols}",
                rows[r].len()
            )));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(data, cols).expect("rectangular integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i][j] = x;
    }

    pub fn row_slices(&self) -> &[Vec<Rational>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        let data = self.data.iter().map(|r| r.iter().map(|a| a * c).collect()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.data[i][j] == self.data[j][i]))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] = self.data[i][j].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.data[self.rows + i][self.cols + j] = other.data[i][j].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.data[i][c].is_zero()) else {
                continue;
            };
            m.data.swap(r, p);
            let inv = m.data[r][c].recip();
            for x in m.data[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..m.rows {
                if i != r && !m.data[i][c].is_zero() {
                    let f = m.data[i][c].clone();
                    for j in c..m.cols {
                        let d = &f * &m.data[r][j];
                        m.data[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.data[row][f].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b`. Returns `None` when inconsistent, otherwise a
    /// particular solution (free variables zero) and a kernel basis.
    pub fn solve_affine(&self, b: &[Rational]) -> Result<Option<(Vec<Rational>, Vec<Vec<Rational>>)>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "target has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.data[row][self.cols].clone();
        }
        Ok(Some((x, self.nullspace())))
    }

    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let mut m = self.data.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
        Ok(det)
    }
}

/// A symmetric rational bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricForm(Matrix);

impl SymmetricForm {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Validation(vec![format!(
                "form is {}x{}, not square",
                m.rows(),
                m.cols()
            )]));
        }
        if !m.is_symmetric() {
            return Err(Error::Validation(vec!["form is not symmetric".into()]));
        }
        Ok(SymmetricForm(m))
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(Matrix::from_i64(rows))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn direct_sum(&self, other: &SymmetricForm) -> SymmetricForm {
        SymmetricForm(self.0.direct_sum(&other.0))
    }

    pub fn neg(&self) -> SymmetricForm {
        SymmetricForm(self.0.scale(&q(-1)))
    }

    /// `Pᵀ A P`.
    pub fn congruent(&self, p: &Matrix) -> Result<SymmetricForm> {
        Ok(SymmetricForm(p.transpose().mul(&self.0)?.mul(p)?))
    }

    /// `vᵀ A v`.
    pub fn eval(&self, v: &[Rational]) -> Result<Rational> {
        let av = self.0.mul_vec(v)?;
        Ok(av.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// Diagonal entries of a congruent diagonal form, in elimination order.
    /// Hyperbolic blocks contribute the pair `(1, -1)`.
    pub fn diagonalize(&self) -> Vec<Rational> {
        let n = self.size();
        let mut a = self.0.data.clone();
        let mut active = vec![true; n];
        let mut diag = Vec::with_capacity(n);
        // row k -= f * row i, then column k -= f * column i
        fn op(a: &mut [Vec<Rational>], k: usize, i: usize, f: &Rational) {
            let n = a.len();
            for c in 0..n {
                let d = f * &a[i][c];
                a[k][c] -= d;
            }
            for r in 0..n {
                let d = f * &a[r][i];
                a[r][k] -= d;
            }
        }
        loop {
            if let Some(i) = (0..n).find(|&i| active[i] && !a[i][i].is_zero()) {
                let p = a[i][i].clone();
                for k in 0..n {
                    if active[k] && k != i && !a[k][i].is_zero() {
                        let f = &a[k][i] / &p;
                        op(&mut a, k, i, &f);
                    }
                }
                active[i] = false;
                diag.push(p);
                continue;
            }
            let pair = (0..n).filter(|&i| active[i]).find_map(|i| {
                (0..n).find(|&j| active[j] && j != i && !a[i][j].is_zero()).map(|j| (i, j))
            });
            let Some((i, j)) = pair else { break };
            let b = a[i][j].clone();
            for k in 0..n {
                if !active[k] || k == i || k == j {
                    continue;
                }
                if !a[k][j].is_zero() {
                    let f = &a[k][j] / &b;
                    op(&mut a, k, i, &f);
                }
                if !a[k][i].is_zero() {
                    let f = &a[k][i] / &b;
                    op(&mut a, k, j, &f);
                }
            }
            active[i] = false;
            active[j] = false;
            diag.push(Rational::one());
            diag.push(-Rational::one());
        }
        diag.extend((0..n).filter(|&i| active[i]).map(|_| Rational::zero()));
        diag
    }

    pub fn signature(&self) -> i64 {
        self.diagonalize()
            .iter()
            .map(|d| if d.is_positive() { 1 } else if d.is_negative() { -1 } else { 0 })
            .sum()
    }
}

/// Signature of a matrix, which must be symmetric.
pub fn signature(m: &Matrix) -> Result<i64> {
    Ok(SymmetricForm::new(m.clone())?.signature())
}

/// Cartan matrix of E8 (positive definite, unimodular, even).
pub fn e8_form() -> SymmetricForm {
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)] {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    SymmetricForm::from_i64(&m).expect("E8 is symmetric")
}

/// The hyperbolic plane `[[0,1],[1,0]]`.
pub fn hyperbolic_form() -> SymmetricForm {
    SymmetricForm::from_i64(&[vec![0, 1], vec![1, 0]]).expect("symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-5", "7/3", "-1/4"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(fmt_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn lcm_and_mod() {
        assert_eq!(lcm_denominators(&[qf(1, 2), qf(1, 3)]), BigInt::from(6));
        assert_eq!(lcm_denominators(&[]), BigInt::from(1));
        assert_eq!(lcm_denominators(&[q(2), q(-5)]), BigInt::from(1));
        assert_eq!(mod_z(&qf(7, 3)), qf(1, 3));
        assert_eq!(mod_z(&qf(-1, 4)), qf(3, 4));
        assert_eq!(mod_z(&q(5)), q(0));
    }

    #[test]
    fn small_signatures() {
        assert_eq!(SymmetricForm::from_i64(&[]).unwrap().signature(), 0);
        assert_eq!(hyperbolic_form().signature(), 0);
        assert_eq!(e8_form().signature(), 8);
        assert_eq!(SymmetricForm::from_i64(&[vec![0, 0], vec![0, 0]]).unwrap().signature(), 0);
        assert_eq!(SymmetricForm::from_i64(&[vec![1, 2], vec![2, 1]]).unwrap().signature(), 0);
    }

    #[test]
    fn e8_leading_minors_positive() {
        let m = e8_form();
        for k in 1..=8 {
            let rows: Vec<Vec<Rational>> =
                (0..k).map(|i| m.matrix().row_slices()[i][..k].to_vec()).collect();
            assert!(Matrix::from_rows(rows, k).unwrap().det().unwrap().is_positive());
        }
        assert_eq!(m.matrix().det().unwrap(), q(1));
    }

    #[test]
    fn non_symmetric_rejected() {
        assert!(SymmetricForm::from_i64(&[vec![0, 1], vec![2, 0]]).is_err());
        assert!(signature(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn hyperbolic_with_tail() {
        // zero diagonal everywhere forces the 2x2 split with spill-over rows
        let f = SymmetricForm::from_i64(&[vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0]]).unwrap();
        let det = f.matrix().det().unwrap();
        assert_eq!(det, q(12));
        assert_eq!(f.signature(), -1);
    }

    #[test]
    fn affine_solutions() {
        let r = Matrix::from_i64(&[vec![1, 1], vec![2, 2]]);
        let (x, k) = r.solve_affine(&[q(1), q(2)]).unwrap().unwrap();
        assert_eq!(r.mul_vec(&x).unwrap(), vec![q(1), q(2)]);
        assert_eq!(k.len(), 1);
        assert_eq!(r.mul_vec(&k[0]).unwrap(), vec![q(0), q(0)]);
        assert!(r.solve_affine(&[q(1), q(3)]).unwrap().is_none());
        assert!(r.solve_affine(&[q(1)]).is_err());
    }
}
