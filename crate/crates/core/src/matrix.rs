//! Square matrices over noncommutative polynomials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{parse_poly, JsonPoly, NCPoly, Rules};
use crate::ring::RingElem;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S: Scalar> {
    dim: usize,
    entries: Vec<NCPoly<S>>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(dim: usize) -> Self {
        Matrix { dim, entries: vec![NCPoly::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = NCPoly::one();
        }
        m
    }

    pub fn diag(d: Vec<NCPoly<S>>) -> Self {
        let dim = d.len();
        let mut m = Matrix::zero(dim);
        for (i, p) in d.into_iter().enumerate() {
            m.entries[i * dim + i] = p;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<NCPoly<S>>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix rows must form a square".into()));
        }
        Ok(Matrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// Rows of polynomial text, each entry parsed with [`parse_poly`].
    pub fn parse(rows: &[&[&str]], rules: Rules) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_poly(s, rules)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPoly<S> {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: NCPoly<S>) {
        self.entries[i * self.dim + j] = p;
    }

    pub fn with_rules(&self, rules: Rules) -> Self {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|p| p.with_rules(rules)).collect() }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[NCPoly<S>]> {
        self.entries.chunks(self.dim)
    }

    pub fn diagonal_part(&self) -> Self {
        let mut m = self.zero_like();
        for i in 0..self.dim {
            m.set(i, i, self.get(i, i).clone());
        }
        m
    }

    pub fn off_diagonal_part(&self) -> Self {
        self.sub_ref(&self.diagonal_part())
    }

    fn zip(&self, o: &Self, f: impl Fn(&NCPoly<S>, &NCPoly<S>) -> NCPoly<S>) -> Self {
        assert_eq!(self.dim, o.dim, "matrix dimension mismatch");
        Matrix { dim: self.dim, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect() }
    }

    fn map(&self, f: impl Fn(&NCPoly<S>) -> NCPoly<S>) -> Self {
        Matrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    pub fn to_latex(&self) -> String {
        let rows: Vec<String> = self
            .rows()
            .map(|r| r.iter().map(|p| p.to_latex()).collect::<Vec<_>>().join(" & "))
            .collect();
        format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
    }

    pub fn to_json(&self) -> JsonMatrix {
        JsonMatrix { rows: self.rows().map(|r| r.iter().map(|p| p.to_json()).collect()).collect() }
    }

    pub fn from_json(j: &JsonMatrix, rules: Rules) -> Result<Self> {
        let rows = j
            .rows
            .iter()
            .map(|r| r.iter().map(|p| NCPoly::from_json(p, rules)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

/// Row-major JSON form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonMatrix {
    pub rows: Vec<Vec<JsonPoly>>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    /// Row-major bracket syntax `[a, b; c, d]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl<S: Scalar> RingElem for Matrix<S> {
    type Scalar = S;

    fn zero_like(&self) -> Self {
        self.map(|p| p.zero_like())
    }
    fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }
    fn mul_ref(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = Matrix::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = NCPoly::zero();
                for k in 0..d {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        self.map(|p| p.neg())
    }
    fn scale(&self, c: &S) -> Self {
        self.map(|p| p.scale(c))
    }
    fn ddx(&self) -> Self {
        self.map(|p| p.ddx())
    }
    fn map_polys(&self, f: &mut dyn FnMut(&NCPoly<S>) -> Result<NCPoly<S>>) -> Result<Self> {
        Ok(Matrix { dim: self.dim, entries: self.entries.iter().map(f).collect::<Result<_>>()? })
    }
    fn for_each_poly(&self, f: &mut dyn FnMut(&NCPoly<S>)) {
        self.entries.iter().for_each(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn commutator_of_j_with_u() {
        // [diag(1,0), (0, q; r, 0)] = (0, q; −r, 0)
        let j = Matrix::<Rational>::parse(&[&["1", "0"], &["0", "0"]], Rules::Free).unwrap();
        let u = Matrix::parse(&[&["0", "q"], &["r", "0"]], Rules::Free).unwrap();
        let expected = Matrix::parse(&[&["0", "q"], &["-r", "0"]], Rules::Free).unwrap();
        assert_eq!(j.commutator(&u), expected);
    }

    #[test]
    fn noncommutative_entries_keep_order() {
        let u = Matrix::<Rational>::parse(&[&["0", "q"], &["r", "0"]], Rules::Free).unwrap();
        let sq = u.mul_ref(&u);
        assert_eq!(sq.to_string(), "[q*r, 0; 0, r*q]");
        let j = sq.to_json();
        assert_eq!(Matrix::from_json(&j, Rules::Free).unwrap(), sq);
    }
}
