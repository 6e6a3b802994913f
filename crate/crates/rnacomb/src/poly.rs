//! Dense bivariate polynomials with exact integer coefficients.
//!
//! Small utility shared by the series solver and the singularity analysis:
//! the class polynomials A, B and the discriminant divisor D = B^2 - 4(x^2 y)^r A
//! all live here as exact integer data.

use crate::structure::StructureClass;

/// A polynomial in (x, y) with i64 coefficients, stored densely as
/// `coeff[i][j]` for the x^i y^j term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    coeff: Vec<Vec<i64>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self { coeff: Vec::new() }
    }

    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let mut p = Self::zero();
        for &(i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p.trim();
        p
    }

    fn add_term(&mut self, i: usize, j: usize, c: i64) {
        if self.coeff.len() <= i {
            self.coeff.resize_with(i + 1, Vec::new);
        }
        if self.coeff[i].len() <= j {
            self.coeff[i].resize(j + 1, 0);
        }
        self.coeff[i][j] += c;
    }

    fn trim(&mut self) {
        for row in &mut self.coeff {
            while row.last() == Some(&0) {
                row.pop();
            }
        }
        while self.coeff.last().map_or(false, Vec::is_empty) {
            self.coeff.pop();
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        self.coeff
            .get(i)
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or(0)
    }

    /// Degree in x (0 for the zero polynomial).
    pub fn deg_x(&self) -> usize {
        self.coeff.len().saturating_sub(1)
    }

    /// Largest y-degree appearing in any term.
    pub fn deg_y(&self) -> usize {
        self.coeff
            .iter()
            .map(|row| row.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Iterate nonzero terms as (i, j, c).
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.coeff.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(move |(j, &c)| (i, j, c))
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i, j, c);
        }
        out.trim();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeff {
            for c in row.iter_mut() {
                *c *= k;
            }
        }
        out.trim();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in other.terms() {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out.trim();
        out
    }

    /// Partial derivative with respect to x.
    pub fn dx(&self) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            if i > 0 {
                out.add_term(i - 1, j, c * i as i64);
            }
        }
        out.trim();
        out
    }

    /// Partial derivative with respect to y.
    pub fn dy(&self) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            if j > 0 {
                out.add_term(i, j - 1, c * j as i64);
            }
        }
        out.trim();
        out
    }

    /// Evaluate at (x, y) by Horner's scheme in x with inner Horner in y.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.coeff.iter().rev() {
            let mut ry = 0.0;
            for &c in row.iter().rev() {
                ry = ry * y + c as f64;
            }
            acc = acc * x + ry;
        }
        acc
    }
}

/// The exact polynomial data of a structure class:
/// A = 1 - x^2 y + (x^2 y)^r,
/// B = (1 - x) A + (x^2 y)^r (1 + x + ... + x^(lambda-2)),
/// D = B^2 - 4 (x^2 y)^r A.
pub fn class_polynomials(class: StructureClass) -> (BiPoly, BiPoly, BiPoly) {
    let r = class.r() as usize;
    let lambda = class.lambda() as usize;

    let a = BiPoly::from_terms(&[(0, 0, 1), (2, 1, -1), (2 * r, r, 1)]);
    let one_minus_x = BiPoly::from_terms(&[(0, 0, 1), (1, 0, -1)]);
    let tail: Vec<(usize, usize, i64)> = (0..lambda.saturating_sub(1))
        .map(|i| (2 * r + i, r, 1))
        .collect();
    let b = one_minus_x.mul(&a).add(&BiPoly::from_terms(&tail));

    let w_r = BiPoly::from_terms(&[(2 * r, r, 1)]);
    let d = b.mul(&b).sub(&w_r.mul(&a).scale(4));

    debug_assert_eq!(d.coeff(0, 0), 1, "D(0, y) must be 1");
    (a, b, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplest_class_discriminant() {
        // lambda = 1, r = 1: A = 1, B = 1 - x, D = (1 - x)^2 - 4 x^2 y
        let class = StructureClass::new(1, 1).unwrap();
        let (a, b, d) = class_polynomials(class);
        assert_eq!(a, BiPoly::from_terms(&[(0, 0, 1)]));
        assert_eq!(b, BiPoly::from_terms(&[(0, 0, 1), (1, 0, -1)]));
        assert_eq!(
            d,
            BiPoly::from_terms(&[(0, 0, 1), (1, 0, -2), (2, 0, 1), (2, 1, -4)])
        );
    }

    #[test]
    fn derivative_and_eval() {
        let p = BiPoly::from_terms(&[(2, 1, 3), (1, 0, -1)]); // 3 x^2 y - x
        assert_eq!(p.dx(), BiPoly::from_terms(&[(1, 1, 6), (0, 0, -1)]));
        assert_eq!(p.dy(), BiPoly::from_terms(&[(2, 0, 3)]));
        assert_eq!(p.eval(2.0, 0.5), 3.0 * 4.0 * 0.5 - 2.0);
    }

    #[test]
    fn discriminant_constant_term_is_one_for_paper_range() {
        for lambda in 1..=4 {
            for r in 1..=3 {
                let class = StructureClass::new(lambda, r).unwrap();
                let (_, _, d) = class_polynomials(class);
                assert_eq!(d.coeff(0, 0), 1);
                // x = 0 is never a root of the divisor
                assert!(d.eval(0.0, 1.0) == 1.0);
            }
        }
    }
}
