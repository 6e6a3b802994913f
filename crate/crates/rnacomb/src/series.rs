//! Exact arc-count tables s(n, l) and t(n, l) for a structure class, computed
//! by solving the class's functional-equation system with truncated bivariate
//! power series over exact big integers.
//!
//! Two independent solvers live here:
//!
//! * [`ArcCountTable::build`] — the production path. The counting series S
//!   satisfies the quadratic (x^2 y)^r S^2 - B S + A = 0, so
//!   W = B - 2 (x^2 y)^r S is an integer-coefficient square root of the
//!   discriminant divisor D = B^2 - 4 (x^2 y)^r A. Differentiating W^2 = D
//!   gives the first-order relation 2 D W_x = D_x W, whose coefficient
//!   recurrence fills one x-layer at a time with one exact division per
//!   coefficient. This brings the table build down to O(n_max^2) big-integer
//!   operations, which is what makes n_max in the thousands practical.
//! * [`solve_functional_equation`] — the direct graded fixed-point solve of
//!   the coupled system S = 1 + xS + c S (T - P), (1 + c) T = S + c P with
//!   c = (x^2 y)^r / (1 - x^2 y). It mirrors the combinatorial decomposition
//!   line by line and is kept as an independent verification route (it is
//!   Theta(n_max^4), so only usable at moderate order).
//!
//! Additional cross-checks: the quadratic residual
//! ([`functional_equation_residual_is_zero`]) and the Catalan-form expansion
//! ([`catalan_form_counts`]) computed with exact rational arithmetic.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedSub, One, Zero};

use crate::error::Error;
use crate::poly::{class_polynomials, BiPoly};
use crate::structure::StructureClass;

/// Exact integer table of s(n, l) (all valid structures) and t(n, l)
/// (reducible structures, i.e. without a rainbow arc (1, n)) for one class,
/// for all n <= n_max and 0 <= l <= floor(n/2).
#[derive(Debug, Clone)]
pub struct ArcCountTable {
    class: StructureClass,
    n_max: usize,
    s: Vec<Vec<BigUint>>,
    t: Vec<Vec<BigUint>>,
    s_sums: Vec<BigUint>,
    t_sums: Vec<BigUint>,
}

/// Integer square root of the discriminant divisor as a power series in x
/// with polynomial-in-y layers: w[m][j] is the x^m y^j coefficient.
///
/// The recurrence comes from 2 D W_x = D_x W with d_0 = D(0, y) = 1:
/// 2m w_m = -sum_{i=1..deg D} (2m - 3i) d_i w_{m-i}; every division is exact.
fn sqrt_discriminant_series(
    d: &BiPoly,
    n_terms: usize,
    mut progress: impl FnMut(usize, usize),
) -> Vec<Vec<BigInt>> {
    let mut terms_by_xdeg: Vec<Vec<(usize, i64)>> = vec![Vec::new(); d.deg_x() + 1];
    for (i, j, c) in d.terms() {
        terms_by_xdeg[i].push((j, c));
    }
    assert_eq!(terms_by_xdeg[0], vec![(0, 1)], "divisor must have constant term 1");
    let dy_max = d.deg_y();

    let mut w: Vec<Vec<BigInt>> = Vec::with_capacity(n_terms + 1);
    w.push(vec![BigInt::one()]);
    for m in 1..=n_terms {
        let top = m / 2;
        let mut acc = vec![BigInt::zero(); top + dy_max + 1];
        for (i, terms) in terms_by_xdeg.iter().enumerate().take(m + 1).skip(1) {
            let factor = 2 * m as i64 - 3 * i as i64;
            let prev = &w[m - i];
            for &(j2, c) in terms {
                let fc = factor * c;
                if fc == 0 {
                    continue;
                }
                for (j1, w1) in prev.iter().enumerate() {
                    if !w1.is_zero() {
                        acc[j1 + j2] += w1 * fc;
                    }
                }
            }
        }
        let den = BigInt::from(2 * m as i64);
        let mut row = Vec::with_capacity(top + 1);
        for (j, v) in acc.into_iter().enumerate() {
            if j <= top {
                let (q, rem) = v.div_rem(&den);
                assert!(rem.is_zero(), "inexact division at x^{m} y^{j}");
                row.push(-q);
            } else {
                assert!(v.is_zero(), "coefficient above the y-degree bound at x^{m} y^{j}");
            }
        }
        w.push(row);
        if m % 128 == 0 {
            progress(m, n_terms);
        }
    }
    progress(n_terms, n_terms);
    w
}

impl ArcCountTable {
    pub fn build(class: StructureClass, n_max: usize) -> Self {
        Self::build_with_progress(class, n_max, |_, _| {})
    }

    /// Build the table, reporting (layers done, layers total) along the way.
    pub fn build_with_progress(
        class: StructureClass,
        n_max: usize,
        progress: impl FnMut(usize, usize),
    ) -> Self {
        let (_, b, d) = class_polynomials(class);
        let r = class.r() as usize;
        let lambda = class.lambda() as usize;
        let shift = 2 * r;
        let two = BigInt::from(2);

        let w = sqrt_discriminant_series(&d, n_max + shift, progress);

        // s(n, l) = (B - W)(n + 2r, l + r) / 2
        let mut s: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let wrow = &w[n + shift];
            let mut row = Vec::with_capacity(n / 2 + 1);
            for l in 0..=n / 2 {
                let num = BigInt::from(b.coeff(n + shift, l + r)) - &wrow[l + r];
                let (q, rem) = num.div_rem(&two);
                assert!(rem.is_zero(), "odd numerator at s({n},{l})");
                row.push(q.to_biguint().expect("negative structure count"));
            }
            s.push(row);
        }
        drop(w);

        // A T = (1 - x^2 y) S + (x^2 y)^r P gives the reducible table without
        // any convolution:
        // t(n,l) = s(n,l) - s(n-2,l-1) + [l=r, 0 <= n-2r <= lambda-2]
        //          + t(n-2,l-1) - t(n-2r,l-r)
        let mut t: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut row = Vec::with_capacity(n / 2 + 1);
            for l in 0..=n / 2 {
                let mut val = BigInt::from(s[n][l].clone());
                if n >= 2 && l >= 1 {
                    val -= BigInt::from(s[n - 2][l - 1].clone());
                    val += BigInt::from(t[n - 2][l - 1].clone());
                }
                if lambda >= 2 && l == r && n >= 2 * r && n - 2 * r <= lambda - 2 {
                    val += 1;
                }
                if n >= 2 * r && l >= r {
                    val -= BigInt::from(t[n - 2 * r][l - r].clone());
                }
                row.push(val.to_biguint().expect("negative reducible count"));
            }
            t.push(row);
        }

        for n in 0..=n_max {
            for l in 0..=n / 2 {
                debug_assert!(t[n][l] <= s[n][l], "t({n},{l}) > s({n},{l})");
            }
        }

        let s_sums = s.iter().map(|row| row.iter().sum()).collect();
        let t_sums = t.iter().map(|row| row.iter().sum()).collect();
        Self { class, n_max, s, t, s_sums, t_sums }
    }

    pub fn class(&self) -> StructureClass {
        self.class
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The row s(n, 0..=n/2). Panics if n > n_max.
    pub fn s_row(&self, n: usize) -> &[BigUint] {
        &self.s[n]
    }

    /// The row t(n, 0..=n/2) of reducible counts. Panics if n > n_max.
    pub fn t_row(&self, n: usize) -> &[BigUint] {
        &self.t[n]
    }

    /// Row sum s(n) over all arc counts. Panics if n > n_max.
    pub fn s_total(&self, n: usize) -> &BigUint {
        &self.s_sums[n]
    }

    /// Row sum t(n). Panics if n > n_max.
    pub fn t_total(&self, n: usize) -> &BigUint {
        &self.t_sums[n]
    }

    /// Exact P(Y <= l) for the arc count Y of a uniform structure on n
    /// vertices: sum_{j <= l} s(n, j) / s(n).
    pub fn arc_cdf(&self, n: usize, l: usize) -> Result<BigRational, Error> {
        if n > self.n_max {
            return Err(Error::TableRange { n, n_max: self.n_max });
        }
        let mut num = BigUint::zero();
        for j in 0..=l.min(n / 2) {
            num += &self.s[n][j];
        }
        Ok(BigRational::new(
            BigInt::from(num),
            BigInt::from(self.s_sums[n].clone()),
        ))
    }

    /// CSV export: header `n,l,count`, exact decimal integers.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<(), Error> {
        writeln!(w, "n,l,count")?;
        for n in 0..=self.n_max {
            for l in 0..=n / 2 {
                writeln!(w, "{n},{l},{}", self.s[n][l])?;
            }
        }
        Ok(())
    }
}

/// The direct graded fixed-point solve of the coupled functional-equation
/// system; see the module docs. Layer n of both series is fully determined
/// once layers < n are known because c has x-valuation 2r >= 2.
pub struct FixedPointSeries {
    pub s: Vec<Vec<BigUint>>,
    pub t: Vec<Vec<BigUint>>,
}

pub fn solve_functional_equation(class: StructureClass, n_max: usize) -> FixedPointSeries {
    let lambda = class.lambda() as usize;
    let r = class.r() as usize;

    let mut s: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    let mut t: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    // T - P, the admissible nested segments
    let mut tp: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    // V = S (T - P), maintained incrementally
    let mut v: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);

    for n in 0..=n_max {
        let top = n / 2;

        // S(n) = [n = 0] + (x S)(n) + (c V)(n), c = sum_{j >= r} (x^2 y)^j
        let s_row = if n == 0 {
            vec![BigUint::one()]
        } else {
            let mut row = s[n - 1].clone();
            row.resize(top + 1, BigUint::zero());
            for j in r..=top {
                for (l2, val) in v[n - 2 * j].iter().enumerate() {
                    if !val.is_zero() {
                        row[l2 + j] += val;
                    }
                }
            }
            row
        };
        s.push(s_row);

        // (1 + c) T = S + c P, solved layer by layer:
        // T(n,l) = S(n,l) + [l >= r, 0 <= n - 2l <= lambda-2] - sum_{j >= r} T(n-2j, l-j)
        let mut t_row = s[n].clone();
        if lambda >= 2 {
            for l in r..=top {
                if n >= 2 * l && n - 2 * l <= lambda - 2 {
                    t_row[l] += BigUint::one();
                }
            }
        }
        for j in r..=top {
            for (l2, val) in t[n - 2 * j].iter().enumerate() {
                if !val.is_zero() {
                    let idx = l2 + j;
                    let reduced = t_row[idx]
                        .checked_sub(val)
                        .expect("reducible-structure identity violated");
                    t_row[idx] = reduced;
                }
            }
        }
        t.push(t_row);

        let mut tp_row = t[n].clone();
        if n + 2 <= lambda {
            // segments shorter than lambda-1 admit no nested structure
            tp_row[0] = tp_row[0]
                .checked_sub(&BigUint::one())
                .expect("empty structure missing");
        }
        tp.push(tp_row);

        let mut v_row = vec![BigUint::zero(); top + 1];
        for a in 0..=n {
            let (sa, tb) = (&s[a], &tp[n - a]);
            for (l1, c1) in sa.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (l2, c2) in tb.iter().enumerate() {
                    if !c2.is_zero() {
                        v_row[l1 + l2] += c1 * c2;
                    }
                }
            }
        }
        v.push(v_row);
    }

    FixedPointSeries { s, t }
}

/// Check that the table's series annihilates the defining quadratic
/// (x^2 y)^r S^2 - B S + A through order n_max. Exact arithmetic, zero
/// tolerance.
pub fn functional_equation_residual_is_zero(table: &ArcCountTable) -> bool {
    let class = table.class();
    let (a, b, _) = class_polynomials(class);
    let r = class.r() as usize;
    let shift = 2 * r;
    let n_max = table.n_max();

    let s: Vec<Vec<BigInt>> = (0..=n_max)
        .map(|n| table.s_row(n).iter().map(|c| BigInt::from(c.clone())).collect())
        .collect();

    // Q = S^2 up to x^(n_max - 2r)
    let qn = n_max.saturating_sub(shift);
    let mut q: Vec<Vec<BigInt>> = Vec::with_capacity(qn + 1);
    for m in 0..=qn {
        let mut row = vec![BigInt::zero(); m / 2 + 1];
        for a_deg in 0..=m / 2 {
            let b_deg = m - a_deg;
            let doubled = a_deg != b_deg;
            for (l1, c1) in s[a_deg].iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (l2, c2) in s[b_deg].iter().enumerate() {
                    if c2.is_zero() {
                        continue;
                    }
                    let prod = c1 * c2;
                    if doubled {
                        row[l1 + l2] += &prod;
                    }
                    row[l1 + l2] += prod;
                }
            }
        }
        q.push(row);
    }

    for n in 0..=n_max {
        for l in 0..=n / 2 {
            let mut val = BigInt::zero();
            if n >= shift && l >= r {
                val += &q[n - shift][l - r];
            }
            for (i, j, c) in b.terms() {
                if n >= i && l >= j && l - j <= (n - i) / 2 {
                    val -= &s[n - i][l - j] * c;
                }
            }
            val += BigInt::from(a.coeff(n, l));
            if !val.is_zero() {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// C(a, b) with the convention C(a, b) = 0 for b < 0 or a < b.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if b < 0 || a < b {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc *= BigUint::from((a - b + i) as u64);
        acc /= BigUint::from(i as u64);
    }
    acc
}

/// Narayana number N(l, k) = (1/l) C(l, k) C(l, k-1): plane trees with l
/// edges and k leaves. Requires 1 <= k <= l.
pub fn narayana(l: u64, k: u64) -> Result<BigUint, Error> {
    if k < 1 || k > l {
        return Err(Error::Domain(format!("narayana requires 1 <= k <= l, got l={l}, k={k}")));
    }
    let prod = binomial(l as i64, k as i64) * binomial(l as i64, k as i64 - 1);
    let (q, rem) = prod.div_rem(&BigUint::from(l));
    debug_assert!(rem.is_zero());
    Ok(q)
}

/// Closed-form count for stack-length 1 classes:
/// s(n, l) = sum_{k=1..l} N(l, k) C(n - (lambda-1) k, 2l). Requires l >= 1.
pub fn r1_count(lambda: u32, n: u64, l: u64) -> Result<BigUint, Error> {
    if lambda < 1 {
        return Err(Error::InvalidClass { lambda, r: 1 });
    }
    if l < 1 {
        return Err(Error::Domain("closed form requires l >= 1".into()));
    }
    let mut acc = BigUint::zero();
    for k in 1..=l {
        let slots = n as i64 - (lambda as i64 - 1) * k as i64;
        acc += narayana(l, k)? * binomial(slots, 2 * l as i64);
    }
    Ok(acc)
}

/// The lambda = 2, r = 1 closed form s(n, l) = (1/l) C(n-l, l+1) C(n-l-1, l-1).
/// Requires l >= 1.
pub fn waterman_lambda2_count(n: u64, l: u64) -> Result<BigUint, Error> {
    if l < 1 {
        return Err(Error::Domain("closed form requires l >= 1".into()));
    }
    let prod = binomial(n as i64 - l as i64, l as i64 + 1)
        * binomial(n as i64 - l as i64 - 1, l as i64 - 1);
    let (q, rem) = prod.div_rem(&BigUint::from(l));
    debug_assert!(rem.is_zero());
    Ok(q)
}

// ---------------------------------------------------------------------------
// Catalan-form cross-check with exact rational series arithmetic
// ---------------------------------------------------------------------------

type RatLayers = Vec<Vec<BigRational>>;

fn rs_zero(order: usize) -> RatLayers {
    (0..=order).map(|n| vec![BigRational::zero(); n / 2 + 1]).collect()
}

fn rs_one(order: usize) -> RatLayers {
    let mut out = rs_zero(order);
    out[0][0] = BigRational::one();
    out
}

fn rs_from_poly(p: &BiPoly, order: usize) -> RatLayers {
    let mut out = rs_zero(order);
    for (i, j, c) in p.terms() {
        if i <= order {
            assert!(j <= i / 2, "polynomial term outside the triangular support");
            out[i][j] = BigRational::from_integer(BigInt::from(c));
        }
    }
    out
}

fn rs_add(x: &RatLayers, y: &RatLayers) -> RatLayers {
    let mut out = x.clone();
    for (n, row) in y.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            out[n][l] += c;
        }
    }
    out
}

fn rs_sub(x: &RatLayers, y: &RatLayers) -> RatLayers {
    let mut out = x.clone();
    for (n, row) in y.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            out[n][l] -= c;
        }
    }
    out
}

fn rs_scale(x: &RatLayers, k: &BigRational) -> RatLayers {
    x.iter()
        .map(|row| row.iter().map(|c| c * k).collect())
        .collect()
}

fn rs_mul(x: &RatLayers, y: &RatLayers, order: usize) -> RatLayers {
    let mut out = rs_zero(order);
    for (n1, row1) in x.iter().enumerate().take(order + 1) {
        for (l1, c1) in row1.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (n2, row2) in y.iter().enumerate().take(order + 1 - n1) {
                for (l2, c2) in row2.iter().enumerate() {
                    if !c2.is_zero() {
                        out[n1 + n2][l1 + l2] += c1 * c2;
                    }
                }
            }
        }
    }
    out
}

/// Multiplicative inverse of a series whose leading layer is a nonzero
/// scalar. Division by a non-unit is a programming error, hence the panic.
fn rs_inv(x: &RatLayers, order: usize) -> RatLayers {
    let c0 = &x[0][0];
    assert!(!c0.is_zero(), "series division by a non-unit");
    let c0_inv = c0.recip();
    let mut out = rs_zero(order);
    out[0][0] = c0_inv.clone();
    for n in 1..=order {
        let mut row = vec![BigRational::zero(); n / 2 + 1];
        for k in 1..=n.min(x.len() - 1) {
            for (l1, c1) in x[k].iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (l2, c2) in out[n - k].iter().enumerate() {
                    if !c2.is_zero() {
                        row[l1 + l2] += c1 * c2;
                    }
                }
            }
        }
        for c in &mut row {
            *c = -(c.clone() * &c0_inv);
        }
        out[n] = row;
    }
    out
}

/// Square root with constant term 1 by Newton iteration v <- (v + u/v)/2;
/// each pass doubles the number of correct layers.
fn rs_sqrt(u: &RatLayers, order: usize) -> RatLayers {
    assert!(u[0][0].is_one(), "square root requires constant term 1");
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut v = rs_one(order);
    let mut correct = 1usize;
    while correct <= order {
        v = rs_scale(&rs_add(&v, &rs_mul(u, &rs_inv(&v, order), order)), &half);
        correct *= 2;
    }
    v
}

fn rs_shift_up(x: &RatLayers, dx: usize, dy: usize, order: usize) -> RatLayers {
    let mut out = rs_zero(order);
    for (n, row) in x.iter().enumerate() {
        if n + dx > order {
            break;
        }
        for (l, c) in row.iter().enumerate() {
            if !c.is_zero() {
                out[n + dx][l + dy] = c.clone();
            }
        }
    }
    out
}

/// Exact division by the monomial x^dx y^dy; panics if any dropped
/// coefficient is nonzero.
fn rs_shift_down(x: &RatLayers, dx: usize, dy: usize) -> RatLayers {
    let order = x.len() - 1 - dx;
    let mut out = rs_zero(order);
    for (n, row) in x.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            assert!(n >= dx && l >= dy, "monomial division with a remainder at x^{n} y^{l}");
            out[n - dx][l - dy] = c.clone();
        }
    }
    out
}

fn rs_truncate(x: &RatLayers, order: usize) -> RatLayers {
    x[..=order].to_vec()
}

/// Expand S = (A/B) C((x^2 y)^r A / B^2), with C the Catalan-number series
/// (1 - sqrt(1 - 4z)) / (2z), in exact rational arithmetic. Returns the
/// layers up to `order`; every value is an integer when the algebra is right.
pub fn catalan_form_counts(class: StructureClass, order: usize) -> RatLayers {
    let (a, b, _) = class_polynomials(class);
    let r = class.r() as usize;
    let work = order + 2 * r;

    let a_s = rs_from_poly(&a, work);
    let b_s = rs_from_poly(&b, work);
    let b_inv = rs_inv(&b_s, work);
    let f = rs_mul(&a_s, &b_inv, work); // A/B
    let g = rs_mul(&f, &b_inv, work); // A/B^2
    let u = rs_shift_up(&g, 2 * r, r, work); // (x^2 y)^r A / B^2

    let four = BigRational::from_integer(BigInt::from(4));
    let radicand = rs_sub(&rs_one(work), &rs_scale(&u, &four));
    let v = rs_sqrt(&radicand, work);
    let numerator = rs_sub(&rs_one(work), &v); // 1 - sqrt(1 - 4U)

    let shifted = rs_shift_down(&numerator, 2 * r, r);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c_of_u = rs_scale(&rs_mul(&shifted, &rs_inv(&rs_truncate(&g, order), order), order), &half);
    rs_mul(&rs_truncate(&f, order), &c_of_u, order)
}
