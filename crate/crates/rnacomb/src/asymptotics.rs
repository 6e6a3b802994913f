//! Dominant singularity of the counting series and the Gaussian limit
//! parameters (mu, sigma^2) of the arc-count distribution.
//!
//! For each class the singularity rho(y) is the minimal positive real root of
//! the discriminant divisor D(x, y) = B^2 - 4 (x^2 y)^r A. Only this divisor
//! is ever root-solved; the full resultant carries a spurious x = 0 factor.
//! With theta(s) = rho(e^s),
//!
//!   mu = -theta'(0)/theta(0),
//!   sigma^2 = (theta'(0)/theta(0))^2 - theta''(0)/theta(0),
//!
//! where theta'(0) = rho'(1) and theta''(0) = rho''(1) + rho'(1) come from
//! implicit differentiation of D(rho(y), y) = 0. A finite-difference pass
//! over log rho cross-checks both values before they are returned.

use std::io::Write;

use crate::error::Error;
use crate::poly::{class_polynomials, BiPoly};
use crate::structure::StructureClass;
use crate::util::round_half_up_string;

/// Scan step for sign isolation on (0, 1]. The minimal positive root is
/// simple and isolated at this resolution for the supported classes.
const SCAN_STEP: f64 = 1e-3;
/// Supported neighbourhood of y = 1.
const Y_RANGE: (f64, f64) = (0.5, 2.0);
/// Required agreement between the implicit-derivative and finite-difference
/// parameter paths.
const CROSS_CHECK_TOL: f64 = 1e-6;

/// The exact polynomial data A, B and discriminant divisor D of a class.
#[derive(Debug, Clone)]
pub struct ClassPolynomials {
    class: StructureClass,
    a: BiPoly,
    b: BiPoly,
    d: BiPoly,
}

impl ClassPolynomials {
    pub fn new(class: StructureClass) -> Self {
        let (a, b, d) = class_polynomials(class);
        Self { class, a, b, d }
    }

    pub fn class(&self) -> StructureClass {
        self.class
    }

    pub fn a(&self) -> &BiPoly {
        &self.a
    }

    pub fn b(&self) -> &BiPoly {
        &self.b
    }

    /// The discriminant divisor D = B^2 - 4 (x^2 y)^r A.
    pub fn discriminant(&self) -> &BiPoly {
        &self.d
    }
}

/// CLT parameters of a class: the dominant singularity at y = 1 and the
/// per-nucleotide mean/variance of the arc count in the Gaussian limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltParams {
    class: StructureClass,
    pub rho: f64,
    pub mu: f64,
    pub sigma2: f64,
}

impl CltParams {
    pub fn class(&self) -> StructureClass {
        self.class
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

/// Minimal positive real root of D(x, y) on (0, 1], to ~machine accuracy
/// (well inside the 1e-12 contract). y is restricted to [1/2, 2].
pub fn dominant_singularity(class: StructureClass, y: f64) -> Result<f64, Error> {
    if !(Y_RANGE.0..=Y_RANGE.1).contains(&y) {
        return Err(Error::UnsupportedY(y));
    }
    let polys = ClassPolynomials::new(class);
    dominant_singularity_of(&polys, y)
}

fn dominant_singularity_of(polys: &ClassPolynomials, y: f64) -> Result<f64, Error> {
    let d = polys.discriminant();
    let dx = d.dx();
    let class = polys.class();

    // sign-isolating scan from 0+, where D(0, y) = 1 > 0
    let mut lo = 0.0f64;
    let mut flo = 1.0f64;
    let mut bracket = None;
    for k in 1..=1000 {
        let x = k as f64 * SCAN_STEP;
        let fx = d.eval(x, y);
        if fx == 0.0 {
            bracket = Some((x, x));
            break;
        }
        if flo > 0.0 && fx < 0.0 {
            bracket = Some((lo, x));
            break;
        }
        lo = x;
        flo = fx;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoSingularity {
        lambda: class.lambda(),
        r: class.r(),
        y,
    })?;

    // bisection to machine resolution, then Newton polish
    if lo < hi {
        while hi - lo > f64::EPSILON * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = d.eval(mid, y);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let mut root = 0.5 * (lo + hi);
    for _ in 0..4 {
        let f = d.eval(root, y);
        let df = dx.eval(root, y);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        root -= step;
        if step.abs() < f64::EPSILON * root.abs() {
            break;
        }
    }

    // root certificate: tiny residual, simple root
    if d.eval(root, y).abs() > 1e-10 {
        return Err(Error::NoSingularity { lambda: class.lambda(), r: class.r(), y });
    }
    if dx.eval(root, y).abs() < 1e-9 {
        return Err(Error::DegenerateSingularity { lambda: class.lambda(), r: class.r(), y });
    }
    Ok(root)
}

/// CLT parameters via implicit differentiation, cross-checked against
/// Richardson-extrapolated central differences of log rho(e^s).
pub fn clt_params(class: StructureClass) -> Result<CltParams, Error> {
    let polys = ClassPolynomials::new(class);
    let rho = dominant_singularity_of(&polys, 1.0)?;

    let d = polys.discriminant();
    let (d_x, d_y) = (d.dx(), d.dy());
    let (d_xx, d_xy, d_yy) = (d_x.dx(), d_x.dy(), d_y.dy());

    let fx = d_x.eval(rho, 1.0);
    if fx.abs() < 1e-9 {
        return Err(Error::DegenerateSingularity { lambda: class.lambda(), r: class.r(), y: 1.0 });
    }
    let fy = d_y.eval(rho, 1.0);
    let rp = -fy / fx;
    let rpp = -(d_xx.eval(rho, 1.0) * rp * rp + 2.0 * d_xy.eval(rho, 1.0) * rp + d_yy.eval(rho, 1.0))
        / fx;

    // theta(s) = rho(e^s): theta'(0) = rho'(1), theta''(0) = rho''(1) + rho'(1)
    let theta1 = rp;
    let theta2 = rpp + rp;
    let mu = -theta1 / rho;
    let sigma2 = (theta1 / rho) * (theta1 / rho) - theta2 / rho;

    // secondary path: central differences of g(s) = log rho(e^s) at h = 1e-4,
    // with one step of Richardson extrapolation; mu = -g'(0), sigma^2 = -g''(0)
    let h = 1e-4;
    let g = |s: f64| -> Result<f64, Error> {
        Ok(dominant_singularity_of(&polys, s.exp())?.ln())
    };
    let (g0, g1, gm1, g2, gm2) = (g(0.0)?, g(h)?, g(-h)?, g(2.0 * h)?, g(-2.0 * h)?);
    let d1 = (8.0 * (g1 - gm1) - (g2 - gm2)) / (12.0 * h);
    let d2 = (16.0 * (g1 + gm1) - (g2 + gm2) - 30.0 * g0) / (12.0 * h * h);
    let mu_fd = -d1;
    let sigma2_fd = -d2;
    if (mu - mu_fd).abs() > CROSS_CHECK_TOL || (sigma2 - sigma2_fd).abs() > CROSS_CHECK_TOL {
        return Err(Error::CltCrossCheck(format!(
            "class {class}: mu {mu} vs {mu_fd}, sigma2 {sigma2} vs {sigma2_fd}"
        )));
    }

    Ok(CltParams { class, rho, mu, sigma2 })
}

/// Standard normal CDF via the complementary error function.
pub fn gaussian_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// CSV grid of CLT parameters for lambda in 1..=4, r in 1..=3:
/// columns `lambda,r,mu,sigma2` at 4 decimals, rounded half up.
pub fn write_table1_csv<W: Write>(w: &mut W) -> Result<(), Error> {
    writeln!(w, "lambda,r,mu,sigma2")?;
    for lambda in 1..=4 {
        for r in 1..=3 {
            let params = clt_params(StructureClass::new(lambda, r)?)?;
            writeln!(
                w,
                "{lambda},{r},{},{}",
                round_half_up_string(params.mu, 4),
                round_half_up_string(params.sigma2, 4)
            )?;
        }
    }
    Ok(())
}
