//! Compatible-sequence analysis: arc caps implied by nucleotide ratios under
//! the two-letter (purine/pyrimidine), Watson-Crick, and Watson-Crick+wobble
//! pairing rules, the corresponding thresholds p, p0, pbar0, and the fraction
//! of structures admitting a compatible sequence (exact and Gaussian).
//!
//! Ratios are exact rationals end to end; every floor is computed on
//! rationals so the resulting integer caps are reproducible bit for bit.

use std::io::{Read, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::asymptotics::{gaussian_cdf, CltParams};
use crate::error::Error;
use crate::series::ArcCountTable;
use crate::util::{decimal_string, decimal_string_fixed, rational_to_f64};

/// Base-pairing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Purine/pyrimidine two-letter alphabet; every arc pairs R with Y.
    TwoLetter,
    /// Four letters, Watson-Crick pairs A-U and C-G.
    WatsonCrick,
    /// Watson-Crick plus the wobble pair U-G.
    Wobble,
}

#[derive(Debug, Clone, PartialEq)]
enum Ratios {
    TwoLetter(BigRational),
    /// (A, U, C, G) fractions summing to exactly 1.
    FourLetter([BigRational; 4]),
}

/// Largest tolerated |sum - 1| for four-letter inputs: published ratio
/// tables are rounded to a few decimals and their printed rows can miss the
/// simplex by an ulp or two.
fn simplex_slack() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(100))
}

/// A nucleotide frequency vector on the simplex, stored as exact rationals.
///
/// Components equal to 0 or 1, and rounded rows that miss the simplex sum by
/// up to 1/100, are accepted (published ratio tables contain both) but
/// flagged as boundary inputs, since the limit theorems assume components
/// strictly inside (0, 1) summing to exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioVector {
    ratios: Ratios,
    boundary: bool,
}

impl RatioVector {
    pub fn two_letter(p: BigRational) -> Result<Self, Error> {
        if p.is_negative() || p > BigRational::one() {
            return Err(Error::Ratio(format!("purine fraction {p} outside [0, 1]")));
        }
        let boundary = p.is_zero() || p.is_one();
        Ok(Self { ratios: Ratios::TwoLetter(p), boundary })
    }

    /// (A, U, C, G) fractions summing to 1 (exactly, or within the rounding
    /// slack of published tables).
    pub fn four_letter(p: [BigRational; 4]) -> Result<Self, Error> {
        let sum: BigRational = p.iter().sum();
        let gap = (sum - BigRational::one()).abs();
        if gap > simplex_slack() {
            return Err(Error::Ratio(format!(
                "ratios must sum to 1 (within rounding slack 1/100), off by {gap}"
            )));
        }
        if p.iter().any(|x| x.is_negative()) {
            return Err(Error::Ratio("negative ratio component".into()));
        }
        let boundary = !gap.is_zero() || p.iter().any(|x| x.is_zero() || x.is_one());
        Ok(Self { ratios: Ratios::FourLetter(p), boundary })
    }

    /// True when the input lies outside the open simplex the limit theorems
    /// assume: a component at 0 or 1, or a rounded row missing the sum.
    pub fn is_boundary(&self) -> bool {
        self.boundary
    }

    pub fn is_two_letter(&self) -> bool {
        matches!(self.ratios, Ratios::TwoLetter(_))
    }

    fn two(&self) -> Result<&BigRational, Error> {
        match &self.ratios {
            Ratios::TwoLetter(p) => Ok(p),
            Ratios::FourLetter(_) => Err(Error::ModeMismatch(
                "two-letter pairing needs a single purine fraction",
            )),
        }
    }

    fn four(&self) -> Result<&[BigRational; 4], Error> {
        match &self.ratios {
            Ratios::FourLetter(p) => Ok(p),
            Ratios::TwoLetter(_) => Err(Error::ModeMismatch(
                "Watson-Crick / wobble pairing needs four ratios",
            )),
        }
    }
}

fn floor_times(p: &BigRational, n: usize) -> BigInt {
    (p.numer() * BigInt::from(n)).div_floor(p.denom())
}

fn ceil_times(p: &BigRational, n: usize) -> BigInt {
    (p.numer() * BigInt::from(n)).div_ceil(p.denom())
}

/// Largest number of arcs a structure may have while still admitting a
/// compatible sequence with the given ratios.
///
/// Two-letter: min(floor(p n), ceil((1-p) n)).
/// Watson-Crick: l0 = min(a1, a2) + min(a3, a4) with a_i = floor(p_i n) for
/// i <= 3 and a4 = n - a1 - a2 - a3 (the fourth count is the remainder, not
/// floor(p4 n)).
/// Wobble: lbar0 = min(min(a1, a2) + a4, min(a3, a4) + a2).
pub fn max_compatible_arcs(
    ratios: &RatioVector,
    n: usize,
    pairing: Pairing,
) -> Result<usize, Error> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let cap = match pairing {
        Pairing::TwoLetter => {
            let p = ratios.two()?;
            let q = BigRational::one() - p;
            floor_times(p, n).min(ceil_times(&q, n))
        }
        Pairing::WatsonCrick | Pairing::Wobble => {
            let p = ratios.four()?;
            let a1 = floor_times(&p[0], n);
            let a2 = floor_times(&p[1], n);
            let a3 = floor_times(&p[2], n);
            let a4 = BigInt::from(n) - &a1 - &a2 - &a3;
            match pairing {
                Pairing::WatsonCrick => a1.clone().min(a2.clone()) + a3.clone().min(a4.clone()),
                Pairing::Wobble => {
                    (a1.clone().min(a2.clone()) + &a4).min(a3.min(a4) + &a2)
                }
                Pairing::TwoLetter => unreachable!(),
            }
        }
    };
    // zero arcs are compatible with any letter counts, so the cap never
    // drops below 0 even for off-simplex boundary inputs
    Ok(cap.max(BigInt::zero()).to_usize().expect("cap within 0..=n"))
}

/// The per-nucleotide pairing budget implied by the ratios: p itself for the
/// two-letter alphabet, p0 = min(p1,p2) + min(p3,p4) for Watson-Crick, and
/// pbar0 = min(min(p1,p2) + p4, min(p3,p4) + p2) with wobble pairs.
pub fn ratio_threshold(ratios: &RatioVector, pairing: Pairing) -> Result<BigRational, Error> {
    match pairing {
        Pairing::TwoLetter => Ok(ratios.two()?.clone()),
        Pairing::WatsonCrick => {
            let p = ratios.four()?;
            Ok(p[0].clone().min(p[1].clone()) + p[2].clone().min(p[3].clone()))
        }
        Pairing::Wobble => {
            let p = ratios.four()?;
            let wc_au = p[0].clone().min(p[1].clone()) + &p[3];
            let wc_cg = p[2].clone().min(p[3].clone()) + &p[1];
            Ok(wc_au.min(wc_cg))
        }
    }
}

/// Evaluation mode for [`compatible_fraction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Gaussian,
    Both,
}

/// Fraction of structures of length n that admit a compatible sequence.
#[derive(Debug, Clone)]
pub struct FractionResult {
    /// Exact value sum_{l <= cap} s(n,l) / s(n), when a table was supplied.
    pub exact: Option<BigRational>,
    /// Gaussian approximation Phi((p* - mu) sqrt(n) / sigma).
    pub gaussian: Option<f64>,
    /// |exact - gaussian| when both were computed.
    pub abs_diff: Option<f64>,
    /// The integer arc cap used by the exact route.
    pub threshold_l: usize,
    /// The threshold p* used by the Gaussian route.
    pub threshold_p: BigRational,
}

/// Compute the compatible fraction exactly (from a count table), via the
/// Gaussian limit (from CLT parameters), or both.
pub fn compatible_fraction(
    ratios: &RatioVector,
    n: usize,
    pairing: Pairing,
    method: Method,
    table: Option<&ArcCountTable>,
    clt: Option<&CltParams>,
) -> Result<FractionResult, Error> {
    if n == 0 {
        return Err(Error::Domain("fraction undefined at n = 0".into()));
    }
    if let (Some(t), Some(c)) = (table, clt) {
        if t.class() != c.class() {
            return Err(Error::Domain(format!(
                "table class {} does not match CLT class {}",
                t.class(),
                c.class()
            )));
        }
    }
    let threshold_l = max_compatible_arcs(ratios, n, pairing)?;
    let threshold_p = ratio_threshold(ratios, pairing)?;

    let exact = if matches!(method, Method::Exact | Method::Both) {
        let table = table.ok_or(Error::MissingInput("count table"))?;
        Some(table.arc_cdf(n, threshold_l)?)
    } else {
        None
    };
    let gaussian = if matches!(method, Method::Gaussian | Method::Both) {
        let clt = clt.ok_or(Error::MissingInput("CLT parameters"))?;
        let p_star = rational_to_f64(&threshold_p);
        Some(gaussian_cdf((p_star - clt.mu) * (n as f64).sqrt() / clt.sigma()))
    } else {
        None
    };
    let abs_diff = match (&exact, gaussian) {
        (Some(e), Some(g)) => Some((rational_to_f64(e) - g).abs()),
        _ => None,
    };

    Ok(FractionResult { exact, gaussian, abs_diff, threshold_l, threshold_p })
}

/// One point of a fraction-vs-p curve.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub p: BigRational,
    pub exact: Option<BigRational>,
    pub gaussian: Option<f64>,
}

/// CSV emitter for fraction-vs-p curves: columns
/// `p,fraction_exact,fraction_gaussian` (missing values left empty).
pub fn write_fraction_curve_csv<W: Write>(w: &mut W, points: &[CurvePoint]) -> Result<(), Error> {
    writeln!(w, "p,fraction_exact,fraction_gaussian")?;
    for pt in points {
        let exact = pt
            .exact
            .as_ref()
            .map(|e| format!("{:.12}", rational_to_f64(e)))
            .unwrap_or_default();
        let gaussian = pt.gaussian.map(|g| format!("{g:.12}")).unwrap_or_default();
        writeln!(w, "{},{exact},{gaussian}", decimal_string(&pt.p, 9))?;
    }
    Ok(())
}

/// Read a ratios CSV with header `name,pA,pU,pC,pG` and emit
/// `name,p0,pbar0` with both thresholds at 3 decimals.
pub fn write_thresholds_csv<R: Read, W: Write>(input: R, w: &mut W) -> Result<(), Error> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    writeln!(w, "name,p0,pbar0")?;
    for record in reader.records() {
        let record = record?;
        if record.len() != 5 {
            return Err(Error::Ratio(format!(
                "expected 5 columns name,pA,pU,pC,pG, got {}",
                record.len()
            )));
        }
        let name = record.get(0).unwrap();
        let mut p = Vec::with_capacity(4);
        for field in record.iter().skip(1) {
            p.push(crate::util::parse_decimal_rational(field)?);
        }
        let rv = RatioVector::four_letter([p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()])?;
        let p0 = ratio_threshold(&rv, Pairing::WatsonCrick)?;
        let pbar0 = ratio_threshold(&rv, Pairing::Wobble)?;
        writeln!(w, "{name},{},{}", decimal_string_fixed(&p0, 3), decimal_string_fixed(&pbar0, 3))?;
    }
    Ok(())
}
