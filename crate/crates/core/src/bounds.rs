//! Closed-form bounds in exact rational arithmetic, and the audit of a
//! Boolean table against the relevant-variable bound.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::boundary::relevant_indices;
use crate::fourier::{exact_spectrum_report, SpectrumReport};
use crate::qary_domain::{DomainParams, FunctionTable};
use crate::{Error, Result};

fn pow(base: u64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// `(d/2) q^(d+d') / (2^d' (q-1)^d')`.
pub fn main_bound(d_prime: usize, d: usize, q: u32) -> Result<BigRational> {
    if q < 3 {
        return Err(Error::AlphabetTooSmall(q));
    }
    if d_prime < 1 || d_prime > d {
        return Err(Error::OutOfRange(format!("need 1 <= d' <= d, got d' = {d_prime}, d = {d}")));
    }
    let q = q as u64;
    let num = BigInt::from(d) * pow(q, d + d_prime);
    let den = BigInt::from(2) * pow(2, d_prime) * pow(q - 1, d_prime);
    Ok(BigRational::new(num, den))
}

/// `2^k (q-1)^k q^(n-k-m)`, the smallest possible support of a nonzero
/// function whose spectrum lies in `[k, m]`.
pub fn support_lower_bound(k: usize, m: usize, n: usize, q: u32) -> Result<BigUint> {
    if q < 3 {
        return Err(Error::AlphabetTooSmall(q));
    }
    if k > m {
        return Err(Error::InvalidWindow { k, m, n });
    }
    if k + m > n {
        return Err(Error::OutOfRange(format!("support bound needs k + m <= n, got {k} + {m} > {n}")));
    }
    let q = q as u64;
    let v = pow(2, k) * pow(q - 1, k) * pow(q, n - k - m);
    Ok(v.to_biguint().expect("positive"))
}

/// `(d/4) q^(n+1)`, the largest edge boundary of a Boolean function of
/// degree at most `d`.
pub fn edge_upper_bound(d: usize, n: usize, q: u32) -> Result<BigRational> {
    if d < 1 || d > n {
        return Err(Error::OutOfRange(format!("need 1 <= d <= n, got d = {d}, n = {n}")));
    }
    Ok(BigRational::new(BigInt::from(d) * pow(q as u64, n + 1), BigInt::from(4)))
}

/// `ceil(log2 q)` by bit arithmetic.
pub fn ceil_log2(q: u32) -> u32 {
    assert!(q >= 1);
    32 - (q - 1).leading_zeros()
}

/// `4.394 * 2^(ceil(log2 q) d)`, with the constant taken as `4394/1000`.
pub fn wellens_bound(d: usize, q: u32) -> Result<BigRational> {
    if d < 1 || q < 2 {
        return Err(Error::OutOfRange(format!("need d >= 1 and q >= 2, got d = {d}, q = {q}")));
    }
    let p = pow(2, ceil_log2(q) as usize * d);
    Ok(BigRational::new(BigInt::from(4394) * p, BigInt::from(1000)))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Winner {
    Main,
    Wellens,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeComparison {
    pub d_prime: usize,
    pub d: usize,
    pub q: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub wellens: BigRational,
    pub winner: Winner,
    /// `d' > (d / 8.788) q / (q - 2)`, checked as `8788 d' (q-2) > 1000 d q`.
    pub dprime_criterion: bool,
}

pub fn compare_regimes(d_prime: usize, d: usize, q: u32) -> Result<RegimeComparison> {
    let bound = main_bound(d_prime, d, q)?;
    let wellens = wellens_bound(d, q)?;
    let winner = if bound < wellens { Winner::Main } else { Winner::Wellens };
    let lhs = 8788u128 * d_prime as u128 * (q as u128 - 2);
    let rhs = 1000u128 * d as u128 * q as u128;
    Ok(RegimeComparison { d_prime, d, q, bound, wellens, winner, dprime_criterion: lhs > rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub q: u32,
    pub d_prime: Option<usize>,
    pub d: Option<usize>,
    /// `q >= 3`, `d >= 1` and `d' + d <= n + 1`.
    pub applicable: bool,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub bound_main: Option<BigRational>,
    #[serde(serialize_with = "serialize_opt_biguint")]
    pub bound_floor: Option<BigUint>,
    /// Number of relevant coordinates (`n'`).
    pub relevant_count: usize,
    pub verdict: Verdict,
}

impl BoundReport {
    /// Verdict for `relevant_count` coordinates against the bound for the
    /// spectrum extremes `d'` and `d`.
    pub fn evaluate(
        params: &DomainParams,
        d_prime: Option<usize>,
        d: Option<usize>,
        relevant_count: usize,
    ) -> Result<Self> {
        params.require_bound_alphabet()?;
        let (n, q) = (params.n(), params.q());
        let mut report = BoundReport {
            n,
            q,
            d_prime,
            d,
            applicable: false,
            bound_main: None,
            bound_floor: None,
            relevant_count,
            verdict: Verdict::NotApplicable,
        };
        if let (Some(dp), Some(dd)) = (d_prime, d) {
            if dd >= 1 && dp + dd <= n + 1 {
                let b = main_bound(dp, dd, q)?;
                report.applicable = true;
                report.verdict = if BigRational::from_integer(BigInt::from(relevant_count)) <= b {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                report.bound_floor = b.floor().to_integer().to_biguint();
                report.bound_main = Some(b);
            }
        }
        Ok(report)
    }
}

/// Audits a Boolean table: spectrum extremes by exact zero-tests, relevant
/// coordinates by slice comparison.
pub fn audit_function(f: &FunctionTable) -> Result<BoundReport> {
    f.params().require_bound_alphabet()?;
    let f = f.to_pm1()?;
    let spectrum = exact_spectrum_report(&f)?;
    audit_with_spectrum(&f, &spectrum)
}

pub fn audit_with_spectrum(f: &FunctionTable, spectrum: &SpectrumReport) -> Result<BoundReport> {
    let relevant = relevant_indices(f).len();
    // a constant has spectrum {0}: no nonzero weight, not applicable
    BoundReport::evaluate(f.params(), spectrum.min_nonzero_weight, spectrum.degree, relevant)
}

/// `{"num": .., "den": .., "float": ..}` with decimal-string integers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRational {
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl From<&BigRational> for ExactRational {
    fn from(r: &BigRational) -> Self {
        Self { num: r.numer().to_string(), den: r.denom().to_string(), float: to_f64(r) }
    }
}

pub fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    ExactRational::from(r).serialize(s)
}

fn serialize_opt_rational<S: Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    r.as_ref().map(ExactRational::from).serialize(s)
}

fn serialize_opt_biguint<S: Serializer>(r: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    r.as_ref().map(|v| v.to_string()).serialize(s)
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
