//! Characters of `Z_q^n`, the Fourier transform and spectra.
//!
//! With `w = exp(2 pi i / q)` and `chi_u(x) = w^<u,x>`, the coefficients are
//! `f^(u) = <f, chi_u> = q^-n sum_x f(x) conj(chi_u(x))`, so that
//! `f = sum_u f^(u) chi_u`. The transform runs as `n` axis passes of a
//! `q`-point DFT, `O(n q^(n+1))` in total.

mod cyclotomic;

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CyclotomicInt, CyclotomicReducer};

use crate::qary_domain::{neighbor_indices, point_to_index, DomainParams, FunctionTable, Point, ValueMode, Values};
use crate::{Error, Result};

/// Absolute per-coefficient tolerance below which a coefficient counts as zero.
pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-9;

/// `w^j` for `j = 0..q`.
pub fn roots_of_unity(q: u32) -> Vec<Complex64> {
    let step = std::f64::consts::TAU / q as f64;
    (0..q).map(|j| Complex64::from_polar(1.0, step * j as f64)).collect()
}

pub fn char_value(u: &Point, x: &Point, params: &DomainParams) -> Result<Complex64> {
    let e = crate::qary_domain::dot_mod_q(u, x, params)?;
    Ok(Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / params.q() as f64))
}

/// The character `chi_u` as a complex table.
pub fn character_table(u: &Point, params: &DomainParams) -> Result<FunctionTable> {
    let ui = point_to_index(u, params)?;
    let roots = roots_of_unity(params.q());
    let values = (0..params.size()).map(|x| roots[params.dot_indices(ui, x) as usize]).collect();
    FunctionTable::from_complex(*params, values)
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

/// One `q`-point DFT along every axis in turn. Each output entry is a fixed
/// ordered sum, so the result does not depend on how rayon splits the work.
fn tensor_transform(params: &DomainParams, input: Vec<Complex64>, dir: Direction) -> Vec<Complex64> {
    let q = params.q() as usize;
    let roots = roots_of_unity(params.q());
    let scale = match dir {
        Direction::Forward => 1.0 / q as f64,
        Direction::Inverse => 1.0,
    };
    let mut data = input;
    for axis in 0..params.n() {
        let stride = params.stride(axis);
        let src = &data;
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        out.par_iter_mut().enumerate().for_each(|(idx, slot)| {
            let u = (idx / stride) % q;
            let base = idx - u * stride;
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..q {
                let e = (u * s) % q;
                let e = match dir {
                    Direction::Forward => (q - e) % q,
                    Direction::Inverse => e,
                };
                acc += src[base + s * stride] * roots[e];
            }
            *slot = acc * scale;
        });
        data = out;
    }
    data
}

/// Fourier coefficients of a table, indexed like the table itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    params: DomainParams,
    coeffs: Vec<Complex64>,
    zero_tolerance: f64,
}

impl SpectrumTable {
    pub fn new(params: DomainParams, coeffs: Vec<Complex64>, zero_tolerance: f64) -> Result<Self> {
        if coeffs.len() != params.size() {
            return Err(Error::LengthMismatch { expected: params.size(), actual: coeffs.len() });
        }
        check_tolerance(zero_tolerance)?;
        Ok(Self { params, coeffs, zero_tolerance })
    }

    pub fn params(&self) -> &DomainParams {
        &self.params
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficient(&self, u: &Point) -> Result<Complex64> {
        Ok(self.coeffs[point_to_index(u, &self.params)?])
    }

    pub fn zero_tolerance(&self) -> f64 {
        self.zero_tolerance
    }

    pub fn is_zero_at(&self, index: usize) -> bool {
        self.coeffs[index].norm() <= self.zero_tolerance
    }

    /// `sum_u |f^(u)|^2`, summed in index order.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `sum_u |u| |f^(u)|^2`.
    pub fn weighted_mass(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(u, c)| self.params.weight_of_index(u) as f64 * c.norm_sqr()).sum()
    }

    /// Largest coefficient modulus among weights outside `[k, m]`.
    pub fn max_outside_window(&self, k: usize, m: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(u, _)| {
                let w = self.params.weight_of_index(*u);
                w < k || w > m
            })
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

fn check_tolerance(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("zero tolerance must be finite and nonnegative, got {t}")))
    }
}

pub fn transform(f: &FunctionTable, zero_tolerance: f64) -> Result<SpectrumTable> {
    check_tolerance(zero_tolerance)?;
    let coeffs = tensor_transform(f.params(), f.to_complex_vec(), Direction::Forward);
    Ok(SpectrumTable { params: *f.params(), coeffs, zero_tolerance })
}

pub fn inverse_transform(s: &SpectrumTable) -> FunctionTable {
    let values = tensor_transform(&s.params, s.coeffs.clone(), Direction::Inverse);
    FunctionTable::from_complex(s.params, values).expect("length preserved")
}

/// `<f, g> = q^-n sum_x f(x) conj(g(x))`.
pub fn inner_product(f: &FunctionTable, g: &FunctionTable) -> Result<Complex64> {
    if f.params() != g.params() {
        return Err(Error::MismatchedParams);
    }
    let s: Complex64 = (0..f.len()).map(|x| f.value(x) * g.value(x).conj()).sum();
    Ok(s / f.len() as f64)
}

/// The spectrum `{ |u| : f^(u) != 0 }` together with its extremes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub weight_support: BTreeSet<usize>,
    pub degree: Option<usize>,
    /// Smallest nonzero weight in the spectrum (`d'`).
    pub min_nonzero_weight: Option<usize>,
    /// Largest weight in the spectrum (`d`); equals `degree`.
    pub max_weight: Option<usize>,
}

impl SpectrumReport {
    pub fn from_weights(weights: impl IntoIterator<Item = usize>) -> Self {
        let weight_support: BTreeSet<usize> = weights.into_iter().collect();
        let degree = weight_support.iter().next_back().copied();
        let min_nonzero_weight = weight_support.iter().copied().find(|&w| w > 0);
        Self { weight_support, degree, min_nonzero_weight, max_weight: degree }
    }

    /// Whether every weight in the spectrum lies in `allowed`.
    pub fn is_subset_of(&self, allowed: &BTreeSet<usize>) -> bool {
        self.weight_support.is_subset(allowed)
    }
}

pub fn spectrum_report(s: &SpectrumTable) -> SpectrumReport {
    SpectrumReport::from_weights((0..s.coeffs.len()).filter(|&u| !s.is_zero_at(u)).map(|u| s.params.weight_of_index(u)))
}

/// Zeroes every coefficient whose weight falls outside `[k, m]`.
pub fn project_weights(s: &SpectrumTable, k: usize, m: usize) -> Result<SpectrumTable> {
    if k > m || m > s.params.n() {
        return Err(Error::InvalidWindow { k, m, n: s.params.n() });
    }
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(u, &c)| {
            let w = s.params.weight_of_index(u);
            if (k..=m).contains(&w) {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(SpectrumTable { params: s.params, coeffs, zero_tolerance: s.zero_tolerance })
}

/// `(A f)(x) = sum over neighbours y of f(y)`.
pub fn adjacency_apply(f: &FunctionTable) -> FunctionTable {
    let params = *f.params();
    match f.values() {
        Values::Int(v) => {
            let out: Vec<i64> =
                (0..params.size()).into_par_iter().map(|x| neighbor_indices(x, &params).map(|y| v[y]).sum()).collect();
            FunctionTable::with_values_unchecked(params, ValueMode::Integer, Values::Int(out))
        }
        Values::Complex(v) => {
            let out: Vec<Complex64> =
                (0..params.size()).into_par_iter().map(|x| neighbor_indices(x, &params).map(|y| v[y]).sum()).collect();
            FunctionTable::with_values_unchecked(params, ValueMode::Complex, Values::Complex(out))
        }
    }
}

/// `lambda_k(n, q) = n(q-1) - qk`.
pub fn lambda_k(n: usize, q: u32, k: usize) -> Result<i64> {
    if q < 2 {
        return Err(Error::InvalidDomain(format!("q must be at least 2, got {q}")));
    }
    if k > n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds n = {n}")));
    }
    Ok(n as i64 * (q as i64 - 1) - q as i64 * k as i64)
}

fn require_integer(f: &FunctionTable) -> Result<&[i64]> {
    f.int_values().ok_or(Error::WrongMode { expected: "integer-valued", actual: f.mode().name() })
}

/// `q^n f^(u)` as an element of `Z[w]`: `counts[j]` sums `f(x)` over the `x`
/// with `<u,x> = -j (mod q)`.
pub fn exact_coefficient(f: &FunctionTable, u: &Point) -> Result<CyclotomicInt> {
    let values = require_integer(f)?;
    let params = f.params();
    let ui = point_to_index(u, params)?;
    let q = params.q() as usize;
    let mut counts = vec![0i64; q];
    for (x, &v) in values.iter().enumerate() {
        let e = params.dot_indices(ui, x) as usize;
        counts[(q - e) % q] += v;
    }
    Ok(CyclotomicInt::new(params.q(), counts))
}

pub fn exact_coefficient_is_zero(f: &FunctionTable, u: &Point) -> Result<bool> {
    Ok(exact_coefficient(f, u)?.is_zero())
}

/// All unnormalised coefficients `q^n f^(u)` in `Z[w]`, via the same axis
/// passes as [`transform`] but over `Z[x]/(x^q - 1)`. Returned flat: entry
/// `u` occupies `[u*q, (u+1)*q)`.
pub fn exact_coefficient_counts(f: &FunctionTable) -> Result<Vec<i64>> {
    let values = require_integer(f)?;
    Ok(exact_counts_from_ints(f.params(), values))
}

pub(crate) fn exact_counts_from_ints(params: &DomainParams, values: &[i64]) -> Vec<i64> {
    let q = params.q() as usize;
    let mut data = vec![0i64; values.len() * q];
    for (x, &v) in values.iter().enumerate() {
        data[x * q] = v;
    }
    for axis in 0..params.n() {
        let stride = params.stride(axis);
        let src = &data;
        let mut out = vec![0i64; data.len()];
        out.par_chunks_mut(q).enumerate().for_each(|(idx, slot)| {
            let u = (idx / stride) % q;
            let base = idx - u * stride;
            for s in 0..q {
                // multiply by x^{-us}
                let shift = (q - (u * s) % q) % q;
                let from = &src[(base + s * stride) * q..(base + s * stride + 1) * q];
                for t in 0..q {
                    slot[(t + shift) % q] += from[t];
                }
            }
        });
        data = out;
    }
    data
}

pub fn exact_coefficients(f: &FunctionTable) -> Result<Vec<CyclotomicInt>> {
    let q = f.params().q();
    Ok(exact_coefficient_counts(f)?.chunks(q as usize).map(|c| CyclotomicInt::new(q, c.to_vec())).collect())
}

/// The spectrum of an integer table decided by exact zero-tests.
pub fn exact_spectrum_report(f: &FunctionTable) -> Result<SpectrumReport> {
    let counts = exact_coefficient_counts(f)?;
    let params = f.params();
    let reducer = CyclotomicReducer::new(params.q());
    Ok(SpectrumReport::from_weights(
        counts
            .chunks(params.q() as usize)
            .enumerate()
            .filter(|(_, c)| !reducer.is_zero(c))
            .map(|(u, _)| params.weight_of_index(u)),
    ))
}

/// `sum_u |f^(u)|^2` for a Boolean table in its `{-1, +1}` form; equals 1.
pub fn parseval_check(f: &FunctionTable) -> Result<f64> {
    let f = f.to_pm1()?;
    Ok(transform(&f, DEFAULT_ZERO_TOLERANCE)?.norm_sq())
}
