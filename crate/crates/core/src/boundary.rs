//! Edge boundaries, restrictions `f_{i,a,b}`, supports and relevant
//! coordinates.

use rayon::prelude::*;
use serde::Serialize;

use crate::fourier::{transform, DEFAULT_ZERO_TOLERANCE};
use crate::qary_domain::{edges, DomainParams, FunctionTable, ValueMode, Values};
use crate::{Error, Result};

/// Indices `x` with `f(x) != 0`, ascending.
pub fn support(f: &FunctionTable) -> Vec<usize> {
    (0..f.len()).filter(|&x| f.is_nonzero_at(x, DEFAULT_ZERO_TOLERANCE)).collect()
}

fn check_restriction_args(params: &DomainParams, axis: usize, a: u32, b: u32) -> Result<()> {
    params.check_axis(axis)?;
    params.check_symbol(a)?;
    params.check_symbol(b)?;
    if a == b {
        return Err(Error::EqualSymbols(a));
    }
    Ok(())
}

/// Index in `Z_q^n` of the point obtained by inserting `symbol` at `axis`
/// into the point of `Z_q^(n-1)` stored at `y`.
fn lift(params: &DomainParams, axis: usize, symbol: u32, y: usize) -> usize {
    let stride = params.stride(axis);
    let high = y / stride;
    let low = y % stride;
    (high * params.q() as usize + symbol as usize) * stride + low
}

/// `f_{i,a,b}(y) = f(y with a at i) - f(y with b at i)`, on `Z_q^(n-1)`.
pub fn restriction(f: &FunctionTable, axis: usize, a: u32, b: u32) -> Result<FunctionTable> {
    let params = f.params();
    check_restriction_args(params, axis, a, b)?;
    let sub = params.without_axis();
    let values = match f.values() {
        Values::Int(v) => {
            Values::Int((0..sub.size()).map(|y| v[lift(params, axis, a, y)] - v[lift(params, axis, b, y)]).collect())
        }
        Values::Complex(v) => Values::Complex(
            (0..sub.size()).map(|y| v[lift(params, axis, a, y)] - v[lift(params, axis, b, y)]).collect(),
        ),
    };
    let mode = match values {
        Values::Int(_) => ValueMode::Integer,
        Values::Complex(_) => ValueMode::Complex,
    };
    Ok(FunctionTable::with_values_unchecked(sub, mode, values))
}

/// Number of edges of `H(n, q)` across which `f` changes value.
pub fn nu(f: &FunctionTable) -> u64 {
    let params = *f.params();
    (0..params.size())
        .into_par_iter()
        .map(|x| {
            let mut count = 0u64;
            for axis in 0..params.n() {
                let stride = params.stride(axis);
                let own = params.digit(x, axis) as usize;
                for s in own + 1..params.q() as usize {
                    if f.differs(x, x + (s - own) * stride, DEFAULT_ZERO_TOLERANCE) {
                        count += 1;
                    }
                }
            }
            count
        })
        .sum()
}

/// Sequential edge-stream count, used to cross-check [`nu`].
pub fn nu_by_edge_stream(f: &FunctionTable) -> u64 {
    edges(f.params()).filter(|&(x, y)| f.differs(x, y, DEFAULT_ZERO_TOLERANCE)).count() as u64
}

/// Edges `{x, y}` with `x_i = a`, `y_i = b` and `f(x) != f(y)`.
pub fn nu_iab(f: &FunctionTable, axis: usize, a: u32, b: u32) -> Result<u64> {
    let params = f.params();
    check_restriction_args(params, axis, a, b)?;
    let sub = params.without_axis();
    Ok((0..sub.size())
        .filter(|&y| f.differs(lift(params, axis, a, y), lift(params, axis, b, y), DEFAULT_ZERO_TOLERANCE))
        .count() as u64)
}

/// `(q^(n+1) / 4) sum_u |u| |f^(u)|^2` for the `{-1, +1}` form of a Boolean
/// table.
pub fn nu_via_fourier(f: &FunctionTable) -> Result<f64> {
    let f = f.to_pm1()?;
    let s = transform(&f, DEFAULT_ZERO_TOLERANCE)?;
    let p = f.params();
    Ok((p.q() as f64).powi(p.n() as i32 + 1) / 4.0 * s.weighted_mass())
}

fn slices_equal(f: &FunctionTable, axis: usize, a: u32, b: u32) -> bool {
    let params = f.params();
    let sub = params.without_axis();
    (0..sub.size()).all(|y| !f.differs(lift(params, axis, a, y), lift(params, axis, b, y), DEFAULT_ZERO_TOLERANCE))
}

pub fn is_relevant(f: &FunctionTable, axis: usize) -> Result<bool> {
    f.params().check_axis(axis)?;
    Ok((1..f.params().q()).any(|b| !slices_equal(f, axis, 0, b)))
}

/// Zero-based axes on which `f` depends.
pub fn relevant_indices(f: &FunctionTable) -> Vec<usize> {
    (0..f.params().n()).filter(|&axis| is_relevant(f, axis).expect("axis in range")).collect()
}

/// Partition of the alphabet at one coordinate into classes of symbols
/// with identical slices (`f_{i,a,b} = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateClasses {
    pub axis: usize,
    /// Classes ordered by smallest member; members ascending.
    pub classes: Vec<Vec<u32>>,
    pub class_sizes: Vec<usize>,
}

impl CoordinateClasses {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Unordered symbol pairs in different classes, `sum_{r<s} q_r q_s`.
    pub fn cross_pairs(&self) -> usize {
        let total: usize = self.class_sizes.iter().sum();
        let same: usize = self.class_sizes.iter().map(|s| s * (s - 1) / 2).sum();
        total * (total - 1) / 2 - same
    }
}

pub fn coordinate_classes(f: &FunctionTable, axis: usize) -> Result<CoordinateClasses> {
    f.params().check_axis(axis)?;
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for s in 0..f.params().q() {
        match classes.iter_mut().find(|c| slices_equal(f, axis, c[0], s)) {
            Some(c) => c.push(s),
            None => classes.push(vec![s]),
        }
    }
    let class_sizes = classes.iter().map(Vec::len).collect();
    Ok(CoordinateClasses { axis, classes, class_sizes })
}

/// `sum_{a<b} |S(f_{i,a,b})|` at one coordinate.
pub fn restriction_support_sum(f: &FunctionTable, axis: usize) -> Result<u64> {
    let q = f.params().q();
    let mut total = 0;
    for a in 0..q {
        for b in a + 1..q {
            total += support(&restriction(f, axis, a, b)?).len() as u64;
        }
    }
    Ok(total)
}
