//! Smallest supports of functions whose spectrum lies in a weight window.
//!
//! For a window `[k, m]` the functions with `f^(u) = 0` whenever
//! `|u| ∉ [k, m]` form a subspace cut out by linear constraints over
//! `Q(w)`. Writing each `w^j` in the power basis of `Q(w)` turns every
//! constraint into `phi(q)` rational ones. The window is closed under
//! `u -> -u`, so real and rational solutions decide feasibility: a support
//! set `S` carries a nonzero solution iff the constraint columns indexed by
//! `S` are linearly dependent.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::symmetry::SymmetryGroup;
use super::Witness;
use crate::boundary::support;
use crate::bounds::support_lower_bound;
use crate::fourier::{exact_spectrum_report, CyclotomicReducer};
use crate::qary_domain::{DomainParams, FunctionTable, ValueMode};
use crate::{Error, Result};

const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    /// Skip support sets that are not smallest in their symmetry orbit.
    pub symmetry_reduction: bool,
    /// Largest `q^n` accepted.
    pub max_domain: usize,
    /// Cap on the number of support sets examined.
    pub max_candidates: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { symmetry_reduction: true, max_domain: 64, max_candidates: 50_000_000 }
    }
}

/// Integer matrix whose rows span the window constraints; column `x` is
/// the point with index `x`.
fn constraint_basis(params: &DomainParams, k: usize, m: usize) -> Vec<Vec<BigInt>> {
    let q = params.q() as usize;
    let reducer = CyclotomicReducer::new(params.q());
    let weights = params.weights();
    let points = params.size();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for u in (0..points).filter(|&u| weights[u] < k || weights[u] > m) {
        let mut expanded = vec![vec![BigRational::zero(); points]; reducer.degree()];
        for (x, col) in (0..points).map(|x| (x, (q - params.dot_indices(u, x) as usize) % q)) {
            for (j, &c) in reducer.power_basis(col).iter().enumerate() {
                expanded[j][x] = BigRational::from_integer(c.into());
            }
        }
        rows.extend(expanded);
    }
    row_echelon(&mut rows);
    rows.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())).map(|r| primitive(&r)).collect()
}

/// Reduces in place to row echelon form and returns the pivot columns.
fn row_echelon(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|v| *v *= &inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Clears denominators and common factors.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Rank by fraction-free elimination in `i128`; `None` on overflow.
fn rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in c + 1..cols {
                let v = a[rank][c].checked_mul(a[i][j])?.checked_sub(a[i][c].checked_mul(a[rank][j])?)?;
                a[i][j] = v / prev;
            }
            a[i][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    Some(rank)
}

fn rank_big(a: &[Vec<BigInt>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    row_echelon(&mut rows).len()
}

struct Feasibility {
    basis: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i128>>>,
}

impl Feasibility {
    fn new(basis: Vec<Vec<BigInt>>) -> Self {
        let small = basis.iter().map(|r| r.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()).collect();
        Self { basis, small }
    }

    fn columns_dependent(&self, subset: &[usize]) -> bool {
        if subset.len() > self.basis.len() {
            return true;
        }
        if let Some(small) = &self.small {
            let sub = small.iter().map(|r| subset.iter().map(|&x| r[x]).collect()).collect();
            if let Some(rank) = rank_i128(sub) {
                return rank < subset.len();
            }
        }
        let sub: Vec<Vec<BigInt>> = self.basis.iter().map(|r| subset.iter().map(|&x| r[x].clone()).collect()).collect();
        rank_big(&sub) < subset.len()
    }

    /// A primitive integer vector in the kernel of the columns in `subset`.
    fn kernel_vector(&self, subset: &[usize]) -> Vec<BigInt> {
        let mut rows: Vec<Vec<BigRational>> = self
            .basis
            .iter()
            .map(|r| subset.iter().map(|&x| BigRational::from_integer(r[x].clone())).collect())
            .collect();
        let pivots = row_echelon(&mut rows);
        let free = (0..subset.len()).find(|c| !pivots.contains(c)).expect("dependent columns");
        let mut v = vec![BigRational::zero(); subset.len()];
        v[free] = BigRational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][free].clone();
        }
        let mut v = primitive(&v);
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        v
    }
}

fn check_window(k: usize, m: usize, n: usize, q: u32) -> Result<()> {
    if k > m || m > n || k + m > n {
        return Err(Error::InvalidWindow { k, m, n });
    }
    if q < 3 {
        return Err(Error::AlphabetTooSmall(q));
    }
    Ok(())
}

/// Smallest support of a nonzero function with spectrum inside `[k, m]`.
///
/// Support sets are tried by size, then lexicographically; the witness is
/// the primitive integer function on the first feasible set, which is the
/// same with or without symmetry reduction.
pub fn min_support_search(k: usize, m: usize, n: usize, q: u32, opts: &SearchOptions) -> Result<Witness> {
    check_window(k, m, n, q)?;
    let params = DomainParams::new(n, q)?;
    let points = params.size();
    if points > opts.max_domain {
        return Err(Error::LimitExceeded(format!("{points} points exceed the search limit {}", opts.max_domain)));
    }
    let target = support_lower_bound(k, m, n, q)?.to_u64().unwrap_or(u64::MAX);
    let group = if opts.symmetry_reduction { Some(SymmetryGroup::new(params)?) } else { None };
    let feas = Feasibility::new(constraint_basis(&params, k, m));

    let mut examined = 0u64;
    for size in 1..=points {
        let mut combos = (0..points).combinations(size);
        loop {
            let block: Vec<Vec<usize>> = combos.by_ref().take(BLOCK).collect();
            if block.is_empty() {
                break;
            }
            examined += block.len() as u64;
            if examined > opts.max_candidates {
                return Err(Error::LimitExceeded(format!("more than {} support sets examined", opts.max_candidates)));
            }
            let hit = block
                .par_iter()
                .find_first(|s| group.as_ref().is_none_or(|g| g.is_canonical_subset(s)) && feas.columns_dependent(s));
            if let Some(subset) = hit {
                let table = witness_table(&params, subset, &feas.kernel_vector(subset))?;
                let achieved = support(&table).len() as u64;
                let spectrum = exact_spectrum_report(&table)?;
                if achieved != size as u64 || spectrum.weight_support.iter().any(|&w| w < k || w > m) {
                    return Err(Error::Inconsistent(format!("witness on {subset:?} failed re-verification")));
                }
                return Ok(Witness { table, achieved, target });
            }
        }
    }
    Err(Error::Inconsistent(format!("no nonzero function found for window [{k}, {m}]")))
}

fn witness_table(params: &DomainParams, subset: &[usize], v: &[BigInt]) -> Result<FunctionTable> {
    let mut values = vec![0i64; params.size()];
    for (&x, c) in subset.iter().zip(v) {
        values[x] = c.to_i64().ok_or_else(|| Error::LimitExceeded("witness value does not fit i64".into()))?;
    }
    FunctionTable::from_ints(*params, ValueMode::Integer, values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessRecord {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub q: u32,
    #[serde(serialize_with = "serialize_biguint")]
    pub lower_bound: BigUint,
    pub minimum_found: u64,
    pub sharp: bool,
    pub witness: Witness,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.collect_str(v),
    }
}

/// Compares the searched minimum with the lower bound; a minimum below the
/// bound is reported as [`Error::TheoremViolation`].
pub fn sharpness_audit(k: usize, m: usize, n: usize, q: u32, opts: &SearchOptions) -> Result<SharpnessRecord> {
    let witness = min_support_search(k, m, n, q, opts)?;
    let lower_bound = support_lower_bound(k, m, n, q)?;
    let found = BigUint::from(witness.achieved);
    if found < lower_bound {
        return Err(Error::TheoremViolation(format!(
            "support {found} below the lower bound {lower_bound} for (k, m, n, q) = ({k}, {m}, {n}, {q})"
        )));
    }
    Ok(SharpnessRecord {
        k,
        m,
        n,
        q,
        sharp: found == lower_bound,
        minimum_found: witness.achieved,
        lower_bound,
        witness,
    })
}
