//! Points of `Z_q^n`, mixed-radix indexing and the Hamming graph `H(n, q)`.
//!
//! Every table in the crate is laid out in mixed-radix order with coordinate
//! 1 (axis 0) most significant, so the point `(x_1, ..., x_n)` lives at index
//! `sum_i x_i * q^(n - i)`. Axes are zero-based in the API; reports render
//! them one-based.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Largest number of table entries a domain may have.
pub const INDEX_CAPACITY: usize = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DomainParams {
    n: usize,
    q: u32,
    #[serde(skip)]
    size: usize,
}

impl DomainParams {
    pub fn new(n: usize, q: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDomain("n must be at least 1".into()));
        }
        Self::with_zero_dim(n, q)
    }

    /// Like [`DomainParams::new`] but admits `n = 0`, the one-point domain
    /// that restrictions of one-coordinate tables live on.
    pub(crate) fn with_zero_dim(n: usize, q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidDomain(format!("q must be at least 2, got {q}")));
        }
        let mut size: usize = 1;
        for _ in 0..n {
            size = size
                .checked_mul(q as usize)
                .filter(|&s| s <= INDEX_CAPACITY)
                .ok_or(Error::CapacityExceeded { n, q })?;
        }
        Ok(Self { n, q, size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Rejects `q = 2`; the relevant-variable bounds are stated for `q >= 3`.
    pub fn require_bound_alphabet(&self) -> Result<()> {
        if self.q < 3 {
            Err(Error::AlphabetTooSmall(self.q))
        } else {
            Ok(())
        }
    }

    /// Index distance between points differing by one in coordinate `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        (self.q as usize).pow((self.n - 1 - axis) as u32)
    }

    pub fn digit(&self, index: usize, axis: usize) -> u32 {
        ((index / self.stride(axis)) % self.q as usize) as u32
    }

    pub fn check_axis(&self, axis: usize) -> Result<()> {
        if axis < self.n {
            Ok(())
        } else {
            Err(Error::AxisOutOfRange { axis, n: self.n })
        }
    }

    pub fn check_symbol(&self, symbol: u32) -> Result<()> {
        if symbol < self.q {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange { symbol, q: self.q })
        }
    }

    /// Hamming weight of the point stored at `index`.
    pub fn weight_of_index(&self, mut index: usize) -> usize {
        let q = self.q as usize;
        let mut w = 0;
        for _ in 0..self.n {
            if !index.is_multiple_of(q) {
                w += 1;
            }
            index /= q;
        }
        w
    }

    /// Hamming weight of every index, in table order.
    pub fn weights(&self) -> Vec<usize> {
        (0..self.size).map(|i| self.weight_of_index(i)).collect()
    }

    /// The domain with one coordinate removed.
    pub fn without_axis(&self) -> Self {
        Self::with_zero_dim(self.n - 1, self.q).expect("smaller domain is valid")
    }

    /// `<u, x> mod q` for two table indices.
    pub fn dot_indices(&self, mut u: usize, mut x: usize) -> u32 {
        let q = self.q as usize;
        let mut acc = 0usize;
        for _ in 0..self.n {
            acc += (u % q) * (x % q);
            u /= q;
            x /= q;
        }
        (acc % q) as u32
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(move |i| index_to_point(i, self).expect("index in range"))
    }
}

/// A vertex of `H(n, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    coords: Vec<u32>,
}

impl Point {
    pub fn new(coords: Vec<u32>, params: &DomainParams) -> Result<Self> {
        let p = Self { coords };
        p.validate(params)?;
        Ok(p)
    }

    pub fn zero(params: &DomainParams) -> Self {
        Self { coords: vec![0; params.n] }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn validate(&self, params: &DomainParams) -> Result<()> {
        if self.coords.len() != params.n {
            return Err(Error::DimensionMismatch { expected: params.n, actual: self.coords.len() });
        }
        match self.coords.iter().position(|&c| c >= params.q) {
            Some(position) => Err(Error::CoordinateOutOfRange { position, value: self.coords[position], q: params.q }),
            None => Ok(()),
        }
    }
}

pub fn point_to_index(p: &Point, params: &DomainParams) -> Result<usize> {
    p.validate(params)?;
    Ok(p.coords.iter().fold(0usize, |acc, &c| acc * params.q as usize + c as usize))
}

pub fn index_to_point(index: usize, params: &DomainParams) -> Result<Point> {
    if index >= params.size {
        return Err(Error::IndexOutOfRange { index, size: params.size });
    }
    let q = params.q as usize;
    let mut coords = vec![0u32; params.n];
    let mut rest = index;
    for c in coords.iter_mut().rev() {
        *c = (rest % q) as u32;
        rest /= q;
    }
    Ok(Point { coords })
}

pub fn hamming_weight(p: &Point) -> usize {
    p.coords.iter().filter(|&&c| c != 0).count()
}

pub fn dot_mod_q(u: &Point, x: &Point, params: &DomainParams) -> Result<u32> {
    u.validate(params).map_err(|_| Error::MismatchedParams)?;
    x.validate(params).map_err(|_| Error::MismatchedParams)?;
    let q = params.q as u64;
    let s: u64 = u.coords.iter().zip(&x.coords).map(|(&a, &b)| a as u64 * b as u64 % q).sum();
    Ok((s % q) as u32)
}

/// The `n(q-1)` neighbours of `p`, by coordinate then replacement symbol.
pub fn neighbors(p: &Point, params: &DomainParams) -> Result<Vec<Point>> {
    p.validate(params)?;
    let mut out = Vec::with_capacity(params.n * (params.q as usize - 1));
    for axis in 0..params.n {
        for s in 0..params.q {
            if s != p.coords[axis] {
                let mut c = p.coords.clone();
                c[axis] = s;
                out.push(Point { coords: c });
            }
        }
    }
    Ok(out)
}

/// Neighbour indices of `index`, in the same order as [`neighbors`].
pub fn neighbor_indices(index: usize, params: &DomainParams) -> impl Iterator<Item = usize> + '_ {
    (0..params.n).flat_map(move |axis| {
        let stride = params.stride(axis);
        let own = params.digit(index, axis) as usize;
        let base = index - own * stride;
        (0..params.q as usize).filter(move |&s| s != own).map(move |s| base + s * stride)
    })
}

/// Every undirected edge `(x, y)` with `x < y`, ordered by `x`, then axis,
/// then the replacement symbol.
pub fn edges(params: &DomainParams) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..params.size).flat_map(move |x| {
        (0..params.n).flat_map(move |axis| {
            let stride = params.stride(axis);
            let own = params.digit(x, axis) as usize;
            (own + 1..params.q as usize).map(move |s| (x, x + (s - own) * stride))
        })
    })
}

pub fn edge_count(params: &DomainParams) -> u64 {
    params.n as u64 * (params.q as u64 - 1) * params.size as u64 / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueMode {
    Pm1,
    ZeroOne,
    Integer,
    Complex,
}

impl ValueMode {
    pub fn name(&self) -> &'static str {
        match self {
            ValueMode::Pm1 => "pm1",
            ValueMode::ZeroOne => "01",
            ValueMode::Integer => "int",
            ValueMode::Complex => "cplx",
        }
    }

    pub fn is_boolean(&self) -> bool {
        matches!(self, ValueMode::Pm1 | ValueMode::ZeroOne)
    }
}

impl std::str::FromStr for ValueMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pm1" => Ok(ValueMode::Pm1),
            "01" | "zero-one" => Ok(ValueMode::ZeroOne),
            "int" | "integer" => Ok(ValueMode::Integer),
            "cplx" | "complex" => Ok(ValueMode::Complex),
            other => Err(format!("unknown value mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Int(Vec<i64>),
    Complex(Vec<Complex64>),
}

/// A function `Z_q^n -> C` stored densely in mixed-radix order.
///
/// Pm1, zero-one and integer tables hold exact `i64` values; complex tables
/// hold `Complex64`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    params: DomainParams,
    mode: ValueMode,
    values: Values,
}

impl FunctionTable {
    pub fn from_ints(params: DomainParams, mode: ValueMode, values: Vec<i64>) -> Result<Self> {
        if values.len() != params.size {
            return Err(Error::LengthMismatch { expected: params.size, actual: values.len() });
        }
        let allowed: fn(i64) -> bool = match mode {
            ValueMode::Pm1 => |v| v == 1 || v == -1,
            ValueMode::ZeroOne => |v| v == 0 || v == 1,
            ValueMode::Integer => |_| true,
            ValueMode::Complex => {
                let values = values.into_iter().map(|v| Complex64::new(v as f64, 0.0)).collect();
                return Self::from_complex(params, values);
            }
        };
        if let Some(index) = values.iter().position(|&v| !allowed(v)) {
            return Err(Error::InvalidValue { index, value: values[index].to_string(), mode: mode.name() });
        }
        Ok(Self { params, mode, values: Values::Int(values) })
    }

    pub fn from_complex(params: DomainParams, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != params.size {
            return Err(Error::LengthMismatch { expected: params.size, actual: values.len() });
        }
        Ok(Self { params, mode: ValueMode::Complex, values: Values::Complex(values) })
    }

    pub fn pm1(params: DomainParams, values: Vec<i64>) -> Result<Self> {
        Self::from_ints(params, ValueMode::Pm1, values)
    }

    pub fn constant(params: DomainParams, value: i64) -> Self {
        Self { params, mode: ValueMode::Integer, values: Values::Int(vec![value; params.size]) }
    }

    /// Builds an integer-valued table from a function of the point.
    pub fn from_fn(params: DomainParams, mode: ValueMode, f: impl Fn(&Point) -> i64) -> Result<Self> {
        let values = params.points().map(|p| f(&p)).collect();
        Self::from_ints(params, mode, values)
    }

    pub fn params(&self) -> &DomainParams {
        &self.params
    }

    pub fn mode(&self) -> ValueMode {
        self.mode
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.params.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn int_values(&self) -> Option<&[i64]> {
        match &self.values {
            Values::Int(v) => Some(v),
            Values::Complex(_) => None,
        }
    }

    pub fn value(&self, index: usize) -> Complex64 {
        match &self.values {
            Values::Int(v) => Complex64::new(v[index] as f64, 0.0),
            Values::Complex(v) => v[index],
        }
    }

    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        match &self.values {
            Values::Int(v) => v.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect(),
            Values::Complex(v) => v.clone(),
        }
    }

    /// Whether the values at two indices differ; complex tables compare with
    /// an absolute tolerance, integer tables exactly.
    pub fn differs(&self, i: usize, j: usize, tolerance: f64) -> bool {
        match &self.values {
            Values::Int(v) => v[i] != v[j],
            Values::Complex(v) => (v[i] - v[j]).norm() > tolerance,
        }
    }

    pub fn is_nonzero_at(&self, i: usize, tolerance: f64) -> bool {
        match &self.values {
            Values::Int(v) => v[i] != 0,
            Values::Complex(v) => v[i].norm() > tolerance,
        }
    }

    /// Canonical `{-1, +1}` form of a Boolean table: zero-one input maps
    /// through `f -> 1 - 2f`.
    pub fn to_pm1(&self) -> Result<Self> {
        match (self.mode, &self.values) {
            (ValueMode::Pm1, _) => Ok(self.clone()),
            (ValueMode::ZeroOne, Values::Int(v)) => Self::pm1(self.params, v.iter().map(|&x| 1 - 2 * x).collect()),
            _ => Err(Error::WrongMode { expected: "Boolean (pm1 or 01)", actual: self.mode.name() }),
        }
    }

    pub(crate) fn with_values_unchecked(params: DomainParams, mode: ValueMode, values: Values) -> Self {
        Self { params, mode, values }
    }
}

/// Writes the text table format: a `q n mode` header, then one line per
/// run of `q` values along the last coordinate.
impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.params.q, self.params.n, self.mode.name())?;
        let q = self.params.q as usize;
        for row in 0..self.len().div_ceil(q) {
            let cells = row * q..((row + 1) * q).min(self.len());
            let line: Vec<String> = match &self.values {
                Values::Int(v) => v[cells].iter().map(|x| x.to_string()).collect(),
                Values::Complex(v) => v[cells].iter().map(|z| format!("{:?} {:?}", z.re, z.im)).collect(),
            };
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for FunctionTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn dp(n: usize, q: u32) -> DomainParams {
        DomainParams::new(n, q).unwrap()
    }

    #[test]
    fn indexing_examples() {
        let p = dp(2, 3);
        assert_eq!(point_to_index(&Point::new(vec![0, 0], &p).unwrap(), &p).unwrap(), 0);
        assert_eq!(point_to_index(&Point::new(vec![1, 2], &p).unwrap(), &p).unwrap(), 5);
    }

    #[test]
    fn round_trip_z3_4() {
        let p = dp(4, 3);
        for i in 0..81 {
            let pt = index_to_point(i, &p).unwrap();
            assert_eq!(point_to_index(&pt, &p).unwrap(), i);
        }
    }

    #[test]
    fn rejects_bad_points_and_domains() {
        let p = dp(2, 3);
        assert!(matches!(Point::new(vec![0, 3], &p), Err(Error::CoordinateOutOfRange { position: 1, value: 3, q: 3 })));
        assert!(Point::new(vec![0], &p).is_err());
        assert!(DomainParams::new(0, 3).is_err());
        assert!(DomainParams::new(2, 1).is_err());
        assert!(matches!(DomainParams::new(32, 2), Err(Error::CapacityExceeded { .. })));
        assert!(DomainParams::new(31, 2).is_ok());
        assert!(index_to_point(9, &p).is_err());
    }

    #[test]
    fn weights() {
        let p4 = dp(4, 3);
        assert_eq!(hamming_weight(&Point::new(vec![0, 2, 0, 1], &p4).unwrap()), 2);
        assert_eq!(hamming_weight(&Point::zero(&dp(3, 3))), 0);
        let p = dp(2, 3);
        assert_eq!(p.points().filter(|x| hamming_weight(x) == 1).count(), 4);
        for (i, x) in p4.points().enumerate() {
            assert_eq!(p4.weight_of_index(i), hamming_weight(&x));
        }
    }

    #[test]
    fn dot_products() {
        let p = dp(2, 3);
        let u = Point::new(vec![1, 2], &p).unwrap();
        let x = Point::new(vec![2, 2], &p).unwrap();
        assert_eq!(dot_mod_q(&u, &x, &p).unwrap(), 0);
        for a in p.points() {
            assert_eq!(dot_mod_q(&Point::zero(&p), &a, &p).unwrap(), 0);
            for b in p.points() {
                let ab = dot_mod_q(&a, &b, &p).unwrap();
                assert_eq!(ab, dot_mod_q(&b, &a, &p).unwrap());
                let (ia, ib) = (point_to_index(&a, &p).unwrap(), point_to_index(&b, &p).unwrap());
                assert_eq!(ab, p.dot_indices(ia, ib));
            }
        }
    }

    #[test]
    fn neighbours_of_k3() {
        let p = dp(1, 3);
        let nb = neighbors(&Point::zero(&p), &p).unwrap();
        assert_eq!(nb, vec![Point::new(vec![1], &p).unwrap(), Point::new(vec![2], &p).unwrap()]);
    }

    #[test]
    fn neighbourhoods_are_regular_and_symmetric() {
        for (n, q) in [(2, 3), (3, 4), (2, 5), (4, 2)] {
            let p = dp(n, q);
            for x in 0..p.size() {
                let pt = index_to_point(x, &p).unwrap();
                let by_point: Vec<usize> =
                    neighbors(&pt, &p).unwrap().iter().map(|y| point_to_index(y, &p).unwrap()).collect();
                let by_index: Vec<usize> = neighbor_indices(x, &p).collect();
                assert_eq!(by_point, by_index);
                assert_eq!(by_index.len(), n * (q as usize - 1));
                for y in by_index {
                    assert!(neighbor_indices(y, &p).any(|z| z == x));
                }
            }
        }
    }

    #[test]
    fn edge_streams() {
        assert_eq!(edges(&dp(1, 3)).count(), 3);
        // direct count of differing-in-one-coordinate pairs
        let p = dp(2, 3);
        let pts: Vec<Point> = p.points().collect();
        let mut direct = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let diff = pts[i].coords().iter().zip(pts[j].coords()).filter(|(a, b)| a != b).count();
                if diff == 1 {
                    direct += 1;
                }
            }
        }
        assert_eq!(direct, 18);
        assert_eq!(edges(&p).count(), 18);

        let p = dp(2, 4);
        let mut seen = HashSet::new();
        for (x, y) in edges(&p) {
            assert!(x < y);
            assert!(seen.insert((x, y)));
        }
        assert_eq!(seen.len() as u64, edge_count(&p));
    }

    #[test]
    fn edge_count_formula_over_grid() {
        for n in 1..=5 {
            for q in 2..=7u32 {
                let p = dp(n, q);
                if p.size() > 100_000 {
                    continue;
                }
                assert_eq!(edges(&p).count() as u64, edge_count(&p), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn mode_checks() {
        let p = dp(1, 3);
        assert!(FunctionTable::pm1(p, vec![1, -1, 0]).is_err());
        assert!(FunctionTable::from_ints(p, ValueMode::ZeroOne, vec![0, 1, 2]).is_err());
        assert!(FunctionTable::pm1(p, vec![1, -1]).is_err());
        let f = FunctionTable::from_ints(p, ValueMode::ZeroOne, vec![0, 1, 1]).unwrap();
        assert_eq!(f.to_pm1().unwrap().int_values().unwrap(), &[1, -1, -1]);
        assert!(FunctionTable::constant(p, 2).to_pm1().is_err());
    }
}
