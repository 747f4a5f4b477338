//! Equitable partitions of `H(n, q)` and their quotient matrices.
//!
//! A partition `C_1, ..., C_r` is equitable when every vertex of `C_i` has
//! the same number `s_{i,j}` of neighbours in `C_j`. For `r = 2` with
//! quotient `[[a, b], [c, d]]` the eigenvalues are `theta0 = n(q-1)` and
//! `theta1 = a - c = lambda_d(n, q)`, and the indicator of `C_1` has its
//! spectrum inside `{0, d}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::relevant_indices;
use crate::bounds::{BoundReport, Verdict};
use crate::fourier::lambda_k;
use crate::qary_domain::{index_to_point, neighbor_indices, DomainParams, FunctionTable, ValueMode};
use crate::{Error, NotEquitable, Result};

/// Class labels in `[1, r]`, one per vertex in mixed-radix order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    params: DomainParams,
    labels: Vec<u32>,
    r: u32,
}

impl Partition {
    pub fn new(params: DomainParams, r: u32, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != params.size() {
            return Err(Error::LengthMismatch { expected: params.size(), actual: labels.len() });
        }
        if r == 0 {
            return Err(Error::OutOfRange("a partition needs at least one class".into()));
        }
        if let Some(index) = labels.iter().position(|&l| l == 0 || l > r) {
            return Err(Error::InvalidValue { index, value: labels[index].to_string(), mode: "class label" });
        }
        let mut seen = vec![false; r as usize];
        for &l in &labels {
            seen[l as usize - 1] = true;
        }
        if let Some(empty) = seen.iter().position(|s| !s) {
            return Err(Error::EmptyClass(empty as u32 + 1));
        }
        Ok(Self { params, labels, r })
    }

    /// The 2-partition `{x_axis ∈ symbols}` / rest.
    pub fn coordinate_split(params: DomainParams, axis: usize, symbols: &[u32]) -> Result<Self> {
        params.check_axis(axis)?;
        let labels = (0..params.size()).map(|x| if symbols.contains(&params.digit(x, axis)) { 1 } else { 2 }).collect();
        Self::new(params, 2, labels)
    }

    /// Labels from a zero-one table: class 1 where the value is 1.
    pub fn from_indicator(f: &FunctionTable) -> Result<Self> {
        if f.mode() != ValueMode::ZeroOne {
            return Err(Error::WrongMode { expected: "01", actual: f.mode().name() });
        }
        let labels =
            f.int_values().expect("zero-one tables are integer").iter().map(|&v| if v == 1 { 1 } else { 2 }).collect();
        Self::new(*f.params(), 2, labels)
    }

    pub fn params(&self) -> &DomainParams {
        &self.params
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn class_count(&self) -> u32 {
        self.r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientMatrix {
    pub entries: Vec<Vec<u32>>,
    pub theta0: i64,
    /// `s_{1,1} - s_{2,1}`; two-class partitions only.
    pub theta1: Option<i64>,
    pub degree: Option<usize>,
}

fn class_counts(p: &Partition, x: usize) -> Vec<u32> {
    let mut counts = vec![0u32; p.r as usize];
    for y in neighbor_indices(x, &p.params) {
        counts[p.labels[y] as usize - 1] += 1;
    }
    counts
}

/// Quotient matrix of an equitable partition, or the first vertex that
/// breaks the counts set by the first vertex of its class.
pub fn quotient_matrix(p: &Partition) -> Result<QuotientMatrix> {
    let counts: Vec<Vec<u32>> = (0..p.params.size()).into_par_iter().map(|x| class_counts(p, x)).collect();
    let mut rows: Vec<Option<Vec<u32>>> = vec![None; p.r as usize];
    for (x, c) in counts.into_iter().enumerate() {
        let class = p.labels[x] as usize - 1;
        match &rows[class] {
            None => rows[class] = Some(c),
            Some(row) => {
                if let Some(j) = (0..p.r as usize).find(|&j| row[j] != c[j]) {
                    return Err(Error::NotEquitable(NotEquitable {
                        vertex: x,
                        coords: index_to_point(x, &p.params)?.coords().to_vec(),
                        vertex_class: class as u32 + 1,
                        target_class: j as u32 + 1,
                        expected: row[j],
                        actual: c[j],
                    }));
                }
            }
        }
    }
    let entries: Vec<Vec<u32>> = rows.into_iter().map(|r| r.expect("classes are nonempty")).collect();
    let theta0 = p.params.n() as i64 * (p.params.q() as i64 - 1);
    let mut qm = QuotientMatrix { entries, theta0, theta1: None, degree: None };
    if p.r == 2 {
        qm.theta1 = Some(qm.entries[0][0] as i64 - qm.entries[1][0] as i64);
        qm.degree = Some(partition_degree(&qm, &p.params)?);
    }
    Ok(qm)
}

/// The `d` with `theta1 = lambda_d(n, q)`.
pub fn partition_degree(qm: &QuotientMatrix, params: &DomainParams) -> Result<usize> {
    if qm.entries.len() != 2 {
        return Err(Error::OutOfRange(format!("degree needs 2 classes, got {}", qm.entries.len())));
    }
    let theta1 = qm.entries[0][0] as i64 - qm.entries[1][0] as i64;
    let theta0 = params.n() as i64 * (params.q() as i64 - 1);
    let gap = theta0 - theta1;
    let q = params.q() as i64;
    if gap < 0 || gap % q != 0 || gap / q > params.n() as i64 {
        return Err(Error::Inconsistent(format!(
            "second eigenvalue {theta1} is not an eigenvalue of H({}, {q})",
            params.n()
        )));
    }
    let d = (gap / q) as usize;
    debug_assert_eq!(lambda_k(params.n(), params.q(), d).ok(), Some(theta1));
    Ok(d)
}

/// Zero-one indicator of one class of a 2-partition.
pub fn indicator_function(p: &Partition, class_id: u32) -> Result<FunctionTable> {
    if p.r != 2 {
        return Err(Error::OutOfRange(format!("indicator needs 2 classes, got {}", p.r)));
    }
    if !(1..=2).contains(&class_id) {
        return Err(Error::OutOfRange(format!("class id must be 1 or 2, got {class_id}")));
    }
    let values = p.labels.iter().map(|&l| (l == class_id) as i64).collect();
    FunctionTable::from_ints(p.params, ValueMode::ZeroOne, values)
}

/// Relevant coordinates of a partition are those of its class-1 indicator.
pub fn partition_relevant_indices(p: &Partition) -> Result<Vec<usize>> {
    Ok(relevant_indices(&indicator_function(p, 1)?))
}

/// The relevant-variable bound for an equitable 2-partition of degree `d`,
/// applicable when `2d <= n + 1`.
pub fn audit_partition(p: &Partition) -> Result<BoundReport> {
    p.params.require_bound_alphabet()?;
    let qm = quotient_matrix(p)?;
    if p.r != 2 {
        return Ok(BoundReport {
            n: p.params.n(),
            q: p.params.q(),
            d_prime: None,
            d: None,
            applicable: false,
            bound_main: None,
            bound_floor: None,
            relevant_count: relevant_indices(&FunctionTable::from_ints(
                p.params,
                ValueMode::Integer,
                p.labels.iter().map(|&l| l as i64).collect(),
            )?)
            .len(),
            verdict: Verdict::NotApplicable,
        });
    }
    let relevant = partition_relevant_indices(p)?.len();
    // d' = d, so the window condition reads 2d <= n + 1
    BoundReport::evaluate(&p.params, qm.degree, qm.degree, relevant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::rational;
    use crate::fourier::exact_spectrum_report;
    use std::collections::BTreeSet;

    fn dp(n: usize, q: u32) -> DomainParams {
        DomainParams::new(n, q).unwrap()
    }

    #[test]
    fn trivial_partition() {
        for (n, q) in [(2, 3), (3, 4)] {
            let p = Partition::new(dp(n, q), 1, vec![1; q.pow(n as u32) as usize]).unwrap();
            let qm = quotient_matrix(&p).unwrap();
            assert_eq!(qm.entries, vec![vec![(n as u32) * (q - 1)]]);
            assert_eq!(qm.theta1, None);
            assert_eq!(audit_partition(&p).unwrap().verdict, Verdict::NotApplicable);
        }
    }

    #[test]
    fn first_coordinate_split_h23() {
        let p = Partition::coordinate_split(dp(2, 3), 0, &[0]).unwrap();
        let qm = quotient_matrix(&p).unwrap();
        assert_eq!(qm.entries, vec![vec![2, 2], vec![1, 3]]);
        assert_eq!((qm.theta0, qm.theta1, qm.degree), (4, Some(1), Some(1)));
        assert!(qm.entries.iter().all(|row| row.iter().sum::<u32>() == 4));
        let r = audit_partition(&p).unwrap();
        assert_eq!((r.relevant_count, r.verdict), (1, Verdict::Pass));
        assert_eq!(r.bound_main, Some(rational(9, 8)));
    }

    #[test]
    fn first_coordinate_split_general() {
        for (n, q) in [(2, 3), (3, 3), (3, 4), (2, 5), (4, 3)] {
            let p = Partition::coordinate_split(dp(n, q), 0, &[0]).unwrap();
            let qm = quotient_matrix(&p).unwrap();
            let deg = n as u32 * (q - 1);
            assert_eq!(qm.entries, vec![vec![deg - (q - 1), q - 1], vec![1, deg - 1]]);
            assert_eq!(qm.theta1, Some(deg as i64 - q as i64));
            assert_eq!(qm.degree, Some(1));
        }
        let r = audit_partition(&Partition::coordinate_split(dp(3, 4), 0, &[0]).unwrap()).unwrap();
        assert_eq!(r.bound_main, Some(rational(4, 3)));
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn single_vertex_class_is_not_equitable() {
        let mut labels = vec![2; 9];
        labels[0] = 1;
        let p = Partition::new(dp(2, 3), 2, labels).unwrap();
        match quotient_matrix(&p) {
            Err(Error::NotEquitable(w)) => {
                // (0,1) sets class 2's count into class 1 to 1; (1,1) is the
                // first class-2 vertex not adjacent to (0,0)
                assert_eq!(w.vertex, 4);
                assert_eq!(w.coords, vec![1, 1]);
                assert_eq!((w.vertex_class, w.target_class, w.expected, w.actual), (2, 1, 1, 0));
            }
            other => panic!("expected NotEquitable, got {other:?}"),
        }
        let f = indicator_function(&p, 1).unwrap();
        let s = exact_spectrum_report(&f).unwrap();
        for d in 0..=2 {
            assert!(!s.weight_support.is_subset(&BTreeSet::from([0, d])));
        }
    }

    #[test]
    fn indicator_spectra() {
        let p = Partition::coordinate_split(dp(2, 3), 0, &[0]).unwrap();
        let one = indicator_function(&p, 1).unwrap();
        let two = indicator_function(&p, 2).unwrap();
        let s1 = exact_spectrum_report(&one).unwrap();
        assert_eq!(s1.weight_support, BTreeSet::from([0, 1]));
        let s2 = exact_spectrum_report(&two).unwrap();
        let nz = |s: &BTreeSet<usize>| s.iter().copied().filter(|&w| w > 0).collect::<Vec<_>>();
        assert_eq!(nz(&s1.weight_support), nz(&s2.weight_support));
        assert_eq!(relevant_indices(&one), relevant_indices(&two));
        assert!(indicator_function(&p, 3).is_err());
    }

    #[test]
    fn degree_two_partition() {
        // parity split x1 + x2 = 0 (mod 2) on H(2,4)
        let params = dp(2, 4);
        let labels =
            (0..16).map(|x| if (params.digit(x, 0) + params.digit(x, 1)).is_multiple_of(2) { 1 } else { 2 }).collect();
        let p = Partition::new(params, 2, labels).unwrap();
        let qm = quotient_matrix(&p).unwrap();
        let d = qm.degree.unwrap();
        let s = exact_spectrum_report(&indicator_function(&p, 1).unwrap()).unwrap();
        assert!(s.weight_support.is_subset(&BTreeSet::from([0, d])));
        for theta in [qm.theta0, qm.theta1.unwrap()] {
            assert!((0..=2).any(|k| lambda_k(2, 4, k).unwrap() == theta));
        }
    }

    #[test]
    fn three_class_quotient() {
        // classes by x1 on H(2,3)
        let params = dp(2, 3);
        let labels = (0..9).map(|x| params.digit(x, 0) + 1).collect();
        let p = Partition::new(params, 3, labels).unwrap();
        let qm = quotient_matrix(&p).unwrap();
        assert_eq!(qm.entries, vec![vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
        assert_eq!(qm.degree, None);
        assert!(indicator_function(&p, 1).is_err());
    }

    #[test]
    fn bad_labels() {
        assert!(matches!(Partition::new(dp(1, 3), 2, vec![1, 1, 1]), Err(Error::EmptyClass(2))));
        assert!(Partition::new(dp(1, 3), 2, vec![1, 0, 2]).is_err());
        assert!(Partition::new(dp(1, 3), 2, vec![1, 2]).is_err());
    }

    #[test]
    fn q2_is_rejected_by_audit() {
        let p = Partition::coordinate_split(dp(2, 2), 0, &[0]).unwrap();
        assert!(quotient_matrix(&p).is_ok());
        assert!(matches!(audit_partition(&p), Err(Error::AlphabetTooSmall(2))));
    }
}
