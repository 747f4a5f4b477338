use std::collections::BTreeSet;

use hamming_spectra::boundary::relevant_indices;
use hamming_spectra::equitable::{indicator_function, quotient_matrix, Partition};
use hamming_spectra::fourier::{exact_spectrum_report, lambda_k};
use hamming_spectra::{DomainParams, FunctionTable, ValueMode};

/// Every zero-one table with both classes nonempty: spectrum in `{0, d}`
/// holds exactly for the equitable ones, with matching degree.
fn round_trip(n: usize, q: u32) -> (usize, usize) {
    let p = DomainParams::new(n, q).unwrap();
    let lambdas: BTreeSet<i64> = (0..=n).map(|k| lambda_k(n, q, k).unwrap()).collect();
    let size = p.size();
    let mut equitable = 0;
    let mut checked = 0;
    for bits in 1u64..(1 << size) - 1 {
        let v: Vec<i64> = (0..size).map(|x| (bits >> x & 1) as i64).collect();
        let f = FunctionTable::from_ints(p, ValueMode::ZeroOne, v).unwrap();
        let part = Partition::from_indicator(&f).unwrap();
        let spectrum = exact_spectrum_report(&f).unwrap();
        let nonzero: Vec<usize> = spectrum.weight_support.iter().copied().filter(|&w| w > 0).collect();
        checked += 1;
        match quotient_matrix(&part) {
            Ok(qm) => {
                equitable += 1;
                let d = qm.degree.unwrap();
                assert_eq!(nonzero, [d], "{f}");
                assert!(lambdas.contains(&qm.theta0) && lambdas.contains(&qm.theta1.unwrap()));
                let ind = indicator_function(&part, 1).unwrap();
                let complement = indicator_function(&part, 2).unwrap();
                assert_eq!(relevant_indices(&ind), relevant_indices(&complement));
            }
            Err(_) => assert_ne!(nonzero.len(), 1, "{f}"),
        }
    }
    (checked, equitable)
}

#[test]
fn zero_one_tables_on_z3_squared() {
    let (checked, equitable) = round_trip(2, 3);
    assert_eq!(checked, 510);
    assert!(equitable > 0);
}

#[test]
fn zero_one_tables_on_z4_squared() {
    let (checked, equitable) = round_trip(2, 4);
    assert_eq!(checked, 65534);
    assert!(equitable > 0);
}
