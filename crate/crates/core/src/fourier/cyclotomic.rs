//! Exact arithmetic in `Z[w]`, `w` a primitive `q`-th root of unity.
//!
//! An element is stored as an integer vector `counts` with value
//! `sum_j counts[j] * w^j`. It is zero iff the polynomial with those
//! coefficients is divisible by the cyclotomic polynomial `Phi_q`.

use num_integer::Integer;

/// Coefficients (lowest degree first) of the `q`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(q: u32) -> Vec<i64> {
    assert!(q >= 1, "cyclotomic polynomial needs q >= 1");
    // x^q - 1 divided by Phi_d for every proper divisor d of q.
    let mut num = vec![0i64; q as usize + 1];
    num[0] = -1;
    num[q as usize] = 1;
    for d in (1..q).filter(|&d| q.is_multiple_of(d)) {
        let (quot, rem) = divide_monic(&num, &cyclotomic_polynomial(d));
        debug_assert!(rem.iter().all(|&c| c == 0));
        num = quot;
    }
    num
}

/// Quotient and remainder of `a / b` for a monic `b`.
fn divide_monic(a: &[i64], b: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    let mut rem = a.to_vec();
    if a.len() <= db {
        return (vec![0], rem);
    }
    let mut quot = vec![0i64; a.len() - db];
    for k in (db..a.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - db] = c;
        for (t, &bt) in b.iter().enumerate() {
            rem[k - db + t] -= c * bt;
        }
    }
    rem.truncate(db);
    (quot, rem)
}

/// Reduction modulo `Phi_q` with the images of `1, x, ..., x^{q-1}`
/// precomputed.
#[derive(Debug, Clone)]
pub struct CyclotomicReducer {
    q: u32,
    phi: Vec<i64>,
    powers: Vec<Vec<i64>>,
}

impl CyclotomicReducer {
    pub fn new(q: u32) -> Self {
        let phi = cyclotomic_polynomial(q);
        let powers = (0..q as usize)
            .map(|j| {
                let mut mono = vec![0i64; j + 1];
                mono[j] = 1;
                let (_, mut rem) = divide_monic(&mono, &phi);
                rem.resize(phi.len() - 1, 0);
                rem
            })
            .collect();
        Self { q, phi, powers }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `phi(q)`, the dimension of `Q(w)` over `Q`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.phi
    }

    /// Coordinates of `w^j` in the power basis `1, w, ..., w^{phi(q)-1}`.
    pub fn power_basis(&self, j: usize) -> &[i64] {
        &self.powers[j % self.q as usize]
    }

    /// Coordinates of `sum_j counts[j] w^j` in the power basis.
    pub fn reduce(&self, counts: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.degree()];
        for (j, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (o, &p) in out.iter_mut().zip(self.power_basis(j)) {
                    *o += c * p;
                }
            }
        }
        out
    }

    pub fn is_zero(&self, counts: &[i64]) -> bool {
        debug_assert_eq!(counts.len(), self.q as usize);
        (0..self.degree()).all(|t| counts.iter().enumerate().map(|(j, &c)| c * self.powers[j][t]).sum::<i64>() == 0)
    }
}

/// An element of `Z[w]` as a coefficient vector over `1, w, ..., w^{q-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInt {
    q: u32,
    counts: Vec<i64>,
}

impl CyclotomicInt {
    pub fn new(q: u32, counts: Vec<i64>) -> Self {
        assert_eq!(counts.len(), q as usize, "need one count per power of w");
        Self { q, counts }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn is_zero(&self) -> bool {
        CyclotomicReducer::new(self.q).is_zero(&self.counts)
    }

    pub fn is_zero_with(&self, reducer: &CyclotomicReducer) -> bool {
        debug_assert_eq!(reducer.q, self.q);
        reducer.is_zero(&self.counts)
    }

    /// Numerical value, for cross-checks against the floating transform.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let step = std::f64::consts::TAU / self.q as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(j, &c)| num_complex::Complex64::from_polar(c as f64, step * j as f64))
            .sum()
    }
}

/// Euler's totient, used to sanity-check `deg Phi_q`.
pub fn euler_phi(q: u32) -> u32 {
    (1..=q).filter(|&k| k.gcd(&q) == 1).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn degree_is_totient() {
        for q in 2..=60 {
            assert_eq!(cyclotomic_polynomial(q).len() - 1, euler_phi(q) as usize, "q={q}");
        }
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        let p = cyclotomic_polynomial(105);
        assert_eq!(p[7], -2);
        assert_eq!(p[41], -2);
    }

    #[test]
    fn zero_tests() {
        assert!(CyclotomicInt::new(3, vec![1, 1, 1]).is_zero());
        assert!(!CyclotomicInt::new(3, vec![2, -1, -1]).is_zero());
        // 2 - x - x^2 = 3 - (1 + x + x^2)
        let r = CyclotomicReducer::new(3);
        assert_eq!(r.reduce(&[2, -1, -1]), vec![3, 0]);
        assert!(CyclotomicInt::new(4, vec![1, 0, 1, 0]).is_zero());
        assert!(CyclotomicInt::new(6, vec![1, 0, 1, 0, 1, 0]).is_zero());
        assert!(!CyclotomicInt::new(6, vec![1, 1, 0, 0, 0, 0]).is_zero());
    }

    #[test]
    fn exact_agrees_with_numeric_on_random_vectors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in 2..=12u32 {
            let r = CyclotomicReducer::new(q);
            for _ in 0..200 {
                let counts: Vec<i64> = (0..q).map(|_| rng.random_range(-1..=1)).collect();
                let c = CyclotomicInt::new(q, counts);
                assert_eq!(c.is_zero_with(&r), c.to_complex().norm() < 1e-9, "{c:?}");
            }
        }
    }
}
