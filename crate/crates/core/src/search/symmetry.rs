//! Coordinate permutations combined with per-coordinate affine maps
//! `x -> a x + b`, `a` a unit of `Z_q`.
//!
//! Such a map `g` sends characters to characters of the same weight, so
//! `f -> f o g` preserves the spectrum, the support size, `nu(f)` and the
//! number of relevant coordinates.

use itertools::Itertools;
use num_integer::Integer;

use crate::qary_domain::{DomainParams, FunctionTable, Values};
use crate::{Error, Result};

/// Elements beyond this many make pruning slower than brute force.
pub const MAX_GROUP_ORDER: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryElement {
    /// Output coordinate `i` reads input coordinate `perm[i]`.
    pub perm: Vec<usize>,
    pub mult: Vec<u32>,
    pub shift: Vec<u32>,
}

pub fn units(q: u32) -> Vec<u32> {
    (1..q).filter(|a| a.gcd(&q) == 1).collect()
}

#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    params: DomainParams,
    elements: Vec<SymmetryElement>,
    /// `maps[g][x]` is the index of `g(x)`.
    maps: Vec<Vec<u32>>,
}

impl SymmetryGroup {
    pub fn new(params: DomainParams) -> Result<Self> {
        let (n, q) = (params.n(), params.q());
        let units = units(q);
        let per_axis = units.len() * q as usize;
        let order = (1..=n)
            .try_fold(1usize, |acc, k| acc.checked_mul(k))
            .and_then(|perms| perms.checked_mul(per_axis.checked_pow(n as u32)?))
            .filter(|&o| o <= MAX_GROUP_ORDER)
            .ok_or_else(|| Error::LimitExceeded(format!("symmetry group of H({n}, {q}) is too large")))?;

        let affine: Vec<(u32, u32)> = units.iter().flat_map(|&a| (0..q).map(move |b| (a, b))).collect();
        let mut elements = Vec::with_capacity(order);
        for perm in (0..n).permutations(n) {
            for choice in (0..n).map(|_| affine.iter().copied()).multi_cartesian_product() {
                elements.push(SymmetryElement {
                    perm: perm.clone(),
                    mult: choice.iter().map(|c| c.0).collect(),
                    shift: choice.iter().map(|c| c.1).collect(),
                });
            }
            if n == 0 {
                elements.push(SymmetryElement { perm: vec![], mult: vec![], shift: vec![] });
            }
        }
        let maps = elements.iter().map(|g| Self::index_map(&params, g)).collect();
        Ok(Self { params, elements, maps })
    }

    fn index_map(params: &DomainParams, g: &SymmetryElement) -> Vec<u32> {
        let q = params.q();
        let n = params.n();
        (0..params.size())
            .map(|x| {
                let mut y = 0usize;
                for i in 0..n {
                    let xi = params.digit(x, g.perm[i]);
                    y = y * q as usize + ((g.mult[i] * xi + g.shift[i]) % q) as usize;
                }
                y as u32
            })
            .collect()
    }

    pub fn params(&self) -> &DomainParams {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SymmetryElement] {
        &self.elements
    }

    pub fn map(&self, g: usize) -> &[u32] {
        &self.maps[g]
    }

    /// `f o g`.
    pub fn act_on_table(&self, g: usize, f: &FunctionTable) -> FunctionTable {
        let map = &self.maps[g];
        let values = match f.values() {
            Values::Int(v) => Values::Int(map.iter().map(|&y| v[y as usize]).collect()),
            Values::Complex(v) => Values::Complex(map.iter().map(|&y| v[y as usize]).collect()),
        };
        FunctionTable::with_values_unchecked(*f.params(), f.mode(), values)
    }

    /// Whether the sorted index set is lexicographically smallest in its
    /// orbit.
    pub fn is_canonical_subset(&self, subset: &[usize]) -> bool {
        let mut image = Vec::with_capacity(subset.len());
        self.maps.iter().all(|map| {
            image.clear();
            image.extend(subset.iter().map(|&x| map[x] as usize));
            image.sort_unstable();
            image.as_slice() >= subset
        })
    }

    /// Bits of `f o g` where bit `x` holds the value at index `x`.
    pub fn act_on_bits(&self, g: usize, bits: u128) -> u128 {
        let mut out = 0u128;
        for (x, &y) in self.maps[g].iter().enumerate() {
            out |= ((bits >> y) & 1) << x;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{nu, relevant_indices, support};
    use crate::fourier::{exact_spectrum_report, spectrum_report, transform};
    use crate::qary_domain::ValueMode;
    use rand::{Rng, SeedableRng};

    #[test]
    fn group_orders() {
        for (n, q, order) in [(2, 3, 2 * 36), (2, 4, 2 * 64), (3, 3, 6 * 216), (1, 5, 20), (2, 6, 2 * 144)] {
            let g = SymmetryGroup::new(DomainParams::new(n, q).unwrap()).unwrap();
            assert_eq!(g.order(), order);
        }
        assert_eq!(units(12), vec![1, 5, 7, 11]);
    }

    #[test]
    fn maps_are_bijections() {
        let g = SymmetryGroup::new(DomainParams::new(2, 4).unwrap()).unwrap();
        for i in 0..g.order() {
            let mut m: Vec<u32> = g.map(i).to_vec();
            m.sort_unstable();
            assert_eq!(m, (0..16).collect::<Vec<_>>());
        }
    }

    #[test]
    fn invariants_preserved_by_group_action() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for (n, q) in [(2, 3), (2, 4), (3, 3), (2, 6)] {
            let p = DomainParams::new(n, q).unwrap();
            let grp = SymmetryGroup::new(p).unwrap();
            for _ in 0..10 {
                let f =
                    FunctionTable::pm1(p, (0..p.size()).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())
                        .unwrap();
                let h = FunctionTable::from_ints(
                    p,
                    ValueMode::Integer,
                    (0..p.size()).map(|_| rng.random_range(-1..=1)).collect(),
                )
                .unwrap();
                let base = (exact_spectrum_report(&f).unwrap(), nu(&f), relevant_indices(&f).len());
                let hs = (spectrum_report(&transform(&h, 1e-9).unwrap()), support(&h).len());
                for _ in 0..20 {
                    let g = rng.random_range(0..grp.order());
                    let fg = grp.act_on_table(g, &f);
                    assert_eq!((exact_spectrum_report(&fg).unwrap(), nu(&fg), relevant_indices(&fg).len()), base);
                    let hg = grp.act_on_table(g, &h);
                    assert_eq!((spectrum_report(&transform(&hg, 1e-9).unwrap()), support(&hg).len()), hs);
                }
            }
        }
    }

    #[test]
    fn bit_action_matches_table_action() {
        let p = DomainParams::new(2, 3).unwrap();
        let grp = SymmetryGroup::new(p).unwrap();
        let bits: u128 = 0b1_0110_1001;
        let f = FunctionTable::pm1(p, (0..9).map(|x| 1 - 2 * ((bits >> x) & 1) as i64).collect()).unwrap();
        for g in 0..grp.order() {
            let fg = grp.act_on_table(g, &f);
            let gb = grp.act_on_bits(g, bits);
            let from_bits: Vec<i64> = (0..9).map(|x| 1 - 2 * ((gb >> x) & 1) as i64).collect();
            assert_eq!(fg.int_values().unwrap(), from_bits.as_slice());
        }
    }
}
