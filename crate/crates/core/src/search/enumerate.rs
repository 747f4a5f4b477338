//! Exhaustive and sampled enumeration of `{-1, +1}` tables with an exact
//! spectrum filter and a built-in relevant-variable audit.
//!
//! A table on `N = q^n` points is a bit string `s_0 s_1 ... s_{N-1}`
//! (`s_x = 1` means `f(x) = -1`). Exhaustive mode walks these strings in
//! lexicographic order; the ordinal of a table is its string read as a
//! binary number with `s_0` most significant. Between consecutive
//! ordinals only the trailing bits flip, so the unnormalised coefficients
//! `q^n f^(u)` in `Z[w]` are updated in place rather than recomputed.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::symmetry::SymmetryGroup;
use super::Witness;
use crate::bounds::{main_bound, Verdict};
use crate::fourier::{CyclotomicReducer, SpectrumReport};
use crate::qary_domain::{DomainParams, FunctionTable};
use crate::{Error, Result};

/// Default cap on the number of tables an exhaustive run may visit.
pub const DEFAULT_MAX_ENUM: u64 = 1 << 20;

/// Tables with more points than this do not fit the packed representation.
pub const MAX_POINTS: usize = 128;

/// Work units per run; fixed so results do not depend on the worker count.
const EXHAUSTIVE_CHUNKS: u64 = 256;
const RANDOM_BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum EnumerationMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationPlan {
    pub params: DomainParams,
    /// Keep only tables whose spectrum is a subset of this set.
    pub spectrum_filter: Option<BTreeSet<usize>>,
    pub mode: EnumerationMode,
    /// Visit one lexicographically smallest table per symmetry orbit and
    /// weight the tallies by orbit size. Exhaustive mode only.
    pub symmetry_reduction: bool,
    pub max_tables: u64,
}

impl EnumerationPlan {
    pub fn exhaustive(params: DomainParams) -> Self {
        Self {
            params,
            spectrum_filter: None,
            mode: EnumerationMode::Exhaustive,
            symmetry_reduction: false,
            max_tables: DEFAULT_MAX_ENUM,
        }
    }

    pub fn random(params: DomainParams, samples: u64, seed: u64) -> Self {
        Self { mode: EnumerationMode::Random { samples, seed }, ..Self::exhaustive(params) }
    }

    pub fn with_filter(mut self, weights: impl IntoIterator<Item = usize>) -> Self {
        self.spectrum_filter = Some(weights.into_iter().collect());
        self
    }

    pub fn with_symmetry_reduction(mut self, on: bool) -> Self {
        self.symmetry_reduction = on;
        self
    }

    pub fn with_max_tables(mut self, max: u64) -> Self {
        self.max_tables = max;
        self
    }
}

/// A table visited by the enumeration, with its spectrum and relevant
/// coordinates as bit masks.
#[derive(Debug, Clone, Copy)]
pub struct Candidate {
    pub params: DomainParams,
    /// Position in lexicographic order of value strings.
    pub ordinal: u128,
    /// Bit `x` set iff `f(x) = -1`.
    pub bits: u128,
    /// Bit `w` set iff weight `w` is in the spectrum.
    pub weight_mask: u64,
    /// Bit `i` set iff axis `i` is relevant.
    pub relevant_mask: u64,
    /// Number of tables this candidate stands for (1 without reduction).
    pub multiplicity: u64,
}

impl Candidate {
    pub fn table(&self) -> FunctionTable {
        bits_to_table(&self.params, self.bits)
    }

    pub fn spectrum(&self) -> SpectrumReport {
        SpectrumReport::from_weights((0..64).filter(|w| self.weight_mask >> w & 1 == 1))
    }

    pub fn relevant_count(&self) -> usize {
        self.relevant_mask.count_ones() as usize
    }

    pub fn degree(&self) -> Option<usize> {
        (self.weight_mask != 0).then(|| 63 - self.weight_mask.leading_zeros() as usize)
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        let m = self.weight_mask & !1;
        (m != 0).then(|| m.trailing_zeros() as usize)
    }
}

pub fn bits_to_table(params: &DomainParams, bits: u128) -> FunctionTable {
    FunctionTable::pm1(*params, (0..params.size()).map(|x| 1 - 2 * ((bits >> x) & 1) as i64).collect())
        .expect("pm1 values")
}

/// Packs a Boolean table (pm1 or zero-one) into bits.
pub fn table_to_bits(f: &FunctionTable) -> Result<u128> {
    if f.len() > MAX_POINTS {
        return Err(Error::LimitExceeded(format!("{} points do not fit a packed table", f.len())));
    }
    let f = f.to_pm1()?;
    let v = f.int_values().expect("pm1 is integer");
    Ok(v.iter().enumerate().fold(0u128, |acc, (x, &val)| acc | (((val == -1) as u128) << x)))
}

fn ordinal_to_bits(ordinal: u128, points: usize) -> u128 {
    if points == 0 {
        0
    } else {
        ordinal.reverse_bits() >> (128 - points)
    }
}

/// Folds matching candidates into a per-chunk accumulator; chunk
/// accumulators are merged in chunk order.
pub trait Visitor: Sync {
    type Acc: Send;
    fn init(&self) -> Self::Acc;
    fn visit(&self, acc: &mut Self::Acc, candidate: &Candidate);
    fn merge(&self, left: Self::Acc, right: Self::Acc) -> Self::Acc;
}

/// Visitor that records nothing.
pub struct NoopVisitor;

impl Visitor for NoopVisitor {
    type Acc = ();
    fn init(&self) {}
    fn visit(&self, _: &mut (), _: &Candidate) {}
    fn merge(&self, _: (), _: ()) {}
}

/// Tables found for one spectrum shape `(d', d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumClassStats {
    pub d_prime: Option<usize>,
    pub d: Option<usize>,
    pub tables: u64,
    pub max_relevant: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationSummary<A> {
    pub count_visited: u64,
    /// Orbit representatives examined when symmetry reduction is on.
    pub representatives_visited: Option<u64>,
    pub count_matching: u64,
    pub pass: u64,
    pub fail: u64,
    pub not_applicable: u64,
    pub by_spectrum: Vec<SpectrumClassStats>,
    /// Applicable matching table closest to (or furthest past) its bound;
    /// ties go to the lexicographically smallest table.
    pub worst_case: Option<Witness>,
    #[serde(skip)]
    pub visitor: A,
}

/// Per-`(d', d, relevant)` verdicts, and a total order on how close each
/// combination is to its bound.
struct AuditTable {
    n: usize,
    verdict: Vec<Verdict>,
    rank: Vec<u32>,
    floor: Vec<u64>,
}

impl AuditTable {
    fn new(params: &DomainParams) -> Result<Self> {
        params.require_bound_alphabet()?;
        let n = params.n();
        let side = n + 1;
        let cells = side * side * side;
        let mut verdict = vec![Verdict::NotApplicable; cells];
        let mut floor = vec![0u64; cells];
        let mut scores: Vec<(BigRational, usize)> = Vec::new();
        for dp in 1..=n {
            for d in dp..=n {
                if dp + d > n + 1 {
                    continue;
                }
                let b = main_bound(dp, d, params.q())?;
                for rel in 0..=n {
                    let idx = (dp * side + d) * side + rel;
                    let r = BigRational::from_integer(BigInt::from(rel));
                    verdict[idx] = if r <= b { Verdict::Pass } else { Verdict::Fail };
                    floor[idx] = b.floor().to_integer().to_u64().unwrap_or(u64::MAX);
                    scores.push((r - &b, idx));
                }
            }
        }
        scores.sort();
        let mut rank = vec![0u32; cells];
        let mut current = 0u32;
        for i in 0..scores.len() {
            if i > 0 && scores[i].0 != scores[i - 1].0 {
                current += 1;
            }
            rank[scores[i].1] = current + 1;
        }
        Ok(Self { n, verdict, rank, floor })
    }

    fn index(&self, c: &Candidate) -> Option<usize> {
        let side = self.n + 1;
        Some((c.min_nonzero_weight()? * side + c.degree()?) * side + c.relevant_count())
    }
}

struct Evaluator<'a> {
    params: DomainParams,
    points: usize,
    q: usize,
    /// `jtab[u * N + x] = -<u, x> mod q`.
    jtab: Vec<u8>,
    weights: Vec<usize>,
    reducer: CyclotomicReducer,
    /// Per axis: mask of points with that coordinate 0, and the strides.
    axis_masks: Vec<(u128, usize)>,
    filter_mask: u64,
    group: Option<&'a SymmetryGroup>,
}

impl<'a> Evaluator<'a> {
    fn new(plan: &EnumerationPlan, group: Option<&'a SymmetryGroup>) -> Self {
        let params = plan.params;
        let points = params.size();
        let q = params.q() as usize;
        let mut jtab = vec![0u8; points * points];
        for u in 0..points {
            for x in 0..points {
                jtab[u * points + x] = ((q - params.dot_indices(u, x) as usize) % q) as u8;
            }
        }
        let axis_masks = (0..params.n())
            .map(|axis| {
                let mask = (0..points).filter(|&x| params.digit(x, axis) == 0).fold(0u128, |m, x| m | 1u128 << x);
                (mask, params.stride(axis))
            })
            .collect();
        let filter_mask = match &plan.spectrum_filter {
            Some(set) => set.iter().filter(|&&w| w < 64).fold(0u64, |m, &w| m | 1 << w),
            None => u64::MAX,
        };
        Self {
            params,
            points,
            q,
            jtab,
            weights: params.weights(),
            reducer: CyclotomicReducer::new(params.q()),
            axis_masks,
            filter_mask,
            group,
        }
    }

    fn counts_from_scratch(&self, bits: u128, counts: &mut [i64]) {
        counts.iter_mut().for_each(|c| *c = 0);
        for u in 0..self.points {
            let row = &self.jtab[u * self.points..(u + 1) * self.points];
            let slot = &mut counts[u * self.q..(u + 1) * self.q];
            for (x, &j) in row.iter().enumerate() {
                slot[j as usize] += 1 - 2 * ((bits >> x) & 1) as i64;
            }
        }
    }

    fn flip(&self, x: usize, now_set: bool, counts: &mut [i64]) {
        let delta = if now_set { -2 } else { 2 };
        for u in 0..self.points {
            counts[u * self.q + self.jtab[u * self.points + x] as usize] += delta;
        }
    }

    fn weight_mask(&self, counts: &[i64]) -> u64 {
        counts
            .chunks(self.q)
            .enumerate()
            .filter(|(_, c)| !self.reducer.is_zero(c))
            .fold(0u64, |m, (u, _)| m | 1 << self.weights[u])
    }

    fn relevant_mask(&self, bits: u128) -> u64 {
        let mut mask = 0u64;
        for (axis, &(zero, stride)) in self.axis_masks.iter().enumerate() {
            let base = bits & zero;
            if (1..self.q).any(|b| (bits >> (b * stride)) & zero != base) {
                mask |= 1 << axis;
            }
        }
        mask
    }

    /// Multiplicity of `bits` if it is its orbit's smallest table, else 0.
    fn representative_multiplicity(&self, ordinal: u128) -> u64 {
        let Some(group) = self.group else { return 1 };
        let bits = ordinal_to_bits(ordinal, self.points);
        let mut stabiliser = 0u64;
        for g in 0..group.order() {
            let image = ordinal_to_bits(group.act_on_bits(g, bits), self.points);
            if image < ordinal {
                return 0;
            }
            if image == ordinal {
                stabiliser += 1;
            }
        }
        group.order() as u64 / stabiliser
    }
}

struct ChunkResult<A> {
    visited: u64,
    representatives: u64,
    matching: u64,
    tallies: [u64; 3],
    classes: Vec<(u64, usize)>,
    worst: Option<(u32, u128, u128)>,
    acc: A,
}

impl<A> ChunkResult<A> {
    fn new(acc: A, class_cells: usize) -> Self {
        Self {
            visited: 0,
            representatives: 0,
            matching: 0,
            tallies: [0; 3],
            classes: vec![(0, 0); class_cells],
            worst: None,
            acc,
        }
    }
}

struct Run<'a, V: Visitor> {
    eval: Evaluator<'a>,
    audit: AuditTable,
    visitor: &'a V,
}

impl<V: Visitor> Run<'_, V> {
    fn class_index(&self, c: &Candidate) -> usize {
        let side = self.audit.n + 2;
        let dp = c.min_nonzero_weight().map_or(0, |w| w + 1);
        let d = c.degree().map_or(0, |w| w + 1);
        dp * side + d
    }

    fn consider(&self, out: &mut ChunkResult<V::Acc>, ordinal: u128, bits: u128, counts: &[i64], multiplicity: u64) {
        out.visited += multiplicity;
        out.representatives += 1;
        let weight_mask = self.eval.weight_mask(counts);
        if weight_mask & !self.eval.filter_mask != 0 {
            return;
        }
        let cand = Candidate {
            params: self.eval.params,
            ordinal,
            bits,
            weight_mask,
            relevant_mask: self.eval.relevant_mask(bits),
            multiplicity,
        };
        out.matching += multiplicity;
        let ci = self.class_index(&cand);
        out.classes[ci].0 += multiplicity;
        out.classes[ci].1 = out.classes[ci].1.max(cand.relevant_count());
        match self.audit.index(&cand) {
            Some(idx) if self.audit.verdict[idx] != Verdict::NotApplicable => {
                let slot = if self.audit.verdict[idx] == Verdict::Pass { 0 } else { 1 };
                out.tallies[slot] += multiplicity;
                let rank = self.audit.rank[idx];
                let better = match out.worst {
                    None => true,
                    Some((r, o, _)) => rank > r || (rank == r && ordinal < o),
                };
                if better {
                    out.worst = Some((rank, ordinal, bits));
                }
            }
            _ => out.tallies[2] += multiplicity,
        }
        self.visitor.visit(&mut out.acc, &cand);
    }

    fn exhaustive_chunk(&self, lo: u128, hi: u128) -> ChunkResult<V::Acc> {
        let class_cells = (self.audit.n + 2) * (self.audit.n + 2);
        let mut out = ChunkResult::new(self.visitor.init(), class_cells);
        let n_pts = self.eval.points;
        let mut counts = vec![0i64; n_pts * self.eval.q];
        let mut bits = ordinal_to_bits(lo, n_pts);
        self.eval.counts_from_scratch(bits, &mut counts);
        let mut ordinal = lo;
        loop {
            let mult = self.eval.representative_multiplicity(ordinal);
            if mult > 0 {
                self.consider(&mut out, ordinal, bits, &counts, mult);
            }
            let next = ordinal + 1;
            if next >= hi {
                break;
            }
            let mut changed = ordinal ^ next;
            while changed != 0 {
                let t = changed.trailing_zeros() as usize;
                changed &= changed - 1;
                let x = n_pts - 1 - t;
                let now_set = (next >> t) & 1 == 1;
                self.eval.flip(x, now_set, &mut counts);
                bits ^= 1u128 << x;
            }
            ordinal = next;
        }
        out
    }

    fn random_block(&self, seed: u64, block: u64, start: u64, end: u64) -> ChunkResult<V::Acc> {
        let class_cells = (self.audit.n + 2) * (self.audit.n + 2);
        let mut out = ChunkResult::new(self.visitor.init(), class_cells);
        let n_pts = self.eval.points;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        let mut counts = vec![0i64; n_pts * self.eval.q];
        let mask = if n_pts == 128 { u128::MAX } else { (1u128 << n_pts) - 1 };
        for _ in start..end {
            let bits = rng.random::<u128>() & mask;
            let ordinal = ordinal_to_bits(bits, n_pts);
            self.eval.counts_from_scratch(bits, &mut counts);
            self.consider(&mut out, ordinal, bits, &counts, 1);
        }
        out
    }
}

fn merge_chunks<V: Visitor>(visitor: &V, chunks: Vec<ChunkResult<V::Acc>>, class_cells: usize) -> ChunkResult<V::Acc> {
    let mut total = ChunkResult::new(visitor.init(), class_cells);
    for c in chunks {
        total.visited += c.visited;
        total.representatives += c.representatives;
        total.matching += c.matching;
        for i in 0..3 {
            total.tallies[i] += c.tallies[i];
        }
        for (t, s) in total.classes.iter_mut().zip(&c.classes) {
            t.0 += s.0;
            t.1 = t.1.max(s.1);
        }
        total.worst = match (total.worst, c.worst) {
            (None, w) | (w, None) => w,
            (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
        };
        total.acc = visitor.merge(total.acc, c.acc);
    }
    total
}

/// Runs the plan, feeding every matching table to `visitor`.
pub fn enumerate_boolean<V: Visitor>(plan: &EnumerationPlan, visitor: &V) -> Result<EnumerationSummary<V::Acc>> {
    let params = plan.params;
    let points = params.size();
    if points > MAX_POINTS || params.n() >= 63 {
        return Err(Error::LimitExceeded(format!("{points} points exceed the {MAX_POINTS}-point packed limit")));
    }
    let audit = AuditTable::new(&params)?;
    let group = match (plan.symmetry_reduction, plan.mode) {
        (true, EnumerationMode::Exhaustive) => Some(SymmetryGroup::new(params)?),
        (true, EnumerationMode::Random { .. }) => {
            return Err(Error::OutOfRange("symmetry reduction applies to exhaustive runs only".into()))
        }
        _ => None,
    };
    let run = Run { eval: Evaluator::new(plan, group.as_ref()), audit, visitor };
    let class_cells = (params.n() + 2) * (params.n() + 2);

    let chunks: Vec<ChunkResult<V::Acc>> = match plan.mode {
        EnumerationMode::Exhaustive => {
            let total = if points >= 64 { None } else { Some(1u64 << points) };
            let total = total.filter(|&t| t <= plan.max_tables).ok_or_else(|| {
                Error::LimitExceeded(format!("2^{points} tables exceed the limit of {}", plan.max_tables))
            })?;
            let nchunks = total.min(EXHAUSTIVE_CHUNKS);
            let size = total / nchunks;
            (0..nchunks)
                .into_par_iter()
                .map(|c| run.exhaustive_chunk((c * size) as u128, ((c + 1) * size) as u128))
                .collect()
        }
        EnumerationMode::Random { samples, seed } => {
            let blocks = samples.div_ceil(RANDOM_BLOCK);
            (0..blocks)
                .into_par_iter()
                .map(|b| run.random_block(seed, b, b * RANDOM_BLOCK, ((b + 1) * RANDOM_BLOCK).min(samples)))
                .collect()
        }
    };
    let total = merge_chunks(visitor, chunks, class_cells);

    let side = params.n() + 2;
    let by_spectrum = total
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.0 > 0)
        .map(|(i, c)| SpectrumClassStats {
            d_prime: (i / side).checked_sub(1),
            d: (i % side).checked_sub(1),
            tables: c.0,
            max_relevant: c.1,
        })
        .collect();
    let worst_case = total.worst.map(|(_, ordinal, bits)| {
        let cand = Candidate {
            params,
            ordinal,
            bits,
            weight_mask: 0,
            relevant_mask: run.eval.relevant_mask(bits),
            multiplicity: 1,
        };
        let mut counts = vec![0i64; points * params.q() as usize];
        run.eval.counts_from_scratch(bits, &mut counts);
        let cand = Candidate { weight_mask: run.eval.weight_mask(&counts), ..cand };
        let idx = run.audit.index(&cand).expect("worst case is applicable");
        Witness { table: cand.table(), achieved: cand.relevant_count() as u64, target: run.audit.floor[idx] }
    });
    Ok(EnumerationSummary {
        count_visited: total.visited,
        representatives_visited: group.as_ref().map(|_| total.representatives),
        count_matching: total.matching,
        pass: total.tallies[0],
        fail: total.tallies[1],
        not_applicable: total.tallies[2],
        by_spectrum,
        worst_case,
        visitor: total.acc,
    })
}
