//! Ground-truth checks: brute-force distances, `S`-matrices of linearized
//! polynomials, the stacked matrix `M(r)` and its randomized full-rank test,
//! and bundled verification of constructed artifacts.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::builder::{moore_matrix, CodeArtifact, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx};
use crate::linq::LinPoly;
use crate::matrix::Matrix;
use crate::patterns::{check_feasible, ZeroPattern};

/// Default number of codewords enumerated before falling back to sampling.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// Largest number of column subsets examined by the MDS minor test.
const MINOR_LIMIT: u64 = 200_000;

/// Rank of a codeword over the base field.
pub fn codeword_rank(field: &FieldCtx, c: &[FElem]) -> usize {
    field.rank_over_base(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    Sampled,
}

/// A minimum distance. Sampled values are upper bounds on the true minimum
/// unless marked exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Distance {
    pub value: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub d_r: Distance,
    pub d_h: Distance,
    pub method: Method,
    pub codewords_checked: u64,
    /// Message attaining the smallest rank seen.
    pub witness: Vec<FElem>,
    pub witness_codeword: Vec<FElem>,
    /// Codewords whose rank exceeded their Hamming weight. Always zero for a
    /// correct rank computation.
    pub rank_above_weight: u64,
    /// Whether every `k`-column minor is nonzero; `None` when there are too
    /// many subsets to check.
    pub mds_minors: Option<bool>,
}

#[derive(Clone, Copy)]
struct Best {
    rank: (usize, u64),
    weight: (usize, u64),
    bad: u64,
}

impl Best {
    fn empty() -> Self {
        Best { rank: (usize::MAX, u64::MAX), weight: (usize::MAX, u64::MAX), bad: 0 }
    }

    fn merge(self, o: Best) -> Best {
        Best { rank: self.rank.min(o.rank), weight: self.weight.min(o.weight), bad: self.bad + o.bad }
    }
}

fn message_from_index(field: &FieldCtx, mut idx: u64, k: usize) -> Vec<FElem> {
    let order = field.order();
    (0..k)
        .map(|_| {
            let d = idx % order;
            idx /= order;
            FElem(d)
        })
        .collect()
}

/// The `i`-th sampled nonzero message, drawn from its own stream so any
/// sample can be regenerated independently.
fn sampled_message(field: &FieldCtx, seed: u64, i: u64, k: usize) -> Vec<FElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    loop {
        let m: Vec<FElem> = (0..k).map(|_| field.random(&mut rng)).collect();
        if m.iter().any(|x| !x.is_zero()) {
            return m;
        }
    }
}

fn inspect(field: &FieldCtx, g: &Matrix, msg: &[FElem], idx: u64) -> Best {
    let c = g.left_mul_vec(field, msg);
    let rank = field.rank_over_base(&c);
    let weight = c.iter().filter(|x| !x.is_zero()).count();
    Best { rank: (rank, idx), weight: (weight, idx), bad: (rank > weight) as u64 }
}

/// Every `k`-column subset has a nonzero determinant.
pub fn mds_minor_check(field: &FieldCtx, g: &Matrix) -> Option<bool> {
    let (k, n) = (g.rows(), g.cols());
    if k == 0 || k > n {
        return Some(false);
    }
    let mut count: u64 = 1;
    for i in 0..k as u64 {
        count = count * (n as u64 - i) / (i + 1);
        if count > MINOR_LIMIT {
            return None;
        }
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if g.select_cols(&idx).det(field).map_or(true, |d| d.is_zero()) {
            return Some(false);
        }
        // Next combination in lexicographic order.
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return Some(true);
        };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// Minimum rank and Hamming distance of the code generated by `g`.
///
/// All `(q^s)^k - 1` nonzero messages are enumerated when that fits in
/// `budget`; otherwise `budget` uniform messages are sampled and the Hamming
/// distance is certified by the minor test where possible.
pub fn min_distances(field: &FieldCtx, g: &Matrix, budget: u64, seed: u64) -> DistanceReport {
    let (k, n) = (g.rows(), g.cols());
    let total = (field.order() as u128).checked_pow(k as u32).map(|t| t - 1);
    let mds_minors = mds_minor_check(field, g);
    let exhaustive = total.is_some_and(|t| t <= budget as u128);
    let (best, checked, method) = if exhaustive {
        let total = total.unwrap() as u64;
        let best = (1..total as usize + 1)
            .into_par_iter()
            .with_min_len(1024)
            .map(|idx| inspect(field, g, &message_from_index(field, idx as u64, k), idx as u64))
            .reduce(Best::empty, Best::merge);
        (best, total, Method::Exhaustive)
    } else {
        let best = (0..budget as usize)
            .into_par_iter()
            .with_min_len(1024)
            .map(|i| inspect(field, g, &sampled_message(field, seed, i as u64, k), i as u64))
            .reduce(Best::empty, Best::merge);
        (best, budget, Method::Sampled)
    };
    let witness = if checked == 0 {
        Vec::new()
    } else if exhaustive {
        message_from_index(field, best.rank.1, k)
    } else {
        sampled_message(field, seed, best.rank.1, k)
    };
    let witness_codeword = if witness.is_empty() { Vec::new() } else { g.left_mul_vec(field, &witness) };
    let empty = checked == 0;
    let d_h = if !exhaustive && mds_minors == Some(true) {
        Distance { value: n + 1 - k, exact: true }
    } else {
        Distance { value: if empty { 0 } else { best.weight.0 }, exact: exhaustive }
    };
    DistanceReport {
        d_r: Distance { value: if empty { 0 } else { best.rank.0 }, exact: exhaustive },
        d_h,
        method,
        codewords_checked: checked,
        witness,
        witness_codeword,
        rank_above_weight: best.bad,
        mds_minors,
    }
}

/// The `a × b` matrix with entry `(i, j) = c_{j-i}^{q^i}`, so that a row
/// vector of `S(g)` coefficients times `S(f)` gives those of `g ∘ f`.
pub fn s_matrix(f: &LinPoly, a: usize, b: usize) -> Result<Matrix> {
    let deg = f.q_degree().unwrap_or(0);
    if b < a || b - a < deg {
        return Err(Error::DimensionTooSmall(format!("S_{a}x{b} needs b - a ≥ {deg}")));
    }
    let field = f.field();
    let mut m = Matrix::zeros(a, b);
    for (offset, &c) in f.coeffs().iter().enumerate() {
        let mut cur = c;
        for i in 0..a {
            m[(i, i + offset)] = cur;
            cur = field.frobenius(cur, 1);
        }
    }
    Ok(m)
}

/// Rows `(Z_i, t_i)` of a shifted pattern together with concrete values
/// for the indeterminates `x_1..x_n`.
#[derive(Clone, Debug)]
pub struct MrInstance {
    pub pattern: ZeroPattern,
    pub xs: Vec<FElem>,
}

#[derive(Clone, Debug)]
pub struct MrMatrix {
    pub matrix: Matrix,
    pub rank: usize,
    pub full_row_rank: bool,
    /// Every block has its first `r + t_i` columns zero.
    pub leading_zero_columns: bool,
}

/// The polynomial `f(Z, t)` instantiated at `xs`.
pub fn shifted_subspace_poly(field: &Arc<FieldCtx>, zeros: &std::collections::BTreeSet<usize>, t: usize, xs: &[FElem]) -> LinPoly {
    let gens: Vec<FElem> = zeros.iter().map(|&j| xs[j - 1]).collect();
    LinPoly::subspace_poly(field, &gens, t)
}

/// Stacks `S_{(k - t_i - |Z_i|) × (k + r)}(f_i^{q^r})` over all rows.
pub fn build_mr(field: &Arc<FieldCtx>, inst: &MrInstance, r: usize) -> Result<MrMatrix> {
    let pat = &inst.pattern;
    let k = pat.k;
    if inst.xs.len() != pat.n {
        return Err(Error::InvalidInstance(format!("{} values for {} indeterminates", inst.xs.len(), pat.n)));
    }
    let mut stacked = Matrix::zeros(0, k + r);
    let mut leading_zero_columns = true;
    for (i, z) in pat.zeros.iter().enumerate() {
        let t = pat.shift(i);
        if z.len() + t + 1 > k {
            return Err(Error::InvalidInstance(format!("row {} has |Z| + t > k - 1", i + 1)));
        }
        let f = shifted_subspace_poly(field, z, t, &inst.xs).twist(r);
        let block = s_matrix(&f, k - t - z.len(), k + r)?;
        leading_zero_columns &= (0..block.rows()).all(|row| (0..r + t).all(|c| block[(row, c)].is_zero()));
        stacked = stacked.vstack(&block)?;
    }
    let rank = stacked.rank(field);
    Ok(MrMatrix { full_row_rank: rank == stacked.rows(), rank, matrix: stacked, leading_zero_columns })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    CounterexampleCandidate,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub r: usize,
    pub trials: usize,
    pub full_rank: usize,
    pub escalated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem4Report {
    pub condition: bool,
    pub violating: Option<Vec<usize>>,
    pub verdict: Verdict,
    pub rounds: Vec<RoundStats>,
}

#[derive(Clone, Debug)]
pub struct Theorem4Options {
    /// Largest `r` tested, inclusive.
    pub r_max: usize,
    pub trials: usize,
    /// Extra trials when every regular trial was rank deficient.
    pub escalation: usize,
    pub seed: u64,
}

impl Default for Theorem4Options {
    fn default() -> Self {
        Theorem4Options { r_max: 3, trials: 5, escalation: 25, seed: DEFAULT_SEED }
    }
}

fn sample_independent<R: Rng>(field: &FieldCtx, n: usize, rng: &mut R) -> Vec<FElem> {
    loop {
        let xs: Vec<FElem> = (0..n).map(|_| field.random(rng)).collect();
        if field.rank_over_base(&xs) == n {
            return xs;
        }
    }
}

/// Randomized check of the equivalence between the subset condition and
/// full row rank of `M(r)` for `r = 0..=r_max`.
///
/// Rank deficiency under a violated condition is forced by a factorization
/// through a tall matrix, so a single full-rank instance is a hard
/// violation. Under a satisfied condition full rank holds generically, so
/// only the absence of any full-rank hit (after escalation) is flagged.
pub fn theorem4_check(field: &Arc<FieldCtx>, pat: &ZeroPattern, opts: &Theorem4Options) -> Result<Theorem4Report> {
    if pat.n > field.s() as usize {
        return Err(Error::InvalidInstance(format!(
            "{} independent values do not fit in an extension of degree {}",
            pat.n,
            field.s()
        )));
    }
    let shifted = match pat.shifts {
        Some(_) => pat.clone(),
        None => ZeroPattern::with_shifts(pat.n, pat.k, vec_rows(pat), Some(vec![0; pat.rows()]))
            .map_err(|e| Error::InvalidInstance(e.to_string()))?,
    };
    let report = check_feasible(&shifted)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let trial = |r: usize, rng: &mut ChaCha8Rng| -> Result<bool> {
        let xs = sample_independent(field, shifted.n, rng);
        let inst = MrInstance { pattern: shifted.clone(), xs };
        Ok(build_mr(field, &inst, r)?.full_row_rank)
    };
    let mut rounds = Vec::new();
    let mut verdict = Verdict::Consistent;
    for r in 0..=opts.r_max {
        rng.set_stream(r as u64);
        let mut stats = RoundStats { r, trials: 0, full_rank: 0, escalated: false };
        for _ in 0..opts.trials {
            stats.trials += 1;
            stats.full_rank += trial(r, &mut rng)? as usize;
        }
        if report.feasible && stats.full_rank == 0 {
            stats.escalated = true;
            for _ in 0..opts.escalation {
                stats.trials += 1;
                if trial(r, &mut rng)? {
                    stats.full_rank += 1;
                    break;
                }
            }
            if stats.full_rank == 0 && verdict == Verdict::Consistent {
                verdict = Verdict::CounterexampleCandidate;
            }
        }
        if !report.feasible && stats.full_rank > 0 {
            verdict = Verdict::Violation;
        }
        rounds.push(stats);
    }
    Ok(Theorem4Report { condition: report.feasible, violating: report.violating, verdict, rounds })
}

fn vec_rows(pat: &ZeroPattern) -> Vec<Vec<usize>> {
    pat.zeros.iter().map(|z| z.iter().copied().collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub distances: Option<DistanceReport>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs independence, `det T`, factorization, zero-placement and distance
/// checks on `art` against the user pattern `pat`.
pub fn verify_artifact(art: &CodeArtifact, pat: &ZeroPattern, budget: u64) -> VerificationReport {
    let field = &art.field;
    let n = art.alphas.len();
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| checks.push(Check { name, passed, detail });

    let rank = field.rank_over_base(&art.alphas);
    push(
        "alpha_independence",
        rank == n,
        if rank == n { format!("rank {rank}") } else { format!("DependentAlphas: rank {rank} < {n}") },
    );

    let last = art.t.cols().checked_sub(1);
    let monic = last.is_some_and(|c| (0..art.t.rows()).all(|i| art.t[(i, c)] == FElem::ONE));
    push("t_monic", monic, String::new());

    let det = art.t.det(field);
    let det_ok = matches!(det, Ok(d) if !d.is_zero());
    push(
        "det_t_nonzero",
        det_ok,
        match det {
            Ok(d) => format!("det T = {}", field.display_power(d)),
            Err(e) => e.to_string(),
        },
    );

    let expected_g = art
        .t
        .mul(field, &moore_matrix(field, &art.alphas, art.t.cols()))
        .map(|m| m.top_rows(art.g.rows()));
    let factor_ok = expected_g.as_ref().is_ok_and(|m| *m == art.g);
    push("moore_factorization", factor_ok, String::new());

    let dims_ok = pat.n == art.g.cols() && pat.rows() <= art.t.rows() && art.g.rows() == pat.rows();
    let mut witness = None;
    if dims_ok {
        'scan: for i in 0..pat.rows() {
            for &j in &pat.zeros[i] {
                if !art.g[(i, j - 1)].is_zero() {
                    witness = Some((i + 1, j));
                    break 'scan;
                }
            }
        }
    }
    push(
        "zero_placement",
        dims_ok && witness.is_none(),
        match (dims_ok, witness) {
            (false, _) => "pattern dimensions do not match the generator".into(),
            (true, Some((i, j))) => format!("G[{i}][{j}] must be zero"),
            (true, None) => String::new(),
        },
    );

    let distances = (art.g.rows() > 0).then(|| min_distances(field, &art.g, budget, art.seed));
    if let Some(d) = &distances {
        let target = (n + 1).saturating_sub(art.ell);
        let ok = if d.d_r.exact { d.d_r.value == target } else { d.d_r.value >= target };
        push("rank_distance", ok, format!("d_R = {} (target {target})", d.d_r.value));
        push(
            "rank_below_hamming",
            d.rank_above_weight == 0 && d.d_r.value <= d.d_h.value,
            format!("d_R = {}, d_H = {}", d.d_r.value, d.d_h.value),
        );
    }

    let passed = checks.iter().all(|c| c.passed);
    VerificationReport { passed, checks, distances }
}
