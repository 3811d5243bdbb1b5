//! Construction of Gabidulin codes whose generator matrix vanishes on a
//! prescribed pattern, and of subcodes when the pattern is infeasible.
//!
//! For evaluation points `α_1..α_n` independent over `F_q`, row `i` of the
//! generator is `(f_i(α_1), ..., f_i(α_n))` where `f_i` is the monic
//! subspace polynomial of `span{α_j : j ∈ Z_i}`. Stacking the coefficients of
//! the `f_i` gives `T` with `G = T · Moore(α)`, and the code is a Gabidulin
//! code exactly when `det T ≠ 0`. The search samples evaluation points until
//! both the independence and the determinant test pass.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx};
use crate::linq::LinPoly;
use crate::matrix::Matrix;
use crate::patterns::{check_feasible, complete_pattern, compute_ell, ZeroPattern};

/// Seed used when the caller does not provide one.
pub const DEFAULT_SEED: u64 = 0x6761_6269_6475_6c6e;

pub const DEFAULT_MAX_ATTEMPTS: u64 = 1000;

/// Cap on `(q^s)^n` for the exhaustive strategy.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Gabidulin,
    Subcode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Uniform sampling, one independent RNG stream per attempt.
    Random,
    /// All independent tuples in lexicographic order of their encodings.
    Enumerate,
    /// A single caller-supplied tuple.
    Fixed(Vec<FElem>),
}

#[derive(Clone, Debug)]
pub struct ConstructOptions {
    pub seed: u64,
    pub max_attempts: u64,
    pub strategy: Strategy,
    /// Proceed when `n ≤ s` but `s` is below the existence bound.
    pub force: bool,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { seed: DEFAULT_SEED, max_attempts: DEFAULT_MAX_ATTEMPTS, strategy: Strategy::Random, force: false }
    }
}

#[derive(Clone, Debug)]
pub struct CodeArtifact {
    pub field: Arc<FieldCtx>,
    pub alphas: Vec<FElem>,
    /// Monic row polynomials; `ell` of them in subcode mode.
    pub f_list: Vec<LinPoly>,
    pub t: Matrix,
    /// `k × n` generator.
    pub g: Matrix,
    pub attempts: u64,
    pub seed: u64,
    pub mode: Mode,
    pub ell: usize,
    /// Normalized pattern the construction enforced; absent when loaded
    /// from JSON.
    pub pattern: Option<ZeroPattern>,
    pub warnings: Vec<String>,
}

impl CodeArtifact {
    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }
}

/// Smallest `s ≥ n` with `q^{s-k+1} ≥ k`, the integer form of
/// `s ≥ max{n, k - 1 + log_q k}`.
pub fn min_extension_degree(q: u64, n: usize, k: usize) -> Result<u32> {
    if k == 0 || k > n {
        return Err(Error::BadDimensions(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    if q < 2 {
        return Err(Error::BadDimensions(format!("q = {q}")));
    }
    let mut s = n;
    loop {
        // q^{s-k+1} ≥ k, computed without overflow.
        let mut power: u128 = 1;
        for _ in 0..(s + 1 - k) {
            power *= q as u128;
            if power >= k as u128 {
                break;
            }
        }
        if power >= k as u128 {
            return Ok(s as u32);
        }
        s += 1;
    }
}

/// Entry `(i, j)` is `α_j^{q^i}`.
pub fn moore_matrix(field: &FieldCtx, alphas: &[FElem], rows: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, alphas.len());
    for (j, &a) in alphas.iter().enumerate() {
        let mut cur = a;
        for i in 0..rows {
            m[(i, j)] = cur;
            cur = field.frobenius(cur, 1);
        }
    }
    m
}

/// The monic row polynomials and their `k × k` coefficient matrix.
pub fn build_t(field: &Arc<FieldCtx>, alphas: &[FElem], pat: &ZeroPattern) -> Result<(Matrix, Vec<LinPoly>)> {
    let k = pat.k;
    if let Some(row) = (0..pat.rows()).find(|&i| pat.zeros[i].len() + 1 != k) {
        return Err(Error::PatternNotNormalized { row: row + 1, size: pat.zeros[row].len() });
    }
    if alphas.len() != pat.n {
        return Err(Error::BadDimensions(format!("{} points for length {}", alphas.len(), pat.n)));
    }
    if field.rank_over_base(alphas) != alphas.len() {
        return Err(Error::DependentAlphas);
    }
    let f_list: Vec<LinPoly> = pat
        .zeros
        .iter()
        .map(|z| {
            let gens: Vec<FElem> = z.iter().map(|&j| alphas[j - 1]).collect();
            LinPoly::subspace_poly(field, &gens, 0)
        })
        .collect();
    let rows = f_list.iter().map(|f| (0..k).map(|j| f.coeff(j)).collect()).collect();
    Ok((Matrix::from_rows(rows)?, f_list))
}

fn attempt_rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// `Some((T, f_list))` when the points are independent and `det T ≠ 0`.
fn try_points(field: &Arc<FieldCtx>, alphas: &[FElem], pat: &ZeroPattern) -> Option<(Matrix, Vec<LinPoly>)> {
    let (t, f_list) = build_t(field, alphas, pat).ok()?;
    let det = t.det(field).ok()?;
    (!det.is_zero()).then_some((t, f_list))
}

struct Found {
    alphas: Vec<FElem>,
    t: Matrix,
    f_list: Vec<LinPoly>,
    attempts: u64,
}

fn search(field: &Arc<FieldCtx>, pat: &ZeroPattern, opts: &ConstructOptions) -> Result<Found> {
    let n = pat.n;
    match &opts.strategy {
        Strategy::Fixed(alphas) => {
            if field.rank_over_base(alphas) != alphas.len() {
                return Err(Error::DependentAlphas);
            }
            let (t, f_list) = try_points(field, alphas, pat).ok_or(Error::AttemptsExhausted(1))?;
            Ok(Found { alphas: alphas.clone(), t, f_list, attempts: 1 })
        }
        Strategy::Random => {
            let sample = |attempt: u64| {
                let mut rng = attempt_rng(opts.seed, attempt);
                (0..n).map(|_| field.random(&mut rng)).collect::<Vec<_>>()
            };
            // Lowest successful attempt index wins regardless of scheduling.
            let hit = (0..opts.max_attempts)
                .into_par_iter()
                .find_first(|&a| try_points(field, &sample(a), pat).is_some())
                .ok_or(Error::AttemptsExhausted(opts.max_attempts))?;
            let alphas = sample(hit);
            let (t, f_list) = try_points(field, &alphas, pat).expect("attempt already succeeded");
            Ok(Found { alphas, t, f_list, attempts: hit + 1 })
        }
        Strategy::Enumerate => {
            let space = (field.order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            if space > ENUMERATION_LIMIT {
                return Err(Error::EnumerationTooLarge(space));
            }
            let mut prefix = Vec::with_capacity(n);
            let mut attempts = 0;
            enumerate(field, pat, &mut prefix, &mut attempts, opts.max_attempts)
                .map(|(alphas, t, f_list)| Found { alphas, t, f_list, attempts })
                .ok_or(Error::AttemptsExhausted(attempts))
        }
    }
}

type Hit = (Vec<FElem>, Matrix, Vec<LinPoly>);

fn enumerate(field: &Arc<FieldCtx>, pat: &ZeroPattern, prefix: &mut Vec<FElem>, attempts: &mut u64, max: u64) -> Option<Hit> {
    if prefix.len() == pat.n {
        *attempts += 1;
        return try_points(field, prefix, pat).map(|(t, f)| (prefix.clone(), t, f));
    }
    for v in 1..field.order() {
        if *attempts >= max {
            return None;
        }
        prefix.push(FElem(v));
        if field.rank_over_base(prefix) == prefix.len() {
            if let Some(hit) = enumerate(field, pat, prefix, attempts, max) {
                return Some(hit);
            }
        }
        prefix.pop();
    }
    None
}

fn check_field_size(field: &FieldCtx, n: usize, k: usize, force: bool) -> Result<Vec<String>> {
    let required = min_extension_degree(field.q(), n, k)?;
    let s = field.s();
    if (s as usize) < n {
        return Err(Error::FieldTooSmall { s, required });
    }
    if s < required {
        if !force {
            return Err(Error::FieldTooSmall { s, required });
        }
        return Ok(vec![format!(
            "extension degree {s} is below the existence bound {required}; success is not guaranteed"
        )]);
    }
    Ok(Vec::new())
}

/// Builds a Gabidulin code whose generator vanishes on `pat`.
pub fn construct(pat: &ZeroPattern, field: &Arc<FieldCtx>, opts: &ConstructOptions) -> Result<CodeArtifact> {
    if pat.shifts.is_some() {
        return Err(Error::InvalidPattern("shifted patterns describe algebraic instances, not codes".into()));
    }
    let report = check_feasible(pat)?;
    if let Some(omega) = report.violating {
        return Err(Error::Infeasible { omega });
    }
    let warnings = check_field_size(field, pat.n, pat.k, opts.force)?;
    let normalized = complete_pattern(pat)?;
    let found = search(field, &normalized, opts)?;
    let moore = moore_matrix(field, &found.alphas, pat.k);
    let g = found.t.mul(field, &moore)?;
    Ok(CodeArtifact {
        field: field.clone(),
        alphas: found.alphas,
        f_list: found.f_list,
        t: found.t,
        g,
        attempts: found.attempts,
        seed: opts.seed,
        mode: Mode::Gabidulin,
        ell: pat.k,
        pattern: Some(normalized),
        warnings,
    })
}

/// Builds a `k`-dimensional subcode of an `ℓ`-dimensional Gabidulin code
/// whose generator vanishes on `pat`, reaching rank distance `n - ℓ + 1`.
pub fn construct_subcode(pat: &ZeroPattern, field: &Arc<FieldCtx>, opts: &ConstructOptions) -> Result<CodeArtifact> {
    if pat.shifts.is_some() {
        return Err(Error::InvalidPattern("shifted patterns describe algebraic instances, not codes".into()));
    }
    let ell = compute_ell(pat)?;
    if ell > pat.n {
        return Err(Error::BadDimensions(format!("ℓ = {ell} exceeds the length n = {}", pat.n)));
    }
    let padded = pat.padded(ell);
    let mut art = construct(&padded, field, opts)?;
    art.g = art.g.top_rows(pat.k);
    art.mode = Mode::Subcode;
    art.ell = ell;
    Ok(art)
}
