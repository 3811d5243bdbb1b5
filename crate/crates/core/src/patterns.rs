//! Support constraints on generator matrices.
//!
//! A [`ZeroPattern`] lists, for each row `i`, the columns `Z_i` where the
//! generator matrix must vanish. The pattern is feasible when every nonempty
//! row subset `Ω` satisfies `|∩_{i∈Ω} Z_i| + |Ω| ≤ k`. With per-row shifts
//! `t_i` the condition becomes
//! `k - |∩ Z_i| - min t_i ≥ Σ (k - t_i - |Z_i|)`.
//!
//! Row subsets are enumerated exhaustively, so the number of rows is capped
//! at [`EXHAUSTIVE_BOUND`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of rows for subset enumeration.
pub const EXHAUSTIVE_BOUND: usize = 24;

/// Column indices are 1-based and at most 64.
pub const MAX_COLUMNS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct ZeroPattern {
    pub n: usize,
    pub k: usize,
    pub zeros: Vec<BTreeSet<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawPattern {
    n: usize,
    k: usize,
    zeros: Vec<Vec<usize>>,
    #[serde(default)]
    shifts: Option<Vec<usize>>,
}

impl TryFrom<RawPattern> for ZeroPattern {
    type Error = Error;

    fn try_from(raw: RawPattern) -> Result<Self> {
        ZeroPattern::with_shifts(raw.n, raw.k, raw.zeros, raw.shifts)
    }
}

impl ZeroPattern {
    /// An unshifted pattern with exactly `k` rows.
    pub fn new(n: usize, k: usize, zeros: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_shifts(n, k, zeros, None)
    }

    /// With shifts, the pattern may have any number `1 ≤ m ≤ k` of rows and
    /// every row must satisfy `|Z_i| + t_i ≤ k - 1`.
    pub fn with_shifts(n: usize, k: usize, zeros: Vec<Vec<usize>>, shifts: Option<Vec<usize>>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidPattern(msg));
        if k == 0 {
            return bad("k must be at least 1".into());
        }
        if n > MAX_COLUMNS {
            return bad(format!("n = {n} exceeds {MAX_COLUMNS} columns"));
        }
        let mut sets = Vec::with_capacity(zeros.len());
        for (i, row) in zeros.into_iter().enumerate() {
            let set: BTreeSet<usize> = row.into_iter().collect();
            if let Some(&j) = set.iter().find(|&&j| j == 0 || j > n) {
                return bad(format!("row {} references column {j} outside 1..={n}", i + 1));
            }
            sets.push(set);
        }
        match &shifts {
            None if sets.len() != k => return bad(format!("expected {k} rows, got {}", sets.len())),
            None => {}
            Some(t) => {
                if t.len() != sets.len() {
                    return bad(format!("{} shifts for {} rows", t.len(), sets.len()));
                }
                if sets.is_empty() || sets.len() > k {
                    return bad(format!("shifted pattern needs 1..={k} rows, got {}", sets.len()));
                }
                if let Some(i) = (0..sets.len()).find(|&i| sets[i].len() + t[i] > k - 1) {
                    return bad(format!("row {} has |Z| + t > k - 1", i + 1));
                }
            }
        }
        Ok(ZeroPattern { n, k, zeros: sets, shifts })
    }

    pub fn rows(&self) -> usize {
        self.zeros.len()
    }

    /// Shift of row `i` (0-based), zero when unshifted.
    pub fn shift(&self, i: usize) -> usize {
        self.shifts.as_ref().map_or(0, |t| t[i])
    }

    /// Column bit masks, bit `j - 1` for column `j`.
    pub fn masks(&self) -> Vec<u64> {
        self.zeros.iter().map(|z| z.iter().fold(0u64, |m, &j| m | 1 << (j - 1))).collect()
    }

    fn with_masks(&self, masks: &[u64]) -> ZeroPattern {
        let zeros = masks
            .iter()
            .map(|&m| (0..self.n).filter(|&j| m >> j & 1 == 1).map(|j| j + 1).collect())
            .collect();
        ZeroPattern { n: self.n, k: self.k, zeros, shifts: self.shifts.clone() }
    }

    pub fn is_normalized(&self) -> bool {
        self.zeros.iter().all(|z| z.len() + 1 == self.k)
    }

    /// Appends empty rows until there are `rows` of them and sets `k = rows`.
    pub fn padded(&self, rows: usize) -> ZeroPattern {
        let mut zeros = self.zeros.clone();
        zeros.resize(rows.max(zeros.len()), BTreeSet::new());
        ZeroPattern { n: self.n, k: zeros.len(), zeros, shifts: None }
    }

    /// Whether row `i` must vanish at column `j` (both 0-based).
    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.zeros[i].contains(&(j + 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// First violating row subset in lexicographic DFS order, 1-based.
    pub violating: Option<Vec<usize>>,
    /// `max |∩ Z_i| + |Ω|` over nonempty `Ω`, ignoring shifts.
    pub ell: usize,
    /// Smallest slack of the governing inequality, per `|Ω|` (index 0 is `|Ω| = 1`).
    pub tightness: Vec<i64>,
    pub min_slack: i64,
}

fn check_rows(pat: &ZeroPattern, bound: usize) -> Result<()> {
    if pat.rows() > bound {
        return Err(Error::PatternTooLarge { rows: pat.rows(), bound });
    }
    Ok(())
}

pub fn check_feasible(pat: &ZeroPattern) -> Result<FeasibilityReport> {
    check_feasible_bounded(pat, EXHAUSTIVE_BOUND)
}

pub fn check_feasible_bounded(pat: &ZeroPattern, bound: usize) -> Result<FeasibilityReport> {
    check_rows(pat, bound)?;
    let masks = pat.masks();
    let m = masks.len();
    let k = pat.k as i64;
    let mut walk = Walk {
        masks: &masks,
        tightness: vec![i64::MAX; m],
        violating: None,
        ell: 0,
        members: Vec::new(),
    };
    match &pat.shifts {
        None => walk.unshifted(0, u64::MAX, k),
        Some(t) => {
            let demand: Vec<i64> = (0..m).map(|i| k - t[i] as i64 - pat.zeros[i].len() as i64).collect();
            walk.shifted(0, u64::MAX, i64::MAX, 0, k, t, &demand)
        }
    }
    let min_slack = walk.tightness.iter().copied().min().unwrap_or(0);
    Ok(FeasibilityReport {
        feasible: walk.violating.is_none(),
        violating: walk.violating,
        ell: walk.ell,
        tightness: walk.tightness,
        min_slack,
    })
}

struct Walk<'a> {
    masks: &'a [u64],
    tightness: Vec<i64>,
    violating: Option<Vec<usize>>,
    ell: usize,
    members: Vec<usize>,
}

impl Walk<'_> {
    fn record(&mut self, size: usize, slack: i64) {
        let slot = &mut self.tightness[size - 1];
        *slot = (*slot).min(slack);
        if slack < 0 && self.violating.is_none() {
            self.violating = Some(self.members.iter().map(|i| i + 1).collect());
        }
    }

    fn unshifted(&mut self, start: usize, inter: u64, k: i64) {
        let m = self.masks.len();
        for idx in start..m {
            self.members.push(idx);
            let inter = inter & self.masks[idx];
            let size = self.members.len();
            let value = inter.count_ones() as usize + size;
            self.ell = self.ell.max(value);
            self.record(size, k - value as i64);
            if inter == 0 {
                // Every extension keeps an empty intersection, so its value is
                // just its size.
                let remaining = m - idx - 1;
                for extra in 1..=remaining {
                    self.tightness[size + extra - 1] = self.tightness[size + extra - 1].min(k - (size + extra) as i64);
                }
                self.ell = self.ell.max(size + remaining);
            } else {
                self.unshifted(idx + 1, inter, k);
            }
            self.members.pop();
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn shifted(&mut self, start: usize, inter: u64, min_t: i64, demand_sum: i64, k: i64, t: &[usize], demand: &[i64]) {
        for idx in start..self.masks.len() {
            self.members.push(idx);
            let inter = inter & self.masks[idx];
            let min_t = min_t.min(t[idx] as i64);
            let demand_sum = demand_sum + demand[idx];
            let size = self.members.len();
            self.ell = self.ell.max(inter.count_ones() as usize + size);
            self.record(size, k - inter.count_ones() as i64 - min_t - demand_sum);
            self.shifted(idx + 1, inter, min_t, demand_sum, k, t, demand);
            self.members.pop();
        }
    }
}

/// `ℓ = max |∩_{i∈Ω} Z_i| + |Ω|`; equals `k` exactly when the pattern is feasible.
pub fn compute_ell(pat: &ZeroPattern) -> Result<usize> {
    let unshifted = ZeroPattern { shifts: None, ..pat.clone() };
    Ok(check_feasible(&unshifted)?.ell)
}

/// Whether some `Ω ∋ i` violates `|∩ Z| + |Ω| ≤ k`.
fn violates_with(masks: &[u64], k: usize, i: usize) -> bool {
    fn rec(masks: &[u64], k: usize, skip: usize, start: usize, inter: u64, size: usize) -> bool {
        if inter.count_ones() as usize + size > k {
            return true;
        }
        if inter == 0 {
            return size + (start..masks.len()).filter(|&j| j != skip).count() > k;
        }
        (start..masks.len())
            .filter(|&j| j != skip)
            .any(|j| rec(masks, k, skip, j + 1, inter & masks[j], size + 1))
    }
    rec(masks, k, i, 0, masks[i], 1)
}

/// Greedily grows every row to `k - 1` zeros while keeping the pattern
/// feasible, always taking the lowest `(row, column)` that works.
pub fn complete_pattern(pat: &ZeroPattern) -> Result<ZeroPattern> {
    if pat.shifts.is_some() {
        return Err(Error::InvalidPattern("completion applies to unshifted patterns".into()));
    }
    if pat.n < pat.k {
        return Err(Error::InvalidPattern(format!("n = {} is smaller than k = {}", pat.n, pat.k)));
    }
    let report = check_feasible(pat)?;
    if let Some(omega) = report.violating {
        return Err(Error::Infeasible { omega });
    }
    let k = pat.k;
    let mut masks = pat.masks();
    loop {
        let mut progressed = false;
        let mut pending = false;
        'rows: for i in 0..masks.len() {
            if masks[i].count_ones() as usize >= k - 1 {
                continue;
            }
            pending = true;
            for j in 0..pat.n {
                if masks[i] >> j & 1 == 1 {
                    continue;
                }
                let old = masks[i];
                masks[i] |= 1 << j;
                if violates_with(&masks, k, i) {
                    masks[i] = old;
                } else {
                    progressed = true;
                    break 'rows;
                }
            }
        }
        if !pending {
            return Ok(pat.with_masks(&masks));
        }
        if !progressed {
            return Err(Error::InternalStall(
                "no feasible zero can be added although the pattern is feasible".into(),
            ));
        }
    }
}

/// A bipartite graph `(U, V, E)` with slack `c` and per-vertex demands `d_i`.
/// Vertices are 1-based in the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBipartite")]
pub struct BipartiteSpec {
    pub u: usize,
    pub v: usize,
    pub edges: BTreeSet<(usize, usize)>,
    pub c: usize,
    pub demands: Vec<usize>,
}

#[derive(Deserialize)]
struct RawBipartite {
    u: usize,
    v: usize,
    edges: Vec<(usize, usize)>,
    c: usize,
    demands: Vec<usize>,
}

impl TryFrom<RawBipartite> for BipartiteSpec {
    type Error = Error;

    fn try_from(raw: RawBipartite) -> Result<Self> {
        BipartiteSpec::new(raw.u, raw.v, raw.edges, raw.c, raw.demands)
    }
}

impl BipartiteSpec {
    pub fn new(u: usize, v: usize, edges: impl IntoIterator<Item = (usize, usize)>, c: usize, demands: Vec<usize>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidGraph(msg));
        if v > MAX_COLUMNS {
            return bad(format!("|V| = {v} exceeds {MAX_COLUMNS}"));
        }
        if demands.len() != u {
            return bad(format!("{} demands for {u} vertices", demands.len()));
        }
        if demands.contains(&0) {
            return bad("demands must be positive".into());
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(e) = edges.iter().find(|&&(i, j)| i == 0 || i > u || j == 0 || j > v) {
            return bad(format!("edge {e:?} out of range"));
        }
        Ok(BipartiteSpec { u, v, edges, c, demands })
    }

    /// The complete bipartite graph `K_{u,v}`.
    pub fn complete(u: usize, v: usize, c: usize, demands: Vec<usize>) -> Result<Self> {
        let edges = (1..=u).flat_map(|i| (1..=v).map(move |j| (i, j)));
        Self::new(u, v, edges, c, demands)
    }

    /// Neighborhood bit masks per `U`-vertex.
    pub fn neighborhoods(&self) -> Vec<u64> {
        let mut nb = vec![0u64; self.u];
        for &(i, j) in &self.edges {
            nb[i - 1] |= 1 << (j - 1);
        }
        nb
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, _)| a == i).count()
    }

    /// First `Ω` (1-based, lexicographic DFS order) with
    /// `|N(Ω)| < c + Σ_{i∈Ω} d_i`.
    pub fn hall_violation(&self) -> Result<Option<Vec<usize>>> {
        if self.u > EXHAUSTIVE_BOUND {
            return Err(Error::PatternTooLarge { rows: self.u, bound: EXHAUSTIVE_BOUND });
        }
        let nb = self.neighborhoods();
        let mut members = Vec::new();
        Ok(self.find_violation(&nb, 0, 0, 0, &mut members, None))
    }

    fn find_violation(
        &self,
        nb: &[u64],
        start: usize,
        union: u64,
        demand: usize,
        members: &mut Vec<usize>,
        required: Option<usize>,
    ) -> Option<Vec<usize>> {
        for idx in start..self.u {
            if Some(idx) == required {
                continue;
            }
            members.push(idx);
            let union = union | nb[idx];
            let demand = demand + self.demands[idx];
            if (union.count_ones() as usize) < self.c + demand {
                let mut omega: Vec<usize> = members.iter().map(|i| i + 1).collect();
                omega.sort_unstable();
                return Some(omega);
            }
            if let Some(w) = self.find_violation(nb, idx + 1, union, demand, members, required) {
                return Some(w);
            }
            members.pop();
        }
        None
    }

    fn violated_with(&self, nb: &[u64], i: usize) -> bool {
        let mut members = vec![i];
        if (nb[i].count_ones() as usize) < self.c + self.demands[i] {
            return true;
        }
        self.find_violation(nb, 0, nb[i], self.demands[i], &mut members, Some(i)).is_some()
    }
}

/// Removes edges, lowest `(i, j)` first, until every `i ∈ U` has degree
/// exactly `c + d_i`, rechecking all neighborhood inequalities at each step.
pub fn hall_reduce(g: &BipartiteSpec) -> Result<BipartiteSpec> {
    if let Some(omega) = g.hall_violation()? {
        return Err(Error::PreconditionViolated { omega });
    }
    let mut nb = g.neighborhoods();
    let target = |i: usize| g.c + g.demands[i];
    loop {
        let over: Vec<usize> = (0..g.u).filter(|&i| nb[i].count_ones() as usize > target(i)).collect();
        if over.is_empty() {
            break;
        }
        let mut removed = false;
        'search: for &i in &over {
            for j in 0..g.v {
                if nb[i] >> j & 1 == 0 {
                    continue;
                }
                nb[i] &= !(1 << j);
                if g.violated_with(&nb, i) {
                    nb[i] |= 1 << j;
                } else {
                    removed = true;
                    break 'search;
                }
            }
        }
        if !removed {
            return Err(Error::InternalStall("no edge can be removed without breaking an inequality".into()));
        }
    }
    let edges = (0..g.u).flat_map(|i| {
        let row = nb[i];
        (0..g.v).filter(move |&j| row >> j & 1 == 1).map(move |j| (i + 1, j + 1))
    });
    BipartiteSpec::new(g.u, g.v, edges, g.c, g.demands.clone())
}

/// The graph whose edges are the unconstrained positions `j ∉ Z_i`, with
/// `c = n - k` and unit demands. It satisfies the neighborhood inequalities
/// exactly when the pattern is feasible.
pub fn pattern_graph(pat: &ZeroPattern) -> Result<BipartiteSpec> {
    if pat.n < pat.k {
        return Err(Error::InvalidPattern(format!("n = {} is smaller than k = {}", pat.n, pat.k)));
    }
    let edges = (0..pat.rows()).flat_map(|i| {
        (1..=pat.n).filter(move |j| !pat.zeros[i].contains(j)).map(move |j| (i + 1, j))
    });
    BipartiteSpec::new(pat.rows(), pat.n, edges, pat.n - pat.k, vec![1; pat.rows()])
}
