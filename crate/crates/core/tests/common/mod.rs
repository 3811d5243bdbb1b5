//! Reference implementations used to cross-check the library. They share no
//! code paths with it beyond element encoding: field products go through the
//! modulus directly, linearized polynomials are expanded into ordinary ones,
//! and every combinatorial quantity is computed by plain subset enumeration.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use gabidulin::{FElem, FieldCtx, LinPoly, Matrix, ZeroPattern};
use gabidulin::oracle::s_matrix;
use rand::Rng;

pub fn f16() -> Arc<FieldCtx> {
    Arc::new(FieldCtx::new(2, 4, Some(&[1, 1, 0, 0, 1])).unwrap())
}

/// Default-modulus fields, built once per thread since large ones carry tables.
pub fn field(p: u64, s: u32) -> Arc<FieldCtx> {
    thread_local! {
        static CACHE: std::cell::RefCell<HashMap<(u64, u32), Arc<FieldCtx>>> = Default::default();
    }
    CACHE.with(|c| c.borrow_mut().entry((p, s)).or_insert_with(|| Arc::new(FieldCtx::new(p, s, None).unwrap())).clone())
}

pub fn e(field: &FieldCtx, v: u64) -> FElem {
    field.elem(v).unwrap()
}

fn digits(mut v: u64, p: u64, s: usize) -> Vec<u64> {
    (0..s)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Schoolbook product modulo the defining polynomial.
pub fn mul_ref(field: &FieldCtx, a: FElem, b: FElem) -> FElem {
    let (p, s) = (field.p(), field.s() as usize);
    let (x, y) = (digits(a.value(), p, s), digits(b.value(), p, s));
    let mut prod = vec![0u64; 2 * s];
    for i in 0..s {
        for j in 0..s {
            prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
        }
    }
    let m = field.modulus();
    for d in (s..2 * s).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        // The modulus is monic: subtract c·x^{d-s}·m.
        for (i, &mi) in m.iter().enumerate() {
            let idx = d - s + i;
            prod[idx] = (prod[idx] + p * p - (c * mi) % p) % p;
        }
    }
    e(field, undigits(&prod[..s], p))
}

/// Adds coordinates digit-wise.
pub fn add_ref(field: &FieldCtx, a: FElem, b: FElem) -> FElem {
    let (p, s) = (field.p(), field.s() as usize);
    let sum: Vec<u64> = digits(a.value(), p, s).iter().zip(digits(b.value(), p, s)).map(|(x, y)| (x + y) % p).collect();
    e(field, undigits(&sum, p))
}

pub fn pow_ref(field: &FieldCtx, a: FElem, e: u64) -> FElem {
    (0..e).fold(field.one(), |acc, _| mul_ref(field, acc, a))
}

/// Irreducibility over `F_p` by trial division with every monic polynomial
/// of degree at most half. Coefficients lowest first.
pub fn irreducible_brute(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut div = digits(low, p, d);
            div.push(1);
            if poly_mod_p(m, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - (c * bi) % p) % p;
        }
        r.pop();
    }
    r
}

/// Rank over `F_p` of the coordinate vectors.
pub fn rank_ref(field: &FieldCtx, elems: &[FElem]) -> usize {
    let (p, s) = (field.p(), field.s() as usize);
    let mut rows: Vec<Vec<u64>> = elems.iter().map(|a| digits(a.value(), p, s)).collect();
    let inv = |x: u64| (1..p).find(|&y| x * y % p == 1).unwrap();
    let mut rank = 0;
    for col in 0..s {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let scale = inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = *x * scale % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let c = rows[r][col];
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x = (*x + p * p - c * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

// ---- ordinary polynomials over F_{q^s}, coefficients lowest first ----

pub type Dense = Vec<FElem>;

fn trim(mut a: Dense) -> Dense {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn dense_add(field: &FieldCtx, a: &Dense, b: &Dense) -> Dense {
    let n = a.len().max(b.len());
    let get = |v: &Dense, i: usize| v.get(i).copied().unwrap_or(FElem::ZERO);
    trim((0..n).map(|i| add_ref(field, get(a, i), get(b, i))).collect())
}

pub fn dense_mul(field: &FieldCtx, a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_ref(field, out[i + j], mul_ref(field, x, y));
        }
    }
    trim(out)
}

fn dense_scale(field: &FieldCtx, a: &Dense, c: FElem) -> Dense {
    trim(a.iter().map(|&x| mul_ref(field, x, c)).collect())
}

pub fn dense_rem(field: &FieldCtx, a: &Dense, b: &Dense) -> Dense {
    let b = trim(b.clone());
    let lead_inv = field.inv(*b.last().unwrap()).unwrap();
    let mut r = trim(a.clone());
    while r.len() >= b.len() {
        let c = mul_ref(field, *r.last().unwrap(), lead_inv);
        let shift = r.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], mul_ref(field, c, bi));
        }
        r = trim(r);
    }
    r
}

pub fn dense_monic(field: &FieldCtx, a: &Dense) -> Dense {
    match a.last() {
        None => Vec::new(),
        Some(&l) => dense_scale(field, a, field.inv(l).unwrap()),
    }
}

/// Monic gcd by the ordinary Euclidean algorithm.
pub fn dense_gcd(field: &FieldCtx, a: &Dense, b: &Dense) -> Dense {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = dense_rem(field, &a, &b);
        a = b;
        b = r;
    }
    dense_monic(field, &a)
}

pub fn dense_eval(field: &FieldCtx, a: &Dense, v: FElem) -> FElem {
    a.iter().rev().fold(FElem::ZERO, |acc, &c| add_ref(field, mul_ref(field, acc, v), c))
}

/// `a(b(x))` by Horner's rule.
pub fn dense_compose(field: &FieldCtx, a: &Dense, b: &Dense) -> Dense {
    a.iter().rev().fold(Vec::new(), |acc, &c| dense_add(field, &dense_mul(field, &acc, b), &vec![c]))
}

/// `Σ c_i x^{q^i}` written out as an ordinary polynomial.
pub fn expand(f: &LinPoly) -> Dense {
    let q = f.field().q() as usize;
    let mut out = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate() {
        let deg = q.pow(i as u32);
        if out.len() <= deg {
            out.resize(deg + 1, FElem::ZERO);
        }
        out[deg] = c;
    }
    trim(out)
}

/// All `F_q`-combinations of `gens`, with repetition when they are dependent.
pub fn combinations(field: &FieldCtx, gens: &[FElem]) -> Vec<FElem> {
    let q = field.q();
    let mut out = vec![FElem::ZERO];
    for &g in gens {
        let mut next = Vec::with_capacity(out.len() * q as usize);
        for c in 0..q {
            let cg = mul_ref(field, field.from_base(c), g);
            next.extend(out.iter().map(|&b| add_ref(field, b, cg)));
        }
        out = next;
    }
    out
}

pub fn span_set(field: &FieldCtx, gens: &[FElem]) -> BTreeSet<u64> {
    combinations(field, gens).into_iter().map(FElem::value).collect()
}

/// `∏ (x - β)^{q^t}` over all combinations of `gens`.
pub fn root_product(field: &FieldCtx, gens: &[FElem], t: u32) -> Dense {
    let mut prod = vec![FElem::ONE];
    for b in combinations(field, gens) {
        prod = dense_mul(field, &prod, &vec![field.neg(b), FElem::ONE]);
    }
    let mut out = vec![FElem::ONE];
    for _ in 0..field.q().pow(t) {
        out = dense_mul(field, &out, &prod);
    }
    out
}

/// A greedy `F_q`-basis of the set intersection of two spans.
pub fn intersection_basis(field: &FieldCtx, a: &[FElem], b: &[FElem]) -> Vec<FElem> {
    let sb = span_set(field, b);
    let mut basis = Vec::new();
    for v in span_set(field, a).intersection(&sb) {
        let cand = e(field, *v);
        let mut trial = basis.clone();
        trial.push(cand);
        if rank_ref(field, &trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

pub fn random_linpoly<R: Rng>(field: &Arc<FieldCtx>, rng: &mut R, max_deg: usize) -> LinPoly {
    let deg = rng.gen_range(0..=max_deg);
    let mut coeffs: Vec<FElem> = (0..=deg).map(|_| field.random(rng)).collect();
    while coeffs[deg].is_zero() {
        coeffs[deg] = field.random(rng);
    }
    LinPoly::from_coeffs(field, coeffs)
}

pub fn random_independent<R: Rng>(field: &FieldCtx, rng: &mut R, n: usize) -> Vec<FElem> {
    loop {
        let xs: Vec<FElem> = (0..n).map(|_| field.random(rng)).collect();
        if rank_ref(field, &xs) == n {
            return xs;
        }
    }
}

// ---- combinatorics by plain enumeration ----

fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << m)).map(move |mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect())
}

fn intersection(pat: &ZeroPattern, omega: &[usize]) -> BTreeSet<usize> {
    let mut it = omega.iter();
    let first = pat.zeros[*it.next().unwrap()].clone();
    it.fold(first, |acc, &i| acc.intersection(&pat.zeros[i]).copied().collect())
}

pub fn ell_brute(pat: &ZeroPattern) -> usize {
    subsets(pat.rows()).map(|o| intersection(pat, &o).len() + o.len()).max().unwrap()
}

pub fn feasible_brute(pat: &ZeroPattern) -> bool {
    subsets(pat.rows()).all(|o| intersection(pat, &o).len() + o.len() <= pat.k)
}

/// `k - |∩Z| - min t ≥ Σ (k - t_i - |Z_i|)` for every nonempty `Ω`.
pub fn shifted_condition_brute(pat: &ZeroPattern) -> bool {
    let k = pat.k as i64;
    subsets(pat.rows()).all(|o| {
        let min_t = o.iter().map(|&i| pat.shift(i)).min().unwrap() as i64;
        let lhs = k - intersection(pat, &o).len() as i64 - min_t;
        let rhs: i64 = o.iter().map(|&i| k - pat.shift(i) as i64 - pat.zeros[i].len() as i64).sum();
        lhs >= rhs
    })
}

pub fn hall_ok_brute(u: usize, nb: &[BTreeSet<usize>], c: usize, demands: &[usize]) -> bool {
    subsets(u).all(|o| {
        let union: BTreeSet<usize> = o.iter().flat_map(|&i| nb[i].iter().copied()).collect();
        union.len() >= c + o.iter().map(|&i| demands[i]).sum::<usize>()
    })
}

pub fn random_pattern<R: Rng>(rng: &mut R, n: usize, k: usize, density: f64) -> ZeroPattern {
    let zeros = (0..k)
        .map(|_| {
            let mut row: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(density)).collect();
            row.truncate(k - 1);
            row
        })
        .collect();
    ZeroPattern::new(n, k, zeros).unwrap()
}

// ---- codes ----

/// Every nonzero codeword of `g`, smallest rank and Hamming weight, computed
/// by direct enumeration with the reference rank.
pub fn distances_brute(field: &FieldCtx, g: &Matrix) -> (usize, usize, bool) {
    let (k, n) = (g.rows(), g.cols());
    let order = field.order();
    let total = order.pow(k as u32);
    let (mut dr, mut dh, mut ordered) = (usize::MAX, usize::MAX, true);
    for idx in 1..total {
        let msg: Vec<FElem> = digits(idx, order, k).into_iter().map(|d| e(field, d)).collect();
        let word: Vec<FElem> = (0..n)
            .map(|j| (0..k).fold(FElem::ZERO, |acc, i| add_ref(field, acc, mul_ref(field, msg[i], g[(i, j)]))))
            .collect();
        let r = rank_ref(field, &word);
        let w = word.iter().filter(|x| !x.is_zero()).count();
        ordered &= r <= w;
        dr = dr.min(r);
        dh = dh.min(w);
    }
    (dr, dh, ordered)
}

// ---- single randomized cases, shared by the property and acceptance suites ----

pub type Case = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Case {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pick_field<R: Rng>(rng: &mut R) -> Arc<FieldCtx> {
    match rng.gen_range(0..3) {
        0 => field(2, 8),
        1 => field(3, 4),
        _ => field(2, 20),
    }
}

fn random_subset<R: Rng>(rng: &mut R, n: usize, max: usize) -> BTreeSet<usize> {
    let mut s: BTreeSet<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
    while s.len() > max {
        let last = *s.iter().next_back().unwrap();
        s.remove(&last);
    }
    s
}

fn gens_of(xs: &[FElem], z: &BTreeSet<usize>) -> Vec<FElem> {
    z.iter().map(|&j| xs[j - 1]).collect()
}

pub fn degree_additivity_case<R: Rng>(rng: &mut R) -> Case {
    let f = pick_field(rng);
    let (a, b) = (random_linpoly(&f, rng, 6), random_linpoly(&f, rng, 6));
    let c = a.compose(&b).unwrap();
    ensure(c.q_degree() == Some(a.q_degree().unwrap() + b.q_degree().unwrap()), || format!("{a:?} ∘ {b:?} = {c:?}"))
}

pub fn s_product_case<R: Rng>(rng: &mut R) -> Case {
    let f = pick_field(rng);
    let (p, g) = (random_linpoly(&f, rng, 5), random_linpoly(&f, rng, 5));
    let a = rng.gen_range(1..6);
    let c = a + p.q_degree().unwrap() + rng.gen_range(0..3);
    let b = c + g.q_degree().unwrap() + rng.gen_range(0..3);
    let lhs = s_matrix(&p.compose(&g).unwrap(), a, b).unwrap();
    let rhs = s_matrix(&p, a, c).unwrap().mul(&f, &s_matrix(&g, c, b).unwrap()).unwrap();
    ensure(lhs == rhs, || format!("S product mismatch for a = {a}, b = {b}, c = {c}"))
}

/// `gcrd(f(Z_1, t_1), f(Z_2, t_2)) = f(Z_1 ∩ Z_2, min t)` for independent values.
pub fn gcrd_intersection_case<R: Rng>(rng: &mut R) -> Case {
    let f = pick_field(rng);
    let n = rng.gen_range(1..=4);
    let xs = random_independent(&f, rng, n);
    let (z1, z2) = (random_subset(rng, n, n), random_subset(rng, n, n));
    let (t1, t2) = (rng.gen_range(0..3), rng.gen_range(0..3));
    let f1 = LinPoly::subspace_poly(&f, &gens_of(&xs, &z1), t1);
    let f2 = LinPoly::subspace_poly(&f, &gens_of(&xs, &z2), t2);
    let common: BTreeSet<usize> = z1.intersection(&z2).copied().collect();
    let expected = LinPoly::subspace_poly(&f, &gens_of(&xs, &common), t1.min(t2));
    let got = f1.gcrd(&f2).unwrap();
    ensure(got == expected, || format!("Z1 = {z1:?}, t1 = {t1}, Z2 = {z2:?}, t2 = {t2}: {got:?} vs {expected:?}"))
}

/// The same identity on arbitrary generator sets, checked against the
/// ordinary gcd of the expanded polynomials and the brute-force
/// intersection of the spans.
pub fn gcrd_vs_gcd_case<R: Rng>(rng: &mut R) -> Case {
    let f = if rng.gen_bool(0.5) { field(2, 5) } else { field(3, 3) };
    let budget = if f.p() == 2 { 5 } else { 4 };
    let t1 = rng.gen_range(0..2);
    let t2 = rng.gen_range(0..2);
    let m1 = rng.gen_range(0..=(budget - 1 - t1).min(3));
    let m2 = rng.gen_range(0..=(budget - 1 - t2).min(3));
    let g1: Vec<FElem> = (0..m1).map(|_| f.random(rng)).collect();
    let mut g2: Vec<FElem> = (0..m2).map(|_| f.random(rng)).collect();
    if rng.gen_bool(0.5) && !g1.is_empty() && !g2.is_empty() {
        // Force a nontrivial intersection.
        g2[0] = g1[0];
    }
    let (r1, r2) = (rank_ref(&f, &g1), rank_ref(&f, &g2));
    let p1 = LinPoly::subspace_poly(&f, &g1, t1);
    let p2 = LinPoly::subspace_poly(&f, &g2, t2);
    let got = p1.gcrd(&p2).unwrap();
    let ordinary = dense_gcd(&f, &expand(&p1), &expand(&p2));
    ensure(expand(&got) == ordinary, || format!("gcrd {got:?} differs from ordinary gcd {ordinary:?}"))?;
    let inter = intersection_basis(&f, &g1, &g2);
    let t = (t1 + m1 - r1).min(t2 + m2 - r2);
    let expected = LinPoly::subspace_poly(&f, &inter, t);
    ensure(got == expected, || format!("gcrd {got:?} vs intersection polynomial {expected:?}"))
}

pub fn division_round_trip_case<R: Rng>(rng: &mut R) -> Case {
    let f = pick_field(rng);
    let h = random_linpoly(&f, rng, 4);
    let g = random_linpoly(&f, rng, 4);
    let exact = h.compose(&g).unwrap();
    let (quot, rem) = exact.right_divide(&g).unwrap();
    ensure(rem.is_zero(), || format!("nonzero remainder {rem:?}"))?;
    ensure(quot.compose(&g).unwrap() == exact, || "quotient does not reproduce the dividend".into())?;
    ensure(quot == h, || format!("quotient {quot:?} vs {h:?}"))?;
    let a = random_linpoly(&f, rng, 7);
    let (quot, rem) = a.right_divide(&g).unwrap();
    ensure(rem.q_degree().is_none_or(|d| d < g.q_degree().unwrap()), || "remainder too large".into())?;
    let back = quot.compose(&g).unwrap().add(&rem).unwrap();
    ensure(back == a, || "quotient and remainder do not reproduce the dividend".into())?;
    // Nested subspaces divide exactly.
    let n = rng.gen_range(1..=4);
    let xs = random_independent(&f, rng, n);
    let inner = random_subset(rng, n, n);
    let outer: BTreeSet<usize> = inner.iter().copied().chain(random_subset(rng, n, n)).collect();
    let big = LinPoly::subspace_poly(&f, &gens_of(&xs, &outer), 0);
    let small = LinPoly::subspace_poly(&f, &gens_of(&xs, &inner), 0);
    let (quot, rem) = big.right_divide(&small).unwrap();
    ensure(rem.is_zero() && quot.compose(&small).unwrap() == big, || format!("{inner:?} ⊆ {outer:?} not exact"))
}

pub fn multiplicity_bump_case<R: Rng>(rng: &mut R) -> Case {
    let f = pick_field(rng);
    let m = rng.gen_range(0..4);
    let gens: Vec<FElem> = (0..m).map(|_| f.random(rng)).collect();
    let dep = gens.iter().fold(FElem::ZERO, |acc, &g| f.add(acc, f.mul(f.from_base(rng.gen_range(0..f.q())), g)));
    let t = rng.gen_range(0..3);
    let mut more = gens.clone();
    more.insert(rng.gen_range(0..=m), dep);
    let lhs = LinPoly::subspace_poly(&f, &more, t);
    let rhs = LinPoly::subspace_poly(&f, &gens, t + 1);
    ensure(lhs == rhs, || format!("dependent {dep:?} added to {gens:?}"))
}

pub fn evaluation_case<R: Rng>(rng: &mut R) -> Case {
    let f = pick_field(rng);
    let (a, b) = (random_linpoly(&f, rng, 5), random_linpoly(&f, rng, 5));
    let v = f.random(rng);
    let lhs = a.compose(&b).unwrap().evaluate(v);
    ensure(lhs == a.evaluate(b.evaluate(v)), || format!("evaluation at {v:?}"))
}

use gabidulin::patterns::{check_feasible, complete_pattern, compute_ell, hall_reduce, pattern_graph};
use gabidulin::BipartiteSpec;

/// A random pattern with `k ≤ 6`, `n ≤ 9` that may or may not be feasible.
pub fn any_pattern<R: Rng>(rng: &mut R) -> ZeroPattern {
    let k = rng.gen_range(1..=6);
    let n = rng.gen_range(k..=9);
    let density = rng.gen_range(0.1..0.9);
    random_pattern(rng, n, k, density)
}

pub fn feasible_pattern<R: Rng>(rng: &mut R) -> ZeroPattern {
    loop {
        let p = any_pattern(rng);
        if feasible_brute(&p) {
            return p;
        }
    }
}

pub fn completion_case<R: Rng>(rng: &mut R) -> Case {
    let p = feasible_pattern(rng);
    let done = complete_pattern(&p).map_err(|e| format!("{p:?}: {e}"))?;
    ensure(done.zeros.iter().all(|z| z.len() == p.k - 1), || format!("sizes not k-1 in {done:?}"))?;
    ensure(p.zeros.iter().zip(&done.zeros).all(|(a, b)| a.is_subset(b)), || "completion dropped a zero".into())?;
    ensure(feasible_brute(&done), || format!("completion {done:?} infeasible"))
}

fn hall_nb(g: &BipartiteSpec) -> Vec<BTreeSet<usize>> {
    let mut nb = vec![BTreeSet::new(); g.u];
    for &(i, j) in &g.edges {
        nb[i - 1].insert(j);
    }
    nb
}

pub fn random_hall_graph<R: Rng>(rng: &mut R) -> BipartiteSpec {
    loop {
        let u = rng.gen_range(1..=6);
        let v = rng.gen_range(u..=10);
        let c = rng.gen_range(0..=2);
        let demands: Vec<usize> = (0..u).map(|_| rng.gen_range(1..=2)).collect();
        let density = rng.gen_range(0.5..1.0);
        let edges: Vec<(usize, usize)> =
            (1..=u).flat_map(|i| (1..=v).map(move |j| (i, j))).filter(|_| rng.gen_bool(density)).collect();
        let g = BipartiteSpec::new(u, v, edges, c, demands).unwrap();
        if hall_ok_brute(g.u, &hall_nb(&g), g.c, &g.demands) {
            return g;
        }
    }
}

pub fn hall_reduce_case<R: Rng>(rng: &mut R) -> Case {
    let g = random_hall_graph(rng);
    let out = hall_reduce(&g).map_err(|e| format!("{g:?}: {e}"))?;
    ensure(out.edges.is_subset(&g.edges), || "new edges appeared".into())?;
    ensure((1..=g.u).all(|i| out.degree(i) == g.c + g.demands[i - 1]), || format!("degrees wrong in {out:?}"))?;
    ensure(hall_ok_brute(out.u, &hall_nb(&out), out.c, &out.demands), || format!("inequality broken in {out:?}"))
}

pub fn duality_case<R: Rng>(rng: &mut R) -> Case {
    let p = any_pattern(rng);
    let direct = check_feasible(&p).unwrap();
    let g = pattern_graph(&p).unwrap();
    let via_graph = g.hall_violation().unwrap().is_none();
    let brute = feasible_brute(&p);
    let graph_brute = hall_ok_brute(g.u, &hall_nb(&g), g.c, &g.demands);
    ensure(direct.feasible == brute && via_graph == brute && graph_brute == brute, || {
        format!("{p:?}: direct {}, graph {via_graph}, brute {brute}, graph brute {graph_brute}", direct.feasible)
    })?;
    if let Some(omega) = &direct.violating {
        let rows: Vec<usize> = omega.iter().map(|i| i - 1).collect();
        let mut inter = p.zeros[rows[0]].clone();
        for &i in &rows[1..] {
            inter = inter.intersection(&p.zeros[i]).copied().collect();
        }
        ensure(inter.len() + rows.len() > p.k, || format!("reported Ω = {omega:?} does not violate"))?;
    }
    Ok(())
}

pub fn ell_case<R: Rng>(rng: &mut R) -> Case {
    let p = any_pattern(rng);
    let ell = compute_ell(&p).unwrap();
    ensure(ell == ell_brute(&p), || format!("{p:?}: ℓ = {ell}, brute {}", ell_brute(&p)))?;
    ensure(ell >= p.k, || "ℓ below k".into())?;
    ensure((ell == p.k) == feasible_brute(&p), || format!("{p:?}: ℓ = {ell} disagrees with feasibility"))
}
