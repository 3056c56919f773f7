//! Quantum adversary lower-bound machinery for query problems.
//!
//! A [`Relation`] pairs "hard" inputs from two disjoint sets of `n`-bit
//! strings. [`relation_params`] extracts the classic adversary quantities
//!
//! * `m`  — max number of partners of any left string,
//! * `m′` — max number of partners of any right string,
//! * `ℓ`  — max, over a left string `x` and a bit position `i`, of the
//!   number of partners of `x` differing from it at `i`,
//! * `ℓ′` — the symmetric right-side quantity,
//!
//! and the resulting query lower bound `Ω(√(m·m′ / (ℓ·ℓ′)))` (reported as
//! the square root itself, without the hidden constant). For the search
//! relation this is exactly `√n`, matching the query counts reported by the
//! runners in [`crate::grover`].
//!
//! [`alpha_beta`] computes the subset progress coefficients used by
//! block-structured hybrid arguments: `α_k` is the worst-case fraction of a
//! left string's partners that differ from it somewhere inside a chosen
//! `k`-subset of positions (and `β_k` the right-side analogue). For the
//! search relation these collapse to `α_k = k/n`, `β_k = 1` (`k ≥ 1`) —
//! see [`grover_alpha_beta`] — which is what caps how much progress a block
//! of `k` queries can make.

use serde::Serialize;

use crate::error::{Error, Result};

/// Cap on `|X|·|Y|·n` so the exhaustive parameter scans stay cheap.
const BRUTE_FORCE_BUDGET: u128 = 10_000_000;

/// A bipartite relation between two disjoint sets of `n`-bit strings.
///
/// Strings are packed into `u64` masks (bit `i` = position `i`), so
/// `n ≤ 64`. Construction validates that every pair references existing
/// strings, the two sides are disjoint (hence related strings differ), and
/// every listed string occurs in at least one pair. Duplicate pairs are
/// collapsed.
#[derive(Debug, Clone)]
pub struct Relation {
    n: usize,
    xs: Vec<u64>,
    ys: Vec<u64>,
    pairs: Vec<(usize, usize)>,
}

impl Relation {
    /// Validates and builds a relation.
    pub fn new(
        n: usize,
        xs: Vec<u64>,
        ys: Vec<u64>,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::StringTooWide(n));
        }
        if pairs.is_empty() || xs.is_empty() || ys.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let budget = xs.len() as u128 * ys.len() as u128 * n as u128;
        if budget > BRUTE_FORCE_BUDGET {
            return Err(Error::RelationTooLarge(budget));
        }
        for &s in xs.iter().chain(ys.iter()) {
            if n < 64 && s >> n != 0 {
                return Err(Error::RelationStringOutOfRange { value: s, n });
            }
        }
        let mut left = xs.clone();
        left.sort_unstable();
        left.dedup();
        if left.len() != xs.len() {
            return Err(Error::RelationSidesOverlap);
        }
        let mut right = ys.clone();
        right.sort_unstable();
        right.dedup();
        if right.len() != ys.len() {
            return Err(Error::RelationSidesOverlap);
        }
        if left.iter().any(|s| right.binary_search(s).is_ok()) {
            return Err(Error::RelationSidesOverlap);
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut x_used = vec![false; xs.len()];
        let mut y_used = vec![false; ys.len()];
        for &(xi, yi) in &pairs {
            if xi >= xs.len() || yi >= ys.len() {
                return Err(Error::RelationIndexOutOfRange { x: xi, y: yi });
            }
            x_used[xi] = true;
            y_used[yi] = true;
        }
        if let Some(i) = x_used.iter().position(|u| !u) {
            return Err(Error::RelationStringUnused { side: 'x', index: i });
        }
        if let Some(i) = y_used.iter().position(|u| !u) {
            return Err(Error::RelationStringUnused { side: 'y', index: i });
        }
        Ok(Self { n, xs, ys, pairs })
    }

    /// String length in bits.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Left-side strings.
    pub fn xs(&self) -> &[u64] {
        &self.xs
    }

    /// Right-side strings.
    pub fn ys(&self) -> &[u64] {
        &self.ys
    }

    /// Related index pairs, sorted and deduplicated.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// The hard relation for search: the all-zero string on the left, all `n`
/// weight-one strings on the right.
pub fn grover_decision(n: usize) -> Result<Relation> {
    if n == 0 || n > 64 {
        return Err(Error::StringTooWide(n));
    }
    let ys: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (0, i)).collect();
    Relation::new(n, vec![0], ys, pairs)
}

/// The hard relation for parity: even-weight strings on the left, odd-weight
/// on the right, related iff they differ in exactly one position.
pub fn hamming_parity_relation(n: usize) -> Result<Relation> {
    if n == 0 || n > 64 {
        return Err(Error::StringTooWide(n));
    }
    if n > 11 {
        // 2^(n-1) strings per side blows the brute-force budget beyond this.
        let side = 1u128 << (n - 1).min(60);
        return Err(Error::RelationTooLarge(
            side.saturating_mul(side).saturating_mul(n as u128),
        ));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in 0..(1u64 << n) {
        if s.count_ones() % 2 == 0 {
            xs.push(s);
        } else {
            ys.push(s);
        }
    }
    let mut pairs = Vec::new();
    for (xi, &x) in xs.iter().enumerate() {
        for (yi, &y) in ys.iter().enumerate() {
            if (x ^ y).count_ones() == 1 {
                pairs.push((xi, yi));
            }
        }
    }
    Relation::new(n, xs, ys, pairs)
}

/// The adversary quantities of a relation and the bound they imply.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RelationParams {
    /// Max partners of a left string.
    pub m: usize,
    /// Max partners of a right string.
    pub m_prime: usize,
    /// Max partners of a left string differing from it at one fixed position.
    pub l: usize,
    /// Right-side analogue of `l`.
    pub l_prime: usize,
    /// `√(m·m′ / (ℓ·ℓ′))` — queries needed up to a constant factor.
    pub bound: f64,
}

/// Extracts the adversary quantities by exhaustive scan.
pub fn relation_params(rel: &Relation) -> RelationParams {
    let n = rel.n();
    let mut deg_x = vec![0usize; rel.xs().len()];
    let mut deg_y = vec![0usize; rel.ys().len()];
    let mut per_xi = vec![0usize; rel.xs().len() * n];
    let mut per_yi = vec![0usize; rel.ys().len() * n];
    for &(xi, yi) in rel.pairs() {
        deg_x[xi] += 1;
        deg_y[yi] += 1;
        let xor = rel.xs()[xi] ^ rel.ys()[yi];
        for i in 0..n {
            if xor >> i & 1 == 1 {
                per_xi[xi * n + i] += 1;
                per_yi[yi * n + i] += 1;
            }
        }
    }
    let m = *deg_x.iter().max().expect("nonempty");
    let m_prime = *deg_y.iter().max().expect("nonempty");
    let l = *per_xi.iter().max().expect("nonempty");
    let l_prime = *per_yi.iter().max().expect("nonempty");
    let bound = ((m * m_prime) as f64 / (l * l_prime) as f64).sqrt();
    RelationParams {
        m,
        m_prime,
        l,
        l_prime,
        bound,
    }
}

/// Binomial coefficient, saturating in `u128`.
fn binom(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Subset progress coefficients `(α_k, β_k)` by exhaustive scan over all
/// `k`-subsets of positions (Gosper enumeration, so `n ≤ 16`).
///
/// `α_k = max_x max_{|S|=k} (fraction of x's partners differing from x
/// somewhere in S)`; `β_k` is the right-side analogue.
pub fn alpha_beta(rel: &Relation, k: usize) -> Result<(f64, f64)> {
    let n = rel.n();
    if n > 16 {
        return Err(Error::SubsetScanTooWide(n));
    }
    if k > n {
        return Err(Error::SubsetTooLarge { k, n });
    }
    let scan = binom(n, k).saturating_mul(rel.pairs().len() as u128);
    if scan > BRUTE_FORCE_BUDGET {
        return Err(Error::RelationTooLarge(scan));
    }
    let deg_x: Vec<usize> = {
        let mut d = vec![0usize; rel.xs().len()];
        for &(xi, _) in rel.pairs() {
            d[xi] += 1;
        }
        d
    };
    let deg_y: Vec<usize> = {
        let mut d = vec![0usize; rel.ys().len()];
        for &(_, yi) in rel.pairs() {
            d[yi] += 1;
        }
        d
    };
    let xors: Vec<(usize, usize, u64)> = rel
        .pairs()
        .iter()
        .map(|&(xi, yi)| (xi, yi, rel.xs()[xi] ^ rel.ys()[yi]))
        .collect();

    let mut alpha = 0.0f64;
    let mut beta = 0.0f64;
    let limit = 1u64 << n;
    let mut s: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    loop {
        let mut hits_x = vec![0usize; rel.xs().len()];
        let mut hits_y = vec![0usize; rel.ys().len()];
        for &(xi, yi, xor) in &xors {
            if xor & s != 0 {
                hits_x[xi] += 1;
                hits_y[yi] += 1;
            }
        }
        for (h, d) in hits_x.iter().zip(&deg_x) {
            alpha = alpha.max(*h as f64 / *d as f64);
        }
        for (h, d) in hits_y.iter().zip(&deg_y) {
            beta = beta.max(*h as f64 / *d as f64);
        }
        if k == 0 {
            break;
        }
        // Gosper's hack: next mask with the same popcount.
        let c = s & s.wrapping_neg();
        let r = s + c;
        let next = (((r ^ s) >> 2) / c) | r;
        if next >= limit {
            break;
        }
        s = next;
    }
    Ok((alpha, beta))
}

/// Closed-form `(α_k, β_k)` for the search relation: a `k`-subset catches a
/// `k/n` fraction of the zero string's partners, and (for `k ≥ 1`) some
/// subset always covers a weight-one string's single differing position.
pub fn grover_alpha_beta(n: usize, k: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::StringTooWide(0));
    }
    if k > n {
        return Err(Error::SubsetTooLarge { k, n });
    }
    let beta = if k == 0 { 0.0 } else { 1.0 };
    Ok((k as f64 / n as f64, beta))
}
