//! Reference computations that share no code with the library: plain
//! Pascal-triangle binomials, dense two-variable polynomial products,
//! recursive partition counts and direct enumeration of coloured
//! partitions.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `C(n, k)` from a row of Pascal's triangle; 0 when `k > n`.
pub fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row[k as usize].clone()
}

/// Coefficients of `(1 + s·x)^e` (e ≥ 0) or `(1 − x)^{e}` (e < 0) up to
/// `x^len-1`, expanded by repeated multiplication rather than a formula.
fn power_series_1d(sign_plus: bool, e: i64, len: usize) -> Vec<BigInt> {
    let mut base = vec![BigInt::zero(); len];
    base[0] = BigInt::one();
    let factor: Vec<BigInt> = if e >= 0 {
        let mut f = vec![BigInt::zero(); len];
        f[0] = BigInt::one();
        if len > 1 {
            f[1] = if sign_plus { BigInt::one() } else { -BigInt::one() };
        }
        f
    } else {
        // 1/(1 − x) = 1 + x + x² + …
        vec![BigInt::one(); len]
    };
    for _ in 0..e.unsigned_abs() {
        let mut next = vec![BigInt::zero(); len];
        for i in 0..len {
            if base[i].is_zero() {
                continue;
            }
            for j in 0..len - i {
                next[i + j] += &base[i] * &factor[j];
            }
        }
        base = next;
    }
    base
}

/// Dense table `[t][z]`.
pub type Grid = Vec<Vec<BigInt>>;

fn grid_mul(a: &Grid, b: &Grid, zmax: usize) -> Grid {
    let tn = a.len();
    let mut out = vec![vec![BigInt::zero(); zmax + 1]; tn];
    for t1 in 0..tn {
        for z1 in 0..=zmax {
            if a[t1][z1].is_zero() {
                continue;
            }
            for t2 in 0..tn - t1 {
                for z2 in 0..=zmax - z1 {
                    if !b[t2][z2].is_zero() {
                        out[t1 + t2][z1 + z2] += &a[t1][z1] * &b[t2][z2];
                    }
                }
            }
        }
    }
    out
}

/// The Poincaré generating product expanded on a dense grid: entry
/// `[n][k]` is `b_k(S^[n])` for `n ≤ n_max`.
pub fn poincare_grid(b0: u32, b1: u32, b2: u32, n_max: usize) -> Grid {
    let zmax = 4 * n_max + 2;
    let mut acc = vec![vec![BigInt::zero(); zmax + 1]; n_max + 1];
    acc[0][0] = BigInt::one();
    for m in 1..=n_max {
        let factors: [(usize, bool, i64); 5] = [
            (2 * m - 1, true, b1 as i64),
            (2 * m + 1, true, b1 as i64),
            (2 * m - 2, false, -(b0 as i64)),
            (2 * m, false, -(b2 as i64)),
            (2 * m + 2, false, -(b0 as i64)),
        ];
        for (zdeg, plus, e) in factors {
            let coeffs = power_series_1d(plus, e, n_max / m + 1);
            let mut g = vec![vec![BigInt::zero(); zmax + 1]; n_max + 1];
            for (j, c) in coeffs.iter().enumerate() {
                if j * m <= n_max && j * zdeg <= zmax {
                    g[j * m][j * zdeg] = c.clone();
                }
            }
            acc = grid_mul(&acc, &g, zmax);
        }
    }
    acc
}

/// Betti vector of `S^[a]` from the dense grid, by explicit convolution.
pub fn betti_tuple(b0: u32, b1: u32, b2: u32, parts: &[u32]) -> Vec<BigInt> {
    let n_max = *parts.iter().max().unwrap() as usize;
    let grid = poincare_grid(b0, b1, b2, n_max);
    let mut acc = vec![BigInt::one()];
    for &p in parts {
        let row = &grid[p as usize][..=4 * p as usize];
        let mut next = vec![BigInt::zero(); acc.len() + row.len() - 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in row.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        acc = next;
    }
    acc
}

/// Number of partitions of `n` into exactly `r` parts.
pub fn partitions_of_length(n: u32, r: u32) -> u64 {
    fn go(n: i64, r: i64, memo: &mut std::collections::HashMap<(i64, i64), u64>) -> u64 {
        if n == 0 && r == 0 {
            return 1;
        }
        if n <= 0 || r <= 0 || r > n {
            return 0;
        }
        if let Some(&v) = memo.get(&(n, r)) {
            return v;
        }
        // Either some part is 1 (remove it) or all parts exceed 1 (subtract 1 from each).
        let v = go(n - 1, r - 1, memo) + go(n - r, r, memo);
        memo.insert((n, r), v);
        v
    }
    go(n as i64, r as i64, &mut Default::default())
}

pub fn partition_count(n: u32) -> u64 {
    (1..=n).map(|r| partitions_of_length(n, r)).sum()
}

/// Counts k-coloured partitions of `n` by listing multisets of
/// `(part, colour)` pairs in non-increasing order.
pub fn colored_brute(k: u32, n: u32) -> BigInt {
    fn go(remaining: u32, max_part: u32, max_colour: u32, k: u32) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for part in (1..=max_part.min(remaining)).rev() {
            let colour_cap = if part == max_part { max_colour } else { k - 1 };
            for colour in 0..=colour_cap {
                total += go(remaining - part, part, colour, k);
            }
        }
        total
    }
    if k == 0 {
        return if n == 0 { BigInt::one() } else { BigInt::zero() };
    }
    BigInt::from(go(n, n, k - 1, k))
}

/// `h^{p,0}(S^[n]) = Σ_{i + 2j = p, i + j ≤ n} C(h10, i)·C(h20 + j − 1, j)`,
/// the coefficient of `x^p t^n` read off term by term.
pub fn hodge_p0_direct(h10: u32, h20: u32, n: u32, p: u32) -> BigInt {
    let mut total = BigInt::zero();
    for j in 0..=p / 2 {
        let i = p - 2 * j;
        if i + j > n {
            continue;
        }
        let from_h20 = if h20 == 0 {
            if j == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        } else {
            choose((h20 + j - 1) as u64, j as u64)
        };
        total += choose(h10 as u64, i as u64) * from_h20;
    }
    total
}

/// Sum over compositions `t_1 + ⋯ + t_r = p` of `∏ h^{t_i,0}(S^[n_i])`.
pub fn hodge_p0_tuple_direct(h10: u32, h20: u32, parts: &[u32], p: u32) -> BigInt {
    fn go(h10: u32, h20: u32, parts: &[u32], p: u32) -> BigInt {
        match parts.split_first() {
            None => {
                if p == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }
            Some((&n, rest)) => (0..=p.min(2 * n))
                .map(|t| hodge_p0_direct(h10, h20, n, t) * go(h10, h20, rest, p - t))
                .sum(),
        }
    }
    go(h10, h20, parts, p)
}

/// Prefix-sum majorization test on increasing tuples: `b ⪰ a`.
pub fn weakly_majorizes(b: &[u32], a: &[u32]) -> bool {
    let (mut sa, mut sb) = (0u32, 0u32);
    for k in 0..a.len() - 1 {
        sa += a[k];
        sb += b[k];
        if sa > sb {
            return false;
        }
    }
    true
}

/// All partitions of `n` as increasing tuples, by recursion on the
/// smallest part.
pub fn all_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in min..=n {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}
