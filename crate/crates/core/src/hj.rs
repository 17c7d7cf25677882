//! Hirzebruch-Jung continued fractions for cyclic quotients 1/n(1,q) and the
//! associated special-representation calculus. All arithmetic is exact
//! arbitrary-precision.

use crate::error::{DimerError, Result};
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::collections::BTreeSet;

/// The continued-fraction record of n/q = [b_1, ..., b_r]:
/// the decreasing sequence `i` with i_0 = n, i_r = 1, i_{r+1} = 0, the
/// increasing dual sequence `j` with j_0 = 0, j_1 = 1, j_{r+1} = n, and the
/// set of special residues {0, i_1, ..., i_r}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HjData {
    pub n: BigInt,
    pub q: BigInt,
    pub b: Vec<BigInt>,
    pub i: Vec<BigInt>,
    pub j: Vec<BigInt>,
    pub specials: BTreeSet<BigInt>,
}

impl HjData {
    pub fn r(&self) -> usize {
        self.b.len()
    }
}

/// Expands n/q for coprime 0 < q < n by the recurrence
/// i_t = b_{t+1} i_{t+1} - i_{t+2} with 0 < i_{t+2} < i_{t+1}, then builds
/// the dual sequence j_{t+1} = b_t j_t - j_{t-1} upward from j_0 = 0,
/// j_1 = 1. The trivial representation is reported as residue 0.
pub fn hj_expand(n: &BigInt, q: &BigInt) -> Result<HjData> {
    if n <= &BigInt::one() || q <= &BigInt::zero() || q >= n {
        return Err(DimerError::HjDomain(format!("need 0 < q < n with n >= 2, got n={n}, q={q}")));
    }
    if num::Integer::gcd(n, q) != BigInt::one() {
        return Err(DimerError::HjDomain(format!("gcd({n},{q}) != 1")));
    }
    let mut i = vec![n.clone(), q.clone()];
    let mut b = Vec::new();
    while i[i.len() - 1] != BigInt::zero() {
        let prev = &i[i.len() - 2];
        let cur = &i[i.len() - 1];
        // Smallest b with b*cur - prev >= 0; the remainder obeys
        // 0 <= next < cur and the loop ends exactly at i = 1, 0.
        let bt = ceil_div(prev, cur);
        let next = &bt * cur - prev;
        b.push(bt);
        i.push(next);
    }
    let r = b.len();
    debug_assert_eq!(i.len(), r + 2);
    debug_assert_eq!(i[r], BigInt::one());
    let mut j = vec![BigInt::zero(), BigInt::one()];
    for t in 1..=r {
        let next = &b[t - 1] * &j[t] - &j[t - 1];
        j.push(next);
    }
    debug_assert_eq!(j[r + 1], *n);
    let mut specials = BTreeSet::new();
    specials.insert(BigInt::zero());
    for it in i.iter().take(r + 1).skip(1) {
        specials.insert(it.clone());
    }
    Ok(HjData {
        n: n.clone(),
        q: q.clone(),
        b,
        i,
        j,
        specials,
    })
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num::Integer::div_rem(a, b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// The unique expression d = sum d_t i_t with 0 <= sum_{t>t0} d_t i_t < i_t0
/// for all t0, computed greedily: e_t = d_{t+1} i_{t+1} + e_{t+1} with
/// 0 <= e_{t+1} < i_{t+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WunramDecomposition {
    pub d: BigInt,
    pub coeffs: Vec<BigInt>,
}

pub fn wunram_decompose(hj: &HjData, d: &BigInt) -> Result<WunramDecomposition> {
    if d < &BigInt::zero() || d >= &hj.n {
        return Err(DimerError::HjDomain(format!("d={d} out of [0, {})", hj.n)));
    }
    let r = hj.r();
    let mut coeffs = Vec::with_capacity(r);
    let mut e = d.clone();
    for t in 0..r {
        let it = &hj.i[t + 1];
        let (dt, rem) = num::Integer::div_rem(&e, it);
        coeffs.push(dt);
        e = rem;
    }
    debug_assert!(e.is_zero());
    Ok(WunramDecomposition {
        d: d.clone(),
        coeffs,
    })
}

/// The characterization of sequences arising from the decomposition:
/// 0 <= d_t <= b_t - 1, and whenever d_s and d_t both attain the maximum for
/// s < t, some intermediate l has d_l <= b_l - 3.
pub fn is_wunram_valid(b: &[BigInt], coeffs: &[BigInt]) -> bool {
    if b.len() != coeffs.len() {
        return false;
    }
    let r = b.len();
    for t in 0..r {
        if coeffs[t].is_negative() || coeffs[t] > &b[t] - 1 {
            return false;
        }
    }
    for s in 0..r {
        if coeffs[s] != &b[s] - 1 {
            continue;
        }
        for t in (s + 1)..r {
            if coeffs[t] != &b[t] - 1 {
                continue;
            }
            let ok = ((s + 1)..t).any(|l| coeffs[l] <= &b[l] - 3);
            if !ok {
                return false;
            }
        }
    }
    true
}

/// The dual label f = sum d_t j_t; it satisfies q f = d (mod n).
pub fn dual_label(hj: &HjData, coeffs: &[BigInt]) -> BigInt {
    let mut f = BigInt::zero();
    for (t, dt) in coeffs.iter().enumerate() {
        f += dt * &hj.j[t + 1];
    }
    f
}

/// Determinant of the tridiagonal matrix with diagonal `b` and off-diagonal
/// entries -1; equals n for the expansion of n/q.
pub fn tridiagonal_det(b: &[BigInt]) -> BigInt {
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for bt in b {
        let next = bt * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}
