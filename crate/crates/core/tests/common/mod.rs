//! Independent oracles. Nothing here calls into the engine's arithmetic:
//! expansions, shifts and p-adic valuations are recomputed from scratch on
//! plain coefficient vectors.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use valforge::{QPoly, Value};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `v_p` of a nonzero integer by repeated division.
pub fn vp_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

/// `v_p` of a rational, `None` for zero.
pub fn vp(x: &Q, p: u64) -> Option<i64> {
    (!x.is_zero()).then(|| vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

fn trim(mut c: Vec<Q>) -> Vec<Q> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Schoolbook long division by a monic divisor.
pub fn divmod(f: &[Q], g: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let g = trim(g.to_vec());
    assert!(g.last().is_some_and(|c| c.is_one()));
    let mut r = trim(f.to_vec());
    let dg = g.len() - 1;
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let mut quot = vec![Q::zero(); r.len() - dg];
    while r.len() > dg {
        let shift = r.len() - 1 - dg;
        let lead = r.last().unwrap().clone();
        quot[shift] = lead.clone();
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] -= &lead * gi;
        }
        r = trim(r);
    }
    (trim(quot), r)
}

/// `φ`-adic digits of `f` by repeated division.
pub fn expansion(f: &[Q], phi: &[Q]) -> Vec<Vec<Q>> {
    let mut rest = trim(f.to_vec());
    let mut out = Vec::new();
    while !rest.is_empty() {
        let (qq, r) = divmod(&rest, phi);
        out.push(r);
        rest = qq;
    }
    out
}

/// `f(x + a)` via the binomial theorem.
pub fn taylor_shift(f: &[Q], a: &Q) -> Vec<Q> {
    let n = f.len();
    let mut out = vec![Q::zero(); n];
    for (k, c) in f.iter().enumerate() {
        let mut binom = BigInt::one();
        let mut apow = Q::one();
        // c·(x + a)^k = Σ_j C(k, j) a^{k-j} x^j, iterate j from k down
        for j in (0..=k).rev() {
            out[j] += c * Q::from_integer(binom.clone()) * &apow;
            binom = binom * BigInt::from(j) / BigInt::from(k - j + 1);
            apow *= a;
        }
    }
    trim(out)
}

/// Rank-one MacLane chain: a depth-zero root followed by ordinary
/// augmentations, all values rational.
#[derive(Clone, Debug)]
pub struct OracleChain {
    pub p: u64,
    pub center: Q,
    pub delta: Q,
    pub steps: Vec<(Vec<Q>, Q)>,
}

impl OracleChain {
    /// `None` stands for ∞.
    pub fn eval(&self, f: &[Q]) -> Option<Q> {
        self.eval_level(self.steps.len(), f)
    }

    pub fn eval_level(&self, level: usize, f: &[Q]) -> Option<Q> {
        let f = trim(f.to_vec());
        if f.is_empty() {
            return None;
        }
        if level == 0 {
            return taylor_shift(&f, &self.center)
                .iter()
                .enumerate()
                .filter_map(|(i, c)| {
                    vp(c, self.p).map(|v| Q::from_integer(v.into()) + &self.delta * q(i as i64))
                })
                .min();
        }
        let (phi, gamma) = &self.steps[level - 1];
        expansion(&f, phi)
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                self.eval_level(level - 1, c)
                    .map(|v| v + gamma * q(i as i64))
            })
            .min()
    }
}

pub fn coeffs(f: &QPoly) -> Vec<Q> {
    f.coeffs().to_vec()
}

pub fn as_value(v: Option<Q>) -> Value {
    v.map_or(Value::Infinity, Value::base)
}

/// Hensel square roots of `u` mod `p^k`, recomputed by brute-force digit
/// search: returns `s` with `s² ≡ u (mod p^k)` extending `s0`.
pub fn brute_sqrt(u: i64, p: u64, s0: i64, k: u32) -> BigInt {
    let p = BigInt::from(p);
    let mut s = BigInt::from(s0);
    let mut modulus = p.clone();
    for _ in 1..k {
        let next = &modulus * &p;
        let mut digit = BigInt::zero();
        loop {
            let cand = &s + &digit * &modulus;
            if ((&cand * &cand) - BigInt::from(u))
                .mod_floor(&next)
                .is_zero()
            {
                s = cand;
                break;
            }
            digit += 1;
            assert!(digit < p, "no square root lift");
        }
        modulus = next;
    }
    s
}
