//! The p-adic valuation on `Q`, Newton polygons, and Hensel square roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{QPoly, Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseValuation {
    p: BigInt,
}

impl BaseValuation {
    /// Fails unless `p` is a prime that fits in 64 bits.
    pub fn new(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        let small = p.to_u64().ok_or_else(|| {
            Error::invalid(format!("p = {p} is outside the supported 64-bit range"))
        })?;
        if !is_prime_u64(small) {
            return Err(Error::invalid(format!("p = {p} is not prime")));
        }
        Ok(BaseValuation { p })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    /// Multiplicity of `p` in a nonzero integer.
    pub fn vp_int(&self, n: &BigInt) -> Option<i64> {
        if n.is_zero() {
            return None;
        }
        let mut n = n.abs();
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&self.p);
            if !r.is_zero() {
                return Some(k);
            }
            n = q;
            k += 1;
        }
    }

    /// `v_p(q)` as an integer; `None` for `q = 0`.
    pub fn vp_rat(&self, q: &Rational) -> Option<i64> {
        Some(self.vp_int(q.numer())? - self.vp_int(q.denom())?)
    }

    /// `v_p(q)` embedded as `(0, v_p(q))`, or `∞` for zero.
    pub fn vp(&self, q: &Rational) -> Value {
        match self.vp_rat(q) {
            Some(k) => Value::int(k),
            None => Value::Infinity,
        }
    }

    /// Valuations of the roots of `f` in an algebraic closure, with
    /// multiplicity, read off the lower convex hull of `(i, v_p(a_i))`.
    ///
    /// Roots at zero are reported as `∞`. The result is ordered from the
    /// largest valuation to the smallest.
    pub fn newton_root_valuations(&self, f: &QPoly) -> Result<Vec<Value>> {
        let deg = f.degree().unwrap_or(0);
        if deg == 0 {
            return Err(Error::invalid("root valuations of a constant polynomial"));
        }
        let points: Vec<(i64, i64)> = f
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| self.vp_rat(c).map(|v| (i as i64, v)))
            .collect();
        let mut out = vec![Value::Infinity; points[0].0 as usize];

        let mut hull: Vec<(i64, i64)> = Vec::new();
        for &pt in &points {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // drop b when it lies on or above the segment a–pt
                let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        for w in hull.windows(2) {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let root_val = Rational::new(BigInt::from(-dy), BigInt::from(dx));
            out.extend(std::iter::repeat_n(Value::base(root_val), dx as usize));
        }
        debug_assert_eq!(out.len(), deg);
        Ok(out)
    }

    /// Residue of a p-integral rational modulo `m` (a power of `p`).
    fn reduce_mod(&self, q: &Rational, m: &BigInt) -> Result<BigInt> {
        let inv = mod_inverse(&q.denom().mod_floor(m), m)
            .ok_or_else(|| Error::invalid("denominator divisible by p"))?;
        Ok((q.numer() * inv).mod_floor(m))
    }

    /// The `n`-th Hensel approximation `s_n ∈ [0, p^n)` to a square root of
    /// the p-adic unit `u`, on the branch whose first digit is the smallest
    /// root in `[1, p-1]`, together with `e_n = v_p(s_n² - u) ≥ n`.
    pub fn hensel_sqrt_seq(&self, u: &Rational, n: u32) -> Result<(BigInt, u64)> {
        if n == 0 {
            return Err(Error::invalid("Hensel index starts at 1"));
        }
        let mut lift = HenselLift::start(self, u)?;
        while lift.level < u64::from(n) {
            lift.lift_to(self, u, lift.level + 1)?;
        }
        let e = lift.excess(self, u);
        Ok((lift.s, e))
    }
}

/// Running state of a square-root lift: `s² ≡ u (mod p^level)`.
#[derive(Clone, Debug)]
pub(crate) struct HenselLift {
    pub(crate) s: BigInt,
    pub(crate) level: u64,
}

impl HenselLift {
    pub(crate) fn start(base: &BaseValuation, u: &Rational) -> Result<Self> {
        let p = base.p();
        if *p == BigInt::from(2) {
            return Err(Error::invalid("square-root families need an odd prime"));
        }
        if base.vp_rat(u) != Some(0) {
            return Err(Error::invalid(format!("u = {u} is not a p-adic unit")));
        }
        if is_rational_square(u) {
            return Err(Error::invalid(format!(
                "u = {u} is the square of a rational"
            )));
        }
        let r = base.reduce_mod(u, p)?;
        let half = (p - BigInt::one()) >> 1u32;
        if r.modpow(&half, p) != BigInt::one() {
            return Err(Error::invalid(format!(
                "u = {u} is not a square modulo {p}"
            )));
        }
        let root = tonelli_shanks(&r, p);
        let other = p - &root;
        Ok(HenselLift {
            s: root.min(other),
            level: 1,
        })
    }

    /// Newton step to precision `p^target`, `target ≤ 2·level`.
    pub(crate) fn lift_to(
        &mut self,
        base: &BaseValuation,
        u: &Rational,
        target: u64,
    ) -> Result<()> {
        debug_assert!(target <= 2 * self.level);
        let m = base.p().pow(target as u32);
        let ub = base.reduce_mod(u, &m)?;
        let two_s = (&self.s * 2u32).mod_floor(&m);
        let inv = mod_inverse(&two_s, &m).expect("2s is a unit for odd p");
        let f = (&self.s * &self.s - ub).mod_floor(&m);
        self.s = (&self.s - f * inv).mod_floor(&m);
        self.level = target;
        Ok(())
    }

    /// `v_p(s² - u)`; finite because `u` is not a rational square.
    pub(crate) fn excess(&self, base: &BaseValuation, u: &Rational) -> u64 {
        let s = Rational::from_integer(self.s.clone());
        let k = base.vp_rat(&(&s * &s - u)).expect("u is not a square");
        k as u64
    }
}

fn is_rational_square(q: &Rational) -> bool {
    !q.is_negative() && is_square(q.numer()) && is_square(q.denom())
}

fn is_square(n: &BigInt) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

/// Square root of a quadratic residue `a` modulo an odd prime `p`.
fn tonelli_shanks(a: &BigInt, p: &BigInt) -> BigInt {
    let one = BigInt::one();
    let pm1 = p - &one;
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1u32;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 >> 1u32), p) != pm1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1u32), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&BigInt::from(1u64 << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &WITNESSES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
