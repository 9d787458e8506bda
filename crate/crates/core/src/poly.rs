//! Dense univariate polynomials over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::format_rational;
use crate::{Rational, Scalar};

/// Coefficients are stored by ascending degree with trailing zeros removed,
/// so the zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `x - a`.
    pub fn linear(a: T) -> Self {
        Self::new(vec![-a, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// `None` stands for the degree `-∞` of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0, for contexts where only
    /// nonzero inputs matter.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn eval(&self, at: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    /// Euclidean division: `self = q·g + r` with `deg r < deg g`.
    pub fn divmod(&self, g: &Self) -> Result<(Self, Self)> {
        let lead = g
            .leading()
            .ok_or_else(|| Error::invalid("division by the zero polynomial"))?
            .clone();
        let dg = g.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dg].clone() / lead.clone();
            if !c.is_zero() {
                for (i, gi) in g.coeffs.iter().enumerate() {
                    rem[k + i] = rem[k + i].clone() - c.clone() * gi.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(dg);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// The `φ`-adic expansion `(f_0, …, f_n)` with `f = Σ f_i φ^i` and
    /// `deg f_i < deg φ`. The zero polynomial expands to `[0]`.
    pub fn phi_expansion(&self, phi: &Self) -> Result<Vec<Self>> {
        if phi.degree().unwrap_or(0) == 0 {
            return Err(Error::invalid(
                "expansion base must have degree at least one",
            ));
        }
        if !phi.is_monic() {
            return Err(Error::invalid("expansion base must be monic"));
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        loop {
            let (q, r) = rest.divmod(phi)?;
            out.push(r);
            if q.is_zero() {
                break;
            }
            rest = q;
        }
        Ok(out)
    }

    /// Inverse of [`Poly::phi_expansion`].
    pub fn from_expansion(parts: &[Self], phi: &Self) -> Self {
        parts
            .iter()
            .rev()
            .fold(Self::zero(), |acc, part| &(&acc * phi) + part)
    }

    /// Hasse derivative `∂_b f = Σ_{i≥b} C(i, b) a_i x^{i-b}`.
    pub fn hasse_derivative(&self, b: usize) -> Self {
        if self.coeffs.len() <= b {
            return Self::zero();
        }
        let coeffs = (b..self.coeffs.len())
            .map(|i| binomial::<T>(i, b) * self.coeffs[i].clone())
            .collect();
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        self.hasse_derivative(1)
    }

    /// `f(x + a)`.
    pub fn shift(&self, a: &T) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        let parts = self
            .phi_expansion(&Self::linear(a.clone()))
            .expect("x - a is monic of degree one");
        Self::new(parts.into_iter().map(|p| p.coeff(0)).collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(T, T) -> T) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect())
    }
}

fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| {
        acc * T::from_count((n - k + j) as u64) / T::from_count(j as u64)
    })
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl<T: Scalar> $tr for Poly<T> {
            type Output = Poly<T>;

            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Poly<Rational> {
    /// Convenience constructor from integer coefficients, ascending degree.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if first {
                if c.is_negative() {
                    "-"
                } else {
                    ""
                }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            first = false;
            let mag = c.abs();
            let body = match k {
                0 => format_rational(&mag),
                _ => {
                    let var = if k == 1 {
                        "x".to_owned()
                    } else {
                        format!("x^{k}")
                    };
                    if mag.is_one() {
                        var
                    } else {
                        format!("{}*{}", format_rational(&mag), var)
                    }
                }
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

impl FromStr for Poly<Rational> {
    type Err = Error;

    /// Grammar: signed sum of terms `c`, `c*x^k`, `cx^k`, `x^k`, with `c` an
    /// integer or `a/b` and `k` a non-negative integer.
    fn from_str(s: &str) -> Result<Self> {
        PolyParser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("ascii digits parse"))
    }

    fn coefficient(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(Error::parse(at, "zero denominator"));
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn power(&mut self) -> Result<usize> {
        debug_assert_eq!(self.src[self.pos], b'x');
        self.pos += 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let k = self.integer()?;
            return usize::try_from(k).map_err(|_| Error::parse(at, "exponent too large"));
        }
        Ok(1)
    }

    fn term(&mut self) -> Result<(Rational, usize)> {
        match self.peek() {
            Some(b'x') => Ok((Rational::one(), self.power()?)),
            Some(b) if b.is_ascii_digit() => {
                let c = self.coefficient()?;
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        if self.peek() != Some(b'x') {
                            return Err(Error::parse(self.pos, "expected `x` after `*`"));
                        }
                        Ok((c, self.power()?))
                    }
                    Some(b'x') => Ok((c, self.power()?)),
                    _ => Ok((c, 0)),
                }
            }
            Some(_) => Err(Error::parse(self.pos, "expected a term")),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn parse(mut self) -> Result<Poly<Rational>> {
        let mut coeffs: Vec<Rational> = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (c, k) = self.term()?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += if negate { -c } else { c };
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(b'*') | Some(b'x') => {
                    return Err(Error::parse(
                        self.pos,
                        "products of variables are not allowed",
                    ))
                }
                Some(_) => return Err(Error::parse(self.pos, "unexpected character")),
            }
            self.pos += 1;
        }
        Ok(Poly::new(coeffs))
    }
}
