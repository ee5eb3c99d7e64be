//! Exact scalar fields: prime fields `Fp<P>` and the rationals.
//!
//! Everything above this module is generic over [`Field`]; the concrete
//! choices are [`crate::Fp32003`] (the default) and [`crate::Rational`].

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound for rational sampling: entries are drawn uniformly from `-B..=B`.
pub const RATIONAL_SAMPLE_BOUND: i64 = 10_000;

/// Default prime modulus.
pub const DEFAULT_PRIME: u64 = 32003;

/// Runtime description of a field, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(DEFAULT_PRIME)
    }
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime(p) if p >= 2 && is_prime(p) => Ok(()),
            FieldSpec::Prime(p) => Err(Error::Parse(format!("{p} is not a prime"))),
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = match s {
            "q" | "Q" | "rationals" => FieldSpec::Rationals,
            "fp" => FieldSpec::Prime(DEFAULT_PRIME),
            _ => {
                let digits = s
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::Parse(format!("unknown field spec {s:?}")))?;
                let p = digits
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad prime {digits:?}: {e}")))?;
                FieldSpec::Prime(p)
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact commutative field.
///
/// The arithmetic operators take their operands by value; cloning is cheap
/// for prime fields and acceptable for the rationals at the sizes used here.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Use fraction-free (Bareiss) elimination for determinants.
    const FRACTION_FREE: bool = false;

    fn spec() -> FieldSpec;

    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Uniform sample (prime field) or uniform integer in `-B..=B` (rationals).
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Parse from the string form used in JSON files ("3/7" or a residue).
    fn parse_elem(s: &str) -> Result<Self>;

    /// Distinct roots of `poly` (coefficients low degree first) that lie in the field.
    ///
    /// For the rationals the search is limited to candidates from the rational
    /// root theorem with factorable extreme coefficients, so the list may be partial.
    fn roots<R: Rng + ?Sized>(poly: &[Self], rng: &mut R) -> Vec<Self>;

    fn pow_i64(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            e >>= 1;
        }
        Some(acc)
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// Residue class modulo the prime `P` (`P < 2^32`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const CHECK: () = assert!(P >= 2 && P < (1u64 << 32), "modulus must fit in 32 bits");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow_u64(self, mut e: u64) -> Self {
        let mut acc = 1u64;
        let mut b = self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in prime field")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn spec() -> FieldSpec {
        FieldSpec::Prime(P)
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u64(P - 2))
        }
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }

    fn parse_elem(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = Self::parse_elem(n)?;
            let d = Self::parse_elem(d)?;
            return match d.inverse() {
                Some(di) => Ok(n * di),
                None => Err(Error::Parse(format!("zero denominator in {s:?}"))),
            };
        }
        let v: i64 = s
            .parse()
            .map_err(|e| Error::Parse(format!("bad residue {s:?}: {e}")))?;
        Ok(Self::from_i64(v))
    }

    fn roots<R: Rng + ?Sized>(poly: &[Self], rng: &mut R) -> Vec<Self> {
        let f = poly_trim(poly.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        if P < 1024 {
            return (0..P)
                .map(Fp)
                .filter(|x| poly_eval(&f, x).is_zero())
                .collect();
        }
        let f = poly_monic(f);
        // g = gcd(f, x^P - x) is the product of the distinct linear factors of f.
        let x = vec![Self::zero(), Self::one()];
        let xp = poly_powmod(&x, P, &f);
        let g = poly_gcd(f.clone(), poly_sub(&xp, &x));
        let mut out = Vec::new();
        split_linear(g, rng, &mut out);
        out.sort();
        out
    }
}

fn split_linear<const P: u64, R: Rng + ?Sized>(g: Vec<Fp<P>>, rng: &mut R, out: &mut Vec<Fp<P>>) {
    let deg = g.len().saturating_sub(1);
    match deg {
        0 => {}
        1 => out.push(-g[0] / g[1]),
        _ => loop {
            let delta = Fp::<P>::sample(rng);
            let shifted = vec![delta, Fp::one()];
            let h = poly_powmod(&shifted, (P - 1) / 2, &g);
            let h = poly_sub(&h, &[Fp::one()]);
            let d = poly_gcd(g.clone(), h);
            let dd = d.len().saturating_sub(1);
            if dd > 0 && dd < deg {
                let (q, _) = poly_divrem(&g, &d);
                split_linear(d, rng, out);
                split_linear(q, rng, out);
                return;
            }
        },
    }
}

// ---------------------------------------------------------------------------
// Rationals

impl Field for BigRational {
    const FRACTION_FREE: bool = true;

    fn spec() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }

    fn parse_elem(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad numerator in {s:?}: {e}")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad denominator in {s:?}: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(BigRational::new(n, d));
        }
        let n: BigInt = s
            .parse()
            .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
        Ok(BigRational::from_integer(n))
    }

    fn roots<R: Rng + ?Sized>(poly: &[Self], _rng: &mut R) -> Vec<Self> {
        let mut f = poly_trim(poly.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        let mut out = Vec::new();
        if f[0].is_zero() {
            out.push(BigRational::zero());
            while f.len() > 1 && f[0].is_zero() {
                f.remove(0);
            }
        }
        if f.len() <= 1 {
            return out;
        }
        // Clear denominators to get an integer polynomial.
        let lcm = f
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = f.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let (Some(p_divs), Some(q_divs)) = (small_divisors(&ints[0]), small_divisors(ints.last().unwrap())) else {
            return out;
        };
        let mut cands: Vec<BigRational> = Vec::new();
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let c = BigRational::new(BigInt::from(*p * sign), BigInt::from(*q));
                    if !cands.contains(&c) {
                        cands.push(c);
                    }
                }
            }
        }
        for c in cands {
            if poly_eval(&f, &c).is_zero() {
                out.push(c);
            }
        }
        out.sort();
        out
    }
}

/// Positive divisors of `n` when `|n| <= 10^12` (trial division); `None` otherwise.
fn small_divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_i64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials, low degree first.

pub fn poly_trim<F: Field>(mut p: Vec<F>) -> Vec<F> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn poly_eval<F: Field>(p: &[F], x: &F) -> F {
    p.iter()
        .rev()
        .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

fn poly_monic<F: Field>(p: Vec<F>) -> Vec<F> {
    let lead = p.last().cloned().expect("nonzero polynomial");
    let inv = lead.inverse().expect("nonzero leading coefficient");
    p.into_iter().map(|c| c * inv.clone()).collect()
}

fn poly_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(F::zero);
            let y = b.get(i).cloned().unwrap_or_else(F::zero);
            x - y
        })
        .collect();
    poly_trim(out)
}

fn poly_mul<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    poly_trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = b[db].inverse().expect("nonzero divisor");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![F::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().clone() * lead_inv.clone();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - c.clone() * bc.clone();
        }
        q[shift] = c;
        r.pop();
        r = poly_trim(r);
    }
    (poly_trim(q), r)
}

pub(crate) fn poly_gcd<F: Field>(mut a: Vec<F>, mut b: Vec<F>) -> Vec<F> {
    a = poly_trim(a);
    b = poly_trim(b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        poly_monic(a)
    }
}

fn poly_powmod<F: Field>(base: &[F], mut e: u64, modulus: &[F]) -> Vec<F> {
    let mut acc = vec![F::one()];
    let (_, mut b) = poly_divrem(base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_divrem(&poly_mul(&acc, &b), modulus).1;
        }
        b = poly_divrem(&poly_mul(&b, &b), modulus).1;
        e >>= 1;
    }
    acc
}
