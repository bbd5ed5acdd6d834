//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored constant term first, so `coeffs()[i]` is the
//! coefficient of `X^i`. The zero polynomial is the empty coefficient vector
//! and has no degree.
//!
//! Besides ring arithmetic this module decides whether a monic polynomial is
//! real-rooted ("real zero") and whether it is moreover squarefree ("strict
//! real zero") by counting distinct real roots with a Sturm chain. Every
//! decision is exact; no floating point is involved.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * X^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The monic linear polynomial `X - root`.
    pub fn linear(root: BigInt) -> Self {
        Self::new(vec![-root, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `X^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `X^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_scalar_exact(&c)
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        )
    }

    fn with_positive_leading(self) -> Self {
        if self.leading().is_some_and(Signed::is_negative) {
            -self
        } else {
            self
        }
    }

    /// Division with remainder by a monic divisor. Over the integers this is
    /// always exact: `self = q * g + r` with `deg r < deg g`.
    pub fn div_rem(&self, g: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let dg = match g.degree() {
            Some(d) if g.is_monic() => d,
            _ => return Err(Error::DivisorNotMonic),
        };
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let lead = std::mem::take(&mut rem[k + dg]);
            if lead.is_zero() {
                continue;
            }
            for (j, gc) in g.coeffs[..dg].iter().enumerate() {
                rem[k + j] -= &lead * gc;
            }
            quot[k] = lead;
        }
        rem.truncate(dg);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Exact quotient by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact(&self, g: &IntPoly) -> Result<Option<IntPoly>> {
        let (q, r) = self.div_rem(g)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Pseudo-remainder `prem(a, b) = lc(b)^(deg a - deg b + 1) * a mod b`.
    ///
    /// Returns the remainder together with the exponent actually applied to
    /// `lc(b)`, which is 0 when `deg a < deg b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> Result<(IntPoly, u32)> {
        let db = b.degree().ok_or(Error::ZeroPolynomial)?;
        let da = match self.degree() {
            Some(d) if d >= db => d,
            _ => return Ok((self.clone(), 0)),
        };
        let lc = b.leading().expect("nonzero");
        let delta = (da - db + 1) as u32;
        let mut r = self.clone();
        let mut applied = 0u32;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let rl = r.leading().expect("nonzero").clone();
            r = &r.scale(lc) - &b.scale(&rl).shift(dr - db);
            applied += 1;
        }
        let r = r.scale(&num_traits::pow(lc.clone(), (delta - applied) as usize));
        Ok((r, delta))
    }

    /// Greatest common divisor over `Z[X]` via the primitive remainder
    /// sequence. The result has positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.clone().with_positive_leading();
        }
        if other.is_zero() {
            return self.clone().with_positive_leading();
        }
        let c = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (r, _) = a.pseudo_rem(&b).expect("b nonzero");
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().with_positive_leading().scale(&c)
    }

    /// Resultant via the subresultant remainder sequence.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut sign = BigInt::one();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
            if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
                sign = -sign;
            }
        }
        let ca = a.content();
        let cb = b.content();
        a = a.primitive_part();
        b = b.primitive_part();
        let t = num_traits::pow(ca, b.degree().unwrap()) * num_traits::pow(cb, a.degree().unwrap());
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
            if db == 0 {
                // h <- lc(B)^deg A * h^(1 - deg A)
                let lb = b.leading().unwrap().clone();
                let num = num_traits::pow(lb, da);
                let h_final = if da == 0 {
                    h * num
                } else {
                    num / num_traits::pow(h, da - 1)
                };
                return sign * t * h_final;
            }
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                sign = -sign;
            }
            let (r, _) = a.pseudo_rem(&b).expect("b nonzero");
            if r.is_zero() {
                return BigInt::zero();
            }
            let divisor = &g * num_traits::pow(h.clone(), delta);
            a = b;
            b = r.div_scalar_exact(&divisor);
            g = a.leading().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
            };
        }
    }

    /// Sturm chain `f, f', -rem(f, f'), ...`, each member scaled by a positive
    /// rational so that all coefficients stay integral and primitive.
    pub fn sturm_chain(&self) -> Result<Vec<IntPoly>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut chain = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return Ok(chain);
        }
        chain.push(d.primitive_part());
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            let (prem, exp) = a.pseudo_rem(b)?;
            if prem.is_zero() {
                break;
            }
            // prem = lc(b)^exp * rem; flip so the next member is a positive
            // multiple of -rem.
            let negative_factor = b.leading().unwrap().is_negative() && exp % 2 == 1;
            let next = if negative_factor { prem } else { -prem };
            chain.push(next.primitive_part());
        }
        Ok(chain)
    }

    /// Number of distinct real roots.
    pub fn sturm_distinct_real_roots(&self) -> Result<usize> {
        let chain = self.sturm_chain()?;
        let at_pos_inf = chain.iter().map(|p| p.leading().unwrap().is_positive());
        let at_neg_inf = chain
            .iter()
            .map(|p| p.leading().unwrap().is_positive() ^ (p.degree().unwrap() % 2 == 1));
        let v_neg = sign_variations(at_neg_inf);
        let v_pos = sign_variations(at_pos_inf);
        Ok(v_neg - v_pos)
    }

    fn require_monic(&self) -> Result<usize> {
        match self.degree() {
            Some(d) if d >= 1 && self.is_monic() => Ok(d),
            _ => Err(Error::NotMonic),
        }
    }

    /// Monic with `deg` distinct real roots, i.e. real-rooted and squarefree.
    pub fn is_strict_real_zero(&self) -> Result<bool> {
        let d = self.require_monic()?;
        Ok(self.sturm_distinct_real_roots()? == d)
    }

    /// Monic with only real roots (multiplicities allowed).
    pub fn is_real_zero(&self) -> Result<bool> {
        self.require_monic()?;
        let g = self.squarefree_part()?;
        Ok(g.sturm_distinct_real_roots()? == g.degree().unwrap())
    }

    /// `f / gcd(f, f')` for monic `f`; monic with the same distinct roots.
    pub fn squarefree_part(&self) -> Result<IntPoly> {
        self.require_monic()?;
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return Ok(self.clone());
        }
        Ok(self
            .div_exact(&g)?
            .expect("gcd divides its argument"))
    }

    /// Yun's squarefree decomposition of a monic polynomial.
    pub fn squarefree_decompose(&self) -> Result<SquarefreeDecomposition> {
        self.require_monic()?;
        let exact = |p: &IntPoly, q: &IntPoly| -> IntPoly {
            if q.degree() == Some(0) {
                return p.clone();
            }
            p.div_exact(q)
                .expect("monic divisor")
                .expect("Yun quotients are exact")
        };
        let df = self.derivative();
        let a0 = self.gcd(&df);
        let mut b = exact(self, &a0);
        let mut c = exact(&df, &a0);
        let mut d = &c - &b.derivative();
        let mut parts = Vec::new();
        let mut multiplicity = 1u32;
        while b.degree().is_some_and(|d| d >= 1) {
            let a = b.gcd(&d);
            b = exact(&b, &a);
            c = exact(&d, &a);
            d = &c - &b.derivative();
            if a.degree().is_some_and(|d| d >= 1) {
                parts.push((a, multiplicity));
            }
            multiplicity += 1;
        }
        Ok(SquarefreeDecomposition { parts })
    }

    /// Human-readable form such as `X^2 - X - 1`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                out.push_str(&mag.to_string());
            }
            match i {
                0 => {}
                1 => out.push('X'),
                _ => out.push_str(&format!("X^{i}")),
            }
        }
        out
    }
}

fn sign_variations(signs: impl Iterator<Item = bool>) -> usize {
    let mut count = 0;
    let mut prev = None;
    for s in signs {
        if prev.is_some_and(|p| p != s) {
            count += 1;
        }
        prev = Some(s);
    }
    count
}

/// `f = prod factor^multiplicity` with pairwise coprime, squarefree, monic
/// factors listed by increasing multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub parts: Vec<(IntPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn recombine(&self) -> IntPoly {
        self.parts
            .iter()
            .fold(IntPoly::one(), |acc, (g, e)| &acc * &g.pow(*e))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.pretty())
    }
}

/// Comma-separated coefficients, constant term first; the zero polynomial
/// prints as `0`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for c in &self.coeffs {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        let coeffs = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("invalid coefficient {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn zip_with(a: &IntPoly, b: &IntPoly, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> IntPoly {
    let zero = BigInt::zero();
    let n = a.coeffs.len().max(b.coeffs.len());
    IntPoly::new(
        (0..n)
            .map(|i| {
                op(
                    a.coeffs.get(i).unwrap_or(&zero),
                    b.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect(),
    )
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -self.clone()
    }
}
