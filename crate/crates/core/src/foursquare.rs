//! Lagrange four-square decompositions.
//!
//! The search walks `a >= b >= c >= d` in descending lexicographic order and
//! returns the first hit. Two pruning rules bound it: `a^2 >= n/4` (and the
//! analogous bounds for `b`, `c`), and Legendre's three-square criterion,
//! which discards any `a` whose remainder has the form `4^k (8m + 7)`.
//!
//! Below [`EXHAUSTIVE_LIMIT`] the last two squares are found by scanning, so
//! the answer is the lexicographically largest canonical quadruple. Above it
//! a remainder `r = n - a^2 - b^2` is only accepted when `r = 2^e p` with `p`
//! prime and `p = 1 (mod 4)` (or `r` is tiny or a square), and `p` is split
//! with Cornacchia's algorithm. The result is still deterministic.

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FourSquare {
    pub target: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl FourSquare {
    pub fn parts(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Nonzero parts, largest first.
    pub fn nonzero_parts(&self) -> impl Iterator<Item = &BigInt> {
        self.parts().into_iter().filter(|x| !x.is_zero())
    }

    pub fn is_valid(&self) -> bool {
        let sum: BigInt = self.parts().iter().map(|x| *x * *x).sum();
        sum == self.target && self.a >= self.b && self.b >= self.c && self.c >= self.d && !self.d.is_negative()
    }
}

pub fn decompose(n: &BigInt) -> Result<FourSquare> {
    if n.is_negative() {
        return Err(Error::NegativeInput(n.to_string()));
    }
    let mut a = n.sqrt();
    // 4 a^2 >= n
    while &(&a * &a * 4u32) >= n {
        let rest = n - &a * &a;
        if !excluded_from_three_squares(&rest) {
            if let Some((b, c, d)) = three_squares(&rest, &a) {
                return Ok(FourSquare {
                    target: n.clone(),
                    a,
                    b,
                    c,
                    d,
                });
            }
        }
        if a.is_zero() {
            break;
        }
        a -= 1;
    }
    unreachable!("Lagrange's theorem guarantees a decomposition of {n}")
}

pub fn decompose_u64(n: u64) -> FourSquare {
    decompose(&BigInt::from(n)).expect("nonnegative")
}

/// `n = 4^k (8m + 7)`, i.e. not a sum of three squares.
fn excluded_from_three_squares(n: &BigInt) -> bool {
    if n.is_zero() {
        return false;
    }
    let mut m = n.clone();
    while (&m % 4u32).is_zero() {
        m /= 4u32;
    }
    (&m % 8u32).to_u32() == Some(7)
}

fn three_squares(n: &BigInt, cap: &BigInt) -> Option<(BigInt, BigInt, BigInt)> {
    let mut b = n.sqrt().min(cap.clone());
    while &(&b * &b * 3u32) >= n {
        let rest = n - &b * &b;
        if let Some((c, d)) = two_squares(&rest, &b) {
            return Some((b, c, d));
        }
        if b.is_zero() {
            break;
        }
        b -= 1;
    }
    None
}

/// Remainders below this are split into two squares by exhaustive scan.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 32;

fn two_squares(n: &BigInt, cap: &BigInt) -> Option<(BigInt, BigInt)> {
    if let Some(small) = n.to_u64().filter(|&v| v < EXHAUSTIVE_LIMIT) {
        let cap = cap.to_u64().unwrap_or(u64::MAX);
        return two_squares_scan(small, cap).map(|(c, d)| (c.into(), d.into()));
    }
    let (c, d) = two_squares_prime(n)?;
    (&c <= cap).then_some((c, d))
}

fn two_squares_scan(n: u64, cap: u64) -> Option<(u64, u64)> {
    let mut c = n.sqrt().min(cap);
    loop {
        let c2 = c * c;
        if 2 * c2 < n {
            return None;
        }
        let rest = n - c2;
        let d = rest.sqrt();
        if d * d == rest {
            return Some((c, d));
        }
        if c == 0 {
            return None;
        }
        c -= 1;
    }
}

/// `n = c^2 + d^2` with `c >= d` when `n` is a square or `2^e p` for a prime
/// `p = 1 (mod 4)`; `None` otherwise (even if `n` has some other split).
fn two_squares_prime(n: &BigInt) -> Option<(BigInt, BigInt)> {
    let root = n.sqrt();
    if &root * &root == *n {
        return Some((root, BigInt::zero()));
    }
    let e = n.trailing_zeros()?;
    let odd: BigInt = n >> e;
    if (&odd % 4u32).to_u32() != Some(1) {
        return None;
    }
    let odd_u = odd.to_biguint()?;
    if !num_prime::nt_funcs::is_prime(&odd_u, None).probably() {
        return None;
    }
    let (mut x, mut y) = cornacchia(&odd_u)?;
    // (x^2 + y^2) * 2 = (x + y)^2 + (x - y)^2
    if e % 2 == 1 {
        (x, y) = (&x + &y, if x > y { &x - &y } else { &y - &x });
    }
    let shift = (e / 2) as usize;
    let (c, d) = (BigInt::from(x << shift), BigInt::from(y << shift));
    Some(if c >= d { (c, d) } else { (d, c) })
}

/// Split a prime `p = 1 (mod 4)` as `x^2 + y^2`.
fn cornacchia(p: &BigUint) -> Option<(BigUint, BigUint)> {
    let minus_one = p - 1u32;
    let quarter = &minus_one >> 2;
    // Any quadratic non-residue c gives c^((p-1)/4) as a square root of -1.
    let mut base = BigUint::from(2u32);
    let root = loop {
        let r = base.modpow(&quarter, p);
        if (&r * &r) % p == minus_one {
            break r;
        }
        base += 1u32;
        if &base >= p {
            return None;
        }
    };
    let (mut a, mut b) = (p.clone(), root);
    while &b * &b > *p {
        let r = a.mod_floor(&b);
        a = b;
        b = r;
    }
    let rest = p - &b * &b;
    let d = rest.sqrt();
    (&d * &d == rest).then_some((b, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(n: u64) -> (u64, u64, u64, u64) {
        let fs = decompose_u64(n);
        let g = |x: &BigInt| x.to_u64().unwrap();
        (g(&fs.a), g(&fs.b), g(&fs.c), g(&fs.d))
    }

    #[test]
    fn examples() {
        assert_eq!(tuple(0), (0, 0, 0, 0));
        assert_eq!(tuple(7), (2, 1, 1, 1));
        assert_eq!(tuple(4), (2, 0, 0, 0));
        assert_eq!(tuple(3), (1, 1, 1, 0));
    }

    #[test]
    fn negative_rejected() {
        assert!(matches!(decompose(&BigInt::from(-1)), Err(Error::NegativeInput(_))));
    }

    #[test]
    fn exhaustive_oracle_small() {
        // Lexicographically largest canonical quadruple by brute force.
        for n in 0u64..400 {
            let r = (n as f64).sqrt() as u64 + 1;
            let mut best = None;
            'outer: for a in (0..=r).rev() {
                for b in (0..=a).rev() {
                    for c in (0..=b).rev() {
                        for d in (0..=c).rev() {
                            if a * a + b * b + c * c + d * d == n {
                                best = Some((a, b, c, d));
                                break 'outer;
                            }
                        }
                    }
                }
            }
            assert_eq!(Some(tuple(n)), best, "n = {n}");
        }
    }

    #[test]
    fn legendre_exclusion() {
        for n in [7u32, 15, 28, 60, 112] {
            assert!(excluded_from_three_squares(&BigInt::from(n)));
        }
        for n in [0u32, 1, 3, 6, 14, 27] {
            assert!(!excluded_from_three_squares(&BigInt::from(n)));
        }
    }

    #[test]
    fn cornacchia_splits_primes() {
        for p in [5u64, 13, 17, 29, 4294967357] {
            let p = BigUint::from(p);
            let (x, y) = cornacchia(&p).unwrap();
            assert_eq!(&x * &x + &y * &y, p);
        }
    }

    #[test]
    fn prime_path_handles_powers_of_two() {
        let p: BigInt = "4294967357".parse().unwrap();
        for e in 0..5u32 {
            let n = &p << e;
            let (c, d) = two_squares_prime(&n).unwrap();
            assert_eq!(&c * &c + &d * &d, n);
            assert!(c >= d);
        }
        assert!(two_squares_prime(&BigInt::from(3u64 * 4294967357)).is_none());
    }

    #[test]
    fn large_values() {
        for s in [
            "1000000000000000000000000000007",
            "340282366920938463463374607431768211457",
            "98765432109876543210987654321098765432109876543210",
            "4294967296",
            "4294967311",
        ] {
            let n: BigInt = s.parse().unwrap();
            let fs = decompose(&n).unwrap();
            assert!(fs.is_valid());
        }
    }
}
