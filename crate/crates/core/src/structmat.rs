//! Companion and Bézout matrices of integer polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{IntMatrix, SymIntMatrix};
use crate::polyint::IntPoly;

/// Matrix of multiplication by `X` on `Z[X]/(f)` in the basis
/// `1, X, …, X^(n-1)`. Column `j < n-1` is `e_(j+1)`; the last column holds
/// `-a_0, …, -a_(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionMatrix {
    pub f: IntPoly,
    pub matrix: IntMatrix,
}

impl CompanionMatrix {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }
}

pub fn companion(f: &IntPoly) -> Result<CompanionMatrix> {
    let n = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::NotMonic),
    };
    let mut c = IntMatrix::zeros(n, n);
    for j in 0..n - 1 {
        c[(j + 1, j)] = BigInt::one();
    }
    for i in 0..n {
        c[(i, n - 1)] = -f.coeff(i);
    }
    Ok(CompanionMatrix {
        f: f.clone(),
        matrix: c,
    })
}

/// `B(f, g)`: entry `(i, j)` (0-indexed) is the coefficient of `Y^i X^j` in
/// `(f(Y) g(X) - f(X) g(Y)) / (Y - X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutMatrix {
    pub f: IntPoly,
    pub g: IntPoly,
    pub matrix: SymIntMatrix,
}

/// Bézout matrix via the exact bivariate quotient. The numerator is expanded
/// as a polynomial in `Y` with coefficients in `Z[X]` and divided by the
/// monic (in `Y`) factor `Y - X` with synthetic division; a nonzero remainder
/// would be a defect and is reported as such.
pub fn bezout(f: &IntPoly, g: &IntPoly) -> Result<BezoutMatrix> {
    let n = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::NotMonic),
    };
    if let Some(dg) = g.degree() {
        if dg >= n {
            return Err(Error::DegreeTooHigh { got: dg, max: n - 1 });
        }
    }
    // numerator[i] = coefficient of Y^i, a polynomial in X:
    //   f_i * g(X) - g_i * f(X)
    let numerator: Vec<IntPoly> = (0..=n)
        .map(|i| &g.scale(&f.coeff(i)) - &f.scale(&g.coeff(i)))
        .collect();
    // Synthetic division by (Y - X): q_(n-1) = p_n, q_(i-1) = p_i + X q_i.
    let x = IntPoly::monomial(BigInt::one(), 1);
    let mut quotient = vec![IntPoly::zero(); n];
    let mut carry = numerator[n].clone();
    for i in (1..=n).rev() {
        quotient[i - 1] = carry.clone();
        carry = &numerator[i - 1] + &(&x * &carry);
    }
    if !carry.is_zero() {
        return Err(Error::InternalCertificateFailure(
            "Bézoutian numerator not divisible by Y - X".into(),
        ));
    }
    let mut b = IntMatrix::zeros(n, n);
    for (i, qi) in quotient.iter().enumerate() {
        if qi.degree().is_some_and(|d| d >= n) {
            return Err(Error::InternalCertificateFailure(
                "Bézoutian has X-degree >= n".into(),
            ));
        }
        for (j, c) in qi.coeffs().iter().enumerate() {
            if !c.is_zero() {
                b[(i, j)] = c.clone();
            }
        }
    }
    let matrix = SymIntMatrix::new(b).map_err(|e| {
        Error::InternalCertificateFailure(format!("Bézout matrix not symmetric: {e}"))
    })?;
    Ok(BezoutMatrix {
        f: f.clone(),
        g: g.clone(),
        matrix,
    })
}

/// `B(f, f')`, positive definite exactly when `f` is strict real zero.
pub fn bezout_ffprime(f: &IntPoly) -> Result<BezoutMatrix> {
    bezout(f, &f.derivative())
}
