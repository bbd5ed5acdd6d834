//! Sum-of-squares certificates for positive definite integer matrices.
//!
//! For a positive definite symmetric `B` of size `n` we produce a positive
//! integer `s` and an integer `Q` with `m <= 8n` rows such that
//! `s B = I + Q^T Q`.
//!
//! The construction has three steps:
//!
//! 1. pick the least `t >= 1` with `t B - I` positive semidefinite;
//! 2. write `S (t B - I) = Q_0^T Q_0` by fraction-free symmetric rank-one
//!    peeling, turning every scalar multiplier into at most four squares;
//! 3. absorb the surplus `(S - 1) I` into at most `4n` unit rows, so that
//!    `s = S t`.
//!
//! Every positive integer is a sum of four squares, so `s` needs no further
//! witness.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{IntMatrix, SymIntMatrix};
use crate::foursquare::decompose;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsatzCertificate {
    pub b: SymIntMatrix,
    pub s: BigInt,
    pub q: IntMatrix,
}

impl PsatzCertificate {
    pub fn n(&self) -> usize {
        self.b.size()
    }

    pub fn m(&self) -> usize {
        self.q.rows()
    }

    /// `s B - I - Q^T Q`, all zero for a valid certificate.
    pub fn residual(&self) -> Result<IntMatrix> {
        if self.q.cols() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "Q has {} columns, B has size {}",
                self.q.cols(),
                self.n()
            )));
        }
        let lhs = self.b.scale(&self.s).sub_identity().into_matrix();
        lhs.checked_sub(self.q.gram().as_matrix())
    }

    pub fn is_valid(&self) -> bool {
        self.s.is_positive()
            && self.m() <= 8 * self.n()
            && self
                .residual()
                .is_ok_and(|r| r.data().iter().all(Zero::is_zero))
    }

    pub fn to_json(&self) -> PsatzJson {
        PsatzJson {
            s: self.s.to_string(),
            q: self.q.clone(),
            m: self.m(),
            n: self.n(),
        }
    }
}

/// Wire form: `{"s": "<decimal>", "Q": [[...]], "m": int, "n": int}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsatzJson {
    pub s: String,
    #[serde(rename = "Q")]
    pub q: IntMatrix,
    pub m: usize,
    pub n: usize,
}

impl PsatzJson {
    /// `Q` with its column count restored when it has no rows.
    pub fn q_matrix(&self) -> IntMatrix {
        if self.q.rows() == 0 {
            IntMatrix::zeros(0, self.n)
        } else {
            self.q.clone()
        }
    }
}

/// Least `t >= 1` such that `t B - I` is positive definite.
///
/// Definiteness of `t B - I` is monotone in `t`, so the search doubles until
/// it succeeds and then bisects.
pub fn find_scale(b: &SymIntMatrix) -> Result<BigInt> {
    if !b.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let ok = |t: &BigInt| b.scale(t).sub_identity().is_positive_definite();
    let mut hi = BigInt::one();
    while !ok(&hi) {
        hi *= 2;
    }
    let mut lo = &hi / 2u32; // lo fails (or is zero), hi succeeds
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2u32;
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

enum PeelStep {
    /// Row/column already zero.
    Skip,
    /// Pivot row with no off-diagonal mass: `N = d e_i e_i^T + rest`.
    Diagonal { index: usize, d: BigInt },
    /// `d N - v v^T` has a zero row/column at the pivot.
    Pivot { d: BigInt, v: Vec<BigInt> },
}

/// Fraction-free Gram decomposition `scale * N = Q^T Q` of a positive
/// semidefinite integer matrix, with at most `4k` rows for size `k`.
pub fn peel_gram(n: &SymIntMatrix) -> Result<(BigInt, IntMatrix)> {
    let k = n.size();
    let mut work = n.as_matrix().to_rows();
    let mut steps = Vec::with_capacity(k);
    for p in 0..k {
        let d = work[p][p].clone();
        let off_diagonal_zero = (p + 1..k).all(|j| work[p][j].is_zero());
        if d.is_negative() {
            return Err(Error::NotPositiveSemidefinite);
        }
        if d.is_zero() {
            if !off_diagonal_zero {
                return Err(Error::NotPositiveSemidefinite);
            }
            steps.push(PeelStep::Skip);
            continue;
        }
        if off_diagonal_zero {
            steps.push(PeelStep::Diagonal { index: p, d });
            continue;
        }
        let mut v = vec![BigInt::zero(); k];
        v[p..k].clone_from_slice(&work[p][p..k]);
        for i in p + 1..k {
            for j in p + 1..k {
                work[i][j] = &d * &work[i][j] - &v[i] * &v[j];
            }
        }
        steps.push(PeelStep::Pivot { d, v });
    }

    // Unwind from the innermost remainder outwards.
    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for step in steps.into_iter().rev() {
        match step {
            PeelStep::Skip => {}
            PeelStep::Diagonal { index, d } => {
                let fs = decompose(&(&d * &scale))?;
                let mut new_rows: Vec<Vec<BigInt>> = fs
                    .nonzero_parts()
                    .map(|a| {
                        let mut r = vec![BigInt::zero(); k];
                        r[index] = a.clone();
                        r
                    })
                    .collect();
                new_rows.append(&mut rows);
                rows = new_rows;
            }
            PeelStep::Pivot { d, v } => {
                let fs = decompose(&scale)?;
                let mut new_rows: Vec<Vec<BigInt>> = fs
                    .nonzero_parts()
                    .map(|a| v.iter().map(|x| a * x).collect())
                    .collect();
                new_rows.append(&mut rows);
                rows = new_rows;
                scale *= d;
            }
        }
    }
    Ok((scale, IntMatrix::from_rows(rows, k)?))
}

/// Build `(s, Q)` with `s B = I + Q^T Q` and at most `8n` rows.
pub fn certify(b: &SymIntMatrix) -> Result<PsatzCertificate> {
    let t_definite = find_scale(b)?;
    let n = b.size();
    // The least semidefinite scale is either t_definite or one below it.
    let attempt = |t: &BigInt| peel_gram(&b.scale(t).sub_identity());
    let (t, (peel_scale, q0)) = match (&t_definite - 1u32).is_positive() {
        true => match attempt(&(&t_definite - 1u32)) {
            Ok(res) => (&t_definite - 1u32, res),
            Err(Error::NotPositiveSemidefinite) => (t_definite.clone(), attempt(&t_definite)?),
            Err(e) => return Err(e),
        },
        false => (t_definite.clone(), attempt(&t_definite)?),
    };

    // S t B = I + (S - 1) I + Q_0^T Q_0
    let surplus = decompose(&(&peel_scale - 1u32))?;
    let mut rows = Vec::new();
    for a in surplus.nonzero_parts() {
        for j in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[j] = a.clone();
            rows.push(r);
        }
    }
    let q = IntMatrix::from_rows(rows, n)?.vstack(&q0)?;
    let cert = PsatzCertificate {
        b: b.clone(),
        s: peel_scale * t,
        q,
    };
    if !cert.is_valid() {
        return Err(Error::InternalCertificateFailure(
            "s B = I + Q^T Q does not hold".into(),
        ));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: &[&[i64]]) -> SymIntMatrix {
        SymIntMatrix::from_i64s(rows)
    }

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn find_scale_examples() {
        assert_eq!(find_scale(&sym(&[&[4, 0], &[0, 2]])).unwrap(), int(1));
        assert_eq!(find_scale(&sym(&[&[3, -1], &[-1, 2]])).unwrap(), int(1));
        assert_eq!(find_scale(&sym(&[&[1]])).unwrap(), int(2));
        assert_eq!(find_scale(&sym(&[&[1, 2], &[2, 1]])), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn find_scale_needs_large_multiplier() {
        // eigenvalues of [[n, n-1], [n-1, n]] are 1 and 2n - 1
        let b = sym(&[&[1000, 999], &[999, 1000]]);
        assert_eq!(find_scale(&b).unwrap(), int(2));
        // det 1, trace 7: smallest eigenvalue (7 - sqrt 45)/2 ~ 0.146 -> t = 7
        let b = sym(&[&[2, 3], &[3, 5]]);
        assert_eq!(find_scale(&b).unwrap(), int(7));
    }

    #[test]
    fn peel_examples() {
        let (s, q) = peel_gram(&sym(&[&[2, -1], &[-1, 1]])).unwrap();
        assert_eq!(s, int(2));
        assert_eq!(q, IntMatrix::from_i64s(&[[2, -1], [0, 1]]));

        let (s, q) = peel_gram(&sym(&[&[3, 0], &[0, 1]])).unwrap();
        assert_eq!(s, int(1));
        assert_eq!(q, IntMatrix::from_i64s(&[[1, 0], [1, 0], [1, 0], [0, 1]]));

        let (s, q) = peel_gram(&SymIntMatrix::new(IntMatrix::zeros(3, 3)).unwrap()).unwrap();
        assert_eq!(s, int(1));
        assert_eq!((q.rows(), q.cols()), (0, 3));
    }

    #[test]
    fn peel_skips_zero_rows() {
        let n = sym(&[&[0, 0, 0], &[0, 2, 1], &[0, 1, 1]]);
        let (s, q) = peel_gram(&n).unwrap();
        assert_eq!(n.scale(&s).into_matrix(), q.gram().into_matrix());
        assert!(q.rows() <= 12);
    }

    #[test]
    fn peel_rejects_indefinite() {
        assert_eq!(peel_gram(&sym(&[&[-1]])), Err(Error::NotPositiveSemidefinite));
        assert_eq!(peel_gram(&sym(&[&[0, 1], &[1, 0]])), Err(Error::NotPositiveSemidefinite));
        assert_eq!(peel_gram(&sym(&[&[1, 2], &[2, 1]])), Err(Error::NotPositiveSemidefinite));
    }

    #[test]
    fn certify_examples() {
        let c = certify(&sym(&[&[3, -1], &[-1, 2]])).unwrap();
        assert_eq!(c.s, int(2));
        assert_eq!(c.q, IntMatrix::from_i64s(&[[1, 0], [0, 1], [2, -1], [0, 1]]));

        let c = certify(&sym(&[&[4, 0], &[0, 2]])).unwrap();
        assert_eq!(c.s, int(1));
        assert_eq!(c.q, IntMatrix::from_i64s(&[[1, 0], [1, 0], [1, 0], [0, 1]]));

        // 5 = 1 + 2^2
        let c = certify(&sym(&[&[5]])).unwrap();
        assert_eq!(c.s, int(1));
        assert_eq!(c.q, IntMatrix::from_i64s(&[[2]]));
    }

    #[test]
    fn certify_unit_matrix_has_no_rows() {
        let c = certify(&sym(&[&[1]])).unwrap();
        assert_eq!(c.s, int(1));
        assert_eq!(c.m(), 0);
        let c = certify(&SymIntMatrix::identity(3)).unwrap();
        assert_eq!((c.s.clone(), c.m()), (int(1), 0));
    }

    #[test]
    fn certify_rejects_indefinite() {
        assert_eq!(certify(&sym(&[&[0]])), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn json_shape() {
        let c = certify(&sym(&[&[3, -1], &[-1, 2]])).unwrap();
        let j = serde_json::to_value(c.to_json()).unwrap();
        assert_eq!(j["s"], "2");
        assert_eq!(j["m"], 4);
        assert_eq!(j["n"], 2);
        assert_eq!(j["Q"][2][1], "-1");
    }
}
