//! Symmetric integer matrices whose characteristic polynomial is divisible
//! by a given real-rooted monic polynomial.
//!
//! For a strict real zero `f` of degree `n` with companion matrix `C` and
//! Bézout matrix `B = B(f, f')`, a certificate `s B = I + Q^T Q` with `m` rows
//! gives the symmetric matrix
//!
//! ```text
//!     M = [ C - Q^T Q C^T   C Q^T ]
//!         [ Q C^T           0     ]
//! ```
//!
//! of size `n + m <= 9n`. It is conjugate by the unimodular
//! `Q' = [[I, Q^T], [0, I]]` to the block lower triangular
//! `M' = [[C, 0], [Q C^T, -Q C^T Q^T]]`, whose characteristic polynomial is
//! `f * charpoly(-Q C^T Q^T)`. Symmetry of `M` rests on `C B = B C^T`.
//!
//! Polynomials with repeated roots are handled by a direct sum over their
//! squarefree factors, one block per unit of multiplicity.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{IntMatrix, SymIntMatrix};
use crate::polyint::IntPoly;
use crate::psatz::{self, PsatzCertificate, PsatzJson};
use crate::structmat::{bezout_ffprime, companion, BezoutMatrix, CompanionMatrix};

/// `(2 p(Z) + 1)` with Pythagoras number `p(Z) = 4`.
pub const SIZE_FACTOR: usize = 9;

/// Outcomes of the identities replayed while building a certificate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub symmetric: bool,
    pub divides: bool,
    pub size_bound: bool,
    pub intertwine: bool,
    pub similarity: bool,
    #[serde(default)]
    pub block_factor: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.symmetric
            && self.divides
            && self.size_bound
            && self.intertwine
            && self.similarity
            && self.block_factor
    }
}

/// Construction for one squarefree factor `g`, repeated `multiplicity` times
/// in the final direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCertificate {
    pub factor: IntPoly,
    pub multiplicity: u32,
    pub companion: CompanionMatrix,
    pub bezout: BezoutMatrix,
    pub psatz: PsatzCertificate,
    pub matrix: SymIntMatrix,
    /// `[[I_n, Q^T], [0, I_m]]`
    pub q_prime: IntMatrix,
    /// `[[C, 0], [Q C^T, -Q C^T Q^T]]`
    pub m_prime: IntMatrix,
}

impl FactorCertificate {
    pub fn size(&self) -> usize {
        self.matrix.size()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenCertificate {
    pub f: IntPoly,
    pub n: usize,
    pub factors: Vec<FactorCertificate>,
    pub matrix: SymIntMatrix,
    pub size: usize,
    pub checks: Checks,
}

fn fail(what: &str) -> Error {
    Error::InternalCertificateFailure(what.to_string())
}

/// Blocks of the main construction for a strict real zero `g`. Returns the
/// factor certificate together with the checks that only concern it.
fn build_factor(g: &IntPoly, multiplicity: u32) -> Result<(FactorCertificate, Checks)> {
    let c = companion(g)?;
    let b = bezout_ffprime(g)?;
    let cert = psatz::certify(&b.matrix).map_err(|e| match e {
        Error::NotPositiveDefinite => fail("B(f, f') is not positive definite for a strict real zero f"),
        other => other,
    })?;
    let n = c.n();
    let m = cert.m();
    let cm = &c.matrix;
    let ct = cm.transpose();
    let q = &cert.q;
    let qt = q.transpose();
    let qtq = q.gram().into_matrix();

    let intertwine = cm * b.matrix.as_matrix() == b.matrix.as_matrix() * &ct;

    let top_left = cm - &(&qtq * &ct);
    let top_right = cm * &qt;
    let bottom_left = q * &ct;
    let matrix = IntMatrix::block_assemble(&top_left, &top_right, &bottom_left, &IntMatrix::zeros(m, m))?;
    let symmetric = matrix.is_symmetric();
    let matrix = SymIntMatrix::new(matrix).map_err(|_| fail("assembled matrix is not symmetric"))?;

    let q_prime = IntMatrix::block_assemble(
        &IntMatrix::identity(n),
        &qt,
        &IntMatrix::zeros(m, n),
        &IntMatrix::identity(m),
    )?;
    let corner = -&(&bottom_left * &qt);
    let m_prime = IntMatrix::block_assemble(cm, &IntMatrix::zeros(n, m), &bottom_left, &corner)?;
    let similarity = &q_prime * matrix.as_matrix() == &m_prime * &q_prime;
    let block_factor = m_prime.charpoly()? == g * &corner.charpoly()?;

    let checks = Checks {
        symmetric,
        divides: false,
        size_bound: m <= 8 * n,
        intertwine,
        similarity,
        block_factor,
    };
    Ok((
        FactorCertificate {
            factor: g.clone(),
            multiplicity,
            companion: c,
            bezout: b,
            psatz: cert,
            matrix,
            q_prime,
            m_prime,
        },
        checks,
    ))
}

fn assemble(f: &IntPoly, built: Vec<(FactorCertificate, Checks)>) -> Result<EigenCertificate> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    let blocks: Vec<&IntMatrix> = built
        .iter()
        .flat_map(|(fc, _)| std::iter::repeat_n(fc.matrix.as_matrix(), fc.multiplicity as usize))
        .collect();
    let matrix = IntMatrix::direct_sum(blocks);
    let symmetric = matrix.is_symmetric() && built.iter().all(|(_, c)| c.symmetric);
    let matrix = SymIntMatrix::new(matrix).map_err(|_| fail("direct sum is not symmetric"))?;
    let size = matrix.size();
    let divides = matches!(matrix.charpoly().div_rem(f), Ok((_, r)) if r.is_zero());
    let checks = Checks {
        symmetric,
        divides,
        size_bound: size <= SIZE_FACTOR * n && built.iter().all(|(_, c)| c.size_bound),
        intertwine: built.iter().all(|(_, c)| c.intertwine),
        similarity: built.iter().all(|(_, c)| c.similarity),
        block_factor: built.iter().all(|(_, c)| c.block_factor),
    };
    if !checks.all() {
        return Err(fail(&format!("replayed identities failed: {checks:?}")));
    }
    Ok(EigenCertificate {
        f: f.clone(),
        n,
        factors: built.into_iter().map(|(fc, _)| fc).collect(),
        matrix,
        size,
        checks,
    })
}

/// Main construction for a strict real zero polynomial.
pub fn build_strict(f: &IntPoly) -> Result<EigenCertificate> {
    if !f.is_strict_real_zero()? {
        return Err(Error::NotStrictRealZero {
            distinct_real_roots: f.sturm_distinct_real_roots()?,
            degree: f.degree().unwrap_or(0),
        });
    }
    let built = build_factor(f, 1)?;
    assemble(f, vec![built])
}

/// Direct sum over the squarefree decomposition; accepts any real zero
/// polynomial.
pub fn build_any(f: &IntPoly) -> Result<EigenCertificate> {
    if !f.is_real_zero()? {
        let g = f.squarefree_part()?;
        return Err(Error::NotRealZero {
            distinct_real_roots: g.sturm_distinct_real_roots()?,
            degree: g.degree().unwrap_or(0),
        });
    }
    let decomposition = f.squarefree_decompose()?;
    let built = decomposition
        .parts
        .iter()
        .map(|(g, e)| build_factor(g, *e))
        .collect::<Result<Vec<_>>>()?;
    assemble(f, built)
}

/// Certify many polynomials, in parallel when the `parallel` feature is on
/// and `exec` asks for it. Results keep the input order.
pub fn build_batch(polys: &[IntPoly], exec: crate::Execution) -> Vec<Result<EigenCertificate>> {
    crate::par_map(polys, exec, build_any)
}

/// Per-part wire form used for non-squarefree inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartBundle {
    pub g: IntPoly,
    pub multiplicity: u32,
    #[serde(rename = "C")]
    pub c: IntMatrix,
    #[serde(rename = "B")]
    pub b: IntMatrix,
    pub psatz: PsatzJson,
    #[serde(rename = "M")]
    pub m: IntMatrix,
}

/// JSON bundle of an [`EigenCertificate`]. A single strict factor is written
/// flat (`C`, `B`, `psatz` at the top level); otherwise the factors go into
/// `parts`. Matrices are kept unchecked so that malformed bundles can still
/// be inspected by the verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub f: IntPoly,
    pub n: usize,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<IntMatrix>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psatz: Option<PsatzJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<PartBundle>>,
    #[serde(rename = "M")]
    pub m: IntMatrix,
    pub size: usize,
    pub checks: Checks,
}

impl EigenCertificate {
    pub fn is_flat(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].multiplicity == 1
    }

    pub fn to_bundle(&self) -> CertificateBundle {
        let mut bundle = CertificateBundle {
            f: self.f.clone(),
            n: self.n,
            c: None,
            b: None,
            psatz: None,
            parts: None,
            m: self.matrix.as_matrix().clone(),
            size: self.size,
            checks: self.checks,
        };
        if self.is_flat() {
            let fc = &self.factors[0];
            bundle.c = Some(fc.companion.matrix.clone());
            bundle.b = Some(fc.bezout.matrix.as_matrix().clone());
            bundle.psatz = Some(fc.psatz.to_json());
        } else {
            bundle.parts = Some(
                self.factors
                    .iter()
                    .map(|fc| PartBundle {
                        g: fc.factor.clone(),
                        multiplicity: fc.multiplicity,
                        c: fc.companion.matrix.clone(),
                        b: fc.bezout.matrix.as_matrix().clone(),
                        psatz: fc.psatz.to_json(),
                        m: fc.matrix.as_matrix().clone(),
                    })
                    .collect(),
            );
        }
        bundle
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_bundle()).expect("bundle serializes")
    }

    /// Largest bit length among `s`, the entries of `Q`, and the entries of
    /// `M`.
    pub fn bit_sizes(&self) -> (u64, u64, u64) {
        let s_bits = self.factors.iter().map(|fc| fc.psatz.s.bits()).max().unwrap_or(0);
        let q_bits = self.factors.iter().map(|fc| fc.psatz.q.max_abs_bits()).max().unwrap_or(0);
        (s_bits, q_bits, self.matrix.as_matrix().max_abs_bits())
    }

    pub fn total_s(&self) -> BigInt {
        self.factors.iter().map(|fc| fc.psatz.s.clone()).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn divides(f: &IntPoly, m: &SymIntMatrix) -> bool {
        m.as_matrix().charpoly_bareiss().unwrap().div_rem(f).unwrap().1.is_zero()
    }

    #[test]
    fn linear_is_one_by_one() {
        let cert = build_strict(&p(&[-5, 1])).unwrap();
        assert_eq!(cert.matrix, SymIntMatrix::from_i64s(&[[5]]));
        assert_eq!(cert.size, 1);
        assert_eq!(cert.factors[0].psatz.m(), 0);
    }

    #[test]
    fn x2_minus_2() {
        let cert = build_strict(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(cert.size, 6);
        let m = cert.matrix.as_matrix();
        assert_eq!(m.leading_submatrix(2), IntMatrix::from_i64s(&[[0, -1], [-1, 0]]));
        let top_right: Vec<Vec<i64>> = (0..2)
            .map(|i| (2..6).map(|j| i64::try_from(&m[(i, j)]).unwrap()).collect())
            .collect();
        assert_eq!(top_right, vec![vec![0, 0, 0, 2], vec![1, 1, 1, 0]]);
        assert!(divides(&cert.f, &cert.matrix));
        assert!(cert.checks.all());
    }

    #[test]
    fn golden_ratio_polynomial() {
        let cert = build_strict(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(cert.size, 6);
        assert_eq!(
            cert.matrix.as_matrix().leading_submatrix(2),
            IntMatrix::from_i64s(&[[2, -2], [-2, 0]])
        );
        assert!(divides(&cert.f, &cert.matrix));
    }

    #[test]
    fn strict_rejections() {
        assert!(matches!(
            build_strict(&p(&[1, 0, 1])),
            Err(Error::NotStrictRealZero { distinct_real_roots: 0, degree: 2 })
        ));
        assert!(matches!(
            build_strict(&p(&[1, -2, 1])),
            Err(Error::NotStrictRealZero { distinct_real_roots: 1, degree: 2 })
        ));
        assert_eq!(build_strict(&p(&[1, 2])), Err(Error::NotMonic));
        assert!(matches!(
            build_any(&p(&[1, 0, 2, 0, 1])),
            Err(Error::NotRealZero { distinct_real_roots: 0, degree: 2 })
        ));
    }

    #[test]
    fn direct_sum_for_square() {
        let g = p(&[-2, 0, 1]);
        let f = g.pow(2);
        let cert = build_any(&f).unwrap();
        assert_eq!(cert.size, 12);
        let single = build_strict(&g).unwrap();
        let expected = IntMatrix::direct_sum([single.matrix.as_matrix(), single.matrix.as_matrix()]);
        assert_eq!(cert.matrix.as_matrix(), &expected);
        assert!(divides(&f, &cert.matrix));
        assert!(!cert.is_flat());
    }

    #[test]
    fn build_any_matches_strict_on_squarefree() {
        let f = p(&[-1, -3, 0, 1]);
        assert_eq!(build_any(&f).unwrap(), build_strict(&f).unwrap());
        let f = &p(&[-1, 1]) * &p(&[-2, 1]);
        let cert = build_any(&f).unwrap();
        assert_eq!(cert.factors.len(), 1);
        assert!(cert.size <= 18);
    }

    #[test]
    fn bundle_layout() {
        let v = serde_json::to_value(build_strict(&p(&[-2, 0, 1])).unwrap().to_bundle()).unwrap();
        for key in ["f", "n", "C", "B", "psatz", "M", "size", "checks"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v.get("parts").is_none());
        assert_eq!(v["f"], "-2,0,1");
        assert_eq!(v["checks"]["similarity"], true);
        let v = serde_json::to_value(build_any(&p(&[-2, 0, 1]).pow(2)).unwrap().to_bundle()).unwrap();
        assert!(v.get("C").is_none());
        assert_eq!(v["parts"][0]["multiplicity"], 2);
    }
}
