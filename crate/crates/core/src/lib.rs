//! Symmetric integer matrices with prescribed eigenvalues.
//!
//! Every monic real-rooted integer polynomial `f` of degree `n` divides the
//! characteristic polynomial of a symmetric integer matrix of size at most
//! `9n`. This crate builds such a matrix together with a certificate that
//! can be replayed with exact arithmetic:
//!
//! * [`polyint`]: integer polynomials, Sturm counting, squarefree
//!   decomposition;
//! * [`exactmat`]: exact matrices, fraction-free determinants and
//!   characteristic polynomials;
//! * [`structmat`]: companion and Bézout matrices;
//! * [`foursquare`]: Lagrange four-square decompositions;
//! * [`psatz`]: certificates `s B = I + Q^T Q` for positive definite `B`;
//! * [`certify`]: the end-to-end construction;
//! * [`verify`]: an independent checker and a brute-force search for the
//!   smallest realizing matrix;
//! * [`cli`]: the `eigenrep` command line.
//!
//! With the default `parallel` feature, batch certification, Cauchy–Binet
//! minor sums and the brute-force search run on the rayon thread pool.
//! Disabling the feature gives identical results sequentially.

pub mod certify;
pub mod cli;
pub mod error;
pub mod exactmat;
pub mod foursquare;
pub mod polyint;
pub mod psatz;
pub mod structmat;
pub mod verify;

pub use certify::{build_any, build_strict, CertificateBundle, EigenCertificate};
pub use error::{Error, Result};
pub use exactmat::{IntMatrix, SymIntMatrix};
pub use polyint::IntPoly;
pub use verify::{verify_certificate, VerificationReport};

/// How data-parallel loops are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs
    /// sequentially.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub(crate) fn par_map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}
