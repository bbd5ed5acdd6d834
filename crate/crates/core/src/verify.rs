//! Independent certificate checking and a brute-force realization search.
//!
//! The verifier works on the wire-level [`CertificateBundle`] and shares as
//! little with the builder as it can: the characteristic polynomial comes
//! from fraction-free elimination over `Z[X]` instead of Faddeev–LeVerrier,
//! and the Bézout matrix is recomputed from its closed double-sum form
//! rather than from the bivariate quotient.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::{CertificateBundle, EigenCertificate, SIZE_FACTOR};
use crate::error::{Error, Result};
use crate::exactmat::{IntMatrix, SymIntMatrix};
use crate::polyint::IntPoly;
use crate::Execution;

pub const SYMMETRIC: &str = "symmetric";
pub const PSATZ_IDENTITY: &str = "psatz_identity";
pub const INTERTWINE: &str = "intertwine";
pub const DIVIDES: &str = "divides";
pub const SIZE_BOUND: &str = "size_bound";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub findings: Vec<Finding>,
}

impl VerificationReport {
    fn from_findings(findings: Vec<Finding>) -> Self {
        VerificationReport {
            passed: findings.iter().all(|f| f.pass),
            findings,
        }
    }

    pub fn finding(&self, name: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.pass)
    }
}

type Check = std::result::Result<String, String>;

fn finding(name: &str, outcome: Check) -> Finding {
    let (pass, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Finding {
        name: name.to_string(),
        pass,
        detail,
    }
}

/// One squarefree block as seen by the verifier.
struct PartView<'a> {
    g: IntPoly,
    multiplicity: u32,
    c: &'a IntMatrix,
    b: &'a IntMatrix,
    s: &'a str,
    q: IntMatrix,
    m_declared: usize,
    n_declared: usize,
    block: &'a IntMatrix,
}

fn parts_of(bundle: &CertificateBundle) -> std::result::Result<Vec<PartView<'_>>, String> {
    match (&bundle.parts, &bundle.c, &bundle.b, &bundle.psatz) {
        (Some(parts), _, _, _) if !parts.is_empty() => Ok(parts
            .iter()
            .map(|p| PartView {
                g: p.g.clone(),
                multiplicity: p.multiplicity,
                c: &p.c,
                b: &p.b,
                s: &p.psatz.s,
                q: p.psatz.q_matrix(),
                m_declared: p.psatz.m,
                n_declared: p.psatz.n,
                block: &p.m,
            })
            .collect()),
        (None, Some(c), Some(b), Some(ps)) => Ok(vec![PartView {
            g: bundle.f.clone(),
            multiplicity: 1,
            c,
            b,
            s: &ps.s,
            q: ps.q_matrix(),
            m_declared: ps.m,
            n_declared: ps.n,
            block: &bundle.m,
        }]),
        _ => Err("bundle has neither top-level C/B/psatz nor parts".into()),
    }
}

/// Companion matrix built directly from the coefficients.
fn companion_of(g: &IntPoly) -> Option<IntMatrix> {
    let n = g.degree().filter(|&d| d >= 1 && g.is_monic())?;
    let mut c = IntMatrix::zeros(n, n);
    for i in 0..n {
        if i + 1 < n {
            c[(i + 1, i)] = BigInt::one();
        }
        c[(i, n - 1)] = -g.coeff(i);
    }
    Some(c)
}

/// `B(f, g)` from the closed form: for `k > l` the pair of terms
/// `(f_k g_l - f_l g_k)(Y^k X^l - X^k Y^l) / (Y - X)` contributes to
/// `Y^(l+t) X^(k-1-t)` for `t = 0..k-l-1`.
fn bezout_closed_form(f: &IntPoly, g: &IntPoly) -> IntMatrix {
    let n = f.degree().unwrap_or(0);
    let mut b = IntMatrix::zeros(n, n);
    for k in 0..=n {
        for l in 0..k {
            let w = f.coeff(k) * g.coeff(l) - f.coeff(l) * g.coeff(k);
            if w.is_zero() {
                continue;
            }
            for t in 0..k - l {
                b[(l + t, k - 1 - t)] += &w;
            }
        }
    }
    b
}

fn check_symmetric(bundle: &CertificateBundle, parts: &[PartView<'_>]) -> Check {
    let m = &bundle.m;
    if !m.is_square() {
        return Err(format!("M is {}x{}, not square", m.rows(), m.cols()));
    }
    if let Err(e) = SymIntMatrix::new(m.clone()) {
        return Err(format!("M: {e}"));
    }
    for (i, p) in parts.iter().enumerate() {
        if !p.block.is_symmetric() {
            return Err(format!("block {i} is not symmetric"));
        }
    }
    Ok(format!("M is a symmetric {}x{} matrix", m.rows(), m.cols()))
}

fn check_psatz(parts: &[PartView<'_>]) -> Check {
    let mut details = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let n = p.b.rows();
        if !p.b.is_symmetric() {
            return Err(format!("block {i}: B is not symmetric"));
        }
        let s: BigInt = p.s.parse().map_err(|_| format!("block {i}: s = {:?} is not an integer", p.s))?;
        if !s.is_positive() {
            return Err(format!("block {i}: s = {s} is not positive"));
        }
        if p.n_declared != n || p.q.cols() != n {
            return Err(format!(
                "block {i}: Q has {} columns, B is {n}x{n}, psatz.n = {}",
                p.q.cols(),
                p.n_declared
            ));
        }
        if p.m_declared != p.q.rows() {
            return Err(format!("block {i}: psatz.m = {} but Q has {} rows", p.m_declared, p.q.rows()));
        }
        if p.q.rows() > 8 * n {
            return Err(format!("block {i}: m = {} exceeds 8n = {}", p.q.rows(), 8 * n));
        }
        let mut lhs = p.b.scale(&s);
        for j in 0..n {
            lhs[(j, j)] -= 1;
        }
        let rhs = p.q.transpose().matmul(&p.q).map_err(|e| e.to_string())?;
        if let Some(idx) = lhs.data().iter().zip(rhs.data()).position(|(a, b)| a != b) {
            return Err(format!(
                "block {i}: s B - I differs from Q^T Q at ({}, {})",
                idx / n,
                idx % n
            ));
        }
        details.push(format!("s = {s}, m = {} <= {}", p.q.rows(), 8 * n));
    }
    Ok(format!("s B = I + Q^T Q holds ({})", details.join("; ")))
}

fn check_intertwine(parts: &[PartView<'_>]) -> Check {
    for (i, p) in parts.iter().enumerate() {
        let c = companion_of(&p.g).ok_or_else(|| format!("block {i}: factor {} is not monic", p.g))?;
        if &c != p.c {
            return Err(format!("block {i}: C is not the companion matrix of {}", p.g.pretty()));
        }
        let b = bezout_closed_form(&p.g, &p.g.derivative());
        if &b != p.b {
            return Err(format!("block {i}: B is not B(g, g') for g = {}", p.g.pretty()));
        }
        let cb = c.matmul(&b).map_err(|e| e.to_string())?;
        let bct = b.matmul(&c.transpose()).map_err(|e| e.to_string())?;
        if cb != bct {
            return Err(format!("block {i}: C B != B C^T"));
        }
    }
    Ok("C is the companion matrix, B = B(f, f'), and C B = B C^T".into())
}

fn check_divides(bundle: &CertificateBundle, parts: &[PartView<'_>]) -> Check {
    let f = &bundle.f;
    if f.degree().is_none_or(|d| d == 0) || !f.is_monic() {
        return Err(format!("f = {} is not monic of positive degree", f.pretty()));
    }
    if bundle.parts.is_some() {
        let product = parts
            .iter()
            .fold(IntPoly::one(), |acc, p| &acc * &p.g.pow(p.multiplicity));
        if &product != f {
            return Err("product of factors^multiplicity differs from f".into());
        }
        let blocks: Vec<&IntMatrix> = parts
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.block, p.multiplicity as usize))
            .collect();
        if IntMatrix::direct_sum(blocks) != bundle.m {
            return Err("M is not the direct sum of the part blocks".into());
        }
    }
    let cp = bundle
        .m
        .charpoly_bareiss()
        .map_err(|e| format!("charpoly(M): {e}"))?;
    let (_, r) = cp.div_rem(f).map_err(|e| e.to_string())?;
    if !r.is_zero() {
        return Err(format!("charpoly(M) mod f = {}", r.pretty()));
    }
    Ok(format!("f = {} divides charpoly(M) (degree {})", f.pretty(), cp.degree().unwrap_or(0)))
}

fn check_size(bundle: &CertificateBundle) -> Check {
    let deg = bundle.f.degree().unwrap_or(0);
    if bundle.n != deg {
        return Err(format!("n = {} but deg f = {deg}", bundle.n));
    }
    let m = &bundle.m;
    if m.rows() != bundle.size || m.cols() != bundle.size {
        return Err(format!("M is {}x{} but size = {}", m.rows(), m.cols(), bundle.size));
    }
    let bound = SIZE_FACTOR * deg;
    if bundle.size > bound {
        return Err(format!("size {} exceeds {SIZE_FACTOR} * {deg} = {bound}", bundle.size));
    }
    Ok(format!("size {} <= {bound}", bundle.size))
}

/// Re-check every identity of a certificate bundle. Never fails: problems
/// become failing findings.
pub fn verify_certificate(bundle: &CertificateBundle) -> VerificationReport {
    let parts = parts_of(bundle);
    let with_parts = |name: &str, run: &dyn Fn(&[PartView<'_>]) -> Check| match &parts {
        Ok(p) => finding(name, run(p)),
        Err(e) => finding(name, Err(e.clone())),
    };
    let findings = vec![
        with_parts(SYMMETRIC, &|p| check_symmetric(bundle, p)),
        with_parts(PSATZ_IDENTITY, &check_psatz),
        with_parts(INTERTWINE, &check_intertwine),
        with_parts(DIVIDES, &|p| check_divides(bundle, p)),
        finding(SIZE_BOUND, check_size(bundle)),
    ];
    VerificationReport::from_findings(findings)
}

pub fn verify(cert: &EigenCertificate) -> VerificationReport {
    verify_certificate(&cert.to_bundle())
}

/// Default cap on the number of candidate matrices the brute-force search
/// may enumerate.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_size: usize,
    pub max_entry: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub f: IntPoly,
    pub min_size_found: Option<usize>,
    pub witness: Option<SymIntMatrix>,
    pub search_bounds: SearchBounds,
    pub candidates_examined: u64,
}

/// Candidate entries are ordered `0, 1, -1, 2, -2, …`; witnesses are
/// compared lexicographically on the upper triangle in row-major order
/// under that order.
fn entry_value(digit: u64) -> i64 {
    if digit % 2 == 1 {
        digit.div_ceil(2) as i64
    } else {
        -((digit / 2) as i64)
    }
}

fn upper_len(r: usize) -> u32 {
    (r * (r + 1) / 2) as u32
}

/// Number of candidates for the sizes the search would visit, `None` on
/// overflow.
pub fn search_space(f: &IntPoly, max_size: usize, max_entry: u32) -> Option<u128> {
    let radix = 2 * max_entry as u128 + 1;
    let start = f.degree().unwrap_or(1).max(1);
    (start..=max_size).try_fold(0u128, |acc, r| acc.checked_add(radix.checked_pow(upper_len(r))?))
}

fn decode(index: u64, r: usize, radix: u64) -> Vec<i64> {
    let mut upper = vec![0i64; upper_len(r) as usize];
    let mut rest = index;
    for slot in upper.iter_mut().rev() {
        *slot = entry_value(rest % radix);
        rest /= radix;
    }
    let mut m = vec![0i64; r * r];
    let mut it = upper.into_iter();
    for i in 0..r {
        for j in i..r {
            let v = it.next().expect("upper triangle length");
            m[i * r + j] = v;
            m[j * r + i] = v;
        }
    }
    m
}

/// Faddeev–LeVerrier in `i128`, `None` on overflow.
fn charpoly_small(a: &[i64], r: usize) -> Option<Vec<i128>> {
    let mut coeffs = vec![0i128; r + 1];
    coeffs[r] = 1;
    let mut nk = vec![0i128; r * r];
    let mut prod = vec![0i128; r * r];
    for k in 1..=r {
        for i in 0..r {
            nk[i * r + i] = nk[i * r + i].checked_add(coeffs[r - k + 1])?;
        }
        let mut trace = 0i128;
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0i128;
                for l in 0..r {
                    acc = acc.checked_add((a[i * r + l] as i128).checked_mul(nk[l * r + j])?)?;
                }
                prod[i * r + j] = acc;
            }
            trace = trace.checked_add(prod[i * r + i])?;
        }
        coeffs[r - k] = -trace / k as i128;
        std::mem::swap(&mut nk, &mut prod);
    }
    Some(coeffs)
}

fn divides_small(cp: &[i128], f: &[i128]) -> Option<bool> {
    let df = f.len() - 1;
    let mut rem = cp.to_vec();
    for k in (df..rem.len()).rev() {
        let lead = rem[k];
        if lead == 0 {
            continue;
        }
        for (j, fj) in f.iter().enumerate() {
            let idx = k - df + j;
            rem[idx] = rem[idx].checked_sub(lead.checked_mul(*fj)?)?;
        }
    }
    Some(rem[..df].iter().all(|&x| x == 0))
}

fn is_witness(f: &IntPoly, f_small: Option<&[i128]>, a: &[i64], r: usize) -> bool {
    if let Some(fs) = f_small {
        if let Some(cp) = charpoly_small(a, r) {
            if let Some(ok) = divides_small(&cp, fs) {
                return ok;
            }
        }
    }
    let m = IntMatrix::from_data(r, r, a.iter().map(|&x| BigInt::from(x)).collect()).expect("r x r");
    let cp = m.charpoly().expect("square");
    cp.div_rem(f).expect("f monic").1.is_zero()
}

/// Smallest `r <= max_size` admitting a symmetric `r x r` matrix with
/// entries in `[-max_entry, max_entry]` whose characteristic polynomial is
/// divisible by `f`, with the least such matrix as witness.
pub fn brute_force_min_size(f: &IntPoly, max_size: usize, max_entry: u32) -> Result<OracleResult> {
    brute_force_min_size_with(f, max_size, max_entry, DEFAULT_BUDGET, Execution::default())
}

pub fn brute_force_min_size_with(
    f: &IntPoly,
    max_size: usize,
    max_entry: u32,
    budget: u64,
    exec: Execution,
) -> Result<OracleResult> {
    let deg = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::NotMonic),
    };
    match search_space(f, max_size, max_entry) {
        Some(total) if total <= budget as u128 => {}
        estimate => {
            return Err(Error::BoundsTooLarge {
                estimate: estimate.map_or_else(|| "more than 2^128".into(), |t| t.to_string()),
                budget,
            })
        }
    }
    let f_small: Option<Vec<i128>> = f.coeffs().iter().map(ToPrimitive::to_i128).collect();
    let radix = 2 * max_entry as u64 + 1;
    let mut examined = 0u64;
    for r in deg..=max_size {
        let count = radix.pow(upper_len(r));
        let test = |idx: u64| is_witness(f, f_small.as_deref(), &decode(idx, r, radix), r);
        let found = first_index(count, exec, test);
        examined += found.map_or(count, |i| i + 1);
        if let Some(idx) = found {
            let a = decode(idx, r, radix);
            let witness = SymIntMatrix::new(
                IntMatrix::from_data(r, r, a.into_iter().map(BigInt::from).collect()).expect("r x r"),
            )
            .expect("decoded symmetric");
            return Ok(OracleResult {
                f: f.clone(),
                min_size_found: Some(r),
                witness: Some(witness),
                search_bounds: SearchBounds { max_size, max_entry },
                candidates_examined: examined,
            });
        }
    }
    Ok(OracleResult {
        f: f.clone(),
        min_size_found: None,
        witness: None,
        search_bounds: SearchBounds { max_size, max_entry },
        candidates_examined: examined,
    })
}

/// Least index in `0..count` satisfying `test`. The parallel path uses
/// `find_first`, so the answer does not depend on scheduling.
fn first_index(count: u64, exec: Execution, test: impl Fn(u64) -> bool + Sync + Send) -> Option<u64> {
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().find_first(|&i| test(i))
        }
        _ => (0..count).find(|&i| test(i)),
    }
}
