//! Bethe-equation layer: symbolic generation of the equation systems for
//! arbitrary type, a numeric Newton solver for rank-one chains, evaluation of
//! the two-term Baxter eigenvalue with truncated infinite products,
//! pole-cancellation residue checks, and an independent six-vertex
//! transfer-matrix oracle.

pub mod oracle;
pub mod symbolic;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub use symbolic::{generate_bethe, BaeForm, BetheSystem};

#[derive(Debug, Error)]
pub enum BetheError {
    #[error("evaluation point {z} is a pole of the eigenvalue (|Q(zq)| = {qnorm:.3e})")]
    Pole { z: Complex64, qnorm: f64 },
    #[error("|q| must lie in (0, 1), got {0}")]
    BadQ(f64),
    #[error("oracle limited to 8 sites, got {0}")]
    OracleTooLarge(usize),
    #[error("transfer-matrix diagonalization did not converge")]
    Diagonalization,
    #[error("per-node unknown counts must match the rank {rank}, got {got}")]
    BadUnknownCounts { rank: usize, got: usize },
}

/// One site of a rank-one chain: the string length r and the spectral
/// center b.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Site {
    pub r: u32,
    pub b: Complex64,
}

impl Site {
    pub fn new(r: u32, b: Complex64) -> Self {
        Site { r, b }
    }
}

/// Smallest truncation order K with |q|^{4K}·scale below 1e-14, floored at
/// 80 so short products never dominate the error budget.
pub fn truncation_order(q_abs: f64, scale: f64) -> Result<usize, BetheError> {
    if !(q_abs > 0.0 && q_abs < 1.0) {
        return Err(BetheError::BadQ(q_abs));
    }
    let needed = ((1e-14 / scale.max(1.0)).ln() / (4.0 * q_abs.ln())).ceil();
    Ok((needed.max(0.0) as usize).max(80))
}

/// Truncated infinite product ∏_{n=0}^{K-1} (1 - a·step^n).
pub fn poch(a: Complex64, step: Complex64, k: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut f = a;
    for _ in 0..k {
        p *= 1.0 - f;
        f *= step;
    }
    p
}

/// Exponent of the leading scalar on the highest vector, the value that
/// makes the two eigenvalue terms cancel their common poles.
pub fn delta_pole_consistent(m: usize, sites: &[Site]) -> f64 {
    let rsum: f64 = sites.iter().map(|s| s.r as f64).sum();
    m as f64 - 1.0 - rsum / 2.0
}

/// The exponent as printed alongside the two-term eigenvalue formula; kept
/// for negative controls — the ratio test shows it is not the consistent one.
pub fn delta_printed(m: usize, sites: &[Site]) -> f64 {
    let tail: f64 = sites.iter().map(|s| 1.0 - s.r as f64 / 2.0).sum();
    2.0 * m as f64 + tail
}

/// Two-term Baxter eigenvalue data for a rank-one chain.
#[derive(Clone, Debug)]
pub struct EigenvalueSl2 {
    pub q: Complex64,
    pub sites: Vec<Site>,
    pub roots: Vec<Complex64>,
    pub delta: f64,
    /// truncation order K of the infinite products
    pub truncation: usize,
}

impl EigenvalueSl2 {
    fn build(q: Complex64, sites: &[Site], roots: &[Complex64], delta: f64) -> Result<Self, BetheError> {
        let truncation = truncation_order(q.norm(), 10.0)?;
        Ok(EigenvalueSl2 {
            q,
            sites: sites.to_vec(),
            roots: roots.to_vec(),
            delta,
            truncation,
        })
    }

    pub fn delta_pole_consistent(
        q: Complex64,
        sites: &[Site],
        roots: &[Complex64],
    ) -> Result<Self, BetheError> {
        let d = delta_pole_consistent(roots.len(), sites);
        Self::build(q, sites, roots, d)
    }

    pub fn delta_printed(
        q: Complex64,
        sites: &[Site],
        roots: &[Complex64],
    ) -> Result<Self, BetheError> {
        let d = delta_printed(roots.len(), sites);
        Self::build(q, sites, roots, d)
    }

    /// μ(z) = ∏_j (z b_j^{-1} q^{r_j+2}; q^4)_K / (z b_j^{-1} q^{-r_j+2}; q^4)_K.
    pub fn mu(&self, z: Complex64) -> Complex64 {
        let q4 = self.q.powi(4);
        let mut out = Complex64::new(1.0, 0.0);
        for s in &self.sites {
            let x = z / s.b;
            let num = poch(x * self.q.powi(s.r as i32 + 2), q4, self.truncation);
            let den = poch(x * self.q.powi(-(s.r as i32) + 2), q4, self.truncation);
            out *= num / den;
        }
        out
    }

    /// Q(z) = ∏_k (1 - z/w_k).
    pub fn q_poly(&self, z: Complex64) -> Complex64 {
        self.roots.iter().map(|w| 1.0 - z / w).product()
    }

    fn eval_raw(&self, z: Complex64) -> Complex64 {
        let q = self.q;
        let m1 = self.mu(z / q) / self.mu(z * q);
        let m3 = self.mu(z * q.powi(3)) / self.mu(z * q);
        let qz = self.q_poly(z * q);
        let t1 = q.powf(self.delta) * m1 * self.q_poly(z / q) / qz;
        let t2 = q.powf(-self.delta) * m3 * self.q_poly(z * q.powi(3)) / qz;
        t1 + t2
    }

    /// q^Δ μ(zq^{-1})/μ(zq)·Q(zq^{-1})/Q(zq) + q^{-Δ} μ(zq^3)/μ(zq)·Q(zq^3)/Q(zq).
    pub fn baxter_eigenvalue(&self, z: Complex64) -> Result<Complex64, BetheError> {
        let qnorm = self.q_poly(z * self.q).norm();
        if qnorm < 1e-10 {
            return Err(BetheError::Pole { z, qnorm });
        }
        Ok(self.eval_raw(z))
    }

    /// Contour estimate of |residue| of the eigenvalue at its seeming pole
    /// z = w_k/q; vanishes when the roots solve the Bethe system.
    pub fn residue_check(&self, k: usize, radius: f64) -> f64 {
        let z0 = self.roots[k] / self.q;
        let npts = 64;
        let mut tot = Complex64::new(0.0, 0.0);
        for t in 0..npts {
            let th = 2.0 * std::f64::consts::PI * t as f64 / npts as f64;
            let dir = Complex64::new(th.cos(), th.sin());
            let v = self.eval_raw(z0 + radius * dir);
            if !v.re.is_finite() || !v.im.is_finite() {
                return f64::INFINITY;
            }
            tot += v * radius * dir;
        }
        (tot / npts as f64).norm()
    }

    /// One residue estimate per root; empty when there are no roots.
    pub fn residue_checks(&self, radius: f64) -> Vec<f64> {
        (0..self.roots.len())
            .map(|k| self.residue_check(k, radius))
            .collect()
    }
}

/// Independent evaluation of the highest-vector eigenvalue factor:
/// q^{1-r/2}·(zb^{-1}q^{r+1};q^4)(zb^{-1}q^{-r+3};q^4) /
/// [(zb^{-1}q^{r+3};q^4)(zb^{-1}q^{-r+1};q^4)], truncated at order k.
pub fn y_value(z: Complex64, b: Complex64, r: u32, q: Complex64, k: usize) -> Complex64 {
    let q4 = q.powi(4);
    let x = z / b;
    let ri = r as i32;
    let num = poch(x * q.powi(ri + 1), q4, k) * poch(x * q.powi(-ri + 3), q4, k);
    let den = poch(x * q.powi(ri + 3), q4, k) * poch(x * q.powi(-ri + 1), q4, k);
    q.powf(1.0 - r as f64 / 2.0) * num / den
}

/// Residuals of the pole-cancellation Bethe system for a rank-one chain:
/// ∏_j q^{r_j}(w_k - b_j q^{-r_j})/(w_k - b_j q^{r_j})
///   - q^{4m-2-2Δ-Σr_j} ∏_{s≠k}(w_k - w_s q^{-2})/(w_k - w_s q^2).
/// With the pole-consistent Δ the scalar reduces to q^{2m}.
pub fn sl2_residuals(
    roots: &[Complex64],
    sites: &[Site],
    q: Complex64,
    delta: f64,
) -> Vec<Complex64> {
    let m = roots.len();
    let rsum: f64 = sites.iter().map(|s| s.r as f64).sum();
    let coef = q.powf(4.0 * m as f64 - 2.0 - 2.0 * delta - rsum);
    let mut out = Vec::with_capacity(m);
    for (k, &w) in roots.iter().enumerate() {
        let mut lhs = Complex64::new(1.0, 0.0);
        for s in sites {
            let ri = s.r as i32;
            lhs *= q.powi(ri) * (w - s.b * q.powi(-ri)) / (w - s.b * q.powi(ri));
        }
        let mut rhs = coef;
        for (s, &ws) in roots.iter().enumerate() {
            if s != k {
                rhs *= (w - ws * q.powi(-2)) / (w - ws * q.powi(2));
            }
        }
        out.push(lhs - rhs);
    }
    out
}

/// Residuals of the rank-one system in its standard printed normalization,
/// with scalar -q^{-N}.
pub fn sl2_residuals_printed(roots: &[Complex64], sites: &[Site], q: Complex64) -> Vec<Complex64> {
    let n = sites.len() as i32;
    let mut out = Vec::with_capacity(roots.len());
    for (k, &w) in roots.iter().enumerate() {
        let mut lhs = Complex64::new(1.0, 0.0);
        for s in sites {
            let ri = s.r as i32;
            lhs *= q.powi(ri) * (w - s.b * q.powi(-ri)) / (w - s.b * q.powi(ri));
        }
        let mut rhs = -q.powi(-n);
        for (s, &ws) in roots.iter().enumerate() {
            if s != k {
                rhs *= (w - ws * q.powi(-2)) / (w - ws * q.powi(2));
            }
        }
        out.push(lhs - rhs);
    }
    out
}

/// A converged root set with its sup-norm residual.
#[derive(Clone, Debug)]
pub struct Sl2Solution {
    pub roots: Vec<Complex64>,
    pub residual: f64,
}

fn canonical_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut v = roots.to_vec();
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    v
}

fn same_solution(a: &[Complex64], b: &[Complex64]) -> bool {
    let (ca, cb) = (canonical_roots(a), canonical_roots(b));
    let scale = ca.iter().map(|v| v.norm()).fold(1.0, f64::max);
    ca.iter()
        .zip(&cb)
        .all(|(x, y)| (x - y).norm() <= 1e-8 * scale)
}

/// Newton iteration from every seed, keeping converged root sets
/// (sup-norm residual < tol) and deduplicating up to permutation.
/// Non-converging seeds are dropped, not fatal.  Seeds are processed in
/// parallel across `threads` workers; the result is seed-order
/// deterministic either way.
pub fn solve_sl2(
    sites: &[Site],
    m: usize,
    q: Complex64,
    form: BaeForm,
    seeds: &[Vec<Complex64>],
    tol: f64,
    threads: usize,
) -> Vec<Sl2Solution> {
    match form {
        BaeForm::PoleCancellation => {
            let delta = delta_pole_consistent(m, sites);
            solve_with(sites, m, q, seeds, tol, threads, move |r, s, qq| {
                sl2_residuals(r, s, qq, delta)
            })
        }
        BaeForm::Standard => {
            solve_with(sites, m, q, seeds, tol, threads, sl2_residuals_printed)
        }
    }
}

/// Newton solve of the pole-cancellation system at an explicit Δ (used for
/// negative controls with the printed exponent).
pub fn solve_sl2_with_delta(
    sites: &[Site],
    m: usize,
    q: Complex64,
    delta: f64,
    seeds: &[Vec<Complex64>],
    tol: f64,
    threads: usize,
) -> Vec<Sl2Solution> {
    solve_with(sites, m, q, seeds, tol, threads, move |roots, sites, q| {
        sl2_residuals(roots, sites, q, delta)
    })
}

fn solve_with<F>(
    sites: &[Site],
    m: usize,
    q: Complex64,
    seeds: &[Vec<Complex64>],
    tol: f64,
    threads: usize,
    residual_fn: F,
) -> Vec<Sl2Solution>
where
    F: Fn(&[Complex64], &[Site], Complex64) -> Vec<Complex64> + Sync,
{
    if m == 0 {
        return vec![Sl2Solution {
            roots: Vec::new(),
            residual: 0.0,
        }];
    }
    let run = |seed: &Vec<Complex64>| -> Option<Sl2Solution> {
        if seed.len() != m {
            return None;
        }
        newton_with(seed, sites, q, tol, &residual_fn)
    };
    let results: Vec<Option<Sl2Solution>> = if threads <= 1 || seeds.len() <= 1 {
        seeds.iter().map(run).collect()
    } else {
        let mut slots: Vec<Option<Sl2Solution>> = vec![None; seeds.len()];
        let chunk = seeds.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (ci, block) in seeds.chunks(chunk).enumerate() {
                let runr = &run;
                handles.push((ci, scope.spawn(move || block.iter().map(runr).collect::<Vec<_>>())));
            }
            for (ci, h) in handles {
                let out = h.join().expect("newton worker");
                for (off, sol) in out.into_iter().enumerate() {
                    slots[ci * chunk + off] = sol;
                }
            }
        });
        slots
    };
    let mut found: Vec<Sl2Solution> = Vec::new();
    for sol in results.into_iter().flatten() {
        if !found.iter().any(|f| same_solution(&f.roots, &sol.roots)) {
            found.push(Sl2Solution {
                roots: canonical_roots(&sol.roots),
                residual: sol.residual,
            });
        }
    }
    found
}

fn newton_with<F>(
    seed: &[Complex64],
    sites: &[Site],
    q: Complex64,
    tol: f64,
    residual_fn: &F,
) -> Option<Sl2Solution>
where
    F: Fn(&[Complex64], &[Site], Complex64) -> Vec<Complex64>,
{
    let m = seed.len();
    let mut roots = seed.to_vec();
    let h = 1e-8;
    for _ in 0..80 {
        let f = residual_fn(&roots, sites, q);
        let fmax = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !fmax.is_finite() {
            return None;
        }
        if fmax < tol {
            break;
        }
        let mut jac = DMatrix::<Complex64>::zeros(m, m);
        for j in 0..m {
            let mut rp = roots.clone();
            rp[j] += h;
            let fp = residual_fn(&rp, sites, q);
            for i in 0..m {
                jac[(i, j)] = (fp[i] - f[i]) / h;
            }
        }
        let rhs = DVector::from_iterator(m, f.iter().cloned());
        let step = jac.lu().solve(&rhs)?;
        for j in 0..m {
            roots[j] -= step[j];
        }
    }
    let residual = residual_fn(&roots, sites, q)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    (residual < tol).then_some(Sl2Solution { roots, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Complex64 = Complex64::new(0.3, 0.0);

    #[test]
    fn truncation_orders() {
        assert_eq!(truncation_order(0.3, 10.0).unwrap(), 80);
        assert!(truncation_order(0.9, 10.0).unwrap() > 80);
        assert!(truncation_order(1.1, 10.0).is_err());
    }

    #[test]
    fn poch_small_cases() {
        let a = Complex64::new(0.5, 0.0);
        let s = Complex64::new(0.0, 0.0);
        assert!((poch(a, s, 3) - 0.5).norm() < 1e-15);
        // two factors: (1-a)(1-a s)
        let s = Complex64::new(0.1, 0.0);
        assert!((poch(a, s, 2) - 0.5 * 0.95).norm() < 1e-15);
    }

    #[test]
    fn delta_values() {
        let sites = vec![Site::new(1, Complex64::new(1.0, 0.0)); 2];
        assert_eq!(delta_pole_consistent(1, &sites), -1.0);
        assert_eq!(delta_printed(1, &sites), 3.0);
    }

    #[test]
    fn eigenvalue_at_zero_is_the_scalar_pair() {
        let sites = vec![Site::new(1, Complex64::new(1.0, 0.0)); 2];
        let e = EigenvalueSl2::delta_pole_consistent(Q, &sites, &[]).unwrap();
        let v = e.baxter_eigenvalue(Complex64::new(0.0, 0.0)).unwrap();
        let expect = Q.powf(e.delta) + Q.powf(-e.delta);
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn single_site_newton_hits_the_closed_form() {
        let sites = vec![Site::new(1, Complex64::new(1.0, 0.0))];
        let seed = vec![vec![Complex64::new(4.5, 0.1)]];
        let sols = solve_sl2(&sites, 1, Q, BaeForm::PoleCancellation, &seed, 1e-12, 1);
        assert_eq!(sols.len(), 1);
        let expect = (1.0 + Q + Q * Q) / Q;
        assert!((sols[0].roots[0] - expect).norm() < 1e-10);
        assert!(sols[0].residual < 1e-12);
    }

    #[test]
    fn zero_roots_is_trivially_solved() {
        let sites = vec![Site::new(1, Complex64::new(1.0, 0.0))];
        let sols = solve_sl2(&sites, 0, Q, BaeForm::PoleCancellation, &[], 1e-12, 1);
        assert_eq!(sols.len(), 1);
        assert!(sols[0].roots.is_empty());
        let e = EigenvalueSl2::delta_pole_consistent(Q, &sites, &[]).unwrap();
        assert!(e.residue_checks(1e-3).is_empty());
    }
}
