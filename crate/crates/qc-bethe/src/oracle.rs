//! Small-chain transfer matrix for cross-checking the two-term eigenvalue.
//!
//! The auxiliary and quantum spaces are two-dimensional; the chain carries
//! inhomogeneities b_j and a diagonal twist diag(q, 1/q) in the auxiliary
//! space, so the total spin-z blocks stay invariant and the eigenvalue
//! candidates can be read off per sector.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::BetheError;

const MAX_SITES: usize = 8;

/// 4x4 R-matrix on aux ⊗ site in the basis (a, s) -> 2a + s.
fn r_matrix(u: Complex64, q: Complex64) -> [[Complex64; 4]; 4] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let a = one - u / (q * q);
    let b = (one - u) / q;
    let c1 = one - 1.0 / (q * q);
    let c2 = c1 * u;
    [
        [a, zero, zero, zero],
        [zero, b, c1, zero],
        [zero, c2, b, zero],
        [zero, zero, zero, a],
    ]
}

/// Twisted transfer matrix on N sites: trace over the auxiliary space of
/// diag(q, 1/q) · R_{0,N-1}(z q^2 / b_{N-1}) ··· R_{0,0}(z q^2 / b_0).
pub fn transfer_matrix(
    z: Complex64,
    bs: &[Complex64],
    q: Complex64,
) -> Result<DMatrix<Complex64>, BetheError> {
    let n = bs.len();
    if n == 0 || n > MAX_SITES {
        return Err(BetheError::OracleTooLarge(n));
    }
    let dim = 1usize << n;
    let zero = Complex64::new(0.0, 0.0);

    // Monodromy as a (2*dim) x (2*dim) operator on aux ⊗ chain.
    let mut tot = DMatrix::<Complex64>::identity(2 * dim, 2 * dim);
    for j in (0..n).rev() {
        let r = r_matrix(z * q * q / bs[j], q);
        let mut op = DMatrix::<Complex64>::from_element(2 * dim, 2 * dim, zero);
        for a_out in 0..2usize {
            for a_in in 0..2usize {
                for ph in 0..dim {
                    let s_in = (ph >> j) & 1;
                    for s_out in 0..2usize {
                        let amp = r[2 * a_out + s_out][2 * a_in + s_in];
                        if amp == zero {
                            continue;
                        }
                        let ph_out = (ph & !(1 << j)) | (s_out << j);
                        op[(a_out * dim + ph_out, a_in * dim + ph)] += amp;
                    }
                }
            }
        }
        tot = &tot * &op;
    }

    let mut t = DMatrix::<Complex64>::from_element(dim, dim, zero);
    for x in 0..dim {
        for y in 0..dim {
            t[(x, y)] = q * tot[(x, y)] + tot[(dim + x, dim + y)] / q;
        }
    }
    Ok(t)
}

/// Eigenvalues of the transfer matrix grouped by number of flipped sites,
/// each group sorted by (re, im).
pub fn sector_eigenvalues(
    z: Complex64,
    bs: &[Complex64],
    q: Complex64,
) -> Result<Vec<Vec<Complex64>>, BetheError> {
    let t = transfer_matrix(z, bs, q)?;
    let n = bs.len();
    let dim = 1usize << n;
    let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for s in 0..dim {
        sectors[s.count_ones() as usize].push(s);
    }
    let mut out = Vec::with_capacity(n + 1);
    for idx in &sectors {
        let k = idx.len();
        let mut block = DMatrix::<Complex64>::zeros(k, k);
        for (x, &sx) in idx.iter().enumerate() {
            for (y, &sy) in idx.iter().enumerate() {
                block[(x, y)] = t[(sx, sy)];
            }
        }
        let schur = block
            .try_schur(1e-13, 10_000)
            .ok_or(BetheError::Diagonalization)?;
        // Complex Schur form is upper triangular, so eigenvalues sit on the
        // diagonal.
        let mut eigs: Vec<Complex64> = schur.unpack().1.diagonal().iter().copied().collect();
        eigs.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .expect("finite eigenvalues")
        });
        out.push(eigs);
    }
    Ok(out)
}
