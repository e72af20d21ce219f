//! Exact rational linear algebra for kernel computations.  Everything runs
//! over arbitrary-precision rationals; results are cleared to primitive
//! integer vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(mat: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = mat.len();
    let ncols = if nrows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].clone();
        for v in mat[row].iter_mut() {
            *v /= &inv;
        }
        for r in 0..nrows {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in 0..ncols {
                    let sub = &mat[row][c] * &factor;
                    mat[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    pivots
}

/// Rank of an integer matrix over the rationals.
pub fn row_rank(rows: &[Vec<i64>]) -> usize {
    let mut mat = to_rational_rows(rows);
    rref(&mut mat).len()
}

fn clear_to_primitive(v: &[BigRational]) -> Vec<i64> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = num_integer::gcd(gcd, x.abs());
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &gcd).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    out.into_iter()
        .map(|x| i64::try_from(x).expect("kernel coefficient fits in i64"))
        .collect()
}

/// Primitive integer basis of {x : A x = 0} for the integer matrix A given
/// by rows; `ncols` disambiguates the empty-matrix case.  One basis vector
/// per free column of the reduced echelon form, in column order.
pub fn nullspace_primitive(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut mat = to_rational_rows(rows);
    let pivots = rref(&mut mat);
    let is_pivot = |c: usize| pivots.binary_search(&c).is_ok();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot(free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -mat[k][free].clone();
        }
        basis.push(clear_to_primitive(&v));
    }
    basis
}
