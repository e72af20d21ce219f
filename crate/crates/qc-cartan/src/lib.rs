//! Root data for the classical series A/B/C/D and their q-deformed Cartan
//! matrices.
//!
//! Conventions: nodes are numbered 1..=rank following Bourbaki (for B_l the
//! short root is alpha_l, for C_l the long root is alpha_l, for D_l the fork
//! sits at node l-2). The symmetrizers r_i are normalized so that the short
//! roots of the non-simply-laced series have r_i = 1 and the long roots
//! r_i = 2; for A/D all r_i = 1.

mod qlaurent;

pub use qlaurent::QLaurent;

use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl Series {
    pub fn parse(s: &str) -> Option<Series> {
        match s {
            "A" | "a" => Some(Series::A),
            "B" | "b" => Some(Series::B),
            "C" | "c" => Some(Series::C),
            "D" | "d" => Some(Series::D),
            _ => None,
        }
    }
}

impl std::fmt::Display for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Error)]
pub enum CartanError {
    #[error("unsupported rank {rank} for series {series}: {reason}")]
    UnsupportedRank {
        series: Series,
        rank: usize,
        reason: &'static str,
    },
}

/// Root data of a classical simple Lie algebra.
///
/// `c` is the Cartan matrix, `i_mat` the incidence matrix (C = 2 Id - I),
/// `r` the symmetrizers (diag(r) * C is symmetric), `rvee` the lacing number
/// and `hvee` the per-series Coxeter-number table entry used for spectral
/// shifts downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub series: Series,
    pub rank: usize,
    pub c: Vec<Vec<i64>>,
    pub i_mat: Vec<Vec<i64>>,
    pub r: Vec<i64>,
    pub rvee: i64,
    pub hvee: i64,
}

impl CartanData {
    pub fn build(series: Series, rank: usize) -> Result<CartanData, CartanError> {
        let min = match series {
            Series::A => 1,
            Series::B | Series::C => 2,
            Series::D => 3,
        };
        if rank < min {
            return Err(CartanError::UnsupportedRank {
                series,
                rank,
                reason: match series {
                    Series::A => "rank must be >= 1",
                    Series::B | Series::C => "rank must be >= 2",
                    Series::D => "rank must be >= 3",
                },
            });
        }
        let l = rank;
        let mut c = vec![vec![0i64; l]; l];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        // simply-laced chain part shared by every series
        let chain = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match series {
            Series::A => {
                for i in 0..l - 1 {
                    chain(&mut c, i, i + 1);
                }
            }
            Series::B => {
                // alpha_l short: C_{l-1,l} = -1, C_{l,l-1} = -2
                for i in 0..l - 2 {
                    chain(&mut c, i, i + 1);
                }
                c[l - 2][l - 1] = -1;
                c[l - 1][l - 2] = -2;
            }
            Series::C => {
                // alpha_l long: C_{l-1,l} = -2, C_{l,l-1} = -1
                for i in 0..l - 2 {
                    chain(&mut c, i, i + 1);
                }
                c[l - 2][l - 1] = -2;
                c[l - 1][l - 2] = -1;
            }
            Series::D => {
                for i in 0..l - 2 {
                    chain(&mut c, i, i + 1);
                }
                // undo the chain edge into node l-1 and fork instead
                c[l - 2][l - 1] = 0;
                c[l - 1][l - 2] = 0;
                chain(&mut c, l - 3, l - 1);
            }
        }
        let mut i_mat = vec![vec![0i64; l]; l];
        for i in 0..l {
            for j in 0..l {
                if i != j {
                    i_mat[i][j] = -c[i][j];
                }
            }
        }
        let r = match series {
            Series::A | Series::D => vec![1; l],
            Series::B => {
                let mut r = vec![2; l];
                r[l - 1] = 1;
                r
            }
            Series::C => {
                let mut r = vec![1; l];
                r[l - 1] = 2;
                r
            }
        };
        let rvee = match series {
            Series::A | Series::D => 1,
            Series::B | Series::C => 2,
        };
        let hvee = match series {
            Series::A => l as i64 + 1,
            Series::B => 2 * l as i64 - 1,
            Series::C => l as i64 + 1,
            Series::D => 2 * l as i64 - 2,
        };
        Ok(CartanData {
            series,
            rank,
            c,
            i_mat,
            r,
            rvee,
            hvee,
        })
    }

    /// Cartan matrix entry, nodes 1-based.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.c[i - 1][j - 1]
    }

    /// Incidence matrix entry, nodes 1-based.
    pub fn incidence(&self, i: usize, j: usize) -> i64 {
        self.i_mat[i - 1][j - 1]
    }

    /// Symmetrizer r_i, node 1-based.
    pub fn sym(&self, i: usize) -> i64 {
        self.r[i - 1]
    }

    /// The q-deformed Cartan matrix:
    /// C_ij(q) = (q^{r_i} + q^{-r_i}) delta_ij - [I_ij]_q.
    pub fn q_cartan(&self) -> Vec<Vec<QLaurent>> {
        let l = self.rank;
        let mut m = vec![vec![QLaurent::zero(); l]; l];
        for i in 0..l {
            for j in 0..l {
                m[i][j] = if i == j {
                    &QLaurent::qpow(self.r[i]) + &QLaurent::qpow(-self.r[i])
                } else {
                    -QLaurent::qnum(self.i_mat[i][j])
                };
            }
        }
        m
    }

    /// D(q) = diag([r_i]_q).
    pub fn q_d(&self) -> Vec<Vec<QLaurent>> {
        let l = self.rank;
        let mut m = vec![vec![QLaurent::zero(); l]; l];
        for i in 0..l {
            m[i][i] = QLaurent::qnum(self.r[i]);
        }
        m
    }

    /// B(q) = D(q) C(q); symmetric with entries [B_ij]_q where B = diag(r) C.
    pub fn q_b(&self) -> Vec<Vec<QLaurent>> {
        mat_mul(&self.q_d(), &self.q_cartan())
    }
}

fn mat_mul(a: &[Vec<QLaurent>], b: &[Vec<QLaurent>]) -> Vec<Vec<QLaurent>> {
    let n = a.len();
    let mut out = vec![vec![QLaurent::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = QLaurent::zero();
            for (k, row) in b.iter().enumerate() {
                s = &s + &(&a[i][k] * &row[j]);
            }
            out[i][j] = s;
        }
    }
    out
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0);
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
}
