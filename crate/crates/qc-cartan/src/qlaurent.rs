use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact integer Laurent polynomial in a single variable `q`.
///
/// Stored as a sparse map from exponent to nonzero coefficient. All arithmetic
/// is exact; coefficient overflow panics rather than wrapping.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct QLaurent {
    coeffs: BTreeMap<i64, i64>,
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("QLaurent coefficient overflow")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("QLaurent coefficient overflow")
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent::default()
    }

    pub fn one() -> Self {
        QLaurent::term(1, 0)
    }

    /// The single term `c * q^n`.
    pub fn term(c: i64, n: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(n, c);
        }
        QLaurent { coeffs }
    }

    /// `q^n`.
    pub fn qpow(n: i64) -> Self {
        QLaurent::term(1, n)
    }

    /// The quantum integer `[n]_q = (q^n - q^{-n})/(q - q^{-1})
    ///                            = q^{n-1} + q^{n-3} + ... + q^{1-n}`.
    /// Odd under sign: `[-n]_q = -[n]_q`; `[0]_q = 0`.
    pub fn qnum(n: i64) -> Self {
        let mut out = QLaurent::zero();
        let a = n.abs();
        let mut k = 1 - a;
        while k <= a - 1 {
            out.add_term(1, k);
            k += 2;
        }
        if n < 0 {
            -out
        } else {
            out
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: i64) -> i64 {
        self.coeffs.get(&n).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    fn add_term(&mut self, c: i64, n: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(n).or_insert(0);
        *entry = checked_add(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(&n);
        }
    }

    /// Evaluate at a floating-point value of q (used only by numeric layers).
    pub fn eval_f64(&self, q: f64) -> f64 {
        self.terms().map(|(n, c)| c as f64 * q.powi(n as i32)).sum()
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(c, n);
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(-c, n);
        }
        out
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (n1, c1) in self.terms() {
            for (n2, c2) in rhs.terms() {
                out.add_term(checked_mul(c1, c2), n1 + n2);
            }
        }
        out
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(mut self) -> QLaurent {
        for c in self.coeffs.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.terms() {
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            }
            let a = c.abs();
            match n {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
