//! Univariate polynomials over the rationals and minimal polynomials of
//! small matrices.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::rational::{format_rational, Rational};
use crate::linalg::{Dense, Echelon, SparseVec};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|x| Rational::from_integer((*x).into())).collect())
    }

    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let l = d.lead();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &l;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        self.mul(o).div_rem(&self.gcd(o)).0.monic()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            let cs = if i > 0 && c.is_one() {
                String::new()
            } else if i > 0 && *c == -Rational::one() {
                "-".into()
            } else {
                format_rational(c)
            };
            parts.push(format!("{cs}{mon}"));
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

fn mat_vec(a: &Dense, v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y)).collect()
}

fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Minimal polynomial of `a` restricted to the cyclic subspace of `v`.
pub fn vector_minimal_polynomial(a: &Dense, v: &[Rational]) -> Poly {
    let mut ech = Echelon::new();
    let mut cur = v.to_vec();
    let mut k = 0;
    loop {
        let tag = crate::linalg::unit_vec(k);
        match ech.push(to_sparse(&cur), tag) {
            Ok(_) => {
                cur = mat_vec(a, &cur);
                k += 1;
            }
            Err(dep) => {
                let mut c = vec![Rational::zero(); k + 1];
                for (i, x) in dep {
                    c[i] = x;
                }
                return Poly::new(c).monic();
            }
        }
    }
}

/// Minimal polynomial of a square matrix, as the lcm over basis vectors.
pub fn minimal_polynomial(a: &Dense) -> Poly {
    let n = a.len();
    let mut p = Poly::one();
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        p = p.lcm(&vector_minimal_polynomial(a, &e));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn gcd_and_lcm() {
        let a = Poly::from_ints(&[-1, 0, 1]); // x² - 1
        let b = Poly::from_ints(&[1, 1]); // x + 1
        assert_eq!(a.gcd(&b), b);
        assert_eq!(a.lcm(&Poly::from_ints(&[-2, 1])), Poly::from_ints(&[2, -1, -2, 1]));
    }

    #[test]
    fn rotation_block_minimal_polynomial() {
        // derivative on span{cos kθ, sin kθ} with k = 3
        let a: Dense = vec![vec![rat(0), rat(3)], vec![rat(-3), rat(0)]];
        let p = minimal_polynomial(&a);
        assert_eq!(p, Poly::from_ints(&[9, 0, 1]));
        assert_eq!(p.to_string(), "x^2 + 9");
    }

    #[test]
    fn zero_matrix_has_minimal_polynomial_x() {
        let a: Dense = vec![vec![rat(0); 2]; 2];
        assert_eq!(minimal_polynomial(&a), Poly::from_ints(&[0, 1]));
        assert_eq!(minimal_polynomial(&vec![]), Poly::one());
    }
}
