//! Trigonometric polynomials on a torus, stored in complex-exponential form.
//!
//! `Σ c_k e^{i k·θ}` with Gaussian-rational `c_k`. Real-valued polynomials
//! satisfy `c_{-k} = conj(c_k)`; [`TrigPoly::check_real`] enforces it. The
//! real `cos`/`sin` presentation is only a view, see [`TrigPoly::real_parts`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, rat, GaussianRational, Rational};
use crate::error::{Error, Result};

pub type Mode = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Wave {
    Cos,
    Sin,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TrigPoly {
    terms: BTreeMap<Mode, GaussianRational>,
}

/// The representative of `{k, -k}` whose first nonzero entry is positive.
pub fn canonical_mode(k: &[i64]) -> (Mode, bool) {
    match k.iter().find(|x| **x != 0) {
        Some(x) if *x < 0 => (k.iter().map(|v| -v).collect(), true),
        _ => (k.to_vec(), false),
    }
}

pub fn mode_norm(k: &[i64]) -> i64 {
    k.iter().map(|x| x.abs()).max().unwrap_or(0)
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(vec![0; nvars], GaussianRational::real(c))
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn term(mode: Mode, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mode, c);
        }
        Self { terms }
    }

    /// `cos(k·θ)`.
    pub fn cos(k: &[i64]) -> Self {
        Self::wave(k, Wave::Cos)
    }

    /// `sin(k·θ)`.
    pub fn sin(k: &[i64]) -> Self {
        Self::wave(k, Wave::Sin)
    }

    pub fn wave(k: &[i64], wave: Wave) -> Self {
        if k.iter().all(|x| *x == 0) {
            return match wave {
                Wave::Cos => Self::one(k.len()),
                Wave::Sin => Self::zero(),
            };
        }
        let half = Rational::new(1.into(), 2.into());
        let neg: Mode = k.iter().map(|x| -x).collect();
        let (cp, cn) = match wave {
            Wave::Cos => (GaussianRational::real(half.clone()), GaussianRational::real(half)),
            // sin = (e^{ik} - e^{-ik}) / 2i
            Wave::Sin => (
                GaussianRational::new(Rational::zero(), -half.clone()),
                GaussianRational::new(Rational::zero(), half),
            ),
        };
        let mut p = Self::term(k.to_vec(), cp);
        p.add_term(neg, cn);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Mode, GaussianRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, mode: Mode, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mode) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&mode);
                }
            }
            None => {
                self.terms.insert(mode, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mode, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mode: &[i64]) -> GaussianRational {
        self.terms.get(mode).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|x| *x == 0))
    }

    pub fn max_mode(&self) -> i64 {
        self.terms.keys().map(|k| mode_norm(k)).max().unwrap_or(0)
    }

    pub fn check_real(&self) -> Result<()> {
        for (k, c) in &self.terms {
            let neg: Mode = k.iter().map(|x| -x).collect();
            if self.coeff(&neg) != c.conj() {
                return Err(Error::NotReal { mode: k.clone() });
            }
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        p.add_assign(o);
        p
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        if r.is_one() {
            return self.clone();
        }
        if (-r).is_one() {
            return self.neg();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.scale(r))).collect() }
    }

    pub fn scale_gauss(&self, g: &GaussianRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), c * g)))
    }

    /// Product by mode convolution.
    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let k: Mode = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                p.add_term(k, c1 * c2);
            }
        }
        p
    }

    /// `∂/∂θ_var`: multiplies `c_k` by `i k_var`.
    pub fn partial(&self, var: usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| {
            let f = rat(k[var]);
            (k.clone(), GaussianRational::new(-(&c.im * &f), &c.re * &f))
        }))
    }

    /// Re-indexes modes, e.g. for pullback by a translation in mode space.
    pub fn map_modes<F: Fn(&[i64]) -> Mode>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (f(k), c.clone())))
    }

    pub fn filter_modes<F: Fn(&[i64]) -> bool>(&self, f: F) -> Self {
        Self { terms: self.terms.iter().filter(|(k, _)| f(k)).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    /// Real coordinates against `{1, cos(k·θ), sin(k·θ)}` with `k` canonical.
    /// Assumes the reality condition.
    pub fn real_parts(&self) -> Vec<(Mode, Wave, Rational)> {
        let mut out = Vec::new();
        for (k, c) in &self.terms {
            let (can, flipped) = canonical_mode(k);
            if flipped {
                continue;
            }
            if k.iter().all(|x| *x == 0) {
                out.push((can, Wave::Cos, c.re.clone()));
                continue;
            }
            let two = rat(2);
            if !c.re.is_zero() {
                out.push((can.clone(), Wave::Cos, &c.re * &two));
            }
            if !c.im.is_zero() {
                out.push((can, Wave::Sin, -(&c.im * &two)));
            }
        }
        out
    }

    pub fn display_with(&self, var: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, w, r) in self.real_parts() {
            let neg = r.is_negative();
            let mag = r.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let constant = k.iter().all(|x| *x == 0);
            if constant {
                s.push_str(&format_rational(&mag));
                continue;
            }
            if !mag.is_one() {
                s.push_str(&format_rational(&mag));
                s.push(' ');
            }
            let arg = k
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(i, x)| match x {
                    1 => var(i),
                    -1 => format!("-{}", var(i)),
                    _ => format!("{}{}", x, var(i)),
                })
                .collect::<Vec<_>>()
                .join("+")
                .replace("+-", "-");
            s.push_str(match w {
                Wave::Cos => "cos(",
                Wave::Sin => "sin(",
            });
            s.push_str(&arg);
            s.push(')');
        }
        s
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.terms.keys().next().map(|k| k.len()).unwrap_or(0);
        let var = |i: usize| if n == 1 { "θ".to_string() } else { format!("θ{}", i + 1) };
        write!(f, "{}", self.display_with(&var))
    }
}
