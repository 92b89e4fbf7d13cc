//! Sparse elements of `Ω(M) ⊗ S(g*) ⊗ Λ(g*)` in canonical form.
//!
//! A monomial is `f · F · θ^A · Ω^E` in this order: coefficient function
//! `f`, manifold form `F` (a `dθ` mask or a formal basis element), the
//! strictly increasing product `θ^A`, and the central even part `Ω^E`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::context::{mask_sign, Ctx};
use super::rational::Rational;
use super::trig::TrigPoly;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(degree: u32) -> Self {
        if degree % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn add(self, o: Parity) -> Self {
        if o.is_odd() {
            self.flip()
        } else {
            self
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Koszul sign `(-1)^{p q}`.
pub fn koszul(p: Parity, q: Parity) -> Rational {
    if p.is_odd() && q.is_odd() {
        -Rational::one()
    } else {
        Rational::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonoKey {
    pub form: u32,
    pub theta: u32,
    pub omega: Vec<u32>,
}

impl MonoKey {
    pub fn unit(lie_dim: usize) -> Self {
        Self { form: 0, theta: 0, omega: vec![0; lie_dim] }
    }

    pub fn omega_degree(&self) -> u32 {
        self.omega.iter().sum()
    }
}

#[derive(Clone)]
pub struct GradedElement {
    ctx: Ctx,
    terms: BTreeMap<MonoKey, TrigPoly>,
}

impl PartialEq for GradedElement {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &o.ctx) && self.terms == o.terms
    }
}

impl Eq for GradedElement {}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedElement({self})")
    }
}

impl GradedElement {
    pub fn zero(ctx: &Ctx) -> Self {
        Self { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Ctx, c: Rational) -> Self {
        Self::monomial(ctx, MonoKey::unit(ctx.lie_dim), TrigPoly::constant(ctx.nvars(), c))
    }

    pub fn monomial(ctx: &Ctx, key: MonoKey, coeff: TrigPoly) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(key, coeff);
        e
    }

    /// A function `f` (degree 0).
    pub fn function(ctx: &Ctx, f: TrigPoly) -> Self {
        Self::monomial(ctx, MonoKey::unit(ctx.lie_dim), f)
    }

    /// The manifold form key `form` with coefficient 1.
    pub fn form(ctx: &Ctx, form: u32) -> Self {
        Self::monomial(ctx, MonoKey { form, ..MonoKey::unit(ctx.lie_dim) }, TrigPoly::one(ctx.nvars()))
    }

    /// `dθ_i` on a torus backend.
    pub fn dtheta(ctx: &Ctx, i: usize) -> Self {
        debug_assert!(ctx.is_torus() && i < ctx.nvars());
        Self::form(ctx, 1 << i)
    }

    /// Formal basis element by label.
    pub fn basis(ctx: &Ctx, label: &str) -> Result<Self> {
        let m = ctx.formal_manifold().ok_or_else(|| Error::InvalidInput("not a formal backend".into()))?;
        let i = m.index_of(label).ok_or_else(|| Error::InvalidInput(format!("unknown basis label {label}")))?;
        Ok(Self::form(ctx, i as u32))
    }

    pub fn theta(ctx: &Ctx, a: usize) -> Self {
        Self::monomial(ctx, MonoKey { theta: 1 << a, ..MonoKey::unit(ctx.lie_dim) }, TrigPoly::one(ctx.nvars()))
    }

    pub fn omega(ctx: &Ctx, a: usize) -> Self {
        let mut key = MonoKey::unit(ctx.lie_dim);
        key.omega[a] = 1;
        Self::monomial(ctx, key, TrigPoly::one(ctx.nvars()))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonoKey, &TrigPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &MonoKey) -> Option<&TrigPoly> {
        self.terms.get(key)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: MonoKey, coeff: TrigPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                c.add_assign(&coeff);
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn same_ctx(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &o.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn mono_degree(&self, key: &MonoKey) -> u32 {
        self.ctx.form_degree(key.form) + key.theta.count_ones() + 2 * key.omega_degree()
    }

    /// Total `Z`-degree; rejected for zero and for inhomogeneous elements.
    pub fn degree(&self) -> Result<u32> {
        let mut it = self.terms.keys().map(|k| self.mono_degree(k));
        let d = it.next().ok_or(Error::ZeroDegree)?;
        if it.any(|e| e != d) {
            return Err(Error::Inhomogeneous(self.to_string()));
        }
        Ok(d)
    }

    pub fn parity(&self) -> Result<Parity> {
        let mut it = self.terms.keys().map(|k| Parity::of(self.mono_degree(k)));
        let p = it.next().ok_or(Error::ZeroDegree)?;
        if it.any(|q| q != p) {
            return Err(Error::Inhomogeneous(self.to_string()));
        }
        Ok(p)
    }

    /// Parity if homogeneous; `None` for zero.
    pub fn parity_opt(&self) -> Result<Option<Parity>> {
        if self.is_zero() {
            Ok(None)
        } else {
            self.parity().map(Some)
        }
    }

    pub fn check_real(&self) -> Result<()> {
        self.terms.values().try_for_each(|c| c.check_real())
    }

    pub fn has_theta(&self) -> bool {
        self.terms.keys().any(|k| k.theta != 0)
    }

    pub fn max_omega_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.omega_degree()).max().unwrap_or(0)
    }

    pub fn max_mode(&self) -> i64 {
        self.terms.values().map(|c| c.max_mode()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut r = self.clone();
        r.add_assign(o)?;
        Ok(r)
    }

    pub fn add_assign(&mut self, o: &Self) -> Result<()> {
        self.same_ctx(o)?;
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
        Ok(())
    }

    /// `self += r·o`.
    pub fn add_scaled(&mut self, o: &Self, r: &Rational) -> Result<()> {
        self.same_ctx(o)?;
        if r.is_zero() {
            return Ok(());
        }
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.scale(r));
        }
        Ok(())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let mut r = self.clone();
        r.add_scaled(o, &-Rational::one())?;
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(&self.ctx);
        }
        Self { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, c)| (k.clone(), c.scale(r))).collect() }
    }

    /// Keeps only monomials satisfying `pred`.
    pub fn filter<F: Fn(&MonoKey) -> bool>(&self, pred: F) -> Self {
        Self {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(k, _)| pred(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn map_coefficients<F: Fn(&MonoKey, &TrigPoly) -> TrigPoly>(&self, f: F) -> Self {
        let mut r = Self::zero(&self.ctx);
        for (k, c) in &self.terms {
            r.add_term(k.clone(), f(k, c));
        }
        r
    }

    fn mul_keys(&self, a: &MonoKey, b: &MonoKey) -> Vec<(MonoKey, Rational)> {
        if a.theta & b.theta != 0 {
            return vec![];
        }
        let ctx = &self.ctx;
        // F θ^A G θ^B = (-1)^{|A||G|} F G θ^A θ^B
        let mut sign = koszul(Parity::of(a.theta.count_ones()), Parity::of(ctx.form_degree(b.form)));
        sign *= mask_sign(a.theta, b.theta);
        let theta = a.theta | b.theta;
        let omega: Vec<u32> = a.omega.iter().zip(&b.omega).map(|(x, y)| x + y).collect();
        ctx.mul_forms(a.form, b.form)
            .into_iter()
            .map(|(form, c)| (MonoKey { form, theta, omega: omega.clone() }, c * &sign))
            .collect()
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_ctx(o)?;
        let mut r = Self::zero(&self.ctx);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let keys = self.mul_keys(ka, kb);
                if keys.is_empty() {
                    continue;
                }
                let c = ca.mul(cb);
                for (k, s) in keys {
                    if s.is_one() {
                        r.add_term(k, c.clone());
                    } else {
                        r.add_term(k, c.scale(&s));
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut r = Self::one(&self.ctx);
        for _ in 0..k {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// Drops monomials whose total `Ω`-degree exceeds `cap`.
    pub fn truncate_omega(&self, cap: u32) -> Self {
        self.filter(|k| k.omega_degree() <= cap)
    }

    pub fn key_label(&self, key: &MonoKey) -> String {
        let mut parts = Vec::new();
        let f = self.ctx.form_label(key.form);
        if !f.is_empty() {
            parts.push(f);
        }
        for a in 0..self.ctx.lie_dim {
            if key.theta & (1 << a) != 0 {
                parts.push(if self.ctx.lie_dim == 1 { "θ".to_string() } else { format!("θ^{}", a + 1) });
            }
        }
        for (a, e) in key.omega.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let base = if self.ctx.lie_dim == 1 { "Ω".to_string() } else { format!("Ω^{}", a + 1) };
            parts.push(if *e == 1 { base } else { format!("({base})^{e}") });
        }
        let pieces = parts;
        if pieces.is_empty() {
            "1".into()
        } else {
            pieces.join("·")
        }
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ctx = self.ctx.clone();
        let var = move |i: usize| ctx.var_name(i);
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let label = self.key_label(k);
                let cs = c.display_with(&var);
                if label == "1" {
                    format!("({cs})")
                } else if cs == "1" {
                    label
                } else {
                    format!("({cs})·{label}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::context::AlgebraContext;
    use crate::algebra::rational::rat;

    #[test]
    fn odd_squares_vanish() {
        let ctx = AlgebraContext::torus(1, 3);
        let dt = GradedElement::dtheta(&ctx, 0);
        assert!(dt.mul(&dt).unwrap().is_zero());
        let t = GradedElement::theta(&ctx, 1);
        assert!(t.mul(&t).unwrap().is_zero());
    }

    #[test]
    fn canonical_theta_order() {
        let ctx = AlgebraContext::torus(0, 3);
        let t = |a| GradedElement::theta(&ctx, a);
        let t12 = t(0).mul(&t(1)).unwrap();
        let t123 = t12.mul(&t(2)).unwrap();
        let key = MonoKey { form: 0, theta: 0b111, omega: vec![0; 3] };
        assert_eq!(t123, GradedElement::monomial(&ctx, key.clone(), TrigPoly::one(0)));
        // θ³ θ¹ θ² = +θ¹θ²θ³ (cyclic)
        let cyc = t(2).mul(&t(0)).unwrap().mul(&t(1)).unwrap();
        assert_eq!(cyc, t123);
        // θ² θ¹ θ³ = -θ¹θ²θ³
        assert_eq!(t(1).mul(&t(0)).unwrap().mul(&t(2)).unwrap(), t123.neg());
    }

    #[test]
    fn theta_passes_forms_with_sign() {
        let ctx = AlgebraContext::torus(1, 1);
        let dt = GradedElement::dtheta(&ctx, 0);
        let th = GradedElement::theta(&ctx, 0);
        assert_eq!(th.mul(&dt).unwrap(), dt.mul(&th).unwrap().neg());
        let om = GradedElement::omega(&ctx, 0);
        assert_eq!(om.mul(&dt).unwrap(), dt.mul(&om).unwrap());
    }

    #[test]
    fn trig_coefficients_multiply() {
        let ctx = AlgebraContext::torus(1, 0);
        let s = GradedElement::function(&ctx, TrigPoly::sin(&[1]));
        let c = GradedElement::function(&ctx, TrigPoly::cos(&[1]));
        let expect = GradedElement::function(&ctx, TrigPoly::sin(&[2]).scale(&crate::algebra::rational::frac(1, 2)));
        assert_eq!(s.mul(&c).unwrap(), expect);
    }

    #[test]
    fn zero_has_no_degree() {
        let ctx = AlgebraContext::torus(1, 0);
        assert_eq!(GradedElement::zero(&ctx).degree(), Err(Error::ZeroDegree));
        let mixed = GradedElement::one(&ctx).add(&GradedElement::dtheta(&ctx, 0)).unwrap();
        assert!(matches!(mixed.parity(), Err(Error::Inhomogeneous(_))));
        assert_eq!(GradedElement::omega(&AlgebraContext::torus(0, 1), 0).scale(&rat(2)).degree(), Ok(2));
    }

    #[test]
    fn context_mismatch_rejected() {
        let a = AlgebraContext::torus(1, 0);
        let b = AlgebraContext::torus(1, 0);
        assert_eq!(GradedElement::one(&a).mul(&GradedElement::one(&b)), Err(Error::ContextMismatch));
    }
}
