//! Graded derivations given by generator images, extended by the graded
//! Leibniz rule, and operators of the form `D + E∧`.
//!
//! On a torus a derivation is also determined by what it does to smooth
//! coefficients: `D(f) = Σ_i ∂_i f · w_i` for coordinate images `w_i`. The
//! de Rham differential has `w_i = dθ_i`, a contraction `ι_X` has
//! `w_i = X^i`, and a Lie derivative has `w_i = X^i` together with the
//! matching images of `dθ_i`.

use std::fmt;

use num_traits::One;

use super::context::{Backend, Ctx};
use super::element::{koszul, GradedElement, MonoKey, Parity};
use super::rational::Rational;
use super::trig::TrigPoly;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Derivation {
    ctx: Ctx,
    parity: Parity,
    name: String,
    /// Torus only: images of the coordinate functions.
    coords: Vec<GradedElement>,
    /// Images of `dθ_i` (torus) or of formal basis elements.
    forms: Vec<GradedElement>,
    theta: Vec<GradedElement>,
    omega: Vec<GradedElement>,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation({}, {:?})", self.name, self.parity)
    }
}

impl Derivation {
    /// The zero derivation of the given parity.
    pub fn zero(ctx: &Ctx, parity: Parity, name: &str) -> Self {
        let z = GradedElement::zero(ctx);
        Self {
            ctx: ctx.clone(),
            parity,
            name: name.into(),
            coords: vec![z.clone(); ctx.nvars()],
            forms: vec![z.clone(); ctx.form_count_generators()],
            theta: vec![z.clone(); ctx.lie_dim],
            omega: vec![z; ctx.lie_dim],
        }
    }

    /// Builds a derivation from explicit images, checking counts and parities.
    pub fn new(
        ctx: &Ctx,
        parity: Parity,
        name: &str,
        coords: Vec<GradedElement>,
        forms: Vec<GradedElement>,
        theta: Vec<GradedElement>,
        omega: Vec<GradedElement>,
    ) -> Result<Self> {
        let d = Self { ctx: ctx.clone(), parity, name: name.into(), coords, forms, theta, omega };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let ctx = &self.ctx;
        let gens = ctx.generators();
        let missing = |what: &str| Err(Error::MissingImage(format!("{what} in {}", self.name)));
        if self.coords.len() != ctx.nvars() {
            return missing("coordinate functions");
        }
        if self.forms.len() != ctx.form_count_generators() {
            return missing("manifold generators");
        }
        if self.theta.len() != ctx.lie_dim || self.omega.len() != ctx.lie_dim {
            return missing("Weil generators");
        }
        let check = |img: &GradedElement, gen_parity: Parity, id: &str| -> Result<()> {
            img.same_ctx(&GradedElement::zero(ctx))?;
            if let Some(p) = img.parity_opt()? {
                if p != gen_parity.add(self.parity) {
                    return Err(Error::ImageParity { generator: id.into() });
                }
            }
            Ok(())
        };
        for (i, w) in self.coords.iter().enumerate() {
            check(w, Parity::Even, &format!("θ{} (coordinate)", i + 1))?;
        }
        for (i, w) in self.forms.iter().enumerate() {
            let p = match &ctx.backend {
                Backend::Torus { .. } => Parity::Odd,
                Backend::Formal(m) => Parity::of(m.degrees[i]),
            };
            check(w, p, &gens[i].id)?;
        }
        let off = self.forms.len();
        for (a, w) in self.theta.iter().enumerate() {
            check(w, Parity::Odd, &gens[off + a].id)?;
        }
        for (a, w) in self.omega.iter().enumerate() {
            check(w, Parity::Even, &gens[off + ctx.lie_dim + a].id)?;
        }
        if let Backend::Formal(_) = &ctx.backend {
            if !self.forms[0].is_zero() {
                return Err(Error::InvalidInput(format!("{} does not kill the unit", self.name)));
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn coord_images(&self) -> &[GradedElement] {
        &self.coords
    }

    pub fn form_images(&self) -> &[GradedElement] {
        &self.forms
    }

    pub fn theta_images(&self) -> &[GradedElement] {
        &self.theta
    }

    pub fn omega_images(&self) -> &[GradedElement] {
        &self.omega
    }

    pub fn set_coord(&mut self, i: usize, img: GradedElement) {
        self.coords[i] = img;
    }

    pub fn set_form(&mut self, i: usize, img: GradedElement) {
        self.forms[i] = img;
    }

    pub fn set_theta(&mut self, a: usize, img: GradedElement) {
        self.theta[a] = img;
    }

    pub fn set_omega(&mut self, a: usize, img: GradedElement) {
        self.omega[a] = img;
    }

    /// Re-checks parities after a series of `set_*` calls.
    pub fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// `D(f)` for a coefficient function.
    pub fn apply_function(&self, f: &TrigPoly) -> Result<GradedElement> {
        let mut out = GradedElement::zero(&self.ctx);
        for (i, w) in self.coords.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let df = f.partial(i);
            if df.is_zero() {
                continue;
            }
            out.add_assign(&GradedElement::function(&self.ctx, df).mul(w)?)?;
        }
        Ok(out)
    }

    /// Factors of a monomial together with their images, in canonical order.
    fn factors(&self, key: &MonoKey, coeff: &TrigPoly) -> Result<Vec<(GradedElement, GradedElement, Parity)>> {
        let ctx = &self.ctx;
        let mut fs = Vec::new();
        fs.push((GradedElement::function(ctx, coeff.clone()), self.apply_function(coeff)?, Parity::Even));
        match &ctx.backend {
            Backend::Torus { n } => {
                for i in 0..*n {
                    if key.form & (1 << i) != 0 {
                        fs.push((GradedElement::dtheta(ctx, i), self.forms[i].clone(), Parity::Odd));
                    }
                }
            }
            Backend::Formal(m) => {
                if key.form != 0 {
                    let i = key.form as usize;
                    fs.push((GradedElement::form(ctx, key.form), self.forms[i].clone(), Parity::of(m.degrees[i])));
                }
            }
        }
        for a in 0..ctx.lie_dim {
            if key.theta & (1 << a) != 0 {
                fs.push((GradedElement::theta(ctx, a), self.theta[a].clone(), Parity::Odd));
            }
        }
        for (a, e) in key.omega.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let om = GradedElement::omega(ctx, a);
            let power = om.pow(*e)?;
            let img = om.pow(*e - 1)?.mul(&self.omega[a])?.scale(&Rational::from_integer((*e).into()));
            fs.push((power, img, Parity::Even));
        }
        Ok(fs)
    }

    fn apply_monomial(&self, key: &MonoKey, coeff: &TrigPoly) -> Result<GradedElement> {
        let fs = self.factors(key, coeff)?;
        let r = fs.len();
        // suffix[j] = x_j ... x_{r-1}
        let mut suffix = vec![GradedElement::one(&self.ctx); r + 1];
        for j in (0..r).rev() {
            suffix[j] = fs[j].0.mul(&suffix[j + 1])?;
        }
        let mut out = GradedElement::zero(&self.ctx);
        let mut prefix = GradedElement::one(&self.ctx);
        let mut prefix_parity = Parity::Even;
        for (j, (x, dx, p)) in fs.iter().enumerate() {
            if !dx.is_zero() {
                let t = prefix.mul(dx)?.mul(&suffix[j + 1])?;
                out.add_scaled(&t, &koszul(self.parity, prefix_parity))?;
            }
            prefix = prefix.mul(x)?;
            prefix_parity = prefix_parity.add(*p);
        }
        Ok(out)
    }

    pub fn apply(&self, x: &GradedElement) -> Result<GradedElement> {
        x.same_ctx(&GradedElement::zero(&self.ctx))?;
        let mut out = GradedElement::zero(&self.ctx);
        for (k, c) in x.terms() {
            out.add_assign(&self.apply_monomial(k, c)?)?;
        }
        Ok(out)
    }

    fn zip_images<F>(&self, o: &Self, parity: Parity, name: String, f: F) -> Result<Self>
    where
        F: Fn(&GradedElement, &GradedElement) -> Result<GradedElement>,
    {
        let zip = |a: &[GradedElement], b: &[GradedElement]| -> Result<Vec<GradedElement>> {
            a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
        };
        Self::new(
            &self.ctx,
            parity,
            &name,
            zip(&self.coords, &o.coords)?,
            zip(&self.forms, &o.forms)?,
            zip(&self.theta, &o.theta)?,
            zip(&self.omega, &o.omega)?,
        )
    }

    fn map_images<F>(&self, parity: Parity, name: String, f: F) -> Result<Self>
    where
        F: Fn(&GradedElement) -> Result<GradedElement>,
    {
        self.zip_images(self, parity, name, |x, _| f(x))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        self.zip_images(o, self.parity, format!("{} + {}", self.name, o.name), |x, y| x.add(y))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        self.zip_images(o, self.parity, format!("{} - {}", self.name, o.name), |x, y| x.sub(y))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_images(self.parity, self.name.clone(), |x| Ok(x.scale(r))).expect("scaling preserves parity")
    }

    /// `E · D` for an element `E`. The result is a derivation when `E` is
    /// even and graded-central; only elements without odd factors qualify,
    /// and the caller is responsible for that.
    pub fn left_mul(&self, e: &GradedElement) -> Result<Self> {
        let p = e.parity_opt()?.unwrap_or(Parity::Even);
        if p.is_odd() {
            return Err(Error::InvalidInput("left multiplier of a derivation must be even".into()));
        }
        self.map_images(self.parity, format!("({e})·{}", self.name), |x| e.mul(x))
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if !std::sync::Arc::ptr_eq(&self.ctx, &o.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.parity != o.parity {
            return Err(Error::InvalidInput(format!("cannot add derivations {} and {} of different parity", self.name, o.name)));
        }
        Ok(())
    }

    /// The graded commutator `[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1`, itself a derivation.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        if !std::sync::Arc::ptr_eq(&self.ctx, &o.ctx) {
            return Err(Error::ContextMismatch);
        }
        let s = koszul(self.parity, o.parity);
        let parity = self.parity.add(o.parity);
        let on = |a: &GradedElement, b: &GradedElement| -> Result<GradedElement> {
            // a = D1(g), b = D2(g)
            self.apply(b)?.sub(&o.apply(a)?.scale(&s))
        };
        // On coordinates the second-order terms cancel by symmetry of ∂_i∂_j,
        // leaving D1(w2_i) - s D2(w1_i).
        self.zip_images(o, parity, format!("[{}, {}]", self.name, o.name), |a, b| on(a, b))
    }
}

/// `D + E∧`: a derivation plus left multiplication by an element of the
/// same parity.
#[derive(Clone, Debug)]
pub struct Operator {
    pub derivation: Derivation,
    pub multiplier: GradedElement,
}

impl Operator {
    pub fn new(derivation: Derivation, multiplier: GradedElement) -> Result<Self> {
        multiplier.same_ctx(&GradedElement::zero(derivation.ctx()))?;
        if let Some(p) = multiplier.parity_opt()? {
            if p != derivation.parity() {
                return Err(Error::InvalidInput(format!(
                    "multiplier of {} must have the parity of the derivation",
                    derivation.name()
                )));
            }
        }
        Ok(Self { derivation, multiplier })
    }

    pub fn from_derivation(d: Derivation) -> Self {
        let z = GradedElement::zero(d.ctx());
        Self { derivation: d, multiplier: z }
    }

    pub fn parity(&self) -> Parity {
        self.derivation.parity()
    }

    pub fn name(&self) -> &str {
        self.derivation.name()
    }

    pub fn apply(&self, x: &GradedElement) -> Result<GradedElement> {
        let d = self.derivation.apply(x)?;
        if self.multiplier.is_zero() {
            return Ok(d);
        }
        d.add(&self.multiplier.mul(x)?)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Self::new(self.derivation.add(&o.derivation)?, self.multiplier.add(&o.multiplier)?)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Self::new(self.derivation.sub(&o.derivation)?, self.multiplier.sub(&o.multiplier)?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { derivation: self.derivation.scale(r), multiplier: self.multiplier.scale(r) }
    }
}

/// `[A, B](x) = A(B x) - (-1)^{|A||B|} B(A x)` evaluated on a probe.
pub fn commutator_on(a: &Operator, b: &Operator, x: &GradedElement) -> Result<GradedElement> {
    let s = koszul(a.parity(), b.parity());
    a.apply(&b.apply(x)?)?.sub(&b.apply(&a.apply(x)?)?.scale(&s))
}

/// `exp(B) = Σ B^k / k!` for an even `B` whose every term carries a
/// manifold form of positive degree, so the series terminates.
pub fn exp_wedge(b: &GradedElement) -> Result<GradedElement> {
    let ctx = b.ctx().clone();
    if b.is_zero() {
        return Ok(GradedElement::one(&ctx));
    }
    if b.parity()?.is_odd() {
        return Err(Error::NotNilpotent(format!("{b} is odd")));
    }
    if b.terms().any(|(k, _)| ctx.form_degree(k.form) == 0) {
        return Err(Error::NotNilpotent(b.to_string()));
    }
    let mut out = GradedElement::one(&ctx);
    let mut power = GradedElement::one(&ctx);
    let mut fact = Rational::one();
    for k in 1..=ctx.manifold_dim().max(1) {
        power = power.mul(b)?;
        if power.is_zero() {
            break;
        }
        fact *= Rational::from_integer(k.into());
        out = out.add(&power.scale(&(Rational::one() / &fact)))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::context::AlgebraContext;
    use crate::algebra::rational::{frac, rat};

    fn de_rham(ctx: &Ctx) -> Derivation {
        let mut d = Derivation::zero(ctx, Parity::Odd, "d");
        for i in 0..ctx.nvars() {
            d.set_coord(i, GradedElement::dtheta(ctx, i));
        }
        d
    }

    #[test]
    fn de_rham_on_functions_and_forms() {
        let ctx = AlgebraContext::torus(2, 0);
        let d = de_rham(&ctx);
        let f = GradedElement::function(&ctx, TrigPoly::sin(&[1, 2]));
        let df = d.apply(&f).unwrap();
        let expect = GradedElement::function(&ctx, TrigPoly::cos(&[1, 2]))
            .mul(&GradedElement::dtheta(&ctx, 0).add(&GradedElement::dtheta(&ctx, 1).scale(&rat(2))).unwrap())
            .unwrap();
        assert_eq!(df, expect);
        assert!(d.apply(&df).unwrap().is_zero());
    }

    #[test]
    fn commutator_of_odd_derivations_is_even() {
        let ctx = AlgebraContext::torus(1, 0);
        let d = de_rham(&ctx);
        let mut i = Derivation::zero(&ctx, Parity::Odd, "ι");
        i.set_form(0, GradedElement::function(&ctx, TrigPoly::cos(&[1])));
        let l = d.commutator(&i).unwrap();
        assert_eq!(l.parity(), Parity::Even);
        let x = GradedElement::function(&ctx, TrigPoly::sin(&[1])).mul(&GradedElement::dtheta(&ctx, 0)).unwrap();
        let direct = d.apply(&i.apply(&x).unwrap()).unwrap().add(&i.apply(&d.apply(&x).unwrap()).unwrap()).unwrap();
        assert_eq!(l.apply(&x).unwrap(), direct);
    }

    #[test]
    fn image_parity_is_checked() {
        let ctx = AlgebraContext::torus(1, 1);
        let r = Derivation::new(
            &ctx,
            Parity::Odd,
            "bad",
            vec![GradedElement::zero(&ctx)],
            vec![GradedElement::zero(&ctx)],
            vec![GradedElement::dtheta(&ctx, 0)],
            vec![GradedElement::zero(&ctx)],
        );
        assert!(matches!(r, Err(Error::ImageParity { .. })));
    }

    #[test]
    fn exp_of_two_form() {
        let ctx = AlgebraContext::torus(4, 0);
        let w = |i, j| GradedElement::dtheta(&ctx, i).mul(&GradedElement::dtheta(&ctx, j)).unwrap();
        let b = w(0, 1).add(&w(2, 3)).unwrap();
        let e = exp_wedge(&b).unwrap();
        let expect = GradedElement::one(&ctx).add(&b).unwrap().add(&w(0, 1).mul(&w(2, 3)).unwrap()).unwrap();
        assert_eq!(e, expect);
        let bad = GradedElement::constant(&ctx, frac(1, 2));
        assert!(matches!(exp_wedge(&bad), Err(Error::NotNilpotent(_))));
    }
}
