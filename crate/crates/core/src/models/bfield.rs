//! B-field transforms and averaging of group-parametrized 2-forms for
//! torus actions by rotations.


use super::action::ExtendedActionData;
use super::model::ModelContext;
use super::three_form::EquivariantThreeForm;
use crate::algebra::{exp_wedge, AlgebraContext, Backend, Ctx, GradedElement, MonoKey};
use crate::error::{Error, Result};

/// `e^B ∧ x`.
pub fn b_field_transform(x: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
    exp_wedge(b)?.mul(x)
}

fn check_two_form(data: &ExtendedActionData, b: &GradedElement) -> Result<()> {
    b.same_ctx(&GradedElement::zero(data.ctx()))?;
    if b.is_zero() {
        return Ok(());
    }
    if b.has_theta() || b.max_omega_degree() > 0 || b.degree()? != 2 {
        return Err(Error::InvalidInput(format!("B must be a manifold 2-form, got {b}")));
    }
    b.check_real()
}

/// `ξ'_a = ξ_a + ι_{X_a} B`, `H' = H − dB`.
pub fn transform_action(data: &ExtendedActionData, b: &GradedElement) -> Result<ExtendedActionData> {
    check_two_form(data, b)?;
    let g = &data.geometry;
    let mut xi = Vec::new();
    for (x, f) in data.fields.iter().zip(&data.xi) {
        xi.push(f.add(&g.contraction(x)?.apply(b)?)?);
    }
    let h = data.h.sub(&g.de_rham().apply(b)?)?;
    ExtendedActionData::new(g.clone(), data.fields.clone(), xi, h)
}

/// A torus `T^r` acting on `Tⁿ` by translations: group coordinate `j`
/// moves the manifold by `weights[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusRotation {
    pub n: usize,
    pub weights: Vec<Vec<i64>>,
}

impl TorusRotation {
    pub fn new(n: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        if weights.iter().any(|w| w.len() != n) {
            return Err(Error::InvalidInput(format!("rotation weights must have length {n}")));
        }
        Ok(Self { n, weights })
    }

    /// Reads the weights off constant integer vector fields.
    pub fn from_action(data: &ExtendedActionData) -> Result<Self> {
        let Backend::Torus { n } = data.ctx().backend else {
            return Err(Error::InvalidInput("averaging needs a torus backend".into()));
        };
        let weights = data
            .fields
            .iter()
            .map(|x| {
                x.integer_constant()
                    .ok_or_else(|| Error::InvalidInput(format!("{x} is not a constant integer rotation field")))
            })
            .collect::<Result<_>>()?;
        Self::new(n, weights)
    }

    pub fn group_dim(&self) -> usize {
        self.weights.len()
    }

    /// Context for forms on `Tⁿ` depending on group coordinates `h ∈ T^r`;
    /// the extra variables carry no `dθ`.
    pub fn parametrized_ctx(&self) -> Ctx {
        AlgebraContext::torus(self.n + self.group_dim(), 0)
    }

    fn shift(&self, mode: &[i64], sign: i64) -> Vec<i64> {
        let mut out = mode.to_vec();
        for (j, w) in self.weights.iter().enumerate() {
            let s: i64 = w.iter().zip(&mode[..self.n]).map(|(a, b)| a * b).sum();
            out[self.n + j] += sign * s;
        }
        out
    }

    /// `λ_g^* x` with `g` the group variables of the context.
    pub fn pullback(&self, x: &GradedElement) -> GradedElement {
        x.map_coefficients(|_, c| c.map_modes(|k| self.shift(k, 1)))
    }

    /// `x` with its coefficients lifted from `Tⁿ` into the parametrized context.
    pub fn embed(&self, x: &GradedElement, target: &Ctx) -> Result<GradedElement> {
        let mut out = GradedElement::zero(target);
        for (k, c) in x.terms() {
            if k.theta != 0 || k.omega_degree() > 0 {
                return Err(Error::InvalidInput("only manifold forms can be lifted".into()));
            }
            let key = MonoKey { form: k.form, ..MonoKey::unit(target.lie_dim) };
            let tot = target.nvars();
            let c2 = c.map_modes(|m| {
                let mut v = m.to_vec();
                v.resize(tot, 0);
                v
            });
            out.add_term(key, c2);
        }
        Ok(out)
    }

    /// Drops the group variables of a form that does not depend on them.
    pub fn restrict(&self, x: &GradedElement, target: &Ctx) -> Result<GradedElement> {
        let mut out = GradedElement::zero(target);
        for (k, c) in x.terms() {
            if c.terms().any(|(m, _)| m[self.n..].iter().any(|v| *v != 0)) {
                return Err(Error::InvalidInput(format!("{x} depends on the group variables")));
            }
            let key = MonoKey { form: k.form, ..MonoKey::unit(target.lie_dim) };
            out.add_term(key, c.map_modes(|m| m[..self.n].to_vec()));
        }
        Ok(out)
    }

    /// `α_g = B₀ − λ_g^* B₀` for a form `B₀` in the parametrized context.
    pub fn coboundary(&self, b0: &GradedElement) -> Result<GradedElement> {
        b0.sub(&self.pullback(b0))
    }

    /// `α_g + λ_g^* B − B`.
    pub fn cocycle_residual(&self, alpha: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        alpha.add(&self.pullback(b))?.sub(b)
    }
}

/// `B = −∫_G (λ_h^{-1})^* α_h dμ(h)`: shift modes by `λ_{-h}` and keep the
/// component constant in `h`. The result satisfies `α_g + λ_g^*B − B = 0`
/// whenever `α` is a cocycle; otherwise the residual is reported.
pub fn invariant_splitting(rot: &TorusRotation, alpha: &GradedElement) -> Result<GradedElement> {
    let ctx = alpha.ctx();
    if ctx.nvars() != rot.n + rot.group_dim() || !ctx.is_torus() {
        return Err(Error::InvalidInput("α must live in the group-parametrized context".into()));
    }
    if alpha.terms().any(|(k, _)| k.form >> rot.n != 0 || k.theta != 0 || k.omega_degree() > 0) {
        return Err(Error::InvalidInput("α may only contain manifold forms".into()));
    }
    let n = rot.n;
    let averaged = alpha.map_coefficients(|_, c| {
        c.map_modes(|k| rot.shift(k, -1)).filter_modes(|k| k[n..].iter().all(|v| *v == 0))
    });
    let b = averaged.neg();
    let r = rot.cocycle_residual(alpha, &b)?;
    if !r.is_zero() {
        return Err(Error::NonCocycle(r.to_string()));
    }
    Ok(b)
}

/// `𝓗̄ = H̄ + Ω^a ξ̄_a` from action data already in an invariant splitting.
pub fn extended_to_twisted(model: &ModelContext) -> Result<EquivariantThreeForm> {
    let f = EquivariantThreeForm { h: model.action.h.clone(), xi: model.action.xi.clone() };
    f.check(model)?;
    Ok(f)
}
