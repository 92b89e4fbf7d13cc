//! Closed equivariant 3-forms `𝓗 = H + Ω^a ξ_a`, the Cartan map `j` and
//! the basic Weil 3-form `𝐇`.

use num_traits::Zero;

use super::model::ModelContext;
use crate::algebra::{frac, GradedElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantThreeForm {
    pub h: GradedElement,
    pub xi: Vec<GradedElement>,
}

impl EquivariantThreeForm {
    /// `H + Σ_a Ω^a ξ_a`.
    pub fn element(&self) -> Result<GradedElement> {
        let mut e = self.h.clone();
        for (a, x) in self.xi.iter().enumerate() {
            e = e.add(&GradedElement::omega(self.h.ctx(), a).mul(x)?)?;
        }
        Ok(e)
    }

    /// Checks closedness (`dH = 0`, `dξ_a = ι_a H`, `ι_a ξ_b + ι_b ξ_a = 0`)
    /// and invariance (`L_b H = 0`, `L_b ξ_a = ξ_{[b,a]}`).
    pub fn check(&self, model: &ModelContext) -> Result<()> {
        let m = model.dim();
        if self.xi.len() != m {
            return Err(Error::InvalidInput(format!("expected {m} 1-forms ξ_a, got {}", self.xi.len())));
        }
        let fail = |condition: String, witness: &GradedElement| {
            Err(Error::InvalidThreeForm { condition, witness: witness.to_string() })
        };
        let d = model.de_rham();
        let dh = d.apply(&self.h)?;
        if !dh.is_zero() {
            return fail("dH = 0".into(), &dh);
        }
        for a in 0..m {
            let r = d.apply(&self.xi[a])?.sub(&model.manifold_contraction(a).apply(&self.h)?)?;
            if !r.is_zero() {
                return fail(format!("dξ_{0} − ι_{0} H = 0", a + 1), &r);
            }
            for b in a..m {
                let r = model
                    .manifold_contraction(a)
                    .apply(&self.xi[b])?
                    .add(&model.manifold_contraction(b).apply(&self.xi[a])?)?;
                if !r.is_zero() {
                    return fail(format!("ι_{} ξ_{} + ι_{} ξ_{} = 0", a + 1, b + 1, b + 1, a + 1), &r);
                }
            }
        }
        for b in 0..m {
            let l = model.manifold_lie_derivative(b);
            let r = l.apply(&self.h)?;
            if !r.is_zero() {
                return fail(format!("L_{} H = 0", b + 1), &r);
            }
            for a in 0..m {
                let mut expect = GradedElement::zero(self.h.ctx());
                for (c, f) in model.lie().bracket(b, a).iter().enumerate() {
                    if !f.is_zero() {
                        expect = expect.add(&self.xi[c].scale(f))?;
                    }
                }
                let r = l.apply(&self.xi[a])?.sub(&expect)?;
                if !r.is_zero() {
                    return fail(format!("L_{} ξ_{} = ξ_[{},{}]", b + 1, a + 1, b + 1, a + 1), &r);
                }
            }
        }
        Ok(())
    }
}

/// `j(x) = ∏_a (1 − θ^a ι_a) x`, factors in ascending order (the last factor
/// acts first).
pub fn cartan_map_j(model: &ModelContext, x: &GradedElement) -> Result<GradedElement> {
    let order: Vec<usize> = (0..model.dim()).rev().collect();
    cartan_map_j_ordered(model, x, &order)
}

/// `j` with factors applied in the given order (first entry acts first).
pub fn cartan_map_j_ordered(model: &ModelContext, x: &GradedElement, order: &[usize]) -> Result<GradedElement> {
    if x.has_theta() {
        return Err(Error::ThetaInCartanInput);
    }
    let mut y = x.clone();
    for &a in order {
        let t = GradedElement::theta(model.ctx(), a).mul(&model.contraction(a)?.apply(&y)?)?;
        y = y.sub(&t)?;
    }
    Ok(y)
}

/// `𝐇 = H + d(θ^a ξ_a) − ½ d(θ^p θ^q ι_q ξ_p)` with the Weil-model `d`,
/// checked to be basic and closed.
pub fn weil_three_form(model: &ModelContext, three_form: &EquivariantThreeForm) -> Result<GradedElement> {
    let ctx = model.ctx();
    let d = model.weil_differential()?;
    let th = |a| GradedElement::theta(ctx, a);
    let mut inner = GradedElement::zero(ctx);
    for (a, x) in three_form.xi.iter().enumerate() {
        inner = inner.add(&th(a).mul(x)?)?;
    }
    for p in 0..model.dim() {
        for q in 0..model.dim() {
            let c = model.manifold_contraction(q).apply(&three_form.xi[p])?;
            if c.is_zero() {
                continue;
            }
            inner = inner.sub(&th(p).mul(&th(q))?.mul(&c)?.scale(&frac(1, 2)))?;
        }
    }
    let bold = three_form.h.add(&d.apply(&inner)?)?;
    check_basic_closed(model, &bold)?;
    Ok(bold)
}

/// `ι_a x = L_a x = d x = 0` for all `a`; a failure signals a sign error.
pub fn check_basic_closed(model: &ModelContext, x: &GradedElement) -> Result<()> {
    for a in 0..model.dim() {
        let r = model.contraction(a)?.apply(x)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("ι_{} 𝐇 = {r}", a + 1)));
        }
        let r = model.lie_derivative(a)?.apply(x)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("L_{} 𝐇 = {r}", a + 1)));
        }
    }
    let r = model.weil_differential()?.apply(x)?;
    if !r.is_zero() {
        return Err(Error::Internal(format!("d 𝐇 = {r}")));
    }
    Ok(())
}
