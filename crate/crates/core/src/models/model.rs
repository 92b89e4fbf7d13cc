//! Differentials of the Cartan, Weil, extended and twisted models.

use super::action::{ExtendedActionData, Section};
use crate::algebra::{Ctx, Derivation, GradedElement, Operator, Rational};
use crate::error::Result;
use crate::lie::{make_weil_algebra, LieAlgebraData, WeilAlgebra};

/// Sign in front of `Ω^a ι_{δ(a)}` in the extended differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// `d_H − Ω^a ι_{δ(a)}`: agrees with `d_g = d − Ω^a ι_a`.
    #[default]
    Minus,
    /// `d_H + Ω^a ι_{δ(a)}`: related to `Minus` by `Ω ↦ −Ω`.
    Plus,
}

/// An extended action together with every derivation built from it.
#[derive(Clone, Debug)]
pub struct ModelContext {
    pub action: ExtendedActionData,
    pub weil: WeilAlgebra,
    d_m: Derivation,
    iota_m: Vec<Derivation>,
    lie_m: Vec<Derivation>,
}

/// `Ω^a ↦ −Ω^a`.
pub fn flip_omega(x: &GradedElement) -> GradedElement {
    x.map_coefficients(|k, c| if k.omega_degree() % 2 == 1 { c.neg() } else { c.clone() })
}

impl ModelContext {
    pub fn new(action: ExtendedActionData) -> Result<Self> {
        let weil = make_weil_algebra(&action.geometry.ctx, &action.geometry.lie)?;
        Self::with_weil(action, weil)
    }

    /// Same group and context, different action data; reuses the Weil algebra.
    pub fn with_action(&self, action: ExtendedActionData) -> Result<Self> {
        if !std::sync::Arc::ptr_eq(&action.geometry.ctx, self.ctx()) {
            return Err(crate::Error::ContextMismatch);
        }
        if action.geometry.lie != self.action.geometry.lie {
            return Self::new(action);
        }
        Self::with_weil(action, self.weil.clone())
    }

    fn with_weil(action: ExtendedActionData, weil: WeilAlgebra) -> Result<Self> {
        let g = &action.geometry;
        let d_m = g.de_rham();
        let iota_m = action
            .fields
            .iter()
            .enumerate()
            .map(|(a, x)| g.contraction(x).map(|d| d.with_name(&format!("ι_{}", a + 1))))
            .collect::<Result<_>>()?;
        let lie_m = action
            .fields
            .iter()
            .enumerate()
            .map(|(a, x)| g.lie_derivative(x).map(|d| d.with_name(&format!("L_{}", a + 1))))
            .collect::<Result<_>>()?;
        Ok(Self { action, weil, d_m, iota_m, lie_m })
    }

    pub fn ctx(&self) -> &Ctx {
        self.action.ctx()
    }

    pub fn lie(&self) -> &LieAlgebraData {
        self.action.lie()
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }

    pub fn de_rham(&self) -> &Derivation {
        &self.d_m
    }

    pub fn manifold_contraction(&self, a: usize) -> &Derivation {
        &self.iota_m[a]
    }

    pub fn manifold_lie_derivative(&self, a: usize) -> &Derivation {
        &self.lie_m[a]
    }

    /// `d_M + d_W` on `Ω(M) ⊗ W(g)`.
    pub fn weil_differential(&self) -> Result<Derivation> {
        Ok(self.d_m.add(&self.weil.d)?.with_name("d"))
    }

    /// `ι_{X_a}` plus the Weil contraction `θ^b ↦ δ_ab`.
    pub fn contraction(&self, a: usize) -> Result<Derivation> {
        Ok(self.iota_m[a].add(&self.weil.contractions[a])?.with_name(&format!("ι_{}", a + 1)))
    }

    /// `L_{X_a}` plus the coadjoint action on `θ`, `Ω`.
    pub fn lie_derivative(&self, a: usize) -> Result<Derivation> {
        Ok(self.lie_m[a].add(&self.weil.lie_derivatives[a])?.with_name(&format!("L_{}", a + 1)))
    }

    /// `d_g = d − Ω^a ι_a`.
    pub fn cartan_differential(&self) -> Result<Derivation> {
        let mut d = self.d_m.clone();
        for a in 0..self.dim() {
            d = d.sub(&self.iota_m[a].left_mul(&GradedElement::omega(self.ctx(), a))?)?;
        }
        Ok(d.with_name("d_g"))
    }

    /// `d_H = d − H∧`.
    pub fn twisted_de_rham(&self) -> Result<Operator> {
        Operator::new(self.d_m.clone().with_name("d_H"), self.action.h.neg())
    }

    /// `ι_𝔛 = ι_X + ξ∧`.
    pub fn section_contraction(&self, s: &Section) -> Result<Operator> {
        Operator::new(self.action.geometry.contraction(&s.vector)?, s.form.clone())
    }

    /// `L_𝔛 = [d_H, ι_𝔛] = L_X + (dξ − ι_X H)∧`.
    pub fn section_lie_derivative(&self, s: &Section) -> Result<Operator> {
        let g = &self.action.geometry;
        let ix = g.contraction(&s.vector)?;
        let e = self.d_m.apply(&s.form)?.sub(&ix.apply(&self.action.h)?)?;
        Operator::new(g.lie_derivative(&s.vector)?, e)
    }

    /// `d_{g,δ} = d_H ∓ Ω^a ι_{δ(a)}`.
    pub fn extended_differential(&self, sign: SignConvention) -> Result<Operator> {
        let s = match sign {
            SignConvention::Minus => -Rational::from_integer(1.into()),
            SignConvention::Plus => Rational::from_integer(1.into()),
        };
        let mut d = self.d_m.clone();
        let mut mult = self.action.h.neg();
        for a in 0..self.dim() {
            let om = GradedElement::omega(self.ctx(), a);
            d = d.add(&self.iota_m[a].left_mul(&om)?.scale(&s))?;
            mult = mult.add(&om.mul(&self.action.xi[a])?.scale(&s))?;
        }
        Operator::new(d.with_name("d_{g,δ}"), mult)
    }

    /// `d_{g,𝓗} = d_g − 𝓗∧`.
    pub fn twisted_cartan_differential(&self, three_form: &GradedElement) -> Result<Operator> {
        Operator::new(self.cartan_differential()?.with_name("d_{g,𝓗}"), three_form.neg())
    }

    /// `d − 𝐇∧` on the Weil model.
    pub fn weil_twisted_differential(&self, bold_h: &GradedElement) -> Result<Operator> {
        Operator::new(self.weil_differential()?.with_name("d_𝐇"), bold_h.neg())
    }

    /// `−Σ_a Ω^a L_{δ(a)} x`, the expected square of the extended differential.
    pub fn extended_square_expected(&self, x: &GradedElement) -> Result<GradedElement> {
        let mut out = GradedElement::zero(self.ctx());
        for a in 0..self.dim() {
            let l = self.section_lie_derivative(&self.action.delta(a))?;
            out = out.sub(&GradedElement::omega(self.ctx(), a).mul(&l.apply(x)?)?)?;
        }
        Ok(out)
    }

    /// `Ω^a ↦ −Ω^a` conjugation of an operator, applied to `x`.
    pub fn conjugate_by_flip(op: &Operator, x: &GradedElement) -> Result<GradedElement> {
        Ok(flip_omega(&op.apply(&flip_omega(x))?))
    }
}
