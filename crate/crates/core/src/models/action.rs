//! Vector fields, sections of `T ⊕ T*`, the twisted Courant bracket, and
//! extended actions.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{frac, Backend, Ctx, Derivation, GradedElement, Lin, Parity, Rational, TrigPoly};
use crate::error::{Error, Result};
use crate::lie::LieAlgebraData;

/// A vector field on the manifold backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VectorField {
    /// `Σ X^i ∂/∂θ_i`.
    Torus(Vec<TrigPoly>),
    /// Constant combination of the table's action generators.
    Formal(Vec<Rational>),
}

impl VectorField {
    pub fn is_zero(&self) -> bool {
        match self {
            VectorField::Torus(c) => c.iter().all(|x| x.is_zero()),
            VectorField::Formal(c) => c.iter().all(|x| x.is_zero()),
        }
    }

    /// `∂/∂θ_i` on `Tⁿ`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut c = vec![TrigPoly::zero(); n];
        c[i] = TrigPoly::one(n);
        VectorField::Torus(c)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (VectorField::Torus(a), VectorField::Torus(b)) if a.len() == b.len() => {
                Ok(VectorField::Torus(a.iter().zip(b).map(|(x, y)| x.add(y)).collect()))
            }
            (VectorField::Formal(a), VectorField::Formal(b)) if a.len() == b.len() => {
                Ok(VectorField::Formal(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => Err(Error::ContextMismatch),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        match self {
            VectorField::Torus(a) => VectorField::Torus(a.iter().map(|x| x.scale(r)).collect()),
            VectorField::Formal(a) => VectorField::Formal(a.iter().map(|x| x * r).collect()),
        }
    }

    /// Integer translation vector if every component is an integer constant.
    pub fn integer_constant(&self) -> Option<Vec<i64>> {
        let VectorField::Torus(c) = self else { return None };
        c.iter()
            .map(|p| {
                if !p.is_constant() {
                    return None;
                }
                let v = p.coeff(&vec![0; c.len()]);
                if !v.is_real() || !v.re.is_integer() {
                    return None;
                }
                i64::try_from(v.re.to_integer()).ok()
            })
            .collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            VectorField::Torus(c) => {
                let n = c.len();
                c.iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(i, p)| {
                        let v = if n == 1 { "∂θ".to_string() } else { format!("∂θ{}", i + 1) };
                        if p == &TrigPoly::one(n) { v } else { format!("({p})·{v}") }
                    })
                    .collect()
            }
            VectorField::Formal(c) => c
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(|(a, r)| format!("{}·X{}", crate::algebra::rational::format_rational(r), a + 1))
                .collect(),
        };
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `X + ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub vector: VectorField,
    pub form: GradedElement,
}

impl Section {
    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(Self { vector: self.vector.add(&o.vector)?, form: self.form.add(&o.form)? })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { vector: self.vector.scale(r), form: self.form.scale(r) }
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero() && self.form.is_zero()
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.vector, self.form)
    }
}

/// The manifold backend together with the Lie algebra whose basis indexes
/// the action.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub ctx: Ctx,
    pub lie: LieAlgebraData,
}

fn lin_element(ctx: &Ctx, l: &Lin) -> GradedElement {
    let mut e = GradedElement::zero(ctx);
    for (k, c) in l {
        e = e.add(&GradedElement::form(ctx, *k as u32).scale(c)).expect("same context");
    }
    e
}

impl Geometry {
    pub fn new(ctx: Ctx, lie: LieAlgebraData) -> Result<Self> {
        if ctx.lie_dim != lie.dim() {
            return Err(Error::InvalidInput(format!(
                "context carries {} Weil generators but the Lie algebra has dimension {}",
                ctx.lie_dim,
                lie.dim()
            )));
        }
        if let Backend::Formal(m) = &ctx.backend {
            if m.action_dim() != lie.dim() {
                return Err(Error::InvalidInput(format!(
                    "formal table has {} contractions but the Lie algebra has dimension {}",
                    m.action_dim(),
                    lie.dim()
                )));
            }
        }
        Ok(Self { ctx, lie })
    }

    pub fn zero_field(&self) -> VectorField {
        match &self.ctx.backend {
            Backend::Torus { n } => VectorField::Torus(vec![TrigPoly::zero(); *n]),
            Backend::Formal(_) => VectorField::Formal(vec![Rational::zero(); self.lie.dim()]),
        }
    }

    fn check_field(&self, x: &VectorField) -> Result<()> {
        match (&self.ctx.backend, x) {
            (Backend::Torus { n }, VectorField::Torus(c)) if c.len() == *n => c.iter().try_for_each(|p| p.check_real()),
            (Backend::Formal(_), VectorField::Formal(c)) if c.len() == self.lie.dim() => Ok(()),
            _ => Err(Error::InvalidInput(format!("vector field {x} does not match the manifold backend"))),
        }
    }

    /// The de Rham differential of the manifold factor.
    pub fn de_rham(&self) -> Derivation {
        let ctx = &self.ctx;
        let mut d = Derivation::zero(ctx, Parity::Odd, "d");
        match &ctx.backend {
            Backend::Torus { n } => {
                for i in 0..*n {
                    d.set_coord(i, GradedElement::dtheta(ctx, i));
                }
            }
            Backend::Formal(m) => {
                for (i, img) in m.differential.iter().enumerate() {
                    d.set_form(i, lin_element(ctx, img));
                }
            }
        }
        d
    }

    pub fn contraction(&self, x: &VectorField) -> Result<Derivation> {
        self.check_field(x)?;
        let ctx = &self.ctx;
        let mut d = Derivation::zero(ctx, Parity::Odd, &format!("ι[{x}]"));
        match (&ctx.backend, x) {
            (Backend::Torus { .. }, VectorField::Torus(c)) => {
                for (i, p) in c.iter().enumerate() {
                    d.set_form(i, GradedElement::function(ctx, p.clone()));
                }
            }
            (Backend::Formal(m), VectorField::Formal(c)) => {
                for i in 0..m.dim() {
                    let mut img = GradedElement::zero(ctx);
                    for (a, r) in c.iter().enumerate() {
                        if !r.is_zero() {
                            img = img.add(&lin_element(ctx, &m.contractions[a][i]).scale(r))?;
                        }
                    }
                    d.set_form(i, img);
                }
            }
            _ => unreachable!("checked above"),
        }
        d.checked()
    }

    /// `L_X` from explicit formulas: `L_X f = X(f)`, `L_X dθ_i = d(X^i)`, or
    /// the table's Lie derivatives.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Derivation> {
        self.check_field(x)?;
        let ctx = &self.ctx;
        let mut d = Derivation::zero(ctx, Parity::Even, &format!("L[{x}]"));
        match (&ctx.backend, x) {
            (Backend::Torus { n }, VectorField::Torus(c)) => {
                for (i, p) in c.iter().enumerate() {
                    d.set_coord(i, GradedElement::function(ctx, p.clone()));
                    let mut dx = GradedElement::zero(ctx);
                    for j in 0..*n {
                        let q = p.partial(j);
                        if !q.is_zero() {
                            dx = dx.add(&GradedElement::function(ctx, q).mul(&GradedElement::dtheta(ctx, j))?)?;
                        }
                    }
                    d.set_form(i, dx);
                }
            }
            (Backend::Formal(m), VectorField::Formal(c)) => {
                for i in 0..m.dim() {
                    let mut img = GradedElement::zero(ctx);
                    for (a, r) in c.iter().enumerate() {
                        if !r.is_zero() {
                            img = img.add(&lin_element(ctx, &m.lie_derivatives[a][i]).scale(r))?;
                        }
                    }
                    d.set_form(i, img);
                }
            }
            _ => unreachable!("checked above"),
        }
        d.checked()
    }

    /// Lie bracket of vector fields.
    pub fn bracket(&self, x: &VectorField, y: &VectorField) -> Result<VectorField> {
        self.check_field(x)?;
        self.check_field(y)?;
        match (x, y) {
            (VectorField::Torus(a), VectorField::Torus(b)) => {
                let apply = |v: &[TrigPoly], f: &TrigPoly| {
                    v.iter().enumerate().fold(TrigPoly::zero(), |acc, (j, vj)| acc.add(&vj.mul(&f.partial(j))))
                };
                Ok(VectorField::Torus(a.iter().zip(b).map(|(ai, bi)| apply(a, bi).sub(&apply(b, ai))).collect()))
            }
            (VectorField::Formal(a), VectorField::Formal(b)) => {
                let m = self.lie.dim();
                let mut out = vec![Rational::zero(); m];
                for (p, ap) in a.iter().enumerate() {
                    for (q, bq) in b.iter().enumerate() {
                        if ap.is_zero() || bq.is_zero() {
                            continue;
                        }
                        for (e, o) in out.iter_mut().enumerate() {
                            *o += ap * bq * self.lie.f(e, p, q);
                        }
                    }
                }
                Ok(VectorField::Formal(out))
            }
            _ => Err(Error::ContextMismatch),
        }
    }

    fn check_form(&self, x: &GradedElement, degree: u32, what: &str) -> Result<()> {
        x.same_ctx(&GradedElement::zero(&self.ctx))?;
        if x.is_zero() {
            return Ok(());
        }
        if x.has_theta() || x.max_omega_degree() > 0 || x.degree().ok() != Some(degree) {
            return Err(Error::InvalidInput(format!("{what} must be a manifold {degree}-form, got {x}")));
        }
        x.check_real()
    }

    /// `[X+ξ, Y+η]_H = [X,Y] + L_X η − L_Y ξ − ½ d(ι_X η − ι_Y ξ) − ι_X ι_Y H`.
    pub fn courant_bracket(&self, s1: &Section, s2: &Section, h: &GradedElement) -> Result<Section> {
        self.check_form(&s1.form, 1, "section 1-form")?;
        self.check_form(&s2.form, 1, "section 1-form")?;
        self.check_form(h, 3, "twisting form")?;
        let (x, y) = (&s1.vector, &s2.vector);
        let ix = self.contraction(x)?;
        let iy = self.contraction(y)?;
        let d = self.de_rham();
        let mut form = self.lie_derivative(x)?.apply(&s2.form)?;
        form = form.sub(&self.lie_derivative(y)?.apply(&s1.form)?)?;
        let inner = ix.apply(&s2.form)?.sub(&iy.apply(&s1.form)?)?;
        form = form.sub(&d.apply(&inner)?.scale(&frac(1, 2)))?;
        form = form.sub(&ix.apply(&iy.apply(h)?)?)?;
        Ok(Section { vector: self.bracket(x, y)?, form })
    }

    /// `⟨X+ξ, Y+η⟩ = ½(ι_X η + ι_Y ξ)`.
    pub fn pairing(&self, s1: &Section, s2: &Section) -> Result<GradedElement> {
        self.check_form(&s1.form, 1, "section 1-form")?;
        self.check_form(&s2.form, 1, "section 1-form")?;
        let a = self.contraction(&s1.vector)?.apply(&s2.form)?;
        let b = self.contraction(&s2.vector)?.apply(&s1.form)?;
        Ok(a.add(&b)?.scale(&frac(1, 2)))
    }
}

/// `δ(a) = X_a + ξ_a` for each basis element of `g`, with twisting `H`.
#[derive(Clone, Debug)]
pub struct ExtendedActionData {
    pub geometry: Geometry,
    pub fields: Vec<VectorField>,
    pub xi: Vec<GradedElement>,
    pub h: GradedElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: Vec<CheckEntry>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn push(&mut self, name: String, residual: Option<String>) {
        self.entries.push(CheckEntry { name, passed: residual.is_none(), witness: residual });
    }
}

impl ExtendedActionData {
    pub fn new(geometry: Geometry, fields: Vec<VectorField>, xi: Vec<GradedElement>, h: GradedElement) -> Result<Self> {
        let m = geometry.lie.dim();
        if fields.len() != m || xi.len() != m {
            return Err(Error::InvalidInput(format!("need one vector field and one 1-form per basis element ({m})")));
        }
        for x in &fields {
            geometry.check_field(x)?;
        }
        for x in &xi {
            geometry.check_form(x, 1, "ξ_a")?;
        }
        geometry.check_form(&h, 3, "H")?;
        Ok(Self { geometry, fields, xi, h })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.geometry.ctx
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.geometry.lie
    }

    pub fn dim(&self) -> usize {
        self.fields.len()
    }

    pub fn delta(&self, a: usize) -> Section {
        Section { vector: self.fields[a].clone(), form: self.xi[a].clone() }
    }

    /// `δ(v)` for a coefficient vector `v ∈ g`.
    pub fn delta_of(&self, v: &[Rational]) -> Result<Section> {
        let mut s = Section { vector: self.geometry.zero_field(), form: GradedElement::zero(self.ctx()) };
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                s = s.add(&self.delta(a).scale(c))?;
            }
        }
        Ok(s)
    }
}

/// Checks `dH = 0`, isotropy of the image of `δ`, and that `δ` is a morphism
/// into the twisted Courant bracket. Failures carry the nonzero residual.
pub fn validate_extended_action(data: &ExtendedActionData) -> Result<ValidationReport> {
    let g = &data.geometry;
    let mut r = ValidationReport::default();
    let dh = g.de_rham().apply(&data.h)?;
    r.push("dH = 0".into(), (!dh.is_zero()).then(|| dh.to_string()));
    let m = data.dim();
    for a in 0..m {
        for b in a..m {
            let s = g.pairing(&data.delta(a), &data.delta(b))?.scale(&Rational::from_integer(2.into()));
            r.push(
                format!("isotropy ⟨δ({}), δ({})⟩ = 0", a + 1, b + 1),
                (!s.is_zero()).then(|| format!("ι_X{} ξ{} + ι_X{} ξ{} = {s}", a + 1, b + 1, b + 1, a + 1)),
            );
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let lhs = g.courant_bracket(&data.delta(a), &data.delta(b), &data.h)?;
            let rhs = data.delta_of(&data.lie().bracket(a, b))?;
            let diff = lhs.sub(&rhs)?;
            r.push(
                format!("morphism [δ({}), δ({})]_H = δ([{}, {}])", a + 1, b + 1, a + 1, b + 1),
                (!diff.is_zero()).then(|| format!("[δ({}), δ({})]_H - δ([{}, {}]) = {diff}", a + 1, b + 1, a + 1, b + 1)),
            );
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, AlgebraContext};

    fn circle(m: usize) -> Geometry {
        Geometry::new(AlgebraContext::torus(1, m), LieAlgebraData::abelian(m)).unwrap()
    }

    #[test]
    fn bracket_of_pure_vector_fields() {
        let g = Geometry::new(AlgebraContext::torus(1, 0), LieAlgebraData::abelian(0)).unwrap();
        let x = VectorField::Torus(vec![TrigPoly::one(1)]);
        let y = VectorField::Torus(vec![TrigPoly::sin(&[1])]);
        let z = GradedElement::zero(&g.ctx);
        let s = g
            .courant_bracket(&Section { vector: x, form: z.clone() }, &Section { vector: y, form: z.clone() }, &z)
            .unwrap();
        assert_eq!(s.vector, VectorField::Torus(vec![TrigPoly::cos(&[1])]));
        assert!(s.form.is_zero());
    }

    #[test]
    fn cotangent_sections_are_isotropic() {
        let g = circle(0);
        let dt = GradedElement::dtheta(&g.ctx, 0);
        let s = Section { vector: g.zero_field(), form: dt.clone() };
        assert!(g.pairing(&s, &s).unwrap().is_zero());
        let f = GradedElement::function(&g.ctx, TrigPoly::cos(&[2])).mul(&dt).unwrap();
        let t = Section { vector: g.zero_field(), form: f };
        let b = g.courant_bracket(&s, &t, &GradedElement::zero(&g.ctx)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn pairing_is_half_contraction() {
        let g = circle(0);
        let x = Section { vector: VectorField::coordinate(1, 0), form: GradedElement::zero(&g.ctx) };
        let eta = Section { vector: g.zero_field(), form: GradedElement::dtheta(&g.ctx, 0).scale(&rat(3)) };
        assert_eq!(g.pairing(&x, &eta).unwrap(), GradedElement::constant(&g.ctx, frac(3, 2)));
    }
}
