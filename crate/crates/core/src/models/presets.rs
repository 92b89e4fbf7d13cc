//! Formal tables and named model instances.

use num_traits::{One, Zero};

use super::action::{ExtendedActionData, Geometry, VectorField};
use crate::algebra::context::mask_sign;
use crate::algebra::{
    frac, rat, AlgebraContext, Ctx, Derivation, FormalManifold, GradedElement, Lin, MonoKey, Parity, Rational, TrigPoly,
};
use crate::error::{Error, Result};
use crate::lie::LieAlgebraData;

const COPY_LETTERS: [char; 4] = ['e', 'f', 'g', 'h'];

fn mask_label(mask: u32, m: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    let mut s = String::new();
    for i in 0..32 {
        if mask & (1 << i) != 0 {
            s.push(COPY_LETTERS[i / m]);
            s.push_str(&(i % m + 1).to_string());
        }
    }
    s
}

fn element_to_lin(x: &GradedElement) -> Lin {
    x.terms().map(|(k, c)| (k.theta as usize, c.coeff(&[] as &[i64]).re)).collect()
}

fn derivation_table(ext: &Ctx, d: &Derivation) -> Result<Vec<Lin>> {
    let n = 1usize << ext.lie_dim;
    (0..n)
        .map(|mask| {
            let e = GradedElement::monomial(ext, MonoKey { theta: mask as u32, ..MonoKey::unit(ext.lie_dim) }, TrigPoly::one(0));
            Ok(element_to_lin(&d.apply(&e)?))
        })
        .collect()
}

/// `Λ((g*)^{⊕copies})` with the Chevalley–Eilenberg differential on each copy
/// and `g` acting diagonally. Basis element `M` is the wedge of the
/// generators in mask `M`, labelled `e1f2…` by copy.
pub fn chevalley_eilenberg(lie: &LieAlgebraData, copies: usize) -> Result<FormalManifold> {
    let m = lie.dim();
    let gens = m * copies;
    if copies == 0 || copies > COPY_LETTERS.len() || gens > 12 {
        return Err(Error::InvalidInput(format!("Chevalley–Eilenberg model with {copies} copies of dimension {m} is too large")));
    }
    // The exterior algebra is realised as the θ-part of a scratch context.
    let ext = AlgebraContext::torus(0, gens);
    let th = |i: usize| GradedElement::theta(&ext, i);
    let mut d = Derivation::zero(&ext, Parity::Odd, "d_CE");
    for k in 0..copies {
        for a in 0..m {
            let mut img = GradedElement::zero(&ext);
            for (aa, b, c, f) in lie.entries() {
                if aa == a {
                    img = img.sub(&th(k * m + b).mul(&th(k * m + c))?.scale(&(f * frac(1, 2))))?;
                }
            }
            d.set_theta(k * m + a, img);
        }
    }
    let mut contractions = Vec::new();
    let mut lie_derivatives = Vec::new();
    for a in 0..m {
        let mut i = Derivation::zero(&ext, Parity::Odd, "ι");
        let mut l = Derivation::zero(&ext, Parity::Even, "L");
        for k in 0..copies {
            i.set_theta(k * m + a, GradedElement::one(&ext));
            for b in 0..m {
                let mut img = GradedElement::zero(&ext);
                for e in 0..m {
                    let f = lie.f(b, e, a);
                    if !f.is_zero() {
                        img = img.add(&th(k * m + e).scale(f))?;
                    }
                }
                l.set_theta(k * m + b, img);
            }
        }
        contractions.push(derivation_table(&ext, &i)?);
        lie_derivatives.push(derivation_table(&ext, &l)?);
    }
    let n = 1usize << gens;
    let mut products = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a & b == 0 {
                products.push((a, b, a | b, mask_sign(a as u32, b as u32)));
            }
        }
    }
    let labels = (0..n).map(|mask| mask_label(mask as u32, m)).collect();
    let degrees = (0..n).map(|mask| (mask as u32).count_ones()).collect();
    FormalManifold::new(labels, degrees, products, derivation_table(&ext, &d)?, contractions, lie_derivatives)
}

/// Cohomology ring of `S¹ × CPᵏ`: basis `x^j` (degree `2j`) and `dth·x^j`,
/// zero differential, no group action.
pub fn s1_cp(k: usize) -> Result<FormalManifold> {
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let xl = |j: usize| match j {
        0 => "1".to_string(),
        1 => "x".to_string(),
        _ => format!("x^{j}"),
    };
    for j in 0..=k {
        labels.push(xl(j));
        degrees.push(2 * j as u32);
    }
    for j in 0..=k {
        labels.push(if j == 0 { "dth".into() } else { format!("dth {}", xl(j)) });
        degrees.push(2 * j as u32 + 1);
    }
    let odd = |j: usize| k + 1 + j;
    let mut products = Vec::new();
    for i in 0..=k {
        for j in 0..=k {
            if i + j <= k {
                products.push((i, j, i + j, Rational::one()));
                products.push((i, odd(j), odd(i + j), Rational::one()));
                products.push((odd(i), j, odd(i + j), Rational::one()));
            }
        }
    }
    let dim = 2 * (k + 1);
    FormalManifold::new(labels, degrees, products, vec![vec![]; dim], vec![], vec![])
}

/// Named instances used by the tests, the verifier and the CLI.
pub mod instances {
    use super::*;

    fn torus_geometry(n: usize, lie: LieAlgebraData) -> Result<Geometry> {
        Geometry::new(AlgebraContext::torus(n, lie.dim()), lie)
    }

    fn function(ctx: &Ctx, f: TrigPoly) -> GradedElement {
        GradedElement::function(ctx, f)
    }

    fn dt(ctx: &Ctx, i: usize) -> GradedElement {
        GradedElement::dtheta(ctx, i)
    }

    /// `S¹` acting trivially on `S¹` with `δ(1) = dθ`, `H = 0`.
    pub fn circle_circle() -> Result<ExtendedActionData> {
        let g = torus_geometry(1, LieAlgebraData::abelian(1))?;
        let ctx = g.ctx.clone();
        ExtendedActionData::new(g, vec![VectorField::Torus(vec![TrigPoly::zero()])], vec![dt(&ctx, 0)], GradedElement::zero(&ctx))
    }

    /// `S¹` rotating itself, no twisting.
    pub fn free_rotation() -> Result<ExtendedActionData> {
        let g = torus_geometry(1, LieAlgebraData::abelian(1))?;
        let ctx = g.ctx.clone();
        ExtendedActionData::new(g, vec![VectorField::coordinate(1, 0)], vec![GradedElement::zero(&ctx)], GradedElement::zero(&ctx))
    }

    /// A point with `S¹` acting, no twisting.
    pub fn point_circle() -> Result<ExtendedActionData> {
        let g = torus_geometry(0, LieAlgebraData::abelian(1))?;
        let ctx = g.ctx.clone();
        ExtendedActionData::new(g, vec![VectorField::Torus(vec![])], vec![GradedElement::zero(&ctx)], GradedElement::zero(&ctx))
    }

    /// A point with the trivial group.
    pub fn point() -> Result<ExtendedActionData> {
        let g = torus_geometry(0, LieAlgebraData::abelian(0))?;
        let ctx = g.ctx.clone();
        ExtendedActionData::new(g, vec![], vec![], GradedElement::zero(&ctx))
    }

    /// `T³` with `T²` acting by `∂3`, `∂2`, `H = cos θ1 dθ1dθ2dθ3`,
    /// `ξ_1 = sin θ1 dθ2`, `ξ_2 = −sin θ1 dθ3`.
    pub fn t3_abelian() -> Result<ExtendedActionData> {
        let g = torus_geometry(3, LieAlgebraData::abelian(2))?;
        let ctx = g.ctx.clone();
        let s = function(&ctx, TrigPoly::sin(&[1, 0, 0]));
        let h = function(&ctx, TrigPoly::cos(&[1, 0, 0])).mul(&dt(&ctx, 0))?.mul(&dt(&ctx, 1))?.mul(&dt(&ctx, 2))?;
        let xi = vec![s.mul(&dt(&ctx, 1))?, s.mul(&dt(&ctx, 2))?.neg()];
        ExtendedActionData::new(g, vec![VectorField::coordinate(3, 2), VectorField::coordinate(3, 1)], xi, h)
    }

    /// `T²` with `S¹` rotating the second factor and `δ(1) = ∂2 + dθ1`.
    pub fn t2_rotation() -> Result<ExtendedActionData> {
        let g = torus_geometry(2, LieAlgebraData::abelian(1))?;
        let ctx = g.ctx.clone();
        ExtendedActionData::new(g, vec![VectorField::coordinate(2, 1)], vec![dt(&ctx, 0)], GradedElement::zero(&ctx))
    }

    /// `T²` with `T²` acting by `δ(1) = ∂1`, `δ(2) = cos θ1 dθ2`: isotropic,
    /// but `[δ(1), δ(2)] = −sin θ1 dθ2 ≠ δ(0)`.
    pub fn morphism_violation() -> Result<ExtendedActionData> {
        let g = torus_geometry(2, LieAlgebraData::abelian(2))?;
        let ctx = g.ctx.clone();
        let xi2 = function(&ctx, TrigPoly::cos(&[1, 0])).mul(&dt(&ctx, 1))?;
        ExtendedActionData::new(
            g,
            vec![VectorField::coordinate(2, 0), VectorField::Torus(vec![TrigPoly::zero(), TrigPoly::zero()])],
            vec![GradedElement::zero(&ctx), xi2],
            GradedElement::zero(&ctx),
        )
    }

    /// `δ(1) = ∂θ + dθ` on `S¹`: `⟨δ(1), δ(1)⟩ = 1`.
    pub fn isotropy_violation() -> Result<ExtendedActionData> {
        let g = torus_geometry(1, LieAlgebraData::abelian(1))?;
        let ctx = g.ctx.clone();
        ExtendedActionData::new(g, vec![VectorField::coordinate(1, 0)], vec![dt(&ctx, 0)], GradedElement::zero(&ctx))
    }

    /// `su(2)` acting diagonally on `Λ(g*) ⊗ Λ(g*)` with `ξ_a = e^a − f^a`
    /// and `H = vol_f − vol_e`.
    pub fn su2_ce() -> Result<ExtendedActionData> {
        let lie = LieAlgebraData::su2();
        let table = chevalley_eilenberg(&lie, 2)?;
        let ctx = AlgebraContext::formal(table, 3);
        let g = Geometry::new(ctx.clone(), lie)?;
        let b = |l: &str| GradedElement::basis(&ctx, l);
        let xi = (1..=3).map(|a| b(&format!("e{a}"))?.sub(&b(&format!("f{a}"))?)).collect::<Result<Vec<_>>>()?;
        let h = b("f1f2f3")?.sub(&b("e1e2e3")?)?;
        let fields = (0..3)
            .map(|a| {
                let mut c = vec![Rational::zero(); 3];
                c[a] = Rational::one();
                VectorField::Formal(c)
            })
            .collect();
        ExtendedActionData::new(g, fields, xi, h)
    }

    /// `su(2)` acting on `Λ(g*)` with `δ(a) = X_a`, twisting by the Cartan
    /// 3-form. Not an extended action: the bracket picks up `−ι_a ι_b H`.
    pub fn su2_ce_single() -> Result<ExtendedActionData> {
        let lie = LieAlgebraData::su2();
        let table = chevalley_eilenberg(&lie, 1)?;
        let ctx = AlgebraContext::formal(table, 3);
        let g = Geometry::new(ctx.clone(), lie)?;
        let h = GradedElement::basis(&ctx, "e1e2e3")?.scale(&rat(-1));
        let fields = (0..3)
            .map(|a| {
                let mut c = vec![Rational::zero(); 3];
                c[a] = Rational::one();
                VectorField::Formal(c)
            })
            .collect();
        ExtendedActionData::new(g, fields, vec![GradedElement::zero(&ctx); 3], h)
    }

    /// `S¹ × CPᵏ` with twisting `H = dth·x` and no group.
    pub fn s1_cp(k: usize) -> Result<ExtendedActionData> {
        let ctx = AlgebraContext::formal(super::s1_cp(k)?, 0);
        let g = Geometry::new(ctx.clone(), LieAlgebraData::abelian(0))?;
        let h = GradedElement::basis(&ctx, "dth x")?;
        ExtendedActionData::new(g, vec![], vec![], h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ce_of_su2_is_a_valid_table() {
        let t = chevalley_eilenberg(&LieAlgebraData::su2(), 1).unwrap();
        assert_eq!(t.dim(), 8);
        // d e1 = −e2 e3
        let i1 = t.index_of("e1").unwrap();
        let i23 = t.index_of("e2e3").unwrap();
        assert_eq!(t.differential[i1], vec![(i23, rat(-1))]);
    }

    #[test]
    fn s1_cp_table() {
        let t = s1_cp(2).unwrap();
        assert_eq!(t.labels, vec!["1", "x", "x^2", "dth", "dth x", "dth x^2"]);
        assert_eq!(t.product(1, 2), &[]);
        assert_eq!(t.product(4, 1), &[(5, rat(1))]);
    }

    #[test]
    fn instances_build() {
        for d in [
            instances::circle_circle(),
            instances::free_rotation(),
            instances::point_circle(),
            instances::t3_abelian(),
            instances::su2_ce(),
            instances::s1_cp(3),
        ] {
            d.unwrap();
        }
    }
}
