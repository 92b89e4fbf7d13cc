//! Lie algebras in a basis and the Weil algebra operators.

use num_traits::{One, Zero};

use crate::algebra::{frac, Ctx, Derivation, GradedElement, Parity, Rational};
use crate::error::{Error, Result};

/// Structure constants `f^a_{bc}` with `[e_b, e_c] = f^a_{bc} e_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    dim: usize,
    f: Vec<Rational>,
}

impl LieAlgebraData {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `f^a_{bc}`.
    pub fn f(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.f[(a * self.dim + b) * self.dim + c]
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().all(|x| x.is_zero())
    }

    /// Coordinates of `[e_b, e_c]`.
    pub fn bracket(&self, b: usize, c: usize) -> Vec<Rational> {
        (0..self.dim).map(|a| self.f(a, b, c).clone()).collect()
    }

    /// Nonzero entries `(a, b, c, f^a_{bc})`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let m = self.dim;
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let v = self.f(a, b, c);
                    if !v.is_zero() {
                        out.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn abelian(dim: usize) -> Self {
        Self { dim, f: vec![Rational::zero(); dim * dim * dim] }
    }

    /// `su(2)` with `f^a_{bc} = ε_{abc}`.
    pub fn su2() -> Self {
        let mut f = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    f.push((a, b, c, crate::algebra::rat(levi_civita(a, b, c))));
                }
            }
        }
        make_lie_algebra_sparse(3, &f).expect("su(2) is a Lie algebra")
    }

    /// The two-dimensional non-abelian algebra, `[e_1, e_2] = e_1`.
    pub fn affine() -> Self {
        make_lie_algebra_sparse(2, &[(0, 0, 1, Rational::one()), (0, 1, 0, -Rational::one())]).expect("affine algebra")
    }

    /// `g ⊕ h` with the blocks placed diagonally.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let m = self.dim + o.dim;
        let mut e = Vec::new();
        for (a, b, c, v) in self.entries() {
            e.push((a, b, c, v));
        }
        for (a, b, c, v) in o.entries() {
            e.push((a + self.dim, b + self.dim, c + self.dim, v));
        }
        make_lie_algebra_sparse(m, &e).expect("direct sum of Lie algebras")
    }
}

fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Validates a dense `m × m × m` array indexed `f[a][b][c] = f^a_{bc}`.
pub fn make_lie_algebra(dim: usize, f: &[Vec<Vec<Rational>>]) -> Result<LieAlgebraData> {
    let shape_ok = f.len() == dim && f.iter().all(|r| r.len() == dim && r.iter().all(|s| s.len() == dim));
    if !shape_ok {
        return Err(Error::InvalidInput(format!("structure constants must have shape {dim}×{dim}×{dim}")));
    }
    let flat: Vec<Rational> = f.iter().flatten().flatten().cloned().collect();
    validate(LieAlgebraData { dim, f: flat })
}

/// Builds from sparse entries `(a, b, c, f^a_{bc})`; unlisted entries are zero.
/// Both `f^a_{bc}` and `f^a_{cb}` must be listed.
pub fn make_lie_algebra_sparse(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<LieAlgebraData> {
    let mut f = vec![Rational::zero(); dim * dim * dim];
    for (a, b, c, v) in entries {
        if *a >= dim || *b >= dim || *c >= dim {
            return Err(Error::InvalidInput(format!("structure constant index ({a},{b},{c}) out of range")));
        }
        f[(a * dim + b) * dim + c] += v;
    }
    validate(LieAlgebraData { dim, f })
}

fn validate(l: LieAlgebraData) -> Result<LieAlgebraData> {
    let m = l.dim;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if *l.f(a, b, c) != -l.f(a, c, b).clone() {
                    return Err(Error::InvalidLieAlgebra { kind: "antisymmetry", indices: vec![a, b, c] });
                }
            }
        }
    }
    for b in 0..m {
        for c in 0..m {
            for d in 0..m {
                for a in 0..m {
                    let mut s = Rational::zero();
                    for e in 0..m {
                        s += l.f(e, b, c) * l.f(a, e, d) + l.f(e, c, d) * l.f(a, e, b) + l.f(e, d, b) * l.f(a, e, c);
                    }
                    if !s.is_zero() {
                        return Err(Error::InvalidLieAlgebra { kind: "Jacobi identity", indices: vec![b, c, d] });
                    }
                }
            }
        }
    }
    Ok(l)
}

/// The Weil operators on a context whose `θ^a`, `Ω^a` are indexed by a
/// basis of `lie`. Manifold generators are left untouched.
#[derive(Clone, Debug)]
pub struct WeilAlgebra {
    pub lie: LieAlgebraData,
    pub d: Derivation,
    pub contractions: Vec<Derivation>,
    pub lie_derivatives: Vec<Derivation>,
}

pub fn make_weil_algebra(ctx: &Ctx, lie: &LieAlgebraData) -> Result<WeilAlgebra> {
    let m = lie.dim();
    if ctx.lie_dim != m {
        return Err(Error::InvalidInput(format!("context has {} Weil generators, algebra has dimension {m}", ctx.lie_dim)));
    }
    let th = |a| GradedElement::theta(ctx, a);
    let om = |a| GradedElement::omega(ctx, a);
    let c = |r: &Rational| GradedElement::constant(ctx, r.clone());
    let mut d = Derivation::zero(ctx, Parity::Odd, "d_W");
    for a in 0..m {
        // dθ^a = Ω^a - ½ f^a_{bc} θ^b θ^c
        let mut img = om(a);
        // dΩ^a = f^a_{bc} Ω^b θ^c
        let mut img_om = GradedElement::zero(ctx);
        for b in 0..m {
            for cc in 0..m {
                let f = lie.f(a, b, cc);
                if f.is_zero() {
                    continue;
                }
                img = img.sub(&c(&(f * frac(1, 2))).mul(&th(b))?.mul(&th(cc))?)?;
                img_om = img_om.add(&c(f).mul(&om(b))?.mul(&th(cc))?)?;
            }
        }
        d.set_theta(a, img);
        d.set_omega(a, img_om);
    }
    let mut contractions = Vec::new();
    let mut lie_derivatives = Vec::new();
    for a in 0..m {
        let mut i = Derivation::zero(ctx, Parity::Odd, &format!("ι_{}", a + 1));
        i.set_theta(a, GradedElement::one(ctx));
        contractions.push(i);
        lie_derivatives.push(coadjoint_derivation(ctx, lie, a));
    }
    Ok(WeilAlgebra { lie: lie.clone(), d: d.checked()?, contractions, lie_derivatives })
}

/// `L_a θ^b = f^b_{da} θ^d`, `L_a Ω^b = f^b_{ca} Ω^c`.
pub fn coadjoint_derivation(ctx: &Ctx, lie: &LieAlgebraData, a: usize) -> Derivation {
    let m = lie.dim();
    let mut l = Derivation::zero(ctx, Parity::Even, &format!("L_{}", a + 1));
    for b in 0..m {
        let mut t = GradedElement::zero(ctx);
        let mut o = GradedElement::zero(ctx);
        for e in 0..m {
            let f = lie.f(b, e, a);
            if f.is_zero() {
                continue;
            }
            t = t.add(&GradedElement::theta(ctx, e).scale(f)).expect("same context");
            o = o.add(&GradedElement::omega(ctx, e).scale(f)).expect("same context");
        }
        l.set_theta(b, t);
        l.set_omega(b, o);
    }
    l
}

/// Coadjoint action of basis element `a` on an element of the Weil generators' span.
pub fn coadjoint_action(ctx: &Ctx, lie: &LieAlgebraData, a: usize, x: &GradedElement) -> Result<GradedElement> {
    coadjoint_derivation(ctx, lie, a).apply(x)
}

/// `-(1/6) f_{abc} θ^a θ^b θ^c`, lowering the first index with the standard
/// basis metric (the Killing form up to scale for `su(2)`).
pub fn cartan_three_form(ctx: &Ctx, lie: &LieAlgebraData) -> Result<GradedElement> {
    let mut out = GradedElement::zero(ctx);
    for (a, b, c, f) in lie.entries() {
        let t = GradedElement::theta(ctx, a).mul(&GradedElement::theta(ctx, b))?.mul(&GradedElement::theta(ctx, c))?;
        out = out.add(&t.scale(&(f * frac(-1, 6))))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, AlgebraContext};

    #[test]
    fn standard_algebras_validate() {
        assert!(LieAlgebraData::abelian(1).is_abelian());
        assert_eq!(LieAlgebraData::su2().bracket(0, 1), vec![rat(0), rat(0), rat(1)]);
        assert_eq!(LieAlgebraData::affine().bracket(0, 1), vec![rat(1), rat(0)]);
    }

    #[test]
    fn antisymmetry_violation_names_indices() {
        let r = make_lie_algebra_sparse(2, &[(0, 0, 1, rat(1))]);
        assert_eq!(r, Err(Error::InvalidLieAlgebra { kind: "antisymmetry", indices: vec![0, 0, 1] }));
    }

    #[test]
    fn jacobi_violation_detected() {
        // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e3 fails Jacobi
        let e = [
            (2, 0, 1, rat(1)),
            (2, 1, 0, rat(-1)),
            (0, 1, 2, rat(1)),
            (0, 2, 1, rat(-1)),
            (2, 2, 0, rat(1)),
            (2, 0, 2, rat(-1)),
        ];
        assert!(matches!(make_lie_algebra_sparse(3, &e), Err(Error::InvalidLieAlgebra { kind: "Jacobi identity", .. })));
    }

    #[test]
    fn weil_differential_on_su2() {
        let ctx = AlgebraContext::torus(0, 3);
        let w = make_weil_algebra(&ctx, &LieAlgebraData::su2()).unwrap();
        // dθ¹ = Ω¹ - θ²θ³
        let t = |a| GradedElement::theta(&ctx, a);
        let expect = GradedElement::omega(&ctx, 0).sub(&t(1).mul(&t(2)).unwrap()).unwrap();
        assert_eq!(w.d.apply(&t(0)).unwrap(), expect);
        for a in 0..3 {
            assert!(w.d.apply(&w.d.apply(&t(a)).unwrap()).unwrap().is_zero());
            assert!(w.d.apply(&w.d.apply(&GradedElement::omega(&ctx, a)).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn cartan_formula_on_weil_generators() {
        let ctx = AlgebraContext::torus(0, 3);
        let w = make_weil_algebra(&ctx, &LieAlgebraData::su2()).unwrap();
        for a in 0..3 {
            let l = w.d.commutator(&w.contractions[a]).unwrap();
            for g in 0..3 {
                for x in [GradedElement::theta(&ctx, g), GradedElement::omega(&ctx, g)] {
                    assert_eq!(l.apply(&x).unwrap(), w.lie_derivatives[a].apply(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn coadjoint_on_omega_and_cartan_form() {
        let ctx = AlgebraContext::torus(0, 3);
        let su2 = LieAlgebraData::su2();
        // L_1 Ω² = f²_{c1} Ω^c = ε_{2 3 1} Ω³ = Ω³
        let r = coadjoint_action(&ctx, &su2, 0, &GradedElement::omega(&ctx, 1)).unwrap();
        assert_eq!(r, GradedElement::omega(&ctx, 2));
        let c3 = cartan_three_form(&ctx, &su2).unwrap();
        assert!(!c3.is_zero());
        for a in 0..3 {
            assert!(coadjoint_action(&ctx, &su2, a, &c3).unwrap().is_zero());
        }
    }
}
