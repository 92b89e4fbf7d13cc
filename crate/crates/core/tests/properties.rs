//! Algebraic invariants over random sparse elements.

use proptest::prelude::*;
use tweq_core::algebra::{koszul, AlgebraContext, Ctx, GradedElement};
use tweq_core::linalg::{axpy, kernel, rank, SparseVec};
use tweq_core::models::{instances, ModelContext};
use tweq_core::verifier::ProbeGen;

fn contexts() -> &'static [(Ctx, ModelContext)] {
    static CACHE: std::sync::OnceLock<Vec<(Ctx, ModelContext)>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| {
    [instances::circle_circle(), instances::t3_abelian(), instances::su2_ce()]
        .into_iter()
        .map(|d| {
            let m = ModelContext::new(d.unwrap()).unwrap();
            (m.ctx().clone(), m)
        })
        .collect()
    })
}

fn gen(ctx: &Ctx, seed: u64) -> ProbeGen {
    ProbeGen::new(ctx, seed, 6, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn addition_is_canonical(seed in any::<u64>(), which in 0usize..3) {
        let (ctx, _) = &contexts()[which];
        let mut g = gen(ctx, seed);
        let (x, y) = (g.element(true, true), g.element(true, true));
        prop_assert!(x.sub(&x).unwrap().is_zero());
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.add(&GradedElement::zero(ctx)).unwrap(), x.clone());
        prop_assert_eq!(x.add(&y).unwrap().sub(&y).unwrap(), x);
    }

    #[test]
    fn product_is_associative_and_unital(seed in any::<u64>(), which in 0usize..3) {
        let (ctx, _) = &contexts()[which];
        let mut g = gen(ctx, seed);
        let (x, y, z) = (g.element(true, true), g.element(true, true), g.element(true, true));
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(GradedElement::one(ctx).mul(&x).unwrap(), x.clone());
        let d = x.mul(&y.add(&z).unwrap()).unwrap();
        prop_assert_eq!(d, x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn product_is_graded_commutative(seed in any::<u64>(), which in 0usize..3) {
        let (ctx, _) = &contexts()[which];
        let mut g = gen(ctx, seed);
        let (x, y) = (g.monomial(true, true), g.monomial(true, true));
        let xy = x.mul(&y).unwrap();
        let yx = y.mul(&x).unwrap();
        let s = koszul(x.parity().unwrap(), y.parity().unwrap());
        prop_assert_eq!(xy, yx.scale(&s));
    }

    #[test]
    fn odd_elements_square_to_zero(seed in any::<u64>(), which in 0usize..3) {
        let (ctx, _) = &contexts()[which];
        let mut g = gen(ctx, seed);
        let x = g.monomial(true, false);
        if x.parity().unwrap().is_odd() {
            prop_assert!(x.mul(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn derivations_obey_leibniz(seed in any::<u64>(), which in 0usize..3) {
        let (ctx, m) = &contexts()[which];
        let mut g = gen(ctx, seed);
        let (x, y) = (g.monomial(true, true), g.element(true, true));
        let px = x.parity().unwrap();
        let mut ops = vec![m.weil_differential().unwrap()];
        for a in 0..m.dim() {
            ops.push(m.contraction(a).unwrap());
            ops.push(m.lie_derivative(a).unwrap());
        }
        for d in ops {
            let lhs = d.apply(&x.mul(&y).unwrap()).unwrap();
            let s = koszul(d.parity(), px);
            let rhs = d.apply(&x).unwrap().mul(&y).unwrap().add(&x.mul(&d.apply(&y).unwrap()).unwrap().scale(&s)).unwrap();
            prop_assert_eq!(lhs, rhs, "{}", d.name());
        }
    }

    #[test]
    fn operations_preserve_reality(seed in any::<u64>(), which in 0usize..3) {
        let (ctx, m) = &contexts()[which];
        let mut g = gen(ctx, seed);
        let (x, y) = (g.element(true, true), g.element(true, true));
        prop_assert!(x.check_real().is_ok());
        prop_assert!(x.mul(&y).unwrap().check_real().is_ok());
        prop_assert!(m.weil_differential().unwrap().apply(&x).unwrap().check_real().is_ok());
    }

    #[test]
    fn kernel_vectors_are_annihilated(cols in prop::collection::vec(prop::collection::btree_map(0usize..6, -3i64..=3, 0..4), 0..8)) {
        let images: Vec<SparseVec> = cols
            .into_iter()
            .map(|c| c.into_iter().filter(|(_, v)| *v != 0).map(|(k, v)| (k, tweq_core::rat(v))).collect())
            .collect();
        let ker = kernel(&images);
        prop_assert_eq!(ker.len() + rank(&images), images.len());
        for z in &ker {
            let mut acc = SparseVec::new();
            for (j, c) in z {
                axpy(&mut acc, c, &images[*j]);
            }
            prop_assert!(acc.is_empty());
        }
        prop_assert_eq!(rank(&ker), ker.len());
    }
}

#[test]
fn point_context_has_only_scalars() {
    let ctx = AlgebraContext::torus(0, 0);
    assert_eq!(ctx.form_count(), 1);
    let mut g = gen(&ctx, 1);
    let x = g.element(false, false);
    assert_eq!(x.degree().unwrap(), 0);
}
