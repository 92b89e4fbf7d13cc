use super::*;
use crate::algebra::{rat, GradedElement, Parity};
use crate::linalg::{dense_identity, dense_mul};
use crate::models::{instances, ModelContext, SignConvention};
use crate::Error;

fn extended(data: crate::Result<crate::models::ExtendedActionData>) -> ComplexSpec {
    let m = ModelContext::new(data.unwrap()).unwrap();
    ComplexSpec::extended(&m, SignConvention::Minus).unwrap()
}

#[test]
fn circle_circle_small_truncation_has_expected_basis() {
    let c = truncate(&extended(instances::circle_circle()), TruncationParams::new(2, 1)).unwrap();
    // f Ωʲ and g dθ Ωʲ with j ≤ 2 and f, g in {1, cos θ, sin θ}
    assert_eq!(c.dim(), 18);
    assert_eq!(c.parity_dims(), [9, 9]);
}

#[test]
fn circle_circle_level_cohomology() {
    let spec = extended(instances::circle_circle());
    for n in 0..4 {
        let c = truncate(&spec, TruncationParams::new(n, 2)).unwrap();
        let h = compute_cohomology(&c);
        assert_eq!(h.dims(), (1, 1), "level {n}");
        let ctx = c.ctx();
        let even = h.representative_elements(&c, Parity::Even);
        let odd = h.representative_elements(&c, Parity::Odd);
        assert_eq!(even[0], GradedElement::omega(ctx, 0).pow(n).unwrap());
        assert_eq!(odd[0], GradedElement::dtheta(ctx, 0));
    }
}

#[test]
fn rank_nullity_and_euler_characteristic() {
    let spec = extended(instances::circle_circle());
    let c = truncate(&spec, TruncationParams::new(3, 2).with_blocks(true)).unwrap();
    let h = compute_cohomology(&c);
    for b in &h.blocks {
        for p in &b.parts {
            assert_eq!(p.cycles_dim + p.image_rank, p.space_dim);
        }
        let euler = b.parts[0].dim() as i64 - b.parts[1].dim() as i64;
        assert_eq!(euler, b.parts[0].space_dim as i64 - b.parts[1].space_dim as i64);
    }
}

#[test]
fn blocks_reproduce_unblocked_ranks() {
    let spec = extended(instances::circle_circle());
    let p = TruncationParams::new(3, 3);
    let a = compute_cohomology(&truncate(&spec, p).unwrap());
    let b = compute_cohomology(&truncate(&spec, p.with_blocks(true)).unwrap());
    assert_eq!(a.dims(), b.dims());
    assert!(b.blocks.len() > 1);
}

#[test]
fn restriction_maps_and_limit() {
    let spec = extended(instances::circle_circle());
    let t = omega_tower(&spec, 6, TruncationParams::new(0, 3)).unwrap();
    for m in &t.maps {
        assert_eq!(m.matrix(Parity::Even), &vec![vec![rat(0)]]);
        assert_eq!(m.matrix(Parity::Odd), &dense_identity(1));
    }
    for p in [Parity::Even, Parity::Odd] {
        for n in 0..t.len() - 2 {
            let two = t.composite(n + 2, n, p);
            let composed = dense_mul(t.maps[n].matrix(p), t.maps[n + 1].matrix(p));
            assert_eq!(two, composed);
        }
    }
    let l = inverse_limit(&t);
    assert_eq!(l.ranks, [Some(0), Some(1)]);
    assert!(l.finitely_generated());
    assert_eq!(l.generators[1], vec![GradedElement::dtheta(t.levels[0].complex.ctx(), 0)]);
}

#[test]
fn identical_caps_restrict_to_identity() {
    let spec = extended(instances::circle_circle());
    let c = truncate(&spec, TruncationParams::new(2, 1)).unwrap();
    let h = compute_cohomology(&c);
    let m = restriction_map(&c, &h, &c, &h).unwrap();
    assert_eq!(m.matrix(Parity::Even), &dense_identity(1));
    assert_eq!(m.matrix(Parity::Odd), &dense_identity(1));
}

#[test]
fn larger_target_is_incompatible() {
    let spec = extended(instances::circle_circle());
    let lo = truncate(&spec, TruncationParams::new(1, 1)).unwrap();
    let hi = truncate(&spec, TruncationParams::new(2, 1)).unwrap();
    let (hl, hh) = (compute_cohomology(&lo), compute_cohomology(&hi));
    assert!(matches!(restriction_map(&lo, &hl, &hi, &hh), Err(Error::IncompatibleCaps(_))));
}

#[test]
fn free_rotation_limit() {
    let t = omega_tower(&extended(instances::free_rotation()), 5, TruncationParams::new(0, 2)).unwrap();
    let l = inverse_limit(&t);
    assert_eq!(l.ranks, [Some(1), Some(0)]);
}

#[test]
fn point_with_circle_group_does_not_stabilize() {
    let t = omega_tower(&extended(instances::point_circle()), 5, TruncationParams::new(0, 0)).unwrap();
    assert_eq!(t.dims(), (0..6).map(|n| (n + 1, 0)).collect::<Vec<_>>());
    for m in &t.maps {
        let e = m.matrix(Parity::Even);
        assert_eq!(crate::linalg::dense_rank(e), e.len());
    }
    let l = inverse_limit(&t);
    assert!(!l.stabilized[0]);
    assert!(!l.finitely_generated());
    assert_eq!(l.image_ranks[0], vec![1, 2, 3, 4, 5]);
    assert_eq!(l.slope(Parity::Even), 1);
}

#[test]
fn trivial_everything_gives_zero_differential() {
    let c = truncate(&extended(instances::point()), TruncationParams::new(3, 0)).unwrap();
    assert_eq!(c.dim(), 1);
    assert!(c.differential_column(0).is_empty());
    assert_eq!(compute_cohomology(&c).dims(), (1, 0));
}

#[test]
fn mode_cap_violation_names_generator() {
    let spec = extended(instances::t3_abelian());
    match truncate(&spec, TruncationParams::new(1, 1)) {
        Err(Error::ModeCapExceeded { generator, required }) => {
            assert_eq!(required, 2);
            assert!(generator.contains("d_{g,δ}"), "{generator}");
        }
        other => panic!("expected a cap error, got {other:?}"),
    }
}

#[test]
fn s1_cp_formal_cohomology() {
    for k in 1..=4 {
        let spec = extended(instances::s1_cp(k));
        let c = truncate(&spec, TruncationParams::new(0, 0)).unwrap();
        let h = compute_cohomology(&c);
        assert_eq!(h.dims(), (1, 1));
        let ctx = c.ctx();
        let top = GradedElement::basis(ctx, if k == 1 { "x".to_string() } else { format!("x^{k}") }.as_str()).unwrap();
        assert_eq!(h.representative_elements(&c, Parity::Even), vec![top]);
        assert_eq!(h.representative_elements(&c, Parity::Odd), vec![GradedElement::basis(ctx, "dth").unwrap()]);
    }
}

#[test]
fn s1_cp_tower_across_k() {
    let cs = (1..=5)
        .map(|k| truncate(&extended(instances::s1_cp(k)), TruncationParams::new(0, 0)))
        .collect::<crate::Result<Vec<_>>>()
        .unwrap();
    let t = Tower::new(cs).unwrap();
    let l = inverse_limit(&t);
    assert_eq!(l.ranks, [Some(0), Some(1)]);
    assert_eq!(l.generators[1][0].to_string(), "dth");
}

#[test]
fn uncompleted_circle_circle() {
    let spec = extended(instances::circle_circle());
    for k in 1..=3u32 {
        let u = uncompleted_cohomology(&spec, TruncationParams::new(3, k).with_blocks(true)).unwrap();
        assert!(u.stable);
        assert_eq!(u.last().cohomology.dims(), (0, 2 * k as usize + 1));
        let act = u.actions[0].as_ref().unwrap();
        for b in act.blocks.iter().filter(|b| b.parity == Parity::Odd) {
            let j = b.block.as_ref().unwrap()[0];
            let expect = if j == 0 { crate::poly::Poly::from_ints(&[0, 1]) } else { crate::poly::Poly::from_ints(&[j * j, 0, 1]) };
            assert_eq!(b.minimal_polynomial, expect);
        }
    }
}

#[test]
fn omega_acts_as_derivative_on_uncompleted_classes() {
    let spec = extended(instances::circle_circle());
    let u = uncompleted_cohomology(&spec, TruncationParams::new(3, 2).with_blocks(true)).unwrap();
    let level = u.action_level();
    let a = &u.actions[0].as_ref().unwrap().matrices[1];
    let ctx = u.complex.ctx().clone();
    for (j, z) in level.cohomology.representatives(Parity::Odd).iter().enumerate() {
        let x = u.complex.element_of(z);
        // x = g dθ; oracle: ∂g/∂θ dθ
        let (key, g) = x.terms().next().map(|(k, g)| (k.clone(), g.clone())).unwrap();
        assert_eq!(x.terms().count(), 1);
        let dx = GradedElement::monomial(&ctx, key, g.partial(0));
        let cls = u.class_of_element(level, Parity::Odd, &dx).unwrap().unwrap();
        for (i, row) in a.iter().enumerate() {
            assert_eq!(row[j], cls.get(&i).cloned().unwrap_or_default());
        }
    }
}

#[test]
fn comparison_flags() {
    let cc = completed_vs_tensored_check(&extended(instances::circle_circle()), 5, TruncationParams::new(0, 2).with_blocks(true)).unwrap();
    assert!(!cc.equal);
    assert_eq!(cc.parities[1].tensored, RankProfile::InfinitelyGenerated);
    assert_eq!(cc.parities[1].completed, RankProfile::Finite(1));
    let pt = completed_vs_tensored_check(&extended(instances::point_circle()), 5, TruncationParams::new(0, 0)).unwrap();
    assert!(pt.equal, "{:?}", pt.parities);
    assert_eq!(pt.parities[0].completed, RankProfile::FormalSeries { slope: 1 });
    let triv = completed_vs_tensored_check(&extended(instances::point()), 5, TruncationParams::new(0, 0)).unwrap();
    assert!(triv.equal);
    let free = completed_vs_tensored_check(&extended(instances::free_rotation()), 5, TruncationParams::new(0, 1)).unwrap();
    assert!(free.equal, "{:?}", free.parities);
}

#[test]
fn completed_omega_action_is_zero_on_limit_class() {
    let spec = extended(instances::circle_circle());
    let c = truncate(&spec, TruncationParams::new(4, 2)).unwrap();
    let h = compute_cohomology(&c);
    let m = module_action(&c, &h, &GradedElement::omega(c.ctx(), 0)).unwrap();
    assert_eq!(m.matrix(Parity::Odd), &vec![vec![rat(0)]]);
}

#[test]
fn point_with_circle_omega_acts_freely() {
    let spec = extended(instances::point_circle());
    let c = truncate(&spec, TruncationParams::new(4, 0)).unwrap();
    let h = compute_cohomology(&c);
    let m = module_action(&c, &h, &GradedElement::omega(c.ctx(), 0)).unwrap();
    // shift Ωʲ ↦ Ωʲ⁺¹ with the top power killed
    assert_eq!(crate::linalg::dense_rank(m.matrix(Parity::Even)), 4);
}

#[test]
fn invariants_of_rotation_are_constant_coefficient() {
    let m = ModelContext::new(instances::free_rotation().unwrap()).unwrap();
    let inv = invariant_subspace(&m, TruncationParams::new(1, 2)).unwrap();
    assert_eq!(inv.len(), 4);
    assert!(inv.iter().all(|x| x.max_mode() == 0));
}

#[test]
fn su2_invariant_forms() {
    let m = ModelContext::new(instances::su2_ce_single().unwrap()).unwrap();
    let inv = invariant_subspace(&m, TruncationParams::new(0, 0)).unwrap();
    let degs: Vec<u32> = inv.iter().map(|x| x.degree().unwrap()).collect();
    assert_eq!(degs, vec![0, 3]);
}

#[test]
fn basic_forms_of_abelian_weil_algebra_are_polynomials_in_omega() {
    let ctx = crate::algebra::AlgebraContext::torus(0, 2);
    let g = crate::models::Geometry::new(ctx.clone(), crate::LieAlgebraData::abelian(2)).unwrap();
    let z = GradedElement::zero(&ctx);
    let data = crate::models::ExtendedActionData::new(g.clone(), vec![g.zero_field(), g.zero_field()], vec![z.clone(), z.clone()], z).unwrap();
    let m = ModelContext::new(data).unwrap();
    let basic = basic_subspace(&m, TruncationParams::new(2, 0)).unwrap();
    assert_eq!(basic.len(), 6);
    assert!(basic.iter().all(|x| !x.has_theta()));
}

#[test]
fn weil_three_form_is_basic_in_truncation() {
    let m = ModelContext::new(instances::circle_circle().unwrap()).unwrap();
    let tf = crate::models::extended_to_twisted(&m).unwrap();
    let bold = crate::models::weil_three_form(&m, &tf).unwrap();
    let basic = basic_subspace(&m, TruncationParams::new(1, 0)).unwrap();
    let c = ComplexSpec::weil(&m, &bold).unwrap();
    let tc = truncate(&c, TruncationParams::new(1, 0)).unwrap();
    assert_eq!(tc.dim(), basic.len());
    assert!(!tc.coords_of(&bold).unwrap().is_empty());
}
