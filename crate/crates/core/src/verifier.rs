//! Randomized, exactly checked identity suites with reproducible seeds.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    exp_wedge, koszul, rat, Ctx, Derivation, GradedElement, MonoKey, Operator, Rational, TrigPoly, Wave,
};
use crate::cohomology::{invariant_subspace, omega_tower, operator_identity_residuals, ComplexSpec, TruncationParams};
use crate::error::{Error, Result};
use crate::models::{
    cartan_map_j, cartan_map_j_ordered, check_basic_closed, extended_to_twisted, instances, invariant_splitting,
    transform_action, validate_extended_action, weil_three_form, ExtendedActionData, ModelContext, Section,
    SignConvention, TorusRotation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    WeilIdentities,
    BracketRelations,
    ExtendedSquare,
    PropositionJ,
    Basicness,
    BField,
    OperatorIdentity,
    Averaging,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::WeilIdentities,
        Suite::BracketRelations,
        Suite::ExtendedSquare,
        Suite::PropositionJ,
        Suite::Basicness,
        Suite::BField,
        Suite::OperatorIdentity,
        Suite::Averaging,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::WeilIdentities => "weil-identities",
            Suite::BracketRelations => "bracket-relations",
            Suite::ExtendedSquare => "extended-square",
            Suite::PropositionJ => "proposition-j",
            Suite::Basicness => "basicness",
            Suite::BField => "b-field",
            Suite::OperatorIdentity => "operator-identity",
            Suite::Averaging => "averaging",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSuiteConfig {
    pub seed: u64,
    pub probes: usize,
    /// Bound on the total degree of random probes.
    pub max_degree: u32,
    /// Bound on `|k|_∞` of random Fourier modes.
    pub max_mode: i64,
    pub suites: Vec<Suite>,
}

impl Default for CheckSuiteConfig {
    fn default() -> Self {
        Self { seed: 0x5eed, probes: 200, max_degree: 4, max_mode: 2, suites: Suite::ALL.to_vec() }
    }
}

impl CheckSuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.probes == 0 {
            return Err(Error::InvalidInput("probe count must be at least 1".into()));
        }
        Ok(())
    }
}

/// The probe that exposed a failure and what was left over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub probe: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: Suite,
    pub instance: String,
    pub check: String,
    pub probes: usize,
    pub passed: bool,
    pub witness: Option<Witness>,
}

/// A named action to run suites against.
#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub name: String,
    pub data: ExtendedActionData,
}

impl NamedInstance {
    pub fn new(name: &str, data: ExtendedActionData) -> Self {
        Self { name: name.into(), data }
    }
}

/// The bundled valid instances: abelian with `m = 1, 2`, a free rotation,
/// and diagonal `su(2)` on two Chevalley–Eilenberg copies.
pub fn default_instances() -> Result<Vec<NamedInstance>> {
    Ok(vec![
        NamedInstance::new("circle-circle", instances::circle_circle()?),
        NamedInstance::new("free-rotation", instances::free_rotation()?),
        NamedInstance::new("t2-rotation", instances::t2_rotation()?),
        NamedInstance::new("t3-abelian", instances::t3_abelian()?),
        NamedInstance::new("su2-ce", instances::su2_ce()?),
    ])
}

/// Random sparse elements with small integer coefficients.
pub struct ProbeGen {
    rng: ChaCha8Rng,
    ctx: Ctx,
    max_degree: u32,
    max_mode: i64,
}

impl ProbeGen {
    pub fn new(ctx: &Ctx, seed: u64, max_degree: u32, max_mode: i64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), ctx: ctx.clone(), max_degree, max_mode }
    }

    pub fn small(&mut self) -> Rational {
        loop {
            let c: i64 = self.rng.random_range(-2..=2);
            if c != 0 {
                return rat(c);
            }
        }
    }

    pub fn coefficient(&mut self) -> TrigPoly {
        let n = self.ctx.nvars();
        let mode: Vec<i64> = (0..n).map(|_| self.rng.random_range(-self.max_mode..=self.max_mode)).collect();
        let wave = if mode.iter().all(|k| *k == 0) || self.rng.random_bool(0.5) { Wave::Cos } else { Wave::Sin };
        TrigPoly::wave(&mode, wave).scale(&self.small())
    }

    fn key(&mut self, theta: bool, omega: bool, forms: bool) -> MonoKey {
        let m = self.ctx.lie_dim;
        loop {
            let form = if forms { self.rng.random_range(0..self.ctx.form_count()) as u32 } else { 0 };
            let th = if theta && m > 0 { self.rng.random_range(0..1u32 << m) } else { 0 };
            let mut om = vec![0u32; m];
            if omega && m > 0 {
                for _ in 0..self.rng.random_range(0..=2) {
                    om[self.rng.random_range(0..m)] += 1;
                }
            }
            let key = MonoKey { form, theta: th, omega: om };
            let deg = self.ctx.form_degree(form) + th.count_ones() + 2 * key.omega_degree();
            if deg <= self.max_degree {
                return key;
            }
        }
    }

    /// A single term, hence homogeneous.
    pub fn monomial(&mut self, theta: bool, omega: bool) -> GradedElement {
        let k = self.key(theta, omega, true);
        let c = self.coefficient();
        GradedElement::monomial(&self.ctx, k, c)
    }

    /// An element with 1 to 3 terms; `theta`/`omega` allow those factors.
    pub fn element(&mut self, theta: bool, omega: bool) -> GradedElement {
        let mut e = GradedElement::zero(&self.ctx);
        for _ in 0..self.rng.random_range(1..=3) {
            let k = self.key(theta, omega, true);
            e.add_term(k, self.coefficient());
        }
        e
    }

    /// A manifold form of the given degree (zero if there is none).
    pub fn form_of_degree(&mut self, degree: u32) -> GradedElement {
        let forms: Vec<u32> = (0..self.ctx.form_count() as u32).filter(|f| self.ctx.form_degree(*f) == degree).collect();
        let mut e = GradedElement::zero(&self.ctx);
        if forms.is_empty() {
            return e;
        }
        for _ in 0..self.rng.random_range(1..=2) {
            let f = forms[self.rng.random_range(0..forms.len())];
            let key = MonoKey { form: f, ..MonoKey::unit(self.ctx.lie_dim) };
            e.add_term(key, self.coefficient());
        }
        e
    }

    pub fn lie_vector(&mut self) -> Vec<Rational> {
        (0..self.ctx.lie_dim).map(|_| rat(self.rng.random_range(-2..=2))).collect()
    }

    /// Sparse combination of 1 to 3 basis elements.
    pub fn combination(&mut self, basis: &[GradedElement]) -> Result<GradedElement> {
        let mut e = GradedElement::zero(&self.ctx);
        if basis.is_empty() {
            return Ok(e);
        }
        for _ in 0..self.rng.random_range(1..=3) {
            let b = &basis[self.rng.random_range(0..basis.len())];
            e = e.add(&b.scale(&self.small()))?;
        }
        Ok(e)
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }
}

/// Per-check accumulation: first failure is kept as the witness.
struct Tally {
    suite: Suite,
    instance: String,
    checks: Vec<(String, usize, Option<Witness>)>,
}

impl Tally {
    fn new(suite: Suite, instance: &str) -> Self {
        Self { suite, instance: instance.into(), checks: Vec::new() }
    }

    fn record(&mut self, check: &str, probe: &dyn fmt::Display, residual: Result<GradedElement>) {
        let idx = match self.checks.iter().position(|c| c.0 == check) {
            Some(i) => i,
            None => {
                self.checks.push((check.into(), 0, None));
                self.checks.len() - 1
            }
        };
        let entry = &mut self.checks[idx];
        entry.1 += 1;
        let bad = match residual {
            Ok(r) if r.is_zero() => None,
            Ok(r) => Some(r.to_string()),
            Err(e) => Some(format!("error: {e}")),
        };
        if let (Some(res), None) = (bad, &entry.2) {
            entry.2 = Some(Witness { probe: probe.to_string(), residual: res });
        }
    }

    fn flag(&mut self, check: &str, ok: std::result::Result<(), String>) {
        let r = match ok {
            Ok(()) => Ok(GradedElement::zero(&crate::algebra::AlgebraContext::torus(0, 0))),
            Err(e) => Err(Error::Internal(e)),
        };
        self.record(check, &"-", r);
    }

    fn finish(self) -> Vec<CheckResult> {
        self.checks
            .into_iter()
            .map(|(check, probes, witness)| CheckResult {
                suite: self.suite,
                instance: self.instance.clone(),
                check,
                probes,
                passed: witness.is_none(),
                witness,
            })
            .collect()
    }
}

fn seed_for(base: u64, suite: Suite, instance: usize) -> u64 {
    let s = Suite::ALL.iter().position(|x| *x == suite).unwrap_or(0) as u64;
    base ^ (s.wrapping_mul(0x9e37_79b9_7f4a_7c15)) ^ ((instance as u64 + 1).wrapping_mul(0xbf58_476d_1ce4_e5b9))
}

/// Runs every configured suite on every instance. Deterministic in the seed.
pub fn run_suite(config: &CheckSuiteConfig, instances: &[NamedInstance]) -> Result<Vec<CheckResult>> {
    config.validate()?;
    let models: Vec<ModelContext> =
        instances.iter().map(|i| ModelContext::new(i.data.clone())).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &suite in &config.suites {
        if suite == Suite::Averaging {
            let mut t = Tally::new(suite, "t2-first-factor");
            averaging_suite(config, &mut t, seed_for(config.seed, suite, 0));
            out.extend(t.finish());
        }
        for (idx, (inst, model)) in instances.iter().zip(&models).enumerate() {
            let mut t = Tally::new(suite, &inst.name);
            let mut g = ProbeGen::new(model.ctx(), seed_for(config.seed, suite, idx + 1), config.max_degree, config.max_mode);
            match suite {
                Suite::WeilIdentities => weil_suite(config, model, &mut g, &mut t),
                Suite::BracketRelations => bracket_suite(config, model, &mut g, &mut t),
                Suite::ExtendedSquare => square_suite(config, model, &mut g, &mut t),
                Suite::PropositionJ => j_suite(config, model, &mut g, &mut t),
                Suite::Basicness => basic_suite(config, model, &mut g, &mut t),
                Suite::BField => bfield_suite(config, model, &mut g, &mut t),
                Suite::OperatorIdentity => operator_suite(config, model, &mut g, &mut t),
                Suite::Averaging => rotation_averaging(config, model, &mut g, &mut t),
            }
            out.extend(t.finish());
        }
    }
    Ok(out)
}

fn op(d: Derivation) -> Operator {
    Operator::from_derivation(d)
}

/// `[A, B] x` from the cached images `A x` and `B x`.
fn bracket_on(a: &Operator, ax: &GradedElement, b: &Operator, bx: &GradedElement) -> Result<GradedElement> {
    let mut r = a.apply(bx)?;
    r.add_scaled(&b.apply(ax)?, &-koszul(a.parity(), b.parity()))?;
    Ok(r)
}

fn combine(images: &[GradedElement], coeffs: &[Rational], ctx: &Ctx) -> Result<GradedElement> {
    let mut out = GradedElement::zero(ctx);
    for (x, c) in images.iter().zip(coeffs) {
        out.add_scaled(x, c)?;
    }
    Ok(out)
}

fn weil_suite(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let run = || -> Result<(Operator, Vec<Operator>, Vec<Operator>)> {
        let d = op(model.weil_differential()?);
        let i = (0..model.dim()).map(|a| model.contraction(a).map(op)).collect::<Result<Vec<_>>>()?;
        let l = (0..model.dim()).map(|a| model.lie_derivative(a).map(op)).collect::<Result<Vec<_>>>()?;
        Ok((d, i, l))
    };
    let (d, iota, lie) = match run() {
        Ok(x) => x,
        Err(e) => return t.flag("construct operators", Err(e.to_string())),
    };
    let m = model.dim();
    let ctx = model.ctx();
    for _ in 0..cfg.probes {
        let x = g.element(true, true);
        let images = (|| -> Result<_> {
            let dx = d.apply(&x)?;
            let ix = iota.iter().map(|o| o.apply(&x)).collect::<Result<Vec<_>>>()?;
            let lx = lie.iter().map(|o| o.apply(&x)).collect::<Result<Vec<_>>>()?;
            Ok((dx, ix, lx))
        })();
        let (dx, ix, lx) = match images {
            Ok(v) => v,
            Err(e) => {
                t.record("d² = 0", &x, Err(e));
                continue;
            }
        };
        t.record("d² = 0", &x, d.apply(&dx));
        for a in 0..m {
            t.record("[d, ι_a] = L_a", &x, bracket_on(&d, &dx, &iota[a], &ix[a]).and_then(|r| r.sub(&lx[a])));
            t.record("[d, L_a] = 0", &x, bracket_on(&d, &dx, &lie[a], &lx[a]));
            for b in 0..m {
                let br = model.lie().bracket(a, b);
                t.record("[ι_a, ι_b] = 0", &x, bracket_on(&iota[a], &ix[a], &iota[b], &ix[b]));
                t.record(
                    "[L_a, ι_b] = ι_[a,b]",
                    &x,
                    bracket_on(&lie[a], &lx[a], &iota[b], &ix[b]).and_then(|r| r.sub(&combine(&ix, &br, ctx)?)),
                );
                t.record(
                    "[L_a, L_b] = L_[a,b]",
                    &x,
                    bracket_on(&lie[a], &lx[a], &lie[b], &lx[b]).and_then(|r| r.sub(&combine(&lx, &br, ctx)?)),
                );
            }
        }
    }
}

fn bracket_suite(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let data = &model.action;
    let geo = &data.geometry;
    let dh = match model.twisted_de_rham() {
        Ok(x) => x,
        Err(e) => return t.flag("construct d_H", Err(e.to_string())),
    };
    let de_rham = geo.de_rham();
    for _ in 0..cfg.probes {
        let (u, v) = (g.lie_vector(), g.lie_vector());
        let x = g.element(false, false);
        let probe = format!("x = {x}, u = {u:?}, v = {v:?}");
        let res = (|| -> Result<Vec<(&'static str, GradedElement)>> {
            let sx = data.delta_of(&u)?;
            let sy = data.delta_of(&v)?;
            let br: Section = geo.courant_bracket(&sx, &sy, &data.h)?;
            let (ix, iy, ib) =
                (model.section_contraction(&sx)?, model.section_contraction(&sy)?, model.section_contraction(&br)?);
            let (lx, ly, lb) = (
                model.section_lie_derivative(&sx)?,
                model.section_lie_derivative(&sy)?,
                model.section_lie_derivative(&br)?,
            );
            let (dx, ixx, iyx, lxx, lyx) = (dh.apply(&x)?, ix.apply(&x)?, iy.apply(&x)?, lx.apply(&x)?, ly.apply(&x)?);
            let a = de_rham.apply(&sx.form)?.sub(&geo.contraction(&sx.vector)?.apply(&data.h)?)?;
            let membership = de_rham.apply(&a.add(&geo.contraction(&sx.vector)?.apply(&data.h)?)?)?;
            Ok(vec![
                ("[d_H, ι_X] = L_X", bracket_on(&dh, &dx, &ix, &ixx)?.sub(&lxx)?),
                ("[L_X, L_Y] = L_[X,Y]", bracket_on(&lx, &lxx, &ly, &lyx)?.sub(&lb.apply(&x)?)?),
                ("[ι_X, ι_Y] = 0", bracket_on(&ix, &ixx, &iy, &iyx)?),
                ("[L_X, ι_Y] = ι_[X,Y]", bracket_on(&lx, &lxx, &iy, &iyx)?.sub(&ib.apply(&x)?)?),
                ("[d_H, L_X] = 0", bracket_on(&dh, &dx, &lx, &lxx)?),
                ("[d_H, d_H] = 0", bracket_on(&dh, &dx, &dh, &dx)?),
                ("d(A + ι_X H) = 0", membership),
                ("isotropy ⟨X, Y⟩ = 0", geo.pairing(&sx, &sy)?),
            ])
        })();
        match res {
            Ok(rs) => {
                for (name, r) in rs {
                    t.record(name, &probe, Ok(r));
                }
            }
            Err(e) => t.record("bracket evaluation", &probe, Err(e)),
        }
    }
}

fn square_suite(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let (minus, plus) = match (
        model.extended_differential(SignConvention::Minus),
        model.extended_differential(SignConvention::Plus),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return t.flag("construct d_{g,δ}", Err(e.to_string())),
    };
    for _ in 0..cfg.probes {
        let x = g.element(false, true);
        t.record(
            "(d_{g,δ})² = −Ω^a L_{δ(a)}",
            &x,
            minus.apply(&x).and_then(|y| minus.apply(&y)).and_then(|y| y.sub(&model.extended_square_expected(&x)?)),
        );
        t.record(
            "sign switch: σ d₊ σ = d₋",
            &x,
            ModelContext::conjugate_by_flip(&plus, &x).and_then(|y| y.sub(&minus.apply(&x)?)),
        );
    }
}

/// Invariant probes: combinations of a truncated invariant basis.
fn invariant_basis(model: &ModelContext) -> Result<Vec<GradedElement>> {
    let cap = if model.ctx().is_torus() { 2 } else { 1 };
    invariant_subspace(model, TruncationParams::new(cap, 2))
}

fn j_suite(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let setup = (|| -> Result<_> {
        let tf = extended_to_twisted(model)?;
        let calh = tf.element()?;
        let bold = weil_three_form(model, &tf)?;
        let dgh = model.twisted_cartan_differential(&calh)?;
        let dbold = model.weil_twisted_differential(&bold)?;
        Ok((calh, bold, dgh, dbold, invariant_basis(model)?))
    })();
    let (calh, bold, dgh, dbold, basis) = match setup {
        Ok(x) => x,
        Err(e) => return t.flag("j(𝓗) = 𝐇", Err(e.to_string())),
    };
    t.record("j(𝓗) = 𝐇", &calh, cartan_map_j(model, &calh).and_then(|j| j.sub(&bold)));
    for _ in 0..cfg.probes {
        let x = match g.combination(&basis) {
            Ok(x) => x,
            Err(e) => return t.record("invariant probe", &"-", Err(e)),
        };
        t.record(
            "j(d_{g,𝓗} x) = d_𝐇 j(x)",
            &x,
            dgh.apply(&x)
                .and_then(|y| cartan_map_j(model, &y))
                .and_then(|l| l.sub(&dbold.apply(&cartan_map_j(model, &x)?)?)),
        );
        let order = g.permutation(model.dim());
        t.record(
            "j independent of factor order",
            &format!("{x} with order {order:?}"),
            cartan_map_j_ordered(model, &x, &order).and_then(|y| y.sub(&cartan_map_j(model, &x)?)),
        );
    }
}

fn basic_suite(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let bold = extended_to_twisted(model).and_then(|tf| weil_three_form(model, &tf));
    match &bold {
        Ok(b) => t.flag("ι_a 𝐇 = L_a 𝐇 = d𝐇 = 0", check_basic_closed(model, b).map_err(|e| e.to_string())),
        Err(e) => t.flag("ι_a 𝐇 = L_a 𝐇 = d𝐇 = 0", Err(e.to_string())),
    }
    let setup = (|| -> Result<_> {
        let iota = (0..model.dim()).map(|a| model.contraction(a).map(op)).collect::<Result<Vec<_>>>()?;
        let lie = (0..model.dim()).map(|a| model.lie_derivative(a).map(op)).collect::<Result<Vec<_>>>()?;
        Ok((crate::cohomology::basic_subspace(model, TruncationParams::new(1, 1))?, iota, lie))
    })();
    let (basis, iota, lie) = match setup {
        Ok(b) => b,
        Err(e) => return t.flag("basic subspace", Err(e.to_string())),
    };
    for _ in 0..cfg.probes {
        let x = match g.combination(&basis) {
            Ok(x) => x,
            Err(e) => return t.record("basic probe", &"-", Err(e)),
        };
        for a in 0..model.dim() {
            t.record("ι_a x = 0 on basic probes", &x, iota[a].apply(&x));
            t.record("L_a x = 0 on basic probes", &x, lie[a].apply(&x));
        }
        if let Ok(b) = &bold {
            let prod = b.mul(&x);
            for a in 0..model.dim() {
                t.record("𝐇 x is basic", &x, prod.clone().and_then(|p| iota[a].apply(&p)));
            }
        }
    }
}

fn bfield_suite(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let data = &model.action;
    for _ in 0..cfg.probes {
        let b = g.form_of_degree(2);
        let x = g.element(false, true);
        let probe = format!("B = {b}, x = {x}");
        let res = (|| -> Result<GradedElement> {
            let moved = model.with_action(transform_action(data, &b)?)?;
            let d = model.extended_differential(SignConvention::Minus)?;
            let d2 = moved.extended_differential(SignConvention::Minus)?;
            let e = exp_wedge(&b.neg())?;
            e.mul(&d.apply(&x)?)?.sub(&d2.apply(&e.mul(&x)?)?)
        })();
        t.record("e^{−B} d_{g,δ} = d_{g,δ'} e^{−B}", &probe, res);
        let valid = transform_action(data, &b)
            .and_then(|d| validate_extended_action(&d))
            .map(|r| r.failures().map(|f| f.name.clone()).collect::<Vec<_>>());
        match valid {
            Ok(f) if f.is_empty() => t.record("transformed action validates", &probe, Ok(GradedElement::zero(model.ctx()))),
            Ok(f) => t.record("transformed action validates", &probe, Err(Error::Internal(f.join(", ")))),
            Err(e) => t.record("transformed action validates", &probe, Err(e)),
        }
    }
    // Rank invariance needs a truncatable model, hence a constant B.
    let n = model.ctx().nvars();
    if !model.ctx().is_torus() {
        return;
    }
    let mut b = GradedElement::zero(model.ctx());
    for i in 0..n {
        for j in i + 1..n {
            let f = GradedElement::dtheta(model.ctx(), i).mul(&GradedElement::dtheta(model.ctx(), j));
            if let Ok(f) = f {
                b = b.add(&f.scale(&g.small())).unwrap_or(b);
            }
        }
    }
    let probe = format!("constant B = {b}");
    let params = TruncationParams::new(0, 1);
    let ranks = |m: &ModelContext| -> Result<Vec<(usize, usize)>> {
        Ok(omega_tower(&ComplexSpec::extended(m, SignConvention::Minus)?, 3, params)?.dims())
    };
    let before = ranks(model);
    if matches!(before, Err(Error::ModeCapExceeded { .. })) {
        return;
    }
    let after = transform_action(data, &b).and_then(ModelContext::new).and_then(|m| ranks(&m));
    let r = match (before, after) {
        (Ok(x), Ok(y)) if x == y => Ok(GradedElement::zero(model.ctx())),
        (Ok(x), Ok(y)) => Err(Error::Internal(format!("ranks {x:?} became {y:?}"))),
        (Err(e), _) | (_, Err(e)) => Err(e),
    };
    t.record("cohomology ranks invariant under B", &probe, r);
}

fn operator_suite(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let calh = match extended_to_twisted(model).and_then(|tf| tf.element()) {
        Ok(h) => h,
        Err(e) => return t.flag("invariant splitting", Err(e.to_string())),
    };
    let params = match (model.ctx().is_torus(), model.ctx().nvars()) {
        (false, _) => TruncationParams::new(2, 0),
        (true, 0 | 1) => TruncationParams::new(4, 3),
        (true, _) => TruncationParams::new(2, 2),
    };
    match operator_identity_residuals(model, &calh, params) {
        Ok(bad) if bad.is_empty() => t.record("d_{g,δ̄} = d_{g,𝓗̄} on invariant basis", &"basis", Ok(GradedElement::zero(model.ctx()))),
        Ok(bad) => t.record("d_{g,δ̄} = d_{g,𝓗̄} on invariant basis", &bad[0].0, Ok(bad[0].1.clone())),
        Err(e) => t.record("d_{g,δ̄} = d_{g,𝓗̄} on invariant basis", &"basis", Err(e)),
    }
    let ops = model
        .extended_differential(SignConvention::Minus)
        .and_then(|a| Ok((a, model.twisted_cartan_differential(&calh)?)));
    let (a, b) = match ops {
        Ok(x) => x,
        Err(e) => return t.flag("construct differentials", Err(e.to_string())),
    };
    for _ in 0..cfg.probes {
        let x = g.element(false, true);
        t.record("d_{g,δ̄} = d_{g,𝓗̄} on random probes", &x, a.apply(&x).and_then(|y| y.sub(&b.apply(&x)?)));
    }
}

/// Rotations read off the instance: random `B₀` gives the cocycle
/// `α = B₀ − λ^*B₀`, whose splitting must satisfy the cocycle identity.
fn rotation_averaging(cfg: &CheckSuiteConfig, model: &ModelContext, g: &mut ProbeGen, t: &mut Tally) {
    let Ok(rot) = TorusRotation::from_action(&model.action) else { return };
    if rot.n < 2 {
        return;
    }
    let pctx = rot.parametrized_ctx();
    for _ in 0..cfg.probes.min(50) {
        let b0 = g.form_of_degree(2);
        let probe = format!("B₀ = {b0}");
        let res = (|| -> Result<GradedElement> {
            let b0 = rot.embed(&b0, &pctx)?;
            let alpha = rot.coboundary(&b0)?;
            let b = invariant_splitting(&rot, &alpha)?;
            rot.cocycle_residual(&alpha, &b)
        })();
        t.record("α_g + λ_g^*B − B = 0", &probe, res);
    }
}

/// `S¹` rotating the first factor of `T²`.
fn averaging_suite(cfg: &CheckSuiteConfig, t: &mut Tally, seed: u64) {
    let rot = TorusRotation::new(2, vec![vec![1, 0]]).expect("valid weights");
    let pctx = rot.parametrized_ctx();
    let mut g = ProbeGen::new(&crate::algebra::AlgebraContext::torus(2, 0), seed, cfg.max_degree, cfg.max_mode);
    for _ in 0..cfg.probes {
        let b0 = g.form_of_degree(2);
        let probe = format!("B₀ = {b0}");
        let res = (|| -> Result<(GradedElement, GradedElement)> {
            let lifted = rot.embed(&b0, &pctx)?;
            let alpha = rot.coboundary(&lifted)?;
            let b = invariant_splitting(&rot, &alpha)?;
            let diff = b.sub(&lifted)?;
            Ok((rot.cocycle_residual(&alpha, &b)?, rot.pullback(&diff).sub(&diff)?))
        })();
        match res {
            Ok((r, inv)) => {
                t.record("α_g + λ_g^*B − B = 0", &probe, Ok(r));
                t.record("B − B₀ is invariant", &probe, Ok(inv));
            }
            Err(e) => t.record("α_g + λ_g^*B − B = 0", &probe, Err(e)),
        }
    }
    // (cos h − 1) dθ₁₂ is not a cocycle: the splitting must refuse it.
    let a = (|| -> Result<GradedElement> {
        let f = TrigPoly::cos(&[0, 0, 1]).sub(&TrigPoly::one(3));
        GradedElement::function(&pctx, f).mul(&GradedElement::dtheta(&pctx, 0))?.mul(&GradedElement::dtheta(&pctx, 1))
    })();
    let r = match a.and_then(|a| invariant_splitting(&rot, &a)) {
        Err(Error::NonCocycle(_)) => Ok(GradedElement::zero(&pctx)),
        Ok(b) => Err(Error::Internal(format!("accepted non-cocycle, B = {b}"))),
        Err(e) => Err(e),
    };
    t.record("non-cocycle rejected", &"(cos h − 1) dθ₁∧dθ₂", r);
}
