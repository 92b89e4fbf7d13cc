//! Finite models: Ω-degree cap `N`, Fourier-mode cap `K`, and the
//! invariant (or basic) subspace cut out by constraint derivations.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::algebra::{
    canonical_mode, mode_norm, Ctx, Derivation, GradedElement, Mode, MonoKey, Operator, Parity, Rational, TrigPoly,
    Wave,
};
use crate::error::{Error, Result};
use crate::linalg::{axpy, kernel, unit_vec, SparseVec, Subspace};
use crate::models::{ModelContext, SignConvention};

/// Caps defining a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationParams {
    /// Terms of total Ω-exponent above this are dropped.
    pub omega_cap: u32,
    /// Largest allowed `|k|_∞` of a Fourier mode.
    pub mode_cap: u32,
    /// Split by Fourier block `{k, −k}`; requires a mode-preserving differential.
    pub mode_blocks: bool,
}

impl TruncationParams {
    pub fn new(omega_cap: u32, mode_cap: u32) -> Self {
        Self { omega_cap, mode_cap, mode_blocks: false }
    }

    pub fn with_blocks(mut self, on: bool) -> Self {
        self.mode_blocks = on;
        self
    }

    pub fn with_omega_cap(mut self, n: u32) -> Self {
        self.omega_cap = n;
        self
    }
}

/// A differential together with the derivations whose joint kernel is the
/// space it acts on.
#[derive(Clone, Debug)]
pub struct ComplexSpec {
    pub name: String,
    pub differential: Operator,
    /// Whether `θ` factors are part of the ambient space (Weil model).
    pub allow_theta: bool,
    pub constraints: Vec<Derivation>,
}

impl ComplexSpec {
    pub fn new(name: &str, differential: Operator, allow_theta: bool, constraints: Vec<Derivation>) -> Self {
        Self { name: name.into(), differential, allow_theta, constraints }
    }

    pub fn ctx(&self) -> &Ctx {
        self.differential.derivation.ctx()
    }

    fn lie_derivatives(model: &ModelContext) -> Result<Vec<Derivation>> {
        (0..model.dim()).map(|a| model.lie_derivative(a)).collect()
    }

    /// `d_{g,δ}` on `(Ω(M) ⊗ S(g*))^g`.
    pub fn extended(model: &ModelContext, sign: SignConvention) -> Result<Self> {
        Ok(Self::new("extended", model.extended_differential(sign)?, false, Self::lie_derivatives(model)?))
    }

    /// `d_g − 𝓗∧` on `(Ω(M) ⊗ S(g*))^g`.
    pub fn twisted_cartan(model: &ModelContext, three_form: &GradedElement) -> Result<Self> {
        Ok(Self::new(
            "twisted-cartan",
            model.twisted_cartan_differential(three_form)?,
            false,
            Self::lie_derivatives(model)?,
        ))
    }

    /// `d − 𝐇∧` on the basic subcomplex of `Ω(M) ⊗ W(g)`.
    pub fn weil(model: &ModelContext, bold_h: &GradedElement) -> Result<Self> {
        let mut c = Self::lie_derivatives(model)?;
        for a in 0..model.dim() {
            c.push(model.contraction(a)?);
        }
        Ok(Self::new("weil", model.weil_twisted_differential(bold_h)?, true, c))
    }
}

/// A real basis element: monomial key times `cos(k·θ)` or `sin(k·θ)`, `k` canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealLabel {
    pub key: MonoKey,
    pub mode: Mode,
    pub wave: Wave,
}

impl RealLabel {
    fn element(&self, ctx: &Ctx) -> GradedElement {
        GradedElement::monomial(ctx, self.key.clone(), TrigPoly::wave(&self.mode, self.wave))
    }

    fn degree_without_omega(&self, ctx: &Ctx) -> u32 {
        ctx.form_degree(self.key.form) + self.key.theta.count_ones()
    }

    pub fn render(&self, ctx: &Ctx) -> String {
        let key = GradedElement::zero(ctx).key_label(&self.key);
        if self.mode.iter().all(|k| *k == 0) {
            return key;
        }
        let arg: Vec<String> = self
            .mode
            .iter()
            .enumerate()
            .filter(|(_, k)| **k != 0)
            .map(|(i, k)| match *k {
                1 => ctx.var_name(i),
                -1 => format!("-{}", ctx.var_name(i)),
                k => format!("{k}{}", ctx.var_name(i)),
            })
            .collect();
        let w = if self.wave == Wave::Cos { "cos" } else { "sin" };
        format!("{w}({})·{key}", arg.join("+").replace("+-", "-"))
    }
}

/// Real coordinates of an element against [`RealLabel`]s.
pub(crate) fn real_terms(x: &GradedElement) -> Vec<(RealLabel, Rational)> {
    let mut out = Vec::new();
    for (k, c) in x.terms() {
        for (mode, wave, v) in c.real_parts() {
            if !v.is_zero() {
                out.push((RealLabel { key: k.clone(), mode, wave }, v));
            }
        }
    }
    out
}

fn omega_exponents(m: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for j in 0..=cap - used {
                let mut f = e.clone();
                f.push(j);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

fn canonical_modes(n: usize, cap: u32) -> Vec<Mode> {
    let k = cap as i64;
    let mut out: Vec<Mode> = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|m| (-k..=k).map(move |v| [m.clone(), vec![v]].concat())).collect();
    }
    out.retain(|m| !canonical_mode(m).1);
    out
}

/// The finite real basis of all terms within the caps.
#[derive(Clone, Debug)]
pub(crate) struct Ambient {
    pub labels: Vec<RealLabel>,
    pub index: HashMap<RealLabel, usize>,
}

impl Ambient {
    fn build(ctx: &Ctx, params: &TruncationParams, allow_theta: bool) -> Self {
        let m = ctx.lie_dim;
        let thetas: Vec<u32> = if allow_theta { (0..1u32 << m).collect() } else { vec![0] };
        let mut labels = Vec::new();
        for omega in omega_exponents(m, params.omega_cap) {
            for mode in canonical_modes(ctx.nvars(), params.mode_cap) {
                for form in 0..ctx.form_count() as u32 {
                    for &theta in &thetas {
                        let key = MonoKey { form, theta, omega: omega.clone() };
                        labels.push(RealLabel { key: key.clone(), mode: mode.clone(), wave: Wave::Cos });
                        if mode.iter().any(|k| *k != 0) {
                            labels.push(RealLabel { key, mode: mode.clone(), wave: Wave::Sin });
                        }
                    }
                }
            }
        }
        labels.sort_by(|a, b| {
            (a.key.omega_degree(), mode_norm(&a.mode), &a.key, &a.mode, a.wave).cmp(&(
                b.key.omega_degree(),
                mode_norm(&b.mode),
                &b.key,
                &b.mode,
                b.wave,
            ))
        });
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Self { labels, index }
    }
}

/// A Z₂-graded finite complex: a basis of the truncated invariant space
/// and the differential as exact sparse columns.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    name: String,
    params: TruncationParams,
    ctx: Ctx,
    ambient: Ambient,
    label_strings: Vec<String>,
    string_index: HashMap<String, usize>,
    space: Subspace,
    parity: Vec<Parity>,
    omega_degree: Vec<u32>,
    block: Vec<Option<Mode>>,
    differential: Vec<SparseVec>,
}

/// Assembles the truncated complex and checks `D² = 0`.
pub fn truncate(spec: &ComplexSpec, params: TruncationParams) -> Result<TruncatedComplex> {
    let ctx = spec.ctx().clone();
    let ambient = Ambient::build(&ctx, &params, spec.allow_theta);
    let space = constrained_basis(&ctx, &ambient, &spec.constraints, &params)?;
    let label_strings: Vec<String> = ambient.labels.iter().map(|l| l.render(&ctx)).collect();
    let string_index = label_strings.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut parity = Vec::new();
    let mut omega_degree = Vec::new();
    let mut block = Vec::new();
    for v in &space.basis {
        let (i, _) = v.iter().next_back().expect("nonzero basis vector");
        let l = &ambient.labels[*i];
        parity.push(Parity::of(l.degree_without_omega(&ctx)));
        omega_degree.push(l.key.omega_degree());
        block.push(params.mode_blocks.then(|| l.mode.clone()));
    }
    let mut c = TruncatedComplex {
        name: spec.name.clone(),
        params,
        ctx,
        ambient,
        label_strings,
        string_index,
        space,
        parity,
        omega_degree,
        block,
        differential: Vec::new(),
    };
    c.differential = c.assemble(&spec.differential)?;
    c.check_square()?;
    Ok(c)
}

/// Basis of the joint kernel of `constraints` inside the ambient space.
/// Kernels are taken per group of labels whose images cannot mix.
fn constrained_basis(
    ctx: &Ctx,
    ambient: &Ambient,
    constraints: &[Derivation],
    params: &TruncationParams,
) -> Result<Subspace> {
    let mut groups: BTreeMap<(u32, u32, Option<Mode>), Vec<usize>> = BTreeMap::new();
    for (i, l) in ambient.labels.iter().enumerate() {
        let block = params.mode_blocks.then(|| l.mode.clone());
        groups.entry((l.degree_without_omega(ctx), l.key.omega_degree(), block)).or_default().push(i);
    }
    let mut vectors = Vec::new();
    for members in groups.values() {
        if constraints.is_empty() {
            vectors.extend(members.iter().map(|i| unit_vec(*i)));
            continue;
        }
        let mut targets: HashMap<(usize, RealLabel), usize> = HashMap::new();
        let mut images = Vec::with_capacity(members.len());
        for &i in members {
            let src = &ambient.labels[i];
            let e = src.element(ctx);
            let mut img = SparseVec::new();
            for (ci, der) in constraints.iter().enumerate() {
                for (l, v) in real_terms(&der.apply(&e)?) {
                    if params.mode_blocks && l.mode != src.mode {
                        return Err(Error::NotPreserved {
                            operator: der.name().into(),
                            detail: format!("mixes Fourier blocks on {}", src.render(ctx)),
                        });
                    }
                    let n = targets.len();
                    let t = *targets.entry((ci, l)).or_insert(n);
                    axpy(&mut img, &v, &unit_vec(t));
                }
            }
            images.push(img);
        }
        for z in kernel(&images) {
            vectors.push(z.into_iter().map(|(j, c)| (members[j], c)).collect());
        }
    }
    vectors.sort_by_key(|v: &SparseVec| v.keys().next_back().copied());
    Ok(Subspace::new(vectors))
}

impl TruncatedComplex {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &TruncationParams {
        &self.params
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Number of even and odd basis elements.
    pub fn parity_dims(&self) -> [usize; 2] {
        let mut d = [0, 0];
        for p in &self.parity {
            d[p.index()] += 1;
        }
        d
    }

    pub fn parity_of(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn omega_degree_of(&self, i: usize) -> u32 {
        self.omega_degree[i]
    }

    pub fn block_of(&self, i: usize) -> Option<&Mode> {
        self.block[i].as_ref()
    }

    /// Distinct blocks in order of first appearance (a single `None` when unblocked).
    pub fn blocks(&self) -> Vec<Option<Mode>> {
        let mut seen: Vec<Option<Mode>> = Vec::new();
        for b in &self.block {
            if !seen.contains(b) {
                seen.push(b.clone());
            }
        }
        seen.sort_by_key(|b| b.as_ref().map(|m| (mode_norm(m), m.clone())));
        seen
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.labels.len()
    }

    pub fn ambient_label(&self, i: usize) -> &str {
        &self.label_strings[i]
    }

    pub fn basis_element(&self, i: usize) -> GradedElement {
        self.element_of(&unit_vec(i))
    }

    pub fn basis_elements(&self) -> Vec<GradedElement> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    fn to_ambient(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v {
            axpy(&mut out, c, &self.space.basis[*i]);
        }
        out
    }

    fn ambient_element(&self, a: &SparseVec) -> GradedElement {
        let mut e = GradedElement::zero(&self.ctx);
        for (i, c) in a {
            let l = &self.ambient.labels[*i];
            e.add_term(l.key.clone(), TrigPoly::wave(&l.mode, l.wave).scale(c));
        }
        e
    }

    /// The element with coordinates `v` in the complex basis.
    pub fn element_of(&self, v: &SparseVec) -> GradedElement {
        self.ambient_element(&self.to_ambient(v))
    }

    /// Ambient coordinates after dropping Ω-degrees above the cap; errors
    /// name `op` when a term lies outside the caps.
    fn ambient_coords(&self, x: &GradedElement, op: &str) -> Result<SparseVec> {
        x.same_ctx(&GradedElement::zero(&self.ctx))?;
        let x = x.truncate_omega(self.params.omega_cap);
        let need = x.max_mode();
        if need > self.params.mode_cap as i64 {
            return Err(Error::ModeCapExceeded { generator: op.into(), required: need });
        }
        let mut out = SparseVec::new();
        for (l, v) in real_terms(&x) {
            let Some(i) = self.ambient.index.get(&l) else {
                return Err(Error::NotPreserved {
                    operator: op.into(),
                    detail: format!("term {} is outside the ambient space", l.render(&self.ctx)),
                });
            };
            out.insert(*i, v);
        }
        Ok(out)
    }

    /// Coordinates of `x` (modulo Ω-degree above the cap) in the complex basis.
    pub fn coords_of(&self, x: &GradedElement) -> Result<SparseVec> {
        let a = self.ambient_coords(x, "coordinates")?;
        self.space.coords(&a).ok_or_else(|| Error::NotPreserved {
            operator: "coordinates".into(),
            detail: format!("{x} is not in the truncated subspace"),
        })
    }

    fn assemble(&self, op: &Operator) -> Result<Vec<SparseVec>> {
        let mut cache: HashMap<usize, GradedElement> = HashMap::new();
        let mut cols = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let v = &self.space.basis[i];
            let mut img = GradedElement::zero(&self.ctx);
            for (j, c) in v {
                if !cache.contains_key(j) {
                    let e = op.apply(&self.ambient.labels[*j].element(&self.ctx))?;
                    cache.insert(*j, e.truncate_omega(self.params.omega_cap));
                }
                img = img.add(&cache[j].scale(c))?;
            }
            let need = img.max_mode();
            if need > self.params.mode_cap as i64 {
                let culprit = v
                    .keys()
                    .find(|j| cache[*j].max_mode() > self.params.mode_cap as i64)
                    .map(|j| self.label_strings[*j].clone())
                    .unwrap_or_else(|| self.element_of(&unit_vec(i)).to_string());
                return Err(Error::ModeCapExceeded { generator: format!("{} on {culprit}", op.name()), required: need });
            }
            let a = self.ambient_coords(&img, op.name())?;
            let col = self.space.coords(&a).ok_or_else(|| Error::NotPreserved {
                operator: op.name().into(),
                detail: format!("image of {} leaves the constrained subspace", self.basis_element(i)),
            })?;
            if self.params.mode_blocks && col.keys().any(|j| self.block[*j] != self.block[i]) {
                return Err(Error::NotPreserved {
                    operator: op.name().into(),
                    detail: format!("mixes Fourier blocks on {}", self.basis_element(i)),
                });
            }
            if col.keys().any(|j| self.parity[*j] == self.parity[i]) {
                return Err(Error::Internal(format!("{} does not switch parity", op.name())));
            }
            cols.push(col);
        }
        Ok(cols)
    }

    /// Column `i` of the differential.
    pub fn differential_column(&self, i: usize) -> &SparseVec {
        &self.differential[i]
    }

    /// `D v` in the complex basis.
    pub fn apply_differential(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v {
            axpy(&mut out, c, &self.differential[*j]);
        }
        out
    }

    fn check_square(&self) -> Result<()> {
        for i in 0..self.dim() {
            let r = self.apply_differential(&self.differential[i]);
            if !r.is_empty() {
                return Err(Error::NonZeroSquare(format!(
                    "{}: D² {} = {}",
                    self.name,
                    self.basis_element(i),
                    self.element_of(&r)
                )));
            }
        }
        Ok(())
    }

    /// Maps `v` (complex basis) to `target` by keeping the terms whose
    /// labels exist there. `None` if the result leaves the target's subspace.
    pub(crate) fn project(&self, v: &SparseVec, target: &TruncatedComplex) -> Option<SparseVec> {
        let mut a = SparseVec::new();
        for (i, c) in self.to_ambient(v) {
            if let Some(j) = target.string_index.get(&self.label_strings[i]) {
                a.insert(*j, c);
            }
        }
        target.space.coords(&a)
    }

    /// Whether every ambient label of `target` also occurs here.
    pub(crate) fn covers(&self, target: &TruncatedComplex) -> bool {
        target.label_strings.iter().all(|s| self.string_index.contains_key(s))
    }
}

/// Basis of the invariant subspace `∩_a ker L_a` within the caps.
pub fn invariant_subspace(model: &ModelContext, params: TruncationParams) -> Result<Vec<GradedElement>> {
    let ls = ComplexSpec::lie_derivatives(model)?;
    subspace_elements(model.ctx(), &ls, false, params)
}

/// Basis of the basic subspace `∩_a (ker L_a ∩ ker ι_a)` of `Ω(M) ⊗ W(g)` within the caps.
pub fn basic_subspace(model: &ModelContext, params: TruncationParams) -> Result<Vec<GradedElement>> {
    let mut c = ComplexSpec::lie_derivatives(model)?;
    for a in 0..model.dim() {
        c.push(model.contraction(a)?);
    }
    subspace_elements(model.ctx(), &c, true, params)
}

fn subspace_elements(
    ctx: &Ctx,
    constraints: &[Derivation],
    allow_theta: bool,
    params: TruncationParams,
) -> Result<Vec<GradedElement>> {
    let ambient = Ambient::build(ctx, &params, allow_theta);
    let space = constrained_basis(ctx, &ambient, constraints, &params)?;
    Ok(space
        .basis
        .iter()
        .map(|a| {
            let mut e = GradedElement::zero(ctx);
            for (i, c) in a {
                let l = &ambient.labels[*i];
                e.add_term(l.key.clone(), TrigPoly::wave(&l.mode, l.wave).scale(c));
            }
            e
        })
        .collect())
}

/// `d_{g,δ̄} − d_{g,𝓗̄}` on every basis element of the truncated invariant
/// space; returns the nonzero residuals with their probes.
pub fn operator_identity_residuals(
    model: &ModelContext,
    three_form: &GradedElement,
    params: TruncationParams,
) -> Result<Vec<(GradedElement, GradedElement)>> {
    let ext = model.extended_differential(SignConvention::Minus)?;
    let tw = model.twisted_cartan_differential(three_form)?;
    let mut bad = Vec::new();
    for x in invariant_subspace(model, params)? {
        let r = ext.apply(&x)?.sub(&tw.apply(&x)?)?;
        if !r.is_zero() {
            bad.push((x, r));
        }
    }
    Ok(bad)
}
