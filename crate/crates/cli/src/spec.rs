//! JSON problem specifications and their translation into core objects.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tweq_core::algebra::{parse_rational, AlgebraContext, Ctx, FormalManifold, GaussianRational, GradedElement, Lin, TrigPoly};
use tweq_core::models::{chevalley_eilenberg, s1_cp, ExtendedActionData, Geometry, VectorField};
use tweq_core::{make_lie_algebra_sparse, Error, LieAlgebraData};

/// A rational literal: an integer or `"p/q"`.
pub type Num = String;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub lie: LieSpec,
    pub manifold: ManifoldSpec,
    pub action: ActionSpec,
    #[serde(default)]
    pub truncation: TruncationSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Structure constants as `[a, b, c, value]` meaning `f^a_{bc}`. Both
/// `f^a_{bc}` and `f^a_{cb}` are listed; unlisted entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structure_constants: Vec<(usize, usize, usize, Num)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum ManifoldSpec {
    Torus { n: usize },
    /// `Λ(g*)^{⊗copies}` with `g` acting diagonally.
    ChevalleyEilenberg { copies: usize },
    /// The cohomology ring of `S¹ × CPᵏ`.
    S1Cp { k: usize },
    Formal(FormalSpec),
}

/// Sparse entries `[j, c]` stand for `c·e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalSpec {
    pub labels: Vec<String>,
    pub degrees: Vec<u32>,
    /// `[i, j, k, c]`: `e_i e_j` has coefficient `c` on `e_k`.
    pub products: Vec<(usize, usize, usize, Num)>,
    pub differential: Vec<Vec<(usize, Num)>>,
    #[serde(default)]
    pub contractions: Vec<Vec<Vec<(usize, Num)>>>,
    #[serde(default)]
    pub lie_derivatives: Vec<Vec<Vec<(usize, Num)>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub mode: Vec<i64>,
    pub re: Num,
    #[serde(default = "zero_num", skip_serializing_if = "is_zero_num")]
    pub im: Num,
}

fn zero_num() -> Num {
    "0".into()
}

fn is_zero_num(n: &Num) -> bool {
    n == "0"
}

/// A constant or a trigonometric polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Constant(Num),
    Trig(Vec<TrigTerm>),
}

/// `coeff · dθ_{i₁}⋯ · e_label · θ^{a₁}⋯ · Π (Ω^a)^{e_a}`, multiplied in that order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: CoeffSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dtheta: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub omega: Vec<u32>,
}

pub type ElementSpec = Vec<TermSpec>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    /// Components along `∂/∂θ_i`.
    Torus(Vec<CoeffSpec>),
    /// Combination of the table's action generators.
    Formal(Vec<Num>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub fields: Vec<FieldSpec>,
    pub xi: Vec<ElementSpec>,
    #[serde(default)]
    pub h: ElementSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleSpec>,
}

/// Group cocycle for averaging. Coefficients live on `Tⁿ × T^r`, the
/// last `r` mode entries being the group variables. Either `alpha` is
/// given directly or it is the coboundary of a 2-form `b0` on `Tⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub weights: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<ElementSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ElementSpec>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexKind {
    /// `d_H − Ω^a ι_{δ(a)} − Ω^a ξ_a∧` on invariants.
    #[default]
    Extended,
    /// `d_g − 𝓗∧` on invariants.
    Cartan,
    /// `d − 𝐇∧` on basic elements of the Weil model.
    Weil,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    #[serde(default = "default_levels")]
    pub levels: u32,
    #[serde(default)]
    pub mode_cap: u32,
    #[serde(default)]
    pub blocks: bool,
    #[serde(default)]
    pub complex: ComplexKind,
}

fn default_levels() -> u32 {
    4
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self { levels: default_levels(), mode_cap: 0, blocks: false, complex: ComplexKind::default() }
    }
}

/// A schema or semantic problem at a JSON path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug)]
pub struct SpecErrors(pub Vec<SpecError>);

impl std::fmt::Display for SpecErrors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SpecErrors {}

fn one(path: impl Into<String>, message: impl std::fmt::Display) -> SpecErrors {
    SpecErrors(vec![SpecError { path: path.into(), message: message.to_string() }])
}

pub fn parse_spec(text: &str) -> Result<ProblemSpec, SpecErrors> {
    let spec: ProblemSpec = serde_json::from_str(text)
        .map_err(|e| one(format!("line {} column {}", e.line(), e.column()), e))?;
    let errs = check_spec(&spec);
    if errs.is_empty() {
        Ok(spec)
    } else {
        Err(SpecErrors(errs))
    }
}

pub fn load_spec(path: &Path) -> Result<ProblemSpec, SpecErrors> {
    let text = std::fs::read_to_string(path).map_err(|e| one(path.display().to_string(), e))?;
    parse_spec(&text)
}

pub fn to_json(spec: &ProblemSpec) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}

/// Range and literal checks that do not need the algebra.
fn check_spec(s: &ProblemSpec) -> Vec<SpecError> {
    let mut errs = Vec::new();
    let m = s.lie.dim;
    for (i, (a, b, c, v)) in s.lie.structure_constants.iter().enumerate() {
        if let Err(e) = parse_rational(v) {
            errs.push(SpecError { path: format!("lie.structure_constants[{i}]"), message: e.to_string() });
        }
        if *a >= m || *b >= m || *c >= m {
            errs.push(SpecError { path: format!("lie.structure_constants[{i}]"), message: format!("index out of range for dimension {m}") });
        }
    }
    let mut push = |path: String, message: String| errs.push(SpecError { path, message });
    if s.action.fields.len() != m {
        push("action.fields".into(), format!("expected {m} vector fields, found {}", s.action.fields.len()));
    }
    if s.action.xi.len() != m {
        push("action.xi".into(), format!("expected {m} one-forms, found {}", s.action.xi.len()));
    }
    let mut lit = Vec::new();
    let n = match &s.manifold {
        ManifoldSpec::Torus { n } => Some(*n),
        _ => None,
    };
    let mut elements: Vec<(String, &ElementSpec)> = Vec::new();
    for (a, x) in s.action.xi.iter().enumerate() {
        elements.push((format!("action.xi[{a}]"), x));
    }
    elements.push(("action.h".into(), &s.action.h));
    if let Some(c) = &s.action.cocycle {
        if let Some(b) = &c.b0 {
            elements.push(("action.cocycle.b0".into(), b));
        }
        if let Some(b) = &c.alpha {
            elements.push(("action.cocycle.alpha".into(), b));
        }
        if c.b0.is_some() == c.alpha.is_some() {
            push("action.cocycle".into(), "give exactly one of b0 and alpha".into());
        }
        if n.is_none() {
            push("action.cocycle".into(), "averaging needs a torus manifold".into());
        }
        for (j, w) in c.weights.iter().enumerate() {
            if Some(w.len()) != n {
                push(format!("action.cocycle.weights[{j}]"), "weight length must equal the torus dimension".into());
            }
        }
    }
    for (path, x) in elements {
        for (t, term) in x.iter().enumerate() {
            let p = format!("{path}[{t}]");
            coeff_literals(&term.coeff, &format!("{p}.coeff"), &mut lit);
            if let Some(n) = n {
                if term.dtheta.iter().any(|i| *i >= n) {
                    push(format!("{p}.dtheta"), format!("index out of range for T^{n}"));
                }
                if term.basis.is_some() {
                    push(format!("{p}.basis"), "basis labels need a formal manifold".into());
                }
            } else if !term.dtheta.is_empty() {
                push(format!("{p}.dtheta"), "dθ needs a torus manifold".into());
            }
            if term.theta.iter().any(|a| *a >= m) {
                push(format!("{p}.theta"), format!("index out of range for dimension {m}"));
            }
            if term.omega.len() > m {
                push(format!("{p}.omega"), format!("at most {m} exponents"));
            }
        }
    }
    for (a, f) in s.action.fields.iter().enumerate() {
        match f {
            FieldSpec::Torus(cs) => {
                if Some(cs.len()) != n {
                    push(format!("action.fields[{a}]"), "torus field needs one component per circle".into());
                }
                for (i, c) in cs.iter().enumerate() {
                    coeff_literals(c, &format!("action.fields[{a}][{i}]"), &mut lit);
                }
            }
            FieldSpec::Formal(cs) => {
                if n.is_some() {
                    push(format!("action.fields[{a}]"), "formal field on a torus manifold".into());
                }
                for (i, c) in cs.iter().enumerate() {
                    lit.push((format!("action.fields[{a}][{i}]"), c.clone()));
                }
            }
        }
    }
    if let ManifoldSpec::Formal(f) = &s.manifold {
        for (i, (_, _, _, c)) in f.products.iter().enumerate() {
            lit.push((format!("manifold.formal.products[{i}]"), c.clone()));
        }
        let lins = f
            .differential
            .iter()
            .enumerate()
            .map(|(i, l)| (format!("manifold.formal.differential[{i}]"), l))
            .chain(f.contractions.iter().enumerate().flat_map(|(a, v)| {
                v.iter().enumerate().map(move |(i, l)| (format!("manifold.formal.contractions[{a}][{i}]"), l))
            }))
            .chain(f.lie_derivatives.iter().enumerate().flat_map(|(a, v)| {
                v.iter().enumerate().map(move |(i, l)| (format!("manifold.formal.lie_derivatives[{a}][{i}]"), l))
            }));
        for (p, l) in lins {
            for (j, (_, c)) in l.iter().enumerate() {
                lit.push((format!("{p}[{j}]"), c.clone()));
            }
        }
    }
    for (p, v) in lit {
        if let Err(e) = parse_rational(&v) {
            push(p, e.to_string());
        }
    }
    errs
}

fn coeff_literals(c: &CoeffSpec, path: &str, out: &mut Vec<(String, Num)>) {
    match c {
        CoeffSpec::Constant(v) => out.push((path.into(), v.clone())),
        CoeffSpec::Trig(ts) => {
            for (i, t) in ts.iter().enumerate() {
                out.push((format!("{path}[{i}].re"), t.re.clone()));
                out.push((format!("{path}[{i}].im"), t.im.clone()));
            }
        }
    }
}

fn at<T>(path: &str, r: tweq_core::Result<T>) -> Result<T, SpecErrors> {
    r.map_err(|e| one(path, e))
}

fn rational(path: &str, v: &Num) -> Result<tweq_core::Rational, SpecErrors> {
    at(path, parse_rational(v))
}

fn trig(path: &str, c: &CoeffSpec, nvars: usize) -> Result<TrigPoly, SpecErrors> {
    match c {
        CoeffSpec::Constant(v) => Ok(TrigPoly::constant(nvars, rational(path, v)?)),
        CoeffSpec::Trig(ts) => {
            let mut terms = Vec::new();
            for (i, t) in ts.iter().enumerate() {
                if t.mode.len() != nvars {
                    return Err(one(format!("{path}[{i}].mode"), format!("expected {nvars} entries")));
                }
                let g = GaussianRational::new(rational(path, &t.re)?, rational(path, &t.im)?);
                terms.push((t.mode.clone(), g));
            }
            let p = TrigPoly::from_terms(terms);
            at(path, p.check_real())?;
            Ok(p)
        }
    }
}

pub fn build_element(path: &str, ctx: &Ctx, x: &ElementSpec) -> Result<GradedElement, SpecErrors> {
    let mut out = GradedElement::zero(ctx);
    for (t, term) in x.iter().enumerate() {
        let p = format!("{path}[{t}]");
        let mut e = GradedElement::function(ctx, trig(&format!("{p}.coeff"), &term.coeff, ctx.nvars())?);
        for i in &term.dtheta {
            e = at(&p, e.mul(&GradedElement::dtheta(ctx, *i)))?;
        }
        if let Some(l) = &term.basis {
            e = at(&p, GradedElement::basis(ctx, l).and_then(|b| e.mul(&b)))?;
        }
        for a in &term.theta {
            e = at(&p, e.mul(&GradedElement::theta(ctx, *a)))?;
        }
        for (a, k) in term.omega.iter().enumerate() {
            e = at(&p, GradedElement::omega(ctx, a).pow(*k).and_then(|w| e.mul(&w)))?;
        }
        out = at(&p, out.add(&e))?;
    }
    Ok(out)
}

fn lin(path: &str, l: &[(usize, Num)]) -> Result<Lin, SpecErrors> {
    l.iter().map(|(j, c)| Ok((*j, rational(path, c)?))).collect()
}

pub fn build_lie(s: &LieSpec) -> tweq_core::Result<LieAlgebraData> {
    let entries = s
        .structure_constants
        .iter()
        .map(|(a, b, c, v)| Ok((*a, *b, *c, parse_rational(v)?)))
        .collect::<tweq_core::Result<Vec<_>>>()?;
    make_lie_algebra_sparse(s.dim, &entries)
}

/// The manifold context, with `k` overriding the `S¹ × CPᵏ` preset.
pub fn build_context(spec: &ProblemSpec, lie: &LieAlgebraData, k: Option<usize>) -> Result<Ctx, SpecErrors> {
    let m = lie.dim();
    Ok(match &spec.manifold {
        ManifoldSpec::Torus { n } => AlgebraContext::torus(*n, m),
        ManifoldSpec::ChevalleyEilenberg { copies } => {
            AlgebraContext::formal(at("manifold.chevalley-eilenberg", chevalley_eilenberg(lie, *copies))?, m)
        }
        ManifoldSpec::S1Cp { k: k0 } => AlgebraContext::formal(at("manifold.s1-cp", s1_cp(k.unwrap_or(*k0)))?, m),
        ManifoldSpec::Formal(f) => {
            let p = "manifold.formal";
            let products = f
                .products
                .iter()
                .map(|(i, j, k, c)| Ok((*i, *j, *k, rational(p, c)?)))
                .collect::<Result<Vec<_>, SpecErrors>>()?;
            let diff = f.differential.iter().map(|l| lin(p, l)).collect::<Result<Vec<_>, _>>()?;
            let lins = |v: &Vec<Vec<Vec<(usize, Num)>>>| {
                v.iter().map(|a| a.iter().map(|l| lin(p, l)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()
            };
            let table = FormalManifold::new(
                f.labels.clone(),
                f.degrees.clone(),
                products,
                diff,
                lins(&f.contractions)?,
                lins(&f.lie_derivatives)?,
            );
            AlgebraContext::formal(at(p, table)?, m)
        }
    })
}

/// Everything the tasks need, built from a spec.
#[derive(Clone, Debug)]
pub struct Instance {
    pub data: ExtendedActionData,
}

/// Builds the action data. Lie algebra failures (e.g. Jacobi) come back
/// as a core error so the caller can report the index triple.
pub fn build_instance(spec: &ProblemSpec, k: Option<usize>) -> Result<Instance, BuildError> {
    let lie = build_lie(&spec.lie).map_err(BuildError::Core)?;
    let ctx = build_context(spec, &lie, k).map_err(BuildError::Spec)?;
    let geometry = Geometry::new(ctx.clone(), lie).map_err(BuildError::Core)?;
    let mut fields = Vec::new();
    for (a, f) in spec.action.fields.iter().enumerate() {
        let p = format!("action.fields[{a}]");
        fields.push(match f {
            FieldSpec::Torus(cs) => VectorField::Torus(
                cs.iter().map(|c| trig(&p, c, ctx.nvars())).collect::<Result<_, _>>().map_err(BuildError::Spec)?,
            ),
            FieldSpec::Formal(cs) => VectorField::Formal(
                cs.iter().map(|c| rational(&p, c)).collect::<Result<_, _>>().map_err(BuildError::Spec)?,
            ),
        });
    }
    let xi = spec
        .action
        .xi
        .iter()
        .enumerate()
        .map(|(a, x)| build_element(&format!("action.xi[{a}]"), &ctx, x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(BuildError::Spec)?;
    let h = build_element("action.h", &ctx, &spec.action.h).map_err(BuildError::Spec)?;
    let data = ExtendedActionData::new(geometry, fields, xi, h).map_err(BuildError::Core)?;
    Ok(Instance { data })
}

#[derive(Debug)]
pub enum BuildError {
    Spec(SpecErrors),
    Core(Error),
}

impl std::fmt::Display for BuildError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuildError::Spec(e) => write!(f, "{e}"),
            BuildError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BuildError {}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"name":"m","lie":{"dim":1},"manifold":{"torus":{"n":1}},
        "action":{"fields":[{"torus":[[{"mode":[1],"re":"1/2"},{"mode":[-1],"re":"1/2"}]]}],"xi":[[]]}}"#;

    #[test]
    fn defaults_fill_in() {
        let s = parse_spec(MINIMAL).unwrap();
        assert_eq!(s.truncation, TruncationSpec::default());
        assert!(s.action.h.is_empty());
    }

    #[test]
    fn trig_coefficients_build() {
        let s = parse_spec(MINIMAL).unwrap();
        let inst = build_instance(&s, None).unwrap();
        assert_eq!(inst.data.geometry.lie.dim(), 1);
    }

    #[test]
    fn non_real_coefficients_are_rejected() {
        let ctx = AlgebraContext::torus(1, 0);
        let x = vec![TermSpec {
            coeff: CoeffSpec::Trig(vec![TrigTerm { mode: vec![1], re: "1".into(), im: "0".into() }]),
            dtheta: vec![],
            basis: None,
            theta: vec![],
            omega: vec![],
        }];
        assert!(build_element("x", &ctx, &x).is_err());
    }
}
