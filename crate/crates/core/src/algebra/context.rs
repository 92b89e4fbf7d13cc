//! Generator rosters and manifold backends.
//!
//! Every element lives in `Ω(M) ⊗ S(g*) ⊗ Λ(g*)`. The manifold factor is
//! either a torus `Tⁿ` (trigonometric-polynomial coefficients times
//! `dθ_I`) or a formal graded-commutative algebra given by an explicit
//! basis and multiplication table.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Sparse linear combination of formal basis elements.
pub type Lin = Vec<(usize, Rational)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `dθ_i` on a torus.
    ManifoldOdd,
    /// `θ^a`, degree 1.
    WeilOdd,
    /// `Ω^a`, degree 2.
    WeilEven,
    /// A basis element of a formal table.
    Formal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub id: String,
    pub degree: u32,
    pub kind: GeneratorKind,
}

impl GeneratorSpec {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// A finite-dimensional graded-commutative algebra with differential and
/// the contraction and Lie-derivative operators of a `g`-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalManifold {
    pub labels: Vec<String>,
    pub degrees: Vec<u32>,
    products: BTreeMap<(usize, usize), Lin>,
    pub differential: Vec<Lin>,
    /// `contractions[a][i] = ι_a e_i`.
    pub contractions: Vec<Vec<Lin>>,
    /// `lie_derivatives[a][i] = L_a e_i`.
    pub lie_derivatives: Vec<Vec<Lin>>,
}

fn add_into(acc: &mut BTreeMap<usize, Rational>, k: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(k).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&k);
    }
}

fn lin_from(acc: BTreeMap<usize, Rational>) -> Lin {
    acc.into_iter().collect()
}

impl FormalManifold {
    /// Builds and validates a table. `products` lists `(i, j, k, c)` meaning
    /// `e_i e_j` has coefficient `c` on `e_k`. Basis element 0 must be the unit.
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<u32>,
        products: Vec<(usize, usize, usize, Rational)>,
        differential: Vec<Lin>,
        contractions: Vec<Vec<Lin>>,
        lie_derivatives: Vec<Vec<Lin>>,
    ) -> Result<Self> {
        let dim = labels.len();
        let bad = |m: String| Err(Error::InvalidTable(m));
        if dim == 0 || degrees.len() != dim {
            return bad("basis must be nonempty and carry one degree per element".into());
        }
        let mut map: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        for (i, j, k, c) in products {
            if i >= dim || j >= dim || k >= dim {
                return bad(format!("product index ({i},{j})->{k} out of range"));
            }
            if !c.is_zero() && degrees[i] + degrees[j] != degrees[k] {
                return bad(format!("product {}·{} -> {} breaks degrees", labels[i], labels[j], labels[k]));
            }
            add_into(map.entry((i, j)).or_default(), k, c);
        }
        let products = map.into_iter().map(|(k, v)| (k, lin_from(v))).filter(|(_, v)| !v.is_empty()).collect();
        let m = Self { labels, degrees, products, differential, contractions, lie_derivatives };
        m.validate()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn action_dim(&self) -> usize {
        self.contractions.len()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        self.products.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn products(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.products.iter().flat_map(|((i, j), v)| v.iter().map(move |(k, c)| (*i, *j, *k, c)))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn mul_lin(&self, a: &Lin, b: &Lin) -> Lin {
        let mut acc = BTreeMap::new();
        for (i, ca) in a {
            for (j, cb) in b {
                for (k, c) in self.product(*i, *j) {
                    add_into(&mut acc, *k, ca * cb * c);
                }
            }
        }
        lin_from(acc)
    }

    fn apply_lin(&self, op: &[Lin], a: &Lin) -> Lin {
        let mut acc = BTreeMap::new();
        for (i, c) in a {
            for (k, v) in &op[*i] {
                add_into(&mut acc, *k, c * v);
            }
        }
        lin_from(acc)
    }

    fn combine(&self, terms: &[(&Lin, Rational)]) -> Lin {
        let mut acc = BTreeMap::new();
        for (l, s) in terms {
            for (k, c) in l.iter() {
                add_into(&mut acc, *k, c * s);
            }
        }
        lin_from(acc)
    }

    fn basis(&self, i: usize) -> Lin {
        vec![(i, Rational::one())]
    }

    fn check_operator(&self, name: &str, op: &[Lin], shift: i64) -> Result<()> {
        if op.len() != self.dim() {
            return Err(Error::InvalidTable(format!("{name} must have one image per basis element")));
        }
        for (i, img) in op.iter().enumerate() {
            for (k, c) in img {
                if *k >= self.dim() {
                    return Err(Error::InvalidTable(format!("{name} image index {k} out of range")));
                }
                if !c.is_zero() && self.degrees[*k] as i64 != self.degrees[i] as i64 + shift {
                    return Err(Error::InvalidTable(format!("{name} of {} has the wrong degree", self.labels[i])));
                }
            }
        }
        Ok(())
    }

    /// Checks unit, associativity, graded commutativity, `d² = 0`, Leibniz
    /// rules for `d` and every `ι_a`, `[ι_a, ι_b] = 0` and the Cartan formula.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let fail = |m: String| Err(Error::InvalidTable(m));
        if self.degrees[0] != 0 {
            return fail("basis element 0 must be the unit in degree 0".into());
        }
        for i in 0..n {
            if self.mul_lin(&self.basis(0), &self.basis(i)) != self.basis(i) {
                return fail(format!("basis element 0 is not a unit for {}", self.labels[i]));
            }
        }
        self.check_operator("differential", &self.differential, 1)?;
        if self.lie_derivatives.len() != self.contractions.len() {
            return fail("contractions and Lie derivatives must come in pairs".into());
        }
        for (a, (io, lo)) in self.contractions.iter().zip(&self.lie_derivatives).enumerate() {
            self.check_operator(&format!("contraction {a}"), io, -1)?;
            self.check_operator(&format!("Lie derivative {a}"), lo, 0)?;
        }
        for i in 0..n {
            for j in 0..n {
                let sign = if self.degrees[i] % 2 == 1 && self.degrees[j] % 2 == 1 { -Rational::one() } else { Rational::one() };
                let ij = self.mul_lin(&self.basis(i), &self.basis(j));
                let ji = self.mul_lin(&self.basis(j), &self.basis(i));
                if ij != self.combine(&[(&ji, sign)]) {
                    return fail(format!("{}·{} is not graded commutative", self.labels[i], self.labels[j]));
                }
                for k in 0..n {
                    let left = self.mul_lin(&ij, &self.basis(k));
                    let right = self.mul_lin(&self.basis(i), &self.mul_lin(&self.basis(j), &self.basis(k)));
                    if left != right {
                        return fail(format!(
                            "product is not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
                // odd derivations: D(xy) = D(x)y + (-1)^{|x|} x D(y)
                let sx = if self.degrees[i] % 2 == 1 { -Rational::one() } else { Rational::one() };
                let mut odd_ops: Vec<(String, &[Lin])> = vec![("differential".into(), &self.differential)];
                for (a, op) in self.contractions.iter().enumerate() {
                    odd_ops.push((format!("contraction {a}"), op));
                }
                for (name, op) in odd_ops {
                    let lhs = self.apply_lin(op, &ij);
                    let t1 = self.mul_lin(&op[i], &self.basis(j));
                    let t2 = self.mul_lin(&self.basis(i), &op[j]);
                    if lhs != self.combine(&[(&t1, Rational::one()), (&t2, sx.clone())]) {
                        return fail(format!("{name} violates Leibniz on {}·{}", self.labels[i], self.labels[j]));
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis(i);
            if !self.apply_lin(&self.differential, &self.apply_lin(&self.differential, &e)).is_empty() {
                return fail(format!("d² ≠ 0 on {}", self.labels[i]));
            }
            for (a, ia) in self.contractions.iter().enumerate() {
                for ib in &self.contractions {
                    let ab = self.apply_lin(ia, &self.apply_lin(ib, &e));
                    let ba = self.apply_lin(ib, &self.apply_lin(ia, &e));
                    if !self.combine(&[(&ab, Rational::one()), (&ba, Rational::one())]).is_empty() {
                        return fail(format!("contractions do not anticommute on {}", self.labels[i]));
                    }
                }
                let di = self.apply_lin(&self.differential, &self.apply_lin(ia, &e));
                let id = self.apply_lin(ia, &self.apply_lin(&self.differential, &e));
                let cartan = self.combine(&[(&di, Rational::one()), (&id, Rational::one())]);
                let given = self.apply_lin(&self.lie_derivatives[a], &e);
                if cartan != given {
                    return fail(format!("Cartan formula L = dι + ιd fails for generator {a} on {}", self.labels[i]));
                }
            }
        }
        Ok(())
    }

    pub fn lin_label(&self, l: &Lin) -> String {
        if l.is_empty() {
            return "0".into();
        }
        l.iter().map(|(k, c)| format!("{}·{}", format_rational(c), self.labels[*k])).collect::<Vec<_>>().join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Torus { n: usize },
    Formal(FormalManifold),
}

/// Generator roster and backend shared by all elements of one algebra.
#[derive(Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    pub backend: Backend,
    /// Dimension `m` of the Lie algebra, i.e. the number of `θ^a` and `Ω^a`.
    pub lie_dim: usize,
}

pub type Ctx = Arc<AlgebraContext>;

impl AlgebraContext {
    pub fn torus(n: usize, lie_dim: usize) -> Ctx {
        assert!(n <= 16 && lie_dim <= 16, "torus and Lie dimensions are capped at 16");
        Arc::new(Self { backend: Backend::Torus { n }, lie_dim })
    }

    pub fn formal(manifold: FormalManifold, lie_dim: usize) -> Ctx {
        assert!(lie_dim <= 16);
        Arc::new(Self { backend: Backend::Formal(manifold), lie_dim })
    }

    /// Number of trigonometric coordinate variables (0 for formal backends).
    pub fn nvars(&self) -> usize {
        match &self.backend {
            Backend::Torus { n } => *n,
            Backend::Formal(_) => 0,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.backend, Backend::Torus { .. })
    }

    pub fn formal_manifold(&self) -> Option<&FormalManifold> {
        match &self.backend {
            Backend::Formal(m) => Some(m),
            Backend::Torus { .. } => None,
        }
    }

    /// Number of manifold form keys: `2ⁿ` masks or the formal basis size.
    pub fn form_count(&self) -> usize {
        match &self.backend {
            Backend::Torus { n } => 1 << n,
            Backend::Formal(m) => m.dim(),
        }
    }

    /// Number of manifold generators a derivation needs images for:
    /// `dθ_i` on a torus, every basis element of a formal table.
    pub fn form_count_generators(&self) -> usize {
        match &self.backend {
            Backend::Torus { n } => *n,
            Backend::Formal(m) => m.dim(),
        }
    }

    pub fn form_degree(&self, form: u32) -> u32 {
        match &self.backend {
            Backend::Torus { .. } => form.count_ones(),
            Backend::Formal(m) => m.degrees[form as usize],
        }
    }

    pub fn manifold_dim(&self) -> u32 {
        match &self.backend {
            Backend::Torus { n } => *n as u32,
            Backend::Formal(m) => m.degrees.iter().copied().max().unwrap_or(0),
        }
    }

    /// Product of two manifold form keys, with sign.
    pub fn mul_forms(&self, a: u32, b: u32) -> Vec<(u32, Rational)> {
        match &self.backend {
            Backend::Torus { .. } => {
                if a & b != 0 {
                    return vec![];
                }
                vec![(a | b, mask_sign(a, b))]
            }
            Backend::Formal(m) => m.product(a as usize, b as usize).iter().map(|(k, c)| (*k as u32, c.clone())).collect(),
        }
    }

    pub fn form_label(&self, form: u32) -> String {
        match &self.backend {
            Backend::Torus { n } => {
                let parts: Vec<String> = (0..*n)
                    .filter(|i| form & (1 << i) != 0)
                    .map(|i| if *n == 1 { "dθ".to_string() } else { format!("dθ{}", i + 1) })
                    .collect();
                parts.join("∧")
            }
            Backend::Formal(m) => {
                if form == 0 {
                    String::new()
                } else {
                    m.labels[form as usize].clone()
                }
            }
        }
    }

    pub fn var_name(&self, i: usize) -> String {
        if self.nvars() == 1 {
            "θ".into()
        } else {
            format!("θ{}", i + 1)
        }
    }

    pub fn generators(&self) -> Vec<GeneratorSpec> {
        let mut g = Vec::new();
        match &self.backend {
            Backend::Torus { n } => {
                for i in 0..*n {
                    g.push(GeneratorSpec { id: format!("dθ{}", i + 1), degree: 1, kind: GeneratorKind::ManifoldOdd });
                }
            }
            Backend::Formal(m) => {
                for (l, d) in m.labels.iter().zip(&m.degrees) {
                    g.push(GeneratorSpec { id: l.clone(), degree: *d, kind: GeneratorKind::Formal });
                }
            }
        }
        for a in 0..self.lie_dim {
            g.push(GeneratorSpec { id: format!("θ^{}", a + 1), degree: 1, kind: GeneratorKind::WeilOdd });
        }
        for a in 0..self.lie_dim {
            g.push(GeneratorSpec { id: format!("Ω^{}", a + 1), degree: 2, kind: GeneratorKind::WeilEven });
        }
        g
    }
}

/// Sign of `e_A ∧ e_B` relative to `e_{A∪B}` for disjoint index masks.
pub fn mask_sign(a: u32, b: u32) -> Rational {
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if swaps % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_signs() {
        // e1 ∧ e0 = -e0 ∧ e1
        assert_eq!(mask_sign(0b10, 0b01), -Rational::one());
        assert_eq!(mask_sign(0b01, 0b10), Rational::one());
        // (e0 e2) ∧ e1 = - e0 e1 e2
        assert_eq!(mask_sign(0b101, 0b010), -Rational::one());
    }

    #[test]
    fn rejects_non_commutative_table() {
        let one = Rational::one();
        // two odd generators with x·y = z but y·x = z (should be -z)
        let r = FormalManifold::new(
            vec!["1".into(), "x".into(), "y".into(), "z".into()],
            vec![0, 1, 1, 2],
            vec![
                (0, 0, 0, one.clone()),
                (0, 1, 1, one.clone()),
                (1, 0, 1, one.clone()),
                (0, 2, 2, one.clone()),
                (2, 0, 2, one.clone()),
                (0, 3, 3, one.clone()),
                (3, 0, 3, one.clone()),
                (1, 2, 3, one.clone()),
                (2, 1, 3, one.clone()),
            ],
            vec![vec![]; 4],
            vec![],
            vec![],
        );
        assert!(matches!(r, Err(Error::InvalidTable(m)) if m.contains("graded commutative")));
    }
}
