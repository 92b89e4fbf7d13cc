//! Cohomology with polynomial (not formal series) coefficients, its
//! module structure over the Ω-variables, and the comparison with the
//! completed theory.

use num_traits::{One, Zero};

use crate::algebra::{GradedElement, Mode, Parity, Rational};
use crate::error::Result;
use crate::linalg::{dense_inverse, dense_mul, dense_sub, kernel, Dense, SparseVec};
use crate::poly::{minimal_polynomial, vector_minimal_polynomial, Poly};

use super::groups::{multiplication_map, subcomplex_cohomology, Cohomology};
use super::tower::{inverse_limit, omega_tower, InverseLimit, STABILIZATION_WINDOW};
use super::truncation::{truncate, ComplexSpec, TruncatedComplex, TruncationParams};

/// `H(S_N)` for the subcomplex `S_N` of elements of Ω-degree `≤ N`
/// whose differential also has Ω-degree `≤ N`.
#[derive(Clone, Debug)]
pub struct UncompletedLevel {
    pub n: u32,
    pub span: Vec<SparseVec>,
    pub cohomology: Cohomology,
}

/// Action of one generator `Ω^a` on a Fourier block of `H`.
#[derive(Clone, Debug)]
pub struct BlockAction {
    pub block: Option<Mode>,
    pub parity: Parity,
    pub classes: std::ops::Range<usize>,
    pub minimal_polynomial: Poly,
    /// Annihilator of each class in the block (cyclic submodule).
    pub annihilators: Vec<Poly>,
}

/// Multiplication by `Ω^a` as an endomorphism of the stable `H`.
#[derive(Clone, Debug)]
pub struct ModuleStructure {
    pub generator: usize,
    /// Per parity, on the classes of the last stable level.
    pub matrices: [Dense; 2],
    pub blocks: Vec<BlockAction>,
}

#[derive(Clone, Debug)]
pub struct UncompletedReport {
    /// Truncation at one Ω-degree above the last level, holding every `S_N`.
    pub complex: TruncatedComplex,
    pub levels: Vec<UncompletedLevel>,
    pub window: usize,
    /// Dimensions constant over the last `window` levels.
    pub stable: bool,
    /// `Ω^a` actions on the second-to-last level (identified with the last
    /// via inclusion). Missing entries could not be formed: inclusion was
    /// not an isomorphism or `Ω^a` does not preserve the complex.
    pub actions: Vec<Option<ModuleStructure>>,
}

impl UncompletedReport {
    pub fn last(&self) -> &UncompletedLevel {
        self.levels.last().expect("at least one level")
    }

    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.levels.iter().map(|l| l.cohomology.dims()).collect()
    }

    /// Growth of `dim H_p` between the last two levels.
    pub fn slope(&self, p: Parity) -> i64 {
        let n = self.levels.len();
        if n < 2 {
            return 0;
        }
        self.levels[n - 1].cohomology.dim(p) as i64 - self.levels[n - 2].cohomology.dim(p) as i64
    }

    /// The level the module action is expressed on (the second-to-last one).
    pub fn action_level(&self) -> &UncompletedLevel {
        let n = self.levels.len();
        &self.levels[n.saturating_sub(2)]
    }

    pub fn class_of_element(&self, level: &UncompletedLevel, p: Parity, x: &GradedElement) -> Result<Option<SparseVec>> {
        level.cohomology.class_of_element(&self.complex, p, x)
    }
}

/// Computes `H(S_N)` for `N = 0..=params.omega_cap` at mode cap `params.mode_cap`,
/// then the action of each `Ω^a`.
pub fn uncompleted_cohomology(spec: &ComplexSpec, params: TruncationParams) -> Result<UncompletedReport> {
    let top = params.omega_cap;
    let c = truncate(spec, params.with_omega_cap(top + 1))?;
    let mut levels = Vec::new();
    for n in 0..=top {
        let span = bounded_subcomplex(&c, n);
        let h = subcomplex_cohomology(&c, &span);
        levels.push(UncompletedLevel { n, span, cohomology: h });
    }
    let w = STABILIZATION_WINDOW;
    let dims: Vec<(usize, usize)> = levels.iter().map(|l| l.cohomology.dims()).collect();
    let stable = dims.len() >= w && dims[dims.len() - w..].iter().all(|d| *d == dims[dims.len() - 1]);
    let mut actions = Vec::new();
    if levels.len() >= 2 {
        let src = &levels[levels.len() - 2].cohomology;
        let dst = &levels[levels.len() - 1].cohomology;
        for a in 0..c.ctx().lie_dim {
            actions.push(omega_action(&c, src, dst, a));
        }
    }
    Ok(UncompletedReport { complex: c, levels, window: w, stable, actions })
}

/// Basis of `S_N`: vectors of Ω-degree `≤ n` whose differential has no
/// component in degree `n + 1`.
fn bounded_subcomplex(c: &TruncatedComplex, n: u32) -> Vec<SparseVec> {
    let mut groups: std::collections::BTreeMap<(usize, Option<Mode>), Vec<usize>> = Default::default();
    for i in 0..c.dim() {
        if c.omega_degree_of(i) <= n {
            groups.entry((c.parity_of(i).index(), c.block_of(i).cloned())).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    for members in groups.values() {
        let images: Vec<SparseVec> = members
            .iter()
            .map(|i| {
                c.differential_column(*i)
                    .iter()
                    .filter(|(j, _)| c.omega_degree_of(**j) > n)
                    .map(|(j, v)| (*j, v.clone()))
                    .collect()
            })
            .collect();
        for z in kernel(&images) {
            out.push(z.into_iter().map(|(k, v)| (members[k], v)).collect());
        }
    }
    out
}

fn omega_action(c: &TruncatedComplex, src: &Cohomology, dst: &Cohomology, a: usize) -> Option<ModuleStructure> {
    let om = GradedElement::omega(c.ctx(), a);
    let mult = multiplication_map(c, src, dst, &om).ok()?;
    let one = GradedElement::one(c.ctx());
    let incl = multiplication_map(c, src, dst, &one).ok()?;
    let mut matrices: [Dense; 2] = [Vec::new(), Vec::new()];
    for p in [Parity::Even, Parity::Odd] {
        let i = incl.matrix(p);
        if i.len() != src.dim(p) {
            return None;
        }
        let inv = dense_inverse(i)?;
        matrices[p.index()] = dense_mul(&inv, mult.matrix(p));
    }
    let mut blocks = Vec::new();
    for p in [Parity::Even, Parity::Odd] {
        let m = &matrices[p.index()];
        for (block, range) in src.block_ranges(p) {
            if range.is_empty() {
                continue;
            }
            let idx: Vec<usize> = range.clone().collect();
            let outside = idx.iter().any(|j| (0..m.len()).any(|i| !range.contains(&i) && !m[i][*j].is_zero()));
            if outside {
                return None;
            }
            let sub = dense_sub(m, &idx, &idx);
            let annihilators = (0..idx.len())
                .map(|k| {
                    let mut e = vec![Rational::zero(); idx.len()];
                    e[k] = Rational::one();
                    vector_minimal_polynomial(&sub, &e)
                })
                .collect();
            blocks.push(BlockAction {
                block,
                parity: p,
                classes: range,
                minimal_polynomial: minimal_polynomial(&sub),
                annihilators,
            });
        }
    }
    Some(ModuleStructure { generator: a, matrices, blocks })
}

/// Rank description of one side of the comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankProfile {
    /// Finite rank over ℝ.
    Finite(usize),
    /// Grows by `slope` per Ω-degree: a free module of that rank over the series ring.
    FormalSeries { slope: usize },
    /// Grows with the mode cap: not finitely generated.
    InfinitelyGenerated,
}

#[derive(Clone, Debug)]
pub struct ParityComparison {
    pub parity: Parity,
    pub completed: RankProfile,
    pub tensored: RankProfile,
    pub equal: bool,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub limit: InverseLimit,
    pub uncompleted: UncompletedReport,
    /// Stable uncompleted dimensions at mode cap `K + 1`, when a torus backend has modes.
    pub uncompleted_next_cap: Option<(usize, usize)>,
    pub parities: [ParityComparison; 2],
    pub equal: bool,
    pub notes: Vec<String>,
}

fn generalized_kernel_dim(ms: &[&Dense], n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut images: Vec<SparseVec> = (0..n).map(|_| SparseVec::new()).collect();
    let mut row = 0;
    for m in ms {
        let mut pow = (*m).clone();
        for _ in 1..n {
            pow = dense_mul(&pow, m);
        }
        for (j, img) in images.iter_mut().enumerate() {
            for (i, r) in pow.iter().enumerate() {
                if !r[j].is_zero() {
                    img.insert(row + i, r[j].clone());
                }
            }
        }
        row += n;
    }
    kernel(&images).len()
}

/// Side-by-side ranks of the completed theory (inverse limit of the
/// Ω-degree tower up to `max_level`) and of the uncompleted theory
/// tensored with the formal series ring.
pub fn completed_vs_tensored_check(
    spec: &ComplexSpec,
    max_level: u32,
    params: TruncationParams,
) -> Result<ComparisonReport> {
    let tower = omega_tower(spec, max_level, params)?;
    let limit = inverse_limit(&tower);
    let unc = uncompleted_cohomology(spec, params.with_omega_cap(max_level))?;
    let mut notes = Vec::new();
    let ctx = spec.ctx();
    let next = if ctx.is_torus() && ctx.nvars() > 0 {
        let u2 = uncompleted_cohomology(spec, TruncationParams { mode_cap: params.mode_cap + 1, ..params.with_omega_cap(max_level) })?;
        Some(u2.last().cohomology.dims())
    } else {
        None
    };
    let last = unc.last().cohomology.dims();
    let parities = [Parity::Even, Parity::Odd].map(|p| {
        let pi = p.index();
        let completed = if limit.stabilized[pi] {
            RankProfile::Finite(limit.ranks[pi].unwrap_or(0))
        } else {
            RankProfile::FormalSeries { slope: limit.slope(p).max(0) as usize }
        };
        let dim_last = if pi == 0 { last.0 } else { last.1 };
        let grows_with_cap = next.map(|d| if pi == 0 { d.0 } else { d.1 } > dim_last).unwrap_or(false);
        let tensored = if !unc.stable && unc.slope(p) > 0 {
            RankProfile::FormalSeries { slope: unc.slope(p) as usize }
        } else if grows_with_cap {
            RankProfile::InfinitelyGenerated
        } else if ctx.lie_dim == 0 {
            RankProfile::Finite(dim_last)
        } else if unc.actions.iter().all(|a| a.is_some()) {
            let level = unc.action_level();
            let mats: Vec<&Dense> = unc.actions.iter().flatten().map(|a| &a.matrices[pi]).collect();
            RankProfile::Finite(generalized_kernel_dim(&mats, level.cohomology.dim(p)))
        } else {
            RankProfile::Finite(dim_last)
        };
        let equal = completed == tensored;
        ParityComparison { parity: p, completed, tensored, equal }
    });
    if ctx.lie_dim > 0 && unc.actions.iter().any(|a| a.is_none()) {
        notes.push("Ω-action unavailable for some generator; tensored rank taken as the stable dimension".into());
    }
    for pc in &parities {
        if pc.tensored == RankProfile::InfinitelyGenerated {
            notes.push(format!(
                "{:?} uncompleted cohomology grows with the mode cap: not finitely generated over the series ring",
                pc.parity
            ));
        }
    }
    notes.push(format!("stabilization window {} levels (heuristic)", STABILIZATION_WINDOW));
    let equal = parities.iter().all(|p| p.equal);
    Ok(ComparisonReport { limit, uncompleted: unc, uncompleted_next_cap: next, parities, equal, notes })
}
