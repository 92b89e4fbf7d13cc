//! Z₂-graded cohomology of truncated complexes and the maps between them.

use std::collections::BTreeMap;

use crate::algebra::{GradedElement, Mode, Parity};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dense_from_columns, kernel, rank, unit_vec, Dense, Quotient, SparseVec};

use super::truncation::TruncatedComplex;

/// Cohomology of one parity inside one Fourier block.
#[derive(Clone, Debug)]
pub struct ParityPart {
    /// Dimension of the (sub)complex in this parity.
    pub space_dim: usize,
    pub cycles_dim: usize,
    /// Rank of `D` on this parity.
    pub image_rank: usize,
    /// Rank of the boundaries landing in this parity.
    pub boundaries_dim: usize,
    quotient: Quotient,
}

impl ParityPart {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

#[derive(Clone, Debug)]
pub struct BlockCohomology {
    pub block: Option<Mode>,
    /// Indexed by [`Parity::index`].
    pub parts: [ParityPart; 2],
}

/// `H⁰ ⊕ H¹` of a truncated complex (or of a subcomplex of it), split by
/// Fourier block when the complex is blocked. Class coordinates are
/// concatenated over blocks in block order.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub blocks: Vec<BlockCohomology>,
}

fn index_of(p: Parity) -> usize {
    p.index()
}

impl Cohomology {
    pub fn dim(&self, p: Parity) -> usize {
        self.blocks.iter().map(|b| b.parts[index_of(p)].dim()).sum()
    }

    /// `(dim H⁰, dim H¹)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.dim(Parity::Even), self.dim(Parity::Odd))
    }

    /// Class indices belonging to each block, for parity `p`.
    pub fn block_ranges(&self, p: Parity) -> Vec<(Option<Mode>, std::ops::Range<usize>)> {
        let mut out = Vec::new();
        let mut start = 0;
        for b in &self.blocks {
            let d = b.parts[index_of(p)].dim();
            out.push((b.block.clone(), start..start + d));
            start += d;
        }
        out
    }

    /// Representative cocycles, in the complex basis.
    pub fn representatives(&self, p: Parity) -> Vec<SparseVec> {
        self.blocks.iter().flat_map(|b| b.parts[index_of(p)].quotient.reps.iter().cloned()).collect()
    }

    pub fn representative_elements(&self, c: &TruncatedComplex, p: Parity) -> Vec<GradedElement> {
        self.representatives(p).iter().map(|v| c.element_of(v)).collect()
    }

    /// Class coordinates of a cocycle given in the complex basis; `None` if
    /// it is not a cocycle of this (sub)complex.
    pub fn class_of(&self, c: &TruncatedComplex, p: Parity, z: &SparseVec) -> Option<SparseVec> {
        let mut by_block: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (i, v) in z {
            if c.parity_of(*i) != p {
                return None;
            }
            let b = self.blocks.iter().position(|b| b.block.as_ref() == c.block_of(*i))?;
            by_block.entry(b).or_default().insert(*i, v.clone());
        }
        let mut out = SparseVec::new();
        let mut offset = 0;
        for (bi, b) in self.blocks.iter().enumerate() {
            let part = &b.parts[index_of(p)];
            if let Some(zb) = by_block.get(&bi) {
                for (k, v) in part.quotient.class_of(zb)? {
                    out.insert(offset + k, v);
                }
            }
            offset += part.dim();
        }
        Some(out)
    }

    /// Class coordinates of an element of parity `p`; `Ok(None)` if it is not a cocycle.
    pub fn class_of_element(&self, c: &TruncatedComplex, p: Parity, x: &GradedElement) -> Result<Option<SparseVec>> {
        if !x.is_zero() && x.parity()? != p {
            return Ok(None);
        }
        let z = c.coords_of(x)?;
        Ok(self.class_of(c, p, &z))
    }
}

/// Cohomology of the whole truncated complex.
pub fn compute_cohomology(c: &TruncatedComplex) -> Cohomology {
    let span: Vec<SparseVec> = (0..c.dim()).map(unit_vec).collect();
    subcomplex_cohomology(c, &span)
}

/// Cohomology of the subcomplex spanned by `span`; each vector must be
/// homogeneous in parity and block, and `D` must preserve the span.
pub fn subcomplex_cohomology(c: &TruncatedComplex, span: &[SparseVec]) -> Cohomology {
    let mut groups: BTreeMap<(usize, usize), Vec<&SparseVec>> = BTreeMap::new();
    let blocks = c.blocks();
    for v in span {
        let Some((i, _)) = v.iter().next() else { continue };
        let b = blocks.iter().position(|b| b.as_ref() == c.block_of(*i)).expect("known block");
        groups.entry((b, c.parity_of(*i).index())).or_default().push(v);
    }
    let mut out = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        let empty = Vec::new();
        let members = |p: usize| groups.get(&(bi, p)).unwrap_or(&empty);
        let mut images: [Vec<SparseVec>; 2] = [Vec::new(), Vec::new()];
        let mut cycles: [Vec<SparseVec>; 2] = [Vec::new(), Vec::new()];
        for p in 0..2 {
            let vs = members(p);
            images[p] = vs.iter().map(|v| c.apply_differential(v)).collect();
            for z in kernel(&images[p]) {
                let mut w = SparseVec::new();
                for (j, k) in z {
                    axpy(&mut w, &k, vs[j]);
                }
                cycles[p].push(w);
            }
        }
        let parts = [0, 1].map(|p| {
            let q = Quotient::new(&cycles[p], &images[1 - p]);
            ParityPart {
                space_dim: members(p).len(),
                cycles_dim: cycles[p].len(),
                image_rank: rank(&images[p]),
                boundaries_dim: q.boundaries_dim,
                quotient: q,
            }
        });
        out.push(BlockCohomology { block: block.clone(), parts });
    }
    out.retain(|b| b.parts.iter().any(|p| p.space_dim > 0));
    Cohomology { blocks: out }
}

/// Induced maps on cohomology, one matrix per parity (rows: target classes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub matrices: [Dense; 2],
}

impl InducedMap {
    pub fn matrix(&self, p: Parity) -> &Dense {
        &self.matrices[p.index()]
    }
}

/// The map `H(hi) → H(lo)` induced by keeping terms whose labels exist in
/// `lo` (quotient by higher Ω-degree, restriction to fewer modes or to a
/// smaller formal table). Checks that the projection is a chain map.
pub fn restriction_map(
    hi: &TruncatedComplex,
    hi_h: &Cohomology,
    lo: &TruncatedComplex,
    lo_h: &Cohomology,
) -> Result<InducedMap> {
    if hi.ctx().lie_dim != lo.ctx().lie_dim || hi.ctx().is_torus() != lo.ctx().is_torus() {
        return Err(Error::IncompatibleCaps("backends or Lie algebra dimensions differ".into()));
    }
    if !hi.covers(lo) {
        return Err(Error::IncompatibleCaps(format!(
            "{} (N={}, K={}) is not a quotient of {} (N={}, K={})",
            lo.name(),
            lo.params().omega_cap,
            lo.params().mode_cap,
            hi.name(),
            hi.params().omega_cap,
            hi.params().mode_cap
        )));
    }
    let proj = |v: &SparseVec| {
        hi.project(v, lo).ok_or_else(|| {
            Error::IncompatibleCaps(format!("{} does not project into the smaller truncation", hi.element_of(v)))
        })
    };
    for i in 0..hi.dim() {
        let e = unit_vec(i);
        let a = proj(&hi.apply_differential(&e))?;
        let b = lo.apply_differential(&proj(&e)?);
        if a != b {
            return Err(Error::IncompatibleCaps(format!(
                "projection is not a chain map at {}",
                hi.basis_element(i)
            )));
        }
    }
    let mut matrices: [Dense; 2] = [Vec::new(), Vec::new()];
    for p in [Parity::Even, Parity::Odd] {
        let mut cols = Vec::new();
        for z in hi_h.representatives(p) {
            let img = proj(&z)?;
            let cls = lo_h
                .class_of(lo, p, &img)
                .ok_or_else(|| Error::Internal("projected cocycle is not a cocycle".into()))?;
            cols.push(cls);
        }
        matrices[p.index()] = dense_from_columns(&cols, lo_h.dim(p));
    }
    Ok(InducedMap { matrices })
}

/// Multiplication by an even element `mult` from `H(src)` to `H(dst)`,
/// both computed on the same truncated complex `c`.
pub fn multiplication_map(
    c: &TruncatedComplex,
    src: &Cohomology,
    dst: &Cohomology,
    mult: &GradedElement,
) -> Result<InducedMap> {
    if mult.parity_opt()? == Some(Parity::Odd) {
        return Err(Error::InvalidInput("module action needs an even multiplier".into()));
    }
    let mut matrices: [Dense; 2] = [Vec::new(), Vec::new()];
    for p in [Parity::Even, Parity::Odd] {
        let mut cols = Vec::new();
        for z in src.representatives(p) {
            let prod = mult.mul(&c.element_of(&z))?;
            let w = c.coords_of(&prod)?;
            let cls = dst.class_of(c, p, &w).ok_or_else(|| {
                Error::InvalidInput(format!("{mult} times a cocycle is not a cocycle; the differential is not linear over it"))
            })?;
            cols.push(cls);
        }
        matrices[p.index()] = dense_from_columns(&cols, dst.dim(p));
    }
    Ok(InducedMap { matrices })
}

/// Multiplication by `mult` on `H(c)` within one truncation.
pub fn module_action(c: &TruncatedComplex, h: &Cohomology, mult: &GradedElement) -> Result<InducedMap> {
    multiplication_map(c, h, h, mult)
}
