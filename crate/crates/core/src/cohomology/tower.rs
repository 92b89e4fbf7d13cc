//! Towers of truncations and their inverse limits.

use crate::algebra::{GradedElement, Parity};
use crate::error::Result;
use crate::linalg::{dense_column, dense_identity, dense_mul, dense_rank, Dense, Echelon, SparseVec};

use super::groups::{compute_cohomology, restriction_map, Cohomology, InducedMap};
use super::truncation::{truncate, ComplexSpec, TruncatedComplex, TruncationParams};

/// Images are declared stable once they agree on this many consecutive levels.
pub const STABILIZATION_WINDOW: usize = 3;

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub complex: TruncatedComplex,
    pub cohomology: Cohomology,
}

/// Levels ordered from smallest to largest truncation; `maps[i]` is the
/// restriction from level `i + 1` to level `i`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub levels: Vec<TowerLevel>,
    pub maps: Vec<InducedMap>,
}

impl Tower {
    pub fn new(complexes: Vec<TruncatedComplex>) -> Result<Self> {
        let levels: Vec<TowerLevel> = complexes
            .into_iter()
            .map(|c| {
                let h = compute_cohomology(&c);
                TowerLevel { complex: c, cohomology: h }
            })
            .collect();
        let mut maps = Vec::new();
        for w in levels.windows(2) {
            maps.push(restriction_map(&w[1].complex, &w[1].cohomology, &w[0].complex, &w[0].cohomology)?);
        }
        Ok(Self { levels, maps })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.levels.iter().map(|l| l.cohomology.dims()).collect()
    }

    /// Composite restriction from level `from` down to level `to ≤ from`.
    pub fn composite(&self, from: usize, to: usize, p: Parity) -> Dense {
        assert!(to <= from && from < self.len());
        let mut m = dense_identity(self.levels[from].cohomology.dim(p));
        for i in (to..from).rev() {
            m = dense_mul(self.maps[i].matrix(p), &m);
        }
        m
    }
}

/// Ω-degree tower `N = 0..=max_level` at a fixed mode cap.
pub fn omega_tower(spec: &ComplexSpec, max_level: u32, params: TruncationParams) -> Result<Tower> {
    let cs = (0..=max_level).map(|n| truncate(spec, params.with_omega_cap(n))).collect::<Result<Vec<_>>>()?;
    Tower::new(cs)
}

/// Stabilized ranks of `lim← H(level)` per parity, with the full profile.
#[derive(Clone, Debug)]
pub struct InverseLimit {
    /// `dim H` at every level, per parity.
    pub dims: [Vec<usize>; 2],
    /// Rank of the composite map from the top level to level `n`, for `n` below the top.
    pub image_ranks: [Vec<usize>; 2],
    pub stabilized: [bool; 2],
    /// Limit ranks where stabilized.
    pub ranks: [Option<usize>; 2],
    pub window: usize,
    /// Representatives of the stable image at level `top − window`.
    pub generators: [Vec<GradedElement>; 2],
}

impl InverseLimit {
    pub fn rank(&self, p: Parity) -> Option<usize> {
        self.ranks[p.index()]
    }

    pub fn finitely_generated(&self) -> bool {
        self.stabilized.iter().all(|s| *s)
    }

    /// Last increment of the image profile; the growth rate of a
    /// non-stabilizing parity.
    pub fn slope(&self, p: Parity) -> i64 {
        let r = &self.image_ranks[p.index()];
        match r.len() {
            0 | 1 => 0,
            n => r[n - 1] as i64 - r[n - 2] as i64,
        }
    }
}

pub fn inverse_limit(t: &Tower) -> InverseLimit {
    let w = STABILIZATION_WINDOW;
    let top = t.len().saturating_sub(1);
    let mut out = InverseLimit {
        dims: [Vec::new(), Vec::new()],
        image_ranks: [Vec::new(), Vec::new()],
        stabilized: [false, false],
        ranks: [None, None],
        window: w,
        generators: [Vec::new(), Vec::new()],
    };
    for p in [Parity::Even, Parity::Odd] {
        let pi = p.index();
        out.dims[pi] = t.levels.iter().map(|l| l.cohomology.dim(p)).collect();
        if t.is_empty() {
            continue;
        }
        out.image_ranks[pi] = (0..top).map(|n| dense_rank(&t.composite(top, n, p))).collect();
        let r = &out.image_ranks[pi];
        if r.len() >= w && r[r.len() - w..].iter().all(|x| *x == r[r.len() - 1]) {
            out.stabilized[pi] = true;
            out.ranks[pi] = Some(r[r.len() - 1]);
            let at = top - w;
            let lvl = &t.levels[at];
            let m = t.composite(top, at, p);
            let reps = lvl.cohomology.representatives(p);
            let mut ech = Echelon::new();
            for j in 0..m.first().map(|r| r.len()).unwrap_or(0) {
                let col = dense_column(&m, j);
                if ech.push(col.clone(), SparseVec::new()).is_ok() {
                    let mut z = SparseVec::new();
                    for (k, c) in &col {
                        crate::linalg::axpy(&mut z, c, &reps[*k]);
                    }
                    out.generators[pi].push(lvl.complex.element_of(&z));
                }
            }
        }
    }
    out
}
