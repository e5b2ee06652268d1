//! One-parameter persistence modules over finite, totally ordered samples.
//!
//! A [`PersistenceModule`] is a chain `V_{t_0} → V_{t_1} → … → V_{t_N}` of
//! finite-dimensional GF(p)-spaces, optionally closed off by a limit slot:
//! a terminal colimit `V_∞` receiving a map from the last sample, or (for
//! duals) an initial slot mapping into the first sample. All structure maps
//! between non-adjacent slots are composites of the stored steps.

mod barcode;
mod brute;

pub use barcode::{Bar, Barcode};
pub use brute::{brute_force_barcode, BRUTE_FORCE_MAX_DIM, BRUTE_FORCE_MAX_INDICES};

use thiserror::Error;

use crate::bottleneck::bottleneck_distance;
use crate::linalg::{is_zero_vector, LinalgError, Matrix};
use crate::param::{Extended, Param};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistenceError {
    #[error("index points not strictly increasing at position {position}")]
    UnsortedIndices { position: usize },
    #[error("expected {expected} dimensions, found {found}")]
    DimCount { expected: usize, found: usize },
    #[error("expected {expected} steps, found {found}")]
    StepCount { expected: usize, found: usize },
    #[error("step at position {position} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        position: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("limit map has shape {found:?}, expected {expected:?}")]
    LimitShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("a limit slot needs at least one sample index")]
    LimitWithoutIndices,
    #[error("matrix modulus {found} differs from module modulus {expected}")]
    Modulus { expected: u32, found: u32 },
    #[error("invalid slot range {from:?}..{to:?}")]
    InvalidPosition { from: Slot, to: Slot },
    #[error("module has no colimit slot")]
    MissingColimit,
    #[error("operation needs a {expected:?} slot")]
    WrongLimitKind { expected: LimitKind },
    #[error("class has length {found}, expected {expected}")]
    ClassLength { expected: usize, found: usize },
    #[error("class is not witnessed at any sample index")]
    NotWitnessed,
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("modules disagree on having a colimit slot")]
    ColimitMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Strictly increasing finite sample of parameter values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet<P> {
    points: Vec<P>,
}

impl<P: Param> IndexSet<P> {
    pub fn new(points: Vec<P>) -> Result<Self, PersistenceError> {
        if let Some(position) = points.windows(2).position(|w| w[0] >= w[1]) {
            return Err(PersistenceError::UnsortedIndices { position: position + 1 });
        }
        Ok(IndexSet { points })
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, t: &P) -> Option<usize> {
        self.points.binary_search(t).ok()
    }

    pub fn contains(&self, t: &P) -> bool {
        self.position(t).is_some()
    }

    pub fn first(&self) -> Option<&P> {
        self.points.first()
    }

    pub fn last(&self) -> Option<&P> {
        self.points.last()
    }
}

/// Which end of the chain the limit slot sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitKind {
    /// Terminal slot `V_∞` with a map `V_{t_N} → V_∞`.
    Colimit,
    /// Initial slot `V_∞` with a map `V_∞ → V_{t_0}`; produced by duality.
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LimitSlot {
    pub kind: LimitKind,
    pub dim: usize,
    pub map: Matrix,
}

/// Addresses a slot of the chain: a sample position or the limit slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Index(usize),
    Limit,
}

/// First sample index at which a class lies in the image, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Appearance<P> {
    At(P),
    Never,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PersistenceModule<P> {
    modulus: u32,
    indices: IndexSet<P>,
    dims: Vec<usize>,
    steps: Vec<Matrix>,
    limit: Option<LimitSlot>,
}

impl<P: Param> PersistenceModule<P> {
    /// Assemble and validate.
    pub fn new(
        modulus: u32,
        indices: IndexSet<P>,
        dims: Vec<usize>,
        steps: Vec<Matrix>,
        limit: Option<LimitSlot>,
    ) -> Result<Self, PersistenceError> {
        let m = PersistenceModule::new_unchecked(modulus, indices, dims, steps, limit);
        m.validate()?;
        Ok(m)
    }

    /// Assemble without validation; pair with [`PersistenceModule::validate`].
    pub fn new_unchecked(
        modulus: u32,
        indices: IndexSet<P>,
        dims: Vec<usize>,
        steps: Vec<Matrix>,
        limit: Option<LimitSlot>,
    ) -> Self {
        PersistenceModule {
            modulus,
            indices,
            dims,
            steps,
            limit,
        }
    }

    /// Constant chain of identities on `dim`-dimensional spaces.
    pub fn identity_chain(modulus: u32, points: Vec<P>, dim: usize, colimit: bool) -> Result<Self, PersistenceError> {
        let n = points.len();
        let limit = (colimit && n > 0).then(|| LimitSlot {
            kind: LimitKind::Colimit,
            dim,
            map: Matrix::identity(dim, modulus),
        });
        PersistenceModule::new(
            modulus,
            IndexSet::new(points)?,
            vec![dim; n],
            vec![Matrix::identity(dim, modulus); n.saturating_sub(1)],
            limit,
        )
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn indices(&self) -> &IndexSet<P> {
        &self.indices
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn steps(&self) -> &[Matrix] {
        &self.steps
    }

    pub fn limit(&self) -> Option<&LimitSlot> {
        self.limit.as_ref()
    }

    pub fn has_colimit(&self) -> bool {
        matches!(self.limit, Some(LimitSlot { kind: LimitKind::Colimit, .. }))
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Check every shape invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), PersistenceError> {
        let n = self.indices.len();
        if self.dims.len() != n {
            return Err(PersistenceError::DimCount {
                expected: n,
                found: self.dims.len(),
            });
        }
        let expected_steps = n.saturating_sub(1);
        if self.steps.len() != expected_steps {
            return Err(PersistenceError::StepCount {
                expected: expected_steps,
                found: self.steps.len(),
            });
        }
        for (position, step) in self.steps.iter().enumerate() {
            if step.modulus() != self.modulus {
                return Err(PersistenceError::Modulus {
                    expected: self.modulus,
                    found: step.modulus(),
                });
            }
            let expected = (self.dims[position + 1], self.dims[position]);
            if step.shape() != expected {
                return Err(PersistenceError::ShapeMismatch {
                    position,
                    expected,
                    found: step.shape(),
                });
            }
        }
        if let Some(slot) = &self.limit {
            if n == 0 {
                return Err(PersistenceError::LimitWithoutIndices);
            }
            if slot.map.modulus() != self.modulus {
                return Err(PersistenceError::Modulus {
                    expected: self.modulus,
                    found: slot.map.modulus(),
                });
            }
            let expected = match slot.kind {
                LimitKind::Colimit => (slot.dim, self.dims[n - 1]),
                LimitKind::Limit => (self.dims[0], slot.dim),
            };
            if slot.map.shape() != expected {
                return Err(PersistenceError::LimitShape {
                    expected,
                    found: slot.map.shape(),
                });
            }
        }
        Ok(())
    }

    // ---- slot chain view -------------------------------------------------

    fn limit_offset(&self) -> usize {
        usize::from(matches!(self.limit, Some(LimitSlot { kind: LimitKind::Limit, .. })))
    }

    /// Dimensions of every slot in chain order, limit slot included.
    pub(crate) fn slot_dims(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len() + 1);
        if let Some(LimitSlot { kind: LimitKind::Limit, dim, .. }) = &self.limit {
            out.push(*dim);
        }
        out.extend_from_slice(&self.dims);
        if let Some(LimitSlot { kind: LimitKind::Colimit, dim, .. }) = &self.limit {
            out.push(*dim);
        }
        out
    }

    /// Maps between consecutive slots in chain order.
    pub(crate) fn slot_steps(&self) -> Vec<&Matrix> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        if let Some(LimitSlot { kind: LimitKind::Limit, map, .. }) = &self.limit {
            out.push(map);
        }
        out.extend(self.steps.iter());
        if let Some(LimitSlot { kind: LimitKind::Colimit, map, .. }) = &self.limit {
            out.push(map);
        }
        out
    }

    fn slot_position(&self, slot: Slot) -> Option<usize> {
        match slot {
            Slot::Index(i) if i < self.len() => Some(i + self.limit_offset()),
            Slot::Index(_) => None,
            Slot::Limit => match &self.limit {
                None => None,
                Some(LimitSlot { kind: LimitKind::Limit, .. }) => Some(0),
                Some(LimitSlot { kind: LimitKind::Colimit, .. }) => Some(self.len()),
            },
        }
    }

    fn composite_between(&self, from: usize, to: usize) -> Matrix {
        let dims = self.slot_dims();
        let steps = self.slot_steps();
        let mut acc = Matrix::identity(dims[from], self.modulus);
        for step in &steps[from..to] {
            acc = step.compose(&acc).expect("validated shapes");
        }
        acc
    }

    /// The structure map between two slots, `from` not after `to`.
    pub fn composite(&self, from: Slot, to: Slot) -> Result<Matrix, PersistenceError> {
        match (self.slot_position(from), self.slot_position(to)) {
            (Some(a), Some(b)) if a <= b => Ok(self.composite_between(a, b)),
            _ => Err(PersistenceError::InvalidPosition { from, to }),
        }
    }

    /// Rank of the structure map between two slots.
    pub fn rank_invariant(&self, from: Slot, to: Slot) -> Result<usize, PersistenceError> {
        Ok(self.composite(from, to)?.rank())
    }

    /// Barcode by inclusion–exclusion over the rank invariant.
    ///
    /// Bars are closed at both sample endpoints. A bar reaching the colimit
    /// slot dies at `+∞`; one starting at an initial limit slot is born at
    /// `-∞`. Classes living only in the limit slot are not bars.
    pub fn barcode(&self) -> Result<Barcode<P>, PersistenceError> {
        self.validate()?;
        let dims = self.slot_dims();
        let steps = self.slot_steps();
        let s = dims.len();
        // rank[i][j] for i <= j, computed by extending composites rightwards.
        let mut rank = vec![vec![0usize; s]; s];
        for i in 0..s {
            let mut acc = Matrix::identity(dims[i], self.modulus);
            rank[i][i] = dims[i];
            for j in i + 1..s {
                acc = steps[j - 1].compose(&acc)?;
                rank[i][j] = acc.rank();
            }
        }
        let r = |i: isize, j: usize| -> i64 {
            if i < 0 || j >= s {
                0
            } else {
                rank[i as usize][j] as i64
            }
        };
        let limit_pos = self.slot_position(Slot::Limit);
        let mut barcode = Barcode::new();
        for i in 0..s {
            for j in i..s {
                if Some(i) == limit_pos && j == i {
                    continue;
                }
                let ii = i as isize;
                let mu = r(ii, j) - r(ii - 1, j) - r(ii, j + 1) + r(ii - 1, j + 1);
                debug_assert!(mu >= 0, "negative multiplicity");
                if mu > 0 {
                    barcode.insert(Bar::new(self.slot_endpoint(i), self.slot_endpoint(j)), mu as usize);
                }
            }
        }
        Ok(barcode)
    }

    pub(crate) fn slot_endpoint(&self, position: usize) -> Extended<P> {
        let offset = self.limit_offset();
        match &self.limit {
            Some(LimitSlot { kind: LimitKind::Limit, .. }) if position == 0 => Extended::NegInf,
            Some(LimitSlot { kind: LimitKind::Colimit, .. }) if position == self.len() => Extended::PosInf,
            _ => Extended::Finite(self.indices.points[position - offset].clone()),
        }
    }

    /// Reparametrize so the new module at `t` is the old one at `t + s`.
    pub fn shift(&self, s: &P) -> PersistenceModule<P> {
        let points = self.indices.points.iter().map(|t| t.clone() - s.clone()).collect();
        PersistenceModule {
            indices: IndexSet { points },
            ..self.clone()
        }
    }

    /// Negate and reverse the indices and transpose every map. A colimit
    /// slot becomes an initial limit slot and vice versa.
    pub fn dual(&self) -> PersistenceModule<P> {
        let points = self.indices.points.iter().rev().map(|t| -t.clone()).collect();
        let dims = self.dims.iter().rev().copied().collect();
        let steps = self.steps.iter().rev().map(Matrix::transpose).collect();
        let limit = self.limit.as_ref().map(|slot| LimitSlot {
            kind: match slot.kind {
                LimitKind::Colimit => LimitKind::Limit,
                LimitKind::Limit => LimitKind::Colimit,
            },
            dim: slot.dim,
            map: slot.map.transpose(),
        });
        PersistenceModule {
            modulus: self.modulus,
            indices: IndexSet { points },
            dims,
            steps,
            limit,
        }
    }

    fn check_class(&self, class: &[u32], kind: LimitKind) -> Result<&LimitSlot, PersistenceError> {
        let slot = self.limit.as_ref().ok_or(PersistenceError::MissingColimit)?;
        if slot.kind != kind {
            return Err(PersistenceError::WrongLimitKind { expected: kind });
        }
        if class.len() != slot.dim {
            return Err(PersistenceError::ClassLength {
                expected: slot.dim,
                found: class.len(),
            });
        }
        Ok(slot)
    }

    /// Maps `V_{t_i} → V_∞` for every sample index.
    pub fn colimit_maps(&self) -> Result<Vec<Matrix>, PersistenceError> {
        let slot = self.limit.as_ref().ok_or(PersistenceError::MissingColimit)?;
        if slot.kind != LimitKind::Colimit {
            return Err(PersistenceError::WrongLimitKind {
                expected: LimitKind::Colimit,
            });
        }
        let n = self.len();
        let mut maps = vec![slot.map.clone(); n];
        for i in (0..n.saturating_sub(1)).rev() {
            maps[i] = maps[i + 1].compose(&self.steps[i])?;
        }
        Ok(maps)
    }

    /// Maps `V_∞ → V_{t_i}` for every sample index of a module with an initial slot.
    pub fn limit_maps(&self) -> Result<Vec<Matrix>, PersistenceError> {
        let slot = self.limit.as_ref().ok_or(PersistenceError::MissingColimit)?;
        if slot.kind != LimitKind::Limit {
            return Err(PersistenceError::WrongLimitKind {
                expected: LimitKind::Limit,
            });
        }
        let mut maps = Vec::with_capacity(self.len());
        maps.push(slot.map.clone());
        for step in &self.steps {
            let next = step.compose(maps.last().expect("nonempty"))?;
            maps.push(next);
        }
        Ok(maps)
    }

    /// Smallest sample index whose image in `V_∞` contains `class`.
    pub fn min_appearance(&self, class: &[u32]) -> Result<Appearance<P>, PersistenceError> {
        self.check_class(class, LimitKind::Colimit)?;
        for (t, map) in self.indices.points.iter().zip(self.colimit_maps()?) {
            if Matrix::membership(class, &map)?.is_some() {
                return Ok(Appearance::At(t.clone()));
            }
        }
        Ok(Appearance::Never)
    }

    /// Largest sample index at which `class ∈ V_∞` of an initial slot is still nonzero.
    pub fn last_survival(&self, class: &[u32]) -> Result<Appearance<P>, PersistenceError> {
        self.check_class(class, LimitKind::Limit)?;
        let maps = self.limit_maps()?;
        for (t, map) in self.indices.points.iter().zip(maps).rev() {
            if !is_zero_vector(&map.apply(class)?) {
                return Ok(Appearance::At(t.clone()));
            }
        }
        Ok(Appearance::Never)
    }

    /// Spectral invariant of a limit-slot class.
    ///
    /// With a colimit slot this is the birth of the latest infinite bar
    /// needed to express the class (`-∞` for zero). With an initial slot it
    /// is the mirror notion: the death of the earliest bar needed (`+∞` for
    /// zero), so that duality negates the value.
    pub fn spectral_invariant(&self, class: &[u32]) -> Result<Extended<P>, PersistenceError> {
        let kind = self.limit.as_ref().ok_or(PersistenceError::MissingColimit)?.kind;
        if is_zero_vector(class) {
            self.check_class(class, kind)?;
            return Ok(match kind {
                LimitKind::Colimit => Extended::NegInf,
                LimitKind::Limit => Extended::PosInf,
            });
        }
        let found = match kind {
            LimitKind::Colimit => self.min_appearance(class)?,
            LimitKind::Limit => self.last_survival(class)?,
        };
        match found {
            Appearance::At(t) => Ok(Extended::Finite(t)),
            Appearance::Never => Err(PersistenceError::NotWitnessed),
        }
    }
}

/// Interleaving distance through the isometry theorem: the bottleneck
/// distance of the two barcodes.
pub fn interleaving_distance<P: Param>(
    a: &PersistenceModule<P>,
    b: &PersistenceModule<P>,
) -> Result<Extended<P>, PersistenceError> {
    let kind = |m: &PersistenceModule<P>| m.limit.as_ref().map(|s| s.kind);
    if kind(a) != kind(b) {
        return Err(PersistenceError::ColimitMismatch);
    }
    Ok(bottleneck_distance(&a.barcode()?, &b.barcode()?))
}
