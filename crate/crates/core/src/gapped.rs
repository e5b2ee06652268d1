//! λ-gapped modules.
//!
//! The index set carries the partial order `s ≤_λ t` iff `s = t` or
//! `s ≤ t − λ`. A [`GappedModule`] stores a matrix for every comparable
//! pair of sample positions, plus one map per sample into (or, after
//! dualizing, out of) the limit space `V_∞`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bottleneck::bottleneck_distance;
use crate::linalg::{is_zero_vector, LinalgError, Matrix};
use crate::param::{Extended, Param};
use crate::persistence::{
    interleaving_distance, IndexSet, LimitKind, LimitSlot, PersistenceError, PersistenceModule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GappedError {
    #[error("gap must be positive, got {0}")]
    NonPositiveGap(String),
    #[error("expected {expected} dimensions, found {found}")]
    DimCount { expected: usize, found: usize },
    #[error("missing map for comparable pair ({s}, {t})")]
    MissingMap { s: String, t: String },
    #[error("map stored for incomparable pair ({s}, {t})")]
    IncomparablePair { s: String, t: String },
    #[error("map ({s}, {t}) has shape {found:?}, expected {expected:?}")]
    MapShape {
        s: String,
        t: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("map ({t}, {t}) is not the identity")]
    NotIdentity { t: String },
    #[error("functoriality fails on ({r}, {s}, {t})")]
    Functoriality { r: String, s: String, t: String },
    #[error("expected {expected} limit maps, found {found}")]
    LimitCount { expected: usize, found: usize },
    #[error("limit map at {t} has shape {found:?}, expected {expected:?}")]
    LimitShape {
        t: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("limit compatibility fails on ({s}, {t})")]
    LimitCompatibility { s: String, t: String },
    #[error("matrix modulus {found} differs from module modulus {expected}")]
    Modulus { expected: u32, found: u32 },
    #[error("step below gap: {step} < {gap}")]
    StepBelowGap { step: String, gap: String },
    #[error("{0} is not a sample index")]
    NotInIndexSet(String),
    #[error("empty restriction window")]
    EmptyWindow,
    #[error("no normalized restriction in window")]
    NoNormalizedRestriction,
    #[error("class not witnessed in window")]
    NotWitnessed,
    #[error("module has no limit slot")]
    MissingLimit,
    #[error("operation needs a {0:?} slot")]
    WrongLimitKind(LimitKind),
    #[error("class has length {found}, expected {expected}")]
    ClassLength { expected: usize, found: usize },
    #[error("generalized form {generalized} disagrees with normalized form {normalized}")]
    GeneralizedMismatch { normalized: String, generalized: String },
    #[error("incompatible modules: {0}")]
    Incompatible(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("insufficient restrictions: found {0}")]
    InsufficientRestrictions(usize),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `s ≤_λ t`.
pub fn comparable<P: Param>(s: &P, t: &P, gap: &P) -> bool {
    s == t || *s <= t.clone() - gap.clone()
}

/// Maps `V_t → V_∞` (colimit) or `V_∞ → V_t` (initial slot), one per sample.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GappedLimit {
    pub kind: LimitKind,
    pub dim: usize,
    pub maps: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GappedModule<P> {
    modulus: u32,
    gap: P,
    indices: IndexSet<P>,
    dims: Vec<usize>,
    maps: BTreeMap<(usize, usize), Matrix>,
    limit: Option<GappedLimit>,
}

impl<P: Param> GappedModule<P> {
    pub fn new(
        modulus: u32,
        gap: P,
        indices: IndexSet<P>,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), Matrix>,
        limit: Option<GappedLimit>,
    ) -> Result<Self, GappedError> {
        let g = GappedModule::new_unchecked(modulus, gap, indices, dims, maps, limit);
        g.validate()?;
        Ok(g)
    }

    pub fn new_unchecked(
        modulus: u32,
        gap: P,
        indices: IndexSet<P>,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), Matrix>,
        limit: Option<GappedLimit>,
    ) -> Self {
        GappedModule {
            modulus,
            gap,
            indices,
            dims,
            maps,
            limit,
        }
    }

    /// Build from a totally ordered chain: `ι_{s,t}` is the chain composite.
    pub fn from_chain(gap: P, chain: &PersistenceModule<P>) -> Result<Self, GappedError> {
        chain.validate()?;
        let n = chain.len();
        let pts = chain.indices().points();
        let mut maps = BTreeMap::new();
        for i in 0..n {
            let mut acc = Matrix::identity(chain.dims()[i], chain.modulus());
            maps.insert((i, i), acc.clone());
            for j in i + 1..n {
                acc = chain.steps()[j - 1].compose(&acc)?;
                if comparable(&pts[i], &pts[j], &gap) {
                    maps.insert((i, j), acc.clone());
                }
            }
        }
        let limit = match chain.limit() {
            None => None,
            Some(slot) => Some(GappedLimit {
                kind: slot.kind,
                dim: slot.dim,
                maps: match slot.kind {
                    LimitKind::Colimit => chain.colimit_maps()?,
                    LimitKind::Limit => chain.limit_maps()?,
                },
            }),
        };
        GappedModule::new(
            chain.modulus(),
            gap,
            chain.indices().clone(),
            chain.dims().to_vec(),
            maps,
            limit,
        )
    }

    /// Module with identities on the diagonal, zero maps between distinct
    /// comparable samples and a zero-dimensional colimit.
    pub fn ephemeral(modulus: u32, gap: P, indices: IndexSet<P>, dims: Vec<usize>) -> Result<Self, GappedError> {
        let pts = indices.points().to_vec();
        let mut maps = BTreeMap::new();
        for i in 0..pts.len() {
            for j in i..pts.len() {
                if comparable(&pts[i], &pts[j], &gap) {
                    let m = if i == j {
                        Matrix::identity(dims[i], modulus)
                    } else {
                        Matrix::zero(dims[j], dims[i], modulus)
                    };
                    maps.insert((i, j), m);
                }
            }
        }
        let limit = Some(GappedLimit {
            kind: LimitKind::Colimit,
            dim: 0,
            maps: dims.iter().map(|&d| Matrix::zero(0, d, modulus)).collect(),
        });
        GappedModule::new(modulus, gap, indices, dims, maps, limit)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn gap(&self) -> &P {
        &self.gap
    }

    pub fn indices(&self) -> &IndexSet<P> {
        &self.indices
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.maps
    }

    pub fn limit(&self) -> Option<&GappedLimit> {
        self.limit.as_ref()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Structure map between sample positions `i ≤_λ j`.
    pub fn map(&self, i: usize, j: usize) -> Option<&Matrix> {
        self.maps.get(&(i, j))
    }

    /// Structure map between sample values.
    pub fn map_between(&self, s: &P, t: &P) -> Option<&Matrix> {
        self.map(self.indices.position(s)?, self.indices.position(t)?)
    }

    fn point(&self, i: usize) -> String {
        self.indices.points()[i].to_string()
    }

    /// Check functoriality on every composable triple and compatibility
    /// with the limit maps, reporting the first violation.
    pub fn validate(&self) -> Result<(), GappedError> {
        if !self.gap.is_positive() {
            return Err(GappedError::NonPositiveGap(self.gap.to_string()));
        }
        let n = self.len();
        if self.dims.len() != n {
            return Err(GappedError::DimCount {
                expected: n,
                found: self.dims.len(),
            });
        }
        let pts = self.indices.points();
        for &(i, j) in self.maps.keys() {
            if i >= n || j >= n || i > j || !comparable(&pts[i], &pts[j], &self.gap) {
                let name = |k: usize| pts.get(k).map_or_else(|| format!("#{k}"), ToString::to_string);
                return Err(GappedError::IncomparablePair { s: name(i), t: name(j) });
            }
        }
        let comparable_pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter(|&(i, j)| comparable(&pts[i], &pts[j], &self.gap))
            .collect();
        for &(i, j) in &comparable_pairs {
            let m = self.maps.get(&(i, j)).ok_or_else(|| GappedError::MissingMap {
                s: self.point(i),
                t: self.point(j),
            })?;
            if m.modulus() != self.modulus {
                return Err(GappedError::Modulus {
                    expected: self.modulus,
                    found: m.modulus(),
                });
            }
            let expected = (self.dims[j], self.dims[i]);
            if m.shape() != expected {
                return Err(GappedError::MapShape {
                    s: self.point(i),
                    t: self.point(j),
                    expected,
                    found: m.shape(),
                });
            }
            if i == j && !m.is_identity() {
                return Err(GappedError::NotIdentity { t: self.point(i) });
            }
        }
        for &(r, s) in &comparable_pairs {
            for t in s..n {
                if r == s || s == t {
                    continue;
                }
                let Some(st) = self.maps.get(&(s, t)) else { continue };
                let rs = &self.maps[&(r, s)];
                if st.compose(rs)? != self.maps[&(r, t)] {
                    return Err(GappedError::Functoriality {
                        r: self.point(r),
                        s: self.point(s),
                        t: self.point(t),
                    });
                }
            }
        }
        if let Some(limit) = &self.limit {
            if limit.maps.len() != n {
                return Err(GappedError::LimitCount {
                    expected: n,
                    found: limit.maps.len(),
                });
            }
            for (i, m) in limit.maps.iter().enumerate() {
                let expected = match limit.kind {
                    LimitKind::Colimit => (limit.dim, self.dims[i]),
                    LimitKind::Limit => (self.dims[i], limit.dim),
                };
                if m.modulus() != self.modulus {
                    return Err(GappedError::Modulus {
                        expected: self.modulus,
                        found: m.modulus(),
                    });
                }
                if m.shape() != expected {
                    return Err(GappedError::LimitShape {
                        t: self.point(i),
                        expected,
                        found: m.shape(),
                    });
                }
            }
            for &(s, t) in &comparable_pairs {
                if s == t {
                    continue;
                }
                let st = &self.maps[&(s, t)];
                let ok = match limit.kind {
                    LimitKind::Colimit => limit.maps[t].compose(st)? == limit.maps[s],
                    LimitKind::Limit => st.compose(&limit.maps[s])? == limit.maps[t],
                };
                if !ok {
                    return Err(GappedError::LimitCompatibility {
                        s: self.point(s),
                        t: self.point(t),
                    });
                }
            }
        }
        Ok(())
    }

    /// Reparametrize every index `t ↦ t + u`; all data is unchanged.
    pub fn translate(&self, u: &P) -> GappedModule<P> {
        let points = self.indices.points().iter().map(|t| t.clone() + u.clone()).collect();
        GappedModule {
            indices: IndexSet::new(points).expect("translation preserves order"),
            ..self.clone()
        }
    }

    /// Negate the indices, transpose every map and swap the limit slot
    /// between colimit and initial position.
    pub fn dual(&self) -> GappedModule<P> {
        let n = self.len();
        let points = self.indices.points().iter().rev().map(|t| -t.clone()).collect();
        let dims = self.dims.iter().rev().copied().collect();
        let maps = self
            .maps
            .iter()
            .map(|(&(i, j), m)| ((n - 1 - j, n - 1 - i), m.transpose()))
            .collect();
        let limit = self.limit.as_ref().map(|l| GappedLimit {
            kind: match l.kind {
                LimitKind::Colimit => LimitKind::Limit,
                LimitKind::Limit => LimitKind::Colimit,
            },
            dim: l.dim,
            maps: l.maps.iter().rev().map(Matrix::transpose).collect(),
        });
        GappedModule {
            modulus: self.modulus,
            gap: self.gap.clone(),
            indices: IndexSet::new(points).expect("negation reverses order"),
            dims,
            maps,
            limit,
        }
    }

    /// Pointwise direct sum over a shared index set and gap. Limit spaces
    /// are summed as well.
    pub fn direct_sum(&self, other: &GappedModule<P>) -> Result<GappedModule<P>, GappedError> {
        if self.indices != other.indices || self.gap != other.gap || self.modulus != other.modulus {
            return Err(GappedError::Incompatible("index sets, gaps or moduli differ".into()));
        }
        let kind = |g: &GappedModule<P>| g.limit.as_ref().map(|l| l.kind);
        if kind(self) != kind(other) {
            return Err(GappedError::Incompatible("limit slots differ".into()));
        }
        let mut maps = BTreeMap::new();
        for (key, m) in &self.maps {
            maps.insert(*key, m.direct_sum(&other.maps[key])?);
        }
        let limit = match (&self.limit, &other.limit) {
            (Some(a), Some(b)) => Some(GappedLimit {
                kind: a.kind,
                dim: a.dim + b.dim,
                maps: a
                    .maps
                    .iter()
                    .zip(&b.maps)
                    .map(|(x, y)| x.direct_sum(y))
                    .collect::<Result<_, _>>()?,
            }),
            _ => None,
        };
        GappedModule::new(
            self.modulus,
            self.gap.clone(),
            self.indices.clone(),
            self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            maps,
            limit,
        )
    }

    /// Maximal arithmetic progressions of step `δ` inside the sample, each
    /// labeled so that `a(0) ∈ [0, δ)`. Without `normalized_only`, every
    /// contiguous sub-progression labeled by its first element is added.
    pub fn enumerate_restrictions(
        &self,
        step: &P,
        normalized_only: bool,
    ) -> Result<Vec<RestrictionSequence<P>>, GappedError> {
        if *step < self.gap {
            return Err(GappedError::StepBelowGap {
                step: step.to_string(),
                gap: self.gap.to_string(),
            });
        }
        let mut out: Vec<RestrictionSequence<P>> = Vec::new();
        let mut push = |r: RestrictionSequence<P>| {
            if !out.contains(&r) {
                out.push(r);
            }
        };
        for x in self.indices.points() {
            if self.indices.contains(&(x.clone() - step.clone())) {
                continue;
            }
            let mut run = vec![x.clone()];
            loop {
                let next = run.last().expect("nonempty").clone() + step.clone();
                if !self.indices.contains(&next) {
                    break;
                }
                run.push(next);
            }
            let len = run.len() as i64;
            let k = x.floor_div(step).expect("positive step");
            push(RestrictionSequence::new(
                x.clone() - step.times(k),
                step.clone(),
                k,
                k + len - 1,
            )?);
            if !normalized_only {
                for start in 0..run.len() {
                    for end in start..run.len() {
                        push(RestrictionSequence::new(
                            run[start].clone(),
                            step.clone(),
                            0,
                            (end - start) as i64,
                        )?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Totally ordered module `i ↦ V_{a(i)}` with the inherited limit slot.
    pub fn restrict(&self, r: &RestrictionSequence<P>) -> Result<PersistenceModule<P>, GappedError> {
        if r.step < self.gap {
            return Err(GappedError::StepBelowGap {
                step: r.step.to_string(),
                gap: self.gap.to_string(),
            });
        }
        let points = r.points();
        let positions = points
            .iter()
            .map(|t| {
                self.indices
                    .position(t)
                    .ok_or_else(|| GappedError::NotInIndexSet(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let dims = positions.iter().map(|&i| self.dims[i]).collect();
        let steps = positions
            .windows(2)
            .map(|w| self.maps[&(w[0], w[1])].clone())
            .collect();
        let limit = self.limit.as_ref().map(|l| LimitSlot {
            kind: l.kind,
            dim: l.dim,
            map: match l.kind {
                LimitKind::Colimit => l.maps[*positions.last().expect("nonempty window")].clone(),
                LimitKind::Limit => l.maps[positions[0]].clone(),
            },
        });
        Ok(PersistenceModule::new(self.modulus, IndexSet::new(points)?, dims, steps, limit)?)
    }

    fn check_class(&self, class: &[u32]) -> Result<LimitKind, GappedError> {
        let limit = self.limit.as_ref().ok_or(GappedError::MissingLimit)?;
        if class.len() != limit.dim {
            return Err(GappedError::ClassLength {
                expected: limit.dim,
                found: class.len(),
            });
        }
        Ok(limit.kind)
    }

    // Per-restriction values, skipping restrictions that never see the class.
    fn restricted_values(
        &self,
        class: &[u32],
        restrictions: &[RestrictionSequence<P>],
        relabel: bool,
    ) -> Result<Vec<Extended<P>>, GappedError> {
        let mut values = Vec::new();
        for r in restrictions {
            let mut pm = self.restrict(r)?;
            let a0 = r.offset.clone();
            if relabel {
                pm = pm.shift(&a0);
            }
            match pm.spectral_invariant(class) {
                Ok(v) => values.push(if relabel { v.map(|t| t + a0.clone()) } else { v }),
                Err(PersistenceError::NotWitnessed) => {}
                Err(e) => return Err(e.into()),
            }
        }
        Ok(values)
    }

    fn extremum(kind: LimitKind, values: Vec<Extended<P>>) -> Result<Extended<P>, GappedError> {
        let best = match kind {
            LimitKind::Colimit => values.into_iter().min(),
            LimitKind::Limit => values.into_iter().max(),
        };
        best.map(|v| -v).ok_or(GappedError::NotWitnessed)
    }

    /// Spectral invariant over normalized λ-restrictions.
    ///
    /// With a colimit slot, `c(a) = −min` of the per-restriction invariants
    /// and `c(0) = +∞`. With an initial slot (a dual), `c(a) = −max` and
    /// `c(0) = −∞`. The generalized form over all restrictions is computed
    /// alongside and must agree.
    pub fn spectral_invariant(&self, class: &[u32]) -> Result<Extended<P>, GappedError> {
        let kind = self.check_class(class)?;
        if is_zero_vector(class) {
            return Ok(match kind {
                LimitKind::Colimit => Extended::PosInf,
                LimitKind::Limit => Extended::NegInf,
            });
        }
        let normalized = self.enumerate_restrictions(&self.gap, true)?;
        if normalized.is_empty() {
            return Err(GappedError::NoNormalizedRestriction);
        }
        let value = Self::extremum(kind, self.restricted_values(class, &normalized, false)?)?;
        let generalized = self.generalized_spectral_invariant(class)?;
        if generalized != value {
            return Err(GappedError::GeneralizedMismatch {
                normalized: value.to_string(),
                generalized: generalized.to_string(),
            });
        }
        Ok(value)
    }

    /// The same quantity over every λ-restriction, each shifted to start at
    /// zero and corrected by its offset.
    pub fn generalized_spectral_invariant(&self, class: &[u32]) -> Result<Extended<P>, GappedError> {
        let kind = self.check_class(class)?;
        if is_zero_vector(class) {
            return Ok(match kind {
                LimitKind::Colimit => Extended::PosInf,
                LimitKind::Limit => Extended::NegInf,
            });
        }
        let all = self.enumerate_restrictions(&self.gap, false)?;
        Self::extremum(kind, self.restricted_values(class, &all, true)?)
    }

    /// A functional `a*` on `V_∞` with `a*(a) = 1` vanishing on every image
    /// `im π_t` with `t` below the first appearance of `a`. `None` when `a`
    /// is zero, never appears, or already lies in the span of the earlier
    /// images.
    pub fn dual_pairing(&self, class: &[u32]) -> Result<Option<Vec<u32>>, GappedError> {
        if self.check_class(class)? != LimitKind::Colimit {
            return Err(GappedError::WrongLimitKind(LimitKind::Colimit));
        }
        if is_zero_vector(class) {
            return Ok(None);
        }
        let limit = self.limit.as_ref().expect("checked");
        let mut earlier: Vec<Vec<u32>> = Vec::new();
        let mut found = false;
        for m in &limit.maps {
            if Matrix::membership(class, m)?.is_some() {
                found = true;
                break;
            }
            earlier.extend(m.column_space_basis());
        }
        if !found {
            return Ok(None);
        }
        let mut rows: Vec<Vec<u32>> = if earlier.is_empty() {
            Vec::new()
        } else {
            Matrix::from_columns(limit.dim, self.modulus, &earlier)?
                .column_space_basis()
        };
        rows.push(class.to_vec());
        let constraints = Matrix::from_columns(limit.dim, self.modulus, &rows)?.transpose();
        let mut target = vec![0u32; rows.len()];
        *target.last_mut().expect("nonempty") = 1;
        Ok(Matrix::membership(&target, &constraints)?)
    }

    /// Least sample at which the class lies in the image, or eternal when
    /// it does at every sample.
    pub fn eternal_check(&self, class: &[u32]) -> Result<Eternality<P>, GappedError> {
        if self.check_class(class)? != LimitKind::Colimit {
            return Err(GappedError::WrongLimitKind(LimitKind::Colimit));
        }
        let limit = self.limit.as_ref().expect("checked");
        let mut first = None;
        let mut everywhere = true;
        for (t, m) in self.indices.points().iter().zip(&limit.maps) {
            if Matrix::membership(class, m)?.is_some() {
                first.get_or_insert_with(|| t.clone());
            } else {
                everywhere = false;
            }
        }
        Ok(match (everywhere, first) {
            (true, _) => Eternality::Eternal,
            (false, Some(t)) => Eternality::NotEternal { threshold: Some(t) },
            (false, None) => Eternality::NotEternal { threshold: None },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eternality<P> {
    Eternal,
    /// `threshold` is the least sample of appearance, `None` if never.
    NotEternal { threshold: Option<P> },
}

/// `a(i) = offset + i·step` for `i` in `window_start..=window_end`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictionSequence<P> {
    pub offset: P,
    pub step: P,
    pub window_start: i64,
    pub window_end: i64,
}

impl<P: Param> RestrictionSequence<P> {
    pub fn new(offset: P, step: P, window_start: i64, window_end: i64) -> Result<Self, GappedError> {
        if !step.is_positive() {
            return Err(GappedError::NonPositiveGap(step.to_string()));
        }
        if window_end < window_start {
            return Err(GappedError::EmptyWindow);
        }
        Ok(RestrictionSequence {
            offset,
            step,
            window_start,
            window_end,
        })
    }

    pub fn at(&self, i: i64) -> P {
        self.offset.clone() + self.step.times(i)
    }

    pub fn points(&self) -> Vec<P> {
        (self.window_start..=self.window_end).map(|i| self.at(i)).collect()
    }

    pub fn len(&self) -> usize {
        (self.window_end - self.window_start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_normalized(&self) -> bool {
        self.offset >= P::zero() && self.offset < self.step
    }
}

/// Morphism families along one restriction: `phi[k]: V_{a(i)} → W_{a(i+1)}`
/// and `psi[k]: W_{a(i)} → V_{a(i+1)}` for `i = window_start + k`. At
/// `δ = 0` both families are pointwise, `V_{a(i)} → W_{a(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavingCertificate<P> {
    pub restriction: RestrictionSequence<P>,
    pub phi: Vec<Matrix>,
    pub psi: Vec<Matrix>,
}

/// Which commuting condition failed first, and at which window index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateFailure {
    /// `ψ_{i+1} ∘ φ_i ≠ ι^V_{i,i+2}`.
    TriangleV(i64),
    /// `φ_{i+1} ∘ ψ_i ≠ ι^W_{i,i+2}`.
    TriangleW(i64),
    /// `φ_{i+1} ∘ ι^V_{i,i+1} ≠ ι^W_{i+1,i+2} ∘ φ_i`.
    NaturalityPhi(i64),
    /// `ψ_{i+1} ∘ ι^W_{i,i+1} ≠ ι^V_{i+1,i+2} ∘ ψ_i`.
    NaturalityPsi(i64),
}

impl CertificateFailure {
    pub fn index(&self) -> i64 {
        match *self {
            CertificateFailure::TriangleV(i)
            | CertificateFailure::TriangleW(i)
            | CertificateFailure::NaturalityPhi(i)
            | CertificateFailure::NaturalityPsi(i) => i,
        }
    }
}

fn positions<P: Param>(g: &GappedModule<P>, r: &RestrictionSequence<P>) -> Result<Vec<usize>, GappedError> {
    r.points()
        .iter()
        .map(|t| {
            g.indices
                .position(t)
                .ok_or_else(|| GappedError::NotInIndexSet(t.to_string()))
        })
        .collect()
}

fn expect_shape(m: &Matrix, shape: (usize, usize), what: &str, i: i64) -> Result<(), GappedError> {
    if m.shape() != shape {
        return Err(GappedError::Certificate(format!(
            "{what} at index {i} has shape {:?}, expected {shape:?}",
            m.shape()
        )));
    }
    Ok(())
}

/// Check both triangle families and naturality of `φ`, `ψ` along the
/// certificate's restriction. `Ok(None)` means the certificate is valid.
pub fn verify_interleaving_certificate<P: Param>(
    g: &GappedModule<P>,
    h: &GappedModule<P>,
    delta: &P,
    cert: &InterleavingCertificate<P>,
) -> Result<Option<CertificateFailure>, GappedError> {
    let r = &cert.restriction;
    let pg = positions(g, r)?;
    let ph = positions(h, r)?;
    let n = pg.len();
    let start = r.window_start;
    let iv = |k: usize, l: usize| &g.maps[&(pg[k], pg[l])];
    let iw = |k: usize, l: usize| &h.maps[&(ph[k], ph[l])];

    if *delta == P::zero() {
        if g != h {
            return Err(GappedError::Certificate("δ = 0 needs identical modules".into()));
        }
        if r.step < g.gap {
            return Err(GappedError::Certificate("restriction step below gap".into()));
        }
        if cert.phi.len() != n || cert.psi.len() != n {
            return Err(GappedError::Certificate(format!("expected {n} maps per family")));
        }
        for k in 0..n {
            let i = start + k as i64;
            let d = g.dims[pg[k]];
            expect_shape(&cert.phi[k], (d, d), "phi", i)?;
            expect_shape(&cert.psi[k], (d, d), "psi", i)?;
            if !cert.psi[k].compose(&cert.phi[k])?.is_identity() {
                return Ok(Some(CertificateFailure::TriangleV(i)));
            }
            if !cert.phi[k].compose(&cert.psi[k])?.is_identity() {
                return Ok(Some(CertificateFailure::TriangleW(i)));
            }
            if k + 1 < n {
                if cert.phi[k + 1].compose(iv(k, k + 1))? != iw(k, k + 1).compose(&cert.phi[k])? {
                    return Ok(Some(CertificateFailure::NaturalityPhi(i)));
                }
                if cert.psi[k + 1].compose(iw(k, k + 1))? != iv(k, k + 1).compose(&cert.psi[k])? {
                    return Ok(Some(CertificateFailure::NaturalityPsi(i)));
                }
            }
        }
        return Ok(None);
    }

    let floor = g.gap.clone().max(h.gap.clone());
    if *delta < floor {
        return Err(GappedError::Certificate(format!("δ = {delta} is below both gaps")));
    }
    if r.step != *delta {
        return Err(GappedError::Certificate(format!(
            "restriction step {} differs from δ = {delta}",
            r.step
        )));
    }
    if cert.phi.len() + 1 != n || cert.psi.len() + 1 != n {
        return Err(GappedError::Certificate(format!(
            "expected {} maps per family",
            n.saturating_sub(1)
        )));
    }
    for k in 0..n.saturating_sub(1) {
        let i = start + k as i64;
        expect_shape(&cert.phi[k], (h.dims[ph[k + 1]], g.dims[pg[k]]), "phi", i)?;
        expect_shape(&cert.psi[k], (g.dims[pg[k + 1]], h.dims[ph[k]]), "psi", i)?;
    }
    for k in 0..n.saturating_sub(2) {
        let i = start + k as i64;
        if cert.psi[k + 1].compose(&cert.phi[k])? != *iv(k, k + 2) {
            return Ok(Some(CertificateFailure::TriangleV(i)));
        }
        if cert.phi[k + 1].compose(&cert.psi[k])? != *iw(k, k + 2) {
            return Ok(Some(CertificateFailure::TriangleW(i)));
        }
        if cert.phi[k + 1].compose(iv(k, k + 1))? != iw(k + 1, k + 2).compose(&cert.phi[k])? {
            return Ok(Some(CertificateFailure::NaturalityPhi(i)));
        }
        if cert.psi[k + 1].compose(iw(k, k + 1))? != iv(k + 1, k + 2).compose(&cert.psi[k])? {
            return Ok(Some(CertificateFailure::NaturalityPsi(i)));
        }
    }
    Ok(None)
}

/// Identity families for the `δ = 0` self-interleaving.
pub fn identity_certificate<P: Param>(
    g: &GappedModule<P>,
    r: &RestrictionSequence<P>,
) -> Result<InterleavingCertificate<P>, GappedError> {
    let ids: Vec<Matrix> = positions(g, r)?
        .iter()
        .map(|&i| Matrix::identity(g.dims[i], g.modulus))
        .collect();
    Ok(InterleavingCertificate {
        restriction: r.clone(),
        phi: ids.clone(),
        psi: ids,
    })
}

/// Structure maps `ι_{a(i), a(i+1)}` in both directions, interleaving `G`
/// with itself at `δ = step`.
pub fn structure_map_certificate<P: Param>(
    g: &GappedModule<P>,
    r: &RestrictionSequence<P>,
) -> Result<InterleavingCertificate<P>, GappedError> {
    let pos = positions(g, r)?;
    let maps: Vec<Matrix> = pos.windows(2).map(|w| g.maps[&(w[0], w[1])].clone()).collect();
    Ok(InterleavingCertificate {
        restriction: r.clone(),
        phi: maps.clone(),
        psi: maps,
    })
}

/// `H = translate(G, u) ⊕ E` with `E` ephemeral of the given dims.
pub fn padded_translate<P: Param>(g: &GappedModule<P>, u: &P, pad: &[usize]) -> Result<GappedModule<P>, GappedError> {
    let t = g.translate(u);
    let e = GappedModule::ephemeral(g.modulus, g.gap.clone(), t.indices.clone(), pad.to_vec())?;
    t.direct_sum(&e)
}

/// Certificate between `G` and `padded_translate(G, u, pad)` at
/// `δ = restriction step`, built from structure maps of `G`: the padding
/// is sent to zero and receives zero.
pub fn translation_certificate<P: Param>(
    g: &GappedModule<P>,
    u: &P,
    pad: &[usize],
    r: &RestrictionSequence<P>,
) -> Result<InterleavingCertificate<P>, GappedError> {
    let pts = r.points();
    let p = g.modulus;
    let pos = |t: &P| {
        g.indices
            .position(t)
            .ok_or_else(|| GappedError::NotInIndexSet(t.to_string()))
    };
    let ig = |s: &P, t: &P| -> Result<Matrix, GappedError> {
        g.maps
            .get(&(pos(s)?, pos(t)?))
            .cloned()
            .ok_or_else(|| GappedError::Certificate(format!("{s} and {t} are not comparable")))
    };
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        // H_b = G_{b-u} ⊕ E_b
        let src = b.clone() - u.clone();
        let e_b = pad[pos(&src)?];
        let top = ig(a, &src)?;
        phi.push(Matrix::vstack(&[&top, &Matrix::zero(e_b, top.cols(), p)])?);
        let from = a.clone() - u.clone();
        let e_a = pad[pos(&from)?];
        let left = ig(&from, b)?;
        psi.push(Matrix::hstack(&[&left, &Matrix::zero(left.rows(), e_a, p)])?);
    }
    Ok(InterleavingCertificate {
        restriction: r.clone(),
        phi,
        psi,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityBound<P> {
    pub c_g: Extended<P>,
    pub c_h: Extended<P>,
    /// `|c_g − c_h|`, `None` when both are the same infinity.
    pub difference: Option<Extended<P>>,
    pub delta: P,
    pub holds: bool,
}

/// Verify the certificate, then compare the spectral invariants of the
/// same class in both modules. Refuses to compare under an invalid
/// certificate.
pub fn stability_bound_check<P: Param>(
    g: &GappedModule<P>,
    h: &GappedModule<P>,
    delta: &P,
    cert: &InterleavingCertificate<P>,
    class: &[u32],
) -> Result<StabilityBound<P>, GappedError> {
    if let Some(failure) = verify_interleaving_certificate(g, h, delta, cert)? {
        return Err(GappedError::Certificate(format!("{failure:?}")));
    }
    let c_g = g.spectral_invariant(class)?;
    let c_h = h.spectral_invariant(class)?;
    let difference = match (&c_g, &c_h) {
        (Extended::Finite(a), Extended::Finite(b)) => Some(Extended::Finite(a.abs_diff(b))),
        (a, b) if a == b => None,
        _ => Some(Extended::PosInf),
    };
    let holds = match &difference {
        None => true,
        Some(Extended::Finite(d)) => d <= delta,
        Some(_) => false,
    };
    Ok(StabilityBound {
        c_g,
        c_h,
        difference,
        delta: delta.clone(),
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionPair<P> {
    pub first: RestrictionSequence<P>,
    pub second: RestrictionSequence<P>,
    pub distance: Extended<P>,
    pub infinite_bars: (usize, usize),
    pub infinite_distance: Extended<P>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionStabilityReport<P> {
    pub bound: P,
    pub restrictions: usize,
    pub pairs: Vec<RestrictionPair<P>>,
    pub passed: bool,
}

/// For every pair of normalized λ-restrictions: interleaving distance at
/// most `2λ`, equal numbers of infinite bars, and those bars matched
/// within `2λ`.
pub fn restriction_stability_report<P: Param>(
    g: &GappedModule<P>,
) -> Result<RestrictionStabilityReport<P>, GappedError> {
    let restrictions = g.enumerate_restrictions(&g.gap, true)?;
    if restrictions.is_empty() {
        return Err(GappedError::InsufficientRestrictions(0));
    }
    let bound = g.gap.times(2);
    let within = |d: &Extended<P>| matches!(d, Extended::Finite(x) if *x <= bound);
    let modules = restrictions
        .iter()
        .map(|r| g.restrict(r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pairs = Vec::new();
    for i in 0..modules.len() {
        for j in i + 1..modules.len() {
            let distance = interleaving_distance(&modules[i], &modules[j])?;
            let ia = modules[i].barcode()?.infinite_bars();
            let ib = modules[j].barcode()?.infinite_bars();
            let infinite_distance = bottleneck_distance(&ia, &ib);
            let infinite_bars = (ia.total(), ib.total());
            let passed = within(&distance) && infinite_bars.0 == infinite_bars.1 && within(&infinite_distance);
            pairs.push(RestrictionPair {
                first: restrictions[i].clone(),
                second: restrictions[j].clone(),
                distance,
                infinite_bars,
                infinite_distance,
                passed,
            });
        }
    }
    let passed = pairs.iter().all(|p| p.passed);
    Ok(RestrictionStabilityReport {
        bound,
        restrictions: restrictions.len(),
        pairs,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{q, qi, Rational};

    fn chain(points: &[Rational], dim: usize) -> GappedModule<Rational> {
        let pm = PersistenceModule::identity_chain(2, points.to_vec(), dim, true).unwrap();
        GappedModule::from_chain(qi(1), &pm).unwrap()
    }

    fn ints(xs: std::ops::Range<i64>) -> Vec<Rational> {
        xs.map(qi).collect()
    }

    #[test]
    fn comparable_examples() {
        assert!(comparable(&qi(0), &qi(0), &qi(1)));
        assert!(!comparable(&qi(0), &q(1, 2), &qi(1)));
        assert!(comparable(&qi(0), &qi(1), &qi(1)));
        assert!(!comparable(&qi(1), &qi(0), &qi(1)));
    }

    #[test]
    fn identity_chain_validates() {
        chain(&ints(0..4), 2).validate().unwrap();
    }

    #[test]
    fn corrupted_pair_is_named() {
        let g = chain(&ints(0..4), 1);
        let mut maps = g.maps().clone();
        maps.insert((0, 2), Matrix::zero(1, 1, 2));
        let bad = GappedModule::new_unchecked(2, qi(1), g.indices().clone(), g.dims().to_vec(), maps, None);
        match bad.validate().unwrap_err() {
            GappedError::Functoriality { r, s, t } => {
                assert_eq!((r.as_str(), s.as_str(), t.as_str()), ("0", "1", "2"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn enumerate_integer_grid() {
        let g = chain(&ints(0..4), 1);
        let rs = g.enumerate_restrictions(&qi(1), true).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].offset, qi(0));
        assert_eq!(rs[0].len(), 4);
        assert!(g.enumerate_restrictions(&q(1, 2), true).is_err());
    }

    #[test]
    fn enumerate_half_grid() {
        let pts: Vec<Rational> = (0..5).map(|k| q(k, 2)).collect();
        let pm = PersistenceModule::identity_chain(2, pts, 1, true).unwrap();
        let g = GappedModule::from_chain(q(1, 2), &pm).unwrap();
        let normalized = g.enumerate_restrictions(&q(1, 2), true).unwrap();
        assert_eq!(normalized.len(), 1);
        assert_eq!(normalized[0].offset, qi(0));
        assert_eq!(normalized[0].len(), 5);
        let all = g.enumerate_restrictions(&q(1, 2), false).unwrap();
        assert_eq!(all.len(), 1 + 15 - 1);
        assert!(all.iter().any(|r| !r.is_normalized()));
    }

    #[test]
    fn labels_may_start_below_zero() {
        let g = chain(&[qi(-3), qi(-2), qi(-1)], 1);
        let rs = g.enumerate_restrictions(&qi(1), true).unwrap();
        assert_eq!((rs[0].offset, rs[0].window_start, rs[0].window_end), (qi(0), -3, -1));
        assert!(rs[0].is_normalized());
    }

    #[test]
    fn restrict_full_chain_is_the_chain() {
        let pm = PersistenceModule::identity_chain(2, ints(0..4), 1, true).unwrap();
        let g = GappedModule::from_chain(qi(1), &pm).unwrap();
        let r = &g.enumerate_restrictions(&qi(1), true).unwrap()[0];
        assert_eq!(g.restrict(r).unwrap(), pm);
        let single = RestrictionSequence::new(qi(2), qi(1), 0, 0).unwrap();
        assert_eq!(g.restrict(&single).unwrap().len(), 1);
        let outside = RestrictionSequence::new(qi(2), qi(1), 0, 3).unwrap();
        assert!(matches!(g.restrict(&outside), Err(GappedError::NotInIndexSet(_))));
    }

    #[test]
    fn spectral_invariant_of_identity_chain() {
        let g = chain(&ints(0..4), 1);
        assert_eq!(g.spectral_invariant(&[0]).unwrap(), Extended::PosInf);
        assert_eq!(g.spectral_invariant(&[1]).unwrap(), Extended::Finite(qi(0)));
        assert_eq!(g.translate(&qi(2)).spectral_invariant(&[1]).unwrap(), Extended::Finite(qi(-2)));
    }

    #[test]
    fn translate_composes() {
        let g = chain(&ints(0..3), 1);
        assert_eq!(g.translate(&qi(0)), g);
        assert_eq!(g.translate(&qi(1)).translate(&q(1, 2)), g.translate(&q(3, 2)));
    }

    #[test]
    fn dual_of_identity_chain() {
        let pm = PersistenceModule::identity_chain(2, ints(0..2), 1, false).unwrap();
        let g = GappedModule::from_chain(qi(1), &pm).unwrap();
        let d = g.dual();
        d.validate().unwrap();
        assert_eq!(d.indices().points(), &[qi(-1), qi(0)]);
        assert!(d.map(0, 1).unwrap().is_identity());
        assert_eq!(d.dual(), g);
    }

    #[test]
    fn duality_on_a_chain() {
        let g = chain(&ints(1..5), 1);
        let a = [1];
        let star = g.dual_pairing(&a).unwrap().unwrap();
        let c = g.spectral_invariant(&a).unwrap();
        let d = g.dual();
        d.validate().unwrap();
        assert_eq!(c, Extended::Finite(qi(-1)));
        assert_eq!(d.spectral_invariant(&star).unwrap(), -c);
    }

    #[test]
    fn certificates() {
        let g = chain(&ints(0..6), 1);
        let r = g.enumerate_restrictions(&qi(1), true).unwrap().remove(0);
        let id = identity_certificate(&g, &r).unwrap();
        assert_eq!(verify_interleaving_certificate(&g, &g, &qi(0), &id).unwrap(), None);

        let r2 = RestrictionSequence::new(qi(0), qi(2), 0, 2).unwrap();
        let sm = structure_map_certificate(&g, &r2).unwrap();
        assert_eq!(verify_interleaving_certificate(&g, &g, &qi(2), &sm).unwrap(), None);

        let mut bad = sm.clone();
        bad.phi[0] = Matrix::zero(1, 1, 2);
        assert_eq!(
            verify_interleaving_certificate(&g, &g, &qi(2), &bad).unwrap(),
            Some(CertificateFailure::TriangleV(0))
        );
        assert!(verify_interleaving_certificate(&g, &g, &qi(3), &sm).is_err());
    }

    #[test]
    fn translation_certificate_bound() {
        let g = chain(&ints(0..8), 1);
        let u = qi(1);
        let pad = [1, 0, 2, 0, 1, 0, 0, 1];
        let h = padded_translate(&g, &u, &pad).unwrap();
        let r = RestrictionSequence::new(qi(1), qi(2), 0, 3).unwrap();
        let cert = translation_certificate(&g, &u, &pad, &r).unwrap();
        let report = stability_bound_check(&g, &h, &qi(2), &cert, &[1]).unwrap();
        assert!(report.holds);
        assert_eq!(report.difference, Some(Extended::Finite(qi(1))));
    }

    #[test]
    fn stability_report_single_restriction_is_vacuous() {
        let g = chain(&ints(0..4), 1);
        let report = restriction_stability_report(&g).unwrap();
        assert_eq!(report.restrictions, 1);
        assert!(report.pairs.is_empty());
        assert!(report.passed);
    }

    #[test]
    fn eternal_examples() {
        let g = chain(&ints(0..3), 1);
        assert_eq!(g.eternal_check(&[0]).unwrap(), Eternality::Eternal);
        assert_eq!(g.eternal_check(&[1]).unwrap(), Eternality::Eternal);
    }
}
