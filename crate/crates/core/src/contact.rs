//! Symbolic model of the contact Hamiltonian Floer directed system of the
//! unit cosphere bundle of `Sⁿ`, `n` odd.
//!
//! Slopes are `2πm + ε` with `2π` formal. The symplectic homology ring is
//! `Λ(a) ⊗ Z₂[u]` with `deg uᵏ = k(n−1) + n` and `deg a·uᵏ = k(n−1)`; each
//! degree holds at most one class. The generator of index `ℓ` is present at
//! slope `2πm + ε` iff `0 ≤ ℓ ≤ 2m`, continuation maps are identities and
//! the generator maps onto its class in the colimit.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::gapped::{comparable, Eternality, GappedError, GappedLimit, GappedModule};
use crate::linalg::Matrix;
use crate::param::{q, qi, Extended, Param, Rational, SymbolicSlope};
use crate::persistence::{IndexSet, LimitKind};

/// Default offset `ε` of the sampled slopes `2πm + ε`.
pub fn default_epsilon() -> Rational {
    q(1, 100)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("n must be odd and at least 3, got {0}")]
    InvalidDimension(i64),
    #[error("empty slope window {m_min}..={m_max}")]
    InvalidWindow { m_min: i64, m_max: i64 },
    #[error("offset {0} must lie strictly between 0 and 6")]
    InvalidOffset(String),
    #[error("class {class} has degree {found}, model slice is degree {expected}")]
    ClassOutsideSlice {
        class: String,
        expected: i64,
        found: i64,
    },
    #[error("class not witnessed in window")]
    NotWitnessed,
    #[error("empty candidate family")]
    EmptyFamily,
    #[error("K must be at least 1")]
    InvalidCount,
    #[error("source data: {0}")]
    Source(String),
    #[error(transparent)]
    Gapped(#[from] GappedError),
}

impl From<crate::persistence::PersistenceError> for ContactError {
    fn from(e: crate::persistence::PersistenceError) -> Self {
        ContactError::Gapped(e.into())
    }
}

impl From<crate::linalg::LinalgError> for ContactError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        ContactError::Gapped(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKind {
    /// `uᵏ`
    U,
    /// `a·uᵏ`
    AU,
}

/// Basis element `uᵏ` or `a·uᵏ` of `Λ(a) ⊗ Z₂[u]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SHModelClass {
    pub kind: ClassKind,
    pub exponent: u32,
}

impl SHModelClass {
    pub fn u(k: u32) -> Self {
        SHModelClass {
            kind: ClassKind::U,
            exponent: k,
        }
    }

    pub fn au(k: u32) -> Self {
        SHModelClass {
            kind: ClassKind::AU,
            exponent: k,
        }
    }

    /// The unit `e = u⁰`.
    pub fn unit() -> Self {
        SHModelClass::u(0)
    }

    pub fn degree(&self, n: i64) -> i64 {
        let k = self.exponent as i64;
        match self.kind {
            ClassKind::U => k * (n - 1) + n,
            ClassKind::AU => k * (n - 1),
        }
    }

    /// The unique class of the given degree, if any.
    pub fn in_degree(n: i64, degree: i64) -> Option<SHModelClass> {
        let step = n - 1;
        if degree >= 0 && degree % step == 0 {
            return Some(SHModelClass::au((degree / step) as u32));
        }
        let rest = degree - n;
        if rest >= 0 && rest % step == 0 {
            return Some(SHModelClass::u((rest / step) as u32));
        }
        None
    }

    /// Least `m` with the generator present at slope `2πm + ε`.
    pub fn first_slope(&self) -> i64 {
        (self.exponent as i64 + 1) / 2
    }
}

impl fmt::Display for SHModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.kind == ClassKind::AU { "a" } else { "" };
        match (self.kind, self.exponent) {
            (ClassKind::U, 0) => write!(f, "e"),
            (ClassKind::AU, 0) => write!(f, "a"),
            (_, 1) => write!(f, "{prefix}u"),
            (_, k) => write!(f, "{prefix}u^{k}"),
        }
    }
}

/// Pair-of-pants product; `None` is the zero class.
pub fn sh_product(x: SHModelClass, y: SHModelClass) -> Option<SHModelClass> {
    let k = x.exponent + y.exponent;
    match (x.kind, y.kind) {
        (ClassKind::U, ClassKind::U) => Some(SHModelClass::u(k)),
        (ClassKind::AU, ClassKind::AU) => None,
        _ => Some(SHModelClass::au(k)),
    }
}

/// A constant contact Hamiltonian `h ≡ value`; `η # h = η + value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstantContactHamiltonian {
    pub value: Rational,
}

impl ConstantContactHamiltonian {
    pub fn new(value: Rational) -> Self {
        ConstantContactHamiltonian { value }
    }

    /// Reeb oscillation; zero for constants.
    pub fn osc(&self) -> Rational {
        qi(0)
    }
}

/// Window and sampling of a cosphere model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosphereOptions {
    pub m_min: i64,
    pub m_max: i64,
    /// Offsets `ε_j` sampled in every period; at least one.
    pub offsets: Vec<Rational>,
}

impl CosphereOptions {
    pub fn window(m_min: i64, m_max: i64) -> Self {
        CosphereOptions {
            m_min,
            m_max,
            offsets: vec![default_epsilon()],
        }
    }
}

/// One degree slice of the cosphere directed system as a 2π-gapped module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloerSystemModel {
    pub n: i64,
    pub degree: i64,
    pub options: CosphereOptions,
    pub class: Option<SHModelClass>,
    pub module: GappedModule<SymbolicSlope>,
}

/// Model over slopes `2πm + ε`, `0 ≤ m ≤ m_max`.
pub fn build_cosphere_model(n: i64, m_max: i64, degree: i64) -> Result<FloerSystemModel, ContactError> {
    build_cosphere_model_with(n, degree, &CosphereOptions::window(0, m_max))
}

pub fn build_cosphere_model_with(
    n: i64,
    degree: i64,
    options: &CosphereOptions,
) -> Result<FloerSystemModel, ContactError> {
    if n < 3 || n % 2 == 0 {
        return Err(ContactError::InvalidDimension(n));
    }
    if options.m_max < options.m_min || options.offsets.is_empty() {
        return Err(ContactError::InvalidWindow {
            m_min: options.m_min,
            m_max: options.m_max,
        });
    }
    let mut offsets = options.offsets.clone();
    offsets.sort();
    offsets.dedup();
    if let Some(bad) = offsets.iter().find(|e| **e <= qi(0) || **e >= qi(6)) {
        return Err(ContactError::InvalidOffset(bad.to_string()));
    }
    let class = SHModelClass::in_degree(n, degree);
    let mut slopes = Vec::new();
    for m in options.m_min..=options.m_max {
        for e in &offsets {
            slopes.push((m, SymbolicSlope::new(qi(m), *e)));
        }
    }
    let present = |m: i64| class.is_some_and(|c| m >= c.first_slope());
    let dims: Vec<usize> = slopes.iter().map(|(m, _)| usize::from(present(*m))).collect();
    let gap = SymbolicSlope::two_pi_times(Rational::one());
    let points: Vec<SymbolicSlope> = slopes.iter().map(|(_, s)| *s).collect();
    let mut maps = BTreeMap::new();
    for i in 0..points.len() {
        for j in i..points.len() {
            if comparable(&points[i], &points[j], &gap) {
                let m = if dims[i] == 1 && dims[j] == 1 {
                    Matrix::identity(1, 2)
                } else {
                    Matrix::zero(dims[j], dims[i], 2)
                };
                maps.insert((i, j), m);
            }
        }
    }
    let colimit_dim = usize::from(class.is_some());
    let limit = GappedLimit {
        kind: LimitKind::Colimit,
        dim: colimit_dim,
        maps: dims
            .iter()
            .map(|&d| {
                if d == 1 {
                    Matrix::identity(1, 2)
                } else {
                    Matrix::zero(colimit_dim, d, 2)
                }
            })
            .collect(),
    };
    let module = GappedModule::new(2, gap, IndexSet::new(points)?, dims, maps, Some(limit))?;
    Ok(FloerSystemModel {
        n,
        degree,
        options: CosphereOptions {
            offsets,
            ..options.clone()
        },
        class,
        module,
    })
}

impl FloerSystemModel {
    /// Colimit vector of `θ`, checking it lives in this slice.
    pub fn class_vector(&self, theta: SHModelClass) -> Result<Vec<u32>, ContactError> {
        if theta.degree(self.n) != self.degree {
            return Err(ContactError::ClassOutsideSlice {
                class: theta.to_string(),
                expected: self.degree,
                found: theta.degree(self.n),
            });
        }
        Ok(vec![1])
    }
}

fn drop_epsilon(h: &Rational, raw: &SymbolicSlope) -> SymbolicSlope {
    // raw = h − (2πm + ε); report h − 2πm
    let appearance = SymbolicSlope::constant(*h) - *raw;
    SymbolicSlope::constant(*h) - appearance.two_pi_part()
}

/// `c(h, θ)` for a constant `h`: the gapped spectral invariant of the model
/// translated by `−h`, with `ε` dropped from the reported value.
pub fn contact_spectral_invariant(
    model: &FloerSystemModel,
    h: &ConstantContactHamiltonian,
    theta: SHModelClass,
) -> Result<SymbolicSlope, ContactError> {
    let v = model.class_vector(theta)?;
    let shifted = model.module.translate(&SymbolicSlope::constant(-h.value));
    match shifted.spectral_invariant(&v) {
        Ok(Extended::Finite(raw)) => Ok(drop_epsilon(&h.value, &raw)),
        Ok(_) | Err(GappedError::NotWitnessed) => Err(ContactError::NotWitnessed),
        Err(e) => Err(e.into()),
    }
}

/// The raw gapped invariant `c(θ, P(h))` before `ε` is dropped, together
/// with the value on the dual module at the restriction pairing.
pub fn duality_pair(
    model: &FloerSystemModel,
    h: &ConstantContactHamiltonian,
    theta: SHModelClass,
) -> Result<(Extended<SymbolicSlope>, Extended<SymbolicSlope>), ContactError> {
    let v = model.class_vector(theta)?;
    let g = model.module.translate(&SymbolicSlope::constant(-h.value));
    let c = g.spectral_invariant(&v)?;
    let star = g.dual_pairing(&v)?.ok_or(ContactError::NotWitnessed)?;
    let dual = g.dual().spectral_invariant(&star)?;
    Ok((c, dual))
}

/// All cosphere slices over one window, built on demand.
#[derive(Debug, Clone)]
pub struct CosphereFamily {
    pub n: i64,
    pub options: CosphereOptions,
    slices: BTreeMap<i64, FloerSystemModel>,
}

impl CosphereFamily {
    pub fn new(n: i64, options: CosphereOptions) -> Result<Self, ContactError> {
        build_cosphere_model_with(n, 0, &options)?;
        Ok(CosphereFamily {
            n,
            options,
            slices: BTreeMap::new(),
        })
    }

    pub fn model(&mut self, degree: i64) -> Result<&FloerSystemModel, ContactError> {
        if !self.slices.contains_key(&degree) {
            let m = build_cosphere_model_with(self.n, degree, &self.options)?;
            self.slices.insert(degree, m);
        }
        Ok(&self.slices[&degree])
    }

    pub fn spectral(&mut self, h: &ConstantContactHamiltonian, theta: SHModelClass) -> Result<SymbolicSlope, ContactError> {
        let n = self.n;
        contact_spectral_invariant(self.model(theta.degree(n))?, h, theta)
    }

    /// Classes witnessed within the window: exponents up to `2·m_max`.
    pub fn classes(&self) -> Vec<SHModelClass> {
        let top = (2 * self.options.m_max).max(0) as u32;
        (0..=top)
            .flat_map(|k| [SHModelClass::u(k), SHModelClass::au(k)])
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Less => "<",
            Comparison::Equal => "=",
            Comparison::Greater => ">",
        })
    }
}

/// Both sides of `c(h # g, θ₁ ∗ θ₂) ≤ c(h, θ₁) + c(g, θ₂)`, reported only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleEntry {
    pub h: Rational,
    pub g: Rational,
    pub theta1: SHModelClass,
    pub theta2: SHModelClass,
    pub product: SHModelClass,
    pub lhs: SymbolicSlope,
    pub rhs: SymbolicSlope,
    pub comparison: Comparison,
}

impl fmt::Display for TriangleEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "triangle h={} g={} theta1={} theta2={}: lhs c(h#g, {}) = {} {} rhs c(h,{}) + c(g,{}) = {}",
            self.h,
            self.g,
            self.theta1,
            self.theta2,
            self.product,
            self.lhs,
            self.comparison,
            self.theta1,
            self.theta2,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    /// `(h, θ, c(h, θ))` for every constant and in-window class.
    pub values: Vec<(Rational, SHModelClass, SymbolicSlope)>,
    pub shift: bool,
    pub monotonicity: bool,
    pub stability: bool,
    pub spectrality: bool,
    pub triangle: Vec<TriangleEntry>,
}

impl AxiomReport {
    /// Every asserted axiom held; the triangle entries are not asserted.
    pub fn passed(&self) -> bool {
        self.shift && self.monotonicity && self.stability && self.spectrality
    }
}

fn compare(a: &SymbolicSlope, b: &SymbolicSlope) -> Comparison {
    match a.cmp(b) {
        std::cmp::Ordering::Less => Comparison::Less,
        std::cmp::Ordering::Equal => Comparison::Equal,
        std::cmp::Ordering::Greater => Comparison::Greater,
    }
}

/// Check shift, monotonicity, stability and spectrality over the given
/// constants, and evaluate the triangle inequality on the given pairs.
pub fn spectral_axiom_report(
    family: &mut CosphereFamily,
    constants: &[Rational],
    triangle_pairs: &[(Rational, Rational, SHModelClass, SHModelClass)],
) -> Result<AxiomReport, ContactError> {
    let mut hs = constants.to_vec();
    hs.sort();
    hs.dedup();
    let zero = ConstantContactHamiltonian::new(qi(0));
    let mut values = Vec::new();
    let (mut shift, mut monotonicity, mut stability, mut spectrality) = (true, true, true, true);
    for theta in family.classes() {
        let base = family.spectral(&zero, theta)?;
        let mut row = Vec::new();
        for h in &hs {
            let c = family.spectral(&ConstantContactHamiltonian::new(*h), theta)?;
            shift &= c - base == SymbolicSlope::constant(*h);
            spectrality &= (c - SymbolicSlope::constant(*h)).is_in_two_pi_z();
            row.push((*h, c));
            values.push((*h, theta, c));
        }
        for i in 0..row.len() {
            for j in i + 1..row.len() {
                let ((g, cg), (h, ch)) = (&row[i], &row[j]);
                monotonicity &= cg <= ch;
                stability &= *ch - *cg == SymbolicSlope::constant(*h - *g);
            }
        }
    }
    let mut triangle = Vec::new();
    for &(h, g, t1, t2) in triangle_pairs {
        let Some(product) = sh_product(t1, t2) else { continue };
        let lhs = family.spectral(&ConstantContactHamiltonian::new(h + g), product)?;
        let rhs = family.spectral(&ConstantContactHamiltonian::new(h), t1)?
            + family.spectral(&ConstantContactHamiltonian::new(g), t2)?;
        triangle.push(TriangleEntry {
            h,
            g,
            theta1: t1,
            theta2: t2,
            product,
            lhs,
            rhs,
            comparison: compare(&lhs, &rhs),
        });
    }
    Ok(AxiomReport {
        values,
        shift,
        monotonicity,
        stability,
        spectrality,
        triangle,
    })
}

/// A gapped module together with a source space `S` and maps `S → V_t`
/// compatible with the structure maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcedModel {
    pub module: GappedModule<SymbolicSlope>,
    pub source_dim: usize,
    pub source_maps: Vec<Matrix>,
}

impl SourcedModel {
    pub fn new(
        module: GappedModule<SymbolicSlope>,
        source_dim: usize,
        source_maps: Vec<Matrix>,
    ) -> Result<Self, ContactError> {
        if source_maps.len() != module.len() {
            return Err(ContactError::Source("one source map per sample".into()));
        }
        for (i, m) in source_maps.iter().enumerate() {
            if m.shape() != (module.dims()[i], source_dim) {
                return Err(ContactError::Source(format!("source map {i} has shape {:?}", m.shape())));
            }
        }
        for (&(i, j), iota) in module.maps() {
            if iota.compose(&source_maps[i])? != source_maps[j] {
                return Err(ContactError::Source(format!("source maps incompatible on ({i}, {j})")));
            }
        }
        Ok(SourcedModel {
            module,
            source_dim,
            source_maps,
        })
    }

    /// One-dimensional source living over slopes `2πm + ε` for
    /// `m_min ≤ m < death_m` and killed from `2π·death_m + ε` on.
    pub fn dying_chain(m_min: i64, m_max: i64, death_m: i64) -> Result<Self, ContactError> {
        let e = default_epsilon();
        let points: Vec<SymbolicSlope> = (m_min..=m_max).map(|m| SymbolicSlope::new(qi(m), e)).collect();
        let dims: Vec<usize> = (m_min..=m_max).map(|m| usize::from(m < death_m)).collect();
        let gap = SymbolicSlope::two_pi_times(Rational::one());
        let mut maps = BTreeMap::new();
        for i in 0..points.len() {
            for j in i..points.len() {
                let m = if dims[i] == 1 && dims[j] == 1 {
                    Matrix::identity(1, 2)
                } else {
                    Matrix::zero(dims[j], dims[i], 2)
                };
                maps.insert((i, j), m);
            }
        }
        let limit = GappedLimit {
            kind: LimitKind::Colimit,
            dim: 0,
            maps: dims.iter().map(|&d| Matrix::zero(0, d, 2)).collect(),
        };
        let module = GappedModule::new(2, gap, IndexSet::new(points)?, dims.clone(), maps, Some(limit))?;
        let source_maps = dims
            .iter()
            .map(|&d| if d == 1 { Matrix::identity(1, 2) } else { Matrix::zero(0, 1, 2) })
            .collect();
        SourcedModel::new(module, 1, source_maps)
    }
}

/// `σ(h, θ) = −min{η : η + h > 0, θ ∈ ker(S → V_{η+h})}` for a constant
/// `h`, with `ε` dropped.
pub fn anti_spectral_invariant(
    model: &SourcedModel,
    h: &ConstantContactHamiltonian,
    theta: &[u32],
) -> Result<SymbolicSlope, ContactError> {
    if theta.len() != model.source_dim {
        return Err(ContactError::Source(format!(
            "class has length {}, source has dimension {}",
            theta.len(),
            model.source_dim
        )));
    }
    let zero = SymbolicSlope::zero();
    for (slope, j) in model.module.indices().points().iter().zip(&model.source_maps) {
        if *slope > zero && crate::linalg::is_zero_vector(&j.apply(theta)?) {
            let eta_two_pi = slope.two_pi_part();
            return Ok(SymbolicSlope::constant(h.value) - eta_two_pi);
        }
    }
    Err(ContactError::NotWitnessed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiStateTrace {
    /// `c(k·h, e)/k` for `k = 1..=K`.
    pub sequence: Vec<SymbolicSlope>,
    pub value: SymbolicSlope,
    /// `c((k+l)h, e) ≤ c(kh, e) + c(lh, e)` for all `k + l ≤ K`.
    pub subadditive: bool,
    pub constant: bool,
}

/// Approximate `ζ(h)` by the Fekete sequence `c(kh, e)/k`.
pub fn quasi_state_estimate(
    family: &mut CosphereFamily,
    h: &Rational,
    k_max: usize,
) -> Result<QuasiStateTrace, ContactError> {
    if k_max == 0 {
        return Err(ContactError::InvalidCount);
    }
    let e = SHModelClass::unit();
    let mut raw = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let c = family.spectral(&ConstantContactHamiltonian::new(*h * qi(k as i64)), e)?;
        raw.push(c);
    }
    let sequence: Vec<SymbolicSlope> = raw
        .iter()
        .enumerate()
        .map(|(i, c)| c.scaled(Rational::new(1, i as i64 + 1)))
        .collect();
    let mut subadditive = true;
    for k in 1..=k_max {
        for l in 1..=k_max - k {
            subadditive &= raw[k + l - 1] <= raw[k - 1] + raw[l - 1];
        }
    }
    let constant = sequence.windows(2).all(|w| w[0] == w[1]);
    Ok(QuasiStateTrace {
        value: *sequence.last().expect("k_max ≥ 1"),
        sequence,
        subadditive,
        constant,
    })
}

/// A cutoff function known only through its `ζ`-value and whether it is
/// identically 1 on the set in question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiMeasureCandidate {
    pub name: String,
    pub zeta: Rational,
    pub equals_one_on_set: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiMeasure {
    Value(Rational),
    /// No admissible candidate: `τ = +∞`.
    Unconstrained,
}

impl fmt::Display for QuasiMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiMeasure::Value(v) => write!(f, "{v}"),
            QuasiMeasure::Unconstrained => write!(f, "unconstrained"),
        }
    }
}

/// `τ(A)`: the least `ζ` over flagged candidates.
pub fn quasi_measure_eval(candidates: &[QuasiMeasureCandidate]) -> Result<QuasiMeasure, ContactError> {
    if candidates.is_empty() {
        return Err(ContactError::EmptyFamily);
    }
    Ok(candidates
        .iter()
        .filter(|c| c.equals_one_on_set)
        .map(|c| c.zeta)
        .min()
        .map_or(QuasiMeasure::Unconstrained, QuasiMeasure::Value))
}

/// For `A ⊂ B`: `τ(A) ≤ τ(B)`.
pub fn quasi_measure_monotone(
    family_a: &[QuasiMeasureCandidate],
    family_b: &[QuasiMeasureCandidate],
) -> Result<(QuasiMeasure, QuasiMeasure, bool), ContactError> {
    let ta = quasi_measure_eval(family_a)?;
    let tb = quasi_measure_eval(family_b)?;
    let holds = match (ta, tb) {
        (_, QuasiMeasure::Unconstrained) => true,
        (QuasiMeasure::Unconstrained, QuasiMeasure::Value(_)) => false,
        (QuasiMeasure::Value(a), QuasiMeasure::Value(b)) => a <= b,
    };
    Ok((ta, tb, holds))
}

/// Eternality of a class in a model slice.
pub fn eternal_check(model: &FloerSystemModel, theta: SHModelClass) -> Result<Eternality<SymbolicSlope>, ContactError> {
    let v = model.class_vector(theta)?;
    Ok(model.module.eternal_check(&v)?)
}
