//! On-disk documents: a versioned envelope around one of a few payload
//! kinds. Exact values travel as strings (`"p/q"`) or `{"two_pi", "const"}`
//! records; matrices are arrays of integer rows reduced mod `p`.

use std::collections::BTreeMap;
use std::fmt;

use gapped_core::{
    parse_rational, Bar, Barcode, Extended, GappedLimit, GappedModule, IndexSet, InterleavingCertificate, LimitKind,
    LimitSlot, Matrix, Param, PersistenceModule, Rational, RestrictionSequence, SymbolicSlope,
};
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Map, Value as Json};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "gapped/1";

pub const KINDS: [&str; 5] = ["persistence_module", "gapped_module", "barcode", "certificate", "cosphere_request"];

/// A parameter value as written: rational text or a symbolic record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Num {
    Rational(Rational),
    Symbolic(SymbolicSlope),
}

impl Num {
    fn is_symbolic(&self) -> bool {
        matches!(self, Num::Symbolic(_))
    }
}

struct NumVisitor {
    allow_infinite: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtNum {
    NegInf,
    Finite(Num),
    PosInf,
}

impl<'de> Visitor<'de> for NumVisitor {
    type Value = ExtNum;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.allow_infinite {
            f.write_str("a rational string, \"inf\", \"-inf\" or a {\"two_pi\", \"const\"} record")
        } else {
            f.write_str("a rational string or a {\"two_pi\", \"const\"} record")
        }
    }

    fn visit_str<E: de::Error>(self, s: &str) -> Result<ExtNum, E> {
        match s {
            "inf" | "+inf" if self.allow_infinite => Ok(ExtNum::PosInf),
            "-inf" if self.allow_infinite => Ok(ExtNum::NegInf),
            _ => parse_rational(s)
                .map(|r| ExtNum::Finite(Num::Rational(r)))
                .map_err(E::custom),
        }
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<ExtNum, A::Error> {
        let (mut two_pi, mut constant) = (None, None);
        while let Some(key) = map.next_key::<String>()? {
            let text: String = map.next_value()?;
            let r = parse_rational(&text).map_err(de::Error::custom)?;
            match key.as_str() {
                "two_pi" => two_pi = Some(r),
                "const" => constant = Some(r),
                other => return Err(de::Error::unknown_field(other, &["two_pi", "const"])),
            }
        }
        let two_pi = two_pi.ok_or_else(|| de::Error::missing_field("two_pi"))?;
        let constant = constant.ok_or_else(|| de::Error::missing_field("const"))?;
        Ok(ExtNum::Finite(Num::Symbolic(SymbolicSlope::new(two_pi, constant))))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match d.deserialize_any(NumVisitor { allow_infinite: false })? {
            ExtNum::Finite(n) => Ok(n),
            _ => unreachable!("infinite values are rejected by the visitor"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NumVisitor { allow_infinite: true })
    }
}

impl ExtNum {
    fn is_symbolic(&self) -> bool {
        matches!(self, ExtNum::Finite(n) if n.is_symbolic())
    }
}

/// Parameter types a document can carry.
pub trait Value: Param + fmt::Display {
    fn from_num(n: Num) -> Option<Self>;
    fn to_json(&self) -> Json;
    /// Position on a real axis, for drawing.
    fn approx(&self) -> f64;
}

impl Value for Rational {
    fn from_num(n: Num) -> Option<Self> {
        match n {
            Num::Rational(r) => Some(r),
            Num::Symbolic(_) => None,
        }
    }

    fn to_json(&self) -> Json {
        Json::String(self.to_string())
    }

    fn approx(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Value for SymbolicSlope {
    fn from_num(n: Num) -> Option<Self> {
        Some(match n {
            Num::Rational(r) => SymbolicSlope::constant(r),
            Num::Symbolic(s) => s,
        })
    }

    fn to_json(&self) -> Json {
        json!({"two_pi": self.two_pi.to_string(), "const": self.constant.to_string()})
    }

    fn approx(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.two_pi.approx() + self.constant.approx()
    }
}

fn ext_to_json<P: Value>(e: &Extended<P>) -> Json {
    match e {
        Extended::NegInf => Json::String("-inf".into()),
        Extended::PosInf => Json::String("inf".into()),
        Extended::Finite(p) => p.to_json(),
    }
}

fn num<P: Value>(n: Num) -> P {
    P::from_num(n).expect("symbolic documents are built with symbolic parameters")
}

fn ext<P: Value>(e: ExtNum) -> Extended<P> {
    match e {
        ExtNum::NegInf => Extended::NegInf,
        ExtNum::PosInf => Extended::PosInf,
        ExtNum::Finite(n) => Extended::Finite(num(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindRepr {
    Colimit,
    Limit,
}

impl From<KindRepr> for LimitKind {
    fn from(k: KindRepr) -> Self {
        match k {
            KindRepr::Colimit => LimitKind::Colimit,
            KindRepr::Limit => LimitKind::Limit,
        }
    }
}

fn kind_name(k: LimitKind) -> &'static str {
    match k {
        LimitKind::Colimit => "colimit",
        LimitKind::Limit => "limit",
    }
}

fn default_modulus() -> u32 {
    2
}

type Rows = Vec<Vec<i64>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitSlotRepr {
    pub kind: KindRepr,
    pub dim: usize,
    pub map: Rows,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersistenceRepr {
    #[serde(default = "default_modulus")]
    pub modulus: u32,
    pub indices: Vec<Num>,
    pub dims: Vec<usize>,
    pub steps: Vec<Rows>,
    #[serde(default)]
    pub limit: Option<LimitSlotRepr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapRepr {
    pub from: usize,
    pub to: usize,
    pub matrix: Rows,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GappedLimitRepr {
    pub kind: KindRepr,
    pub dim: usize,
    pub maps: Vec<Rows>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GappedRepr {
    #[serde(default = "default_modulus")]
    pub modulus: u32,
    pub gap: Num,
    pub indices: Vec<Num>,
    pub dims: Vec<usize>,
    pub maps: Vec<MapRepr>,
    #[serde(default)]
    pub limit: Option<GappedLimitRepr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarRepr {
    pub birth: ExtNum,
    pub death: ExtNum,
    #[serde(default = "one")]
    pub multiplicity: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeRepr {
    pub bars: Vec<BarRepr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapedMatrix {
    pub shape: (usize, usize),
    pub entries: Rows,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionRepr {
    pub offset: Num,
    pub step: Num,
    pub window: (i64, i64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRepr {
    #[serde(default = "default_modulus")]
    pub modulus: u32,
    pub delta: Num,
    pub restriction: RestrictionRepr,
    pub phi: Vec<ShapedMatrix>,
    pub psi: Vec<ShapedMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosphereRequest {
    pub n: i64,
    pub m_max: i64,
    pub degree: i64,
    #[serde(default)]
    pub m_min: i64,
    #[serde(default)]
    pub offsets: Option<Vec<Num>>,
    #[serde(default)]
    pub hamiltonians: Option<Vec<Num>>,
}

/// A parsed but not yet built payload.
#[derive(Debug, Clone)]
pub enum Raw {
    Persistence(PersistenceRepr),
    Gapped(GappedRepr),
    Barcode(BarcodeRepr),
    Certificate(CertificateRepr),
    Cosphere(CosphereRequest),
}

impl Raw {
    pub fn kind(&self) -> &'static str {
        match self {
            Raw::Persistence(_) => "persistence_module",
            Raw::Gapped(_) => "gapped_module",
            Raw::Barcode(_) => "barcode",
            Raw::Certificate(_) => "certificate",
            Raw::Cosphere(_) => "cosphere_request",
        }
    }

    /// Whether any value is symbolic, so the document needs symbolic parameters.
    pub fn is_symbolic(&self) -> bool {
        let any = |v: &[Num]| v.iter().any(Num::is_symbolic);
        match self {
            Raw::Persistence(p) => any(&p.indices),
            Raw::Gapped(g) => g.gap.is_symbolic() || any(&g.indices),
            Raw::Barcode(b) => b.bars.iter().any(|x| x.birth.is_symbolic() || x.death.is_symbolic()),
            Raw::Certificate(c) => {
                c.delta.is_symbolic() || c.restriction.offset.is_symbolic() || c.restriction.step.is_symbolic()
            }
            Raw::Cosphere(_) => false,
        }
    }
}

#[derive(Deserialize)]
struct Header {
    schema_version: Json,
    kind: Json,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<T> {
    #[allow(dead_code)]
    schema_version: String,
    #[allow(dead_code)]
    kind: String,
    payload: T,
}

fn parse_error(path: &str, e: serde_json::Error) -> CliError {
    CliError::Input(format!("{path}: {e}"))
}

fn payload<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str::<Envelope<T>>(text)
        .map(|e| e.payload)
        .map_err(|e| parse_error(path, e))
}

/// Parse text into a raw payload, checking version and kind.
pub fn parse_document(path: &str, text: &str) -> Result<Raw, CliError> {
    let header: Header = serde_json::from_str(text).map_err(|e| parse_error(path, e))?;
    match header.schema_version.as_str() {
        Some(SCHEMA_VERSION) => {}
        Some(other) => {
            return Err(CliError::Input(format!(
                "{path}: schema version \"{other}\" is not supported; expected \"{SCHEMA_VERSION}\""
            )))
        }
        None => return Err(CliError::Input(format!("{path}: schema_version must be a string"))),
    }
    let kind = header
        .kind
        .as_str()
        .ok_or_else(|| CliError::Input(format!("{path}: kind must be a string")))?;
    Ok(match kind {
        "persistence_module" => Raw::Persistence(payload(path, text)?),
        "gapped_module" => Raw::Gapped(payload(path, text)?),
        "barcode" => Raw::Barcode(payload(path, text)?),
        "certificate" => Raw::Certificate(payload(path, text)?),
        "cosphere_request" => Raw::Cosphere(payload(path, text)?),
        other => {
            return Err(CliError::Input(format!(
                "{path}: unknown kind \"{other}\"; expected one of {}",
                KINDS.join(", ")
            )))
        }
    })
}

pub fn read_document(path: &str) -> Result<Raw, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    parse_document(path, &text)
}

fn matrix(rows: usize, cols: usize, p: u32, data: &Rows, what: &str) -> Result<Matrix, CliError> {
    let bad = || CliError::Domain(format!("{what}: expected a {rows}x{cols} matrix"));
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(bad());
    }
    let flat: Vec<i64> = data.iter().flatten().copied().collect();
    Matrix::new(rows, cols, p, &flat).map_err(|e| CliError::Domain(format!("{what}: {e}")))
}

fn rows_of(m: &Matrix) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array((0..m.cols()).map(|j| Json::from(m.get(i, j))).collect()))
            .collect(),
    )
}

fn domain<E: fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn index_set<P: Value>(values: &[Num]) -> Result<IndexSet<P>, CliError> {
    IndexSet::new(values.iter().map(|&n| num(n)).collect()).map_err(domain)
}

pub fn build_persistence<P: Value>(r: &PersistenceRepr) -> Result<PersistenceModule<P>, CliError> {
    let p = r.modulus;
    if r.dims.len() != r.indices.len() {
        return Err(CliError::Domain(format!(
            "{} dims for {} indices",
            r.dims.len(),
            r.indices.len()
        )));
    }
    if r.steps.len() != r.dims.len().saturating_sub(1) {
        return Err(CliError::Domain(format!(
            "{} steps for {} indices",
            r.steps.len(),
            r.indices.len()
        )));
    }
    let steps = r
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| matrix(r.dims[i + 1], r.dims[i], p, s, &format!("step {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let limit = match &r.limit {
        None => None,
        Some(l) => {
            let kind = LimitKind::from(l.kind);
            let (rows, cols) = match kind {
                LimitKind::Colimit => (l.dim, r.dims.last().copied().unwrap_or(0)),
                LimitKind::Limit => (r.dims.first().copied().unwrap_or(0), l.dim),
            };
            Some(LimitSlot {
                kind,
                dim: l.dim,
                map: matrix(rows, cols, p, &l.map, "limit map")?,
            })
        }
    };
    PersistenceModule::new(p, index_set(&r.indices)?, r.dims.clone(), steps, limit).map_err(domain)
}

pub fn build_gapped<P: Value>(r: &GappedRepr) -> Result<GappedModule<P>, CliError> {
    let p = r.modulus;
    if r.dims.len() != r.indices.len() {
        return Err(CliError::Domain(format!(
            "{} dims for {} indices",
            r.dims.len(),
            r.indices.len()
        )));
    }
    let n = r.dims.len();
    let mut maps = BTreeMap::new();
    for m in &r.maps {
        if m.from >= n || m.to >= n {
            return Err(CliError::Domain(format!("map ({}, {}) is out of range", m.from, m.to)));
        }
        let what = format!("map ({}, {})", m.from, m.to);
        let mat = matrix(r.dims[m.to], r.dims[m.from], p, &m.matrix, &what)?;
        if maps.insert((m.from, m.to), mat).is_some() {
            return Err(CliError::Domain(format!("{what} is given twice")));
        }
    }
    let limit = match &r.limit {
        None => None,
        Some(l) => {
            let kind = LimitKind::from(l.kind);
            if l.maps.len() != n {
                return Err(CliError::Domain(format!("{} limit maps for {n} indices", l.maps.len())));
            }
            let maps = l
                .maps
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let (rows, cols) = match kind {
                        LimitKind::Colimit => (l.dim, r.dims[i]),
                        LimitKind::Limit => (r.dims[i], l.dim),
                    };
                    matrix(rows, cols, p, m, &format!("limit map {i}"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(GappedLimit {
                kind,
                dim: l.dim,
                maps,
            })
        }
    };
    GappedModule::new(p, num(r.gap), index_set(&r.indices)?, r.dims.clone(), maps, limit).map_err(domain)
}

pub fn build_barcode<P: Value>(r: &BarcodeRepr) -> Result<Barcode<P>, CliError> {
    let mut out = Barcode::new();
    for (i, b) in r.bars.iter().enumerate() {
        let (birth, death) = (ext::<P>(b.birth), ext::<P>(b.death));
        if birth > death || birth == Extended::PosInf || death == Extended::NegInf {
            return Err(CliError::Domain(format!("bar {i}: birth {birth} after death {death}")));
        }
        if b.multiplicity > 0 {
            out.insert(Bar::new(birth, death), b.multiplicity);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateDoc<P> {
    pub modulus: u32,
    pub delta: P,
    pub certificate: InterleavingCertificate<P>,
}

pub fn build_certificate<P: Value>(r: &CertificateRepr) -> Result<CertificateDoc<P>, CliError> {
    let restriction = RestrictionSequence::new(
        num(r.restriction.offset),
        num(r.restriction.step),
        r.restriction.window.0,
        r.restriction.window.1,
    )
    .map_err(domain)?;
    let shaped = |ms: &[ShapedMatrix], name: &str| {
        ms.iter()
            .enumerate()
            .map(|(i, m)| matrix(m.shape.0, m.shape.1, r.modulus, &m.entries, &format!("{name} {i}")))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(CertificateDoc {
        modulus: r.modulus,
        delta: num(r.delta),
        certificate: InterleavingCertificate {
            restriction,
            phi: shaped(&r.phi, "phi")?,
            psi: shaped(&r.psi, "psi")?,
        },
    })
}

fn envelope(kind: &str, payload: Json) -> Json {
    let mut m = Map::new();
    m.insert("schema_version".into(), Json::String(SCHEMA_VERSION.into()));
    m.insert("kind".into(), Json::String(kind.into()));
    m.insert("payload".into(), payload);
    Json::Object(m)
}

pub fn persistence_json<P: Value>(m: &PersistenceModule<P>) -> Json {
    let mut o = Map::new();
    o.insert("modulus".into(), Json::from(m.modulus()));
    o.insert("indices".into(), m.indices().points().iter().map(Value::to_json).collect());
    o.insert("dims".into(), Json::from(m.dims().to_vec()));
    o.insert("steps".into(), m.steps().iter().map(rows_of).collect());
    if let Some(l) = m.limit() {
        o.insert(
            "limit".into(),
            json!({"kind": kind_name(l.kind), "dim": l.dim, "map": rows_of(&l.map)}),
        );
    }
    envelope("persistence_module", Json::Object(o))
}

pub fn gapped_json<P: Value>(g: &GappedModule<P>) -> Json {
    let mut o = Map::new();
    o.insert("modulus".into(), Json::from(g.modulus()));
    o.insert("gap".into(), g.gap().to_json());
    o.insert("indices".into(), g.indices().points().iter().map(Value::to_json).collect());
    o.insert("dims".into(), Json::from(g.dims().to_vec()));
    o.insert(
        "maps".into(),
        g.maps()
            .iter()
            .map(|(&(i, j), m)| json!({"from": i, "to": j, "matrix": rows_of(m)}))
            .collect(),
    );
    if let Some(l) = g.limit() {
        o.insert(
            "limit".into(),
            json!({"kind": kind_name(l.kind), "dim": l.dim, "maps": l.maps.iter().map(rows_of).collect::<Vec<_>>()}),
        );
    }
    envelope("gapped_module", Json::Object(o))
}

pub fn barcode_json<P: Value>(b: &Barcode<P>) -> Json {
    let bars: Vec<Json> = b
        .bars()
        .map(|(bar, m)| json!({"birth": ext_to_json(&bar.birth), "death": ext_to_json(&bar.death), "multiplicity": m}))
        .collect();
    envelope("barcode", json!({ "bars": bars }))
}

pub fn certificate_json<P: Value>(c: &CertificateDoc<P>) -> Json {
    let r = &c.certificate.restriction;
    let shaped = |ms: &[Matrix]| -> Json {
        ms.iter()
            .map(|m| json!({"shape": [m.rows(), m.cols()], "entries": rows_of(m)}))
            .collect()
    };
    envelope(
        "certificate",
        json!({
            "modulus": c.modulus,
            "delta": c.delta.to_json(),
            "restriction": {
                "offset": r.offset.to_json(),
                "step": r.step.to_json(),
                "window": [r.window_start, r.window_end],
            },
            "phi": shaped(&c.certificate.phi),
            "psi": shaped(&c.certificate.psi),
        }),
    )
}

fn num_json(n: &Num) -> Json {
    match n {
        Num::Rational(r) => r.to_json(),
        Num::Symbolic(s) => s.to_json(),
    }
}

pub fn cosphere_json(r: &CosphereRequest) -> Json {
    let mut o = Map::new();
    o.insert("n".into(), Json::from(r.n));
    o.insert("m_max".into(), Json::from(r.m_max));
    o.insert("degree".into(), Json::from(r.degree));
    o.insert("m_min".into(), Json::from(r.m_min));
    if let Some(offsets) = &r.offsets {
        o.insert("offsets".into(), offsets.iter().map(num_json).collect());
    }
    if let Some(hs) = &r.hamiltonians {
        o.insert("hamiltonians".into(), hs.iter().map(num_json).collect());
    }
    envelope("cosphere_request", Json::Object(o))
}

/// Canonical text: two-space indentation, vectors and matrices on one
/// line, and a trailing newline.
pub fn to_canonical(v: &Json) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Json) -> bool {
    !matches!(v, Json::Array(_) | Json::Object(_))
}

fn is_flat(v: &Json) -> bool {
    match v {
        Json::Array(items) => items.iter().all(is_scalar),
        other => is_scalar(other),
    }
}

fn write_value(out: &mut String, v: &Json, depth: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Json::Array(items) if items.is_empty() => out.push_str("[]"),
        Json::Array(items) if items.iter().all(is_flat) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, depth);
            }
            out.push(']');
        }
        Json::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Json::Object(map) if map.is_empty() => out.push_str("{}"),
        Json::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Json::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
  "schema_version": "gapped/1",
  "kind": "persistence_module",
  "payload": {
    "modulus": 2,
    "indices": ["0", "1/2"],
    "dims": [1, 1],
    "steps": [
      [[1]]
    ],
    "limit": {
      "kind": "colimit",
      "dim": 1,
      "map": [[1]]
    }
  }
}
"#;

    #[test]
    fn minimal_module_round_trips() {
        let Raw::Persistence(r) = parse_document("m", MINIMAL).unwrap() else { panic!() };
        let m = build_persistence::<Rational>(&r).unwrap();
        assert_eq!(to_canonical(&persistence_json(&m)), MINIMAL);
    }

    #[test]
    fn zero_denominator_is_a_positioned_parse_error() {
        let text = MINIMAL.replace("\"1/2\"", "\"1/0\"");
        let err = parse_document("m", &text).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, CliError::Input(_)));
        assert!(msg.contains("zero denominator"), "{msg}");
        assert!(msg.contains("line 6"), "{msg}");
    }

    #[test]
    fn version_mismatch_names_both() {
        let text = MINIMAL.replace("gapped/1", "gapped/0");
        let msg = parse_document("m", &text).unwrap_err().to_string();
        assert!(msg.contains("gapped/0") && msg.contains("gapped/1"), "{msg}");
    }

    #[test]
    fn unknown_kind_rejected() {
        let text = MINIMAL.replace("persistence_module", "sheaf");
        assert!(parse_document("m", &text).unwrap_err().to_string().contains("unknown kind"));
    }

    #[test]
    fn symbolic_values_parse() {
        let text = r#"{"schema_version": "gapped/1", "kind": "barcode", "payload": {"bars": [
            {"birth": {"two_pi": "1", "const": "0"}, "death": "inf"}]}}"#;
        let raw = parse_document("b", text).unwrap();
        assert!(raw.is_symbolic());
        let Raw::Barcode(b) = raw else { panic!() };
        let b = build_barcode::<SymbolicSlope>(&b).unwrap();
        assert_eq!(b.to_text(), "2π inf 1\n");
    }
}
