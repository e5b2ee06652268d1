//! Command bodies. Each returns the text for standard output.

use std::fmt::Write;

use gapped_core::contact::{duality_pair, CosphereOptions};
use gapped_core::suite::run_suite;
use gapped_core::{
    bottleneck_distance, build_cosphere_model_with, contact_spectral_invariant, interleaving_distance,
    parse_rational, restriction_stability_report, spectral_axiom_report, stability_bound_check,
    verify_interleaving_certificate, Appearance, CertificateFailure, Bar, Barcode, ConstantContactHamiltonian, CosphereFamily, Eternality,
    Extended, GappedError, GappedModule, LimitKind, PersistenceModule, Rational, SHModelClass, SymbolicSlope,
};
use serde_json::json;

use crate::document::{
    barcode_json, build_barcode, build_certificate, build_gapped, build_persistence, certificate_json, cosphere_json,
    gapped_json, persistence_json, read_document, to_canonical, CosphereRequest, Num, Raw, Value,
    SCHEMA_VERSION,
};
use crate::error::CliError;
use crate::render::{barcode_svg, barcode_text};

type Out = Result<String, CliError>;

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn gapped_error(e: GappedError) -> CliError {
    CliError::Domain(e.to_string())
}

pub fn parse_class(text: &str) -> Result<Vec<u32>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Input(format!("class entry \"{x}\" is not a nonnegative integer")))
        })
        .collect()
}

pub fn parse_value(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(e.to_string()))
}

fn wrong_kind(expected: &str, raw: &Raw) -> CliError {
    CliError::Input(format!("expected {expected}, found {}", raw.kind()))
}

/// Call `$f` at the parameter type the documents need.
macro_rules! with_param {
    ($symbolic:expr, $f:ident ( $($arg:expr),* )) => {
        if $symbolic {
            $f::<SymbolicSlope>($($arg),*)
        } else {
            $f::<Rational>($($arg),*)
        }
    };
}

pub fn validate(path: &str, canonical: bool) -> Out {
    let raw = read_document(path)?;
    with_param!(raw.is_symbolic(), validate_as(&raw, canonical))
}

fn validate_as<P: Value>(raw: &Raw, canonical: bool) -> Out {
    let (doc, summary) = match raw {
        Raw::Persistence(r) => {
            let m = build_persistence::<P>(r)?;
            let s = format!("{} indices, dims {:?}", m.len(), m.dims());
            (persistence_json(&m), s)
        }
        Raw::Gapped(r) => {
            let g = build_gapped::<P>(r)?;
            let s = format!("gap {}, {} indices, dims {:?}", g.gap(), g.len(), g.dims());
            (gapped_json(&g), s)
        }
        Raw::Barcode(r) => {
            let b = build_barcode::<P>(r)?;
            let s = format!("{} bars", b.total());
            (barcode_json(&b), s)
        }
        Raw::Certificate(r) => {
            let c = build_certificate::<P>(r)?;
            let s = format!("delta {}, {} restriction points", c.delta, c.certificate.restriction.len());
            (certificate_json(&c), s)
        }
        Raw::Cosphere(r) => {
            let (model, _) = cosphere_model(r)?;
            let class = model.class.map_or("none".to_string(), |c| c.to_string());
            (cosphere_json(r), format!("n {} degree {} class {class}", r.n, r.degree))
        }
    };
    if canonical {
        Ok(to_canonical(&doc))
    } else {
        Ok(format!("ok {}: {summary}\n", raw.kind()))
    }
}

/// Barcode of a persistence module or barcode document.
fn barcode_of<P: Value>(raw: &Raw) -> Result<Barcode<P>, CliError> {
    match raw {
        Raw::Persistence(r) => build_persistence::<P>(r)?.barcode().map_err(domain),
        Raw::Barcode(r) => build_barcode(r),
        other => Err(wrong_kind("persistence_module or barcode", other)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Svg,
    Json,
}

pub fn barcode(path: &str, format: Format) -> Out {
    let raw = read_document(path)?;
    with_param!(raw.is_symbolic(), barcode_as(&raw, format))
}

fn render<P: Value>(b: &Barcode<P>, format: Format) -> String {
    match format {
        Format::Text => barcode_text(b),
        Format::Svg => barcode_svg(b),
        Format::Json => to_canonical(&barcode_json(b)),
    }
}

fn barcode_as<P: Value>(raw: &Raw, format: Format) -> Out {
    Ok(render(&barcode_of::<P>(raw)?, format))
}

pub fn bottleneck(a: &str, b: &str) -> Out {
    let (ra, rb) = (read_document(a)?, read_document(b)?);
    with_param!(ra.is_symbolic() || rb.is_symbolic(), bottleneck_as(&ra, &rb))
}

fn bottleneck_as<P: Value>(a: &Raw, b: &Raw) -> Out {
    let d = bottleneck_distance(&barcode_of::<P>(a)?, &barcode_of::<P>(b)?);
    Ok(format!("{d}\n"))
}

pub fn interleave(a: &str, b: &str, cert: Option<&str>, class: Option<&str>) -> Out {
    let (ra, rb) = (read_document(a)?, read_document(b)?);
    let rc = cert.map(read_document).transpose()?;
    let symbolic = ra.is_symbolic() || rb.is_symbolic() || rc.as_ref().is_some_and(Raw::is_symbolic);
    let class = class.map(parse_class).transpose()?;
    with_param!(symbolic, interleave_as(&ra, &rb, rc.as_ref(), class.as_deref()))
}

fn interleave_as<P: Value>(a: &Raw, b: &Raw, cert: Option<&Raw>, class: Option<&[u32]>) -> Out {
    match (a, b, cert) {
        (Raw::Persistence(x), Raw::Persistence(y), None) => {
            let d = interleaving_distance(&build_persistence::<P>(x)?, &build_persistence::<P>(y)?).map_err(domain)?;
            Ok(format!("interleaving distance {d}\n"))
        }
        (Raw::Gapped(x), Raw::Gapped(y), Some(Raw::Certificate(c))) => {
            let (g, h) = (build_gapped::<P>(x)?, build_gapped::<P>(y)?);
            let c = build_certificate::<P>(c)?;
            let delta = &c.delta;
            let Some(class) = class else {
                return match verify_interleaving_certificate(&g, &h, delta, &c.certificate).map_err(gapped_error)? {
                    None => Ok(format!("certificate valid at delta {delta}\n")),
                    Some(f) => Err(CliError::Domain(format!("certificate invalid: {}", describe(&f)))),
                };
            };
            let bound = stability_bound_check(&g, &h, delta, &c.certificate, class).map_err(gapped_error)?;
            let mut s = format!("certificate valid at delta {delta}\n");
            let _ = writeln!(s, "c(a, G) = {}", bound.c_g);
            let _ = writeln!(s, "c(a, H) = {}", bound.c_h);
            match &bound.difference {
                Some(d) => {
                    let _ = writeln!(s, "difference {d}");
                }
                None => s.push_str("difference none (same infinity)\n"),
            }
            if bound.holds {
                s.push_str("bound holds\n");
                Ok(s)
            } else {
                Err(CliError::failed(s, "stability bound violated"))
            }
        }
        (Raw::Gapped(_), Raw::Gapped(_), None) => Err(CliError::Input(
            "gapped modules need a certificate document".into(),
        )),
        _ => Err(CliError::Input(format!(
            "expected two persistence modules, or two gapped modules and a certificate; found {} and {}",
            a.kind(),
            b.kind()
        ))),
    }
}

fn describe(f: &CertificateFailure) -> String {
    let what = match f {
        CertificateFailure::TriangleV(_) => "psi(i+1) phi(i) differs from the structure map of G",
        CertificateFailure::TriangleW(_) => "phi(i+1) psi(i) differs from the structure map of H",
        CertificateFailure::NaturalityPhi(_) => "phi does not commute with the structure maps",
        CertificateFailure::NaturalityPsi(_) => "psi does not commute with the structure maps",
    };
    format!("{what} at window index {}", f.index())
}

pub struct RestrictArgs<'a> {
    pub step: Option<&'a str>,
    pub all: bool,
    pub stability: bool,
    pub emit: Option<usize>,
}

pub fn restrict(path: &str, args: &RestrictArgs) -> Out {
    let raw = read_document(path)?;
    let step = args.step.map(parse_value).transpose()?;
    with_param!(raw.is_symbolic(), restrict_as(&raw, args, step))
}

fn restrict_as<P: Value>(raw: &Raw, args: &RestrictArgs, step: Option<Rational>) -> Out {
    let Raw::Gapped(r) = raw else { return Err(wrong_kind("gapped_module", raw)) };
    let g = build_gapped::<P>(r)?;
    if args.stability {
        return stability_report(&g);
    }
    let step: P = match step {
        Some(s) => P::from_num(Num::Rational(s)).expect("rationals embed"),
        None => g.gap().clone(),
    };
    let list = g.enumerate_restrictions(&step, !args.all).map_err(gapped_error)?;
    if let Some(k) = args.emit {
        let rs = list
            .get(k)
            .ok_or_else(|| CliError::Domain(format!("restriction {k} does not exist; there are {}", list.len())))?;
        return Ok(to_canonical(&persistence_json(&g.restrict(rs).map_err(gapped_error)?)));
    }
    let mut s = String::new();
    for (k, rs) in list.iter().enumerate() {
        let m = g.restrict(rs).map_err(gapped_error)?;
        let _ = writeln!(
            s,
            "restriction {k} offset {} step {} window {} {}",
            rs.offset, rs.step, rs.window_start, rs.window_end
        );
        for line in m.barcode().map_err(domain)?.to_text().lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    Ok(s)
}

fn stability_report<P: Value>(g: &GappedModule<P>) -> Out {
    let rep = restriction_stability_report(g).map_err(gapped_error)?;
    let mut s = format!("bound {}\nrestrictions {}\n", rep.bound, rep.restrictions);
    for p in &rep.pairs {
        let _ = writeln!(
            s,
            "pair offsets {} {} distance {} infinite bars {} {} infinite distance {} {}",
            p.first.offset,
            p.second.offset,
            p.distance,
            p.infinite_bars.0,
            p.infinite_bars.1,
            p.infinite_distance,
            if p.passed { "pass" } else { "fail" }
        );
    }
    if rep.passed {
        s.push_str("passed\n");
        Ok(s)
    } else {
        Err(CliError::failed(s, "restriction stability failed"))
    }
}

pub fn spectral(path: &str, class: &str) -> Out {
    let raw = read_document(path)?;
    let class = parse_class(class)?;
    with_param!(raw.is_symbolic(), spectral_as(&raw, &class))
}

fn spectral_as<P: Value>(raw: &Raw, class: &[u32]) -> Out {
    let Raw::Persistence(r) = raw else { return Err(wrong_kind("persistence_module", raw)) };
    let m: PersistenceModule<P> = build_persistence(r)?;
    let kind = m.limit().map(|l| l.kind).ok_or_else(|| CliError::Domain("module has no limit slot".into()))?;
    let value = m.spectral_invariant(class).map_err(domain)?;
    let appearance = match kind {
        LimitKind::Colimit => m.min_appearance(class),
        LimitKind::Limit => m.last_survival(class),
    }
    .map_err(domain)?;
    let label = match kind {
        LimitKind::Colimit => "first appearance",
        LimitKind::Limit => "last survival",
    };
    let shown = match appearance {
        Appearance::At(t) => t.to_string(),
        Appearance::Never => "never".into(),
    };
    Ok(format!("{label} {shown}\nspectral {value}\n"))
}

pub fn gapped_spectral(path: &str, class: &str, generalized: bool, eternal: bool) -> Out {
    let raw = read_document(path)?;
    let class = parse_class(class)?;
    with_param!(raw.is_symbolic(), gapped_spectral_as(&raw, &class, generalized, eternal))
}

fn gapped_spectral_as<P: Value>(raw: &Raw, class: &[u32], generalized: bool, eternal: bool) -> Out {
    let Raw::Gapped(r) = raw else { return Err(wrong_kind("gapped_module", raw)) };
    let g: GappedModule<P> = build_gapped(r)?;
    let mut s = format!("spectral {}\n", g.spectral_invariant(class).map_err(gapped_error)?);
    if generalized {
        let v = g.generalized_spectral_invariant(class).map_err(gapped_error)?;
        let _ = writeln!(s, "generalized {v}");
    }
    if eternal {
        match g.eternal_check(class).map_err(gapped_error)? {
            Eternality::Eternal => s.push_str("eternal within window\n"),
            Eternality::NotEternal { threshold: Some(t) } => {
                let _ = writeln!(s, "not eternal, first appearance {t}");
            }
            Eternality::NotEternal { threshold: None } => s.push_str("not eternal, never appears\n"),
        }
    }
    Ok(s)
}

pub fn dual(path: &str) -> Out {
    let raw = read_document(path)?;
    with_param!(raw.is_symbolic(), dual_as(&raw))
}

fn dual_as<P: Value>(raw: &Raw) -> Out {
    let doc = match raw {
        Raw::Persistence(r) => persistence_json(&build_persistence::<P>(r)?.dual()),
        Raw::Gapped(r) => gapped_json(&build_gapped::<P>(r)?.dual()),
        Raw::Barcode(r) => barcode_json(&build_barcode::<P>(r)?.reflect()),
        other => return Err(wrong_kind("persistence_module, gapped_module or barcode", other)),
    };
    Ok(to_canonical(&doc))
}

pub fn translate(path: &str, by: &str) -> Out {
    let raw = read_document(path)?;
    let u = parse_value(by)?;
    with_param!(raw.is_symbolic(), translate_as(&raw, u))
}

fn translate_as<P: Value>(raw: &Raw, u: Rational) -> Out {
    let u = P::from_num(Num::Rational(u)).expect("rationals embed");
    let doc = match raw {
        Raw::Gapped(r) => gapped_json(&build_gapped::<P>(r)?.translate(&u)),
        Raw::Persistence(r) => persistence_json(&build_persistence::<P>(r)?.shift(&-u)),
        Raw::Barcode(r) => barcode_json(&build_barcode::<P>(r)?.translate(&u)),
        other => return Err(wrong_kind("persistence_module, gapped_module or barcode", other)),
    };
    Ok(to_canonical(&doc))
}

fn rational_of(n: &Num, what: &str) -> Result<Rational, CliError> {
    match n {
        Num::Rational(r) => Ok(*r),
        Num::Symbolic(_) => Err(CliError::Input(format!("{what} must be a plain rational"))),
    }
}

fn cosphere_model(r: &CosphereRequest) -> Result<(gapped_core::FloerSystemModel, Vec<Rational>), CliError> {
    let mut options = CosphereOptions::window(r.m_min, r.m_max);
    if let Some(offsets) = &r.offsets {
        options.offsets = offsets.iter().map(|o| rational_of(o, "offset")).collect::<Result<_, _>>()?;
    }
    let hs = match &r.hamiltonians {
        Some(hs) => hs.iter().map(|h| rational_of(h, "hamiltonian")).collect::<Result<_, _>>()?,
        None => vec![Rational::from_integer(0)],
    };
    let model = build_cosphere_model_with(r.n, r.degree, &options).map_err(domain)?;
    Ok((model, hs))
}

fn suppress_epsilon(b: &Barcode<SymbolicSlope>) -> Barcode<SymbolicSlope> {
    let strip = |e: &Extended<SymbolicSlope>| e.clone().map(|s| s.two_pi_part());
    let mut out = Barcode::new();
    for (bar, m) in b.bars() {
        out.insert(Bar::new(strip(&bar.birth), strip(&bar.death)), m);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

pub fn cosphere(request: &CosphereRequest, format: ReportFormat, emit_model: bool) -> Out {
    let (model, hs) = cosphere_model(request)?;
    if emit_model {
        return Ok(to_canonical(&gapped_json(&model.module)));
    }
    let g = &model.module;
    let restrictions = g.enumerate_restrictions(g.gap(), true).map_err(gapped_error)?;
    let first = restrictions
        .first()
        .ok_or_else(|| CliError::Domain("window admits no normalized restriction".into()))?;
    let barcode = suppress_epsilon(&g.restrict(first).map_err(gapped_error)?.barcode().map_err(domain)?);
    let mut values = Vec::new();
    if let Some(theta) = model.class {
        for h in &hs {
            let c = contact_spectral_invariant(&model, &ConstantContactHamiltonian::new(*h), theta).map_err(domain)?;
            values.push((*h, c));
        }
    }
    let class = model.class.map_or("none".to_string(), |c| c.to_string());
    match format {
        ReportFormat::Json => {
            let payload = json!({
                "n": model.n,
                "degree": model.degree,
                "class": class,
                "window": [model.options.m_min, model.options.m_max],
                "offsets": model.options.offsets.iter().map(Value::to_json).collect::<Vec<_>>(),
                "slopes": g.indices().points().iter().map(Value::to_json).collect::<Vec<_>>(),
                "dims": g.dims(),
                "barcode": barcode_json(&barcode)["payload"]["bars"].clone(),
                "spectral": values.iter().map(|(h, c)| json!({"h": h.to_json(), "value": c.to_json()})).collect::<Vec<_>>(),
            });
            Ok(to_canonical(&json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "cosphere_report",
                "payload": payload,
            })))
        }
        ReportFormat::Text => {
            let mut s = format!("cosphere n {} degree {} class {class}\n", model.n, model.degree);
            let offsets: Vec<String> = model.options.offsets.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "window m {}..{} offsets {}",
                model.options.m_min,
                model.options.m_max,
                offsets.join(" ")
            );
            s.push_str("slope dim\n");
            for (t, d) in g.indices().points().iter().zip(g.dims()) {
                let _ = writeln!(s, "{t} {d}");
            }
            s.push_str("barcode (epsilon suppressed)\n");
            s.push_str(&barcode_text(&barcode));
            for (h, c) in &values {
                let _ = writeln!(s, "c({h}, {class}) = {c}");
            }
            Ok(s)
        }
    }
}

pub fn axioms(n: i64, m_max: i64, constants: &[Rational]) -> Out {
    let mut family = CosphereFamily::new(n, CosphereOptions::window(0, m_max)).map_err(domain)?;
    let u = SHModelClass::u(1);
    let zero = Rational::from_integer(0);
    let report = spectral_axiom_report(&mut family, constants, &[(zero, zero, u, u)]).map_err(domain)?;
    let shown: Vec<String> = constants.iter().map(ToString::to_string).collect();
    let mut s = format!("axioms n {n} window 0..{m_max} constants {}\n", shown.join(" "));
    for (h, theta, c) in &report.values {
        let _ = writeln!(s, "c({h}, {theta}) = {c}");
    }
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    let _ = writeln!(s, "shift {}", verdict(report.shift));
    let _ = writeln!(s, "monotonicity {}", verdict(report.monotonicity));
    let _ = writeln!(s, "stability {}", verdict(report.stability));
    let _ = writeln!(s, "spectrality {}", verdict(report.spectrality));
    for entry in &report.triangle {
        let _ = writeln!(s, "{entry}");
    }
    s.push_str("triangle entries are reported, not asserted\n");
    for degree in [0, 2 * n - 2, 2 * n - 1, 3 * n - 2] {
        let Some(theta) = SHModelClass::in_degree(n, degree) else { continue };
        let model = build_cosphere_model_with(n, degree, &CosphereOptions::window(0, m_max)).map_err(domain)?;
        let (c, d) = duality_pair(&model, &ConstantContactHamiltonian::new(zero), theta).map_err(domain)?;
        let _ = writeln!(s, "duality degree {degree} class {theta}: raw c = {c}, dual c = {d}");
    }
    if report.passed() {
        Ok(s)
    } else {
        Err(CliError::failed(s, "axiom check failed"))
    }
}

pub fn suite(seed: u64, cases: usize) -> Out {
    let report = run_suite(seed, cases);
    let text = report.to_string();
    if report.passed() {
        Ok(text)
    } else {
        Err(CliError::failed(text, "suite failed"))
    }
}
