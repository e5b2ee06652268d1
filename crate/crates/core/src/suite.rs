//! Seeded randomized property suite and deterministic model checks.
//!
//! Every check draws from its own ChaCha stream of the suite seed, so
//! results do not depend on which other checks run or in what order.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bottleneck::{bottleneck_distance, exhaustive_bottleneck};
use crate::contact::{
    build_cosphere_model, contact_spectral_invariant, duality_pair, quasi_measure_eval, quasi_measure_monotone,
    quasi_state_estimate, spectral_axiom_report, Comparison, ConstantContactHamiltonian, CosphereFamily,
    CosphereOptions, QuasiMeasure, QuasiMeasureCandidate, SHModelClass,
};
use crate::gapped::{comparable, restriction_stability_report, stability_bound_check};
use crate::linalg::{all_vectors, Matrix};
use crate::param::{q, qi, Extended, Rational, SymbolicSlope};
use crate::persistence::{brute_force_barcode, Barcode, LimitKind, PersistenceModule, Slot};
use crate::random::{
    random_barcode, random_duality_instance, random_gapped_module, random_interleaved_instance, random_matrix,
    random_persistence_module, random_vector, random_witnessed_class, rng_from_seed,
};

pub const DEFAULT_CASES: usize = 500;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case.
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {}/{}", self.name, self.cases - self.failures, self.cases)?;
        if let Some(w) = &self.witness {
            write!(f, " first failure: {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        writeln!(f, "cases {}", self.cases)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        writeln!(f, "summary {} passed {} failed", self.checks.len() - failed, failed)
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            witness: self.witness,
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = rng_from_seed(seed);
    rng.set_stream(id);
    rng
}

type RandomCheck = fn(&mut ChaCha8Rng, usize) -> CheckOutcome;

const RANDOM_CHECKS: &[RandomCheck] = &[
    compose_associative,
    rank_of_transpose,
    membership_exhaustive,
    barcode_oracle,
    bottleneck_oracle,
    bottleneck_pseudometric,
    dual_involution,
    shift_translates_barcode,
    gapped_partial_order,
    restriction_stability,
    spectral_stability,
    gapped_duality,
    translation_shifts_invariant,
];

/// Run every check. Random checks use `cases` samples each; model checks
/// are fixed.
pub fn run_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut checks: Vec<CheckOutcome> = RANDOM_CHECKS
        .iter()
        .enumerate()
        .map(|(i, check)| check(&mut stream(seed, i as u64), cases))
        .collect();
    checks.extend([
        cosphere_values(),
        cosphere_axioms(),
        cosphere_duality(),
        quasi_states(),
        triangle_report(),
    ]);
    SuiteReport { seed, cases, checks }
}

fn random_modulus<R: Rng>(rng: &mut R) -> u32 {
    [2, 3, 5, 7][rng.gen_range(0..4)]
}

pub fn compose_associative(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("linalg.compose_associative");
    for _ in 0..cases {
        let p = random_modulus(rng);
        let d: Vec<usize> = (0..4).map(|_| rng.gen_range(0..=4)).collect();
        let a = random_matrix(rng, d[0], d[1], p);
        let b = random_matrix(rng, d[1], d[2], p);
        let c = random_matrix(rng, d[2], d[3], p);
        let left = a.compose(&b).and_then(|ab| ab.compose(&c));
        let right = b.compose(&c).and_then(|bc| a.compose(&bc));
        t.record(left.is_ok() && left == right, || format!("p={p} shapes {d:?}"));
    }
    t.finish()
}

pub fn rank_of_transpose(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("linalg.rank_transpose");
    for _ in 0..cases {
        let p = random_modulus(rng);
        let (r, c) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
        let m = random_matrix(rng, r, c, p);
        let k = m.kernel_basis().len();
        let ok = m.rank() == m.transpose().rank() && m.rank() + k == m.cols();
        t.record(ok, || format!("{m:?}"));
    }
    t.finish()
}

pub fn membership_exhaustive(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("linalg.membership_exhaustive");
    for _ in 0..cases {
        let p = [2, 3][rng.gen_range(0..2)];
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
        let m = random_matrix(rng, r, c, p);
        let v = random_vector(rng, m.rows(), p);
        let brute = all_vectors(m.cols(), p).any(|x| m.apply(&x).ok().as_deref() == Some(&v[..]));
        let ok = match Matrix::membership(&v, &m) {
            Ok(Some(x)) => brute && m.apply(&x).ok() == Some(v.clone()),
            Ok(None) => !brute,
            Err(_) => false,
        };
        t.record(ok, || format!("v={v:?} in {m:?}"));
    }
    t.finish()
}

fn slot_endpoint(m: &PersistenceModule<Rational>, slot: Slot) -> Extended<Rational> {
    match (slot, m.limit().map(|l| l.kind)) {
        (Slot::Index(i), _) => Extended::Finite(m.indices().points()[i]),
        (Slot::Limit, Some(LimitKind::Limit)) => Extended::NegInf,
        (Slot::Limit, _) => Extended::PosInf,
    }
}

/// Slots of a module in their total order.
fn ordered_slots(m: &PersistenceModule<Rational>) -> Vec<Slot> {
    let mut slots: Vec<Slot> = (0..m.len()).map(Slot::Index).collect();
    match m.limit().map(|l| l.kind) {
        Some(LimitKind::Colimit) => slots.push(Slot::Limit),
        Some(LimitKind::Limit) => slots.insert(0, Slot::Limit),
        None => {}
    }
    slots
}

/// `rank(i → j)` equals the number of bars containing `[t_i, t_j]`, except
/// at the limit slot alone, whose classes are not bars.
fn rank_identity(m: &PersistenceModule<Rational>, b: &Barcode<Rational>) -> bool {
    let slots = ordered_slots(m);
    for (x, &s) in slots.iter().enumerate() {
        for &t in &slots[x..] {
            if s == Slot::Limit && t == Slot::Limit {
                continue;
            }
            let Ok(r) = m.rank_invariant(s, t) else { return false };
            if r != b.count_containing(&slot_endpoint(m, s), &slot_endpoint(m, t)) {
                return false;
            }
        }
    }
    true
}

pub fn barcode_oracle(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("persistence.barcode_oracle");
    for _ in 0..cases {
        let p = [2, 3][rng.gen_range(0..2)];
        let m = random_persistence_module(rng, 4, 3, p);
        let ok = match (m.barcode(), brute_force_barcode(&m)) {
            (Ok(a), Ok(b)) => a == b && rank_identity(&m, &a),
            _ => false,
        };
        t.record(ok, || format!("{m:?}"));
    }
    t.finish()
}

pub fn bottleneck_oracle(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("bottleneck.oracle");
    for _ in 0..cases {
        let a = random_barcode(rng, 5);
        let b = random_barcode(rng, 5);
        let fast = bottleneck_distance(&a, &b);
        let slow = exhaustive_bottleneck(&a, &b);
        t.record(fast == slow, || format!("{a:?} vs {b:?}: {fast} != {slow}"));
    }
    t.finish()
}

fn add(a: &Extended<Rational>, b: &Extended<Rational>) -> Extended<Rational> {
    match (a, b) {
        (Extended::Finite(x), Extended::Finite(y)) => Extended::Finite(x + y),
        _ => Extended::PosInf,
    }
}

pub fn bottleneck_pseudometric(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("bottleneck.pseudometric");
    for _ in 0..cases {
        let a = random_barcode(rng, 5);
        let b = random_barcode(rng, 5);
        let c = random_barcode(rng, 5);
        let ab = bottleneck_distance(&a, &b);
        let ok = bottleneck_distance(&a, &a) == Extended::Finite(qi(0))
            && ab == bottleneck_distance(&b, &a)
            && bottleneck_distance(&a, &c) <= add(&ab, &bottleneck_distance(&b, &c));
        t.record(ok, || format!("{a:?} {b:?} {c:?}"));
    }
    t.finish()
}

pub fn dual_involution(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("persistence.dual_involution");
    for _ in 0..cases {
        let m = random_persistence_module(rng, 4, 3, 2);
        let d = m.dual();
        let ok = d.dual() == m
            && match (m.barcode(), d.barcode()) {
                (Ok(a), Ok(b)) => a.reflect() == b,
                _ => false,
            };
        t.record(ok, || format!("{m:?}"));
    }
    t.finish()
}

pub fn shift_translates_barcode(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("persistence.shift");
    for _ in 0..cases {
        let m = random_persistence_module(rng, 4, 3, 2);
        let s = q(rng.gen_range(-8..=8), 4);
        let ok = match (m.barcode(), m.shift(&s).barcode()) {
            (Ok(a), Ok(b)) => a.translate(&-s) == b,
            _ => false,
        };
        t.record(ok, || format!("s={s} {m:?}"));
    }
    t.finish()
}

pub fn gapped_partial_order(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("gapped.partial_order");
    for _ in 0..cases {
        let gap = q(rng.gen_range(1..=4), 2);
        let [a, b, c]: [Rational; 3] = std::array::from_fn(|_| q(rng.gen_range(-8..=8), 2));
        let le = |x: &Rational, y: &Rational| comparable(x, y, &gap);
        let ok = le(&a, &a)
            && (!(le(&a, &b) && le(&b, &a)) || a == b)
            && (!(le(&a, &b) && le(&b, &c)) || le(&a, &c));
        t.record(ok, || format!("gap={gap} {a} {b} {c}"));
    }
    t.finish()
}

pub fn restriction_stability(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("gapped.restriction_stability");
    for _ in 0..cases {
        let g = random_gapped_module(rng).module;
        let ok = restriction_stability_report(&g).is_ok_and(|r| r.passed);
        t.record(ok, || format!("{g:?}"));
    }
    t.finish()
}

pub fn spectral_stability(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("gapped.spectral_stability");
    for i in 0..cases {
        let zero = i % 5 == 0;
        let inst = random_interleaved_instance(rng, zero);
        let ok = match stability_bound_check(&inst.g, &inst.h, &inst.delta, &inst.certificate, &inst.class) {
            Ok(b) => b.holds && (!zero || b.c_g == b.c_h),
            Err(_) => false,
        };
        t.record(ok, || format!("delta={} {:?}", inst.delta, inst.g));
    }
    t.finish()
}

pub fn gapped_duality(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("gapped.duality");
    for _ in 0..cases {
        let (g, a, star) = random_duality_instance(rng);
        let ok = match (g.spectral_invariant(&a), g.dual().spectral_invariant(&star)) {
            (Ok(c), Ok(d)) => c == -d,
            _ => false,
        };
        t.record(ok, || format!("a={a:?} a*={star:?} {g:?}"));
    }
    t.finish()
}

pub fn translation_shifts_invariant(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("gapped.translation");
    let mut done = 0;
    while done < cases {
        let g = random_gapped_module(rng).module;
        let Some(a) = random_witnessed_class(rng, &g) else { continue };
        done += 1;
        let u = q(rng.gen_range(-8..=8), 8);
        let ok = match (g.spectral_invariant(&a), g.translate(&u).spectral_invariant(&a)) {
            (Ok(c), Ok(d)) => d == c.map(|x| x - u),
            _ => false,
        };
        t.record(ok, || format!("u={u} {g:?}"));
    }
    t.finish()
}

fn two_pi(k: i64) -> SymbolicSlope {
    SymbolicSlope::two_pi_times(qi(k))
}

/// `c(0, uᵏ) = c(0, a·uᵏ) = −2π⌈k/2⌉` for `n = 3`, `k ≤ 6`.
pub fn cosphere_values() -> CheckOutcome {
    let mut t = Tally::new("contact.cosphere_values");
    let zero = ConstantContactHamiltonian::new(qi(0));
    for k in 0..=6u32 {
        for theta in [SHModelClass::u(k), SHModelClass::au(k)] {
            let expected = -two_pi((k as i64 + 1) / 2);
            let got = build_cosphere_model(3, 6, theta.degree(3))
                .and_then(|m| contact_spectral_invariant(&m, &zero, theta));
            t.record(got.as_ref().ok() == Some(&expected), || format!("c(0, {theta}) = {got:?}"));
        }
    }
    t.finish()
}

pub fn axiom_constants() -> Vec<Rational> {
    vec![qi(-2), qi(0), q(1, 2), qi(3)]
}

pub fn cosphere_axioms() -> CheckOutcome {
    let mut t = Tally::new("contact.axioms");
    let report = CosphereFamily::new(3, CosphereOptions::window(0, 6))
        .and_then(|mut f| spectral_axiom_report(&mut f, &axiom_constants(), &[]));
    t.record(report.as_ref().is_ok_and(|r| r.passed()), || format!("{report:?}"));
    t.finish()
}

/// The degrees `0, 2n−2, 2n−1, 3n−2` for `n = 3`.
pub fn duality_degrees(n: i64) -> [i64; 4] {
    [0, 2 * n - 2, 2 * n - 1, 3 * n - 2]
}

pub fn cosphere_duality() -> CheckOutcome {
    let mut t = Tally::new("contact.duality");
    let n = 3;
    for degree in duality_degrees(n) {
        let theta = SHModelClass::in_degree(n, degree).expect("degree carries a class");
        let pair = build_cosphere_model(n, 6, degree)
            .and_then(|m| duality_pair(&m, &ConstantContactHamiltonian::new(qi(0)), theta));
        let ok = matches!(&pair, Ok((c, d)) if *c == -d.clone());
        t.record(ok, || format!("degree {degree}: {pair:?}"));
    }
    t.finish()
}

/// Candidates for nested sets `A ⊂ B ⊂ M` with `M` the whole space. The
/// constant 1 is the only function equal to 1 on `M`; its `ζ` comes from
/// the model.
pub fn quasi_measure_fixtures(zeta_one: Rational) -> [Vec<QuasiMeasureCandidate>; 3] {
    let c = |name: &str, zeta: Rational, on: bool| QuasiMeasureCandidate {
        name: name.to_string(),
        zeta,
        equals_one_on_set: on,
    };
    let small = vec![c("one", zeta_one, true), c("bump_b", q(3, 4), true), c("bump_a", q(1, 4), true)];
    let middle = vec![c("one", zeta_one, true), c("bump_b", q(3, 4), true), c("bump_a", q(1, 4), false)];
    let whole = vec![c("one", zeta_one, true), c("bump_b", q(3, 4), false), c("bump_a", q(1, 4), false)];
    [small, middle, whole]
}

pub fn quasi_states() -> CheckOutcome {
    let mut t = Tally::new("contact.quasi_state");
    let Ok(mut family) = CosphereFamily::new(3, CosphereOptions::window(0, 2)) else {
        t.record(false, || "family".into());
        return t.finish();
    };
    for v in [q(-3, 2), qi(0), qi(1)] {
        let trace = quasi_state_estimate(&mut family, &v, 5);
        let ok = trace
            .as_ref()
            .is_ok_and(|tr| tr.value == SymbolicSlope::constant(v) && tr.constant && tr.subadditive);
        t.record(ok, || format!("zeta({v}): {trace:?}"));
    }
    let zeta_one = quasi_state_estimate(&mut family, &qi(1), 5).map(|tr| tr.value);
    let one = match zeta_one {
        Ok(z) if z.two_pi == qi(0) => z.constant,
        other => {
            t.record(false, || format!("zeta(1): {other:?}"));
            return t.finish();
        }
    };
    let [small, middle, whole] = quasi_measure_fixtures(one);
    let tau = quasi_measure_eval(&whole);
    t.record(tau == Ok(QuasiMeasure::Value(qi(1))), || format!("tau(M) = {tau:?}"));
    for (a, b) in [(&small, &middle), (&middle, &whole), (&small, &whole)] {
        let m = quasi_measure_monotone(a, b);
        t.record(m.as_ref().is_ok_and(|r| r.2), || format!("{m:?}"));
    }
    t.finish()
}

/// The triangle entry for `θ₁ = θ₂ = u`, `h = g = 0`. Reported, never
/// asserted: the check passes when the entry exists with the model values.
pub fn triangle_report() -> CheckOutcome {
    let mut t = Tally::new("contact.triangle_report");
    let u = SHModelClass::u(1);
    let report = CosphereFamily::new(3, CosphereOptions::window(0, 6))
        .and_then(|mut f| spectral_axiom_report(&mut f, &[], &[(qi(0), qi(0), u, u)]));
    let ok = report.as_ref().is_ok_and(|r| {
        r.triangle.len() == 1 && r.triangle[0].lhs == two_pi(-1) && r.triangle[0].rhs == two_pi(-2)
            && r.triangle[0].comparison == Comparison::Greater
    });
    t.record(ok, || format!("{report:?}"));
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let a = run_suite(3, 20);
        assert!(a.passed(), "{a}");
        assert_eq!(a.to_string(), run_suite(3, 20).to_string());
    }

    #[test]
    fn failing_check_reports_witness() {
        let mut t = Tally::new("x");
        t.record(true, || unreachable!());
        t.record(false, || "w".into());
        t.record(false, || "later".into());
        assert_eq!(t.finish().to_string(), "FAIL x 1/3 first failure: w");
    }
}
