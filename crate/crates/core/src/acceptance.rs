//! The acceptance suites, shared by the integration tests and `hopfc selftest`.
//!
//! Each suite returns a [`SuiteOutcome`]; failures carry the first few
//! offending cases in `detail`.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::{builtin_bundles, builtin_params, CoendBundle};
use crate::corpus::{self, empty_link, random_cod0_term, random_diagram, random_presentation, trefoil_plus_one, unknot};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::kirby::{gauss_sum_oracle, invariant_tau, kirby_check, poincare_diagram, poincare_hand_formula, uniform_alpha};
use crate::oracle::{check_factorization, check_retraction, quantum_sl2, RibbonModule};
use crate::relations::bar_relations;
use crate::rewrite::{eliminate_antipodes, local_confluence_report};
use crate::tangle::{
    contract_presentation, contract_tangle, extract_presentation, markov_relations, presentation_to_tangle, Mode,
    TangleWord,
};
use crate::tensor::DenseTensor;
use crate::term::{conv_compose, conv_identity, HopfDiagram};
use crate::translate::{contract_c, psi0, psi_full, psi_geom};
use crate::validate::{bundle_validate, corruption_fixtures};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteInfo {
    pub id: u8,
    pub name: &'static str,
    pub budget_secs: u64,
}

pub const SUITES: [SuiteInfo; 11] = [
    SuiteInfo { id: 1, name: "rewriting", budget_secs: 30 },
    SuiteInfo { id: 2, name: "confluence", budget_secs: 60 },
    SuiteInfo { id: 3, name: "convolution", budget_secs: 30 },
    SuiteInfo { id: 4, name: "bar-relations", budget_secs: 10 },
    SuiteInfo { id: 5, name: "markov", budget_secs: 60 },
    SuiteInfo { id: 6, name: "contraction", budget_secs: 60 },
    SuiteInfo { id: 7, name: "retraction", budget_secs: 120 },
    SuiteInfo { id: 8, name: "poincare", budget_secs: 10 },
    SuiteInfo { id: 9, name: "normalization", budget_secs: 5 },
    SuiteInfo { id: 10, name: "bundle-axioms", budget_secs: 30 },
    SuiteInfo { id: 11, name: "gauss-sum", budget_secs: 10 },
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual checks performed.
    pub checks: usize,
    /// Suite statistics worth printing even on success.
    pub notes: Vec<String>,
    pub detail: Vec<String>,
    pub elapsed_ms: u128,
    pub budget_secs: u64,
}

impl SuiteOutcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed_ms <= u128::from(self.budget_secs) * 1000
    }

    /// `PASS [7] retraction: 220 checks in 1234 ms (budget 120 s)`
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{verdict} [{}] {}: {} checks in {} ms (budget {} s)",
            self.id, self.name, self.checks, self.elapsed_ms, self.budget_secs
        );
        if !self.within_budget() {
            s.push_str(" over budget");
        }
        if !self.notes.is_empty() {
            s.push_str(&format!(" [{}]", self.notes.join(", ")));
        }
        if let Some(d) = self.detail.first() {
            s.push_str(&format!("; {d}"));
        }
        s
    }
}

/// Collects check results, keeping the first few failures.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    notes: Vec<String>,
    detail: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.detail.len() < 5 {
                self.detail.push(what());
            }
        }
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.check(false, || e.to_string());
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs one suite by id.
pub fn run_suite(id: u8, seed: u64) -> Option<SuiteOutcome> {
    let info = *SUITES.iter().find(|s| s.id == id)?;
    let start = Instant::now();
    let mut t = Tally::default();
    match id {
        1 => rewriting(&mut t, seed),
        2 => confluence(&mut t),
        3 => convolution(&mut t, seed),
        4 => bar(&mut t),
        5 => markov(&mut t),
        6 => contraction(&mut t, seed),
        7 => retraction(&mut t, seed),
        8 => poincare(&mut t),
        9 => normalization(&mut t),
        10 => axioms(&mut t, seed),
        _ => gauss(&mut t),
    }
    let elapsed: Duration = start.elapsed();
    Some(SuiteOutcome {
        id,
        name: info.name,
        passed: t.failures == 0 && t.checks > 0 && elapsed <= Duration::from_secs(info.budget_secs),
        checks: t.checks,
        notes: t.notes,
        detail: t.detail,
        elapsed_ms: elapsed.as_millis(),
        budget_secs: info.budget_secs,
    })
}

/// Runs every suite whose name contains `filter` (all when `None`), in id order.
pub fn run_all(seed: u64, filter: Option<&str>) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .filter(|s| filter.map_or(true, |f| s.name.contains(f)))
        .filter_map(|s| run_suite(s.id, seed))
        .collect()
}

/// The bundle-axiom suite on one extra bundle, reported under id 10.
pub fn validate_bundle_suite(b: &CoendBundle) -> SuiteOutcome {
    let start = Instant::now();
    let rep = bundle_validate(b);
    SuiteOutcome {
        id: 10,
        name: "bundle-axioms",
        passed: rep.ok(),
        checks: rep.passed.len() + rep.failed.len(),
        notes: vec![format!("bundle={}", b.name)],
        detail: rep.failed.clone(),
        elapsed_ms: start.elapsed().as_millis(),
        budget_secs: 30,
    }
}

fn same_form(ev: &Evaluator, a: &HopfDiagram, b: &HopfDiagram) -> bool {
    ev.eval_diagram(a) == ev.eval_diagram(b)
}

fn rewriting(t: &mut Tally, seed: u64) {
    let mut rng = corpus::rng(seed);
    let bundles = builtin_bundles();
    let evs: Vec<Evaluator> = bundles.iter().map(Evaluator::new).collect();
    for k in 0..1000 {
        let dom = rng.gen_range(1..=3);
        let term = random_cod0_term(&mut rng, dom, 15, 5);
        let out = eliminate_antipodes(&term);
        t.check(out.antipode_count() == 0, || format!("term {k} keeps antipodes: {}", out.to_text()));
        for (b, ev) in bundles.iter().zip(&evs) {
            t.check(ev.eval_term(&term).to_dense() == ev.eval_term(&out).to_dense(), || {
                format!("term {k} changes value on {}: {}", b.name, term.to_text())
            });
        }
    }
}

fn confluence(t: &mut Tally) {
    match local_confluence_report(3) {
        Ok(r) => {
            t.notes.push(format!("terms={} pairs={} failures={}", r.terms_examined, r.pairs_checked, r.failures));
            t.check(r.failures == 0 && r.pairs_checked > 0, || {
                format!("{} of {} critical pairs not joinable: {:?}", r.failures, r.pairs_checked, r.failing_terms)
            })
        }
        Err(e) => t.error(e),
    }
}

fn convolution(t: &mut Tally, seed: u64) {
    let mut rng = corpus::rng(seed ^ 3);
    for b in builtin_bundles() {
        let ev = Evaluator::new(&b);
        for k in 0..200 {
            let n = rng.gen_range(1..=3);
            let [x, y, z] = [(); 3].map(|_| random_diagram(&mut rng, n, 8, 2));
            let laws = (|| -> Result<[bool; 3]> {
                let left = conv_compose(&conv_compose(&x, &y)?, &z)?;
                let right = conv_compose(&x, &conv_compose(&y, &z)?)?;
                let e = conv_identity(n);
                Ok([
                    same_form(&ev, &left, &right),
                    same_form(&ev, &conv_compose(&e, &x)?, &x),
                    same_form(&ev, &conv_compose(&x, &e)?, &x),
                ])
            })();
            match laws {
                Ok(oks) => {
                    for (law, ok) in ["associativity", "left unit", "right unit"].iter().zip(oks) {
                        t.check(ok, || format!("{law} fails on {} for triple {k}", b.name));
                    }
                }
                Err(e) => t.error(e),
            }
        }
    }
}

fn bar(t: &mut Tally) {
    for b in builtin_bundles() {
        let ev = Evaluator::new(&b);
        for r in bar_relations() {
            let first = ev.eval_term(&r.sides[0]).to_dense();
            for side in &r.sides[1..] {
                t.check(ev.eval_term(side).to_dense() == first, || format!("{} on {}", r.name, b.name));
            }
        }
    }
}

fn markov(t: &mut Tally) {
    let bundles = builtin_bundles();
    let evs: Vec<Evaluator> = bundles.iter().map(Evaluator::new).collect();
    for n in 1..=5 {
        for rel in markov_relations(n) {
            let (l, r) = match (psi0(&rel.lhs), psi0(&rel.rhs)) {
                (Ok(l), Ok(r)) => (l, r),
                (Err(e), _) | (_, Err(e)) => {
                    t.error(e);
                    continue;
                }
            };
            for (b, ev) in bundles.iter().zip(&evs) {
                t.check(same_form(ev, &l, &r), || format!("{} (n={n}) on {}", rel.label, b.name));
            }
        }
    }
}

/// Isotopy oracles: the quantum sl₂ module plus every bundle's test modules.
fn oracle_modules() -> Vec<(String, RibbonModule)> {
    let mut out = vec![("sl2".to_string(), quantum_sl2(14).expect("sl2 module is well formed"))];
    for b in builtin_bundles() {
        for m in &b.modules {
            if let Ok(rm) = RibbonModule::from_test_module(m) {
                out.push((format!("{}/{}", b.name, m.name), rm));
            }
        }
    }
    out
}

fn isotopic(mods: &[(String, RibbonModule)], a: &TangleWord, b: &TangleWord) -> std::result::Result<bool, String> {
    for (name, m) in mods {
        let (x, y) = (m.evaluate(a, Mode::StringLink), m.evaluate(b, Mode::StringLink));
        match (x, y) {
            (Ok(x), Ok(y)) if x == y => {}
            (Ok(_), Ok(_)) => return Ok(false),
            (Err(e), _) | (_, Err(e)) => return Err(format!("{name}: {e}")),
        }
    }
    Ok(true)
}

fn contraction(t: &mut Tally, seed: u64) {
    let mut rng = corpus::rng(seed ^ 6);
    let mods = oracle_modules();
    // presentation level
    for n in 5..=7 {
        let p = random_presentation(&mut rng, n, 3, 0);
        for i in 2..=n - 3 {
            for j in 2..=i {
                let r = (|| -> Result<(TangleWord, TangleWord)> {
                    let a = contract_presentation(&contract_presentation(&p, j)?, i)?;
                    let b = contract_presentation(&contract_presentation(&p, i + 2)?, j)?;
                    Ok((presentation_to_tangle(&a)?, presentation_to_tangle(&b)?))
                })();
                match r.map_err(|e| e.to_string()).and_then(|(a, b)| isotopic(&mods, &a, &b)) {
                    Ok(ok) => t.check(ok, || format!("presentation c{i}c{j} on {p}")),
                    Err(e) => t.error(e),
                }
            }
        }
    }
    // under evaluation
    let bundles = builtin_bundles();
    let evs: Vec<Evaluator> = bundles.iter().map(Evaluator::new).collect();
    for n in 5..=7 {
        let d = random_diagram(&mut rng, n, n + 4, 1);
        for i in 2..=n - 3 {
            for j in 2..=i {
                let r = (|| -> Result<(HopfDiagram, HopfDiagram)> {
                    Ok((contract_c(&contract_c(&d, j)?, i)?, contract_c(&contract_c(&d, i + 2)?, j)?))
                })();
                match r {
                    Ok((a, b)) => {
                        for (bd, ev) in bundles.iter().zip(&evs) {
                            t.check(same_form(ev, &a, &b), || format!("C{i}C{j} on {} (n={n})", bd.name));
                        }
                    }
                    Err(e) => t.error(e),
                }
            }
        }
    }
    // the geometric contraction commutes with the diagram one
    for k in 0..100 {
        let n = rng.gen_range(3..=4);
        let d = random_diagram(&mut rng, n, n + 3, 1);
        let i = rng.gen_range(2..n);
        let r = (|| -> Result<(TangleWord, TangleWord)> {
            Ok((contract_tangle(&psi_geom(&d)?, i)?, psi_geom(&contract_c(&d, i)?)?))
        })();
        match r.map_err(|e| e.to_string()).and_then(|(a, b)| isotopic(&mods, &a, &b)) {
            Ok(ok) => t.check(ok, || format!("diagram {k}: contraction {i} of {}", d.term().to_text())),
            Err(e) => t.error(e),
        }
    }
}

fn retraction(t: &mut Tally, seed: u64) {
    let bundles = builtin_bundles();
    // (check passed, description) per corpus item, evaluated in parallel and tallied in corpus order
    let results: Vec<Vec<(bool, String)>> = corpus::string_link_corpus(seed)
        .par_iter()
        .map(|(name, tw)| {
            let run = || -> Result<Vec<(bool, String)>> {
                let p = extract_presentation(tw)?;
                let d = psi_full(&p)?;
                let mut out = Vec::new();
                for b in &bundles {
                    let f = check_factorization(&d, b)?;
                    out.push((f.ok(), format!("{name}: factorization on {}: {:?}", b.name, f.modules)));
                    let r = check_retraction(&p, b)?;
                    out.push((r.ok(), format!("{name}: retraction on {}: {:?}", b.name, r.modules)));
                }
                Ok(out)
            };
            run().unwrap_or_else(|e| vec![(false, format!("{name}: {e}"))])
        })
        .collect();
    for (ok, what) in results.into_iter().flatten() {
        t.check(ok, || what);
    }
}

/// Kirby-ok, normalizable candidates tried by the invariant suites.
fn candidates(b: &CoendBundle) -> Vec<(&'static str, DenseTensor)> {
    [("unit", b.eta.clone()), ("uniform", uniform_alpha(b.dim))]
        .into_iter()
        .filter(|(_, a)| kirby_check(a, b).map_or(false, |k| k.kirby_ok && k.normalizable))
        .collect()
}

fn poincare(t: &mut Tally) {
    let p = match extract_presentation(&trefoil_plus_one()) {
        Ok(p) => p,
        Err(e) => return t.error(e),
    };
    let d = psi_full(&p);
    for b in builtin_bundles() {
        match &d {
            Ok(d) => t.check(same_form(&Evaluator::new(&b), d, &poincare_diagram()), || {
                format!("trefoil diagram differs from the closing diagram on {}", b.name)
            }),
            Err(e) => t.error(e),
        }
        let cands = candidates(&b);
        t.check(!cands.is_empty(), || format!("no Kirby candidate on {}", b.name));
        for (label, alpha) in cands {
            match (invariant_tau(&p, &alpha, &b), poincare_hand_formula(&alpha, &b)) {
                (Ok(tau), Ok(hand)) => {
                    t.check(tau.tau == hand, || format!("{} α={label}: pipeline {} vs hand {hand}", b.name, tau.tau));
                    if b.name == "trivial" {
                        t.check(tau.tau.is_one(), || format!("trivial bundle α={label} gives {}", tau.tau));
                    }
                }
                (Err(e), _) | (_, Err(e)) => t.error(format!("{} α={label}: {e}", b.name)),
            }
        }
    }
}

fn normalization(t: &mut Tally) {
    let links = [("empty", empty_link()), ("unknot+1", unknot(1)), ("unknot-1", unknot(-1))];
    for b in builtin_bundles() {
        for (label, alpha) in candidates(&b) {
            for (name, link) in &links {
                let tau = extract_presentation(link).and_then(|p| invariant_tau(&p, &alpha, &b));
                match tau {
                    Ok(r) => t.check(r.tau.is_one(), || format!("τ({name}) = {} on {} α={label}", r.tau, b.name)),
                    Err(e) => t.error(format!("{name} on {}: {e}", b.name)),
                }
            }
        }
    }
}

fn axioms(t: &mut Tally, seed: u64) {
    for b in builtin_bundles() {
        let rep = bundle_validate(&b);
        t.check(rep.ok(), || format!("{}: {:?}", b.name, rep.failed));
    }
    let base = crate::bundle::builtin_bundle("zmod3").expect("builtin");
    for fx in corruption_fixtures(&base, seed) {
        let rep = bundle_validate(&fx.bundle);
        t.check(rep.failed_axioms().contains(&fx.expected_axiom), || {
            format!("{}: expected {} among {:?}", fx.name, fx.expected_axiom, rep.failed_axioms())
        });
    }
}

fn gauss(t: &mut Tally) {
    for m in [2, 3, 4] {
        let name = format!("zmod{m}");
        let (Some(b), Some(params)) = (crate::bundle::builtin_bundle(&name), builtin_params(&name)) else {
            t.error(format!("missing builtin {name}"));
            continue;
        };
        let alpha = uniform_alpha(b.dim);
        for f in -3..=3 {
            match extract_presentation(&unknot(f)).and_then(|p| invariant_tau(&p, &alpha, &b)) {
                Ok(r) => {
                    let direct = gauss_sum_oracle(&params, f);
                    t.check(r.tau == direct, || format!("{name} framing {f}: pipeline {} vs direct {direct}", r.tau));
                }
                Err(e) => t.error(format!("{name} framing {f}: {e}")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_table_is_consistent() {
        for (k, s) in SUITES.iter().enumerate() {
            assert_eq!(s.id as usize, k + 1);
        }
        assert!(run_suite(12, 0).is_none());
        assert_eq!(run_all(corpus::DEFAULT_SEED, Some("gauss")).len(), 1);
    }
}
