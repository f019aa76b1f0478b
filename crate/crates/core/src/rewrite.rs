//! Antipode elimination.
//!
//! A redex is an `S^{±1}` slice together with the first slice above it that
//! consumes its output strand. Because `S^{±1}` has one input and one output,
//! deleting it never changes the widths of the slices in between, so a
//! rewrite is: delete the antipode, splice the rule's right-hand side in
//! place of the consumer.

use std::collections::{BTreeSet, HashSet};

use crate::canon::structural_form;
use crate::error::{Error, Result};
use crate::term::{BraidedTerm, Generator, Slice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    /// The antipode letter fed into the consumer.
    pub antipode: Generator,
    pub consumer: Generator,
    /// Input leg of the consumer that receives the antipode output.
    pub leg: usize,
    /// Replacement for `consumer ∘ (antipode on leg)`; same arity as the consumer.
    pub rhs: BraidedTerm,
}

impl RewriteRule {
    fn new(name: &str, antipode: Generator, consumer: Generator, leg: usize, dom: usize, rhs: &[(usize, Generator, usize)]) -> Self {
        let slices = rhs.iter().map(|&(l, g, r)| Slice::new(l, g, r)).collect();
        let rhs = BraidedTerm::new(dom, slices).expect("rule right-hand side is well formed");
        assert_eq!(rhs.cod(), consumer.arity().1, "rule {name} changes the codomain");
        RewriteRule { name: name.to_string(), antipode, consumer, leg, rhs }
    }

    pub fn lhs(&self) -> BraidedTerm {
        let (a, _) = self.consumer.arity();
        let slices = vec![
            Slice::new(self.leg, self.antipode, a - self.leg - 1),
            Slice::new(0, self.consumer, 0),
        ];
        BraidedTerm::new(a, slices).expect("rule left-hand side is well formed")
    }
}

/// The fourteen elimination rules followed by the naturality slides of
/// `S^{±1}` through braidings.
pub fn standard_rules() -> Vec<RewriteRule> {
    use Generator::*;
    let mut r = vec![
        RewriteRule::new("delta-s", S, Delta, 0, 1, &[(0, Delta, 0), (0, BraidPlus, 0), (0, S, 1), (1, S, 0)]),
        RewriteRule::new("delta-sinv", Sinv, Delta, 0, 1, &[(0, Delta, 0), (0, BraidMinus, 0), (0, Sinv, 1), (1, Sinv, 0)]),
        RewriteRule::new("eps-s", S, Eps, 0, 1, &[(0, Eps, 0)]),
        RewriteRule::new("eps-sinv", Sinv, Eps, 0, 1, &[(0, Eps, 0)]),
        RewriteRule::new("s-sinv", Sinv, S, 0, 1, &[]),
        RewriteRule::new("sinv-s", S, Sinv, 0, 1, &[]),
        RewriteRule::new("theta+-s", S, ThetaPlus, 0, 1, &[(0, ThetaPlus, 0)]),
        RewriteRule::new("theta+-sinv", Sinv, ThetaPlus, 0, 1, &[(0, ThetaPlus, 0)]),
        RewriteRule::new("theta--s", S, ThetaMinus, 0, 1, &[(0, ThetaMinus, 0)]),
        RewriteRule::new("theta--sinv", Sinv, ThetaMinus, 0, 1, &[(0, ThetaMinus, 0)]),
    ];
    for leg in 0..2 {
        let side = if leg == 0 { "left" } else { "right" };
        r.push(RewriteRule::new(&format!("omega+-s-{side}"), S, OmegaPlus, leg, 2, &[(0, OmegaMinus, 0)]));
        r.push(RewriteRule::new(&format!("omega+-sinv-{side}"), Sinv, OmegaPlus, leg, 2, &[(0, BraidPlus, 0), (0, OmegaMinus, 0)]));
        r.push(RewriteRule::new(&format!("omega--s-{side}"), S, OmegaMinus, leg, 2, &[(0, BraidMinus, 0), (0, OmegaPlus, 0)]));
        r.push(RewriteRule::new(&format!("omega--sinv-{side}"), Sinv, OmegaMinus, leg, 2, &[(0, OmegaPlus, 0)]));
    }
    // naturality: an antipode entering a braiding leaves on the opposite output
    for br in [BraidPlus, BraidMinus] {
        for a in [S, Sinv] {
            r.push(RewriteRule::new(&format!("slide-{}-{}-left", a, br), a, br, 0, 2, &[(0, br, 0), (1, a, 0)]));
            r.push(RewriteRule::new(&format!("slide-{}-{}-right", a, br), a, br, 1, 2, &[(0, br, 0), (0, a, 1)]));
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Redex {
    pub antipode_index: usize,
    pub consumer_index: usize,
    pub leg: usize,
    pub rule: usize,
}

/// Index of the first slice above `k` that consumes the output of slice `k`'s
/// leg at position `pos`, and the leg it enters through.
pub fn consumer_of(t: &BraidedTerm, k: usize, mut pos: usize) -> Option<(usize, usize)> {
    for (j, s) in t.slices().iter().enumerate().skip(k + 1) {
        let (a, b) = s.gen.arity();
        if pos < s.left {
            continue;
        }
        if pos >= s.left + a {
            pos = pos + b - a;
            continue;
        }
        return Some((j, pos - s.left));
    }
    None
}

pub fn find_redexes(t: &BraidedTerm, rules: &[RewriteRule]) -> Vec<Redex> {
    let mut out = Vec::new();
    for (k, s) in t.slices().iter().enumerate() {
        if !s.gen.is_antipode() {
            continue;
        }
        if let Some((j, leg)) = consumer_of(t, k, s.left) {
            let cg = t.slices()[j].gen;
            for (ri, r) in rules.iter().enumerate() {
                if r.antipode == s.gen && r.consumer == cg && r.leg == leg {
                    out.push(Redex { antipode_index: k, consumer_index: j, leg, rule: ri });
                }
            }
        }
    }
    out
}

pub fn apply_redex(t: &BraidedTerm, rx: &Redex, rules: &[RewriteRule]) -> BraidedTerm {
    let rule = &rules[rx.rule];
    let cons = t.slices()[rx.consumer_index];
    let mut slices = Vec::with_capacity(t.len() + rule.rhs.len());
    for (k, s) in t.slices().iter().enumerate() {
        if k == rx.antipode_index {
            continue;
        }
        if k == rx.consumer_index {
            slices.extend(rule.rhs.slices().iter().map(|r| r.padded(cons.left, cons.right)));
        } else {
            slices.push(*s);
        }
    }
    BraidedTerm::from_parts(t.dom(), slices)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub term: BraidedTerm,
    pub steps: usize,
    /// Antipodes left because their strand reaches the codomain (or no rule matched).
    pub residual: usize,
}

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// Rewrites with the leftmost-lowest redex first until no rule applies.
pub fn eliminate_antipodes_with(t: &BraidedTerm, rules: &[RewriteRule], budget: usize) -> Result<Elimination> {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        let rx = find_redexes(&cur, rules).into_iter().next();
        match rx {
            None => break,
            Some(rx) => {
                cur = apply_redex(&cur, &rx, rules);
                steps += 1;
                if steps > budget {
                    return Err(Error::ResourceLimit(budget));
                }
            }
        }
    }
    let residual = cur.antipode_count();
    Ok(Elimination { term: cur, steps, residual })
}

pub fn eliminate_antipodes(t: &BraidedTerm) -> BraidedTerm {
    eliminate_antipodes_with(t, &standard_rules(), DEFAULT_STEP_BUDGET)
        .expect("the standard rule set terminates")
        .term
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub terms_examined: usize,
    pub pairs_checked: usize,
    pub failures: usize,
    /// Text of the first few non-joinable source terms.
    pub failing_terms: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct ConfluenceConfig {
    pub max_size: usize,
    pub max_dom: usize,
    pub max_width: usize,
    pub node_budget: usize,
}

impl ConfluenceConfig {
    pub fn new(max_size: usize) -> Self {
        ConfluenceConfig { max_size, max_dom: 3, max_width: 4, node_budget: 2_000_000 }
    }
}

pub fn local_confluence_report(max_size: usize) -> Result<ConfluenceReport> {
    local_confluence_report_with(&standard_rules(), ConfluenceConfig::new(max_size))
}

fn overlapping(a: &Redex, b: &Redex) -> bool {
    let sa = [a.antipode_index, a.consumer_index];
    let sb = [b.antipode_index, b.consumer_index];
    sa.iter().any(|x| sb.contains(x))
}

/// Enumerates every term with at most `max_size` slices (domain ≤ `max_dom`,
/// widths ≤ `max_width`) in which two distinct redexes share a slice, and
/// checks that each pair of one-step rewrites has a common normal form.
pub fn local_confluence_report_with(rules: &[RewriteRule], cfg: ConfluenceConfig) -> Result<ConfluenceReport> {
    let mut report = ConfluenceReport::default();
    let mut budget = cfg.node_budget;
    for dom in 0..=cfg.max_dom {
        let mut stack = vec![Vec::<Slice>::new()];
        while let Some(prefix) = stack.pop() {
            let width = prefix.last().map_or(dom, Slice::width_out);
            if !prefix.is_empty() {
                let t = BraidedTerm::from_parts(dom, prefix.clone());
                check_term(&t, rules, &mut report, &mut budget)?;
            }
            if prefix.len() == cfg.max_size {
                continue;
            }
            for g in Generator::ALL {
                let (a, b) = g.arity();
                if a > width || width - a + b > cfg.max_width {
                    continue;
                }
                for left in 0..=(width - a) {
                    let mut next = prefix.clone();
                    next.push(Slice::new(left, g, width - a - left));
                    stack.push(next);
                }
            }
        }
    }
    Ok(report)
}

fn check_term(t: &BraidedTerm, rules: &[RewriteRule], report: &mut ConfluenceReport, budget: &mut usize) -> Result<()> {
    let rx = find_redexes(t, rules);
    let mut pairs = Vec::new();
    for i in 0..rx.len() {
        for j in (i + 1)..rx.len() {
            if overlapping(&rx[i], &rx[j]) {
                pairs.push((rx[i], rx[j]));
            }
        }
    }
    if pairs.is_empty() {
        return Ok(());
    }
    report.terms_examined += 1;
    for (a, b) in pairs {
        report.pairs_checked += 1;
        let y = apply_redex(t, &a, rules);
        let z = apply_redex(t, &b, rules);
        let ny = normal_forms(&y, rules, budget)?;
        let nz = normal_forms(&z, rules, budget)?;
        if ny.is_disjoint(&nz) {
            report.failures += 1;
            if report.failing_terms.len() < 8 {
                report.failing_terms.push(t.to_text());
            }
        }
    }
    Ok(())
}

/// Every irreducible term reachable from `t`, up to structural equivalence.
pub fn normal_forms(t: &BraidedTerm, rules: &[RewriteRule], budget: &mut usize) -> Result<BTreeSet<BraidedTerm>> {
    let mut seen: HashSet<BraidedTerm> = HashSet::new();
    let mut stack = vec![t.clone()];
    let mut out = BTreeSet::new();
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        if *budget == 0 {
            return Err(Error::ResourceLimit(seen.len()));
        }
        *budget -= 1;
        let rx = find_redexes(&cur, rules);
        if rx.is_empty() {
            out.insert(structural_form(&cur));
            continue;
        }
        for r in rx {
            stack.push(apply_redex(&cur, &r, rules));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn term(dom: usize, s: &[(usize, Generator, usize)]) -> BraidedTerm {
        BraidedTerm::new(dom, s.iter().map(|&(l, g, r)| Slice::new(l, g, r)).collect()).unwrap()
    }

    #[test]
    fn rule_table_arities_match() {
        let r = standard_rules();
        assert_eq!(r.len(), 18 + 8);
        for rule in &r {
            assert_eq!(rule.lhs().dom(), rule.rhs.dom());
            assert_eq!(rule.lhs().cod(), rule.rhs.cod());
        }
    }

    #[test]
    fn theta_absorbs_antipode() {
        let t = term(1, &[(0, S, 0), (0, ThetaPlus, 0)]);
        assert_eq!(eliminate_antipodes(&t), term(1, &[(0, ThetaPlus, 0)]));
    }

    #[test]
    fn omega_plus_turns_minus() {
        let t = term(2, &[(0, S, 1), (0, OmegaPlus, 0)]);
        assert_eq!(eliminate_antipodes(&t), term(2, &[(0, OmegaMinus, 0)]));
    }

    #[test]
    fn antipode_pair_cancels_under_counit() {
        let t = term(1, &[(0, Sinv, 0), (0, S, 0), (0, Eps, 0)]);
        assert_eq!(eliminate_antipodes(&t), term(1, &[(0, Eps, 0)]));
    }

    #[test]
    fn antipode_passes_through_unrelated_slices() {
        let t = term(2, &[(1, S, 0), (0, Delta, 1), (0, Eps, 2), (0, OmegaPlus, 0)]);
        let out = eliminate_antipodes(&t);
        assert_eq!(out.antipode_count(), 0);
        assert_eq!(out.slices().last().unwrap().gen, OmegaMinus);
    }

    #[test]
    fn residual_antipode_at_codomain_is_reported() {
        let t = term(1, &[(0, S, 0)]);
        let e = eliminate_antipodes_with(&t, &standard_rules(), 10).unwrap();
        assert_eq!(e.residual, 1);
    }

    #[test]
    fn single_slice_has_no_overlaps() {
        let rep = local_confluence_report(1).unwrap();
        assert_eq!((rep.pairs_checked, rep.failures), (0, 0));
    }

    #[test]
    fn two_slices_are_confluent() {
        let rep = local_confluence_report(2).unwrap();
        assert_eq!(rep.failures, 0, "{:?}", rep.failing_terms);
    }
}
