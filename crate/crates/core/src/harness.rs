//! Verification campaigns over small DFAs.
//!
//! A campaign either enumerates every transition table and final set for a
//! given `n` and alphabet size, or draws seeded random ideal DFAs. Each
//! minimal candidate is classified and checked against the class bounds,
//! the special-quotient bound, uniqueness of maximal semigroups up to
//! relabeling, and the injection of the upper-bound arguments.
//!
//! Exhaustive enumeration only uses first-letter transformations that are
//! lexicographically least among their conjugates by permutations fixing
//! state 0. Every DFA is isomorphic to one of those, so no language is
//! lost.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dfa::Dfa;
use crate::exec::{self, Mode};
use crate::ideals::{self, ClassificationReport, TableColumn, SPECIAL_TABLE};
use crate::injection::{verify_injection_with, InjectionContext};
use crate::semigroup::{self, TransformationSemigroup};
use crate::transform::Transformation;
use crate::witness::{self, IdealClass};

/// Default limit on `(n^n)^k · 2^n` for exhaustive campaigns.
pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// Attempts per call of [`sample_ideal_dfa`].
pub const SAMPLE_ATTEMPTS: usize = 20_000;
/// Stated-table counterexamples kept verbatim in a report.
const KEPT_EXAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `σ ≤ bound(class, n)`
    Bound,
    /// `n-1 ≤ σ ≤ special_quotient_bound ≤ n^n`, plus a tally of cells of
    /// the printed table that the candidate exceeds
    SpecialBound,
    /// maximizers relabel onto `expected_semigroup`
    Uniqueness,
    /// `verify_injection` on every left (n ≥ 3) or two-sided (n ≥ 4) ideal
    Injection,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Bound, Check::SpecialBound, Check::Uniqueness, Check::Injection];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub n: usize,
    pub alphabet_size: usize,
    pub class_filter: Option<IdealClass>,
    pub mode: CampaignMode,
    pub checks: BTreeSet<Check>,
    #[serde(default = "default_budget")]
    pub budget: u128,
}

fn default_budget() -> u128 {
    DEFAULT_BUDGET
}

impl CampaignSpec {
    pub fn exhaustive(n: usize, alphabet_size: usize, class_filter: Option<IdealClass>) -> Self {
        Self {
            n,
            alphabet_size,
            class_filter,
            mode: CampaignMode::Exhaustive,
            checks: Check::ALL.into_iter().collect(),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn sample(n: usize, alphabet_size: usize, class: IdealClass, count: usize, seed: u64) -> Self {
        Self {
            n,
            alphabet_size,
            class_filter: Some(class),
            mode: CampaignMode::Sample { count, seed },
            checks: Check::ALL.into_iter().collect(),
            budget: DEFAULT_BUDGET,
        }
    }

    /// `(n^n)^k · 2^n`, or `None` on overflow.
    pub fn exhaustive_size(&self) -> Option<u128> {
        let maps = (self.n as u128).checked_pow(u32::try_from(self.n).ok()?)?;
        maps.checked_pow(u32::try_from(self.alphabet_size).ok()?)?.checked_mul(1u128.checked_shl(self.n as u32)?)
    }

    fn classes(&self) -> Vec<IdealClass> {
        match self.class_filter {
            Some(c) => vec![c],
            None => IdealClass::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("exhaustive campaign needs {needed:?} candidates, budget is {budget}")]
    BudgetExceeded { needed: Option<u128>, budget: u128 },
    #[error("invalid campaign: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassStats {
    pub count: u64,
    pub max_sigma: usize,
    pub bound: Option<u128>,
    pub maximizers: u64,
    /// Distinct transition semigroups among the maximizers.
    pub maximizer_semigroups: usize,
    /// How many of those relabel onto the expected semigroup.
    pub relabeled: usize,
    pub injection_contexts: u64,
    pub injection_cases: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct UniquenessResult {
    pub class: IdealClass,
    pub size: usize,
    /// The relabeling permutation, absent when none exists.
    pub permutation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CampaignViolation {
    pub check: Check,
    pub dfa: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub spec: CampaignSpec,
    pub candidates: u64,
    pub minimal_candidates: u64,
    pub sample_failures: u64,
    pub per_class: BTreeMap<IdealClass, ClassStats>,
    pub uniqueness: Vec<UniquenessResult>,
    pub special_bound_checked: u64,
    /// Candidates exceeding some cell of the printed special-quotient table.
    pub stated_table_counterexamples: u64,
    pub stated_table_examples: Vec<String>,
    pub violations: Vec<CampaignViolation>,
}

impl CampaignReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_sigma(&self, class: IdealClass) -> Option<usize> {
        self.per_class.get(&class).map(|s| s.max_sigma)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report json")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.spec.n);
        let _ = writeln!(out, "alphabet_size {}", self.spec.alphabet_size);
        let _ = writeln!(out, "candidates {}", self.candidates);
        let _ = writeln!(out, "minimal_candidates {}", self.minimal_candidates);
        let _ = writeln!(out, "sample_failures {}", self.sample_failures);
        for (class, s) in &self.per_class {
            let bound = s.bound.map_or_else(|| "none".to_string(), |b| b.to_string());
            let _ = writeln!(
                out,
                "class {class} count={} max_sigma={} bound={bound} maximizers={} semigroups={} relabeled={} injection_contexts={}",
                s.count, s.max_sigma, s.maximizers, s.maximizer_semigroups, s.relabeled, s.injection_contexts
            );
            for (case, c) in &s.injection_cases {
                let _ = writeln!(out, "  case {case} {c}");
            }
        }
        for u in &self.uniqueness {
            let perm = u.permutation.as_deref().unwrap_or("none");
            let _ = writeln!(out, "uniqueness {} size={} permutation={perm}", u.class, u.size);
        }
        let _ = writeln!(out, "special_bound_checked {}", self.special_bound_checked);
        let _ = writeln!(out, "stated_table_counterexamples {}", self.stated_table_counterexamples);
        for e in &self.stated_table_examples {
            let _ = writeln!(out, "  {e}");
        }
        let _ = writeln!(out, "violations {}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(out, "violation {:?} {} {}", v.check, v.dfa, v.detail);
        }
        out
    }
}

/// One-line rendering used to identify DFAs inside reports.
pub fn dfa_key(d: &Dfa) -> String {
    let finals: Vec<String> = d.finals().iter().map(|q| q.to_string()).collect();
    let mut s = format!("init={} final=[{}]", d.initial(), finals.join(","));
    for (a, t) in d.alphabet().iter().zip(d.delta()) {
        let _ = write!(s, " {a}={t}");
    }
    s
}

#[derive(Default)]
struct Accum {
    candidates: u64,
    minimal: u64,
    sample_failures: u64,
    per_class: BTreeMap<IdealClass, ClassStats>,
    maximizer_sets: BTreeMap<IdealClass, BTreeSet<Vec<Transformation>>>,
    special_checked: u64,
    stated_counter: u64,
    stated_examples: BTreeSet<String>,
    violations: Vec<CampaignViolation>,
}

impl Accum {
    fn merge(&mut self, other: Accum) {
        self.candidates += other.candidates;
        self.minimal += other.minimal;
        self.sample_failures += other.sample_failures;
        for (class, s) in other.per_class {
            let mine = self.per_class.entry(class).or_default();
            mine.count += s.count;
            mine.max_sigma = mine.max_sigma.max(s.max_sigma);
            mine.bound = mine.bound.or(s.bound);
            mine.maximizers += s.maximizers;
            mine.injection_contexts += s.injection_contexts;
            for (case, c) in s.injection_cases {
                *mine.injection_cases.entry(case).or_default() += c;
            }
        }
        for (class, set) in other.maximizer_sets {
            self.maximizer_sets.entry(class).or_default().extend(set);
        }
        self.special_checked += other.special_checked;
        self.stated_counter += other.stated_counter;
        self.stated_examples.extend(other.stated_examples);
        while self.stated_examples.len() > KEPT_EXAMPLES {
            self.stated_examples.pop_last();
        }
        self.violations.extend(other.violations);
    }
}

/// Swaps `sink` and `n-1`.
fn sink_last(n: usize, sink: usize) -> Transformation {
    Transformation::from_fn(n, |q| {
        if q == sink {
            n - 1
        } else if q == n - 1 {
            sink
        } else {
            q
        }
    })
    .expect("transposition")
}

struct Evaluator<'a> {
    spec: &'a CampaignSpec,
    classes: Vec<IdealClass>,
}

impl Evaluator<'_> {
    fn has(&self, c: Check) -> bool {
        self.spec.checks.contains(&c)
    }

    fn violation(&self, acc: &mut Accum, check: Check, d: &Dfa, detail: String) {
        acc.violations.push(CampaignViolation { check, dfa: dfa_key(d), detail });
    }

    /// `m` must be minimal with `spec.n` states.
    fn evaluate(&self, m: &Dfa, acc: &mut Accum) {
        let n = self.spec.n;
        acc.minimal += 1;
        let report = match ideals::classify_with_cap(m, None) {
            Ok(r) => r,
            Err(e) => return self.violation(acc, Check::Bound, m, e.to_string()),
        };
        let sigma = report.sigma;
        if self.has(Check::SpecialBound) {
            self.special_checks(m, &report, acc);
        }
        for &class in &self.classes {
            if !report.is_class(class) || n < class.min_states() {
                continue;
            }
            let bound = witness::bound(class, n).ok().flatten();
            let stats = acc.per_class.entry(class).or_default();
            stats.count += 1;
            stats.max_sigma = stats.max_sigma.max(sigma);
            stats.bound = bound;
            let at_bound = bound == Some(sigma as u128);
            if at_bound {
                stats.maximizers += 1;
            }
            if self.has(Check::Bound) && bound.is_some_and(|b| sigma as u128 > b) {
                self.violation(acc, Check::Bound, m, format!("{class}: sigma {sigma} exceeds {}", bound.unwrap()));
            }
            if self.has(Check::Uniqueness) && at_bound {
                let normal = match class {
                    IdealClass::Left => m.clone(),
                    _ => m.relabel(&sink_last(n, m.finals()[0])),
                };
                match normal.transition_semigroup(None) {
                    Ok(t) => {
                        acc.maximizer_sets.entry(class).or_default().insert(t.elements().to_vec());
                    }
                    Err(e) => self.violation(acc, Check::Uniqueness, m, e.to_string()),
                }
            }
            let injection_applies = match class {
                IdealClass::Left => n >= 3,
                IdealClass::TwoSided => n >= 4,
                IdealClass::Right => false,
            };
            if self.has(Check::Injection) && injection_applies {
                match InjectionContext::new(m, class) {
                    Ok(ctx) => {
                        let r = verify_injection_with(Mode::Sequential, &ctx);
                        let stats = acc.per_class.entry(class).or_default();
                        stats.injection_contexts += 1;
                        for (case, c) in &r.case_counts {
                            *stats.injection_cases.entry(case.clone()).or_default() += *c as u64;
                        }
                        for v in r.violations {
                            self.violation(acc, Check::Injection, m, format!("{class}: {v}"));
                        }
                    }
                    Err(e) => self.violation(acc, Check::Injection, m, e.to_string()),
                }
            }
        }
    }

    fn special_checks(&self, m: &Dfa, report: &ClassificationReport, acc: &mut Accum) {
        let n = report.n;
        let sigma = report.sigma as u128;
        acc.special_checked += 1;
        let bound = ideals::special_quotient_bound(report);
        let full = (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if sigma > bound {
            self.violation(acc, Check::SpecialBound, m, format!("sigma {sigma} exceeds special bound {bound}"));
        }
        if n > 1 && (sigma + 1 < n as u128 || sigma > full) {
            self.violation(acc, Check::SpecialBound, m, format!("sigma {sigma} outside [n-1, n^n]"));
        }
        let depth = report.ur_depth;
        let mut exceeded = Vec::new();
        for (i, row) in SPECIAL_TABLE.iter().enumerate().filter(|(_, r)| r.applies(&report.special)) {
            for (c, col) in TableColumn::ALL.into_iter().enumerate() {
                let applies = match col {
                    TableColumn::Base => true,
                    TableColumn::LUr => depth.is_some(),
                    TableColumn::LetterUr => depth.is_some_and(|d| d >= 1),
                };
                if let (true, Some(v)) = (applies, ideals::stated_cell(row, col, n)) {
                    if (report.sigma as i128) > v {
                        exceeded.push(format!("row{}col{}={v}", i + 1, c + 1));
                    }
                }
            }
        }
        if !exceeded.is_empty() {
            acc.stated_counter += 1;
            acc.stated_examples.insert(format!("sigma={} {} exceeds {}", report.sigma, dfa_key(m), exceeded.join(",")));
            while acc.stated_examples.len() > KEPT_EXAMPLES {
                acc.stated_examples.pop_last();
            }
        }
    }
}

fn letters(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") })
        .collect()
}

/// All transformations of `Q_n` in lexicographic order.
fn all_maps(n: usize) -> Vec<Transformation> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut image = vec![0; n];
            for q in (0..n).rev() {
                image[q] = idx % n;
                idx /= n;
            }
            Transformation::new(image).expect("in range")
        })
        .collect()
}

/// Permutations of `Q_n` fixing 0.
fn perms_fixing_zero(n: usize) -> Vec<Transformation> {
    all_maps(n).into_iter().filter(|t| t.is_permutation() && t.fixes(0)).collect()
}

pub fn run(spec: &CampaignSpec) -> Result<CampaignReport, HarnessError> {
    run_with(Mode::default(), spec)
}

pub fn run_with(mode: Mode, spec: &CampaignSpec) -> Result<CampaignReport, HarnessError> {
    if spec.n == 0 || spec.alphabet_size == 0 {
        return Err(HarnessError::InvalidSpec("n and alphabet_size must be positive".into()));
    }
    let eval = Evaluator { spec, classes: spec.classes() };
    let acc = match spec.mode {
        CampaignMode::Exhaustive => {
            let size = spec.exhaustive_size();
            if size.is_none_or(|s| s > spec.budget) {
                return Err(HarnessError::BudgetExceeded { needed: size, budget: spec.budget });
            }
            exhaustive(mode, &eval)
        }
        CampaignMode::Sample { count, seed } => {
            let class = spec
                .class_filter
                .ok_or_else(|| HarnessError::InvalidSpec("sampling needs a class filter".into()))?;
            let parts = exec::map_range(mode, 0..count, |i| {
                let mut acc = Accum { candidates: 1, ..Default::default() };
                match sample_ideal_dfa(class, spec.n, spec.alphabet_size, seed.wrapping_add(i as u64)) {
                    Some(d) => eval.evaluate(&d, &mut acc),
                    None => acc.sample_failures += 1,
                }
                acc
            });
            let mut acc = Accum::default();
            for p in parts {
                acc.merge(p);
            }
            acc
        }
    };
    Ok(finish(spec, acc))
}

fn exhaustive(mode: Mode, eval: &Evaluator<'_>) -> Accum {
    let spec = eval.spec;
    let (n, k) = (spec.n, spec.alphabet_size);
    let maps = all_maps(n);
    let perms = perms_fixing_zero(n);
    let reps: Vec<usize> = (0..maps.len())
        .filter(|&i| perms.iter().all(|pi| maps[i] <= maps[i].conjugate(pi)))
        .collect();
    let names = letters(k);
    // One task per (first letter, second letter) pair.
    let seconds = if k >= 2 { maps.len() } else { 1 };
    let tasks: Vec<(usize, usize)> = reps.iter().flat_map(|&r| (0..seconds).map(move |s| (r, s))).collect();
    let parts = exec::map(mode, &tasks, |&(first, second)| {
        let mut acc = Accum::default();
        let rest = k.saturating_sub(2) as u32;
        let inner = maps.len().pow(rest);
        let mut delta = Vec::with_capacity(k);
        for idx in 0..inner {
            delta.clear();
            delta.push(maps[first].clone());
            if k >= 2 {
                delta.push(maps[second].clone());
            }
            let mut x = idx;
            for _ in 0..rest {
                delta.push(maps[x % maps.len()].clone());
                x /= maps.len();
            }
            for mask in 0u32..(1 << n) {
                acc.candidates += 1;
                let finals: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
                let d = Dfa::new(names.clone(), 0, &finals, delta.clone()).expect("well formed");
                let m = d.minimize();
                if m.n() == n {
                    eval.evaluate(&m, &mut acc);
                }
            }
        }
        acc
    });
    let mut acc = Accum::default();
    for p in parts {
        acc.merge(p);
    }
    acc
}

fn finish(spec: &CampaignSpec, mut acc: Accum) -> CampaignReport {
    let n = spec.n;
    let mut uniqueness = Vec::new();
    for (class, sets) in &acc.maximizer_sets {
        let expected = witness::expected_semigroup(*class, n).expect("class range checked");
        let fixed: Vec<usize> = match class {
            IdealClass::Left => vec![0],
            _ => vec![0, n - 1],
        };
        let mut relabeled = 0;
        for elements in sets {
            let t = TransformationSemigroup::from_elements(n, elements.iter().cloned()).expect("same n");
            let perm = semigroup::equal_up_to_relabeling(&t, &expected, &fixed).ok().flatten();
            if perm.is_some() {
                relabeled += 1;
            } else {
                acc.violations.push(CampaignViolation {
                    check: Check::Uniqueness,
                    dfa: format!("semigroup of size {}", t.len()),
                    detail: format!("{class}: maximal semigroup does not relabel onto the expected one"),
                });
            }
            uniqueness.push(UniquenessResult { class: *class, size: t.len(), permutation: perm.map(|p| p.to_string()) });
        }
        let stats = acc.per_class.entry(*class).or_default();
        stats.maximizer_semigroups = sets.len();
        stats.relabeled = relabeled;
    }
    uniqueness.sort();
    acc.violations.sort();
    CampaignReport {
        spec: spec.clone(),
        candidates: acc.candidates,
        minimal_candidates: acc.minimal,
        sample_failures: acc.sample_failures,
        per_class: acc.per_class,
        uniqueness,
        special_bound_checked: acc.special_checked,
        stated_table_counterexamples: acc.stated_counter,
        stated_table_examples: acc.stated_examples.into_iter().collect(),
        violations: acc.violations,
    }
}

/// A minimal DFA with exactly `n` states accepting an ideal of the given
/// class, or `None` if none was found within [`SAMPLE_ATTEMPTS`].
///
/// Each attempt draws a random DFA, closes its language under the class
/// (`Σ*L`, `LΣ*` or both), minimizes, and keeps the result only if it has
/// `n` states and passes the class test.
pub fn sample_ideal_dfa(class: IdealClass, n: usize, alphabet_size: usize, seed: u64) -> Option<Dfa> {
    if n == 0 || alphabet_size == 0 || n > 16 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = letters(alphabet_size);
    for _ in 0..SAMPLE_ATTEMPTS {
        let size = match class {
            IdealClass::Right => rng.gen_range(n..=n + 1),
            IdealClass::Left | IdealClass::TwoSided => rng.gen_range(1..=n),
        };
        let delta: Vec<Transformation> = (0..alphabet_size)
            .map(|_| Transformation::new((0..size).map(|_| rng.gen_range(0..size)).collect()).expect("in range"))
            .collect();
        let finals: Vec<usize> = (0..size).filter(|_| rng.gen_bool(0.5)).collect();
        let base = Dfa::new(names.clone(), 0, &finals, delta).expect("well formed");
        let closed = match class {
            IdealClass::Right => base.append_sigma_star(),
            IdealClass::Left => base.prepend_sigma_star(),
            IdealClass::TwoSided => base.prepend_sigma_star().append_sigma_star(),
        };
        let m = closed.minimize();
        if m.n() == n && ideals::is_ideal(&m, class) {
            return Some(m);
        }
    }
    None
}
