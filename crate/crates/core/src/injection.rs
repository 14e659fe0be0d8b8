//! The injections `f: T_n -> S_n` from the upper-bound arguments for left
//! and two-sided ideals, where `T_n` is the transition semigroup of an
//! arbitrary minimal DFA of the class and `S_n` that of the witness.
//!
//! Cases are tested in the listed order and the first match wins. Whenever
//! a construction needs "some state r", the smallest such state is used.
//! Nothing the arguments promise is assumed: totality, `f(t) ∈ S_n`, the
//! strict chains and injectivity are all checked and reported.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::dfa::{Dfa, StatePreorder};
use crate::exec::{self, Mode};
use crate::ideals;
use crate::semigroup::{SemigroupError, TransformationSemigroup};
use crate::transform::Transformation;
use crate::witness::{self, IdealClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseLabel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "2a")]
    TwoA,
    #[serde(rename = "2b")]
    TwoB,
    #[serde(rename = "2c")]
    TwoC,
    #[serde(rename = "3a")]
    ThreeA,
    #[serde(rename = "3b")]
    ThreeB,
    #[serde(rename = "3c")]
    ThreeC,
    #[serde(rename = "3d")]
    ThreeD,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::One => "1",
            CaseLabel::Two => "2",
            CaseLabel::TwoA => "2a",
            CaseLabel::TwoB => "2b",
            CaseLabel::TwoC => "2c",
            CaseLabel::ThreeA => "3a",
            CaseLabel::ThreeB => "3b",
            CaseLabel::ThreeC => "3c",
            CaseLabel::ThreeD => "3d",
        }
    }

    /// The labels used for a class, in testing order.
    pub fn for_class(class: IdealClass) -> &'static [CaseLabel] {
        use CaseLabel::*;
        match class {
            IdealClass::Left => &[One, Two, ThreeA, ThreeB, ThreeC],
            IdealClass::TwoSided => &[One, TwoA, TwoB, TwoC, ThreeA, ThreeB, ThreeC, ThreeD],
            IdealClass::Right => &[],
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CaseTag {
    pub class: IdealClass,
    pub label: CaseLabel,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.class, self.label)
    }
}

/// A failure of something the upper-bound argument guarantees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// No case matched.
    Coverage { t: String },
    ImageOutsideS { t: String, s: String, case: String },
    /// A chain that should be strictly increasing is not, or a constructed
    /// map lacks the cycle the argument relies on.
    Chain { t: String, detail: String },
    NonInjective { t1: String, t2: String, s: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Coverage { t } => write!(f, "coverage t={t}"),
            Violation::ImageOutsideS { t, s, case } => write!(f, "image_outside_s t={t} s={s} case={case}"),
            Violation::Chain { t, detail } => write!(f, "chain t={t} {detail}"),
            Violation::NonInjective { t1, t2, s } => write!(f, "non_injective t1={t1} t2={t2} s={s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InjectionError {
    #[error("the injection is only defined for left and two-sided ideals")]
    UnsupportedClass,
    #[error("the language is not a {0} ideal")]
    WrongClass(IdealClass),
    #[error("{class} contexts need at least {min} states, got {n}")]
    TooSmall { class: IdealClass, n: usize, min: usize },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

#[derive(Debug, Clone)]
pub struct InjectionContext {
    class: IdealClass,
    dfa: Dfa,
    preorder: StatePreorder,
    t: TransformationSemigroup,
    s: TransformationSemigroup,
}

impl InjectionContext {
    /// Minimizes `dfa`, checks its class and, for two-sided ideals, renames
    /// the final sink to `n-1`.
    pub fn new(dfa: &Dfa, class: IdealClass) -> Result<Self, InjectionError> {
        let min = match class {
            IdealClass::Left => 3,
            IdealClass::TwoSided => 4,
            IdealClass::Right => return Err(InjectionError::UnsupportedClass),
        };
        let mut m = dfa.minimize();
        let report = ideals::classify(&m)?;
        if !report.is_class(class) {
            return Err(InjectionError::WrongClass(class));
        }
        let n = m.n();
        if n < min {
            return Err(InjectionError::TooSmall { class, n, min });
        }
        if class == IdealClass::TwoSided {
            let sink = m.finals()[0];
            let swap = Transformation::from_fn(n, |q| {
                if q == sink {
                    n - 1
                } else if q == n - 1 {
                    sink
                } else {
                    q
                }
            })
            .expect("transposition");
            m = m.relabel(&swap);
        }
        let preorder = m.preorder();
        let t = m.transition_semigroup(None)?;
        let s = witness::expected_semigroup(class, n).expect("n checked above");
        Ok(Self { class, dfa: m, preorder, t, s })
    }

    pub fn class(&self) -> IdealClass {
        self.class
    }

    pub fn n(&self) -> usize {
        self.dfa.n()
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn preorder(&self) -> &StatePreorder {
        &self.preorder
    }

    pub fn t(&self) -> &TransformationSemigroup {
        &self.t
    }

    pub fn s(&self) -> &TransformationSemigroup {
        &self.s
    }

    fn tag(&self, label: CaseLabel) -> CaseTag {
        CaseTag { class: self.class, label }
    }

    /// `p, pt, ..., pt^k` with `pt^k = pt^(k+1)`, checked to be strictly
    /// increasing under `≺`.
    fn chain(&self, t: &Transformation, p: usize) -> Result<Vec<usize>, Violation> {
        let mut chain = vec![p];
        loop {
            let q = *chain.last().unwrap();
            let next = t.at(q);
            if next == q {
                return Ok(chain);
            }
            if !self.preorder.lt(q, next) || chain.len() > self.n() {
                return Err(Violation::Chain {
                    t: t.to_string(),
                    detail: format!("not strictly increasing at {q} -> {next}"),
                });
            }
            chain.push(next);
        }
    }

    pub fn classify_case(&self, t: &Transformation) -> Result<CaseTag, Violation> {
        use CaseLabel::*;
        if self.s.contains(t) {
            return Ok(self.tag(One));
        }
        let n = self.n();
        let last = n - 1;
        let p = t.at(0);
        if t.at(p) != p {
            if self.class == IdealClass::Left {
                return Ok(self.tag(Two));
            }
            let chain = self.chain(t, p)?;
            let k = chain.len() - 1;
            return Ok(self.tag(if chain[k] != last {
                TwoA
            } else if k >= 2 {
                TwoB
            } else {
                TwoC
            }));
        }
        let po = &self.preorder;
        let excluded = |q: usize| q == p || (self.class == IdealClass::TwoSided && q == last);
        if cycle_state(t).is_some() {
            Ok(self.tag(ThreeA))
        } else if (0..n).any(|q| t.at(q) == q && !excluded(q)) {
            Ok(self.tag(ThreeB))
        } else if (0..n).any(|r| po.lt(p, r) && t.at(r) == p) {
            Ok(self.tag(ThreeC))
        } else if self.class == IdealClass::TwoSided && (0..n).any(|r| po.lt(p, r) && po.lt(r, last) && t.at(r) == last) {
            Ok(self.tag(ThreeD))
        } else {
            Err(Violation::Coverage { t: t.to_string() })
        }
    }

    /// `f(t)` and the case used; the image is checked to lie in `S_n`.
    pub fn apply_f(&self, t: &Transformation) -> Result<(Transformation, CaseTag), Violation> {
        use CaseLabel::*;
        let tag = self.classify_case(t)?;
        let n = self.n();
        let last = n - 1;
        let po = &self.preorder;
        let p = t.at(0);
        let mut s = t.to_vec();
        match tag.label {
            One => return Ok((t.clone(), tag)),
            Two | TwoA => {
                let chain = self.chain(t, p)?;
                s[0] = 0;
                s[*chain.last().unwrap()] = p;
            }
            TwoB => {
                let chain = self.chain(t, p)?;
                let k = chain.len() - 1;
                s[0] = 0;
                for i in 1..k {
                    s[chain[i]] = chain[i - 1];
                }
                s[p] = last;
            }
            TwoC => {
                let r = (0..n)
                    .filter(|&r| r != 0 && r != p && r != last)
                    .find(|&r| !po.leq(p, r) && po.lt(p, t.at(r)) && po.lt(t.at(r), last))
                    .ok_or_else(|| Violation::Coverage { t: t.to_string() })?;
                let rt = t.at(r);
                s[0] = 0;
                s[p] = rt;
                s[rt] = p;
                s[r] = 0;
            }
            ThreeA => {
                let r = cycle_state(t).expect("case requires a cycle");
                s[0] = 0;
                s[p] = r;
            }
            ThreeB => {
                for q in (0..n).filter(|&q| t.at(q) == q && q != p && !(tag.class == IdealClass::TwoSided && q == last)) {
                    s[q] = 0;
                }
                s[0] = 0;
            }
            ThreeC => {
                let r = (0..n).find(|&r| po.lt(p, r) && t.at(r) == p).expect("case requires r");
                for q in (0..n).filter(|&q| po.lt(p, q) && t.at(q) == p) {
                    s[q] = 0;
                }
                s[0] = 0;
                s[p] = r;
            }
            ThreeD => {
                for q in (0..n).filter(|&q| t.at(q) == last) {
                    s[q] = q;
                }
                s[0] = 0;
                s[p] = last;
            }
        }
        let s = Transformation::new(s).expect("states stay in range");
        if !self.s.contains(&s) {
            return Err(Violation::ImageOutsideS { t: t.to_string(), s: s.to_string(), case: tag.label.to_string() });
        }
        if tag.label == Two {
            self.check_case_two_cycle(t, &s, p)?;
        }
        Ok((s, tag))
    }

    /// In the left-ideal Case 2, `s` must contain the cycle
    /// `p -> pt -> ... -> pt^k -> p`, strictly increasing from `p`.
    fn check_case_two_cycle(&self, t: &Transformation, s: &Transformation, p: usize) -> Result<(), Violation> {
        let mut q = p;
        for _ in 0..self.n() {
            let next = s.at(q);
            if next == p {
                return Ok(());
            }
            if !self.preorder.lt(q, next) {
                break;
            }
            q = next;
        }
        Err(Violation::Chain { t: t.to_string(), detail: format!("f(t)={s} has no strictly ordered cycle through {p}") })
    }
}

/// Smallest state lying on a cycle of length at least 2.
fn cycle_state(t: &Transformation) -> Option<usize> {
    let n = t.n();
    (0..n).find(|&q| {
        if t.at(q) == q {
            return false;
        }
        let mut x = t.at(q);
        for _ in 0..n {
            if x == q {
                return true;
            }
            x = t.at(x);
        }
        false
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectionReport {
    pub class: IdealClass,
    pub n: usize,
    pub t_size: usize,
    pub s_size: usize,
    pub total: bool,
    pub contained: bool,
    pub injective: bool,
    /// `|T| ≤ |S|`
    pub bound_implied: bool,
    pub case_counts: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
}

impl InjectionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when every element fell into Case 1, so `f` is the identity.
    pub fn is_identity_map(&self) -> bool {
        self.case_counts.get("1").copied() == Some(self.t_size)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "class {}", self.class);
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "t_size {}", self.t_size);
        let _ = writeln!(out, "s_size {}", self.s_size);
        let _ = writeln!(out, "total {}", self.total);
        let _ = writeln!(out, "contained {}", self.contained);
        let _ = writeln!(out, "injective {}", self.injective);
        let _ = writeln!(out, "bound_implied {}", self.bound_implied);
        for (case, count) in &self.case_counts {
            let _ = writeln!(out, "case.{case} {count}");
        }
        let _ = writeln!(out, "violations {}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(out, "violation {v}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report json")
    }
}

pub fn verify_injection(ctx: &InjectionContext) -> InjectionReport {
    verify_injection_with(Mode::default(), ctx)
}

pub fn verify_injection_with(mode: Mode, ctx: &InjectionContext) -> InjectionReport {
    let elements = ctx.t.elements();
    let results = exec::map(mode, elements, |t| ctx.apply_f(t));

    let mut case_counts: BTreeMap<String, usize> =
        CaseLabel::for_class(ctx.class).iter().map(|l| (l.to_string(), 0)).collect();
    let mut violations = Vec::new();
    let (mut total, mut contained) = (true, true);
    let mut seen: HashMap<Transformation, &Transformation> = HashMap::new();
    let mut injective = true;
    for (t, result) in elements.iter().zip(results) {
        match result {
            Ok((s, tag)) => {
                *case_counts.entry(tag.label.to_string()).or_default() += 1;
                if let Some(prev) = seen.get(&s) {
                    injective = false;
                    violations.push(Violation::NonInjective { t1: prev.to_string(), t2: t.to_string(), s: s.to_string() });
                } else {
                    seen.insert(s, t);
                }
            }
            Err(v) => {
                match v {
                    Violation::Coverage { .. } => total = false,
                    Violation::ImageOutsideS { .. } => contained = false,
                    _ => {}
                }
                violations.push(v);
            }
        }
    }
    InjectionReport {
        class: ctx.class,
        n: ctx.n(),
        t_size: ctx.t.len(),
        s_size: ctx.s.len(),
        total,
        contained,
        injective,
        bound_implied: ctx.t.len() <= ctx.s.len(),
        case_counts,
        violations,
    }
}
