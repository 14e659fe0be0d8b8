//! Ideal classification and the special-quotient bounds.
//!
//! Everything here works on the minimal DFA of the language; `classify`
//! minimizes its input first.
//!
//! The bound table is kept as data. [`stated_cell`] returns each cell as
//! printed in the source table; [`bound_cell`] returns the value actually
//! used by [`special_quotient_bound`]. The two differ only in the last
//! column, where the printed formula `1 + (n-2-k)^(n-k)` is too small (for
//! `L = {a}` over `{a}` it gives 0 or 1 while `σ(L) = 2`) and is replaced by
//! the counting argument for a uniquely reachable quotient at depth 1,
//! `1 + (n-2)^(n-k)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dfa::Dfa;
use crate::semigroup::{SemigroupError, DEFAULT_CAP};
use crate::witness::{self, IdealClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClosedFlags {
    pub prefix_closed: bool,
    pub suffix_closed: bool,
    pub factor_closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SpecialQuotients {
    pub has_empty: bool,
    pub has_sigma_star: bool,
    pub has_eps: bool,
    pub has_sigma_plus: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub is_right_ideal: bool,
    pub is_left_ideal: bool,
    pub is_two_sided_ideal: bool,
    pub is_all_sided_ideal: bool,
    pub closed_class_of_complement: ClosedFlags,
    pub special: SpecialQuotients,
    /// Largest `|w|` such that `w⁻¹L` is uniquely reachable; `None` when
    /// `L` itself is not.
    pub ur_depth: Option<usize>,
    pub sigma: usize,
    pub n: usize,
    pub applicable_bounds: Vec<(String, u128)>,
}

impl ClassificationReport {
    /// The most specific ideal class, if any.
    pub fn ideal_class(&self) -> Option<IdealClass> {
        if self.is_two_sided_ideal {
            Some(IdealClass::TwoSided)
        } else if self.is_left_ideal {
            Some(IdealClass::Left)
        } else if self.is_right_ideal {
            Some(IdealClass::Right)
        } else {
            None
        }
    }

    pub fn is_class(&self, class: IdealClass) -> bool {
        match class {
            IdealClass::Right => self.is_right_ideal,
            IdealClass::Left => self.is_left_ideal,
            IdealClass::TwoSided => self.is_two_sided_ideal,
        }
    }

    pub fn min_bound(&self) -> u128 {
        self.applicable_bounds.iter().map(|(_, v)| *v).min().unwrap_or(u128::MAX)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} {v}");
        };
        kv("is_right_ideal", self.is_right_ideal.to_string());
        kv("is_left_ideal", self.is_left_ideal.to_string());
        kv("is_two_sided_ideal", self.is_two_sided_ideal.to_string());
        kv("is_all_sided_ideal", self.is_all_sided_ideal.to_string());
        let c = &self.closed_class_of_complement;
        kv("closed_class_of_complement.prefix_closed", c.prefix_closed.to_string());
        kv("closed_class_of_complement.suffix_closed", c.suffix_closed.to_string());
        kv("closed_class_of_complement.factor_closed", c.factor_closed.to_string());
        let s = &self.special;
        kv("special.has_empty", s.has_empty.to_string());
        kv("special.has_sigma_star", s.has_sigma_star.to_string());
        kv("special.has_eps", s.has_eps.to_string());
        kv("special.has_sigma_plus", s.has_sigma_plus.to_string());
        kv("ur_depth", self.ur_depth.map_or_else(|| "none".into(), |d| d.to_string()));
        kv("sigma", self.sigma.to_string());
        kv("n", self.n.to_string());
        for (rule, value) in &self.applicable_bounds {
            kv(&format!("applicable_bounds.{rule}"), value.to_string());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report json")
    }
}

/// One row of the special-quotient table: which quotients are present and
/// how many states they remove from the count (`k`, so the exponent is
/// `n - k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub empty: bool,
    pub sigma_star: bool,
    pub eps: bool,
    pub sigma_plus: bool,
    pub removed: u32,
}

const fn row(empty: bool, sigma_star: bool, eps: bool, sigma_plus: bool, removed: u32) -> TableRow {
    TableRow { empty, sigma_star, eps, sigma_plus, removed }
}

pub const SPECIAL_TABLE: [TableRow; 8] = [
    row(true, false, false, false, 1),
    row(false, true, false, false, 1),
    row(true, false, true, false, 2),
    row(false, true, false, true, 2),
    row(true, true, false, false, 2),
    row(true, true, false, true, 3),
    row(true, true, true, false, 3),
    row(true, true, true, true, 4),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableColumn {
    /// `σ(L) ≤ n^(n-k)`
    Base,
    /// also `L` uniquely reachable
    LUr,
    /// also `a⁻¹L` uniquely reachable for some letter `a`
    LetterUr,
}

impl TableColumn {
    pub const ALL: [TableColumn; 3] = [TableColumn::Base, TableColumn::LUr, TableColumn::LetterUr];
}

impl TableRow {
    pub fn applies(&self, s: &SpecialQuotients) -> bool {
        (!self.empty || s.has_empty)
            && (!self.sigma_star || s.has_sigma_star)
            && (!self.eps || s.has_eps)
            && (!self.sigma_plus || s.has_sigma_plus)
    }
}

fn ipow(base: i128, exp: i64) -> Option<i128> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

/// The cell exactly as printed in the table, or `None` when the exponent
/// is negative or the value overflows.
pub fn stated_cell(row: &TableRow, col: TableColumn, n: usize) -> Option<i128> {
    let n = n as i128;
    let k = i128::from(row.removed);
    let e = i64::try_from(n - k).ok()?;
    match col {
        TableColumn::Base => ipow(n, e),
        TableColumn::LUr => ipow(n - 1, e),
        TableColumn::LetterUr => ipow(n - 2 - k, e).and_then(|v| v.checked_add(1)),
    }
}

/// The cell used for bounding: identical to [`stated_cell`] except in the
/// last column (see module docs).
pub fn bound_cell(row: &TableRow, col: TableColumn, n: usize) -> Option<u128> {
    match col {
        TableColumn::LetterUr => depth_bound(n, 1, n.checked_sub(row.removed as usize)?),
        _ => stated_cell(row, col, n).and_then(|v| u128::try_from(v).ok()),
    }
}

/// `d + (n-1-d)^e`: at most `d` transformations reach the uniquely
/// reachable quotients below depth `d`, the rest map each of `e` free states
/// into the `n-1-d` states that are not uniquely reachable prefixes.
fn depth_bound(n: usize, d: usize, e: usize) -> Option<u128> {
    let base = (n as u128).checked_sub(1 + d as u128)?;
    base.checked_pow(u32::try_from(e).ok()?)?.checked_add(d as u128)
}

/// Minimum over the basic bound `n^n`, the uniquely-reachable bounds and
/// every applicable table cell.
pub fn special_quotient_bound(report: &ClassificationReport) -> u128 {
    special_rules(report.n, &report.special, report.ur_depth)
        .into_iter()
        .map(|(_, v)| v)
        .min()
        .expect("n^n is always present")
}

fn special_rules(n: usize, s: &SpecialQuotients, ur_depth: Option<usize>) -> Vec<(String, u128)> {
    let mut rules = Vec::new();
    if let Some(v) = (n as u128).checked_pow(n as u32) {
        rules.push(("n^n".to_string(), v));
    }
    if let Some(depth) = ur_depth {
        for d in 0..=depth.min(n - 1) {
            if let Some(v) = depth_bound(n, d, n) {
                rules.push((format!("ur_depth_{d}"), v));
            }
        }
    }
    for (i, row) in SPECIAL_TABLE.iter().enumerate().filter(|(_, r)| r.applies(s)) {
        for col in TableColumn::ALL {
            let needed = match col {
                TableColumn::Base => true,
                TableColumn::LUr => ur_depth.is_some(),
                TableColumn::LetterUr => ur_depth.is_some_and(|d| d >= 1),
            };
            if needed {
                if let Some(v) = bound_cell(row, col, n) {
                    let name = match col {
                        TableColumn::Base => "base",
                        TableColumn::LUr => "l_ur",
                        TableColumn::LetterUr => "letter_ur",
                    };
                    rules.push((format!("table_row_{}_{name}", i + 1), v));
                }
            }
        }
    }
    rules
}

pub fn is_prefix_closed(d: &Dfa) -> bool {
    let reach = d.reachable();
    (0..d.n())
        .filter(|&q| reach[q] && !d.is_final(q))
        .all(|q| d.delta().iter().all(|t| !d.is_final(t.at(q))))
}

pub fn is_suffix_closed(d: &Dfa) -> bool {
    let q0 = d.initial();
    d.delta().iter().all(|t| d.language_containment(t.at(q0), q0))
}

fn ur_depth(d: &Dfa) -> Option<usize> {
    let n = d.n();
    let mut indegree = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let reach = d.reachable();
    for p in (0..n).filter(|&p| reach[p]) {
        for t in d.delta() {
            indegree[t.at(p)] += 1;
            parent[t.at(p)] = p;
        }
    }
    if indegree[d.initial()] != 0 {
        return None;
    }
    // A state is uniquely reachable iff its only incoming edge comes from a
    // uniquely reachable state; memoized walk up the parent links.
    let mut depth: Vec<Option<Option<usize>>> = vec![None; n];
    depth[d.initial()] = Some(Some(0));
    fn resolve(q: usize, indegree: &[usize], parent: &[usize], depth: &mut [Option<Option<usize>>]) -> Option<usize> {
        if let Some(v) = depth[q] {
            return v;
        }
        depth[q] = Some(None);
        let v = if indegree[q] == 1 {
            resolve(parent[q], indegree, parent, depth).map(|d| d + 1)
        } else {
            None
        };
        depth[q] = Some(v);
        v
    }
    (0..n)
        .filter(|&q| reach[q])
        .filter_map(|q| resolve(q, &indegree, &parent, &mut depth))
        .max()
}

/// `(right ideal, left ideal)` for a minimal DFA.
fn ideal_flags(m: &Dfa) -> (bool, bool) {
    let q0 = m.initial();
    if m.empty_states()[q0] {
        return (false, false);
    }
    let finals = m.finals();
    let right = finals.len() == 1 && m.universal_states()[finals[0]];
    let left = m.delta().iter().all(|t| m.language_containment(q0, t.at(q0)));
    (right, left)
}

/// Class membership without computing the semigroup.
pub fn is_ideal(d: &Dfa, class: IdealClass) -> bool {
    let (right, left) = ideal_flags(&d.minimize());
    match class {
        IdealClass::Right => right,
        IdealClass::Left => left,
        IdealClass::TwoSided => right && left,
    }
}

pub fn classify(d: &Dfa) -> Result<ClassificationReport, SemigroupError> {
    classify_with_cap(d, Some(DEFAULT_CAP))
}

pub fn classify_with_cap(d: &Dfa, cap: Option<usize>) -> Result<ClassificationReport, SemigroupError> {
    let m = d.minimize();
    let n = m.n();
    let q0 = m.initial();
    let empty = m.empty_states();
    let universal = m.universal_states();
    let nonempty = !empty[q0];

    let (is_right, is_left) = ideal_flags(&m);
    let is_all = nonempty && (0..n).all(|q| m.delta().iter().all(|t| m.language_containment(q, t.at(q))));

    let comp = m.complement();
    let prefix_closed = is_prefix_closed(&comp);
    let suffix_closed = is_suffix_closed(&comp);

    let special = SpecialQuotients {
        has_empty: empty.iter().any(|&e| e),
        has_sigma_star: universal.iter().any(|&u| u),
        has_eps: (0..n).any(|q| m.is_final(q) && m.delta().iter().all(|t| empty[t.at(q)])),
        has_sigma_plus: (0..n).any(|q| !m.is_final(q) && m.delta().iter().all(|t| universal[t.at(q)])),
    };
    let ur = ur_depth(&m);
    let sigma = m.transition_semigroup(cap)?.len();

    let mut applicable_bounds = special_rules(n, &special, ur);
    for (flag, class) in [(is_right, IdealClass::Right), (is_left, IdealClass::Left), (is_right && is_left, IdealClass::TwoSided)] {
        if flag && n >= class.min_states() {
            if let Ok(Some(v)) = witness::bound(class, n) {
                applicable_bounds.push((format!("{}_ideal", class.name().replace('-', "_")), v));
            }
        }
    }

    Ok(ClassificationReport {
        is_right_ideal: is_right,
        is_left_ideal: is_left,
        is_two_sided_ideal: is_right && is_left,
        is_all_sided_ideal: is_all,
        closed_class_of_complement: ClosedFlags {
            prefix_closed,
            suffix_closed,
            factor_closed: prefix_closed && suffix_closed,
        },
        special,
        ur_depth: ur,
        sigma,
        n,
        applicable_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::Transformation;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    fn report(n: usize, special: SpecialQuotients, ur_depth: Option<usize>) -> ClassificationReport {
        ClassificationReport {
            is_right_ideal: false,
            is_left_ideal: false,
            is_two_sided_ideal: false,
            is_all_sided_ideal: false,
            closed_class_of_complement: ClosedFlags::default(),
            special,
            ur_depth,
            sigma: 0,
            n,
            applicable_bounds: Vec::new(),
        }
    }

    #[test]
    fn witnesses_classify_as_their_class() {
        let r = classify(&witness::build(IdealClass::Right, 4).unwrap()).unwrap();
        assert!(r.is_right_ideal && !r.is_left_ideal);
        let l = classify(&witness::build(IdealClass::Left, 4).unwrap()).unwrap();
        assert!(l.is_left_ideal && !l.is_right_ideal);
        let b = classify(&witness::build(IdealClass::TwoSided, 4).unwrap()).unwrap();
        assert!(b.is_two_sided_ideal);
        assert_eq!(b.ideal_class(), Some(IdealClass::TwoSided));
    }

    #[test]
    fn b_or_ending_in_a_is_not_a_left_ideal() {
        // L = b ∪ Σ*a
        let d = Dfa::from_parts(&["a", "b"], 0, &[1], vec![t(&[1, 1, 1]), t(&[1, 2, 2])]).unwrap();
        let r = classify(&d).unwrap();
        assert!(!r.is_left_ideal);
        // final state 2 instead: Σ Σ* b, which is a left ideal
        let d2 = Dfa::from_parts(&["a", "b"], 0, &[2], vec![t(&[1, 1, 1]), t(&[1, 2, 2])]).unwrap();
        assert!(classify(&d2).unwrap().is_left_ideal);
    }

    #[test]
    fn empty_language_is_no_ideal() {
        let d = Dfa::from_parts(&["a"], 0, &[], vec![t(&[0])]).unwrap();
        let r = classify(&d).unwrap();
        assert!(!r.is_right_ideal && !r.is_left_ideal && !r.is_two_sided_ideal && !r.is_all_sided_ideal);
        assert!(r.special.has_empty);
    }

    #[test]
    fn all_sided_example() {
        // Σ*aΣ* over {a, b} is all-sided; Σ*aaΣ* is two-sided but not all-sided
        let one = Dfa::from_parts(&["a", "b"], 0, &[1], vec![t(&[1, 1]), t(&[0, 1])]).unwrap();
        assert!(classify(&one).unwrap().is_all_sided_ideal);
        let two = Dfa::from_parts(&["a", "b"], 0, &[2], vec![t(&[1, 2, 2]), t(&[0, 0, 2])]).unwrap();
        let r = classify(&two).unwrap();
        assert!(r.is_two_sided_ideal && !r.is_all_sided_ideal);
    }

    #[test]
    fn special_bound_examples() {
        let only_star = SpecialQuotients { has_sigma_star: true, ..Default::default() };
        assert_eq!(special_quotient_bound(&report(5, only_star, None)), 625);
        let empty_eps = SpecialQuotients { has_empty: true, has_eps: true, ..Default::default() };
        assert_eq!(special_quotient_bound(&report(5, empty_eps, None)), 125);
        assert_eq!(special_quotient_bound(&report(5, SpecialQuotients::default(), None)), 3125);
    }

    #[test]
    fn stated_table_cells() {
        let n = 6;
        let cells: Vec<[Option<i128>; 3]> = SPECIAL_TABLE
            .iter()
            .map(|r| TableColumn::ALL.map(|c| stated_cell(r, c, n)))
            .collect();
        assert_eq!(cells[0], [Some(7776), Some(3125), Some(1 + 243)]);
        assert_eq!(cells[1], cells[0]);
        assert_eq!(cells[2], [Some(1296), Some(625), Some(1 + 16)]);
        assert_eq!(cells[4], cells[2]);
        assert_eq!(cells[5], [Some(216), Some(125), Some(2)]);
        assert_eq!(cells[7], [Some(36), Some(25), Some(1)]);
    }

    #[test]
    fn corrected_last_column_on_singleton() {
        // L = {a} over {a}: states L, {ε}, ∅; σ = 2
        let d = Dfa::from_parts(&["a"], 0, &[1], vec![t(&[1, 2, 2])]).unwrap();
        let r = classify(&d).unwrap();
        assert_eq!(r.sigma, 2);
        assert_eq!(r.ur_depth, Some(1));
        assert!(r.special.has_empty && r.special.has_eps);
        let row3 = &SPECIAL_TABLE[2];
        assert_eq!(stated_cell(row3, TableColumn::LetterUr, 3), Some(0));
        assert_eq!(bound_cell(row3, TableColumn::LetterUr, 3), Some(2));
        assert_eq!(special_quotient_bound(&r), 2);
    }

    #[test]
    fn ur_depth_of_chain() {
        // a^3 a*: 0 -> 1 -> 2 -> 3 (loop); depth 2 (state 3 has two in-edges)
        let d = Dfa::from_parts(&["a"], 0, &[3], vec![t(&[1, 2, 3, 3])]).unwrap();
        let r = classify(&d).unwrap();
        assert_eq!(r.ur_depth, Some(2));
        assert_eq!(r.sigma, 3);
        assert!(r.sigma as u128 <= special_quotient_bound(&r));
    }

    #[test]
    fn report_text_keys() {
        let r = classify(&witness::build(IdealClass::Left, 3).unwrap()).unwrap();
        let text = r.to_text();
        assert!(text.contains("is_left_ideal true\n"));
        assert!(text.contains("sigma 11\n"));
        assert!(text.contains("applicable_bounds.left_ideal 11\n"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["sigma"], 11);
        assert_eq!(json["special"]["has_empty"], false);
    }
}
