//! Semigroups of transformations generated by a finite set of generators.
//!
//! [`closure`] enumerates every composite of one or more generators by a
//! breadth-first expansion: each new element is multiplied on the right by
//! every generator until no new element appears. Large frontiers are
//! expanded in parallel; the discovered element *set* never depends on the
//! execution mode.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, Mode};
use crate::transform::{TransformError, Transformation};

/// Default element cap for [`closure`].
pub const DEFAULT_CAP: usize = 2_000_000;
/// Largest semigroup [`minimal_generator_count`] accepts unless overridden.
pub const DEFAULT_GENERATOR_SEARCH_BUDGET: usize = 100;
/// Largest `n` accepted by [`equal_up_to_relabeling`].
pub const MAX_RELABEL_STATES: usize = 7;

/// Frontiers smaller than this are expanded on the calling thread.
const PARALLEL_FRONTIER: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("a semigroup needs at least one generator")]
    EmptyGenerators,
    #[error("size mismatch: expected transformations of {expected} states, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generator search over {size} elements exceeds the budget of {budget}")]
    SearchInfeasible { size: usize, budget: usize },
    #[error("relabeling search over n = {n} states is infeasible (limit {MAX_RELABEL_STATES})")]
    RelabelInfeasible { n: usize },
    #[error("state {state} is out of range for n = {n}")]
    StateOutOfRange { state: usize, n: usize },
    #[error("malformed semigroup text at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// A finite semigroup of transformations of `Q_n`, together with the
/// generators it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransformationSemigroup {
    n: usize,
    /// Sorted lexicographically by image, no duplicates.
    elements: Vec<Transformation>,
    generators: Vec<Transformation>,
    generator_labels: Option<Vec<String>>,
}

impl TransformationSemigroup {
    /// Wraps an element set that is already known to be closed, such as a
    /// closed-form description. Generators are left empty.
    pub fn from_elements(n: usize, elements: impl IntoIterator<Item = Transformation>) -> Result<Self, SemigroupError> {
        let mut elements: Vec<Transformation> = elements.into_iter().collect();
        for e in &elements {
            if e.n() != n {
                return Err(SemigroupError::SizeMismatch { expected: n, found: e.n() });
            }
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { n, elements, generators: Vec::new(), generator_labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.generators.len());
        self.generator_labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn generator_labels(&self) -> Option<&[String]> {
        self.generator_labels.as_deref()
    }

    /// Membership test. Panics on a size mismatch; see [`contains`].
    pub fn contains(&self, t: &Transformation) -> bool {
        assert_eq!(t.n(), self.n);
        self.elements.binary_search(t).is_ok()
    }

    pub fn same_elements(&self, other: &TransformationSemigroup) -> bool {
        self.n == other.n && self.elements == other.elements
    }

    /// `semigroup n=<n> size=<k>` followed by one element per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("semigroup n={} size={}\n", self.n, self.len());
        for e in &self.elements {
            let _ = writeln!(out, "{e}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, SemigroupError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(SemigroupError::Parse { line: 1, reason: "missing header".into() })?;
        let bad_header = || SemigroupError::Parse { line: 1, reason: format!("bad header {header:?}") };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "semigroup" {
            return Err(bad_header());
        }
        let n: usize = fields[1].strip_prefix("n=").and_then(|v| v.parse().ok()).ok_or_else(bad_header)?;
        let size: usize = fields[2].strip_prefix("size=").and_then(|v| v.parse().ok()).ok_or_else(bad_header)?;
        let mut elements = Vec::with_capacity(size);
        for (i, line) in lines {
            let t: Transformation = line
                .parse()
                .map_err(|e: TransformError| SemigroupError::Parse { line: i + 1, reason: e.to_string() })?;
            elements.push(t);
        }
        let s = Self::from_elements(n, elements)?;
        if s.len() != size {
            return Err(SemigroupError::Parse {
                line: 1,
                reason: format!("header says {size} elements, found {}", s.len()),
            });
        }
        Ok(s)
    }
}

/// The semigroup generated by `generators`, using the default execution mode.
pub fn closure(generators: &[Transformation], cap: Option<usize>) -> Result<TransformationSemigroup, SemigroupError> {
    closure_with(Mode::default(), generators, cap)
}

pub fn closure_with(
    mode: Mode,
    generators: &[Transformation],
    cap: Option<usize>,
) -> Result<TransformationSemigroup, SemigroupError> {
    let first = generators.first().ok_or(SemigroupError::EmptyGenerators)?;
    let n = first.n();
    for g in generators {
        if g.n() != n {
            return Err(SemigroupError::SizeMismatch { expected: n, found: g.n() });
        }
    }
    let cap = cap.unwrap_or(DEFAULT_CAP);

    let mut distinct_gens: Vec<Transformation> = generators.to_vec();
    distinct_gens.sort_unstable();
    distinct_gens.dedup();

    let mut seen: HashSet<Transformation> = HashSet::new();
    let mut frontier: Vec<Transformation> = Vec::new();
    for g in &distinct_gens {
        if seen.insert(g.clone()) {
            frontier.push(g.clone());
        }
    }
    if seen.len() > cap {
        return Err(SemigroupError::CapExceeded { cap });
    }

    while !frontier.is_empty() {
        let layer_mode = if frontier.len() >= PARALLEL_FRONTIER { mode } else { Mode::Sequential };
        let products = exec::map(layer_mode, &frontier, |x| {
            distinct_gens.iter().map(|g| x.then(g)).collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for p in products.into_iter().flatten() {
            if !seen.contains(&p) {
                seen.insert(p.clone());
                next.push(p);
                if seen.len() > cap {
                    return Err(SemigroupError::CapExceeded { cap });
                }
            }
        }
        frontier = next;
    }

    let mut elements: Vec<Transformation> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(TransformationSemigroup {
        n,
        elements,
        generators: generators.to_vec(),
        generator_labels: None,
    })
}

/// Checked membership test.
pub fn contains(s: &TransformationSemigroup, t: &Transformation) -> Result<bool, SemigroupError> {
    if t.n() != s.n() {
        return Err(SemigroupError::SizeMismatch { expected: s.n(), found: t.n() });
    }
    Ok(s.contains(t))
}

/// Entry `i` is true iff dropping generator `i` strictly shrinks the semigroup.
pub fn generator_necessity(s: &TransformationSemigroup) -> Vec<bool> {
    generator_necessity_with(Mode::default(), s)
}

pub fn generator_necessity_with(mode: Mode, s: &TransformationSemigroup) -> Vec<bool> {
    let gens = s.generators();
    (0..gens.len())
        .map(|i| {
            let rest: Vec<Transformation> =
                gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            let size = match closure_with(mode, &rest, None) {
                Ok(sub) => sub.len(),
                Err(SemigroupError::EmptyGenerators) => 0,
                Err(_) => s.len(),
            };
            size < s.len()
        })
        .collect()
}

/// Outcome of an exhaustive generating-subset search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSearch {
    pub semigroup_size: usize,
    pub k_max: usize,
    /// Least `k <= k_max` for which some `k`-subset of the elements
    /// generates the whole semigroup.
    pub minimum: Option<usize>,
    /// Number of subsets whose closure was evaluated.
    pub subsets_checked: u64,
}

/// Least number of elements of `s` that generate `s`, searching every subset
/// of size up to `k_max`. `None` means no such subset exists within `k_max`.
pub fn minimal_generator_count(
    s: &TransformationSemigroup,
    k_max: usize,
) -> Result<Option<usize>, SemigroupError> {
    Ok(minimal_generator_search(Mode::default(), s, k_max, DEFAULT_GENERATOR_SEARCH_BUDGET)?.minimum)
}

pub fn minimal_generator_search(
    mode: Mode,
    s: &TransformationSemigroup,
    k_max: usize,
    budget: usize,
) -> Result<GeneratorSearch, SemigroupError> {
    let m = s.len();
    if m > budget {
        return Err(SemigroupError::SearchInfeasible { size: m, budget });
    }
    let table = CayleyTable::new(s);
    let mut checked = 0u64;
    for k in 1..=k_max.min(m) {
        let per_first = exec::map_range(mode, 0..m, |first| table.search_from(first, k));
        let found = per_first.iter().any(|r| r.0);
        checked += per_first.iter().map(|r| r.1).sum::<u64>();
        if found {
            return Ok(GeneratorSearch { semigroup_size: m, k_max, minimum: Some(k), subsets_checked: checked });
        }
    }
    Ok(GeneratorSearch { semigroup_size: m, k_max, minimum: None, subsets_checked: checked })
}

/// Right-multiplication table on element indices.
struct CayleyTable {
    m: usize,
    product: Vec<u32>,
}

impl CayleyTable {
    fn new(s: &TransformationSemigroup) -> Self {
        let m = s.len();
        let els = s.elements();
        let mut product = Vec::with_capacity(m * m);
        for x in els {
            for y in els {
                let xy = x.then(y);
                let idx = els.binary_search(&xy).expect("semigroup is not closed");
                product.push(idx as u32);
            }
        }
        Self { m, product }
    }

    fn generates(&self, gens: &[usize], reached: &mut [bool], stack: &mut Vec<usize>) -> bool {
        reached.iter_mut().for_each(|r| *r = false);
        stack.clear();
        let mut count = 0;
        for &g in gens {
            if !reached[g] {
                reached[g] = true;
                count += 1;
                stack.push(g);
            }
        }
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.product[x * self.m + g] as usize;
                if !reached[y] {
                    reached[y] = true;
                    count += 1;
                    if count == self.m {
                        return true;
                    }
                    stack.push(y);
                }
            }
        }
        count == self.m
    }

    /// Tries every `k`-subset whose smallest index is `first`.
    fn search_from(&self, first: usize, k: usize) -> (bool, u64) {
        let m = self.m;
        if first + k > m {
            return (false, 0);
        }
        let mut reached = vec![false; m];
        let mut stack = Vec::new();
        let mut combo: Vec<usize> = (0..k).map(|i| first + i).collect();
        let mut checked = 0u64;
        loop {
            checked += 1;
            if self.generates(&combo, &mut reached, &mut stack) {
                return (true, checked);
            }
            // advance positions 1..k, keeping combo[0] == first
            let mut i = k;
            loop {
                if i <= 1 {
                    return (false, checked);
                }
                i -= 1;
                if combo[i] < m - (k - i) {
                    combo[i] += 1;
                    for j in i + 1..k {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

/// Searches for a permutation `pi` of `Q_n` fixing every state in
/// `fixed_states` such that conjugating each element of `s` by `pi` gives
/// exactly the element set of `t`. Permutations are tried in lexicographic
/// order, so the identity is returned whenever it works.
pub fn equal_up_to_relabeling(
    s: &TransformationSemigroup,
    t: &TransformationSemigroup,
    fixed_states: &[usize],
) -> Result<Option<Transformation>, SemigroupError> {
    let n = s.n();
    if t.n() != n {
        return Err(SemigroupError::SizeMismatch { expected: n, found: t.n() });
    }
    for &q in fixed_states {
        if q >= n {
            return Err(SemigroupError::StateOutOfRange { state: q, n });
        }
    }
    if n > MAX_RELABEL_STATES {
        return Err(SemigroupError::RelabelInfeasible { n });
    }
    if s.len() != t.len() {
        return Ok(None);
    }
    let free: Vec<usize> = (0..n).filter(|q| !fixed_states.contains(q)).collect();
    let mut targets = free.clone();
    loop {
        let mut image: Vec<usize> = (0..n).collect();
        for (&src, &dst) in free.iter().zip(&targets) {
            image[src] = dst;
        }
        let pi = Transformation::new(image)?;
        if s.elements().iter().all(|e| t.contains(&e.conjugate(&pi))) {
            return Ok(Some(pi));
        }
        if !next_permutation(&mut targets) {
            return Ok(None);
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::parse_notation;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    fn piccard(n: usize) -> Vec<Transformation> {
        let all: Vec<usize> = (0..n).collect();
        vec![
            Transformation::cycle(n, &all).unwrap(),
            Transformation::cycle(n, &[0, 1]).unwrap(),
            Transformation::point(n, n - 1, 0).unwrap(),
        ]
    }

    #[test]
    fn piccard_generators_give_full_monoid() {
        assert_eq!(closure(&piccard(3), None).unwrap().len(), 27);
    }

    #[test]
    fn identity_alone() {
        let s = closure(&[Transformation::identity(4).unwrap()], None).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn single_idempotent_power() {
        let s = closure(&[t(&[1, 2, 2])], None).unwrap();
        assert_eq!(s.elements(), &[t(&[1, 2, 2]), t(&[2, 2, 2])]);
        assert!(!s.contains(&Transformation::identity(3).unwrap()));
    }

    #[test]
    fn closure_errors() {
        assert_eq!(closure(&[], None).unwrap_err(), SemigroupError::EmptyGenerators);
        assert!(matches!(
            closure(&[t(&[0, 1]), t(&[0, 1, 2])], None),
            Err(SemigroupError::SizeMismatch { .. })
        ));
        assert_eq!(closure(&piccard(3), Some(26)).unwrap_err(), SemigroupError::CapExceeded { cap: 26 });
        assert_eq!(closure(&piccard(3), Some(27)).unwrap().len(), 27);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let seq = closure_with(Mode::Sequential, &piccard(5), None).unwrap();
        let par = closure_with(Mode::Parallel, &piccard(5), None).unwrap();
        assert_eq!(seq.len(), 3125);
        assert!(seq.same_elements(&par));
    }

    #[test]
    fn checked_contains() {
        let s = closure(&[t(&[1, 2, 2])], None).unwrap();
        assert!(contains(&s, &t(&[0, 1])).is_err());
        assert!(contains(&s, &t(&[1, 2, 2])).unwrap());
    }

    #[test]
    fn duplicate_generators_are_unnecessary() {
        let id = Transformation::identity(2).unwrap();
        let s = closure(&[id.clone(), id], None).unwrap();
        assert_eq!(generator_necessity(&s), vec![false, false]);
        let single = closure(&[t(&[1, 0])], None).unwrap();
        assert_eq!(generator_necessity(&single), vec![true]);
    }

    #[test]
    fn generator_search_small_cases() {
        let s = closure(&[Transformation::identity(2).unwrap()], None).unwrap();
        assert_eq!(minimal_generator_count(&s, 3).unwrap(), Some(1));
        // the cyclic group of order 3 needs one generator
        let z3 = closure(&[t(&[1, 2, 0])], None).unwrap();
        assert_eq!(minimal_generator_count(&z3, 2).unwrap(), Some(1));
        // T_3 needs three
        let full = closure(&piccard(3), None).unwrap();
        assert_eq!(minimal_generator_count(&full, 2).unwrap(), None);
        assert_eq!(minimal_generator_count(&full, 3).unwrap(), Some(3));
        let big = closure(&piccard(4), None).unwrap();
        assert_eq!(
            minimal_generator_count(&big, 3).unwrap_err(),
            SemigroupError::SearchInfeasible { size: 256, budget: DEFAULT_GENERATOR_SEARCH_BUDGET }
        );
    }

    #[test]
    fn subset_counts_are_binomial() {
        // T_3 has no generating pair, so every pair is checked: C(27,1)+C(27,2)
        let full = closure(&piccard(3), None).unwrap();
        let r = minimal_generator_search(Mode::Sequential, &full, 2, 100).unwrap();
        assert_eq!(r.minimum, None);
        assert_eq!(r.subsets_checked, 27 + 351);
    }

    #[test]
    fn relabeling_search() {
        let s = closure(&[t(&[1, 2, 2])], None).unwrap();
        assert_eq!(equal_up_to_relabeling(&s, &s, &[]).unwrap(), Some(Transformation::identity(3).unwrap()));

        let swap = parse_notation("(1,2)", 3).unwrap();
        let conj = closure(&[t(&[1, 2, 2]).conjugate(&swap)], None).unwrap();
        assert_eq!(equal_up_to_relabeling(&s, &conj, &[0]).unwrap(), Some(swap));
        // fixing 1 as well leaves no candidate
        assert_eq!(equal_up_to_relabeling(&s, &conj, &[0, 1]).unwrap(), None);

        let other = closure(&[t(&[0, 0, 2])], None).unwrap();
        assert_eq!(equal_up_to_relabeling(&s, &other, &[]).unwrap(), None);

        let big = closure(&[Transformation::identity(8).unwrap()], None).unwrap();
        assert_eq!(
            equal_up_to_relabeling(&big, &big, &[]).unwrap_err(),
            SemigroupError::RelabelInfeasible { n: 8 }
        );
    }

    #[test]
    fn text_round_trip() {
        let s = closure(&piccard(3), None).unwrap();
        let text = s.to_text();
        assert!(text.starts_with("semigroup n=3 size=27\n[0,0,0]\n"));
        let back = TransformationSemigroup::from_text(&text).unwrap();
        assert!(back.same_elements(&s));
        assert!(TransformationSemigroup::from_text("semigroup n=3 size=2\n[0,1,2]\n").is_err());
    }
}
