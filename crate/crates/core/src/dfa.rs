//! Complete deterministic finite automata.
//!
//! A [`Dfa`] stores one [`Transformation`] per letter, so the transition
//! semigroup is just the closure of `delta`. Partial tables are rejected
//! rather than completed with an implicit sink.
//!
//! Text format (line-oriented, `#` starts a comment):
//!
//! ```text
//! states 3
//! alphabet a b c
//! initial 0
//! final 2
//! trans a 1 0 2
//! trans b 0 0 2
//! trans c 0 2 2
//! ```

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semigroup::{self, SemigroupError, TransformationSemigroup};
use crate::transform::{TransformError, Transformation, MAX_STATES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("the alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("letter {0:?} appears twice")]
    DuplicateLetter(String),
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(String),
    #[error("letter {0:?} has no transition row")]
    MissingTransition(String),
    #[error("invalid letter name {0:?}")]
    InvalidLetter(String),
    #[error("state {state} is out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("expected {expected} transition rows of size {n}, found {found}")]
    Shape { expected: usize, n: usize, found: String },
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// A complete DFA over an ordered alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    initial: usize,
    finals: Vec<bool>,
    delta: Vec<Transformation>,
}

fn valid_letter(name: &str) -> bool {
    !name.is_empty() && !name.contains('#') && !name.chars().any(char::is_whitespace)
}

impl Dfa {
    pub fn new(
        alphabet: Vec<String>,
        initial: usize,
        finals: &[usize],
        delta: Vec<Transformation>,
    ) -> Result<Self, DfaError> {
        if alphabet.is_empty() {
            return Err(DfaError::EmptyAlphabet);
        }
        for (i, a) in alphabet.iter().enumerate() {
            if !valid_letter(a) {
                return Err(DfaError::InvalidLetter(a.clone()));
            }
            if alphabet[..i].contains(a) {
                return Err(DfaError::DuplicateLetter(a.clone()));
            }
        }
        let n = delta.first().map(Transformation::n).unwrap_or(0);
        if delta.len() != alphabet.len() || delta.iter().any(|t| t.n() != n) {
            return Err(DfaError::Shape {
                expected: alphabet.len(),
                n,
                found: format!("{:?}", delta.iter().map(Transformation::n).collect::<Vec<_>>()),
            });
        }
        if initial >= n {
            return Err(DfaError::StateOutOfRange { state: initial, n });
        }
        let mut fin = vec![false; n];
        for &q in finals {
            if q >= n {
                return Err(DfaError::StateOutOfRange { state: q, n });
            }
            fin[q] = true;
        }
        Ok(Self { alphabet, initial, finals: fin, delta })
    }

    /// Convenience constructor taking letter names as `&str`.
    pub fn from_parts(
        letters: &[&str],
        initial: usize,
        finals: &[usize],
        delta: Vec<Transformation>,
    ) -> Result<Self, DfaError> {
        Self::new(letters.iter().map(|s| s.to_string()).collect(), initial, finals, delta)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.finals.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.finals[q]).collect()
    }

    #[inline]
    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn delta(&self) -> &[Transformation] {
        &self.delta
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    #[inline]
    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.delta[letter].at(q)
    }

    /// State reached from `q` by reading `word` (letter indices).
    pub fn run_from(&self, q: usize, word: &[usize]) -> usize {
        word.iter().fold(q, |s, &a| self.step(s, a))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.is_final(self.run_from(self.initial, word))
    }

    /// The same automaton with final and non-final states swapped.
    pub fn complement(&self) -> Dfa {
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: self.initial,
            finals: self.finals.iter().map(|f| !f).collect(),
            delta: self.delta.clone(),
        }
    }

    /// The automaton `(Q, Σ, δ, q, F)`, whose language is `K_q`.
    pub fn with_initial(&self, q: usize) -> Result<Dfa, DfaError> {
        if q >= self.n() {
            return Err(DfaError::StateOutOfRange { state: q, n: self.n() });
        }
        Ok(Dfa { initial: q, ..self.clone() })
    }

    /// Renames state `q` to `perm.at(q)`.
    pub fn relabel(&self, perm: &Transformation) -> Dfa {
        assert!(perm.is_permutation() && perm.n() == self.n());
        let mut finals = vec![false; self.n()];
        for q in 0..self.n() {
            finals[perm.at(q)] = self.finals[q];
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: perm.at(self.initial),
            finals,
            delta: self.delta.iter().map(|t| t.conjugate(perm)).collect(),
        }
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for t in &self.delta {
                let r = t.at(q);
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// `true` at `q` iff no final state is reachable from `q` (`K_q = ∅`).
    pub fn empty_states(&self) -> Vec<bool> {
        let n = self.n();
        let mut live = self.finals.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !live[q] && self.delta.iter().any(|t| live[t.at(q)]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        live.into_iter().map(|l| !l).collect()
    }

    /// `true` at `q` iff every state reachable from `q` is final (`K_q = Σ*`).
    pub fn universal_states(&self) -> Vec<bool> {
        self.complement().empty_states()
    }

    /// Equivalent minimal DFA with states numbered breadth-first from the
    /// initial state, letters explored in alphabet order.
    pub fn minimize(&self) -> Dfa {
        let n = self.n();
        let reach = self.reachable();
        // Moore refinement over reachable states; class ids are assigned in
        // first-seen order so the loop terminates when the count stabilizes.
        let mut class: Vec<usize> = (0..n).map(|q| usize::from(self.finals[q])).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![usize::MAX; n];
            for q in (0..n).filter(|&q| reach[q]) {
                let mut sig = Vec::with_capacity(self.delta.len() + 1);
                sig.push(class[q]);
                sig.extend(self.delta.iter().map(|t| class[t.at(q)]));
                let len = ids.len();
                next[q] = *ids.entry(sig).or_insert(len);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Breadth-first canonical numbering of the classes.
        let mut order = vec![usize::MAX; count];
        let mut rep = Vec::with_capacity(count);
        let mut queue = VecDeque::from([self.initial]);
        order[class[self.initial]] = 0;
        rep.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for t in &self.delta {
                let r = t.at(q);
                if order[class[r]] == usize::MAX {
                    order[class[r]] = rep.len();
                    rep.push(r);
                    queue.push_back(r);
                }
            }
        }
        let delta = self
            .delta
            .iter()
            .map(|t| Transformation::from_bytes(rep.iter().map(|&q| order[class[t.at(q)]] as u8).collect()))
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            finals: rep.iter().map(|&q| self.finals[q]).collect(),
            delta,
        }
    }

    /// Every state reachable and no two states equivalent.
    pub fn is_minimal(&self) -> bool {
        self.minimize().n() == self.n()
    }

    /// `K_p ⊆ K_q`, decided by a breadth-first search of the pair graph
    /// from `(p, q)` for a pair that is final in the first component and
    /// non-final in the second.
    pub fn language_containment(&self, p: usize, q: usize) -> bool {
        let n = self.n();
        let mut seen = vec![false; n * n];
        let mut queue = VecDeque::from([(p, q)]);
        seen[p * n + q] = true;
        while let Some((x, y)) = queue.pop_front() {
            if self.finals[x] && !self.finals[y] {
                return false;
            }
            for t in &self.delta {
                let (x2, y2) = (t.at(x), t.at(y));
                if !seen[x2 * n + y2] {
                    seen[x2 * n + y2] = true;
                    queue.push_back((x2, y2));
                }
            }
        }
        true
    }

    /// The full containment relation, computed as the greatest fixed point
    /// of "no word separates the pair".
    pub fn preorder(&self) -> StatePreorder {
        let n = self.n();
        let mut sep = vec![false; n * n];
        for p in 0..n {
            for q in 0..n {
                sep[p * n + q] = self.finals[p] && !self.finals[q];
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for p in 0..n {
                for q in 0..n {
                    if !sep[p * n + q] && self.delta.iter().any(|t| sep[t.at(p) * n + t.at(q)]) {
                        sep[p * n + q] = true;
                        changed = true;
                    }
                }
            }
        }
        StatePreorder {
            n,
            leq: (0..n).map(|p| (0..n).map(|q| !sep[p * n + q]).collect()).collect(),
        }
    }

    pub fn transition_semigroup(&self, cap: Option<usize>) -> Result<TransformationSemigroup, SemigroupError> {
        Ok(semigroup::closure(&self.delta, cap)?.with_labels(self.alphabet.clone()))
    }

    /// Size of the syntactic semigroup of the accepted language.
    pub fn syntactic_complexity(&self, cap: Option<usize>) -> Result<usize, SemigroupError> {
        Ok(self.minimize().transition_semigroup(cap)?.len())
    }

    /// A DFA for `Σ* L`, built by the subset construction on the automaton
    /// that may restart at the initial state before every letter.
    pub fn prepend_sigma_star(&self) -> Dfa {
        assert!(self.n() <= 64, "subset construction limited to 64 states");
        let start: u64 = 1 << self.initial;
        let mut index: HashMap<u64, usize> = HashMap::from([(start, 0)]);
        let mut subsets = vec![start];
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); self.delta.len()];
        let mut i = 0;
        while i < subsets.len() {
            let set = subsets[i];
            for (a, t) in self.delta.iter().enumerate() {
                let mut next = start;
                for q in (0..self.n()).filter(|&q| set >> q & 1 == 1) {
                    next |= 1 << t.at(q);
                }
                let len = subsets.len();
                let j = *index.entry(next).or_insert(len);
                if j == len {
                    subsets.push(next);
                }
                rows[a].push(j);
            }
            i += 1;
        }
        let finals: Vec<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, &s)| (0..self.n()).any(|q| s >> q & 1 == 1 && self.finals[q]))
            .map(|(k, _)| k)
            .collect();
        let delta = rows.into_iter().map(|r| Transformation::new(r).expect("subset table")).collect();
        Dfa::new(self.alphabet.clone(), 0, &finals, delta).expect("subset construction is well formed")
    }

    /// A DFA for `L Σ*`: every final state becomes absorbing.
    pub fn append_sigma_star(&self) -> Dfa {
        let delta = self
            .delta
            .iter()
            .map(|t| Transformation::from_bytes((0..self.n()).map(|q| if self.finals[q] { q as u8 } else { t.at(q) as u8 }).collect()))
            .collect();
        Dfa { delta, ..self.clone() }
    }

    /// Language equality, by a search of the product automaton.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, DfaError> {
        if self.alphabet != other.alphabet {
            return Err(DfaError::AlphabetMismatch);
        }
        let m = other.n();
        let mut seen = vec![false; self.n() * m];
        let mut queue = VecDeque::from([(self.initial, other.initial)]);
        seen[self.initial * m + other.initial] = true;
        while let Some((x, y)) = queue.pop_front() {
            if self.finals[x] != other.finals[y] {
                return Ok(false);
            }
            for (s, t) in self.delta.iter().zip(&other.delta) {
                let (x2, y2) = (s.at(x), t.at(y));
                if !seen[x2 * m + y2] {
                    seen[x2 * m + y2] = true;
                    queue.push_back((x2, y2));
                }
            }
        }
        Ok(true)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states {}", self.n());
        let _ = writeln!(out, "alphabet {}", self.alphabet.join(" "));
        let _ = writeln!(out, "initial {}", self.initial);
        let finals: Vec<String> = self.finals().iter().map(usize::to_string).collect();
        if finals.is_empty() {
            out.push_str("final\n");
        } else {
            let _ = writeln!(out, "final {}", finals.join(" "));
        }
        for (a, t) in self.alphabet.iter().zip(&self.delta) {
            let row: Vec<String> = t.image().iter().map(u8::to_string).collect();
            let _ = writeln!(out, "trans {a} {}", row.join(" "));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Dfa, DfaError> {
        let mut states: Option<usize> = None;
        let mut alphabet: Option<Vec<String>> = None;
        let mut initial: Option<usize> = None;
        let mut finals: Option<Vec<usize>> = None;
        let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut last_line = 0;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = content.split_whitespace();
            let Some(key) = tokens.next() else { continue };
            let rest: Vec<&str> = tokens.collect();
            let syntax = |reason: String| DfaError::Syntax { line, reason };
            let number = |tok: &str| tok.parse::<usize>().map_err(|_| syntax(format!("expected a number, found {tok:?}")));
            let once = |present: bool| if present { Err(syntax(format!("duplicate '{key}' line"))) } else { Ok(()) };
            match key {
                "states" => {
                    once(states.is_some())?;
                    let [tok] = rest.as_slice() else {
                        return Err(syntax("'states' takes exactly one value".into()));
                    };
                    let n = number(tok)?;
                    if n == 0 || n > MAX_STATES {
                        return Err(syntax(format!("state count must be in 1..={MAX_STATES}")));
                    }
                    states = Some(n);
                }
                "alphabet" => {
                    once(alphabet.is_some())?;
                    if rest.is_empty() {
                        return Err(DfaError::EmptyAlphabet);
                    }
                    let letters: Vec<String> = rest.iter().map(|s| s.to_string()).collect();
                    for (j, a) in letters.iter().enumerate() {
                        if letters[..j].contains(a) {
                            return Err(DfaError::DuplicateLetter(a.clone()));
                        }
                    }
                    alphabet = Some(letters);
                }
                "initial" => {
                    once(initial.is_some())?;
                    let [tok] = rest.as_slice() else {
                        return Err(syntax("'initial' takes exactly one value".into()));
                    };
                    initial = Some(number(tok)?);
                }
                "final" => {
                    once(finals.is_some())?;
                    finals = Some(rest.iter().map(|t| number(t)).collect::<Result<_, _>>()?);
                }
                "trans" => {
                    let n = states.ok_or_else(|| syntax("'trans' before 'states'".into()))?;
                    let letters = alphabet.as_ref().ok_or_else(|| syntax("'trans' before 'alphabet'".into()))?;
                    let Some((name, imgs)) = rest.split_first() else {
                        return Err(syntax("'trans' needs a letter".into()));
                    };
                    let a = letters
                        .iter()
                        .position(|l| l == name)
                        .ok_or_else(|| DfaError::UnknownLetter(name.to_string()))?;
                    if imgs.len() != n {
                        return Err(syntax(format!("letter {name:?} has {} targets, expected {n}", imgs.len())));
                    }
                    let row: Vec<usize> = imgs.iter().map(|t| number(t)).collect::<Result<_, _>>()?;
                    if let Some(&bad) = row.iter().find(|&&q| q >= n) {
                        return Err(DfaError::StateOutOfRange { state: bad, n });
                    }
                    if rows.insert(a, row).is_some() {
                        return Err(syntax(format!("duplicate transition row for {name:?}")));
                    }
                }
                other => return Err(syntax(format!("unknown keyword {other:?}"))),
            }
        }

        let missing = |what: &str| DfaError::Syntax { line: last_line, reason: format!("missing '{what}' line") };
        let n = states.ok_or_else(|| missing("states"))?;
        let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
        let initial = initial.ok_or_else(|| missing("initial"))?;
        let finals = finals.ok_or_else(|| missing("final"))?;
        let mut delta = Vec::with_capacity(alphabet.len());
        for (a, name) in alphabet.iter().enumerate() {
            let row = rows.remove(&a).ok_or_else(|| DfaError::MissingTransition(name.clone()))?;
            delta.push(Transformation::new(row)?);
        }
        debug_assert!(delta.iter().all(|t| t.n() == n));
        Dfa::new(alphabet, initial, &finals, delta)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DfaJson::from(self)).expect("dfa json")
    }

    pub fn from_json(text: &str) -> Result<Dfa, DfaError> {
        let raw: DfaJson = serde_json::from_str(text).map_err(|e| DfaError::Json(e.to_string()))?;
        raw.try_into()
    }

    /// Parses either format, choosing JSON when the text starts with `{`.
    pub fn parse_any(text: &str) -> Result<Dfa, DfaError> {
        if text.trim_start().starts_with('{') {
            Dfa::from_json(text)
        } else {
            Dfa::parse_text(text)
        }
    }

    /// Graphviz rendering: final states are double circles and parallel
    /// edges are merged into one edge with a comma-separated label.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n");
        out.push_str("  __start [shape=point];\n");
        let _ = writeln!(out, "  __start -> {};", self.initial);
        for q in 0..self.n() {
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {q} [shape={shape}];");
        }
        let mut edges: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
        for (a, t) in self.alphabet.iter().zip(&self.delta) {
            for q in 0..self.n() {
                edges.entry((q, t.at(q))).or_default().push(a);
            }
        }
        for ((p, q), letters) in edges {
            let _ = writeln!(out, "  {p} -> {q} [label=\"{}\"];", letters.join(","));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct DfaJson {
    states: usize,
    alphabet: Vec<String>,
    initial: usize,
    #[serde(rename = "final")]
    finals: Vec<usize>,
    trans: BTreeMap<String, Vec<usize>>,
}

impl From<&Dfa> for DfaJson {
    fn from(d: &Dfa) -> Self {
        DfaJson {
            states: d.n(),
            alphabet: d.alphabet.clone(),
            initial: d.initial,
            finals: d.finals(),
            trans: d.alphabet.iter().cloned().zip(d.delta.iter().map(Transformation::to_vec)).collect(),
        }
    }
}

impl TryFrom<DfaJson> for Dfa {
    type Error = DfaError;

    fn try_from(mut raw: DfaJson) -> Result<Self, Self::Error> {
        if raw.states == 0 || raw.states > MAX_STATES {
            return Err(DfaError::Json(format!("state count must be in 1..={MAX_STATES}")));
        }
        if let Some(extra) = raw.trans.keys().find(|k| !raw.alphabet.contains(k)) {
            return Err(DfaError::UnknownLetter(extra.clone()));
        }
        let mut delta = Vec::with_capacity(raw.alphabet.len());
        for a in &raw.alphabet {
            let row = raw.trans.remove(a).ok_or_else(|| DfaError::MissingTransition(a.clone()))?;
            if row.len() != raw.states {
                return Err(DfaError::Shape { expected: raw.alphabet.len(), n: raw.states, found: format!("{a}: {}", row.len()) });
            }
            if let Some(&bad) = row.iter().find(|&&q| q >= raw.states) {
                return Err(DfaError::StateOutOfRange { state: bad, n: raw.states });
            }
            delta.push(Transformation::new(row)?);
        }
        Dfa::new(raw.alphabet, raw.initial, &raw.finals, delta)
    }
}

/// The relation `p ⪯ q` iff `K_p ⊆ K_q` on the states of a DFA.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatePreorder {
    n: usize,
    leq: Vec<Vec<bool>>,
}

impl StatePreorder {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p][q]
    }

    /// Strict containment `K_p ⊂ K_q`.
    #[inline]
    pub fn lt(&self, p: usize, q: usize) -> bool {
        self.leq[p][q] && !self.leq[q][p]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|p| self.leq[p][p])
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.n).all(|p| {
            (0..self.n).all(|q| !self.leq[p][q] || (0..self.n).all(|r| !self.leq[q][r] || self.leq[p][r]))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|p| (0..self.n).all(|q| p == q || !(self.leq[p][q] && self.leq[q][p])))
    }

    /// Number of states in a longest chain `0 ≺ q1 ≺ q2 ≺ ...`.
    pub fn max_chain_length(&self) -> usize {
        self.longest_chain_from(0)
    }

    pub fn longest_chain_from(&self, start: usize) -> usize {
        let mut memo = vec![0usize; self.n];
        self.chain_len(start, &mut memo)
    }

    fn chain_len(&self, q: usize, memo: &mut [usize]) -> usize {
        if memo[q] == 0 {
            let best = (0..self.n)
                .filter(|&r| self.lt(q, r))
                .map(|r| self.chain_len(r, memo))
                .max()
                .unwrap_or(0);
            memo[q] = best + 1;
        }
        memo[q]
    }
}

/// Free-function form of [`StatePreorder::max_chain_length`].
pub fn max_chain_length(po: &StatePreorder) -> usize {
    po.max_chain_length()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    /// Minimal DFA of Σ*aa over {a, b}; state = number of trailing a's.
    fn ends_aa() -> Dfa {
        Dfa::from_parts(&["a", "b"], 0, &[2], vec![t(&[1, 2, 2]), t(&[0, 0, 0])]).unwrap()
    }

    const D2: &str = "\
# a three-state example
states 3
alphabet a b c
initial 0
final 2
trans a 1 0 2
trans b 0 0 2
trans c 0 2 2
";

    #[test]
    fn parse_three_state_example() {
        let d = Dfa::parse_text(D2).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.alphabet(), &["a", "b", "c"]);
        assert_eq!(d.finals(), vec![2]);
        assert_eq!(Dfa::parse_text(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn empty_final_list_is_allowed() {
        let d = Dfa::parse_text("states 2\nalphabet a\ninitial 0\nfinal\ntrans a 1 0\n").unwrap();
        assert!(d.finals().is_empty());
        assert!(d.empty_states().iter().all(|&e| e));
    }

    #[test]
    fn parse_errors() {
        let missing_row = "states 3\nalphabet a b\ninitial 0\nfinal 2\ntrans a 1 2 2\n";
        assert_eq!(Dfa::parse_text(missing_row).unwrap_err(), DfaError::MissingTransition("b".into()));
        let out_of_range = "states 2\nalphabet a\ninitial 0\nfinal 1\ntrans a 0 2\n";
        assert_eq!(Dfa::parse_text(out_of_range).unwrap_err(), DfaError::StateOutOfRange { state: 2, n: 2 });
        let dup = "states 2\nalphabet a a\n";
        assert_eq!(Dfa::parse_text(dup).unwrap_err(), DfaError::DuplicateLetter("a".into()));
        let bad = "states 2\nalphabet a\ninitial x\n";
        assert_eq!(Dfa::parse_text(bad).unwrap_err(), DfaError::Syntax { line: 3, reason: "expected a number, found \"x\"".into() });
        let arity = "states 2\nalphabet a\ninitial 0\nfinal\ntrans a 0\n";
        assert!(matches!(Dfa::parse_text(arity), Err(DfaError::Syntax { line: 5, .. })));
        let unknown = "states 2\nalphabet a\ninitial 0\nfinal\ntrans z 0 1\n";
        assert_eq!(Dfa::parse_text(unknown).unwrap_err(), DfaError::UnknownLetter("z".into()));
        let bad_initial = "states 2\nalphabet a\ninitial 5\nfinal\ntrans a 0 1\n";
        assert_eq!(Dfa::parse_text(bad_initial).unwrap_err(), DfaError::StateOutOfRange { state: 5, n: 2 });
    }

    #[test]
    fn json_round_trip() {
        let d = Dfa::parse_text(D2).unwrap();
        let json = d.to_json();
        assert!(json.contains("\"final\""));
        assert_eq!(Dfa::from_json(&json).unwrap(), d);
        assert_eq!(Dfa::parse_any(&json).unwrap(), d);
        assert!(Dfa::from_json(r#"{"states":2,"alphabet":["a"],"initial":0,"final":[],"trans":{}}"#).is_err());
    }

    #[test]
    fn dot_merges_parallel_edges() {
        let dot = Dfa::parse_text(D2).unwrap().to_dot();
        assert!(dot.contains("2 [shape=doublecircle];"));
        assert!(dot.contains("1 -> 0 [label=\"a,b\"];"));
        assert!(dot.contains("2 -> 2 [label=\"a,b,c\"];"));
        assert!(dot.contains("0 -> 0 [label=\"b,c\"];"));
    }

    #[test]
    fn minimize_merges_equivalent_sinks() {
        // 0 -a-> 1 -a-> {2,3}, states 2 and 3 are accepting sinks
        let d = Dfa::from_parts(&["a", "b"], 0, &[2, 3], vec![t(&[1, 2, 3, 3]), t(&[0, 3, 2, 2])]).unwrap();
        let m = d.minimize();
        assert_eq!(m.n(), 3);
        assert!(m.equivalent(&d).unwrap());
        assert!(m.is_minimal());
    }

    #[test]
    fn minimize_drops_unreachable_states() {
        let d = Dfa::from_parts(&["a"], 0, &[1], vec![t(&[1, 1, 0])]).unwrap();
        let m = d.minimize();
        assert_eq!(m.n(), 2);
        assert!(!d.is_minimal());
    }

    #[test]
    fn minimize_canonical_numbering_is_breadth_first() {
        // a relabelled copy of ends_aa minimizes back to the same table
        let pi = t(&[2, 0, 1]);
        let shuffled = ends_aa().relabel(&pi);
        assert_ne!(shuffled, ends_aa());
        assert_eq!(shuffled.minimize(), ends_aa());
    }

    #[test]
    fn containment_on_trailing_a_counter() {
        let d = ends_aa();
        assert!(d.language_containment(0, 1));
        assert!(d.language_containment(1, 2));
        assert!(!d.language_containment(1, 0));
        assert!(d.language_containment(2, 2));
        let po = d.preorder();
        assert!(po.lt(0, 1) && po.lt(1, 2) && po.lt(0, 2));
        assert_eq!(po.max_chain_length(), 3);
        assert!(po.is_reflexive() && po.is_transitive() && po.is_antisymmetric());
    }

    #[test]
    fn transition_semigroup_of_example() {
        let d = Dfa::parse_text(D2).unwrap();
        let s = d.transition_semigroup(None).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.generator_labels().unwrap(), &["a", "b", "c"]);
        let id = Dfa::from_parts(&["a"], 0, &[0], vec![t(&[0, 1])]).unwrap();
        assert_eq!(id.transition_semigroup(None).unwrap().len(), 1);
    }

    #[test]
    fn syntactic_complexity_ignores_duplicate_states() {
        // D2 with state 3 a copy of state 2
        let d = Dfa::from_parts(
            &["a", "b", "c"],
            0,
            &[2, 3],
            vec![t(&[1, 0, 3, 2]), t(&[0, 0, 2, 3]), t(&[0, 3, 2, 2])],
        )
        .unwrap();
        assert_eq!(d.syntactic_complexity(None).unwrap(), 9);
    }

    #[test]
    fn sigma_star_closures() {
        // L = {a} over {a, b}
        let d = Dfa::from_parts(&["a", "b"], 0, &[1], vec![t(&[1, 2, 2]), t(&[2, 2, 2])]).unwrap();
        let left = d.prepend_sigma_star().minimize();
        // Σ*a: two states
        assert_eq!(left.n(), 2);
        assert!(left.accepts(&[1, 0]) && !left.accepts(&[0, 1]));
        let right = d.append_sigma_star().minimize();
        assert!(right.accepts(&[0, 1, 1]) && !right.accepts(&[1, 0]));
        let two = d.prepend_sigma_star().append_sigma_star().minimize();
        assert!(two.accepts(&[1, 0, 1]) && !two.accepts(&[1, 1]));
    }

    #[test]
    fn with_initial_and_complement() {
        let d = ends_aa();
        assert!(d.with_initial(2).unwrap().accepts(&[]));
        assert!(d.with_initial(3).is_err());
        assert!(d.complement().accepts(&[0]));
        assert!(d.universal_states().iter().all(|&u| !u));
    }
}
