//! Transformations of the state set `Q_n = {0, ..., n-1}`.
//!
//! A [`Transformation`] is a total map `Q_n -> Q_n` stored in one-line form:
//! entry `q` of the image is `qt`. Composition is written left to right,
//! so `s.then(&t)` applies `s` first and `t` second. This matches the way
//! a word `uv` acts on states: first the action of `u`, then that of `v`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported state-set size. States are stored as `u8`.
pub const MAX_STATES: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("transformation sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("state {state} is out of range for n = {n}")]
    StateOutOfRange { state: usize, n: usize },
    #[error("a transformation needs at least one state")]
    Empty,
    #[error("n = {0} exceeds the supported maximum of {MAX_STATES} states")]
    TooLarge(usize),
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A total self-map of `Q_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Transformation {
    image: Box<[u8]>,
}

fn check_n(n: usize) -> Result<(), TransformError> {
    if n == 0 {
        Err(TransformError::Empty)
    } else if n > MAX_STATES {
        Err(TransformError::TooLarge(n))
    } else {
        Ok(())
    }
}

fn check_state(state: usize, n: usize) -> Result<(), TransformError> {
    if state < n {
        Ok(())
    } else {
        Err(TransformError::StateOutOfRange { state, n })
    }
}

impl Transformation {
    /// Builds a transformation from its one-line image `[0t, 1t, ..., (n-1)t]`.
    pub fn new(image: Vec<usize>) -> Result<Self, TransformError> {
        let n = image.len();
        check_n(n)?;
        for &q in &image {
            check_state(q, n)?;
        }
        Ok(Self {
            image: image.into_iter().map(|q| q as u8).collect(),
        })
    }

    pub(crate) fn from_bytes(image: Box<[u8]>) -> Self {
        debug_assert!(!image.is_empty());
        debug_assert!(image.iter().all(|&q| (q as usize) < image.len()));
        Self { image }
    }

    pub fn identity(n: usize) -> Result<Self, TransformError> {
        check_n(n)?;
        Ok(Self::from_bytes((0..n).map(|q| q as u8).collect()))
    }

    /// The constant map `(Q -> q)`.
    pub fn constant(n: usize, q: usize) -> Result<Self, TransformError> {
        check_n(n)?;
        check_state(q, n)?;
        Ok(Self::from_bytes(vec![q as u8; n].into_boxed_slice()))
    }

    /// The map `(p -> q)`: sends `p` to `q` and fixes every other state.
    pub fn point(n: usize, p: usize, q: usize) -> Result<Self, TransformError> {
        let mut t = Self::identity(n)?;
        check_state(p, n)?;
        check_state(q, n)?;
        t.image[p] = q as u8;
        Ok(t)
    }

    /// The cycle `(p0, p1, ..., pk-1)`, acting as identity off its support.
    pub fn cycle(n: usize, states: &[usize]) -> Result<Self, TransformError> {
        let mut t = Self::identity(n)?;
        let reason = |r: &str| TransformError::Parse {
            text: format!("{states:?}"),
            reason: r.to_string(),
        };
        if states.len() < 2 {
            return Err(reason("a cycle needs at least two states"));
        }
        let mut seen = vec![false; n];
        for &q in states {
            check_state(q, n)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(reason("cycle states must be distinct"));
            }
        }
        for (i, &q) in states.iter().enumerate() {
            t.image[q] = states[(i + 1) % states.len()] as u8;
        }
        Ok(t)
    }

    /// Builds a map from a closure over states, e.g. `from_fn(n, |q| ...)`.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Result<Self, TransformError> {
        check_n(n)?;
        Self::new((0..n).map(f).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// Image of state `q`, i.e. `qt`.
    #[inline]
    pub fn at(&self, q: usize) -> usize {
        self.image[q] as usize
    }

    #[inline]
    pub fn image(&self) -> &[u8] {
        &self.image
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.image.iter().map(|&q| q as usize).collect()
    }

    /// `self` first, then `t`. Panics if the sizes differ; use [`compose`]
    /// for a checked version.
    #[inline]
    pub fn then(&self, t: &Transformation) -> Transformation {
        assert_eq!(self.n(), t.n(), "composing transformations of different sizes");
        Self::from_bytes(self.image.iter().map(|&q| t.image[q as usize]).collect())
    }

    /// `self` applied `k` times; `k = 0` gives the identity.
    pub fn pow(&self, k: usize) -> Transformation {
        let mut out = Self::from_bytes((0..self.n()).map(|q| q as u8).collect());
        for _ in 0..k {
            out = out.then(self);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(q, &x)| q == x as usize)
    }

    pub fn is_constant(&self) -> bool {
        self.image.iter().all(|&x| x == self.image[0])
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.n()
    }

    /// Size of the image set.
    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.n()];
        self.image.iter().filter(|&&q| !std::mem::replace(&mut seen[q as usize], true)).count()
    }

    pub fn fixes(&self, q: usize) -> bool {
        self.at(q) == q
    }

    /// Conjugate by a permutation `pi`: the result maps `q·pi` to `(q·self)·pi`.
    pub fn conjugate(&self, pi: &Transformation) -> Transformation {
        assert_eq!(self.n(), pi.n());
        let mut image = vec![0u8; self.n()].into_boxed_slice();
        for q in 0..self.n() {
            image[pi.at(q)] = pi.image[self.at(q)];
        }
        Self::from_bytes(image)
    }

    pub fn inverse_permutation(&self) -> Option<Transformation> {
        if !self.is_permutation() {
            return None;
        }
        let mut image = vec![0u8; self.n()].into_boxed_slice();
        for q in 0..self.n() {
            image[self.at(q)] = q as u8;
        }
        Some(Self::from_bytes(image))
    }

    /// True iff the orbit `q0, q0·t, q0·t², ...` has period 1.
    pub fn is_initially_aperiodic(&self, q0: usize) -> bool {
        let mut first_visit = vec![usize::MAX; self.n()];
        let mut q = q0;
        let mut step = 0;
        while first_visit[q] == usize::MAX {
            first_visit[q] = step;
            q = self.at(q);
            step += 1;
        }
        step - first_visit[q] == 1
    }

    pub fn shape(&self) -> Shape {
        classify_shape(self)
    }
}

/// Checked composition: `s` first, then `t`.
pub fn compose(s: &Transformation, t: &Transformation) -> Result<Transformation, TransformError> {
    if s.n() != t.n() {
        return Err(TransformError::SizeMismatch { left: s.n(), right: t.n() });
    }
    Ok(s.then(t))
}

/// Checked version of [`Transformation::is_initially_aperiodic`].
pub fn is_initially_aperiodic(t: &Transformation, q0: usize) -> Result<bool, TransformError> {
    check_state(q0, t.n())?;
    Ok(t.is_initially_aperiodic(q0))
}

/// Cycle and fixed-point structure of a transformation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub is_identity: bool,
    pub is_constant: bool,
    pub fixed_points: Vec<usize>,
    pub has_cycle: bool,
    /// Cycles of length at least 2, each rotated to start at its smallest
    /// state and listed in order of that state.
    pub cycles: Vec<Vec<usize>>,
}

pub fn classify_shape(t: &Transformation) -> Shape {
    let n = t.n();
    // 0 = unvisited, 1 = on the current walk, 2 = done
    let mut mark = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if mark[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut q = start;
        while mark[q] == 0 {
            mark[q] = 1;
            walk.push(q);
            q = t.at(q);
        }
        if mark[q] == 1 {
            let pos = walk.iter().position(|&x| x == q).unwrap();
            let cyc = &walk[pos..];
            if cyc.len() >= 2 {
                let min_pos = cyc.iter().enumerate().min_by_key(|(_, &x)| x).unwrap().0;
                let mut rotated = cyc[min_pos..].to_vec();
                rotated.extend_from_slice(&cyc[..min_pos]);
                cycles.push(rotated);
            }
        }
        for &x in &walk {
            mark[x] = 2;
        }
    }
    cycles.sort();
    let fixed_points: Vec<usize> = (0..n).filter(|&q| t.fixes(q)).collect();
    Shape {
        is_identity: t.is_identity(),
        is_constant: t.is_constant(),
        has_cycle: !cycles.is_empty(),
        fixed_points,
        cycles,
    }
}

/// Parses a transformation of `Q_n` written in one of the notations
///
/// * `1` (identity),
/// * `[q0,...,qn-1]` (one-line),
/// * `(p0,p1,...)` (cycle),
/// * `(Q->q)` (constant),
/// * `(p->q)` (single point).
///
/// Whitespace is ignored, `→` is accepted for `->`, and a juxtaposition of
/// parenthesised factors such as `(1->2)(0->1)` is composed left to right.
pub fn parse_notation(text: &str, n: usize) -> Result<Transformation, TransformError> {
    check_n(n)?;
    let compact: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .replace('→', "->");
    let err = |reason: &str| TransformError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    if compact.is_empty() {
        return Err(err("empty input"));
    }
    if compact == "1" {
        return Transformation::identity(n);
    }
    if let Some(body) = compact.strip_prefix('[') {
        let body = body.strip_suffix(']').ok_or_else(|| err("missing closing ']'"))?;
        let image = parse_list(body).map_err(|r| err(&r))?;
        if image.len() != n {
            return Err(err(&format!("expected {n} entries, found {}", image.len())));
        }
        return Transformation::new(image);
    }
    if !compact.starts_with('(') {
        return Err(err("expected '1', '[...]' or '(...)'"));
    }
    let mut out = Transformation::identity(n)?;
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
        let close = body.find(')').ok_or_else(|| err("missing closing ')'"))?;
        let factor = parse_factor(&body[..close], n).map_err(|e| match e {
            TransformError::Parse { reason, .. } => err(&reason),
            other => other,
        })?;
        out = out.then(&factor);
        rest = &body[close + 1..];
    }
    Ok(out)
}

fn parse_list(body: &str) -> Result<Vec<usize>, String> {
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|tok| tok.parse::<usize>().map_err(|_| format!("bad state index {tok:?}")))
        .collect()
}

fn parse_factor(body: &str, n: usize) -> Result<Transformation, TransformError> {
    let bad = |reason: String| TransformError::Parse { text: body.to_string(), reason };
    if let Some((lhs, rhs)) = body.split_once("->") {
        let q = rhs.parse::<usize>().map_err(|_| bad(format!("bad target {rhs:?}")))?;
        if lhs == "Q" || lhs.starts_with("Q_") {
            return Transformation::constant(n, q);
        }
        let p = lhs.parse::<usize>().map_err(|_| bad(format!("bad source {lhs:?}")))?;
        return Transformation::point(n, p, q);
    }
    let states = parse_list(body).map_err(bad)?;
    Transformation::cycle(n, &states)
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, q) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the one-line form only; the size is taken from the entry count.
impl FromStr for Transformation {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| TransformError::Parse {
                text: s.to_string(),
                reason: "expected one-line form [q0,...,qn-1]".into(),
            })?;
        let image = parse_list(body).map_err(|reason| TransformError::Parse {
            text: s.to_string(),
            reason,
        })?;
        Transformation::new(image)
    }
}

impl TryFrom<Vec<usize>> for Transformation {
    type Error = TransformError;

    fn try_from(image: Vec<usize>) -> Result<Self, Self::Error> {
        Transformation::new(image)
    }
}

impl From<Transformation> for Vec<usize> {
    fn from(t: Transformation) -> Self {
        t.to_vec()
    }
}
