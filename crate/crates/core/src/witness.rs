//! The witness DFA families for right, left and two-sided ideals, their
//! syntactic-complexity bounds, and closed-form descriptions of their
//! transition semigroups.
//!
//! `expected_semigroup` builds element sets directly, never by closure, so
//! it can be used as an oracle against `semigroup::closure`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dfa::Dfa;
use crate::semigroup::TransformationSemigroup;
use crate::transform::{Transformation, MAX_STATES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealClass {
    Right,
    Left,
    TwoSided,
}

impl IdealClass {
    pub const ALL: [IdealClass; 3] = [IdealClass::Right, IdealClass::Left, IdealClass::TwoSided];

    /// Smallest `n` for which `build` and `bound` are defined.
    pub fn min_states(self) -> usize {
        match self {
            IdealClass::Right | IdealClass::Left => 1,
            IdealClass::TwoSided => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IdealClass::Right => "right",
            IdealClass::Left => "left",
            IdealClass::TwoSided => "two-sided",
        }
    }
}

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdealClass {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "right" => Ok(IdealClass::Right),
            "left" => Ok(IdealClass::Left),
            "two-sided" | "two_sided" | "twosided" => Ok(IdealClass::TwoSided),
            other => Err(WitnessError::UnknownClass(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{class} ideals need at least {min} states, got {n}")]
    BelowMinimum { class: IdealClass, n: usize, min: usize },
    #[error("n = {n} exceeds the supported maximum")]
    TooLarge { n: usize },
    #[error("unknown ideal class {0:?} (expected right, left or two-sided)")]
    UnknownClass(String),
}

fn check_range(class: IdealClass, n: usize) -> Result<(), WitnessError> {
    if n < class.min_states() {
        return Err(WitnessError::BelowMinimum { class, n, min: class.min_states() });
    }
    if n > MAX_STATES {
        return Err(WitnessError::TooLarge { n });
    }
    Ok(())
}

fn tf(image: &[usize]) -> Transformation {
    Transformation::new(image.to_vec()).expect("hard-coded transformation")
}

fn dfa(letters: &[(&str, Transformation)], finals: &[usize]) -> Dfa {
    let (names, delta): (Vec<String>, Vec<Transformation>) =
        letters.iter().map(|(a, t)| (a.to_string(), t.clone())).unzip();
    Dfa::new(names, 0, finals, delta).expect("witness tables are well formed")
}

/// The witness DFA of the given class with `n` states.
pub fn build(class: IdealClass, n: usize) -> Result<Dfa, WitnessError> {
    check_range(class, n)?;
    let id = Transformation::identity(n).expect("n in range");
    let last = n - 1;
    let d = match (class, n) {
        (IdealClass::Right | IdealClass::Left, 1) => dfa(&[("a", id)], &[0]),
        (IdealClass::Right | IdealClass::TwoSided, 2) => dfa(&[("a", tf(&[1, 1])), ("b", id)], &[1]),
        // a: (1 -> 0) rather than (0 -> 1); see README, "Left witness for n = 2"
        (IdealClass::Left, 2) => dfa(&[("a", tf(&[0, 0])), ("b", id), ("c", tf(&[1, 1]))], &[1]),
        (IdealClass::TwoSided, 3) => dfa(&[("a", tf(&[1, 2, 2])), ("b", tf(&[0, 0, 2])), ("c", id)], &[2]),
        (IdealClass::Right, _) => {
            let cyc: Vec<usize> = (0..=n - 2).collect();
            let mut letters = vec![("a", Transformation::cycle(n, &cyc).unwrap())];
            if n > 3 {
                letters.push(("b", Transformation::cycle(n, &[0, 1]).unwrap()));
            }
            letters.push(("c", Transformation::point(n, n - 2, 0).unwrap()));
            letters.push(("d", Transformation::point(n, n - 2, last).unwrap()));
            dfa(&letters, &[last])
        }
        (IdealClass::Left, _) => {
            let cyc: Vec<usize> = (1..n).collect();
            let mut letters = vec![("a", Transformation::cycle(n, &cyc).unwrap())];
            if n > 3 {
                letters.push(("b", Transformation::cycle(n, &[1, 2]).unwrap()));
            }
            letters.push(("c", Transformation::point(n, last, 1).unwrap()));
            letters.push(("d", Transformation::point(n, last, 0).unwrap()));
            letters.push(("e", Transformation::constant(n, 1).unwrap()));
            dfa(&letters, &[last])
        }
        (IdealClass::TwoSided, _) => {
            let cyc: Vec<usize> = (1..=n - 2).collect();
            let mut letters = vec![("a", Transformation::cycle(n, &cyc).unwrap())];
            if n > 4 {
                letters.push(("b", Transformation::cycle(n, &[1, 2]).unwrap()));
            }
            letters.push(("c", Transformation::point(n, n - 2, 1).unwrap()));
            letters.push(("d", Transformation::point(n, n - 2, 0).unwrap()));
            letters.push(("e", Transformation::from_fn(n, |q| if q == last { last } else { 1 }).unwrap()));
            letters.push(("f", Transformation::point(n, 1, last).unwrap()));
            dfa(&letters, &[last])
        }
    };
    Ok(d)
}

/// The upper bound on syntactic complexity for the class at `n` states.
/// Returns `None` if the value does not fit in a `u128`.
pub fn bound(class: IdealClass, n: usize) -> Result<Option<u128>, WitnessError> {
    check_range(class, n)?;
    let n128 = n as u128;
    let pow = |b: u128, e: usize| b.checked_pow(u32::try_from(e).ok()?);
    Ok(match class {
        IdealClass::Right => pow(n128, n - 1),
        IdealClass::Left => pow(n128, n - 1).and_then(|v| v.checked_add(n128 - 1)),
        IdealClass::TwoSided => match n {
            2 => Some(2),
            3 => Some(6),
            _ => pow(n128, n - 2)
                .zip(pow(2, n - 2).and_then(|p| p.checked_mul(n128 - 2)))
                .and_then(|(a, b)| a.checked_add(b)?.checked_add(1)),
        },
    })
}

/// Every transformation of `Q_n` fixing each state in `fixed`, in
/// lexicographic order of images.
fn maps_fixing(n: usize, fixed: &[usize]) -> Vec<Transformation> {
    let free: Vec<usize> = (0..n).filter(|q| !fixed.contains(q)).collect();
    let mut image: Vec<usize> = (0..n).collect();
    for &q in &free {
        image[q] = 0;
    }
    let mut out = Vec::new();
    loop {
        out.push(Transformation::new(image.clone()).expect("in range"));
        // odometer over the free positions, last position fastest
        let mut i = free.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            let q = free[i];
            if image[q] + 1 < n {
                image[q] += 1;
                break;
            }
            image[q] = 0;
        }
    }
}

/// The transition semigroup of `build(class, n)`, constructed from its
/// closed-form description.
pub fn expected_semigroup(class: IdealClass, n: usize) -> Result<TransformationSemigroup, WitnessError> {
    check_range(class, n)?;
    let last = n - 1;
    let elements: Vec<Transformation> = match (class, n) {
        (IdealClass::Right | IdealClass::Left, 1) => vec![tf(&[0])],
        (IdealClass::Right | IdealClass::TwoSided, 2) => vec![tf(&[1, 1]), tf(&[0, 1])],
        (IdealClass::Left, 2) => vec![tf(&[0, 0]), tf(&[0, 1]), tf(&[1, 1])],
        (IdealClass::TwoSided, 3) => vec![
            tf(&[0, 1, 2]),
            tf(&[1, 2, 2]),
            tf(&[2, 2, 2]),
            tf(&[0, 0, 2]),
            tf(&[1, 1, 2]),
            tf(&[0, 2, 2]),
        ],
        (IdealClass::Right, _) => maps_fixing(n, &[last]),
        (IdealClass::Left, _) => {
            let mut v = maps_fixing(n, &[0]);
            v.extend((1..n).map(|q| Transformation::constant(n, q).unwrap()));
            v
        }
        (IdealClass::TwoSided, _) => {
            let mut v = maps_fixing(n, &[0, last]);
            let middle = n - 2;
            for mask in 0u64..(1 << middle) {
                for i in 1..=middle {
                    v.push(
                        Transformation::from_fn(n, |q| {
                            let in_s = q == last || (1..=middle).contains(&q) && mask >> (q - 1) & 1 == 1;
                            if in_s { last } else { i }
                        })
                        .unwrap(),
                    );
                }
            }
            v.push(Transformation::constant(n, last).unwrap());
            v
        }
    };
    Ok(TransformationSemigroup::from_elements(n, elements).expect("sizes agree"))
}
