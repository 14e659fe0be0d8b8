//! Oracles and property checks shared by the integration tests and the
//! acceptance target. The oracles deliberately avoid the library's own
//! algorithms: containment by enumerating words, closure by naive
//! saturation.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use synideal::dfa::Dfa;
use synideal::harness::sample_ideal_dfa;
use synideal::semigroup::{self, TransformationSemigroup};
use synideal::transform::Transformation;
use synideal::IdealClass;

pub fn tf(v: &[usize]) -> Transformation {
    Transformation::new(v.to_vec()).unwrap()
}

/// Every word over `k` letters of length at most `max_len`.
pub fn words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut v: Vec<usize> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `K_p ⊆ K_q` by brute force over words of length at most `n²`, walking
/// the pair graph as a set of reached pairs per length so the enumeration
/// stays polynomial.
pub fn containment_by_words(d: &Dfa, p: usize, q: usize) -> bool {
    let n = d.n();
    let mut frontier: BTreeSet<(usize, usize)> = BTreeSet::from([(p, q)]);
    for _ in 0..=n * n {
        if frontier.iter().any(|&(x, y)| d.is_final(x) && !d.is_final(y)) {
            return false;
        }
        frontier = frontier
            .iter()
            .flat_map(|&(x, y)| (0..d.alphabet().len()).map(move |a| (x, y, a)))
            .map(|(x, y, a)| (d.step(x, a), d.step(y, a)))
            .collect();
    }
    true
}

/// Literal word enumeration; exponential, only for tiny cases.
pub fn containment_by_enumeration(d: &Dfa, p: usize, q: usize, max_len: usize) -> bool {
    words(d.alphabet().len(), max_len)
        .iter()
        .all(|w| !d.is_final(d.run_from(p, w)) || d.is_final(d.run_from(q, w)))
}

/// Saturates the generator set under all pairwise products.
pub fn naive_closure(gens: &[Transformation]) -> BTreeSet<Transformation> {
    let mut set: BTreeSet<Transformation> = gens.iter().cloned().collect();
    loop {
        let mut added = Vec::new();
        for x in &set {
            for y in &set {
                let z = x.then(y);
                if !set.contains(&z) {
                    added.push(z);
                }
            }
        }
        if added.is_empty() {
            return set;
        }
        set.extend(added);
    }
}

pub fn arb_transformation(n: usize) -> impl Strategy<Value = Transformation> {
    proptest::collection::vec(0..n, n).prop_map(|v| Transformation::new(v).unwrap())
}

/// A random complete DFA with 1..=max_n states and 1..=max_k letters.
pub fn arb_dfa(max_n: usize, max_k: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        (
            proptest::collection::vec(arb_transformation(n), k),
            proptest::collection::vec(any::<bool>(), n),
            0..n,
        )
            .prop_map(move |(delta, fin, init)| {
                let finals: Vec<usize> = (0..n).filter(|&q| fin[q]).collect();
                let letters: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
                Dfa::new(letters, init, &finals, delta).unwrap()
            })
    })
}

/// A sampled minimal left-ideal DFA, or `None` when the sampler gives up.
pub fn arb_left_ideal() -> impl Strategy<Value = Option<Dfa>> {
    (2usize..=5, 1usize..=3, any::<u64>()).prop_map(|(n, k, seed)| sample_ideal_dfa(IdealClass::Left, n, k, seed))
}

// ---- property checks, each returning Err with a description on failure ----

pub type Check = Result<(), String>;

pub fn prop_preorder_monotone(d: &Dfa) -> Check {
    let m = d.minimize();
    let po = m.preorder();
    let t = m.transition_semigroup(None).map_err(|e| e.to_string())?;
    let n = m.n();
    for x in t.elements() {
        for p in 0..n {
            for q in 0..n {
                if po.leq(p, q) && !po.leq(x.at(p), x.at(q)) {
                    return Err(format!("{p} ⪯ {q} but not after {x}\n{}", m.to_text()));
                }
            }
        }
    }
    Ok(())
}

pub fn prop_left_ideal_aperiodic(d: &Option<Dfa>) -> Check {
    let Some(d) = d else { return Ok(()) };
    let t = d.transition_semigroup(None).map_err(|e| e.to_string())?;
    if let Some(x) = t.elements().iter().find(|x| !x.is_initially_aperiodic(0)) {
        return Err(format!("{x} is not initially aperiodic\n{}", d.to_text()));
    }
    if d.empty_states().iter().any(|&e| e) {
        return Err(format!("left ideal with an empty quotient\n{}", d.to_text()));
    }
    Ok(())
}

pub fn prop_left_ideal_0t_le_0st(d: &Option<Dfa>) -> Check {
    let Some(d) = d else { return Ok(()) };
    let po = d.preorder();
    let t = d.transition_semigroup(None).map_err(|e| e.to_string())?;
    let mut all: Vec<Transformation> = t.elements().to_vec();
    all.push(Transformation::identity(d.n()).unwrap());
    for s in &all {
        for x in &all {
            // 0t ⪯ 0st
            if !po.leq(x.at(0), s.then(x).at(0)) {
                return Err(format!("0t ⪯ 0st fails for s={s} t={x}\n{}", d.to_text()));
            }
        }
    }
    Ok(())
}

pub fn prop_containment_agrees(d: &Dfa) -> Check {
    for p in 0..d.n() {
        for q in 0..d.n() {
            let fast = d.language_containment(p, q);
            if fast != containment_by_words(d, p, q) {
                return Err(format!("containment({p},{q}) = {fast} disagrees with word oracle\n{}", d.to_text()));
            }
            if d.preorder().leq(p, q) != fast {
                return Err(format!("preorder and containment disagree at ({p},{q})"));
            }
        }
    }
    Ok(())
}

pub fn prop_closure_closed(gens: &[Transformation]) -> Check {
    let s = semigroup::closure(gens, None).map_err(|e| e.to_string())?;
    for g in gens {
        if !s.contains(g) {
            return Err(format!("generator {g} missing"));
        }
    }
    for x in s.elements() {
        for y in s.elements() {
            if !s.contains(&x.then(y)) {
                return Err(format!("{x}·{y} escapes the closure"));
            }
        }
    }
    let oracle = naive_closure(gens);
    if s.elements().iter().cloned().collect::<BTreeSet<_>>() != oracle {
        return Err(format!("closure of {gens:?} differs from naive saturation"));
    }
    Ok(())
}

pub fn prop_associative(a: &Transformation, b: &Transformation, c: &Transformation) -> Check {
    if a.then(b).then(c) != a.then(&b.then(c)) {
        return Err(format!("({a}{b}){c} != {a}({b}{c})"));
    }
    Ok(())
}

pub fn prop_round_trips(d: &Dfa) -> Check {
    let back = Dfa::parse_text(&d.to_text()).map_err(|e| e.to_string())?;
    if &back != d {
        return Err(format!("text round trip changed\n{}", d.to_text()));
    }
    let back = Dfa::from_json(&d.to_json()).map_err(|e| e.to_string())?;
    if &back != d {
        return Err("json round trip changed the DFA".into());
    }
    for t in d.delta() {
        let parsed: Transformation = t.to_string().parse().map_err(|e: synideal::TransformError| e.to_string())?;
        if &parsed != t {
            return Err(format!("transformation {t} did not round trip"));
        }
    }
    let s = semigroup::closure(d.delta(), None).map_err(|e| e.to_string())?;
    let back = TransformationSemigroup::from_text(&s.to_text()).map_err(|e| e.to_string())?;
    if !back.same_elements(&s) {
        return Err("semigroup text round trip changed the elements".into());
    }
    Ok(())
}

/// Minimal DFA of `a^(n-1) a*` over `{a}`.
pub fn unary_threshold(n: usize) -> Dfa {
    let img: Vec<usize> = (0..n).map(|q| (q + 1).min(n - 1)).collect();
    Dfa::from_parts(&["a"], 0, &[n - 1], vec![Transformation::new(img).unwrap()]).unwrap()
}

/// Minimal DFA of `Σ* a^(n-1)` over `{a, b}`: state = trailing a's, capped.
pub fn suffix_power(n: usize) -> Dfa {
    let a: Vec<usize> = (0..n).map(|q| (q + 1).min(n - 1)).collect();
    Dfa::from_parts(&["a", "b"], 0, &[n - 1], vec![Transformation::new(a).unwrap(), Transformation::constant(n, 0).unwrap()])
        .unwrap()
}

pub const EXAMPLE_D1: &str = "states 3\nalphabet a b c\ninitial 0\nfinal 2\ntrans a 0 1 2\ntrans b 1 2 0\ntrans c 2 0 1\n";
pub const EXAMPLE_D2: &str = "states 3\nalphabet a b c\ninitial 0\nfinal 2\ntrans a 1 0 2\ntrans b 0 0 2\ntrans c 0 2 2\n";
pub const EXAMPLE_D3: &str = "states 3\nalphabet a b c\ninitial 0\nfinal 2\ntrans a 1 2 0\ntrans b 1 0 2\ntrans c 0 1 0\n";
