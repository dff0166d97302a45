//! Computads with allowed-word algebra, and the computad generated by defect data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::defect_data::{rotate, validate_defect_data, D1Image, DefectData, Endpoint, SignedLabel};
use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// A generator of `K1`: either an object (identity-like) or a signed 2-label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum K1 {
    Object(String),
    Signed(SignedLabel),
}

impl fmt::Display for K1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K1::Object(u) => write!(f, "[{u}]"),
            K1::Signed(x) => write!(f, "{x}"),
        }
    }
}

/// A chain of `K1` generators; empty words remember their `K2` anchor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub entries: Vec<K1>,
    pub anchor: Option<String>,
}

impl Word {
    pub fn new(entries: Vec<K1>) -> Self {
        Self { entries, anchor: None }
    }

    pub fn empty(anchor: impl Into<String>) -> Self {
        Self { entries: Vec::new(), anchor: Some(anchor.into()) }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1_{}", self.anchor.as_deref().unwrap_or("?"));
        }
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Computad {
    pub k2: BTreeSet<String>,
    /// `k1` with its `(σ1, τ1)` endpoints.
    pub k1: BTreeMap<K1, (String, String)>,
    /// `k0` with its `(σ0, τ0)` words.
    pub k0: BTreeMap<String, (Word, Word)>,
}

impl Computad {
    pub fn sigma1(&self, x: &K1) -> Option<&str> {
        self.k1.get(x).map(|(s, _)| s.as_str())
    }

    pub fn tau1(&self, x: &K1) -> Option<&str> {
        self.k1.get(x).map(|(_, t)| t.as_str())
    }

    /// Source of a word: `σ1` of its first entry, or its anchor.
    pub fn word_source(&self, w: &Word) -> Option<String> {
        match w.entries.first() {
            Some(x) => self.sigma1(x).map(str::to_string),
            None => w.anchor.clone(),
        }
    }

    pub fn word_target(&self, w: &Word) -> Option<String> {
        match w.entries.last() {
            Some(x) => self.tau1(x).map(str::to_string),
            None => w.anchor.clone(),
        }
    }

    pub fn is_chain(&self, w: &Word) -> bool {
        w.entries.iter().all(|x| self.k1.contains_key(x))
            && w.entries.windows(2).all(|p| self.tau1(&p[0]) == self.sigma1(&p[1]))
            && (!w.entries.is_empty() || w.anchor.as_ref().is_some_and(|a| self.k2.contains(a)))
    }
}

/// Empty iff both compatibility equations hold for every `k0` element.
pub fn validate_computad(k: &Computad) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (x, (s, t)) in &k.k1 {
        if !k.k2.contains(s) || !k.k2.contains(t) {
            report.push(format!("k1 {x}"), "endpoint outside k2");
        }
    }
    for (x, (src, tgt)) in &k.k0 {
        for (name, w) in [("sigma0", src), ("tau0", tgt)] {
            if !k.is_chain(w) {
                report.push(format!("k0 {x}"), format!("{name} = {w} is not an allowed word"));
            }
        }
        if k.word_source(src) != k.word_source(tgt) {
            report.push(format!("k0 {x}"), "sigma1(sigma0) != sigma1(tau0)");
        }
        if k.word_target(src) != k.word_target(tgt) {
            report.push(format!("k0 {x}"), "tau1(tau0) != tau1(sigma0)");
        }
    }
    report
}

/// All chains of length `m`; for `m = 0` one empty word per element of `k2`.
pub fn allowed_words(k: &Computad, m: usize) -> Vec<Word> {
    if m == 0 {
        return k.k2.iter().map(|u| Word::empty(u.clone())).collect();
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<K1>> = k.k1.keys().map(|x| vec![x.clone()]).collect();
    stack.reverse();
    while let Some(w) = stack.pop() {
        if w.len() == m {
            out.push(Word::new(w));
            continue;
        }
        let end = k.tau1(w.last().unwrap()).unwrap().to_string();
        let mut next: Vec<Vec<K1>> = k
            .k1
            .iter()
            .filter(|(_, (s, _))| *s == end)
            .map(|(x, _)| {
                let mut v = w.clone();
                v.push(x.clone());
                v
            })
            .collect();
        next.reverse();
        stack.extend(next);
    }
    out
}

/// Reverses the order and flips the sign of every signed entry.
pub fn reverse_word(w: &Word) -> Word {
    Word {
        entries: w
            .entries
            .iter()
            .rev()
            .map(|x| match x {
                K1::Signed(s) => K1::Signed(s.flipped()),
                K1::Object(u) => K1::Object(u.clone()),
            })
            .collect(),
        anchor: w.anchor.clone(),
    }
}

/// Concatenation `a □ b`, defined when `τ1(a) = σ1(b)`.
pub fn concat_words(k: &Computad, a: &Word, b: &Word) -> Result<Word> {
    let (ta, sb) = (k.word_target(a), k.word_source(b));
    if ta.is_none() || ta != sb {
        return Err(Error::Chain(format!("{a} ends at {ta:?} but {b} starts at {sb:?}")));
    }
    if a.is_empty() {
        return Ok(b.clone());
    }
    if b.is_empty() {
        return Ok(a.clone());
    }
    let mut entries = a.entries.clone();
    entries.extend(b.entries.iter().cloned());
    Ok(Word::new(entries))
}

/// All splittings `(A, A')` with `A' □ A^#` cyclically equal to `word`, excluding `(∅, ∅)`.
pub fn splittings(word: &[SignedLabel]) -> Vec<(Vec<SignedLabel>, Vec<SignedLabel>)> {
    let n = word.len();
    let mut out = BTreeSet::new();
    for r in 0..n {
        let rot = rotate(word, r);
        for k in 0..=n {
            let a_prime = rot[..k].to_vec();
            let a: Vec<SignedLabel> = rot[k..].iter().rev().map(SignedLabel::flipped).collect();
            out.insert((a, a_prime));
        }
    }
    out.into_iter().collect()
}

/// Identifier of a `k0` element coming from a D1 element and a splitting.
pub fn splitting_id(d1_id: &str, a: &[SignedLabel], a_prime: &[SignedLabel]) -> String {
    let show = |w: &[SignedLabel]| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    format!("{d1_id} | {} -> {}", show(a), show(a_prime))
}

/// The computad `K^D` with splittings of words of length at most `max_word_len`.
pub fn build_computad(dd: &DefectData, max_word_len: usize) -> Result<Computad> {
    let report = validate_defect_data(dd);
    if !report.is_clean() {
        return Err(Error::DefectData(format!("{} violations", report.violations.len())));
    }
    let k2 = dd.d3.clone();
    let mut k1 = BTreeMap::new();
    for u in &dd.d3 {
        k1.insert(K1::Object(u.clone()), (u.clone(), u.clone()));
    }
    for (x, (s, t)) in &dd.d2 {
        k1.insert(K1::Signed(SignedLabel::plus(x.clone())), (s.clone(), t.clone()));
        k1.insert(K1::Signed(SignedLabel::minus(x.clone())), (t.clone(), s.clone()));
    }
    let mut k0 = BTreeMap::new();
    for u in &dd.d3 {
        let w = Word::new(vec![K1::Object(u.clone())]);
        k0.insert(format!("[{u}]"), (w.clone(), w));
    }
    for el in dd.d1_elements(max_word_len) {
        let D1Image::Word(w) = &el.image else { continue };
        if w.len() > max_word_len {
            continue;
        }
        for (a, a_prime) in splittings(&w.entries) {
            let anchor = if let Some(x) = a.first() {
                dd.signed_endpoint(x, Endpoint::Source)?
            } else {
                dd.signed_endpoint(&a_prime[0], Endpoint::Source)?
            };
            let to_word = |v: &[SignedLabel]| {
                if v.is_empty() {
                    Word::empty(anchor)
                } else {
                    Word::new(v.iter().cloned().map(K1::Signed).collect())
                }
            };
            k0.insert(splitting_id(&el.id, &a, &a_prime), (to_word(&a), to_word(&a_prime)));
        }
    }
    Ok(Computad { k2, k1, k0 })
}
