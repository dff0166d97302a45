//! Defect data: label sets for 3-, 2- and 1-strata together with source,
//! target and folding maps, plus the standard group and ribbon families.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

pub const DEFAULT_MAX_WORD_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_plus() { "+" } else { "-" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Source,
    Target,
}

/// An element of `D2 × {±}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedLabel {
    pub label: String,
    pub sign: Sign,
}

impl SignedLabel {
    pub fn new(label: impl Into<String>, sign: Sign) -> Self {
        Self { label: label.into(), sign }
    }

    pub fn plus(label: impl Into<String>) -> Self {
        Self::new(label, Sign::Plus)
    }

    pub fn minus(label: impl Into<String>) -> Self {
        Self::new(label, Sign::Minus)
    }

    pub fn flipped(&self) -> Self {
        Self::new(self.label.clone(), self.sign.flip())
    }
}

impl fmt::Display for SignedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, self.sign)
    }
}

/// Index of the lexicographically minimal rotation of `v`.
pub fn min_rotation<T: Ord>(v: &[T]) -> usize {
    let n = v.len();
    let mut best = 0;
    for start in 1..n {
        for k in 0..n {
            let a = &v[(start + k) % n];
            let b = &v[(best + k) % n];
            if a != b {
                if a < b {
                    best = start;
                }
                break;
            }
        }
    }
    best
}

/// Advances `idx` as a base-`n` counter; false once it wraps around.
pub fn odometer(idx: &mut [usize], n: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < n {
            return true;
        }
        idx[k] = 0;
    }
    false
}

pub fn rotate<T: Clone>(v: &[T], start: usize) -> Vec<T> {
    let n = v.len();
    (0..n).map(|k| v[(start + k) % n].clone()).collect()
}

/// A cyclically ordered list of signed labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclicWord {
    pub entries: Vec<SignedLabel>,
    pub canonical_rotation: Vec<SignedLabel>,
}

impl CyclicWord {
    pub fn new(entries: Vec<SignedLabel>) -> Self {
        let canonical_rotation = rotate(&entries, min_rotation(&entries));
        Self { entries, canonical_rotation }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn canonical(&self) -> CyclicWord {
        CyclicWord::new(self.canonical_rotation.clone())
    }

    pub fn rotated(&self, k: usize) -> CyclicWord {
        if self.entries.is_empty() {
            return self.clone();
        }
        CyclicWord::new(rotate(&self.entries, k % self.entries.len()))
    }

    /// Reversed order with every sign flipped.
    pub fn reversed(&self) -> CyclicWord {
        CyclicWord::new(self.entries.iter().rev().map(SignedLabel::flipped).collect())
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_rotation == other.canonical_rotation
    }
}

impl Eq for CyclicWord {}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.canonical_rotation.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub elements: Vec<String>,
    pub product: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl GroupTable {
    /// Builds a table, checking closure, associativity, identity and inverses.
    pub fn new(elements: Vec<String>, product: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Group("empty element list".into()));
        }
        let names: BTreeSet<&String> = elements.iter().collect();
        if names.len() != n {
            return Err(Error::Group("duplicate element names".into()));
        }
        if product.len() != n || product.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Group("product table is not a total n×n table".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if product[product[a][b]][c] != product[a][product[b][c]] {
                        return Err(Error::Group(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| product[e][a] == a && product[a][e] == a))
            .ok_or_else(|| Error::Group("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| product[a][b] == identity && product[b][a] == identity)
                .ok_or_else(|| Error::Group(format!("element {} has no inverse", elements[a])))?;
            inverse.push(inv);
        }
        Ok(Self { elements, product, identity, inverse })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Cyclic group with elements `1, g, g2, …`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                k => format!("g{k}"),
            })
            .collect();
        let product = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(elements, product).expect("cyclic table is a group")
    }

    /// Direct product; element names are concatenated, the identity stays `1`.
    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Self {
        let (na, nb) = (a.order(), b.order());
        let mut elements = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                let name = match (i == a.identity, j == b.identity) {
                    (true, true) => "1".to_string(),
                    (false, true) => format!("{}", a.elements[i]),
                    (true, false) => format!("{}'", b.elements[j]),
                    (false, false) => format!("{}{}'", a.elements[i], b.elements[j]),
                };
                elements.push(name);
            }
        }
        let product = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.product[x / nb][y / nb] * nb + b.product[x % nb][y % nb])
                    .collect()
            })
            .collect();
        Self::new(elements, product).expect("direct product is a group")
    }

    /// The symmetric group on three letters.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let names = ["1", "s01", "s12", "s02", "r", "r2"];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let product = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let (p, q) = (perms[a], perms[b]);
                        index([p[q[0]], p[q[1]], p[q[2]]])
                    })
                    .collect()
            })
            .collect();
        Self::new(names.iter().map(|s| s.to_string()).collect(), product).expect("S3 is a group")
    }

    /// Looks up one of the named standard groups.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "trivial" | "1" => Ok(Self::trivial()),
            "s3" => Ok(Self::symmetric3()),
            "z2xz2" => Ok(Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))),
            _ => name
                .strip_prefix('z')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(Self::cyclic)
                .ok_or_else(|| Error::Group(format!("unknown group name {name}"))),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn signed(&self, a: usize, sign: Sign) -> usize {
        if sign.is_plus() {
            a
        } else {
            self.inv(a)
        }
    }

    /// Ordered product `g_1^{ε_1} ⋯ g_m^{ε_m}` of a word over the group.
    pub fn word_product(&self, word: &[SignedLabel]) -> Result<usize> {
        let mut acc = self.identity;
        for x in word {
            let g = self.index_of(&x.label).ok_or_else(|| Error::Label(x.label.clone()))?;
            acc = self.mul(acc, self.signed(g, x.sign));
        }
        Ok(acc)
    }
}

/// Image of a 1-stratum label under the folding map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum D1Image {
    /// A 1-stratum touching no 2-strata, inside a single 3-stratum.
    Loop(String),
    Word(CyclicWord),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D1Element {
    pub id: String,
    pub image: D1Image,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum D1Set {
    Explicit(BTreeMap<String, D1Image>),
    /// Cyclic words with `∏ g_i^{ε_i} = 1`; the folding map is the identity.
    Group(GroupTable),
    /// Pairs (object label, cyclic word over a single 2-label with exactly one `+`).
    Ribbon(BTreeSet<String>),
}

/// Defect data `(D3, D2, D1, s, t, f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectData {
    pub d3: BTreeSet<String>,
    pub d2: BTreeMap<String, (String, String)>,
    pub d1: D1Set,
    pub max_word_len: usize,
}

impl DefectData {
    pub fn signed_endpoint(&self, x: &SignedLabel, which: Endpoint) -> Result<&str> {
        let (s, t) = self.d2.get(&x.label).ok_or_else(|| Error::Label(x.label.clone()))?;
        let source_side = matches!((which, x.sign), (Endpoint::Source, Sign::Plus) | (Endpoint::Target, Sign::Minus));
        Ok(if source_side { s } else { t })
    }

    /// Positions `i` at which `s(w_{i+1}) ≠ t(w_i)` (cyclically); unknown labels are errors.
    pub fn chain_violations(&self, word: &[SignedLabel]) -> Result<Vec<usize>> {
        let m = word.len();
        let mut bad = Vec::new();
        for i in 0..m {
            let t = self.signed_endpoint(&word[i], Endpoint::Target)?;
            let s = self.signed_endpoint(&word[(i + 1) % m], Endpoint::Source)?;
            if s != t {
                bad.push(i);
            }
        }
        Ok(bad)
    }

    /// Membership test for a cyclic word in the image of the folding map.
    pub fn accepts_word(&self, word: &[SignedLabel]) -> bool {
        if word.is_empty() {
            return false;
        }
        if word.iter().any(|x| !self.d2.contains_key(&x.label)) {
            return false;
        }
        match &self.d1 {
            D1Set::Explicit(map) => {
                let w = CyclicWord::new(word.to_vec());
                map.values().any(|img| *img == D1Image::Word(w.clone()))
            }
            D1Set::Group(g) => matches!(g.word_product(word), Ok(p) if p == g.identity),
            D1Set::Ribbon(_) => word.iter().filter(|x| x.sign.is_plus()).count() == 1,
        }
    }

    /// All D1 elements, with oracle families enumerated up to `max_len` letters.
    pub fn d1_elements(&self, max_len: usize) -> Vec<D1Element> {
        match &self.d1 {
            D1Set::Explicit(map) => map
                .iter()
                .map(|(id, image)| D1Element { id: id.clone(), image: image.clone() })
                .collect(),
            D1Set::Group(_) => self
                .enumerate_words(max_len)
                .into_iter()
                .map(|w| D1Element { id: w.to_string(), image: D1Image::Word(w) })
                .collect(),
            D1Set::Ribbon(objects) => {
                let words = self.enumerate_words(max_len);
                objects
                    .iter()
                    .flat_map(|x| {
                        words.iter().map(move |w| D1Element {
                            id: format!("{x}:{w}"),
                            image: D1Image::Word(w.clone()),
                        })
                    })
                    .collect()
            }
        }
    }

    /// Canonical cyclic words of length `1..=max_len` that are accepted.
    fn enumerate_words(&self, max_len: usize) -> Vec<CyclicWord> {
        let letters: Vec<SignedLabel> = self
            .d2
            .keys()
            .flat_map(|l| [SignedLabel::plus(l.clone()), SignedLabel::minus(l.clone())])
            .collect();
        let mut out = Vec::new();
        let n = letters.len();
        if n == 0 {
            return out;
        }
        for len in 1..=max_len {
            let mut idx = vec![0usize; len];
            loop {
                // only canonical representatives are kept
                if min_rotation(&idx) == 0 {
                    let word: Vec<SignedLabel> = idx.iter().map(|&i| letters[i].clone()).collect();
                    if self.accepts_word(&word) && matches!(self.chain_violations(&word), Ok(v) if v.is_empty()) {
                        out.push(CyclicWord::new(word));
                    }
                }
                if !odometer(&mut idx, n) {
                    break;
                }
            }
        }
        out
    }
}

/// Reports every D1 element violating the chain condition, and unknown labels.
pub fn validate_defect_data(dd: &DefectData) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (x, (s, t)) in &dd.d2 {
        for (end, v) in [("s", s), ("t", t)] {
            if !dd.d3.contains(v) {
                report.push(format!("d2 {x}"), format!("{end}({x}) = {v} is not in d3"));
            }
        }
    }
    if let D1Set::Group(g) = &dd.d1 {
        for name in dd.d2.keys() {
            if g.index_of(name).is_none() {
                report.push(format!("d2 {name}"), "label is not a group element");
            }
        }
    }
    for el in dd.d1_elements(dd.max_word_len) {
        match &el.image {
            D1Image::Loop(u) => {
                if !dd.d3.contains(u) {
                    report.push(format!("d1 {}", el.id), format!("{u} is not in d3"));
                }
            }
            D1Image::Word(w) => match dd.chain_violations(&w.entries) {
                Ok(bad) => {
                    for i in bad {
                        report.push(
                            format!("d1 {}", el.id),
                            format!("chain condition fails at i={}", i + 1),
                        );
                    }
                }
                Err(e) => report.push(format!("d1 {}", el.id), e.to_string()),
            },
        }
    }
    report
}

/// The defect data `D^G` of a finite group.
pub fn build_group_defect_data(g: &GroupTable) -> Result<DefectData> {
    let g = GroupTable::new(g.elements.clone(), g.product.clone())?;
    let star = "*".to_string();
    Ok(DefectData {
        d3: BTreeSet::from([star.clone()]),
        d2: g.elements.iter().map(|x| (x.clone(), (star.clone(), star.clone()))).collect(),
        d1: D1Set::Group(g),
        max_word_len: DEFAULT_MAX_WORD_LEN,
    })
}

/// The ribbon defect data `D^C` with one 2-label `*`.
pub fn build_rt_defect_data(object_labels: &BTreeSet<String>) -> Result<DefectData> {
    if object_labels.is_empty() {
        return Err(Error::DefectData("empty object label set".into()));
    }
    let star = "*".to_string();
    Ok(DefectData {
        d3: BTreeSet::from([star.clone()]),
        d2: BTreeMap::from([(star.clone(), (star.clone(), star))]),
        d1: D1Set::Ribbon(object_labels.clone()),
        max_word_len: DEFAULT_MAX_WORD_LEN,
    })
}

#[derive(Debug, Deserialize)]
struct RawD2 {
    s: String,
    t: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub(crate) enum RawGroup {
    Named(String),
    Table { elements: Vec<String>, product: Vec<Vec<usize>> },
}

impl RawGroup {
    pub(crate) fn build(self) -> Result<GroupTable> {
        match self {
            RawGroup::Named(n) => GroupTable::named(&n),
            RawGroup::Table { elements, product } => GroupTable::new(elements, product),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawD1Entry {
    Word { word: Vec<(String, Sign)> },
    Loop { loop_in: String },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawD1 {
    Family {
        family: String,
        #[serde(default)]
        group: Option<RawGroup>,
        #[serde(default)]
        labels: Vec<String>,
    },
    Explicit(BTreeMap<String, RawD1Entry>),
}

#[derive(Debug, Deserialize)]
struct RawDefectData {
    #[serde(default)]
    d3: Vec<String>,
    #[serde(default)]
    d2: BTreeMap<String, RawD2>,
    d1: RawD1,
    #[serde(default)]
    max_word_len: Option<usize>,
}

impl DefectData {
    /// Parses the structured-text defect data format.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDefectData = serde_json::from_str(text)?;
        let max_word_len = raw.max_word_len.unwrap_or(DEFAULT_MAX_WORD_LEN);
        let mut dd = match raw.d1 {
            RawD1::Family { family, group, labels } => match family.as_str() {
                "group" => {
                    let g = group.ok_or_else(|| Error::Parse("group family needs \"group\"".into()))?;
                    build_group_defect_data(&g.build()?)?
                }
                "rt" => build_rt_defect_data(&labels.into_iter().collect())?,
                other => return Err(Error::Parse(format!("unknown family {other}"))),
            },
            RawD1::Explicit(entries) => DefectData {
                d3: raw.d3.into_iter().collect(),
                d2: raw.d2.into_iter().map(|(k, v)| (k, (v.s, v.t))).collect(),
                d1: D1Set::Explicit(
                    entries
                        .into_iter()
                        .map(|(id, e)| {
                            let img = match e {
                                RawD1Entry::Word { word } => D1Image::Word(CyclicWord::new(
                                    word.into_iter().map(|(l, s)| SignedLabel::new(l, s)).collect(),
                                )),
                                RawD1Entry::Loop { loop_in } => D1Image::Loop(loop_in),
                            };
                            (id, img)
                        })
                        .collect(),
                ),
                max_word_len,
            },
        };
        dd.max_word_len = max_word_len;
        Ok(dd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge(word: Vec<SignedLabel>) -> DefectData {
        DefectData {
            d3: BTreeSet::from(["u".to_string(), "v".to_string()]),
            d2: BTreeMap::from([("a".to_string(), ("u".to_string(), "v".to_string()))]),
            d1: D1Set::Explicit(BTreeMap::from([("x".to_string(), D1Image::Word(CyclicWord::new(word)))])),
            max_word_len: 8,
        }
    }

    #[test]
    fn signed_endpoints_follow_the_sign() {
        let dd = single_edge(vec![]);
        assert_eq!(dd.signed_endpoint(&SignedLabel::plus("a"), Endpoint::Source).unwrap(), "u");
        assert_eq!(dd.signed_endpoint(&SignedLabel::minus("a"), Endpoint::Source).unwrap(), "v");
        assert_eq!(dd.signed_endpoint(&SignedLabel::minus("a"), Endpoint::Target).unwrap(), "u");
        assert_eq!(dd.signed_endpoint(&SignedLabel::plus("a"), Endpoint::Target).unwrap(), "v");
        assert!(matches!(dd.signed_endpoint(&SignedLabel::plus("zz"), Endpoint::Source), Err(Error::Label(_))));
    }

    #[test]
    fn chain_condition_is_checked() {
        let bad = single_edge(vec![SignedLabel::plus("a"), SignedLabel::plus("a")]);
        let report = validate_defect_data(&bad);
        assert!(!report.is_clean());
        assert!(report.violations[0].message.contains("i=1"));
        let good = single_edge(vec![SignedLabel::plus("a"), SignedLabel::minus("a")]);
        assert!(validate_defect_data(&good).is_clean());
    }

    #[test]
    fn group_family_membership() {
        let z2 = build_group_defect_data(&GroupTable::cyclic(2)).unwrap();
        assert!(z2.accepts_word(&[SignedLabel::plus("g"), SignedLabel::plus("g")]));
        assert!(!z2.accepts_word(&[SignedLabel::plus("g")]));
        let z3 = build_group_defect_data(&GroupTable::cyclic(3)).unwrap();
        assert!(z3.accepts_word(&[SignedLabel::plus("g"), SignedLabel::plus("g"), SignedLabel::plus("g")]));
        assert!(!z3.accepts_word(&[SignedLabel::plus("g"), SignedLabel::plus("g")]));
        assert!(validate_defect_data(&z3).is_clean());
    }

    #[test]
    fn ribbon_family_needs_exactly_one_plus() {
        let dd = build_rt_defect_data(&BTreeSet::from(["x".to_string()])).unwrap();
        let p = SignedLabel::plus("*");
        let m = SignedLabel::minus("*");
        assert!(dd.accepts_word(&[p.clone(), m.clone(), m.clone()]));
        assert!(!dd.accepts_word(&[p.clone(), p.clone()]));
        assert!(!dd.accepts_word(&[m]));
        assert!(build_rt_defect_data(&BTreeSet::new()).is_err());
    }

    #[test]
    fn canonical_rotation_is_minimal_and_idempotent() {
        let w = CyclicWord::new(vec![SignedLabel::plus("b"), SignedLabel::minus("a"), SignedLabel::plus("a")]);
        assert_eq!(w.canonical_rotation[0], SignedLabel::plus("a"));
        assert_eq!(w.canonical().canonical_rotation, w.canonical_rotation);
        assert_eq!(w, w.rotated(2));
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let r = GroupTable::new(vec!["1".into(), "g".into()], vec![vec![0, 1], vec![1, 1]]);
        assert!(matches!(r, Err(Error::Group(_))));
    }

    #[test]
    fn enumerated_group_words_are_canonical_and_accepted() {
        let dd = build_group_defect_data(&GroupTable::cyclic(2)).unwrap();
        let els = dd.d1_elements(3);
        assert!(!els.is_empty());
        for el in els {
            let D1Image::Word(w) = el.image else { panic!() };
            assert_eq!(w.entries, w.canonical_rotation);
            assert!(dd.accepts_word(&w.entries));
        }
    }

    #[test]
    fn parses_files() {
        let dd = DefectData::from_json(r#"{"d1": {"family": "group", "group": "z3"}}"#).unwrap();
        assert_eq!(dd.d2.len(), 3);
        let dd = DefectData::from_json(
            r#"{"d3": ["u"], "d2": {"a": {"s": "u", "t": "u"}}, "d1": {"x": {"word": [["a", "+"], ["a", "-"]]}}}"#,
        )
        .unwrap();
        assert!(validate_defect_data(&dd).is_clean());
    }
}
