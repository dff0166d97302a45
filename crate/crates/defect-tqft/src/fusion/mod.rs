//! Graded spherical fusion categories in skeletal, multiplicity-free form.
//!
//! Objects are indexed by simple indices. A vertex of a graph on the sphere
//! with outgoing labels `y_1, …, y_m` in counter-clockwise order carries a
//! vector of `Hom(1, y_1 ⊗ ⋯ ⊗ y_m)`, spanned by left-combed fusion trees.

mod graph;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::defect_data::{GroupTable, RawGroup, Sign};
use crate::error::{Error, Result};
use crate::report::ValidationReport;

pub use graph::{evaluate_sphere_graph, ColoredSphereGraph, GraphDart, SphereGraphValue};

pub type CMatrix = DMatrix<Complex64>;

/// Default tolerance for coherence checks.
pub const COHERENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Simple {
    pub id: String,
    pub grade: usize,
    pub dual: usize,
    pub qdim: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionCategoryData {
    pub name: String,
    pub group: GroupTable,
    pub simples: Vec<Simple>,
    pub unit: usize,
    /// `fusion_mult[a][b][c]` is the multiplicity of `c` in `a ⊗ b`.
    pub fusion_mult: Vec<Vec<Vec<u8>>>,
    /// `F^{abc}_d[e, f]` keyed by `[a, b, c, d, e, f]`, with `e ∈ a⊗b`, `f ∈ b⊗c`.
    pub f_symbols: BTreeMap<[usize; 6], Complex64>,
    pub pivotal: Vec<Complex64>,
}

/// Word of simples with signs; `(x, −)` stands for the dual of `x`.
pub type SignedSimpleWord = Vec<(usize, Sign)>;

/// Basis of `Hom(1, y_1 ⊗ ⋯ ⊗ y_m)` by left-combed trees.
///
/// A tree for `m ≥ 3` is the list of internal labels `a_2, …, a_{m-2}` with
/// `a_1 = y_1`, `a_k ∈ a_{k-1} ⊗ y_k` and `1 ∈ a_{m-2} ⊗ y_{m-1} ⊗ y_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpaceBasis {
    pub word: SignedSimpleWord,
    pub trees: Vec<Vec<usize>>,
    pub dim: usize,
}

/// Evaluation pairing between the tail and head bases of an edge.
#[derive(Debug, Clone)]
pub struct EdgePairing {
    pub tail: HomSpaceBasis,
    pub head: HomSpaceBasis,
    /// `ev[(i, j)]` pairs tail tree `i` with head tree `j`.
    pub ev: CMatrix,
    /// Inverse of `ev`, indexed `(head, tail)`.
    pub coev: CMatrix,
}

const BUNDLED: &[(&str, &str)] = &[
    ("vec", include_str!("../../data/categories/vec.json")),
    ("vec_z2", include_str!("../../data/categories/vec_z2.json")),
    ("vec_z3", include_str!("../../data/categories/vec_z3.json")),
    ("vec_z2_graded", include_str!("../../data/categories/vec_z2_graded.json")),
    ("vec_z3_graded", include_str!("../../data/categories/vec_z3_graded.json")),
    ("vec_z2xz2", include_str!("../../data/categories/vec_z2xz2.json")),
    ("fibonacci", include_str!("../../data/categories/fibonacci.json")),
    ("fibonacci_perturbed", include_str!("../../data/categories/fibonacci_perturbed.json")),
];

pub fn bundled_category_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

#[derive(Debug, Deserialize)]
struct RawSimple {
    id: String,
    grade: String,
    dual: String,
    qdim: f64,
}

#[derive(Debug, Deserialize)]
struct RawF {
    index: [String; 6],
    value: (f64, f64),
}

#[derive(Debug, Deserialize)]
struct RawCategory {
    #[serde(default)]
    name: String,
    group: RawGroup,
    simples: Vec<RawSimple>,
    unit: String,
    fusion: Vec<[String; 3]>,
    #[serde(rename = "F")]
    f: Vec<RawF>,
    pivotal: BTreeMap<String, (f64, f64)>,
}

impl FusionCategoryData {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawCategory = serde_json::from_str(text)?;
        let group = raw.group.build()?;
        let ids: Vec<String> = raw.simples.iter().map(|s| s.id.clone()).collect();
        let find = |id: &str| {
            ids.iter()
                .position(|x| x == id)
                .ok_or_else(|| Error::Category(format!("unknown simple {id}")))
        };
        let mut simples = Vec::with_capacity(ids.len());
        for s in &raw.simples {
            let grade = group
                .index_of(&s.grade)
                .ok_or_else(|| Error::Category(format!("unknown grade {} of {}", s.grade, s.id)))?;
            simples.push(Simple { id: s.id.clone(), grade, dual: find(&s.dual)?, qdim: s.qdim });
        }
        let n = simples.len();
        let mut fusion_mult = vec![vec![vec![0u8; n]; n]; n];
        for [a, b, c] in &raw.fusion {
            let (a, b, c) = (find(a)?, find(b)?, find(c)?);
            fusion_mult[a][b][c] += 1;
            if fusion_mult[a][b][c] > 1 {
                return Err(Error::Category(format!(
                    "fusion multiplicity of {} in {}⊗{} exceeds 1",
                    ids[c], ids[a], ids[b]
                )));
            }
        }
        let mut f_symbols = BTreeMap::new();
        for entry in &raw.f {
            let mut key = [0usize; 6];
            for (k, id) in entry.index.iter().enumerate() {
                key[k] = find(id)?;
            }
            if f_symbols.insert(key, Complex64::new(entry.value.0, entry.value.1)).is_some() {
                return Err(Error::Category(format!("duplicate F entry {:?}", entry.index)));
            }
        }
        let mut pivotal = vec![Complex64::new(1.0, 0.0); n];
        for (id, (re, im)) in &raw.pivotal {
            pivotal[find(id)?] = Complex64::new(*re, *im);
        }
        let unit = find(&raw.unit)?;
        Ok(Self { name: raw.name, group, simples, unit, fusion_mult, f_symbols, pivotal })
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Category(format!("no bundled category named {name}")))?;
        Self::from_json(text)
    }

    /// Reads a category file, falling back to the bundled name.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match std::fs::read_to_string(name_or_path) {
            Ok(text) => Self::from_json(&text),
            Err(_) => Self::bundled(name_or_path),
        }
    }

    pub fn rank(&self) -> usize {
        self.simples.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.simples.iter().position(|s| s.id == id)
    }

    pub fn dual(&self, a: usize) -> usize {
        self.simples[a].dual
    }

    pub fn qdim(&self, a: usize) -> f64 {
        self.simples[a].qdim
    }

    pub fn grade(&self, a: usize) -> usize {
        self.simples[a].grade
    }

    pub fn signed(&self, a: usize, sign: Sign) -> usize {
        if sign.is_plus() {
            a
        } else {
            self.dual(a)
        }
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u8 {
        self.fusion_mult[a][b][c]
    }

    /// Whether `1 ∈ a ⊗ b ⊗ c`.
    pub fn admissible(&self, a: usize, b: usize, c: usize) -> bool {
        self.n(a, b, self.dual(c)) > 0
    }

    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Complex64 {
        self.f_symbols.get(&[a, b, c, d, e, f]).copied().unwrap_or_default()
    }

    /// Coefficient of the I-to-H move used by the graph evaluator.
    ///
    /// Vertices `(m, a, b)` and `(m*, c, d)` joined along `m` become
    /// `(n, b, c)` and `(n*, d, a)` joined along `n`.
    pub fn fsym(&self, a: usize, b: usize, c: usize, d: usize, m: usize, n: usize) -> Complex64 {
        self.f(a, b, c, self.dual(d), self.dual(m), self.dual(n))
    }

    pub fn simples_of_grade(&self, g: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&a| self.grade(a) == g).collect()
    }

    pub fn neutral_simples(&self) -> Vec<usize> {
        self.simples_of_grade(self.group.identity)
    }

    /// Whether `F^{abc}_d[e, f]` is a legitimate index.
    pub fn f_admissible(&self, k: [usize; 6]) -> bool {
        let [a, b, c, d, e, f] = k;
        self.n(a, b, e) > 0 && self.n(e, c, d) > 0 && self.n(b, c, f) > 0 && self.n(a, f, d) > 0
    }
}

/// Σ over neutral simples of `qdim²`.
pub fn global_dimension_neutral(cat: &FusionCategoryData) -> f64 {
    cat.neutral_simples().iter().map(|&a| cat.qdim(a).powi(2)).sum()
}

/// Multiplicity of the unit in the iterated tensor product of the word.
pub fn hom_dimension(cat: &FusionCategoryData, w: &[(usize, Sign)]) -> usize {
    let n = cat.rank();
    let mut v = vec![0usize; n];
    v[cat.unit] = 1;
    for &(x, s) in w {
        let y = cat.signed(x, s);
        let mut next = vec![0usize; n];
        for a in 0..n {
            if v[a] == 0 {
                continue;
            }
            for c in 0..n {
                next[c] += v[a] * cat.n(a, y, c) as usize;
            }
        }
        v = next;
    }
    v[cat.unit]
}

/// Trees of the left comb for the outgoing labels `ys`.
pub(crate) fn comb_trees(cat: &FusionCategoryData, ys: &[usize]) -> Vec<Vec<usize>> {
    let m = ys.len();
    match m {
        0 => return vec![vec![]],
        1 => return if ys[0] == cat.unit { vec![vec![]] } else { vec![] },
        2 => return if ys[1] == cat.dual(ys[0]) { vec![vec![]] } else { vec![] },
        _ => {}
    }
    let mut out = Vec::new();
    let mut stack = vec![(ys[0], Vec::<usize>::new())];
    while let Some((acc, labels)) = stack.pop() {
        let k = labels.len() + 2;
        if k == m - 1 {
            if cat.admissible(acc, ys[m - 2], ys[m - 1]) {
                out.push(labels);
            }
            continue;
        }
        for next in (0..cat.rank()).rev() {
            if cat.n(acc, ys[k - 1], next) > 0 {
                let mut l = labels.clone();
                l.push(next);
                stack.push((next, l));
            }
        }
    }
    out
}

pub fn hom_basis(cat: &FusionCategoryData, w: &[(usize, Sign)]) -> HomSpaceBasis {
    let ys: Vec<usize> = w.iter().map(|&(x, s)| cat.signed(x, s)).collect();
    let trees = comb_trees(cat, &ys);
    HomSpaceBasis { word: w.to_vec(), dim: trees.len(), trees }
}

/// Reverses a word and flips its signs.
pub fn reverse_simple_word(w: &[(usize, Sign)]) -> SignedSimpleWord {
    w.iter().rev().map(|&(x, s)| (x, s.flip())).collect()
}

pub fn invert(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degeneracy("pairing matrix is singular".into()))?;
    let check = (m * &inv - CMatrix::identity(m.nrows(), m.nrows())).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 || check > 1e-8 {
        return Err(Error::Degeneracy(format!("pairing matrix is numerically singular (residual {check:e})")));
    }
    Ok(inv)
}

/// The edge pairing: a melon graph with the tail comb at one vertex and
/// the head comb (reversed word) at the other.
pub fn edge_pairing(cat: &FusionCategoryData, w: &[(usize, Sign)]) -> Result<EdgePairing> {
    let m = w.len();
    let mut g = ColoredSphereGraph::new();
    let mut tails = Vec::with_capacity(m);
    let mut heads = Vec::with_capacity(m);
    for &(x, s) in w {
        let (t, h) = g.add_edge(x);
        if s.is_plus() {
            tails.push(t);
            heads.push(h);
        } else {
            tails.push(h);
            heads.push(t);
        }
    }
    g.add_vertex(tails);
    heads.reverse();
    g.add_vertex(heads);
    let value = evaluate_sphere_graph(cat, &g)?;
    let tail = value.bases[0].clone();
    let head = value.bases[1].clone();
    let ev = CMatrix::from_row_slice(tail.dim, head.dim, &value.values);
    let coev = invert(&ev)?;
    Ok(EdgePairing { tail, head, ev, coev })
}

fn max_norm(it: impl Iterator<Item = Complex64>) -> f64 {
    it.map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks grading, duals, unit, dimensions, pentagon, triangle, sphericality
/// and the rotation gauge assumed by the graph evaluator.
pub fn validate_category(cat: &FusionCategoryData, tol: f64) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let n = cat.rank();
    let g = &cat.group;
    let u = cat.unit;
    let one = Complex64::new(1.0, 0.0);

    if cat.dual(u) != u || cat.grade(u) != g.identity || (cat.qdim(u) - 1.0).abs() > tol {
        rep.push("unit", "unit must be self-dual, neutral and of dimension 1");
    }
    for a in 0..n {
        let id = &cat.simples[a].id;
        if cat.dual(cat.dual(a)) != a {
            rep.push(format!("dual {id}"), "dual is not an involution");
        }
        if cat.grade(cat.dual(a)) != g.inv(cat.grade(a)) {
            rep.push(format!("dual {id}"), "dual does not invert the grade");
        }
        for b in 0..n {
            if cat.n(u, a, b) != (a == b) as u8 || cat.n(a, u, b) != (a == b) as u8 {
                rep.push(format!("unit {id}"), "unit does not act trivially");
            }
            let expect = (b == cat.dual(a)) as u8;
            if cat.n(a, b, u) != expect {
                rep.push(format!("dual {id}"), "unit multiplicity in a⊗b must be δ(b, a*)");
            }
            for c in 0..n {
                if cat.n(a, b, c) > 0 && cat.grade(c) != g.mul(cat.grade(a), cat.grade(b)) {
                    rep.push(format!("grading {a},{b},{c}"), "fusion does not respect the grading");
                }
            }
        }
    }

    let mut qd = 0.0f64;
    let mut ring = 0.0f64;
    for a in 0..n {
        qd = qd.max((cat.qdim(a) - cat.qdim(cat.dual(a))).abs());
        for b in 0..n {
            let sum: f64 = (0..n).map(|c| cat.n(a, b, c) as f64 * cat.qdim(c)).sum();
            ring = ring.max((cat.qdim(a) * cat.qdim(b) - sum).abs());
        }
    }
    rep.measure("qdim_dual", qd, tol);
    rep.measure("qdim_character", ring, tol);

    for (k, _) in &cat.f_symbols {
        if !cat.f_admissible(*k) {
            rep.push(format!("F {k:?}"), "F entry at an inadmissible index");
        }
    }
    let mut idx = [0usize; 6];
    loop {
        if cat.f_admissible(idx) && !cat.f_symbols.contains_key(&idx) {
            rep.push(format!("F {idx:?}"), "missing F entry");
        }
        if !crate::defect_data::odometer(&mut idx, n) {
            break;
        }
    }

    // F^{fcd}_e[g,l] F^{abl}_e[f,k] = Σ_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]
    let mut pent = 0.0f64;
    let mut idx = [0usize; 9];
    loop {
        let [a, b, c, d, e, f, gg, k, l] = idx;
        if cat.n(a, b, f) > 0 && cat.n(f, c, gg) > 0 && cat.n(gg, d, e) > 0 {
            let lhs = cat.f(f, c, d, e, gg, l) * cat.f(a, b, l, e, f, k);
            let rhs: Complex64 = (0..n)
                .map(|h| cat.f(a, b, c, gg, f, h) * cat.f(a, h, d, e, gg, k) * cat.f(b, c, d, k, h, l))
                .sum();
            pent = pent.max((lhs - rhs).norm());
        }
        if !crate::defect_data::odometer(&mut idx, n) {
            break;
        }
    }
    rep.measure("pentagon", pent, tol);

    let tri = max_norm(
        cat.f_symbols
            .iter()
            .filter(|(k, _)| k[0] == u || k[1] == u || k[2] == u)
            .map(|(_, v)| *v - one),
    );
    rep.measure("triangle", tri, tol);

    let mut sph = 0.0f64;
    for a in 0..n {
        let ad = cat.dual(a);
        let left = cat.f(a, ad, a, a, u, u);
        let right = cat.f(ad, a, ad, ad, u, u);
        if left.norm() < tol || right.norm() < tol {
            rep.push(format!("sphericality {}", cat.simples[a].id), "vanishing loop coefficient");
            continue;
        }
        let l = cat.pivotal[a] / left;
        let r = cat.pivotal[ad] / right;
        sph = sph.max((l - cat.qdim(a)).norm()).max((r - cat.qdim(ad)).norm()).max((l - r).norm());
    }
    rep.measure("sphericality", sph, tol);

    let mut gauge = 0.0f64;
    let mut idx = [0usize; 5];
    loop {
        let [a, b, c, d, m] = idx;
        if cat.admissible(m, a, b) && cat.admissible(cat.dual(m), c, d) {
            for n2 in 0..n {
                let sym = cat.fsym(c, d, a, b, cat.dual(m), cat.dual(n2));
                gauge = gauge.max((cat.fsym(a, b, c, d, m, n2) - sym).norm());
            }
            for m2 in 0..n {
                if !(cat.admissible(m2, a, b) && cat.admissible(cat.dual(m2), c, d)) {
                    continue;
                }
                let s: Complex64 =
                    (0..n).map(|h| cat.fsym(a, b, c, d, m, h) * cat.fsym(b, c, d, a, h, cat.dual(m2))).sum();
                let want = if m == m2 { one } else { Complex64::default() };
                gauge = gauge.max((s - want).norm());
            }
        }
        if !crate::defect_data::odometer(&mut idx, n) {
            break;
        }
    }
    rep.measure("gauge", gauge, tol);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(cat: &FusionCategoryData, spec: &[(&str, Sign)]) -> SignedSimpleWord {
        spec.iter().map(|(id, s)| (cat.index_of(id).unwrap(), *s)).collect()
    }

    #[test]
    fn bundled_categories_load() {
        for name in bundled_category_names() {
            let cat = FusionCategoryData::bundled(name).unwrap();
            assert!(cat.rank() >= 1, "{name}");
        }
    }

    #[test]
    fn multiplicities_above_one_are_rejected() {
        let text = r#"{"group":"trivial","simples":[{"id":"1","grade":"1","dual":"1","qdim":1}],
            "unit":"1","fusion":[["1","1","1"],["1","1","1"]],"F":[],"pivotal":{}}"#;
        assert!(matches!(FusionCategoryData::from_json(text), Err(Error::Category(_))));
    }

    #[test]
    fn bundled_valid_categories_are_clean() {
        for name in ["vec", "vec_z2", "vec_z3", "vec_z2_graded", "vec_z2xz2", "fibonacci"] {
            let cat = FusionCategoryData::bundled(name).unwrap();
            let rep = validate_category(&cat, COHERENCE_TOL);
            assert!(rep.is_clean(), "{name}: {:?}", rep.violations);
            assert!(rep.max_residual("pentagon").unwrap() <= COHERENCE_TOL);
        }
    }

    #[test]
    fn fibonacci_global_dimension() {
        let fib = FusionCategoryData::bundled("fibonacci").unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((global_dimension_neutral(&fib) - (1.0 + phi * phi)).abs() < 1e-12);
    }

    #[test]
    fn perturbed_fibonacci_fails_the_pentagon() {
        let cat = FusionCategoryData::bundled("fibonacci_perturbed").unwrap();
        let rep = validate_category(&cat, COHERENCE_TOL);
        assert!(!rep.is_clean());
        assert!(rep.max_residual("pentagon").unwrap() > 1e-3);
    }

    #[test]
    fn neutral_dimensions() {
        let z2g = FusionCategoryData::bundled("vec_z2_graded").unwrap();
        let z2 = FusionCategoryData::bundled("vec_z2").unwrap();
        assert_eq!(global_dimension_neutral(&z2g), 1.0);
        assert_eq!(global_dimension_neutral(&z2), 2.0);
    }

    #[test]
    fn hom_spaces_of_small_words() {
        let z2 = FusionCategoryData::bundled("vec_z2").unwrap();
        assert_eq!(hom_dimension(&z2, &word(&z2, &[("g", Sign::Plus), ("g", Sign::Plus)])), 1);
        assert_eq!(hom_dimension(&z2, &word(&z2, &[("g", Sign::Plus)])), 0);
        assert!(hom_basis(&z2, &word(&z2, &[("g", Sign::Plus)])).trees.is_empty());
        let fib = FusionCategoryData::bundled("fibonacci").unwrap();
        let four = word(&fib, &[("tau", Sign::Plus); 4]);
        let basis = hom_basis(&fib, &four);
        assert_eq!(basis.dim, 2);
        assert_eq!(basis.trees, vec![vec![fib.index_of("1").unwrap()], vec![fib.index_of("tau").unwrap()]]);
    }

    #[test]
    fn pairings_invert() {
        let z2 = FusionCategoryData::bundled("vec_z2").unwrap();
        let p = edge_pairing(&z2, &word(&z2, &[("g", Sign::Plus), ("g", Sign::Plus)])).unwrap();
        assert_eq!(p.ev.shape(), (1, 1));
        assert!((p.ev[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let fib = FusionCategoryData::bundled("fibonacci").unwrap();
        let p = edge_pairing(&fib, &word(&fib, &[("tau", Sign::Plus), ("tau", Sign::Plus)])).unwrap();
        assert_eq!(p.ev.shape(), (1, 1));
        assert!(p.ev[(0, 0)].norm() > 1e-3);
        let empty = edge_pairing(&z2, &word(&z2, &[("g", Sign::Plus)])).unwrap();
        assert_eq!(empty.ev.shape(), (0, 0));
    }
}
