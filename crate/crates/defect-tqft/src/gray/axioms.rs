//! Axiom and model checks over enumerated small diagrams.

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use super::three::{one_morphism_grade, GrayModel, ThreeMorphism};
use super::{
    check_diagram_identities, fold, hash_dual, unfold, vertex_events, EventKind, LayerEvent, OneMorphismWord,
    TwoMorphismDiagram,
};
use crate::defect_data::{DefectData, SignedLabel};
use crate::error::Result;
use crate::report::ValidationReport;
use crate::tqft_engines::Engine;

#[derive(Debug, Clone, Serialize)]
pub struct AxiomConfig {
    pub max_word: usize,
    pub max_layers: usize,
    /// Longest d1 word used for vertex events.
    pub max_vertex_word: usize,
    /// Number of sampled instances per axiom.
    pub sample: usize,
    pub seed: u64,
    pub tol: f64,
    /// Longest word in the 1-morphism invariant check.
    pub invariant_len: usize,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        Self { max_word: 2, max_layers: 2, max_vertex_word: 4, sample: 60, seed: 7, tol: 1e-9, invariant_len: 4 }
    }
}

/// Words of length at most `max_len`, the empty word at every object.
pub fn small_words(dd: &DefectData, max_len: usize) -> Vec<OneMorphismWord> {
    let letters: Vec<SignedLabel> =
        dd.d2.keys().flat_map(|l| [SignedLabel::plus(l.clone()), SignedLabel::minus(l.clone())]).collect();
    let mut out: Vec<OneMorphismWord> = dd.d3.iter().map(OneMorphismWord::identity).collect();
    let mut layer: Vec<Vec<SignedLabel>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for x in &letters {
                let mut v = w.clone();
                v.push(x.clone());
                if let Ok(word) = OneMorphismWord::new(dd, v.clone()) {
                    out.push(word);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    out
}

/// Every diagram with at most `max_layers` layers whose slices have at
/// most `max_word` entries, built from vertex, cap and cup events.
pub fn small_diagrams(dd: &DefectData, cfg: &AxiomConfig) -> Vec<TwoMorphismDiagram> {
    let mut events: Vec<EventKind> = vertex_events(dd, cfg.max_vertex_word)
        .into_iter()
        .filter(|e| e.input().len() <= cfg.max_word && e.output().len() <= cfg.max_word)
        .collect();
    for l in dd.d2.keys() {
        for x in [SignedLabel::plus(l.clone()), SignedLabel::minus(l.clone())] {
            events.push(EventKind::Cap { label: x.clone() });
            events.push(EventKind::Cup { label: x });
        }
    }
    let mut all: Vec<TwoMorphismDiagram> = small_words(dd, cfg.max_word).iter().map(TwoMorphismDiagram::identity).collect();
    let mut frontier = all.clone();
    for _ in 0..cfg.max_layers {
        let mut next = Vec::new();
        for d in &frontier {
            let here = &d.target.entries;
            for e in &events {
                let (a, b) = (e.input(), e.output());
                if a.len() > here.len() || here.len() + b.len() - a.len() > cfg.max_word {
                    continue;
                }
                for p in 0..=here.len() - a.len() {
                    if here[p..p + a.len()] != a[..] {
                        continue;
                    }
                    let layer = LayerEvent { kind: e.clone(), left: here[..p].to_vec(), right: here[p + a.len()..].to_vec() };
                    let mut layers = d.layers.clone();
                    layers.push(layer);
                    if let Ok(x) = TwoMorphismDiagram::from_layers(d.source.clone(), layers) {
                        if x.check(dd).is_ok() {
                            next.push(x);
                        }
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

struct Checker<'m, 'c> {
    model: &'m GrayModel<'c>,
    rep: ValidationReport,
    tol: f64,
}

impl Checker<'_, '_> {
    fn compare(&mut self, name: &str, lhs: Result<ThreeMorphism>, rhs: Result<ThreeMorphism>) {
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => {
                let d = self.model.distance(&a, &b);
                self.rep.measure(name, d, self.tol);
            }
            (Err(e), _) | (_, Err(e)) => self.rep.push(name, e.to_string()),
        }
    }
}

type D = TwoMorphismDiagram;

/// The τ of a composite word, rebuilt from the τ of its parts with the
/// Zorro composite of the left part completed first.
fn triangulator_of_composite(m: &GrayModel<'_>, a: &OneMorphismWord, b: &OneMorphismWord) -> Result<ThreeMorphism> {
    let ab = a.then(b)?;
    let l1 = D::whisker_right(&fold(a), &ab)?;
    let l4 = D::whisker_left(&ab, &unfold(b))?;
    let x1 = D::whisker_left(a, &fold(b))?;
    let y1 = D::whisker_right(&unfold(a), b)?;
    let f1 = m.otimes(&m.identity(&l4)?, &m.otimes(&m.tensorator_inv(&x1, &y1)?, &m.identity(&l1)?)?)?;
    let f2 = m.otimes(&m.whisker_left(a, &m.triangulator(b)?)?, &m.whisker_right(&m.triangulator(a)?, b)?)?;
    m.circ(&f2, &f1)
}

/// The right side of the twist-of-fold identity, which equals `1_{fold α}`.
fn twisted_fold(m: &GrayModel<'_>, a: &OneMorphismWord) -> Result<ThreeMorphism> {
    let ah = hash_dual(a);
    let f = fold(a);
    let s1 = m.otimes(&m.whisker_right(&m.triangulator_inv(a)?, &ah)?, &m.identity(&f)?)?;
    let middle = D::whisker_left(a, &D::whisker_right(&unfold(a), &ah)?)?;
    let s2 = m.otimes(&m.identity(&middle)?, &m.tensorator(&f, &f)?)?;
    let s3 = m.otimes(&m.whisker_left(a, &m.dagger(&m.triangulator_inv(&ah)?)?)?, &m.identity(&f)?)?;
    m.circ(&s3, &m.circ(&s2, &s1)?)
}

fn morphisms(m: &GrayModel<'_>, x: &D, y: &D, rng: &mut StdRng) -> Result<Vec<ThreeMorphism>> {
    if m.engine == Engine::Statesum {
        return Ok(vec![m.distinguished(x, y)]);
    }
    let mut b = m.basis(x, y)?;
    b.shuffle(rng);
    b.truncate(2);
    Ok(b)
}

/// Residuals of the Gray category and duality axioms on sampled small
/// diagrams. Clean iff every residual is within `cfg.tol`.
pub fn check_gray_axioms(model: &GrayModel<'_>, dd: &DefectData, cfg: &AxiomConfig) -> ValidationReport {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut c = Checker { model, rep: ValidationReport::new(), tol: cfg.tol };
    let m = model;
    let diagrams = small_diagrams(dd, cfg);
    let words = small_words(dd, cfg.max_word);
    let short: Vec<OneMorphismWord> = small_words(dd, 1);
    let mut by_source: HashMap<&OneMorphismWord, Vec<&D>> = HashMap::new();
    let mut by_ends: HashMap<(&OneMorphismWord, &OneMorphismWord), Vec<&D>> = HashMap::new();
    for d in &diagrams {
        by_source.entry(&d.source).or_default().push(d);
        by_ends.entry((&d.source, &d.target)).or_default().push(d);
    }
    let pick = |rng: &mut StdRng| diagrams.choose(rng).expect("diagrams").clone();
    let pick_word = |rng: &mut StdRng| words.choose(rng).expect("words").clone();

    let sample: Vec<D> = (0..cfg.sample.min(24)).map(|_| pick(&mut rng)).collect();
    let diag = check_diagram_identities(&sample);
    c.rep.measure("diagram identities", diag.violations.len() as f64, 0.0);

    for _ in 0..cfg.sample {
        let (x, y, a) = (pick(&mut rng), pick(&mut rng), pick_word(&mut rng));
        let ida = D::identity(&a);
        c.compare("unit tensorator", m.tensorator(&x, &ida), m.tensorator(&x, &ida).and_then(|s| m.identity(&s.source)));
        c.compare("unit tensorator", m.tensorator(&ida, &y), m.tensorator(&ida, &y).and_then(|s| m.identity(&s.source)));

        // factorisation through ⊗ in either argument
        if let Some(&y2) = by_source.get(&y.target).and_then(|v| v.choose(&mut rng)) {
            let lhs = y2.otimes(&y).and_then(|yy| m.tensorator(&x, &yy));
            let rhs = (|| {
                let up = m.otimes(&m.identity(&D::whisker_left(&x.target, y2)?)?, &m.tensorator(&x, &y)?)?;
                let low = m.otimes(&m.tensorator(&x, y2)?, &m.identity(&D::whisker_left(&x.source, &y)?)?)?;
                m.circ(&up, &low)
            })();
            c.compare("tensorator of a ⊗ in the right argument", lhs, rhs);
        }
        if let Some(&x2) = by_source.get(&x.target).and_then(|v| v.choose(&mut rng)) {
            let lhs = x2.otimes(&x).and_then(|xx| m.tensorator(&xx, &y));
            let rhs = (|| {
                let up = m.otimes(&m.tensorator(x2, &y)?, &m.identity(&D::whisker_right(&x, &y.source)?)?)?;
                let low = m.otimes(&m.identity(&D::whisker_right(x2, &y.target)?)?, &m.tensorator(&x, &y)?)?;
                m.circ(&up, &low)
            })();
            c.compare("tensorator of a ⊗ in the left argument", lhs, rhs);
        }

        // whiskered arguments
        let wa = D::whisker_right(&x, &a).and_then(|xa| m.tensorator(&xa, &y));
        let wb = D::whisker_left(&a, &y).and_then(|ay| m.tensorator(&x, &ay));
        c.compare("tensorator with a whisker between", wa, wb);
        let lhs = D::whisker_left(&a, &x).and_then(|ax| m.tensorator(&ax, &y));
        c.compare("tensorator whiskered on the left", lhs, m.tensorator(&x, &y).and_then(|s| m.whisker_left(&a, &s)));
        let lhs = D::whisker_right(&y, &a).and_then(|ya| m.tensorator(&x, &ya));
        c.compare("tensorator whiskered on the right", lhs, m.tensorator(&x, &y).and_then(|s| m.whisker_right(&s, &a)));

        // invertibility
        if let Ok(s) = m.tensorator(&x, &y) {
            let si = m.tensorator_inv(&x, &y);
            c.compare("tensorator invertibility", si.as_ref().map_err(Clone::clone).and_then(|si| m.circ(si, &s)), m.identity(&s.source));
            c.compare("tensorator invertibility", si.and_then(|si| m.circ(&s, &si)), m.identity(&s.target));
        }

        // naturality against basis 3-morphisms
        let xs = &by_ends[&(&x.source, &x.target)];
        let ys = &by_ends[&(&y.source, &y.target)];
        let (x2, y2) = (*xs.choose(&mut rng).expect("x"), *ys.choose(&mut rng).expect("y"));
        let phis = morphisms(m, &x, x2, &mut rng);
        let psis = morphisms(m, &y, y2, &mut rng);
        match (phis, psis) {
            (Ok(phis), Ok(psis)) => {
                for phi in &phis {
                    for psi in &psis {
                        let lhs = m.box_compose(phi, psi).and_then(|b| m.circ(&m.tensorator(x2, y2)?, &b));
                        let rhs = (|| {
                            let other = m.otimes(&m.whisker_left(&x2.target, psi)?, &m.whisker_right(phi, &y.source)?)?;
                            m.circ(&other, &m.tensorator(&x, &y)?)
                        })();
                        c.compare("tensorator naturality", lhs, rhs);
                    }
                }
            }
            (Err(e), _) | (_, Err(e)) => c.rep.push("tensorator naturality", e.to_string()),
        }
    }

    for _ in 0..cfg.sample * 2 {
        let x = &pick(&mut rng);
        let zorro = (|| -> Result<_> {
            let (coev, ev, one) = (m.coev(x)?, m.ev(x)?, m.identity(x)?);
            let one_d = m.identity(&x.dagger())?;
            let first = m.circ(&m.otimes(&one, &ev)?, &m.otimes(&coev, &one)?)?;
            let second = m.circ(&m.otimes(&ev, &one_d)?, &m.otimes(&one_d, &coev)?)?;
            Ok((first, one, second, one_d))
        })();
        match zorro {
            Ok((first, one, second, one_d)) => {
                c.compare("Zorro move for coev and ev", Ok(first), Ok(one));
                c.compare("Zorro move for ev and coev", Ok(second), Ok(one_d));
            }
            Err(e) => c.rep.push("Zorro moves", e.to_string()),
        }
        if m.engine == Engine::Triv {
            if let Ok(b) = morphisms(m, x, x, &mut rng) {
                for phi in b {
                    c.compare("† on 3-morphisms is an involution", m.dagger(&phi).and_then(|d| m.dagger(&d)), Ok(phi));
                }
            }
        }
    }

    for a in &words {
        let t = m.triangulator(a);
        let ti = m.triangulator_inv(a);
        if let (Ok(t), Ok(ti)) = (&t, &ti) {
            c.compare("triangulator invertibility", m.circ(t, ti), m.identity(&D::identity(a)));
            c.compare("triangulator invertibility", m.circ(ti, t), m.identity(&t.source));
        } else {
            c.rep.push("triangulator invertibility", format!("no triangulator for a word of length {}", a.len()));
        }
        c.compare("twist of fold", twisted_fold(m, a), m.identity(&fold(a)));
        for b in &short {
            if a.target != b.source {
                continue;
            }
            let lhs = a.then(b).and_then(|ab| m.triangulator(&ab));
            c.compare("triangulator of a composite word", lhs, triangulator_of_composite(m, a, b));
        }
    }
    c.rep
}

/// Cross-checks the model against independent computations: for the
/// trivial engine hom dimensions against glued spheres and composition
/// laws; for the state-sum engine one-dimensional hom spaces, non-zero
/// distinguished elements and the 1-morphism invariant.
pub fn check_model_equivalence(model: &GrayModel<'_>, dd: &DefectData, cfg: &AxiomConfig) -> ValidationReport {
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut c = Checker { model, rep: ValidationReport::new(), tol: cfg.tol };
    let m = model;
    let diagrams = small_diagrams(dd, cfg);
    let words = small_words(dd, cfg.max_word);
    let mut by_ends: HashMap<(&OneMorphismWord, &OneMorphismWord), Vec<&D>> = HashMap::new();
    for d in &diagrams {
        by_ends.entry((&d.source, &d.target)).or_default().push(d);
    }
    for _ in 0..cfg.sample {
        let x = diagrams.choose(&mut rng).expect("diagrams");
        let y = *by_ends[&(&x.source, &x.target)].choose(&mut rng).expect("parallel");
        let model_dim = m.hom_space(x, y).map(|h| h.dim);
        let sphere_dim = m.sphere_dimension(x, y);
        match (model_dim, sphere_dim, m.engine) {
            (Ok(a), Ok(b), Engine::Triv) => c.rep.measure("hom dimension against the glued sphere", a.abs_diff(b) as f64, 0.0),
            (Ok(_), Ok(b), Engine::Statesum) => {
                c.rep.measure("hom spaces are lines", b.abs_diff(1) as f64, 0.0);
                match m.distinguished_norm(x, y) {
                    Ok(n) if n > cfg.tol => {}
                    Ok(n) => c.rep.push("distinguished element", format!("norm {n:e}")),
                    Err(e) => c.rep.push("distinguished element", e.to_string()),
                }
            }
            (Err(e), _, _) | (_, Err(e), _) => c.rep.push("hom dimension", e.to_string()),
        }
        if m.engine == Engine::Triv {
            let z = *by_ends[&(&x.source, &x.target)].choose(&mut rng).expect("parallel");
            if let (Ok(f), Ok(g)) = (m.basis(x, y), m.basis(y, z)) {
                if let (Some(f), Some(g)) = (f.choose(&mut rng), g.choose(&mut rng)) {
                    let a = words.choose(&mut rng).expect("words");
                    if a.target == x.source.source {
                        let lhs = m.circ(g, f).and_then(|gf| m.whisker_left(a, &gf));
                        let rhs = (|| m.circ(&m.whisker_left(a, g)?, &m.whisker_left(a, f)?))();
                        c.compare("whiskering is functorial", lhs, rhs);
                    }
                    let lhs = (|| m.otimes(&m.circ(g, f)?, &m.circ(g, f)?))();
                    let rhs = (|| m.circ(&m.otimes(g, g)?, &m.otimes(f, f)?))();
                    if x.target == x.source {
                        c.compare("interchange in a hom 2-category", lhs, rhs);
                    }
                }
            }
        }
    }
    if m.engine == Engine::Statesum {
        for a in small_words(dd, cfg.invariant_len).iter().filter(|a| !a.is_empty()) {
            let expected = m.cat.group.word_product(&a.entries);
            match (one_morphism_grade(m, a), expected) {
                (Ok(h), Ok(e)) => c.rep.measure("1-morphism invariant is the group product", f64::from(u8::from(h != e)), 0.0),
                (Err(e), _) | (_, Err(e)) => c.rep.push("1-morphism invariant", e.to_string()),
            }
        }
    }
    c.rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_data::{build_group_defect_data, GroupTable};
    use crate::fusion::FusionCategoryData;

    fn z2() -> DefectData {
        build_group_defect_data(&GroupTable::cyclic(2)).unwrap()
    }

    #[test]
    fn enumeration_is_closed_and_valid() {
        let dd = z2();
        let cfg = AxiomConfig::default();
        let ds = small_diagrams(&dd, &cfg);
        assert!(ds.len() > 100);
        for d in &ds {
            d.check(&dd).unwrap();
            assert!(d.layers.len() <= 2 && d.source.len() <= 2 && d.target.len() <= 2);
        }
        assert_eq!(small_words(&dd, 2).len(), 1 + 4 + 16);
    }

    #[test]
    fn triv_axioms_are_clean() {
        let dd = z2();
        let cat = FusionCategoryData::bundled("vec_z2").unwrap();
        let m = GrayModel::new(Engine::Triv, &cat);
        let cfg = AxiomConfig { sample: 15, ..AxiomConfig::default() };
        let rep = check_gray_axioms(&m, &dd, &cfg);
        assert!(rep.is_clean(), "{:#?}", &rep.violations[..rep.violations.len().min(5)]);
    }

    #[test]
    fn statesum_axioms_are_clean() {
        let dd = z2();
        let cat = FusionCategoryData::bundled("vec_z2_graded").unwrap();
        let m = GrayModel::new(Engine::Statesum, &cat);
        let cfg = AxiomConfig { sample: 10, ..AxiomConfig::default() };
        let rep = check_gray_axioms(&m, &dd, &cfg);
        assert!(rep.is_clean(), "{:#?}", &rep.violations[..rep.violations.len().min(5)]);
    }

    #[test]
    fn an_identity_tensorator_is_not_natural() {
        let dd = z2();
        let cat = FusionCategoryData::bundled("fibonacci").unwrap();
        let mut m = GrayModel::new(Engine::Triv, &cat);
        let cfg = AxiomConfig { sample: 40, ..AxiomConfig::default() };
        assert!(check_gray_axioms(&m, &dd, &cfg).is_clean());
        m.flip_tensorator = false;
        let rep = check_gray_axioms(&m, &dd, &cfg);
        assert!(rep.violations.iter().any(|v| v.location == "tensorator naturality"));
    }
}
