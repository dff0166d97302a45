//! The Gray category with duals over a defect TQFT.
//!
//! 1-morphisms are words of signed 2-labels. 2-morphisms are sliced planar
//! diagrams: a source word and a list of layers, each carrying one event
//! (a vertex, a cap or a cup) between a left and a right whisker. Layer order
//! runs along the ⊗-axis from source to target and is significant.

pub mod axioms;
pub mod movie;
pub mod sphere;
pub mod three;

use serde::{Deserialize, Serialize};

use crate::computad::{splitting_id, splittings};
use crate::defect_data::{CyclicWord, D1Image, D1Set, DefectData, Endpoint, SignedLabel};
use crate::error::{Error, Result};
use crate::report::ValidationReport;

pub use axioms::{check_gray_axioms, check_model_equivalence, small_diagrams, small_words, AxiomConfig};
pub use movie::{evaluate_3d_diagram, Insert, Movie, MovieStep};
pub use sphere::glue_sphere;
pub use three::{GrayModel, Payload, ThreeMorphism};

pub type Word = Vec<SignedLabel>;

/// Reversed order, every sign flipped.
pub fn hash_word(w: &[SignedLabel]) -> Word {
    w.iter().rev().map(SignedLabel::flipped).collect()
}

fn show(w: &[SignedLabel]) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneMorphismWord {
    pub source: String,
    pub target: String,
    pub entries: Word,
}

impl OneMorphismWord {
    pub fn identity(object: impl Into<String>) -> Self {
        let object = object.into();
        Self { source: object.clone(), target: object, entries: vec![] }
    }

    /// A non-empty word whose endpoints are read off the defect data.
    pub fn new(dd: &DefectData, entries: Word) -> Result<Self> {
        let (Some(first), Some(last)) = (entries.first(), entries.last()) else {
            return Err(Error::Chain("an empty word needs an explicit object".into()));
        };
        let w = Self {
            source: dd.signed_endpoint(first, Endpoint::Source)?.to_string(),
            target: dd.signed_endpoint(last, Endpoint::Target)?.to_string(),
            entries,
        };
        w.check(dd)?;
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn check(&self, dd: &DefectData) -> Result<()> {
        if !dd.d3.contains(&self.source) || !dd.d3.contains(&self.target) {
            return Err(Error::Label(format!("endpoints {} -> {}", self.source, self.target)));
        }
        let mut at = self.source.as_str();
        for x in &self.entries {
            if dd.signed_endpoint(x, Endpoint::Source)? != at {
                return Err(Error::Chain(format!("{} does not start at {at} in {}", x, show(&self.entries))));
            }
            at = dd.signed_endpoint(x, Endpoint::Target)?;
        }
        if at != self.target {
            return Err(Error::Chain(format!("{} ends at {at}, not {}", show(&self.entries), self.target)));
        }
        Ok(())
    }

    /// Diagrammatic concatenation: `self` first along the □-axis.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::Compose(format!("{} ends at {}, next starts at {}", show(&self.entries), self.target, other.source)));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self { source: self.source.clone(), target: other.target.clone(), entries })
    }
}

pub fn hash_dual(a: &OneMorphismWord) -> OneMorphismWord {
    OneMorphismWord { source: a.target.clone(), target: a.source.clone(), entries: hash_word(&a.entries) }
}

pub fn box_words(a: &OneMorphismWord, b: &OneMorphismWord) -> Result<OneMorphismWord> {
    a.then(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EventKind {
    /// A point labelled by a d1 element, with incoming and outgoing legs.
    /// `reversed` marks the mirror image produced by the † dual.
    Vertex {
        d1: String,
        input: Word,
        output: Word,
        splitting: String,
        #[serde(default)]
        reversed: bool,
    },
    /// Creates the pair `x x̄`.
    Cap { label: SignedLabel },
    /// Deletes the pair `x x̄`.
    Cup { label: SignedLabel },
}

impl EventKind {
    pub fn vertex(d1: impl Into<String>, input: Word, output: Word) -> Self {
        let d1 = d1.into();
        let splitting = splitting_id(&d1, &input, &output);
        EventKind::Vertex { d1, input, output, splitting, reversed: false }
    }

    /// A vertex for group defect data, named by its cyclic word.
    pub fn group_vertex(input: Word, output: Word) -> Self {
        let mut w = output.clone();
        w.extend(hash_word(&input));
        Self::vertex(CyclicWord::new(w).to_string(), input, output)
    }

    pub fn input(&self) -> Word {
        match self {
            EventKind::Vertex { input, .. } => input.clone(),
            EventKind::Cap { .. } => vec![],
            EventKind::Cup { label } => vec![label.clone(), label.flipped()],
        }
    }

    pub fn output(&self) -> Word {
        match self {
            EventKind::Vertex { output, .. } => output.clone(),
            EventKind::Cap { label } => vec![label.clone(), label.flipped()],
            EventKind::Cup { .. } => vec![],
        }
    }

    /// The cyclic word read around a vertex: outputs, then the inputs
    /// backwards with flipped signs.
    pub fn vertex_word(&self) -> Option<Word> {
        match self {
            EventKind::Vertex { input, output, .. } => {
                let mut w = output.clone();
                w.extend(hash_word(input));
                Some(w)
            }
            _ => None,
        }
    }

    fn dagger(&self) -> Self {
        match self {
            EventKind::Vertex { d1, input, output, splitting, reversed } => EventKind::Vertex {
                d1: d1.clone(),
                input: output.clone(),
                output: input.clone(),
                splitting: splitting.clone(),
                reversed: !reversed,
            },
            EventKind::Cap { label } => EventKind::Cup { label: label.clone() },
            EventKind::Cup { label } => EventKind::Cap { label: label.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayerEvent {
    pub kind: EventKind,
    #[serde(default)]
    pub left: Word,
    #[serde(default)]
    pub right: Word,
}

impl LayerEvent {
    pub fn bare(kind: EventKind) -> Self {
        Self { kind, left: vec![], right: vec![] }
    }

    fn slice(&self, middle: Word) -> Word {
        let mut w = self.left.clone();
        w.extend(middle);
        w.extend(self.right.iter().cloned());
        w
    }

    pub fn before(&self) -> Word {
        self.slice(self.kind.input())
    }

    pub fn after(&self) -> Word {
        self.slice(self.kind.output())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoMorphismDiagram {
    pub source: OneMorphismWord,
    pub target: OneMorphismWord,
    pub layers: Vec<LayerEvent>,
}

impl TwoMorphismDiagram {
    pub fn identity(a: &OneMorphismWord) -> Self {
        Self { source: a.clone(), target: a.clone(), layers: vec![] }
    }

    /// A diagram from a source word and layers; the target is the last slice.
    pub fn from_layers(source: OneMorphismWord, layers: Vec<LayerEvent>) -> Result<Self> {
        let last = layers.last().map(LayerEvent::after).unwrap_or_else(|| source.entries.clone());
        let target = OneMorphismWord { source: source.source.clone(), target: source.target.clone(), entries: last };
        let d = Self { source, target, layers };
        d.slices()?;
        Ok(d)
    }

    pub fn single(source: OneMorphismWord, event: LayerEvent) -> Result<Self> {
        Self::from_layers(source, vec![event])
    }

    /// The words between consecutive layers, source first.
    pub fn slices(&self) -> Result<Vec<Word>> {
        let mut out = vec![self.source.entries.clone()];
        for (k, l) in self.layers.iter().enumerate() {
            if l.before() != out[k] {
                return Err(Error::Chain(format!("layer {k} expects {} but sees {}", show(&l.before()), show(&out[k]))));
            }
            out.push(l.after());
        }
        if out[self.layers.len()] != self.target.entries {
            return Err(Error::Chain(format!("last slice {} is not the target", show(&out[self.layers.len()]))));
        }
        if self.source.source != self.target.source || self.source.target != self.target.target {
            return Err(Error::Chain("source and target words have different endpoints".into()));
        }
        Ok(out)
    }

    pub fn vertex_count(&self) -> usize {
        self.layers.iter().filter(|l| matches!(l.kind, EventKind::Vertex { .. })).count()
    }

    /// Layers holding vertices, in order.
    pub fn vertex_layers(&self) -> Vec<usize> {
        (0..self.layers.len()).filter(|&k| matches!(self.layers[k].kind, EventKind::Vertex { .. })).collect()
    }

    pub fn is_parallel(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// Every layer whiskered by `a` on the left.
    pub fn whisker_left(a: &OneMorphismWord, x: &Self) -> Result<Self> {
        let layers = x
            .layers
            .iter()
            .map(|l| {
                let mut left = a.entries.clone();
                left.extend(l.left.iter().cloned());
                LayerEvent { kind: l.kind.clone(), left, right: l.right.clone() }
            })
            .collect();
        Ok(Self { source: a.then(&x.source)?, target: a.then(&x.target)?, layers })
    }

    /// Every layer whiskered by `a` on the right.
    pub fn whisker_right(x: &Self, a: &OneMorphismWord) -> Result<Self> {
        let layers = x
            .layers
            .iter()
            .map(|l| {
                let mut right = l.right.clone();
                right.extend(a.entries.iter().cloned());
                LayerEvent { kind: l.kind.clone(), left: l.left.clone(), right }
            })
            .collect();
        Ok(Self { source: x.source.then(a)?, target: x.target.then(a)?, layers })
    }

    /// `self ⊗ first`: the layers of `first` come before those of `self`.
    pub fn otimes(&self, first: &Self) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::Compose(format!(
                "target {} differs from source {}",
                show(&first.target.entries),
                show(&self.source.entries)
            )));
        }
        let mut layers = first.layers.clone();
        layers.extend(self.layers.iter().cloned());
        Ok(Self { source: first.source.clone(), target: self.target.clone(), layers })
    }

    /// `x □ y` with `x` on the left: `(x □ 1) ⊗ (1 □ y)`, so the layers of
    /// `y` come first.
    pub fn box_compose(x: &Self, y: &Self) -> Result<Self> {
        let lower = Self::whisker_left(&x.source, y)?;
        let upper = Self::whisker_right(x, &y.target)?;
        upper.otimes(&lower)
    }

    /// The diagram rotated upside down: layers reversed, caps and cups and
    /// inputs and outputs exchanged.
    pub fn dagger(&self) -> Self {
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            layers: self
                .layers
                .iter()
                .rev()
                .map(|l| LayerEvent { kind: l.kind.dagger(), left: l.left.clone(), right: l.right.clone() })
                .collect(),
        }
    }

    /// Wire components of the diagram's slots.
    pub fn wires(&self) -> Result<Wires> {
        Wires::new(self)
    }

    pub fn check(&self, dd: &DefectData) -> Result<()> {
        self.source.check(dd)?;
        self.target.check(dd)?;
        self.slices()?;
        for (k, l) in self.layers.iter().enumerate() {
            match &l.kind {
                EventKind::Vertex { d1, input, output, reversed, .. } => {
                    let (a, b) = if *reversed { (output, input) } else { (input, output) };
                    if !vertex_allowed(dd, d1, a, b) {
                        return Err(Error::DefectData(format!("layer {k}: {} -> {} is not a splitting of {d1}", show(a), show(b))));
                    }
                }
                EventKind::Cap { label } | EventKind::Cup { label } => {
                    if !dd.d2.contains_key(&label.label) {
                        return Err(Error::Label(label.label.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn dagger_dual(x: &TwoMorphismDiagram) -> TwoMorphismDiagram {
    x.dagger()
}

fn vertex_allowed(dd: &DefectData, d1: &str, input: &[SignedLabel], output: &[SignedLabel]) -> bool {
    let mut w = output.to_vec();
    w.extend(hash_word(input));
    if w.is_empty() {
        return false;
    }
    let image_ok = match &dd.d1 {
        D1Set::Explicit(map) => matches!(map.get(d1), Some(D1Image::Word(c)) if *c == CyclicWord::new(w.clone())),
        D1Set::Group(_) => d1 == CyclicWord::new(w.clone()).to_string() && dd.accepts_word(&w),
        D1Set::Ribbon(objects) => d1.split(':').next().is_some_and(|x| objects.contains(x)) && dd.accepts_word(&w),
    };
    image_ok && matches!(dd.chain_violations(&w), Ok(v) if v.is_empty())
}

/// The vertex events of a d1 element: one per splitting of its word.
pub fn vertex_events(dd: &DefectData, max_len: usize) -> Vec<EventKind> {
    let mut out = Vec::new();
    for el in dd.d1_elements(max_len) {
        if let D1Image::Word(w) = &el.image {
            for (a, b) in splittings(&w.entries) {
                out.push(EventKind::vertex(el.id.clone(), a, b));
            }
        }
    }
    out
}

/// Nested caps `1 → α □ α^#`, outermost first.
pub fn fold(a: &OneMorphismWord) -> TwoMorphismDiagram {
    let n = a.len();
    let hashed = hash_word(&a.entries);
    let layers = (0..n)
        .map(|k| LayerEvent {
            kind: EventKind::Cap { label: a.entries[k].clone() },
            left: a.entries[..k].to_vec(),
            right: hashed[n - k..].to_vec(),
        })
        .collect();
    let mut target = a.clone();
    target.entries.extend(hashed);
    target.target = a.source.clone();
    TwoMorphismDiagram { source: OneMorphismWord::identity(a.source.clone()), target, layers }
}

/// The dual fold `α^# □ α → 1`.
pub fn unfold(a: &OneMorphismWord) -> TwoMorphismDiagram {
    fold(&hash_dual(a)).dagger()
}

/// Connected components of the slots `(slice, position)` of a diagram,
/// joined through whiskers, caps and cups. Vertex legs end wires.
#[derive(Debug, Clone)]
pub struct Wires {
    pub offsets: Vec<usize>,
    pub of_slot: Vec<usize>,
    pub count: usize,
    /// The 2-label carried by each wire.
    pub labels: Vec<String>,
    /// Some slot of each wire.
    pub rep: Vec<(usize, usize)>,
}

impl Wires {
    fn new(d: &TwoMorphismDiagram) -> Result<Self> {
        let slices = d.slices()?;
        let mut offsets = vec![0];
        for s in &slices {
            offsets.push(offsets.last().unwrap() + s.len());
        }
        let n = *offsets.last().unwrap();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut join = |a: usize, b: usize| {
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        };
        for (k, l) in d.layers.iter().enumerate() {
            let (lw, a, b) = (l.left.len(), l.kind.input().len(), l.kind.output().len());
            for p in 0..lw {
                join(offsets[k] + p, offsets[k + 1] + p);
            }
            for p in 0..l.right.len() {
                join(offsets[k] + lw + a + p, offsets[k + 1] + lw + b + p);
            }
            match l.kind {
                EventKind::Cap { .. } => join(offsets[k + 1] + lw, offsets[k + 1] + lw + 1),
                EventKind::Cup { .. } => join(offsets[k] + lw, offsets[k] + lw + 1),
                EventKind::Vertex { .. } => {}
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut of_slot = vec![0; n];
        let mut labels = Vec::new();
        let mut rep = Vec::new();
        for (i, s) in slices.iter().enumerate() {
            for p in 0..s.len() {
                let x = offsets[i] + p;
                let r = find(&mut parent, x);
                if id[r] == usize::MAX {
                    id[r] = labels.len();
                    labels.push(s[p].label.clone());
                    rep.push((i, p));
                }
                of_slot[x] = id[r];
            }
        }
        Ok(Self { offsets, of_slot, count: labels.len(), labels, rep })
    }

    pub fn at(&self, slice: usize, pos: usize) -> usize {
        self.of_slot[self.offsets[slice] + pos]
    }

    pub fn slice_len(&self, slice: usize) -> usize {
        self.offsets[slice + 1] - self.offsets[slice]
    }

    pub fn slice_count(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Checks the diagram-level identities: duals are involutions, units and
/// associativity of □ and ⊗ hold by list concatenation.
pub fn check_diagram_identities(xs: &[TwoMorphismDiagram]) -> ValidationReport {
    let mut rep = ValidationReport::new();
    for (i, x) in xs.iter().enumerate() {
        if x.dagger().dagger() != *x {
            rep.push(format!("diagram {i}"), "† is not an involution");
        }
        for w in [&x.source, &x.target] {
            if hash_dual(&hash_dual(w)) != *w {
                rep.push(format!("diagram {i}"), "# is not an involution");
            }
        }
        let id_s = TwoMorphismDiagram::identity(&x.source);
        let id_t = TwoMorphismDiagram::identity(&x.target);
        if x.otimes(&id_s).as_ref() != Ok(x) || id_t.otimes(x).as_ref() != Ok(x) {
            rep.push(format!("diagram {i}"), "identities are not units for ⊗");
        }
        let unit_l = TwoMorphismDiagram::identity(&OneMorphismWord::identity(x.source.source.clone()));
        let unit_r = TwoMorphismDiagram::identity(&OneMorphismWord::identity(x.source.target.clone()));
        if TwoMorphismDiagram::box_compose(&unit_l, x).as_ref() != Ok(x) || TwoMorphismDiagram::box_compose(x, &unit_r).as_ref() != Ok(x) {
            rep.push(format!("diagram {i}"), "empty words are not units for □");
        }
        for (j, y) in xs.iter().enumerate() {
            for (k, z) in xs.iter().enumerate() {
                let bx = TwoMorphismDiagram::box_compose;
                if let (Ok(xy), Ok(yz)) = (bx(x, y), bx(y, z)) {
                    if bx(&xy, z) != bx(x, &yz) {
                        rep.push(format!("diagrams {i} {j} {k}"), "□ is not associative");
                    }
                }
                if let (Ok(xy), Ok(yz)) = (x.otimes(y), y.otimes(z)) {
                    if xy.otimes(z) != x.otimes(&yz) {
                        rep.push(format!("diagrams {i} {j} {k}"), "⊗ is not associative");
                    }
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_data::{build_group_defect_data, GroupTable};

    fn z2() -> DefectData {
        build_group_defect_data(&GroupTable::cyclic(2)).unwrap()
    }

    fn word(dd: &DefectData, s: &[(&str, bool)]) -> OneMorphismWord {
        OneMorphismWord::new(dd, s.iter().map(|&(l, p)| if p { SignedLabel::plus(l) } else { SignedLabel::minus(l) }).collect()).unwrap()
    }

    #[test]
    fn hash_reverses_and_flips() {
        let dd = build_group_defect_data(&GroupTable::cyclic(3)).unwrap();
        let a = word(&dd, &[("1", true), ("g", true), ("g2", true)]);
        let h = hash_dual(&a);
        assert_eq!(h.entries, vec![SignedLabel::minus("g2"), SignedLabel::minus("g"), SignedLabel::minus("1")]);
        assert_eq!(hash_dual(&h), a);
        let e = OneMorphismWord::identity("*");
        assert_eq!(hash_dual(&e), e);
    }

    #[test]
    fn folds_nest_and_compose() {
        let dd = z2();
        let e = OneMorphismWord::identity("*");
        assert_eq!(fold(&e), TwoMorphismDiagram::identity(&e));
        let a = word(&dd, &[("g", true)]);
        let b = word(&dd, &[("g", false), ("1", true)]);
        let ab = a.then(&b).unwrap();
        let inner = TwoMorphismDiagram::whisker_right(&TwoMorphismDiagram::whisker_left(&a, &fold(&b)).unwrap(), &hash_dual(&a)).unwrap();
        assert_eq!(fold(&ab), inner.otimes(&fold(&a)).unwrap());
        let f = fold(&ab);
        f.check(&dd).unwrap();
        assert_eq!(f.target.entries, [ab.entries.clone(), hash_word(&ab.entries)].concat());
        assert_eq!(unfold(&ab).source.entries, [hash_word(&ab.entries), ab.entries.clone()].concat());
    }

    #[test]
    fn dagger_is_an_involution_and_fixes_identities() {
        let dd = z2();
        let a = word(&dd, &[("g", true), ("g", true)]);
        let v = EventKind::group_vertex(a.entries.clone(), vec![]);
        let x = TwoMorphismDiagram::single(a.clone(), LayerEvent::bare(v)).unwrap();
        x.check(&dd).unwrap();
        let d = x.dagger();
        d.check(&dd).unwrap();
        assert_eq!(d.source.entries, Vec::<SignedLabel>::new());
        assert_eq!(d.dagger(), x);
        let id = TwoMorphismDiagram::identity(&a);
        assert_eq!(id.dagger(), id);
    }

    #[test]
    fn box_puts_the_right_factor_first() {
        let dd = z2();
        let g = word(&dd, &[("g", true)]);
        let x = fold(&g);
        let y = unfold(&g);
        let xy = TwoMorphismDiagram::box_compose(&x, &y).unwrap();
        assert_eq!(xy.layers.len(), 2);
        assert!(matches!(xy.layers[0].kind, EventKind::Cup { .. }));
        assert_eq!(xy.source.entries, hash_word(&g.entries).into_iter().chain(g.entries.clone()).collect::<Vec<_>>());
        let id_a = TwoMorphismDiagram::identity(&g);
        let id_b = TwoMorphismDiagram::identity(&hash_dual(&g));
        assert_eq!(TwoMorphismDiagram::box_compose(&id_a, &id_b).unwrap(), TwoMorphismDiagram::identity(&g.then(&hash_dual(&g)).unwrap()));
        let rep = check_diagram_identities(&[x, y, xy, id_a]);
        assert!(rep.is_clean(), "{:?}", rep.violations);
    }

    #[test]
    fn wires_follow_caps_and_cups() {
        let dd = z2();
        let g = word(&dd, &[("g", true)]);
        let z = TwoMorphismDiagram::whisker_left(&g, &unfold(&g)).unwrap().otimes(&TwoMorphismDiagram::whisker_right(&fold(&g), &g).unwrap()).unwrap();
        let w = z.wires().unwrap();
        assert_eq!(w.count, 1);
        assert_eq!(w.at(0, 0), w.at(2, 0));
        let bad = TwoMorphismDiagram { source: g.clone(), target: hash_dual(&g), layers: vec![] };
        assert!(bad.slices().is_err());
    }

    #[test]
    fn foreign_vertices_are_rejected() {
        let dd = z2();
        let a = word(&dd, &[("g", true)]);
        let v = EventKind::vertex("(+g)", a.entries.clone(), vec![]);
        let x = TwoMorphismDiagram::single(a, LayerEvent::bare(v)).unwrap();
        assert!(x.check(&dd).is_err());
        assert!(!vertex_events(&dd, 2).is_empty());
    }
}
