//! Movies of 2-morphism diagrams: a start frame and a list of local moves,
//! each either a crossing of two neighbouring layers or the insertion of a
//! 3-morphism on a band of consecutive layers.

use serde::{Deserialize, Serialize};

use super::three::{GrayModel, ThreeMorphism};
use super::{LayerEvent, OneMorphismWord, TwoMorphismDiagram};
use crate::defect_data::SignedLabel;
use crate::error::{Error, Result};

/// A 3-morphism to insert, given by name or directly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Insert {
    Identity { diagram: TwoMorphismDiagram },
    /// An elementary basis vector of the hom space.
    Basis { source: TwoMorphismDiagram, target: TwoMorphismDiagram, index: usize },
    Coev { diagram: TwoMorphismDiagram },
    Ev { diagram: TwoMorphismDiagram },
    Triangulator { word: OneMorphismWord },
    TriangulatorInverse { word: OneMorphismWord },
    #[serde(skip)]
    Given(Box<ThreeMorphism>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum MovieStep {
    /// Moves layer `at` past layer `at + 1` by a tensorator or its inverse,
    /// depending on which of the two events sits further left.
    Swap { at: usize },
    /// Replaces layers `at .. at + len` by the image of a 3-morphism whose
    /// source starts `left` entries into slice `at`.
    Insert { at: usize, len: usize, left: usize, insert: Insert },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Movie {
    pub start: TwoMorphismDiagram,
    pub steps: Vec<MovieStep>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Compose(format!("malformed movie: {}", msg.into()))
}

fn part(d: &TwoMorphismDiagram, slices: &[Vec<SignedLabel>], from: usize, to: usize) -> TwoMorphismDiagram {
    let word = |i: usize| OneMorphismWord { source: d.source.source.clone(), target: d.source.target.clone(), entries: slices[i].clone() };
    TwoMorphismDiagram { source: word(from), target: word(to), layers: d.layers[from..to].to_vec() }
}

/// `phi` whiskered to fill a band of `frame`, then extended by identities
/// on the layers below and above.
fn extend(model: &GrayModel<'_>, frame: &TwoMorphismDiagram, at: usize, len: usize, left: usize, phi: &ThreeMorphism) -> Result<ThreeMorphism> {
    let slices = frame.slices()?;
    if at + len > frame.layers.len() {
        return Err(malformed(format!("band {at}..{} beyond {} layers", at + len, frame.layers.len())));
    }
    let here = &slices[at];
    let width = phi.source.source.len();
    if left + width > here.len() || here[left..left + width] != phi.source.source.entries[..] {
        return Err(malformed(format!("source of the insert does not sit at {left} in slice {at}")));
    }
    let obj = |a: &str| OneMorphismWord::identity(a);
    let lw = OneMorphismWord {
        source: frame.source.source.clone(),
        target: phi.source.source.source.clone(),
        entries: here[..left].to_vec(),
    };
    let rw = OneMorphismWord {
        source: phi.source.source.target.clone(),
        target: frame.source.target.clone(),
        entries: here[left + width..].to_vec(),
    };
    let lw = if lw.is_empty() { obj(&lw.target) } else { lw };
    let rw = if rw.is_empty() { obj(&rw.source) } else { rw };
    let mid = model.whisker_left(&lw, &model.whisker_right(phi, &rw)?)?;
    if mid.source.layers[..] != frame.layers[at..at + len] {
        return Err(malformed(format!("insert source differs from layers {at}..{}", at + len)));
    }
    let lower = model.identity(&part(frame, &slices, 0, at))?;
    let upper = model.identity(&part(frame, &slices, at + len, frame.layers.len()))?;
    model.otimes(&upper, &model.otimes(&mid, &lower)?)
}

fn resolve(model: &GrayModel<'_>, insert: &Insert) -> Result<ThreeMorphism> {
    match insert {
        Insert::Identity { diagram } => model.identity(diagram),
        Insert::Basis { source, target, index } => model
            .basis(source, target)?
            .into_iter()
            .nth(*index)
            .ok_or_else(|| malformed(format!("basis index {index} out of range"))),
        Insert::Coev { diagram } => model.coev(diagram),
        Insert::Ev { diagram } => model.ev(diagram),
        Insert::Triangulator { word } => model.triangulator(word),
        Insert::TriangulatorInverse { word } => model.triangulator_inv(word),
        Insert::Given(phi) => Ok((**phi).clone()),
    }
}

/// The two layers at `at` and `at + 1` as bare diagrams `x` (left) and `y`
/// (right), with the whiskers around them, and whether `y` comes first.
fn crossing(frame: &TwoMorphismDiagram, at: usize) -> Result<(TwoMorphismDiagram, TwoMorphismDiagram, usize, bool)> {
    if at + 1 >= frame.layers.len() {
        return Err(malformed(format!("no two layers at {at}")));
    }
    let slices = frame.slices()?;
    let (lo, hi) = (&frame.layers[at], &frame.layers[at + 1]);
    let (lo_in, lo_out, hi_in) = (lo.kind.input().len(), lo.kind.output().len(), hi.kind.input().len());
    let (l1, l2) = (lo.left.len(), hi.left.len());
    // interior objects are not recorded in words, so the crossing pieces
    // are anchored at the frame's source object
    let (s0, t0) = (frame.source.source.clone(), frame.source.target.clone());
    let bare = |event: &LayerEvent, left: Vec<SignedLabel>, source: Vec<SignedLabel>, is_right: bool| {
        let (s, t) = (s0.clone(), if is_right { t0.clone() } else { s0.clone() });
        let kind = event.kind.clone();
        let src = OneMorphismWord { source: s, target: t, entries: source };
        TwoMorphismDiagram::single(src, LayerEvent { kind, left, right: vec![] })
    };
    if l2 + hi_in <= l1 {
        // the lower event is right of the upper one: σ
        let x = bare(hi, vec![], slices[at][l2..l2 + hi_in].to_vec(), false)?;
        let y = bare(lo, slices[at][l2 + hi_in..l1].to_vec(), slices[at][l2 + hi_in..l1 + lo_in].to_vec(), true)?;
        Ok((x, y, l2, true))
    } else if l1 + lo_out <= l2 {
        // the lower event is left of the upper one: σ⁻¹
        let x = bare(lo, vec![], slices[at][l1..l1 + lo_in].to_vec(), false)?;
        let y = bare(hi, slices[at + 1][l1 + lo_out..l2].to_vec(), slices[at + 1][l1 + lo_out..l2 + hi_in].to_vec(), true)?;
        Ok((x, y, l1, false))
    } else {
        Err(malformed(format!("layers {at} and {} overlap", at + 1)))
    }
}

/// Folds the steps of a movie into one 3-morphism from the start frame.
pub fn evaluate_3d_diagram(model: &GrayModel<'_>, movie: &Movie) -> Result<ThreeMorphism> {
    movie.start.slices()?;
    let mut total = model.identity(&movie.start)?;
    for (k, step) in movie.steps.iter().enumerate() {
        let frame = total.target.clone();
        let local = match step {
            MovieStep::Swap { at } => {
                let (x, y, left, forward) = crossing(&frame, *at)?;
                let sigma = if forward { model.tensorator(&x, &y)? } else { model.tensorator_inv(&x, &y)? };
                extend(model, &frame, *at, 2, left, &sigma)
            }
            MovieStep::Insert { at, len, left, insert } => extend(model, &frame, *at, *len, *left, &resolve(model, insert)?),
        }
        .map_err(|e| malformed(format!("step {k}: {e}")))?;
        total = model.circ(&local, &total)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_data::{build_group_defect_data, GroupTable};
    use crate::fusion::FusionCategoryData;
    use crate::gray::EventKind;
    use crate::tqft_engines::Engine;

    fn g(n: usize) -> OneMorphismWord {
        let dd = build_group_defect_data(&GroupTable::cyclic(2)).unwrap();
        OneMorphismWord::new(&dd, vec![SignedLabel::plus("g"); n]).unwrap()
    }

    fn through() -> TwoMorphismDiagram {
        TwoMorphismDiagram::single(g(1), LayerEvent::bare(EventKind::group_vertex(g(1).entries, g(1).entries))).unwrap()
    }

    #[test]
    fn single_insert_and_stacks() {
        let c = FusionCategoryData::bundled("vec_z2xz2").unwrap();
        let m = GrayModel::new(Engine::Triv, &c);
        let x = through();
        let b = m.basis(&x, &x).unwrap();
        let ins = |phi: &ThreeMorphism| MovieStep::Insert { at: 0, len: 1, left: 0, insert: Insert::Given(Box::new(phi.clone())) };
        let one = evaluate_3d_diagram(&m, &Movie { start: x.clone(), steps: vec![ins(&b[0])] }).unwrap();
        assert_eq!(m.distance(&one, &b[0]), 0.0);
        let two = evaluate_3d_diagram(&m, &Movie { start: x.clone(), steps: vec![ins(&b[0]), ins(&b[1])] }).unwrap();
        assert_eq!(m.distance(&two, &m.circ(&b[1], &b[0]).unwrap()), 0.0);
        let bad = Movie { start: x, steps: vec![MovieStep::Swap { at: 0 }] };
        assert!(evaluate_3d_diagram(&m, &bad).is_err());
    }

    #[test]
    fn swapping_back_and_forth_is_the_identity() {
        let c = FusionCategoryData::bundled("vec_z2xz2").unwrap();
        let m = GrayModel::new(Engine::Triv, &c);
        let xy = TwoMorphismDiagram::box_compose(&through(), &through()).unwrap();
        let movie = Movie { start: xy.clone(), steps: vec![MovieStep::Swap { at: 0 }, MovieStep::Swap { at: 0 }] };
        let v = evaluate_3d_diagram(&m, &movie).unwrap();
        assert_eq!(m.distance(&v, &m.identity(&xy).unwrap()), 0.0);
        let once = evaluate_3d_diagram(&m, &Movie { start: xy, steps: vec![MovieStep::Swap { at: 0 }] }).unwrap();
        assert_eq!(m.distance(&once, &m.tensorator(&through(), &through()).unwrap()), 0.0);
    }

    #[test]
    fn sliding_past_a_stack_is_the_tensorator_of_the_stack() {
        for name in ["vec_z2xz2", "fibonacci"] {
            let c = FusionCategoryData::bundled(name).unwrap();
            let m = GrayModel::new(Engine::Triv, &c);
            let x = through();
            let stack = through().otimes(&through()).unwrap();
            let start = TwoMorphismDiagram::box_compose(&x, &stack).unwrap();
            let movie = Movie { start, steps: vec![MovieStep::Swap { at: 1 }, MovieStep::Swap { at: 0 }] };
            let v = evaluate_3d_diagram(&m, &movie).unwrap();
            assert_eq!(m.distance(&v, &m.tensorator(&x, &stack).unwrap()), 0.0, "{name}");
        }
    }
}
