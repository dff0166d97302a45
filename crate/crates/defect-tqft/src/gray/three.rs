//! 3-morphisms and the structure maps of the Gray category.
//!
//! With the trivial engine a 3-morphism `X → Y` is a family of integer
//! matrices, one per pair of wire colourings of `X` and `Y` that agree on the
//! source and target words, between the tensor products of the vertex hom
//! spaces taken in layer order. With the state-sum engine every hom space is
//! a line spanned by a distinguished element and a 3-morphism is a scalar.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::sphere::{glue_sphere, vertex_legs};
use super::{fold, unfold, OneMorphismWord, TwoMorphismDiagram, Wires};
use crate::defect_data::Sign;
use crate::error::{Error, Result};
use crate::fusion::{hom_dimension, FusionCategoryData};
use crate::strata::linear_fill;
use crate::tqft_engines::{label_grade, product, state_space, statesum_map, triv_state_space, Engine};

pub type Colouring = Vec<usize>;
pub type Blocks = BTreeMap<(Colouring, Colouring), DMatrix<i64>>;

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Blocks(Blocks),
    Scalar(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeMorphism {
    pub source: TwoMorphismDiagram,
    pub target: TwoMorphismDiagram,
    pub payload: Payload,
}

/// Wires of a diagram with their colour options and the vertex words.
struct Frame {
    wires: Wires,
    options: Vec<Vec<usize>>,
    words: Vec<Vec<(usize, Sign)>>,
    last: usize,
}

impl Frame {
    fn new(cat: &FusionCategoryData, d: &TwoMorphismDiagram) -> Result<Self> {
        let wires = d.wires()?;
        let options = wires.labels.iter().map(|l| Ok(cat.simples_of_grade(label_grade(cat, l)?))).collect::<Result<_>>()?;
        let words = vertex_legs(d)
            .into_iter()
            .map(|legs| legs.iter().map(|g| (wires.at(g.slice, g.pos), g.sign)).collect())
            .collect();
        Ok(Self { last: d.layers.len(), wires, options, words })
    }

    fn dims(&self, cat: &FusionCategoryData, c: &[usize]) -> Vec<usize> {
        self.words.iter().map(|w| hom_dimension(cat, &w.iter().map(|&(x, s)| (c[x], s)).collect::<Vec<_>>())).collect()
    }

    fn dim(&self, cat: &FusionCategoryData, c: &[usize]) -> usize {
        self.dims(cat, c).iter().product()
    }

    /// Colourings whose space is non-zero.
    fn colourings(&self, cat: &FusionCategoryData) -> Vec<Colouring> {
        product(&self.options).into_iter().filter(|c| self.dim(cat, c) > 0).collect()
    }

    fn ends(&self, c: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let at = |i: usize| (0..self.wires.slice_len(i)).map(|p| c[self.wires.at(i, p)]).collect();
        (at(0), at(self.last))
    }

    /// A colouring from `(wire, colour)` pairs, if consistent and complete.
    fn fill(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Option<Colouring> {
        let mut c = vec![usize::MAX; self.wires.count];
        for (w, x) in pairs {
            if c[w] != usize::MAX && c[w] != x {
                return None;
            }
            c[w] = x;
        }
        c.iter().all(|&x| x != usize::MAX).then_some(c)
    }
}

fn mixed_radix(dims: &[usize]) -> Vec<Vec<usize>> {
    let options: Vec<Vec<usize>> = dims.iter().map(|&d| (0..d).collect()).collect();
    product(&options)
}

fn linear(idx: &[usize], dims: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

/// The matrix sending `e_i` to `e_j` with `j[k] = i[perm[k]]`.
fn factor_permutation(dims: &[usize], perm: &[usize]) -> DMatrix<i64> {
    let target: Vec<usize> = perm.iter().map(|&k| dims[k]).collect();
    let n = dims.iter().product();
    let mut m = DMatrix::zeros(n, n);
    for i in mixed_radix(dims) {
        let j: Vec<usize> = perm.iter().map(|&k| i[k]).collect();
        m[(linear(&j, &target), linear(&i, dims))] = 1;
    }
    m
}

fn reversal(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

/// One summand of a 3-morphism hom space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomBlock {
    pub source: Colouring,
    pub target: Colouring,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpace {
    pub blocks: Vec<HomBlock>,
    pub dim: usize,
}

/// The Gray category with duals extracted from an engine over a category.
#[derive(Debug, Clone)]
pub struct GrayModel<'a> {
    pub engine: Engine,
    pub cat: &'a FusionCategoryData,
    /// The tensorator flips tensor factors; turning this off replaces it by
    /// the identity, which is not natural.
    pub flip_tensorator: bool,
}

impl<'a> GrayModel<'a> {
    pub fn new(engine: Engine, cat: &'a FusionCategoryData) -> Self {
        Self { engine, cat, flip_tensorator: true }
    }

    fn frame(&self, d: &TwoMorphismDiagram) -> Result<Frame> {
        Frame::new(self.cat, d)
    }

    fn scalar(&self, source: &TwoMorphismDiagram, target: &TwoMorphismDiagram, z: Complex64) -> ThreeMorphism {
        ThreeMorphism { source: source.clone(), target: target.clone(), payload: Payload::Scalar(z) }
    }

    /// The state-sum 3-morphism with unit coefficient on the distinguished
    /// element of its hom line.
    pub fn distinguished(&self, source: &TwoMorphismDiagram, target: &TwoMorphismDiagram) -> ThreeMorphism {
        self.scalar(source, target, Complex64::new(1.0, 0.0))
    }

    fn blocks<'b>(&self, phi: &'b ThreeMorphism) -> Result<&'b Blocks> {
        match &phi.payload {
            Payload::Blocks(b) => Ok(b),
            Payload::Scalar(_) => Err(Error::Compose("scalar payload under the trivial engine".into())),
        }
    }

    fn value(&self, phi: &ThreeMorphism) -> Result<Complex64> {
        match &phi.payload {
            Payload::Scalar(z) => Ok(*z),
            Payload::Blocks(_) => Err(Error::Compose("block payload under the state-sum engine".into())),
        }
    }

    pub fn identity(&self, x: &TwoMorphismDiagram) -> Result<ThreeMorphism> {
        let n = x.vertex_count();
        self.relabel(x, x, |i, p| (i, p), &(0..n).collect::<Vec<_>>())
    }

    /// The canonical map between diagrams that differ by moving pieces
    /// around: `slot` sends every slot of `s` to a slot of `t` on the same
    /// wire, and target vertex `k` is source vertex `perm[k]`.
    fn relabel(
        &self,
        s: &TwoMorphismDiagram,
        t: &TwoMorphismDiagram,
        slot: impl Fn(usize, usize) -> (usize, usize),
        perm: &[usize],
    ) -> Result<ThreeMorphism> {
        if self.engine == Engine::Statesum {
            return Ok(self.scalar(s, t, Complex64::new(1.0, 0.0)));
        }
        let (fs, ft) = (self.frame(s)?, self.frame(t)?);
        let mut pairs = Vec::new();
        for i in 0..fs.wires.slice_count() {
            for p in 0..fs.wires.slice_len(i) {
                let (j, q) = slot(i, p);
                pairs.push((fs.wires.at(i, p), ft.wires.at(j, q)));
            }
        }
        let mut out = Blocks::new();
        for cs in fs.colourings(self.cat) {
            let ct = ft
                .fill(pairs.iter().map(|&(a, b)| (b, cs[a])))
                .ok_or_else(|| Error::Compose("relabelling does not carry colourings across".into()))?;
            let ds = fs.dims(self.cat, &cs);
            let dt = ft.dims(self.cat, &ct);
            if perm.iter().map(|&k| ds[k]).ne(dt.iter().copied()) {
                return Err(Error::Compose("relabelling does not match vertex spaces".into()));
            }
            out.insert((cs, ct), factor_permutation(&ds, perm));
        }
        Ok(ThreeMorphism { source: s.clone(), target: t.clone(), payload: Payload::Blocks(out) })
    }

    /// `psi ∘ phi`, with `phi` applied first.
    pub fn circ(&self, psi: &ThreeMorphism, phi: &ThreeMorphism) -> Result<ThreeMorphism> {
        if phi.target != psi.source {
            return Err(Error::Compose("∘ of 3-morphisms with mismatched middle diagram".into()));
        }
        if self.engine == Engine::Statesum {
            return Ok(self.scalar(&phi.source, &psi.target, self.value(psi)? * self.value(phi)?));
        }
        let (a, b) = (self.blocks(phi)?, self.blocks(psi)?);
        let mut out = Blocks::new();
        for ((cx, cy), m) in a {
            for ((cy2, cz), n) in b.range((cy.clone(), vec![])..) {
                if cy2 != cy {
                    break;
                }
                let prod = n * m;
                out.entry((cx.clone(), cz.clone()))
                    .and_modify(|acc| *acc += &prod)
                    .or_insert(prod);
            }
        }
        Ok(ThreeMorphism { source: phi.source.clone(), target: psi.target.clone(), payload: Payload::Blocks(out) })
    }

    /// `upper ⊗ lower`: `lower` sits on the earlier layers.
    pub fn otimes(&self, upper: &ThreeMorphism, lower: &ThreeMorphism) -> Result<ThreeMorphism> {
        let s = upper.source.otimes(&lower.source)?;
        let t = upper.target.otimes(&lower.target)?;
        if self.engine == Engine::Statesum {
            return Ok(self.scalar(&s, &t, self.value(upper)? * self.value(lower)?));
        }
        let (fs, ft) = (self.frame(&s)?, self.frame(&t)?);
        let embed = |child: &TwoMorphismDiagram, parent: &Frame, shift: usize| -> Result<Vec<usize>> {
            let w = child.wires()?;
            Ok(w.rep.iter().map(|&(i, p)| parent.wires.at(i + shift, p)).collect())
        };
        let (ls, lt) = (embed(&lower.source, &fs, 0)?, embed(&lower.target, &ft, 0)?);
        let us = embed(&upper.source, &fs, lower.source.layers.len())?;
        let ut = embed(&upper.target, &ft, lower.target.layers.len())?;
        let mut out = Blocks::new();
        for ((a1, b1), m1) in self.blocks(lower)? {
            for ((a2, b2), m2) in self.blocks(upper)? {
                let cs = fs.fill(ls.iter().zip(a1).chain(us.iter().zip(a2)).map(|(&w, &c)| (w, c)));
                let ct = ft.fill(lt.iter().zip(b1).chain(ut.iter().zip(b2)).map(|(&w, &c)| (w, c)));
                if let (Some(cs), Some(ct)) = (cs, ct) {
                    out.insert((cs, ct), m1.kronecker(m2));
                }
            }
        }
        Ok(ThreeMorphism { source: s, target: t, payload: Payload::Blocks(out) })
    }

    /// Whiskering by a word on one side; the whisker wires take every
    /// colouring allowed by their labels.
    fn whisker(&self, a: &OneMorphismWord, phi: &ThreeMorphism, on_left: bool) -> Result<ThreeMorphism> {
        let side = |x: &TwoMorphismDiagram| {
            if on_left {
                TwoMorphismDiagram::whisker_left(a, x)
            } else {
                TwoMorphismDiagram::whisker_right(x, a)
            }
        };
        let (s, t) = (side(&phi.source)?, side(&phi.target)?);
        if self.engine == Engine::Statesum {
            return Ok(self.scalar(&s, &t, self.value(phi)?));
        }
        let (fs, ft) = (self.frame(&s)?, self.frame(&t)?);
        let shift = if on_left { a.len() } else { 0 };
        let embed = |child: &TwoMorphismDiagram, parent: &Frame| -> Result<Vec<usize>> {
            let w = child.wires()?;
            Ok(w.rep.iter().map(|&(i, p)| parent.wires.at(i, p + shift)).collect())
        };
        let (es, et) = (embed(&phi.source, &fs)?, embed(&phi.target, &ft)?);
        let start_s = if on_left { 0 } else { phi.source.source.len() };
        let start_t = if on_left { 0 } else { phi.target.source.len() };
        let options: Vec<Vec<usize>> =
            a.entries.iter().map(|x| Ok(self.cat.simples_of_grade(label_grade(self.cat, &x.label)?))).collect::<Result<_>>()?;
        let mut out = Blocks::new();
        for ((cx, cy), m) in self.blocks(phi)? {
            for cw in product(&options) {
                let cs = fs.fill(
                    es.iter().zip(cx).map(|(&w, &c)| (w, c)).chain(cw.iter().enumerate().map(|(p, &c)| (fs.wires.at(0, start_s + p), c))),
                );
                let ct = ft.fill(
                    et.iter().zip(cy).map(|(&w, &c)| (w, c)).chain(cw.iter().enumerate().map(|(p, &c)| (ft.wires.at(0, start_t + p), c))),
                );
                if let (Some(cs), Some(ct)) = (cs, ct) {
                    out.insert((cs, ct), m.clone());
                }
            }
        }
        Ok(ThreeMorphism { source: s, target: t, payload: Payload::Blocks(out) })
    }

    pub fn whisker_left(&self, a: &OneMorphismWord, phi: &ThreeMorphism) -> Result<ThreeMorphism> {
        self.whisker(a, phi, true)
    }

    pub fn whisker_right(&self, phi: &ThreeMorphism, a: &OneMorphismWord) -> Result<ThreeMorphism> {
        self.whisker(a, phi, false)
    }

    /// `phi □ psi = (phi □ 1) ⊗ (1 □ psi)`.
    pub fn box_compose(&self, phi: &ThreeMorphism, psi: &ThreeMorphism) -> Result<ThreeMorphism> {
        let upper = self.whisker_right(phi, &psi.target.target)?;
        let lower = self.whisker_left(&phi.source.source, psi)?;
        self.otimes(&upper, &lower)
    }

    /// `σ_{X,Y}` from `X □ Y` (the layers of `Y` first) to the ordering with
    /// the layers of `X` first.
    pub fn tensorator(&self, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<ThreeMorphism> {
        let s = TwoMorphismDiagram::box_compose(x, y)?;
        let t = TwoMorphismDiagram::whisker_left(&x.target, y)?.otimes(&TwoMorphismDiagram::whisker_right(x, &y.source)?)?;
        let (mx, my) = (x.layers.len(), y.layers.len());
        let xs = x.slices()?;
        let (la, la2) = (x.source.len(), x.target.len());
        let slot = |i: usize, p: usize| -> (usize, usize) {
            if i <= my {
                if p < la {
                    (0, p)
                } else {
                    (mx + i, la2 + p - la)
                }
            } else {
                let k = i - my;
                if p < xs[k].len() {
                    (k, p)
                } else {
                    (mx + my, la2 + p - xs[k].len())
                }
            }
        };
        let (nx, ny) = (x.vertex_count(), y.vertex_count());
        let perm: Vec<usize> = (0..nx).map(|k| ny + k).chain(0..ny).collect();
        let mut sigma = self.relabel(&s, &t, slot, &perm)?;
        if !self.flip_tensorator {
            if let Payload::Blocks(b) = &mut sigma.payload {
                for m in b.values_mut() {
                    *m = DMatrix::identity(m.nrows(), m.ncols());
                }
            }
        }
        Ok(sigma)
    }

    /// Inverse of an invertible 3-morphism whose blocks are permutations.
    pub fn inverse_permutation(&self, phi: &ThreeMorphism) -> Result<ThreeMorphism> {
        let payload = match &phi.payload {
            Payload::Scalar(z) => Payload::Scalar(1.0 / z),
            Payload::Blocks(b) => Payload::Blocks(b.iter().map(|((a, c), m)| ((c.clone(), a.clone()), m.transpose())).collect()),
        };
        Ok(ThreeMorphism { source: phi.target.clone(), target: phi.source.clone(), payload })
    }

    pub fn tensorator_inv(&self, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<ThreeMorphism> {
        self.inverse_permutation(&self.tensorator(x, y)?)
    }

    /// `phi† : Y† → X†` for `phi : X → Y`: transposed blocks on the mirrored
    /// colourings, tensor factors in reverse order.
    pub fn dagger(&self, phi: &ThreeMorphism) -> Result<ThreeMorphism> {
        let (s, t) = (phi.target.dagger(), phi.source.dagger());
        if self.engine == Engine::Statesum {
            return Ok(self.scalar(&s, &t, self.value(phi)?.conj()));
        }
        let mirror = |d: &TwoMorphismDiagram, c: &[usize]| -> Result<Colouring> {
            let (w, wd) = (d.wires()?, d.dagger().wires()?);
            let m = d.layers.len();
            Ok(wd.rep.iter().map(|&(i, p)| c[w.at(m - i, p)]).collect())
        };
        let (fx, fy) = (self.frame(&phi.source)?, self.frame(&phi.target)?);
        let mut out = Blocks::new();
        for ((cx, cy), m) in self.blocks(phi)? {
            let (dx, dy) = (fx.dims(self.cat, cx), fy.dims(self.cat, cy));
            let px = factor_permutation(&dx, &reversal(dx.len()));
            let py = factor_permutation(&dy, &reversal(dy.len()));
            out.insert((mirror(&phi.target, cy)?, mirror(&phi.source, cx)?), px * m.transpose() * py.transpose());
        }
        Ok(ThreeMorphism { source: s, target: t, payload: Payload::Blocks(out) })
    }

    /// `coev_X : 1 → X ⊗ X†`, pairing each vertex with its mirror image.
    pub fn coev(&self, x: &TwoMorphismDiagram) -> Result<ThreeMorphism> {
        let s = TwoMorphismDiagram::identity(&x.target);
        let t = x.otimes(&x.dagger())?;
        if self.engine == Engine::Statesum {
            return Ok(self.scalar(&s, &t, Complex64::new(1.0, 0.0)));
        }
        let (fx, fs, ft) = (self.frame(x)?, self.frame(&s)?, self.frame(&t)?);
        let m = x.layers.len();
        let mut out = Blocks::new();
        for c in fx.colourings(self.cat) {
            let mut pairs = Vec::new();
            for i in 0..=m {
                for p in 0..fx.wires.slice_len(i) {
                    pairs.push((ft.wires.at(m - i, p), c[fx.wires.at(i, p)]));
                    pairs.push((ft.wires.at(m + i, p), c[fx.wires.at(i, p)]));
                }
            }
            let ct = ft.fill(pairs).ok_or_else(|| Error::Compose("coevaluation colouring".into()))?;
            let cs = fs
                .fill((0..x.target.len()).map(|p| (fs.wires.at(0, p), c[fx.wires.at(m, p)])))
                .ok_or_else(|| Error::Compose("coevaluation colouring".into()))?;
            let d = fx.dims(self.cat, &c);
            let rev: Vec<usize> = d.iter().rev().copied().collect();
            let total: usize = d.iter().product();
            let mut v = DMatrix::zeros(total * total, 1);
            for i in mixed_radix(&d) {
                let ir: Vec<usize> = i.iter().rev().copied().collect();
                v[(linear(&ir, &rev) * total + linear(&i, &d), 0)] = 1;
            }
            out.insert((cs, ct), v);
        }
        Ok(ThreeMorphism { source: s, target: t, payload: Payload::Blocks(out) })
    }

    /// `ev_X = (coev_{X†})† : X† ⊗ X → 1`.
    pub fn ev(&self, x: &TwoMorphismDiagram) -> Result<ThreeMorphism> {
        self.dagger(&self.coev(&x.dagger())?)
    }

    /// The unique map between vertex-free parallel diagrams whose wires all
    /// reach the boundary.
    pub fn canonical(&self, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<ThreeMorphism> {
        if !x.is_parallel(y) {
            return Err(Error::Parallel("canonical map between non-parallel diagrams".into()));
        }
        if x.vertex_count() + y.vertex_count() > 0 {
            return Err(Error::Compose("canonical maps need vertex-free diagrams".into()));
        }
        if self.engine == Engine::Statesum {
            return Ok(self.scalar(x, y, Complex64::new(1.0, 0.0)));
        }
        let (fx, fy) = (self.frame(x)?, self.frame(y)?);
        let ys: Vec<(Colouring, (Vec<usize>, Vec<usize>))> =
            fy.colourings(self.cat).into_iter().map(|c| { let e = fy.ends(&c); (c, e) }).collect();
        let mut out = Blocks::new();
        for cx in fx.colourings(self.cat) {
            let ends = fx.ends(&cx);
            let partners: Vec<&Colouring> = ys.iter().filter(|(_, e)| *e == ends).map(|(c, _)| c).collect();
            if partners.len() != 1 {
                return Err(Error::Compose("diagrams with closed wires have no canonical map".into()));
            }
            out.insert((cx, partners[0].clone()), DMatrix::from_element(1, 1, 1));
        }
        Ok(ThreeMorphism { source: x.clone(), target: y.clone(), payload: Payload::Blocks(out) })
    }

    /// The Zorro composite `(1_α □ ev_α) ⊗ (coev_α □ 1_α)`.
    pub fn zorro(&self, a: &OneMorphismWord) -> Result<TwoMorphismDiagram> {
        TwoMorphismDiagram::whisker_left(a, &unfold(a))?.otimes(&TwoMorphismDiagram::whisker_right(&fold(a), a)?)
    }

    /// The triangulator `τ_α` straightening the Zorro composite.
    pub fn triangulator(&self, a: &OneMorphismWord) -> Result<ThreeMorphism> {
        self.canonical(&self.zorro(a)?, &TwoMorphismDiagram::identity(a))
    }

    pub fn triangulator_inv(&self, a: &OneMorphismWord) -> Result<ThreeMorphism> {
        self.canonical(&TwoMorphismDiagram::identity(a), &self.zorro(a)?)
    }

    /// Colourings of a parallel pair agreeing on both boundary words, with
    /// block shapes from the algebraic model.
    pub fn hom_space(&self, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<HomSpace> {
        if !x.is_parallel(y) {
            return Err(Error::Parallel("hom space between non-parallel diagrams".into()));
        }
        if self.engine == Engine::Statesum {
            let dim = self.sphere_dimension(x, y)?;
            let blocks = vec![HomBlock { source: vec![], target: vec![], rows: 1, cols: dim }];
            return Ok(HomSpace { blocks, dim });
        }
        let (fx, fy) = (self.frame(x)?, self.frame(y)?);
        let ys: Vec<(Colouring, (Vec<usize>, Vec<usize>))> =
            fy.colourings(self.cat).into_iter().map(|c| { let e = fy.ends(&c); (c, e) }).collect();
        let mut blocks = Vec::new();
        for cx in fx.colourings(self.cat) {
            let ends = fx.ends(&cx);
            for (cy, e) in &ys {
                if *e == ends {
                    let (rows, cols) = (fy.dim(self.cat, cy), fx.dim(self.cat, &cx));
                    blocks.push(HomBlock { source: cx.clone(), target: cy.clone(), rows, cols });
                }
            }
        }
        let dim = blocks.iter().map(|b| b.rows * b.cols).sum();
        Ok(HomSpace { blocks, dim })
    }

    /// The dimension of the engine's state space on the glued sphere.
    pub fn sphere_dimension(&self, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<usize> {
        let s = glue_sphere(x, y)?;
        match self.engine {
            Engine::Triv => Ok(triv_state_space(self.cat, &s)?.total_dim),
            Engine::Statesum => Ok(state_space(self.cat, &s)?.rank.unwrap_or(0)),
        }
    }

    /// The distinguished element on the glued sphere: the value of its
    /// linear filling, projected into the state space.
    pub fn distinguished_norm(&self, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<f64> {
        let s = glue_sphere(x, y)?;
        let v = statesum_map(self.cat, &linear_fill(&s.cellular())?)?;
        Ok(v.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
    }

    /// Elementary matrices spanning the hom space.
    pub fn basis(&self, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<Vec<ThreeMorphism>> {
        let h = self.hom_space(x, y)?;
        if self.engine == Engine::Statesum {
            return Ok((0..h.dim).map(|_| self.scalar(x, y, Complex64::new(1.0, 0.0))).collect());
        }
        let mut out = Vec::new();
        for b in &h.blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    let mut m = DMatrix::zeros(b.rows, b.cols);
                    m[(r, c)] = 1;
                    let blocks = Blocks::from([((b.source.clone(), b.target.clone()), m)]);
                    out.push(ThreeMorphism { source: x.clone(), target: y.clone(), payload: Payload::Blocks(blocks) });
                }
            }
        }
        Ok(out)
    }

    /// Largest entry of the difference, infinite for different boundaries.
    pub fn distance(&self, a: &ThreeMorphism, b: &ThreeMorphism) -> f64 {
        if a.source != b.source || a.target != b.target {
            return f64::INFINITY;
        }
        match (&a.payload, &b.payload) {
            (Payload::Scalar(x), Payload::Scalar(y)) => (x - y).norm(),
            (Payload::Blocks(x), Payload::Blocks(y)) => {
                let mut worst = 0i64;
                for (k, m) in x {
                    let d = match y.get(k) {
                        Some(n) if n.shape() == m.shape() => (m - n).abs().max(),
                        Some(_) => return f64::INFINITY,
                        None => m.abs().max(),
                    };
                    worst = worst.max(d);
                }
                for (k, n) in y {
                    if !x.contains_key(k) {
                        worst = worst.max(n.abs().max());
                    }
                }
                worst as f64
            }
            _ => f64::INFINITY,
        }
    }
}

/// The 1-morphism invariant of the state-sum model: the grade `h` for which
/// a vertex `α → (h, +)` closes up to a non-zero hom space.
pub fn one_morphism_grade(model: &GrayModel<'_>, a: &OneMorphismWord) -> Result<usize> {
    let cat = model.cat;
    let mut found = Vec::new();
    for h in 0..cat.group.order() {
        let name = cat.group.elements[h].clone();
        let out = vec![crate::defect_data::SignedLabel::plus(name)];
        let kind = super::EventKind::vertex("probe", a.entries.clone(), out);
        let x = TwoMorphismDiagram::single(a.clone(), super::LayerEvent::bare(kind))?;
        if model.sphere_dimension(&x, &x)? > 0 {
            found.push(h);
        }
    }
    match found.as_slice() {
        [h] => Ok(*h),
        _ => Err(Error::Degeneracy(format!("{} grades close up the word", found.len()))),
    }
}
