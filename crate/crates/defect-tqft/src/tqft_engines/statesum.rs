//! The state-sum engine on fine stratifications.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::tensor::Tensor;
use super::{boundary_lists, coloured, colour_options, LinearMap, StateSpace};
use crate::defect_data::Sign;
use crate::error::{Error, Result};
use crate::fusion::{edge_pairing, evaluate_sphere_graph, global_dimension_neutral, hom_dimension, CMatrix, EdgePairing, FusionCategoryData};
use crate::strata::{cylinder, DecoratedSurface, End, StratifiedBordism};

/// Singular values above this count towards the rank of a projector.
pub const STATE_SPACE_RANK_TOL: f64 = 1e-6;

struct Evaluator<'a> {
    cat: &'a FusionCategoryData,
    b: &'a StratifiedBordism,
    vertices: HashMap<(usize, Vec<usize>), (Vec<usize>, Vec<Complex64>)>,
    pairings: HashMap<Vec<(usize, Sign)>, EdgePairing>,
}

impl<'a> Evaluator<'a> {
    fn new(cat: &'a FusionCategoryData, b: &'a StratifiedBordism) -> Self {
        Self { cat, b, vertices: HashMap::new(), pairings: HashMap::new() }
    }

    fn pairing(&mut self, w: Vec<(usize, Sign)>) -> Result<&EdgePairing> {
        if !self.pairings.contains_key(&w) {
            let p = edge_pairing(self.cat, &w)?;
            self.pairings.insert(w.clone(), p);
        }
        Ok(&self.pairings[&w])
    }

    fn vertex(&mut self, v: usize, colour: &[usize]) -> Result<Tensor> {
        let link = &self.b.strata0[v].link;
        let key: Vec<usize> = link.edges.iter().map(|e| colour[e.stratum]).chain(link.loops.iter().map(|&r| colour[r])).collect();
        if !self.vertices.contains_key(&(v, key.clone())) {
            let g = link.colored(self.b, &|r| colour[r])?;
            let value = evaluate_sphere_graph(self.cat, &g)?;
            self.vertices.insert((v, key.clone()), (value.dims, value.values));
        }
        let (dims, data) = &self.vertices[&(v, key)];
        let axes = link.nodes.iter().map(|n| 2 * n.stratum + usize::from(n.end == crate::strata::NodeEnd::Head)).collect();
        Ok(Tensor::new(axes, dims.clone(), data.clone()))
    }

    /// Contraction for one colouring; open axes are labelled by `open`.
    fn summand(&mut self, colour: &[usize], open: &HashMap<End, usize>) -> Result<Tensor> {
        let b = self.b;
        let cat = self.cat;
        let mut weight = Complex64::new(1.0, 0.0);
        for (r, s) in b.strata2.iter().enumerate() {
            weight *= cat.qdim(colour[r]).powi(s.euler_char as i32);
        }
        let mut tensors: Vec<Tensor> = (0..b.strata0.len()).map(|v| self.vertex(v, colour)).collect::<Result<_>>()?;
        let mut strands = Vec::new();
        for (e, s) in b.strata1.iter().enumerate() {
            let w = coloured(&s.word, colour);
            let (tail, head) = (2 * e, 2 * e + 1);
            match (s.tail, s.head) {
                (End::Closed, _) | (_, End::Closed) => weight *= hom_dimension(cat, &w) as f64,
                (End::Interior(_), End::Interior(h)) => {
                    let coev = self.pairing(w)?.coev.transpose();
                    tensors[h] = tensors[h].map_axis(head, &coev, tail);
                }
                (End::Interior(t), end) => {
                    let id = CMatrix::identity(tensors[t].dims[pos(&tensors[t], tail)], tensors[t].dims[pos(&tensors[t], tail)]);
                    tensors[t] = tensors[t].map_axis(tail, &id, open[&end]);
                }
                (end, End::Interior(h)) => {
                    let n = tensors[h].dims[pos(&tensors[h], head)];
                    tensors[h] = tensors[h].map_axis(head, &CMatrix::identity(n, n), open[&end]);
                }
                (t_end, h_end) => {
                    let ev = self.pairing(w)?.ev.clone();
                    let data = ev.transpose().as_slice().to_vec();
                    strands.push(Tensor::new(vec![open[&h_end], open[&t_end]], vec![ev.nrows(), ev.ncols()], data));
                }
            }
        }
        let mut acc = Tensor::scalar(weight);
        for t in tensors.iter().chain(&strands) {
            acc = acc.contract(t);
        }
        Ok(acc)
    }
}

fn pos(t: &Tensor, label: usize) -> usize {
    t.axes.iter().position(|&a| a == label).unwrap()
}

/// Sum over the colourings extending `fixed`, with 1-strata checked as soon
/// as their word is fully coloured.
fn sum_over_colourings(
    ev: &mut Evaluator,
    fixed: &[Option<usize>],
    open: &HashMap<End, usize>,
    order: &[usize],
) -> Result<Vec<Complex64>> {
    let b = ev.b;
    let cat = ev.cat;
    let options = colour_options(cat, b)?;
    let n2 = b.strata2.len();
    let mut checks: Vec<Vec<usize>> = vec![vec![]; n2];
    for (e, s) in b.strata1.iter().enumerate() {
        if let Some(&last) = s.word.iter().map(|(r, _)| r).max() {
            checks[last].push(e);
        }
    }
    let mut total: Option<Vec<Complex64>> = None;
    let mut colour = vec![0usize; n2];
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    // iterative depth-first search over (stratum, option index)
    while let Some((r, k)) = stack.pop() {
        if r == n2 {
            let t = ev.summand(&colour, open)?;
            if t.data.is_empty() {
                continue;
            }
            let data = t.permuted(order);
            match total.as_mut() {
                None => total = Some(data),
                Some(acc) => acc.iter_mut().zip(&data).for_each(|(a, x)| *a += x),
            }
            continue;
        }
        let choices: Vec<usize> = match fixed[r] {
            Some(c) => vec![c],
            None => options[r].clone(),
        };
        if k >= choices.len() {
            continue;
        }
        stack.push((r, k + 1));
        colour[r] = choices[k];
        let ok = checks[r].iter().all(|&e| hom_dimension(cat, &coloured(&b.strata1[e].word, &colour)) > 0);
        if ok {
            stack.push((r + 1, 0));
        }
    }
    let scale = global_dimension_neutral(cat).powi(-(b.strata3.len() as i32));
    Ok(total.map(|v| v.into_iter().map(|z| z * scale).collect()).unwrap_or_default())
}

/// Boundary 2-strata colours from a colouring of the incoming then outgoing edges.
fn fix_boundary(b: &StratifiedBordism, comps: &[usize], colouring: &[usize]) -> Option<Vec<Option<usize>>> {
    let mut fixed = vec![None; b.strata2.len()];
    let mut k = 0;
    for &c in comps {
        for &r in &b.boundary[c].edge_strata {
            match fixed[r] {
                Some(x) if x != colouring[k] => return None,
                _ => fixed[r] = Some(colouring[k]),
            }
            k += 1;
        }
    }
    Some(fixed)
}

fn open_ends(b: &StratifiedBordism, comps: &[usize]) -> (HashMap<End, usize>, Vec<usize>) {
    let base = 2 * b.strata1.len();
    let mut open = HashMap::new();
    let mut order = Vec::new();
    for &c in comps {
        for p in 0..b.boundary[c].vertex_strata.len() {
            let label = base + order.len();
            open.insert(End::Boundary { component: c, vertex: p }, label);
            order.push(label);
        }
    }
    (open, order)
}

/// The state sum with a fixed boundary colouring, as a tensor over the
/// boundary vertices (incoming first, then outgoing). Incoming axes use the
/// tree basis of the reversed vertex word, outgoing axes that of the word.
pub fn statesum_vector(cat: &FusionCategoryData, b: &StratifiedBordism, colouring: &[usize]) -> Result<Vec<Complex64>> {
    b.check_fine()?;
    let (ins, outs, _, _) = boundary_lists(b);
    let comps: Vec<usize> = ins.iter().chain(&outs).copied().collect();
    let Some(fixed) = fix_boundary(b, &comps, colouring) else {
        return Ok(vec![]);
    };
    let (open, order) = open_ends(b, &comps);
    let mut ev = Evaluator::new(cat, b);
    sum_over_colourings(&mut ev, &fixed, &open, &order)
}

/// The linear map of a bordism from its incoming to its outgoing boundary.
pub fn statesum_map(cat: &FusionCategoryData, b: &StratifiedBordism) -> Result<LinearMap<Complex64>> {
    b.check_fine()?;
    let (ins, outs, lin, lout) = boundary_lists(b);
    let source = lin.state_space(cat)?;
    let target = lout.state_space(cat)?;
    let comps: Vec<usize> = ins.iter().chain(&outs).copied().collect();
    let (open, labels) = open_ends(b, &comps);
    let n_in = lin.vertex_offsets.last().copied().unwrap_or(0);
    let out_words = lout.vertex_words();
    let out_labels = lout.edge_labels();
    let mut order: Vec<usize> = labels[n_in..].to_vec();
    order.extend_from_slice(&labels[..n_in]);
    let global = global_dimension_neutral(cat);
    let mut matrix = DMatrix::<Complex64>::zeros(target.total_dim, source.total_dim);
    let mut ev = Evaluator::new(cat, b);
    for sb in &source.blocks {
        for tb in &target.blocks {
            let colouring: Vec<usize> = sb.colouring.iter().chain(&tb.colouring).copied().collect();
            let Some(fixed) = fix_boundary(b, &comps, &colouring) else {
                continue;
            };
            let data = sum_over_colourings(&mut ev, &fixed, &open, &labels)?;
            if data.is_empty() {
                continue;
            }
            let dims: Vec<usize> = sb.vertex_dims.iter().chain(&tb.vertex_dims).copied().collect();
            let mut t = Tensor::new(labels.clone(), dims, data);
            for (q, w) in out_words.iter().enumerate() {
                let p = ev.pairing(coloured(w, &tb.colouring))?;
                let coev = p.coev.clone();
                let label = labels[n_in + q];
                t = t.map_axis(label, &coev, label);
            }
            let mut norm = global.powi(lout.face_count() as i32);
            for (e, _) in out_labels.iter().enumerate() {
                norm /= cat.qdim(tb.colouring[e]);
            }
            let flat = t.permuted(&order);
            for i in 0..tb.dim {
                for j in 0..sb.dim {
                    matrix[(tb.offset + i, sb.offset + j)] = flat[i * sb.dim + j] * norm;
                }
            }
        }
    }
    Ok(LinearMap { source, target, matrix })
}

/// The state-sum invariant of a closed fine stratification.
pub fn closed_invariant(cat: &FusionCategoryData, b: &StratifiedBordism) -> Result<Complex64> {
    if !b.is_closed() {
        return Err(Error::Topology("closed invariant of a bordism with boundary".into()));
    }
    Ok(statesum_vector(cat, b, &[])?.first().copied().unwrap_or_default())
}

/// The image of the cylinder projector, with its rank.
pub fn state_space(cat: &FusionCategoryData, s: &DecoratedSurface) -> Result<StateSpace> {
    let p = statesum_map(cat, &cylinder(s))?;
    let rank = if p.matrix.is_empty() {
        0
    } else {
        p.matrix.clone().svd(false, false).singular_values.iter().filter(|&&x| x > STATE_SPACE_RANK_TOL).count()
    };
    let mut space = p.source;
    space.rank = Some(rank);
    space.projector = Some(p.matrix);
    Ok(space)
}
