//! The trivial and state-sum defect TQFTs on combinatorial bordisms.
//!
//! Boundary state spaces are direct sums over colourings of the boundary
//! edges. At a boundary vertex with word `w` the block factor has the
//! fusion-tree basis of the reversed word; a block's basis is the product
//! of its vertex bases with the first vertex most significant.

mod statesum;
mod tensor;
mod triv;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::defect_data::Sign;
use crate::error::{Error, Result};
use crate::fusion::{hom_dimension, FusionCategoryData};
use crate::strata::{BoundaryRole, DecoratedSurface, StratifiedBordism};

pub use statesum::{closed_invariant, state_space, statesum_map, statesum_vector, STATE_SPACE_RANK_TOL};
pub use triv::{triv_invariant, triv_state_space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Triv,
    Statesum,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triv" => Ok(Engine::Triv),
            "statesum" => Ok(Engine::Statesum),
            _ => Err(Error::Parse(format!("unknown engine {s}"))),
        }
    }
}

/// One summand of a state space: a colouring of the boundary edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub colouring: Vec<usize>,
    pub vertex_dims: Vec<usize>,
    pub dim: usize,
    pub offset: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateSpace {
    /// Blocks of positive dimension, in lexicographic colouring order.
    pub blocks: Vec<Block>,
    pub total_dim: usize,
    /// Image dimension of the cylinder projector, for the state-sum engine.
    pub rank: Option<usize>,
    #[serde(skip)]
    pub projector: Option<DMatrix<Complex64>>,
}

/// A block linear map between two state spaces.
#[derive(Debug, Clone)]
pub struct LinearMap<T: nalgebra::Scalar> {
    pub source: StateSpace,
    pub target: StateSpace,
    pub matrix: DMatrix<T>,
}

/// Grade of a 2-label in the category's grading group. A trivially graded
/// category puts every label in the unit grade.
pub fn label_grade(cat: &FusionCategoryData, label: &str) -> Result<usize> {
    if cat.group.order() == 1 {
        return Ok(cat.group.identity);
    }
    cat.group
        .index_of(label)
        .ok_or_else(|| Error::Colour(format!("label {label} is not a grade of {}", cat.name)))
}

/// Allowed colours of every 2-stratum.
pub fn colour_options(cat: &FusionCategoryData, b: &StratifiedBordism) -> Result<Vec<Vec<usize>>> {
    b.strata2.iter().map(|r| Ok(cat.simples_of_grade(label_grade(cat, &r.label)?))).collect()
}

pub(crate) fn coloured(w: &[(usize, Sign)], colour: &[usize]) -> Vec<(usize, Sign)> {
    w.iter().map(|&(r, s)| (colour[r], s)).collect()
}

/// Edges and vertices of a list of cellular surfaces, concatenated.
#[derive(Debug, Clone)]
pub(crate) struct SurfaceList {
    pub surfaces: Vec<DecoratedSurface>,
    pub edge_offsets: Vec<usize>,
    pub vertex_offsets: Vec<usize>,
}

impl SurfaceList {
    pub fn new(surfaces: Vec<DecoratedSurface>) -> Self {
        let mut edge_offsets = vec![0];
        let mut vertex_offsets = vec![0];
        for s in &surfaces {
            edge_offsets.push(edge_offsets.last().unwrap() + s.edges.len());
            vertex_offsets.push(vertex_offsets.last().unwrap() + s.vertices.len());
        }
        Self { surfaces, edge_offsets, vertex_offsets }
    }

    /// Vertex words in global edge numbering.
    pub fn vertex_words(&self) -> Vec<Vec<(usize, Sign)>> {
        let mut out = Vec::new();
        for (k, s) in self.surfaces.iter().enumerate() {
            for p in 0..s.vertices.len() {
                out.push(s.vertex_word(p).iter().map(|&(e, sg)| (self.edge_offsets[k] + e, sg)).collect());
            }
        }
        out
    }

    pub fn edge_labels(&self) -> Vec<&str> {
        self.surfaces.iter().flat_map(|s| s.edges.iter().map(|l| l.as_str())).collect()
    }

    pub fn face_count(&self) -> usize {
        self.surfaces.iter().map(|s| s.faces().count).sum()
    }

    pub fn state_space(&self, cat: &FusionCategoryData) -> Result<StateSpace> {
        let options: Vec<Vec<usize>> = self
            .edge_labels()
            .iter()
            .map(|l| Ok(cat.simples_of_grade(label_grade(cat, l)?)))
            .collect::<Result<_>>()?;
        let words = self.vertex_words();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for colouring in product(&options) {
            let vertex_dims: Vec<usize> = words.iter().map(|w| hom_dimension(cat, &coloured(w, &colouring))).collect();
            let dim = vertex_dims.iter().product();
            if dim > 0 {
                blocks.push(Block { colouring, vertex_dims, dim, offset });
                offset += dim;
            }
        }
        Ok(StateSpace { blocks, total_dim: offset, rank: None, projector: None })
    }
}

/// The surfaces of the incoming and outgoing boundary of a bordism.
pub(crate) fn boundary_lists(b: &StratifiedBordism) -> (Vec<usize>, Vec<usize>, SurfaceList, SurfaceList) {
    let pick = |role| -> Vec<usize> { (0..b.boundary.len()).filter(|&c| b.boundary[c].role == role).collect() };
    let (ins, outs) = (pick(BoundaryRole::In), pick(BoundaryRole::Out));
    let list = |cs: &[usize]| SurfaceList::new(cs.iter().map(|&c| b.boundary[c].surface.clone()).collect());
    let (li, lo) = (list(&ins), list(&outs));
    (ins, outs, li, lo)
}

/// All tuples with entries from the given option lists, lexicographically.
pub fn product(options: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}
