//! The trivial defect TQFT: exact, on bordisms without interior vertices.

use nalgebra::DMatrix;

use super::{boundary_lists, coloured, colour_options, product, LinearMap, StateSpace, SurfaceList};
use crate::error::{Error, Result};
use crate::fusion::{hom_basis, hom_dimension, reverse_simple_word, FusionCategoryData};
use crate::strata::{DecoratedSurface, End, StratifiedBordism};

pub fn triv_state_space(cat: &FusionCategoryData, s: &DecoratedSurface) -> Result<StateSpace> {
    SurfaceList::new(vec![s.cellular()]).state_space(cat)
}

fn split_index(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = i % dims[k];
        i /= dims[k];
    }
    out
}

/// The exact linear map: per colouring, the product of the dimensions of
/// the closed 1-strata times the identifications along open 1-strata.
pub fn triv_invariant(cat: &FusionCategoryData, b: &StratifiedBordism) -> Result<LinearMap<i64>> {
    if !b.strata0.is_empty() {
        return Err(Error::Topology("the trivial theory needs bordisms without interior vertices".into()));
    }
    let (ins, outs, lin, lout) = boundary_lists(b);
    let source = lin.state_space(cat)?;
    let target = lout.state_space(cat)?;
    // boundary vertex slot of each end: (is outgoing, global vertex index)
    let mut slot = std::collections::HashMap::new();
    for (side, comps, list) in [(false, &ins, &lin), (true, &outs, &lout)] {
        for (k, &c) in comps.iter().enumerate() {
            for p in 0..b.boundary[c].vertex_strata.len() {
                slot.insert(End::Boundary { component: c, vertex: p }, (side, list.vertex_offsets[k] + p));
            }
        }
    }
    let mut strands = Vec::new();
    let mut closed = Vec::new();
    for (e, s) in b.strata1.iter().enumerate() {
        match (s.tail, s.head) {
            (End::Closed, End::Closed) => closed.push(e),
            (t, h) => strands.push((slot[&t], slot[&h])),
        }
    }
    let options = colour_options(cat, b)?;
    let in_words = lin.vertex_words();
    let out_words = lout.vertex_words();
    let mut matrix = DMatrix::<i64>::zeros(target.total_dim, source.total_dim);
    for sb in &source.blocks {
        for tb in &target.blocks {
            let mut fixed = vec![None; b.strata2.len()];
            let mut consistent = true;
            for (comps, colouring) in [(&ins, &sb.colouring), (&outs, &tb.colouring)] {
                let mut k = 0;
                for &c in comps.iter() {
                    for &r in &b.boundary[c].edge_strata {
                        if fixed[r].is_some_and(|x| x != colouring[k]) {
                            consistent = false;
                        }
                        fixed[r] = Some(colouring[k]);
                        k += 1;
                    }
                }
            }
            if !consistent {
                continue;
            }
            let free: Vec<usize> = (0..b.strata2.len()).filter(|&r| fixed[r].is_none()).collect();
            let choices: Vec<Vec<usize>> = free.iter().map(|&r| options[r].clone()).collect();
            let mut weight: i64 = 0;
            let mut colour: Vec<usize> = fixed.iter().map(|x| x.unwrap_or(0)).collect();
            for pick in product(&choices) {
                for (&r, &c) in free.iter().zip(&pick) {
                    colour[r] = c;
                }
                weight += closed
                    .iter()
                    .map(|&e| hom_dimension(cat, &coloured(&b.strata1[e].word, &colour)) as i64)
                    .product::<i64>();
            }
            if weight == 0 {
                continue;
            }
            let trees = |words: &[Vec<(usize, crate::defect_data::Sign)>], col: &[usize]| -> Vec<Vec<Vec<usize>>> {
                words.iter().map(|w| hom_basis(cat, &reverse_simple_word(&coloured(w, col))).trees).collect()
            };
            let (tin, tout) = (trees(&in_words, &sb.colouring), trees(&out_words, &tb.colouring));
            for j in 0..sb.dim {
                let ii = split_index(j, &sb.vertex_dims);
                for i in 0..tb.dim {
                    let oo = split_index(i, &tb.vertex_dims);
                    let tree = |(out, v): (bool, usize)| if out { &tout[v][oo[v]] } else { &tin[v][ii[v]] };
                    let hit = strands.iter().all(|&(x, y)| {
                        let (a, c) = (tree(x), tree(y));
                        if x.0 != y.0 {
                            a == c
                        } else {
                            a.iter().rev().eq(c.iter())
                        }
                    });
                    if hit {
                        matrix[(tb.offset + i, sb.offset + j)] = weight;
                    }
                }
            }
        }
    }
    Ok(LinearMap { source, target, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::{compose, dipole_ball, product_cylinder, BoundaryRole};

    fn cat(name: &str) -> FusionCategoryData {
        FusionCategoryData::bundled(name).unwrap()
    }

    #[test]
    fn state_space_blocks() {
        let z2 = cat("vec_z2_graded");
        assert_eq!(triv_state_space(&z2, &DecoratedSurface::sphere_with_circle("g")).unwrap().total_dim, 1);
        assert_eq!(triv_state_space(&z2, &DecoratedSurface::theta(["g", "g", "1"])).unwrap().total_dim, 1);
        assert_eq!(triv_state_space(&z2, &DecoratedSurface::empty()).unwrap().total_dim, 1);
    }

    #[test]
    fn product_cylinders_are_identities() {
        for (c, s) in [
            ("vec_z2_graded", DecoratedSurface::theta(["g", "g", "1"])),
            ("fibonacci", DecoratedSurface::dipole(&["1", "1", "1", "1"])),
            ("vec_z2xz2", DecoratedSurface::torus("g", "1")),
        ] {
            let m = triv_invariant(&cat(c), &product_cylinder(&s)).unwrap();
            let n = m.source.total_dim;
            assert!(n > 0);
            assert_eq!(m.matrix, DMatrix::identity(n, n), "{c}");
        }
    }

    #[test]
    fn gluing_multiplies_and_closed_loops_count() {
        let c = cat("fibonacci");
        let s = DecoratedSurface::dipole(&["1", "1", "1", "1"]);
        let cup = dipole_ball(&s, BoundaryRole::Out).unwrap();
        let cap = dipole_ball(&s, BoundaryRole::In).unwrap();
        let (a, b) = (triv_invariant(&c, &cup).unwrap(), triv_invariant(&c, &cap).unwrap());
        let glued = triv_invariant(&c, &compose(&cup, &cap).unwrap()).unwrap();
        assert_eq!(glued.matrix, &b.matrix * &a.matrix);
        // one closed 1-stratum: the sum over colourings of its hom dimension
        let total: usize = product(&vec![vec![0, 1]; 4])
            .iter()
            .map(|col| hom_dimension(&c, &col.iter().enumerate().map(|(_, &x)| (x, crate::defect_data::Sign::Plus)).collect::<Vec<_>>()))
            .sum();
        assert_eq!(glued.matrix[(0, 0)], total as i64);
        let cyl = product_cylinder(&s);
        let through = triv_invariant(&c, &compose(&compose(&cup, &cyl).unwrap(), &cap).unwrap()).unwrap();
        assert_eq!(through.matrix, glued.matrix);
    }

    #[test]
    fn interior_vertices_are_rejected() {
        let b = crate::strata::cylinder(&DecoratedSurface::sphere());
        assert!(triv_invariant(&cat("vec"), &b).is_err());
    }
}
