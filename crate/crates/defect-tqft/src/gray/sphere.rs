//! The decorated sphere obtained by gluing two parallel diagrams.

use super::{EventKind, TwoMorphismDiagram, Wires};
use crate::defect_data::{Sign, SignedLabel};
use crate::error::{Error, Result};
use crate::strata::{DecoratedSurface, SurfaceVertex};

/// A leg of a vertex: the slot it touches and its entry in the vertex word.
#[derive(Debug, Clone)]
pub(crate) struct Leg {
    pub slice: usize,
    pub pos: usize,
    pub sign: Sign,
}

/// Legs of every vertex in layer order, listed along its d1 word: the
/// outputs left to right, then the inputs right to left with flipped signs.
pub(crate) fn vertex_legs(d: &TwoMorphismDiagram) -> Vec<Vec<Leg>> {
    let mut out = Vec::new();
    for (k, l) in d.layers.iter().enumerate() {
        let EventKind::Vertex { input, output, .. } = &l.kind else { continue };
        let lw = l.left.len();
        let mut legs: Vec<Leg> =
            output.iter().enumerate().map(|(j, x)| Leg { slice: k + 1, pos: lw + j, sign: x.sign }).collect();
        legs.extend(input.iter().enumerate().rev().map(|(j, x)| Leg { slice: k, pos: lw + j, sign: x.sign.flip() }));
        out.push(legs);
    }
    out
}

/// The sphere with `x` as southern and `y` as northern hemisphere. Vertices
/// of `x` come first and read their d1 words; those of `y` read the reversed
/// words, as seen from the other side.
pub fn glue_sphere(x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> Result<DecoratedSurface> {
    if !x.is_parallel(y) {
        return Err(Error::Parallel(format!(
            "{:?} -> {:?} against {:?} -> {:?}",
            x.source.entries.iter().map(SignedLabel::to_string).collect::<Vec<_>>(),
            x.target.entries.iter().map(SignedLabel::to_string).collect::<Vec<_>>(),
            y.source.entries.iter().map(SignedLabel::to_string).collect::<Vec<_>>(),
            y.target.entries.iter().map(SignedLabel::to_string).collect::<Vec<_>>(),
        )));
    }
    let (wx, wy) = (x.wires()?, y.wires()?);
    let (mx, my) = (x.layers.len(), y.layers.len());
    let n = wx.count + wy.count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let mut join = |a: usize, b: usize| {
        let (a, b) = (find(&mut parent, a), find(&mut parent, b));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    };
    for p in 0..x.source.len() {
        join(wx.at(0, p), wx.count + wy.at(0, p));
    }
    for p in 0..x.target.len() {
        join(wx.at(mx, p), wx.count + wy.at(my, p));
    }
    let label_of = |c: usize| if c < wx.count { wx.labels[c].clone() } else { wy.labels[c - wx.count].clone() };

    // sphere vertices with their words as (component, sign)
    let mut words: Vec<Vec<(usize, Sign)>> = Vec::new();
    let legs_of = |d: &TwoMorphismDiagram, w: &Wires, off: usize| -> Vec<Vec<(usize, Sign)>> {
        vertex_legs(d).into_iter().map(|legs| legs.iter().map(|g| (off + w.at(g.slice, g.pos), g.sign)).collect()).collect()
    };
    words.extend(legs_of(x, &wx, 0));
    for w in legs_of(y, &wy, wx.count) {
        words.push(w.into_iter().rev().map(|(c, s)| (c, s.flip())).collect());
    }
    for w in words.iter_mut() {
        for e in w.iter_mut() {
            e.0 = find(&mut parent, e.0);
        }
    }

    let mut ends: Vec<Vec<(usize, usize, Sign)>> = vec![vec![]; n];
    for (v, w) in words.iter().enumerate() {
        for (i, &(c, s)) in w.iter().enumerate() {
            ends[c].push((v, i, s));
        }
    }
    let mut s = DecoratedSurface { vertices: vec![], ..DecoratedSurface::empty() };
    let mut darts: Vec<Vec<usize>> = words.iter().map(|w| vec![usize::MAX; w.len()]).collect();
    for c in 0..n {
        if find(&mut parent, c) != c {
            continue;
        }
        match ends[c].as_slice() {
            [] => s.circles.push(label_of(c)),
            [a, b] => {
                let (tail, head) = match (a.2, b.2) {
                    (Sign::Plus, Sign::Minus) => (a, b),
                    (Sign::Minus, Sign::Plus) => (b, a),
                    _ => return Err(Error::Topology(format!("wire {} has two ends of the same sign", label_of(c)))),
                };
                let e = s.edges.len();
                s.edges.push(label_of(c));
                darts[tail.0][tail.1] = 2 * e;
                darts[head.0][head.1] = 2 * e + 1;
            }
            other => return Err(Error::Topology(format!("wire {} has {} ends", label_of(c), other.len()))),
        }
    }
    s.vertices = darts.into_iter().map(|darts| SurfaceVertex { label: None, darts }).collect();
    if s.vertices.is_empty() && s.circles.is_empty() {
        s.spheres = 1;
    }
    s.check_map()?;
    let components = s.component_count();
    if !s.vertices.is_empty() && s.euler_characteristic() != 2 * components as i64 {
        return Err(Error::Topology(format!(
            "glued surface has Euler characteristic {} over {components} components",
            s.euler_characteristic()
        )));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_data::{build_group_defect_data, GroupTable};
    use crate::gray::{fold, unfold, LayerEvent, OneMorphismWord};

    fn g_word(n: usize) -> OneMorphismWord {
        let dd = build_group_defect_data(&GroupTable::cyclic(2)).unwrap();
        OneMorphismWord::new(&dd, vec![SignedLabel::plus("g"); n]).unwrap()
    }

    #[test]
    fn identities_glue_to_circles() {
        for k in 0..4 {
            let a = if k == 0 { OneMorphismWord::identity("*") } else { g_word(k) };
            let id = TwoMorphismDiagram::identity(&a);
            let s = glue_sphere(&id, &id).unwrap();
            assert!(s.vertices.is_empty());
            assert_eq!(s.circles.len(), k);
        }
    }

    #[test]
    fn vertex_against_vertex_is_a_dipole() {
        let a = g_word(2);
        let v = EventKind::group_vertex(a.entries.clone(), vec![]);
        let x = TwoMorphismDiagram::single(a.clone(), LayerEvent::bare(v)).unwrap();
        let s = glue_sphere(&x, &x).unwrap();
        assert_eq!((s.vertices.len(), s.edges.len(), s.faces().count), (2, 2, 2));
        let z = TwoMorphismDiagram::whisker_left(&g_word(1), &unfold(&g_word(1)))
            .unwrap()
            .otimes(&TwoMorphismDiagram::whisker_right(&fold(&g_word(1)), &g_word(1)).unwrap())
            .unwrap();
        let s = glue_sphere(&z, &TwoMorphismDiagram::identity(&g_word(1))).unwrap();
        assert_eq!(s.circles.len(), 1);
    }

    #[test]
    fn non_parallel_pairs_are_rejected() {
        let x = TwoMorphismDiagram::identity(&g_word(1));
        let y = TwoMorphismDiagram::identity(&g_word(2));
        assert!(matches!(glue_sphere(&x, &y), Err(Error::Parallel(_))));
    }
}
