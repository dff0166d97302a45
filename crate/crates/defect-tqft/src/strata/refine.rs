//! Local refinements of stratified bordisms away from the boundary.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{End, LinkEdge, LinkGraph, LinkNode, NodeEnd, StratifiedBordism, Stratum0, Stratum1, Stratum2};
use crate::defect_data::Sign;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefineMove {
    /// Insert a vertex in the middle of a 1-stratum.
    EdgeSubdivide,
    /// Cone a disc 2-stratum from a new interior point.
    FaceStar,
    /// Cone the boundary of a ball 3-stratum from a new interior point.
    CellCone,
}

impl RefineMove {
    pub const ALL: [RefineMove; 3] = [RefineMove::EdgeSubdivide, RefineMove::FaceStar, RefineMove::CellCone];
}

/// Index of the node of a 1-stratum end in the link of its vertex.
fn node_index(b: &StratifiedBordism, v: usize, e: usize, end: NodeEnd) -> usize {
    b.strata0[v].link.nodes.iter().position(|n| n.stratum == e && n.end == end).expect("node of a 1-stratum end")
}

fn interior(end: End) -> Option<usize> {
    match end {
        End::Interior(v) => Some(v),
        _ => None,
    }
}

fn touches_boundary(s: &Stratum1) -> bool {
    matches!(s.tail, End::Boundary { .. }) || matches!(s.head, End::Boundary { .. })
}

/// Inserts `entry` into the word of `e` at index `j`, shifting link positions.
fn insert_entry(b: &mut StratifiedBordism, e: usize, j: usize, entry: (usize, Sign)) {
    let m = b.strata1[e].word.len();
    let (tail, head) = (b.strata1[e].tail, b.strata1[e].head);
    if let Some(v) = interior(tail) {
        let n = node_index(b, v, e, NodeEnd::Tail);
        for le in b.strata0[v].link.edges.iter_mut() {
            for p in [&mut le.tail, &mut le.head] {
                if p.0 == n && p.1 >= j {
                    p.1 += 1;
                }
            }
        }
    }
    if let Some(v) = interior(head) {
        let n = node_index(b, v, e, NodeEnd::Head);
        for le in b.strata0[v].link.edges.iter_mut() {
            for p in [&mut le.tail, &mut le.head] {
                if p.0 == n && p.1 + j > m - 1 {
                    p.1 += 1;
                }
            }
        }
    }
    b.strata1[e].word.insert(j, entry);
}

/// Sites at which a move applies.
pub fn valid_sites(b: &StratifiedBordism, mv: RefineMove) -> Vec<usize> {
    let n = match mv {
        RefineMove::EdgeSubdivide => b.strata1.len(),
        RefineMove::FaceStar => b.strata2.len(),
        RefineMove::CellCone => b.strata3.len(),
    };
    (0..n).filter(|&k| refine(b, mv, k, "1").is_ok()).collect()
}

/// Applies one refinement; `neutral` labels 2-strata created inside a 3-stratum.
pub fn refine(b: &StratifiedBordism, mv: RefineMove, site: usize, neutral: &str) -> Result<StratifiedBordism> {
    match mv {
        RefineMove::EdgeSubdivide => edge_subdivide(b, site),
        RefineMove::FaceStar => face_star(b, site),
        RefineMove::CellCone => cell_cone(b, site, neutral),
    }
}

fn edge_subdivide(b: &StratifiedBordism, e: usize) -> Result<StratifiedBordism> {
    let s = b.strata1.get(e).ok_or_else(|| Error::InvalidSite(format!("no 1-stratum {e}")))?.clone();
    let mut out = b.clone();
    let p = out.strata0.len();
    let m = s.word.len();
    let (upper, lower) = if s.tail == End::Closed {
        out.strata1[e].tail = End::Interior(p);
        out.strata1[e].head = End::Interior(p);
        (e, e)
    } else {
        let e2 = out.strata1.len();
        out.strata1.push(Stratum1 { tail: End::Interior(p), ..s.clone() });
        out.strata1[e].head = End::Interior(p);
        match s.head {
            End::Interior(h) => {
                let n = node_index(b, h, e, NodeEnd::Head);
                out.strata0[h].link.nodes[n].stratum = e2;
            }
            End::Boundary { component, vertex } => out.boundary[component].vertex_strata[vertex] = e2,
            End::Closed => unreachable!(),
        }
        (e2, e)
    };
    let mut link = LinkGraph {
        nodes: vec![LinkNode { stratum: lower, end: NodeEnd::Head }, LinkNode { stratum: upper, end: NodeEnd::Tail }],
        ..Default::default()
    };
    for (i, &(r, sign)) in s.word.iter().enumerate() {
        let (a, z) = ((1, i), (0, m - 1 - i));
        let (tail, head) = if sign.is_plus() { (a, z) } else { (z, a) };
        link.edges.push(LinkEdge { stratum: r, tail, head });
    }
    out.strata0.push(Stratum0 { link });
    Ok(out)
}

fn face_star(b: &StratifiedBordism, r: usize) -> Result<StratifiedBordism> {
    let bad = |why: &str| Error::InvalidSite(format!("2-stratum {r}: {why}"));
    let face = b.strata2.get(r).ok_or_else(|| bad("missing"))?.clone();
    if face.euler_char != 1 {
        return Err(bad("not a disc"));
    }
    if b.strata0.iter().any(|z| z.link.loops.contains(&r)) {
        return Err(bad("meets a vertex without edges"));
    }
    if b.boundary.iter().any(|c| c.edge_strata.contains(&r)) {
        return Err(bad("meets the boundary"));
    }
    for s in &b.strata1 {
        if s.word.iter().any(|&(x, _)| x == r) && (touches_boundary(s) || s.tail == End::Closed) {
            return Err(bad("bounded by a closed or boundary 1-stratum"));
        }
    }
    // corners: (vertex, link edge index)
    let corners: Vec<(usize, usize)> = b
        .strata0
        .iter()
        .enumerate()
        .flat_map(|(v, z)| z.link.edges.iter().enumerate().filter(|(_, le)| le.stratum == r).map(move |(k, _)| (v, k)))
        .collect();
    if corners.is_empty() {
        return Err(bad("no corners"));
    }
    // walk the boundary: corner j, outgoing segment, corner j+1
    let mut cycle = vec![corners[0]];
    let mut segments = Vec::new();
    loop {
        let (v, k) = *cycle.last().unwrap();
        let le = b.strata0[v].link.edges[k];
        let node = b.strata0[v].link.nodes[le.tail.0];
        let s = &b.strata1[node.stratum];
        let m = s.word.len();
        let (i, other, other_end) = match node.end {
            NodeEnd::Tail => (le.tail.1, s.head, NodeEnd::Head),
            NodeEnd::Head => (m - 1 - le.tail.1, s.tail, NodeEnd::Tail),
        };
        segments.push((node.stratum, i));
        let w = interior(other).ok_or_else(|| bad("boundary reaches a non-vertex"))?;
        let n = node_index(b, w, node.stratum, other_end);
        let pos = if other_end == NodeEnd::Tail { i } else { m - 1 - i };
        let next = b.strata0[w]
            .link
            .edges
            .iter()
            .position(|x| x.stratum == r && x.head == (n, pos))
            .ok_or_else(|| bad("inconsistent corner"))?;
        if (w, next) == cycle[0] {
            break;
        }
        if cycle.contains(&(w, next)) {
            return Err(bad("boundary walk does not close"));
        }
        cycle.push((w, next));
    }
    if cycle.len() != corners.len() {
        return Err(bad("boundary has several components"));
    }
    let k = cycle.len();
    let mut out = b.clone();
    let sector: Vec<usize> = (0..k)
        .map(|j| {
            if j == 0 {
                r
            } else {
                out.strata2.push(face.clone());
                out.strata2.len() - 1
            }
        })
        .collect();
    for (j, &(e, i)) in segments.iter().enumerate() {
        out.strata1[e].word[i].0 = sector[j];
    }
    let p = out.strata0.len();
    let spoke0 = out.strata1.len();
    let mut centre = LinkGraph::default();
    for (j, &(v, le_idx)) in cycle.iter().enumerate() {
        let (left, right) = (sector[j], sector[(j + k - 1) % k]);
        out.strata1.push(Stratum1 {
            label: None,
            word: vec![(left, Sign::Plus), (right, Sign::Minus)],
            tail: End::Interior(p),
            head: End::Interior(v),
            ambient: None,
        });
        centre.nodes.push(LinkNode { stratum: spoke0 + j, end: NodeEnd::Tail });
        centre.edges.push(LinkEdge { stratum: left, tail: (j, 0), head: ((j + 1) % k, 1) });
        let link = &mut out.strata0[v].link;
        let old = link.edges[le_idx];
        let n = link.nodes.len();
        link.nodes.push(LinkNode { stratum: spoke0 + j, end: NodeEnd::Head });
        link.edges[le_idx] = LinkEdge { stratum: left, tail: old.tail, head: (n, 1) };
        link.edges.push(LinkEdge { stratum: right, tail: (n, 0), head: old.head });
    }
    out.strata0.push(Stratum0 { link: centre });
    Ok(out)
}

/// Stratum gap `g` of a 1-stratum lies between entries `g` and `g + 1`.
fn gap_region(b: &StratifiedBordism, e: usize, g: usize) -> usize {
    let (r, s) = b.strata1[e].word[g];
    if s.is_plus() {
        b.strata2[r].positive
    } else {
        b.strata2[r].negative
    }
}

fn cell_cone(b: &StratifiedBordism, ball: usize, neutral: &str) -> Result<StratifiedBordism> {
    let bad = |why: &str| Error::InvalidSite(format!("3-stratum {ball}: {why}"));
    let cell = b.strata3.get(ball).ok_or_else(|| bad("missing"))?.clone();
    if !cell.ball {
        return Err(bad("not a ball"));
    }
    for (e, s) in b.strata1.iter().enumerate() {
        let m = s.word.len();
        let inside = if m == 0 { s.ambient == Some(ball) } else { (0..m).any(|g| gap_region(b, e, g) == ball) };
        if inside && (m == 0 || touches_boundary(s) || s.tail == End::Closed) {
            return Err(bad("contains a free, closed or boundary 1-stratum"));
        }
    }
    for z in &b.strata0 {
        if z.link.loops.iter().any(|&r| b.strata2[r].positive == ball || b.strata2[r].negative == ball) {
            return Err(bad("a sheet crosses a vertex link without edges"));
        }
    }
    // faces of the boundary sphere and their cones
    let mut faces = Vec::new();
    for (r, s) in b.strata2.iter().enumerate() {
        for side in [true, false] {
            if (if side { s.positive } else { s.negative }) == ball {
                faces.push((r, side));
            }
        }
    }
    if faces.is_empty() {
        return Err(bad("no boundary faces"));
    }
    let mut out = b.clone();
    let mut cone3 = BTreeMap::new();
    for (k, &f) in faces.iter().enumerate() {
        let id = if k == 0 {
            ball
        } else {
            out.strata3.push(cell.clone());
            out.strata3.len() - 1
        };
        cone3.insert(f, id);
    }
    let side_after = |(r, s): (usize, Sign)| (r, s.is_plus());
    let side_before = |(r, s): (usize, Sign)| (r, !s.is_plus());

    // corners: face walks of each vertex link lying in the ball
    let mut corners: Vec<(usize, Vec<(usize, NodeEnd, usize)>)> = Vec::new();
    for (v, z) in b.strata0.iter().enumerate() {
        let link = &z.link;
        let len: Vec<usize> = link.nodes.iter().map(|n| b.strata1[n.stratum].word.len()).collect();
        let mut opp: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for le in &link.edges {
            opp.insert(le.tail, le.head);
            opp.insert(le.head, le.tail);
        }
        let mut seen = BTreeMap::new();
        for (&d, _) in opp.iter() {
            if seen.contains_key(&d) {
                continue;
            }
            let mut walk = Vec::new();
            let mut x = d;
            while !seen.contains_key(&x) {
                seen.insert(x, ());
                let (n, p) = opp[&x];
                walk.push((n, p));
                x = (n, (p + 1) % len[n]);
            }
            let node = link.nodes[walk[0].0];
            let g = stratum_gap(b, node.stratum, node.end, walk[0].1);
            if gap_region(b, node.stratum, g) != ball {
                continue;
            }
            if !connected(link) {
                return Err(bad("a vertex link is disconnected"));
            }
            let gaps = walk
                .iter()
                .map(|&(n, p)| {
                    let node = link.nodes[n];
                    (node.stratum, node.end, stratum_gap(b, node.stratum, node.end, p))
                })
                .collect();
            corners.push((v, gaps));
        }
    }

    // wedges: one per stratum gap in the ball
    let mut wedge = BTreeMap::new();
    for (e, s) in b.strata1.iter().enumerate() {
        let m = s.word.len();
        for g in (0..m).rev() {
            if gap_region(b, e, g) != ball {
                continue;
            }
            let before = cone3[&side_after(s.word[g])];
            let after = cone3[&side_before(s.word[(g + 1) % m])];
            let w = out.strata2.len();
            out.strata2.push(Stratum2 { label: neutral.into(), euler_char: 1, positive: after, negative: before });
            wedge.insert((e, g), w);
            insert_entry(&mut out, e, g + 1, (w, Sign::Plus));
        }
    }
    for (&(r, side), &c) in &cone3 {
        if side {
            out.strata2[r].positive = c;
        } else {
            out.strata2[r].negative = c;
        }
    }

    let q = out.strata0.len();
    let mut apex = LinkGraph::default();
    for (v, gaps) in &corners {
        let spoke = out.strata1.len();
        // counter-clockwise order around the new node is the reverse walk
        let mut node_word = Vec::new();
        let mut ends = Vec::new();
        for &(e, end, g) in gaps.iter().rev() {
            let w = wedge[&(e, g)];
            let sign = if end == NodeEnd::Tail { Sign::Minus } else { Sign::Plus };
            node_word.push((w, sign));
            ends.push((e, end, w));
        }
        let word: Vec<(usize, Sign)> = node_word.iter().rev().map(|&(w, s)| (w, s.flip())).collect();
        out.strata1.push(Stratum1 {
            label: None,
            word,
            tail: End::Interior(q),
            head: End::Interior(*v),
            ambient: None,
        });
        apex.nodes.push(LinkNode { stratum: spoke, end: NodeEnd::Tail });
        let n = out.strata0[*v].link.nodes.len();
        out.strata0[*v].link.nodes.push(LinkNode { stratum: spoke, end: NodeEnd::Head });
        for (pos, &(e, end, w)) in ends.iter().enumerate() {
            let node = node_index(&out, *v, e, end);
            let ew = &out.strata1[e].word;
            let idx = ew.iter().position(|&(x, _)| x == w).unwrap();
            let at = if end == NodeEnd::Tail { idx } else { ew.len() - 1 - idx };
            let (tail, head) = if node_word[pos].1.is_plus() { ((n, pos), (node, at)) } else { ((node, at), (n, pos)) };
            out.strata0[*v].link.edges.push(LinkEdge { stratum: w, tail, head });
        }
    }
    for &w in wedge.values() {
        let mut plus = None;
        let mut minus = None;
        for (k, node) in apex.nodes.iter().enumerate() {
            for (pos, &(x, s)) in out.strata1[node.stratum].word.iter().enumerate() {
                if x == w {
                    if s.is_plus() {
                        plus = Some((k, pos));
                    } else {
                        minus = Some((k, pos));
                    }
                }
            }
        }
        let (tail, head) = plus.zip(minus).ok_or_else(|| bad("wedge does not meet two spokes"))?;
        apex.edges.push(LinkEdge { stratum: w, tail, head });
    }
    out.strata0.push(Stratum0 { link: apex });
    Ok(out)
}

/// The stratum gap seen at node position gap `p | p + 1`.
fn stratum_gap(b: &StratifiedBordism, e: usize, end: NodeEnd, p: usize) -> usize {
    let m = b.strata1[e].word.len();
    match end {
        NodeEnd::Tail => p,
        NodeEnd::Head => (2 * m - 2 - p) % m,
    }
}

fn connected(link: &LinkGraph) -> bool {
    let n = link.nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for le in &link.edges {
        let (a, c) = (find(&mut parent, le.tail.0), find(&mut parent, le.head.0));
        parent[a] = c;
    }
    let roots = (0..n).filter(|&x| find(&mut parent, x) == x).count();
    roots <= 1 && link.loops.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_data::{build_group_defect_data, GroupTable};
    use crate::strata::{bundled_manifold, bundled_manifold_names, cylinder, validate_bordism, DecoratedSurface, Stratum3};

    fn z2() -> crate::defect_data::DefectData {
        build_group_defect_data(&GroupTable::cyclic(2)).unwrap()
    }

    #[test]
    fn every_move_at_every_site_stays_valid() {
        let dd = z2();
        for name in bundled_manifold_names() {
            let b = bundled_manifold(name).unwrap();
            for mv in RefineMove::ALL {
                let sites = valid_sites(&b, mv);
                assert!(!sites.is_empty(), "{name} {mv:?}");
                for site in sites {
                    let r = refine(&b, mv, site, "1").unwrap();
                    let rep = validate_bordism(&dd, &r);
                    assert!(rep.is_clean(), "{name} {mv:?} {site}: {:?}", rep.violations);
                    r.check_fine().unwrap();
                    let [v, e, f, c] = r.counts().map(|x| x as i64);
                    assert_eq!(v - e + f - c, 0);
                }
            }
        }
    }

    #[test]
    fn count_deltas() {
        let b = bundled_manifold("s3_boundary_delta4").unwrap();
        let [v, e, f, c] = b.counts();
        let sub = refine(&b, RefineMove::EdgeSubdivide, 0, "1").unwrap();
        assert_eq!(sub.counts(), [v + 1, e + 1, f, c]);
        let star = refine(&b, RefineMove::FaceStar, 0, "1").unwrap();
        assert_eq!(star.counts(), [v + 1, e + 3, f + 2, c]);
        let cone = refine(&b, RefineMove::CellCone, 0, "1").unwrap();
        // a tetrahedron has four faces, six edges and four corners
        assert_eq!(cone.counts(), [v + 1, e + 4, f + 6, c + 3]);
    }

    #[test]
    fn closed_one_stratum_gets_one_vertex() {
        let b = StratifiedBordism {
            strata3: vec![Stratum3 { label: "*".into(), ball: false }],
            strata2: vec![Stratum2 { label: "g".into(), euler_char: 1, positive: 0, negative: 0 }],
            strata1: vec![Stratum1 {
                label: None,
                word: vec![(0, Sign::Plus), (0, Sign::Minus)],
                tail: End::Closed,
                head: End::Closed,
                ambient: None,
            }],
            ..Default::default()
        };
        let r = refine(&b, RefineMove::EdgeSubdivide, 0, "1").unwrap();
        assert_eq!(r.counts(), [1, 1, 1, 1]);
        assert!(validate_bordism(&z2(), &r).is_clean());
    }

    #[test]
    fn boundary_sites_are_rejected_and_boundary_kept() {
        let b = cylinder(&DecoratedSurface::theta(["g", "g", "1"]));
        assert!(refine(&b, RefineMove::CellCone, 0, "1").is_err());
        assert!(refine(&b, RefineMove::FaceStar, 0, "1").is_err());
        let r = refine(&b, RefineMove::EdgeSubdivide, 0, "1").unwrap();
        assert!(validate_bordism(&z2(), &r).is_clean());
        assert_eq!(r.boundary[0].surface, b.boundary[0].surface);
        assert_eq!(r.boundary[1].surface, b.boundary[1].surface);
    }
}
