//! Closed 3-manifolds: oriented triangulations and mapping tori of cylinders.

use std::collections::BTreeMap;

use super::{
    cylinder, DecoratedSurface, End, LinkEdge, LinkGraph, LinkNode, NodeEnd, StratifiedBordism, Stratum0, Stratum1,
    Stratum2, Stratum3,
};
use crate::defect_data::Sign;
use crate::error::{Error, Result};

/// Parity of the permutation carrying `from` onto `to`, as `±1`.
fn relative_sign(from: &[usize; 4], to: &[usize; 4]) -> i32 {
    let mut p: Vec<usize> = to.iter().map(|x| from.iter().position(|y| y == x).unwrap()).collect();
    let mut sign = 1;
    for i in 0..4 {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// Stratification by the simplices of an oriented closed triangulation.
///
/// Each tetrahedron is listed in positive vertex order. Triangle `{a<b<c}`
/// is oriented by `(a, b, c)`; edge `{a<b}` points from `a` to `b`.
pub fn from_tetrahedra(
    tets: &[[usize; 4]],
    ambient: &str,
    label: &dyn Fn([usize; 3]) -> String,
) -> Result<StratifiedBordism> {
    let mut tris: BTreeMap<[usize; 3], Vec<(usize, usize)>> = BTreeMap::new();
    let mut edges: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    let mut nv = 0;
    for (t, tet) in tets.iter().enumerate() {
        let mut s = *tet;
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Topology(format!("tetrahedron {t} repeats a vertex")));
        }
        nv = nv.max(s[3] + 1);
        for skip in 0..4 {
            let tri: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| s[k]).collect();
            tris.entry([tri[0], tri[1], tri[2]]).or_default().push((t, s[skip]));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                edges.entry([s[i], s[j]]).or_default().push(t);
            }
        }
    }
    let tri_ids: BTreeMap<[usize; 3], usize> = tris.keys().enumerate().map(|(k, &t)| (t, k)).collect();
    let edge_ids: BTreeMap<[usize; 2], usize> = edges.keys().enumerate().map(|(k, &e)| (e, k)).collect();

    let mut b = StratifiedBordism::default();
    for _ in tets {
        b.strata3.push(Stratum3 { label: ambient.into(), ball: true });
    }
    for (tri, sides) in &tris {
        if sides.len() != 2 {
            return Err(Error::Topology(format!("triangle {tri:?} lies in {} tetrahedra", sides.len())));
        }
        let positive_of = |&(t, y): &(usize, usize)| relative_sign(&tets[t], &[tri[0], tri[1], tri[2], y]) > 0;
        let (pos, neg) = match (positive_of(&sides[0]), positive_of(&sides[1])) {
            (true, false) => (sides[0].0, sides[1].0),
            (false, true) => (sides[1].0, sides[0].0),
            _ => return Err(Error::Topology(format!("triangle {tri:?} is not coherently oriented"))),
        };
        b.strata2.push(Stratum2 { label: label(*tri), euler_char: 1, positive: pos, negative: neg });
    }
    let tri_of = |mut t: [usize; 3]| {
        t.sort_unstable();
        tri_ids[&t]
    };
    for (&[a, c], around) in &edges {
        let mut next = BTreeMap::new();
        for &t in around {
            let rest: Vec<usize> = tets[t].iter().copied().filter(|&x| x != a && x != c).collect();
            let (x, y) = if relative_sign(&tets[t], &[a, c, rest[0], rest[1]]) > 0 {
                (rest[0], rest[1])
            } else {
                (rest[1], rest[0])
            };
            if next.insert(x, (y, t)).is_some() {
                return Err(Error::Topology(format!("edge {a}-{c} has a branched link")));
            }
        }
        let start = *next.keys().next().unwrap();
        let mut word = Vec::new();
        let mut x = start;
        loop {
            let (y, t) = next[&x];
            let r = tri_of([a, c, x]);
            let sign = if b.strata2[r].positive == t { Sign::Plus } else { Sign::Minus };
            word.push((r, sign));
            x = y;
            if x == start {
                break;
            }
        }
        if word.len() != around.len() {
            return Err(Error::Topology(format!("link of edge {a}-{c} is not a circle")));
        }
        b.strata1.push(Stratum1 { label: None, word, tail: End::Interior(a), head: End::Interior(c), ambient: None });
    }
    for v in 0..nv {
        let mut link = LinkGraph::default();
        let mut node_of = BTreeMap::new();
        for (&[a, c], &e) in &edge_ids {
            if a == v || c == v {
                node_of.insert(if a == v { c } else { a }, link.nodes.len());
                let end = if a == v { NodeEnd::Tail } else { NodeEnd::Head };
                link.nodes.push(LinkNode { stratum: e, end });
            }
        }
        for (tri, &r) in &tri_ids {
            if !tri.contains(&v) {
                continue;
            }
            let others: Vec<usize> = tri.iter().copied().filter(|&x| x != v).collect();
            let mut ends = Vec::new();
            for &x in &others {
                let node = node_of[&x];
                let w = b.node_word(link.nodes[node]);
                let pos = w.iter().position(|&(s, _)| s == r).unwrap();
                ends.push(((node, pos), w[pos].1));
            }
            let (tail, head) = match (ends[0].1, ends[1].1) {
                (Sign::Plus, Sign::Minus) => (ends[0].0, ends[1].0),
                (Sign::Minus, Sign::Plus) => (ends[1].0, ends[0].0),
                _ => return Err(Error::Topology(format!("corner of triangle {tri:?} at {v} has equal signs"))),
            };
            link.edges.push(LinkEdge { stratum: r, tail, head });
        }
        if link.nodes.is_empty() {
            return Err(Error::Topology(format!("vertex {v} is unused")));
        }
        b.strata0.push(Stratum0 { link });
    }
    Ok(b)
}

/// The five facets of the 4-simplex, oriented as its boundary.
pub fn boundary_of_4_simplex() -> Vec<[usize; 4]> {
    (0..5)
        .map(|skip| {
            let mut t = [0; 4];
            let mut k = 0;
            for v in 0..5 {
                if v != skip {
                    t[k] = v;
                    k += 1;
                }
            }
            if skip % 2 == 1 {
                t.swap(0, 1);
            }
            t
        })
        .collect()
}

/// `Σ × S¹`, from the cylinder over `Σ` by gluing its ends; `sheet` relabels
/// the middle slice `Σ × {½}`.
pub fn mapping_torus(s: &DecoratedSurface, sheet: Option<&str>) -> StratifiedBordism {
    let cyl = cylinder(s);
    let s = &cyl.boundary[0].surface;
    let (nv, ne) = (s.vertices.len(), s.edges.len());
    let nf = cyl.strata3.len() / 2;
    let map3 = |k: usize| k % nf;
    let map2 = |k: usize| if k < 2 * ne { k % ne } else { k - ne };
    let map1 = |k: usize| if k < 2 * nv { k % nv } else { k - nv };
    let mut b = StratifiedBordism { strata3: cyl.strata3[..nf].to_vec(), ..Default::default() };
    for (k, r) in cyl.strata2.iter().enumerate() {
        if (ne..2 * ne).contains(&k) {
            continue;
        }
        let mut r = r.clone();
        r.positive = map3(r.positive);
        r.negative = map3(r.negative);
        if k >= 2 * ne {
            if let Some(l) = sheet {
                r.label = l.into();
            }
        }
        b.strata2.push(r);
    }
    for (k, st) in cyl.strata1.iter().enumerate() {
        if (nv..2 * nv).contains(&k) {
            continue;
        }
        let mut st = st.clone();
        st.word.iter_mut().for_each(|x| x.0 = map2(x.0));
        st.ambient = st.ambient.map(map3);
        if k < nv {
            st.tail = End::Interior(k);
        }
        b.strata1.push(st);
    }
    for z in &cyl.strata0 {
        let mut link = z.link.clone();
        link.nodes.iter_mut().for_each(|n| n.stratum = map1(n.stratum));
        link.edges.iter_mut().for_each(|e| e.stratum = map2(e.stratum));
        link.loops.iter_mut().for_each(|r| *r = map2(*r));
        b.strata0.push(Stratum0 { link });
    }
    b
}

pub fn bundled_manifold_names() -> Vec<&'static str> {
    vec!["s3_boundary_delta4", "s2xs1", "s2xs1_fiber_g"]
}

pub fn bundled_manifold(name: &str) -> Result<StratifiedBordism> {
    let circle = DecoratedSurface::sphere_with_circle("1").cellular();
    match name {
        "s3_boundary_delta4" => from_tetrahedra(&boundary_of_4_simplex(), "*", &|_| "1".into()),
        "s2xs1" => Ok(mapping_torus(&circle, None)),
        "s2xs1_fiber_g" => Ok(mapping_torus(&circle, Some("g"))),
        _ => Err(Error::Label(format!("no bundled manifold {name}"))),
    }
}
