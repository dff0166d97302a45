//! Decorated surfaces as rotation systems, cylinders over them and cones.
//!
//! Darts `2e` and `2e + 1` are the tail and head of edge `e`. The vertex
//! word lists the edges at a vertex counter-clockwise, with `+` where the
//! edge leaves the vertex. The face to the left of edge `e` is the face of
//! dart `2e + 1` and the face to its right that of dart `2e`.

use serde::{Deserialize, Serialize};

use super::{
    d1_accepts, BoundaryComponent, BoundaryRole, End, LinkEdge, LinkGraph, LinkNode, NodeEnd, StratifiedBordism,
    Stratum0, Stratum1, Stratum2, Stratum3,
};
use crate::defect_data::{DefectData, Sign, SignedLabel};
use crate::error::{Error, Result};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceVertex {
    #[serde(default)]
    pub label: Option<String>,
    pub darts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedSurface {
    pub vertices: Vec<SurfaceVertex>,
    /// d2 label of each edge.
    pub edges: Vec<String>,
    /// d2 labels of vertex-free circles.
    #[serde(default)]
    pub circles: Vec<String>,
    /// Number of undecorated sphere components.
    #[serde(default)]
    pub spheres: usize,
    /// d3 label of every face.
    #[serde(default = "default_ambient")]
    pub ambient: String,
    /// d2 label given to strata added by refinements.
    #[serde(default = "default_neutral")]
    pub neutral: String,
}

fn default_ambient() -> String {
    "*".into()
}

fn default_neutral() -> String {
    "1".into()
}

/// Faces of a surface: dart cycles, then one face per isolated vertex.
#[derive(Debug, Clone)]
pub struct SurfaceFaces {
    pub count: usize,
    pub of_dart: Vec<usize>,
    pub of_isolated: Vec<Option<usize>>,
}

impl Default for DecoratedSurface {
    fn default() -> Self {
        Self {
            vertices: vec![],
            edges: vec![],
            circles: vec![],
            spheres: 0,
            ambient: default_ambient(),
            neutral: default_neutral(),
        }
    }
}

impl DecoratedSurface {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn sphere() -> Self {
        Self { spheres: 1, ..Self::default() }
    }

    pub fn sphere_with_circle(label: &str) -> Self {
        Self { circles: vec![label.into()], ..Self::default() }
    }

    /// Torus from one vertex and two loops `a, b` with rotation `a b ā b̄`.
    pub fn torus(a: &str, b: &str) -> Self {
        Self {
            vertices: vec![SurfaceVertex { label: None, darts: vec![0, 2, 1, 3] }],
            edges: vec![a.into(), b.into()],
            ..Self::default()
        }
    }

    /// Two vertices joined by three edges, all leaving the first vertex.
    pub fn theta(labels: [&str; 3]) -> Self {
        Self::dipole(&labels)
    }

    /// Two vertices joined by the given edges, all leaving the first vertex.
    pub fn dipole(labels: &[&str]) -> Self {
        let n = labels.len();
        Self {
            vertices: vec![
                SurfaceVertex { label: None, darts: (0..n).map(|e| 2 * e).collect() },
                SurfaceVertex { label: None, darts: (0..n).rev().map(|e| 2 * e + 1).collect() },
            ],
            edges: labels.iter().map(|s| s.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.check_map()?;
        Ok(s)
    }

    pub fn dart_vertex(&self) -> Vec<usize> {
        let mut dv = vec![usize::MAX; 2 * self.edges.len()];
        for (v, sv) in self.vertices.iter().enumerate() {
            for &d in &sv.darts {
                if d < dv.len() {
                    dv[d] = v;
                }
            }
        }
        dv
    }

    /// Every dart sits at exactly one vertex.
    pub fn check_map(&self) -> Result<()> {
        let mut count = vec![0usize; 2 * self.edges.len()];
        for sv in &self.vertices {
            for &d in &sv.darts {
                *count.get_mut(d).ok_or_else(|| Error::Topology(format!("unknown dart {d}")))? += 1;
            }
        }
        match count.iter().position(|&c| c != 1) {
            Some(d) => Err(Error::Topology(format!("dart {d} is attached {} times", count[d]))),
            None => Ok(()),
        }
    }

    pub fn is_cellular(&self) -> bool {
        self.circles.is_empty() && self.spheres == 0
    }

    /// Circles become a vertex with a loop edge, bare spheres an isolated vertex.
    pub fn cellular(&self) -> Self {
        let mut s = self.clone();
        for label in std::mem::take(&mut s.circles) {
            let e = s.edges.len();
            s.edges.push(label);
            s.vertices.push(SurfaceVertex { label: None, darts: vec![2 * e, 2 * e + 1] });
        }
        for _ in 0..std::mem::take(&mut s.spheres) {
            s.vertices.push(SurfaceVertex { label: None, darts: vec![] });
        }
        s
    }

    pub fn vertex_word(&self, v: usize) -> Vec<(usize, Sign)> {
        self.vertices[v]
            .darts
            .iter()
            .map(|&d| (d / 2, if d % 2 == 0 { Sign::Plus } else { Sign::Minus }))
            .collect()
    }

    pub fn labelled_word(&self, v: usize) -> Vec<SignedLabel> {
        self.vertex_word(v).iter().map(|&(e, s)| SignedLabel::new(self.edges[e].clone(), s)).collect()
    }

    fn next_ccw(&self, dv: &[usize], d: usize) -> usize {
        let list = &self.vertices[dv[d]].darts;
        let k = list.iter().position(|&x| x == d).unwrap();
        list[(k + 1) % list.len()]
    }

    pub fn faces(&self) -> SurfaceFaces {
        let dv = self.dart_vertex();
        let mut of_dart = vec![usize::MAX; dv.len()];
        let mut count = 0;
        for d in 0..dv.len() {
            if of_dart[d] != usize::MAX {
                continue;
            }
            let mut x = d;
            while of_dart[x] == usize::MAX {
                of_dart[x] = count;
                x = self.next_ccw(&dv, x ^ 1);
            }
            count += 1;
        }
        let mut of_isolated = vec![None; self.vertices.len()];
        for (v, sv) in self.vertices.iter().enumerate() {
            if sv.darts.is_empty() {
                of_isolated[v] = Some(count);
                count += 1;
            }
        }
        SurfaceFaces { count, of_dart, of_isolated }
    }

    /// Connected components of the vertex graph, as a component id per vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let dv = self.dart_vertex();
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut k = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = k;
            while let Some(v) = stack.pop() {
                for &d in &self.vertices[v].darts {
                    let w = dv[d ^ 1];
                    if comp[w] == usize::MAX {
                        comp[w] = k;
                        stack.push(w);
                    }
                }
            }
            k += 1;
        }
        (k, comp)
    }

    /// Euler characteristic of the closed surface.
    pub fn euler_characteristic(&self) -> i64 {
        let f = self.faces().count as i64;
        self.vertices.len() as i64 - self.edges.len() as i64 + f + 2 * self.spheres as i64
    }

    /// Number of connected components, counting circles as lying on spheres
    /// of their own only when there is nothing else.
    pub fn component_count(&self) -> usize {
        self.components().0 + self.spheres + usize::from(self.vertices.is_empty() && !self.circles.is_empty())
    }

    pub fn validate(&self, dd: &DefectData) -> ValidationReport {
        let mut rep = ValidationReport::new();
        if let Err(e) = self.check_map() {
            rep.push("surface", e.to_string());
            return rep;
        }
        for (e, l) in self.edges.iter().chain(self.circles.iter()).enumerate() {
            match dd.d2.get(l) {
                None => rep.push(format!("surface edge {e}"), format!("label {l} is not in d2")),
                Some((s, t)) if *s != self.ambient || *t != self.ambient => {
                    rep.push(format!("surface edge {e}"), "sides differ from (s, t) of the label")
                }
                _ => {}
            }
        }
        if !dd.d3.contains(&self.ambient) {
            rep.push("surface", format!("ambient label {} is not in d3", self.ambient));
        }
        for v in 0..self.vertices.len() {
            let w = self.labelled_word(v);
            if !d1_accepts(dd, self.vertices[v].label.as_deref(), &w) {
                rep.push(format!("surface vertex {v}"), "vertex word is not in the image of the folding map");
            }
        }
        rep
    }
}

/// The product bordism `Σ × [0, 1]` with a middle slice `Σ × {½}`.
///
/// Vertices of the (cellular) surface give vertical 1-strata through an
/// interior vertex at height ½, edges give vertical 2-strata split at ½
/// and a horizontal 1-stratum, faces give two balls separated by a neutral
/// sheet. All vertical 1-strata point upwards.
pub fn cylinder(s: &DecoratedSurface) -> StratifiedBordism {
    let s = s.cellular();
    let faces = s.faces();
    let (nv, ne, nf) = (s.vertices.len(), s.edges.len(), faces.count);
    let dv = s.dart_vertex();
    let face_left = |e: usize| faces.of_dart[2 * e + 1];
    let face_right = |e: usize| faces.of_dart[2 * e];

    let mut b = StratifiedBordism::default();
    for _ in 0..2 * nf {
        b.strata3.push(Stratum3 { label: s.ambient.clone(), ball: true });
    }
    let (lower3, upper3) = (|f: usize| f, |f: usize| nf + f);
    let (lower_e, upper_e, sheet) = (|e: usize| e, |e: usize| ne + e, |f: usize| 2 * ne + f);
    for half in 0..2 {
        for e in 0..ne {
            let side = |f| if half == 0 { lower3(f) } else { upper3(f) };
            b.strata2.push(Stratum2 {
                label: s.edges[e].clone(),
                euler_char: 1,
                positive: side(face_left(e)),
                negative: side(face_right(e)),
            });
        }
    }
    for f in 0..nf {
        b.strata2.push(Stratum2 { label: s.neutral.clone(), euler_char: 1, positive: upper3(f), negative: lower3(f) });
    }

    let (low, up, mid) = (|v: usize| v, |v: usize| nv + v, |e: usize| 2 * nv + e);
    let ambient_of = |v: usize, upper: bool| {
        let f = faces.of_isolated[v].unwrap_or_else(|| faces.of_dart[s.vertices[v].darts[0]]);
        Some(if upper { upper3(f) } else { lower3(f) })
    };
    for v in 0..nv {
        let w = s.vertex_word(v);
        b.strata1.push(Stratum1 {
            label: s.vertices[v].label.clone(),
            word: w.iter().map(|&(e, sg)| (lower_e(e), sg)).collect(),
            tail: End::Boundary { component: 0, vertex: v },
            head: End::Interior(v),
            ambient: if w.is_empty() { ambient_of(v, false) } else { None },
        });
    }
    for v in 0..nv {
        let w = s.vertex_word(v);
        b.strata1.push(Stratum1 {
            label: s.vertices[v].label.clone(),
            word: w.iter().map(|&(e, sg)| (upper_e(e), sg)).collect(),
            tail: End::Interior(v),
            head: End::Boundary { component: 1, vertex: v },
            ambient: if w.is_empty() { ambient_of(v, true) } else { None },
        });
    }
    for e in 0..ne {
        b.strata1.push(Stratum1 {
            label: None,
            word: vec![
                (sheet(face_left(e)), Sign::Plus),
                (upper_e(e), Sign::Minus),
                (sheet(face_right(e)), Sign::Minus),
                (lower_e(e), Sign::Plus),
            ],
            tail: End::Interior(dv[2 * e]),
            head: End::Interior(dv[2 * e + 1]),
            ambient: None,
        });
    }

    for v in 0..nv {
        let darts = &s.vertices[v].darts;
        let n = darts.len();
        let mut link = LinkGraph {
            nodes: vec![
                LinkNode { stratum: low(v), end: NodeEnd::Head },
                LinkNode { stratum: up(v), end: NodeEnd::Tail },
            ],
            ..Default::default()
        };
        for &d in darts {
            let end = if d % 2 == 0 { NodeEnd::Tail } else { NodeEnd::Head };
            link.nodes.push(LinkNode { stratum: mid(d / 2), end });
        }
        for (k, &d) in darts.iter().enumerate() {
            let e = d / 2;
            let node = 2 + k;
            let leaving = d % 2 == 0;
            // positions on the equator node: tail reads [left+, upper−, right−, lower+]
            let (pos_lower, pos_upper, pos_left) = if leaving { (3, 1, 0) } else { (0, 2, 1) };
            let south = (0, n - 1 - k);
            let north = (1, k);
            let (lt, lh) = if leaving { ((node, pos_lower), south) } else { (south, (node, pos_lower)) };
            link.edges.push(LinkEdge { stratum: lower_e(e), tail: lt, head: lh });
            let (ut, uh) = if leaving { (north, (node, pos_upper)) } else { ((node, pos_upper), north) };
            link.edges.push(LinkEdge { stratum: upper_e(e), tail: ut, head: uh });
            let next = darts[(k + 1) % n];
            let next_node = 2 + (k + 1) % n;
            let next_pos = if next % 2 == 0 { 2 } else { 3 };
            link.edges.push(LinkEdge {
                stratum: sheet(faces.of_dart[d ^ 1]),
                tail: (node, pos_left),
                head: (next_node, next_pos),
            });
        }
        if n == 0 {
            link.loops.push(sheet(faces.of_isolated[v].expect("isolated vertex face")));
        }
        b.strata0.push(Stratum0 { link });
    }

    for (c, role) in [(0, BoundaryRole::In), (1, BoundaryRole::Out)] {
        b.boundary.push(BoundaryComponent {
            name: if c == 0 { "bottom".into() } else { "top".into() },
            role,
            surface: s.clone(),
            vertex_strata: (0..nv).map(|v| if c == 0 { low(v) } else { up(v) }).collect(),
            edge_strata: (0..ne).map(|e| if c == 0 { lower_e(e) } else { upper_e(e) }).collect(),
        });
    }
    b
}

/// The product `s × [0, 1]` without interior vertices: one 3-stratum per
/// face, one 2-stratum per edge and one 1-stratum per vertex.
pub fn product_cylinder(s: &DecoratedSurface) -> StratifiedBordism {
    let s = s.cellular();
    let faces = s.faces();
    let mut b = StratifiedBordism::default();
    for _ in 0..faces.count {
        b.strata3.push(Stratum3 { label: s.ambient.clone(), ball: true });
    }
    for (e, label) in s.edges.iter().enumerate() {
        b.strata2.push(Stratum2 {
            label: label.clone(),
            euler_char: 1,
            positive: faces.of_dart[2 * e + 1],
            negative: faces.of_dart[2 * e],
        });
    }
    for (v, sv) in s.vertices.iter().enumerate() {
        let w = s.vertex_word(v);
        b.strata1.push(Stratum1 {
            label: sv.label.clone(),
            word: w.clone(),
            tail: End::Boundary { component: 0, vertex: v },
            head: End::Boundary { component: 1, vertex: v },
            ambient: if w.is_empty() { Some(faces.of_isolated[v].unwrap_or_else(|| faces.of_dart[sv.darts[0]])) } else { None },
        });
    }
    let ids = |n: usize| (0..n).collect::<Vec<_>>();
    for (c, role) in [(0, BoundaryRole::In), (1, BoundaryRole::Out)] {
        b.boundary.push(BoundaryComponent {
            name: if c == 0 { "bottom".into() } else { "top".into() },
            role,
            surface: s.clone(),
            vertex_strata: ids(s.vertices.len()),
            edge_strata: ids(s.edges.len()),
        });
    }
    b
}

/// The ball bounded by a dipole sphere, with one arc between its two
/// vertices and a half-disc wall per edge; no interior vertices.
pub fn dipole_ball(s: &DecoratedSurface, role: BoundaryRole) -> Result<StratifiedBordism> {
    let w0 = s.vertex_word(0);
    let is_dipole = s.vertices.len() == 2
        && s.circles.is_empty()
        && s.spheres == 0
        && !w0.is_empty()
        && w0.iter().all(|&(_, sg)| sg == Sign::Plus)
        && s.vertex_word(1) == super::reverse_word(&w0);
    if !is_dipole {
        return Err(Error::Topology("expected two vertices joined by edges leaving the first".into()));
    }
    let faces = s.faces();
    let mut b = StratifiedBordism::default();
    for _ in 0..faces.count {
        b.strata3.push(Stratum3 { label: s.ambient.clone(), ball: true });
    }
    for (e, label) in s.edges.iter().enumerate() {
        b.strata2.push(Stratum2 {
            label: label.clone(),
            euler_char: 1,
            positive: faces.of_dart[2 * e + 1],
            negative: faces.of_dart[2 * e],
        });
    }
    // the arc reads the first vertex word when leaving an incoming sphere
    let start = usize::from(role == BoundaryRole::Out);
    b.strata1.push(Stratum1 {
        label: s.vertices[0].label.clone(),
        word: w0,
        tail: End::Boundary { component: 0, vertex: start },
        head: End::Boundary { component: 0, vertex: 1 - start },
        ambient: None,
    });
    b.boundary.push(BoundaryComponent {
        name: "sphere".into(),
        role,
        surface: s.clone(),
        vertex_strata: vec![0, 0],
        edge_strata: (0..s.edges.len()).collect(),
    });
    Ok(b)
}

/// The cone over a sphere: one interior vertex whose link is the surface.
///
/// Components other than the first are placed in the face of the first
/// component that contains its lowest dart; circles bound discs in that
/// same face.
pub fn linear_fill(s: &DecoratedSurface) -> Result<StratifiedBordism> {
    let (ncomp, comp) = s.components();
    let faces = s.faces();
    let chi = s.vertices.len() as i64 - s.edges.len() as i64 + faces.count as i64;
    if chi != 2 * ncomp as i64 || s.spheres > usize::from(s.vertices.is_empty() && s.circles.is_empty()) {
        return Err(Error::Topology("linear fill needs a single sphere".into()));
    }
    // merge the outer face of every component into one region
    let outer_face = |c: usize| -> usize {
        let v = comp.iter().position(|&x| x == c).unwrap();
        faces.of_isolated[v].unwrap_or_else(|| faces.of_dart[*s.vertices[v].darts.iter().min().unwrap()])
    };
    let mut region = vec![usize::MAX; faces.count];
    let mut nreg = 1;
    for c in 0..ncomp {
        region[outer_face(c)] = 0;
    }
    for r in region.iter_mut() {
        if *r == usize::MAX {
            *r = nreg;
            nreg += 1;
        }
    }
    let mut b = StratifiedBordism::default();
    for _ in 0..nreg + s.circles.len() {
        b.strata3.push(Stratum3 { label: s.ambient.clone(), ball: true });
    }
    for (e, label) in s.edges.iter().enumerate() {
        b.strata2.push(Stratum2 {
            label: label.clone(),
            euler_char: 1,
            positive: region[faces.of_dart[2 * e + 1]],
            negative: region[faces.of_dart[2 * e]],
        });
    }
    for (k, label) in s.circles.iter().enumerate() {
        b.strata2.push(Stratum2 { label: label.clone(), euler_char: 1, positive: nreg + k, negative: 0 });
    }
    let circle_strata: Vec<usize> = (0..s.circles.len()).map(|k| s.edges.len() + k).collect();
    if s.vertices.is_empty() {
        b.boundary.push(BoundaryComponent {
            name: "sphere".into(),
            role: BoundaryRole::Out,
            surface: s.clone(),
            vertex_strata: vec![],
            edge_strata: vec![],
        });
        return Ok(b);
    }
    let dv = s.dart_vertex();
    let mut link = LinkGraph::default();
    for v in 0..s.vertices.len() {
        let w = s.vertex_word(v);
        b.strata1.push(Stratum1 {
            label: s.vertices[v].label.clone(),
            word: w.clone(),
            tail: End::Interior(0),
            head: End::Boundary { component: 0, vertex: v },
            ambient: if w.is_empty() { Some(region[faces.of_isolated[v].unwrap()]) } else { None },
        });
        link.nodes.push(LinkNode { stratum: v, end: NodeEnd::Tail });
    }
    for e in 0..s.edges.len() {
        let pos = |d: usize| s.vertices[dv[d]].darts.iter().position(|&x| x == d).unwrap();
        link.edges.push(LinkEdge { stratum: e, tail: (dv[2 * e], pos(2 * e)), head: (dv[2 * e + 1], pos(2 * e + 1)) });
    }
    link.loops = circle_strata;
    b.strata0.push(Stratum0 { link });
    b.boundary.push(BoundaryComponent {
        name: "sphere".into(),
        role: BoundaryRole::Out,
        surface: s.clone(),
        vertex_strata: (0..s.vertices.len()).collect(),
        edge_strata: (0..s.edges.len()).collect(),
    });
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_data::{build_group_defect_data, GroupTable};
    use crate::strata::{compose, validate_bordism, vertex_link_graph};

    #[test]
    fn vertex_free_bordisms_validate() {
        let dd = z2();
        let dip = DecoratedSurface::dipole(&["g", "g"]);
        for s in [dip.clone(), DecoratedSurface::theta(["g", "1", "g"]), DecoratedSurface::torus("g", "1")] {
            let c = product_cylinder(&s);
            let rep = validate_bordism(&dd, &c);
            assert!(rep.is_clean(), "{:?}", rep.violations);
            c.check_fine().unwrap();
        }
        for role in [BoundaryRole::In, BoundaryRole::Out] {
            let ball = dipole_ball(&dip, role).unwrap();
            let rep = validate_bordism(&dd, &ball);
            assert!(rep.is_clean(), "{role:?} {:?}", rep.violations);
        }
        let closed = compose(&dipole_ball(&dip, BoundaryRole::Out).unwrap(), &dipole_ball(&dip, BoundaryRole::In).unwrap()).unwrap();
        assert!(validate_bordism(&dd, &closed).is_clean());
        assert_eq!(closed.counts(), [0, 1, 2, 2]);
        assert_eq!(closed.strata1[0].tail, End::Closed);
        assert!(dipole_ball(&DecoratedSurface::torus("g", "1"), BoundaryRole::In).is_err());
    }

    fn z2() -> DefectData {
        build_group_defect_data(&GroupTable::cyclic(2)).unwrap()
    }

    #[test]
    fn cylinders_validate() {
        let dd = z2();
        for s in [
            DecoratedSurface::sphere(),
            DecoratedSurface::sphere_with_circle("g"),
            DecoratedSurface::torus("1", "1"),
            DecoratedSurface::torus("g", "1"),
            DecoratedSurface::theta(["g", "g", "1"]),
        ] {
            let b = cylinder(&s);
            let rep = validate_bordism(&dd, &b);
            assert!(rep.is_clean(), "{s:?}: {:?}", rep.violations);
            assert!(b.check_fine().is_ok());
            let c = s.cellular();
            assert_eq!(b.boundary[0].surface, c);
            assert_eq!(b.boundary[1].surface, c);
            for v in 0..b.strata0.len() {
                vertex_link_graph(&b, v).unwrap();
            }
        }
    }

    #[test]
    fn cylinder_over_a_circle_has_an_annulus_worth_of_strata() {
        let b = cylinder(&DecoratedSurface::sphere_with_circle("g"));
        // the circle becomes a loop edge: two halves of the annulus plus two neutral sheets
        assert_eq!(b.strata2.iter().filter(|r| r.label == "g").count(), 2);
        assert_eq!(b.strata2.iter().filter(|r| r.label == "1").count(), 2);
        assert_eq!(b.strata3.len(), 4);
    }

    #[test]
    fn linear_fills() {
        let dd = z2();
        let bare = linear_fill(&DecoratedSurface::sphere()).unwrap();
        assert_eq!(bare.counts(), [0, 0, 0, 1]);
        let disc = linear_fill(&DecoratedSurface::sphere_with_circle("g")).unwrap();
        assert_eq!(disc.counts(), [0, 0, 1, 2]);
        let theta = DecoratedSurface::theta(["g", "g", "1"]);
        let cone = linear_fill(&theta).unwrap();
        assert_eq!(cone.counts(), [1, 2, 3, 3]);
        for b in [&bare, &disc, &cone] {
            assert!(validate_bordism(&dd, b).is_clean(), "{:?}", validate_bordism(&dd, b).violations);
        }
        let link = vertex_link_graph(&cone, 0).unwrap();
        let g = link.colored(&cone, &|r| r).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges.len(), 3);
        assert!(linear_fill(&DecoratedSurface::torus("1", "1")).is_err());
    }
}
