//! Combinatorial stratified bordisms.
//!
//! A bordism is a record of its strata: 3-strata with a ball flag, oriented
//! 2-strata with their two sides and Euler characteristic, 1-strata with the
//! cyclic signed list of 2-strata around them, and interior 0-strata with
//! their link graph on the 2-sphere. A 2-stratum's positive side is the
//! target of its label, the negative side the source.
//!
//! The word of a 1-stratum lists the adjacent 2-strata in the positive
//! rotation sense about its direction. At a vertex, the node of a 1-stratum
//! leaving the vertex reads that word; the node of a 1-stratum arriving reads
//! it reversed with flipped signs.

mod glue;
mod manifolds;
mod refine;
mod surface;

use serde::{Deserialize, Serialize};

use crate::defect_data::{CyclicWord, D1Image, D1Set, DefectData, Sign, SignedLabel};
use crate::error::{Error, Result};
use crate::fusion::ColoredSphereGraph;
use crate::report::ValidationReport;

pub use glue::{compose, face_regions};
pub use refine::{refine, valid_sites, RefineMove};
pub use manifolds::{boundary_of_4_simplex, bundled_manifold, bundled_manifold_names, from_tetrahedra, mapping_torus};
pub use surface::{cylinder, dipole_ball, linear_fill, product_cylinder, DecoratedSurface, SurfaceVertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum3 {
    pub label: String,
    pub ball: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum2 {
    pub label: String,
    pub euler_char: i64,
    pub positive: usize,
    pub negative: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Interior(usize),
    Boundary { component: usize, vertex: usize },
    /// The 1-stratum is a circle.
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum1 {
    #[serde(default)]
    pub label: Option<String>,
    pub word: Vec<(usize, Sign)>,
    pub tail: End,
    pub head: End,
    /// The 3-stratum containing a 1-stratum with an empty word.
    #[serde(default)]
    pub ambient: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeEnd {
    Tail,
    Head,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkNode {
    pub stratum: usize,
    pub end: NodeEnd,
}

/// A 2-stratum through the vertex, joining two node positions; the tail
/// position carries the sign `+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEdge {
    pub stratum: usize,
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

/// Coloured graph of the link of an interior vertex, by stratum ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkGraph {
    pub nodes: Vec<LinkNode>,
    pub edges: Vec<LinkEdge>,
    /// 2-strata meeting the link sphere in a circle without nodes.
    #[serde(default)]
    pub loops: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum0 {
    pub link: LinkGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryRole {
    In,
    Out,
}

/// A boundary surface with the strata of the bordism it meets.
///
/// A 1-stratum entering the bordism at an incoming vertex, or leaving it at
/// an outgoing one, has the vertex word as its word; otherwise it has the
/// reversed word with flipped signs. Every boundary edge's 2-stratum has the
/// face left of the edge on its positive side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub name: String,
    pub role: BoundaryRole,
    pub surface: DecoratedSurface,
    pub vertex_strata: Vec<usize>,
    pub edge_strata: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedBordism {
    pub strata3: Vec<Stratum3>,
    pub strata2: Vec<Stratum2>,
    pub strata1: Vec<Stratum1>,
    pub strata0: Vec<Stratum0>,
    #[serde(default)]
    pub boundary: Vec<BoundaryComponent>,
}

impl StratifiedBordism {
    pub fn counts(&self) -> [usize; 4] {
        [self.strata0.len(), self.strata1.len(), self.strata2.len(), self.strata3.len()]
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Entries of the node of a 1-stratum end, in counter-clockwise order.
    pub fn node_word(&self, node: LinkNode) -> Vec<(usize, Sign)> {
        let w = &self.strata1[node.stratum].word;
        match node.end {
            NodeEnd::Tail => w.clone(),
            NodeEnd::Head => w.iter().rev().map(|&(r, s)| (r, s.flip())).collect(),
        }
    }

    pub fn labelled(&self, word: &[(usize, Sign)]) -> Vec<SignedLabel> {
        word.iter().map(|&(r, s)| SignedLabel::new(self.strata2[r].label.clone(), s)).collect()
    }

    /// Fine: every 3-stratum a ball, every 2-stratum a disc.
    pub fn check_fine(&self) -> Result<()> {
        if let Some(k) = self.strata3.iter().position(|s| !s.ball) {
            return Err(Error::Fineness(format!("3-stratum {k} is not a ball")));
        }
        if let Some(k) = self.strata2.iter().position(|s| s.euler_char != 1) {
            return Err(Error::Fineness(format!("2-stratum {k} has Euler characteristic ≠ 1")));
        }
        for (c, comp) in self.boundary.iter().enumerate() {
            if !comp.surface.is_cellular() {
                return Err(Error::Fineness(format!("boundary component {c} has non-disc faces")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Whether a 1-stratum ending at a boundary vertex reads the vertex word as is.
pub fn direct_word(role: BoundaryRole, at_tail: bool) -> bool {
    (role == BoundaryRole::In) == at_tail
}

pub fn reverse_word(w: &[(usize, Sign)]) -> Vec<(usize, Sign)> {
    w.iter().rev().map(|&(r, s)| (r, s.flip())).collect()
}

/// The link word of a 1-stratum, canonically rotated; an empty word gives
/// the ambient 3-label.
pub fn edge_link(b: &StratifiedBordism, id: usize) -> Result<D1Image> {
    let s = b.strata1.get(id).ok_or_else(|| Error::Label(format!("1-stratum {id}")))?;
    if s.word.is_empty() {
        let amb = s.ambient.ok_or_else(|| Error::Topology(format!("1-stratum {id} has no ambient 3-stratum")))?;
        return Ok(D1Image::Loop(b.strata3[amb].label.clone()));
    }
    let entries = s.word.iter().map(|&(r, sign)| SignedLabel::new(format!("{r}"), sign)).collect();
    Ok(D1Image::Word(CyclicWord::new(entries).canonical()))
}

impl LinkGraph {
    /// Position map: `(node, position) ↦ (edge, is_tail)`.
    fn incidence(&self, b: &StratifiedBordism) -> Result<Vec<Vec<Option<(usize, bool)>>>> {
        let mut inc: Vec<Vec<Option<(usize, bool)>>> =
            self.nodes.iter().map(|n| vec![None; b.strata1[n.stratum].word.len()]).collect();
        for (k, e) in self.edges.iter().enumerate() {
            for (&(node, pos), is_tail) in [(&e.tail, true), (&e.head, false)] {
                let slot = inc
                    .get_mut(node)
                    .and_then(|v| v.get_mut(pos))
                    .ok_or_else(|| Error::Topology(format!("link edge {k} points at a missing node position")))?;
                if slot.is_some() {
                    return Err(Error::Topology(format!("node {node} position {pos} used twice")));
                }
                *slot = Some((k, is_tail));
            }
        }
        Ok(inc)
    }

    /// The link as a coloured graph, given a colour per 2-stratum.
    pub fn colored(&self, b: &StratifiedBordism, colour: &dyn Fn(usize) -> usize) -> Result<ColoredSphereGraph> {
        let inc = self.incidence(b)?;
        let mut g = ColoredSphereGraph::new();
        let darts: Vec<(usize, usize)> = self.edges.iter().map(|e| g.add_edge(colour(e.stratum))).collect();
        for (n, row) in inc.iter().enumerate() {
            let mut ccw = Vec::with_capacity(row.len());
            for (pos, slot) in row.iter().enumerate() {
                let (k, tail) = slot.ok_or_else(|| Error::Topology(format!("node {n} position {pos} is unmatched")))?;
                ccw.push(if tail { darts[k].0 } else { darts[k].1 });
            }
            g.add_vertex(ccw);
        }
        for &r in &self.loops {
            g.add_loop(colour(r));
        }
        Ok(g)
    }

    /// Checks node positions, signs and planarity of the link.
    pub fn check(&self, b: &StratifiedBordism) -> Result<()> {
        for e in &self.edges {
            for (&(node, pos), sign) in [(&e.tail, Sign::Plus), (&e.head, Sign::Minus)] {
                let n = self.nodes.get(node).ok_or_else(|| Error::Topology(format!("missing node {node}")))?;
                let w = b.node_word(*n);
                if w.get(pos) != Some(&(e.stratum, sign)) {
                    return Err(Error::Topology(format!(
                        "link edge of 2-stratum {} does not match node {node} position {pos}",
                        e.stratum
                    )));
                }
            }
        }
        self.colored(b, &|_| 0)?.euler_check()
    }
}

/// The coloured link graph of an interior vertex, labelled by 2-strata.
pub fn vertex_link_graph(b: &StratifiedBordism, vertex: usize) -> Result<LinkGraph> {
    let v = b
        .strata0
        .get(vertex)
        .ok_or_else(|| Error::Topology(format!("vertex {vertex} is not an interior 0-stratum")))?;
    v.link.check(b)?;
    Ok(v.link.clone())
}

fn d1_accepts(dd: &DefectData, label: Option<&str>, word: &[SignedLabel]) -> bool {
    if word.is_empty() {
        return true;
    }
    match (&dd.d1, label) {
        (D1Set::Explicit(map), Some(id)) => {
            matches!(map.get(id), Some(D1Image::Word(w)) if *w == CyclicWord::new(word.to_vec()))
        }
        (D1Set::Ribbon(objects), Some(id)) => objects.contains(id) && dd.accepts_word(word),
        (D1Set::Ribbon(_), None) => false,
        _ => dd.accepts_word(word),
    }
}

/// Checks labels, sides, link words, ends and links against the defect data.
pub fn validate_bordism(dd: &DefectData, b: &StratifiedBordism) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let n3 = b.strata3.len();
    let n2 = b.strata2.len();
    for (k, s) in b.strata3.iter().enumerate() {
        if !dd.d3.contains(&s.label) {
            rep.push(format!("3-stratum {k}"), format!("label {} is not in d3", s.label));
        }
    }
    for (k, s) in b.strata2.iter().enumerate() {
        let Some((src, tgt)) = dd.d2.get(&s.label) else {
            rep.push(format!("2-stratum {k}"), format!("label {} is not in d2", s.label));
            continue;
        };
        if s.positive >= n3 || s.negative >= n3 {
            rep.push(format!("2-stratum {k}"), "side is not a 3-stratum");
            continue;
        }
        if &b.strata3[s.negative].label != src || &b.strata3[s.positive].label != tgt {
            rep.push(format!("2-stratum {k}"), "adjacent 3-labels differ from (s, t) of the label");
        }
    }
    for (k, s) in b.strata1.iter().enumerate() {
        let loc = format!("1-stratum {k}");
        if s.word.iter().any(|&(r, _)| r >= n2) {
            rep.push(loc, "word refers to a missing 2-stratum");
            continue;
        }
        let m = s.word.len();
        for i in 0..m {
            let (r, e) = s.word[i];
            let (r2, e2) = s.word[(i + 1) % m];
            let after = if e.is_plus() { b.strata2[r].positive } else { b.strata2[r].negative };
            let before = if e2.is_plus() { b.strata2[r2].negative } else { b.strata2[r2].positive };
            if after != before {
                rep.push(loc.clone(), format!("entries {i} and {} do not share a 3-stratum", (i + 1) % m));
            }
        }
        let word = b.labelled(&s.word);
        if !word.is_empty() {
            match dd.chain_violations(&word) {
                Ok(v) if v.is_empty() => {}
                _ => rep.push(loc.clone(), "labels violate the chain condition"),
            }
        } else if s.ambient.map_or(true, |a| a >= n3) {
            rep.push(loc.clone(), "empty word without an ambient 3-stratum");
        }
        if !d1_accepts(dd, s.label.as_deref(), &word) {
            rep.push(loc.clone(), format!("word {} is not in the image of the folding map", CyclicWord::new(word)));
        }
        if (s.tail == End::Closed) != (s.head == End::Closed) {
            rep.push(loc.clone(), "only one end is closed");
        }
        for end in [s.tail, s.head] {
            match end {
                End::Interior(v) if v >= b.strata0.len() => rep.push(loc.clone(), "end at a missing vertex"),
                End::Boundary { component, vertex } => {
                    let ok = b
                        .boundary
                        .get(component)
                        .and_then(|c| c.vertex_strata.get(vertex))
                        .is_some_and(|&x| x == k);
                    if !ok {
                        rep.push(loc.clone(), "boundary end not registered on the boundary surface");
                    }
                }
                _ => {}
            }
        }
    }
    for (v, z) in b.strata0.iter().enumerate() {
        let loc = format!("vertex {v}");
        let mut seen = std::collections::BTreeMap::new();
        for n in &z.link.nodes {
            if n.stratum >= b.strata1.len() {
                rep.push(loc.clone(), "node of a missing 1-stratum");
                continue;
            }
            *seen.entry((n.stratum, n.end)).or_insert(0) += 1;
            let s = &b.strata1[n.stratum];
            let end = if n.end == NodeEnd::Tail { s.tail } else { s.head };
            if end != End::Interior(v) {
                rep.push(loc.clone(), format!("1-stratum {} does not end here", n.stratum));
            }
        }
        if seen.values().any(|&c| c > 1) {
            rep.push(loc.clone(), "repeated node");
        }
        for (k, s) in b.strata1.iter().enumerate() {
            for (end, tag) in [(s.tail, NodeEnd::Tail), (s.head, NodeEnd::Head)] {
                if end == End::Interior(v) && !seen.contains_key(&(k, tag)) {
                    rep.push(loc.clone(), format!("1-stratum {k} ends here but has no node"));
                }
            }
        }
        if rep.is_clean() {
            if let Err(e) = z.link.check(b) {
                rep.push(loc, e.to_string());
            }
        }
    }
    for (c, comp) in b.boundary.iter().enumerate() {
        let loc = format!("boundary {}", comp.name);
        let s = &comp.surface;
        if comp.vertex_strata.len() != s.vertices.len() || comp.edge_strata.len() != s.edges.len() {
            rep.push(loc, "stratum maps do not cover the surface");
            continue;
        }
        for (e, &r) in comp.edge_strata.iter().enumerate() {
            if r >= n2 || b.strata2[r].label != s.edges[e] {
                rep.push(loc.clone(), format!("edge {e} label differs from its 2-stratum"));
            }
        }
        for (p, &l) in comp.vertex_strata.iter().enumerate() {
            let Some(st) = b.strata1.get(l) else {
                rep.push(loc.clone(), format!("vertex {p} maps to a missing 1-stratum"));
                continue;
            };
            let here = End::Boundary { component: c, vertex: p };
            let at_tail = st.tail == here;
            if !at_tail && st.head != here {
                rep.push(loc.clone(), format!("vertex {p} is not an end of its 1-stratum"));
            }
            let want: Vec<(usize, Sign)> =
                s.vertex_word(p).iter().map(|&(e, sign)| (comp.edge_strata[e], sign)).collect();
            let want = if direct_word(comp.role, at_tail) { want } else { reverse_word(&want) };
            if st.word != want {
                rep.push(loc.clone(), format!("vertex {p} word differs from its 1-stratum"));
            }
        }
        rep.merge(s.validate(dd));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_data::{build_group_defect_data, GroupTable};

    /// A closed circle 1-stratum with two sheets around it, inside one ball.
    fn book(labels: [&str; 2], signs: [Sign; 2]) -> StratifiedBordism {
        StratifiedBordism {
            strata3: vec![Stratum3 { label: "*".into(), ball: false }],
            strata2: labels
                .iter()
                .map(|l| Stratum2 { label: l.to_string(), euler_char: 1, positive: 0, negative: 0 })
                .collect(),
            strata1: vec![Stratum1 {
                label: None,
                word: vec![(0, signs[0]), (1, signs[1])],
                tail: End::Closed,
                head: End::Closed,
                ambient: None,
            }],
            strata0: vec![],
            boundary: vec![],
        }
    }

    #[test]
    fn group_edge_condition_is_checked() {
        let z3 = build_group_defect_data(&GroupTable::cyclic(3)).unwrap();
        let bad = book(["g", "g"], [Sign::Plus, Sign::Plus]);
        assert!(!validate_bordism(&z3, &bad).is_clean());
        let good = book(["g", "g"], [Sign::Plus, Sign::Minus]);
        assert!(validate_bordism(&z3, &good).is_clean());
    }

    #[test]
    fn sides_must_match_source_and_target() {
        let mut dd = build_group_defect_data(&GroupTable::cyclic(2)).unwrap();
        dd.d3.insert("u".into());
        dd.d2.insert("x".into(), ("u".into(), "*".into()));
        let b = StratifiedBordism {
            strata3: vec![Stratum3 { label: "*".into(), ball: true }],
            strata2: vec![Stratum2 { label: "x".into(), euler_char: 2, positive: 0, negative: 0 }],
            ..Default::default()
        };
        let rep = validate_bordism(&dd, &b);
        assert!(rep.violations.iter().any(|v| v.message.contains("(s, t)")));
    }

    #[test]
    fn edge_links_are_canonical() {
        let b = book(["g", "g"], [Sign::Plus, Sign::Minus]);
        let mut rotated = b.clone();
        rotated.strata1[0].word.rotate_left(1);
        assert_eq!(edge_link(&b, 0).unwrap(), edge_link(&rotated, 0).unwrap());
        let mut empty = b.clone();
        empty.strata1[0].word.clear();
        empty.strata1[0].ambient = Some(0);
        assert_eq!(edge_link(&empty, 0).unwrap(), D1Image::Loop("*".into()));
        assert!(edge_link(&b, 5).is_err());
    }
}
