//! Gluing bordisms along matching boundary surfaces.

use super::{BoundaryComponent, BoundaryRole, End, NodeEnd, StratifiedBordism, Stratum0, Stratum1};
use crate::error::{Error, Result};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    /// Dense ids of the classes, in order of their smallest member.
    fn relabel(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut k = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = k;
                k += 1;
            }
            out[x] = id[r];
        }
        (out, k)
    }
}

/// The 3-stratum next to each face of a boundary component.
pub fn face_regions(b: &StratifiedBordism, comp: &BoundaryComponent) -> Result<Vec<usize>> {
    let s = &comp.surface;
    let faces = s.faces();
    let mut region = vec![usize::MAX; faces.count];
    for (e, &r) in comp.edge_strata.iter().enumerate() {
        region[faces.of_dart[2 * e + 1]] = b.strata2[r].positive;
        region[faces.of_dart[2 * e]] = b.strata2[r].negative;
    }
    for (v, f) in faces.of_isolated.iter().enumerate() {
        if let Some(f) = f {
            region[*f] = b.strata1[comp.vertex_strata[v]]
                .ambient
                .ok_or_else(|| Error::Topology(format!("isolated boundary vertex {v} has no ambient 3-stratum")))?;
        }
    }
    Ok(region)
}

/// Glues the outgoing components of `first` to the incoming components of
/// `second`, in order. The result keeps the incoming components of `first`
/// followed by the outgoing components of `second`.
pub fn compose(first: &StratifiedBordism, second: &StratifiedBordism) -> Result<StratifiedBordism> {
    let outs: Vec<usize> = (0..first.boundary.len()).filter(|&c| first.boundary[c].role == BoundaryRole::Out).collect();
    let ins: Vec<usize> = (0..second.boundary.len()).filter(|&c| second.boundary[c].role == BoundaryRole::In).collect();
    if outs.len() != ins.len() {
        return Err(Error::Compose(format!("{} outgoing against {} incoming components", outs.len(), ins.len())));
    }
    for (&a, &c) in outs.iter().zip(&ins) {
        if first.boundary[a].surface != second.boundary[c].surface {
            return Err(Error::Compose(format!(
                "surface {} differs from surface {}",
                first.boundary[a].name, second.boundary[c].name
            )));
        }
        if !first.boundary[a].surface.is_cellular() {
            return Err(Error::Compose("gluing surfaces must be cellular".into()));
        }
    }
    let [o0, o1, o2, o3] = first.counts();
    let [_, n1, n2, n3] = second.counts();
    let mut u3 = UnionFind::new(o3 + n3);
    let mut u2 = UnionFind::new(o2 + n2);
    let mut glued_edges = vec![0i64; o2 + n2];
    // glued 1-stratum ends, indexed by [is tail], and the gluing graph with
    // a flag for strata whose directions disagree
    let mut glued_end = vec![[false; 2]; o1 + n1];
    let mut adjacent: Vec<Vec<(usize, bool)>> = vec![vec![]; o1 + n1];
    for (&a, &c) in outs.iter().zip(&ins) {
        let (ca, cc) = (&first.boundary[a], &second.boundary[c]);
        for (x, y) in face_regions(first, ca)?.into_iter().zip(face_regions(second, cc)?) {
            u3.union(x, o3 + y);
        }
        for (&x, &y) in ca.edge_strata.iter().zip(&cc.edge_strata) {
            u2.union(x, o2 + y);
            glued_edges[x] += 1;
        }
        for (p, (&x, &y)) in ca.vertex_strata.iter().zip(&cc.vertex_strata).enumerate() {
            let here_a = End::Boundary { component: a, vertex: p };
            let here_c = End::Boundary { component: c, vertex: p };
            let (sx, sy) = (&first.strata1[x], &second.strata1[y]);
            let (xt, yt) = (sx.tail == here_a, sy.tail == here_c);
            adjacent[x].push((o1 + y, xt == yt));
            adjacent[o1 + y].push((x, xt == yt));
            glued_end[x][usize::from(xt)] = true;
            glued_end[o1 + y][usize::from(yt)] = true;
        }
    }
    let (m3, k3) = u3.relabel();
    let (m2, k2) = u2.relabel();
    let mut m1 = vec![usize::MAX; o1 + n1];
    let mut flip = vec![false; o1 + n1];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for root in 0..o1 + n1 {
        if m1[root] != usize::MAX {
            continue;
        }
        let k = members.len();
        m1[root] = k;
        let mut class = vec![root];
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(y, opposite) in &adjacent[x] {
                let f = flip[x] ^ opposite;
                if m1[y] == usize::MAX {
                    m1[y] = k;
                    flip[y] = f;
                    class.push(y);
                    stack.push(y);
                } else if flip[y] != f {
                    return Err(Error::Compose("glued 1-strata cannot be oriented consistently".into()));
                }
            }
        }
        members.push(class);
    }

    let mut b = StratifiedBordism::default();
    let mut seen3 = vec![false; k3];
    for (x, s) in first.strata3.iter().chain(&second.strata3).enumerate() {
        if !seen3[m3[x]] {
            seen3[m3[x]] = true;
            b.strata3.push(s.clone());
        }
    }
    let mut chi = vec![0i64; k2];
    let mut seen2 = vec![false; k2];
    for (x, s) in first.strata2.iter().chain(&second.strata2).enumerate() {
        let off = if x < o2 { 0 } else { o3 };
        chi[m2[x]] += s.euler_char - glued_edges[x];
        if !seen2[m2[x]] {
            seen2[m2[x]] = true;
            let mut s = s.clone();
            s.positive = m3[off + s.positive];
            s.negative = m3[off + s.negative];
            b.strata2.push(s);
        }
    }
    for (s, c) in b.strata2.iter_mut().zip(chi) {
        s.euler_char = c;
    }

    // boundary components of the result and the renumbering of ends
    let mut boundary_map = Vec::new();
    for (c, comp) in first.boundary.iter().enumerate() {
        if comp.role == BoundaryRole::In {
            boundary_map.push((0, c));
        }
    }
    for (c, comp) in second.boundary.iter().enumerate() {
        if comp.role == BoundaryRole::Out {
            boundary_map.push((1, c));
        }
    }
    let new_end = |side: usize, end: End| -> End {
        match end {
            End::Interior(v) => End::Interior(if side == 0 { v } else { o0 + v }),
            End::Boundary { component, vertex } => {
                let k = boundary_map.iter().position(|&x| x == (side, component)).expect("kept boundary");
                End::Boundary { component: k, vertex }
            }
            End::Closed => End::Closed,
        }
    };
    for class in &members {
        let x0 = class[0];
        let (side0, s0) = if x0 < o1 { (0, &first.strata1[x0]) } else { (1, &second.strata1[x0 - o1]) };
        let (off2, off3) = if side0 == 0 { (0, 0) } else { (o2, o3) };
        let mut tail = End::Closed;
        let mut head = End::Closed;
        for &x in class {
            let (side, s) = if x < o1 { (0, &first.strata1[x]) } else { (1, &second.strata1[x - o1]) };
            let (t, h) = if flip[x] { (s.head, s.tail) } else { (s.tail, s.head) };
            if !glued_end[x][usize::from(!flip[x])] {
                tail = new_end(side, t);
            }
            if !glued_end[x][usize::from(flip[x])] {
                head = new_end(side, h);
            }
        }
        b.strata1.push(Stratum1 {
            label: s0.label.clone(),
            word: s0.word.iter().map(|&(r, sg)| (m2[off2 + r], sg)).collect(),
            tail,
            head,
            ambient: s0.ambient.map(|a| m3[off3 + a]),
        });
    }
    for (side, src) in [(0, first), (1, second)] {
        let (off1, off2) = if side == 0 { (0, 0) } else { (o1, o2) };
        for z in &src.strata0 {
            let mut link = z.link.clone();
            for n in link.nodes.iter_mut() {
                if flip[off1 + n.stratum] {
                    n.end = match n.end {
                        NodeEnd::Tail => NodeEnd::Head,
                        NodeEnd::Head => NodeEnd::Tail,
                    };
                }
                n.stratum = m1[off1 + n.stratum];
            }
            link.edges.iter_mut().for_each(|e| e.stratum = m2[off2 + e.stratum]);
            link.loops.iter_mut().for_each(|r| *r = m2[off2 + *r]);
            b.strata0.push(Stratum0 { link });
        }
    }
    for &(side, c) in &boundary_map {
        let (src, off1, off2) = if side == 0 { (first, 0, 0) } else { (second, o1, o2) };
        let mut comp = src.boundary[c].clone();
        comp.vertex_strata.iter_mut().for_each(|x| *x = m1[off1 + *x]);
        comp.edge_strata.iter_mut().for_each(|x| *x = m2[off2 + *x]);
        b.boundary.push(comp);
    }
    Ok(b)
}
