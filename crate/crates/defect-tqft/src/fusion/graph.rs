//! Evaluation of coloured graphs on the 2-sphere.
//!
//! Vertices of valence `m ≥ 4` are expanded into left combs, the result is
//! reduced to the empty graph by erasing unit edges, smoothing bivalent
//! vertices, popping bubbles and applying F-moves on an edge of a smallest
//! face. Vertex normalization is the rotation-invariant one in which a theta
//! graph evaluates to `sqrt(d_a d_b d_c)` and a loop to `d_a`.

use num_complex::Complex64;

use super::{comb_trees, FusionCategoryData, HomSpaceBasis};
use crate::defect_data::Sign;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphDart {
    pub edge: usize,
    /// True at the end the edge leaves from.
    pub tail: bool,
    pub vertex: Option<usize>,
}

/// A combinatorial map on the sphere with coloured oriented edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColoredSphereGraph {
    /// Counter-clockwise dart lists.
    pub vertices: Vec<Vec<usize>>,
    pub darts: Vec<GraphDart>,
    /// Colour of each edge; darts `2e` and `2e + 1` are its tail and head.
    pub edges: Vec<usize>,
    /// Colours of vertex-free circles.
    pub loops: Vec<usize>,
}

/// Values of a graph on all tuples of basis trees, vertex 0 most significant.
#[derive(Debug, Clone)]
pub struct SphereGraphValue {
    pub bases: Vec<HomSpaceBasis>,
    pub dims: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl ColoredSphereGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an unattached edge; returns its (tail, head) darts.
    pub fn add_edge(&mut self, colour: usize) -> (usize, usize) {
        let e = self.edges.len();
        self.edges.push(colour);
        self.darts.push(GraphDart { edge: e, tail: true, vertex: None });
        self.darts.push(GraphDart { edge: e, tail: false, vertex: None });
        (2 * e, 2 * e + 1)
    }

    /// Adds a vertex with the given darts in counter-clockwise order.
    pub fn add_vertex(&mut self, ccw: Vec<usize>) -> usize {
        let v = self.vertices.len();
        for &d in &ccw {
            self.darts[d].vertex = Some(v);
        }
        self.vertices.push(ccw);
        v
    }

    pub fn add_loop(&mut self, colour: usize) {
        self.loops.push(colour);
    }

    pub fn opposite(d: usize) -> usize {
        d ^ 1
    }

    /// Link word of a vertex: one `(colour, sign)` per dart, `+` for tails.
    pub fn vertex_word(&self, v: usize) -> Vec<(usize, Sign)> {
        self.vertices[v]
            .iter()
            .map(|&d| {
                let s = if self.darts[d].tail { Sign::Plus } else { Sign::Minus };
                (self.edges[self.darts[d].edge], s)
            })
            .collect()
    }

    fn next_ccw(&self, d: usize) -> usize {
        let v = self.darts[d].vertex.expect("attached dart");
        let list = &self.vertices[v];
        let k = list.iter().position(|&x| x == d).expect("dart in rotation");
        list[(k + 1) % list.len()]
    }

    /// Number of faces, each counted per connected component.
    pub fn face_count(&self) -> usize {
        let mut seen = vec![false; self.darts.len()];
        let mut faces = self.vertices.iter().filter(|l| l.is_empty()).count();
        for d in 0..self.darts.len() {
            if seen[d] {
                continue;
            }
            faces += 1;
            let mut x = d;
            while !seen[x] {
                seen[x] = true;
                x = self.next_ccw(Self::opposite(x));
            }
        }
        faces
    }

    /// Checks that every dart is attached once and that every component is
    /// planar (`V − E + F = 2`).
    pub fn euler_check(&self) -> Result<()> {
        let mut count = vec![0usize; self.darts.len()];
        for list in &self.vertices {
            for &d in list {
                if d >= self.darts.len() {
                    return Err(Error::Topology(format!("unknown dart {d}")));
                }
                count[d] += 1;
            }
        }
        if let Some(d) = count.iter().position(|&c| c != 1) {
            return Err(Error::Topology(format!("dart {d} attached {} times", count[d])));
        }
        let nv = self.vertices.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn root(p: &mut Vec<usize>, mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in 0..self.edges.len() {
            let a = self.darts[2 * e].vertex.unwrap();
            let b = self.darts[2 * e + 1].vertex.unwrap();
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            parent[ra] = rb;
        }
        let mut chi = vec![0i64; nv];
        for v in 0..nv {
            let r = root(&mut parent, v);
            chi[r] += 1;
            if self.vertices[v].is_empty() {
                chi[r] += 1;
            }
        }
        for e in 0..self.edges.len() {
            let r = root(&mut parent, self.darts[2 * e].vertex.unwrap());
            chi[r] -= 1;
        }
        let mut seen = vec![false; self.darts.len()];
        for d in 0..self.darts.len() {
            if seen[d] {
                continue;
            }
            let r = root(&mut parent, self.darts[d].vertex.unwrap());
            chi[r] += 1;
            let mut x = d;
            while !seen[x] {
                seen[x] = true;
                x = self.next_ccw(Self::opposite(x));
            }
        }
        for v in 0..nv {
            if root(&mut parent, v) == v && chi[v] != 2 {
                return Err(Error::Topology(format!(
                    "component of vertex {v} has Euler characteristic {}",
                    chi[v]
                )));
            }
        }
        Ok(())
    }
}

/// Working graph: all darts carry outgoing labels.
#[derive(Debug, Clone)]
struct TriGraph {
    vert: Vec<Vec<usize>>,
    dv: Vec<usize>,
    lab: Vec<usize>,
    opp: Vec<usize>,
    loops: Vec<usize>,
}

const DEAD: usize = usize::MAX;

impl TriGraph {
    fn new_dart(&mut self, v: usize, label: usize) -> usize {
        self.dv.push(v);
        self.lab.push(label);
        self.opp.push(DEAD);
        self.dv.len() - 1
    }

    fn detach(&mut self, d: usize) {
        let v = self.dv[d];
        self.vert[v].retain(|&x| x != d);
        self.dv[d] = DEAD;
    }

    fn next_ccw(&self, d: usize) -> usize {
        let list = &self.vert[self.dv[d]];
        let k = list.iter().position(|&x| x == d).unwrap();
        list[(k + 1) % list.len()]
    }

    /// Erases unit edges and low-valence vertices; false if the value is zero.
    fn simplify(&mut self, cat: &FusionCategoryData) -> bool {
        loop {
            let mut changed = false;
            for v in 0..self.vert.len() {
                let list = self.vert[v].clone();
                match list.len() {
                    0 => {}
                    1 => {
                        let x = list[0];
                        if self.lab[x] != cat.unit {
                            return false;
                        }
                        let y = self.opp[x];
                        self.detach(x);
                        self.detach(y);
                        changed = true;
                    }
                    2 => {
                        let (x, y) = (list[0], list[1]);
                        if self.lab[y] != cat.dual(self.lab[x]) {
                            return false;
                        }
                        if self.opp[x] == y {
                            self.loops.push(self.lab[x]);
                        } else {
                            let (p, q) = (self.opp[x], self.opp[y]);
                            self.opp[p] = q;
                            self.opp[q] = p;
                        }
                        self.detach(x);
                        self.detach(y);
                        changed = true;
                    }
                    3 => {
                        let (a, b, c) = (self.lab[list[0]], self.lab[list[1]], self.lab[list[2]]);
                        if !cat.admissible(a, b, c) {
                            return false;
                        }
                        if let Some(&x) = list.iter().find(|&&x| self.lab[x] == cat.unit) {
                            let y = self.opp[x];
                            self.detach(x);
                            self.detach(y);
                            changed = true;
                        }
                    }
                    k => unreachable!("vertex of valence {k} in a trivalent graph"),
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Faces as dart cycles of `d ↦ σ(opp(d))`.
    fn faces(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut face_of = vec![DEAD; self.dv.len()];
        let mut faces = Vec::new();
        for d in 0..self.dv.len() {
            if self.dv[d] == DEAD || face_of[d] != DEAD {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = d;
            while face_of[x] == DEAD {
                face_of[x] = faces.len();
                cyc.push(x);
                x = self.next_ccw(self.opp[x]);
            }
            faces.push(cyc);
        }
        (faces, face_of)
    }
}

fn evaluate_tri(mut g: TriGraph, cat: &FusionCategoryData) -> Complex64 {
    let mut scalar = Complex64::new(1.0, 0.0);
    loop {
        if !g.simplify(cat) {
            return Complex64::default();
        }
        if g.vert.iter().all(|l| l.is_empty()) {
            let loops: f64 = g.loops.iter().map(|&a| cat.qdim(a)).product();
            return scalar * loops;
        }
        let (faces, face_of) = g.faces();
        for d in 0..g.dv.len() {
            if g.dv[d] != DEAD && face_of[d] == face_of[g.opp[d]] {
                return Complex64::default();
            }
        }
        let smallest = faces.iter().min_by_key(|f| f.len()).unwrap();
        if smallest.len() == 2 {
            let (d1, d2) = (smallest[0], smallest[1]);
            let (x, y) = (g.dv[d1], g.dv[d2]);
            let e2 = g.opp[d2];
            let xu = *g.vert[x].iter().find(|&&z| z != d1 && z != e2).unwrap();
            let xw = *g.vert[y].iter().find(|&&z| z != d2 && z != g.opp[d1]).unwrap();
            let (a, b, c) = (g.lab[xu], g.lab[d1], g.lab[e2]);
            if g.lab[xw] != cat.dual(a) {
                return Complex64::default();
            }
            scalar *= (cat.qdim(b) * cat.qdim(c) / cat.qdim(a)).sqrt();
            let (p, q) = (g.opp[xu], g.opp[xw]);
            if p == xw {
                g.loops.push(a);
            } else {
                g.opp[p] = q;
                g.opp[q] = p;
            }
            for z in [d1, d2, g.opp[d1], e2, xu, xw] {
                g.detach(z);
            }
            continue;
        }
        let eu = smallest[0];
        let ew = g.opp[eu];
        let (u, w) = (g.dv[eu], g.dv[ew]);
        let at = |list: &Vec<usize>, d: usize| {
            let k = list.iter().position(|&z| z == d).unwrap();
            (list[(k + 1) % 3], list[(k + 2) % 3])
        };
        let (p, q) = at(&g.vert[u], eu);
        let (r, s) = at(&g.vert[w], ew);
        let (m, a, b, c, d) = (g.lab[eu], g.lab[p], g.lab[q], g.lab[r], g.lab[s]);
        let mut total = Complex64::default();
        for n in 0..cat.rank() {
            let coef = cat.fsym(a, b, c, d, m, n);
            if coef == Complex64::default() {
                continue;
            }
            let mut h = g.clone();
            h.vert[u] = vec![eu, q, r];
            h.vert[w] = vec![ew, s, p];
            h.dv[r] = u;
            h.dv[p] = w;
            h.lab[eu] = n;
            h.lab[ew] = cat.dual(n);
            total += coef * evaluate_tri(h, cat);
        }
        return scalar * total;
    }
}

/// Builds the trivalent working graph for one choice of trees per vertex.
fn expand(cat: &FusionCategoryData, g: &ColoredSphereGraph, trees: &[&Vec<usize>]) -> TriGraph {
    let nd = g.darts.len();
    let mut t = TriGraph {
        vert: Vec::new(),
        dv: vec![DEAD; nd],
        lab: (0..nd)
            .map(|d| {
                let c = g.edges[g.darts[d].edge];
                if g.darts[d].tail {
                    c
                } else {
                    cat.dual(c)
                }
            })
            .collect(),
        opp: (0..nd).map(|d| d ^ 1).collect(),
        loops: g.loops.clone(),
    };
    for (v, list) in g.vertices.iter().enumerate() {
        let m = list.len();
        if m <= 3 {
            let id = t.vert.len();
            for &d in list {
                t.dv[d] = id;
            }
            t.vert.push(list.clone());
            continue;
        }
        let labels = trees[v];
        let first = t.vert.len();
        let mut prev_in = DEAD;
        for k in 2..m {
            let id = first + k - 2;
            t.vert.push(Vec::new());
            let mut ccw = Vec::with_capacity(3);
            if k == 2 {
                ccw.push(list[0]);
            } else {
                ccw.push(prev_in);
            }
            ccw.push(list[k - 1]);
            if k == m - 1 {
                ccw.push(list[m - 1]);
            } else {
                let a = labels[k - 2];
                let out = t.new_dart(id, cat.dual(a));
                let inn = t.new_dart(id + 1, a);
                t.opp[out] = inn;
                t.opp[inn] = out;
                ccw.push(out);
                prev_in = inn;
            }
            for &d in &ccw {
                t.dv[d] = id;
            }
            t.vert[id] = ccw;
        }
    }
    t
}

/// Evaluates a graph on the sphere on every tuple of vertex basis trees.
pub fn evaluate_sphere_graph(cat: &FusionCategoryData, g: &ColoredSphereGraph) -> Result<SphereGraphValue> {
    if let Some(&c) = g.edges.iter().chain(g.loops.iter()).find(|&&c| c >= cat.rank()) {
        return Err(Error::Colour(format!("colour index {c} out of range")));
    }
    g.euler_check()?;
    let bases: Vec<HomSpaceBasis> = (0..g.vertices.len())
        .map(|v| {
            let word = g.vertex_word(v);
            let ys: Vec<usize> = word.iter().map(|&(x, s)| cat.signed(x, s)).collect();
            let trees = comb_trees(cat, &ys);
            HomSpaceBasis { word, dim: trees.len(), trees }
        })
        .collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.dim).collect();
    let total: usize = dims.iter().product();
    let mut values = Vec::with_capacity(total);
    if total > 0 {
        let mut idx = vec![0usize; dims.len()];
        loop {
            let trees: Vec<&Vec<usize>> = idx.iter().zip(&bases).map(|(&i, b)| &b.trees[i]).collect();
            values.push(evaluate_tri(expand(cat, g, &trees), cat));
            if !mixed_odometer(&mut idx, &dims) {
                break;
            }
        }
    }
    Ok(SphereGraphValue { bases, dims, values })
}

/// Mixed-radix counter, last index fastest; false once it wraps.
pub(crate) fn mixed_odometer(idx: &mut [usize], dims: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn theta(g: &mut ColoredSphereGraph, colours: [usize; 3]) {
        let darts: Vec<(usize, usize)> = colours.iter().map(|&c| g.add_edge(c)).collect();
        g.add_vertex(darts.iter().map(|d| d.0).collect());
        g.add_vertex(darts.iter().rev().map(|d| d.1).collect());
    }

    #[test]
    fn free_loop_gives_the_dimension() {
        let fib = FusionCategoryData::bundled("fibonacci").unwrap();
        let tau = fib.index_of("tau").unwrap();
        let mut g = ColoredSphereGraph::new();
        g.add_loop(tau);
        let v = evaluate_sphere_graph(&fib, &g).unwrap();
        assert!((v.values[0] - fib.qdim(tau)).norm() < 1e-12);
    }

    #[test]
    fn theta_graphs() {
        let z2 = FusionCategoryData::bundled("vec_z2").unwrap();
        let (one, gg) = (z2.index_of("1").unwrap(), z2.index_of("g").unwrap());
        let mut g = ColoredSphereGraph::new();
        theta(&mut g, [gg, gg, one]);
        let v = evaluate_sphere_graph(&z2, &g).unwrap();
        assert_eq!(v.values.len(), 1);
        assert!((v.values[0] - c1()).norm() < 1e-12);

        let fib = FusionCategoryData::bundled("fibonacci").unwrap();
        let tau = fib.index_of("tau").unwrap();
        let mut g = ColoredSphereGraph::new();
        theta(&mut g, [tau, tau, tau]);
        let v = evaluate_sphere_graph(&fib, &g).unwrap();
        let phi = fib.qdim(tau);
        assert!((v.values[0].re - phi.powf(1.5)).abs() < 1e-12);
    }

    /// Tetrahedron with an outer triangle 0, 1, 2 around a centre 3.
    pub(crate) fn tetrahedron(colours: [usize; 6]) -> ColoredSphereGraph {
        let mut g = ColoredSphereGraph::new();
        let [e01, e12, e20, e03, e13, e23] = colours.map(|c| g.add_edge(c));
        g.add_vertex(vec![e01.0, e03.0, e20.1]);
        g.add_vertex(vec![e12.0, e13.0, e01.1]);
        g.add_vertex(vec![e20.0, e23.0, e12.1]);
        g.add_vertex(vec![e03.1, e13.1, e23.1]);
        g
    }

    #[test]
    fn fibonacci_tetrahedron_is_the_f_symbol_times_dimension_squared() {
        let fib = FusionCategoryData::bundled("fibonacci").unwrap();
        let tau = fib.index_of("tau").unwrap();
        let g = tetrahedron([tau; 6]);
        assert_eq!(g.face_count(), 4);
        let v = evaluate_sphere_graph(&fib, &g).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let f_tt = fib.f(tau, tau, tau, tau, tau, tau);
        assert!((f_tt.re + 1.0 / phi).abs() < 1e-12);
        assert!((v.values[0] - f_tt * phi * phi).norm() < 1e-12);
    }

    #[test]
    fn non_planar_maps_are_rejected() {
        let fib = FusionCategoryData::bundled("fibonacci").unwrap();
        let mut g = ColoredSphereGraph::new();
        let a = g.add_edge(1);
        let b = g.add_edge(1);
        g.add_vertex(vec![a.0, b.0, a.1, b.1]);
        assert!(matches!(evaluate_sphere_graph(&fib, &g), Err(Error::Topology(_))));
        let mut h = ColoredSphereGraph::new();
        h.add_loop(7);
        assert!(matches!(evaluate_sphere_graph(&fib, &h), Err(Error::Colour(_))));
    }
}
