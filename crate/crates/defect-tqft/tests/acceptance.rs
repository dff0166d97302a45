//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Expected values come from the oracles in this file, which share no code
//! with the engines beyond the input data structures.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use defect_tqft::computad::{build_computad, validate_computad};
use defect_tqft::defect_data::{build_group_defect_data, validate_defect_data, DefectData, GroupTable, Sign};
use defect_tqft::fusion::{validate_category, FusionCategoryData};
use defect_tqft::gray::three::one_morphism_grade;
use defect_tqft::gray::{
    check_gray_axioms, check_model_equivalence, glue_sphere, small_diagrams, small_words, AxiomConfig, EventKind,
    GrayModel, TwoMorphismDiagram,
};
use defect_tqft::strata::{
    boundary_of_4_simplex, bundled_manifold, bundled_manifold_names, compose, cylinder, dipole_ball, product_cylinder,
    refine, valid_sites, validate_bordism, BoundaryRole, DecoratedSurface, RefineMove,
};
use defect_tqft::tqft_engines::{closed_invariant, state_space, statesum_map, triv_invariant, Engine};
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

type Outcome = Result<String, String>;

fn cat(name: &str) -> FusionCategoryData {
    FusionCategoryData::bundled(name).unwrap()
}

fn group_dd(g: &GroupTable) -> DefectData {
    build_group_defect_data(g).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- oracles

/// `|Hom(π, G)|` for a presentation of `π` with `gens` generators and
/// relators given as lists of (generator, exponent sign), by exhaustion.
fn count_homomorphisms(n: usize, mul: &dyn Fn(usize, usize) -> usize, inv: &dyn Fn(usize) -> usize, gens: usize, relators: &[Vec<(usize, bool)>]) -> usize {
    let mut count = 0;
    let mut assign = vec![0usize; gens];
    loop {
        let ok = relators.iter().all(|r| {
            r.iter().fold(0, |acc, &(g, plus)| mul(acc, if plus { assign[g] } else { inv(assign[g]) })) == 0
        });
        count += usize::from(ok);
        let mut k = 0;
        loop {
            if k == gens {
                return count;
            }
            assign[k] += 1;
            if assign[k] < n {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
    }
}

/// The edge-path presentation of a simplicial complex: one generator per
/// edge off a spanning tree, one relator per triangle.
fn edge_path_presentation(tets: &[[usize; 4]]) -> (usize, Vec<Vec<(usize, bool)>>) {
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut tris = std::collections::BTreeSet::new();
    for t in tets {
        let mut v = *t;
        v.sort();
        for i in 0..4 {
            for j in i + 1..4 {
                let k = edges.len();
                edges.entry((v[i], v[j])).or_insert(k);
            }
        }
        for skip in 0..4 {
            let f: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| v[i]).collect();
            tris.insert((f[0], f[1], f[2]));
        }
    }
    // spanning tree by search from the smallest vertex
    let mut seen = std::collections::BTreeSet::from([edges.keys().next().unwrap().0]);
    let mut tree = std::collections::BTreeSet::new();
    let mut grew = true;
    while grew {
        grew = false;
        for &(a, b) in edges.keys() {
            if seen.contains(&a) != seen.contains(&b) {
                seen.insert(a);
                seen.insert(b);
                tree.insert((a, b));
                grew = true;
            }
        }
    }
    let gens: BTreeMap<(usize, usize), usize> =
        edges.keys().filter(|e| !tree.contains(*e)).enumerate().map(|(i, e)| (*e, i)).collect();
    let letter = |a: usize, b: usize, plus: bool| gens.get(&(a, b)).map(|&g| (g, plus));
    let relators = tris
        .iter()
        .map(|&(a, b, c)| [letter(a, b, true), letter(b, c, true), letter(a, c, false)].into_iter().flatten().collect())
        .collect();
    (gens.len(), relators)
}

/// Flat-connection count of a Dijkgraaf–Witten theory with trivial
/// cocycle: `|Hom(π₁, Z_n)| / n`.
fn flat_connection_invariant(n: usize, gens: usize, relators: &[Vec<(usize, bool)>]) -> f64 {
    let homs = count_homomorphisms(n, &|a, b| (a + b) % n, &|a| (n - a) % n, gens, relators);
    homs as f64 / n as f64
}

/// The Turaev–Viro sum for the Fibonacci category over a triangulation,
/// with its own F-symbols in the unitary gauge.
fn fibonacci_turaev_viro(tets: &[[usize; 4]]) -> f64 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let d = [1.0, phi];
    // a triple is admissible unless it holds exactly one τ
    let adm = |a: usize, b: usize, c: usize| a + b + c != 1;
    let f_symbol = |a: usize, b: usize, c: usize, dd: usize, e: usize, f: usize| -> f64 {
        if !(adm(a, b, e) && adm(e, c, dd) && adm(b, c, f) && adm(a, f, dd)) {
            return 0.0;
        }
        if (a, b, c, dd) == (1, 1, 1, 1) {
            match (e, f) {
                (0, 0) => 1.0 / phi,
                (1, 1) => -1.0 / phi,
                _ => 1.0 / phi.sqrt(),
            }
        } else {
            1.0
        }
    };
    let mut vertices = std::collections::BTreeSet::new();
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in tets {
        for i in 0..4 {
            vertices.insert(t[i]);
            for j in i + 1..4 {
                let k = edges.len();
                edges.entry((t[i].min(t[j]), t[i].max(t[j]))).or_insert(k);
            }
        }
    }
    let ne = edges.len();
    let global = 1.0 + phi * phi;
    let mut total = 0.0;
    for mask in 0..(1u32 << ne) {
        let col = |a: usize, b: usize| ((mask >> edges[&(a.min(b), a.max(b))]) & 1) as usize;
        let mut w: f64 = (0..ne).map(|k| d[((mask >> k) & 1) as usize]).product();
        for t in tets {
            let [v0, v1, v2, v3] = *t;
            let (a, b, e, c, dd, f) = (col(v0, v1), col(v1, v2), col(v0, v2), col(v2, v3), col(v0, v3), col(v1, v3));
            w *= f_symbol(a, b, c, dd, e, f) / (d[e] * d[f]).sqrt();
            if w == 0.0 {
                break;
            }
        }
        total += w;
    }
    total / global.powi(vertices.len() as i32)
}

/// `dim Hom(1, x_1 ⊗ ⋯ ⊗ x_m)` by iterated fusion, with `(x, −)` read as
/// the dual of `x`.
fn fusion_count(c: &FusionCategoryData, word: &[(usize, Sign)]) -> usize {
    let n = c.simples.len();
    let mut v = vec![0usize; n];
    v[c.unit] = 1;
    for &(x, s) in word {
        let y = if s == Sign::Plus { x } else { c.simples[x].dual };
        let mut next = vec![0usize; n];
        for a in 0..n {
            if v[a] > 0 {
                for z in 0..n {
                    next[z] += v[a] * c.fusion_mult[a][y][z] as usize;
                }
            }
        }
        v = next;
    }
    v[c.unit]
}

fn simples_for(c: &FusionCategoryData, label: &str) -> Vec<usize> {
    if c.group.order() == 1 {
        return (0..c.simples.len()).collect();
    }
    let g = c.group.index_of(label).unwrap();
    (0..c.simples.len()).filter(|&s| c.simples[s].grade == g).collect()
}

/// Wire components of a diagram and the 1-strata words in them, computed
/// slot by slot: `(component of every slot, words, labels)`.
struct Strands {
    slot: Vec<Vec<usize>>,
    words: Vec<Vec<(usize, Sign)>>,
    labels: Vec<String>,
}

fn strands(x: &TwoMorphismDiagram, offset: usize) -> Strands {
    let mut slices = vec![x.source.entries.clone()];
    for l in &x.layers {
        let here = slices.last().unwrap();
        let a = l.kind.input().len();
        let p = l.left.len();
        let mut next = here[..p].to_vec();
        next.extend(l.kind.output());
        next.extend_from_slice(&here[p + a..]);
        slices.push(next);
    }
    let mut id = 0;
    let mut slot: Vec<Vec<usize>> = slices.iter().map(|s| s.iter().map(|_| { id += 1; id - 1 }).collect()).collect();
    let mut parent: Vec<usize> = (0..id).collect();
    fn find(p: &mut Vec<usize>, a: usize) -> usize {
        if p[a] == a { a } else { let r = find(p, p[a]); p[a] = r; r }
    }
    let mut words_raw = Vec::new();
    for (k, l) in x.layers.iter().enumerate() {
        let p = l.left.len();
        let (a, b) = (l.kind.input().len(), l.kind.output().len());
        let (lo, hi) = (&slot[k], &slot[k + 1]);
        let mut pairs: Vec<(usize, usize)> = (0..p).map(|i| (lo[i], hi[i])).collect();
        pairs.extend((p + a..lo.len()).map(|i| (lo[i], hi[i + b - a])));
        match &l.kind {
            EventKind::Cap { .. } => pairs.push((hi[p], hi[p + 1])),
            EventKind::Cup { .. } => pairs.push((lo[p], lo[p + 1])),
            EventKind::Vertex { input, output, .. } => {
                let mut w: Vec<(usize, Sign)> = output.iter().enumerate().map(|(j, e)| (hi[p + j], e.sign)).collect();
                w.extend(input.iter().enumerate().rev().map(|(j, e)| (lo[p + j], e.sign.flip())));
                words_raw.push(w);
            }
        }
        for (u, v) in pairs {
            let (u, v) = (find(&mut parent, u), find(&mut parent, v));
            parent[u] = v;
        }
    }
    let labels_flat: Vec<String> = slices.iter().flat_map(|s| s.iter().map(|e| e.label.clone())).collect();
    for row in slot.iter_mut() {
        for s in row.iter_mut() {
            *s = find(&mut parent, *s) + offset;
        }
    }
    let words = words_raw.into_iter().map(|w| w.into_iter().map(|(s, g)| (find(&mut parent, s) + offset, g)).collect()).collect();
    let mut labels = vec![String::new(); id];
    for (s, l) in labels_flat.into_iter().enumerate() {
        labels[find(&mut parent, s)] = l;
    }
    Strands { slot, words, labels }
}

/// `dim Hom(X, Y)`: the sum over colourings of the joint wires of `X` and
/// `Y` of the products of the 1-strata hom dimensions.
fn three_morphism_dim(c: &FusionCategoryData, x: &TwoMorphismDiagram, y: &TwoMorphismDiagram) -> usize {
    let sx = strands(x, 0);
    let nx = sx.labels.len();
    let sy = strands(y, nx);
    let n = nx + sy.labels.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, a: usize) -> usize {
        if p[a] == a { a } else { let r = find(p, p[a]); p[a] = r; r }
    }
    let (lx, ly) = (sx.slot.len() - 1, sy.slot.len() - 1);
    for (a, b) in sx.slot[0].iter().zip(&sy.slot[0]).chain(sx.slot[lx].iter().zip(&sy.slot[ly])) {
        let (a, b) = (find(&mut parent, *a), find(&mut parent, *b));
        parent[a] = b;
    }
    let mut labels = sx.labels.clone();
    labels.extend(sy.labels.iter().cloned());
    let words: Vec<Vec<(usize, Sign)>> =
        sx.words.iter().chain(&sy.words).map(|w| w.iter().map(|&(s, g)| (find(&mut parent, s), g)).collect()).collect();
    // components actually present
    let mut roots: Vec<usize> = (0..n).filter(|&s| !labels[s].is_empty()).map(|s| find(&mut parent, s)).collect();
    roots.sort();
    roots.dedup();
    let options: Vec<Vec<usize>> = roots.iter().map(|&r| simples_for(c, &labels[r])).collect();
    let mut total = 0;
    let mut pick = vec![0usize; roots.len()];
    if options.iter().any(Vec::is_empty) {
        return 0;
    }
    loop {
        let colour: BTreeMap<usize, usize> = roots.iter().zip(&pick).map(|(&r, &i)| (r, options.iter().zip(&roots).find(|(_, &q)| q == r).unwrap().0[i])).collect();
        total += words.iter().map(|w| fusion_count(c, &w.iter().map(|&(s, g)| (colour[&s], g)).collect::<Vec<_>>())).product::<usize>();
        let mut k = 0;
        loop {
            if k == pick.len() {
                return total;
            }
            pick[k] += 1;
            if pick[k] < options[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// `V − E + F` and the number of components of a combinatorial map,
/// counted from its darts.
fn euler_and_components(s: &DecoratedSurface) -> (i64, usize) {
    let nd = 2 * s.edges.len();
    let mut vertex_of = vec![usize::MAX; nd];
    let mut next_around = vec![usize::MAX; nd];
    for (v, vx) in s.vertices.iter().enumerate() {
        for (i, &d) in vx.darts.iter().enumerate() {
            vertex_of[d] = v;
            next_around[d] = vx.darts[(i + 1) % vx.darts.len()];
        }
    }
    let mut seen = vec![false; nd];
    let mut faces = s.vertices.iter().filter(|v| v.darts.is_empty()).count();
    for start in 0..nd {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = next_around[d ^ 1];
        }
    }
    let mut parent: Vec<usize> = (0..s.vertices.len()).collect();
    fn find(p: &mut Vec<usize>, a: usize) -> usize {
        if p[a] == a { a } else { let r = find(p, p[a]); p[a] = r; r }
    }
    for e in 0..s.edges.len() {
        let (a, b) = (find(&mut parent, vertex_of[2 * e]), find(&mut parent, vertex_of[2 * e + 1]));
        parent[a] = b;
    }
    let comps = (0..s.vertices.len()).filter(|&v| find(&mut parent, v) == v).count();
    (s.vertices.len() as i64 - s.edges.len() as i64 + faces as i64, comps)
}

fn cyclic_label_value(label: &str) -> usize {
    match label {
        "1" => 0,
        "g" => 1,
        other => other.trim_start_matches('g').parse().unwrap(),
    }
}

// ---------------------------------------------------------------- criteria

fn coherence() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in ["vec_z2", "vec_z3", "vec_z2_graded", "fibonacci"] {
        let t = Instant::now();
        let rep = validate_category(&cat(name), 1e-9);
        let elapsed = t.elapsed();
        let pentagon = rep.max_residual("pentagon").ok_or(format!("{name}: no pentagon residual"))?;
        ensure(rep.is_clean(), || format!("{name}: {:?}", rep.violations.first()))?;
        ensure(pentagon <= 1e-9, || format!("{name}: pentagon residual {pentagon:e}"))?;
        ensure(elapsed < Duration::from_secs(1), || format!("{name}: {elapsed:?}"))?;
        worst = worst.max(pentagon);
    }
    let rep = validate_category(&cat("fibonacci_perturbed"), 1e-9);
    ensure(!rep.is_clean(), || "perturbed Fibonacci passes".into())?;
    Ok(format!("max pentagon residual {worst:.1e}; perturbed file rejected"))
}

fn turaev_viro_golden() -> Outcome {
    let (gens, rels) = edge_path_presentation(&boundary_of_4_simplex());
    let s2xs1: (usize, Vec<Vec<(usize, bool)>>) = (1, vec![]);
    let mut lines = Vec::new();
    for (cname, n, manifold, pres) in [
        ("vec_z2", 2, "s3_boundary_delta4", (gens, rels.clone())),
        ("vec_z3", 3, "s3_boundary_delta4", (gens, rels.clone())),
        ("vec_z2", 2, "s2xs1", s2xs1),
    ] {
        let oracle = flat_connection_invariant(n, pres.0, &pres.1);
        let t = Instant::now();
        let z = closed_invariant(&cat(cname), &bundled_manifold(manifold).unwrap()).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        ensure((z.re - oracle).abs() <= 1e-6 && z.im.abs() <= 1e-6, || format!("{cname} on {manifold}: {z} against {oracle}"))?;
        ensure(elapsed < Duration::from_secs(60), || format!("{cname} on {manifold}: {elapsed:?}"))?;
        lines.push(format!("{manifold}/{cname} = {:.6}", z.re));
    }
    Ok(lines.join(", "))
}

fn fibonacci_sphere() -> Outcome {
    let oracle = fibonacci_turaev_viro(&boundary_of_4_simplex());
    let z = closed_invariant(&cat("fibonacci"), &bundled_manifold("s3_boundary_delta4").unwrap()).map_err(|e| e.to_string())?;
    ensure((z.re - oracle).abs() <= 1e-6 && z.im.abs() <= 1e-6, || format!("{z} against brute force {oracle}"))?;
    Ok(format!("{:.7} against brute force {:.7}", z.re, oracle))
}

fn refinement_invariance() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let dd = group_dd(&GroupTable::cyclic(2));
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for cname in ["vec_z2_graded", "fibonacci"] {
        let c = cat(cname);
        for name in bundled_manifold_names() {
            let b = bundled_manifold(name).unwrap();
            let base = closed_invariant(&c, &b).map_err(|e| e.to_string())?;
            for mv in RefineMove::ALL {
                let sites = valid_sites(&b, mv);
                ensure(!sites.is_empty(), || format!("{name}: no site for {mv:?}"))?;
                for _ in 0..20 {
                    let site = *sites.choose(&mut rng).unwrap();
                    let r = refine(&b, mv, site, "1").map_err(|e| e.to_string())?;
                    let rep = validate_bordism(&dd, &r);
                    ensure(rep.is_clean(), || format!("{name} {mv:?} at {site}: {:?}", rep.violations.first()))?;
                    let z = closed_invariant(&c, &r).map_err(|e| e.to_string())?;
                    let diff = (z - base).norm();
                    ensure(diff <= 1e-6, || format!("{cname} on {name}, {mv:?} at {site}: {z} against {base}"))?;
                    worst = worst.max(diff);
                    trials += 1;
                }
            }
        }
    }
    Ok(format!("{trials} refinements, max change {worst:.1e}"))
}

fn surfaces() -> Vec<(&'static str, DecoratedSurface)> {
    vec![
        ("empty", DecoratedSurface::empty()),
        ("sphere", DecoratedSurface::sphere()),
        ("circle 1", DecoratedSurface::sphere_with_circle("1")),
        ("circle g", DecoratedSurface::sphere_with_circle("g")),
        ("dipole gg", DecoratedSurface::dipole(&["g", "g"])),
        ("dipole g1g", DecoratedSurface::dipole(&["g", "1", "g"])),
        ("theta gg1", DecoratedSurface::theta(["g", "g", "1"])),
        ("torus 1 1", DecoratedSurface::torus("1", "1")),
        ("torus g 1", DecoratedSurface::torus("g", "1")),
    ]
}

fn projector_law() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut spheres = 0;
    for cname in ["vec_z2_graded", "fibonacci"] {
        let c = cat(cname);
        for (name, s) in surfaces() {
            let p = statesum_map(&c, &cylinder(&s)).map_err(|e| format!("{name}: {e}"))?.matrix;
            let diff = (&p * &p - &p).norm();
            ensure(diff <= 1e-6, || format!("{cname} on {name}: ‖P²−P‖ = {diff:e}"))?;
            worst = worst.max(diff);
            if !name.starts_with("torus") && name != "empty" {
                let rank = state_space(&c, &s).map_err(|e| e.to_string())?.rank;
                ensure(rank == Some(1), || format!("{cname} on the sphere {name}: rank {rank:?}"))?;
                spheres += 1;
            }
        }
    }
    Ok(format!("max ‖P²−P‖ {worst:.1e}; {spheres} decorated spheres of rank 1"))
}

fn triv_functoriality() -> Outcome {
    let mut checks = 0;
    for cname in ["fibonacci", "vec_z2_graded", "vec_z2xz2"] {
        let c = cat(cname);
        for (name, s) in surfaces() {
            // balls bounded by dipoles
            if !(name.starts_with("dipole") || name.starts_with("theta")) {
                continue;
            }
            let s = s.cellular();
            let cup = dipole_ball(&s, BoundaryRole::Out).map_err(|e| e.to_string())?;
            let cap = dipole_ball(&s, BoundaryRole::In).map_err(|e| e.to_string())?;
            let (a, b) = (triv_invariant(&c, &cup).map_err(|e| e.to_string())?, triv_invariant(&c, &cap).map_err(|e| e.to_string())?);
            let glued = compose(&cup, &cap).map_err(|e| e.to_string())?;
            let z = triv_invariant(&c, &glued).map_err(|e| e.to_string())?;
            ensure(z.matrix == &b.matrix * &a.matrix, || format!("{cname} on {name}: gluing is not the product"))?;
            // the glued sphere has one closed 1-stratum, through both poles
            let mut oracle = 0;
            let options: Vec<Vec<usize>> = s.edges.iter().map(|l| simples_for(&c, l)).collect();
            let mut pick = vec![0usize; options.len()];
            'all: loop {
                let colour: Vec<usize> = options.iter().zip(&pick).map(|(o, &i)| o[i]).collect();
                oracle += fusion_count(&c, &s.vertex_word(0).iter().map(|&(e, g)| (colour[e], g)).collect::<Vec<_>>());
                let mut k = 0;
                loop {
                    if k == pick.len() {
                        break 'all;
                    }
                    pick[k] += 1;
                    if pick[k] < options[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
            }
            ensure(z.matrix[(0, 0)] == oracle as i64, || format!("{cname} on {name}: {} against {oracle}", z.matrix[(0, 0)]))?;
            let cyl = triv_invariant(&c, &product_cylinder(&s)).map_err(|e| e.to_string())?;
            let n = cyl.source.total_dim;
            ensure(cyl.matrix == DMatrix::identity(n, n), || format!("{cname} on {name}: cylinder is not the identity"))?;
            let through = compose(&compose(&cup, &product_cylinder(&s)).map_err(|e| e.to_string())?, &cap).map_err(|e| e.to_string())?;
            let zt = triv_invariant(&c, &through).map_err(|e| e.to_string())?;
            ensure(zt.matrix == z.matrix, || format!("{cname} on {name}: inserting a cylinder changes the value"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} gluings exact, with loop factors and identity cylinders"))
}

fn gray_axioms() -> Outcome {
    let t = Instant::now();
    let mut total = 0;
    for (cname, engine, group, tol) in [
        ("vec_z2", Engine::Triv, GroupTable::cyclic(2), 0.0),
        ("fibonacci", Engine::Triv, GroupTable::cyclic(2), 0.0),
        ("vec_z2_graded", Engine::Statesum, GroupTable::cyclic(2), 1e-9),
        ("vec_z3_graded", Engine::Statesum, GroupTable::cyclic(3), 1e-9),
    ] {
        let c = cat(cname);
        let m = GrayModel::new(engine, &c);
        let cfg = AxiomConfig { sample: 30, tol, ..AxiomConfig::default() };
        let rep = check_gray_axioms(&m, &group_dd(&group), &cfg);
        ensure(rep.is_clean(), || format!("{cname}: {} violations, first {:?}", rep.violations.len(), rep.violations.first()))?;
        for required in [
            "unit tensorator",
            "tensorator of a ⊗ in the right argument",
            "tensorator of a ⊗ in the left argument",
            "tensorator with a whisker between",
            "tensorator whiskered on the left",
            "tensorator whiskered on the right",
            "tensorator naturality",
            "tensorator invertibility",
            "Zorro move for coev and ev",
            "Zorro move for ev and coev",
            "triangulator invertibility",
            "triangulator of a composite word",
            "twist of fold",
        ] {
            ensure(rep.checked.get(required).is_some_and(|&k| k > 0), || format!("{cname}: {required} never checked"))?;
        }
        total += rep.checked.values().sum::<usize>();
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{total} instances clean in {:.1}s", elapsed.as_secs_f64()))
}

fn model_equivalence() -> Outcome {
    let dd = group_dd(&GroupTable::cyclic(2));
    let cfg = AxiomConfig::default();
    let diagrams = small_diagrams(&dd, &cfg);
    let mut rng = StdRng::seed_from_u64(5);
    let mut pairs = 0;
    for cname in ["vec_z2", "fibonacci", "vec_z2xz2"] {
        let c = cat(cname);
        let m = GrayModel::new(Engine::Triv, &c);
        let mut k = 0;
        while k < 120 {
            let x = diagrams.choose(&mut rng).unwrap();
            let parallel: Vec<&TwoMorphismDiagram> = diagrams.iter().filter(|y| y.is_parallel(x)).collect();
            let y = *parallel.choose(&mut rng).unwrap();
            let dim = m.hom_space(x, y).map_err(|e| e.to_string())?.dim;
            let oracle = three_morphism_dim(&c, x, y);
            ensure(dim == oracle, || format!("{cname}: hom dimension {dim} against brute force {oracle} for {x:?} and {y:?}"))?;
            k += 1;
        }
        pairs += k;
        let rep = check_model_equivalence(&m, &dd, &AxiomConfig { sample: 30, ..cfg.clone() });
        ensure(rep.is_clean(), || format!("{cname}: {:?}", rep.violations.first()))?;
    }
    let mut words = 0;
    for (cname, n) in [("vec_z2_graded", 2), ("vec_z3_graded", 3)] {
        let c = cat(cname);
        let dd = group_dd(&GroupTable::cyclic(n));
        let m = GrayModel::new(Engine::Statesum, &c);
        for a in small_words(&dd, 4).iter().filter(|a| !a.is_empty()) {
            let expected = a.entries.iter().fold(0, |acc, x| {
                let v = cyclic_label_value(&x.label);
                (acc + if x.sign == Sign::Plus { v } else { n - v }) % n
            });
            let grade = one_morphism_grade(&m, a).map_err(|e| e.to_string())?;
            let got = cyclic_label_value(&c.group.elements[grade]);
            ensure(got == expected, || format!("{cname}: word {:?} has invariant {got}, product {expected}", a.entries))?;
            words += 1;
        }
    }
    Ok(format!("{pairs} hom dimensions match brute force; {words} words carry their group product"))
}

fn combinatorial_validators() -> Outcome {
    let z2 = GroupTable::cyclic(2);
    let groups: Vec<(String, GroupTable)> = (1..=6)
        .map(|n| (format!("Z{n}"), GroupTable::cyclic(n)))
        .chain([("Z2xZ2".to_string(), GroupTable::direct_product(&z2, &z2)), ("S3".to_string(), GroupTable::symmetric3())])
        .collect();
    for (name, g) in &groups {
        let mut dd = group_dd(g);
        dd.max_word_len = 4;
        let rep = validate_defect_data(&dd);
        ensure(rep.is_clean(), || format!("{name}: {:?}", rep.violations.first()))?;
        let k = build_computad(&dd, 4).map_err(|e| format!("{name}: {e}"))?;
        let rep = validate_computad(&k);
        ensure(rep.is_clean(), || format!("{name}: computad {:?}", rep.violations.first()))?;
    }
    let dd = group_dd(&z2);
    let diagrams = small_diagrams(&dd, &AxiomConfig::default());
    let mut spheres = 0;
    for x in &diagrams {
        for y in diagrams.iter().filter(|y| y.is_parallel(x)) {
            let s = glue_sphere(x, y).map_err(|e| e.to_string())?;
            let (chi, comps) = euler_and_components(&s);
            ensure(s.vertices.is_empty() || chi == 2 * comps as i64, || format!("χ = {chi} over {comps} components"))?;
            spheres += 1;
        }
    }
    Ok(format!("{} groups valid; {spheres} glued spheres pass the Euler check", groups.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("coherence of bundled categories", coherence),
        ("Turaev–Viro golden values", turaev_viro_golden),
        ("Fibonacci on the 3-sphere", fibonacci_sphere),
        ("refinement invariance", refinement_invariance),
        ("projector law and sphere ranks", projector_law),
        ("functoriality of the trivial theory", triv_functoriality),
        ("Gray category axioms", gray_axioms),
        ("model equivalence oracles", model_equivalence),
        ("combinatorial validators", combinatorial_validators),
    ];
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                scope.spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (r, t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (k, ((name, _), (r, t))) in criteria.iter().zip(results).enumerate() {
        match r {
            Ok(msg) => println!("criterion {}: PASS  {name} ({:.1}s): {msg}", k + 1, t.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({:.1}s): {msg}", k + 1, t.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
