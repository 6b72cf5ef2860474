//! Embedded resolution of curve germs and of the pencil {f - t g} by
//! iterated point blowups, producing the weighted dual graph consumed by the
//! tameness criteria and the fiber computations.
//!
//! Vertices carry the Euler number and the multiplicity pair (m_f, m_g) of
//! the total transforms; arrows mark strict transforms of f, of g, and of a
//! generic pencil member (the latter attached at dicritical vertices with
//! multiplicity the local degree of the induced map to the projective line).

mod engine;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::bipoly::BiPoly;
use crate::exact::gcd::{common_branch_through_origin, squarefree_part};
use crate::exact::rat::Rat;
use crate::exact::{factor_q, Int};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowLabel {
    StrictF,
    StrictG,
    StrictGeneric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arrow {
    /// Attached vertex id; None only for the smooth-germ convention where no
    /// blowup was necessary.
    pub vertex: Option<usize>,
    pub label: ArrowLabel,
    pub mult: u64,
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub id: usize,
    pub euler: i64,
    pub mf: u64,
    pub mg: u64,
    pub dicritical: bool,
}

/// One blowup event: the new vertex, the multiplicities of the parents it was
/// centered on, and the strict-transform contributions through the center.
#[derive(Debug, Clone)]
pub struct BlowupRecord {
    pub new_vertex: usize,
    pub parents: Vec<(usize, u64, u64)>,
    pub strict_mf: u64,
    pub strict_mg: u64,
}

#[derive(Debug, Clone)]
pub struct PencilResolution {
    /// Sorted by id; ids are stable across the minimality contraction.
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
    pub arrows: Vec<Arrow>,
    pub log: Vec<BlowupRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Zero,
    Infinity,
}

#[derive(Debug, Clone)]
pub struct SubgraphSelection {
    pub side: Side,
    pub vertex_ids: BTreeSet<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Indices into the resolution's arrow list.
    pub arrows: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub rupture: Vec<usize>,
    pub dicritical: Vec<usize>,
}

impl PencilResolution {
    pub fn vertex(&self, id: usize) -> &Vertex {
        self.vertices
            .iter()
            .find(|v| v.id == id)
            .expect("vertex id")
    }

    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn arrows_at(&self, id: usize) -> Vec<&Arrow> {
        self.arrows
            .iter()
            .filter(|a| a.vertex == Some(id))
            .collect()
    }

    /// Multilink valence: graph edges plus strict-f and strict-g arrows;
    /// generic-member arrows are not link components.
    pub fn multilink_valence(&self, id: usize) -> usize {
        self.neighbors(id).len()
            + self
                .arrows_at(id)
                .iter()
                .filter(|a| a.label != ArrowLabel::StrictGeneric)
                .count()
    }

    /// Valence for fiber and A'Campo bookkeeping: edges plus all arrows.
    pub fn full_valence(&self, id: usize) -> usize {
        self.neighbors(id).len() + self.arrows_at(id).len()
    }

    /// Exact negative-definiteness of the intersection matrix via the signs
    /// of leading principal minors.
    pub fn intersection_matrix_negative_definite(&self) -> bool {
        let ids: Vec<usize> = self.vertices.iter().map(|v| v.id).collect();
        let n = ids.len();
        if n == 0 {
            return true;
        }
        let idx: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = vec![vec![Int::from(0); n]; n];
        for (k, v) in self.vertices.iter().enumerate() {
            m[k][k] = Int::from(v.euler);
        }
        for &(a, b) in &self.edges {
            let (i, j) = (idx[&a], idx[&b]);
            m[i][j] = Int::from(1);
            m[j][i] = Int::from(1);
        }
        // leading principal minors must alternate in sign starting negative
        for k in 1..=n {
            let det = int_det(&m, k);
            let expect_neg = k % 2 == 1;
            if det == Int::from(0) {
                return false;
            }
            if (det < Int::from(0)) != expect_neg {
                return false;
            }
        }
        true
    }
}

fn int_det(m: &[Vec<Int>], k: usize) -> Int {
    // fraction-free Bareiss on the leading k x k block
    let mut a: Vec<Vec<Int>> = (0..k).map(|i| m[i][..k].to_vec()).collect();
    let mut sign = 1i64;
    let mut prev = Int::from(1);
    for c in 0..k.saturating_sub(1) {
        if a[c][c] == Int::from(0) {
            match (c + 1..k).find(|&r| a[r][c] != Int::from(0)) {
                Some(r) => {
                    a.swap(c, r);
                    sign = -sign;
                }
                None => return Int::from(0),
            }
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let t = &a[i][j] * &a[c][c] - &a[i][c] * &a[c][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[c][c].clone();
    }
    let d = a[k - 1][k - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Minimal embedded resolution of the single curve germ {p = 0}; m_g = 0 and
/// arrows are all strict-p.
pub fn resolve_curve(p: &BiPoly<Rat>) -> Result<PencilResolution> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("resolution of zero".into()));
    }
    if !p.eval_origin().is_zero() {
        return Err(Error::NotAGerm);
    }
    let mut warnings = vec![];
    let red = squarefree_part(p);
    if &red != p && red.primitive_int().0 != p.primitive_int().0 {
        warnings.push("input was not square-free; resolved its reduced curve".into());
    }
    let (_, factors) = factor_q(&red)?;
    let fs: Vec<(BiPoly<Rat>, u32)> = factors
        .into_iter()
        .filter(|(h, _)| h.eval_origin().is_zero())
        .map(|(h, _)| (h, 1))
        .collect();
    let mut graph = engine::resolve(&fs, &[])?;
    graph.warnings.extend(warnings);
    finish_curve(graph)
}

fn finish_curve(mut g: engine::MutGraph) -> Result<PencilResolution> {
    mark_dicriticals(&mut g, false)?;
    contract_minimal(&mut g);
    Ok(g.finish())
}

/// Resolution of the pencil {f - t g}: good resolution of f*g, then corner
/// and arrow blowups until the lifted map f/g has no indeterminacy on the
/// divisor, with dicritical vertices flagged and generic-member arrows
/// attached.
pub fn resolve_pencil(f: &BiPoly<Rat>, g: &BiPoly<Rat>) -> Result<PencilResolution> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateInput("zero polynomial in pencil".into()));
    }
    if !f.eval_origin().is_zero() || !g.eval_origin().is_zero() {
        return Err(Error::NotAGerm);
    }
    if common_branch_through_origin(f, g) {
        return Err(Error::CommonBranch);
    }
    let (_, ff) = factor_q(f)?;
    let (_, gg) = factor_q(g)?;
    let fs: Vec<(BiPoly<Rat>, u32)> = ff
        .into_iter()
        .filter(|(h, _)| h.eval_origin().is_zero())
        .collect();
    let gs: Vec<(BiPoly<Rat>, u32)> = gg
        .into_iter()
        .filter(|(h, _)| h.eval_origin().is_zero())
        .collect();
    let mut graph = engine::resolve(&fs, &gs)?;
    fix_indeterminacies(&mut graph)?;
    mark_dicriticals(&mut graph, true)?;
    contract_minimal(&mut graph);
    Ok(graph.finish())
}

/// Blow up corners and arrow points while the lifted f/g is indeterminate
/// there (opposite vanishing orders).
fn fix_indeterminacies(g: &mut engine::MutGraph) -> Result<()> {
    for _ in 0..4096 {
        let mut acted = false;
        // corners with opposite signs of m_f - m_g
        let edges: Vec<(usize, usize)> = g.edges.iter().cloned().collect();
        for (a, b) in edges {
            let da = g.diff(a);
            let db = g.diff(b);
            if da * db < 0 {
                g.blow_corner(a, b);
                acted = true;
                break;
            }
        }
        if acted {
            continue;
        }
        // f-arrows on the g-dominated side and vice versa
        for i in 0..g.arrows.len() {
            let (v, label, _mult) = {
                let a = &g.arrows[i];
                (a.vertex, a.label, a.mult)
            };
            let v = match v {
                Some(v) => v,
                None => continue,
            };
            let d = g.diff(v);
            let bad = match label {
                ArrowLabel::StrictF => d < 0,
                ArrowLabel::StrictG => d > 0,
                ArrowLabel::StrictGeneric => false,
            };
            if bad {
                g.blow_arrow_point(i);
                acted = true;
                break;
            }
        }
        if !acted {
            return Ok(());
        }
    }
    Err(Error::InternalLimit("indeterminacy pass did not stabilize".into()))
}

/// Dicritical detection by adjunction: for generic t the member's strict
/// transform meets E_v in A_v = -min_v e_v - sum of neighboring min_w points;
/// positivity characterizes the dicritical vertices.
fn mark_dicriticals(g: &mut engine::MutGraph, pencil: bool) -> Result<()> {
    let ids: Vec<usize> = g.verts.keys().cloned().collect();
    for id in ids {
        if !pencil {
            g.verts.get_mut(&id).unwrap().dicritical = false;
            continue;
        }
        let minv = {
            let v = &g.verts[&id];
            v.mf.min(v.mg) as i64
        };
        let nsum: i64 = g
            .neighbors(id)
            .iter()
            .map(|w| {
                let v = &g.verts[w];
                v.mf.min(v.mg) as i64
            })
            .sum();
        let a = -minv * g.verts[&id].euler - nsum;
        if a < 0 {
            return Err(Error::InternalLimit(format!(
                "negative generic intersection count at vertex {id}"
            )));
        }
        if a > 0 {
            let v = g.verts.get_mut(&id).unwrap();
            v.dicritical = true;
            if v.mf != v.mg {
                return Err(Error::InternalLimit(format!(
                    "dicritical vertex {id} with unequal multiplicities"
                )));
            }
            g.arrows.push(engine::MutArrow {
                vertex: Some(id),
                label: ArrowLabel::StrictGeneric,
                mult: a as u64,
            });
        }
    }
    Ok(())
}

/// Contract (-1)-vertices of total valence <= 2 when the result is still a
/// good resolution with consistent pencil data; deterministic order by id.
fn contract_minimal(g: &mut engine::MutGraph) {
    loop {
        let mut target: Option<usize> = None;
        let ids: Vec<usize> = g.verts.keys().cloned().collect();
        'scan: for id in ids {
            let v = &g.verts[&id];
            if v.euler != -1 || v.dicritical {
                continue;
            }
            let nbrs = g.neighbors(id);
            let arrows: Vec<usize> = g
                .arrows
                .iter()
                .enumerate()
                .filter(|(_, a)| a.vertex == Some(id))
                .map(|(i, _)| i)
                .collect();
            let total = nbrs.len() + arrows.len();
            if total > 2 {
                continue;
            }
            match (nbrs.len(), arrows.len()) {
                (2, 0) => {
                    let (u, w) = (nbrs[0], nbrs[1]);
                    if u == w || g.has_edge(u, w) {
                        continue;
                    }
                    // keep the pencil corner condition
                    if g.diff(u) * g.diff(w) < 0 {
                        continue;
                    }
                    target = Some(id);
                    break 'scan;
                }
                (1, 1) => {
                    let u = nbrs[0];
                    let lab = g.arrows[arrows[0]].label;
                    let ok = match lab {
                        ArrowLabel::StrictF => g.diff(u) >= 0,
                        ArrowLabel::StrictG => g.diff(u) <= 0,
                        ArrowLabel::StrictGeneric => false,
                    };
                    if !ok {
                        continue;
                    }
                    target = Some(id);
                    break 'scan;
                }
                (1, 0) | (0, 1) | (0, 0) => {
                    target = Some(id);
                    break 'scan;
                }
                _ => continue,
            }
        }
        match target {
            Some(id) => g.contract(id),
            None => return,
        }
    }
}

/// Rupture and dicritical vertex sets.
pub fn classify(gr: &PencilResolution) -> Classification {
    let mut rupture = vec![];
    let mut dicritical = vec![];
    for v in &gr.vertices {
        if gr.multilink_valence(v.id) >= 3 {
            rupture.push(v.id);
        }
        if v.dicritical {
            dicritical.push(v.id);
        }
    }
    Classification { rupture, dicritical }
}

/// Side subgraph: vertices with the side's sign of m_f - m_g, dicritical
/// vertices adjacent to that set, and the side's strict arrows.
pub fn subgraph(gr: &PencilResolution, side: Side) -> Result<SubgraphSelection> {
    let keep_sign = |d: i64| match side {
        Side::Zero => d > 0,
        Side::Infinity => d < 0,
    };
    let mut ids: BTreeSet<usize> = gr
        .vertices
        .iter()
        .filter(|v| keep_sign(v.mf as i64 - v.mg as i64))
        .map(|v| v.id)
        .collect();
    let label = match side {
        Side::Zero => ArrowLabel::StrictF,
        Side::Infinity => ArrowLabel::StrictG,
    };
    let core = ids.clone();
    for v in &gr.vertices {
        // a dicritical vertex belongs to the side when it touches the side's
        // chain, or when the side's strict transform attaches directly to it
        // (the Hopf-pencil shape)
        if v.dicritical
            && (gr.neighbors(v.id).iter().any(|n| core.contains(n))
                || gr.arrows_at(v.id).iter().any(|a| a.label == label))
        {
            ids.insert(v.id);
        }
    }
    let arrows: Vec<usize> = gr
        .arrows
        .iter()
        .enumerate()
        .filter(|(_, a)| {
            a.label == label && a.vertex.map(|v| ids.contains(&v)).unwrap_or(false)
        })
        .map(|(i, _)| i)
        .collect();
    if ids.is_empty() {
        return Err(Error::DegenerateSide(format!(
            "no vertices on the {side:?} side"
        )));
    }
    let edges: Vec<(usize, usize)> = gr
        .edges
        .iter()
        .filter(|(a, b)| ids.contains(a) && ids.contains(b))
        .cloned()
        .collect();
    Ok(SubgraphSelection {
        side,
        vertex_ids: ids,
        edges,
        arrows,
    })
}

impl SubgraphSelection {
    pub fn is_connected(&self) -> bool {
        if self.vertex_ids.is_empty() {
            return false;
        }
        let mut seen = BTreeSet::new();
        let start = *self.vertex_ids.iter().next().unwrap();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            for &(a, b) in &self.edges {
                if a == v && !seen.contains(&b) {
                    stack.push(b);
                }
                if b == v && !seen.contains(&a) {
                    stack.push(a);
                }
            }
        }
        seen.len() == self.vertex_ids.len()
    }
}

/// DOT rendering with deterministic numbering: vertices as `E<i>` in id
/// order, arrows as labeled leaf nodes with a distinct shape.
pub fn to_dot(gr: &PencilResolution) -> String {
    let mut out = String::from("graph resolution {\n  node [shape=circle];\n");
    let renum: BTreeMap<usize, usize> = gr
        .vertices
        .iter()
        .enumerate()
        .map(|(k, v)| (v.id, k + 1))
        .collect();
    for v in &gr.vertices {
        let d = v.mf as i64 - v.mg as i64;
        out.push_str(&format!(
            "  v{} [label=\"E{} e={} ({}-{}={})\"{}];\n",
            renum[&v.id],
            renum[&v.id],
            v.euler,
            v.mf,
            v.mg,
            d,
            if v.dicritical { ", style=bold" } else { "" }
        ));
    }
    for &(a, b) in &gr.edges {
        out.push_str(&format!("  v{} -- v{};\n", renum[&a], renum[&b]));
    }
    for (i, a) in gr.arrows.iter().enumerate() {
        let lab = match a.label {
            ArrowLabel::StrictF => "f",
            ArrowLabel::StrictG => "g",
            ArrowLabel::StrictGeneric => "gen",
        };
        out.push_str(&format!(
            "  a{} [label=\"{} ({})\", shape=rarrow];\n",
            i, lab, a.mult
        ));
        match a.vertex {
            Some(v) => out.push_str(&format!("  v{} -- a{};\n", renum[&v], i)),
            None => out.push_str(&format!("  a{};\n", i)),
        }
    }
    out.push_str("}\n");
    out
}

/// Canonical string form of the labeled tree (AHU-style), used to compare
/// graphs up to isomorphism. Swap-mode exchanges the roles of m_f and m_g.
pub fn canonical_form(gr: &PencilResolution, swap_fg: bool) -> String {
    let arrows_of = |id: usize| {
        let mut xs: Vec<String> = gr
            .arrows_at(id)
            .iter()
            .map(|a| {
                let l = match (a.label, swap_fg) {
                    (ArrowLabel::StrictF, false) | (ArrowLabel::StrictG, true) => "F",
                    (ArrowLabel::StrictG, false) | (ArrowLabel::StrictF, true) => "G",
                    (ArrowLabel::StrictGeneric, _) => "T",
                };
                format!("{}{}", l, a.mult)
            })
            .collect();
        xs.sort();
        xs.join(",")
    };
    let label = |id: usize| {
        let v = gr.vertex(id);
        let (mf, mg) = if swap_fg { (v.mg, v.mf) } else { (v.mf, v.mg) };
        format!("[e{};{};{};{}]", v.euler, mf, mg, arrows_of(id))
    };
    fn enc(
        gr: &PencilResolution,
        id: usize,
        parent: Option<usize>,
        label: &dyn Fn(usize) -> String,
    ) -> String {
        let mut kids: Vec<String> = gr
            .neighbors(id)
            .into_iter()
            .filter(|&n| Some(n) != parent)
            .map(|n| enc(gr, n, Some(id), label))
            .collect();
        kids.sort();
        format!("({}{})", label(id), kids.join(""))
    }
    if gr.vertices.is_empty() {
        let mut xs: Vec<String> = gr
            .arrows
            .iter()
            .map(|a| format!("{:?}{}", a.label, a.mult))
            .collect();
        xs.sort();
        return format!("empty:{}", xs.join(","));
    }
    // canonical root: minimize the encoding over all roots (small graphs)
    gr.vertices
        .iter()
        .map(|v| enc(gr, v.id, None, &label))
        .min()
        .unwrap()
}

#[cfg(test)]
mod tests;
