//! Blowup engine: iterated point blowups with two standard charts.
//!
//! Centers are the singular or non-transverse points of the current total
//! transform, found by factoring local tangent data over the point's number
//! field. A Galois orbit of conjugate centers is processed once in its field
//! of definition and carries an orbit context; materialization replicates
//! the subtree it creates, one copy per conjugate, so the final dual graph
//! is the geometric one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::algnum::{extend, factor_over_field, AlgNum, NumberField, DEFAULT_TOWER_LIMIT};
use crate::exact::bipoly::{BiPoly, Var};
use crate::exact::rat::Rat;
use crate::exact::unipoly::UniPoly;

use super::{ArrowLabel, BlowupRecord, PencilResolution, Vertex};

const MAX_BLOWUPS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Axis {
    X,
    Y,
}

#[derive(Clone)]
struct LocalCurve {
    is_f: bool,
    exp: u32,
    poly: BiPoly<AlgNum>,
}

struct EPoint {
    field: Option<Arc<NumberField>>,
    ctx: usize,
    exc: Vec<(usize, Axis)>,
    curves: Vec<LocalCurve>,
}

struct Ctx {
    parent: usize,
    mult: u64,
}

struct EVert {
    ctx: usize,
    euler: i64,
    mf: u64,
    mg: u64,
}

struct EArrow {
    vertex: Option<usize>,
    label: ArrowLabel,
    mult: u64,
    ctx: usize,
}

struct ELog {
    new: usize,
    parents: Vec<usize>,
    strict_mf: u64,
    strict_mg: u64,
}

struct Engine {
    ctxs: Vec<Ctx>,
    verts: Vec<EVert>,
    edges: Vec<(usize, usize)>,
    arrows: Vec<EArrow>,
    log: Vec<ELog>,
    queue: VecDeque<EPoint>,
    blowups: usize,
}

impl Engine {
    fn ctx_abs(&self, mut c: usize) -> u64 {
        let mut m = 1u64;
        loop {
            m *= self.ctxs[c].mult;
            if c == 0 {
                return m;
            }
            c = self.ctxs[c].parent;
        }
    }

    fn is_ancestor_ctx(&self, a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            if b == 0 {
                return false;
            }
            b = self.ctxs[b].parent;
        }
    }
}

fn restrict_x0(p: &BiPoly<AlgNum>) -> UniPoly<AlgNum> {
    let dy = p.deg_var(Var::Y).map(|d| d as usize + 1).unwrap_or(0);
    let mut coeffs = vec![AlgNum::zero(); dy];
    for (&(i, j), c) in p.terms() {
        if i == 0 {
            coeffs[j as usize] = c.clone();
        }
    }
    UniPoly::new('z', coeffs)
}

fn needs_blowup(pt: &EPoint) -> bool {
    if pt.curves.is_empty() {
        return false;
    }
    if pt.exc.len() >= 2 {
        return true;
    }
    let total: u32 = pt
        .curves
        .iter()
        .map(|c| c.poly.order().unwrap_or(0))
        .sum();
    if total >= 2 {
        return true;
    }
    // single smooth branch: blow up exactly when tangent to the exceptional
    // axis through this point
    match pt.exc.first() {
        None => false,
        Some((_, axis)) => {
            let c = &pt.curves[0].poly;
            let a = c.coeff(1, 0);
            let b = c.coeff(0, 1);
            match axis {
                Axis::X => b.is_zero(),
                Axis::Y => a.is_zero(),
            }
        }
    }
}

/// Resolve the union of the tracked curves into a good configuration.
pub(super) fn resolve(
    fs: &[(BiPoly<Rat>, u32)],
    gs: &[(BiPoly<Rat>, u32)],
) -> Result<MutGraph> {
    let mut curves: Vec<LocalCurve> = vec![];
    for (h, e) in fs {
        curves.push(LocalCurve {
            is_f: true,
            exp: *e,
            poly: h.map_coeffs(|c| AlgNum::rational(c.clone())),
        });
    }
    for (h, e) in gs {
        curves.push(LocalCurve {
            is_f: false,
            exp: *e,
            poly: h.map_coeffs(|c| AlgNum::rational(c.clone())),
        });
    }
    let mut eng = Engine {
        ctxs: vec![Ctx { parent: 0, mult: 1 }],
        verts: vec![],
        edges: vec![],
        arrows: vec![],
        log: vec![],
        queue: VecDeque::new(),
        blowups: 0,
    };
    eng.queue.push_back(EPoint {
        field: None,
        ctx: 0,
        exc: vec![],
        curves,
    });
    while let Some(pt) = eng.queue.pop_front() {
        if needs_blowup(&pt) {
            blow_up(&mut eng, pt)?;
        } else {
            // good point: every remaining curve ends here as an arrow
            let vtx = pt.exc.first().map(|&(v, _)| v);
            for c in &pt.curves {
                eng.arrows.push(EArrow {
                    vertex: vtx,
                    label: if c.is_f {
                        ArrowLabel::StrictF
                    } else {
                        ArrowLabel::StrictG
                    },
                    mult: c.exp as u64,
                    ctx: pt.ctx,
                });
            }
        }
    }
    materialize(eng)
}

fn blow_up(eng: &mut Engine, pt: EPoint) -> Result<()> {
    eng.blowups += 1;
    if eng.blowups > MAX_BLOWUPS {
        return Err(Error::InternalLimit("blowup budget exhausted".into()));
    }
    let new_id = eng.verts.len();
    let mut mf: u64 = 0;
    let mut mg: u64 = 0;
    let mut parents = vec![];
    for &(v, _) in &pt.exc {
        mf += eng.verts[v].mf;
        mg += eng.verts[v].mg;
        parents.push(v);
    }
    let mut strict_mf = 0u64;
    let mut strict_mg = 0u64;
    for c in &pt.curves {
        let m = c.poly.order().unwrap_or(0) as u64 * c.exp as u64;
        if c.is_f {
            strict_mf += m;
        } else {
            strict_mg += m;
        }
    }
    mf += strict_mf;
    mg += strict_mg;
    eng.verts.push(EVert {
        ctx: pt.ctx,
        euler: -1,
        mf,
        mg,
    });
    eng.log.push(ELog {
        new: new_id,
        parents: parents.clone(),
        strict_mf,
        strict_mg,
    });
    // euler decrement per copy of each parent through this center orbit
    let pabs = eng.ctx_abs(pt.ctx);
    for &v in &parents {
        let dec = pabs / eng.ctx_abs(eng.verts[v].ctx);
        eng.verts[v].euler -= dec as i64;
    }
    // edge surgery
    if pt.exc.len() == 2 {
        let (a, b) = (pt.exc[0].0, pt.exc[1].0);
        eng.edges
            .retain(|&(x, y)| !((x == a && y == b) || (x == b && y == a)));
    }
    for &v in &parents {
        eng.edges.push((v, new_id));
    }

    // strict transforms in the two charts
    let chart1: Vec<(&LocalCurve, BiPoly<AlgNum>)> = pt
        .curves
        .iter()
        .map(|c| (c, c.poly.blowup_chart_x().0))
        .collect();
    let chart2: Vec<(&LocalCurve, BiPoly<AlgNum>)> = pt
        .curves
        .iter()
        .map(|c| (c, c.poly.blowup_chart_y().0))
        .collect();

    let y_parent = pt.exc.iter().find(|(_, a)| *a == Axis::Y).map(|&(v, _)| v);
    let x_parent = pt.exc.iter().find(|(_, a)| *a == Axis::X).map(|&(v, _)| v);

    // corner with a Y-axis parent at the chart-1 origin
    if let Some(w) = y_parent {
        let curves: Vec<LocalCurve> = chart1
            .iter()
            .filter(|(_, s)| s.eval_origin().is_zero())
            .map(|(c, s)| LocalCurve {
                is_f: c.is_f,
                exp: c.exp,
                poly: s.clone(),
            })
            .collect();
        if !curves.is_empty() {
            eng.queue.push_back(EPoint {
                field: pt.field.clone(),
                ctx: pt.ctx,
                exc: vec![(new_id, Axis::X), (w, Axis::Y)],
                curves,
            });
        }
    }
    // chart-2 origin: corner with an X-axis parent, or the free vertical
    // direction on the new component
    {
        let curves: Vec<LocalCurve> = chart2
            .iter()
            .filter(|(_, s)| s.eval_origin().is_zero())
            .map(|(c, s)| LocalCurve {
                is_f: c.is_f,
                exp: c.exp,
                poly: s.clone(),
            })
            .collect();
        if !curves.is_empty() {
            let exc = match x_parent {
                Some(v) => vec![(v, Axis::X), (new_id, Axis::Y)],
                None => vec![(new_id, Axis::Y)],
            };
            eng.queue.push_back(EPoint {
                field: pt.field.clone(),
                ctx: pt.ctx,
                exc,
                curves,
            });
        } else if x_parent.is_some() {
            // the corner between the old and new components stays a plain
            // normal crossing; nothing to enqueue
        }
    }
    // free points on the new component, chart 1: roots of the product of the
    // restrictions to {x = 0}
    let mut restr = UniPoly::one('z');
    for (_, s) in &chart1 {
        restr = restr.mul(&restrict_x0(s));
    }
    if y_parent.is_some() {
        // the z = 0 root belongs to the corner handled above
        restr = restr.div_xpow(restr.order());
    }
    if restr.degree().map(|d| d >= 1).unwrap_or(false) {
        let sq = restr
            .div_exact(&restr.gcd(&restr.derivative()))
            .expect("squarefree division");
        for (phi, _) in factor_over_field(pt.field.as_ref(), &sq)? {
            if phi.degree().map(|d| d == 0).unwrap_or(true) {
                continue;
            }
            let ext = extend(
                pt.field.as_ref(),
                &format!("b{}", eng.blowups),
                &phi,
                DEFAULT_TOWER_LIMIT,
            )?;
            let z0 = ext.root.clone();
            let mut curves = vec![];
            for (c, s) in &chart1 {
                let lifted = ext.lift_bipoly(s);
                let t = lifted.translate_y(&z0);
                if t.eval_origin().is_zero() {
                    curves.push(LocalCurve {
                        is_f: c.is_f,
                        exp: c.exp,
                        poly: t,
                    });
                }
            }
            debug_assert!(!curves.is_empty());
            let mult = phi.deg() as u64;
            eng.ctxs.push(Ctx {
                parent: pt.ctx,
                mult,
            });
            let ctx = eng.ctxs.len() - 1;
            eng.queue.push_back(EPoint {
                field: ext.field.clone(),
                ctx,
                exc: vec![(new_id, Axis::X)],
                curves,
            });
        }
    }
    Ok(())
}

/// Materialized mutable graph used by the post passes.
pub(super) struct MutArrow {
    pub vertex: Option<usize>,
    pub label: ArrowLabel,
    pub mult: u64,
}

pub(super) struct MutVert {
    pub euler: i64,
    pub mf: u64,
    pub mg: u64,
    pub dicritical: bool,
}

pub(super) struct MutGraph {
    pub verts: BTreeMap<usize, MutVert>,
    pub edges: BTreeSet<(usize, usize)>,
    pub arrows: Vec<MutArrow>,
    pub log: Vec<BlowupRecord>,
    pub warnings: Vec<String>,
    next_id: usize,
}

fn materialize(eng: Engine) -> Result<MutGraph> {
    // copy counts and materialized id ranges per engine vertex
    let mut base: Vec<usize> = vec![0; eng.verts.len()];
    let mut next = 0usize;
    for (i, v) in eng.verts.iter().enumerate() {
        base[i] = next;
        next += eng.ctx_abs(v.ctx) as usize;
    }
    let mut g = MutGraph {
        verts: BTreeMap::new(),
        edges: BTreeSet::new(),
        arrows: vec![],
        log: vec![],
        warnings: vec![],
        next_id: next,
    };
    for (i, v) in eng.verts.iter().enumerate() {
        for k in 0..eng.ctx_abs(v.ctx) as usize {
            g.verts.insert(
                base[i] + k,
                MutVert {
                    euler: v.euler,
                    mf: v.mf,
                    mg: v.mg,
                    dicritical: false,
                },
            );
        }
    }
    // edges: map each copy of the deeper vertex to its ancestor copy
    for &(a, b) in &eng.edges {
        let (anc, desc) = if eng.is_ancestor_ctx(eng.verts[a].ctx, eng.verts[b].ctx) {
            (a, b)
        } else {
            debug_assert!(eng.is_ancestor_ctx(eng.verts[b].ctx, eng.verts[a].ctx));
            (b, a)
        };
        let ratio =
            (eng.ctx_abs(eng.verts[desc].ctx) / eng.ctx_abs(eng.verts[anc].ctx)) as usize;
        for k in 0..eng.ctx_abs(eng.verts[desc].ctx) as usize {
            let e = (base[anc] + k / ratio, base[desc] + k);
            let e = (e.0.min(e.1), e.0.max(e.1));
            g.edges.insert(e);
        }
    }
    for a in &eng.arrows {
        match a.vertex {
            None => g.arrows.push(MutArrow {
                vertex: None,
                label: a.label,
                mult: a.mult,
            }),
            Some(v) => {
                let ratio = (eng.ctx_abs(a.ctx) / eng.ctx_abs(eng.verts[v].ctx)) as usize;
                for k in 0..eng.ctx_abs(a.ctx) as usize {
                    g.arrows.push(MutArrow {
                        vertex: Some(base[v] + k / ratio),
                        label: a.label,
                        mult: a.mult,
                    });
                }
            }
        }
    }
    for l in &eng.log {
        let nv = &eng.verts[l.new];
        for k in 0..eng.ctx_abs(nv.ctx) as usize {
            let parents = l
                .parents
                .iter()
                .map(|&p| {
                    let ratio =
                        (eng.ctx_abs(nv.ctx) / eng.ctx_abs(eng.verts[p].ctx)) as usize;
                    let pv = &eng.verts[p];
                    (base[p] + k / ratio, pv.mf, pv.mg)
                })
                .collect();
            g.log.push(BlowupRecord {
                new_vertex: base[l.new] + k,
                parents,
                strict_mf: l.strict_mf,
                strict_mg: l.strict_mg,
            });
        }
    }
    Ok(g)
}

impl MutGraph {
    pub fn diff(&self, id: usize) -> i64 {
        let v = &self.verts[&id];
        v.mf as i64 - v.mg as i64
    }

    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        self.edges
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
            .collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    fn fresh_id(&mut self) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// Blow up the intersection point of two exceptional components.
    pub fn blow_corner(&mut self, a: usize, b: usize) {
        let id = self.fresh_id();
        let (mfa, mga) = {
            let v = &self.verts[&a];
            (v.mf, v.mg)
        };
        let (mfb, mgb) = {
            let v = &self.verts[&b];
            (v.mf, v.mg)
        };
        self.verts.insert(
            id,
            MutVert {
                euler: -1,
                mf: mfa + mfb,
                mg: mga + mgb,
                dicritical: false,
            },
        );
        self.edges.remove(&(a.min(b), a.max(b)));
        self.edges.insert((a.min(id), a.max(id)));
        self.edges.insert((b.min(id), b.max(id)));
        self.verts.get_mut(&a).unwrap().euler -= 1;
        self.verts.get_mut(&b).unwrap().euler -= 1;
        self.log.push(BlowupRecord {
            new_vertex: id,
            parents: vec![(a, mfa, mga), (b, mfb, mgb)],
            strict_mf: 0,
            strict_mg: 0,
        });
    }

    /// Blow up the attachment point of a strict-transform arrow.
    pub fn blow_arrow_point(&mut self, arrow_idx: usize) {
        let v = self.arrows[arrow_idx].vertex.expect("attached arrow");
        let label = self.arrows[arrow_idx].label;
        let mult = self.arrows[arrow_idx].mult;
        let (mfv, mgv) = {
            let vv = &self.verts[&v];
            (vv.mf, vv.mg)
        };
        let (sf, sg) = match label {
            ArrowLabel::StrictF => (mult, 0),
            ArrowLabel::StrictG => (0, mult),
            ArrowLabel::StrictGeneric => (0, 0),
        };
        let id = self.fresh_id();
        self.verts.insert(
            id,
            MutVert {
                euler: -1,
                mf: mfv + sf,
                mg: mgv + sg,
                dicritical: false,
            },
        );
        self.edges.insert((v.min(id), v.max(id)));
        self.verts.get_mut(&v).unwrap().euler -= 1;
        self.arrows[arrow_idx].vertex = Some(id);
        self.log.push(BlowupRecord {
            new_vertex: id,
            parents: vec![(v, mfv, mgv)],
            strict_mf: sf,
            strict_mg: sg,
        });
    }

    /// Contract a (-1)-vertex of total valence <= 2 (legality checked by the
    /// caller): neighbors gain +1 Euler number and become adjacent; an arrow
    /// through the vertex moves to the neighbor.
    pub fn contract(&mut self, id: usize) {
        let nbrs = self.neighbors(id);
        let arrow_idx: Vec<usize> = self
            .arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| a.vertex == Some(id))
            .map(|(i, _)| i)
            .collect();
        for &n in &nbrs {
            self.edges.remove(&(id.min(n), id.max(n)));
            self.verts.get_mut(&n).unwrap().euler += 1;
        }
        if nbrs.len() == 2 {
            let (u, w) = (nbrs[0], nbrs[1]);
            self.edges.insert((u.min(w), u.max(w)));
        }
        for i in arrow_idx {
            self.arrows[i].vertex = nbrs.first().copied();
        }
        self.verts.remove(&id);
    }

    pub fn finish(self) -> PencilResolution {
        let vertices: Vec<Vertex> = self
            .verts
            .iter()
            .map(|(&id, v)| Vertex {
                id,
                euler: v.euler,
                mf: v.mf,
                mg: v.mg,
                dicritical: v.dicritical,
            })
            .collect();
        let mut edges: Vec<(usize, usize)> = self.edges.into_iter().collect();
        edges.sort_unstable();
        let arrows = self
            .arrows
            .into_iter()
            .map(|a| super::Arrow {
                vertex: a.vertex,
                label: a.label,
                mult: a.mult,
            })
            .collect();
        PencilResolution {
            vertices,
            edges,
            arrows,
            log: self.log,
            warnings: self.warnings,
        }
    }
}
