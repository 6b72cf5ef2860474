//! Fiber surfaces over resolution subgraphs by covering-space bookkeeping,
//! and the boundary gluing that assembles the global fiber.
//!
//! Over a vertex v the fiber piece is an unbranched cover of the punctured
//! component: degree m_v = |m_f - m_g| (the local degree at dicritical
//! vertices), component count gcd(m_v, adjacent multiplicities), and Euler
//! characteristic m_v (2 - valence). Edge circles join pieces along
//! gcd(m_v, m_w) circles; arrow circles stay as boundary.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::resolution::{ArrowLabel, PencilResolution, SubgraphSelection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    HatFiber,
    TruncatedFiber,
    GluedGlobal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberComponent {
    pub genus: u32,
    pub boundary_circles: u32,
    /// Boundary circles created by the truncation, available for gluing.
    pub interface_circles: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberSurface {
    pub components: Vec<FiberComponent>,
    pub provenance: Provenance,
}

impl FiberSurface {
    pub fn chi(&self) -> i64 {
        self.components
            .iter()
            .map(|c| 2 - 2 * c.genus as i64 - c.boundary_circles as i64)
            .sum()
    }
    pub fn total_boundary(&self) -> u32 {
        self.components.iter().map(|c| c.boundary_circles).sum()
    }
    pub fn total_interface(&self) -> u32 {
        self.components.iter().map(|c| c.interface_circles).sum()
    }
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fiber of the side multilink over the selected subgraph. With
/// `truncate = true` the neighborhood of the indeterminacy axis is removed:
/// the dicritical vertices' generic arrows contribute extra boundary
/// circles, marked as the gluing interface.
pub fn hurwitz_fiber(
    gr: &PencilResolution,
    sel: &SubgraphSelection,
    truncate: bool,
) -> Result<FiberSurface> {
    // fiber multiplicity per selected vertex
    let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
    for &id in &sel.vertex_ids {
        let v = gr.vertex(id);
        let m = if v.dicritical {
            gr.arrows_at(id)
                .iter()
                .filter(|a| a.label == ArrowLabel::StrictGeneric)
                .map(|a| a.mult)
                .sum()
        } else {
            (v.mf as i64 - v.mg as i64).unsigned_abs()
        };
        if m == 0 {
            return Err(Error::NonFibered(format!(
                "vertex {id} carries multiplicity 0"
            )));
        }
        mult.insert(id, m);
    }

    // arrows retained per vertex: the side's strict arrows always, generic
    // arrows only in truncated mode
    let strict_arrows: Vec<(usize, u64)> = sel
        .arrows
        .iter()
        .map(|&i| {
            let a = &gr.arrows[i];
            (a.vertex.expect("attached arrow"), a.mult)
        })
        .collect();
    let generic_arrows: Vec<(usize, u64)> = if truncate {
        sel.vertex_ids
            .iter()
            .flat_map(|&id| {
                gr.arrows_at(id)
                    .into_iter()
                    .filter(|a| a.label == ArrowLabel::StrictGeneric)
                    .map(move |a| (id, a.mult))
                    .collect::<Vec<_>>()
            })
            .collect()
    } else {
        vec![]
    };

    // valence and component count per vertex
    let mut valence: BTreeMap<usize, u64> = BTreeMap::new();
    let mut ncomp: BTreeMap<usize, u64> = BTreeMap::new();
    for &id in &sel.vertex_ids {
        let m = mult[&id];
        let mut val = 0u64;
        let mut g = m;
        for &(a, b) in &sel.edges {
            if a == id || b == id {
                val += 1;
                let other = if a == id { b } else { a };
                g = gcd(g, mult[&other]);
            }
        }
        for &(v, k) in strict_arrows.iter().chain(generic_arrows.iter()) {
            if v == id {
                val += 1;
                g = gcd(g, k);
            }
        }
        valence.insert(id, val);
        ncomp.insert(id, g);
    }

    // pieces: (vertex, piece index); union-find over edge circles
    let mut nodes: Vec<(usize, u64)> = vec![];
    let mut node_idx: BTreeMap<(usize, u64), usize> = BTreeMap::new();
    for &id in &sel.vertex_ids {
        for k in 0..ncomp[&id] {
            node_idx.insert((id, k), nodes.len());
            nodes.push((id, k));
        }
    }
    let mut uf: Vec<usize> = (0..nodes.len()).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &(a, b) in &sel.edges {
        let circles = gcd(mult[&a], mult[&b]);
        for j in 0..circles {
            let na = node_idx[&(a, j % ncomp[&a])];
            let nb = node_idx[&(b, j % ncomp[&b])];
            let (ra, rb) = (find(&mut uf, na), find(&mut uf, nb));
            if ra != rb {
                uf[ra] = rb;
            }
        }
    }

    // chi and boundary tallies per piece, then aggregate per component
    let mut chi_piece: Vec<i64> = vec![0; nodes.len()];
    let mut boundary_piece: Vec<u32> = vec![0; nodes.len()];
    let mut interface_piece: Vec<u32> = vec![0; nodes.len()];
    for &id in &sel.vertex_ids {
        let m = mult[&id] as i64;
        let val = valence[&id] as i64;
        let n = ncomp[&id] as i64;
        let chi_total = m * (2 - val);
        assert_eq!(chi_total % n, 0, "piece chi not integral");
        for k in 0..ncomp[&id] {
            chi_piece[node_idx[&(id, k)]] = chi_total / n;
        }
    }
    for &(v, k) in &strict_arrows {
        let circles = gcd(mult[&v], k);
        for j in 0..circles {
            boundary_piece[node_idx[&(v, j % ncomp[&v])]] += 1;
        }
    }
    for &(v, k) in &generic_arrows {
        let circles = gcd(mult[&v], k);
        for j in 0..circles {
            let n = node_idx[&(v, j % ncomp[&v])];
            boundary_piece[n] += 1;
            interface_piece[n] += 1;
        }
    }

    let mut agg: BTreeMap<usize, (i64, u32, u32)> = BTreeMap::new();
    for i in 0..nodes.len() {
        let r = find(&mut uf, i);
        let e = agg.entry(r).or_insert((0, 0, 0));
        e.0 += chi_piece[i];
        e.1 += boundary_piece[i];
        e.2 += interface_piece[i];
    }
    let mut components = vec![];
    for (_, (chi, b, int)) in agg {
        if b == 0 {
            return Err(Error::NonFibered(
                "fiber component without boundary".into(),
            ));
        }
        let g2 = 2 - chi - b as i64;
        if g2 < 0 || g2 % 2 != 0 {
            return Err(Error::Numerical(format!(
                "inconsistent fiber component: chi={chi}, boundary={b}"
            )));
        }
        components.push(FiberComponent {
            genus: (g2 / 2) as u32,
            boundary_circles: b,
            interface_circles: int,
        });
    }
    components.sort_by_key(|c| (c.genus, c.boundary_circles, c.interface_circles));

    let surface = FiberSurface {
        components,
        provenance: if truncate {
            Provenance::TruncatedFiber
        } else {
            Provenance::HatFiber
        },
    };
    // chi double-count: piece sum must match the direct formula
    let direct: i64 = sel
        .vertex_ids
        .iter()
        .map(|&id| mult[&id] as i64 * (2 - valence[&id] as i64))
        .sum();
    debug_assert_eq!(surface.chi(), direct);
    Ok(surface)
}

#[derive(Debug, Clone, Serialize)]
pub struct GlueData {
    pub lambda0: i64,
    pub lambda_inf: i64,
    pub bouquet_paper: i64,
    pub rank_h1_from_chi: i64,
    pub discrepancy: bool,
    pub flags: Vec<String>,
}

/// Glue the two truncated fibers along their interface circles; reports both
/// the first Betti number from the Euler characteristic and the circle count
/// asserted by the bouquet formula, flagging any disagreement.
pub fn glue_report(
    fiber0: &FiberSurface,
    fiber_inf: &FiberSurface,
    interface: u32,
) -> Result<(FiberSurface, GlueData)> {
    if fiber0.total_interface() != interface || fiber_inf.total_interface() != interface {
        return Err(Error::InterfaceMismatch(
            fiber0.total_interface() as usize,
            fiber_inf.total_interface() as usize,
        ));
    }
    let mut flags = vec![];
    // nodes: components of both sides; interface circles paired in order
    let n0 = fiber0.components.len();
    let total = n0 + fiber_inf.components.len();
    let mut uf: Vec<usize> = (0..total).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let owners = |f: &FiberSurface, off: usize| {
        let mut v = vec![];
        for (i, c) in f.components.iter().enumerate() {
            for _ in 0..c.interface_circles {
                v.push(off + i);
            }
        }
        v
    };
    let o0 = owners(fiber0, 0);
    let oi = owners(fiber_inf, n0);
    for j in 0..interface as usize {
        let (a, b) = (find(&mut uf, o0[j]), find(&mut uf, oi[j]));
        if a != b {
            uf[a] = b;
        }
    }
    let mut agg: BTreeMap<usize, (i64, i64)> = BTreeMap::new(); // chi, boundary
    let all = fiber0.components.iter().chain(fiber_inf.components.iter());
    for (i, c) in all.enumerate() {
        let r = find(&mut uf, i);
        let e = agg.entry(r).or_insert((0, 0));
        e.0 += 2 - 2 * c.genus as i64 - c.boundary_circles as i64;
        e.1 += c.boundary_circles as i64 - c.interface_circles as i64;
    }
    let mut components = vec![];
    for (_, (chi, b)) in agg {
        if b == 0 {
            flags.push("degenerate gluing: closed component produced".into());
        }
        let g2 = 2 - chi - b;
        if g2 < 0 || g2 % 2 != 0 {
            return Err(Error::Numerical(format!(
                "inconsistent glued component: chi={chi}, boundary={b}"
            )));
        }
        components.push(FiberComponent {
            genus: (g2 / 2) as u32,
            boundary_circles: b as u32,
            interface_circles: 0,
        });
    }
    components.sort_by_key(|c| (c.genus, c.boundary_circles));
    let glued = FiberSurface {
        components,
        provenance: Provenance::GluedGlobal,
    };

    let chi0 = fiber0.chi();
    let chi_inf = fiber_inf.chi();
    assert_eq!(glued.chi(), chi0 + chi_inf, "chi additivity under gluing");
    if !fiber0.is_connected() || !fiber_inf.is_connected() {
        flags.push("a local fiber is disconnected; lambda = 1 - chi read formally".into());
    }
    let lambda0 = 1 - chi0;
    let lambda_inf = 1 - chi_inf;
    let bouquet_paper = lambda0 + lambda_inf + 1;
    let rank_h1_from_chi = 1 - (chi0 + chi_inf);
    if !glued.is_connected() {
        flags.push("glued fiber is disconnected; rank read formally".into());
    }
    let discrepancy = bouquet_paper != rank_h1_from_chi;
    if discrepancy {
        flags.push(format!(
            "bouquet count {bouquet_paper} disagrees with 1 - chi = {rank_h1_from_chi}"
        ));
    }
    Ok((
        glued,
        GlueData {
            lambda0,
            lambda_inf,
            bouquet_paper,
            rank_h1_from_chi,
            discrepancy,
            flags,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;
    use crate::resolution::{resolve_pencil, subgraph, Side};

    fn fig1() -> PencilResolution {
        resolve_pencil(
            &parse_poly("x^3+y^2").unwrap(),
            &parse_poly("x^2+y^3").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn hat_fibers_are_one_holed_spheres() {
        let gr = fig1();
        for side in [Side::Zero, Side::Infinity] {
            let sel = subgraph(&gr, side).unwrap();
            let hat = hurwitz_fiber(&gr, &sel, false).unwrap();
            assert_eq!(hat.components.len(), 1);
            assert_eq!(hat.components[0].genus, 0);
            assert_eq!(hat.components[0].boundary_circles, 1);
            assert_eq!(hat.chi(), 1);
        }
    }

    #[test]
    fn truncated_fibers_are_three_holed_spheres() {
        let gr = fig1();
        for side in [Side::Zero, Side::Infinity] {
            let sel = subgraph(&gr, side).unwrap();
            let tr = hurwitz_fiber(&gr, &sel, true).unwrap();
            assert_eq!(tr.components.len(), 1);
            assert_eq!(tr.components[0].genus, 0);
            assert_eq!(tr.components[0].boundary_circles, 3);
            assert_eq!(tr.components[0].interface_circles, 2);
            assert_eq!(tr.chi(), -1);
        }
    }

    #[test]
    fn glued_global_fiber() {
        let gr = fig1();
        let s0 = subgraph(&gr, Side::Zero).unwrap();
        let si = subgraph(&gr, Side::Infinity).unwrap();
        let f0 = hurwitz_fiber(&gr, &s0, true).unwrap();
        let fi = hurwitz_fiber(&gr, &si, true).unwrap();
        let (glued, data) = glue_report(&f0, &fi, 2).unwrap();
        assert_eq!(glued.chi(), -2);
        assert_eq!(glued.components.len(), 1);
        assert_eq!(glued.components[0].genus, 1);
        assert_eq!(glued.components[0].boundary_circles, 2);
        assert_eq!(data.lambda0, 2);
        assert_eq!(data.lambda_inf, 2);
        assert_eq!(data.bouquet_paper, 5);
        assert_eq!(data.rank_h1_from_chi, 3);
        assert!(data.discrepancy);
    }

    #[test]
    fn hopf_side_fiber_is_disk() {
        let gr = resolve_pencil(&parse_poly("x").unwrap(), &parse_poly("y").unwrap()).unwrap();
        let sel = subgraph(&gr, Side::Zero).unwrap();
        let hat = hurwitz_fiber(&gr, &sel, false).unwrap();
        assert_eq!(hat.components.len(), 1);
        assert_eq!(
            (hat.components[0].genus, hat.components[0].boundary_circles),
            (0, 1)
        );
    }

    #[test]
    fn degenerate_disk_gluing_flagged() {
        let disk = FiberSurface {
            components: vec![FiberComponent {
                genus: 0,
                boundary_circles: 1,
                interface_circles: 1,
            }],
            provenance: Provenance::TruncatedFiber,
        };
        let (glued, data) = glue_report(&disk, &disk, 1).unwrap();
        assert_eq!(glued.chi(), 2);
        assert!(data.flags.iter().any(|f| f.contains("degenerate")));
    }

    #[test]
    fn annuli_glued_along_one_circle() {
        let annulus = FiberSurface {
            components: vec![FiberComponent {
                genus: 0,
                boundary_circles: 2,
                interface_circles: 1,
            }],
            provenance: Provenance::TruncatedFiber,
        };
        let (glued, data) = glue_report(&annulus, &annulus, 1).unwrap();
        assert_eq!(glued.chi(), 0);
        assert!(glued.is_connected());
        assert_eq!(data.rank_h1_from_chi, 1);
    }

    #[test]
    fn interface_mismatch_rejected() {
        let disk = FiberSurface {
            components: vec![FiberComponent {
                genus: 0,
                boundary_circles: 1,
                interface_circles: 1,
            }],
            provenance: Provenance::TruncatedFiber,
        };
        assert!(glue_report(&disk, &disk, 2).is_err());
    }
}
