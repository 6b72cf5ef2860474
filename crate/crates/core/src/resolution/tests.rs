use super::*;
use crate::exact::parse::parse_poly;

fn p(s: &str) -> BiPoly<Rat> {
    parse_poly(s).unwrap()
}

fn curve(s: &str) -> PencilResolution {
    resolve_curve(&p(s)).unwrap()
}

fn pencil(f: &str, g: &str) -> PencilResolution {
    resolve_pencil(&p(f), &p(g)).unwrap()
}

/// (euler, m_f, m_g, dicritical) tuples sorted by id.
fn vdata(gr: &PencilResolution) -> Vec<(i64, u64, u64, bool)> {
    gr.vertices
        .iter()
        .map(|v| (v.euler, v.mf, v.mg, v.dicritical))
        .collect()
}

fn replay_log(gr: &PencilResolution) {
    for rec in &gr.log {
        let sum: u64 = rec.parents.iter().map(|&(_, mf, _)| mf).sum();
        let sumg: u64 = rec.parents.iter().map(|&(_, _, mg)| mg).sum();
        // the recorded new vertex may have been contracted away; arithmetic
        // must hold against the log itself
        let expected_mf = sum + rec.strict_mf;
        let expected_mg = sumg + rec.strict_mg;
        if let Some(v) = gr.vertices.iter().find(|v| v.id == rec.new_vertex) {
            assert_eq!(v.mf, expected_mf, "pullback replay m_f at {}", rec.new_vertex);
            assert_eq!(v.mg, expected_mg, "pullback replay m_g at {}", rec.new_vertex);
        }
        for &(pid, mf, mg) in &rec.parents {
            if let Some(v) = gr.vertices.iter().find(|v| v.id == pid) {
                assert_eq!((v.mf, v.mg), (mf, mg), "parent multiplicities stable");
            }
        }
    }
}

/// Adjunction: m_v e_v + sum of neighbor m + arrow multiplicities = 0 for
/// both tags, on every vertex.
fn check_adjunction(gr: &PencilResolution) {
    for v in &gr.vertices {
        for take_f in [true, false] {
            let m = |id: usize| {
                let w = gr.vertex(id);
                if take_f {
                    w.mf as i64
                } else {
                    w.mg as i64
                }
            };
            let me = m(v.id);
            let nsum: i64 = gr.neighbors(v.id).iter().map(|&n| m(n)).sum();
            let asum: i64 = gr
                .arrows_at(v.id)
                .iter()
                .filter(|a| {
                    a.label
                        == if take_f {
                            ArrowLabel::StrictF
                        } else {
                            ArrowLabel::StrictG
                        }
                })
                .map(|a| a.mult as i64)
                .sum();
            assert_eq!(
                me * v.euler + nsum + asum,
                0,
                "adjunction fails at vertex {} (f-side: {take_f})",
                v.id
            );
        }
    }
}

#[test]
fn cusp_resolution_chain() {
    let gr = curve("x^2+y^3");
    assert_eq!(vdata(&gr), vec![(-3, 2, 0, false), (-2, 3, 0, false), (-1, 6, 0, false)]);
    // chain E1 - E3 - E2 with the arrow on E3 (ids 0, 2, 1)
    assert_eq!(gr.edges, vec![(0, 2), (1, 2)]);
    assert_eq!(gr.arrows.len(), 1);
    assert_eq!(gr.arrows[0].vertex, Some(2));
    assert_eq!(gr.arrows[0].mult, 1);
    assert!(gr.intersection_matrix_negative_definite());
    replay_log(&gr);
    check_adjunction(&gr);
}

#[test]
fn normal_crossing_single_vertex() {
    let gr = curve("x*y");
    assert_eq!(vdata(&gr), vec![(-1, 2, 0, false)]);
    assert!(gr.edges.is_empty());
    assert_eq!(gr.arrows.len(), 2);
    assert!(gr.arrows.iter().all(|a| a.vertex == Some(0) && a.mult == 1));
    assert!(gr.intersection_matrix_negative_definite());
    check_adjunction(&gr);
}

#[test]
fn smooth_germ_is_empty() {
    let gr = curve("x");
    assert!(gr.vertices.is_empty());
    assert_eq!(gr.arrows.len(), 1);
    assert_eq!(gr.arrows[0].vertex, None);
}

#[test]
fn non_squarefree_warns() {
    let gr = resolve_curve(&p("x^2")).unwrap();
    assert!(!gr.warnings.is_empty());
    assert!(gr.vertices.is_empty());
}

#[test]
fn tangent_smooth_branches() {
    // y(y - x^2): two smooth branches with contact 2
    let gr = curve("y*(y-x^2)");
    assert_eq!(vdata(&gr), vec![(-2, 2, 0, false), (-1, 4, 0, false)]);
    assert_eq!(gr.edges, vec![(0, 1)]);
    let at1: Vec<_> = gr.arrows_at(1);
    assert_eq!(at1.len(), 2);
    assert!(gr.intersection_matrix_negative_definite());
    replay_log(&gr);
    check_adjunction(&gr);
}

#[test]
fn conjugate_orbit_of_branches() {
    // y^4 - 2x^4: four conjugate lines through one blowup
    let gr = curve("y^4-2*x^4");
    assert_eq!(vdata(&gr), vec![(-1, 4, 0, false)]);
    assert_eq!(gr.arrows.len(), 4);
    check_adjunction(&gr);
}

#[test]
fn conjugate_pair_deeper_orbit() {
    // (y^2 - 2x^3): cusp-like with sqrt(2) coefficient; single chain
    let gr = curve("y^2-2*x^3");
    assert_eq!(vdata(&gr), vec![(-3, 2, 0, false), (-2, 3, 0, false), (-1, 6, 0, false)]);
    check_adjunction(&gr);
    // two conjugate tangent points: x^2 + y^2 branches at +-i
    let gr2 = curve("x^2+y^2");
    assert_eq!(vdata(&gr2), vec![(-1, 2, 0, false)]);
    assert_eq!(gr2.arrows.len(), 2);
}

#[test]
fn short_example_pencil_structure() {
    let gr = pencil("x^3+y^2", "x^2+y^3");
    // one dicritical center (m_f = m_g = 2) separating an f-side chain
    // (differences > 0) from a mirrored g-side chain (differences < 0)
    assert_eq!(
        vdata(&gr),
        vec![
            (-5, 2, 2, true),
            (-2, 2, 3, false),
            (-2, 3, 2, false),
            (-1, 4, 6, false),
            (-1, 6, 4, false),
        ]
    );
    assert_eq!(gr.edges, vec![(0, 3), (0, 4), (1, 3), (2, 4)]);
    // strict arrows on their own chains, the generic arrow on the dicritical
    let f_arrows: Vec<_> = gr
        .arrows
        .iter()
        .filter(|a| a.label == ArrowLabel::StrictF)
        .collect();
    assert_eq!(f_arrows.len(), 1);
    assert_eq!(f_arrows[0].vertex, Some(4));
    assert!(gr.vertex(4).mf > gr.vertex(4).mg);
    let g_arrows: Vec<_> = gr
        .arrows
        .iter()
        .filter(|a| a.label == ArrowLabel::StrictG)
        .collect();
    assert_eq!(g_arrows[0].vertex, Some(3));
    assert!(gr.vertex(3).mf < gr.vertex(3).mg);
    let gen: Vec<_> = gr
        .arrows
        .iter()
        .filter(|a| a.label == ArrowLabel::StrictGeneric)
        .collect();
    assert_eq!(gen.len(), 1);
    assert_eq!(gen[0].vertex, Some(0));
    assert_eq!(gen[0].mult, 2);
    assert!(gr.intersection_matrix_negative_definite());
    replay_log(&gr);
    check_adjunction(&gr);

    let cls = classify(&gr);
    assert_eq!(cls.dicritical, vec![0]);
    // rupture: the two valence-3 chain vertices carrying the strict arrows;
    // the center has multilink valence 2 and is excluded
    assert_eq!(cls.rupture, vec![3, 4]);
}

#[test]
fn short_example_subgraphs() {
    let gr = pencil("x^3+y^2", "x^2+y^3");
    let s0 = subgraph(&gr, Side::Zero).unwrap();
    // f-side chain plus the adjacent dicritical center: two chain components
    // and the center, mirroring the infinity side exactly
    assert_eq!(
        s0.vertex_ids.iter().cloned().collect::<Vec<_>>(),
        vec![0, 2, 4]
    );
    assert!(s0.is_connected());
    let sinf = subgraph(&gr, Side::Infinity).unwrap();
    assert_eq!(
        sinf.vertex_ids.iter().cloned().collect::<Vec<_>>(),
        vec![0, 1, 3]
    );
    assert!(sinf.is_connected());
}

#[test]
fn swap_mirrors_graph_and_sides() {
    for (f, g) in [
        ("x^3+y^2", "x^2+y^3"),
        ("x^2", "y^3"),
        ("y^2-x^3", "y^2-2*x^3"),
        ("x", "y"),
    ] {
        let a = pencil(f, g);
        let b = pencil(g, f);
        assert_eq!(
            canonical_form(&a, false),
            canonical_form(&b, true),
            "swap mirror fails for ({f}, {g})"
        );
    }
}

#[test]
fn monomial_pencil_after_arrow_and_corner_fixes() {
    let gr = pencil("x^2", "y^3");
    assert_eq!(
        vdata(&gr),
        vec![(-3, 2, 3, false), (-2, 4, 3, false), (-1, 6, 6, true)]
    );
    assert_eq!(gr.edges, vec![(0, 2), (1, 2)]);
    // f-arrow (mult 2) on the positive side, g-arrow (mult 3) on the
    // negative side, one generic arrow at the center
    for a in &gr.arrows {
        match a.label {
            ArrowLabel::StrictF => {
                assert_eq!((a.vertex, a.mult), (Some(1), 2));
            }
            ArrowLabel::StrictG => {
                assert_eq!((a.vertex, a.mult), (Some(0), 3));
            }
            ArrowLabel::StrictGeneric => {
                assert_eq!((a.vertex, a.mult), (Some(2), 1));
            }
        }
    }
    assert!(gr.intersection_matrix_negative_definite());
    replay_log(&gr);
    check_adjunction(&gr);
    // no rupture vertices at all: multilink valences are 2, 2, 2
    let cls = classify(&gr);
    assert!(cls.rupture.is_empty());
}

#[test]
fn shared_cusp_pair_has_equal_multiplicity_rupture() {
    let gr = pencil("y^2-x^3", "y^2-2*x^3");
    assert_eq!(
        vdata(&gr),
        vec![(-3, 2, 2, false), (-2, 3, 3, false), (-1, 6, 6, true)]
    );
    let cls = classify(&gr);
    assert_eq!(cls.rupture, vec![2]);
    let v = gr.vertex(2);
    assert_eq!((v.mf, v.mg), (6, 6));
    check_adjunction(&gr);
}

#[test]
fn hopf_pencil() {
    let gr = pencil("x", "y");
    assert_eq!(vdata(&gr), vec![(-1, 1, 1, true)]);
    assert_eq!(gr.arrows.len(), 3);
    let s0 = subgraph(&gr, Side::Zero).unwrap();
    assert_eq!(s0.vertex_ids.len(), 1);
    assert_eq!(s0.arrows.len(), 1);
    check_adjunction(&gr);
}

#[test]
fn common_branch_rejected() {
    assert!(matches!(
        resolve_pencil(&p("x"), &p("x*y")),
        Err(Error::CommonBranch)
    ));
}

#[test]
fn curve_matches_pencil_f_side() {
    // resolving the pencil with a transverse smooth g reproduces the curve
    // graph data on the f-side for simple germs
    let c = curve("x^2+y^3");
    assert!(c.intersection_matrix_negative_definite());
    let nd = pencil("x^3+y^2", "x^2+y^3");
    assert!(nd.intersection_matrix_negative_definite());
}

#[test]
fn dot_output_shape() {
    let gr = pencil("x^3+y^2", "x^2+y^3");
    let dot = to_dot(&gr);
    assert!(dot.contains("E1 e=-5 (2-2=0)"));
    assert!(dot.contains("shape=rarrow"));
    assert!(dot.starts_with("graph resolution {"));
}
