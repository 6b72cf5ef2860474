//! Aggregate analysis of one germ pair and its JSON report.
//!
//! Field order is fixed by the struct definitions so identical inputs (and
//! seed) produce byte-identical output.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::bipoly::BiPoly;
use crate::exact::parse::parse_poly;
use crate::exact::rat::Rat;
use crate::invariants::{
    chi_global, chi_local, generic_member_mu, glue_report, hurwitz_fiber, milnor_number,
    FiberSurface, MilnorMethod,
};
use crate::resolution::{resolve_pencil, subgraph, PencilResolution, Side};
use crate::tameness::{
    itame_suspension, m_locus_probe, semitame_from_graph, ProbeConfig, ProbeSample, TameVerdict,
};

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub value: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_vertex: Option<(usize, u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_branch: Option<String>,
    pub checked: Vec<String>,
}

impl From<&TameVerdict> for VerdictJson {
    fn from(v: &TameVerdict) -> Self {
        VerdictJson {
            value: v.value,
            witness_vertex: v.offending_vertex,
            witness_branch: v.offending_branch.clone(),
            checked: v.checked.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MuJson {
    pub f: Option<u64>,
    pub g: Option<u64>,
    pub generic: Option<u64>,
    pub witness_t: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiJson {
    pub local0: Option<i64>,
    #[serde(rename = "localInf")]
    pub local_inf: Option<i64>,
    pub global: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FibersJson {
    pub hat0: Option<FiberSurface>,
    #[serde(rename = "hatInf")]
    pub hat_inf: Option<FiberSurface>,
    pub truncated0: Option<FiberSurface>,
    #[serde(rename = "truncatedInf")]
    pub truncated_inf: Option<FiberSurface>,
    pub glued: Option<FiberSurface>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphJson {
    pub vertices: Vec<GraphVertexJson>,
    pub edges: Vec<(usize, usize)>,
    pub arrows: Vec<GraphArrowJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphVertexJson {
    pub id: usize,
    pub euler: i64,
    pub mf: u64,
    pub mg: u64,
    pub dicritical: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphArrowJson {
    pub vertex: Option<usize>,
    pub label: String,
    pub mult: u64,
}

pub fn graph_json(gr: &PencilResolution) -> GraphJson {
    GraphJson {
        vertices: gr
            .vertices
            .iter()
            .map(|v| GraphVertexJson {
                id: v.id,
                euler: v.euler,
                mf: v.mf,
                mg: v.mg,
                dicritical: v.dicritical,
            })
            .collect(),
        edges: gr.edges.clone(),
        arrows: gr
            .arrows
            .iter()
            .map(|a| GraphArrowJson {
                vertex: a.vertex,
                label: match a.label {
                    crate::resolution::ArrowLabel::StrictF => "strict-f".into(),
                    crate::resolution::ArrowLabel::StrictG => "strict-g".into(),
                    crate::resolution::ArrowLabel::StrictGeneric => "strict-generic".into(),
                },
                mult: a.mult,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GermReport {
    pub f: String,
    pub g: String,
    pub semitame: VerdictJson,
    pub itame_suspension: Option<VerdictJson>,
    pub mu: MuJson,
    pub chi: ChiJson,
    pub fibers: FibersJson,
    pub lambda0: Option<i64>,
    #[serde(rename = "lambdaInf")]
    pub lambda_inf: Option<i64>,
    pub bouquet_paper: Option<i64>,
    pub rank_h1: Option<i64>,
    pub graph: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<Vec<Vec<ProbeSample>>>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub with_probe: bool,
    pub probe_radii: Vec<f64>,
    pub probe_starts: usize,
    pub tol_probe: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            seed: 0xC0FFEE,
            with_probe: false,
            probe_radii: vec![0.1, 0.05, 0.01],
            probe_starts: 64,
            tol_probe: 1e-6,
        }
    }
}

/// Full analysis pipeline for one pair; the resolution is computed once and
/// shared by the verdicts and the fiber computations.
pub fn analyze(f_text: &str, g_text: &str, opts: &AnalyzeOptions) -> Result<GermReport> {
    let f = parse_poly(f_text)?;
    let g = parse_poly(g_text)?;
    let mut flags: Vec<String> = vec![];

    let gr = resolve_pencil(&f, &g)?;
    flags.extend(gr.warnings.iter().cloned());
    let st = semitame_from_graph(&gr);
    let it = match itame_suspension(&f, &g) {
        Ok(v) => Some(v),
        Err(e) => {
            flags.push(format!("itame verdict unavailable: {e}"));
            None
        }
    };

    let mu_f = soft(milnor_number(&f, MilnorMethod::Resultant), &mut flags, "mu(f)");
    let mu_g = soft(milnor_number(&g, MilnorMethod::Resultant), &mut flags, "mu(g)");
    // dual-route consistency where available
    if let Some(mf) = mu_f {
        if let Ok(acampo) = milnor_number(&f, MilnorMethod::ACampo) {
            if acampo != mf {
                flags.push(format!("mu(f) route disagreement: {mf} vs {acampo}"));
            }
        }
    }
    let gm = match generic_member_mu(&f, &g) {
        Ok(gm) => Some(gm),
        Err(e) => {
            flags.push(format!("generic member mu unavailable: {e}"));
            None
        }
    };
    let (chi0, chi_inf, chig) = match (&mu_f, &mu_g, &gm) {
        (Some(_), Some(_), Some(_)) => {
            let c0 = soft(chi_local(&f, &g, Side::Zero), &mut flags, "chi local0");
            let ci = soft(chi_local(&f, &g, Side::Infinity), &mut flags, "chi localInf");
            let cg = soft(chi_global(&f, &g), &mut flags, "chi global");
            if !st.value || it.as_ref().map(|v| !v.value).unwrap_or(true) {
                flags.push(
                    "hypothesis unmet: chi formulas evaluated without semitame + (i)-tame"
                        .into(),
                );
            }
            (c0, ci, cg)
        }
        _ => (None, None, None),
    };

    // fibers over the two side subgraphs
    let mut hat = [None, None];
    let mut trunc = [None, None];
    for (k, side) in [Side::Zero, Side::Infinity].into_iter().enumerate() {
        match subgraph(&gr, side) {
            Ok(sel) => {
                hat[k] = soft(hurwitz_fiber(&gr, &sel, false), &mut flags, "hat fiber");
                trunc[k] = soft(hurwitz_fiber(&gr, &sel, true), &mut flags, "truncated fiber");
            }
            Err(e) => flags.push(format!("{side:?} side selection unavailable: {e}")),
        }
    }
    let mut glued = None;
    let mut lambda0 = None;
    let mut lambda_inf = None;
    let mut bouquet = None;
    let mut rank = None;
    if let (Some(t0), Some(ti)) = (&trunc[0], &trunc[1]) {
        let i0 = t0.total_interface();
        let ii = ti.total_interface();
        if i0 == ii {
            match glue_report(t0, ti, i0) {
                Ok((gl, data)) => {
                    flags.extend(data.flags.iter().cloned());
                    lambda0 = Some(data.lambda0);
                    lambda_inf = Some(data.lambda_inf);
                    bouquet = Some(data.bouquet_paper);
                    rank = Some(data.rank_h1_from_chi);
                    // cross-check against the formula route
                    if let Some(cg) = chig {
                        if gl.chi() != cg {
                            flags.push(format!(
                                "global chi mismatch: graph route {} vs formula {}",
                                gl.chi(),
                                cg
                            ));
                        }
                    }
                    glued = Some(gl);
                }
                Err(e) => flags.push(format!("gluing failed: {e}")),
            }
        } else {
            flags.push(format!("interface circle counts differ: {i0} vs {ii}"));
        }
    }

    let probe = if opts.with_probe {
        let cfg = ProbeConfig {
            starts: opts.probe_starts,
            residual_tol: opts.tol_probe,
            seed: opts.seed,
            ..Default::default()
        };
        Some(m_locus_probe(&f, &g, &opts.probe_radii, &cfg)?)
    } else {
        None
    };

    Ok(GermReport {
        f: f_text.to_string(),
        g: g_text.to_string(),
        semitame: (&st).into(),
        itame_suspension: it.as_ref().map(VerdictJson::from),
        mu: MuJson {
            f: mu_f,
            g: mu_g,
            generic: gm.as_ref().map(|g| g.mu),
            witness_t: gm.as_ref().map(|g| g.witness_t.clone()).unwrap_or_default(),
        },
        chi: ChiJson {
            local0: chi0,
            local_inf: chi_inf,
            global: chig,
        },
        fibers: FibersJson {
            hat0: hat[0].clone(),
            hat_inf: hat[1].clone(),
            truncated0: trunc[0].clone(),
            truncated_inf: trunc[1].clone(),
            glued,
        },
        lambda0,
        lambda_inf,
        bouquet_paper: bouquet,
        rank_h1: rank,
        graph: graph_json(&gr),
        probe,
        flags,
    })
}

fn soft<T>(r: Result<T>, flags: &mut Vec<String>, what: &str) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            flags.push(format!("{what}: {e}"));
            None
        }
    }
}

/// Exit-code mapping shared with the CLI: 2 for precondition violations, 3
/// for numeric failures.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::DegenerateInput(_)
        | Error::NotAGerm
        | Error::CommonBranch
        | Error::TowerLimit { .. }
        | Error::NonIsolated
        | Error::NonIsolatedPencil
        | Error::DegenerateJacobian
        | Error::DegenerateSide(_)
        | Error::NonFibered(_)
        | Error::FlowRefused(_) => 2,
        Error::InterfaceMismatch(_, _)
        | Error::Numerical(_)
        | Error::ItameViolationSample
        | Error::InternalLimit(_) => 3,
    }
}

/// Resolve either a pencil (g given) or a single curve.
pub fn resolve_for_report(f_text: &str, g_text: Option<&str>) -> Result<PencilResolution> {
    let f: BiPoly<Rat> = parse_poly(f_text)?;
    match g_text {
        Some(gt) => {
            let g = parse_poly(gt)?;
            resolve_pencil(&f, &g)
        }
        None => crate::resolution::resolve_curve(&f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_example_report() {
        let rep = analyze("x^3+y^2", "x^2+y^3", &AnalyzeOptions::default()).unwrap();
        assert!(rep.semitame.value);
        assert!(!rep.itame_suspension.as_ref().unwrap().value);
        assert_eq!(rep.mu.f, Some(2));
        assert_eq!(rep.mu.g, Some(2));
        assert_eq!(rep.mu.generic, Some(1));
        assert_eq!(rep.chi.global, Some(-2));
        assert_eq!(rep.chi.local0, Some(-1));
        assert_eq!(rep.lambda0, Some(2));
        assert_eq!(rep.bouquet_paper, Some(5));
        assert_eq!(rep.rank_h1, Some(3));
        assert!(rep.flags.iter().any(|f| f.contains("disagrees")));
        // hypothesis flag: pair is not (i)-tame
        assert!(rep.flags.iter().any(|f| f.contains("hypothesis unmet")));
    }

    #[test]
    fn report_json_deterministic() {
        let opts = AnalyzeOptions {
            with_probe: true,
            probe_starts: 8,
            ..Default::default()
        };
        let a = serde_json::to_string(&analyze("x^3+y^2", "x^2+y^3", &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze("x^3+y^2", "x^2+y^3", &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn common_branch_is_precondition_error() {
        let e = analyze("x", "x*y", &AnalyzeOptions::default()).unwrap_err();
        assert!(matches!(e, Error::CommonBranch));
        assert_eq!(exit_code_for(&e), 2);
    }

    #[test]
    fn monomial_pair_report() {
        let rep = analyze("x^2", "y^3", &AnalyzeOptions::default()).unwrap();
        assert!(rep.semitame.value);
        assert!(rep.itame_suspension.as_ref().unwrap().value);
        // mu(x^2) is non-isolated: flagged, chi absent
        assert_eq!(rep.mu.f, None);
        assert!(rep.chi.global.is_none());
        assert!(rep.flags.iter().any(|f| f.contains("mu(f)")));
    }
}
