//! Newton polygons of plane germs: the lower-left convex hull of the support
//! with face polynomials.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::bipoly::BiPoly;
use crate::exact::rat::Rat;
use crate::exact::unipoly::{Coeff, UniPoly};

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSegment {
    /// Endpoint with the smaller y-exponent (larger x-exponent).
    pub start: (u32, u32),
    /// Endpoint with the larger y-exponent.
    pub end: (u32, u32),
    /// `(end.0 - start.0) / (end.1 - start.1)`, always negative; its absolute
    /// value is the Puiseux exponent carried by the face.
    pub slope: Rat,
    /// Sum of the face coefficients in one variable: coefficient of `c^s` is
    /// the support entry at `start + s*(-u, w)` where |slope| = u/w in lowest
    /// terms; degree equals the y-height of the face.
    pub face_poly: UniPoly<Rat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    /// Hull vertices from the start point (min y-exponent) upward.
    pub vertices: Vec<(u32, u32)>,
    /// Segments ordered by increasing slope magnitude.
    pub segments: Vec<NewtonSegment>,
}

/// Lower-left hull vertices of a support set, walking from the point that is
/// lexicographically minimal in (j, i) to the one minimal in (i, j). The
/// returned chain has strictly decreasing i and increasing j.
pub(crate) fn lower_hull(support: &[(u32, u32)]) -> Vec<(u32, u32)> {
    assert!(!support.is_empty());
    let p0 = *support
        .iter()
        .min_by_key(|&&(i, j)| (j, i))
        .unwrap();
    let p1 = *support
        .iter()
        .min_by_key(|&&(i, j)| (i, j))
        .unwrap();
    let mut chain = vec![p0];
    let mut cur = p0;
    while cur != p1 {
        // Successor: among points strictly left of cur, the one whose segment
        // keeps every other candidate weakly above the segment line; that is
        // the candidate maximizing (cur.i - q.i)/(q.j - cur.j), ties broken
        // by taking the farthest.
        let mut best: Option<((u32, u32), Rat)> = None;
        for &q in support {
            if q.0 >= cur.0 || q.1 <= cur.1 {
                continue;
            }
            let gamma = Rat::new(
                i64::from(cur.0 - q.0).into(),
                i64::from(q.1 - cur.1).into(),
            );
            match &best {
                None => best = Some((q, gamma)),
                Some((bq, bg)) => {
                    if gamma > *bg
                        || (gamma == *bg && (q.1 > bq.1))
                    {
                        best = Some((q, gamma));
                    }
                }
            }
        }
        match best {
            Some((q, _)) => {
                chain.push(q);
                cur = q;
            }
            None => break,
        }
    }
    chain
}

/// Generic face data used by the expansion driver: exponent u/w in lowest
/// terms, lattice length, and the reduced face polynomial over the
/// coefficient field.
pub(crate) struct Face<C: Coeff> {
    pub u: u32,
    pub w: u32,
    pub start: (u32, u32),
    pub len: u32,
    pub reduced: UniPoly<C>,
}

pub(crate) fn faces_of<C: Coeff>(p: &BiPoly<C>) -> Vec<Face<C>> {
    if p.is_zero() {
        return vec![];
    }
    let support: Vec<(u32, u32)> = p.terms().map(|(&k, _)| k).collect();
    let chain = lower_hull(&support);
    let mut out = vec![];
    for win in chain.windows(2) {
        let (a, b) = (win[0], win[1]);
        let di = a.0 - b.0;
        let dj = b.1 - a.1;
        let g = gcd_u32(di, dj);
        let (u, w) = (di / g, dj / g);
        let len = g;
        let mut coeffs = vec![];
        for s in 0..=len {
            let pt = (a.0 - s * u, a.1 + s * w);
            coeffs.push(p.coeff(pt.0, pt.1));
        }
        out.push(Face {
            u,
            w,
            start: a,
            len,
            reduced: UniPoly::new('c', coeffs),
        });
    }
    out
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Newton polygon of a germ (must vanish at the origin).
pub fn newton_polygon(p: &BiPoly<Rat>) -> Result<NewtonPolygon> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("newton polygon of zero".into()));
    }
    if !p.eval_origin().is_zero() {
        return Err(Error::NotAGerm);
    }
    let faces = faces_of(p);
    let support: Vec<(u32, u32)> = p.terms().map(|(&k, _)| k).collect();
    let vertices = lower_hull(&support);
    let mut segments: Vec<NewtonSegment> = faces
        .iter()
        .map(|f| {
            let end = (f.start.0 - f.len * f.u, f.start.1 + f.len * f.w);
            NewtonSegment {
                start: f.start,
                end,
                slope: -Rat::new(i64::from(f.u).into(), i64::from(f.w).into()),
                face_poly: face_poly_full(p, f),
            }
        })
        .collect();
    segments.sort_by(|a, b| {
        let ma = -a.slope.clone();
        let mb = -b.slope.clone();
        ma.cmp(&mb)
    });
    Ok(NewtonPolygon { vertices, segments })
}

/// Face polynomial in the convention `sum a_(i,j) c^(j - j_min)` over the
/// face's lattice points.
fn face_poly_full(p: &BiPoly<Rat>, f: &Face<Rat>) -> UniPoly<Rat> {
    let jmin = f.start.1;
    let height = f.len * f.w;
    let mut coeffs = vec![Rat::zero(); height as usize + 1];
    for s in 0..=f.len {
        let pt = (f.start.0 - s * f.u, f.start.1 + s * f.w);
        coeffs[(pt.1 - jmin) as usize] = p.coeff(pt.0, pt.1);
    }
    UniPoly::new('c', coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn cusp_segment() {
        let np = newton_polygon(&p("x^2+y^3")).unwrap();
        assert_eq!(np.segments.len(), 1);
        let s = &np.segments[0];
        assert_eq!((s.start, s.end), ((2, 0), (0, 3)));
        assert_eq!(s.slope, Rat::new((-2).into(), 3.into()));
        // face polynomial 1 + c^3, simple roots
        assert_eq!(s.face_poly, UniPoly::from_i64('c', &[1, 0, 0, 1]));
        let g = s.face_poly.gcd(&s.face_poly.derivative());
        assert_eq!(g.degree(), Some(0));
    }

    #[test]
    fn normal_crossing_union_of_axes() {
        // support of x*y is the single point (1,1): one vertex, no faces
        // (every polygon point must lie on the support)
        let np = newton_polygon(&p("x*y")).unwrap();
        assert!(np.segments.is_empty());
        assert_eq!(np.vertices, vec![(1, 1)]);
        // the smooth crossing x + y does carry the (1,0)-(0,1) face
        let np2 = newton_polygon(&p("x+y")).unwrap();
        assert_eq!(np2.segments.len(), 1);
        assert_eq!((np2.segments[0].start, np2.segments[0].end), ((1, 0), (0, 1)));
    }

    #[test]
    fn degenerate_single_vertex() {
        let np = newton_polygon(&p("x^2")).unwrap();
        assert!(np.segments.is_empty());
        assert_eq!(np.vertices, vec![(2, 0)]);
    }

    #[test]
    fn two_faces_ordered_by_exponent() {
        // (y - x^2)(y^2 - x): support gives faces gamma = 1/2 and gamma = 2
        let np = newton_polygon(&p("(y-x^2)*(y^2-x)")).unwrap();
        assert_eq!(np.segments.len(), 2);
        let g0 = -np.segments[0].slope.clone();
        let g1 = -np.segments[1].slope.clone();
        assert!(g0 < g1);
        assert_eq!(g0, Rat::new(1.into(), 2.into()));
        assert_eq!(g1, Rat::new(2.into(), 1.into()));
    }

    #[test]
    fn not_a_germ() {
        assert!(matches!(newton_polygon(&p("1+x")), Err(Error::NotAGerm)));
    }
}
