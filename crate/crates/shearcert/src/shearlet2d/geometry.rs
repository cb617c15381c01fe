use serde::{Deserialize, Serialize};

use crate::dyadic::Exact;

use super::index::{Cone, Rect, ShearletIndex};

/// An exact point `(x1, x2)`.
pub type Point = (Exact, Exact);

/// An exact parallelogram, vertices listed counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPolygon {
    pub vertices: [Point; 4],
}

fn cross(a: &Point, b: &Point, c: &Point) -> Exact {
    let abx = &b.0 - &a.0;
    let aby = &b.1 - &a.1;
    let acx = &c.0 - &a.0;
    let acy = &c.1 - &a.1;
    &abx * &acy - &aby * &acx
}

impl SupportPolygon {
    /// Signed area (positive for counter-clockwise order).
    pub fn area(&self) -> Exact {
        let v = &self.vertices;
        let mut twice = Exact::zero();
        for i in 0..4 {
            let (a, b) = (&v[i], &v[(i + 1) % 4]);
            twice = twice + (&a.0 * &b.1 - &b.0 * &a.1);
        }
        twice.mul_pow2(-1)
    }

    /// Opposite edges are equal vectors.
    pub fn is_parallelogram(&self) -> bool {
        let v = &self.vertices;
        &v[1].0 - &v[0].0 == &v[2].0 - &v[3].0 && &v[1].1 - &v[0].1 == &v[2].1 - &v[3].1
    }

    pub fn is_counter_clockwise(&self) -> bool {
        (0..4).all(|i| {
            cross(
                &self.vertices[i],
                &self.vertices[(i + 1) % 4],
                &self.vertices[(i + 2) % 4],
            )
            .is_positive()
        })
    }

    pub fn is_axis_aligned(&self) -> bool {
        (0..4).all(|i| {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % 4]);
            a.0 == b.0 || a.1 == b.1
        })
    }

    /// Exact bounding box `[x_min, x_max] x [y_min, y_max]`.
    pub fn bounding_box(&self) -> (Exact, Exact, Exact, Exact) {
        let xs = self.vertices.iter().map(|p| &p.0);
        let ys = self.vertices.iter().map(|p| &p.1);
        (
            xs.clone().min().cloned().unwrap_or_default(),
            ys.clone().min().cloned().unwrap_or_default(),
            xs.max().cloned().unwrap_or_default(),
            ys.max().cloned().unwrap_or_default(),
        )
    }

    pub fn bounding_box_f64(&self) -> [f64; 4] {
        let (a, b, c, d) = self.bounding_box();
        [a.to_f64(), b.to_f64(), c.to_f64(), d.to_f64()]
    }

    /// `dx1/dx2` of every edge that is not horizontal, deduplicated, in edge order.
    pub fn edge_slopes(&self) -> Vec<Exact> {
        let mut out: Vec<Exact> = Vec::new();
        for i in 0..4 {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % 4]);
            let dy = &b.1 - &a.1;
            if dy.is_zero() {
                continue;
            }
            let s = (&b.0 - &a.0).checked_div(&dy).expect("dy is nonzero");
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    /// Sheared edge slope `dx1/dx2`, or `None` for an axis-aligned polygon.
    pub fn shear_slope(&self) -> Option<Exact> {
        self.edge_slopes().into_iter().find(|s| !s.is_zero())
    }

    /// Interiors of the polygon and the rectangle intersect.
    pub fn interior_meets(&self, r: &Rect) -> bool {
        // Separating axes: the rectangle's two normals and the polygon's two edge normals.
        let mut axes: Vec<(Exact, Exact)> =
            vec![(Exact::one(), Exact::zero()), (Exact::zero(), Exact::one())];
        for i in 0..2 {
            let (a, b) = (&self.vertices[i], &self.vertices[i + 1]);
            axes.push((&b.1 - &a.1, &a.0 - &b.0));
        }
        let corners: [Point; 4] = [
            (r.x_min.as_exact().clone(), r.y_min.as_exact().clone()),
            (r.x_max.as_exact().clone(), r.y_min.as_exact().clone()),
            (r.x_max.as_exact().clone(), r.y_max.as_exact().clone()),
            (r.x_min.as_exact().clone(), r.y_max.as_exact().clone()),
        ];
        axes.iter().all(|(nx, ny)| {
            let proj = |p: &Point| nx * &p.0 + ny * &p.1;
            let (p_lo, p_hi) = min_max(self.vertices.iter().map(proj));
            let (r_lo, r_hi) = min_max(corners.iter().map(proj));
            p_hi > r_lo && r_hi > p_lo
        })
    }

    /// The polygon lies inside the closed rectangle.
    pub fn contained_in(&self, r: &Rect) -> bool {
        self.vertices.iter().all(|(x, y)| {
            x >= r.x_min.as_exact()
                && x <= r.x_max.as_exact()
                && y >= r.y_min.as_exact()
                && y <= r.y_max.as_exact()
        })
    }

    /// Point-in-polygon test on the closed polygon.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let v: Vec<(f64, f64)> = self
            .vertices
            .iter()
            .map(|(a, b)| (a.to_f64(), b.to_f64()))
            .collect();
        (0..4).all(|i| {
            let (a, b) = (v[i], v[(i + 1) % 4]);
            (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) >= -1e-12
        })
    }
}

fn min_max(it: impl Iterator<Item = Exact>) -> (Exact, Exact) {
    let mut lo: Option<Exact> = None;
    let mut hi: Option<Exact> = None;
    for x in it {
        if lo.as_ref().is_none_or(|l| &x < l) {
            lo = Some(x.clone());
        }
        if hi.as_ref().is_none_or(|h| &x > h) {
            hi = Some(x);
        }
    }
    (lo.unwrap_or_default(), hi.unwrap_or_default())
}

/// Exact support of an element whose generators have support lengths `s1`
/// (wavelet) and `s2` (scaling function).
///
/// For `PSI` this is the preimage of `[c1 m1, c1 m1 + s1] x [c2 m2, c2 m2 + s2]`
/// under `S_k A_{2^j}`; `PSI_TILDE` is the mirrored construction and `PHI` a
/// translated square of side `s2`.
pub fn support_polygon(
    idx: &ShearletIndex,
    c: &(Exact, Exact),
    s1: &Exact,
    s2: &Exact,
) -> SupportPolygon {
    let j = idx.j as i64;
    let half = (idx.j / 2) as i64;
    let k = Exact::from_int(idx.k);
    let m1 = Exact::from_int(idx.m.0);
    let m2 = Exact::from_int(idx.m.1);
    match idx.cone {
        Cone::Phi => {
            let x0 = &c.0 * &m1;
            let y0 = &c.0 * &m2;
            let x1 = &x0 + s2;
            let y1 = &y0 + s2;
            SupportPolygon {
                vertices: [
                    (x0.clone(), y0.clone()),
                    (x1.clone(), y0),
                    (x1, y1.clone()),
                    (x0, y1),
                ],
            }
        }
        Cone::Psi => {
            // (u, v) -> (2^-j (u - k v), 2^-floor(j/2) v).
            let u0 = &c.0 * &m1;
            let v0 = &c.1 * &m2;
            let u1 = &u0 + s1;
            let v1 = &v0 + s2;
            let map = |u: &Exact, v: &Exact| ((u - &(&k * v)).mul_pow2(-j), v.mul_pow2(-half));
            SupportPolygon {
                vertices: [map(&u0, &v0), map(&u1, &v0), map(&u1, &v1), map(&u0, &v1)],
            }
        }
        Cone::PsiTilde => {
            // (y1, y2) -> (2^-floor(j/2) y1, 2^-j (y2 - k y1)).
            let a0 = &c.1 * &m1;
            let b0 = &c.0 * &m2;
            let a1 = &a0 + s2;
            let b1 = &b0 + s1;
            let map = |a: &Exact, b: &Exact| (a.mul_pow2(-half), (b - &(&k * a)).mul_pow2(-j));
            SupportPolygon {
                vertices: [map(&a0, &b0), map(&a1, &b0), map(&a1, &b1), map(&a0, &b1)],
            }
        }
    }
}

/// The exact sheared-edge slope magnitude `|dx1/dx2|` implied by `(cone, j, k)`.
///
/// `|k| 2^-ceil(j/2)` for `PSI`, `2^ceil(j/2) / |k|` for `PSI_TILDE`, and
/// `None` when the element is unsheared.
pub fn cone_slope(idx: &ShearletIndex) -> Option<Exact> {
    if idx.k == 0 || idx.cone == Cone::Phi {
        return None;
    }
    let up = idx.j.div_ceil(2) as i64;
    let k = Exact::from_int(idx.k.abs());
    Some(match idx.cone {
        Cone::Psi => k.mul_pow2(-up),
        _ => Exact::one()
            .mul_pow2(up)
            .checked_div(&k)
            .expect("k is nonzero"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> (Exact, Exact) {
        (Exact::one(), Exact::one())
    }

    fn pt(a: i64, b: i64) -> Point {
        (Exact::from_int(a), Exact::from_int(b))
    }

    #[test]
    fn unit_square_and_sheared() {
        let one = Exact::one();
        let sq = support_polygon(
            &ShearletIndex::new(Cone::Psi, 0, 0, (0, 0)).unwrap(),
            &unit(),
            &one,
            &one,
        );
        assert_eq!(sq.vertices, [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
        let sh = support_polygon(
            &ShearletIndex::new(Cone::Psi, 0, 1, (0, 0)).unwrap(),
            &unit(),
            &one,
            &one,
        );
        assert_eq!(sh.vertices, [pt(0, 0), pt(1, 0), pt(0, 1), pt(-1, 1)]);
        assert!(sh.is_parallelogram() && sh.is_counter_clockwise());
        assert_eq!(sh.shear_slope(), Some(Exact::from_int(-1)));
    }

    #[test]
    fn tilde_slope() {
        let three = Exact::from_int(3);
        let c = (Exact::ratio(1, 3).unwrap(), Exact::ratio(1, 3).unwrap());
        let idx = ShearletIndex::new(Cone::PsiTilde, 2, 1, (2, 5)).unwrap();
        let p = support_polygon(&idx, &c, &three, &three);
        assert_eq!(p.shear_slope(), Some(Exact::from_int(-2)));
        assert_eq!(cone_slope(&idx), Some(Exact::from_int(2)));
        assert_eq!(p.area(), Exact::ratio(9, 8).unwrap());
    }

    #[test]
    fn domain_relations() {
        let one = Exact::one();
        let r = Rect::square(1).unwrap();
        let sh = support_polygon(
            &ShearletIndex::new(Cone::Psi, 0, 1, (0, 0)).unwrap(),
            &unit(),
            &one,
            &one,
        );
        assert!(sh.interior_meets(&r));
        assert!(!sh.contained_in(&r));
        let far = support_polygon(
            &ShearletIndex::new(Cone::Psi, 0, 1, (2, 0)).unwrap(),
            &unit(),
            &one,
            &one,
        );
        assert!(!far.interior_meets(&r));
        let touching = support_polygon(&ShearletIndex::phi((1, 0)), &unit(), &one, &one);
        assert!(!touching.interior_meets(&r));
        let inside = support_polygon(&ShearletIndex::phi((0, 0)), &unit(), &one, &one);
        assert!(inside.contained_in(&r) && inside.is_axis_aligned());
        assert!(inside.contains(0.5, 0.5) && !inside.contains(1.5, 0.5));
    }
}
