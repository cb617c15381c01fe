use std::collections::BTreeSet;

use proptest::prelude::*;
use shearcert::dyadic::{Dyadic, Exact};
use shearcert::shearlet2d::{
    cone_slope, enumerate, support_polygon, Cone, DomainRule, Point, Rect, ShearletIndex,
    ShearletSystem, ShearletSystemSpec, SupportPolygon,
};

fn third() -> (Exact, Exact) {
    (Exact::ratio(1, 3).unwrap(), Exact::ratio(1, 3).unwrap())
}

fn index() -> impl Strategy<Value = ShearletIndex> {
    (0usize..3, 0u32..6, -8i64..=8, -20i64..20, -20i64..20).prop_filter_map(
        "valid index",
        |(cone, j, k, m1, m2)| match cone {
            0 => Some(ShearletIndex::phi((m1, m2))),
            1 => ShearletIndex::new(Cone::Psi, j, k, (m1, m2)).ok(),
            _ => ShearletIndex::new(Cone::PsiTilde, j, k, (m1, m2)).ok(),
        },
    )
}

fn constants() -> impl Strategy<Value = (Exact, Exact)> {
    (1i64..6, 0i64..4, 1i64..6, 0i64..4).prop_map(|(a, b, c, d)| {
        (
            Exact::ratio(a, 2 * b + 1).unwrap(),
            Exact::ratio(c, 2 * d + 1).unwrap(),
        )
    })
}

fn sub(a: &Point, b: &Point) -> Point {
    (&a.0 - &b.0, &a.1 - &b.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn polygon_invariants(idx in index(), c in constants(), n in 1i64..5) {
        let s = Exact::from_int(2 * n - 1);
        let p = support_polygon(&idx, &c, &s, &s);
        let v = &p.vertices;
        prop_assert_eq!(sub(&v[1], &v[0]), sub(&v[2], &v[3]));
        prop_assert_eq!(sub(&v[3], &v[0]), sub(&v[2], &v[1]));
        prop_assert!(p.is_parallelogram() && p.is_counter_clockwise());
        let area = (&s * &s).mul_pow2(-(idx.j as i64) - (idx.j / 2) as i64);
        prop_assert_eq!(p.area(), area);
        if idx.cone == Cone::Phi || idx.k == 0 {
            prop_assert!(p.is_axis_aligned());
            prop_assert!(cone_slope(&idx).is_none());
        } else {
            let slope = p.shear_slope().unwrap().abs();
            prop_assert_eq!(Some(slope.clone()), cone_slope(&idx));
            let up = idx.j.div_ceil(2) as i64;
            let k = Exact::from_int(idx.k.abs());
            match idx.cone {
                Cone::Psi => {
                    prop_assert_eq!(&slope, &k.mul_pow2(-up));
                    prop_assert!(slope <= Exact::one());
                }
                _ => {
                    prop_assert_eq!(&slope * &k, Exact::one().mul_pow2(up));
                    prop_assert!(slope > Exact::one());
                }
            }
        }
    }
}

/// Strict overlap of the projections of two convex polygons on every edge normal.
fn interiors_meet(a: &[Point], b: &[Point]) -> bool {
    let axes: Vec<Point> = [a, b]
        .iter()
        .flat_map(|poly| {
            (0..poly.len()).map(move |i| {
                let e = sub(&poly[(i + 1) % poly.len()], &poly[i]);
                (-&e.1, e.0)
            })
        })
        .collect();
    axes.iter().all(|n| {
        let proj = |poly: &[Point]| {
            let vals: Vec<Exact> = poly
                .iter()
                .map(|p| &(&n.0 * &p.0) + &(&n.1 * &p.1))
                .collect();
            (
                vals.iter().min().unwrap().clone(),
                vals.iter().max().unwrap().clone(),
            )
        };
        let (a0, a1) = proj(a);
        let (b0, b1) = proj(b);
        a0.max(b0) < a1.min(b1)
    })
}

fn rect_points(r: &Rect) -> Vec<Point> {
    let (x0, y0) = (r.x_min.as_exact().clone(), r.y_min.as_exact().clone());
    let (x1, y1) = (r.x_max.as_exact().clone(), r.y_max.as_exact().clone());
    vec![
        (x0.clone(), y0.clone()),
        (x1.clone(), y0),
        (x1, y1.clone()),
        (x0, y1),
    ]
}

fn brute_force(spec: &ShearletSystemSpec, reach: i64) -> BTreeSet<ShearletIndex> {
    let s = Exact::from_int(spec.support_length());
    let dom = rect_points(&spec.domain);
    let dom_f = spec.domain.to_f64();
    let inside = |p: &SupportPolygon| {
        p.vertices.iter().all(|(x, y)| {
            spec.domain.x_min.as_exact() <= x
                && x <= spec.domain.x_max.as_exact()
                && spec.domain.y_min.as_exact() <= y
                && y <= spec.domain.y_max.as_exact()
        })
    };
    let mut out = BTreeSet::new();
    let mut shapes = vec![(Cone::Phi, 0, 0)];
    for j in 0..=spec.j_max {
        for cone in [Cone::Psi, Cone::PsiTilde] {
            let kmax = cone.max_shear(j).unwrap();
            shapes.extend((-kmax..=kmax).map(|k| (cone, j, k)));
        }
    }
    for (cone, j, k) in shapes {
        for m1 in -reach..=reach {
            for m2 in -reach..=reach {
                let idx = ShearletIndex::new(cone, j, k, (m1, m2)).unwrap();
                let p = support_polygon(&idx, &spec.c, &s, &s);
                // conservative float prefilter: skip polygons far from the domain
                let [x0, y0, x1, y1] = p.bounding_box_f64();
                if x1 < dom_f[0] - 1.0
                    || x0 > dom_f[2] + 1.0
                    || y1 < dom_f[1] - 1.0
                    || y0 > dom_f[3] + 1.0
                {
                    continue;
                }
                let keep = match spec.rule {
                    DomainRule::Contained => inside(&p),
                    DomainRule::Intersecting => interiors_meet(&p.vertices, &dom),
                };
                if keep {
                    assert!(
                        m1.abs() < reach && m2.abs() < reach,
                        "search window too small"
                    );
                    out.insert(idx);
                }
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    let domains = [
        Rect::square(3).unwrap(),
        Rect::new(
            Dyadic::new(-1, 1),
            Dyadic::from_int(0),
            Dyadic::new(5, 1),
            Dyadic::new(9, 2),
        )
        .unwrap(),
    ];
    for rule in [DomainRule::Contained, DomainRule::Intersecting] {
        for (order, c) in [
            (2, third()),
            (
                1,
                (Exact::ratio(2, 5).unwrap(), Exact::ratio(1, 3).unwrap()),
            ),
        ] {
            for domain in &domains {
                let spec = ShearletSystemSpec::new(order, c.clone(), 1, domain.clone())
                    .unwrap()
                    .with_rule(rule);
                let got = enumerate(&spec);
                let set: BTreeSet<_> = got.iter().copied().collect();
                assert_eq!(set.len(), got.len(), "duplicates");
                assert_eq!(set, brute_force(&spec, 40), "{rule:?} order {order}");
                assert_eq!(got, enumerate(&spec));
            }
        }
    }
}

#[test]
fn desk_scale_counts() {
    let counts: Vec<usize> = (0..=2)
        .map(|j| {
            let spec = ShearletSystemSpec::new(2, third(), j, Rect::square(3).unwrap())
                .unwrap()
                .with_rule(DomainRule::Contained);
            enumerate(&spec).len()
        })
        .collect();
    assert_eq!(counts[0], 3);
    assert_eq!(counts[1], 25);
    assert!(counts[2] > counts[1]);
}

#[test]
fn evaluation_is_separable() {
    let spec = ShearletSystemSpec::new(2, third(), 2, Rect::square(3).unwrap()).unwrap();
    let system = ShearletSystem::build(spec.clone(), 10).unwrap();
    let (phi, psi) = (&system.mra().phi, &system.mra().psi);
    let (c1, c2) = (third().0.to_f64(), third().1.to_f64());
    for idx in enumerate(&spec).into_iter().step_by(7) {
        let f = system.evaluate(&idx, 6).unwrap();
        let (j, k) = (idx.j as i32, idx.k as f64);
        let (a, b) = (2f64.powi(j), 2f64.powi(j / 2));
        let scale = 2f64.powf(0.75 * j as f64);
        let (m1, m2) = (idx.m.0 as f64, idx.m.1 as f64);
        for i2 in 0..f.nx2 {
            for i1 in 0..f.nx1 {
                let (x1, x2) = (f.x1(i1), f.x2(i2));
                let want = match idx.cone {
                    Cone::Phi => phi.eval(x1 - c1 * m1) * phi.eval(x2 - c1 * m2),
                    Cone::Psi => {
                        scale * psi.eval(a * x1 + k * b * x2 - c1 * m1) * phi.eval(b * x2 - c2 * m2)
                    }
                    Cone::PsiTilde => {
                        scale * psi.eval(a * x2 + k * b * x1 - c1 * m2) * phi.eval(b * x1 - c2 * m1)
                    }
                };
                assert!((f.at(i1, i2) - want).abs() < 1e-10, "{idx} at ({x1}, {x2})");
                if (i1 + i2) % 17 == 0 {
                    assert!((system.value(&idx, x1, x2) - f.at(i1, i2)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn numerical_support_inside_dilated_polygon() {
    let spec = ShearletSystemSpec::new(2, third(), 1, Rect::square(3).unwrap())
        .unwrap()
        .with_rule(DomainRule::Contained);
    let system = ShearletSystem::build(spec.clone(), 10).unwrap();
    for idx in enumerate(&spec) {
        let f = system.evaluate(&idx, 8).unwrap();
        let h = f.step_x1().max(f.step_x2());
        let v: Vec<(f64, f64)> = f
            .support
            .vertices
            .iter()
            .map(|(x, y)| (x.to_f64(), y.to_f64()))
            .collect();
        // signed distance to each CCW edge, allowing one cell
        let inside = |x: f64, y: f64| {
            (0..4).all(|i| {
                let (ax, ay) = v[i];
                let (bx, by) = v[(i + 1) % 4];
                let (ex, ey) = (bx - ax, by - ay);
                let cross = ex * (y - ay) - ey * (x - ax);
                cross >= -h * (ex * ex + ey * ey).sqrt() * 2f64.sqrt()
            })
        };
        let peak = f.max_abs();
        for i2 in 0..f.nx2 {
            for i1 in 0..f.nx1 {
                if f.at(i1, i2).abs() > 1e-8 * peak {
                    assert!(inside(f.x1(i1), f.x2(i2)), "{idx}");
                }
            }
        }
    }
}
