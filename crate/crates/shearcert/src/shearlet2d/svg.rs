use std::fmt::Write;

use super::geometry::SupportPolygon;
use super::index::{Cone, Rect};

fn flip(y: f64) -> f64 {
    -y + 0.0
}

fn color(cone: Cone) -> &'static str {
    match cone {
        Cone::Phi => "#7f7f7f",
        Cone::Psi => "#1f77b4",
        Cone::PsiTilde => "#d62728",
    }
}

/// SVG drawing of support polygons, one `<polygon>` per element.
///
/// The view box is the domain with the `x2` axis pointing up. Coordinates are
/// printed with six decimals so the output is byte-stable.
pub fn support_svg(polygons: &[(Cone, SupportPolygon)], domain: &Rect) -> String {
    let [x0, y0, x1, y1] = domain.to_f64();
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = 0.004 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        x0,
        flip(y1),
        w,
        h
    );
    let _ = writeln!(
        out,
        r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="none" stroke="black" stroke-width="{:.6}"/>"#,
        x0,
        flip(y1),
        w,
        h,
        stroke
    );
    for (cone, poly) in polygons {
        let points: Vec<String> = poly
            .vertices
            .iter()
            .map(|(a, b)| format!("{:.6},{:.6}", a.to_f64(), flip(b.to_f64())))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon class="{}" points="{}" fill="{}" fill-opacity="0.12" stroke="{}" stroke-width="{:.6}"/>"#,
            cone.name(),
            points.join(" "),
            color(*cone),
            color(*cone),
            stroke
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Exact;
    use crate::shearlet2d::{support_polygon, ShearletIndex};

    #[test]
    fn one_rectangle() {
        let one = Exact::one();
        let c = (one.clone(), one.clone());
        let p = support_polygon(&ShearletIndex::phi((0, 0)), &c, &one, &one);
        let svg = support_svg(&[(Cone::Phi, p)], &Rect::square(2).unwrap());
        assert!(svg.starts_with(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0.000000 -2.000000 2.000000 2.000000">"#));
        assert!(svg.contains(
            r#"points="0.000000,0.000000 1.000000,0.000000 1.000000,-1.000000 0.000000,-1.000000""#
        ));
        assert_eq!(svg.matches("<polygon").count(), 1);
    }
}
