//! SVG picture of `𝔽_X` for a surface: the polygon, the grid `(1/q)ℤ²` over
//! its bounding box, one highlighted interior representative per covered
//! class, and every grid point of each uncovered class crossed out.
//!
//! Geometry is exact up to the final conversion to pixel coordinates.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{coset_class, enumerate_classes, FractionalPoint};
use crate::polytope::diagonal_splitting_polytope;
use crate::splitting::first_interior_representative;

const SCALE: f64 = 160.0;
const MARGIN: f64 = 40.0;

pub struct Plot {
    pub svg: String,
    pub representatives: usize,
    pub uncovered: Vec<Vec<i64>>,
}

pub fn plot_splitting_polytope(fan: &Fan, q: u32) -> Result<Plot> {
    if fan.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: fan.dim() });
    }
    let polytope = diagonal_splitting_polytope(fan);
    let bbox = polytope.bounding_box()?;
    let classes = enumerate_classes(2, q)?;
    let (lo, hi) = (bbox.lower(), bbox.upper());
    let width = (hi[0] - lo[0]) as f64 * SCALE + 2.0 * MARGIN;
    let height = (hi[1] - lo[1]) as f64 * SCALE + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - lo[0] as f64) * SCALE;
    let py = |y: f64| MARGIN + (hi[1] as f64 - y) * SCALE;
    let coord =
        |u: &FractionalPoint| (px(u.numerators()[0] as f64 / q as f64), py(u.numerators()[1] as f64 / q as f64));

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    let to_f = |r: &BigRational| r.to_f64().expect("finite");
    let vertices = polytope.vertices_2d()?;
    let path: Vec<String> = vertices.iter().map(|(x, y)| format!("{:.2},{:.2}", px(to_f(x)), py(to_f(y)))).collect();
    writeln!(
        svg,
        r##"<polygon class="polytope" points="{}" fill="#dbe9f6" stroke="#1f4e79" stroke-width="2"/>"##,
        path.join(" ")
    )
    .unwrap();
    let (ox, oy) = (px(0.0), py(0.0));
    writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}" stroke="#888" stroke-width="1"/>"##,
        px(lo[0] as f64),
        px(hi[0] as f64)
    )
    .unwrap();
    writeln!(
        svg,
        r##"<line x1="{ox:.2}" y1="{:.2}" x2="{ox:.2}" y2="{:.2}" stroke="#888" stroke-width="1"/>"##,
        py(lo[1] as f64),
        py(hi[1] as f64)
    )
    .unwrap();

    let mut reps = Vec::new();
    let mut uncovered = Vec::new();
    for class in classes.iter() {
        match first_interior_representative(&polytope, &bbox, &class) {
            Some(r) => reps.push(r),
            None => uncovered.push(class),
        }
    }
    bbox.for_each_point(q, u64::MAX, |u| {
        let (x, y) = coord(u);
        if uncovered.contains(&coset_class(u)) {
            writeln!(
                svg,
                r##"<path class="uncovered" d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="#c0392b" stroke-width="2"/>"##,
                x - 5.0, y - 5.0, x + 5.0, y + 5.0, x - 5.0, y + 5.0, x + 5.0, y - 5.0
            )
            .unwrap();
        } else {
            writeln!(svg, r##"<circle class="grid" cx="{x:.2}" cy="{y:.2}" r="2" fill="#999"/>"##).unwrap();
        }
    })?;
    for r in &reps {
        let (x, y) = coord(r);
        writeln!(
            svg,
            r##"<circle class="rep" cx="{x:.2}" cy="{y:.2}" r="5" fill="#27ae60"><title>{r}</title></circle>"##
        )
        .unwrap();
    }
    let caption = if uncovered.is_empty() {
        format!("q = {q}: every class has an interior representative")
    } else {
        let list: Vec<String> = uncovered.iter().map(|c| c.representative().to_string()).collect();
        format!("q = {q}: uncovered classes {}", list.join(" "))
    };
    writeln!(
        svg,
        r#"<text x="{MARGIN}" y="{:.0}" font-family="monospace" font-size="14">{caption}</text>"#,
        MARGIN / 2.0
    )
    .unwrap();
    svg.push_str("</svg>\n");
    Ok(Plot { svg, representatives: reps.len(), uncovered: uncovered.iter().map(|c| c.residues().to_vec()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch, projective_space};

    #[test]
    fn f2_even_q_marks_uncovered_class() {
        let plot = plot_splitting_polytope(&hirzebruch(2), 2).unwrap();
        assert_eq!(plot.uncovered, vec![vec![0, 1]]);
        assert!(plot.svg.contains(r#"class="uncovered""#));
        assert!(plot.svg.contains("uncovered classes (0, 1/2)"));
    }

    #[test]
    fn f1_highlights_one_point_per_class() {
        let plot = plot_splitting_polytope(&hirzebruch(1), 3).unwrap();
        assert_eq!(plot.representatives, 9);
        assert_eq!(plot.svg.matches(r#"class="rep""#).count(), 9);
        assert!(plot.uncovered.is_empty());
        assert_eq!(plot.svg.matches("<polygon").count(), 1);
    }

    #[test]
    fn requires_a_surface() {
        assert!(matches!(
            plot_splitting_polytope(&projective_space(3), 2),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }
}
