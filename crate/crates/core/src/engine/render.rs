//! SVG drawings of rank-three chamber complexes on an affine cross-section of
//! the effective cone.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Chart, Point2};
use crate::cone::{LatticeVector, RationalCone};
use crate::error::{Error, Result};
use crate::models::CoxPresentation;
use crate::poly::SamplingOptions;

use super::cones::{effective_cone, movable_cone, nef_cone};
use super::git::mori_chamber_decomposition;

pub const MIN_SIZE: u32 = 200;
pub const MAX_SIZE: u32 = 4000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub size: u32,
    /// Label generator rays.
    pub ray_labels: bool,
    /// Label the extra movable rays `P_m = (m(m-1), m(2-m), (m-1)(2-m))`.
    pub p_labels: bool,
    pub nef: bool,
    pub mov: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { size: 800, ray_labels: true, p_labels: true, nef: true, mov: true }
    }
}

fn p_ray(m: i64) -> LatticeVector {
    LatticeVector::from([m * (m - 1), m * (2 - m), (m - 1) * (2 - m)]).primitive()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Canvas {
    chart: Chart,
    min: (f64, f64),
    scale: f64,
    margin: f64,
    size: f64,
}

impl Canvas {
    fn to_f64(p: &Point2) -> (f64, f64) {
        let f = |x: &BigRational| x.to_f64().unwrap_or(0.0);
        (f(&p.0), f(&p.1))
    }

    fn new(chart: Chart, outline: &[Point2], size: u32) -> Canvas {
        let pts: Vec<(f64, f64)> = outline.iter().map(Self::to_f64).collect();
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in &pts {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let size = size as f64;
        let margin = size * 0.08;
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(f64::EPSILON);
        Canvas { chart, min: lo, scale: (size - 2.0 * margin) / span, margin, size }
    }

    fn pixel(&self, v: &LatticeVector) -> (f64, f64) {
        let (x, y) = Self::to_f64(&self.chart.project(v));
        let px = self.margin + (x - self.min.0) * self.scale;
        let py = self.size - self.margin - (y - self.min.1) * self.scale;
        (px, py)
    }

    /// Vertices of a pointed cone's cross-section in counterclockwise order.
    fn polygon(&self, c: &RationalCone) -> String {
        let mut pts: Vec<(f64, f64)> = c.rays().iter().map(|r| self.pixel(r)).collect();
        let n = pts.len() as f64;
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
        pts.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
        pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
    }
}

/// Draws the Mori chambers of a rank-three model: one `polygon.chamber` per
/// chamber, every wall, the effective cone outline, optional nef and movable
/// outlines and ray labels.
pub fn render_svg(model: &CoxPresentation, spec: &RenderSpec, sampling: &SamplingOptions) -> Result<String> {
    if model.rank() != 3 {
        return Err(Error::Unsupported(format!("drawing needs rank 3, {} has rank {}", model.id, model.rank())));
    }
    if !(MIN_SIZE..=MAX_SIZE).contains(&spec.size) {
        return Err(Error::InvalidParameter(format!(
            "image size {} outside {MIN_SIZE}..={MAX_SIZE}",
            spec.size
        )));
    }
    let eff = effective_cone(model)?;
    let mcd = mori_chamber_decomposition(model, sampling)?;
    let chart = Chart::for_support(&eff)?;
    let outline: Vec<Point2> = eff.rays().iter().map(|r| chart.project(r)).collect();
    let canvas = Canvas::new(chart, &outline, spec.size);
    let s = spec.size;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&model.id));
    let _ = writeln!(
        out,
        "<style>.chamber{{fill:#e8eef7;stroke:none}} .wall{{stroke:#445;stroke-width:1}} \
         .eff{{fill:none;stroke:#000;stroke-width:2}} .nef{{fill:none;stroke:#c33;stroke-width:3}} \
         .mov{{fill:none;stroke:#36c;stroke-width:3;stroke-dasharray:8 4}} \
         text{{font-family:sans-serif;font-size:{}px}}</style>",
        (s / 40).max(8)
    );
    let _ = writeln!(out, r#"<g id="chambers">"#);
    for (i, c) in mcd.complex.chambers().iter().enumerate() {
        let _ = writeln!(out, r#"<polygon class="chamber" data-index="{i}" points="{}"/>"#, canvas.polygon(c));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g id="walls">"#);
    for w in mcd.complex.walls() {
        if let [a, b] = w.cone.rays() {
            let (p, q) = (canvas.pixel(a), canvas.pixel(b));
            let _ = writeln!(
                out,
                r#"<line class="wall" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                p.0, p.1, q.0, q.1
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<polygon class="eff" points="{}"/>"#, canvas.polygon(&eff));
    if spec.mov {
        let _ = writeln!(out, r#"<polygon class="mov" points="{}"/>"#, canvas.polygon(&movable_cone(model)?));
    }
    if spec.nef {
        let _ = writeln!(out, r#"<polygon class="nef" points="{}"/>"#, canvas.polygon(&nef_cone(model, sampling)?));
    }

    let mut labels: Vec<(LatticeVector, String)> = Vec::new();
    if spec.ray_labels {
        for g in &model.generators {
            let d = g.degree.primitive();
            match labels.iter_mut().find(|(v, _)| *v == d) {
                Some((_, l)) => {
                    l.push(',');
                    l.push_str(&g.label);
                }
                None => labels.push((d, g.label.clone())),
            }
        }
    }
    if spec.p_labels && model.basis == ["H", "E1", "E2"] {
        let mut vertices: Vec<LatticeVector> =
            mcd.complex.chambers().iter().flat_map(|c| c.rays().iter().cloned()).collect();
        vertices.sort();
        vertices.dedup();
        for v in vertices {
            if let Some(m) = (3..=64).find(|&m| p_ray(m) == v) {
                if !labels.iter().any(|(x, _)| *x == v) {
                    labels.push((v, format!("P{m}")));
                }
            }
        }
    }
    let _ = writeln!(out, r#"<g id="labels">"#);
    let centre = {
        let pts: Vec<(f64, f64)> = eff.rays().iter().map(|r| canvas.pixel(r)).collect();
        let n = pts.len() as f64;
        (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n)
    };
    for (v, text) in &labels {
        let (x, y) = canvas.pixel(v);
        // push the label away from the centre of the drawing
        let (dx, dy) = (x - centre.0, y - centre.1);
        let len = (dx * dx + dy * dy).sqrt().max(1.0);
        let off = s as f64 / 50.0;
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"/><text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x + dx / len * off,
            y + dy / len * off,
            escape(text)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

/// Number of `polygon.chamber` elements in a drawing.
pub fn count_chamber_polygons(svg: &str) -> usize {
    svg.matches(r#"<polygon class="chamber""#).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{collineation_model, thmex_model, Thmex};

    #[test]
    fn chamber_polygons() {
        let m = collineation_model(3, 3, 2).unwrap();
        let svg = render_svg(&m, &RenderSpec::default(), &Default::default()).unwrap();
        assert_eq!(count_chamber_polygons(&svg), 9);
        assert!(svg.contains(">P3<"));
        assert!(svg.contains(">D4<"));
        assert!(svg.contains(r#"class="nef""#));
    }

    #[test]
    fn labels_can_be_switched_off() {
        let m = collineation_model(4, 4, 2).unwrap();
        let spec = RenderSpec { ray_labels: false, p_labels: false, ..RenderSpec::default() };
        let svg = render_svg(&m, &spec, &Default::default()).unwrap();
        assert_eq!(count_chamber_polygons(&svg), 14);
        assert!(!svg.contains("<text"));
    }

    #[test]
    fn rejects_rank_two_and_bad_sizes() {
        let z = thmex_model(Thmex::Z);
        assert!(matches!(render_svg(&z, &RenderSpec::default(), &Default::default()), Err(Error::Unsupported(_))));
        let m = collineation_model(3, 3, 2).unwrap();
        let spec = RenderSpec { size: 100, ..RenderSpec::default() };
        assert!(matches!(render_svg(&m, &spec, &Default::default()), Err(Error::InvalidParameter(_))));
    }
}
