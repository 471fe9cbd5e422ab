//! SVG 1.1 figures of colorings, with an optional triangle overlay.

use std::fmt::Write;

use crate::colorings::{Coloring, Color, PlaneColoring};
use crate::geom::{Point, Region};

/// Sutherland–Hodgman clip of `poly` to `{p : n·p ≥ c}`.
fn clip_half_plane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    for k in 0..poly.len() {
        let cur = poly[k];
        let next = poly[(k + 1) % poly.len()];
        let (vc, vn) = (n.dot(cur) - c, n.dot(next) - c);
        if vc >= 0.0 {
            out.push(cur);
        }
        if (vc >= 0.0) != (vn >= 0.0) {
            out.push(cur.lerp(next, vc / (vc - vn)));
        }
    }
    out
}

fn clip_to_region(poly: &[Point], r: &Region) -> Vec<Point> {
    let mut p = poly.to_vec();
    for (n, c) in [
        (Point::new(1.0, 0.0), r.x0),
        (Point::new(-1.0, 0.0), -r.x1),
        (Point::new(0.0, 1.0), r.y0),
        (Point::new(0.0, -1.0), -r.y1),
    ] {
        if p.is_empty() {
            break;
        }
        p = clip_half_plane(&p, n, c);
    }
    p
}

struct Canvas<'a> {
    region: &'a Region,
    ppu: f64,
    out: String,
}

impl Canvas<'_> {
    fn px(&self, p: Point) -> (f64, f64) {
        ((p.x - self.region.x0) * self.ppu, (self.region.y1 - p.y) * self.ppu)
    }

    fn polygon(&mut self, class: &str, poly: &[Point]) {
        if poly.len() < 3 {
            return;
        }
        let pts: Vec<String> = poly
            .iter()
            .map(|&p| {
                let (x, y) = self.px(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(self.out, r#"<polygon class="{class}" points="{}"/>"#, pts.join(" ")).unwrap();
    }

    fn rect(&mut self, class: &str, lo: Point, hi: Point) {
        let (x0, y1) = self.px(lo);
        let (x1, y0) = self.px(hi);
        writeln!(
            self.out,
            r#"<rect class="{class}" x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}"/>"#,
            x1 - x0,
            y1 - y0
        )
        .unwrap();
    }
}

/// Renders `coloring` over `region` at `ppu` pixels per unit. Black regions
/// are filled dark, white regions light, boundaries stroked.
pub fn render_svg(coloring: &Coloring, region: &Region, ppu: f64, overlay: Option<[Point; 3]>) -> String {
    let (w, h) = (region.width() * ppu, region.height() * ppu);
    let mut cv = Canvas { region, ppu, out: String::new() };
    writeln!(cv.out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        cv.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    )
    .unwrap();
    cv.out.push_str(
        "<style>.white{fill:#f2f2f2}.black{fill:#262626}.boundary{stroke:#d04020;stroke-width:1.5;fill:none}\
         .witness{stroke:#2060d0;stroke-width:2;fill:none}.vertex{fill:#2060d0}</style>\n",
    );
    cv.rect("white", Point::new(region.x0, region.y0), Point::new(region.x1, region.y1));

    match coloring {
        Coloring::Strip(s) => {
            let width = s.strip_width();
            let lo = (region.y0 / width).floor() as i64;
            let hi = (region.y1 / width).ceil() as i64;
            for j in lo..hi {
                let (y0, y1) = (j as f64 * width, (j + 1) as f64 * width);
                if j.rem_euclid(2) != 0 || y1 <= region.y0 || y0 >= region.y1 {
                    continue;
                }
                cv.rect("black", Point::new(region.x0, y0.max(region.y0)), Point::new(region.x1, y1.min(region.y1)));
            }
        }
        Coloring::Zebra(z) => {
            for i in z.curves_meeting(region) {
                if z.parity_rule().color_of(i) == Color::Black {
                    let poly = clip_to_region(&z.band_polygon(i, region), region);
                    cv.polygon("black", &poly);
                }
            }
        }
        Coloring::HalfPlane(hp) => {
            let n = hp.normal().as_point();
            let rect = region.corners().to_vec();
            let poly = match hp.closed_color() {
                Color::Black => clip_half_plane(&rect, n, hp.offset()),
                Color::White => clip_half_plane(&rect, -n, -hp.offset()),
            };
            cv.polygon("black", &poly);
        }
        Coloring::Polygonal(pc) => {
            // One rectangle per horizontal run of black pixel centers.
            let (nx, ny) = (w.ceil() as usize, h.ceil() as usize);
            for row in 0..ny {
                let y = region.y1 - (row as f64 + 0.5) / ppu;
                let mut run: Option<usize> = None;
                for col in 0..=nx {
                    let black = col < nx && pc.color(Point::new(region.x0 + (col as f64 + 0.5) / ppu, y)) == Color::Black;
                    match (black, run) {
                        (true, None) => run = Some(col),
                        (false, Some(start)) => {
                            let lo = Point::new(region.x0 + start as f64 / ppu, region.y1 - (row + 1) as f64 / ppu);
                            let hi = Point::new((region.x0 + col as f64 / ppu).min(region.x1), region.y1 - row as f64 / ppu);
                            cv.rect("black", lo, hi);
                            run = None;
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    for s in coloring.boundary_segments(region) {
        let (x0, y0) = cv.px(s.p);
        let (x1, y1) = cv.px(s.q);
        writeln!(cv.out, r#"<path class="boundary" d="M {x0:.3} {y0:.3} L {x1:.3} {y1:.3}"/>"#).unwrap();
    }

    if let Some(tri) = overlay {
        cv.polygon("witness", &tri);
        for v in tri {
            let (x, y) = cv.px(v);
            writeln!(cv.out, r#"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="4"/>"#).unwrap();
        }
    }
    cv.out.push_str("</svg>\n");
    cv.out
}
