//! SVG scatter plots of fronts.

use std::fmt::Write as _;

use crate::io::FrontDoc;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

struct Frame {
    x0: u64,
    x1: u64,
    y0: u64,
    y1: u64,
}

impl Frame {
    fn covering<'a>(docs: impl Iterator<Item = &'a FrontDoc>) -> Option<Frame> {
        let mut pts = docs.flat_map(|d| d.points.iter().map(|p| (p.f1, p.f2))).peekable();
        pts.peek()?;
        let mut f = Frame {
            x0: u64::MAX,
            x1: 0,
            y0: u64::MAX,
            y1: 0,
        };
        for (x, y) in pts {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        Some(f)
    }

    fn scale(v: u64, lo: u64, hi: u64, a: f64, b: f64) -> f64 {
        if hi == lo {
            (a + b) / 2.0
        } else {
            a + (v - lo) as f64 / (hi - lo) as f64 * (b - a)
        }
    }

    fn x(&self, v: u64) -> f64 {
        Self::scale(v, self.x0, self.x1, LEFT + 20.0, WIDTH - RIGHT - 20.0)
    }

    fn y(&self, v: u64) -> f64 {
        Self::scale(v, self.y0, self.y1, HEIGHT - BOTTOM - 20.0, TOP + 20.0)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn series(out: &mut String, frame: &Frame, doc: &FrontDoc, square: bool) {
    let mut pts: Vec<(u64, u64)> = doc.objectives();
    pts.sort_unstable();
    let (color, dash) = if square { ("#d95f02", " stroke-dasharray=\"6 4\"") } else { ("#1b6ca8", "") };
    let coords: Vec<String> = pts
        .iter()
        .map(|&(a, b)| format!("{:.2},{:.2}", frame.x(a), frame.y(b)))
        .collect();
    if pts.len() > 1 {
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
            coords.join(" ")
        );
    }
    for &(a, b) in &pts {
        let (x, y) = (frame.x(a), frame.y(b));
        if square {
            let _ = writeln!(
                out,
                "<rect class=\"marker overlay\" x=\"{:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"><title>({a}, {b})</title></rect>",
                x - 5.0,
                y - 5.0
            );
        } else {
            let _ = writeln!(
                out,
                "<circle class=\"marker primary\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"><title>({a}, {b})</title></circle>"
            );
        }
    }
}

/// Renders `front`, and optionally a second front with square markers.
/// Output bytes depend only on the inputs.
pub fn render_svg(front: &FrontDoc, overlay: Option<&FrontDoc>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let mut title = format!("{} ({})", escape(&front.instance), escape(&front.method));
    if let Some(o) = overlay {
        title.push_str(&format!(" vs {}", escape(&o.method)));
    }
    let _ = writeln!(out, "<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">Pareto front: {title}</text>", WIDTH / 2.0);

    let (bx, by) = (HEIGHT - BOTTOM, LEFT);
    let _ = writeln!(out, "<line x1=\"{LEFT}\" y1=\"{bx}\" x2=\"{}\" y2=\"{bx}\" stroke=\"black\"/>", WIDTH - RIGHT);
    let _ = writeln!(out, "<line x1=\"{by}\" y1=\"{TOP}\" x2=\"{by}\" y2=\"{bx}\" stroke=\"black\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">f1: total travel time</text>",
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">f2: compactness</text>",
        (TOP + HEIGHT - BOTTOM) / 2.0
    );

    match Frame::covering(std::iter::once(front).chain(overlay)) {
        None => {
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">empty front</text>",
                WIDTH / 2.0,
                HEIGHT / 2.0
            );
        }
        Some(frame) => {
            for (v, anchor) in [(frame.x0, "start"), (frame.x1, "end")] {
                let _ = writeln!(
                    out,
                    "<text class=\"tick\" x=\"{:.2}\" y=\"{}\" text-anchor=\"{anchor}\">{v}</text>",
                    frame.x(v),
                    bx + 18.0
                );
                if frame.x0 == frame.x1 {
                    break;
                }
            }
            for v in [frame.y0, frame.y1] {
                let _ = writeln!(
                    out,
                    "<text class=\"tick\" x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{v}</text>",
                    by - 6.0,
                    frame.y(v) + 4.0
                );
                if frame.y0 == frame.y1 {
                    break;
                }
            }
            series(&mut out, &frame, front, false);
            if let Some(o) = overlay {
                series(&mut out, &frame, o, true);
            }
        }
    }

    let lx = WIDTH - RIGHT - 150.0;
    let _ = writeln!(
        out,
        "<circle cx=\"{lx}\" cy=\"{TOP}\" r=\"4\" fill=\"#1b6ca8\"/><text x=\"{}\" y=\"{}\">{} ({} points)</text>",
        lx + 10.0,
        TOP + 4.0,
        escape(&front.method),
        front.points.len()
    );
    if let Some(o) = overlay {
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"#d95f02\" stroke-width=\"2\"/><text x=\"{}\" y=\"{}\">{} ({} points)</text>",
            lx - 5.0,
            TOP + 13.0,
            lx + 10.0,
            TOP + 22.0,
            escape(&o.method),
            o.points.len()
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::PointDoc;

    fn doc(method: &str, pts: &[(u64, u64)]) -> FrontDoc {
        FrontDoc {
            instance: "t".into(),
            method: method.into(),
            points: pts
                .iter()
                .map(|&(f1, f2)| PointDoc {
                    f1,
                    f2,
                    routes: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn single_point() {
        let svg = render_svg(&doc("econ", &[(10, 0)]), None);
        assert_eq!(svg.matches("class=\"marker primary\"").count(), 1);
        assert!(svg.contains("<title>(10, 0)</title>"));
        assert!(!svg.contains("<polyline"));
    }

    #[test]
    fn overlay_markers() {
        let e = doc("econ", &[(20, 0), (15, 9), (17, 3)]);
        let w = doc("wsum", &[(20, 0), (15, 9)]);
        let svg = render_svg(&e, Some(&w));
        assert_eq!(svg.matches("class=\"marker primary\"").count(), 3);
        assert_eq!(svg.matches("class=\"marker overlay\"").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg, render_svg(&e, Some(&w)));
    }

    #[test]
    fn empty() {
        let svg = render_svg(&doc("econ", &[]), None);
        assert!(svg.contains("empty front"));
        assert!(!svg.contains("marker"));
    }
}
