//! Space-time diagrams: position on the horizontal axis, time growing
//! downward, one polyline per robot and a marker per meeting.

use std::fmt::Write as _;

use byzline_core::Plan;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

struct Frame {
    x0: f64,
    x1: f64,
    t1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, t: f64) -> f64 {
        MARGIN + t / self.t1 * (HEIGHT - 2.0 * MARGIN)
    }
}

pub fn render(plan: &Plan) -> String {
    let xs = plan.trajectories().iter().flat_map(|t| t.breakpoints().iter().map(|(_, x)| x.to_f64()));
    let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if x1 - x0 < 1e-9 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let horizon = plan.horizon().to_f64();
    let frame = Frame { x0, x1, t1: if horizon > 0.0 { horizon } else { 1.0 } };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{left} {top} H{right} M{left} {top} V{bottom}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(out, r#"<text x="{left}" y="{:.1}" text-anchor="middle">{x0:.3}</text>"#, top - 8.0);
    let _ = writeln!(out, r#"<text x="{right}" y="{:.1}" text-anchor="middle">{x1:.3}</text>"#, top - 8.0);
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">position</text>"#, WIDTH / 2.0, top - 24.0);
    let _ = writeln!(out, r#"<text x="{:.1}" y="{bottom}" text-anchor="end">t={horizon:.3}</text>"#, left - 4.0);
    let _ = writeln!(out, r#"<text x="{:.1}" y="{top}" text-anchor="end">t=0</text>"#, left - 4.0);

    for (i, traj) in plan.trajectories().iter().enumerate() {
        let mut points: Vec<String> = traj
            .breakpoints()
            .iter()
            .map(|(t, x)| format!("{:.2},{:.2}", frame.px(x.to_f64()), frame.py(t.to_f64())))
            .collect();
        if traj.horizon().to_f64() < horizon {
            let x = traj.final_position().to_f64();
            points.push(format!("{:.2},{:.2}", frame.px(x), frame.py(horizon)));
        }
        if points.len() == 1 {
            points.push(points[0].clone());
        }
        let _ = writeln!(
            out,
            r#"<polyline data-robot="{i}" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            points.join(" "),
            PALETTE[i % PALETTE.len()]
        );
    }
    for e in plan.events() {
        let robots: Vec<String> = e.robots.iter().map(|r| r.0.to_string()).collect();
        let _ = writeln!(
            out,
            r#"<circle class="meet" cx="{:.2}" cy="{:.2}" r="3" fill="black"><title>t={} x={} robots {}</title></circle>"#,
            frame.px(e.position.to_f64()),
            frame.py(e.time.to_f64()),
            e.time,
            e.position,
            robots.join(",")
        );
    }
    out.push_str("</svg>\n");
    out
}
