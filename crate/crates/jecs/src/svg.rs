//! Dependency-free SVG chart for sweep summaries: GCR lines on the left,
//! mean-power bars on the right. Output is a deterministic function of
//! the input rows.

use std::fmt::Write;

use crate::harness::SummaryRow;
use crate::util::fmt_sig9;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 440.0;
const PANEL_TOP: f64 = 70.0;
const PANEL_BOTTOM: f64 = 390.0;
const LEFT_X0: f64 = 60.0;
const LEFT_X1: f64 = 440.0;
const RIGHT_X0: f64 = 540.0;
const RIGHT_X1: f64 = 920.0;

fn fx(v: f64) -> String {
    format!("{v:.2}")
}

struct Series {
    key: String,
    color: &'static str,
    /// (category index, gcr, gcp_std_err, mean_power)
    points: Vec<(usize, f64, f64, f64)>,
}

fn nice_ceiling(max_val: f64) -> f64 {
    for c in [0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0] {
        if max_val <= c {
            return c;
        }
    }
    1.0
}

/// Render summary rows as a two-panel chart. Rows from an alpha sweep get
/// one line per procedure plus the diagonal target-GCR reference; other
/// axes get one line per (procedure, alpha) and dashed horizontal targets.
pub fn sweep_chart(rows: &[SummaryRow]) -> String {
    let alpha_axis = rows.iter().all(|r| r.axis == "alpha");
    let mut categories: Vec<String> = Vec::new();
    for r in rows {
        if !categories.contains(&r.axis_value) {
            categories.push(r.axis_value.clone());
        }
    }
    let mut series: Vec<Series> = Vec::new();
    for r in rows {
        let key = if alpha_axis {
            r.procedure.to_string()
        } else {
            format!("{} alpha={}", r.procedure, fmt_sig9(r.alpha))
        };
        let ci = categories.iter().position(|c| *c == r.axis_value).expect("seen");
        match series.iter_mut().find(|s| s.key == key) {
            Some(s) => s.points.push((ci, r.gcr, r.gcp_std_err, r.mean_power)),
            None => series.push(Series {
                color: PALETTE[series.len() % PALETTE.len()],
                key,
                points: vec![(ci, r.gcr, r.gcp_std_err, r.mean_power)],
            }),
        }
    }

    let ncat = categories.len().max(1) as f64;
    let slot = |x0: f64, x1: f64, i: usize| x0 + (i as f64 + 0.5) * (x1 - x0) / ncat;
    let mut gcr_max: f64 = 0.0;
    for s in &series {
        for &(_, g, se, _) in &s.points {
            gcr_max = gcr_max.max(g + se);
        }
    }
    for r in rows {
        gcr_max = gcr_max.max(r.alpha);
    }
    let gcr_top = nice_ceiling(gcr_max);
    let y_gcr = |v: f64| PANEL_BOTTOM - (v / gcr_top).min(1.0) * (PANEL_BOTTOM - PANEL_TOP);
    let y_pow = |v: f64| PANEL_BOTTOM - v.clamp(0.0, 1.0) * (PANEL_BOTTOM - PANEL_TOP);

    let axis_name = rows.first().map(|r| r.axis).unwrap_or("axis");
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">",
        fx(WIDTH), fx(HEIGHT), fx(WIDTH), fx(HEIGHT)
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        fx(WIDTH),
        fx(HEIGHT)
    );

    for (x0, x1, title) in [
        (LEFT_X0, LEFT_X1, "GCR"),
        (RIGHT_X0, RIGHT_X1, "Mean power"),
    ] {
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\"/>",
            fx(x0),
            fx(PANEL_TOP),
            fx(x1 - x0),
            fx(PANEL_BOTTOM - PANEL_TOP)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
            fx((x0 + x1) / 2.0),
            fx(PANEL_TOP - 10.0),
            title
        );
        for (i, c) in categories.iter().enumerate() {
            let _ = writeln!(
                svg,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#333333\">{}</text>",
                fx(slot(x0, x1, i)),
                fx(PANEL_BOTTOM + 16.0),
                c
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#333333\">{}</text>",
            fx((x0 + x1) / 2.0),
            fx(PANEL_BOTTOM + 34.0),
            axis_name
        );
    }

    // y ticks
    for j in 0..=4 {
        let frac = j as f64 / 4.0;
        let v = gcr_top * frac;
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" fill=\"#333333\">{:.2}</text>",
            fx(LEFT_X0 - 6.0),
            fx(y_gcr(v) + 4.0),
            v
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" fill=\"#333333\">{:.2}</text>",
            fx(RIGHT_X0 - 6.0),
            fx(y_pow(frac) + 4.0),
            frac
        );
    }

    // target-GCR reference
    if alpha_axis {
        let mut pts = Vec::new();
        for (i, c) in categories.iter().enumerate() {
            if let Ok(a) = c.parse::<f64>() {
                pts.push(format!("{},{}", fx(slot(LEFT_X0, LEFT_X1, i)), fx(y_gcr(a))));
            }
        }
        if pts.len() > 1 {
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"5,4\"/>",
                pts.join(" ")
            );
        }
    } else {
        let mut alphas: Vec<f64> = Vec::new();
        for r in rows {
            if !alphas.iter().any(|a| (a - r.alpha).abs() < 1e-12) {
                alphas.push(r.alpha);
            }
        }
        for a in alphas {
            let _ = writeln!(
                svg,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-dasharray=\"5,4\"/>",
                fx(LEFT_X0),
                fx(y_gcr(a)),
                fx(LEFT_X1),
                fx(y_gcr(a))
            );
        }
    }

    // GCR lines with standard-error whiskers
    for s in &series {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(i, g, _, _)| format!("{},{}", fx(slot(LEFT_X0, LEFT_X1, i)), fx(y_gcr(g))))
            .collect();
        if pts.len() > 1 {
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
                pts.join(" "),
                s.color
            );
        }
        for &(i, g, se, _) in &s.points {
            let x = slot(LEFT_X0, LEFT_X1, i);
            if se > 0.0 {
                let _ = writeln!(
                    svg,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>",
                    fx(x),
                    fx(y_gcr(g - se)),
                    fx(x),
                    fx(y_gcr(g + se)),
                    s.color
                );
            }
            let _ = writeln!(
                svg,
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>",
                fx(x),
                fx(y_gcr(g)),
                s.color
            );
        }
    }

    // power bars, grouped per category
    let nseries = series.len().max(1) as f64;
    let group_w = (RIGHT_X1 - RIGHT_X0) / ncat;
    let bar_w = group_w * 0.8 / nseries;
    for (si, s) in series.iter().enumerate() {
        for &(i, _, _, p) in &s.points {
            let x = RIGHT_X0 + i as f64 * group_w + group_w * 0.1 + si as f64 * bar_w;
            let y = y_pow(p);
            let _ = writeln!(
                svg,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                fx(x),
                fx(y),
                fx(bar_w),
                fx(PANEL_BOTTOM - y),
                s.color
            );
        }
    }

    // legend
    let mut lx = LEFT_X0;
    for s in &series {
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>",
            fx(lx),
            fx(14.0),
            s.color
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" fill=\"#333333\">{}</text>",
            fx(lx + 14.0),
            fx(23.0),
            s.key
        );
        lx += 14.0 + 8.0 * s.key.len() as f64 + 20.0;
    }

    svg.push_str("</svg>\n");
    svg
}
