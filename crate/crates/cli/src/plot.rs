//! Static SVG plots: log10 survival against t², with the bound curves at the
//! default and fitted constants.

use std::fmt::Write as _;

use tensorconc::montecarlo::TailReport;

const W: f64 = 640.0;
const H: f64 = 440.0;
const MARGIN: f64 = 60.0;

struct Axes {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Axes {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min) * (W - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        H - MARGIN - (v - self.y_min) / (self.y_max - self.y_min) * (H - 2.0 * MARGIN)
    }
}

fn polyline(axes: &Axes, pts: &[(f64, f64)], style: &str) -> String {
    if pts.is_empty() {
        return String::new();
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", axes.x(*x), axes.y(*y)))
        .collect();
    format!(
        "<polyline fill=\"none\" {style} points=\"{}\"/>\n",
        coords.join(" ")
    )
}

/// Empirical log-survival (dots + line) vs t², with bound lines at the
/// default c and, when available, the fitted ĉ.
pub fn tail_plot(report: &TailReport) -> String {
    let log10 = |v: f64| v.log10();
    let empirical: Vec<(f64, f64)> = report
        .points
        .iter()
        .filter(|p| p.survival > 0.0)
        .map(|p| (p.threshold * p.threshold, log10(p.survival)))
        .collect();
    let default_curve: Vec<(f64, f64)> = report
        .points
        .iter()
        .filter(|p| p.bound_default_c > 0.0)
        .map(|p| (p.threshold * p.threshold, log10(p.bound_default_c)))
        .collect();
    let fitted_curve: Vec<(f64, f64)> = report
        .points
        .iter()
        .filter_map(|p| {
            p.bound_fitted_c
                .filter(|&b| b > 0.0)
                .map(|b| (p.threshold * p.threshold, log10(b)))
        })
        .collect();

    let all: Vec<&(f64, f64)> = empirical
        .iter()
        .chain(&default_curve)
        .chain(&fitted_curve)
        .collect();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &all {
        x_min = x_min.min(*x);
        x_max = x_max.max(*x);
        y_min = y_min.min(*y);
        y_max = y_max.max(*y);
    }
    if all.is_empty() || x_min == x_max {
        x_min = 0.0;
        x_max = 1.0;
    }
    if all.is_empty() || y_min == y_max {
        y_min = -1.0;
        y_max = 0.0;
    }
    let axes = Axes {
        x_min,
        x_max,
        y_min: y_min - 0.2,
        y_max: y_max + 0.2,
    };

    let slug = report.metadata.config.experiment.slug();
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    );
    let _ = write!(
        svg,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    );
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">threshold²</text>\n\
         <text x=\"16\" y=\"{}\" font-size=\"13\" transform=\"rotate(-90 16 {})\" \
         text-anchor=\"middle\">log10 survival</text>\n\
         <text x=\"{}\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">{slug}: empirical survival vs bound</text>\n",
        W / 2.0,
        H - 18.0,
        H / 2.0,
        H / 2.0,
        W / 2.0
    );
    // axis extents
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"11\">{:.3}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.3}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>\n",
        MARGIN,
        H - MARGIN + 16.0,
        axes.x_min,
        W - MARGIN,
        H - MARGIN + 16.0,
        axes.x_max,
        MARGIN - 6.0,
        H - MARGIN,
        axes.y_min,
        MARGIN - 6.0,
        MARGIN + 4.0,
        axes.y_max
    );

    svg.push_str(&polyline(
        &axes,
        &empirical,
        "stroke=\"#1f77b4\" stroke-width=\"2\"",
    ));
    for (x, y) in &empirical {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#1f77b4\"/>",
            axes.x(*x),
            axes.y(*y)
        );
    }
    svg.push_str(&polyline(
        &axes,
        &default_curve,
        "stroke=\"#d62728\" stroke-width=\"1.5\"",
    ));
    svg.push_str(&polyline(
        &axes,
        &fitted_curve,
        "stroke=\"#2ca02c\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"",
    ));

    let legend_x = W - MARGIN - 190.0;
    let _ = write!(
        svg,
        "<text x=\"{legend_x}\" y=\"{y0}\" font-size=\"12\" fill=\"#1f77b4\">empirical survival</text>\n\
         <text x=\"{legend_x}\" y=\"{y1}\" font-size=\"12\" fill=\"#d62728\">bound at default c</text>\n\
         <text x=\"{legend_x}\" y=\"{y2}\" font-size=\"12\" fill=\"#2ca02c\">bound at fitted ĉ</text>\n",
        y0 = MARGIN + 16.0,
        y1 = MARGIN + 32.0,
        y2 = MARGIN + 48.0
    );
    svg.push_str("</svg>\n");
    svg
}
