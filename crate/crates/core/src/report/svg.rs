//! Grouped bar chart of cluster-mean z-scores over the key features.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::CandidateReport;
use crate::profiling::FeatureStat;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 480.0;

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 140.0;
const MARGIN_TOP: f64 = 56.0;
const MARGIN_BOTTOM: f64 = 90.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

pub fn chart_path(candidate_id: &str) -> PathBuf {
    Path::new("plots").join(format!("{candidate_id}.svg"))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Smallest "nice" step (1, 2 or 5 times a power of ten) that covers
/// `extent` in at most four ticks.
fn tick_step(extent: f64) -> f64 {
    let raw = extent / 4.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

/// Renders the chart as SVG text. Bars are grouped by key feature (in the
/// order given), one bar per cluster; significant bars carry a `*`.
pub fn zscore_chart_svg(report: &CandidateReport, key_features: &[String]) -> Result<String> {
    let id = &report.spec.candidate_id;
    let results = report
        .results()
        .ok_or_else(|| Error::Parameter(format!("{id} has no results to chart")))?;
    if key_features.is_empty() {
        return Err(Error::Config("no key features to chart".into()));
    }
    let stats = &results.profile.stats;
    let mut clusters: Vec<usize> = stats.iter().map(|s| s.cluster_id).collect();
    clusters.dedup();

    let lookup = |cluster: usize, feature: &str| -> Result<&FeatureStat> {
        stats
            .iter()
            .find(|s| s.cluster_id == cluster && s.feature == feature)
            .ok_or_else(|| Error::Config(format!("key feature {feature:?} missing from the profile of {id}")))
    };
    let mut bars = Vec::with_capacity(clusters.len() * key_features.len());
    for f in key_features {
        for &c in &clusters {
            bars.push(lookup(c, f)?);
        }
    }

    let max_abs = bars.iter().map(|s| s.z_score.abs()).fold(0.0, f64::max);
    let step = tick_step(max_abs.max(1.0));
    let y_max = ((max_abs * 1.1 / step).ceil() * step).max(step);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y_of = |z: f64| MARGIN_TOP + plot_h / 2.0 - z / y_max * plot_h / 2.0;
    let zero_y = y_of(0.0);
    let group_w = plot_w / key_features.len() as f64;
    let bar_w = group_w * 0.8 / clusters.len().max(1) as f64;
    let rotate = key_features.len() > 8;

    let mut svg = String::new();
    let w = &mut svg;
    // fmt::Write into a String cannot fail.
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="22" font-size="16" font-weight="bold" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&format!("{id}: cluster mean z-scores ({} clusters)", clusters.len()))
    );
    let _ = writeln!(
        w,
        r##"<text x="{:.2}" y="40" fill="#555" text-anchor="middle">{}</text>"##,
        WIDTH / 2.0,
        escape(&format!("{} {}", report.spec.algorithm, report.spec.params_label()))
    );

    // Grid lines and y ticks.
    let ticks = (y_max / step).round() as i64;
    for t in -ticks..=ticks {
        let z = t as f64 * step;
        let y = y_of(z);
        let _ = writeln!(
            w,
            r##"<line x1="{MARGIN_LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e5e5e5"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            format_tick(z)
        );
    }
    let _ = writeln!(
        w,
        r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">z-score (population SD)</text>"#,
        MARGIN_TOP + plot_h / 2.0
    );

    // Bars.
    for (fi, feature) in key_features.iter().enumerate() {
        let group_x = MARGIN_LEFT + fi as f64 * group_w + group_w * 0.1;
        for (ci, &cluster) in clusters.iter().enumerate() {
            let s = bars[fi * clusters.len() + ci];
            let x = group_x + ci as f64 * bar_w;
            let y = y_of(s.z_score);
            let (top, height) = if s.z_score >= 0.0 { (y, zero_y - y) } else { (zero_y, y - zero_y) };
            let _ = writeln!(
                w,
                r#"<rect x="{x:.2}" y="{top:.2}" width="{bar_w:.2}" height="{height:.2}" fill="{}"><title>{}</title></rect>"#,
                PALETTE[cluster % PALETTE.len()],
                escape(&format!(
                    "cluster {cluster}, {feature}: z = {:.3}, p = {:.4}",
                    s.z_score, s.p_value
                ))
            );
            if s.significant {
                let star_y = if s.z_score >= 0.0 { top - 3.0 } else { top + height + 12.0 };
                let _ = writeln!(
                    w,
                    r#"<text x="{:.2}" y="{star_y:.2}" text-anchor="middle" font-size="14">*</text>"#,
                    x + bar_w / 2.0
                );
            }
        }
        let label_x = MARGIN_LEFT + (fi as f64 + 0.5) * group_w;
        let label_y = MARGIN_TOP + plot_h + 18.0;
        if rotate {
            let _ = writeln!(
                w,
                r#"<text transform="translate({label_x:.2} {label_y:.2}) rotate(-40)" text-anchor="end">{}</text>"#,
                escape(feature)
            );
        } else {
            let _ = writeln!(
                w,
                r#"<text x="{label_x:.2}" y="{label_y:.2}" text-anchor="middle">{}</text>"#,
                escape(feature)
            );
        }
    }

    // Zero line and axes on top of the bars.
    let _ = writeln!(
        w,
        r#"<line x1="{MARGIN_LEFT:.2}" y1="{zero_y:.2}" x2="{:.2}" y2="{zero_y:.2}" stroke="black" stroke-width="1.5"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        w,
        r#"<line x1="{MARGIN_LEFT:.2}" y1="{MARGIN_TOP:.2}" x2="{MARGIN_LEFT:.2}" y2="{:.2}" stroke="black"/>"#,
        MARGIN_TOP + plot_h
    );

    // Legend.
    let legend_x = WIDTH - MARGIN_RIGHT + 20.0;
    for (ci, &cluster) in clusters.iter().enumerate() {
        let y = MARGIN_TOP + 10.0 + ci as f64 * 20.0;
        let _ = writeln!(
            w,
            r#"<rect x="{legend_x:.2}" y="{y:.2}" width="12" height="12" fill="{}"/>"#,
            PALETTE[cluster % PALETTE.len()]
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}">cluster {cluster}</text>"#,
            legend_x + 18.0,
            y + 10.0
        );
    }
    if bars.iter().any(|s| s.significant) {
        let _ = writeln!(
            w,
            r##"<text x="{legend_x:.2}" y="{:.2}" fill="#555">* p &lt; {}</text>"##,
            MARGIN_TOP + 20.0 + clusters.len() as f64 * 20.0,
            super::format::sig6(results.profile.effective_alpha).trim_end_matches('0')
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn format_tick(z: f64) -> String {
    let s = format!("{z:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Writes `plots/<id>.svg` under `out_dir`.
pub fn render_zscore_chart(report: &CandidateReport, key_features: &[String], out_dir: &Path) -> Result<PathBuf> {
    let svg = zscore_chart_svg(report, key_features)?;
    let path = out_dir.join(chart_path(&report.spec.candidate_id));
    super::csv_out::create_parent(&path)?;
    std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nice_steps() {
        assert_eq!(tick_step(1.0), 0.5);
        assert_eq!(tick_step(3.3), 1.0);
        assert_eq!(tick_step(7.0), 2.0);
        assert_eq!(tick_step(20.0), 5.0);
    }

    #[test]
    fn tick_labels() {
        assert_eq!(format_tick(0.5), "0.5");
        assert_eq!(format_tick(-2.0), "-2");
        assert_eq!(format_tick(-0.0), "0");
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape(r#"a<b & "c""#), "a&lt;b &amp; &quot;c&quot;");
    }
}
