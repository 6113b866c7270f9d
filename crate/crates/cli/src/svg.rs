//! Standalone SVG 1.1 scatterplot writer for unit-square data. Output is
//! text-built with fixed formatting, so identical inputs produce
//! byte-identical documents.

use std::fmt::Write as _;

const PAD_LEFT: f64 = 46.0;
const PAD_RIGHT: f64 = 12.0;
const PAD_TOP: f64 = 36.0;
const PAD_BOTTOM: f64 = 44.0;

/// Layout and styling for one scatter panel.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub title: String,
    /// SVG color keyword or `#rrggbb` value for the markers.
    pub point_color: String,
    /// Canvas size in pixels; at least 100×100.
    pub width: u32,
    pub height: u32,
    pub x_label: String,
    pub y_label: String,
}

impl PlotSpec {
    pub fn new(title: &str) -> Self {
        PlotSpec {
            title: title.to_string(),
            point_color: "blue".to_string(),
            width: 480,
            height: 480,
            x_label: "u".to_string(),
            y_label: "v".to_string(),
        }
    }

    pub fn with_color(mut self, color: &str) -> Self {
        self.point_color = color.to_string();
        self
    }

    fn validate(&self) -> Result<(), String> {
        if self.width < 100 || self.height < 100 {
            return Err(format!(
                "canvas must be at least 100x100 pixels, got {}x{}",
                self.width, self.height
            ));
        }
        if self.point_color.is_empty()
            || !self
                .point_color
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '#')
        {
            return Err(format!(
                "point color `{}` is not a plain SVG color token",
                self.point_color
            ));
        }
        Ok(())
    }
}

fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn render_panel(out: &mut String, spec: &PlotSpec, points: &[(f64, f64)], x_offset: f64) {
    let w = spec.width as f64;
    let h = spec.height as f64;
    let box_w = w - PAD_LEFT - PAD_RIGHT;
    let box_h = h - PAD_TOP - PAD_BOTTOM;
    let (x0, y0) = (x_offset + PAD_LEFT, PAD_TOP);

    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        x_offset + w / 2.0,
        escape_text(&spec.title)
    );
    let _ = writeln!(
        out,
        r##"  <rect x="{x0:.1}" y="{y0:.1}" width="{box_w:.1}" height="{box_h:.1}" fill="none" stroke="#333333" stroke-width="1"/>"##
    );
    // Corner tick labels for the unit square.
    let _ = writeln!(
        out,
        r#"  <text x="{x0:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">0</text>"#,
        y0 + box_h + 16.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">1</text>"#,
        x0 + box_w,
        y0 + box_h + 16.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">0</text>"#,
        x0 - 6.0,
        y0 + box_h + 4.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">1</text>"#,
        x0 - 6.0,
        y0 + 4.0
    );
    // Axis labels.
    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        x0 + box_w / 2.0,
        h - 12.0,
        escape_text(&spec.x_label)
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        x_offset + 16.0,
        y0 + box_h / 2.0,
        x_offset + 16.0,
        y0 + box_h / 2.0,
        escape_text(&spec.y_label)
    );
    // Markers, clipped to the unit square.
    for &(u, v) in points {
        let cu = u.clamp(0.0, 1.0);
        let cv = v.clamp(0.0, 1.0);
        let cx = x0 + cu * box_w;
        let cy = y0 + (1.0 - cv) * box_h;
        let _ = writeln!(
            out,
            r#"  <circle cx="{cx:.2}" cy="{cy:.2}" r="2" fill="{}" fill-opacity="0.5"/>"#,
            spec.point_color
        );
    }
}

/// Renders one or more scatter panels side by side as a standalone SVG 1.1
/// document.
pub fn render_panels(panels: &[(PlotSpec, Vec<(f64, f64)>)]) -> Result<String, String> {
    if panels.is_empty() {
        return Err("nothing to plot: no panels".to_string());
    }
    for (spec, _) in panels {
        spec.validate()?;
    }
    let total_w: u32 = panels.iter().map(|(s, _)| s.width).sum();
    let total_h: u32 = panels.iter().map(|(s, _)| s.height).max().unwrap();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    let _ = writeln!(
        out,
        r#"  <rect x="0" y="0" width="{total_w}" height="{total_h}" fill="white"/>"#
    );
    let mut x_offset = 0.0;
    for (spec, points) in panels {
        render_panel(&mut out, spec, points, x_offset);
        x_offset += spec.width as f64;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders a single scatter panel.
pub fn render_scatter(spec: &PlotSpec, points: &[(f64, f64)]) -> Result<String, String> {
    render_panels(std::slice::from_ref(&(spec.clone(), points.to_vec())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marker_count_matches_data() {
        let spec = PlotSpec::new("Test");
        let pts = vec![(0.1, 0.9), (0.5, 0.5), (0.9, 0.1)];
        let doc = render_scatter(&spec, &pts).unwrap();
        assert_eq!(doc.matches("<circle").count(), 3);
        assert!(doc.starts_with("<?xml"));
        assert!(doc.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_data_still_renders_axes() {
        let doc = render_scatter(&PlotSpec::new("Empty"), &[]).unwrap();
        assert_eq!(doc.matches("<circle").count(), 0);
        assert!(doc.contains("<rect"));
        assert!(doc.contains("Empty"));
    }

    #[test]
    fn out_of_square_points_are_clipped_into_the_frame() {
        let spec = PlotSpec::new("Clipped");
        let doc = render_scatter(&spec, &[(-0.5, 2.0)]).unwrap();
        // Clamped to (0, 1): marker sits at the frame's top-left corner.
        assert!(doc.contains(r#"<circle cx="46.00" cy="36.00""#), "{doc}");
    }

    #[test]
    fn titles_are_xml_escaped() {
        let doc = render_scatter(&PlotSpec::new("a < b & c"), &[]).unwrap();
        assert!(doc.contains("a &lt; b &amp; c"));
    }

    #[test]
    fn rejects_tiny_canvas_and_markup_colors() {
        let mut small = PlotSpec::new("x");
        small.width = 50;
        assert!(render_scatter(&small, &[]).is_err());
        let bad = PlotSpec::new("x").with_color("\"/><script>");
        assert!(render_scatter(&bad, &[]).is_err());
    }

    #[test]
    fn panels_are_offset_side_by_side() {
        let a = (PlotSpec::new("A"), vec![(0.0, 1.0)]);
        let b = (PlotSpec::new("B"), vec![(0.0, 1.0)]);
        let doc = render_panels(&[a, b]).unwrap();
        assert!(doc.contains(r#"width="960""#));
        // Same point, second panel shifted by one canvas width.
        assert!(doc.contains(r#"<circle cx="46.00""#));
        assert!(doc.contains(r#"<circle cx="526.00""#));
    }
}
