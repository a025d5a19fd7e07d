//! Hand-rolled minimal SVG 1.1 output: polylines, lines, circles, text.
//! No plotting dependency; output is deterministic up to the fixed
//! generator comment below.

pub const GENERATOR_COMMENT: &str = "<!-- generated by vgroove svg v1 -->";

pub struct SvgDoc {
    width: f64,
    height: f64,
    body: String,
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

impl SvgDoc {
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            body: String::new(),
        }
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y)))
            .collect();
        self.body.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{}\"/>\n",
            pts.join(" "),
            fmt(width)
        ));
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        self.body.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>\n",
            fmt(a.0),
            fmt(a.1),
            fmt(b.0),
            fmt(b.1),
            fmt(width)
        ));
    }

    pub fn dashed_line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        self.body.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\" stroke-dasharray=\"4 3\"/>\n",
            fmt(a.0),
            fmt(a.1),
            fmt(b.0),
            fmt(b.1),
            fmt(width)
        ));
    }

    pub fn circle(&mut self, center: (f64, f64), r: f64, stroke: &str) {
        self.body.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.000\"/>\n",
            fmt(center.0),
            fmt(center.1),
            fmt(r)
        ));
    }

    pub fn text(&mut self, at: (f64, f64), size: f64, content: &str) {
        self.body.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\">{}</text>\n",
            fmt(at.0),
            fmt(at.1),
            fmt(size),
            escape(content)
        ));
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n{GENERATOR_COMMENT}\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            fmt(self.width),
            fmt(self.height),
            fmt(self.width),
            fmt(self.height),
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Linear map from data space to viewport pixels.
pub struct Mapper {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub px_w: f64,
    pub px_h: f64,
    pub margin: f64,
}

impl Mapper {
    /// `y0` maps to the top edge, `y1` to the bottom.
    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let fx = (x - self.x0) / (self.x1 - self.x0);
        let fy = (y - self.y0) / (self.y1 - self.y0);
        (
            self.margin + fx * (self.px_w - 2.0 * self.margin),
            self.margin + fy * (self.px_h - 2.0 * self.margin),
        )
    }
}
