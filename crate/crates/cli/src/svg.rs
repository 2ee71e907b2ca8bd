use std::fmt::Write;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const LEGEND_LINE: f64 = 16.0;
const LEGEND_MAX: usize = 20;

/// Polygons, segments and a text legend drawn into a fixed square viewport.
#[derive(Default)]
pub struct Scene {
    pub title: String,
    pub polygons: Vec<Vec<[f64; 2]>>,
    /// Secondary polygons drawn faintly.
    pub ghosts: Vec<Vec<[f64; 2]>>,
    pub segments: Vec<[[f64; 2]; 2]>,
    pub legend: Vec<String>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Scene {
    pub fn render(&self) -> String {
        let pts = self.polygons.iter().chain(&self.ghosts).flatten().chain(self.segments.iter().flatten());
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if lo[0] > hi[0] {
            (lo, hi) = ([0.0; 2], [1.0; 2]);
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let legend_height = LEGEND_LINE * (self.legend.len().min(LEGEND_MAX) as f64 + 1.0);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let map = |p: &[f64; 2]| (MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale);
        let path = |poly: &[[f64; 2]]| {
            poly.iter()
                .map(|p| {
                    let (x, y) = map(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::new();
        let h = SIZE + legend_height;
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{h}" viewBox="0 0 {SIZE} {h}">"#);
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="16">{}</text>"#, escape(&self.title));
        for g in &self.ghosts {
            let _ = writeln!(s, r##"<polygon points="{}" fill="none" stroke="#bbbbbb" stroke-width="0.6"/>"##, path(g));
        }
        for p in &self.polygons {
            let _ = writeln!(s, r##"<polygon points="{}" fill="#eef3fb" stroke="#1f3b73" stroke-width="1.5"/>"##, path(p));
        }
        for [a, b] in &self.segments {
            let ((x1, y1), (x2, y2)) = (map(a), map(b));
            let _ = writeln!(
                s,
                r##"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#c0392b" stroke-width="1"/>"##
            );
        }
        for (i, line) in self.legend.iter().take(LEGEND_MAX).enumerate() {
            let y = SIZE + LEGEND_LINE * (i as f64 + 1.0);
            let _ = writeln!(s, r#"<text x="{MARGIN}" y="{y}" font-family="monospace" font-size="12">{}</text>"#, escape(line));
        }
        if self.legend.len() > LEGEND_MAX {
            let y = SIZE + LEGEND_LINE * (LEGEND_MAX as f64 + 1.0);
            let more = self.legend.len() - LEGEND_MAX;
            let _ = writeln!(s, r#"<text x="{MARGIN}" y="{y}" font-family="monospace" font-size="12">… {more} more</text>"#);
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_square() {
        let scene = Scene {
            title: "a < b".into(),
            polygons: vec![vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]],
            legend: vec!["1".into()],
            ..Default::default()
        };
        let s = scene.render();
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("a &lt; b"));
        assert!(s.contains("40.000,760.000"));
    }
}
