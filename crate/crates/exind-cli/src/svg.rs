//! Minimal self-contained SVG line charts for the plot-data files.
//!
//! Data-first output is the contract; these charts are a convenience render
//! with no external services or font dependencies.

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    /// `(name, points)` per series; non-finite points are skipped.
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

struct Extent {
    min: f64,
    max: f64,
}

impl Extent {
    fn of(values: impl Iterator<Item = f64>) -> Option<Extent> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values.filter(|v| v.is_finite()) {
            min = min.min(v);
            max = max.max(v);
        }
        (min <= max).then_some(Extent { min, max })
    }

    fn pad(mut self) -> Extent {
        if self.min == self.max {
            self.min -= 0.5;
            self.max += 0.5;
        }
        self
    }
}

impl LineChart {
    pub fn render(&self) -> String {
        const W: f64 = 720.0;
        const H: f64 = 480.0;
        const ML: f64 = 70.0;
        const MR: f64 = 20.0;
        const MT: f64 = 40.0;
        const MB: f64 = 55.0;

        let y_of = |v: f64| if self.log_y { v.log10() } else { v };
        let xs = Extent::of(
            self.series
                .iter()
                .flat_map(|(_, pts)| pts.iter().map(|p| p.0)),
        );
        let ys = Extent::of(self.series.iter().flat_map(|(_, pts)| {
            pts.iter()
                .filter(|p| !self.log_y || p.1 > 0.0)
                .map(|p| y_of(p.1))
        }));
        let (xs, ys) = match (xs, ys) {
            (Some(a), Some(b)) => (a.pad(), b.pad()),
            _ => {
                return format!(
                    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\">\
                     <text x=\"20\" y=\"30\">{}: no finite data</text></svg>",
                    xml_escape(&self.title)
                )
            }
        };
        let px = |x: f64| ML + (x - xs.min) / (xs.max - xs.min) * (W - ML - MR);
        let py = |y: f64| H - MB - (y - ys.min) / (ys.max - ys.min) * (H - MT - MB);

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
             font-family=\"sans-serif\" font-size=\"12\">\n\
             <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
             <text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
            W / 2.0,
            xml_escape(&self.title)
        ));
        // axes
        out.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
             <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - MB,
            W - MR,
            H - MB,
            H - MB
        ));
        // x ticks
        for i in 0..=5 {
            let x = xs.min + (xs.max - xs.min) * i as f64 / 5.0;
            out.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n\
                 <text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
                px(x),
                H - MB,
                H - MB + 5.0,
                H - MB + 20.0,
                format_tick(x)
            ));
        }
        // y ticks
        if self.log_y {
            let lo = ys.min.floor() as i32;
            let hi = ys.max.ceil() as i32;
            for e in lo..=hi {
                let y = e as f64;
                if y < ys.min - 1e-9 || y > ys.max + 1e-9 {
                    continue;
                }
                out.push_str(&format!(
                    "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"black\"/>\n\
                     <text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">1e{e}</text>\n",
                    py(y),
                    ML - 5.0,
                    ML,
                    ML - 8.0,
                    py(y) + 4.0
                ));
            }
        } else {
            for i in 0..=5 {
                let y = ys.min + (ys.max - ys.min) * i as f64 / 5.0;
                out.push_str(&format!(
                    "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"black\"/>\n\
                     <text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5}</text>\n",
                    py(y),
                    ML - 5.0,
                    ML,
                    ML - 8.0,
                    py(y) + 4.0,
                    format_tick(y)
                ));
            }
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
             <text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
            (ML + W - MR) / 2.0,
            H - 12.0,
            xml_escape(&self.x_label),
            H / 2.0,
            H / 2.0,
            xml_escape(&self.y_label)
        ));
        for (i, (name, points)) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let path: Vec<String> = points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite() && (!self.log_y || p.1 > 0.0))
                .map(|p| format!("{:.2},{:.2}", px(p.0), py(y_of(p.1))))
                .collect();
            if !path.is_empty() {
                out.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                    path.join(" ")
                ));
            }
            let ly = MT + 16.0 * i as f64;
            out.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{ly}\" x2=\"{1}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
                 <text x=\"{2}\" y=\"{3}\">{4}</text>\n",
                W - MR - 150.0,
                W - MR - 120.0,
                W - MR - 114.0,
                ly + 4.0,
                xml_escape(name)
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1000.0 || v.abs() < 0.01 {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_svg() {
        let chart = LineChart {
            title: "t".into(),
            x_label: "k".into(),
            y_label: "mse".into(),
            log_y: true,
            series: vec![
                ("a".into(), vec![(30.0, 1e-3), (40.0, 5e-4), (50.0, 2e-4)]),
                ("b".into(), vec![(30.0, 2e-3), (40.0, 1e-3), (50.0, 9e-4)]),
            ],
        };
        let svg = chart.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn empty_data_still_renders() {
        let chart = LineChart {
            title: "empty".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            log_y: false,
            series: vec![("a".into(), vec![])],
        };
        assert!(chart.render().contains("no finite data"));
    }
}
