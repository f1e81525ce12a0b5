//! Self-contained SVG line plots and heatmaps with contour overlays.

use std::fmt::Write as _;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 64.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            x,
            y,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: AxisScale,
    pub y_scale: AxisScale,
    pub series: Vec<Series>,
    /// Dashed horizontal reference lines.
    pub reference_lines: Vec<(f64, String)>,
}

/// `values[i * y.len() + j]` belongs to `(x[i], y[j])`.
#[derive(Debug, Clone, Default)]
pub struct Heatmap {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub color_label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    pub x_scale: AxisScale,
    pub y_scale: AxisScale,
    pub color_scale: AxisScale,
    pub contours: Vec<(f64, String)>,
}

struct Mapping {
    lo: f64,
    hi: f64,
    scale: AxisScale,
    from: f64,
    to: f64,
}

impl Mapping {
    fn new(lo: f64, hi: f64, scale: AxisScale, from: f64, to: f64) -> Self {
        let (lo, hi) = match scale {
            AxisScale::Linear if lo == hi => (lo - 0.5 * lo.abs().max(1.0), hi + 0.5 * hi.abs().max(1.0)),
            AxisScale::Log if lo == hi => (lo / 10f64.sqrt(), hi * 10f64.sqrt()),
            _ => (lo, hi),
        };
        Self {
            lo,
            hi,
            scale,
            from,
            to,
        }
    }

    fn t(&self, v: f64) -> f64 {
        match self.scale {
            AxisScale::Linear => (v - self.lo) / (self.hi - self.lo),
            AxisScale::Log => (v / self.lo).ln() / (self.hi / self.lo).ln(),
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (self.to - self.from) * self.t(v)
    }

    fn ticks(&self) -> Vec<f64> {
        match self.scale {
            AxisScale::Linear => linear_ticks(self.lo, self.hi),
            AxisScale::Log => {
                let (a, b) = (self.lo.log10().floor() as i32, self.hi.log10().ceil() as i32);
                let step = ((b - a) / 8).max(1);
                (a..=b)
                    .step_by(step as usize)
                    .map(|e| 10f64.powi(e))
                    .filter(|v| *v >= self.lo * (1.0 - 1e-9) && *v <= self.hi * (1.0 + 1e-9))
                    .collect()
            }
        }
    }
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".into()
    } else if (1e-2..1e4).contains(&a) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        let s = format!("{v:.2e}");
        let (m, e) = s.split_once('e').unwrap_or((&s, "0"));
        let m = if m.contains('.') {
            m.trim_end_matches('0').trim_end_matches('.')
        } else {
            m
        };
        format!("{m}e{e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn finite_range(values: impl Iterator<Item = f64>, scale: AxisScale) -> Option<(f64, f64)> {
    values
        .filter(|v| v.is_finite() && (scale == AxisScale::Linear || *v > 0.0))
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((a, b)) => Some((a.min(v), b.max(v))),
        })
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, xm: &Mapping, ym: &Mapping, x_label: &str, y_label: &str) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for t in xm.ticks() {
        let px = xm.map(t);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 19.0,
            tick_label(t)
        );
    }
    for t in ym.ticks() {
        let py = ym.map(t);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            py + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

impl LinePlot {
    pub fn render(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.title);
        let xs = self.series.iter().flat_map(|s| s.x.iter().copied());
        let ys = self
            .series
            .iter()
            .flat_map(|s| s.y.iter().copied())
            .chain(self.reference_lines.iter().map(|r| r.0));
        let (xl, xh) = finite_range(xs, self.x_scale).unwrap_or((0.0, 1.0));
        let (yl, yh) = finite_range(ys, self.y_scale).unwrap_or((0.0, 1.0));
        let xm = Mapping::new(xl, xh, self.x_scale, LEFT, WIDTH - RIGHT);
        let ym = Mapping::new(yl, yh, self.y_scale, HEIGHT - BOTTOM, TOP);
        axes(&mut out, &xm, &ym, &self.x_label, &self.y_label);
        let usable = |v: f64, s: AxisScale| v.is_finite() && (s == AxisScale::Linear || v > 0.0);
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let mut path = String::new();
            let mut pen_down = false;
            for (&x, &y) in s.x.iter().zip(&s.y) {
                if !(usable(x, self.x_scale) && usable(y, self.y_scale)) {
                    pen_down = false;
                    continue;
                }
                let _ = write!(
                    path,
                    "{}{:.2},{:.2} ",
                    if pen_down { "L" } else { "M" },
                    xm.map(x),
                    ym.map(y)
                );
                pen_down = true;
            }
            let _ = writeln!(
                out,
                r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.trim_end()
            );
            let ly = TOP + 16.0 + 20.0 * k as f64;
            let lx = WIDTH - RIGHT + 14.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
                lx + 22.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{}</text>"#,
                lx + 28.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        for (v, label) in &self.reference_lines {
            if !usable(*v, self.y_scale) {
                continue;
            }
            let py = ym.map(*v);
            let _ = writeln!(
                out,
                r#"<line x1="{LEFT}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
                WIDTH - RIGHT
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" fill="gray">{}</text>"#,
                LEFT + 6.0,
                py - 4.0,
                escape(label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Piecewise-linear approximation of the viridis colormap.
fn colormap(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = t.clamp(0.0, 1.0);
    let k = STOPS.iter().position(|s| s.0 >= t).unwrap_or(4).max(1);
    let (a, b) = (STOPS[k - 1], STOPS[k]);
    let f = (t - a.0) / (b.0 - a.0);
    let c: Vec<u8> = (0..3).map(|i| (a.1[i] + f * (b.1[i] - a.1[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Cell edges halfway between samples, in mapped coordinates.
fn edges(samples: &[f64], m: &Mapping) -> Vec<f64> {
    let p: Vec<f64> = samples.iter().map(|&v| m.map(v)).collect();
    if p.len() == 1 {
        return vec![m.from, m.to];
    }
    let mut e = Vec::with_capacity(p.len() + 1);
    e.push(p[0] - (p[1] - p[0]) / 2.0);
    for w in p.windows(2) {
        e.push((w[0] + w[1]) / 2.0);
    }
    e.push(p[p.len() - 1] + (p[p.len() - 1] - p[p.len() - 2]) / 2.0);
    e
}

/// Contour segments of `level` by marching squares over sample centres.
/// Returns segments in mapped coordinates.
pub fn contour_segments(px: &[f64], py: &[f64], values: &[f64], level: f64) -> Vec<[(f64, f64); 2]> {
    let ny = py.len();
    let v = |i: usize, j: usize| values[i * ny + j];
    let mut segs = Vec::new();
    for i in 0..px.len().saturating_sub(1) {
        for j in 0..ny.saturating_sub(1) {
            // Corners counter-clockwise from (i, j).
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let val: Vec<f64> = c.iter().map(|&(a, b)| v(a, b)).collect();
            if val.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let mut pts = Vec::new();
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                let (va, vb) = (val[a] - level, val[b] - level);
                if (va < 0.0) != (vb < 0.0) {
                    let f = va / (va - vb);
                    let (pa, pb) = ((px[c[a].0], py[c[a].1]), (px[c[b].0], py[c[b].1]));
                    pts.push((pa.0 + f * (pb.0 - pa.0), pa.1 + f * (pb.1 - pa.1)));
                }
            }
            match pts.len() {
                2 => segs.push([pts[0], pts[1]]),
                4 => {
                    segs.push([pts[0], pts[1]]);
                    segs.push([pts[2], pts[3]]);
                }
                _ => {}
            }
        }
    }
    segs
}

impl Heatmap {
    pub fn render(&self) -> String {
        assert_eq!(self.values.len(), self.x.len() * self.y.len(), "heatmap shape");
        let mut out = String::new();
        header(&mut out, &self.title);
        let (xl, xh) = finite_range(self.x.iter().copied(), self.x_scale).unwrap_or((0.0, 1.0));
        let (yl, yh) = finite_range(self.y.iter().copied(), self.y_scale).unwrap_or((0.0, 1.0));
        let xm = Mapping::new(xl, xh, self.x_scale, LEFT, WIDTH - RIGHT);
        let ym = Mapping::new(yl, yh, self.y_scale, HEIGHT - BOTTOM, TOP);
        let (cl, ch) = finite_range(self.values.iter().copied(), self.color_scale).unwrap_or((0.0, 1.0));
        let cm = Mapping::new(cl, ch, self.color_scale, 0.0, 1.0);
        // Shrink the data mapping so the outer cells fit inside the frame.
        let (ex, ey) = (edges(&self.x, &xm), edges(&self.y, &ym));
        let sx = (WIDTH - RIGHT - LEFT) / (ex[ex.len() - 1] - ex[0]);
        let sy = (HEIGHT - BOTTOM - TOP) / (ey[0] - ey[ey.len() - 1]);
        let fx = |p: f64| LEFT + (p - ex[0]) * sx;
        let fy = |p: f64| HEIGHT - BOTTOM - (ey[0] - p) * sy;
        let ny = self.y.len();
        for i in 0..self.x.len() {
            for j in 0..ny {
                let v = self.values[i * ny + j];
                let usable = v.is_finite() && (self.color_scale == AxisScale::Linear || v > 0.0);
                let fill = if usable {
                    colormap(cm.t(v))
                } else {
                    "#d0d0d0".to_string()
                };
                let (x0, x1) = (fx(ex[i]), fx(ex[i + 1]));
                let (y0, y1) = (fy(ey[j + 1]), fy(ey[j]));
                let _ = writeln!(
                    out,
                    r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="{fill}" stroke-width="0.3"/>"#,
                    x1 - x0,
                    y1 - y0
                );
            }
        }
        let xa = Mapping::new(xl, xh, self.x_scale, fx(xm.map(xl)), fx(xm.map(xh)));
        let ya = Mapping::new(yl, yh, self.y_scale, fy(ym.map(yl)), fy(ym.map(yh)));
        axes(&mut out, &xa, &ya, &self.x_label, &self.y_label);

        let px: Vec<f64> = self.x.iter().map(|&v| xa.map(v)).collect();
        let py: Vec<f64> = self.y.iter().map(|&v| ya.map(v)).collect();
        for (k, (level, label)) in self.contours.iter().enumerate() {
            let color = ["white", "black", "#ff4040"][k % 3];
            let mut d = String::new();
            for [a, b] in contour_segments(&px, &py, &self.values, *level) {
                let _ = write!(d, "M{:.2},{:.2}L{:.2},{:.2}", a.0, a.1, b.0, b.1);
            }
            if !d.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.6" stroke-dasharray="5,3"/>"#
                );
            }
            let ly = HEIGHT - BOTTOM - 10.0 - 18.0 * k as f64;
            let lx = WIDTH - RIGHT + 14.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2" stroke-dasharray="5,3"/>"#,
                lx + 22.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{}</text>"#,
                lx + 28.0,
                ly + 4.0,
                escape(label)
            );
        }

        // Colour bar.
        let (bx, bw, btop, bbot) = (WIDTH - RIGHT + 20.0, 16.0, TOP + 10.0, TOP + 210.0);
        let steps = 50;
        for s in 0..steps {
            let t = s as f64 / (steps - 1) as f64;
            let y = bbot - (bbot - btop) * (s + 1) as f64 / steps as f64;
            let _ = writeln!(
                out,
                r#"<rect x="{bx}" y="{y:.2}" width="{bw}" height="{:.2}" fill="{}"/>"#,
                (bbot - btop) / steps as f64 + 0.3,
                colormap(t)
            );
        }
        let bar = Mapping::new(cl, ch, self.color_scale, bbot, btop);
        for t in bar.ticks() {
            let y = bar.map(t);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}">{}</text>"#,
                bx + bw + 4.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{bx}" y="{}">{}</text>"#,
            btop - 6.0,
            escape(&self.color_label)
        );
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round_numbers() {
        assert_eq!(
            linear_ticks(0.0, 1.0),
            vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]
        );
        let m = Mapping::new(1e5, 1e8, AxisScale::Log, 0.0, 1.0);
        assert_eq!(m.ticks(), vec![1e5, 1e6, 1e7, 1e8]);
        assert_eq!(tick_label(0.5), "0.5");
        assert_eq!(tick_label(2e-7), "2e-7");
        assert_eq!(tick_label(1.5e6), "1.5e6");
    }

    #[test]
    fn line_plot_is_well_formed() {
        let p = LinePlot {
            title: "a < b".into(),
            x_label: "time (s)".into(),
            y_label: "occupation".into(),
            series: vec![Series::new("nv", vec![0.0, 1.0, 2.0], vec![0.0, f64::NAN, 1.0])],
            reference_lines: vec![(0.5, "half".into())],
            ..LinePlot::default()
        };
        let svg = p.render();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn contour_of_a_plane_is_straight() {
        let x = vec![0.0, 1.0, 2.0];
        let y = vec![0.0, 1.0];
        // v = x, level 0.5 crosses between the first two columns.
        let values = vec![0.0, 0.0, 1.0, 1.0, 2.0, 2.0];
        let segs = contour_segments(&x, &y, &values, 0.5);
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0][0].0, 0.5);
        assert_eq!(segs[0][1].0, 0.5);
    }

    #[test]
    fn heatmap_renders_every_cell() {
        let h = Heatmap {
            x: vec![1.0, 2.0, 3.0],
            y: vec![1e5, 1e6],
            values: vec![1.0, 2.0, f64::NAN, 4.0, 5.0, 6.0],
            y_scale: AxisScale::Log,
            contours: vec![(3.0, "level 3".into())],
            ..Heatmap::default()
        };
        let svg = h.render();
        assert_eq!(svg.matches("#d0d0d0").count(), 2);
        assert!(svg.contains("level 3"));
    }
}
