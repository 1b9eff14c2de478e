//! SVG emission for analysis results: the hull `K`, the inclusion region,
//! and zero markers. Output sticks to a structural subset of SVG 1.1
//! (document element plus `path`, `circle`, `rect`).

use num_complex::Complex64;

use crate::region::ConvexRegion;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;

/// When the region dwarfs the hull (small-alpha cases) a second inset
/// viewport focused on `K` is drawn so the hull stays readable.
const INSET_RATIO: f64 = 50.0;

#[derive(Clone, Debug)]
pub struct PlotSpec {
    /// `(min_re, min_im, max_re, max_im)`; `None` auto-fits all geometry
    /// with 5% padding.
    pub viewport: Option<(f64, f64, f64, f64)>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec { viewport: None }
    }
}

/// Geometry layers for one plot.
#[derive(Clone, Debug)]
pub struct PlotData {
    pub region: Option<ConvexRegion>,
    pub hull: Option<ConvexRegion>,
    pub g_roots: Vec<Complex64>,
    pub h_zeros: Vec<Complex64>,
}

struct Frame {
    // world bounds
    min_re: f64,
    min_im: f64,
    max_re: f64,
    max_im: f64,
    // pixel rectangle
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn map(&self, z: Complex64) -> (f64, f64) {
        let sx = self.w / (self.max_re - self.min_re);
        let sy = self.h / (self.max_im - self.min_im);
        let s = sx.min(sy);
        // center the world box in the pixel box, y axis up
        let cx = self.x0 + self.w / 2.0;
        let cy = self.y0 + self.h / 2.0;
        let wx = (self.min_re + self.max_re) / 2.0;
        let wy = (self.min_im + self.max_im) / 2.0;
        (cx + (z.re - wx) * s, cy - (z.im - wy) * s)
    }

    fn visible(&self, x: f64, y: f64, slack: f64) -> bool {
        x >= self.x0 - slack
            && x <= self.x0 + self.w + slack
            && y >= self.y0 - slack
            && y <= self.y0 + self.h + slack
    }
}

fn bounds(points: &[Complex64]) -> Option<(f64, f64, f64, f64)> {
    if points.is_empty() {
        return None;
    }
    let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        b.0 = b.0.min(p.re);
        b.1 = b.1.min(p.im);
        b.2 = b.2.max(p.re);
        b.3 = b.3.max(p.im);
    }
    Some(b)
}

fn pad(b: (f64, f64, f64, f64)) -> (f64, f64, f64, f64) {
    let w = (b.2 - b.0).max(1e-9);
    let h = (b.3 - b.1).max(1e-9);
    let p = 0.05 * w.max(h);
    (b.0 - p, b.1 - p, b.2 + p, b.3 + p)
}

fn path_for(region: &ConvexRegion, frame: &Frame, close: bool) -> Option<String> {
    let vs = region.vertices();
    if vs.is_empty() {
        return None;
    }
    let mut d = String::new();
    for (i, &v) in vs.iter().enumerate() {
        let (x, y) = frame.map(v);
        if i == 0 {
            d.push_str(&format!("M {x:.3} {y:.3}"));
        } else {
            d.push_str(&format!(" L {x:.3} {y:.3}"));
        }
    }
    if close && vs.len() >= 3 {
        d.push_str(" Z");
    }
    Some(d)
}

fn emit_layers(out: &mut String, data: &PlotData, frame: &Frame, clip: bool) {
    if let Some(region) = &data.region {
        if let Some(d) = path_for(region, frame, true) {
            out.push_str(&format!(
                "<path d=\"{d}\" fill=\"#4a90d9\" fill-opacity=\"0.25\" \
                 stroke=\"#4a90d9\" stroke-width=\"1.5\"/>\n"
            ));
        }
    }
    if let Some(hull) = &data.hull {
        match hull {
            ConvexRegion::Point(p) => {
                let (x, y) = frame.map(*p);
                if !clip || frame.visible(x, y, 0.0) {
                    out.push_str(&format!(
                        "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"none\" \
                         stroke=\"#2d7a2d\" stroke-width=\"1.5\"/>\n"
                    ));
                }
            }
            _ => {
                if let Some(d) = path_for(hull, frame, true) {
                    out.push_str(&format!(
                        "<path d=\"{d}\" fill=\"none\" stroke=\"#2d7a2d\" \
                         stroke-width=\"1.5\"/>\n"
                    ));
                }
            }
        }
    }
    for &z in &data.g_roots {
        let (x, y) = frame.map(z);
        if clip && !frame.visible(x, y, 0.0) {
            continue;
        }
        out.push_str(&format!(
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"none\" \
             stroke=\"#2d7a2d\" stroke-width=\"1.5\"/>\n"
        ));
    }
    for &z in &data.h_zeros {
        let (x, y) = frame.map(z);
        if clip && !frame.visible(x, y, 0.0) {
            continue;
        }
        out.push_str(&format!(
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3.5\" fill=\"#c0392b\"/>\n"
        ));
    }
}

/// Render the plot as a standalone SVG document.
pub fn render(data: &PlotData, spec: &PlotSpec) -> String {
    let mut all: Vec<Complex64> = Vec::new();
    if let Some(r) = &data.region {
        all.extend(r.vertices());
    }
    if let Some(h) = &data.hull {
        all.extend(h.vertices());
    }
    all.extend(&data.g_roots);
    all.extend(&data.h_zeros);

    let world = spec
        .viewport
        .or_else(|| bounds(&all).map(pad))
        .unwrap_or((-1.0, -1.0, 1.0, 1.0));

    let frame = Frame {
        min_re: world.0,
        min_im: world.1,
        max_re: world.2,
        max_im: world.3,
        x0: 0.0,
        y0: 0.0,
        w: WIDTH,
        h: HEIGHT,
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>\n"
    ));
    emit_layers(&mut out, data, &frame, false);

    // inset focused on K when the region diameter swamps the hull
    let hull_diam = data.hull.as_ref().map(|h| h.diameter()).unwrap_or(0.0);
    let region_diam = data.region.as_ref().map(|r| r.diameter()).unwrap_or(0.0);
    if spec.viewport.is_none() && hull_diam > 0.0 && region_diam > INSET_RATIO * hull_diam {
        if let Some(hb) = bounds(&data.hull.as_ref().unwrap().vertices()) {
            let hb = pad(hb);
            let inset = Frame {
                min_re: hb.0,
                min_im: hb.1,
                max_re: hb.2,
                max_im: hb.3,
                x0: WIDTH - 250.0,
                y0: 10.0,
                w: 240.0,
                h: 180.0,
            };
            out.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" \
                 fill=\"#ffffff\" stroke=\"#888888\"/>\n",
                inset.x0, inset.y0, inset.w, inset.h
            ));
            emit_layers(&mut out, data, &inset, true);
        }
    }

    out.push_str("</svg>\n");
    out
}
