//! Shepard, configuration and distance-versus-disparity plots as standalone
//! SVG documents.
//!
//! Every plotted mark carries its data coordinates in `data-*` attributes at
//! full precision, and the plot frame records the affine data-to-canvas map,
//! so the documents can be checked numerically.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::engine::MdsResult;
use crate::error::{Error, Result};
use crate::init::{InitResult, QualityKind};
use crate::majorize::Configuration;

pub const CANVAS: f64 = 800.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 750.0;
const TOP: f64 = 60.0;
const BOTTOM: f64 = 720.0;
const NTICKS: usize = 5;

const PALETTE: [(&str, &str); 16] = [
    ("BLACK", "#000000"),
    ("SILVER", "#C0C0C0"),
    ("GRAY", "#808080"),
    ("WHITE", "#FFFFFF"),
    ("MAROON", "#800000"),
    ("RED", "#FF0000"),
    ("PURPLE", "#800080"),
    ("FUCHSIA", "#FF00FF"),
    ("GREEN", "#008000"),
    ("LIME", "#00FF00"),
    ("OLIVE", "#808000"),
    ("YELLOW", "#FFFF00"),
    ("NAVY", "#000080"),
    ("BLUE", "#0000FF"),
    ("TEAL", "#008080"),
    ("AQUA", "#00FFFF"),
];

pub fn color(name: &str) -> Result<&'static str> {
    PALETTE
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, hex)| *hex)
        .ok_or_else(|| Error::UnknownColor(name.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Shepard,
    Configuration,
    DistDhat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub title: String,
    pub fitlines: bool,
    pub colline: String,
    pub colpoint: String,
    /// 1-based dimensions for the configuration plot.
    pub dim1: usize,
    pub dim2: usize,
    pub labels: Option<Vec<String>>,
    /// Point radius multiplier.
    pub cex: f64,
    /// Line width.
    pub lwd: f64,
}

impl PlotSpec {
    pub fn shepard() -> Self {
        PlotSpec {
            kind: PlotKind::Shepard,
            title: "ShepardPlot".into(),
            fitlines: true,
            colline: "RED".into(),
            colpoint: "BLUE".into(),
            dim1: 1,
            dim2: 2,
            labels: None,
            cex: 1.0,
            lwd: 2.0,
        }
    }

    pub fn configuration() -> Self {
        PlotSpec {
            kind: PlotKind::Configuration,
            title: "ConfigurationPlot".into(),
            colpoint: "RED".into(),
            ..Self::shepard()
        }
    }

    pub fn dist_dhat() -> Self {
        PlotSpec {
            kind: PlotKind::DistDhat,
            title: "Dist-Dhat Plot".into(),
            ..Self::shepard()
        }
    }
}

/// What the plots need from a fit.
#[derive(Debug, Clone, Copy)]
pub struct PlotData<'a> {
    pub delta: &'a [f64],
    pub dhat: &'a [f64],
    pub confdist: &'a [f64],
    pub conf: &'a Configuration,
    /// Plot squared distances and disparities (sstress fits).
    pub squared: bool,
}

impl<'a> From<&'a MdsResult> for PlotData<'a> {
    fn from(r: &'a MdsResult) -> Self {
        PlotData {
            delta: &r.delta,
            dhat: &r.dhat,
            confdist: &r.confdist,
            conf: &r.conf,
            squared: false,
        }
    }
}

impl<'a> From<&'a InitResult> for PlotData<'a> {
    fn from(r: &'a InitResult) -> Self {
        PlotData {
            delta: &r.delta,
            dhat: &r.dhat,
            confdist: &r.confdist,
            conf: &r.conf,
            squared: r.quality_kind == QualityKind::Sstress,
        }
    }
}

/// Affine map from a data interval onto a canvas interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub start: f64,
    pub end: f64,
}

impl Axis {
    /// Data range padded by 5% on each side.
    fn padded(lo: f64, hi: f64, start: f64, end: f64) -> Self {
        let span = hi - lo;
        let pad = if span > 0.0 {
            0.05 * span
        } else {
            lo.abs().max(1.0) * 0.05
        };
        Axis {
            lo: lo - pad,
            hi: hi + pad,
            start,
            end,
        }
    }

    pub fn to_canvas(&self, v: f64) -> f64 {
        self.start + (v - self.lo) * (self.end - self.start) / (self.hi - self.lo)
    }

    pub fn to_data(&self, c: f64) -> f64 {
        self.lo + (c - self.start) * (self.hi - self.lo) / (self.end - self.start)
    }

    fn attr(&self) -> String {
        format!("{} {} {} {}", self.lo, self.hi, self.start, self.end)
    }
}

fn range(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

struct Svg {
    out: String,
}

impl Svg {
    fn new(title: &str, xaxis: &Axis, yaxis: &Axis, xlabel: &str, ylabel: &str) -> Self {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
        );
        let _ = writeln!(out, "<title>{}</title>", escape(title));
        let _ = writeln!(
            out,
            "<rect x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"#FFFFFF\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"35\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"20\">{}</text>",
            (LEFT + RIGHT) / 2.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>",
            RIGHT - LEFT,
            BOTTOM - TOP
        );
        let mut svg = Svg { out };
        svg.ticks(xaxis, yaxis);
        let _ = writeln!(
            svg.out,
            "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
            (LEFT + RIGHT) / 2.0,
            BOTTOM + 50.0,
            escape(xlabel)
        );
        let _ = writeln!(
            svg.out,
            "<text x=\"25\" y=\"{:.3}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 25 {:.3})\">{}</text>",
            (TOP + BOTTOM) / 2.0,
            (TOP + BOTTOM) / 2.0,
            escape(ylabel)
        );
        let _ = writeln!(
            svg.out,
            "<g id=\"data\" data-x-map=\"{}\" data-y-map=\"{}\">",
            xaxis.attr(),
            yaxis.attr()
        );
        svg
    }

    fn ticks(&mut self, xaxis: &Axis, yaxis: &Axis) {
        for t in 0..NTICKS {
            let f = (t as f64 + 0.5) / NTICKS as f64;
            let xv = xaxis.lo + f * (xaxis.hi - xaxis.lo);
            let xc = xaxis.to_canvas(xv);
            let _ = writeln!(
                self.out,
                "<line x1=\"{xc:.3}\" y1=\"{BOTTOM}\" x2=\"{xc:.3}\" y2=\"{:.3}\" stroke=\"#000000\" stroke-width=\"1\"/>",
                BOTTOM + 6.0
            );
            let _ = writeln!(
                self.out,
                "<text x=\"{xc:.3}\" y=\"{:.3}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
                BOTTOM + 22.0,
                tick_label(xv)
            );
            let yv = yaxis.lo + f * (yaxis.hi - yaxis.lo);
            let yc = yaxis.to_canvas(yv);
            let _ = writeln!(
                self.out,
                "<line x1=\"{:.3}\" y1=\"{yc:.3}\" x2=\"{LEFT}\" y2=\"{yc:.3}\" stroke=\"#000000\" stroke-width=\"1\"/>",
                LEFT - 6.0
            );
            let _ = writeln!(
                self.out,
                "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
                LEFT - 9.0,
                yc + 4.0,
                tick_label(yv)
            );
        }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</g>\n</svg>\n");
        self.out
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

#[allow(clippy::too_many_arguments)]
fn circle(out: &mut String, class: &str, xa: &Axis, ya: &Axis, x: f64, y: f64, r: f64, fill: &str) {
    let _ = writeln!(
        out,
        "<circle class=\"{class}\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"{r:.3}\" fill=\"{fill}\" data-x=\"{x}\" data-y=\"{y}\"/>",
        xa.to_canvas(x),
        ya.to_canvas(y)
    );
}

#[allow(clippy::too_many_arguments)]
fn segment(
    out: &mut String,
    class: &str,
    xa: &Axis,
    ya: &Axis,
    (x1, y1): (f64, f64),
    (x2, y2): (f64, f64),
    stroke: &str,
    width: f64,
) {
    let _ = writeln!(
        out,
        "<line class=\"{class}\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{stroke}\" stroke-width=\"{width:.3}\" data-x1=\"{x1}\" data-y1=\"{y1}\" data-x2=\"{x2}\" data-y2=\"{y2}\"/>",
        xa.to_canvas(x1),
        ya.to_canvas(y1),
        xa.to_canvas(x2),
        ya.to_canvas(y2)
    );
}

fn point_radius(spec: &PlotSpec) -> f64 {
    3.0 * spec.cex
}

/// Dissimilarities against disparities (joined by a line) and distances.
pub fn shepard_plot(data: &PlotData<'_>, spec: &PlotSpec) -> Result<String> {
    let colline = color(&spec.colline)?;
    let colpoint = color(&spec.colpoint)?;
    let sq = |v: f64| if data.squared { v * v } else { v };
    let dhat: Vec<f64> = data.dhat.iter().map(|&v| sq(v)).collect();
    let dist: Vec<f64> = data.confdist.iter().map(|&v| sq(v)).collect();

    let (xlo, xhi) = range(data.delta.iter().copied());
    let (ylo, yhi) = range(dhat.iter().chain(&dist).copied());
    let xa = Axis::padded(xlo, xhi, LEFT, RIGHT);
    let ya = Axis::padded(ylo, yhi, BOTTOM, TOP);
    let ylabel = if data.squared {
        "squared distances and disparities"
    } else {
        "distances and disparities"
    };
    let mut svg = Svg::new(&spec.title, &xa, &ya, "dissimilarities", ylabel);

    let mut order: Vec<usize> = (0..data.delta.len()).collect();
    order.sort_by(|&a, &b| {
        data.delta[a]
            .total_cmp(&data.delta[b])
            .then(dhat[a].total_cmp(&dhat[b]))
    });

    if spec.fitlines {
        for &k in &order {
            let x = data.delta[k];
            segment(
                &mut svg.out,
                "fitline",
                &xa,
                &ya,
                (x, dist[k]),
                (x, dhat[k]),
                "#000000",
                1.0,
            );
        }
    }
    let points: Vec<String> = order
        .iter()
        .map(|&k| {
            format!(
                "{:.3},{:.3}",
                xa.to_canvas(data.delta[k]),
                ya.to_canvas(dhat[k])
            )
        })
        .collect();
    let _ = writeln!(
        svg.out,
        "<polyline class=\"dhat-line\" points=\"{}\" fill=\"none\" stroke=\"{colline}\" stroke-width=\"{:.3}\"/>",
        points.join(" "),
        spec.lwd
    );
    let r = point_radius(spec);
    for &k in &order {
        circle(
            &mut svg.out,
            "dhat",
            &xa,
            &ya,
            data.delta[k],
            dhat[k],
            r,
            colline,
        );
    }
    for &k in &order {
        circle(
            &mut svg.out,
            "dist",
            &xa,
            &ya,
            data.delta[k],
            dist[k],
            r,
            colpoint,
        );
    }
    Ok(svg.finish())
}

/// Two dimensions of the configuration with equal scaling on both axes.
pub fn configuration_plot(data: &PlotData<'_>, spec: &PlotSpec) -> Result<String> {
    let conf = data.conf;
    let p = conf.ndim();
    if spec.dim1 == spec.dim2 || spec.dim1 < 1 || spec.dim2 < 1 || spec.dim1 > p || spec.dim2 > p {
        return Err(Error::Plot(format!(
            "dimensions {} and {} are not two distinct dimensions of {p}",
            spec.dim1, spec.dim2
        )));
    }
    if let Some(labels) = &spec.labels {
        if labels.len() != conf.nobj() {
            return Err(Error::Plot(format!(
                "{} labels for {} objects",
                labels.len(),
                conf.nobj()
            )));
        }
    }
    let colpoint = color(&spec.colpoint)?;
    let (a, b) = (spec.dim1 - 1, spec.dim2 - 1);
    let xs: Vec<f64> = (0..conf.nobj()).map(|i| conf.get(i, a)).collect();
    let ys: Vec<f64> = (0..conf.nobj()).map(|i| conf.get(i, b)).collect();
    let (xlo, xhi) = range(xs.iter().copied());
    let (ylo, yhi) = range(ys.iter().copied());
    let half = 0.5 * (xhi - xlo).max(yhi - ylo).max(f64::MIN_POSITIVE) * 1.1;
    let (xm, ym) = (0.5 * (xlo + xhi), 0.5 * (ylo + yhi));
    let xa = Axis {
        lo: xm - half,
        hi: xm + half,
        start: LEFT,
        end: RIGHT,
    };
    let ya = Axis {
        lo: ym - half,
        hi: ym + half,
        start: BOTTOM,
        end: TOP,
    };
    let mut svg = Svg::new(
        &spec.title,
        &xa,
        &ya,
        &format!("dimension {}", spec.dim1),
        &format!("dimension {}", spec.dim2),
    );
    match &spec.labels {
        Some(labels) => {
            for (i, label) in labels.iter().enumerate() {
                let _ = writeln!(
                    svg.out,
                    "<text class=\"label\" x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\" dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"{:.3}\" fill=\"{colpoint}\" data-x=\"{}\" data-y=\"{}\">{}</text>",
                    xa.to_canvas(xs[i]),
                    ya.to_canvas(ys[i]),
                    12.0 * spec.cex,
                    xs[i],
                    ys[i],
                    escape(label)
                );
            }
        }
        None => {
            let r = point_radius(spec);
            for i in 0..conf.nobj() {
                circle(&mut svg.out, "point", &xa, &ya, xs[i], ys[i], r, colpoint);
            }
        }
    }
    Ok(svg.finish())
}

/// Distances against disparities with the identity line. Both axes share
/// one range so the projections onto the line are drawn orthogonally.
pub fn dist_dhat_plot(data: &PlotData<'_>, spec: &PlotSpec) -> Result<String> {
    let colline = color(&spec.colline)?;
    let colpoint = color(&spec.colpoint)?;
    let (lo, hi) = range(data.confdist.iter().chain(data.dhat).copied());
    let xa = Axis::padded(lo, hi, LEFT, RIGHT);
    let ya = Axis::padded(lo, hi, BOTTOM, TOP);
    let mut svg = Svg::new(&spec.title, &xa, &ya, "distances", "disparities");
    segment(
        &mut svg.out,
        "identity",
        &xa,
        &ya,
        (xa.lo, xa.lo),
        (xa.hi, xa.hi),
        colline,
        spec.lwd,
    );
    if spec.fitlines {
        for (&d, &h) in data.confdist.iter().zip(data.dhat) {
            let m = 0.5 * (d + h);
            segment(
                &mut svg.out,
                "fitline",
                &xa,
                &ya,
                (d, h),
                (m, m),
                "#000000",
                1.0,
            );
        }
    }
    let r = point_radius(spec);
    for (&d, &h) in data.confdist.iter().zip(data.dhat) {
        circle(&mut svg.out, "point", &xa, &ya, d, h, r, colpoint);
    }
    Ok(svg.finish())
}

pub fn render(data: &PlotData<'_>, spec: &PlotSpec) -> Result<String> {
    match spec.kind {
        PlotKind::Shepard => shepard_plot(data, spec),
        PlotKind::Configuration => configuration_plot(data, spec),
        PlotKind::DistDhat => dist_dhat_plot(data, spec),
    }
}

/// Writes `<stem>-shepard.svg`, `<stem>-conf.svg` (when there are at least
/// two dimensions) and `<stem>-distdhat.svg`.
pub fn write_plots(
    stem: impl AsRef<Path>,
    data: &PlotData<'_>,
    labels: Option<Vec<String>>,
) -> Result<Vec<PathBuf>> {
    let stem = stem.as_ref().to_string_lossy().into_owned();
    let mut written = Vec::new();
    let mut jobs = vec![("shepard", PlotSpec::shepard())];
    if data.conf.ndim() >= 2 {
        jobs.push((
            "conf",
            PlotSpec {
                labels,
                ..PlotSpec::configuration()
            },
        ));
    }
    jobs.push(("distdhat", PlotSpec::dist_dhat()));
    for (suffix, spec) in jobs {
        let doc = render(data, &spec)?;
        let path = PathBuf::from(format!("{stem}-{suffix}.svg"));
        std::fs::write(&path, doc)?;
        written.push(path);
    }
    Ok(written)
}
