//! CSV and SVG emission of shape data.
//!
//! CSV: `source,n_or_label,x,y,boundary,cos_theta,reg_L,disc_magnitude,
//! precision_bits`, decimal fields at 30 significant digits, LF line
//! endings, byte-deterministic for fixed inputs.
//!
//! SVG: the fundamental-domain outline (two vertical segments and one
//! arc) plus one circle per row, colored by a monotone two-stop ramp
//! over `ln(disc)`. Coordinates use independent x/y scales, so the arc
//! is emitted as the corresponding elliptical `A` segment.

use crate::big::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::families::FamilyMember;
use crate::lattice::classify_boundary;
use crate::records::{record_shape, FieldRecord};
use crate::units::regulator_from_basis;

pub const CSV_HEADER: &str =
    "source,n_or_label,x,y,boundary,cos_theta,reg_L,disc_magnitude,precision_bits";

/// Number of significant decimal digits in CSV fields; round-trips just
/// under 100 bits of precision.
pub const CSV_DIGITS: usize = 30;

/// One row of shape output, all numeric fields preformatted as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeRow {
    pub source: String,
    pub n_or_label: String,
    pub x: String,
    pub y: String,
    pub boundary: String,
    pub cos_theta: String,
    pub reg_l: String,
    pub disc_magnitude: String,
    pub precision_bits: u32,
}

fn fmt_real(v: &BigReal, hex: bool) -> String {
    if hex {
        v.to_hex_full()
    } else {
        v.to_decimal_sci(CSV_DIGITS)
    }
}

/// Row for a family member. With `hex` set, the numeric fields carry the
/// full-precision hexadecimal rendering instead of 30-digit decimal.
pub fn member_row(m: &FamilyMember, ctx: &PrecisionContext, hex: bool) -> Result<ShapeRow> {
    let shape = m.shape(ctx)?;
    let boundary = classify_boundary(&shape, &ctx.boundary_tol());
    let cos = m.cos_theta(ctx)?;
    let reg = regulator_from_basis(&m.basis.0, &m.basis.1, &ctx.det_tol())?;
    Ok(ShapeRow {
        source: m.family.tag().to_string(),
        n_or_label: m.n.to_string(),
        x: fmt_real(&shape.x, hex),
        y: fmt_real(&shape.y, hex),
        boundary: boundary.token().to_string(),
        cos_theta: fmt_real(&cos, hex),
        reg_l: fmt_real(&reg.reg_l, hex),
        disc_magnitude: fmt_real(&m.disc_estimate, hex),
        precision_bits: ctx.bits(),
    })
}

/// Row for an ingested field record.
pub fn record_row(r: &FieldRecord, ctx: &PrecisionContext, hex: bool) -> Result<ShapeRow> {
    let (shape, reg) = record_shape(r, ctx)?;
    let boundary = classify_boundary(&shape, &ctx.boundary_tol());
    let cos = reg.gram.cos_angle();
    let disc = r.disc_magnitude_real(ctx)?;
    Ok(ShapeRow {
        source: "dataset".to_string(),
        n_or_label: r.label.clone(),
        x: fmt_real(&shape.x, hex),
        y: fmt_real(&shape.y, hex),
        boundary: boundary.token().to_string(),
        cos_theta: fmt_real(&cos, hex),
        reg_l: fmt_real(&reg.reg_l, hex),
        disc_magnitude: fmt_real(&disc, hex),
        precision_bits: ctx.bits(),
    })
}

/// Render rows as CSV (header + one line per row, LF endings).
pub fn emit_csv(rows: &[ShapeRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.source,
            r.n_or_label,
            r.x,
            r.y,
            r.boundary,
            r.cos_theta,
            r.reg_l,
            r.disc_magnitude,
            r.precision_bits
        ));
    }
    out
}

/// Parse CSV produced by [`emit_csv`]; fields are kept verbatim.
pub fn parse_csv(text: &str) -> Result<Vec<ShapeRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedInput("empty csv".into()))?;
    if header != CSV_HEADER {
        return Err(Error::MalformedInput(format!(
            "unexpected csv header: {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::MalformedInput(format!(
                "csv line {}: expected 9 fields, got {}",
                idx + 2,
                f.len()
            )));
        }
        rows.push(ShapeRow {
            source: f[0].to_string(),
            n_or_label: f[1].to_string(),
            x: f[2].to_string(),
            y: f[3].to_string(),
            boundary: f[4].to_string(),
            cos_theta: f[5].to_string(),
            reg_l: f[6].to_string(),
            disc_magnitude: f[7].to_string(),
            precision_bits: f[8]
                .parse::<u32>()
                .map_err(|_| Error::MalformedInput(format!("bad precision field {:?}", f[8])))?,
        });
    }
    Ok(rows)
}

/// Options for the fundamental-domain scatter plot.
#[derive(Debug, Clone)]
pub struct PlotOptions {
    /// Points above this height are drawn clamped at the top edge.
    pub y_max: f64,
    /// Color points by `ln(disc_magnitude)`; otherwise a fixed fill.
    pub color_by_disc: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            y_max: 8.0,
            color_by_disc: true,
        }
    }
}

/// Two-stop ramp #2b6cb0 -> #e53e3e; every channel is monotone in `t`.
fn ramp_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(0x2b as f64, 0xe5 as f64),
        lerp(0x6c as f64, 0x3e as f64),
        lerp(0xb0 as f64, 0x3e as f64)
    )
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 640.0;
const MARGIN: f64 = 40.0;

/// Fundamental-domain scatter plot. Fails with [`Error::EmptyPlot`] when
/// there are no rows.
pub fn emit_svg(rows: &[ShapeRow], opts: &PlotOptions) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyPlot);
    }
    let y_max = if opts.y_max.is_finite() && opts.y_max > 1.2 {
        opts.y_max
    } else {
        8.0
    };
    let x_lo = -0.03;
    let x_hi = 0.53;
    let y_lo = 0.80;
    let y_hi = y_max + 0.05 * (y_max - y_lo);
    let sx = (SVG_W - 2.0 * MARGIN) / (x_hi - x_lo);
    let sy = (SVG_H - 2.0 * MARGIN) / (y_hi - y_lo);
    let px = |x: f64| MARGIN + (x - x_lo) * sx;
    let py = |y: f64| SVG_H - MARGIN - (y - y_lo) * sy;

    let mut pts: Vec<(f64, f64, f64)> = Vec::with_capacity(rows.len()); // (x, y, ln disc)
    for r in rows {
        let x = parse_field_f64(&r.x, "x")?;
        let y = parse_field_f64(&r.y, "y")?;
        let disc = parse_field_f64(&r.disc_magnitude, "disc_magnitude")?;
        let ln_disc = if disc > 0.0 { disc.ln() } else { 0.0 };
        pts.push((x, y.min(y_max), ln_disc));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(_, _, l) in &pts {
        lo = lo.min(l);
        hi = hi.max(l);
    }
    let span = if hi > lo { hi - lo } else { 1.0 };

    let sqrt3_2 = 3f64.sqrt() / 2.0;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">\n"
    ));
    svg.push_str("<rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n");
    svg.push_str("<g id=\"domain\" stroke=\"#444444\" stroke-width=\"1.5\" fill=\"none\">\n");
    // Left boundary x = 0 from y = 1 upward.
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>\n",
        px(0.0),
        py(1.0),
        px(0.0),
        py(y_hi)
    ));
    // Right boundary x = 1/2 from y = sqrt(3)/2 upward.
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>\n",
        px(0.5),
        py(sqrt3_2),
        px(0.5),
        py(y_hi)
    ));
    // Lower arc of the unit circle from (0, 1) to (1/2, sqrt(3)/2),
    // an ellipse under the anisotropic screen scaling.
    svg.push_str(&format!(
        "<path d=\"M {:.2} {:.2} A {:.2} {:.2} 0 0 1 {:.2} {:.2}\"/>\n",
        px(0.0),
        py(1.0),
        sx,
        sy,
        px(0.5),
        py(sqrt3_2)
    ));
    svg.push_str("</g>\n<g id=\"points\">\n");
    for &(x, y, l) in &pts {
        let t = (l - lo) / span;
        let color = if opts.color_by_disc {
            ramp_color(t)
        } else {
            "#2b6cb0".to_string()
        };
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
            px(x),
            py(y),
            color
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

fn parse_field_f64(s: &str, field: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::MalformedInput(format!("bad {field} value {s:?}")))
}
