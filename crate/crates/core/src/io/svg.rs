use std::fmt::Write as _;
use std::path::Path;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::geometry::{lattice_points, ConvexLatticePolygon, RationalPoint};
use crate::multiplication::CokernelReport;
use crate::toric::{polygon_of, Fan, TorusDivisor};
use crate::Rational;

pub const PX_PER_UNIT: i64 = 32;

struct Frame {
    min_x: i128,
    max_y: i128,
}

impl Frame {
    // coordinates are multiples of 1/den for small den; three decimals keep bytes stable
    fn px(&self, v: Rational, origin: i128, flip: bool) -> String {
        let shifted = if flip {
            Rational::from_integer(origin) - v
        } else {
            v - Rational::from_integer(origin)
        };
        let scaled = (shifted + Rational::from_integer(1)) * Rational::from_integer(PX_PER_UNIT as i128);
        let milli = (scaled * Rational::from_integer(1000)).round().to_integer();
        let (q, r) = milli.div_mod_floor(&1000);
        if r == 0 {
            format!("{q}")
        } else {
            format!("{q}.{:03}", r).trim_end_matches('0').to_string()
        }
    }

    fn x(&self, v: Rational) -> String {
        self.px(v, self.min_x, false)
    }

    fn y(&self, v: Rational) -> String {
        self.px(v, self.max_y, true)
    }

    fn point(&self, p: &RationalPoint) -> String {
        format!("{},{}", self.x(p.x()), self.y(p.y()))
    }
}

fn outline(out: &mut String, frame: &Frame, class: &str, p: &ConvexLatticePolygon) {
    let pts: Vec<String> = p.vertices().iter().map(|v| frame.point(v)).collect();
    let _ = writeln!(out, r#"<polygon class="{class}" points="{}"/>"#, pts.join(" "));
}

/// Standalone SVG of `P_D`, `P_E` and `P_{D+E}` with the lattice points of `P_{D+E}`
/// as dots and the points of `report.missing_points` as squares.
pub fn render_svg(
    fan: &Fan,
    d: &TorusDivisor,
    e: &TorusDivisor,
    report: &CokernelReport,
) -> Result<String> {
    let pd = polygon_of(fan, d)?;
    let pe = polygon_of(fan, e)?;
    let psum = polygon_of(fan, &d.checked_add(e)?)?;
    if pd.is_empty() || pe.is_empty() || psum.is_empty() {
        return Err(Error::precondition("cannot plot an empty polygon"));
    }
    let all: Vec<&RationalPoint> = [&pd, &pe, &psum].iter().flat_map(|p| p.vertices()).collect();
    let min_x = all.iter().map(|p| p.x().floor().to_integer()).min().unwrap_or(0);
    let max_x = all.iter().map(|p| p.x().ceil().to_integer()).max().unwrap_or(0);
    let min_y = all.iter().map(|p| p.y().floor().to_integer()).min().unwrap_or(0);
    let max_y = all.iter().map(|p| p.y().ceil().to_integer()).max().unwrap_or(0);
    let unit = PX_PER_UNIT as i128;
    let width = (max_x - min_x + 2) * unit;
    let height = (max_y - min_y + 2) * unit;
    let frame = Frame { min_x, max_y };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push_str(concat!(
        "<style>",
        "polygon{fill:none;stroke-width:2}",
        ".pd{stroke:#1f77b4}.pe{stroke:#2ca02c}.psum{stroke:#444;stroke-dasharray:6 3}",
        ".point{fill:#222}.missing{fill:none;stroke:#d62728;stroke-width:2}",
        "</style>\n"
    ));
    outline(&mut out, &frame, "psum", &psum);
    outline(&mut out, &frame, "pd", &pd);
    outline(&mut out, &frame, "pe", &pe);
    for p in lattice_points(&psum)? {
        let _ = writeln!(
            out,
            r#"<circle class="point" cx="{}" cy="{}" r="3"/>"#,
            frame.x(Rational::from_integer(p.x as i128)),
            frame.y(Rational::from_integer(p.y as i128)),
        );
    }
    let half = Rational::new(1, 4);
    for p in &report.missing_points {
        let _ = writeln!(
            out,
            r#"<rect class="missing" x="{}" y="{}" width="{}" height="{}"/>"#,
            frame.x(Rational::from_integer(p.x as i128) - half),
            frame.y(Rational::from_integer(p.y as i128) + half),
            PX_PER_UNIT / 2,
            PX_PER_UNIT / 2,
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_svg(
    fan: &Fan,
    d: &TorusDivisor,
    e: &TorusDivisor,
    report: &CokernelReport,
    path: impl AsRef<Path>,
) -> Result<()> {
    let svg = render_svg(fan, d, e, report)?;
    std::fs::write(path.as_ref(), svg)
        .map_err(|err| Error::Io(format!("{}: {err}", path.as_ref().display())))
}
