//! Barcode rendering as text lines or an SVG diagram.

use std::fmt::Write;

use gapped_core::{Barcode, Extended};

use crate::document::Value;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 48.0;
const ROW: f64 = 18.0;

pub fn barcode_text<P: Value>(b: &Barcode<P>) -> String {
    b.to_text()
}

/// One horizontal segment per bar (repeated by multiplicity), stacked in
/// barcode order. Infinite ends run to the frame and carry an arrowhead.
pub fn barcode_svg<P: Value>(b: &Barcode<P>) -> String {
    let bars = b.expanded();
    let finite: Vec<f64> = bars
        .iter()
        .flat_map(|bar| [&bar.birth, &bar.death])
        .filter_map(|e| e.finite().map(Value::approx))
        .collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = match (lo.is_finite(), hi > lo) {
        (false, _) => (0.0, 1.0),
        (true, false) => (lo - 0.5, lo + 0.5),
        (true, true) => (lo, hi),
    };
    // Leave room for arrows beyond the finite range.
    let inner = (MARGIN + 24.0, WIDTH - MARGIN - 24.0);
    let x = |v: f64| inner.0 + (v - lo) / (hi - lo) * (inner.1 - inner.0);
    let height = 2.0 * MARGIN + ROW * bars.len() as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    s.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" ",
        "orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"black\"/></marker></defs>\n"
    ));
    let axis_y = height - MARGIN / 2.0;
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="gray"/>"#,
        WIDTH - MARGIN
    );
    for (i, bar) in bars.iter().enumerate() {
        let y = MARGIN + ROW * (i as f64 + 0.5);
        let x1 = match &bar.birth {
            Extended::Finite(v) => x(v.approx()),
            _ => MARGIN,
        };
        let x2 = match &bar.death {
            Extended::Finite(v) => x(v.approx()),
            _ => WIDTH - MARGIN,
        };
        let mut markers = String::new();
        if bar.birth == Extended::NegInf {
            markers.push_str(r#" marker-start="url(#arrow)""#);
        }
        if bar.death == Extended::PosInf {
            markers.push_str(r#" marker-end="url(#arrow)""#);
        }
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="black" stroke-width="3"{markers}><title>{} {}</title></line>"#,
            bar.birth, bar.death
        );
        if x1 == x2 {
            let _ = writeln!(s, r#"<circle cx="{x1:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use gapped_core::{qi, Bar, Rational};

    #[test]
    fn empty_barcode() {
        let b: Barcode<Rational> = Barcode::new();
        assert_eq!(barcode_text(&b), "");
        let svg = barcode_svg(&b);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(!svg.contains("stroke-width=\"3\""));
    }

    #[test]
    fn infinite_bar_has_arrow() {
        let b = Barcode::from_bars([Bar::new(Extended::Finite(qi(0)), Extended::PosInf)]);
        assert_eq!(barcode_text(&b), "0 inf 1\n");
        let svg = barcode_svg(&b);
        assert_eq!(svg.matches("marker-end=\"url(#arrow)\"").count(), 1);
        assert_eq!(svg, barcode_svg(&b.clone()));
    }
}
