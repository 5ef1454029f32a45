//! Braid diagrams as SVG.
//!
//! Time runs downward, one row per letter. In letter `i > 0` the strand
//! coming from position `i` moves left over the strand coming from `i-1`;
//! the under strand is drawn with a gap. Output depends only on the word,
//! the labels and the title, so diagrams can be diffed.

use std::fmt::Write;

use crate::braid::BraidWord;

const COLUMN: f64 = 40.0;
const ROW: f64 = 36.0;
const MARGIN: f64 = 24.0;
const HEADER: f64 = 44.0;
const GAP: f64 = 0.22;

fn color(strand: usize, strands: usize) -> String {
    let hue = (strand as f64 * 360.0 / strands.max(1) as f64).round() as i64 % 360;
    format!("hsl({hue},65%,40%)")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn line(out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
    let _ = writeln!(out, r#"    <line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="{stroke}"/>"#);
}

/// Render `word`; `labels[k]` names the strand starting at position `k`.
pub fn render_braid(word: &BraidWord, labels: &[String], title: &str) -> String {
    let n = word.strands();
    let x = |pos: usize| MARGIN + COLUMN * pos as f64;
    let rows = word.len().max(1);
    let width = 2.0 * MARGIN + COLUMN * (n.saturating_sub(1)) as f64;
    let height = HEADER + ROW * rows as f64 + MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(out, r#"  <g font-family="sans-serif" font-size="11" text-anchor="middle">"#);
    for pos in 0..n {
        let label = labels.get(pos).cloned().unwrap_or_else(|| pos.to_string());
        let _ = writeln!(out, r#"    <text x="{:.1}" y="{:.1}" fill="{}">{}</text>"#, x(pos), HEADER - 16.0, color(pos, n), escape(&label));
    }
    let _ = writeln!(out, "  </g>");
    // strand_at[pos] = starting position of the strand now at pos
    let mut strand_at: Vec<usize> = (0..n).collect();
    let _ = writeln!(out, r#"  <g fill="none" stroke-width="2.5" stroke-linecap="round">"#);
    if word.is_empty() {
        for pos in 0..n {
            line(&mut out, x(pos), HEADER - 8.0, x(pos), HEADER + ROW, &color(pos, n));
        }
    }
    for (k, &letter) in word.letters().iter().enumerate() {
        let (y0, y1) = (HEADER + ROW * k as f64, HEADER + ROW * (k + 1) as f64);
        let top = if k == 0 { HEADER - 8.0 } else { y0 };
        if k == 0 {
            for (pos, &s) in strand_at.iter().enumerate() {
                line(&mut out, x(pos), top, x(pos), y0, &color(s, n));
            }
        }
        let i = letter.unsigned_abs() as usize;
        let (l, r) = (i - 1, i);
        for pos in (0..n).filter(|&p| p != l && p != r) {
            line(&mut out, x(pos), y0, x(pos), y1, &color(strand_at[pos], n));
        }
        let sign = if letter > 0 { "positive" } else { "negative" };
        let _ = writeln!(out, r#"    <g class="crossing {sign}" data-letter="{letter}">"#);
        let (left_strand, right_strand) = (strand_at[l], strand_at[r]);
        // positive: the strand moving left (from r) is over
        let (over_from, under_from) = if letter > 0 { (r, l) } else { (l, r) };
        let over_color = color(if letter > 0 { right_strand } else { left_strand }, n);
        let under_color = color(if letter > 0 { left_strand } else { right_strand }, n);
        let over_to = if over_from == r { l } else { r };
        let under_to = if under_from == r { l } else { r };
        line(&mut out, x(over_from), y0, x(over_to), y1, &over_color);
        let (ux0, ux1) = (x(under_from), x(under_to));
        let cut = 0.5 - GAP;
        let lerp = |t: f64| (ux0 + (ux1 - ux0) * t, y0 + (y1 - y0) * t);
        let (ax, ay) = lerp(cut);
        let (bx, by) = lerp(1.0 - cut);
        line(&mut out, ux0, y0, ax, ay, &under_color);
        line(&mut out, bx, by, ux1, y1, &under_color);
        let _ = writeln!(out, "    </g>");
        strand_at.swap(l, r);
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    out
}

/// Number of crossing glyphs in a rendered diagram.
pub fn count_crossings(svg: &str) -> (usize, usize) {
    (svg.matches(r#"class="crossing positive""#).count(), svg.matches(r#"class="crossing negative""#).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_glyph_per_letter() {
        let w = BraidWord::new(3, vec![1, -2]).unwrap();
        let labels: Vec<String> = (0..3).map(|t| format!("Y_{t}")).collect();
        let svg = render_braid(&w, &labels, "test");
        assert_eq!(count_crossings(&svg), (1, 1));
        let first = svg.find("crossing positive").unwrap();
        let second = svg.find("crossing negative").unwrap();
        assert!(first < second);
        assert!(svg.contains(">Y_2</text>"));
        assert_eq!(svg, render_braid(&w, &labels, "test"));
    }

    #[test]
    fn empty_word_is_parallel_strands() {
        let svg = render_braid(&BraidWord::identity(4), &[], "id");
        assert_eq!(count_crossings(&svg), (0, 0));
        assert_eq!(svg.matches("<line").count(), 4);
    }
}
