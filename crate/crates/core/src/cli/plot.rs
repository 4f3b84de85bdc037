use std::fmt::Write;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

fn polyline(points: &[(f64, f64)], color: &str, dash: bool) -> String {
    let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let dash = if dash { r#" stroke-dasharray="6 4""# } else { "" };
    format!(r#"<polyline fill="none" stroke="{color}" stroke-width="2"{dash} points="{}"/>"#, coords.join(" "))
}

/// Error (solid) and bound (dashed) against the resolution `r`, on a
/// log-2 horizontal axis and a linear vertical axis starting at zero.
pub fn error_curve_svg(rs: &[usize], errors: &[f64], bounds: &[f64]) -> String {
    let xs: Vec<f64> = rs.iter().map(|&r| (r.max(1) as f64).log2()).collect();
    let (x0, x1) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)));
    let span = if x1 > x0 { x1 - x0 } else { 1.0 };
    let top = errors.iter().chain(bounds).copied().fold(0.0, f64::max).max(1e-300);
    let px = |x: f64| MARGIN + (x - x0) / span * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - y / top * (HEIGHT - 2.0 * MARGIN);
    let pts = |ys: &[f64]| xs.iter().zip(ys).map(|(x, y)| (px(*x), py(*y))).collect::<Vec<_>>();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (l, b, r, t) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(svg, r#"<path d="M{l},{t} L{l},{b} L{r},{b}" fill="none" stroke="black"/>"#);
    for (x, rv) in xs.iter().zip(rs) {
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{}" font-size="12" text-anchor="middle">{rv}</text>"#, px(*x), b + 18.0);
    }
    let _ = writeln!(svg, r#"<text x="{l}" y="{}" font-size="12">{top:.3e}</text>"#, t - 8.0);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">r</text>"#, WIDTH / 2.0, HEIGHT - 8.0);
    let _ = writeln!(svg, "{}", polyline(&pts(bounds), "gray", true));
    let _ = writeln!(svg, "{}", polyline(&pts(errors), "crimson", false));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_polylines() {
        let s = error_curve_svg(&[1, 2, 4], &[0.3, 0.2, 0.1], &[6.0, 3.0, 1.5]);
        assert_eq!(s.matches("<polyline").count(), 2);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
    }
}
