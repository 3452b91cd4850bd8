//! Symmetric Hausdorff distance between planar polylines.

fn point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt()
}

/// Distance from `p` to the polyline `line`.
pub fn point_polyline(p: [f64; 2], line: &[[f64; 2]]) -> f64 {
    match line.len() {
        0 => f64::INFINITY,
        1 => point_segment(p, line[0], line[0]),
        _ => line.windows(2).map(|w| point_segment(p, w[0], w[1])).fold(f64::INFINITY, f64::min),
    }
}

/// Largest distance from a vertex of `a` to the polyline `b`.
pub fn directed_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter().map(|&p| point_polyline(p, b)).fold(0.0, f64::max)
}

/// `max(h(a, b), h(b, a))` with point-to-segment distances.
pub fn hausdorff_distance(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Closed axis-aligned rectangle `[0, w] × [0, h]`, counterclockwise.
pub fn rectangle(w: f64, h: f64) -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [w, 0.0], [w, h], [0.0, h], [0.0, 0.0]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_distance_is_zero() {
        let sq = rectangle(1.0, 1.0);
        assert_eq!(hausdorff_distance(&sq, &sq), 0.0);
    }

    #[test]
    fn shifted_square() {
        let sq = rectangle(1.0, 1.0);
        let sh: Vec<[f64; 2]> = sq.iter().map(|p| [p[0] + 0.1, p[1]]).collect();
        assert!((hausdorff_distance(&sq, &sh) - 0.1).abs() < 1e-15);
    }
}
