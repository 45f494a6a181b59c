//! Least-squares circle fitting: an algebraic (Kåsa) initial estimate refined
//! by Gauss-Newton on geometric distances, with one trimmed refit.

use crate::mask::Circle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub circle: Circle,
    /// RMS geometric residual of the points kept for the final fit.
    pub rms_residual: f64,
    pub inliers: usize,
}

/// Solves a 3x3 linear system by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Algebraic fit minimizing `sum (x² + y² + D x + E y + F)²`.
pub fn fit_algebraic(points: &[(f64, f64)]) -> Option<Circle> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;

    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(px, py) in points {
        let (x, y) = (px - mx, py - my);
        let row = [x, y, 1.0];
        let rhs = -(x * x + y * y);
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * rhs;
        }
    }
    let [d, e, f] = solve3(ata, atb)?;
    let (cx, cy) = (-d / 2.0, -e / 2.0);
    let r2 = cx * cx + cy * cy - f;
    if r2.is_nan() || r2 <= 0.0 {
        return None;
    }
    Circle::new(cx + mx, cy + my, r2.sqrt()).ok()
}

/// Gauss-Newton on `|p - c| - r`, starting from `init`.
pub fn refine_geometric(points: &[(f64, f64)], init: Circle) -> Option<Circle> {
    let (mut cx, mut cy, mut r) = (init.cx, init.cy, init.radius);
    for _ in 0..50 {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for &(x, y) in points {
            let (dx, dy) = (x - cx, y - cy);
            let d = (dx * dx + dy * dy).sqrt().max(1e-12);
            let res = d - r;
            let jac = [-dx / d, -dy / d, -1.0];
            for i in 0..3 {
                for j in 0..3 {
                    jtj[i][j] += jac[i] * jac[j];
                }
                jtr[i] -= jac[i] * res;
            }
        }
        let step = solve3(jtj, jtr)?;
        cx += step[0];
        cy += step[1];
        r += step[2];
        if step.iter().map(|s| s.abs()).fold(0.0, f64::max) < 1e-9 {
            break;
        }
    }
    Circle::new(cx, cy, r.abs()).ok()
}

fn residuals(points: &[(f64, f64)], c: &Circle) -> Vec<f64> {
    points
        .iter()
        .map(|&(x, y)| ((x - c.cx).hypot(y - c.cy) - c.radius).abs())
        .collect()
}

fn fit_once(points: &[(f64, f64)]) -> Option<Circle> {
    let init = fit_algebraic(points)?;
    Some(refine_geometric(points, init).unwrap_or(init))
}

/// Fits all points, discards the `trim` fraction with the largest residuals
/// and refits once on the remainder.
pub fn fit_circle_trimmed(points: &[(f64, f64)], trim: f64) -> Option<CircleFit> {
    let first = fit_once(points)?;
    let res = residuals(points, &first);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| res[a].total_cmp(&res[b]));
    let keep = ((points.len() as f64) * (1.0 - trim.clamp(0.0, 0.9))).ceil() as usize;
    let kept: Vec<(f64, f64)> = order[..keep.max(3).min(points.len())]
        .iter()
        .map(|&i| points[i])
        .collect();
    let circle = fit_once(&kept)?;
    let final_res = residuals(&kept, &circle);
    let rms_residual = (final_res.iter().map(|r| r * r).sum::<f64>() / final_res.len() as f64).sqrt();
    Some(CircleFit {
        circle,
        rms_residual,
        inliers: kept.len(),
    })
}
