//! Isophote-transport inpainting.
//!
//! Starting from the fast-marching fill, the smoothness estimate `L = lap(I)`
//! is transported along level lines: `I_t = (grad L . N) |grad I|` with
//! `N = (-I_y, I_x) / |grad I|` and a slope-limited `|grad I|`. Every
//! [`DIFFUSION_PERIOD`] transport steps the hole gets [`DIFFUSION_STEPS`]
//! Perona-Malik diffusion steps. Intensities are scaled to `[0, 1]` while
//! iterating.

/// Convergence threshold on the largest per-pixel transport update, in
/// 0–255 intensity levels.
pub const CONVERGENCE_LEVELS: f64 = 0.01;
pub const DIFFUSION_PERIOD: usize = 15;
pub const DIFFUSION_STEPS: usize = 2;
/// Edge-stopping constant of the diffusion, on the `[0, 1]` scale.
const DIFFUSION_K: f64 = 0.1;
const DIFFUSION_DT: f64 = 0.1;

pub(crate) struct Transport {
    pub(crate) w: usize,
    pub(crate) h: usize,
    /// Hole pixel indices in raster order.
    pub(crate) hole: Vec<usize>,
    /// Hole pixels plus their 4-neighbors: where the Laplacian is needed.
    pub(crate) support: Vec<usize>,
}

impl Transport {
    pub(crate) fn new(w: usize, h: usize, members: &[bool]) -> Self {
        let hole: Vec<usize> = (0..w * h).filter(|&i| members[i]).collect();
        let mut in_support = vec![false; w * h];
        for &i in &hole {
            let (x, y) = (i % w, i / w);
            in_support[i] = true;
            if x > 0 {
                in_support[i - 1] = true;
            }
            if x + 1 < w {
                in_support[i + 1] = true;
            }
            if y > 0 {
                in_support[i - w] = true;
            }
            if y + 1 < h {
                in_support[i + w] = true;
            }
        }
        let support = (0..w * h).filter(|&i| in_support[i]).collect();
        Self { w, h, hole, support }
    }

    /// Index of `(x + dx, y + dy)` with edge replication.
    #[inline]
    fn at(&self, i: usize, dx: isize, dy: isize) -> usize {
        let x = ((i % self.w) as isize + dx).clamp(0, self.w as isize - 1) as usize;
        let y = ((i / self.w) as isize + dy).clamp(0, self.h as isize - 1) as usize;
        y * self.w + x
    }

    fn laplacian(&self, plane: &[f64], lap: &mut [f64]) {
        for &i in &self.support {
            lap[i] = plane[self.at(i, 1, 0)]
                + plane[self.at(i, -1, 0)]
                + plane[self.at(i, 0, 1)]
                + plane[self.at(i, 0, -1)]
                - 4.0 * plane[i];
        }
    }

    /// One explicit transport step; returns the largest absolute update.
    fn transport_step(&self, plane: &mut [f64], lap: &mut [f64], dt: f64, updates: &mut [f64]) -> f64 {
        self.laplacian(plane, lap);
        let mut max_update: f64 = 0.0;
        for (k, &i) in self.hole.iter().enumerate() {
            let v = plane[i];
            let (xf, xb) = (plane[self.at(i, 1, 0)] - v, v - plane[self.at(i, -1, 0)]);
            let (yf, yb) = (plane[self.at(i, 0, 1)] - v, v - plane[self.at(i, 0, -1)]);
            let ix = 0.5 * (xf + xb);
            let iy = 0.5 * (yf + yb);
            let norm = ix.hypot(iy);
            if norm < 1e-12 {
                updates[k] = 0.0;
                continue;
            }
            let (nx, ny) = (-iy / norm, ix / norm);
            let dlx = 0.5 * (lap[self.at(i, 1, 0)] - lap[self.at(i, -1, 0)]);
            let dly = 0.5 * (lap[self.at(i, 0, 1)] - lap[self.at(i, 0, -1)]);
            let beta = dlx * nx + dly * ny;
            let slope = if beta > 0.0 {
                (xb.min(0.0).powi(2) + xf.max(0.0).powi(2) + yb.min(0.0).powi(2) + yf.max(0.0).powi(2)).sqrt()
            } else {
                (xb.max(0.0).powi(2) + xf.min(0.0).powi(2) + yb.max(0.0).powi(2) + yf.min(0.0).powi(2)).sqrt()
            };
            updates[k] = dt * beta * slope;
            max_update = max_update.max(updates[k].abs());
        }
        for (k, &i) in self.hole.iter().enumerate() {
            plane[i] = (plane[i] + updates[k]).clamp(0.0, 1.0);
        }
        max_update
    }

    fn diffusion_step(&self, plane: &mut [f64], updates: &mut [f64]) {
        let g = |d: f64| 1.0 / (1.0 + (d / DIFFUSION_K).powi(2));
        for (k, &i) in self.hole.iter().enumerate() {
            let v = plane[i];
            let flux: f64 = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .map(|&(dx, dy)| {
                    let d = plane[self.at(i, dx, dy)] - v;
                    g(d.abs()) * d
                })
                .sum();
            updates[k] = DIFFUSION_DT * flux;
        }
        for (k, &i) in self.hole.iter().enumerate() {
            plane[i] = (plane[i] + updates[k]).clamp(0.0, 1.0);
        }
    }

    /// Iterates one channel plane (values in `[0, 1]`). Returns the number of
    /// transport steps taken and whether the update fell below the threshold.
    pub(crate) fn run(&self, plane: &mut [f64], iterations: usize, dt: f64) -> (usize, bool) {
        if self.hole.is_empty() {
            return (0, true);
        }
        let mut lap = vec![0.0; plane.len()];
        let mut updates = vec![0.0; self.hole.len()];
        let threshold = CONVERGENCE_LEVELS / 255.0;
        for step in 1..=iterations {
            let max_update = self.transport_step(plane, &mut lap, dt, &mut updates);
            if max_update < threshold {
                return (step, true);
            }
            if step % DIFFUSION_PERIOD == 0 {
                for _ in 0..DIFFUSION_STEPS {
                    self.diffusion_step(plane, &mut updates);
                }
            }
        }
        (iterations, false)
    }
}
