//! Fast-marching inpainting.
//!
//! Hole pixels are visited in increasing arrival time of a front that starts
//! on the hole boundary. Each pixel is filled from already-known neighbors
//! within the inpainting radius by a weighted first-order extrapolation; the
//! weights combine alignment with the front normal, geometric distance and
//! arrival-time difference.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::image::{ImageBuffer, PixelRegion};

const FAR: f64 = 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flag {
    Known,
    Band,
    Inside,
}

#[derive(Debug, PartialEq)]
struct Front {
    t: f64,
    idx: usize,
}

impl Eq for Front {}

impl Ord for Front {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on arrival time, ties by raster index.
        other.t.total_cmp(&self.t).then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Front {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Working state of one fast-marching fill, `f64` samples per channel.
pub(crate) struct Telea<'a> {
    w: usize,
    h: usize,
    ch: usize,
    radius: f64,
    flags: Vec<Flag>,
    t: Vec<f64>,
    values: &'a mut [f64],
}

impl<'a> Telea<'a> {
    pub(crate) fn new(
        w: usize,
        h: usize,
        ch: usize,
        hole: &PixelRegion,
        radius: f64,
        values: &'a mut [f64],
    ) -> Self {
        let flags = hole
            .members()
            .iter()
            .map(|&m| if m { Flag::Inside } else { Flag::Known })
            .collect();
        let t = hole
            .members()
            .iter()
            .map(|&m| if m { FAR } else { 0.0 })
            .collect();
        Self {
            w,
            h,
            ch,
            radius,
            flags,
            t,
            values,
        }
    }

    fn neighbors4(&self, idx: usize) -> impl Iterator<Item = usize> {
        let (w, h) = (self.w, self.h);
        let (x, y) = (idx % w, idx / w);
        [
            (x > 0).then(|| idx - 1),
            (x + 1 < w).then(|| idx + 1),
            (y > 0).then(|| idx - w),
            (y + 1 < h).then(|| idx + w),
        ]
        .into_iter()
        .flatten()
    }

    fn known(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.w
            && (y as usize) < self.h
            && self.flags[y as usize * self.w + x as usize] != Flag::Inside
    }

    fn time(&self, x: isize, y: isize) -> (f64, bool) {
        if self.known(x, y) {
            (self.t[y as usize * self.w + x as usize], true)
        } else {
            (FAR, false)
        }
    }

    /// First-order upwind solution of `|grad T| = 1` from one horizontal and
    /// one vertical neighbor.
    fn solve_pair(a: (f64, bool), b: (f64, bool)) -> f64 {
        match (a, b) {
            ((t1, true), (t2, true)) => {
                let d = t1 - t2;
                if d * d >= 2.0 {
                    1.0 + t1.min(t2)
                } else {
                    let r = (2.0 - d * d).sqrt();
                    let s = (t1 + t2 + r) / 2.0;
                    if s >= t1 && s >= t2 {
                        s
                    } else {
                        1.0 + t1.min(t2)
                    }
                }
            }
            ((t1, true), _) => 1.0 + t1,
            (_, (t2, true)) => 1.0 + t2,
            _ => FAR,
        }
    }

    fn arrival_time(&self, idx: usize) -> f64 {
        let (x, y) = ((idx % self.w) as isize, (idx / self.w) as isize);
        let left = self.time(x - 1, y);
        let right = self.time(x + 1, y);
        let up = self.time(x, y - 1);
        let down = self.time(x, y + 1);
        [
            Self::solve_pair(left, up),
            Self::solve_pair(right, up),
            Self::solve_pair(left, down),
            Self::solve_pair(right, down),
        ]
        .into_iter()
        .fold(FAR, f64::min)
    }

    /// Central difference where both sides are known, one-sided otherwise.
    fn gradient(&self, x: isize, y: isize, f: impl Fn(usize) -> f64) -> (f64, f64) {
        let at = |x: isize, y: isize| f(y as usize * self.w + x as usize);
        let axis = |dx: isize, dy: isize| {
            let fwd = self.known(x + dx, y + dy);
            let back = self.known(x - dx, y - dy);
            match (fwd, back) {
                (true, true) => 0.5 * (at(x + dx, y + dy) - at(x - dx, y - dy)),
                (true, false) => at(x + dx, y + dy) - at(x, y),
                (false, true) => at(x, y) - at(x - dx, y - dy),
                (false, false) => 0.0,
            }
        };
        (axis(1, 0), axis(0, 1))
    }

    fn fill(&mut self, idx: usize) {
        let (px, py) = ((idx % self.w) as isize, (idx / self.w) as isize);
        let (gtx, gty) = self.gradient(px, py, |i| self.t[i]);
        let gt_len = gtx.hypot(gty);
        let t_here = self.t[idx];
        let reach = self.radius.ceil() as isize;
        let r2_max = self.radius * self.radius;

        for c in 0..self.ch {
            let mut acc = 0.0;
            let mut weight_sum = 0.0;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for qy in py - reach..=py + reach {
                for qx in px - reach..=px + reach {
                    if (qx, qy) == (px, py) || !self.known(qx, qy) {
                        continue;
                    }
                    let (rx, ry) = ((px - qx) as f64, (py - qy) as f64);
                    let r2 = rx * rx + ry * ry;
                    if r2 > r2_max {
                        continue;
                    }
                    let q = qy as usize * self.w + qx as usize;
                    let r_len = r2.sqrt();
                    let dir = if gt_len > 1e-12 {
                        ((rx * gtx + ry * gty) / (r_len * gt_len)).abs().max(1e-6)
                    } else {
                        1.0
                    };
                    let dst = 1.0 / r2;
                    let lev = 1.0 / (1.0 + (self.t[q] - t_here).abs());
                    let wgt = dir * dst * lev;

                    let value = self.values[q * self.ch + c];
                    let (gx, gy) = self.gradient(qx, qy, |i| self.values[i * self.ch + c]);
                    acc += wgt * (value + gx * rx + gy * ry);
                    weight_sum += wgt;
                    lo = lo.min(value);
                    hi = hi.max(value);
                }
            }
            if weight_sum > 0.0 {
                self.values[idx * self.ch + c] = (acc / weight_sum).clamp(lo, hi);
            }
        }
    }

    /// Runs the march to completion. Every hole pixel reachable from the
    /// boundary is filled.
    pub(crate) fn run(mut self) {
        let mut heap = BinaryHeap::new();
        for idx in 0..self.w * self.h {
            if self.flags[idx] == Flag::Known && self.neighbors4(idx).any(|n| self.flags[n] == Flag::Inside) {
                self.flags[idx] = Flag::Band;
                heap.push(Front { t: 0.0, idx });
            }
        }
        while let Some(Front { idx, .. }) = heap.pop() {
            if self.flags[idx] == Flag::Known {
                continue;
            }
            self.flags[idx] = Flag::Known;
            let inside: Vec<usize> = self
                .neighbors4(idx)
                .filter(|&n| self.flags[n] == Flag::Inside)
                .collect();
            for n in inside {
                self.t[n] = self.arrival_time(n);
                self.fill(n);
                self.flags[n] = Flag::Band;
                heap.push(Front { t: self.t[n], idx: n });
            }
        }
    }
}

/// Fast-marching fill of `hole` on `f64` samples; returns the samples.
pub(crate) fn telea_fill(img: &ImageBuffer, hole: &PixelRegion, radius: f64) -> Vec<f64> {
    let mut values: Vec<f64> = img.data().iter().map(|&v| f64::from(v)).collect();
    Telea::new(
        img.width(),
        img.height(),
        img.channels(),
        hole,
        radius,
        &mut values,
    )
    .run();
    values
}
