// Copyright 2026 The courtmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Court tessellation: coordinates → interval indices.
//!
//! Each axis is split into `n` equal inner intervals across the court plus
//! one band on each side outside it, numbered `1 ..= n + 2`. Inner
//! intervals are half-open `[lo, hi)` except the last, which is closed at
//! the court line (a ball on the line is in). Index 1 lies on the negative
//! side of the origin.

use crate::error::{Error, Result};

/// Standard singles court width in meters.
pub const SINGLES_WIDTH: f64 = 8.23;
/// Standard court length in meters.
pub const COURT_LENGTH: f64 = 23.77;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tessellation {
    pub n_x: u32,
    pub n_y: u32,
    pub half_width: f64,
    pub half_length: f64,
}

impl Default for Tessellation {
    /// A 4 × 6 grid over a singles court centred on the origin.
    fn default() -> Self {
        Tessellation {
            n_x: 4,
            n_y: 6,
            half_width: SINGLES_WIDTH / 2.0,
            half_length: COURT_LENGTH / 2.0,
        }
    }
}

impl Tessellation {
    pub fn new(n_x: u32, n_y: u32, width: f64, length: f64) -> Result<Self> {
        let t = Tessellation {
            n_x,
            n_y,
            half_width: width / 2.0,
            half_length: length / 2.0,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x == 0 || self.n_y == 0 {
            return Err(Error::InvalidTessellation("grid needs at least one cell per axis".into()));
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0)
            || !(self.half_length.is_finite() && self.half_length > 0.0)
        {
            return Err(Error::InvalidTessellation("court dimensions must be positive".into()));
        }
        Ok(())
    }

    /// `(Ix, Iy)` for a bounce at `(x, y)`.
    pub fn cell(&self, x: f64, y: f64) -> Result<(u32, u32)> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteCoordinate { x, y });
        }
        self.validate()?;
        Ok((
            axis_index(x, self.half_width, self.n_x),
            axis_index(y, self.half_length, self.n_y),
        ))
    }

    /// Inner interval boundaries along x, `n_x + 1` values from `-half` to `half`.
    pub fn x_boundaries(&self) -> Vec<f64> {
        (0..=self.n_x).map(|i| boundary(self.half_width, self.n_x, i)).collect()
    }

    pub fn y_boundaries(&self) -> Vec<f64> {
        (0..=self.n_y).map(|i| boundary(self.half_length, self.n_y, i)).collect()
    }
}

/// `i`-th inner boundary; the outermost two are exactly `±half`.
pub fn boundary(half: f64, n: u32, i: u32) -> f64 {
    if i == 0 {
        -half
    } else if i == n {
        half
    } else {
        -half + i as f64 * (2.0 * half / n as f64)
    }
}

fn axis_index(v: f64, half: f64, n: u32) -> u32 {
    if v < -half {
        return 1;
    }
    if v > half {
        return n + 2;
    }
    let width = 2.0 * half / n as f64;
    let mut cell = (((v + half) / width).floor() as i64).clamp(0, n as i64 - 1) as u32;
    // Floating point can land the estimate one cell off near a boundary.
    while cell > 0 && v < boundary(half, n, cell) {
        cell -= 1;
    }
    while cell + 1 < n && v >= boundary(half, n, cell + 1) {
        cell += 1;
    }
    cell + 2
}
