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

//! Exact non-negative rationals for support and confidence values.
//!
//! A `Fraction` keeps the numerator and denominator it was built from, so a
//! support of `1077/2727` still carries its absolute counts. Equality,
//! ordering and hashing all work on the reduced value.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_integer::Integer;

use crate::error::Error;

#[derive(Debug, Clone, Copy)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    /// Returns `None` when `den` is zero.
    pub fn new(num: u64, den: u64) -> Option<Self> {
        (den != 0).then_some(Fraction { num, den })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn reduced(&self) -> Fraction {
        let g = self.num.gcd(&self.den).max(1);
        Fraction {
            num: self.num / g,
            den: self.den / g,
        }
    }

    /// `ceil(self * n)`, the smallest count meeting this fraction of `n`.
    pub fn ceil_of(&self, n: u64) -> u64 {
        let prod = self.num as u128 * n as u128;
        prod.div_ceil(self.den as u128) as u64
    }

    /// Exact decimal text when the value has a terminating expansion.
    pub fn to_decimal(&self) -> Option<String> {
        let r = self.reduced();
        let mut den = r.den;
        let (mut twos, mut fives) = (0u32, 0u32);
        while den % 2 == 0 {
            den /= 2;
            twos += 1;
        }
        while den % 5 == 0 {
            den /= 5;
            fives += 1;
        }
        if den != 1 {
            return None;
        }
        let digits = twos.max(fives);
        let int = r.num / r.den;
        let rem = r.num % r.den;
        if digits == 0 || rem == 0 {
            return Some(int.to_string());
        }
        let mut text = format!("{int}.");
        let mut rem = rem as u128;
        let den = r.den as u128;
        for _ in 0..digits {
            rem *= 10;
            text.push(char::from(b'0' + (rem / den) as u8));
            rem %= den;
        }
        while text.ends_with('0') {
            text.pop();
        }
        Some(text)
    }

    /// `J/T` text using the stored (unreduced) counts.
    pub fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.num, self.den)
    }

    fn cross(&self, other: &Fraction) -> (u128, u128) {
        (
            self.num as u128 * other.den as u128,
            other.num as u128 * self.den as u128,
        )
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.cross(other);
        a == b
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.cross(other);
        a.cmp(&b)
    }
}

impl Hash for Fraction {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let r = self.reduced();
        r.num.hash(state);
        r.den.hash(state);
    }
}

/// Terminating values print as decimals, everything else as `J/T`.
impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal() {
            Some(d) => f.write_str(&d),
            None => f.write_str(&self.to_ratio_string()),
        }
    }
}

/// Accepts `0.15`, `1`, `.5` and `409/2727`.
impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidFraction(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num = n.trim().parse::<u64>().map_err(|_| bad())?;
            let den = d.trim().parse::<u64>().map_err(|_| bad())?;
            return Fraction::new(num, den).ok_or_else(bad);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int_val: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int_val
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ok(Fraction { num, den })
    }
}
