//! Minimal 2-D vector for cross-section geometry.
//!
//! Coordinates are micrometres with `y` pointing up; the wafer surface is
//! the line `y = 0` so etched features carry negative `y`.

use serde::{Deserialize, Serialize};

/// A 2-D point or direction in the cross-section plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    /// Unit vector in the same direction. Zero vectors are returned unchanged.
    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self.scale(1.0 / n)
        }
    }

    /// Distance from `self` to the line through `a` and `b`.
    pub fn distance_to_line(self, a: Self, b: Self) -> f64 {
        let d = b - a;
        let len = d.norm();
        debug_assert!(len > 0.0, "degenerate line");
        ((self.x - a.x) * d.y - (self.y - a.y) * d.x).abs() / len
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}
