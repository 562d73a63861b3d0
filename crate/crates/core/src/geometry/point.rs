use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Result};

/// A location (or displacement) in 2 or 3 dimensions.
///
/// 2D points carry a zero third coordinate so that all arithmetic runs on the same
/// three-component path.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: u8,
}

impl Point {
    pub const fn xy(x: f64, y: f64) -> Self {
        Point { coords: [x, y, 0.0], dim: 2 }
    }

    pub const fn xyz(x: f64, y: f64, z: f64) -> Self {
        Point { coords: [x, y, z], dim: 3 }
    }

    /// Builds a point from 2 or 3 finite coordinates.
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite coordinate in {coords:?}")));
        }
        match *coords {
            [x, y] => Ok(Point::xy(x, y)),
            [x, y, z] => Ok(Point::xyz(x, y, z)),
            _ => Err(invalid(format!("points must have 2 or 3 coordinates, got {}", coords.len()))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim()]
    }

    pub(crate) fn raw(&self) -> &[f64; 3] {
        &self.coords
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn z(&self) -> f64 {
        self.coords[2]
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, o: &Point) -> f64 {
        self.coords[0] * o.coords[0] + self.coords[1] * o.coords[1] + self.coords[2] * o.coords[2]
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist2(&self, o: &Point) -> f64 {
        (*self - *o).norm2()
    }

    pub fn dist(&self, o: &Point) -> f64 {
        self.dist2(o).sqrt()
    }

    /// `self + t (o - self)`, returning the endpoints exactly at `t = 0` and `t = 1`.
    pub fn lerp(&self, o: &Point, t: f64) -> Point {
        if t == 0.0 {
            *self
        } else if t == 1.0 {
            *o
        } else {
            *self + (*o - *self) * t
        }
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point {
            coords: [self.coords[0] + o.coords[0], self.coords[1] + o.coords[1], self.coords[2] + o.coords[2]],
            dim: self.dim.max(o.dim),
        }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point {
            coords: [self.coords[0] - o.coords[0], self.coords[1] - o.coords[1], self.coords[2] - o.coords[2]],
            dim: self.dim.max(o.dim),
        }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point { coords: [self.coords[0] * s, self.coords[1] * s, self.coords[2] * s], dim: self.dim }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}
