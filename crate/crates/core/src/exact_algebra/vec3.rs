use std::fmt;

use super::{AlgebraError, QuadRat};

/// A 3-vector over ℚ(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vec3Exact {
    pub x: QuadRat,
    pub y: QuadRat,
    pub z: QuadRat,
}

impl Vec3Exact {
    pub fn new(x: QuadRat, y: QuadRat, z: QuadRat) -> Self {
        Vec3Exact { x, y, z }
    }

    /// Shorthand for vectors with components `a + b√2`, `a, b` integers.
    pub fn from_pairs(c: [(i64, i64); 3]) -> Self {
        let [x, y, z] = c.map(|(a, b)| QuadRat::from_integers(a, b));
        Vec3Exact { x, y, z }
    }

    pub fn components(&self) -> [&QuadRat; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &QuadRat) -> Self {
        Vec3Exact::new(k * &self.x, k * &self.y, k * &self.z)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

impl fmt::Display for Vec3Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn dot(u: &Vec3Exact, v: &Vec3Exact) -> QuadRat {
    &(&(&u.x * &v.x) + &(&u.y * &v.y)) + &(&u.z * &v.z)
}

/// Cross product; fails when the inputs are parallel (or either is zero).
pub fn cross(u: &Vec3Exact, v: &Vec3Exact) -> Result<Vec3Exact, AlgebraError> {
    let w = Vec3Exact::new(
        &(&u.y * &v.z) - &(&u.z * &v.y),
        &(&u.z * &v.x) - &(&u.x * &v.z),
        &(&u.x * &v.y) - &(&u.y * &v.x),
    );
    if w.is_zero() {
        Err(AlgebraError::ParallelVectors)
    } else {
        Ok(w)
    }
}

/// A projective ray, stored with its first nonzero component equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray {
    v: Vec3Exact,
}

impl Ray {
    pub fn vector(&self) -> &Vec3Exact {
        &self.v
    }

    pub fn is_orthogonal(&self, other: &Ray) -> bool {
        dot(&self.v, &other.v).is_zero()
    }

    /// Unit-normalized floating-point representative.
    pub fn to_unit_f64(&self) -> [f64; 3] {
        let c = self.v.to_f64();
        let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        c.map(|x| x / n)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.v.fmt(f)
    }
}

pub fn canonicalize(v: &Vec3Exact) -> Result<Ray, AlgebraError> {
    let lead = v.components().into_iter().find(|c| !c.is_zero()).ok_or(AlgebraError::ZeroVector)?;
    let k = lead.inv()?;
    Ok(Ray { v: v.scale(&k) })
}

impl TryFrom<Vec3Exact> for Ray {
    type Error = AlgebraError;
    fn try_from(v: Vec3Exact) -> Result<Self, Self::Error> {
        canonicalize(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: [(i64, i64); 3]) -> Vec3Exact {
        Vec3Exact::from_pairs(c)
    }

    #[test]
    fn dot_examples() {
        assert!(dot(&v([(1, 0), (0, 0), (0, 0)]), &v([(0, 0), (1, 0), (0, 0)])).is_zero());
        assert!(dot(&v([(0, 0), (1, 0), (1, 0)]), &v([(0, 0), (1, 0), (-1, 0)])).is_zero());
        let w = v([(1, 0), (1, 0), (0, 1)]);
        assert_eq!(dot(&w, &w), QuadRat::integer(4));
    }

    #[test]
    fn cross_examples() {
        let e1 = v([(1, 0), (0, 0), (0, 0)]);
        let e2 = v([(0, 0), (1, 0), (0, 0)]);
        assert_eq!(cross(&e1, &e2).unwrap(), v([(0, 0), (0, 0), (1, 0)]));

        let c = cross(&v([(0, 0), (1, 0), (1, 0)]), &v([(0, 0), (1, 0), (-1, 0)])).unwrap();
        assert_eq!(canonicalize(&c).unwrap().vector(), &e1);

        assert_eq!(cross(&e1, &e1), Err(AlgebraError::ParallelVectors));
    }

    #[test]
    fn canonical_forms() {
        let r = canonicalize(&v([(0, 0), (2, 0), (2, 0)])).unwrap();
        assert_eq!(r.vector(), &v([(0, 0), (1, 0), (1, 0)]));

        let r = canonicalize(&v([(0, 0), (-1, 0), (0, 1)])).unwrap();
        assert_eq!(r.vector(), &v([(0, 0), (1, 0), (0, -1)]));

        let r = canonicalize(&v([(0, 1), (0, 1), (0, 1)])).unwrap();
        assert_eq!(r.vector(), &v([(1, 0), (1, 0), (1, 0)]));

        assert_eq!(canonicalize(&Vec3Exact::default()), Err(AlgebraError::ZeroVector));
    }
}
