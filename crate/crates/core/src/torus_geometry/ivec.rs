//! Small exact helpers for integer 3-vectors.

use nalgebra::Vector3;

pub type IVec3 = [i64; 3];

pub fn dot(a: &IVec3, b: &IVec3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn dot_wide(a: &IVec3, b: &IVec3) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn cross(a: &IVec3, b: &IVec3) -> IVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn det3(a: &IVec3, b: &IVec3, c: &IVec3) -> i64 {
    dot(&cross(a, b), c)
}

pub fn add(a: &IVec3, b: &IVec3) -> IVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &IVec3, b: &IVec3) -> IVec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(s: i64, a: &IVec3) -> IVec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn neg(a: &IVec3) -> IVec3 {
    [-a[0], -a[1], -a[2]]
}

pub fn is_zero(a: &IVec3) -> bool {
    a.iter().all(|&x| x == 0)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn content(a: &IVec3) -> i64 {
    gcd(gcd(a[0], a[1]), a[2])
}

pub fn is_primitive(a: &IVec3) -> bool {
    content(a) == 1
}

pub fn to_real(a: &IVec3) -> Vector3<f64> {
    Vector3::new(a[0] as f64, a[1] as f64, a[2] as f64)
}

pub fn norm_sq(a: &IVec3) -> i64 {
    dot(a, a)
}

pub fn norm(a: &IVec3) -> f64 {
    (norm_sq(a) as f64).sqrt()
}
