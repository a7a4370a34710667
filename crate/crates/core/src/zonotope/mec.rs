//! Minimum enclosing circle by randomized incremental construction.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: Complex64) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

fn from_two(a: Complex64, b: Complex64) -> Circle {
    let center = (a + b) / 2.0;
    Circle {
        center,
        radius: (a - center).norm(),
    }
}

fn from_three(a: Complex64, b: Complex64, c: Complex64) -> Circle {
    let (b, c) = (b - a, c - a);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    if d.abs() < 1e-300 {
        // collinear: the farthest pair spans the circle
        let pairs = [
            (Complex64::new(0.0, 0.0), b),
            (Complex64::new(0.0, 0.0), c),
            (b, c),
        ];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
            .unwrap();
        let circle = from_two(p, q);
        return Circle {
            center: circle.center + a,
            radius: circle.radius,
        };
    }
    let (bb, cc) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * bb - b.im * cc) / d;
    let uy = (b.re * cc - c.re * bb) / d;
    let u = Complex64::new(ux, uy);
    Circle {
        center: u + a,
        radius: u.norm(),
    }
}

/// Smallest circle containing every point. Returns `None` for an empty list.
///
/// Larger inputs are shuffled with a fixed seed, so the result is
/// deterministic.
pub fn min_enclosing_circle(points: &[Complex64]) -> Option<Circle> {
    let mut pts = points.to_vec();
    if pts.len() > 8 {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x6d65_6331);
        pts.shuffle(&mut rng);
    }
    let mut c = Circle {
        center: *pts.first()?,
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if c.contains(pts[i]) {
            continue;
        }
        c = Circle {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if c.contains(pts[j]) {
                continue;
            }
            c = from_two(pts[i], pts[j]);
            for k in 0..j {
                if !c.contains(pts[k]) {
                    c = from_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn small_cases() {
        let c = min_enclosing_circle(&[pt(0.0, 0.0)]).unwrap();
        assert_eq!(c.radius, 0.0);
        let c = min_enclosing_circle(&[pt(-1.0, 0.0), pt(1.0, 0.0)]).unwrap();
        assert!(c.center.norm() < 1e-15 && (c.radius - 1.0).abs() < 1e-15);
        assert!(min_enclosing_circle(&[]).is_none());
    }

    #[test]
    fn equilateral_triangle() {
        let h = 3f64.sqrt() / 2.0;
        let c = min_enclosing_circle(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(0.5, h)]).unwrap();
        assert!((c.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        // brute-force grid minimization of the max distance
        let mut best = f64::INFINITY;
        for i in 0..=200 {
            for j in 0..=200 {
                let z = pt(i as f64 / 200.0, j as f64 / 200.0);
                let r = [pt(0.0, 0.0), pt(1.0, 0.0), pt(0.5, h)]
                    .iter()
                    .map(|p| (p - z).norm())
                    .fold(0.0, f64::max);
                best = best.min(r);
            }
        }
        assert!(best >= c.radius - 1e-12 && best < c.radius + 1e-2);
    }

    #[test]
    fn obtuse_triangle_uses_diameter() {
        let c = min_enclosing_circle(&[pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, 0.1)]).unwrap();
        assert!((c.radius - 1.0).abs() < 1e-12);
        let c = min_enclosing_circle(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)]).unwrap();
        assert!((c.radius - 1.0).abs() < 1e-12 && (c.center - pt(1.0, 0.0)).norm() < 1e-12);
    }
}
