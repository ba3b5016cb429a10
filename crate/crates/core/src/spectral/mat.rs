use std::ops::Mul;

/// `[[a, b], [c, d]]` acting on column vectors `(u, u')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Jump `u'(x+) - u'(x-) = c u(x)` across an atom of weight `c`.
    pub fn atom(c: f64) -> Self {
        Mat2 { a: 1.0, b: 0.0, c, d: 1.0 }
    }

    /// Solution propagator of `-u'' + v u = E u` over length `l`, with
    /// `q = E - v`. Elliptic for `q > 0`, hyperbolic for `q < 0`, shear at
    /// `q = 0`.
    pub fn segment(q: f64, l: f64) -> Self {
        if q == 0.0 {
            return Mat2 { a: 1.0, b: l, c: 0.0, d: 1.0 };
        }
        if q > 0.0 {
            let k = q.sqrt();
            let (s, c) = (k * l).sin_cos();
            Mat2 { a: c, b: l * sinc(k * l), c: -k * s, d: c }
        } else {
            let k = (-q).sqrt();
            let x = k * l;
            let ch = x.cosh();
            Mat2 { a: ch, b: l * sinhc(x), c: k * x.sinh(), d: ch }
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn frobenius(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2 { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, o: &Mat2) -> f64 {
        (self.a - o.a).abs().max((self.b - o.b).abs()).max((self.c - o.c).abs()).max((self.d - o.d).abs())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// `sin(x) / x`, series near 0.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sinh(x) / x`, series near 0.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// A product kept as a unit-Frobenius matrix times `exp(logscale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMat2 {
    m: Mat2,
    logscale: f64,
}

impl Default for ScaledMat2 {
    fn default() -> Self {
        ScaledMat2::identity()
    }
}

impl ScaledMat2 {
    pub fn identity() -> Self {
        ScaledMat2 { m: Mat2::IDENTITY, logscale: 0.0 }
    }

    /// Multiplies `f` on the left and renormalizes.
    pub fn push(&mut self, f: &Mat2) {
        let p = *f * self.m;
        let n = p.frobenius();
        self.m = p.scale(1.0 / n);
        self.logscale += n.ln();
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn logscale(&self) -> f64 {
        self.logscale
    }

    /// Trace of the normalized matrix; the true trace is this times
    /// `exp(logscale)`.
    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn true_trace(&self) -> f64 {
        self.m.trace() * self.logscale.exp()
    }

    /// The unscaled product (may overflow for long products).
    pub fn recompose(&self) -> Mat2 {
        self.m.scale(self.logscale.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_at_pi_squared() {
        let m = Mat2::segment(PI * PI, 1.0);
        assert!(m.max_diff(&Mat2::new(-1.0, 0.0, 0.0, -1.0)) < 1e-15);
    }

    #[test]
    fn shear_and_small_k() {
        assert_eq!(Mat2::segment(0.0, 1.0), Mat2::new(1.0, 1.0, 0.0, 1.0));
        let near = Mat2::segment(1e-14, 1.0);
        assert!(near.max_diff(&Mat2::new(1.0, 1.0, 0.0, 1.0)) < 1e-12);
        let neg = Mat2::segment(-1e-14, 1.0);
        assert!(neg.max_diff(&Mat2::new(1.0, 1.0, 0.0, 1.0)) < 1e-12);
        assert!((Mat2::segment(-9.0, 2.0).det() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scaled_matches_plain_product() {
        let fs = [Mat2::atom(2.0), Mat2::segment(4.0, 1.0), Mat2::segment(-2.0, 0.7)];
        let mut plain = Mat2::IDENTITY;
        let mut sc = ScaledMat2::identity();
        for f in fs.iter().cycle().take(30) {
            plain = *f * plain;
            sc.push(f);
        }
        let r = sc.recompose();
        assert!(r.max_diff(&plain) <= 1e-9 * plain.max_abs());
    }
}
