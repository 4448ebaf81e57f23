//! Scalar values carrying a certified absolute error.
//!
//! A `Certified` stands for the interval `[value - err, value + err]`
//! guaranteed to contain the true quantity. Arithmetic widens the error so
//! containment is preserved; monotone maps transform the interval endpoints
//! directly rather than linearizing, so no smallness assumption is needed.

/// A value together with a rigorous symmetric error bound.
#[derive(Clone, Copy, Debug)]
pub struct Certified {
    pub value: f64,
    pub err: f64,
}

/// Relative slop folded in by the nonlinear maps to cover their own
/// floating-point rounding.
const MAP_ROUNDING_REL: f64 = 4.0 * f64::EPSILON;

impl Certified {
    pub fn exact(value: f64) -> Self {
        Certified { value, err: 0.0 }
    }

    pub fn new(value: f64, err: f64) -> Self {
        assert!(err >= 0.0 && err.is_finite(), "error bound must be finite and nonnegative");
        Certified { value, err }
    }

    pub fn lower(self) -> f64 {
        self.value - self.err
    }

    pub fn upper(self) -> f64 {
        self.value + self.err
    }

    pub fn add(self, other: Self) -> Self {
        Certified::new(self.value + other.value, self.err + other.err)
    }

    pub fn sub(self, other: Self) -> Self {
        Certified::new(self.value - other.value, self.err + other.err)
    }

    pub fn mul(self, other: Self) -> Self {
        let err =
            self.value.abs() * other.err + other.value.abs() * self.err + self.err * other.err;
        Certified::new(self.value * other.value, err)
    }

    /// Multiplication by an exact constant.
    pub fn scale(self, c: f64) -> Self {
        Certified::new(self.value * c, self.err * c.abs())
    }

    pub fn square(self) -> Self {
        self.mul(self)
    }

    pub fn abs(self) -> Self {
        // When the interval crosses zero, |x| ranges over [0, |v| + e];
        // keeping the center at |v| needs err >= max(e, |v|).
        let err = if self.value.abs() >= self.err { self.err } else { self.err.max(self.value.abs()) };
        Certified::new(self.value.abs(), err)
    }

    pub fn max(self, other: Self) -> Self {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().max(other.upper());
        let value = self.value.max(other.value);
        Certified::new(value, (value - lo).max(hi - value))
    }

    pub fn min(self, other: Self) -> Self {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().min(other.upper());
        let value = self.value.min(other.value);
        Certified::new(value, (value - lo).max(hi - value))
    }

    fn map_increasing(self, f: impl Fn(f64) -> f64) -> Self {
        let value = f(self.value);
        let lo = f(self.lower());
        let hi = f(self.upper());
        let err = (value - lo).max(hi - value) + MAP_ROUNDING_REL * value.abs();
        Certified::new(value, err.max(0.0))
    }

    fn map_decreasing(self, f: impl Fn(f64) -> f64) -> Self {
        let value = f(self.value);
        let lo = f(self.upper());
        let hi = f(self.lower());
        let err = (value - lo).max(hi - value) + MAP_ROUNDING_REL * value.abs();
        Certified::new(value, err.max(0.0))
    }

    /// Square root of a nonnegative quantity; the interval is clamped at 0
    /// before mapping, so slightly negative lower ends are harmless.
    pub fn sqrt(self) -> Self {
        Certified::new(self.value.max(0.0), self.err).map_increasing(|x| x.max(0.0).sqrt())
    }

    /// `x^t` for a nonnegative quantity and fixed `t > 0`.
    pub fn powf(self, t: f64) -> Self {
        assert!(t > 0.0, "exponent must be positive");
        Certified::new(self.value.max(0.0), self.err).map_increasing(|x| x.max(0.0).powf(t))
    }

    /// `sin` of an angle known to lie in `[0, pi/2]`.
    pub fn sin_angle(self) -> Self {
        self.map_increasing(|x| x.clamp(0.0, std::f64::consts::FRAC_PI_2).sin())
    }

    /// `cos` of an angle known to lie in `[0, pi/2]`.
    pub fn cos_angle(self) -> Self {
        self.map_decreasing(|x| x.clamp(0.0, std::f64::consts::FRAC_PI_2).cos())
    }

    /// `1 / sin` of an angle in `(0, pi/2]`; the interval's lower end must
    /// stay strictly positive.
    pub fn csc_angle(self) -> Self {
        assert!(self.lower() > 0.0, "csc needs an angle bounded away from 0");
        self.map_decreasing(|x| 1.0 / x.min(std::f64::consts::FRAC_PI_2).sin())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(c: Certified, truth: f64) -> bool {
        c.lower() <= truth && truth <= c.upper()
    }

    #[test]
    fn arithmetic_preserves_containment() {
        let a = Certified::new(2.0, 0.1); // true value 1.95
        let b = Certified::new(3.0, 0.2); // true value 3.15
        assert!(contains(a.add(b), 1.95 + 3.15));
        assert!(contains(a.sub(b), 1.95 - 3.15));
        assert!(contains(a.mul(b), 1.95 * 3.15));
        assert!(contains(a.scale(-2.5), 1.95 * -2.5));
        assert!(contains(a.square(), 1.95 * 1.95));
    }

    #[test]
    fn mul_error_covers_worst_corner() {
        let a = Certified::new(2.0, 0.5);
        let b = Certified::new(-1.0, 0.5);
        let p = a.mul(b);
        for x in [a.lower(), a.upper()] {
            for y in [b.lower(), b.upper()] {
                assert!(contains(p, x * y), "corner {x}*{y}");
            }
        }
    }

    #[test]
    fn abs_handles_sign_straddling() {
        let c = Certified::new(-0.05, 0.2).abs();
        // True |x| can be anything in [0, 0.25].
        assert!(c.lower() <= 0.0 + 1e-15);
        assert!(c.upper() >= 0.25 - 1e-15);
        let d = Certified::new(-3.0, 0.1).abs();
        assert!((d.value - 3.0).abs() < 1e-15 && (d.err - 0.1).abs() < 1e-15);
    }

    #[test]
    fn max_min_cover_overlapping_intervals() {
        let a = Certified::new(1.0, 0.5);
        let b = Certified::new(1.2, 0.1);
        for (x, y) in [(0.6f64, 1.1), (1.5, 1.3), (0.9, 1.25)] {
            assert!(contains(a.max(b), x.max(y)));
            assert!(contains(a.min(b), x.min(y)));
        }
    }

    #[test]
    fn sqrt_is_exact_interval_transform() {
        let c = Certified::new(4.0, 0.5).sqrt();
        assert!(contains(c, 3.5f64.sqrt()));
        assert!(contains(c, 4.5f64.sqrt()));
        // Near zero the clamp keeps things finite and sound.
        let d = Certified::new(1e-14, 1e-13).sqrt();
        assert!(d.lower() <= 0.0 + 1e-18);
        assert!(d.upper() >= (1.1e-13f64).sqrt() - 1e-18);
    }

    #[test]
    fn powf_matches_endpoints() {
        let c = Certified::new(2.0, 0.3).powf(0.25);
        assert!(contains(c, 1.7f64.powf(0.25)));
        assert!(contains(c, 2.3f64.powf(0.25)));
    }

    #[test]
    fn trig_maps_respect_monotonicity() {
        let ang = Certified::new(0.6, 0.05);
        let s = ang.sin_angle();
        assert!(contains(s, 0.55f64.sin()) && contains(s, 0.65f64.sin()));
        let c = ang.cos_angle();
        assert!(contains(c, 0.55f64.cos()) && contains(c, 0.65f64.cos()));
        let k = ang.csc_angle();
        assert!(contains(k, 1.0 / 0.55f64.sin()) && contains(k, 1.0 / 0.65f64.sin()));
        // csc is decreasing: the upper end comes from the smaller angle.
        assert!(k.upper() >= 1.0 / 0.55f64.sin());
    }

    #[test]
    #[should_panic(expected = "csc needs an angle")]
    fn csc_rejects_intervals_touching_zero() {
        let _ = Certified::new(1e-7, 1e-6).csc_angle();
    }
}
