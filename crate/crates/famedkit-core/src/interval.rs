//! Self-contained interval arithmetic with outward rounding, and complex
//! rectangles, for the certification of gluing equation solutions.
//!
//! Directed rounding is simulated in software: results computed in
//! round-to-nearest are widened by one ulp per endpoint (two for the libm
//! transcendentals, whose error is below one ulp). No floating point mode
//! switching, so concurrent use is safe.

use num_complex::Complex64;
use num_traits::Float;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
fn down2(x: f64) -> f64 {
    x.next_down().next_down()
}

#[inline]
fn up2(x: f64) -> f64 {
    x.next_up().next_up()
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    pub fn around(x: f64, radius: f64) -> Interval {
        Interval {
            lo: down(x - radius),
            hi: up(x + radius),
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn radius(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo > 0.0
    }

    /// Strict containment in the interior of `other`.
    pub fn inside(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: down(self.lo + o.lo),
            hi: up(self.hi + o.hi),
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: down(self.lo - o.hi),
            hi: up(self.hi - o.lo),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let cands = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let mut lo = cands[0];
        let mut hi = cands[0];
        for &c in &cands[1..] {
            if c < lo {
                lo = c;
            }
            if c > hi {
                hi = c;
            }
        }
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn square(&self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        let (lo, hi) = if self.contains_zero() {
            (0.0, a.max(b))
        } else {
            (a.min(b), a.max(b))
        };
        Interval {
            lo: if lo == 0.0 { 0.0 } else { down(lo) },
            hi: up(hi),
        }
    }

    /// Division; caller must exclude zero from the denominator.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let cands = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        let mut lo = cands[0];
        let mut hi = cands[0];
        for &c in &cands[1..] {
            if c < lo {
                lo = c;
            }
            if c > hi {
                hi = c;
            }
        }
        Some(Interval {
            lo: down(lo),
            hi: up(hi),
        })
    }

    pub fn sqrt(&self) -> Option<Interval> {
        if self.lo < 0.0 {
            return None;
        }
        Some(Interval {
            lo: down2(Float::sqrt(self.lo)).max(0.0),
            hi: up2(Float::sqrt(self.hi)),
        })
    }

    /// Natural log; requires a strictly positive interval.
    pub fn ln(&self) -> Option<Interval> {
        if self.lo <= 0.0 {
            return None;
        }
        Some(Interval {
            lo: down2(Float::ln(self.lo)),
            hi: up2(Float::ln(self.hi)),
        })
    }

    pub fn scale(&self, k: f64) -> Interval {
        let a = self.lo * k;
        let b = self.hi * k;
        Interval {
            lo: down(a.min(b)),
            hi: up(a.max(b)),
        }
    }
}

/// An axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn point(z: Complex64) -> CInterval {
        CInterval {
            re: Interval::point(z.re),
            im: Interval::point(z.im),
        }
    }

    pub fn around(z: Complex64, radius: f64) -> CInterval {
        CInterval {
            re: Interval::around(z.re, radius),
            im: Interval::around(z.im, radius),
        }
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    pub fn add(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn neg(&self) -> CInterval {
        CInterval {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_scalar(&self, z: Complex64) -> CInterval {
        self.mul(&CInterval::point(z))
    }

    pub fn scale(&self, k: f64) -> CInterval {
        CInterval {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }

    pub fn norm_sq(&self) -> Interval {
        self.re.square().add(&self.im.square())
    }

    /// Division by multiplication with the conjugate.
    pub fn div(&self, o: &CInterval) -> Option<CInterval> {
        let d = o.norm_sq();
        if d.contains_zero() {
            return None;
        }
        let conj = CInterval {
            re: o.re,
            im: o.im.neg(),
        };
        let num = self.mul(&conj);
        Some(CInterval {
            re: num.re.div(&d)?,
            im: num.im.div(&d)?,
        })
    }

    pub fn inside(&self, other: &CInterval) -> bool {
        self.re.inside(&other.re) && self.im.inside(&other.im)
    }

    pub fn contains_point(&self, z: Complex64) -> bool {
        self.re.lo <= z.re && z.re <= self.re.hi && self.im.lo <= z.im && z.im <= self.im.hi
    }

    /// Principal complex logarithm of a rectangle avoiding zero and the
    /// negative real axis. The argument extremes of a convex region not
    /// containing the origin are attained at its corners.
    pub fn clog(&self) -> Option<CInterval> {
        let crosses_cut = self.re.lo < 0.0 && self.im.contains_zero();
        let contains_zero = self.re.contains_zero() && self.im.contains_zero();
        if crosses_cut || contains_zero {
            return None;
        }
        let n2 = self.norm_sq();
        let ln_abs = n2.ln()?.scale(0.5);

        let corners = [
            (self.re.lo, self.im.lo),
            (self.re.lo, self.im.hi),
            (self.re.hi, self.im.lo),
            (self.re.hi, self.im.hi),
        ];
        let mut amin = f64::INFINITY;
        let mut amax = f64::NEG_INFINITY;
        for (x, y) in corners {
            let a = Float::atan2(y, x);
            if a < amin {
                amin = a;
            }
            if a > amax {
                amax = a;
            }
        }
        Some(CInterval {
            re: ln_abs,
            im: Interval {
                lo: down2(amin),
                hi: up2(amax),
            },
        })
    }
}
