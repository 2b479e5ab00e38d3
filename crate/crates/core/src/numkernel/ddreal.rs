//! Double-double arithmetic for the pre-build series oracles.
//!
//! Test-only: ~31 significant digits, enough headroom to evaluate the
//! Maclaurin series of w/erf through their cancellation for |z| <= 6 and
//! freeze the results as oracle values.  Never used by the library itself.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    // pi split into two non-overlapping doubles.
    #[allow(clippy::approx_constant)]
    pub const PI: Dd = Dd {
        hi: 3.141592653589793116e0,
        lo: 1.224646799147353207e-16,
    };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn sqrt(self) -> Dd {
        // One Newton step on the f64 seed doubles the precision.
        let approx = self.hi.sqrt();
        if approx == 0.0 {
            return Dd::ZERO;
        }
        let a = Dd::from_f64(approx);
        let err = sub(self, mul(a, a));
        add(a, div(err, mul(Dd::from_f64(2.0), a)))
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

pub fn add(a: Dd, b: Dd) -> Dd {
    let (s1, s2) = two_sum(a.hi, b.hi);
    let s2 = s2 + a.lo + b.lo;
    let (hi, lo) = quick_two_sum(s1, s2);
    Dd { hi, lo }
}

pub fn sub(a: Dd, b: Dd) -> Dd {
    add(
        a,
        Dd {
            hi: -b.hi,
            lo: -b.lo,
        },
    )
}

pub fn mul(a: Dd, b: Dd) -> Dd {
    let (p1, p2) = two_prod(a.hi, b.hi);
    let p2 = p2 + a.hi * b.lo + a.lo * b.hi;
    let (hi, lo) = quick_two_sum(p1, p2);
    Dd { hi, lo }
}

pub fn div(a: Dd, b: Dd) -> Dd {
    let q1 = a.hi / b.hi;
    let r = sub(a, mul(Dd::from_f64(q1), b));
    let q2 = r.hi / b.hi;
    let r2 = sub(r, mul(Dd::from_f64(q2), b));
    let q3 = r2.hi / b.hi;
    let (hi, lo) = quick_two_sum(q1, q2);
    add(Dd { hi, lo }, Dd::from_f64(q3))
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub fn new(re: f64, im: f64) -> DdC {
        DdC {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    pub fn add(self, o: DdC) -> DdC {
        DdC {
            re: add(self.re, o.re),
            im: add(self.im, o.im),
        }
    }

    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: sub(mul(self.re, o.re), mul(self.im, o.im)),
            im: add(mul(self.re, o.im), mul(self.im, o.re)),
        }
    }

    pub fn scale(self, s: Dd) -> DdC {
        DdC {
            re: mul(self.re, s),
            im: mul(self.im, s),
        }
    }

    pub fn norm_f64(self) -> f64 {
        let r = self.re.to_f64();
        let i = self.im.to_f64();
        (r * r + i * i).sqrt()
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// exp of a double-double (|x| modest): argument-reduced Taylor series.
pub fn exp_dd(x: Dd) -> Dd {
    // exp(x) = exp(x/2^k)^(2^k) with x/2^k small.
    let k = ((x.hi.abs() / 0.25).log2().ceil().max(0.0)) as u32;
    let scale = 2f64.powi(k as i32);
    let xr = div(x, Dd::from_f64(scale));
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for n in 1..60 {
        term = mul(term, div(xr, Dd::from_f64(n as f64)));
        sum = add(sum, term);
        if term.hi.abs() < 1e-40 * sum.hi.abs() {
            break;
        }
    }
    let mut r = sum;
    for _ in 0..k {
        r = mul(r, r);
    }
    r
}

/// Faddeeva function by Maclaurin series in double-double precision.
///
/// Valid oracle for |z| <= 6 (cancellation stays ~12 digits below the
/// 31-digit working precision there).
pub fn faddeeva_dd(z: num_complex::Complex64) -> num_complex::Complex64 {
    let zd = DdC::new(z.re, z.im);
    let u = DdC {
        re: sub(mul(zd.im, zd.im), mul(zd.re, zd.re)),
        im: mul(mul(Dd::from_f64(-2.0), zd.re), zd.im),
    }; // -z²

    // Even part: exp(-z²).
    let mag = exp_dd(u.re);
    let even = DdC {
        re: mul(mag, cos_dd(u.im)),
        im: mul(mag, sin_dd(u.im)),
    };

    // Odd part: iz Σ u^m / Γ(m + 3/2).
    let sqrt_pi = Dd::PI.sqrt();
    let mut term = div(Dd::from_f64(2.0), sqrt_pi);
    let mut coeff = Dd { hi: term.hi, lo: term.lo };
    let mut sum = DdC {
        re: coeff,
        im: Dd::ZERO,
    };
    let mut upow = DdC {
        re: Dd::ONE,
        im: Dd::ZERO,
    };
    for m in 0..400 {
        upow = upow.mul(u);
        coeff = div(coeff, Dd::from_f64(m as f64 + 1.5));
        term = coeff;
        let t = upow.scale(term);
        sum = sum.add(t);
        if t.norm_f64() < 1e-40 * (sum.norm_f64() + 1e-300) {
            break;
        }
    }
    let iz = DdC {
        re: mul(Dd::from_f64(-1.0), zd.im),
        im: zd.re,
    };
    even.add(iz.mul(sum)).to_c64()
}

/// erf by alternating Maclaurin series in double-double precision (|z| <= 6).
pub fn erf_dd(z: num_complex::Complex64) -> num_complex::Complex64 {
    let zd = DdC::new(z.re, z.im);
    let zz = zd.mul(zd);
    let mut term = zd;
    let mut sum = DdC {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    for n in 0..400 {
        let denom = Dd::from_f64(2.0 * n as f64 + 1.0);
        sum = sum.add(DdC {
            re: div(term.re, denom),
            im: div(term.im, denom),
        });
        let f = div(Dd::from_f64(-1.0), Dd::from_f64(n as f64 + 1.0));
        term = term.mul(zz).scale(f);
        if term.norm_f64() < 1e-40 * (sum.norm_f64() + 1e-300) {
            break;
        }
    }
    let two_over_sqrt_pi = div(Dd::from_f64(2.0), Dd::PI.sqrt());
    sum.scale(two_over_sqrt_pi).to_c64()
}

fn sin_dd(x: Dd) -> Dd {
    // Range-reduce with f64 (adequate: |x| < 150 in oracle use).
    trig_series(x, true)
}

fn cos_dd(x: Dd) -> Dd {
    trig_series(x, false)
}

fn trig_series(x: Dd, want_sin: bool) -> Dd {
    // Reduce modulo 2π using dd arithmetic.
    let two_pi = mul(Dd::from_f64(2.0), Dd::PI);
    let n = (x.to_f64() / two_pi.to_f64()).round();
    let xr = sub(x, mul(Dd::from_f64(n), two_pi));
    let xx = mul(xr, xr);
    let mut term = if want_sin { xr } else { Dd::ONE };
    let mut sum = term;
    let mut k = if want_sin { 1.0 } else { 0.0 };
    for _ in 0..40 {
        term = div(mul(term, xx), Dd::from_f64(-((k + 1.0) * (k + 2.0))));
        sum = add(sum, term);
        k += 2.0;
        if term.hi.abs() < 1e-40 * (sum.hi.abs() + 1e-300) {
            break;
        }
    }
    sum
}
