//! Arbitrary-precision reals and complex numbers carrying an error estimate.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::GaussianRational;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Runs `f` with this thread's astro-float constant cache.
pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Bits needed for `digits` decimal digits plus a small margin.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16
}

pub(crate) fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *m.last().unwrap_or(&0) as f64;
    let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
    let frac = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
    let v = frac * 2f64.powi(e);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub(crate) fn bigint_to_bigfloat(n: &BigInt, p: usize) -> BigFloat {
    let base = BigFloat::from_u64(u64::MAX, p).add(&BigFloat::from_u64(1, p), p, RM);
    let mut acc = BigFloat::from_u64(0, p);
    for d in n.magnitude().iter_u64_digits().rev() {
        acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(d, p), p, RM);
    }
    if n.is_negative() {
        acc.neg()
    } else {
        acc
    }
}

/// A real number at some binary precision with an absolute error estimate.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    err: f64,
    bits: usize,
}

impl BigReal {
    pub fn new(value: BigFloat, err: f64, bits: usize) -> Self {
        BigReal { value, err, bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self::new(BigFloat::from_u64(0, bits), 0.0, bits)
    }

    pub fn from_i64(n: i64, bits: usize) -> Self {
        Self::new(BigFloat::from_i64(n, bits), 0.0, bits)
    }

    /// Exact numerator and denominator, one rounding in the division.
    pub fn from_rational(q: &BigRational, bits: usize) -> Self {
        let n = bigint_to_bigfloat(q.numer(), bits);
        let d = bigint_to_bigfloat(q.denom(), bits);
        let v = n.div(&d, bits, RM);
        let r = BigReal::new(v, 0.0, bits);
        let e = r.ulp();
        r.with_error(e)
    }

    /// Parses a decimal literal; `err` is the error attached to it.
    pub fn parse(text: &str, bits: usize, err: f64) -> Option<Self> {
        let v = with_consts(|cc| BigFloat::parse(text.trim(), Radix::Dec, bits, RM, cc));
        if v.is_nan() {
            return None;
        }
        Some(Self::new(v, err, bits))
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn error(&self) -> f64 {
        self.err
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn with_error(mut self, err: f64) -> Self {
        self.err = err;
        self
    }

    pub fn to_f64(&self) -> f64 {
        bigfloat_to_f64(&self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// One unit of rounding at the current magnitude.
    fn ulp(&self) -> f64 {
        self.to_f64().abs() * 2f64.powi(-(self.bits as i32))
    }

    fn prec(&self, o: &BigReal) -> usize {
        self.bits.max(o.bits)
    }

    pub fn add(&self, o: &BigReal) -> BigReal {
        let p = self.prec(o);
        let r = BigReal::new(self.value.add(&o.value, p, RM), 0.0, p);
        let e = self.err + o.err + r.ulp();
        r.with_error(e)
    }

    pub fn sub(&self, o: &BigReal) -> BigReal {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BigReal {
        BigReal::new(self.value.neg(), self.err, self.bits)
    }

    pub fn mul(&self, o: &BigReal) -> BigReal {
        let p = self.prec(o);
        let r = BigReal::new(self.value.mul(&o.value, p, RM), 0.0, p);
        let (a, b) = (self.to_f64().abs(), o.to_f64().abs());
        let e = a * o.err + b * self.err + self.err * o.err + r.ulp();
        r.with_error(e)
    }

    pub fn div(&self, o: &BigReal) -> BigReal {
        let p = self.prec(o);
        let r = BigReal::new(self.value.div(&o.value, p, RM), 0.0, p);
        let b = o.to_f64().abs();
        let rel = self.err / self.to_f64().abs().max(f64::MIN_POSITIVE) + o.err / b;
        let e = r.to_f64().abs() * rel + r.ulp();
        r.with_error(e)
    }

    pub fn scale_rational(&self, q: &BigRational) -> BigReal {
        if q.is_zero() {
            return BigReal::zero(self.bits);
        }
        self.mul(&BigReal::from_rational(q, self.bits))
    }

    /// Scales by `2^n` exactly.
    pub fn mul_pow2(&self, n: i32) -> BigReal {
        let two = BigFloat::from_u64(2, self.bits);
        let f = if n >= 0 {
            two.powi(n as usize, self.bits, RM)
        } else {
            BigFloat::from_u64(1, self.bits).div(&two.powi((-n) as usize, self.bits, RM), self.bits, RM)
        };
        BigReal::new(self.value.mul(&f, self.bits, RM), self.err * 2f64.powi(n), self.bits)
    }

    /// Decimal digits supported by the error estimate.
    pub fn correct_digits(&self) -> u32 {
        let v = self.to_f64().abs();
        if self.err <= 0.0 {
            return (self.bits as f64 / std::f64::consts::LOG2_10).floor() as u32;
        }
        if v == 0.0 {
            return 0;
        }
        let d = (v / self.err).log10().floor();
        d.clamp(0.0, self.bits as f64 / std::f64::consts::LOG2_10) as u32
    }

    /// Rounds to `digits` significant decimal digits, capped at what the
    /// error estimate supports.
    pub fn to_decimal(&self, digits: u32) -> String {
        let d = digits.min(self.correct_digits()).max(1);
        format_decimal(&self.value, d as usize)
    }

    /// Rounds to exactly `digits` significant digits regardless of the estimate.
    pub fn to_decimal_unchecked(&self, digits: u32) -> String {
        format_decimal(&self.value, digits.max(1) as usize)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.correct_digits()))
    }
}

fn format_decimal(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let Ok((sign, mut ds, mut exp)) = with_consts(|cc| x.convert_to_radix(Radix::Dec, RM, cc)) else {
        return "NaN".into();
    };
    // value = 0.d1 d2 ... × 10^exp
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let body: String = ds.iter().map(|d| char::from(b'0' + d)).collect();
    let mut out = String::new();
    if sign == Sign::Neg {
        out.push('-');
    }
    if (-6..=21).contains(&exp) {
        if exp <= 0 {
            out.push_str("0.");
            out.push_str(&"0".repeat((-exp) as usize));
            out.push_str(&body);
        } else {
            let e = exp as usize;
            if body.len() <= e {
                out.push_str(&body);
                out.push_str(&"0".repeat(e - body.len()));
            } else {
                out.push_str(&body[..e]);
                out.push('.');
                out.push_str(&body[e..]);
            }
        }
    } else {
        out.push_str(&body[..1]);
        if body.len() > 1 {
            out.push('.');
            out.push_str(&body[1..]);
        }
        out.push_str(&format!("e{}", exp - 1));
    }
    out
}

/// `re + i·im` with independent error estimates on both parts.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(bits: usize) -> Self {
        Self::new(BigReal::zero(bits), BigReal::zero(bits))
    }

    pub fn from_real(re: BigReal) -> Self {
        let bits = re.bits();
        Self::new(re, BigReal::zero(bits))
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        Self::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    /// Multiplies a real number by an exact Gaussian rational.
    pub fn real_times(x: &BigReal, c: &GaussianRational) -> BigComplex {
        BigComplex::new(x.scale_rational(&c.re), x.scale_rational(&c.im))
    }

    pub fn error(&self) -> f64 {
        self.re.error().hypot(self.im.error())
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        let re = self.re.to_decimal(digits);
        let im = self.im.to_decimal(digits);
        match im.strip_prefix('-') {
            Some(m) => format!("{re} - {m}i"),
            None => format!("{re} + {im}i"),
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.re.correct_digits().min(self.im.correct_digits()).max(1);
        f.write_str(&self.to_decimal(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let q = BigRational::new(BigInt::from(-22), BigInt::from(7));
        let x = BigReal::from_rational(&q, 200);
        assert!((x.to_f64() + 22.0 / 7.0).abs() < 1e-15);
        assert_eq!(x.to_decimal_unchecked(12), "-3.14285714286");
    }

    #[test]
    fn big_integers_convert() {
        let n: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = BigReal::from_rational(&BigRational::from_integer(n), 256);
        assert_eq!(x.to_decimal_unchecked(30), "1.2345678901234567890123456789e29");
    }

    #[test]
    fn formatting() {
        let x = BigReal::parse("0.000123456", 128, 0.0).unwrap();
        assert_eq!(x.to_decimal_unchecked(3), "0.000123");
        let y = BigReal::parse("9.9996", 128, 0.0).unwrap();
        assert_eq!(y.to_decimal_unchecked(3), "10");
        let z = BigReal::parse("1.5e30", 128, 0.0).unwrap();
        assert_eq!(z.to_decimal_unchecked(5), "1.5e30");
    }

    #[test]
    fn digits_capped_by_error() {
        let x = BigReal::parse("1.23456789", 128, 1e-4).unwrap();
        assert_eq!(x.to_decimal(20), "1.235");
    }

    #[test]
    fn error_propagates() {
        let a = BigReal::from_i64(3, 128).with_error(1e-10);
        let b = BigReal::from_i64(2, 128).with_error(1e-10);
        let p = a.mul(&b);
        assert!(p.error() >= 5e-10 - 1e-20);
        assert!(a.sub(&b).error() >= 2e-10 - 1e-20);
    }
}
