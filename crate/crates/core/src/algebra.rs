//! Exact scalars: Gaussian rationals and polynomials in the formal variable `s`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// `i^e`, reduced mod 4.
    pub fn i_pow(e: i64) -> Self {
        let (one, zero) = (BigRational::one(), BigRational::zero());
        match e.rem_euclid(4) {
            0 => Self::new(one, zero),
            1 => Self::new(zero, one),
            2 => Self::new(-one, zero),
            _ => Self::new(zero, -one),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(&self.re * q, &self.im * q)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({} {} {}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// A polynomial in `s` with Gaussian-rational coefficients, power basis,
/// trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SPoly {
    coeffs: Vec<GaussianRational>,
}

impl SPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = SPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        SPoly {
            coeffs: vec![GaussianRational::zero(), GaussianRational::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<GaussianRational>) -> Self {
        let mut p = SPoly { coeffs };
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// `binom(s + a, b) = (s+a)(s+a-1)...(s+a-b+1)/b!` as a polynomial in `s`.
    pub fn binomial(a: i64, b: u32) -> Self {
        let mut p = SPoly::one();
        let mut fact = BigInt::one();
        for i in 0..b as i64 {
            let lin = SPoly::from_coeffs(vec![GaussianRational::from_int(a - i), GaussianRational::one()]);
            p = &p * &lin;
            fact *= i + 1;
        }
        p.scale(&GaussianRational::real(BigRational::new(BigInt::one(), fact)))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        SPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, s: &BigRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(s) + c;
        }
        acc
    }

    pub fn eval_int(&self, s: i64) -> GaussianRational {
        self.eval(&BigRational::from_integer(s.into()))
    }

    /// `p(s + d)`.
    pub fn shift(&self, d: i64) -> Self {
        let lin = SPoly::from_coeffs(vec![GaussianRational::from_int(d), GaussianRational::one()]);
        let mut acc = SPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &SPoly::constant(c.clone());
        }
        acc
    }

    /// Coefficients `c_b` with `p(s) = Σ_b c_b·binom(s+b-1, b)`.
    pub fn to_binomial_basis(&self) -> Vec<GaussianRational> {
        // c_b = Σ_{i=0}^{b} (-1)^i binom(b, i) p(-i)
        let n = self.degree();
        let vals: Vec<GaussianRational> = (0..=n as i64).map(|i| self.eval_int(-i)).collect();
        let mut out = Vec::with_capacity(n + 1);
        for b in 0..=n {
            let mut c = GaussianRational::zero();
            let mut bin = BigInt::one();
            for (i, v) in vals.iter().enumerate().take(b + 1) {
                let term = v.scale(&BigRational::from_integer(bin.clone()));
                c = if i % 2 == 0 { &c + &term } else { &c - &term };
                bin = bin * (b - i) / (i + 1);
            }
            out.push(c);
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn from_binomial_basis(cs: &[GaussianRational]) -> Self {
        let mut acc = SPoly::zero();
        for (b, c) in cs.iter().enumerate() {
            acc = &acc + &SPoly::binomial(b as i64 - 1, b as u32).scale(c);
        }
        acc
    }
}

impl Add for &SPoly {
    type Output = SPoly;
    fn add(self, o: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = GaussianRational::zero();
        SPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &SPoly {
    type Output = SPoly;
    fn sub(self, o: &SPoly) -> SPoly {
        self + &(-o)
    }
}

impl Neg for &SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &SPoly {
    type Output = SPoly;
    fn mul(self, o: &SPoly) -> SPoly {
        if self.is_zero() || o.is_zero() {
            return SPoly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        SPoly::from_coeffs(out)
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·s")?,
                _ => write!(f, "{c}·s^{d}")?,
            }
        }
        Ok(())
    }
}

/// `binom(n, k)` for integer `n` (possibly negative) and `k ≥ 0`.
pub fn binomial_rational(n: i64, k: u32) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= n - i;
        den *= i + 1;
    }
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn i_powers() {
        assert_eq!(GaussianRational::i_pow(2), GaussianRational::from_int(-1));
        assert_eq!(GaussianRational::i_pow(-1), GaussianRational::new(q(0), q(-1)));
        let i = GaussianRational::i_pow(1);
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn binomial_poly_matches_integer_binomial() {
        for a in -3..4 {
            for b in 0..5 {
                let p = SPoly::binomial(a, b);
                for s in -2..6 {
                    assert_eq!(p.eval_int(s), GaussianRational::real(binomial_rational(s + a, b)));
                }
            }
        }
    }

    #[test]
    fn binomial_basis_round_trip() {
        let p = SPoly::from_coeffs(vec![
            GaussianRational::from_int(3),
            GaussianRational::new(q(1), q(2)),
            GaussianRational::from_int(-5),
            GaussianRational::new(q(0), q(7)),
        ]);
        let cs = p.to_binomial_basis();
        assert_eq!(SPoly::from_binomial_basis(&cs), p);
        assert_eq!(SPoly::s().to_binomial_basis(), vec![GaussianRational::zero(), GaussianRational::one()]);
    }

    #[test]
    fn shift_is_substitution() {
        let p = &SPoly::binomial(2, 3) * &SPoly::s();
        let p3 = p.shift(3);
        for s in -4..4 {
            assert_eq!(p3.eval_int(s), p.eval_int(s + 3));
        }
    }
}
