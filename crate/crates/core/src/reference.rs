//! Reference constants computed by routes unrelated to the T̃ series.

use astro_float::BigFloat;

use crate::numerics::{with_consts, BigReal, RM};

fn exact(v: BigFloat, bits: usize) -> BigReal {
    let e = bigfloat_abs_f64(&v) * 2f64.powi(-(bits as i32) + 4);
    BigReal::new(v, e, bits)
}

fn bigfloat_abs_f64(v: &BigFloat) -> f64 {
    BigReal::new(v.clone(), 0.0, 64).to_f64().abs()
}

pub fn pi(bits: usize) -> BigReal {
    exact(with_consts(|cc| cc.pi(bits, RM)), bits)
}

/// `π/2`, the value of `T̃(1)`.
pub fn half_pi(bits: usize) -> BigReal {
    pi(bits).mul_pow2(-1)
}

/// `π³/16`, the value of `T̃(3)`.
pub fn pi_cubed_over_16(bits: usize) -> BigReal {
    let p = pi(bits);
    p.mul(&p).mul(&p).mul_pow2(-4)
}

/// Catalan's constant from Ramanujan's series
/// `G = (π/8) ln(2+√3) + (3/8) Σ (n!)² / ((2n)! (2n+1)²)`.
pub fn catalan(bits: usize) -> BigReal {
    let p = bits + 32;
    let one = BigFloat::from_u64(1, p);
    let three = BigFloat::from_u64(3, p);
    let ln_term = with_consts(|cc| {
        let s = three.sqrt(p, RM).add(&BigFloat::from_u64(2, p), p, RM);
        s.ln(p, RM, cc)
    });
    let pi = with_consts(|cc| cc.pi(p, RM));
    let first = pi.mul(&ln_term, p, RM).div(&BigFloat::from_u64(8, p), p, RM);

    // t_n = (n!)²/(2n)!, t_{n+1} = t_n (n+1) / (2(2n+1)); terms shrink like 4^-n.
    let mut t = one.clone();
    let mut sum = BigFloat::from_u64(0, p);
    let mut n: u64 = 0;
    loop {
        let d = BigFloat::from_u64((2 * n + 1) * (2 * n + 1), p);
        let term = t.div(&d, p, RM);
        sum = sum.add(&term, p, RM);
        if n as usize > p / 2 + 4 {
            break;
        }
        t = t
            .mul(&BigFloat::from_u64(n + 1, p), p, RM)
            .div(&BigFloat::from_u64(2 * (2 * n + 1), p), p, RM);
        n += 1;
    }
    let second = sum.mul(&three, p, RM).div(&BigFloat::from_u64(8, p), p, RM);
    let mut g = first.add(&second, p, RM);
    g.set_precision(bits, RM).expect("precision");
    exact(g, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digits() {
        assert_eq!(pi(200).to_decimal(30), "3.14159265358979323846264338328");
        assert_eq!(catalan(200).to_decimal(30), "0.915965594177219015054603514932");
        assert_eq!(pi_cubed_over_16(200).to_decimal(20), "1.937892292518738761");
    }
}
