//! Double-precision oracle: level-four polylogarithms by path propagation.
//!
//! `𝒜(𝕜; z)` is the iterated integral from `i` to `z` of the letters of the
//! word of `𝕜`, with `a = du/u` and `b = 2du/(1-u²)`. Nothing here touches
//! the series code, so agreement with it is a genuine second route.
//!
//! Along the unit-circle arc `z(t) = (1 + i e^-t)/(1 - i e^-t)`, running from
//! `i` at `t = 0` to `1` as `t → ∞`, the letters become `a = -i sech(t) dt`
//! and `b = dt`. Values at `z = 1` are limits in `t` with an explicit
//! exponential tail bound.

mod propagator;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expansion::ExpansionTerm;
use crate::index::{Index, Letter};
use propagator::{PanelNodes, Propagator};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSettings {
    /// Target absolute accuracy.
    pub tolerance: f64,
    /// Largest `t` reached before giving up on a tail bound.
    pub t_limit: f64,
    /// Panel width in `t`.
    pub panel: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            tolerance: 1e-13,
            t_limit: 200.0,
            panel: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    /// Rule-difference plus tail bound.
    pub error: f64,
}

/// A path starting at `z = i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathSpec {
    /// `z = (1 + i e^-t)/(1 - i e^-t)` for `t ∈ [0, t_end]`.
    LambdaCurve { t_end: f64 },
    /// `z = e^{iθ}` for `θ` from `π/2` down to `theta_end`, parametrized by
    /// `τ = π/2 - θ`.
    Arc { theta_end: f64 },
    /// Straight segment from `i` to `end`.
    Segment { end: Complex64 },
}

impl PathSpec {
    pub fn endpoint(&self) -> Complex64 {
        match *self {
            PathSpec::LambdaCurve { t_end } => lambda_curve_point(t_end),
            PathSpec::Arc { theta_end } => Complex64::from_polar(1.0, theta_end),
            PathSpec::Segment { end } => end,
        }
    }
}

/// `z(t) = (1 + i e^-t)/(1 - i e^-t) = e^{iθ}` with `θ = 2 arctan(e^-t)`.
pub fn lambda_curve_point(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * (-t).exp().atan())
}

fn sech(t: f64) -> f64 {
    let e = (-t.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

fn curve_forms(t: f64) -> (Complex64, Complex64) {
    (Complex64::new(0.0, -sech(t)), Complex64::new(1.0, 0.0))
}

fn word_letters(k: &Index) -> Result<Vec<Letter>> {
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    Ok(k.to_word().letters().to_vec())
}

fn run_path(letters: &[Letter], path: PathSpec, rule: usize) -> Complex64 {
    match path {
        PathSpec::LambdaCurve { t_end } => {
            let f = curve_forms;
            let mut p = Propagator::new(letters, &f, 0.0, rule);
            let panels = (t_end / 0.5).ceil().max(1.0) as usize;
            for i in 1..=panels {
                p.step(t_end * i as f64 / panels as f64);
            }
            p.y[letters.len()]
        }
        PathSpec::Arc { theta_end } => {
            let f = |tau: f64| {
                let theta = std::f64::consts::FRAC_PI_2 - tau;
                (Complex64::new(0.0, -1.0), Complex64::new(1.0 / theta.sin(), 0.0))
            };
            let mut p = Propagator::new(letters, &f, 0.0, rule);
            let tau_end = std::f64::consts::FRAC_PI_2 - theta_end;
            // Panels shrink geometrically towards θ = 0, where b is singular.
            while p.x < tau_end {
                let theta = std::f64::consts::FRAC_PI_2 - p.x;
                let next = (p.x + (0.25 * theta).min(0.1)).min(tau_end);
                p.step(next);
            }
            p.y[letters.len()]
        }
        PathSpec::Segment { end } => {
            let i = Complex64::new(0.0, 1.0);
            let dz = end - i;
            let f = move |x: f64| {
                let z = i + dz * x;
                (dz / z, 2.0 * dz / (1.0 - z * z))
            };
            let mut p = Propagator::new(letters, &f, 0.0, rule);
            for n in 1..=64 {
                p.step(n as f64 / 64.0);
            }
            p.y[letters.len()]
        }
    }
}

/// `𝒜(𝕜; z)` at the end of `path`, for any nonempty index.
pub fn apoly_on_path(k: &Index, path: PathSpec) -> Result<OracleValue> {
    let letters = word_letters(k)?;
    let hi = run_path(&letters, path, 24);
    let lo = run_path(&letters, path, 16);
    Ok(OracleValue {
        value: hi,
        error: (hi - lo).norm() + 1e-15 * hi.norm().max(1.0),
    })
}

/// `∫_T^∞ C t^d e^{-t} dt / T^d` for the growth model `|y(t)| ≤ C (t/T)^d`.
fn poly_exp_tail(c: f64, d: u32, t: f64) -> f64 {
    let mut sum = 0.0;
    let mut fall = 1.0;
    for j in 0..=d {
        sum += fall / t.powi(j as i32);
        fall *= (d - j) as f64;
    }
    c * (-t).exp() * sum
}

fn count_b(letters: &[Letter]) -> u32 {
    letters.iter().filter(|l| **l == Letter::B).count() as u32
}

fn limit_at_one(letters: &[Letter], settings: &OracleSettings, rule: usize) -> Result<(Complex64, f64)> {
    let w = letters.len();
    let f = curve_forms;
    let mut p = Propagator::new(letters, &f, 0.0, rule);
    let d = count_b(&letters[..w - 1]);
    loop {
        let next = p.x + settings.panel;
        p.step(next);
        // Remaining part of the last integral: ∫_T^∞ -i sech(t) y_{W-1}(t) dt.
        let c = 2.0 * p.y[w - 1].norm().max(1e-300);
        let tail = poly_exp_tail(c, d, p.x);
        log::trace!("oracle t={:.1} tail={tail:.2e}", p.x);
        if tail < settings.tolerance / 10.0 {
            return Ok((p.y[w], tail));
        }
        if p.x > settings.t_limit {
            return Err(Error::NonConvergence {
                what: "𝒜 at z = 1".into(),
                estimate: format!("{}", p.y[w]),
                error: tail,
            });
        }
    }
}

/// `𝒜(𝕜; 1)` for admissible `𝕜`.
pub fn apoly_at_one(k: &Index, settings: &OracleSettings) -> Result<OracleValue> {
    if !k.is_admissible() {
        return Err(Error::NotAdmissible(k.clone()));
    }
    let letters = word_letters(k)?;
    let (hi, tail) = limit_at_one(&letters, settings, 24)?;
    let (lo, _) = limit_at_one(&letters, settings, 16)?;
    Ok(OracleValue {
        value: hi,
        error: (hi - lo).norm() + tail + 1e-15 * hi.norm().max(1.0),
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

fn lambda_run(letters: &[Letter], s: u32, settings: &OracleSettings, rule: usize) -> Result<(Complex64, f64)> {
    let w = letters.len();
    let f = curve_forms;
    let mut p = Propagator::new(letters, &f, 0.0, rule);
    let d = count_b(letters) + s - 1;
    let gamma = factorial(s - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let next = p.x + settings.panel;
        let PanelNodes { x, w: wts, top } = p.step(next);
        for j in 0..x.len() {
            acc += wts[j] * x[j].powi(s as i32 - 1) * sech(x[j]) * top[j];
        }
        let t = p.x;
        let c = 2.0 * p.y[w].norm().max(1e-300) * t.powi(s as i32 - 1) / gamma;
        let tail = poly_exp_tail(c, d, t);
        if tail < settings.tolerance / 10.0 {
            return Ok((acc / gamma, tail));
        }
        if t > settings.t_limit {
            return Err(Error::NonConvergence {
                what: format!("λ quadrature at s={s}"),
                estimate: format!("{}", acc / gamma),
                error: tail,
            });
        }
    }
}

/// `λ(𝕜; s) = (1/Γ(s)) ∫_0^∞ t^(s-1) 𝒜(𝕜; z(t)) sech(t) dt` by quadrature.
pub fn lambda_quadrature(k: &Index, s: u32, settings: &OracleSettings) -> Result<OracleValue> {
    if s < 2 {
        return Err(Error::Domain(format!("λ quadrature needs s ≥ 2, got {s}")));
    }
    let letters = word_letters(k)?;
    let (hi, tail) = lambda_run(&letters, s, settings, 24)?;
    let (lo, _) = lambda_run(&letters, s, settings, 16)?;
    Ok(OracleValue {
        value: hi,
        error: (hi - lo).norm() + tail + 1e-14 * hi.norm().max(1.0),
    })
}

/// `A(𝕜; i e^-t) = 2^r Σ (i e^-t)^{m_r} / (m_1^{k_1} ⋯ m_r^{k_r})` by
/// truncated series, parities `m_j ≡ j mod 2`.
pub fn a_level2(k: &Index, t: f64, settings: &OracleSettings) -> Result<OracleValue> {
    if k.is_empty() {
        return Ok(OracleValue {
            value: Complex64::new(1.0, 0.0),
            error: 0.0,
        });
    }
    if t <= 0.0 {
        return Err(Error::Domain(format!("a_level2 needs t > 0, got {t}")));
    }
    let e = k.entries();
    let r = e.len();
    let q = (-t).exp();
    let budget = 10_000_000u64;
    let mut f = vec![0.0f64; r];
    f[0] = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zpow = Complex64::new(1.0, 0.0);
    let iq = Complex64::new(0.0, q);
    let scale = 2f64.powi(r as i32);
    for m in 1..=budget {
        zpow *= iq;
        let mf = m as f64;
        if m >= r as u64 && m % 2 == r as u64 % 2 {
            sum += zpow * (f[r - 1] / mf.powi(e[r - 1] as i32));
        }
        for j in (1..r).rev() {
            if m % 2 == j as u64 % 2 {
                f[j] += f[j - 1] / mf.powi(e[j - 1] as i32);
            }
        }
        // Later terms are bounded by F_{r-1}(m) q^n for n > m.
        let fmax = f.iter().copied().fold(1.0, f64::max);
        let tail = scale * fmax * zpow.norm() * q / (1.0 - q * q);
        if m >= r as u64 && tail < settings.tolerance / 10.0 {
            return Ok(OracleValue {
                value: scale * sum,
                error: tail,
            });
        }
    }
    Err(Error::Domain(format!("t = {t} too small for the term budget")))
}

/// Right-hand side of `𝒜(𝕜; z(t)) = Σ c i^e Π T̃(P) (t^j / j!) A(𝕜'; i e^-t)`,
/// with the constants supplied by the caller.
pub fn expansion_at(
    terms: &[ExpansionTerm],
    t: f64,
    constant: &dyn Fn(&Index) -> f64,
    settings: &OracleSettings,
) -> Result<OracleValue> {
    let mut v = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for term in terms {
        let c = crate::algebra::rational_to_f64(&term.coeff);
        let ip = Complex64::new(0.0, 1.0).powi(term.i_power as i32);
        let prod: f64 = term.constants.iter().map(constant).product();
        let tj = t.powi(term.j as i32) / factorial(term.j);
        let a = a_level2(&term.residual, t, settings)?;
        let f = c * prod * tj;
        v += ip * f * a.value;
        err += f.abs() * a.error;
    }
    Ok(OracleValue { value: v, error: err })
}
