//! Gauss–Legendre panel propagation of the iterated-integral system.
//!
//! For a word `w1 … wW` the prefix values satisfy `y_0 = 1` and
//! `y_m' = ω_{w_m}(x) · y_{m-1}`. On each panel the system is triangular, so
//! level `m` is obtained from level `m-1` at the nodes by one application of
//! the spectral integration matrix `S_qj = ∫_{-1}^{x_q} L_j`.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::index::Letter;

pub(crate) struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Row-major `n × n`.
    pub integ: Vec<f64>,
}

fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n > 0 {
        p[1] = x;
    }
    for k in 1..n {
        p[k + 1] = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
    }
    p
}

impl Rule {
    fn new(n: usize) -> Rule {
        let q = GaussLegendre::new(n).expect("Gauss–Legendre rule");
        let mut pairs: Vec<(f64, f64)> = q.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        // L_j(x) = w_j Σ_k (2k+1)/2 P_k(x_j) P_k(x), exact by discrete orthogonality.
        let p_nodes: Vec<Vec<f64>> = nodes.iter().map(|&x| legendre_all(n, x)).collect();
        let mut integ = vec![0.0; n * n];
        for (qi, &xq) in nodes.iter().enumerate() {
            let p = legendre_all(n + 1, xq);
            // ∫_{-1}^x P_0 = x + 1, ∫_{-1}^x P_k = (P_{k+1} - P_{k-1}) / (2k+1)
            let ik: Vec<f64> = (0..n)
                .map(|k| {
                    if k == 0 {
                        xq + 1.0
                    } else {
                        (p[k + 1] - p[k - 1]) / (2 * k + 1) as f64
                    }
                })
                .collect();
            for j in 0..n {
                let s: f64 = (0..n)
                    .map(|k| (2 * k + 1) as f64 / 2.0 * p_nodes[j][k] * ik[k])
                    .sum();
                integ[qi * n + j] = weights[j] * s;
            }
        }
        Rule {
            nodes,
            weights,
            integ,
        }
    }

    pub fn get(n: usize) -> &'static Rule {
        static R16: OnceLock<Rule> = OnceLock::new();
        static R24: OnceLock<Rule> = OnceLock::new();
        match n {
            16 => R16.get_or_init(|| Rule::new(16)),
            24 => R24.get_or_init(|| Rule::new(24)),
            _ => panic!("unsupported rule size {n}"),
        }
    }
}

/// Densities of the two letters with respect to the path parameter.
pub(crate) trait Forms {
    fn at(&self, x: f64) -> (Complex64, Complex64);
}

impl<F: Fn(f64) -> (Complex64, Complex64)> Forms for F {
    fn at(&self, x: f64) -> (Complex64, Complex64) {
        self(x)
    }
}

/// Node data of one panel: parameter values, scaled weights and the top
/// prefix value `y_W` at every node.
pub(crate) struct PanelNodes {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub top: Vec<Complex64>,
}

pub(crate) struct Propagator<'a> {
    letters: Vec<Letter>,
    forms: &'a dyn Forms,
    rule: &'static Rule,
    pub y: Vec<Complex64>,
    pub x: f64,
}

impl<'a> Propagator<'a> {
    pub fn new(letters: &[Letter], forms: &'a dyn Forms, x0: f64, rule_size: usize) -> Self {
        let mut y = vec![Complex64::new(0.0, 0.0); letters.len() + 1];
        y[0] = Complex64::new(1.0, 0.0);
        Propagator {
            letters: letters.to_vec(),
            forms,
            rule: Rule::get(rule_size),
            y,
            x: x0,
        }
    }

    /// Advances the state from `self.x` to `x1`.
    pub fn step(&mut self, x1: f64) -> PanelNodes {
        let r = self.rule;
        let n = r.nodes.len();
        let h2 = (x1 - self.x) / 2.0;
        let xs: Vec<f64> = r.nodes.iter().map(|&t| self.x + h2 * (1.0 + t)).collect();
        let om: Vec<(Complex64, Complex64)> = xs.iter().map(|&x| self.forms.at(x)).collect();
        let mut prev = vec![Complex64::new(1.0, 0.0); n];
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        for (m, l) in self.letters.iter().enumerate() {
            for ((gj, o), p) in g.iter_mut().zip(&om).zip(&prev) {
                let w = match l {
                    Letter::A => o.0,
                    Letter::B => o.1,
                };
                *gj = w * p;
            }
            let y0 = self.y[m + 1];
            let end: Complex64 = r.weights.iter().zip(&g).map(|(w, x)| w * x).sum();
            let mut cur = vec![y0; n];
            for (row, c) in r.integ.chunks_exact(n).zip(cur.iter_mut()) {
                let acc: Complex64 = row.iter().zip(&g).map(|(a, x)| a * x).sum();
                *c += h2 * acc;
            }
            self.y[m + 1] = y0 + h2 * end;
            prev = cur;
        }
        self.x = x1;
        PanelNodes {
            x: xs,
            w: r.weights.iter().map(|w| w * h2).collect(),
            top: prev,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integration_matrix_is_exact_on_polynomials() {
        let r = Rule::get(16);
        let n = r.nodes.len();
        // ∫_{-1}^{x} 3t² dt = x³ + 1
        for q in 0..n {
            let s: f64 = (0..n).map(|j| r.integ[q * n + j] * 3.0 * r.nodes[j].powi(2)).sum();
            assert!((s - (r.nodes[q].powi(3) + 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn exponential_tower() {
        // letters b b with ω_b = 1: y_2(x) = x²/2
        let f = |_x: f64| (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let mut p = Propagator::new(&[Letter::B, Letter::B], &f, 0.0, 24);
        p.step(0.7);
        p.step(2.0);
        assert!((p.y[2].re - 2.0).abs() < 1e-14);
    }
}
