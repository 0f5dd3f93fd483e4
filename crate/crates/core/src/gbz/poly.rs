use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Laurent polynomial `Σ_{n=-3}^{3} c_n β^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaurentPoly {
    coeffs: [Complex64; 7],
}

impl LaurentPoly {
    pub const MIN_POWER: i32 = -3;
    pub const MAX_POWER: i32 = 3;

    pub fn zero() -> Self {
        Self { coeffs: [ZERO; 7] }
    }

    pub fn coeff(&self, n: i32) -> Complex64 {
        self.coeffs[(n + 3) as usize]
    }

    pub fn coeff_mut(&mut self, n: i32) -> &mut Complex64 {
        &mut self.coeffs[(n + 3) as usize]
    }

    pub fn eval(&self, beta: Complex64) -> Complex64 {
        // Horner on β³ f(β), then divide
        let mut acc = ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * beta + c;
        }
        acc / beta.powi(3)
    }

    /// Lowest and highest powers with a nonzero coefficient.
    pub fn support(&self) -> Option<(i32, i32)> {
        let nz: Vec<i32> = (-3..=3).filter(|&n| self.coeff(n) != ZERO).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// True when the outermost coefficients vanish and the root count drops
    /// below six.
    pub fn is_degenerate(&self) -> bool {
        self.support() != Some((-3, 3))
    }

    /// Nonzero roots of `f`, ascending by modulus with ties broken by
    /// ascending argument. Also returns the pole order `p`: the generalized
    /// Brillouin zone pairs roots `p` and `p + 1` (1-based).
    pub fn sorted_roots(&self) -> (Vec<Complex64>, usize) {
        let Some((lo, hi)) = self.support() else { return (Vec::new(), 0) };
        let coeffs: Vec<Complex64> = (lo..=hi).map(|n| self.coeff(n)).collect();
        let mut roots = polynomial_roots(&coeffs);
        sort_by_modulus(&mut roots);
        (roots, (-lo).max(0) as usize)
    }
}

pub fn sort_by_modulus(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
}

/// `ln(|β_{p+1}| / |β_p|)` for the middle pair of a sorted root list.
pub fn middle_gap(roots: &[Complex64], p: usize) -> Option<f64> {
    if p == 0 || p >= roots.len() {
        return None;
    }
    Some((roots[p].norm() / roots[p - 1].norm()).ln())
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of `Σ_j c_j z^j` (ascending coefficients) by Aberth-Ehrlich
/// iteration with Newton polishing. Leading zeros are trimmed.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == ZERO {
        end -= 1;
    }
    let c = &coeffs[..end];
    if c.len() < 2 {
        return Vec::new();
    }
    let n = c.len() - 1;
    // zero roots handled exactly
    let zeros = c.iter().take_while(|&&z| z == ZERO).count();
    let c = &c[zeros..];
    let m = c.len() - 1;
    let mut roots = vec![ZERO; zeros];
    if m == 0 {
        return roots;
    }
    if m == 1 {
        roots.push(-c[0] / c[1]);
        return roots;
    }

    // starting circle from the geometric mean of the root moduli
    let radius = (c[0].norm() / c[m].norm()).powf(1.0 / m as f64);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..m {
            let (p, dp) = horner(c, z[k]);
            if p == ZERO {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..m).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = horner(c, *zk);
            if dp != ZERO {
                let next = *zk - p / dp;
                if horner(c, next).0.norm() < p.norm() {
                    *zk = next;
                }
            }
        }
    }
    roots.extend(z);
    debug_assert_eq!(roots.len(), n);
    roots
}
