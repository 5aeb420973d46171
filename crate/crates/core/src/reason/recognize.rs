//! Recognition of decimal constants as algebraic numbers of degree at most 2.

/// `a*k^2 + b*k + c` with a root matching the recognized constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Recognized {
    pub coefficients: [i64; 3],
    /// The exact root nearest to the input, in floating point.
    pub root: f64,
}

impl Recognized {
    /// The minimal polynomial in the variable `k`, e.g. `k^2 - 27`.
    pub fn polynomial_text(&self) -> String {
        let [a, b, c] = self.coefficients;
        let mut out = String::new();
        for (coef, mono) in [(a, "k^2"), (b, "k"), (c, "")] {
            if coef == 0 {
                continue;
            }
            let mag = coef.unsigned_abs();
            let body = match (mag, mono) {
                (_, "") => mag.to_string(),
                (1, m) => m.to_string(),
                (_, m) => format!("{mag}*{m}"),
            };
            if out.is_empty() {
                out = if coef < 0 { format!("-{body}") } else { body };
            } else {
                out.push_str(if coef < 0 { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Searches `a*k^2 + b*k + c` with `|a|, |b|, |c| <= bound` having a root
/// within `tol * max(1, |kappa|)` of `kappa`, preferring the smallest
/// `|a| + |b| + |c|`.
pub fn recognize_quadratic(kappa: f64, bound: i64, tol: f64) -> Option<Recognized> {
    if !kappa.is_finite() {
        return None;
    }
    let tol = tol * kappa.abs().max(1.0);
    let mut best: Option<(i64, Recognized)> = None;
    for a in 0..=bound {
        for b in -bound..=bound {
            let base = a + b.abs();
            if best.as_ref().is_some_and(|(s, _)| base >= *s) {
                continue;
            }
            if a == 0 && b <= 0 {
                continue;
            }
            let cf = -((a as f64) * kappa * kappa + (b as f64) * kappa);
            let c = cf.round();
            if c.abs() > bound as f64 {
                continue;
            }
            let c = c as i64;
            if gcd(gcd(a, b), c) != 1 {
                continue;
            }
            let root = if a == 0 {
                -(c as f64) / (b as f64)
            } else {
                let disc = (b * b - 4 * a * c) as f64;
                if disc < 0.0 {
                    continue;
                }
                let s = disc.sqrt();
                let (r1, r2) = ((-(b as f64) + s) / (2.0 * a as f64), (-(b as f64) - s) / (2.0 * a as f64));
                if (r1 - kappa).abs() <= (r2 - kappa).abs() {
                    r1
                } else {
                    r2
                }
            };
            if (root - kappa).abs() > tol {
                continue;
            }
            // a quadratic with a rational root is not minimal
            if a != 0 {
                let disc = b * b - 4 * a * c;
                let s = (disc as f64).sqrt().round() as i64;
                if s * s == disc {
                    continue;
                }
            }
            let score = base + c.abs();
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, Recognized { coefficients: [a, b, c], root }));
            }
        }
    }
    best.map(|(_, r)| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognizes_small_constants() {
        let r = recognize_quadratic(27f64.sqrt(), 1000, 1e-9).unwrap();
        assert_eq!(r.coefficients, [1, 0, -27]);
        assert_eq!(r.polynomial_text(), "k^2 - 27");
        let one = recognize_quadratic(1.0, 1000, 1e-9).unwrap();
        assert_eq!(one.polynomial_text(), "k - 1");
        let half = recognize_quadratic(1.5, 1000, 1e-9).unwrap();
        assert_eq!(half.coefficients, [0, 2, -3]);
        let golden = recognize_quadratic((1.0 + 5f64.sqrt()) / 2.0, 1000, 1e-9).unwrap();
        assert_eq!(golden.polynomial_text(), "k^2 - k - 1");
        assert!(recognize_quadratic(std::f64::consts::PI, 1000, 1e-12).is_none());
    }
}
