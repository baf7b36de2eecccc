//! Special functions and Welch's unequal-variance t-test.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos approximation, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0));
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Evaluated by the continued fraction for `I_x(a, b)` when
/// `x < (a + 1) / (a + b + 2)` and through `1 − I_{1−x}(b, a)` otherwise.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(Error::Parameter(format!(
            "incomplete beta needs a > 0, b > 0, 0 <= x <= 1; got a = {a}, b = {b}, x = {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 10_000;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Two-sided tail probability `P(|T| >= |t|)` of Student's t with `df`
/// degrees of freedom (`df` need not be an integer).
pub fn students_t_two_sided(t: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) {
        return Err(Error::Parameter(format!("degrees of freedom must be > 0, got {df}")));
    }
    if t.is_nan() {
        return Err(Error::Parameter("t statistic is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t))
}

/// Summary statistics of one sample; `var` uses the n − 1 divisor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub mean: f64,
    pub var: f64,
    pub n: usize,
}

impl SampleSummary {
    pub fn new(mean: f64, var: f64, n: usize) -> Self {
        Self { mean, var, n }
    }

    /// Exact zero variance when every value is identical.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n < 2 || values.windows(2).all(|w| w[0] == w[1]) {
            0.0
        } else {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
        };
        Self { mean, var, n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    /// Two-sided p-value.
    pub p_value: f64,
}

pub fn welch(a: SampleSummary, b: SampleSummary) -> Result<WelchTest> {
    if a.n < 2 || b.n < 2 {
        return Err(Error::TestUndefined(format!(
            "Welch's test needs two samples of size >= 2, got {} and {}",
            a.n, b.n
        )));
    }
    if !(a.var >= 0.0) || !(b.var >= 0.0) {
        return Err(Error::Parameter("sample variances must be >= 0".into()));
    }
    let sa = a.var / a.n as f64;
    let sb = b.var / b.n as f64;
    let se2 = sa + sb;
    let diff = a.mean - b.mean;
    if se2 == 0.0 {
        let (t, p_value) = if diff == 0.0 { (0.0, 1.0) } else { (diff.signum() * f64::INFINITY, 0.0) };
        return Ok(WelchTest { t, df: f64::NAN, p_value });
    }
    let t = diff / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (a.n - 1) as f64 + sb * sb / (b.n - 1) as f64);
    let p_value = students_t_two_sided(t, df)?;
    Ok(WelchTest { t, df, p_value })
}

/// Two-sided Welch p-value.
pub fn welch_t_test(a: SampleSummary, b: SampleSummary) -> Result<f64> {
    welch(a, b).map(|w| w.p_value)
}
