//! Small statistical toolbox: Kolmogorov-Smirnov statistics, Wilson score
//! intervals, sample correlation, a two-proportion z-test, and Simpson
//! quadrature. These back the goodness-of-fit suite in [`crate::validation`]
//! and the confidence bookkeeping in [`crate::montecarlo`].

/// Two-sided normal quantile for the 99% Wilson interval (z at 0.995).
pub const Z_99: f64 = 2.575829303548901;

/// Two-sided normal quantile at the 1% level (z at 0.995), used by the
/// two-proportion flatness test.
pub const Z_TWO_PROP_1PCT: f64 = Z_99;

/// One-sample Kolmogorov-Smirnov statistic against a model cdf.
///
/// Takes both one-sided deviations into account:
/// `D = max_i max(|F(x_(i)) - i/n|, |F(x_(i)) - (i+1)/n|)`.
pub fn ks_statistic<F>(samples: &[f64], cdf: F) -> f64
where
    F: Fn(f64) -> f64,
{
    assert!(!samples.is_empty(), "KS statistic needs samples");
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("non-finite sample"));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = (f - i as f64 / n).abs();
        let hi = (f - (i as f64 + 1.0) / n).abs();
        d = d.max(lo).max(hi);
    }
    d
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS statistic needs samples");
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).expect("non-finite sample"));
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).expect("non-finite sample"));

    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic one-sample KS critical value at significance `level`.
pub fn ks_critical(level: f64, n: usize) -> f64 {
    assert!(level > 0.0 && level < 1.0);
    ((-0.5 * (level / 2.0).ln()) / n as f64).sqrt()
}

/// Asymptotic two-sample KS critical value at significance `level`.
pub fn ks_critical_two_sample(level: f64, n: usize, m: usize) -> f64 {
    assert!(level > 0.0 && level < 1.0);
    let c = (-0.5 * (level / 2.0).ln()).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Wilson score interval for a binomial proportion.
///
/// Stays inside [0, 1] and remains informative near 0, where the
/// false-alarm probabilities of interest live.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0, "Wilson interval needs at least one trial");
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // clamp away 1-ulp leaks at p = 0 or 1: the interval always covers p
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Pearson sample correlation coefficient.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    assert!(a.len() > 1);
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va.sqrt() * vb.sqrt())
}

/// Pooled two-proportion z statistic for H0: p1 = p2.
pub fn two_proportion_z(hits1: u64, trials1: u64, hits2: u64, trials2: u64) -> f64 {
    assert!(trials1 > 0 && trials2 > 0);
    let (n1, n2) = (trials1 as f64, trials2 as f64);
    let p1 = hits1 as f64 / n1;
    let p2 = hits2 as f64 / n2;
    let pooled = (hits1 + hits2) as f64 / (n1 + n2);
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2)).sqrt();
    if se == 0.0 {
        0.0
    } else {
        (p1 - p2) / se
    }
}

/// Inverse standard-normal cdf (Acklam's rational approximation,
/// absolute error below 1.2e-9).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0,1), got {p}");
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383_577_518_672_69e2,
        -3.066479806614716e1,
        2.506628277459239e0,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838e0,
        -2.549732539343734e0,
        4.374664141464968e0,
        2.938163982698783e0,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996e0,
        3.754408661907416e0,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

/// Composite Simpson rule on [a, b] with `intervals` subdivisions
/// (rounded up to even).
pub fn simpson<F>(f: F, a: f64, b: f64, intervals: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let n = if intervals.is_multiple_of(2) {
        intervals
    } else {
        intervals + 1
    }
    .max(2);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}
