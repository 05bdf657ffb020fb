//! Model domains and their Dirichlet Laplace spectra.
//!
//! Four spectrum generators feed the operator laboratory:
//!
//! * `Interval01` — the unit interval, mu_k = k^2 pi^2 in closed form;
//! * `UnitDisk` — mu = z_{m,j}^2 over Bessel zeros, doubly indexed by
//!   angular order m and radial index j;
//! * `WeylModel` — Weyl's asymptotic law taken as an exact definition,
//!   mu_k = 4 pi (Gamma(n/2+1)/|Omega|)^{2/n} k^{2/n};
//! * `FourierGrid` — a finite symmetric frequency set with mu = |xi|^2.
//!
//! Every spectrum carries per-mode labels and induces the gamma sequence
//! gamma_k = sqrt(1 + mu_k) that links the Sobolev-orthonormal and
//! L2-orthonormal eigenbases.
//!
//! The disk basis is doubly indexed and the literature fixes no listing
//! order; here modes are sorted by ascending mu with the deterministic
//! tie-break (|m|, then +m before -m, then j).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::bessel::bessel_zeros;
use crate::error::{Error, Result};

/// Which domain is modeled and how its Laplace spectrum is generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Interval01,
    UnitDisk,
    WeylModel { n: u32, volume: f64 },
    FourierGrid { n: u32, frequencies: Vec<Vec<f64>> },
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Interval01 | DomainSpec::UnitDisk => Ok(()),
            DomainSpec::WeylModel { n, volume } => {
                if *n < 1 {
                    return Err(Error::InvalidParameter("WeylModel: n must be >= 1".into()));
                }
                if *volume <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "WeylModel: volume must be > 0".into(),
                    ));
                }
                Ok(())
            }
            DomainSpec::FourierGrid { n, frequencies } => {
                if frequencies.is_empty() {
                    return Err(Error::InvalidParameter(
                        "FourierGrid: frequency set is empty".into(),
                    ));
                }
                for xi in frequencies {
                    if xi.len() != *n as usize {
                        return Err(Error::InvalidParameter(format!(
                            "FourierGrid: frequency {:?} has dimension {} instead of {}",
                            xi,
                            xi.len(),
                            n
                        )));
                    }
                    let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
                    if !frequencies.contains(&neg) {
                        return Err(Error::InvalidParameter(format!(
                            "FourierGrid: set not closed under negation, missing {:?}",
                            neg
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Symmetric integer grid {-kmax..kmax}^n, the default Fourier truncation.
    pub fn fourier_integer_grid(n: u32, kmax: i64) -> Self {
        assert!(n >= 1 && kmax >= 0);
        let mut freqs: Vec<Vec<f64>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for f in &freqs {
                for k in -kmax..=kmax {
                    let mut g = f.clone();
                    g.push(k as f64);
                    next.push(g);
                }
            }
            freqs = next;
        }
        DomainSpec::FourierGrid { n, frequencies: freqs }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DomainSpec::Interval01 => "interval01",
            DomainSpec::UnitDisk => "unit_disk",
            DomainSpec::WeylModel { .. } => "weyl_model",
            DomainSpec::FourierGrid { .. } => "fourier_grid",
        }
    }
}

/// Per-mode label: plain index, disk pair (m, j), or frequency vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModeLabel {
    Index(usize),
    Disk { m: i32, j: u32 },
    Frequency(Vec<f64>),
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::Index(k) => write!(f, "{k}"),
            ModeLabel::Disk { m, j } => write!(f, "({m},{j})"),
            ModeLabel::Frequency(xi) => {
                write!(f, "(")?;
                for (i, v) in xi.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Ascending Dirichlet Laplace eigenvalues with multiplicity and labels.
#[derive(Debug, Clone)]
pub struct LaplaceSpectrum {
    pub domain: DomainSpec,
    pub mu: Vec<f64>,
    pub labels: Vec<ModeLabel>,
}

impl LaplaceSpectrum {
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// gamma_k = sqrt(1 + mu_k), same ordering and labels.
    pub fn gamma_sequence(&self) -> GammaSequence {
        GammaSequence {
            domain: self.domain.clone(),
            gamma: self.mu.iter().map(|&m| (1.0 + m).sqrt()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// CSV with columns (index, label, mu, gamma).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,label,mu,gamma\n");
        for (i, (mu, label)) in self.mu.iter().zip(self.labels.iter()).enumerate() {
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e}\n",
                i + 1,
                label,
                mu,
                (1.0 + mu).sqrt()
            ));
        }
        out
    }
}

/// The weights gamma_k = sqrt(1 + mu_k) >= 1 attached to a domain truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSequence {
    pub domain: DomainSpec,
    pub gamma: Vec<f64>,
    pub labels: Vec<ModeLabel>,
}

impl GammaSequence {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }
}

/// Interval (0,1): mu_k = k^2 pi^2, k = 1..N.
pub fn interval_spectrum(n_modes: usize) -> Result<LaplaceSpectrum> {
    if n_modes == 0 {
        return Err(Error::EmptyDomain);
    }
    let mu: Vec<f64> = (1..=n_modes)
        .map(|k| (k as f64 * PI).powi(2))
        .collect();
    let labels = (1..=n_modes).map(ModeLabel::Index).collect();
    Ok(LaplaceSpectrum {
        domain: DomainSpec::Interval01,
        mu,
        labels,
    })
}

/// Unit disk: the `count` smallest z_{m,j}^2 across all angular orders,
/// with the +/-m degeneracy listed explicitly.
pub fn disk_spectrum(count: usize) -> Result<LaplaceSpectrum> {
    if count == 0 {
        return Err(Error::EmptyDomain);
    }
    // Search window: wide enough that the smallest `count` values are inside;
    // z_{m,1} > m and z_{m,j} grows ~ pi per radial step give comfortable slack.
    let w = (2.0 * (count as f64).sqrt()).ceil() as usize + 8;
    let mut entries: Vec<(f64, i32, u32)> = Vec::with_capacity((2 * w + 1) * w);
    for m in 0..=w as u32 {
        let zeros = bessel_zeros(m, w)?;
        for (j, z) in zeros.iter().enumerate() {
            let mu = z * z;
            entries.push((mu, m as i32, j as u32 + 1));
            if m > 0 {
                entries.push((mu, -(m as i32), j as u32 + 1));
            }
        }
    }
    entries.sort_by(|a, b| {
        (a.0, a.1.unsigned_abs(), -a.1.signum(), a.2)
            .partial_cmp(&(b.0, b.1.unsigned_abs(), -b.1.signum(), b.2))
            .unwrap()
    });
    entries.truncate(count);
    Ok(LaplaceSpectrum {
        domain: DomainSpec::UnitDisk,
        mu: entries.iter().map(|e| e.0).collect(),
        labels: entries
            .iter()
            .map(|e| ModeLabel::Disk { m: e.1, j: e.2 })
            .collect(),
    })
}

/// Gamma(n/2 + 1) for integer n >= 0, via the half-integer recursion.
pub fn gamma_half(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        // Gamma(k + 1) = k!
        (1..=n / 2).map(|k| k as f64).product()
    } else {
        // Gamma(n/2 + 1) = (n/2)(n/2 - 1)...(1/2) Gamma(1/2)
        let mut acc = PI.sqrt();
        let mut x = n as f64 / 2.0 + 1.0;
        while x > 1.0 {
            x -= 1.0;
            acc *= x;
        }
        acc
    }
}

/// The Weyl constant 4 pi (Gamma(n/2+1)/|Omega|)^{2/n}.
pub fn weyl_constant(n: u32, volume: f64) -> f64 {
    4.0 * PI * (gamma_half(n) / volume).powf(2.0 / n as f64)
}

/// Weyl model: the asymptotic law taken as exact, mu_k = c_n(|Omega|) k^{2/n}.
pub fn weyl_model_spectrum(n: u32, volume: f64, n_modes: usize) -> Result<LaplaceSpectrum> {
    let domain = DomainSpec::WeylModel { n, volume };
    domain.validate()?;
    if n_modes == 0 {
        return Err(Error::EmptyDomain);
    }
    let c = weyl_constant(n, volume);
    let mu: Vec<f64> = (1..=n_modes)
        .map(|k| c * (k as f64).powf(2.0 / n as f64))
        .collect();
    let labels = (1..=n_modes).map(ModeLabel::Index).collect();
    Ok(LaplaceSpectrum { domain, mu, labels })
}

/// Fourier grid: mu = |xi|^2 sorted ascending with frequency labels.
pub fn fourier_grid_spectrum(spec: &DomainSpec) -> Result<LaplaceSpectrum> {
    let DomainSpec::FourierGrid { frequencies, .. } = spec else {
        return Err(Error::InvalidParameter(
            "fourier_grid_spectrum requires a FourierGrid domain".into(),
        ));
    };
    spec.validate()?;
    let mut entries: Vec<(f64, Vec<f64>)> = frequencies
        .iter()
        .map(|xi| (xi.iter().map(|v| v * v).sum::<f64>(), xi.clone()))
        .collect();
    entries.sort_by(|a, b| (a.0, &a.1).partial_cmp(&(b.0, &b.1)).unwrap());
    Ok(LaplaceSpectrum {
        domain: spec.clone(),
        mu: entries.iter().map(|e| e.0).collect(),
        labels: entries
            .into_iter()
            .map(|e| ModeLabel::Frequency(e.1))
            .collect(),
    })
}

/// Dispatch on the domain kind; `n_modes` is ignored by FourierGrid, whose
/// size is fixed by its frequency set.
pub fn spectrum_for(domain: &DomainSpec, n_modes: usize) -> Result<LaplaceSpectrum> {
    match domain {
        DomainSpec::Interval01 => interval_spectrum(n_modes),
        DomainSpec::UnitDisk => disk_spectrum(n_modes),
        DomainSpec::WeylModel { n, volume } => weyl_model_spectrum(*n, *volume, n_modes),
        DomainSpec::FourierGrid { .. } => fourier_grid_spectrum(domain),
    }
}

/// Outcome of comparing a spectrum against Weyl's growth law.
#[derive(Debug, Clone)]
pub struct WeylCheck {
    /// (k, mu_k, ratio mu_k / (c_n k^{2/n})) over the retained range.
    pub rows: Vec<(usize, f64, f64)>,
    pub max_deviation: f64,
    /// First retained 1-based index.
    pub first_retained: usize,
}

/// Empirical ratios mu_k / (c_n(|Omega|) k^{2/n}) over the asymptotic range.
///
/// The leading (1 - fraction) share of the spectrum is discarded: small
/// indices are pre-asymptotic and would swamp the deviation (for the disk,
/// mu_2/(4*2) is already ~1.8); the check targets the tail where the law is
/// meaningful.
pub fn weyl_count_check(
    spectrum: &LaplaceSpectrum,
    n: u32,
    volume: f64,
    fraction: f64,
) -> Result<WeylCheck> {
    if spectrum.len() < 50 {
        return Err(Error::SpectrumTooShort {
            min: 50,
            got: spectrum.len(),
        });
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(
            "weyl_count_check: fraction must lie in (0,1)".into(),
        ));
    }
    let c = weyl_constant(n, volume);
    let len = spectrum.len();
    let skip = ((1.0 - fraction) * len as f64).floor() as usize;
    let mut rows = Vec::with_capacity(len - skip);
    let mut max_dev = 0.0f64;
    for (idx, &mu) in spectrum.mu.iter().enumerate().skip(skip) {
        let k = idx + 1;
        let ratio = mu / (c * (k as f64).powf(2.0 / n as f64));
        max_dev = max_dev.max((ratio - 1.0).abs());
        rows.push((k, mu, ratio));
    }
    Ok(WeylCheck {
        rows,
        max_deviation: max_dev,
        first_retained: skip + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_zeros;

    #[test]
    fn interval_first_three_eigenvalues_are_exact() {
        let s = interval_spectrum(3).unwrap();
        assert_eq!(s.mu[0], PI * PI);
        assert_eq!(s.mu[1], 4.0 * PI * PI);
        assert_eq!(s.mu[2], 9.0 * PI * PI);
        assert_eq!(s.labels[0], ModeLabel::Index(1));
    }

    #[test]
    fn interval_gamma_matches_closed_form() {
        let s = interval_spectrum(64).unwrap();
        let g = s.gamma_sequence();
        for (i, &gamma) in g.gamma.iter().enumerate() {
            let k = (i + 1) as f64;
            let exact = (k * k * PI * PI + 1.0).sqrt();
            assert!((gamma - exact).abs() <= 1e-14 * exact);
            // gamma^2 - 1 reproduces mu to 1e-14 relative
            assert!(((gamma * gamma - 1.0) - s.mu[i]).abs() <= 1e-14 * s.mu[i]);
        }
        assert!((g.gamma[0] - (PI * PI + 1.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_interval_is_rejected() {
        assert!(matches!(interval_spectrum(0), Err(Error::EmptyDomain)));
    }

    #[test]
    fn disk_ground_mode_is_first_bessel_zero_squared() {
        let s = disk_spectrum(1).unwrap();
        let z01 = bessel_zeros(0, 1).unwrap()[0];
        assert!((s.mu[0] - z01 * z01).abs() < 1e-10);
        assert_eq!(s.labels[0], ModeLabel::Disk { m: 0, j: 1 });
    }

    #[test]
    fn disk_degenerate_pair_ordering() {
        // brute-force oracle over a generous window
        let mut oracle: Vec<(f64, i32, u32)> = Vec::new();
        for m in 0..=8u32 {
            for (j, z) in bessel_zeros(m, 8).unwrap().iter().enumerate() {
                oracle.push((z * z, m as i32, j as u32 + 1));
                if m > 0 {
                    oracle.push((z * z, -(m as i32), j as u32 + 1));
                }
            }
        }
        oracle.sort_by(|a, b| {
            (a.0, a.1.unsigned_abs(), -a.1.signum(), a.2)
                .partial_cmp(&(b.0, b.1.unsigned_abs(), -b.1.signum(), b.2))
                .unwrap()
        });

        let s = disk_spectrum(3).unwrap();
        assert!((s.mu[1] - s.mu[2]).abs() < 1e-12);
        assert_eq!(s.labels[1], ModeLabel::Disk { m: 1, j: 1 });
        assert_eq!(s.labels[2], ModeLabel::Disk { m: -1, j: 1 });
        for (mu, ora) in s.mu.iter().zip(oracle.iter()) {
            assert!((mu - ora.0).abs() < 1e-10);
        }
    }

    #[test]
    fn disk_spectrum_is_window_stable() {
        // enlarging the requested count never changes the leading entries
        let small = disk_spectrum(20).unwrap();
        let large = disk_spectrum(80).unwrap();
        for i in 0..20 {
            assert_eq!(small.labels[i], large.labels[i]);
            assert!((small.mu[i] - large.mu[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn spectra_are_nondecreasing_with_gamma_at_least_one() {
        let specs = [
            interval_spectrum(40).unwrap(),
            disk_spectrum(40).unwrap(),
            weyl_model_spectrum(3, 2.0, 40).unwrap(),
            fourier_grid_spectrum(&DomainSpec::fourier_integer_grid(2, 3)).unwrap(),
        ];
        for s in &specs {
            for w in s.mu.windows(2) {
                assert!(w[1] >= w[0]);
            }
            for g in s.gamma_sequence().gamma {
                assert!(g >= 1.0);
            }
        }
    }

    #[test]
    fn weyl_model_n2_unit_disk_volume_gives_mu1_equal_4() {
        // n = 2, |Omega| = pi: 4 pi (Gamma(2)/pi)^{1} * 1 = 4
        let s = weyl_model_spectrum(2, PI, 5).unwrap();
        assert!((s.mu[0] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn weyl_model_gamma_ratio_limits() {
        // gamma_{2k}/gamma_k -> 2^{1/n}
        for n in [1u32, 2, 3] {
            let s = weyl_model_spectrum(n, 1.0, 4000).unwrap();
            let g = s.gamma_sequence().gamma;
            let k = 1990;
            let ratio = g[2 * k - 1] / g[k - 1];
            let target = 2f64.powf(1.0 / n as f64);
            assert!(
                (ratio - target).abs() < 2e-3,
                "n={n}: ratio {ratio} vs {target}"
            );
            // and gamma_{k/2}/gamma_k -> 2^{-1/n} for even k
            let ratio_half = g[k / 2 - 1] / g[k - 1];
            assert!((ratio_half - 1.0 / target).abs() < 2e-3);
        }
    }

    #[test]
    fn fourier_grid_small_cases() {
        let spec = DomainSpec::fourier_integer_grid(1, 1);
        let s = fourier_grid_spectrum(&spec).unwrap();
        assert_eq!(s.mu, vec![0.0, 1.0, 1.0]);
        // xi = (1,1) in a 2-d grid has mu = 2 (solution-operator eigenvalue 1/3)
        let spec2 = DomainSpec::fourier_integer_grid(2, 1);
        let s2 = fourier_grid_spectrum(&spec2).unwrap();
        assert!(s2.mu.contains(&2.0));
        assert_eq!(s2.mu[0], 0.0); // xi = 0 permitted, A-eigenvalue 1/(1+0) = 1
    }

    #[test]
    fn fourier_grid_requires_symmetry() {
        let spec = DomainSpec::FourierGrid {
            n: 1,
            frequencies: vec![vec![0.0], vec![1.0]],
        };
        assert!(fourier_grid_spectrum(&spec).is_err());
    }

    #[test]
    fn gamma_half_integers() {
        assert!((gamma_half(2) - 1.0).abs() < 1e-15); // Gamma(2) = 1
        assert!((gamma_half(4) - 2.0).abs() < 1e-15); // Gamma(3) = 2
        assert!((gamma_half(1) - PI.sqrt() / 2.0).abs() < 1e-15); // Gamma(3/2)
        assert!((gamma_half(3) - 3.0 * PI.sqrt() / 4.0).abs() < 1e-14); // Gamma(5/2)
    }

    #[test]
    fn weyl_check_interval_ratio_is_exactly_one() {
        // n = 1, |Omega| = 1: c = 4 pi Gamma(3/2)^2 = pi^2, so mu_k/(c k^2) = 1
        let s = interval_spectrum(100).unwrap();
        let check = weyl_count_check(&s, 1, 1.0, 0.5).unwrap();
        assert!(check.max_deviation < 1e-13);
        assert_eq!(check.first_retained, 51);
    }

    #[test]
    fn weyl_check_model_ratio_is_one_by_construction() {
        let s = weyl_model_spectrum(2, 3.0, 60).unwrap();
        let check = weyl_count_check(&s, 2, 3.0, 0.8).unwrap();
        assert!(check.max_deviation < 1e-14);
    }

    #[test]
    fn weyl_check_rejects_short_spectra() {
        let s = interval_spectrum(10).unwrap();
        assert!(matches!(
            weyl_count_check(&s, 1, 1.0, 0.5),
            Err(Error::SpectrumTooShort { .. })
        ));
    }

    #[test]
    fn csv_export_has_expected_header_and_rows() {
        let s = interval_spectrum(2).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "index,label,mu,gamma");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1");
        assert_eq!(row[1], "1");
        assert!(row[2].contains('e'));
    }
}
