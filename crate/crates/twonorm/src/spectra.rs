//! Dual-norm spectra, resolvent norms, and pseudospectral ladders.
//!
//! At a fixed truncation the H1 and L2 matrices are similar, so their
//! spectra agree as multisets; the infinite-dimensional phenomena (spectra
//! filling an ellipse, essential spectrum) leave their finite-N signature in
//! the growth of resolvent norms across a truncation ladder, not in the
//! eigenvalues of any single compression. Eigenvalues of the non-normal
//! Toeplitz model are therefore computed through its exact diagonal-scaling
//! similarity to a symmetric tridiagonal matrix; a direct nonsymmetric solve
//! is meaningless there for large N (the similarity condition number grows
//! like 4^{N/2} and rounding scatters the computed spectrum over the
//! ellipse, which is precisely the pseudospectral effect being measured).

use num_complex::Complex64;
use serde::Serialize;

use crate::constructors::{adjacent_shift_t, doubling_shift_t, doubling_toeplitz_model};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::operator::{default_tol, OperatorSpace, TwoNormOperator};

/// Resolvent profile of one probe point across a truncation ladder.
#[derive(Debug, Clone, Serialize)]
pub struct ResolventProbe {
    pub lambda: Complex64,
    /// (N, ||(T_N - lambda)^{-1}||) samples, ascending N.
    pub samples: Vec<(usize, f64)>,
    /// Ratio of the largest-N to smallest-N resolvent norm.
    pub growth_factor: f64,
    /// Numerical classification: grows by >= 4x across the ladder.
    pub in_essential_spectrum: bool,
}

/// A rectangular pseudospectrum grid of smallest singular values.
#[derive(Debug, Clone, Serialize)]
pub struct PseudospectrumGrid {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// sigma_min(lambda I - M), row-major over (im, re).
    pub sigma_min: Vec<f64>,
}

impl PseudospectrumGrid {
    /// CSV with columns (re, im, sigma_min), plot-ready.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,sigma_min\n");
        for (i, &im) in self.im.iter().enumerate() {
            for (j, &re) in self.re.iter().enumerate() {
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e}\n",
                    re,
                    im,
                    self.sigma_min[i * self.re.len() + j]
                ));
            }
        }
        out
    }
}

/// Spectral output: eigenvalues in a chosen space, with optional resolvent
/// ladder profiles and pseudospectrum grid.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<Complex64>,
    pub space: OperatorSpace,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolvent_profile: Option<Vec<ResolventProbe>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<PseudospectrumGrid>,
}

impl SpectralReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Dense eigensolve of the chosen representation. Symmetrizable operators in
/// the L2 space go through the Hermitian solver and come back exactly real;
/// Lie-algebra elements go through it with angles restored to the imaginary
/// axis.
pub fn spectrum(x: &TwoNormOperator, space: OperatorSpace) -> Result<SpectralReport> {
    let tol = default_tol(x.dim());
    let eigenvalues = match space {
        OperatorSpace::H1 => {
            let (vals, _) = linalg::eig(x.mat())?;
            vals.to_vec()
        }
        OperatorSpace::L2 => {
            let mhat = x.l2_representation();
            if x.is_symmetrizable(tol)?.within {
                let herm = (&mhat + &linalg::adjoint(&mhat)).mapv(|z| z * 0.5);
                let (w, _) = linalg::eigh(&herm)?;
                w.iter().map(|&v| Complex64::new(v, 0.0)).collect()
            } else if x.in_lie_algebra(tol)?.within {
                let herm = mhat.mapv(|z| z * Complex64::new(0.0, -1.0));
                let herm = (&herm + &linalg::adjoint(&herm)).mapv(|z| z * 0.5);
                let (w, _) = linalg::eigh(&herm)?;
                w.iter().map(|&v| Complex64::new(0.0, v)).collect()
            } else {
                let (vals, _) = linalg::eig(&mhat)?;
                vals.to_vec()
            }
        }
    };
    let mut eigenvalues = eigenvalues;
    eigenvalues.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(SpectralReport {
        eigenvalues,
        space,
        resolvent_profile: None,
        grid: None,
    })
}

/// `1/sigma_min(M - lambda I)` in the chosen basis; +inf sentinel when the
/// smallest singular value underflows.
pub fn resolvent_norm(x: &TwoNormOperator, lambda: Complex64, space: OperatorSpace) -> Result<f64> {
    resolvent_norm_matrix(&x.matrix_in(space), lambda)
}

pub fn resolvent_norm_matrix(m: &CMat, lambda: Complex64) -> Result<f64> {
    let n = m.nrows();
    let shifted = m - &linalg::identity(n).mapv(|z| z * lambda);
    let sigma = linalg::smallest_singular_value(&shifted)?;
    if sigma < 1e-300 {
        Ok(f64::INFINITY)
    } else {
        Ok(1.0 / sigma)
    }
}

/// Boundary samples of the limiting-spectrum ellipse
/// `lambda = 2^{1/n} e^{i t} + 2^{-1/n} e^{-i t}`.
pub fn ellipse(n: u32, num_samples: usize) -> Result<Vec<Complex64>> {
    if n < 1 {
        return Err(Error::InvalidParameter("ellipse: n >= 1".into()));
    }
    if num_samples < 4 {
        return Err(Error::InvalidParameter("ellipse: need >= 4 samples".into()));
    }
    let a = 2f64.powf(1.0 / n as f64);
    let b = 2f64.powf(-1.0 / n as f64);
    Ok((0..num_samples)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / num_samples as f64;
            Complex64::from_polar(a, t) + Complex64::from_polar(b, -t)
        })
        .collect())
}

/// Semi-axes (major, minor) of the ellipse for a given n.
pub fn ellipse_semi_axes(n: u32) -> (f64, f64) {
    let a = 2f64.powf(1.0 / n as f64);
    let b = 2f64.powf(-1.0 / n as f64);
    (a + b, a - b)
}

/// Eigenvalues of the doubling Toeplitz model through its exact similarity:
/// scaling rows/columns by (sub/sup)^{k/2} turns it into the symmetric
/// tridiagonal with off-diagonal sqrt(sub*sup) = 1, so the spectrum is real.
pub fn toeplitz_model_eigenvalues(n: u32, size: usize) -> Result<Vec<f64>> {
    if n < 1 || size < 1 {
        return Err(Error::InvalidParameter(
            "toeplitz eigenvalues: n >= 1, size >= 1".into(),
        ));
    }
    // scaled off-diagonal sqrt(sub * sup), with sub * sup = 2^{1/n} 2^{-1/n}
    let off = (2f64.powf(1.0 / n as f64) * 2f64.powf(-1.0 / n as f64)).sqrt();
    linalg::tridiagonal_symmetric_eigenvalues(&vec![0.0; size], &vec![off; size - 1])
}

/// Named constructors accepted by the resolvent ladder.
#[derive(Debug, Clone)]
pub enum LadderBuilder {
    DoublingShift(DomainSpec),
    AdjacentShift,
    ToeplitzModel { n: u32 },
}

impl LadderBuilder {
    pub fn name(&self) -> String {
        match self {
            LadderBuilder::DoublingShift(d) => format!("doubling_shift({})", d.kind_name()),
            LadderBuilder::AdjacentShift => "adjacent_shift".into(),
            LadderBuilder::ToeplitzModel { n } => format!("doubling_toeplitz_model(n={n})"),
        }
    }

    pub fn build(&self, size: usize) -> Result<CMat> {
        match self {
            LadderBuilder::DoublingShift(domain) => {
                Ok(doubling_shift_t(domain, size)?.mat().clone())
            }
            LadderBuilder::AdjacentShift => Ok(adjacent_shift_t(size)?.mat().clone()),
            LadderBuilder::ToeplitzModel { n } => doubling_toeplitz_model(*n, size),
        }
    }
}

/// Growth threshold for the numerical essential-spectrum classification.
pub const ESSENTIAL_GROWTH_FACTOR: f64 = 4.0;

/// Resolvent norms of H1-basis truncations across a ladder of sizes, with
/// the growth-based classification of each probe point. Eigenvalues of the
/// largest truncation are included for reference.
pub fn essential_spectrum_ladder(
    builder: &LadderBuilder,
    lambda_probes: &[Complex64],
    ladder: &[usize],
) -> Result<SpectralReport> {
    if ladder.len() < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: ladder.len(),
        });
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "ladder sizes must strictly increase".into(),
        ));
    }
    let mats: Vec<CMat> = ladder
        .iter()
        .map(|&n| builder.build(n))
        .collect::<Result<_>>()?;

    let mut probes = Vec::with_capacity(lambda_probes.len());
    for &lambda in lambda_probes {
        let mut samples = Vec::with_capacity(ladder.len());
        for (mat, &n) in mats.iter().zip(ladder.iter()) {
            samples.push((n, resolvent_norm_matrix(mat, lambda)?));
        }
        let growth_factor = samples.last().unwrap().1 / samples.first().unwrap().1;
        probes.push(ResolventProbe {
            lambda,
            samples,
            growth_factor,
            in_essential_spectrum: growth_factor >= ESSENTIAL_GROWTH_FACTOR,
        });
    }

    let eigenvalues = match builder {
        LadderBuilder::ToeplitzModel { n } => toeplitz_model_eigenvalues(*n, *ladder.last().unwrap())?
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
        _ => {
            let (vals, _) = linalg::eig(mats.last().unwrap())?;
            let mut v = vals.to_vec();
            v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            v
        }
    };

    Ok(SpectralReport {
        eigenvalues,
        space: OperatorSpace::H1,
        resolvent_profile: Some(probes),
        grid: None,
    })
}

/// Smallest singular values of (lambda I - M) over a rectangular grid.
pub fn pseudospectrum_grid(
    m: &CMat,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
) -> Result<PseudospectrumGrid> {
    if resolution < 2 {
        return Err(Error::InvalidParameter("grid resolution >= 2".into()));
    }
    let res: Vec<f64> = (0..resolution)
        .map(|i| re_range.0 + (re_range.1 - re_range.0) * i as f64 / (resolution - 1) as f64)
        .collect();
    let ims: Vec<f64> = (0..resolution)
        .map(|i| im_range.0 + (im_range.1 - im_range.0) * i as f64 / (resolution - 1) as f64)
        .collect();
    let mut sigma = Vec::with_capacity(resolution * resolution);
    for &im in &ims {
        for &re in &res {
            let shifted = m - &linalg::identity(m.nrows()).mapv(|z| z * Complex64::new(re, im));
            sigma.push(linalg::smallest_singular_value(&shifted)?);
        }
    }
    Ok(PseudospectrumGrid {
        re: res,
        im: ims,
        sigma_min: sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{rank_one_exponential, random_lie_element};
    use crate::domains::interval_spectrum;
    use crate::geodesics::matrix_exp;
    use crate::operator::HVector;
    use std::f64::consts::PI;

    #[test]
    fn solution_operator_spectrum_is_exact() {
        let a = TwoNormOperator::solution_operator(&DomainSpec::Interval01, 3).unwrap();
        let report = spectrum(&a, OperatorSpace::H1).unwrap();
        let mut expect: Vec<f64> = (1..=3)
            .map(|k| 1.0 / ((k * k) as f64 * PI * PI + 1.0))
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in report.eigenvalues.iter().zip(expect.iter()) {
            assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn rank_one_exponential_spectral_mapping() {
        let gamma = interval_spectrum(6).unwrap().gamma_sequence();
        let mut f = HVector::from_slice(
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.5, -0.5),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
            gamma,
        )
        .unwrap();
        f = f.scale(Complex64::new(1.0 / f.l2_norm(), 0.0));
        let t = 0.9;
        let g = rank_one_exponential(&f, t).unwrap();
        let report = spectrum(&g, OperatorSpace::L2).unwrap();
        let phase = Complex64::from_polar(1.0, t);
        let mut hits = 0;
        for ev in &report.eigenvalues {
            if (ev - phase).norm() < 1e-10 {
                hits += 1;
            } else {
                assert!((ev - Complex64::new(1.0, 0.0)).norm() < 1e-10);
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn h1_and_l2_spectra_agree_as_multisets() {
        let gamma = interval_spectrum(24).unwrap().gamma_sequence();
        let x = random_lie_element(&gamma, None, 7).unwrap();
        let g = matrix_exp(&x).unwrap();
        let lhs = spectrum(&g, OperatorSpace::H1).unwrap().eigenvalues;
        let rhs = spectrum(&g, OperatorSpace::L2).unwrap().eigenvalues;
        let dist = linalg::multiset_distance(&lhs, &rhs);
        assert!(dist < 1e-8, "multiset distance {dist}");
    }

    #[test]
    fn resolvent_far_outside_numerical_range() {
        let gamma = interval_spectrum(16).unwrap().gamma_sequence();
        let x = random_lie_element(&gamma, None, 3).unwrap();
        let norm = x.h1_norm().unwrap();
        let lambda = Complex64::new(2.5 * norm.max(1.0), 0.0);
        let r = resolvent_norm(&x, lambda, OperatorSpace::H1).unwrap();
        assert!(r <= 1.0 / (lambda.norm() - norm) + 1e-12);
    }

    #[test]
    fn hermitian_resolvent_matches_distance_to_spectrum() {
        let a = TwoNormOperator::solution_operator(&DomainSpec::Interval01, 12).unwrap();
        let mu = 1.0 / (PI * PI + 1.0); // an eigenvalue
        let delta = 1e-3;
        let lambda = Complex64::new(mu, delta);
        let r = resolvent_norm(&a, lambda, OperatorSpace::L2).unwrap();
        assert!((r - 1.0 / delta).abs() < 0.1 / delta);
    }

    #[test]
    fn resolvent_always_dominates_inverse_distance() {
        let gamma = interval_spectrum(14).unwrap().gamma_sequence();
        let x = random_lie_element(&gamma, None, 11).unwrap();
        let evs = spectrum(&x, OperatorSpace::H1).unwrap().eigenvalues;
        for lambda in [
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.2, 0.1),
            Complex64::new(0.0, 1.1),
        ] {
            let dist = evs.iter().map(|e| (e - lambda).norm()).fold(f64::MAX, f64::min);
            let r = resolvent_norm(&x, lambda, OperatorSpace::H1).unwrap();
            assert!(r >= 1.0 / dist - 1e-12, "r {r} dist {dist}");
        }
    }

    #[test]
    fn ellipse_reference_points() {
        let pts = ellipse(1, 4).unwrap();
        // t = 0 -> 2.5, t = pi/2 -> 1.5i
        assert!((pts[0] - Complex64::new(2.5, 0.0)).norm() < 1e-14);
        assert!((pts[1] - Complex64::new(0.0, 1.5)).norm() < 1e-14);
        // n = 2 top of the ellipse: i(sqrt2 - 1/sqrt2)
        let top = 2f64.sqrt() - 1.0 / 2f64.sqrt();
        let pts2 = ellipse(2, 8).unwrap();
        assert!((pts2[2] - Complex64::new(0.0, top)).norm() < 1e-14);
        assert!((top - 0.7071067811865475).abs() < 1e-14);
        let (major, minor) = ellipse_semi_axes(2);
        assert!((major - (2f64.sqrt() + 1.0 / 2f64.sqrt())).abs() < 1e-15);
        assert!((minor - top).abs() < 1e-15);
    }

    #[test]
    fn toeplitz_eigenvalues_match_cosine_closed_form_and_small_n_direct_solve() {
        let size = 16;
        let evs = toeplitz_model_eigenvalues(1, size).unwrap();
        // closed form 2 sqrt(sub*sup) cos(j pi/(N+1)) with sub*sup = 1
        let mut expect: Vec<f64> = (1..=size)
            .map(|j| 2.0 * (j as f64 * PI / (size as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in evs.iter().zip(expect.iter()) {
            assert!((g - w).abs() < 1e-12);
        }
        // the direct nonsymmetric solve still agrees at this small size
        let raw = doubling_toeplitz_model(1, size).unwrap();
        let (vals, _) = linalg::eig(&raw).unwrap();
        let direct: Vec<Complex64> = vals.to_vec();
        let as_complex: Vec<Complex64> = evs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        assert!(linalg::multiset_distance(&direct, &as_complex) < 1e-8);
    }

    #[test]
    fn ladder_classifies_toeplitz_boundary_point_as_essential() {
        let builder = LadderBuilder::ToeplitzModel { n: 1 };
        let report = essential_spectrum_ladder(
            &builder,
            &[Complex64::new(0.0, 1.5), Complex64::new(10.0, 0.0)],
            &[16, 32, 64, 128],
        )
        .unwrap();
        let probes = report.resolvent_profile.unwrap();
        assert!(probes[0].in_essential_spectrum, "1.5i should grow");
        assert!(!probes[1].in_essential_spectrum, "lambda = 10 is far outside");
        // profile grows monotonically for the boundary point
        let s = &probes[0].samples;
        for w in s.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
    }

    #[test]
    fn ladder_classifies_doubling_shift_interior_point() {
        // The truncated doubling shift carries ratios gamma_{2k}/gamma_k that
        // approach 2 only in the limit, so the limiting-ellipse boundary is
        // not yet resolved at desk scale; an interior point already is.
        let builder = LadderBuilder::DoublingShift(DomainSpec::Interval01);
        let report = essential_spectrum_ladder(
            &builder,
            &[Complex64::new(0.0, 0.5), Complex64::new(10.0, 0.0)],
            &[32, 64, 128, 256, 512],
        )
        .unwrap();
        let probes = report.resolvent_profile.unwrap();
        assert!(probes[0].in_essential_spectrum, "0.5i grows");
        assert!(probes[0].growth_factor >= 4.0);
        assert!(!probes[1].in_essential_spectrum, "lambda = 10 bounded");
    }

    #[test]
    fn ladder_keeps_adjacent_shift_bounded_at_half_i() {
        let report = essential_spectrum_ladder(
            &LadderBuilder::AdjacentShift,
            &[Complex64::new(0.0, 0.5)],
            &[16, 32, 64, 128],
        )
        .unwrap();
        let probes = report.resolvent_profile.unwrap();
        assert!(!probes[0].in_essential_spectrum);
        assert!(probes[0].growth_factor < 1.5);
    }

    #[test]
    fn ladder_rejects_nonincreasing_sizes() {
        let r = essential_spectrum_ladder(
            &LadderBuilder::AdjacentShift,
            &[Complex64::new(0.0, 0.5)],
            &[32, 32],
        );
        assert!(r.is_err());
    }

    #[test]
    fn pseudospectrum_grid_emits_csv() {
        let m = doubling_toeplitz_model(1, 12).unwrap();
        let grid = pseudospectrum_grid(&m, (-3.0, 3.0), (-2.0, 2.0), 5).unwrap();
        assert_eq!(grid.sigma_min.len(), 25);
        let csv = grid.to_csv();
        assert!(csv.starts_with("re,im,sigma_min\n"));
        assert_eq!(csv.lines().count(), 26);
    }

    #[test]
    fn spectral_report_serializes_to_json() {
        let a = TwoNormOperator::solution_operator(&DomainSpec::Interval01, 3).unwrap();
        let report = spectrum(&a, OperatorSpace::L2).unwrap();
        let text = report.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["eigenvalues"].as_array().unwrap().len(), 3);
        assert_eq!(value["space"], "L2");
        assert!(value.get("grid").is_none());
    }
}
