//! Concrete elements of the isometry group, its Lie algebra, and the
//! symmetrizable class: rank-one phases, finite unitary blocks,
//! multiplication and composition operators, doubling/adjacent shifts, and
//! seeded random Lie-algebra draws for property tests.

use std::sync::Arc;

use ndarray::prelude::*;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bessel::{bessel_j, bessel_j_prime};
use crate::domains::{disk_spectrum, spectrum_for, DomainSpec, GammaSequence, ModeLabel};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::operator::{HVector, TwoNormOperator};
use crate::quadrature::QuadRule;

type FieldFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A complex-valued symbol theta on the 1-d interval (or the radial factor
/// of a separable disk symbol), together with its analytic derivative.
///
/// Unimodular symbols (|theta| = 1 pointwise) are the multipliers that land
/// in the isometry group; those must carry a derivative so the Sobolev-level
/// Galerkin assembly is exact up to quadrature.
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    value: FieldFn,
    derivative: Option<FieldFn>,
    unimodular: bool,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("unimodular", &self.unimodular)
            .finish()
    }
}

impl ScalarField {
    pub fn from_fn(
        name: impl Into<String>,
        value: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        derivative: Option<FieldFn>,
        unimodular: bool,
    ) -> Self {
        ScalarField {
            name: name.into(),
            value: Arc::new(value),
            derivative,
            unimodular,
        }
    }

    /// theta == 1.
    pub fn one() -> Self {
        ScalarField::from_fn(
            "one",
            |_| Complex64::new(1.0, 0.0),
            Some(Arc::new(|_| Complex64::new(0.0, 0.0))),
            true,
        )
    }

    /// theta(x) = e^{ikx}.
    pub fn plane_wave(k: f64) -> Self {
        ScalarField::from_fn(
            format!("plane_wave({k})"),
            move |x| Complex64::from_polar(1.0, k * x),
            Some(Arc::new(move |x| {
                Complex64::new(0.0, k) * Complex64::from_polar(1.0, k * x)
            })),
            true,
        )
    }

    /// theta_n(x) = e^{i sin(nx)/n}, the extension-map discontinuity family.
    pub fn theta_n(n: u32) -> Self {
        let nf = n as f64;
        ScalarField::from_fn(
            format!("theta_n({n})"),
            move |x| Complex64::from_polar(1.0, (nf * x).sin() / nf),
            Some(Arc::new(move |x| {
                Complex64::new(0.0, (nf * x).cos())
                    * Complex64::from_polar(1.0, (nf * x).sin() / nf)
            })),
            true,
        )
    }

    /// Piecewise-linear symbol from sampled (x, theta, theta') rows sorted by x.
    pub fn from_table(
        name: impl Into<String>,
        samples: Vec<(f64, Complex64, Complex64)>,
        unimodular: bool,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples {
                min: 2,
                got: samples.len(),
            });
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidParameter(
                "symbol table abscissae must strictly increase".into(),
            ));
        }
        let table = Arc::new(samples);
        let t_val = table.clone();
        let t_der = table.clone();
        let interp = |table: &[(f64, Complex64, Complex64)], x: f64, der: bool| {
            let idx = match table.binary_search_by(|row| row.0.partial_cmp(&x).unwrap()) {
                Ok(i) => i.min(table.len() - 2),
                Err(0) => 0,
                Err(i) if i >= table.len() => table.len() - 2,
                Err(i) => i - 1,
            };
            let (x0, v0, d0) = table[idx];
            let (x1, v1, d1) = table[idx + 1];
            let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
            if der {
                d0 + (d1 - d0) * t
            } else {
                v0 + (v1 - v0) * t
            }
        };
        Ok(ScalarField {
            name: name.into(),
            value: Arc::new(move |x| interp(&t_val, x, false)),
            derivative: Some(Arc::new(move |x| interp(&t_der, x, true))),
            unimodular,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.value)(x)
    }

    pub fn eval_derivative(&self, x: f64) -> Result<Complex64> {
        match &self.derivative {
            Some(d) => Ok(d(x)),
            None => Err(Error::MissingDerivative),
        }
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Complex conjugate symbol (the inverse multiplier when unimodular).
    pub fn conj(&self) -> Self {
        let v = self.value.clone();
        let d = self.derivative.clone();
        ScalarField {
            name: format!("conj({})", self.name),
            value: Arc::new(move |x| v(x).conj()),
            derivative: d.map(|d| -> FieldFn { Arc::new(move |x| d(x).conj()) }),
            unimodular: self.unimodular,
        }
    }

    /// Numerical phase lift: a real symbol alpha with e^{i alpha} = theta,
    /// built by unwrapping arg(theta) along x on [0,1]. The derivative is
    /// alpha' = Im(theta'/theta), which needs no unwrapping.
    pub fn phase_lift(&self, resolution: usize) -> Result<ScalarField> {
        if !self.unimodular {
            return Err(Error::InvalidParameter(
                "phase lift requires a unimodular symbol".into(),
            ));
        }
        let deriv = self
            .derivative
            .clone()
            .ok_or(Error::MissingDerivative)?;
        let res = resolution.max(16);
        let mut unwrapped = Vec::with_capacity(res + 1);
        let mut prev = self.eval(0.0).arg();
        let mut acc = prev;
        unwrapped.push(acc);
        for i in 1..=res {
            let x = i as f64 / res as f64;
            let raw = self.eval(x).arg();
            let mut delta = raw - prev;
            while delta > std::f64::consts::PI {
                delta -= 2.0 * std::f64::consts::PI;
            }
            while delta < -std::f64::consts::PI {
                delta += 2.0 * std::f64::consts::PI;
            }
            acc += delta;
            unwrapped.push(acc);
            prev = raw;
        }
        let table = Arc::new(unwrapped);
        let value_for_alpha = self.value.clone();
        let value_for_deriv = self.value.clone();
        Ok(ScalarField {
            name: format!("phase_lift({})", self.name),
            value: Arc::new(move |x| {
                // exact principal argument, branch offset from the unwrap table
                let raw = value_for_alpha(x).arg();
                let pos = (x.clamp(0.0, 1.0)) * res as f64;
                let i = (pos.floor() as usize).min(res - 1);
                let guide = table[i] + (table[i + 1] - table[i]) * (pos - i as f64);
                let two_pi = 2.0 * std::f64::consts::PI;
                Complex64::new(raw + two_pi * ((guide - raw) / two_pi).round(), 0.0)
            }),
            derivative: Some(Arc::new(move |x| {
                let th = value_for_deriv(x);
                Complex64::new((deriv(x) / th).im, 0.0)
            })),
            unimodular: false,
        })
    }
}

/// Default panel count for the Galerkin assembly: sine modes up to frequency
/// N pi need resolution beyond the polynomial exactness of a single rule.
pub fn default_quad_panels(n_modes: usize) -> usize {
    (4 * n_modes).max(64)
}

/// Galerkin matrix of the multiplication operator M_theta on the interval:
/// `M[j,k] = [theta s_k, s_j]` by composite Gauss-Legendre quadrature of
/// `[u,v] = int u conj(v) + int u' conj(v')`.
///
/// The compression is only approximately isometric; callers judge membership
/// by the reported defect, which shrinks as N grows for smooth theta.
pub fn multiplication_operator(
    theta: &ScalarField,
    domain: &DomainSpec,
    n_modes: usize,
    quad_panels: usize,
) -> Result<TwoNormOperator> {
    match domain {
        DomainSpec::Interval01 => {}
        DomainSpec::UnitDisk => {
            return Err(Error::InvalidParameter(
                "disk multipliers are separable; use multiplication_operator_disk".into(),
            ))
        }
        _ => {
            return Err(Error::InvalidParameter(
                "multiplication operators need a spatial domain (interval or disk)".into(),
            ))
        }
    }
    if n_modes == 0 {
        return Err(Error::EmptyDomain);
    }
    if quad_panels < 2 * n_modes {
        return Err(Error::InvalidParameter(format!(
            "quadrature too coarse: {} panels for N = {} (need >= 2N)",
            quad_panels, n_modes
        )));
    }
    // the Sobolev inner product always needs theta'
    if !theta.has_derivative() {
        return Err(Error::MissingDerivative);
    }

    let gamma = spectrum_for(domain, n_modes)?.gamma_sequence();
    let rule = QuadRule::composite(0.0, 1.0, quad_panels, 8);
    let m = rule.len();
    let n = n_modes;

    // Basis values phi[node, k] and derivatives dphi[node, k].
    let mut phi = Array2::<Complex64>::zeros((m, n));
    let mut dphi = Array2::<Complex64>::zeros((m, n));
    let sqrt2 = std::f64::consts::SQRT_2;
    for (row, &x) in rule.nodes.iter().enumerate() {
        for k in 0..n {
            let kpi = (k as f64 + 1.0) * std::f64::consts::PI;
            let g = gamma.gamma[k];
            phi[[row, k]] = Complex64::new(sqrt2 * (kpi * x).sin() / g, 0.0);
            dphi[[row, k]] = Complex64::new(sqrt2 * kpi * (kpi * x).cos() / g, 0.0);
        }
    }

    // Node data: w*theta and w*theta'.
    let mut wth = Array1::<Complex64>::zeros(m);
    let mut wdth = Array1::<Complex64>::zeros(m);
    for (row, (&x, &w)) in rule.nodes.iter().zip(rule.weights.iter()).enumerate() {
        let t = theta.eval(x);
        if theta.unimodular {
            let modulus = t.norm();
            if (modulus - 1.0).abs() > 1e-12 {
                return Err(Error::NotUnimodular { at: x, modulus });
            }
        }
        wth[row] = t * w;
        wdth[row] = theta.eval_derivative(x)? * w;
    }

    // M[j,k] = sum_x w [theta phi_k phi_j + theta' phi_k dphi_j + theta dphi_k dphi_j]
    //        = (phi^T diag(w theta) phi + dphi^T diag(w theta') phi
    //           + dphi^T diag(w theta) dphi)[j,k]    (basis functions are real)
    let th_phi = &phi * &wth.view().insert_axis(Axis(1));
    let dth_phi = &phi * &wdth.view().insert_axis(Axis(1));
    let th_dphi = &dphi * &wth.view().insert_axis(Axis(1));
    let mat = phi.t().dot(&th_phi) + dphi.t().dot(&dth_phi) + dphi.t().dot(&th_dphi);

    TwoNormOperator::new(mat, gamma)
}

/// Multiplication by the separable disk symbol theta(r, phi) = rho(r) e^{i l phi}.
///
/// The angular integral collapses to the selection rule m_row = m_col + l;
/// the remaining radial integrals run over products of Bessel modes.
pub fn multiplication_operator_disk(
    radial: &ScalarField,
    harmonic: i32,
    n_modes: usize,
    quad_panels: usize,
) -> Result<TwoNormOperator> {
    if n_modes == 0 {
        return Err(Error::EmptyDomain);
    }
    if radial.unimodular && !radial.has_derivative() {
        return Err(Error::MissingDerivative);
    }
    if !radial.has_derivative() {
        return Err(Error::MissingDerivative);
    }
    let spectrum = disk_spectrum(n_modes)?;
    let gamma = spectrum.gamma_sequence();
    let modes: Vec<(i32, f64)> = spectrum
        .labels
        .iter()
        .zip(spectrum.mu.iter())
        .map(|(label, &mu)| {
            let ModeLabel::Disk { m, .. } = label else {
                unreachable!("disk spectrum labels are (m, j) pairs")
            };
            (*m, mu.sqrt())
        })
        .collect();

    let rule = QuadRule::composite(0.0, 1.0, quad_panels.max(64), 8);
    // H1 normalization: s = e / (sqrt(pi) |J_{|m|+1}(z)| sqrt(1 + z^2)).
    let norms: Vec<f64> = modes
        .iter()
        .map(|&(m, z)| {
            let j1 = bessel_j(m.unsigned_abs() + 1, z).abs();
            1.0 / (std::f64::consts::PI.sqrt() * j1 * (1.0 + z * z).sqrt())
        })
        .collect();

    let n = n_modes;
    let mut mat = CMat::zeros((n, n));
    for col in 0..n {
        let (mk, zk) = modes[col];
        let m_target = mk + harmonic;
        for row in 0..n {
            let (mi, zi) = modes[row];
            if mi != m_target {
                continue;
            }
            let amk = mk.unsigned_abs();
            let ami = mi.unsigned_abs();
            let mut acc = Complex64::new(0.0, 0.0);
            for (&r, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
                let rho = radial.eval(r);
                if radial.unimodular {
                    let modulus = rho.norm();
                    if (modulus - 1.0).abs() > 1e-12 {
                        return Err(Error::NotUnimodular { at: r, modulus });
                    }
                }
                let drho = radial.eval_derivative(r)?;
                let jk = bessel_j(amk, zk * r);
                let ji = bessel_j(ami, zi * r);
                let djk = zk * bessel_j_prime(amk, zk * r);
                let dji = zi * bessel_j_prime(ami, zi * r);
                let angular = (m_target as f64) * (mi as f64);
                let value_part = rho * jk * ji * (1.0 + angular / (r * r));
                let grad_part = (drho * jk + rho * djk) * dji;
                acc += (value_part + grad_part) * (w * r);
            }
            mat[[row, col]] =
                acc * (2.0 * std::f64::consts::PI * norms[row] * norms[col]);
        }
    }
    TwoNormOperator::new(mat, gamma)
}

/// The rank-one idempotent E = f (x) Af with |f|_2 = 1 (normalized here when
/// within 1e-6 of unit L2 norm). Its L2 representation is the orthogonal
/// projection u u^H onto the L2 direction of f.
pub fn rank_one_projection(f: &HVector) -> Result<TwoNormOperator> {
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(Error::InvalidParameter(
            "rank_one_projection: f must be nonzero".into(),
        ));
    }
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { norm, tol: 1e-6 });
    }
    let f = f.scale(Complex64::new(1.0 / norm, 0.0));
    let af = f.apply_solution_operator();
    let n = f.len();
    let mut e = CMat::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            e[[i, j]] = f.coeffs()[i] * af.coeffs()[j].conj();
        }
    }
    TwoNormOperator::new(e, f.gamma().clone())
}

/// The rank-one group element G = e^{it} E + (I - E).
pub fn rank_one_exponential(f: &HVector, t: f64) -> Result<TwoNormOperator> {
    let e = rank_one_projection(f)?;
    let phase = Complex64::from_polar(1.0, t) - Complex64::new(1.0, 0.0);
    let g = TwoNormOperator::identity(e.gamma().clone()).add(&e.scale(phase))?;
    Ok(g)
}

/// Block unitary: G acts as `u0` on the span of an L2-orthonormal frame and
/// as the identity on its L2-orthogonal complement.
pub fn finite_block_unitary(frame: &[HVector], u0: &CMat) -> Result<TwoNormOperator> {
    if frame.is_empty() {
        return Err(Error::InvalidParameter("empty frame".into()));
    }
    let k = frame.len();
    if u0.nrows() != k || u0.ncols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: u0.nrows(),
        });
    }
    // frame must be L2-orthonormal to 1e-10
    let mut gram = CMat::zeros((k, k));
    for i in 0..k {
        for j in 0..k {
            gram[[i, j]] = frame[i].inner_l2(&frame[j])?;
        }
    }
    let defect = linalg::op_norm(&(&gram - &linalg::identity(k)))?;
    if defect > 1e-10 {
        return Err(Error::NonOrthonormalFrame { defect });
    }
    let u_defect = linalg::unitary_defect(u0)?;
    if u_defect > 1e-8 {
        return Err(Error::NonUnitaryBlock { defect: u_defect });
    }

    let gamma = frame[0].gamma().clone();
    let n = frame[0].len();
    let mut mat = linalg::identity(n);
    // G = sum_ij u0[i,j] f_i (x) Af_j + (I - sum_j f_j (x) Af_j)
    for j in 0..k {
        let afj = frame[j].apply_solution_operator();
        for row in 0..n {
            for colv in 0..n {
                let base = afj.coeffs()[colv].conj();
                let mut add = Complex64::new(0.0, 0.0);
                for i in 0..k {
                    add += u0[[i, j]] * frame[i].coeffs()[row];
                }
                add -= frame[j].coeffs()[row];
                mat[[row, colv]] += add * base;
            }
        }
    }
    TwoNormOperator::new(mat, gamma)
}

/// Composition with the reflection x -> 1 - x on the interval:
/// diag((-1)^{k+1}) in the s-basis.
pub fn composition_reflection(n_modes: usize) -> Result<TwoNormOperator> {
    let gamma = spectrum_for(&DomainSpec::Interval01, n_modes)?.gamma_sequence();
    let d: Vec<Complex64> = (1..=n_modes)
        .map(|k| Complex64::new(if k % 2 == 1 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    TwoNormOperator::new(linalg::from_diag(&d), gamma)
}

/// Composition with the rotation phi -> phi + alpha of the disk:
/// diag(e^{i m alpha}) over the (m, j) labels.
pub fn disk_rotation(alpha: f64, n_modes: usize) -> Result<TwoNormOperator> {
    let spectrum = disk_spectrum(n_modes)?;
    let gamma = spectrum.gamma_sequence();
    let d: Vec<Complex64> = spectrum
        .labels
        .iter()
        .map(|label| {
            let ModeLabel::Disk { m, .. } = label else {
                unreachable!()
            };
            Complex64::from_polar(1.0, *m as f64 * alpha)
        })
        .collect();
    TwoNormOperator::new(linalg::from_diag(&d), gamma)
}

/// The symmetrizable doubling-shift sum T = S + B with
/// `S s_k = (gamma_{2k}/gamma_k) s_{2k}` (rows beyond N dropped) and
/// `B s_k = (gamma_{k/2}/gamma_k) s_{k/2}` for even k. Its L2 representation
/// is the plain doubling shift plus its adjoint, Hermitian exactly.
pub fn doubling_shift_t(domain: &DomainSpec, n_modes: usize) -> Result<TwoNormOperator> {
    if n_modes < 4 {
        return Err(Error::InvalidParameter(
            "doubling shift needs N >= 4".into(),
        ));
    }
    let gamma = spectrum_for(domain, n_modes)?.gamma_sequence();
    let g = &gamma.gamma;
    let mut mat = CMat::zeros((n_modes, n_modes));
    for k in 1..=n_modes {
        if 2 * k <= n_modes {
            mat[[2 * k - 1, k - 1]] += Complex64::new(g[2 * k - 1] / g[k - 1], 0.0);
        }
        if k % 2 == 0 {
            mat[[k / 2 - 1, k - 1]] += Complex64::new(g[k / 2 - 1] / g[k - 1], 0.0);
        }
    }
    TwoNormOperator::new(mat, gamma)
}

/// The adjacent-shift sum T with `S s_k = (gamma_{k+1}/gamma_k) s_{k+1}`,
/// `B s_k = (gamma_{k-1}/gamma_k) s_{k-1}` and s_0 = 0, on the interval.
pub fn adjacent_shift_t(n_modes: usize) -> Result<TwoNormOperator> {
    if n_modes < 4 {
        return Err(Error::InvalidParameter(
            "adjacent shift needs N >= 4".into(),
        ));
    }
    let gamma = spectrum_for(&DomainSpec::Interval01, n_modes)?.gamma_sequence();
    let g = &gamma.gamma;
    let mut mat = CMat::zeros((n_modes, n_modes));
    for k in 1..=n_modes {
        if k < n_modes {
            mat[[k, k - 1]] += Complex64::new(g[k] / g[k - 1], 0.0);
        }
        if k >= 2 {
            mat[[k - 2, k - 1]] += Complex64::new(g[k - 2] / g[k - 1], 0.0);
        }
    }
    TwoNormOperator::new(mat, gamma)
}

/// The limiting Toeplitz compression of the doubling shift: 2^{1/n} under
/// the diagonal, 2^{-1/n} over it. Returned as a raw matrix; it is a model
/// operator, not a truncation attached to any gamma sequence.
pub fn doubling_toeplitz_model(n: u32, size: usize) -> Result<CMat> {
    if n < 1 {
        return Err(Error::InvalidParameter("toeplitz model: n >= 1".into()));
    }
    if size < 4 {
        return Err(Error::InvalidParameter("toeplitz model: N >= 4".into()));
    }
    let sub = 2f64.powf(1.0 / n as f64);
    let sup = 2f64.powf(-1.0 / n as f64);
    let mut mat = CMat::zeros((size, size));
    for i in 0..size - 1 {
        mat[[i + 1, i]] = Complex64::new(sub, 0.0);
        mat[[i, i + 1]] = Complex64::new(sup, 0.0);
    }
    Ok(mat)
}

/// Seeded random element of the Lie algebra: X with Xhat = iH, H Hermitian
/// Gaussian in the e-basis. With a norm index p, the singular values of Xhat
/// are reshaped to the summable profile k^{-2/p - 0.1} so draws live in the
/// p-Schatten subalgebra uniformly in N.
pub fn random_lie_element(
    gamma: &GammaSequence,
    p: Option<f64>,
    seed: u64,
) -> Result<TwoNormOperator> {
    let n = gamma.len();
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut z = CMat::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let re: f64 = normal.sample(&mut rng);
            let im: f64 = normal.sample(&mut rng);
            z[[i, j]] = Complex64::new(re, im) / (2.0 * n as f64).sqrt();
        }
    }
    let mut h = (&z + &linalg::adjoint(&z)).mapv(|v| v * 0.5);

    if let Some(p) = p {
        if p < 1.0 {
            return Err(Error::InvalidParameter("p must be >= 1".into()));
        }
        let (w, v) = linalg::eigh(&h)?;
        // order eigenvalues by |w| descending, assign the profile magnitudes
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| w[b].abs().partial_cmp(&w[a].abs()).unwrap());
        let mut new_w = vec![0.0; n];
        for (rank, &idx) in order.iter().enumerate() {
            let magnitude = ((rank + 1) as f64).powf(-2.0 / p - 0.1);
            new_w[idx] = magnitude * w[idx].signum();
        }
        let diag: Vec<Complex64> = new_w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        h = linalg::reassemble(&v, &diag);
    }

    let xhat = h.mapv(|v| v * Complex64::new(0.0, 1.0));
    TwoNormOperator::from_l2_representation(xhat, gamma.clone())
}

/// Rescale a Lie-algebra element to a target L2 operator norm.
pub fn rescaled_to_l2_norm(x: &TwoNormOperator, target: f64) -> Result<TwoNormOperator> {
    let norm = x.l2_norm()?;
    if norm == 0.0 {
        return Err(Error::InvalidParameter(
            "cannot rescale the zero operator".into(),
        ));
    }
    Ok(x.scale(Complex64::new(target / norm, 0.0)))
}
