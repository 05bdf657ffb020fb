//! Truncated operators on the two-norm pair H1_0 in L2.
//!
//! An operator is stored once, as its matrix in the Sobolev-orthonormal
//! eigenbasis s_k of the solution operator A; the L2-orthonormal basis is
//! e_k = gamma_k s_k, so the L2 representation is the diagonal similarity
//! `Mhat = D^-1 M D` with `D = diag(gamma_k)`. All structure predicates
//! reduce to matrix symmetries of `Mhat`:
//!
//! * isometry group membership  G*AG = A      <=>  Mhat unitary,
//! * Lie algebra membership     X*A + AX = 0  <=>  Mhat anti-Hermitian,
//! * symmetrizability           AX = X*A      <=>  Mhat Hermitian.
//!
//! The L2 representation is always derived, never stored; the gamma weights
//! are exact, so the conversion is lossless. Operators from different domains
//! or truncation sizes never interoperate (the gamma sequence is semantic,
//! not just a shape), and mixing them is a hard error.

use ndarray::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domains::{spectrum_for, DomainSpec, GammaSequence};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};

/// Which of the two operator norms/representations is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorSpace {
    H1,
    L2,
}

/// Default membership tolerance: roundoff accumulates roughly linearly in
/// the dimension across products and eigensolves.
pub fn default_tol(n: usize) -> f64 {
    1e-8 * n as f64
}

/// Result of a membership predicate: the defect norm and the verdict.
#[derive(Debug, Clone, Copy)]
pub struct Membership {
    pub defect: f64,
    pub within: bool,
    pub tol: f64,
}

/// A truncated operator carried in the s-basis with its gamma weights.
#[derive(Debug, Clone)]
pub struct TwoNormOperator {
    mat: CMat,
    gamma: GammaSequence,
}

impl TwoNormOperator {
    pub fn new(mat: CMat, gamma: GammaSequence) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        if mat.nrows() != gamma.len() {
            return Err(Error::DimensionMismatch {
                expected: gamma.len(),
                got: mat.nrows(),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "operator matrix has non-finite entries".into(),
            ));
        }
        Ok(TwoNormOperator { mat, gamma })
    }

    pub fn identity(gamma: GammaSequence) -> Self {
        let n = gamma.len();
        TwoNormOperator {
            mat: linalg::identity(n),
            gamma,
        }
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.gamma.domain
    }

    pub fn gamma(&self) -> &GammaSequence {
        &self.gamma
    }

    /// Matrix in the s-basis (the canonical storage basis).
    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// The solution operator A = diag(gamma_k^-2) in the s-basis.
    pub fn solution_operator(domain: &DomainSpec, n_modes: usize) -> Result<Self> {
        let gamma = spectrum_for(domain, n_modes)?.gamma_sequence();
        let d: Vec<Complex64> = gamma
            .gamma
            .iter()
            .map(|&g| Complex64::new(1.0 / (g * g), 0.0))
            .collect();
        Ok(TwoNormOperator {
            mat: linalg::from_diag(&d),
            gamma,
        })
    }

    /// The L2 representation `Mhat[j,k] = (gamma_k / gamma_j) M[j,k]`.
    pub fn l2_representation(&self) -> CMat {
        let g = &self.gamma.gamma;
        let mut out = self.mat.clone();
        for ((j, k), v) in out.indexed_iter_mut() {
            *v *= g[k] / g[j];
        }
        out
    }

    /// Rebuild the s-basis matrix from an L2-representation matrix.
    pub fn from_l2_representation(mhat: CMat, gamma: GammaSequence) -> Result<Self> {
        let g = gamma.gamma.clone();
        let mut mat = mhat;
        if mat.nrows() != g.len() || mat.ncols() != g.len() {
            return Err(Error::DimensionMismatch {
                expected: g.len(),
                got: mat.nrows(),
            });
        }
        for ((j, k), v) in mat.indexed_iter_mut() {
            *v *= g[j] / g[k];
        }
        TwoNormOperator::new(mat, gamma)
    }

    /// Operator norm on H1_0 (largest singular value in the s-basis).
    pub fn h1_norm(&self) -> Result<f64> {
        linalg::op_norm(&self.mat)
    }

    /// Operator norm on L2 (largest singular value of the L2 representation).
    pub fn l2_norm(&self) -> Result<f64> {
        linalg::op_norm(&self.l2_representation())
    }

    pub fn matrix_in(&self, space: OperatorSpace) -> CMat {
        match space {
            OperatorSpace::H1 => self.mat.clone(),
            OperatorSpace::L2 => self.l2_representation(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.gamma != other.gamma {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    /// Operator composition (same domain and truncation only).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        TwoNormOperator::new(self.mat.dot(&other.mat), self.gamma.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        TwoNormOperator::new(&self.mat + &other.mat, self.gamma.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        TwoNormOperator::new(&self.mat - &other.mat, self.gamma.clone())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TwoNormOperator {
            mat: self.mat.mapv(|z| z * c),
            gamma: self.gamma.clone(),
        }
    }

    /// Adjoint with respect to the H1 inner product (conjugate transpose in
    /// the s-basis).
    pub fn adjoint_h1(&self) -> Self {
        TwoNormOperator {
            mat: linalg::adjoint(&self.mat),
            gamma: self.gamma.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        TwoNormOperator::new(linalg::inverse(&self.mat)?, self.gamma.clone())
    }

    /// Apply to a coefficient vector in the s-basis.
    pub fn apply(&self, f: &HVector) -> Result<HVector> {
        if f.gamma != self.gamma {
            return Err(Error::DomainMismatch);
        }
        Ok(HVector {
            coeffs: self.mat.dot(&f.coeffs),
            gamma: self.gamma.clone(),
        })
    }

    /// Group membership: defect is `||Ghat* Ghat - I||`.
    pub fn in_group(&self, tol: f64) -> Result<Membership> {
        let defect = linalg::unitary_defect(&self.l2_representation())?;
        Ok(Membership {
            defect,
            within: defect <= tol,
            tol,
        })
    }

    /// Lie algebra membership: defect is `||Xhat + Xhat*||`.
    pub fn in_lie_algebra(&self, tol: f64) -> Result<Membership> {
        let defect = linalg::antihermitian_defect(&self.l2_representation())?;
        Ok(Membership {
            defect,
            within: defect <= tol,
            tol,
        })
    }

    /// Symmetrizability: defect is `||Xhat - Xhat*||`.
    pub fn is_symmetrizable(&self, tol: f64) -> Result<Membership> {
        let defect = linalg::hermitian_defect(&self.l2_representation())?;
        Ok(Membership {
            defect,
            within: defect <= tol,
            tol,
        })
    }

    /// The unique unitary extension to L2: refuses operators whose group
    /// defect exceeds `tol`, otherwise returns the L2 representation, which
    /// is unitary within that defect.
    pub fn extension_map(&self, tol: f64) -> Result<CMat> {
        let m = self.in_group(tol)?;
        if !m.within {
            return Err(Error::NotInGroup {
                defect: m.defect,
                tol,
            });
        }
        Ok(self.l2_representation())
    }

    /// The intertwiner U_G with U_G A^{1/2} = A^{1/2} G, expressed in the
    /// s-basis. Numerically this is the same matrix as the unitary extension:
    /// A^{1/2} = diag(1/gamma) in the s-basis, so A^{1/2} G A^{-1/2} = Ghat.
    pub fn intertwiner(&self, tol: f64) -> Result<CMat> {
        let u = self.extension_map(tol)?;
        // verify the intertwining identity in floating point
        let g = &self.gamma.gamma;
        let mut lhs = u.clone();
        for ((_, k), v) in lhs.indexed_iter_mut() {
            *v /= g[k];
        }
        let mut rhs = self.mat.clone();
        for ((j, _), v) in rhs.indexed_iter_mut() {
            *v /= g[j];
        }
        let defect = linalg::op_norm(&(&lhs - &rhs))?;
        let scale = linalg::op_norm(&rhs)?.max(1.0);
        if defect > 1e-10 * scale {
            return Err(Error::Eigensolver(format!(
                "intertwiner identity violated: defect {defect:.3e}"
            )));
        }
        Ok(u)
    }

    /// Serialize to the interchange JSON schema
    /// `{domain, N, gamma[], mat: row-major [re, im] pairs}`.
    pub fn to_json(&self) -> Result<String> {
        let wire = OperatorWire {
            domain: self.gamma.domain.clone(),
            n: self.dim(),
            gamma: self.gamma.gamma.clone(),
            mat: self.mat.iter().map(|z| [z.re, z.im]).collect(),
        };
        Ok(serde_json::to_string(&wire)?)
    }

    /// Deserialize from the interchange JSON schema. Mode labels are
    /// regenerated from the domain (the generators are deterministic); the
    /// gamma weights themselves are taken bit-exactly from the payload.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: OperatorWire = serde_json::from_str(text)?;
        if wire.mat.len() != wire.n * wire.n {
            return Err(Error::DimensionMismatch {
                expected: wire.n * wire.n,
                got: wire.mat.len(),
            });
        }
        if wire.gamma.len() != wire.n {
            return Err(Error::DimensionMismatch {
                expected: wire.n,
                got: wire.gamma.len(),
            });
        }
        let labels = spectrum_for(&wire.domain, wire.n)?.labels;
        let gamma = GammaSequence {
            domain: wire.domain,
            gamma: wire.gamma,
            labels,
        };
        let data: Vec<Complex64> = wire
            .mat
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let mat = Array2::from_shape_vec((wire.n, wire.n), data)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        TwoNormOperator::new(mat, gamma)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorWire {
    domain: DomainSpec,
    #[serde(rename = "N")]
    n: usize,
    gamma: Vec<f64>,
    mat: Vec<[f64; 2]>,
}

/// A coefficient vector in the s-basis.
#[derive(Debug, Clone)]
pub struct HVector {
    coeffs: CVec,
    gamma: GammaSequence,
}

impl HVector {
    pub fn new(coeffs: CVec, gamma: GammaSequence) -> Result<Self> {
        if coeffs.len() != gamma.len() {
            return Err(Error::DimensionMismatch {
                expected: gamma.len(),
                got: coeffs.len(),
            });
        }
        Ok(HVector { coeffs, gamma })
    }

    pub fn from_slice(coeffs: &[Complex64], gamma: GammaSequence) -> Result<Self> {
        Self::new(Array1::from_vec(coeffs.to_vec()), gamma)
    }

    /// The k-th s-basis vector (0-based index).
    pub fn basis(k: usize, gamma: GammaSequence) -> Result<Self> {
        if k >= gamma.len() {
            return Err(Error::DimensionMismatch {
                expected: gamma.len(),
                got: k,
            });
        }
        let mut c = CVec::zeros(gamma.len());
        c[k] = Complex64::new(1.0, 0.0);
        Ok(HVector { coeffs: c, gamma })
    }

    pub fn coeffs(&self) -> &CVec {
        &self.coeffs
    }

    pub fn gamma(&self) -> &GammaSequence {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coordinates in the L2-orthonormal basis e_k = gamma_k s_k.
    pub fn l2_coords(&self) -> CVec {
        let mut out = self.coeffs.clone();
        for (c, &g) in out.iter_mut().zip(self.gamma.gamma.iter()) {
            *c /= g;
        }
        out
    }

    /// [f, g] = sum_k f_k conj(g_k).
    pub fn inner_h1(&self, other: &Self) -> Result<Complex64> {
        if self.gamma != other.gamma {
            return Err(Error::DomainMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// <f, g> = sum_k gamma_k^-2 f_k conj(g_k).
    pub fn inner_l2(&self, other: &Self) -> Result<Complex64> {
        if self.gamma != other.gamma {
            return Err(Error::DomainMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .zip(self.gamma.gamma.iter())
            .map(|((a, b), &g)| a * b.conj() / (g * g))
            .sum())
    }

    pub fn h1_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.gamma.gamma.iter())
            .map(|(z, &g)| z.norm_sqr() / (g * g))
            .sum::<f64>()
            .sqrt()
    }

    /// Image under the solution operator: (Af)_k = gamma_k^-2 f_k.
    pub fn apply_solution_operator(&self) -> Self {
        let mut c = self.coeffs.clone();
        for (v, &g) in c.iter_mut().zip(self.gamma.gamma.iter()) {
            *v /= g * g;
        }
        HVector {
            coeffs: c,
            gamma: self.gamma.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        HVector {
            coeffs: self.coeffs.mapv(|z| z * c),
            gamma: self.gamma.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.gamma != other.gamma {
            return Err(Error::DomainMismatch);
        }
        Ok(HVector {
            coeffs: &self.coeffs + &other.coeffs,
            gamma: self.gamma.clone(),
        })
    }
}
