//! The triple-dot three-spin Hamiltonian: assembly from coupling tensors,
//! the transcribed 8×8 reference matrix, the closed-form eigensystem, and
//! audits that certify (or refute) the catalogued tensor/spectrum claims
//! against the matrix itself.
//!
//! Conventions, fixed once for the whole crate:
//! - the three sites map big-endian onto basis bits (site 1 is the most
//!   significant bit of the basis index),
//! - spin operators are the Pauli matrices (ħ/2 = 1), with unit overall
//!   scale — calibration against the reference matrix fixes the constant
//!   at exactly 1,
//! - axes are indexed x = 0, y = 1, z = 2.
//!
//! The crate distinguishes two closed-form layers everywhere:
//! **documented** values are the catalogued claims under audit; **certified**
//! values are the ones this module has verified against the reference matrix.
//! They differ in exactly two places, both reported by the audit operations:
//! the documented eigenvalue form at catalog index 4, and the documented
//! two-site coupling for the (1,3) pair (the reference matrix realizes its
//! transpose, plus an 11-component three-spin tensor that the documented
//! tensor set omits).

use crate::linalg::{
    max_abs_diff, Complex, OperatorMatrix, Spectrum, StateVector, CLUSTER_TOL,
};
use crate::{Error, Result};

/// Residual bound the verification suite demands of the builder/reference
/// agreement.
pub const BUILDER_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Pauli helpers
// ---------------------------------------------------------------------------

fn pauli(axis: usize) -> OperatorMatrix {
    let z = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    let entries = match axis {
        0 => vec![z, one, one, z],
        1 => vec![z, -i, i, z],
        2 => vec![one, z, z, -one],
        _ => panic!("axis must be 0, 1, or 2"),
    };
    OperatorMatrix::from_entries(2, entries).expect("static 2x2")
}

/// Kronecker product over the three sites with the given Pauli axis (or
/// identity) in each slot, big-endian.
fn product_operator(axes: [Option<usize>; 3]) -> OperatorMatrix {
    let slot = |ax: Option<usize>| match ax {
        Some(k) => pauli(k),
        None => OperatorMatrix::identity(2).expect("static"),
    };
    slot(axes[0])
        .kron(&slot(axes[1]))
        .expect("dim 4")
        .kron(&slot(axes[2]))
        .expect("dim 8")
}

// ---------------------------------------------------------------------------
// Coupling configuration
// ---------------------------------------------------------------------------

/// Free parameters (a, b, c) together with the derived field vectors b_i,
/// two-site exchange tensors μ₁₂, μ₁₃, μ₂₃, and the three-site tensor γ.
///
/// [`CouplingConfig::standard`] carries the exact tensor content of the
/// reference matrix, so [`build_hamiltonian`] reproduces [`explicit_matrix`]
/// to rounding error. [`CouplingConfig::pairwise_only`] carries the
/// catalogued two-site-only tensor set instead; [`coupling_audit`] uses it to
/// quantify how far that catalogued set is from the reference matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingConfig {
    a: f64,
    b: f64,
    c: f64,
    /// Field vector per site, `b_vecs[site][axis]`.
    b_vecs: [[f64; 3]; 3],
    /// Two-site tensors in pair order (1,2), (1,3), (2,3):
    /// `mu[pair][k][l]` couples S_i^k S_j^l.
    mu: [[[f64; 3]; 3]; 3],
    /// Three-site tensor, `gamma[i][j][k]` couples S₁^i S₂^j S₃^k.
    gamma: [[[f64; 3]; 3]; 3],
    /// True only for configurations produced by the standard constructor.
    standard: bool,
}

fn check_finite_params(a: f64, b: f64, c: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && c.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// The catalogued field vectors: b₁ = (−a, 0, b), b₂ = (c, 0, 0),
/// b₃ = (a, 0, b).
fn catalog_b_vecs(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    [[-a, 0.0, b], [c, 0.0, 0.0], [a, 0.0, b]]
}

/// The catalogued two-site tensors for pairs (1,2), (1,3), (2,3).
fn catalog_mu(a: f64, c: f64) -> [[[f64; 3]; 3]; 3] {
    [
        [[a, 0.0, a], [0.0, a, 0.0], [-a, 0.0, c]],
        [[0.0, 0.0, a], [0.0, 0.0, 0.0], [-a, 0.0, 0.0]],
        [[a, 0.0, -a], [0.0, a, 0.0], [-a, 0.0, -c]],
    ]
}

/// The three-site tensor the reference matrix actually contains
/// (11 nonzero components).
fn certified_gamma(a: f64, b: f64, c: f64) -> [[[f64; 3]; 3]; 3] {
    let mut g = [[[0.0; 3]; 3]; 3];
    g[0][0][0] = a; //  xxx
    g[0][0][2] = -a; // xxz
    g[0][1][1] = -b; // xyy
    g[0][2][2] = -a; // xzz
    g[1][0][1] = a; //  yxy
    g[1][1][0] = b; //  yyx
    g[1][1][2] = a; //  yyz
    g[2][0][0] = -a; // zxx
    g[2][0][2] = c; //  zxz
    g[2][1][1] = a; //  zyy
    g[2][2][0] = a; //  zzx
    g
}

impl CouplingConfig {
    /// The standard configuration: the exact tensor decomposition of the
    /// reference matrix at (a, b, c).
    ///
    /// Relative to the catalogued tensor set this uses the transposed (1,3)
    /// two-site tensor and a nonzero three-site tensor — both required:
    /// the catalogued set cannot reproduce the reference matrix under any
    /// site ordering or overall scale (see [`coupling_audit`]).
    pub fn standard(a: f64, b: f64, c: f64) -> Result<Self> {
        check_finite_params(a, b, c)?;
        let mut mu = catalog_mu(a, c);
        // The reference matrix realizes the transpose of the catalogued
        // (1,3) tensor (equivalently its negative; the tensor is
        // antisymmetric).
        mu[1] = [[0.0, 0.0, -a], [0.0, 0.0, 0.0], [a, 0.0, 0.0]];
        Ok(Self {
            a,
            b,
            c,
            b_vecs: catalog_b_vecs(a, b, c),
            mu,
            gamma: certified_gamma(a, b, c),
            standard: true,
        })
    }

    /// The catalogued two-site-only configuration: field vectors and μ
    /// tensors exactly as catalogued, three-site tensor zero.
    ///
    /// This configuration does **not** reproduce the reference matrix; it
    /// exists so the audit can measure by how much.
    pub fn pairwise_only(a: f64, b: f64, c: f64) -> Result<Self> {
        check_finite_params(a, b, c)?;
        Ok(Self {
            a,
            b,
            c,
            b_vecs: catalog_b_vecs(a, b, c),
            mu: catalog_mu(a, c),
            gamma: [[[0.0; 3]; 3]; 3],
            standard: false,
        })
    }

    /// A fully custom configuration. All tensor entries must be finite.
    pub fn custom(
        a: f64,
        b: f64,
        c: f64,
        b_vecs: [[f64; 3]; 3],
        mu: [[[f64; 3]; 3]; 3],
        gamma: [[[f64; 3]; 3]; 3],
    ) -> Result<Self> {
        check_finite_params(a, b, c)?;
        let all_finite = b_vecs.iter().flatten().all(|x| x.is_finite())
            && mu.iter().flatten().flatten().all(|x| x.is_finite())
            && gamma.iter().flatten().flatten().all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            a,
            b,
            c,
            b_vecs,
            mu,
            gamma,
            standard: false,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn b_vecs(&self) -> &[[f64; 3]; 3] {
        &self.b_vecs
    }
    pub fn mu(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.mu
    }
    pub fn gamma(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.gamma
    }
    /// Whether this configuration came from the standard constructor.
    pub fn is_standard(&self) -> bool {
        self.standard
    }
}

// ---------------------------------------------------------------------------
// Hamiltonian assembly and the reference matrix
// ---------------------------------------------------------------------------

/// Assembles H = Σᵢ bᵢ·Sᵢ + Σ_{i<j} Σ_{kl} (μᵢⱼ)ₖₗ Sᵢᵏ Sⱼˡ
/// + Σ_{ijk} γᵢⱼₖ S₁ⁱ S₂ʲ S₃ᵏ from the configuration's tensors.
///
/// The result is certified Hermitian; real tensors always produce a
/// Hermitian operator, so a certification failure indicates corrupted input.
pub fn build_hamiltonian(cfg: &CouplingConfig) -> Result<OperatorMatrix> {
    let mut h = OperatorMatrix::zeros(8)?;
    for site in 0..3 {
        for axis in 0..3 {
            let coeff = cfg.b_vecs[site][axis];
            if coeff != 0.0 {
                let mut axes = [None; 3];
                axes[site] = Some(axis);
                h = h.add(&product_operator(axes).scale(coeff))?;
            }
        }
    }
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    for (pair_index, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..3 {
            for l in 0..3 {
                let coeff = cfg.mu[pair_index][k][l];
                if coeff != 0.0 {
                    let mut axes = [None; 3];
                    axes[i] = Some(k);
                    axes[j] = Some(l);
                    h = h.add(&product_operator(axes).scale(coeff))?;
                }
            }
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let coeff = cfg.gamma[i][j][k];
                if coeff != 0.0 {
                    h = h.add(&product_operator([Some(i), Some(j), Some(k)]).scale(coeff))?;
                }
            }
        }
    }
    h.certify_hermitian()
}

/// The 8×8 reference matrix, transcribed entry by entry (including its
/// overall factor 2). Real symmetric, hence certified Hermitian.
pub fn explicit_matrix(a: f64, b: f64, c: f64) -> Result<OperatorMatrix> {
    check_finite_params(a, b, c)?;
    #[rustfmt::skip]
    let rows: [[f64; 8]; 8] = [
        [b,     a,     c - a, -a,    -a,    0.0,   -a,    0.0],
        [a,     c,     a,     0.0,   0.0,   a,     a - b, a],
        [c - a, a,     b,     a,     a,     0.0,   -a,    0.0],
        [-a,    0.0,   a,     -c,    a + b, a,     0.0,   -a],
        [-a,    0.0,   a,     a + b, -c,    -a,    0.0,   a],
        [0.0,   a,     0.0,   a,     -a,    -b,    a,     c + a],
        [-a,    a - b, -a,    0.0,   0.0,   a,     c,     a],
        [0.0,   a,     0.0,   -a,    a,     a + c, a,     -b],
    ];
    let mut entries = Vec::with_capacity(64);
    for row in rows {
        for x in row {
            entries.push(2.0 * x);
        }
    }
    OperatorMatrix::from_real(8, &entries)?.certify_hermitian()
}

/// The reference matrix with entries (i, j) and (j, i) both shifted by
/// `delta` — a symmetric perturbation, so the result stays Hermitian.
///
/// This is the verification-path self-test hook: a perturbed reference
/// matrix must flip the builder-agreement check from pass to fail.
pub fn explicit_matrix_perturbed(
    a: f64,
    b: f64,
    c: f64,
    row: usize,
    col: usize,
    delta: f64,
) -> Result<OperatorMatrix> {
    if row >= 8 || col >= 8 {
        return Err(Error::InvalidParameter {
            name: "inject-matrix-error",
            message: format!("entry ({row},{col}) outside an 8x8 matrix"),
        });
    }
    if !delta.is_finite() {
        return Err(Error::NonFinite);
    }
    let base = explicit_matrix(a, b, c)?;
    let mut entries: Vec<Complex> = base.entries().to_vec();
    entries[row * 8 + col] += delta;
    if row != col {
        entries[col * 8 + row] += delta;
    }
    OperatorMatrix::from_entries(8, entries)?.certify_hermitian()
}

/// max|build_hamiltonian(cfg) − explicit_matrix(a, b, c)| at the
/// configuration's own parameters.
///
/// For standard configurations the verification suite requires this to stay
/// within [`BUILDER_TOL`].
pub fn verify_builder(cfg: &CouplingConfig) -> Result<f64> {
    let built = build_hamiltonian(cfg)?;
    let reference = explicit_matrix(cfg.a, cfg.b, cfg.c)?;
    max_abs_diff(&built, &reference)
}

// ---------------------------------------------------------------------------
// Closed-form eigensystem
// ---------------------------------------------------------------------------

/// Integer-coefficient linear form α·a + β·b + γ·c.
///
/// Eigenvalues and their pairwise differences are exact forms of this kind,
/// so form-level comparisons are exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearForm {
    pub ca: i64,
    pub cb: i64,
    pub cc: i64,
}

impl LinearForm {
    pub const fn new(ca: i64, cb: i64, cc: i64) -> Self {
        Self { ca, cb, cc }
    }

    pub fn eval(&self, a: f64, b: f64, c: f64) -> f64 {
        // + 0.0 keeps all-zero evaluations from surfacing as -0.0 in reports.
        self.ca as f64 * a + self.cb as f64 * b + self.cc as f64 * c + 0.0
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.ca - other.ca, self.cb - other.cb, self.cc - other.cc)
    }

    /// Divides by the gcd of the coefficients and flips signs so the first
    /// nonzero coefficient is positive; the zero form stays zero.
    pub fn normalized(&self) -> Self {
        fn gcd(x: i64, y: i64) -> i64 {
            let (mut x, mut y) = (x.abs(), y.abs());
            while y != 0 {
                (x, y) = (y, x % y);
            }
            x
        }
        let g = gcd(gcd(self.ca, self.cb), self.cc);
        if g == 0 {
            return *self;
        }
        let mut f = Self::new(self.ca / g, self.cb / g, self.cc / g);
        let lead = [f.ca, f.cb, f.cc]
            .into_iter()
            .find(|&x| x != 0)
            .unwrap_or(0);
        if lead < 0 {
            f = Self::new(-f.ca, -f.cb, -f.cc);
        }
        f
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        for (coeff, var) in [(self.ca, "a"), (self.cb, "b"), (self.cc, "c")] {
            if coeff == 0 {
                continue;
            }
            if out.is_empty() {
                if coeff < 0 {
                    out.push('-');
                }
            } else {
                out.push(if coeff < 0 { '-' } else { '+' });
            }
            let mag = coeff.abs();
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push_str(var);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Certified eigenvalue forms in catalog order 1..8 — each verified to
/// satisfy H·e = E·e against the reference matrix.
pub const CERTIFIED_FORMS: [LinearForm; 8] = [
    LinearForm::new(-2, 2, -2),
    LinearForm::new(6, 2, -2),
    LinearForm::new(2, -2, -2),
    LinearForm::new(-6, -2, -2),
    LinearForm::new(2, 2, 2),
    LinearForm::new(-6, 2, 2),
    LinearForm::new(-2, -2, 2),
    LinearForm::new(6, -2, 2),
];

/// Documented (catalogued) eigenvalue forms in catalog order 1..8 — the
/// claim under audit. Identical to [`CERTIFIED_FORMS`] except at catalog
/// index 4, where the documented form fails against the matrix
/// (see [`spectrum_audit`]).
pub const DOCUMENTED_FORMS: [LinearForm; 8] = [
    LinearForm::new(-2, 2, -2),
    LinearForm::new(6, 2, -2),
    LinearForm::new(2, -2, -2),
    LinearForm::new(-6, -2, 2),
    LinearForm::new(2, 2, 2),
    LinearForm::new(-6, 2, 2),
    LinearForm::new(-2, -2, 2),
    LinearForm::new(6, -2, 2),
];

/// Eigenvector amplitude patterns in catalog order: (basis index, sign),
/// each amplitude ±1/2.
const KET_PATTERNS: [[(usize, i8); 4]; 8] = [
    [(2, 1), (0, -1), (3, -1), (4, -1)],
    [(0, 1), (2, -1), (3, -1), (4, -1)],
    [(3, 1), (4, -1), (5, 1), (7, -1)],
    [(4, 1), (3, -1), (5, 1), (7, -1)],
    [(0, 1), (1, 1), (2, 1), (6, -1)],
    [(0, 1), (1, -1), (2, 1), (6, 1)],
    [(5, 1), (1, -1), (6, -1), (7, 1)],
    [(1, 1), (5, 1), (6, 1), (7, 1)],
];

/// The eight closed-form eigenvectors in catalog order. The amplitudes are
/// constants (±1/2), independent of (a, b, c); the set is exactly
/// orthonormal and complete.
pub fn eigensystem_kets() -> Vec<StateVector> {
    KET_PATTERNS
        .iter()
        .map(|pattern| {
            let mut amps = [0.0f64; 8];
            for &(index, sign) in pattern {
                amps[index] = 0.5 * sign as f64;
            }
            StateVector::from_real(&amps).expect("static ket")
        })
        .collect()
}

/// One catalog entry of the closed-form eigensystem.
#[derive(Debug, Clone)]
pub struct ClosedFormPair {
    /// Catalog index, 1-based.
    pub index: usize,
    /// The form certified against the reference matrix.
    pub certified: LinearForm,
    /// The catalogued form under audit.
    pub documented: LinearForm,
    pub ket: StateVector,
}

/// The full closed-form catalog in catalog order.
pub fn closed_form_eigensystem() -> Vec<ClosedFormPair> {
    eigensystem_kets()
        .into_iter()
        .enumerate()
        .map(|(k, ket)| ClosedFormPair {
            index: k + 1,
            certified: CERTIFIED_FORMS[k],
            documented: DOCUMENTED_FORMS[k],
            ket,
        })
        .collect()
}

/// The certified closed-form spectrum at (a, b, c): eight (eigenvalue, ket)
/// pairs sorted ascending, with degeneracy clusters at the relative
/// threshold [`CLUSTER_TOL`]·max|E|.
pub fn analytic_spectrum(a: f64, b: f64, c: f64) -> Result<Spectrum> {
    check_finite_params(a, b, c)?;
    let kets = eigensystem_kets();
    let pairs: Vec<(f64, StateVector)> = CERTIFIED_FORMS
        .iter()
        .zip(kets)
        .map(|(form, ket)| (form.eval(a, b, c), ket))
        .collect();
    let scale = pairs.iter().map(|(e, _)| e.abs()).fold(0.0, f64::max);
    Ok(Spectrum::from_pairs(pairs, CLUSTER_TOL * scale))
}

// ---------------------------------------------------------------------------
// Spectrum audit
// ---------------------------------------------------------------------------

/// Audit of one catalog index: does the documented closed form reproduce the
/// reference matrix's action on the catalogued ket?
#[derive(Debug, Clone)]
pub struct SpectrumAuditEntry {
    /// Catalog index, 1-based.
    pub index: usize,
    pub documented: LinearForm,
    pub certified: LinearForm,
    /// Exact integer comparison of the two forms.
    pub forms_match: bool,
    pub documented_value: f64,
    pub certified_value: f64,
    /// max component of |H·e − E_documented·e| at this (a, b, c).
    pub residual_documented: f64,
    /// max component of |H·e − E_certified·e| at this (a, b, c).
    pub residual_certified: f64,
}

/// Compares the documented and certified closed-form eigenvalues against the
/// reference matrix, index by index.
pub fn spectrum_audit(a: f64, b: f64, c: f64) -> Result<Vec<SpectrumAuditEntry>> {
    let h = explicit_matrix(a, b, c)?;
    let residual = |value: f64, ket: &StateVector| -> Result<f64> {
        let hv = h.apply(ket)?;
        Ok(hv
            .iter()
            .zip(ket.amplitudes())
            .map(|(x, y)| (x - y * value).norm())
            .fold(0.0, f64::max))
    };
    closed_form_eigensystem()
        .into_iter()
        .map(|pair| {
            let documented_value = pair.documented.eval(a, b, c);
            let certified_value = pair.certified.eval(a, b, c);
            Ok(SpectrumAuditEntry {
                index: pair.index,
                documented: pair.documented,
                certified: pair.certified,
                forms_match: pair.documented == pair.certified,
                documented_value,
                certified_value,
                residual_documented: residual(documented_value, &pair.ket)?,
                residual_certified: residual(certified_value, &pair.ket)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Coupling audit (Pauli decomposition of the reference matrix)
// ---------------------------------------------------------------------------

/// Effective coupling tensors extracted from the reference matrix by exact
/// Pauli-basis projection, compared against the catalogued tensor set.
#[derive(Debug, Clone)]
pub struct CouplingAudit {
    /// max|build(standard) − reference|; rounding-level by construction.
    pub standard_residual: f64,
    /// max|build(pairwise_only) − reference|; large — the catalogued
    /// two-site-only tensor set cannot produce the reference matrix.
    pub pairwise_only_residual: f64,
    /// Whether the extracted field vectors equal the catalogued ones.
    pub b_vecs_match_catalog: bool,
    /// Whether the extracted (1,2) tensor equals the catalogued one.
    pub mu12_matches_catalog: bool,
    /// Whether the extracted (1,3) tensor equals the catalogued one
    /// (false: the matrix realizes the transpose).
    pub mu13_matches_catalog: bool,
    /// Whether the extracted (1,3) tensor equals the catalogued transpose.
    pub mu13_matches_catalog_transpose: bool,
    /// Whether the extracted (2,3) tensor equals the catalogued one.
    pub mu23_matches_catalog: bool,
    /// Nonzero three-site components the reference matrix contains, as
    /// ((axis₁, axis₂, axis₃), coefficient). Nonempty: a two-site-only
    /// tensor set cannot reproduce the matrix.
    pub three_site_components: Vec<((usize, usize, usize), f64)>,
    /// The full extracted field vectors.
    pub effective_b_vecs: [[f64; 3]; 3],
    /// The full extracted two-site tensors in pair order (1,2), (1,3), (2,3).
    pub effective_mu: [[[f64; 3]; 3]; 3],
}

/// Coefficient of the Pauli product with the given axes (identity where
/// `None`) in the matrix's Pauli-basis expansion: Tr(P·H)/8.
fn pauli_coefficient(h: &OperatorMatrix, axes: [Option<usize>; 3]) -> Result<f64> {
    let p = product_operator(axes);
    Ok(p.matmul(h)?.trace().re / 8.0)
}

fn tensors_equal(x: &[[f64; 3]; 3], y: &[[f64; 3]; 3], tol: f64) -> bool {
    x.iter()
        .flatten()
        .zip(y.iter().flatten())
        .all(|(p, q)| (p - q).abs() <= tol)
}

/// Projects the reference matrix at (a, b, c) onto the Pauli product basis
/// and reports how the extracted tensors relate to the catalogued set —
/// a third, independent route alongside the builder and the transcription.
pub fn coupling_audit(a: f64, b: f64, c: f64) -> Result<CouplingAudit> {
    let h = explicit_matrix(a, b, c)?;
    let scale = [a.abs(), b.abs(), c.abs(), 1.0]
        .into_iter()
        .fold(0.0, f64::max);
    let tol = 1e-12 * scale;

    let mut effective_b = [[0.0; 3]; 3];
    for site in 0..3 {
        for axis in 0..3 {
            let mut axes = [None; 3];
            axes[site] = Some(axis);
            effective_b[site][axis] = pauli_coefficient(&h, axes)?;
        }
    }

    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut effective_mu = [[[0.0; 3]; 3]; 3];
    for (pair_index, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..3 {
            for l in 0..3 {
                let mut axes = [None; 3];
                axes[i] = Some(k);
                axes[j] = Some(l);
                effective_mu[pair_index][k][l] = pauli_coefficient(&h, axes)?;
            }
        }
    }

    let mut three_site = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let coeff = pauli_coefficient(&h, [Some(i), Some(j), Some(k)])?;
                if coeff.abs() > tol {
                    three_site.push(((i, j, k), coeff));
                }
            }
        }
    }

    let catalog_b = catalog_b_vecs(a, b, c);
    let catalog = catalog_mu(a, c);
    let mu13_transpose = {
        let m = catalog[1];
        let mut t = [[0.0; 3]; 3];
        for (k, row) in m.iter().enumerate() {
            for (l, &x) in row.iter().enumerate() {
                t[l][k] = x;
            }
        }
        t
    };

    Ok(CouplingAudit {
        standard_residual: verify_builder(&CouplingConfig::standard(a, b, c)?)?,
        pairwise_only_residual: {
            let built = build_hamiltonian(&CouplingConfig::pairwise_only(a, b, c)?)?;
            max_abs_diff(&built, &h)?
        },
        b_vecs_match_catalog: tensors_equal(&effective_b, &catalog_b, tol),
        mu12_matches_catalog: tensors_equal(&effective_mu[0], &catalog[0], tol),
        mu13_matches_catalog: tensors_equal(&effective_mu[1], &catalog[1], tol),
        mu13_matches_catalog_transpose: tensors_equal(&effective_mu[1], &mu13_transpose, tol),
        mu23_matches_catalog: tensors_equal(&effective_mu[2], &catalog[2], tol),
        three_site_components: three_site,
        effective_b_vecs: effective_b,
        effective_mu,
    })
}

// ---------------------------------------------------------------------------
// Degeneracy report
// ---------------------------------------------------------------------------

/// One eigenvalue collision: catalog indices (1-based) and the normalized
/// linear form in (a, b, c) whose vanishing causes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub i: usize,
    pub j: usize,
    pub form: LinearForm,
}

/// All eigenvalue collisions at a parameter point, for both closed-form
/// tables.
///
/// `collisions` audits the certified eigenvalues (the matrix's actual
/// spectrum); `documented_collisions` audits the catalogued closed-form
/// table. The two lists differ wherever the documented form at catalog
/// index 4 participates.
#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub collisions: Vec<Collision>,
    pub documented_collisions: Vec<Collision>,
    /// The absolute collision threshold used: [`CLUSTER_TOL`]·max|E| over
    /// the certified values.
    pub threshold: f64,
}

fn collisions_of(forms: &[LinearForm; 8], a: f64, b: f64, c: f64) -> Vec<Collision> {
    let values: Vec<f64> = forms.iter().map(|f| f.eval(a, b, c)).collect();
    let scale = values.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let threshold = CLUSTER_TOL * scale;
    let mut out = Vec::new();
    for i in 0..8 {
        for j in (i + 1)..8 {
            if (values[i] - values[j]).abs() <= threshold {
                out.push(Collision {
                    i: i + 1,
                    j: j + 1,
                    form: forms[i].sub(&forms[j]).normalized(),
                });
            }
        }
    }
    out
}

/// Lists every eigenvalue collision among the 28 pairs at (a, b, c),
/// together with the vanishing linear form responsible.
pub fn degeneracy_report(a: f64, b: f64, c: f64) -> Result<DegeneracyReport> {
    check_finite_params(a, b, c)?;
    let certified = collisions_of(&CERTIFIED_FORMS, a, b, c);
    let documented = collisions_of(&DOCUMENTED_FORMS, a, b, c);
    let scale = CERTIFIED_FORMS
        .iter()
        .map(|f| f.eval(a, b, c).abs())
        .fold(0.0, f64::max);
    Ok(DegeneracyReport {
        collisions: certified,
        documented_collisions: documented,
        threshold: CLUSTER_TOL * scale,
    })
}
