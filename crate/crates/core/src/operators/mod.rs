//! Dense complex operators over composite truncated Hilbert spaces.
//!
//! Subsystems are ordered explicitly in a [`SpaceSignature`]; the first
//! subsystem is the most significant factor of the Kronecker product.
//! Bosonic modes are truncated at `n_max` quanta (dimension `n_max + 1`);
//! two-level systems use the basis (|g⟩, |e⟩).

mod builders;
mod dressed;
mod spectral;

use std::fmt;
use std::io::Write;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builders::{build_h_eff, build_h_jc, build_h_tripartite, build_h_vc, effective_coupling, ModeOperators, Rwa};
pub use dressed::{dressed_transform, nv_detunings, nv_dressing_hamiltonian, rabi_frequency, DressedSpinParams};
pub use spectral::{eigenvalues, eigh, excitation_block};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsystemKind {
    Boson,
    TwoLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub name: String,
    pub kind: SubsystemKind,
    pub dim: usize,
}

impl Subsystem {
    /// Bosonic mode truncated at `n_max` quanta.
    pub fn boson(name: impl Into<String>, n_max: usize) -> Self {
        Self {
            name: name.into(),
            kind: SubsystemKind::Boson,
            dim: n_max + 1,
        }
    }

    pub fn two_level(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: SubsystemKind::TwoLevel,
            dim: 2,
        }
    }
}

/// Ordered list of subsystems making up a composite space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSignature {
    subsystems: Vec<Subsystem>,
}

pub const CANTILEVER: &str = "cantilever";
pub const VORTEX: &str = "vortex";
pub const SPIN: &str = "spin";

impl SpaceSignature {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        if subsystems.is_empty() {
            return Err(Error::DimensionMismatch("signature must be nonempty".into()));
        }
        for s in &subsystems {
            let ok = match s.kind {
                SubsystemKind::Boson => s.dim >= 2,
                SubsystemKind::TwoLevel => s.dim == 2,
            };
            if !ok {
                return Err(Error::DimensionMismatch(format!(
                    "subsystem `{}` has invalid dimension {}",
                    s.name, s.dim
                )));
            }
        }
        Ok(Self { subsystems })
    }

    pub fn single(subsystem: Subsystem) -> Self {
        Self::new(vec![subsystem]).expect("single valid subsystem")
    }

    /// (cantilever, vortex) with a common cutoff.
    pub fn cantilever_vortex(n_max: usize) -> Self {
        Self::single(Subsystem::boson(CANTILEVER, n_max)).with(Subsystem::boson(VORTEX, n_max))
    }

    /// (cantilever, vortex, spin).
    pub fn tripartite(n_max: usize) -> Self {
        Self::cantilever_vortex(n_max).with(Subsystem::two_level(SPIN))
    }

    /// (vortex, spin): the space of the effective and Jaynes–Cummings models.
    pub fn vortex_spin(n_max: usize) -> Self {
        Self::single(Subsystem::boson(VORTEX, n_max)).with(Subsystem::two_level(SPIN))
    }

    fn with(mut self, s: Subsystem) -> Self {
        self.subsystems.push(s);
        self
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn slot(&self, name: &str) -> Option<usize> {
        self.subsystems.iter().position(|s| s.name == name)
    }

    /// Per-subsystem levels of a composite basis index.
    pub fn levels(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (slot, s) in self.subsystems.iter().enumerate().rev() {
            out[slot] = index % s.dim;
            index /= s.dim;
        }
        out
    }

    /// Composite basis index of per-subsystem levels.
    pub fn index(&self, levels: &[usize]) -> usize {
        assert_eq!(levels.len(), self.subsystems.len(), "level count");
        self.subsystems.iter().zip(levels).fold(0, |acc, (s, &l)| {
            assert!(l < s.dim, "level {l} out of range for `{}`", s.name);
            acc * s.dim + l
        })
    }

    /// Total number of excitations (boson quanta plus excited two-level
    /// systems) of a basis state.
    pub fn excitations(&self, index: usize) -> usize {
        self.levels(index).iter().sum()
    }

    /// Smallest bosonic cutoff in the signature, if any.
    pub fn min_cutoff(&self) -> Option<usize> {
        self.subsystems
            .iter()
            .filter(|s| s.kind == SubsystemKind::Boson)
            .map(|s| s.dim - 1)
            .min()
    }
}

impl fmt::Display for SpaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .subsystems
            .iter()
            .map(|s| format!("{}[{}]", s.name, s.dim))
            .collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}

/// Operator on a composite space. Matrices are expressed in angular-frequency
/// units when they represent Hamiltonians (`H/ħ`).
#[derive(Debug, Clone, PartialEq)]
pub struct QOperator {
    signature: SpaceSignature,
    matrix: CMatrix,
}

impl QOperator {
    pub fn new(signature: SpaceSignature, matrix: CMatrix) -> Result<Self> {
        let d = signature.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, signature {signature} needs {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { signature, matrix })
    }

    pub fn identity(signature: &SpaceSignature) -> Self {
        let d = signature.dim();
        Self {
            signature: signature.clone(),
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn zeros(signature: &SpaceSignature) -> Self {
        let d = signature.dim();
        Self {
            signature: signature.clone(),
            matrix: CMatrix::zeros(d, d),
        }
    }

    /// Diagonal operator with entries `f(basis index)`.
    pub fn diagonal(signature: &SpaceSignature, f: impl Fn(usize) -> f64) -> Self {
        let d = signature.dim();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = C64::new(f(i), 0.0);
        }
        Self {
            signature: signature.clone(),
            matrix: m,
        }
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self {
            signature: self.signature.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// ‖A − A†‖_F / ‖A‖_F, zero for the zero operator.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.matrix.norm();
        if n == 0.0 {
            return 0.0;
        }
        (&self.matrix - self.matrix.adjoint()).norm() / n
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            signature: self.signature.clone(),
            matrix: &self.matrix * C64::new(c, 0.0),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    /// Tensor product; the signature of `other` is appended.
    pub fn kron(&self, other: &Self) -> Self {
        let mut subs = self.signature.subsystems.clone();
        subs.extend(other.signature.subsystems.iter().cloned());
        Self {
            signature: SpaceSignature { subsystems: subs },
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Writes the matrix as CSV, one row per line with `re+imj` entries.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# signature: {}", self.signature)?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.matrix[(i, j)];
                    format!("{:.11e}{:+.11e}j", z.re, z.im)
                })
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    fn check_same(&self, other: &Self, op: &str) {
        assert!(
            self.signature == other.signature,
            "{op} of operators on different spaces: {} vs {}",
            self.signature,
            other.signature
        );
    }
}

impl<'a> Add<&'a QOperator> for &'a QOperator {
    type Output = QOperator;
    fn add(self, rhs: &QOperator) -> QOperator {
        self.check_same(rhs, "sum");
        QOperator {
            signature: self.signature.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Add for QOperator {
    type Output = QOperator;
    fn add(self, rhs: QOperator) -> QOperator {
        &self + &rhs
    }
}

impl<'a> Sub<&'a QOperator> for &'a QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        self.check_same(rhs, "difference");
        QOperator {
            signature: self.signature.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Sub for QOperator {
    type Output = QOperator;
    fn sub(self, rhs: QOperator) -> QOperator {
        &self - &rhs
    }
}

impl<'a> Mul<&'a QOperator> for &'a QOperator {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        self.check_same(rhs, "product");
        QOperator {
            signature: self.signature.clone(),
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Mul for QOperator {
    type Output = QOperator;
    fn mul(self, rhs: QOperator) -> QOperator {
        &self * &rhs
    }
}

impl Mul<f64> for &QOperator {
    type Output = QOperator;
    fn mul(self, c: f64) -> QOperator {
        self.scale(c)
    }
}

impl Mul<f64> for QOperator {
    type Output = QOperator;
    fn mul(self, c: f64) -> QOperator {
        self.scale(c)
    }
}

impl Neg for QOperator {
    type Output = QOperator;
    fn neg(self) -> QOperator {
        self.scale(-1.0)
    }
}

/// Truncated annihilation operator with ⟨n−1|a|n⟩ = √n.
pub fn boson_annihilator(n_max: usize) -> Result<QOperator> {
    if n_max < 1 {
        return Err(Error::invalid("n_max", "Fock cutoff must be at least 1"));
    }
    let d = n_max + 1;
    let mut m = CMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    QOperator::new(SpaceSignature::single(Subsystem::boson("mode", n_max)), m)
}

fn two_level(entries: [[f64; 2]; 2]) -> QOperator {
    let m = CMatrix::from_fn(2, 2, |i, j| C64::new(entries[i][j], 0.0));
    QOperator::new(SpaceSignature::single(Subsystem::two_level("tls")), m).expect("2x2")
}

/// σ₋ = |g⟩⟨e|.
pub fn sigma_minus() -> QOperator {
    two_level([[0.0, 1.0], [0.0, 0.0]])
}

/// σ₊ = |e⟩⟨g|.
pub fn sigma_plus() -> QOperator {
    two_level([[0.0, 0.0], [1.0, 0.0]])
}

/// σ_z = |e⟩⟨e| − |g⟩⟨g|.
pub fn sigma_z() -> QOperator {
    two_level([[-1.0, 0.0], [0.0, 1.0]])
}

/// Embeds a single-subsystem operator into `slot` of `sig`, padding with
/// identities.
pub fn embed(op: &QOperator, slot: usize, sig: &SpaceSignature) -> Result<QOperator> {
    let target = sig
        .subsystems
        .get(slot)
        .ok_or(Error::SlotOutOfRange { slot, len: sig.len() })?;
    if op.dim() != target.dim {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} cannot act on `{}` of dimension {}",
            op.dim(),
            target.name,
            target.dim
        )));
    }
    let mut m = CMatrix::identity(1, 1);
    for (i, s) in sig.subsystems.iter().enumerate() {
        m = if i == slot {
            m.kronecker(&op.matrix)
        } else {
            m.kronecker(&CMatrix::identity(s.dim, s.dim))
        };
    }
    QOperator::new(sig.clone(), m)
}
