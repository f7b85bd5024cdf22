//! Pauli-string operators on `n` two-level systems and their dense matrices.
//!
//! Site 0 is the leftmost (most significant) tensor factor, so basis index
//! bit `n - 1 - j` holds the state of site `j`. Within a site, index 0 is the
//! `+1` eigenstate of `σ^z` (the excited state for a `(ω/2)σ^z` term).

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub const DEFAULT_SITE_CAP: usize = 12;

static SITE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SITE_CAP);

/// Current maximum number of sites accepted by operator constructors.
pub fn site_cap() -> usize {
    SITE_CAP.load(Ordering::Relaxed)
}

/// Override the site cap process-wide.
pub fn set_site_cap(cap: usize) {
    SITE_CAP.store(cap.max(1), Ordering::Relaxed);
}

fn check_cap(n_sites: usize) -> Result<()> {
    let cap = site_cap();
    if n_sites == 0 {
        return Err(Error::InvalidParameter("at least one site is required".into()));
    }
    if n_sites > cap {
        return Err(Error::SiteCapExceeded { n_sites, cap });
    }
    Ok(())
}

#[inline]
pub(crate) fn site_mask(site: usize, n_sites: usize) -> usize {
    1 << (n_sites - 1 - site)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// The 2×2 matrix of this axis.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let r = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            PauliAxis::I => [r, o, o, r],
            PauliAxis::X => [o, r, r, o],
            PauliAxis::Y => [o, -i, i, o],
            PauliAxis::Z => [r, o, o, -r],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }

    /// X and Y anticommute with σ^z.
    pub fn flips(self) -> bool {
        matches!(self, PauliAxis::X | PauliAxis::Y)
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

impl TryFrom<char> for PauliAxis {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(PauliAxis::I),
            'X' => Ok(PauliAxis::X),
            'Y' => Ok(PauliAxis::Y),
            'Z' => Ok(PauliAxis::Z),
            _ => Err(Error::InvalidParameter(format!("not a Pauli axis: `{c}`"))),
        }
    }
}

/// A real-weighted tensor product of single-site Pauli operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    axes: Vec<PauliAxis>,
    coefficient: f64,
}

impl PauliString {
    pub fn new(axes: Vec<PauliAxis>, coefficient: f64) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidParameter("Pauli string needs at least one axis".into()));
        }
        if !coefficient.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Pauli coefficient must be finite, got {coefficient}"
            )));
        }
        Ok(Self { axes, coefficient })
    }

    /// `coefficient` times the given axes at the given sites, identity elsewhere.
    pub fn local(n_sites: usize, factors: &[(usize, PauliAxis)], coefficient: f64) -> Result<Self> {
        let mut axes = vec![PauliAxis::I; n_sites];
        for &(site, axis) in factors {
            if site >= n_sites {
                return Err(Error::SiteOutOfRange { site, n_sites });
            }
            axes[site] = axis;
        }
        Self::new(axes, coefficient)
    }

    pub fn axes(&self) -> &[PauliAxis] {
        &self.axes
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn n_sites(&self) -> usize {
        self.axes.len()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            axes: self.axes.clone(),
            coefficient: self.coefficient * factor,
        }
    }

    /// Number of sites carrying X or Y.
    pub fn flip_count(&self) -> usize {
        self.axes.iter().filter(|a| a.flips()).count()
    }

    /// Commutes with `⊗σ^z` iff the flip count is even.
    pub fn is_parity_even(&self) -> bool {
        self.flip_count().is_multiple_of(2)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·", self.coefficient)?;
        for a in &self.axes {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"0.5*XZ"` or `"XZ"` (unit coefficient).
    fn from_str(s: &str) -> Result<Self> {
        let (coef, word) = match s.split_once('*') {
            Some((c, w)) => (
                c.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidParameter(format!("bad coefficient `{c}`: {e}")))?,
                w.trim(),
            ),
            None => (1.0, s.trim()),
        };
        let axes = word.chars().map(PauliAxis::try_from).collect::<Result<Vec<_>>>()?;
        Self::new(axes, coef)
    }
}

/// A Hamiltonian as a sum of Pauli strings over a fixed number of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    n_sites: usize,
    terms: Vec<PauliString>,
    site_labels: Option<Vec<String>>,
}

impl OperatorSpec {
    pub fn new(n_sites: usize, terms: Vec<PauliString>) -> Result<Self> {
        check_cap(n_sites)?;
        for t in &terms {
            if t.n_sites() != n_sites {
                return Err(Error::LengthMismatch {
                    expected: n_sites,
                    actual: t.n_sites(),
                });
            }
        }
        Ok(Self {
            n_sites,
            terms,
            site_labels: None,
        })
    }

    /// The zero operator on `n_sites`.
    pub fn zero(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, Vec::new())
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.n_sites {
            return Err(Error::LengthMismatch {
                expected: self.n_sites,
                actual: labels.len(),
            });
        }
        self.site_labels = Some(labels);
        Ok(self)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn site_labels(&self) -> Option<&[String]> {
        self.site_labels.as_deref()
    }

    pub fn push(&mut self, term: PauliString) -> Result<()> {
        if term.n_sites() != self.n_sites {
            return Err(Error::LengthMismatch {
                expected: self.n_sites,
                actual: term.n_sites(),
            });
        }
        self.terms.push(term);
        Ok(())
    }

    /// Sum coefficients of identical axis patterns, dropping exact zeros.
    /// Order follows first appearance.
    pub fn simplified(&self) -> Self {
        let mut merged: Vec<PauliString> = Vec::new();
        for t in &self.terms {
            match merged.iter_mut().find(|m| m.axes == t.axes) {
                Some(m) => m.coefficient += t.coefficient,
                None => merged.push(t.clone()),
            }
        }
        merged.retain(|t| t.coefficient != 0.0);
        Self {
            n_sites: self.n_sites,
            terms: merged,
            site_labels: self.site_labels.clone(),
        }
    }

    /// Largest absolute term coefficient (zero for the zero operator).
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).fold(0.0, f64::max)
    }
}

/// A dense complex `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n_sites: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: matrix.ncols(),
            });
        }
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        Ok(Self {
            n_sites: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn zeros(n_sites: usize) -> Result<Self> {
        check_cap(n_sites)?;
        let dim = 1 << n_sites;
        Ok(Self {
            n_sites,
            matrix: DMatrix::zeros(dim, dim),
        })
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        check_cap(n_sites)?;
        let dim = 1 << n_sites;
        Ok(Self {
            n_sites,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n_sites: self.n_sites,
            matrix: &self.matrix * factor,
        }
    }

    pub fn kron(&self, other: &DenseOperator) -> Result<Self> {
        check_cap(self.n_sites + other.n_sites)?;
        Ok(Self {
            n_sites: self.n_sites + other.n_sites,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// True when no entry has a nonzero imaginary part.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    fn same_dim(&self, other: &DenseOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &DenseOperator) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            n_sites: self.n_sites,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn try_sub(&self, other: &DenseOperator) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            n_sites: self.n_sites,
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn try_mul(&self, other: &DenseOperator) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            n_sites: self.n_sites,
            matrix: &self.matrix * &other.matrix,
        })
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    /// Panics on dimension mismatch; use [`DenseOperator::try_add`] otherwise.
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        self.try_sub(rhs).expect("operator dimensions differ")
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.try_mul(rhs).expect("operator dimensions differ")
    }
}

/// `I ⊗ … ⊗ σ^axis ⊗ … ⊗ I` with `σ^axis` at `site`.
pub fn single_site_pauli(axis: PauliAxis, site: usize, n_sites: usize) -> Result<DenseOperator> {
    check_cap(n_sites)?;
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let p = PauliString::local(n_sites, &[(site, axis)], 1.0)?;
    string_to_matrix(&p, n_sites)
}

/// Accumulate `p` into `out`. Each Pauli string is a signed, phased
/// permutation: column `b` maps to row `b ^ flip_mask`.
fn add_string_into(p: &PauliString, out: &mut DMatrix<Complex64>) {
    let n = p.n_sites();
    let dim = 1usize << n;
    let mut flip_mask = 0usize;
    let mut z_mask = 0usize;
    let mut y_mask = 0usize;
    for (site, axis) in p.axes().iter().enumerate() {
        let m = site_mask(site, n);
        match axis {
            PauliAxis::I => {}
            PauliAxis::X => flip_mask |= m,
            PauliAxis::Y => {
                flip_mask |= m;
                y_mask |= m;
            }
            PauliAxis::Z => z_mask |= m,
        }
    }
    let n_y = y_mask.count_ones();
    for col in 0..dim {
        let row = col ^ flip_mask;
        // Y: |0> -> i|1>, |1> -> -i|0>. Total phase i^{n_y} (-1)^{#Y sites in state 1}.
        let mut sign = if (col & z_mask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        if (col & y_mask).count_ones() % 2 == 1 {
            sign = -sign;
        }
        let phase = match n_y % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        };
        out[(row, col)] += phase * p.coefficient();
    }
}

/// `coefficient × σ^{a_0} ⊗ σ^{a_1} ⊗ …`.
pub fn string_to_matrix(p: &PauliString, n_sites: usize) -> Result<DenseOperator> {
    if p.n_sites() != n_sites {
        return Err(Error::LengthMismatch {
            expected: n_sites,
            actual: p.n_sites(),
        });
    }
    let mut op = DenseOperator::zeros(n_sites)?;
    add_string_into(p, &mut op.matrix);
    Ok(op)
}

/// Dense matrix of the full spec (sum of all terms).
pub fn build_operator(spec: &OperatorSpec) -> Result<DenseOperator> {
    let mut op = DenseOperator::zeros(spec.n_sites())?;
    for t in spec.terms() {
        if t.n_sites() != spec.n_sites() {
            return Err(Error::LengthMismatch {
                expected: spec.n_sites(),
                actual: t.n_sites(),
            });
        }
        add_string_into(t, &mut op.matrix);
    }
    Ok(op)
}

/// `‖ab − ba‖_F`.
pub fn commutator_frobenius(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    a.same_dim(b)?;
    let c = &a.matrix * &b.matrix - &b.matrix * &a.matrix;
    Ok(c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// Largest entry of `|a − a†|`.
pub fn hermitian_deviation(a: &DenseOperator) -> f64 {
    let m = a.matrix();
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(a: &DenseOperator, tol: f64) -> bool {
    hermitian_deviation(a) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use PauliAxis::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Textbook Kronecker product, independent of nalgebra and of the
    /// permutation construction above.
    fn kron_oracle(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
        let mut out = vec![vec![c(0.0, 0.0); ca * cb]; ra * rb];
        for i in 0..ra {
            for j in 0..ca {
                for k in 0..rb {
                    for l in 0..cb {
                        out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    fn pauli_rows(a: PauliAxis) -> Vec<Vec<Complex64>> {
        match a {
            I => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
            X => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
            Y => vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]],
            Z => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]],
        }
    }

    fn oracle_string(axes: &[PauliAxis], coef: f64) -> Vec<Vec<Complex64>> {
        let mut acc = pauli_rows(axes[0]);
        for &a in &axes[1..] {
            acc = kron_oracle(&acc, &pauli_rows(a));
        }
        acc.into_iter()
            .map(|row| row.into_iter().map(|z| z * coef).collect())
            .collect()
    }

    fn assert_matches_oracle(op: &DenseOperator, oracle: &[Vec<Complex64>]) {
        assert_eq!(op.dim(), oracle.len());
        for (r, row) in oracle.iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                assert!((op.get(r, col) - z).norm() < 1e-15, "entry ({r},{col})");
            }
        }
    }

    fn all_strings(n: usize) -> Vec<Vec<PauliAxis>> {
        (0..4usize.pow(n as u32))
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let a = PauliAxis::ALL[k % 4];
                        k /= 4;
                        a
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn single_site_z() {
        let z = single_site_pauli(Z, 0, 1).unwrap();
        assert_eq!(z.get(0, 0), c(1.0, 0.0));
        assert_eq!(z.get(1, 1), c(-1.0, 0.0));
        assert_eq!(z.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn single_site_x_on_second_site_is_block_diagonal() {
        let x = single_site_pauli(X, 1, 2).unwrap();
        for block in 0..2 {
            let o = 2 * block;
            assert_eq!(x.get(o, o + 1), c(1.0, 0.0));
            assert_eq!(x.get(o + 1, o), c(1.0, 0.0));
            assert_eq!(x.get(o, o), c(0.0, 0.0));
        }
        assert_eq!(x.get(0, 2), c(0.0, 0.0));
    }

    #[test]
    fn single_site_y_matches_kronecker_oracle() {
        let y = single_site_pauli(Y, 0, 2).unwrap();
        assert_matches_oracle(&y, &oracle_string(&[Y, I], 1.0));
        assert_eq!(y.get(2, 0), c(0.0, 1.0));
        assert_eq!(y.get(0, 2), c(0.0, -1.0));
    }

    #[test]
    fn single_site_errors() {
        assert!(matches!(single_site_pauli(X, 2, 2), Err(Error::SiteOutOfRange { .. })));
        assert!(matches!(
            single_site_pauli(X, 0, DEFAULT_SITE_CAP + 1),
            Err(Error::SiteCapExceeded { .. })
        ));
    }

    #[test]
    fn string_examples() {
        let zz = string_to_matrix(&"0.5*ZZ".parse().unwrap(), 2).unwrap();
        let diag = [0.5, -0.5, -0.5, 0.5];
        for (i, d) in diag.iter().enumerate() {
            assert_eq!(zz.get(i, i), c(*d, 0.0));
        }
        let xz = string_to_matrix(&"XZ".parse().unwrap(), 2).unwrap();
        assert_matches_oracle(&xz, &oracle_string(&[X, Z], 1.0));
        assert!(is_hermitian(&xz, 1e-12));
        let ii = string_to_matrix(&"2*II".parse().unwrap(), 2).unwrap();
        assert_eq!(ii, DenseOperator::identity(2).unwrap().scale(c(2.0, 0.0)));
        assert!(matches!(
            string_to_matrix(&"XZ".parse().unwrap(), 3),
            Err(Error::LengthMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn every_string_up_to_three_sites_matches_oracle() {
        for n in 1..=3 {
            for axes in all_strings(n) {
                let p = PauliString::new(axes.clone(), -0.75).unwrap();
                let m = string_to_matrix(&p, n).unwrap();
                assert_matches_oracle(&m, &oracle_string(&axes, -0.75));
                assert!(is_hermitian(&m, 1e-12));
            }
        }
    }

    #[test]
    fn direct_model_hand_built() {
        // (1/2)σz⊗I + (0.5/2)σx⊗σz + (1.3/2)I⊗σz written out by hand.
        let spec = OperatorSpec::new(
            2,
            vec![
                "0.5*ZI".parse().unwrap(),
                "0.25*XZ".parse().unwrap(),
                "0.65*IZ".parse().unwrap(),
            ],
        )
        .unwrap();
        let h = build_operator(&spec).unwrap();
        let expected = [
            [1.15, 0.0, 0.25, 0.0],
            [0.0, -0.15, 0.0, -0.25],
            [0.25, 0.0, 0.15, 0.0],
            [0.0, -0.25, 0.0, -1.15],
        ];
        for r in 0..4 {
            for col in 0..4 {
                assert_abs_diff_eq!(h.get(r, col).re, expected[r][col], epsilon = 1e-15);
                assert_eq!(h.get(r, col).im, 0.0);
            }
        }
    }

    #[test]
    fn empty_spec_is_zero() {
        let h = build_operator(&OperatorSpec::zero(2).unwrap()).unwrap();
        assert_eq!(h.dim(), 4);
        assert_eq!(h.frobenius_norm(), 0.0);
    }

    #[test]
    fn commutator_examples() {
        let z = single_site_pauli(Z, 0, 1).unwrap();
        let x = single_site_pauli(X, 0, 1).unwrap();
        assert_eq!(commutator_frobenius(&z, &z).unwrap(), 0.0);
        assert_abs_diff_eq!(
            commutator_frobenius(&x, &z).unwrap(),
            2.0 * 2f64.sqrt(),
            epsilon = 1e-15
        );
        let big = DenseOperator::zeros(2).unwrap();
        assert!(matches!(
            commutator_frobenius(&x, &big),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hermiticity_examples() {
        let y = single_site_pauli(Y, 0, 1).unwrap();
        assert!(is_hermitian(&y, 1e-12));
        let x = single_site_pauli(X, 0, 1).unwrap();
        let shifted = &x + &DenseOperator::identity(1).unwrap().scale(c(0.0, 1.0));
        assert!(!is_hermitian(&shifted, 1e-12));
    }

    #[test]
    fn parity_rule_agrees_with_commutator() {
        for n in 1..=3 {
            let zgen = (0..n).map(|_| Z).collect::<Vec<_>>();
            let zgen = string_to_matrix(&PauliString::new(zgen, 1.0).unwrap(), n).unwrap();
            for axes in all_strings(n) {
                let p = PauliString::new(axes, 1.0).unwrap();
                let m = string_to_matrix(&p, n).unwrap();
                let comm = commutator_frobenius(&zgen, &m).unwrap();
                assert_eq!(comm < 1e-12, p.is_parity_even(), "{p}");
            }
        }
    }

    #[test]
    fn simplified_merges_and_drops() {
        let spec = OperatorSpec::new(
            2,
            vec![
                "XZ".parse().unwrap(),
                "0.5*ZZ".parse().unwrap(),
                "-1*XZ".parse().unwrap(),
            ],
        )
        .unwrap();
        let s = spec.simplified();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.terms()[0].coefficient(), 0.5);
    }

    #[test]
    fn spec_rejects_wrong_length_and_cap() {
        assert!(OperatorSpec::new(3, vec!["XZ".parse().unwrap()]).is_err());
        assert!(matches!(OperatorSpec::zero(13), Err(Error::SiteCapExceeded { .. })));
        assert!(PauliString::new(vec![X], f64::NAN).is_err());
        assert!(PauliString::new(vec![], 1.0).is_err());
    }

    fn axis() -> impl Strategy<Value = PauliAxis> {
        prop_oneof![Just(I), Just(X), Just(Y), Just(Z)]
    }

    proptest! {
        #[test]
        fn kronecker_ordering(a in axis(), b in axis(), coef in -3.0f64..3.0) {
            let ab = string_to_matrix(&PauliString::new(vec![a, b], coef).unwrap(), 2).unwrap();
            let ma = string_to_matrix(&PauliString::new(vec![a], coef).unwrap(), 1).unwrap();
            let mb = string_to_matrix(&PauliString::new(vec![b], 1.0).unwrap(), 1).unwrap();
            let kron = ma.kron(&mb).unwrap();
            prop_assert!((&ab - &kron).frobenius_norm() < 1e-14);
        }

        #[test]
        fn build_is_linear(
            words in proptest::collection::vec((proptest::collection::vec(axis(), 3), -2.0f64..2.0), 0..6)
        ) {
            let terms: Vec<_> = words.iter().map(|(a, c)| PauliString::new(a.clone(), *c).unwrap()).collect();
            let doubled: Vec<_> = terms.iter().map(|t| t.scaled(2.0)).collect();
            let h = build_operator(&OperatorSpec::new(3, terms).unwrap()).unwrap();
            let h2 = build_operator(&OperatorSpec::new(3, doubled).unwrap()).unwrap();
            prop_assert!((&h.scale(c(2.0, 0.0)) - &h2).frobenius_norm() < 1e-13);
            prop_assert!(is_hermitian(&h, 1e-12));
        }
    }
}
