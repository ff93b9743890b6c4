//! Exact complex linear algebra on small Hilbert spaces.
//!
//! Amplitudes are Gaussian rationals. States whose normalisation involves a
//! square root (such as `(|1⟩ + |2⟩ + |3⟩)/√3`) keep the rational amplitudes
//! and carry the squared global factor separately in
//! [`StateVector::norm_squared_scale`]. Every quantity needed downstream is
//! quadratic in the amplitudes, so no square root is ever taken.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Largest supported Hilbert space dimension.
pub const MAX_DIM: usize = 8;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

fn check_same_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexScalar {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_int(re: i64) -> Self {
        Self::real(Rational::from_integer(re.into()))
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|²`
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else {
            write!(f, "{}+{}i", format_rational(&self.re), format_rational(&self.im))
        }
    }
}

impl<'a> Add<&'a ComplexScalar> for &'a ComplexScalar {
    type Output = ComplexScalar;
    fn add(self, rhs: &'a ComplexScalar) -> ComplexScalar {
        ComplexScalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a ComplexScalar> for &'a ComplexScalar {
    type Output = ComplexScalar;
    fn sub(self, rhs: &'a ComplexScalar) -> ComplexScalar {
        ComplexScalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a ComplexScalar> for &'a ComplexScalar {
    type Output = ComplexScalar;
    fn mul(self, rhs: &'a ComplexScalar) -> ComplexScalar {
        ComplexScalar { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Neg for &ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        ComplexScalar { re: -&self.re, im: -&self.im }
    }
}

impl Add for ComplexScalar {
    type Output = ComplexScalar;
    fn add(self, rhs: ComplexScalar) -> ComplexScalar {
        &self + &rhs
    }
}

impl Mul for ComplexScalar {
    type Output = ComplexScalar;
    fn mul(self, rhs: ComplexScalar) -> ComplexScalar {
        &self * &rhs
    }
}

/// Dense square matrix over [`ComplexScalar`], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    dim: usize,
    entries: Vec<ComplexScalar>,
}

impl Operator {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Result<Self> {
        check_dim(dim)?;
        let entries = (0..dim * dim).map(|idx| f(idx / dim, idx % dim)).collect();
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<ComplexScalar>>) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            check_same_dim(dim, row.len())?;
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |_, _| ComplexScalar::zero())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |r, c| if r == c { ComplexScalar::one() } else { ComplexScalar::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &ComplexScalar {
        &self.entries[row * self.dim + col]
    }

    pub fn matmul(&self, rhs: &Operator) -> Result<Operator> {
        check_same_dim(self.dim, rhs.dim)?;
        let d = self.dim;
        Operator::from_fn(d, |r, c| {
            (0..d).fold(ComplexScalar::zero(), |acc, k| &acc + &(self.get(r, k) * rhs.get(k, c)))
        })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        check_same_dim(self.dim, rhs.dim)?;
        Operator::from_fn(self.dim, |r, c| self.get(r, c) + rhs.get(r, c))
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        check_same_dim(self.dim, rhs.dim)?;
        Operator::from_fn(self.dim, |r, c| self.get(r, c) - rhs.get(r, c))
    }

    pub fn scale(&self, factor: &Rational) -> Operator {
        let factor = ComplexScalar::real(factor.clone());
        Operator { dim: self.dim, entries: self.entries.iter().map(|z| z * &factor).collect() }
    }

    pub fn adjoint(&self) -> Operator {
        let d = self.dim;
        Operator { dim: d, entries: (0..d * d).map(|idx| self.get(idx % d, idx / d).conj()).collect() }
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..self.dim).fold(ComplexScalar::zero(), |acc, k| &acc + self.get(k, k))
    }

    /// Trace, required to be real.
    pub fn real_trace(&self) -> Result<Rational> {
        let t = self.trace();
        if !t.im.is_zero() {
            return Err(Error::NonRealTrace(format_rational(&t.im)));
        }
        Ok(t.re)
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ComplexScalar::is_zero)
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = ComplexScalar;
    fn index(&self, (r, c): (usize, usize)) -> &ComplexScalar {
        self.get(r, c)
    }
}

/// Ket with rational amplitudes and a separately tracked squared global
/// factor: the physical state is `sqrt(norm_squared_scale) * amplitudes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    amplitudes: Vec<ComplexScalar>,
    norm_squared_scale: Rational,
}

impl StateVector {
    pub fn new(amplitudes: Vec<ComplexScalar>, norm_squared_scale: Rational) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if norm_squared_scale <= Rational::zero() {
            return Err(Error::NotNormalized(format!("non-positive scale {}", format_rational(&norm_squared_scale))));
        }
        Ok(Self { amplitudes, norm_squared_scale })
    }

    /// Picks the scale that makes `amplitudes` a unit vector.
    pub fn normalized(amplitudes: Vec<ComplexScalar>) -> Result<Self> {
        let raw: Rational = amplitudes.iter().map(ComplexScalar::norm_sqr).sum();
        if raw.is_zero() {
            return Err(Error::NotNormalized("zero vector".into()));
        }
        Self::new(amplitudes, raw.recip())
    }

    /// Real integer amplitudes, normalised.
    pub fn from_ints(amplitudes: &[i64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| ComplexScalar::from_int(a)).collect())
    }

    /// Computational basis state `|index⟩`, zero-based.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidOutcome(index));
        }
        let amplitudes =
            (0..dim).map(|k| if k == index { ComplexScalar::one() } else { ComplexScalar::zero() }).collect();
        Self::new(amplitudes, Rational::one())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[ComplexScalar] {
        &self.amplitudes
    }

    pub fn norm_squared_scale(&self) -> &Rational {
        &self.norm_squared_scale
    }

    /// `⟨v|v⟩`, including the global factor.
    pub fn squared_norm(&self) -> Rational {
        let raw: Rational = self.amplitudes.iter().map(ComplexScalar::norm_sqr).sum();
        raw * &self.norm_squared_scale
    }

    pub fn is_normalized(&self) -> bool {
        self.squared_norm().is_one()
    }

    fn require_normalized(&self) -> Result<()> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized(format_rational(&self.squared_norm())));
        }
        Ok(())
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap_sqr(&self, other: &StateVector) -> Result<Rational> {
        check_same_dim(self.dim(), other.dim())?;
        let inner = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(ComplexScalar::zero(), |acc, (a, b)| &acc + &(&a.conj() * b));
        Ok(inner.norm_sqr() * &self.norm_squared_scale * &other.norm_squared_scale)
    }

    /// `|v⟩⟨v|` without any normalisation check.
    fn ket_bra(&self) -> Operator {
        let d = self.dim();
        Operator::from_fn(d, |r, c| &self.amplitudes[r] * &self.amplitudes[c].conj())
            .expect("dimension checked at construction")
            .scale(&self.norm_squared_scale)
    }
}

/// Orthogonal projector: Hermitian and idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector(Operator);

impl Projector {
    pub fn new(matrix: Operator) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::NotProjector("not Hermitian"));
        }
        if matrix.matmul(&matrix)? != matrix {
            return Err(Error::NotProjector("not idempotent"));
        }
        Ok(Self(matrix))
    }

    /// Rank-1 projector `|v⟩⟨v|`.
    pub fn onto(v: &StateVector) -> Result<Self> {
        v.require_normalized()?;
        Ok(Self(v.ket_bra()))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(Self(Operator::identity(dim)?))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Ok(Self(Operator::zero(dim)?))
    }

    /// `1 - P`
    pub fn complement(&self) -> Projector {
        let id = Operator::identity(self.dim()).expect("valid dimension");
        Projector(id.sub(&self.0).expect("same dimension"))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Operator {
        &self.0
    }
}

/// Projection-valued measure; outcome `a` corresponds to `elements()[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pvm {
    elements: Vec<Projector>,
}

impl Pvm {
    pub fn new(elements: Vec<Projector>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::InvalidPvm("no elements".into()))?;
        let dim = first.dim();
        let mut total = Operator::zero(dim)?;
        for (a, pa) in elements.iter().enumerate() {
            check_same_dim(dim, pa.dim())?;
            for (b, pb) in elements.iter().enumerate().skip(a + 1) {
                if !pa.matrix().matmul(pb.matrix())?.is_zero() {
                    return Err(Error::InvalidPvm(format!("elements {a} and {b} are not orthogonal")));
                }
            }
            total = total.add(pa.matrix())?;
        }
        if total != Operator::identity(dim)? {
            return Err(Error::InvalidPvm("elements do not sum to identity".into()));
        }
        Ok(Self { elements })
    }

    /// Two-outcome measurement `{1 - P, P}`: outcome 1 means "found in P".
    pub fn binary(p: Projector) -> Self {
        let complement = p.complement();
        Self { elements: vec![complement, p] }
    }

    /// Measurement in the computational basis.
    pub fn computational(dim: usize) -> Result<Self> {
        let elements = (0..dim).map(|k| Projector::onto(&StateVector::basis(dim, k)?)).collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    pub fn elements(&self) -> &[Projector] {
        &self.elements
    }

    pub fn outcome(&self, a: usize) -> Result<&Projector> {
        self.elements.get(a).ok_or(Error::InvalidOutcome(a))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }
}

/// Hermitian, unit-trace operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityOperator(Operator);

impl DensityOperator {
    pub fn new(matrix: Operator) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        if !matrix.real_trace()?.is_one() {
            return Err(Error::InvalidDensity("trace is not 1"));
        }
        Ok(Self(matrix))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Operator {
        &self.0
    }
}

/// `ρ = |v⟩⟨v|` for a normalised ket.
pub fn outer_product(v: &StateVector) -> Result<DensityOperator> {
    v.require_normalized()?;
    Ok(DensityOperator(v.ket_bra()))
}

/// Lüders update: returns the unnormalised post-measurement operator `Π ρ Π`
/// together with its weight `Tr[Π ρ Π]`.
pub fn apply_projector(p: &Projector, rho: &DensityOperator) -> Result<(Operator, Rational)> {
    check_same_dim(p.dim(), rho.dim())?;
    let updated = p.matrix().matmul(rho.matrix())?.matmul(p.matrix())?;
    let weight = updated.real_trace()?;
    Ok((updated, weight))
}

/// `Tr[Π · op]`, required to be real.
pub fn trace_product(p: &Projector, op: &Operator) -> Result<Rational> {
    check_same_dim(p.dim(), op.dim())?;
    p.matrix().matmul(op)?.real_trace()
}
