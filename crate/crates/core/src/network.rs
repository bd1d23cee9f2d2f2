//! Linear optical elements and their action on Fock states.
//!
//! Every element maps the creation operators before it onto those after it,
//! `c_i^dag -> sum_j M[i][j] c_j^dag`. For the balanced splitter this gives
//! `a^dag = (u^dag + i l^dag)/sqrt2` and `b^dag = (u^dag - i l^dag)/sqrt2`,
//! and a phase shifter multiplies its mode's creation operator by `e^{i phi}`.
//!
//! States are transformed ket by ket: the occupations `(n, m)` on the mode
//! pair are rewritten by expanding `(M00 x + M01 y)^n (M10 x + M11 y)^m`
//! binomially. Permanents are kept out of this path; see [`crate::oracle`].

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{binomial, factorial, BasisKet, PureState, MAX_PHOTONS};

/// Unitarity tolerance for element matrices.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Largest entry of `|M M^dag - I|`.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let prod = m * m.adjoint();
    let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A two-mode element acting as a 2x2 unitary on a pair of creation operators.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSplitter {
    modes: (usize, usize),
    matrix: Matrix2<Complex64>,
}

impl BeamSplitter {
    pub fn new(modes: (usize, usize), matrix: Matrix2<Complex64>) -> Result<Self> {
        if modes.0 == modes.1 {
            return Err(Error::DegenerateModePair(modes.0, modes.1));
        }
        let prod = matrix * matrix.adjoint();
        let dev = (prod - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev.is_nan() || dev > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary(dev));
        }
        Ok(BeamSplitter { modes, matrix })
    }

    /// The balanced splitter with rows `(1, i)/sqrt2` and `(1, -i)/sqrt2`.
    pub fn balanced(first: usize, second: usize) -> Result<Self> {
        Self::new((first, second), balanced_matrix())
    }

    pub fn modes(&self) -> (usize, usize) {
        self.modes
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.matrix
    }
}

/// Rows `(1/sqrt2, i/sqrt2)` and `(1/sqrt2, -i/sqrt2)`.
pub fn balanced_matrix() -> Matrix2<Complex64> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let ih = Complex64::new(0.0, FRAC_1_SQRT_2);
    Matrix2::new(h, ih, h, -ih)
}

/// Multiplies the creation operator of one mode by `e^{i phi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShifter {
    mode: usize,
    phi: f64,
}

impl PhaseShifter {
    pub fn new(mode: usize, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinitePhase);
        }
        Ok(PhaseShifter { mode, phi })
    }

    pub fn mode(&self) -> usize {
        self.mode
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    BeamSplitter(BeamSplitter),
    Phase(PhaseShifter),
}

impl Element {
    fn max_mode(&self) -> usize {
        match self {
            Element::BeamSplitter(bs) => bs.modes.0.max(bs.modes.1),
            Element::Phase(ps) => ps.mode,
        }
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        match self {
            Element::BeamSplitter(bs) => apply_beam_splitter(state, bs),
            Element::Phase(ps) => apply_phase(state, ps),
        }
    }

    /// The `mode_count x mode_count` matrix of this element.
    pub fn embedded_matrix(&self, mode_count: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::identity(mode_count, mode_count);
        match self {
            Element::BeamSplitter(bs) => {
                let (p, q) = bs.modes;
                m[(p, p)] = bs.matrix[(0, 0)];
                m[(p, q)] = bs.matrix[(0, 1)];
                m[(q, p)] = bs.matrix[(1, 0)];
                m[(q, q)] = bs.matrix[(1, 1)];
            }
            Element::Phase(ps) => {
                m[(ps.mode, ps.mode)] = Complex64::from_polar(1.0, ps.phi);
            }
        }
        m
    }
}

impl From<BeamSplitter> for Element {
    fn from(bs: BeamSplitter) -> Self {
        Element::BeamSplitter(bs)
    }
}

impl From<PhaseShifter> for Element {
    fn from(ps: PhaseShifter) -> Self {
        Element::Phase(ps)
    }
}

/// An ordered sequence of elements on a fixed number of modes.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    mode_count: usize,
    elements: Vec<Element>,
}

impl Network {
    pub fn new(mode_count: usize) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::NoModes);
        }
        Ok(Network {
            mode_count,
            elements: Vec::new(),
        })
    }

    pub fn push(&mut self, element: impl Into<Element>) -> Result<()> {
        let element = element.into();
        let mode = element.max_mode();
        if mode >= self.mode_count {
            return Err(Error::ModeOutOfRange {
                mode,
                mode_count: self.mode_count,
            });
        }
        self.elements.push(element);
        Ok(())
    }

    pub fn with(mut self, element: impl Into<Element>) -> Result<Self> {
        self.push(element)?;
        Ok(self)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// The overall single-photon transfer matrix. Element matrices compose
    /// left to right in application order.
    pub fn unitary(&self) -> DMatrix<Complex64> {
        self.elements.iter().fold(
            DMatrix::identity(self.mode_count, self.mode_count),
            |acc, e| acc * e.embedded_matrix(self.mode_count),
        )
    }
}

fn check_photons(n: u32) -> Result<()> {
    if n > MAX_PHOTONS {
        Err(Error::TooManyPhotons(n))
    } else {
        Ok(())
    }
}

/// Applies a two-mode unitary by expanding each ket's creation-operator
/// monomial on the mode pair.
pub fn apply_beam_splitter(state: &PureState, bs: &BeamSplitter) -> Result<PureState> {
    let (p, q) = bs.modes;
    state.check_mode(p)?;
    state.check_mode(q)?;
    let m = &bs.matrix;

    let mut out: BTreeMap<BasisKet, Complex64> = BTreeMap::new();
    for (ket, amp) in state.terms() {
        let occ = ket.occupations();
        let (n, k) = (occ[p], occ[q]);
        let total = n + k;
        check_photons(total)?;

        // (m00 x + m01 y)^n -> coefficient of x^j y^(n-j)
        let first: Vec<Complex64> = (0..=n)
            .map(|j| m[(0, 0)].powu(j) * m[(0, 1)].powu(n - j) * binomial(n, j))
            .collect();
        let second: Vec<Complex64> = (0..=k)
            .map(|j| m[(1, 0)].powu(j) * m[(1, 1)].powu(k - j) * binomial(k, j))
            .collect();

        let mut poly = vec![Complex64::default(); total as usize + 1];
        for (i, a) in first.iter().enumerate() {
            for (j, b) in second.iter().enumerate() {
                poly[i + j] += a * b;
            }
        }

        let inv_norm = 1.0 / (factorial(n) * factorial(k)).sqrt();
        for (x_power, coeff) in poly.into_iter().enumerate() {
            let x_power = x_power as u32;
            let y_power = total - x_power;
            let ladder = (factorial(x_power) * factorial(y_power)).sqrt() * inv_norm;
            let mut out_occ = occ.to_vec();
            out_occ[p] = x_power;
            out_occ[q] = y_power;
            *out.entry(BasisKet::new(out_occ)).or_default() += amp * coeff * ladder;
        }
    }
    Ok(PureState::from_accumulated(
        state.mode_count(),
        out,
        state.prune_epsilon(),
    ))
}

/// Multiplies each ket by `e^{i n phi}`, `n` the occupation of the shifted mode.
pub fn apply_phase(state: &PureState, ps: &PhaseShifter) -> Result<PureState> {
    state.check_mode(ps.mode)?;
    let terms = state
        .terms()
        .map(|(ket, amp)| {
            let n = ket.occupations()[ps.mode];
            let factor = Complex64::from_polar(1.0, f64::from(n) * ps.phi);
            (ket.clone(), amp * factor)
        })
        .collect();
    Ok(PureState::from_accumulated(
        state.mode_count(),
        terms,
        state.prune_epsilon(),
    ))
}

/// Applies every element of `net` in order.
pub fn apply_network(state: &PureState, net: &Network) -> Result<PureState> {
    if state.mode_count() != net.mode_count {
        return Err(Error::ModeCountMismatch {
            expected: net.mode_count,
            found: state.mode_count(),
        });
    }
    net.elements
        .iter()
        .try_fold(state.clone(), |acc, e| e.apply(&acc))
}

/// Phase `phi` on the upper rail followed by the balanced output mixer.
///
/// # Panics
///
/// If `phi` is not finite.
pub fn output_stage(phi: f64) -> Network {
    Network::new(2)
        .and_then(|n| n.with(PhaseShifter::new(0, phi)?))
        .and_then(|n| n.with(BeamSplitter::balanced(0, 1)?))
        .expect("phase must be finite")
}

/// Balanced input splitter, phase `phi` on mode 0, balanced output mixer.
///
/// # Panics
///
/// If `phi` is not finite.
pub fn mach_zehnder(phi: f64) -> Network {
    let stage = output_stage(phi);
    let mut net = Network::new(2)
        .and_then(|n| n.with(BeamSplitter::balanced(0, 1)?))
        .expect("two modes");
    net.elements.extend(stage.elements);
    net
}
