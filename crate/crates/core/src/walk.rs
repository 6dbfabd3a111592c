//! Walker state and single-step Floquet evolution of the split-step walk.
//!
//! The walk acts on a spin-1/2 particle living on a one-dimensional lattice
//! of sites `q in [-L, L]`. One time step is
//!
//! ```text
//! U(phi, theta) = R3(phi/2) R1(theta/2) T R1(theta/2) R3(phi/2)
//! ```
//!
//! read right-to-left (the rightmost operator acts first), where `T` shifts
//! spin-up one site right and spin-down one site left, and `R_j(alpha)`
//! rotates the spin at site `q` by `exp(-i alpha_q sigma_j)`. The hardware
//! variant applies a single full-angle coin per step, `T R1(theta)`.
//!
//! Dynamics always run on an oversized open lattice (`L = t_max + 1` for a
//! `t_max`-step run from the origin) so that support never reaches the edge;
//! spectral analysis uses the periodic closure built by
//! [`build_unitary_matrix`].

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Spin component in the `sigma_3` (computational) basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Spin label for initial states and measurement records. `Up`/`Down` are
/// the `sigma_3` eigenstates; `Plus`/`Minus` the `sigma_2` eigenstates
/// `(|up> +- i |down>)/sqrt(2)`, aka circular right (R) / left (L).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinLabel {
    Up,
    Down,
    Plus,
    Minus,
}

impl SpinLabel {
    /// Measurement basis this label belongs to.
    pub fn basis(self) -> Basis {
        match self {
            SpinLabel::Up | SpinLabel::Down => Basis::Sigma3,
            SpinLabel::Plus | SpinLabel::Minus => Basis::Sigma2Rl,
        }
    }

    /// Component index within its own basis (retained component of a record).
    pub fn component(self) -> usize {
        match self {
            SpinLabel::Up | SpinLabel::Plus => 0,
            SpinLabel::Down | SpinLabel::Minus => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinLabel::Up => "up",
            SpinLabel::Down => "down",
            SpinLabel::Plus => "plus",
            SpinLabel::Minus => "minus",
        }
    }
}

/// Measurement basis tag: `sigma_3` eigenstates or the circular R/L pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Sigma3,
    Sigma2Rl,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Sigma3 => "sigma3",
            Basis::Sigma2Rl => "sigma2_RL",
        }
    }
}

/// Pauli generator selecting the coin rotation axis in `R_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinAxis {
    Axis1,
    Axis3,
}

/// Direction of the conditional shift `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    Forward,
    Inverse,
}

/// Which single-step operator a matrix or spectrum was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkForm {
    /// Symmetric split-step form `R3 R1 T R1 R3` with half angles.
    Floquet,
    /// Hardware form `T R1(theta)` with one full-angle coin per step.
    Experiment,
}

impl WalkForm {
    pub fn name(self) -> &'static str {
        match self {
            WalkForm::Floquet => "floquet",
            WalkForm::Experiment => "experiment",
        }
    }
}

/// One disorder realization: per-site coin angles `(phi_q, theta_q)`, with an
/// optional per-step table when the disorder fluctuates in time.
#[derive(Clone, Debug)]
pub struct AngleField {
    phi: Vec<f64>,
    theta: Vec<f64>,
    /// Row-major `(step, site)` table; present only for dephasing disorder.
    theta_by_step: Option<StepTable>,
    /// `(base_seed, realization_index)` when drawn from a seeded stream.
    seed: Option<(u64, u64)>,
}

#[derive(Clone, Debug)]
struct StepTable {
    rows: usize,
    values: Vec<f64>,
}

impl AngleField {
    /// Static field: one `(phi_q, theta_q)` pair per site.
    pub fn new_static(phi: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if phi.len() != theta.len() {
            return Err(Error::LengthMismatch {
                expected: theta.len(),
                got: phi.len(),
            });
        }
        Ok(AngleField {
            phi,
            theta,
            theta_by_step: None,
            seed: None,
        })
    }

    /// Time-dependent field: `theta_rows` holds one row of site angles per
    /// step, row-major. The static `theta` view is the first row.
    pub fn new_time_dependent(phi: Vec<f64>, theta_rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = phi.len();
        let rows = theta_rows.len();
        if rows == 0 {
            return Err(Error::StepOutOfRange { step: 0, rows: 0 });
        }
        for row in &theta_rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let theta = theta_rows[0].clone();
        let values = theta_rows.into_iter().flatten().collect();
        Ok(AngleField {
            phi,
            theta,
            theta_by_step: Some(StepTable { rows, values }),
            seed: None,
        })
    }

    pub(crate) fn with_seed(mut self, base_seed: u64, index: u64) -> Self {
        self.seed = Some((base_seed, index));
        self
    }

    pub fn n_sites(&self) -> usize {
        self.theta.len()
    }

    pub fn time_dependent(&self) -> bool {
        self.theta_by_step.is_some()
    }

    /// Number of step rows, 1 for static fields.
    pub fn n_steps(&self) -> usize {
        self.theta_by_step.as_ref().map_or(1, |t| t.rows)
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Per-site theta; for time-dependent fields, the first step row.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Theta row for a given step (the static row regardless of `step` when
    /// the field is not time-dependent).
    pub fn theta_row(&self, step: usize) -> Result<&[f64]> {
        match &self.theta_by_step {
            None => Ok(&self.theta),
            Some(table) => {
                if step >= table.rows {
                    return Err(Error::StepOutOfRange {
                        step,
                        rows: table.rows,
                    });
                }
                let n = self.theta.len();
                Ok(&table.values[step * n..(step + 1) * n])
            }
        }
    }

    pub fn seed(&self) -> Option<(u64, u64)> {
        self.seed
    }

    /// Site mean of the static theta row.
    pub fn mean_theta(&self) -> f64 {
        self.theta.iter().sum::<f64>() / self.theta.len() as f64
    }

    /// Staggered mean `sum_q theta_q (-1)^q / N` of the static theta row.
    pub fn staggered_amplitude(&self) -> f64 {
        self.theta
            .iter()
            .enumerate()
            .map(|(i, &t)| if i % 2 == 0 { t } else { -t })
            .sum::<f64>()
            / self.theta.len() as f64
    }
}

/// Complex amplitude field `psi(q, sigma)` on the open lattice `[-L, L]`.
///
/// Amplitudes are stored in the `sigma_3` basis, site-major with spin
/// fastest. The state remembers the label it was initialized with and how
/// many full walk steps it has taken.
#[derive(Clone, Debug)]
pub struct WalkerState {
    amps: Vec<Complex64>,
    halfwidth: i32,
    input: SpinLabel,
    steps: usize,
}

impl WalkerState {
    /// Walker localized at `q0` in the given spin state.
    pub fn init_localized(q0: i32, spin: SpinLabel, halfwidth: i32) -> Result<Self> {
        if q0.abs() > halfwidth || halfwidth < 0 {
            return Err(Error::SiteOutOfRange { q0, halfwidth });
        }
        let n = (2 * halfwidth + 1) as usize;
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n];
        let base = 2 * (q0 + halfwidth) as usize;
        match spin {
            SpinLabel::Up => amps[base] = Complex64::new(1.0, 0.0),
            SpinLabel::Down => amps[base + 1] = Complex64::new(1.0, 0.0),
            // |+-> = (|up> +- i |down>)/sqrt(2)
            SpinLabel::Plus => {
                amps[base] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                amps[base + 1] = Complex64::new(0.0, FRAC_1_SQRT_2);
            }
            SpinLabel::Minus => {
                amps[base] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                amps[base + 1] = Complex64::new(0.0, -FRAC_1_SQRT_2);
            }
        }
        Ok(WalkerState {
            amps,
            halfwidth,
            input: spin,
            steps: 0,
        })
    }

    pub fn halfwidth(&self) -> i32 {
        self.halfwidth
    }

    pub fn n_sites(&self) -> usize {
        (2 * self.halfwidth + 1) as usize
    }

    pub fn input(&self) -> SpinLabel {
        self.input
    }

    /// Full walk steps taken so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    #[inline]
    fn idx(&self, q: i32, spin: Spin) -> usize {
        debug_assert!(q.abs() <= self.halfwidth);
        2 * (q + self.halfwidth) as usize + spin.index()
    }

    pub fn amp(&self, q: i32, spin: Spin) -> Complex64 {
        self.amps[self.idx(q, spin)]
    }

    pub fn set_amp(&mut self, q: i32, spin: Spin, value: Complex64) {
        let i = self.idx(q, spin);
        self.amps[i] = value;
    }

    /// Raw amplitudes, site-major with spin fastest, `q` from `-L` to `L`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<psi| sigma_2 |psi>` summed over sites.
    pub fn sigma2_expectation(&self) -> f64 {
        self.amps
            .chunks_exact(2)
            .map(|s| 2.0 * (s[0].conj() * s[1]).im)
            .sum()
    }

    /// Conditional shift `T` (`Forward`) or its adjoint (`Inverse`).
    ///
    /// Errors when a nonzero amplitude would be pushed off the lattice.
    pub fn apply_shift(&mut self, direction: ShiftDirection) -> Result<()> {
        let l = self.halfwidth;
        let n = self.n_sites();
        match direction {
            ShiftDirection::Forward => {
                // up moves right, down moves left
                if self.amp(l, Spin::Up) != Complex64::ZERO
                    || self.amp(-l, Spin::Down) != Complex64::ZERO
                {
                    return Err(Error::SupportAtEdge);
                }
                for i in (1..n).rev() {
                    self.amps[2 * i] = self.amps[2 * (i - 1)];
                }
                self.amps[0] = Complex64::ZERO;
                for i in 0..n - 1 {
                    self.amps[2 * i + 1] = self.amps[2 * (i + 1) + 1];
                }
                self.amps[2 * (n - 1) + 1] = Complex64::ZERO;
            }
            ShiftDirection::Inverse => {
                if self.amp(-l, Spin::Up) != Complex64::ZERO
                    || self.amp(l, Spin::Down) != Complex64::ZERO
                {
                    return Err(Error::SupportAtEdge);
                }
                for i in 0..n - 1 {
                    self.amps[2 * i] = self.amps[2 * (i + 1)];
                }
                self.amps[2 * (n - 1)] = Complex64::ZERO;
                for i in (1..n).rev() {
                    self.amps[2 * i + 1] = self.amps[2 * (i - 1) + 1];
                }
                self.amps[1] = Complex64::ZERO;
            }
        }
        Ok(())
    }

    /// Site-diagonal coin: multiplies the spinor at site `q` by
    /// `exp(-i angles[q] sigma_axis)`.
    pub fn apply_coin(&mut self, axis: SpinAxis, angles: &[f64]) -> Result<()> {
        let n = self.n_sites();
        if angles.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: angles.len(),
            });
        }
        match axis {
            SpinAxis::Axis1 => {
                for (site, &a) in self.amps.chunks_exact_mut(2).zip(angles) {
                    let (c, s) = (a.cos(), a.sin());
                    let up = site[0];
                    let down = site[1];
                    // [[cos a, -i sin a], [-i sin a, cos a]]
                    site[0] = c * up - Complex64::new(0.0, s) * down;
                    site[1] = -Complex64::new(0.0, s) * up + c * down;
                }
            }
            SpinAxis::Axis3 => {
                for (site, &a) in self.amps.chunks_exact_mut(2).zip(angles) {
                    let phase = Complex64::from_polar(1.0, -a);
                    site[0] *= phase;
                    site[1] *= phase.conj();
                }
            }
        }
        Ok(())
    }

    /// One split-step Floquet step `R3(phi/2) R1(theta/2) T R1(theta/2)
    /// R3(phi/2)`, rightmost factor first. `step_index` selects the theta
    /// row for time-dependent fields.
    pub fn step_floquet(&mut self, angles: &AngleField, step_index: usize) -> Result<()> {
        let n = self.n_sites();
        if angles.n_sites() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: angles.n_sites(),
            });
        }
        let theta = angles.theta_row(step_index)?;
        let half_theta: Vec<f64> = theta.iter().map(|t| 0.5 * t).collect();
        let half_phi: Vec<f64> = angles.phi().iter().map(|p| 0.5 * p).collect();
        self.apply_coin(SpinAxis::Axis3, &half_phi)?;
        self.apply_coin(SpinAxis::Axis1, &half_theta)?;
        self.apply_shift(ShiftDirection::Forward)?;
        self.apply_coin(SpinAxis::Axis1, &half_theta)?;
        self.apply_coin(SpinAxis::Axis3, &half_phi)?;
        self.steps += 1;
        Ok(())
    }

    /// One hardware-form step `T R1(theta)`: full-angle coin, then shift.
    pub fn step_experiment(&mut self, angles: &AngleField, step_index: usize) -> Result<()> {
        let n = self.n_sites();
        if angles.n_sites() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: angles.n_sites(),
            });
        }
        let theta = angles.theta_row(step_index)?;
        self.apply_coin(SpinAxis::Axis1, theta)?;
        self.apply_shift(ShiftDirection::Forward)?;
        self.steps += 1;
        Ok(())
    }
}

/// Dense one-step walk unitary on a periodic lattice of `angles.n_sites()`
/// sites (must be even so the sublattice operator stays consistent around
/// the ring). Row/column ordering is `(q, sigma)` site-major with spin
/// fastest: index `= 2 q + sigma`, `q = 0..N-1`. Time-dependent fields
/// contribute their first theta row.
pub fn build_unitary_matrix(angles: &AngleField, form: WalkForm) -> Result<Array2<Complex64>> {
    let n = angles.n_sites();
    if n % 2 != 0 {
        return Err(Error::OddSiteCount { n });
    }
    let mut u = shift_matrix(n);
    match form {
        WalkForm::Floquet => {
            // left blocks R3(phi/2) R1(theta/2), right blocks R1(theta/2) R3(phi/2)
            let left: Vec<[[Complex64; 2]; 2]> = angles
                .phi()
                .iter()
                .zip(angles.theta())
                .map(|(&p, &t)| mat2_mul(rot3(0.5 * p), rot1(0.5 * t)))
                .collect();
            let right: Vec<[[Complex64; 2]; 2]> = angles
                .phi()
                .iter()
                .zip(angles.theta())
                .map(|(&p, &t)| mat2_mul(rot1(0.5 * t), rot3(0.5 * p)))
                .collect();
            right_multiply_blocks(&mut u, &right);
            left_multiply_blocks(&mut u, &left);
        }
        WalkForm::Experiment => {
            let coins: Vec<[[Complex64; 2]; 2]> =
                angles.theta().iter().map(|&t| rot1(t)).collect();
            right_multiply_blocks(&mut u, &coins);
        }
    }
    Ok(u)
}

/// Periodic conditional shift as a dense matrix.
fn shift_matrix(n_sites: usize) -> Array2<Complex64> {
    let d = 2 * n_sites;
    let mut t = Array2::zeros((d, d));
    for q in 0..n_sites {
        let qp = (q + 1) % n_sites;
        let qm = (q + n_sites - 1) % n_sites;
        t[[2 * qp, 2 * q]] = Complex64::new(1.0, 0.0);
        t[[2 * qm + 1, 2 * q + 1]] = Complex64::new(1.0, 0.0);
    }
    t
}

/// `exp(-i a sigma_1)`.
fn rot1(a: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = (a.cos(), a.sin());
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ]
}

/// `exp(-i a sigma_3)`.
fn rot3(a: f64) -> [[Complex64; 2]; 2] {
    [
        [Complex64::from_polar(1.0, -a), Complex64::ZERO],
        [Complex64::ZERO, Complex64::from_polar(1.0, a)],
    ]
}

fn mat2_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `m <- diag(blocks) * m`, blocks acting on row pairs.
fn left_multiply_blocks(m: &mut Array2<Complex64>, blocks: &[[[Complex64; 2]; 2]]) {
    let d = m.ncols();
    for (q, b) in blocks.iter().enumerate() {
        for j in 0..d {
            let x = m[[2 * q, j]];
            let y = m[[2 * q + 1, j]];
            m[[2 * q, j]] = b[0][0] * x + b[0][1] * y;
            m[[2 * q + 1, j]] = b[1][0] * x + b[1][1] * y;
        }
    }
}

/// `m <- m * diag(blocks)`, blocks acting on column pairs.
fn right_multiply_blocks(m: &mut Array2<Complex64>, blocks: &[[[Complex64; 2]; 2]]) {
    let d = m.nrows();
    for (q, b) in blocks.iter().enumerate() {
        for i in 0..d {
            let x = m[[i, 2 * q]];
            let y = m[[i, 2 * q + 1]];
            m[[i, 2 * q]] = x * b[0][0] + y * b[1][0];
            m[[i, 2 * q + 1]] = x * b[0][1] + y * b[1][1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{assert_close, rand_state, rand_thetas, unitary_deviation};

    #[test]
    fn init_localized_basis_states() {
        let s = WalkerState::init_localized(0, SpinLabel::Up, 5).unwrap();
        assert_eq!(s.amp(0, Spin::Up), Complex64::new(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);

        let s = WalkerState::init_localized(0, SpinLabel::Minus, 5).unwrap();
        assert_close(s.amp(0, Spin::Up).re, FRAC_1_SQRT_2, 1e-15);
        assert_close(s.amp(0, Spin::Down).im, -FRAC_1_SQRT_2, 1e-15);
        // sigma_2 eigenvalue -1
        assert_close(s.sigma2_expectation(), -1.0, 1e-15);

        let s = WalkerState::init_localized(0, SpinLabel::Plus, 5).unwrap();
        assert_close(s.sigma2_expectation(), 1.0, 1e-15);
    }

    #[test]
    fn init_out_of_range() {
        assert!(matches!(
            WalkerState::init_localized(6, SpinLabel::Up, 5),
            Err(Error::SiteOutOfRange { .. })
        ));
    }

    #[test]
    fn shift_moves_basis_states() {
        let mut s = WalkerState::init_localized(0, SpinLabel::Up, 3).unwrap();
        s.apply_shift(ShiftDirection::Forward).unwrap();
        assert_eq!(s.amp(1, Spin::Up), Complex64::new(1.0, 0.0));
        assert_close(s.norm_sqr(), 1.0, 1e-15);

        let mut s = WalkerState::init_localized(0, SpinLabel::Down, 3).unwrap();
        s.apply_shift(ShiftDirection::Forward).unwrap();
        assert_eq!(s.amp(-1, Spin::Down), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn shift_inverse_undoes_forward() {
        let mut rng = crate::testutil::rng(11);
        let mut s = rand_state(&mut rng, 6, SpinLabel::Up);
        let before = s.amplitudes().to_vec();
        s.apply_shift(ShiftDirection::Forward).unwrap();
        s.apply_shift(ShiftDirection::Inverse).unwrap();
        for (a, b) in s.amplitudes().iter().zip(&before) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn shift_at_edge_is_an_error() {
        let mut s = WalkerState::init_localized(3, SpinLabel::Up, 3).unwrap();
        assert!(matches!(
            s.apply_shift(ShiftDirection::Forward),
            Err(Error::SupportAtEdge)
        ));
        // down component at +L moves inward, no loss
        let mut s = WalkerState::init_localized(3, SpinLabel::Down, 3).unwrap();
        s.apply_shift(ShiftDirection::Forward).unwrap();
        assert_eq!(s.amp(2, Spin::Down), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn coin_zero_angles_is_identity() {
        let mut rng = crate::testutil::rng(3);
        let mut s = rand_state(&mut rng, 4, SpinLabel::Up);
        let before = s.amplitudes().to_vec();
        let zeros = vec![0.0; s.n_sites()];
        s.apply_coin(SpinAxis::Axis1, &zeros).unwrap();
        s.apply_coin(SpinAxis::Axis3, &zeros).unwrap();
        assert_eq!(s.amplitudes(), &before[..]);
    }

    #[test]
    fn coin_axis1_matrix_row() {
        let mut s = WalkerState::init_localized(0, SpinLabel::Up, 2).unwrap();
        let angles = vec![std::f64::consts::FRAC_PI_4; 5];
        s.apply_coin(SpinAxis::Axis1, &angles).unwrap();
        assert_close(s.amp(0, Spin::Up).re, (std::f64::consts::FRAC_PI_4).cos(), 1e-15);
        assert_close(s.amp(0, Spin::Down).im, -(std::f64::consts::FRAC_PI_4).sin(), 1e-15);
    }

    #[test]
    fn coin_axis3_is_a_pure_phase() {
        let mut s = WalkerState::init_localized(0, SpinLabel::Up, 2).unwrap();
        let angles = vec![std::f64::consts::FRAC_PI_2; 5];
        s.apply_coin(SpinAxis::Axis3, &angles).unwrap();
        let a = s.amp(0, Spin::Up);
        assert_close(a.re, 0.0, 1e-15);
        assert_close(a.im, -1.0, 1e-15);
        assert_close(s.norm_sqr(), 1.0, 1e-15);
    }

    #[test]
    fn coin_length_mismatch() {
        let mut s = WalkerState::init_localized(0, SpinLabel::Up, 2).unwrap();
        assert!(matches!(
            s.apply_coin(SpinAxis::Axis1, &[0.0; 3]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn coin_half_angle_composition() {
        // two coins on the same axis compose by adding angles
        let mut rng = crate::testutil::rng(17);
        let l = 5;
        let n = (2 * l + 1) as usize;
        let a = rand_thetas(&mut rng, n, 1.3);
        let b = rand_thetas(&mut rng, n, 0.7);
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();

        let mut s1 = rand_state(&mut rng, l, SpinLabel::Plus);
        let mut s2 = s1.clone();
        s1.apply_coin(SpinAxis::Axis1, &a).unwrap();
        s1.apply_coin(SpinAxis::Axis1, &b).unwrap();
        s2.apply_coin(SpinAxis::Axis1, &sum).unwrap();
        for (x, y) in s1.amplitudes().iter().zip(s2.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn floquet_step_reduces_to_shift_at_zero_angles() {
        let field = AngleField::new_static(vec![0.0; 7], vec![0.0; 7]).unwrap();
        let mut s = WalkerState::init_localized(0, SpinLabel::Up, 3).unwrap();
        s.step_floquet(&field, 0).unwrap();
        assert_eq!(s.amp(1, Spin::Up), Complex64::new(1.0, 0.0));
        assert_eq!(s.steps(), 1);
    }

    #[test]
    fn floquet_quarter_distribution_at_theta_half_pi() {
        // phi = 0, theta = pi/2, one step from (0, up):
        // P(+-1, up/down) = 1/4 each, by hand multiplication of
        // R1(pi/4) T R1(pi/4) on the basis state.
        let n = 5;
        let field =
            AngleField::new_static(vec![0.0; n], vec![std::f64::consts::FRAC_PI_2; n]).unwrap();
        let mut s = WalkerState::init_localized(0, SpinLabel::Up, 2).unwrap();
        s.step_floquet(&field, 0).unwrap();
        for q in [-1, 1] {
            for spin in [Spin::Up, Spin::Down] {
                assert_close(s.amp(q, spin).norm_sqr(), 0.25, 1e-14);
            }
        }
        assert_eq!(s.amp(0, Spin::Up), Complex64::ZERO);
    }

    #[test]
    fn unitarity_over_many_steps() {
        let mut rng = crate::testutil::rng(29);
        let t_max = 40;
        let l = t_max + 1;
        let n = (2 * l + 1) as usize;
        let field = AngleField::new_static(
            rand_thetas(&mut rng, n, 0.9),
            rand_thetas(&mut rng, n, 1.4),
        )
        .unwrap();
        let mut s = WalkerState::init_localized(0, SpinLabel::Minus, l).unwrap();
        for step in 0..t_max as usize {
            s.step_floquet(&field, step).unwrap();
        }
        assert_close(s.norm_sqr(), 1.0, 1e-10);
    }

    #[test]
    fn light_cone_is_exact() {
        let mut rng = crate::testutil::rng(31);
        let l = 12;
        let n = (2 * l + 1) as usize;
        let field = AngleField::new_static(
            rand_thetas(&mut rng, n, 0.4),
            rand_thetas(&mut rng, n, 1.5),
        )
        .unwrap();
        let mut s = WalkerState::init_localized(0, SpinLabel::Plus, l).unwrap();
        for step in 0..8 {
            s.step_floquet(&field, step).unwrap();
            let t = (step + 1) as i32;
            for q in -l..=l {
                if q.abs() > t {
                    assert_eq!(s.amp(q, Spin::Up), Complex64::ZERO);
                    assert_eq!(s.amp(q, Spin::Down), Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn experiment_step_at_zero_theta_is_shift() {
        let field = AngleField::new_static(vec![0.0; 7], vec![0.0; 7]).unwrap();
        let mut s = WalkerState::init_localized(0, SpinLabel::Down, 3).unwrap();
        s.step_experiment(&field, 0).unwrap();
        assert_eq!(s.amp(-1, Spin::Down), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn time_dependent_field_row_selection() {
        let rows = vec![vec![0.0; 5], vec![std::f64::consts::FRAC_PI_2; 5]];
        let field = AngleField::new_time_dependent(vec![0.0; 5], rows).unwrap();
        assert!(field.time_dependent());
        assert_eq!(field.n_steps(), 2);
        assert_eq!(field.theta_row(0).unwrap()[0], 0.0);
        assert!(field.theta_row(1).unwrap()[0] > 1.0);
        assert!(matches!(
            field.theta_row(2),
            Err(Error::StepOutOfRange { .. })
        ));
    }

    #[test]
    fn unitary_matrix_is_unitary() {
        let mut rng = crate::testutil::rng(5);
        let n = 8;
        let field = AngleField::new_static(
            rand_thetas(&mut rng, n, 0.8),
            rand_thetas(&mut rng, n, 1.2),
        )
        .unwrap();
        for form in [WalkForm::Floquet, WalkForm::Experiment] {
            let u = build_unitary_matrix(&field, form).unwrap();
            assert!(unitary_deviation(&u) < 1e-12);
        }
    }

    #[test]
    fn unitary_matrix_zero_angles_is_shift_permutation() {
        let field = AngleField::new_static(vec![0.0; 4], vec![0.0; 4]).unwrap();
        let u = build_unitary_matrix(&field, WalkForm::Floquet).unwrap();
        let t = shift_matrix(4);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(u[[i, j]], t[[i, j]]);
            }
        }
    }

    #[test]
    fn unitary_matrix_rejects_odd_site_count() {
        let field = AngleField::new_static(vec![0.0; 5], vec![0.0; 5]).unwrap();
        assert!(matches!(
            build_unitary_matrix(&field, WalkForm::Floquet),
            Err(Error::OddSiteCount { n: 5 })
        ));
    }
}
