//! Logical qubit on the two-qubit subspace span{|01⟩, |10⟩}.
//!
//! With `|0_L⟩ = |01⟩` and `|1_L⟩ = |10⟩` the logical Paulis are
//! `σ^L_z = (σ_z⊗I − I⊗σ_z)/2` and `σ^L_y = (σ_y⊗σ_x − σ_x⊗σ_y)/2`. Setting
//! `u_{z1I2} = −u_{I1z2} = u^L_z/2` and `u_{y1x2} = −u_{x1y2} = u^L_y/2`
//! turns the physical Hamiltonian into `u^L_z σ^L_z + u^L_y σ^L_y` on the
//! logical block and zero on `|00⟩`, `|11⟩`.
//!
//! Basis ordering is `|q1 q2⟩ ↦ 2·q1 + q2`.

use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bloch::{state_from_angles, BlochAngles, StateVector2};
use crate::error::{Error, Result};
use crate::ode::rk4_piecewise;
use crate::scalar::Real;
use crate::schedule::{ControlField, Schedule};

pub type Mat4<T> = [[Complex<T>; 4]; 4];
type Mat2<T> = [[Complex<T>; 2]; 2];

/// Eigenvalue slack allowed when testing positive semidefiniteness.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Hermiticity and trace tolerance for density and coefficient matrices.
pub const MATRIX_TOLERANCE: f64 = 1e-12;

fn cz<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn cr<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn zeros4<T: Real>() -> Mat4<T> {
    [[cz(); 4]; 4]
}

fn pauli<T: Real>(which: char) -> Mat2<T> {
    let (o, z) = (cr(T::one()), cz());
    let i = Complex::new(T::zero(), T::one());
    match which {
        'i' => [[o, z], [z, o]],
        'x' => [[z, o], [o, z]],
        'y' => [[z, -i], [i, z]],
        'z' => [[o, z], [z, -o]],
        _ => unreachable!("unknown Pauli label"),
    }
}

pub(crate) fn kron<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat4<T> {
    let mut out = zeros4();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `σ_a ⊗ σ_b` for Pauli labels in `{i, x, y, z}`.
pub fn pauli_product<T: Real>(a: char, b: char) -> Mat4<T> {
    kron(&pauli(a), &pauli(b))
}

pub fn matmul<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = zeros4();
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = cz();
            for k in 0..4 {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn adjoint<T: Real>(a: &Mat4<T>) -> Mat4<T> {
    let mut out = zeros4();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

fn add_scaled<T: Real>(acc: &mut Mat4<T>, a: &Mat4<T>, s: Complex<T>) {
    for i in 0..4 {
        for j in 0..4 {
            acc[i][j] += a[i][j] * s;
        }
    }
}

fn sub<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = *a;
    add_scaled(&mut out, b, cr(-T::one()));
    out
}

fn commutator<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    sub(&matmul(a, b), &matmul(b, a))
}

pub fn trace<T: Real>(a: &Mat4<T>) -> Complex<T> {
    (0..4).map(|i| a[i][i]).fold(cz(), |x, y| x + y)
}

pub fn frobenius<T: Real>(a: &Mat4<T>) -> T {
    a.iter().flatten().map(|z| z.norm_sqr()).fold(T::zero(), |x, y| x + y).sqrt()
}

fn apply4<T: Real>(a: &Mat4<T>, v: &[Complex<T>; 4]) -> [Complex<T>; 4] {
    let mut out = [cz(); 4];
    for (i, o) in out.iter_mut().enumerate() {
        for k in 0..4 {
            *o += a[i][k] * v[k];
        }
    }
    out
}

fn outer<T: Real>(v: &[Complex<T>; 4]) -> Mat4<T> {
    let mut out = zeros4();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = v[i] * v[j].conj();
        }
    }
    out
}

fn hermitian_deviation(a: &[Vec<Complex<f64>>]) -> f64 {
    let n = a.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[i][j] - a[j][i].conj()).norm());
        }
    }
    worst
}

/// Cholesky test of `A + tol·I` for a Hermitian `A`.
fn is_psd(a: &[Vec<Complex<f64>>], tol: f64) -> bool {
    let n = a.len();
    let mut l = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut d = a[j][j].re + tol;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[j][j] = Complex::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / d;
        }
    }
    true
}

fn to_f64_rows<T: Real>(rows: impl Iterator<Item = Vec<Complex<T>>>) -> Vec<Vec<Complex<f64>>> {
    rows.map(|r| r.into_iter().map(|z| Complex::new(z.re.as_f64(), z.im.as_f64())).collect())
        .collect()
}

/// `(σ^L_z, σ^L_y)` as 4×4 matrices.
pub fn logical_operators<T: Real>() -> (Mat4<T>, Mat4<T>) {
    let half = cr(T::lit(0.5));
    let mut lz = zeros4();
    add_scaled(&mut lz, &pauli_product('z', 'i'), half);
    add_scaled(&mut lz, &pauli_product('i', 'z'), -half);
    let mut ly = zeros4();
    add_scaled(&mut ly, &pauli_product('y', 'x'), half);
    add_scaled(&mut ly, &pauli_product('x', 'y'), -half);
    (lz, ly)
}

/// Physical control amplitudes of the four two-qubit Hamiltonian terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalControls<T> {
    pub z1_i2: T,
    pub i1_z2: T,
    pub y1_x2: T,
    pub x1_y2: T,
}

impl<T: Real> PhysicalControls<T> {
    pub fn from_logical(u_l_z: T, u_l_y: T) -> Self {
        let half = T::lit(0.5);
        Self { z1_i2: half * u_l_z, i1_z2: -half * u_l_z, y1_x2: half * u_l_y, x1_y2: -half * u_l_y }
    }

    /// `u σz⊗I + u' I⊗σz + v σy⊗σx + v' σx⊗σy`.
    pub fn hamiltonian(&self) -> Mat4<T> {
        let mut h = zeros4();
        add_scaled(&mut h, &pauli_product('z', 'i'), cr(self.z1_i2));
        add_scaled(&mut h, &pauli_product('i', 'z'), cr(self.i1_z2));
        add_scaled(&mut h, &pauli_product('y', 'x'), cr(self.y1_x2));
        add_scaled(&mut h, &pauli_product('x', 'y'), cr(self.x1_y2));
        h
    }
}

/// Time-dependent two-qubit Hamiltonian obtained by lifting a logical schedule.
#[derive(Debug, Clone, Copy)]
pub struct LiftedHamiltonian<'a, T> {
    schedule: &'a Schedule<T>,
}

impl<'a, T: Real> LiftedHamiltonian<'a, T> {
    pub fn schedule(&self) -> &'a Schedule<T> {
        self.schedule
    }

    pub fn physical_controls(&self, t: T) -> PhysicalControls<T> {
        let (uz, uy) = self.schedule.controls(t);
        PhysicalControls::from_logical(uz, uy)
    }

    pub fn at(&self, t: T) -> Mat4<T> {
        self.physical_controls(t).hamiltonian()
    }
}

pub fn lift_controls<T: Real>(logical: &Schedule<T>) -> LiftedHamiltonian<'_, T> {
    LiftedHamiltonian { schedule: logical }
}

/// Normalized state over `{|00⟩, |01⟩, |10⟩, |11⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState<T> {
    amps: [Complex<T>; 4],
}

impl<T: Real> TwoQubitState<T> {
    pub fn new(amps: [Complex<T>; 4]) -> Result<Self> {
        let n = amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |x, y| x + y);
        if !n.is_finite() || (n - T::one()).abs() > T::tol(MATRIX_TOLERANCE) {
            return Err(Error::NotNormalized(n.as_f64()));
        }
        Ok(Self { amps })
    }

    /// `a|0_L⟩ + b|1_L⟩ = a|01⟩ + b|10⟩`.
    pub fn from_logical(psi: &StateVector2<T>) -> Self {
        let [a, b] = psi.amplitudes();
        Self { amps: [cz(), a, b, cz()] }
    }

    pub fn amplitudes(&self) -> [Complex<T>; 4] {
        self.amps
    }

    /// Population outside the logical subspace.
    pub fn leakage(&self) -> T {
        self.amps[0].norm_sqr() + self.amps[3].norm_sqr()
    }

    /// Projection onto the logical basis, renormalized; `None` when fully leaked.
    pub fn logical_state(&self) -> Option<StateVector2<T>> {
        let n = self.amps[1].norm_sqr() + self.amps[2].norm_sqr();
        if n <= T::zero() {
            return None;
        }
        Some(StateVector2::normalized(self.amps[1], self.amps[2]))
    }
}

fn check_step<T: Real>(t_f: T, dt: T, max_fraction: f64) -> Result<()> {
    if !(dt > T::zero()) {
        return Err(Error::InvalidStep(format!("dt={dt} must be positive")));
    }
    if t_f > T::zero() && dt > t_f * T::lit(max_fraction) {
        return Err(Error::InvalidStep(format!("dt={dt} exceeds t_f*{max_fraction} for t_f={t_f}")));
    }
    Ok(())
}

/// Integrates the 4-dimensional Schrödinger equation under the lifted Hamiltonian.
///
/// Returns the final state and the largest leakage seen at any step.
pub fn simulate_encoded<T: Real>(
    psi0_logical: &BlochAngles<T>,
    sched: &Schedule<T>,
    dt: T,
) -> Result<(TwoQubitState<T>, T)> {
    check_step(sched.t_f(), dt, 1e-2)?;
    let start = TwoQubitState::from_logical(&state_from_angles(psi0_logical));
    if sched.t_f() == T::zero() {
        return Ok((start, start.leakage()));
    }
    let lifted = lift_controls(sched);
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut leakage = start.leakage();
    let amps = rk4_piecewise(
        start.amps,
        sched.t_f(),
        dt,
        sched.breakpoints(),
        |t, y| {
            let hy = apply4(&lifted.at(t), y);
            hy.map(|z| z * minus_i)
        },
        |_, y| {
            let n = y.iter().map(|a| a.norm_sqr()).fold(T::zero(), |x, v| x + v).sqrt();
            for a in y.iter_mut() {
                *a = *a / n;
            }
            leakage = leakage.max(y[0].norm_sqr() + y[3].norm_sqr());
        },
    );
    Ok((TwoQubitState { amps }, leakage))
}

/// Hermitian, unit-trace, positive semidefinite 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4<T> {
    m: Mat4<T>,
}

impl<T: Real> DensityMatrix4<T> {
    pub fn new(m: Mat4<T>) -> Result<Self> {
        let rows = to_f64_rows(m.iter().map(|r| r.to_vec()));
        let herm = hermitian_deviation(&rows);
        if !(herm <= T::tol(MATRIX_TOLERANCE).as_f64()) {
            return Err(Error::NotHermitian(herm));
        }
        let tr = trace(&m);
        if (tr - cr(T::one())).norm() > T::tol(MATRIX_TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!("trace {} != 1", tr)));
        }
        if !is_psd(&rows, T::tol(PSD_TOLERANCE).as_f64()) {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(Self { m })
    }

    pub fn from_pure(psi: &TwoQubitState<T>) -> Self {
        Self { m: outer(&psi.amps) }
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.m
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn overlap(&self, psi: &TwoQubitState<T>) -> T {
        let rv = apply4(&self.m, &psi.amps);
        psi.amps.iter().zip(&rv).map(|(a, b)| a.conj() * b).fold(cz(), |x, y| x + y).re
    }

    /// Largest elementwise distance to another density matrix.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }
}

/// Lindblad operators `F_i` and their Hermitian PSD coefficient matrix `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSpec<T> {
    operators: Vec<Mat4<T>>,
    alpha: Vec<Vec<Complex<T>>>,
}

#[derive(Serialize, Deserialize)]
struct LindbladDoc {
    operators: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(alias = "coefficients")]
    alpha: Vec<Vec<[f64; 2]>>,
}

impl<T: Real> LindbladSpec<T> {
    pub fn new(operators: Vec<Mat4<T>>, alpha: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n = operators.len();
        if alpha.len() != n || alpha.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("alpha must be {n}x{n} to match {n} operators")));
        }
        let rows = to_f64_rows(alpha.iter().cloned());
        let herm = hermitian_deviation(&rows);
        if !(herm <= T::tol(MATRIX_TOLERANCE).as_f64()) {
            return Err(Error::NotHermitian(herm));
        }
        if !is_psd(&rows, T::tol(PSD_TOLERANCE).as_f64()) {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(Self { operators, alpha })
    }

    /// Single operator `σ_z⊗I + I⊗σ_z` with rate `γ`.
    pub fn collective_dephasing(gamma: T) -> Result<Self> {
        let mut f = pauli_product('z', 'i');
        add_scaled(&mut f, &pauli_product('i', 'z'), cr(T::one()));
        Self::new(vec![f], vec![vec![cr(gamma)]])
    }

    pub fn operators(&self) -> &[Mat4<T>] {
        &self.operators
    }

    pub fn alpha(&self) -> &[Vec<Complex<T>>] {
        &self.alpha
    }

    /// Reads `{"operators": [4×4 of [re, im]], "alpha": [n×n of [re, im]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LindbladDoc = serde_json::from_str(text)?;
        let mut operators = Vec::with_capacity(doc.operators.len());
        for (k, op) in doc.operators.iter().enumerate() {
            if op.len() != 4 || op.iter().any(|r| r.len() != 4) {
                return Err(Error::Document(format!("operator {k} is not 4x4")));
            }
            let mut m = zeros4();
            for i in 0..4 {
                for j in 0..4 {
                    let [re, im] = op[i][j];
                    m[i][j] = Complex::new(T::lit(re), T::lit(im));
                }
            }
            operators.push(m);
        }
        let alpha = doc
            .alpha
            .iter()
            .map(|r| r.iter().map(|&[re, im]| Complex::new(T::lit(re), T::lit(im))).collect())
            .collect();
        Self::new(operators, alpha)
    }

    pub fn to_json(&self) -> String {
        let pair = |z: &Complex<T>| [z.re.as_f64(), z.im.as_f64()];
        let doc = LindbladDoc {
            operators: self.operators.iter().map(|m| m.iter().map(|r| r.iter().map(pair).collect()).collect()).collect(),
            alpha: self.alpha.iter().map(|r| r.iter().map(pair).collect()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain numeric document")
    }
}

/// `½ Σ α_ij ([F_i, ρF_j†] + [F_iρ, F_j†])` for an arbitrary matrix `ρ`.
pub(crate) fn lindbladian<T: Real>(rho: &Mat4<T>, spec: &LindbladSpec<T>) -> Mat4<T> {
    let mut out = zeros4();
    let half = cr(T::lit(0.5));
    for (i, fi) in spec.operators.iter().enumerate() {
        let fi_rho = matmul(fi, rho);
        for (j, fj) in spec.operators.iter().enumerate() {
            let a = spec.alpha[i][j];
            if a == cz() {
                continue;
            }
            let fj_dag = adjoint(fj);
            let term = commutator(fi, &matmul(rho, &fj_dag));
            let term2 = commutator(&fi_rho, &fj_dag);
            add_scaled(&mut out, &term, a * half);
            add_scaled(&mut out, &term2, a * half);
        }
    }
    out
}

pub fn lindblad_apply<T: Real>(rho: &DensityMatrix4<T>, spec: &LindbladSpec<T>) -> Mat4<T> {
    lindbladian(&rho.m, spec)
}

fn flatten<T: Real>(m: &Mat4<T>) -> [Complex<T>; 16] {
    let mut out = [cz(); 16];
    for i in 0..4 {
        for j in 0..4 {
            out[4 * i + j] = m[i][j];
        }
    }
    out
}

fn unflatten<T: Real>(v: &[Complex<T>; 16]) -> Mat4<T> {
    let mut out = zeros4();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = v[4 * i + j];
        }
    }
    out
}

/// RK4 integration of `dρ/dt = −i[H(t), ρ] + L(ρ)`, calling `observe(t, ρ)` after every step.
pub fn simulate_master_equation_with<T: Real>(
    rho0: &DensityMatrix4<T>,
    sched: &Schedule<T>,
    spec: &LindbladSpec<T>,
    dt: T,
    mut observe: impl FnMut(T, &Mat4<T>),
) -> Result<DensityMatrix4<T>> {
    check_step(sched.t_f(), dt, 1e-3)?;
    if sched.t_f() == T::zero() {
        return Ok(*rho0);
    }
    let lifted = lift_controls(sched);
    let minus_i = Complex::new(T::zero(), -T::one());
    let half = cr(T::lit(0.5));
    let v = rk4_piecewise(
        flatten(&rho0.m),
        sched.t_f(),
        dt,
        sched.breakpoints(),
        |t, y| {
            let rho = unflatten(y);
            let mut d = lindbladian(&rho, spec);
            add_scaled(&mut d, &commutator(&lifted.at(t), &rho), minus_i);
            flatten(&d)
        },
        |t, y| {
            let m = unflatten(y);
            let mut h = m;
            add_scaled(&mut h, &adjoint(&m), cr(T::one()));
            let mut sym = zeros4();
            add_scaled(&mut sym, &h, half);
            *y = flatten(&sym);
            observe(t, &sym);
        },
    );
    Ok(DensityMatrix4 { m: unflatten(&v) })
}

pub fn simulate_master_equation<T: Real>(
    rho0: &DensityMatrix4<T>,
    sched: &Schedule<T>,
    spec: &LindbladSpec<T>,
    dt: T,
) -> Result<DensityMatrix4<T>> {
    simulate_master_equation_with(rho0, sched, spec, dt, |_, _| {})
}

/// Logical pure states used to probe the decoherence-free condition: the six
/// cardinal states plus 20 random ones drawn from `seed`.
pub fn dfs_probe_states<T: Real>(seed: u64) -> Vec<StateVector2<T>> {
    let s = T::FRAC_1_SQRT_2();
    let o = T::one();
    let z = T::zero();
    let mut states = vec![
        StateVector2::from_array_unchecked([cr(o), cz()]),
        StateVector2::from_array_unchecked([cz(), cr(o)]),
        StateVector2::from_array_unchecked([cr(s), cr(s)]),
        StateVector2::from_array_unchecked([cr(s), cr(-s)]),
        StateVector2::from_array_unchecked([cr(s), Complex::new(z, s)]),
        StateVector2::from_array_unchecked([cr(s), Complex::new(z, -s)]),
    ];
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..20 {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        let theta = T::lit((1.0 - 2.0 * u).acos());
        let phi = T::lit(std::f64::consts::TAU * v);
        let g = BlochAngles::new(theta, phi).expect("sampled angles are in range");
        states.push(state_from_angles(&g));
    }
    states
}

/// Largest Frobenius norm of `L(|ψ⟩⟨ψ|)` over [`dfs_probe_states`].
pub fn dfs_residual<T: Real>(spec: &LindbladSpec<T>, seed: u64) -> T {
    dfs_probe_states::<T>(seed)
        .iter()
        .map(|psi| {
            let rho = DensityMatrix4::from_pure(&TwoQubitState::from_logical(psi));
            frobenius(&lindblad_apply(&rho, spec))
        })
        .fold(T::zero(), T::max)
}
