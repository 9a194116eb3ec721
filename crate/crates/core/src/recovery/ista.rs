//! Iterative soft-thresholding for `min 0.5 |b - A a|^2 + lambda |a|_1`.

use std::time::Instant;

use super::dct::{dct2, idct2, CoeffPlane};
use super::operator::{LinearOperator, MaskedDct};
use crate::constants::{
    CONTINUATION_PERIOD, CONTINUATION_START_FRACTION, DEFAULT_LAMBDA, DEFAULT_MAX_ITERS, DEFAULT_TOL,
    MONOTONICITY_SLACK,
};
use crate::error::{Error, Result};
use crate::frame_io::Frame;
use crate::measurement::{embed, MeasurementSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    /// Target l1 weight.
    pub lambda: f64,
    pub max_iters: usize,
    /// Stop once the relative objective change drops below this (only
    /// checked after the weight has reached `lambda`).
    pub tol: f64,
    /// Overwrite retained pixels with their measured values after solving.
    pub enforce_data_consistency: bool,
    /// Start from a large weight and halve it every
    /// [`CONTINUATION_PERIOD`] iterations down to `lambda`.
    pub continuation: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
            enforce_data_consistency: true,
            continuation: true,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Parameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Parameter("max_iters must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Parameter(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport {
    pub iterations_used: usize,
    /// Penalized objective at the weight in force on the last iteration.
    pub final_objective: f64,
    /// `|b - A a|_2` at the returned solution.
    pub residual_norm: f64,
    pub elapsed_seconds: f64,
    pub final_lambda: f64,
    /// Objective after each iteration, starting with the initial point.
    pub objective_history: Vec<f64>,
}

/// Scalar prox of `t |.|`.
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

fn norm2_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Proximal gradient descent with step `1 / L` from `x0`.
pub fn ista<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    x0: Vec<f64>,
    params: &SolverParams,
) -> Result<(Vec<f64>, RecoveryReport)> {
    let start = Instant::now();
    params.validate()?;
    if b.len() != op.rows() || x0.len() != op.cols() {
        return Err(Error::Parameter(format!(
            "operator is {}x{}, got {} measurements and {} unknowns",
            op.rows(),
            op.cols(),
            b.len(),
            x0.len()
        )));
    }
    if b.is_empty() {
        return Err(Error::Parameter("no measurements".into()));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("measurements contain non-finite values".into()));
    }
    let lip = op.lipschitz();
    if !(lip.is_finite() && lip > 0.0) {
        return Err(Error::Numeric(format!("operator norm bound {lip} unusable")));
    }
    let step = 1.0 / lip;

    let mut lambda = params.lambda;
    if params.continuation {
        let mut atb = vec![0.0; op.cols()];
        op.adjoint(b, &mut atb);
        let peak = atb.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        lambda = lambda.max(CONTINUATION_START_FRACTION * peak);
    }

    let mut x = x0;
    let mut ax = vec![0.0; op.rows()];
    op.apply(&x, &mut ax);
    let mut residual: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut fit = 0.5 * norm2_sq(&residual);
    let mut objective = fit + lambda * norm1(&x);
    let mut history = vec![objective];
    let mut grad = vec![0.0; op.cols()];
    let mut iterations = 0;

    for k in 0..params.max_iters {
        if params.continuation && k > 0 && k % CONTINUATION_PERIOD == 0 && lambda > params.lambda {
            lambda = (0.5 * lambda).max(params.lambda);
        }
        let before = fit + lambda * norm1(&x);

        op.adjoint(&residual, &mut grad);
        for (xi, gi) in x.iter_mut().zip(&grad) {
            *xi = soft_threshold(*xi + step * gi, step * lambda);
        }
        op.apply(&x, &mut ax);
        for ((r, bi), ai) in residual.iter_mut().zip(b).zip(&ax) {
            *r = bi - ai;
        }
        fit = 0.5 * norm2_sq(&residual);
        objective = fit + lambda * norm1(&x);
        iterations = k + 1;
        history.push(objective);

        if !objective.is_finite() {
            return Err(Error::Numeric(format!(
                "objective became {objective} at iteration {iterations}"
            )));
        }
        if objective > before + MONOTONICITY_SLACK * before.max(1.0) {
            return Err(Error::Internal(format!(
                "objective increased from {before} to {objective} at iteration {iterations}"
            )));
        }
        let change = (before - objective).abs() / before.max(f64::MIN_POSITIVE);
        if lambda <= params.lambda && change < params.tol {
            break;
        }
    }

    let report = RecoveryReport {
        iterations_used: iterations,
        final_objective: objective,
        residual_norm: (2.0 * fit).sqrt(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        final_lambda: lambda,
        objective_history: history,
    };
    Ok((x, report))
}

/// Recover the DCT coefficients of a frame from its retained pixels.
/// Starts from the transform of the zero-filled frame.
pub fn solve_l1(meas: &MeasurementSet, params: &SolverParams) -> Result<(CoeffPlane, RecoveryReport)> {
    let op = MaskedDct::new(&meas.mask);
    let mut x0 = embed(meas).into_data();
    op.transform().forward(&mut x0);
    let (coeffs, report) = ista(&op, &meas.values, x0, params)?;
    let plane = CoeffPlane::new(meas.mask.width(), meas.mask.height(), coeffs)?;
    Ok((plane, report))
}

/// Solve, synthesize, clamp to `[0, 1]`, and optionally restore the
/// measured pixels exactly.
pub fn reconstruct_frame(meas: &MeasurementSet, params: &SolverParams) -> Result<(Frame, RecoveryReport)> {
    let start = Instant::now();
    let (plane, mut report) = solve_l1(meas, params)?;
    let mut frame = idct2(&plane).with_index(meas.frame_index);
    frame.clamp_unit();
    if params.enforce_data_consistency {
        let data = frame.data_mut();
        for (&i, &v) in meas.mask.indices().iter().zip(&meas.values) {
            data[i] = v;
        }
    }
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok((frame, report))
}

/// Zero-filled frame: the adjoint of the selection, no solve.
pub fn zero_fill(meas: &MeasurementSet) -> Frame {
    embed(meas)
}

/// `dct2` of the zero-filled frame, the solver's starting point.
pub fn initial_coefficients(meas: &MeasurementSet) -> CoeffPlane {
    dct2(&embed(meas))
}
