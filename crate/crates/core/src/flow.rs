//! Fixed-step integration of polynomial dynamical systems `x' = X(x)` with
//! invariant monitoring.
//!
//! Logged quantities are user-supplied polynomials evaluated in `f64` and, for
//! Lax systems, the power traces `I_k = Tr A_x^k` computed from the numeric
//! matrix `A_x = ad_x`. The spectrum of `A_x` is tracked through the
//! coefficients of its characteristic polynomial (Faddeev-LeVerrier).

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::algebra::{AlgebraVector, LieAlgebra};
use crate::endo::CanonicalPackage;
use crate::error::{Error, Result};
use crate::lax::LaxSystem;
use crate::poly::MultiPoly;
use crate::rational::{to_f64, Rational};
use crate::tensor::PolyVectorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Euler,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rk4" => Ok(Method::Rk4),
            "euler" => Ok(Method::Euler),
            other => Err(Error::InvalidFlow(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::Euler => "euler",
        })
    }
}

/// A polynomial prepared for fast floating-point evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &MultiPoly) -> Self {
        CompiledPoly {
            terms: p
                .terms()
                .map(|(m, c)| {
                    let factors = m
                        .exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as i32))
                        .collect();
                    (to_f64(c), factors)
                })
                .collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, factors)| {
                factors.iter().fold(*c, |acc, &(i, e)| {
                    acc * if e == 1 { x[i] } else { x[i].powi(e) }
                })
            })
            .sum()
    }
}

#[derive(Clone, Debug)]
struct CompiledField(Vec<CompiledPoly>);

impl CompiledField {
    fn new(f: &PolyVectorField) -> Self {
        CompiledField(f.components().iter().map(CompiledPoly::new).collect())
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(&self.0) {
            *o = p.eval(x);
        }
    }
}

/// Row-major `n x n` matrices `ad_{e_i}`; `A_x = sum_i x_i ad_{e_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointMonitor {
    n: usize,
    basis: Vec<Vec<f64>>,
    /// Number of power traces logged.
    pub max_k: usize,
}

impl AdjointMonitor {
    pub fn new(algebra: &LieAlgebra, max_k: usize) -> Self {
        let n = algebra.dim();
        let basis = (0..n)
            .map(|i| {
                let m = algebra
                    .ad(&AlgebraVector::basis(n, i))
                    .expect("basis vector");
                (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| to_f64(&m[(r, c)]))
                    .collect()
            })
            .collect();
        AdjointMonitor { n, basis, max_k }
    }

    pub fn matrix(&self, x: &[f64]) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (xi, b) in x.iter().zip(&self.basis) {
            if *xi != 0.0 {
                for (o, v) in a.iter_mut().zip(b) {
                    *o += xi * v;
                }
            }
        }
        a
    }

    /// `Tr A_x^k` for `k = 1..=max_k`.
    pub fn power_traces(&self, x: &[f64]) -> Vec<f64> {
        let a = self.matrix(x);
        let mut p = a.clone();
        let mut out = Vec::with_capacity(self.max_k);
        for k in 1..=self.max_k {
            if k > 1 {
                p = matmul(&p, &a, self.n);
            }
            out.push(trace(&p, self.n));
        }
        out
    }

    /// Coefficients `c_1..c_n` of `det(t I - A_x) = t^n + c_1 t^{n-1} + ... + c_n`.
    pub fn characteristic(&self, x: &[f64]) -> Vec<f64> {
        characteristic_coefficients(&self.matrix(x), self.n)
    }
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0.0 {
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    out
}

fn trace(a: &[f64], n: usize) -> f64 {
    (0..n).map(|i| a[i * n + i]).sum()
}

/// Faddeev-LeVerrier: `M_1 = I`, `c_k = -Tr(A M_k) / k`, `M_{k+1} = A M_k + c_k I`.
pub fn characteristic_coefficients(a: &[f64], n: usize) -> Vec<f64> {
    let mut m: Vec<f64> = (0..n * n)
        .map(|i| if i % (n + 1) == 0 { 1.0 } else { 0.0 })
        .collect();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let am = matmul(a, &m, n);
        let c = -trace(&am, n) / k as f64;
        out.push(c);
        m = am;
        for i in 0..n {
            m[i * n + i] += c;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct FlowSpec {
    pub field: PolyVectorField,
    /// Logged first, as `I1..` columns.
    pub invariants: Vec<MultiPoly>,
    /// Power traces logged after `invariants`; also drives the `specdev` column.
    pub adjoint: Option<AdjointMonitor>,
    pub x0: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub method: Method,
}

impl FlowSpec {
    /// A bare field with nothing monitored.
    pub fn new(
        field: PolyVectorField,
        x0: Vec<f64>,
        t0: f64,
        t1: f64,
        dt: f64,
        method: Method,
    ) -> Result<Self> {
        let spec = FlowSpec {
            field,
            invariants: Vec::new(),
            adjoint: None,
            x0,
            t0,
            t1,
            dt,
            method,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Lax system monitored by its Casimirs `I_1..I_K` and the spectrum of `A_x`.
    pub fn for_system(
        system: &LaxSystem,
        max_k: usize,
        x0: Vec<f64>,
        t0: f64,
        t1: f64,
        dt: f64,
        method: Method,
    ) -> Result<Self> {
        let mut spec = Self::new(system.field.clone(), x0, t0, t1, dt, method)?;
        spec.adjoint = Some(AdjointMonitor::new(&system.pkg.algebra, max_k));
        Ok(spec)
    }

    pub fn with_invariants(mut self, invariants: Vec<MultiPoly>) -> Self {
        self.invariants = invariants;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return Err(Error::InvalidFlow(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !self.t0.is_finite() || !self.t1.is_finite() || self.t1 <= self.t0 {
            return Err(Error::InvalidFlow(format!(
                "need t1 > t0, got t0 = {}, t1 = {}",
                self.t0, self.t1
            )));
        }
        if self.x0.len() != self.field.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.field.dim(),
                found: self.x0.len(),
            });
        }
        if self.x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFlow("initial state must be finite".into()));
        }
        Ok(())
    }

    pub fn with_dt(&self, dt: f64) -> Self {
        FlowSpec { dt, ..self.clone() }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Per sample: values of the monitored invariants.
    pub invariant_log: Vec<Vec<f64>>,
    /// Per sample: max absolute change of the characteristic coefficients since `t0`.
    pub spectral_deviation: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    /// Max over samples and invariants of `|I(t) - I(t0)|`.
    pub fn max_invariant_drift(&self) -> f64 {
        let Some(first) = self.invariant_log.first() else {
            return 0.0;
        };
        self.invariant_log
            .iter()
            .flat_map(|row| row.iter().zip(first).map(|(v, v0)| (v - v0).abs()))
            .fold(0.0, f64::max)
    }

    /// Drift of one invariant column.
    pub fn invariant_drift(&self, k: usize) -> f64 {
        let Some(first) = self.invariant_log.first() else {
            return 0.0;
        };
        self.invariant_log
            .iter()
            .map(|row| (row[k] - first[k]).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_spectral_deviation(&self) -> f64 {
        self.spectral_deviation.iter().copied().fold(0.0, f64::max)
    }

    /// Max over samples of `|q(x(t)) - q(x0)|` for an arbitrary polynomial `q`.
    pub fn drift_of(&self, q: &MultiPoly) -> f64 {
        let c = CompiledPoly::new(q);
        let Some(x0) = self.states.first() else {
            return 0.0;
        };
        let q0 = c.eval(x0);
        self.states
            .iter()
            .map(|x| (c.eval(x) - q0).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `t,x1..xn,I1..IK,specdev`; 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.states.first().map_or(0, Vec::len);
        let k = self.invariant_log.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=k).map(|i| format!("I{i}")));
        header.push("specdev".into());
        writeln!(out, "{}", header.join(","))?;
        for s in 0..self.times.len() {
            let mut row = vec![fmt17(self.times[s])];
            row.extend(self.states[s].iter().map(|v| fmt17(*v)));
            row.extend(self.invariant_log[s].iter().map(|v| fmt17(*v)));
            row.push(fmt17(self.spectral_deviation[s]));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

struct Monitor<'a> {
    invariants: Vec<CompiledPoly>,
    adjoint: Option<&'a AdjointMonitor>,
    spectral0: Vec<f64>,
}

impl<'a> Monitor<'a> {
    fn new(spec: &'a FlowSpec) -> Self {
        let adjoint = spec.adjoint.as_ref();
        Monitor {
            invariants: spec.invariants.iter().map(CompiledPoly::new).collect(),
            adjoint,
            spectral0: adjoint.map_or_else(Vec::new, |m| m.characteristic(&spec.x0)),
        }
    }

    fn record(&self, traj: &mut Trajectory, t: f64, x: &[f64]) {
        traj.times.push(t);
        traj.states.push(x.to_vec());
        let mut row: Vec<f64> = self.invariants.iter().map(|p| p.eval(x)).collect();
        let mut dev = 0.0;
        if let Some(m) = self.adjoint {
            row.extend(m.power_traces(x));
            dev = m
                .characteristic(x)
                .iter()
                .zip(&self.spectral0)
                .map(|(c, c0)| (c - c0).abs())
                .fold(0.0, f64::max);
        }
        traj.invariant_log.push(row);
        traj.spectral_deviation.push(dev);
    }
}

fn step(field: &CompiledField, method: Method, x: &mut [f64], h: f64, scratch: &mut [Vec<f64>; 5]) {
    let n = x.len();
    let [k1, k2, k3, k4, tmp] = scratch;
    field.eval_into(x, k1);
    match method {
        Method::Euler => {
            for i in 0..n {
                x[i] += h * k1[i];
            }
        }
        Method::Rk4 => {
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * h * k1[i];
            }
            field.eval_into(tmp, k2);
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * h * k2[i];
            }
            field.eval_into(tmp, k3);
            for i in 0..n {
                tmp[i] = x[i] + h * k3[i];
            }
            field.eval_into(tmp, k4);
            for i in 0..n {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
}

/// Integrates from `t0` to `t1`, logging every `sample_every` steps and the final state.
pub fn integrate(spec: &FlowSpec, sample_every: usize) -> Result<Trajectory> {
    spec.validate()?;
    let sample_every = sample_every.max(1);
    let field = CompiledField::new(&spec.field);
    let monitor = Monitor::new(spec);
    let n = spec.x0.len();
    let mut scratch: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);

    let span = spec.t1 - spec.t0;
    let steps = (span / spec.dt - 1e-9).ceil().max(1.0) as u64;
    let mut traj = Trajectory::default();
    let mut x = spec.x0.clone();
    monitor.record(&mut traj, spec.t0, &x);
    for s in 1..=steps {
        let t_prev = spec.t0 + (s - 1) as f64 * spec.dt;
        let t = if s == steps {
            spec.t1
        } else {
            spec.t0 + s as f64 * spec.dt
        };
        step(&field, spec.method, &mut x, t - t_prev, &mut scratch);
        if x.iter().any(|v| !v.is_finite()) {
            let accepted = traj.len();
            return Err(Error::NonFinite {
                t,
                accepted,
                partial: Box::new(traj),
            });
        }
        if s % sample_every as u64 == 0 || s == steps {
            monitor.record(&mut traj, t, &x);
        }
    }
    Ok(traj)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub max_drift: f64,
    /// `max_drift` of the previous (coarser) row divided by this one.
    pub ratio: Option<f64>,
}

/// Re-runs the flow with `dt, dt/2, ..., dt/2^refinements`, recording the
/// maximum invariant drift of each run (every step is sampled).
pub fn convergence_study(spec: &FlowSpec, refinements: usize) -> Result<Vec<ConvergenceRow>> {
    if refinements < 2 {
        return Err(Error::InvalidFlow(
            "convergence study needs at least 2 refinements".into(),
        ));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(refinements + 1);
    for r in 0..=refinements {
        let dt = spec.dt / f64::powi(2.0, r as i32);
        let traj = integrate(&spec.with_dt(dt), 1)?;
        let max_drift = traj.max_invariant_drift();
        let ratio = rows.last().map(|prev| prev.max_drift / max_drift);
        rows.push(ConvergenceRow {
            dt,
            max_drift,
            ratio,
        });
    }
    Ok(rows)
}

/// Rigid-body system on `so3`: potential `B = R x` with `R = diag(a, b, c)`.
pub fn euler_system(
    pkg: &CanonicalPackage,
    a: &Rational,
    b: &Rational,
    c: &Rational,
) -> Result<LaxSystem> {
    let so3 = crate::catalog::so(3)?;
    if *pkg.algebra != so3 {
        return Err(Error::UnknownAlgebra(format!(
            "rigid-body system needs so3, got {}",
            pkg.algebra.name()
        )));
    }
    let potential = PolyVectorField::new(vec![
        MultiPoly::var(3, 0).scale(a),
        MultiPoly::var(3, 1).scale(b),
        MultiPoly::var(3, 2).scale(c),
    ])?;
    crate::lax::lax_field(pkg, &potential)
}
