//! Numerical integration of the Nahm flow `Ẋ = X²` and its monitors.
//!
//! Structure constants are converted to binary64 once, in [`FloatNahm`].
//! The integrator is the Dormand–Prince 5(4) pair with PI step control and
//! its quartic dense output; every accepted step keeps its interpolation
//! coefficients so trajectories can be compared at arbitrary times.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::linalg::{Matrix, Scalar, Subspace};
use crate::nahm::{NahmAlgebra, NahmElement};
use crate::structure::subalgebra_generated;
use crate::{Error, Result};

/// Binary64 copy of the Nahm product of one algebra.
#[derive(Debug, Clone)]
pub struct FloatNahm {
    n: usize,
    /// Nonzero `c[i][j][k]` for `i < j`.
    terms: Vec<(usize, usize, usize, f64)>,
    /// Standard form Gram matrix.
    gram: DMatrix<f64>,
}

impl FloatNahm {
    pub fn new(alg: &NahmAlgebra) -> Self {
        let g = alg.base();
        let n = g.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = g.constant(i, j, k);
                    if !c.is_zero() {
                        terms.push((i, j, k, c.to_f64()));
                    }
                }
            }
        }
        FloatNahm {
            n,
            terms,
            gram: to_dmatrix(alg.standard_form().gram()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        3 * self.n
    }

    /// Standard form Gram matrix in binary64.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    fn bracket_into(&self, x: &[f64], y: &[f64], scale: f64, out: &mut [f64]) {
        for &(i, j, k, c) in &self.terms {
            out[k] += scale * c * (x[i] * y[j] - x[j] * y[i]);
        }
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.bracket_into(x, y, 1.0, &mut out);
        out
    }

    /// `X²` for a `3n` coordinate vector.
    pub fn square(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; 3 * n];
        let (x1, x2, x3) = (&x[..n], &x[n..2 * n], &x[2 * n..]);
        let (o1, rest) = out.split_at_mut(n);
        let (o2, o3) = rest.split_at_mut(n);
        self.bracket_into(x2, x3, 1.0, o1);
        self.bracket_into(x3, x1, 1.0, o2);
        self.bracket_into(x1, x2, 1.0, o3);
        out
    }

    pub fn mul(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; 3 * n];
        let s = |v: &[f64], i: usize| v[i * n..(i + 1) * n].to_vec();
        let (xs, ys): (Vec<_>, Vec<_>) = ((0..3).map(|i| s(x, i)).collect(), (0..3).map(|i| s(y, i)).collect());
        for (slot, (a, b)) in [(1, 2), (2, 0), (0, 1)].into_iter().enumerate() {
            let o = &mut out[slot * n..(slot + 1) * n];
            self.bracket_into(&xs[a], &ys[b], 0.5, o);
            self.bracket_into(&ys[a], &xs[b], 0.5, o);
        }
        out
    }

    /// `L(X)` in binary64.
    pub fn left_mult(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            let col = self.mul(x, &e);
            e[j] = 0.0;
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `φ(X) = ⅓ C(X, X²)`.
    pub fn potential(&self, x: &[f64]) -> f64 {
        let sq = DVector::from_vec(self.square(x));
        let xv = DVector::from_column_slice(x);
        xv.dot(&(&self.gram * sq)) / 3.0
    }
}

pub fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64())
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowOptions {
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Stop when `‖X‖∞` exceeds this.
    pub blow_up_norm: f64,
    pub max_steps: usize,
    /// Per-sample channels to record: `potential`, `square_norm`, `confinement`.
    pub monitors: Vec<String>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            t_end: 1.0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            blow_up_norm: 1e9,
            max_steps: 1_000_000,
            monitors: Vec::new(),
        }
    }
}

impl FlowOptions {
    pub fn with_t_end(t_end: f64) -> Self {
        FlowOptions {
            t_end,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), FlowError> {
        let ok = self.t_end.is_finite()
            && self.t_end >= 0.0
            && self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_step > 0.0
            && self.blow_up_norm > 0.0;
        if !ok {
            return Err(FlowError::InvalidOptions(format!("{self:?}")));
        }
        if let Some(m) = self.monitors.iter().find(|m| !MONITOR_CHANNELS.contains(&m.as_str())) {
            return Err(FlowError::InvalidOptions(format!("unknown monitor `{m}`")));
        }
        Ok(())
    }
}

/// Per-sample channels [`integrate`] can record.
pub const MONITOR_CHANNELS: [&str; 3] = ["potential", "square_norm", "confinement"];

#[derive(Debug, Clone, PartialEq)]
pub enum FlowStatus {
    Completed,
    /// Stopped at the blow-up norm; `t_est` extrapolates the singular time.
    BlowUp {
        t_est: f64,
    },
    /// The initial state has `‖P²‖∞ < abs_tol`; the flow is still integrated.
    Equilibrium,
}

impl FlowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            FlowStatus::Completed => "completed",
            FlowStatus::BlowUp { .. } => "blow_up",
            FlowStatus::Equilibrium => "equilibrium",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FlowError {
    #[error("invalid flow options: {0}")]
    InvalidOptions(String),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64, state: Vec<f64> },
    #[error("step limit reached at t = {t}")]
    MaxSteps { t: f64, state: Vec<f64> },
    #[error("initial state has length {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
}

impl From<FlowError> for Error {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::InvalidOptions(m) => Error::Precondition(m),
            FlowError::Dimension { .. } => Error::Dimension(e.to_string()),
            _ => Error::Numerical(e.to_string()),
        }
    }
}

/// One accepted step with its quartic interpolant.
#[derive(Debug, Clone)]
struct Segment {
    t0: f64,
    h: f64,
    r: [Vec<f64>; 5],
}

impl Segment {
    fn eval(&self, t: f64) -> Vec<f64> {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        (0..self.r[0].len())
            .map(|i| {
                let r = &self.r;
                r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub status: FlowStatus,
    /// Channel name to one value per sample.
    pub diagnostics: BTreeMap<String, Vec<f64>>,
    segments: Vec<Segment>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has the initial sample")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has the initial sample")
    }

    /// Dense-output state at `t`, or `None` outside the integrated range.
    pub fn interpolate(&self, t: f64) -> Option<Vec<f64>> {
        if t < self.times[0] || t > self.final_time() {
            return None;
        }
        if self.segments.is_empty() || t == self.times[0] {
            return Some(self.states[0].clone());
        }
        let idx = self.segments.partition_point(|s| s.t0 + s.h < t);
        let seg = &self.segments[idx.min(self.segments.len() - 1)];
        Some(seg.eval(t))
    }

    /// CSV with header `t,x1_1..x3_n` plus one column per diagnostic
    /// channel; numbers printed with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let dim = self.states[0].len();
        let n = dim / 3;
        let mut header = vec!["t".to_string()];
        for slot in 1..=3 {
            for i in 1..=n {
                header.push(format!("x{slot}_{i}"));
            }
        }
        header.extend(self.diagnostics.keys().cloned());
        let mut out = header.join(",");
        out.push('\n');
        for (k, (t, x)) in self.times.iter().zip(&self.states).enumerate() {
            let mut row = vec![fmt17(*t)];
            row.extend(x.iter().map(|v| fmt17(*v)));
            row.extend(self.diagnostics.values().map(|ch| fmt17(ch[k])));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, round-trip exact for binary64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

// Dormand–Prince 5(4) tableau. The flow is autonomous, so the nodes cᵢ are unused.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn combo(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (c, k) in terms {
        if *c != 0.0 {
            for (o, v) in out.iter_mut().zip(k.iter()) {
                *o += h * c * v;
            }
        }
    }
    out
}

/// Integrates `Ẋ = X²` from `p` (a `3n` binary64 vector) over `[0, t_end]`.
pub fn integrate(alg: &NahmAlgebra, p: &[f64], opts: &FlowOptions) -> Result<Trajectory, FlowError> {
    let f = FloatNahm::new(alg);
    integrate_float(&f, p, opts)
}

pub fn integrate_float(f: &FloatNahm, p: &[f64], opts: &FlowOptions) -> Result<Trajectory, FlowError> {
    opts.validate()?;
    if p.len() != f.dim() {
        return Err(FlowError::Dimension {
            got: p.len(),
            expected: f.dim(),
        });
    }
    let equilibrium = max_abs(&f.square(p)) < opts.abs_tol;
    let mut t = 0.0;
    let mut y = p.to_vec();
    let mut k1 = f.square(&y);
    let mut times = vec![0.0];
    let mut states = vec![y.clone()];
    let mut segments = Vec::new();
    let mut status = FlowStatus::Completed;

    let err_norm = |y0: &[f64], y1: &[f64], e: &[f64]| -> f64 {
        let s: f64 = (0..y0.len())
            .map(|i| {
                let sc = opts.abs_tol + opts.rel_tol * y0[i].abs().max(y1[i].abs());
                (e[i] / sc).powi(2)
            })
            .sum();
        (s / y0.len().max(1) as f64).sqrt()
    };

    // initial step from the usual two-evaluation heuristic
    let mut h = {
        let d0 = err_norm(&y, &y, &y);
        let d1 = err_norm(&y, &y, &k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = combo(&y, h0, &[(1.0, &k1)]);
        let k2 = f.square(&y1);
        let diff: Vec<f64> = k2.iter().zip(&k1).map(|(a, b)| (a - b) / h0).collect();
        let d2 = err_norm(&y, &y, &diff);
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 5.0)
        };
        (100.0 * h0).min(h1).min(opts.max_step)
    };
    let mut err_prev: f64 = 1e-4;
    let mut steps = 0usize;
    let (alpha, beta) = (0.7 / 5.0, 0.4 / 5.0);

    while t < opts.t_end {
        if steps >= opts.max_steps {
            return Err(FlowError::MaxSteps { t, state: y });
        }
        steps += 1;
        let last = t + h >= opts.t_end;
        if last {
            h = opts.t_end - t;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1e-300) || h < 1e-300 {
            return Err(FlowError::StepUnderflow { t, state: y });
        }
        let k2 = f.square(&combo(&y, h, &[(A21, &k1)]));
        let k3 = f.square(&combo(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f.square(&combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f.square(&combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f.square(&combo(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let y1 = combo(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f.square(&y1);
        let e = combo(
            &vec![0.0; y.len()],
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );
        let err = err_norm(&y, &y1, &e);
        if !err.is_finite() {
            h *= 0.1;
            continue;
        }
        if err <= 1.0 {
            let ydiff: Vec<f64> = y1.iter().zip(&y).map(|(a, b)| a - b).collect();
            let bspl: Vec<f64> = k1.iter().zip(&ydiff).map(|(k, d)| h * k - d).collect();
            let r4: Vec<f64> = (0..y.len()).map(|i| ydiff[i] - h * k7[i] - bspl[i]).collect();
            let r5 = combo(
                &vec![0.0; y.len()],
                h,
                &[(D1, &k1), (D3, &k3), (D4, &k4), (D5, &k5), (D6, &k6), (D7, &k7)],
            );
            segments.push(Segment {
                t0: t,
                h,
                r: [y.clone(), ydiff, bspl, r4, r5],
            });
            t = if last { opts.t_end } else { t + h };
            y = y1;
            k1 = k7;
            times.push(t);
            states.push(y.clone());
            let fac = 0.9 * err.max(1e-10).powf(-alpha) * err_prev.powf(beta);
            err_prev = err.max(1e-4);
            h = (h * fac.clamp(0.2, 10.0)).min(opts.max_step);
            if max_abs(&y) > opts.blow_up_norm {
                status = FlowStatus::BlowUp {
                    t_est: estimate_blow_up(&times, &states),
                };
                break;
            }
        } else {
            let fac = 0.9 * err.powf(-alpha);
            h *= fac.clamp(0.2, 1.0);
        }
    }
    if equilibrium {
        status = FlowStatus::Equilibrium;
    }
    let mut traj = Trajectory {
        times,
        states,
        status,
        diagnostics: BTreeMap::new(),
        segments,
    };
    for m in &opts.monitors {
        let channel: Vec<f64> = match m.as_str() {
            "potential" => traj.states.iter().map(|x| f.potential(x)).collect(),
            "square_norm" => traj.states.iter().map(|x| max_abs(&f.square(x))).collect(),
            // filled in by `record_confinement`, which needs exact P
            _ => continue,
        };
        traj.diagnostics.insert(m.clone(), channel);
    }
    Ok(traj)
}

/// Least-squares line through `1/‖X‖∞` over the last five samples; its zero
/// is the blow-up time (exact for rays `aE/(1 − at)`).
fn estimate_blow_up(times: &[f64], states: &[Vec<f64>]) -> f64 {
    let k = times.len().min(5);
    let ts = &times[times.len() - k..];
    let ys: Vec<f64> = states[states.len() - k..].iter().map(|x| 1.0 / max_abs(x)).collect();
    let tm = ts.iter().sum::<f64>() / k as f64;
    let ym = ys.iter().sum::<f64>() / k as f64;
    let sxy: f64 = ts.iter().zip(&ys).map(|(t, y)| (t - tm) * (y - ym)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - tm).powi(2)).sum();
    if sxx == 0.0 || sxy == 0.0 {
        return *times.last().expect("nonempty");
    }
    let slope = sxy / sxx;
    tm - ym / slope
}

/// Rationalizes a binary64 element entrywise (denominators at most `10⁶`).
pub fn rationalize(p: &[f64]) -> Result<NahmElement> {
    let coords = p
        .iter()
        .map(|&v| Scalar::approximate(v, 1_000_000).ok_or_else(|| Error::Numerical(format!("cannot rationalize {v}"))))
        .collect::<Result<Vec<_>>>()?;
    NahmElement::from_coords(&coords)
}

/// Orthonormal basis (columns) of an exact subspace.
fn orthonormal_basis(s: &Subspace) -> DMatrix<f64> {
    let d = s.ambient();
    if s.is_zero() {
        return DMatrix::zeros(d, 0);
    }
    let cols: Vec<DVector<f64>> = s
        .vectors()
        .iter()
        .map(|v| DVector::from_iterator(d, v.iter().map(Scalar::to_f64)))
        .collect();
    let m = DMatrix::from_columns(&cols);
    m.qr().q().columns(0, s.dim()).into_owned()
}

/// Distance of every sample with `‖X‖∞ ≤ norm_cap` from the product
/// closure of the rationalized initial state; returns the maximum.
pub fn monitor_confinement(alg: &NahmAlgebra, traj: &Trajectory, p: &[f64], norm_cap: f64) -> Result<f64> {
    let channel = confinement_channel(alg, traj, p)?;
    Ok(channel
        .iter()
        .zip(&traj.states)
        .filter(|(_, x)| max_abs(x) <= norm_cap)
        .fold(0.0, |m, (r, _)| m.max(*r)))
}

fn confinement_channel(alg: &NahmAlgebra, traj: &Trajectory, p: &[f64]) -> Result<Vec<f64>> {
    let exact = rationalize(p)?;
    let closure = subalgebra_generated(alg, &exact)?.closure;
    let q = orthonormal_basis(&closure);
    Ok(traj
        .states
        .iter()
        .map(|x| {
            let xv = DVector::from_column_slice(x);
            let proj = &q * (q.transpose() * &xv);
            (xv - proj).amax()
        })
        .collect())
}

/// Adds the `confinement` channel to a trajectory integrated from `p`.
pub fn record_confinement(alg: &NahmAlgebra, traj: &mut Trajectory, p: &[f64]) -> Result<()> {
    let ch = confinement_channel(alg, traj, p)?;
    traj.diagnostics.insert("confinement".into(), ch);
    Ok(())
}

/// `‖∇φ(X) − X²‖∞` with the gradient taken in the standard form: the
/// central-difference coordinate gradient is multiplied by `C⁻¹`.
pub fn monitor_gradient(alg: &NahmAlgebra, x: &[f64], h: f64) -> Result<f64> {
    let form = alg.standard_form();
    if !form.is_nondegenerate() {
        return Err(Error::Precondition("standard form is degenerate".into()));
    }
    let f = FloatNahm::new(alg);
    if x.len() != f.dim() {
        return Err(Error::Dimension("state length does not match A(g)".into()));
    }
    let ginv = to_dmatrix(&form.gram().inverse().expect("nondegenerate"));
    let mut grad = DVector::zeros(x.len());
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let up = f.potential(&xp);
        xp[i] = x[i] - h;
        let down = f.potential(&xp);
        xp[i] = x[i];
        grad[i] = (up - down) / (2.0 * h);
    }
    let nabla = ginv * grad;
    let sq = f.square(x);
    Ok((0..x.len()).fold(0.0, |m, i| m.max((nabla[i] - sq[i]).abs())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// Largest drop of `φ` between consecutive samples (0 when monotone).
    pub max_decrease: f64,
}

/// `φ` must be nondecreasing along the flow of a compact algebra, since
/// `dφ/dt = C(X², X²) ≥ 0`. Drops up to `10·abs_tol` are tolerated.
pub fn monitor_monotone(alg: &NahmAlgebra, traj: &Trajectory, abs_tol: f64) -> Result<MonotoneReport> {
    if !alg.is_compact()? {
        return Err(Error::Precondition("monotone potential needs a compact algebra".into()));
    }
    let f = FloatNahm::new(alg);
    let phi: Vec<f64> = traj.states.iter().map(|x| f.potential(x)).collect();
    let max_decrease = phi.windows(2).fold(0.0_f64, |m, w| m.max(w[0] - w[1]));
    Ok(MonotoneReport {
        monotone: max_decrease <= 10.0 * abs_tol,
        max_decrease,
    })
}

/// Embeds `(P₁, P₂)` into `A(g₁ ⊕ g₂)` slot by slot.
pub fn embed_sum(n1: usize, p1: &[f64], n2: usize, p2: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(3 * (n1 + n2));
    for s in 0..3 {
        out.extend_from_slice(&p1[s * n1..(s + 1) * n1]);
        out.extend_from_slice(&p2[s * n2..(s + 1) * n2]);
    }
    out
}

fn split_sum(n1: usize, n2: usize, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = n1 + n2;
    let mut a = Vec::with_capacity(3 * n1);
    let mut b = Vec::with_capacity(3 * n2);
    for s in 0..3 {
        a.extend_from_slice(&x[s * n..s * n + n1]);
        b.extend_from_slice(&x[s * n + n1..(s + 1) * n]);
    }
    (a, b)
}

/// Integrates in `A(g₁ ⊕ g₂)` and in each summand separately and returns
/// the largest componentwise deviation at the sum's sample times.
pub fn monitor_decoupling(
    g1: &crate::liealg::LieAlgebra,
    g2: &crate::liealg::LieAlgebra,
    p1: &[f64],
    p2: &[f64],
    opts: &FlowOptions,
) -> Result<f64> {
    let (n1, n2) = (g1.dim(), g2.dim());
    let sum = NahmAlgebra::new(g1.direct_sum(g2));
    let joint = integrate(&sum, &embed_sum(n1, p1, n2, p2), opts)?;
    let a = integrate(&NahmAlgebra::new(g1.clone()), p1, opts)?;
    let b = integrate(&NahmAlgebra::new(g2.clone()), p2, opts)?;
    let horizon = joint.final_time().min(a.final_time()).min(b.final_time());
    let mut worst = 0.0_f64;
    for (t, x) in joint.times.iter().zip(&joint.states) {
        if *t > horizon {
            break;
        }
        let (x1, x2) = split_sum(n1, n2, x);
        let y1 = a.interpolate(*t).expect("inside horizon");
        let y2 = b.interpolate(*t).expect("inside horizon");
        worst = worst.max(max_dev(&x1, &y1)).max(max_dev(&x2, &y2));
    }
    Ok(worst)
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Integrates from `F·P` and from `P` and returns the largest deviation of
/// `F·X(t)` from the transported trajectory at its sample times.
pub fn monitor_transport(alg: &NahmAlgebra, f_map: &Matrix, p: &[f64], opts: &FlowOptions) -> Result<f64> {
    let fm = to_dmatrix(f_map);
    let pv = DVector::from_column_slice(p);
    let fp: Vec<f64> = (&fm * pv).iter().copied().collect();
    let base = integrate(alg, p, opts)?;
    let moved = integrate(alg, &fp, opts)?;
    let horizon = base.final_time().min(moved.final_time());
    let mut worst = 0.0_f64;
    for (t, y) in moved.times.iter().zip(&moved.states) {
        if *t > horizon {
            break;
        }
        let x = DVector::from_vec(base.interpolate(*t).expect("inside horizon"));
        let fx: Vec<f64> = (&fm * x).iter().copied().collect();
        worst = worst.max(max_dev(&fx, y));
    }
    Ok(worst)
}

/// Compares the numeric flow from `p` with `e^{tD} p` for a derivation `D`
/// with `Dp = p²`; returns the largest deviation at the sample times.
pub fn monitor_derivation_flow(alg: &NahmAlgebra, d: &Matrix, p: &[f64], opts: &FlowOptions) -> Result<f64> {
    let dm = to_dmatrix(d);
    let traj = integrate(alg, p, opts)?;
    let pv = DVector::from_column_slice(p);
    let mut worst = 0.0_f64;
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let e = crate::derivations::expm(&(&dm * *t));
        let xe: Vec<f64> = (e * &pv).iter().copied().collect();
        worst = worst.max(max_dev(x, &xe));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    use crate::linalg::{q, unit_vec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn so3() -> NahmAlgebra {
        NahmAlgebra::new(catalog("so3").unwrap())
    }

    fn e_f64() -> Vec<f64> {
        NahmElement::from_basis_triple(3, [0, 1, 2]).to_f64()
    }

    fn scaled(v: &[f64], a: f64) -> Vec<f64> {
        v.iter().map(|x| a * x).collect()
    }

    #[test]
    fn float_product_matches_exact() {
        let alg = NahmAlgebra::new(catalog("sl2+aff1").unwrap());
        let f = FloatNahm::new(&alg);
        let basis = alg.basis();
        for x in &basis {
            for y in &basis {
                assert_eq!(f.mul(&x.to_f64(), &y.to_f64()), alg.mul(x, y).to_f64());
            }
            assert_eq!(f.square(&x.to_f64()), alg.square(x).to_f64());
        }
    }

    #[test]
    fn delta_is_an_equilibrium() {
        let p = NahmElement::delta(&unit_vec(3, 0)).to_f64();
        let traj = integrate(&so3(), &p, &FlowOptions::with_t_end(10.0)).unwrap();
        assert_eq!(traj.status, FlowStatus::Equilibrium);
        assert_eq!(traj.final_time(), 10.0);
        let drift = traj.states.iter().map(|x| max_dev(x, &p)).fold(0.0, f64::max);
        assert!(drift <= 1e-9);
    }

    #[test]
    fn idempotent_blows_up_at_one() {
        let traj = integrate(&so3(), &e_f64(), &FlowOptions::with_t_end(2.0)).unwrap();
        let FlowStatus::BlowUp { t_est } = traj.status else {
            panic!("expected blow-up, got {:?}", traj.status)
        };
        assert!((t_est - 1.0).abs() <= 0.01, "t_est = {t_est}");
    }

    #[test]
    fn ray_solutions_match_closed_form() {
        let e = e_f64();
        for a in [1.0, 0.5, -1.0, 2.0] {
            let traj = integrate(&so3(), &scaled(&e, a), &FlowOptions::with_t_end(3.0)).unwrap();
            for (t, x) in traj.times.iter().zip(&traj.states) {
                let c = a / (1.0 - a * t);
                if c.abs() > 1e3 {
                    break;
                }
                assert!(max_dev(x, &scaled(&e, c)) <= 1e-6 * c.abs().max(1.0), "a={a} t={t}");
            }
        }
    }

    #[test]
    fn negative_idempotent_decays() {
        let e = e_f64();
        let traj = integrate(&so3(), &scaled(&e, -1.0), &FlowOptions::with_t_end(9.0)).unwrap();
        assert_eq!(traj.status, FlowStatus::Completed);
        assert!(max_dev(traj.final_state(), &scaled(&e, -0.1)) <= 1e-6);
    }

    #[test]
    fn dense_output_matches_closed_form() {
        let e = e_f64();
        let traj = integrate(&so3(), &scaled(&e, -1.0), &FlowOptions::with_t_end(4.0)).unwrap();
        for k in 0..=40 {
            let t = k as f64 * 0.1;
            let x = traj.interpolate(t).unwrap();
            assert!(max_dev(&x, &scaled(&e, -1.0 / (1.0 + t))) <= 1e-7, "t={t}");
        }
        assert!(traj.interpolate(4.5).is_none());
    }

    #[test]
    fn confinement_examples() {
        let alg = so3();
        let opts = FlowOptions::with_t_end(0.5);
        let delta = NahmElement::delta(&[q(1, 1), q(2, 1), q(-1, 1)]).to_f64();
        let traj = integrate(&alg, &delta, &opts).unwrap();
        // the state never moves; only the orthonormalization rounds
        assert!(monitor_confinement(&alg, &traj, &delta, f64::INFINITY).unwrap() <= 1e-14);

        let traj = integrate(&alg, &e_f64(), &FlowOptions::with_t_end(2.0)).unwrap();
        assert!(monitor_confinement(&alg, &traj, &e_f64(), 1e3).unwrap() <= 1e-6);

        let p = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let traj = integrate(&alg, &p, &opts).unwrap();
        assert!(monitor_confinement(&alg, &traj, &p, f64::INFINITY).unwrap() <= 1e-6);
    }

    #[test]
    fn gradient_examples() {
        let alg = so3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0) / 3.0).collect();
            assert!(monitor_gradient(&alg, &x, 1e-5).unwrap() <= 1e-8);
        }
        assert_eq!(monitor_gradient(&alg, &[0.0; 9], 1e-5).unwrap(), 0.0);
        assert!(monitor_gradient(&alg, &e_f64(), 1e-5).unwrap() <= 1e-8);
        let h = NahmAlgebra::new(catalog("heisenberg").unwrap());
        assert!(monitor_gradient(&h, &[0.0; 9], 1e-5).is_err());
    }

    #[test]
    fn monotone_examples() {
        let alg = so3();
        let opts = FlowOptions::with_t_end(2.0);
        let traj = integrate(&alg, &e_f64(), &opts).unwrap();
        let r = monitor_monotone(&alg, &traj, opts.abs_tol).unwrap();
        assert!(r.monotone);
        let f = FloatNahm::new(&alg);
        let phi: Vec<f64> = traj.states.iter().map(|x| f.potential(x)).collect();
        assert!(phi.windows(2).all(|w| w[1] > w[0]));

        let d = NahmElement::delta(&unit_vec(3, 1)).to_f64();
        let traj = integrate(&alg, &d, &opts).unwrap();
        assert_eq!(monitor_monotone(&alg, &traj, opts.abs_tol).unwrap().max_decrease, 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
        let traj = integrate(&alg, &p, &FlowOptions::with_t_end(0.5)).unwrap();
        assert!(monitor_monotone(&alg, &traj, opts.abs_tol).unwrap().monotone);

        let sl2 = NahmAlgebra::new(catalog("sl2").unwrap());
        assert!(monitor_monotone(&sl2, &traj, 1e-12).is_err());
    }

    #[test]
    fn decoupling_examples() {
        let g = catalog("so3").unwrap();
        let opts = FlowOptions::with_t_end(0.5);
        let d = NahmElement::delta(&[q(1, 1), q(-2, 1), q(1, 2)]).to_f64();
        assert!(monitor_decoupling(&g, &g, &e_f64(), &d, &opts).unwrap() <= 1e-6);
        let dev = monitor_decoupling(&g, &g, &e_f64(), &[0.0; 9], &opts).unwrap();
        assert!(dev <= 1e-6);
    }

    #[test]
    fn csv_layout() {
        let mut opts = FlowOptions::with_t_end(0.1);
        opts.monitors = vec!["potential".into()];
        let traj = integrate(&so3(), &scaled(&e_f64(), 0.5), &opts).unwrap();
        let csv = traj.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,x1_1,x1_2,x1_3,x2_1,x2_2,x2_3,x3_1,x3_2,x3_3,potential"
        );
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row.len(), 11);
        assert_eq!(row[1], 0.5);
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn rejects_bad_options() {
        let mut opts = FlowOptions::with_t_end(1.0);
        opts.rel_tol = 0.0;
        assert!(integrate(&so3(), &e_f64(), &opts).is_err());
        let mut opts = FlowOptions::with_t_end(1.0);
        opts.monitors = vec!["nonsense".into()];
        assert!(integrate(&so3(), &e_f64(), &opts).is_err());
        assert!(integrate(&so3(), &[0.0; 4], &FlowOptions::default()).is_err());
    }
}
