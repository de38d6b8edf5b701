//! Fluid-limit theory for both greedy processes.
//!
//! All quantities are densities: `M = μ/n` (alive edges), `N = ν/n` (alive
//! vertices), `τ = t/n` (rescaled step count).
//!
//! GREEDY follows
//!
//! ```text
//! dM/dτ = -1 - 4M/(1-2τ) - M/(κ-τ),   M(0) = c/2
//! ```
//!
//! and MODIFIED GREEDY reduces to
//!
//! ```text
//! dN/dτ = exp(-(c/κ) N (N + τ + κ - 1)) - 2,   N(0) = 1
//! ```
//!
//! with `M = (c/2κ) N² (N + τ + κ - 1)`. The matching sizes are `τ₀ n` and
//! `(1 - τ₀) n` respectively, `τ₀` being the first zero of `M` resp. `N`.

use std::io::Write;

use thiserror::Error;

use crate::scalar::{half, two, Scalar};

/// Grid spacing used when no step is given.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Integration stops this far short of `min(1/2, κ)`.
pub const DOMAIN_GUARD: f64 = 1e-9;
/// Below this `|2κ - 1|` the general closed form hands over to the κ = 1/2 cubic.
pub const HALF_CROSSOVER: f64 = 1e-4;
/// Sign-change scan resolution of [`tau0_general`].
pub const ROOT_SCAN_POINTS: usize = 10_000;
/// Event refinement stops once the state is this close to zero.
pub const EVENT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoryError {
    #[error("parameters must satisfy c > 0 and kappa > 0 (got c = {c}, kappa = {kappa})")]
    InvalidParams { c: f64, kappa: f64 },
    #[error("step must be positive (got {0})")]
    InvalidStep(f64),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("{what} never reached 0 before tau = {tau}")]
    NoCrossing { what: &'static str, tau: f64 },
    #[error("no root found: {0}")]
    NoRoot(String),
    #[error("unused colors ran out (Q <= 0) at tau = {tau} before N reached 0")]
    ColorsExhausted { tau: f64 },
    #[error("integral form residual {residual:e} exceeds {bound:e}")]
    IntegralForm { residual: f64, bound: f64 },
    #[error("regime preconditions fail: {0}")]
    Regime(String),
}

#[inline]
fn f64_of<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Average degree `c = 2m/n` and color density `κ = q/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams<T> {
    pub c: T,
    pub kappa: T,
}

impl<T: Scalar> TheoryParams<T> {
    pub fn new(c: T, kappa: T) -> Result<Self, TheoryError> {
        if !(c > T::zero() && kappa > T::zero() && c.is_finite() && kappa.is_finite()) {
            return Err(TheoryError::InvalidParams { c: f64_of(c), kappa: f64_of(kappa) });
        }
        Ok(TheoryParams { c, kappa })
    }

    /// `min(1/2, κ)`: the GREEDY ODE is singular there.
    pub fn greedy_edge(&self) -> T {
        self.kappa.min(half())
    }

    /// `2κ - 1`.
    pub fn epsilon(&self) -> T {
        two::<T>() * self.kappa - T::one()
    }

    pub fn is_half(&self) -> bool {
        self.epsilon().abs() < T::lit(HALF_CROSSOVER)
    }
}

/// Discretized solution of a scalar trend ODE.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeTrajectory<T> {
    /// Grid points `0, h, 2h, ...` up to the last one before the root.
    pub taus: Vec<T>,
    pub states: Vec<T>,
    /// Refined first zero of the state.
    pub tau0: T,
    pub step: T,
}

impl<T: Scalar> OdeTrajectory<T> {
    /// `(τ, value)` pairs including the root as a final point.
    pub fn curve(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.taus
            .iter()
            .copied()
            .zip(self.states.iter().copied())
            .chain(std::iter::once((self.tau0, T::zero())))
    }
}

/// `tau,value` CSV of one trajectory.
pub fn write_curve_csv<T: Scalar, W: Write>(curve: impl IntoIterator<Item = (T, T)>, mut w: W) -> std::io::Result<()> {
    writeln!(w, "tau,value")?;
    for (tau, v) in curve {
        writeln!(w, "{},{}", f64_of(tau), f64_of(v))?;
    }
    w.flush()
}

/* ---------- fixed-step integration with zero-crossing detection ---------- */

type Rhs<'a, T, const D: usize> = dyn Fn(T, &[T; D]) -> Result<[T; D], TheoryError> + 'a;
type Check<'a, T, const D: usize> = dyn Fn(T, &[T; D]) -> Result<(), TheoryError> + 'a;

fn axpy<T: Scalar, const D: usize>(y: &[T; D], a: T, k: &[T; D]) -> [T; D] {
    let mut out = *y;
    for i in 0..D {
        out[i] = y[i] + a * k[i];
    }
    out
}

/// One classical fourth-order Runge–Kutta step.
pub(crate) fn rk4_step<T: Scalar, const D: usize>(
    f: &Rhs<'_, T, D>,
    tau: T,
    y: &[T; D],
    h: T,
) -> Result<[T; D], TheoryError> {
    let h2 = h * half();
    let k1 = f(tau, y)?;
    let k2 = f(tau + h2, &axpy(y, h2, &k1))?;
    let k3 = f(tau + h2, &axpy(y, h2, &k2))?;
    let k4 = f(tau + h, &axpy(y, h, &k3))?;
    let sixth = T::one() / T::lit(6.0);
    let mut out = *y;
    for i in 0..D {
        out[i] = y[i] + h * sixth * (k1[i] + two::<T>() * k2[i] + two::<T>() * k3[i] + k4[i]);
    }
    Ok(out)
}

pub(crate) struct Crossing<T, const D: usize> {
    pub taus: Vec<T>,
    pub states: Vec<[T; D]>,
    pub tau0: T,
}

/// Integrates from `τ = 0` until `component` of the state first drops to
/// zero or below, then bisects the sub-step so the component is within
/// [`EVENT_TOLERANCE`] of zero. `check` runs at every accepted grid point.
pub(crate) fn integrate_to_zero<T: Scalar, const D: usize>(
    f: &Rhs<'_, T, D>,
    y0: [T; D],
    step: T,
    tau_max: T,
    component: usize,
    what: &'static str,
    check: &Check<'_, T, D>,
) -> Result<Crossing<T, D>, TheoryError> {
    if !(step > T::zero()) {
        return Err(TheoryError::InvalidStep(f64_of(step)));
    }
    let mut taus = vec![T::zero()];
    let mut states = vec![y0];
    let mut y = y0;
    let mut tau = T::zero();
    let mut i = 0usize;
    loop {
        let next = T::count(i + 1) * step;
        let (h, last) = if next >= tau_max { (tau_max - tau, true) } else { (step, false) };
        if !(h > T::zero()) {
            return Err(TheoryError::NoCrossing { what, tau: f64_of(tau) });
        }
        let y_next = rk4_step(f, tau, &y, h)?;
        if y_next[component] <= T::zero() {
            let s = refine_crossing(f, tau, &y, h, component)?;
            return Ok(Crossing { taus, states, tau0: tau + s });
        }
        if last {
            return Err(TheoryError::NoCrossing { what, tau: f64_of(tau_max) });
        }
        i += 1;
        tau = next;
        y = y_next;
        check(tau, &y)?;
        taus.push(tau);
        states.push(y);
    }
}

fn refine_crossing<T: Scalar, const D: usize>(
    f: &Rhs<'_, T, D>,
    tau: T,
    y: &[T; D],
    h: T,
    component: usize,
) -> Result<T, TheoryError> {
    let tol = T::lit(EVENT_TOLERANCE);
    let (mut lo, mut hi) = (T::zero(), h);
    for _ in 0..200 {
        let mid = lo + (hi - lo) * half();
        if mid <= lo || mid >= hi {
            break;
        }
        let v = rk4_step(f, tau, y, mid)?[component];
        if v.abs() < tol {
            return Ok(mid);
        }
        if v > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) * half())
}

/* ------------------------------- GREEDY ---------------------------------- */

/// `dM/dτ = -1 - 4M/(1-2τ) - M/(κ-τ)`.
pub fn greedy_rhs<T: Scalar>(tau: T, m: T, p: &TheoryParams<T>) -> Result<T, TheoryError> {
    let a = T::one() - two::<T>() * tau;
    let b = p.kappa - tau;
    if !(a > T::zero() && b > T::zero()) {
        return Err(TheoryError::Domain(format!(
            "greedy trend needs tau < min(1/2, kappa); tau = {}",
            f64_of(tau)
        )));
    }
    Ok(-T::one() - T::lit(4.0) * m / a - m / b)
}

/// Fixed-step RK4 solution of the GREEDY ODE from `M(0) = c/2` to its
/// first zero.
pub fn integrate_greedy<T: Scalar>(p: &TheoryParams<T>, step: T) -> Result<OdeTrajectory<T>, TheoryError> {
    let rhs = |tau: T, y: &[T; 1]| greedy_rhs(tau, y[0], p).map(|d| [d]);
    let tau_max = p.greedy_edge() - T::lit(DOMAIN_GUARD);
    let cross = integrate_to_zero(&rhs, [p.c * half()], step, tau_max, 0, "M", &|_, _| Ok(()))?;
    Ok(OdeTrajectory {
        taus: cross.taus,
        states: cross.states.into_iter().map(|s| s[0]).collect(),
        tau0: cross.tau0,
        step,
    })
}

/// Exact GREEDY solution at κ = 1/2:
/// `M(τ) = ((2c+1)(1-2τ)³ - (1-2τ)) / 4`.
pub fn m_closed_half<T: Scalar>(tau: T, c: T) -> T {
    let s = T::one() - two::<T>() * tau;
    ((two::<T>() * c + T::one()) * s * s * s - s) / T::lit(4.0)
}

/// `1/2 - 1/(2 sqrt(2c+1))`.
pub fn tau0_closed_half<T: Scalar>(c: T) -> T {
    half::<T>() - half::<T>() / (two::<T>() * c + T::one()).sqrt()
}

fn check_general_domain<T: Scalar>(tau: T, p: &TheoryParams<T>) -> Result<(), TheoryError> {
    if p.is_half() {
        return Err(TheoryError::Domain(format!(
            "|2 kappa - 1| < {HALF_CROSSOVER:e}; use the kappa = 1/2 form"
        )));
    }
    if !(tau >= T::zero() && tau < p.greedy_edge()) {
        return Err(TheoryError::Domain(format!(
            "tau = {} outside [0, min(1/2, kappa))",
            f64_of(tau)
        )));
    }
    Ok(())
}

fn f_kappa_unchecked<T: Scalar>(tau: T, p: &TheoryParams<T>) -> T {
    let eps = p.epsilon();
    let s = T::one() - two::<T>() * tau;
    p.c * eps * eps / (two::<T>() * p.kappa) + ((p.kappa - tau) / (p.kappa * s)).ln()
        - two::<T>() * eps * tau / s
}

/// The bracketed factor of the general GREEDY solution; it carries the
/// sign of `M`.
pub fn f_kappa<T: Scalar>(tau: T, p: &TheoryParams<T>) -> Result<T, TheoryError> {
    check_general_domain(tau, p)?;
    Ok(f_kappa_unchecked(tau, p))
}

/// Exact GREEDY solution for κ ≠ 1/2:
/// `M(τ) = (κ-τ)(1-2τ)²/(2κ-1)² · f_κ(τ)`.
pub fn m_closed_general<T: Scalar>(tau: T, p: &TheoryParams<T>) -> Result<T, TheoryError> {
    check_general_domain(tau, p)?;
    let eps = p.epsilon();
    let s = T::one() - two::<T>() * tau;
    Ok((p.kappa - tau) * s * s / (eps * eps) * f_kappa_unchecked(tau, p))
}

/// `f_κ` evaluated at `τ = min(1/2, κ) - exp(log_gap)`.
///
/// Stays accurate when the root sits within a few ulps of the singular
/// edge, as it does for small κ.
pub fn f_kappa_log_gap<T: Scalar>(log_gap: T, p: &TheoryParams<T>) -> T {
    let eps = p.epsilon();
    let k = p.kappa;
    let g = log_gap.exp();
    let lead = p.c * eps * eps / (two::<T>() * k);
    if k < half() {
        // κ - τ = g, 1 - 2τ = 1 - 2κ + 2g
        let s = -eps + two::<T>() * g;
        lead + log_gap - k.ln() - s.ln() - two::<T>() * eps * (k - g) / s
    } else {
        // 1 - 2τ = 2g, κ - τ = κ - 1/2 + g
        lead + (k - half() + g).ln() - k.ln() - two::<T>().ln() - log_gap
            - eps * (T::one() - two::<T>() * g) / (two::<T>() * g)
    }
}

/// A root of `f_κ` together with its distance below the edge
/// `min(1/2, κ)` on a log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootLocation<T> {
    pub tau: T,
    /// `ln(min(1/2, κ) - τ)`.
    pub log_gap: T,
}

fn bisect<T: Scalar>(mut lo: T, mut hi: T, positive_at_lo: bool, f: impl Fn(T) -> T) -> T {
    for _ in 0..400 {
        let mid = lo + (hi - lo) * half();
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == T::zero() {
            return mid;
        }
        if (v > T::zero()) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) * half()
}

/// Smallest positive root of `f_κ`, located precisely near the edge.
pub fn tau0_general_located<T: Scalar>(p: &TheoryParams<T>) -> Result<RootLocation<T>, TheoryError> {
    let edge = p.greedy_edge();
    if p.is_half() {
        let tau = tau0_closed_half(p.c);
        return Ok(RootLocation { tau, log_gap: (edge - tau).ln() });
    }
    let grid = T::count(ROOT_SCAN_POINTS);
    let at = |i: usize| edge * T::count(i) / grid;
    let mut prev = T::zero();
    if !(f_kappa_unchecked(prev, p) > T::zero()) {
        return Err(TheoryError::NoRoot("f_kappa(0) is not positive".into()));
    }
    for i in 1..ROOT_SCAN_POINTS {
        let tau = at(i);
        if f_kappa_unchecked(tau, p) <= T::zero() {
            let root = bisect(prev, tau, true, |x| f_kappa_unchecked(x, p));
            return Ok(RootLocation { tau: root, log_gap: (edge - root).ln() });
        }
        prev = tau;
    }
    // Sign change lies in the last cell; f_κ diverges to -∞ at the edge.
    let hi = (edge - prev).ln();
    let fp = |l: T| f_kappa_log_gap(l, p);
    let mut width = T::one();
    let mut lo = hi - width;
    let mut found = fp(lo) <= T::zero();
    for _ in 0..64 {
        if found {
            break;
        }
        width = width * two::<T>();
        lo = hi - width;
        found = fp(lo) <= T::zero();
    }
    if !found {
        return Err(TheoryError::NoRoot(format!(
            "f_kappa stays positive on [0, {}) for c = {}, kappa = {}",
            f64_of(edge),
            f64_of(p.c),
            f64_of(p.kappa)
        )));
    }
    // f is positive at large gap (hi) and non-positive at small gap (lo).
    let log_gap = bisect(lo, hi, false, fp);
    Ok(RootLocation { tau: edge - log_gap.exp(), log_gap })
}

/// Smallest positive root of `M(τ) = 0` from the closed form.
pub fn tau0_general<T: Scalar>(p: &TheoryParams<T>) -> Result<T, TheoryError> {
    tau0_general_located(p).map(|r| r.tau)
}

/* --------------------------- MODIFIED GREEDY ----------------------------- */

/// `Q = N + τ + κ - 1`, the fraction of colors still unused.
#[inline]
pub fn q_fraction<T: Scalar>(tau: T, n: T, kappa: T) -> T {
    n + tau + kappa - T::one()
}

/// `dN/dτ = exp(-(c/κ) N Q) - 2`.
#[inline]
pub fn modified_rhs<T: Scalar>(tau: T, n: T, p: &TheoryParams<T>) -> T {
    (-(p.c / p.kappa) * n * q_fraction(tau, n, p.kappa)).exp() - two::<T>()
}

/// `M = (c/2κ) N² Q`.
#[inline]
pub fn m_from_n<T: Scalar>(tau: T, n: T, p: &TheoryParams<T>) -> T {
    p.c / (two::<T>() * p.kappa) * n * n * q_fraction(tau, n, p.kappa)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedSolution<T> {
    pub trajectory: OdeTrajectory<T>,
    /// Predicted matching density `1 - τ₀`.
    pub mu_over_n: T,
    /// Largest deviation of the grid solution from the integral form
    /// `N(τ) = 1 - 2τ + ∫ exp(-(c/κ) N Q) dσ` (trapezoid rule).
    pub integral_residual: T,
}

/// Solves the reduced MODIFIED GREEDY equation from `N(0) = 1` to its first
/// zero and checks the integral form along the way.
pub fn integrate_modified<T: Scalar>(p: &TheoryParams<T>, step: T) -> Result<ModifiedSolution<T>, TheoryError> {
    let rhs = |tau: T, y: &[T; 1]| Ok([modified_rhs(tau, y[0], p)]);
    let check = |tau: T, y: &[T; 1]| {
        if q_fraction(tau, y[0], p.kappa) <= T::zero() {
            Err(TheoryError::ColorsExhausted { tau: f64_of(tau) })
        } else {
            Ok(())
        }
    };
    // dN/dτ <= -1 so the zero comes by τ = 1.
    let cross = integrate_to_zero(&rhs, [T::one()], step, T::lit(1.5), 0, "N", &check)?;
    let taus = cross.taus;
    let states: Vec<T> = cross.states.into_iter().map(|s| s[0]).collect();
    let residual = integral_form_residual(&taus, &states, p);
    let bound = T::lit(10.0) * step;
    if residual > bound {
        return Err(TheoryError::IntegralForm { residual: f64_of(residual), bound: f64_of(bound) });
    }
    let tau0 = cross.tau0;
    Ok(ModifiedSolution {
        trajectory: OdeTrajectory { taus, states, tau0, step },
        mu_over_n: T::one() - tau0,
        integral_residual: residual,
    })
}

fn integral_form_residual<T: Scalar>(taus: &[T], states: &[T], p: &TheoryParams<T>) -> T {
    let integrand = |i: usize| (-(p.c / p.kappa) * states[i] * q_fraction(taus[i], states[i], p.kappa)).exp();
    let mut acc = T::zero();
    let mut worst = T::zero();
    for i in 1..taus.len() {
        acc = acc + (taus[i] - taus[i - 1]) * half() * (integrand(i - 1) + integrand(i));
        let predicted = T::one() - two::<T>() * taus[i] + acc;
        worst = worst.max((predicted - states[i]).abs());
    }
    worst
}

/// Direct solution of the two-variable MODIFIED GREEDY system
///
/// ```text
/// dM/dτ = λ(e^{-λ} - 2) - M(1 - e^{-λ})/(N + τ + κ - 1)
/// dN/dτ = e^{-λ} - 2,        λ = 2M/N
/// ```
///
/// Stops at the last grid point with `N > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledTrajectory<T> {
    pub taus: Vec<T>,
    pub m: Vec<T>,
    pub n: Vec<T>,
}

pub fn coupled_rhs<T: Scalar>(tau: T, m: T, n: T, p: &TheoryParams<T>) -> Result<(T, T), TheoryError> {
    if !(n > T::zero()) {
        return Err(TheoryError::Domain(format!("N = {} must be positive", f64_of(n))));
    }
    let q = q_fraction(tau, n, p.kappa);
    if !(q > T::zero()) {
        return Err(TheoryError::ColorsExhausted { tau: f64_of(tau) });
    }
    let lambda = two::<T>() * m / n;
    let decay = (-lambda).exp();
    Ok((lambda * (decay - two::<T>()) - m * (T::one() - decay) / q, decay - two::<T>()))
}

pub fn integrate_modified_coupled<T: Scalar>(p: &TheoryParams<T>, step: T) -> Result<CoupledTrajectory<T>, TheoryError> {
    if !(step > T::zero()) {
        return Err(TheoryError::InvalidStep(f64_of(step)));
    }
    let rhs = |tau: T, y: &[T; 2]| coupled_rhs(tau, y[0], y[1], p).map(|(dm, dn)| [dm, dn]);
    let mut y = [p.c * half(), T::one()];
    let mut out = CoupledTrajectory { taus: vec![T::zero()], m: vec![y[0]], n: vec![y[1]] };
    let mut i = 0usize;
    loop {
        let tau = T::count(i) * step;
        // Each step costs N at least `step`; stop before stages can reach N <= 0.
        if y[1] <= T::lit(2.0) * step {
            break;
        }
        let next = match rk4_step(&rhs, tau, &y, step) {
            Ok(v) => v,
            Err(TheoryError::Domain(_)) => break,
            Err(e) => return Err(e),
        };
        if next[1] <= T::zero() {
            break;
        }
        i += 1;
        y = next;
        out.taus.push(T::count(i) * step);
        out.m.push(y[0]);
        out.n.push(y[1]);
    }
    Ok(out)
}

/// `(c - 1 + e^{-c}) / (2c - 1 + e^{-c})`: bound on μ/n for κ ≥ 1/2.
pub fn modified_upper_bound<T: Scalar>(c: T) -> T {
    let num = c + (-c).exp_m1();
    num / (c + num)
}
