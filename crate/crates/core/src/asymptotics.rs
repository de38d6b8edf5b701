//! Closed-form estimates and brackets for the GREEDY stopping time τ₀.
//!
//! Three regimes are covered:
//!
//! * near-half: `κ = (1 + ε)/2` with small `ε`, bracketing the substitution
//!   `h = (2κ - 1)/(1 - 2τ)` which turns `f_κ = 0` into `α - h + ln(1 + h) = 0`;
//! * large-kappa: `κ ≥ 1`, `c ≥ c* = (e - 1)(2κ/(2κ - 1))²`, via
//!   `z = (κ - τ)/(κ(1 - 2τ))` and the fixed point `z = β + ln z / 2κ`;
//! * small-kappa: `κ < 1/2c`, `c > 5`, where τ₀ is exponentially close to κ.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ode::{tau0_closed_half, tau0_general, RootLocation, TheoryError, TheoryParams};
use crate::scalar::{half, two, Scalar};

/// Acceptance threshold on `sqrt(2α)` for the κ > 1/2 near-half bracket.
pub const NEAR_HALF_MAX_ROOT: f64 = 0.9;
/// Acceptance threshold on `|h|` for the κ < 1/2 near-half bracket.
pub const NEAR_HALF_MAX_H_BELOW: f64 = 1.0 / 3.0;
/// `c` must exceed this for the small-kappa bounds.
pub const SMALL_KAPPA_MIN_C: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    NearHalf,
    LargeKappa,
    SmallKappa,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::NearHalf => "near-half",
            Regime::LargeKappa => "large-kappa",
            Regime::SmallKappa => "small-kappa",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Intermediate quantities behind a bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BracketDetail<T> {
    NearHalf {
        alpha: T,
        /// Bounds on `|h|` at the root.
        h_lower: T,
        h_upper: T,
        below_half: bool,
    },
    LargeKappa {
        beta: T,
        c_star: T,
        delta_lower: T,
        delta_upper: T,
        z_lower: T,
        z_upper: T,
        z_estimate: T,
        /// Whether `κ ≥ 1` and `c ≥ c*` hold.
        proven: bool,
    },
    SmallKappa {
        /// Bounds on `ln(κ - τ₀)`; the τ bounds round to κ in floating
        /// point once `c/2κ` gets large.
        log_gap_lower: T,
        log_gap_upper: T,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lower: T,
    pub upper: T,
    pub estimate: T,
    pub regime: Regime,
    pub detail: BracketDetail<T>,
}

impl<T: Scalar> Bracket<T> {
    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    /// Whether a root of `f_κ` lies inside the bracket. Small-kappa brackets
    /// compare on the log-gap scale.
    pub fn contains(&self, root: &RootLocation<T>) -> bool {
        match self.detail {
            BracketDetail::SmallKappa { log_gap_lower, log_gap_upper } => {
                log_gap_lower <= root.log_gap && root.log_gap <= log_gap_upper
            }
            _ => self.lower <= root.tau && root.tau <= self.upper,
        }
    }
}

/// `α = c(2κ-1)²/(2κ) + ln(1/(2κ)) + (2κ-1)`.
pub fn alpha<T: Scalar>(p: &TheoryParams<T>) -> T {
    let eps = p.epsilon();
    // ln(1/(2κ)) + ε = ε - ln(1 + ε)
    p.c * eps * eps / (two::<T>() * p.kappa) + (eps - eps.ln_1p())
}

fn regime_err<T>(msg: String) -> Result<T, TheoryError> {
    Err(TheoryError::Regime(msg))
}

/// Bracket for τ₀ when κ is close to 1/2.
pub fn tau0_near_half<T: Scalar>(p: &TheoryParams<T>) -> Result<Bracket<T>, TheoryError> {
    let eps = p.epsilon();
    if eps == T::zero() {
        return regime_err("kappa = 1/2 exactly; use the closed form".into());
    }
    let a = alpha(p);
    let s = (two::<T>() * a).sqrt();
    let tau_of = |h_abs: T| half::<T>() * (T::one() - eps.abs() / h_abs);
    if eps > T::zero() {
        if !(s < T::lit(NEAR_HALF_MAX_ROOT)) {
            return regime_err(format!(
                "sqrt(2 alpha) = {} is not below {NEAR_HALF_MAX_ROOT}",
                s.to_f64().unwrap_or(f64::NAN)
            ));
        }
        let h_upper = (two::<T>() * a / (T::one() - s)).sqrt();
        Ok(Bracket {
            lower: tau_of(s),
            upper: tau_of(h_upper),
            estimate: tau_of(s),
            regime: Regime::NearHalf,
            detail: BracketDetail::NearHalf { alpha: a, h_lower: s, h_upper, below_half: false },
        })
    } else {
        if !(s <= T::lit(NEAR_HALF_MAX_H_BELOW)) {
            return regime_err(format!(
                "|h| bound sqrt(2 alpha) = {} exceeds 1/3",
                s.to_f64().unwrap_or(f64::NAN)
            ));
        }
        let h_lower = (two::<T>() * a / (T::one() + s)).sqrt();
        Ok(Bracket {
            lower: tau_of(h_lower),
            upper: tau_of(s),
            estimate: tau_of(s),
            regime: Regime::NearHalf,
            detail: BracketDetail::NearHalf { alpha: a, h_lower, h_upper: s, below_half: true },
        })
    }
}

/// `(e - 1)(2κ/(2κ - 1))²`.
pub fn c_star<T: Scalar>(kappa: T) -> T {
    let r = two::<T>() * kappa / (two::<T>() * kappa - T::one());
    (T::E() - T::one()) * r * r
}

/// The large-kappa δ-bracket evaluated without checking `κ ≥ 1`, `c ≥ c*`.
/// Requires only `κ > 1/2`; [`BracketDetail::LargeKappa::proven`] records
/// whether the stronger conditions hold.
pub fn large_kappa_bracket<T: Scalar>(p: &TheoryParams<T>) -> Result<Bracket<T>, TheoryError> {
    let k = p.kappa;
    if !(k > half()) {
        return regime_err("large-kappa bracket needs kappa > 1/2".into());
    }
    let two_k = two::<T>() * k;
    let ratio = (two_k - T::one()) / two_k;
    let beta = p.c * ratio * ratio + T::one();
    if !(two_k * beta > T::one()) {
        return regime_err("2 kappa beta must exceed 1".into());
    }
    let delta_lower = T::one() / (two_k * beta);
    let delta_upper = T::one() / (two_k * beta - T::one());
    let z_of = |d: T| beta + (T::one() + d) * beta.ln() / two_k;
    let tau_of = |z: T| k * (z - T::one()) / (two_k * z - T::one());
    let (z_lower, z_upper) = (z_of(delta_lower), z_of(delta_upper));
    let z_estimate = z_of((delta_lower + delta_upper) * half());
    let cs = c_star(k);
    Ok(Bracket {
        lower: tau_of(z_lower),
        upper: tau_of(z_upper),
        estimate: tau_of(z_estimate),
        regime: Regime::LargeKappa,
        detail: BracketDetail::LargeKappa {
            beta,
            c_star: cs,
            delta_lower,
            delta_upper,
            z_lower,
            z_upper,
            z_estimate,
            proven: k >= T::one() && p.c >= cs,
        },
    })
}

/// Bracket for τ₀ when κ ≥ 1 and c ≥ c*.
pub fn tau0_large_kappa<T: Scalar>(p: &TheoryParams<T>) -> Result<Bracket<T>, TheoryError> {
    if p.kappa < T::one() {
        return regime_err("large-kappa bracket needs kappa >= 1".into());
    }
    let cs = c_star(p.kappa);
    if p.c < cs {
        return regime_err(format!(
            "c = {} is below c* = {}",
            p.c.to_f64().unwrap_or(f64::NAN),
            cs.to_f64().unwrap_or(f64::NAN)
        ));
    }
    large_kappa_bracket(p)
}

/// `κ(1 - e^{-c/2κ + 2c}) < τ₀ < κ(1 - e^{-c/2κ})` for κ < 1/2c, c > 5.
pub fn tau0_small_kappa_bounds<T: Scalar>(p: &TheoryParams<T>) -> Result<Bracket<T>, TheoryError> {
    let (c, k) = (p.c, p.kappa);
    if !(c > T::lit(SMALL_KAPPA_MIN_C)) {
        return regime_err("small-kappa bounds need c > 5".into());
    }
    if !(two::<T>() * c * k < T::one()) {
        return regime_err("small-kappa bounds need kappa < 1/(2c)".into());
    }
    let x_hi = -c / (two::<T>() * k);
    let x_lo = x_hi + two::<T>() * c;
    // κ(1 - e^x) = -κ expm1(x)
    let upper = -k * x_hi.exp_m1();
    let lower = -k * x_lo.exp_m1();
    Ok(Bracket {
        lower,
        upper,
        estimate: upper,
        regime: Regime::SmallKappa,
        detail: BracketDetail::SmallKappa {
            log_gap_lower: k.ln() + x_hi,
            log_gap_upper: k.ln() + x_lo,
        },
    })
}

/// Every bracket whose regime preconditions hold for `p`.
pub fn applicable_brackets<T: Scalar>(p: &TheoryParams<T>) -> Vec<Bracket<T>> {
    [tau0_near_half(p), tau0_large_kappa(p), tau0_small_kappa_bounds(p)]
        .into_iter()
        .filter_map(Result::ok)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem1Case {
    /// κ = 1/2, exact.
    A,
    /// κ near 1/2.
    B,
    /// κ < 1/2c, c > 5.
    C,
    /// κ ≥ 1, c ≥ c*.
    D,
    /// No asymptotic regime applies; numeric root of `f_κ`.
    General,
}

impl Theorem1Case {
    pub fn name(self) -> &'static str {
        match self {
            Theorem1Case::A => "a",
            Theorem1Case::B => "b",
            Theorem1Case::C => "c",
            Theorem1Case::D => "d",
            Theorem1Case::General => "general",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Prediction<T> {
    pub case: Theorem1Case,
    /// Predicted GREEDY matching density.
    pub mu_over_n: T,
    pub bracket: Option<Bracket<T>>,
    /// Case d: `1/2 (1 - 1/((c+1) - c/2κ + ln(c+1)/(2κ-1)))`.
    pub leading_form: Option<T>,
    /// Case d with a `2c + 1 + ε_κ` denominator, kept for comparison.
    pub two_c_form: Option<T>,
}

/// `ε_κ = ln(c+1)/(2κ-1) - c/(2κ)`.
pub fn epsilon_kappa<T: Scalar>(p: &TheoryParams<T>) -> T {
    (p.c + T::one()).ln() / p.epsilon() - p.c / (two::<T>() * p.kappa)
}

/// Dispatches to the asymptotic regime that applies; always produces a
/// prediction.
pub fn theorem1_prediction<T: Scalar>(p: &TheoryParams<T>) -> Result<Theorem1Prediction<T>, TheoryError> {
    let plain = |case, mu, bracket| Theorem1Prediction {
        case,
        mu_over_n: mu,
        bracket,
        leading_form: None,
        two_c_form: None,
    };
    if p.is_half() {
        return Ok(plain(Theorem1Case::A, tau0_closed_half(p.c), None));
    }
    if let Ok(b) = tau0_near_half(p) {
        return Ok(plain(Theorem1Case::B, b.estimate, Some(b)));
    }
    if let Ok(b) = tau0_small_kappa_bounds(p) {
        return Ok(plain(Theorem1Case::C, b.estimate, Some(b)));
    }
    if let Ok(b) = tau0_large_kappa(p) {
        let ek = epsilon_kappa(p);
        let one = T::one();
        let lead_den = p.c + one + ek;
        let two_c_den = two::<T>() * p.c + one + ek;
        return Ok(Theorem1Prediction {
            case: Theorem1Case::D,
            mu_over_n: b.estimate,
            bracket: Some(b),
            leading_form: Some(half::<T>() * (one - one / lead_den)),
            two_c_form: Some(half::<T>() * (one - one / two_c_den)),
        });
    }
    Ok(plain(Theorem1Case::General, tau0_general(p)?, None))
}
