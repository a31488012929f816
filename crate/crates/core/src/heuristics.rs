//! Closed-form constants and predictors for maximal gaps, first occurrences
//! of gaps, and the square-root difference at record gaps.
//!
//! Every function is generic over [`Real`]; the `f64` instantiations carry
//! the 15-significant-digit contract.

// Domain checks are written as negated comparisons so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use thiserror::Error;

use crate::primality;
use crate::real::Real;
use crate::sieve::PrimeEngine;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Twin-prime constant C₂ = 2·∏_{p>2}(1 − 1/(p−1)²), converged value.
pub const TWIN_PRIME_CONSTANT: f64 = 1.320_323_631_693_739;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeuristicError {
    #[error("{what} is outside its domain: {detail}")]
    Domain { what: &'static str, detail: String },
    #[error("gap model {0:?} needs an explicit prime count")]
    MissingPrimeCount(GapModelKind),
}

fn domain(what: &'static str, detail: impl Into<String>) -> HeuristicError {
    HeuristicError::Domain {
        what,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicConstants<T> {
    pub c2: T,
    /// ln C₂.
    pub c_prime: T,
    pub euler_gamma: T,
    /// 2·e^(−γ), the coefficient in Granville's refinement of Cramér's model.
    pub granville_coeff: T,
}

impl<T: Real> HeuristicConstants<T> {
    pub fn with_c2(c2: T) -> Self {
        let euler_gamma = T::lit(EULER_GAMMA);
        Self {
            c2,
            c_prime: c2.ln(),
            euler_gamma,
            granville_coeff: T::lit(2.0) * (-euler_gamma).exp(),
        }
    }

    /// Built on the stored converged value of C₂.
    pub fn standard() -> Self {
        Self::with_c2(T::lit(TWIN_PRIME_CONSTANT))
    }

    pub fn from_estimate(est: &TwinConstantEstimate<T>) -> Self {
        Self::with_c2(est.value)
    }
}

impl<T: Real> Default for HeuristicConstants<T> {
    fn default() -> Self {
        Self::standard()
    }
}

/// A truncated twin-prime product with a certified bound on what the omitted
/// factors can change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinConstantEstimate<T> {
    pub value: T,
    /// Product runs over odd primes below this bound.
    pub prime_limit: u64,
    /// `value − C₂` lies in `[0, tail_bound]`.
    pub tail_bound: T,
}

/// Upper bound on Σ_{p prime, p >= limit, p odd} 1/(p−1)².
///
/// Primes up to the next multiple `w` of 30 (at least 60) are summed exactly.
/// Beyond `w`, primes sit in the 8 residue classes coprime to 30, so each
/// block `[w + 30j, w + 30j + 30)` holds at most 8 of them and contributes at
/// most 8/(w + 30j − 1)². Summing over j and dominating the j >= 1 terms by
/// an integral gives 8/(w−1)² + (8/30)/(w−1).
fn twin_tail_sum_bound(limit: u64) -> f64 {
    let start = limit.max(3);
    let w = start.div_ceil(30).max(2) * 30;
    let exact: f64 = (start..w)
        .filter(|&n| primality::is_prime(n))
        .map(|p| 1.0 / ((p - 1) as f64).powi(2))
        .sum();
    let w = (w - 1) as f64;
    exact + 8.0 / (w * w) + (8.0 / 30.0) / w
}

pub fn twin_constant<T: Real>(prime_limit: u64) -> TwinConstantEstimate<T> {
    twin_constant_with(&PrimeEngine::default(), prime_limit)
}

/// 2·∏_{2<p<prime_limit}(1 − 1/(p−1)²), summed in log space with `ln_1p`.
pub fn twin_constant_with<T: Real>(engine: &PrimeEngine, prime_limit: u64) -> TwinConstantEstimate<T> {
    let mut log_sum = T::zero();
    engine
        .for_each_prime(3, prime_limit.max(3), |p| {
            let u = T::one() / T::from_int(p - 1).powi(2);
            log_sum = log_sum + (-u).ln_1p();
        })
        .expect("default engine auto-splits");
    let value = T::lit(2.0) * log_sum.exp();

    // The omitted log-tail t = −Σ ln(1 − u) satisfies t <= S/(1 − u_max) with
    // S the bounded sum of u; value − C₂ = value·(1 − e^(−t)) <= value·t.
    let s = twin_tail_sum_bound(prime_limit);
    let u_max = 1.0 / ((prime_limit.max(3) - 1) as f64).powi(2);
    let log_tail = s / (1.0 - u_max);
    // round up slightly so conversion to T cannot undercut the bound
    let tail_bound = value * T::lit(log_tail * (1.0 + 1e-6));
    TwinConstantEstimate {
        value,
        prime_limit,
        tail_bound,
    }
}

/// Which closed form supplies G(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapModelKind {
    /// (x/π(x))·(2 ln π(x) − ln x + c′), with exact π(x).
    WolfExactPi,
    /// ln x·(ln x − 2 ln ln x + c′), the previous one under π(x) ≈ x/ln x.
    WolfGauss,
    /// ln² x.
    Cramer,
    /// 2e^(−γ)·ln² x.
    Granville,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapModel<T> {
    pub kind: GapModelKind,
    pub constants: HeuristicConstants<T>,
}

impl<T: Real> GapModel<T> {
    pub fn new(kind: GapModelKind) -> Self {
        Self {
            kind,
            constants: HeuristicConstants::standard(),
        }
    }

    /// G(x); `pi_x` is required for [`GapModelKind::WolfExactPi`] and ignored
    /// otherwise.
    pub fn eval(&self, x: T, pi_x: Option<T>) -> Result<T, HeuristicError> {
        let c = &self.constants;
        match self.kind {
            GapModelKind::WolfExactPi => {
                let pi_x = pi_x.ok_or(HeuristicError::MissingPrimeCount(self.kind))?;
                g_wolf_with(c, x, pi_x)
            }
            GapModelKind::WolfGauss => g_gauss_with(c, x),
            GapModelKind::Cramer => g_cramer(x),
            GapModelKind::Granville => granville_bound_with(c, x),
        }
    }
}

pub fn g_wolf<T: Real>(x: T, pi_x: T) -> Result<T, HeuristicError> {
    g_wolf_with(&HeuristicConstants::standard(), x, pi_x)
}

pub fn g_wolf_with<T: Real>(c: &HeuristicConstants<T>, x: T, pi_x: T) -> Result<T, HeuristicError> {
    if !(pi_x >= T::one()) {
        return Err(domain("g_wolf", format!("prime count {pi_x} < 1")));
    }
    if !(x > T::zero()) {
        return Err(domain("g_wolf", format!("x = {x}")));
    }
    Ok(x / pi_x * (T::lit(2.0) * pi_x.ln() - x.ln() + c.c_prime))
}

pub fn g_gauss<T: Real>(x: T) -> Result<T, HeuristicError> {
    g_gauss_with(&HeuristicConstants::standard(), x)
}

pub fn g_gauss_with<T: Real>(c: &HeuristicConstants<T>, x: T) -> Result<T, HeuristicError> {
    gauss_form(x, c.c_prime)
}

/// The Gauss-substituted model with ln(c′) in place of c′, as typeset in one
/// source. Kept for comparison only; nothing downstream uses it.
pub fn g_gauss_log_cprime<T: Real>(x: T) -> Result<T, HeuristicError> {
    let c = HeuristicConstants::<T>::standard();
    gauss_form(x, c.c_prime.ln())
}

fn gauss_form<T: Real>(x: T, shift: T) -> Result<T, HeuristicError> {
    if !(x > T::E()) {
        return Err(domain("g_gauss", format!("x = {x} must exceed e")));
    }
    let l = x.ln();
    Ok(l * (l - T::lit(2.0) * l.ln() + shift))
}

pub fn g_cramer<T: Real>(x: T) -> Result<T, HeuristicError> {
    if !(x >= T::one()) {
        return Err(domain("g_cramer", format!("x = {x} < 1")));
    }
    Ok(x.ln().powi(2))
}

pub fn granville_bound<T: Real>(p: T) -> Result<T, HeuristicError> {
    granville_bound_with(&HeuristicConstants::standard(), p)
}

pub fn granville_bound_with<T: Real>(c: &HeuristicConstants<T>, p: T) -> Result<T, HeuristicError> {
    if !(p > T::one()) {
        return Err(domain("granville_bound", format!("p = {p} <= 1")));
    }
    Ok(c.granville_coeff * p.ln().powi(2))
}

/// Predicted first prime after which gap `d` appears: √d·e^√d.
pub fn pf_wolf<T: Real>(d: T) -> Result<T, HeuristicError> {
    if !(d > T::zero()) {
        return Err(domain("pf_wolf", format!("d = {d} <= 0")));
    }
    let s = d.sqrt();
    Ok(s * s.exp())
}

/// Shanks' first-occurrence estimate e^√d.
pub fn pf_shanks<T: Real>(d: T) -> Result<T, HeuristicError> {
    if !(d >= T::zero()) {
        return Err(domain("pf_shanks", format!("d = {d} < 0")));
    }
    Ok(d.sqrt().exp())
}

/// ½·d^(3/4)·e^(−√d/2): leading term of √(p_f + d) − √p_f for p_f = √d·e^√d.
pub fn r_kernel<T: Real>(d: T) -> Result<T, HeuristicError> {
    if !(d >= T::zero()) {
        return Err(domain("r_kernel", format!("d = {d} < 0")));
    }
    Ok(T::lit(0.5) * d.powf(T::lit(0.75)) * (-d.sqrt() / T::lit(2.0)).exp())
}

/// ½·d·e^(−√d/2): the same difference for p_f = e^√d.
pub fn r_shanks<T: Real>(d: T) -> Result<T, HeuristicError> {
    if !(d >= T::zero()) {
        return Err(domain("r_shanks", format!("d = {d} < 0")));
    }
    Ok(T::lit(0.5) * d * (-d.sqrt() / T::lit(2.0)).exp())
}

/// ln^(3/2)(x) / (2√x): the kernel with G(x) = ln² x substituted.
pub fn r_cramer_form<T: Real>(x: T) -> Result<T, HeuristicError> {
    if !(x >= T::one()) {
        return Err(domain("r_cramer_form", format!("x = {x} < 1")));
    }
    Ok(x.ln().powf(T::lit(1.5)) / (T::lit(2.0) * x.sqrt()))
}

/// Predicted R(x): the kernel evaluated at the modelled G(x). The unspecified
/// error term is dropped.
pub fn r_main<T: Real>(x: T, model: &GapModel<T>, pi_x: Option<T>) -> Result<T, HeuristicError> {
    let g = model.eval(x, pi_x)?;
    if !(g >= T::zero()) {
        return Err(domain("r_main", format!("modelled gap {g} at x = {x} is negative")));
    }
    r_kernel(g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RModel<T> {
    Main(GapModel<T>),
    CramerForm,
    /// Shanks kernel on the Gauss-substituted gap model.
    ShanksForm(HeuristicConstants<T>),
}

impl<T: Real> RModel<T> {
    pub fn eval(&self, x: T, pi_x: Option<T>) -> Result<T, HeuristicError> {
        match self {
            RModel::Main(m) => r_main(x, m, pi_x),
            RModel::CramerForm => r_cramer_form(x),
            RModel::ShanksForm(c) => r_shanks(g_gauss_with(c, x)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Wolf,
    Shanks,
}

impl Kernel {
    pub fn eval<T: Real>(self, d: T) -> T {
        let v = match self {
            Kernel::Wolf => r_kernel(d),
            Kernel::Shanks => r_shanks(d),
        };
        v.unwrap_or_else(|_| T::nan())
    }

    /// d/dd ln K(d). Both kernels are d^a·e^(−√d/2), so the sign flips once,
    /// at √d = 4a.
    fn log_slope<T: Real>(self, d: T) -> T {
        let a = match self {
            Kernel::Wolf => T::lit(0.75),
            Kernel::Shanks => T::one(),
        };
        a / d - T::lit(0.25) / d.sqrt()
    }
}

/// Location and value of the kernel maximum on `[lo, hi]`.
///
/// Bisects on the sign of the logarithmic derivative; the kernels are
/// unimodal, so a monotone interval resolves to the matching endpoint.
pub fn kernel_argmax_on<T: Real>(kernel: Kernel, lo: T, hi: T) -> (T, T) {
    let tol = T::lit(1e-12);
    let (mut a, mut b) = (lo.max(T::min_positive_value()), hi);
    if kernel.log_slope(b) >= T::zero() {
        return (hi, kernel.eval(hi));
    }
    if kernel.log_slope(a) <= T::zero() {
        return (lo, kernel.eval(lo));
    }
    while b - a > tol * b.max(T::one()) {
        let m = (a + b) / T::lit(2.0);
        if m <= a || m >= b {
            break;
        }
        if kernel.log_slope(m) > T::zero() {
            a = m;
        } else {
            b = m;
        }
    }
    let x = (a + b) / T::lit(2.0);
    (x, kernel.eval(x))
}

pub fn kernel_argmax<T: Real>(kernel: Kernel) -> (T, T) {
    kernel_argmax_on(kernel, T::zero(), T::lit(100.0))
}
