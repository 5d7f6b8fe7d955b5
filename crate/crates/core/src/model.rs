//! Birth-death reaction models in both extensive (integer count) and
//! intensive (density) form.
//!
//! A model is an ordered list of reactions, each with stoichiometric step
//! +1 or -1, an exact propensity W_i(X; omega) used by the stochastic
//! simulator, and a density rate w_i(x) used by the mean-field and
//! Hamiltonian machinery. The two forms satisfy W_i(X) = omega * w_i(X/omega)
//! up to O(1) corrections, which is what ties the pictures together.
//!
//! Two systems are bundled:
//!
//! * autocatalytic replicator: xdot = k x^2 (1 - x/C) - eps x, with exact
//!   pairing/competition propensities (k/omega) X(X-1) and
//!   (k/(C omega^2)) X(X-1)(X-2),
//! * Hill birth with linear decay: xdot = k x^2/(A^2 + x^2) - eps x.
//!
//! Custom models are closed-form rate callables; expression parsing is out
//! of scope.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::math;
use crate::numeric;

/// Named model parameters. Bundled models read the fields they use;
/// custom rate callables may capture their own constants instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Growth rate.
    pub k: f64,
    /// Carrying-capacity scale of the autocatalytic competition term.
    pub c: f64,
    /// Half-saturation constant of the Hill birth term.
    pub a: f64,
    /// Decay rate; the bifurcation control parameter.
    pub eps: f64,
}

impl ModelParams {
    /// Scaled defaults (k = C = A = 1) with the given decay rate.
    pub fn scaled(eps: f64) -> Self {
        Self { k: 1.0, c: 1.0, a: 1.0, eps }
    }
}

/// Density rate callable: w_i(x; params).
pub type RateFn = Arc<dyn Fn(f64, &ModelParams) -> f64 + Send + Sync>;
/// Exact propensity callable: W_i(X; omega, params).
pub type PropensityFn = Arc<dyn Fn(u64, f64, &ModelParams) -> f64 + Send + Sync>;

/// One reaction channel: stoichiometric step, exact propensity and
/// density-scaled rate (plus its x-derivative when known in closed form).
#[derive(Clone)]
pub struct ReactionSpec {
    pub label: &'static str,
    /// Stoichiometric change, restricted to +1 or -1.
    pub step: i8,
    intensive: RateFn,
    intensive_dx: Option<RateFn>,
    extensive: PropensityFn,
}

impl ReactionSpec {
    pub fn new(
        label: &'static str,
        step: i8,
        intensive: RateFn,
        extensive: PropensityFn,
    ) -> Self {
        Self { label, step, intensive, intensive_dx: None, extensive }
    }

    pub fn with_derivative(mut self, dx: RateFn) -> Self {
        self.intensive_dx = Some(dx);
        self
    }

    #[inline]
    pub fn intensive(&self, x: f64, params: &ModelParams) -> f64 {
        (self.intensive)(x, params)
    }

    /// dw_i/dx, closed form when provided, five-point stencil otherwise.
    pub fn intensive_dx(&self, x: f64, params: &ModelParams) -> f64 {
        match &self.intensive_dx {
            Some(d) => d(x, params),
            None => numeric::derivative_5pt(&|u| (self.intensive)(u, params), x, x.abs().max(1.0)),
        }
    }

    #[inline]
    pub fn extensive(&self, count: u64, omega: f64, params: &ModelParams) -> f64 {
        (self.extensive)(count, omega, params)
    }
}

impl core::fmt::Debug for ReactionSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ReactionSpec")
            .field("label", &self.label)
            .field("step", &self.step)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Autocatalytic,
    Hill,
    Custom,
}

/// Critical parameter values of the saddle-node structure.
///
/// `eps_c` is where the nontrivial equilibria collide (at `x_c`);
/// `eps_end` bounds the interval above `eps_c` in which the slowing-down
/// phenomenology lives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalParams {
    pub eps_c: f64,
    pub x_c: f64,
    pub eps_end: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    NegativeDensity(f64),
    InvalidParameter(&'static str),
    BadStoichiometry(&'static str),
    NegativeRate { label: &'static str, x: f64 },
    NoSaddleNode,
}

impl core::fmt::Display for ModelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModelError::NegativeDensity(x) => write!(f, "density must be nonnegative, got {x}"),
            ModelError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            ModelError::BadStoichiometry(what) => write!(f, "bad stoichiometry: {what}"),
            ModelError::NegativeRate { label, x } => {
                write!(f, "reaction `{label}` produced a negative rate at x = {x}")
            }
            ModelError::NoSaddleNode => write!(f, "no saddle-node found in the search window"),
        }
    }
}

impl core::error::Error for ModelError {}

/// A birth-death model: ordered reactions plus named parameters.
///
/// Immutable after construction and cheap to clone (reaction callables are
/// shared), so it can be handed to concurrent workers freely.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    kind: ModelKind,
    label: &'static str,
    params: ModelParams,
    reactions: Vec<ReactionSpec>,
}

impl ModelSpec {
    /// Autocatalytic replicator with pairing birth, cubic competition and
    /// linear decay: xdot = k x^2 (1 - x/C) - eps x.
    pub fn autocatalytic(k: f64, c: f64, eps: f64) -> Result<Self, ModelError> {
        require_positive(k, "k")?;
        require_positive(c, "C")?;
        require_positive(eps, "epsilon")?;
        let reactions = alloc::vec![
            ReactionSpec::new(
                "birth",
                1,
                Arc::new(|x, p: &ModelParams| p.k * x * x),
                Arc::new(|n, omega, p: &ModelParams| {
                    let x = n as f64;
                    p.k / omega * x * (x - 1.0)
                }),
            )
            .with_derivative(Arc::new(|x, p: &ModelParams| 2.0 * p.k * x)),
            ReactionSpec::new(
                "competition",
                -1,
                Arc::new(|x, p: &ModelParams| p.k / p.c * x * x * x),
                Arc::new(|n, omega, p: &ModelParams| {
                    let x = n as f64;
                    p.k / (p.c * omega * omega) * x * (x - 1.0) * (x - 2.0)
                }),
            )
            .with_derivative(Arc::new(|x, p: &ModelParams| 3.0 * p.k / p.c * x * x)),
            death_reaction(),
        ];
        Self::build(ModelKind::Autocatalytic, "autocatalytic", ModelParams { k, c, a: 1.0, eps }, reactions)
    }

    /// Hill birth with linear decay: xdot = k x^2/(A^2 + x^2) - eps x.
    pub fn hill(k: f64, a: f64, eps: f64) -> Result<Self, ModelError> {
        require_positive(k, "k")?;
        require_positive(a, "A")?;
        require_positive(eps, "epsilon")?;
        let reactions = alloc::vec![
            ReactionSpec::new(
                "birth",
                1,
                Arc::new(|x, p: &ModelParams| p.k * x * x / (p.a * p.a + x * x)),
                Arc::new(|n, omega, p: &ModelParams| {
                    let x = n as f64;
                    omega * p.k * x * x / (omega * omega * p.a * p.a + x * x)
                }),
            )
            .with_derivative(Arc::new(|x, p: &ModelParams| {
                let s = p.a * p.a + x * x;
                2.0 * p.k * p.a * p.a * x / (s * s)
            })),
            death_reaction(),
        ];
        Self::build(ModelKind::Hill, "hill", ModelParams { k, c: 1.0, a, eps }, reactions)
    }

    /// Linear pure-death chain: the birth channel removed entirely.
    /// Extinction from X_0 has the analytic mean sum_{j=1..X_0} 1/(eps j).
    pub fn pure_death(eps: f64) -> Result<Self, ModelError> {
        require_positive(eps, "epsilon")?;
        Self::build(
            ModelKind::Custom,
            "pure-death",
            ModelParams::scaled(eps),
            alloc::vec![death_reaction()],
        )
    }

    /// User-defined model from closed-form rate callables.
    pub fn custom(
        label: &'static str,
        params: ModelParams,
        reactions: Vec<ReactionSpec>,
    ) -> Result<Self, ModelError> {
        Self::build(ModelKind::Custom, label, params, reactions)
    }

    fn build(
        kind: ModelKind,
        label: &'static str,
        params: ModelParams,
        reactions: Vec<ReactionSpec>,
    ) -> Result<Self, ModelError> {
        if reactions.is_empty() {
            return Err(ModelError::BadStoichiometry("a model needs at least one reaction"));
        }
        for r in &reactions {
            if r.step != 1 && r.step != -1 {
                return Err(ModelError::BadStoichiometry("steps are restricted to +1 / -1"));
            }
            // X = 0 must be absorbing: no removal channel may fire there.
            if r.step == -1 && r.extensive(0, 1.0, &params) != 0.0 {
                return Err(ModelError::BadStoichiometry(
                    "a step -1 reaction has nonzero propensity at X = 0",
                ));
            }
        }
        Ok(Self { kind, label, params, reactions })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        self.label
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn reactions(&self) -> &[ReactionSpec] {
        &self.reactions
    }

    /// Same model at a different decay rate. Sweeps over the control
    /// parameter clone the reaction list (shared callables) only.
    pub fn with_eps(&self, eps: f64) -> Result<Self, ModelError> {
        require_positive(eps, "epsilon")?;
        let mut m = self.clone();
        m.params.eps = eps;
        Ok(m)
    }

    /// Density rates (w_i(x), r_i), one entry per reaction in order.
    pub fn intensive_rates(&self, x: f64) -> Result<Vec<(f64, i8)>, ModelError> {
        if x < 0.0 || !x.is_finite() {
            return Err(ModelError::NegativeDensity(x));
        }
        let mut out = Vec::with_capacity(self.reactions.len());
        for r in &self.reactions {
            let w = r.intensive(x, &self.params);
            if w < 0.0 || !w.is_finite() {
                return Err(ModelError::NegativeRate { label: r.label, x });
            }
            out.push((w, r.step));
        }
        Ok(out)
    }

    /// Exact propensities (W_i(X), r_i) at integer count X and system size omega.
    pub fn extensive_propensities(
        &self,
        count: u64,
        omega: f64,
    ) -> Result<Vec<(f64, i8)>, ModelError> {
        if omega <= 0.0 || !omega.is_finite() {
            return Err(ModelError::InvalidParameter("omega must be positive"));
        }
        let mut out = Vec::with_capacity(self.reactions.len());
        for r in &self.reactions {
            let w = r.extensive(count, omega, &self.params);
            if w < 0.0 || !w.is_finite() {
                return Err(ModelError::NegativeRate { label: r.label, x: count as f64 });
            }
            out.push((w, r.step));
        }
        Ok(out)
    }

    /// Mean-field velocity sum_i r_i w_i(x); the p = 0 restriction of the
    /// Hamiltonian flow.
    pub fn mean_field_rhs(&self, x: f64) -> Result<f64, ModelError> {
        if x < 0.0 || !x.is_finite() {
            return Err(ModelError::NegativeDensity(x));
        }
        Ok(self.rhs_unchecked(x, self.params.eps))
    }

    /// Aggregated birth rate b(x) = sum of step +1 rates.
    pub(crate) fn birth_rate(&self, x: f64) -> f64 {
        self.reactions
            .iter()
            .filter(|r| r.step == 1)
            .map(|r| r.intensive(x, &self.params))
            .sum()
    }

    /// Aggregated death rate d(x) = sum of step -1 rates.
    pub(crate) fn death_rate(&self, x: f64) -> f64 {
        self.reactions
            .iter()
            .filter(|r| r.step == -1)
            .map(|r| r.intensive(x, &self.params))
            .sum()
    }

    pub(crate) fn birth_rate_dx(&self, x: f64) -> f64 {
        self.reactions
            .iter()
            .filter(|r| r.step == 1)
            .map(|r| r.intensive_dx(x, &self.params))
            .sum()
    }

    pub(crate) fn death_rate_dx(&self, x: f64) -> f64 {
        self.reactions
            .iter()
            .filter(|r| r.step == -1)
            .map(|r| r.intensive_dx(x, &self.params))
            .sum()
    }

    fn rhs_unchecked(&self, x: f64, eps: f64) -> f64 {
        let p = ModelParams { eps, ..self.params };
        self.reactions
            .iter()
            .map(|r| r.step as f64 * r.intensive(x, &p))
            .sum()
    }

    /// Critical values of the saddle-node: closed form for the bundled
    /// models, located numerically for custom ones.
    pub fn critical_params(&self) -> Result<CriticalParams, ModelError> {
        let p = &self.params;
        match self.kind {
            ModelKind::Hill => Ok(CriticalParams {
                eps_c: p.k / (2.0 * p.a),
                x_c: p.a,
                eps_end: 3.0 * math::sqrt(3.0) / 8.0 * p.k / p.a,
            }),
            ModelKind::Autocatalytic => Ok(CriticalParams {
                eps_c: p.k * p.c / 4.0,
                x_c: p.c / 2.0,
                eps_end: p.k * p.c / 3.0,
            }),
            ModelKind::Custom => self.locate_saddle_node(),
        }
    }

    /// Numeric saddle-node search for custom models.
    ///
    /// eps_c is bracketed by bisection on max_x of the per-capita growth
    /// rate, then (x_c, eps_c) is polished with a two-dimensional Newton
    /// iteration on (f, df/dx) = (0, 0); eps_end comes from bisection on
    /// the minimum of ln(d'(x)/b'(x)).
    fn locate_saddle_node(&self) -> Result<CriticalParams, ModelError> {
        const X_LO: f64 = 1e-4;
        const X_HI: f64 = 20.0;
        let per_capita_max = |eps: f64| -> (f64, f64) {
            let neg = |x: f64| -self.rhs_unchecked(x, eps) / x;
            let (x, v) = numeric::scan_golden_min(&neg, X_LO, X_HI, 1e-10);
            (x, -v)
        };

        // Bracket eps_c: growth must win at small eps and lose at large eps.
        let mut lo = 1e-6;
        let mut hi = 1.0;
        if per_capita_max(lo).1 <= 0.0 {
            return Err(ModelError::NoSaddleNode);
        }
        while per_capita_max(hi).1 > 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(ModelError::NoSaddleNode);
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if per_capita_max(mid).1 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * hi.max(1.0) {
                break;
            }
        }
        let eps_c0 = 0.5 * (lo + hi);
        let x_c0 = per_capita_max(eps_c0).0;
        let (x_c, eps_c) = self.newton_saddle(x_c0, eps_c0)?;

        // eps_end: the decay-side nullcline branch detaches from p = 0 where
        // min_x ln(d'/b') crosses zero; that minimum grows with eps.
        let p2_min = |eps: f64| -> f64 {
            let params = ModelParams { eps, ..self.params };
            let ratio = |x: f64| {
                let bp: f64 = self
                    .reactions
                    .iter()
                    .filter(|r| r.step == 1)
                    .map(|r| r.intensive_dx(x, &params))
                    .sum();
                let dp: f64 = self
                    .reactions
                    .iter()
                    .filter(|r| r.step == -1)
                    .map(|r| r.intensive_dx(x, &params))
                    .sum();
                math::ln(dp / bp)
            };
            numeric::scan_golden_min(&ratio, X_LO, X_HI, 1e-11).1
        };
        if p2_min(eps_c) >= 0.0 {
            return Err(ModelError::NoSaddleNode);
        }
        let mut hi_end = eps_c * 1.5;
        while p2_min(hi_end) < 0.0 {
            hi_end *= 1.5;
            if hi_end > 1e6 {
                return Err(ModelError::NoSaddleNode);
            }
        }
        let eps_end = numeric::bisect_root(&p2_min, eps_c, hi_end, 1e-13)
            .map_err(|_| ModelError::NoSaddleNode)?;

        Ok(CriticalParams { eps_c, x_c, eps_end })
    }

    fn newton_saddle(&self, mut x: f64, mut eps: f64) -> Result<(f64, f64), ModelError> {
        let f = |x: f64, eps: f64| self.rhs_unchecked(x, eps);
        let fx = |x: f64, eps: f64| numeric::derivative_5pt(&|u| f(u, eps), x, x.abs().max(1.0));
        for _ in 0..40 {
            let r1 = f(x, eps);
            let r2 = fx(x, eps);
            let he = 1e-5 * eps.max(1e-3);
            let hx = 1e-4 * x.abs().max(1e-3);
            let j11 = r2;
            let j12 = (f(x, eps + he) - f(x, eps - he)) / (2.0 * he);
            let j21 = (fx(x + hx, eps) - fx(x - hx, eps)) / (2.0 * hx);
            let j22 = (fx(x, eps + he) - fx(x, eps - he)) / (2.0 * he);
            let det = j11 * j22 - j12 * j21;
            if det == 0.0 || !det.is_finite() {
                return Err(ModelError::NoSaddleNode);
            }
            let dx = (r1 * j22 - r2 * j12) / det;
            let de = (j11 * r2 - j21 * r1) / det;
            x -= dx;
            eps -= de;
            if !(x.is_finite() && eps.is_finite()) || x <= 0.0 || eps <= 0.0 {
                return Err(ModelError::NoSaddleNode);
            }
            if dx.abs() < 1e-13 * x.abs().max(1.0) && de.abs() < 1e-13 * eps.max(1.0) {
                break;
            }
        }
        let resid = f(x, eps).abs();
        let slope = fx(x, eps).abs();
        if resid > 1e-10 || slope > 1e-7 {
            return Err(ModelError::NoSaddleNode);
        }
        Ok((x, eps))
    }
}

fn death_reaction() -> ReactionSpec {
    ReactionSpec::new(
        "death",
        -1,
        Arc::new(|x, p: &ModelParams| p.eps * x),
        Arc::new(|n, _omega, p: &ModelParams| p.eps * n as f64),
    )
    .with_derivative(Arc::new(|_x, p: &ModelParams| p.eps))
}

fn require_positive(v: f64, what: &'static str) -> Result<(), ModelError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter(what))
    }
}
