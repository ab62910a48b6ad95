//! Test functions on `[0, L]`, the support constant `C(x)`, and grid
//! certification of the function classes the bounds depend on.
//!
//! A certificate only ever says "no violation was found on this grid". It is
//! a necessary-condition test and records the grid it used.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use bitflags::bitflags;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default number of uniform grid points used by the certifiers.
pub const DEFAULT_GRID: usize = 257;
/// Absolute tolerance below which a negative certification margin is
/// treated as rounding noise.
pub const CERT_TOL_ABS: f64 = 1e-12;
/// Relative slack on the interval end points absorbing rounding in computed
/// arguments such as `a_i / a_n`.
const DOMAIN_SLACK: f64 = 1e-12;
const CERT_SEED: u64 = 0x5eed_0001;
const MAX_WITNESSES: usize = 8;

bitflags! {
    /// Class memberships a function model declares.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub struct ClassFlags: u8 {
        const POSITIVE = 1;
        const INCREASING = 1 << 1;
        const CONVEX = 1 << 2;
        const SUPERQUADRATIC = 1 << 3;
        const SUBQUADRATIC = 1 << 4;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionClass {
    Positive,
    Increasing,
    Convex,
    Superquadratic,
    Subquadratic,
}

impl FunctionClass {
    pub const ALL: [FunctionClass; 5] = [
        FunctionClass::Positive,
        FunctionClass::Increasing,
        FunctionClass::Convex,
        FunctionClass::Superquadratic,
        FunctionClass::Subquadratic,
    ];

    pub fn flag(self) -> ClassFlags {
        match self {
            FunctionClass::Positive => ClassFlags::POSITIVE,
            FunctionClass::Increasing => ClassFlags::INCREASING,
            FunctionClass::Convex => ClassFlags::CONVEX,
            FunctionClass::Superquadratic => ClassFlags::SUPERQUADRATIC,
            FunctionClass::Subquadratic => ClassFlags::SUBQUADRATIC,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionClass::Positive => "positive",
            FunctionClass::Increasing => "increasing",
            FunctionClass::Convex => "convex",
            FunctionClass::Superquadratic => "superquadratic",
            FunctionClass::Subquadratic => "subquadratic",
        }
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "function class",
                spec: s.to_string(),
            })
    }
}

/// An evaluable function on `[0, L]` together with the classes it claims to
/// belong to.
#[derive(Clone)]
pub struct FunctionModel {
    name: String,
    domain_end: f64,
    eval: RealFn,
    derivative: Option<RealFn>,
    flags: ClassFlags,
}

impl fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionModel")
            .field("name", &self.name)
            .field("domain_end", &self.domain_end)
            .field("has_derivative", &self.derivative.is_some())
            .field("flags", &self.flags)
            .finish()
    }
}

impl FunctionModel {
    /// Wraps `eval` as a model on `[0, domain_end]`. The function must have a
    /// finite value at both end points.
    pub fn new<F>(name: impl Into<String>, domain_end: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(domain_end.is_finite() && domain_end > 0.0) {
            return Err(Error::invalid(format!(
                "domain end must be positive and finite, got {domain_end}"
            )));
        }
        let name = name.into();
        for x in [0.0, domain_end] {
            let v = eval(x);
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} is not finite at x = {x}")));
            }
        }
        Ok(FunctionModel {
            name,
            domain_end,
            eval: Arc::new(eval),
            derivative: None,
            flags: ClassFlags::empty(),
        })
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn with_flags(mut self, flags: ClassFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_end(&self) -> f64 {
        self.domain_end
    }

    pub fn flags(&self) -> ClassFlags {
        self.flags
    }

    pub fn has_class(&self, class: FunctionClass) -> bool {
        self.flags.contains(class.flag())
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Evaluates without a domain check.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluates at `x` after checking `x ∈ [0, L]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = self.check_arg("x", x)?;
        Ok(self.value(x))
    }

    /// Analytic derivative at `x`, when the model has one.
    pub fn derivative(&self, x: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(x))
    }

    /// Clamps `x` into the domain if it misses by rounding only, otherwise
    /// reports a domain violation naming `what`.
    pub fn check_arg(&self, what: &str, x: f64) -> Result<f64> {
        let slack = DOMAIN_SLACK * self.domain_end.max(1.0);
        if x.is_nan() || x < -slack || x > self.domain_end + slack {
            return Err(Error::domain(what, x, self.domain_end));
        }
        Ok(x.clamp(0.0, self.domain_end))
    }

    /// The model of `-f`. Flags swap superquadratic and subquadratic; the
    /// shape flags do not carry over.
    pub fn negate(&self) -> FunctionModel {
        let eval = Arc::clone(&self.eval);
        let mut flags = ClassFlags::empty();
        if self.flags.contains(ClassFlags::SUPERQUADRATIC) {
            flags |= ClassFlags::SUBQUADRATIC;
        }
        if self.flags.contains(ClassFlags::SUBQUADRATIC) {
            flags |= ClassFlags::SUPERQUADRATIC;
        }
        FunctionModel {
            name: format!("neg({})", self.name),
            domain_end: self.domain_end,
            eval: Arc::new(move |x| -eval(x)),
            derivative: self.derivative.as_ref().map(|d| {
                let d = Arc::clone(d);
                Arc::new(move |x: f64| -d(x)) as RealFn
            }),
            flags,
        }
    }

    /// Largest relative disagreement between the analytic derivative and a
    /// central difference over the interior of a uniform grid, with the point
    /// where it occurs. `None` when the model has no derivative.
    pub fn derivative_mismatch(&self, grid_size: usize) -> Option<(f64, f64)> {
        let d = self.derivative.as_ref()?;
        let h = 1e-6 * self.domain_end;
        let mut worst = (0.0, 0.0);
        for k in 1..grid_size.saturating_sub(1) {
            let x = uniform_point(k, grid_size, self.domain_end);
            if x - h < 0.0 || x + h > self.domain_end {
                continue;
            }
            let fd = (self.value(x + h) - self.value(x - h)) / (2.0 * h);
            let exact = d(x);
            let err = (exact - fd).abs() / exact.abs().max(1.0);
            if err > worst.1 {
                worst = (x, err);
            }
        }
        Some(worst)
    }

    /// Parses a catalog spec: `pow:m`, `pnorm:p`, `pnorm_m1:p`, `xlog`,
    /// `xlog3` or `zero`.
    pub fn from_spec(spec: &str) -> Result<FunctionModel> {
        let spec = spec.trim();
        let (kind, arg) = match spec.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (spec, None),
        };
        let param = |arg: Option<&str>| -> Result<f64> {
            let raw = arg.ok_or_else(|| Error::parse("function", spec, "missing exponent"))?;
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::parse("function", spec, format!("`{raw}` is not a number")))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::parse("function", spec, "exponent must be positive"));
            }
            Ok(v)
        };
        let no_arg = |arg: Option<&str>| -> Result<()> {
            match arg {
                None => Ok(()),
                Some(_) => Err(Error::parse("function", spec, "takes no parameter")),
            }
        };
        match kind {
            "pow" => Ok(power(param(arg)?)),
            "pnorm" => Ok(pnorm(param(arg)?)),
            "pnorm_m1" => Ok(pnorm_minus_one(param(arg)?)),
            "xlog" => no_arg(arg).map(|_| xlog()),
            "xlog3" => no_arg(arg).map(|_| xlog3()),
            "zero" => no_arg(arg).map(|_| zero()),
            _ => Err(Error::Unknown {
                kind: "function",
                spec: spec.to_string(),
            }),
        }
    }
}

fn model(name: String, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> FunctionModel {
    FunctionModel::new(name, 1.0, eval).expect("catalog functions are finite on [0, 1]")
}

/// `x^m` on `[0, 1]`.
pub fn power(m: f64) -> FunctionModel {
    let mut flags = ClassFlags::POSITIVE | ClassFlags::INCREASING;
    if m >= 1.0 {
        flags |= ClassFlags::CONVEX;
    }
    if m >= 2.0 {
        flags |= ClassFlags::SUPERQUADRATIC;
    }
    if m <= 2.0 {
        flags |= ClassFlags::SUBQUADRATIC;
    }
    model(format!("pow:{m}"), move |x| x.powf(m))
        .with_derivative(move |x| m * x.powf(m - 1.0))
        .with_flags(flags)
}

/// `(1 + x^p)^{1/p}` on `[0, 1]`.
pub fn pnorm(p: f64) -> FunctionModel {
    let mut flags = ClassFlags::POSITIVE | ClassFlags::INCREASING;
    if p >= 1.0 {
        flags |= ClassFlags::CONVEX | ClassFlags::SUBQUADRATIC;
    }
    model(format!("pnorm:{p}"), move |x| {
        (1.0 + x.powf(p)).powf(1.0 / p)
    })
    .with_derivative(move |x| (1.0 + x.powf(p)).powf(1.0 / p - 1.0) * x.powf(p - 1.0))
    .with_flags(flags)
}

/// `(1 + x^p)^{1/p} - 1` on `[0, 1]`.
pub fn pnorm_minus_one(p: f64) -> FunctionModel {
    let mut flags = ClassFlags::POSITIVE | ClassFlags::INCREASING;
    if p >= 1.0 {
        flags |= ClassFlags::CONVEX;
    }
    if (1.0..=2.0).contains(&p) {
        flags |= ClassFlags::SUBQUADRATIC;
    }
    // exp_m1/ln_1p keep the value accurate near zero where x^p is tiny.
    model(format!("pnorm_m1:{p}"), move |x| {
        (x.powf(p).ln_1p() / p).exp_m1()
    })
    .with_derivative(move |x| (1.0 + x.powf(p)).powf(1.0 / p - 1.0) * x.powf(p - 1.0))
    .with_flags(flags)
}

/// `x² − 2x² log x` with value 0 at the origin. Increasing and subquadratic
/// on `[0, 1]` but neither convex nor concave.
pub fn xlog() -> FunctionModel {
    model("xlog".to_string(), |x| {
        if x == 0.0 {
            0.0
        } else {
            x * x - 2.0 * x * x * x.ln()
        }
    })
    .with_derivative(|x| if x == 0.0 { 0.0 } else { -4.0 * x * x.ln() })
    .with_flags(ClassFlags::POSITIVE | ClassFlags::INCREASING | ClassFlags::SUBQUADRATIC)
}

/// `3x² − 2x² log x` with value 0 at the origin.
pub fn xlog3() -> FunctionModel {
    model("xlog3".to_string(), |x| {
        if x == 0.0 {
            0.0
        } else {
            3.0 * x * x - 2.0 * x * x * x.ln()
        }
    })
    .with_derivative(|x| {
        if x == 0.0 {
            0.0
        } else {
            4.0 * x - 4.0 * x * x.ln()
        }
    })
    .with_flags(
        ClassFlags::POSITIVE
            | ClassFlags::INCREASING
            | ClassFlags::CONVEX
            | ClassFlags::SUBQUADRATIC,
    )
}

/// The zero function, a degenerate member of every class.
pub fn zero() -> FunctionModel {
    model("zero".to_string(), |_| 0.0)
        .with_derivative(|_| 0.0)
        .with_flags(ClassFlags::all())
}

/// Every built-in function model.
pub fn catalog() -> Vec<FunctionModel> {
    let mut out: Vec<FunctionModel> = [1.0, 1.5, 2.0, 2.5, 3.0, 4.0]
        .into_iter()
        .map(power)
        .collect();
    out.extend([1.0, 2.0, 3.0].into_iter().map(pnorm));
    out.extend([1.0, 2.0].into_iter().map(pnorm_minus_one));
    out.push(xlog3());
    out.push(xlog());
    out.push(zero());
    out
}

#[derive(Clone)]
pub enum SupportMode {
    AnalyticDerivative,
    NumericDerivative,
    /// An explicit `C(x)` for `f`, for functions whose support constant is
    /// not a derivative.
    UserSupplied(RealFn),
}

impl fmt::Debug for SupportMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportMode::AnalyticDerivative => f.write_str("AnalyticDerivative"),
            SupportMode::NumericDerivative => f.write_str("NumericDerivative"),
            SupportMode::UserSupplied(_) => f.write_str("UserSupplied(..)"),
        }
    }
}

/// How the candidate `C(x)` of the superquadratic inequality is obtained.
#[derive(Debug, Clone)]
pub struct SupportConstantPolicy {
    pub mode: SupportMode,
    /// Finite-difference step for numeric mode, and for the one-sided
    /// fallback when an analytic derivative is not finite at an end point.
    pub step: f64,
}

impl SupportConstantPolicy {
    pub fn analytic(f: &FunctionModel) -> Self {
        SupportConstantPolicy {
            mode: SupportMode::AnalyticDerivative,
            step: 1e-6 * f.domain_end(),
        }
    }

    pub fn numeric(step: f64) -> Self {
        SupportConstantPolicy {
            mode: SupportMode::NumericDerivative,
            step,
        }
    }

    pub fn user_supplied<F>(f: &FunctionModel, c: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SupportConstantPolicy {
            mode: SupportMode::UserSupplied(Arc::new(c)),
            step: 1e-6 * f.domain_end(),
        }
    }

    /// Analytic derivative when the model has one, otherwise a central
    /// difference with step `1e-6 L`.
    pub fn default_for(f: &FunctionModel) -> Self {
        if f.has_derivative() {
            Self::analytic(f)
        } else {
            Self::numeric(1e-6 * f.domain_end())
        }
    }

    pub fn validate(&self, f: &FunctionModel) -> Result<()> {
        if matches!(self.mode, SupportMode::AnalyticDerivative) && !f.has_derivative() {
            return Err(Error::invalid(format!(
                "analytic support constant requested but {} has no derivative",
                f.name()
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::invalid(format!(
                "finite-difference step must be positive, got {}",
                self.step
            )));
        }
        if self.step > f.domain_end() / 4.0 {
            return Err(Error::invalid(format!(
                "finite-difference step {} exceeds L/4 = {}",
                self.step,
                f.domain_end() / 4.0
            )));
        }
        Ok(())
    }

    fn is_numeric(&self) -> bool {
        matches!(self.mode, SupportMode::NumericDerivative)
    }

    /// The policy for `-f`: a user-supplied `C` is negated along with `f`.
    fn negated(&self) -> Self {
        let mode = match &self.mode {
            SupportMode::UserSupplied(c) => {
                let c = Arc::clone(c);
                SupportMode::UserSupplied(Arc::new(move |x| -c(x)))
            }
            other => other.clone(),
        };
        SupportConstantPolicy {
            mode,
            step: self.step,
        }
    }
}

fn finite_difference(f: &FunctionModel, x: f64, h: f64) -> f64 {
    let l = f.domain_end();
    if x - h < 0.0 {
        (f.value(x + h) - f.value(x)) / h
    } else if x + h > l {
        (f.value(x) - f.value(x - h)) / h
    } else {
        (f.value(x + h) - f.value(x - h)) / (2.0 * h)
    }
}

/// The candidate support constant `C(x)`.
pub fn support_constant(f: &FunctionModel, policy: &SupportConstantPolicy, x: f64) -> Result<f64> {
    policy.validate(f)?;
    let x = f.check_arg("x", x)?;
    Ok(support_constant_unchecked(f, policy, x))
}

fn support_constant_unchecked(f: &FunctionModel, policy: &SupportConstantPolicy, x: f64) -> f64 {
    match &policy.mode {
        SupportMode::AnalyticDerivative => match f.derivative(x) {
            Some(d) if d.is_finite() => d,
            _ => finite_difference(f, x, policy.step),
        },
        SupportMode::NumericDerivative => finite_difference(f, x, policy.step),
        SupportMode::UserSupplied(c) => c(x),
    }
}

/// Outcome of a grid class check.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub class_checked: FunctionClass,
    pub passed: bool,
    pub worst_margin: f64,
    /// Points (or pairs of points) at which the worst margin occurred.
    pub witness: Vec<Vec<f64>>,
    pub grid_size: usize,
    pub tol_abs: f64,
    /// Set when `C(x)` came from finite differences, in which case a failure
    /// may be an artefact of the candidate rather than of `f`.
    pub numeric_support: bool,
}

impl Certificate {
    fn from_scan(
        class: FunctionClass,
        scan: Scan,
        grid_size: usize,
        numeric_support: bool,
    ) -> Self {
        Certificate {
            class_checked: class,
            passed: scan.worst >= -CERT_TOL_ABS,
            worst_margin: scan.worst,
            witness: scan.witness,
            grid_size,
            tol_abs: CERT_TOL_ABS,
            numeric_support,
        }
    }
}

/// Tracks the minimum margin and the points attaining it.
struct Scan {
    worst: f64,
    witness: Vec<Vec<f64>>,
}

impl Scan {
    fn new() -> Self {
        Scan {
            worst: f64::INFINITY,
            witness: Vec::new(),
        }
    }

    fn offer(&mut self, margin: f64, point: &[f64]) {
        // NaN margins are treated as violations.
        let margin = if margin.is_nan() {
            f64::NEG_INFINITY
        } else {
            margin
        };
        if margin < self.worst {
            self.worst = margin;
            self.witness.clear();
            self.witness.push(point.to_vec());
        } else if margin == self.worst && self.witness.len() < MAX_WITNESSES {
            self.witness.push(point.to_vec());
        }
    }
}

fn uniform_point(k: usize, grid_size: usize, l: f64) -> f64 {
    (k as f64 / (grid_size - 1) as f64) * l
}

/// Uniform grid of `grid_size` points on `[0, L]` followed by `grid_size`
/// fixed-seed uniform random points. The random points for a grid of size
/// `g` are a prefix of those for any larger grid.
pub fn certification_points(domain_end: f64, grid_size: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(CERT_SEED);
    let mut pts: Vec<f64> = (0..grid_size)
        .map(|k| uniform_point(k, grid_size, domain_end))
        .collect();
    pts.extend((0..grid_size).map(|_| rng.random::<f64>() * domain_end));
    pts
}

fn check_grid_size(grid_size: usize) -> Result<()> {
    if grid_size < 3 {
        return Err(Error::invalid(format!(
            "grid size must be at least 3, got {grid_size}"
        )));
    }
    Ok(())
}

/// Scans `f(y) − f(x) − C(x)(y − x) − f(|y − x|)` over all ordered pairs of
/// the certification points.
pub fn check_superquadratic(
    f: &FunctionModel,
    policy: &SupportConstantPolicy,
    grid_size: usize,
) -> Result<Certificate> {
    check_grid_size(grid_size)?;
    let points = certification_points(f.domain_end(), grid_size);
    check_superquadratic_on(f, policy, &points, grid_size, FunctionClass::Superquadratic)
}

/// `f` is subquadratic when `-f` is superquadratic; the support constant is
/// taken for `-f`.
pub fn check_subquadratic(
    f: &FunctionModel,
    policy: &SupportConstantPolicy,
    grid_size: usize,
) -> Result<Certificate> {
    check_grid_size(grid_size)?;
    let neg = f.negate();
    let points = certification_points(f.domain_end(), grid_size);
    check_superquadratic_on(
        &neg,
        &policy.negated(),
        &points,
        grid_size,
        FunctionClass::Subquadratic,
    )
}

/// Superquadratic scan over an explicit point set.
pub fn check_superquadratic_on(
    f: &FunctionModel,
    policy: &SupportConstantPolicy,
    points: &[f64],
    grid_size: usize,
    class: FunctionClass,
) -> Result<Certificate> {
    policy.validate(f)?;
    let points: Vec<f64> = points
        .iter()
        .map(|&x| f.check_arg("grid point", x))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = points.iter().map(|&x| f.value(x)).collect();
    let support: Vec<f64> = points
        .iter()
        .map(|&x| support_constant_unchecked(f, policy, x))
        .collect();
    let mut scan = Scan::new();
    for (i, &x) in points.iter().enumerate() {
        for (j, &y) in points.iter().enumerate() {
            let margin = values[j] - values[i] - support[i] * (y - x) - f.value((y - x).abs());
            scan.offer(margin, &[x, y]);
        }
    }
    Ok(Certificate::from_scan(
        class,
        scan,
        grid_size,
        policy.is_numeric(),
    ))
}

/// Monotonicity, convexity and positivity certificates.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeCertificates {
    pub increasing: Certificate,
    pub convex: Certificate,
    pub positive: Certificate,
}

impl ShapeCertificates {
    pub fn get(&self, class: FunctionClass) -> Option<&Certificate> {
        match class {
            FunctionClass::Increasing => Some(&self.increasing),
            FunctionClass::Convex => Some(&self.convex),
            FunctionClass::Positive => Some(&self.positive),
            _ => None,
        }
    }
}

/// Grid checks of `f` increasing (consecutive differences), convex (midpoint
/// inequality on all pairs) and non-negative.
pub fn check_monotone_convex_positive(
    f: &FunctionModel,
    grid_size: usize,
) -> Result<ShapeCertificates> {
    check_grid_size(grid_size)?;
    let mut points = certification_points(f.domain_end(), grid_size);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let values: Vec<f64> = points.iter().map(|&x| f.value(x)).collect();

    let mut inc = Scan::new();
    for k in 0..points.len() - 1 {
        inc.offer(values[k + 1] - values[k], &[points[k], points[k + 1]]);
    }

    let mut convex = Scan::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let mid = f.value(0.5 * (points[i] + points[j]));
            convex.offer(0.5 * (values[i] + values[j]) - mid, &[points[i], points[j]]);
        }
    }

    let mut pos = Scan::new();
    for (x, v) in points.iter().zip(&values) {
        pos.offer(*v, &[*x]);
    }

    Ok(ShapeCertificates {
        increasing: Certificate::from_scan(FunctionClass::Increasing, inc, grid_size, false),
        convex: Certificate::from_scan(FunctionClass::Convex, convex, grid_size, false),
        positive: Certificate::from_scan(FunctionClass::Positive, pos, grid_size, false),
    })
}

/// Runs the appropriate grid check for one class with the default policy.
pub fn certify(f: &FunctionModel, class: FunctionClass, grid_size: usize) -> Result<Certificate> {
    let policy = SupportConstantPolicy::default_for(f);
    match class {
        FunctionClass::Superquadratic => check_superquadratic(f, &policy, grid_size),
        FunctionClass::Subquadratic => check_subquadratic(f, &policy, grid_size),
        shape => {
            let all = check_monotone_convex_positive(f, grid_size)?;
            Ok(all.get(shape).cloned().expect("shape class"))
        }
    }
}
