//! Closed-form asymptotics: critical fitness, limiting shape, recurrence
//! classes, killing rates and branching-process extinction probabilities.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Regime, Result};
use crate::extended::{ExtReal, TOLERANCE};
use crate::increments::IncrementLaw;
use crate::measure::{check_fitness, BorelSet, FitnessMeasure};

/// Cap on fixed-point iterations for extinction probabilities.
pub const MAX_FIXED_POINT_ITERATIONS: usize = 1_000_000;

/// `E[Y] / E[X]` when `E[Y] < E[X]`; `None` when every fitness dies out.
pub fn threshold_ratio(law: &IncrementLaw) -> Option<f64> {
    match (law.mean_x(), law.mean_y()) {
        (ExtReal::PosInf, ExtReal::Finite(_)) => Some(0.0),
        (ExtReal::Finite(mx), ExtReal::Finite(my)) if my < mx * (1.0 - TOLERANCE) => Some(my / mx),
        _ => None,
    }
}

/// `f_c = inf{f : F(f) > E[Y]/E[X]}`, `+inf` when `E[Y] >= E[X]`.
///
/// Solved exactly on the piecewise-linear structure of `F`: between
/// consecutive breakpoints `F` is affine, so the crossing is either a
/// breakpoint (a jump or a flat stretch ending) or a linear interpolation.
pub fn critical_fitness(m: &FitnessMeasure, law: &IncrementLaw) -> ExtReal {
    match threshold_ratio(law) {
        None => ExtReal::PosInf,
        Some(r) => ExtReal::Finite(crossing(m, r)),
    }
}

fn crossing(m: &FitnessMeasure, r: f64) -> f64 {
    let cdf = |f: f64| m.cdf(f).expect("breakpoints lie in [0, 1]");
    let cdf_left = |f: f64| m.cdf_left(f).expect("breakpoints lie in [0, 1]");
    let pts = m.breakpoints();
    if cdf(pts[0]) > r + TOLERANCE {
        return pts[0];
    }
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb_left) = (cdf(a), cdf_left(b));
        if fb_left > r + TOLERANCE {
            if fa >= r - TOLERANCE {
                return a;
            }
            return (a + (r - fa) * (b - a) / (fb_left - fa)).clamp(a, b);
        }
        if cdf(b) > r + TOLERANCE {
            return b;
        }
    }
    1.0
}

/// The limiting law of the fitness of surviving species,
/// `P_inf(A) = [mu(A ∩ (f_c, 1]) E[X] + 1_A(f_c) E[F(f_c) X - Y]] / E[X - Y]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeLaw {
    pub f_c: f64,
    pub atom_at_fc: f64,
    /// `E[X] / E[X - Y]`, the density factor applied to `mu` above `f_c`.
    pub continuous_factor: f64,
    mean_x: f64,
    mean_y: f64,
}

impl ShapeLaw {
    pub fn new(m: &FitnessMeasure, law: &IncrementLaw) -> Result<Self> {
        let mean_x = law.mean_x().finite().ok_or(Error::Undefined(Regime::InfiniteMeanBirths))?;
        let f_c = critical_fitness(m, law).finite().ok_or(Error::Undefined(Regime::Subcritical))?;
        let mean_y = law.mean_y().finite().expect("finite since E[Y] < E[X] < inf");
        let net = mean_x - mean_y;
        let atom_at_fc = ((m.cdf(f_c)? * mean_x - mean_y) / net).max(0.0);
        Ok(ShapeLaw { f_c, atom_at_fc, continuous_factor: mean_x / net, mean_x, mean_y })
    }

    pub fn cdf(&self, m: &FitnessMeasure, f: f64) -> Result<f64> {
        check_fitness(f)?;
        if f < self.f_c {
            return Ok(0.0);
        }
        Ok(self.normalize(m.cdf(f)?))
    }

    /// Left limit `F_inf(f-)`.
    pub fn cdf_left(&self, m: &FitnessMeasure, f: f64) -> Result<f64> {
        check_fitness(f)?;
        if f <= self.f_c {
            return Ok(0.0);
        }
        Ok(self.normalize(m.cdf_left(f)?))
    }

    fn normalize(&self, big_f: f64) -> f64 {
        ((big_f * self.mean_x - self.mean_y) / (self.mean_x - self.mean_y)).clamp(0.0, 1.0)
    }

    pub fn measure(&self, m: &FitnessMeasure, set: &BorelSet) -> Result<f64> {
        let above = set.intersect(&BorelSet::right(self.f_c, false)?);
        let mut v = m.mass(&above) * self.continuous_factor;
        if set.contains(self.f_c) {
            v += self.atom_at_fc;
        }
        Ok(v)
    }

    /// Points where `F_inf` jumps: `f_c` and the atoms of `mu` above it.
    pub fn jump_points(&self, m: &FitnessMeasure) -> Vec<f64> {
        let mut pts = vec![self.f_c];
        pts.extend(m.atoms().iter().map(|a| a.location).filter(|&x| x > self.f_c));
        pts
    }
}

pub fn shape_law(m: &FitnessMeasure, law: &IncrementLaw) -> Result<ShapeLaw> {
    ShapeLaw::new(m, law)
}

/// `F_inf(f)`; [`Error::Undefined`] outside `E[Y] < E[X] < inf`.
pub fn limit_cdf(m: &FitnessMeasure, law: &IncrementLaw, f: f64) -> Result<f64> {
    ShapeLaw::new(m, law)?.cdf(m, f)
}

/// `P_inf(A)`; [`Error::Undefined`] outside `E[Y] < E[X] < inf`.
pub fn limit_measure(m: &FitnessMeasure, law: &IncrementLaw, set: &BorelSet) -> Result<f64> {
    ShapeLaw::new(m, law)?.measure(m, set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recurrence {
    Transient,
    NullRecurrent,
    PositiveRecurrent,
}

/// Classification of the queue `Z_{2n}(I)` of a left interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceClass {
    pub class: Recurrence,
    pub drift: ExtReal,
}

impl RecurrenceClass {
    fn from_drift(drift: ExtReal, scale: f64) -> Self {
        let class = match drift.sign(scale) {
            Ordering::Greater => Recurrence::Transient,
            Ordering::Equal => Recurrence::NullRecurrent,
            Ordering::Less => Recurrence::PositiveRecurrent,
        };
        RecurrenceClass { class, drift }
    }
}

/// Classifies `I = [0, f]` (or `[0, f)` when `include_f` is false) by the
/// sign of `E[mu(I) X - Y]`.
pub fn classify_left_interval(m: &FitnessMeasure, law: &IncrementLaw, f: f64, include_f: bool) -> Result<RecurrenceClass> {
    let mass = if include_f { m.cdf(f)? } else { m.cdf_left(f)? };
    if mass <= 0.0 {
        return Err(Error::DegenerateInterval);
    }
    Ok(RecurrenceClass::from_drift(law.drift(mass)?, law.drift_scale()))
}

/// `lim K_n(A) / n = ½ mu(A ∩ [0, f_c]) E[X] - ½ 1_A(f_c) E[F(f_c) X - Y]`.
pub fn killing_rate(m: &FitnessMeasure, law: &IncrementLaw, set: &BorelSet) -> Result<f64> {
    let shape = ShapeLaw::new(m, law)?;
    let below = set.intersect(&BorelSet::left(shape.f_c, true)?);
    let mut rate = 0.5 * m.mass(&below) * shape.mean_x;
    if set.contains(shape.f_c) {
        rate -= 0.5 * (m.cdf(shape.f_c)? * shape.mean_x - shape.mean_y);
    }
    Ok(rate.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Survival,
    Extinction,
}

/// Survival in `[0, f]` iff `E[F(f) X - Y] > 0`.
pub fn survival_verdict(m: &FitnessMeasure, law: &IncrementLaw, f: f64) -> Result<Verdict> {
    let drift = law.drift(m.cdf(f)?)?;
    Ok(match drift.sign(law.drift_scale()) {
        Ordering::Greater => Verdict::Survival,
        _ => Verdict::Extinction,
    })
}

/// Extinction probability in the `Y ≡ 1` case.
///
/// With `q` the smallest fixed point of `Psi(z) = Phi(z F + 1 - F)`, where
/// `F = F(f)` or `F(f-)` for the left-open interval, returns `q^i` for
/// `j = 1` and `q^(i-1)` for `j = 2`.
pub fn bp_extinction(
    m: &FitnessMeasure,
    law: &IncrementLaw,
    f: f64,
    left_open: bool,
    i: u32,
    j: u32,
) -> Result<f64> {
    if !law.unit_deaths() {
        return Err(Error::WrongRegime("branching-process extinction needs Y ≡ 1".into()));
    }
    if i == 0 {
        return Err(Error::Argument("initial count i must be at least 1".into()));
    }
    if !(j == 1 || j == 2) {
        return Err(Error::Argument(format!("parity j = {j} must be 1 or 2")));
    }
    let big_f = if left_open { m.cdf_left(f)? } else { m.cdf(f)? };
    let q = smallest_fixed_point(law, big_f)?;
    let exponent = if j == 1 { i } else { i - 1 };
    Ok(q.powi(exponent as i32))
}

fn smallest_fixed_point(law: &IncrementLaw, big_f: f64) -> Result<f64> {
    let offspring_mean = match law.pgf_x_derivative_at_1() {
        ExtReal::Finite(mx) => big_f * mx,
        _ if big_f > 0.0 => f64::INFINITY,
        _ => 0.0,
    };
    if offspring_mean <= 1.0 + TOLERANCE {
        return Ok(1.0);
    }
    let psi = |z: f64| law.pgf_x(z * big_f + 1.0 - big_f);
    let mut q = 0.0;
    for _ in 0..MAX_FIXED_POINT_ITERATIONS {
        let next = psi(q)?;
        if (next - q).abs() < TOLERANCE {
            return Ok(next);
        }
        q = next;
    }
    Err(Error::Divergence(MAX_FIXED_POINT_ITERATIONS))
}

/// Asymptotic kill accounting split at `f_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KillDynamics {
    /// `lim K_n([0, f_c)) / n`.
    pub rate_below_fc: f64,
    /// `lim K_n({f_c}) / n = -½ E[F(f_c-) X - Y]`.
    pub rate_at_fc: f64,
    /// `lim K_n((f_c, 1]) / n`, always 0.
    pub rate_above_fc: f64,
    /// `sup_n K_n((f_c, 1]) < inf`; holds iff `F(f_c) > E[Y]/E[X]`.
    pub kills_above_fc_bounded: bool,
    /// `lim K_n([f_c, 1]) / n > 0`; holds iff `F(f_c-) < E[Y]/E[X]`.
    pub kills_from_fc_linear: bool,
    /// `sup_n K_n([f, 1]) < inf` for every `f > f_c`.
    pub kills_above_any_f_bounded: bool,
}

pub fn kill_dynamics(m: &FitnessMeasure, law: &IncrementLaw) -> Result<KillDynamics> {
    let shape = ShapeLaw::new(m, law)?;
    let r = threshold_ratio(law).expect("defined when the shape law is");
    let (at, left) = (m.cdf(shape.f_c)?, m.cdf_left(shape.f_c)?);
    Ok(KillDynamics {
        rate_below_fc: 0.5 * left * shape.mean_x,
        rate_at_fc: (0.5 * (shape.mean_y - left * shape.mean_x)).max(0.0),
        rate_above_fc: 0.0,
        kills_above_fc_bounded: at > r + TOLERANCE,
        kills_from_fc_linear: left < r - TOLERANCE,
        kills_above_any_f_bounded: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub atom_at_fc: Option<f64>,
    pub continuous_factor: Option<f64>,
    /// `[f, F_inf(f)]` on an equispaced grid of 101 points.
    pub cdf_samples: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    /// The whole population, `I = [0, 1]`.
    pub whole: RecurrenceClass,
    /// `I = [0, f_c]`; absent when `F(f_c) = 0`.
    pub closed_at_fc: Option<RecurrenceClass>,
    /// `I = [0, f_c)`; absent when `F(f_c-) = 0`.
    pub open_at_fc: Option<RecurrenceClass>,
}

/// Everything `analyze` prints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub f_c: ExtReal,
    /// `E[Y] / E[X]`.
    pub ratio: ExtReal,
    pub mean_x: ExtReal,
    pub mean_y: ExtReal,
    #[serde(rename = "F_at_fc")]
    pub f_at_fc: Option<f64>,
    #[serde(rename = "F_left_at_fc")]
    pub f_left_at_fc: Option<f64>,
    pub drift_at_fc: Option<ExtReal>,
    pub drift_left_at_fc: Option<ExtReal>,
    pub shape: ShapeReport,
    pub recurrence: RecurrenceReport,
    pub kill_report: Option<KillDynamics>,
    /// Reasons any quantity above is missing; empty in the supercritical,
    /// finite-mean regime.
    pub undefined: Vec<String>,
}

pub fn analyze(m: &FitnessMeasure, law: &IncrementLaw) -> Result<AnalysisReport> {
    let (mx, my) = (law.mean_x(), law.mean_y());
    let ratio = match (mx, my) {
        (ExtReal::PosInf, _) => ExtReal::Finite(0.0),
        (_, ExtReal::PosInf) => ExtReal::PosInf,
        (ExtReal::Finite(x), ExtReal::Finite(y)) => ExtReal::Finite(y / x),
        _ => unreachable!("validated law"),
    };
    let f_c = critical_fitness(m, law);
    let mut undefined = Vec::new();
    let mut note = |e: Error| undefined.push(e.to_string());

    let (mut f_at, mut f_left, mut drift_at, mut drift_left) = (None, None, None, None);
    let (mut closed_at_fc, mut open_at_fc) = (None, None);
    if let ExtReal::Finite(fc) = f_c {
        let (at, left) = (m.cdf(fc)?, m.cdf_left(fc)?);
        f_at = Some(at);
        f_left = Some(left);
        drift_at = Some(law.drift(at)?);
        drift_left = Some(law.drift(left)?);
        closed_at_fc = match classify_left_interval(m, law, fc, true) {
            Ok(c) => Some(c),
            Err(Error::DegenerateInterval) => None,
            Err(e) => return Err(e),
        };
        open_at_fc = classify_left_interval(m, law, fc, false).ok();
    } else {
        note(Error::Undefined(Regime::Subcritical));
    }

    let shape = match ShapeLaw::new(m, law) {
        Ok(s) => ShapeReport {
            atom_at_fc: Some(s.atom_at_fc),
            continuous_factor: Some(s.continuous_factor),
            cdf_samples: (0..=100)
                .map(|k| {
                    let f = k as f64 / 100.0;
                    Ok([f, s.cdf(m, f)?])
                })
                .collect::<Result<_>>()?,
        },
        Err(e @ Error::Undefined(Regime::InfiniteMeanBirths)) => {
            note(e);
            ShapeReport { atom_at_fc: None, continuous_factor: None, cdf_samples: vec![] }
        }
        Err(Error::Undefined(_)) => ShapeReport { atom_at_fc: None, continuous_factor: None, cdf_samples: vec![] },
        Err(e) => return Err(e),
    };
    let kill_report = kill_dynamics(m, law).ok();

    Ok(AnalysisReport {
        f_c,
        ratio,
        mean_x: mx,
        mean_y: my,
        f_at_fc: f_at,
        f_left_at_fc: f_left,
        drift_at_fc: drift_at,
        drift_left_at_fc: drift_left,
        shape,
        recurrence: RecurrenceReport { whole: classify_left_interval(m, law, 1.0, true)?, closed_at_fc, open_at_fc },
        kill_report,
        undefined,
    })
}
