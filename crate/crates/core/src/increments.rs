//! Laws of the birth and death stretch lengths `(X, Y)`.
//!
//! Geometric laws use the right-shifted convention: `G(r)` lives on
//! `{1, 2, ...}` with `P(k) = (1 - r)^(k - 1) r` and mean `1 / r`.

use rand::Rng;
use rand_distr::{Distribution, Geometric, Zeta};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{ExtReal, TOLERANCE};

/// Tail mass beyond which zeta draws are truncated.
pub const ZETA_TAIL_CUTOFF: f64 = 1e-12;

/// A law on the nonnegative integers.
#[derive(Debug, Clone, PartialEq)]
pub enum DiscreteLaw {
    /// Right-shifted geometric `G(r)`, `r` in `(0, 1]`.
    Geometric(f64),
    Deterministic(u64),
    /// `(value, probability)` pairs, sorted by value, values distinct.
    Table(Vec<(u64, f64)>),
    /// `P(k) ∝ k^(-s)` on `k >= 1`, `s > 1`.
    Zeta(f64),
}

impl DiscreteLaw {
    pub fn geometric(r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidLaw(format!("geometric parameter {r} not in (0, 1]")));
        }
        Ok(DiscreteLaw::Geometric(r))
    }

    pub fn table(mut entries: Vec<(u64, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidLaw("empty table".into()));
        }
        if let Some(&(v, p)) = entries.iter().find(|(_, p)| !(*p >= 0.0 && p.is_finite())) {
            return Err(Error::InvalidLaw(format!("P({v}) = {p} is not a probability")));
        }
        entries.sort_by_key(|e| e.0);
        entries.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        entries.retain(|e| e.1 > 0.0);
        let total: f64 = entries.iter().map(|e| e.1).sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidLaw(format!("table sums to {total}, not 1")));
        }
        Ok(DiscreteLaw::Table(entries))
    }

    pub fn zeta(s: f64) -> Result<Self> {
        if !(s > 1.0 && s.is_finite()) {
            return Err(Error::InvalidLaw(format!("zeta exponent {s} must exceed 1")));
        }
        Ok(DiscreteLaw::Zeta(s))
    }

    pub fn mean(&self) -> ExtReal {
        match self {
            DiscreteLaw::Geometric(r) => ExtReal::Finite(1.0 / r),
            DiscreteLaw::Deterministic(v) => ExtReal::Finite(*v as f64),
            DiscreteLaw::Table(t) => ExtReal::Finite(t.iter().map(|&(v, p)| v as f64 * p).sum()),
            DiscreteLaw::Zeta(s) if *s <= 2.0 => ExtReal::PosInf,
            DiscreteLaw::Zeta(s) => ExtReal::Finite(riemann_zeta(s - 1.0) / riemann_zeta(*s)),
        }
    }

    pub fn pgf(&self, z: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::Domain { what: "z", value: z });
        }
        if z == 1.0 {
            return Ok(1.0);
        }
        Ok(match self {
            DiscreteLaw::Geometric(r) => r * z / (1.0 - (1.0 - r) * z),
            DiscreteLaw::Deterministic(v) => z.powf(*v as f64),
            DiscreteLaw::Table(t) => t.iter().map(|&(v, p)| p * z.powf(v as f64)).sum(),
            DiscreteLaw::Zeta(s) => {
                let mut sum = 0.0;
                let mut zk = 1.0;
                for k in 1..=10_000_000u64 {
                    zk *= z;
                    if zk < 1e-18 {
                        break;
                    }
                    sum += zk * (k as f64).powf(-s);
                }
                sum / riemann_zeta(*s)
            }
        })
    }

    /// Largest value a zeta draw may take; `None` for other laws.
    pub fn truncation(&self) -> Option<u64> {
        match self {
            DiscreteLaw::Zeta(s) => {
                // sum_{k > K} k^-s <= K^(1-s) / (s-1)
                let k = ((s - 1.0) * riemann_zeta(*s) * ZETA_TAIL_CUTOFF).powf(-1.0 / (s - 1.0));
                Some(k.ceil().min(u64::MAX as f64 / 2.0) as u64)
            }
            _ => None,
        }
    }

    pub fn sampler(&self) -> DiscreteSampler {
        match self {
            DiscreteLaw::Geometric(r) => DiscreteSampler::Geometric(Geometric::new(*r).expect("validated parameter")),
            DiscreteLaw::Deterministic(v) => DiscreteSampler::Constant(*v),
            DiscreteLaw::Table(t) => {
                let mut acc = 0.0;
                let cumulative = t
                    .iter()
                    .map(|&(v, p)| {
                        acc += p;
                        (acc, v)
                    })
                    .collect();
                DiscreteSampler::Table(cumulative)
            }
            DiscreteLaw::Zeta(s) => DiscreteSampler::Zeta {
                dist: Zeta::new(*s).expect("validated exponent"),
                max: self.truncation().expect("zeta has a truncation"),
            },
        }
    }
}

/// Prebuilt sampling state for a [`DiscreteLaw`].
#[derive(Debug, Clone)]
pub enum DiscreteSampler {
    Geometric(Geometric),
    Constant(u64),
    /// `(cumulative probability, value)`
    Table(Vec<(f64, u64)>),
    Zeta { dist: Zeta<f64>, max: u64 },
}

impl DiscreteSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            DiscreteSampler::Geometric(g) => 1 + g.sample(rng),
            DiscreteSampler::Constant(v) => *v,
            DiscreteSampler::Table(cum) => {
                let u: f64 = rng.random();
                let i = cum.partition_point(|&(c, _)| c <= u);
                cum[i.min(cum.len() - 1)].1
            }
            DiscreteSampler::Zeta { dist, max } => loop {
                // resample instead of clipping: conditions the law on [1, max]
                let k = dist.sample(rng);
                if k <= *max as f64 {
                    break k as u64;
                }
            },
        }
    }
}

/// Whether the fitness values of one birth batch are independent draws or
/// all equal to the first draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessBatch {
    #[default]
    Iid,
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IncrementKind {
    /// `X` and `Y` independent with the given marginals.
    Product { x: DiscreteLaw, y: DiscreteLaw },
    /// `X ~ G(1 - p)`, `Y ~ G(p)`.
    Gms { p: f64 },
    /// `X ~ G(1 - p)`, `Y ~ G(1 - q)`: stretch lengths of a two-state chain.
    Markov { p: f64, q: f64 },
    /// General `X`, `Y ≡ 1`.
    Bp { x: DiscreteLaw },
    /// Arbitrary joint law as `(x, y, probability)` rows.
    Joint(Vec<(u64, u64, f64)>),
}

/// The joint law of `(X, Y)` plus the fitness batch mode.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementLaw {
    kind: IncrementKind,
    batch: FitnessBatch,
}

impl IncrementLaw {
    pub fn new(kind: IncrementKind, batch: FitnessBatch) -> Result<Self> {
        match &kind {
            IncrementKind::Gms { p } if !(*p > 0.0 && *p < 1.0) => {
                return Err(Error::InvalidLaw(format!("gms parameter p = {p} not in (0, 1)")));
            }
            IncrementKind::Markov { p, q } if !((0.0..1.0).contains(p) && (0.0..1.0).contains(q)) => {
                return Err(Error::InvalidLaw(format!("markov parameters ({p}, {q}) not in [0, 1)")));
            }
            IncrementKind::Joint(rows) => {
                if let Some(r) = rows.iter().find(|r| !(r.2 >= 0.0 && r.2.is_finite())) {
                    return Err(Error::InvalidLaw(format!("P({}, {}) = {} is not a probability", r.0, r.1, r.2)));
                }
                let total: f64 = rows.iter().map(|r| r.2).sum();
                if (total - 1.0).abs() > TOLERANCE {
                    return Err(Error::InvalidLaw(format!("joint table sums to {total}, not 1")));
                }
            }
            _ => {}
        }
        let law = IncrementLaw { kind, batch };
        let (mx, my) = (law.mean_x(), law.mean_y());
        if mx.to_f64() <= 0.0 || my.to_f64() <= 0.0 {
            return Err(Error::InvalidLaw(format!("E[X] = {mx} and E[Y] = {my} must both be positive")));
        }
        if !mx.is_finite() && !my.is_finite() {
            return Err(Error::InvalidLaw("E[X] and E[Y] cannot both be infinite".into()));
        }
        Ok(law)
    }

    pub fn gms(p: f64) -> Result<Self> {
        Self::new(IncrementKind::Gms { p }, FitnessBatch::Iid)
    }

    pub fn markov(p: f64, q: f64) -> Result<Self> {
        Self::new(IncrementKind::Markov { p, q }, FitnessBatch::Iid)
    }

    pub fn bp(x: DiscreteLaw) -> Result<Self> {
        Self::new(IncrementKind::Bp { x }, FitnessBatch::Iid)
    }

    pub fn product(x: DiscreteLaw, y: DiscreteLaw) -> Result<Self> {
        Self::new(IncrementKind::Product { x, y }, FitnessBatch::Iid)
    }

    pub fn joint(rows: Vec<(u64, u64, f64)>) -> Result<Self> {
        Self::new(IncrementKind::Joint(rows), FitnessBatch::Iid)
    }

    pub fn with_batch(mut self, batch: FitnessBatch) -> Self {
        self.batch = batch;
        self
    }

    pub fn kind(&self) -> &IncrementKind {
        &self.kind
    }

    pub fn batch(&self) -> FitnessBatch {
        self.batch
    }

    pub fn law_x(&self) -> DiscreteLaw {
        match &self.kind {
            IncrementKind::Product { x, .. } | IncrementKind::Bp { x } => x.clone(),
            IncrementKind::Gms { p } | IncrementKind::Markov { p, .. } => DiscreteLaw::Geometric(1.0 - p),
            IncrementKind::Joint(rows) => marginal(rows.iter().map(|r| (r.0, r.2))),
        }
    }

    pub fn law_y(&self) -> DiscreteLaw {
        match &self.kind {
            IncrementKind::Product { y, .. } => y.clone(),
            IncrementKind::Bp { .. } => DiscreteLaw::Deterministic(1),
            IncrementKind::Gms { p } => DiscreteLaw::Geometric(*p),
            IncrementKind::Markov { q, .. } => DiscreteLaw::Geometric(1.0 - q),
            IncrementKind::Joint(rows) => marginal(rows.iter().map(|r| (r.1, r.2))),
        }
    }

    pub fn mean_x(&self) -> ExtReal {
        self.law_x().mean()
    }

    pub fn mean_y(&self) -> ExtReal {
        self.law_y().mean()
    }

    /// True when `Y ≡ 1`.
    pub fn unit_deaths(&self) -> bool {
        match self.law_y() {
            DiscreteLaw::Deterministic(v) => v == 1,
            DiscreteLaw::Geometric(r) => r == 1.0,
            DiscreteLaw::Table(t) => t.len() == 1 && t[0].0 == 1,
            DiscreteLaw::Zeta(_) => false,
        }
    }

    /// `E[alpha X - Y]` with the conventions `alpha * inf = inf` for
    /// `alpha > 0`, `0 * inf = 0`, and `E[Y] = inf` forcing `-inf`.
    pub fn drift(&self, alpha: f64) -> Result<ExtReal> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain { what: "alpha", value: alpha });
        }
        Ok(match (self.mean_x(), self.mean_y()) {
            (ExtReal::Finite(mx), ExtReal::Finite(my)) => ExtReal::Finite(alpha * mx - my),
            (_, ExtReal::PosInf) => ExtReal::NegInf,
            (ExtReal::PosInf, ExtReal::Finite(my)) => {
                if alpha > 0.0 {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite(-my)
                }
            }
            (mx, my) => return Err(Error::InvalidLaw(format!("no drift for E[X] = {mx}, E[Y] = {my}"))),
        })
    }

    /// Scale for tolerance comparisons of `drift(alpha)`.
    pub fn drift_scale(&self) -> f64 {
        let mx = self.mean_x().finite().unwrap_or(1.0);
        let my = self.mean_y().finite().unwrap_or(1.0);
        mx.max(my).max(1.0)
    }

    pub fn pgf_x(&self, z: f64) -> Result<f64> {
        self.law_x().pgf(z)
    }

    /// `Phi'(1) = E[X]`, possibly `+inf`.
    pub fn pgf_x_derivative_at_1(&self) -> ExtReal {
        self.mean_x()
    }

    pub fn sampler(&self) -> PairSampler {
        match &self.kind {
            IncrementKind::Joint(rows) => {
                let mut acc = 0.0;
                PairSampler::Joint(
                    rows.iter()
                        .filter(|r| r.2 > 0.0)
                        .map(|r| {
                            acc += r.2;
                            (acc, r.0, r.1)
                        })
                        .collect(),
                )
            }
            _ => PairSampler::Independent(self.law_x().sampler(), self.law_y().sampler()),
        }
    }

    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        self.sampler().sample(rng)
    }
}

fn marginal(rows: impl Iterator<Item = (u64, f64)>) -> DiscreteLaw {
    let entries: Vec<(u64, f64)> = rows.collect();
    DiscreteLaw::table(entries).expect("marginal of a validated joint table")
}

#[derive(Debug, Clone)]
pub enum PairSampler {
    Independent(DiscreteSampler, DiscreteSampler),
    /// `(cumulative probability, x, y)`
    Joint(Vec<(f64, u64, u64)>),
}

impl PairSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        match self {
            PairSampler::Independent(x, y) => {
                let x = x.sample(rng);
                (x, y.sample(rng))
            }
            PairSampler::Joint(cum) => {
                let u: f64 = rng.random();
                let i = cum.partition_point(|c| c.0 <= u).min(cum.len() - 1);
                (cum[i].1, cum[i].2)
            }
        }
    }
}

/// Riemann zeta for `s > 1` by Euler–Maclaurin summation.
pub fn riemann_zeta(s: f64) -> f64 {
    const N: usize = 64;
    let n = N as f64;
    let head: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
}
