use std::fmt;
use std::ops::Bound;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One component of a [`BorelSet`]: an interval with per-endpoint closure.
/// A degenerate interval `[x, x]` is the singleton `{x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        for v in [lo, hi] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSet(format!("endpoint {v} outside [0, 1]")));
            }
        }
        let iv = Interval { lo: lo + 0.0, hi: hi + 0.0, lo_closed, hi_closed };
        if iv.is_empty() {
            return Err(Error::InvalidSet(format!("empty component {iv}")));
        }
        Ok(iv)
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn lower_bound(&self) -> Bound<f64> {
        if self.lo_closed {
            Bound::Included(self.lo)
        } else {
            Bound::Excluded(self.lo)
        }
    }

    pub fn upper_bound(&self) -> Bound<f64> {
        if self.hi_closed {
            Bound::Included(self.hi)
        } else {
            Bound::Excluded(self.hi)
        }
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo)? {
            std::cmp::Ordering::Less => (other.lo, other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo, self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi)? {
            std::cmp::Ordering::Less => (self.hi, self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi, other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        let iv = Interval { lo, hi, lo_closed, hi_closed };
        (!iv.is_empty()).then_some(iv)
    }

    // Sort key: by lower endpoint, closed before open.
    fn starts_before(&self, other: &Interval) -> bool {
        self.lo < other.lo || (self.lo == other.lo && self.lo_closed && !other.lo_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() && self.lo_closed && self.hi_closed {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

/// A finite union of pairwise disjoint intervals in `[0, 1]`, kept sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BorelSet {
    components: Vec<Interval>,
}

impl BorelSet {
    pub fn empty() -> Self {
        BorelSet::default()
    }

    pub fn new(mut components: Vec<Interval>) -> Result<Self> {
        for c in &components {
            if c.is_empty() {
                return Err(Error::InvalidSet(format!("empty component {c}")));
            }
        }
        components.sort_by(|a, b| {
            if a.starts_before(b) {
                std::cmp::Ordering::Less
            } else if b.starts_before(a) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        for w in components.windows(2) {
            if w[0].intersect(&w[1]).is_some() {
                return Err(Error::InvalidSet(format!("components {} and {} overlap", w[0], w[1])));
            }
        }
        Ok(BorelSet { components })
    }

    pub fn interval(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        Ok(BorelSet { components: vec![Interval::new(lo, hi, lo_closed, hi_closed)?] })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::interval(lo, hi, true, true)
    }

    pub fn singleton(x: f64) -> Result<Self> {
        Self::interval(x, x, true, true)
    }

    pub fn unit() -> Self {
        Self::closed(0.0, 1.0).expect("unit interval is valid")
    }

    /// The left interval `[0, f]`, or `[0, f)` when `include_f` is false.
    /// `[0, 0)` is empty.
    pub fn left(f: f64, include_f: bool) -> Result<Self> {
        if f == 0.0 && !include_f {
            return Ok(Self::empty());
        }
        Self::interval(0.0, f, true, include_f)
    }

    /// `(f, 1]`, or `[f, 1]` when `include_f` is true. `(1, 1]` is empty.
    pub fn right(f: f64, include_f: bool) -> Result<Self> {
        if f == 1.0 && !include_f {
            return Ok(Self::empty());
        }
        Self::interval(f, 1.0, include_f, true)
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    pub fn intersect(&self, other: &BorelSet) -> BorelSet {
        let mut out = Vec::new();
        for a in &self.components {
            for b in &other.components {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        BorelSet::new(out).expect("intersection of disjoint unions is disjoint")
    }

    pub fn is_disjoint(&self, other: &BorelSet) -> bool {
        self.intersect(other).is_empty()
    }
}

impl fmt::Display for BorelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("{}");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses unions such as `[0,0.3] u (0.5,1]`, `{0.5}`, `[0,0.5) ∪ {0.7}`.
/// The empty set is `{}` or `∅`. `u`, `U`, `∪` and `|` all separate components.
impl FromStr for BorelSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "{}" || s == "∅" {
            return Ok(BorelSet::empty());
        }
        let mut components = Vec::new();
        let mut rest = s;
        loop {
            rest = rest.trim_start();
            let (component, tail) = parse_component(rest)?;
            components.push(component);
            rest = tail.trim_start();
            if rest.is_empty() {
                break;
            }
            rest = rest
                .strip_prefix('∪')
                .or_else(|| rest.strip_prefix(['u', 'U', '|']))
                .ok_or_else(|| Error::InvalidSet(format!("expected a union separator at {rest:?}")))?;
        }
        BorelSet::new(components)
    }
}

fn parse_component(s: &str) -> Result<(Interval, &str)> {
    let bad = |msg: &str| Error::InvalidSet(format!("{msg} in {s:?}"));
    let mut chars = s.chars();
    let open = chars.next().ok_or_else(|| bad("unexpected end of input"))?;
    let body = chars.as_str();
    if open == '{' {
        let end = body.find('}').ok_or_else(|| bad("unterminated singleton"))?;
        let x = parse_number(&body[..end])?;
        return Ok((Interval::new(x, x, true, true)?, &body[end + 1..]));
    }
    let lo_closed = match open {
        '[' => true,
        '(' => false,
        _ => return Err(bad("expected '[', '(' or '{'")),
    };
    let end = body.find([']', ')']).ok_or_else(|| bad("unterminated interval"))?;
    let hi_closed = body[end..].starts_with(']');
    let (lo, hi) = body[..end].split_once(',').ok_or_else(|| bad("expected 'lo,hi'"))?;
    let iv = Interval::new(parse_number(lo)?, parse_number(hi)?, lo_closed, hi_closed)?;
    Ok((iv, &body[end + 1..]))
}

fn parse_number(s: &str) -> Result<f64> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| Error::InvalidSet(format!("bad number {t:?}")))?;
    if !v.is_finite() {
        return Err(Error::InvalidSet(format!("bad number {t:?}")));
    }
    Ok(v)
}
