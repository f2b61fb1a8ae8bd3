//! Fitness measures on `[0, 1]`: finitely many atoms plus weighted uniform
//! pieces, and the interval-union sets they are evaluated on.

mod set;

pub use set::{BorelSet, Interval};

use rand::Rng;

use crate::error::{Error, Result};
use crate::extended::TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// `weight * Uniform([lo, hi])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformPiece {
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
}

impl UniformPiece {
    // Mass this piece puts on [lo, x].
    fn mass_below(&self, x: f64) -> f64 {
        if x <= self.lo {
            0.0
        } else if x >= self.hi {
            self.weight
        } else {
            self.weight * (x - self.lo) / (self.hi - self.lo)
        }
    }

    fn overlap(&self, c: &Interval) -> f64 {
        let len = self.hi.min(c.hi) - self.lo.max(c.lo);
        if len <= 0.0 {
            0.0
        } else {
            self.weight * len / (self.hi - self.lo)
        }
    }
}

/// A probability measure `mu` on `[0, 1]`.
///
/// Immutable once built; normalization is checked, never repaired.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<UniformPiece>,
}

impl FitnessMeasure {
    /// Builds a measure from `(location, mass)` atoms and `(lo, hi, weight)`
    /// uniform pieces. Atoms may be given in any order but must be distinct.
    pub fn new(atoms: Vec<(f64, f64)>, pieces: Vec<(f64, f64, f64)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidMeasure(msg));
        let mut atoms: Vec<Atom> = atoms.into_iter().map(|(location, mass)| Atom { location: location + 0.0, mass }).collect();
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        for a in &atoms {
            if !(0.0..=1.0).contains(&a.location) {
                return bad(format!("atom location {} outside [0, 1]", a.location));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return bad(format!("atom mass {} must be positive", a.mass));
            }
        }
        if let Some(w) = atoms.windows(2).find(|w| w[0].location == w[1].location) {
            return bad(format!("duplicate atom at {}", w[0].location));
        }
        let pieces: Vec<UniformPiece> = pieces.into_iter().map(|(lo, hi, weight)| UniformPiece { lo, hi, weight }).collect();
        for p in &pieces {
            if !(0.0 <= p.lo && p.lo < p.hi && p.hi <= 1.0) {
                return bad(format!("piece [{}, {}] is not a nondegenerate subinterval of [0, 1]", p.lo, p.hi));
            }
            if !(p.weight > 0.0 && p.weight.is_finite()) {
                return bad(format!("piece weight {} must be positive", p.weight));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.mass).sum::<f64>() + pieces.iter().map(|p| p.weight).sum::<f64>();
        if (total - 1.0).abs() > TOLERANCE {
            return bad(format!("total mass {total} != 1"));
        }
        Ok(FitnessMeasure { atoms, pieces })
    }

    pub fn uniform() -> Self {
        Self::new(vec![], vec![(0.0, 1.0, 1.0)]).expect("uniform measure is valid")
    }

    pub fn dirac(location: f64) -> Result<Self> {
        Self::new(vec![(location, 1.0)], vec![])
    }

    /// `alpha * delta_location + (1 - alpha) * Uniform([0, 1])`.
    pub fn atom_mixture(alpha: f64, location: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain { what: "alpha", value: alpha });
        }
        let atoms = if alpha > 0.0 { vec![(location, alpha)] } else { vec![] };
        let pieces = if alpha < 1.0 { vec![(0.0, 1.0, 1.0 - alpha)] } else { vec![] };
        Self::new(atoms, pieces)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[UniformPiece] {
        &self.pieces
    }

    /// `F(f) = mu([0, f])`.
    pub fn cdf(&self, f: f64) -> Result<f64> {
        check_fitness(f)?;
        if f == 1.0 {
            return Ok(1.0);
        }
        Ok(self.left_limit(f) + self.atom_mass(f))
    }

    /// `F(f-) = mu([0, f))`.
    pub fn cdf_left(&self, f: f64) -> Result<f64> {
        check_fitness(f)?;
        Ok(self.left_limit(f))
    }

    fn left_limit(&self, f: f64) -> f64 {
        let atoms: f64 = self.atoms.iter().take_while(|a| a.location < f).map(|a| a.mass).sum();
        atoms + self.pieces.iter().map(|p| p.mass_below(f)).sum::<f64>()
    }

    /// `mu({f})`; zero off the atom list.
    pub fn atom_mass(&self, f: f64) -> f64 {
        self.atoms.iter().find(|a| a.location == f).map_or(0.0, |a| a.mass)
    }

    /// `mu(A)`.
    pub fn mass(&self, set: &BorelSet) -> f64 {
        set.components()
            .iter()
            .map(|c| {
                let atoms: f64 = self.atoms.iter().filter(|a| c.contains(a.location)).map(|a| a.mass).sum();
                atoms + self.pieces.iter().map(|p| p.overlap(c)).sum::<f64>()
            })
            .sum()
    }

    /// Draws one fitness: choose a mixture component by its mass, then return
    /// the atom location or a uniform point of the piece.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for a in &self.atoms {
            acc += a.mass;
            if u < acc {
                return a.location;
            }
        }
        for p in &self.pieces {
            acc += p.weight;
            if u < acc {
                return p.lo + (p.hi - p.lo) * rng.random::<f64>();
            }
        }
        // rounding left u above the accumulated total
        match self.pieces.last() {
            Some(p) => p.lo + (p.hi - p.lo) * rng.random::<f64>(),
            None => self.atoms.last().expect("measure has mass").location,
        }
    }

    /// Sorted distinct points where `F` jumps or changes slope, including 0 and 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0, 1.0];
        pts.extend(self.atoms.iter().map(|a| a.location));
        pts.extend(self.pieces.iter().flat_map(|p| [p.lo, p.hi]));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Smallest point of the support.
    pub fn support_min(&self) -> f64 {
        let a = self.atoms.first().map_or(f64::INFINITY, |a| a.location);
        let p = self.pieces.iter().map(|p| p.lo).fold(f64::INFINITY, f64::min);
        a.min(p)
    }
}

pub(crate) fn check_fitness(f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::Domain { what: "fitness", value: f })
    }
}
