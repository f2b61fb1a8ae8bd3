use crate::analytics::ShapeLaw;
use crate::error::Result;
use crate::increments::IncrementLaw;
use crate::measure::FitnessMeasure;
use crate::population::EmpiricalCdf;

/// `sup_f |G(f) - T(f)|` for an empirical cdf `G` and a right-continuous,
/// nondecreasing target `T` whose jumps all lie in `jumps`.
///
/// Between consecutive candidate points both functions are monotone and `G`
/// is constant, so the supremum is attained as a value or a left limit at a
/// candidate.
pub fn sup_distance_to(
    cdf: &EmpiricalCdf,
    target: impl Fn(f64) -> f64,
    target_left: impl Fn(f64) -> f64,
    jumps: &[f64],
) -> f64 {
    let mut candidates: Vec<f64> = cdf.points().iter().map(|p| p.0).chain(jumps.iter().copied()).collect();
    candidates.extend([0.0, 1.0]);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    candidates
        .into_iter()
        .map(|c| {
            let at = (cdf.value(c) - target(c)).abs();
            let left = (cdf.value_left(c) - target_left(c)).abs();
            at.max(left)
        })
        .fold(0.0, f64::max)
}

/// Kolmogorov distance between `cdf` and the limit shape `F_inf`.
pub fn sup_distance(cdf: &EmpiricalCdf, m: &FitnessMeasure, law: &IncrementLaw) -> Result<f64> {
    let shape = ShapeLaw::new(m, law)?;
    let jumps = shape.jump_points(m);
    Ok(sup_distance_to(
        cdf,
        |f| shape.cdf(m, f).expect("candidate in [0, 1]"),
        |f| shape.cdf_left(m, f).expect("candidate in [0, 1]"),
        &jumps,
    ))
}

/// Kolmogorov distance between `cdf` and `F` itself.
pub fn sup_distance_to_measure(cdf: &EmpiricalCdf, m: &FitnessMeasure) -> f64 {
    let jumps: Vec<f64> = m.atoms().iter().map(|a| a.location).collect();
    sup_distance_to(
        cdf,
        |f| m.cdf(f).expect("candidate in [0, 1]"),
        |f| m.cdf_left(f).expect("candidate in [0, 1]"),
        &jumps,
    )
}
