use graded_shift::operator::default_schedule;
use graded_shift::{
    essential_norm_estimate, HomogeneousIdeal, MultiIndex, PolyMatrix, Polynomial, ShiftBlocks, WeightScheme,
    DEFAULT_RANK_TOL,
};

fn main() -> graded_shift::Result<()> {
    let ideal = HomogeneousIdeal::zero(2)?;
    let shifts = ShiftBlocks::build(&ideal, WeightScheme::drury_arveson(2)?, 120, DEFAULT_RANK_TOL)?;
    let p = PolyMatrix::scalar(Polynomial::monomial(MultiIndex::new(vec![1, 1]), 1.0.into()));

    let mut schedule = Vec::new();
    for m in [10, 20, 40] {
        for big_m in [80, 100, 120] {
            schedule.push((m, big_m));
        }
    }
    let trace = essential_norm_estimate(&shifts, &p, &schedule)?;
    for w in &trace.grid {
        println!("f({:>2}, {:>3}) = {:.8}", w.m, w.big_m, w.f);
    }
    println!("monotone: {}", trace.is_monotone());
    println!("estimate {:.6} (the boundary value is 1/2)", trace.estimate);

    println!("default schedule for degree 2: {:?}", default_schedule(2));
    Ok(())
}
