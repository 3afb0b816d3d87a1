use graded_shift::operator::SummabilityTrend;
use graded_shift::{commutator_blocks, schatten_partial_sums, HomogeneousIdeal, ShiftBlocks, WeightScheme, DEFAULT_RANK_TOL};

fn main() -> graded_shift::Result<()> {
    // I = (z1^2) in two variables
    let ideal = HomogeneousIdeal::monomial(2, &[&[2, 0]])?;
    let shifts = ShiftBlocks::build(&ideal, WeightScheme::drury_arveson(2)?, 61, DEFAULT_RANK_TOL)?;
    let spec = commutator_blocks(&shifts, 0, 0, 1..=60)?;

    for (n, s) in spec.block_norms().iter().step_by(10) {
        println!("|| [S1*, S1] on H_{n} || = {s:.3e}");
    }
    println!("log-log slope over [10, 60]: {:.3}", spec.norm_slope(10..=60).unwrap());
    println!("cross-degree leakage {:.1e}", spec.leakage);

    for series in schatten_partial_sums(&spec, &[1.0, 2.0], 60)? {
        let last = series.rows.last().unwrap();
        println!(
            "p = {}: partial sum {:.4}, increment slope {:?}, {:?}",
            series.p,
            last.sum,
            last.slope,
            SummabilityTrend::from_slope(last.slope)
        );
    }
    Ok(())
}
