use graded_shift::{aa_star_residual, HomogeneousIdeal, ShiftBlocks, WeightScheme, DEFAULT_RANK_TOL};

fn main() -> graded_shift::Result<()> {
    let ideal = HomogeneousIdeal::monomial(2, &[&[1, 1]])?;
    let shifts = ShiftBlocks::build(&ideal, WeightScheme::drury_arveson(2)?, 30, DEFAULT_RANK_TOL)?;
    for (i, j) in [(0, 0), (0, 1)] {
        for k in 1..=3 {
            let fit = aa_star_residual(&shifts, i, j, k, 30)?;
            println!(
                "S{}* S{} with k = {k}: residual {:.3e} ({} products, rank {})",
                i + 1,
                j + 1,
                fit.residual,
                fit.dictionary_size,
                fit.gram_rank
            );
        }
    }
    Ok(())
}
