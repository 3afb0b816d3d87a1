use graded_shift::{
    character_check, kernel_vector, Complex, HomogeneousIdeal, MultiIndex, Polynomial, ShiftBlocks, WeightScheme,
    DEFAULT_RANK_TOL,
};

fn main() -> graded_shift::Result<()> {
    let lambda = [Complex::new(0.6, 0.0), Complex::new(0.0, 0.0)];

    let k = kernel_vector(&lambda, 0.5, 40)?;
    println!(
        "C = {:.10} (closed form (1 - |l|^2)^sigma = {:.10}), tail <= {:.2e}",
        k.normalization,
        (1.0f64 - 0.36).sqrt(),
        k.tail_bound
    );

    // I = (z2^2): the point lies on Z(I)
    let ideal = HomogeneousIdeal::monomial(2, &[&[0, 2]])?;
    let shifts = ShiftBlocks::build(&ideal, WeightScheme::drury_arveson(2)?, 41, DEFAULT_RANK_TOL)?;
    let p = Polynomial::monomial(MultiIndex::new(vec![1, 0]), 1.0.into())
        .add(&Polynomial::monomial(MultiIndex::new(vec![2, 0]), Complex::new(0.0, 0.5)));
    let r = character_check(&shifts, &p, &lambda, 40)?;
    println!("<p(S) k, k> = {:.10}", r.state_value);
    println!("p(lambda)   = {:.10}", r.point_value);
    println!("|p(lambda)| <= ||p(S)|| = {:.6}: {}", r.operator_norm, r.lower_bound_holds);
    Ok(())
}
