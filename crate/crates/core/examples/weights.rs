//! Monomial norms in the Besov-Sobolev family.
use graded_shift::{besov_weight, monomial_norm_sq, MultiIndex, WeightScheme};

fn main() -> graded_shift::Result<()> {
    for sigma in [0.5, 1.0, 1.5] {
        let row: Vec<String> = (0..6)
            .map(|n| besov_weight(n, sigma).map(|c| format!("{c:.5}")))
            .collect::<Result<_, _>>()?;
        println!("sigma = {sigma}: c_n = {}", row.join(" "));
    }

    // ||z^a||^2 = c_|a| * a! / |a|!
    let w = WeightScheme::drury_arveson(3)?;
    for e in [[1, 0, 0], [1, 1, 0], [2, 1, 0], [1, 1, 1], [3, 2, 1]] {
        let a = MultiIndex::new(e.to_vec());
        println!("||{a}||^2 = {:.6}", monomial_norm_sq(&a, &w)?);
    }
    Ok(())
}
