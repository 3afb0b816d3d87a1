//! Row and column defects of the d-shift on P_n, against closed forms.
use graded_shift::linalg::hermitian_eigenvalues;
use graded_shift::{HomogeneousIdeal, ShiftBlocks, WeightScheme, DEFAULT_RANK_TOL};

fn main() -> graded_shift::Result<()> {
    let d = 3;
    let ideal = HomogeneousIdeal::zero(d)?;
    for sigma in [0.5, 1.0, 2.0] {
        let shifts = ShiftBlocks::build(&ideal, WeightScheme::new(sigma, d)?, 9, DEFAULT_RANK_TOL)?;
        println!("sigma = {sigma}");
        println!("{:>3} {:>12} {:>12} {:>12} {:>12}", "n", "row", "row exact", "col", "col exact");
        for n in 0..8 {
            let row = hermitian_eigenvalues(&shifts.row_defect_block(n)?);
            let col = hermitian_eigenvalues(&shifts.column_defect_block(n)?);
            let nf = n as f64;
            let row_exact = if n == 0 { 1.0 } else { (2.0 * sigma - 1.0) / (nf + 2.0 * sigma - 1.0) };
            let col_exact = 1.0 - (nf + d as f64) / (nf + 2.0 * sigma);
            println!(
                "{n:>3} {:>12.8} {row_exact:>12.8} {:>12.8} {col_exact:>12.8}",
                row[row.len() - 1],
                col[0]
            );
        }
    }
    Ok(())
}
