use graded_shift::{hilbert_function, HomogeneousIdeal, DEFAULT_RANK_TOL};

fn main() -> graded_shift::Result<()> {
    let ideals = [
        ("(z1 z2)", HomogeneousIdeal::monomial(2, &[&[1, 1]])?),
        ("(z1^2, z2^2)", HomogeneousIdeal::monomial(2, &[&[2, 0], &[0, 2]])?),
        ("(z1 z2 z3)", HomogeneousIdeal::monomial(3, &[&[1, 1, 1]])?),
    ];
    for (name, ideal) in &ideals {
        let h = hilbert_function(ideal, 8, DEFAULT_RANK_TOL);
        println!("{name:>14}: {:?}", h.values());
        if let Some(w) = &h.warning {
            println!("{:>14}  {w}", "");
        }
    }

    let ideal = &ideals[2].1;
    hilbert_function(ideal, 4, DEFAULT_RANK_TOL).write_csv(std::io::stdout())
}
