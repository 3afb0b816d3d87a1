//! Maximize |p| (or the top singular value of a matrix symbol) over the
//! sphere intersected with Z(I).
use graded_shift::{boundary_sup, HomogeneousIdeal, MultiIndex, OptimizerConfig, PolyMatrix, Polynomial};

fn main() -> graded_shift::Result<()> {
    let cfg = OptimizerConfig::default();
    let z = |e: [u32; 2]| Polynomial::monomial(MultiIndex::new(e.to_vec()), 1.0.into());

    let free = HomogeneousIdeal::zero(2)?;
    let r = boundary_sup(&PolyMatrix::scalar(z([1, 1])), &free, &cfg)?;
    println!("sup |z1 z2| on the sphere = {:.12}, {} basins", r.value, r.stats.basins);

    // on Z(z1 z2) only the axes remain
    let axes = HomogeneousIdeal::monomial(2, &[&[1, 1]])?;
    let sum = z([1, 0]).add(&z([0, 1]));
    let r = boundary_sup(&PolyMatrix::scalar(sum), &axes, &cfg)?;
    println!("sup |z1 + z2| on the axes = {:.12} at {:?}", r.value, r.point);

    let row = PolyMatrix::new(1, 2, vec![z([1, 0]), z([0, 1])])?;
    let r = boundary_sup(&row, &free, &cfg)?;
    println!("sup ||[z1 z2]|| = {:.12}", r.value);

    let everything = HomogeneousIdeal::monomial(2, &[&[1, 0], &[0, 1]])?;
    match boundary_sup(&PolyMatrix::scalar(z([1, 0])), &everything, &cfg) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("Z(z1, z2): {e}"),
    }
    Ok(())
}
