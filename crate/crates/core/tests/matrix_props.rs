//! Matrix-variate constants checked by Monte-Carlo integration of Ĉ × kernel.

use nalgebra::DMatrix;
use pathway::matrix::{MatrixPathway, MatrixPathwayParams};
use pathway::RandomStream;

fn spd(k: usize, seed: u64) -> DMatrix<f64> {
    let mut s = RandomStream::new(seed);
    let m = DMatrix::from_fn(k, k, |_, _| s.standard_normal());
    &m * m.transpose() / k as f64 + DMatrix::identity(k, k) * 0.5
}

#[test]
fn total_mass_is_one() {
    for (i, (p, n)) in [(1, 1), (2, 2), (2, 3)].into_iter().enumerate() {
        for (j, alpha) in [0.5, 0.75, 1.0, 1.25].into_iter().enumerate() {
            for gamma in [0.0, 0.5] {
                let params = MatrixPathwayParams::new(spd(p, 10 + i as u64), spd(n, 20 + i as u64), alpha, 1.5, gamma);
                let m = match MatrixPathway::new(params) {
                    Ok(m) => m,
                    Err(e) => panic!("p={p} n={n} alpha={alpha} gamma={gamma}: {e}"),
                };
                let (mass, se) = m.mc_total_mass(1_000_000, &RandomStream::new(100 * i as u64 + j as u64)).unwrap();
                assert!((mass - 1.0).abs() <= 0.02, "p={p} n={n} alpha={alpha} gamma={gamma}: {mass} ± {se}");
            }
        }
    }
}

#[test]
fn non_normalizable_heavy_tail_is_rejected() {
    // η - ρ = 1/(α-1) - (γ + n/2) must exceed (p-1)/2
    let params = MatrixPathwayParams::identity(2, 3, 1.5, 1.0, 0.0);
    assert!(MatrixPathway::new(params).is_err());
    let params = MatrixPathwayParams::identity(2, 3, 1.25, 1.0, 0.0);
    assert!(MatrixPathway::new(params).is_ok());
}
