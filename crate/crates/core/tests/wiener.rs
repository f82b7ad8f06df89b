use wh_core::linalg::C64;
use wh_core::wiener::wr_norm;
use wh_core::{CayleyGrid, Tolerances};

type Scalar = fn(f64) -> C64;

#[test]
fn submultiplicative_on_rational_pairs() {
    let grid = CayleyGrid::new(10).unwrap();
    let tol = Tolerances::default();
    let fs: [Scalar; 4] = [
        |t| C64::new(1.0, 0.0) / C64::new(t, 1.0),
        |t| C64::new(t, -2.0) / C64::new(t, 3.0),
        |t| C64::new(1.0, 0.0) / (C64::new(t, 0.0).powi(2) + 4.0),
        |t| C64::new(t, 0.0) / (C64::new(t, 0.0).powi(2) + 1.0),
    ];
    for r in 0usize..=2 {
        let c_r = (0..=r).map(|p| 2f64.powi(p as i32)).fold(0.0, f64::max);
        let norms: Vec<f64> = fs.iter().map(|f| wr_norm(f, r, &grid, &tol).unwrap().total).collect();
        for (i, f) in fs.iter().enumerate() {
            for (j, g) in fs.iter().enumerate().skip(i) {
                let nfg = wr_norm(|t| f(t) * g(t), r, &grid, &tol).unwrap().total;
                assert!(
                    nfg <= c_r * norms[i] * norms[j] * (1.0 + 1e-9),
                    "r {r}, pair ({i}, {j})"
                );
            }
        }
    }
}
