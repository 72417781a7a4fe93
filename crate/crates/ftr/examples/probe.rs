// temporary calibration probe; not part of the deliverable
use ftr::lowrank::{thin_svd_matrix, truncate};
use ftr::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn jacobi(a: &DMatrix<f64>, sweeps: usize, tol: f64) -> (Vec<f64>, usize) {
    let mut b = if a.nrows() >= a.ncols() { a.clone() } else { a.transpose() };
    let n = b.ncols();
    let m = b.nrows();
    let mut used = 0;
    for _sweep in 0..sweeps {
        used += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let (x, y) = (b[(i, p)], b[(i, q)]);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= tol * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (b[(i, p)], b[(i, q)]);
                    b[(i, p)] = c * x - s * y;
                    b[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| b.column(j).norm()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    (sv, used)
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1936);
    let mut matrices = 0;
    let mut worst = 0.0f64;
    while matrices < 120 {
        let rows = rng.random_range(2..=30);
        let cols = rng.random_range(2..=20);
        let class = matrices % 3;
        let x = match class {
            0 => DMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>() * 2.0 - 1.0),
            1 => {
                let r = rng.random_range(1..=rows.min(cols));
                let a = DMatrix::from_fn(rows, r, |_, _| rng.random::<f64>() - 0.5);
                let b = DMatrix::from_fn(r, cols, |_, _| rng.random::<f64>() - 0.5);
                a * b
            }
            _ => DMatrix::from_fn(rows, cols, |i, _| {
                (rng.random::<f64>() - 0.5) * 10f64.powi((i % 7) as i32 - 3)
            }),
        };
        let f = thin_svd_matrix(&x).unwrap();
        let sigma1 = f.singular_values()[0];
        if sigma1 == 0.0 {
            continue;
        }
        for n in 0..f.rank() {
            let xn = truncate(&f, n).unwrap();
            let resid = &x - xn.matrix();
            let (j60, used) = jacobi(&resid, 60, 1e-15);
            let observed = j60[0];
            let predicted = f.singular_values()[n];
            let rel = (observed - predicted).abs() / sigma1;
            if rel > worst {
                worst = rel;
                println!(
                    "worst so far: {rows}x{cols} class {class} n={n}: jac {observed:.12e} vs svd {predicted:.12e}, rel {rel:.3e}, sweeps {used}"
                );
                if rel > 1e-9 {
                    let (j300, u300) = jacobi(&resid, 400, 1e-16);
                    let gram = resid.transpose() * &resid;
                    let eig = nalgebra::SymmetricEigen::new(gram);
                    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l));
                    println!(
                        "   tight jacobi {:.12e} (sweeps {u300}), gram {:.12e}",
                        j300[0],
                        lmax.sqrt()
                    );
                }
            }
        }
        matrices += 1;
    }
    println!("final worst rel discrepancy: {worst:.3e}");
}
