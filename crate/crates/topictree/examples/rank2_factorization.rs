//! Rank-2 NMF on constructed instances: exact recovery and topic separation.
//!
//! Run with: cargo run -p topictree --example rank2_factorization

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topictree::matrix::from_dense_normalized;
use topictree::nmf::{nmf_rank2, nnls_rank2};

fn main() {
    // The inner solver: exact nonnegative least squares against two columns.
    let w = vec![[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]];
    let a = [2.0, -0.5, 1.0];
    let h = nnls_rank2(&w, &a).expect("solve");
    println!("nnls against identity-ish basis, target {a:?}: h = {h:?}");

    // Planted rank-2 matrix: the optimum residual is zero.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (m, n) = (40, 60);
    let w0: Vec<[f64; 2]> = (0..m)
        .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let h0: Vec<[f64; 2]> = (0..n)
        .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let dense: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| w0[i][0] * h0[j][0] + w0[i][1] * h0[j][1])
                .collect()
        })
        .collect();
    let a = from_dense_normalized(&dense);
    let f = nmf_rank2(&a, 7, 200, 1e-9).expect("factorization");
    println!(
        "\nplanted {m}x{n} rank-2 instance: {} outer iterations, relative residual {:.2e}",
        f.residual_history.len(),
        f.relative_residual(&a)
    );
    let head: Vec<String> = f
        .residual_history
        .iter()
        .take(8)
        .map(|r| format!("{r:.4}"))
        .collect();
    println!("residual history (first 8): {}", head.join(" "));

    // Block-diagonal matrix: documents split cleanly by dominant coefficient.
    let mut dense = vec![vec![0.0; 10]; 8];
    for (j, col) in (0..10).map(|j| (j, j < 5)) {
        for i in 0..8 {
            let in_block = if col { i < 4 } else { i >= 4 };
            if in_block {
                dense[i][j] = 1.0 + ((i * 7 + j * 3) % 5) as f64 * 0.2;
            }
        }
    }
    let a = from_dense_normalized(&dense);
    let f = nmf_rank2(&a, 1, 50, 1e-4).expect("factorization");
    println!("\nblock-diagonal instance, document coefficients:");
    for (j, hj) in f.h.iter().enumerate() {
        let side = if hj[0] >= hj[1] { "left" } else { "right" };
        println!("  doc {j}: h = [{:.3}, {:.3}] -> {side}", hj[0], hj[1]);
    }
}
