//! Head-to-head convergence comparison of all six methods on one function.
//!
//! Writes `convergence.csv` in the working directory; the same sweep is
//! available from the CLI as `equifit converge --function fC --out ...`.

use equifit::bench::{convergence_csv, default_sweep, run_convergence, MethodConfig, MethodId};
use equifit::testlib::TestFunctionId;

fn main() {
    let methods: Vec<MethodConfig> = MethodId::COMPARISON
        .iter()
        .map(|&m| MethodConfig::new(m))
        .collect();
    let ns = default_sweep(200, 8);
    let curves = run_convergence(TestFunctionId::FC, &methods, &ns, 1000).unwrap();

    // Table: one row per n, one column per method, log10 of the error.
    print!("{:>5}", "n");
    for c in &curves {
        print!("{:>14}", c.method.method.name());
    }
    println!();
    for (i, &n) in ns.iter().enumerate() {
        print!("{n:>5}");
        for c in &curves {
            let e = c.points[i].error;
            if e.is_finite() && e > 0.0 {
                print!("{:>14.2}", e.log10());
            } else {
                print!("{:>14}", "-");
            }
        }
        println!();
    }

    std::fs::write("convergence.csv", convergence_csv(&curves)).unwrap();
    eprintln!("wrote convergence.csv");
}
