//! Largest admissible secondary group for a large array, across sizes and
//! aging levels, plus the curvature certificate for one case.
//!
//! cargo run --example plan_secondary_admission

use cogmimo::harness::cmd_plan;
use cogmimo::planner::convexity_certificate;

fn main() -> cogmimo::Result<()> {
    let n_list = [16, 32, 64, 128, 256, 512];
    let table = cmd_plan(&n_list, 10, &[0.9999, 0.8, 0.6])?;
    print!("{}", table.to_csv());

    let grid: Vec<usize> = (1..64 - 10).collect();
    let cert = convexity_certificate(64, 10, 0.8, 1.0, 1.0, 1.0, &grid)?;
    println!(
        "\nN=64, M1=10, a=0.8: objective concave {}, constraint convex {} over {} points",
        cert.objective_concave,
        cert.constraint_convex,
        cert.points.len()
    );
    Ok(())
}
