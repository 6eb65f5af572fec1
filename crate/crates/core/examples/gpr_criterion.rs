//! Checking a candidate GPR-graph against the extension criterion.

use chirex::gpr::{cayley_gpr, verify_extension_criterion};
use chirex::toroidal::{build_toroidal_map, Family, TorusParams};

fn main() -> chirex::Result<()> {
    let k = build_toroidal_map(TorusParams::new(Family::F44, 2, 1)?)?;
    let cay = cayley_gpr(&k)?;
    println!(
        "Cay(K): {} vertices, arrows of orders {:?}",
        cay.num_vertices(),
        cay.arrows().iter().map(|p| p.order()).collect::<Vec<_>>()
    );

    // two copies joined by σ_3 = σ_2^{-1}: ⟨σ_2⟩ and ⟨σ_3⟩ meet nontrivially
    let two = cay.disjoint_copies(2);
    let bad = two.with_arrow(two.sigma(2).inverse())?;
    let report = verify_extension_criterion(&bad, &k)?;
    for v in &report.verdicts {
        println!(
            "  {:<28} {}  {}",
            v.condition,
            if v.passed { "ok  " } else { "FAIL" },
            v.detail
        );
    }
    println!("accepted: {}", report.passed());
    Ok(())
}
