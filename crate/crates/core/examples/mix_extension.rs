//! Chiral extensions of {4,4}_(4,2) of type {4,4,lcm(q,2s)} via a regular quotient.

use chirex::extend_db::{extend_dually_bipartite, Representative};
use chirex::mix::regular_quotient_extension;
use chirex::toroidal::{build_toroidal_map, regular_quotient, Family, TorusParams};

fn main() -> chirex::Result<()> {
    let params = TorusParams::new(Family::F44, 4, 2)?;
    let k = build_toroidal_map(params)?;
    let (rp, r) = regular_quotient(params)?.expect("{4,4}_(4,2) has a regular quotient");
    let p = extend_dually_bipartite(&k, 1, Representative::Least)?;
    println!(
        "K = {params}, R = {rp}, seed extension of type {:?}",
        p.report.schlafli
    );
    for s in [2, 3] {
        let m = regular_quotient_extension(&p.graph, &k, &r, s)?;
        println!(
            "s = {s}: type {:?} (lcm({}, {}) = {}), |Γ_s| = {}",
            m.report.schlafli,
            m.q,
            2 * s,
            m.expected_last_entry,
            m.report.group_order
        );
        for v in &m.report.verdicts {
            println!("  {:<24} {}", v.condition, v.detail);
        }
    }
    Ok(())
}
