//! Chiral extensions of {4,4}_(3,1) whose last Schläfli entry is divisible by 2s.

use chirex::extend_db::{extend_dually_bipartite, Representative};
use chirex::toroidal::{build_toroidal_map, Family, TorusParams};

fn main() -> chirex::Result<()> {
    let k = build_toroidal_map(TorusParams::new(Family::F44, 3, 1)?)?;
    for s in 1..=3 {
        let e = extend_dually_bipartite(&k, s, Representative::Least)?;
        println!(
            "s = {s}: {} vertices, type {:?}, group order {}, steps {:?}",
            e.graph.num_vertices(),
            e.report.schlafli,
            e.report.group_order,
            e.matching.steps
        );
    }
    let seeded = extend_dually_bipartite(&k, 2, Representative::Seeded(7))?;
    println!("seeded choice, s = 2: type {:?}", seeded.report.schlafli);
    Ok(())
}
