//! Toroidal maps, their symmetry type and regular quotients.

use chirex::toroidal::{
    build_toroidal_map, is_chiral_params, regular_quotient, Family, TorusParams,
};

fn main() -> chirex::Result<()> {
    for family in [Family::F44, Family::F36, Family::F63] {
        for (b, c) in [(1, 0), (2, 0), (2, 1), (3, 1), (4, 2)] {
            let p = TorusParams::new(family, b, c)?;
            let m = build_toroidal_map(p)?;
            let quotient = match regular_quotient(p)? {
                Some((q, _)) => q.to_string(),
                None => "-".to_string(),
            };
            println!(
                "{p:<14} flags {:>4}  {:?}  chiral by params: {:<5}  schlafli {:?}  dually bipartite: {:<5}  regular quotient: {quotient}",
                m.flag_count(),
                m.classify_symmetry(),
                is_chiral_params(p),
                m.schlafli()?,
                m.dually_bipartite_colouring().is_some(),
            );
        }
    }
    Ok(())
}
