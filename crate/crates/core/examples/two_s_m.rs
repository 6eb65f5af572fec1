//! The regular maniplex 2s^M over {4,4}_(2,0) and its automorphisms.

use chirex::toroidal::{build_toroidal_map, Family, TorusParams};
use chirex::two_s_m::{build_two_s_m, verify_aut_structure};

fn main() -> chirex::Result<()> {
    let m = build_toroidal_map(TorusParams::new(Family::F44, 2, 0)?)?;
    for s in [2, 3] {
        let t = build_two_s_m(&m, s)?;
        let aut = verify_aut_structure(&m, s)?;
        println!(
            "s = {s}: {} flags, type {:?}, {:?}, |Aut| = {} (expected {})",
            t.maniplex.flag_count(),
            t.maniplex.schlafli()?,
            t.maniplex.classify_symmetry(),
            aut.automorphisms,
            aut.expected
        );
        let gens = t.translation_chi_automorphisms()?;
        let names: Vec<&str> = gens.iter().map(|(n, _)| n.as_str()).collect();
        println!("  translations and χ: {names:?}");
    }
    Ok(())
}
