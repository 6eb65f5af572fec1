//! Flag graphs from face lists: validation, orientability, symmetry and covers.

use chirex::maniplex::Maniplex;

fn main() -> chirex::Result<()> {
    let cube = Maniplex::from_faces(&[
        vec![0, 1, 2, 3],
        vec![4, 7, 6, 5],
        vec![0, 4, 5, 1],
        vec![1, 5, 6, 2],
        vec![2, 6, 7, 3],
        vec![3, 7, 4, 0],
    ])?
    .rooted(0)?;
    let hemicube =
        Maniplex::from_faces(&[vec![0, 3, 1, 2], vec![0, 1, 3, 2], vec![0, 3, 2, 1]])?.rooted(0)?;

    for (name, m) in [("cube", &cube), ("hemicube", &hemicube)] {
        println!(
            "{name}: {} flags, valid {}, orientable {}, {:?}, type {:?}, {} automorphisms",
            m.flag_count(),
            m.validate().passed(),
            m.orientation().is_some(),
            m.classify_symmetry(),
            m.schlafli()?,
            m.automorphism_count(),
        );
    }
    println!(
        "cube covers hemicube: {}",
        cube.covers(&hemicube)?.is_some()
    );
    println!(
        "dual of cube has type {:?}",
        cube.maniplex.dual().rooted(0)?.schlafli()?
    );
    let rs = cube.rotation_system()?;
    println!(
        "rotation group of the cube has order {}",
        rs.group().order()
    );
    Ok(())
}
