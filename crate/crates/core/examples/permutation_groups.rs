//! Stabilizer chains, exact group orders and membership.

use chirex::permcore::{PermGroup, Permutation};

fn main() -> chirex::Result<()> {
    // two 5-cycles sharing one point generate A_9
    let a = Permutation::from_cycles(9, &[&[0, 1, 2, 3, 4]])?;
    let b = Permutation::from_cycles(9, &[&[4, 5, 6, 7, 8]])?;
    let g = PermGroup::new(9, vec![("a".into(), a.clone()), ("b".into(), b.clone())])?;
    println!("|<a, b>| = {}", g.order());
    println!("base = {:?}", g.chain().base());
    println!("orbit lengths = {:?}", g.chain().orbit_lengths());

    let ab = a.compose(&b);
    println!("a then b = {ab}, order {}", ab.order());
    let transposition = Permutation::from_cycles(9, &[&[0, 1]])?;
    println!("(0 1) in group: {}", g.contains(&transposition)?);
    println!(
        "a·b·a^-1 in group: {}",
        g.contains(&a.compose(&b).compose(&a.inverse()))?
    );

    let mut count = 0u64;
    let cyclic = PermGroup::from_perms(9, vec![a])?;
    cyclic.for_each_element(|_| {
        count += 1;
        true
    });
    println!("listed {count} elements of <a>");
    Ok(())
}
