use chirex::maniplex::{Maniplex, RootedManiplex, Symmetry};
use chirex::mix::{diamond, is_regular_via_mix};
use chirex::toroidal::{build_toroidal_map, Family, TorusParams};
use chirex::two_s_m::build_two_s_m;

fn torus(f: Family, b: i64, c: i64) -> RootedManiplex {
    build_toroidal_map(TorusParams::new(f, b, c).unwrap()).unwrap()
}

fn maps(f: Family, r: i64) -> Vec<RootedManiplex> {
    let mut out = Vec::new();
    for b in -r..=r {
        for c in -r..=r {
            if (b, c) != (0, 0) {
                out.push(torus(f, b, c));
            }
        }
    }
    out
}

#[test]
fn regular_via_mix_matches_flag_classification() {
    let mut corpus: Vec<RootedManiplex> = Vec::new();
    for f in [Family::F44, Family::F36, Family::F63] {
        corpus.extend(maps(f, 3));
    }
    for p in 3..=8 {
        corpus.push(Maniplex::polygon(p).unwrap().rooted(0).unwrap());
    }
    let r = torus(Family::F44, 2, 0);
    corpus.push(build_two_s_m(&r, 2).unwrap().maniplex);
    let mut seen = [0usize; 2];
    for m in &corpus {
        let sym = m.classify_symmetry();
        assert_ne!(sym, Symmetry::Other);
        let rs = m.rotation_system().unwrap();
        let regular = is_regular_via_mix(&rs).unwrap();
        assert_eq!(
            regular,
            sym == Symmetry::Regular,
            "{} flags",
            m.flag_count()
        );
        seen[regular as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn covers_matches_diamond_order() {
    for f in [Family::F44, Family::F36] {
        let corpus = maps(f, 2);
        let groups: Vec<_> = corpus
            .iter()
            .map(|m| m.rotation_system().unwrap().group())
            .collect();
        let mut covering = 0;
        for (i, m) in corpus.iter().enumerate() {
            for (j, n) in corpus.iter().enumerate() {
                let by_flags = m.covers(n).unwrap().is_some();
                let d = diamond(&groups[i], &groups[j], None).unwrap();
                assert_eq!(by_flags, d.collapses_to_left(), "{f} pair {i} {j}");
                covering += by_flags as usize;
            }
        }
        assert!(covering > corpus.len());
    }
}
