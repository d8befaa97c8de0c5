use sha2::{Digest, Sha256};
use thinlab_core::catalog::{self, ThinnessClaim};
use thinlab_core::IntMatrix;

/// One line per entry: `id|rows|rows…` with rows `a,b;c,d`.
fn canonical() -> String {
    let mut s = String::new();
    for e in catalog::ENTRIES {
        s.push_str(e.id);
        for m in e.generators {
            s.push('|');
            let rows: Vec<String> = m
                .iter()
                .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                .collect();
            s.push_str(&rows.join(";"));
        }
        s.push('\n');
    }
    s
}

#[test]
fn matrices_are_frozen() {
    let digest = Sha256::digest(canonical().as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, "2a3cb84f7d327d220dc49f2d9c2645ae952678928832db3cbd07a11bb8c55d12");
}

#[test]
fn entries_are_well_formed() {
    let ids: Vec<&str> = catalog::ENTRIES.iter().map(|e| e.id).collect();
    assert_eq!(
        ids,
        ["ex1", "ex2", "ex3", "ex4", "ex5", "ex7", "ex8", "ex9", "ex10", "ex11", "gl2-demo"]
    );
    for e in catalog::ENTRIES {
        assert!(!e.citation.is_empty(), "{}", e.id);
        let g = e.generator_set();
        assert_eq!(g.n(), e.n());
        assert_eq!(catalog::matching(&g).map(|m| m.id), Some(e.id));
    }
    assert!(catalog::entry("ex8").unwrap().citation.contains("necessarily of infinite index"));
    assert!(catalog::entry("ex9").unwrap().citation.contains("this group is thin"));
    assert_eq!(catalog::entry("ex11").unwrap().thinness, ThinnessClaim::Unknown);
}

#[test]
fn triangle_group_relations() {
    let g = catalog::generators("ex8").unwrap();
    let (a, b) = (g.generator(0), g.generator(1));
    assert!(a.pow(3).unwrap().is_identity());
    assert!(b.pow(3).unwrap().is_identity());
    let ab: IntMatrix = a.mul(b).unwrap();
    assert!(ab.pow(4).unwrap().is_identity());
    assert!(!ab.pow(2).unwrap().is_identity());
}
