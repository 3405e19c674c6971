use mcolour::spin::{self, CoverKind, PinElement};
use mcolour::FiniteGroup;

fn table_order(group: &FiniteGroup, g: usize) -> usize {
    let mut x = g;
    let mut order = 1;
    while x != 0 {
        x = group.mul(x, g);
        order += 1;
    }
    order
}

fn order_histogram(m: usize, kind: CoverKind) -> Vec<usize> {
    let cover = spin::enumerate_cover(m, kind).unwrap();
    let mut hist = vec![0; 13];
    for g in 0..cover.group.size() {
        hist[table_order(&cover.group, g)] += 1;
    }
    hist
}

// Tilde over Sym(4) is the binary octahedral group: one involution.
#[test]
fn binary_octahedral_orders() {
    let hist = order_histogram(4, CoverKind::Tilde);
    assert_eq!(hist.iter().sum::<usize>(), 48);
    assert_eq!(hist[1], 1);
    assert_eq!(hist[2], 1);
    assert_eq!(hist[3], 8);
    assert_eq!(hist[4], 18);
    assert_eq!(hist[6], 8);
    assert_eq!(hist[8], 12);
}

// Hat over Sym(4) is GL(2,3): -I plus 12 reflections.
#[test]
fn gl23_orders() {
    let hist = order_histogram(4, CoverKind::Hat);
    assert_eq!(hist[1], 1);
    assert_eq!(hist[2], 13);
    assert_eq!(hist[3], 8);
    assert_eq!(hist[4], 6);
    assert_eq!(hist[6], 8);
    assert_eq!(hist[8], 12);
}

#[test]
fn clifford_orders_match_table() {
    for m in 2..=4 {
        for kind in CoverKind::ALL {
            let cover = spin::enumerate_cover(m, kind).unwrap();
            for (g, x) in cover.elements.iter().enumerate() {
                assert_eq!(x.order().unwrap(), table_order(&cover.group, g), "m={m} {kind} {g}");
            }
        }
    }
}

#[test]
fn table_agrees_with_clifford_product() {
    let cover = spin::enumerate_cover(3, CoverKind::Tilde).unwrap();
    for (a, x) in cover.elements.iter().enumerate() {
        for (b, y) in cover.elements.iter().enumerate() {
            let product: PinElement = x.pin_mul(y).unwrap();
            assert_eq!(cover.label_of(&product), Some(cover.group.mul(a, b)));
        }
    }
}

#[test]
fn centre_is_plus_minus_one() {
    for kind in CoverKind::ALL {
        let cover = spin::enumerate_cover(4, kind).unwrap();
        let group = &cover.group;
        let central: Vec<usize> = (0..group.size())
            .filter(|&z| (0..group.size()).all(|g| group.mul(z, g) == group.mul(g, z)))
            .collect();
        assert_eq!(central, vec![0, cover.central_involution()], "{kind}");
    }
}
