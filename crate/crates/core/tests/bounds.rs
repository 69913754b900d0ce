mod common;

use common::{graph, CORPUS};
use hde_core::bounds::{brute_force_upper, hde_lower_chordal, hde_upper};
use hde_core::error::Error;
use hde_core::rational::to_f64;

#[test]
fn brute_force_never_beats_the_lower_bound() {
    let mut checked = 0;
    for (fs, gs) in CORPUS {
        let (f, g) = (graph(fs), graph(gs));
        let Some(lower) = hde_lower_chordal(&f, &g).unwrap().rational().map(to_f64) else { continue };
        let cap = if f.is_symmetric() && g.is_symmetric() { 5 } else { 3 };
        match brute_force_upper(&f, &g, cap) {
            Ok(b) => {
                assert!(b.value >= lower - 1e-9, "{fs}/{gs}: target ratio {} below lower {lower}", b.value);
                checked += 1;
            }
            Err(Error::NoTarget(_)) => {}
            Err(e) => panic!("{fs}/{gs}: {e}"),
        }
    }
    assert!(checked >= 30, "only {checked} pairs checked");
}

#[test]
fn brute_force_dominates_the_upper_program() {
    // any single target only bounds HDE from above, so it cannot go below the true value
    for (fs, gs) in [("complete:2", "complete:3"), ("path:3", "path:5"), ("path:2", "cycle:5")] {
        let (f, g) = (graph(fs), graph(gs));
        let exact = to_f64(hde_upper(&f, &g).unwrap().rational().unwrap());
        let b = brute_force_upper(&f, &g, 5).unwrap();
        assert!(b.value >= exact - 1e-9, "{fs}/{gs}: {} < {exact}", b.value);
    }
}

#[test]
fn even_cycles_on_small_targets() {
    // HDE(C_m, C_n) = min(m/n, 1) for even cycles, so no target may go below it
    for m in [4usize, 6, 8] {
        for n in [4usize, 6, 8] {
            let (cm, cn) = (graph(&format!("cycle:{m}")), graph(&format!("cycle:{n}")));
            let b = brute_force_upper(&cm, &cn, 5).unwrap();
            let floor = (m as f64 / n as f64).min(1.0);
            assert!(b.value >= floor - 1e-9, "C{m}/C{n}: {} < {floor}", b.value);
        }
    }
}
