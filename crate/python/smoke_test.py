"""Smoke test for the `hde` extension module. Run after building it with
`pip install --no-build-isolation -e crates/python`."""

from fractions import Fraction

import hde


def main():
    k2, k3 = hde.Graph.builtin("complete:2"), hde.Graph.builtin("complete:3")
    assert hde.hom_count(k2, k3) == 6
    assert len(hde.hom_list(k2, k3)) == 6

    p4 = hde.Graph(4, [(0, 1), (1, 2), (2, 3)], name="P4")
    assert p4 == hde.Graph.parse(p4.to_text())
    assert p4.is_chordal() and p4.is_series_parallel()
    p6 = hde.Graph.builtin("path:6")
    assert hde.hde_exact(p4, p6).value == Fraction(5, 8)
    assert hde.closed_form_paths(4, 6) == Fraction(5, 8)

    vee, c3 = hde.Graph.builtin("vee"), hde.Graph.builtin("dicycle:3")
    assert hde.hde_exact(vee, c3).value == 1

    lower = hde.hde_lower(k2, k3)
    assert lower.value == Fraction(2, 3) and lower.kind == "lower"
    assert hde.hde_upper(k2, k3).value >= lower.value
    assert hde.hde_exact(p6, hde.Graph.builtin("path:1")).value is None

    c4_2k1 = hde.Graph(6, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert hde.hde_upper(c4_2k1, k2).value == 3
    assert hde.fractional_edge_cover(k3) == Fraction(3, 2)

    ratio, hom_f, hom_g, witness = hde.brute_force_upper(k2, k3, 4)
    assert ratio >= 2 / 3 - 1e-9 and hom_g >= 2 and witness.n <= 4

    cert = hde.Certificate.extract(k2, k3)
    ok, certified, reason = cert.verify()
    assert ok and certified == Fraction(2, 3), reason
    again = hde.Certificate.from_json(cert.to_json())
    assert again.verify()[0]
    checked, failures = cert.soundness(3)
    assert checked > 0 and not failures
    assert hde.Certificate.builtin_p4(1).verify()[0]

    t = hde.build_tightness_target(k3, lower.primal, 27, seed=1)
    assert t.projection_is_homomorphism()
    assert t.scale == 27 and t.fiber_sizes() == [3, 3, 3]
    assert hde.hom_count(k3, t.target) > 0

    q = {(0, 1): Fraction(1, 2), (2,): "1/2"}
    path3 = hde.Graph.builtin("path:3")
    u = hde.build_tn_upper(path3, q, 4)
    assert u.projection_is_homomorphism() and u.base == path3

    big = hde.build_tn_p4(1, 4, seed=7)
    assert big.projection_is_homomorphism()

    assert hde.is_mrf(c3, c3)
    assert abs(hde.uniform_hom_entropy(c3, c3) - 1.584962500721156) < 1e-9

    try:
        hde.Graph.builtin("nosuch:3")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown builtin accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
