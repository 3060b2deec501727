"""Smoke test of the affine_sle extension module.

Build and install first:  pip install ./crates/py  (or: maturin develop -m crates/py/Cargo.toml)
"""

from fractions import Fraction

import affine_sle


def main():
    m = affine_sle.WeylModule("sl2", level=1, weight="0", max_degree=4)
    assert m.central_charge == "1/1"
    assert m.gram_ranks() == affine_sle.character(1, 4) == [1, 3, 4, 7, 13]

    r = m.solve(n=2)
    assert r["status"] == "unique-solution", r["status"]
    values = [Fraction(v) for v in r["values"]]
    assert values == [Fraction(8, 3), 1, 1, 1], values

    bad = m.verify(["0/1", "1", "1", "1"])
    assert not bad["is_null"] and bad["nonzero_pairings"]

    spin = affine_sle.WeylModule("sl2", weight="L1", max_degree=4)
    assert spin.conformal_weight == "1/4"
    assert spin.solve(n=2)["status"] == "infeasible"

    ids = affine_sle.lattice_identities("sl2", "A")
    assert ids["all_hold"] and len(ids["identities"]) == 5

    mc = m.martingale("8/3", ["1", "1", "1"], t=0.2, dt=0.01, paths=500, seed=3)
    assert mc["max_z"] < 3, mc["max_z"]

    tr = affine_sle.trace(2, 8 / 3, [1.0, 1.0, 1.0], t=0.05, stride=10)
    assert len(tr["rows"]) == 6 and tr["censored_at"] is None

    print("affine_sle", affine_sle.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
