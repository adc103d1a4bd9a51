"""Smoke test for the pyclosurestab extension.

Build and run:

    cargo build --release -p closurestab-py --features extension-module
    mkdir -p build && cp target/release/libpyclosurestab.so build/pyclosurestab.so
    PYTHONPATH=build python3 python/smoke_test.py
"""

import pyclosurestab as cs


def main():
    c3 = cs.Graph.cycle(3)
    assert c3.vertex_count == 3
    assert not c3.is_bipartite()
    assert cs.Graph.from_graph6(c3.graph6()) == c3

    i = c3.edge_ideal()
    assert len(i) == 3
    assert i.contains([1, 1, 0])
    assert not i.contains([1, 0, 0])

    # closure(I(C3)^2) adds nothing: every degree-4 monomial in it factors
    sq = i.power(2)
    cl = cs.closure_power(i, 2)
    assert cl == sq, (str(cl), str(sq))
    assert cl.contains([2, 1, 1])

    # (x1^2, x2^2) is not integrally closed: x1*x2 is integral over it
    xy = cs.MonomialIdeal.parse(2, "x1^2, x2^2")
    assert cs.closure_power(xy, 1).contains([1, 1])
    assert not xy.contains([1, 1])

    assert cs.associated_primes(i) == [[1, 2], [1, 3], [2, 3]]
    assert [1, 2, 3] in cs.associated_primes(sq)
    assert cs.depth(i) == 1
    assert cs.depth(sq) == 0

    betti = cs.betti_numbers(i)
    assert sum(betti[0].values()) == 3
    assert betti[1] == {(1, 1, 1): 2}

    inv = cs.invariants(c3)
    assert (inv["n0"], inv["n1"], inv["phi0"], inv["phi1"]) == (2, 2, 2, 2), inv

    report = cs.stability_report(c3, extra_powers=1)
    assert report["astab_bar"] == 2 and report["dstab_bar"] == 2, report

    p4 = cs.Graph.path(4)
    assert cs.invariants(p4)["n1"] is None

    try:
        cs.Graph(3, [(1, 1)])
    except ValueError:
        pass
    else:
        raise AssertionError("loop accepted")

    summary = cs.verify_exhaustive(4, checks="bounds,leaf,cover")
    assert summary["graphs"] and not summary["counterexamples"], summary
    assert all(c["failed"] == 0 for c in summary["checks"].values())

    print("pyclosurestab smoke test ok")


if __name__ == "__main__":
    main()
