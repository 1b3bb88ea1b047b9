"""Smoke test for the dpmirror_py extension module.

Build and install with `pip install --no-build-isolation crates/py`, then run
`python3 python/smoke_test.py`.
"""

import dpmirror_py as dp


def main():
    cfg = dp.fiber_configuration(3)
    assert cfg["euler_sum"] == 12
    assert cfg["infinity"] == "I3"
    assert [f["type"] for f in cfg["finite"]] == ["IV*", "I1"]

    assert dp.mirror_check(2, order=8)["first_mismatch"] is None

    expected = {
        3: "a+b,b,a,b,a,b,a,b,a",
        2: "a+b,a,b,a,a,a-b,b,b,a,b",
        1: "a+b,a,b,a,b,a,b,a,b,a,b",
    }
    for d, listed in expected.items():
        classes = dp.vanishing_classes(d)
        want = [dp.HomologyClass.parse(s) for s in listed.split(",")]
        assert len(classes) == len(want)
        assert all(c.same_up_to_sign(w) for c, w in zip(classes, want)), (d, classes)
        assert len(dp.critical_values(d)) == 12 - d

        report = dp.verify_theorem(d)
        assert report["classes_match"] and report["exceptional"], report

    p = dp.Pseudolattice.fibration(3)
    word = dp.MutationWord.beta(3)
    basis = [[int(i == j) for j in range(p.rank())] for i in range(p.rank())]
    out = p.mutate(basis, word)
    assert p.is_exceptional(out)
    assert p.mutate(out, word.inverse()) == basis

    ns = p.neron_severi()
    assert len(ns["gram"]) == 7

    kz = dp.kernel_decomposition(1)
    assert kz["root_system"]["dynkin"] == "E8", kz["root_system"]

    found = dp.norm_guided_search(3, budget=5000)
    assert found is not None

    print("dpmirror_py smoke test passed")


if __name__ == "__main__":
    main()
