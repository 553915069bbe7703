"""Smoke test for the fsmreq Python module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

from pathlib import Path

import fsmreq_py as fr

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def load(name):
    return (FIXTURES / name).read_text()


def main():
    m = fr.Machine.parse(load("M.csv"))
    s = fr.Machine.parse(load("S.csv"))
    s_prime = fr.Machine.parse(load("S_prime.csv"))
    r = fr.Requirement.parse(load("R.req"), m)

    assert len(m) == 3 and m.inputs == ["a", "b"]
    assert m.run("a.a.a") == ["1", "0", "0"]
    assert s.run("a.a.a") == ["1", "0", "1"]

    exh = fr.exhaustive_suite(m, r)
    assert exh.cases == ["a.a.b", "a.b.b", "b.a.b", "b.b.a"], exh.cases
    assert fr.run_suite(s, m, exh) == []

    h = fr.h_suite(m)
    assert fr.run_suite(s, m, h) == ["FAIL a.a.a step 3: observed 1.0.1 expected 1.0.0"]

    assert fr.violation(s, m, r) is None
    assert fr.violation(s_prime, m, r) == "b.a.a.b/1.1.0.1"
    assert fr.run_suite(s_prime, m, exh, r) == []
    assert fr.run_suite(s_prime, m, fr.complete_suite(m, r), r) != []

    m1, m2, m1p = fr.abstractions(m, r)
    assert m1.splitlines()[1] == "q0,q2/{0|1},q1/*"
    assert len(m2.splitlines()) == 3
    assert len(m1p.splitlines()) == 15

    fsb = fr.Machine.parse(load("FSBRTSX.csv"))
    r1 = fr.Requirement.parse(load("R1.req"), fsb)
    assert fsb.after("d1") == "s3"
    assert len(fsb.minimize()) == 24
    suite = fr.exhaustive_suite(fsb, r1)
    for mutant in fr.mutants(fsb, 1, 200):
        if len(mutant) <= len(fsb) and not fr.run_suite(mutant, fsb, suite):
            assert fr.violation(mutant, fsb, r1) is None

    try:
        fr.Requirement.parse("q0,a,{2}\n", m)
    except fr.FsmreqError as e:
        assert "not allowed" in str(e)
    else:
        raise AssertionError("invalid requirement accepted")

    print(f"smoke test passed: H={len(h)} exhaustive={len(exh)} R1 suite={len(suite)}")


if __name__ == "__main__":
    main()
