"""Smoke test for the franel_py extension module.

Build and import either with `pip install --no-build-isolation ./crates/py`
(needs maturin) or by copying target/release/libfranel_py.so to franel_py.so
somewhere on PYTHONPATH.
"""

import json

import franel_py as fp


def main():
    assert [fp.franel(n) for n in range(7)] == [1, 2, 10, 56, 346, 2252, 15184]
    assert fp.franel_list(6)[-1] == 15184
    assert fp.franel(60) == sum(fp.binom(60, k) ** 3 for k in range(61))
    assert fp.apery(2) == 73
    assert fp.franel_poly(4, 1) == 346
    assert fp.generalized_franel(4, 2) == 70
    assert fp.jacobi(7, 3) == 1 and fp.jacobi(5, 3) == -1

    ring = fp.Ring(5, 3)
    assert ring.modulus == 125
    assert ring.franel_table(5)[4] == 96
    half = ring.rational("1/2")
    assert (half * ring(2)).value == 1
    assert (ring(3) ** -1 * ring(3)).value == 1
    try:
        ring(1) / ring(5)
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("dividing by p should fail")

    row = fp.run_check("C15", 5)
    assert (row.lhs, row.rhs, row.passed) == (24, 24, True)
    rows = json.loads(fp.run_suite(5, 13, ids=["C15", "L25"], workers=2))
    assert len(rows) == 8 and all(r["pass"] for r in rows)
    assert "T14_r:r=-1/2" in fp.check_ids()

    assert fp.parse("1 - (2 - 3)") == "1 - (2 - 3)"
    assert fp.eval_expr("f(4)", ring) == 96
    assert fp.eval_expr("x^2 + 1", fp.Ring(11, 1), {"x": 3}) == 10
    report = json.loads(fp.eval_congruence("f(p-1) ≡ 1 + 3*p*q2() + 3*p^2*q2()^2 (mod p^3)", 5, 97))
    assert all(r["pass"] for r in report)

    assert fp.cornacchia(7) == (2, 1) and fp.cornacchia(5) is None
    assert fp.scan_ar(2, 5, 199) == (5, True)
    assert fp.check_3adic(200) == []
    assert all(ok for _, _, ok in fp.identities())
    print("franel_py smoke test: ok")


if __name__ == "__main__":
    main()
