"""Smoke test for the nullboot extension module.

Build first: pip install -e crates/py --no-build-isolation
"""

import json

import sympy as sp

import nullboot


def quartic_e1():
    # <n| x^4 |n> for the unit oscillator, from ladder matrix elements.
    n = sp.symbols("n", nonnegative=True, integer=True)
    x4 = sp.Rational(1, 4) * (6 * n**2 + 6 * n + 3)
    return [str(c) for c in reversed(sp.Poly(sp.expand(x4), n).all_coeffs())]


def main():
    shifted = nullboot.solve(nullboot.Problem.shifted(), max_order=2)
    assert shifted.verified
    assert shifted.energy(0) == ["1/2", "1"]
    assert shifted.energy(2) == ["1/2"]
    assert json.loads(shifted.compare())["all_match"]

    cubic = nullboot.Problem.cubic()
    assert not cubic.hermitian
    assert nullboot.equiv_hermitian_energy(cubic) == ["11/8", "15/4", "15/4"]
    assert nullboot.verify_v_conjugation(cubic, 3)

    sextic = nullboot.Problem.sextic()
    assert nullboot.rs_energy(sextic, 1) == ["15/8", "5", "15/4", "5/2"]

    pot = json.dumps([{"m": 4, "n": 0, "coeff": [{"mono": {}, "coeff": {"a": "1", "b": "0", "c": "0", "d": "0"}}]}])
    quartic = nullboot.Problem.custom(pot, True, True)
    sol = nullboot.solve(quartic, max_order=1)
    assert sol.energy(1) == quartic_e1(), sol.energy(1)
    assert "align*" in sol.latex()

    report, code = nullboot.run_config('{"problem":"shifted","max_order":1}', "verify")
    assert code == 0 and json.loads(report)["passed"]

    try:
        nullboot.run_config('{"problem":"sextic","max_order":-1}')
    except nullboot.NullbootError as e:
        assert "max_order" in str(e)
    else:
        raise AssertionError("invalid config accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
