"""Smoke test for the levyskew extension module."""

import math

import levyskew as ls

R, Q, T = 0.05, 0.0, 1.0

bs = ls.LevyModel.diffusion(0.2)
call = ls.price(bs, 100.0, 100.0, R, Q, T)
assert abs(call - 10.450583572185565) < 1e-7, call

merton = ls.LevyModel.merton(0.2, 1.0, -0.1, 0.15)
fourier = ls.price(merton, 100.0, 110.0, R, Q, T, kind="put")
series = ls.merton_series(merton, 100.0, 110.0, R, Q, T, kind="put")
assert abs(fourier - series) < 1e-7, (fourier, series)

est, se = ls.mc_price(merton, 100.0, 110.0, R, Q, T, kind="put", n_paths=200_000, seed=7)
assert abs(est - series) < 4 * se, (est, se, series)

lo, hi = ls.LevyModel.cgmy(0.0, 1.0, 5.0, 10.0, 0.5).strip()
assert (lo, hi) == (-5.0, 10.0)

assert abs(ls.duality_check(merton, 100.0, 95.0, R, 0.02, 0.5)) < 1e-6

sym = merton.with_beta(-0.5)
assert abs(sym.beta() + 0.5) < 1e-12
x, k_call, k_put, sk, excess = ls.sk(sym, 100.0, R, 0.5, 0.1)
assert abs(excess) < 1e-6 and abs(sk - x) < 1e-6
assert abs(ls.bates_rule_residual(sym, 100.0, R, 0.5, 0.1)) < 1e-6

psi = merton.char_exponent(complex(0.3, -0.2))
assert isinstance(psi, complex) and math.isfinite(psi.real)

cells = ls.sk_excess_sign_scan(merton, [-1.0, -0.5, 0.5], [0.05, 0.1], 100.0, R, 0.5)
signs = {(b, x): s for b, x, _, s in cells}
assert signs[(-0.5, 0.05)] == 0 and signs[(0.5, 0.05)] == 1 and signs[(-1.0, 0.05)] == -1, signs

rows, verdict = ls.monotonicity_scan(merton, [-1.0, -0.5, 0.0], 100.0, 105.0, R, 0.5)
assert len(rows) == 3 and isinstance(verdict, str)

strikes = [80.0 + 2.5 * i for i in range(17)]
text = ls.synthetic_chain(sym, 100.0, R, 0.5, strikes)
calls, puts, summary = ls.chain_report(text)
assert calls and puts
assert summary["verdict"] == "consistent-with-symmetry", summary

try:
    ls.price(ls.LevyModel.cgmy(0.0, 1.0, 5.0, 0.5, 0.5), 100.0, 100.0, R, Q, T)
except ls.NumericalError as e:
    assert "StripViolation" in str(e), e
else:
    raise AssertionError("expected NumericalError")

try:
    ls.LevyModel.merton(-0.1, 1.0, 0.0, 0.1)
except ls.LevySkewError:
    pass
else:
    raise AssertionError("expected LevySkewError")

print("smoke test passed")
