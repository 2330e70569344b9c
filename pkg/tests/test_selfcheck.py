from fractions import Fraction

from quiverchow import polyring, selfcheck


def test_quick_checks_pass():
    result = selfcheck.run_checks("quick")
    assert result.ok
    assert result.failed == 0
    assert all(line.startswith("PASS") for line in result.lines)


def test_extended_adds_the_large_row():
    result = selfcheck.run_checks("quick", extended=True)
    assert result.ok
    assert any("K_5(2,3)" in line for line in result.lines)


def test_grassmannian_helpers_agree_with_known_values():
    assert selfcheck.grassmannian_degree(2, 4) == 2
    assert selfcheck.grassmannian_degree(2, 5) == 5
    assert selfcheck.grassmannian_chi_top(2, 4) == 6
    assert selfcheck.grassmannian_sections(2, 4, 1) == 6
    assert selfcheck.grassmannian_sections(2, 4, 2) == 20
    assert selfcheck.grassmannian_betti(2, 4) == [1, 1, 2, 1, 1]


def test_bernoulli_tampering_is_detected(monkeypatch):
    # corrupting one series coefficient must make the suite fail loudly
    good = polyring.todd_series

    def bad(n):
        coeffs = list(good(n))
        if len(coeffs) > 2:
            coeffs[2] += Fraction(1, 12)
        return coeffs

    monkeypatch.setattr(polyring, "todd_series", bad)
    result = selfcheck.run_checks("quick")
    assert not result.ok
    assert result.failed > 0
