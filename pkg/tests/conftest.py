import pytest

from quiverchow import build_presentation, invariant_report, kronecker

_presentations = {}
_reports = {}


@pytest.fixture(scope="session")
def kpres():
    """Session-cached presentations for Kronecker cases."""

    def get(m, d, e, **kwargs):
        key = (m, d, e, tuple(sorted(kwargs.items())))
        if key not in _presentations:
            q, dv, theta = kronecker(m, d, e)
            _presentations[key] = build_presentation(q, dv, theta, **kwargs)
        return _presentations[key]

    return get


@pytest.fixture(scope="session")
def kreport(kpres):
    """Session-cached invariant reports for Kronecker cases."""

    def get(m, d, e):
        if (m, d, e) not in _reports:
            _reports[(m, d, e)] = invariant_report(kpres(m, d, e), label=f"K_{m}({d},{e})")
        return _reports[(m, d, e)]

    return get
