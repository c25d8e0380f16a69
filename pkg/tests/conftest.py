import warnings

import numpy as np
import pytest

from motherbody import gallery, mother
from motherbody.quaddiff import build_DK0, build_theta, strebel_surrogate


@pytest.fixture(scope="session")
def semicircle():
    P, Q, R = gallery.semicircle_triple()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        qd = build_theta(P, Q, R)
        graph = build_DK0(qd)
    cands = mother.enumerate_candidates(qd, graph)
    return {"P": P, "Q": Q, "R": R, "qd": qd, "graph": graph, "candidates": cands}


@pytest.fixture(scope="session")
def arcsine():
    P, Q, R = gallery.arcsine_triple()
    qd = build_theta(P, Q, R)
    res = strebel_surrogate(qd)
    cands = mother.q_zero_enumerate(qd, res.graph)
    return {"P": P, "Q": Q, "R": R, "qd": qd, "strebel": res, "graph": res.graph, "candidates": cands}


@pytest.fixture(scope="session")
def two_intervals():
    P, Q, R = gallery.two_interval_triple()
    qd = build_theta(P, Q, R)
    res = strebel_surrogate(qd)
    cands = mother.q_zero_enumerate(qd, res.graph)
    return {"P": P, "Q": Q, "R": R, "qd": qd, "strebel": res, "graph": res.graph, "candidates": cands}


def random_triples(count=20, degree=2, seed=0x5EED):
    """Coprime triples with real Gaussian coefficients in the standard degree normalisation."""
    from motherbody.polyalg import UniPoly, coprime
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        P = UniPoly(list(rng.normal(size=degree)) + [1.0])
        Q = UniPoly(list(rng.normal(size=degree)))
        R = UniPoly(list(rng.normal(size=degree - 1)))
        if coprime(P, Q):
            out.append((P, Q, R))
    return out


@pytest.fixture(scope="session")
def random_pipeline():
    """Graphs and candidates for the fixed-seed random triples; rejected triples keep their error code."""
    from motherbody.errors import MotherbodyError
    out = []
    for P, Q, R in random_triples():
        entry = {"P": P, "Q": Q, "R": R, "qd": None, "graph": None, "candidates": [], "error": None}
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                entry["qd"] = qd = build_theta(P, Q, R)
                entry["graph"] = graph = build_DK0(qd)
            entry["candidates"] = mother.enumerate_candidates(qd, graph)
        except MotherbodyError as exc:
            entry["error"] = exc.code
        out.append(entry)
    return out


def pytest_terminal_summary(terminalreporter, config):
    from test_acceptance import ACCEPTANCE_KEY
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)
