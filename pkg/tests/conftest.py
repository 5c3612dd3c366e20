import itertools

import pytest

from rankshare.codes import induced_qpolymatroid
from rankshare.field import field_make
from rankshare.linalg import Subspace
from rankshare.port import build_port
from rankshare.serialize import fixture_code, fixture_matrix, fixture_subspace


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def F2():
    return field_make(2)


@pytest.fixture(scope="session")
def ex1():
    return {
        "C": fixture_code("example1.json"),
        "P0": fixture_subspace("example1_p0.json"),
        "P": fixture_subspace("example1_p.json"),
        "p1": fixture_subspace("example1_p1.json"),
        "p2": fixture_subspace("example1_p2.json"),
        "S": fixture_matrix("example1_secret.json"),
        "X": fixture_matrix("example1_x.json"),
    }


@pytest.fixture(scope="session")
def ex3():
    return {
        "C": fixture_code("example3.json"),
        "P0": fixture_subspace("example3_p0.json"),
        "P": fixture_subspace("example3_p.json"),
    }


@pytest.fixture(scope="session")
def port2(ex1):
    return build_port(induced_qpolymatroid(ex1["C"]), ex1["P0"], ex1["P"])


@pytest.fixture(scope="session")
def port3(ex3):
    return build_port(induced_qpolymatroid(ex3["C"]), ex3["P0"], ex3["P"])


def span(F, *rows, n=None):
    n = n if n is not None else len(rows[0])
    return Subspace.span(F, rows, n)


def brute_subspaces(F, n):
    """Every subspace as a frozenset of points, found by closing random spans."""
    vecs = list(itertools.product(range(F.q), repeat=n))
    seen = set()
    frontier = {frozenset([(0,) * n])}
    while frontier:
        seen |= frontier
        nxt = set()
        for S in frontier:
            for v in vecs:
                if v in S:
                    continue
                pts = {tuple(F.add(a, F.mul(c, b)) for a, b in zip(p, v)) for p in S for c in range(F.q)}
                # close under addition
                pts = _close(F, pts)
                fs = frozenset(pts)
                if fs not in seen:
                    nxt.add(fs)
        frontier = nxt
    return seen


def _close(F, pts):
    pts = set(pts)
    changed = True
    while changed:
        changed = False
        for a in list(pts):
            for b in list(pts):
                s = tuple(F.add(x, y) for x, y in zip(a, b))
                if s not in pts:
                    pts.add(s)
                    changed = True
    return pts
