import itertools

import numpy as np
import pytest

from tpsig.constructions import construct_cyclotomic, construct_gauss, cyclotomic_parameters, prime_powers

# filled by tests/test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_inner(a, b):
    """<a, b> = sum_t a(t) conj(b(t)), written out term by term."""
    return sum(complex(x) * complex(y).conjugate() for x, y in zip(a, b))


def brute_ambiguity(V):
    """|<phi_j, M_w L_tau phi_j'>| by direct quadruple loop, independent of the library."""
    M, n = V.shape
    out = np.zeros((M, M, n, n))
    for j, jp, w, tau in itertools.product(range(M), range(M), range(n), range(n)):
        g = [np.exp(2j * np.pi * w * t / n) * V[jp, (t + tau) % n] for t in range(n)]
        out[j, jp, w, tau] = abs(brute_inner(V[j], g))
    return out


def brute_measures(V):
    A = brute_ambiguity(V)
    M, n = V.shape
    nu = theta = lam = 0.0
    for j, jp, w, tau in itertools.product(range(M), range(M), range(n), range(n)):
        if j == jp and w == 0 and tau == 0:
            continue
        v = A[j, jp, w, tau]
        lam = max(lam, v)
        if w == 0:
            theta = max(theta, v)
            if tau == 0:
                nu = max(nu, v)
    return nu, theta, lam


@pytest.fixture(scope="session")
def gauss_sets():
    return {(p, m): construct_gauss(p, m) for _, p, m in prime_powers(3, 128)}


@pytest.fixture(scope="session")
def cyclotomic_sets():
    return {(p, m, e): construct_cyclotomic(p, m, e) for p, m, e in cyclotomic_parameters(128)}
