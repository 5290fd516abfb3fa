import math

import pytest

from zeromodes.model import PotentialParams

LAMBDAS = [0.8, 1.5, 2.5, 4.0, -0.8, -2.5, -4.0]
MUS = [0.0, 0.5, 1.0, 2.0]
MATRIX = [PotentialParams(lam, mu) for lam in LAMBDAS for mu in MUS]


def jacobi_series(a, b, n, z):
    """P_n^{(a,b)}(z) from the terminating 2F1 series in w = (1 - z)/2.

    (a+1)_n/n! * sum_k (-n)_k (n+a+b+1)_k / ((a+1)_k k!) w^k, with the ratio
    (a+1)_n/(a+1)_k written as the product (a+k+1)...(a+n) so that no
    division by (a+1)_k occurs.
    """
    w = (1 - z) / 2
    total = 0j
    for k in range(n + 1):
        head = 1 + 0j
        for j in range(k + 1, n + 1):
            head *= a + j
        rising_neg_n = 1.0
        rising_c = 1 + 0j
        for j in range(k):
            rising_neg_n *= -n + j
            rising_c *= n + a + b + 1 + j
        total += head * rising_neg_n * rising_c / math.factorial(k) * w**k
    return total / math.factorial(n)


@pytest.fixture
def worked_point():
    return PotentialParams(4.0, 1.0)


ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (title, bool(ok), detail)
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
