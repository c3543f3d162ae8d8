import numpy as np
import pytest


def perturbation_check(objective, point, n_samples=10_000, radius=1e-3, slack=1e-8, seed=0):
    """Largest violation of ``objective(point + d) >= objective(point) - slack``.

    ``objective`` must accept a 2-D array of candidate points (one per row).
    Perturbations are uniform in the cube of half-width ``radius``. Returns a
    non-positive number when ``point`` beats every perturbation.
    """
    rng = np.random.default_rng(seed)
    point = np.asarray(point, dtype=float)
    D = rng.uniform(-radius, radius, size=(n_samples, point.size))
    base = objective(point[None, :])[0]
    vals = objective(point[None, :] + D)
    return float(np.max(base - slack - vals))


def central_difference(fun, x, h=1e-6):
    """Gradient of a scalar function by central differences."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def masked_csv(path):
    """CSV text with wall-time cells blanked (``time`` columns and ``Time`` rows)."""
    import csv
    with open(path, newline="") as fh:
        header, *body = list(csv.reader(fh))
    timed = {i for i, h in enumerate(header) if "time" in h.lower()}
    out = [",".join(header)]
    for r in body:
        if r and r[0] == "Time":
            r = [r[0]] + ["*"] * (len(r) - 1)
        out.append(",".join("*" if i in timed else c for i, c in enumerate(r)))
    return "\n".join(out)


def write_toy_dataset(path, n=240, seed=0):
    """Two Gaussian blobs in four features with a 0/1 ``class`` column."""
    rng = np.random.default_rng(seed)
    y = (np.arange(n) % 3 == 0).astype(int)
    X = rng.standard_normal((n, 4)) + 1.5 * (2 * y[:, None] - 1) * np.array([1.0, -0.5, 0.8, 0.0])
    with open(path, "w") as fh:
        fh.write("variance,skewness,curtosis,entropy,class\n")
        for row, lab in zip(X, y):
            fh.write(",".join(f"{v:.5f}" for v in row) + f",{lab}\n")
    return path


# -- acceptance summary ----------------------------------------------------------

ACCEPTANCE = {}


def record_criterion(number, title, ok, detail):
    ACCEPTANCE[number] = (title, bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}")
