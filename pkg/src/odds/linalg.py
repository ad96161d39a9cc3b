"""Dense linear-algebra primitives, seeded sampling, and CSV matrix I/O.

Matrices are plain ``numpy.ndarray`` in row-major (C) order with finite
entries; vectors are 1-D arrays.  The CSV interchange format is one matrix
row per line, comma-separated decimal values, no header.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative routine failed to converge within its iteration cap."""


def make_rng(seed, *stream) -> np.random.Generator:
    """Deterministic generator for a seed plus optional sub-stream indices."""
    return np.random.default_rng([int(seed), *[int(s) for s in stream]])


def check_matrix(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return np.ascontiguousarray(m)


def check_vector(v: np.ndarray, name: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def sample_gaussian_matrix(rows: int, cols: int, sigma: float, seed) -> np.ndarray:
    """i.i.d. N(0, sigma^2) matrix, a pure function of (rows, cols, sigma, seed)."""
    if rows < 1 or cols < 1:
        raise ValueError("dimensions must be positive")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    return sigma * rng.standard_normal((rows, cols))


def normalize_columns(m: np.ndarray) -> np.ndarray:
    """Scale each nonzero column to unit Euclidean norm; zero columns pass through."""
    m = check_matrix(m)
    # Factor out each column's peak magnitude first so squaring inside the
    # norm cannot underflow or overflow for extreme-scale columns.
    peak = np.max(np.abs(m), axis=0)
    peak_scale = np.where(peak > 0.0, peak, 1.0)
    scaled = m / peak_scale
    norms = np.linalg.norm(scaled, axis=0)
    scale = np.where(norms > 0.0, norms, 1.0)
    return scaled / scale


def spectral_norm(m: np.ndarray, tol: float = 1e-12, max_iters: int = 10_000) -> float:
    """Largest singular value via power iteration on the smaller Gram matrix."""
    m = check_matrix(m)
    if tol <= 0:
        raise ValueError("tol must be positive")
    gram = m @ m.T if m.shape[0] <= m.shape[1] else m.T @ m
    rng = make_rng(0x5EED)
    v = rng.standard_normal(gram.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iters):
        w = gram @ v
        lam_new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            return float(np.sqrt(max(lam_new, 0.0)))
        lam = lam_new
    raise ConvergenceError("power iteration did not converge")


def spectral_norm_upper(m: np.ndarray, iters: int = 800) -> float:
    """Cheap upper-bound-quality estimate of the largest singular value.

    Power iteration's Rayleigh quotient is a lower bound, so a small
    safety margin is applied and the result is capped by the guaranteed
    bounds sqrt(||M||_1 ||M||_inf) and ||M||_F.  Meant for step sizes,
    where a few percent of slack is irrelevant but a convergence failure
    on clustered spectra (e.g. near-identity matrices) is not.
    """
    m = check_matrix(m)
    gram = m @ m.T if m.shape[0] <= m.shape[1] else m.T @ m
    rng = make_rng(0x5EED)
    v = rng.standard_normal(gram.shape[0])
    nv = np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        v /= nv if nv > 0 else 1.0
        w = gram @ v
        lam_new = float(v @ w)
        nv = np.linalg.norm(w)
        if nv == 0.0:
            return 0.0
        if abs(lam_new - lam) <= 1e-13 * max(abs(lam_new), 1e-300):
            lam = lam_new
            break
        lam, v = lam_new, w
    est = 1.05 * float(np.sqrt(max(lam, 0.0)))
    guaranteed = min(
        float(np.sqrt(np.max(np.sum(np.abs(m), axis=0)) * np.max(np.sum(np.abs(m), axis=1)))),
        float(np.linalg.norm(m, "fro")),
    )
    return min(est, guaranteed) if est > 0 else guaranteed


def entrywise_p_norm(m: np.ndarray, p: float) -> float:
    """Entrywise p-norm (sum |m_ij|^p)^(1/p); p = inf gives the max-abs entry."""
    m = check_matrix(m)
    if np.isinf(p):
        return float(np.max(np.abs(m)))
    if p < 1:
        raise ValueError("p must be >= 1")
    a = np.abs(m)
    peak = a.max()
    if peak == 0.0:
        return 0.0
    # factor out the peak to avoid overflow for large p
    return float(peak * np.sum((a / peak) ** p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# CSV interchange


def _format_row(row: np.ndarray) -> str:
    return ",".join(repr(float(v)) for v in row)


def atomic_write_text(path: str, text: str) -> None:
    """Write-then-rename so interrupted runs never leave truncated files."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-odds-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_matrix(path: str, m: np.ndarray) -> None:
    m = check_matrix(m)
    atomic_write_text(path, "\n".join(_format_row(r) for r in m) + "\n")


def save_vector(path: str, v: np.ndarray) -> None:
    v = check_vector(v)
    atomic_write_text(path, "\n".join(repr(float(x)) for x in v) + "\n")


def load_matrix(path: str) -> np.ndarray:
    rows = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise ValueError(f"{path} is empty")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path} has ragged rows")
    return check_matrix(np.array(rows, dtype=float), path)


def load_vector(path: str) -> np.ndarray:
    m = load_matrix(path)
    if 1 not in m.shape:
        raise ValueError(f"{path} is not a vector")
    return m.ravel()
