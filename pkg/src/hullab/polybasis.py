"""Monomial and Laurent-monomial bases on C^2.

Polynomial mode enumerates z^a w^b with a+b <= d in graded lexicographic
order; Laurent mode enumerates z^a w^b with a in [-d_neg, d_pos] and
b in [0, d_w], which is the finite-degree stand-in for functions
holomorphic on C* x C.  Columns carry a positive scale so that each
scaled monomial has sup-norm 1 on a reference sample; that keeps the
rows of the hull LPs comparable in magnitude.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

POLE_TOL = 1e-12


class PoleError(ValueError):
    """Laurent evaluation too close to z = 0."""


class ConditioningError(ValueError):
    """Rank-deficient fit attempted without regularization."""


def _polynomial_exponents(d):
    out = []
    for g in range(d + 1):
        for a in range(g, -1, -1):
            out.append((a, g - a))
    return out


def _laurent_exponents(d_neg, d_pos, d_w):
    out = []
    for a in range(-d_neg, d_pos + 1):
        for b in range(d_w + 1):
            out.append((a, b))
    return out


@dataclass(frozen=True)
class MonomialBasis:
    """An ordered monomial family z^a w^b with per-column scaling."""

    mode: str                 # "polynomial" | "laurent"
    degrees: tuple            # (d,) or (d_neg, d_pos, d_w)
    exponents: tuple          # ordered (a, b) pairs
    column_scale: np.ndarray  # positive, one entry per element

    @property
    def size(self):
        return len(self.exponents)

    @property
    def has_negative_powers(self):
        return any(a < 0 for a, _ in self.exponents)

    def descriptor(self):
        return {"mode": self.mode, "degrees": list(self.degrees)}

    def rescaled(self, new_scale):
        new_scale = np.asarray(new_scale, dtype=float)
        if new_scale.shape != (self.size,) or (new_scale <= 0).any():
            raise ValueError("column scale must be positive, one per element")
        return MonomialBasis(self.mode, self.degrees, self.exponents, new_scale)


def make_basis(mode, scaling_sample=None, **degrees):
    """Build a basis.

    make_basis("polynomial", d=4) or make_basis("laurent", d_neg=6,
    d_pos=6, d_w=4).  When a scaling sample is supplied, each column is
    scaled by its sup-modulus over the sample so every scaled column has
    sup-norm 1 there; otherwise the scale is 1.
    """
    mode = mode.lower()
    if mode == "polynomial":
        d = int(degrees.pop("d"))
        if d < 0 or degrees:
            raise ValueError(f"bad polynomial degrees: d={d}, extra={degrees}")
        exps = _polynomial_exponents(d)
        deg_tuple = (d,)
    elif mode == "laurent":
        d_neg = int(degrees.pop("d_neg"))
        d_pos = int(degrees.pop("d_pos"))
        d_w = int(degrees.pop("d_w"))
        if min(d_neg, d_pos, d_w) < 0 or degrees:
            raise ValueError(f"bad laurent degrees: extra={degrees}")
        exps = _laurent_exponents(d_neg, d_pos, d_w)
        deg_tuple = (d_neg, d_pos, d_w)
    else:
        raise ValueError(f"unknown basis mode {mode!r}")

    basis = MonomialBasis(
        mode=mode,
        degrees=deg_tuple,
        exponents=tuple(exps),
        column_scale=np.ones(len(exps)),
    )
    if scaling_sample is not None:
        mat = eval_basis_matrix(basis, scaling_sample.zs, scaling_sample.ws)
        scale = np.abs(mat).max(axis=0)
        scale[scale == 0.0] = 1.0
        basis = basis.rescaled(scale)
    return basis


def eval_basis_matrix(basis, zs, ws):
    """Scaled evaluation matrix, shape (n_points, basis.size)."""
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    if basis.has_negative_powers and (np.abs(zs) <= POLE_TOL).any():
        raise PoleError("Laurent basis evaluated too close to z = 0")
    a = np.array([e[0] for e in basis.exponents])
    b = np.array([e[1] for e in basis.exponents])
    with np.errstate(divide="ignore", invalid="ignore"):
        mat = zs[:, None] ** a[None, :] * ws[:, None] ** b[None, :]
    # 0^0 = 1 for the constant column even at z = 0 or w = 0
    mat = np.where(np.isfinite(mat), mat, 0.0 + 0.0j)
    zerow = ws == 0.0
    if zerow.any():
        mat[np.ix_(zerow, b == 0)] = (
            zs[zerow, None] ** a[None, b == 0]
        )
    return mat / basis.column_scale[None, :]


def eval_basis(basis, p):
    """Scaled basis vector at one point."""
    return eval_basis_matrix(basis, p.z, p.w)[0]


@dataclass(frozen=True)
class Poly:
    """Coefficient vector over a MonomialBasis."""

    basis: MonomialBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.basis.size,):
            raise ValueError("coefficient length must equal basis size")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, zs, ws):
        return eval_basis_matrix(self.basis, zs, ws) @ self.coeffs

    def to_json(self):
        doc = {
            "mode": self.basis.mode,
            "degrees": list(self.basis.degrees),
            "exponents": [list(e) for e in self.basis.exponents],
            "scale": [float(s) for s in self.basis.column_scale],
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }
        return json.dumps(doc, sort_keys=True)

    @staticmethod
    def from_json(text):
        doc = json.loads(text)
        basis = MonomialBasis(
            mode=doc["mode"],
            degrees=tuple(doc["degrees"]),
            exponents=tuple(tuple(e) for e in doc["exponents"]),
            column_scale=np.array(doc["scale"], dtype=float),
        )
        coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]])
        return Poly(basis, coeffs)


def poly_eval(q, p):
    """Value of the polynomial q at the point p."""
    return complex(q(p.z, p.w)[0])


def _coerce_points(points):
    """Accept ComplexPoint lists, (z, w) pairs, or bare planar complex
    values (w = 0)."""
    zs, ws = [], []
    for p in points:
        if hasattr(p, "z"):
            zs.append(p.z)
            ws.append(p.w)
        elif np.isscalar(p) or isinstance(p, complex):
            zs.append(complex(p))
            ws.append(0.0j)
        else:
            z, w = p
            zs.append(complex(z))
            ws.append(complex(w))
    return np.array(zs, dtype=complex), np.array(ws, dtype=complex)


def least_squares_fit(basis, points, values, ridge=0.0):
    """Least-squares fit of target values over the basis.

    Minimizes sum |P(p_i) - v_i|^2 + ridge * ||coeffs||^2.  Returns
    (Poly, rms_residual).  A rank-deficient system with ridge = 0 raises
    ConditioningError advising ridge > 0.
    """
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    zs, ws = _coerce_points(points)
    values = np.asarray(values, dtype=complex)
    if len(zs) != len(values):
        raise ValueError("points and values must have the same length")
    if len(zs) < basis.size:
        raise ValueError("need at least as many points as basis elements")
    mat = eval_basis_matrix(basis, zs, ws)
    if ridge > 0.0:
        aug = np.vstack([mat, np.sqrt(ridge) * np.eye(basis.size)])
        rhs = np.concatenate([values, np.zeros(basis.size)])
    else:
        aug, rhs = mat, values
    coeffs, _, rank, _ = np.linalg.lstsq(aug, rhs, rcond=None)
    if ridge == 0.0 and rank < basis.size:
        raise ConditioningError(
            f"rank {rank} < basis size {basis.size}; retry with ridge > 0"
        )
    fit = Poly(basis, coeffs)
    res = mat @ coeffs - values
    rms = float(np.sqrt(np.mean(np.abs(res) ** 2))) if len(res) else 0.0
    return fit, rms


def basis_condition_estimate(basis, sample, tol=1e-3, max_iter=2000):
    """Ratio of extreme singular values of the scaled evaluation matrix,
    estimated by power iteration on A^H A (largest) and inverse power
    iteration (smallest).  Returns inf for rank-deficient matrices."""
    if len(sample) == 0:
        raise ValueError("sample must be nonempty")
    mat = eval_basis_matrix(basis, sample.zs, sample.ws)
    return matrix_condition_estimate(mat, tol=tol, max_iter=max_iter)


def matrix_condition_estimate(mat, tol=1e-3, max_iter=2000):
    n = mat.shape[1]
    if mat.shape[0] < n:
        return float("inf")
    gram = mat.conj().T @ mat
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = gram @ v
        lam_new = float(np.linalg.norm(w))
        if lam_new == 0.0:
            return float("inf")
        v = w / lam_new
        if abs(lam_new - lam) <= tol * lam_new:
            lam = lam_new
            break
        lam = lam_new
    sig_max = np.sqrt(lam)

    try:
        chol = np.linalg.cholesky(
            gram + 0.0 * np.eye(n)
        )
    except np.linalg.LinAlgError:
        return float("inf")
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    mu = 0.0
    for _ in range(max_iter):
        w = np.linalg.solve(chol.conj().T, np.linalg.solve(chol, v))
        mu_new = float(np.linalg.norm(w))
        if mu_new == 0.0 or not np.isfinite(mu_new):
            return float("inf")
        v = w / mu_new
        if abs(mu_new - mu) <= tol * mu_new:
            mu = mu_new
            break
        mu = mu_new
    sig_min = 1.0 / np.sqrt(mu)
    if sig_min <= 0 or not np.isfinite(sig_min):
        return float("inf")
    return float(sig_max / sig_min)
