"""Hull membership by linear programming.

A point q is certified *inside* the degree-d hull of a sampled compact
set when a discrete probability measure on the sample reproduces the
moments of evaluation at q for every basis monomial (an LP feasibility
problem).  It is certified *outside* when an explicit polynomial P has
|P(q)| strictly larger than its sup over the sample (a Chebyshev-type
LP, discretized over a regular m-gon of phases and managed by cutting
planes).  Farkas duality makes the two certificates mutually exclusive
at a fixed degree, which the verifiers exploit.

Polynomial mode probes the ordinary polynomial hull; Laurent mode allows
negative powers of z and probes the hull relative to functions
holomorphic on C* x C.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import SetLabel, sample_set, validate_geometry
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LPProblem,
    solve_lp,
)
from .polybasis import MonomialBasis, Poly, eval_basis_matrix, make_basis

INNER_TOL = 1e-8
VIOLATION_TOL = 1e-9
MIN_MARGIN = 1e-6
MGON_DEFAULT = 16
CUT_START = 200
CUT_BATCH = 50
CUT_CAP = 10000
POLY_INNER_DEGREE = 4
POLY_SCAN_DEGREE = 6
LAURENT_DEFAULT = (6, 6, 4)


class SampleMismatchError(ValueError):
    """Certificate does not refer to the supplied sample."""


class RankDeficientSampleError(RuntimeError):
    """The sample does not pin down the basis; separation is ill-posed."""


def _basis_for(mode, degree, scaling_sample):
    if mode == "polynomial":
        return make_basis("polynomial", scaling_sample=scaling_sample, d=degree)
    if mode == "laurent":
        d_neg, d_pos, d_w = degree
        return make_basis(
            "laurent",
            scaling_sample=scaling_sample,
            d_neg=d_neg,
            d_pos=d_pos,
            d_w=d_w,
        )
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Inner certificates: discrete representing measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InnerCertificate:
    q: tuple                      # (z, w)
    basis: MonomialBasis
    sample_id: tuple
    weights: tuple                # sparse ((index, value), ...), values >= 0
    residual: float               # max modulus moment mismatch
    iterations: int
    tol: float

    def weight_vector(self, n):
        mu = np.zeros(n)
        for idx, val in self.weights:
            mu[idx] = val
        return mu

    def to_json(self):
        doc = {
            "point": [self.q[0].real, self.q[0].imag, self.q[1].real, self.q[1].imag],
            "basis": self.basis.descriptor(),
            "sample_h": self.sample_id[1],
            "sample_label": self.sample_id[0],
            "weights": [[int(i), float(v)] for i, v in self.weights],
            "residual": self.residual,
            "degree": list(self.basis.degrees),
        }
        return json.dumps(doc, sort_keys=True)


@dataclass(frozen=True)
class InnerInfeasible:
    q: tuple
    basis: MonomialBasis
    sample_id: tuple
    farkas: np.ndarray            # dual vector over the moment rows
    infeasibility: float
    iterations: int


def inner_certificate(q, sample, basis, tol=INNER_TOL):
    """Find a probability measure on the sample matching the moments of
    evaluation at q over every basis element.

    Returns an InnerCertificate on success (phase-1 optimum <= tol) or an
    InnerInfeasible carrying the Farkas dual, whose head encodes a
    candidate separating functional."""
    if len(sample) == 0:
        raise ValueError("empty sample")
    if basis.has_negative_powers and abs(q.z) <= 1e-12:
        raise ValueError("Laurent mode requires q.z != 0")

    # point mass shortcut: q literally in the sample
    hit = np.nonzero((sample.zs == q.z) & (sample.ws == q.w))[0]
    if hit.size:
        return InnerCertificate(
            q=(complex(q.z), complex(q.w)),
            basis=basis,
            sample_id=sample.identity(),
            weights=((int(hit[0]), 1.0),),
            residual=0.0,
            iterations=0,
            tol=tol,
        )

    phi = eval_basis_matrix(basis, sample.zs, sample.ws)     # (N, B)
    phi_q = eval_basis_matrix(basis, [q.z], [q.w])[0]
    n = len(sample)
    a_eq = np.vstack([
        np.ones((1, n)),
        phi.real.T,
        phi.imag.T,
    ])
    b_eq = np.concatenate([[1.0], phi_q.real, phi_q.imag])
    sol = solve_lp(LPProblem(c=np.zeros(n), a_eq=a_eq, b_eq=b_eq), feas_tol=tol)

    if sol.status != OPTIMAL:
        return InnerInfeasible(
            q=(complex(q.z), complex(q.w)),
            basis=basis,
            sample_id=sample.identity(),
            farkas=sol.dual_eq,
            infeasibility=sol.infeasibility,
            iterations=sol.iterations,
        )

    mu = np.maximum(sol.x, 0.0)
    support = np.nonzero(mu > 0.0)[0]
    weights = tuple((int(i), float(mu[i])) for i in support)
    residual = float(np.abs(mu @ phi - phi_q).max())
    return InnerCertificate(
        q=(complex(q.z), complex(q.w)),
        basis=basis,
        sample_id=sample.identity(),
        weights=weights,
        residual=residual,
        iterations=sol.iterations,
        tol=tol,
    )


@dataclass(frozen=True)
class InnerReport:
    residual: float
    weight_sum_error: float
    weight_negativity: float
    trials: int
    violations: int
    max_slack_violation: float

    @property
    def clean(self):
        return (
            self.violations == 0
            and self.weight_negativity <= 0.0
            and self.weight_sum_error <= 1e-9
        )


def verify_inner(cert, sample, trials=500, seed=0):
    """Re-derive the certificate's guarantee from scratch: recompute the
    moment residual and stress it with random unit-norm polynomials."""
    if cert.sample_id != sample.identity():
        raise SampleMismatchError("certificate refers to a different sample")
    basis = cert.basis
    phi = eval_basis_matrix(basis, sample.zs, sample.ws)
    phi_q = eval_basis_matrix(basis, [cert.q[0]], [cert.q[1]])[0]
    mu = cert.weight_vector(len(sample))
    residual = float(np.abs(mu @ phi - phi_q).max())
    wsum_err = abs(float(mu.sum()) - 1.0)
    wneg = max(0.0, -min(v for _, v in cert.weights)) if cert.weights else 0.0

    rng = np.random.default_rng(seed)
    b = basis.size
    coeffs = rng.standard_normal((trials, b)) + 1j * rng.standard_normal((trials, b))
    coeffs /= np.linalg.norm(coeffs, axis=1)[:, None]
    vals_sample = np.abs(phi @ coeffs.T)          # (N, trials)
    vals_q = np.abs(coeffs @ phi_q)               # (trials,)
    bound = vals_sample.max(axis=0) + residual * b
    slack = vals_q - bound
    return InnerReport(
        residual=residual,
        weight_sum_error=wsum_err,
        weight_negativity=wneg,
        trials=trials,
        violations=int((slack > 0).sum()),
        max_slack_violation=float(slack.max(initial=-np.inf)),
    )


# ---------------------------------------------------------------------------
# Outer certificates: separating polynomials via cutting planes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OuterCertificate:
    q: tuple
    poly: Poly
    sup_on_sample: float
    value_at_q: complex
    margin: float
    refined_check: bool
    sample_id: tuple
    m_gon: int
    t_star: float
    rounds: int
    active_rows: int

    def to_json(self):
        doc = {
            "point": [self.q[0].real, self.q[0].imag, self.q[1].real, self.q[1].imag],
            "poly": json.loads(self.poly.to_json()),
            "sup": self.sup_on_sample,
            "value": [self.value_at_q.real, self.value_at_q.imag],
            "margin": self.margin,
            "refined": self.refined_check,
        }
        return json.dumps(doc, sort_keys=True)


@dataclass(frozen=True)
class OuterNotFound:
    q: tuple
    t_star: float | None
    rounds: int
    reason: str


def _phase_scores(vals, omegas):
    """Re(omega_j * vals_i) as an (N, m) array."""
    return (vals[:, None] * omegas[None, :]).real


def outer_certificate(
    q,
    sample,
    basis,
    m_gon=MGON_DEFAULT,
    min_margin=MIN_MARGIN,
    viol_tol=VIOLATION_TOL,
):
    """Search for P with |P(q)| > sup over the sample, via the Chebyshev
    LP  min t : Re(omega_j P(p_i)) <= t, Re P(q) = 1, Im P(q) = 0,
    discretized on an m-gon of phases and managed by cutting planes
    (start 200 random constraints, add the 50 most violated per round,
    stop when the full set is satisfied to 1e-9, cap 10000 rows).

    Each restricted master is solved through its measure-side dual,
    which keeps the tableau small; the polynomial is recovered from the
    dual vector and re-verified directly."""
    if m_gon < 8:
        raise ValueError("m_gon must be at least 8")
    if ((sample.zs == q.z) & (sample.ws == q.w)).any():
        raise ValueError("q must not be a sample point")
    if basis.has_negative_powers and abs(q.z) <= 1e-12:
        raise ValueError("Laurent mode requires q.z != 0")

    phi = eval_basis_matrix(basis, sample.zs, sample.ws)
    phi_q = eval_basis_matrix(basis, [q.z], [q.w])[0]
    n, b = phi.shape
    omegas = np.exp(2j * math.pi * np.arange(m_gon) / m_gon)
    n_pairs = n * m_gon

    r0 = np.concatenate([phi_q.real, -phi_q.imag])
    s0 = np.concatenate([phi_q.imag, phi_q.real])

    rng = np.random.default_rng(0)
    start = min(CUT_START, n_pairs)
    active = list(rng.choice(n_pairs, size=start, replace=False))
    active_set = set(active)

    def pair_rows(ids):
        ids = np.asarray(ids)
        pts = ids // m_gon
        phs = ids % m_gon
        om_phi = omegas[phs, None] * phi[pts]     # (k, B)
        return np.hstack([om_phi.real, -om_phi.imag])

    def add_top(scores, count):
        order = np.argsort(scores.ravel())[::-1]
        added = 0
        for pid in order:
            if scores.ravel()[pid] <= viol_tol:
                break
            pid = int(pid)
            if pid not in active_set:
                active_set.add(pid)
                active.append(pid)
                added += 1
                if added >= count:
                    break
        return added

    coeffs = None
    t_star = None
    rounds = 0
    while True:
        rounds += 1
        rows = pair_rows(active)                  # (k, 2B)
        k = rows.shape[0]
        a_eq = np.zeros((2 * b + 1, k + 2))
        a_eq[: 2 * b, :k] = rows.T
        a_eq[: 2 * b, k] = -r0
        a_eq[: 2 * b, k + 1] = -s0
        a_eq[2 * b, :k] = 1.0
        b_eq = np.zeros(2 * b + 1)
        b_eq[2 * b] = 1.0
        c = np.zeros(k + 2)
        c[k] = -1.0
        lo = np.zeros(k + 2)
        lo[k] = -np.inf
        lo[k + 1] = -np.inf
        sol = solve_lp(LPProblem(c=c, a_eq=a_eq, b_eq=b_eq, lo=lo))

        if sol.status == INFEASIBLE:
            # restricted Chebyshev problem is unbounded: the Farkas head is
            # a recession direction; cut it off with its own worst rows
            d = sol.dual_eq[: 2 * b]
            cd = d[:b] + 1j * d[b:]
            scores = _phase_scores(phi @ cd, omegas)
            if scores.max() <= viol_tol:
                scores = _phase_scores(phi @ (-cd), omegas)
                if scores.max() <= viol_tol:
                    raise RankDeficientSampleError(
                        "sample admits a basis direction with no positive phase score"
                    )
            added = add_top(scores, CUT_BATCH)
            if added == 0 or len(active) > CUT_CAP:
                return OuterNotFound(
                    q=(complex(q.z), complex(q.w)),
                    t_star=None,
                    rounds=rounds,
                    reason="unbounded restricted problem could not be cut",
                )
            continue
        if sol.status == UNBOUNDED:
            raise RankDeficientSampleError("measure-side master unbounded")

        y = sol.dual_eq
        x = y[: 2 * b]
        t_star = -float(y[2 * b])
        coeffs = x[:b] + 1j * x[b:]
        vals = phi @ coeffs
        scores = _phase_scores(vals, omegas) - t_star
        max_viol = float(scores.max())
        if max_viol < viol_tol:
            break
        if len(active) >= CUT_CAP:
            break
        added = add_top(scores, CUT_BATCH)
        if added == 0:
            break

    cos_m = math.cos(math.pi / m_gon)
    if coeffs is None or 1.0 - t_star < min_margin * cos_m:
        return OuterNotFound(
            q=(complex(q.z), complex(q.w)),
            t_star=t_star,
            rounds=rounds,
            reason=f"t_star={t_star} leaves no margin at m_gon={m_gon}",
        )

    sup = float(np.abs(phi @ coeffs).max())
    if sup <= 1e-12:
        return OuterNotFound(
            q=(complex(q.z), complex(q.w)),
            t_star=t_star,
            rounds=rounds,
            reason="candidate polynomial vanishes on the sample",
        )
    poly = Poly(basis, coeffs / sup)
    value = complex((phi_q @ poly.coeffs))
    margin = abs(value) - 1.0
    if margin <= 0.0:
        return OuterNotFound(
            q=(complex(q.z), complex(q.w)),
            t_star=t_star,
            rounds=rounds,
            reason=f"margin {margin} not positive after normalization",
        )
    return OuterCertificate(
        q=(complex(q.z), complex(q.w)),
        poly=poly,
        sup_on_sample=1.0,
        value_at_q=value,
        margin=float(margin),
        refined_check=False,
        sample_id=sample.identity(),
        m_gon=m_gon,
        t_star=t_star,
        rounds=rounds,
        active_rows=len(active),
    )


@dataclass(frozen=True)
class OuterReport:
    margin_coarse: float
    margin_refined: float
    retention: float
    refined_check: bool


def verify_outer(cert, refined_sample):
    """Re-evaluate the sup of the separating polynomial on a finer sample
    and report how much of the margin survives (>= 50% flips the
    certificate's refined flag)."""
    if refined_sample.h > cert.sample_id[1] / 4 + 1e-15:
        raise ValueError("refined sample must have h <= certificate h / 4")
    sup_ref = float(
        np.abs(cert.poly(refined_sample.zs, refined_sample.ws)).max()
    )
    margin_ref = abs(cert.value_at_q) - sup_ref
    retention = margin_ref / cert.margin if cert.margin > 0 else -np.inf
    ok = retention >= 0.5
    return replace(cert, refined_check=ok), OuterReport(
        margin_coarse=cert.margin,
        margin_refined=float(margin_ref),
        retention=float(retention),
        refined_check=ok,
    )


# ---------------------------------------------------------------------------
# Verdicts, ladders, scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HullVerdict:
    kind: str                     # "inside" | "outside" | "ambiguous"
    degree: object = None         # int or laurent triple
    inner: InnerCertificate | None = None
    outer: OuterCertificate | None = None
    tried: tuple = ()

    @property
    def symbol(self):
        return {"inside": "In", "outside": "Out", "ambiguous": "Ambiguous"}[self.kind]


def classify_point(q, sample_y, mode, degree_ladder, m_gon=MGON_DEFAULT,
                   min_margin=MIN_MARGIN, inner_tol=INNER_TOL):
    """Climb the degree ladder: a separation anywhere is decisive
    (Outside embeds upward); inner feasibility is necessary but not
    sufficient, so it is recorded per rung and reported at the top
    certified degree.  Rungs whose basis has no nonconstant element
    cannot certify anything and are skipped."""
    if mode == "laurent" and abs(q.z) <= 1e-12:
        # off the manifold C* x C: 1/z already exceeds any sup
        return HullVerdict(kind="outside", degree=degree_ladder[0] if degree_ladder else None,
                           tried=(("pole", "q.z = 0"),))
    tried = []
    best_inner = None
    best_degree = None
    in_sample = ((sample_y.zs == q.z) & (sample_y.ws == q.w)).any()
    for d in degree_ladder:
        basis = _basis_for(mode, d, sample_y)
        if basis.size <= 1:
            tried.append((d, "skipped: constants only"))
            continue
        if not in_sample:
            out = outer_certificate(
                q, sample_y, basis, m_gon=m_gon, min_margin=min_margin
            )
            if isinstance(out, OuterCertificate):
                tried.append((d, f"outer margin {out.margin:.3e}"))
                return HullVerdict(
                    kind="outside", degree=d, outer=out, tried=tuple(tried)
                )
        inner = inner_certificate(q, sample_y, basis, tol=inner_tol)
        if isinstance(inner, InnerCertificate):
            best_inner = inner
            best_degree = d
            tried.append((d, f"inner residual {inner.residual:.3e}"))
        else:
            tried.append((d, f"inner infeasible {inner.infeasibility:.3e}, outer not found"))
    if best_inner is not None:
        return HullVerdict(
            kind="inside", degree=best_degree, inner=best_inner, tried=tuple(tried)
        )
    return HullVerdict(kind="ambiguous", degree=degree_ladder[-1] if degree_ladder else None,
                       tried=tuple(tried))


@dataclass(frozen=True)
class ScanGrid:
    kind: str          # "w_fixed" | "z_fixed"
    fixed: complex
    window: tuple      # (x0, x1, y0, y1)
    n: int

    def nodes(self):
        x0, x1, y0, y1 = self.window
        xs = np.linspace(x0, x1, self.n)
        ys = np.linspace(y0, y1, self.n)
        return xs, ys


def hull_scan(grid, sample_y, mode, degree, m_gon=MGON_DEFAULT,
              min_margin=MIN_MARGIN, threads=1):
    """classify_point on every grid node at a single degree; returns an
    (n, n) array of verdict symbols ("In"/"Out"/"Ambiguous")."""
    if grid.n > 256:
        raise ValueError("scan grids are capped at 256 x 256")
    from .geometry import ComplexPoint

    xs, ys = grid.nodes()
    verdicts = np.empty((grid.n, grid.n), dtype=object)

    def node(i, j):
        v = complex(xs[j], ys[i])
        if grid.kind == "w_fixed":
            p = (v, grid.fixed)
        else:
            p = (grid.fixed, v)
        if mode == "laurent" and abs(p[0]) <= 1e-12:
            return "Out"
        q = ComplexPoint(p[0], p[1])
        verdict = classify_point(
            q, sample_y, mode, [degree], m_gon=m_gon, min_margin=min_margin
        )
        return verdict.symbol

    jobs = [(i, j) for i in range(grid.n) for j in range(grid.n)]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(lambda ij: node(*ij), jobs))
    else:
        results = [node(i, j) for i, j in jobs]
    for (i, j), r in zip(jobs, results):
        verdicts[i, j] = r
    return verdicts


def scan_to_csv(grid, verdicts, path):
    xs, ys = grid.nodes()
    with open(path, "w") as fh:
        fh.write("x,y,verdict\n")
        for i in range(grid.n):
            for j in range(grid.n):
                fh.write(f"{xs[j]:.12g},{ys[i]:.12g},{verdicts[i, j]}\n")


# ---------------------------------------------------------------------------
# The headline suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteParams:
    h: float = 0.02
    poly_inner_degree: int = POLY_INNER_DEGREE
    poly_outer_degree: int = POLY_SCAN_DEGREE
    poly_ladder: tuple = (2, 4, 6)
    laurent_ladder: tuple = ((2, 2, 1), (4, 4, 2), (6, 6, 4))
    probe_count: int = 20
    vt_count: int = 10
    probe_offset: float = 0.35
    min_probe_margin: float = 1e-3
    contrast_point: tuple = (0.5 + 0.0j, 0.25 + 0.0j)
    m_gon: int = MGON_DEFAULT
    seed: int = 2024


@dataclass
class SuiteResult:
    groups: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(g["passed"] for g in self.groups.values())

    def lines(self):
        out = []
        for name, g in self.groups.items():
            out.append(f"[{'PASS' if g['passed'] else 'FAIL'}] {name}: {g['detail']}")
        out.append(f"suite: {'PASS' if self.passed else 'FAIL'}")
        return out


def off_surface_probes(sample, count, offset, seed):
    """Deterministic near-but-off probes: strided sample points nudged off
    the defining real-band conditions by an imaginary w-shift."""
    from .geometry import ComplexPoint

    rng = np.random.default_rng(seed)
    idx = np.linspace(0, len(sample) - 1, count).astype(int)
    signs = np.where(rng.random(count) < 0.5, -1.0, 1.0)
    return [
        ComplexPoint(complex(sample.zs[i]), complex(sample.ws[i] - 1j * s * offset))
        for i, s in zip(idx, signs)
    ]


def stolzenberg_suite(geom, params=SuiteParams()):
    """Bundle of the headline hull computations on one geometry:

    1. an inner certificate for the origin against Y;
    2. inner certificates for points of Vt1 against X1 and Vt2 against X2
       (the removed bands sit inside the opposite hull);
    3. the contrast pair at one point over the analytic disk w = z^2:
       inside in polynomial mode, outside in Laurent mode;
    4. polynomial outer certificates for near-but-off probes of Y1, Y2,
       Y+ and Y- against their own samples (separate polynomial
       convexity);
    5. hull-merge consistency: the origin is inner-certified against
       both Y and X1 u X2 at the same degree.
    """
    from .geometry import ComplexPoint

    report = validate_geometry(geom)
    if not report.overall:
        raise ValueError(
            "geometry failed validation: "
            + "; ".join(name for name, ok, _ in report.checks if not ok)
        )
    p = params
    res = SuiteResult()

    samples = {
        lab: sample_set(geom, lab, p.h)
        for lab in (
            SetLabel.Y,
            SetLabel.Y1,
            SetLabel.Y2,
            SetLabel.Yplus,
            SetLabel.Yminus,
            SetLabel.X1,
            SetLabel.X2,
            SetLabel.X1uX2,
            SetLabel.Vt1,
            SetLabel.Vt2,
        )
    }
    sy = samples[SetLabel.Y]
    origin = ComplexPoint(0.0, 0.0)

    # (1) origin in the hull of Y
    basis_y = _basis_for("polynomial", p.poly_inner_degree, sy)
    cert0 = inner_certificate(origin, sy, basis_y)
    ok1 = isinstance(cert0, InnerCertificate) and cert0.residual < INNER_TOL
    if ok1:
        rep = verify_inner(cert0, sy, trials=500, seed=7)
        ok1 = rep.violations == 0
        detail1 = f"residual={cert0.residual:.2e} verify_violations={rep.violations}"
    else:
        detail1 = "infeasible"
    res.groups["origin_in_hull"] = {
        "passed": ok1, "detail": detail1, "certificate": cert0,
    }

    # (2) removed bands inside the opposite hulls
    def band_group(vt_label, x_label):
        vt = samples[vt_label]
        sx = samples[x_label]
        basis = _basis_for("polynomial", p.poly_inner_degree, sx)
        idx = np.linspace(0, len(vt) - 1, p.vt_count).astype(int)
        bad = []
        for i in idx:
            pt = vt.point(int(i))
            cert = inner_certificate(pt, sx, basis)
            if not (isinstance(cert, InnerCertificate) and cert.residual < INNER_TOL):
                bad.append(pt)
        return bad

    bad1 = band_group(SetLabel.Vt1, SetLabel.X1)
    bad2 = band_group(SetLabel.Vt2, SetLabel.X2)
    ok2 = not bad1 and not bad2
    res.groups["bands_in_opposite_hulls"] = {
        "passed": ok2,
        "detail": f"failed_points={len(bad1) + len(bad2)} of {2 * p.vt_count}",
    }

    # (3) the polynomial/Laurent contrast
    qc = ComplexPoint(*p.contrast_point)
    v_poly = classify_point(qc, sy, "polynomial", list(p.poly_ladder), m_gon=p.m_gon)
    v_lau = classify_point(qc, sy, "laurent", list(p.laurent_ladder), m_gon=p.m_gon)
    ok3 = v_poly.kind == "inside" and v_lau.kind == "outside"
    res.groups["contrast_pair"] = {
        "passed": ok3,
        "detail": (
            f"poly={v_poly.symbol}({v_poly.degree}) "
            f"laurent={v_lau.symbol}({v_lau.degree})"
        ),
        "poly_verdict": v_poly,
        "laurent_verdict": v_lau,
    }

    # (4) separate polynomial convexity of Y1, Y2, Y+, Y-
    detail4 = []
    ok4 = True
    outer_certs = {}
    for lab in (SetLabel.Y1, SetLabel.Y2, SetLabel.Yplus, SetLabel.Yminus):
        s = samples[lab]
        basis = _basis_for("polynomial", p.poly_outer_degree, s)
        probes = off_surface_probes(s, p.probe_count, p.probe_offset, p.seed)
        margins = []
        for probe in probes:
            out = outer_certificate(probe, s, basis, m_gon=p.m_gon,
                                    min_margin=p.min_probe_margin)
            margins.append(out.margin if isinstance(out, OuterCertificate) else -1.0)
        margins = np.array(margins)
        good = (margins >= p.min_probe_margin).all()
        ok4 = ok4 and good
        outer_certs[lab.value] = margins
        detail4.append(f"{lab.value}:min_margin={margins.min():.2e}")
    res.groups["separate_convexity"] = {
        "passed": ok4, "detail": " ".join(detail4), "margins": outer_certs,
    }

    # (5) hull-merge: origin against Y and against X1 u X2, equal degree
    sxu = samples[SetLabel.X1uX2]
    basis_xu = _basis_for("polynomial", p.poly_inner_degree, sxu)
    cert_m = inner_certificate(origin, sxu, basis_xu)
    ok5 = (
        isinstance(cert0, InnerCertificate)
        and isinstance(cert_m, InnerCertificate)
        and cert0.residual < INNER_TOL
        and cert_m.residual < INNER_TOL
    )
    res.groups["hull_merge"] = {
        "passed": ok5,
        "detail": (
            f"residual_Y={getattr(cert0, 'residual', np.nan):.2e} "
            f"residual_X1uX2={getattr(cert_m, 'residual', np.nan):.2e}"
        ),
    }

    res.groups["_samples"] = {"passed": True, "detail": f"h={p.h}", "samples": samples}
    return res
