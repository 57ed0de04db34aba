"""Gaussian-CDF smoothing of the Turán extremal problem.

A system of ``M`` real vectors ``beta_i`` in R^n stands in for a triple
family (a canonical vector is the 0/1 indicator of one triple).  For every
vertex triple ``x``::

    z[i, x] = (<1_x, beta_i> - 3) / sigma
    s[x]    = sum_i Phi(z[i, x])                 # soft count
    e[x]    = Phi((s[x] - 1/2) / sigma)          # soft membership

    N = sum_x e[x]
    R = C(n, k) - sum_K sum_{x in K} Phi((e[x] - (1 - eps)) / sigma)

where ``K`` ranges over the k-subsets of vertices.  Each triple lies in
``C(n-3, k-3)`` k-subsets, so the double sum in ``R`` collapses to that
multiplicity times a single sum over triples.

Variant ``"b"`` of ``R`` keeps the other bracketing of the nested terms:
``Phi((Phi(s[x] - 1/2) / sigma - (1 - eps)) / sigma)``.

All reductions run over fixed-size triple blocks and finish with
``math.fsum``, so results are bit-identical for any thread count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import ndtr

from ._parallel import ordered_map
from .errors import DegenerateGradientError, InputError
from .hypergraph import TripleFamily, all_triples, rank_triple

SATURATION = 40.0
BLOCK = 2048
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def gauss_cdf(x):
    """Standard normal CDF, saturating to exactly 0 or 1 beyond ``|x| > 40``."""
    x = np.asarray(x, dtype=float)
    out = np.clip(ndtr(x), 0.0, 1.0)
    out = np.where(x > SATURATION, 1.0, np.where(x < -SATURATION, 0.0, out))
    return out if out.ndim else float(out)


def gauss_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) * _INV_SQRT_2PI
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SmoothingParams:
    sigma: float
    epsilon: float = 0.25
    variant: str = "a"

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise InputError(f"sigma must be positive and finite, got {self.sigma}")
        if not 0 < self.epsilon < 1:
            raise InputError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.variant not in ("a", "b"):
            raise InputError(f"unknown formula variant {self.variant!r}")

    @property
    def regime(self) -> str:
        """Where an edge's soft membership (1/2 as sigma -> 0) lands in R's threshold."""
        if self.epsilon < 0.5:
            return "eps<1/2: edge terms of R saturate to 0 as sigma->0"
        if self.epsilon > 0.5:
            return "eps>1/2: edge terms of R saturate to 1 as sigma->0"
        return "eps=1/2: edge terms of R sit at Phi(0)=1/2"


@dataclass(frozen=True, eq=False)
class RelaxedEdgeVector:
    coords: np.ndarray
    support: tuple[int, int, int] | None = None

    @classmethod
    def canonical(cls, triple, n: int) -> "RelaxedEdgeVector":
        coords = np.zeros(n)
        t = tuple(sorted(int(v) for v in triple))
        coords[list(t)] = 1.0
        return cls(coords, t)

    @property
    def is_canonical(self) -> bool:
        c = self.coords
        return bool(np.count_nonzero(c == 1.0) == 3 and np.count_nonzero(c) == 3)

    def support_sum(self) -> float:
        if self.support is None:
            raise InputError("vector has no designated support")
        return float(self.coords[list(self.support)].sum())

    def satisfies_support_sum(self, tol: float = 1e-12) -> bool:
        return abs(self.support_sum() - 3.0) <= tol


class EdgeSystem:
    """``M`` relaxed edge vectors over ``n`` vertices, for the (3,k) problem.

    ``k > n`` is allowed; there are then no k-subsets and R vanishes.
    """

    def __init__(self, n: int, k: int, betas, supports=None, *, constrained: bool = False):
        self.n, self.k = int(n), int(k)
        if self.n < 3 or self.k < 4:
            raise InputError(f"need n >= 3 and k >= 4, got n={n}, k={k}")
        betas = np.array(betas, dtype=float).reshape(-1, self.n)
        if not np.all(np.isfinite(betas)):
            raise InputError("betas must be finite")
        self.betas = betas
        self.betas.setflags(write=False)
        self.supports = None if supports is None else [tuple(s) for s in supports]
        self.constrained = constrained
        if constrained:
            if self.supports is None or len(self.supports) != self.M:
                raise InputError("constrained mode needs one support triple per vector")
            for v in self.vectors():
                if not v.satisfies_support_sum(1e-9):
                    raise InputError(f"support {v.support} sums to {v.support_sum()}, expected 3")

    @classmethod
    def from_family(cls, f: TripleFamily, k: int) -> "EdgeSystem":
        """Canonical system: one indicator vector per edge, in rank order."""
        tri = f.triple_array()
        betas = np.zeros((len(tri), f.n))
        rows = np.arange(len(tri))
        for col in range(3):
            betas[rows, tri[:, col]] = 1.0
        return cls(f.n, k, betas, [tuple(int(v) for v in t) for t in tri])

    @property
    def M(self) -> int:
        return self.betas.shape[0]

    def vectors(self) -> list[RelaxedEdgeVector]:
        sup = self.supports or [None] * self.M
        return [RelaxedEdgeVector(b, s) for b, s in zip(self.betas, sup)]

    def with_betas(self, betas) -> "EdgeSystem":
        return EdgeSystem(self.n, self.k, betas, self.supports)

    def permuted(self, perm) -> "EdgeSystem":
        """Relabel vertices by ``v -> perm[v]``."""
        perm = np.asarray(perm)
        betas = np.empty_like(self.betas)
        betas[:, perm] = self.betas
        sup = None
        if self.supports is not None:
            sup = [tuple(sorted(int(perm[v]) for v in s)) for s in self.supports]
        return EdgeSystem(self.n, self.k, betas, sup)


def random_system(n: int, k: int, M: int, rng: np.random.Generator,
                  low: float = 0.3, high: float = 1.3) -> EdgeSystem:
    """Relaxed system with i.i.d. uniform coordinates."""
    return EdgeSystem(n, k, rng.uniform(low, high, size=(M, n)))


# -- forward pass ------------------------------------------------------------

def _blocks(total: int) -> list[slice]:
    return [slice(lo, min(lo + BLOCK, total)) for lo in range(0, total, BLOCK)] or [slice(0, 0)]


def _soft_counts(betas: np.ndarray, tri: np.ndarray, sigma: float) -> np.ndarray:
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    s = np.zeros(len(tri))
    for beta in betas:
        s += gauss_cdf((beta[a] + beta[b] + beta[c] - 3.0) / sigma)
    return s


def _layers(sys: EdgeSystem, p: SmoothingParams, threads: int = 1):
    """Per-triple arrays ``s``, ``e`` and the R summand ``g`` with its slope in ``s``."""
    tri = all_triples(sys.n)
    sig = p.sigma
    parts = ordered_map(lambda sl: _soft_counts(sys.betas, tri[sl], sig), _blocks(len(tri)), threads)
    s = np.concatenate(parts)
    u = (s - 0.5) / sig
    e = gauss_cdf(u)
    if p.variant == "a":
        v = (e - (1.0 - p.epsilon)) / sig
        dv_ds = gauss_pdf(u) / (sig * sig)
    else:
        eb = gauss_cdf(s - 0.5)
        v = (eb / sig - (1.0 - p.epsilon)) / sig
        dv_ds = gauss_pdf(s - 0.5) / (sig * sig)
    g = gauss_cdf(v)
    return tri, s, u, e, g, gauss_pdf(v) * dv_ds


def soft_count(x, sys: EdgeSystem, p: SmoothingParams) -> float:
    tri = np.array([tuple(sorted(int(v) for v in x))], dtype=np.int64)
    rank_triple(tri[0], sys.n)
    return float(_soft_counts(sys.betas, tri, p.sigma)[0])


def soft_membership(x, sys: EdgeSystem, p: SmoothingParams) -> float:
    return float(gauss_cdf((soft_count(x, sys, p) - 0.5) / p.sigma))


def objective_N(sys: EdgeSystem, p: SmoothingParams, threads: int = 1) -> float:
    _, _, _, e, _, _ = _layers(sys, p, threads)
    return math.fsum(e)


def r_multiplicity(n: int, k: int) -> int:
    """Number of k-subsets containing a fixed triple."""
    return comb(n - 3, k - 3)


def objective_R(sys: EdgeSystem, p: SmoothingParams, threads: int = 1) -> float:
    _, _, _, _, g, _ = _layers(sys, p, threads)
    return comb(sys.n, sys.k) - r_multiplicity(sys.n, sys.k) * math.fsum(g)


# -- gradients ---------------------------------------------------------------

def _chain_to_betas(sys: EdgeSystem, tri, weight, sigma, threads) -> np.ndarray:
    """``sum_x weight[x] * Phi'(z[i,x]) / sigma`` over triples containing j."""
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    n = sys.n

    def row(beta):
        vals = weight * gauss_pdf((beta[a] + beta[b] + beta[c] - 3.0) / sigma) / sigma
        return np.bincount(a, vals, n) + np.bincount(b, vals, n) + np.bincount(c, vals, n)

    rows = ordered_map(row, sys.betas, threads)
    return np.array(rows, dtype=float).reshape(-1)


def grad_N(sys: EdgeSystem, p: SmoothingParams, threads: int = 1) -> np.ndarray:
    """Partials of N, flattened in ``(i, j)`` row-major order (length ``M*n``)."""
    tri, _, u, _, _, _ = _layers(sys, p, threads)
    return _chain_to_betas(sys, tri, gauss_pdf(u) / p.sigma, p.sigma, threads)


def grad_R(sys: EdgeSystem, p: SmoothingParams, threads: int = 1) -> np.ndarray:
    """Partials of R, flattened in ``(i, j)`` row-major order (length ``M*n``)."""
    tri, _, _, _, _, slope = _layers(sys, p, threads)
    weight = -r_multiplicity(sys.n, sys.k) * slope
    return _chain_to_betas(sys, tri, weight, p.sigma, threads)


def finite_difference_gradient(objective, sys: EdgeSystem, p: SmoothingParams, h: float = 1e-4) -> np.ndarray:
    """Central differences of ``objective(sys, p)`` in every beta coordinate."""
    base = sys.betas.reshape(-1)
    out = np.empty(base.size)
    for j in range(base.size):
        x = base.copy()
        x[j] = base[j] + h
        fp = objective(sys.with_betas(x), p)
        x[j] = base[j] - h
        fm = objective(sys.with_betas(x), p)
        out[j] = (fp - fm) / (2 * h)
    return out


def max_relative_error(analytic, reference) -> float:
    """``max |analytic - reference|`` scaled by the reference's largest entry."""
    analytic, reference = np.asarray(analytic), np.asarray(reference)
    if analytic.size == 0:
        return 0.0
    scale = max(float(np.max(np.abs(reference))), 1e-12)
    return float(np.max(np.abs(analytic - reference)) / scale)


def gradient_check(sys: EdgeSystem, p: SmoothingParams, h: float = 1e-4) -> dict:
    return {
        "N": max_relative_error(grad_N(sys, p), finite_difference_gradient(objective_N, sys, p, h)),
        "R": max_relative_error(grad_R(sys, p), finite_difference_gradient(objective_R, sys, p, h)),
    }


# -- stationarity ------------------------------------------------------------

@dataclass(frozen=True)
class KktReport:
    lambda_star: float
    residual_norm: float
    grad_N_norm: float
    grad_R_norm: float

    def to_dict(self) -> dict:
        return {
            "lambda_star": self.lambda_star,
            "residual_norm": self.residual_norm,
            "grad_N_norm": self.grad_N_norm,
            "grad_R_norm": self.grad_R_norm,
        }


def kkt_from_gradients(gN, gR) -> KktReport:
    """Least-squares multiplier for ``grad N = lambda * grad R`` and its residual."""
    gN = np.asarray(gN, dtype=float).reshape(-1)
    gR = np.asarray(gR, dtype=float).reshape(-1)
    if gN.shape != gR.shape:
        raise InputError(f"gradient shapes differ: {gN.shape} vs {gR.shape}")
    rr = math.fsum(gR * gR)
    norm_r = math.sqrt(rr)
    if norm_r < 1e-14:
        raise DegenerateGradientError(f"|grad R| = {norm_r:.3e}; multiplier is unidentifiable")
    lam = math.fsum(gN * gR) / rr
    resid = gN - lam * gR
    return KktReport(lam, math.sqrt(math.fsum(resid * resid)), math.sqrt(math.fsum(gN * gN)), norm_r)


def kkt_fit(sys: EdgeSystem, p: SmoothingParams, threads: int = 1) -> KktReport:
    return kkt_from_gradients(grad_N(sys, p, threads), grad_R(sys, p, threads))


# -- symmetry ----------------------------------------------------------------

@dataclass
class ClassSummary:
    count: int  # pairs compared; number of orbits for the orbit class
    worst_dN: float
    worst_dR: float
    asserted: bool
    passed: bool | None

    def to_dict(self) -> dict:
        return {"count": self.count, "worst_dN": self.worst_dN, "worst_dR": self.worst_dR,
                "asserted": self.asserted, "passed": self.passed}


@dataclass
class SymmetryReport:
    system: str
    tol: float
    classes: dict[str, ClassSummary]
    pairs: list[tuple[str, tuple[int, int], tuple[int, int], float, float]] = field(repr=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.classes.values() if c.asserted)

    def to_dict(self) -> dict:
        return {"system": self.system, "tol": self.tol, "passed": self.passed,
                "classes": {name: c.to_dict() for name, c in self.classes.items()}}


def construction_generators(instance) -> dict[str, list[np.ndarray]]:
    """Vertex permutations generating the construction's symmetry group."""
    n = instance.n
    m = instance.m
    if instance.experimental or m is None:
        raise InputError("symmetry checks need a strict-mode instance")
    rotation = (np.arange(n) + m) % n
    transpositions = []
    for i in range(instance.parts):
        block = instance.block(i)
        for x in range(len(block)):
            for y in range(x + 1, len(block)):
                perm = np.arange(n)
                perm[block[x]], perm[block[y]] = block[y], block[x]
                transpositions.append(perm)
    return {"within_part": transpositions, "cyclic_rotation": [rotation]}


def _row_action(supports, perm, n) -> np.ndarray:
    index = {rank_triple(t, n): i for i, t in enumerate(supports)}
    rows = np.empty(len(supports), dtype=np.int64)
    for i, t in enumerate(supports):
        r = rank_triple(sorted(int(perm[v]) for v in t), n)
        if r not in index:
            raise InputError("permutation is not an automorphism of the edge system")
        rows[i] = index[r]
    return rows


def symmetry_report(instance, p: SmoothingParams, system: str = "T", *, tol: float = 1e-9,
                    samples: int = 16, seed: int = 0, threads: int = 1) -> SymmetryReport:
    """Compare gradient entries at coordinates related by construction symmetries.

    Classes ``within_part`` and ``cyclic_rotation`` compare each coordinate
    ``(i, j)`` with its image under one generator; ``orbit`` takes the
    spread over whole orbits of the generated group.  These are asserted at
    ``tol``.  ``same_cell_zero`` checks literally that partials vanish at
    support coordinates of vectors whose triple lies in the complement
    family (empty when the system is built from ``T``), and
    ``non_automorphism_sample`` compares random coordinates from distinct
    orbits; both are reported without being asserted.
    """
    fam = {"T": instance.T, "T_bar": instance.T_bar}.get(system)
    if fam is None:
        raise InputError(f"system must be 'T' or 'T_bar', got {system!r}")
    sys = EdgeSystem.from_family(fam, instance.k)
    n, M = sys.n, sys.M
    gN = grad_N(sys, p, threads).reshape(M, n)
    gR = grad_R(sys, p, threads).reshape(M, n)

    classes: dict[str, ClassSummary] = {}
    pairs = []
    edge_src, edge_dst = [], []
    coord = np.arange(M * n).reshape(M, n)
    for name, perms in construction_generators(instance).items():
        worst_n = worst_r = 0.0
        count = 0
        for perm in perms:
            rows = _row_action(sys.supports, perm, n)
            dN = np.abs(gN - gN[rows][:, perm])
            dR = np.abs(gR - gR[rows][:, perm])
            worst_n = max(worst_n, float(dN.max(initial=0.0)))
            worst_r = max(worst_r, float(dR.max(initial=0.0)))
            count += M * n
            edge_src.append(coord.reshape(-1))
            edge_dst.append(coord[rows][:, perm].reshape(-1))
            for i, j in np.ndindex(M, n):
                pairs.append((name, (i, j), (int(rows[i]), int(perm[j])),
                              float(dN[i, j]), float(dR[i, j])))
        classes[name] = ClassSummary(count, worst_n, worst_r, True, worst_n <= tol and worst_r <= tol)

    # orbit spread under the generated group
    size = M * n
    if edge_src:
        src, dst = np.concatenate(edge_src), np.concatenate(edge_dst)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(src)), (src, dst)), shape=(size, size))
    n_orbits, label = connected_components(graph, directed=False)
    flatN, flatR = gN.reshape(-1), gR.reshape(-1)
    spreadN = spreadR = 0.0
    if size:
        spreadN = float(np.max(np.maximum.reduceat(*_by_label(flatN, label)) -
                               np.minimum.reduceat(*_by_label(flatN, label))))
        spreadR = float(np.max(np.maximum.reduceat(*_by_label(flatR, label)) -
                               np.minimum.reduceat(*_by_label(flatR, label))))
    classes["orbit"] = ClassSummary(int(n_orbits), spreadN, spreadR, True, spreadN <= tol and spreadR <= tol)

    # literal "derivative vanishes" claim
    cell = [i for i, t in enumerate(sys.supports) if t in instance.T_bar]
    zN = zR = 0.0
    zcount = 0
    for i in cell:
        cols = list(sys.supports[i])
        zN = max(zN, float(np.abs(gN[i, cols]).max()))
        zR = max(zR, float(np.abs(gR[i, cols]).max()))
        zcount += 3
    classes["same_cell_zero"] = ClassSummary(
        zcount, zN, zR, False, (zN <= tol and zR <= tol) if zcount else None)

    rng = np.random.default_rng(seed)
    sN = sR = 0.0
    scount = 0
    if n_orbits > 1:
        for _ in range(samples):
            x, y = rng.integers(0, size, size=2)
            if label[x] == label[y]:
                continue
            sN = max(sN, abs(float(flatN[x] - flatN[y])))
            sR = max(sR, abs(float(flatR[x] - flatR[y])))
            scount += 1
    classes["non_automorphism_sample"] = ClassSummary(scount, sN, sR, False, None)
    return SymmetryReport(system, tol, classes, pairs)


def _by_label(values, label):
    order = np.argsort(label, kind="stable")
    sorted_labels = label[order]
    starts = np.flatnonzero(np.r_[True, sorted_labels[1:] != sorted_labels[:-1]])
    return values[order], starts


# -- diagnostics -------------------------------------------------------------

def convexity_probe(sys: EdgeSystem, p: SmoothingParams, segments: int = 32,
                    scale: float = 0.5, seed: int = 0, tol: float = 1e-12) -> dict:
    """Count midpoint-convexity failures of N and midpoint-concavity failures of R.

    Segments join two random perturbations of ``sys``.  Purely diagnostic.
    """
    rng = np.random.default_rng(seed)
    base = sys.betas
    bad_n = bad_r = 0
    for _ in range(segments):
        x = sys.with_betas(base + rng.normal(0.0, scale, base.shape))
        y = sys.with_betas(base + rng.normal(0.0, scale, base.shape))
        mid = sys.with_betas(0.5 * (x.betas + y.betas))
        if objective_N(mid, p) > 0.5 * (objective_N(x, p) + objective_N(y, p)) + tol:
            bad_n += 1
        if objective_R(mid, p) < 0.5 * (objective_R(x, p) + objective_R(y, p)) - tol:
            bad_r += 1
    return {"segments": segments, "N_convexity_violations": bad_n, "R_concavity_violations": bad_r}
