"""Weighted graph integrals: exact 1D, periodic 1D, and Monte Carlo.

For piecewise-constant Mayer functions (hard rods, hard spheres in 1D,
square well in 1D) the integrand of a graph weight is constant on convex
cells cut out by the difference constraints |x_i - x_j| in each f piece,
so each weight is an exact sum of (constant) x (polytope volume).  In
d >= 2 we fall back to importance-sampled Monte Carlo with a spanning-tree
proposal whose per-edge radial density is proportional to fbar.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .graphs import Graph
from .potentials import SURFACE_AREA, Kind, Potential


# ---------------------------------------------------------------------------
# polytope volumes
# ---------------------------------------------------------------------------

def _propagate_intervals(k, constraints, box):
    """Cheap interval tightening; returns per-var (lo, hi) or None if empty.

    constraints: list of (i, j, lo, hi) meaning lo <= x_i - x_j <= hi,
    where an index of -1 stands for the constant 0 (already folded in).
    """
    lo = np.full(k, -math.inf)
    hi = np.full(k, math.inf)
    if box is not None:
        lo[:] = box[0]
        hi[:] = box[1]
    for _ in range(3 * (len(constraints) + 1)):
        changed = False
        for i, j, clo, chi in constraints:
            jlo = lo[j] if j >= 0 else 0.0
            jhi = hi[j] if j >= 0 else 0.0
            if i >= 0:
                nlo, nhi = max(lo[i], jlo + clo), min(hi[i], jhi + chi)
                if nlo > lo[i] + 1e-15 or nhi < hi[i] - 1e-15:
                    changed = True
                lo[i], hi[i] = nlo, nhi
                if nlo > nhi:
                    return None
            ilo = lo[i] if i >= 0 else 0.0
            ihi = hi[i] if i >= 0 else 0.0
            if j >= 0:
                nlo, nhi = max(lo[j], ilo - chi), min(hi[j], ihi - clo)
                if nlo > lo[j] + 1e-15 or nhi < hi[j] - 1e-15:
                    changed = True
                lo[j], hi[j] = nlo, nhi
                if nlo > nhi:
                    return None
        if not changed:
            break
    return lo, hi


def difference_polytope_volume(k, constraints, box=None):
    """Volume of {x in R^k : lo <= x_i - x_j <= hi for the constraints}.

    Index -1 in a constraint denotes the constant 0 (a pinned vertex);
    ``box`` optionally bounds every variable to [box[0], box[1]].
    Returns 0.0 for infeasible or lower-dimensional regions; raises if the
    region is unbounded.
    """
    feasible = [(i, j, lo, hi) for i, j, lo, hi in constraints
                if not (i == -1 and j == -1)]
    for i, j, lo, hi in constraints:
        if i == -1 and j == -1:
            if lo > 0 or hi < 0:
                return 0.0
    if k == 0:
        return 1.0
    iv = _propagate_intervals(k, feasible, box)
    if iv is None:
        return 0.0
    lo, hi = iv
    if np.any(~np.isfinite(lo)) or np.any(~np.isfinite(hi)):
        raise ValueError("unbounded integration region")
    if k == 1:
        a, b = lo[0], hi[0]
        for i, j, clo, chi in feasible:
            # with k = 1 every constraint ties x_0 to the constant
            if i == 0 and j == -1:
                a, b = max(a, clo), min(b, chi)
            elif j == 0 and i == -1:
                a, b = max(a, -chi), min(b, -clo)
        return max(0.0, b - a)

    # halfspaces A x <= b
    rows, rhs = [], []
    for i, j, clo, chi in feasible:
        row = np.zeros(k)
        if i >= 0:
            row[i] = 1.0
        if j >= 0:
            row[j] = -1.0
        rows.append(row.copy())
        rhs.append(chi)
        rows.append(-row)
        rhs.append(-clo)
    for v in range(k):
        row = np.zeros(k)
        row[v] = 1.0
        rows.append(row.copy())
        rhs.append(hi[v])
        rows.append(-row)
        rhs.append(-lo[v])
    A = np.array(rows)
    b = np.array(rhs)

    # Chebyshev center for an interior point
    norms = np.linalg.norm(A, axis=1)
    res = linprog(c=np.r_[np.zeros(k), -1.0],
                  A_ub=np.c_[A, norms], b_ub=b,
                  bounds=[(None, None)] * k + [(0, None)],
                  method="highs")
    if not res.success or res.x[-1] < 1e-10:
        return 0.0
    interior = res.x[:k]
    halfspaces = np.c_[A, -b]
    try:
        hs = HalfspaceIntersection(halfspaces, interior)
        return float(ConvexHull(hs.intersections).volume)
    except QhullError:
        return _volume_by_vertex_enumeration(A, b, k)


def _volume_by_vertex_enumeration(A, b, k):
    """Fallback: intersect all k-subsets of bounding planes."""
    pts = []
    m = len(b)
    for idx in itertools.combinations(range(m), k):
        sub = A[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, b[list(idx)])
        if np.all(A @ x <= b + 1e-9):
            pts.append(x)
    if len(pts) <= k:
        return 0.0
    try:
        return float(ConvexHull(np.array(pts), qhull_options="QJ").volume)
    except QhullError:
        return 0.0


# ---------------------------------------------------------------------------
# exact one-dimensional weights
# ---------------------------------------------------------------------------

MAX_EXACT_BLACK = 5


def _delta_branches(piece, shifts=(0.0,)):
    """Convex branches of {Delta : |Delta| in [r_lo, r_hi)} (+ periodic
    images), each as (lo, hi, value)."""
    r_lo, r_hi, val = piece
    if r_lo == 0.0:
        base = [(-r_hi, r_hi, val)]
    else:
        base = [(r_lo, r_hi, val), (-r_hi, -r_lo, val)]
    return [(lo + s, hi + s, val) for lo, hi, val in base for s in shifts]


def _edge_terms(g: Graph, p: Potential, positions, shifts=(0.0,), box=None):
    """Split edges into a constant prefactor (edges between fixed vertices)
    and per-edge convex branch lists over the free coordinates."""
    n_free = g.n_vertices - len(positions)
    fixed = dict(enumerate(positions))

    def var(v):
        return v - len(positions) if v >= len(positions) else None

    prefactor = 1.0
    edge_branches = []
    edge_vars = []
    pieces = p.f_pieces()
    for i, j in sorted(g.edges):
        vi, vj = var(i), var(j)
        if vi is None and vj is None:
            r = abs(fixed[i] - fixed[j])
            if box is not None:
                L = box[1] - box[0]
                r = min(r % L, L - r % L)
            prefactor *= float(p.mayer_f(r))
            if prefactor == 0.0:
                return 0.0, [], [], n_free
            continue
        offset = 0.0
        if vi is None:
            offset += fixed[i]
        if vj is None:
            offset -= fixed[j]
        branches = [(lo - offset, hi - offset, val)
                    for piece in pieces
                    for lo, hi, val in _delta_branches(piece, shifts)]
        edge_branches.append(branches)
        edge_vars.append((vi if vi is not None else -1,
                          vj if vj is not None else -1))
    return prefactor, edge_branches, edge_vars, n_free


def _sum_branch_combinations(prefactor, edge_branches, edge_vars, n_free, box):
    if prefactor == 0.0:
        return 0.0
    total = 0.0
    for combo in itertools.product(*edge_branches):
        val = prefactor
        constraints = []
        for (vi, vj), (lo, hi, v) in zip(edge_vars, combo):
            val *= v
            constraints.append((vi, vj, lo, hi))
        if val == 0.0:
            continue
        vol = difference_polytope_volume(n_free, constraints, box=box)
        if vol:
            total += val * vol
    return total


def graph_weight_exact_1d(g: Graph, p: Potential, root_positions=(0.0,)):
    """Infinite-volume rooted weight: the first len(root_positions) vertices
    are fixed at the given 1D positions, the rest integrate over R.

    Exact for piecewise-constant f.  The graph must connect every free
    vertex to a fixed one (else the integral diverges).
    """
    if not p.piecewise_constant_f:
        raise ValueError("use MC path: f is not piecewise constant")
    if p.dimension != 1:
        raise ValueError("exact path is one-dimensional")
    n_black = g.n_vertices - len(root_positions)
    if n_black > MAX_EXACT_BLACK:
        raise ValueError(f"exact path capped at {MAX_EXACT_BLACK} free vertices")
    if n_black < 0:
        raise ValueError("more roots than vertices")
    if p.kind is Kind.ZERO:
        return 0.0 if g.n_edges > 0 else 1.0
    prefactor, eb, ev, n_free = _edge_terms(g, p, root_positions)
    return _sum_branch_combinations(prefactor, eb, ev, n_free, box=None)


def graph_weight_periodic_1d(g: Graph, p: Potential, L: float):
    """Normalized periodic weight: integral over the length-L torus of the
    product of periodic f bonds, with one factor dx/L per vertex.

    Translation invariance pins vertex 0; periodic distances are realized
    by image shifts, valid because the interaction range is < L/2.
    """
    if not p.piecewise_constant_f:
        raise ValueError("use MC path: f is not piecewise constant")
    if p.dimension != 1:
        raise ValueError("periodic exact path is one-dimensional")
    if p.interaction_range >= L / 2:
        raise ValueError("interaction range must be < L/2 for image expansion")
    n_free = g.n_vertices - 1
    if n_free > MAX_EXACT_BLACK:
        raise ValueError(f"exact path capped at {MAX_EXACT_BLACK} free vertices")
    if p.kind is Kind.ZERO:
        return 0.0 if g.n_edges > 0 else 1.0
    box = (-L / 2.0, L / 2.0)
    prefactor, eb, ev, _ = _edge_terms(g, p, (0.0,), shifts=(-L, 0.0, L), box=box)
    total = _sum_branch_combinations(prefactor, eb, ev, n_free, box=box)
    return total / L ** n_free


# ---------------------------------------------------------------------------
# Monte Carlo weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientEstimate:
    """A cluster-integral value with its statistical pedigree."""

    value: float
    std_error: float
    method: str  # "exact1d" | "mc" | "quadrature"
    samples: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be nonnegative")
        if self.method == "exact1d" and self.std_error != 0:
            raise ValueError("exact estimates carry no statistical error")

    def agrees_with(self, other_value: float, n_sigma: float = 3.0,
                    atol: float = 1e-9) -> bool:
        tol = n_sigma * self.std_error + atol
        return abs(self.value - other_value) <= tol


class RadialProposal:
    """Piecewise-constant radial density proportional to fbar.

    Exact for hard-core / square-well potentials; for Lennard-Jones the
    density is a gridded envelope truncated at ``r_max`` (the tree-edge
    displacement never exceeds r_max, a documented tail truncation).
    """

    def __init__(self, p: Potential, d: int, n_bins: int = 2048, r_max: float | None = None):
        self.d = d
        if p.piecewise_constant_f:
            edges, vals = [0.0], []
            for r_lo, r_hi, _ in p.f_pieces():
                if edges[-1] != r_lo:
                    edges.append(r_lo)
                    vals.append(0.0)
                edges.append(r_hi)
                vals.append(float(p.mayer_fbar(0.5 * (r_lo + r_hi))))
        else:
            if r_max is None:
                r_max = 50.0 * p.sigma if p.cutoff is None else p.cutoff
            grid = np.linspace(0.0, r_max, n_bins + 1)
            mids = 0.5 * (grid[:-1] + grid[1:])
            edges = list(grid)
            vals = list(np.maximum(p.mayer_fbar(mids), 0.0))
        self.edges = np.array(edges)
        self.vals = np.array(vals)
        shell = (self.edges[1:] ** d - self.edges[:-1] ** d) * SURFACE_AREA[d] / d
        masses = self.vals * shell
        self.norm = float(masses.sum())
        if self.norm <= 0:
            raise ValueError("zero proposal mass: fbar vanishes")
        self.cum = np.concatenate([[0.0], np.cumsum(masses)]) / self.norm

    def sample_radii(self, rng, size):
        u = rng.random(size)
        k = np.searchsorted(self.cum, u, side="right") - 1
        k = np.clip(k, 0, len(self.vals) - 1)
        u2 = rng.random(size)
        lo_d = self.edges[k] ** self.d
        hi_d = self.edges[k + 1] ** self.d
        return (lo_d + u2 * (hi_d - lo_d)) ** (1.0 / self.d)

    def pdf(self, r):
        """Proposal density at radius r (value of the d-dim pdf)."""
        k = np.searchsorted(self.edges, r, side="right") - 1
        k = np.clip(k, 0, len(self.vals) - 1)
        inside = (r >= self.edges[0]) & (r < self.edges[-1])
        return np.where(inside, self.vals[k], 0.0) / self.norm


def _random_directions(rng, size, d):
    if d == 1:
        return rng.choice([-1.0, 1.0], size=(size, 1))
    v = rng.normal(size=(size, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _spanning_tree_from_whites(g: Graph, n_roots: int):
    """BFS tree edges (parent, child) covering every free vertex."""
    adj = g.adjacency()
    seen = set(range(n_roots))
    order = []
    queue = list(range(n_roots))
    while queue:
        v = queue.pop(0)
        for u in sorted(adj[v]):
            if u not in seen:
                seen.add(u)
                order.append((v, u))
                queue.append(u)
    if len(seen) != g.n_vertices:
        raise ValueError("graph does not connect all free vertices to the roots")
    return order


def graph_weight_mc(g: Graph, p: Potential, d: int, n_samples: int, seed: int,
                    root_positions=None) -> CoefficientEstimate:
    """Unbiased Mayer-sampling estimate of the rooted graph weight.

    Free-vertex positions are drawn along a BFS spanning tree with per-edge
    radial density proportional to fbar; every sample is reweighted by
    f/proposal on tree edges times f on the remaining edges.
    """
    if d not in SURFACE_AREA or d > 3:
        raise ValueError("d must be 1, 2 or 3")
    if root_positions is None:
        root_positions = np.zeros((1, d))
    roots = np.atleast_2d(np.asarray(root_positions, dtype=float))
    if roots.shape[1] != d:
        roots = roots.reshape(-1, d)
    n_roots = roots.shape[0]
    n_free = g.n_vertices - n_roots
    if p.kind is Kind.ZERO:
        value = 1.0 if g.n_edges == 0 and n_free == 0 else 0.0
        return CoefficientEstimate(value, 0.0, "mc", n_samples, seed)

    tree = _spanning_tree_from_whites(g, n_roots)
    proposal = RadialProposal(p, d)
    rng = np.random.default_rng(seed)

    pos = np.empty((n_samples, g.n_vertices, d))
    pos[:, :n_roots, :] = roots[None, :, :]
    logless_weight = np.ones(n_samples)
    tree_set = set()
    for parent, child in tree:
        tree_set.add(tuple(sorted((parent, child))))
        r = proposal.sample_radii(rng, n_samples)
        disp = _random_directions(rng, n_samples, d) * r[:, None]
        pos[:, child, :] = pos[:, parent, :] + disp
        logless_weight *= p.mayer_f(r) / proposal.pdf(r)
    for i, j in sorted(g.edges):
        if (i, j) in tree_set:
            continue
        r = np.linalg.norm(pos[:, i, :] - pos[:, j, :], axis=1)
        logless_weight *= p.mayer_f(r)

    value = float(logless_weight.mean())
    stderr = float(logless_weight.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else math.inf
    return CoefficientEstimate(value, stderr, "mc", n_samples, seed)


# ---------------------------------------------------------------------------
# phi / phi^T at fixed configurations
# ---------------------------------------------------------------------------

def pair_f_matrix(p: Potential, points) -> np.ndarray:
    """Matrix of f(|x_i - x_j|) for a configuration (n, d) or (n,) array."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    diff = pts[:, None, :] - pts[None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    f = np.asarray(p.mayer_f(r))
    np.fill_diagonal(f, 0.0)
    return f


def phi_value(p: Potential, points) -> float:
    """phi = product over pairs of (1 + f) at the fixed configuration."""
    f = pair_f_matrix(p, points)
    n = f.shape[0]
    iu = np.triu_indices(n, 1)
    return float(np.prod(1.0 + f[iu]))


def phi_t_value(p: Potential, points) -> float:
    """phi^T = sum over connected graphs of the f-bond product."""
    f = pair_f_matrix(p, points)
    return float(phi_t_batch(f[None, :, :])[0])


def phi_batch(f: np.ndarray) -> np.ndarray:
    """phi for a batch of pair matrices, for every vertex subset.

    f: (B, n, n).  Returns (B, 2^n): subset S -> product over pairs in S.
    """
    B, n, _ = f.shape
    out = np.ones((B, 1 << n))
    for s in range(1, 1 << n):
        top = s.bit_length() - 1
        rest = s & ~(1 << top)
        acc = out[:, rest].copy()
        t = rest
        while t:
            j = (t & -t).bit_length() - 1
            acc *= 1.0 + f[:, top, j]
            t &= t - 1
        out[:, s] = acc
    return out


def phi_t_batch(f: np.ndarray) -> np.ndarray:
    """phi^T over all n vertices for a batch of pair matrices (B, n, n).

    Uses the partition identity phi(V) = sum over S containing the least
    element of phi^T(S) phi(V - S); equivalent to the connected-graph sum
    and cross-checked against it in the tests.
    """
    B, n, _ = f.shape
    phis = phi_batch(f)
    phit = np.zeros((B, 1 << n))
    full = (1 << n) - 1
    for s in range(1, 1 << n):
        low = s & -s
        acc = phis[:, s].copy()
        rest = s & ~low
        if rest:
            # proper submasks sm = low | t with t a strict submask of rest
            t = (rest - 1) & rest
            while True:
                sm = t | low
                acc -= phit[:, sm] * phis[:, s & ~sm]
                if t == 0:
                    break
                t = (t - 1) & rest
        phit[:, s] = acc
    return phit[:, full]


def fbar_tree_sum_batch(fbar: np.ndarray) -> np.ndarray:
    """Sum over all trees of the fbar-bond product, by the matrix-tree
    theorem, for a batch of pair matrices (B, n, n)."""
    B, n, _ = fbar.shape
    if n == 1:
        return np.ones(B)
    w = fbar.copy()
    for b in range(B):
        np.fill_diagonal(w[b], 0.0)
    lap = -w
    diag = w.sum(axis=2)
    idx = np.arange(n)
    lap[:, idx, idx] = diag
    minor = lap[:, 1:, 1:]
    return np.linalg.det(minor)
