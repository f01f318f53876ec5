"""Reference lambda_1 by conformal transplantation.

The Neumann problem on Omega = psi(base) is equivalent to the weighted problem
-Laplace g = lambda |psi'|^2 g on the base domain with natural boundary
conditions. We discretize it with P1 triangles on the disc and bilinear Q1 cells
on rectangles and solve the generalized eigenproblem K x = lambda M x.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu

from . import maps
from .errors import NoSpectralGap, SingularMass, SolverNonconvergence
from .maps import BaseDomain, MapSpec
from .quad import DEFAULT, QuadConfig, integrate_base

log = logging.getLogger(__name__)

WEIGHT_CAP = 1e12
N_EIGS = 6
RESIDUAL_TOL = 1e-8

# interior three-point rule on the reference triangle (exact for quadratics)
_TRI_BARY = np.array([[2 / 3, 1 / 6, 1 / 6], [1 / 6, 2 / 3, 1 / 6], [1 / 6, 1 / 6, 2 / 3]])


@dataclass(frozen=True)
class Mesh:
    base: BaseDomain
    resolution: int
    vertices: np.ndarray            # (n, 2)
    triangles: np.ndarray | None    # (t, 3) for the disc
    grid: tuple[int, int] | None = None   # (nx, ny) cells for a rectangle

    @property
    def h(self):
        if self.triangles is not None:
            p = self.vertices[self.triangles]
            edges = p - np.roll(p, 1, axis=1)
            return float(np.max(np.hypot(edges[..., 0], edges[..., 1])))
        nx, ny = self.grid
        return math.hypot(self.base.a / nx, self.base.b / ny)

    def min_angle(self):
        """Smallest interior angle in degrees (rectangle cells: 90)."""
        if self.triangles is None:
            return 90.0
        p = self.vertices[self.triangles]
        worst = 180.0
        for i in range(3):
            u = p[:, (i + 1) % 3] - p[:, i]
            v = p[:, (i + 2) % 3] - p[:, i]
            cos = np.sum(u * v, axis=1) / (np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            worst = min(worst, float(np.degrees(np.arccos(np.clip(cos, -1, 1))).min()))
        return worst


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    residuals: np.ndarray
    mesh_h: float
    weight_capped: bool = False
    vectors: np.ndarray | None = field(default=None, repr=False, compare=False)


def transplant_weight(spec: MapSpec):
    """w(z) = |psi'(z)|^2, the Jacobian of the conformal map."""
    def w(z):
        return np.abs(maps.deriv(spec, z)) ** 2
    return w


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


# -- meshes ---------------------------------------------------------------------------

def disc_mesh(resolution: int) -> Mesh:
    """Polar mesh with 6 i points on ring i (i = 1..N) around a centre vertex.

    Each of the six sectors of the annulus between rings i-1 and i is filled
    with 2i - 1 triangles, which gives a hexagonal patch near the centre and
    nearly equilateral triangles everywhere.
    """
    n = int(resolution)
    if n < 1:
        raise ValueError("resolution must be positive")
    start = np.concatenate(([0, 1], 1 + 3 * np.arange(1, n + 1) * np.arange(2, n + 2)))
    # start[i] = index of the first vertex of ring i; ring i has 6 i vertices
    pts = [np.zeros((1, 2))]
    for i in range(1, n + 1):
        t = 2 * np.pi * np.arange(6 * i) / (6 * i)
        pts.append(np.column_stack([np.cos(t), np.sin(t)]) * (i / n))
    verts = np.vstack(pts)

    def ring(i, k):
        return start[i] + (k % (6 * i)) if i else np.zeros_like(k)

    tris = []
    for i in range(1, n + 1):
        for s in range(6):
            j = np.arange(i)
            outer0, outer1 = ring(i, s * i + j), ring(i, s * i + j + 1)
            inner0 = ring(i - 1, s * (i - 1) + j)
            tris.append(np.column_stack([outer0, outer1, inner0]))
            if i > 1:
                j = np.arange(i - 1)
                tris.append(np.column_stack([ring(i - 1, s * (i - 1) + j), ring(i, s * i + j + 1),
                                             ring(i - 1, s * (i - 1) + j + 1)]))
    tris = np.vstack(tris)
    p = verts[tris]
    signed = _cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    flip = signed < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    return Mesh(BaseDomain.disc(), n, verts, tris)


def rectangle_mesh(base: BaseDomain, resolution: int) -> Mesh:
    """Uniform grid with ``resolution`` cells along the longer side."""
    long_side = max(base.a, base.b)
    nx = max(4, int(math.ceil(resolution * base.a / long_side)))
    ny = max(4, int(math.ceil(resolution * base.b / long_side)))
    u, v = np.meshgrid(np.linspace(0, base.a, nx + 1), np.linspace(0, base.b, ny + 1), indexing="ij")
    verts = np.column_stack([u.ravel(), v.ravel()])
    return Mesh(base, int(resolution), verts, None, (nx, ny))


def make_mesh(base: BaseDomain, resolution: int) -> Mesh:
    return disc_mesh(resolution) if base.is_disc else rectangle_mesh(base, resolution)


# -- assembly ---------------------------------------------------------------------------

def _capped(values):
    values = np.asarray(values, dtype=float)
    capped = bool(np.any(~(values <= WEIGHT_CAP)))
    if capped:
        log.warning("transplant weight capped at %g on %d quadrature points",
                    WEIGHT_CAP, int(np.sum(~(values <= WEIGHT_CAP))))
    return np.where(values <= WEIGHT_CAP, values, WEIGHT_CAP), capped


def _assemble_p1(mesh: Mesh, w):
    v, t = mesh.vertices, mesh.triangles
    p = v[t]
    e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
    area = 0.5 * _cross(e1, e2)
    # gradients of the barycentric coordinates: rotate opposite edges
    opp = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1)
    grads = np.stack([-opp[..., 1], opp[..., 0]], axis=-1) / (2 * area)[:, None, None]
    kloc = area[:, None, None] * np.einsum("tik,tjk->tij", grads, grads)

    qpts = np.einsum("qk,tkd->tqd", _TRI_BARY, p)
    wq, capped = _capped(w(qpts[..., 0] + 1j * qpts[..., 1]))
    # sum_q (area/3) w_q phi_i(x_q) phi_j(x_q)
    mloc = (area / 3.0)[:, None, None] * np.einsum("tq,qi,qj->tij", wq, _TRI_BARY, _TRI_BARY)

    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    n = len(v)
    K = sp.csr_matrix((kloc.ravel(), (rows, cols)), shape=(n, n))
    M = sp.csr_matrix((mloc.ravel(), (rows, cols)), shape=(n, n))
    return K, M, capped


def _assemble_q1(mesh: Mesh, w):
    nx, ny = mesh.grid
    hx, hy = mesh.base.a / nx, mesh.base.b / ny
    # local node order (0,0), (0,1), (1,0), (1,1), i.e. index = 2 ix + iy
    kx = np.array([[1, -1], [-1, 1]]) / hx
    ky = np.array([[1, -1], [-1, 1]]) / hy
    mx = np.array([[2, 1], [1, 2]]) * hx / 6
    my = np.array([[2, 1], [1, 2]]) * hy / 6
    kloc = np.kron(kx, my) + np.kron(mx, ky)
    mref = np.kron(mx, my)

    i, j = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    i, j = i.ravel(), j.ravel()
    node = lambda di, dj: (i + di) * (ny + 1) + (j + dj)     # noqa: E731
    cells = np.column_stack([node(0, 0), node(0, 1), node(1, 0), node(1, 1)])
    mid = (i + 0.5) * hx + 1j * (j + 0.5) * hy
    wc, capped = _capped(w(mid))

    rows = np.repeat(cells, 4, axis=1).ravel()
    cols = np.tile(cells, (1, 4)).ravel()
    n = (nx + 1) * (ny + 1)
    K = sp.csr_matrix((np.broadcast_to(kloc, (len(i), 4, 4)).ravel(), (rows, cols)), shape=(n, n))
    M = sp.csr_matrix(((wc[:, None, None] * mref).ravel(), (rows, cols)), shape=(n, n))
    return K, M, capped


def assemble(mesh: Mesh, w):
    """Stiffness K, weighted mass M and the weight-cap flag."""
    return _assemble_p1(mesh, w) if mesh.triangles is not None else _assemble_q1(mesh, w)


# -- eigensolver ----------------------------------------------------------------------------

def _solve(K, M, k):
    n = K.shape[0]
    ones = np.ones(n)
    m1 = M @ ones
    total = float(ones @ m1)
    if not (total > 0 and np.all(np.isfinite(m1)) and np.min(m1) > 0):
        raise SingularMass("weighted mass form is degenerate at this resolution")
    # K is singular (constants); a small negative shift keeps K - sigma M definite.
    sigma = -0.05 * 4 * np.pi / total
    lu = splu(sp.csc_matrix(K - sigma * M))

    def op(x):
        y = lu.solve(np.asarray(x, dtype=float).ravel())
        return y - ones * (m1 @ y) / total      # M-orthogonal projection off constants

    opinv = LinearOperator((n, n), matvec=op, dtype=float)
    v0 = op(m1 * np.cos(np.arange(n)))          # deterministic start vector
    try:
        vals, vecs = eigsh(K, k=k, M=M, sigma=sigma, which="LM", OPinv=opinv, v0=v0,
                           tol=0.0, maxiter=20 * n)
    except ArpackNoConvergence as exc:
        raise SolverNonconvergence(f"ARPACK did not converge: {exc}") from exc
    order = np.argsort(vals)
    return vals[order], vecs[:, order], ones, total


def solve_neumann(base: BaseDomain, w, resolution: int) -> EigenResult:
    """The six smallest eigenvalues of the weighted Neumann problem on ``base``.

    The constant mode is removed from the Krylov space; its eigenvalue is reported
    as the Rayleigh quotient of the constant vector (zero up to rounding).
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    mesh = make_mesh(base, resolution)
    K, M, capped = assemble(mesh, w)
    vals, vecs, ones, total = _solve(K, M, N_EIGS - 1)
    lam0 = float(ones @ (K @ ones)) / total
    res = np.linalg.norm(K @ vecs - (M @ vecs) * vals, axis=0) / np.linalg.norm(vecs, axis=0)
    res0 = float(np.linalg.norm(K @ ones - lam0 * (M @ ones)) / np.linalg.norm(ones))
    if np.max(res) > RESIDUAL_TOL * max(1.0, float(np.max(vals))):
        raise SolverNonconvergence(f"eigen residual {np.max(res):.3g} exceeds {RESIDUAL_TOL:g}")
    return EigenResult(
        eigenvalues=np.concatenate(([lam0], vals)),
        residuals=np.concatenate(([res0], res)),
        mesh_h=mesh.h,
        weight_capped=capped,
        vectors=np.column_stack([ones / math.sqrt(total), vecs]),
    )


def solve_map(spec: MapSpec, resolution: int) -> EigenResult:
    return solve_neumann(spec.base, transplant_weight(spec), resolution)


def first_nontrivial(result) -> float:
    """Smallest eigenvalue above 1e-6 times the second smallest."""
    ev = np.sort(np.asarray(getattr(result, "eigenvalues", result), dtype=float))
    if len(ev) < 2 or not ev[1] > 0:
        raise NoSpectralGap("no positive eigenvalue among the computed modes")
    above = ev[ev > 1e-6 * ev[1]]
    if len(above) == 0:
        raise NoSpectralGap("all computed modes are numerically zero")
    return float(above[0])


def rayleigh_quotient(base: BaseDomain, w, g, grad_g, cfg: QuadConfig = DEFAULT):
    """Continuous Rayleigh quotient of a trial g after removing its weighted mean."""
    from .quad import integrate_disc, integrate_rect

    def integ(f):
        if base.is_disc:
            return integrate_disc(f, cfg)
        return integrate_rect(f, base.a, base.b, cfg)

    mass = integ(w)
    mean = integ(lambda z: w(z) * g(z)) / mass
    num = integ(lambda z: np.sum(np.abs(grad_g(z)) ** 2, axis=0))
    den = integ(lambda z: w(z) * (g(z) - mean) ** 2)
    return num / den


# -- energy isometry ------------------------------------------------------------------------

def _fd_step(base, z):
    """Central-difference step that keeps the 4-point stencil inside the closure."""
    if base.is_disc:
        room = 1.0 - np.abs(z)
    else:
        room = np.minimum.reduce([z.real, base.a - z.real, z.imag, base.b - z.imag])
    return np.minimum(1e-3, 0.45 * room)


def energy_isometry_check(spec: MapSpec, f, grad_f, cfg: QuadConfig = DEFAULT):
    """Dirichlet energy of f on Omega, computed two ways on the base domain.

    lhs integrates |grad (f o psi)|^2 with the chain rule, where the real Jacobian
    of psi comes from fourth-order central differences of psi itself (no use of
    psi' or of conformality). rhs integrates |grad f|^2(psi) |psi'|^2. ``f`` and
    ``grad_f`` take arrays x, y; ``grad_f`` returns (f_x, f_y).
    """
    base = spec.base

    def lhs_density(z):
        z = np.asarray(z, dtype=complex)
        h = _fd_step(base, z)
        out = np.zeros(z.shape)
        w0 = maps.evaluate(spec, z)
        gx, gy = grad_f(w0.real, w0.imag)
        for direction in (1.0, 1j):
            dz = h * direction
            dpsi = (8 * (maps.evaluate(spec, z + dz) - maps.evaluate(spec, z - dz))
                    - (maps.evaluate(spec, z + 2 * dz) - maps.evaluate(spec, z - 2 * dz))) / (12 * h)
            out += (gx * dpsi.real + gy * dpsi.imag) ** 2
        return out

    def rhs_density(z):
        w0 = maps.evaluate(spec, z)
        gx, gy = grad_f(w0.real, w0.imag)
        return (gx ** 2 + gy ** 2) * np.abs(maps.deriv(spec, z)) ** 2

    lhs = integrate_base(spec, lhs_density, cfg, exponent_of_jacobian=2.0)
    rhs = integrate_base(spec, rhs_density, cfg, exponent_of_jacobian=2.0)
    return lhs, rhs
