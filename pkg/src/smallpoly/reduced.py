"""The (r+2)-parameter family of symmetric unit-diameter polygons.

Instead of optimizing all n/2 turning angles, the construction lets only the
first few vary: theta_0 = alpha, then pairs (beta_i + gamma_i, beta_i -
gamma_i), then a constant tail angle beta.  Two parameters are eliminated by
the geometry: the tail angle beta from the quarter-turn angle sum, and the
last gamma from the requirement that the chain midpoint reach x = +-1/2.  The
area then collapses to a closed form whose number of terms depends only on r,
so a single evaluation costs the same at n = 10 and n = 100000.

Odd r uses the scheme of r+1 with the last pair's beta set to the tail angle,
so r counts the genuinely free parameters in every case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import dd
from .geometry import (
    AngleVector,
    AreaReport,
    SmallPolygon,
    validate,
    vertices_from_angles,
)
from .reference import MAX_TABULATED_R, coeff_row
from .solver import (
    BoxProblem,
    BracketError,
    Diagnostics,
    InfeasibleError,
    brentq,
    maximize_box,
)

CLOSURE_RESIDUAL_TOL = 1e-14
_THETA_MAX = math.pi / 3
_PENALTY = -1.0


@dataclass(frozen=True)
class ReducedParams:
    """Free and derived parameters of the r-parameter construction.

    ``betas`` holds the floor(r/2) free pair angles, ``gammas_free`` the
    ceil(r/2) - 1 free asymmetries.  ``beta_derived`` (tail angle) and
    ``gamma_last_derived`` (final asymmetry) are filled in by ``derive``.
    """

    n: int
    r: int
    alpha: float
    betas: tuple[float, ...] = ()
    gammas_free: tuple[float, ...] = ()
    beta_derived: float | None = None
    gamma_last_derived: float | None = None

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 6:
            raise ValueError(f"n must be even and >= 6, got {self.n}")
        if self.r < 0:
            raise ValueError(f"r must be >= 0, got {self.r}")
        if self.n < 2 * self.r + 4:
            raise ValueError(f"need n >= 2r + 4, got n = {self.n}, r = {self.r}")
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "gammas_free", tuple(float(g) for g in self.gammas_free))
        nb, ng = free_shape(self.r)
        if len(self.betas) != nb:
            raise ValueError(f"r = {self.r} takes {nb} free betas, got {len(self.betas)}")
        if len(self.gammas_free) != ng:
            raise ValueError(
                f"r = {self.r} takes {ng} free gammas, got {len(self.gammas_free)}"
            )

    @property
    def pair_count(self) -> int:
        """Number of (beta, gamma) pairs in the expanded prefix."""
        return (self.r + 1) // 2 if self.r % 2 else self.r // 2


@dataclass(frozen=True)
class PhiState:
    """Cumulative turn and chain position after the varying prefix."""

    phi: float
    x: float
    y: float


def free_shape(r: int) -> tuple[int, int]:
    """(number of free betas, number of free gammas) for a given r."""
    if r == 0:
        return 0, 0
    return r // 2, (r + 1) // 2 - 1


def free_parameter_count(r: int) -> int:
    nb, ng = free_shape(r)
    return 1 + nb + ng


def prefix_length(r: int) -> int:
    """Index of the first tail angle: r for even r, r+1 for odd."""
    return r if r % 2 == 0 else r + 1


def _beta_dd(p: ReducedParams) -> dd.DD:
    m = p.n // 2
    if p.r == 0:
        return (dd.HALF_PI - dd.DD(p.alpha)) / dd.DD(float(m - 1))
    s = dd.DD(p.alpha)
    for b in p.betas:
        s = s + dd.DD(2.0 * b)
    tail = m - p.r - 1 if p.r % 2 == 0 else m - p.r
    return (dd.HALF_PI - s) / dd.DD(float(tail))


def solve_beta(p: ReducedParams) -> float:
    """Tail angle from the quarter-turn angle sum; linear in the inputs."""
    beta = _beta_dd(p).to_float()
    if not 0.0 < beta < _THETA_MAX:
        raise ValueError(f"derived tail angle {beta:.6f} outside (0, pi/3)")
    return beta


def _prefix_angles(p: ReducedParams, beta: float, gamma_last: float) -> list[float]:
    th = [p.alpha]
    bs = list(p.betas) + ([beta] if p.r % 2 else [])
    gs = list(p.gammas_free) + [gamma_last]
    for b, g in zip(bs, gs):
        th.append(b + g)
        th.append(b - g)
    return th


def closure_residual(p: ReducedParams, beta: float, gamma_last: float) -> float:
    """Chain-midpoint condition expressed through the varying prefix.

    Summing the constant-angle tail in closed form reduces x_{n/2-1} = +-1/2
    to: (x after the prefix) + sin(phi - beta/2) / (2 cos(beta/2)) = 0.
    """
    rp = prefix_length(p.r)
    th = _prefix_angles(p, beta, gamma_last)
    s = 0.0
    x = 0.0
    for j in range(rp):
        s += th[j]
        x += math.sin(s) if j % 2 == 0 else -math.sin(s)
    phi = s + th[rp]
    return x + math.sin(phi - beta / 2) / (2.0 * math.cos(beta / 2))


def solve_gamma_last(p: ReducedParams) -> float:
    """Final asymmetry from the closure condition, by bracketed root finding.

    The bracket [-pi/n, pi/n] is deliberately wider than the feasible box
    [0, pi/n]: a negative root is located reliably and the caller treats it
    as an infeasibility signal rather than a hard failure.
    """
    if p.r == 0:
        raise ValueError("r = 0 has no asymmetry parameter to derive")
    if p.beta_derived is None:
        raise ValueError("derive the tail angle first")
    beta = p.beta_derived
    f = lambda g: closure_residual(p, beta, g)
    lo, hi = -math.pi / p.n, math.pi / p.n
    gamma = brentq(f, lo, hi, rtol=1e-15)
    res = f(gamma)
    if abs(res) > CLOSURE_RESIDUAL_TOL:
        raise BracketError(
            f"closure residual {res:.3e} above {CLOSURE_RESIDUAL_TOL:.0e} at root"
        )
    return gamma


def derive(p: ReducedParams) -> ReducedParams:
    """Fill in the two derived parameters."""
    p = replace(p, beta_derived=solve_beta(p))
    if p.r > 0:
        p = replace(p, gamma_last_derived=solve_gamma_last(p))
    return p


def expand_angles(p: ReducedParams) -> AngleVector:
    """The full n/2 turning angles of the construction."""
    if p.beta_derived is None:
        raise ValueError("derive the parameters before expanding")
    if p.r > 0 and p.gamma_last_derived is None:
        raise ValueError("derive the parameters before expanding")
    m = p.n // 2
    beta = p.beta_derived
    if p.r == 0:
        th = [p.alpha] + [beta] * (m - 1)
    else:
        th = _prefix_angles(p, beta, p.gamma_last_derived)
        th += [beta] * (m - len(th))
    for k, t in enumerate(th):
        hi = math.pi / 6 if k == 0 else _THETA_MAX
        if not -1e-12 <= t <= hi + 1e-12:
            raise ValueError(f"expanded angle theta_{k} = {t:.6f} outside [0, {hi:.6f}]")
    return AngleVector(p.n, tuple(th))


def phi_state(p: ReducedParams) -> PhiState:
    """Turn and position after the varying prefix (r steps, r+1 when odd)."""
    if p.beta_derived is None:
        raise ValueError("derive the parameters before querying the prefix state")
    rp = prefix_length(p.r)
    if p.r == 0:
        return PhiState(phi=p.alpha, x=0.0, y=0.0)
    th = _prefix_angles(p, p.beta_derived, p.gamma_last_derived)
    s = 0.0
    x = 0.0
    y = 0.0
    for j in range(rp):
        s += th[j]
        sign = 1.0 if j % 2 == 0 else -1.0
        x += sign * math.sin(s)
        y += sign * math.cos(s)
    return PhiState(phi=s + th[rp], x=x, y=y)


def reduced_area(p: ReducedParams) -> float:
    """Polygon area in closed form; evaluation cost independent of n.

    The constant-angle tail contributes (n/2 - prefix - 1) copies of
    sin(beta) - tan(beta/2) plus one correction term built from the prefix
    state; the prefix contributes its own triangle areas.  For r = 0 the
    value is the polygon area only at the closure point alpha = beta/2.
    """
    if p.beta_derived is None:
        raise ValueError("derive the parameters before evaluating the area")
    return _area_terms(p)[0]


def area_deficit(p: ReducedParams) -> float:
    """pi/4 - area - 5 pi^3 / 48 n^2, accumulated in double-double.

    The plain double area is accurate to about 1e-16, which is exactly the
    scale of the deficit's own 1/n^3 term at n ~ 50000; compensated
    accumulation of the same closed form keeps the deficit meaningful there.
    """
    if p.beta_derived is None:
        raise ValueError("derive the parameters before evaluating the deficit")
    _, acc = _area_terms(p)
    n = p.n
    pi3 = dd.PI * dd.PI * dd.PI
    corr = pi3 * dd.DD(5.0) / dd.DD(float(48 * n * n))
    return (dd.QUARTER_PI - acc - corr).to_float()


def _area_terms(p: ReducedParams) -> tuple[float, dd.DD]:
    """Area both as a plain double and as a compensated accumulation."""
    m = p.n // 2
    beta_dd = _beta_dd(p)
    beta = beta_dd.to_float()
    rp = prefix_length(p.r)
    tail_count = m - rp - 1 if p.r > 0 else m - 1
    v = dd.sin_minus_half_tan(beta_dd)

    if p.r == 0:
        acc = v * dd.DD(float(tail_count)) + dd.DD(math.sin(p.alpha))
        acc = acc + dd.DD(-0.5 * math.tan(beta / 2))
        return acc.to_float(), acc

    th = _prefix_angles(p, beta, p.gamma_last_derived)
    s = 0.0
    xs = [0.0]
    ys = [0.0]
    for j in range(rp + 1):
        s += th[j]
        sign = 1.0 if j % 2 == 0 else -1.0
        xs.append(xs[-1] + sign * math.sin(s))
        ys.append(ys[-1] + sign * math.cos(s))
    phi = s
    triangles = math.sin(p.alpha)
    for k in range(2, rp + 1):
        triangles += xs[k + 1] * ys[k - 1] - ys[k + 1] * xs[k - 1]
    correction = (xs[rp] * math.sin(phi) + ys[rp] * math.cos(phi) + 0.5) * math.tan(beta / 2)
    acc = v * dd.DD(float(tail_count)) + dd.DD(triangles) + dd.DD(-correction)
    return acc.to_float(), acc


# ---------------------------------------------------------------------------
# optimization over the free parameters
# ---------------------------------------------------------------------------

def parameter_bounds(n: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    nb, ng = free_shape(r)
    lo = np.array([math.pi / (2 * n - 2)] + [math.pi / n] * nb + [0.0] * ng)
    hi = np.array([math.pi / n] + [2 * math.pi / n] * nb + [math.pi / n] * ng)
    return lo, hi


def params_from_vector(n: int, r: int, vec) -> ReducedParams:
    nb, ng = free_shape(r)
    vec = [float(v) for v in vec]
    if len(vec) != 1 + nb + ng:
        raise ValueError(f"expected {1 + nb + ng} free parameters, got {len(vec)}")
    return ReducedParams(
        n=n,
        r=r,
        alpha=vec[0],
        betas=tuple(vec[1 : 1 + nb]),
        gammas_free=tuple(vec[1 + nb :]),
    )


def params_to_vector(p: ReducedParams) -> np.ndarray:
    return np.array([p.alpha, *p.betas, *p.gammas_free])


def start_vector(n: int, r: int) -> np.ndarray:
    """Scaled asymptotic limits as the initial point; best prior available."""
    nb, ng = free_shape(r)
    row = coeff_row(min(r, MAX_TABULATED_R))
    a = row.a if row.a is not None else 0.6587
    bs = list(row.b[:nb]) + [1.0] * max(0, nb - len(row.b))
    cs = list(row.c[:ng]) + [1e-6] * max(0, ng - len(row.c))
    scale = math.pi / n
    return np.array([a * scale] + [b * scale for b in bs] + [c * scale for c in cs])


def objective(n: int, r: int, vec) -> float:
    """Area of the candidate, or a graded penalty when derivation fails."""
    try:
        p = params_from_vector(n, r, vec)
        p = derive(p)
    except (ValueError, BracketError):
        return _PENALTY - float(np.sum(np.abs(vec)))
    return reduced_area(p)


def construct_Q(
    n: int,
    r: int,
    *,
    multistart: int = 8,
    seed: int = 0,
    tol: float = 1e-8,
    max_iter: int = 300,
    allow_large_r: bool = False,
) -> tuple[SmallPolygon, AreaReport, ReducedParams]:
    """Best polygon of the r-parameter family for the given n.

    ``multistart`` counts the jittered restarts added to the deterministic
    start at the scaled asymptotic limits.  r above 16 has no tabulated start
    or golden values and must be enabled explicitly.
    """
    if n % 2 != 0 or n < 6:
        raise ValueError(f"n must be even and >= 6, got {n}")
    if r < 0 or n < 2 * r + 4:
        raise ValueError(f"need n >= 2r + 4 with r >= 0, got n = {n}, r = {r}")
    if r > MAX_TABULATED_R and not allow_large_r:
        raise ValueError(
            f"r = {r} exceeds the tabulated range ({MAX_TABULATED_R}); "
            "pass allow_large_r=True to proceed without golden values"
        )

    if r == 0:
        params = derive(ReducedParams(n=n, r=0, alpha=math.pi / (2 * n - 2)))
        polygon = vertices_from_angles(expand_angles(params))
        return polygon, validate(polygon), params

    lo, hi = parameter_bounds(n, r)
    problem = BoxProblem(
        lower=tuple(lo),
        upper=tuple(hi),
        objective=lambda v: objective(n, r, v),
        tol=tol,
        max_iter=max_iter,
        multistart_seeds=tuple(range(seed, seed + multistart)),
    )
    best, value, diag = maximize_box(problem, start_vector(n, r))
    if value <= _PENALTY:
        raise InfeasibleError(
            f"no feasible point found for n = {n}, r = {r}; best value {value:.3e}",
            diag,
        )
    params = derive(params_from_vector(n, r, best))
    polygon = vertices_from_angles(expand_angles(params))
    return polygon, validate(polygon), params


def theorem_r(n: int) -> int:
    """Family size used for the headline construction at each n."""
    return n // 2 - 2 if n <= 34 else 16


def construct_Q_theorem(
    n: int,
    *,
    multistart: int = 2,
    seed: int = 0,
    tol: float = 1e-8,
    max_iter: int = 300,
    full_result: bool = False,
):
    """The headline polygon: r = n/2 - 2 up to n = 34, r = 16 beyond."""
    if n % 2 != 0 or n < 6:
        raise ValueError(f"n must be even and >= 6, got {n}")
    polygon, report, params = construct_Q(
        n, theorem_r(n), multistart=multistart, seed=seed, tol=tol, max_iter=max_iter
    )
    if full_result:
        return polygon, report, params
    return polygon, report
