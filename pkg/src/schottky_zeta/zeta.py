"""Selberg zeta functions via Fredholm determinants and Euler products,
zero location/counting, and the limit-set dimension delta."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .reps import UnitaryRep, trivial_rep
from .schottky import Partition, SchottkyGroup, Word
from .transfer import DEFAULT_N, assemble_refined, assemble_standard


class ConvergenceError(RuntimeError):
    pass


class SymmetryError(RuntimeError):
    """Determinant failed to be numerically real on the real axis."""


# -- primitive conjugacy classes ------------------------------------------------


@dataclass(frozen=True)
class PrimitiveClass:
    """One conjugacy class of primitive hyperbolic elements.

    The representative is the lexicographically minimal rotation of a
    cyclically reduced word; the geodesic length comes from the standard
    displacement identity l = 2 arccosh(|tr|/2).
    """

    word: Word
    trace: int
    length: float


def _cyclic_words(group: SchottkyGroup, n: int):
    for w in group.words_of_length(n):
        if n > 1 and w[-1] == group.bar(w[0]):
            continue
        if n == 1 or all(w <= w[i:] + w[:i] for i in range(1, n)):
            yield w


def _is_primitive(w: Word) -> bool:
    n = len(w)
    return all(not (n % d == 0 and w == w[:d] * (n // d)) for d in range(1, n))


def primitive_classes(group: SchottkyGroup, len_max: int) -> list[PrimitiveClass]:
    """One representative per primitive class, word length <= len_max."""
    out = []
    for n in range(1, len_max + 1):
        for w in _cyclic_words(group, n):
            if not _is_primitive(w):
                continue
            tr = abs(group.word_matrix(w).trace())
            if tr <= 2:
                raise ConvergenceError(f"non-hyperbolic class {w} with |trace| {tr}")
            out.append(PrimitiveClass(word=w, trace=tr, length=2.0 * math.acosh(tr / 2.0)))
    return out


def euler_product(
    group: SchottkyGroup,
    s: complex,
    rep: UnitaryRep | None = None,
    len_max: int = 8,
    tail_tol: float = 1e-10,
) -> complex:
    """Truncated product over primitive classes; valid for Re s > delta.

    Raises ConvergenceError when the geometric tail estimate at len_max
    exceeds tail_tol.
    """
    rep = rep if rep is not None else trivial_rep(group)
    sigma = s.real
    classes = primitive_classes(group, max(len_max, 1)) if len_max >= 1 else []
    if len_max >= 1:
        ell_min = min(c.length for c in classes if len(c.word) == 1)
        q = (2 * group.m - 1) * math.exp(-sigma * ell_min)
        if q >= 1 or 2 * group.m * q ** (len_max + 1) / (1 - q) > tail_tol:
            raise ConvergenceError(
                f"Euler product tail not below {tail_tol} at len_max={len_max}, Re s={sigma}"
            )
    total = 1.0 + 0.0j
    eye = np.eye(rep.dim, dtype=complex)
    for cls in classes:
        if len(cls.word) > len_max:
            continue
        rho = rep.image(cls.word)
        k = 0
        while True:
            f = cmath.exp(-(s + k) * cls.length)
            if abs(f) < 1e-16:
                break
            total *= complex(np.linalg.det(eye - rho * f)) if rep.dim > 1 else (1.0 - rho[0, 0] * f)
            k += 1
    return total


# -- Fredholm determinants ------------------------------------------------------


def zeta_det(
    group: SchottkyGroup,
    s: complex,
    rep: UnitaryRep | None = None,
    n_basis: int = DEFAULT_N,
) -> complex:
    """det(1 - L_{s,rho}) of the truncated standard transfer operator."""
    tm = assemble_standard(group, s, rep, n_basis)
    return complex(np.linalg.det(np.eye(tm.dim) - tm.matrix))


def refined_zeta(
    group: SchottkyGroup,
    partition: Partition,
    s: complex,
    rep: UnitaryRep | None = None,
    n_basis: int = DEFAULT_N,
) -> complex:
    """det(1 - L_{tau,s,rho}^2) of the truncated refined transfer operator."""
    tm = assemble_refined(group, partition, s, rep, n_basis)
    m2 = tm.matrix @ tm.matrix
    return complex(np.linalg.det(np.eye(tm.dim) - m2))


def leading_eigenvalue(group: SchottkyGroup, s: float, n_basis: int = DEFAULT_N) -> float:
    tm = assemble_standard(group, s, None, n_basis)
    return float(np.max(np.abs(np.linalg.eigvals(tm.matrix))))


# -- delta ----------------------------------------------------------------------


def delta_bisection(
    group: SchottkyGroup,
    tol: float = 1e-8,
    n_basis: int = DEFAULT_N,
    bracket: tuple[float, float] = (1e-3, 0.999),
) -> float:
    """Dimension of the limit set: the s with leading eigenvalue of L_s = 1."""
    lo, hi = bracket
    if leading_eigenvalue(group, lo, n_basis) < 1.0 or leading_eigenvalue(group, hi, n_basis) > 1.0:
        raise ConvergenceError(f"bisection bracket {bracket} does not straddle delta")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if leading_eigenvalue(group, mid, n_basis) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def delta_from_zeta(
    group: SchottkyGroup,
    tol: float = 1e-8,
    n_basis: int = DEFAULT_N,
    bracket: tuple[float, float] = (1e-3, 0.999),
    grid: int = 64,
) -> float:
    """Largest real zero of det(1 - L_s), by sign scan plus bisection."""
    xs = np.linspace(bracket[0], bracket[1], grid)
    vals = [zeta_det(group, float(x), None, n_basis).real for x in xs]
    for i in range(grid - 2, -1, -1):
        if vals[i] == 0.0:
            return float(xs[i])
        if vals[i] * vals[i + 1] < 0:
            lo, hi = float(xs[i]), float(xs[i + 1])
            flo = vals[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fmid = zeta_det(group, mid, None, n_basis).real
                if flo * fmid <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            return 0.5 * (lo + hi)
    raise ConvergenceError("no real determinant zero found in the bracket")


def delta(group: SchottkyGroup, tol: float = 1e-8, n_basis: int = DEFAULT_N) -> float:
    """delta by eigenvalue bisection, cross-checked against the zeta zero."""
    d1 = delta_bisection(group, tol, n_basis)
    d2 = delta_from_zeta(group, tol, n_basis)
    if abs(d1 - d2) > 10 * tol:
        raise ConvergenceError(f"delta methods disagree: {d1} vs {d2} (tol {tol})")
    return d1


# -- zero counting ---------------------------------------------------------------


@dataclass(frozen=True)
class ZeroReport:
    rep_label: str
    region: tuple[float, float] | tuple[complex, complex]
    zeros: list[tuple[complex, int]]
    n_basis: int
    tol: float
    tau: float | None = None
    metadata: dict = field(default_factory=dict)

    def total_count(self) -> int:
        return sum(mult for _, mult in self.zeros)

    def as_dict(self) -> dict:
        return {
            "rep": self.rep_label,
            "region": [str(r) for r in self.region],
            "zeros": [
                {"re_s": z.real, "im_s": z.imag, "multiplicity": m, "lambda": (z * (1 - z)).real}
                for z, m in self.zeros
            ],
            "n_basis": self.n_basis,
            "tol": self.tol,
            "tau": self.tau,
            **self.metadata,
        }


class BoundaryZeroError(RuntimeError):
    pass


def count_zeros_rect(
    group: SchottkyGroup,
    rep: UnitaryRep | None,
    rect: tuple[complex, complex],
    n_basis: int = DEFAULT_N,
    samples_per_edge: int = 16,
    max_refinements: int = 6,
    boundary_floor: float = 1e-13,
) -> int:
    """Winding number of det(1 - L_s) along a rectangle boundary.

    rect = (lower-left, upper-right). Sampling is refined adaptively until
    consecutive phase increments stay below pi/2.
    """
    z0, z1 = rect
    corners = [z0, complex(z1.real, z0.imag), z1, complex(z0.real, z1.imag)]

    def boundary(n_per_edge: int) -> np.ndarray:
        pts = []
        for i in range(4):
            a, b = corners[i], corners[(i + 1) % 4]
            for t in np.arange(n_per_edge) / n_per_edge:
                pts.append(a + t * (b - a))
        return np.array(pts)

    cache: dict[complex, complex] = {}

    def f(s: complex) -> complex:
        if s not in cache:
            cache[s] = zeta_det(group, s, rep, n_basis)
        return cache[s]

    n = samples_per_edge
    for _ in range(max_refinements):
        pts = boundary(n)
        vals = np.array([f(complex(p)) for p in pts])
        if np.min(np.abs(vals)) < boundary_floor:
            raise BoundaryZeroError("determinant vanishes on the rectangle boundary")
        phases = np.angle(vals)
        inc = np.diff(np.concatenate([phases, phases[:1]]))
        inc = (inc + np.pi) % (2 * np.pi) - np.pi
        if np.max(np.abs(inc)) < np.pi / 2:
            w = float(np.sum(inc) / (2 * np.pi))
            count = round(w)
            if abs(w - count) > 0.25:
                raise ConvergenceError(f"non-integral winding number {w}")
            return count
        n *= 2
    raise ConvergenceError("winding number did not stabilize under refinement")


def _multiplicity_circle(
    group: SchottkyGroup,
    rep: UnitaryRep | None,
    center: complex,
    radius: float,
    n_basis: int,
    samples: int = 32,
    max_refinements: int = 5,
) -> int:
    n = samples
    for _ in range(max_refinements):
        thetas = 2 * np.pi * np.arange(n) / n
        vals = np.array(
            [zeta_det(group, complex(center + radius * np.exp(1j * t)), rep, n_basis) for t in thetas]
        )
        phases = np.angle(vals)
        inc = np.diff(np.concatenate([phases, phases[:1]]))
        inc = (inc + np.pi) % (2 * np.pi) - np.pi
        if np.max(np.abs(inc)) < np.pi / 2:
            return round(float(np.sum(inc) / (2 * np.pi)))
        n *= 2
    raise ConvergenceError("multiplicity circle did not stabilize")


def real_zeros(
    group: SchottkyGroup,
    rep: UnitaryRep | None,
    lo: float,
    hi: float,
    tol: float = 1e-6,
    n_basis: int = DEFAULT_N,
    grid: int = 200,
    im_rel_tol: float = 1e-8,
) -> ZeroReport:
    """All real zeros of det(1 - L_{s,rho}) in [lo, hi] with multiplicity.

    Sign changes are bisected; sign-preserving dips (even multiplicity) are
    picked up by minimizing |det| at interior local minima. Each candidate is
    confirmed and graded by the argument principle on a circle of radius
    5 * tol.
    """
    rep_label = rep.label if rep is not None else "trivial"
    xs = np.linspace(lo, hi, grid)
    vals = []
    for x in xs:
        v = zeta_det(group, float(x), rep, n_basis)
        if abs(v.imag) > im_rel_tol * (1.0 + abs(v)):
            raise SymmetryError(f"determinant not numerically real at s={x}: {v}")
        vals.append(v.real)
    vals = np.array(vals)

    candidates: list[float] = []
    for i in range(grid - 1):
        if vals[i] == 0.0:
            candidates.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0:
            a, b = float(xs[i]), float(xs[i + 1])
            fa = vals[i]
            while b - a > tol / 4:
                midp = 0.5 * (a + b)
                fm = zeta_det(group, midp, rep, n_basis).real
                if fa * fm <= 0:
                    b = midp
                else:
                    a, fa = midp, fm
            candidates.append(0.5 * (a + b))

    # interior local minima of |det| without a sign change: even-order zeros
    absvals = np.abs(vals)
    for i in range(1, grid - 1):
        if absvals[i] < absvals[i - 1] and absvals[i] < absvals[i + 1] and vals[i - 1] * vals[i + 1] > 0:
            a, b = float(xs[i - 1]), float(xs[i + 1])
            for _ in range(60):
                if b - a < tol / 4:
                    break
                m1 = a + (b - a) / 3
                m2 = b - (b - a) / 3
                if abs(zeta_det(group, m1, rep, n_basis)) < abs(zeta_det(group, m2, rep, n_basis)):
                    b = m2
                else:
                    a = m1
            x_min = 0.5 * (a + b)
            if abs(zeta_det(group, x_min, rep, n_basis)) < math.sqrt(tol):
                candidates.append(x_min)

    zeros: list[tuple[complex, int]] = []
    for x in sorted(candidates):
        if zeros and abs(x - zeros[-1][0].real) < 5 * tol:
            continue
        mult = _multiplicity_circle(group, rep, complex(x), 5 * tol, n_basis)
        if mult >= 1:
            zeros.append((complex(x), mult))
    return ZeroReport(
        rep_label=rep_label, region=(lo, hi), zeros=zeros, n_basis=n_basis, tol=tol
    )


def new_eigenvalue_count(
    group: SchottkyGroup,
    p: int,
    sigma: float,
    tol: float = 1e-5,
    n_basis: int = DEFAULT_N,
    delta_value: float | None = None,
) -> int:
    """Number of zeros of Z(., lambda_p^0) in [sigma, delta], with multiplicity."""
    from .congruence import rep_lambda_p0, surjective_mod_p

    if not surjective_mod_p(group, p):
        raise ValueError(f"reduction mod {p} is not surjective; the induced-rep count is invalid")
    d = delta_value if delta_value is not None else delta(group, tol=min(tol, 1e-6), n_basis=n_basis)
    if sigma > d:
        return 0
    rep = rep_lambda_p0(group, p)
    report = real_zeros(group, rep, sigma, d + 2 * tol, tol=tol, n_basis=n_basis)
    return report.total_count()
