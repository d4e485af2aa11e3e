"""Finite-rank transfer-operator matrices on vector-valued Bergman spaces.

Per disk D_b the orthonormal basis is e_k(z) = sqrt((k+1)/pi) r_b^{-1}
((z-c_b)/r_b)^k, k < N, so the Frobenius norm of the truncated matrix is the
Hilbert-Schmidt norm of the truncated operator. Entries are extracted by
sampling each summand on an interior circle and taking discrete Fourier
coefficients; uniform contraction makes this spectrally accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .reps import UnitaryRep, trivial_rep
from .schottky import Disk, Partition, SchottkyGroup, Word

DEFAULT_N = 16
MAX_N = 128
SAMPLING_RADIUS = 0.75
DEFAULT_RADIAL_ORDER = 24
DEFAULT_ANGULAR_ORDER = 48


class QuadratureError(RuntimeError):
    """Raised when refinement fails to stabilize an integral."""


def bergman_kernel(disk: Disk, z: complex, w: complex) -> complex:
    """Reproducing kernel of the Bergman space of one disk (area measure)."""
    r2 = disk.radius**2
    den = r2 - (z - disk.center) * (np.conjugate(w) - disk.center)
    if den == 0:
        raise ZeroDivisionError("Bergman kernel denominator vanishes on the boundary")
    return r2 / (math.pi * den**2)


@dataclass(frozen=True)
class TransferMatrix:
    """Block matrix of a (refined) twisted transfer operator truncation.

    Row/column index layout: (disk letter, basis index k, rep index v) packed
    as ((letter-1) * N + k) * dim_rho + v.
    """

    matrix: np.ndarray
    group: SchottkyGroup
    words: tuple[Word, ...]
    s: complex
    rep_label: str
    rep_dim: int
    n_basis: int
    mode: str  # "standard" or "refined"
    tau: float | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def block(self, target: int, source: int) -> np.ndarray:
        n = self.n_basis * self.rep_dim
        return self.matrix[(target - 1) * n : target * n, (source - 1) * n : source * n]


def _word_coefficients(
    group: SchottkyGroup, w: Word, b: int, s: complex, n_basis: int, sampling_radius: float
) -> np.ndarray:
    """N x N scalar coefficient matrix of f |-> g_w'(.)^s f(g_w .) from disk
    D_{w[0]} (source basis) into D_b (target basis)."""
    n_samp = 4 * n_basis
    theta = 2.0 * np.pi * np.arange(n_samp) / n_samp
    target = group.disk(b)
    source = group.disk(w[0])
    zs = target.center + sampling_radius * target.radius * np.exp(1j * theta)

    g = group.word_matrix(w)
    c, d = float(g.c), float(g.d)
    den = c * zs + d
    images = (float(g.a) * zs + float(g.b)) / den
    deriv = 1.0 / den**2
    if np.any((deriv.imag == 0.0) & (deriv.real <= 0.0)):
        raise ValueError("derivative on the branch cut during assembly")
    power = np.exp(s * (np.log(np.abs(deriv)) + 1j * np.angle(deriv)))

    u = (images - source.center) / source.radius
    ks = np.arange(n_basis)
    source_scale = np.sqrt((ks + 1) / np.pi) / source.radius          # basis normalization
    target_scale = target.radius * np.sqrt(np.pi / (ks + 1))          # inverse normalization
    radial = sampling_radius ** ks

    # columns: operator applied to each source basis element, Taylor-expanded
    samples = power[:, None] * source_scale[None, :] * u[:, None] ** ks[None, :]
    coef = np.fft.fft(samples, axis=0)[:n_basis, :] / n_samp
    return (coef / radial[:, None]) * target_scale[:, None]


def assemble_pairs(
    group: SchottkyGroup,
    pairs: list[tuple[Word, int]],
    s: complex,
    rep: UnitaryRep | None = None,
    n_basis: int = DEFAULT_N,
    mode: str = "standard",
    tau: float | None = None,
    sampling_radius: float = SAMPLING_RADIUS,
) -> TransferMatrix:
    """Matrix of the operator summing g_w'(z)^s rho(g_w)^{-1} f(g_w z) over
    the given (word, target letter) pairs, acting on z in the target disk."""
    if n_basis < 1:
        raise ValueError("n_basis must be >= 1")
    if n_basis > MAX_N:
        raise ValueError(f"n_basis {n_basis} exceeds cap {MAX_N}")
    rep = rep if rep is not None else trivial_rep(group)
    d = rep.dim
    n = n_basis * d
    dim = 2 * group.m * n
    matrix = np.zeros((dim, dim), dtype=complex)
    for w, b in sorted(pairs):
        if not w:
            raise ValueError("transfer operator words must be nonempty")
        if w[-1] == group.bar(b):
            raise ValueError(f"word {w} cannot act on disk {b}: image leaves the disks")
        rho_inv = rep.inverse_image(w)
        coef = _word_coefficients(group, w, b, s, n_basis, sampling_radius)
        block = np.kron(coef, rho_inv)
        r0 = (b - 1) * n
        c0 = (w[0] - 1) * n
        matrix[r0 : r0 + n, c0 : c0 + n] += block
    return TransferMatrix(
        matrix=matrix,
        group=group,
        words=tuple(sorted({w for w, _ in pairs})),
        s=s,
        rep_label=rep.label,
        rep_dim=d,
        n_basis=n_basis,
        mode=mode,
        tau=tau,
    )


def assemble(
    group: SchottkyGroup,
    words: list[Word],
    s: complex,
    rep: UnitaryRep | None = None,
    n_basis: int = DEFAULT_N,
    mode: str = "standard",
    tau: float | None = None,
    sampling_radius: float = SAMPLING_RADIUS,
) -> TransferMatrix:
    """Each word acts on every admissible target disk (w -> b)."""
    pairs = [(w, b) for w in words for b in group.alphabet if not w or w[-1] != group.bar(b)]
    if any(not w for w in words):
        raise ValueError("transfer operator words must be nonempty")
    return assemble_pairs(group, pairs, s, rep, n_basis, mode, tau, sampling_radius)


def assemble_standard(
    group: SchottkyGroup,
    s: complex,
    rep: UnitaryRep | None = None,
    n_basis: int = DEFAULT_N,
    sampling_radius: float = SAMPLING_RADIUS,
) -> TransferMatrix:
    words = [(a,) for a in group.alphabet]
    return assemble(group, words, s, rep, n_basis, mode="standard", sampling_radius=sampling_radius)


def assemble_refined(
    group: SchottkyGroup,
    partition: Partition,
    s: complex,
    rep: UnitaryRep | None = None,
    n_basis: int = DEFAULT_N,
    sampling_radius: float = SAMPLING_RADIUS,
) -> TransferMatrix:
    return assemble_pairs(
        group, partition.pairs, s, rep, n_basis,
        mode="refined", tau=partition.tau, sampling_radius=sampling_radius,
    )


def hs_norm_matrix(tm: TransferMatrix) -> float:
    """Frobenius norm of the truncation; oracle for the kernel-integral path."""
    return float(np.linalg.norm(tm.matrix))


# -- Hilbert-Schmidt norm via kernel integrals ---------------------------------


@dataclass(frozen=True)
class HSRecord:
    value: float
    tau: float
    s: complex
    rep_label: str
    radial_order: int
    angular_order: int
    pair_integrals: dict[tuple[int, Word, Word], complex] | None = None


def pair_integrals(
    group: SchottkyGroup,
    partition: Partition,
    s: complex,
    radial_order: int = DEFAULT_RADIAL_ORDER,
    angular_order: int = DEFAULT_ANGULAR_ORDER,
) -> dict[tuple[int, Word, Word], complex]:
    """The integrals I_{a,b}^{(b)} over each target disk, polar tensor rule.

    Pairs whose images land in different source disks are dropped (the
    Bergman kernel of a disjoint union vanishes across components).
    """
    if radial_order < 4:
        raise ValueError("radial quadrature order must be >= 4")
    nodes, weights = np.polynomial.legendre.leggauss(radial_order)
    out: dict[tuple[int, Word, Word], complex] = {}
    phis = 2.0 * np.pi * np.arange(angular_order) / angular_order
    for b in group.alphabet:
        disk = group.disk(b)
        rs = 0.5 * disk.radius * (nodes + 1.0)
        wr = 0.5 * disk.radius * weights * rs          # includes the polar Jacobian r
        wphi = 2.0 * np.pi / angular_order
        zgrid = disk.center + rs[:, None] * np.exp(1j * phis)[None, :]
        zflat = zgrid.ravel()
        warr = (wr[:, None] * np.full((1, angular_order), wphi)).ravel()

        arrows = sorted(w for w, t in partition.pairs if t == b)
        cache = {}
        for w in arrows:
            g = group.word_matrix(w)
            den = float(g.c) * zflat + float(g.d)
            deriv = 1.0 / den**2
            power = np.exp(s * (np.log(np.abs(deriv)) + 1j * np.angle(deriv)))
            imgs = (float(g.a) * zflat + float(g.b)) / den
            cache[w] = (power, imgs)
        for wa in arrows:
            pa, ia = cache[wa]
            for wb in arrows:
                if wa[0] != wb[0]:
                    continue  # images in different disks: kernel vanishes
                pb, ib = cache[wb]
                src = group.disk(wa[0])
                r2 = src.radius**2
                den = r2 - (ia - src.center) * (np.conjugate(ib) - src.center)
                kernel = r2 / (math.pi * den**2)
                out[(b, wa, wb)] = complex(np.sum(pa * np.conjugate(pb) * kernel * warr))
    return out


def hs_norm_integral(
    group: SchottkyGroup,
    partition: Partition,
    s: complex,
    rep: UnitaryRep | None = None,
    radial_order: int = DEFAULT_RADIAL_ORDER,
    angular_order: int = DEFAULT_ANGULAR_ORDER,
    check_convergence: bool = True,
    keep_pairs: bool = False,
) -> HSRecord:
    """||L||_HS^2 summed from tr(rho(g_a^{-1} g_b)) I_{a,b}^{(b)} pair terms.

    Returns the record with value = the squared Hilbert-Schmidt norm.
    """
    rep = rep if rep is not None else trivial_rep(group)

    def total(q_r: int, q_a: int) -> tuple[float, dict]:
        ints = pair_integrals(group, partition, s, q_r, q_a)
        trace_cache: dict[tuple[Word, Word], complex] = {}
        acc = 0.0 + 0.0j
        for (b, wa, wb), val in ints.items():
            key = (wa, wb)
            if key not in trace_cache:
                trace_cache[key] = complex(np.trace(rep.inverse_image(wa) @ rep.image(wb)))
            acc += trace_cache[key] * val
        return acc.real, ints

    value, ints = total(radial_order, angular_order)
    if check_convergence:
        refined, _ = total(2 * radial_order, 2 * angular_order)
        if abs(refined - value) > 1e-6 * max(1.0, abs(refined)):
            raise QuadratureError(
                f"HS integral not converged: {value} vs {refined} at doubled order"
            )
        value = refined
    if value < 0:
        raise QuadratureError(f"negative squared HS norm {value}")
    return HSRecord(
        value=value,
        tau=partition.tau,
        s=s,
        rep_label=rep.label,
        radial_order=radial_order,
        angular_order=angular_order,
        pair_integrals=ints if keep_pairs else None,
    )
