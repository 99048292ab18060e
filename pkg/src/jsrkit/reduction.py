"""Irreducibility, common invariant subspaces, and block triangularization.

A family is irreducible exactly when the unital algebra it generates is
the full d x d matrix algebra, so irreducibility testing is a span-closure
computation.  Reducible families are repeatedly split along invariant
subspaces into a lower-block-triangular form whose diagonal blocks are
irreducible; the block with the largest joint spectral radius carries the
whole family's growth rate.

Subspace invariance uses the row-vector convention (x maps to x S_k);
transpose the family for the column convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import extremal
from .bounds import BoundsBracket, bounds_bracket
from .config import DEFAULT_NODE_BUDGET, INVARIANCE_TOL, RANK_TOL
from .matrix_core import MatrixFamily


class ToleranceConflictError(RuntimeError):
    """Numerical decisions contradict each other near the rank tolerance."""


@dataclass(frozen=True)
class AlgebraResult:
    dimension: int
    basis: list[np.ndarray] = field(repr=False)
    uncertain: bool = False
    worst_ratio: float = float("inf")  # rejected/accepted ratio closest to the tolerance


def algebra_closure(family: MatrixFamily) -> AlgebraResult:
    """Dimension and basis of the unital algebra generated by the family.

    Span closure from {I, S_1, ..., S_K} under right-multiplication by the
    generators; rank decisions are made against an orthonormal basis of
    flattened matrices with relative tolerance RANK_TOL.
    """
    d = family.dim
    scale = family.scale
    gens = [family.mats[k] / (scale if scale > 0 else 1.0)
            for k in range(family.size)]
    ortho: list[np.ndarray] = []
    basis: list[np.ndarray] = []
    uncertain = False
    worst = float("inf")
    queue: list[np.ndarray] = [np.eye(d, dtype=np.complex128)] + gens
    while queue and len(basis) < d * d:
        cand = queue.pop(0)
        cnorm = float(np.linalg.norm(cand))
        if cnorm <= 1e-300:
            continue
        v = cand.ravel() / cnorm
        for q in ortho:  # two Gram-Schmidt sweeps for stability
            v = v - (np.vdot(q, v)) * q
        for q in ortho:
            v = v - (np.vdot(q, v)) * q
        ratio = float(np.linalg.norm(v))
        if RANK_TOL * 1e-2 < ratio < RANK_TOL * 1e2:
            uncertain = True
            worst = min(worst, ratio / RANK_TOL if ratio > RANK_TOL
                        else RANK_TOL / max(ratio, 1e-300))
        if ratio > RANK_TOL:
            ortho.append(v / ratio)
            basis.append(cand)
            for g in gens:
                queue.append(cand @ g)
    return AlgebraResult(len(basis), basis, uncertain, worst)


def algebra_dimension(family: MatrixFamily) -> int:
    res = algebra_closure(family)
    if res.uncertain:
        raise ToleranceConflictError(
            f"rank decision ambiguous near tolerance (gap factor {res.worst_ratio:.2g})")
    return res.dimension


def is_irreducible(family: MatrixFamily) -> bool:
    """No nontrivial common invariant subspace; equivalently the generated
    algebra has dimension d^2."""
    return algebra_dimension(family) == family.dim ** 2


def _invariance_residual(basis: np.ndarray, family: MatrixFamily) -> float:
    """max_k || proj-complement(W S_k) || relative to the family scale."""
    scale = family.scale if family.scale > 0 else 1.0
    worst = 0.0
    for k in range(family.size):
        image = basis @ family.mats[k]
        residual = image - (image @ basis.conj().T) @ basis
        worst = max(worst, float(np.linalg.norm(residual)) / scale)
    return worst


def find_invariant_subspace(family: MatrixFamily, seed: int = 0,
                            attempts: int = 8) -> np.ndarray | None:
    """Orthonormal row basis W of a proper nonzero subspace with W S_k in span(W).

    Probes left eigenvectors of seeded random algebra elements and spans
    their algebra orbits; every candidate is post-verified for invariance
    before being returned.  Returns None only when the family is
    (numerically) irreducible.
    """
    d = family.dim
    alg = algebra_closure(family)
    if alg.dimension == d * d:
        return None
    rng = np.random.default_rng(seed)

    def try_vector(v: np.ndarray) -> np.ndarray | None:
        orbit = np.stack([v] + [v @ b for b in alg.basis])
        norm = np.linalg.norm(orbit)
        if norm <= 1e-300:
            return None
        _, sv, vh = np.linalg.svd(orbit / norm)
        rank = int(np.sum(sv > RANK_TOL * sv[0]))
        if not 1 <= rank < d:
            return None
        basis = vh[:rank]
        if _invariance_residual(basis, family) <= INVARIANCE_TOL:
            return basis
        return None

    probes: list[np.ndarray] = []
    for _ in range(attempts):
        coeffs = rng.standard_normal(len(alg.basis)) + 1j * rng.standard_normal(len(alg.basis))
        probes.append(sum(c * b for c, b in zip(coeffs, alg.basis)))
    probes.extend(alg.basis)
    probes.extend(family.mats)
    for r in probes:
        try:
            eigvecs = np.linalg.eig(r.T)[1]
        except np.linalg.LinAlgError:
            continue
        for j in range(d):
            found = try_vector(eigvecs[:, j])
            if found is not None:
                return found
    raise ToleranceConflictError(
        "algebra closure says reducible but no invariant subspace verified; "
        "the family sits at the rank tolerance boundary")


@dataclass(frozen=True)
class ReductionResult:
    """Unitary similarity into lower-block-triangular form with irreducible
    diagonal blocks: transform^H S_k transform reproduces the layout."""

    family: MatrixFamily
    transform: np.ndarray = field(repr=False)  # unitary P, P^{-1} = P^H
    block_sizes: tuple[int, ...] = ()
    blocks: tuple[MatrixFamily, ...] = ()
    structure: str = "lower-block-triangular"

    @property
    def block_count(self) -> int:
        return len(self.block_sizes)

    def transformed(self) -> np.ndarray:
        p = self.transform
        return np.einsum("ij,kjl,lm->kim", p.conj().T, self.family.mats, p)

    def reconstruction_residual(self) -> float:
        """Largest off-structure entry of P^H S_k P, relative to the family scale."""
        t = self.transformed()
        scale = self.family.scale if self.family.scale > 0 else 1.0
        worst = 0.0
        starts = np.cumsum((0,) + self.block_sizes)
        for a in range(self.block_count):
            for b in range(a + 1, self.block_count):
                seg = t[:, starts[a]:starts[a + 1], starts[b]:starts[b + 1]]
                worst = max(worst, float(np.max(np.abs(seg), initial=0.0)))
        return worst / scale

    def to_json_dict(self) -> dict:
        return {
            "block_sizes": list(self.block_sizes),
            "structure": self.structure,
            "transform": _encode_complex(self.transform),
            "blocks": [[_encode_complex(m) for m in fam.mats] for fam in self.blocks],
        }


def _encode_complex(a: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(a)]


def block_triangularize(family: MatrixFamily, seed: int = 0) -> ReductionResult:
    """Recursively split along invariant subspaces until every diagonal
    block is irreducible.  The assembled transform is unitary (nested
    orthonormal completions), so it is as well-conditioned as possible."""
    d = family.dim
    if d == 1 or is_irreducible(family):
        return ReductionResult(family, np.eye(d, dtype=np.complex128),
                               (d,), (family,))
    w = find_invariant_subspace(family, seed=seed)
    if w is None:  # irreducible after all
        return ReductionResult(family, np.eye(d, dtype=np.complex128),
                               (d,), (family,))
    m = w.shape[0]
    _, _, vh = np.linalg.svd(w)
    p_inv = vh  # first m rows span the invariant subspace
    p = p_inv.conj().T
    t = np.einsum("ij,kjl,lm->kim", p_inv, family.mats, p)
    top = MatrixFamily(np.ascontiguousarray(t[:, :m, :m]))
    bottom = MatrixFamily(np.ascontiguousarray(t[:, m:, m:]))
    r_top = block_triangularize(top, seed=seed)
    r_bottom = block_triangularize(bottom, seed=seed)
    q = np.zeros((d, d), dtype=np.complex128)
    q[:m, :m] = r_top.transform
    q[m:, m:] = r_bottom.transform
    return ReductionResult(family, p @ q,
                           r_top.block_sizes + r_bottom.block_sizes,
                           r_top.blocks + r_bottom.blocks)


@dataclass(frozen=True)
class DominanceReport:
    dominant: tuple[int, ...]        # 1-based block indices
    certain: tuple[int, ...]
    ambiguous: bool
    family_bracket: BoundsBracket
    block_brackets: tuple[BoundsBracket, ...]


def dominant_blocks(result: ReductionResult, depth: int,
                    node_budget: int = DEFAULT_NODE_BUDGET) -> DominanceReport:
    """Block indices whose bounds bracket overlaps the best block bracket.

    When brackets overlap ambiguously the superset is returned with the
    ambiguity flagged.
    """
    fam_bracket = bounds_bracket(result.family, depth, node_budget)
    brackets = tuple(bounds_bracket(b, depth, node_budget) for b in result.blocks)
    best_lower = max(b.lower for b in brackets)
    tol = 1e-12 * max(1.0, best_lower)
    included = tuple(j + 1 for j, b in enumerate(brackets)
                     if b.upper >= best_lower - tol)
    certain = tuple(j + 1 for j, b in enumerate(brackets)
                    if b.lower >= best_lower - tol)
    return DominanceReport(included, certain, included != certain,
                           fam_bracket, brackets)


@dataclass(frozen=True)
class ExtremalSubspace:
    """An invariant subspace E carrying an extremal norm: the restriction
    of the family to E has the same joint spectral radius, attained as the
    max induced norm of the restricted generators."""

    status: str  # "ok", "zero", or "undetermined"
    rho_estimate: float
    basis: np.ndarray | None = field(default=None, repr=False)  # rows spanning E
    restricted_family: MatrixFamily | None = None
    certificate: "extremal.NormCertificate | None" = None
    diagnostics: str = ""

    @property
    def dim(self) -> int:
        return 0 if self.basis is None else self.basis.shape[0]


def extremal_subspace(family: MatrixFamily, depth: int,
                      probe_depth: int = 48,
                      node_budget: int = DEFAULT_NODE_BUDGET,
                      seed: int = 0) -> ExtremalSubspace:
    """Invariant subspace on which the joint spectral radius is attained
    by a norm, following the constructive restriction argument.

    Normalizes the family by the bracket lower bound; if the normalized
    semigroup looks bounded the whole space works, otherwise the search
    descends into the block triangularization and pulls the subspace back
    through the (unitary) transform.
    """
    bracket = bounds_bracket(family, depth, node_budget)
    if bracket.upper <= 1e-300:
        return ExtremalSubspace("zero", 0.0, basis=np.zeros((0, family.dim)))
    rho_est = bracket.lower
    if rho_est <= 0.0:
        return ExtremalSubspace(
            "undetermined", 0.0,
            diagnostics="lower bound is zero but upper is not; "
                        "no usable spectral radius estimate at this depth")
    normalized = family.scaled(1.0 / rho_est)
    probe = extremal.boundedness_probe(normalized, probe_depth)
    if probe.verdict == "bounded-likely":
        cert = extremal.euclidean_certificate(family.dim)
        ok, gap, attained = extremal.check_extremal_norm(family, cert, rho_est)
        cert = extremal.NormCertificate(
            dim=family.dim, kind="euclidean", transform=None,
            margin=max(0.0, -gap), status="verified" if ok else "candidate")
        return ExtremalSubspace(
            "ok", rho_est, basis=np.eye(family.dim, dtype=np.complex128),
            restricted_family=family, certificate=cert,
            diagnostics=f"full space; attained norm {attained:.12g}")
    reduction = block_triangularize(family, seed=seed)
    if reduction.block_count == 1:
        return ExtremalSubspace(
            "undetermined", rho_est,
            diagnostics="irreducible family with non-stabilized normalized "
                        "semigroup; the spectral radius estimate is likely not tight")
    report = dominant_blocks(reduction, depth, node_budget)
    transformed = reduction.transformed()
    starts = np.cumsum((0,) + reduction.block_sizes)
    order = sorted(report.dominant, key=lambda j: reduction.block_sizes[j - 1])
    for j in order:
        block = reduction.blocks[j - 1]
        block_probe = extremal.boundedness_probe(
            block.scaled(1.0 / rho_est), probe_depth)
        if block_probe.verdict != "bounded-likely":
            continue
        m = int(starts[j])
        restricted = MatrixFamily(np.ascontiguousarray(transformed[:, :m, :m]))
        basis = reduction.transform.conj().T[:m]
        cert = extremal.euclidean_certificate(m)
        ok, gap, attained = extremal.check_extremal_norm(restricted, cert, rho_est)
        cert = extremal.NormCertificate(
            dim=m, kind="euclidean", transform=None,
            margin=max(0.0, -gap), status="verified" if ok else "candidate")
        return ExtremalSubspace(
            "ok", rho_est, basis=basis, restricted_family=restricted,
            certificate=cert,
            diagnostics=f"blocks 1..{j} (dim {m}); attained norm {attained:.12g}")
    return ExtremalSubspace(
        "undetermined", rho_est,
        diagnostics="no dominant block with a bounded normalized semigroup "
                    "within the probe budget; the estimate may not be tight")
