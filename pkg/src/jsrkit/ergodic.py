"""Lyapunov exponents of matrix products under shift-ergodic measures,
extremality verdicts, and the pipelines tying periodic density points to
finiteness witnesses in both directions.

All product accumulation is done in log scale with periodic rescaling;
minus infinity is a first-class value (zero products), never a NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bounds import BoundsBracket, bounds_bracket
from .config import (DEFAULT_DEPTH, DEFAULT_NODE_BUDGET, EXTREMALITY_TOL,
                     VERTEX_BUDGET)
from .extremal import ComplexFamilyError, FinitenessCertificate, certify_finiteness
from .matrix_core import (MatrixFamily, Word, averaged_spectral_value,
                          operator_norm, spectral_radius, word_product)
from .symbolic import (MarkovMeasure, PeriodicMeasure, PeriodicSequence,
                       ShiftMeasure, cylinder_probability, is_density_point,
                       support_words)


@dataclass(frozen=True)
class LyapunovEstimate:
    value: float  # log scale (nats); may be -inf
    method: str   # "exact-finite-n", "periodic-exact", "monte-carlo"
    n_or_samples: int
    stderr: float = 0.0

    def to_json_dict(self) -> dict:
        return {"value": self.value, "method": self.method,
                "n_or_samples": self.n_or_samples, "stderr": self.stderr}


class SupportTooLargeError(RuntimeError):
    """Exact enumeration would exceed the word budget; use monte-carlo."""


def lyapunov_exact_finite(family: MatrixFamily, mu: ShiftMeasure, n: int,
                          word_budget: int = 10**6) -> LyapunovEstimate:
    """(1/n) integral of log ||S_{i_1}...S_{i_n}|| over the measure.

    Enumerates the measure's support words only, so sparse supports stay
    cheap at large n.  These values are nonincreasing along n, 2n, 4n, ...
    and converge to the Lyapunov exponent from above (subadditivity).
    """
    words = support_words(mu, n)
    if len(words) > word_budget:
        raise SupportTooLargeError(
            f"{len(words)} support words at n={n} exceed the budget "
            f"{word_budget}; use lyapunov_monte_carlo")
    total = 0.0
    for w in sorted(words):
        prob = cylinder_probability(mu, w)
        if prob <= 0.0:
            continue
        norm = operator_norm(word_product(family, w))
        if norm == 0.0:
            return LyapunovEstimate(-math.inf, "exact-finite-n", n)
        total += prob * math.log(norm)
    return LyapunovEstimate(total / n, "exact-finite-n", n)


def lyapunov_periodic(family: MatrixFamily, xi: PeriodicSequence) -> LyapunovEstimate:
    """(1/pi) log rho of the period product: the exact a.e. growth rate
    along the periodic orbit (Gelfand's formula)."""
    r = spectral_radius(word_product(family, xi.period))
    value = math.log(r) if r > 0.0 else -math.inf
    return LyapunovEstimate(value / xi.period_length if r > 0.0 else -math.inf,
                            "periodic-exact", xi.period_length)


def sample_paths(mu: MarkovMeasure, samples: int, length: int,
                 seed: int) -> np.ndarray:
    """Seeded Markov-chain paths as a (samples, length) 0-based array."""
    rng = np.random.default_rng(seed)
    k = mu.alphabet_size
    cum_p = np.cumsum(mu.p)
    cum_rows = np.cumsum(mu.P, axis=1)
    u = rng.random((samples, length))
    paths = np.empty((samples, length), dtype=np.int64)
    paths[:, 0] = np.searchsorted(cum_p, u[:, 0], side="right").clip(0, k - 1)
    for t in range(1, length):
        rows = cum_rows[paths[:, t - 1]]
        paths[:, t] = (u[:, t, None] > rows).sum(axis=1).clip(0, k - 1)
    return paths


def lyapunov_monte_carlo(family: MatrixFamily, mu: MarkovMeasure,
                         samples: int, length: int,
                         seed: int = 0) -> LyapunovEstimate:
    """Sampled (1/length) log product norm, averaged across seeded paths.

    The running product is rescaled to unit norm every few steps with the
    log accumulated separately, so path length is not limited by floating
    point range.
    """
    if length < 1 or samples < 2:
        raise ValueError("need length >= 1 and samples >= 2")
    paths = sample_paths(mu, samples, length, seed)
    scale = family.scale
    if scale == 0.0:
        return LyapunovEstimate(-math.inf, "monte-carlo", samples)
    mats = np.ascontiguousarray(family.mats / scale)
    vals = _kernels.path_log_norms(mats, paths) + math.log(scale)
    if np.any(np.isneginf(vals)):
        return LyapunovEstimate(-math.inf, "monte-carlo", samples)
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(samples))
    return LyapunovEstimate(mean, "monte-carlo", samples, stderr)


@dataclass(frozen=True)
class ExtremalityVerdict:
    verdict: str  # "extremal", "not-extremal", "undetermined"
    lyapunov: LyapunovEstimate
    jsr_bracket: BoundsBracket
    gap: float        # lyapunov value minus log(bracket lower)
    tol: float

    def to_json_dict(self) -> dict:
        return {"verdict": self.verdict, "gap": self.gap, "tol": self.tol,
                "lyapunov": self.lyapunov.to_json_dict(),
                "jsr_bracket": self.jsr_bracket.to_json_dict()}


def _log_or_neginf(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


def extremality_verdict(family: MatrixFamily, mu: ShiftMeasure,
                        depth: int = DEFAULT_DEPTH,
                        tol: float | None = None,
                        node_budget: int = DEFAULT_NODE_BUDGET,
                        exact_n: int | None = None,
                        mc_samples: int = 0, mc_length: int = 1000,
                        seed: int = 0) -> ExtremalityVerdict:
    """Is the measure's Lyapunov exponent equal to log JSR?

    Periodic measures get the exact periodic value; Markov measures get
    the exact finite-n average at the largest affordable n, refined by
    monte-carlo when mc_samples > 0.  The verdict never outruns the JSR
    bracket: if the bracket is wider than the decision gap the result is
    "undetermined", a first-class outcome.
    """
    bracket = bounds_bracket(family, depth, node_budget)
    err = 0.0
    if isinstance(mu, PeriodicMeasure):
        lyap = lyapunov_periodic(family, mu.base)
        tol_eff = EXTREMALITY_TOL if tol is None else tol
    else:
        if exact_n is None:
            exact_n = 1
            while mu.alphabet_size ** (exact_n + 1) <= 4096 and exact_n < 12:
                exact_n += 1
        lyap = lyapunov_exact_finite(family, mu, exact_n)
        tol_eff = EXTREMALITY_TOL if tol is None else tol
        if mc_samples > 0:
            lyap = lyapunov_monte_carlo(family, mu, mc_samples, mc_length, seed)
            err = 3.0 * lyap.stderr
            if tol is None:
                tol_eff = err
    log_lower = _log_or_neginf(bracket.lower)
    log_upper = _log_or_neginf(bracket.upper)
    lv = lyap.value
    gap = lv - log_lower if not (math.isinf(lv) and math.isinf(log_lower)) else 0.0
    if lv + err < log_lower - tol_eff:
        verdict = "not-extremal"
    elif (log_upper - log_lower <= tol_eff + err + 1e-12
          and lv >= log_lower - tol_eff - err):
        verdict = "extremal"
    else:
        verdict = "undetermined"
    return ExtremalityVerdict(verdict, lyap, bracket, gap, tol_eff)


def finiteness_to_measure(family: MatrixFamily, word: Word,
                          depth: int = DEFAULT_DEPTH,
                          node_budget: int = DEFAULT_NODE_BUDGET,
                          ) -> tuple[PeriodicMeasure, ExtremalityVerdict]:
    """Forward pipeline: a candidate spectrum-maximizing word induces the
    periodic measure on its orbit, which is extremal exactly when the word
    attains the JSR."""
    if len(word) < 1:
        raise ValueError("need a non-empty word")
    xi = PeriodicSequence(family.size, tuple(word))
    mu = PeriodicMeasure(xi)
    verdict = extremality_verdict(family, mu, depth, node_budget=node_budget)
    return mu, verdict


@dataclass(frozen=True)
class PipelineStep:
    name: str
    passed: bool
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class MainTheoremReport:
    success: bool
    steps: tuple[PipelineStep, ...]
    certificate: FinitenessCertificate | None = None

    def failing_step(self) -> str | None:
        for s in self.steps:
            if not s.passed:
                return s.name
        return None

    def to_json_dict(self) -> dict:
        return {"success": self.success,
                "steps": [s.to_json_dict() for s in self.steps],
                "certificate": self.certificate.to_json_dict()
                if self.certificate else None}


def measure_to_finiteness(family: MatrixFamily, mu: ShiftMeasure,
                          xi: PeriodicSequence,
                          depth: int = DEFAULT_DEPTH,
                          node_budget: int = DEFAULT_NODE_BUDGET,
                          vertex_budget: int = VERTEX_BUDGET) -> MainTheoremReport:
    """Reverse pipeline: a periodic density point of an extremal measure
    yields a finiteness witness.

    Verifies (i) the density-point property, (ii) numerical extremality of
    the measure, (iii) that the period word attains the JSR lower bound,
    and (iv) a polytope certificate for the word.  All steps past (i) are
    numerical; the only theorem-grade claim is the final certificate.
    """
    steps: list[PipelineStep] = []
    density = is_density_point(mu, xi)
    steps.append(PipelineStep(
        "density-point", bool(density),
        density.detail or f"certificate: {density.certificate}"))
    if not density:
        return MainTheoremReport(False, tuple(steps))
    verdict = extremality_verdict(family, mu, depth, node_budget=node_budget)
    steps.append(PipelineStep(
        "extremality", verdict.verdict == "extremal",
        f"verdict: {verdict.verdict}, gap {verdict.gap:.3e}"))
    if verdict.verdict != "extremal":
        return MainTheoremReport(False, tuple(steps))
    word = xi.period
    value = averaged_spectral_value(family, word)
    lower = verdict.jsr_bracket.lower
    attains = value >= lower - 1e-9 * max(1.0, lower)
    steps.append(PipelineStep(
        "candidate-attains-bound", attains,
        f"averaged spectral value {value:.12g} vs lower bound {lower:.12g}"))
    if not attains:
        return MainTheoremReport(False, tuple(steps))
    try:
        cert = certify_finiteness(family, word, vertex_budget)
    except ComplexFamilyError as exc:
        steps.append(PipelineStep("polytope-certificate", False, str(exc)))
        return MainTheoremReport(False, tuple(steps))
    steps.append(PipelineStep(
        "polytope-certificate", cert.verdict == "certified",
        cert.reason or f"value {cert.value:.12g}"))
    return MainTheoremReport(cert.verdict == "certified", tuple(steps),
                             cert if cert.verdict == "certified" else None)


@dataclass(frozen=True)
class CorollaryReport:
    extremality: ExtremalityVerdict
    finiteness: FinitenessCertificate | None
    scan_max: float          # max averaged spectral value over |w| <= depth
    upper_bound: float
    stability_conclusion: str

    def to_json_dict(self) -> dict:
        return {"extremality": self.extremality.to_json_dict(),
                "finiteness": self.finiteness.to_json_dict()
                if self.finiteness else None,
                "scan_max": self.scan_max, "upper_bound": self.upper_bound,
                "stability_conclusion": self.stability_conclusion}


def _ranked_candidate_words(family: MatrixFamily, max_len: int,
                            limit: int = 5, node_cap: int = 5000) -> list[Word]:
    """Short words ranked by averaged spectral value (cyclic duplicates
    dropped), used as certification candidates."""
    scored: list[tuple[float, int, Word]] = []
    words: list[Word] = [()]
    nodes = 0
    for _ in range(max_len):
        nxt = []
        for w in words:
            for c in range(1, family.size + 1):
                nodes += 1
                if nodes > node_cap:
                    break
                nw = w + (c,)
                nxt.append(nw)
                if all(nw <= nw[s:] + nw[:s] for s in range(1, len(nw))):
                    scored.append((-averaged_spectral_value(family, nw),
                                   len(nw), nw))
        words = nxt
        if nodes > node_cap:
            break
    scored.sort()
    return [w for _, _, w in scored[:limit]]


def corollary_reports(family: MatrixFamily, mu: MarkovMeasure,
                      depth: int = DEFAULT_DEPTH,
                      node_budget: int = DEFAULT_NODE_BUDGET,
                      vertex_budget: int = VERTEX_BUDGET) -> CorollaryReport:
    """Extremality of a Markovian measure, the finiteness search that its
    extremality licenses, and the periodically-switched-stability scan."""
    verdict = extremality_verdict(family, mu, depth, node_budget=node_budget)
    cert: FinitenessCertificate | None = None
    if verdict.verdict == "extremal" and family.is_real:
        for w in _ranked_candidate_words(family, min(depth, 8)):
            attempt = certify_finiteness(family, w, vertex_budget)
            if attempt.verdict == "certified":
                cert = attempt
                break
            cert = attempt
    scan_max = verdict.jsr_bracket.lower  # max averaged spectral value by construction
    upper = cert.value if cert is not None and cert.verdict == "certified" \
        else verdict.jsr_bracket.upper
    if scan_max < 1.0 and upper < 1.0:
        conclusion = (f"periodically switched stable and rho(S) <= "
                      f"{upper:.12g} < 1")
    elif scan_max >= 1.0:
        conclusion = "not applicable: periodic scan max >= 1"
    else:
        conclusion = ("inconclusive: scan max < 1 but the certified upper "
                      "bound does not confirm rho(S) < 1")
    return CorollaryReport(verdict, cert, scan_max, upper, conclusion)
