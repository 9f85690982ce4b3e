"""Adaptive coordinate descent for non-differentiable objectives.

Each sweep probes every coordinate direction at +step and -step, accepts the
better strictly improving probe, and grows the step on success or shrinks it
on failure. Directions are the columns of an encoding basis, the identity
unless an encoding hook replaces it between sweeps.
"""

import logging
import math
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import InvalidParameterError, NumericError
from .models.descent import DescentConfig, DescentTrace, ObjectiveHandle

logger = logging.getLogger(__name__)

# (basis, trace) -> new basis; columns are probe directions
EncodingHook = Callable[[np.ndarray, DescentTrace], np.ndarray]


def coordinate_descent(
    f: ObjectiveHandle,
    x0: Sequence[float],
    cfg: Optional[DescentConfig] = None,
    encoding_hook: Optional[EncodingHook] = None,
) -> tuple[tuple[float, ...], DescentTrace]:
    """Minimise ``f`` from ``x0``.

    Returns the best point evaluated and the trace of the run that found it.
    With ``cfg.restarts`` > 0 further runs start from seeded random points and
    share the evaluation budget.
    """
    cfg = cfg or DescentConfig()
    start = np.asarray(x0, dtype=float)
    if start.shape != (f.dimension,):
        raise InvalidParameterError(
            f"Start point has {start.size} coordinates, objective has {f.dimension}"
        )
    lo, hi = _bounds(f)
    if np.any(start < lo) or np.any(start > hi):
        raise InvalidParameterError(f"Start point {start.tolist()} lies outside the bounds")

    best_x, best_trace = _run(f, start, cfg, cfg.max_evals, encoding_hook)
    used = best_trace.evals_used

    if cfg.restarts:
        rng = np.random.default_rng(cfg.seed)
        for r in range(cfg.restarts):
            if used >= cfg.max_evals:
                break
            restart = _draw_start(rng, start, lo, hi, cfg.steps_for(f.dimension))
            x, trace = _run(f, restart, cfg, cfg.max_evals - used, encoding_hook)
            used += trace.evals_used
            if trace.values[-1] < best_trace.values[-1]:
                logger.debug(f"Restart {r + 1} improved objective to {trace.values[-1]}")
                best_x, best_trace = x, trace
        best_trace = best_trace.model_copy(update={"evals_used": used})

    return tuple(float(v) for v in best_x), best_trace


def _bounds(f: ObjectiveHandle) -> tuple[np.ndarray, np.ndarray]:
    if f.bounds is None:
        return np.full(f.dimension, -np.inf), np.full(f.dimension, np.inf)
    arr = np.asarray(f.bounds, dtype=float)
    return arr[:, 0], arr[:, 1]


def _draw_start(
    rng: np.random.Generator,
    origin: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    steps: list[float],
) -> np.ndarray:
    finite = np.isfinite(lo) & np.isfinite(hi)
    spread = origin + rng.normal(scale=steps)
    uniform = rng.uniform(np.where(finite, lo, 0.0), np.where(finite, hi, 1.0))
    return np.clip(np.where(finite, uniform, spread), lo, hi)


def _run(
    f: ObjectiveHandle,
    x0: np.ndarray,
    cfg: DescentConfig,
    budget: int,
    encoding_hook: Optional[EncodingHook],
) -> tuple[np.ndarray, DescentTrace]:
    n = f.dimension
    lo, hi = _bounds(f)
    steps = np.asarray(cfg.steps_for(n), dtype=float)
    basis = np.eye(n)
    trace = DescentTrace()

    def evaluate(point: np.ndarray) -> float:
        value = float(f.eval(tuple(float(v) for v in point)))
        trace.evals_used += 1
        if not math.isfinite(value):
            raise NumericError("Objective is not finite", point.tolist())
        return value

    x = x0.copy()
    fx = evaluate(x)
    trace.iterates.append((tuple(float(v) for v in x), fx))

    while True:
        if np.all(steps < cfg.tol):
            trace.converged = True
            break
        if trace.evals_used + 2 > budget:
            break
        for i in range(n):
            if steps[i] < cfg.tol:
                continue
            if trace.evals_used + 2 > budget:
                break
            direction = basis[:, i] * steps[i]
            minus = np.clip(x - direction, lo, hi)
            plus = np.clip(x + direction, lo, hi)
            f_minus = evaluate(minus)
            f_plus = evaluate(plus)

            if f_minus <= f_plus and f_minus < fx:
                x, fx = minus, f_minus
            elif f_plus < fx:
                x, fx = plus, f_plus
            else:
                steps[i] *= cfg.shrink
                continue
            steps[i] *= cfg.grow
            trace.iterates.append((tuple(float(v) for v in x), fx))

        if encoding_hook is not None:
            basis = np.asarray(encoding_hook(basis, trace), dtype=float)
            if basis.shape != (n, n):
                raise InvalidParameterError(f"Encoding hook returned shape {basis.shape}, need {(n, n)}")

    logger.debug(
        f"Descent finished at f={fx} after {trace.evals_used} evaluations "
        f"({'converged' if trace.converged else 'budget exhausted'})"
    )
    return x, trace


def objective_from_spec(spec: Mapping) -> ObjectiveHandle:
    """Build a diagnostic objective from a JSON-style mapping.

    Kinds: ``quadratic`` sum a_i (x_i - c_i)^2 and ``abs`` sum a_i |x_i - c_i|,
    both with ``center`` c, optional ``scale`` a and optional ``bounds``.
    """
    kind = spec.get("kind")
    center = np.asarray(spec.get("center", []), dtype=float)
    if center.size == 0:
        raise InvalidParameterError("Objective spec needs a non-empty 'center'")
    scale = np.asarray(spec.get("scale", np.ones_like(center)), dtype=float)
    if scale.shape != center.shape:
        raise InvalidParameterError("Objective 'scale' must match 'center'")
    offset = float(spec.get("offset", 0.0))

    if kind == "quadratic":
        def fn(x: Sequence[float]) -> float:
            d = np.asarray(x) - center
            return float(np.sum(scale * d * d)) + offset
    elif kind == "abs":
        def fn(x: Sequence[float]) -> float:
            return float(np.sum(scale * np.abs(np.asarray(x) - center))) + offset
    else:
        raise InvalidParameterError(f"Unknown objective kind: {kind!r}")

    bounds = spec.get("bounds")
    return ObjectiveHandle(
        dimension=int(center.size),
        eval=fn,
        bounds=tuple(tuple(b) for b in bounds) if bounds else None,
    )


def locate_least_discriminatory(
    embedding: Mapping[str, Sequence[float]],
    scalars: Mapping[str, float],
    cfg: Optional[DescentConfig] = None,
) -> tuple[str, tuple[float, ...], DescentTrace]:
    """Continuous descent over embedded SD points, snapped to the nearest point.

    The objective min_c (s_c + |x - e_c|_1) is continuous and non-smooth, with
    its minimum at the embedding of the least discriminatory point.
    """
    points = [p for p in scalars if p in embedding]
    if not points:
        raise InvalidParameterError("No scored point has an embedding")
    coords = np.asarray([embedding[p] for p in points], dtype=float)
    values = np.asarray([scalars[p] for p in points], dtype=float)

    def fn(x: Sequence[float]) -> float:
        return float(np.min(values + np.abs(coords - np.asarray(x)).sum(axis=1)))

    handle = ObjectiveHandle(
        dimension=coords.shape[1],
        eval=fn,
        bounds=tuple(zip(coords.min(axis=0).tolist(), coords.max(axis=0).tolist())),
    )
    x_best, trace = coordinate_descent(handle, coords.mean(axis=0), cfg)
    distances = np.abs(coords - np.asarray(x_best)).sum(axis=1)
    nearest = points[int(np.argmin(distances))]
    logger.info(f"Descent over {len(points)} embedded points settled near '{nearest}'")
    return nearest, x_best, trace
