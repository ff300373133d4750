"""Weight-function approximation by short mixtures of complex exponentials.

A weight function sampled on [0, N) and padded with zeros to a longer window
has a discrete Fourier transform whose largest coefficients already carry
most of the shape, so keeping the top L of them yields an L-term mixture
sum_l u_l * alpha_l**i whose evaluation costs O(L) per rank.  Ranking under
the mixture then reduces to L exponential-weight passes, one per base, which
turns an O(n h) truncated ranking into O(n L) after sorting.

Two refinements sharpen the plain truncated transform.  Damping scales
sample i by eta**(-i) before the transform and folds eta back into every
base, which drives the reconstruction toward zero beyond the sampled window
instead of letting it repeat periodically.  Left extension prepends a
constant continuation of the boundary value, moving the wraparound
discontinuity away from the small ranks that dominate ranking quality; the
induced index shift is folded into the coefficients afterwards, so the
mixture is still evaluated at plain ranks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .engine import (
    PrfScore,
    Scores,
    independent_arrays,
    log_magnitudes,
    mixture_values_independent,
    order_scores,
    rank_prfe,
    scores_from_arrays,
)
from .errors import ConfigError, ShapeError
from .model import Model, Relation
from .util import fanout_map
from .weights import WeightFunction

#: slack on the unit-magnitude bound for mixture bases
ALPHA_MAG_TOL = 1e-12


@dataclass(frozen=True)
class ExpMixture:
    """A weight function in the form sum_l u_l * alpha_l**i.

    ``terms`` holds (coefficient, base) pairs.  Bases must stay within the
    closed unit disk so evaluations cannot blow up with the rank.
    """

    terms: tuple[tuple[complex, complex], ...]

    def __post_init__(self) -> None:
        if len(self.terms) == 0:
            raise ConfigError("mixture needs at least one term")
        clean = tuple((complex(u), complex(a)) for u, a in self.terms)
        object.__setattr__(self, "terms", clean)
        for _, a in clean:
            if abs(a) > 1.0 + ALPHA_MAG_TOL:
                raise ConfigError(f"base magnitude {abs(a)} exceeds 1")

    def __len__(self) -> int:
        return len(self.terms)


def mixture_sum(first: ExpMixture, second: ExpMixture) -> ExpMixture:
    """The mixture evaluating to the sum of the two arguments."""
    return ExpMixture(terms=first.terms + second.terms)


@dataclass(frozen=True)
class ApproxConfig:
    """Pipeline parameters for :func:`dft_approx_full`.

    N is the sample count of the weight function (it must vanish from N on),
    L the term budget, ``a`` stretches the transform window to a*N so the
    zero tail is represented, ``b`` prepends a constant continuation worth a
    fraction b of that window, ``eps`` is the damping target for values past
    the window, and ``bound`` overrides the measured magnitude bound of the
    samples.
    """

    N: int
    L: int
    a: int = 2
    b: float = 0.1
    eps: float = 1e-5
    bound: float | None = None

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ConfigError(f"sample count must be positive, got {self.N}")
        if self.L < 1:
            raise ConfigError(f"term budget must be positive, got {self.L}")
        if int(self.a) != self.a or self.a < 1:
            raise ConfigError(f"window multiplier must be an integer >= 1, got {self.a}")
        if self.b < 0:
            raise ConfigError(f"extension fraction must be >= 0, got {self.b}")
        if self.eps <= 0:
            raise ConfigError(f"damping target must be positive, got {self.eps}")
        if self.bound is not None and self.bound <= 0:
            raise ConfigError(f"magnitude bound must be positive, got {self.bound}")

    @property
    def window(self) -> int:
        """Length of the zero-padded transform window."""
        return int(self.a) * self.N

    @property
    def shift(self) -> int:
        """Sample count of the constant left continuation."""
        return int(round(self.b * self.window))


def dft_approx_base(samples: Sequence[complex], L: int) -> ExpMixture:
    """Keep the L largest transform coefficients of a sample vector.

    The result reproduces the truncated inverse transform at every integer:
    bases are the forward roots of unity of the vector length and each
    coefficient is the matching transform value over the length.  Ties on
    coefficient magnitude resolve toward the smaller frequency index.
    """
    s = np.asarray(samples, dtype=complex)
    m = len(s)
    if L < 1 or L > m:
        raise ConfigError(f"term budget {L} outside [1, {m}]")
    psi = np.fft.fft(s)
    keep = np.argsort(-np.abs(psi), kind="stable")[:L]
    terms = tuple(
        (complex(psi[k] / m), complex(np.exp(2j * np.pi * k / m))) for k in keep
    )
    return ExpMixture(terms=terms)


def _weight_samples(wf: Union[WeightFunction, Sequence[complex]], n: int) -> np.ndarray:
    if isinstance(wf, WeightFunction):
        return np.asarray(wf.sample_grid(n), dtype=complex)
    s = np.asarray(list(wf), dtype=complex)
    if len(s) != n:
        raise ShapeError(f"expected {n} weight samples, got {len(s)}")
    return s


def dft_approx_full(
    wf: Union[WeightFunction, Sequence[complex]], cfg: ApproxConfig
) -> ExpMixture:
    """Full pipeline: extend left, damp, transform, keep top L, fold back.

    With ``b = 0`` and ``eps`` equal to the magnitude bound the pipeline
    degenerates to :func:`dft_approx_base` on the zero-padded samples.
    """
    window = cfg.window
    shift = cfg.shift
    total = window + shift
    if cfg.L > total:
        raise ConfigError(f"term budget {cfg.L} exceeds the {total}-sample window")

    base = _weight_samples(wf, cfg.N)
    bound = cfg.bound if cfg.bound is not None else float(np.max(np.abs(base)))
    if bound <= 0.0:
        # an all-zero weight function; any damping factor represents it
        bound = 1.0
    eta = (cfg.eps / bound) ** (1.0 / window)

    samples = np.concatenate(
        [
            np.full(shift, base[0], dtype=complex),
            base,
            np.zeros(window - cfg.N, dtype=complex),
        ]
    )
    scaled = samples * eta ** -np.arange(total, dtype=float)
    psi = np.fft.fft(scaled)
    keep = np.argsort(-np.abs(psi), kind="stable")[: cfg.L]
    terms = []
    for k in keep:
        alpha = eta * np.exp(2j * np.pi * k / total)
        u = psi[k] / total * alpha**shift
        terms.append((complex(u), complex(alpha)))
    return ExpMixture(terms=tuple(terms))


def eval_mixture(mixture: ExpMixture, i) -> Union[complex, np.ndarray]:
    """Mixture value at one rank or an array of ranks."""
    arr = np.asarray(i, dtype=float)
    out = np.zeros(arr.shape, dtype=complex)
    for u, a in mixture.terms:
        out = out + u * np.power(complex(a), arr)
    if arr.shape == ():
        return complex(out)
    return out


def rank_mixture(model: Model, mixture: ExpMixture) -> Scores:
    """Ranking scores under the mixture: one exponential pass per term.

    Per-tuple totals accumulate in term order, so the output is deterministic
    even when the passes run concurrently.
    """
    if isinstance(model, Relation):
        ids, p = independent_arrays(model)
        coeffs = np.array([u * a for u, a in mixture.terms], dtype=complex)
        alphas = np.array([a for _, a in mixture.terms], dtype=complex)
        total = mixture_values_independent(p, coeffs, alphas)
        return scores_from_arrays(ids, total, log_magnitudes(total))
    per_base = fanout_map(lambda term: rank_prfe(model, term[1]), mixture.terms)
    totals: dict[int, complex] = {}
    for (u, _), scores in zip(mixture.terms, per_base):
        for s in scores:
            totals[s.tuple_id] = totals.get(s.tuple_id, 0j) + u * s.value
    return order_scores(PrfScore.of(tid, v) for tid, v in totals.items())


# --------------------------------------------------------------------------
# serialization


def mixture_to_json(mixture: ExpMixture) -> list[dict]:
    return [
        {"re_u": u.real, "im_u": u.imag, "re_alpha": a.real, "im_alpha": a.imag}
        for u, a in mixture.terms
    ]


def mixture_from_json(data: Sequence[dict]) -> ExpMixture:
    return ExpMixture(
        terms=tuple(
            (
                complex(d["re_u"], d["im_u"]),
                complex(d["re_alpha"], d["im_alpha"]),
            )
            for d in data
        )
    )


def save_mixture_json(mixture: ExpMixture, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(mixture_to_json(mixture), fh, indent=2)
        fh.write("\n")


def load_mixture_json(path: str) -> ExpMixture:
    with open(path) as fh:
        return mixture_from_json(json.load(fh))
