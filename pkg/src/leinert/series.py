"""Exact return-weight tables for the alternating walk, their recurrences,
and the generating-function relations, all in rational arithmetic.

The walk lives on a product of free groups.  At step m it multiplies the
current position by sigma^(e_m), where sigma is a generator carrying weight
alpha_{i,j}, or the identity symbol carrying weight alpha0; e_m is -1 at odd
steps and +1 at even steps, so letters arrive in the inverse-then-plain
rhythm of valid strings.  The identity symbol is only on offer while the
walk sits at the identity (a lazy loop at the origin); away from the origin
every step is a letter.  A path's weight is the product of its step weights,
and each table is a sum of path weights, which keeps everything rational.

Phase matters: conditioning on a first identity step shifts a walk's
remaining steps to the plain-first rhythm.  The tables record both phases:
even_returns holds the inverse-first return weights, lagged_returns the
plain-first ones, and the avoiding tables likewise come in an even
(plain-first) and odd (inverse-first) flavour.  The recurrence checks in
verify_recurrences are first-return decompositions of these quantities; in
the Leinert cases they hold exactly, and where bad strings exist the
detour terms pick up exactly the kernel-string weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .census import BudgetExceededError
from .groups import GroupSignature

MAX_STATES = 2_000_000

State = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class WalkWeights:
    """Step weights: alpha0 for the lazy loop, alpha[(i, j)] per generator.

    The generator weight applies to both exponents of that generator.  In
    probability mode the weights satisfy alpha0 + 2 * sum(alpha) = 1, which
    labels the normalization used by the examples; nothing in the DP needs
    it, and norm-mode weights (operator coefficients) are equally welcome.
    """

    alpha0: Fraction
    alpha: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        if self.alpha0 < 0 or any(v < 0 for v in self.alpha.values()):
            raise ValueError("step weights must be nonnegative")

    @classmethod
    def uniform(cls, signature: GroupSignature, a, alpha0=0) -> "WalkWeights":
        a, alpha0 = Fraction(a), Fraction(alpha0)
        return cls(alpha0, {base: a for base in signature.bases()})

    @property
    def total_letter_weight(self) -> Fraction:
        return sum(self.alpha.values(), Fraction(0))

    @property
    def is_probability_mode(self) -> bool:
        return self.alpha0 + 2 * self.total_letter_weight == 1


@dataclass(frozen=True)
class ProbabilityTables:
    """Exact walk-return tables up to 2*n_max steps.

    even_returns[n]: weight of being home after 2n steps, inverse-first.
    lagged_returns[n]: weight of being home after 2n-1 steps, plain-first
        (the walk that follows a first lazy step); index 0 is unused zero.
    excursion_returns[(i,j)][m]: weight of first returns at step m among
        walks opening with the inverse of generator (i,j); zero at odd m.
    detour_returns[(i,j)][m]: the part of excursion_returns whose
        penultimate position is not that opening letter.  Only walks whose
        letters spell a bad string land here.
    avoiding_even_returns[(i,j)][m]: weight of plain-first m-step returns
        never standing on the element x_{i,j} in between; even m.
    avoiding_odd_returns[(i,j)][m]: the inverse-first odd-horizon analogue;
        nonzero only with a lazy weight, since odd returns need lazy steps.
    layer_mass[m]: total mass across the group after m steps of the
        inverse-first walk; with alpha0 = 0 it equals (sum alpha)^m.
    """

    signature: GroupSignature
    weights: WalkWeights
    n_max: int
    even_returns: tuple[Fraction, ...]
    lagged_returns: tuple[Fraction, ...]
    excursion_returns: dict[tuple[int, int], tuple[Fraction, ...]]
    detour_returns: dict[tuple[int, int], tuple[Fraction, ...]]
    avoiding_even_returns: dict[tuple[int, int], tuple[Fraction, ...]]
    avoiding_odd_returns: dict[tuple[int, int], tuple[Fraction, ...]]
    layer_mass: tuple[Fraction, ...]

    def total_excursion_returns(self, m: int) -> Fraction:
        return sum(
            (table[m] for table in self.excursion_returns.values()), Fraction(0)
        )


def _apply(state: State, factor: int, signed: int) -> State:
    word = state[factor]
    if word and word[-1] == -signed:
        new = word[:-1]
    else:
        new = word + (signed,)
    return state[:factor] + (new,) + state[factor + 1 :]


def _identity(signature: GroupSignature) -> State:
    return tuple(() for _ in signature.factors)


def _check_budget(dist, description):
    if len(dist) > MAX_STATES:
        raise BudgetExceededError(description, len(dist), MAX_STATES)


def _step_symbols(weights: WalkWeights):
    return [((i, j), j + 1, a) for (i, j), a in weights.alpha.items() if a]


def _return_weights(signature, weights, steps, first_plain):
    """Per-step identity mass and total mass of the unconstrained walk."""
    zero = Fraction(0)
    home = _identity(signature)
    symbols = _step_symbols(weights)
    dist: dict[State, Fraction] = {home: Fraction(1)}
    at_home = [Fraction(1)]
    mass = [Fraction(1)]
    for m in range(1, steps + 1):
        plain = (m % 2 == 0) != first_plain
        nxt: dict[State, Fraction] = {}
        for state, wt in dist.items():
            for (i, _j), base, a in symbols:
                ns = _apply(state, i, base if plain else -base)
                nxt[ns] = nxt.get(ns, zero) + wt * a
        if weights.alpha0:
            lazy = dist.get(home)
            if lazy:
                nxt[home] = nxt.get(home, zero) + lazy * weights.alpha0
        _check_budget(nxt, f"return walk on {signature}, step {m}")
        dist = nxt
        at_home.append(dist.get(home, zero))
        mass.append(sum(dist.values(), zero))
    return at_home, mass

def _excursion_weights(signature, weights, steps, gen):
    """First-return and detour weights for excursions opening with gen^-1.

    The excursion never stands on the identity in between, so the lazy loop
    never fires; arrivals at the identity are recorded and absorbed, split
    by whether they come from the opening letter's position.
    """
    zero = Fraction(0)
    home = _identity(signature)
    symbols = _step_symbols(weights)
    i0, j0 = gen
    start = _apply(home, i0, -(j0 + 1))
    first = [zero] * (steps + 1)
    detour = [zero] * (steps + 1)
    a0 = weights.alpha.get(gen, zero)
    if steps < 1 or not a0:
        return first, detour
    dist: dict[State, Fraction] = {start: a0}
    for m in range(2, steps + 1):
        plain = m % 2 == 0
        nxt: dict[State, Fraction] = {}
        arrived = zero
        arrived_detour = zero
        for state, wt in dist.items():
            for (i, _j), base, a in symbols:
                ns = _apply(state, i, base if plain else -base)
                w = wt * a
                if ns == home:
                    arrived += w
                    if state != start:
                        arrived_detour += w
                else:
                    nxt[ns] = nxt.get(ns, zero) + w
        _check_budget(nxt, f"excursion walk on {signature}, step {m}")
        first[m] = arrived
        detour[m] = arrived_detour
        dist = nxt
    return first, detour


def _avoiding_weights(signature, weights, steps, gen, first_plain):
    """Return weights of walks never standing on the element gen in between.

    The mask applies to interior times only, so the identity mass is read
    off before the masked state is dropped at each step.
    """
    zero = Fraction(0)
    home = _identity(signature)
    symbols = _step_symbols(weights)
    i0, j0 = gen
    masked = _apply(home, i0, j0 + 1)
    dist: dict[State, Fraction] = {home: Fraction(1)}
    at_home = [Fraction(1)]
    for m in range(1, steps + 1):
        plain = (m % 2 == 0) != first_plain
        nxt: dict[State, Fraction] = {}
        for state, wt in dist.items():
            for (i, _j), base, a in symbols:
                ns = _apply(state, i, base if plain else -base)
                nxt[ns] = nxt.get(ns, zero) + wt * a
        if weights.alpha0:
            lazy = dist.get(home)
            if lazy:
                nxt[home] = nxt.get(home, zero) + lazy * weights.alpha0
        _check_budget(nxt, f"avoiding walk on {signature}, step {m}")
        dist = nxt
        at_home.append(dist.get(home, zero))
        dist.pop(masked, None)
    return at_home


def dp_tables(
    signature: GroupSignature, weights: WalkWeights, n_max: int
) -> ProbabilityTables:
    """Compute every table exactly, walking out to 2*n_max steps."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    steps = 2 * n_max
    zero = Fraction(0)

    inverse_first, mass = _return_weights(signature, weights, steps, first_plain=False)
    plain_first, _ = _return_weights(signature, weights, steps - 1, first_plain=True)

    even_returns = tuple(inverse_first[2 * n] for n in range(n_max + 1))
    lagged_returns = (zero,) + tuple(plain_first[2 * n - 1] for n in range(1, n_max + 1))

    excursions = {}
    detours = {}
    avoid_even = {}
    avoid_odd = {}
    for gen in signature.bases():
        first, detour = _excursion_weights(signature, weights, steps, gen)
        excursions[gen] = tuple(first)
        detours[gen] = tuple(detour)
        avoid_even[gen] = tuple(
            _avoiding_weights(signature, weights, steps - 2, gen, first_plain=True)
        )
        odd_table = _avoiding_weights(signature, weights, steps - 1, gen, first_plain=False)
        odd_table[0] = zero  # index 0 is not an odd horizon; drop the bootstrap mass
        avoid_odd[gen] = tuple(odd_table)

    return ProbabilityTables(
        signature=signature,
        weights=weights,
        n_max=n_max,
        even_returns=even_returns,
        lagged_returns=lagged_returns,
        excursion_returns=excursions,
        detour_returns=detours,
        avoiding_even_returns=avoid_even,
        avoiding_odd_returns=avoid_odd,
        layer_mass=tuple(mass),
    )


def verify_recurrences(tables: ProbabilityTables) -> dict[str, Fraction]:
    """Max absolute residual of each first-return decomposition, exactly.

    Keys: even_return and lagged_return (the two unconditioned walks),
    avoiding_even and avoiding_odd (the masked walks), excursion_split
    (first returns = closing-step term + detours).  Sums involving a
    zero-step first return treat it as zero, a first return at time zero
    not being a return.
    """
    w = tables.weights
    n_max = tables.n_max
    mu = tables.even_returns
    p = tables.lagged_returns
    f_tot = [tables.total_excursion_returns(m) for m in range(2 * n_max + 1)]

    residuals: dict[str, Fraction] = {}

    worst = Fraction(0)
    for n in range(1, n_max + 1):
        rhs = sum((f_tot[2 * k] * mu[n - k] for k in range(1, n + 1)), Fraction(0))
        rhs += w.alpha0 * p[n]
        worst = max(worst, abs(mu[n] - rhs))
    residuals["even_return"] = worst

    worst = Fraction(0)
    for n in range(1, n_max + 1):
        rhs = sum((f_tot[2 * k] * p[n - k] for k in range(1, n)), Fraction(0))
        rhs += w.alpha0 * mu[n - 1]
        worst = max(worst, abs(p[n] - rhs))
    residuals["lagged_return"] = worst

    worst = Fraction(0)
    for gen, a_tab in tables.avoiding_even_returns.items():
        f_gen = tables.excursion_returns[gen]
        b_tab = tables.avoiding_odd_returns[gen]
        for n in range(1, (len(a_tab) - 1) // 2 + 1):
            rhs = sum(
                ((f_tot[2 * k] - f_gen[2 * k]) * a_tab[2 * n - 2 * k] for k in range(1, n + 1)),
                Fraction(0),
            )
            rhs += w.alpha0 * b_tab[2 * n - 1]
            worst = max(worst, abs(a_tab[2 * n] - rhs))
    residuals["avoiding_even"] = worst

    worst = Fraction(0)
    for gen, b_tab in tables.avoiding_odd_returns.items():
        a_tab = tables.avoiding_even_returns[gen]
        for n in range(1, (len(b_tab) + 1) // 2 + 1):
            if 2 * n - 1 >= len(b_tab):
                break
            rhs = sum(
                (f_tot[2 * k] * b_tab[2 * n - 2 * k - 1] for k in range(1, n)),
                Fraction(0),
            )
            rhs += w.alpha0 * a_tab[2 * n - 2]
            worst = max(worst, abs(b_tab[2 * n - 1] - rhs))
    residuals["avoiding_odd"] = worst

    worst = Fraction(0)
    for gen, f_gen in tables.excursion_returns.items():
        a_tab = tables.avoiding_even_returns[gen]
        d_gen = tables.detour_returns[gen]
        alpha = w.alpha.get(gen, Fraction(0))
        for n in range(1, n_max + 1):
            if 2 * n - 2 >= len(a_tab):
                break
            rhs = alpha * alpha * a_tab[2 * n - 2] + d_gen[2 * n]
            worst = max(worst, abs(f_gen[2 * n] - rhs))
    residuals["excursion_split"] = worst

    return residuals


# -- truncated power series ---------------------------------------------------

class Series:
    """Power series truncated at a fixed degree, exact coefficients.

    Arithmetic truncates to the smaller degree of its operands, so degrees
    never silently grow.  Coefficients are Fractions throughout.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("series needs at least the constant coefficient")

    @classmethod
    def constant(cls, value, degree: int) -> "Series":
        return cls((Fraction(value),) + (Fraction(0),) * degree)

    @classmethod
    def monomial(cls, value, power: int, degree: int) -> "Series":
        if power > degree:
            return cls.constant(0, degree)
        coeffs = [Fraction(0)] * (degree + 1)
        coeffs[power] = Fraction(value)
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __eq__(self, other):
        return isinstance(other, Series) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Series") -> "Series":
        k = min(self.degree, other.degree)
        return Series([a + b for a, b in zip(self.coeffs[: k + 1], other.coeffs[: k + 1])])

    def __sub__(self, other: "Series") -> "Series":
        k = min(self.degree, other.degree)
        return Series([a - b for a, b in zip(self.coeffs[: k + 1], other.coeffs[: k + 1])])

    def __mul__(self, other: "Series") -> "Series":
        k = min(self.degree, other.degree)
        out = [Fraction(0)] * (k + 1)
        for i, a in enumerate(self.coeffs[: k + 1]):
            if not a:
                continue
            for j in range(k + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return Series(out)

    def scale(self, factor) -> "Series":
        factor = Fraction(factor)
        return Series([factor * c for c in self.coeffs])

    def shift(self, powers: int) -> "Series":
        """Multiply by z^powers, truncating at the existing degree."""
        if powers < 0:
            raise ValueError("can only shift by nonnegative powers")
        coeffs = (Fraction(0),) * powers + self.coeffs
        return Series(coeffs[: self.degree + 1])

    def reciprocal(self) -> "Series":
        """Multiplicative inverse via the geometric convolution recursion."""
        a0 = self.coeffs[0]
        if not a0:
            raise ValueError("reciprocal needs a nonzero constant term")
        inv0 = 1 / a0
        out = [inv0] + [Fraction(0)] * self.degree
        for n in range(1, self.degree + 1):
            acc = Fraction(0)
            for k in range(1, n + 1):
                if self.coeffs[k]:
                    acc += self.coeffs[k] * out[n - k]
            out[n] = -acc * inv0
        return Series(out)

    def sqrt(self) -> "Series":
        """Square root by Newton iteration, doubling precision each pass."""
        if self.coeffs[0] != 1:
            raise ValueError("sqrt implemented for constant term 1 only")
        half = Fraction(1, 2)
        current = Series([Fraction(1)])
        precision = 1
        while precision <= self.degree:
            precision = min(2 * precision, self.degree + 1)
            target = Series(self.coeffs[:precision])
            lifted = Series(current.coeffs + (Fraction(0),) * (precision - len(current.coeffs)))
            current = (lifted + target * lifted.reciprocal()).scale(half)
        return current


# -- generating functions -----------------------------------------------------

@dataclass(frozen=True)
class SeriesBundle:
    """Generating functions built from the tables, plus relation residuals.

    returns_gf collects the even return weights, lagged_gf the odd-horizon
    lagged ones; excursion_gf, avoiding_even_gf, avoiding_odd_gf, detour_gf
    hold the per-generator series, excursion_total_gf their sum, and lazy_gf
    the lazy-excursion series alpha0^2 z^2 / (1 - excursion_total_gf).

    residuals: "reciprocal_relation" is the largest coefficient of
    returns_gf * (1 - excursion_total_gf - lazy_gf) - 1; "excursion_split"
    the largest coefficient mismatch of excursion_gf against
    alpha^2 z^2 * avoiding_even_gf + detour_gf over all generators.
    """

    returns_gf: Series
    lagged_gf: Series
    excursion_gf: dict[tuple[int, int], Series]
    excursion_total_gf: Series
    avoiding_even_gf: dict[tuple[int, int], Series]
    avoiding_odd_gf: dict[tuple[int, int], Series]
    detour_gf: dict[tuple[int, int], Series]
    lazy_gf: Series
    residuals: dict[str, Fraction]


def generating_functions(tables: ProbabilityTables) -> SeriesBundle:
    degree = 2 * tables.n_max
    zero = Fraction(0)

    g_coeffs = [zero] * (degree + 1)
    for n, value in enumerate(tables.even_returns):
        g_coeffs[2 * n] = value
    returns_gf = Series(g_coeffs)

    h_coeffs = [zero] * (degree + 1)
    for n in range(1, tables.n_max + 1):
        h_coeffs[2 * n - 1] = tables.lagged_returns[n]
    lagged_gf = Series(h_coeffs)

    def step_indexed(table) -> Series:
        coeffs = list(table) + [zero] * (degree + 1 - len(table))
        return Series(coeffs[: degree + 1])

    excursion_gf = {g: step_indexed(t) for g, t in tables.excursion_returns.items()}
    detour_gf = {g: step_indexed(t) for g, t in tables.detour_returns.items()}
    avoiding_even_gf = {
        g: step_indexed(t) for g, t in tables.avoiding_even_returns.items()
    }
    avoiding_odd_gf = {g: step_indexed(t) for g, t in tables.avoiding_odd_returns.items()}

    total = Series.constant(0, degree)
    for series in excursion_gf.values():
        total = total + series
    lazy_gf = (
        Series.monomial(tables.weights.alpha0**2, 2, degree)
        * (Series.constant(1, degree) - total).reciprocal()
    )

    one = Series.constant(1, degree)
    recip_residual = returns_gf * (one - total - lazy_gf) - one
    worst_recip = max((abs(c) for c in recip_residual.coeffs), default=zero)

    worst_split = zero
    for gen, f_series in excursion_gf.items():
        alpha = tables.weights.alpha.get(gen, zero)
        predicted = avoiding_even_gf[gen].shift(2).scale(alpha * alpha) + detour_gf[gen]
        diff = f_series - predicted
        worst_split = max(worst_split, max(abs(c) for c in diff.coeffs))

    return SeriesBundle(
        returns_gf=returns_gf,
        lagged_gf=lagged_gf,
        excursion_gf=excursion_gf,
        excursion_total_gf=total,
        avoiding_even_gf=avoiding_even_gf,
        avoiding_odd_gf=avoiding_odd_gf,
        detour_gf=detour_gf,
        lazy_gf=lazy_gf,
        residuals={
            "reciprocal_relation": worst_recip,
            "excursion_split": worst_split,
        },
    )


# -- regression-fixture dumps -------------------------------------------------

def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _gen_label(gen: tuple[int, int]) -> str:
    i, j = gen
    return f"f{i + 1}g{j + 1}"


def tables_to_json(tables: ProbabilityTables) -> dict:
    """JSON-ready dict of every table, rationals spelled as "p/q" strings."""

    def per_gen(table_map):
        return {
            _gen_label(g): [_frac(c) for c in table]
            for g, table in sorted(table_map.items())
        }

    return {
        "signature": str(tables.signature),
        "n_max": tables.n_max,
        "weights": {
            "alpha0": _frac(tables.weights.alpha0),
            "alpha": {
                _gen_label(g): _frac(a)
                for g, a in sorted(tables.weights.alpha.items())
            },
        },
        "even_returns": [_frac(c) for c in tables.even_returns],
        "lagged_returns": [_frac(c) for c in tables.lagged_returns],
        "excursion_returns": per_gen(tables.excursion_returns),
        "detour_returns": per_gen(tables.detour_returns),
        "avoiding_even_returns": per_gen(tables.avoiding_even_returns),
        "avoiding_odd_returns": per_gen(tables.avoiding_odd_returns),
        "layer_mass": [_frac(c) for c in tables.layer_mass],
    }


def bundle_to_json(bundle: SeriesBundle) -> dict:
    """JSON-ready dict of the generating-function coefficients and residuals."""

    def coeffs(series: Series):
        return [_frac(c) for c in series.coeffs]

    return {
        "returns_gf": coeffs(bundle.returns_gf),
        "lagged_gf": coeffs(bundle.lagged_gf),
        "excursion_gf": {_gen_label(g): coeffs(s) for g, s in sorted(bundle.excursion_gf.items())},
        "excursion_total_gf": coeffs(bundle.excursion_total_gf),
        "avoiding_even_gf": {
            _gen_label(g): coeffs(s) for g, s in sorted(bundle.avoiding_even_gf.items())
        },
        "avoiding_odd_gf": {
            _gen_label(g): coeffs(s) for g, s in sorted(bundle.avoiding_odd_gf.items())
        },
        "detour_gf": {_gen_label(g): coeffs(s) for g, s in sorted(bundle.detour_gf.items())},
        "lazy_gf": coeffs(bundle.lazy_gf),
        "residuals": {k: _frac(v) for k, v in bundle.residuals.items()},
    }
