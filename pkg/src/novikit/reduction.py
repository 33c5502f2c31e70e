"""Iterative cancellation, best approximation, and persistence reduction.

The central algorithm repeatedly cancels the order-minimal part of a
vector against shifted spans of a matrix's columns.  Every cancellation
strictly raises the rank-2 valuation; over a discrete value set the trace
either stabilizes (a fixed point, yielding a best approximation from the
image) or exits a cutoff window.  A trace whose two coordinates diverge
at different speeds is exactly the pathology the divergence check hunts
for: a legal family of boundary operators never produces one, while the
one-sided operator ``1 - T^B`` with period pair (0, 1) always does.

The cancellation rule is the canonical deterministic choice: at the
current valuation level, solve the finite linear system over the
coefficient field that cancels the whole leading part against the shifted
columns, pivoting by lowest column index.  Completeness of the candidate
shift set is guaranteed when the period map has trivial kernel on the
lattice; see the package docs for the degenerate-kernel caveat.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import (
    Chain,
    FilteredComplex,
    chain_cleanup,
    chain_is_zero,
    chain_sub,
    validate,
)
from .periods import Exponent, exponent_sub
from .series import (
    INF,
    LexOrder,
    NovikovElement,
    Rank2Value,
    RingMode,
    VALUE_INF,
    monomial,
)

DEFAULT_STALL_WINDOW = 8


class FloerDivergenceError(RuntimeError):
    """Raised when a best approximation does not exist at cutoff scale."""

    def __init__(self, outcome: "ReductionOutcome"):
        self.outcome = outcome
        super().__init__(
            f"valuation trace diverges ({outcome.kind}); no best approximation"
        )


class NormalizationError(ValueError):
    pass


@dataclass
class ReductionOutcome:
    """Result of the cancellation iteration.

    ``kind`` is one of ``fixed-point``, ``diverges-second`` (one valuation
    coordinate stalls while the other exits the cutoff window; the stalled
    value is recorded) and ``diverges-both``.  ``approximant`` is the part
    of the input vector that was cancelled, i.e. the image element found;
    ``residual`` is what remains.  ``trace`` lists the valuations of the
    successive iterates, strictly increasing in the active order.
    """

    kind: str
    approximant: dict[str, NovikovElement]
    residual: dict[str, NovikovElement]
    trace: tuple[Rank2Value, ...]
    combo: dict[str, NovikovElement]
    stabilized: Fraction | None = None
    axis: int = 1

    @property
    def is_fixed_point(self) -> bool:
        return self.kind == "fixed-point"


class TermGeometry:
    """Valuation geometry of chain terms, with optional action offsets.

    A term is a (component, exponent) pair; its value pair is the
    exponent's period pair minus the component's offset pair.  Offsets
    turn the plain valuation into the filtration-aware one used by the
    spectral minimization: minimizing the filtration level is maximizing
    the offset valuation of the residual.
    """

    def __init__(self, system, offsets: Mapping[str, tuple[Fraction, Fraction]] | None = None):
        self.system = system
        self.offsets = dict(offsets or {})

    def pair(self, comp: str, exponent: Exponent) -> tuple[Fraction, Fraction]:
        g0, g1 = self.system.pair(exponent)
        off = self.offsets.get(comp)
        if off is None:
            return (g0, g1)
        return (g0 - off[0], g1 - off[1])


def chain_level(chain: Chain, geom: TermGeometry, order):
    """Order-minimal value pair of a chain and the attaining terms.

    Returns ``(Rank2Value, [(component, exponent), ...])``; the value is
    fully infinite exactly for the zero chain.
    """
    best_key = None
    for comp in chain:
        coeff = chain[comp]
        for a in coeff.terms:
            k = order.key(geom.pair(comp, a))
            if best_key is None or k < best_key:
                best_key = k
    if best_key is None:
        return VALUE_INF, []
    level = []
    best_pair = None
    for comp in sorted(chain):
        coeff = chain[comp]
        for a in sorted(coeff.terms):
            p = geom.pair(comp, a)
            if order.key(p) == best_key:
                level.append((comp, a))
                if best_pair is None or p < best_pair:
                    best_pair = p
    return Rank2Value(*best_pair), level


def normalize_columns(columns: Sequence[Chain], order=None,
                      geom: TermGeometry | None = None) -> tuple[list[dict[str, NovikovElement]], list[Exponent]]:
    """Shift each column by a monomial so its valuation is the zero pair."""
    order = order or LexOrder()
    out = []
    shifts = []
    for col in columns:
        col = chain_cleanup(col)
        if not col:
            out.append(col)
            shifts.append(None)
            continue
        g = geom or TermGeometry(next(iter(col.values())).system)
        value, level = chain_level(col, g, order)
        comp, a = level[0]
        neg = tuple(-c for c in a)
        out.append(chain_cleanup({k: v.shift(neg) for k, v in col.items()}))
        shifts.append(a)
    return out, shifts


def _solve_linear(field, rows: list[list], rhs: list):
    """Solve A x = b over the field, free variables set to zero.

    Pivots are chosen by lowest variable index.  Returns None when
    inconsistent.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivot_of_var: dict[int, int] = {}
    row_used = [False] * m
    for var in range(n):
        pin = None
        for i in range(m):
            if not row_used[i] and not field.is_zero(aug[i][var]):
                pin = i
                break
        if pin is None:
            continue
        inv = field.inv(aug[pin][var])
        aug[pin] = [field.mul(x, inv) for x in aug[pin]]
        for i in range(m):
            if i != pin and not field.is_zero(aug[i][var]):
                f = aug[i][var]
                aug[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(aug[i], aug[pin])]
        row_used[pin] = True
        pivot_of_var[var] = pin
    for i in range(m):
        if not row_used[i] and not field.is_zero(aug[i][n]):
            return None
    x = [field.zero] * n
    for var, i in pivot_of_var.items():
        x[var] = aug[i][n]
    return x


def _phi_step(v: Chain, columns: Sequence[Chain], leads: Sequence[list],
              geom: TermGeometry, order, field):
    """One canonical cancellation: returns (new_v, used) or None at a fixed point.

    ``used`` lists (column index, shift exponent, coefficient) with the
    subtracted combination sum(c * T^D * column).
    """
    value, level = chain_level(v, geom, order)
    level_set = set(level)
    # Candidate shifted columns whose leading part can touch the level.
    cands: list[tuple[int, Exponent]] = []
    seen = set()
    for i, lead in enumerate(leads):
        for (cu, b) in lead:
            for (cv, a) in level:
                if cu != cv:
                    continue
                d = exponent_sub(a, b)
                if (i, d) not in seen:
                    seen.add((i, d))
                    cands.append((i, d))
    if not cands:
        return None
    cands.sort(key=lambda t: (t[0], t[1]))
    # Equation index: every level point touched by v or a shifted lead.
    points = set(level)
    contrib: dict[tuple[int, Exponent], dict] = {}
    for (i, d) in cands:
        cd: dict = {}
        for (cu, b) in leads[i]:
            pt = (cu, tuple(x + y for x, y in zip(b, d)))
            cd[pt] = columns[i][cu].terms[b]
            points.add(pt)
        contrib[(i, d)] = cd
    points = sorted(points)
    rows = []
    rhs = []
    for pt in points:
        rows.append([contrib[c].get(pt, field.zero) for c in cands])
        comp, a = pt
        if pt in level_set:
            rhs.append(v[comp].terms[a])
        else:
            rhs.append(field.zero)
    sol = _solve_linear(field, rows, rhs)
    if sol is None:
        return None
    used = [(i, d, c) for (i, d), c in zip(cands, sol) if not field.is_zero(c)]
    if not used:
        return None
    new_v = dict(v)
    for i, d, c in used:
        scaled = {k: col.shift(d).scale(c) for k, col in columns[i].items()}
        new_v = chain_sub(new_v, scaled)
    return chain_cleanup(new_v), used


def _saturate(cols, exprs, geom, order, field, cutoff, stall_window):
    """Echelonize the spanning set so leading parts span every level.

    Reduces each column against the others with the same cancellation
    rule; a column whose leading part is a combination of the others'
    becomes the higher-valuation residual (or is dropped when dependent).
    This is the non-Archimedean analogue of making the leading coefficient
    vectors independent, and is what makes the fixed point of the
    iteration a genuine best approximation.  One-sided columns whose
    self-reduction trace stalls are kept as they are.
    """
    work = [(dict(c), dict(e)) for c, e in zip(cols, exprs)]
    for _ in range(256):
        changed = False
        for i in range(len(work)):
            col, expr = work[i]
            others = [work[j][0] for j in range(len(work)) if j != i]
            if not others:
                continue
            leads = [chain_level(c, geom, order)[1] for c in others]
            trace = [chain_level(col, geom, order)[0]]
            reduced = False
            while col:
                step = _phi_step(col, others, leads, geom, order, field)
                if step is None:
                    break
                col, used = step
                reduced = True
                for j, d, c_coeff in used:
                    src = j if j < i else j + 1
                    mono = _monomial_like(work[src][0], geom, d, c_coeff, field)
                    for name, mult in work[src][1].items():
                        contrib = mono * mult
                        expr[name] = expr[name] - contrib if name in expr \
                            else -contrib
                value, _ = chain_level(col, geom, order)
                trace.append(value)
                if _detect_stall(trace, cutoff, stall_window) is not None:
                    break
            if reduced:
                expr = {k: v for k, v in expr.items() if not v.is_zero()}
                if col:
                    work[i] = (chain_cleanup(col), expr)
                else:
                    work.pop(i)
                changed = True
                break
        if not changed:
            return work
    raise RuntimeError("column saturation failed to stabilize")


def _monomial_like(col, geom, exponent, coeff, field):
    ambient = next(iter(col.values()))
    return monomial(ambient.system, field, ambient.mode, ambient.cutoff,
                    exponent, coeff)


def fixed_point(columns, v: Chain, order=None, cutoff=None, *,
                offsets: Mapping[str, tuple] | None = None,
                stall_window: int = DEFAULT_STALL_WINDOW,
                require_normalized: bool = True,
                max_steps: int = 5000) -> ReductionOutcome:
    """Iterate the canonical cancellation map until it fixes the vector.

    ``columns`` spans the image being cancelled against; ``cutoff`` bounds
    the valuation window used for divergence classification.  With
    ``offsets`` the valuation of each term is shifted per component, which
    turns the iteration into a filtration-level minimizer.
    """
    order = order or LexOrder()
    names, cols = _as_columns(columns)
    cols = [chain_cleanup(c) for c in cols]
    keep = [i for i, c in enumerate(cols) if c]
    names = [names[i] for i in keep]
    cols = [cols[i] for i in keep]
    v = chain_cleanup(v)
    if cutoff is None:
        raise ValueError("cutoff must be provided")
    cutoff = Fraction(cutoff)
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")

    ambient = None
    for source in ([v] + cols):
        for coeff in source.values():
            ambient = coeff
            break
        if ambient is not None:
            break
    if ambient is None:
        return ReductionOutcome("fixed-point", {}, {}, (VALUE_INF,), {})

    geom = TermGeometry(ambient.system, offsets)
    field = ambient.field
    one = ambient.like({(0,) * ambient.system.rank: field.one})
    for c in cols:
        value, _ = chain_level(c, geom, order)
        if require_normalized and offsets is None and value.as_tuple() != (Fraction(0), Fraction(0)):
            raise NormalizationError(
                f"column valuation {value} is not the zero pair; normalize first"
            )
    basket = _saturate(cols, [{n: one} for n in names], geom, order, field,
                       cutoff, stall_window)
    sat_cols = [b[0] for b in basket]
    sat_exprs = [b[1] for b in basket]
    leads = [chain_level(c, geom, order)[1] for c in sat_cols]

    trace: list[Rank2Value] = []
    combo: dict[str, NovikovElement] = {}
    original = dict(v)
    steps = 0
    while True:
        value, _ = chain_level(v, geom, order)
        trace.append(value)
        if value.is_infinite:
            break
        if not value.is_infinite and value.v0 > cutoff and value.v1 > cutoff:
            return _outcome("diverges-both", original, v, trace, combo)
        stall = _detect_stall(trace, cutoff, stall_window)
        if stall is not None:
            axis, stabilized = stall
            return ReductionOutcome("diverges-second", chain_sub(original, v), v,
                                    tuple(trace), combo, stabilized=stabilized,
                                    axis=axis)
        if not sat_cols:
            break
        step = _phi_step(v, sat_cols, leads, geom, order, field)
        if step is None:
            break
        new_v, used = step
        new_value, _ = chain_level(new_v, geom, order)
        if not new_value.is_infinite and order.compare(new_value, value) <= 0:
            raise RuntimeError("cancellation failed to raise the valuation")
        for i, d, c in used:
            mono = monomial(ambient.system, field, ambient.mode, ambient.cutoff, d, c)
            for name, mult in sat_exprs[i].items():
                contrib = mono * mult
                combo[name] = combo[name] + contrib if name in combo else contrib
        v = new_v
        steps += 1
        if steps > max_steps:
            raise RuntimeError(f"no termination within {max_steps} steps")
    combo = {k: val for k, val in combo.items() if not val.is_zero()}
    return _outcome("fixed-point", original, v, trace, combo)


def _outcome(kind, original, v, trace, combo) -> ReductionOutcome:
    return ReductionOutcome(kind, chain_sub(original, v), v, tuple(trace), combo)


def _detect_stall(trace: list[Rank2Value], cutoff: Fraction, window: int):
    """One-sided divergence over the trailing window.

    Classifies a trace whose coordinates move at incompatible speeds: one
    coordinate leaves the cutoff window while the other fails to grow over
    the whole trailing window (constant, or even decreasing).  Balanced
    traces (both coordinates growing) are left to run into truncation.
    """
    if len(trace) < window:
        return None
    tail = trace[-window:]
    if any(t.is_infinite for t in tail):
        return None
    first, last = tail[0], tail[-1]
    if last.v1 > cutoff and last.v0 <= first.v0:
        return (1, last.v0)
    if last.v0 > cutoff and last.v1 <= first.v1:
        return (0, last.v1)
    return None


def _as_columns(columns) -> tuple[list[str], list[dict[str, NovikovElement]]]:
    if isinstance(columns, Mapping):
        keys = sorted(columns)
        return [str(k) for k in keys], [dict(columns[k]) for k in keys]
    cols = [dict(c) for c in columns]
    return [f"col{i}" for i in range(len(cols))], cols


def best_approximation(columns, w: Chain, order=None, cutoff=None, *,
                       offsets: Mapping[str, tuple] | None = None,
                       stall_window: int = DEFAULT_STALL_WINDOW,
                       require_normalized: bool = True):
    """The image element closest to w in the chosen order.

    Returns ``(u, achieved)`` where u lies in the span of the columns and
    ``achieved`` is the valuation of w - u, maximal over the span at
    cutoff scale.  Either u = 0 or u's valuation equals w's.  Divergent
    traces raise :class:`FloerDivergenceError` carrying the witness.
    """
    outcome = fixed_point(columns, w, order, cutoff, offsets=offsets,
                          stall_window=stall_window,
                          require_normalized=require_normalized)
    if not outcome.is_fixed_point:
        raise FloerDivergenceError(outcome)
    geom_offsets = offsets
    order = order or LexOrder()
    if chain_is_zero(outcome.residual):
        achieved = VALUE_INF
    else:
        ambient = next(iter(outcome.residual.values()))
        geom = TermGeometry(ambient.system, geom_offsets)
        achieved, _ = chain_level(outcome.residual, geom, order)
    return outcome.approximant, achieved


@dataclass
class DivergenceWitness:
    """A probe whose cancellation trace violates balanced divergence."""

    probe: dict[str, NovikovElement]
    trace: tuple[Rank2Value, ...]
    axis: int
    stabilized: Fraction


@dataclass
class DivergenceCheck:
    passed: bool
    witness: DivergenceWitness | None = None

    def __bool__(self) -> bool:
        return self.passed


def floer_divergence_check(columns, cutoff, *, order=None, seed: int = 0,
                           stall_window: int = DEFAULT_STALL_WINDOW,
                           n_random: int = 4) -> DivergenceCheck:
    """Probe the image of an operator for one-sided valuation divergence.

    Runs the cancellation iteration from every column, from every
    single-term slice of a column, and from a few seeded random vectors
    supported on the columns' components.  A trace whose valuation stalls
    in one coordinate while the other exits the cutoff window is returned
    as a witness; operators arising as boundary operators of legal
    filtered complexes must pass.
    """
    import random as _random

    order = order or LexOrder()
    _, raw = _as_columns(columns)
    cols = [chain_cleanup(c) for c in raw]
    cols = [c for c in cols if c]
    if not cols:
        return DivergenceCheck(True)
    norm_cols, _ = normalize_columns(cols, order)

    probes: list[dict[str, NovikovElement]] = []
    for col in norm_cols:
        probes.append(dict(col))
        for comp in sorted(col):
            coeff = col[comp]
            for a in sorted(coeff.terms):
                probes.append({comp: coeff.like({a: coeff.terms[a]})})
    rng = _random.Random(seed)
    ambient = next(iter(norm_cols[0].values()))
    support = sorted({(comp, a) for col in norm_cols for comp in col
                      for a in col[comp].terms})
    for _ in range(n_random):
        picks = [term for term in support if rng.random() < 0.5] or [support[0]]
        probe: dict[str, NovikovElement] = {}
        for comp, a in picks:
            mono = monomial(ambient.system, ambient.field, ambient.mode,
                            ambient.cutoff, a, ambient.field.sample_nonzero(rng))
            probe[comp] = probe[comp] + mono if comp in probe else mono
        probes.append(chain_cleanup(probe))

    for probe in probes:
        if not probe:
            continue
        outcome = fixed_point(norm_cols, probe, order, cutoff,
                              stall_window=stall_window)
        if outcome.kind == "diverges-second":
            return DivergenceCheck(False, DivergenceWitness(
                probe=probe, trace=outcome.trace, axis=outcome.axis,
                stabilized=outcome.stabilized))
    return DivergenceCheck(True)


# ---------------------------------------------------------------------------
# Cutoff-scale ranks across ring modes.
# ---------------------------------------------------------------------------


def matrix_rank_at_cutoff(columns: Mapping[str, Chain], mode: RingMode) -> tuple[int, bool]:
    """Rank by elimination with cutoff-invertible pivots, plus a stuck flag.

    Entries are reinterpreted in the requested mode first.  Elimination
    stops when no remaining entry has an inverse at cutoff scale; leftover
    nonzero entries then set the stuck flag (the operator's image is not
    spanned by unit pivots — the mode sees genuinely smaller rank).
    """
    from .series import convert_mode, try_invert

    work: dict[str, dict[str, NovikovElement]] = {}
    for c, col in columns.items():
        clean = {}
        for r, e in col.items():
            e2 = convert_mode(e, mode)
            if not e2.is_zero():
                clean[r] = e2
        if clean:
            work[c] = clean
    rank = 0
    while work:
        pivot = None
        for c in sorted(work):
            for r in sorted(work[c]):
                inv = try_invert(work[c][r])
                if inv is not None:
                    pivot = (r, c, inv)
                    break
            if pivot:
                break
        if pivot is None:
            break
        r0, c0, inv = pivot
        pivcol = work.pop(c0)
        for c in sorted(work):
            col = work[c]
            if r0 not in col:
                continue
            factor = col[r0] * inv
            for r, e in pivcol.items():
                upd = col.get(r)
                upd = (upd - e * factor) if upd is not None else -(e * factor)
                if upd.is_zero():
                    col.pop(r, None)
                else:
                    col[r] = upd
            if not col:
                work.pop(c)
        for c in list(work):
            work[c].pop(r0, None)
            if not work[c]:
                work.pop(c)
        rank += 1
    stuck = bool(work)
    return rank, stuck


def homology_ranks_at_cutoff(cx: FilteredComplex, s, mode: RingMode) -> tuple[dict[int, int], bool]:
    """Per-degree homology ranks of a slice, seen through one ring mode.

    rank H_k = dim C_k - rank(d_k) - rank(d_{k+1}); the stuck flag marks
    degrees where elimination left non-unit residue, i.e. where the
    reported number is a cutoff-scale cokernel count rather than a clean
    free rank.
    """
    matrix = cx.boundary_matrix(s)
    degrees = sorted({g.degree for g in cx.generators})
    dims = {d: sum(1 for g in cx.generators if g.degree == d) for d in degrees}
    ranks = {}
    stuck_any = False
    for d in degrees:
        cols = {g.name: matrix.get(g.name, {}) for g in cx.generators
                if g.degree == d and matrix.get(g.name)}
        r, stuck = matrix_rank_at_cutoff(cols, mode) if cols else (0, False)
        ranks[d] = r
        stuck_any = stuck_any or stuck
    out = {}
    for d in degrees:
        out[d] = dims[d] - ranks.get(d, 0) - ranks.get(d + 1, 0)
    return out, stuck_any


# ---------------------------------------------------------------------------
# Persistence reduction at a fixed parameter.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bar:
    birth: Fraction
    death: object  # Fraction, or INF for an unbounded bar
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "birth", Fraction(self.birth))
        if self.death != INF:
            object.__setattr__(self, "death", Fraction(self.death))
            if not self.birth < self.death:
                raise ValueError("finite bars need birth < death")

    @property
    def is_finite(self) -> bool:
        return self.death != INF

    @property
    def length(self):
        return self.death - self.birth if self.is_finite else INF


@dataclass(frozen=True)
class Barcode:
    bars: tuple[Bar, ...]

    def __init__(self, bars):
        object.__setattr__(self, "bars", tuple(sorted(
            bars, key=lambda b: (b.degree, b.birth,
                                 (1, 0) if not b.is_finite else (0, b.death)))))

    def finite(self) -> tuple[Bar, ...]:
        return tuple(b for b in self.bars if b.is_finite)

    def infinite(self) -> tuple[Bar, ...]:
        return tuple(b for b in self.bars if not b.is_finite)

    def in_degree(self, degree: int) -> tuple[Bar, ...]:
        return tuple(b for b in self.bars if b.degree == degree)

    def longest_finite_length(self) -> Fraction:
        finite = self.finite()
        if not finite:
            return Fraction(0)
        return max(b.length for b in finite)

    def to_csv(self) -> str:
        rows = ["degree,birth,death"]
        for b in self.bars:
            death = "inf" if not b.is_finite else _pq(b.death)
            rows.append(f"{b.degree},{_pq(b.birth)},{death}")
        return "\n".join(rows) + "\n"


def _pq(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


class _Collapsed:
    """One-variable truncated series: value -> field coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = terms

    def lead(self) -> Fraction:
        return min(self.terms)


def _collapse(entry: NovikovElement, t: Fraction, cutoff: Fraction) -> dict:
    field = entry.field
    out: dict = {}
    for a, c in entry.terms.items():
        g0, g1 = entry.system.pair(a)
        v = (1 - t) * g0 + t * g1
        if v > cutoff:
            continue
        s = field.add(out.get(v, field.zero), c)
        if field.is_zero(s):
            out.pop(v, None)
        else:
            out[v] = s
    return out


def _c_sub_scaled(field, target: dict, source: dict, factor, shift: Fraction,
                  cutoff: Fraction) -> dict:
    """target - factor * T^shift * source, truncated."""
    out = dict(target)
    for v, c in source.items():
        nv = v + shift
        if nv > cutoff:
            continue
        s = field.sub(out.get(nv, field.zero), field.mul(factor, c))
        if field.is_zero(s):
            out.pop(nv, None)
        else:
            out[nv] = s
    return out


class _SliceReducer:
    """Column reduction of one parameter slice over the collapsed field."""

    def __init__(self, cx: FilteredComplex, t: Fraction):
        self.cx = cx
        self.t = t
        self.field = cx.coefficient_field
        self.cutoff = cx.cutoff
        self.eta = {g.name: g.action_at(t) for g in cx.generators}
        self.degree = {g.name: g.degree for g in cx.generators}
        self.index = {g.name: i for i, g in enumerate(cx.generators)}
        matrix = cx.boundary_matrix(t)
        self.columns: dict[str, dict[str, dict]] = {}
        for g in cx.generators:
            col = {}
            for row, entry in matrix.get(g.name, {}).items():
                series = _collapse(entry, t, self.cutoff)
                if series:
                    col[row] = series
            self.columns[g.name] = col

    def vec_peak(self, vec: dict[str, dict]):
        """Best (filtration, row-order, value) position of a vector, or None."""
        best = None
        for row, series in vec.items():
            for v in series:
                filt = self.eta[row] - v
                key = (-filt, self.index[row], v)
                if best is None or key < best[0]:
                    best = (key, row, v)
        if best is None:
            return None
        return best[1], best[2]

    def vec_level(self, vec: dict[str, dict]):
        peak = self.vec_peak(vec)
        if peak is None:
            return None
        row, v = peak
        return self.eta[row] - v

    def reduce_against(self, vec, combo, pivots):
        """Cancel the peak while a registered pivot covers its row."""
        while vec:
            peak = self.vec_peak(vec)
            row, v = peak
            if row not in pivots:
                return vec, combo, (row, v)
            pvec, pcombo = pivots[row]
            prow, pv = self.vec_peak(pvec)
            shift = v - pv
            factor = self.field.div(vec[row][v], pvec[prow][pv])
            vec = self._vec_sub(vec, pvec, factor, shift)
            combo = self._vec_sub(combo, pcombo, factor, shift)
        return vec, combo, None

    def _vec_sub(self, target, source, factor, shift):
        out = {k: dict(vv) for k, vv in target.items()}
        for row, series in source.items():
            cur = out.get(row, {})
            cur = _c_sub_scaled(self.field, cur, series, factor, shift, self.cutoff)
            if cur:
                out[row] = cur
            else:
                out.pop(row, None)
        return out

    def chain_level_of_combo(self, combo) -> Fraction:
        level = self.vec_level(combo)
        if level is None:
            raise ValueError("empty combination")
        return level


def persistence_barcode(cx: FilteredComplex, t, *, prevalidated: bool = False) -> Barcode:
    """Barcode of the filtration-filtered slice at parameter t.

    Column reduction over the working field with exponent-truncated
    coefficients, processing columns in increasing filtration of their own
    generator; among equal levels, generator order breaks ties.
    """
    t = Fraction(t)
    if not prevalidated:
        report = validate(cx, [t])
        if not report:
            raise ValueError(f"complex fails validation: {report.violations[:3]}")
    red = _SliceReducer(cx, t)
    field = red.field
    one = field.one

    degrees = sorted({g.degree for g in cx.generators})
    by_degree = {d: [g.name for g in cx.generators if g.degree == d] for d in degrees}

    bars: list[Bar] = []
    pivots_by_degree: dict[int, dict] = {}
    cycles_by_degree: dict[int, list] = {}

    for d in degrees:
        pivots: dict[str, tuple] = {}
        cycles: list = []
        names = sorted(by_degree[d], key=lambda n: (red.eta[n], red.index[n]))
        for name in names:
            vec = {r: dict(s) for r, s in red.columns[name].items()}
            combo = {name: {Fraction(0): one}}
            vec, combo, spot = red.reduce_against(vec, combo, pivots)
            if spot is None:
                cycles.append((name, combo))
            else:
                row, v = spot
                pivots[row] = (vec, combo)
                birth = red.eta[row] - v
                death = red.chain_level_of_combo(combo)
                bars.append(Bar(birth, death, red.degree[row]))
        pivots_by_degree[d] = pivots
        cycles_by_degree[d] = cycles

    # Surviving homology classes per degree: cycles not killed from above.
    for d in degrees:
        cycles = cycles_by_degree.get(d, [])
        if not cycles:
            continue
        killers = pivots_by_degree.get(d + 1, {})
        survivors: dict[str, tuple] = {}
        # Highest anchors first: each one greedily reduces through boundary
        # pivots and earlier survivors down to its minimal class level, so
        # births come out at spectral values rather than lattice translates.
        ordered = sorted(cycles, key=lambda item: (-red.chain_level_of_combo(item[1]),
                                                   red.index[item[0]]))
        for name, combo in ordered:
            vec = {r: dict(s) for r, s in combo.items()}
            while vec:
                peak = red.vec_peak(vec)
                row, v = peak
                if row in killers:
                    pvec, _ = killers[row]
                    prow, pv = red.vec_peak(pvec)
                    shift = v - pv
                    factor = field.div(vec[row][v], pvec[prow][pv])
                    vec = red._vec_sub(vec, pvec, factor, shift)
                    continue
                if row in survivors:
                    pvec = survivors[row][0]
                    prow, pv = red.vec_peak(pvec)
                    shift = v - pv
                    factor = field.div(vec[row][v], pvec[prow][pv])
                    vec = red._vec_sub(vec, pvec, factor, shift)
                    continue
                break
            if not vec:
                continue
            row, v = red.vec_peak(vec)
            survivors[row] = (vec, name)
            # Births of unbounded bars are only defined up to the period
            # value group; normalize the class representative so its peak
            # value is zero, anchoring the birth at the peak generator.
            bars.append(Bar(red.eta[row], INF, d))
    return Barcode(bars)
