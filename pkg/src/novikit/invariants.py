"""Spectral invariants, boundary depth, bottleneck distance, and the
semicontinuity scanner.

The spectral value of a cycle at parameter t is the minimal filtration
level over its coset modulo boundaries, minimized via the t-weighted best
approximation; since spectra are finite after truncation the infimum is
attained and a realizing chain is returned.  Upper semicontinuity of the
value at t = 0 is checked exactly on assembled piecewise-affine curves;
lower semicontinuity is only ever reported, never asserted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import envelope as env
from .complexes import (
    Chain,
    FilteredComplex,
    NEG_INF,
    apply_matrix,
    chain_cleanup,
    chain_is_zero,
    chain_sub,
    ell,
    ell_curve,
)
from .reduction import (
    Bar,
    Barcode,
    best_approximation,
    fixed_point,
    persistence_barcode,
)
from .series import INF, NovikovElement, TWeightedOrder


class SpectralError(ValueError):
    pass


@dataclass
class SpectralResult:
    """A realized spectral value: the witness attains it exactly.

    ``boundary`` is the image element subtracted from the input cycle;
    witness = cycle - boundary.  ``degenerate`` marks the minus-infinity
    convention for cycles that bound at cutoff scale (or the zero cycle).
    """

    value: object
    witness: dict[str, NovikovElement]
    boundary: dict[str, NovikovElement]
    spectrum_member: bool | None
    degenerate: bool = False


def _degree_of_chain(cx: FilteredComplex, chain: Chain) -> int:
    degrees = {cx.generator(name).degree for name in chain}
    if len(degrees) != 1:
        raise SpectralError(f"chain mixes degrees {sorted(degrees)}")
    return degrees.pop()


def _action_offsets(cx: FilteredComplex) -> dict[str, tuple[Fraction, Fraction]]:
    return {g.name: g.action_endpoints for g in cx.generators}


def _boundary_columns_into_degree(cx: FilteredComplex, matrix, degree: int):
    """Columns of the boundary whose image lands in the given degree."""
    cols = {}
    for g in cx.generators:
        if g.degree != degree + 1:
            continue
        col = chain_cleanup(matrix.get(g.name, {}))
        if col:
            cols[g.name] = col
    return cols


def _rho_against_matrix(cx: FilteredComplex, matrix, cycle: Chain, t: Fraction,
                        cutoff: Fraction) -> SpectralResult:
    cycle = chain_cleanup(cycle)
    if not cycle:
        return SpectralResult(NEG_INF, {}, {}, None, degenerate=True)
    closed = apply_matrix(cx, matrix, cycle)
    if closed:
        raise SpectralError("input chain is not a cycle at this parameter")
    degree = _degree_of_chain(cx, cycle)
    columns = _boundary_columns_into_degree(cx, matrix, degree)
    order = TWeightedOrder(t)
    offsets = _action_offsets(cx)
    u, achieved = best_approximation(columns, cycle, order, cutoff,
                                     offsets=offsets, require_normalized=False)
    witness = chain_sub(cycle, u)
    if chain_is_zero(witness):
        return SpectralResult(NEG_INF, {}, u, None, degenerate=True)
    value = -achieved.weight(t)
    assert ell(cx, witness, t) == value
    member = None
    try:
        member = value in spectrum_against(cx, cutoff, t)
    except SpectralError:
        member = None
    return SpectralResult(value, witness, u, member)


def rho(cx: FilteredComplex, cycle: Chain, t, cutoff=None) -> SpectralResult:
    """Minimal filtration level over the cycle's coset at parameter t.

    Minimization runs the t-weighted best approximation against the
    boundary columns one degree up; divergence (which brands the complex
    as failing the balanced-divergence requirement) propagates with its
    witness trace.
    """
    t = Fraction(t)
    cutoff = cx.cutoff if cutoff is None else Fraction(cutoff)
    matrix = cx.boundary_matrix(t)
    return _rho_against_matrix(cx, matrix, cycle, t, cutoff)


def _lattice_window(cx: FilteredComplex, cutoff: Fraction) -> list:
    """All lattice exponents with both period values in [0, cutoff]."""
    sys = cx.system
    k = sys.rank
    if k == 0:
        return [()]
    lo = [None] * k
    hi = [None] * k
    if k == 1:
        bounds = []
        for w in (sys.omega0[0], sys.omega1[0]):
            if w > 0:
                bounds.append((Fraction(0), cutoff / w))
            elif w < 0:
                bounds.append((cutoff / w, Fraction(0)))
        if not bounds:
            raise SpectralError("period forms vanish; window is unbounded")
        lo[0] = max(b[0] for b in bounds)
        hi[0] = min(b[1] for b in bounds)
    elif k == 2:
        a, b = sys.omega0
        c, d = sys.omega1
        det = a * d - b * c
        if det == 0:
            raise SpectralError("degenerate period matrix; window is unbounded")
        corners = []
        for v0 in (Fraction(0), cutoff):
            for v1 in (Fraction(0), cutoff):
                x = (d * v0 - b * v1) / det
                y = (-c * v0 + a * v1) / det
                corners.append((x, y))
        lo = [min(p[i] for p in corners) for i in range(2)]
        hi = [max(p[i] for p in corners) for i in range(2)]
    else:
        raise SpectralError("window enumeration supports lattice rank <= 2")
    import math

    ranges = [range(math.ceil(l), math.floor(h) + 1) for l, h in zip(lo, hi)]
    out = []

    def rec(prefix, idx):
        if idx == k:
            g0, g1 = sys.pair(tuple(prefix))
            if 0 <= g0 <= cutoff and 0 <= g1 <= cutoff:
                out.append(tuple(prefix))
            return
        for c in ranges[idx]:
            rec(prefix + [c], idx + 1)

    rec([], 0)
    return sorted(out)


def spectrum_against(cx: FilteredComplex, cutoff: Fraction, t: Fraction) -> list:
    window = _lattice_window(cx, cutoff)
    vals = set()
    for g in cx.generators:
        eta = g.action_at(t)
        for a in window:
            g0, g1 = cx.system.pair(a)
            vals.add(eta - ((1 - t) * g0 + t * g1))
    return sorted(vals)


def spectrum(cx: FilteredComplex, t, cutoff=None) -> list:
    """Action values reachable within the cutoff window: finite, sorted."""
    t = Fraction(t)
    cutoff = cx.cutoff if cutoff is None else Fraction(cutoff)
    return spectrum_against(cx, cutoff, t)


def boundary_depth(cx: FilteredComplex, t, *, prevalidated: bool = False) -> Fraction:
    """Longest finite bar of the slice's barcode; zero when none exist."""
    barcode = persistence_barcode(cx, t, prevalidated=prevalidated)
    return barcode.longest_finite_length()


# ---------------------------------------------------------------------------
# Bottleneck distance.
# ---------------------------------------------------------------------------


def _match_feasible(costs: list[list], del_a: list, del_b: list, delta) -> bool:
    """Perfect matching with diagonal deletions at tolerance delta."""
    n, m = len(del_a), len(del_b)
    # Left nodes: real A bars and diagonal copies of B bars.
    # Right nodes: real B bars and diagonal copies of A bars.
    size = n + m

    def edges(left: int):
        if left < n:
            for j in range(m):
                if costs[left][j] is not None and costs[left][j] <= delta:
                    yield j
            if del_a[left] <= delta:
                yield m + left
        else:
            b = left - n
            if del_b[b] <= delta:
                yield b
            for j in range(m, m + n):
                yield j

    match_right = [-1] * (m + n)

    def augment(left: int, seen: set) -> bool:
        for right in edges(left):
            if right in seen:
                continue
            seen.add(right)
            if match_right[right] == -1 or augment(match_right[right], seen):
                match_right[right] = left
                return True
        return False

    matched = 0
    for left in range(size):
        if augment(left, set()):
            matched += 1
    return matched == size


def _bottleneck_degree(bars_a: Sequence[Bar], bars_b: Sequence[Bar]):
    inf_a = sorted(b.birth for b in bars_a if not b.is_finite)
    inf_b = sorted(b.birth for b in bars_b if not b.is_finite)
    if len(inf_a) != len(inf_b):
        return INF
    base = Fraction(0)
    for x, y in zip(inf_a, inf_b):
        base = max(base, abs(x - y))

    fin_a = [b for b in bars_a if b.is_finite]
    fin_b = [b for b in bars_b if b.is_finite]
    costs: list[list] = []
    cands = {base}
    for a in fin_a:
        row = []
        for b in fin_b:
            c = max(abs(a.birth - b.birth), abs(a.death - b.death))
            row.append(c)
            cands.add(c)
        costs.append(row)
    del_a = [(a.death - a.birth) / 2 for a in fin_a]
    del_b = [(b.death - b.birth) / 2 for b in fin_b]
    cands.update(del_a)
    cands.update(del_b)
    feas = sorted(c for c in cands if c >= base)
    lo, hi = 0, len(feas) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        if _match_feasible(costs, del_a, del_b, feas[mid]):
            best = feas[mid]
            hi = mid - 1
        else:
            lo = mid + 1
    if best is None:
        raise AssertionError("largest candidate must be feasible")
    return best


def bottleneck(b1: Barcode, b2: Barcode):
    """Exact bottleneck distance, maximized over degrees.

    Infinite bars only match infinite bars (cost: birth difference); a
    degree with mismatched infinite-bar counts reports distance +inf.
    """
    degrees = {b.degree for b in b1.bars} | {b.degree for b in b2.bars}
    best = Fraction(0)
    for d in sorted(degrees):
        val = _bottleneck_degree(b1.in_degree(d), b2.in_degree(d))
        if val == INF:
            return INF
        best = max(best, val)
    return best


# ---------------------------------------------------------------------------
# Semicontinuity scan.
# ---------------------------------------------------------------------------


@dataclass
class SemicontinuityReport:
    curve: env.PiecewiseAffine
    usc_at_zero: bool
    lsc_at_zero: bool
    right_limit: Fraction
    value_at_zero: Fraction
    grid_values: dict
    witness_levels: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "usc_at_zero": self.usc_at_zero,
            "lsc_at_zero": self.lsc_at_zero,
            "right_limit": _pq(self.right_limit),
            "value_at_zero": _pq(self.value_at_zero),
            "curve": {
                "knots": [_pq(k) for k in self.curve.knots],
                "pieces": [[_pq(s), _pq(b)] for s, b in self.curve.pieces],
            },
            "grid": {_pq(t): _pq(v) for t, v in sorted(self.grid_values.items())},
            "pullback_levels": {
                _pq(t): (_pq(v) if v is not None else None)
                for t, v in sorted(self.witness_levels.items())
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _pq(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


class MissingContinuation(ValueError):
    pass


def _pushforward(cx: FilteredComplex, t: Fraction, cycle: Chain,
                 base_matrix, slice_matrix):
    """The cycle carried into the t-slice: identity on equal slices, else
    the phi map of an explicit continuation quadruple from 0 to t."""
    if _matrices_equal(base_matrix, slice_matrix):
        return dict(cycle), None
    for data in cx.continuations:
        if data.s_from == 0 and data.s_to == t:
            return apply_matrix(cx, data.phi, cycle), data
    raise MissingContinuation(
        f"no continuation data from 0 to {t} for a differing boundary slice"
    )


def _pullback_level(cx, columns, witness_t, witness_0, cutoff):
    """Filtration level at 0 of a chain filling witness_t - witness_0."""
    diff = chain_sub(witness_t, witness_0)
    if chain_is_zero(diff):
        return Fraction(0)
    outcome = fixed_point(columns, diff, None, cutoff,
                          offsets=_action_offsets(cx),
                          require_normalized=False)
    if outcome.is_fixed_point and chain_is_zero(outcome.residual):
        gamma = dict(outcome.combo)
        return ell(cx, gamma, 0) if gamma else Fraction(0)
    return None


def scan_semicontinuity(cx: FilteredComplex, cycle: Chain, grid: Iterable,
                        cutoff=None) -> SemicontinuityReport:
    """Spectral-value curve over the grid's span and one-sided verdicts at 0.

    When the boundary family is constant across the grid the cycle is a
    legal representative at every t and the exact piecewise-affine curve
    is assembled as the lower envelope of realized witness curves, refined
    at breakpoints and piece midpoints until stable; the right limit at 0
    is then exact.  Differing slices require explicit continuation
    pushforwards; values are computed at the sampled grid only and the
    curve interpolates them, with the segment left of the first positive
    sample held constant (its level is the reported right limit, which may
    sit below the value at 0: a drop is legal, a rise violates upper
    semicontinuity).
    """
    grid = sorted(Fraction(g) for g in grid)
    if not grid or grid[0] != 0:
        raise ValueError("grid must contain 0")
    cutoff = cx.cutoff if cutoff is None else Fraction(cutoff)
    matrices = {g: cx.boundary_matrix(g) for g in grid}
    base = matrices[grid[0]]
    constant = all(_matrices_equal(base, matrices[g]) for g in grid[1:])

    witnesses: dict = {}
    grid_values: dict = {}
    witness_levels: dict = {}
    cycle = chain_cleanup(cycle)
    degree = _degree_of_chain(cx, cycle)

    if constant:
        def probe(t: Fraction) -> Fraction:
            res = _rho_against_matrix(cx, base, cycle, t, cutoff)
            if res.degenerate:
                raise SpectralError("cycle bounds at cutoff scale; curve undefined")
            witnesses[t] = res.witness
            grid_values.setdefault(t, res.value)
            return res.value

        for g in grid:
            probe(g)
        for _ in range(64):
            curves = [ell_curve(cx, w) for w in witnesses.values()]
            curve = env.pointwise_min(curves)
            knots = list(curve.knots)
            mids = [(knots[i] + knots[i + 1]) / 2 for i in range(len(knots) - 1)]
            improved = False
            for t in sorted(set(knots[1:-1]) | set(mids)):
                if t in witnesses:
                    continue
                if probe(t) < curve(t):
                    improved = True
            if not improved:
                break
        else:
            raise RuntimeError("spectral curve failed to stabilize")
        value_at_zero = curve(0)
        right_limit = curve(0)  # the refined envelope is continuous
        columns = _boundary_columns_into_degree(cx, base, degree)
        w0 = witnesses[Fraction(0)]
        for t in grid[1:]:
            witness_levels[t] = _pullback_level(cx, columns, witnesses[t], w0, cutoff)
    else:
        for t in grid:
            pushed, _ = _pushforward(cx, t, cycle, base, matrices[t])
            res = _rho_against_matrix(cx, matrices[t], pushed, t, cutoff)
            if res.degenerate:
                raise SpectralError("cycle bounds at cutoff scale; curve undefined")
            witnesses[t] = res.witness
            grid_values[t] = res.value
        ts = grid
        knots = [Fraction(0)]
        pieces = []
        first_pos = ts[1]
        pieces.append((Fraction(0), grid_values[first_pos]))
        knots.append(first_pos)
        for a, b in zip(ts[1:], ts[2:]):
            slope = (grid_values[b] - grid_values[a]) / (b - a)
            pieces.append((slope, grid_values[a] - slope * a))
            knots.append(b)
        if knots[-1] != 1:
            s, c = pieces[-1]
            pieces.append((Fraction(0), c + s * knots[-1]))
            knots.append(Fraction(1))
        curve = env.PiecewiseAffine(tuple(knots), tuple(pieces))
        value_at_zero = grid_values[Fraction(0)]
        right_limit = grid_values[first_pos]
        columns = _boundary_columns_into_degree(cx, base, degree)
        w0 = witnesses[Fraction(0)]
        for t in grid[1:]:
            data = None
            for cont in cx.continuations:
                if cont.s_from == 0 and cont.s_to == t:
                    data = cont
                    break
            pulled = witnesses[t] if data is None else apply_matrix(cx, data.psi, witnesses[t])
            witness_levels[t] = _pullback_level(cx, columns, pulled, w0, cutoff)

    usc = right_limit <= value_at_zero
    lsc = right_limit >= value_at_zero
    return SemicontinuityReport(
        curve=curve,
        usc_at_zero=usc,
        lsc_at_zero=lsc,
        right_limit=right_limit,
        value_at_zero=value_at_zero,
        grid_values=grid_values,
        witness_levels=witness_levels,
    )


def _matrices_equal(a: Mapping, b: Mapping) -> bool:
    cols = set(a) | set(b)
    for c in cols:
        col_a = chain_cleanup(a.get(c, {}))
        col_b = chain_cleanup(b.get(c, {}))
        if set(col_a) != set(col_b):
            return False
        for r in col_a:
            if col_a[r] != col_b[r]:
                return False
    return True


def rho_beta_csv(cx: FilteredComplex, cycle: Chain, ts: Iterable,
                 cutoff=None) -> str:
    """CSV with columns t, rho, boundary_depth at the requested samples."""
    rows = ["t,rho,boundary_depth"]
    for t in ts:
        t = Fraction(t)
        r = rho(cx, cycle, t, cutoff)
        beta = boundary_depth(cx, t)
        value = "-inf" if r.degenerate else _pq(r.value)
        rows.append(f"{_pq(t)},{value},{_pq(beta)}")
    return "\n".join(rows) + "\n"
