"""Families of filtered chain complexes over the interval-mode Novikov ring.

A :class:`FilteredComplex` is a graded free module with named generators,
per-generator affine action offsets ``eta_i(t) = action0 + t*action_slope``,
and a family of boundary matrices sampled at parameter values s in [0, 1].
No interpolation between samples is ever invented: each sampled slice must
be a chain complex on its own (square zero, strictly filtration
decreasing), and cross-slice comparisons go through explicitly supplied
continuation quadruples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import envelope as env
from .periods import PeriodSystem
from .series import INF, ModeMismatch, NovikovElement, RingMode, valuation_at, zero

NEG_INF = float("-inf")

# A matrix is column-major: column generator -> {row generator -> entry}.
Matrix = Mapping[str, Mapping[str, NovikovElement]]
# A chain maps generator names to nonzero ring coefficients.
Chain = Mapping[str, NovikovElement]


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class CappedGenerator:
    """A graded basis generator with an affine action offset in t."""

    name: str
    degree: int
    action0: Fraction
    action_slope: Fraction

    def __post_init__(self):
        object.__setattr__(self, "action0", Fraction(self.action0))
        object.__setattr__(self, "action_slope", Fraction(self.action_slope))

    def action_at(self, t) -> Fraction:
        return self.action0 + Fraction(t) * self.action_slope

    @property
    def action_endpoints(self) -> tuple[Fraction, Fraction]:
        return (self.action0, self.action0 + self.action_slope)


@dataclass(frozen=True)
class ContinuationData:
    """A quadruple of chain maps and homotopies with filtration shifts.

    ``phi`` maps the s-slice to the t-slice, ``psi`` back; ``k_s`` and
    ``k_t`` are the degree +1 homotopies on the respective slices.  The
    shift bounds (s1, s2) cap the filtration change of phi and psi.
    """

    s_from: Fraction
    s_to: Fraction
    phi: Matrix
    psi: Matrix
    k_s: Matrix
    k_t: Matrix
    shift1: Fraction
    shift2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s_from", Fraction(self.s_from))
        object.__setattr__(self, "s_to", Fraction(self.s_to))
        object.__setattr__(self, "shift1", Fraction(self.shift1))
        object.__setattr__(self, "shift2", Fraction(self.shift2))


@dataclass
class ValidationReport:
    ok: bool
    violations: list

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FilteredComplex:
    """Graded free module with a sampled family of boundary operators."""

    system: PeriodSystem
    coefficient_field: object
    mode: RingMode
    cutoff: Fraction
    generators: tuple[CappedGenerator, ...]
    boundaries: Mapping[Fraction, Matrix]
    continuations: tuple[ContinuationData, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cutoff", Fraction(self.cutoff))
        object.__setattr__(self, "generators", tuple(self.generators))
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise StructureError("generator names must be unique")
        bd = {Fraction(s): {c: dict(col) for c, col in m.items()}
              for s, m in self.boundaries.items()}
        object.__setattr__(self, "boundaries", bd)
        object.__setattr__(self, "continuations", tuple(self.continuations))

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def generator(self, name: str) -> CappedGenerator:
        for g in self.generators:
            if g.name == name:
                return g
        raise StructureError(f"unknown generator {name!r}")

    @property
    def samples(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.boundaries))

    def boundary_matrix(self, s) -> Matrix:
        s = Fraction(s)
        if s not in self.boundaries:
            raise StructureError(f"no boundary sample at s={s}")
        return self.boundaries[s]

    def zero_coeff(self) -> NovikovElement:
        return zero(self.system, self.coefficient_field, self.mode, self.cutoff)

    def action_at(self, name: str, t) -> Fraction:
        return self.generator(name).action_at(t)


def chain_is_zero(chain: Chain) -> bool:
    return all(c.is_zero() for c in chain.values())


def chain_cleanup(chain: Chain) -> dict[str, NovikovElement]:
    return {k: v for k, v in chain.items() if not v.is_zero()}


def chain_add(a: Chain, b: Chain) -> dict[str, NovikovElement]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return chain_cleanup(out)


def chain_sub(a: Chain, b: Chain) -> dict[str, NovikovElement]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] - v if k in out else -v
    return chain_cleanup(out)


def chain_scale(chain: Chain, coeff: NovikovElement) -> dict[str, NovikovElement]:
    return chain_cleanup({k: v * coeff for k, v in chain.items()})


def ell(cx: FilteredComplex, chain: Chain, t) -> object:
    """Filtration level of a chain at parameter t; -inf for the zero chain.

    The level of a single term is the generator's action offset minus the
    coefficient's interpolated valuation; a chain takes the maximum.
    """
    t = Fraction(t)
    if not (0 <= t <= 1):
        raise ValueError(f"t={t} outside [0, 1]")
    best = NEG_INF
    for name, coeff in chain.items():
        v = valuation_at(coeff, t)
        if v == INF:
            continue
        level = cx.action_at(name, t) - v
        if level > best:
            best = level
    return best


def ell_curve(cx: FilteredComplex, chain: Chain) -> env.PiecewiseAffine:
    """The exact piecewise-affine function t -> ell(chain, t)."""
    actions = []
    for name, coeff in chain.items():
        if coeff.is_zero():
            continue
        g = cx.generator(name)
        pts = [cx.system.pair(a) for a in coeff.terms]
        actions.append(((g.action0, g.action_slope), pts))
    if not actions:
        raise ValueError("zero chain has no filtration curve")
    return env.filtration_curve(actions)


def apply_boundary(cx: FilteredComplex, s, chain: Chain) -> dict[str, NovikovElement]:
    """Exact matrix-vector product of the s-slice boundary with a chain."""
    matrix = cx.boundary_matrix(s)
    out: dict[str, NovikovElement] = {}
    for col, coeff in chain.items():
        if coeff.is_zero():
            continue
        for row, entry in matrix.get(col, {}).items():
            term = entry * coeff
            out[row] = out[row] + term if row in out else term
    return chain_cleanup(out)


def apply_matrix(cx: FilteredComplex, matrix: Matrix, chain: Chain) -> dict[str, NovikovElement]:
    out: dict[str, NovikovElement] = {}
    for col, coeff in chain.items():
        if coeff.is_zero():
            continue
        for row, entry in matrix.get(col, {}).items():
            term = entry * coeff
            out[row] = out[row] + term if row in out else term
    return chain_cleanup(out)


def compose_matrices(cx: FilteredComplex, outer: Matrix, inner: Matrix) -> dict[str, dict[str, NovikovElement]]:
    """Matrix product outer @ inner, column-major, zero entries dropped."""
    out: dict[str, dict[str, NovikovElement]] = {}
    for col, column in inner.items():
        acc = apply_matrix(cx, outer, column)
        if acc:
            out[col] = acc
    return out


def basis_chain(cx: FilteredComplex, name: str) -> dict[str, NovikovElement]:
    from .series import unit

    cx.generator(name)
    return {name: unit(cx.system, cx.coefficient_field, cx.mode, cx.cutoff)}


def _check_entry_compat(cx: FilteredComplex, entry: NovikovElement) -> None:
    if entry.system != cx.system or entry.mode is not cx.mode \
            or entry.cutoff != cx.cutoff or entry.field != cx.coefficient_field:
        raise ModeMismatch("matrix entry incompatible with complex ring data")


def validate(cx: FilteredComplex, grid: Iterable | None = None) -> ValidationReport:
    """Structural and filtration checks at every requested sample.

    Verifies exact square-zero of each sampled boundary, the grading
    (entries lower degree by one), and strict filtration decrease of every
    nonzero column at each sampled s.  Violations carry witnesses.
    """
    violations: list = []
    names = set(cx.generator_names)
    degrees = {g.name: g.degree for g in cx.generators}

    samples = tuple(Fraction(s) for s in grid) if grid is not None else cx.samples
    for s in samples:
        if s not in cx.boundaries:
            violations.append(("missing-sample", s))
    samples = [s for s in samples if s in cx.boundaries]

    for s in samples:
        matrix = cx.boundaries[s]
        for col, column in matrix.items():
            if col not in names:
                violations.append(("dangling-column", (s, col)))
                continue
            for row, entry in column.items():
                if row not in names:
                    violations.append(("dangling-row", (s, col, row)))
                    continue
                _check_entry_compat(cx, entry)
                if not entry.is_zero() and degrees[row] != degrees[col] - 1:
                    violations.append(("grading", (s, col, row)))
        # square zero, exactly
        for col in matrix:
            if col not in names:
                continue
            image = apply_matrix(cx, matrix, {col: _unit(cx)})
            second = apply_matrix(cx, matrix, image)
            if second:
                violations.append(("square-nonzero", (s, col, sorted(second))))
        # strict filtration decrease per nonzero column
        for col, column in matrix.items():
            if col not in names:
                continue
            image = chain_cleanup(column)
            if not image:
                continue
            level = ell(cx, image, s)
            own = cx.action_at(col, s)
            if not level < own:
                violations.append(("filtration", (s, col, level, own)))
    return ValidationReport(ok=not violations, violations=violations)


def _unit(cx: FilteredComplex) -> NovikovElement:
    from .series import unit

    return unit(cx.system, cx.coefficient_field, cx.mode, cx.cutoff)


def _identity_matrix(cx: FilteredComplex) -> dict[str, dict[str, NovikovElement]]:
    one = _unit(cx)
    return {g: {g: one} for g in cx.generator_names}


def _matrix_sub(cx: FilteredComplex, a: Matrix, b: Matrix) -> dict[str, dict[str, NovikovElement]]:
    out: dict[str, dict[str, NovikovElement]] = {c: dict(col) for c, col in a.items()}
    for col, column in b.items():
        acc = out.setdefault(col, {})
        for row, entry in column.items():
            acc[row] = acc[row] - entry if row in acc else -entry
    return {c: chain_cleanup(col) for c, col in out.items() if chain_cleanup(col)}


def _matrix_add(cx: FilteredComplex, a: Matrix, b: Matrix) -> dict[str, dict[str, NovikovElement]]:
    out: dict[str, dict[str, NovikovElement]] = {c: dict(col) for c, col in a.items()}
    for col, column in b.items():
        acc = out.setdefault(col, {})
        for row, entry in column.items():
            acc[row] = acc[row] + entry if row in acc else entry
    return {c: chain_cleanup(col) for c, col in out.items() if chain_cleanup(col)}


def verify_continuation(cx_s: FilteredComplex, cx_t: FilteredComplex,
                        data: ContinuationData) -> ValidationReport:
    """Exact verification of a continuation quadruple.

    Checks the two chain-map identities, both homotopy identities, and the
    filtration shift bounds on all basis chains.
    """
    violations: list = []
    if set(cx_s.generator_names) != set(cx_t.generator_names):
        return ValidationReport(False, [("basis-mismatch", None)])
    d_s = cx_s.boundary_matrix(data.s_from)
    d_t = cx_t.boundary_matrix(data.s_to)

    lhs = compose_matrices(cx_s, data.phi, d_s)
    rhs = compose_matrices(cx_s, d_t, data.phi)
    delta = _matrix_sub(cx_s, lhs, rhs)
    for col in sorted(delta):
        violations.append(("chain-map-phi", col))
    lhs = compose_matrices(cx_s, data.psi, d_t)
    rhs = compose_matrices(cx_s, d_s, data.psi)
    delta = _matrix_sub(cx_s, lhs, rhs)
    for col in sorted(delta):
        violations.append(("chain-map-psi", col))

    ident = _identity_matrix(cx_s)
    psiphi = compose_matrices(cx_s, data.psi, data.phi)
    homo = _matrix_add(cx_s, compose_matrices(cx_s, d_s, data.k_s),
                       compose_matrices(cx_s, data.k_s, d_s))
    delta = _matrix_sub(cx_s, _matrix_sub(cx_s, psiphi, ident), homo)
    for col in sorted(delta):
        violations.append(("homotopy-s", col))
    phipsi = compose_matrices(cx_s, data.phi, data.psi)
    homo = _matrix_add(cx_s, compose_matrices(cx_s, d_t, data.k_t),
                       compose_matrices(cx_s, data.k_t, d_t))
    delta = _matrix_sub(cx_s, _matrix_sub(cx_s, phipsi, ident), homo)
    for col in sorted(delta):
        violations.append(("homotopy-t", col))

    for name in cx_s.generator_names:
        image = chain_cleanup(data.phi.get(name, {}))
        if image:
            shifted = ell(cx_t, image, data.s_to)
            bound = cx_s.action_at(name, data.s_from) + data.shift1
            if not shifted <= bound:
                violations.append(("shift-phi", (name, shifted, bound)))
        image = chain_cleanup(data.psi.get(name, {}))
        if image:
            shifted = ell(cx_s, image, data.s_from)
            bound = cx_t.action_at(name, data.s_to) + data.shift2
            if not shifted <= bound:
                violations.append(("shift-psi", (name, shifted, bound)))
    return ValidationReport(ok=not violations, violations=violations)
