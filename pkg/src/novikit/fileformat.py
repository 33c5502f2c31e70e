"""Plain-text complex files: the single ingestion path for the CLI.

The format is line based and fully canonical on emission, so that
emit -> parse -> emit is byte-identical.  Rationals are always "p/q"
strings; exponent vectors are comma-separated integers ("." for a rank-0
lattice); unknown sections or keys are rejected with the offending line
number.

    # novikit complex v1
    [options]
    field = f2
    cutoff = 10/1
    mode = interval

    [period-system]
    rank = 2
    omega0 = 1/1 0/1
    omega1 = 0/1 1/1

    [generators]
    x0 0 1/1 0/1
    y0 1 3/1 0/1

    [boundary s=0/1]
    x0 y0 : 1 2,1

    [continuation from=0/1 to=1/1]
    shift1 = 0/1
    shift2 = 0/1
    phi x0 x0 : 1 0,0

Boundary and map lines read ``row col : coeff exp ; coeff exp ...``.
The options are individually optional on input (defaults: field f2,
cutoff 10/1, mode interval); emission always writes all three.
"""

from __future__ import annotations

from fractions import Fraction

from .complexes import CappedGenerator, ContinuationData, FilteredComplex
from .fields import field_by_name
from .periods import PeriodSystem
from .series import NovikovElement, RingMode

HEADER = "# novikit complex v1"
_MAP_KEYS = ("phi", "psi", "ks", "kt")


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def _pq(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _parse_fraction(raw: str, line_no: int) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line_no, f"bad rational {raw!r}") from None


def _render_exponent(a) -> str:
    if not a:
        return "."
    return ",".join(str(c) for c in a)


def _parse_exponent(raw: str, rank: int, line_no: int):
    if raw == ".":
        exp = ()
    else:
        try:
            exp = tuple(int(c) for c in raw.split(","))
        except ValueError:
            raise ParseError(line_no, f"bad exponent vector {raw!r}") from None
    if len(exp) != rank:
        raise ParseError(line_no, f"exponent {raw!r} has wrong rank (need {rank})")
    return exp


def _render_terms(entry: NovikovElement) -> str:
    def key(a):
        return (entry.system.pair(a), a)

    parts = []
    for a in sorted(entry.terms, key=key):
        parts.append(f"{entry.field.render(entry.terms[a])} {_render_exponent(a)}")
    return " ; ".join(parts)


def _parse_terms(raw: str, cx_info, line_no: int) -> NovikovElement:
    system, field, mode, cutoff = cx_info
    terms = {}
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError(line_no, "empty term")
        bits = chunk.split()
        if len(bits) != 2:
            raise ParseError(line_no, f"term {chunk!r} needs 'coeff exponent'")
        try:
            coeff = field.parse(bits[0])
        except ValueError:
            raise ParseError(line_no, f"bad coefficient {bits[0]!r}") from None
        exp = _parse_exponent(bits[1], system.rank, line_no)
        terms[exp] = field.add(terms.get(exp, field.zero), coeff)
    return NovikovElement(system, field, mode, cutoff, terms)


def emit(cx: FilteredComplex) -> str:
    """Canonical text form of a complex (byte-stable)."""
    out = [HEADER, ""]
    out.append("[options]")
    out.append(f"field = {cx.coefficient_field.name}")
    out.append(f"cutoff = {_pq(cx.cutoff)}")
    out.append(f"mode = {cx.mode.value}")
    out.append("")
    out.append("[period-system]")
    out.append(f"rank = {cx.system.rank}")
    out.append("omega0 = " + (" ".join(_pq(w) for w in cx.system.omega0) or "."))
    out.append("omega1 = " + (" ".join(_pq(w) for w in cx.system.omega1) or "."))
    out.append("")
    out.append("[generators]")
    for g in cx.generators:
        out.append(f"{g.name} {g.degree} {_pq(g.action0)} {_pq(g.action_slope)}")
    for s in cx.samples:
        out.append("")
        out.append(f"[boundary s={_pq(s)}]")
        matrix = cx.boundaries[s]
        rows = []
        for col in sorted(matrix):
            for row in sorted(matrix[col]):
                entry = matrix[col][row]
                if not entry.is_zero():
                    rows.append((row, col, entry))
        for row, col, entry in sorted(rows, key=lambda r: (r[0], r[1])):
            out.append(f"{row} {col} : {_render_terms(entry)}")
    for data in sorted(cx.continuations, key=lambda d: (d.s_from, d.s_to)):
        out.append("")
        out.append(f"[continuation from={_pq(data.s_from)} to={_pq(data.s_to)}]")
        out.append(f"shift1 = {_pq(data.shift1)}")
        out.append(f"shift2 = {_pq(data.shift2)}")
        for key, matrix in zip(_MAP_KEYS, (data.phi, data.psi, data.k_s, data.k_t)):
            rows = []
            for col in sorted(matrix):
                for row in sorted(matrix[col]):
                    entry = matrix[col][row]
                    if not entry.is_zero():
                        rows.append((row, col, entry))
            for row, col, entry in sorted(rows, key=lambda r: (r[0], r[1])):
                out.append(f"{key} {row} {col} : {_render_terms(entry)}")
    out.append("")
    return "\n".join(out)


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.options: dict = {}
        self.rank = None
        self.omega = {}
        self.generators: list[CappedGenerator] = []
        self.boundaries: dict = {}
        self.continuations: list = []
        self._section = None
        self._cont = None

    def fail(self, line_no, msg):
        raise ParseError(line_no, msg)

    def run(self) -> FilteredComplex:
        if not self.lines or self.lines[0].strip() != HEADER:
            self.fail(1, f"missing header {HEADER!r}")
        for idx, raw in enumerate(self.lines[1:], start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("["):
                self._open_section(line, idx)
            else:
                self._line(line, idx)
        return self._build()

    def _open_section(self, line, idx):
        if not line.endswith("]"):
            self.fail(idx, "unterminated section header")
        head = line[1:-1].strip()
        if head == "options":
            self._section = "options"
        elif head == "period-system":
            self._section = "period-system"
        elif head == "generators":
            self._section = "generators"
        elif head.startswith("boundary"):
            rest = head[len("boundary"):].strip()
            if not rest.startswith("s="):
                self.fail(idx, "boundary section needs s=p/q")
            s = _parse_fraction(rest[2:], idx)
            if s in self.boundaries:
                self.fail(idx, f"duplicate boundary sample s={_pq(s)}")
            self.boundaries[s] = {}
            self._section = ("boundary", s)
        elif head.startswith("continuation"):
            parts = dict(p.split("=", 1) for p in head[len("continuation"):].split())
            if set(parts) != {"from", "to"}:
                self.fail(idx, "continuation section needs from= and to=")
            cont = {
                "from": _parse_fraction(parts["from"], idx),
                "to": _parse_fraction(parts["to"], idx),
                "shift1": None, "shift2": None,
                "phi": {}, "psi": {}, "ks": {}, "kt": {},
            }
            self.continuations.append(cont)
            self._section = "continuation"
            self._cont = cont
        else:
            self.fail(idx, f"unknown section {head!r}")

    def _ring_info(self, idx):
        if self.rank is None:
            self.fail(idx, "period-system must precede entries")
        system = PeriodSystem(self.rank, self.omega.get("omega0", ()),
                              self.omega.get("omega1", ()))
        field = field_by_name(self.options.get("field", "f2"))
        mode = RingMode(self.options.get("mode", "interval"))
        cutoff = self.options.get("cutoff", Fraction(10))
        return system, field, mode, cutoff

    def _entry_line(self, line, idx, into, prefix_maps=False):
        if ":" not in line:
            self.fail(idx, "entry line needs ':'")
        head, _, terms = line.partition(":")
        bits = head.split()
        if prefix_maps:
            if len(bits) != 3 or bits[0] not in _MAP_KEYS:
                self.fail(idx, "continuation entry needs 'map row col : terms'")
            target = self._cont[bits[0]]
            row, col = bits[1], bits[2]
        else:
            if len(bits) != 2:
                self.fail(idx, "boundary entry needs 'row col : terms'")
            target = into
            row, col = bits
        names = {g.name for g in self.generators}
        for n in (row, col):
            if n not in names:
                self.fail(idx, f"unknown generator {n!r}")
        entry = _parse_terms(terms.strip(), self._ring_info(idx), idx)
        if col in target and row in target[col]:
            self.fail(idx, f"duplicate entry {row} {col}")
        target.setdefault(col, {})[row] = entry

    def _line(self, line, idx):
        sec = self._section
        if sec is None:
            self.fail(idx, "content before any section")
        if sec == "options":
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in ("field", "cutoff", "mode"):
                self.fail(idx, f"unknown option {key!r}")
            if key == "cutoff":
                self.options[key] = _parse_fraction(val, idx)
            elif key == "mode":
                try:
                    RingMode(val)
                except ValueError:
                    self.fail(idx, f"unknown mode {val!r}")
                self.options[key] = val
            else:
                self.options[key] = val
        elif sec == "period-system":
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key == "rank":
                try:
                    self.rank = int(val)
                except ValueError:
                    self.fail(idx, f"bad rank {val!r}")
            elif key in ("omega0", "omega1"):
                if val == ".":
                    self.omega[key] = ()
                else:
                    self.omega[key] = tuple(_parse_fraction(w, idx)
                                            for w in val.split())
            else:
                self.fail(idx, f"unknown period-system key {key!r}")
        elif sec == "generators":
            bits = line.split()
            if len(bits) != 4:
                self.fail(idx, "generator line needs 'name degree action0 slope'")
            name, degree, a0, slope = bits
            if any(g.name == name for g in self.generators):
                self.fail(idx, f"duplicate generator {name!r}")
            try:
                degree = int(degree)
            except ValueError:
                self.fail(idx, f"bad degree {degree!r}")
            self.generators.append(CappedGenerator(
                name, degree, _parse_fraction(a0, idx), _parse_fraction(slope, idx)))
        elif isinstance(sec, tuple) and sec[0] == "boundary":
            self._entry_line(line, idx, self.boundaries[sec[1]])
        elif sec == "continuation":
            if line.startswith("shift1") or line.startswith("shift2"):
                key, _, val = line.partition("=")
                self._cont[key.strip()] = _parse_fraction(val.strip(), idx)
            else:
                self._entry_line(line, idx, None, prefix_maps=True)
        else:  # pragma: no cover - sections are exhaustive
            self.fail(idx, "internal section state error")

    def _build(self) -> FilteredComplex:
        if self.rank is None:
            self.fail(len(self.lines), "missing period-system rank")
        if not self.generators:
            self.fail(len(self.lines), "no generators declared")
        if not self.boundaries:
            self.fail(len(self.lines), "no boundary samples declared")
        system, field, mode, cutoff = self._ring_info(len(self.lines))
        conts = []
        for cont in self.continuations:
            if cont["shift1"] is None or cont["shift2"] is None:
                self.fail(len(self.lines), "continuation missing shift bounds")
            conts.append(ContinuationData(
                cont["from"], cont["to"], cont["phi"], cont["psi"],
                cont["ks"], cont["kt"], cont["shift1"], cont["shift2"]))
        return FilteredComplex(system, field, mode, cutoff,
                               tuple(self.generators), self.boundaries,
                               continuations=tuple(conts))


def parse(text: str) -> FilteredComplex:
    """Parse a complex file; raises ParseError with the offending line."""
    return _Parser(text).run()
