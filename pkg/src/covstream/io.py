"""Line-oriented text formats for instances and set systems.

Covering ILP files::

    ilp <n> <m> <binary|integer>
    b <v_0> ... <v_{n-1}>
    col <c_i> <row>:<coeff> ...        (m lines, in stream order)

Set system files::

    sets <n> <m>
    set <w_i> <e_1> <e_2> ...          (m lines)

Parsers reject negative values, out-of-range rows, and malformed lines,
reporting the offending line number.
"""

from __future__ import annotations

import json

from .instances import CoveringInstance, SetSystem, VariableKind


class ParseError(ValueError):
    def __init__(self, path, line_no: int, message: str):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


def _int(token: str, path, line_no: int, what: str, minimum: int = 0) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(path, line_no, f"{what}: expected an integer, got {token!r}")
    if value < minimum:
        raise ParseError(path, line_no, f"{what}: {value} is below {minimum}")
    return value


def _lines(path) -> list[tuple[int, list[str]]]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            out.append((line_no, stripped.split()))
    return out


def read_instance(path) -> CoveringInstance | SetSystem:
    """Read either format, dispatching on the header line."""
    lines = _lines(path)
    if not lines:
        raise ParseError(path, 1, "empty file")
    line_no, header = lines[0]
    if header[0] == "ilp":
        return _read_ilp(path, lines)
    if header[0] == "sets":
        return _read_sets(path, lines)
    raise ParseError(path, line_no, f"unknown header {header[0]!r}")


def _read_ilp(path, lines) -> CoveringInstance:
    line_no, header = lines[0]
    if len(header) != 4:
        raise ParseError(path, line_no, "header must be 'ilp n m variable_kind'")
    n = _int(header[1], path, line_no, "n")
    m = _int(header[2], path, line_no, "m")
    try:
        kind = VariableKind(header[3])
    except ValueError:
        raise ParseError(path, line_no, f"unknown variable kind {header[3]!r}")

    if len(lines) != 2 + m:
        raise ParseError(path, lines[-1][0],
                         f"expected a demand line plus {m} column lines")
    line_no, b_line = lines[1]
    if b_line[0] != "b" or len(b_line) != n + 1:
        raise ParseError(path, line_no, f"demand line must be 'b' followed by {n} values")
    b = tuple(_int(tok, path, line_no, "demand") for tok in b_line[1:])

    columns, weights = [], []
    for line_no, tokens in lines[2:]:
        if tokens[0] != "col" or len(tokens) < 2:
            raise ParseError(path, line_no, "column line must be 'col c_i j:a ...'")
        weights.append(_int(tokens[1], path, line_no, "weight"))
        entries = []
        for tok in tokens[2:]:
            if ":" not in tok:
                raise ParseError(path, line_no, f"expected row:coeff, got {tok!r}")
            row_s, coeff_s = tok.split(":", 1)
            row = _int(row_s, path, line_no, "row")
            if row >= n:
                raise ParseError(path, line_no, f"row {row} out of range [0, {n})")
            coeff = _int(coeff_s, path, line_no, "coefficient", minimum=1)
            entries.append((row, coeff))
        columns.append(tuple(entries))
    return CoveringInstance(n, tuple(columns), b, tuple(weights), kind)


def _read_sets(path, lines) -> SetSystem:
    line_no, header = lines[0]
    if len(header) != 3:
        raise ParseError(path, line_no, "header must be 'sets n m'")
    n = _int(header[1], path, line_no, "n")
    m = _int(header[2], path, line_no, "m")
    if len(lines) != 1 + m:
        raise ParseError(path, lines[-1][0], f"expected {m} set lines")
    sets, weights = [], []
    for line_no, tokens in lines[1:]:
        if tokens[0] != "set" or len(tokens) < 2:
            raise ParseError(path, line_no, "set line must be 'set w_i e_1 e_2 ...'")
        weights.append(_int(tokens[1], path, line_no, "weight", minimum=1))
        elems = []
        for tok in tokens[2:]:
            e = _int(tok, path, line_no, "element")
            if e >= n:
                raise ParseError(path, line_no, f"element {e} out of range [0, {n})")
            elems.append(e)
        sets.append(frozenset(elems))
    return SetSystem(n, tuple(sets), tuple(weights))


def write_instance(obj: CoveringInstance | SetSystem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(obj, CoveringInstance):
            fh.write(f"ilp {obj.n} {obj.m} {obj.variable_kind.value}\n")
            demand = " ".join(str(v) for v in obj.b)
            fh.write(("b " + demand).rstrip() + "\n")
            for col, w in zip(obj.columns, obj.c):
                entries = " ".join(f"{r}:{a}" for r, a in col)
                fh.write(f"col {w} {entries}".rstrip() + "\n")
        elif isinstance(obj, SetSystem):
            fh.write(f"sets {obj.n} {obj.m}\n")
            weights = obj.weights if obj.weights is not None else (1,) * obj.m
            for s, w in zip(obj.sets, weights):
                elems = " ".join(str(e) for e in sorted(s))
                fh.write(f"set {w} {elems}".rstrip() + "\n")
        else:
            raise TypeError(f"cannot write {type(obj).__name__}")


def write_metadata(meta: dict, path) -> None:
    """Hidden generator metadata as 'key json-value' lines, kept out of the
    instance file so solvers cannot accidentally read the labels."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(meta):
            fh.write(f"{key} {json.dumps(meta[key])}\n")
