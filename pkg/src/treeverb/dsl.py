"""Line-oriented text formats for automata and spine sequences.

Automaton files::

    degree 3
    state t = (1, 1, t) [2 3 1]   # children, then image list
    root t

Spine files::

    degree 3
    pre [2 3 1]
    period [3 1 2] [2 3 1]
"""
from __future__ import annotations

import re
from pathlib import Path

from .core import AutomatonError, TreeAutomorphism, validate_automaton
from .perm import Permutation


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_STATE = re.compile(rf"^state\s+({_IDENT})\s*=\s*\(([^)]*)\)\s*(.*)$")
_PERM = re.compile(r"^\[\s*([0-9]+(?:\s+[0-9]+)*)\s*\]$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _parse_perm(token: str, no: int) -> list[int] | None:
    token = token.strip()
    if token == "id":
        return None
    m = _PERM.match(token)
    if not m:
        raise ParseError(f"expected 'id' or an image list like [2 3 1], got {token!r}", no)
    return [int(x) for x in m.group(1).split()]


def _parse_degree(line: str, no: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != "degree" or not parts[1].isdigit():
        raise ParseError("expected 'degree <int>'", no)
    d = int(parts[1])
    if d < 2:
        raise ParseError(f"degree must be at least 2, got {d}", no)
    return d


def parse(text: str) -> TreeAutomorphism:
    """Parse an automaton document."""
    degree = None
    root = None
    states: dict[str, tuple[list[str], list[int] | None]] = {}
    where: dict[str, int] = {}
    last = 0
    for no, line in _lines(text):
        last = no
        head = line.split(None, 1)[0]
        if head == "degree":
            if degree is not None:
                raise ParseError("duplicate degree declaration", no)
            if states:
                raise ParseError("degree must come before the states", no)
            degree = _parse_degree(line, no)
        elif head == "state":
            if degree is None:
                raise ParseError("state before degree declaration", no)
            if root is not None:
                raise ParseError("state after root declaration", no)
            m = _STATE.match(line)
            if not m:
                raise ParseError("expected 'state NAME = (c1, ..., cd) PERM'", no)
            name, kids_text, perm_text = m.groups()
            if name in states:
                raise ParseError(f"state {name!r} defined twice", no)
            kids = [k.strip() for k in kids_text.split(",")]
            for k in kids:
                if k != "1" and not re.fullmatch(_IDENT, k):
                    raise ParseError(f"bad child {k!r}", no)
            if len(kids) != degree:
                raise ParseError(f"state {name!r} has {len(kids)} children, degree is {degree}", no)
            images = _parse_perm(perm_text, no)
            if images is not None:
                if len(images) != degree:
                    raise ParseError(
                        f"permutation of state {name!r} has {len(images)} entries, degree is {degree}", no
                    )
                if sorted(images) != list(range(1, degree + 1)):
                    raise ParseError(f"{images} is not a bijection of 1..{degree}", no)
            states[name] = (kids, images)
            where[name] = no
        elif head == "root":
            if root is not None:
                raise ParseError("duplicate root declaration", no)
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'root NAME'", no)
            root = parts[1]
            if root not in states:
                raise ParseError(f"unknown root state {root!r}", no)
        else:
            raise ParseError(f"unexpected {head!r}", no)
    if degree is None:
        raise ParseError("missing degree declaration", last or None)
    if root is None:
        raise ParseError("missing root declaration", last or None)
    for name, (kids, _) in states.items():
        for k in kids:
            if k != "1" and k not in states:
                raise ParseError(f"state {name!r} refers to unknown state {k!r}", where[name])
    try:
        return validate_automaton(degree, states, root)
    except AutomatonError as exc:  # pragma: no cover - checks above are stricter
        raise ParseError(str(exc)) from exc


def _format_perm(img: tuple[int, ...]) -> str:
    if all(i == x for i, x in enumerate(img)):
        return "id"
    return "[" + " ".join(str(x + 1) for x in img) + "]"


def serialize(g: TreeAutomorphism) -> str:
    """Text form with states ``s0`` (root), ``s1``, ...; the identity state is written ``1``."""
    d = g.degree
    if g.is_identity():
        return f"degree {d}\nstate e = ({', '.join(['1'] * d)}) id\nroot e\n"
    ident = g.identity_state()
    names = {}
    for s in range(g.num_states):
        if s != ident:
            names[s] = f"s{len(names)}"
    out = [f"degree {d}"]
    for s, name in names.items():
        kids = ", ".join("1" if c == ident else names[c] for c in g.children[s])
        out.append(f"state {name} = ({kids}) {_format_perm(g.labels[s])}")
    out.append("root s0")
    return "\n".join(out) + "\n"


def load(path: str | Path) -> TreeAutomorphism:
    return parse(Path(path).read_text(encoding="utf-8"))


def dump(g: TreeAutomorphism, path: str | Path) -> None:
    Path(path).write_text(serialize(g), encoding="utf-8")


def parse_spine(text: str):
    """Parse a spine document into a :class:`~treeverb.constructions.SpineSpec`."""
    from .constructions import ConstructionError, SpineSpec

    degree = None
    fields: dict[str, list[Permutation]] = {}
    last = 0
    for no, line in _lines(text):
        last = no
        head, _, rest = line.partition(" ")
        if head == "degree":
            if degree is not None:
                raise ParseError("duplicate degree declaration", no)
            degree = _parse_degree(line, no)
        elif head in ("pre", "period"):
            if degree is None:
                raise ParseError(f"{head} before degree declaration", no)
            if head in fields:
                raise ParseError(f"duplicate {head} line", no)
            perms = []
            for tok in re.findall(r"\[[^\]]*\]|\S+", rest):
                images = _parse_perm(tok, no)
                if images is None:
                    images = list(range(1, degree + 1))
                if len(images) != degree or sorted(images) != list(range(1, degree + 1)):
                    raise ParseError(f"{images} is not a bijection of 1..{degree}", no)
                perms.append(Permutation(images))
            fields[head] = perms
        else:
            raise ParseError(f"unexpected {head!r}", no)
    if degree is None:
        raise ParseError("missing degree declaration", last or None)
    if not fields.get("period"):
        raise ParseError("missing or empty period line", last or None)
    try:
        return SpineSpec(degree, tuple(fields.get("pre", ())), tuple(fields["period"]))
    except ConstructionError as exc:
        raise ParseError(str(exc)) from exc


def serialize_spine(spec) -> str:
    def row(perms):
        return " ".join(_format_perm(p.zero_based) for p in perms)

    out = [f"degree {spec.degree}"]
    if spec.pre:
        out.append("pre " + row(spec.pre))
    out.append("period " + row(spec.period))
    return "\n".join(out) + "\n"
