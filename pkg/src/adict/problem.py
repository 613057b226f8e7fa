"""Problem files: a line-oriented keyword format describing rings, modules and tasks.

    field Q                          | field F 7
    ring A vars x:1 y:1 rels x^2-y   [invert f]
    ring B quotient A by a
    ideal a in A gens x, y
    module M over A cover 2 shifts 0,1 rel x,0 rel 0,y^2
    module N = SUM(FREE(A), QUOT(A,a,2))
    complex X over A term 0 F0 term 1 F1 diff 0 x,y
    task verify_mgm pair(A,a) module M window -3..3 T 6 J 6
    expect fail

``parse`` returns a ProblemFile (a list of statements); ``serialize`` writes
the canonical text back; ``build`` turns statements into rings, ideals,
modules and complexes, reporting unknown names with line and column.
"""

import hashlib
import re
from dataclasses import dataclass, field as dc_field

from .field import FieldError, PrimeField, QQ
from .poly import PolyError
from .rings import IdealSpec, RingError, localize, make_ring, quotient_ring


class ProblemError(ValueError):
    """One or more diagnostics, each (line, column, message)."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"line {l}, column {c}: {m}" for l, c, m in self.diagnostics))


@dataclass(frozen=True)
class Statement:
    kind: str
    name: str
    args: tuple
    line: int = dc_field(default=0, compare=False)
    cols: tuple = dc_field(default=(), compare=False)

    def get(self, key, default=None):
        for k, v in self.args:
            if k == key:
                return v
        return default

    def all(self, key):
        return [v for k, v in self.args if k == key]


@dataclass
class ProblemFile:
    statements: list

    def __eq__(self, other):
        return isinstance(other, ProblemFile) and self.statements == other.statements

    @property
    def tasks(self):
        return [s for s in self.statements if s.kind == "task"]

    @property
    def expect(self):
        for s in self.statements:
            if s.kind == "expect":
                return s.name
        return "pass"

    def digest(self):
        return hashlib.sha256(serialize(self).encode()).hexdigest()


# ------------------------------------------------------------------ parse

_KEYWORDS = {
    "ring": ("vars", "rels", "invert", "quotient", "by"),
    "ideal": ("in", "gens"),
    "module": ("over", "cover", "shifts", "rel", "="),
    "complex": ("over", "term", "diff"),
}

TASK_KEYS = ("module", "module2", "complex", "window", "T", "J", "n_max", "m", "n", "top", "with",
             "attest", "swap_ring", "swap_module", "length", "route")


def _words(line):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _clauses(words, keywords, lineno):
    """Split words after the statement head into (keyword, value, column) clauses."""
    out = []
    cur = None
    for w, c in words:
        if w in keywords:
            if cur is not None:
                out.append(cur)
            cur = [w, [], c]
        else:
            if cur is None:
                raise ProblemError([(lineno, c, f"unexpected {w!r}")])
            cur[1].append(w)
    if cur is not None:
        out.append(cur)
    return [(k, " ".join(v), c) for k, v, c in out]


def _split(text, sep=","):
    return tuple(p.strip() for p in text.split(sep) if p.strip())


def parse(text):
    statements = []
    diags = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        words = _words(line)
        try:
            statements.append(_parse_line(words, lineno))
        except ProblemError as e:
            diags.extend(e.diagnostics)
    if diags:
        raise ProblemError(diags)
    pf = ProblemFile(statements)
    _check_names(pf)
    return pf


def _parse_line(words, lineno):
    head, hc = words[0]
    rest = words[1:]
    if head == "field":
        vals = [w for w, _ in rest]
        if vals == ["Q"]:
            return Statement("field", "Q", (), lineno)
        if len(vals) == 2 and vals[0] == "F" and vals[1].isdigit():
            p = int(vals[1])
            try:
                PrimeField(p)
            except FieldError:
                raise ProblemError([(lineno, rest[1][1], f"modulus not prime: {p}")]) from None
            return Statement("field", f"F {p}", (), lineno)
        raise ProblemError([(lineno, hc, "field must be 'Q' or 'F p'")])
    if head == "expect":
        vals = [w for w, _ in rest]
        if vals not in (["pass"], ["fail"]):
            raise ProblemError([(lineno, hc, "expect must be 'pass' or 'fail'")])
        return Statement("expect", vals[0], (), lineno)
    if head == "task":
        return _parse_task(rest, lineno, hc)
    if head not in _KEYWORDS:
        raise ProblemError([(lineno, hc, f"unknown statement {head!r}")])
    if not rest:
        raise ProblemError([(lineno, hc, f"{head} needs a name")])
    name, nc = rest[0]
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
        raise ProblemError([(lineno, nc, f"bad name {name!r}")])
    clauses = _clauses(rest[1:], _KEYWORDS[head], lineno)
    args, cols = [], []
    for k, v, c in clauses:
        if k == "vars":
            pairs = []
            for item in v.split():
                n, _, w = item.partition(":")
                if not w:
                    w = "1"
                if not re.fullmatch(r"-?\d+", w):
                    raise ProblemError([(lineno, c, f"bad weight in {item!r}")])
                pairs.append((n, int(w)))
            args.append(("vars", tuple(pairs)))
        elif k in ("rels", "gens"):
            args.append((k, _split(v)))
        elif k == "shifts":
            try:
                args.append((k, tuple(int(s) for s in _split(v))))
            except ValueError:
                raise ProblemError([(lineno, c, f"bad shifts {v!r}")]) from None
        elif k == "cover":
            if not v.isdigit():
                raise ProblemError([(lineno, c, f"bad cover rank {v!r}")])
            args.append((k, int(v)))
        elif k == "rel":
            args.append((k, _split(v)))
        elif k == "term":
            parts = v.split()
            if len(parts) != 2 or not re.fullmatch(r"-?\d+", parts[0]):
                raise ProblemError([(lineno, c, "term needs an index and a module")])
            args.append((k, (int(parts[0]), parts[1])))
        elif k == "diff":
            idx, _, cols_text = v.partition(" ")
            if not re.fullmatch(r"-?\d+", idx):
                raise ProblemError([(lineno, c, "diff needs an index")])
            columns = tuple(_split(col) for col in cols_text.split(";")) if cols_text.strip() else ()
            args.append((k, (int(idx), columns)))
        else:
            args.append((k, v))
        cols.append(c)
    return Statement(head, name, tuple(args), lineno, tuple(cols))


def _parse_task(rest, lineno, hc):
    if not rest:
        raise ProblemError([(lineno, hc, "task needs a name")])
    name, _ = rest[0]
    args, cols = [], []
    words = rest[1:]
    i = 0
    while i < len(words):
        w, c = words[i]
        m = re.fullmatch(r"pair\(([^,()]+),([^,()]+)\)", w)
        if m:
            args.append(("pair", (m.group(1), m.group(2))))
            cols.append(c)
            i += 1
            continue
        if w not in TASK_KEYS:
            raise ProblemError([(lineno, c, f"unknown task argument {w!r}")])
        if i + 1 >= len(words):
            raise ProblemError([(lineno, c, f"{w} needs a value")])
        v, vc = words[i + 1]
        if w == "window":
            m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", v)
            if not m:
                raise ProblemError([(lineno, vc, f"window must look like LO..HI, got {v!r}")])
            args.append((w, (int(m.group(1)), int(m.group(2)))))
        elif w in ("T", "J", "n_max", "m", "n", "top", "length"):
            if not re.fullmatch(r"-?\d+", v):
                raise ProblemError([(lineno, vc, f"{w} needs an integer")])
            args.append((w, int(v)))
        elif w == "with":
            m = re.fullmatch(r"pair\(([^,()]+),([^,()]+)\)", v)
            if not m:
                raise ProblemError([(lineno, vc, "with needs pair(R,ideal)")])
            args.append((w, (m.group(1), m.group(2))))
        elif w == "attest":
            args.append((w, _split(v)))
        else:
            args.append((w, v))
        cols.append(c)
        i += 2
    return Statement("task", name, tuple(args), lineno, tuple(cols))


_EXPR_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def parse_module_expr(text):
    """NAME | FREE(R[,shift]) | QUOT(R,ideal,t) | SUM(e, e, ...) as a nested tuple."""
    text = text.replace(" ", "")
    pos = 0

    def expr():
        nonlocal pos
        m = _EXPR_NAME.match(text, pos)
        if not m:
            raise ValueError(f"bad module expression at column {pos + 1}")
        word = m.group()
        pos = m.end()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            items = []
            while True:
                if word == "SUM":
                    items.append(expr())
                else:
                    m2 = re.compile(r"-?[A-Za-z0-9_']+").match(text, pos)
                    if not m2:
                        raise ValueError(f"bad argument at column {pos + 1}")
                    items.append(m2.group())
                    pos = m2.end()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    break
                raise ValueError(f"expected ',' or ')' at column {pos + 1}")
            return (word,) + tuple(items)
        return ("name", word)

    out = expr()
    if pos != len(text):
        raise ValueError(f"trailing text at column {pos + 1}")
    return out


def _expr_names(e):
    if e[0] == "name":
        return {("module", e[1])}
    if e[0] == "FREE":
        return {("ring", e[1])}
    if e[0] == "QUOT":
        return {("ring", e[1]), ("ideal", e[2])}
    if e[0] == "SUM":
        out = set()
        for x in e[1:]:
            out |= _expr_names(x)
        return out
    raise ValueError(f"unknown module constructor {e[0]}")


def _check_names(pf):
    """Every referenced name must be declared earlier; diagnostics carry line and column."""
    known = {"ring": set(), "ideal": set(), "module": set(), "complex": set()}
    diags = []
    fields = [s for s in pf.statements if s.kind == "field"]
    if len(fields) != 1:
        diags.append((fields[1].line if len(fields) > 1 else 1, 1, "exactly one field declaration required"))

    def need(kind, name, s, col):
        if name not in known[kind]:
            diags.append((s.line, col, f"undefined {kind} {name!r}"))

    for s in pf.statements:
        cols = list(s.cols) + [1] * len(s.args)
        if s.kind == "ring":
            q = s.get("quotient")
            if q is not None:
                need("ring", q, s, cols[0])
                by = s.get("by")
                if by is None:
                    diags.append((s.line, 1, "quotient ring needs 'by IDEAL'"))
                else:
                    need("ideal", by, s, cols[1] if len(cols) > 1 else 1)
            elif s.get("vars") is None:
                diags.append((s.line, 1, "ring needs vars or quotient"))
        elif s.kind == "ideal":
            need("ring", s.get("in"), s, cols[0])
        elif s.kind == "module":
            if s.get("=") is not None:
                try:
                    for kind, n in sorted(_expr_names(parse_module_expr(s.get("=")))):
                        need(kind, n, s, cols[0])
                except ValueError as e:
                    diags.append((s.line, cols[0], str(e)))
            else:
                need("ring", s.get("over"), s, cols[0])
        elif s.kind == "complex":
            need("ring", s.get("over"), s, cols[0])
            for (k, v), c in zip(s.args, cols):
                if k == "term":
                    need("module", v[1], s, c)
        elif s.kind == "task":
            for (k, v), c in zip(s.args, cols):
                if k in ("pair", "with"):
                    need("ring", v[0], s, c)
                    need("ideal", v[1], s, c)
                elif k in ("module", "module2", "swap_module"):
                    try:
                        for kind, n in sorted(_expr_names(parse_module_expr(v))):
                            need(kind, n, s, c)
                    except ValueError as e:
                        diags.append((s.line, c, str(e)))
                elif k == "complex":
                    need("complex", v, s, c)
                elif k in ("swap_ring", "ring"):
                    need("ring", v, s, c)
                elif k == "ideal":
                    need("ideal", v, s, c)
        if s.kind in known:
            known[s.kind].add(s.name)
    if diags:
        raise ProblemError(diags)


# -------------------------------------------------------------- serialize

def _fmt_value(k, v):
    if k == "vars":
        return " ".join(f"{n}:{w}" for n, w in v)
    if k in ("rels", "gens"):
        return ", ".join(v)
    if k in ("shifts", "rel", "attest"):
        return ",".join(str(x) for x in v)
    if k == "term":
        return f"{v[0]} {v[1]}"
    if k == "diff":
        return f"{v[0]} " + ";".join(",".join(col) for col in v[1])
    if k == "window":
        return f"{v[0]}..{v[1]}"
    if k in ("pair", "with"):
        return f"pair({v[0]},{v[1]})"
    return str(v)


def serialize(pf: ProblemFile):
    lines = []
    for s in pf.statements:
        if s.kind == "field":
            lines.append(f"field {s.name}")
        elif s.kind == "expect":
            lines.append(f"expect {s.name}")
        elif s.kind == "task":
            parts = [f"task {s.name}"]
            for k, v in s.args:
                parts.append(_fmt_value(k, v) if k == "pair" else f"{k} {_fmt_value(k, v)}")
            lines.append(" ".join(parts))
        else:
            parts = [f"{s.kind} {s.name}"]
            for k, v in s.args:
                parts.append(f"{k} {_fmt_value(k, v)}")
            lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ build

@dataclass
class Workspace:
    field: object
    rings: dict = dc_field(default_factory=dict)
    ideals: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    complexes: dict = dc_field(default_factory=dict)

    def module(self, text):
        return self._expr(parse_module_expr(text))

    def _expr(self, e):
        from .modules import FPModule, direct_sum

        if e[0] == "name":
            return self.modules[e[1]]
        if e[0] == "FREE":
            shift = int(e[2]) if len(e) > 2 else 0
            return FPModule.free(self.rings[e[1]], [shift])
        if e[0] == "QUOT":
            I = self.ideals[e[2]]
            return FPModule.cyclic(self.rings[e[1]], I.power(int(e[3])).gens)
        if e[0] == "SUM":
            return direct_sum([self._expr(x) for x in e[1:]])
        raise ValueError(e[0])

    def pair(self, names):
        return self.rings[names[0]], self.ideals[names[1]]


def build(pf: ProblemFile):
    from .complexes import BoundedComplex
    from .modules import FPModule, ModuleMap

    fs = [s for s in pf.statements if s.kind == "field"][0]
    field = QQ if fs.name == "Q" else PrimeField(int(fs.name.split()[1]))
    ws = Workspace(field)
    for s in pf.statements:
        col = s.cols[0] if s.cols else 1
        try:
            if s.kind == "ring":
                if s.get("quotient") is not None:
                    R = quotient_ring(ws.rings[s.get("quotient")], ws.ideals[s.get("by")], name=s.name)
                else:
                    R = make_ring(field, list(s.get("vars")), list(s.get("rels", ())), name=s.name)
                    if s.get("invert"):
                        R = localize(R, s.get("invert"))
                ws.rings[s.name] = R
            elif s.kind == "ideal":
                ws.ideals[s.name] = IdealSpec.parse(ws.rings[s.get("in")], list(s.get("gens", ())))
            elif s.kind == "module":
                if s.get("=") is not None:
                    ws.modules[s.name] = ws.module(s.get("="))
                    continue
                R = ws.rings[s.get("over")]
                rank = s.get("cover", 1)
                shifts = s.get("shifts", tuple(0 for _ in range(rank)))
                if len(shifts) != rank:
                    raise ProblemError([(s.line, col, f"{rank} generators but {len(shifts)} shifts")])
                rels = []
                for entries in s.all("rel"):
                    if len(entries) != rank:
                        raise ProblemError([(s.line, col, f"relation needs {rank} entries")])
                    rels.append(_vector(R, entries))
                ws.modules[s.name] = FPModule(R, shifts, rels)
            elif s.kind == "complex":
                R = ws.rings[s.get("over")]
                mods = {i: ws.modules[m] for i, m in s.all("term")}
                diffs = {}
                for i, columns in s.all("diff"):
                    if i not in mods or i + 1 not in mods:
                        raise ProblemError([(s.line, col, f"diff {i} needs terms {i} and {i + 1}")])
                    src, tgt = mods[i], mods[i + 1]
                    if len(columns) != src.rank or any(len(c) != tgt.rank for c in columns):
                        raise ProblemError([(s.line, col, f"diff {i} must have {src.rank} columns of {tgt.rank} entries")])
                    diffs[i] = ModuleMap(src, tgt, [_vector(R, c) for c in columns], check=False)
                ws.complexes[s.name] = BoundedComplex(R, mods, diffs, check=False)
        except (PolyError, RingError, ValueError) as e:
            if isinstance(e, ProblemError):
                raise
            raise ProblemError([(s.line, col, str(e))]) from None
    return ws


def _vector(R, entries):
    v = {}
    for k, text in enumerate(entries):
        for e, c in R.parse(text).items():
            v[(k, e)] = c
    return v
