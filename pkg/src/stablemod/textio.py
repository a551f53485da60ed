"""The plain-text input dialect for rings and modules, and its printer.

Grammar (EBNF)::

    file      = { ring | module } ;
    ring      = "ring" NAME "{" "char" INT ";" "vars" { NAME [ ":" INT ] } ";"
                "ideal" "{" [ poly { ";" poly } ] "}" [ ";" ]
                [ "props" "{" [ prop { ";" prop } ] "}" ] "}" ;
    prop      = "dim" INT | "regular" | "cm" | "gorenstein" ;
    module    = "module" NAME "over" NAME "{" "gens" "{" { NAME ":" INT } "}"
                "rels" "{" [ vector { ";" vector } ] "}" "}" ;
    poly      = term { ("+" | "-") term } ;   (leading sign allowed)
    term      = factor { "*" factor } ;
    factor    = INT | NAME [ "^" INT ] ;
    vector    = poly in which every term carries exactly one generator NAME ;

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .poly import PolyRing, RawPoly, format_poly
from .matrix import Vector, format_vector


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokens(text: str):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        elif m.group(3) is not None and not m.group(3).isspace():
            out.append(("op", m.group(3), start))
        pos = m.end()
    return out


def parse_combination(text: str, ring: PolyRing, gens: dict[str, int] | None = None, offset: int = 0):
    """Parse a polynomial (gens is None) or a vector over the named generators."""
    var_index = {n: i for i, n in enumerate(ring.names)}
    p = ring.p
    toks = _tokens(text)
    out: dict = {}
    i = 0
    if not toks:
        raise ParseError("empty expression", 0, offset + 1)
    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i][0] == "op" and toks[i][1] in "+-":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        coef = sign
        exps = [0] * ring.nvars
        gen = None
        if i >= len(toks):
            raise ParseError("missing term after sign", 0, offset + len(text))
        expect_factor = True
        while expect_factor:
            if i >= len(toks):
                raise ParseError("missing factor after '*'", 0, offset + len(text))
            kind, val, pos = toks[i]
            if kind == "int":
                coef *= val
                i += 1
            elif kind == "name":
                i += 1
                power = 1
                if i < len(toks) and toks[i][:2] == ("op", "^"):
                    if i + 1 >= len(toks) or toks[i + 1][0] != "int":
                        raise ParseError("exponent must be a non-negative integer", 0, offset + pos + 1)
                    power = toks[i + 1][1]
                    i += 2
                if val in var_index:
                    exps[var_index[val]] += power
                elif gens is not None and val in gens:
                    if gen is not None or power != 1:
                        raise ParseError(f"term has more than one generator ({val})", 0, offset + pos + 1)
                    gen = gens[val]
                else:
                    raise ParseError(f"unknown name {val!r}", 0, offset + pos + 1)
            else:
                raise ParseError(f"unexpected {val!r}", 0, offset + pos + 1)
            if i < len(toks) and toks[i][:2] == ("op", "*"):
                i += 1
            else:
                expect_factor = False
        if i < len(toks) and not (toks[i][0] == "op" and toks[i][1] in "+-"):
            raise ParseError(f"unexpected {toks[i][1]!r}", 0, offset + toks[i][2] + 1)
        e = tuple(exps)
        if gens is not None:
            if gen is None:
                raise ParseError("term without a generator", 0, offset + 1)
            key = (gen, e)
        else:
            key = e
        x = (out.get(key, 0) + coef) % p
        if x:
            out[key] = x
        else:
            out.pop(key, None)
    return out


def parse_poly(text: str, ring: PolyRing) -> RawPoly:
    return parse_combination(text, ring)


def parse_vector(text: str, ring: PolyRing, gens: dict[str, int]) -> Vector:
    return parse_combination(text, ring, gens)


# ---------- file dialect ----------

@dataclass
class ParsedModule:
    name: str
    ring: str
    gen_names: list
    module: object  # modcat.Module


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Reader:
    def __init__(self, text: str):
        self.text = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
        self.pos = 0

    def err(self, msg: str, pos: int | None = None) -> ParseError:
        line, col = _line_col(self.text, self.pos if pos is None else pos)
        return ParseError(msg, line, col)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek_word(self) -> str | None:
        self.skip()
        m = re.compile(r"[A-Za-z_][A-Za-z_0-9]*").match(self.text, self.pos)
        return m.group() if m else None

    def word(self) -> str:
        w = self.peek_word()
        if w is None:
            raise self.err("expected a name")
        self.pos += len(w)
        return w

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.pos):
            found = self.text[self.pos:self.pos + 10] or "end of input"
            raise self.err(f"expected {s!r}, found {found!r}")
        self.pos += len(s)

    def maybe(self, s: str) -> bool:
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def integer(self) -> int:
        self.skip()
        m = re.compile(r"-?\d+").match(self.text, self.pos)
        if not m:
            raise self.err("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def block_items(self) -> list[tuple[str, int]]:
        """Contents of a { a; b; c } block split on ';' with start offsets."""
        self.expect("{")
        depth = 1
        start = self.pos
        i = self.pos
        while i < len(self.text) and depth:
            ch = self.text[i]
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
            i += 1
        if depth:
            raise self.err("unterminated block", start)
        body = self.text[start:i - 1]
        self.pos = i
        items = []
        off = start
        for part in body.split(";"):
            if part.strip():
                lead = len(part) - len(part.lstrip())
                items.append((part.strip(), off + lead))
            off += len(part) + 1
        return items


def parse_input(text: str, rings: dict | None = None, verify: bool = True):
    """Parse rings and modules; returns (dict of RingSpec, dict of ParsedModule)."""
    from .matrix import HomogeneityError
    from .modcat import Module
    from .rings import PropertyMismatch, RingSpec

    rings = dict(rings or {})
    modules: dict[str, ParsedModule] = {}
    rd = _Reader(text)
    while not rd.at_end():
        kw_pos = rd.pos
        kw = rd.word()
        if kw == "ring":
            name = rd.word()
            rd.expect("{")
            rd.expect("char")
            p = rd.integer()
            rd.expect(";")
            rd.expect("vars")
            names, weights = [], []
            while True:
                w = rd.peek_word()
                if w is None or w == "ideal":
                    break
                rd.word()
                names.append(w)
                weights.append(rd.integer() if rd.maybe(":") else 1)
            rd.maybe(";")
            rd.expect("ideal")
            try:
                poly = PolyRing(tuple(names), tuple(weights), p)
            except ValueError as exc:
                raise rd.err(str(exc), kw_pos) from None
            ideal = []
            for item, off in rd.block_items():
                try:
                    ideal.append(parse_poly(item, poly))
                except ParseError as exc:
                    line, col = _line_col(rd.text, off + max(exc.col - 1, 0))
                    raise ParseError(str(exc).split(": ", 1)[-1], line, col) from None
            rd.maybe(";")
            props: dict = {}
            if rd.peek_word() == "props":
                rd.word()
                for item, off in rd.block_items():
                    parts = item.split()
                    if parts[0] == "dim" and len(parts) == 2 and parts[1].lstrip("-").isdigit():
                        props["dim"] = int(parts[1])
                    elif parts == ["regular"]:
                        props["regular"] = True
                    elif parts == ["cm"]:
                        props["cohen_macaulay"] = True
                    elif parts == ["gorenstein"]:
                        props["gorenstein"] = True
                    else:
                        line, col = _line_col(rd.text, off)
                        raise ParseError(f"unknown property {item!r}", line, col)
            rd.maybe(";")
            rd.expect("}")
            declared_dim = props.pop("dim", None)
            try:
                ring = RingSpec(name, poly, tuple(ideal), dim=declared_dim, **props)
            except ValueError as exc:
                if isinstance(exc, PropertyMismatch):
                    raise
                line, col = _line_col(rd.text, kw_pos)
                raise HomogeneityError(f"{line}:{col}: ring {name}: {exc}") from None
            if verify:
                ring.verify()
            rings[name] = ring
        elif kw == "module":
            name = rd.word()
            if rd.word() != "over":
                raise rd.err("expected 'over'")
            rname_pos = rd.pos
            rname = rd.word()
            if rname not in rings:
                raise rd.err(f"unknown ring {rname!r}", rname_pos)
            ring = rings[rname]
            rd.expect("{")
            rd.expect("gens")
            gen_names, degrees = [], []
            rd.expect("{")
            while not rd.maybe("}"):
                g = rd.word()
                rd.expect(":")
                gen_names.append(g)
                degrees.append(rd.integer())
                rd.maybe(";")
            rd.expect("rels")
            gidx = {g: i for i, g in enumerate(gen_names)}
            rels = []
            for item, off in rd.block_items():
                try:
                    v = parse_vector(item, ring.poly, gidx)
                except ParseError as exc:
                    line, col = _line_col(rd.text, off + max(exc.col - 1, 0))
                    raise ParseError(str(exc).split(": ", 1)[-1], line, col) from None
                degs = {ring.poly.deg(e) + degrees[k] for (k, e) in v}
                if len(degs) > 1:
                    line, col = _line_col(rd.text, off)
                    raise HomogeneityError(f"{line}:{col}: relation {item!r} is not homogeneous (degrees {sorted(degs)})")
                rels.append(v)
            rd.expect("}")
            modules[name] = ParsedModule(name, rname, gen_names, Module(ring, degrees, rels))
        else:
            raise rd.err(f"expected 'ring' or 'module', found {kw!r}", kw_pos)
    return rings, modules


def format_ring(ring) -> str:
    pr = ring.poly
    vars_ = " ".join(f"{n}:{w}" for n, w in zip(pr.names, pr.weights))
    ideal = "; ".join(format_poly(f, pr) for f in ring.ideal)
    props = [f"dim {ring.dim}"]
    if ring.regular:
        props.append("regular")
    if ring.cohen_macaulay:
        props.append("cm")
    if ring.gorenstein:
        props.append("gorenstein")
    return f"ring {ring.name} {{ char {pr.p}; vars {vars_}; ideal {{ {ideal} }}; props {{ {'; '.join(props)} }} }}"


def format_module(name: str, module, gen_names=None) -> str:
    ring = module.ring
    gen_names = list(gen_names or [f"e{i}" for i in range(module.rank)])
    gens = " ".join(f"{g}:{d}" for g, d in zip(gen_names, module.degrees))
    rels = "; ".join(format_vector(v, ring.poly, gen_names) for v in module.rels)
    return f"module {name} over {ring.name} {{ gens {{ {gens} }} rels {{ {rels} }} }}"
