"""Line-oriented input language, report writer and command-line entry point.

A script is a list of statements, one per line, ``#`` starting a comment::

    field 5
    ring S vars x rel x^2
    ring T vars u rel u^3
    fiber R = S * T
    module M over R coker [ x , u ]
    resolve M len 6
    tor M M max 6
    scan theorems seed 42 count 200
    verify dvr-example degree 12

``verify`` accepts an optional trailing ``imax <i>`` (default 10).  Running a script produces a JSON report (``"schema": 1``).  Everything except
the ``timing`` block is a deterministic function of the script and the flags.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import AlgebraError, FiniteLocalAlgebra, fiber_product, monomial_quotient_algebra
from .cache import cached_resolution
from .corpus import CorpusParams, write_manifest
from .exactla import check_prime
from .fdmodule import ModuleError, module_from_presentation, module_summary
from .gradedhyp import WindowError, verify_dvr_example
from .resolution import ResourceLimit
from .theorems import BOUND, MIN_BOUND, Status, scan_corpus
from .tor import tor_from_resolution

SCHEMA_VERSION = 1
EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
DVR_MAX_I = 10


# ---------------------------------------------------------------- diagnostics


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    kind: str  # lexical, syntax, name or type
    message: str

    def to_json(self) -> dict:
        return {"line": self.line, "column": self.column, "kind": self.kind, "message": self.message}

    def format(self, source: str = "<input>") -> str:
        return f"{source}:{self.line}:{self.column}: {self.kind} error: {self.message}"


class InputError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.format() for d in diagnostics))
        self.diagnostics = diagnostics


# ---------------------------------------------------------------- model

Monomial = tuple  # ((var, exp), ...)


@dataclass(frozen=True)
class Term:
    coef: int
    mono: Monomial = ()


@dataclass(frozen=True)
class Poly:
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class FieldStmt:
    p: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RingStmt:
    name: str
    variables: tuple[str, ...]
    relations: tuple[Monomial, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FiberStmt:
    name: str
    left: str
    right: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ModuleStmt:
    name: str
    ring: str
    rows: tuple[tuple[Poly, ...], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ResolveStmt:
    module: str
    length: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TorStmt:
    left: str
    right: str
    max_i: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ScanStmt:
    seed: int
    count: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class VerifyStmt:
    degree: int
    i_max: int = DVR_MAX_I
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class InputModel:
    statements: tuple

    def pretty(self) -> str:
        return "".join(_pretty_stmt(s) + "\n" for s in self.statements)

    def digest(self) -> str:
        return hashlib.blake2b(self.pretty().encode(), digest_size=16).hexdigest()


def _pretty_mono(mono: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)


def _pretty_term(t: Term, first: bool) -> str:
    c = t.coef if first else abs(t.coef)
    if not t.mono:
        body = str(c)
    elif c == 1:
        body = _pretty_mono(t.mono)
    elif c == -1:
        body = "-" + _pretty_mono(t.mono)
    else:
        body = f"{c}*{_pretty_mono(t.mono)}"
    if first:
        return body
    return f" {'-' if t.coef < 0 else '+'} {body}"


def _pretty_poly(f: Poly) -> str:
    return "".join(_pretty_term(t, k == 0) for k, t in enumerate(f.terms))


def _pretty_stmt(s) -> str:
    if isinstance(s, FieldStmt):
        return f"field {s.p}"
    if isinstance(s, RingStmt):
        return f"ring {s.name} vars {' '.join(s.variables)} rel {' '.join(_pretty_mono(m) for m in s.relations)}"
    if isinstance(s, FiberStmt):
        return f"fiber {s.name} = {s.left} * {s.right}"
    if isinstance(s, ModuleStmt):
        rows = " ; ".join(" , ".join(_pretty_poly(f) for f in row) for row in s.rows)
        return f"module {s.name} over {s.ring} coker [ {rows} ]"
    if isinstance(s, ResolveStmt):
        return f"resolve {s.module} len {s.length}"
    if isinstance(s, TorStmt):
        return f"tor {s.left} {s.right} max {s.max_i}"
    if isinstance(s, ScanStmt):
        return f"scan theorems seed {s.seed} count {s.count}"
    if isinstance(s, VerifyStmt):
        tail = "" if s.i_max == DVR_MAX_I else f" imax {s.i_max}"
        return f"verify dvr-example degree {s.degree}{tail}"
    raise TypeError(f"unknown statement {s!r}")


# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>dvr-example\b|[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[=*\[\],;+\-^]))")


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, sym, end
    text: str
    line: int
    column: int


def _tokenize(text: str, lineno: int) -> list[Token]:
    code = text.split("#", 1)[0].rstrip()
    out, pos = [], 0
    while pos < len(code):
        if code[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(code, pos)
        if m is None or m.end() == pos:
            raise InputError([Diagnostic(lineno, pos + 1, "lexical", f"unexpected character {code[pos]!r}")])
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), lineno, start + 1))
        pos = m.end()
    out.append(Token("end", "", lineno, len(code) + 1))
    return out


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> InputError:
        tok = tok or self.tok
        found = "end of line" if tok.kind == "end" else repr(tok.text)
        return InputError([Diagnostic(tok.line, tok.column, "syntax", f"{message}, found {found}")])

    def take(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            raise self.error(f"expected {text or kind}")
        self.pos += 1
        return t

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.pos += 1
            return t
        return None

    def name(self) -> str:
        t = self.take("name")
        if t.text == "dvr-example":
            raise self.error("expected a name", t)
        return t.text

    def integer(self) -> int:
        return int(self.take("int").text)

    def end(self) -> None:
        if self.tok.kind != "end":
            raise self.error("expected end of statement")


def _monomial(cur: _Cursor) -> Monomial:
    factors = [_factor(cur)]
    while cur.accept("sym", "*"):
        factors.append(_factor(cur))
    return tuple(factors)


def _factor(cur: _Cursor) -> tuple[str, int]:
    v = cur.name()
    e = 1
    if cur.accept("sym", "^"):
        t = cur.tok
        e = cur.integer()
        if e < 1:
            raise InputError([Diagnostic(t.line, t.column, "syntax", "exponents must be positive")])
    return (v, e)


def _term(cur: _Cursor, sign: int) -> Term:
    if cur.tok.kind == "int":
        c = cur.integer()
        if cur.accept("sym", "*"):
            return Term(sign * c, _monomial(cur))
        return Term(sign * c, ())
    return Term(sign, _monomial(cur))


def _poly(cur: _Cursor) -> Poly:
    sign = -1 if cur.accept("sym", "-") else 1
    terms = [_term(cur, sign)]
    while True:
        if cur.accept("sym", "+"):
            terms.append(_term(cur, 1))
        elif cur.accept("sym", "-"):
            terms.append(_term(cur, -1))
        else:
            return Poly(tuple(terms))


def _matrix(cur: _Cursor) -> tuple[tuple[Poly, ...], ...]:
    cur.take("sym", "[")
    rows, row = [], [_poly(cur)]
    while True:
        if cur.accept("sym", ","):
            row.append(_poly(cur))
        elif cur.accept("sym", ";"):
            rows.append(tuple(row))
            row = [_poly(cur)]
        else:
            cur.take("sym", "]")
            rows.append(tuple(row))
            return tuple(rows)


def _statement(cur: _Cursor, line: int):
    head = cur.take("name")
    kw = head.text
    if kw == "field":
        return FieldStmt(cur.integer(), line)
    if kw == "ring":
        name = cur.name()
        cur.take("name", "vars")
        variables = []
        while cur.tok.kind == "name" and cur.tok.text != "rel":
            variables.append(cur.name())
        if not variables:
            raise cur.error("expected at least one variable")
        cur.take("name", "rel")
        rels = [_monomial(cur)]
        while cur.tok.kind == "name":
            rels.append(_monomial(cur))
        return RingStmt(name, tuple(variables), tuple(rels), line)
    if kw == "fiber":
        name = cur.name()
        cur.take("sym", "=")
        left = cur.name()
        cur.take("sym", "*")
        return FiberStmt(name, left, cur.name(), line)
    if kw == "module":
        name = cur.name()
        cur.take("name", "over")
        ring = cur.name()
        cur.take("name", "coker")
        return ModuleStmt(name, ring, _matrix(cur), line)
    if kw == "resolve":
        m = cur.name()
        cur.take("name", "len")
        return ResolveStmt(m, cur.integer(), line)
    if kw == "tor":
        m, n = cur.name(), cur.name()
        cur.take("name", "max")
        return TorStmt(m, n, cur.integer(), line)
    if kw == "scan":
        cur.take("name", "theorems")
        cur.take("name", "seed")
        seed = cur.integer()
        cur.take("name", "count")
        return ScanStmt(seed, cur.integer(), line)
    if kw == "verify":
        cur.take("name", "dvr-example")
        cur.take("name", "degree")
        degree = cur.integer()
        i_max = cur.integer() if cur.accept("name", "imax") else DVR_MAX_I
        return VerifyStmt(degree, i_max, line)
    raise InputError([Diagnostic(head.line, head.column, "syntax", f"unknown statement {kw!r}")])


def parse(text: str) -> InputModel:
    """Parse and type-check a script; raises :class:`InputError` with every diagnostic found."""
    stmts, diags = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            tokens = _tokenize(raw, lineno)
            if tokens[0].kind == "end":
                continue
            cur = _Cursor(tokens)
            s = _statement(cur, lineno)
            cur.end()
            stmts.append(s)
        except InputError as e:
            diags.extend(e.diagnostics)
    if diags:
        raise InputError(diags)
    model = InputModel(tuple(stmts))
    build(model)
    return model


# ---------------------------------------------------------------- semantics


@dataclass
class Environment:
    p: int | None = None
    rings: dict = field(default_factory=dict)  # name -> FiniteLocalAlgebra
    fibers: dict = field(default_factory=dict)  # name -> FiberProductData
    variables: dict = field(default_factory=dict)  # ring name -> tuple of variables
    modules: dict = field(default_factory=dict)  # name -> FDModule
    module_rings: dict = field(default_factory=dict)  # module name -> ring name


def _diag(s, kind: str, message: str) -> InputError:
    return InputError([Diagnostic(s.line, 1, kind, message)])


def _element(A: FiniteLocalAlgebra, f: Poly, p: int) -> np.ndarray:
    index = {lab: i for i, lab in enumerate(A.labels)}
    out = np.zeros(A.dim, dtype=np.int64)
    for t in f.terms:
        e = A.unit() * (t.coef % p)
        for v, k in t.mono:
            # a variable missing from the basis lies in the ideal, so it is zero
            x = A.basis_element(index[v]) if v in index else np.zeros(A.dim, dtype=np.int64)
            for _ in range(k):
                e = A.mul(e, x)
        out = np.mod(out + e, p)
    return out


def _define(env: Environment, s) -> None:
    names = set(env.rings) | set(env.modules)
    if isinstance(s, FieldStmt):
        if env.p is not None:
            raise _diag(s, "name", "the field is already declared")
        try:
            env.p = check_prime(s.p)
        except ValueError as e:
            raise _diag(s, "type", str(e)) from None
        return
    if isinstance(s, (RingStmt, FiberStmt, ModuleStmt)):
        if env.p is None:
            raise _diag(s, "name", "declare 'field <p>' first")
        if s.name in names:
            raise _diag(s, "name", f"name {s.name!r} is already defined")
    if isinstance(s, RingStmt):
        if len(set(s.variables)) != len(s.variables):
            raise _diag(s, "type", "duplicate variable names")
        for m in s.relations:
            for v, _ in m:
                if v not in s.variables:
                    raise _diag(s, "name", f"relation uses unknown variable {v!r}")
        rels = [_pretty_mono(m) for m in s.relations]
        try:
            env.rings[s.name] = monomial_quotient_algebra(env.p, s.variables, rels)
        except AlgebraError as e:
            raise _diag(s, "type", str(e)) from None
        env.variables[s.name] = s.variables
    elif isinstance(s, FiberStmt):
        for r in (s.left, s.right):
            if r not in env.rings:
                raise _diag(s, "name", f"unknown ring {r!r}")
        clash = set(env.variables[s.left]) & set(env.variables[s.right])
        if clash:
            raise _diag(s, "type", f"factors share variables {sorted(clash)}")
        try:
            fib = fiber_product(env.rings[s.left], env.rings[s.right])
        except AlgebraError as e:
            raise _diag(s, "type", str(e)) from None
        env.rings[s.name] = fib.R
        env.fibers[s.name] = fib
        env.variables[s.name] = env.variables[s.left] + env.variables[s.right]
    elif isinstance(s, ModuleStmt):
        if s.ring not in env.rings:
            raise _diag(s, "name", f"unknown ring {s.ring!r}")
        A, variables = env.rings[s.ring], env.variables[s.ring]
        if len({len(r) for r in s.rows}) != 1:
            raise _diag(s, "type", "rows of the presentation have different lengths")
        for row in s.rows:
            for f in row:
                for t in f.terms:
                    for v, _ in t.mono:
                        if v not in variables:
                            raise _diag(s, "name", f"{v!r} is not a variable of ring {s.ring}")
        P = np.array([[_element(A, f, env.p) for f in row] for row in s.rows], dtype=np.int64)
        try:
            env.modules[s.name] = module_from_presentation(A, P)
        except ModuleError as e:
            raise _diag(s, "type", str(e)) from None
        env.module_rings[s.name] = s.ring
    elif isinstance(s, ResolveStmt):
        if s.module not in env.modules:
            raise _diag(s, "name", f"unknown module {s.module!r}")
    elif isinstance(s, TorStmt):
        for m in (s.left, s.right):
            if m not in env.modules:
                raise _diag(s, "name", f"unknown module {m!r}")
        if env.module_rings[s.left] != env.module_rings[s.right]:
            raise _diag(
                s,
                "type",
                f"{s.left} is over {env.module_rings[s.left]} but {s.right} is over {env.module_rings[s.right]}",
            )
    elif isinstance(s, ScanStmt):
        if s.count < 1:
            raise _diag(s, "type", "count must be positive")
    elif isinstance(s, VerifyStmt):
        if s.i_max < 1 or s.i_max > s.degree - 2:
            raise _diag(s, "type", f"imax {s.i_max} needs 1 <= imax <= degree - 2 = {s.degree - 2}")


def build(model: InputModel) -> Environment:
    """Construct every ring and module; raises :class:`InputError` on the first bad statement."""
    env = Environment()
    for s in model.statements:
        _define(env, s)
    return env


# ---------------------------------------------------------------- running


@dataclass(frozen=True)
class Flags:
    jobs: int = 1
    resolution_bound: int = BOUND  # Tor bound used by theorem scans
    seed: int | None = None  # overrides the seed of every scan statement

    def to_json(self) -> dict:
        return {"resolution_bound": self.resolution_bound, "seed": self.seed}


class _Failed(Exception):
    pass


def _run_statement(env: Environment, s, flags: Flags, p: int | None) -> dict | None:
    if isinstance(s, ResolveStmt):
        M = env.modules[s.module]
        res = cached_resolution(M, s.length)
        return {
            "command": "resolve",
            "module": s.module,
            "ring": env.module_rings[s.module],
            "length": s.length,
            "betti": res.betti,
            "terminated": res.terminated,
            "pd": res.pd,
            "status": Status.PASS.value,
        }
    if isinstance(s, TorStmt):
        M, N = env.modules[s.left], env.modules[s.right]
        left = tor_from_resolution(cached_resolution(M, s.max_i + 1), N, s.max_i)
        right = tor_from_resolution(cached_resolution(N, s.max_i + 1), M, s.max_i)
        ok = left == right
        out = {
            "command": "tor",
            "left": s.left,
            "right": s.right,
            "ring": env.module_rings[s.left],
            "tor": {"max": s.max_i, "dims": list(left), "method": "both", "balanced": ok},
            "status": Status.PASS.value if ok else Status.FAIL.value,
        }
        if not ok:
            out["tor"]["right_dims"] = list(right)
        return out
    if isinstance(s, ScanStmt):
        seed = s.seed if flags.seed is None else flags.seed
        params = CorpusParams(seed=seed, count=s.count, **({} if p is None else {"p": p}))
        summary = scan_corpus(params, bound=flags.resolution_bound, jobs=flags.jobs)
        return {"command": "scan", "scan": summary, "status": summary["status"]}
    if isinstance(s, VerifyStmt):
        rep = verify_dvr_example(s.degree, s.i_max, p or 5)
        block = {"status": rep.status.value, **rep.detail}
        return {"command": "verify", "dvr_example": block, "status": rep.status.value}
    return None


def _definitions(env: Environment) -> dict:
    rings = {}
    for name, A in env.rings.items():
        rings[name] = {"dim": A.dim, "basis": list(A.labels), "variables": list(env.variables[name])}
        if name in env.fibers:
            rings[name]["fiber"] = True
    mods = {name: {"ring": env.module_rings[name], **module_summary(M)} for name, M in env.modules.items()}
    return {"field": env.p, "rings": rings, "modules": mods}


def run(model: InputModel, flags: Flags = Flags()) -> tuple[dict, int]:
    """Execute the script; returns the report and the process exit code."""
    t0 = time.perf_counter()
    env = build(model)
    results, timing = [], []
    code = EXIT_OK
    error = None
    for s in model.statements:
        t = time.perf_counter()
        try:
            r = _run_statement(env, s, flags, env.p)
        except ResourceLimit as e:
            error = {"line": s.line, "kind": "resource", "message": str(e)}
            code = EXIT_RESOURCE
            break
        if r is None:
            continue
        r = {"line": s.line, **r}
        results.append(r)
        timing.append({"line": s.line, "seconds": round(time.perf_counter() - t, 4)})
        if r["status"] == Status.FAIL.value:
            code = EXIT_CHECK_FAILED
    status = {EXIT_OK: "pass", EXIT_CHECK_FAILED: "fail", EXIT_RESOURCE: "resource_error"}[code]
    doc = {
        "schema": SCHEMA_VERSION,
        "tool": {"name": "torfib", "version": __version__},
        "input_digest": input_digest(model, flags),
        "flags": flags.to_json(),
        "definitions": _definitions(env),
        "results": results,
        "status": status,
    }
    if error is not None:
        doc["error"] = error
    doc["timing"] = {"total_seconds": round(time.perf_counter() - t0, 4), "commands": timing}
    return doc, code


def input_digest(model: InputModel, flags: Flags) -> str:
    h = hashlib.blake2b(digest_size=16)
    h.update(model.pretty().encode())
    h.update(json.dumps(flags.to_json(), sort_keys=True).encode())
    return h.hexdigest()


def _jsonable(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, default=_jsonable) + "\n"


def deterministic_part(doc: dict) -> dict:
    """The report without its timing block, the part covered by the determinism guarantee."""
    return {k: v for k, v in doc.items() if k != "timing"}


def csv_rows(doc: dict) -> list[list]:
    rows = [["kind", "subject", "ring", "i", "value"]]
    for r in doc.get("results", []):
        if r.get("command") == "resolve":
            rows += [["betti", r["module"], r["ring"], i, b] for i, b in enumerate(r["betti"])]
        elif r.get("command") == "tor" and "tor" in r:
            subj = f"{r['left']},{r['right']}"
            rows += [["tor", subj, r["ring"], i, d] for i, d in enumerate(r["tor"]["dims"])]
        elif r.get("command") == "verify":
            for pair, t in r["dvr_example"]["tor"].items():
                rows += [["graded_tor", pair, "k[x,y]/(xy)", i + 1, d] for i, d in enumerate(t["dims"])]
    return rows


def write_csv(doc: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(csv_rows(doc))


# ---------------------------------------------------------------- entry point


def _error_document(diags: list[Diagnostic]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool": {"name": "torfib", "version": __version__},
        "status": "input_error",
        "diagnostics": [d.to_json() for d in diags],
    }


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torfib", description="Exact Tor computations over fiber products of local algebras.")
    ap.add_argument("--version", action="version", version=f"torfib {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a script and write a JSON report")
    r.add_argument("script", help="script file, or - for stdin")
    r.add_argument("--out", help="write the JSON report here instead of stdout")
    r.add_argument("--csv", help="also write flat Betti/Tor rows to this CSV file")
    r.add_argument("--jobs", type=int, default=1, help="worker processes for theorem scans")
    r.add_argument("--resolution-bound", type=int, default=BOUND, help="largest Tor index checked by scans")
    r.add_argument("--seed", type=int, default=None, help="override the seed of every scan")
    f = sub.add_parser("fmt", help="parse a script and print it in canonical form")
    f.add_argument("script")
    m = sub.add_parser("manifest", help="write the corpus manifest (one line per instance)")
    m.add_argument("--seed", type=int, default=CorpusParams.seed)
    m.add_argument("--count", type=int, default=CorpusParams.count)
    m.add_argument("--out", required=True)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in ("run", "fmt", "manifest", "-h", "--help", "--version"):
        argv.insert(0, "run")
    args = _parser().parse_args(argv)
    if args.cmd == "manifest":
        write_manifest(CorpusParams(seed=args.seed, count=args.count), args.out)
        return EXIT_OK
    source = "<stdin>" if args.script == "-" else args.script
    try:
        model = parse(_read(args.script))
    except OSError as e:
        print(f"torfib: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as e:
        for d in e.diagnostics:
            print(d.format(source), file=sys.stderr)
        if args.cmd == "run":
            _emit(dumps(_error_document(e.diagnostics)), args.out)
        return EXIT_INPUT
    if args.cmd == "fmt":
        sys.stdout.write(model.pretty())
        return EXIT_OK
    if args.jobs < 1 or args.resolution_bound < MIN_BOUND:
        print(f"torfib: --jobs must be positive and --resolution-bound at least {MIN_BOUND}", file=sys.stderr)
        return EXIT_INPUT
    flags = Flags(jobs=args.jobs, resolution_bound=args.resolution_bound, seed=args.seed)
    try:
        doc, code = run(model, flags)
    except (WindowError, ValueError) as e:
        print(f"torfib: {e}", file=sys.stderr)
        return EXIT_INPUT
    _emit(dumps(doc), args.out)
    if args.csv:
        write_csv(doc, args.csv)
    if code == EXIT_RESOURCE:
        print(f"torfib: {doc['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
