"""Command-line front end.

Exit codes: 0 success, 1 a verification FAIL, 2 usage/parse/precondition error,
3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import caps as caps_mod
from . import library
from .classify import DEFAULT_CATEGORIES, classify, parse_category
from .groebner import CapExceeded
from .homological import (
    INF,
    bidual_map,
    depth,
    dual,
    ext,
    grade,
    resolve,
    syzygy,
    transpose,
)
from .matrix import HomogeneityError, format_vector
from .modcat import colon_and_gamma
from .report import make_report, to_json, to_text
from .rings import PropertyMismatch
from .textio import ParseError, format_module, parse_input
from .verify import (
    FAIL,
    THEOREMS,
    Inapplicable,
    run_corpus,
    verify_ab26,
    verify_cateq,
    verify_cor_refl,
    verify_d1,
    verify_dm_identity,
    verify_ext_shift,
    verify_fourterm,
    verify_perf_duality,
    verify_prop_cm,
    verify_prop_key,
    verify_prop_key_split,
    verify_thm1,
    verify_thm2,
    verify_trtr,
)


class UsageError(Exception):
    pass


def _num(x):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return x


def _common(suppress: bool) -> argparse.ArgumentParser:
    """Global options; on subcommands they default to SUPPRESS so either position works."""
    c = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    c.add_argument("--input", action="append", default=d([]), metavar="FILE",
                   help="ring/module definitions (repeatable); the bundled library is always loaded")
    c.add_argument("--format", choices=("text", "json"), default=d("text"))
    c.add_argument("--seed", type=int, default=d(None), help="random seed (default $STABLEMOD_SEED or 42)")
    c.add_argument("--max-hom", type=int, default=d(None))
    c.add_argument("--max-rank", type=int, default=d(None))
    c.add_argument("--max-degree", type=int, default=d(None))
    c.add_argument("--figures", metavar="DIR", default=d(None), help="write PNG figures into DIR")
    c.add_argument("--timing", action="store_true", default=d(False), help="record wall time in reports")
    return c


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stablemod", description="Stable module theory over graded-local rings.",
                                 parents=[_common(False)])
    sub = ap.add_subparsers(dest="command", required=True)
    common = _common(True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    p = sub.add_parser("resolve", help="minimal free resolution")
    p.add_argument("module")
    p.add_argument("--to", type=int, default=3)
    p = sub.add_parser("syzygy", help="Omega^n M")
    p.add_argument("module")
    p.add_argument("-n", type=int, default=1)
    for name, helptext in (("transpose", "Tr M"), ("dual", "M* = Hom(M,R)"), ("dmod", "D(M), image of M -> M**"),
                           ("grade", "grade of M"), ("depth", "depth of M"), ("gamma", "m-torsion submodule")):
        sub.add_parser(name, help=helptext).add_argument("module")
    p = sub.add_parser("ext", help="Ext^i(M,R)")
    p.add_argument("module")
    p.add_argument("-i", type=int, default=1, dest="index")
    p = sub.add_parser("classify", help="category membership")
    p.add_argument("module")
    p.add_argument("--cats", nargs="+", default=list(DEFAULT_CATEGORIES))
    p = sub.add_parser("verify", help="check one theorem on one module")
    p.add_argument("theorem", choices=THEOREMS)
    p.add_argument("--ring", default=None)
    p.add_argument("--module", required=True)
    p.add_argument("--other", default=None, help="second summand N for PROP_KEY_FWD")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("-m", default=None, help="integer or 'inf' (THM2_GSPH)")
    p.add_argument("--X", default="PROJ", help="PROJ, GP or G(m,m+1) for PROP_KEY_*")
    p = sub.add_parser("corpus", help="seeded corpus sweep")
    p.add_argument("action", choices=("run",))
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--out", default=None, help="write the JSON report here")
    return ap


class Session:
    def __init__(self, args):
        self.args = args
        rings, modules = library.load()
        self.rings = dict(rings)
        self.modules = dict(modules)
        for path in args.input:
            text = Path(path).read_text(encoding="utf-8")
            r, m = parse_input(text, self.rings)
            self.rings.update(r)
            self.modules.update(m)
        env_seed = os.environ.get("STABLEMOD_SEED")
        self.seed = args.seed if args.seed is not None else int(env_seed) if env_seed else 42
        c = caps_mod.Caps.from_env()
        for attr, val in (("max_hom", args.max_hom), ("max_rank", args.max_rank), ("max_degree", args.max_degree)):
            if val is not None:
                if val <= 0:
                    raise UsageError("caps must be positive")
                c = replace(c, **{attr: val})
        self.caps = c

    def module(self, name: str, ring: str | None = None):
        if name in self.modules:
            pm = self.modules[name]
        elif ring and f"{name}_{ring}" in self.modules:
            pm = self.modules[f"{name}_{ring}"]
        else:
            raise UsageError(f"unknown module {name!r}")
        if ring and pm.ring != ring:
            raise UsageError(f"module {pm.name} lives over {pm.ring}, not {ring}")
        return pm

    def report(self, command, verdict, pm=None, witnesses=(), transcript=(), timing=None):
        return make_report(command, verdict, ring=pm.ring if pm else None, module=pm.name if pm else None,
                           witnesses=witnesses, transcript=transcript, caps=self.caps.as_dict(), seed=self.seed,
                           timing_ms=timing if self.args.timing else None)


def _module_witness(M, name="out") -> dict:
    return {"presentation": format_module(name, M), "hilbert_series": repr(M.hilbert_series()),
            "generators": M.rank, "relations": len(M.rels)}


def _functor(session, pm, label, fn, command=None, **extra):
    out = fn(pm.module)
    return session.report(command or label, "OK", pm, [extra | _module_witness(out, f"{label}_{pm.name}")])


def dispatch(session: Session) -> tuple[dict, int]:
    a = session.args
    cmd = a.command
    figures = Path(a.figures) if a.figures else None
    if cmd == "corpus":
        rep = run_corpus(session.seed, a.count)
        totals = rep["totals"]
        verdict = "FAIL" if totals[FAIL] else "PASS"
        out = session.report("corpus run", verdict, witnesses=[{"totals": totals, "count": a.count}],
                             transcript=rep["cases"])
        if figures:
            from .plotting import corpus_figure

            corpus_figure(rep, figures / f"corpus_seed{session.seed}.png")
        return out, 1 if totals[FAIL] else 0

    if cmd == "verify":
        return _verify(session, figures)

    pm = session.module(a.module)
    M = pm.module
    if cmd == "resolve":
        res = resolve(M, a.to)
        diffs = []
        names = [f"e{j}" for j in range(max((len(d) for d in res.degrees), default=0))]
        for i in range(1, len(res.diffs)):
            diffs.append({"d": i, "columns": [format_vector(v, M.ring.poly, names) for v in res.diffs[i]]})
        w = {"ranks": res.ranks(), "length": _num(res.length), "betti": res.betti().format()}
        if figures:
            from .plotting import betti_figure

            betti_figure(res.betti(), f"Betti table of {pm.name}", figures / f"betti_{pm.name}.png")
        return session.report("resolve", "OK", pm, [w], diffs), 0
    if cmd == "syzygy":
        return _functor(session, pm, f"syzygy{a.n}", lambda X: syzygy(X, a.n)), 0
    if cmd == "transpose":
        return _functor(session, pm, "transpose", transpose), 0
    if cmd == "dual":
        return _functor(session, pm, "dual", dual), 0
    if cmd == "dmod":
        bd = bidual_map(M)
        D = bd.D().module
        w = _module_witness(D, f"D_{pm.name}")
        w["ker_sigma"] = repr(bd.kernel())
        w["coker_sigma"] = repr(bd.cokernel())
        return session.report("dmod", "OK", pm, [w]), 0
    if cmd == "ext":
        return _functor(session, pm, f"ext{a.index}", lambda X: ext(X, a.index), command="ext", i=a.index), 0
    if cmd == "grade":
        return session.report("grade", str(_num(grade(M))), pm, [{"grade": _num(grade(M))}]), 0
    if cmd == "depth":
        return session.report("depth", str(_num(depth(M))), pm, [{"depth": _num(depth(M))}]), 0
    if cmd == "gamma":
        g = colon_and_gamma(M)
        w = {"gamma": format_module(f"Gamma_{pm.name}", g.gamma),
             "quotient": format_module(f"Q_{pm.name}", g.quotient), "index": g.index}
        return session.report("gamma", "OK", pm, [w]), 0
    if cmd == "classify":
        try:
            cats = [parse_category(c) for c in a.cats]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rep = classify(M, cats, pm.name)
        w = [{"category": k, **v.as_dict()} for k, v in rep.verdicts.items()]
        return session.report("classify", "OK", pm, w), 0
    raise UsageError(f"unknown command {cmd}")


def _parse_X(text: str):
    X = parse_category(text)
    if X.tag not in ("PROJ", "GP", "G_MN"):
        raise UsageError("X must be PROJ, GP or G(m,m+1)")
    return X


def _verify(session: Session, figures) -> tuple[dict, int]:
    a = session.args
    pm = session.module(a.module, a.ring)
    M = pm.module
    seed = session.seed
    th = a.theorem
    try:
        if th == "PROP_KEY_BWD":
            chk = verify_prop_key(M, a.n, _parse_X(a.X), seed)
        elif th == "PROP_KEY_FWD":
            if not a.other:
                raise UsageError("PROP_KEY_FWD needs --other N")
            chk = verify_prop_key_split(M, session.module(a.other, a.ring).module, a.n, _parse_X(a.X), seed)
        elif th == "LEMMA_CATEQ":
            chk = verify_cateq(M, a.n, _parse_X(a.X), seed)
        elif th == "THM1_SPH":
            chk = verify_thm1(M, a.n, seed)
        elif th == "THM2_GSPH":
            m = None if a.m in (None, "inf") else int(a.m)
            chk = verify_thm2(M, a.n, m, seed)
        elif th == "PERF_DUALITY":
            chk = verify_perf_duality(M, a.n, seed)
        elif th == "AB26_SEQ":
            chk = verify_ab26(M, seed)
        elif th == "FOURTERM_SEQ":
            chk = verify_fourterm(M, seed)
        elif th == "DM_IDENTITY":
            chk = verify_dm_identity(M, seed)
        elif th == "TRTR_IDENTITY":
            chk = verify_trtr(M, seed)
        elif th == "EXT_SHIFT":
            chk = verify_ext_shift(M, 2, seed)
        elif th == "PROP_CM":
            chk = verify_prop_cm(M)
        elif th == "THM_D1_REG":
            chk = verify_d1(M, "REG", seed)
        elif th == "THM_D1_GOR":
            chk = verify_d1(M, "GOR", seed)
        else:
            chk = verify_cor_refl(M, seed)
    except Inapplicable as exc:
        raise UsageError(f"precondition not met: {exc}") from None
    w = [{"theorem": chk.theorem, "inputs": chk.inputs, "counterexample": chk.counterexample}]
    rep = session.report(f"verify {th}", chk.verdict, pm, w, chk.transcript)
    return rep, 1 if chk.verdict == FAIL else 0


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    t0 = time.perf_counter()
    try:
        session = Session(args)
        with caps_mod.using(session.caps):
            rep, code = dispatch(session)
    except (ParseError, HomogeneityError, PropertyMismatch) as exc:
        kind = {ParseError: "PARSE_ERROR", HomogeneityError: "HOMOGENEITY_ERROR"}.get(type(exc), "PROPERTY_MISMATCH")
        print(f"{kind}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"CAP_EXCEEDED: {exc}", file=sys.stderr)
        return 3
    if args.timing:
        rep["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    text = to_json(rep) if args.format == "json" else to_text(rep)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(to_json(rep), encoding="utf-8")
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
