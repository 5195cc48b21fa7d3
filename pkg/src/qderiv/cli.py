"""Command-line front end: ``qderiv <group> <command> [options]``.

Exit codes: 0 success, 1 check failed (invalid table, fixture mismatch),
2 usage or input error, 3 search budget exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import pickle
import sys
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Optional

from . import autgroup, derivations, quandle as qmod
from .coloring import enumerate_homs
from .derivations import (constant_action, derivation_data,
                          derivation_multiset, derivation_polynomial, derivation_quandle,
                          enumerate_derivations, total_derivation_quandle)
from .diagram import DiagramError, builtin, from_json, parse_gauss, parse_pd
from .quandle import FiniteQuandle, QuandleError
from .search import BudgetExceeded
from .virtual import (NotAnAutomorphism, enumerate_virtual_homs_diagram,
                      validate_virtual, virtual_derivation_polynomial)

EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    parallelism: int = os.cpu_count() or 1
    search_node_budget: int = 10**8
    output: str = "text"
    cache_dir: Optional[str] = None

    ENV = {"parallelism": "QDERIV_PARALLELISM", "search_node_budget": "QDERIV_NODE_BUDGET",
           "output": "QDERIV_OUTPUT", "cache_dir": "QDERIV_CACHE_DIR"}

    @classmethod
    def from_env(cls, env=None) -> "RunConfig":
        env = os.environ if env is None else env
        cfg = cls()
        for f in fields(cls):
            raw = env.get(cls.ENV[f.name])
            if raw is not None:
                setattr(cfg, f.name, raw if f.name in ("output", "cache_dir") else int(raw))
        cfg.check()
        return cfg

    def check(self):
        if self.parallelism < 1 or self.search_node_budget < 1:
            raise UsageError("parallelism and search_node_budget must be positive")
        if self.output not in ("text", "json"):
            raise UsageError(f"unknown output format {self.output!r}")


# -- input resolution ------------------------------------------------------

def resolve_quandle(spec: str) -> FiniteQuandle:
    """``d<n>``, ``t<n>``, ``x4``/``abelian4``, ``swap3``,
    ``takasaki:<m1>,<m2>,...``, ``conj-aut:<alias>`` or a file path."""
    s = spec.strip()
    low = s.lower()
    if low.startswith("conj-aut:"):
        return conj_aut(resolve_quandle(s[9:])).quandle
    if low in ("x4", "abelian4"):
        return qmod.abelian4()
    if low == "swap3":
        return qmod.swap3()
    if low.startswith("takasaki:"):
        return qmod.takasaki([int(v) for v in low[9:].split(",")])
    if len(low) > 1 and low[0] in "dt" and low[1:].isdigit():
        n = int(low[1:])
        if n < 1:
            raise UsageError("quandle order must be positive")
        return qmod.dihedral(n) if low[0] == "d" else qmod.trivial(n)
    if Path(s).exists():
        return qmod.load_quandle(s)
    raise UsageError(f"unknown quandle {spec!r}")


_cache_dir: Optional[Path] = None


def conj_aut(X: FiniteQuandle):
    """Conj(Aut(X)), memoized on disk when a cache directory is configured."""
    if _cache_dir is None:
        return derivations.conj_aut_cached(X)
    key = hashlib.sha1(repr(X.table).encode()).hexdigest()
    path = _cache_dir / f"conjaut-{key}.pkl"
    if path.exists():
        C = pickle.loads(path.read_bytes())
    else:
        C = derivations.conj_aut_cached(X)
        _cache_dir.mkdir(parents=True, exist_ok=True)
        path.write_bytes(pickle.dumps(C))
    derivations._conj_cache[X.table] = C
    return C


def resolve_diagram(args):
    given = [k for k in ("knot", "pd", "gauss", "vpd") if getattr(args, k, None)]
    if getattr(args, "unknot", False) and not given:
        return builtin("unknot")
    if len(given) != 1:
        raise UsageError("give exactly one of --knot, --pd, --gauss, --vpd")
    kind = given[0]
    val = getattr(args, kind)
    if kind == "knot":
        D = builtin(val)
    else:
        p = Path(val)
        text = p.read_text() if p.is_file() else val
        if kind == "gauss":
            D = parse_gauss(text)
        elif p.suffix.lower() == ".json":
            D = from_json(json.loads(text))
        else:
            D = parse_pd(text, assume_sign=args.assume_sign, unknot=args.unknot,
                         allow_virtual=(kind == "vpd"))
    if len(D.components()) > 1 and not args.allow_links:
        raise UsageError("diagram has several components; pass --allow-links")
    return D


def parse_action(spec: str, D, X: FiniteQuandle, budget):
    """``trivial``, ``const:cycles=(..)`` or ``index:k`` (1-based enumeration order)."""
    if spec == "trivial":
        return constant_action(D, X, autgroup.identity(X.n))
    if spec.startswith("const:cycles="):
        perm = autgroup.parse_cycles(spec[len("const:cycles="):], X.n)
        return constant_action(D, X, perm)
    if spec.startswith("index:"):
        acts = derivations.enumerate_actions(D, X, budget=budget)
        k = int(spec[6:])
        if not 1 <= k <= len(acts):
            raise UsageError(f"action index must be in 1..{len(acts)}")
        return acts[k - 1]
    raise UsageError(f"unknown action spec {spec!r}")


# -- output ----------------------------------------------------------------

class Out:
    def __init__(self, cfg: RunConfig, stream):
        self.cfg, self.stream = cfg, stream

    def emit(self, text: str, payload):
        if self.cfg.output == "json":
            self.stream.write(json.dumps(payload, sort_keys=True) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def matrix_text(q: FiniteQuandle) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in q.to_one_based())


# -- commands --------------------------------------------------------------

def cmd_quandle_validate(args, cfg, out):
    try:
        q = resolve_quandle(args.quandle)
    except QuandleError as e:
        out.emit(f"invalid: {e}", {"valid": False, "axiom": getattr(e, "axiom", None),
                                   "witness": getattr(e, "witness", None), "message": str(e)})
        return EXIT_FAIL
    out.emit(f"valid quandle of order {q.n}", {"valid": True, "n": q.n})
    return 0


def cmd_quandle_props(args, cfg, out):
    rep = qmod.check_properties(resolve_quandle(args.quandle)).as_dict()
    out.emit(" ".join(f"{k}={str(v).lower()}" for k, v in rep.items()), rep)
    return 0


def cmd_quandle_aut(args, cfg, out):
    q = resolve_quandle(args.quandle)
    G = autgroup.automorphism_group(q)
    elems = [autgroup.to_cycle_notation(g) for g in G.elements]
    text = f"|Aut| = {len(G)}"
    if args.list:
        text += "\n" + "\n".join(elems)
    out.emit(text, {"order": len(G), "elements": elems if args.list else None})
    return 0


def cmd_quandle_iso(args, cfg, out):
    a, b = resolve_quandle(args.quandle), resolve_quandle(args.other)
    m = qmod.are_isomorphic(a, b)
    if m is None:
        out.emit("not isomorphic", {"isomorphic": False})
    else:
        out.emit("isomorphic: " + " ".join(str(v + 1) for v in m),
                 {"isomorphic": True, "map": [v + 1 for v in m]})
    return 0


def cmd_color(args, cfg, out):
    D = resolve_diagram(args)
    X = resolve_quandle(args.quandle)
    if args.beta is not None or D.virtual_count:
        beta = autgroup.parse_cycles(args.beta or "()", X.n)
        cols = enumerate_virtual_homs_diagram(D, validate_virtual(X, beta), cfg.search_node_budget,
                                              cfg.parallelism)
    else:
        cols = enumerate_homs(D, X, budget=cfg.search_node_budget, workers=cfg.parallelism)
    if args.list:
        one = [[v + 1 for v in c] for c in cols]
        out.emit("\n".join(" ".join(map(str, c)) for c in one), {"count": len(cols), "colorings": one})
    else:
        out.emit(str(len(cols)), {"count": len(cols)})
    return 0


def cmd_derive_poly(args, cfg, out):
    D = resolve_diagram(args)
    X = resolve_quandle(args.quandle)
    conj_aut(X)
    p = derivation_polynomial(D, X, budget=cfg.search_node_budget, workers=cfg.parallelism)
    out.emit(str(p), p.to_json())
    return 0


def cmd_derive_quandle(args, cfg, out):
    D = resolve_diagram(args)
    X = resolve_quandle(args.quandle)
    conj_aut(X)
    act = parse_action(args.action, D, X, cfg.search_node_budget)
    ders = enumerate_derivations(D, X, act, cfg.search_node_budget)
    if not ders:
        out.emit("empty derivation set", {"size": 0, "derivations": [], "table": None})
        return 0
    q = derivation_quandle(ders, X)
    lines = [f"|Der| = {len(ders)}"]
    lines += [f"f{i + 1} = ({', '.join(str(v + 1) for v in f)})" for i, f in enumerate(ders)]
    lines.append(matrix_text(q))
    out.emit("\n".join(lines), {"size": len(ders), "derivations": [[v + 1 for v in f] for f in ders],
                                "table": [list(r) for r in q.to_one_based()]})
    return 0


def cmd_derive_total(args, cfg, out):
    D = resolve_diagram(args)
    X = resolve_quandle(args.quandle)
    conj_aut(X)
    q, labels = total_derivation_quandle(D, X, cfg.search_node_budget, cfg.parallelism)
    if args.matrix_out:
        qmod.save_quandle(q, args.matrix_out)
    blocks: dict = {}
    for lab in labels:
        key = "hom" if lab == "hom" else str(lab + 1)
        blocks[key] = blocks.get(key, 0) + 1
    sizes: dict = {}
    for key, v in blocks.items():
        if key != "hom":
            sizes[v] = sizes.get(v, 0) + 1
    text = (f"size {q.n}\nhom block {blocks.get('hom', 0)}\nderivation blocks {len(blocks) - 1}"
            + "".join(f"\n  {k} of size {s}" for s, k in sorted(sizes.items())))
    if args.matrix_out:
        text += f"\nmatrix written to {args.matrix_out}"
    out.emit(text, {"size": q.n, "blocks": blocks, "matrix": args.matrix_out})
    return 0


def cmd_derive_multiset(args, cfg, out):
    D = resolve_diagram(args)
    X = resolve_quandle(args.quandle)
    conj_aut(X)
    ms = derivation_multiset(D, X, cfg.search_node_budget, cfg.parallelism)
    lines, payload = [], []
    for c, k in ms:
        if c.quandle is None:
            lines.append(f"{k} x empty")
            payload.append({"multiplicity": k, "order": 0, "table": None})
            continue
        lines.append(f"{k} x order {c.order}")
        lines.append(matrix_text(c.quandle))
        payload.append({"multiplicity": k, "order": c.order,
                        "table": [list(r) for r in c.quandle.to_one_based()]})
    out.emit("\n".join(lines), {"multiset": payload})
    return 0


def cmd_virtual_derive_poly(args, cfg, out):
    D = resolve_diagram(args)
    X = resolve_quandle(args.quandle)
    Xb = validate_virtual(X, autgroup.parse_cycles(args.beta or "()", X.n))
    conj_aut(X)
    p = virtual_derivation_polynomial(D, Xb, budget=cfg.search_node_budget)
    out.emit(str(p), p.to_json())
    return 0


def load_fixture_rows(path: Optional[str] = None) -> list[dict]:
    if path:
        data = json.loads(Path(path).read_text())
    else:
        data = json.loads(resources.files("qderiv").joinpath("data/fixtures.json").read_text())
    return data["rows"]


def evaluate_fixture(row: dict, budget=None, workers: int = 1):
    D = builtin(row["knot"])
    X = resolve_quandle(row["quandle"])
    kind = row["kind"]
    if kind == "homs":
        return len(enumerate_homs(D, X, budget=budget))
    if kind == "actions":
        return len(derivations.enumerate_actions(D, X, budget=budget))
    if kind == "poly":
        return str(derivation_polynomial(D, X, budget, workers))
    if kind == "total_size":
        return derivation_data(D, X, budget, workers).total_size()
    raise UsageError(f"unknown fixture kind {kind!r}")


def cmd_fixtures_run(args, cfg, out):
    rows = load_fixture_rows(args.file)
    results, lines = [], []
    failed = 0
    for row in rows:
        got = evaluate_fixture(row, cfg.search_node_budget, cfg.parallelism)
        ok = got == row["expected"]
        failed += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {row['kind']} {row['knot']} {row['quandle']}: "
                     f"{got}" + ("" if ok else f" (expected {row['expected']})"))
        results.append(dict(row, got=got, passed=ok))
    lines.append(f"{len(rows) - failed}/{len(rows)} passed")
    out.emit("\n".join(lines), {"rows": results, "failed": failed})
    return EXIT_FAIL if failed else 0


# -- parser ----------------------------------------------------------------

def _source_opts(p):
    p.add_argument("--knot", help="builtin: unknot, 3_1, 4_1, 5_1, 5_2, 2_1 (virtual)")
    p.add_argument("--pd", help="PD code text or file")
    p.add_argument("--gauss", help="signed Gauss code text or file")
    p.add_argument("--vpd", help="PD code with V(...) virtual crossings")
    p.add_argument("--unknot", action="store_true", help="read an empty code as the unknot")
    p.add_argument("--assume-sign", type=int, choices=[1, -1],
                   help="sign for crossings whose orientation the code leaves open")
    p.add_argument("--allow-links", action="store_true", help="accept several components")
    p.add_argument("--quandle", required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qderiv", description="Quandle derivation invariants of knots.")
    ap.add_argument("--output", choices=["text", "json"])
    ap.add_argument("--workers", type=int, help="parallel worker processes")
    ap.add_argument("--budget", type=int, help="search node budget per task")
    ap.add_argument("--cache-dir", help="directory for memoized Conj(Aut(X)) tables")
    top = ap.add_subparsers(dest="group", required=True)

    g = top.add_parser("quandle").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("validate")
    p.add_argument("--quandle", required=True)
    p.set_defaults(fn=cmd_quandle_validate)
    p = g.add_parser("props")
    p.add_argument("--quandle", required=True)
    p.set_defaults(fn=cmd_quandle_props)
    p = g.add_parser("aut")
    p.add_argument("--quandle", required=True)
    p.add_argument("--list", action="store_true")
    p.set_defaults(fn=cmd_quandle_aut)
    p = g.add_parser("iso")
    p.add_argument("--quandle", required=True)
    p.add_argument("--other", required=True)
    p.set_defaults(fn=cmd_quandle_iso)

    p = top.add_parser("color")
    _source_opts(p)
    p.add_argument("--beta", help="virtual automorphism of the target, cycle notation")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--list", action="store_true")
    p.set_defaults(fn=cmd_color)

    g = top.add_parser("derive").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("poly")
    _source_opts(p)
    p.set_defaults(fn=cmd_derive_poly)
    p = g.add_parser("quandle")
    _source_opts(p)
    p.add_argument("--action", required=True, help="trivial | const:cycles=(..) | index:k")
    p.set_defaults(fn=cmd_derive_quandle)
    p = g.add_parser("total")
    _source_opts(p)
    p.add_argument("--matrix-out", help="write the table (.qm or .json)")
    p.set_defaults(fn=cmd_derive_total)
    p = g.add_parser("multiset")
    _source_opts(p)
    p.set_defaults(fn=cmd_derive_multiset)

    v = top.add_parser("virtual").add_subparsers(dest="cmd", required=True)
    vd = v.add_parser("derive").add_subparsers(dest="sub", required=True)
    p = vd.add_parser("poly")
    _source_opts(p)
    p.add_argument("--beta", help="automorphism of the target, cycle notation")
    p.set_defaults(fn=cmd_virtual_derive_poly)

    f = top.add_parser("fixtures").add_subparsers(dest="cmd", required=True)
    p = f.add_parser("run")
    p.add_argument("--file", help="fixture table (defaults to the bundled one)")
    p.set_defaults(fn=cmd_fixtures_run)
    return ap


def run(argv=None, stdout=None, stderr=None, env=None) -> int:
    global _cache_dir
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    try:
        cfg = RunConfig.from_env(env)
        if args.output:
            cfg.output = args.output
        if args.workers is not None:
            cfg.parallelism = args.workers
        if args.budget is not None:
            cfg.search_node_budget = args.budget
        if args.cache_dir:
            cfg.cache_dir = args.cache_dir
        cfg.check()
        _cache_dir = Path(cfg.cache_dir) if cfg.cache_dir else None
        return args.fn(args, cfg, Out(cfg, stdout))
    except BudgetExceeded as e:
        stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    except (UsageError, QuandleError, DiagramError, NotAnAutomorphism, derivations.NotAnAction,
            derivations.NotAbelianTarget, ValueError, OSError) as e:
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
