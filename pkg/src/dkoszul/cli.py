"""Command-line front end: instance loading, commands, reports and the resolution cache.

Exit codes: 0 pass, 1 property fails, 2 precondition or budget failure, 3 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import pickle
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .algebra import AlgebraError, GradedAlgebra, build_path_algebra
from .errors import BudgetError, ModuleError
from .ext import build_ext_even_algebra, build_ext_even_module, build_ext_odd_module
from .gmod import INF, FreeModule, GradedModule, projective_module, radical_power, shift, simple_module, trivial_module
from .instancefile import InstanceError, InstanceFile, ModuleSpec, parse_instance, serialize_instance
from .instances import BUILTINS
from .koszul import delta, is_d_koszul, is_generalized_d_koszul, is_koszul_module
from .resolve import Resolution, check_exact, check_minimal, minimal_resolution
from .scalar import Field
from .verify import CLAIMS, budget_for, run_claim

EXIT_PASS, EXIT_FAIL, EXIT_PRECONDITION, EXIT_INPUT = 0, 1, 2, 3


class InputProblem(Exception):
    """Bad command-line input (exit code 3)."""


# ---------------------------------------------------------------------------
# instances


def builtin_instance_file(name: str) -> InstanceFile:
    b = BUILTINS.get(name)
    if b is None:
        raise InputProblem(f"unknown built-in instance {name!r}; known: {', '.join(sorted(BUILTINS))}")
    p = b.presentation(Field())
    rels = tuple(tuple((Fraction(c), tuple(path)) for c, path in rel) for rel in p.relations)
    mods = [ModuleSpec("k", "trivial", ())] + [ModuleSpec(f"S{v}", "simple", (v,)) for v in p.quiver.vertices]
    return InstanceFile(str(p.field), tuple(p.quiver.vertices), tuple(p.quiver.arrows), rels, tuple(mods), b.d)


def load_instance(spec: str) -> InstanceFile:
    if spec.startswith("builtin:"):
        return builtin_instance_file(spec[len("builtin:"):])
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError as e:
        raise InputProblem(f"cannot read instance file {spec!r}: {e.strerror}") from None
    return parse_instance(text)


# ---------------------------------------------------------------------------
# cache


def module_fingerprint(M: GradedModule) -> str:
    h = hashlib.sha256()
    h.update(repr((M.lo, M.dims, None if M.ceiling == INF else M.ceiling)).encode())
    for key in sorted(M.action):
        m = M.action[key]
        h.update(repr((key, m.shape)).encode())
        h.update(m.tobytes() if m.dtype != object else repr(m.tolist()).encode())
    return h.hexdigest()


class ResolutionCache:
    """Content-addressed store of resolutions keyed by algebra, module, depth and bounds."""

    def __init__(self, directory: Optional[Path], enabled: bool = True, verify: bool = False):
        self.dir = Path(directory) if directory else None
        self.enabled = enabled and self.dir is not None
        self.verify = verify
        self.hits = 0
        self.misses = 0

    def key(self, A: GradedAlgebra, M: GradedModule, H: int, degbound) -> str:
        h = hashlib.sha256()
        h.update(f"v{__version__}".encode())
        h.update(A.fingerprint().encode())
        h.update(module_fingerprint(M).encode())
        h.update(repr((H, degbound)).encode())
        return h.hexdigest()

    @staticmethod
    def _payload(res: Resolution) -> dict:
        return {"gens": [list(Q.gens) for Q in res.free], "images": res.images,
                "ceilings": res.ceilings, "minimal": res.minimal, "degbound": res.degbound}

    def lookup(self, key: str, M: GradedModule) -> Optional[Resolution]:
        if not self.enabled:
            return None
        path = self.dir / f"{key}.pkl"
        if not path.exists():
            return None
        try:
            with open(path, "rb") as fh:
                data = pickle.load(fh)
        except (OSError, pickle.UnpicklingError, EOFError):
            return None
        A = M.algebra
        return Resolution(M, [FreeModule(A, g) for g in data["gens"]], data["images"], data["ceilings"],
                          minimal=data["minimal"], degbound=data["degbound"])

    def store(self, key: str, res: Resolution) -> None:
        if not self.enabled:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            pickle.dump(self._payload(res), fh, protocol=4)
        os.replace(tmp, self.dir / f"{key}.pkl")

    def resolve(self, M: GradedModule, H: int, degbound=None) -> Resolution:
        if not self.enabled:
            return minimal_resolution(M, H, degbound=degbound)
        key = self.key(M.algebra, M, H, degbound)
        got = self.lookup(key, M)
        if got is not None:
            self.hits += 1
            if self.verify:
                fresh = minimal_resolution(M, H, degbound=degbound)
                if not _same_resolution(got, fresh):
                    raise RuntimeError(f"cache entry {key} differs from recomputation")
            return got
        self.misses += 1
        res = minimal_resolution(M, H, degbound=degbound)
        self.store(key, res)
        return res


def _same_resolution(a: Resolution, b: Resolution) -> bool:
    if [Q.gens for Q in a.free] != [Q.gens for Q in b.free] or a.ceilings != b.ceilings:
        return False
    for x, y in zip(a.images, b.images):
        if sorted(x) != sorted(y):
            return False
        for k in x:
            if x[k].shape != y[k].shape or x[k].tobytes() != y[k].tobytes():
                return False
    return True


def default_cache_dir() -> Path:
    env = os.environ.get("DKOSZUL_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "dkoszul"


# ---------------------------------------------------------------------------
# workspace: an instance materialised over a field with a truncation


class Workspace:
    def __init__(self, inst: InstanceFile, field: Field, D: int, cache: ResolutionCache):
        self.inst = inst
        self.field = field
        self.D = D
        self.cache = cache
        try:
            self.algebra = build_path_algebra(inst.presentation(field), D, name="instance")
        except AlgebraError as e:
            raise InputProblem(str(e)) from None
        self._modules: dict = {}

    def module(self, name: str) -> GradedModule:
        if name in self._modules:
            return self._modules[name]
        spec = self.inst.module(name)
        A = self.algebra
        if spec is None:
            if name in ("k", "trivial"):
                spec = ModuleSpec(name, "trivial", ())
            elif name.startswith("S") and name[1:] in A.vertex_names:
                spec = ModuleSpec(name, "simple", (name[1:],))
            else:
                known = [m.name for m in self.inst.modules]
                raise InputProblem(f"unknown module {name!r}; defined: {', '.join(known) or 'none'}")
        if spec.kind == "trivial":
            M = trivial_module(A)
        elif spec.kind == "simple":
            M = simple_module(A, spec.args[0])
        elif spec.kind == "projective":
            M = projective_module(A, spec.args)
        elif spec.kind == "shift":
            M = shift(self.module(spec.args[0]), spec.args[1])
        elif spec.kind == "radical":
            M = radical_power(self.module(spec.args[0]), spec.args[1])[0]
        elif spec.kind == "syzygy":
            base = self.module(spec.args[0])
            i = spec.args[1]
            M = self.cache.resolve(base, max(i - 1, 0)).syzygy(i) if i else base
        else:  # pragma: no cover - parser rejects other kinds
            raise InputProblem(f"unknown constructor {spec.kind}")
        M.name = name
        self._modules[name] = M
        return M


# ---------------------------------------------------------------------------
# reports


def _scalar(v):
    if isinstance(v, float) and v == INF:
        return "inf"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render_text(report: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, val in report.items():
        if isinstance(val, dict):
            if not val:
                lines.append(f"{pad}{key}: -")
                continue
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1))
        elif isinstance(val, list) and val and all(isinstance(x, dict) for x in val):
            lines.append(f"{pad}{key}:")
            for k, row in enumerate(val):
                lines.append(f"{pad}  - [{k}]")
                lines.append(render_text(row, indent + 2))
        elif isinstance(val, list):
            lines.append(f"{pad}{key}: " + (", ".join(_scalar(x) if not isinstance(x, list)
                                                      else "(" + ", ".join(_scalar(y) for y in x) + ")"
                                                      for x in val) if val else "-"))
        else:
            lines.append(f"{pad}{key}: {_scalar(val)}")
    return "\n".join(line for line in lines if line != "")


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, float) and o == INF:
        return None
    return str(o)


def _clean(o):
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(x) for x in o]
    if isinstance(o, float) and o == INF:
        return None
    if isinstance(o, np.integer):
        return int(o)
    return o


def emit(report: dict, args) -> None:
    report = _clean(report)
    text = render_text(report) + "\n"
    doc = json.dumps(report, indent=2, sort_keys=False, default=_json_default) + "\n"
    sys.stdout.write(doc if args.json else text)
    if args.out:
        out = Path(args.out)
        out.write_text(doc if out.suffix == ".json" else text, encoding="utf-8")


def _gens_table(A: GradedAlgebra, gens: list) -> list:
    counts: dict = {}
    for v, s in gens:
        counts[(s, v)] = counts.get((s, v), 0) + 1
    return [[A.vertex_names[v], s, c] for (s, v), c in sorted(counts.items())]


# ---------------------------------------------------------------------------
# commands


def _setup(args, d_hint: Optional[int] = None, H_hint: Optional[int] = None):
    inst = load_instance(args.instance)
    field = Field.parse(args.field) if args.field else Field.parse(inst.field)
    d = getattr(args, "d", None) or inst.d or d_hint or 2
    budget = budget_for(d, args.effort, args.degbound)
    D = budget.D
    if args.degbound is None and H_hint is not None:
        D = max(D, delta(H_hint, d) + d + 1)
    cache = ResolutionCache(args.cache_dir or default_cache_dir(), enabled=not args.no_cache,
                            verify=args.verify_cache)
    ws = Workspace(inst, field, D, cache)
    return ws, d, budget


def _header(command: str, args, ws: Workspace) -> dict:
    return {"command": command, "instance": args.instance, "field": str(ws.field), "truncation": ws.D}


def cmd_resolve(args) -> int:
    H = args.homdeg if args.homdeg is not None else budget_for(2, args.effort).H
    ws, d, _ = _setup(args, H_hint=H)
    M = ws.module(args.module)
    rep = _header("resolve", args, ws)
    rep.update({"module": args.module, "H": H})
    try:
        res = ws.cache.resolve(M, H, args.degbound)
    except BudgetError as e:
        rep.update({"verdict": "budget", "message": str(e)})
        emit(rep, args)
        return EXIT_PRECONDITION
    A = ws.algebra
    rep["verdict"] = "pass"
    rep["exactness witness"] = check_exact(res)
    rep["minimality witness"] = check_minimal(res)
    rep["positions"] = [{"i": i, "ceiling": res.ceilings[i], "generators (vertex, degree, count)": _gens_table(A, res.generators(i))}
                        for i in range(H + 1)]
    emit(rep, args)
    return EXIT_PASS


def cmd_check(args) -> int:
    H = args.homdeg if args.homdeg is not None else budget_for(args.d, args.effort).H
    ws, d, _ = _setup(args, H_hint=H)
    M = ws.module(args.module)
    rep = _header("check", args, ws)
    rep.update({"module": args.module})
    try:
        res = ws.cache.resolve(M, H, args.degbound)
        if args.linear:
            cert = is_koszul_module(M, H, res)
        elif args.generalized:
            cert = is_generalized_d_koszul(M, d, H, res)
        else:
            cert = is_d_koszul(M, d, H, res)
    except BudgetError as e:
        rep.update({"verdict": "budget", "message": str(e)})
        emit(rep, args)
        return EXIT_PRECONDITION
    rep["summary"] = cert.describe()
    rep.update(cert.to_dict())
    emit(rep, args)
    return EXIT_PASS if cert.holds else EXIT_FAIL


def cmd_ext(args) -> int:
    H_E = args.grades if args.grades is not None else budget_for(2, args.effort).H_E
    ws, d, _ = _setup(args, H_hint=2 * H_E + 1)
    M = ws.module(args.module)
    rep = _header("ext", args, ws)
    rep.update({"module": args.module, "H_E": H_E, "part": "odd" if args.odd else "even"})
    try:
        bundle = build_ext_even_algebra(ws.algebra, H_E)
        res = ws.cache.resolve(M, 2 * H_E + 1, args.degbound)
        X = build_ext_odd_module(bundle, M, res) if args.odd else build_ext_even_module(bundle, M, res)
    except BudgetError as e:
        rep.update({"verdict": "budget", "message": str(e)})
        emit(rep, args)
        return EXIT_PRECONDITION
    A = ws.algebra
    rep["verdict"] = "pass"
    rep["even algebra grade dims"] = list(bundle.algebra.dims)
    rep["even algebra standardly graded"] = not bundle.flagged
    if bundle.flagged:
        rep["flag"] = bundle.flag_message
    rep["grades"] = [{"grade": n, "dims by vertex": [[A.vertex_names[w], X.dim(n, w)] for w in range(A.r)],
                      "internal degrees": sorted({s for _, s in res.generators(2 * n + (1 if args.odd else 0))})}
                     for n in range(H_E + 1)]
    emit(rep, args)
    return EXIT_PASS


def _exit_from_reports(statuses: list) -> int:
    if "fail" in statuses:
        return EXIT_FAIL
    if any(s != "pass" for s in statuses):
        return EXIT_PRECONDITION
    return EXIT_PASS


def cmd_verify(args) -> int:
    ws, d, budget = _setup(args, d_hint=args.d)
    name = args.module or "k"
    M = ws.module(name)
    reports = run_claim(args.claim, ws.algebra, M, d, budget, name)
    doc = {"command": "verify", "instance": args.instance, "field": str(ws.field), "truncation": ws.D,
           "claim": args.claim, "d": d,
           "verdict": {0: "pass", 1: "fail", 2: "precondition-failed"}[_exit_from_reports([r.status for r in reports])],
           "reports": [r.to_dict() for r in reports]}
    emit(doc, args)
    return _exit_from_reports([r.status for r in reports])


def selftest_cases() -> list:
    """(instance, module, property, d, H, expected holds)."""
    cases = [("cubic-loop", "S1", "generalized", 3, 8, True),
             ("cubic-loop", "S1", "d-koszul", 3, 8, False),
             ("cubic-loop", "S3", "d-koszul", 3, 8, True),
             ("cubic-loop", "k", "d-koszul", 3, 8, False),
             ("kxy", "k", "linear", 2, 4, True)]
    for name, b in BUILTINS.items():
        if b.koszul and name != "kxy":
            cases.append((name, "k", "d-koszul", b.d, 8, True))
    return cases


def cmd_selftest(args) -> int:
    rows = []
    ok_all = True
    for name, mod, prop, d, H, expect in selftest_cases():
        inst = builtin_instance_file(name)
        field = Field.parse(args.field) if args.field else Field.parse(inst.field)
        D = delta(H, d) + d + 1
        ws = Workspace(inst, field, D, ResolutionCache(None, enabled=False))
        M = ws.module(mod)
        try:
            if prop == "generalized":
                cert = is_generalized_d_koszul(M, d, H)
            elif prop == "linear":
                cert = is_koszul_module(M, H)
            else:
                cert = is_d_koszul(M, d, H)
            got = cert.holds
            verdict = cert.verdict
        except BudgetError as e:
            got, verdict = None, f"budget: {e}"
        ok = got == expect
        ok_all &= ok
        rows.append({"instance": name, "module": mod, "property": prop, "d": d, "H": H,
                     "expected": "holds" if expect else "fails", "verdict": verdict, "ok": ok})
    emit({"command": "selftest", "verdict": "pass" if ok_all else "fail", "cases": rows}, args)
    return EXIT_PASS if ok_all else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="prime:P or rational (overrides the instance file)")
    common.add_argument("--homdeg", type=int, help="homological bound H")
    common.add_argument("--degbound", type=int, help="internal degree truncation D (overrides the automatic budget)")
    common.add_argument("--effort", type=int, default=2, help="budget knob for H, H_E and D (default 2)")
    common.add_argument("--no-cache", action="store_true", help="always recompute resolutions")
    common.add_argument("--cache-dir", help="cache directory (default $DKOSZUL_CACHE or ~/.cache/dkoszul)")
    common.add_argument("--verify-cache", action="store_true", help="recompute cache hits and compare")
    common.add_argument("--out", help="also write the report here (.json suffix selects JSON)")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")

    p = _Parser(prog="dkoszul", description="Resolutions, Koszul-type classifiers and Ext computations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_instance(sp):
        sp.add_argument("--instance", required=True, help="instance file, or builtin:NAME")

    r = sub.add_parser("resolve", parents=[common], help="minimal graded projective resolution")
    r.add_argument("module")
    with_instance(r)
    r.set_defaults(func=cmd_resolve)

    c = sub.add_parser("check", parents=[common], help="d-Koszul / generalized d-Koszul classification")
    c.add_argument("module")
    with_instance(c)
    c.add_argument("--d", type=int, required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--generalized", action="store_true")
    g.add_argument("--linear", action="store_true", help="linear resolution test (generators of Q^i in degree i)")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("ext", parents=[common], help="even or odd Ext module over the even Ext algebra")
    e.add_argument("module")
    with_instance(e)
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--even", action="store_true")
    g.add_argument("--odd", action="store_true")
    e.add_argument("--grades", type=int, help="top grade H_E")
    e.set_defaults(func=cmd_ext)

    v = sub.add_parser("verify", parents=[common], help="check a structural claim on an instance")
    v.add_argument("claim", choices=list(CLAIMS) + ["all"])
    with_instance(v)
    v.add_argument("--module", help="module name (default: the trivial module k)")
    v.add_argument("--d", type=int)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", parents=[common], help="run the built-in instance suite")
    s.set_defaults(func=cmd_selftest)

    f = sub.add_parser("format", parents=[common], help="parse an instance file and print it canonically")
    with_instance(f)
    f.set_defaults(func=cmd_format)
    return p


def cmd_format(args) -> int:
    sys.stdout.write(serialize_instance(load_instance(args.instance)))
    return EXIT_PASS


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.effort < 1:
        parser.error("--effort must be at least 1")
    try:
        return args.func(args)
    except InstanceError as e:
        for err in e.errors:
            sys.stderr.write(f"{args.instance}: {err}\n")
        return EXIT_INPUT
    except (InputProblem, ModuleError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except BudgetError as e:
        sys.stderr.write(f"budget exhausted: {e}\n")
        return EXIT_PRECONDITION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
