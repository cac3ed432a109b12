"""qtw: batch front end for the exact checks."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .cartan import build, check
from .exact import ExactError, Scalar, parse_scalar
from .term import TermError
from .rep import Rep, RepError, drinfeld_polynomials, evaluation_module, lweight_decomposition, relation_check

CACHE_VERSION = "v1"
SUBCOMMANDS = ("cartan", "term", "braid", "rep", "fusion", "qchar", "rmat", "verify-all")


@dataclass(frozen=True)
class RunConfig:
    type: str = "A1~1"
    window: int = 6
    order: int = 6
    bind: dict[str, str] = field(default_factory=dict)
    cache: str = ".qtw-cache"
    verbose: int = 0

    def __post_init__(self):
        if self.window < 2:
            raise ValueError("window must be at least 2")
        for k, v in self.bind.items():
            parse_scalar(v)  # exact rationals or symbols only


def read_config_file(path: str) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"bad config line: {line!r}")
        out[key.strip()] = value.strip()
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    vals: dict = {}
    if args.config:
        raw = read_config_file(args.config)
        binds = {}
        for key, value in raw.items():
            if key.startswith("bind."):
                binds[key[5:]] = value
            elif key == "bind":
                binds.update(_parse_binds(value.split(",")))
            elif key in ("window", "order", "verbose"):
                vals[key] = int(value)
            elif key in ("type", "cache"):
                vals[key] = value
            else:
                raise ValueError(f"unknown config key {key!r}")
        vals["bind"] = binds
    for key in ("type", "window", "order", "cache", "verbose"):
        v = getattr(args, key, None)
        if v is not None:
            vals[key] = v
    if args.bind:
        vals["bind"] = {**vals.get("bind", {}), **_parse_binds(args.bind)}
    return RunConfig(**vals)


def _parse_binds(items) -> dict[str, str]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"binding must look like name=value, got {item!r}")
        out[name.strip()] = value.strip()
    return out


# ---------------------------------------------------------------------------
# module specs: V(n)_param, joined by '*' (tensor through the chosen mode)

_FACTOR = re.compile(r"^V\((\d+)\)_(.+)$")


def parse_module(spec: str, cfg: RunConfig, mode: str = "Delta_u1") -> Rep:
    from .qchar import tensor
    reps = []
    for part in spec.split("*"):
        m = _FACTOR.match(part.strip())
        if not m:
            raise ValueError(f"bad module spec {part!r}; expected V(n)_param")
        param = parse_scalar(m.group(2))
        if cfg.bind:
            param = param.subs({k: parse_scalar(v) for k, v in cfg.bind.items()})
        reps.append(evaluation_module(int(m.group(1)), param))
    rep = reps[0]
    for r in reps[1:]:
        rep = tensor(rep, r, mode)
    return rep


def _rows_summary(rows: list[dict]) -> dict:
    bad = [r for r in rows if not r.get("ok")]
    return {"rows": len(rows), "failed": len(bad), "failures": bad[:10]}


# ---------------------------------------------------------------------------
# subcommands

def cmd_cartan(args, cfg: RunConfig) -> tuple[dict, bool]:
    dt = build(args.label or cfg.type)
    res = check(dt)
    return {"datum": dt.to_json(), "checks": res}, all(res.values())


def cmd_term(args, cfg: RunConfig) -> tuple[dict, bool]:
    from .term import apply, builtin, lusztig_braid, parse_term, psi_morphism
    dt = build(cfg.type)
    expr = args.expr.strip()
    # a bare word such as xp(1,0).xm(0,0) gets the unit coefficient
    t = parse_term(expr if expr.startswith("(") or expr == "0" else f"(1)*{expr}", dt)
    out = {"term": str(t), "degree": str(t.degree()) if t.degree() is not None else "inhomogeneous"}
    if args.morphism:
        name = args.morphism
        if name == "psi":
            mor = psi_morphism(dt)
        elif re.fullmatch(r"T\d+(\^-1)?", name):
            mor = lusztig_braid(int(name[1:].split("^")[0]), -1 if name.endswith("^-1") else 1, dt)
        else:
            mor = builtin(name, dt)
        img = apply(mor, t)
        out["morphism"] = name
        out["image"] = str(img)
    return out, True


def cmd_braid(args, cfg: RunConfig) -> tuple[dict, bool]:
    from .dab import affinized_relation_report, involution_report, relation_report
    from .term import braid_inverse_table
    dt = build(cfg.type)
    inv = [dict(r, node=i) for i in dt.nodes for r in braid_inverse_table(dt, i)]
    reports = {"involutions": involution_report(dt), "relations": relation_report(dt),
               "affinized": affinized_relation_report(dt)}
    ok = all(r["ok"] for r in reports.values()) and all(r["status"] != "mismatch" for r in inv)
    return {"inverse_table": inv, **{k: {"ok": v["ok"], "rows": v["rows"]} for k, v in reports.items()}}, ok


def _module_matrices(rep: Rep) -> dict:
    L = rep.loop
    return {"weights": [list(w) for w in rep.weights], "k": L.k.to_strings(),
            "x+_0": L.xp(0).to_strings(), "x-_0": L.xm(0).to_strings(), "phi(z)": L.Phi.to_strings(),
            "x+ families": [{"base": str(lam), "matrix": A.to_strings()} for lam, A in L.families()[0]],
            "x- families": [{"base": str(mu), "matrix": B.to_strings()} for mu, B in L.families()[1]]}


def _lweights(rep: Rep) -> list[dict]:
    out = []
    for lw in lweight_decomposition(rep):
        d = lw.to_json()
        try:
            d.update(drinfeld_polynomials(lw).to_json())
        except RepError as exc:
            d["note"] = str(exc)
        out.append(d)
    return out


def cmd_rep(args, cfg: RunConfig) -> tuple[dict, bool]:
    rep = parse_module(args.spec, cfg, args.mode)
    out = {"module": rep.label, "dim": rep.dim}
    if args.action == "build":
        return {**out, **_module_matrices(rep)}, True
    if args.action == "lweights":
        return {**out, "lweights": _lweights(rep)}, True
    rows = relation_check(rep, "all" if not rep.factors else "loop", cfg.window)
    return {**out, "relations": _rows_summary(rows)}, all(r["ok"] for r in rows)


def parse_grid(text: str) -> list[Scalar]:
    """qpow:LO..HI or a comma-separated list of exact ratios."""
    m = re.fullmatch(r"qpow:(-?\d+)\.\.(-?\d+)", text.strip())
    if m:
        from .fusion import qpow_grid
        return qpow_grid(int(m.group(1)), int(m.group(2)))
    return [parse_scalar(t) for t in text.split(",")]


def cmd_fusion(args, cfg: RunConfig) -> tuple[dict, bool]:
    from .fusion import (
        drinfeld_tensor, fusion_relation_check, generic_irreducibility_scan, hw_product_check, zero_node_action,
    )
    r1, r2 = parse_module(args.left, cfg), parse_module(args.right, cfg)
    u = parse_scalar(args.u)
    if args.action == "scan":
        if r1.factors or r2.factors:
            raise ValueError("scan takes two evaluation modules")
        rows = generic_irreducibility_scan(r1.dim - 1, r2.dim - 1, parse_grid(args.grid), window=args.scan_window)
        return {"pair": [r1.dim - 1, r2.dim - 1], "scan": rows,
                "special": [r["ratio"] for r in rows if r["class"] == "special"]}, True
    if args.action == "zeronode":
        rows = zero_node_action(r1, r2)
        return {"pair": [r1.label, r2.label], "zero_node": rows}, all(r["ok"] for r in rows)
    if args.action == "hwprod":
        res = hw_product_check(r1, r2, u)
        return {"pair": [r1.label, r2.label], "u": str(u), **res}, res["ok"]
    T = drinfeld_tensor(r1, r2, u)
    if args.action == "build":
        return {"tensor": T.label, "dim": T.dim, **_module_matrices(T)}, True
    rows = fusion_relation_check(T, cfg.window)
    return {"tensor": T.label, "relations": _rows_summary(rows)}, all(r["ok"] for r in rows)


def cmd_qchar(args, cfg: RunConfig) -> tuple[dict, bool]:
    from .qchar import qcharacter
    rep = parse_module(args.spec, cfg, args.mode)
    return {"module": rep.label, "qcharacter": qcharacter(rep).to_json()}, True


def _cache_path(cfg: RunConfig, dims, mode: str) -> Path:
    from .rmat import NORMALIZATION
    norm = NORMALIZATION.replace(">", "").replace("-", "")
    return Path(cfg.cache) / CACHE_VERSION / f"rmat_{cfg.type}_{dims[0]}x{dims[1]}_{mode}_{norm}.json"


def load_or_solve(cfg: RunConfig, dims, mode: str):
    from .rmat import RMat, resubstitute, solve_evaluation
    path = _cache_path(cfg, dims, mode)
    if path.exists():
        try:
            rm = RMat.from_json(json.loads(path.read_text()))
            good = resubstitute(rm)
        except (ValueError, KeyError, TypeError):
            good = False
        if good:
            _log(cfg, f"cache hit {path}")
            return rm
        _log(cfg, f"cache entry {path} is unreadable or fails re-substitution; solving again")
    rm = solve_evaluation(dims[0] - 1, dims[1] - 1, mode)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(rm.to_json(), sort_keys=True))
    tmp.replace(path)
    return rm


def cmd_rmat(args, cfg: RunConfig) -> tuple[dict, bool]:
    from .rmat import commute_check, fixes_hw, poles, transfer, ybe_check
    if cfg.type != "A1~1":
        raise ValueError("R-matrices are available for type A1~1 only")
    dims = tuple(int(d) for d in args.dims.split(","))
    if len(dims) != 2 or min(dims) < 1:
        raise ValueError("--dims takes two dimensions, e.g. 2,2")
    rm = load_or_solve(cfg, dims, args.mode)
    if args.action == "solve":
        return {"rmatrix": rm.to_json()}, rm.nullity == 1
    if args.action == "poles":
        p = poles(rm)
        return {"dims": list(dims), **{k: [str(x) for x in v] if isinstance(v, list) else str(v)
                                       for k, v in p.items()}}, True
    if args.action == "ybe":
        if dims[0] != dims[1]:
            raise ValueError("ybe uses three equal factors: --dims d,d")
        res = ybe_check(rm, rm, rm, "a", "b", "c")
        return {"dims": list(dims), "ybe": res}, bool(res["ok"])
    T = transfer(rm.matrix, dims[0], dims[1])
    Tb, Tc = T.at("b"), T.at("c")
    com = commute_check(Tb, Tc)
    return {"dims": list(dims), "transfer": T.matrix.to_strings(), "fixes_hw": fixes_hw(T.matrix),
            "commute_b_c": com}, com["ok"] and fixes_hw(T.matrix)


def cmd_verify_all(args, cfg: RunConfig) -> tuple[dict, bool]:
    from .suite import CRITERIA, SuiteConfig, run_criterion
    scfg = SuiteConfig(window=cfg.window, order=cfg.order)
    results = []
    for n in sorted(CRITERIA):
        t0 = time.perf_counter()
        res = run_criterion(n, scfg)
        dt = time.perf_counter() - t0
        timely = dt < res["runtime_limit_s"]
        _log(cfg, f"[{'PASS' if res['ok'] and timely else 'FAIL'}] criterion {n} ({res['name']}) {dt:.2f}s", force=True)
        results.append(res)
    return {"criteria": results}, all(r["ok"] for r in results)


# ---------------------------------------------------------------------------

def _log(cfg: RunConfig, msg: str, force: bool = False):
    if force or cfg.verbose:
        print(msg, file=sys.stderr)


def _default(o):
    if isinstance(o, Scalar):
        return str(o)
    if isinstance(o, tuple):
        return list(o)
    return str(o)


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default=None)
    common.add_argument("--window", type=int, default=None)
    common.add_argument("--order", type=int, default=None)
    common.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--cache", default=None)
    common.add_argument("--config", default=None, help="flat key=value file; flags win")
    common.add_argument("--json", default=None, metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=None)

    p = argparse.ArgumentParser(prog="qtw", description="Exact checks for quantum affinizations.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("cartan", parents=[common])
    s.add_argument("label", nargs="?")
    s.set_defaults(fn=cmd_cartan)
    s = sub.add_parser("term", parents=[common])
    s.add_argument("expr")
    s.add_argument("--morphism", default=None, help="psi, T<i>, T<i>^-1 or a builtin name")
    s.set_defaults(fn=cmd_term)
    s = sub.add_parser("braid", parents=[common])
    s.set_defaults(fn=cmd_braid)
    spec_help = "module spec such as V(1)_a or V(1)_a*V(2)_b"
    s = sub.add_parser("rep", parents=[common])
    s.add_argument("action", choices=["build", "check", "lweights"])
    s.add_argument("spec", help=spec_help)
    s.add_argument("--mode", default="Delta_u1", choices=["Delta", "Delta_u1"])
    s.set_defaults(fn=cmd_rep)
    s = sub.add_parser("qchar", parents=[common])
    s.add_argument("spec", help=spec_help)
    s.add_argument("--mode", default="Delta_u1", choices=["Delta", "Delta_u1"])
    s.set_defaults(fn=cmd_qchar)
    s = sub.add_parser("fusion", parents=[common])
    s.add_argument("action", choices=["build", "check", "hwprod", "zeronode", "scan"])
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--u", default="1")
    s.add_argument("--grid", default="qpow:-4..4", help="qpow:LO..HI or comma-separated ratios")
    s.add_argument("--scan-window", type=int, default=2)
    s.set_defaults(fn=cmd_fusion)
    s = sub.add_parser("rmat", parents=[common])
    s.add_argument("action", choices=["solve", "ybe", "poles", "transfer"])
    s.add_argument("--dims", default="2,2")
    s.add_argument("--mode", default="Delta_u1", choices=["Delta", "Delta_u1"])
    s.set_defaults(fn=cmd_rmat)
    s = sub.add_parser("verify-all", parents=[common])
    s.set_defaults(fn=cmd_verify_all)
    return p


def run(argv: list[str] | None = None) -> tuple[int, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = None
    try:
        cfg = resolve_config(args)
        report, ok = args.fn(args, cfg)
    except (ValueError, ExactError, TermError) as exc:
        report, ok = {"error": str(exc)}, False
    body = {"command": args.command, "config": asdict(cfg) if cfg else None, "ok": ok, "report": report}
    text = render(body)
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)
    return (0 if ok else 1), text


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
