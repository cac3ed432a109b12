"""The acceptance suite: one function per criterion, each returning a deterministic report dict."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cartan import AVAILABLE, build, check
from .dab import (
    a1_word_set, expanded_psi, involution_report, program_closed_form_report, psi_compatibility_check,
)
from .exact import ONE, Scalar, Series, commutator, qpow, reconstruct, to_scalar, var
from .fusion import (
    PoleCollision, coassoc_check, counit_check, drinfeld_tensor, fusion_relation_check,
    generic_irreducibility_scan, hw_product_check, qpow_grid, zero_node_action,
)
from .qchar import TENSOR_MODES, mult_check, projection_check, square_check, tensor
from .rep import (
    QQ, affine_inverse_check, braid_relation_check, current_consistency, drinfeld_polynomials,
    evaluation_module, highest_lweight, lusztig_operator_check, relation_check, sl3_module,
    synthesize_psi, weight_shift_check,
)
from .rmat import (
    assemble_product, commute_check, fixes_hw, intertwines, poles, product_module, solve_evaluation,
    transfer, ybe_check,
)
from .term import CC, braid_inverse_table, grading_swap_check, kk, psi_dictionary, xm, xp


@dataclass(frozen=True)
class SuiteConfig:
    window: int = 6
    order: int = 6
    seed: int = 0
    instances: int = 10


def _summ(rows: list[dict], key: str = "ok") -> dict:
    bad = [r for r in rows if not r.get(key)]
    return {"rows": len(rows), "failed": len(bad), "failures": bad[:5]}


def c1_cartan(cfg: SuiteConfig) -> dict:
    out = {}
    for label in AVAILABLE:
        res = check(build(label))
        out[label] = all(res.values())
    return {"ok": all(out.values()), "types": out}


def c2_braid(cfg: SuiteConfig) -> dict:
    parts = {}
    for name in ("vector", "adjoint"):
        rep = sl3_module(name)
        parts[f"braid_relations[{name}]"] = _summ(braid_relation_check(rep))
        parts[f"lusztig_operators[{name}]"] = _summ(lusztig_operator_check(rep))
    for label in ("A1~1", "A2~1"):
        dt = build(label)
        rows = [dict(r, node=i) for i in dt.nodes for r in braid_inverse_table(dt, i)]
        table = [dict(r, ok=r["status"] in ("literal", "literal_mod_torus", "needs_relations")) for r in rows]
        parts[f"inverse_table[{label}]"] = _summ(table)
        parts[f"inverse_on_modules[{label}]"] = _summ(
            affine_inverse_check(label, [evaluation_module(1), evaluation_module(2)]))
    return {"ok": all(p["failed"] == 0 for p in parts.values()), "parts": parts}


def c3_evaluation(cfg: SuiteConfig) -> dict:
    parts = {}
    for n in range(4):
        V = evaluation_module(n, "a")
        parts[f"relations[V({n})]"] = _summ(relation_check(V, "all", cfg.window))
        parts[f"currents[V({n})]"] = _summ(current_consistency(V, cfg.order))
        parts[f"weight_shift[V({n})]"] = _summ(weight_shift_check(V, cfg.window))
    # Drinfeld polynomial of V(1)_a from the series phi^+_s = (q - q^-1)[x^+_s, x^-_0] on the top vector
    V = evaluation_module(1, "a")
    L = V.loop
    coeffs = [L.k[0, 0]] + [(commutator(L.xp(s), L.xm(0)))[0, 0] * QQ for s in range(1, 2 * cfg.order)]
    psi = reconstruct(Series("z", "0", 0, coeffs), (1, 1))
    P = drinfeld_polynomials(highest_lweight(V)).polys[0]
    form = synthesize_psi(P) == psi and P.degree_in("z")[0] == 1 and P.subs({"z": Scalar(0)}).is_one()
    parts["drinfeld_polynomial"] = {"rows": 1, "failed": 0 if form else 1, "P": str(P), "psi": str(psi),
                                    "failures": [] if form else [{"P": str(P)}]}
    return {"ok": all(p["failed"] == 0 for p in parts.values()), "parts": parts}


def c4_coproduct(cfg: SuiteConfig) -> dict:
    A, B, C = (evaluation_module(1, s) for s in "abc")
    T = drinfeld_tensor(A, B, "u")
    parts = {"relations[V(1)_a*V(1)_b, u]": _summ(fusion_relation_check(T, cfg.window)),
             "coassociativity[u]": _summ(coassoc_check(A, B, C, "u", None)),
             "counit[u]": _summ(counit_check(A, "u"))}
    # reported alongside, not part of the pass condition
    info = {"coassociativity[u=1]": _summ(coassoc_check(A, B, C, ONE, None)),
            "coassociativity[u,w two-parameter]": _summ(coassoc_check(A, B, C, "u", "w")),
            "counit[u=1]": _summ(counit_check(A, ONE))}
    return {"ok": all(p["failed"] == 0 for p in parts.values()), "parts": parts, "supplementary": info}


def _random_point(rng: random.Random, name: str) -> Scalar:
    if rng.random() < 0.3:
        return var(name) * qpow(rng.randint(-3, 3))
    return to_scalar(Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))) * qpow(rng.randint(-3, 3))


def c5_tensor_theorems(cfg: SuiteConfig) -> dict:
    rng = random.Random(cfg.seed)
    hw_rows = []
    while len(hw_rows) < cfg.instances:
        n1, n2 = rng.randint(1, 3), rng.randint(1, 3)
        a, b = _random_point(rng, "a"), _random_point(rng, "b")
        u = ONE if rng.random() < 0.5 else var("u")
        try:
            res = hw_product_check(evaluation_module(n1, a), evaluation_module(n2, b), u)
        except PoleCollision:
            continue
        hw_rows.append({"n": [n1, n2], "a": str(a), "b": str(b), "u": str(u), "ok": res["ok"], "P": res["P"]})
    zero = []
    for n1, n2 in ((1, 1), (1, 2), (2, 1)):
        zero += [dict(r, pair=[n1, n2]) for r in zero_node_action(evaluation_module(n1, "a"),
                                                                   evaluation_module(n2, "b"))]
    scan = generic_irreducibility_scan(1, 1, qpow_grid(-4, 4))
    match = scan_matches_rmatrix(scan)
    parts = {"hw_product": _summ(hw_rows), "zero_node": _summ(zero),
             "scan_vs_rmatrix": {"rows": 1, "failed": 0 if match["ok"] else 1, "failures": [] if match["ok"] else [match],
                                 **match}}
    return {"ok": all(p["failed"] == 0 for p in parts.values()), "parts": parts}


def scan_matches_rmatrix(scan: list[dict]) -> dict:
    """Special sampled ratios against R-poles and det zeros; undefined (pole-collision) ratios must be R-poles."""
    pr = poles(solve_evaluation(1, 1))
    grid = {row["ratio"] for row in scan}
    special_scan = sorted(row["ratio"] for row in scan if row["class"] == "special")
    undefined = sorted(row["ratio"] for row in scan if row["class"] == "undefined")
    special_r = sorted(str(p) for p in pr["special"] if str(p) in grid and str(p) not in undefined)
    collisions_are_poles = all(u in {str(p) for p in pr["poles"]} for u in undefined)
    return {"ok": special_scan == special_r and collisions_are_poles, "scan_special": special_scan,
            "rmatrix_special": [str(p) for p in pr["special"]], "undefined": undefined}


def c6_psi(cfg: SuiteConfig) -> dict:
    dt = build("A1~1")
    parts = {}
    swap = grading_swap_check(dt, expanded_psi(dt))
    parts["grading_swap"] = _summ(swap["rows"])
    table = psi_dictionary(dt)
    literal = [
        {"symbol": "xp(0,1)", "ok": str(table[xp(0, 1)]) == str(_gen(dt, xp(0, 1)))},
        {"symbol": "xm(0,-1)", "ok": str(table[xm(0, -1)]) == str(_gen(dt, xm(0, -1)))},
        {"symbol": "C", "ok": str(table[CC(1)]) == str(_word(dt, [kk(0, -1), kk(1, -1)]))},
    ]
    parts["literal_entries"] = _summ(literal)
    inv = involution_report(dt)
    parts["involutions"] = _summ(inv["rows"])
    parts["program_closed_forms"] = _summ(program_closed_form_report(dt)["rows"])
    compat = [dict(psi_compatibility_check(w), rows=None) for w in a1_word_set(dt)]
    parts["psi_compatibility"] = _summ([{"word": c["word"], "ok": c["ok"]} for c in compat])
    return {"ok": all(p["failed"] == 0 for p in parts.values()), "parts": parts}


def _gen(dt, g):
    from .term import Term
    return Term.gen(g, dt)


def _word(dt, gs):
    from .term import Term
    return Term.word(gs, ONE, dt)


def c7_qcharacters(cfg: SuiteConfig) -> dict:
    rows = []
    for n1 in range(3):
        for n2 in range(3):
            V1, V2 = evaluation_module(n1, "a"), evaluation_module(n2, "b")
            for mode in TENSOR_MODES:
                T = tensor(V1, V2, mode)
                m = mult_check(V1, V2, mode, T)
                s = square_check(V1, V2, mode, T)
                rows.append({"pair": [n1, n2], "mode": mode, "mult": m["ok"], "square": s["ok"],
                             "ok": m["ok"] and s["ok"]})
    proj = [{"n": n, "ok": projection_check(evaluation_module(n, "a"))} for n in range(4)]
    parts = {"multiplicativity": _summ(rows), "projection": _summ(proj)}
    return {"ok": all(p["failed"] == 0 for p in parts.values()), "parts": parts}


def c8_rmatrix(cfg: SuiteConfig) -> dict:
    R22, R23 = solve_evaluation(1, 1), solve_evaluation(1, 2)
    parts = {}
    parts["unique"] = _summ([{"dims": [2, 2], "nullity": R22.nullity, "ok": R22.nullity == 1},
                             {"dims": [2, 3], "nullity": R23.nullity, "ok": R23.nullity == 1}])
    # solve_rmatrix already re-verifies at current level; repeated here on fresh modules
    from .rmat import resubstitute
    parts["current_level"] = _summ([{"dims": [2, 2], "ok": resubstitute(R22)},
                                    {"dims": [2, 3], "ok": resubstitute(R23)}])
    ybe = ybe_check(R22, R22, R22, "a", "b", "c")
    parts["ybe"] = _summ([dict(ybe, ok=bool(ybe["ok"]))])
    solved = {(2, 2): R22, (2, 3): R23}
    b, c = var("b"), var("c")
    T_b = transfer(solved[(2, 2)].matrix.subs({"x": b}), 2, 2)
    T_c = transfer(solved[(2, 2)].matrix.subs({"x": c}), 2, 2)
    rows = [dict(commute_check(T_b.matrix, T_c.matrix), aux="V(1)_b,V(1)_c", space="V(1)_1")]
    # a larger first factor: V(1)_1 (x) V(1)_y, braided through assembled crossings
    y = var("y")
    Mb = assemble_product([(2, ONE), (2, y)], [(2, b)], solved)
    Mc = assemble_product([(2, ONE), (2, y)], [(3, c)], solved)
    rows.append(dict(commute_check(transfer(Mb, 4, 2).matrix, transfer(Mc, 4, 3).matrix),
                     aux="V(1)_b,V(2)_c", space="V(1)_1*V(1)_y"))
    rows.append({"fixes_hw": True, "ok": fixes_hw(T_b.matrix) and fixes_hw(transfer(Mb, 4, 2).matrix)})
    parts["transfer"] = _summ(rows)
    S = product_module([evaluation_module(1, ONE), evaluation_module(1, "y"), evaluation_module(1, "b")])
    T = product_module([evaluation_module(1, "b"), evaluation_module(1, ONE), evaluation_module(1, "y")])
    parts["assembled_intertwiner"] = _summ([{"ok": intertwines(Mb, S, T) and Mb[0, 0].is_one()}])
    match = scan_matches_rmatrix(generic_irreducibility_scan(1, 1, qpow_grid(-4, 4)))
    parts["poles_vs_scan"] = {"rows": 1, "failed": 0 if match["ok"] else 1, "failures": [] if match["ok"] else [match],
                              **match}
    return {"ok": all(p["failed"] == 0 for p in parts.values()), "parts": parts}


CRITERIA: dict[int, tuple[str, Callable[[SuiteConfig], dict], float]] = {
    1: ("cartan", c1_cartan, 1.0),
    2: ("braid", c2_braid, 30.0),
    3: ("evaluation modules", c3_evaluation, 60.0),
    4: ("Drinfeld coproduct", c4_coproduct, 300.0),
    5: ("tensor theorems", c5_tensor_theorems, 300.0),
    6: ("psi and braid group", c6_psi, 30.0),
    7: ("q-characters", c7_qcharacters, 60.0),
    8: ("R-matrices", c8_rmatrix, 600.0),
}


def run_criterion(n: int, cfg: SuiteConfig | None = None) -> dict:
    name, fn, limit = CRITERIA[n]
    res = fn(cfg or SuiteConfig())
    return {"criterion": n, "name": name, "runtime_limit_s": limit, **res}
