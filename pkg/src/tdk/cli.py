"""Command-line front end: ``tdk <command> --in FILE [--in2 FILE] --out FILE [options]``.

Exit status: 0 on success, 1 when the input is well-formed but mathematically
invalid (a structured report is written to the output file), 2 when the
input is malformed.  Identical inputs and options give byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize as ser
from .display import (DisplayError, DisplayMorphism, NotNilpotent, TruncatedDisplay, base_change,
                      morphism_compose, morphism_validate, nilpotence_order, truncate)
from .rings import RingError
from .serialize import InvalidInput, SchemaError, field
from .witt import WittVector, frobenius, ghost, restrict, verschiebung, witt_ring


# -- witt-eval ---------------------------------------------------------------------------------

_WITT_OPS = ("add", "sub", "mul", "neg", "frob", "ver", "teich", "ghost", "restrict", "project")


def cmd_witt_eval(args, data, data2):
    """{"ring", "n", "op", "x"?, "y"?, "a"?, "i"?, "m"?} -> {"result": ...}."""
    from .cwitt import cwitt_ring

    R = ser.ring_from_json(field(data, "ring", dict))
    n = field(data, "n", int)
    if n < 1:
        raise SchemaError("n must be positive")
    op = field(data, "op", str)
    if op not in _WITT_OPS:
        raise SchemaError(f"unknown operation {op!r}; expected one of {', '.join(_WITT_OPS)}")
    x = ser.witt_from_json(R, n, field(data, "x", list)) if op != "teich" else None
    y = ser.witt_from_json(R, n, field(data, "y", list)) if op in ("add", "sub", "mul") else None
    if op == "add":
        res = ser.witt_to_json(x + y)
    elif op == "sub":
        res = ser.witt_to_json(x - y)
    elif op == "mul":
        res = ser.witt_to_json(x * y)
    elif op == "neg":
        res = ser.witt_to_json(-x)
    elif op == "frob":
        if n < 2:
            raise InvalidInput("F: W_n -> W_{n-1} needs n >= 2")
        res = ser.witt_to_json(frobenius(x))
    elif op == "ver":
        res = ser.witt_to_json(verschiebung(x))
    elif op == "teich":
        a = ser.element_from_json(R, field(data, "a"))
        res = ser.witt_to_json(witt_ring(R, n).teichmuller(a))
    elif op == "ghost":
        i = field(data, "i", int)
        if not 0 <= i < n:
            raise InvalidInput(f"ghost component {i} needs 0 <= i < {n}")
        res = R.format(ghost(x, i))
    elif op == "restrict":
        m = field(data, "m", int, args.level)
        if m is None or not 0 <= m <= n:
            raise InvalidInput(f"restriction needs 0 <= m <= {n}")
        res = ser.witt_to_json(restrict(x, m))
    else:  # project W_n -> 𝒲_{n-1}
        if n < 2:
            raise InvalidInput("the projection W_n -> 𝒲_{n-1} needs n >= 2")
        C = cwitt_ring(R, n - 1)
        z = C.project(x)
        res = {"res": ser.witt_to_json(z.res), "frob": ser.witt_to_json(z.frob)}
    return {"op": op, "result": res}


# -- displays ----------------------------------------------------------------------------------


def _validation_report(alpha: DisplayMorphism) -> dict:
    v = morphism_validate(alpha)
    if v.ok:
        return {"valid": True, "kind": "morphism"}
    report = {"valid": False, "kind": "morphism", "message": v.message}
    if v.entry is not None:
        report.update(entry=list(v.entry), lhs=ser.witt_to_json(v.lhs), rhs=ser.witt_to_json(v.rhs))
    return report


def _require_valid(alpha: DisplayMorphism, which: str):
    rep = _validation_report(alpha)
    if not rep["valid"]:
        raise InvalidInput(f"{which}: {rep['message']}", rep)


def cmd_display_validate(args, data, data2):
    obj = ser.display_or_morphism_from_json(data)
    if isinstance(obj, TruncatedDisplay):
        return {"valid": True, "kind": "display", "d": obj.d, "c": obj.c, "n": obj.n}
    rep = _validation_report(obj)
    if not rep["valid"]:
        raise InvalidInput(rep["message"], rep)
    return rep


def cmd_display_compose(args, data, data2):
    """--in α₁, --in2 α₂ -> α₂ ∘ α₁."""
    a1 = ser.morphism_from_json(data)
    a2 = ser.morphism_from_json(_need(data2, "--in2 (the second morphism)"), a1.source.R, a1.source.n)
    _require_valid(a1, "first morphism")
    _require_valid(a2, "second morphism")
    if a1.target != a2.source:
        raise InvalidInput("the morphisms are not composable: target of the first differs from source of the second")
    out = morphism_compose(a2, a1)
    _require_valid(out, "composite")  # holds for valid inputs
    return ser.morphism_to_json(out)


def cmd_display_truncate(args, data, data2):
    obj = ser.display_or_morphism_from_json(data)
    if args.level is None:
        raise SchemaError("--level is required")
    n = obj.n if isinstance(obj, TruncatedDisplay) else obj.source.n
    if not 1 <= args.level <= n:
        raise InvalidInput(f"cannot truncate level {n} to {args.level}")
    if isinstance(obj, DisplayMorphism):
        _require_valid(obj, "morphism")
    return ser.display_or_morphism_to_json(truncate(obj, args.level))


def cmd_display_basechange(args, data, data2):
    """--in display or morphism over R, --in2 homomorphism R -> S."""
    obj = ser.display_or_morphism_from_json(data)
    phi = ser.hom_from_json(_need(data2, "--in2 (the ring homomorphism)"))
    R = obj.R if isinstance(obj, TruncatedDisplay) else obj.source.R
    if phi.source is not R:
        raise InvalidInput("the homomorphism does not start at the ring of the display")
    if isinstance(obj, DisplayMorphism):
        _require_valid(obj, "morphism")
    return ser.display_or_morphism_to_json(base_change(obj, phi))


def cmd_nilpotence_order(args, data, data2):
    P = ser.display_from_json(data)
    bound = args.order_bound
    try:
        e = nilpotence_order(P, bound)
    except NotNilpotent as exc:
        raise InvalidInput(str(exc), {"nilpotent": False}) from None
    return {"order": e}


# -- relative displays -----------------------------------------------------------------------------


def _rel_display(th, obj, n):
    """A relative display: a display over S, or a display over R lifted coordinatewise."""
    from .relative import RelDisplay, coordinate_lift

    ring = ser.ring_from_json(obj["ring"]) if isinstance(obj, dict) and "ring" in obj else th.S
    if ring is th.R:
        return coordinate_lift(th, ser.display_from_json(obj, th.R, n))
    if ring is not th.S:
        raise SchemaError("displays must live over the source or the target of the thickening")
    return RelDisplay(th, ser.display_from_json(obj, th.S, n))


def _lift_problem(data):
    th = ser.thickening_from_json(field(data, "thickening", dict))
    n = field(data, "n", int, None)
    P = _rel_display(th, field(data, "display", dict), n)
    Q = _rel_display(th, field(data, "display_prime", dict, data["display"]), P.n)
    alpha_bar = None
    if "alpha_bar" in data:
        alpha_bar = ser.morphism_from_json(data["alpha_bar"], th.R, P.n)
    seed = data.get("seed")
    if seed is not None:
        if not isinstance(seed, dict):
            raise SchemaError("seed must be an object with blocks X_n, J_n, Z_n, Y_n")
        seed = {k: [[ser.element_from_json(th.S, x) for x in row] for row in v] for k, v in seed.items()
                if k in ("X_n", "J_n", "Z_n", "Y_n")}
    return th, P, Q, alpha_bar, seed


def _solve(P, Q, alpha_bar, seed):
    from .relative import LiftError, lift_solve

    try:
        return lift_solve(P, Q, seed, alpha_bar)
    except LiftError as exc:
        raise InvalidInput(str(exc), {"object": "lift problem"}) from None


def cmd_lift_solve(args, data, data2):
    from .relative import reduce_to_R, rel_identity, rel_morphism_validate

    th, P, Q, alpha_bar, seed = _lift_problem(data)
    if args.seed is not None:
        seed = args.seed
    sol = _solve(P, Q, alpha_bar, seed)
    valid = bool(rel_morphism_validate(sol.morphism))
    red = reduce_to_R(sol.morphism)
    expected = alpha_bar if alpha_bar is not None else reduce_to_R(rel_identity(P))
    reduces = (red.X == expected.X and red.J == expected.J and red.Z == expected.Z and red.Y == expected.Y)
    out = {"H": [ser.int_matrix_to_json(th.S, h) for h in sol.H], "morphism": ser.rel_morphism_to_json(sol.morphism),
           "valid": valid, "reduces": bool(reduces)}
    if not (valid and reduces):  # pragma: no cover - the solver output always validates
        raise InvalidInput("solver output fails validation", out)
    return out


def _order_bound(args, P):
    from .relative import reduce_to_R

    Pbar = reduce_to_R(P)
    try:
        return nilpotence_order(Pbar, args.order_bound)
    except NotNilpotent as exc:
        raise InvalidInput(f"the reduction is not nilpotent: {exc}", {"nilpotent": False}) from None


def cmd_lift_uniqueness(args, data, data2):
    """Solve with four seeds and compare truncations to level n - m(e+1) - 1."""
    from .relative import LiftError, truncation_uniqueness_check, uniqueness_level

    th, P, Q, alpha_bar, _ = _lift_problem(data)
    e = _order_bound(args, P) if args.order_bound is None else args.order_bound
    m = th.m if args.level is None else args.level
    try:
        level = uniqueness_level(P.n, m, e)
    except LiftError as exc:
        raise InvalidInput(str(exc), {"n": P.n, "m": m, "e": e}) from None
    base = 0 if args.seed is None else args.seed
    sols = [_solve(P, Q, alpha_bar, base + k) for k in range(4)]
    reports = [truncation_uniqueness_check(sols[0], s, e, m) for s in sols[1:]]
    out = {"n": P.n, "m": m, "e": e, "level": level, "seeds": [base + k for k in range(4)],
           "agree": all(r.ok for r in reports),
           "first_difference": [r.first_difference for r in reports]}
    if not out["agree"]:
        raise InvalidInput("truncations of the lifts differ", out)
    return out


def cmd_crystal_eval(args, data, data2):
    """{"thickening", "display" (over R), "lifts"?: [display over S, display over S]}."""
    from .relative import LiftError, crystal_comparison, crystal_eval

    th = ser.thickening_from_json(field(data, "thickening", dict))
    P = ser.display_from_json(field(data, "display", dict), th.R)
    if P.R is not th.R:
        raise SchemaError("the display must live over the target of the thickening")
    e = args.order_bound
    if e is None:
        try:
            e = nilpotence_order(P)
        except NotNilpotent as exc:
            raise InvalidInput(str(exc), {"nilpotent": False}) from None
    lifts = [_rel_display(th, x, P.n) for x in field(data, "lifts", list, [])]
    try:
        D = crystal_eval(P, th, e, lifts[0] if lifts else None)
        out = {"rank": D.rank, "basis": D.basis, "order_bound": e, "lift": ser.display_to_json(D.lift.display)}
        if len(lifts) >= 2:
            comp = crystal_comparison(P, th, e, lifts[0], lifts[1], args.seed)
            S = th.S
            ident = np.eye(P.h, dtype=np.int64) * S.one
            red = np.vectorize(th.surjection)(comp)
            out["comparison"] = ser.int_matrix_to_json(S, comp)
            out["is_identity"] = bool(np.array_equal(comp, ident))
            out["identity_mod_kernel"] = bool(np.array_equal(red, np.eye(P.h, dtype=np.int64) * th.R.one))
    except LiftError as exc:
        raise InvalidInput(str(exc)) from None
    return out


def cmd_hodge_lift(args, data, data2):
    """{"thickening", "display" (over R or S), "phi"?: d x c matrix over the kernel}."""
    from .relative import LiftError, hodge_class, hodge_lift_display, hodge_lifts

    th = ser.thickening_from_json(field(data, "thickening", dict))
    Pref = _rel_display(th, field(data, "display", dict), None)
    S = th.S
    try:
        if "phi" in data:
            rows = ser._grid(field(data, "phi", list), (Pref.d, Pref.c), "phi")
            Phi = np.array([[ser.element_from_json(S, x) for x in row] for row in rows],
                           dtype=np.int64).reshape(Pref.d, Pref.c)
            D = hodge_lift_display(Pref, Phi)
            return {"phi": ser.int_matrix_to_json(S, Phi), "display": ser.display_to_json(D)}
        from .relative import RelDisplay

        lifts = []
        for Phi, D in hodge_lifts(Pref):
            inv = hodge_class(Pref, RelDisplay(th, D), args.seed)
            lifts.append({"phi": ser.int_matrix_to_json(S, Phi), "display": ser.display_to_json(D),
                          "invariant": ser.int_matrix_to_json(S, inv)})
        return {"count": len(lifts), "lifts": lifts}
    except LiftError as exc:
        raise InvalidInput(str(exc)) from None


# -- points ---------------------------------------------------------------------------------------------


def _points(args, data, data2):
    from .points import NoStabilization, PointsError, fg_points

    P = ser.display_from_json(data)
    N = ser.nil_algebra_from_json(_need(data2, "--in2 (the nilpotent algebra)"))
    max_bound = 8 if args.bound is None else args.bound
    try:
        return fg_points(P, N, max_bound=max_bound)
    except (PointsError, NoStabilization) as exc:
        raise InvalidInput(str(exc)) from None


def _group_json(res, grp) -> dict:
    return {"order": grp.order, "factors": list(grp.invariant_factors), "bound": res.bound,
            "orders": {str(k): v for k, v in res.orders.items()}, "injective": res.injective}


def cmd_points_fg(args, data, data2):
    res = _points(args, data, data2)
    return _group_json(res, res.group)


def cmd_points_bt(args, data, data2):
    from .points import torsion_subgroup

    if args.level is None:
        raise SchemaError("--level is required")
    if args.level < 0:
        raise InvalidInput("the torsion level must be non-negative")
    res = _points(args, data, data2)
    out = _group_json(res, torsion_subgroup(res.group, res.display.R.p, args.level))
    out["level"] = args.level
    return out


# -- descent ------------------------------------------------------------------------------------------


def cmd_descent_cech(args, data, data2):
    """Covering file plus optional "variant" ("cW", "W", "ptors", "module") and "rank"."""
    from .descent import DescentError, acyclicity_check, cech_complex, exact_sequence_check

    cov = ser.covering_from_json(data)
    variant = field(data, "variant", str, "cW")
    if variant not in ("cW", "W", "ptors", "module"):
        raise SchemaError(f"unknown variant {variant!r}")
    rank = field(data, "rank", int, 1)
    n = 2 if args.level is None else args.level
    max_degree = 3 if args.bound is None else args.bound
    if n < 1 or max_degree < 1 or rank < 1:
        raise InvalidInput("need level, degree bound and rank >= 1")
    try:
        C = cech_complex(cov, n, variant, max_degree, rank=rank)
        rep = acyclicity_check(C)
        out = {"variant": variant, "level": n, "max_degree": max_degree, "sizes": list(C.sizes),
               "chain_orders": [C.chain_order(q) for q in range(max_degree + 1)], **rep.to_json()}
        if variant in ("cW", "W") and max_degree >= 2:
            out["exact_sequence"] = exact_sequence_check(cov, n, max_degree - 1).to_json()
    except DescentError as exc:
        raise InvalidInput(str(exc)) from None
    ok = out["ok"] and out.get("exact_sequence", {"ok": True})["ok"]
    if not ok:  # pragma: no cover - acyclicity holds for the supported coverings
        raise InvalidInput("the complex is not acyclic", out)
    return out


COMMANDS = {
    "witt-eval": cmd_witt_eval,
    "display-validate": cmd_display_validate,
    "display-compose": cmd_display_compose,
    "display-truncate": cmd_display_truncate,
    "display-basechange": cmd_display_basechange,
    "nilpotence-order": cmd_nilpotence_order,
    "lift-solve": cmd_lift_solve,
    "lift-uniqueness": cmd_lift_uniqueness,
    "crystal-eval": cmd_crystal_eval,
    "hodge-lift": cmd_hodge_lift,
    "points-fg": cmd_points_fg,
    "points-bt": cmd_points_bt,
    "descent-cech": cmd_descent_cech,
}


def _need(data, what):
    if data is None:
        raise SchemaError(f"missing input {what}")
    return data


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tdk", description="Truncated Witt vectors and truncated displays.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--in", dest="inp", required=True, help="input JSON file")
    ap.add_argument("--in2", dest="inp2", help="second input file (compose, basechange, points)")
    ap.add_argument("--out", help="output JSON file (default: standard output)")
    ap.add_argument("--level", type=int, help="truncation level m")
    ap.add_argument("--order-bound", dest="order_bound", type=int, help="nilpotence order bound e")
    ap.add_argument("--seed", type=int, help="seed for every random choice")
    ap.add_argument("--bound", type=int, help="support / degree bound")
    return ap


def _emit(args, obj):
    if args.out:
        ser.write_file(args.out, obj)
    else:
        sys.stdout.write(ser.dumps(obj))


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = ser.read_file(args.inp)
        data2 = ser.read_file(args.inp2) if args.inp2 else None
        result = COMMANDS[args.command](args, data, data2)
    except SchemaError as exc:
        report = {"error": "malformed input", "message": str(exc)}
        sys.stderr.write(f"tdk: malformed input: {exc}\n")
        _emit(args, report)
        return 2
    except InvalidInput as exc:
        sys.stderr.write(f"tdk: invalid: {exc}\n")
        _emit(args, exc.report)
        return 1
    except (DisplayError, RingError, ValueError, ArithmeticError) as exc:
        # mathematical failures raised inside the computations
        sys.stderr.write(f"tdk: invalid: {exc}\n")
        _emit(args, {"valid": False, "message": str(exc)})
        return 1
    _emit(args, result)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
