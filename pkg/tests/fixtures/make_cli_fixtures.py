"""Regenerate the command-line fixtures in tests/fixtures/cli.

Every command gets one positive case (exit 0) and one negative case (exit 1
or 2).  Inputs are written in canonical form, so they also serve as
round-trip samples.  Run from the repository root:

    python tests/fixtures/make_cli_fixtures.py
"""

from __future__ import annotations

import copy
import json
from pathlib import Path

import numpy as np

from tdk import serialize as ser
from tdk.display import (etale_display, identity_morphism, multiplicative_display, random_isomorphism,
                         supersingular_display)

OUT = Path(__file__).resolve().parent / "cli"

F2 = {"kind": "zmod", "p": 2, "t": 1}
F3 = {"kind": "zmod", "p": 3, "t": 1}
Z4 = {"kind": "zmod", "p": 2, "t": 2}
F2E = {"kind": "fp_poly_quot", "p": 2, "vars": ["e"], "rels": ["e^2"]}
F4 = {"kind": "fp_poly_quot", "p": 2, "vars": ["a"], "rels": ["a^2+a+1"]}
TH_EPS = {"S": F2E, "R": F2, "kernel": ["e"]}


def write(name: str, obj) -> str:
    (OUT / name).write_text(ser.dumps(obj), encoding="utf-8")
    return name


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    R2, R3 = ser.ring_from_json(F2), ser.ring_from_json(F3)
    rng = np.random.default_rng(7)
    cases = []

    def case(command, inp, exit_code, in2=None, args=(), expect=None, note=""):
        cases.append({"command": command, "in": inp, "in2": in2, "args": list(args), "exit": exit_code,
                      "expect": expect or {}, "note": note})

    # witt-eval
    write("witt_add_z4.json", {"ring": Z4, "n": 2, "op": "add", "x": ["1", "1"], "y": ["3", "2"]})
    write("witt_ghost_bad_index.json", {"ring": F3, "n": 2, "op": "ghost", "x": ["1", "2"], "i": 5})
    case("witt-eval", "witt_add_z4.json", 0, note="addition in W_2(Z/4)")
    case("witt-eval", "witt_ghost_bad_index.json", 1, note="ghost index out of range")

    # display-validate
    S2 = supersingular_display(R2, 2)
    write("supersingular_f2_n2.json", ser.display_to_json(S2))
    ident = ser.morphism_to_json(identity_morphism(S2))
    write("identity_morphism_f2.json", ident)
    bad = copy.deepcopy(ident)
    bad["X"][0][0] = {"rep": ["0", "0", "0"]}
    write("corrupted_morphism_f2.json", bad)
    case("display-validate", "identity_morphism_f2.json", 0, expect={"valid": True})
    case("display-validate", "corrupted_morphism_f2.json", 1, expect={"valid": False},
         note="relation fails; the report names the entry")

    # display-compose
    P3 = supersingular_display(R3, 2)
    Q3, a1 = random_isomorphism(P3, rng)
    _, a2 = random_isomorphism(Q3, rng)
    write("morphism_a1_f3.json", ser.morphism_to_json(a1))
    write("morphism_a2_f3.json", ser.morphism_to_json(a2))
    case("display-compose", "morphism_a1_f3.json", 0, in2="morphism_a2_f3.json")
    case("display-compose", "morphism_a2_f3.json", 1, in2="morphism_a2_f3.json", note="not composable")

    # display-truncate
    write("supersingular_f2_n3.json", ser.display_to_json(supersingular_display(R2, 3)))
    case("display-truncate", "supersingular_f2_n3.json", 0, args=["--level", "2"])
    case("display-truncate", "supersingular_f2_n3.json", 1, args=["--level", "5"], note="level above n")

    # display-basechange
    write("hom_f2_f4.json", {"source": F2, "target": F4, "images": {}})
    write("hom_f4_f2_bad.json", {"source": F4, "target": F2, "images": {"a": "1"}})
    case("display-basechange", "supersingular_f2_n2.json", 0, in2="hom_f2_f4.json")
    case("display-basechange", "supersingular_f2_n2.json", 1, in2="hom_f4_f2_bad.json",
         note="a -> 1 is not a ring homomorphism")

    # nilpotence-order
    write("etale_f2_n2.json", ser.display_to_json(etale_display(R2, 2)))
    case("nilpotence-order", "supersingular_f2_n2.json", 0, expect={"order": 1})
    case("nilpotence-order", "etale_f2_n2.json", 1, args=["--order-bound", "4"], note="étale: not nilpotent")

    # lift-solve
    Seps = ser.display_to_json(supersingular_display(R2, 2))
    write("lift_problem_eps.json", {"thickening": TH_EPS, "n": 2, "display": Seps, "display_prime": Seps,
                                    "seed": {"J_n": [["e"]]}})
    write("lift_problem_bad_seed.json", {"thickening": TH_EPS, "n": 2, "display": Seps, "display_prime": Seps,
                                         "seed": {"X_n": [["e"]]}})
    case("lift-solve", "lift_problem_eps.json", 0, expect={"valid": True, "reduces": True})
    case("lift-solve", "lift_problem_bad_seed.json", 1, note="seed entry of X_n is not in pS ∩ 𝔞")

    # lift-uniqueness
    S4 = ser.display_to_json(supersingular_display(R2, 4))
    write("lift_problem_eps_n4.json", {"thickening": TH_EPS, "n": 4, "display": S4, "display_prime": S4})
    case("lift-uniqueness", "lift_problem_eps_n4.json", 0, args=["--seed", "3"], expect={"agree": True, "level": 1})
    case("lift-uniqueness", "lift_problem_eps.json", 1, note="n > m(e+1)+1 fails")

    # crystal-eval
    write("crystal_eps_n4.json", {"thickening": TH_EPS, "display": S4})
    write("crystal_etale.json", {"thickening": TH_EPS, "display": ser.display_to_json(etale_display(R2, 4))})
    case("crystal-eval", "crystal_eps_n4.json", 0, expect={"rank": 2})
    case("crystal-eval", "crystal_etale.json", 1, note="étale display is not nilpotent")

    # hodge-lift
    write("hodge_eps.json", {"thickening": TH_EPS, "display": Seps})
    write("hodge_eps_bad_phi.json", {"thickening": TH_EPS, "display": Seps, "phi": [["1"]]})
    case("hodge-lift", "hodge_eps.json", 0, expect={"count": 2})
    case("hodge-lift", "hodge_eps_bad_phi.json", 1, note="phi is not in the kernel")

    # points-fg / points-bt
    write("multiplicative_f2_n2.json", ser.display_to_json(multiplicative_display(R2, 2)))
    write("multiplicative_f2_n3.json", ser.display_to_json(multiplicative_display(R2, 3)))
    write("multiplicative_f3_n1.json", ser.display_to_json(multiplicative_display(R3, 1)))
    write("nil_eps.json", {"base": F2, "gens": ["x"], "rels": ["x^2"]})
    write("nil_x4.json", {"base": F2, "gens": ["x"], "rels": ["x^4"]})
    write("nil_x8.json", {"base": F2, "gens": ["x"], "rels": ["x^8"]})
    case("points-fg", "multiplicative_f2_n2.json", 0, in2="nil_eps.json", expect={"order": 2})
    case("points-fg", "multiplicative_f3_n1.json", 1, in2="nil_eps.json", note="different primes")
    case("points-bt", "multiplicative_f2_n2.json", 0, in2="nil_x4.json", args=["--level", "1"],
         expect={"order": 4})
    case("points-bt", "multiplicative_f2_n2.json", 1, in2="nil_x8.json", args=["--level", "1"],
         note="x^(p^n) = 0 fails")

    # descent-cech
    write("covering_f2_product2.json", {"base": F2, "cover": {"kind": "product", "k": 2}})
    write("covering_f2_f4.json", {"base": F2, "cover": {"kind": "field_ext", "deg": 2}, "variant": "W"})
    write("covering_bad_kind.json", {"base": F2, "cover": {"kind": "fpqc"}})
    case("descent-cech", "covering_f2_product2.json", 0, args=["--level", "2"], expect={"ok": True})
    case("descent-cech", "covering_bad_kind.json", 2, note="unknown covering kind")

    # malformed inputs in general
    (OUT / "not_json.json").write_text("{\"ring\": ", encoding="utf-8")
    write("display_bad_element.json", {"ring": F2, "n": 1, "d": 1, "c": 0, "matrix": [[["zz"]]]})
    case("display-validate", "not_json.json", 2, note="syntax error")
    case("display-validate", "display_bad_element.json", 2, note="unparseable element")

    (OUT / "cases.json").write_text(json.dumps(cases, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
