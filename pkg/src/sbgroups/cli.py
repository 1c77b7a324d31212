"""Command line front end.

Every subcommand prints exactly one JSON object to stdout with a schema
version field "v": 1, sorted keys, and no timestamps, so identical
invocations produce identical bytes.  Progress notes go to stderr and can
be silenced with --quiet.  Exit codes: 0 for a completed run, 2 for
malformed input of any kind, 3 when a closure cap or a zero divisor cuts
a computation short (the payload still records what happened).

Subcommands:

* ``order N``: admissibility of N as the order of a single automorphism.
* ``classify``: verdict for a group table file or an inline descriptor.
* ``enumerate``: admissible orders, or all realizable groups, up to a bound.
* ``algebra``: build an explicit witness inside a cyclic algebra and
  report the relations it satisfies.
* ``verify``: run one of the arithmetic scan suites and report each check.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import classifier, residue_arith, semidirect
from .exact_fields import CyclotomicNumber
from .cyclic_algebra import (
    ZeroDivisor,
    build_balanced_witness,
    build_heisenberg_witness,
    build_mu3_product_witness,
    generated_group_mod_scalars,
    multiply,
    order_mod_scalars,
)
from .group_kernel import (
    CapExceeded,
    FiniteGroup,
    build_cyclic,
    build_semidirect,
    direct_product,
    elementary_abelian_3,
    is_isomorphic,
)
from .pgl3_checker import (
    CheckEntry,
    scan_diagonal_subgroups,
    scan_order3_units,
    scan_root27_triples,
)

SCHEMA_VERSION = 1

_SUITE_BOUNDS = {"semidirect": 5000, "algebra": 1000, "pgl3": 10_000}


def _dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _versioned(payload: dict) -> dict:
    out = {"v": SCHEMA_VERSION}
    out.update(payload)
    return out


# ------------------------------------------------------------------- handlers


def _cmd_order(args) -> dict:
    verdict = classifier.admissible_order(args.n)
    return _versioned(verdict.to_dict())


def _descriptor_argument(raw: str) -> dict:
    """Inline JSON if it looks like an object, otherwise a file path."""
    text = raw.strip()
    if not text.startswith("{"):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    desc = json.loads(text)
    if not isinstance(desc, dict):
        raise ValueError("descriptor JSON must be an object")
    return desc


def _cmd_classify(args) -> dict:
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            group = FiniteGroup.from_json(fh.read())
        if args.over_q:
            return _versioned(
                {"mode": "over_q", "acts_over_q": classifier.classify_over_Q(group)}
            )
        result = classifier.classify_group(group, max_order=args.max_order)
        return _versioned(result.to_dict())
    desc = _descriptor_argument(args.descriptor)
    if args.over_q:
        group = classifier.realize_descriptor(desc)
        return _versioned(
            {"mode": "over_q", "acts_over_q": classifier.classify_over_Q(group)}
        )
    result = classifier.classify_descriptor(desc)
    return _versioned(result.to_dict())


def _cmd_enumerate(args) -> dict:
    if args.orders is not None:
        return _versioned(
            {"orders": classifier.enumerate_admissible_orders(args.orders)}
        )
    groups = classifier.enumerate_aut_groups(args.groups)
    return _versioned({"groups": [c.to_dict() for c in groups]})


def _cmd_algebra(args) -> dict:
    if args.heisenberg:
        if args.n is not None or args.d is not None or args.with_central_mu3:
            raise ValueError("--heisenberg takes only --a and --b")
        w = build_heisenberg_witness(a=Fraction(args.a), b=Fraction(args.b))
        omega = w.algebra.embed(w.algebra.tower.omega())
        group, _ = generated_group_mod_scalars([w.u, w.v], cap=args.cap)
        return _versioned(
            {
                "model": "heisenberg",
                "a": str(Fraction(args.a)),
                "b": str(Fraction(args.b)),
                "relations": {
                    "anticommute_by_omega": multiply(w.u, w.v)
                    == omega * multiply(w.v, w.u),
                    "u_cubed_is_b": w.u ** 3 == Fraction(args.b),
                    "v_cubed_is_a": w.v ** 3 == Fraction(args.a),
                },
                "orders": {
                    "u": order_mod_scalars(w.u),
                    "v": order_mod_scalars(w.v),
                },
                "group_order": group.order,
            }
        )
    if args.n is None or args.d is None:
        raise ValueError("--n and --d are required unless --heisenberg is given")
    a = Fraction(args.a)
    if args.with_central_mu3:
        w = build_mu3_product_witness(args.n, args.d, a)
        omega = w.algebra.embed(w.algebra.tower.omega())
        group, _ = generated_group_mod_scalars([w.xi, w.alpha, w.tau], cap=args.cap)
        return _versioned(
            {
                "model": "balanced_with_central_mu3",
                "n": w.n,
                "d": w.d,
                "a": str(a),
                "relations": {
                    "twist": multiply(w.xi, w.alpha)
                    == multiply(w.alpha, w.xi ** w.d),
                    "central_commutes": multiply(w.tau, w.xi)
                    == multiply(w.xi, w.tau),
                    "central_twists_alpha_by_omega": multiply(w.tau, w.alpha)
                    == omega * multiply(w.alpha, w.tau),
                },
                "orders": {
                    "xi": order_mod_scalars(w.xi),
                    "alpha": order_mod_scalars(w.alpha),
                    "central": order_mod_scalars(w.tau),
                    "central_times_xi": order_mod_scalars(multiply(w.tau, w.xi)),
                },
                "group_order": group.order,
            }
        )
    w = build_balanced_witness(args.n, args.d, a)
    group, _ = generated_group_mod_scalars([w.xi, w.alpha], cap=args.cap)
    return _versioned(
        {
            "model": "balanced",
            "n": w.n,
            "d": w.d,
            "a": str(a),
            "relations": {
                "twist": multiply(w.xi, w.alpha) == multiply(w.alpha, w.xi ** w.d)
                if w.n > 1
                else True,
                "alpha_cubed_is_a": w.alpha ** 3 == a,
            },
            "orders": {
                "xi": order_mod_scalars(w.xi),
                "alpha": order_mod_scalars(w.alpha),
            },
            "group_order": group.order,
        }
    )


def _good_modulus(n: int) -> bool:
    return all(p % 3 == 1 for p in residue_arith.factorize(n).primes())


def _suite_semidirect(bound: int, log) -> list[CheckEntry]:
    log(f"checking balanced == fixed-point-free for moduli up to {bound}")
    entries = []
    for n in range(1, bound + 1):
        if not _good_modulus(n):
            continue
        agree = True
        balanced = 0
        roots = residue_arith.cube_roots_of_unity(n)
        for d in roots:
            is_b = semidirect.is_balanced(n, d)
            if is_b != semidirect.fixed_points_are_trivial(n, d):
                agree = False
            balanced += is_b
        entries.append(
            CheckEntry(
                f"n={n}",
                agree,
                {"characters": len(roots), "balanced": balanced},
            )
        )
    return entries


def _suite_algebra(bound: int, log) -> list[CheckEntry]:
    log(f"building witnesses and checking {bound} random triples")
    entries = []
    w = build_balanced_witness(7, 2, 2)
    A = w.algebra
    entries.append(
        CheckEntry(
            "twist relation in the (7, 2) witness",
            multiply(w.xi, w.alpha) == multiply(w.alpha, w.xi ** 2),
        )
    )
    entries.append(
        CheckEntry("cube of the twisting unit is the constant", w.alpha ** 3 == 2)
    )
    rng = random.Random(20260816)
    phi = A.tower.phi

    def rand_element():
        comps = [
            CyclotomicNumber(
                A.tower.m, [Fraction(rng.randint(-3, 3)) for _ in range(phi)]
            )
            for _ in range(3)
        ]
        return A.element(*comps)

    ok = True
    for _ in range(bound):
        x, y, z = rand_element(), rand_element(), rand_element()
        if (x * y) * z != x * (y * z):
            ok = False
            break
    entries.append(
        CheckEntry(f"associativity on {bound} random triples", ok, {"triples": bound})
    )
    entries.append(CheckEntry("diagonal class order", order_mod_scalars(w.xi) == 7))
    entries.append(CheckEntry("twisting class order", order_mod_scalars(w.alpha) == 3))
    group, _ = generated_group_mod_scalars([w.xi, w.alpha])
    entries.append(
        CheckEntry(
            "witness classes close to the balanced product of order 21",
            group.order == 21 and is_isomorphic(group, build_semidirect(7, 3, 2)),
            {"order": group.order},
        )
    )
    wc = build_mu3_product_witness(7, 2, 2)
    omega = wc.algebra.embed(wc.algebra.tower.omega())
    entries.append(
        CheckEntry(
            "central unit twists alpha by omega",
            multiply(wc.tau, wc.alpha) == omega * multiply(wc.alpha, wc.tau),
        )
    )
    entries.append(
        CheckEntry(
            "central times diagonal reaches order 21",
            order_mod_scalars(multiply(wc.tau, wc.xi)) == 21,
        )
    )
    cgroup, _ = generated_group_mod_scalars([wc.xi, wc.alpha, wc.tau])
    entries.append(
        CheckEntry(
            "extended witness closes to order 63",
            cgroup.order == 63
            and is_isomorphic(
                cgroup, direct_product(build_cyclic(3), build_semidirect(7, 3, 2))
            ),
            {"order": cgroup.order},
        )
    )
    wh = build_heisenberg_witness()
    hgroup, _ = generated_group_mod_scalars([wh.u, wh.v])
    entries.append(
        CheckEntry(
            "anticommuting cube roots close to mu3 squared",
            hgroup.order == 9 and is_isomorphic(hgroup, elementary_abelian_3(2)),
            {"order": hgroup.order},
        )
    )
    return entries


def _suite_pgl3(bound: int, log) -> list[CheckEntry]:
    log(f"scanning order-3 units up to {bound}")
    units = scan_order3_units(bound)
    entries = [
        CheckEntry(
            f"order-3 units match the mod-3 congruence for primes up to {bound}",
            all(e.verdict for e in units),
            {
                "primes": len(units),
                "with_unit": sum(
                    1 for e in units if e.witness["order3_unit"] is not None
                ),
            },
        )
    ]
    log("scanning 27th-root triples")
    triples = scan_root27_triples()
    entries.append(
        CheckEntry(
            "27th-root ratio relation forces equal cubes",
            all(e.verdict for e in triples),
            {e.case: e.witness for e in triples if isinstance(e.witness, int)},
        )
    )
    for p in (2, 3, 5, 7, 11, 13):
        log(f"scanning diagonal subgroups mod {p}")
        rows = scan_diagonal_subgroups(p)
        by_case = {e.case: e for e in rows}
        entries.append(
            CheckEntry(
                f"diagonal subgroups mod {p} have line-plus-point elements",
                all(e.verdict for e in rows),
                by_case["independent scalar-free diagonal subgroups"].witness,
            )
        )
    return entries


def _cmd_verify(args) -> dict:
    if args.quiet:
        def log(_msg):
            return None
    else:
        def log(msg):
            print(msg, file=sys.stderr)

    suites = ("semidirect", "algebra", "pgl3") if args.suite == "all" else (args.suite,)
    checks: list[CheckEntry] = []
    for name in suites:
        bound = args.bound if args.bound is not None else _SUITE_BOUNDS[name]
        runner = {
            "semidirect": _suite_semidirect,
            "algebra": _suite_algebra,
            "pgl3": _suite_pgl3,
        }[name]
        checks.extend(runner(bound, log))
    return _versioned(
        {
            "suite": args.suite,
            "passed": all(e.verdict for e in checks),
            "checks": [e.to_dict() for e in checks],
        }
    )


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbgroups",
        description="Finite group actions on nontrivial Severi-Brauer surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_order = sub.add_parser("order", help="admissibility of a single element order")
    p_order.add_argument("n", type=int, help="the order to test")
    p_order.set_defaults(handler=_cmd_order)

    p_classify = sub.add_parser("classify", help="verdict for a group or descriptor")
    src = p_classify.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="path to a multiplication table JSON file")
    src.add_argument(
        "--descriptor",
        help="inline descriptor JSON, or a path to a descriptor file",
    )
    p_classify.add_argument(
        "--over-q",
        action="store_true",
        help="ask about actions over the rationals instead",
    )
    p_classify.add_argument(
        "--max-order",
        type=int,
        default=classifier.DEFAULT_MAX_ORDER,
        help="largest group table accepted",
    )
    p_classify.set_defaults(handler=_cmd_classify)

    p_enum = sub.add_parser("enumerate", help="sweep orders or groups up to a bound")
    which = p_enum.add_mutually_exclusive_group(required=True)
    which.add_argument("--orders", type=int, help="list admissible orders up to N")
    which.add_argument("--groups", type=int, help="list realizable groups up to order N")
    p_enum.set_defaults(handler=_cmd_enumerate)

    p_algebra = sub.add_parser("algebra", help="build an explicit algebra witness")
    p_algebra.add_argument("--n", type=int, help="order of the diagonal part")
    p_algebra.add_argument("--d", type=int, help="twist, a cube root of unity mod n")
    p_algebra.add_argument("--a", default="2", help="structure constant (a fraction)")
    p_algebra.add_argument(
        "--b", default="3", help="radicand for --heisenberg (a fraction)"
    )
    p_algebra.add_argument(
        "--with-central-mu3",
        action="store_true",
        help="adjoin a central cube root to the witness",
    )
    p_algebra.add_argument(
        "--heisenberg",
        action="store_true",
        help="build the anticommuting pair of cube roots instead",
    )
    p_algebra.add_argument(
        "--cap", type=int, default=512, help="closure size bound for the class group"
    )
    p_algebra.set_defaults(handler=_cmd_algebra)

    p_verify = sub.add_parser("verify", help="run an arithmetic verification suite")
    p_verify.add_argument(
        "--suite",
        choices=("semidirect", "algebra", "pgl3", "all"),
        required=True,
        help="which checks to run",
    )
    p_verify.add_argument(
        "--bound",
        type=int,
        default=None,
        help="override the suite's sweep bound (modulus / triple count / prime bound)",
    )
    p_verify.add_argument(
        "--quiet", action="store_true", help="suppress progress notes on stderr"
    )
    p_verify.set_defaults(handler=_cmd_verify)

    return parser


def run(argv=None) -> int:
    """Parse argv, execute, print one JSON payload; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        payload = args.handler(args)
    except (CapExceeded, ZeroDivisor) as exc:
        print(_dumps(_versioned({"error": type(exc).__name__, "detail": str(exc)})))
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(_dumps(payload))
    return 0


def main() -> None:
    sys.exit(run())
