"""Command-line front end.

Exit status: 0 when every check passes, 1 when checks ran and something
failed (the report says what), 2 for unreadable input or bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import banach
from ._parallel import default_workers
from .errors import HomotopicalError, ParseError
from .fincat import FinCategory, category_to_dict, dumps, load_category, read_json, validate_category
from .homotopy import homotopy_classes, verify_congruence
from .hstruct import HomotopicalStructure, check_axioms, load_structure
from .instances import DEFAULT_BUDGET, gen_groupoid_cylinder, gen_trivial, load_groupoid
from .quotient import homotopy_equivalences, is_contractible, quotient_category


class UsageError(HomotopicalError):
    pass


def _write(path: str | None, payload: dict) -> None:
    if path:
        Path(path).write_text(dumps(payload), encoding="utf-8")


def _load_valid(path: str) -> FinCategory:
    cat = load_category(path)
    rep = validate_category(cat)
    if not rep.ok:
        v = rep.violations[0]
        raise ParseError(f"{path}: category violates {v.rule}: {v.message} ({len(rep.violations)} violation(s))")
    return cat


def _load_pair(args) -> tuple[FinCategory, HomotopicalStructure]:
    cat = _load_valid(args.cat)
    hs = load_structure(args.hs)
    try:
        hs.check(cat)
    except HomotopicalError as exc:
        raise ParseError(f"{args.hs}: {exc}") from None
    return cat, hs


def _matrix(path: str) -> np.ndarray:
    data = read_json(path)
    try:
        m = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{path}: expected a JSON array of numeric rows") from None
    if m.ndim != 2:
        raise ParseError(f"{path}: expected a 2-D array of arrays, got {m.ndim} dimension(s)")
    return m


def cmd_validate(args) -> int:
    cat = load_category(args.cat)
    rep = validate_category(cat)
    _write(args.report, rep.to_dict())
    print(f"{args.cat}: {len(cat.objects)} objects, {len(cat.morphisms)} morphisms: "
          + ("ok" if rep.ok else f"{len(rep.violations)} violation(s)"))
    for v in rep.violations[:20]:
        print(f"  {v.rule}: {v.message}")
    return 0 if rep.ok else 1


def cmd_axioms(args) -> int:
    cat, hs = _load_pair(args)
    rep = check_axioms(cat, hs, workers=args.workers)
    payload = {"axioms": rep.to_dict()}
    for a, ok in rep.status.items():
        n_cex = len(rep.counterexamples.get(a, []))
        print(f"axiom {a}: {'pass' if ok else f'FAIL ({n_cex} counterexample(s))'}")
        for c in rep.counterexamples.get(a, [])[:5]:
            print(f"  counterexample: {c if isinstance(c, str) else ', '.join(c)}")
    ok = rep.passed
    if args.congruence:
        cong = verify_congruence(cat, hs, rep, workers=args.workers)
        payload["congruence"] = cong.to_dict()
        n = sum(c.checked for c in cong.compatibility)
        print(f"congruence: {'pass' if cong.passed else 'FAIL'} ({len(cong.hom_sets)} hom-sets, {n} compatibility configurations)")
        ok = ok and cong.passed
    _write(args.report, payload)
    return 0 if ok else 1


def cmd_classes(args) -> int:
    cat, hs = _load_pair(args)
    if args.hom:
        keys = [tuple(args.hom)]
    else:
        keys = [(x, y) for x in hs.base for y in cat.objects]
    parts = [homotopy_classes(cat, hs, x, y) for x, y in keys]
    _write(args.report, {"partitions": [p.to_dict() for p in parts]})
    ok = True
    for p in parts:
        print(f"C({p.key[0]},{p.key[1]}): {len(p.classes)} class(es) over {sum(map(len, p.classes))} morphism(s)"
              + ("" if p.is_equivalence else f"; {len(p.discrepancies)} discrepancy(ies)"))
        ok &= p.is_equivalence
    return 0 if ok else 1


def cmd_quotient(args) -> int:
    cat, hs = _load_pair(args)
    cong = verify_congruence(cat, hs, workers=args.workers)
    if not cong.passed:
        print("congruence check failed; no quotient written")
        _write(args.report, {"congruence": cong.to_dict()})
        return 1
    q = quotient_category(cat, hs, cong)
    Path(args.output).write_text(dumps(category_to_dict(q.category)), encoding="utf-8")
    _write(args.report, {"class_map": q.class_map})
    print(f"quotient: {len(q.category.objects)} objects, {len(q.category.morphisms)} morphisms -> {args.output}")
    return 0


def cmd_equiv(args) -> int:
    cat, hs = _load_pair(args)
    pairs = homotopy_equivalences(cat, hs, args.x, args.y)
    _write(args.report, {"x": args.x, "y": args.y, "pairs": [p.to_dict() for p in pairs]})
    print(f"{args.x} ~ {args.y}: {len(pairs)} homotopy equivalence pair(s)")
    return 0 if pairs else 1


def cmd_contractible(args) -> int:
    cat, hs = _load_pair(args)
    res = is_contractible(cat, hs, args.x, args.zero)
    _write(args.report, {"x": args.x, "zero": args.zero, "contractible": res.contractible,
                         "pair": res.pair.to_dict() if res.pair else None})
    print(f"{args.x} contractible (to {args.zero}): {'yes' if res.contractible else 'no'}")
    return 0 if res.contractible else 1


def cmd_gen(args) -> int:
    if args.kind == "trivial":
        if len(args.inputs) != 1:
            raise UsageError("gen trivial takes exactly one category file")
        bundle = gen_trivial(_load_valid(args.inputs[0]))
    else:
        if not args.inputs:
            raise UsageError("gen grpd-cylinder needs at least one groupoid file")
        bundle = gen_groupoid_cylinder([load_groupoid(p) for p in args.inputs], args.budget)
    Path(f"{args.output}.cat.json").write_text(dumps(category_to_dict(bundle.cat)), encoding="utf-8")
    Path(f"{args.output}.hs.json").write_text(dumps(bundle.hs.to_dict()), encoding="utf-8")
    print(f"{bundle.provenance['generator']}: {len(bundle.cat.objects)} objects, {len(bundle.cat.morphisms)} morphisms "
          f"-> {args.output}.cat.json, {args.output}.hs.json")
    return 0


def cmd_banach(args) -> int:
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    if args.action == "axioms":
        try:
            dims = [int(d) for d in args.dims.split(",") if d.strip()]
        except ValueError:
            raise UsageError(f"--dims expects comma-separated integers, got {args.dims!r}") from None
        rep = banach.check_axioms_numeric(dims, args.tol, seed=args.seed)
        _write(args.report, rep.to_dict())
        for a, ok in rep.status.items():
            worst = max(rep.residuals[a].values(), default=0.0)
            print(f"axiom {a}: {'pass' if ok else 'FAIL'} (max residual {worst:.3e})")
        return 0 if rep.passed else 1
    if args.action == "homotopic":
        if len(args.inputs) != 2:
            raise UsageError("banach homotopic takes two matrix files U V")
        U, V = (_matrix(p) for p in args.inputs)
        if U.shape != V.shape:
            raise UsageError(f"U {U.shape} and V {V.shape} differ in shape")
        phi = _matrix(args.phi) if args.phi else np.eye(U.shape[1])
        W = banach.factor_through_bidual(U, V, phi, args.tol)
        payload = {"homotopic": W is not None}
        if W is not None:
            H = banach.homotopy_from_factor(V, W)
            payload.update({"W": W.tolist(), "H": H.tolist()})
        _write(args.report, payload)
        print(f"U ~ V: {'yes' if W is not None else 'no'}")
        return 0 if W is not None else 1
    if args.phi:
        phi = _matrix(args.phi)
    elif args.dim is not None:
        phi = np.eye(args.dim)
    else:
        raise UsageError("banach contractible needs --phi FILE or --dim N")
    res = banach.contractibility_projector(phi)
    payload = {"contractible": res is not None}
    if res is not None:
        payload.update({"W": res[0].tolist(), "P": res[1].tolist()})
    _write(args.report, payload)
    print(f"contractible: {'yes' if res is not None else 'no'}")
    return 0 if res is not None else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homotopical", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pair=True):
        if pair:
            p.add_argument("cat", help="category JSON file")
            p.add_argument("hs", help="structure JSON file")
        p.add_argument("--report", metavar="PATH", help="write the JSON report here")
        p.add_argument("--workers", type=int, default=default_workers(), help="parallel workers (default: CPU count)")

    p = sub.add_parser("validate", help="check the category laws")
    p.add_argument("cat")
    common(p, pair=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("axioms", help="check axioms I-IV of a structure")
    common(p)
    p.add_argument("--congruence", action="store_true", help="also certify the congruence property")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("classes", help="homotopy classes of base-domain hom-sets")
    common(p)
    p.add_argument("--hom", nargs=2, metavar=("X", "Y"), help="restrict to C(X, Y)")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("quotient", help="write the quotient category on the base objects")
    common(p)
    p.add_argument("-o", "--output", required=True, metavar="PATH")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("equiv", help="homotopy equivalences between two base objects")
    common(p)
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("contractible", help="is X homotopy equivalent to the point object Z")
    common(p)
    p.add_argument("x")
    p.add_argument("zero", metavar="Z")
    p.set_defaults(func=cmd_contractible)

    p = sub.add_parser("gen", help="generate an instance (category + structure)")
    p.add_argument("kind", choices=["trivial", "grpd-cylinder"])
    p.add_argument("inputs", nargs="+", help="category file (trivial) or groupoid files (grpd-cylinder)")
    p.add_argument("-o", "--output", required=True, metavar="PREFIX", help="writes PREFIX.cat.json and PREFIX.hs.json")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max functors per hom-set")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("banach", help="finite-dimensional matrix model")
    p.add_argument("action", choices=["axioms", "homotopic", "contractible"])
    p.add_argument("inputs", nargs="*", help="matrix files U V for 'homotopic'")
    p.add_argument("--dims", default="1,2,3")
    p.add_argument("--tol", type=float, default=banach.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi", metavar="FILE", help="canonical map as a JSON matrix (default: identity)")
    p.add_argument("--dim", type=int)
    p.add_argument("--report", metavar="PATH")
    p.set_defaults(func=cmd_banach)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", 1) <= 0:
        parser.error("--budget must be positive")
    if getattr(args, "workers", 1) <= 0:
        parser.error("--workers must be positive")
    try:
        return args.func(args)
    except (HomotopicalError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
