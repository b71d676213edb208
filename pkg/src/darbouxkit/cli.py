"""Command-line front end.

Exit status 0 means every check passed, 1 that a mathematical check failed
(the report lists residues), 2 that the input was malformed.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Optional, Sequence

from . import acceptance
from .algebra import Element
from .cdga import cotangent_restriction, is_minimal_at, parse_point
from .darboux import check_master, generate
from .dcrit import verify_comparison
from .errors import CheckFailed, ShapeError
from .forms import check_closed, is_nondegenerate_at, is_strictly_nondegenerate
from .hamilton import check_poisson_axioms, extract_hamiltonian, solver_for
from .modelfile import dump, dumps, load, package_model
from .random_models import random_element
from .scalars import format_scalar


class Report:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.failed = False

    def add(self, line: str) -> None:
        self.lines.append(line)

    def residues(self, res: dict) -> None:
        for k, v in res.items():
            self.add(f"residue {k}: {v}")

    def verdict(self, ok: bool, what: str) -> None:
        self.failed |= not ok
        self.add(f"{what}: {'pass' if ok else 'fail'}")


def _matrix(m: list) -> str:
    return "[" + "; ".join(", ".join(str(e) if isinstance(e, Element) else format_scalar(e) for e in row) for row in m) + "]"


# ------------------------------------------------------------------ verbs


def cmd_gen(args, rep: Report) -> None:
    model = load(args.spec)
    pkg = generate(model.darboux())
    out = package_model(pkg)
    if args.out:
        dump(out, args.out)
        rep.add(f"generated k={pkg.k} {pkg.spec.family} model with {pkg.cdga.sig.n_alg} generators -> {args.out}")
    else:
        rep.add(dumps(out).rstrip("\n"))


def cmd_check(args, rep: Report) -> None:
    if args.what == "master":
        ok, res, note = check_master(load(args.spec).darboux())
        rep.verdict(ok, "master equation")
        if not ok:
            rep.add(f"residue master: {res}")
        if note:
            rep.add(f"note: {note}")
        return
    model = load(args.model)
    a = model.cdga(validate=False)
    if args.what == "d2":
        res = a.square_zero_residues()
        rep.verdict(not res, "d o d = 0")
        rep.residues({f"d d {k}": v for k, v in res.items()})
    elif args.what == "closed":
        ok, res = check_closed(a, model.closed(a.sig))
        rep.verdict(ok, "closed")
        rep.residues(res)
    elif args.what == "nondeg":
        omega = model.closed(a.sig)
        if args.at:
            ok, res = is_nondegenerate_at(a, omega, parse_point(a.sig, args.at))
            rep.verdict(ok, f"nondegenerate at {args.at}")
        else:
            ok, res = is_strictly_nondegenerate(a, omega)
            rep.verdict(ok, "strictly nondegenerate")
        for k, v in res.items():
            rep.add(f"{k}: {v}")


def cmd_cotangent(args, rep: Report) -> None:
    model = load(args.model)
    a = model.cdga(validate=False)
    cr = cotangent_restriction(a)
    mats = cr.at(parse_point(a.sig, args.at)) if args.at else cr.matrices
    rep.add(f"ranks: {cr.ranks}")
    for k in sorted(mats):
        rep.add(f"d^{-k}: rows {cr.rows[k]} cols {cr.cols[k]} {_matrix(mats[k])}")


def cmd_minimal(args, rep: Report) -> None:
    model = load(args.model)
    a = model.cdga(validate=False)
    ok, bad = is_minimal_at(a, parse_point(a.sig, args.at))
    rep.verdict(ok, f"minimal at {args.at}")
    for k, r, c, v in bad:
        rep.add(f"residue d^{-k}[{r}, {c}]: {format_scalar(v)}")


def cmd_bracket(args, rep: Report) -> None:
    model = load(args.model)
    a = model.cdga(validate=False)
    solver = solver_for(a, model.closed(a.sig))
    f, g = a.sig.parse(args.f), a.sig.parse(args.g)
    rep.add(f"{{f, g}} = {solver.bracket(f, g)}")


def cmd_axioms(args, rep: Report) -> None:
    model = load(args.model)
    a = model.cdga(validate=False)
    solver = solver_for(a, model.closed(a.sig))
    rng = random.Random(args.seed)
    triples = [tuple(random_element(a.sig, rng, max_terms=2, max_base_exp=1, max_factors=2) for _ in range(3))
               for _ in range(args.samples)]
    ok, fails = check_poisson_axioms(solver, triples)
    rep.verdict(ok, f"Poisson axioms on {args.samples} triples (seed {args.seed})")
    for t, name, r in fails:
        rep.add(f"residue triple {t} {name}: {r}")


def cmd_extract(args, rep: Report) -> None:
    model = load(args.model)
    a = model.cdga(validate=False)
    hp = extract_hamiltonian(a, model.closed(a.sig), model.pair(a.sig))
    rep.add(f"H = {hp.H}")
    for k, v in hp.report.items():
        rep.add(f"{k}: {v}")


def cmd_overlap(args, rep: Report) -> None:
    r = verify_comparison(load(args.cert).certificate())
    rep.failed |= not r.ok
    for line in r.lines():
        rep.add(line)


def cmd_selftest(args, rep: Report) -> None:
    text = acceptance.report(args.seed)
    again = acceptance.report(args.seed)
    same = text == again
    for line in text.rstrip("\n").split("\n"):
        rep.add(line)
    rep.add(f"criterion 9 [{'PASS' if same else 'FAIL'}] determinism: repeated run byte-identical")
    rep.failed |= not same or "[FAIL]" in text


# ---------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="darbouxkit", description="Exact checks for shifted symplectic Darboux models.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("gen-darboux", help="generate a full model from a darboux_spec section")
    s.add_argument("--spec", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check", help="run one check")
    s.add_argument("what", choices=["master", "closed", "nondeg", "d2"])
    s.add_argument("--spec")
    s.add_argument("--model")
    s.add_argument("--at")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("cotangent", help="cotangent complex restricted to the base")
    s.add_argument("--model", required=True)
    s.add_argument("--at")
    s.set_defaults(func=cmd_cotangent)

    s = sub.add_parser("minimal-at", help="minimality at a point")
    s.add_argument("--model", required=True)
    s.add_argument("--at", required=True)
    s.set_defaults(func=cmd_minimal)

    s = sub.add_parser("bracket", help="shifted Poisson bracket")
    s.add_argument("--model", required=True)
    s.add_argument("-f", required=True)
    s.add_argument("-g", required=True)
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("axioms", help="Poisson axioms on random triples")
    s.add_argument("--model", required=True)
    s.add_argument("--samples", type=int, default=30)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("extract-h", help="recover H from the (Phi, phi) pair")
    s.add_argument("--model", required=True)
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("verify-overlap", help="verify a comparison certificate")
    s.add_argument("--cert", required=True)
    s.set_defaults(func=cmd_overlap)

    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def _check_args(args) -> None:
    if args.verb == "check":
        if args.what == "master" and not args.spec:
            raise ShapeError("check master needs --spec")
        if args.what != "master" and not args.model:
            raise ShapeError(f"check {args.what} needs --model")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    rep = Report()
    try:
        _check_args(args)
        args.func(args, rep)
    except ShapeError as exc:
        for line in rep.lines:
            print(line)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        rep.failed = True
        rep.add(f"check failed: {exc}")
        rep.residues(exc.residues or {})
    for line in rep.lines:
        print(line)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
