"""Command-line front end: ``simerka <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import arith
from .arith import FactoredRational
from .composition import compose, power
from .factorizer import FactorBudgetExceeded, FactorConfig, factor
from .forms import QForm, reduce
from .lattice import RankDeficient
from .relations import (
    RANDOM_PRODUCTS,
    STRATEGIES,
    OrderPrecondition,
    RelationTimeout,
    class_group,
    collect_relations,
    element_order,
    read_relations,
    write_relations,
)
from .simerka_map import Effort, build_factor_base

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage, which would collide with the budget code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _form(text):
    return QForm.parse(text)


_form.__name__ = "form"


def _positive(text):
    v = int(text)
    if v < 1:
        raise ValueError(text)
    return v


_positive.__name__ = "positive integer"


def form_json(q):
    return [str(x) for x in q]


def rational_json(r: FactoredRational):
    return [[str(p), e] for p, e in r.items()]


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--fb-bound", type=_positive, default=None, help="factor base bound")
    g.add_argument("--scan-bound", type=_positive, default=None, help="representation scan |x|,|y| bound")
    g.add_argument("--power-cap", type=_positive, default=40)
    g.add_argument("--workers", type=_positive, default=1)
    g.add_argument("--max-trials", type=_positive, default=10**6, help="smoothness trial budget")
    g.add_argument("--time-limit", type=float, default=None, help="wall-clock seconds (factor)")
    g.add_argument("--json", action="store_true", help="emit one JSON object")
    g.add_argument("--relations-log", metavar="PATH", help="append relations here; reload on start")
    return p


def build_parser():
    common = _common()
    ap = _Parser(prog="simerka", description="Class groups of binary quadratic forms and factoring.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    p = add("reduce", "reduced form equivalent to FORM")
    p.add_argument("--form", type=_form, required=True)

    p = add("compose", "product of two classes")
    p.add_argument("--form", type=_form, action="append", required=True, help="give twice")

    p = add("pow", "power of a class")
    p.add_argument("--form", type=_form, required=True)
    p.add_argument("--exp", type=int, required=True)

    p = add("order", "exact order of a class")
    p.add_argument("--form", type=_form, required=True)
    p.add_argument("--disc", type=int)
    p.add_argument("--multiple", type=_positive, help="known multiple of the order")
    p.add_argument("--strategy", choices=STRATEGIES, default=RANDOM_PRODUCTS)

    p = add("class", "class group order and elementary divisors")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default=RANDOM_PRODUCTS)

    p = add("relations", "collect one batch of relations")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default=RANDOM_PRODUCTS)
    p.add_argument("--target", type=_positive)

    p = add("factor", "factor a positive integer")
    p.add_argument("n", type=int)
    p.add_argument("--trial-bound", type=_positive, default=1000)

    p = add("carmichael", "Carmichael numbers below a limit")
    p.add_argument("--limit", type=_positive, default=10000)

    p = add("sigma-demo", "squarefree n with sigma(n^3) a square")
    p.add_argument("--prime-bound", type=_positive, default=47)

    p = add("fermat-check", "does K divide the Fermat number F_N?")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--budget", type=_positive, default=arith.FERMAT_STEP_BUDGET, help="squaring budget")
    return ap


def _disc(args):
    d = args.disc
    if d is None:
        return args.form.disc
    if d >= 0 or d % 4 not in (0, 1):
        raise UsageError(f"{d} is not a negative discriminant")
    return d


def _effort(args):
    return Effort(scan_bound=args.scan_bound) if args.scan_bound else None


def _group(args, d):
    base = build_factor_base(d, args.fb_bound)
    log = args.relations_log
    old = read_relations(log, base) if log and os.path.exists(log) else []
    gs, base, rels = class_group(
        d,
        args.fb_bound,
        args.strategy,
        args.seed,
        initial=old,
        power_cap=args.power_cap,
        effort=_effort(args),
        max_trials=args.max_trials,
        workers=args.workers,
    )
    if log:
        write_relations(log, base, rels[len(old):])
    return gs, base, rels


def cmd_reduce(args):
    q = reduce(args.form)
    return {"form": form_json(q)}, str(q)


def cmd_compose(args):
    if len(args.form) != 2:
        raise UsageError("compose needs exactly two --form arguments")
    q = compose(*args.form)
    return {"form": form_json(q)}, str(q)


def cmd_pow(args):
    q = power(args.form, args.exp)
    return {"form": form_json(q)}, str(q)


def cmd_order(args):
    d = _disc(args)
    q = args.form
    if q.disc != d:
        raise ValueError(f"{q} has discriminant {q.disc}, not {d}")
    if args.multiple:
        h = args.multiple
        obj = {}
    else:
        gs, base, _ = _group(args, d)
        h = gs.order_candidate
        obj = {"group_order": str(h), "certificate": gs.certified.value}
    o = element_order(q, h)
    out = {"form": form_json(reduce(q)), "disc": str(d), "order": str(o)}
    out.update(obj)
    return out, str(o)


def cmd_class(args):
    gs, base, rels = _group(args, args.disc)
    obj = {
        "disc": str(args.disc),
        "order": str(gs.order_candidate),
        "elementary_divisors": [str(x) for x in gs.elementary_divisors],
        "certificate": gs.certified.value,
        "primes": [str(p) for p in base.labels],
        "relations": len(rels),
    }
    divs = " x ".join(map(str, gs.elementary_divisors)) or "1"
    text = f"h = {gs.order_candidate}\nstructure = {divs}\ncertificate = {gs.certified.value}"
    return obj, text


def cmd_relations(args):
    base = build_factor_base(args.disc, args.fb_bound)
    rels = collect_relations(
        base,
        args.strategy,
        args.seed,
        args.target,
        power_cap=args.power_cap,
        effort=_effort(args),
        max_trials=args.max_trials,
        workers=args.workers,
    )
    if args.relations_log:
        write_relations(args.relations_log, base, rels)
    recs = [r.to_record(base) for r in rels]
    for rec in recs:
        del rec["disc"], rec["primes"]
    obj = {"disc": str(args.disc), "primes": [str(p) for p in base.labels], "relations": recs}
    text = "\n".join(json.dumps(r.to_record(base)) for r in rels)
    return obj, text


def _factor_text(res):
    parts = [f"{d}^{e}" if e > 1 else str(d) for d, e, _ in res.factors]
    return f"{res.n} = " + " * ".join(parts)


def cmd_factor(args):
    if args.n < 2:
        raise ValueError("n must be >= 2")
    cfg = FactorConfig(
        trial_bound=args.trial_bound,
        fb_bound=args.fb_bound,
        seed=args.seed,
        scan_bound=args.scan_bound or 10,
        power_cap=args.power_cap,
        max_trials=args.max_trials,
        workers=args.workers,
        time_limit=args.time_limit,
    )
    res = factor(args.n, cfg)
    return res.to_record(), _factor_text(res)


def cmd_carmichael(args):
    found = arith.carmichael_scan(args.limit)
    return {"limit": args.limit, "carmichael": found}, "\n".join(map(str, found))


def cmd_sigma_demo(args):
    found = arith.sigma_cube_square_search(args.prime_bound)
    rows, lines = [], []
    for n in found:
        s = arith.sigma(n**3)
        r = arith.integer_root(s, 2)
        rows.append({"n": str(n), "sigma_n3": str(s), "root": str(r)})
        lines.append(f"{n}  sigma(n^3) = {s} = {r}^2")
    return {"prime_bound": args.prime_bound, "solutions": rows}, "\n".join(lines)


def cmd_fermat_check(args):
    if args.k < 2 or args.n < 0:
        raise UsageError("need k >= 2 and n >= 0")
    ok = arith.fermat_number_divisible(args.k, args.n, args.budget)
    return {"k": str(args.k), "n": args.n, "divides": ok}, "true" if ok else "false"


COMMANDS = {
    "reduce": cmd_reduce,
    "compose": cmd_compose,
    "pow": cmd_pow,
    "order": cmd_order,
    "class": cmd_class,
    "relations": cmd_relations,
    "factor": cmd_factor,
    "carmichael": cmd_carmichael,
    "sigma-demo": cmd_sigma_demo,
    "fermat-check": cmd_fermat_check,
}


def _emit(args, obj, text, out):
    if args.json:
        out.write(json.dumps(obj) + "\n")
    elif text:
        out.write(text + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code
    if args.workers > 1:
        err.write("note: with --workers > 1 the output is not reproducible run to run\n")
    try:
        obj, text = COMMANDS[args.command](args)
    except UsageError as e:
        err.write(f"simerka {args.command}: usage error: {e}\n")
        return EXIT_USAGE
    except FactorBudgetExceeded as e:
        _emit(args, e.result.to_record(), _factor_text(e.result), out)
        err.write(f"simerka: budget exhausted: {e}\n")
        return EXIT_BUDGET
    except (arith.BudgetExceeded, RelationTimeout) as e:
        err.write(f"simerka: budget exhausted: {e}\n")
        return EXIT_BUDGET
    except (ValueError, ArithmeticError, OrderPrecondition, RankDeficient) as e:
        err.write(f"simerka {args.command}: error: {e}\n")
        return EXIT_DOMAIN
    _emit(args, obj, text, out)
    return EXIT_OK


def main():
    sys.exit(run())
