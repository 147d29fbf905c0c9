"""Command-line driver.  Exit codes: 0 pass, 1 check failure, 2 usage or parse error."""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def _load_complex(args):
    from .fixtures import fixture_nerve
    from .textio import parse_complex, parse_presentation
    from .category import category_nerve
    if getattr(args, "category", None):
        pres = parse_presentation(args.category)
        return category_nerve(pres.materialize(args.word_bound), args.top_dim)
    if getattr(args, "fixture", None):
        return fixture_nerve(args.fixture, args.top_dim)
    if not args.input:
        raise _Usage("give an input complex, --category or --fixture")
    return parse_complex(args.input)


class _Usage(Exception):
    pass


# -- subcommands --------------------------------------------------------------------

def cmd_sd(args) -> int:
    from .subdivision import sd_nonsingular, sd_simplex
    from .textio import dump_complex, parse_complex
    if args.input:
        X = sd_nonsingular(parse_complex(args.input), args.margin)
    elif args.n is not None:
        X = sd_simplex(args.n, args.margin)
    else:
        raise _Usage("give --n or an input complex")
    if args.emit:
        sys.stdout.write(dump_complex(X))
        return EXIT_PASS
    lines = [f"top_dim {X.top_dim}"]
    lines += [f"dim {n} count {X.count(n)}" for n in range(X.top_dim + 1)]
    lines += [f"nondegenerate {n} {c}" for n, c in enumerate(X.nondegenerate_counts())]
    _emit(lines)
    return EXIT_PASS


def cmd_ex(args) -> int:
    from .category import isomorphism_edges
    from .ex import MarkedEdgeSet, ex_eq_level, ex_level, m_image
    X = _load_complex(args)
    lines = []
    if args.equiv == "none":
        counts = [len(ex_level(X, k)) for k in range(args.level + 1)]
        lines += [f"ex {k} count {c}" for k, c in enumerate(counts)]
        _emit(lines)
        return EXIT_PASS
    if args.equiv == "isos":
        if getattr(X, "category", None) is None:
            raise _Usage("--equiv isos needs a category input")
        marked = MarkedEdgeSet(X, isomorphism_edges(X))
    elif args.equiv == "all":
        marked = MarkedEdgeSet.all_edges(X)
    else:
        marked = MarkedEdgeSet.degenerate_only(X)
    ok = True
    for k in range(args.level + 1):
        level = ex_eq_level(X, k, marked)
        lines.append(f"ex_eq {k} count {len(level)}")
        if X.is_simplicial:
            members = {f.images for f in level}
            images = [m_image(X, k, s).images for s in range(X.count(k)) if not X.is_degenerate(k, s)]
            inj = len(set(images)) == len(images)
            lands = all(i in members for i in images)
            lines.append(f"m {k} injective {int(inj)} lands {int(lands)}")
            ok = ok and inj and lands
    lines.append(f"result {'PASS' if ok else 'FAIL'}")
    _emit(lines)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_check_kan(args) -> int:
    from .kan import check_inner_kan, check_kan
    X = _load_complex(args)
    check = check_inner_kan if args.inner_only else check_kan
    report = check(X, args.max_n, budget=args.budget, witnesses=args.witnesses)
    if args.machine:
        _emit(report.machine_lines())
    else:
        print(report.text())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_localize(args) -> int:
    from .category import ClosureError
    from .localization import localize_category
    from .textio import describe_category, dump_presentation, parse_presentation
    pres = parse_presentation(args.input)
    names = [n for n in (args.invert or "").split(",") if n]
    known = {a[0] for a in pres.arrows}
    unknown = [n for n in names if n not in known]
    if unknown:
        raise _Usage(f"unknown arrows: {', '.join(unknown)}")
    loc = localize_category(pres, names)
    if args.emit:
        sys.stdout.write(dump_presentation(loc))
        return EXIT_PASS
    try:
        C = loc.materialize(args.word_bound)
    except ClosureError as exc:
        print(f"error {exc}")
        return EXIT_FAIL
    sys.stdout.write(describe_category(C))
    iso = C.isomorphisms()
    inverted = all(C.generator_names[n] in iso for n in names)
    print(f"inverted {int(inverted)}")
    return EXIT_PASS if inverted else EXIT_FAIL


def cmd_max_localization(args) -> int:
    from .localization import max_localization_report, small_category_grid
    from .textio import parse_presentation
    if args.grid:
        cats = small_category_grid()
        sizes = range(1, args.max_size + 1)
    else:
        if not args.input:
            raise _Usage("give a category file or --grid")
        cats = [parse_presentation(args.input).materialize(args.word_bound)]
        sizes = [len(args.I.split(","))]
    lines, ok = [], True
    for idx, C in enumerate(cats):
        for size in sizes:
            r = max_localization_report(list(range(size)), C)
            ok = ok and r.equivalence
            lines.append(f"case {idx} size {size} plain {r.n_plain} inverting {r.n_inverting} "
                         f"equivalence {int(r.equivalence)} bijective {int(r.bijective)}")
    lines.append(f"cases {len(lines)}")
    lines.append(f"result {'PASS' if ok else 'FAIL'}")
    _emit(lines)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_collar(args) -> int:
    from .collar import parse_chain, verify_coherence
    try:
        chain = parse_chain(args.chain)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    report = verify_coherence(chain, args.samples, args.steps, args.tol, args.seed)
    _emit(report.lines())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_movie(args) -> int:
    from .forms import liouville_field, movie_chart, movie_form, parse_form, verify_movie_field_formula
    from .poly import parse_poly
    h = parse_poly(args.h)
    lam = parse_form(args.lam)
    chart = movie_chart(lam, h)
    form = movie_form(lam, h, chart)
    v = liouville_field(form, chart)
    ok = verify_movie_field_formula(h, lam, chart)
    if args.machine:
        lines = [f"form {form.sexpr()}"]
        lines += [f"field {k} {c}" for k, c in v.ordered(chart)]
    else:
        lines = [f"lambda = {form.human()}", f"v = {v.human(chart)}"]
    lines.append(f"result {'PASS' if ok else 'FAIL'}")
    _emit(lines)
    return EXIT_PASS if ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .category import WORD_BOUND
    from .kan import HORN_BUDGET

    p = _Parser(prog="simpkit", description="Finite simplicial computations and checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source(sp, top_dim=3):
        sp.add_argument("input", nargs="?", help="complex in sset/ssset format")
        sp.add_argument("--category", help="use the nerve of a category presentation file")
        sp.add_argument("--fixture", help="use the nerve of a shipped category fixture")
        sp.add_argument("--top-dim", type=int, default=top_dim, help="truncation of the nerve")
        sp.add_argument("--word-bound", type=int, default=WORD_BOUND)

    def machine(sp):
        sp.add_argument("--machine", action="store_true", help="flat 'key value' output")
        sp.add_argument("--seed", type=int, default=0, help="seed for any randomized sampling")

    sp = sub.add_parser("sd", help="barycentric subdivision")
    sp.add_argument("input", nargs="?", help="non-singular complex to subdivide")
    sp.add_argument("--n", type=int, help="subdivide the standard n-simplex")
    sp.add_argument("--margin", type=int, default=0, help="extra truncation dimensions")
    sp.add_argument("--emit", action="store_true", help="print the subdivision in sset format")
    machine(sp)
    sp.set_defaults(func=cmd_sd)

    sp = sub.add_parser("ex", help="count Ex / Ex_eq simplices and check the max map")
    source(sp)
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("--equiv", choices=("none", "degenerate", "isos", "all"), default="isos")
    machine(sp)
    sp.set_defaults(func=cmd_ex)

    sp = sub.add_parser("check-kan", help="horn filling report")
    source(sp)
    sp.add_argument("--max-n", type=int, default=3)
    sp.add_argument("--inner-only", action="store_true")
    sp.add_argument("--budget", type=int, default=HORN_BUDGET)
    sp.add_argument("--witnesses", type=int, default=3)
    machine(sp)
    sp.set_defaults(func=cmd_check_kan)

    sp = sub.add_parser("localize", help="adjoin inverses to a presented category")
    sp.add_argument("input", help="category presentation file")
    sp.add_argument("--invert", default="", help="comma-separated arrow names")
    sp.add_argument("--word-bound", type=int, default=WORD_BOUND)
    sp.add_argument("--emit", action="store_true", help="print the presentation instead of the closure")
    machine(sp)
    sp.set_defaults(func=cmd_localize)

    sp = sub.add_parser("verify-max-localization", help="restriction along max as an equivalence")
    sp.add_argument("input", nargs="?", help="category presentation file")
    sp.add_argument("--I", default="0,1", help="comma-separated linear order")
    sp.add_argument("--grid", action="store_true", help="run the full small-category grid")
    sp.add_argument("--max-size", type=int, default=3, help="largest |I| on the grid")
    sp.add_argument("--word-bound", type=int, default=WORD_BOUND)
    machine(sp)
    sp.set_defaults(func=cmd_max_localization)

    sp = sub.add_parser("collar-verify", help="coherence of flowed collars")
    sp.add_argument("--chain", default="0;0,1;0,1,2")
    sp.add_argument("--samples", type=int, default=256)
    sp.add_argument("--steps", type=int, default=256)
    sp.add_argument("--tol", type=float, default=1e-6)
    machine(sp)
    sp.set_defaults(func=cmd_collar)

    sp = sub.add_parser("movie-verify", help="Liouville field of a movie form")
    sp.add_argument("--h", required=True, help="polynomial in q, p, s, sigma (indexed copies allowed)")
    sp.add_argument("--lambda", dest="lam", default="p dq", help="Liouville form on M")
    machine(sp)
    sp.set_defaults(func=cmd_movie)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    from .category import CategoryError
    from .forms import FormError
    from .poly import PolyParseError
    from .sset import TruncationError
    from .textio import ParseError, ValidationFailed

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailed as exc:
        print(str(exc))
        return EXIT_FAIL
    except (ParseError, PolyParseError, FormError, CategoryError, TruncationError, _Usage, OSError) as exc:
        print(f"simpkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
