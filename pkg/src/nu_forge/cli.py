"""``nu-forge``: build nu(G), report its tensor square, run the identity checks.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__, catalog, lab
from .coset import DEFAULT_CAP, table_to_perms, todd_coxeter
from .errors import InputError, NuForgeError, ResourceLimit
from .finite import FiniteGroupInput, from_permutations, load_cayley_file
from .nu import MAX_GROUP_ORDER, realize_nu
from .perm import load_perm_file
from .permgroup import PermGroup, derived_series, lower_central_series, upper_central_series
from .report import GroupSection, RunReport, section_for
from .words import load_presentation

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("nu_forge")


@dataclass(frozen=True)
class GroupSource:
    kind: str  # group | cayley | perms | presentation
    value: str

    def describe(self) -> str:
        return f"{self.kind}:{self.value}"

    def load(self, cap: int) -> FiniteGroupInput:
        if self.kind == "group":
            return catalog.build(self.value)
        path = Path(self.value)
        if self.kind == "cayley":
            return load_cayley_file(path)
        if self.kind == "perms":
            gens, degree = load_perm_file(path)
            if not gens:
                return catalog.abelian()
            return from_permutations(gens, path.stem)
        pres = load_presentation(path)
        table = todd_coxeter(pres, (), cap)
        return from_permutations(table_to_perms(table), path.stem)


def parse_checks(spec: str | None) -> tuple:
    """Resolve ``--check`` into (families to run, exact ids to keep or None)."""
    if not spec:
        return lab.CHECK_FAMILIES, None
    families, exact = set(), set()
    for item in (s.strip() for s in spec.split(",")):
        if not item:
            continue
        fam = lab.family_of(item)
        if fam not in lab.CHECK_FAMILIES:
            raise InputError(f"unknown check {item!r}; known: {', '.join(lab.CHECK_FAMILIES)}")
        families.add(fam)
        if item != fam:
            exact.add(item)
    if not families:
        raise InputError("empty --check list")
    keep = None
    if exact:
        keep = exact | {f for f in families if not any(lab.family_of(e) == f for e in exact)}
    return tuple(f for f in lab.CHECK_FAMILIES if f in families), keep


def _keep(result, keep) -> bool:
    if keep is None:
        return True
    return result.check_id in keep or lab.family_of(result.check_id) in keep


def _series_of(group: PermGroup, which: str) -> dict:
    fn = {"lcs": lower_central_series, "ucs": upper_central_series, "derived": derived_series}[which]
    return fn(group).as_dict()


def analyze(task) -> GroupSection:
    command, source, opts = task
    start = time.perf_counter()
    g = source.load(opts["cap"])
    r = realize_nu(g, opts["cap"], max_order=opts["max_order"])
    if command == "build":
        return section_for(r, source.describe(), elapsed=time.perf_counter() - start)
    if command == "series":
        which = opts["which"]
        reg = PermGroup(g.regular_perms()[1:], g.order, semiregular=True)
        series = {"which": which, "G": _series_of(reg, which), "nu": _series_of(r.nu, which)}
        return section_for(r, source.describe(), series=series, with_structure=False,
                           elapsed=time.perf_counter() - start)
    results = lab.run_checks(r, opts["families"], seed=opts["seed"], cap=opts["cap"])
    results = [c for c in results if _keep(c, opts["keep"])]
    return section_for(r, source.describe(), checks=results, elapsed=time.perf_counter() - start)


def _safe_analyze(task):
    # exceptions are flattened so they cross process boundaries intact
    try:
        return "ok", analyze(task)
    except ResourceLimit as e:
        return "resource", str(e)
    except (InputError, OSError) as e:
        return "input", str(e)


def run_tasks(tasks, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [_safe_analyze(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_safe_analyze, tasks))


def _sources(args) -> list:
    if getattr(args, "all", False):
        return [GroupSource("group", name) for name in catalog.DEFAULT_CORPUS]
    for kind in ("group", "cayley", "perms", "presentation"):
        value = getattr(args, kind)
        if value is not None:
            return [GroupSource(kind, value)]
    raise InputError("give one of --group, --cayley, --perms, --presentation (or --all)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nu-forge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"nu-forge {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--group", metavar="NAME", help="catalog name, e.g. S3, D8, Q8, C2xC4")
    src.add_argument("--presentation", metavar="FILE", help="finite presentation (gens:/rel: lines)")
    src.add_argument("--cayley", metavar="FILE", help="multiplication table ('order: n' header)")
    src.add_argument("--perms", metavar="FILE", help="permutation generators in cycle notation")
    common.add_argument("--max-cosets", type=int, default=DEFAULT_CAP, metavar="N")
    common.add_argument("--max-order", type=int, default=MAX_GROUP_ORDER, metavar="N",
                        help="largest |G| accepted")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--jobs", type=int, default=1, metavar="N")
    common.add_argument("--seed", type=int, default=0, metavar="N")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock milliseconds (makes output non-reproducible)")
    common.add_argument("-o", "--output", metavar="FILE", help="write the report here")
    common.add_argument("-v", "--verbose", action="store_true")

    b = sub.add_parser("build", parents=[common], help="realize nu(G) and report orders")
    b.add_argument("--all", action="store_true", help="the default corpus")
    v = sub.add_parser("verify", parents=[common], help="run identity checks")
    v.add_argument("--all", action="store_true", help="the default corpus")
    v.add_argument("--check", metavar="ID[,ID...]",
                   help="check families or ids: " + ", ".join(lab.CHECK_FAMILIES))
    s = sub.add_parser("series", parents=[common], help="central and derived series")
    s.add_argument("--all", action="store_true", help="the default corpus")
    s.add_argument("--which", choices=("lcs", "ucs", "derived"), default="lcs")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        sources = _sources(args)
        families, keep = parse_checks(getattr(args, "check", None))
        if args.max_cosets < 1 or args.max_order < 1 or args.jobs < 1:
            raise InputError("--max-cosets, --max-order and --jobs must be positive")
    except InputError as e:
        print(f"nu-forge: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    opts = {"cap": args.max_cosets, "max_order": args.max_order, "seed": args.seed,
            "families": families, "keep": keep, "which": getattr(args, "which", None)}
    outcomes = run_tasks([(args.command, s, opts) for s in sources], args.jobs)
    for status, payload in outcomes:
        if status != "ok":
            print(f"nu-forge: error: {payload}", file=sys.stderr)
            return EXIT_RESOURCE if status == "resource" else EXIT_INPUT
    report = RunReport(args.command, args.seed, [o for _, o in outcomes], timings=args.timings)
    try:
        text = report.to_json() if args.format == "json" else report.to_text()
    except NuForgeError as e:
        print(f"nu-forge: report invariant violated: {e}", file=sys.stderr)
        return EXIT_FAIL
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    first = report.first_failure()
    if first is not None:
        print(f"nu-forge: check failed: {first.group_label}:{first.check_id}: {first.witness}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
