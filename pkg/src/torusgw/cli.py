"""Command-line entry point: ``torusgw <subcommand> ...``.

Every run writes a JSON report (to ``--output`` or stdout).  Large
certificates go to separate files in the directory named by the
``TORUSGW_CERT_DIR`` environment variable (default ``./torusgw-certificates``)
and are referenced from the report by file name.

Exit codes: 0 all checks pass, 1 some check failed, 2 inconclusive only,
3 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import tempfile
import time
from itertools import product
from typing import Dict, List, Optional

from . import __version__
from .abelian import KaroubiHalt, karoubi_replay, lim_lim1, mittag_leffler
from .completion import (
    Schedule,
    adic_tower,
    borel_tower,
    cofinality_report,
    karoubi_stage,
    theorem36_pi0_report,
)
from .hermitian import (
    PRESETS,
    CoefficientTheory,
    TheoryError,
    forgetful,
    g0_section,
    hyperbolic,
    preset,
)
from .ideal_engine import (
    augmentation_ideal,
    find_power_inclusion,
    hermitian_generators,
    hermitian_ideal,
    lemma27_decompose,
    symmetric_basis,
)
from .torus_ring import (
    LaurentElement,
    ParseError,
    PresentedElement,
    format_element,
    parse_element,
    reduced_monomials,
    to_laurent,
    to_presented,
)

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3
CERT_ENV = "TORUSGW_CERT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class Reporter:
    def __init__(self, argv: List[str], args: argparse.Namespace):
        self.checks: List[Dict] = []
        self.cert_dir = os.environ.get(CERT_ENV, "torusgw-certificates")
        self.invocation = {"argv": list(argv), "seed": args.seed, "version": __version__,
                           "cert_dir_env": CERT_ENV}
        self.defaults: Dict = {}

    def certificate(self, name: str, payload) -> str:
        text = json.dumps(payload, indent=1, sort_keys=True)
        digest = hashlib.sha256(text.encode()).hexdigest()[:12]
        fname = f"{name}-{digest}.json"
        os.makedirs(self.cert_dir, exist_ok=True)
        _atomic_write(os.path.join(self.cert_dir, fname), text)
        return fname

    def check(self, name: str, verdict: str, started: float, cert=None, **details):
        rec = {"name": name, "verdict": verdict, "seconds": round(time.perf_counter() - started, 3)}
        if cert is not None:
            rec["certificate"] = self.certificate(name.replace(" ", "_").replace("/", "_"), cert)
        rec.update(details)
        self.checks.append(rec)

    def overall(self) -> str:
        verdicts = {c["verdict"] for c in self.checks}
        if "fail" in verdicts:
            return "fail"
        if "inconclusive" in verdicts:
            return "inconclusive"
        return "pass" if self.checks else "inconclusive"

    def report(self) -> Dict:
        return {"invocation": self.invocation, "defaults": self.defaults,
                "checks": self.checks, "overall": self.overall()}


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _theory(name: str) -> CoefficientTheory:
    if name in PRESETS:
        return preset(name)
    if os.path.exists(name):
        return CoefficientTheory.load(name)
    raise UsageError(f"unknown theory {name!r}: use one of {sorted(PRESETS)} or a JSON config path")


# ---------------------------------------------------------------------------
# subcommands

def cmd_lemma27(args, rep: Reporter):
    t, k = args.rank, args.max_entry
    started = time.perf_counter()
    gens = hermitian_generators(t)
    rep.check("generator count", "pass" if len(gens) == 2 ** t - 1 else "fail", started,
              count=len(gens), expected=2 ** t - 1)
    started = time.perf_counter()
    done, witnesses = 0, []
    for lam in product(range(k + 1), repeat=t):
        for mu in product(range(k + 1), repeat=t):
            if not any(lam + mu) or any(a and b for a, b in zip(lam, mu)) or (lam, mu) < (mu, lam):
                continue
            w = lemma27_decompose(lam, mu)
            done += 1
            witnesses.append({"lam": list(lam), "mu": list(mu), **w.to_json()})
    rep.check("lemma27 witnesses", "pass", started, cert=witnesses, pairs=done)


def cmd_lemma26(args, rep: Reporter):
    T = _theory(args.theory)
    t, d = args.rank, args.degree
    started = time.perf_counter()
    bad = []
    basis = symmetric_basis(t, d)
    for p in basis:
        s = p.element()
        if to_presented(forgetful(g0_section(s, T))) != s:
            bad.append(format_element(s))
    rep.check("F0 o G0 = id on symmetric basis", "fail" if bad else "pass", started,
              checked=len(basis), failures=bad[:10])
    started = time.perf_counter()
    rng = random.Random(args.seed)
    spanning = [hyperbolic(PresentedElement(t, {m: 1}), T) for m in reduced_monomials(t, d) if any(m[0] + m[1])]
    samples = list(spanning)
    for _ in range(args.samples):
        a = spanning[0].scale(0)
        for h in rng.sample(spanning, min(3, len(spanning))):
            a = a + h.scale(rng.randint(-3, 3))
        samples.append(a)
    bad = [repr(a) for a in samples if g0_section(to_presented(forgetful(a)), T) != a]
    rep.check("G0 o F0 = id on IO", "fail" if bad else "pass", started,
              checked=len(samples), failures=bad[:10])


def cmd_filtration(args, rep: Reporter):
    started = time.perf_counter()
    res = find_power_inclusion(augmentation_ideal(args.rank), hermitian_ideal(args.rank), args.c_max, args.degree)
    if res:
        rep.check("power inclusion I^c in I+R", "pass", started, cert=res.to_json(), c=res.c)
    else:
        rep.check("power inclusion I^c in I+R", "inconclusive", started, detail=res.to_json())


def cmd_complete(args, rep: Reporter):
    sched = Schedule(ceiling=args.ceiling)
    rep.defaults["schedule"] = {"start": "n + 2*max generator degree", "step": sched.step, "ceiling": sched.ceiling}
    started = time.perf_counter()
    tw = adic_tower(args.model, augmentation_ideal(args.rank), args.stages, sched)
    ranks = tw.ranks()
    verdict = "pass" if tw.stabilized else "inconclusive"
    expected = None
    if args.rank == 1:
        expected = [(n, ()) for n in range(1, args.stages + 1)]
        if tw.stabilized and ranks != expected:
            verdict = "fail"
    rep.check("adic quotients", verdict, started, cert=tw.to_json(),
              canonical=[[r, list(tr)] for r, tr in ranks], degree_bound=tw.degree_bound)
    started = time.perf_counter()
    if len(tw.tower) > 1:
        ml = mittag_leffler(tw.tower, len(tw.tower) - 1)
        lim = lim_lim1(tw.tower)
        ok = ml.stable_at == 0 and lim.lim1_vanishes
        rep.check("tower hygiene", "pass" if ok else "fail", started, ml=repr(ml), lim1_vanishes=lim.lim1_vanishes)


def cmd_borel(args, rep: Reporter):
    t = args.rank
    started = time.perf_counter()
    bt = borel_tower(t, args.r_max)
    rng = random.Random(args.seed)
    samples = []
    for _ in range(args.samples):
        terms = {tuple(rng.randint(-3, 3) for _ in range(t)): rng.randint(-4, 4) for _ in range(3)}
        samples.append(LaurentElement(t, {k: v for k, v in terms.items() if v}))
    ok = bt.check_compatibility(samples)
    rep.check("theta compatibility", "pass" if ok else "fail", started, samples=len(samples))
    if len(bt.tower) > 1:
        started = time.perf_counter()
        ml = mittag_leffler(bt.tower, len(bt.tower) - 1)
        rep.check("borel tower hygiene", "pass" if ml.stable_at == 0 else "fail", started, ml=repr(ml))
    for r in range(1, args.r_max + 1):
        started = time.perf_counter()
        c = cofinality_report(t, r)
        verdict = "pass" if c.ok else "fail"
        cert = c.to_json()
        cert["witnesses"] = [w.to_json() for w in c.inclusion_witnesses]
        rep.check(f"cofinality r={r}", verdict, started, cert=cert, iso=c.iso, determinant=c.determinant)


def cmd_theorem36(args, rep: Reporter):
    try:
        T = _theory(args.theory)
    except TheoryError as e:
        rep.check("theory axioms", "fail", time.perf_counter(), detail=str(e))
        return
    sched = Schedule(ceiling=args.ceiling)
    rep.defaults["schedule"] = {"step": sched.step, "ceiling": sched.ceiling}
    started = time.perf_counter()
    res = theorem36_pi0_report(T, args.rank, args.stages, args.r_max, sched)
    verdict = {"iso": "pass", "fail": "fail"}.get(res.verdict, "inconclusive")
    rep.check("theorem36 pi0", verdict, started, cert=res.to_json(), verdict_detail=res.verdict,
              stages=[s["verdict"] for s in res.stages], karoubi_iso_through=res.karoubi_reaches())


def cmd_karoubi(args, rep: Reporter):
    T = _theory(args.theory)
    if args.i_from > -2:
        raise UsageError("--i-from must be <= -2 (the base case range)")
    sched = Schedule(ceiling=args.ceiling)
    for r in range(1, args.r_max + 1):
        started = time.perf_counter()
        stage = karoubi_stage(T, args.rank, r, sched, lo=args.i_from)
        top = min(args.i_to, 0)
        try:
            kr = karoubi_replay(stage.karoubi, i_to=top)
        except KaroubiHalt as e:
            rep.check(f"karoubi r={r}", "fail", started, halted_at=e.node, certificate_detail=e.certificate)
            continue
        verdict = "pass" if kr.iso_through >= top else "fail"
        rep.check(f"karoubi r={r}", verdict, started, cert=kr.to_json(), iso_through=kr.iso_through)
        if args.i_to > 0:
            rep.check(f"karoubi r={r} above degree 0", "inconclusive", started,
                      detail="groups in positive degree are not computed at pi0")


def cmd_parse(args, rep: Reporter):
    started = time.perf_counter()
    try:
        a = parse_element(args.expr, args.rank)
    except ParseError as e:
        raise UsageError(str(e))
    out = {"normal_form": format_element(a)}
    if isinstance(a, LaurentElement):
        out["presented"] = format_element(to_presented(a))
    else:
        out["laurent"] = format_element(to_laurent(a))
    rep.check("parse", "pass", started, **out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torusgw", description="Exact checks for hermitian K-theory of split tori.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    p.add_argument("--output", "-o", help="report path (default: stdout)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    v = sub.add_parser("verify", help="lemma suites")
    vs = v.add_subparsers(dest="suite", parser_class=_Parser)
    vs.required = True
    l27 = vs.add_parser("lemma27")
    l27.add_argument("--rank", type=int, required=True)
    l27.add_argument("--max-entry", type=int, default=3)
    l27.set_defaults(func=cmd_lemma27)
    l26 = vs.add_parser("lemma26")
    l26.add_argument("--rank", type=int, required=True)
    l26.add_argument("--degree", type=int, default=6)
    l26.add_argument("--theory", default="complex")
    l26.add_argument("--samples", type=int, default=50)
    l26.set_defaults(func=cmd_lemma26)

    f = sub.add_parser("filtration")
    f.add_argument("--rank", type=int, required=True)
    f.add_argument("--c-max", type=int, default=4)
    f.add_argument("--degree", type=int, default=10)
    f.set_defaults(func=cmd_filtration)

    c = sub.add_parser("complete")
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--stages", type=int, required=True)
    c.add_argument("--model", choices=("presented", "laurent"), default="laurent")
    c.add_argument("--ceiling", type=int, default=16)
    c.set_defaults(func=cmd_complete)

    b = sub.add_parser("borel")
    b.add_argument("--rank", type=int, required=True)
    b.add_argument("--r-max", type=int, required=True)
    b.add_argument("--samples", type=int, default=100)
    b.set_defaults(func=cmd_borel)

    th = sub.add_parser("theorem36")
    th.add_argument("--rank", type=int, required=True)
    th.add_argument("--theory", default="complex")
    th.add_argument("--stages", type=int, default=4)
    th.add_argument("--r-max", type=int, default=4)
    th.add_argument("--ceiling", type=int, default=16)
    th.set_defaults(func=cmd_theorem36)

    k = sub.add_parser("karoubi")
    k.add_argument("--theory", default="complex")
    k.add_argument("--i-from", type=int, default=-3)
    k.add_argument("--i-to", type=int, default=0)
    k.add_argument("--rank", type=int, default=1)
    k.add_argument("--r-max", type=int, default=2)
    k.add_argument("--ceiling", type=int, default=16)
    k.set_defaults(func=cmd_karoubi)

    pa = sub.add_parser("parse")
    pa.add_argument("expr")
    pa.add_argument("--rank", type=int)
    pa.set_defaults(func=cmd_parse)
    return p


def _positive(args):
    for name in ("rank", "stages", "r_max", "c_max", "degree", "max_entry"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    rep = Reporter(argv, args)
    try:
        _positive(args)
        args.func(args, rep)
    except (UsageError, ParseError, KeyError) as e:
        sys.stderr.write(f"torusgw: error: {e}\n")
        return EXIT_USAGE
    text = json.dumps(rep.report(), indent=2, sort_keys=True) + "\n"
    if args.output:
        _atomic_write(args.output, text)
    else:
        sys.stdout.write(text)
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(rep.overall(), EXIT_INCONCLUSIVE)


if __name__ == "__main__":
    sys.exit(main())
