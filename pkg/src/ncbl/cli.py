"""Command-line driver: randomized verification suites, searches, selftest and replay.

Every trial record carries the serialized inputs it was evaluated from, so a
single line of output is enough to re-run that trial with ``ncbl replay``.
Trials are always evaluated from the serialized form, which makes replays
bit-identical to the original run.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .clifford import build_generators, conditional_expectation, random_subalgebra_self_adjoint
from .duality import CliffordSetting, TensorSetting, check_duality_instance, random_duality_instance
from .flow import FUNCTIONS, random_positive_element, verify_gross_formula, verify_production_monotonicity
from .frames import (
    FrameSpec,
    SubspaceSpec,
    random_admissible_frame,
    random_inadmissible_frame,
    random_subspace,
    random_tight_frame,
    verify_cosh_inequality,
    verify_psi_subadditivity,
)
from .gaussian import verify_gaussian_sa
from .linalg import random_density, random_hermitian
from .report import DEFAULT_TOL, VerificationReport
from .search import (
    VIOLATION_THRESHOLD,
    SearchConfig,
    clifford_objective,
    gaussian_objective,
    maximize_deficit_violation,
    scaling_counterexample,
    slack_witness_starts,
    tensor_objective,
)
from .tensor import CoverSpec, FactorSystem, parse_cover, random_cover, verify_entropy_combination, verify_ssa, verify_tensor_bl

DEFAULT_SEED = 42
DEFAULT_TRIALS = 1000
DEFAULT_SEARCH_TRIALS = 1
REPLAY_TOL = 1e-14


class UsageError(Exception):
    pass


# --- serialization ----------------------------------------------------------------


def encode_matrix(m) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


decode_vector = decode_matrix


def _cover_json(cover):
    return [list(s) for s in cover.subsets]


# --- per-command input generation and evaluation ----------------------------------------
#
# generate(options, rng) -> JSON-ready inputs; evaluate(inputs, tol) -> report.


def _pick_dims(opts, rng, choices=(2, 3), n_range=(2, 4), max_total=81):
    if opts.get("dims"):
        return list(opts["dims"])
    n = opts.get("n") or int(rng.integers(n_range[0], n_range[1] + 1))
    while True:
        dims = [int(rng.choice(choices)) for _ in range(n)]
        if np.prod(dims) <= max_total:
            return dims


def gen_tensor(opts, rng):
    dims = _pick_dims(opts, rng)
    n = len(dims)
    if opts.get("subsets"):
        cover = CoverSpec(n, parse_cover(opts["subsets"]))
    else:
        cover = random_cover(n, int(rng.integers(1, 4)), rng)
    system = FactorSystem(dims)
    q = opts.get("q") or cover.p
    hams = [random_hermitian(system.subset_dim(s), rng, rng.uniform(0.0, 3.0)) for s in cover.subsets]
    return {"dims": dims, "subsets": _cover_json(cover), "q": q, "hams": [encode_matrix(h) for h in hams]}


def eval_tensor(inp, tol):
    system = FactorSystem(inp["dims"])
    cover = CoverSpec(system.n, inp["subsets"])
    return verify_tensor_bl(system, cover, [decode_matrix(h) for h in inp["hams"]], inp["q"], tol)


def _frame(opts, rng, n, kind="admissible"):
    if opts.get("frame"):
        return FrameSpec.from_json(opts["frame"])
    big_n = int(rng.integers(1, 6))
    if kind == "tight":
        return random_tight_frame(n, int(rng.integers(n, n + 4)), int(rng.integers(2**32)))
    if kind == "inadmissible":
        return random_inadmissible_frame(n, max(2, big_n), rng)
    return random_admissible_frame(n, big_n, rng)


def _n(opts, rng, lo, hi):
    if opts.get("frame"):
        return int(opts["frame"]["n"])
    return opts.get("n") or int(rng.integers(lo, hi + 1))


def gen_clifford(opts, rng):
    n = _n(opts, rng, 2, 6)
    frame = _frame(opts, rng, n)
    alg = build_generators(n)
    hams = [random_subalgebra_self_adjoint(alg, v, rng, rng.uniform(0.1, 3.0)).coeffs for v in frame.subspaces]
    return {"n": n, "frame": frame.to_json(), "hams": [encode_vector(h) for h in hams]}


def eval_clifford(inp, tol):
    from .clifford import verify_clifford_bl

    alg = build_generators(inp["n"])
    frame = FrameSpec.from_json(inp["frame"])
    hams = [alg.element(decode_vector(h)) for h in inp["hams"]]
    # re-project: the stored frame basis is re-orthonormalized on load
    hams = [conditional_expectation(h, v) for h, v in zip(hams, frame.subspaces)]
    return verify_clifford_bl(alg, frame, hams, tol)


def gen_gaussian(opts, rng):
    n = _n(opts, rng, 1, 6)
    frame = _frame(opts, rng, n)
    return {"frame": frame.to_json(), "b": (rng.standard_normal(n) * rng.uniform(0.1, 3.0)).tolist()}


def eval_gaussian(inp, tol):
    return verify_gaussian_sa(np.array(inp["b"]), FrameSpec.from_json(inp["frame"]), tol)


def gen_cosh(opts, rng):
    n = _n(opts, rng, 1, 6)
    frame = _frame(opts, rng, n, "tight")
    b = rng.standard_normal(len(frame.subspaces)) * rng.uniform(0.01, 5.0)
    return {"frame": frame.to_json(), "b": b.tolist()}


def eval_cosh(inp, tol):
    return verify_cosh_inequality(np.array(inp["b"]), FrameSpec.from_json(inp["frame"]), tol, require_tight=False)


def gen_psi(opts, rng):
    n = _n(opts, rng, 1, 6)
    frame = _frame(opts, rng, n)
    a = rng.standard_normal(n)
    a *= (1.0 if rng.random() < 0.05 else rng.random() ** (1.0 / n)) / np.linalg.norm(a)
    return {"frame": frame.to_json(), "a": a.tolist()}


def eval_psi(inp, tol):
    a = np.array(inp["a"])
    r = np.linalg.norm(a)
    if r > 1.0:
        a = a / r
    return verify_psi_subadditivity(a, FrameSpec.from_json(inp["frame"]), tol)


def gen_ssa(opts, rng):
    dims = list(opts.get("dims") or [2, 2, 2])
    system = FactorSystem(dims)
    rank = int(rng.integers(1, system.total_dim + 1))
    rho = random_density(system.total_dim, rng, rank=rank).op
    if opts.get("subsets"):
        jk = parse_cover(opts["subsets"])[:2]
    else:
        jk = [[1, 2], [2, 3]] if len(dims) == 3 else [sorted(rng.choice(len(dims), size=2, replace=False) + 1) for _ in range(2)]
    return {"dims": dims, "J": [int(i) for i in jk[0]], "K": [int(i) for i in jk[1]], "rho": encode_matrix(rho)}


def eval_ssa(inp, tol):
    """Strong subadditivity on ``J, K``; for three factors also the pairwise-cover entropy bound."""
    system = FactorSystem(inp["dims"])
    rho = decode_matrix(inp["rho"])
    rep = verify_ssa(system, rho, inp["J"], inp["K"], tol)
    if system.n == 3:
        comb = verify_entropy_combination(system, rho, CoverSpec(3, [(1, 2), (2, 3), (3, 1)]), tol)
        rep.extra = {"ssa_deficit": rep.deficit, "combination_deficit": comb.deficit}
        rep.deficit = min(rep.deficit, comb.deficit)
    return rep


def _duality_setting(inp):
    s = inp["setting"]
    if s["kind"] == "tensor":
        system = FactorSystem(s["dims"])
        return TensorSetting(system, CoverSpec(system.n, s["subsets"]), s["p"])
    return CliffordSetting(build_generators(s["n"]), FrameSpec.from_json(s))


def gen_duality(opts, rng, trial=0):
    if trial % 2 == 0:
        system = FactorSystem(opts.get("dims") or [2, 2, 2])
        cover = CoverSpec(system.n, parse_cover(opts["subsets"])) if opts.get("subsets") else random_cover(system.n, int(rng.integers(1, 3)), rng)
        setting = TensorSetting(system, cover)
    else:
        n = _n(opts, rng, 2, 4)
        setting = CliffordSetting(build_generators(n), _frame(opts, rng, n, "tight"))
    inp = {"setting": setting.describe()}
    # rebuild from the serialized description so the instance matches replay exactly
    setting = _duality_setting(inp)
    rho, hams = random_duality_instance(setting, rng)
    inp.update(rho=encode_matrix(rho), hams=[encode_matrix(h) for h in hams])
    return inp


def eval_duality(inp, tol):
    setting = _duality_setting(inp)
    worst, ident = check_duality_instance(setting, decode_matrix(inp["rho"]), [decode_matrix(h) for h in inp["hams"]])
    return VerificationReport("duality", 0.0, 0.0, worst, tol, params={"setting": inp["setting"]}, extra={"identity_error": ident})


def gen_flow(opts, rng):
    n = _n(opts, rng, 2, 5)
    alg = build_generators(n)
    rank = None if rng.random() < 0.7 else int(rng.integers(1, alg.dim + 1))
    rho = random_positive_element(alg, rng, rank)
    v = random_subspace(n, int(rng.integers(1, n + 1)), rng)
    return {"n": n, "rho": encode_vector(rho.coeffs), "subspace": v.basis.T.tolist()}


def eval_flow(inp, tol):
    alg = build_generators(inp["n"])
    rho = alg.element(decode_vector(inp["rho"]))
    v = SubspaceSpec.span(np.array(inp["subspace"]).T)
    return verify_production_monotonicity(rho, v, tol)


def gen_gross(opts, rng, trial=0):
    n = _n(opts, rng, 2, 5)
    alg = build_generators(n)
    f = ("identity", "exp", "log")[trial % 3]
    return {"n": n, "f": f, "a": encode_vector(random_positive_element(alg, rng).coeffs)}


def eval_gross(inp, tol):
    alg = build_generators(inp["n"])
    return verify_gross_formula(alg.element(decode_vector(inp["a"])), inp["f"], tol=tol)


VERIFY = {
    "tensor": (gen_tensor, eval_tensor),
    "clifford": (gen_clifford, eval_clifford),
    "gaussian": (gen_gaussian, eval_gaussian),
    "cosh": (gen_cosh, eval_cosh),
    "psi": (gen_psi, eval_psi),
    "ssa": (gen_ssa, eval_ssa),
    "duality": (gen_duality, eval_duality),
    "flow": (gen_flow, eval_flow),
    "gross": (gen_gross, eval_gross),
}
TRIAL_AWARE = {"duality", "gross"}


# --- searches ------------------------------------------------------------------------


def gen_search_tensor(opts, rng):
    dims = list(opts.get("dims") or [2, 2])
    cover = CoverSpec(len(dims), parse_cover(opts["subsets"])) if opts.get("subsets") else random_cover(len(dims), 1, rng)
    return {"dims": dims, "subsets": _cover_json(cover), "q": opts.get("q") or cover.p, "seed": int(rng.integers(2**31)), "budget": opts.get("budget") or 400}


def eval_search_tensor(inp, tol):
    system = FactorSystem(inp["dims"])
    cover = CoverSpec(system.n, inp["subsets"])
    q = inp["q"]
    if q > cover.p:
        rep = scaling_counterexample(q, cover, inp["dims"])
        rep.tolerance = -VIOLATION_THRESHOLD
        rep.extra["message"] = f"violation found (expected): q = {q} > p = {cover.p}, ratio {rep.extra['ratio']:.12g}"
        return rep
    res = maximize_deficit_violation(SearchConfig(tensor_objective(system, cover, q), budget=inp["budget"], seed=inp["seed"]))
    return _search_report("tensor-search", res, {"dims": inp["dims"], "subsets": inp["subsets"], "q": q, "p": cover.p})


def _search_report(name, res, params):
    return VerificationReport(
        name,
        0.0,
        res.best_deficit,
        res.best_deficit,
        -VIOLATION_THRESHOLD,
        status="violation-found" if res.violation else "ok",
        params=params,
        extra={"best_params": [float(x) for x in res.best_params], "evaluations": res.evaluations},
    )


def gen_search_frame(kind):
    def gen(opts, rng):
        n = _n(opts, rng, 2, 5 if kind == "clifford" else 6)
        frame = _frame(opts, rng, n, "inadmissible" if opts.get("inadmissible") else "admissible")
        return {"frame": frame.to_json(), "seed": int(rng.integers(2**31)), "budget": opts.get("budget") or 300}

    return gen


def eval_search_frame(kind):
    def ev(inp, tol):
        frame = FrameSpec.from_json(inp["frame"])
        obj = clifford_objective(build_generators(frame.n), frame) if kind == "clifford" else gaussian_objective(frame)
        cfg = SearchConfig(obj, budget=inp["budget"], seed=inp["seed"], restarts=2, starts=slack_witness_starts(frame))
        return _search_report(f"{kind}-search", maximize_deficit_violation(cfg), {"frame": inp["frame"]})

    return ev


SEARCH = {
    "tensor": (gen_search_tensor, eval_search_tensor),
    "clifford": (gen_search_frame("clifford"), eval_search_frame("clifford")),
    "gaussian": (gen_search_frame("gaussian"), eval_search_frame("gaussian")),
}


def _registry(command):
    group, sub = command.split(" ")
    return (VERIFY if group == "verify" else SEARCH)[sub]


# --- running -------------------------------------------------------------------------


def trial_rng(seed, trial):
    """Independent stream for ``(seed, trial)``; does not depend on scheduling."""
    return np.random.default_rng([int(seed), int(trial)])


def evaluate_record_inputs(command, inputs, tol):
    """Report for already-serialized ``inputs``, shared by runs and replays."""
    _, ev = _registry(command)
    return ev(inputs, tol)


def run_trial(command, opts, seed, trial, tol):
    gen, ev = _registry(command)
    rng = trial_rng(seed, trial)
    sub = command.split(" ")[1]
    t0 = time.perf_counter()
    inputs = gen(opts, rng, trial) if command.startswith("verify") and sub in TRIAL_AWARE else gen(opts, rng)
    # json round trip so the evaluated inputs are exactly what gets written out
    inputs = json.loads(json.dumps(inputs))
    rep = ev(inputs, tol)
    rep.seed, rep.trial, rep.timing = int(seed), int(trial), time.perf_counter() - t0
    return make_record(command, rep, inputs)


def make_record(command, rep, inputs, timing=True):
    rec = rep.to_dict(timing=timing)
    rec.update(version=__version__, command=command, inputs=inputs)
    return rec


def _run_trial_star(args):
    return run_trial(*args)


class Writer:
    """JSON-lines or CSV record sink with a summary trailer."""

    CSV_FIELDS = ["trial", "seed", "command", "setting", "lhs", "rhs", "deficit", "pass", "tolerance", "log_constant", "status", "timing", "params", "extra", "inputs", "version"]

    def __init__(self, stream, fmt="json", timing=True):
        self.stream, self.fmt, self.timing = stream, fmt, timing
        self.csv = None
        if fmt == "csv":
            self.csv = csv.DictWriter(stream, fieldnames=self.CSV_FIELDS if timing else [f for f in self.CSV_FIELDS if f != "timing"], lineterminator="\n")
            self.csv.writeheader()

    def write(self, rec):
        if not self.timing:
            rec.pop("timing", None)
        if self.csv is None:
            self.stream.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            row = {k: (json.dumps(rec.get(k), sort_keys=True) if isinstance(rec.get(k), (dict, list)) else rec.get(k)) for k in self.csv.fieldnames}
            self.csv.writerow(row)

    def summary(self, info):
        if self.csv is None:
            self.stream.write(json.dumps({"summary": True, **info}, sort_keys=True) + "\n")
        else:
            self.stream.write("# summary " + json.dumps(info, sort_keys=True) + "\n")


def run_trials(command, opts, seed, trials, tol, writer, workers=1, failure_stream=None):
    jobs = [(command, opts, seed, k, tol) for k in range(trials)]
    passed = failed = 0
    if workers > 1:
        pool = ProcessPoolExecutor(max_workers=workers)
        records = pool.map(_run_trial_star, jobs, chunksize=max(1, trials // (8 * workers)))
    else:
        pool = None
        records = map(_run_trial_star, jobs)
    try:
        for rec in records:
            if rec["pass"]:
                passed += 1
            else:
                failed += 1
                if failure_stream is not None:
                    failure_stream.write(json.dumps({k: v for k, v in rec.items() if k != "timing"}, sort_keys=True) + "\n")
            writer.write(rec)
    finally:
        if pool is not None:
            pool.shutdown()
    writer.summary({"command": command, "seed": seed, "trials": trials, "passed": passed, "failed": failed, "tolerance": tol, "version": __version__})
    return passed, failed


def replay(records, tol=None, writer=None):
    """Re-evaluate records from their inputs; returns ``(new_records, max_deficit_change)``."""
    out, worst = [], 0.0
    for rec in records:
        if rec.get("summary"):
            continue
        if rec.get("version") != __version__:
            raise UsageError(f"record was produced by version {rec.get('version')}, this is {__version__}")
        t = rec["tolerance"] if tol is None else tol
        if rec["command"].startswith("search"):
            t = rec["tolerance"]
        rep = evaluate_record_inputs(rec["command"], rec["inputs"], t)
        rep.seed, rep.trial = rec.get("seed"), rec.get("trial")
        new = make_record(rec["command"], rep, rec["inputs"], timing=False)
        old_d, new_d = rec["deficit"], new["deficit"]
        if isinstance(old_d, float) and isinstance(new_d, float):
            worst = max(worst, abs(old_d - new_d))
        elif old_d != new_d:
            worst = np.inf
        new["replay_of_deficit"] = old_d
        out.append(new)
        if writer is not None:
            writer.write(dict(new))
    return out, worst


# --- argument handling ---------------------------------------------------------------


def _dims(text):
    try:
        dims = [int(x) for x in text.replace("x", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --dims {text!r}") from exc
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("--dims needs factor dimensions >= 2")
    return dims


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default 42)")
    common.add_argument("--trials", type=int, default=None, help=f"number of trials (default {DEFAULT_TRIALS} for verify, {DEFAULT_SEARCH_TRIALS} for search)")
    common.add_argument("--n", type=int, default=None, help="dimension of R^n / number of generators (default: random per trial)")
    common.add_argument("--dims", type=_dims, default=None, help="tensor factor dimensions, e.g. 2,2,3")
    common.add_argument("--subsets", "--cover", dest="subsets", default=None, help='index subsets, e.g. "{1,2},{2,3}"')
    common.add_argument("--frame-file", default=None, help="JSON frame {n, frames: [{basis, p}]}")
    common.add_argument("--q", type=float, default=None, help="exponent q for the tensor inequality (default p)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="pass tolerance (default 1e-9)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--no-timing", action="store_true", help="omit timings for byte-identical output")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--budget", type=int, default=None, help="evaluations per search")
    common.add_argument("--inadmissible", action="store_true", help="search: draw inadmissible frames")

    parser = argparse.ArgumentParser(prog="ncbl", description="Randomized verification of Brascamp-Lieb and entropy inequalities.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="group", required=True)
    verify = sub.add_parser("verify", parents=[common], help="randomized verification suites")
    verify.add_argument("setting", choices=sorted(VERIFY))
    search = sub.add_parser("search", parents=[common], help="violation / counterexample search")
    search.add_argument("setting", choices=sorted(SEARCH))
    selftest = sub.add_parser("selftest", help="run every acceptance criterion")
    selftest.add_argument("--seed", type=int, default=DEFAULT_SEED)
    selftest.add_argument("--out", default=None)
    selftest.add_argument("--no-timing", action="store_true")
    selftest.add_argument("--only", type=int, nargs="*", default=None, help="criterion numbers to run")
    rp = sub.add_parser("replay", help="re-run trials from report records")
    rp.add_argument("records", help="JSON-lines report file ('-' for stdin)")
    rp.add_argument("--line", type=int, default=None, help="replay only this 1-based record line")
    rp.add_argument("--tol", type=float, default=None, help="override the recorded tolerance")
    rp.add_argument("--out", default=None)
    return parser


def _options(args):
    opts = {"n": args.n, "dims": args.dims, "subsets": args.subsets, "q": args.q, "budget": args.budget, "inadmissible": args.inadmissible}
    if args.frame_file:
        try:
            with open(args.frame_file) as fh:
                data = json.load(fh)
            FrameSpec.from_json(data)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot use frame file {args.frame_file}: {exc}") from exc
        opts["frame"] = data
    if args.dims and args.subsets:
        try:
            CoverSpec(len(args.dims), parse_cover(args.subsets))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be positive")
    return opts


def _open_out(path):
    return open(path, "w", newline="") if path else None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except UsageError as exc:
        print(f"ncbl: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args):
    fh = _open_out(args.out) if getattr(args, "out", None) else None
    stream = fh or sys.stdout
    try:
        if args.group == "selftest":
            from .acceptance import run_selftest

            return run_selftest(args.seed, stream, timing=not args.no_timing, only=args.only)
        if args.group == "replay":
            return _replay_cmd(args, stream)
        command = f"{args.group} {args.setting}"
        trials = args.trials if args.trials is not None else (DEFAULT_TRIALS if args.group == "verify" else DEFAULT_SEARCH_TRIALS)
        if trials < 1:
            raise UsageError("--trials must be >= 1")
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        opts = _options(args)
        if command == "search tensor" and opts["q"] is not None and not opts["subsets"]:
            raise UsageError("search tensor --q needs --cover/--subsets")
        try:
            writer = Writer(stream, args.format, timing=not args.no_timing)
            _, failed = run_trials(command, opts, args.seed, trials, args.tol, writer, args.workers, failure_stream=sys.stderr if fh else None)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if failed and args.group == "search":
            print(f"ncbl: {failed} trial(s) found a violation", file=sys.stderr)
        return 1 if failed else 0
    finally:
        if fh:
            fh.close()


def _replay_cmd(args, stream):
    try:
        src = sys.stdin if args.records == "-" else open(args.records)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    with src:
        lines = [ln for ln in src if ln.strip() and not ln.startswith("#")]
    if args.line is not None:
        if not 1 <= args.line <= len(lines):
            raise UsageError(f"--line {args.line} out of range 1..{len(lines)}")
        lines = [lines[args.line - 1]]
    try:
        records = [json.loads(ln) for ln in lines]
    except json.JSONDecodeError as exc:
        raise UsageError(f"records are not JSON lines: {exc}") from exc
    writer = Writer(stream, "json", timing=False)
    out, worst = replay(records, args.tol, writer)
    failed = sum(not r["pass"] for r in out)
    writer.summary({"command": "replay", "replayed": len(out), "failed": failed, "max_deficit_change": worst if np.isfinite(worst) else "inf", "version": __version__})
    if worst > REPLAY_TOL:
        print(f"ncbl: replay deficits differ by {worst:.3e}", file=sys.stderr)
        return 1
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
