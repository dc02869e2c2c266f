"""Command-line front end: ``lrselect <command> [flags]``.

Exit status is 0 when a report was produced, 2 for usage errors (bad or
conflicting flags) and 1 for data errors.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import censor, efficiency, lrt, perutil, sim, tournament
from .densities import DensitySpecError, parse_density
from .scores import llr_samples, read_score_file, summarize


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _clean(value):
    """Make a value JSON-safe and deterministic (non-finite floats become strings)."""
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, lrt.Outcome):
        return value.value
    return value


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    body: str | None = None  # replaces the text rendering (CSV output)

    def as_dict(self) -> dict:
        return _clean({"command": self.command, "inputs": self.inputs,
                       "results": self.results, "warnings": self.warnings})

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        if self.body is not None:
            return self.body
        lines = [f"command: {self.command}"]
        lines += [f"input.{k}: {v}" for k, v in _flatten(self.as_dict()["inputs"])]
        lines += [f"{k}: {v}" for k, v in _flatten(self.as_dict()["results"])]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def _flatten(d, prefix=""):
    for k in sorted(d):
        v = d[k]
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            for i, item in enumerate(v):
                yield from _flatten(item, f"{key}[{i}].")
        else:
            yield key, v


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")

    p = argparse.ArgumentParser(prog="lrselect",
                                description="Likelihood-ratio model selection with labelled "
                                            "or automatically labelled data.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("vuong", parents=[common], help="standardized summed-LLR test")
    c.add_argument("--scores", required=True, metavar="PATH")
    c.add_argument("--alpha", type=float, default=0.05)

    c = sub.add_parser("sign", parents=[common], help="sign test on LLR signs")
    c.add_argument("--scores", required=True, metavar="PATH")
    c.add_argument("--mode", choices=("wta", "level"), default="wta")
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("--tau", type=float, default=None,
                   help="explicit count threshold (overrides --mode)")

    c = sub.add_parser("censor", parents=[common], help="censored LLR test")
    c.add_argument("--scores", required=True, metavar="PATH")
    c.add_argument("--a", type=float)
    c.add_argument("--b", type=float)
    c.add_argument("--epsilon", type=float)
    c.add_argument("--p1", metavar="SPEC")
    c.add_argument("--p2", metavar="SPEC")
    c.add_argument("--tau", type=float, default=0.0)

    c = sub.add_parser("bounds", parents=[common], help="least favorable censoring bounds")
    c.add_argument("--epsilon", type=float, required=True)
    c.add_argument("--p1", required=True, metavar="SPEC")
    c.add_argument("--p2", required=True, metavar="SPEC")

    c = sub.add_parser("are", parents=[common], help="asymptotic relative efficiency")
    c.add_argument("--p", type=float)
    c.add_argument("--curve", nargs=3, metavar=("PMIN", "PMAX", "STEPS"))
    c.add_argument("--empirical", action="store_true", help="Monte Carlo estimate at --p")
    c.add_argument("--effect", type=float, default=0.05)
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("--power", type=float, default=0.8)
    c.add_argument("--trials", type=int, default=20000)
    c.add_argument("--seed", type=int)
    c.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("simulate", parents=[common], help="Monte Carlo error rates")
    c.add_argument("kind", choices=("error", "minimax", "calibrate"))
    c.add_argument("--seed", type=int)
    c.add_argument("--trials", type=int, default=10000)
    c.add_argument("--n", type=int, default=25)
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("--epsilon", type=float)
    c.add_argument("--p1", metavar="SPEC", default="gaussian:0,1")
    c.add_argument("--p2", metavar="SPEC", default="gaussian:1,1")
    c.add_argument("--contaminant", metavar="SPEC")
    c.add_argument("--truth", type=int, choices=(1, 2), default=1)
    c.add_argument("--tau", type=float, default=0.0)
    c.add_argument("--a", type=float)
    c.add_argument("--b", type=float)
    c.add_argument("--shift", type=float, default=0.0)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--csv", action="store_true", help="emit the CSV form of the report")

    c = sub.add_parser("tournament", parents=[common], help="all-pairs selection among k models")
    c.add_argument("--dir", required=True, metavar="PATH")
    c.add_argument("--method", choices=("sup", "semi_sup"), default="semi_sup")
    c.add_argument("--tau", type=float, default=0.0)

    c = sub.add_parser("per", parents=[common], help="phone error rates and oracle picks")
    c.add_argument("--candidates", required=True, metavar="PATH")
    c.add_argument("--lexicon", required=True, metavar="PATH")
    return p


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


def _finite(name, value):
    if value is not None:
        _require(math.isfinite(value), f"{name} must be finite")


def validate(args: argparse.Namespace) -> None:
    """Range and exclusivity checks; runs before any file is read."""
    for name in ("alpha", "tau", "a", "b", "epsilon", "p", "effect", "power", "shift"):
        _finite(f"--{name}", getattr(args, name, None))
    alpha = getattr(args, "alpha", None)
    if alpha is not None:
        _require(0 < alpha < 1, f"--alpha must lie in (0, 1), got {alpha}")
    eps = getattr(args, "epsilon", None)
    if eps is not None:
        _require(0 <= eps < 1, f"--epsilon must lie in [0, 1), got {eps}")
    a, b = getattr(args, "a", None), getattr(args, "b", None)
    if a is not None or b is not None:
        _require(a is not None and b is not None, "--a and --b must be given together")
        _require(0 < a <= b, f"bounds need 0 < a <= b, got a={a}, b={b}")
    for name in ("trials", "n", "workers"):
        v = getattr(args, name, None)
        if v is not None:
            _require(v >= 1, f"--{name} must be at least 1, got {v}")
    seed = getattr(args, "seed", None)
    if seed is not None:
        _require(0 <= seed < 2 ** 64, f"--seed must lie in [0, 2**64), got {seed}")

    cmd = args.command
    if cmd == "censor":
        has_bounds = args.a is not None
        has_eps = args.epsilon is not None
        _require(has_bounds != has_eps, "give either --a/--b or --epsilon with --p1/--p2, not both")
        if has_eps:
            _require(args.p1 is not None and args.p2 is not None, "--epsilon needs --p1 and --p2")
    elif cmd == "are":
        modes = sum([args.curve is not None, args.empirical, args.p is not None and not args.empirical])
        _require(modes == 1, "choose exactly one of --p, --curve, or --empirical (with --p)")
        if args.p is not None:
            _require(args.p > 0, f"--p must be positive, got {args.p}")
        if args.curve is not None:
            try:
                lo, hi, steps = float(args.curve[0]), float(args.curve[1]), int(args.curve[2])
            except ValueError:
                raise UsageError("--curve takes PMIN PMAX STEPS (numbers, integer STEPS)") from None
            _require(0 < lo < hi, "--curve needs 0 < PMIN < PMAX")
            _require(steps >= 2, "--curve needs STEPS >= 2")
            args.curve = (lo, hi, steps)
        if args.empirical:
            _require(args.p is not None, "--empirical needs --p")
            _require(args.seed is not None, "--empirical requires an explicit --seed")
            _require(args.effect > 0, "--effect must be positive")
            _require(args.alpha < 0.5, "--alpha must be below 0.5 for the one-sided tests")
            _require(args.alpha < args.power < 1, "--power must lie in (alpha, 1)")
            _require(args.trials >= 100, "--trials must be at least 100")
    elif cmd == "simulate":
        _require(args.seed is not None, "simulate requires an explicit --seed")
        if args.kind == "minimax":
            _require(args.epsilon is not None, "simulate minimax needs --epsilon")
        if args.kind == "calibrate":
            _require(args.n >= 2, "simulate calibrate needs --n >= 2")
        if args.contaminant is not None:
            _require(args.epsilon is not None, "--contaminant needs --epsilon")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _density(spec: str):
    try:
        return parse_density(spec)
    except (DensitySpecError, OSError) as exc:
        raise DataError(f"density {spec!r}: {exc}") from None


def _load(path):
    try:
        return read_score_file(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise DataError(str(exc)) from None


def _summary_dict(s) -> dict:
    return {"n": s.n, "sum": s.sum, "mean": s.mean, "sd": s.sd, "pos_count": s.pos_count,
            "neg_count": s.neg_count, "zero_count": s.zero_count}


def _zero_warning(s, report):
    if s.zero_count:
        report.warnings.append(f"{s.zero_count} zero log-likelihood ratio(s); "
                               "they are not counted as positive")


def cmd_vuong(args) -> Report:
    scores = _load(args.scores)
    samples = llr_samples(scores)
    s = summarize(samples)
    report = Report("vuong", {"scores": Path(args.scores).name, "n": s.n, "alpha": args.alpha})
    try:
        res = lrt.vuong_result(samples, args.alpha)
        decision = lrt.vuong_decide(samples, args.alpha)
    except lrt.DegenerateSampleError as exc:
        print("warning: degenerate variance (constant log-likelihood ratios)", file=sys.stderr)
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    _zero_warning(s, report)
    report.results = {"summary": _summary_dict(s), "t_lab": res.t_lab,
                      "standardized": res.standardized, "sd": res.sd, "z_crit": res.z_crit,
                      "decision": decision.as_dict()}
    return report


def cmd_sign(args) -> Report:
    scores = _load(args.scores)
    samples = llr_samples(scores)
    s = summarize(samples)
    report = Report("sign", {"scores": Path(args.scores).name, "n": s.n, "mode": args.mode})
    results = {"summary": _summary_dict(s), "sign_statistic": censor.sign_statistic(samples)}
    if args.tau is not None:
        report.inputs["tau"] = args.tau
        decision = censor.sign_decide_threshold(samples, args.tau)
    elif args.mode == "wta":
        decision = censor.sign_decide_wta(samples)
        if decision.outcome is lrt.Outcome.H0:
            report.warnings.append(f"tie: exactly half of {s.n} log-likelihood ratios are positive")
    else:
        report.inputs["alpha"] = args.alpha
        k = censor.binomial_critical_value(s.n, args.alpha)
        results["k_alpha"] = k
        decision = censor.sign_decide_level(samples, args.alpha)
    _zero_warning(s, report)
    results["decision"] = decision.as_dict()
    report.results = results
    return report


def _lfp(eps, p1_spec, p2_spec):
    p1, p2 = _density(p1_spec), _density(p2_spec)
    try:
        return censor.least_favorable_pair(p1, p2, eps)
    except censor.BreakdownError as exc:
        raise DataError(f"{exc}; use the 'sign' command instead") from None
    except ValueError as exc:
        raise DataError(str(exc)) from None


def _bounds_dict(lfp) -> dict:
    return {"a": lfp.bounds.a, "b": lfp.bounds.b, "log_a": lfp.bounds.log_a,
            "log_b": lfp.bounds.log_b, "epsilon": lfp.epsilon,
            "normalization_residuals": list(lfp.normalization_residuals)}


def cmd_censor(args) -> Report:
    report = Report("censor", {"scores": Path(args.scores).name, "tau": args.tau})
    results = {}
    if args.epsilon is not None:
        report.inputs.update({"epsilon": args.epsilon, "p1": args.p1, "p2": args.p2})
        lfp = _lfp(args.epsilon, args.p1, args.p2)
        bounds = lfp.bounds
        results["bounds"] = _bounds_dict(lfp)
    else:
        bounds = censor.CensoringBounds(args.a, args.b)
        report.inputs.update({"a": args.a, "b": args.b})
        results["bounds"] = {"a": bounds.a, "b": bounds.b, "log_a": bounds.log_a,
                             "log_b": bounds.log_b}
        if not bounds.is_standard():
            report.warnings.append("bounds do not satisfy a <= 1 <= b")
    samples = llr_samples(_load(args.scores))
    s = summarize(samples)
    report.inputs["n"] = s.n
    decision = censor.decide_censored(samples, bounds, args.tau)
    results.update({"summary": _summary_dict(s), "t_lab": s.sum,
                    "censored_statistic": decision.statistic, "decision": decision.as_dict()})
    report.results = results
    return report


def cmd_bounds(args) -> Report:
    lfp = _lfp(args.epsilon, args.p1, args.p2)
    report = Report("bounds", {"epsilon": args.epsilon, "p1": args.p1, "p2": args.p2})
    report.results = {"bounds": _bounds_dict(lfp),
                      "epsilon_breakdown": censor.epsilon_breakdown(lfp.p1, lfp.p2)}
    return report


def cmd_are(args) -> Report:
    if args.curve is not None:
        lo, hi, steps = args.curve
        curve = efficiency.are_curve(lo, hi, steps)
        report = Report("are", {"curve": [lo, hi, steps]},
                        {"points": [{"p": p, "are": a} for p, a in curve.points]})
        are = curve.are
        report.results["strictly_decreasing"] = bool((are[1:] < are[:-1]).all())
        if (are[0] - 1.0) * (are[-1] - 1.0) < 0:
            report.results["crossing_are_1"] = efficiency.are_crossing(lo, hi)
        report.body = curve.to_csv()
        return report
    if args.empirical:
        res = efficiency.empirical_are(args.p, args.effect, args.alpha, args.power,
                                       args.trials, args.seed, workers=args.workers)
        report = Report("are", {"p": args.p, "effect": args.effect, "alpha": args.alpha,
                                "power": args.power, "trials": args.trials, "seed": args.seed})
        report.results = {"empirical_are": res.ratio, "n_mean": res.n_mean,
                          "n_sign": res.n_sign, "closed_form": efficiency.are_closed_form(args.p),
                          "explored_max_n": res.max_n}
        return report
    report = Report("are", {"p": args.p}, {"are": efficiency.are_closed_form(args.p)})
    if not 1.0 <= args.p <= 2.0:
        report.warnings.append(f"p={args.p} lies outside [1, 2]")
    return report


def cmd_simulate(args) -> Report:
    p1, p2 = _density(args.p1), _density(args.p2)
    try:
        if args.kind == "calibrate":
            rep = sim.null_calibration(args.n, args.trials, args.alpha, args.seed,
                                       shift=args.shift, workers=args.workers)
        elif args.kind == "minimax":
            rep = sim.minimax_comparison(p1, p2, args.epsilon, args.n, args.trials, args.seed,
                                         workers=args.workers)
        else:
            tests = [sim.TestSpec("uncensored", tau=args.tau), sim.TestSpec("sign")]
            if args.a is not None:
                tests.insert(1, sim.TestSpec("censored", tau=args.tau,
                                             bounds=censor.CensoringBounds(args.a, args.b)))
            source = None
            if args.contaminant is not None:
                base = p1 if args.truth == 1 else p2
                source = sim.ContaminationModel(base, _density(args.contaminant), args.epsilon)
            rep = sim.simulate_selection_error(p1, p2, args.truth, source, tests, args.n,
                                               args.trials, args.seed, workers=args.workers)
    except censor.BreakdownError as exc:
        raise DataError(f"{exc}; use the sign test instead") from None
    except (ValueError, DensitySpecError) as exc:
        raise DataError(str(exc)) from None
    report = Report(f"simulate {args.kind}", {"seed": args.seed, "trials": args.trials,
                                              "n": args.n, "p1": args.p1, "p2": args.p2})
    report.results = rep.as_dict()
    if args.csv:
        report.body = rep.to_csv()
    return report


def cmd_tournament(args) -> Report:
    try:
        table = tournament.load_pairwise_dir(args.dir)
        res = tournament.run_tournament(table, args.method, args.tau)
    except tournament.TournamentError as exc:
        raise DataError(str(exc)) from None
    report = Report("tournament", {"dir": Path(args.dir).name, "method": args.method,
                                   "models": list(table.model_ids)})
    report.results = res.as_dict()
    if res.tied:
        report.warnings.append(f"tie for most wins; {res.winner} chosen by lexicographic order")
    h0 = [p for p, d in res.per_pair_decisions if d.outcome is lrt.Outcome.H0]
    for a, b in h0:
        report.warnings.append(f"pair ({a}, {b}) undecided (H0); no win awarded")
    return report


def cmd_per(args) -> Report:
    try:
        lexicon = perutil.read_lexicon(args.lexicon)
        cand_sets = perutil.read_candidates(args.candidates)
    except OSError as exc:
        raise DataError(f"cannot read {exc.filename}: {exc.strerror}") from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    report = Report("per", {"candidates": Path(args.candidates).name,
                            "lexicon": Path(args.lexicon).name})
    words = []
    totals = {"selected": [], "oracle": [], "anti_oracle": []}
    for cs in cand_sets:
        refs = lexicon.get(cs.word)
        if not refs:
            report.warnings.append(f"word {cs.word!r} not in lexicon; skipped")
            continue
        pers = [perutil.per(c, refs) for c in cs.candidates]
        ora = perutil.oracle_select(cs.candidates, refs)
        anti = perutil.anti_oracle_select(cs.candidates, refs)
        entry = {
            "word": cs.word,
            "candidates": [{"pron": str(c), "per": p, "per_percent": round(100 * p, 2)}
                           for c, p in zip(cs.candidates, pers)],
            "oracle": {"index": ora.index, "pron": str(cs.candidates[ora.index]),
                       "per": pers[ora.index], "tied": ora.tied},
            "anti_oracle": {"index": anti.index, "pron": str(cs.candidates[anti.index]),
                            "per": pers[anti.index], "tied": anti.tied},
        }
        totals["oracle"].append(pers[ora.index])
        totals["anti_oracle"].append(pers[anti.index])
        if cs.selected is not None:
            entry["selected"] = {"index": cs.selected, "pron": str(cs.candidates[cs.selected]),
                                 "per": pers[cs.selected],
                                 "per_percent": round(100 * pers[cs.selected], 2)}
            totals["selected"].append(pers[cs.selected])
        words.append(entry)
    report.results = {"words": words,
                      "mean_per": {k: (math.fsum(v) / len(v) if v else None)
                                   for k, v in totals.items()}}
    return report


COMMANDS = {"vuong": cmd_vuong, "sign": cmd_sign, "censor": cmd_censor, "bounds": cmd_bounds,
            "are": cmd_are, "simulate": cmd_simulate, "tournament": cmd_tournament,
            "per": cmd_per}


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        validate(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    try:
        report = COMMANDS[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = report.to_json() if args.json else report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
