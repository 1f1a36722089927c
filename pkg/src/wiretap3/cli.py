"""Command line entry point.

Subcommands: info, ordering, bound, region, fme, simulate, repro-example.
Every randomized subcommand requires an explicit --seed; results are
deterministic given identical inputs and seed.  Exit codes: 0 success,
1 validation error, 2 configured cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import bounds, fig1, fixture_runs, fme, orderings, simulate as sim
from .optim import SearchBudget
from .probability import DistributionError, AxisError, JointPmf
from .specfmt import ChannelSpecError, SpecDocument, parse_spec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CAP = 2


class CliError(ValueError):
    pass


def _load_spec(path: str) -> SpecDocument:
    with open(path) as fh:
        return parse_spec(fh.read())


def _emit(args, payload: dict, human: str):
    text = json.dumps(payload, indent=2, default=str) if args.format == "json" else human
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _require_seed(args):
    if args.seed is None:
        raise CliError("--seed is required for randomized subcommands")


def _budget(args) -> SearchBudget:
    return SearchBudget(
        grid_points=args.grid,
        restarts=args.restarts,
        seed=args.seed,
        refine_sweeps=args.sweeps,
    )


# ---------------------------------------------------------------------------
# info
# ---------------------------------------------------------------------------


def cmd_info(args) -> int:
    doc = _load_spec(args.spec)
    report: dict = {"subcommand": "info", "alphabets": doc.alphabets, "pmfs": {}, "channels": {}}
    lines = []
    for name, (axes, p) in doc.pmfs.items():
        report["pmfs"][name] = {"axes": list(axes), "entropy_bits": p.entropy()}
        lines.append(f"pmf {name} over {axes}: H = {p.entropy():.6f} bits")
    for name, (in_axes, out_axes, chan) in doc.channels.items():
        entry = {"in": list(in_axes), "out": list(out_axes)}
        if args.input and args.input in doc.pmfs:
            p = doc.pmfs[args.input][1]
            if p.alphabet_size == chan.rows:
                j = JointPmf.product([("X", p)]).extend(("X",), [("Y", chan.cols)], chan)
                mi = j.mutual_information(("X",), ("Y",))
                entry["mutual_information_bits"] = mi
                lines.append(f"channel {name}: I(X;Y) = {mi:.6f} bits at pmf {args.input}")
        report["channels"][name] = entry
        lines.append(f"channel {name}: {in_axes} -> {out_axes} ({chan.rows}x{chan.cols})")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# ordering
# ---------------------------------------------------------------------------


def cmd_ordering(args) -> int:
    doc = _load_spec(args.spec)
    y = doc.channel(args.y)
    z = doc.channel(args.z)
    if args.relation == "degraded":
        verdict = orderings.check_degraded(y, z)
    elif args.relation == "less_noisy":
        _require_seed(args)
        verdict = orderings.check_less_noisy(y, z, args.aux_card, _budget(args))
    elif args.relation == "more_capable":
        _require_seed(args)
        verdict = orderings.check_more_capable(y, z, _budget(args))
    else:
        raise CliError(f"unknown relation {args.relation!r}")
    holds = {True: "true", False: "false", None: "undetermined"}[verdict.holds]
    payload = {
        "subcommand": "ordering",
        "relation": verdict.relation,
        "holds": holds,
        "resolution": verdict.resolution,
    }
    if verdict.margin is not None:
        payload["violation_margin_bits"] = verdict.margin
    if verdict.witness is not None:
        w = verdict.witness
        payload["witness"] = (
            w.matrix.tolist() if hasattr(w, "matrix") else w.tensor.tolist()
        )
    human = f"{args.y} {args.relation} {args.z}: {holds} ({verdict.resolution})"
    _emit(args, payload, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def _tables_to_jsonable(dist):
    return [f.table.matrix.tolist() for f in dist.factors]


def cmd_bound(args) -> int:
    doc = _load_spec(args.spec)
    chans = doc.broadcast(args.y1, args.y2, args.z)
    if args.dist:
        dist = doc.factored[args.dist]
        value = bounds.evaluate_bound(args.id, dist, chans)
        payload = {
            "subcommand": "bound",
            "id": args.id,
            "mode": "evaluate",
            "value": value if value is not None else "inadmissible",
        }
        human = f"{args.id} at {args.dist}: " + (
            f"{value:.6f} bits" if value is not None else "inadmissible"
        )
        _emit(args, payload, human)
        return EXIT_OK
    _require_seed(args)
    cards = {}
    for kv in args.card or []:
        k, v = kv.split("=", 1)
        cards[k] = int(v)
    pattern = {"wiretap": "wiretap", "ck_extension": "ck", "corollary1": "ck", "theorem1": "theorem1"}[args.id]
    aux = bounds.AuxSpec(pattern, cards)
    res = bounds.maximize(args.id, aux, chans, _budget(args))
    payload = {
        "subcommand": "bound",
        "id": args.id,
        "mode": "maximize",
        "value": res.value,
        "restarts": res.restarts,
        "best_restart": res.best_restart,
        "evaluations": res.evaluations,
        "argmax_tables": _tables_to_jsonable(res.argmax),
        "note": "search lower bound on the true maximum",
    }
    human = (
        f"max {args.id} >= {res.value:.6f} bits "
        f"({res.restarts} restarts, best at {res.best_restart}, {res.evaluations} evals)"
    )
    _emit(args, payload, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# region
# ---------------------------------------------------------------------------


def _region_payload(sample) -> dict:
    rows = []
    for row in sample.rows:
        entry = {
            "label": row.label,
            "lhs": dict(row.lhs),
            "relation": row.relation,
            "rhs": row.rhs,
        }
        if row.clamp is not None:
            entry["clamp_const"] = row.clamp[0]
            entry["clamp_coeffs"] = dict(row.clamp[1])
        rows.append(entry)
    return {"variables": list(sample.variables), "rows": rows}


def _region_human(sample) -> str:
    lines = []
    for row in sample.rows:
        lhs = " + ".join(
            (f"{c:g}*{v}" if c != 1 else v) for v, c in row.lhs.items()
        )
        rhs = f"{row.rhs:.6f}"
        if row.clamp is not None:
            const, coeffs = row.clamp
            inner = f"{const:.6f} " + " ".join(
                f"{c:+g}*{v}" for v, c in coeffs.items()
            )
            rhs += f" + max(0, {inner})"
        lines.append(f"  {row.label}: {lhs} {row.relation} {rhs}")
    return "\n".join(lines)


def cmd_region(args) -> int:
    doc = _load_spec(args.spec)
    dist = doc.factored[args.dist]
    if args.id in ("theorem2", "prop1"):
        chans = doc.broadcast(args.y1, args.y2, args.z)
        if args.id == "theorem2":
            sample = bounds.theorem2_region(dist, chans)
            if sample is None:
                _emit(args, {"subcommand": "region", "id": args.id, "result": "inadmissible"},
                      "inadmissible distribution (Marton constraint violated)")
                return EXIT_OK
        else:
            sample = bounds.prop1_region(dist, chans)
    elif args.id in ("prop2-inner", "prop3-outer"):
        if not args.y1z3 or not args.z2:
            raise CliError("multilevel regions need --y1z3 and --z2")
        ml = doc.multilevel(args.y1z3, args.z2)
        fn = bounds.prop2_inner_region if args.id == "prop2-inner" else bounds.prop3_outer_region
        sample = fn(dist, ml)
    else:
        raise CliError(f"unknown region id {args.id!r}")
    payload = {"subcommand": "region", "id": args.id, **_region_payload(sample)}
    human = f"region {args.id} at {args.dist}:\n" + _region_human(sample)
    if args.point:
        point = {}
        for kv in args.point.split(","):
            k, v = kv.split("=", 1)
            point[k.strip()] = float(v)
        inside = sample.contains(point, tol=1e-9)
        payload["point"] = point
        payload["contains_point"] = inside
        human += f"\n  point {point}: {'inside' if inside else 'outside'}"
    _emit(args, payload, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# fme
# ---------------------------------------------------------------------------


def cmd_fme(args) -> int:
    if args.fixture:
        res = fixture_runs.run_fixture(args.fixture)
        payload = {
            "subcommand": "fme",
            "fixture": res.name,
            "ok": res.ok,
            "checks": dict(res.checks),
            "certificates": res.certificates,
        }
        human_lines = [f"fixture {res.name}: {'PASS' if res.ok else 'FAIL'}"]
        human_lines += [f"  {k}: {v}" for k, v in res.checks.items()]
        _emit(args, payload, "\n".join(human_lines))
        return EXIT_OK if res.ok else EXIT_VALIDATION
    if not args.system:
        raise CliError("fme needs --system or --fixture")
    with open(args.system) as fh:
        system, assumptions = fme.parse_system(fh.read())
    if args.eliminate:
        system = fme.eliminate_all(system, [v.strip() for v in args.eliminate.split(",")])
    if args.reduce:
        system = fme.remove_redundant(system, assumptions)
    payload = {"subcommand": "fme", "system": system.format()}
    human = system.format().rstrip()
    if args.compare:
        with open(args.compare) as fh:
            other, other_assume = fme.parse_system(fh.read())
        eq, cert = fme.region_equal(system, other, list(assumptions) + list(other_assume))
        payload["region_equal"] = eq
        payload["certificate"] = cert
        human += f"\nregion_equal vs {args.compare}: {eq}"
    _emit(args, payload, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _dist_from_config(cfg: dict, doc: Optional[SpecDocument]):
    from .probability import Factor, FactoredDistribution

    d = cfg["dist"]
    if isinstance(d, dict) and "factored" in d:
        if doc is None:
            raise CliError("config references a spec factored name but no spec file")
        return doc.factored[d["factored"]]
    if isinstance(d, dict) and "pattern" in d:
        tables = [np.asarray(t, dtype=float) for t in d["tables"]]
        return bounds.build_factored(d["pattern"], d["sizes"], tables)
    if isinstance(d, dict) and "chain" in d:
        sizes = d["sizes"]
        factors = [
            Factor(f["targets"], f.get("given", []), np.asarray(f["table"], dtype=float))
            for f in d["chain"]
        ]
        axis_order = [a for f in d["chain"] for a in f["targets"]]
        return FactoredDistribution([(a, sizes[a]) for a in axis_order], factors)
    raise CliError(
        "config dist must be {'factored': name}, inline pattern tables, "
        "or an explicit factor chain"
    )


def _channel_from_config(cfg_value, doc: Optional[SpecDocument]):
    from .probability import ConditionalPmf

    if isinstance(cfg_value, str):
        if doc is None:
            raise CliError("config references a spec channel but no spec file")
        return doc.channel(cfg_value)
    return ConditionalPmf(cfg_value["matrix"])


def cmd_simulate(args) -> int:
    _require_seed(args)
    with open(args.config) as fh:
        cfg = json.load(fh)
    doc = None
    if "spec" in cfg:
        spec_path = Path(cfg["spec"])
        if not spec_path.is_absolute():
            spec_path = Path(args.config).resolve().parent / spec_path
        doc = _load_spec(str(spec_path))
    caps = sim.Caps(**cfg.get("caps", {}))
    scheme = cfg["scheme"]
    n_list = cfg["n"] if isinstance(cfg["n"], list) else [cfg["n"]]
    eps = cfg.get("epsilon", 0.5)
    rows = []
    for n in n_list:
        params = sim.TypicalityParams(
            n=n, epsilon=eps, delta=cfg.get("delta", 0.05), delta1=cfg.get("delta1", 0.1)
        )
        if scheme == "wiretap-equivocation":
            dist = _dist_from_config(cfg, doc)
            chan = _channel_from_config(cfg["channel"], doc)
            r = cfg["rates"]
            cb = sim.build_wiretap_codebook(
                dist,
                sim.WiretapRates(r["message"], r["total"], r.get("satellite", 0.0)),
                params, args.seed, caps,
            )
            trials = cfg.get("trials", 0)
            rep = (
                sim.exact_equivocation(cb, chan, caps)
                if trials == 0
                else sim.mc_equivocation(cb, chan, trials, args.seed)
            )
            rows.append({
                "n": n, "k_msg": cb.k_msg, "k_total": cb.k_total,
                "leakage_rate": rep.leakage_rate,
                "equivocation_rate": rep.equivocation_rate,
                "message_rate": rep.message_rate,
                "exact": rep.exact,
                "ci_halfwidth": rep.ci_halfwidth,
            })
        elif scheme == "marton-equivocation":
            dist = _dist_from_config(cfg, doc)
            chan = _channel_from_config(cfg["channel"], doc)
            r = cfg["rates"]
            cb = sim.build_marton_codebook(
                dist,
                sim.MartonRates(r["message"], r["total"], r["t1"], r["t2"], r["b1"], r["b2"]),
                params, args.seed, caps,
            )
            rep = sim.exact_equivocation(cb, chan, caps)
            rows.append({
                "n": n,
                "leakage_rate": rep.leakage_rate,
                "equivocation_rate": rep.equivocation_rate,
                "message_rate": rep.message_rate,
                "encoding_failure_rate": rep.encoding_failure_rate,
                "exact": True,
            })
        elif scheme == "decode":
            dist = _dist_from_config(cfg, doc)
            chan = _channel_from_config(cfg["channel"], doc)
            r = cfg["rates"]
            cb = sim.build_wiretap_codebook(
                dist,
                sim.WiretapRates(r["message"], r["total"], r.get("satellite", 0.0)),
                params, args.seed, caps,
            )
            pe, trials = sim.decoding_error_rate(
                cb, chan, params, cfg.get("trials", 1000), args.seed,
                decoder=cfg.get("decoder", "indirect"),
            )
            rows.append({"n": n, "p_error": pe, "trials": trials})
        elif scheme == "lemma1":
            dist = _dist_from_config(cfg, doc)
            rep = sim.lemma1_experiment(
                dist, cfg["s_rate"], params, cfg.get("trials", 1000), args.seed, caps
            )
            rows.append({
                "n": n,
                "exceedance_frequency": rep.exceedance_frequency,
                "threshold": rep.threshold,
                "mean_count": rep.mean_count,
                "info_rate": rep.info_rate,
                "in_concentration_regime": rep.in_concentration_regime,
            })
        else:
            raise CliError(f"unknown scheme {scheme!r}")
    payload = {"subcommand": "simulate", "scheme": scheme, "seed": args.seed, "rows": rows}
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue().rstrip()
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return EXIT_OK
    human = "\n".join(str(r) for r in rows)
    _emit(args, payload, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# repro-example
# ---------------------------------------------------------------------------


def cmd_repro_example(args) -> int:
    _require_seed(args)
    rep = fig1.reproduce_example(
        SearchBudget(restarts=args.restarts, seed=args.seed, grid_points=args.grid,
                     refine_sweeps=args.sweeps),
        q2_card=args.q2_card,
        v2_card=args.v2_card,
    )
    payload = {
        "subcommand": "repro-example",
        "achievable": rep.achievable,
        "rck_best": rep.rck_best,
        "rck_gap": rep.rck_gap,
        "gap_is_strict": rep.gap_is_strict,
        "identity_max_deviation": rep.identity_max_deviation,
        "identity_points_checked": rep.identity_points_checked,
        "restarts": rep.restarts,
        "evaluations": rep.evaluations,
    }
    human = (
        f"achievable = {rep.achievable:.12f} (exactly 5/6 within float error)\n"
        f"R_CK best found = {rep.rck_best:.6f} < achievable: {rep.rck_best < rep.achievable}\n"
        f"gap below 5/6 = {rep.rck_gap:.6f} (strict at 1e-3: {rep.gap_is_strict})\n"
        f"zero-leakage identity: max deviation {rep.identity_max_deviation:.2e} "
        f"over {rep.identity_points_checked} trace points"
    )
    if args.export_channel:
        with open(args.export_channel, "w") as fh:
            fh.write(fig1.export_spec())
        payload["channel_spec_file"] = args.export_channel
        human += f"\nchannel spec written to {args.export_channel}"
    _emit(args, payload, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wiretap3", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, seeded=False):
        sp.add_argument("--format", choices=("human", "json", "csv"), default="human")
        sp.add_argument("-o", "--output", default=None)
        if seeded:
            sp.add_argument("--seed", type=int, default=None)
            sp.add_argument("--restarts", type=int, default=64)
            sp.add_argument("--grid", type=int, default=20)
            sp.add_argument("--sweeps", type=int, default=60)

    sp = sub.add_parser("info", help="information measures of spec objects")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--input", default=None, help="pmf name for channel MI readouts")
    common(sp)
    sp.set_defaults(fn=cmd_info)

    sp = sub.add_parser("ordering", help="degraded / less-noisy / more-capable checks")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--relation", required=True,
                    choices=("degraded", "less_noisy", "more_capable"))
    sp.add_argument("--aux-card", type=int, default=2)
    common(sp, seeded=True)
    sp.set_defaults(fn=cmd_ordering)

    sp = sub.add_parser("bound", help="evaluate or maximize a scalar rate bound")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--id", required=True, choices=bounds.bound_ids())
    sp.add_argument("--y1", required=True)
    sp.add_argument("--y2", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--dist", default=None, help="evaluate at this factored dist")
    sp.add_argument("--card", action="append", help="aux cardinality NAME=K")
    common(sp, seeded=True)
    sp.set_defaults(fn=cmd_bound)

    sp = sub.add_parser("region", help="sample a rate region at a distribution")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--id", required=True,
                    choices=("theorem2", "prop1", "prop2-inner", "prop3-outer"))
    sp.add_argument("--dist", required=True)
    sp.add_argument("--y1", default=None)
    sp.add_argument("--y2", default=None)
    sp.add_argument("--z", default=None)
    sp.add_argument("--y1z3", default=None, help="joint X -> (Y1, Z3) channel name")
    sp.add_argument("--z2", default=None, help="Y1 -> Z2 channel name")
    sp.add_argument("--point", default=None, help="membership test, e.g. R0=0.1,R1=0.2")
    common(sp)
    sp.set_defaults(fn=cmd_region)

    sp = sub.add_parser("fme", help="eliminate / reduce / compare inequality systems")
    sp.add_argument("--system", default=None)
    sp.add_argument("--eliminate", default=None, help="comma-separated variables")
    sp.add_argument("--reduce", action="store_true")
    sp.add_argument("--compare", default=None)
    sp.add_argument("--fixture", default=None, choices=fixture_runs.fixture_names())
    common(sp)
    sp.set_defaults(fn=cmd_fme)

    sp = sub.add_parser("simulate", help="run a coding experiment from a config file")
    sp.add_argument("--config", required=True)
    common(sp, seeded=True)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("repro-example", help="reproduce the worked example end to end")
    sp.add_argument("--q2-card", type=int, default=3)
    sp.add_argument("--v2-card", type=int, default=4)
    sp.add_argument("--export-channel", default=None,
                    help="also write the example channel as a spec file")
    common(sp, seeded=True)
    sp.set_defaults(fn=cmd_repro_example)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except sim.CapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (
        CliError,
        ChannelSpecError,
        fme.SpecFormatError,
        DistributionError,
        AxisError,
        bounds.PatternError,
        FileNotFoundError,
        KeyError,
        json.JSONDecodeError,
        ValueError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
