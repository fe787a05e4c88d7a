"""Command-line interface.

Stages talk to each other through the matrix file format, so experiments
compose from primitives, e.g.::

    netpredict ingest events.txt -o m.txt --bin 3600 --undirected
    netpredict perturb m.txt -o m_drop.txt --drop-fraction 0.3 --seed 1
    netpredict profile m_drop.txt -o report.json --seed 1

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path

from . import __version__, corpus, measures, sweeps
from ._errors import DataError, NetPredictError, NumericError
from .markov import markov_accuracy

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(NetPredictError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _clean(obj):
    """JSON-safe copy: NaN becomes null."""
    if isinstance(obj, float):
        return None if math.isnan(obj) else obj
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _document(command, config, inputs, result):
    return _clean(
        {
            "schema_version": SCHEMA_VERSION,
            "tool": "netpredict",
            "version": __version__,
            "command": command,
            "config": config,
            "inputs": inputs,
            "result": result,
        }
    )


def _emit_json(doc, out):
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "output")}


def _read_filtered(args):
    em = corpus.read_matrix(args.matrix)
    if getattr(args, "no_filter", False):
        return corpus.FilteredMatrix(em, corpus.activation_rates(em), tuple(range(em.m)), "explicit permutation")
    return corpus.filter_matrix(em, args.mass_frac, args.act_thresh, args.m_theta)


def _range(text, n):
    """Parse ``A:B`` with optional percentages, e.g. ``0:40%``."""
    try:
        a, b = text.split(":")
    except ValueError:
        raise UsageError(f"range {text!r} must look like START:STOP") from None

    def one(s, default):
        s = s.strip()
        if not s:
            return default
        if s.endswith("%"):
            return int(round(float(s[:-1]) / 100 * n))
        return int(s)

    return one(a, 0), one(b, n)


# --- commands -----------------------------------------------------------------


def cmd_ingest(args):
    events = corpus.read_events(args.events)
    em = corpus.ingest_events(
        events, args.bin, directed=not args.undirected, aggregation=args.aggregation, levels=args.levels
    )
    corpus.write_matrix(em, args.output)
    return EXIT_OK


def cmd_filter(args):
    corpus.write_matrix(_read_filtered(args), args.output)
    return EXIT_OK


def cmd_perturb(args):
    em = corpus.read_matrix(args.matrix)
    f = corpus.FilteredMatrix(em, corpus.activation_rates(em), tuple(range(em.m)), "explicit permutation")
    if args.permute_rows:
        f = corpus.permute_rows(f, args.seed)
    if args.shuffle == "global":
        f = corpus.shuffle_global(f, args.seed)
    elif args.shuffle == "rows":
        f = corpus.shuffle_within_rows(f, args.seed)
    if args.drop_fraction:
        f = corpus.drop_links(f, args.drop_fraction, args.seed)
    corpus.write_matrix(f, args.output)
    return EXIT_OK


def cmd_slice(args):
    em = corpus.read_matrix(args.matrix)
    f = corpus.FilteredMatrix(em, corpus.activation_rates(em), tuple(range(em.m)), "explicit permutation")
    rows = _range(args.rows, em.m)
    cols = _range(args.cols, em.T)
    corpus.write_matrix(corpus.slice_matrix(f, rows, cols), args.output)
    return EXIT_OK


def _kv(pairs):
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"expected KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def cmd_synth(args):
    values = sweeps.coerce_params(args.family, _kv(args.param))
    em, params = sweeps.generate(args.family, values, args.seed)
    corpus.write_matrix(em, args.output)
    sidecar = {"family": args.family, "params": params.to_dict(), "tool": "netpredict", "version": __version__}
    Path(str(args.output) + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_sweep(args):
    grid = {}
    for item in args.grid:
        if "=" not in item:
            raise UsageError(f"grid axis must be KEY=V1,V2,..., got {item!r}")
        key, vals = item.split("=", 1)
        key = key.strip().replace("-", "_")
        raw = [v for v in vals.split(",") if v.strip()]
        subkeys = key.split("+")
        coerced = [sweeps.coerce_params(args.family, {subkeys[0]: v})[subkeys[0]] for v in raw]
        for sub in subkeys[1:]:
            sweeps.coerce_params(args.family, {sub: raw[0]})
        grid[key] = coerced
    fixed = sweeps.coerce_params(args.family, _kv(args.param))
    rows, _ = sweeps.run_sweep(
        args.family,
        grid,
        seeds=args.seeds,
        base_seed=args.seed,
        fixed=fixed,
        baseline_runs=args.baseline_runs,
        with_tep=not args.no_tep,
        with_markov=args.markov,
        markov_order=args.order,
    )
    buf = io.StringIO()
    fields = list(rows[0].keys())
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    header = f"# netpredict {__version__} schema_version={SCHEMA_VERSION} sweep family={args.family} seed={args.seed}\n"
    text = header + buf.getvalue()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_profile(args):
    filtered = _read_filtered(args)
    rep = measures.profile(
        filtered,
        row_orders=args.row_orders,
        baseline_runs=args.baseline_runs,
        seed=args.seed,
        with_tep=not args.no_tep,
        hamming_pairs=args.hamming_pairs,
    )
    result = rep.to_dict()
    result["filtered_shape"] = list(filtered.shape)
    result["kept_rows"] = list(filtered.kept_rows)
    doc = _document("profile", _config(args), {"matrix": {"path": str(args.matrix), "sha256": _digest(args.matrix)}}, result)
    _emit_json(doc, args.output)
    if rep.nttp_undefined:
        raise NumericError("nttp undefined: baseline predictability is 1 but ttp < 1")
    return EXIT_OK


def cmd_markov(args):
    filtered = _read_filtered(args)
    acc, per_link = markov_accuracy(filtered, args.order, args.train_frac, args.seed)
    res = measures.ttp(filtered, args.row_orders, args.seed)
    result = {
        "accuracy": acc,
        "ttp": res.ttp,
        "gap": res.ttp - acc,
        "order": args.order,
        "per_link": [{"link": list(l), "accuracy": float(a)} for l, a in zip(filtered.matrix.link_ids, per_link)],
        "filtered_shape": list(filtered.shape),
    }
    doc = _document("markov", _config(args), {"matrix": {"path": str(args.matrix), "sha256": _digest(args.matrix)}}, result)
    _emit_json(doc, args.output)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def _filter_flags(p):
    p.add_argument("--mass-frac", type=float, default=0.6, help="activation mass kept by the first rule")
    p.add_argument("--act-thresh", type=float, default=0.1, help="minimum activation rate for the second rule")
    p.add_argument("--m-theta", type=int, default=1000, help="row count switching between the two rules")
    p.add_argument("--no-filter", action="store_true", help="use the matrix rows as given")


def build_parser():
    parser = _Parser(prog="netpredict", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"netpredict {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="event list -> matrix file")
    p.add_argument("events")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--bin", type=float, default=1.0, metavar="SECONDS")
    p.add_argument("--levels", type=int, default=None, metavar="K")
    p.add_argument("--aggregation", choices=corpus.AGGREGATIONS, default="count")
    p.add_argument("--undirected", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("filter", help="keep and sort the most active links")
    p.add_argument("matrix")
    p.add_argument("-o", "--output", required=True)
    _filter_flags(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("perturb", help="row permutation, shuffling, missing-link removal")
    p.add_argument("matrix")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--drop-fraction", type=float, default=0.0, metavar="F")
    p.add_argument("--shuffle", choices=("none", "global", "rows"), default="none")
    p.add_argument("--permute-rows", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("slice", help="contiguous submatrix")
    p.add_argument("matrix")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--rows", default=":", help="START:STOP, percentages allowed")
    p.add_argument("--cols", default=":", help="START:STOP, percentages allowed")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("family", choices=sorted(sweeps.FAMILIES))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="multi-seed parameter sweep -> CSV")
    p.add_argument("family", choices=sorted(sweeps.FAMILIES))
    p.add_argument("--grid", action="append", required=True, metavar="KEY=V1,V2", help="KEY may tie parameters: beta+gamma")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--baseline-runs", type=int, default=40)
    p.add_argument("--no-tep", action="store_true")
    p.add_argument("--markov", action="store_true", help="add Markov accuracy columns")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("profile", help="TTP, baseline, NTTP, TeP/NTeP report")
    p.add_argument("matrix")
    p.add_argument("-o", "--output")
    _filter_flags(p)
    p.add_argument("--row-orders", type=int, default=1, metavar="R")
    p.add_argument("--baseline-runs", type=int, default=40)
    p.add_argument("--hamming-pairs", type=int, default=None, metavar="P")
    p.add_argument("--no-tep", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("markov", help="Markov baseline accuracy next to TTP")
    p.add_argument("matrix")
    p.add_argument("-o", "--output")
    _filter_flags(p)
    p.add_argument("--order", type=int, default=1, metavar="L")
    p.add_argument("--train-frac", type=float, default=0.7)
    p.add_argument("--row-orders", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_markov)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"netpredict: error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"netpredict: error[numeric]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError) as exc:
        print(f"netpredict: error[data]: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
