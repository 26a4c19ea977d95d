"""Command-line interface.

Subcommands: ``convert`` (text table -> .data), ``inspect``, ``loo``,
``separate``, ``split``, ``predict`` (unlabeled batch), ``mlp-train``,
``mlp-augment``, ``serve`` and ``grid``.  Evaluation commands write
``results.html``, ``statistics.html`` and ``report.jsonl`` into ``--out-dir``.

Exit status: 0 on success, 1 with a one-line diagnostic on validation or data
errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evaluation, mlp as mlp_mod, reports, tcm as tcm_mod
from .datamodel import (DataError, DataSet, SplitSpec, parse_text_table,
                        random_split, read_data_file, write_data_file)
from .distance import DistanceSpec
from .evaluation import BaselineConfig, EvalError
from .grid import GridError, evaluate_grid, request_from_dict, response_to_dict
from .tcm import TcmConfig, TcmError

_DELIMITERS = {"tab": "\t", "comma": ",", "semicolon": ";", "space": " "}


class CliError(Exception):
    pass


def _delimiter(text: str) -> str:
    if text in _DELIMITERS:
        return _DELIMITERS[text]
    if len(text) == 1:
        return text
    raise CliError(f"delimiter must be tab/comma/semicolon/space or one character, "
                   f"got {text!r}")


def _load_dataset(path: str) -> DataSet:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"no such data file: {path}")
    return read_data_file(p.read_bytes(), name=p.stem)


def _config(args) -> TcmConfig | BaselineConfig:
    spec = DistanceSpec.parse(args.metric)
    algorithm = getattr(args, "algorithm", "tcm")
    if algorithm == "tcm":
        return TcmConfig(k=args.k, spec=spec)
    return BaselineConfig(algorithm=algorithm, k=args.k, spec=spec)


def _write_outputs(args, run, stats) -> None:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bundle = reports.render_reports(run, stats)
    (out_dir / "results.html").write_text(bundle.results_html, encoding="utf-8")
    (out_dir / "statistics.html").write_text(bundle.statistics_html,
                                             encoding="utf-8")
    (out_dir / "report.jsonl").write_text(bundle.machine_report, encoding="utf-8")
    print(f"wrote {out_dir / 'results.html'}, {out_dir / 'statistics.html'}, "
          f"{out_dir / 'report.jsonl'}")
    if stats is not None and stats.overall_accuracy is not None:
        marked = (f" (significance {stats.significance_threshold:g}%, "
                  f"{stats.not_classified_pct:.1f}% not classified)"
                  if stats.significance_threshold else "")
        print(f"overall accuracy {stats.overall_accuracy:.1f}%{marked}")


def _stats_for(args, run):
    positive = getattr(args, "positive_class", None)
    if args.significance is not None:
        return evaluation.mark_significance(run, args.significance,
                                            args.hist_interval, positive)
    return evaluation.compute_statistics(run, args.hist_interval, positive)


def _cached_separate(args, train, test, config):
    cache = None
    if isinstance(config, TcmConfig) and args.cache:
        cache_path = Path(args.cache)
        if cache_path.is_file():
            try:
                cache = tcm_mod.deserialize_cache(cache_path.read_bytes(),
                                                  train, config)
                print(f"loaded cache {cache_path}")
            except tcm_mod.CacheMismatchError as exc:
                print(f"cache ignored: {exc}", file=sys.stderr)
        if cache is None:
            cache = tcm_mod.build_cache(train, config)
            cache_path.write_bytes(tcm_mod.serialize_cache(cache))
            print(f"saved cache {cache_path}")
    return evaluation.separate_test(train, test, config,
                                    attr_echo=not args.no_attr_echo,
                                    cache=cache)


def _cmd_convert(args) -> int:
    raw = Path(args.input).read_text(encoding="utf-8")
    class_names = args.class_names.split(",") if args.class_names else None
    ds = parse_text_table(raw, delimiter=_delimiter(args.delimiter),
                          has_header=args.has_header,
                          classes_known=args.classes_known,
                          name=args.name or Path(args.output).stem,
                          class_names=class_names,
                          class_count=args.class_count)
    Path(args.output).write_bytes(write_data_file(ds))
    print(f"wrote {args.output}: {ds.l} examples, {ds.n} attributes, "
          f"{ds.C} classes")
    return 0


def _cmd_inspect(args) -> int:
    ds = _load_dataset(args.data)
    counts = ds.class_counts()
    print(f"name:        {ds.name}")
    print(f"examples:    {ds.l}")
    print(f"attributes:  {ds.n}"
          + (f" ({', '.join(ds.attribute_names)})" if ds.attribute_names else ""))
    print(f"classes:     {ds.C} ({', '.join(ds.class_names)})")
    print(f"labels:      {'present' if ds.classes_known else 'absent'}")
    if ds.classes_known:
        for name, cnt in zip(ds.class_names, counts):
            print(f"  {name}: {cnt}")
    return 0


def _cmd_loo(args) -> int:
    data = _load_dataset(args.data)
    run = evaluation.leave_one_out(data, _config(args),
                                   attr_echo=not args.no_attr_echo)
    _write_outputs(args, run, _stats_for(args, run))
    return 0


def _cmd_separate(args) -> int:
    train = _load_dataset(args.train)
    test = _load_dataset(args.test)
    run = _cached_separate(args, train, test, _config(args))
    _write_outputs(args, run, _stats_for(args, run))
    return 0


def _cmd_split(args) -> int:
    data = _load_dataset(args.data)
    train, test = random_split(data, SplitSpec(test_count=args.test_count,
                                               seed=args.seed))
    Path(args.out_train).write_bytes(write_data_file(train))
    Path(args.out_test).write_bytes(write_data_file(test))
    print(f"wrote {args.out_train} ({train.l} examples) and "
          f"{args.out_test} ({test.l} examples)")
    return 0


def _cmd_predict(args) -> int:
    train = _load_dataset(args.train)
    raw = Path(args.input).read_text(encoding="utf-8")
    queries = parse_text_table(raw, delimiter=_delimiter(args.delimiter),
                               has_header=args.has_header, classes_known=False,
                               name=Path(args.input).stem,
                               class_count=train.C,
                               class_names=train.class_names)
    config = _config(args)
    if not isinstance(config, TcmConfig):
        raise CliError("predict supports only the TCM algorithm")
    run = _cached_separate(args, train, queries, config)
    _write_outputs(args, run, None)
    return 0


def _cmd_mlp_train(args) -> int:
    data = _load_dataset(args.data)
    layers = tuple(int(s) for s in args.layers.split(","))
    overrides = None
    if args.class_target:
        overrides = {}
        for item in args.class_target:
            cls, _, val = item.partition(":")
            overrides[int(cls)] = float(val)
    config = mlp_mod.MlpConfig(
        layer_sizes=layers, eta=args.eta, init_range=args.init_range,
        weight_decay=args.decay, target_on=args.target_on,
        target_off=args.target_off, per_class_target_on=overrides,
        updates=args.updates, trace_every=args.trace_every, seed=args.seed,
    )
    if layers[0] != data.n:
        raise CliError(f"first layer must match the {data.n} attributes")
    if layers[-1] != data.C:
        raise CliError(f"last layer must match the {data.C} classes")
    net = mlp_mod.init(config)
    trace = mlp_mod.train_stochastic(net, data, config)
    Path(args.weights).write_bytes(mlp_mod.serialize_weights(net))
    if args.trace:
        lines = [f"{step}\t{sse!r}" for step, sse in trace.samples]
        Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8")
    X = data.features_matrix()
    y = data.labels_array()
    correct = sum(1 for i in range(data.l)
                  if mlp_mod.predict_class(net, X[i]) == y[i])
    print(f"trained {args.layers} network for {args.updates} updates; "
          f"final SSE {trace.samples[-1][1]:.4f}; "
          f"training accuracy {correct / data.l * 100:.1f}%")
    print(f"wrote weights {args.weights}")
    return 0


def _cmd_mlp_augment(args) -> int:
    data = _load_dataset(args.data)
    net = mlp_mod.deserialize_weights(Path(args.weights).read_bytes())
    augmented = mlp_mod.augment(net, data, args.hidden)
    Path(args.output).write_bytes(write_data_file(augmented))
    print(f"wrote {args.output}: {augmented.l} examples, "
          f"{augmented.n} hidden-activation attributes")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve
    static = args.static
    if static is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static = str(bundled) if bundled.is_dir() else None
    serve(port=args.port, host=args.host, static_dir=static)
    return 0


def _cmd_grid(args) -> int:
    if args.request:
        body = json.loads(Path(args.request).read_text(encoding="utf-8"))
    else:
        body = json.load(sys.stdin)
    resp = response_to_dict(evaluate_grid(request_from_dict(body)))
    text = json.dumps(resp)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        print(text)
    return 0


def _add_shared(p: argparse.ArgumentParser, *, algorithm=False, cache=False):
    p.add_argument("--k", type=int, default=1, help="nearest-neighbour count")
    p.add_argument("--metric", default="euclidean",
                   help="euclidean | minkowski:<p> | poly:<d>:<c>")
    p.add_argument("--significance", type=float, default=None,
                   help="credibility threshold in percent")
    p.add_argument("--hist-interval", type=int, default=10)
    p.add_argument("--out-dir", default="tcmnn-out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-attr-echo", action="store_true",
                   help="omit attribute values from the results document")
    p.add_argument("--positive-class", type=int, default=None,
                   help="class index treated as positive for sensitivity")
    if algorithm:
        p.add_argument("--algorithm", choices=("tcm", "knn", "dwknn"),
                       default="tcm")
    if cache:
        p.add_argument("--cache", default=None,
                       help="cache file: load when the fingerprint matches, "
                            "else build and save")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcmnn",
        description="Transductive confidence machine on nearest-neighbour "
                    "nonconformity",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a text table to a .data file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--delimiter", default="tab")
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--classes-known", action="store_true")
    p.add_argument("--class-names", default=None,
                   help="comma-separated class names")
    p.add_argument("--class-count", type=int, default=None)
    p.add_argument("--name", default=None)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("inspect", help="summarise a .data file")
    p.add_argument("--data", required=True)
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("loo", help="leave-one-out test")
    p.add_argument("--data", required=True)
    _add_shared(p, algorithm=True)
    p.set_defaults(func=_cmd_loo)

    p = sub.add_parser("separate", help="separate train/test run")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    _add_shared(p, algorithm=True, cache=True)
    p.set_defaults(func=_cmd_separate)

    p = sub.add_parser("split", help="random split of one data file")
    p.add_argument("--data", required=True)
    p.add_argument("--test-count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("predict", help="classify an unlabeled batch")
    p.add_argument("--train", required=True)
    p.add_argument("--input", required=True,
                   help="text table of unlabeled query rows")
    p.add_argument("--delimiter", default="tab")
    p.add_argument("--has-header", action="store_true")
    _add_shared(p, cache=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("mlp-train", help="train the feed-forward baseline")
    p.add_argument("--data", required=True)
    p.add_argument("--layers", required=True, help="e.g. 3,5,2")
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--init-range", type=float, default=0.05)
    p.add_argument("--decay", type=float, default=0.0)
    p.add_argument("--target-on", type=float, default=0.999)
    p.add_argument("--target-off", type=float, default=0.001)
    p.add_argument("--class-target", action="append", default=None,
                   metavar="CLASS:VALUE",
                   help="per-class on-target override, e.g. 0:0.5")
    p.add_argument("--updates", type=int, default=100_000)
    p.add_argument("--trace-every", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", required=True)
    p.add_argument("--trace", default=None)
    p.set_defaults(func=_cmd_mlp_train)

    p = sub.add_parser("mlp-augment",
                       help="replace features with hidden activations")
    p.add_argument("--data", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--hidden", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_mlp_augment)

    p = sub.add_parser("serve", help="run the explorer service")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", default=None,
                   help="directory of explorer assets (default: bundled "
                        "frontend/dist when present)")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("grid", help="evaluate a grid request from JSON")
    p.add_argument("--request", default=None,
                   help="request file (default: stdin)")
    p.add_argument("--output", default=None,
                   help="response file (default: stdout)")
    p.set_defaults(func=_cmd_grid)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, DataError, TcmError, EvalError, GridError,
            mlp_mod.MlpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
