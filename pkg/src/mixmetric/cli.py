"""Command-line front end.

Commands: fit, dist, matrix, predict, eval. Distances and class scores
print with 17 significant digits so output can be compared and reparsed
exactly. Output files are written to a temporary sibling and renamed into
place, so a failed run never leaves a half-written file behind.

Exit codes: 0 success, 1 usage error, 2 data or model error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import Callable, Optional, Sequence

from .dataset import parse_csv, parse_row
from .errors import MixMetricError
from .matrix import (
    pairwise_matrix,
    resolve_threads,
    write_matrix_binary,
    write_matrix_text,
)
from .metric import fit_metric, record_distance
from .model_io import load_model, save_model
from .predictor import loo_accuracy, predict, predictor_from_fitted
from .schema import parse_schema


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def format_value(v: float) -> str:
    return f"{v:.17g}"


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return f.read()


def _atomic_write(path: str, write: Callable, binary: bool = False) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mixmetric-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb" if binary else "w", **({} if binary else {"encoding": "utf-8"})) as f:
            write(f)
        # mkstemp creates 0600; give the final file ordinary umask-honoring bits
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mixmetric",
        description="Distances and nearest-neighbor prediction for mixed data",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p_fit = sub.add_parser("fit", help="fit attribute models and write a model document")
    p_fit.add_argument("--schema", required=True, help="schema document path")
    p_fit.add_argument("--data", required=True, help="training CSV path")
    p_fit.add_argument("--out", required=True, help="model document output path")

    p_dist = sub.add_parser("dist", help="distance between two raw CSV rows")
    p_dist.add_argument("--model", required=True, help="model document path")
    p_dist.add_argument("--a", required=True, help="first record as a raw CSV row")
    p_dist.add_argument("--b", required=True, help="second record as a raw CSV row")

    p_mat = sub.add_parser("matrix", help="condensed pairwise distance matrix")
    p_mat.add_argument("--model", required=True, help="model document path")
    p_mat.add_argument("--data", required=True, help="CSV path")
    p_mat.add_argument("--out", required=True, help="matrix output path")
    p_mat.add_argument("--format", choices=("text", "binary"), default="text")
    p_mat.add_argument("--threads", type=int, default=None, help="parallelism cap")

    p_pred = sub.add_parser("predict", help="classify a query row")
    p_pred.add_argument("--model", required=True, help="model document path")
    p_pred.add_argument("--data", required=True, help="training CSV path")
    p_pred.add_argument("--query", required=True, help="query record as a raw CSV row")
    p_pred.add_argument("--k", type=int, default=5, help="neighbor count (default 5)")

    p_eval = sub.add_parser("eval", help="leave-one-out accuracy")
    p_eval.add_argument("--schema", required=True, help="schema document path")
    p_eval.add_argument("--data", required=True, help="CSV path")
    p_eval.add_argument("--k", type=int, default=5, help="neighbor count (default 5)")

    return parser


def _cmd_fit(args: argparse.Namespace) -> int:
    schema = parse_schema(_read_text(args.schema))
    data = parse_csv(_read_text(args.data), schema)
    fm = fit_metric(data)
    text = save_model(fm)
    _atomic_write(args.out, lambda f: f.write(text))
    return 0


def _cmd_dist(args: argparse.Namespace) -> int:
    fm = load_model(_read_text(args.model))
    a = parse_row(args.a, fm.schema)
    b = parse_row(args.b, fm.schema)
    print(format_value(record_distance(fm, a, b)))
    return 0


def _cmd_matrix(args: argparse.Namespace) -> int:
    if args.threads is not None and args.threads < 1:
        raise UsageError(f"--threads must be at least 1, got {args.threads}")
    fm = load_model(_read_text(args.model))
    data = parse_csv(_read_text(args.data), fm.schema)
    m = pairwise_matrix(fm, data, threads=resolve_threads(args.threads))
    if args.format == "binary":
        _atomic_write(args.out, lambda f: write_matrix_binary(m, f), binary=True)
    else:
        _atomic_write(args.out, lambda f: write_matrix_text(m, f))
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise UsageError(f"--k must be at least 1, got {args.k}")
    fm = load_model(_read_text(args.model))
    data = parse_csv(_read_text(args.data), fm.schema)
    p = predictor_from_fitted(fm, data)
    query = parse_row(args.query, fm.schema)
    result = predict(p, query, args.k)
    print(f"label={result.label}")
    for c in p.classes:
        print(f"score[{c}]={format_value(result.class_scores[c])}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise UsageError(f"--k must be at least 1, got {args.k}")
    schema = parse_schema(_read_text(args.schema))
    data = parse_csv(_read_text(args.data), schema)
    accuracy = loo_accuracy(data, args.k)
    print(f"accuracy={accuracy!r}")
    return 0


_COMMANDS = {
    "fit": _cmd_fit,
    "dist": _cmd_dist,
    "matrix": _cmd_matrix,
    "predict": _cmd_predict,
    "eval": _cmd_eval,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required (fit, dist, matrix, predict, eval)")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except MixMetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
