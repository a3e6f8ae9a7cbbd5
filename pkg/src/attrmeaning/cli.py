"""Batch command-line surface and all file formats.

Subcommands: discover, distance, bench (split-validate | noise-curve),
keywords (generate | evaluate).  This is the only module that touches
files.  Formats:

* matrix CSV: UTF-8, comma-separated, no header, one row per instance;
  feature files hold decimal reals, attribute/code files hold only the
  tokens ``1`` and ``-1``;
* naming CSV: header ``bit,positive_name`` (empty name = unnameable bit);
* truth CSV: header ``item_id,keyword,suitable`` with suitable in {0, 1};
  optional actions CSV ``item_id,action``;
* models and reports: JSON; reports carry a ``meta`` block (version,
  command line, seed) and never a timestamp, so identical invocations
  produce byte-identical files.

Exit codes: 0 success, 2 usage, 3 input/format, 4 numeric failure.
All randomness flows from ``--seed``; output files are written atomically.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
import warnings

import numpy as np

from . import __version__
from .attributes import as_attribute_matrix
from .bench import SplitProtocol, run_noise_curve, run_split_validation
from .discovery import (
    LiftClampWarning,
    LshModel,
    MmcHyperparams,
    MmcModel,
    PcaModel,
    ShModel,
    encode,
    fit_pca,
    apply_pca,
    lift_features,
    train_lsh,
    train_mmc,
    train_sh,
)
from .keywords import (
    KeywordReport,
    NamingTable,
    TruthTable,
    evaluate_hit_rate,
    generate_keywords,
    merge_duplicates,
)
from .subspace import SolverConfig, distance_cvx, distance_plain

__all__ = ["main", "model_to_dict", "model_from_dict"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4


class InputFormatError(Exception):
    """A file failed to parse; maps to exit code 3."""


# ---------------------------------------------------------------------------
# readers (line/field positions are 1-based, as in editors)


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror or exc}") from exc
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise InputFormatError(f"{path}: file is empty")
    return lines


def read_feature_csv(path) -> np.ndarray:
    """Headerless CSV of decimal reals, one instance per row."""
    lines = _read_lines(path)
    rows = []
    width = None
    for ln, line in enumerate(lines, start=1):
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise InputFormatError(
                f"{path}: line {ln} has {len(fields)} fields, expected {width}"
            )
        row = []
        for fn, tok in enumerate(fields, start=1):
            try:
                row.append(float(tok.strip()))
            except ValueError:
                raise InputFormatError(
                    f"{path}: line {ln}, field {fn}: {tok.strip()!r} is not a number"
                ) from None
        rows.append(row)
    F = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(F).all():
        bad = np.argwhere(~np.isfinite(F))[0]
        raise InputFormatError(
            f"{path}: line {bad[0] + 1}, field {bad[1] + 1}: non-finite value"
        )
    return F


def read_attribute_csv(path) -> np.ndarray:
    """Headerless CSV whose only tokens are 1 and -1."""
    lines = _read_lines(path)
    rows = []
    width = None
    for ln, line in enumerate(lines, start=1):
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise InputFormatError(
                f"{path}: line {ln} has {len(fields)} fields, expected {width}"
            )
        row = []
        for fn, tok in enumerate(fields, start=1):
            tok = tok.strip()
            if tok == "1":
                row.append(1)
            elif tok == "-1":
                row.append(-1)
            else:
                raise InputFormatError(
                    f"{path}: line {ln}, field {fn}: {tok!r} is not an "
                    f"attribute token (expected 1 or -1)"
                )
        rows.append(row)
    return np.asarray(rows, dtype=np.int8)


def read_label_csv(path) -> np.ndarray:
    """One integer class label per line."""
    lines = _read_lines(path)
    labels = []
    for ln, line in enumerate(lines, start=1):
        tok = line.split(",")[0].strip()
        try:
            labels.append(int(tok))
        except ValueError:
            raise InputFormatError(
                f"{path}: line {ln}: {tok!r} is not an integer label"
            ) from None
    return np.asarray(labels, dtype=np.int64)


def _read_csv_with_header(path, header):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror or exc}") from exc
    rows = [row for row in rows if any(field.strip() for field in row)]
    if not rows:
        raise InputFormatError(f"{path}: file is empty")
    got = [field.strip() for field in rows[0]]
    if got != list(header):
        raise InputFormatError(
            f"{path}: expected header {','.join(header)!r}, got {','.join(got)!r}"
        )
    return rows[1:]


def read_naming_csv(path) -> NamingTable:
    """``bit,positive_name`` table; empty names mark unnameable bits."""
    entries = {}
    seen = set()
    for ln, row in enumerate(_read_csv_with_header(path, ("bit", "positive_name")), start=2):
        if len(row) != 2:
            raise InputFormatError(
                f"{path}: line {ln} has {len(row)} fields, expected 2"
            )
        try:
            bit = int(row[0].strip())
        except ValueError:
            raise InputFormatError(
                f"{path}: line {ln}: {row[0].strip()!r} is not a bit index"
            ) from None
        if bit in seen:
            raise InputFormatError(f"{path}: line {ln}: bit {bit} listed twice")
        seen.add(bit)
        name = row[1].strip()
        if name:
            entries[bit] = name
    try:
        return NamingTable(entries)
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


def read_truth_csv(path, actions_path=None) -> TruthTable:
    """``item_id,keyword,suitable`` judgments, optionally with an action table."""
    judgments = {}
    for ln, row in enumerate(
        _read_csv_with_header(path, ("item_id", "keyword", "suitable")), start=2
    ):
        if len(row) != 3:
            raise InputFormatError(
                f"{path}: line {ln} has {len(row)} fields, expected 3"
            )
        item, keyword, tok = row[0].strip(), row[1].strip(), row[2].strip()
        if tok not in ("0", "1"):
            raise InputFormatError(
                f"{path}: line {ln}: suitable must be 0 or 1, got {tok!r}"
            )
        key = (item, keyword)
        if key in judgments:
            raise InputFormatError(
                f"{path}: line {ln}: duplicate judgment for ({item!r}, {keyword!r})"
            )
        judgments[key] = int(tok)

    actions = None
    if actions_path is not None:
        actions = {}
        for ln, row in enumerate(
            _read_csv_with_header(actions_path, ("item_id", "action")), start=2
        ):
            if len(row) != 2:
                raise InputFormatError(
                    f"{actions_path}: line {ln} has {len(row)} fields, expected 2"
                )
            item, action = row[0].strip(), row[1].strip()
            if item in actions:
                raise InputFormatError(
                    f"{actions_path}: line {ln}: duplicate item {item!r}"
                )
            actions[item] = action
    return TruthTable(judgments=judgments, actions=actions)


def read_keywords_json(path) -> KeywordReport:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON: {exc}") from exc
    try:
        vocabulary = tuple(str(w) for w in doc["vocabulary"])
        items = {
            str(item): tuple(str(w) for w in words)
            for item, words in doc["items"].items()
        }
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputFormatError(
            f"{path}: expected JSON object with 'vocabulary' and 'items'"
        ) from exc
    vocab_set = set(vocabulary)
    for item, words in items.items():
        for word in words:
            if word not in vocab_set:
                raise InputFormatError(
                    f"{path}: item {item!r} emits {word!r}, which is not in "
                    f"the vocabulary"
                )
    return KeywordReport(items=items, vocabulary=vocabulary)


# ---------------------------------------------------------------------------
# writers


def _atomic_write_text(path, text: str) -> None:
    # write to a sibling temp file, then rename over the target
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".attrmeaning-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_attribute_csv(path, Z) -> None:
    Z = as_attribute_matrix(Z)
    lines = [",".join("1" if v == 1 else "-1" for v in row) for row in Z]
    _atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path, document) -> None:
    _atomic_write_text(path, json.dumps(document, indent=2, sort_keys=True) + "\n")


def write_curve_csv(path, curve) -> None:
    lines = ["count,mean_distance"]
    for count, dist in zip(curve.counts, curve.distances):
        lines.append(f"{count},{float(dist)!r}")
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _meta(args, seed=None) -> dict:
    return {
        "version": __version__,
        "command": "attrmeaning " + " ".join(args._argv),
        "seed": seed,
    }


# ---------------------------------------------------------------------------
# model (de)serialization: {type, dims, bits, seed, payload}


def model_to_dict(model) -> dict:
    """Serialize a coder model to the JSON document schema."""
    if isinstance(model, LshModel):
        return {
            "type": "lsh",
            "dims": model.dims,
            "bits": model.bits,
            "seed": model.seed,
            "payload": {"hyperplanes": model.hyperplanes.tolist()},
        }
    if isinstance(model, ShModel):
        return {
            "type": "sh",
            "dims": model.dims,
            "bits": model.bits,
            "seed": None,
            "payload": {
                "pca": {
                    "mean": model.pca.mean.tolist(),
                    "basis": model.pca.basis.tolist(),
                    "explained_variance": model.pca.explained_variance.tolist(),
                },
                "ranges": model.ranges.tolist(),
                "modes": model.modes.tolist(),
                "eigenvalues": model.eigenvalues.tolist(),
            },
        }
    if isinstance(model, MmcModel):
        return {
            "type": "mmc",
            "dims": model.dims,
            "bits": model.bits,
            "seed": model.seed,
            "payload": {
                "hyperplanes": model.hyperplanes.tolist(),
                "classes": model.classes.tolist(),
                "hyperparams": {
                    "regularization": model.hyperparams.regularization,
                    "epochs": model.hyperparams.epochs,
                    "learning_rate": model.hyperparams.learning_rate,
                },
            },
        }
    raise TypeError(f"unknown coder model type: {type(model).__name__}")


def model_from_dict(doc: dict):
    """Rebuild a coder model from its JSON document."""
    kind = doc.get("type")
    payload = doc.get("payload", {})
    if kind == "lsh":
        return LshModel(
            hyperplanes=np.asarray(payload["hyperplanes"], dtype=np.float64),
            dims=int(doc["dims"]),
            bits=int(doc["bits"]),
            seed=int(doc["seed"]),
        )
    if kind == "sh":
        pca = payload["pca"]
        return ShModel(
            pca=PcaModel(
                mean=np.asarray(pca["mean"], dtype=np.float64),
                basis=np.asarray(pca["basis"], dtype=np.float64),
                explained_variance=np.asarray(
                    pca["explained_variance"], dtype=np.float64
                ),
            ),
            ranges=np.asarray(payload["ranges"], dtype=np.float64),
            modes=np.asarray(payload["modes"], dtype=np.int64),
            eigenvalues=np.asarray(payload["eigenvalues"], dtype=np.float64),
            dims=int(doc["dims"]),
            bits=int(doc["bits"]),
        )
    if kind == "mmc":
        hp = payload["hyperparams"]
        return MmcModel(
            hyperplanes=np.asarray(payload["hyperplanes"], dtype=np.float64),
            classes=np.asarray(payload["classes"], dtype=np.int64),
            dims=int(doc["dims"]),
            bits=int(doc["bits"]),
            seed=int(doc["seed"]),
            hyperparams=MmcHyperparams(
                regularization=float(hp["regularization"]),
                epochs=int(hp["epochs"]),
                learning_rate=float(hp["learning_rate"]),
            ),
        )
    raise InputFormatError(f"unknown model type: {kind!r}")


# ---------------------------------------------------------------------------
# subcommands


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        max_iterations=args.max_iterations,
        objective_tolerance=args.tolerance,
    )


def cmd_discover(args) -> int:
    F = read_feature_csv(args.features)
    labels = read_label_csv(args.labels) if args.labels else None

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", LiftClampWarning)
        if args.lift:
            F = lift_features(F)
        for w in caught:
            print(f"note: {w.message}", file=sys.stderr)
    if args.pca_keep is not None:
        F = apply_pca(fit_pca(F, args.pca_keep), F)

    if args.method == "lsh":
        model = train_lsh(F.shape[1], args.bits, args.seed)
    elif args.method == "sh":
        model = train_sh(F, args.bits)
    else:
        model = train_mmc(F, labels, args.bits, seed=args.seed)
    codes = encode(model, F)

    write_json(args.model_out, model_to_dict(model))
    write_attribute_csv(args.codes_out, codes)
    return EXIT_OK


def cmd_distance(args) -> int:
    S = read_attribute_csv(args.meaningful)
    D = read_attribute_csv(args.discovered)
    config = _solver_config(args)
    if args.mode == "plain":
        result = distance_plain(S, D)
    else:
        result = distance_cvx(S, D, config)
    report = {
        "meta": _meta(args),
        "mode": result.mode,
        "n_instances": int(S.shape[0]),
        "subspace_columns": int(S.shape[1]),
        "discovered_columns": int(D.shape[1]),
        "mean_distance": result.mean_distance,
        "normalized_distance": result.normalized_distance,
        "per_attribute_residuals": result.per_attribute_residuals.tolist(),
        "converged": list(result.converged) if result.converged else None,
    }
    write_json(args.out, report)
    return EXIT_OK


def _parse_method_entries(pairs):
    entries = []
    for spec_pair in pairs or []:
        name, sep, path = spec_pair.partition("=")
        if not sep or not name or not path:
            raise InputFormatError(
                f"--method expects NAME=PATH, got {spec_pair!r}"
            )
        entries.append((name, read_attribute_csv(path)))
    return entries


def cmd_bench_split_validate(args) -> int:
    S = read_attribute_csv(args.meaningful)
    methods = _parse_method_entries(args.method)
    protocol = SplitProtocol(seed=args.seed, left_fraction=args.left_fraction)
    report = run_split_validation(S, methods, protocol, _solver_config(args))
    report = {"meta": _meta(args, seed=args.seed), **report}
    write_json(args.out, report)
    return EXIT_OK


def cmd_bench_noise_curve(args) -> int:
    D = read_attribute_csv(args.discovered)
    S = read_attribute_csv(args.meaningful)
    curve = run_noise_curve(
        D,
        S,
        max_noise=args.max_noise,
        step=args.step,
        trials=args.trials,
        seed=args.seed,
        config=_solver_config(args),
    )
    report = {
        "meta": _meta(args, seed=args.seed),
        "counts": list(curve.counts),
        "distances": list(curve.distances),
        "trials": curve.trials,
        "seed": curve.seed,
    }
    write_json(args.out, report)
    write_curve_csv(args.csv_out, curve)
    return EXIT_OK


def cmd_keywords_generate(args) -> int:
    Z = read_attribute_csv(args.codes)
    names = read_naming_csv(args.names)
    merged, merged_names = merge_duplicates(Z, names)
    report = generate_keywords(merged, merged_names)
    document = {
        "meta": _meta(args),
        "vocabulary": list(report.vocabulary),
        "items": {item: list(words) for item, words in report.items.items()},
    }
    write_json(args.out, document)
    return EXIT_OK


def cmd_keywords_evaluate(args) -> int:
    report = read_keywords_json(args.keywords)
    truth = read_truth_csv(args.truth, args.actions)
    rates = evaluate_hit_rate(report, truth)
    document = {
        "meta": _meta(args),
        "overall": rates.overall,
        "emitted": rates.emitted,
        "suitable": rates.suitable,
        "per_keyword": rates.per_keyword,
        "per_action": rates.per_action,
    }
    write_json(args.out, document)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_solver_flags(parser):
    parser.add_argument(
        "--tolerance",
        type=float,
        default=1e-8,
        help="relative objective-change tolerance (default 1e-8)",
    )
    parser.add_argument(
        "--max-iterations",
        type=int,
        default=10_000,
        help="projected-gradient iteration cap (default 10000)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attrmeaning",
        description="Measure how meaningful discovered binary attributes are.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discover", help="train a coder and emit attribute codes")
    p.add_argument("--method", choices=("lsh", "sh", "mmc"), required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--features", required=True, help="feature CSV (reals, no header)")
    p.add_argument("--labels", help="label CSV, one integer per line (mmc only)")
    p.add_argument(
        "--lift",
        action="store_true",
        help="lift features with the intersection-kernel map first",
    )
    p.add_argument(
        "--pca-keep",
        type=float,
        default=None,
        metavar="FRACTION",
        help="apply PCA keeping ceil(FRACTION * D) directions",
    )
    p.add_argument("--model-out", required=True)
    p.add_argument("--codes-out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("distance", help="reconstruction distance between two sets")
    p.add_argument("--meaningful", required=True, help="labelled attribute CSV")
    p.add_argument("--discovered", required=True, help="discovered attribute CSV")
    p.add_argument("--mode", choices=("plain", "cvx"), required=True)
    p.add_argument("--out", required=True, help="report JSON path")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("bench", help="benchmark protocols")
    bench_sub = p.add_subparsers(dest="bench_command", required=True)

    b = bench_sub.add_parser(
        "split-validate", help="held-out vs random attribute comparison"
    )
    b.add_argument("--meaningful", required=True)
    b.add_argument(
        "--method",
        action="append",
        metavar="NAME=PATH",
        help="named attribute CSV to score (repeatable)",
    )
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--left-fraction", type=float, default=0.5)
    b.add_argument("--out", required=True)
    _add_solver_flags(b)
    b.set_defaults(func=cmd_bench_split_validate)

    b = bench_sub.add_parser("noise-curve", help="distance vs injected random bits")
    b.add_argument("--discovered", required=True)
    b.add_argument("--meaningful", required=True)
    b.add_argument("--max-noise", type=int, required=True)
    b.add_argument("--step", type=int, required=True)
    b.add_argument("--trials", type=int, required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True, help="report JSON path")
    b.add_argument("--csv-out", required=True, help="curve CSV path")
    _add_solver_flags(b)
    b.set_defaults(func=cmd_bench_noise_curve)

    p = sub.add_parser("keywords", help="keyword generation and evaluation")
    kw_sub = p.add_subparsers(dest="keywords_command", required=True)

    k = kw_sub.add_parser("generate", help="emit keywords from codes and names")
    k.add_argument("--codes", required=True)
    k.add_argument("--names", required=True)
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_keywords_generate)

    k = kw_sub.add_parser("evaluate", help="score keywords against judgments")
    k.add_argument("--keywords", required=True, help="keyword JSON from generate")
    k.add_argument("--truth", required=True)
    k.add_argument("--actions", default=None)
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_keywords_evaluate)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = list(argv)

    if args.command == "discover" and args.method == "mmc" and not args.labels:
        parser.error("--labels is required for --method mmc")

    try:
        return args.func(args)
    except (InputFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
