"""Command-line surface tying the pipeline together.

Subcommands: synth, extract, train, eval, grid, window-info.
Exit codes: 0 ok, 1 domain error, 2 usage or I/O error.
All randomness flows from --seed (default 0); repeated runs with the same
inputs and flags produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import evaluate, nnet, synth
from .errors import PcgError
from .features import (
    extract_sequence,
    normalize_sequence,
    read_features,
    write_features,
)
from .ingest import (
    Label,
    preprocess,
    read_csv_record,
    read_wav,
    write_wav,
)
from .windows import (
    WindowShape,
    WindowSpec,
    frame_matrix,
    mainlobe_width,
    make_window,
    peak_sidelobe_db,
    window_spectrum,
)

CONFIG_VERSION = 1


def _parse_shapes(names: list[str]) -> list[WindowShape]:
    return [WindowShape(n.lower()) for n in names]


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"no such file: {p}")
    return p


def _write_effective_config(out_dir: Path, config: dict) -> None:
    config = {"version": CONFIG_VERSION, **config}
    (out_dir / "effective_config.json").write_text(
        json.dumps(config, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = synth.SynthConfig(
        duration_s=args.duration, rate_hz=args.rate,
        murmur_gain=args.murmur_gain, noise_floor=args.noise_floor)
    records = synth.generate_dataset(args.healthy, args.pathological,
                                     base_seed=args.seed, config=config)
    with open(out_dir / "labels.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["filename", "label"])
        for rec in records:
            filename = f"{rec.id}.wav"
            write_wav(rec, out_dir / filename)
            writer.writerow([filename, rec.label.value])
    _write_effective_config(out_dir, {
        "command": "synth", "healthy": args.healthy,
        "pathological": args.pathological, "seed": args.seed,
        "duration_s": args.duration, "rate_hz": args.rate,
        "murmur_gain": args.murmur_gain, "noise_floor": args.noise_floor})
    print(f"wrote {len(records)} records to {out_dir}")
    return 0


def _load_corpus(corpus_dir: Path) -> list:
    manifest = corpus_dir / "labels.csv"
    if not manifest.is_file():
        raise FileNotFoundError(f"no such file: {manifest}")
    records = []
    with open(manifest, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(read_wav(corpus_dir / row["filename"],
                                    label=Label(row["label"])))
    return records


def cmd_extract(args) -> int:
    path = _require_file(args.input)
    if path.suffix.lower() == ".wav":
        record = read_wav(path)
    else:
        record = read_csv_record(path, rate_hz=args.rate)
    if args.label:
        record.label = Label(args.label)
    record = preprocess(record)

    spec = WindowSpec.from_nominal_length(
        WindowShape(args.shape), args.length, args.alpha)
    frames, _ = frame_matrix(record.samples, spec, args.hop)
    seq = extract_sequence(frames, bins=args.bins, signal_id=record.id,
                           label=record.label, window=spec, hop=args.hop)
    seq = normalize_sequence(seq)
    write_features(seq, args.out)
    print(f"wrote {seq.num_frames} x {seq.values.shape[1]} features to {args.out}")
    return 0


def _load_feature_dir(features_dir: Path) -> list:
    paths = sorted(features_dir.glob("*.csv"))
    if not paths:
        raise FileNotFoundError(f"no feature CSVs in {features_dir}")
    return [read_features(p) for p in paths]


def _train_config_from_args(args) -> nnet.TrainConfig:
    return nnet.TrainConfig(
        learning_rate=args.lr, momentum=args.momentum, epochs=args.epochs,
        batch_size=args.batch_size, seed=args.seed, clip_norm=args.clip_norm,
        momentum_ramp=args.momentum_ramp)


def cmd_train(args) -> int:
    dataset = _load_feature_dir(Path(args.features))
    config = _train_config_from_args(args)
    model, history = nnet.train(dataset, args.hidden, config)
    nnet.save_model(model, args.out, config=config)
    if args.history:
        Path(args.history).write_text(json.dumps(
            {"losses": history.losses, "accuracies": history.accuracies},
            indent=2) + "\n")
    print(f"trained {args.epochs} epochs; final loss "
          f"{history.losses[-1]:.6f}, train accuracy {history.accuracies[-1]:.3f}")
    return 0


def cmd_eval(args) -> int:
    model = nnet.load_model(_require_file(args.model))
    dataset = _load_feature_dir(Path(args.features))
    predictions = [nnet.predict(model, s) for s in dataset]
    labels = [nnet.CLASS_INDEX[s.label] for s in dataset]
    c = evaluate.confusion(predictions, labels)
    m = evaluate.metrics(c)
    payload = {
        "tp": c.tp, "tn": c.tn, "fp": c.fp, "fn": c.fn,
        "sensitivity": m.sensitivity, "specificity": m.specificity,
        "accuracy": m.accuracy,
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def _merge_config_file(args, parser_defaults: dict) -> None:
    """Fill unset grid flags from --config JSON; explicit flags win."""
    if not args.config:
        return
    config = json.loads(_require_file(args.config).read_text())
    if config.get("version", CONFIG_VERSION) != CONFIG_VERSION:
        raise PcgError(f"unsupported config version {config.get('version')}")
    for key, value in config.items():
        if key == "version":
            continue
        if not hasattr(args, key):
            raise PcgError(f"unknown config key {key!r}")
        if getattr(args, key) == parser_defaults.get(key):
            setattr(args, key, value)


GRID_DEFAULTS = {
    "shapes": ["rectangular", "triangular", "gaussian"],
    "lengths": [15, 30, 50],
    "hidden": [5, 30, 50, 100],
    "trials": 30,
    "seed": 0,
    "hop": 1,
    "alpha": 2.5,
    "bins": 10,
    "epochs": 500,
    "lr": 0.01,
    "momentum": 0.9,
    "batch_size": 16,
    "clip_norm": None,
    "momentum_ramp": False,
    "jobs": 1,
}


def cmd_grid(args) -> int:
    _merge_config_file(args, GRID_DEFAULTS)
    records = [preprocess(r) for r in _load_corpus(Path(args.corpus))]
    config = _train_config_from_args(args)
    cells = evaluate.run_grid(
        records,
        shapes=_parse_shapes(args.shapes),
        lengths=[int(v) for v in args.lengths],
        hidden_sizes=[int(v) for v in args.hidden],
        trials=args.trials,
        base_seed=args.seed,
        hop=args.hop,
        alpha=args.alpha,
        bins=args.bins,
        train_config=config,
        jobs=args.jobs,
    )
    out_dir = Path(args.out_dir)
    paths = evaluate.emit_results(cells, out_dir)
    _write_effective_config(out_dir, {
        "command": "grid", "corpus": str(args.corpus),
        "shapes": [s for s in args.shapes], "lengths": list(args.lengths),
        "hidden": list(args.hidden), "trials": args.trials,
        "seed": args.seed, "hop": args.hop, "alpha": args.alpha,
        "bins": args.bins, "epochs": args.epochs, "lr": args.lr,
        "momentum": args.momentum, "batch_size": args.batch_size,
        "clip_norm": args.clip_norm, "momentum_ramp": args.momentum_ramp,
        "jobs": args.jobs})
    for name, p in paths.items():
        print(f"{name}: {p}")
    return 0


def cmd_window_info(args) -> int:
    writer = csv.writer(sys.stdout)
    if args.coeffs:
        writer.writerow(["shape", "L", "alpha", "l", "w"])
    else:
        writer.writerow(["shape", "L", "alpha", "mainlobe_width", "sidelobe_db"])
    for name in args.shapes:
        shape = WindowShape(name.lower())
        for length in args.lengths:
            spec = WindowSpec.from_nominal_length(shape, int(length), args.alpha)
            w = make_window(spec)
            alpha = spec.alpha if shape is WindowShape.GAUSSIAN else ""
            if args.coeffs:
                for l, val in zip(range(-spec.half_length, spec.half_length + 1), w):
                    writer.writerow([shape.value, spec.L, alpha, l, f"{val:.12g}"])
                continue
            spectrum = window_spectrum(w, args.nfft)
            width = mainlobe_width(spectrum)
            try:
                sidelobe = f"{peak_sidelobe_db(spectrum):.4f}"
            except PcgError:
                sidelobe = "none"
            writer.writerow([shape.value, spec.L, alpha, f"{width:.8f}", sidelobe])
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcgkit",
        description="Heart-sound windowed feature extraction and biLSTM "
                    "classification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labeled WAV corpus")
    p.add_argument("--healthy", type=int, default=20)
    p.add_argument("--pathological", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration", type=float, default=10.0)
    p.add_argument("--rate", type=int, default=2000)
    p.add_argument("--murmur-gain", type=float, default=0.3)
    p.add_argument("--noise-floor", type=float, default=0.01)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="preprocess one recording and write features")
    p.add_argument("--input", required=True, help="WAV or one-value-per-line CSV")
    p.add_argument("--rate", type=int, default=2000, help="sample rate for CSV input")
    p.add_argument("--label", choices=[l.value for l in Label], default=None)
    p.add_argument("--shape", choices=[s.value for s in WindowShape],
                   default="gaussian")
    p.add_argument("--length", type=int, default=30, help="nominal window length")
    p.add_argument("--alpha", type=float, default=2.5)
    p.add_argument("--hop", type=int, default=1)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--out", required=True, help="output feature CSV path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train a model on a directory of feature CSVs")
    p.add_argument("--features", required=True)
    p.add_argument("--hidden", type=int, default=30)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clip-norm", type=float, default=None)
    p.add_argument("--momentum-ramp", action="store_true")
    p.add_argument("--out", required=True, help="output model file")
    p.add_argument("--history", default=None, help="optional history JSON path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a saved model on saved features")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", default=None, help="optional metrics JSON path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="full shape x length x hidden experiment grid")
    p.add_argument("--corpus", required=True,
                   help="directory with WAV files and labels.csv")
    p.add_argument("--config", default=None,
                   help="JSON config file; explicit flags win")
    p.add_argument("--shapes", nargs="+", default=GRID_DEFAULTS["shapes"])
    p.add_argument("--lengths", nargs="+", type=int, default=GRID_DEFAULTS["lengths"])
    p.add_argument("--hidden", nargs="+", type=int, default=GRID_DEFAULTS["hidden"])
    p.add_argument("--trials", type=int, default=GRID_DEFAULTS["trials"])
    p.add_argument("--seed", type=int, default=GRID_DEFAULTS["seed"])
    p.add_argument("--hop", type=int, default=GRID_DEFAULTS["hop"])
    p.add_argument("--alpha", type=float, default=GRID_DEFAULTS["alpha"])
    p.add_argument("--bins", type=int, default=GRID_DEFAULTS["bins"])
    p.add_argument("--epochs", type=int, default=GRID_DEFAULTS["epochs"])
    p.add_argument("--lr", type=float, default=GRID_DEFAULTS["lr"])
    p.add_argument("--momentum", type=float, default=GRID_DEFAULTS["momentum"])
    p.add_argument("--batch-size", type=int, default=GRID_DEFAULTS["batch_size"])
    p.add_argument("--clip-norm", type=float, default=GRID_DEFAULTS["clip_norm"])
    p.add_argument("--momentum-ramp", action="store_true")
    p.add_argument("--jobs", type=int, default=GRID_DEFAULTS["jobs"])
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("window-info",
                       help="window diagnostics as CSV on stdout")
    p.add_argument("--shapes", nargs="+",
                   default=[s.value for s in WindowShape])
    p.add_argument("--lengths", nargs="+", type=int, default=[15, 30, 50])
    p.add_argument("--alpha", type=float, default=2.5)
    p.add_argument("--nfft", type=int, default=4096)
    p.add_argument("--coeffs", action="store_true",
                   help="print coefficients instead of lobe diagnostics")
    p.set_defaults(func=cmd_window_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PcgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
