"""Command-line front end for the storage simulator and analysis tools.

Subcommands
-----------
simulate-storage      run a seeded storage series from a config file and
                      write the 5-column storage CSV
fit-lifetime          MLE decay fit (+ optional bootstrap band) of a dataset
                      CSV or a storage CSV
calibrate-gradient    invert a measured beat period into a field difference
                      and the derived clock-encoding frequency splitting
optimize-gate         optimize (or --evaluate) a phase-modulated displacement
                      sequence against a set of motional modes
interpret-detections  classify a batch file of four-stage B/D patterns

Every command that writes files also writes a JSON run manifest recording
the command name, a digest of the fully resolved configuration, the seed,
the package version, start/end timestamps, and the list of outputs.  Data
outputs are byte-identical across reruns with the same config and seed
(manifests differ only in their timestamps).

Exit codes: 0 success; 2 configuration/schema error; 3 numerical
non-attainment (unidentifiable fit, or optimizer above its target residual)
with the report still written.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import sys
from collections import Counter
from datetime import datetime, timezone

from . import __version__
from . import detection
from . import dfs_protocol as dfs
from . import fitting
from . import gate_opt
from . import master_eq as me

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    """Malformed, incomplete, or unknown configuration input."""


# ------------------------------------------------------------ config files

def _read_config(path, overrides):
    """Parse an INI-style config file into {section: {key: raw string}} and
    apply --set section.key=value overrides on top."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file: {exc}") from None
    data = {sec: dict(cp.items(sec)) for sec in cp.sections()}
    for item in overrides or ():
        key, sep, value = item.partition("=")
        sec, dot, field = key.partition(".")
        if not sep or not dot or not sec.strip() or not field.strip():
            raise ConfigError(
                f"--set expects section.key=value, got {item!r}")
        data.setdefault(sec.strip(), {})[field.strip()] = value.strip()
    return data


def _config_digest(data) -> str:
    """sha256 over the canonicalized resolved key-value pairs."""
    lines = [f"{sec}.{key}={val}"
             for sec in sorted(data)
             for key, val in sorted(data[sec].items())]
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def _apply_schema(data, schema):
    """Validate raw config data against {section: (required, fields)} where
    fields = {name: (parse, required, default)}.  Unknown sections or fields
    are rejected; absent optional sections come back as None."""
    unknown = set(data) - set(schema)
    if unknown:
        raise ConfigError("unknown config section(s): "
                          + ", ".join(sorted(unknown)))
    out = {}
    for sec, (sec_required, fields) in schema.items():
        raw = data.get(sec)
        if raw is None:
            if sec_required:
                raise ConfigError(f"missing config section [{sec}]")
            out[sec] = None
            continue
        bad = set(raw) - set(fields)
        if bad:
            raise ConfigError(f"unknown field(s) in [{sec}]: "
                              + ", ".join(sorted(bad)))
        parsed = {}
        for name, (parse, required, default) in fields.items():
            if name in raw:
                try:
                    parsed[name] = parse(raw[name])
                except ValueError as exc:
                    raise ConfigError(f"[{sec}] {name}: {exc}") from None
            elif required:
                raise ConfigError(f"[{sec}] missing required field {name!r}")
            else:
                parsed[name] = default
        out[sec] = parsed
    return out


def _t_float(s: str) -> float:
    v = float(s)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _t_nonneg(s: str) -> float:
    v = _t_float(s)
    if v < 0:
        raise ValueError("must be nonnegative")
    return v


def _t_prob(s: str) -> float:
    v = _t_float(s)
    if not 0.0 <= v <= 1.0:
        raise ValueError("must be a probability in [0, 1]")
    return v


def _t_posint(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise ValueError("must be a positive integer")
    return v


def _t_seed(s: str) -> int:
    v = int(s)
    if v < 0:
        raise ValueError("must be a nonnegative integer")
    return v


def _t_floats(s: str) -> tuple:
    toks = [tok.strip() for tok in s.split(",") if tok.strip()]
    if not toks:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(_t_float(tok) for tok in toks)


def _t_choice(options):
    def parse(s: str):
        v = s.strip()
        if v not in options:
            raise ValueError("must be one of " + ", ".join(options))
        return v
    return parse


_STORAGE_SCHEMA = {
    "storage": (True, {
        "state": (_t_choice(dfs.STATE_LABELS), True, None),
        "times_s": (_t_floats, True, None),
        "repetitions": (_t_posint, True, None),
        "seed": (_t_seed, False, 0),
        "prep_success_prob": (_t_prob, False, 1.0),
    }),
    "noise": (True, {
        "gamma_leak_per_s": (_t_nonneg, False, 0.0),
        "gamma_dephase_per_s": (_t_nonneg, False, 0.0),
        "dephasing_mode": (_t_choice(("independent", "collective")),
                           False, "independent"),
    }),
    "echo": (False, {
        "fractions": (_t_floats, False, (0.25, 0.75)),
    }),
    "gradient": (False, {
        "b_field_gauss": (_t_nonneg, True, None),
        "delta_b_gauss": (_t_nonneg, True, None),
        "encoding": (_t_choice(dfs.ENCODINGS), False, "clock"),
    }),
    "confusion": (False, {
        "file": (str, True, None),
    }),
}


# -------------------------------------------------------------- manifests

def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def _write_manifest(path, command, digest, seed, outputs, started) -> None:
    doc = {
        "command": command,
        "config_digest": digest,
        "seed": seed,
        "version": __version__,
        "started_utc": started,
        "finished_utc": _utc_now(),
        "outputs": [str(p) for p in outputs],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest_path(args, primary_out) -> str:
    return args.manifest if args.manifest else str(primary_out) + ".manifest.json"


def _args_digest(pairs) -> str:
    """Digest for flag-driven commands: canonical name=value lines."""
    lines = [f"{name}={value}" for name, value in sorted(pairs)]
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


# ------------------------------------------------------------------ plots

def _render_plot(path, series, xlabel, ylabel, band=None):
    """Minimal line plot to a standalone vector file (lazy matplotlib)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    if band is not None:
        bx, blo, bhi = band
        ax.fill_between(bx, blo, bhi, alpha=0.25, lw=0, label="68% band")
    for label, x, y, style in series:
        ax.plot(x, y, style, label=label, ms=4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# ------------------------------------------------------------ subcommands

def cmd_simulate_storage(args) -> int:
    started = _utc_now()
    data = _read_config(args.config, args.set)
    digest = _config_digest(data)
    cfg = _apply_schema(data, _STORAGE_SCHEMA)

    st, nz = cfg["storage"], cfg["noise"]
    noise = me.NoiseParams(gamma_leak=nz["gamma_leak_per_s"],
                           gamma_dephase=nz["gamma_dephase_per_s"],
                           dephasing_mode=nz["dephasing_mode"])
    gradient = None
    encoding = "clock"
    if cfg["gradient"] is not None:
        g = cfg["gradient"]
        gradient = dfs.GradientModel(b_field=g["b_field_gauss"],
                                     delta_b=g["delta_b_gauss"])
        encoding = g["encoding"]
    confusion = None
    if cfg["confusion"] is not None:
        confusion = detection.ConfusionMatrix.load(cfg["confusion"]["file"])
    echo = cfg["echo"]["fractions"] if cfg["echo"] is not None else (0.25, 0.75)
    try:
        scenario = dfs.StorageScenario(
            state_label=st["state"], noise=noise, times=st["times_s"],
            repetitions=st["repetitions"], seed=st["seed"],
            echo_fractions=echo, gradient=gradient, encoding=encoding,
            confusion=confusion, prep_success_prob=st["prep_success_prob"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    rows = dfs.run_storage(scenario)
    dfs.write_storage_csv(args.out, rows)
    outputs = [args.out]
    if args.plot:
        T = [r.T_seconds for r in rows]
        raw = [r.successes / r.repetitions for r in rows]
        disc = [r.leak_discarded_successes / max(r.repetitions - r.leak_count, 1)
                for r in rows]
        _render_plot(args.plot,
                     [("raw", T, raw, "o-"), ("leak-discarded", T, disc, "s--")],
                     "storage time (s)", "success fraction")
        outputs.append(args.plot)
    _write_manifest(_manifest_path(args, args.out), "simulate-storage",
                    digest, scenario.seed, outputs, started)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _load_decay_data(path, use) -> fitting.DecayDataset:
    """Accept either the 3-column dataset CSV or the 5-column storage CSV;
    for the latter, --use picks the raw or leakage-discarded counts."""
    with open(path, newline="") as fh:
        first = fh.readline().strip()
    header = [h.strip() for h in first.split(",")] if first else []
    if header == fitting.DATASET_HEADER:
        if use is not None:
            raise ConfigError("--use only applies to storage CSV input")
        return fitting.read_dataset_csv(path)
    if header == dfs.STORAGE_HEADER:
        rows = dfs.read_storage_csv(path)
        mode = use or "raw"
        if mode == "raw":
            triples = [(r.T_seconds, r.repetitions, r.successes) for r in rows]
        else:
            triples = [(r.T_seconds, r.repetitions - r.leak_count,
                        r.leak_discarded_successes) for r in rows
                       if r.repetitions - r.leak_count > 0]
        if not triples:
            raise ConfigError("no usable rows after leakage discarding")
        T, R, S = zip(*triples)
        return fitting.DecayDataset.from_counts(T, R, S)
    raise ConfigError(f"unrecognized CSV header {header!r}; expected "
                      f"{fitting.DATASET_HEADER} or {dfs.STORAGE_HEADER}")


def cmd_fit_lifetime(args) -> int:
    started = _utc_now()
    data = _load_decay_data(args.data, args.use)
    model = fitting.DecayModel.coerce(args.model)
    tau_bounds = None
    if args.tau_bounds is not None:
        lo, hi = args.tau_bounds
        tau_bounds = (lo, hi)
    if args.bootstrap > 0:
        fit = fitting.fit_with_bootstrap(model, data, args.bootstrap,
                                         args.seed, tau_bounds=tau_bounds)
    else:
        fit = fitting.fit_mle(model, data, tau_bounds=tau_bounds)
        fit.seed = args.seed
    report = fitting.format_fit_report(fit)
    sys.stdout.write(report)

    pairs = [("data", args.data), ("model", model.value),
             ("bootstrap", args.bootstrap), ("seed", args.seed),
             ("use", args.use or ""), ("tau_bounds", args.tau_bounds or "")]
    outputs = []
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
        outputs.append(args.out)
    band = None
    if args.band:
        import numpy as np
        grid = np.linspace(0.0, data.t_max, args.band_points)
        lo, hi = fitting.curve_band(fit.bootstrap, model, grid)
        fitting.write_band_csv(args.band, grid, lo, hi)
        outputs.append(args.band)
        band = (grid, lo, hi)
    if args.plot:
        import numpy as np
        grid = np.linspace(0.0, data.t_max, 200)
        curve = fitting.model_fidelity(model, grid, fit.A_hat, fit.tau_hat)
        series = [("data", data.t, data.fidelities, "o"),
                  ("fit", grid, curve, "-")]
        _render_plot(args.plot, series, "storage time (s)", "fidelity",
                     band=band)
        outputs.append(args.plot)
    if outputs:
        _write_manifest(_manifest_path(args, outputs[0]), "fit-lifetime",
                        _args_digest(pairs), args.seed, outputs, started)
    return EXIT_NUMERICAL if fit.flat else EXIT_OK


def cmd_calibrate_gradient(args) -> int:
    started = _utc_now()
    if not math.isfinite(args.period_s) or args.period_s <= 0:
        raise ConfigError("period_s must be positive and finite")
    try:
        model = dfs.GradientModel(b_field=args.b_field_gauss, delta_b=0.0,
                                  clock_coeff=args.clock_coeff_hz_per_g2,
                                  zeeman_coeff=args.zeeman_coeff_hz_per_g)
        delta_b = dfs.calibrate_deltaB(args.period_s, model, args.encoding)
        model = dfs.GradientModel(b_field=model.b_field, delta_b=delta_b,
                                  clock_coeff=model.clock_coeff,
                                  zeeman_coeff=model.zeeman_coeff)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    clock_df = dfs.frequency_difference(model, "clock")
    zeeman_df = dfs.frequency_difference(model, "zeeman")
    # phase the stored logical qubit would pick up in 1000 s with no echoes
    phase_1000 = 2.0 * math.pi * clock_df * 1000.0
    lines = [
        f"period_s {args.period_s!r}",
        f"encoding {args.encoding}",
        f"b_field_gauss {model.b_field!r}",
        f"delta_b_gauss {delta_b!r}",
        f"clock_delta_f_hz {clock_df!r}",
        f"zeeman_delta_f_hz {zeeman_df!r}",
        f"dfs_phase_rad_per_1000s {phase_1000!r}",
    ]
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
        pairs = [("period_s", args.period_s), ("encoding", args.encoding),
                 ("b_field_gauss", args.b_field_gauss),
                 ("clock_coeff_hz_per_g2", args.clock_coeff_hz_per_g2),
                 ("zeeman_coeff_hz_per_g", args.zeeman_coeff_hz_per_g)]
        _write_manifest(_manifest_path(args, args.out), "calibrate-gradient",
                        _args_digest(pairs), 0, [args.out], started)
    return EXIT_OK


def _mode_report(seq, drive, modes) -> str:
    """Per-mode and total normalized residuals plus the reality check."""
    import numpy as np
    alphas = gate_opt.displacement_all(seq, drive,
                                       np.array(modes.detunings))
    norm = (drive.base_amplitude * seq.total_duration) ** 2
    per_mode = np.abs(alphas) ** 2 / norm if norm > 0 else np.abs(alphas) ** 2
    lines = [f"n_segments {seq.n_segments}",
             f"duration_s {seq.total_duration!r}",
             f"ramp_s {seq.ramp_time!r}",
             f"antisymmetric {int(seq.is_antisymmetric())}"]
    for k, (w, r) in enumerate(zip(modes.mode_freqs, per_mode)):
        lines.append(f"mode_{k}_freq_hz {w / (2 * math.pi)!r}")
        lines.append(f"mode_{k}_residual {float(r)!r}")
    lines.append(f"residual_total {float(per_mode.sum())!r}")
    return "\n".join(lines) + "\n"


def cmd_optimize_gate(args) -> int:
    started = _utc_now()
    if args.evaluate and args.phases_pi:
        raise ConfigError("--evaluate and --phases-pi are mutually exclusive")
    try:
        modes = gate_opt.ModeSet(
            tuple(2.0 * math.pi * 1e6 * f for f in args.mode_freqs_mhz),
            2.0 * math.pi * 1e6 * args.beat_note_mhz)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    drive = gate_opt.DriveProfile()
    duration = args.duration_us * 1e-6
    ramp = args.ramp_us * 1e-6

    pairs = [("mode_freqs_mhz", ",".join(repr(f) for f in args.mode_freqs_mhz)),
             ("beat_note_mhz", args.beat_note_mhz),
             ("segments", args.segments), ("duration_us", args.duration_us),
             ("ramp_us", args.ramp_us), ("seed", args.seed),
             ("restarts", args.restarts),
             ("target_residual", args.target_residual),
             ("evaluate", args.evaluate or ""),
             ("phases_pi", ",".join(repr(p) for p in args.phases_pi or ()))]

    if args.evaluate or args.phases_pi:
        try:
            if args.evaluate:
                seq = gate_opt.PhaseSequence.load(args.evaluate)
            else:
                seq = gate_opt.PhaseSequence(
                    tuple(math.pi * p for p in args.phases_pi),
                    duration, ramp)
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        report = _mode_report(seq, drive, modes)
        sys.stdout.write(report)
        outputs = []
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(report)
            outputs.append(args.out)
            _write_manifest(_manifest_path(args, args.out), "optimize-gate",
                            _args_digest(pairs), args.seed, outputs, started)
        return EXIT_OK

    result = gate_opt.optimize_sequence(
        modes, n_segments=args.segments, duration=duration, ramp=ramp,
        seed=args.seed, n_restarts=args.restarts,
        target_residual=args.target_residual, drive=drive)
    report = _mode_report(result.sequence, drive, modes)
    report += (f"converged {int(result.converged)}\n"
               f"best_restart {result.best_restart}\n"
               f"seed {args.seed}\n")
    sys.stdout.write(report)
    outputs = []
    if args.out:
        result.sequence.save(args.out)
        outputs.append(args.out)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report)
        outputs.append(args.report)
    if outputs:
        _write_manifest(_manifest_path(args, outputs[0]), "optimize-gate",
                        _args_digest(pairs), args.seed, outputs, started)
    return EXIT_OK if result.converged else EXIT_NUMERICAL


def cmd_interpret_detections(args) -> int:
    started = _utc_now()
    counts = Counter()
    n_lines = 0
    try:
        with open(args.patterns) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    outcome = detection.interpret(line)
                except ValueError as exc:
                    raise ConfigError(f"line {lineno}: {exc}") from None
                counts[outcome.value] += 1
                n_lines += 1
    except OSError as exc:
        raise ConfigError(f"cannot read pattern file: {exc}") from None
    order = [o.value for o in detection.DetectionOutcome]
    lines = [f"{name} {counts.get(name, 0)}" for name in order]
    lines.append(f"total {n_lines}")
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write("outcome,count\n")
            for name in order:
                fh.write(f"{name},{counts.get(name, 0)}\n")
        pairs = [("patterns", args.patterns)]
        _write_manifest(_manifest_path(args, args.out),
                        "interpret-detections", _args_digest(pairs), 0,
                        [args.out], started)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _parse_bounds(s: str):
    vals = _t_floats(s)
    if len(vals) != 2 or not 0 < vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(
            "expected lo,hi with 0 < lo < hi")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dfsmem",
        description="Storage simulation and analysis for a two-ion "
                    "decoherence-free logical qubit.")
    p.add_argument("--version", action="version",
                   version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("simulate-storage",
                        help="run a seeded storage series from a config file")
    sp.add_argument("--config", required=True, help="INI config file")
    sp.add_argument("--set", action="append", metavar="SEC.KEY=VALUE",
                    help="override a config value (repeatable)")
    sp.add_argument("--out", required=True, help="output storage CSV")
    sp.add_argument("--plot", help="optional SVG plot of the series")
    sp.add_argument("--manifest", help="manifest path "
                                       "(default: <out>.manifest.json)")
    sp.set_defaults(func=cmd_simulate_storage)

    fp = sub.add_parser("fit-lifetime",
                        help="MLE decay fit of a dataset or storage CSV")
    fp.add_argument("data", help="dataset CSV (3 columns) or storage CSV "
                                 "(5 columns)")
    fp.add_argument("--model", default="exponential",
                    choices=[m.value for m in fitting.DecayModel])
    fp.add_argument("--bootstrap", type=int, default=0, metavar="N",
                    help="number of parametric bootstrap refits")
    fp.add_argument("--seed", type=int, default=0)
    fp.add_argument("--use", choices=["raw", "discarded"],
                    help="counts column for storage CSV input")
    fp.add_argument("--tau-bounds", type=_parse_bounds, metavar="LO,HI",
                    help="fit search range for tau in seconds")
    fp.add_argument("--out", help="write the fit report to this file")
    fp.add_argument("--band", help="write a 68%% bootstrap band CSV here")
    fp.add_argument("--band-points", type=int, default=50)
    fp.add_argument("--plot", help="optional SVG plot of data, fit, band")
    fp.add_argument("--manifest", help="manifest path")
    fp.set_defaults(func=cmd_fit_lifetime)

    cp = sub.add_parser("calibrate-gradient",
                        help="beat period -> field difference and clock "
                             "splitting")
    cp.add_argument("--period-s", type=float, required=True,
                    help="measured beat period in seconds")
    cp.add_argument("--encoding", default="zeeman", choices=dfs.ENCODINGS,
                    help="encoding in which the period was measured")
    cp.add_argument("--b-field-gauss", type=float, default=5.23)
    cp.add_argument("--clock-coeff-hz-per-g2", type=float, default=354.0)
    cp.add_argument("--zeeman-coeff-hz-per-g", type=float, default=1.4e6)
    cp.add_argument("--out", help="write the report to this file")
    cp.add_argument("--manifest", help="manifest path")
    cp.set_defaults(func=cmd_calibrate_gradient)

    op = sub.add_parser("optimize-gate",
                        help="optimize or evaluate a phase-modulated "
                             "sequence")
    op.add_argument("--mode-freqs-mhz", type=float, nargs="+",
                    default=[1.298, 1.347, 1.381],
                    help="motional mode frequencies in MHz")
    op.add_argument("--beat-note-mhz", type=float, default=1.396)
    op.add_argument("--segments", type=int, default=12)
    op.add_argument("--duration-us", type=float, default=150.0)
    op.add_argument("--ramp-us", type=float, default=2.0)
    op.add_argument("--seed", type=int, default=0)
    op.add_argument("--restarts", type=int, default=8)
    op.add_argument("--target-residual", type=float, default=1e-6)
    op.add_argument("--evaluate", metavar="SEQFILE",
                    help="score this saved sequence instead of optimizing")
    op.add_argument("--phases-pi", type=float, nargs="+", metavar="P",
                    help="score these phases (units of pi) instead of "
                         "optimizing")
    op.add_argument("--out", help="optimize: sequence file; evaluate: "
                                  "report file")
    op.add_argument("--report", help="optimize only: also write the "
                                     "residual report here")
    op.add_argument("--manifest", help="manifest path")
    op.set_defaults(func=cmd_optimize_gate)

    ip = sub.add_parser("interpret-detections",
                        help="classify a file of four-stage B/D patterns")
    ip.add_argument("patterns", help="text file, one 4-character B/D "
                                     "pattern per line")
    ip.add_argument("--out", help="write outcome,count CSV here")
    ip.add_argument("--manifest", help="manifest path")
    ip.set_defaults(func=cmd_interpret_detections)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        # domain validation and file problems are configuration errors too
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
