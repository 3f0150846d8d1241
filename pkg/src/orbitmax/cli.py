"""Command-line front end: dataset generation, embeddings, distance queries,
stability experiments, the alignment-distance ANN benchmark, and
cosine-family curve data.

Every command materializes its full configuration (defaults included),
echoes it into its JSON output or an --echo-config sidecar, and reproduces
its outputs bit-for-bit when re-run from that echo via --config.  All
randomness flows from the single --seed through named substreams, so adding
one experiment never perturbs another's draws.  Files are written atomically
and partial outputs are removed on failure.

Exit codes: 0 success, 2 input error, 3 dimension or configuration
inconsistency, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile

import numpy as np

from .actions import (
    DimensionMismatch,
    WeightedCircleAction,
    action_from_spec,
    to_complex,
)
from .annbench import evaluate_lambda, load_dataset, save_dataset, synth_dataset
from .bank import (
    MaxFilterBank,
    bank_from_spec,
    bank_to_spec,
    generate_templates,
    make_bank,
    recommended_template_count,
)
from .bispectrum import FrequencyProfile
from .embeddings import BankEmbedding, BispectrumEmbedding
from .maxfilter import CircleSolverConfig, max_filter, quotient_distance
from .stability import (
    cosine_family_maxima,
    estimate_bilipschitz,
    local_lower_probe,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIM = 3
EXIT_NUMERIC = 4

BACKENDS = ("maxfilter", "bispectrum", "scaled-bispectrum")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def substream(seed: int, label: str) -> int:
    """Derived seed for a named random stream."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def fmt_float(v, full: bool) -> str:
    return repr(float(v)) if full else format(float(v), ".12g")


def fmt_complex(v, full: bool) -> str:
    v = complex(v)
    if v.imag == 0.0:
        return fmt_float(v.real, full)
    sign = "+" if v.imag >= 0 else "-"
    return f"{fmt_float(v.real, full)}{sign}{fmt_float(abs(v.imag), full)}j"


class _Outputs:
    """Atomic writes (temp file + rename) with rollback on failure."""

    def __init__(self):
        self.written = []

    def write(self, path, text: str) -> None:
        path = os.fspath(path)
        directory = os.path.dirname(path) or "."
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-orbitmax-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.written.append(path)

    def rollback(self) -> None:
        for p in self.written:
            try:
                os.unlink(p)
            except OSError:
                pass


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_text(columns, rows, full: bool) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt_float(v, full) for v in row))
    return "\n".join(lines) + "\n"


def _require_finite(name: str, values) -> None:
    arr = np.asarray(values, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise CliError(EXIT_NUMERIC, f"non-finite value encountered in {name}")


# ---------------------------------------------------------------------------
# flag parsing helpers

def _parse_int_list(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _parse_float_list(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _parse_profile(text: str) -> list:
    entries = []
    for tok in text.split(","):
        if ":" not in tok:
            raise ValueError(f"profile entry {tok!r} must look like k:multiplicity")
        k, p = tok.split(":", 1)
        entries.append([int(k), int(p)])
    return entries


def _point_for_action(action, values) -> np.ndarray:
    values = list(values)
    if len(values) != action.dim_real:
        raise DimensionMismatch(
            f"point has {len(values)} coordinates, action needs {action.dim_real}"
        )
    if isinstance(action, WeightedCircleAction):
        return to_complex(values)
    return np.asarray(values, dtype=np.float64)


def _load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# configuration resolution

def _load_config_file(path, command: str) -> dict:
    """Accept a prior report ({"command":..., "config":...}) or, for gen, a
    dataset file whose first line is the header."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        rest = fh.read()
    try:
        head = json.loads(first)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"{path}: not a config file ({exc})")
    if isinstance(head, dict) and "command" in head and not rest.strip():
        pass  # single-line report, fall through below
    if isinstance(head, dict) and "command" not in head and "profile" in head:
        if command != "gen":
            raise CliError(EXIT_INPUT, f"{path}: dataset header is only a config for gen")
        return head
    payload = json.loads(first + rest)
    if payload.get("command") != command:
        raise CliError(
            EXIT_DIM,
            f"{path}: config is for command {payload.get('command')!r}, not {command!r}",
        )
    return payload.get("config", {})


def _merged(ns, key: str, file_cfg: dict, default):
    value = getattr(ns, key.replace("-", "_"), None)
    if value is not None:
        return value
    if key in file_cfg and file_cfg[key] is not None:
        return file_cfg[key]
    return default


def _resolve_action_spec(ns, file_cfg: dict):
    if getattr(ns, "action", None):
        return _load_json(ns.action)
    if getattr(ns, "weights", None):
        return {"kind": "circle", "weights": _parse_int_list(ns.weights)}
    return file_cfg.get("action")


def _resolve_profile_entries(ns, file_cfg: dict):
    if getattr(ns, "profile", None):
        return _parse_profile(ns.profile)
    return file_cfg.get("profile")


def _check_profile_action_consistent(profile: FrequencyProfile, action) -> None:
    induced = profile.induced_action()
    if not isinstance(action, WeightedCircleAction) or action.weights != induced.weights:
        raise CliError(
            EXIT_DIM,
            "profile induces weights "
            f"{induced.weights}, which disagrees with the requested action",
        )


def _solver_config(cfg: dict) -> CircleSolverConfig:
    return CircleSolverConfig(cfg["oversample"], cfg["refine"])


def _build_embedding(cfg: dict):
    """Shared backend resolution: returns (embedding, action)."""
    backend = cfg["backend"]
    if backend not in BACKENDS:
        raise CliError(EXIT_INPUT, f"unknown backend {backend!r}")
    profile = FrequencyProfile(tuple(tuple(e) for e in cfg["profile"])) if cfg.get("profile") else None

    if backend in ("bispectrum", "scaled-bispectrum"):
        if profile is None:
            raise CliError(EXIT_INPUT, f"backend {backend} requires a frequency profile")
        if cfg.get("action"):
            _check_profile_action_consistent(profile, action_from_spec(cfg["action"]))
        emb = BispectrumEmbedding(profile, scaled=(backend == "scaled-bispectrum"))
        return emb, emb.action

    if cfg.get("bank"):
        bank = bank_from_spec(cfg["bank"])
        if cfg.get("action") and action_from_spec(cfg["action"]).__class__ is bank.action.__class__:
            if isinstance(bank.action, WeightedCircleAction):
                if action_from_spec(cfg["action"]).weights != bank.action.weights:
                    raise CliError(EXIT_DIM, "bank file and requested action disagree")
        return BankEmbedding(bank), bank.action

    if cfg.get("action"):
        action = action_from_spec(cfg["action"])
    elif profile is not None:
        action = profile.induced_action()
    else:
        raise CliError(EXIT_INPUT, "no action given: use --action, --weights, or --profile")
    if profile is not None:
        _check_profile_action_consistent(profile, action)
    n = cfg.get("bank_n") or recommended_template_count(action).bilipschitz
    bank = MaxFilterBank(
        action,
        tuple(generate_templates(action, n, cfg["bank_seed"])),
        _solver_config(cfg),
        cfg["bank_seed"],
    )
    return BankEmbedding(bank), action


def _resolve_dataset(ns, cfg: dict, file_cfg: dict, label: str):
    """Dataset from --dataset, from an echoed header, or synthesized from the
    profile; the resolved header goes back into the config echo."""
    if getattr(ns, "dataset", None):
        ds = load_dataset(ns.dataset)
        cfg["dataset"] = {
            "profile": [list(e) for e in ds.profile.entries],
            "m": ds.size,
            "decay": ds.provenance.get("decay"),
            "seed": ds.provenance.get("seed"),
        }
        return ds
    header = file_cfg.get("dataset") or cfg.get("dataset")
    if header:
        if header.get("seed") is None:
            raise CliError(EXIT_INPUT, "dataset in config has no seed; cannot regenerate")
        profile = FrequencyProfile(tuple(tuple(e) for e in header["profile"]))
        ds = synth_dataset(profile, header["m"], header.get("decay") or 0.0, header["seed"])
        cfg["dataset"] = header
        return ds
    if cfg.get("profile") and getattr(ns, "m", None):
        profile = FrequencyProfile(tuple(tuple(e) for e in cfg["profile"]))
        seed = substream(cfg["seed"], label)
        ds = synth_dataset(profile, ns.m, cfg.get("decay") or 0.0, seed)
        cfg["dataset"] = {
            "profile": [list(e) for e in profile.entries],
            "m": ds.size,
            "decay": ds.provenance["decay"],
            "seed": seed,
        }
        return ds
    raise CliError(EXIT_INPUT, "no dataset: pass --dataset or --profile with --m")


def _base_config(ns, file_cfg: dict, command: str) -> dict:
    cfg = {
        "seed": int(_merged(ns, "seed", file_cfg, 0)),
        "oversample": int(_merged(ns, "oversample", file_cfg, 8)),
        "refine": int(_merged(ns, "refine", file_cfg, 40)),
        "full_precision": bool(getattr(ns, "full_precision", False) or file_cfg.get("full_precision", False)),
    }
    action_spec = _resolve_action_spec(ns, file_cfg)
    if action_spec is not None:
        cfg["action"] = action_spec
    profile_entries = _resolve_profile_entries(ns, file_cfg)
    if profile_entries is not None:
        cfg["profile"] = profile_entries
    if command != "gen":
        cfg["backend"] = _merged(ns, "backend", file_cfg, "maxfilter")
        if getattr(ns, "bank", None):
            cfg["bank"] = _load_json(ns.bank)
        elif file_cfg.get("bank"):
            cfg["bank"] = file_cfg["bank"]
        cfg["bank_n"] = _merged(ns, "n", file_cfg, None)
        if cfg["bank_n"] is not None:
            cfg["bank_n"] = int(cfg["bank_n"])
        cfg["bank_seed"] = int(file_cfg.get("bank_seed", substream(cfg["seed"], "templates")))
    return cfg


def _echo(ns, outputs: _Outputs, command: str, cfg: dict) -> dict:
    payload = {"command": command, "config": cfg}
    if getattr(ns, "echo_config", None):
        outputs.write(ns.echo_config, _json_text(payload))
    return payload


# ---------------------------------------------------------------------------
# commands

def cmd_gen(ns, outputs: _Outputs) -> int:
    file_cfg = _load_config_file(ns.config, "gen") if ns.config else {}
    profile_entries = _resolve_profile_entries(ns, file_cfg)
    if profile_entries is None:
        raise CliError(EXIT_INPUT, "gen requires --profile")
    m = _merged(ns, "m", file_cfg, None)
    if m is None:
        raise CliError(EXIT_INPUT, "gen requires --m")
    decay = float(_merged(ns, "decay", file_cfg, 0.0))
    seed = int(_merged(ns, "seed", file_cfg, 0))
    if int(m) < 1:
        raise CliError(EXIT_INPUT, "refusing to generate an empty dataset (m must be >= 1)")
    profile = FrequencyProfile(tuple(tuple(e) for e in profile_entries))
    ds = synth_dataset(profile, int(m), decay, seed)
    if not ns.out:
        raise CliError(EXIT_INPUT, "gen requires --out FILE")
    header = {
        "profile": [list(e) for e in profile.entries],
        "m": ds.size,
        "decay": decay,
        "seed": seed,
    }
    from .actions import to_real as _to_real
    rows = [json.dumps(header, sort_keys=True)]
    for p in ds.points:
        rows.append(json.dumps(_to_real(p).tolist()))
    outputs.write(ns.out, "\n".join(rows) + "\n")
    _echo(ns, outputs, "gen", {"profile": [list(e) for e in profile.entries], "m": ds.size, "decay": decay, "seed": seed})
    return EXIT_OK


def cmd_embed(ns, outputs: _Outputs) -> int:
    file_cfg = _load_config_file(ns.config, "embed") if ns.config else {}
    cfg = _base_config(ns, file_cfg, "embed")
    full = cfg["full_precision"]

    x_vals = _parse_float_list(ns.x) if ns.x else file_cfg.get("x")
    z_vals = _parse_float_list(ns.z) if ns.z else file_cfg.get("z")

    if x_vals is not None and z_vals is not None and cfg["backend"] == "maxfilter" and not cfg.get("bank"):
        # Inline pair mode: one max filter value <<[x],[z]>>.
        if not cfg.get("action"):
            raise CliError(EXIT_INPUT, "inline mode needs --action or --weights")
        action = action_from_spec(cfg["action"])
        x = _point_for_action(action, x_vals)
        z = _point_for_action(action, z_vals)
        value = max_filter(action, x, z, _solver_config(cfg)).value
        _require_finite("max filter value", [value])
        cfg["x"], cfg["z"] = list(x_vals), list(z_vals)
        _echo(ns, outputs, "embed", cfg)
        print(fmt_float(value, full))
        return EXIT_OK

    emb, action = _build_embedding(cfg)
    if isinstance(emb, BankEmbedding):
        cfg["bank"] = bank_to_spec(emb.bank)

    is_bispec = cfg["backend"] != "maxfilter"

    def render(point) -> str:
        row = emb(point)
        _require_finite("embedded row", row)
        if is_bispec:
            values = to_complex(row)
            return ",".join(fmt_complex(v, full) for v in values)
        return ",".join(fmt_float(v, full) for v in row)

    if x_vals is not None:
        point = _point_for_action(action, x_vals)
        cfg["x"] = list(x_vals)
        _echo(ns, outputs, "embed", cfg)
        print(render(point))
        return EXIT_OK

    if not getattr(ns, "dataset", None) and not (file_cfg.get("dataset") or cfg.get("dataset")):
        raise CliError(EXIT_INPUT, "embed needs --x or --dataset")
    ds = _resolve_dataset(ns, cfg, file_cfg, "dataset")
    induced = ds.profile.induced_action()
    if isinstance(action, WeightedCircleAction) and action.weights != induced.weights:
        raise CliError(EXIT_DIM, "dataset profile and embedding action disagree")
    lines = [render(p) for p in ds.points]
    text = "\n".join(lines) + ("\n" if lines else "")
    _echo(ns, outputs, "embed", cfg)
    if ns.out:
        outputs.write(ns.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dist(ns, outputs: _Outputs) -> int:
    file_cfg = _load_config_file(ns.config, "dist") if ns.config else {}
    cfg = {
        "oversample": int(_merged(ns, "oversample", file_cfg, 8)),
        "refine": int(_merged(ns, "refine", file_cfg, 40)),
        "full_precision": bool(getattr(ns, "full_precision", False) or file_cfg.get("full_precision", False)),
    }
    action_spec = _resolve_action_spec(ns, file_cfg)
    if action_spec is None:
        raise CliError(EXIT_INPUT, "dist needs --action or --weights")
    cfg["action"] = action_spec
    x_vals = _parse_float_list(ns.x) if ns.x else file_cfg.get("x")
    z_vals = _parse_float_list(ns.z) if ns.z else file_cfg.get("z")
    if x_vals is None or z_vals is None:
        raise CliError(EXIT_INPUT, "dist needs --x and --z")
    action = action_from_spec(action_spec)
    x = _point_for_action(action, x_vals)
    z = _point_for_action(action, z_vals)
    d = quotient_distance(action, x, z, _solver_config(cfg))
    _require_finite("distance", [d])
    cfg["x"], cfg["z"] = list(x_vals), list(z_vals)
    _echo(ns, outputs, "dist", cfg)
    print(fmt_float(d, cfg["full_precision"]))
    return EXIT_OK


def cmd_stability(ns, outputs: _Outputs) -> int:
    file_cfg = _load_config_file(ns.config, "stability") if ns.config else {}
    cfg = _base_config(ns, file_cfg, "stability")
    cfg["pairs"] = int(_merged(ns, "pairs", file_cfg, 1000))
    cfg["scale"] = float(_merged(ns, "scale", file_cfg, 1.0))
    cfg["buckets"] = int(_merged(ns, "buckets", file_cfg, 20))
    cfg["hi_oversample"] = int(_merged(ns, "hi_oversample", file_cfg, 64))
    cfg["hi_refine"] = int(_merged(ns, "hi_refine", file_cfg, 60))
    cfg["dist_floor_rel"] = float(_merged(ns, "dist_floor_rel", file_cfg, 1e-9))
    cfg["sampler_seed"] = int(file_cfg.get("sampler_seed", substream(cfg["seed"], "sampler")))
    probe_x = _parse_float_list(ns.probe_x) if ns.probe_x else file_cfg.get("probe_x")
    cfg["probe_x"] = probe_x
    cfg["probe_scales"] = (
        _parse_float_list(ns.probe_scales) if ns.probe_scales else file_cfg.get("probe_scales", [1e-1, 1e-2, 1e-3, 1e-4])
    )
    cfg["pairs_per_scale"] = int(_merged(ns, "pairs_per_scale", file_cfg, 100))
    cfg["probe_seed"] = int(file_cfg.get("probe_seed", substream(cfg["seed"], "probe")))
    if not ns.out:
        raise CliError(EXIT_INPUT, "stability requires --out DIR")

    emb, action = _build_embedding(cfg)
    if isinstance(emb, BankEmbedding):
        cfg["bank"] = bank_to_spec(emb.bank)
    hi = CircleSolverConfig(cfg["hi_oversample"], cfg["hi_refine"])
    report = estimate_bilipschitz(
        emb,
        action,
        cfg["pairs"],
        seed=cfg["sampler_seed"],
        scale=cfg["scale"],
        dist_floor_rel=cfg["dist_floor_rel"],
        hi_res=hi,
        num_buckets=cfg["buckets"],
    )
    _require_finite("stability report", [report.alpha_hat, report.beta_hat])
    results = report.to_dict()

    trace = None
    if probe_x is not None:
        x = _point_for_action(action, probe_x)
        trace = local_lower_probe(
            emb,
            action,
            x,
            cfg["probe_scales"],
            pairs_per_scale=cfg["pairs_per_scale"],
            seed=cfg["probe_seed"],
            dist_floor_rel=cfg["dist_floor_rel"],
            hi_res=hi,
        )
        results["scale_trace"] = [list(b) for b in trace]

    payload = _echo(ns, outputs, "stability", cfg)
    payload["results"] = results
    outputs.write(os.path.join(ns.out, "stability.json"), _json_text(payload))
    outputs.write(
        os.path.join(ns.out, "ratio_histogram.csv"),
        _csv_text(
            ("bucket_left", "bucket_right", "count"),
            report.ratio_histogram,
            cfg["full_precision"],
        ),
    )
    if trace is not None:
        outputs.write(
            os.path.join(ns.out, "scale_trace.csv"),
            _csv_text(("scale", "min_ratio"), trace, cfg["full_precision"]),
        )
    return EXIT_OK


def cmd_ann(ns, outputs: _Outputs) -> int:
    file_cfg = _load_config_file(ns.config, "ann") if ns.config else {}
    cfg = _base_config(ns, file_cfg, "ann")
    cfg["decay"] = float(_merged(ns, "decay", file_cfg, 0.0))
    cfg["queries"] = int(_merged(ns, "queries", file_cfg, 50))
    cfg["hi_oversample"] = int(_merged(ns, "hi_oversample", file_cfg, 64))
    cfg["hi_refine"] = int(_merged(ns, "hi_refine", file_cfg, 60))
    cfg["dist_floor_rel"] = float(_merged(ns, "dist_floor_rel", file_cfg, 1e-9))
    cfg["queries_seed"] = int(file_cfg.get("queries_seed", substream(cfg["seed"], "queries")))
    if not ns.out:
        raise CliError(EXIT_INPUT, "ann requires --out DIR")

    ds = _resolve_dataset(ns, cfg, file_cfg, "dataset")
    if not cfg.get("profile"):
        cfg["profile"] = cfg["dataset"]["profile"]
    emb, action = _build_embedding(cfg)
    if isinstance(emb, BankEmbedding):
        cfg["bank"] = bank_to_spec(emb.bank)
    queries = synth_dataset(
        ds.profile, cfg["queries"], cfg["dataset"].get("decay") or 0.0, cfg["queries_seed"]
    ).points
    hi = CircleSolverConfig(cfg["hi_oversample"], cfg["hi_refine"])
    report = evaluate_lambda(emb, ds, queries, hi, cfg["dist_floor_rel"])
    _require_finite("ann report", [report.alpha_hat, report.beta_hat, report.max_achieved_lambda])

    payload = _echo(ns, outputs, "ann", cfg)
    payload["results"] = report.to_dict()
    outputs.write(os.path.join(ns.out, "ann.json"), _json_text(payload))
    return EXIT_OK


def cmd_cosine_family(ns, outputs: _Outputs) -> int:
    file_cfg = _load_config_file(ns.config, "cosine-family") if ns.config else {}
    cfg = {
        "k_values": _parse_float_list(ns.k) if ns.k else file_cfg.get("k_values", [1.0, 2.0, 3.0, 3.5, 4.0]),
        "samples": int(_merged(ns, "samples", file_cfg, 1024)),
        "oversample": int(_merged(ns, "oversample", file_cfg, 16)),
        "refine": int(_merged(ns, "refine", file_cfg, 60)),
        "full_precision": bool(getattr(ns, "full_precision", False) or file_cfg.get("full_precision", False)),
    }
    if not ns.out:
        raise CliError(EXIT_INPUT, "cosine-family requires --out DIR")
    if cfg["samples"] < 2:
        raise CliError(EXIT_INPUT, "samples must be >= 2")
    solver = CircleSolverConfig(cfg["oversample"], cfg["refine"])
    rows = cosine_family_maxima(cfg["k_values"], solver)
    for _, value, _ in rows:
        _require_finite("cosine family maxima", [value])

    payload = _echo(ns, outputs, "cosine-family", cfg)
    payload["results"] = [
        {"k": k, "max_value": v, "witnesses": list(w)} for k, v, w in rows
    ]
    outputs.write(os.path.join(ns.out, "cosine_family.json"), _json_text(payload))

    thetas = [-math.pi + 2.0 * math.pi * t / cfg["samples"] for t in range(cfg["samples"])]
    columns = ["theta"] + [f"k={fmt_float(k, False)}" for k in cfg["k_values"]]
    curve_rows = []
    for th in thetas:
        curve_rows.append([th] + [k * math.cos(th) - math.cos(2 * th) for k in cfg["k_values"]])
    outputs.write(
        os.path.join(ns.out, "cosine_family_curves.csv"),
        _csv_text(columns, curve_rows, cfg["full_precision"]),
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="re-run from an echoed config (JSON report or dataset header)")
    p.add_argument("--echo-config", help="write the resolved config to this path")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--oversample", type=int, default=None, help="grid oversampling factor")
    p.add_argument("--refine", type=int, default=None, help="refinement iterations")
    p.add_argument("--full-precision", action="store_true", default=False)


def _add_action_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--action", help="JSON action spec file")
    p.add_argument("--weights", help="inline circle action, e.g. 1,2")
    p.add_argument("--profile", help="frequency profile, e.g. 0:1,1:2")


def _add_backend_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=BACKENDS, default=None)
    p.add_argument("--bank", help="bank JSON file")
    p.add_argument("--n", type=int, default=None, help="template count (default: bilipschitz rule)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitmax",
        description="Group-invariant max filter embeddings, stability probes, and ANN benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic coefficient dataset")
    _add_common(p)
    _add_action_flags(p)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--decay", type=float, default=None)
    p.add_argument("--out", help="output dataset file (JSON lines)")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("embed", help="embed a dataset or a single point")
    _add_common(p)
    _add_action_flags(p)
    _add_backend_flags(p)
    p.add_argument("--dataset", help="input dataset file")
    p.add_argument("--x", help="inline point, interleaved re,im")
    p.add_argument("--z", help="inline template for the pair mode")
    p.add_argument("--out", help="output rows file (default: stdout)")
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("dist", help="quotient distance between two points")
    _add_common(p)
    _add_action_flags(p)
    p.add_argument("--x", required=False)
    p.add_argument("--z", required=False)
    p.set_defaults(fn=cmd_dist)

    p = sub.add_parser("stability", help="empirical bilipschitz estimation")
    _add_common(p)
    _add_action_flags(p)
    _add_backend_flags(p)
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--buckets", type=int, default=None)
    p.add_argument("--hi-oversample", type=int, default=None)
    p.add_argument("--hi-refine", type=int, default=None)
    p.add_argument("--dist-floor-rel", type=float, default=None)
    p.add_argument("--probe-x", help="run a local lower-Lipschitz probe at this point")
    p.add_argument("--probe-scales", help="comma-separated probe scales")
    p.add_argument("--pairs-per-scale", type=int, default=None)
    p.add_argument("--out", help="output directory")
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("ann", help="approximate nearest neighbor benchmark")
    _add_common(p)
    _add_action_flags(p)
    _add_backend_flags(p)
    p.add_argument("--dataset", help="input dataset file (else synthesized from --profile/--m)")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--decay", type=float, default=None)
    p.add_argument("--queries", type=int, default=None)
    p.add_argument("--hi-oversample", type=int, default=None)
    p.add_argument("--hi-refine", type=int, default=None)
    p.add_argument("--dist-floor-rel", type=float, default=None)
    p.add_argument("--out", help="output directory")
    p.set_defaults(fn=cmd_ann)

    p = sub.add_parser("cosine-family", help="maxima and curve data for k cos(t) - cos(2t)")
    _add_common(p)
    p.add_argument("--k", help="comma-separated k values (default 1,2,3,3.5,4)")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out", help="output directory")
    p.set_defaults(fn=cmd_cosine_family)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    outputs = _Outputs()
    try:
        return ns.fn(ns, outputs)
    except CliError as exc:
        outputs.rollback()
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DimensionMismatch as exc:
        outputs.rollback()
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except FloatingPointError as exc:
        outputs.rollback()
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        outputs.rollback()
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
