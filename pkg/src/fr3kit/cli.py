"""Command line entry point: ``fr3kit <subcommand> [--config FILE] [--out DIR] ...``.

Exit codes: 0 success, 1 computation error, 2 config error, 3 I/O error.
Every run writes ``effective_config.json`` and ``manifest.json`` (SHA-256 of
each emitted file) next to its data files.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import array as arr
from . import linkbudget as lb
from . import pas
from . import ris
from . import spectrum as sp
from .config import SUBCOMMANDS, effective_config, parse_config
from .errors import ConfigurationError, Fr3kitError

EXIT_OK, EXIT_COMPUTE, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

# published mean SE gains of 15 GHz over the other two configurations
REFERENCE_SE_GAPS = {"3.5GHz": 0.87, "28GHz": 3.53}


@dataclass
class RunConfig:
    subcommand: str
    config_path: str | None = None
    out_dir: str = "out"
    seed: int = 0
    format: str = "csv"
    overrides: list = field(default_factory=list)
    synthetic: bool = False
    links: int | None = None
    input_dir: str | None = None
    compare: bool = False


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def csv_text(header, rows, trailer=()) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    for line in trailer:
        buf.write(line + "\n")
    return buf.getvalue()


def json_text(obj) -> str:
    def round_floats(o):
        if isinstance(o, float):
            return float(fmt(o)) if o == o and abs(o) != float("inf") else fmt(o)
        if isinstance(o, dict):
            return {k: round_floats(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [round_floats(v) for v in o]
        return o

    return json.dumps(round_floats(obj), indent=2, sort_keys=True) + "\n"


class Emitter:
    """Collects output files and writes each atomically (temp file + rename)."""

    def __init__(self, out_dir, fmt_name="csv"):
        self.out = Path(out_dir)
        self.format = fmt_name
        self.files = {}

    def write(self, name, text):
        self.out.mkdir(parents=True, exist_ok=True)
        target = self.out / name
        fd, tmp = tempfile.mkstemp(dir=self.out, prefix=f".{name}.")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.files[name] = hashlib.sha256(text.encode()).hexdigest()

    def table(self, stem, header, rows, trailer=(), extra=None):
        """Write a table as CSV or JSON depending on the selected format."""
        rows = [list(r) for r in rows]
        if self.format == "json":
            doc = {"columns": list(header), "rows": rows}
            if extra:
                doc.update(extra)
            self.write(f"{stem}.json", json_text(doc))
        else:
            self.write(f"{stem}.csv", csv_text(header, rows, trailer))

    def manifest(self):
        doc = {"files": [{"name": k, "sha256": v} for k, v in sorted(self.files.items())]}
        self.write("manifest.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")


def run_spectrum(cfg, em: Emitter, rc: RunConfig):
    plan = sp.load_band_plan(cfg.band_plan) if cfg.band_plan else sp.default_band_plan()
    em.table(
        "bands",
        ["label", "low_hz", "high_hz", "status", "services"],
        [[b.label, b.low, b.high, b.status, ";".join(sorted(b.services))] for b in plan],
    )
    em.table("classification", ["frequency_hz", "fr"], [[f, sp.classify_fr(f, plan)] for f in cfg.frequencies])
    total = sp.total_identified_bandwidth(plan, set(cfg.status_filter))
    em.table("summary", ["status_filter", "total_identified_bandwidth_hz"], [[";".join(cfg.status_filter), total]])
    scheme = sp.AggregationScheme(tuple(sp.carrier(lo, hi) for lo, hi in cfg.carriers), cfg.mode)
    res = sp.aggregate(scheme, cfg.speed_of_light)
    em.table(
        "aggregation",
        ["aperture_hz", "occupied_hz", "sparsity", "delay_resolution_s", "range_resolution_m"],
        [[res.aperture_hz, res.occupied_hz, res.sparsity, res.delay_resolution_s, res.range_resolution_m]],
    )


def run_array(cfg, em: Emitter, rc: RunConfig):
    rows = []
    for i, f in enumerate(cfg.frequencies):
        if cfg.n_per_side is not None:
            n = int(cfg.n_per_side[i])
            pitch = arr.wavelength(f) / (2 if cfg.pitch_rule == "half_wavelength" else 1)
            geom = arr.ArrayGeometry(cfg.kind, n, n if cfg.kind == "URA" else 1, pitch, f)
        else:
            geom = arr.ArrayGeometry.for_aperture(cfg.aperture_side, f, cfg.kind, cfg.pitch_rule)
        rows.append([f, geom.n_x, geom.n_y, arr.directivity(geom, cfg.grid_step), arr.hpbw(geom, "azimuth")])
    em.table("array", ["frequency_hz", "n_x", "n_y", "directivity_dbi", "hpbw_deg"], rows)


TRADEOFF_COLUMNS = ["frequency", "hpbw", "radius", "bandwidth", "capacity", "cov_norm", "cap_norm", "n_cc"]


def run_tradeoff(cfg, em: Emitter, rc: RunConfig):
    scan = lb.ncc_scan(cfg)
    band = lb.balanced_band(scan, cfg.threshold)
    rows = [[getattr(p, c) for c in TRADEOFF_COLUMNS] for p in scan]
    if band is None:
        trailer = ["balanced_band,,"]
    else:
        trailer = [f"balanced_band,{fmt(band[0])},{fmt(band[1])}"]
    em.table("tradeoff", TRADEOFF_COLUMNS, rows, trailer, extra={"balanced_band": list(band) if band else None})
    if band is not None:
        print(f"balanced band: {band[0] / 1e9:.3f}-{band[1] / 1e9:.3f} GHz")


def run_pas(cfg, em: Emitter, rc: RunConfig):
    bands = tuple(
        pas.BandSetup(label, float(f), int(n))
        for label, f, n in zip(cfg.band_labels, cfg.band_frequencies, cfg.band_elements)
    )
    pairs = tuple(tuple(p) for p in cfg.pairs)
    input_dir = rc.input_dir or cfg.input_dir
    if input_dir and not rc.synthetic:
        links = pas.load_pas_dir(input_dir, [b.label for b in bands])
    else:
        n = rc.links or cfg.n_links
        links = {}
        for i in range(n):
            spectra = pas.synthetic_link(rc.seed, i, bands, cfg.jitter_deg, cfg.grid_step)
            links[next(iter(spectra.values())).link_id] = spectra
    ensembles = pas.evaluate_links(links, bands, pairs, cfg.k, pas.angle_grid(cfg.steering_step))
    cdf_rows = {"psp": [], "r": []}
    for name, ens in ensembles.items():
        em.table(
            f"similarity_{name}",
            ["link_id", "band_pair", "psp", "r_db", "k"],
            [[r.link_id, name, r.psp, r.r_db, r.k] for r in ens.results],
        )
        for metric, attr in (("psp", "psp"), ("r", "r_db")):
            for value, prob in pas.empirical_cdf([getattr(r, attr) for r in ens.results]):
                cdf_rows[metric].append([name, value, prob])
    for metric, rows in cdf_rows.items():
        em.table(f"cdf_{metric}", ["band_pair", "value", "probability"], rows)


RIS_COLUMNS = ["pt_dbm", "n_elements", "snr_db", "se", "ee", "p_total_w"]


def _ris_rows(results):
    return [[r.pt_dbm, r.n_elements, r.snr_db, r.se, r.ee, r.p_total] for r in results]


def run_ris(cfg, em: Emitter, rc: RunConfig):
    base = cfg
    if not rc.compare:
        results, _ = ris.sweep(base)
        em.table("ris", RIS_COLUMNS, _ris_rows(results))
        return
    scenarios = ris.case_study_scenarios(base)
    for label, scen in scenarios.items():
        results, _ = ris.sweep(scen)
        em.table(f"ris_{label}", RIS_COLUMNS, _ris_rows(results))
    gaps = ris.compare_case_studies(base)
    rows = [[label, gap, REFERENCE_SE_GAPS[label], gap - REFERENCE_SE_GAPS[label]] for label, gap in sorted(gaps.items())]
    em.table("compare", ["reference", "mean_se_gap", "reference_value", "model_minus_reference"], rows)
    for label, gap, ref, _ in rows:
        print(f"mean SE gap 15GHz vs {label}: {gap:.3f} bit/s/Hz (reference: {ref})")


RUNNERS = {
    "spectrum": run_spectrum,
    "array": run_array,
    "tradeoff": run_tradeoff,
    "pas": run_pas,
    "ris": run_ris,
}


def _error_record(kind, exc, code):
    rec = {"error": kind, "type": type(exc).__name__, "message": str(exc), "exit_code": code}
    key = getattr(exc, "key_path", None)
    if key:
        rec["key_path"] = key
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")
    return code


def load_document(path):
    if path is None:
        return {}
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON: {exc}", "$") from exc


def run(rc: RunConfig) -> int:
    try:
        document = load_document(rc.config_path)
    except OSError as exc:
        return _error_record("io", exc, EXIT_IO)
    except ConfigurationError as exc:
        return _error_record("config", exc, EXIT_CONFIG)
    try:
        cfg = parse_config(document, rc.subcommand, rc.overrides)
    except ConfigurationError as exc:
        return _error_record("config", exc, EXIT_CONFIG)
    em = Emitter(rc.out_dir, rc.format)
    try:
        RUNNERS[rc.subcommand](cfg, em, rc)
        em.write("effective_config.json", json.dumps(effective_config(cfg), indent=2, sort_keys=True) + "\n")
        em.manifest()
    except ConfigurationError as exc:
        return _error_record("config", exc, EXIT_CONFIG)
    except OSError as exc:
        return _error_record("io", exc, EXIT_IO)
    except Fr3kitError as exc:
        return _error_record("computation", exc, EXIT_COMPUTE)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fr3kit", description="Multi-band FR1/FR2/FR3 link analysis")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario config")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "pas":
            p.add_argument("--synthetic", action="store_true", help="use the seeded synthetic corpus")
            p.add_argument("--links", type=int, help="number of synthetic links")
            p.add_argument("--input", dest="input_dir", help="directory of <band>.csv PAS files")
        if name == "ris":
            p.add_argument("--compare", action="store_true", help="run the 3.5/15/28 GHz configurations")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    rc = RunConfig(
        subcommand=args.subcommand,
        config_path=args.config,
        out_dir=args.out,
        seed=args.seed,
        format=args.format,
        overrides=args.overrides,
        synthetic=getattr(args, "synthetic", False),
        links=getattr(args, "links", None),
        input_dir=getattr(args, "input_dir", None),
        compare=getattr(args, "compare", False),
    )
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())
