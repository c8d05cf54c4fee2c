"""Command-line pipeline wiring every stage of the toolkit.

Each subcommand reads the previous stage's files and writes its own plus a
run manifest (command, settings, seed, input digests), so any stage can be
re-run independently and every output is attributable to its inputs.

Exit codes: 0 success, 1 internal error, 2 input/validation error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, econ, eca, fishstats, lstm, scenario, sst_data, synthetic, tdf

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# config files and manifests


def load_config_file(path, allowed: set[str]) -> dict[str, str]:
    """Parse a ``key=value`` config file with ``#`` comments.

    Unknown keys are rejected so typos fail loudly instead of silently
    falling back to defaults.
    """
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got '{line}'")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in allowed:
                raise ValueError(
                    f"{path}:{lineno}: unknown key '{key}' (allowed: {sorted(allowed)})"
                )
            values[key] = val
    return values


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, command: str, settings: dict, seed: int | None,
                   inputs: list) -> Path:
    """One manifest per run, next to the outputs."""
    manifest = {
        "command": command,
        "tool_version": __version__,
        "seed": seed,
        "settings": settings,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path = out_dir / f"{command}_manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_extent(spec: str) -> sst_data.GridExtent:
    """Parse ``lat_top,lon_left,rows,cols`` into a grid extent."""
    parts = spec.split(",")
    if len(parts) != 4:
        raise ValueError(f"extent must be lat_top,lon_left,rows,cols, got '{spec}'")
    return sst_data.GridExtent(float(parts[0]), float(parts[1]),
                               int(parts[2]), int(parts[3]))


def _load_mask(args, extent: sst_data.GridExtent) -> sst_data.LandMask:
    if getattr(args, "mask", None):
        mask = sst_data.LandMask.from_text(args.mask)
        if (mask.rows, mask.cols) != (extent.rows, extent.cols):
            raise ValueError(
                f"mask {mask.rows}x{mask.cols} does not match extent "
                f"{extent.rows}x{extent.cols}"
            )
        return mask
    return sst_data.LandMask.all_water(extent.rows, extent.cols)


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(args) -> int:
    out = _out_dir(args)
    store = sst_data.load_sst_csv(args.input)
    n_loaded = len(store)
    if args.month is not None:
        store = sst_data.filter_month(store, args.month)
    dest = out / "store.csv"
    sst_data.write_sst_csv(store, dest)
    write_manifest(out, "ingest", {"month": args.month, "store": str(dest)},
                   args.seed, [args.input])
    print(f"ingest: {n_loaded} rows read, {len(store)} kept, "
          f"{store.n_vertices} vertexes -> {dest}")
    return EXIT_OK


def cmd_make_synthetic(args) -> int:
    out = _out_dir(args)
    extent = _parse_extent(args.extent)
    written = {}
    if args.kind in ("sst", "all"):
        path = out / "sst.csv"
        months = tuple(range(1, 13)) if args.monthly else (8,)
        rows = synthetic.write_synthetic_sst_csv(
            path, extent, args.start_year, args.years, months=months,
            trend=args.trend, noise_sigma=args.noise, seed=args.seed)
        written["sst"] = str(path)
        print(f"make-synthetic: {rows} SST rows -> {path}")
    if args.kind in ("occurrences", "all"):
        path = out / "occurrences.csv"
        params = {
            "herring": (10.397, 0.010, args.occurrence_count),
            "mackerel": (10.304, 0.119, args.occurrence_count),
        }
        rows = synthetic.write_occurrences_csv(path, params, seed=args.seed)
        written["occurrences"] = str(path)
        print(f"make-synthetic: {rows} occurrence rows -> {path}")
    if args.kind in ("seeding", "all"):
        store = synthetic.synthetic_store(extent, args.start_year, 1, seed=args.seed)
        mask = _load_mask(args, extent)
        layer = sst_data.vertex_layer(store, args.start_year, 8)
        field = sst_data.build_grid_field(layer, mask, extent, args.start_year)
        profile = fishstats.FishProfile(args.species, args.mu, args.sigma)
        path = out / "seeding.csv"
        placed = synthetic.write_uniform_seeding_csv(path, field, profile,
                                                     args.cells, seed=args.seed)
        written["seeding"] = str(path)
        print(f"make-synthetic: {placed} cells seeded -> {path}")
    write_manifest(out, "make-synthetic",
                   {"kind": args.kind, "extent": args.extent, **written},
                   args.seed, [])
    return EXIT_OK


def cmd_fit_fish(args) -> int:
    out = _out_dir(args)
    records = fishstats.load_occurrences(args.occurrences)
    profiles = fishstats.fit_profiles(records)
    dest = out / "profiles.csv"
    fishstats.save_profiles(profiles, dest)
    qq_paths = {}
    by_species: dict[str, list[float]] = {}
    for rec in records:
        by_species.setdefault(rec.species, []).append(rec.sst_c)
    for species, temps in sorted(by_species.items()):
        points, score = fishstats.qq_points(temps)
        qq_path = out / f"qq_{species}.csv"
        fishstats.save_qq_points(points, qq_path)
        qq_paths[species] = str(qq_path)
        print(f"fit-fish: {species}: n={len(temps)} "
              f"mu={profiles[species].mu:.4f} sigma={profiles[species].sigma:.4f} "
              f"qq_max_dev={score:.4f}")
    write_manifest(out, "fit-fish", {"profiles": str(dest), "qq": qq_paths},
                   args.seed, [args.occurrences])
    print(f"fit-fish: profiles -> {dest}")
    return EXIT_OK


def _block_series(store: sst_data.SstSeriesStore, extent: sst_data.GridExtent,
                  i: int, j: int, month: int) -> tuple[list[int], np.ndarray]:
    """Cell temperature series for one block: average of its corner series."""
    corner_series = []
    years_ref: list[int] | None = None
    for lat, lon in extent.cell_corners(i, j):
        if not store.has_vertex(lat, lon):
            raise ValueError(f"block ({i}, {j}) is missing vertex ({lat}, {lon})")
        seq = [(y, t) for y, m, t in store.series(lat, lon) if m == month]
        years = [y for y, _ in seq]
        if years_ref is None:
            years_ref = years
        elif years != years_ref:
            raise ValueError(f"block ({i}, {j}) corner series disagree on years")
        corner_series.append([t for _, t in seq])
    temps = np.mean(np.array(corner_series), axis=0)
    return years_ref or [], temps


def _tdf_config(args) -> tdf.TdfConfig:
    return tdf.TdfConfig.annual(adjacent=args.adjacent, seasonal=args.seasonal)


def cmd_train(args) -> int:
    out = _out_dir(args)
    extent = _parse_extent(args.extent)
    mask = _load_mask(args, extent)
    store = sst_data.load_sst_csv(args.store)
    config = _tdf_config(args)
    train_cfg = lstm.TrainConfig(
        learning_rate=args.learning_rate, epochs=args.epochs, clip=args.clip,
        seed=args.seed, init_scale=args.init_scale, hidden_size=args.hidden)
    failures = []
    trained = 0
    for i in range(extent.rows):
        for j in range(extent.cols):
            if mask.is_land(i, j):
                continue
            years, temps = _block_series(store, extent, i, j, args.month)
            dataset = tdf.make_dataset(temps, config)
            try:
                params, readout, history = lstm.train(dataset, train_cfg)
            except lstm.TrainingDivergedError as exc:
                failures.append(((i, j), str(exc)))
                continue
            meta = {
                "block": [i, j],
                "month": args.month,
                "last_year": years[-1] if years else None,
                "tdf": {"lookback": config.lookback, "adjacent": config.adjacent,
                        "seasonal": config.seasonal,
                        "samples_per_year": config.samples_per_year},
                "final_loss": history[-1],
            }
            lstm.save_checkpoint(out / f"block_{i}_{j}.json", params, readout, meta)
            lstm.save_loss_history(history, out / f"loss_{i}_{j}.csv")
            trained += 1
    write_manifest(out, "train",
                   {"extent": args.extent, "month": args.month,
                    "hidden": args.hidden, "epochs": args.epochs,
                    "learning_rate": args.learning_rate, "clip": args.clip,
                    "init_scale": args.init_scale,
                    "blocks_trained": trained, "blocks_failed": len(failures)},
                   args.seed, [args.store])
    print(f"train: {trained} blocks trained -> {out}")
    if failures:
        for block, msg in failures:
            print(f"train: block {block} failed: {msg}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_forecast(args) -> int:
    out = _out_dir(args)
    extent = _parse_extent(args.extent)
    mask = _load_mask(args, extent)
    store = sst_data.load_sst_csv(args.store)
    config = _tdf_config(args)
    years = sorted(int(y) for y in args.years.split(","))
    if not years or years[0] < 1:
        raise ValueError("--years must list offsets >= 1")
    horizon = years[-1]
    forecasts: dict[tuple[int, int], np.ndarray] = {}
    for i in range(extent.rows):
        for j in range(extent.cols):
            if mask.is_land(i, j):
                continue
            ckpt = Path(args.checkpoints) / f"block_{i}_{j}.json"
            if not ckpt.exists():
                raise ValueError(f"missing checkpoint for water block ({i}, {j}): {ckpt}")
            params, readout, _ = lstm.load_checkpoint(ckpt)
            _, temps = _block_series(store, extent, i, j, args.month)
            forecasts[(i, j)] = lstm.forecast(params, readout, temps, config, horizon)
    field_paths = []
    for offset in years:
        values = np.zeros((extent.rows, extent.cols))
        for (i, j), preds in forecasts.items():
            values[i, j] = preds[offset - 1]
        field = sst_data.field_from_cell_values(values, mask, offset, extent)
        path = out / f"field_{offset:04d}.csv"
        sst_data.write_field_csv(field, path)
        field_paths.append(str(path))
        print(f"forecast: year +{offset} -> {path}")
    write_manifest(out, "forecast",
                   {"extent": args.extent, "years": years, "fields": field_paths},
                   args.seed, [args.store])
    return EXIT_OK


def _load_profiles_arg(args) -> dict[str, fishstats.FishProfile]:
    return fishstats.load_profiles(args.profiles)


def _yearly_fields(args, baseline: sst_data.GridField, horizon: int) -> list:
    if args.fields_dir:
        fields = []
        for n in range(1, horizon + 1):
            path = Path(args.fields_dir) / f"field_{n:04d}.csv"
            if not path.exists():
                raise ValueError(f"missing field file for year {n}: {path}")
            fields.append(sst_data.load_field_csv(path, year=n))
        return fields
    return [scenario.corrected_field(baseline, args.k, args.alpha, n)
            for n in range(1, horizon + 1)]


def cmd_simulate(args) -> int:
    out = _out_dir(args)
    baseline = sst_data.load_field_csv(args.baseline, year=0)
    profiles = _load_profiles_arg(args)
    space = eca.CellSpace.from_field(baseline, year=1, seed=args.seed or 0)
    eca.load_seeding_csv(args.seeding, space)
    fields = _yearly_fields(args, baseline, args.years)
    trajectory = eca.run_simulation(space, fields, profiles,
                                    seed=args.seed or 0, hop_budget=args.hop_budget)
    expected = space.species_counts()
    for _, snap, _ in trajectory:
        eca.assert_space_invariants(snap, expected)
    occ_path = out / "occupancy.csv"
    mov_path = out / "movement.csv"
    eca.write_occupancy_csv(trajectory, occ_path)
    eca.write_movement_csv(trajectory, mov_path)
    write_manifest(out, "simulate",
                   {"years": args.years, "hop_budget": args.hop_budget,
                    "alpha": args.alpha, "k": args.k,
                    "occupancy": str(occ_path), "movement": str(mov_path)},
                   args.seed, [args.baseline, args.seeding, args.profiles])
    print(f"simulate: {args.years} years, {space.total_cells()} cells -> {occ_path}")
    return EXIT_OK


SCENARIO_KEYS = {"alpha", "k", "horizon", "predicate", "field_source", "hop_budget"}


def cmd_scenario(args) -> int:
    out = _out_dir(args)
    file_cfg = load_config_file(args.config, SCENARIO_KEYS) if args.config else {}
    alpha_list = [float(a) for a in args.alpha.split(",")] if args.alpha else None
    if alpha_list is None:
        alpha_list = [float(file_cfg.get("alpha", 1.0))]
    k = args.k if args.k is not None else float(file_cfg.get("k", 0.02))
    horizon = args.horizon if args.horizon is not None else int(file_cfg.get("horizon", 50))
    predicate_text = args.predicate or file_cfg.get("predicate")
    if not predicate_text:
        raise ValueError("a boundary predicate is required (--predicate or config file)")
    field_source = args.field_source or file_cfg.get("field_source", "linear")
    hop_budget = args.hop_budget or int(file_cfg.get("hop_budget", 1))

    baseline = sst_data.load_field_csv(args.baseline, year=0)
    profiles = _load_profiles_arg(args)
    space = eca.CellSpace.from_field(baseline, year=1, seed=args.seed or 0)
    eca.load_seeding_csv(args.seeding, space)

    fields = None
    if field_source == "lstm":
        if not args.fields_dir:
            raise ValueError("field_source=lstm needs --fields-dir with per-year fields")
        fields = [sst_data.load_field_csv(
            Path(args.fields_dir) / f"field_{n:04d}.csv", year=n)
            for n in range(1, horizon + 1)]

    config = scenario.ScenarioConfig(
        alpha=alpha_list[0], k=k, baseline=baseline, horizon=horizon,
        predicate=scenario.BoundaryPredicate.parse(predicate_text),
        field_source=field_source, fields=fields,
        seed=args.seed or 0, hop_budget=hop_budget)
    results = scenario.sweep_alpha(config, alpha_list, space, profiles)
    dest = out / "sweep.csv"
    scenario.write_sweep_csv(results, dest)
    for alpha, years in results:
        label = "not reached" if years is None else f"{years} years"
        print(f"scenario: alpha={alpha} -> {label}")
    write_manifest(out, "scenario",
                   {"alphas": alpha_list, "k": k, "horizon": horizon,
                    "predicate": predicate_text, "field_source": field_source,
                    "sweep": str(dest)},
                   args.seed, [args.baseline, args.seeding, args.profiles])
    print(f"scenario: sweep -> {dest}")
    return EXIT_OK


def cmd_econ(args) -> int:
    out = _out_dir(args)
    params = econ.load_params_file(args.params) if args.params else econ.FleetParams()
    inputs = [args.params] if args.params else []
    if args.distance is not None:
        breakdown = econ.voyage_profit(args.distance, params, refrigerated=args.refrigerated)
        sens = econ.sensitivity(params, args.distance, refrigerated=args.refrigerated)
        print(f"econ: distance={args.distance} km refrigerated={args.refrigerated}")
        print(f"econ: revenue={breakdown.revenue:.2f} fuel={breakdown.fuel:.2f} "
              f"crew={breakdown.crew:.2f} spoilage={breakdown.spoilage:.2f} "
              f"amortization={breakdown.amortization:.2f} net={breakdown.net:.2f}")
        print(f"econ: dnet/ddistance={sens.distance_fd:.6f} "
              f"dnet/dtime={sens.time_fd:.6f}")
    advice_path = None
    if args.occupancy:
        track = _track_from_occupancy(args.occupancy, args.species)
        home = tuple(float(v) for v in args.home.split(","))
        if len(home) != 2:
            raise ValueError("--home must be i,j")
        thresholds = econ.StrategyThresholds(args.upgrade_km, args.abandon_km)
        advice = econ.recommend_track(track, home, params, thresholds,
                                      refrigerated=args.refrigerated)
        advice_path = out / "recommendations.csv"
        econ.write_recommendations_csv(advice, advice_path)
        inputs.append(args.occupancy)
        print(f"econ: {len(advice)} yearly recommendations -> {advice_path}")
    write_manifest(out, "econ",
                   {"distance": args.distance, "refrigerated": args.refrigerated,
                    "recommendations": str(advice_path) if advice_path else None},
                   args.seed, inputs)
    return EXIT_OK


def _track_from_occupancy(path, species: str) -> list[tuple[int, tuple[float, float]]]:
    """Rebuild a per-year centroid track from an occupancy CSV."""
    sums: dict[int, list[float]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["year", "i", "j", "species", "cells"]:
            raise ValueError(f"{path}: expected header year,i,j,species,cells")
        for row in reader:
            if row["species"] != species:
                continue
            year = int(row["year"])
            n = int(row["cells"])
            acc = sums.setdefault(year, [0.0, 0.0, 0.0])
            acc[0] += int(row["i"]) * n
            acc[1] += int(row["j"]) * n
            acc[2] += n
    if not sums:
        raise ValueError(f"{path}: no rows for species '{species}'")
    return [(year, (si / n, sj / n))
            for year, (si, sj, n) in sorted(sums.items())]


def cmd_render(args) -> int:
    out = _out_dir(args)
    field = sst_data.load_field_csv(args.field)
    dest = out / (Path(args.field).stem + ".ppm")
    sst_data.render_heatmap(field, dest, scale=args.scale,
                            cold_c=args.cold, warm_c=args.warm,
                            ascii_format=args.ascii)
    write_manifest(out, "render",
                   {"field": args.field, "scale": args.scale,
                    "cold": args.cold, "warm": args.warm, "pixmap": str(dest)},
                   args.seed, [args.field])
    print(f"render: {dest}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fishcast",
        description="SST forecasting, fish migration simulation, and fleet economics",
    )
    parser.add_argument("--version", action="version", version=f"fishcast {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--seed", type=int, default=None, help="RNG seed")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("ingest", help="validate and store a vertex-sample CSV")
    common(p)
    p.add_argument("--input", required=True, help="CSV year,month,lat,lon,temp_c")
    p.add_argument("--month", type=int, default=None, help="keep only this month")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("make-synthetic", help="generate seeded fixture datasets")
    common(p)
    p.add_argument("--kind", choices=["sst", "occurrences", "seeding", "all"],
                   default="all")
    p.add_argument("--extent", default="68.0,-21.0,13,27",
                   help="lat_top,lon_left,rows,cols")
    p.add_argument("--mask", help="land-mask text file")
    p.add_argument("--start-year", type=int, default=1870)
    p.add_argument("--years", type=int, default=150)
    p.add_argument("--monthly", action="store_true",
                   help="all 12 months instead of August only")
    p.add_argument("--trend", type=float, default=0.02)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--occurrence-count", type=int, default=20000)
    p.add_argument("--species", default="herring")
    p.add_argument("--mu", type=float, default=10.397)
    p.add_argument("--sigma", type=float, default=0.010)
    p.add_argument("--cells", type=int, default=120)
    p.set_defaults(func=cmd_make_synthetic, seed=0)

    p = sub.add_parser("fit-fish", help="fit species thermal profiles")
    common(p)
    p.add_argument("--occurrences", required=True, help="CSV species,sst_c")
    p.set_defaults(func=cmd_fit_fish)

    def tdf_opts(p):
        p.add_argument("--month", type=int, default=8)
        p.add_argument("--adjacent", type=int, default=6)
        p.add_argument("--seasonal", type=int, default=1)

    p = sub.add_parser("train", help="train one model per water block")
    common(p)
    p.add_argument("--store", required=True, help="validated store CSV")
    p.add_argument("--extent", default="68.0,-21.0,13,27")
    p.add_argument("--mask", help="land-mask text file")
    tdf_opts(p)
    p.add_argument("--hidden", type=int, default=16)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--clip", type=float, default=5.0)
    p.add_argument("--init-scale", type=float, default=0.1)
    p.set_defaults(func=cmd_train, seed=0)

    p = sub.add_parser("forecast", help="roll block models forward")
    common(p)
    p.add_argument("--checkpoints", required=True, help="directory of block_*.json")
    p.add_argument("--store", required=True, help="history store CSV")
    p.add_argument("--extent", default="68.0,-21.0,13,27")
    p.add_argument("--mask", help="land-mask text file")
    tdf_opts(p)
    p.add_argument("--years", default="10,20,30,40,50",
                   help="comma-separated forecast offsets")
    p.set_defaults(func=cmd_forecast, seed=0)

    p = sub.add_parser("simulate", help="run the migration automaton")
    common(p)
    p.add_argument("--baseline", required=True, help="baseline field CSV i,j,temp_c")
    p.add_argument("--seeding", required=True, help="seeding CSV i,j,species,cell_count")
    p.add_argument("--profiles", required=True, help="profiles CSV")
    p.add_argument("--years", type=int, default=50)
    p.add_argument("--hop-budget", type=int, default=1)
    p.add_argument("--fields-dir", help="directory of per-year field_%%04d.csv files")
    p.add_argument("--alpha", type=float, default=1.0, help="warming correction factor")
    p.add_argument("--k", type=float, default=0.02, help="warming rate degC/yr")
    p.set_defaults(func=cmd_simulate, seed=0)

    p = sub.add_parser("scenario", help="elapsed-time queries over alpha values")
    common(p)
    p.add_argument("--baseline", required=True)
    p.add_argument("--seeding", required=True)
    p.add_argument("--profiles", required=True)
    p.add_argument("--alpha", help="comma-separated correction factors")
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--predicate",
                   help="e.g. centroid_cross:col=20:species=herring")
    p.add_argument("--field-source", choices=["linear", "lstm"], default=None)
    p.add_argument("--fields-dir", help="per-year fields for field_source=lstm")
    p.add_argument("--hop-budget", type=int, default=None)
    p.set_defaults(func=cmd_scenario, seed=0)

    p = sub.add_parser("econ", help="voyage economics and strategy advice")
    common(p)
    p.add_argument("--params", help="key=value fleet parameter file")
    p.add_argument("--distance", type=float, default=None, help="voyage distance km")
    p.add_argument("--refrigerated", action="store_true")
    p.add_argument("--occupancy", help="occupancy CSV from simulate")
    p.add_argument("--species", default="herring")
    p.add_argument("--home", default="6,2", help="home port grid i,j")
    p.add_argument("--upgrade-km", type=float, default=333.0)
    p.add_argument("--abandon-km", type=float, default=999.0)
    p.set_defaults(func=cmd_econ)

    p = sub.add_parser("render", help="render a field CSV to a pixmap")
    common(p)
    p.add_argument("--field", required=True, help="field CSV i,j,temp_c")
    p.add_argument("--scale", type=int, default=10)
    p.add_argument("--cold", type=float, default=sst_data.RAMP_COLD_C)
    p.add_argument("--warm", type=float, default=sst_data.RAMP_WARM_C)
    p.add_argument("--ascii", action="store_true", help="write P3 instead of P6")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"fishcast {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort guard for exit code 1
        print(f"fishcast {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def run() -> None:
    """Console-script wrapper."""
    sys.exit(main())


if __name__ == "__main__":
    run()
