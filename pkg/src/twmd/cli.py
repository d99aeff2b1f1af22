"""Command-line pipeline: simulate, process, benchmark, filter-design, inspect.

Every command is driven by a JSON PipelineConfig plus a few overriding
flags, and is idempotent: identical config and seed produce byte-identical
artifacts regardless of worker count. Exit codes: 0 success, 1 processing
failure, 2 input/config error.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from twmd import io as tio
from twmd._backend import BACKEND
from twmd.classify import evaluate, quantize_db
from twmd.clutter import declutter, design_highpass
from twmd.config import TFR_METHODS, PipelineConfig
from twmd.motions import make_motion_scene
from twmd.ranging import range_compress, range_gate
from twmd.sfcw import synthesize_echo
from twmd.tfr import (
    Spectrogram,
    build_cube,
    cratfr,
    ra_stft,
    rmax_tfr_stream,
    stft_spectrogram,
    tmax_rdr_stream,
)

_SEED_MASK = (1 << 64) - 1


def _sample_seeds(master_seed: int, count: int):
    words = np.random.SeedSequence(master_seed & _SEED_MASK).generate_state(count, dtype=np.uint64)
    return [int(w) for w in words]


def cmd_simulate(config: PipelineConfig, out_dir, workers: int = 1):
    """Write one echo file per (class, sample) plus manifest.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = config.radar.params()
    ds = config.dataset
    wall = ds.wall.spec() if ds.wall is not None else None
    total = len(ds.classes) * ds.samples_per_class
    seeds = _sample_seeds(config.seed, total)

    jobs = []
    for ci, class_id in enumerate(ds.classes):
        for si in range(ds.samples_per_class):
            seed = seeds[ci * ds.samples_per_class + si]
            path = out / f"class{class_id:02d}_{si:03d}.rmx"
            jobs.append((class_id, si, seed, path))

    def run(job):
        class_id, _, seed, path = job
        scene = make_motion_scene(
            class_id, seed, params, duration_s=ds.duration_s, wall=wall, noise_snr_db=ds.noise_snr_db
        )
        tio.save_echo(path, synthesize_echo(scene, params))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, jobs))
    else:
        for job in jobs:
            run(job)

    entries = [
        {"path": job[3].name, "class_label": job[0], "seed": job[2]} for job in jobs
    ]
    tio.save_manifest(out / "manifest.json", entries)
    config.save(out / "config.json")
    return entries


def _declutter_and_gate(rm, config: PipelineConfig):
    cl = config.clutter
    hpf = cl.hpf(rm.prf) if cl.method == "hpf" else None
    rm = declutter(rm, cl.method, n_remove=cl.svd_remove, hpf=hpf)
    gate = config.tfr.range_gate_bins
    if gate is not None:
        rm = range_gate(rm, gate[0], gate[1])
    return rm


def compute_tf_map(rm, method: str, config: PipelineConfig):
    """Apply one TFR method to a (decluttered, gated) range map."""
    stft_cfg = config.stft.config()
    if method == "ra-stft":
        return ra_stft(rm, stft_cfg)
    if method == "cratfr":
        return cratfr(rm, stft_cfg, energy_floor=config.tfr.energy_floor)
    if method == "rmax":
        return rmax_tfr_stream(rm, stft_cfg)
    if method == "tmax":
        return tmax_rdr_stream(rm, stft_cfg)
    if method == "narrowband":
        # Narrow-band emulation: keep only the strongest range bin.
        energies = np.sum(rm.data.real**2 + rm.data.imag**2, axis=1)
        return stft_spectrogram(rm.data[int(np.argmax(energies))], stft_cfg, rm.prf)
    raise ValueError(f"unknown TFR method {method!r}")


def _process_one(echo_path: Path, out_dir: Path, config: PipelineConfig, method: str):
    echo = tio.load_echo(echo_path)
    rm = range_compress(echo)
    rm = _declutter_and_gate(rm, config)
    tf = compute_tf_map(rm, method, config)

    stem = echo_path.stem + f"_{method}"
    data = tf.data if isinstance(tf, Spectrogram) else tf
    tio.save_matrix_csv(out_dir / f"{stem}.csv", data)
    img = quantize_db(
        data,
        dyn_range_db=config.classifier.dyn_range_db,
        out_h=config.classifier.image_height,
        out_w=config.classifier.image_width,
    )
    tio.save_pgm(out_dir / f"{stem}.pgm", img)

    meta = {
        "input": echo_path.name,
        "method": method,
        "clutter": config.clutter.to_dict(),
        "stft": config.stft.to_dict(),
        "tfr": config.tfr.to_dict(),
        "transient_cols": config.clutter.hpf_order // 2 if config.clutter.method == "hpf" else 0,
    }
    with open(out_dir / f"{stem}.json", "w") as f:
        json.dump(meta, f, indent=1)
        f.write("\n")
    return stem


def cmd_process(config: PipelineConfig, inputs, out_dir, workers: int = 1, save_cube: bool = False):
    """Produce one spectrogram (CSV + PGM + metadata) per input echo file.

    All inputs are checked before any output is written; per-file failures
    are collected and reported together.
    """
    paths = []
    for item in inputs:
        p = Path(item)
        if p.name == "manifest.json" or p.suffix == ".json":
            for entry in tio.load_manifest(p):
                paths.append(p.parent / entry["path"])
        else:
            paths.append(p)
    missing = [str(p) for p in paths if not p.is_file()]
    if missing:
        raise FileNotFoundError(f"missing input files: {missing}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    method = config.tfr.method

    failures = []

    def run(p):
        try:
            _process_one(p, out, config, method)
            if save_cube:
                echo = tio.load_echo(p)
                rm = _declutter_and_gate(range_compress(echo), config)
                tio.save_cube(out / f"{p.stem}_{method}.rdc", build_cube(rm, config.stft.config()))
        except Exception as exc:  # collected per file, reported at the end
            failures.append((str(p), str(exc)))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, paths))
    else:
        for p in paths:
            run(p)

    return {"n_inputs": len(paths), "failures": failures}


def cmd_benchmark(config: PipelineConfig, dataset_dir, narrowband: bool = False, methods=None):
    """Evaluate classification accuracy per TFR method on one dataset.

    Every sample is decluttered once; each method sees identical input.
    Returns {"methods": {name: eval-report-dict}, ...} and the per-method
    grayscale images stay in memory only.
    """
    dataset_dir = Path(dataset_dir)
    manifest = tio.load_manifest(dataset_dir / "manifest.json")
    method_list = list(methods) if methods is not None else ["ra-stft", "cratfr", "rmax"]
    if narrowband and "narrowband" not in method_list:
        method_list = ["narrowband"] + method_list

    datasets = {m: [] for m in method_list}
    for entry in manifest:
        echo = tio.load_echo(dataset_dir / entry["path"])
        rm = _declutter_and_gate(range_compress(echo), config)
        for m in method_list:
            tf = compute_tf_map(rm, m, config)
            data = tf.data if isinstance(tf, Spectrogram) else tf
            img = quantize_db(
                data,
                dyn_range_db=config.classifier.dyn_range_db,
                out_h=config.classifier.image_height,
                out_w=config.classifier.image_width,
            )
            datasets[m].append((img, entry["class_label"]))

    cl = config.classifier
    reports = {}
    for m in method_list:
        report = evaluate(
            datasets[m],
            split=cl.split,
            n_trials=cl.n_trials,
            d=cl.components,
            seed=config.seed,
            k=cl.k,
        )
        reports[m] = report.to_json_dict()

    return {
        "methods": reports,
        "narrowband_emulation": "strongest single range bin after decluttering" if narrowband else None,
        "config": config.to_json_dict(),
    }


def _print_benchmark_table(result):
    print(f"{'method':<12} {'avg accuracy':>12}")
    for m, rep in result["methods"].items():
        print(f"{m:<12} {rep['average_accuracy']:>12.4f}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="twmd", description="Through-wall micro-Doppler pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a synthetic echo dataset")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", help="output directory (default: config out_dir)")
    p_sim.add_argument("--workers", type=int, default=1)

    p_proc = sub.add_parser("process", help="echoes -> decluttered spectrograms")
    p_proc.add_argument("--config", required=True)
    p_proc.add_argument("--input", required=True, nargs="+", help="echo files or a manifest.json")
    p_proc.add_argument("--out", help="output directory (default: config out_dir)")
    p_proc.add_argument("--method", choices=TFR_METHODS)
    p_proc.add_argument("--clutter", choices=("none", "mean", "svd", "hpf"))
    p_proc.add_argument("--svd-remove", type=int)
    p_proc.add_argument("--hpf-order", type=int)
    p_proc.add_argument("--hpf-cutoff", type=float)
    p_proc.add_argument("--range-gate", type=int, nargs=2, metavar=("L_MIN", "L_MAX"))
    p_proc.add_argument("--save-cube", action="store_true")
    p_proc.add_argument("--workers", type=int, default=1)

    p_bench = sub.add_parser("benchmark", help="compare TFR methods by classification accuracy")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--dataset", required=True, help="directory containing manifest.json")
    p_bench.add_argument("--out", help="report JSON path")
    p_bench.add_argument("--narrowband", action="store_true")

    p_filt = sub.add_parser("filter-design", help="dump high-pass filter taps")
    p_filt.add_argument("--order", type=int, default=112)
    p_filt.add_argument("--cutoff", type=float, default=3.0)
    p_filt.add_argument("--fs", type=float, default=113.0)
    p_filt.add_argument("--out", required=True)

    p_insp = sub.add_parser("inspect", help="print file headers")
    p_insp.add_argument("files", nargs="+")

    args = parser.parse_args(argv)

    try:
        if args.command == "simulate":
            config = PipelineConfig.from_file(args.config)
            out = _resolve_out(args.out, config)
            entries = cmd_simulate(config, out, workers=args.workers)
            print(f"wrote {len(entries)} echo files to {out} (kernel backend: {BACKEND})")
            return 0

        if args.command == "process":
            config = PipelineConfig.from_file(args.config)
            config = _apply_process_overrides(config, args)
            out = _resolve_out(args.out, config)
            result = cmd_process(config, args.input, out, workers=args.workers, save_cube=args.save_cube)
            for path, msg in result["failures"]:
                print(f"error processing {path}: {msg}", file=sys.stderr)
            if result["failures"]:
                return 1
            print(f"processed {result['n_inputs']} files into {out}")
            return 0

        if args.command == "benchmark":
            config = PipelineConfig.from_file(args.config)
            result = cmd_benchmark(config, args.dataset, narrowband=args.narrowband)
            _print_benchmark_table(result)
            if args.out:
                out = Path(args.out)
                with open(out, "w") as f:
                    json.dump(result, f, indent=1)
                    f.write("\n")
                for m, rep in result["methods"].items():
                    tio.save_matrix_csv(out.with_name(f"{out.stem}_{m}_confusion.csv"), np.asarray(rep["confusion"]))
            return 0

        if args.command == "filter-design":
            coeffs = design_highpass(order=args.order, cutoff_hz=args.cutoff, sample_rate_hz=args.fs)
            tio.save_taps_csv(args.out, coeffs)
            dc = 20 * np.log10(max(abs(sum(coeffs.taps)), 1e-300))
            print(f"{coeffs.taps.size} taps -> {args.out} (DC gain {dc:.1f} dB)")
            return 0

        if args.command == "inspect":
            for path in args.files:
                print(f"{path}: {json.dumps(tio.inspect_file(path))}")
            return 0

    except (FileNotFoundError, tio.FormatError, ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    return 2


def _resolve_out(flag_value, config: PipelineConfig) -> str:
    out = flag_value or config.out_dir
    if not out:
        raise ValueError("no output directory: pass --out or set out_dir in the config")
    return out


def _apply_process_overrides(config: PipelineConfig, args) -> PipelineConfig:
    d = config.to_json_dict()
    if args.method:
        d["tfr"]["method"] = args.method
    if args.clutter:
        d["clutter"]["method"] = args.clutter
    if args.svd_remove is not None:
        d["clutter"]["svd_remove"] = args.svd_remove
    if args.hpf_order is not None:
        d["clutter"]["hpf_order"] = args.hpf_order
    if args.hpf_cutoff is not None:
        d["clutter"]["hpf_cutoff_hz"] = args.hpf_cutoff
    if args.range_gate is not None:
        d["tfr"]["range_gate_bins"] = list(args.range_gate)
    return PipelineConfig.from_json_dict(d)


if __name__ == "__main__":
    sys.exit(main())
