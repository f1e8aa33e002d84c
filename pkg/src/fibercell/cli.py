"""Command-line entry points.

Commands: ``mesh | limit-spectrum | eps-spectrum | converge | validate``.
All numeric parameters come from the JSON config (``--config``); flags only
pick the command, output directory and thread count.  Exit codes: 0
success, 1 compute failure, 2 usage error.  Failures emit one JSON object
on stderr so scripted callers can parse them.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .config import ConfigError, RunConfig, parse_config
from .eigensolve import dense_eigen_oracle, smallest_eigenpairs
from .limit import (DispersionParams, limit_eigenvalues, mean_u0_closed,
                    mean_u0_series, write_roots_csv, write_roots_json)
from .mesh import generate_mesh, write_mesh
from .spectrum import (convergence_sweep, discrete_mode_merge, kron_3d_oracle,
                       merged_spectrum)

COMMANDS = ("mesh", "limit-spectrum", "eps-spectrum", "converge", "validate")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fibercell",
        description="high-contrast cell spectra: mesh, limit spectrum, "
                    "eps spectra, convergence report, oracle validation")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", default=None, help="JSON config path")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0

    try:
        config = parse_config(args.config) if args.config else RunConfig()
        if args.out:
            config.out_dir = args.out
        os.makedirs(config.out_dir, exist_ok=True)
        return run_command(args.command, config, threads=max(1, args.threads))
    except ConfigError as exc:
        _error_json("config", str(exc))
        return 2
    except Exception as exc:  # compute failure
        _error_json("compute", str(exc))
        return 1


def run_command(name: str, config: RunConfig, threads: int = 1) -> int:
    if name not in COMMANDS:
        raise ConfigError(f"unknown command {name!r}")
    out = config.out_dir
    tag = config.config_hash()
    geometry = config.geometry()

    if name == "mesh":
        mesh = generate_mesh(geometry, config.n_div)
        write_mesh(mesh, os.path.join(out, "mesh.txt"))
        with open(os.path.join(out, "mesh.meta.json"), "w") as fh:
            json.dump({"config_hash": tag, "mesh_hash": mesh.content_hash(),
                       "n_vertices": len(mesh.vertices),
                       "n_triangles": len(mesh.triangles),
                       "fiber_area": mesh.fiber_area()}, fh, indent=2,
                      sort_keys=True)
            fh.write("\n")
        return 0

    if name == "limit-spectrum":
        params = DispersionParams(geometry=geometry, n_terms=config.n_terms)
        roots = limit_eigenvalues(params, config.j_max, rel_tol=config.root_tol)
        write_roots_csv(roots, params, os.path.join(out, "limit_roots.csv"), tag)
        write_roots_json(roots, params, os.path.join(out, "limit_roots.json"), tag)
        return 0

    if name == "eps-spectrum":
        eps = config.eps_list[0]
        mesh = generate_mesh(geometry, config.n_div)
        merged = merged_spectrum(mesh, eps, config.j_max, config.k_total,
                                 L=geometry.height, tol=config.eig_tol,
                                 threads=threads)
        path = os.path.join(out, f"eps_spectrum.csv")
        with open(path, "w") as fh:
            fh.write(f"# config_hash={tag}\n")
            fh.write("k,j,rank,lambda_eps,residual\n")
            for k, entry in enumerate(merged, start=1):
                fh.write(f"{k},{entry.j},{entry.rank},{entry.value:.17g},"
                         f"{entry.pair.residual:.17g}\n")
        return 0

    if name == "converge":
        report = convergence_sweep(geometry, config.eps_list, config.n_div,
                                   config.j_max, config.k_total,
                                   n_terms=config.n_terms,
                                   eig_tol=config.eig_tol, threads=threads)
        report.write_csv(os.path.join(out, "convergence.csv"), tag)
        report.write_json(os.path.join(out, "convergence.json"), tag)
        return 0

    # validate: oracle equivalences; nonzero exit on any failure
    failures = _run_validation(config, geometry, threads)
    with open(os.path.join(out, "validate.json"), "w") as fh:
        json.dump({"config_hash": tag, "failures": failures,
                   "passed": not failures}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if failures:
        raise RuntimeError("validation failed: " + "; ".join(failures))
    return 0


def _run_validation(config: RunConfig, geometry, threads: int) -> list[str]:
    failures = []
    params = DispersionParams(geometry=geometry, n_terms=config.n_terms)

    # series vs closed form of the disk mean
    grid = np.linspace(0.01 * params.mu1, 0.99 * params.mu1, 100)
    for lam in grid:
        series, tail = mean_u0_series(float(lam), params)
        closed = mean_u0_closed(float(lam), geometry.radius)
        if abs(series - closed) > 1e-8 + tail:
            failures.append(f"series/closed mismatch at lambda={lam:.6g}")
            break

    # Kronecker 3D oracle vs discrete mode merge on a coarse mesh
    coarse = generate_mesh(geometry, 12)
    for eps in (1.0, 0.2):
        v3 = kron_3d_oracle(coarse, 8, eps, geometry.height, 8)
        vm = discrete_mode_merge(coarse, 8, eps, geometry.height, 8)
        rel = np.max(np.abs(v3 - vm) / np.abs(vm))
        if rel > 1e-9:
            failures.append(f"kron/merge mismatch {rel:.2e} at eps={eps}")

    # Lanczos vs dense on a coarse mode pencil
    from .assembly import assemble_mode_pencil
    pencil = assemble_mode_pencil(coarse, 0.3, (np.pi / geometry.height) ** 2)
    if pencil.K.shape[0] <= 2000:
        dense_vals, _ = dense_eigen_oracle(pencil.K, pencil.M)
        lanczos = smallest_eigenpairs(pencil.K, pencil.M, 6, tol=config.eig_tol)
        for pair, ref in zip(lanczos, dense_vals[:6]):
            if abs(pair.value - ref) > 1e-9 * max(1.0, abs(ref)):
                failures.append(
                    f"lanczos/dense mismatch {pair.value!r} vs {ref!r}")
                break
    return failures


def _error_json(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
