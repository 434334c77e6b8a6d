"""Command-line entry point: ``pairlat <subcommand> [flags]``.

Every subcommand resolves its settings from built-in defaults, an optional
TOML file (``--config``; top-level keys plus a table named after the
subcommand) and finally the command-line flags. Settings are validated before
any computation; results are rendered to text in memory and written only
after everything succeeded, each file atomically.

Exit codes: 0 success, 2 configuration error, 3 solver error.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io, observables as obs, ssh, stark
from .errors import ConvergenceError, DetectionError, FitError, InvalidParameterError
from .lattice import ModelParams, hardcore_spectrum, pair_basis

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


class ConfigError(Exception):
    pass


def parse_complex(text):
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _tag(x):
    return format(float(x), "g")


COMMON = {
    "out": ".", "svg": False, "n": 101, "t1": 1.0, "t2": None, "z": None,
    "cells": 20, "sigma": obs.DOS_SIGMA, "cluster_tol": obs.CLUSTER_TOL,
    "ipr_threshold": obs.IPR_THRESHOLD,
}

DEFAULTS = {
    "spectrum": {"t2": [0.4], "select_energy": None, "dump_state": False, "window": 1e-3},
    "dos-map": {"t2_min": 0.0, "t2_max": 1.0, "t2_points": 11, "sections": [0.0, 0.4, 0.8]},
    "fig2c": {"ratio_min": 0.05, "ratio_max": 2.0, "ratio_points": 40, "z_min": 0.05,
              "z_max": 2.0, "z_points": 40, "z_modulus": None, "mode": "cell",
              "kappa_points": 1024},
    "fig4": {"t2_min": 0.0, "t2_max": 1.0, "t2_points": 11},
    "fig5": {"t2": [0.4, 0.8]},
    "fig6": {"t2": [0.8], "energy": -0.259, "com": [22, 26], "window": 1e-3},
    "winding": {"t2": [0.8], "z": [-0.85], "kappa_points": 1024},
    "stark": {"t2": [0.4], "n0": [20, 30, 60], "window": stark.STARK_WINDOW,
              "select": "overlap"},
    "parabolas": {"t2": [0.02, 0.05, 0.08, 0.1], "cluster_tol": 1e-4},
}

# key -> (type, is_list)
TYPES = {
    "out": (str, False), "svg": (bool, False), "n": (int, False), "t1": (float, False),
    "t2": (float, True), "z": (parse_complex, True), "cells": (int, False),
    "sigma": (float, False), "cluster_tol": (float, False), "ipr_threshold": (float, False),
    "select_energy": (float, False), "dump_state": (bool, False), "window": (float, False),
    "t2_min": (float, False), "t2_max": (float, False), "t2_points": (int, False),
    "sections": (float, True), "ratio_min": (float, False), "ratio_max": (float, False),
    "ratio_points": (int, False), "z_min": (float, False), "z_max": (float, False),
    "z_points": (int, False), "z_modulus": (float, False), "mode": (str, False),
    "kappa_points": (int, False), "energy": (float, False), "com": (int, True),
    "n0": (int, True), "select": (str, False),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    a = common.add_argument
    a("--config", help="TOML file with default settings; flags take precedence")
    a("--out", help="output directory (default: current directory)")
    a("--svg", action="store_true", default=argparse.SUPPRESS, help="also draw SVG figures")
    a("--n", type=int, help="number of lattice sites N")
    a("--t1", type=float, help="hopping of particle 1 (energy unit)")
    a("--t2", type=float, nargs="+", help="hopping of particle 2, one or more values")
    a("--z", type=parse_complex, nargs="+", help="centre-of-mass parameter(s), e.g. -0.85 or 0.3+0.4j")
    a("--cells", type=int, help="unit cells of the effective SSH chain")
    a("--sigma", type=float, help="Gaussian DOS broadening")
    a("--cluster-tol", type=float, help="gap tolerance for degeneracy clusters")
    a("--ipr-threshold", type=float, help="IPR cut for the filtered DOS")
    for act in common._actions:
        if act.default is None:
            act.default = argparse.SUPPRESS

    parser = argparse.ArgumentParser(prog="pairlat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text,
                              argument_default=argparse.SUPPRESS)

    p = add("spectrum", "full spectrum with IPR")
    p.add_argument("--select-energy", type=float, help="pick the most localized state near E")
    p.add_argument("--dump-state", action="store_true", help="write the selected amplitude grid")
    p.add_argument("--window", type=float, help="energy window for --select-energy")

    for name, text in (("dos-map", "DOS versus t2/t1"), ("fig4", "level-spacing map versus t2/t1")):
        p = add(name, text)
        p.add_argument("--t2-min", type=float, help="first t2/t1 row")
        p.add_argument("--t2-max", type=float, help="last t2/t1 row")
        p.add_argument("--t2-points", type=int, help="number of t2/t1 rows")
        if name == "dos-map":
            p.add_argument("--sections", type=float, nargs="+", help="t2/t1 values for DOS curves")

    p = add("fig2c", "localization parameter of the SSH chain over (z, t2/t1)")
    for flag, typ in (("--ratio-min", float), ("--ratio-max", float), ("--ratio-points", int),
                      ("--z-min", float), ("--z-max", float), ("--z-points", int),
                      ("--kappa-points", int)):
        p.add_argument(flag, type=typ)
    p.add_argument("--z-modulus", type=float, help="sweep complex z = r exp(iK), K in [-pi, pi]")
    p.add_argument("--mode", choices=["cell", "sublattice"])

    add("fig5", "energy versus IPR and the IPR-filtered DOS")

    p = add("fig6", "relative-motion cuts of the bound state and the SSH comparison")
    p.add_argument("--energy", type=float, help="target energy of the bound state")
    p.add_argument("--com", type=int, nargs=2, metavar=("FIRST", "LAST"),
                   help="centre-of-mass labels of the cuts, inclusive")
    p.add_argument("--window", type=float, help="energy window around --energy")

    p = add("winding", "winding number and skin ratio of the SSH chain")
    p.add_argument("--kappa-points", type=int, help="Brillouin-zone samples (>= 256)")

    p = add("stark", "Stark-ladder level versus column label")
    p.add_argument("--n0", type=int, nargs="+", help="resonant column labels")
    p.add_argument("--window", type=int, help="half-width of the Stark matrix")
    p.add_argument("--select", choices=["overlap", "centre"],
                   help="pick the level by Bessel-state overlap or by weight at the centre")

    add("parabolas", "second-order coefficients of the flat bands")
    return parser


def _coerce(key, value, source):
    if key not in TYPES:
        raise ConfigError(f"unknown setting {key!r} in {source}")
    typ, is_list = TYPES[key]
    try:
        if is_list:
            vals = value if isinstance(value, (list, tuple)) else [value]
            return [typ(v) for v in vals]
        if typ is bool and not isinstance(value, bool):
            raise TypeError
        if typ in (int, float) and isinstance(value, bool):
            raise TypeError
        if typ is int and isinstance(value, float) and value != int(value):
            raise TypeError
        return typ(value)
    except (TypeError, ValueError, argparse.ArgumentTypeError):
        raise ConfigError(f"bad value {value!r} for {key!r} in {source}")


def resolve(args):
    """Merge defaults, TOML and flags into a flat settings dict."""
    cmd = args.command
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[cmd])
    allowed = set(COMMON) | set(DEFAULTS[cmd])
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        layers = [{k: v for k, v in data.items() if not isinstance(v, dict)}]
        if isinstance(data.get(cmd), dict):
            layers.append(data[cmd])
        for layer in layers:
            for k, v in layer.items():
                k = k.replace("-", "_")
                if k not in allowed:
                    raise ConfigError(f"setting {k!r} does not apply to {cmd}")
                cfg[k] = _coerce(k, v, path)
    for k, v in vars(args).items():
        if k not in ("command", "config"):
            cfg[k] = v
    if cmd == "fig6" and isinstance(cfg["com"], (list, tuple)) and len(cfg["com"]) != 2:
        raise ConfigError("com needs exactly two labels (first, last)")
    return cfg


def workers():
    raw = os.environ.get("PAIRLAT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"PAIRLAT_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise ConfigError(f"PAIRLAT_THREADS must be a positive integer, got {raw!r}")
    return n


def pmap(func, items, n_workers):
    if n_workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(n_workers) as ex:
            return list(ex.map(func, items))
    return [func(x) for x in items]


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

def _positive(cfg, *keys):
    for k in keys:
        if not cfg[k] > 0:
            raise ConfigError(f"{k} must be positive, got {cfg[k]}")


def _single(cfg, key):
    vals = cfg[key]
    if vals is None or len(vals) != 1:
        raise ConfigError(f"{key} takes exactly one value here")
    return vals[0]


def _grid(lo, hi, count, name):
    if count < 1:
        raise ConfigError(f"{name} grid needs at least one point")
    if count > 1 and not hi > lo:
        raise ConfigError(f"{name} grid needs max > min")
    return np.linspace(lo, hi, count) if count > 1 else np.array([lo])


def _t2_rows(cfg):
    if cfg["t2"] is not None:
        return np.array(cfg["t2"], dtype=float) / cfg["t1"]
    return _grid(cfg["t2_min"], cfg["t2_max"], cfg["t2_points"], "t2")


def validate(cmd, cfg):
    """Raise ConfigError for any setting that cannot run; no computation."""
    _positive(cfg, "sigma", "cluster_tol", "ipr_threshold", "cells")
    out = cfg["out"]
    if os.path.exists(out) and not os.path.isdir(out):
        raise ConfigError(f"output path {out} is not a directory")
    parent = out if os.path.isdir(out) else os.path.dirname(os.path.abspath(out))
    if not os.access(parent, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    try:
        t2s = cfg["t2"] if cfg["t2"] is not None else [0.0]
        for t2 in t2s:
            ModelParams(cfg["n"], cfg["t1"], t2)
        if cfg["z"] is not None:
            for z in cfg["z"]:
                ssh.SSHParams(cfg["t1"], 0.0, z, cfg["cells"])
    except InvalidParameterError as exc:
        raise ConfigError(str(exc))
    if cmd == "spectrum":
        _single(cfg, "t2")
        _positive(cfg, "window")
        if cfg["dump_state"] and cfg["select_energy"] is None:
            raise ConfigError("--dump-state needs --select-energy")
    elif cmd in ("dos-map", "fig4"):
        _t2_rows(cfg)
    elif cmd == "fig2c":
        _grid(cfg["ratio_min"], cfg["ratio_max"], cfg["ratio_points"], "ratio")
        if cfg["z"] is None:
            if cfg["z_modulus"] is None:
                if not 0 < cfg["z_min"] <= cfg["z_max"]:
                    raise ConfigError("real z grid needs 0 < z_min <= z_max")
                _grid(cfg["z_min"], cfg["z_max"], max(cfg["z_points"] // 2, 1), "z")
            else:
                _positive(cfg, "z_modulus")
                _grid(-np.pi, np.pi, cfg["z_points"], "K")
        if cfg["kappa_points"] < 256:
            raise ConfigError("kappa_points must be at least 256")
    elif cmd == "fig6":
        _single(cfg, "t2")
        first, last = cfg["com"]
        if not 1 <= first < last <= cfg["n"] - 1:
            raise ConfigError(f"com labels must satisfy 1 <= first < last <= {cfg['n'] - 1}")
        _positive(cfg, "window")
    elif cmd == "winding":
        _single(cfg, "t2")
        if cfg["z"] is None:
            raise ConfigError("winding needs at least one z")
        if cfg["kappa_points"] < 256:
            raise ConfigError("kappa_points must be at least 256")
    elif cmd == "stark":
        _single(cfg, "t2")
        if any(n0 < 3 for n0 in cfg["n0"]):
            raise ConfigError("n0 values must be >= 3")
        if cfg["window"] < 10 or cfg["window"] != int(cfg["window"]):
            raise ConfigError("window must be an integer >= 10")
    elif cmd == "parabolas":
        if len(set(t for t in cfg["t2"] if t != 0)) < 4:
            raise ConfigError("parabolas needs at least four nonzero t2 values")


# --------------------------------------------------------------------------
# Subcommands. Each returns a list of (filename, text, svg) where svg is a
# function of the CSV text or None.
# --------------------------------------------------------------------------

def _model_meta(cfg, t2):
    return {"n_sites": cfg["n"], "t1": cfg["t1"], "t2": t2, "basis_size": cfg["n"] * (cfg["n"] - 1) // 2}


def _xy(x, y, title, style="line", group=None):
    return lambda text: io.svg_xy(text, x, y, title, style, group)


def cmd_spectrum(cfg, nw):
    t2 = cfg["t2"][0]
    params = ModelParams(cfg["n"], cfg["t1"], t2)
    spec = hardcore_spectrum(params, vectors=True)
    iprs = obs.ipr_all(spec.eigenvectors)
    rows = [(i, e, p) for i, (e, p) in enumerate(zip(spec.eigenvalues, iprs))]
    meta = _model_meta(cfg, t2)
    meta.update(residual=spec.residual,
                chiral_defect=obs.spectral_symmetry_defect(spec.eigenvalues))
    files = [("spectrum.csv", io.csv_text(["index", "energy", "ipr"], rows),
              _xy("energy", "ipr", "IPR versus energy", "scatter"))]
    if cfg["select_energy"] is not None:
        basis = pair_basis(cfg["n"])
        energy, psi = obs.most_localized_state(spec, basis, cfg["select_energy"], cfg["window"])
        amp = _fix_sign(psi.amplitudes)
        meta["selected"] = {"target": cfg["select_energy"], "energy": energy,
                            "ipr": obs.ipr(amp),
                            "mean_com": float(np.sum(amp ** 2 * basis.pairs.sum(axis=1)) / 2)}
        if cfg["dump_state"]:
            rows = [(n, m, a) for (n, m), a in zip(basis.pairs, amp)]
            files.append(("state.csv", io.csv_text(["n", "m", "amplitude"], rows), None))
    files.append(("spectrum.json", io.json_text(meta), None))
    return files


def _fix_sign(v):
    """Deterministic overall sign: the largest component is positive."""
    k = int(np.argmax(np.abs(v)))
    return v if v[k] >= 0 else -v


def _eigvals(cfg, t2):
    return hardcore_spectrum(ModelParams(cfg["n"], cfg["t1"], t2), vectors=False).eigenvalues


def cmd_dos_map(cfg, nw):
    rows = [float(t) for t in _t2_rows(cfg)]
    sections = [float(t) for t in cfg["sections"]]
    wanted = sorted(set(rows) | set(sections))
    spectra = dict(zip(wanted, pmap(lambda t: _eigvals(cfg, t * cfg["t1"]), wanted, nw)))
    sigma = cfg["sigma"]
    emax = 2.0 * (abs(cfg["t1"]) + max(abs(t) for t in wanted) * abs(cfg["t1"]))
    grid = obs.default_grid(np.array([-emax, emax]), sigma)
    curves = {t: obs.dos(spectra[t], grid, sigma) for t in wanted}
    x = curves[wanted[0]].energies
    header = ["t2/t1"] + [io.fmt(e) for e in x]
    text = io.csv_text(header, [[t] + list(curves[t].density) for t in rows])
    files = [("dos_map.csv", text,
              lambda s: io.svg_matrix(s, "density of states", "energy", "t2/t1"))]
    peaks = {}
    for t in sections:
        c = curves[t]
        name = f"dos_t2_{_tag(t)}.csv"
        files.append((name, io.csv_text(["energy", "density"], zip(c.energies, c.density)),
                      _xy("energy", "density", f"DOS at t2/t1 = {_tag(t)}")))
        peaks[_tag(t)] = [float(c.energies[i]) for i in c.maxima()]
    meta = {"n_sites": cfg["n"], "t1": cfg["t1"], "sigma": sigma, "grid": list(grid),
            "rows": rows, "sections": sections, "section_maxima": peaks,
            "chiral_defect": max(obs.spectral_symmetry_defect(s) for s in spectra.values())}
    files.append(("dos_map.json", io.json_text(meta), None))
    return files


def cmd_fig4(cfg, nw):
    rows = [float(t) for t in _t2_rows(cfg)]
    spectra = pmap(lambda t: _eigvals(cfg, t * cfg["t1"]), rows, nw)
    out = []
    for t, e in zip(rows, spectra):
        w = obs.level_spacing_weight(e)
        lw = np.log(w)
        span = lw.max() - lw.min()
        disp = (lw - lw.min()) / span if span > 0 else np.zeros_like(lw)
        out.extend((t, a, b, c) for a, b, c in zip(e, w, disp))
    files = [("fig4.csv", io.csv_text(["t2/t1", "energy", "weight", "display"], out),
              _xy("t2/t1", "energy", "levels versus t2/t1", "scatter"))]
    arrows = [{"k_over_pi": str(k), "energy": 2 * cfg["t1"] * np.cos(np.pi * float(k))}
              for k in stark.PARABOLA_K]
    meta = {"n_sites": cfg["n"], "t1": cfg["t1"], "rows": rows, "floor": obs.SPACING_FLOOR,
            "display": "log weight rescaled to [0, 1] per t2/t1 value", "arrows": arrows}
    files.append(("fig4.json", io.json_text(meta), None))
    return files


def cmd_fig5(cfg, nw):
    files = []
    meta = {"n_sites": cfg["n"], "t1": cfg["t1"], "sigma": cfg["sigma"],
            "ipr_threshold": cfg["ipr_threshold"], "panels": {}}
    for t in cfg["t2"]:
        spec = hardcore_spectrum(ModelParams(cfg["n"], cfg["t1"], t), vectors=True)
        iprs = obs.ipr_all(spec.eigenvectors)
        tag = _tag(t)
        files.append((f"fig5_t2_{tag}_scatter.csv",
                      io.csv_text(["energy", "ipr"], zip(spec.eigenvalues, iprs)),
                      _xy("energy", "ipr", f"IPR versus energy, t2/t1 = {tag}", "scatter")))
        c = obs.filtered_dos(spec.eigenvalues, iprs, cfg["ipr_threshold"], sigma=cfg["sigma"])
        files.append((f"fig5_t2_{tag}_filtered_dos.csv",
                      io.csv_text(["energy", "density"], zip(c.energies, c.density)),
                      _xy("energy", "density", f"DOS of states with IPR > {cfg['ipr_threshold']:g}")))
        meta["panels"][tag] = {"residual": spec.residual, "states_above_threshold": c.n_states,
                               "max_ipr": float(iprs.max())}
    files.append(("fig5.json", io.json_text(meta), None))
    return files


def cmd_fig6(cfg, nw):
    t1, t2 = cfg["t1"], cfg["t2"][0]
    params = ModelParams(cfg["n"], t1, t2)
    spec = hardcore_spectrum(params, vectors=True)
    basis = pair_basis(cfg["n"])
    energy, psi = obs.most_localized_state(spec, basis, cfg["energy"], cfg["window"])
    first, last = cfg["com"]
    coms = list(range(first, last + 1))
    cuts = obs.relative_cuts(psi, coms)
    z = obs.fit_z(psi, coms, separations=range(1, 5))
    p = ssh.SSHParams(t1, t2, z, cfg["cells"])
    ssh_energy, prof = ssh.nearest_eigenpair(p, energy)
    rows = [(c.com, l, a) for c in cuts for l, a in zip(c.separations, c.amplitudes)]
    files = [("fig6_cuts.csv", io.csv_text(["com", "separation", "amplitude"], rows),
              _xy("separation", "amplitude", "relative-motion cuts", group="com")),
             ("fig6_ssh_profile.csv",
              io.csv_text(["site", "amplitude"], enumerate(prof, 1)),
              _xy("site", "amplitude", "SSH eigenvector"))]
    lmax = 7
    meta = {"n_sites": cfg["n"], "t1": t1, "t2": t2, "target": cfg["energy"], "energy": energy,
            "ipr": obs.ipr(psi), "z_fit": z, "skin_ratio": ssh.skin_ratio(p),
            "ssh_cells": cfg["cells"], "ssh_energy": ssh_energy,
            "cut_slopes": [c.log_slope(lmax) for c in cuts],
            "ssh_slope": obs.log_slope(prof[:lmax])}
    files.append(("fig6.json", io.json_text(meta), None))
    return files


def cmd_fig2c(cfg, nw):
    t1 = cfg["t1"]
    if cfg["t2"] is not None:
        ratios = np.array(cfg["t2"], dtype=float) / t1
    else:
        ratios = _grid(cfg["ratio_min"], cfg["ratio_max"], cfg["ratio_points"], "ratio")
    label = "z"
    if cfg["z"] is not None:
        zs = np.array(cfg["z"])
        if np.all(zs.imag == 0):
            zs = zs.real
    elif cfg["z_modulus"] is not None:
        label = "K"
        ks = _grid(-np.pi, np.pi, cfg["z_points"], "K")
        zs = cfg["z_modulus"] * np.exp(1j * ks)
    else:
        zs = ssh.default_z_grid(cfg["z_points"], cfg["z_min"], cfg["z_max"])
    m = ssh.localization_map(ratios, zs, cfg["cells"], t1, cfg["mode"], cfg["kappa_points"], nw)
    first = ks if label == "K" else zs
    header = [label] + [io.fmt(r) for r in ratios]
    files = [("fig2c.csv", io.csv_text(header, [[a] + list(r) for a, r in zip(first, m.values)]),
              lambda s: io.svg_matrix(s, "localization parameter", "t2/t1", label)),
             ("fig2c_gap_closed.csv",
              io.csv_text(header, [[a] + [int(b) for b in r] for a, r in zip(first, m.gap_closed)]),
              None)]
    meta = {"t1": t1, "cells": cfg["cells"], "mode": cfg["mode"], "rows": label,
            "columns": "t2/t1", "z_modulus": cfg["z_modulus"],
            "gap_closed_points": int(m.gap_closed.sum())}
    files.append(("fig2c.json", io.json_text(meta), None))
    return files


def cmd_winding(cfg, nw):
    t1, t2 = cfg["t1"], cfg["t2"][0]
    scan = []
    for z in cfg["z"]:
        z = z.real if z.imag == 0 else z
        p = ssh.SSHParams(t1, t2, z, cfg["cells"])
        w = ssh.winding_number(p, cfg["kappa_points"])
        try:
            ratio = ssh.skin_ratio(p)
        except InvalidParameterError:
            ratio = None
        scan.append({"z": z, "winding": w.winding, "gap_closed": w.gap_closed,
                     "min_abs_h": w.min_abs, "skin_ratio": ratio,
                     "abs_skin_ratio": None if ratio is None else abs(ratio)})
    meta = {"t1": t1, "t2": t2, "kappa_points": cfg["kappa_points"], "scan": scan}
    return [("winding.json", io.json_text(meta), None)]


def cmd_stark(cfg, nw):
    t1, t2 = cfg["t1"], cfg["t2"][0]
    rows = []
    for n0 in cfg["n0"]:
        p = stark.stark_params(n0, t1, t2)
        lev = stark.stark_target_eigenvalue(p, int(cfg["window"]), cfg["select"])
        rows.append((n0, lev.energy, 2 * p.alpha * p.tau ** 2 / p.F ** 2, lev.overlap, p.alpha))
    vals = [r[1] for r in rows]
    fb = stark.flatband_energy(t1, t2)
    meta = {"t1": t1, "t2": t2, "window": int(cfg["window"]), "select": cfg["select"],
            "epsilon": fb.epsilon, "flatband_energy": fb.energy, "rounded": fb.rounded,
            "spread": max(vals) - min(vals),
            "spread_bound": 5 * min(abs(r[4]) for r in rows)}
    return [("stark.csv", io.csv_text(["n0", "eigenvalue", "predicted", "overlap", "alpha"], rows),
             _xy("n0", "eigenvalue", "ladder level versus n0")),
            ("stark.json", io.json_text(meta), None)]


def cmd_parabolas(cfg, nw):
    t1 = cfg["t1"]
    t2s = sorted(set(float(t) for t in cfg["t2"] if t != 0))
    spectra = dict(zip(t2s, pmap(lambda t: _eigvals(cfg, t), t2s, nw)))
    rows = []
    for k in stark.PARABOLA_K:
        fit = stark.perturbation_coefficient(k, spectra, t1, cfg["cluster_tol"])
        rows.append((str(k), float(k) * np.pi, fit.e0, fit.nu, fit.residual,
                     stark.second_order_coefficient(k, t1)))
    meta = {"n_sites": cfg["n"], "t1": t1, "t2": t2s, "cluster_tol": cfg["cluster_tol"]}
    return [("parabolas.csv",
             io.csv_text(["k_over_pi", "k", "e0", "nu_fit", "residual", "nu_second_order"], rows),
             _xy("e0", "nu_fit", "fitted nu versus E0", "scatter")),
            ("parabolas.json", io.json_text(meta), None)]


COMMANDS = {
    "spectrum": cmd_spectrum, "dos-map": cmd_dos_map, "fig2c": cmd_fig2c, "fig4": cmd_fig4,
    "fig5": cmd_fig5, "fig6": cmd_fig6, "winding": cmd_winding, "stark": cmd_stark,
    "parabolas": cmd_parabolas,
}


def write_outputs(files, out, svg):
    os.makedirs(out, exist_ok=True)
    written = []
    for name, text, draw in files:
        path = os.path.join(out, name)
        io.atomic_write(path, text)
        written.append(path)
        if svg and draw is not None:
            spath = os.path.splitext(path)[0] + ".svg"
            io.atomic_write(spath, draw(text))
            written.append(spath)
    return written


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cmd = args.command
    try:
        cfg = resolve(args)
        nw = workers()
        validate(cmd, cfg)
    except ConfigError as exc:
        print(f"pairlat {cmd}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        files = COMMANDS[cmd](cfg, nw)
    except (ConvergenceError, DetectionError, FitError, np.linalg.LinAlgError) as exc:
        print(f"pairlat {cmd}: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InvalidParameterError as exc:
        print(f"pairlat {cmd}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in write_outputs(files, cfg["out"], cfg["svg"]):
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
