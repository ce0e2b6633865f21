"""Command-line driver: configured experiments rendered to reports.

A run takes a JSON experiment config, dispatches to the library, and writes
a delimited report (CSV, or JSON for single-record experiments) plus an
optional figure into the output directory.  Report bodies are deterministic:
rerunning the same config and seed reproduces them byte for byte, whatever
``--jobs`` says — only the ``# timestamp:`` comment line differs.  A SHA-256
digest of the semantic config (experiment, params, seed) is embedded in
every report for provenance.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .fastinv import build_elliptic
from .manybody import (
    greens_exact,
    greens_preconditioned,
    ground_state,
    hubbard_hamiltonian,
    query_cost_table,
)
from .matfun import (
    chebyshev_coeffs,
    choose_T_J,
    contour_nodes,
    purified_gibbs,
    quadrature_error_bound,
)
from .numlin import LogicalOperator
from .precond import precond_solve, sigma_min_scan

EXPERIMENTS = (
    "solve",
    "sigma_scan",
    "greens",
    "gibbs",
    "contour_convergence",
    "cheb_convergence",
    "cost_table",
)

SEED_ENV_VAR = "QPRECON_SEED"


class ConfigError(ValueError):
    """The experiment config is structurally or semantically invalid."""


class ComputationError(RuntimeError):
    """An experiment failed while computing its results."""


class IoError(OSError):
    """A report could not be written or parsed."""


# ---------------------------------------------------------------------------
# config loading and validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment request: what to run, with which knobs, where to."""

    experiment: str
    seed: int
    params: dict = field(default_factory=dict)
    output_dir: str = "."


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _param_number(params: dict, key: str, default: float) -> float:
    v = params.get(key, default)
    if not _is_number(v):
        raise ConfigError(f"params.{key} must be a number, got {v!r}")
    return float(v)


def _param_int(params: dict, key: str, default: int) -> int:
    v = params.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"params.{key} must be an integer, got {v!r}")
    return v


def _param_str(params: dict, key: str, default: str, allowed=None) -> str:
    v = params.get(key, default)
    if not isinstance(v, str):
        raise ConfigError(f"params.{key} must be a string, got {v!r}")
    if allowed is not None and v not in allowed:
        raise ConfigError(
            f"params.{key} must be one of {sorted(allowed)}, got {v!r}"
        )
    return v


def _param_number_list(params: dict, key: str, default: list) -> list[float]:
    v = params.get(key, default)
    if not isinstance(v, list) or not v or not all(_is_number(x) for x in v):
        raise ConfigError(f"params.{key} must be a non-empty list of numbers")
    return [float(x) for x in v]


def _param_int_list(params: dict, key: str, default: list) -> list[int]:
    v = params.get(key, default)
    ok = isinstance(v, list) and v and all(
        isinstance(x, int) and not isinstance(x, bool) for x in v
    )
    if not ok:
        raise ConfigError(f"params.{key} must be a non-empty list of integers")
    return list(v)


def _reject_unknown(params: dict, allowed: set, experiment: str) -> None:
    extra = sorted(set(params) - allowed)
    if extra:
        raise ConfigError(
            f"unknown params for {experiment!r}: {', '.join(extra)}"
        )


_PARAM_KEYS = {
    "solve": {"n_list", "h", "gamma", "eps", "rhs"},
    "sigma_scan": {"gammas", "grid_n"},
    "greens": {
        "lx", "ly", "t", "u", "n_e", "eta",
        "omega_min", "omega_max", "n_omega", "eps", "split",
    },
    "gibbs": {"beta", "dim", "coupling", "route", "eps"},
    "contour_convergence": {"beta", "T", "J_list", "eps_ref", "x_max", "grid_n"},
    "cheb_convergence": {"zeta", "degrees", "grid_n"},
    "cost_table": {"entries"},
}


def validate_config(raw) -> ExperimentConfig:
    """Check a decoded config object and return the typed form.

    Raises :class:`ConfigError` with a field-level diagnostic on the first
    problem found.
    """
    if not isinstance(raw, dict):
        raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
    known = {"experiment", "seed", "params", "output_dir"}
    extra = sorted(set(raw) - known)
    if extra:
        raise ConfigError(f"unknown config keys: {', '.join(extra)}")

    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"experiment must be one of {list(EXPERIMENTS)}, got {experiment!r}"
        )
    seed = raw.get("seed")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"params must be an object, got {type(params).__name__}")
    output_dir = raw.get("output_dir", ".")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError("output_dir must be a non-empty string")

    _reject_unknown(params, _PARAM_KEYS[experiment], experiment)
    if experiment == "cost_table":
        _validate_cost_entries(params)
    return ExperimentConfig(
        experiment=experiment, seed=seed, params=params, output_dir=output_dir
    )


def _validate_cost_entries(params: dict) -> None:
    entries = params.get("entries", _DEFAULT_COST_ENTRIES)
    if not isinstance(entries, list) or not entries:
        raise ConfigError("params.entries must be a non-empty list")
    for k, e in enumerate(entries):
        if not isinstance(e, dict) or not isinstance(e.get("model"), str):
            raise ConfigError(f"params.entries[{k}] needs a string 'model'")
        if not isinstance(e.get("params", {}), dict):
            raise ConfigError(f"params.entries[{k}].params must be an object")


def load_config(path) -> ExperimentConfig:
    """Read and validate an experiment config from a JSON file."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p} is not valid JSON: {exc}") from exc
    return validate_config(raw)


def config_digest(config: ExperimentConfig) -> str:
    """SHA-256 hex digest of the semantic config.

    Only ``experiment``, ``params``, and ``seed`` enter the hash — where the
    files land does not change what they say.
    """
    canon = json.dumps(
        {"experiment": config.experiment, "params": config.params, "seed": config.seed},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    raise IoError(f"cannot render a cell of type {type(v).__name__}")


def emit_report(results, fmt: str = "csv", *, path, digest: str = "") -> Path:
    """Write a report file and return its path.

    ``results`` is either a table (``{"columns": [...], "rows": [...]}``;
    CSV or JSON) or a flat record (JSON only).  Empty results are an error
    and leave no file behind.  CSV bodies carry two comment lines — a
    timestamp and the config digest — then a header row; floats are
    rendered with 17 significant digits.
    """
    if fmt not in ("csv", "json"):
        raise IoError(f"format must be 'csv' or 'json', got {fmt!r}")
    path = Path(path)
    tabular = isinstance(results, dict) and "columns" in results
    if tabular:
        columns = list(results["columns"])
        rows = [list(r) for r in results["rows"]]
        if not rows:
            raise IoError("refusing to write a report with no rows")
    else:
        if not results:
            raise IoError("refusing to write an empty report")
        if fmt != "json":
            raise IoError("record-shaped results only render to JSON")

    stamp = datetime.now(timezone.utc).isoformat()
    if fmt == "csv":
        lines = [f"# timestamp: {stamp}", f"# config: sha256:{digest}"]
        buf = [",".join(columns)]
        for row in rows:
            if len(row) != len(columns):
                raise IoError(
                    f"row of width {len(row)} under {len(columns)} columns"
                )
            buf.append(",".join(_format_cell(v) for v in row))
        text = "\n".join(lines + buf) + "\n"
    elif tabular:
        payload = {
            "config": f"sha256:{digest}",
            "columns": columns,
            "rows": [[_json_cell(v) for v in row] for row in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        payload = dict(results)
        payload["config"] = f"sha256:{digest}"
        text = json.dumps(payload, indent=2) + "\n"

    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _json_cell(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def read_report(path) -> dict:
    """Parse a report back into memory.

    CSV reports come back as ``{"columns", "rows", "digest"}`` with all
    cells kept as the exact strings on disk, so re-emitting reproduces the
    body byte for byte; JSON reports decode as written.
    """
    p = Path(path)
    if p.suffix == ".json":
        return json.loads(p.read_text())
    digest = ""
    data_lines = []
    for line in p.read_text().splitlines():
        if line.startswith("#"):
            if line.startswith("# config: sha256:"):
                digest = line[len("# config: sha256:"):]
            continue
        data_lines.append(line)
    if not data_lines:
        raise IoError(f"{p} holds no table")
    parsed = list(csv.reader(data_lines))
    return {"columns": parsed[0], "rows": parsed[1:], "digest": digest}


def _ordered_map(fn, items, jobs: int) -> list:
    """Map preserving input order; threads only parallelize independent items."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def _run_solve(config: ExperimentConfig, rng, jobs: int) -> dict:
    p = config.params
    n_list = _param_int_list(p, "n_list", [3, 4, 5])
    h = _param_number(p, "h", 0.5)
    gamma = _param_number(p, "gamma", 1.0)
    eps = _param_number(p, "eps", 1e-6)
    rhs_kind = _param_str(p, "rhs", "exp_decay", {"constant", "exp_decay"})

    def one(n: int):
        sys_ = build_elliptic(1, n, h, rhs=rhs_kind)
        dim = 2**n
        a_inv_mat = (sys_.basis * (1.0 / sys_.oracle.values)) @ sys_.basis.conj().T
        a_inv = LogicalOperator(matrix=a_inv_mat, alpha=sys_.norm_a_inv)
        x_grid = h * np.arange(dim)
        v = gamma * (3.0 + np.cos(5.0 * x_grid)) - 1.0
        b_lo = LogicalOperator(matrix=np.diag(v), alpha=float(np.max(np.abs(v))))

        x, rep = precond_solve(a_inv, b_lo, sys_.rhs, eps)
        exact = np.linalg.solve(sys_.matrix() + np.diag(v), sys_.rhs)
        xi = float(np.linalg.norm(exact) / np.linalg.norm(sys_.rhs))
        err = float(np.linalg.norm(x - exact / np.linalg.norm(exact)))
        return [
            n, dim, gamma, xi, err,
            rep.queries_ua_prime, rep.queries_ub, rep.queries_rhs_prep,
        ]

    return {
        "columns": [
            "n_per_dim", "dim", "gamma", "xi", "err_vs_exact",
            "queries_ua_prime", "queries_ub", "queries_rhs_prep",
        ],
        "rows": _ordered_map(one, n_list, jobs),
    }


def _run_sigma_scan(config: ExperimentConfig, rng, jobs: int) -> dict:
    p = config.params
    gammas = _param_number_list(p, "gammas", [0.5, 1.0, 2.0, 4.0, 8.0])
    grid_n = _param_int(p, "grid_n", 256)
    rows = sigma_min_scan(gammas, grid_n=grid_n, jobs=jobs)
    return {
        "columns": ["gamma", "sigma_min", "c_ab_bound"],
        "rows": [list(r) for r in rows],
    }


def _run_greens(config: ExperimentConfig, rng, jobs: int) -> dict:
    p = config.params
    lx = _param_int(p, "lx", 2)
    ly = _param_int(p, "ly", 1)
    t = _param_number(p, "t", 1.0)
    u = _param_number(p, "u", 4.0)
    eta = _param_number(p, "eta", 0.5)
    omega_min = _param_number(p, "omega_min", -8.0)
    omega_max = _param_number(p, "omega_max", 8.0)
    n_omega = _param_int(p, "n_omega", 9)
    eps = _param_number(p, "eps", 1e-4)
    split = _param_str(p, "split", "interaction", {"interaction", "kinetic"})
    n_e = _param_int(p, "n_e", lx * ly)

    ham = hubbard_hamiltonian(lx, ly, t, u)
    gs = ground_state(ham, n_e)
    zs = np.linspace(omega_min, omega_max, n_omega) + 1j * eta
    exact = greens_exact(ham, gs, zs)
    approx, _ = greens_preconditioned(ham, gs, zs, split=split, eps=eps)

    orbs = list(range(1, ham.n_orbitals + 1))
    rows = []
    for k, z in enumerate(zs):
        for a in range(len(orbs)):
            for b in range(len(orbs)):
                g_ex = exact.g_total[k, a, b]
                g_ap = approx.g_total[k, a, b]
                base = [float(z.real), float(z.imag), orbs[a], orbs[b]]
                rows.append(base + [g_ex.real, g_ex.imag, "exact", 0.0])
                rows.append(
                    base + [g_ap.real, g_ap.imag, "preconditioned",
                            float(abs(g_ap - g_ex))]
                )
    return {
        "columns": ["re_z", "im_z", "i", "j", "re_G", "im_G", "method",
                    "err_vs_exact"],
        "rows": rows,
    }


def _run_gibbs(config: ExperimentConfig, rng, jobs: int) -> dict:
    p = config.params
    beta = _param_number(p, "beta", 1.0)
    dim = _param_int(p, "dim", 8)
    coupling = _param_number(p, "coupling", 0.02)
    route = _param_str(p, "route", "contour", {"contour", "inverse"})
    eps = _param_number(p, "eps", 1e-8)

    a_vals = rng.uniform(0.05, 1.0, dim) + 0.02
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    b_mat = (raw + raw.conj().T) / 2.0
    b_mat *= coupling / np.linalg.norm(b_mat, ord=2)
    b_lo = LogicalOperator(matrix=b_mat, alpha=coupling)

    psi, xi, _ = purified_gibbs((a_vals, None), b_lo, beta, route=route, eps=eps)
    # psi.reshape(N, N)[x, y] = E[y, x] / ||E||_F, so tracing out the first
    # register leaves rho[y, y'] = sum_x m[x, y] conj(m[x, y']).
    m = psi.reshape(dim, dim)
    rho = m.T @ m.conj()

    h_mat = np.diag(a_vals) + b_mat
    evals, vecs = np.linalg.eigh(h_mat)
    weights = np.exp(-beta * (evals - evals[0]))
    rho_exact = (vecs * (weights / np.sum(weights))) @ vecs.conj().T
    dist = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho - rho_exact))))

    return {
        "beta": beta,
        "xi": xi,
        "trace_dist_to_exact": dist,
        "route": route,
    }


def _run_contour_convergence(config: ExperimentConfig, rng, jobs: int) -> dict:
    p = config.params
    beta = _param_number(p, "beta", 1.0)
    eps_ref = _param_number(p, "eps_ref", 1e-6)
    j_list = _param_int_list(p, "J_list", [25, 50, 100, 200])
    x_max = _param_number(p, "x_max", 50.0)
    grid_n = _param_int(p, "grid_n", 2001)
    if "T" in p:
        t_cap = _param_number(p, "T", 4.0)
    else:
        t_cap, _ = choose_T_J(beta, eps_ref)
    x = np.linspace(0.0, x_max, grid_n)
    target = np.exp(-beta * x)

    def one(j: int):
        rule = contour_nodes(beta, t_cap, j)
        approx = np.sum(
            rule.weights[:, None] / (rule.nodes[:, None] - x[None, :]), axis=0
        )
        emp = float(np.max(np.abs(target - approx)))
        return [beta, t_cap, j, emp, quadrature_error_bound(beta, t_cap, j)]

    return {
        "columns": ["beta", "T", "J", "empirical_err", "lemma_bound"],
        "rows": _ordered_map(one, j_list, jobs),
    }


def _run_cheb_convergence(config: ExperimentConfig, rng, jobs: int) -> dict:
    p = config.params
    zeta = _param_number(p, "zeta", 1.0)
    degrees = _param_int_list(p, "degrees", [25, 50, 100, 200])
    grid_n = _param_int(p, "grid_n", 4001)
    y = np.linspace(-1.0, 1.0, grid_n)

    def target(v):
        v = np.asarray(v, dtype=np.float64)
        out = np.zeros_like(v)
        nz = v != 0.0
        out[nz] = np.sign(v[nz]) * np.exp(-zeta / np.abs(v[nz]))
        return out

    g_y = target(y)

    def one(d: int):
        series = chebyshev_coeffs(target, d)
        emp = float(np.max(np.abs(np.polynomial.chebyshev.chebval(y, series.coeffs) - g_y)))
        return [zeta, d, emp, series.truncation_bound]

    return {
        "columns": ["zeta", "degree", "empirical_err", "truncation_bound"],
        "rows": _ordered_map(one, degrees, jobs),
    }


_DEFAULT_COST_ENTRIES = [
    {"model": "generic",
     "params": {"abs_z": 10.0, "alpha_h": 8.0, "sigma_tilde": 0.25,
                "alpha_b": 2.0, "eta": 0.5, "eps": 1e-3, "varsigma": 1e-3}},
    {"model": "hubbard",
     "params": {"n_orbitals": 8, "t": 1.0, "u": 4.0, "n_e": 2,
                "eta": 0.5, "eps": 1e-3}},
    {"model": "planewave_dual",
     "params": {"n_orbitals": 27, "omega": 9.0, "eta": 0.5, "eps": 1e-3}},
    {"model": "schwinger",
     "params": {"n_sites": 16, "x": 4.0, "mu": 1.0, "eta": 0.5, "eps": 1e-3}},
]


def _run_cost_table(config: ExperimentConfig, rng, jobs: int) -> dict:
    entries = config.params.get("entries", _DEFAULT_COST_ENTRIES)
    rows = []
    for entry in entries:
        model = entry["model"]
        for row in query_cost_table(model, entry.get("params", {})):
            rows.append([
                model,
                row.get("method"),
                row.get("queries_state_prep"),
                row.get("queries_encoding"),
                row.get("error"),
                row.get("restricted"),
            ])
    return {
        "columns": ["model", "method", "queries_state_prep",
                    "queries_encoding", "error", "restricted"],
        "rows": rows,
    }


_RUNNERS = {
    "solve": _run_solve,
    "sigma_scan": _run_sigma_scan,
    "greens": _run_greens,
    "gibbs": _run_gibbs,
    "contour_convergence": _run_contour_convergence,
    "cheb_convergence": _run_cheb_convergence,
    "cost_table": _run_cost_table,
}


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def _column(table: dict, name: str) -> list:
    k = table["columns"].index(name)
    return [row[k] for row in table["rows"]]


def _figure_solve(plt, table: dict):
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.semilogy(_column(table, "dim"), _column(table, "err_vs_exact"), "o-")
    ax.set_xlabel("grid dimension")
    ax.set_ylabel("solution error")
    ax.set_title("preconditioned elliptic solve")
    return fig


def _figure_sigma_scan(plt, table: dict):
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    g = _column(table, "gamma")
    ax.plot(g, _column(table, "sigma_min"), "o-", label="sigma_min(W)")
    ax.plot(g, _column(table, "c_ab_bound"), "s--", label="1 / C_AB")
    ax.set_xlabel("coupling gamma")
    ax.set_ylabel("smallest singular value")
    ax.legend()
    return fig


def _figure_greens(plt, table: dict):
    spectral: dict[str, dict[float, float]] = {}
    cols = table["columns"]
    idx = {c: cols.index(c) for c in cols}
    for row in table["rows"]:
        if row[idx["i"]] != row[idx["j"]]:
            continue
        acc = spectral.setdefault(row[idx["method"]], {})
        w = row[idx["re_z"]]
        acc[w] = acc.get(w, 0.0) - row[idx["im_G"]] / np.pi
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    for method, acc in sorted(spectral.items()):
        ws = sorted(acc)
        style = "o-" if method == "exact" else "x--"
        ax.plot(ws, [acc[w] for w in ws], style, label=method)
    ax.set_xlabel("Re z")
    ax.set_ylabel("spectral weight  -Im tr G / pi")
    ax.legend()
    return fig


def _figure_convergence(xlabel: str):
    def render(plt, table: dict):
        fig, ax = plt.subplots(figsize=(5.0, 3.5))
        x = _column(table, table["columns"][2 if xlabel == "J" else 1])
        ax.semilogy(x, _column(table, "empirical_err"), "o-", label="measured")
        bound_col = table["columns"][-1]
        ax.semilogy(x, _column(table, bound_col), "s--", label=bound_col)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("uniform error")
        ax.legend()
        return fig

    return render


def _figure_cost_table(plt, table: dict):
    labels = [
        f"{m}:{meth}"
        for m, meth in zip(_column(table, "model"), _column(table, "method"))
    ]
    cost = _column(table, "queries_encoding")
    fig, ax = plt.subplots(figsize=(6.0, 3.5))
    ax.barh(range(len(labels)), cost, log=True)
    ax.set_yticks(range(len(labels)), labels=labels, fontsize=8)
    ax.set_xlabel("encoding queries")
    fig.tight_layout()
    return fig


_FIGURES = {
    "solve": _figure_solve,
    "sigma_scan": _figure_sigma_scan,
    "greens": _figure_greens,
    "contour_convergence": _figure_convergence("J"),
    "cheb_convergence": _figure_convergence("degree"),
    "cost_table": _figure_cost_table,
}


def _render_figure(experiment: str, table: dict, out_dir: Path) -> Path | None:
    render = _FIGURES.get(experiment)
    if render is None:
        return None
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig = render(plt, table)
    path = out_dir / f"{experiment}.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


# ---------------------------------------------------------------------------
# runner and entry point
# ---------------------------------------------------------------------------

def run_experiment(
    config: ExperimentConfig, jobs: int = 1, plots: bool = True
) -> list[Path]:
    """Run one configured experiment and write its artifacts.

    Returns the written paths (report first).  ``jobs`` threads only ever
    split independent parameter points and all reductions keep input order,
    so the report body does not depend on it.
    """
    if jobs < 1:
        raise ConfigError(f"jobs must be at least 1, got {jobs}")
    runner = _RUNNERS[config.experiment]
    rng = np.random.default_rng(config.seed)
    results = runner(config, rng, jobs)

    out_dir = Path(config.output_dir)
    digest = config_digest(config)
    fmt = "json" if "columns" not in results else "csv"
    report = emit_report(
        results, fmt, path=out_dir / f"{config.experiment}.{fmt}", digest=digest
    )
    written = [report]
    if plots and "columns" in results:
        figure = _render_figure(config.experiment, results, out_dir)
        if figure is not None:
            written.append(figure)
    return written


def _apply_seed_env(config: ExperimentConfig) -> ExperimentConfig:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return config
    try:
        seed = int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")
    if seed < 0:
        raise ConfigError(f"{SEED_ENV_VAR} must be non-negative, got {seed}")
    return replace(config, seed=seed)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qprecon",
        description="preconditioned solver experiments: configs in, reports out",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment config")
    run_p.add_argument("config", help="path to a JSON experiment config")
    run_p.add_argument(
        "--jobs", type=int, default=1, metavar="K",
        help="worker threads for independent parameter points (default 1)",
    )
    run_p.add_argument(
        "--output", default=None, metavar="DIR",
        help="override the config's output directory",
    )
    run_p.add_argument(
        "--no-plots", action="store_true",
        help="skip figure rendering, write only the report",
    )

    val_p = sub.add_parser("validate", help="check a config without running it")
    val_p.add_argument("config", help="path to a JSON experiment config")
    return parser


def main(argv=None) -> int:
    """CLI entry point.  Exit status: 0 ok, 1 bad config, 2 failed run."""
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    if args.command == "validate":
        print(f"valid: {config.experiment} (seed {config.seed})")
        return 0

    try:
        config = _apply_seed_env(config)
        if args.output is not None:
            config = replace(config, output_dir=args.output)
        if args.jobs < 1:
            raise ConfigError(f"--jobs must be at least 1, got {args.jobs}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        written = run_experiment(config, jobs=args.jobs, plots=not args.no_plots)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
