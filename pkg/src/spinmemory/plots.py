"""Figure rendering for sweep output, written next to the CSV files."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finite(rows, attr):
    xs, ys = [], []
    for row in rows:
        y = getattr(row, attr)
        if row.status == "ok" and math.isfinite(y):
            xs.append(row.gamma_ratio)
            ys.append(y)
    return xs, ys


def plot_gamma_sweep(rows, path, squeeze_floor=None):
    """Ground/metastable variances against the pump ratio, log x-axis."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for attr, label, style in (
            ("analytic_var_I_y", "ground (analytic)", "C0-"),
            ("var_I_y", "ground (numeric)", "C0o"),
            ("analytic_var_S_y", "metastable (analytic)", "C1-"),
            ("var_S_y", "metastable (numeric)", "C1s")):
        xs, ys = _finite(rows, attr)
        ax.plot(xs, ys, style, label=label, markersize=3.5,
                markerfacecolor="none")
    ax.axhline(1.0, color="0.6", lw=0.8)
    if squeeze_floor is not None:
        ax.axhline(squeeze_floor, color="0.6", lw=0.8, ls="--")
    ax.set_xscale("log")
    ax.set_xlabel(r"$\Gamma/\gamma_m$")
    ax.set_ylabel("normalized spin variance")
    ax.legend(fontsize=8, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_field_error_sweep(rows, path):
    """Best ground-spin variance per relative field error, log x-axis."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    by_db = {}
    for row in rows:
        by_db.setdefault(row.db_over_b, []).append(row)
    for db, group in sorted(by_db.items()):
        xs, ys = _finite(group, "best_var_I")
        style = "--" if db == 0 else "-"
        ax.plot(xs, ys, style, label=rf"$\Delta B/B$ = {db:g}")
    ax.axhline(1.0, color="0.6", lw=0.8)
    ax.set_xscale("log")
    ax.set_xlabel(r"$\Gamma/\gamma_m$")
    ax.set_ylabel("best ground-spin variance")
    ax.legend(fontsize=8, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
