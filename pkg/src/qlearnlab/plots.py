"""SVG figures for run records (matplotlib, Agg backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bounds import lb_compare_abs, lb_qpca  # noqa: E402

# stable element ids and no timestamp, so reruns give identical files
plt.rcParams["svg.hashsalt"] = "qlearnlab"
_SVG_META = {"Date": None}

_LABELS = {"conventional": "(C)", "quantum_enhanced": "(Q)"}


def _points(record, kind):
    return [p for p in record.points if p.get("kind") == kind]


def accuracy_vs_budget_figure(record):
    fig, ax = plt.subplots(figsize=(6, 4))
    pts = _points(record, "accuracy")
    for n in sorted({p["n"] for p in pts}):
        for s in sorted({p["strategy"] for p in pts}):
            sel = [p for p in pts if p["n"] == n and p["strategy"] == s]
            if sel:
                ax.plot([p["copies"] for p in sel], [p["accuracy"] for p in sel], marker="o",
                        label=f"{_LABELS.get(s, s)} n={n}")
    ax.axhline(record.plan.get("accuracy_target", 0.7), color="grey", ls=":")
    ax.set_xscale("log")
    ax.set_xlabel("copies consumed")
    ax.set_ylabel("accuracy")
    if pts:
        ax.legend(fontsize="small")
    return fig


def budget_vs_n_figure(record):
    """Minimal budget per strategy against n, with the conventional lower-bound curve."""
    fig, ax = plt.subplots(figsize=(6, 4))
    pts = [p for p in _points(record, "min_budget") if p["reached"]]
    for s in sorted({p["strategy"] for p in _points(record, "min_budget")}):
        sel = [p for p in pts if p["strategy"] == s]
        ax.plot([p["n"] for p in sel], [p["copies"] for p in sel], marker="o", label=_LABELS.get(s, s))
    ns = list(record.plan.get("n_values", []))
    delta = record.plan.get("delta", 0.3)
    ax.plot(ns, [lb_compare_abs(n, delta) for n in ns], ls=":", color="k", label="(C, LB)")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("copies to reach target")
    ax.legend()
    return fig


def pca_scatter_figure(record):
    rows = record.tables.get("projections", [])
    groups = sorted({(r["n"], r["strategy"]) for r in rows})
    fig, axes = plt.subplots(1, max(len(groups), 1), figsize=(4 * max(len(groups), 1), 4), squeeze=False)
    for ax, (n, s) in zip(axes[0], groups):
        for sym, marker in (("general", "o"), ("t_symmetric", "s")):
            sel = [r for r in rows if r["n"] == n and r["strategy"] == s and r["symmetry"] == sym]
            ax.scatter([r["pc1"] for r in sel], [r["pc2"] for r in sel], marker=marker, s=12, label=sym)
        ax.set_title(f"{_LABELS.get(s, s)} n={n}")
        ax.set_xlabel("PC1")
        ax.set_ylabel("PC2")
        ax.legend(fontsize="small")
    return fig


def qpca_figure(record):
    fig, ax = plt.subplots(figsize=(6, 4))
    pts = _points(record, "qpca")
    for n in sorted({p["n"] for p in pts}):
        for s in sorted({p["strategy"] for p in pts}):
            sel = [p for p in pts if p["n"] == n and p["strategy"] == s]
            ax.plot([p["copies"] for p in sel], [p["accuracy"] for p in sel], marker="o",
                    label=f"{_LABELS.get(s, s)} n={n}")
        ax.axvline(lb_qpca(n), ls=":", color="grey")
    ax.set_xscale("log")
    ax.set_xlabel("copies")
    ax.set_ylabel("accuracy")
    if pts:
        ax.legend(fontsize="small")
    return fig


def _save(fig, path) -> Path:
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
    return Path(path)


def write_svgs(record, out_dir) -> list[Path]:
    out = Path(out_dir)
    if record.task == "states":
        return [
            _save(accuracy_vs_budget_figure(record), out / "accuracy_vs_budget.svg"),
            _save(budget_vs_n_figure(record), out / "budget_vs_n.svg"),
        ]
    if record.task == "dynamics":
        return [_save(pca_scatter_figure(record), out / "pca_scatter.svg")]
    if record.task == "qpca":
        return [_save(qpca_figure(record), out / "accuracy_vs_copies.svg")]
    return []
