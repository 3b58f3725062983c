"""Figures for survey reports."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def survey_figure(rows, path, title=""):
    """Grouped bars per image order: conjugacy classes and how many of them descend."""
    orders = [str(r["image_order"]) for r in rows]
    classes = [r["classes"] for r in rows]
    descend = [r["descend"] for r in rows]
    xs = range(len(rows))
    width = 0.4
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar([x - width / 2 for x in xs], classes, width, label="classes", color="0.7")
    ax.bar([x + width / 2 for x in xs], descend, width, label="descend to Q", color="C0")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(orders)
    ax.set_xlabel("order of projective image")
    ax.set_ylabel("conjugacy classes")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)
    return path
