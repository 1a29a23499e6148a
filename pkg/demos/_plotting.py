"""Optional matplotlib output shared by the demo scripts."""

import os


def figure_or_none():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("(matplotlib not installed; skipping the figure)")
        return None
    return plt


def save(fig, name):
    out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"figure written to {path}")
