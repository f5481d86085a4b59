"""
Comparison with Tung's bound
============================

Both upper bounds on G/A as functions of the smallest ratio r2, with the
largest ratio fixed at r1 = 5.  The same table is available from the
command line via ``amgm-bounds sweep``.
"""

import numpy as np

from amgm_bounds import dominance_grid

r2 = np.linspace(0.1, 1.0, 91)
panels = {"AM mode, n = 10": (10, "am"), "GM mode, n = 10": (10, "gm"), "GM mode, n = 5": (5, "gm")}

for title, (n, mode) in panels.items():
    records = dominance_grid(n, mode, 5.0, r2)
    margins = np.array([r.margin for r in records])
    print(f"{title}: smallest margin {margins.min():.3g} at r2 = {r2[margins.argmin()]:.2f}")

# In GM mode the two bounds touch where r1 * r2 = 1 (here r2 = 0.2).

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, len(panels), figsize=(12, 3.5))
    for ax, (title, (n, mode)) in zip(axes, panels.items()):
        records = dominance_grid(n, mode, 5.0, r2)
        ax.plot(r2, [r.xia_bound for r in records], "k-", label="sharp bound")
        ax.plot(r2, [r.tung_bound for r in records], "r--", label="Tung")
        ax.set_title(title)
        ax.set_xlabel("r2")
    axes[0].set_ylabel("upper bound on G/A")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig("tung_comparison.png", dpi=120)
    print("wrote tung_comparison.png")
