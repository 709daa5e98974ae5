"""FER/BER curves with the Shannon reference, rendered to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sim import SimRecord, shannon_reference  # noqa: E402


def plot_sweep(records: list[SimRecord], rate: float, path, title: str = "") -> Path:
    """Semilog FER and BER against Eb/N0 with Wilson error bars on FER."""
    path = Path(path)
    x = [r.ebn0_db for r in records]
    fer = [r.fer for r in records]
    ber = [r.ber for r in records]
    lo = [max(r.fer - r.fer_ci[0], 0.0) for r in records]
    hi = [max(r.fer_ci[1] - r.fer, 0.0) for r in records]
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.errorbar(x, fer, yerr=[lo, hi], marker="o", capsize=3, label="FER")
    ax.semilogy(x, ber, marker="s", linestyle="--", label="BER")
    shannon = shannon_reference(rate)
    ax.axvline(shannon, color="k", linestyle=":", label=f"Shannon limit {shannon:.2f} dB")
    ax.set_yscale("log")
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("error rate")
    ax.set_title(title or f"rate {rate:.4f}")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    # fixed metadata keeps PNG output identical across runs
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
