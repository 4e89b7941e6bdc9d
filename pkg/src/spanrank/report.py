"""Text and SVG renderings of per-sample pRR histograms."""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .metrics import EvaluationReport

_COLORS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3")


def bin_labels(bins: int) -> list[str]:
    return [f"{'[' if i == 0 else '('}{i / bins:.1f},{(i + 1) / bins:.1f}]" for i in range(bins)]


def render_text(reports: Sequence[EvaluationReport], names: Sequence[str], width: int = 40) -> str:
    lines = []
    for report, name in zip(reports, names):
        lines.append(
            f"{name}: n={report.n_samples} pRR={report.mean_prr:.4f} "
            f"EM={report.mean_em:.4f} F1@1={report.mean_f1:.4f}"
        )
        total = max(report.n_samples, 1)
        peak = max(report.histogram or [0]) or 1
        for label, count in zip(bin_labels(len(report.histogram)), report.histogram):
            bar = "#" * round(width * count / peak)
            lines.append(f"  {label:<11} {count:>5} {100 * count / total:5.1f}% {bar}")
    return "\n".join(lines) + "\n"


def render_svg(reports: Sequence[EvaluationReport], names: Sequence[str]) -> str:
    """Grouped bar chart of the percentage of samples per pRR bin."""
    if not reports:
        raise ValueError("nothing to render")
    bins = len(reports[0].histogram)
    if any(len(r.histogram) != bins for r in reports):
        raise ValueError("reports have different bin counts")
    w, h, left, bottom, top = 640, 360, 50, 50, 30
    plot_w, plot_h = w - left - 20, h - bottom - top
    group_w = plot_w / bins
    bar_w = group_w * 0.8 / len(reports)
    pcts = [[100 * c / max(r.n_samples, 1) for c in r.histogram] for r in reports]
    ymax = max(max(p) for p in pcts) or 1.0
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">',
        f'<line x1="{left}" y1="{h - bottom}" x2="{w - 20}" y2="{h - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{h - bottom}" stroke="black"/>',
        f'<text x="{left - 40}" y="{top - 10}">% samples (max {ymax:.1f})</text>',
    ]
    for b, label in enumerate(bin_labels(bins)):
        x0 = left + b * group_w + group_w * 0.1
        for k, p in enumerate(pcts):
            bh = plot_h * p[b] / ymax
            out.append(
                f'<rect x="{x0 + k * bar_w:.2f}" y="{h - bottom - bh:.2f}" width="{bar_w:.2f}" '
                f'height="{bh:.2f}" fill="{_COLORS[k % len(_COLORS)]}"/>'
            )
        out.append(
            f'<text x="{left + (b + 0.5) * group_w:.2f}" y="{h - bottom + 15}" text-anchor="middle" '
            f'font-size="9">{escape(label)}</text>'
        )
    for k, name in enumerate(names):
        y = top + 14 * k
        out.append(f'<rect x="{w - 180}" y="{y}" width="10" height="10" fill="{_COLORS[k % len(_COLORS)]}"/>')
        out.append(f'<text x="{w - 165}" y="{y + 9}">{escape(name)}</text>')
    out.append(f'<text x="{left + plot_w / 2:.2f}" y="{h - 12}" text-anchor="middle">per-sample pRR</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
