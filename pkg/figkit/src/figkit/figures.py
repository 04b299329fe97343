"""Rate-coverage figures: Pr versus the backhaul fraction, one line per
family member, the grid optimum of each line marked with a star.

The star sits on the best point present in the CSV; nothing is recomputed or
interpolated here, the sweep data is the single source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from matplotlib.figure import Figure

from .schema import SchemaError, SweepRow, read_rows


class FigureKind(Enum):
    # one strategy, a curve per bandwidth
    BANDWIDTH_FAMILY = "bandwidth-family"
    # fixed system, a curve per partition strategy
    STRATEGY_COMPARISON = "strategy-comparison"
    # one strategy, a curve per users-per-hotspot count
    USERS_FAMILY = "users-family"


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str | Path
    kind: FigureKind
    out_path: str | Path | None = None
    mark_optimum: bool = True


@dataclass
class Curve:
    label: str
    etas: list[float] = field(default_factory=list)
    prs: list[float] = field(default_factory=list)
    mc: list[tuple[float, float, float]] = field(default_factory=list)


# Which grouping field the kind varies; the others must be constant.
_LABEL_FIELD = {
    FigureKind.BANDWIDTH_FAMILY: "w_hz",
    FigureKind.STRATEGY_COMPARISON: "strategy",
    FigureKind.USERS_FAMILY: "m_bar",
}


def _label(kind: FigureKind, value) -> str:
    if kind is FigureKind.BANDWIDTH_FAMILY:
        return f"W = {value / 1e6:g} MHz"
    if kind is FigureKind.USERS_FAMILY:
        return f"{value} users/hotspot"
    return str(value)


def _constant_text(name: str, value) -> str:
    if name == "w_hz":
        return f"W = {value / 1e6:g} MHz"
    if name == "m_bar":
        return f"{value} users/hotspot"
    if name == "rho_bps":
        return f"rho = {value / 1e6:g} Mbps"
    return f"{value} partition"


def build_curves(rows: list[SweepRow], kind: FigureKind) -> tuple[list[Curve], str]:
    """Group the sweep rows into one curve per family member and a subtitle
    of the quantities held constant."""
    label_field = _LABEL_FIELD[kind]
    fixed_fields = [f for f in ("strategy", "w_hz", "m_bar", "rho_bps") if f != label_field]
    for name in fixed_fields:
        values = sorted({getattr(r, name) for r in rows})
        if len(values) > 1:
            raise SchemaError(
                f"{kind.value} figure expects a single {name}, found {len(values)}: "
                + ", ".join(str(v) for v in values)
            )

    groups: dict[object, Curve] = {}
    for row in rows:
        key = getattr(row, label_field)
        curve = groups.get(key)
        if curve is None:
            curve = groups[key] = Curve(label=_label(kind, key))
        curve.etas.append(row.eta)
        curve.prs.append(row.pr_analytical)
        if row.pr_mc is not None:
            curve.mc.append((row.eta, row.pr_mc, row.mc_se if row.mc_se is not None else 0.0))

    curves = [groups[k] for k in sorted(groups)]
    for curve in curves:
        order = sorted(range(len(curve.etas)), key=lambda i: curve.etas[i])
        curve.etas = [curve.etas[i] for i in order]
        curve.prs = [curve.prs[i] for i in order]
        curve.mc.sort()
    subtitle = ", ".join(_constant_text(f, getattr(rows[0], f)) for f in fixed_fields)
    return curves, subtitle


def render(spec: FigureSpec) -> Figure:
    """Draw the figure described by spec; save it when out_path is set."""
    kind = FigureKind(spec.kind)
    rows = read_rows(spec.csv_path)
    curves, subtitle = build_curves(rows, kind)

    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.add_subplot(111)
    for curve in curves:
        marker = "o" if len(curve.etas) == 1 else None
        (line,) = ax.plot(curve.etas, curve.prs, label=curve.label, linewidth=1.6, marker=marker)
        color = line.get_color()
        if curve.mc:
            xs, ys, errs = zip(*curve.mc)
            ax.errorbar(
                xs,
                ys,
                yerr=errs,
                fmt="o",
                markersize=3.5,
                capsize=2,
                linestyle="none",
                color=color,
                alpha=0.85,
            )
        if spec.mark_optimum:
            best = max(range(len(curve.prs)), key=curve.prs.__getitem__)
            ax.plot(
                [curve.etas[best]],
                [curve.prs[best]],
                marker="*",
                markersize=14,
                linestyle="none",
                color=color,
                zorder=5,
            )
    ax.set_xlabel("backhaul fraction of the band")
    ax.set_ylabel("rate coverage probability")
    ax.set_title(subtitle, fontsize=10)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    if spec.out_path is not None:
        fig.savefig(spec.out_path, dpi=150)
    return fig
