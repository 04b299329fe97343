from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import pytest

from figkit import CSV_COLUMNS, FigureKind, FigureSpec, SchemaError, build_curves, read_rows, render

DATA = Path(__file__).parent / "data"


def stars(ax):
    return [line for line in ax.lines if line.get_marker() == "*"]


def curves_on(ax):
    return [line for line in ax.lines if line.get_label() and not line.get_label().startswith("_")]


def test_strategy_comparison_two_curves_two_stars(tmp_path):
    out = tmp_path / "comparison.png"
    fig = render(FigureSpec(DATA / "strategy_comparison.csv", FigureKind.STRATEGY_COMPARISON, out))
    ax = fig.axes[0]
    assert out.exists() and out.stat().st_size > 0
    assert len(curves_on(ax)) == 2
    assert len(stars(ax)) == 2
    # a curve per strategy, sorted label order
    assert [line.get_label() for line in curves_on(ax)] == ["equal", "load_based"]
    # MC estimates drawn as error bars
    assert len(ax.containers) == 2


def test_stars_sit_on_the_grid_maximum():
    rows = read_rows(DATA / "strategy_comparison.csv")
    fig = render(FigureSpec(DATA / "strategy_comparison.csv", FigureKind.STRATEGY_COMPARISON))
    ax = fig.axes[0]
    for strategy, star in zip(("equal", "load_based"), stars(ax)):
        own = [r for r in rows if r.strategy == strategy]
        best = max(own, key=lambda r: r.pr_analytical)
        assert star.get_xdata()[0] == best.eta
        assert star.get_ydata()[0] == best.pr_analytical


def test_users_family_analytic_only():
    fig = render(FigureSpec(DATA / "users_family.csv", FigureKind.USERS_FAMILY))
    ax = fig.axes[0]
    assert len(curves_on(ax)) == 3
    assert len(ax.containers) == 0
    labels = [line.get_label() for line in curves_on(ax)]
    assert labels == ["5 users/hotspot", "10 users/hotspot", "15 users/hotspot"]


def test_bandwidth_family_labels_and_stars():
    fig = render(FigureSpec(DATA / "bandwidth_family.csv", FigureKind.BANDWIDTH_FAMILY))
    ax = fig.axes[0]
    labels = [line.get_label() for line in curves_on(ax)]
    assert labels == ["W = 100 MHz", "W = 300 MHz", "W = 600 MHz"]
    assert len(stars(ax)) == 3


def test_stars_can_be_disabled():
    fig = render(
        FigureSpec(DATA / "users_family.csv", FigureKind.USERS_FAMILY, mark_optimum=False)
    )
    assert stars(fig.axes[0]) == []


def test_single_row_plot(tmp_path):
    path = tmp_path / "single.csv"
    path.write_text(
        ",".join(CSV_COLUMNS) + "\nequal,0.5,3e8,5,5e7,0.41,0.35,0.06,0.405,0.003,ok\n"
    )
    out = tmp_path / "single.png"
    fig = render(FigureSpec(path, FigureKind.STRATEGY_COMPARISON, out))
    ax = fig.axes[0]
    assert out.exists()
    assert len(curves_on(ax)) == 1
    assert len(stars(ax)) == 1


def test_mixed_family_is_rejected():
    # two strategies cannot share a bandwidth-family figure
    with pytest.raises(SchemaError, match="single strategy"):
        render(FigureSpec(DATA / "strategy_comparison.csv", FigureKind.BANDWIDTH_FAMILY))


def test_rendering_is_deterministic_and_read_only():
    path = DATA / "bandwidth_family.csv"
    before = path.read_bytes()
    data = []
    for _ in range(2):
        curves, subtitle = build_curves(read_rows(path), FigureKind.BANDWIDTH_FAMILY)
        data.append([(c.label, tuple(c.etas), tuple(c.prs), tuple(c.mc)) for c in curves])
    assert data[0] == data[1]
    assert path.read_bytes() == before


def test_curves_sorted_by_eta(tmp_path):
    path = tmp_path / "shuffled.csv"
    rows = [
        "equal,0.9,3e8,5,5e7,0.10,0.1,0.0,,,ok",
        "equal,0.1,3e8,5,5e7,0.40,0.3,0.1,,,ok",
        "equal,0.5,3e8,5,5e7,0.44,0.3,0.14,,,ok",
    ]
    path.write_text(",".join(CSV_COLUMNS) + "\n" + "\n".join(rows) + "\n")
    curves, _ = build_curves(read_rows(path), FigureKind.STRATEGY_COMPARISON)
    assert curves[0].etas == [0.1, 0.5, 0.9]
    assert curves[0].prs == [0.40, 0.44, 0.10]
