from __future__ import annotations

from stablemaps.explorer import enumerate_reachable, random_walk
from stablemaps.plotting import plot_tuples, plot_walk

PNG = b"\x89PNG"


def test_walk_plot_writes_png(tmp_path):
    out = plot_walk(random_walk(1, 12), tmp_path / "walk.png")
    assert out.read_bytes().startswith(PNG)


def test_tuple_plot_writes_png(tmp_path):
    out = plot_tuples(enumerate_reachable(2), tmp_path / "tuples.png")
    assert out.read_bytes().startswith(PNG)
    empty = plot_tuples([], tmp_path / "empty.png")
    assert empty.read_bytes().startswith(PNG)
