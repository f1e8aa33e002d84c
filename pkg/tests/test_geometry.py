import math

import pytest

from fibercell import GeometryError, build_cell_geometry


def test_default_cell_measures():
    g = build_cell_geometry(1.0, (0.5, 0.5), 0.25, 1.0)
    assert g.disk_area == pytest.approx(math.pi / 16, abs=1e-15)
    assert g.matrix_area == pytest.approx(1 - math.pi / 16, abs=1e-15)


def test_disk_tangent_to_boundary_rejected():
    with pytest.raises(GeometryError):
        build_cell_geometry(1.0, (0.5, 0.5), 0.5, 1.0)


def test_disk_crossing_boundary_rejected():
    with pytest.raises(GeometryError):
        build_cell_geometry(1.0, (0.2, 0.5), 0.3, 1.0)


def test_height_independent_of_areas():
    g = build_cell_geometry(1.0, (0.5, 0.5), 0.25, 2.0)
    assert g.height == 2.0
    assert g.disk_area == pytest.approx(math.pi / 16, abs=1e-15)


@pytest.mark.parametrize("side,radius,height", [
    (0.0, 0.25, 1.0), (1.0, -0.1, 1.0), (1.0, 0.25, 0.0)])
def test_nonpositive_dimensions_rejected(side, radius, height):
    with pytest.raises(GeometryError):
        build_cell_geometry(side, (0.5, 0.5), radius, height)
