import pytest

from dkdv.classify import (
    UNDEFINED,
    CellClass,
    ValuationMap,
    classify,
    classify_cell,
    detect_confined_clusters,
    detect_diagonals,
    detect_strips,
    detect_vertical_strips,
    valuation_map,
)
from dkdv.errors import InconsistentStrip
from dkdv.lattice import LSHAPE, STAIRCASE, EvolutionParams, SeedSpec, contiguous_zero_sites, simulate


@pytest.fixture(scope="module")
def crossing():
    # strip of weight 3 on rows 8-9 crossed by a weight-7 diagonal
    seeds = [SeedSpec.taishi((0, 8), 3), SeedSpec.infinity((0, 0), 7)]
    return simulate(seeds, LSHAPE, 36, 30, EvolutionParams(truncation_budget=48))


def test_cell_classes():
    assert classify_cell(0) == CellClass.regular()
    assert classify_cell(2) == CellClass.zero(2)
    assert classify_cell(-3) == CellClass.infinity(3)
    with pytest.raises(ValueError):
        classify_cell(UNDEFINED)


def test_strips_west_and_east(crossing):
    west = detect_strips(crossing, (0, 4))
    east = detect_strips(crossing, (32, 36))
    assert [(s.base_row, s.weights) for s in west] == [(8, (3,))]
    assert [(s.base_row, s.weights) for s in east] == [(12, (1, 2))]


def test_strip_range_through_interaction_is_rejected(crossing):
    with pytest.raises(InconsistentStrip):
        detect_strips(crossing, (4, 14))


def test_diagonal_is_followed_across_the_crossing(crossing):
    (diag,) = detect_diagonals(valuation_map(crossing))
    assert diag.anchor == (0, 0)
    assert diag.weight == 7
    assert diag.reaches_edge
    assert len(diag.pieces) == 2
    (m0, n0), _ = diag.pieces[1]
    # the line leaves the interaction two rows higher
    assert n0 - m0 == 2


def test_interaction_zone_is_a_separate_cluster(crossing):
    report = classify(crossing)
    assert len(report.clusters) == 1
    assert not report.clusters[0].confined


def test_alternating_band():
    seeds = [SeedSpec.infinity((4, 0), 1), SeedSpec.zero((5, 0), 1), SeedSpec.infinity((6, 0), 1)]
    grid = simulate(seeds, LSHAPE, 22, 16, EvolutionParams())
    (band,) = detect_diagonals(valuation_map(grid))
    assert band.alternating and band.band_width == 3 and band.reaches_edge


def test_confined_cluster_extent():
    S = 10
    seeds = [SeedSpec.zero(s) for s in contiguous_zero_sites(S, 2)]
    grid = simulate(seeds, STAIRCASE, 24, 24, EvolutionParams(), S)
    (cluster,) = detect_confined_clusters(valuation_map(grid))
    assert cluster.confined
    assert cluster.extent == (3, 3)


def test_vertical_strip():
    seeds = [SeedSpec.vertical_taishi((6, 0), 2)]
    grid = simulate(seeds, LSHAPE, 14, 10, EvolutionParams())
    (strip,) = detect_vertical_strips(grid, (0, 4))
    assert (strip.base, strip.weights, strip.orientation) == (6, (2,), "vertical")


def test_tsv_round_trip(crossing):
    vm = valuation_map(crossing)
    assert ValuationMap.from_tsv(vm.to_tsv()) == vm


def test_report_json(crossing):
    doc = classify(crossing).to_json()
    assert doc["strips"]["east"][0]["weights"] == [1, 2]
    assert doc["diagonals"][0]["weight"] == 7
