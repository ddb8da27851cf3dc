import json

import pytest

from src.core.codec import edge_lists, hypergraph_from_json, hypergraph_to_json, read_hypergraph, write_hypergraph
from src.core.combinatorics import complete_minus
from src.core.errors import InvalidHypergraph


def test_file_round_trip(tmp_path):
    G = complete_minus(6, 3, 4)
    path = tmp_path / "g.json"
    write_hypergraph(G, path)
    assert read_hypergraph(path) == G


def test_writer_emits_colex_order():
    body = json.loads(hypergraph_to_json(complete_minus(4, 2, 0)))
    assert body == {"n": 4, "r": 2, "edges": [[0, 1], [0, 2], [1, 2], [0, 3], [1, 3], [2, 3]]}


@pytest.mark.parametrize(
    "text",
    [
        '{"n": 4, "r": 2, "edges": [[0, 1], [0, 1]]}',
        '{"n": 4, "r": 2, "edges": [[1, 0]]}',
        '{"n": 4, "r": 2, "edges": [[0, 4]]}',
        '{"n": 4, "r": 2, "edges": [[0, 1, 2]]}',
        '{"n": 4, "r": 2, "edges": [], "weight": 1}',
        '{"n": -1, "r": 2, "edges": []}',
        "not json",
    ],
)
def test_reader_rejects(text):
    with pytest.raises(InvalidHypergraph):
        hypergraph_from_json(text)


def test_edge_lists_sorts_colex():
    assert edge_lists({(1, 3), (0, 2), (0, 1)}) == [[0, 1], [0, 2], [1, 3]]
    assert edge_lists({(2, 3), (0, 4)}) == [[2, 3], [0, 4]]
