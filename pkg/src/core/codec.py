"""JSON wire formats shared by the library and the CLI."""
from __future__ import annotations

import pathlib
from typing import Literal

from pydantic import BaseModel, ConfigDict, NonNegativeInt, ValidationError, field_validator

from .combinatorics import Hypergraph, colex_key
from .errors import InvalidHypergraph


class _Wire(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HypergraphFile(_Wire):
    n: NonNegativeInt
    r: NonNegativeInt
    edges: list[list[int]]

    @field_validator("edges")
    @classmethod
    def _ascending(cls, edges: list[list[int]]) -> list[list[int]]:
        for e in edges:
            if any(a >= b for a, b in zip(e, e[1:])):
                raise ValueError(f"edge {e} is not strictly ascending")
        if len({tuple(e) for e in edges}) != len(edges):
            raise ValueError("duplicate edges")
        return edges


class SinglePart(_Wire):
    type: Literal["single"] = "single"
    edge: list[int]


class CopyPart(_Wire):
    type: Literal["copy"] = "copy"
    edges: list[list[int]]


class DecompositionFile(_Wire):
    phi: int
    source: Literal["constructive", "formula", "oracle"]
    parts: list[SinglePart | CopyPart]


class CertificateFile(_Wire):
    value: int
    copies: list[list[list[int]]]
    leftover: list[list[int]]
    optimal: bool


def hypergraph_to_json(G: Hypergraph) -> str:
    body = HypergraphFile(n=G.n, r=G.r, edges=[list(e) for e in G.sorted_edges()])
    return body.model_dump_json()


def hypergraph_from_json(text: str) -> Hypergraph:
    try:
        body = HypergraphFile.model_validate_json(text)
    except ValidationError as e:
        raise InvalidHypergraph(f"malformed hypergraph JSON: {e}") from e
    return Hypergraph(body.n, body.r, frozenset(tuple(e) for e in body.edges))


def read_hypergraph(path: str | pathlib.Path) -> Hypergraph:
    return hypergraph_from_json(pathlib.Path(path).read_text())


def write_hypergraph(G: Hypergraph, path: str | pathlib.Path) -> None:
    pathlib.Path(path).write_text(hypergraph_to_json(G) + "\n")


def edge_lists(edges) -> list[list[int]]:
    """Edges as JSON-ready lists, colex ordered."""
    return [list(e) for e in sorted(edges, key=colex_key)]
