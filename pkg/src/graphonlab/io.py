"""Matrix and graph file formats.

Matrices: CSV (``k`` rows of ``k`` comma-separated decimals) or JSON
``{"k": ..., "rho": ..., "entries": [[...]]}``. Floats are written with
``repr`` so values round-trip exactly.

Graphs: a header line ``"n m"`` followed by ``m`` lines ``"i j"`` with
1-based endpoints, ``i < j``, sorted lexicographically. An optional JSON
sidecar records labels (1-based) and the seed that produced the graph.
"""

import json
import os

import numpy as np

from .core import BlockMatrix, make_block_matrix
from .sampler import SampledGraph, from_edges


def _fmt(x):
    return repr(float(x))


def matrix_to_csv(m: BlockMatrix) -> str:
    return "".join(",".join(_fmt(v) for v in row) + "\n" for row in m.entries)


def matrix_to_json(m: BlockMatrix) -> str:
    obj = {"k": m.k, "rho": m.rho, "entries": m.entries.tolist()}
    return json.dumps(obj) + "\n"


def write_matrix(path, m: BlockMatrix):
    text = matrix_to_json(m) if str(path).endswith(".json") else matrix_to_csv(m)
    with open(path, "w") as fh:
        fh.write(text)


def parse_matrix_csv(text, rho=None) -> BlockMatrix:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    entries = np.array([[float(v) for v in r.split(",")] for r in rows])
    return make_block_matrix(entries, 1.0 if rho is None else rho)


def parse_matrix_json(text, rho=None) -> BlockMatrix:
    obj = json.loads(text)
    m = make_block_matrix(obj["entries"], obj.get("rho", 1.0) if rho is None else rho)
    if "k" in obj and int(obj["k"]) != m.k:
        raise ValueError(f"declared k={obj['k']} but entries are {m.k}x{m.k}")
    return m


def read_matrix(path, rho=None) -> BlockMatrix:
    with open(path) as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return parse_matrix_json(text, rho)
    return parse_matrix_csv(text, rho)


def graph_to_text(g: SampledGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{i + 1} {j + 1}" for i, j in g.edges.tolist())
    return "\n".join(lines) + "\n"


def parse_graph(text) -> SampledGraph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    n, m = int(lines[0][0]), int(lines[0][1])
    edges = np.array([[int(a) - 1, int(b) - 1] for a, b in lines[1:]], dtype=np.int64).reshape(-1, 2)
    if len(edges) != m:
        raise ValueError(f"header says {m} edges, found {len(edges)}")
    return from_edges(n, edges)


def write_graph(path, g: SampledGraph, seed=None):
    with open(path, "w") as fh:
        fh.write(graph_to_text(g))
    if g.labels is not None or seed is not None:
        side = {"n": g.n}
        if g.labels is not None:
            side["labels"] = [int(x) + 1 for x in g.labels]
        if seed is not None:
            side["seed"] = {"seed": seed.seed, "stream": seed.stream}
        with open(os.fspath(path) + ".json", "w") as fh:
            json.dump(side, fh)
            fh.write("\n")


def read_graph(path) -> SampledGraph:
    with open(path) as fh:
        return parse_graph(fh.read())
