"""
Exporters
Renders command results as text, JSON, CSV or DOT.

CSV and text tables go through pandas; graphs come in as networkx graphs.
Every JSON document carries a schema_version so stored outputs can be
diffed across releases.
"""

import json
from pathlib import Path
from typing import Iterable, List, Optional

import networkx as nx
import pandas as pd

from src.tools.extremal import BOUNDS_COLUMNS, BoundsReport
from src.utils.errors import ConfigurationError

SCHEMA_VERSION = 1

HISTOGRAM_COLUMNS = ["distance", "count"]
EDGE_COLUMNS = ["source", "target"]


def bounds_frame(reports: Iterable[BoundsReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports], columns=BOUNDS_COLUMNS)


def histogram_frame(counts: Iterable[int]) -> pd.DataFrame:
    counts = list(counts)
    return pd.DataFrame({"distance": range(len(counts)), "count": counts},
                        columns=HISTOGRAM_COLUMNS)


def edges_frame(graph: nx.Graph) -> pd.DataFrame:
    """One row per undirected edge, endpoints ordered by CosetIndex."""
    index = nx.get_node_attributes(graph, "index")
    rows = []
    for a, b in graph.edges():
        if index.get(a, 0) > index.get(b, 0):
            a, b = b, a
        rows.append((index.get(a, 0), index.get(b, 0), a, b))
    rows.sort()
    return pd.DataFrame([(a, b) for _, _, a, b in rows], columns=EDGE_COLUMNS)


def graph_to_dot(graph: nx.Graph, name: str = "coset_graph") -> str:
    lines = [f"graph {name} {{"]
    for node in sorted(graph.nodes, key=lambda v: graph.nodes[v].get("index", 0)):
        lines.append(f'  "{node}";')
    for a, b in edges_frame(graph).itertuples(index=False):
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(command: str, data) -> str:
    document = {"schema_version": SCHEMA_VERSION, "command": command, "data": data}
    return json.dumps(document, indent=2, default=_json_default) + "\n"


def _json_default(value):
    # numpy scalars and Fractions that slipped through
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return {"num": value.numerator, "den": value.denominator, "decimal": float(value)}
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_text_table(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "(no rows)\n"
    return frame.to_string(index=False) + "\n"


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def render_frame(command: str, frame: pd.DataFrame, fmt: str) -> str:
    """Render a tabular result in text, CSV or JSON (records)."""
    if fmt == "csv":
        return to_csv(frame)
    if fmt == "json":
        return to_json(command, json.loads(frame.to_json(orient="records")))
    if fmt == "text":
        return to_text_table(frame)
    raise ConfigurationError(f"'{command}' cannot be rendered as {fmt}")


def render_mapping(command: str, values: dict, fmt: str,
                   extra_lines: Optional[List[str]] = None) -> str:
    """Render a flat name -> value record as 'name: value' lines, JSON or a one-row CSV."""
    if fmt == "json":
        return to_json(command, values)
    if fmt == "csv":
        return to_csv(pd.DataFrame([{k: _csv_cell(v) for k, v in values.items()}]))
    if fmt == "text":
        width = max((len(k) for k in values), default=0)
        lines = [f"{k.ljust(width)} : {_text_cell(v)}" for k, v in values.items()]
        return "\n".join(lines + list(extra_lines or [])) + "\n"
    raise ConfigurationError(f"'{command}' cannot be rendered as {fmt}")


def _text_cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def _csv_cell(value):
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value)
    return value


def write_output(text: str, path: Optional[str] = None) -> Optional[Path]:
    """Write to path when given, else to stdout."""
    if path is None:
        print(text, end="")
        return None
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)
    return target
