"""
Graphviz DOT schematic of a block boundary.

Each boundary circle becomes one cycle. Exit edges are drawn red and bold,
entrance edges blue and dashed; n_minus vertices are filled red, n_plus
vertices filled blue and corners drawn as boxes. Spines are dotted grey
chords. Presentation only: nothing reads the output back.

The graph layout lives in ``templates/block.dot.jinja2``.
"""

from functools import lru_cache
from pathlib import Path
from typing import Any, Union

from jinja2 import Environment, PackageLoader, Template, TemplateNotFound

from conley_surf.core.exceptions import ConleySurfError
from conley_surf.models.block import IsolatingBlock
from conley_surf.services.block_service import describe

TEMPLATE_NAME = "block.dot.jinja2"

EXIT_STYLE = 'color="#c0392b", penwidth=2'
ENTRANCE_STYLE = 'color="#2471a3", style=dashed'
SPINE_STYLE = 'color="#7f8c8d", style=dotted, constraint=false'


def dot_quote(value: Any) -> str:
    """Quote a value as a DOT string identifier."""
    text = str(value).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{text}"'


@lru_cache
def load_template() -> Template:
    """
    Load the packaged DOT template.

    Raises:
        ConleySurfError: If the template is missing from the installation
    """
    env = Environment(
        loader=PackageLoader("conley_surf", "templates"),
        autoescape=False,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["dot_quote"] = dot_quote
    try:
        return env.get_template(TEMPLATE_NAME)
    except TemplateNotFound as exc:
        raise ConleySurfError(f"Template does not exist: {TEMPLATE_NAME}", code="TEMPLATE_NOT_FOUND") from exc


def _vertex_attrs(b: IsolatingBlock, v: int) -> str:
    attrs = [f"label={dot_quote(v)}"]
    if v in b.corners:
        attrs.append("shape=box")
    if v in b.n_minus.vertex_set:
        attrs.append('style=filled, fillcolor="#f5b7b1"')
    elif v in b.n_plus.vertex_set:
        attrs.append('style=filled, fillcolor="#aed6f1"')
    return ", ".join(attrs)


def block_to_dot(b: IsolatingBlock) -> str:
    """
    Render the block boundary as an undirected DOT graph.

    Raises:
        InvalidBlockError: If the block is invalid
    """
    summary = describe(b)
    circles = []
    for index, circle in enumerate(summary.circles):
        count = len(circle.vertices)
        circles.append({
            "label": f"circle {index}: {circle.labels}",
            "nodes": [{"id": v, "attrs": _vertex_attrs(b, v)} for v in circle.vertices],
            "edges": [
                {
                    "a": circle.vertices[i],
                    "b": circle.vertices[(i + 1) % count],
                    "style": EXIT_STYLE if label == "o" else ENTRANCE_STYLE,
                }
                for i, label in enumerate(circle.labels)
            ],
        })

    return load_template().render(
        name=b.name,
        title=f"{b.name}: {summary.signature.name}, u={summary.census.u}, u_c={summary.census.u_c}",
        circles=circles,
        spine_edges=[pair for spine in b.spines for pair in zip(spine.path, spine.path[1:])],
        spine_style=SPINE_STYLE,
    )


def write_dot(b: IsolatingBlock, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.write_text(block_to_dot(b), encoding="utf-8")
    return target
