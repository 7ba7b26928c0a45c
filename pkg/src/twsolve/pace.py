"""PACE-2017 text formats plus the certificate document.

.gr:   'c ...' comments, one 'p tw <n> <m>' header, then <m> lines 'u v'.
.td:   's td <bags> <maxbag> <n>' header, 'b <i> <v...>' bag lines,
       then bag-index pairs as tree edges.
cert:  's cert <width>', a full .td section, 's obs <n> <m>' with the
       obstruction's edge lines, then one 'w <i> <v...>' witness line per
       obstruction vertex listing its preimage in the original graph.

Parsers reject malformed headers, out-of-range ids, duplicate edges, and
count mismatches with the offending line number.
"""

from __future__ import annotations

from .decomposition import TreeDecomposition, validate
from .errors import DecompositionError, ParseError
from .graph import Contractor, Graph
from .solver import Certificate


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def parse_gr(text: str) -> Graph:
    """Parse a .gr document into a Graph."""
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, parts in _tokens(text):
        if parts[0] == "p":
            if n is not None:
                raise ParseError("second problem header", lineno)
            if len(parts) != 4 or parts[1] != "tw":
                raise ParseError(f"malformed header {' '.join(parts)!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer counts in header", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("negative counts in header", lineno)
        else:
            if n is None:
                raise ParseError("edge line before header", lineno)
            if len(parts) != 2:
                raise ParseError(f"malformed edge line {' '.join(parts)!r}", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("non-integer vertex id", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex id out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(f"duplicate edge {key}", lineno)
            seen.add(key)
            edges.append(key)
    if n is None:
        raise ParseError("missing 'p tw' header")
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    return Graph(n, edges)


def emit_gr(g: Graph, comments: tuple[str, ...] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p tw {g.n} {g.num_edges()}")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def emit_td(g: Graph, t: TreeDecomposition) -> str:
    """Serialize a decomposition; refuses invalid input."""
    ok, report = validate(g, t)
    if not ok:
        raise DecompositionError(f"refusing to emit invalid decomposition: {report}")
    lines = [f"s td {len(t.bags)} {t.width() + 1} {g.n}"]
    for i, bag in enumerate(t.bags, start=1):
        lines.append("b " + " ".join(str(v) for v in [i] + sorted(bag)))
    for a, b in sorted(t.tree_edges):
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, parts in _tokens(text):
        if parts[0] == "s":
            if header is not None:
                raise ParseError("second solution header", lineno)
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError(f"malformed header {' '.join(parts)!r}", lineno)
            header = tuple(int(x) for x in parts[2:])
        elif parts[0] == "b":
            if header is None:
                raise ParseError("bag line before header", lineno)
            idx = int(parts[1])
            if not (1 <= idx <= header[0]) or idx in bags:
                raise ParseError(f"bad or repeated bag id {idx}", lineno)
            bags[idx] = frozenset(int(x) for x in parts[2:])
        else:
            if header is None:
                raise ParseError("edge line before header", lineno)
            if len(parts) != 2:
                raise ParseError("malformed tree edge line", lineno)
            a, b = int(parts[0]), int(parts[1])
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise ParseError("tree edge references unknown bag", lineno)
            edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing 's td' header")
    if len(bags) != header[0]:
        raise ParseError(f"header declares {header[0]} bags, found {len(bags)}")
    ordered = [bags[i] for i in range(1, header[0] + 1)]
    t = TreeDecomposition(ordered, edges)
    if ordered and t.width() + 1 != header[1]:
        raise ParseError(
            f"header declares max bag size {header[1]}, bags give {t.width() + 1}"
        )
    return t


def emit_certificate(g: Graph, cert: Certificate) -> str:
    """Serialize the full certificate: width, decomposition, obstruction,
    and the witness preimages (one line per obstruction vertex)."""
    h = cert.obstruction
    lines = [f"s cert {cert.width}"]
    lines.append(emit_td(g, cert.decomposition).rstrip("\n"))
    lines.append(f"s obs {h.n} {h.num_edges()}")
    lines.extend(f"{u} {v}" for u, v in h.edges())
    for w in range(1, h.n + 1):
        lines.append(
            "w " + " ".join(str(x) for x in [w] + sorted(cert.witness.preimage(w)))
        )
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, g: Graph) -> Certificate:
    """Parse a certificate document against its graph."""
    width = None
    td_lines: list[str] = []
    obs_header = None
    obs_edges: list[tuple[int, int]] = []
    preimages: dict[int, frozenset[int]] = {}
    section = "head"
    for lineno, parts in _tokens(text):
        if parts[0] == "s" and len(parts) >= 2 and parts[1] == "cert":
            if width is not None:
                raise ParseError("second certificate header", lineno)
            width = int(parts[2])
            section = "td"
        elif parts[0] == "s" and len(parts) >= 2 and parts[1] == "td":
            if section != "td":
                raise ParseError("unexpected td header", lineno)
            td_lines.append(" ".join(parts))
        elif parts[0] == "s" and len(parts) >= 2 and parts[1] == "obs":
            if len(parts) != 4:
                raise ParseError("malformed obstruction header", lineno)
            obs_header = (int(parts[2]), int(parts[3]))
            section = "obs"
        elif parts[0] == "w":
            if obs_header is None:
                raise ParseError("witness line before obstruction header", lineno)
            idx = int(parts[1])
            if not (1 <= idx <= obs_header[0]) or idx in preimages:
                raise ParseError(f"bad or repeated witness id {idx}", lineno)
            preimages[idx] = frozenset(int(x) for x in parts[2:])
        elif section == "td":
            td_lines.append(" ".join(parts))
        elif section == "obs":
            if len(parts) != 2:
                raise ParseError("malformed obstruction edge line", lineno)
            obs_edges.append((int(parts[0]), int(parts[1])))
        else:
            raise ParseError(f"unexpected line {' '.join(parts)!r}", lineno)
    if width is None:
        raise ParseError("missing 's cert' header")
    if obs_header is None:
        raise ParseError("missing 's obs' section")
    if len(obs_edges) != obs_header[1]:
        raise ParseError(
            f"obstruction declares {obs_header[1]} edges, found {len(obs_edges)}"
        )
    if len(preimages) != obs_header[0]:
        raise ParseError(
            f"obstruction has {obs_header[0]} vertices, found {len(preimages)} witness lines"
        )
    td = parse_td("\n".join(td_lines) + "\n")
    obstruction = Graph(obs_header[0], obs_edges)
    witness = Contractor(g, [preimages[i] for i in range(1, obs_header[0] + 1)])
    return Certificate(width, td, obstruction, witness)
