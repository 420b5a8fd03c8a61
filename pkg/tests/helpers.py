"""Shared sample data, reference oracles and hypothesis strategies."""
from __future__ import annotations

from collections import deque
from pathlib import Path

from hypothesis import strategies as st

from quadfuse.canonical import extract_links
from quadfuse.model import ConflictCluster, Node, Quad, bnode, literal, uri
from quadfuse.nquads import parse_file
from quadfuse.policy import parse_policy
from quadfuse.quality import ScoreLookup

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "berlin"

DBPEDIA = uri("http://dbpedia.org")
FREEBASE = uri("http://rdf.freebase.com")
GEONAMES = uri("http://sws.geonames.org")
NYT = uri("http://data.nytimes.com")
ERR = uri("http://example.com/err")

BERLIN = uri("http://dbpedia.org/resource/Berlin")
GEO_LAT = uri("http://www.w3.org/2003/01/geo/wgs84_pos#lat")
GEO_LONG = uri("http://www.w3.org/2003/01/geo/wgs84_pos#long")
RDFS_LABEL = uri("http://www.w3.org/2000/01/rdf-schema#label")
RDF_TYPE = uri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
SCHEMA_CITY = uri("http://schema.org/City")
SCHEMA_PLACE = uri("http://schema.org/Place")
GEONAMES_FEATURE = uri("http://www.geonames.org/ontology#Feature")


PREFER = ("http://dbpedia.org/", "http://www.w3.org/")


def sample_inputs():
    """Data, metadata, links and policy from the bundled sample files."""
    default = uri("urn:default")
    data, _ = parse_file(DATA_DIR / "data.nq", default)
    metadata, _ = parse_file(DATA_DIR / "metadata.nq", default)
    link_quads, _ = parse_file(DATA_DIR / "links.nt", default)
    links, _ = extract_links(link_quads)
    policy = parse_policy((DATA_DIR / "policy.txt").read_text())
    return data, metadata, links, policy


def berlin_scores() -> ScoreLookup:
    """DBpedia preferred (0.9) over every other source (0.8)."""
    return ScoreLookup({DBPEDIA: 0.9, FREEBASE: 0.8, GEONAMES: 0.8, NYT: 0.8, ERR: 0.8})


def _quads(predicate: Node, rows) -> list[Quad]:
    return [Quad(BERLIN, predicate, obj if isinstance(obj, Node) else literal(obj), g) for obj, g in rows]


LATITUDE_ROWS = [
    ("52.5006", DBPEDIA),
    ("52.5167", NYT),
    ("52.5233", FREEBASE),
    ("52.52437", GEONAMES),
    ("13.4126", ERR),
]
LATITUDE_EXPECTED = {"52.5006": 0.72418, "52.5167": 0.64381, "52.5233": 0.64380,
                     "52.52437": 0.64380, "13.4126": 0.15610}

LONGITUDE_ROWS = [
    ("13.3989", DBPEDIA),
    ("13.4", NYT),
    ("13.41053", GEONAMES),
    ("13.4127", FREEBASE),
]
LONGITUDE_EXPECTED = {"13.3989": 0.89957, "13.4": 0.79965, "13.41053": 0.79963, "13.4127": 0.79956}

TYPE_ROWS = [
    (SCHEMA_CITY, DBPEDIA),
    (SCHEMA_CITY, FREEBASE),
    (SCHEMA_PLACE, DBPEDIA),
    (GEONAMES_FEATURE, GEONAMES),
]
TYPE_EXPECTED = {SCHEMA_CITY: 0.92, SCHEMA_PLACE: 0.90, GEONAMES_FEATURE: 0.80}

LABEL_ROWS = [
    ("Berlin", DBPEDIA),
    ("Berlin", FREEBASE),
    ("Berlin", GEONAMES),
    ("City_of_Berlin", FREEBASE),
    ("Berlin (Germany)", NYT),
]


def latitude_quads() -> list[Quad]:
    return _quads(GEO_LAT, LATITUDE_ROWS)


def longitude_quads() -> list[Quad]:
    return _quads(GEO_LONG, LONGITUDE_ROWS)


def type_quads() -> list[Quad]:
    return _quads(RDF_TYPE, TYPE_ROWS)


def label_quads() -> list[Quad]:
    return _quads(RDFS_LABEL, LABEL_ROWS)


# -- oracles ---------------------------------------------------------------------

def levenshtein_oracle(a: str, b: str) -> int:
    """Textbook full-matrix dynamic program."""
    rows, cols = len(a) + 1, len(b) + 1
    d = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        d[i][0] = i
    for j in range(cols):
        d[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[-1][-1]


def bfs_components(links) -> list[frozenset]:
    """Connected components of an undirected graph by breadth-first search."""
    adjacency: dict = {}
    for a, b in links:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)
    seen: set = set()
    components = []
    for start in adjacency:
        if start in seen:
            continue
        seen.add(start)
        queue, members = deque([start]), [start]
        while queue:
            for nxt in adjacency[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    members.append(nxt)
                    queue.append(nxt)
        components.append(frozenset(members))
    return components


# -- strategies ------------------------------------------------------------------

_iri_chars = st.characters(min_codepoint=0x21, max_codepoint=0x2FF, blacklist_categories=("Cc", "Zs"),
                           blacklist_characters='<>"{}|^`\\')
iris = st.builds(lambda tail: "http://example.org/" + tail, st.text(_iri_chars, max_size=12))
uris = iris.map(uri)
blanks = st.from_regex(r"[A-Za-z0-9][A-Za-z0-9_\-]{0,6}", fullmatch=True).map(bnode)
languages = st.from_regex(r"[a-zA-Z]{1,8}(-[a-zA-Z0-9]{1,8}){0,2}", fullmatch=True)
literals = st.one_of(
    st.text(max_size=20).map(literal),
    st.builds(lambda t, d: literal(t, d), st.text(max_size=10), iris),
    st.builds(lambda t, lang: literal(t, language=lang), st.text(max_size=10), languages),
)
nodes = st.one_of(uris, blanks, literals)
quads = st.builds(Quad, st.one_of(uris, blanks), uris, nodes, uris)


# -- random clusters (driven by a ``random.Random``) -----------------------------

SUBJECT = uri("http://example.org/s")
PREDICATE = uri("http://example.org/p")
_WORDS = ["Berlin", "Berlín", "berlin", "City", "", "Berlin (Germany)", "Prague", "Praha"]


def random_value(rng, family: str):
    if family == "number":
        return literal(rng.choice([f"{rng.uniform(-100, 100):.3f}", str(rng.randint(-5, 5)), "0", "1e3"]))
    if family == "string":
        return literal(rng.choice(_WORDS))
    if family == "date":
        return literal(f"20{rng.randint(10, 14)}-0{rng.randint(1, 9)}-1{rng.randint(0, 9)}")
    return uri(f"http://example.org/v{rng.randint(0, 4)}")


def random_graphs(rng, k: int) -> list:
    return [uri(f"http://example.org/g{i}") for i in range(k)]


def random_scores(rng, graphs) -> ScoreLookup:
    def score():
        r = rng.random()
        return 0.0 if r < 0.1 else 1.0 if r < 0.2 else round(rng.random(), 3)
    return ScoreLookup({g: score() for g in graphs})


def random_cluster(rng, max_quads: int = 8, max_graphs: int = 6):
    """A random conflict cluster plus a score table covering its graphs."""
    family = rng.choice(["number", "string", "date", "uri", "mixed"])
    pool = [random_value(rng, rng.choice(["number", "string", "date", "uri"]) if family == "mixed" else family)
            for _ in range(rng.randint(1, 4))]
    graphs = random_graphs(rng, rng.randint(1, max_graphs))
    quads = {Quad(SUBJECT, PREDICATE, rng.choice(pool), rng.choice(graphs)) for _ in range(rng.randint(1, max_quads))}
    return ConflictCluster.of(sorted(quads)), random_scores(rng, graphs)
