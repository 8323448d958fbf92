#!/usr/bin/env python3
"""Compares facade SERVICE results with rdflib over the same triplified data.

Each case triplifies a fixture with the CLI, loads the N-Triples into rdflib,
evaluates the inner pattern there, and checks the multiset of solutions
against `facadex query` running the pattern inside a SERVICE clause.
Exits 77 when rdflib is missing so ctest reports the test as skipped.
"""
import collections
import json
import os
import subprocess
import sys
import tempfile

try:
    import rdflib
except ImportError:
    sys.exit(77)

PREFIXES = """PREFIX fx: <http://sparql.xyz/facade-x/ns/>
PREFIX xyz: <http://sparql.xyz/facade-x/data/>
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
"""
XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"

PATTERNS = [
    "?s ?p ?o",
    "?r a fx:Root ; ?slot ?row . ?row ?k ?v",
    "?s ?p ?o FILTER(isLiteral(?o) && STRLEN(STR(?o)) > 3)",
    "?s rdf:_1 ?o OPTIONAL { ?o ?q ?w }",
    "{ ?s rdf:_1 ?o } UNION { ?s rdf:_2 ?o }",
    "?s ?p ?o MINUS { ?s a fx:Root }",
]

CASES = [
    ("guide/artwork_data.csv", ["--csv.headers", "true"], "csv.headers=true,",
     ["?row xyz:id ?id ; xyz:title ?t FILTER(CONTAINS(?t, 'Figure'))"]),
    ("guide/artworks/A00003.json", [], "", ["?x xyz:name ?n ; xyz:id ?i"]),
    ("cli/malevich.json", [], "", ["?x xyz:places ?p . ?p ?i ?pl . ?pl xyz:name ?n"]),
    ("cli/record.xml", [], "", ["?e a ?type ; xyz:hint ?h"]),
    ("cli/words.txt", [], "", ["?r ?slot ?w FILTER(?w != fx:Root)"]),
]


def norm_rdflib(term):
    if term is None:
        return None
    if isinstance(term, rdflib.BNode):
        return "_:"
    if isinstance(term, rdflib.URIRef):
        return "<%s>" % term
    lang = term.language.lower() if term.language else ""
    dt = str(term.datatype) if term.datatype else ("" if lang else XSD_STRING)
    return (str(term), dt, lang)


def norm_json(cell):
    if cell is None:
        return None
    if cell["type"] == "bnode":
        return "_:"
    if cell["type"] == "uri":
        return "<%s>" % cell["value"]
    lang = cell.get("xml:lang", "").lower()
    dt = cell.get("datatype", "" if lang else XSD_STRING)
    return (cell["value"], dt, lang)


def multiset(rows):
    return collections.Counter(tuple(sorted((k, v) for k, v in r.items() if v is not None)) for r in rows)


def main(cli, fixtures):
    failures = 0
    total = 0
    with tempfile.TemporaryDirectory() as tmp:
        for rel, flags, options, extra in CASES:
            path = os.path.join(fixtures, rel)
            nt = subprocess.run([cli, "triplify", path, "--format", "ntriples", *flags],
                                check=True, capture_output=True, text=True).stdout
            g = rdflib.Graph()
            g.parse(data=nt, format="nt")
            for pattern in PATTERNS + extra:
                total += 1
                expected = []
                res = g.query(PREFIXES + "SELECT * WHERE { %s }" % pattern)
                for row in res:
                    expected.append({str(v): norm_rdflib(row[v]) for v in res.vars})
                qfile = os.path.join(tmp, "q.rq")
                with open(qfile, "w", encoding="utf-8") as f:
                    f.write(PREFIXES + "SELECT * WHERE { SERVICE <x-sparql-anything:%slocation=%s> { %s } }"
                            % (options, path, pattern))
                out = subprocess.run([cli, "query", "-q", qfile, "-o", "sparql-results-json"],
                                     check=True, capture_output=True, text=True).stdout
                got = [{k: norm_json(v) for k, v in b.items()} for b in json.loads(out)["results"]["bindings"]]
                if multiset(got) != multiset(expected):
                    failures += 1
                    print("MISMATCH %s `%s`: %d vs rdflib %d" % (rel, pattern, len(got), len(expected)))
    print("%d/%d cases agree with rdflib %s" % (total - failures, total, rdflib.__version__))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
