#!/usr/bin/env python3
"""Parses each query file with rdflib's SPARQL 1.1 grammar. Exit 1 on any rejection."""
import sys

try:
    from rdflib.plugins.sparql.parser import parseQuery
except ImportError:
    sys.exit(77)


def main(paths):
    bad = 0
    for path in paths:
        with open(path, encoding="utf-8") as f:
            text = f.read()
        try:
            parseQuery(text)
        except Exception as e:  # pyparsing raises several exception types
            bad += 1
            print(f"{path}: {e}")
            print(text)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
