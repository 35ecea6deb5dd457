#!/usr/bin/env python3
"""Regenerate data/iso3166.tsv from the Debian iso-codes tables shipped with pycountry.

Usage: python3 tools/gen_registry.py > data/iso3166.tsv

Line format: CODE<TAB>Name<TAB>alias1|alias2|...
An alias prefixed with '!' is shared by several codes and resolves to an
ambiguity error instead of a single code.
"""
import collections
import sys

import pycountry
from importlib.metadata import version


def ampersand_variants(name):
    return [name.replace(" and ", " & ")] if " and " in name else []


def main():
    rows = []
    for c in sorted(pycountry.countries, key=lambda c: c.alpha_2):
        aliases = [c.alpha_3]
        for attr in ("official_name", "common_name"):
            v = getattr(c, attr, None)
            if v and v != c.name and v not in aliases:
                aliases.append(v)
        for v in ampersand_variants(c.name):
            if v not in aliases:
                aliases.append(v)
        rows.append((c.alpha_2, c.name, aliases))
    for s in sorted(pycountry.subdivisions, key=lambda s: s.code):
        rows.append((s.code, s.name, []))

    owners = collections.defaultdict(set)
    for code, _, aliases in rows:
        for a in aliases:
            owners[a.casefold()].add(code)

    out = sys.stdout
    out.write("# ISO 3166-1 and ISO 3166-2 registry\n")
    out.write("# edition: Debian iso-codes as packaged in pycountry %s\n" % version("pycountry"))
    out.write("# format: CODE<TAB>Name<TAB>alias|alias ('!' marks an alias shared by several codes)\n")
    for code, name, aliases in rows:
        marked = ["!" + a if len(owners[a.casefold()]) > 1 else a for a in aliases]
        out.write("%s\t%s\t%s\n" % (code, name, "|".join(marked)))


if __name__ == "__main__":
    main()
