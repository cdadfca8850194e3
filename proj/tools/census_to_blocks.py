#!/usr/bin/env python3
"""Convert a census block attribute table to the solver's lon/lat block CSV.

The input is any delimited text table with one row per block, for example the
attribute table of a TIGER/Line tabulation-block file exported to CSV, or a
gazetteer file. Each block needs an identifier, an interior point and a
population count. The output has the header

    block_id,lon,lat,population

and is meant for `powerdist solve --lonlat`.

    census_to_blocks.py tabblock.csv blocks.csv \
        --id GEOID20 --lon INTPTLON20 --lat INTPTLAT20 --pop POP20
"""

import argparse
import csv
import sys


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--id", default="GEOID20", help="block identifier column")
    p.add_argument("--lon", default="INTPTLON20", help="longitude column (degrees)")
    p.add_argument("--lat", default="INTPTLAT20", help="latitude column (degrees)")
    p.add_argument("--pop", default="POP20", help="population column")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--drop-empty", action="store_true", help="skip blocks with zero population")
    args = p.parse_args(argv)

    kept = 0
    with open(args.input, newline="", encoding="utf-8-sig") as src, \
            open(args.output, "w", newline="", encoding="utf-8") as dst:
        reader = csv.DictReader(src, delimiter=args.delimiter)
        missing = [c for c in (args.id, args.lon, args.lat, args.pop) if c not in (reader.fieldnames or [])]
        if missing:
            sys.exit(f"{args.input}: missing columns {', '.join(missing)}")
        writer = csv.writer(dst, lineterminator="\n")
        writer.writerow(["block_id", "lon", "lat", "population"])
        for line, row in enumerate(reader, start=2):
            try:
                lon = float(row[args.lon])
                lat = float(row[args.lat])
                pop = int(row[args.pop])
            except ValueError as e:
                sys.exit(f"{args.input}:{line}: {e}")
            if pop < 0:
                sys.exit(f"{args.input}:{line}: negative population")
            if pop == 0 and args.drop_empty:
                continue
            writer.writerow([row[args.id].strip(), repr(lon), repr(lat), pop])
            kept += 1
    print(f"wrote {kept} blocks to {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
