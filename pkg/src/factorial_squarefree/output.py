"""Rendering of result documents as JSON, CSV or plain text.

Column orders are fixed:

table            n, sigma0, two_pow_omega, status, in_S, probabilistic, discrepancy
scan *           n, p, kind, root, in_S
factor           prime, multiplicity, probable   (plus a trailing cofactor row if Partial)
verify           n, outcome, witness, in_S, consistent, source
"""

from __future__ import annotations

import csv
import io
import json

TABLE_COLUMNS = ("n", "sigma0", "two_pow_omega", "status", "in_S", "probabilistic", "discrepancy")
HIT_COLUMNS = ("n", "p", "kind", "root", "in_S")
FACTOR_COLUMNS = ("prime", "multiplicity", "probable")
VERDICT_COLUMNS = ("n", "outcome", "witness", "in_S", "consistent", "source")


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _csv(columns, records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        w.writerow([_cell(rec.get(c)) for c in columns])
    return buf.getvalue()


def to_csv(doc: dict) -> str:
    cmd = doc["command"]
    if cmd == "table":
        return _csv(TABLE_COLUMNS, doc["rows"])
    if cmd.startswith("scan"):
        return _csv(HIT_COLUMNS, doc["hits"])
    if cmd == "verify":
        return _csv(VERDICT_COLUMNS, [doc["verdict"]])
    if cmd == "factor":
        f = doc["factorization"]
        records = list(f["factors"])
        if f["cofactor"] is not None:
            records.append({"prime": f["cofactor"], "multiplicity": 1, "probable": None})
        return _csv(FACTOR_COLUMNS, records)
    raise ValueError(f"no CSV layout for {cmd}")


def to_text(doc: dict) -> str:
    cmd = doc["command"]
    lines = []
    if cmd == "table":
        lines.append(f"{'n':>4}  {'sigma0':>8}  {'2^omega':>8}  {'status':<8}  flags")
        for r in doc["rows"]:
            flags = []
            if r["in_S"]:
                flags.append("in S")
            if r["discrepancy"]:
                flags.append("differs from reference " + " & ".join(r["reference"]))
            if r["probabilistic"]:
                flags.append("probable prime factor")
            lines.append(
                f"{r['n']:>4}  {r['sigma0'] or '-':>8}  {r['two_pow_omega'] or '-':>8}  {r['status']:<8}  "
                + ", ".join(flags)
            )
    elif cmd.startswith("scan"):
        for h in doc["hits"]:
            what = f"p={h['p']}" if h["p"] is not None else f"m={h['root']}"
            lines.append(f"n={h['n']}  {what}  {h['kind']}{'' if h['in_S'] else '  OUTSIDE S'}")
        lines.append(f"{len(doc['hits'])} hit(s), {doc['summary']['violations']} outside S")
    elif cmd == "factor":
        f = doc["factorization"]
        lines.append(f"{f['value']} = {doc['pretty']}")
        lines.append(f"status: {f['status']}{' (probabilistic)' if f['probabilistic'] else ''}")
        if doc["sigma0"] is not None:
            lines.append(f"sigma0 = {doc['sigma0']}, 2^omega = {doc['two_pow_omega']}")
        sq = doc["squarefree"]
        lines.append(f"square-free: {sq['verdict']}" + (f" (p = {sq['witness']})" if sq["witness"] else ""))
    elif cmd == "verify":
        v = doc["verdict"]
        lines.append(f"n = {v['n']}: {v['outcome']}" + (f"({v['witness']})" if v["witness"] else ""))
        lines.append(f"in S: {v['in_S']}, consistent: {v['consistent']}, decided by: {v['source']}")
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    return {"json": to_json, "csv": to_csv, "text": to_text}[fmt](doc)
