"""Command line front end.

Tableau files are JSON documents::

    {"format_version": 1, "kind": "lambda2", "entries": ["1/1", "0/1", ...],
     "metadata": {...}}

``lambda2`` documents carry 16 entries in the order
II,IX,IY,IZ,XI,XX,XY,XZ,YI,YX,YY,YZ,ZI,ZX,ZY,ZZ; ``mermin`` and
``inequality`` documents carry 10 entries in the order
II,XX,XY,XZ,YX,YY,YZ,ZX,ZY,ZZ (for an inequality the first entry is the
constant term).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from . import intersection as it
from . import lift as lf
from . import mermin as mm
from . import pauli as pc
from . import update as up
from .polytope import enumerate_vertices, exact_rank, tight_set

FORMAT_VERSION = 1
KIND_SIZES = {"lambda2": 16, "mermin": 10, "inequality": 10}
LABELS_16 = pc.LABELS
LABELS_10 = tuple(pc.name(a) for a in pc.NL_COORDS)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


class DocumentError(ValueError):
    pass


class UsageError(ValueError):
    pass


class DomainError(ValueError):
    pass


def fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.fullmatch(s.strip()):
        raise DocumentError(f"bad rational entry {s!r}")
    return Fraction(s.strip())


@dataclass(frozen=True)
class TableauDocument:
    kind: str
    entries: tuple[Fraction, ...]
    metadata: dict = field(default_factory=dict, compare=False)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.kind not in KIND_SIZES:
            raise DocumentError(f"unknown kind {self.kind!r}")
        if len(self.entries) != KIND_SIZES[self.kind]:
            raise DocumentError(f"{self.kind} needs {KIND_SIZES[self.kind]} entries, got {len(self.entries)}")

    def to_dict(self) -> dict:
        d = {
            "format_version": self.format_version,
            "kind": self.kind,
            "entries": [fmt(v) for v in self.entries],
        }
        if self.metadata:
            d["metadata"] = self.metadata
        return d

    @classmethod
    def from_dict(cls, d) -> "TableauDocument":
        if not isinstance(d, dict):
            raise DocumentError("document must be a JSON object")
        if d.get("format_version") != FORMAT_VERSION:
            raise DocumentError(f"unsupported format_version {d.get('format_version')!r}")
        entries = d.get("entries")
        if not isinstance(entries, list):
            raise DocumentError("entries must be a list")
        meta = d.get("metadata", {})
        if not isinstance(meta, dict):
            raise DocumentError("metadata must be an object")
        return cls(d.get("kind"), tuple(parse_rational(e) for e in entries), meta)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "TableauDocument":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"invalid JSON: {e}") from e
        return cls.from_dict(d)


def write_output(text: str, out: str | None) -> None:
    """Write to ``out`` atomically, or to stdout."""
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- enumerate -----------------------------------------------------------


def _orbit_labels(points, group, name_of) -> dict:
    orbits = it.classify_orbits(list(points), group)
    labels = {}
    for k, o in enumerate(orbits):
        lab = name_of(o, k)
        for x in o.members:
            labels[x] = lab
    return labels


def enumerate_records(target: str, group_name: str = "g", seed: int | None = None) -> tuple[str, list]:
    """Return (kind, [(entries, metadata)]) sorted by entries."""
    if target in ("chsh", "stabilizers") and seed is not None:
        raise UsageError("--seed-order applies to mp and mpbar only")
    if group_name == "cl2" and target != "stabilizers":
        raise UsageError("--group cl2 acts on 16-entry records only (use with stabilizers)")
    group = pc.group_cl2() if group_name == "cl2" else pc.group_g()

    if target == "mp":
        if seed is None:
            pts = [v.coords for v in mm.mp_vertices()]
        else:
            pts = list(enumerate_vertices(mm.mp_hpoly(), seed=seed).vertex_set())
        kinds = {v.coords: v.kind for v in mm.mp_vertices()}
        labels = _orbit_labels(pts, group, lambda o, k: kinds[o.representative] + "bar")
        return "mermin", [(x, {"orbit": labels[x]}) for x in sorted(pts)]
    if target == "mpbar":
        orbits = it.classify_mpbar_orbits(seed, group)
        recs = []
        for k, o in enumerate(orbits):
            for x in o.members:
                meta = {"orbit": f"O{k + 1}", "orbit_size": o.size}
                if o.tags:
                    meta["tags"] = list(o.tags)
                recs.append((x, meta))
        return "mermin", sorted(recs, key=lambda r: r[0])
    if target == "chsh":
        rows = [tuple(Fraction(v) for v in h.h) for h in mm.chsh_family()]
        labels = _orbit_labels(rows, group, lambda o, k: f"O{k + 1}")
        return "inequality", [(x, {"orbit": labels[x], "name": str(mm.chsh_from_row(x))}) for x in sorted(rows)]
    if target == "stabilizers":
        states = {tuple(Fraction(v) for v in s.row16()): s for s in pc.enumerate_stabilizer_groups()}
        labels = _orbit_labels(list(states), group, lambda o, k: f"O{k + 1}")
        return "lambda2", [
            (x, {"orbit": labels[x], "group": str(states[x]), "locality": states[x].kind})
            for x in sorted(states)
        ]
    raise UsageError(f"unknown target {target!r}")


def render_records(kind: str, records: list, fmt_name: str) -> str:
    if fmt_name == "json":
        docs = [TableauDocument(kind, tuple(x), meta).to_dict() for x, meta in records]
        return json.dumps({"format_version": FORMAT_VERSION, "count": len(docs), "records": docs}, indent=2)
    labels = LABELS_16 if KIND_SIZES[kind] == 16 else LABELS_10
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "orbit", *labels])
    for i, (x, meta) in enumerate(records):
        w.writerow([i, meta.get("orbit", ""), *(fmt(v) for v in x)])
    return buf.getvalue()


# -- pipeline ------------------------------------------------------------


def _vec(x) -> list[str]:
    return [fmt(v) for v in x]


def run_pipeline() -> tuple[dict, list[str]]:
    """All stages with fixture comparisons; returns (report, mismatches)."""
    bad: list[str] = []
    rep: dict = {}

    cond = it.verify_conditions()
    rep["conditions"] = {k: v for k, v in cond.passed.items()}
    rep["sandwich"] = _vec(cond.sandwich) if cond.sandwich else None
    if not cond.ok:
        bad.append("conditions")

    recs = it.reconstruct_ui()
    rep["u"] = []
    for r in recs:
        i = r.index
        rep["u"].append(
            {
                "index": i,
                "coords": _vec(r.vertex.coords),
                "p": fmt(r.vertex.p),
                "w": _vec(r.w),
                "joint_chsh": list(r.joint_chsh),
                "ranks": [r.certificate.mp_joint, r.certificate.with_cl, r.certificate.at_u],
                "mpbar_vertex": r.is_mpbar_vertex,
            }
        )
        if r.vertex.coords != it.U_FIXTURES[i] or r.vertex.p != it.P_FIXTURES[i] or not r.is_mpbar_vertex:
            bad.append(f"u{i}")

    rep["decompositions"] = []
    rep["lifts"] = []
    for i, u in enumerate(it.U_FIXTURES):
        cols = [lf.ProjectedDet(z) for z in lf.TABLE_COLUMNS[i]]
        if set(cols) != set(lf.tight_dets(u)):
            bad.append(f"R{i} columns")
        decs = lf.solve_decomposition(u, cols)
        qs = [d.q for d in decs]
        rep["decompositions"].append(
            {"index": i, "columns": [str(c) for c in cols], "solutions": [_vec(q) for q in qs], "unique": len(qs) == 1}
        )
        if lf.TABLE_Q[i] not in qs or (len(qs) == 1) != (i != 2):
            bad.append(f"q{i}")
        dec = lf.Decomposition(tuple(cols), lf.TABLE_Q[i])
        found = lf.search_lifts(dec)
        alphas = [f.alpha for f in found]
        chosen = verify_lift(dec, lf.LIFT_TABLE_ALPHA[i])
        printed = verify_lift(dec, lf.LISTED_ALPHA[i])
        rep["lifts"].append(
            {
                "index": i,
                "vertex_alphas": ["".join(map(str, a)) for a in alphas],
                "vertex_types": sorted({f.report.orbit_type for f in found}),
                "listed_alpha": "".join(map(str, lf.LISTED_ALPHA[i])),
                "listed_alpha_type": printed.orbit_type,
                "alpha": "".join(map(str, lf.LIFT_TABLE_ALPHA[i])),
                "vertex": _report_dict(chosen),
            }
        )
        if lf.LISTED_ALPHA[i] not in alphas or lf.LIFT_TABLE_ALPHA[i] not in alphas:
            bad.append(f"alpha{i}")
        expected = ("T3", "T5", "T6", "T7")[i]
        if chosen.orbit_type != expected or not chosen.degenerate or chosen.tableau != lf.FIXTURES[expected]:
            bad.append(f"lift{i}")
    return rep, bad


def verify_lift(dec, alpha):
    return lf.verify_lambda_vertex(lf.classical_lift(dec, alpha))


def _report_dict(r: lf.LambdaVertexReport) -> dict:
    return {
        "tableau": _vec(r.tableau),
        "feasible": r.feasible,
        "tight_count": r.tight_count,
        "tight_rank": r.tight_rank,
        "is_vertex": r.is_vertex,
        "degenerate": r.degenerate,
        "orbit_type": r.orbit_type,
    }


# -- verify and update ---------------------------------------------------


def verify_document(doc: TableauDocument) -> dict:
    x = doc.entries
    if doc.kind == "lambda2":
        if x[0] != 1:
            raise DocumentError("lambda2 tableau needs x_II = 1")
        return {"kind": "lambda2", **_report_dict(lf.verify_lambda_vertex(x))}
    if doc.kind == "mermin":
        if x[0] != 1:
            raise DocumentError("mermin tableau needs x_II = 1")
        out: dict = {"kind": "mermin"}
        for key, hp in (("mp", mm.mp_hpoly()), ("mpbar", mm.mpbar_hpoly())):
            feas = hp.contains(x)
            entry = {"feasible": feas}
            if feas:
                z = tight_set(hp, x)
                entry["tight_count"] = len(z)
                entry["tight_rank"] = exact_rank(hp.subset(sorted(z)))
                entry["is_vertex"] = entry["tight_rank"] == 9
            out[key] = entry
        return out
    h = tuple(x)
    fams = []
    if h in {tuple(Fraction(v) for v in r) for r in mm.chsh_hpoly().rows}:
        fams.append("chsh")
    if h in {tuple(Fraction(v) for v in r) for r in mm.nn_hpoly().rows}:
        fams.append("nn")
    if h in {tuple(Fraction(v) for v in r) for r in mm.mp_hpoly().rows}:
        fams.append("mp")
    return {"kind": "inequality", "families": fams}


def _known_mixture(x):
    """A deterministic decomposition of ``x`` if it is a deterministic vertex or a built-in lift."""
    for d in lf.all_det_vertices():
        if d.tableau == x:
            return [(Fraction(1), d)]
    for i, u in enumerate(it.U_FIXTURES):
        dec = lf.Decomposition(tuple(lf.ProjectedDet(z) for z in lf.TABLE_COLUMNS[i]), lf.TABLE_Q[i])
        for alpha in (lf.LIFT_TABLE_ALPHA[i], lf.LISTED_ALPHA[i]):
            if lf.classical_lift(dec, alpha) == x:
                return [(w, p.pair[0] if a else p.pair[1]) for (p, w), a in zip(dec.active, alpha)]
    return None


def _ops(terms) -> list[dict]:
    return [
        {"weight": fmt(w), "chi": {pc.name(a): g for a, g in op.chi}}
        for w, op in terms
    ]


def update_document(doc: TableauDocument, label: str, outcome: int) -> dict:
    if doc.kind != "lambda2":
        raise DocumentError("update needs a lambda2 document")
    x = doc.entries
    if x[0] != 1:
        raise DocumentError("lambda2 tableau needs x_II = 1")
    try:
        a = pc.label(label)
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad Pauli label {label!r}") from e
    if a == pc.IDENTITY:
        raise UsageError("label must not be II")
    if outcome not in (0, 1):
        raise UsageError("outcome must be 0 or 1")
    if not lf.lambda2_hpoly().contains(x):
        raise DomainError("tableau is not in Lambda_2")
    y = up.conjugate_tableau(x, a, outcome)
    oracle = up.oracle_conjugate(x, a, outcome)
    p = up.born_probability(x, a, outcome)
    out = {
        "label": pc.name(a),
        "outcome": outcome,
        "probability": fmt(p),
        "post": _vec(y),
        "oracle_agrees": y == oracle and y[0] == p,
    }
    if p:
        norm = tuple(v / p for v in y)
        out["normalized"] = _vec(norm)
        out["hull"] = _ops(up.hull_decomposition(norm, a, outcome))
    mix = _known_mixture(x)
    if mix is not None:
        res = up.update_mixture(mix, a, outcome)
        out["rule"] = {
            "probability": fmt(res.probability),
            "post": _ops(res.post),
            "remainder": _vec(res.remainder),
            "agrees": res.tableau == oracle,
        }
    return out


# -- argument parsing ----------------------------------------------------

_EPILOG = """\
label order (16 entries, lambda2): II,IX,IY,IZ,XI,XX,XY,XZ,YI,YX,YY,YZ,ZI,ZX,ZY,ZZ
label order (10 entries, mermin/inequality): II,XX,XY,XZ,YX,YY,YZ,ZX,ZY,ZZ
entries are exact rationals written "p/q".
exit codes: 0 ok, 1 fixture mismatch, 2 usage or parse error, 3 domain error
"""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lambda2dd",
        description="Exact vertex enumeration and updates for the two-qubit Lambda polytope.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output here (atomically) instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[common], help="list vertices, CHSH rows or stabilizer states",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    e.add_argument("target", choices=["mp", "mpbar", "chsh", "stabilizers"])
    e.add_argument("--format", choices=["json", "csv"], default="json")
    e.add_argument("--group", choices=["g", "cl2"], default="g", help="orbit classification group")
    e.add_argument("--seed-order", type=int, metavar="N", help="shuffle the row insertion order with seed N")

    sub.add_parser("pipeline", parents=[common], help="run every stage against the built-in fixtures")

    v = sub.add_parser("verify", parents=[common], help="report on a tableau document",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    v.add_argument("file")

    u = sub.add_parser("update", parents=[common], help="apply a Pauli measurement to a lambda2 tableau",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    u.add_argument("file")
    u.add_argument("label", help="two-letter Pauli label, e.g. XI")
    u.add_argument("outcome", type=int, choices=[0, 1])
    return ap


def _load(path: str) -> TableauDocument:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from e
    return TableauDocument.loads(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "enumerate":
            kind, recs = enumerate_records(args.target, args.group, args.seed_order)
            write_output(render_records(kind, recs, args.format), args.out)
            return EXIT_OK
        if args.command == "pipeline":
            rep, bad = run_pipeline()
            rep["mismatches"] = bad
            write_output(json.dumps(rep, indent=2), args.out)
            return EXIT_MISMATCH if bad else EXIT_OK
        if args.command == "verify":
            write_output(json.dumps(verify_document(_load(args.file)), indent=2), args.out)
            return EXIT_OK
        if args.command == "update":
            res = update_document(_load(args.file), args.label, args.outcome)
            write_output(json.dumps(res, indent=2), args.out)
            return EXIT_OK
    except (DocumentError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
