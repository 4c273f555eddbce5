"""Command-line front end and append-only result store.

Every computed table becomes one JSON object on one line of the store, with
sorted keys and no insignificant whitespace.  The record id is a SHA-256 of
the canonical word text plus the options that change the result, so asking
for the same computation twice is a no-op.

Verbs::

    compute     --word "2: 1 1 1" | --torus m n k | --cabling s [--framed --classical --reduced]
    family      --torus m n | --cabling s  --k a..b [--verify-les] [--check-torsion SPEC]
    table       ID [--format md|csv]
    diff        A B [--shift di dj]          (A, B are record ids or csv files)
    verify-les  --word W --at v | --torus m n k
    selftest

Exit codes: 0 success, 2 parse or usage error, 3 a required computation
hit the resource guard, 4 a verification failed.
"""

from __future__ import annotations

import argparse
import csv
import fcntl
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import __version__
from .cube import DEFAULT_MAX_GENERATORS, ResourceLimitExceeded, kauffman_bracket
from .diagram import (SmoothedBraidWord, WordError, component_count, flat_two_cabling_word,
                      oriented_writhe, parse_word, torus)
from .homology import (AbelianGroup, ClassicalHomologyTable, FramedHomologyTable,
                       HomologyError, euler_polynomial, full_homology, reduced_homology,
                       to_classical)
from .les import (FAIL, PASS, SKIP, CheckResult, LesError, LesReport, check_conjecture_vanishing,
                  diff_tables, les_instance, parse_torsion_spec, torus_les_instance,
                  verify_instance)

SCHEMA = 1
STORE_ENV = "KHTORSION_STORE"
DEFAULT_STORE = "khtorsion-store.jsonl"
KINDS = ("framed", "classical", "reduced")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SKIPPED = 3
EXIT_VIOLATION = 4


class StoreError(LookupError):
    pass


class UsageError(ValueError):
    pass


# -- records -------------------------------------------------------------------

def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def record_id(word: SmoothedBraidWord, kind: str, basepoint: Optional[int] = None) -> str:
    options = {"kind": kind}
    if kind == "reduced":
        options["basepoint"] = basepoint or 1
    payload = {"word": word.render(), "options": options}
    return hashlib.sha256(canonical(payload).encode()).hexdigest()


def _axes(kind: str) -> Tuple[str, str]:
    return ("a", "b") if kind == "framed" else ("i", "j")


def groups_payload(table, kind: str) -> List[dict]:
    x, y = _axes(kind)
    out = []
    for (p, q), g in sorted(table.nonzero().items()):
        out.append({x: p, y: q, "free_rank": g.free_rank,
                    "invariant_factors": list(g.torsion), "primary": list(g.primary)})
    return out


def make_record(word: SmoothedBraidWord, kind: str, table, wall_time: float,
                basepoint: Optional[int] = None) -> dict:
    rec = {
        "schema": SCHEMA,
        "id": record_id(word, kind, basepoint),
        "word": word.render(),
        "strands": word.strand_count,
        "writhe": oriented_writhe(word),
        "components": component_count(word),
        "kind": kind,
        "groups": groups_payload(table, kind),
        "wall_time": round(wall_time, 3),
        "engine_version": __version__,
    }
    if kind == "reduced":
        rec["basepoint"] = basepoint or 1
    return rec


def table_from_record(rec: dict):
    kind = rec["kind"]
    x, y = _axes(kind)
    groups = {(g[x], g[y]): AbelianGroup(g["free_rank"], tuple(g["invariant_factors"]))
              for g in rec["groups"]}
    if kind == "framed":
        return FramedHomologyTable(groups, rec.get("writhe"))
    return ClassicalHomologyTable(groups, reduced=(kind == "reduced"))


# -- store ---------------------------------------------------------------------

class ResultStore:
    """Line-delimited JSON records; lines are only ever appended."""

    def __init__(self, path: str):
        self.path = path

    @classmethod
    def resolve(cls, flag: Optional[str] = None) -> "ResultStore":
        return cls(flag or os.environ.get(STORE_ENV) or DEFAULT_STORE)

    def records(self) -> Iterator[dict]:
        if not os.path.exists(self.path):
            return
        with open(self.path, encoding="ascii") as fh:
            for n, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError as exc:
                    raise StoreError(f"{self.path}:{n}: {exc}") from None

    def find(self, rid: str) -> Optional[dict]:
        for rec in self.records():
            if rec.get("id") == rid:
                return rec
        return None

    def get(self, ref: str) -> dict:
        """Record by full id or unique prefix."""
        hits = [rec for rec in self.records() if rec.get("id", "").startswith(ref)]
        ids = {rec["id"] for rec in hits}
        if not ids:
            raise StoreError(f"no record {ref!r} in {self.path}")
        if len(ids) > 1:
            raise StoreError(f"record prefix {ref!r} is ambiguous")
        return hits[0]

    def append(self, rec: dict):
        line = canonical(rec) + "\n"
        with open(self.path, "a", encoding="ascii") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(line)
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)


# -- computing -----------------------------------------------------------------

@dataclass
class Outcome:
    records: Dict[str, dict] = field(default_factory=dict)
    tables: Dict[str, object] = field(default_factory=dict)


def _compute_tables(word: SmoothedBraidWord, kinds: Sequence[str], basepoint: int,
                    max_generators: Optional[int], reduce: bool) -> Dict[str, Tuple[object, float]]:
    """Tables for the requested kinds with their wall times; framed work is shared."""
    out = {}
    framed = None
    framed_time = 0.0
    for kind in kinds:
        start = time.perf_counter()
        if kind == "reduced":
            table = reduced_homology(word, basepoint, reduce=reduce,
                                     max_generators=max_generators)
            out[kind] = (table, time.perf_counter() - start)
            continue
        if framed is None:
            framed = full_homology(word, reduce=reduce, max_generators=max_generators)
            framed_time = time.perf_counter() - start
        table = framed if kind == "framed" else to_classical(framed)
        out[kind] = (table, framed_time + time.perf_counter() - start)
    return out


def compute_word(word: SmoothedBraidWord, kinds: Sequence[str], store: ResultStore,
                 max_generators: Optional[int] = DEFAULT_MAX_GENERATORS,
                 basepoint: int = 1, reduce: bool = True,
                 log: Callable[[str], None] = print,
                 precomputed: Optional[Dict[str, Tuple[object, float]]] = None) -> Outcome:
    """One record per kind, appended unless an identical id is already stored."""
    result = Outcome()
    todo = []
    for kind in kinds:
        rid = record_id(word, kind, basepoint)
        rec = store.find(rid)
        if rec is not None:
            log(f"{kind}: record {rid[:12]} already stored, skipping")
            result.records[kind] = rec
            result.tables[kind] = table_from_record(rec)
        else:
            todo.append(kind)
    if todo:
        tables = precomputed if precomputed is not None else \
            _compute_tables(word, todo, basepoint, max_generators, reduce)
        for kind in todo:
            table, wall = tables[kind]
            rec = make_record(word, kind, table, wall, basepoint)
            store.append(rec)
            log(f"{kind}: stored {rec['id'][:12]} ({wall:.2f}s)")
            result.records[kind] = rec
            result.tables[kind] = table
    return result


# -- rendering -----------------------------------------------------------------

def _grid(rec: dict):
    kind = rec["kind"]
    x, y = _axes(kind)
    cells = {(g[x], g[y]): str(AbelianGroup(g["free_rank"], tuple(g["invariant_factors"])))
             for g in rec["groups"]}
    if not cells:
        return kind, x, y, [], [], cells
    xs = [p for p, _ in cells]
    ys = [q for _, q in cells]
    cols = list(range(min(xs), max(xs) + 1))
    step = 2 if len({q % 2 for q in ys}) == 1 else 1
    rows = list(range(max(ys), min(ys) - 1, -step))
    return kind, x, y, cols, rows, cells


def render_table(rec: dict, fmt: str = "md") -> str:
    """Rows are the second grading (descending), columns the first."""
    kind, x, y, cols, rows, cells = _grid(rec)
    corner = f"{kind} {y}\\{x}"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([corner] + cols)
        for q in rows:
            writer.writerow([q] + [cells.get((p, q), "") for p in cols])
        return buf.getvalue()
    if fmt != "md":
        raise UsageError(f"unknown format {fmt!r}")
    lines = ["| " + " | ".join([corner.replace("\\", " \\ ")] + [str(p) for p in cols]) + " |",
             "|" + "---|" * (len(cols) + 1)]
    for q in rows:
        lines.append("| " + " | ".join([str(q)] + [cells.get((p, q), "") for p in cols]) + " |")
    return "\n".join(lines) + "\n"


def parse_table_csv(text: str) -> Tuple[str, dict]:
    """Inverse of the csv rendering: ``(kind, {bidegree: group})``."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not rows[0]:
        raise UsageError("empty csv table")
    kind = rows[0][0].split()[0]
    if kind not in KINDS:
        raise UsageError(f"csv table has unknown kind {kind!r}")
    cols = [int(c) for c in rows[0][1:]]
    groups = {}
    for row in rows[1:]:
        q = int(row[0])
        for p, cell in zip(cols, row[1:]):
            if cell.strip():
                groups[(p, q)] = AbelianGroup.parse(cell)
    return kind, groups


def _load_side(ref: str, store: ResultStore) -> Tuple[str, dict]:
    if os.path.exists(ref) and ref.endswith(".csv"):
        with open(ref, encoding="utf-8") as fh:
            return parse_table_csv(fh.read())
    rec = store.get(ref)
    return rec["kind"], table_from_record(rec).nonzero()


# -- word arguments ------------------------------------------------------------

def parse_k_range(text: str) -> List[int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad k range {text!r}; expected a..b") from None
    if hi < lo:
        raise UsageError(f"empty k range {text!r}")
    return list(range(lo, hi + 1))


def _word_from_args(args) -> SmoothedBraidWord:
    if getattr(args, "word", None) is not None:
        return parse_word(args.word)
    if getattr(args, "torus", None) is not None:
        m, n, k = args.torus
        return torus(m, n, k)
    if getattr(args, "cabling", None) is not None:
        return flat_two_cabling_word(args.cabling)
    raise UsageError("give --word, --torus or --cabling")


def _kinds_from_args(args) -> List[str]:
    kinds = [k for k in KINDS if getattr(args, k, False)]
    return kinds or ["classical"]


# -- verbs ---------------------------------------------------------------------

def cmd_compute(args) -> int:
    word = _word_from_args(args)
    store = ResultStore.resolve(args.store)
    print(f"word {word.render()}")
    try:
        out = compute_word(word, _kinds_from_args(args), store, args.max_generators,
                           args.basepoint)
    except ResourceLimitExceeded as exc:
        print(f"skipped: {exc}")
        return EXIT_SKIPPED
    for kind, rec in out.records.items():
        print(f"{kind} {rec['id']}")
    return EXIT_OK


@dataclass
class FamilyRunSpec:
    kind: str                      # "torus" or "cabling"
    params: Tuple[int, ...]
    ks: List[int]

    def twist(self, k: int) -> Tuple[int, int, int]:
        """``(m, n, twist)`` of the torus word for family member ``k``."""
        if self.kind == "torus":
            m, n = self.params
            return m, n, k
        (s,) = self.params
        return 4, 4 * s + 2, -4 * s - 2 + k

    def word(self, k: int) -> SmoothedBraidWord:
        return torus(*self.twist(k))

    def label(self, k: int) -> str:
        m, n, t = self.twist(k)
        return f"T^({t})({m},{n})"


def _family_worker(job):
    word, kinds, basepoint, max_generators = job
    try:
        return _compute_tables(word, kinds, basepoint, max_generators, True)
    except ResourceLimitExceeded as exc:
        return exc


def run_family(spec: FamilyRunSpec, kinds: Sequence[str], store: ResultStore,
               verify_les: bool = False, torsion_specs: Sequence[str] = (),
               conjecture: bool = False, max_generators: Optional[int] = DEFAULT_MAX_GENERATORS,
               jobs: int = 1, log: Callable[[str], None] = print) -> dict:
    """Compute every member, then run the attached checks; returns a report dict."""
    kinds = list(kinds)
    internal = kinds if "classical" in kinds else kinds + ["classical"]
    parsed_specs = [(text, parse_torsion_spec(text)) for text in torsion_specs]

    pending = {}
    for k in spec.ks:
        word = spec.word(k)
        missing = [kind for kind in internal if store.find(record_id(word, kind, 1)) is None]
        if missing:
            pending[k] = (word, missing, 1, max_generators)
    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            computed = dict(zip(pending, pool.map(_family_worker, pending.values())))
    else:
        computed = {k: _family_worker(job) for k, job in pending.items()}

    report = {"family": spec.kind, "params": list(spec.params), "ks": spec.ks,
              "members": [], "les": [], "torsion": [], "conjecture": []}
    tables: Dict[int, ClassicalHomologyTable] = {}
    skipped = set()
    for k in spec.ks:
        word = spec.word(k)
        got = computed.get(k)
        if isinstance(got, ResourceLimitExceeded):
            log(f"k={k} {spec.label(k)}: skipped ({got})")
            report["members"].append({"k": k, "status": SKIP, "detail": str(got)})
            skipped.add(k)
            continue
        out = compute_word(word, kinds, store, max_generators, log=lambda s: None,
                           precomputed=got)
        if got is not None:
            tables[k] = got["classical"][0]
        elif "classical" in out.tables:
            tables[k] = out.tables["classical"]
        else:
            tables[k] = table_from_record(store.find(record_id(word, "classical", 1)))
        ids = {kind: rec["id"] for kind, rec in out.records.items()}
        log(f"k={k} {spec.label(k)}: " + ", ".join(f"{kd} {i[:12]}" for kd, i in ids.items()))
        report["members"].append({"k": k, "status": "computed", "ids": ids})

    if verify_les:
        for k in spec.ks:
            if k in skipped or k - 1 in skipped:
                report["les"].append({"k": k, "status": SKIP})
                continue
            if k - 1 not in tables:
                continue
            inst = torus_les_instance(*spec.twist(k))
            try:
                les = verify_instance(inst, tables[k], tables[k - 1], max_generators)
            except ResourceLimitExceeded as exc:
                report["les"].append({"k": k, "status": SKIP, "detail": str(exc)})
                continue
            log(f"LES k={k} (D_A = k-1, v={inst.v}): " + les.render().replace("\n", "; "))
            report["les"].append({"k": k, "status": PASS if les.ok else FAIL,
                                  **les.to_record()})

    for text, (i_spec, j_spec, q) in parsed_specs:
        for k in spec.ks:
            bd = (i_spec[0] + i_spec[1] * k, j_spec[0] + j_spec[1] * k)
            name = f"{spec.label(k)} Z_{q} at {bd}"
            if k in skipped:
                res = CheckResult(name, SKIP, "resource guard")
            else:
                g = tables[k][bd]
                res = CheckResult(name, PASS if g.has_summand(q) else FAIL, f"H={g}")
            log(f"torsion {res.name}: {res.status} {res.detail}")
            report["torsion"].append({"spec": text, "k": k, "name": res.name,
                                      "status": res.status, "detail": res.detail})

    if conjecture:
        if spec.kind != "torus" or spec.params[1] != spec.params[0] + 2:
            raise UsageError("--check-conjecture needs a torus family T(m, m+2)")
        m = spec.params[0]
        for k in spec.ks:
            res = check_conjecture_vanishing(m, k, max_generators, tables)
            log(f"conjecture {res.name}: {res.status} {res.detail}")
            report["conjecture"].append({"k": k, "name": res.name, "status": res.status,
                                         "detail": res.detail, "data": res.data})

    checks = report["les"] + report["torsion"] + report["conjecture"]
    report["violations"] = sum(1 for c in checks if c["status"] == FAIL)
    report["skipped"] = len(skipped) + sum(1 for c in checks if c["status"] == SKIP)
    return report


def cmd_family(args) -> int:
    if args.torus is not None:
        spec = FamilyRunSpec("torus", tuple(args.torus), parse_k_range(args.k))
    else:
        spec = FamilyRunSpec("cabling", (args.cabling,), parse_k_range(args.k))
    store = ResultStore.resolve(args.store)
    report = run_family(spec, _kinds_from_args(args), store, args.verify_les,
                        args.check_torsion or (), args.check_conjecture,
                        args.max_generators, args.jobs)
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(canonical(report) + "\n")
    print(f"violations: {report['violations']}, skipped: {report['skipped']}")
    if report["violations"]:
        return EXIT_VIOLATION
    return EXIT_SKIPPED if report["skipped"] else EXIT_OK


def cmd_table(args) -> int:
    store = ResultStore.resolve(args.store)
    sys.stdout.write(render_table(store.get(args.id), args.format))
    return EXIT_OK


def cmd_diff(args) -> int:
    store = ResultStore.resolve(args.store)
    kind_a, ga = _load_side(args.a, store)
    kind_b, gb = _load_side(args.b, store)
    if kind_a != kind_b:
        raise UsageError(f"cannot compare a {kind_a} table with a {kind_b} table")
    differences = diff_tables(ClassicalHomologyTable(ga), ClassicalHomologyTable(gb),
                              tuple(args.shift))
    if not differences:
        print("identical")
    for bd, g1, g2 in differences:
        shifted = (bd[0] + args.shift[0], bd[1] + args.shift[1])
        print(f"{bd}: {g1}  vs  {shifted}: {g2}")
    return EXIT_VIOLATION if differences and args.strict else EXIT_OK


def cmd_verify_les(args) -> int:
    if args.torus is not None:
        inst = torus_les_instance(*args.torus)
    else:
        if args.at is None:
            raise UsageError("--word needs --at")
        inst = les_instance(parse_word(args.word), args.at)
    print(f"D   = {inst.D.render()}  (w={inst.w})")
    print(f"D_A = {inst.D_A.render()}  (w={inst.w_A})")
    print(f"D_B = {inst.D_B.render()}  (w={inst.w_B})")
    try:
        report = verify_instance(inst, max_generators=args.max_generators)
    except ResourceLimitExceeded as exc:
        print(f"skipped: {exc}")
        return EXIT_SKIPPED
    print(report.render())
    if args.json:
        print(canonical(report.to_record()))
    return EXIT_OK if report.ok else EXIT_VIOLATION


TREFOIL = {(0, 1): "Z", (0, 3): "Z", (2, 5): "Z", (3, 7): "Z_2", (3, 9): "Z"}
T34 = {(0, 5): "Z", (0, 7): "Z", (2, 9): "Z", (3, 13): "Z", (4, 11): "Z", (4, 13): "Z",
       (5, 15): "Z", (5, 17): "Z", (3, 11): "Z_2"}


def selftest_checks() -> List[CheckResult]:
    out = []

    def expect(name, word, expected, kind="classical"):
        if kind == "reduced":
            table = reduced_homology(word)
        else:
            table = to_classical(full_homology(word))
        got = {k: str(g) for k, g in table.nonzero().items()}
        out.append(CheckResult(name, PASS if got == expected else FAIL,
                               "" if got == expected else f"got {got}"))

    expect("trefoil", parse_word("2: 1 1 1"), TREFOIL)
    expect("T(3,4)", torus(3, 4), T34)
    expect("unknot", parse_word("1:"), {(0, -1): "Z", (0, 1): "Z"})
    expect("reduced unknot", parse_word("1:"), {(0, 0): "Z"}, "reduced")
    for text in ("2: 1 1 1", "3: 1 -2 1 -2"):
        w = parse_word(text)
        same = euler_polynomial(full_homology(w)) == kauffman_bracket(w)
        out.append(CheckResult(f"Euler = bracket on {text}", PASS if same else FAIL))
    les = verify_instance(les_instance(parse_word("2: 1 1 1"), 3))
    out.append(CheckResult("trefoil LES", PASS if les.ok else FAIL, les.render()))
    return out


def cmd_selftest(args) -> int:
    failed = 0
    for res in selftest_checks():
        print(f"{res.status.upper():5} {res.name}" + (f"  {res.detail}" if res.detail
                                                      and res.status != PASS else ""))
        failed += res.status == FAIL
    return EXIT_VIOLATION if failed else EXIT_OK


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--store", help=f"result store path (default ${STORE_ENV} "
                                        f"or ./{DEFAULT_STORE})")
    common.add_argument("--max-generators", type=int, default=DEFAULT_MAX_GENERATORS,
                        help="resource guard on the number of enhanced states")

    kinds = argparse.ArgumentParser(add_help=False)
    kinds.add_argument("--framed", action="store_true")
    kinds.add_argument("--classical", action="store_true")
    kinds.add_argument("--reduced", action="store_true")

    p = _Parser(prog="khtorsion", description="Integral Khovanov homology surveys.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", parents=[common, kinds], help="compute and store tables")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--word", help='braid word such as "3: 1 -2 e1 2"')
    src.add_argument("--torus", nargs=3, type=int, metavar=("M", "N", "K"))
    src.add_argument("--cabling", type=int, metavar="S")
    c.add_argument("--basepoint", type=int, default=1, help="strand of the reduced basepoint")
    c.set_defaults(func=cmd_compute)

    f = sub.add_parser("family", parents=[common, kinds], help="run a twist family")
    fam = f.add_mutually_exclusive_group(required=True)
    fam.add_argument("--torus", nargs=2, type=int, metavar=("M", "N"))
    fam.add_argument("--cabling", type=int, metavar="S")
    f.add_argument("--k", required=True, help="inclusive range a..b")
    f.add_argument("--verify-les", action="store_true")
    f.add_argument("--check-torsion", action="append", metavar="SPEC",
                   help='e.g. "9,25+k:Z4"; repeatable')
    f.add_argument("--check-conjecture", action="store_true")
    f.add_argument("--jobs", type=int, default=1)
    f.add_argument("--report", help="write the JSON report here")
    f.set_defaults(func=cmd_family, basepoint=1)

    t = sub.add_parser("table", parents=[common], help="render a stored table")
    t.add_argument("id")
    t.add_argument("--format", choices=("md", "csv"), default="md")
    t.set_defaults(func=cmd_table)

    d = sub.add_parser("diff", parents=[common], help="compare two tables")
    d.add_argument("a")
    d.add_argument("b")
    d.add_argument("--shift", nargs=2, type=int, default=[0, 0], metavar=("DI", "DJ"))
    d.add_argument("--strict", action="store_true", help="exit 4 if the tables differ")
    d.set_defaults(func=cmd_diff)

    v = sub.add_parser("verify-les", parents=[common], help="check one skein sequence")
    vs = v.add_mutually_exclusive_group(required=True)
    vs.add_argument("--word")
    vs.add_argument("--torus", nargs=3, type=int, metavar=("M", "N", "K"))
    v.add_argument("--at", type=int, help="1-based letter position of the crossing")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify_les)

    s = sub.add_parser("selftest", help="quick end-to-end checks")
    s.set_defaults(func=cmd_selftest)
    return p


def _glue_ranges(argv: Sequence[str]) -> List[str]:
    """``--k -4..4`` would be read as an option; glue it to its flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--k":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--k={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_glue_ranges(argv))
        return args.func(args)
    except (UsageError, WordError, LesError, HomologyError, StoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
