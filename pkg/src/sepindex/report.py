"""Analysis requests, reports, batch tables and serialization.

Rationals go over the wire as "num/den" strings, primes as integers,
the empty torsion set as []; nothing is ever a float. Field order in
JSON objects is fixed so identical requests always serialize to
identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import GuardExceeded, ParseError
from .git import classify_section_value, is_torus_semistable, is_torus_separable, kempf_one_ps
from .index import (
    DEFAULT_SUBSET_CAP,
    CharacterSupport,
    character_support,
    check_weak_bound,
    is_low_separable_index,
    separable_index,
)
from .intlinalg import IntMatrix, is_prime
from .reps import (
    DEFAULT_DIMENSION_CAP,
    DirectSum,
    Dual,
    ExteriorPower,
    Irreducible,
    Named,
    RepSpec,
    SymmetricPower,
    Tensor,
    expand,
    is_dominant,
    rep_height,
    spec_string,
)
from .rootdata import RootDatum, make_datum, weight_height

FORMATS = ("json", "csv", "text")
CSV_HEADER = "group,rep,dim,height,p_T,psi,weak_bound"

CATALOG_GROUPS = (("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("C", 3), ("G", 2))


def catalog_requests(prime: int | None = None) -> list["AnalysisRequest"]:
    """Standard and adjoint for each catalog group, where defined."""
    out = []
    for letter, rank in CATALOG_GROUPS:
        for name in ("standard", "adjoint"):
            if name == "standard" and letter not in ("A", "B", "C", "D"):
                continue
            out.append(AnalysisRequest(letter, rank, "weight", name, prime))
    return out


# ---------------------------------------------------------------------------
# Rep-spec text form

_TOKEN = re.compile(r"\s*([a-z]+|-?\d+|[(),;])")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def expect(self, symbol: str) -> None:
        tok, pos = self.next()
        if tok != symbol:
            raise ParseError(f"expected {symbol!r}, found {tok!r}", pos)

    def parse_int(self) -> int:
        tok, pos = self.next()
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected an integer, found {tok!r}", pos) from None

    def parse_expr(self) -> RepSpec:
        tok, pos = self.next()
        if re.fullmatch(r"-?\d+", tok):
            raise ParseError("a representation cannot start with a number; use hw(...)", pos)
        if tok in ("trivial", "standard", "adjoint"):
            return Named(tok)
        if tok == "hw":
            self.expect("(")
            coords = [self.parse_int()]
            while self.peek() and self.peek()[0] == ",":
                self.next()
                coords.append(self.parse_int())
            self.expect(")")
            return Irreducible(tuple(coords))
        if tok == "dual":
            self.expect("(")
            base = self.parse_expr()
            self.expect(")")
            return Dual(base)
        if tok in ("sum", "tensor"):
            self.expect("(")
            parts = [self.parse_expr()]
            while self.peek() and self.peek()[0] == ",":
                self.next()
                parts.append(self.parse_expr())
            self.expect(")")
            return DirectSum(tuple(parts)) if tok == "sum" else Tensor(tuple(parts))
        if tok in ("sym", "wedge"):
            self.expect("(")
            power = self.parse_int()
            self.expect(",")
            base = self.parse_expr()
            self.expect(")")
            cls = SymmetricPower if tok == "sym" else ExteriorPower
            return cls(power, base)
        raise ParseError(f"unknown representation constructor {tok!r}", pos)


def parse_rep_spec(text: str) -> RepSpec:
    parser = _Parser(text)
    spec = parser.parse_expr()
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok[0]!r}", tok[1])
    return spec


def parse_weight(text: str, rank: int | None = None) -> tuple[int, ...]:
    parts = text.split(",")
    coords = []
    pos = 0
    for part in parts:
        stripped = part.strip()
        if not re.fullmatch(r"-?\d+", stripped):
            raise ParseError(f"bad weight coordinate {part!r}", pos)
        coords.append(int(stripped))
        pos += len(part) + 1
    if rank is not None and len(coords) != rank:
        raise ParseError(f"expected {rank} coordinates, found {len(coords)}")
    return tuple(coords)


def parse_support(text: str, rank: int) -> list[tuple[int, ...]]:
    chunks = [c for c in text.split(";") if c.strip()]
    if not chunks:
        raise ParseError("empty support list")
    return [parse_weight(chunk, rank) for chunk in chunks]


def parse_lattice(text: str, rank: int) -> list[list[int]] | None:
    """None means the identity (weight lattice of the simply connected form)."""
    if text == "weight":
        return None
    if text == "root":
        from .rootdata import cartan_matrix_entries

        return [list(row) for row in cartan_matrix_entries_for_cli(text_rank=rank)]
    if text.startswith("matrix:"):
        entries = parse_weight(text[len("matrix:"):], rank * rank)
        return [list(entries[i * rank:(i + 1) * rank]) for i in range(rank)]
    raise ParseError(f"lattice must be weight, root, or matrix:<entries>, not {text!r}")


def cartan_matrix_entries_for_cli(text_rank: int):
    raise NotImplementedError  # replaced below; kept for a stable name


# ---------------------------------------------------------------------------
# Requests and reports


@dataclass(frozen=True)
class AnalysisRequest:
    type_letter: str
    rank: int
    lattice: str  # "weight" | "root" | "matrix:<entries>"
    rep: str      # rep-spec text form
    prime: int | None = None

    def datum(self) -> RootDatum:
        basis = _lattice_entries(self.lattice, self.type_letter, self.rank)
        return make_datum(self.type_letter, self.rank, basis)

    def rep_spec(self) -> RepSpec:
        return parse_rep_spec(self.rep)


def _lattice_entries(lattice: str, letter: str, rank: int):
    from .rootdata import cartan_matrix_entries

    if lattice == "weight":
        return None
    if lattice == "root":
        return cartan_matrix_entries(letter, rank)
    if lattice.startswith("matrix:"):
        entries = parse_weight(lattice[len("matrix:"):], rank * rank)
        return [list(entries[i * rank:(i + 1) * rank]) for i in range(rank)]
    raise ParseError(f"lattice must be weight, root, or matrix:<entries>, not {lattice!r}")


@dataclass(frozen=True)
class AnalysisReport:
    request: AnalysisRequest
    dim: int
    weight_count: int
    height: Fraction
    torsion_primes: tuple[int, ...]
    p_T: int
    psi: Fraction
    weak_bound: int
    weak_bound_ok: bool | None
    verdicts: tuple[tuple[str, bool], ...] | None


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den))


def analyze(request: AnalysisRequest,
            dimension_cap: int = DEFAULT_DIMENSION_CAP,
            subset_cap: int = DEFAULT_SUBSET_CAP,
            cache_dir: str | None = None) -> AnalysisReport:
    """Fully populated report; deterministic for identical requests."""
    if request.prime is not None and not is_prime(request.prime):
        raise ParseError(f"--prime must be a prime number, got {request.prime}")
    core = None
    if cache_dir is not None:
        core = _cache_load(cache_dir, request)
    if core is None:
        datum = request.datum()
        spec = request.rep_spec()
        ms = expand(datum, spec, cap=dimension_cap)
        idx = separable_index(datum, spec, dimension_cap=dimension_cap, subset_cap=subset_cap)
        core = AnalysisReport(
            request=replace(request, prime=None),
            dim=idx.dimension,
            weight_count=len(ms.distinct_weights()),
            height=idx.height,
            torsion_primes=tuple(sorted(idx.torsion_primes)),
            p_T=idx.p_T,
            psi=idx.psi,
            weak_bound=idx.weak_bound,
            weak_bound_ok=(idx.p_T <= idx.weak_bound) if idx.height >= 1 else None,
            verdicts=None,
        )
        if cache_dir is not None:
            _cache_store(cache_dir, request, core)
    if request.prime is None:
        return core
    p = request.prime
    verdicts = (
        ("low_height", core.height < p),
        ("low_separable_index", core.psi < p),
    )
    return replace(core, request=request, verdicts=verdicts)


def report_to_json_dict(report: AnalysisReport) -> dict:
    d = {
        "group": {"type": report.request.type_letter, "rank": report.request.rank},
        "lattice": report.request.lattice,
        "rep": report.request.rep,
        "prime": report.request.prime,
        "dim": report.dim,
        "weight_count": report.weight_count,
        "height": _frac_str(report.height),
        "torsion_primes": list(report.torsion_primes),
        "p_T": report.p_T,
        "psi": _frac_str(report.psi),
        "weak_bound": report.weak_bound,
        "weak_bound_ok": report.weak_bound_ok,
    }
    if report.verdicts is not None:
        d["verdicts"] = {k: v for k, v in report.verdicts}
    return d


def report_from_json_dict(d: dict) -> AnalysisReport:
    request = AnalysisRequest(
        type_letter=d["group"]["type"],
        rank=d["group"]["rank"],
        lattice=d["lattice"],
        rep=d["rep"],
        prime=d.get("prime"),
    )
    verdicts = d.get("verdicts")
    return AnalysisReport(
        request=request,
        dim=d["dim"],
        weight_count=d["weight_count"],
        height=_parse_frac(d["height"]),
        torsion_primes=tuple(d["torsion_primes"]),
        p_T=d["p_T"],
        psi=_parse_frac(d["psi"]),
        weak_bound=d["weak_bound"],
        weak_bound_ok=d["weak_bound_ok"],
        verdicts=tuple((k, verdicts[k]) for k in ("low_height", "low_separable_index"))
        if verdicts is not None else None,
    )


def report_to_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_json_dict(report), indent=2)


def report_to_text(report: AnalysisReport) -> str:
    lines = [
        f"group            {report.request.type_letter}{report.request.rank}",
        f"lattice          {report.request.lattice}",
        f"rep              {report.request.rep}",
        f"dim              {report.dim}",
        f"distinct weights {report.weight_count}",
        f"height           {_frac_str(report.height)}",
        f"torsion primes   {list(report.torsion_primes)}",
        f"p_T              {report.p_T}",
        f"psi              {_frac_str(report.psi)}",
        f"weak bound       {report.weak_bound}"
        + ("" if report.weak_bound_ok is None else f" (holds: {report.weak_bound_ok})"),
    ]
    if report.verdicts is not None:
        lines.append(f"prime            {report.request.prime}")
        for name, value in report.verdicts:
            lines.append(f"{name:<16} {value}")
    return "\n".join(lines)


def _csv_cells(report: AnalysisReport) -> list[str]:
    return [
        f"{report.request.type_letter}{report.request.rank}",
        report.request.rep,
        str(report.dim),
        _frac_str(report.height),
        str(report.p_T),
        _frac_str(report.psi),
        str(report.weak_bound),
    ]


def batch_table(requests: Sequence[AnalysisRequest], fmt: str = "csv",
                dimension_cap: int = DEFAULT_DIMENSION_CAP,
                subset_cap: int = DEFAULT_SUBSET_CAP,
                cache_dir: str | None = None) -> str:
    """One row per request, in request order; failures become error cells."""
    rows = []
    for request in requests:
        try:
            rows.append(analyze(request, dimension_cap=dimension_cap,
                                subset_cap=subset_cap, cache_dir=cache_dir))
        except (ValueError, GuardExceeded) as exc:
            rows.append((request, str(exc)))
    if fmt == "json":
        payload = []
        for row in rows:
            if isinstance(row, AnalysisReport):
                payload.append(report_to_json_dict(row))
            else:
                request, message = row
                payload.append({
                    "group": {"type": request.type_letter, "rank": request.rank},
                    "rep": request.rep,
                    "error": message,
                })
        return json.dumps(payload, indent=2)
    if fmt == "csv":
        lines = [CSV_HEADER]
        for row in rows:
            if isinstance(row, AnalysisReport):
                lines.append(",".join(_csv_cells(row)))
            else:
                request, message = row
                safe = message.replace('"', "'")
                lines.append(",".join([
                    f"{request.type_letter}{request.rank}",
                    request.rep,
                    f'"error: {safe}"', "", "", "", "",
                ]))
        return "\n".join(lines)
    if fmt == "text":
        blocks = []
        for row in rows:
            if isinstance(row, AnalysisReport):
                blocks.append(report_to_text(row))
            else:
                request, message = row
                blocks.append(f"group {request.type_letter}{request.rank} rep {request.rep}\nerror: {message}")
        return "\n\n".join(blocks)
    raise ParseError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# Weight dumps and torus GIT checks


def dump_weights(request: AnalysisRequest,
                 dimension_cap: int = DEFAULT_DIMENSION_CAP) -> list[dict]:
    """(coords, multiplicity, height, dominant) per distinct weight, in
    lexicographic coordinate order."""
    datum = request.datum()
    ms = expand(datum, request.rep_spec(), cap=dimension_cap)
    rows = []
    for w in sorted(ms.entries):
        rows.append({
            "weight": list(w),
            "multiplicity": ms.entries[w],
            "height": _frac_str(weight_height(datum, w)),
            "dominant": is_dominant(datum, w),
        })
    return rows


def weights_to_text(rows: list[dict]) -> str:
    lines = ["weight | multiplicity | height | dominant"]
    for row in rows:
        coords = ",".join(str(x) for x in row["weight"])
        lines.append(f"({coords}) | {row['multiplicity']} | {row['height']} | {row['dominant']}")
    return "\n".join(lines)


def weights_to_csv(rows: list[dict]) -> str:
    lines = ["weight,multiplicity,height,dominant"]
    for row in rows:
        coords = " ".join(str(x) for x in row["weight"])
        lines.append(f"{coords},{row['multiplicity']},{row['height']},{row['dominant']}")
    return "\n".join(lines)


def git_check(type_letter: str, rank: int, support_text: str,
              prime: int | None = None, lattice: str = "weight") -> dict:
    """Torus GIT classification of an explicit support list."""
    datum = make_datum(type_letter, rank, _lattice_entries(lattice, type_letter, rank))
    weights = parse_support(support_text, rank)
    support = character_support(datum, weights)
    one_ps = kempf_one_ps(support)
    result = {
        "group": {"type": type_letter, "rank": rank},
        "support": [list(w) for w in support.sorted_characters()],
        "semistable": is_torus_semistable(support),
        "classification": classify_section_value(support),
        "kempf_one_ps": list(one_ps.coords) if one_ps is not None else None,
    }
    if prime is not None:
        if not is_prime(prime):
            raise ParseError(f"--prime must be a prime number, got {prime}")
        result["prime"] = prime
        result["torus_separable"] = is_torus_separable(support, prime)
    return result


def git_check_to_text(result: dict) -> str:
    lines = [
        f"group          {result['group']['type']}{result['group']['rank']}",
        "support        " + "; ".join(",".join(str(x) for x in w) for w in result["support"]),
        f"semistable     {result['semistable']}",
        f"classification {result['classification']}",
        f"kempf 1-PS     {result['kempf_one_ps']}",
    ]
    if "prime" in result:
        lines.append(f"separable mod {result['prime']}: {result['torus_separable']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Result cache: a pure memo, correctness never depends on it


def _cache_key(request: AnalysisRequest) -> str:
    datum = request.datum()
    spec = request.rep_spec()
    payload = json.dumps({
        "type": request.type_letter,
        "rank": request.rank,
        "lattice_basis": [list(row) for row in datum.lattice_basis.entries],
        "rep": spec_string(spec),
    }, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def _cache_load(cache_dir: str, request: AnalysisRequest) -> AnalysisReport | None:
    path = os.path.join(cache_dir, _cache_key(request) + ".json")
    try:
        with open(path, encoding="utf-8") as fh:
            return report_from_json_dict(json.load(fh))
    except (OSError, ValueError, KeyError):
        return None


def _cache_store(cache_dir: str, request: AnalysisRequest, core: AnalysisReport) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, _cache_key(request) + ".json")
    tmp = path + f".tmp{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(report_to_json(core))
        os.replace(tmp, path)
    except OSError:
        # the memo is optional; never let it break an analysis
        if os.path.exists(tmp):
            try:
                os.remove(tmp)
            except OSError:
                pass
