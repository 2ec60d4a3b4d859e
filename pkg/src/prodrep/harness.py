"""Command-line front end, sweeps and the append-only result cache.

Exit codes: 0 success, 1 a checked invariant failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import datetime as _dt
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import sympy

from . import __version__
from .acceptance import GROUPS, verify_all
from .characters import weil_verify
from .errors import ConfigInvalid, ProdRepError
from .ff import Field
from .poly import Poly, factor, format_poly, parse_poly, power_part, value_set
from .products import (
    Instance,
    build_instance,
    coset_construction,
    exact_Fk,
    greedy_star_set,
    remark3_construction,
    remark4_construction,
    star_check,
    structure_distance,
)
from .sumsets import m_record

M_TABLE_COLUMNS = ["k", "n", "s", "lower", "value", "upper", "method", "witness"]
FK_SWEEP_COLUMNS = [
    "q", "p", "m", "h", "k", "ell", "n", "s", "m_kns", "main_term",
    "value", "lower", "upper", "mode", "defect", "defect_over_sqrt_q",
]
WEIL_COLUMNS = ["q", "f", "char_index", "a", "magnitude", "bound", "pass"]


class AssertionFailed(Exception):
    pass


def _frac(x: Fraction | None) -> str | None:
    if x is None:
        return None
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def fingerprint(command: str, params: dict) -> str:
    return hashlib.sha256(dumps({"command": command, "params": params}).encode()).hexdigest()


class ResultCache:
    """Append-only JSON-lines store keyed by the fingerprint of (command, params).

    Each line holds fingerprint, command, params, payload, version, schema and
    timestamp.  With ``recheck`` every hit is recomputed and compared.
    """

    def __init__(self, path: str | Path | None, recheck: bool = False):
        self.path = Path(path) if path else None
        self.recheck = recheck
        self.entries: dict[str, dict] = {}
        if self.path and self.path.exists():
            for n, line in enumerate(self.path.read_text().splitlines(), 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    key = rec["fingerprint"]
                except (ValueError, KeyError) as exc:
                    raise AssertionFailed(f"cache line {n} is unreadable") from exc
                prev = self.entries.setdefault(key, rec)
                if dumps(prev["payload"]) != dumps(rec["payload"]):
                    raise AssertionFailed(f"cache has conflicting payloads for {key[:12]}")

    def has(self, command: str, params: dict) -> bool:
        return fingerprint(command, params) in self.entries

    def lookup(self, command: str, params: dict):
        return self.entries[fingerprint(command, params)]["payload"]

    def store(self, command: str, params: dict, payload):
        """Record a freshly computed payload; a differing existing entry is an error."""
        key = fingerprint(command, params)
        payload = json.loads(dumps(payload))
        hit = self.entries.get(key)
        if hit is not None:
            if dumps(hit["payload"]) != dumps(payload):
                raise AssertionFailed(f"cache entry {key[:12]} for {command} is not reproducible")
            return payload
        rec = {
            "fingerprint": key,
            "command": command,
            "params": params,
            "payload": payload,
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        }
        self.entries[key] = rec
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(dumps(rec) + "\n")
        return payload

    def get_or_compute(self, command: str, params: dict, compute=None):
        if self.has(command, params) and not self.recheck:
            return self.lookup(command, params)
        return self.store(command, params, compute() if compute else compute_cell(command, params))

    def recheck_all(self) -> list[str]:
        """Recompute every entry; returns fingerprints whose payload changed."""
        bad = []
        for key, rec in self.entries.items():
            fresh = json.loads(dumps(compute_cell(rec["command"], rec["params"])))
            if dumps(fresh) != dumps(rec["payload"]):
                bad.append(key)
        return bad


# -- payload builders


def field_info(p: int, m: int) -> dict:
    F = Field(p, m)
    return {
        **F.spec.to_json(),
        "q": F.q,
        "modulus": list(F.modulus),
        "generator": F.generator,
        "generator_coords": list(F.coords(F.generator)),
    }


def _field_and_poly(p: int, m: int, h: str) -> tuple[Field, Poly]:
    F = Field(p, m)
    return F, parse_poly(F, h)


def power_part_payload(p: int, m: int, h: str, seed: int = 0) -> dict:
    F, poly = _field_and_poly(p, m, h)
    pp = power_part(poly)
    fac = factor(poly, seed=seed)
    return {
        "q": F.q,
        "h": format_poly(poly),
        "C": pp.C,
        "f": format_poly(pp.f),
        "ell": pp.ell,
        "factors": [[format_poly(P), e] for P, e in fac.factors],
    }


def value_set_payload(p: int, m: int, h: str) -> dict:
    F, poly = _field_and_poly(p, m, h)
    vals = sorted(value_set(poly))
    return {"q": F.q, "h": format_poly(poly), "size": len(vals), "values": vals}


def _instance_payload(inst: Instance) -> dict:
    return {
        "q": inst.q,
        "h": format_poly(inst.h),
        "k": inst.k,
        "ell": inst.ell,
        "n": inst.n,
        "s": inst.s,
        "m_kns": inst.m_value,
        "main_term": _frac(inst.main_term),
    }


def fk_exact_payload(p: int, m: int, h: str, k: int) -> dict:
    F, poly = _field_and_poly(p, m, h)
    inst = build_instance(F, poly, k)
    res = exact_Fk(inst)
    return {
        **_instance_payload(inst),
        "value": res.value,
        "lower": res.lower,
        "upper": res.upper,
        "mode": res.mode,
        "witness_dlogs": list(res.witness.dlogs),
        "defect": _frac(res.defect),
    }


def fk_construct_payload(p: int, m: int, h: str, k: int) -> dict:
    F, poly = _field_and_poly(p, m, h)
    inst = build_instance(F, poly, k)
    A = coset_construction(inst) if inst.m_value > 0 else greedy_star_set(inst)
    if not star_check(inst, A):
        raise AssertionFailed("construction lost the star property")
    value = len(A)
    return {
        **_instance_payload(inst),
        "value": value,
        "lower": value,
        "upper": None,
        "mode": "construction",
        "witness_dlogs": list(A.dlogs),
        "defect": _frac(value - inst.main_term),
    }


def structure_payload(p: int, m: int, h: str, k: int) -> dict:
    F, poly = _field_and_poly(p, m, h)
    inst = build_instance(F, poly, k)
    res = exact_Fk(inst)
    B0, dist = structure_distance(inst, res.witness)
    return {
        **_instance_payload(inst),
        "value": res.value,
        "mode": res.mode,
        "witness_dlogs": list(res.witness.dlogs),
        "B0": list(B0.elements),
        "distance": dist,
    }


def m_exact_payload(k: int, n: int, s: int) -> dict:
    return m_record(k, n, s).to_row()


def check_m_rows(rows) -> None:
    for r in rows:
        if not r["lower"] <= r["value"] <= r["upper"]:
            raise AssertionFailed(f"bounds violated at k={r['k']} n={r['n']} s={r['s']}")


def _monic_polys(F: Field, deg: int):
    import itertools

    for low in itertools.product(range(F.q), repeat=deg):
        yield Poly(F, list(low) + [1])


def weil_rows(q: int, deg: int) -> list[dict]:
    F = field_from_q(q)
    rows = []
    for f in _monic_polys(F, deg):
        rep = weil_verify(F, f)
        for rec in rep.records:
            rows.append({"q": q, "f": format_poly(f), **rec,
                         "magnitude": round(rec["magnitude"], 9), "bound": round(rec["bound"], 9)})
    return rows


def field_from_q(q: int) -> Field:
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise ConfigInvalid(f"q = {q} is not a prime power")
    (p, m), = fac.items()
    return Field(p, m)


def parse_family(text: str) -> int:
    text = text.replace(" ", "")
    if not text.startswith("x^"):
        raise ConfigInvalid(f"unsupported family {text!r}; use x^L")
    return int(text[2:])


def fk_sweep_cell(ell: int, k: int, q: int) -> dict:
    F = field_from_q(q)
    inst = build_instance(F, Poly.monomial(F, 1, ell), k)
    res = exact_Fk(inst)
    defect = res.defect
    return {
        "q": q, "p": F.p, "m": F.m, "h": format_poly(inst.h), "k": k,
        "ell": inst.ell, "n": inst.n, "s": inst.s, "m_kns": inst.m_value,
        "main_term": _frac(inst.main_term), "value": res.value,
        "lower": res.lower, "upper": res.upper, "mode": res.mode,
        "defect": _frac(defect),
        "defect_over_sqrt_q": None if defect is None else round(float(defect) / math.sqrt(q), 9),
    }


def fk_sweep_rows(ell: int, k: int, q_max: int, q_min: int = 3) -> list[dict]:
    return [fk_sweep_cell(ell, k, q) for q in range(max(q_min, 2), q_max + 1)
            if len(sympy.factorint(q)) == 1]


def remark3_payload(p: int, k: int) -> dict:
    c = remark3_construction(p, k)
    return {
        **_instance_payload(c.instance),
        "t": c.t, "u": c.u, "alpha": c.alpha,
        "A": c.A.elements(c.instance.field),
        "checks": c.checks,
    }


def remark4_payload(p: int, m: int, k: int) -> dict:
    c = remark4_construction(p, m, k)
    return {
        **_instance_payload(c.instance),
        "t": c.t, "u": c.u, "alpha": c.alpha,
        "A": c.A.elements(c.instance.field),
        "checks": c.checks,
    }


# -- output


def write_rows(rows: list[dict], columns: list[str], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: "" if r.get(c) is None else r.get(c) for c in columns})
    else:
        for r in rows:
            out.write(dumps(r) + "\n")


def emit(payload, fmt: str, out, columns=None) -> None:
    if isinstance(payload, list):
        write_rows(payload, columns or (sorted(payload[0]) if payload else []), fmt, out)
    elif fmt == "csv":
        write_rows([payload], columns or sorted(payload), fmt, out)
    else:
        out.write(dumps(payload) + "\n")


# -- experiment configs

SCHEMA_VERSION = 1
HARD_CAPS = {"m_n": 28, "weil_q": 1024, "weil_polys": 10**6, "fk_q": 4096}


def _ints(text: str) -> list[int]:
    out = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _fmt_ints(xs) -> str:
    return ",".join(map(str, xs))


@dataclass(frozen=True)
class MTableGrid:
    ks: tuple[int, ...] = (2,)
    n_max: int = 0


@dataclass(frozen=True)
class WeilGrid:
    qs: tuple[int, ...] = ()
    degs: tuple[int, ...] = (2, 3)


@dataclass(frozen=True)
class FkSweepGrid:
    family: str = "x^2"
    k: int = 2
    q_min: int = 3
    q_max: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameter grids for one experiment, stored as a sectioned INI file.

    Sections: [run] seed; [caps] m_n, weil_q, weil_polys, fk_q;
    [m-table] ks, n_max; [weil-verify] qs, degs; [fk-sweep] family, k,
    q_min, q_max; [output] dir, format.  Integer lists accept ranges "2-6".
    """

    seed: int = 0
    caps: tuple[tuple[str, int], ...] = tuple(sorted(HARD_CAPS.items()))
    m_table: MTableGrid | None = None
    weil: WeilGrid | None = None
    fk_sweep: FkSweepGrid | None = None
    out_dir: str | None = None
    out_format: str = "csv"

    @property
    def cap(self) -> dict[str, int]:
        return dict(self.caps)

    def validate(self) -> "ExperimentConfig":
        cap = self.cap
        for name, val in cap.items():
            if name not in HARD_CAPS:
                raise ConfigInvalid(f"unknown cap {name}")
            if not 0 <= val <= HARD_CAPS[name]:
                raise ConfigInvalid(f"cap {name} = {val} outside [0, {HARD_CAPS[name]}]")
        if self.out_format not in ("csv", "json"):
            raise ConfigInvalid(f"format must be csv or json, got {self.out_format}")
        if self.m_table:
            g = self.m_table
            if g.n_max > cap["m_n"]:
                raise ConfigInvalid(f"m-table n_max = {g.n_max} above cap {cap['m_n']}")
            if any(k < 2 for k in g.ks):
                raise ConfigInvalid("m-table needs k >= 2")
        if self.weil:
            for q in self.weil.qs:
                if q > cap["weil_q"]:
                    raise ConfigInvalid(f"weil-verify q = {q} above cap {cap['weil_q']}")
                field_from_q(q)
                for d in self.weil.degs:
                    if d < 1 or q**d > cap["weil_polys"]:
                        raise ConfigInvalid(f"weil-verify grid q = {q}, deg = {d} too large")
        if self.fk_sweep:
            g = self.fk_sweep
            parse_family(g.family)
            if g.q_max > cap["fk_q"]:
                raise ConfigInvalid(f"fk-sweep q_max = {g.q_max} above cap {cap['fk_q']}")
            if g.k < 2:
                raise ConfigInvalid("fk-sweep needs k >= 2")
        return self

    def to_parser(self) -> configparser.ConfigParser:
        cp = configparser.ConfigParser()
        cp["run"] = {"seed": str(self.seed)}
        cp["caps"] = {k: str(v) for k, v in self.caps}
        if self.m_table:
            cp["m-table"] = {"ks": _fmt_ints(self.m_table.ks), "n_max": str(self.m_table.n_max)}
        if self.weil:
            cp["weil-verify"] = {"qs": _fmt_ints(self.weil.qs), "degs": _fmt_ints(self.weil.degs)}
        if self.fk_sweep:
            g = self.fk_sweep
            cp["fk-sweep"] = {"family": g.family, "k": str(g.k),
                              "q_min": str(g.q_min), "q_max": str(g.q_max)}
        cp["output"] = {"format": self.out_format}
        if self.out_dir is not None:
            cp["output"]["dir"] = self.out_dir
        return cp

    def dumps(self) -> str:
        buf = io.StringIO()
        self.to_parser().write(buf)
        return buf.getvalue()

    @classmethod
    def from_parser(cls, cp: configparser.ConfigParser) -> "ExperimentConfig":
        known = {"run", "caps", "m-table", "weil-verify", "fk-sweep", "output"}
        for sec in cp.sections():
            if sec not in known:
                raise ConfigInvalid(f"unknown section [{sec}]")
        try:
            caps = dict(HARD_CAPS)
            if cp.has_section("caps"):
                caps.update({k: int(v) for k, v in cp["caps"].items()})
            m_table = weil = fk = None
            if cp.has_section("m-table"):
                s = cp["m-table"]
                m_table = MTableGrid(tuple(_ints(s.get("ks", "2"))), int(s.get("n_max", "0")))
            if cp.has_section("weil-verify"):
                s = cp["weil-verify"]
                weil = WeilGrid(tuple(_ints(s.get("qs", ""))), tuple(_ints(s.get("degs", "2,3"))))
            if cp.has_section("fk-sweep"):
                s = cp["fk-sweep"]
                fk = FkSweepGrid(s.get("family", "x^2").strip(), int(s.get("k", "2")),
                                 int(s.get("q_min", "3")), int(s.get("q_max", "0")))
            cfg = cls(
                seed=cp.getint("run", "seed", fallback=0),
                caps=tuple(sorted(caps.items())),
                m_table=m_table, weil=weil, fk_sweep=fk,
                out_dir=cp.get("output", "dir", fallback=None),
                out_format=cp.get("output", "format", fallback="csv").strip(),
            )
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from exc
        return cfg.validate()

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigInvalid(str(exc)) from exc
        return cls.from_parser(cp)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigInvalid(str(exc)) from exc
        return cls.loads(text)

    def cells(self) -> list[tuple[str, list[tuple[str, dict]]]]:
        """(section, [(command, params), ...]) in execution order."""
        out = []
        if self.m_table:
            out.append(("m-table", [("m-exact", {"k": k, "n": n, "s": s}) for k in self.m_table.ks
                                    for n in range(1, self.m_table.n_max + 1) for s in range(n)]))
        if self.weil:
            out.append(("weil-verify", [("weil-verify", {"q": q, "deg": d})
                                        for q in self.weil.qs for d in self.weil.degs]))
        if self.fk_sweep:
            g = self.fk_sweep
            out.append(("fk-sweep", [("fk-sweep-cell", {"ell": parse_family(g.family), "k": g.k, "q": q})
                                     for q in range(max(g.q_min, 2), g.q_max + 1)
                                     if len(sympy.factorint(q)) == 1]))
        return out


def _fk_params(p: int, m: int, h: str, k: int) -> dict:
    """Instance fingerprint: the modulus pins down how h's coefficients are read."""
    F, poly = _field_and_poly(p, m, h)
    return {"p": p, "m": m, "modulus": list(F.modulus), "h": format_poly(poly), "k": k}


def _drop_modulus(fn):
    return lambda p, m, modulus, h, k: fn(p, m, h, k)


CELL_COMMANDS = {
    "field-info": field_info,
    "power-part": power_part_payload,
    "value-set": value_set_payload,
    "m-exact": m_exact_payload,
    "weil-verify": weil_rows,
    "fk-exact": _drop_modulus(fk_exact_payload),
    "fk-construct": _drop_modulus(fk_construct_payload),
    "structure-distance": _drop_modulus(structure_payload),
    "fk-sweep-cell": fk_sweep_cell,
}
SEEDED = {"power-part"}


def compute_cell(command: str, params: dict):
    return CELL_COMMANDS[command](**params)


SECTION_COLUMNS = {"m-table": M_TABLE_COLUMNS, "weil-verify": WEIL_COLUMNS, "fk-sweep": FK_SWEEP_COLUMNS}


def run(config: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1,
        cache: "ResultCache | None" = None, out=None) -> dict[str, list[dict]]:
    """Execute every grid in the config; returns the rows for each section.

    Cells run in a worker pool; only this thread touches the cache.
    """
    config.validate()
    out = out or sys.stdout
    cache = cache or ResultCache(None)
    out_dir = out_dir if out_dir is not None else config.out_dir
    results: dict[str, list[dict]] = {}
    summary = []
    for section, cells in config.cells():
        cells = [(c, {**p, "seed": config.seed} if c in SEEDED else p) for c, p in cells]
        todo = [cell for cell in cells if not cache.has(*cell) or cache.recheck]
        if threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(threads) as pool:
                fresh = list(pool.map(lambda cell: compute_cell(*cell), todo))
        else:
            fresh = [compute_cell(*cell) for cell in todo]
        for cell, payload in zip(todo, fresh):
            cache.store(*cell, payload)
        rows = []
        for cell in cells:
            payload = cache.lookup(*cell)
            rows.extend(payload if isinstance(payload, list) else [payload])
        if section == "m-table":
            check_m_rows(rows)
        elif section == "weil-verify":
            bad = [r for r in rows if not r["pass"]]
            if bad:
                raise AssertionFailed(f"Weil bound violated at q={bad[0]['q']} f={bad[0]['f']}")
        results[section] = rows
        if out_dir is not None:
            d = Path(out_dir)
            d.mkdir(parents=True, exist_ok=True)
            ext = "csv" if config.out_format == "csv" else "jsonl"
            with open(d / f"{section}.{ext}", "w", newline="") as fh:
                write_rows(rows, SECTION_COLUMNS[section], config.out_format, fh)
        summary.append((section, len(cells), len(cells) - len(todo), len(rows)))
    print(f"{'section':<12} {'cells':>6} {'cached':>6} {'rows':>7}  status", file=out)
    for section, n_cells, n_hit, n_rows in summary:
        print(f"{section:<12} {n_cells:>6} {n_hit:>6} {n_rows:>7}  ok", file=out)
    return results


# -- argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prodrep", description=__doc__.splitlines()[0])
    ap.add_argument("--cache", default=None, help="append-only JSON-lines result cache")
    ap.add_argument("--recheck", action="store_true", help="recompute cache hits and compare")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--format", choices=("json", "csv"), default=None)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def field_args(p, need_h=True, need_k=False):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--m", type=int, default=1)
        if need_h:
            p.add_argument("--h", required=True, help='coefficients "c0,c1,...,cd"')
        if need_k:
            p.add_argument("--k", type=int, required=True)

    field_args(sub.add_parser("field-info", help="modulus and generator of F_{p^m}"), need_h=False)
    field_args(sub.add_parser("power-part", help="h = C f^ell with ell maximal"))
    field_args(sub.add_parser("value-set", help="the image h(F_q)"))

    p = sub.add_parser("weil-verify", help="Weil bound over all monic f of a degree")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--deg", type=int, required=True)

    p = sub.add_parser("m-exact", help="certified m(k, n; s)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    p = sub.add_parser("m-table", help="m(k, n; s) for all n up to n-max and all s")
    p.add_argument("--k", required=True, help="k, a list 2,3 or a range 2-6")
    p.add_argument("--n-max", type=int, required=True)

    field_args(sub.add_parser("fk-exact", help="exact F_k(q; h) or a bracket"), need_k=True)
    field_args(sub.add_parser("fk-construct", help="the coset-union construction"), need_k=True)
    field_args(sub.add_parser("structure-distance", help="distance to the nearest coset union"),
               need_k=True)

    p = sub.add_parser("fk-sweep", help="F_k(q; x^L) across prime powers q")
    p.add_argument("--h-family", required=True, help="x^L")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--q-min", type=int, default=3)

    p = sub.add_parser("remark3", help="geometric progression over F_{p^2}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("remark4", help="geometric progression over F_{p^m}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("verify-all", help="run every acceptance criterion")
    p.add_argument("--only", choices=sorted(GROUPS), default=None)

    p = sub.add_parser("run", help="execute an experiment config file")
    p.add_argument("config")
    p.add_argument("--out-dir", default=None)
    return ap


def _cached(cache: ResultCache, command: str, params: dict):
    return cache.get_or_compute(command, params)


def _dispatch(args, cache: ResultCache, out) -> int:
    cmd = args.command
    fmt = args.format or "json"
    if cmd == "field-info":
        emit(_cached(cache, cmd, {"p": args.p, "m": args.m}), fmt, out)
    elif cmd == "power-part":
        emit(_cached(cache, cmd, {"p": args.p, "m": args.m, "h": args.h, "seed": args.seed}), fmt, out)
    elif cmd == "value-set":
        emit(_cached(cache, cmd, {"p": args.p, "m": args.m, "h": args.h}), fmt, out)
    elif cmd == "weil-verify":
        rows = _cached(cache, cmd, {"q": args.q, "deg": args.deg})
        emit(rows, fmt, out, WEIL_COLUMNS)
        if any(not r["pass"] for r in rows):
            return 1
    elif cmd == "m-exact":
        emit(_cached(cache, cmd, {"k": args.k, "n": args.n, "s": args.s}), fmt, out, M_TABLE_COLUMNS)
    elif cmd == "m-table":
        cfg = ExperimentConfig(seed=args.seed, m_table=MTableGrid(tuple(_ints(args.k)), args.n_max))
        rows = run(cfg, threads=args.threads, cache=cache, out=io.StringIO())["m-table"]
        emit(rows, args.format or "csv", out, M_TABLE_COLUMNS)
    elif cmd in ("fk-exact", "fk-construct", "structure-distance"):
        emit(_cached(cache, cmd, _fk_params(args.p, args.m, args.h, args.k)), fmt, out)
    elif cmd == "fk-sweep":
        cfg = ExperimentConfig(seed=args.seed, fk_sweep=FkSweepGrid(
            args.h_family, args.k, args.q_min, args.q_max))
        rows = run(cfg, threads=args.threads, cache=cache, out=io.StringIO())["fk-sweep"]
        emit(rows, args.format or "csv", out, FK_SWEEP_COLUMNS)
    elif cmd == "remark3":
        emit(remark3_payload(args.p, args.k), fmt, out)
    elif cmd == "remark4":
        emit(remark4_payload(args.p, args.m, args.k), fmt, out)
    elif cmd == "verify-all":
        results = verify_all(args.only)
        ok = all(r.passed for r in results)
        for r in results:
            print(r.line(), file=out)
        if cache.path is not None:
            bad = cache.recheck_all()
            status = "PASS" if not bad else "FAIL"
            print(f"[{status}] cache determinism: {len(cache.entries)} entries rechecked, "
                  f"{len(bad)} mismatched" + (f" (first {bad[0][:12]})" if bad else ""), file=out)
            ok = ok and not bad
        return 0 if ok else 1
    elif cmd == "run":
        cfg = ExperimentConfig.load(args.config)
        if args.seed:
            cfg = replace(cfg, seed=args.seed)
        if args.format:
            cfg = replace(cfg, out_format=args.format)
        run(cfg, args.out_dir, args.threads, cache, out)
    return 0


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigInvalid("--threads must be at least 1")
        cache = ResultCache(args.cache, recheck=args.recheck)
        return _dispatch(args, cache, out)
    except (AssertionFailed, AssertionError) as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except (ConfigInvalid, ProdRepError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def run_cli(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()
