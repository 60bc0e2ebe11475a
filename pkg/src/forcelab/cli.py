"""Command-line front door: run constructions and checks, emit JSON traces.

Every run is deterministic given its flags (seeded randomness, no clocks),
so identical invocations produce byte-identical output.  Exit codes:
0 success, 1 named contract violation (the code appears in the JSON),
2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import collapse, dctrees, levy, posets, qtree
from .errors import ContractError
from .ordinals import parse_cnf


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output_path: Optional[str] = None


_PARAM_SPECS = {
    "coll-run": {"set": "nat", "n": 5},
    "iso-roundtrip": {"len": 10, "cases": 10, "seed": 0},
    "dc-run": {"set": "nat", "functional": "seq", "n": 10},
    "marker-run": {"set": "nat", "functional": "const", "n": 10},
    "levy-run": {"set": "nat", "alpha": "w*2"},
    "density-check": {"set": "nat", "i": 3, "frag": 200},
    "oracle-check": {"seed": 0, "cases": 20, "size": 7},
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Dispatch a config to its module operation; return (exit status, document)."""
    spec = _PARAM_SPECS.get(cfg.command)
    if spec is None:
        return 2, {"error": "bad-config",
                   "detail": f"unknown command {cfg.command!r}"}
    unknown = set(cfg.params) - set(spec)
    if unknown:
        return 2, {"error": "bad-config",
                   "detail": f"unknown keys {sorted(unknown)}"}
    params = {**spec, **cfg.params}
    try:
        doc = _DISPATCH[cfg.command](params)
        return 0, doc
    except ContractError as exc:
        return 1, {"error": exc.code, "detail": str(exc)}
    except (KeyError, ValueError) as exc:
        return 2, {"error": "bad-config", "detail": str(exc)}


def _cmd_coll_run(params: dict) -> dict:
    x = collapse.builtin_set(params["set"])
    n = int(params["n"])
    poset = collapse.coll_poset(x)
    run_ = posets.rasiowa_sikorski(poset, collapse.level_family(x, n), (), n)
    inj = collapse.generic_to_injection(x, run_)
    return collapse.inj_seq_json(x, inj)


def _cmd_iso_roundtrip(params: dict) -> dict:
    rng = random.Random(int(params["seed"]))
    cases = int(params["cases"])
    max_len = int(params["len"])
    ok = True
    for _ in range(cases):
        items = tuple(rng.sample(range(1000), rng.randint(0, max_len)))
        back = qtree.q_to_coll(qtree.coll_to_q(collapse.InjSeq(items)))
        ok = ok and back.items == items
    return {"ok": ok, "cases": cases}


def _cmd_dc_run(params: dict) -> dict:
    x = collapse.builtin_set(params["set"])
    f = dctrees.fixture_functional(x, params["functional"])
    if not f.injective_mode:
        raise ValueError(f"functional {f.name} allows repetition; use marker-run")
    witness = dctrees.dc_witness(x, f, int(params["n"]))
    return dctrees.witness_json(f, witness)


def _cmd_marker_run(params: dict) -> dict:
    x = collapse.builtin_set(params["set"])
    f = dctrees.fixture_functional(x, params["functional"])
    g = dctrees.marker_reduction(x, f)
    marked = dctrees.dc_witness(dctrees.marked_set(x), g, int(params["n"]))
    doc = dctrees.witness_json(g, dctrees.unmark(marked),
                               markers=[m.marker for m in marked])
    doc["passes_original"] = dctrees.check_dc_witness(f, dctrees.unmark(marked))
    return doc


def _cmd_levy_run(params: dict) -> dict:
    x = collapse.builtin_set(params["set"])
    cof = levy.standard_cofinal(parse_cnf(params["alpha"]))
    f = levy.transfinite_f_seq(x)
    g = levy.levy_lift(cof, f)
    return levy.run_report_json(cof, f, g, blocks=6,
                                samples=levy.default_samples(cof))


def _cmd_density_check(params: dict) -> dict:
    x = collapse.builtin_set(params["set"])
    report = posets.is_dense_on_truncation(
        collapse.coll_poset(x),
        collapse.level_dense(x, int(params["i"])),
        int(params["frag"]))
    doc = {"dense": report.dense, "fragment": report.fragment}
    if not report.dense:
        doc["counterexample"] = posets._jsonable(report.counterexample)
    return doc


def _cmd_oracle_check(params: dict) -> dict:
    rng = random.Random(int(params["seed"]))
    cases = int(params["cases"])
    size_cap = int(params["size"])
    agreements = 0
    for _ in range(cases):
        table = posets.random_finite_poset(rng, rng.randint(2, size_cap))
        subsets = posets.random_dense_sets(rng, table, rng.randint(1, 3))
        pres = posets.table_poset(table)
        start = pres.root if pres.root is not None else table.elements[0]
        run_ = posets.rasiowa_sikorski(pres, posets.table_dense_sets(table, subsets),
                                       start, len(subsets))
        closure = posets.filter_from_chain(pres, run_.chain, len(table.elements))
        oracle = posets.brute_force_filter(table, subsets)
        if (posets.is_filter(table, closure)
                and all(closure & s for s in subsets)
                and oracle is not None):
            agreements += 1
    return {"ok": agreements == cases, "cases": cases, "agreements": agreements}


_DISPATCH = {
    "coll-run": _cmd_coll_run,
    "iso-roundtrip": _cmd_iso_roundtrip,
    "dc-run": _cmd_dc_run,
    "marker-run": _cmd_marker_run,
    "levy-run": _cmd_levy_run,
    "density-check": _cmd_density_check,
    "oracle-check": _cmd_oracle_check,
}


def build_config(argv: list[str]) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="forcelab",
        description="Run forcing-poset constructions and emit JSON traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **flags):
        p = sub.add_parser(name)
        p.add_argument("--out", dest="output_path", default=None)
        for flag, kind in flags.items():
            p.add_argument(f"--{flag}", type=kind, default=None)
        return p

    add("coll-run", set=str, n=int)
    add("iso-roundtrip", len=int, cases=int, seed=int)
    add("dc-run", set=str, functional=str, n=int)
    add("marker-run", set=str, functional=str, n=int)
    add("levy-run", set=str, alpha=str)
    add("density-check", set=str, i=int, frag=int)
    add("oracle-check", seed=int, cases=int, size=int)

    ns = parser.parse_args(argv)
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "output_path") and v is not None}
    return RunConfig(ns.command, params, ns.output_path)


def main(argv: Optional[list[str]] = None) -> int:
    cfg = build_config(sys.argv[1:] if argv is None else argv)
    status, doc = run(cfg)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
