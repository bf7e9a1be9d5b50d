"""Command-line front end.  Every command prints a JSON report.

Exit codes: 0 all checks pass, 1 some residual is nonzero, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .algebra import BUILTIN_NAMES, AlgebraError, AssociativeAlgebra, builtin, from_spec, validate
from .binfty import (
    CheckRecord,
    SignMismatch,
    SignStats,
    a_infty_residual,
    assoc_residual,
    hochschild_realization,
    leibniz_residual,
    oracle_residuals,
)
from .exactq import format_rational
from .hochschild import (
    Cochain,
    antisymmetry_residual,
    brace_differential_residual,
    bracket_differential_residual,
    cohomology_dims,
    cup_assoc_residual,
    cup_brace_residual,
    d_squared_residual,
    derivation_residual,
    jacobi_residual,
    pre_jacobi_residual,
    random_cochain,
)
from .operad import (
    FoxNeuwirthCell,
    OperadElement,
    OperadError,
    arity2_complex,
    arity2_homology,
    cell_differential,
    cell_dimension,
    cells_with_blocks,
    chain_map_residual,
    compose,
    enumerate_cells,
    operad_differential,
    relabel_element,
)

COMMANDS = ("validate-algebra", "hh", "check-binfty", "oracle", "check-operad", "cells", "arity2-homology")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    algebra: str = "dual_numbers"
    seed: int = 0
    trials: int = 100
    max_arity: int = 5
    max_degree: int = 3
    length: int = 5
    arity: int = 3
    cell_type: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for name in ("trials", "max_arity", "length", "arity"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.max_degree < 0:
            raise UsageError("--max-degree must be non-negative")

    def echo(self) -> dict:
        keys = {
            "validate-algebra": ("algebra",),
            "hh": ("algebra", "max_degree"),
            "check-binfty": ("algebra", "seed", "trials", "max_arity", "max_degree"),
            "oracle": ("algebra", "seed", "trials", "length"),
            "check-operad": ("algebra", "seed", "trials", "max_arity", "max_degree"),
            "cells": ("arity", "cell_type"),
            "arity2-homology": (),
        }[self.command]
        return {"command": self.command, "seed": self.seed, **{k: getattr(self, k) for k in keys if k != "seed"}}


def parse_algebra_arg(arg: str) -> AssociativeAlgebra:
    """Builtin name first, otherwise a path to a JSON description."""
    if arg in BUILTIN_NAMES:
        return builtin(arg)
    path = Path(arg)
    if not path.is_file():
        raise UsageError(f"{arg!r} is neither a builtin ({', '.join(BUILTIN_NAMES)}) nor a readable file")
    try:
        return from_spec(path)
    except (AlgebraError, OSError) as exc:
        raise UsageError(str(exc)) from exc


def _payload(x: Cochain) -> dict:
    return {"degree": x.degree, "coeffs": [format_rational(v) for v in x.coeffs.reshape(-1)]}


class _Batch:
    """Aggregates trials of one check id into a single record."""

    def __init__(self):
        self.records: dict[str, dict] = {}

    def add(self, check_id: str, params: dict, ok: bool, counterexample: Callable[[], dict] | None = None):
        rec = self.records.setdefault(check_id, {"params": dict(params), "trials": 0, "passed": True, "cx": None})
        rec["trials"] += 1
        if not ok and rec["passed"]:
            rec["passed"] = False
            rec["cx"] = counterexample() if counterexample else {}

    def extend(self, records: Sequence[CheckRecord]):
        for r in records:
            self.add(r.check_id, {k: v for k, v in r.params.items() if k not in ("trial",)}, r.passed,
                     (lambda r=r: r.counterexample or {}))

    def to_list(self) -> list[dict]:
        out = []
        for cid in sorted(self.records):
            rec = self.records[cid]
            item = {"check_id": cid, "params": rec["params"], "trials": rec["trials"],
                    "residual_is_zero": rec["passed"]}
            if not rec["passed"]:
                item["counterexample"] = rec["cx"]
            out.append(item)
        return out


def _inputs(a: AssociativeAlgebra, rng: np.random.Generator, n: int, lo: int, hi: int,
            shift: int | None = None, cap: int | None = None,
            feasible: Callable[[list], bool] | None = None) -> tuple[list[Cochain], list]:
    """Seeded cochains with degrees in [lo, hi].

    With ``shift``, the identity's output degree sum(d) + shift is kept in
    [0, cap] and the input total below cap + 2, so tensors stay small; draws
    satisfying ``feasible`` (enough brace slots) are preferred.
    """
    degs = None
    for _ in range(1000 if shift is not None else 1):
        d = rng.integers(lo, hi + 1, size=n).tolist()
        if shift is None:
            degs = d
            break
        if 0 <= sum(d) + shift <= cap and sum(d) <= cap + 2:
            if feasible is None or feasible(d):
                degs = d
                break
            degs = degs or d
    degs = degs or [lo] * n
    seeds = rng.integers(0, 2**31, size=n).tolist()
    return [random_cochain(a, d, s) for d, s in zip(degs, seeds)], list(zip(degs, seeds))


def _cx(seed: int, trial: int, spec: list, xs: Sequence[Cochain], **extra) -> Callable[[], dict]:
    return lambda: {"seed": seed, "trial": trial, "inputs": [{"degree": d, "seed": s} for d, s in spec],
                    "values": [_payload(x) for x in xs], **extra}


def _compositions_upto(total: int, parts: int):
    def rec(t, p):
        if p == 0:
            yield ()
            return
        for f in range(t + 1):
            for rest in rec(t - f, p - 1):
                yield (f,) + rest
    for t in range(total + 1):
        yield from rec(t, parts)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(cfg: RunConfig) -> tuple[_Batch, dict]:
    batch = _Batch()
    if cfg.algebra in BUILTIN_NAMES:
        a = builtin(cfg.algebra)
        diag = validate(a)
    else:
        path = Path(cfg.algebra)
        if not path.is_file():
            raise UsageError(f"{cfg.algebra!r} is neither a builtin nor a readable file")
        try:
            a = from_spec(path)
            diag = None
        except AlgebraError as exc:
            if str(exc).startswith("parse error"):
                raise UsageError(str(exc)) from exc
            msg = str(exc)
            batch.add("algebra.validate", {}, False, lambda: {"diagnostic": msg})
            return batch, {}
    batch.add("algebra.validate", {}, diag is None,
              lambda: {"kind": diag.kind, "indices": list(diag.indices), "message": diag.message})
    return batch, {"dim": a.dim, "labels": list(a.labels)}


def cmd_hh(cfg: RunConfig) -> tuple[_Batch, dict]:
    a = parse_algebra_arg(cfg.algebra)
    dims = cohomology_dims(a, cfg.max_degree)
    return _Batch(), {"dims": list(dims)}


def cmd_check_binfty(cfg: RunConfig) -> tuple[_Batch, dict]:
    a = parse_algebra_arg(cfg.algebra)
    r = hochschild_realization(a)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    batch = _Batch()
    stats = SignStats()
    hi = cfg.max_degree
    cap = cfg.max_degree + 2
    N = cfg.max_arity

    def run(check_id, params, n, fn, shift, feasible=None):
        for t in range(cfg.trials):
            xs, spec = _inputs(a, rng, n, 0, hi, shift, cap, feasible)
            try:
                ok = fn(xs).is_zero()
            except SignMismatch as exc:
                batch.add("binfty.sign_paths", {}, False, _cx(cfg.seed, t, spec, xs, check=check_id, error=str(exc)))
                continue
            batch.add(check_id, params, ok, _cx(cfg.seed, t, spec, xs))

    # shift = output degree minus the input total, per identity
    run("hg.d_squared", {}, 1, lambda xs: d_squared_residual(xs[0]), 2)
    run("hg.derivation", {}, 2, lambda xs: derivation_residual(*xs), 1)
    run("hg.cup_assoc", {}, 3, lambda xs: cup_assoc_residual(*xs), 0)
    run("hg.lie.antisymmetry", {}, 2, lambda xs: antisymmetry_residual(*xs), -1)
    run("hg.lie.jacobi", {}, 3, lambda xs: jacobi_residual(*xs), -2)
    run("hg.lie.bracket_differential", {}, 2, lambda xs: bracket_differential_residual(*xs), 0)
    for l in range(1, 4):
        for m in range(1, 4):
            if l + m <= N:
                run(f"hg.pre_jacobi[l={l},m={m}]", {"l": l, "m": m}, 1 + l + m,
                    lambda xs, l=l: pre_jacobi_residual(xs[0], xs[1:1 + l], xs[1 + l:]), -l - m,
                    lambda d, l=l, m=m: d[0] >= l and d[0] + sum(v - 1 for v in d[1:1 + l]) >= m)
        run(f"hg.brace_differential[l={l}]", {"l": l}, 1 + l,
            lambda xs: brace_differential_residual(xs[0], xs[1:]), 1 - l, lambda d, l=l: d[0] >= l)
        run(f"hg.cup_brace[l={l}]", {"l": l}, 2 + l, lambda xs: cup_brace_residual(xs[0], xs[1], xs[2:]), -l,
            lambda d, l=l: d[0] + d[1] >= l)
    # the B-infinity families
    for n in range(1, N + 1):
        run(f"binfty.a_infty[n={n}]", {"n": n}, n, lambda xs, n=n: a_infty_residual(n, xs, r, stats), 3 - n)
    for k in range(0, N + 1):
        for l in range(0, N + 1 - k):
            if k + l == 0:
                continue
            feas = {1: lambda d, l=l: d[0] >= l, 2: lambda d, l=l: d[0] + d[1] >= l}.get(k)
            run(f"binfty.leibniz[k={k},l={l}]", {"k": k, "l": l}, k + l,
                lambda xs, k=k, l=l: leibniz_residual(k, l, xs, r, stats), 2 - k - l, feas)
    for k in range(0, N + 1):
        for l in range(0, N + 1 - k):
            for m in range(0, N + 1 - k - l):
                if k + l + m == 0:
                    continue
                feas = None
                if k == 1:
                    def feas(d, l=l, m=m):
                        return d[0] >= l and d[0] + sum(v - 1 for v in d[1:1 + l]) >= m
                run(f"binfty.assoc[k={k},l={l},m={m}]", {"k": k, "l": l, "m": m}, k + l + m,
                    lambda xs, k=k, l=l, m=m: assoc_residual(k, l, m, xs, r, stats), 1 - k - l - m, feas)
    batch.add("binfty.sign_paths", {}, True)
    return batch, {"sign_comparisons": stats.compared}


def cmd_oracle(cfg: RunConfig) -> tuple[_Batch, dict]:
    a = parse_algebra_arg(cfg.algebra)
    batch = _Batch()
    batch.extend(oracle_residuals(hochschild_realization(a), cfg.trials, cfg.seed, cfg.length))
    return batch, {}


def cmd_check_operad(cfg: RunConfig) -> tuple[_Batch, dict]:
    a = parse_algebra_arg(cfg.algebra)
    r = hochschild_realization(a)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    batch = _Batch()
    N = cfg.max_arity
    for n in range(2, N + 2):
        for c in enumerate_cells(n, 1):
            batch.add(f"operad.d_squared.one_block[n={n}]", {"n": n},
                      operad_differential(cell_differential(c)).is_zero(), lambda c=c: {"cell": str(c)})
    for n in range(2, N + 1):
        for c in enumerate_cells(n, 2):
            batch.add(f"operad.d_squared.two_block[n={n}]", {"n": n},
                      operad_differential(cell_differential(c)).is_zero(), lambda c=c: {"cell": str(c)})
    # equivariance: d of a relabelled standard cell is the relabelled d
    for n in range(2, N + 1):
        for sizes in [(n,)] + [(k, n - k) for k in range(1, n)]:
            std = FoxNeuwirthCell.standard(sizes)
            d_std = cell_differential(std)
            for p in permutations(range(1, n + 1)):
                perm = {i + 1: v for i, v in enumerate(p)}
                ok = cell_differential(std.permuted(perm)) == relabel_element(d_std, perm)
                batch.add(f"operad.equivariance[n={n}]", {"n": n}, ok, lambda s=std, p=p: {"cell": str(s), "perm": p})
    # degree bookkeeping
    for n in range(2, N + 1):
        for c in enumerate_cells(n, 1) + enumerate_cells(n, 2):
            d = cell_differential(c)
            ok = c.degree == -cell_dimension(c) and all(deg == c.degree + 1 for deg in d.degrees())
            batch.add("operad.degree", {}, ok, lambda c=c: {"cell": str(c)})
    # derivation property on random composites
    gens = [c for n in range(2, 4) for i in (1, 2) for c in enumerate_cells(n, i)]
    for t in range(cfg.trials):
        x = OperadElement.generator(gens[int(rng.integers(len(gens)))])
        y = OperadElement.generator(gens[int(rng.integers(len(gens)))])
        if rng.integers(2):
            z = OperadElement.generator(gens[int(rng.integers(len(gens)))])
            x = compose(x, int(rng.integers(1, x.n + 1)), z)
        i = int(rng.integers(1, x.n + 1))
        lhs = operad_differential(compose(x, i, y))
        rhs = compose(operad_differential(x), i, y) + compose(x, i, operad_differential(y)).scale(
            -1 if x.degree % 2 else 1)
        batch.add("operad.derivation", {}, lhs == rhs, lambda x=x, y=y, i=i: {"x": repr(x), "y": repr(y), "slot": i})
    # chain map on every cell with at most three blocks
    trials = max(1, min(cfg.trials, 20))
    for n in range(2, N + 1):
        families = [("one_block", enumerate_cells(n, 1)), ("two_block", enumerate_cells(n, 2))]
        if n >= 3:
            families.append(("three_block", cells_with_blocks(n, 3)))
        for fam, cells in families:
            for c in cells:
                for t in range(trials):
                    xs, spec = _inputs(a, rng, n, 0, min(cfg.max_degree, 2), c.degree + 1, cfg.max_degree + 2)
                    ok = chain_map_residual(c, r, xs).is_zero()
                    batch.add(f"operad.chain_map.{fam}[n={n}]", {"n": n}, ok,
                              _cx(cfg.seed, t, spec, xs, cell=str(c)))
    return batch, {}


def cmd_cells(cfg: RunConfig) -> tuple[_Batch, dict]:
    try:
        cells = enumerate_cells(cfg.arity, cfg.cell_type)
    except OperadError as exc:
        raise UsageError(str(exc)) from exc
    return _Batch(), {
        "count": len(cells),
        "cells": [{"cell": str(c), "dimension": cell_dimension(c), "degree": c.degree} for c in cells],
    }


def cmd_arity2(cfg: RunConfig) -> tuple[_Batch, dict]:
    cx, cells = arity2_complex()
    dims = arity2_homology()
    batch = _Batch()
    batch.add("arity2.homology", {}, dims == (1, 1), lambda: {"dims": list(dims)})
    batch.add("arity2.euler", {}, cx.euler_characteristic() == 0, lambda: {})
    return batch, {
        "degrees": list(cx.degrees),
        "space_dims": list(cx.dims),
        "homology_dims": list(dims),
        "differential": {str(c): repr(cell_differential(c)) for c in cells[0]},
    }


HANDLERS = {
    "validate-algebra": cmd_validate,
    "hh": cmd_hh,
    "check-binfty": cmd_check_binfty,
    "oracle": cmd_oracle,
    "check-operad": cmd_check_operad,
    "cells": cmd_cells,
    "arity2-homology": cmd_arity2,
}


def run(cfg: RunConfig) -> tuple[dict, int]:
    batch, result = HANDLERS[cfg.command](cfg)
    records = batch.to_list()
    failed = sum(1 for r in records if not r["residual_is_zero"])
    report = {
        "version": __version__,
        "config": cfg.echo(),
        "result": result,
        "records": records,
        "summary": {"checks": len(records), "passed": len(records) - failed, "failed": failed,
                    "ok": failed == 0},
    }
    return report, (0 if failed == 0 else 1)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gerstenhaber", description="Exact checks of B-infinity structures.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *names):
        if "algebra" in names:
            sp.add_argument("--algebra", default="dual_numbers", help="builtin name or JSON file")
        if "seed" in names:
            sp.add_argument("--seed", type=int, default=0)
        if "trials" in names:
            sp.add_argument("--trials", type=int, default=100)
        if "max_arity" in names:
            sp.add_argument("--max-arity", type=int, default=5)
        if "max_degree" in names:
            sp.add_argument("--max-degree", type=int, default=3)
        if "length" in names:
            sp.add_argument("--length", type=int, default=5)
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")

    common(sub.add_parser("validate-algebra", help="check associativity and unit"), "algebra")
    common(sub.add_parser("hh", help="Hochschild cohomology dimensions"), "algebra", "max_degree")
    common(sub.add_parser("check-binfty", help="identity families on the Hochschild complex"),
           "algebra", "seed", "trials", "max_arity", "max_degree")
    common(sub.add_parser("oracle", help="tensor-coalgebra bialgebra axioms"), "algebra", "seed", "trials", "length")
    common(sub.add_parser("check-operad", help="cell operad: d^2, equivariance, chain map"),
           "algebra", "seed", "trials", "max_arity", "max_degree")
    sp = sub.add_parser("cells", help="list one- or two-block cells")
    sp.add_argument("--arity", type=int, default=3)
    sp.add_argument("--type", dest="cell_type", type=int, default=1, choices=(1, 2))
    sp.add_argument("--out", default=None)
    common(sub.add_parser("arity2-homology", help="homology of the arity-two cell complex"))
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if v is not None or k == "out"}
    try:
        cfg = RunConfig(**fields)
        report, code = run(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=False) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
