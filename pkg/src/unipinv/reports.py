"""Report builders shared by the command line and the HTTP service.

Every builder returns a :class:`Report` carrying a JSON-ready dict (with an
``input`` block so the report can be re-verified), a text rendering and the
certification flag.  All numbers in reports are exact: rationals are
``"p/q"`` strings, dimensions are integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from .exact import format_rational, parse_comm, parse_nc
from .kernel import minimal_generators, to_original, verify_generation
from .module import ModuleContext, ModuleElement, module_generators, verify_module_generation
from .nilpotent import (
    exp_nilpotent,
    format_matrix,
    jordan_basis,
    jordan_type,
    log_unipotent,
    parse_matrix_json,
)
from .relfree import VarietySpec, relfree_invariant_generators, verify_relfree_generation
from .sl2 import DerivationContext
from .trace import GenericMatrixContext, trace_invariant_generators, verify_trace_generation

SCHEMA = 1


class UsageError(ValueError):
    pass


@dataclass
class Report:
    kind: str
    data: dict
    text: str
    certified: bool = True

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.text

    @property
    def exit_code(self) -> int:
        return 0 if self.certified else 2


def _head(kind: str, inp: dict) -> dict:
    return {"schema": SCHEMA, "command": kind, "input": inp}


def _matrix_text(a) -> list[str]:
    if not a:
        return ["[]"]
    cells = [[format_rational(x) for x in row] for row in a]
    width = max(len(c) for row in cells for c in row)
    return ["[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells]


def _table(records, header=("n", "oracle", "kernel", "new", "generated")) -> list[str]:
    lines = ["  ".join(f"{h:>9}" for h in header)]
    for r in records:
        vals = (r.n, r.oracle, r.kernel, r.new, r.generated)
        flag = "" if r.ok else "  <-- gap"
        lines.append("  ".join(f"{v:>9}" for v in vals) + flag)
    return lines


def _record_json(r) -> dict:
    return {"n": r.n, "oracle": r.oracle, "kernel": r.kernel, "new": r.new, "generated": r.generated, "ok": r.ok}


def _verdict(certified: bool, D: int, records) -> str:
    if certified:
        return f"certified through degree {D}"
    bad = next(r for r in records if not r.ok)
    return f"NOT certified: degree {bad.n}, kernel {bad.kernel}, oracle {bad.oracle}, generated {bad.generated}"


def _max_degree(D) -> int:
    if D is None:
        return None
    if int(D) < 1:
        raise UsageError("max degree must be at least 1")
    return int(D)


# -- matrices ------------------------------------------------------------


def jordan_report(matrix) -> Report:
    js = jordan_basis(matrix)
    data = _head("jordan", {"matrix": format_matrix(matrix)})
    data["weights"] = list(js.weights)
    data["jordan_type"] = jordan_type(matrix)
    data["basis"] = format_matrix(js.basis)
    data["cell_form"] = format_matrix(js.cell_form())
    lines = [f"cell weights: {list(js.weights)}", "basis (columns):"]
    lines += _matrix_text(js.basis)
    lines += ["cell form:"] + _matrix_text(js.cell_form())
    return Report("jordan", data, "\n".join(lines) + "\n")


def log_report(matrix) -> Report:
    n = log_unipotent(matrix)
    data = _head("log", {"matrix": format_matrix(matrix)})
    data["log"] = format_matrix(n.entries)
    data["nilpotency_index"] = n.index
    lines = ["log:"] + _matrix_text(n.entries) + [f"nilpotency index: {n.index}"]
    return Report("log", data, "\n".join(lines) + "\n")


def exp_report(matrix) -> Report:
    g = exp_nilpotent(matrix)
    data = _head("exp", {"matrix": format_matrix(matrix)})
    data["exp"] = format_matrix(g.entries)
    lines = ["exp:"] + _matrix_text(g.entries)
    return Report("exp", data, "\n".join(lines) + "\n")


# -- kernels -------------------------------------------------------------


def _ctx(weights, matrix) -> tuple[DerivationContext, dict]:
    if (weights is None) == (matrix is None):
        raise UsageError("give exactly one of weights or a matrix")
    if weights is not None:
        if any(int(r) < 0 for r in weights):
            raise UsageError("weights must be non-negative")
        return DerivationContext(tuple(int(r) for r in weights)), {"weights": [int(r) for r in weights]}
    return DerivationContext.from_matrix(matrix), {"matrix": format_matrix(matrix)}


def kernel_report(weights=None, matrix=None, max_degree=None, threads=None) -> Report:
    ctx, inp = _ctx(weights, matrix)
    D = _max_degree(max_degree)
    rep = minimal_generators(ctx, D, threads)
    D = rep.verified_degree
    inp["max_degree"] = D
    data = _head("kernel", inp)
    data["weights"] = list(ctx.weights)
    data["variables"] = list(ctx.names)
    gens = []
    lines = [f"cell weights: {list(ctx.weights)}", "generators:"]
    xnames = None
    if matrix is not None:
        xnames = tuple(f"x{i + 1}" for i in range(len(matrix)))
    for g, d in zip(rep.generators, rep.degrees):
        item = {"degree": d, "poly": ctx.text(g)}
        line = f"  [{d}] {ctx.text(g)}"
        if xnames:
            orig = to_original(ctx, g).to_text(xnames)
            item["original"] = orig
            line += f"    = {orig}"
        gens.append(item)
        lines.append(line)
    data["generators"] = gens
    data["per_degree"] = [_record_json(r) for r in rep.records]
    data["certified"] = rep.certified
    data["verified_degree"] = D
    lines += _table(rep.records)
    lines.append(_verdict(rep.certified, D, rep.records))
    return Report("kernel", data, "\n".join(lines) + "\n", rep.certified)


def module_report(weights=None, matrix=None, z_weights=(), max_degree=None, threads=None) -> Report:
    ctx, inp = _ctx(weights, matrix)
    if not z_weights or any(int(q) < 0 for q in z_weights):
        raise UsageError("need non-negative Z weights")
    D = _max_degree(max_degree)
    if D is None:
        D = 2 * max(list(ctx.weights) + [int(q) for q in z_weights]) + 2
    mc = ModuleContext(ctx, tuple(int(q) for q in z_weights))
    rep = module_generators(mc, D, threads=threads)
    inp.update({"z_weights": list(mc.z_weights), "max_degree": D})
    data = _head("module-constants", inp)
    data["weights"] = list(ctx.weights)
    data["variables"] = list(ctx.names)
    data["z_variables"] = list(mc.z_names)
    gens = []
    lines = [f"Y weights: {list(ctx.weights)}  Z weights: {list(mc.z_weights)}", "module generators:"]
    for g, d in zip(rep.generators, rep.degrees):
        gens.append({"degree": d, "poly": g.to_text(mc), "coefficients": [ctx.text(f) for f in g.coeffs]})
        lines.append(f"  [{d}] {g.to_text(mc)}")
    data["generators"] = gens
    data["seed_candidates"] = rep.candidates
    data["per_degree"] = [_record_json(r) for r in rep.records]
    data["certified"] = rep.certified
    data["verified_degree"] = D
    lines += _table(rep.records)
    lines.append(_verdict(rep.certified, D, rep.records))
    return Report("module-constants", data, "\n".join(lines) + "\n", rep.certified)


# -- relatively free algebras ---------------------------------------------


def relfree_report(c: int, m: int, delta, max_degree: int, threads=None) -> Report:
    D = _max_degree(max_degree) or 6
    if len(delta) != m:
        raise UsageError(f"delta is {len(delta)}x{len(delta)} but --vars is {m}")
    spec = VarietySpec(int(c), int(m))
    rep = relfree_invariant_generators(spec, delta, D, threads)
    alg = rep._alg
    data = _head("relfree", {"class": spec.c, "vars": spec.m, "delta": format_matrix(delta), "max_degree": D})
    data["n0"] = rep.n0
    data["n0_note"] = "exact" if spec.c <= 2 else f"verified up to degree {D}"
    dims = []
    for n in range(D + 1):
        dims.append({
            "n": n,
            "words": spec.m ** n,
            "tideal": rep.tideal_dims[n],
            "quotient": rep.quotient_dims[n],
            "proper": rep.proper_dims[n],
            "mixed_basis_ok": rep.mixed[n].ok,
        })
    data["dimensions"] = dims
    data["proper_bases"] = {str(k): alg.proper_component(k).labels for k in range(2, D + 1) if alg.proper_component(k).dim}
    data["filtration"] = [
        {"n": n, "I_k": rep.filtration[n], "I_k_shifted": rep.filtration[n][1:] + [0]} for n in range(D + 1)
    ]
    gens = []
    lines = [
        f"variety: Lie nilpotent of class {spec.c}, {spec.m} variables",
        "dimensions (n: words, T-ideal, quotient, proper, mixed basis):",
    ]
    for d in dims:
        lines.append(f"  {d['n']}: {d['words']}, {d['tideal']}, {d['quotient']}, {d['proper']}, {'ok' if d['mixed_basis_ok'] else 'FAIL'}")
    lines.append(f"n0 = {rep.n0} ({data['n0_note']})")
    lines.append("filtration dims (I_0, I_1, ...; shifted indexing drops I_0):")
    for row in data["filtration"]:
        lines.append(f"  {row['n']}: {row['I_k']}  shifted {row['I_k_shifted']}")
    lines.append("generators:")
    for g in rep.generators:
        words = alg.to_nc(g.vector, g.degree).to_text()
        mixed = alg.mixed_text(g.vector, g.degree)
        gens.append({"degree": g.degree, "poly": mixed, "words": words, "origin": g.origin})
        lines.append(f"  [{g.degree}] {mixed}    ({g.origin})")
    data["generators"] = gens
    data["per_degree"] = [_record_json(r) for r in rep.records]
    data["certified"] = rep.certified
    data["verified_degree"] = D
    lines += _table(rep.records)
    lines.append(_verdict(rep.certified, D, rep.records) if all(m.ok for m in rep.mixed) else "NOT certified: mixed basis check failed")
    return Report("relfree", data, "\n".join(lines) + "\n", rep.certified)


# -- traces --------------------------------------------------------------


def _entry_mat_text(gm, mat) -> list[list[str]]:
    return [[f.to_text(gm.entry_names) for f in row] for row in mat]


def trace_report(n: int, m: int, delta, max_degree: int, word_length=None, threads=None) -> Report:
    D = _max_degree(max_degree) or 4
    if len(delta) != m:
        raise UsageError(f"delta is {len(delta)}x{len(delta)} but --vars is {m}")
    rep = trace_invariant_generators(int(n), int(m), delta, D, word_length, threads)
    gm = rep.gm
    inp = {"n": rep.n, "vars": rep.m, "delta": format_matrix(delta), "max_degree": D}
    if word_length is not None:
        inp["word_length"] = int(word_length)
    data = _head("trace", inp)
    data["nagata_higman_degree"] = rep.alphabet.d
    data["word_length"] = rep.word_length
    data["escalation"] = [{"L": L, "stable": s} for L, s in rep.escalation]
    data["formal_traces"] = list(rep.alphabet.names)
    pure, mixed = [], []
    lines = [
        f"generic {rep.n}x{rep.n} matrices, {rep.m} variables; trace words up to length {rep.alphabet.d}",
        f"module word length L = {rep.word_length}",
        "pure trace constants (algebra generators):",
    ]
    for i, ((f, d), e) in enumerate(zip(rep.pure, rep.pure_entry)):
        pure.append({"degree": d, "poly": rep.pure_text(i), "entry": e.to_text(gm.entry_names)})
        lines.append(f"  [{d}] {rep.pure_text(i)}")
    lines.append("mixed trace constants (module generators over the pure constants):")
    for i, ((_, d), mat) in enumerate(zip(rep.mixed, rep.mixed_entry)):
        mixed.append({"degree": d, "poly": rep.mixed_text(i), "entry": _entry_mat_text(gm, mat)})
        lines.append(f"  [{d}] {rep.mixed_text(i)}")
    data["pure_generators"] = pure
    data["mixed_generators"] = mixed
    data["pure_per_degree"] = [_record_json(r) for r in rep.pure_records]
    data["mixed_per_degree"] = [_record_json(r) for r in rep.mixed_records]
    data["certified"] = rep.certified
    data["verified_degree"] = D
    lines.append("pure table:")
    lines += _table(rep.pure_records)
    lines.append("mixed table:")
    lines += _table(rep.mixed_records)
    recs = list(rep.pure_records) + list(rep.mixed_records)
    lines.append(_verdict(rep.certified, D, recs))
    return Report("trace", data, "\n".join(lines) + "\n", rep.certified)


# -- verification of saved reports -----------------------------------------


def _matrix_in(inp: dict, key: str = "matrix"):
    return parse_matrix_json(inp[key]) if key in inp else None


def _checks_json(checks: Sequence[tuple[int, int, int]]) -> list[dict]:
    return [{"n": n, "generated": g, "kernel": k, "ok": g == k} for n, g, k in checks]


def verify_report(report: dict) -> Report:
    if not isinstance(report, dict) or report.get("schema") != SCHEMA:
        raise UsageError(f"not a schema {SCHEMA} report")
    kind = report.get("command")
    inp = report.get("input")
    if not isinstance(inp, dict):
        raise UsageError('report has no "input" block')
    checks: list[tuple[str, int, int, int]] = []
    mismatch = []
    if kind in ("jordan", "log", "exp"):
        matrix = _matrix_in(inp)
        fresh = {"jordan": jordan_report, "log": log_report, "exp": exp_report}[kind](matrix).data
        mismatch = [k for k in fresh if fresh[k] != report.get(k)]
    elif kind == "kernel":
        ctx, _ = _ctx(inp.get("weights"), _matrix_in(inp))
        gens = [parse_comm(g["poly"], ctx.names) for g in report["generators"]]
        D = int(inp["max_degree"])
        checks = [("kernel", c.n, c.generated, c.kernel) for c in verify_generation(gens, ctx, D)]
    elif kind == "module-constants":
        ctx, _ = _ctx(inp.get("weights"), _matrix_in(inp))
        mc = ModuleContext(ctx, tuple(inp["z_weights"]))
        gens = [ModuleElement([parse_comm(t, ctx.names) for t in g["coefficients"]]) for g in report["generators"]]
        D = int(inp["max_degree"])
        checks = [("module", n, g, k) for n, g, k in verify_module_generation(gens, mc, D)]
    elif kind == "relfree":
        spec = VarietySpec(int(inp["class"]), int(inp["vars"]))
        delta = _matrix_in(inp, "delta")
        gens = [parse_nc(g["words"], spec.m) for g in report["generators"]]
        D = int(inp["max_degree"])
        checks = [("relfree", c.n, c.generated, c.kernel) for c in verify_relfree_generation(gens, spec, delta, D)]
    elif kind == "trace":
        n, m = int(inp["n"]), int(inp["vars"])
        gm = GenericMatrixContext(n, m)
        delta = _matrix_in(inp, "delta")
        pure = [parse_comm(g["entry"], gm.entry_names) for g in report["pure_generators"]]
        mixed = [[[parse_comm(t, gm.entry_names) for t in row] for row in g["entry"]] for g in report["mixed_generators"]]
        D = int(inp["max_degree"])
        v = verify_trace_generation(pure, mixed, n, m, delta, D, int(report.get("word_length", 2)))
        checks = [("pure", c.n, c.generated, c.kernel) for c in v.pure] + [("mixed", c.n, c.generated, c.kernel) for c in v.mixed]
    else:
        raise UsageError(f"cannot verify a report of kind {kind!r}")
    ok = not mismatch and all(g == k for _, _, g, k in checks)
    data = _head("verify", {"command": kind})
    data["checks"] = [{"part": p, "n": n, "generated": g, "kernel": k, "ok": g == k} for p, n, g, k in checks]
    data["mismatched_fields"] = mismatch
    data["certified"] = ok
    lines = [f"re-verifying a {kind} report"]
    for p, n, g, k in checks:
        lines.append(f"  {p} degree {n}: generated {g}, kernel {k}" + ("" if g == k else "  <-- gap"))
    for k in mismatch:
        lines.append(f"  field {k!r} differs from a fresh computation")
    lines.append("verified" if ok else "NOT verified")
    return Report("verify", data, "\n".join(lines) + "\n", ok)


def parse_matrix(obj: Any):
    """Matrix from a JSON object or a bare list of rows."""
    if isinstance(obj, list):
        obj = {"size": len(obj), "entries": obj}
    return parse_matrix_json(obj)
