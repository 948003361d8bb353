"""Command-line front end: ``kfilt {df,pair,distance,specialize,project,appendix}``.

Every command builds a report body (a JSON-compatible dict whose exact
rationals are ``"p/q"`` strings) and a timing block. Bodies are
deterministic for fixed inputs and seed; timings are kept apart so bodies
can be compared byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .appendix import EXAMPLE_GENERATORS, EXAMPLE_WEIGHTS, run_example
from .document import JobDocument, load_document
from .errors import (
    ApproximationUnstable,
    CrossCheckFailure,
    FitError,
    KFiltError,
    RingMismatch,
    ValidationError,
    ZeroNorm,
)
from .filtration import ReesPresentation, is_equivariant
from .invariants import (
    WeightData,
    df_and_norm,
    distance,
    pair,
    perp_invariants,
    project_torus,
    weight_functions,
)
from .specialize import generic_ops, is_separating, specialize_tc

CROSS_CHECK_KMAX = 12

EXIT_OK, EXIT_VALIDATION, EXIT_UNCERTIFIED, EXIT_CROSSCHECK = 0, 2, 3, 4


class UsageError(ValidationError):
    """The document lacks a block the command needs."""


# -- serialisation helpers -------------------------------------------------------


def q(x) -> Optional[str]:
    """Exact rational as a "p/q" string (integers print without a denominator)."""
    if x is None:
        return None
    return str(Fraction(x))


def qs(seq) -> List[Optional[str]]:
    return [q(x) for x in seq]


def decimal(x, digits: int = 12) -> Optional[str]:
    if x is None:
        return None
    return f"{float(x):.{digits}g}"


def describe_filtration(f: ReesPresentation) -> Dict[str, Any]:
    names = f.ring.variables
    return {
        "label": f.label,
        "generators": [{"t": i, "poly": s.to_string(names)} for i, s in f.generators],
    }


def describe_ring(doc: JobDocument) -> Dict[str, Any]:
    r = doc.ring
    return {"variables": list(r.variables), "relations": [p.to_string(r.variables) for p in r.relations],
            "dimension": r.dimension}


def describe_fits(wd: WeightData) -> Dict[str, Any]:
    out = {}
    for name in ("h", "w", "d"):
        f = wd.fits.get(name)
        if f is None:
            out[name] = None
            continue
        out[name] = {
            "period": f.period,
            "from_k": f.k0,
            "coefficients": [q(c) for c in f.coeffs],
            "per_residue": [[q(c) for c in fr] for fr in f.fits] if f.period > 1 else None,
        }
    return out


def weight_block(wd: WeightData) -> Dict[str, Any]:
    return {
        "sequences": {"h": qs(wd.h), "w": qs(wd.w), "d": qs(wd.d)},
        "fits": describe_fits(wd),
        "period": wd.period,
        "certified": wd.certified,
        "fit_error": wd.error,
    }


# -- option resolution -----------------------------------------------------------


class Settings:
    def __init__(self, args, doc: Optional[JobDocument]):
        opts = doc.options if doc else {}

        def pick(name, default):
            v = getattr(args, name, None)
            if v is not None:
                return v
            return opts.get(name, default)

        n = doc.ring.dimension if doc else 1
        self.kmax = pick("kmax", 24)
        self.window = pick("window", n + 3)
        self.seed = pick("seed", 0)
        self.rmax = pick("rmax", None)
        if self.kmax < 1:
            raise ValidationError("--kmax must be at least 1")
        if self.window < 0:
            raise ValidationError("--window must be non-negative")

    def echo(self) -> Dict[str, Any]:
        return {"kmax": self.kmax, "window": self.window, "seed": self.seed}


def _filtrations(docs: Sequence[JobDocument], want: int) -> List[ReesPresentation]:
    filts = [f for d in docs for f in d.filtrations]
    if len(filts) != want:
        raise UsageError(f"this command needs {want} filtration block(s), found {len(filts)}")
    if want == 2 and filts[0].ring != filts[1].ring:
        raise RingMismatch("the two filtrations live on different rings")
    return filts


def _torus(doc: JobDocument):
    if doc.torus is None:
        raise UsageError("this command needs a torus block")
    return doc.torus


# -- commands ------------------------------------------------------------------
# each returns (body, exit code)


def cmd_df(docs, st: Settings):
    (f,) = _filtrations(docs, 1)
    wd = weight_functions(f, st.kmax, st.window)
    body = {
        "command": "df",
        "inputs": {"ring": describe_ring(docs[0]), "filtration": describe_filtration(f), "options": st.echo()},
        "weights": weight_block(wd),
        "df": None,
        "norm_sq": None,
        "warnings": [],
    }
    if not wd.certified:
        body["warnings"].append(f"uncertified: {wd.error}")
        return body, EXIT_UNCERTIFIED
    inv = df_and_norm(wd, f.label)
    body["df"], body["norm_sq"] = q(inv.df), q(inv.norm_sq)
    body["decimal"] = {"df": decimal(inv.df), "norm_sq": decimal(inv.norm_sq)}
    return body, EXIT_OK


def _pairing_block(pd) -> Dict[str, Any]:
    return {
        "P": qs(pd.p),
        "Pbar": qs(pd.pbar),
        "value": q(pd.value),
        "certified": pd.certified,
        "period": pd.period,
        "uncertified_estimate": q(pd.estimate),
        "fit_error": pd.error,
    }


def _cosine_block(f1, f2, st: Settings, warnings: List[str]):
    try:
        rep = distance(f1, f2, st.kmax, st.window)
    except ZeroNorm as exc:
        warnings.append(f"ZeroNorm: {exc}")
        return None, None
    block = {
        "cosine": q(rep.cosine),
        "cosine_sq": q(rep.cosine_sq),
        "sign": rep.sign,
        "angle": decimal(rep.angle, 15),
    }
    return block, rep


def cmd_pair(docs, st: Settings):
    f1, f2 = _filtrations(docs, 2)
    pd = pair(f1, f2, st.kmax, st.window)
    body = {
        "command": "pair",
        "inputs": {"ring": describe_ring(docs[0]), "filtrations": [describe_filtration(f1), describe_filtration(f2)],
                   "options": st.echo()},
        "pairing": _pairing_block(pd),
        "norm_sq": [None, None],
        "distance": None,
        "warnings": [],
    }
    if not pd.certified:
        body["warnings"].append(f"uncertified: {pd.error}")
        return body, EXIT_UNCERTIFIED
    body["norm_sq"] = [q(df_and_norm(pd.weights1).norm_sq), q(df_and_norm(pd.weights2).norm_sq)]
    body["decimal"] = {"pairing": decimal(pd.value)}
    body["distance"], _ = _cosine_block(f1, f2, st, body["warnings"])
    return body, EXIT_OK


def cmd_distance(docs, st: Settings):
    f1, f2 = _filtrations(docs, 2)
    body = {
        "command": "distance",
        "inputs": {"ring": describe_ring(docs[0]), "filtrations": [describe_filtration(f1), describe_filtration(f2)],
                   "options": st.echo()},
        "pairing": None,
        "norm_sq": [None, None],
        "distance": None,
        "per_k_angles": None,
        "warnings": [],
    }
    try:
        block, rep = _cosine_block(f1, f2, st, body["warnings"])
    except FitError as exc:
        body["warnings"].append(f"uncertified: {exc}")
        return body, EXIT_UNCERTIFIED
    if rep is None:
        return body, EXIT_OK
    body["pairing"] = q(rep.pairing)
    body["norm_sq"] = [q(rep.norm_sq1), q(rep.norm_sq2)]
    body["distance"] = block
    body["per_k_angles"] = [[k, decimal(a, 15)] for k, a in rep.per_k]
    return body, EXIT_OK


def _weights_equal(a: WeightData, b: WeightData) -> bool:
    return a.h == b.h and a.w == b.w and a.d == b.d


def cmd_specialize(docs, st: Settings):
    (f,) = _filtrations(docs, 1)
    torus = _torus(docs[0])
    body: Dict[str, Any] = {
        "command": "specialize",
        "inputs": {"ring": describe_ring(docs[0]), "filtration": describe_filtration(f),
                   "torus": [list(c) for c in torus.cocharacters], "options": st.echo()},
        "status": None,
        "warnings": [],
        "note": "maximality of the torus is the user's assertion and is not checked",
    }
    if is_equivariant(f, torus, st.kmax):
        body["status"] = "already equivariant, unchanged"
        return body, EXIT_OK
    lam = docs[0].lam
    if lam is not None and not is_separating(torus, lam, st.kmax):
        body["warnings"].append("the given one-parameter subgroup does not separate torus weights up to kmax")
    chosen = lam if lam is not None else generic_ops(torus, st.kmax, st.seed)
    body["lambda"] = list(chosen.weights)
    try:
        res = specialize_tc(f, torus, st.kmax, seed=st.seed, lam=chosen, rmax=st.rmax, check_kmax=CROSS_CHECK_KMAX)
    except ApproximationUnstable as exc:
        partial = exc.trace
        body["status"] = "approximation unstable"
        body["cross_check"] = f"passed for k <= {min(st.kmax, CROSS_CHECK_KMAX)}"
        body["first_disagreement"] = exc.disagreement_degree
        body["trace"] = [[r, a] for r, a in partial.trace]
        body["warnings"].append(
            "no approximation order up to the bound reproduces the weight functions; the agreement degree "
            "grows with r, which is what a specialisation that is not finitely generated looks like. "
            "Raise --kmax to see whether it settles.")
        return body, EXIT_UNCERTIFIED
    before = weight_functions(f, st.kmax, st.window)
    after = weight_functions(res.specialised, st.kmax, st.window)
    approx = res.approximation
    body.update({
        "status": "specialised",
        "cross_check": f"passed for k <= {min(st.kmax, CROSS_CHECK_KMAX)}",
        "weights_preserved": _weights_equal(before, after),
        "weights": weight_block(after),
        "trace": [[r, a] for r, a in res.trace],
        "approximation": {
            "r": approx.r,
            "agreement_degree": approx.agreement_degree,
            "presentation": describe_filtration(approx.presentation),
        },
        "equivariant_output": res.equivariant_output,
    })
    if not res.equivariant_output:
        body["warnings"].append("approximation is not equivariant for the torus")
    return body, EXIT_OK


def _projection_block(rep) -> Dict[str, Any]:
    return {
        "basis": [qs(b) for b in rep.basis],
        "basis_norm_sq": qs(rep.basis_norms),
        "pairings": qs(rep.pairings),
        "coefficients": qs(rep.coefficients),
        "norm_t_sq": q(rep.norm_t_sq),
        "norm_sq": q(rep.norm_sq),
        "verdict": rep.verdict,
        "certified": rep.certified,
    }


def cmd_project(docs, st: Settings):
    (f,) = _filtrations(docs, 1)
    torus = _torus(docs[0])
    rep = project_torus(f, torus, st.kmax, st.window)
    equivariant = is_equivariant(f, torus, st.kmax)
    body: Dict[str, Any] = {
        "command": "project",
        "inputs": {"ring": describe_ring(docs[0]), "filtration": describe_filtration(f),
                   "torus": [list(c) for c in torus.cocharacters], "options": st.echo()},
        "equivariant": equivariant,
        "direct": _projection_block(rep),
        "via_specialisation": None,
        "perp": None,
        "warnings": list(rep.warnings),
        "note": "maximality of the torus is the user's assertion and is not checked",
    }
    code = EXIT_OK if rep.certified else EXIT_UNCERTIFIED
    if equivariant and rep.certified:
        df_perp, norm_perp = perp_invariants(f, torus, st.kmax, st.window, projection=rep)
        body["perp"] = {"df": q(df_perp), "norm_sq": q(norm_perp)}
    if not equivariant:
        srep = project_torus(f, torus, st.kmax, st.window, via="specialisation", seed=st.seed)
        block = _projection_block(srep)
        block["lambda"] = list(generic_ops(torus, st.kmax, st.seed).weights)
        body["via_specialisation"] = block
        body["warnings"].extend(srep.warnings)
        if rep.verdict and srep.verdict and rep.verdict != srep.verdict:
            body["warnings"].append(
                f"verdicts disagree: direct {rep.verdict}, after specialisation {srep.verdict}")
        if rep.certified and srep.certified and rep.norm_t_sq > rep.norm_sq:
            body["warnings"].append("direct projection exceeds the norm; the input is not torus-equivariant")
    return body, code


def cmd_appendix(args) -> tuple:
    N = args.max_degree if args.max_degree is not None else 8
    kmax = args.kmax if args.kmax is not None else 12
    jmax = args.jmax if args.jmax is not None else 12
    _, c1, c2, census = run_example(kmax, jmax, N)
    body = {
        "command": "appendix",
        "inputs": {"generators": [{"t": t, "poly": s} for t, s in EXAMPLE_GENERATORS],
                   "lambda": list(EXAMPLE_WEIGHTS), "kmax": kmax, "jmax": jmax, "max_degree": N},
        "claim1": {"passed": c1.passed, "checks": [[name, ok] for name, ok in c1.checks]},
        "claim2": {"passed": c2.passed, "checks": [[name, ok] for name, ok in c2.checks]},
        "census": {
            "bound": census.bound,
            "generator_bidegrees": [list(b) for b in census.bidegrees],
            "multiplicities": [[k, j, m] for (k, j), m in sorted(census.new_generators.items())],
            "count": census.count,
            "note": census.note,
        },
    }
    return body, EXIT_OK if (c1.passed and c2.passed) else EXIT_CROSSCHECK


COMMANDS = {
    "df": (cmd_df, 1),
    "pair": (cmd_pair, 2),
    "distance": (cmd_distance, 2),
    "specialize": (cmd_specialize, 1),
    "project": (cmd_project, 1),
}


# -- rendering -----------------------------------------------------------------


def render_json(body, timing) -> str:
    return json.dumps({"body": body, "timing": timing}, indent=2, ensure_ascii=False) + "\n"


def _looks_rational(s: str) -> bool:
    try:
        Fraction(s)
    except (ValueError, ZeroDivisionError):
        return False
    return "/" in s


def _text_lines(value, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                out.append(f"{pad}{k}:")
                out.extend(_text_lines(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
        return out
    if isinstance(value, list):
        if _flat_list(value):
            return [pad + _scalar(value)]
        out = []
        for item in value:
            lines = _text_lines(item, indent + 1)
            if lines:
                lines[0] = pad + "- " + lines[0].lstrip()
            out.extend(lines)
        return out
    return [pad + _scalar(value)]


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v) or (
        isinstance(v, list) and all(isinstance(x, list) and _flat_list(x) and len(x) <= 3 for x in v))


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, str) and _looks_rational(v):
        return f"{v} (~{decimal(Fraction(v), 8)})"
    return str(v)


def render_text(body, timing) -> str:
    lines = _text_lines(body)
    lines.append("")
    lines.append(f"elapsed: {timing['seconds']:.3f} s")
    return "\n".join(lines) + "\n"


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kmax", type=int, help="largest degree k tabulated (default 24)")
    common.add_argument("--window", type=int, help="first degree used by the polynomial fits (default n+3)")
    common.add_argument("--seed", type=int, help="seed for the generic one-parameter subgroup (default 0)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="kfilt", description="Exact invariants of filtrations of graded rings.")
    parser.add_argument("--version", action="version", version=f"kfilt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "df": "Donaldson-Futaki invariant and L2 norm of one filtration",
        "pair": "L2 pairing of two filtrations, with the angle when defined",
        "distance": "angle between two filtrations and its per-degree approximations",
        "specialize": "specialise along a generic one-parameter subgroup of a torus",
        "project": "projection onto a torus and the degeneracy verdict",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        nargs = "+" if COMMANDS[name][1] == 2 else 1
        p.add_argument("documents", nargs=nargs, metavar="FILE", help="JSON job document")
        if name == "specialize":
            p.add_argument("--rmax", type=int, help="largest approximation order tried")
    ap = sub.add_parser("appendix", parents=[common], help="claims and initial-algebra census for the built-in example")
    ap.add_argument("--max-degree", type=int, dest="max_degree", help="bound N for the claims and census (default 8)")
    ap.add_argument("--jmax", type=int, help="largest t-degree tabulated (default 12)")
    return parser


def run(argv: Optional[Sequence[str]] = None):
    """Parse arguments and run one command. Returns (body, timing, exit code)."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    if args.command == "appendix":
        body, code = cmd_appendix(args)
    else:
        func, want = COMMANDS[args.command]
        if len(args.documents) > want:
            raise UsageError(f"{args.command} takes at most {want} document(s)")
        docs = [load_document(p) for p in args.documents]
        if want == 2 and len(docs) == 2 and docs[0].ring != docs[1].ring:
            raise RingMismatch("the two documents declare different rings")
        st = Settings(args, docs[0])
        body, code = func(docs, st)
    timing = {"seconds": round(time.perf_counter() - start, 3)}
    return args, body, timing, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args, body, timing, code = run(argv)
    except CrossCheckFailure as exc:
        print(f"kfilt: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except (ValidationError, OSError) as exc:
        print(f"kfilt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FitError as exc:
        print(f"kfilt: uncertified: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except KFiltError as exc:
        print(f"kfilt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = render_text(body, timing) if args.format == "text" else render_json(body, timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
