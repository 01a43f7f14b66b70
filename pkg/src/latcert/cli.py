"""Command-line front end: every module behind a subcommand with JSON I/O.

Inputs are JSON documents; a symmetric integer matrix travels as
{"gram": [[...]]} and wrapping documents are unwrapped by looking for "gram"
at the top level or under "induced", so the output of one subcommand feeds
the next. Exit codes: 0 success, 1 domain error (machine-readable payload on
stderr), 2 usage error. All searches are seeded, so identical inputs and
flags produce byte-identical JSON output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import exactlin as xl
from .discriminant import boundary_linking_form
from .errors import LatcertError
from .exterior import exterior_nd_form
from .forms import SymBilinearForm, is_isometric_definite
from .hermitian import GroupRingElement, LambdaModule, pullback
from .neighbors import two_neighbors
from .realize import DEFAULT_BUDGET, certify
from .roots import fingerprint, vectors_of_norm


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    path: str
    fmt: str
    budget: int
    seed: int
    norm: int
    threads: int
    verbose: int


def _nonnegative(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _threads_from_env() -> int:
    raw = os.environ.get("LATCERT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latcert",
        description="exact lattice-form computations with JSON input and output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", help="input JSON file, or - for stdin")
    common.add_argument("--format", choices=("json", "text"), default="text",
                        dest="fmt", help="output format (default text)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized searches (default 0)")
    common.add_argument("--budget", type=_nonnegative, default=DEFAULT_BUDGET,
                        help="trial budget for randomized searches")
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    add("snf", "Smith normal form of an integer matrix")
    add("exterior", "even-norm sublattice embedding of an odd form")
    roots = add("roots", "count vectors of a given norm")
    roots.add_argument("--norm", type=_nonnegative, default=2)
    add("fingerprint", "short-vector counts and minimum norm")
    add("neighbors", "unimodular lattices meeting the form in index two")
    add("linking", "boundary linking form of an even non-singular gram")
    add("pullback", "hermitian form from plus and minus parts")
    add("isometry", "explicit isometry between two definite forms")
    add("certify", "full realization certificate for an odd unimodular form")
    return parser


# ------------------------------------------------------------ input parsing


def _load_doc(path: str):
    text = sys.stdin.read() if path == "-" else open(path, "r").read()
    return json.loads(text)


def _gram_rows(doc, what: str = "form") -> list[list[int]]:
    if isinstance(doc, list):
        return xl.require_int_matrix(doc)
    if isinstance(doc, dict):
        if "gram" in doc:
            return xl.require_int_matrix(doc["gram"])
        if "induced" in doc and isinstance(doc["induced"], dict):
            return xl.require_int_matrix(doc["induced"]["gram"])
    raise ValueError(f"{what} document needs a \"gram\" matrix")


def _form_from_doc(doc, what: str = "form") -> SymBilinearForm:
    return SymBilinearForm.from_gram(_gram_rows(doc, what))


def _matrix_from_doc(doc) -> list[list[int]]:
    if isinstance(doc, dict) and "matrix" in doc:
        return xl.require_int_matrix(doc["matrix"])
    return _gram_rows(doc, "matrix")


# ------------------------------------------------------------- subcommands


def _cmd_snf(doc, cfg: CliConfig):
    snf = xl.smith_normal_form(_matrix_from_doc(doc))
    out = {"diagonal": snf.diagonal, "u": snf.U, "v": snf.V}
    text = "diag(" + ",".join(str(d) for d in snf.diagonal) + ")"
    return out, text


def _cmd_exterior(doc, cfg: CliConfig):
    ext = exterior_nd_form(_form_from_doc(doc))
    out = {"basis": [list(r) for r in ext.basis],
           "induced": ext.induced.to_json_dict(),
           "index": ext.index}
    text = "\n".join([f"index: {ext.index}",
                      "induced: " + json.dumps(out["induced"]["gram"])])
    return out, text


def _cmd_roots(doc, cfg: CliConfig):
    form = _form_from_doc(doc)
    count = len(vectors_of_norm(form.gram, cfg.norm))
    return {"norm": cfg.norm, "count": count}, str(count)


def _cmd_fingerprint(doc, cfg: CliConfig):
    fp = fingerprint(_form_from_doc(doc))
    out = fp.to_json_dict()
    lines = [f"norm {k}: {v}" for k, v in sorted(out["counts"].items())]
    lines.append(f"min norm: {out['min_norm']}")
    return out, "\n".join(lines)


def _cmd_neighbors(doc, cfg: CliConfig):
    ns = two_neighbors(_form_from_doc(doc))
    out = {"count": len(ns),
           "neighbors": [{"gram": [list(r) for r in n.form.gram],
                          "parity": n.parity} for n in ns]}
    text = "\n".join([f"count: {len(ns)}"]
                     + [f"{n.parity}: " + json.dumps([list(r) for r in n.form.gram])
                        for n in ns])
    return out, text


def _frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _cmd_linking(doc, cfg: CliConfig):
    gram = _gram_rows(doc)
    q = boundary_linking_form(gram)
    gens = []
    for i, d in enumerate(q.group.factors):
        coords = tuple(int(j == i) for j in range(len(q.group.factors)))
        gens.append({"order": d, "q": _frac(q.q(coords))})
    multiset = sorted(q.value_multiset().items())
    out = {"factors": list(q.group.factors),
           "generators": gens,
           "value_multiset": [[_frac(v), c] for v, c in multiset]}
    text = "\n".join([f"factors: {list(q.group.factors)}"]
                     + [f"q(g{i}) = {g['q']} (order {g['order']})"
                        for i, g in enumerate(gens)])
    return out, text


def _cmd_pullback(doc, cfg: CliConfig):
    module = doc.get("module") if isinstance(doc, dict) else None
    if not (isinstance(module, list) and len(module) == 3):
        raise ValueError("pullback document needs \"module\": [a, b, c]")
    mod = LambdaModule(*[int(x) for x in module])
    plus = _form_from_doc(doc["plus"], "plus part")
    minus = _form_from_doc(doc["minus"], "minus part")
    beta = doc.get("beta")
    herm = pullback(plus, minus, mod, beta)
    out = herm.to_json_dict()

    def entry(e: GroupRingElement) -> str:
        return f"{e.p}{e.q:+d}T"

    text = "\n".join(" ".join(entry(e) for e in row) for row in herm.gram)
    return out, text


def _cmd_isometry(doc, cfg: CliConfig):
    if not isinstance(doc, dict) or "source" not in doc or "target" not in doc:
        raise ValueError("isometry document needs \"source\" and \"target\" forms")
    source = _form_from_doc(doc["source"], "source")
    target = _form_from_doc(doc["target"], "target")
    iso = is_isometric_definite(source, target)
    if iso is None:
        return {"isometric": False, "matrix": None}, "isometric: false"
    out = {"isometric": True, "matrix": [list(r) for r in iso.matrix]}
    return out, "isometric: true\n" + json.dumps(out["matrix"])


def _cmd_certify(doc, cfg: CliConfig):
    cert = certify(_form_from_doc(doc), budget=cfg.budget, seed=cfg.seed)
    out = cert.to_json_dict()
    text = "\n".join([
        f"h: {cert.h} (mod 8: {cert.h_mod_8})",
        f"status: {cert.status}",
        f"minus-part isometry: {cert.alpha_minus_status}",
        f"glued: {'yes' if cert.glued is not None else 'no'}",
        f"classes: {len(cert.classification)}",
        f"knotted: {'true' if cert.knotted else 'false'}",
        f"surface: genus {cert.surface_genus}, euler {cert.surface_euler}",
    ])
    return out, text


_COMMANDS = {
    "snf": _cmd_snf,
    "exterior": _cmd_exterior,
    "roots": _cmd_roots,
    "fingerprint": _cmd_fingerprint,
    "neighbors": _cmd_neighbors,
    "linking": _cmd_linking,
    "pullback": _cmd_pullback,
    "isometry": _cmd_isometry,
    "certify": _cmd_certify,
}


def run(cfg: CliConfig, doc) -> int:
    out, text = _COMMANDS[cfg.subcommand](doc, cfg)
    if cfg.fmt == "json":
        print(json.dumps(out, indent=2))
    else:
        print(text)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_err:
        return exit_err.code if isinstance(exit_err.code, int) else 2
    cfg = CliConfig(subcommand=args.subcommand, path=args.path, fmt=args.fmt,
                    budget=args.budget, seed=args.seed,
                    norm=getattr(args, "norm", 2),
                    threads=_threads_from_env(), verbose=args.verbose)
    try:
        doc = _load_doc(cfg.path)
        return run(cfg, doc)
    except LatcertError as err:
        print(json.dumps(err.payload()), file=sys.stderr)
        return 1
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as err:
        payload = {"error": type(err).__name__, "message": str(err)}
        print(json.dumps(payload), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
