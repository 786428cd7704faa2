"""Command-line interface: ``qhomlie <command> ...``.

Exit codes: 0 when every check passes, 1 when a check fails (the report is
still printed), 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .algebra import AlgebraError, Check, CheckReport, HomLieAlgebra, check_quadratic_homlie, jacobi_check
from .constructions import (
    ConstructionError,
    Prop11Data,
    Prop12Data,
    example_nilpotent_prop12,
    example_sl2,
    example_toy_prop12,
    extend_prop11,
    extend_prop12,
    validate_prop11,
    validate_prop12,
)
from .documents import (
    DocumentError,
    algebra_to_doc,
    digest,
    doc_to_algebra,
    doc_to_grid,
    dumps,
    grid_to_doc,
    parse,
    parse_vector,
    report_doc,
    serialize,
    vector_to_doc,
)
from .lieification import (
    LieificationError,
    cocycle_theta,
    is_coboundary,
    is_cocycle,
    lieify,
    nilpotency_step,
    nilpotency_transfer_check,
    recover_h,
)
from .linalg import LinalgError, Mat, format_rat, parse_rat
from .structure import StructureError, decompose_thm22, fitting, is_simple_thmA

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# --------------------------------------------------------------------------
# helpers


class _Inputs:
    """Reads input files once and remembers their digests for the report."""

    def __init__(self):
        self.digests: Dict[str, Dict[str, str]] = {}

    def read(self, role: str, path: str) -> bytes:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
        self.digests[role] = {"path": path, "sha256": digest(data)}
        return data

    def algebra(self, role: str, path: str) -> HomLieAlgebra:
        return parse(self.read(role, path))

    def json(self, role: str, path: str) -> Any:
        try:
            return json.loads(self.read(role, path))
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: malformed JSON: {exc}") from exc


def _rat_arg(text: str):
    try:
        return parse_rat(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")


def _emit(args, command: str, inputs: _Inputs, report: CheckReport, data=None, outputs=None,
          text_lines: Optional[List[str]] = None) -> int:
    if getattr(args, "report", "text") == "json":
        sys.stdout.write(dumps(report_doc(command, inputs.digests, report, outputs, data)))
    else:
        for line in text_lines or []:
            print(line)
        for line in report.lines():
            print(line)
        print("RESULT", "PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_FAIL


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _failure_report(exc: Exception) -> CheckReport:
    rep = CheckReport()
    check = getattr(exc, "check", None)
    inner = getattr(exc, "report", None)
    if inner is not None:
        rep.extend(inner)
    if check is not None:
        rep.add(check)
    if rep.passed:
        rep.add(Check.fail("precondition", (), note=str(exc)))
    return rep


# --------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    inputs = _Inputs()
    A = inputs.algebra("algebra", args.file)
    return _emit(args, "check", inputs, check_quadratic_homlie(A), text_lines=[f"algebra {A.name} (dim {A.dim})"])


def _load_rho(obj, r: int, m: int) -> List[Mat]:
    if isinstance(obj, dict):
        obj = obj.get("matrices")
    if not isinstance(obj, list) or len(obj) != r:
        raise DocumentError(f"rho: expected a list of {r} matrices")
    return [doc_to_grid(g, f"rho[{i}]", m, m) for i, g in enumerate(obj)]


def cmd_extend_prop11(args) -> int:
    inputs = _Inputs()
    h = inputs.algebra("h", args.h)
    s = inputs.algebra("s", args.s)
    if s.form is None:
        raise DocumentError("s document needs a form (the metric B_s)")
    f = doc_to_grid(inputs.json("f", args.f), "f", h.dim, s.dim)
    rho = _load_rho(inputs.json("rho", args.rho), s.dim, h.dim)
    data = Prop11Data(h=h, s_bracket=s.bracket, s_form=s.form, f=f, rho=rho, eta=_rat_arg(args.eta),
                      s_names=s.basis_names, dual_names=tuple(f"{n}*" for n in s.basis_names))
    rep = validate_prop11(data)
    outputs = None
    if rep.passed:
        out = extend_prop11(data, name=args.name or f"{s.name}_{h.name}_extension")
        _write(args.output, serialize(out))
        outputs = {"algebra": {"path": args.output, "sha256": digest(serialize(out))}}
    return _emit(args, "extend prop11", inputs, rep, outputs=outputs)


def cmd_extend_prop12(args) -> int:
    inputs = _Inputs()
    h = inputs.algebra("h", args.h)
    D = doc_to_grid(inputs.json("D", args.D), "D", h.dim, h.dim)
    data = Prop12Data(h=h, D=D, vprime=parse_vector(args.vprime, h.dim, "vprime"), lambda_prime=_rat_arg(args.lam))
    rep = validate_prop12(data)
    outputs = None
    if rep.passed:
        out = extend_prop12(data, name=args.name or f"{h.name}_one_dim_extension")
        _write(args.output, serialize(out))
        outputs = {"algebra": {"path": args.output, "sha256": digest(serialize(out))}}
    return _emit(args, "extend prop12", inputs, rep, outputs=outputs)


def cmd_decompose(args) -> int:
    inputs = _Inputs()
    A = inputs.algebra("algebra", args.file)
    try:
        res = decompose_thm22(A)
    except StructureError as exc:
        return _emit(args, "decompose", inputs, _failure_report(exc), text_lines=[f"decomposition failed: {exc}"])
    out = Path(args.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {out}: {exc.strerror}") from exc
    pieces: Dict[str, Any] = {
        "kind": res.kind,
        "s_basis": [vector_to_doc(v) for v in res.s_basis],
        "h_basis": [vector_to_doc(v) for v in res.h_basis],
        "iperp_basis": [vector_to_doc(v) for v in res.iperp_basis],
        "f": grid_to_doc(res.f),
        "g": grid_to_doc(res.g_map),
        "L": grid_to_doc(res.L),
        "R": grid_to_doc(res.R),
        "rho": [grid_to_doc(M) for M in res.rho],
        "sigma": [grid_to_doc(M) for M in res.sigma],
        "psi": grid_to_doc(res.psi),
        "g_psi": grid_to_doc(res.g_psi),
        "iso": grid_to_doc(res.iso),
        "gamma": [{"i": i, "j": j, "value": vector_to_doc(v)} for (i, j), v in sorted(res.gamma.items())],
        "notes": list(res.notes),
    }
    if res.eta is not None:
        pieces["eta"] = format_rat(res.eta)
        pieces["killing"] = grid_to_doc(res.killing)
    else:
        pieces["D"] = grid_to_doc(res.data.D)
        pieces["vprime"] = vector_to_doc(res.data.vprime)
        pieces["lambda_prime"] = format_rat(res.data.lambda_prime)
    files = {
        "pieces.json": dumps(pieces),
        "h.json": serialize(res.h_algebra),
        "reconstruction.json": serialize(res.reconstruction),
    }
    outputs = {}
    for name, text in files.items():
        _write(str(out / name), text)
        outputs[name] = {"path": str(out / name), "sha256": digest(text)}
    data = {"kind": res.kind, "eta": format_rat(res.eta) if res.eta is not None else None,
            "dims": {"s": len(res.s_basis), "h": len(res.h_basis), "iperp": len(res.iperp_basis)}}
    lines = [f"kind {res.kind}", f"dim s = {len(res.s_basis)}, dim h = {len(res.h_basis)}, "
             f"dim I^perp = {len(res.iperp_basis)}"]
    if res.eta is not None:
        lines.append(f"eta = {format_rat(res.eta)}")
    lines.extend(f"note: {n}" for n in res.notes)
    return _emit(args, "decompose", inputs, res.report, data=data, outputs=outputs, text_lines=lines)


def cmd_lieify(args) -> int:
    inputs = _Inputs()
    A = inputs.algebra("algebra", args.file)
    L = lieify(A)
    rep = CheckReport()
    rep.add(jacobi_check(L.bracket))
    rep.extend(nilpotency_transfer_check(A))
    text = serialize(L)
    _write(args.output, text)
    step = nilpotency_step(L)
    return _emit(args, "lieify", inputs, rep, data={"nilpotency_step": step},
                 outputs={"algebra": {"path": args.output, "sha256": digest(text)}},
                 text_lines=[f"nilpotent of step {step}" if step is not None else "not nilpotent"])


def cmd_cocycle(args) -> int:
    inputs = _Inputs()
    A = inputs.algebra("algebra", args.file)
    C = cocycle_theta(A)
    rep = CheckReport()
    rep.add(is_cocycle(A, C))
    cob = is_coboundary(A, C)
    rec = recover_h(A, C)
    rep.extend(rec.flags, prefix="recovery_")
    data: Dict[str, Any] = {
        "d": C.d,
        "a_basis": [vector_to_doc(a) for a in C.a_basis],
        "theta": [grid_to_doc(t) for t in C.theta],
        "coboundary": cob.is_coboundary,
        "recovery_constrained": rec.constrained,
        "h": grid_to_doc(rec.matrix),
    }
    if cob.mu is not None:
        data["mu"] = grid_to_doc(cob.mu)
    if cob.obstruction is not None:
        data["obstruction"] = list(cob.obstruction)
    lines = [f"d = {C.d}", "theta is a coboundary" if cob else
             f"theta is not a coboundary (obstruction at component {cob.obstruction[0]}, "
             f"pair {cob.obstruction[1:]})"]
    return _emit(args, "cocycle", inputs, rep, data=data, text_lines=lines)


def cmd_fitting(args) -> int:
    inputs = _Inputs()
    A = inputs.algebra("algebra", args.file)
    res = fitting(A)
    data = {"ell": res.ell, "image_part": [vector_to_doc(v) for v in res.image_part.vectors()],
            "kernel_part": [vector_to_doc(v) for v in res.kernel_part.vectors()]}
    lines = [f"ell = {res.ell}", f"dim Im(T^ell) = {res.image_part.dim}", f"dim Ker(T^ell) = {res.kernel_part.dim}"]
    return _emit(args, "fitting", inputs, res.report, data=data, text_lines=lines)


def cmd_simple_check(args) -> int:
    inputs = _Inputs()
    A = inputs.algebra("algebra", args.file)
    if A.form is None:
        raise DocumentError("simple-check needs a form")
    simple = is_simple_thmA(A.bracket, A.form)
    rep = CheckReport()
    rep.add(Check.ok("simple") if simple else Check.fail("simple", (), note="ad(g) != o(B) or nontrivial center"))
    return _emit(args, "simple-check", inputs, rep, data={"simple": simple})


EXAMPLES = {
    "sl2": None,
    "toy-prop12": example_toy_prop12,
    "nilpotent-prop12": example_nilpotent_prop12,
}


def cmd_example(args) -> int:
    if args.which == "sl2":
        A = example_sl2(_rat_arg(args.eta))
    else:
        A = EXAMPLES[args.which]()
    text = serialize(A)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qhomlie", description="Exact tools for quadratic Hom-Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_report(sp):
        sp.add_argument("--report", choices=("text", "json"), default="text")
        return sp

    sp = with_report(sub.add_parser("check", help="run the quadratic Hom-Lie axiom checks"))
    sp.add_argument("file")
    sp.set_defaults(func=cmd_check)

    ext = sub.add_parser("extend", help="build a double extension")
    esub = ext.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    sp = with_report(esub.add_parser("prop11", help="s ⊕ h ⊕ s* from a simple algebra acting on h"))
    sp.add_argument("--h", required=True)
    sp.add_argument("--s", required=True, help="algebra document for s, with its metric as form")
    sp.add_argument("--f", required=True, help="matrix document, dim h x dim s")
    sp.add_argument("--rho", required=True, help="list of dim h square matrices, one per s basis vector")
    sp.add_argument("--eta", required=True)
    sp.add_argument("--name")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_extend_prop11)
    sp = with_report(esub.add_parser("prop12", help="Fd ⊕ h ⊕ Fc from a map D on h"))
    sp.add_argument("--h", required=True)
    sp.add_argument("--D", required=True)
    sp.add_argument("--vprime", required=True, help="comma separated rationals")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--name")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_extend_prop12)

    sp = with_report(sub.add_parser("decompose", help="identify an indecomposable algebra with a double extension"))
    sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True, help="directory for the extracted pieces")
    sp.set_defaults(func=cmd_decompose)

    sp = with_report(sub.add_parser("lieify", help="the Lie bracket T([x, y])"))
    sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_lieify)

    sp = with_report(sub.add_parser("cocycle", help="the 2-cocycle theta and the recovery map"))
    sp.add_argument("file")
    sp.set_defaults(func=cmd_cocycle)

    sp = with_report(sub.add_parser("fitting", help="Fitting decomposition of the twist"))
    sp.add_argument("file")
    sp.set_defaults(func=cmd_fitting)

    sp = with_report(sub.add_parser("simple-check", help="simplicity via ad(g) = o(B)"))
    sp.add_argument("file")
    sp.set_defaults(func=cmd_simple_check)

    sp = sub.add_parser("example", help="write a shipped example algebra")
    sp.add_argument("which", choices=sorted(EXAMPLES))
    sp.add_argument("--eta", default="1", help="scalar for the sl2 example")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_example)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, LinalgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StructureError, LieificationError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _emit(args, args.command, _Inputs(), _failure_report(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
