"""Command-line front end.

Exit status: 0 all checks pass, 1 a check failed, 2 unparseable input,
3 input violates an invariant, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from . import autgroup, jets, levi, maps, sampling, serialization as ser, structures
from .algebra import ComplexRational, reduce_mod_boundary, rho
from .errors import (AutomorphismError, ConstraintViolation, DimensionError, IntegrableCaseError, ParseError,
                     SiegelCRError, TruncationError, ValidationError)
from .structures import SimpleModelStructure

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3, 4

LEVI_SAMPLE_TOL = 1e-6


class Outcome:
    def __init__(self, report: dict, ok: bool):
        self.report = report
        self.ok = ok


# loading -----------------------------------------------------------------------------

def _structure(args, required: bool = True, raw_ok: bool = False):
    if not args.structure:
        if required:
            raise ParseError("--structure is required for this command")
        return None
    J = ser.structure_from_json(ser.load_json(args.structure))
    if isinstance(J, list) and not raw_ok:
        J = structures.structure_from_matrix(J)
    return J


def _simple(args) -> SimpleModelStructure:
    J = _structure(args)
    try:
        return structures.as_simple(J)
    except ValidationError as exc:
        raise ValidationError(f"this command needs a simple structure J^B: {exc}") from exc


def _map(args):
    if not args.map:
        raise ParseError("--map is required for this command")
    F = ser.map_from_json(ser.load_json(args.map))
    if args.order is not None:
        F = F.truncate(args.order)
    return F


def _point(text: str | None, n: int, flag: str = "--at"):
    if text is None:
        raise ParseError(f"{flag} is required for this command")
    if text == "origin":
        return ser.point_from_json("origin", n)
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = ser.load_json(text)
    return ser.point_from_json(data, n)


def _automorphisms(args, B) -> list[autgroup.Automorphism]:
    if not args.aut:
        raise ParseError("--aut is required for this command")
    return [ser.automorphism_from_json(ser.load_json(path), B) for path in args.aut]


def _sampling(args, reports: list[sampling.SampleReport]) -> tuple[list[dict], bool]:
    return [r.to_json() for r in reports], all(r.passed for r in reports)


# verbs -------------------------------------------------------------------------------

def cmd_structure_verify(args) -> Outcome:
    J = _structure(args, raw_ok=True)
    report = structures.verify_structure(J)
    out = {"verdict": "pass" if report.ok else "fail", "failures": [f.to_json() for f in report.failures]}
    ok = report.ok
    if report.ok:
        model = structures.structure_from_matrix(J) if isinstance(J, list) else J
        out["simple"] = structures.is_simple(model)
        out["integrable"] = structures.nijenhuis_vanishes(model)
        if args.sample:
            samples, s_ok = _sampling(args, [sampling.sample_structure(model, args.sample, args.seed)])
            out["sampling"] = samples
            ok = ok and s_ok
    return Outcome(out, ok)


def cmd_frame(args) -> Outcome:
    J = _structure(args)
    frame = structures.tangent_frame(J)
    r = rho(J.n)
    checks = []
    for j, L in enumerate(frame.L, 1):
        eig = (structures.act(J, L) - L * ComplexRational(0, 1)).is_zero()
        tang = reduce_mod_boundary(L(r)).is_zero()
        checks.append({"field": f"L{j}", "J-eigenvalue-i": eig, "tangent": tang})
    checks.append({"field": "T", "tangent": reduce_mod_boundary(frame.T(r)).is_zero()})
    ok = all(v for c in checks for k, v in c.items() if k != "field")
    out = {
        "alpha": [p.to_json() for p in frame.alpha],
        "beta": [p.to_json() for p in frame.beta],
        "a": [[x.to_json() for x in row] for row in frame.a],
        "b": [[x.to_json() for x in row] for row in frame.b],
        "checks": checks,
        "verdict": "pass" if ok else "fail",
    }
    if args.sample:
        out["sampling"], s_ok = _sampling(args, [sampling.sample_frame(J, args.sample, args.seed)])
        ok = ok and s_ok
    return Outcome(out, ok)


def cmd_levi(args) -> Outcome:
    J = _structure(args)
    p = _point(args.at, J.n)
    report = levi.levi_matrix(J, p)
    out = report.to_json()
    ok = report.positive
    if args.sample:
        import numpy as np

        H = sampling.levi_matrix_fd(J, p)
        exact = np.array([[complex(x) for x in row] for row in report.matrix])
        err = float(np.max(np.abs(H - exact)))
        out["sampling"] = [{"check": "levi-finite-difference", "max_residual": err, "tolerance": LEVI_SAMPLE_TOL,
                            "verdict": "pass" if err < LEVI_SAMPLE_TOL else "fail"}]
        ok = ok and err < LEVI_SAMPLE_TOL
    return Outcome(out, ok)


def cmd_map_check(args) -> Outcome:
    J = _structure(args)
    Jp = J
    if args.target_structure:
        Jp = ser.structure_from_json(ser.load_json(args.target_structure))
        if isinstance(Jp, list):
            Jp = structures.structure_from_matrix(Jp)
    F = _map(args)
    ph = maps.check_pseudoholomorphic(J, Jp, F)
    bd = maps.check_boundary_invariance(F)
    out = {"pseudoholomorphic": ph.to_json(), "boundary_invariance": bd.to_json(), "form": maps.check_form(F).to_json()}
    if isinstance(J, SimpleModelStructure) or structures.is_simple(J):
        if J == Jp or structures.as_model(J) == structures.as_model(Jp):
            out["component_system"] = maps.check_component_system(structures.as_simple(J), F).to_json()
    if bd.passed:
        out["cr_on_boundary"] = maps.check_cr_on_boundary(J, Jp, F).to_json()
    ok = ph.passed and bd.passed
    if args.sample:
        reports = [sampling.sample_pseudoholomorphic(J, Jp, F, args.sample, args.seed),
                   sampling.sample_boundary(F, args.sample, args.seed)]
        if bd.passed:
            reports.append(sampling.sample_cr(J, Jp, F, args.sample, args.seed))
        samples, _ = _sampling(args, reports)
        # the oracle confirms exact zeros of polynomial maps; a truncated series
        # only satisfies the identities up to its order, so it is reported, not scored
        out["sampling"] = samples
        if ph.passed and bd.passed and F.truncation_order is None:
            ok = ok and all(r.passed for r in reports)
    out["verdict"] = "pass" if ok else "fail"
    return Outcome(out, ok)


def _aut_json(G: autgroup.Automorphism) -> dict:
    out = ser.automorphism_to_json(G)
    out["factored_view"] = autgroup.factored_view(G)
    return out


def cmd_aut_verify(args) -> Outcome:
    B = _simple(args)
    out, ok = [], True
    for G in _automorphisms(args, B):
        entry = {"automorphism": _aut_json(G), "invariants": "pass"}
        P = autgroup.as_polymap(G)
        ph = maps.check_pseudoholomorphic(B, B, P)
        entry["pseudoholomorphic"] = "pass" if ph.passed else "fail"
        ok = ok and ph.passed
        if args.sample:
            reports = [sampling.sample_pseudoholomorphic(B, B, P, args.sample, args.seed),
                       sampling.sample_rho_scaling(P, float(G.c), args.sample, args.seed)]
            entry["sampling"], s_ok = _sampling(args, reports)
            ok = ok and s_ok
        out.append(entry)
    return Outcome({"automorphisms": out, "verdict": "pass" if ok else "fail"}, ok)


def cmd_aut_compose(args) -> Outcome:
    B = _simple(args)
    Gs = _automorphisms(args, B)
    result = Gs[0]
    for G in Gs[1:]:
        result = autgroup.compose(result, G)
    return Outcome({"composite": _aut_json(result), "factors": len(Gs)}, True)


def cmd_aut_apply(args) -> Outcome:
    B = _simple(args)
    Gs = _automorphisms(args, B)
    p = _point(args.at, B.n)
    image = p
    for G in reversed(Gs):
        image = autgroup.apply(G, image)
    return Outcome({"point": ser.point_to_json(p), "image": ser.point_to_json(image),
                    "image_on_boundary": rho(B.n).evaluate(image) == 0}, True)


def cmd_jet_extract(args) -> Outcome:
    F = _map(args)
    return Outcome({"jet": jets.extract_jet2(F).to_json()}, True)


def _trace_json(trace) -> list[dict]:
    return trace.to_json()


def cmd_reconstruct(args) -> Outcome:
    B = _simple(args)
    F = _map(args)
    try:
        G, trace = jets.reconstruct(F, B)
    except ConstraintViolation as exc:
        return Outcome({"verdict": "fail", "reason": str(exc), "trace": _trace_json(exc.trace)}, False)
    return Outcome({"verdict": "pass", "automorphism": _aut_json(G), "trace": _trace_json(trace)}, True)


def cmd_extend(args) -> Outcome:
    B = _simple(args)
    f = _map(args)
    p = _point(args.at, B.n) if args.at else ser.point_from_json("origin", B.n)
    q = _point(args.to, B.n, "--to") if args.to else list(f.evaluate(p))
    F = jets.normalize_basepoints(f, p, q, B)
    out: dict[str, Any] = {"base_point": ser.point_to_json(p), "target_point": ser.point_to_json(q),
                           "normalized_map": ser.map_to_json(F)}
    form = maps.check_form(F)
    out["form"] = form.to_json()
    try:
        G, trace = jets.reconstruct(F, B)
    except ConstraintViolation as exc:
        out.update(verdict="fail", reason=str(exc), trace=_trace_json(exc.trace))
        return Outcome(out, False)
    ext = jets.verify_extension(F, G)
    # the global element Psi_q o G o Psi_p^-1 sends p to q
    full = autgroup.compose(autgroup.make_translation(q, B),
                            autgroup.compose(G, autgroup.invert(autgroup.make_translation(p, B))))
    out.update(trace=_trace_json(trace), automorphism=_aut_json(G), extension=ext.to_json(),
               global_automorphism=_aut_json(full), verdict="pass" if ext.agrees else "fail")
    return Outcome(out, ext.agrees)


COMMANDS: dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "structure-verify": cmd_structure_verify,
    "frame": cmd_frame,
    "levi": cmd_levi,
    "map-check": cmd_map_check,
    "aut-verify": cmd_aut_verify,
    "aut-compose": cmd_aut_compose,
    "aut-apply": cmd_aut_apply,
    "jet-extract": cmd_jet_extract,
    "reconstruct": cmd_reconstruct,
    "extend": cmd_extend,
}


# rendering ---------------------------------------------------------------------------

def render_text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)) and value and not _is_scalar_list(value):
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _is_scalar_list(item):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _is_scalar_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    return str(v)


# entry point -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="siegelcr", description="Exact checks for model almost complex structures on the Siegel half-plane.")
    parser.add_argument("verb", choices=sorted(COMMANDS))
    parser.add_argument("--structure", help="structure JSON file")
    parser.add_argument("--target-structure", help="target structure for map-check (defaults to --structure)")
    parser.add_argument("--map", help="map JSON file")
    parser.add_argument("--aut", action="append", help="automorphism JSON file (repeatable; composed left to right)")
    parser.add_argument("--at", help='point: "origin", an inline JSON list of [re, im], or a JSON file')
    parser.add_argument("--to", help="target point for extend (defaults to the image of --at)")
    parser.add_argument("--order", type=int, help="truncate the input map at this total degree")
    parser.add_argument("--sample", type=int, default=0, metavar="N", help="add a floating-point cross-check at N points")
    parser.add_argument("--seed", type=int, default=0, metavar="S", help="seed for --sample")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _error(kind: str, exc: Exception, extra: dict | None = None) -> dict:
    out = {"error": {"kind": kind, "message": str(exc)}}
    if extra:
        out["error"].update(extra)
    return out


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    if args.sample < 0 or (args.order is not None and args.order < 0):
        report, status = _error("parse", ValueError("--sample and --order must be non-negative")), EXIT_PARSE
    else:
        try:
            outcome = COMMANDS[args.verb](args)
            report = {"command": args.verb, "status": "ok" if outcome.ok else "check-failed", "report": outcome.report}
            status = EXIT_OK if outcome.ok else EXIT_FAIL
        except ParseError as exc:
            report, status = _error("parse", exc), EXIT_PARSE
        except AutomorphismError as exc:
            report, status = _error("validation", exc, {"failures": exc.failures}), EXIT_INVALID
        except (ValidationError, DimensionError, IntegrableCaseError, TruncationError) as exc:
            report, status = _error("validation", exc), EXIT_INVALID
        except SiegelCRError as exc:
            report, status = _error("validation", exc), EXIT_INVALID
        except Exception as exc:  # noqa: BLE001 - mapped to the internal-error status
            report, status = _error("internal", exc), EXIT_INTERNAL
    if args.format == "text":
        stdout.write(render_text(report) + "\n")
    else:
        stdout.write(ser.dumps(report))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
