"""Command line front end.

Exit codes: 0 success or verified, 1 a verification failed, 2 bad input or
unmet preconditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .bundle_calc import SplitBundle, projective_bundle_h0, pushforward, sym
from .chow_ring import AmbientData, ChowRing
from .exact_linalg import IntegerMatrix
from .gmodule import decompose, group_cohomology, torsion_prym_check
from .lattice import (BilinearLattice, InvolutionLattice, PreconditionError, brauer_K,
                      discriminant_group, modification_report, modify,
                      negate, prym_lattice, verify_brauer_sequences, verify_det_formula,
                      verify_prym_correspondence, verify_rank_formula)
from .presets import (beauville_donagi, beauville_donagi_report, cubic_ambient,
                      cubic_fourfold_M, cubic_fourfold_M_report, cubic_picard3,
                      cubic_picard3_report, surface_structure_fixed_points,
                      surface_structure_free)

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input

def read_json(path: Optional[str]) -> dict:
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input: {exc}") from None


def _matrix(data, name: str) -> IntegerMatrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError(f"{name} must be a list of rows")
    if not data:
        return IntegerMatrix.zeros(0, 0)
    try:
        return IntegerMatrix(data)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: {exc}") from None


def load_lattice(data: dict) -> tuple:
    """``(InvolutionLattice, sublattices)`` from a lattice file.

    A file without a Gram matrix is read as a G-module ``{"rank", "sigma"}``
    and gets the zero form; a file without sigma gets the identity.
    """
    if not isinstance(data, dict) or ("sigma" not in data and "gram" not in data):
        raise InputError("input needs a 'sigma' or a 'gram' matrix")
    if "sigma" in data:
        sigma = _matrix(data["sigma"], "sigma")
        gram = _matrix(data["gram"], "gram") if "gram" in data \
            else IntegerMatrix.zeros(sigma.rows, sigma.rows)
    else:
        gram = _matrix(data["gram"], "gram")
        sigma = IntegerMatrix.identity(gram.rows)
    if "rank" in data and int(data["rank"]) != sigma.rows:
        raise InputError("rank does not match sigma")
    try:
        L = InvolutionLattice.build(gram, sigma)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    subs = {}
    for name, vecs in (data.get("sublattices") or {}).items():
        if not isinstance(vecs, list) or any(len(v) != L.rank for v in vecs):
            raise InputError(f"sublattice {name}: vectors must have length {L.rank}")
        subs[name] = [list(map(int, v)) for v in vecs]
    return L, subs


def lattice_file(L: InvolutionLattice, subs: Optional[dict] = None) -> dict:
    out = {"gram": L.gram.tolist(), "sigma": L.sigma.tolist()}
    if subs:
        out["sublattices"] = {k: [list(v) for v in vs] for k, vs in subs.items()}
    return out


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# output

def _plain(value):
    if isinstance(value, IntegerMatrix):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)


def render(report, as_json: bool) -> str:
    report = _plain(report)
    if as_json:
        return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2)
    if not isinstance(report, dict):
        return str(report)
    lines = []
    _render_dict(report, lines, "")
    return "\n".join(lines)


def _render_dict(d: dict, lines: list, indent: str):
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            _render_dict(v, lines, indent + "  ")
        else:
            lines.append(f"{indent}{k}: {v}")


def _verdict_code(report) -> int:
    if not isinstance(report, dict) or "verdict" not in report:
        return OK
    v = report["verdict"]
    if v is None:
        return BAD_INPUT
    return OK if v else FAILED


# ---------------------------------------------------------------------------
# verbs

def _sub(subs: dict, name: str, required: bool = False):
    if name in subs:
        return subs[name]
    if required:
        raise InputError(f"lattice file has no sublattice {name!r}")
    return None


def cmd_decompose(args):
    L, _ = load_lattice(read_json(args.file))
    dec = decompose(L.module())
    return dec.to_dict(), str(dec)


def cmd_cohomology(args):
    L, _ = load_lattice(read_json(args.file))
    mod = L.module()
    degrees = [args.degree] if args.degree is not None else [0, 1, 2]
    if any(d < 0 for d in degrees):
        raise InputError("degree must be >= 0")
    report = {f"H^{d}": str(group_cohomology(mod, d)) for d in degrees}
    if args.level is not None:
        if args.level < 2:
            raise InputError("level must be >= 2")
        tp = torsion_prym_check(mod, args.level).to_dict()
        report["anti_invariants_vs_prym_at_level"] = tp
        report["verdict"] = tp["verdict"]
    return report, None


def cmd_prym(args):
    L, subs = load_lattice(read_json(args.file))
    pr = prym_lattice(L, _sub(subs, "M"))
    report = pr.to_dict()
    report["determinant"] = pr.determinant()
    return report, None


def cmd_discriminant(args):
    L, subs = load_lattice(read_json(args.file))
    disc = discriminant_group(L, _sub(subs, "M"))
    report = disc.to_dict()
    report["q"] = disc.q
    return report, str(disc)


def cmd_modify(args):
    L, _ = load_lattice(read_json(args.file))
    x = _ints(args.vector)
    if len(x) != L.rank:
        raise InputError(f"vector must have length {L.rank}")
    sign = {"+": 1, "-": -1}[args.sign]
    new = modify(L.base, x, sign)
    if args.negate:
        new = negate(new)
    report = modification_report(L.base, x, sign)
    report["negated"] = args.negate
    report["gram"] = new.gram.tolist()
    return report, None


def _mode_args(args) -> tuple:
    if args.mode == "fixed":
        if args.r is None:
            raise InputError("fixed-point mode needs --r")
        return "fixed", args.r
    return "free", None


def cmd_verify_rank(args):
    L, subs = load_lattice(read_json(args.file))
    mode, r = _mode_args(args)
    return verify_rank_formula(L, _sub(subs, "M", True), mode, r), None


def cmd_verify_det(args):
    L, subs = load_lattice(read_json(args.file))
    mode, r = _mode_args(args)
    return verify_det_formula(L, _sub(subs, "M", True), mode, r), None


def cmd_verify_correspondence(args):
    data = read_json(args.file)
    try:
        lam = BilinearLattice(_matrix(data["lambda_x"], "lambda_x"))
        W, subs = load_lattice(data["W"])
        M = data.get("M", subs.get("M", []))
        Phi = _matrix(data["Phi"], "Phi")
        Psi = _matrix(data["Psi"], "Psi")
    except KeyError as exc:
        raise InputError(f"correspondence file is missing {exc}") from None
    if Phi.rows == 0:
        Phi = IntegerMatrix.zeros(W.rank, lam.rank)
    if Psi.rows == 0 and lam.rank == 0:
        Psi = IntegerMatrix.zeros(0, W.rank)
    return verify_prym_correspondence(lam, W, M, Phi, Psi), None


def cmd_brauer(args):
    L, subs = load_lattice(read_json(args.file))
    M = _sub(subs, "M", True)
    hdg = _sub(subs, "Hdg") or M
    report = verify_brauer_sequences(L, hdg, M, args.level)
    if report.get("verdict") is not None:
        report["K"] = str(brauer_K(L, hdg))
    return report, None


def cmd_surface(args):
    if args.free:
        rep = surface_structure_free(args.h2)
    else:
        if args.r is None:
            raise InputError("give --r for the number of fixed points, or --free")
        rep = surface_structure_fixed_points(args.h2, args.r)
    return rep.to_dict(), None


def cmd_preset(args):
    name = args.name
    if name == "cubic-m":
        if args.report:
            return cubic_fourfold_M_report(), None
        L = cubic_fourfold_M()
        return lattice_file(L), "file"
    if name == "cubic-ambient":
        L, M = cubic_ambient()
        if args.report:
            return verify_brauer_sequences(L, M, M, 15), None
        return lattice_file(L, {"M": M, "Hdg": M}), "file"
    if name == "picard3":
        if args.m is None or args.d is None:
            raise InputError("picard3 needs --m and --d")
        if args.report:
            return cubic_picard3_report(args.m, args.d), None
        return lattice_file(cubic_picard3(args.m, args.d)), "file"
    if name == "bd":
        data = beauville_donagi()
        if args.report:
            return beauville_donagi_report(data), None
        return {"gram": data.form.gram.tolist(), "lambda0": list(data.lambda0),
                "l": list(data.l), "delta": list(data.delta)}, "file"
    raise InputError(f"unknown preset {name!r}")


def cmd_bundle(args):
    E = SplitBundle(_ints(args.degrees))
    if args.m < 0:
        raise InputError("m must be >= 0")
    if args.action == "h0":
        pushed = pushforward(E, args.m, args.k)
        value = projective_bundle_h0(E, args.m, args.k)
        return {"h0": value, "pushforward": list(pushed.ascending())}, str(value)
    if args.action == "sym":
        S = sym(E, args.m)
        return {"degrees": list(S.ascending()), "rank": S.rank}, \
            ",".join(map(str, S.ascending()))
    raise InputError(f"unknown bundle action {args.action!r}")


def cmd_chow(args):
    g = _ints(args.gamma)
    if len(g) != 3:
        raise InputError("--gamma takes three integers g1,g2,g3")
    R = ChowRing(AmbientData(*g, args.lam))
    if args.action == "parity":
        return R.parity_check(), None
    if args.action == "class-s":
        S = R.class_of_S()
        return {"class_of_S": str(S), "degeneration_class": str(R.degeneration_class())}, str(S)
    if args.action == "chern":
        c1, c2 = R.chern_V2()
        return {"c1": str(R.reduce(c1)), "c2": str(R.reduce(c2))}, None
    raise InputError(f"unknown chow action {args.action!r}")


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prymlat",
                                description="Lattices with involution, Prym parts and checks.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text, file_arg=True):
        sp = sub.add_parser(name, help=help_text)
        if file_arg:
            sp.add_argument("file", nargs="?", default="-",
                            help="lattice file (JSON); '-' or omitted reads stdin")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    verb("decompose", cmd_decompose, "split into Z[G], Z+ and Z- summands")
    sp = verb("cohomology", cmd_cohomology, "group cohomology of the G-module")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--level", type=int, help="also compare anti-invariants and Prym at level n")
    verb("prym", cmd_prym, "Prym lattice of the complement of sublattice M")
    verb("discriminant", cmd_discriminant, "discriminant group of M (or the whole lattice)")
    sp = verb("modify", cmd_modify, "(+/-)-modification of the form by a vector")
    sp.add_argument("--vector", required=True)
    sp.add_argument("--sign", choices=["+", "-"], required=True)
    sp.add_argument("--negate", action="store_true", help="negate the resulting form")
    for name, func in (("verify-rank", cmd_verify_rank), ("verify-det", cmd_verify_det)):
        sp = verb(name, func, "check the closed formula on the Prym lattice of M-perp")
        sp.add_argument("--mode", choices=["fixed", "free"], required=True)
        sp.add_argument("--r", type=int, help="number of fixed points")
    verb("verify-correspondence", cmd_verify_correspondence,
         "check a pair Phi, Psi against the Prym correspondence")
    sp = verb("brauer", cmd_brauer, "Brauer-type exact sequences at a finite level")
    sp.add_argument("--level", type=int, required=True)
    sp = verb("surface", cmd_surface, "invariants of the quotient of a surface", False)
    sp.add_argument("--h2", type=int, required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--r", type=int)
    g.add_argument("--free", action="store_true")
    sp = verb("preset", cmd_preset, "built-in lattices", False)
    sp.add_argument("name", choices=["cubic-m", "cubic-ambient", "picard3", "bd"])
    sp.add_argument("--m", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--report", action="store_true", help="self-check report instead of the file")
    sp = verb("bundle", cmd_bundle, "split bundles on the projective line", False)
    sp.add_argument("action", choices=["h0", "sym"])
    sp.add_argument("--degrees", required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--k", type=int, default=0)
    sp = verb("chow", cmd_chow, "Chern classes on G(2,E) over P^3", False)
    sp.add_argument("action", choices=["parity", "class-s", "chern"])
    sp.add_argument("--gamma", default="0,0,0")
    sp.add_argument("--lambda", dest="lam", type=int, default=0)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        report, headline = args.func(args)
    except (InputError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    if headline == "file":
        print(json.dumps(_plain(report), sort_keys=True), file=out)
        return OK
    if args.json:
        print(render(report, True), file=out)
    else:
        if headline is not None:
            print(headline, file=out)
            if args.verb not in ("bundle", "chow"):
                print(render(report, False), file=out)
        else:
            print(render(report, False), file=out)
    return _verdict_code(report)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
