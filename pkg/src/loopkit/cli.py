"""Command line interface: ``python -m loopkit`` or ``loopkit``.

Tables are read and written in the plain text format of
:func:`loopkit.core.parse_raw_table`.  Element positions on the command
line are 1-based.  Exit status is 0 on success, 1 when the answer is
negative (no isomorphism, a failed battery line), 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import properties as props
from . import structure as st
from .codeloops import build_code_loop, read_space, space_from_code_loop
from .core import Loop, format_table, make_quasigroup, read_table
from .errors import LoopError, NotPowerAssociative
from .isomorphism import isomorphism_between, isotopism_between
from .library import catalog_get, catalog_names, encode_catalog, enumerate_loops, export_text, register_catalog
from .symmetrize import greedy_symmetrize, mu


class InputError(Exception):
    pass


def _load(path: str, kind: str | None = None):
    try:
        raw = read_table(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if kind is None:
        kind = "loop" if raw.is_normalized() else "quasigroup"
    try:
        return make_quasigroup(raw, kind)
    except (LoopError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _require_loop(Q, path: str) -> Loop:
    if not isinstance(Q, Loop):
        raise InputError(f"{path}: not a normalized loop table (try 'convert --as loop')")
    return Q


def _positions(text: str, n: int, flag: str) -> list[int]:
    try:
        out = [int(tok) - 1 for tok in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"{flag}: expected 1-based positions, got {text!r}") from None
    if not out or not all(0 <= x < n for x in out):
        raise InputError(f"{flag}: positions must lie in 1..{n}")
    return out


def _perm_text(p) -> str:
    return f"{p}  images: {' '.join(str(x + 1) for x in p.images)}"


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# inspect


def _property_lines(Q) -> list[str]:
    lines = []
    is_loop = isinstance(Q, Loop)
    for name in props.ALL_PROPERTIES:
        if props.loops_only(name) and not is_loop:
            continue
        try:
            value = props.has_property(Q, name)
        except NotPowerAssociative:
            lines.append(f"  {name}: n/a (not power associative)")
            continue
        tag = " (deduced)" if Q.attrs.provenance(name) == "deduced" else ""
        lines.append(f"  {name}: {'yes' if value else 'no'}{tag}")
    return lines


def inspect_report(Q) -> list[str]:
    lines = [f"order: {Q.order}", f"kind: {'loop' if isinstance(Q, Loop) else 'quasigroup'}"]
    lines.append("properties:")
    lines += _property_lines(Q)
    lines.append(f"mu: {mu(Q)}")
    if isinstance(Q, Loop):
        L = Q
        lines.append(f"left nucleus size: {st.left_nucleus(L).order}")
        lines.append(f"middle nucleus size: {st.middle_nucleus(L).order}")
        lines.append(f"right nucleus size: {st.right_nucleus(L).order}")
        lines.append(f"nucleus size: {st.nucleus(L).order}")
        lines.append(f"center size: {st.center(L).order}")
        lines.append(f"associator subloop size: {st.associator_subloop(L).order}")
        lines.append(f"Frattini subloop size: {st.frattini_subloop(L).order}")
        cls = st.nilpotency_class(L)
        lines.append(f"nilpotency class: {cls if cls is not None else 'not nilpotent'}")
        lines.append(f"multiplication group order: {st.multiplication_group(L).order()}")
        inn = st.inner_mapping_group(L)
        lines.append(f"inner mapping group order: {inn.order()}")
        lines.append(f"inner mapping group abelian: {'yes' if inn.is_abelian() else 'no'}")
        lines.append(f"simple: {'yes' if st.is_simple(L) else 'no'}")
    return lines


def _elementary_abelian_2(L: Loop, sub) -> bool:
    t = L.table
    pos = np.array(sub.pos_in_parent)
    block = t[np.ix_(pos, pos)]
    return bool(
        (t[pos, pos] == 0).all() and np.array_equal(block, block.T) and props._is_assoc(sub.table)
    )


def battery(L: Loop, which: str) -> list[tuple[str, bool]]:
    """Pass/fail checks for the two order-128 loops of nilpotency class 3."""
    nuc = st.nucleus(L)
    checks = [
        ("order 128", L.order == 128),
        ("nilpotency class 3", st.nilpotency_class(L) == 3),
        ("inner mapping group abelian", st.inner_mapping_group(L).is_abelian()),
        ("nucleus elementary abelian of order 16", nuc.order == 16 and _elementary_abelian_2(L, nuc)),
    ]
    if which == "csorgo":
        checks += [
            ("left nucleus of order 32", st.left_nucleus(L).order == 32),
            ("middle nucleus of order 32", st.middle_nucleus(L).order == 32),
            ("right nucleus of order 16", st.right_nucleus(L).order == 16),
        ]
    else:
        checks += [
            ("left nucleus of order 64", st.left_nucleus(L).order == 64),
            ("middle nucleus of order 64", st.middle_nucleus(L).order == 64),
            ("right nucleus of order 64", st.right_nucleus(L).order == 64),
        ]
    z = st.center(L)
    a = st.associator_subloop(L)
    checks.append(("center of order 2 equal to the associator subloop", z.order == 2 and z == a))
    return checks


def cmd_inspect(args) -> int:
    Q = _load(args.file)
    if args.battery:
        L = _require_loop(Q, args.file)
        ok = True
        for label, passed in battery(L, args.battery):
            print(f"{'PASS' if passed else 'FAIL'} {label}")
            ok &= passed
        return 0 if ok else 1
    print("\n".join(inspect_report(Q)))
    return 0


# ---------------------------------------------------------------------------
# the other commands


def cmd_iso(args) -> int:
    L, M = _load(args.file1), _load(args.file2)
    p = isomorphism_between(L, M)
    if p is None:
        print("fail")
        return 1
    print(_perm_text(p))
    return 0


def cmd_isotopy(args) -> int:
    L = _require_loop(_load(args.file1), args.file1)
    M = _require_loop(_load(args.file2), args.file2)
    triple = isotopism_between(L, M)
    if triple is None:
        print("fail")
        return 1
    for label, p in zip(("alpha", "beta", "gamma"), triple):
        print(f"{label}: {_perm_text(p)}")
    return 0


def cmd_enumerate(args) -> int:
    loops = enumerate_loops(args.n)
    nonassoc = sum(1 for L in loops if not props._is_assoc(L.table))
    print(f"{len(loops)} loops ({nonassoc} nonassociative)")
    if args.out:
        Path(args.out).write_bytes(encode_catalog(loops, args.name))
    if args.text:
        Path(args.text).write_text(export_text(loops), encoding="utf-8")
    return 0


def cmd_codeloop(args) -> int:
    try:
        S = read_space(args.space)
    except OSError as exc:
        raise InputError(f"cannot read {args.space}: {exc.strerror}") from exc
    except (ValueError, LoopError) as exc:
        raise InputError(f"{args.space}: {exc}") from exc
    C = build_code_loop(S)
    L = C.loop
    _write_or_print(format_table(L.table), args.out)
    moufang = props.evaluate(L, "moufang")
    cls = st.nilpotency_class(L)
    phi = st.frattini_subloop(L).order
    print(f"order: {L.order}")
    print(f"moufang: {'yes' if moufang else 'no'}")
    print(f"nilpotency class: {cls}")
    print(f"Frattini subloop size: {phi}")
    print(f"canonical basis: {' '.join(str(b + 1) for b in C.basis)}")
    if phi == 2:
        back, _ = space_from_code_loop(L, C.basis)
        same = back == S
        print(f"roundtrip: {'exact' if same else 'MISMATCH'}")
    else:
        same = True
        print("roundtrip: skipped (Frattini subloop is not of order 2)")
    ok = moufang and cls is not None and cls <= 2 and phi <= 2 and same
    return 0 if ok else 1


def cmd_symmetrize(args) -> int:
    L = _require_loop(_load(args.file), args.file)
    if args.subloop == "nucleus":
        sub = list(st.nucleus(L).pos_in_parent)
    else:
        sub = _positions(args.subloop, L.order, "--subloop")
    if args.h == "center":
        z = [x for x in st.center(L).pos_in_parent if x != 0]
        if len(z) != 1:
            raise InputError("--h center needs a center of order 2")
        h = z[0]
    else:
        h = _positions(args.h, L.order, "--h")[0]
    try:
        result = greedy_symmetrize(L, sub, h)
    except LoopError as exc:
        raise InputError(str(exc)) from exc
    print(f"initial mu={result.initial_mu}")
    for line in result.trace_lines():
        print(line)
    _write_or_print(format_table(result.loop.table), args.out)
    return 0


def cmd_convert(args) -> int:
    Q = _load(args.file, "quasigroup")
    if args.kind == "loop":
        from .core import as_loop

        Q = as_loop(Q)
    _write_or_print(format_table(Q.table), args.out)
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog_names():
            print(name)
        return 0
    if args.file:
        try:
            register_catalog(Path(args.file).read_bytes())
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from exc
    if args.name is None or args.n is None or args.m is None:
        raise InputError("catalog get needs NAME N M")
    L = catalog_get(args.name, args.n, args.m)
    sys.stdout.write(format_table(L.table))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loopkit", description="Computations with finite quasigroups and loops.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("inspect", help="report properties and structure of a table")
    s.add_argument("file")
    s.add_argument("--battery", choices=["csorgo", "csorgo-k"], help="run a pass/fail battery instead")
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("iso", help="find an isomorphism between two tables")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("isotopy", help="find an isotopism between two loops")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_isotopy)

    s = sub.add_parser("enumerate", help="all loops of order N up to isomorphism")
    s.add_argument("n", type=int, choices=range(1, 7), metavar="N")
    s.add_argument("--out", help="write a binary catalog")
    s.add_argument("--text", help="write the tables as text")
    s.add_argument("--name", default="all-loops", help="catalog name (default: all-loops)")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("codeloop", help="build the code loop of a symplectic cubic space")
    s.add_argument("space")
    s.add_argument("--out", help="write the loop table here instead of stdout")
    s.set_defaults(func=cmd_codeloop)

    s = sub.add_parser("symmetrize", help="greedy block flips lowering mu")
    s.add_argument("file")
    s.add_argument("--subloop", required=True, help="1-based positions, or 'nucleus'")
    s.add_argument("--h", required=True, help="1-based position of a central involution, or 'center'")
    s.add_argument("--out", help="write the final table here instead of stdout")
    s.set_defaults(func=cmd_symmetrize)

    s = sub.add_parser("convert", help="canonicalize a table")
    s.add_argument("file")
    s.add_argument("--as", dest="kind", choices=["loop", "quasigroup"], default="quasigroup")
    s.add_argument("--out")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("catalog", help="read loops from catalogs")
    s.add_argument("action", choices=["get", "list"])
    s.add_argument("name", nargs="?")
    s.add_argument("n", nargs="?", type=int)
    s.add_argument("m", nargs="?", type=int)
    s.add_argument("--file", help="load a catalog file first")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LoopError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
