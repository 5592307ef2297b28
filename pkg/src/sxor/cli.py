"""Command-line front end.

Subcommands: encode, decode, analyze, classify, check, matrix print,
matrix load.  Exit codes: 0 on success, 1 for runtime failures (bad
files, undecodable or corrupt packets, a failed MDS check), 2 for usage
errors (bad invocation, wrong packet count, empty input).

Packets are written as ``<name>.p<i>.sxp`` next to a ``<name>.sxmeta``
sidecar recording the original byte length; decode finds the sidecar by
stripping the packet suffix from the first packet argument.  The field
modulus comes from --g, else the SXOR_DEFAULT_G environment variable,
else the built-in table entry for the smallest degree that fits N.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from .analysis import comparison_report, emit_comparison, emit_report, enumerate_classes
from .codec import (NotMonomialMatrix, PacketFormatError, SingularSubmatrix, TrailingBits,
                    ZigzagStuck, encode, map_decode, read_packet, write_packet, zigzag_decode)
from .codes import (GenMatrix, MatrixFormatError, build_sxor, build_systematic_sxor,
                    builtin_zd_k3, format_matrix, load_matrix)
from .gf2m import default_modulus
from .gf2poly import InconsistentDivision, Poly2

__all__ = ["main"]

_PACKET_SUFFIX = re.compile(r"\.p(\d+)\.sxp$")


class _UsageError(Exception):
    """Invocation problem detected after argument parsing."""


def _resolve_g(args, n: int) -> Poly2:
    if getattr(args, "g", None):
        return Poly2.from_hex(args.g)
    env = os.environ.get("SXOR_DEFAULT_G")
    if env:
        return Poly2.from_hex(env)
    return default_modulus(n.bit_length())


def _parse_x(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part, 10) for part in text.split(","))
    except ValueError:
        raise _UsageError(f"--x must be comma-separated integers, got {text!r}") from None


def _resolve_matrix(args) -> GenMatrix:
    if getattr(args, "matrix", None):
        return load_matrix(args.matrix)
    kind = args.kind
    if kind == "user":
        raise _UsageError("kind user needs --matrix")
    if kind == "zd3":
        return builtin_zd_k3()
    if args.k is None or args.n is None:
        raise _UsageError(f"kind {kind} needs --k and --n (or --matrix)")
    g = _resolve_g(args, args.n)
    if kind == "sxor":
        if getattr(args, "x", None):
            raise _UsageError("--x only applies to systematic codes")
        return build_sxor(args.k, args.n, g)
    x = _parse_x(args.x) if getattr(args, "x", None) else tuple(range(1, args.k + 1))
    return build_systematic_sxor(args.k, args.n, g, x)


def _rebuild_from_spec(spec) -> GenMatrix:
    if spec.kind == "sxor":
        return build_sxor(spec.k, spec.n, spec.g)
    if spec.kind == "systematic":
        return build_systematic_sxor(spec.k, spec.n, spec.g, spec.x)
    if spec.kind == "zd3":
        return builtin_zd_k3()
    raise _UsageError("user-kind packets need --matrix to decode")


def cmd_encode(args) -> int:
    mat = _resolve_matrix(args)
    data = Path(args.input).read_bytes()
    if not data:
        raise _UsageError(f"input file {args.input} is empty")
    k = mat.spec.k
    chunk = (len(data) + k - 1) // k
    length = chunk * 8
    sources = [int.from_bytes(data[i * chunk:(i + 1) * chunk].ljust(chunk, b"\0"), "little")
               for i in range(k)]
    packets = encode(mat, sources, length)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).name
    for p in packets:
        write_packet(p, out_dir / f"{stem}.p{p.index}.sxp")
    meta = (f"len={len(data)} k={k} n={mat.spec.n} "
            f"g=0x{mat.spec.g.mask:x} kind={mat.spec.kind}")
    if mat.spec.x is not None:
        meta += " x=" + ",".join(str(i) for i in mat.spec.x)
    (out_dir / f"{stem}.sxmeta").write_text(meta + "\n", encoding="ascii")
    print(f"wrote {mat.spec.n} packets and {stem}.sxmeta to {out_dir}")
    return 0


def _read_sidecar(first_packet: Path) -> dict[str, str] | None:
    name = first_packet.name
    m = _PACKET_SUFFIX.search(name)
    if not m:
        return None
    sidecar = first_packet.parent / (name[:m.start()] + ".sxmeta")
    if not sidecar.exists():
        return None
    fields = {}
    for part in sidecar.read_text(encoding="ascii").split():
        key, _, value = part.partition("=")
        fields[key] = value
    return fields


def cmd_decode(args) -> int:
    packets = [read_packet(Path(p)) for p in args.packets]
    spec = packets[0].spec
    if len(packets) != spec.k:
        raise _UsageError(f"this code needs exactly {spec.k} packets, got {len(packets)}")
    for p in packets[1:]:
        if p.spec != spec:
            raise ValueError("packet headers disagree about the code")
    if getattr(args, "matrix", None):
        mat = load_matrix(args.matrix)
        if mat.spec != spec:
            raise ValueError("--matrix does not match the packet headers")
    else:
        mat = _rebuild_from_spec(spec)

    total_len = args.length
    meta = _read_sidecar(Path(args.packets[0]))
    if meta is not None:
        if ("k" in meta and int(meta["k"]) != spec.k) or \
           ("n" in meta and int(meta["n"]) != spec.n) or \
           ("kind" in meta and meta["kind"] != spec.kind) or \
           ("g" in meta and int(meta["g"], 16) != spec.g.mask):
            raise ValueError("sidecar metadata does not match the packet headers")
        if total_len is None and "len" in meta:
            total_len = int(meta["len"])
    if total_len is None:
        raise _UsageError("original length unknown: no sidecar found, pass --length")

    decoder = zigzag_decode if args.decoder == "zigzag" else map_decode
    sources = decoder(mat, packets)
    bit_len = packets[0].source_len
    if bit_len % 8:
        raise ValueError(f"source length {bit_len} is not a whole number of bytes")
    chunk = bit_len // 8
    blob = b"".join(s.mask.to_bytes(chunk, "little") for s in sources)
    if total_len > len(blob):
        raise ValueError(f"sidecar length {total_len} exceeds decoded size {len(blob)}")
    Path(args.out).write_bytes(blob[:total_len])
    print(f"restored {total_len} bytes to {args.out}")
    return 0


def cmd_analyze(args) -> int:
    if args.compare:
        n = args.n if args.n is not None else 7
        ks = tuple(k for k in range(2, 7) if k <= n)
        print(emit_comparison(comparison_report(n, ks), args.format), end="")
        return 0
    mat = _resolve_matrix(args)
    met = mat.metrics()
    s = mat.spec
    if args.format == "json":
        print(json.dumps({
            "kind": s.kind, "K": s.k, "N": s.n, "m": s.m, "g": "0x" + s.g.to_hex(),
            "x": list(s.x) if s.x is not None else None,
            "l_max": met.l_max, "l_sum": met.l_sum, "alpha": met.alpha,
            "overheads": list(mat.column_overheads()),
        }, indent=2))
    else:
        extra = f" x={','.join(str(i) for i in s.x)}" if s.x is not None else ""
        print(f"kind={s.kind} K={s.k} N={s.n} m={s.m} g=0x{s.g.to_hex()}{extra}")
        print(f"l_max={met.l_max} l_sum={met.l_sum} alpha={met.alpha}")
        print("overheads: " + ",".join(str(o) for o in mat.column_overheads()))
    return 0


def cmd_classify(args) -> int:
    g = _resolve_g(args, args.n)
    report = enumerate_classes(args.k, args.n, g)
    if args.format == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        print(emit_report([report], "markdown"), end="")
    return 0


def cmd_check(args) -> int:
    mat = _resolve_matrix(args)
    ok, failing = mat.check_suboptimal()
    print(f"sub-optimal: {'true' if ok else 'false'}")
    for comb in failing:
        print("failing: " + ",".join(str(j) for j in comb))
    return 0 if ok else 1


def cmd_matrix_print(args) -> int:
    mat = _resolve_matrix(args)
    text = format_matrix(mat)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        print(text, end="")
    return 0


def cmd_matrix_load(args) -> int:
    mat = load_matrix(args.file)
    met = mat.metrics()
    s = mat.spec
    extra = f" x={','.join(str(i) for i in s.x)}" if s.x is not None else ""
    print(f"kind={s.kind} K={s.k} N={s.n} m={s.m} g=0x{s.g.to_hex()}{extra}")
    print(f"l_max={met.l_max} l_sum={met.l_sum} alpha={met.alpha}")
    return 0


def _add_code_args(p: argparse.ArgumentParser, with_x: bool = True) -> None:
    p.add_argument("--kind", choices=["sxor", "systematic", "zd3", "user"],
                   default="sxor", help="code construction (default: sxor)")
    p.add_argument("--k", type=int, help="number of source packets")
    p.add_argument("--n", type=int, help="number of encoded packets")
    p.add_argument("--g", help="field modulus as a hex mask, e.g. 0xb")
    if with_x:
        p.add_argument("--x", help="systematic packet positions, e.g. 1,3,4 (default 1..K)")
    p.add_argument("--matrix", help="generator matrix file (required for kind user)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sxor",
        description="Shift-and-XOR erasure codes: encode, decode, analyze.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="split one file into N packet files")
    _add_code_args(p)
    p.add_argument("input", help="file to encode")
    p.add_argument("--out-dir", default=".", help="directory for packet files")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="restore the file from K packet files")
    p.add_argument("packets", nargs="+", help="surviving packet files")
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--decoder", choices=["map", "zigzag"], default="map")
    p.add_argument("--matrix", help="generator matrix file (user-kind packets)")
    p.add_argument("--length", type=int, help="original byte length (overrides sidecar)")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("analyze", help="overhead and XOR-cost metrics")
    _add_code_args(p)
    p.add_argument("--compare", action="store_true",
                   help="side-by-side table of all constructions for K=2..6")
    p.add_argument("--format", choices=["markdown", "json"], default="markdown")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="equivalence classes of systematic codes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", help="field modulus as a hex mask")
    p.add_argument("--format", choices=["markdown", "json"], default="markdown")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="verify every K-subset of packets decodes")
    _add_code_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("matrix", help="matrix file utilities")
    msub = p.add_subparsers(dest="matrix_command", required=True)
    mp = msub.add_parser("print", help="emit a generator matrix in text form")
    _add_code_args(mp)
    mp.add_argument("--out", help="write to a file instead of stdout")
    mp.set_defaults(func=cmd_matrix_print)
    ml = msub.add_parser("load", help="validate a matrix file and summarize it")
    ml.add_argument("file")
    ml.set_defaults(func=cmd_matrix_load)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (MatrixFormatError, PacketFormatError, InconsistentDivision, TrailingBits,
            SingularSubmatrix, NotMonomialMatrix, ZigzagStuck,
            ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
