"""Command-line front end.

Ingests symbol streams (ascii digits, hex, or raw bytes), dispatches to the
library, and emits CSV or JSON built for golden tests and plotting: LF line
endings, stable key order, a schema marker on every JSON document, and
byte-identical output for a fixed seed regardless of parallelism.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .adic2 import adic_profile, minimal_pair, phi, unit_pair
from .cfrac import (
    diagonal_transform,
    iterate_transform,
    shifted_transforms,
    split_transform,
    transform,
)
from .field import FieldSpec, make_field
from .profiles import profile
from .stats import (
    FUNCTIONALS,
    MCConfig,
    count_N,
    expected_J,
    monte_carlo,
    pattern_probability,
    recurrence_delta,
)

SCHEMA = 1
STATE_GUARD = 1 << 26


class CLIError(Exception):
    """User-facing input or argument problem."""


# ---------------------------------------------------------------- ingestion


def _decode_ascii(text: str, q: int, limit) -> list[int]:
    if q > 10:
        raise CLIError("ascii format supports q <= 10 (one digit per symbol)")
    symbols: list[int] = []
    pos = 0
    for ch in text:
        if ch.isspace():
            continue
        pos += 1
        if not ch.isdigit() or int(ch) >= q:
            raise CLIError(f"invalid symbol {ch!r} at position {pos} (q={q})")
        symbols.append(int(ch))
        if limit is not None and len(symbols) >= limit:
            break
    return symbols


def _decode_hex(text: str, limit) -> list[int]:
    bits: list[int] = []
    pos = 0
    for ch in text:
        if ch.isspace():
            continue
        pos += 1
        try:
            val = int(ch, 16)
        except ValueError:
            raise CLIError(f"invalid hex digit {ch!r} at position {pos}") from None
        bits.extend((val >> s) & 1 for s in (3, 2, 1, 0))
        if limit is not None and len(bits) >= limit:
            break
    return bits if limit is None else bits[:limit]


def _decode_raw(data: bytes, bit_order: str, limit) -> list[int]:
    shifts = (7, 6, 5, 4, 3, 2, 1, 0) if bit_order == "msb" else (0, 1, 2, 3, 4, 5, 6, 7)
    bits: list[int] = []
    for byte in data:
        bits.extend((byte >> s) & 1 for s in shifts)
        if limit is not None and len(bits) >= limit:
            break
    return bits if limit is None else bits[:limit]


def _read_stream(args, field: FieldSpec) -> list[int]:
    if getattr(args, "random", None) is not None:
        rng = np.random.default_rng(np.random.SeedSequence(args.seed))
        return [int(s) for s in rng.integers(0, field.q, args.random)]
    if args.format in ("hex", "raw-bytes") and field.q != 2:
        raise CLIError(f"{args.format} format requires q=2")
    if args.source == "-":
        data = sys.stdin.buffer.read()
    else:
        try:
            with open(args.source, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise CLIError(str(exc)) from None
    if args.format == "raw-bytes":
        return _decode_raw(data, args.bit_order, args.limit)
    text = data.decode("utf-8", errors="strict")
    if args.format == "ascii":
        return _decode_ascii(text, field.q, args.limit)
    return _decode_hex(text, args.limit)


# ----------------------------------------------------------------- emission


def _encode_word(word: Sequence[int], fmt: str, bit_order: str) -> bytes:
    if fmt == "ascii":
        return ("".join(str(s) for s in word) + "\n").encode()
    bits = list(word)
    if fmt == "hex":
        while len(bits) % 4:
            bits.append(0)
        digits = "".join(
            f"{(b0 << 3) | (b1 << 2) | (b2 << 1) | b3:x}"
            for b0, b1, b2, b3 in zip(*(iter(bits),) * 4)
        )
        return (digits + "\n").encode()
    while len(bits) % 8:
        bits.append(0)
    shifts = (7, 6, 5, 4, 3, 2, 1, 0) if bit_order == "msb" else (0, 1, 2, 3, 4, 5, 6, 7)
    return bytes(
        sum(b << s for b, s in zip(chunk, shifts))
        for chunk in zip(*(iter(bits),) * 8)
    )


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _json_bytes(payload: dict) -> bytes:
    doc = {"schema": SCHEMA, **payload}
    return (json.dumps(doc, sort_keys=True, default=_json_default) + "\n").encode()


def _csv_bytes(header: Sequence[str], rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode()


def _write_out(data: bytes, path: str | None) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _fraction_fields(value: Fraction) -> dict:
    return {"value": str(value), "decimal": float(value)}


# --------------------------------------------------------------- subcommands


def _field_from_args(args) -> FieldSpec:
    modulus = None
    if getattr(args, "modulus", None):
        try:
            modulus = tuple(int(c) for c in args.modulus.split(","))
        except ValueError:
            raise CLIError(f"bad modulus {args.modulus!r}: expected comma-separated integers") from None
    try:
        return make_field(args.q, p=args.p, e=args.e, modulus=modulus)
    except ValueError as exc:
        raise CLIError(str(exc)) from None


def cmd_profile(args) -> int:
    field = _field_from_args(args)
    word = _read_stream(args, field)
    series = profile(word, field)
    header = ["n", "L", "m", "J"]
    columns = {
        "n": list(range(1, len(word) + 1)),
        "L": [int(x) for x in series.L[1:]],
        "m": [int(x) for x in series.m[1:]],
        "J": [int(x) for x in series.J[1:]],
    }
    if args.emit_k:
        split = split_transform(word, field)
        header += ["K", "K_D", "K_C"]
        columns["K"] = list(split.word)
        columns["K_D"] = [s if side == "D" else "" for (side, _), s in zip(split.tags, split.word)]
        columns["K_C"] = [s if side == "C" else "" for (side, _), s in zip(split.tags, split.word)]
    if args.json:
        payload = {"op": "profile", "q": field.q, "n": len(word)}
        payload.update({k: columns[k] for k in header if k != "n"})
        _write_out(_json_bytes(payload), args.out)
    else:
        rows = zip(*(columns[h] for h in header)) if word else []
        _write_out(_csv_bytes(header, rows), args.out)
    return 0


def cmd_kmap(args) -> int:
    field = _field_from_args(args)
    word = _read_stream(args, field)
    out = transform(word, field)
    _write_out(_encode_word(out, args.format, args.bit_order), args.out)
    return 0


def cmd_iterate(args) -> int:
    field = _field_from_args(args)
    word = _read_stream(args, field)
    if args.diagonal:
        out = diagonal_transform(word, field)
    else:
        if args.count < 0:
            raise CLIError("--count must be >= 0")
        out = iterate_transform(word, field, args.count)
    _write_out(_encode_word(out, args.format, args.bit_order), args.out)
    return 0


def cmd_shifted(args) -> int:
    field = _field_from_args(args)
    word = _read_stream(args, field)
    rows = [
        (s, "".join(str(sym) for sym in w))
        for s, w in enumerate(shifted_transforms(word, field))
    ]
    _write_out(_csv_bytes(["shift", "word"], rows), args.out)
    return 0


def cmd_adic(args) -> int:
    field = _field_from_args(args)
    if field.q != 2:
        raise CLIError("adic requires q=2")
    word = _read_stream(args, field)
    prof = adic_profile(word)
    header = ["n", "A", "J_A", "m_A", "phi2", "c", "d"]
    rows = [
        (i + 1, prof.a_bits[i], prof.j_a[i], prof.m_a[i], prof.phi2[i],
         prof.pairs[i][0], prof.pairs[i][1])
        for i in range(prof.n)
    ]
    if args.json:
        payload = {
            "op": "adic",
            "n": prof.n,
            "A": list(prof.a_bits),
            "J_A": list(prof.j_a),
            "m_A": list(prof.m_a),
            "phi2": list(prof.phi2),
            "c": [p[0] for p in prof.pairs],
            "d": [p[1] for p in prof.pairs],
        }
        _write_out(_json_bytes(payload), args.out)
    else:
        _write_out(_csv_bytes(header, rows), args.out)
    return 0


def cmd_stats(args) -> int:
    try:
        if args.stat == "count":
            value = Fraction(count_N(args.t, args.m, args.q))
            payload = {"op": "count", "q": args.q, "t": args.t, "m": args.m}
        elif args.stat == "meanJ":
            value = expected_J(args.t, args.q)
            payload = {"op": "meanJ", "q": args.q, "t": args.t}
        elif args.stat == "delta":
            value = recurrence_delta(args.k, args.l, args.q)
            payload = {"op": "delta", "q": args.q, "k": args.k, "l": args.l}
        else:
            try:
                pattern = tuple(int(x) for x in args.pattern.split(","))
            except ValueError:
                raise CLIError(f"bad pattern {args.pattern!r}: expected comma-separated integers") from None
            value = pattern_probability(pattern, args.q)
            payload = {"op": "pattern", "q": args.q, "pattern": list(pattern)}
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    payload.update(_fraction_fields(value))
    _write_out(_json_bytes(payload), args.out)
    return 0


def cmd_montecarlo(args) -> int:
    if args.functional not in FUNCTIONALS:
        raise CLIError(f"unknown functional {args.functional!r}; choose from {', '.join(FUNCTIONALS)}")
    try:
        cfg = MCConfig(
            q=args.q,
            n=args.n,
            trials=args.trials,
            seed=args.seed,
            parallel_chunks=args.chunks,
            eps=args.eps,
            stride=args.stride,
        )
        result = monte_carlo(cfg, args.functional)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    if args.out is not None:
        rows = [
            (t, int(n), int(v))
            for t, traj in enumerate(result.trajectories)
            for n, v in zip(result.checkpoints, traj)
        ]
        _write_out(_csv_bytes(["trial", "n", "value"], rows), args.out)
    _write_out(_json_bytes(result.summary()), args.summary)
    return 0


# ------------------------------------------------------------------- verify


def _guard_states(states: int) -> None:
    if states > STATE_GUARD:
        raise CLIError(f"refusing exhaustive run over {states} states (limit 2^26)")


def _verify_counting(args, report) -> bool:
    field = make_field(args.q)
    _guard_states(args.q ** args.t)
    tallies: dict[int, Counter] = {t: Counter() for t in range(1, args.t + 1)}
    for word in product(range(args.q), repeat=args.t):
        series = profile(word, field)
        for t in range(1, args.t + 1):
            tallies[t][int(series.m[t])] += 1
    ok = True
    for t in range(1, args.t + 1):
        expected = {}
        for m in range(-t, t + 1):
            if (t - m) % 2 == 0 or m == -t:
                try:
                    expected[m] = count_N(t, m, args.q) * args.q ** (args.t - t)
                except ValueError:
                    pass
        expected = {m: c for m, c in expected.items() if c}
        if tallies[t] != Counter(expected):
            report.append(f"counting: deviation histogram at t={t}: FAIL")
            ok = False
    if ok:
        report.append(f"counting: deviation histogram vs closed form, q={args.q}, t<={args.t}: OK")
    return ok


def _verify_equidist(args, report) -> bool:
    if args.q != 2:
        raise CLIError("equidist suite is binary only")
    field = make_field(2)
    _guard_states(1 << (2 * args.n))
    tally = Counter()
    for word in product((0, 1), repeat=2 * args.n):
        d = split_transform(word, field).d_word
        tally[d[: args.n]] += 1
    want = 1 << args.n
    ok = len(tally) == want and all(c == want for c in tally.values())
    report.append(
        f"equidist: first {args.n} degree-side symbols over all {4 ** args.n} "
        f"streams of length {2 * args.n}: " + ("OK" if ok else "FAIL")
    )
    return ok


def _verify_translation(args, report) -> bool:
    field = make_field(args.q)
    _guard_states(args.q ** (args.n + 1))
    ok = True
    for t in range(args.n + 1):
        for word in product(range(args.q), repeat=t):
            m_here = int(profile(word, field).m[t]) if t else 0
            nexts = Counter(
                int(profile(word + (s,), field).m[t + 1]) for s in range(args.q)
            )
            if m_here > 0:
                want = Counter({m_here - 1: args.q})
            else:
                want = Counter({m_here - 1: 1, 1 - m_here: args.q - 1})
            if nexts != want:
                report.append(f"translation: step rule at {word}: FAIL")
                ok = False
    if ok:
        report.append(f"translation: one-step deviation rule, q={args.q}, n<={args.n}: OK")
    # same deviation => same distribution of later deviations
    dist: dict[tuple[int, int], Counter] = {}
    horizon = min(args.t, 6)
    for plen in range(min(args.n, 4) + 1):
        for word in product(range(args.q), repeat=plen):
            m_here = int(profile(word, field).m[plen]) if plen else 0
            tally = Counter(
                int(profile(word + ext, field).m[plen + horizon])
                for ext in product(range(args.q), repeat=horizon)
            )
            key = (m_here, horizon)
            if key in dist and dist[key] != tally:
                report.append(f"translation: distribution split at m={m_here}: FAIL")
                ok = False
            dist.setdefault(key, tally)
    if ok:
        report.append(
            f"translation: deviation distribution depends only on current value, "
            f"horizon {horizon}: OK"
        )
    return ok


def _verify_isometry(args, report) -> bool:
    field = make_field(args.q)
    _guard_states(args.q ** args.n)
    words = list(product(range(args.q), repeat=args.n))
    images = [transform(w, field) for w in words]
    ok = len(set(images)) == len(words)
    # transform is causal (prefix-determined), so per-length injectivity is
    # exactly first-difference preservation
    for n in range(1, args.n):
        if len({im[:n] for im in images}) != args.q ** n:
            ok = False
    report.append(
        f"isometry: injective on every prefix length <= {args.n}, q={args.q}: "
        + ("OK" if ok else "FAIL")
    )
    return ok


def _verify_adic_oracle(args, report) -> bool:
    _guard_states(1 << args.k)
    ok = True
    for k in range(1, args.k + 1):
        mod = 1 << k
        for a in range(mod):
            free = minimal_pair(a, k)
            unit = unit_pair(a, k)
            best_free = None
            best_unit = None
            q = 0
            while (
                best_free is None
                or best_unit is None
                or q < max(best_free, best_unit)
            ):
                if q == 0:
                    f = mod
                    odd = False
                else:
                    pr = (q * a) % mod
                    p = pr if pr <= mod - pr else pr - mod
                    f = max(abs(p), q)
                    odd = bool(q & 1)
                if best_free is None or f < best_free:
                    best_free = f
                if odd and (best_unit is None or f < best_unit):
                    best_unit = f
                q += 1
            if phi(*free) != best_free or phi(*unit) != best_unit:
                report.append(f"adic-oracle: pair size mismatch at a={a}, k={k}: FAIL")
                ok = False
    if ok:
        report.append(f"adic-oracle: lattice minima vs brute force, k<={args.k}: OK")
    return ok


_SUITES = {
    "counting": _verify_counting,
    "equidist": _verify_equidist,
    "translation": _verify_translation,
    "isometry": _verify_isometry,
    "adic-oracle": _verify_adic_oracle,
}


def cmd_verify(args) -> int:
    report: list[str] = []
    ok = _SUITES[args.suite](args, report)
    report.append("result: PASS" if ok else "result: FAIL")
    _write_out(("\n".join(report) + "\n").encode(), args.out)
    return 0 if ok else 1


# -------------------------------------------------------------------- parser


def _add_field_flags(sp) -> None:
    sp.add_argument("--q", type=int, default=None, help="field size (prime power)")
    sp.add_argument("--p", type=int, default=None, help="field characteristic")
    sp.add_argument("--e", type=int, default=None, help="extension degree")
    sp.add_argument("--modulus", default=None, help="comma-separated modulus coefficients, descending")


def _add_input_flags(sp) -> None:
    sp.add_argument("source", nargs="?", default="-", help="input path, or - for stdin")
    sp.add_argument("--format", choices=("ascii", "hex", "raw-bytes"), default="ascii")
    sp.add_argument(
        "--bit-order", choices=("msb", "lsb"), default="msb",
        help="bit order within raw bytes; msb unless stated otherwise",
    )
    sp.add_argument("--limit", type=int, default=None, help="max symbols to ingest")
    sp.add_argument("--random", type=int, default=None, metavar="N",
                    help="generate N uniform symbols instead of reading input")
    sp.add_argument("--seed", type=int, default=0, help="seed for --random")
    sp.add_argument("--out", default=None, help="output path (default stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfiso",
        description="Complexity profiles, stream isometries, and exact statistics over F_q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profile", help="linear complexity profile of a stream")
    _add_field_flags(sp)
    _add_input_flags(sp)
    sp.add_argument("--emit-k", action="store_true", help="include transform columns")
    sp.add_argument("--json", action="store_true", help="JSON instead of CSV")
    sp.set_defaults(handler=cmd_profile)

    sp = sub.add_parser("kmap", help="apply the stream transform")
    _add_field_flags(sp)
    _add_input_flags(sp)
    sp.set_defaults(handler=cmd_kmap)

    sp = sub.add_parser("iterate", help="iterate the transform, or its diagonal")
    _add_field_flags(sp)
    _add_input_flags(sp)
    sp.add_argument("--count", type=int, default=1, help="number of applications")
    sp.add_argument("--diagonal", action="store_true",
                    help="diagonal of all iterates instead of a fixed count")
    sp.set_defaults(handler=cmd_iterate)

    sp = sub.add_parser("shifted", help="transforms of every suffix")
    _add_field_flags(sp)
    _add_input_flags(sp)
    sp.set_defaults(handler=cmd_shifted)

    sp = sub.add_parser("adic", help="2-adic approximation profile (q=2)")
    _add_field_flags(sp)
    _add_input_flags(sp)
    sp.add_argument("--json", action="store_true", help="JSON instead of CSV")
    sp.set_defaults(handler=cmd_adic)

    sp = sub.add_parser("stats", help="exact closed-form statistics")
    stats_sub = sp.add_subparsers(dest="stat", required=True)
    for name in ("count", "meanJ", "delta", "pattern"):
        ssp = stats_sub.add_parser(name)
        ssp.add_argument("--q", type=int, required=True)
        if name in ("count", "meanJ"):
            ssp.add_argument("--t", type=int, required=True)
        if name == "count":
            ssp.add_argument("--m", type=int, required=True)
        if name == "delta":
            ssp.add_argument("--k", type=int, required=True)
            ssp.add_argument("--l", type=int, required=True)
        if name == "pattern":
            ssp.add_argument("--pattern", required=True,
                             help="comma-separated deviation values")
        ssp.add_argument("--out", default=None)
        ssp.set_defaults(handler=cmd_stats)

    sp = sub.add_parser("montecarlo", help="seeded trials against the soft bands")
    sp.add_argument("--functional", required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--eps", type=float, default=0.01)
    sp.add_argument("--chunks", type=int, default=1, help="parallel fan-out; output independent of it")
    sp.add_argument("--stride", type=int, default=0, help="checkpoint decimation (0 = auto)")
    sp.add_argument("--out", default=None, help="per-trial trajectory CSV path")
    sp.add_argument("--summary", default=None, help="summary JSON path (default stdout)")
    sp.set_defaults(handler=cmd_montecarlo)

    sp = sub.add_parser("verify", help="exhaustive identity checks; exit 0 iff all pass")
    sp.add_argument("suite", choices=sorted(_SUITES))
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--t", type=int, default=8, help="stream length bound")
    sp.add_argument("--n", type=int, default=8, help="word length bound")
    sp.add_argument("--k", type=int, default=12, help="lattice precision bound")
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
