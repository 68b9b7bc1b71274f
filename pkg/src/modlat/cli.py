"""Command-line interface.

Exit codes: 0 success, 2 bad arguments / malformed input / wrong message
length, 3 setup failure, 4 issuance bound reached, 5 parameter mismatch,
6 enumeration budget exceeded, 7 other protocol refusal (degenerate
identity, no admissible ephemeral key).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .analysis import (BruteForceBDHAdversary, BudgetExceededError, CoinFlipAdversary, GameConfig,
                       OmniscientAdversary, brute_force_bdh, gaussian_coeff, monte_carlo_rank,
                       protocol_dim_stats, rank_pmf, run_cpa_game)
from .ibe import (POLICIES, IBEError, IssuanceBoundError, MessageLengthError, ParameterMismatchError,
                  ParamPolicy, SetupError, decrypt, encrypt, encrypt_traced, extract, setup)
from .rng import SeededRng
from .serial import FormatError

EXIT_OK, EXIT_USAGE, EXIT_SETUP, EXIT_BOUND, EXIT_MISMATCH, EXIT_BUDGET, EXIT_REFUSED = 0, 2, 3, 4, 5, 6, 7


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc}") from None


def _write(path: str, text: str | bytes) -> None:
    p = Path(path)
    if isinstance(text, bytes):
        p.write_bytes(text)
    else:
        p.write_text(text, encoding="utf-8", newline="\n")


def _policy(args) -> ParamPolicy:
    n = args.n if args.n is not None else (5 if args.policy == "geometry5" else 16)
    try:
        return ParamPolicy(args.policy, n, args.q, args.msgbits, getattr(args, "issuance_bound", None))
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


def _load_params(path: str):
    try:
        return formats.load_params(_read(path))
    except FormatError as exc:
        raise CliError(EXIT_USAGE, f"{path}: {exc}") from None


# -- key management --------------------------------------------------------

def cmd_setup(args) -> int:
    policy = _policy(args)
    try:
        pub, msk = setup(policy, SeededRng(args.seed))
    except SetupError as exc:
        raise CliError(EXIT_SETUP, str(exc)) from None
    _write(args.out_params, formats.dump_params(pub))
    _write(args.out_msk, formats.dump_master_key(msk, pub))
    print(f"policy={policy.name} q={policy.q} n={policy.n} dim_d={pub.d.dim} dim_P={pub.P.dim} "
          f"dim_P_pub={pub.P_pub.dim}")
    return EXIT_OK


def cmd_extract(args) -> int:
    pub = _load_params(args.params)
    try:
        msk, digest = formats.load_master_key(_read(args.msk))
    except FormatError as exc:
        raise CliError(EXIT_USAGE, f"{args.msk}: {exc}") from None
    if digest != pub.digest:
        raise CliError(EXIT_MISMATCH, "master key belongs to different parameters")
    try:
        key = extract(pub, msk, args.id.encode())
    except IssuanceBoundError as exc:
        raise CliError(EXIT_BOUND, str(exc)) from None
    except IBEError as exc:
        raise CliError(EXIT_REFUSED, str(exc)) from None
    _write(args.out, formats.dump_private_key(key, pub))
    _write(args.msk, formats.dump_master_key(msk, pub))
    print(f"id={args.id} dim_S_ID={key.S_ID.dim} issued={msk.issued}/{pub.policy.issuance_bound}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    pub = _load_params(args.params)
    message = Path(args.input).read_bytes()
    try:
        c = encrypt(pub, args.id.encode(), message, SeededRng(args.seed))
    except MessageLengthError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    except IBEError as exc:
        raise CliError(EXIT_REFUSED, str(exc)) from None
    _write(args.out, formats.dump_ciphertext(c))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    pub = _load_params(args.params)
    try:
        key, digest = formats.load_private_key(_read(args.key))
        c = formats.load_ciphertext(_read(args.input))
    except FormatError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    if digest != pub.digest:
        raise CliError(EXIT_MISMATCH, "private key belongs to different parameters")
    try:
        m = decrypt(pub, key, c)
    except ParameterMismatchError as exc:
        raise CliError(EXIT_MISMATCH, str(exc)) from None
    _write(args.out, m)
    return EXIT_OK


# -- analysis --------------------------------------------------------------

def _table(fmt: str, header: list[str], rows: list[list], text_lines: list[str]) -> str:
    if fmt == "tsv":
        return "".join("\t".join(str(c) for c in row) + "\n" for row in [header, *rows])
    return "".join(line + "\n" for line in text_lines)


def analyze_gauss(args) -> str:
    v = gaussian_coeff(args.n, args.k, args.q)
    return _table(args.format, ["n", "k", "q", "value"], [[args.n, args.k, args.q, v]], [str(v)])


def analyze_rank_dist(args) -> str:
    dist = rank_pmf(args.m, args.n, args.q)
    if not args.trials:
        rows = [[r, p, f"{float(p):.6g}"] for r, p in enumerate(dist.probabilities)]
        return _table(args.format, ["rank", "probability", "decimal"], rows,
                      [f"{r} → {p}" for r, p, _ in rows])
    rep = monte_carlo_rank(args.m, args.n, args.q, args.trials, args.seed)
    rows = [[r, dist[r], f"{float(dist[r]):.6g}", c, f"{e:.6g}", f"{z:.3f}"] for r, c, e, _, z in rep.rows()]
    lines = [f"{r} → {p} (≈{d})  observed {c}/{rep.trials} = {e}  z={z}" for r, p, d, c, e, z in rows]
    if rep.chi2 is not None:
        lines.append(f"chi2={rep.chi2:.4f} dof={rep.dof} p={rep.p_value:.4f} within_3sigma={rep.within()}")
    return _table(args.format, ["rank", "probability", "decimal", "count", "empirical", "z"], rows, lines)


def analyze_dims(args) -> str:
    st = protocol_dim_stats(_policy(args), args.trials, args.seed)
    pred = st.predicted()
    rows, lines = [], []
    for name in ("qr", "p_pub", "join", "pairing"):
        hist = getattr(st, name)
        for dim in sorted(hist):
            rows.append([name, dim, hist[dim], int(dim == pred[name])])
        lines.append(f"{name}: " + " ".join(f"{d}:{hist[d]}" for d in sorted(hist))
                     + f"  (predicted {pred[name]}: {st.frequency(name):.3f})")
    lines.append(f"completed={st.completed}/{st.trials} resampled={st.resampled} "
                 f"key_at_public_floor={st.key_at_public_floor} failures={dict(st.failures)}")
    return _table(args.format, ["quantity", "dim", "count", "predicted"], rows, lines)


def analyze_bdh(args) -> str:
    policy = _policy(args)
    root = SeededRng(args.seed)
    rows, sizes = [], []
    contained = 0
    for i in range(args.instances):
        rng = root.child(i)
        try:
            pub, msk = setup(policy, rng)
            tr = encrypt_traced(pub, rng.bytes(16), bytes(policy.message_bytes), rng)
        except IBEError:
            continue
        keys = brute_force_bdh(pub, tr.Q_ID, tr.ciphertext.U, args.budget)
        hit = tr.K in keys
        contained += hit
        sizes.append(len(keys))
        rows.append([i, len(keys), int(hit)])
    mean = sum(sizes) / len(sizes) if sizes else 0.0
    lines = [f"instances={len(sizes)} key_in_candidates={contained} mean_candidates={mean:.3f} "
             f"unique_key={sum(s == 1 for s in sizes)}"]
    return _table(args.format, ["instance", "candidates", "contains_key"], rows, lines)


_ADVERSARIES = {"coin": CoinFlipAdversary, "omniscient": OmniscientAdversary, "bruteforce": BruteForceBDHAdversary}


def analyze_game(args) -> str:
    cfg = GameConfig(_policy(args), args.trials, _ADVERSARIES[args.adversary], q_id=args.q_id,
                     leak_master_key=args.adversary == "omniscient")
    res = run_cpa_game(cfg, args.seed)
    row = [args.adversary, res.trials, res.wins, res.voided, f"{res.advantage:.6f}",
           f"{res.ci_low:.6f}", f"{res.ci_high:.6f}"]
    return _table(args.format, ["adversary", "trials", "wins", "voided", "advantage", "ci_low", "ci_high"], [row],
                  [f"adversary={row[0]} trials={row[1]} wins={row[2]} voided={row[3]} advantage={row[4]} "
                   f"ci=[{row[5]}, {row[6]}]"])


_ANALYZERS = {"gauss": analyze_gauss, "rank-dist": analyze_rank_dist, "dims": analyze_dims, "bdh": analyze_bdh,
              "game": analyze_game}


def cmd_analyze(args) -> int:
    try:
        out = _ANALYZERS[args.analysis](args)
    except BudgetExceededError as exc:
        raise CliError(EXIT_BUDGET, f"enumeration budget exceeded: needs {exc.count}, budget {exc.budget}") from None
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    sys.stdout.write(out)
    if args.out:
        _write(args.out, formats.dump_report(args.analysis, args.format, out))
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _policy_flags(p, *, default_policy: str | None = None, with_bound: bool = False):
    p.add_argument("--policy", choices=POLICIES, required=default_policy is None, default=default_policy)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, help="ambient dimension (default 5 for geometry5, else 16)")
    p.add_argument("--msgbits", type=int, default=128)
    if with_bound:
        p.add_argument("--issuance-bound", type=int, help="keys per master key (default q)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modlat", description="Identity-based encryption over subspace lattices.",
                                 epilog="exit codes: 0 ok, 2 usage or malformed input, 3 setup failed, 4 issuance bound, "
                                        "5 parameter mismatch, 6 enumeration budget, 7 refused by the scheme")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate public parameters and a master key")
    _policy_flags(p, with_bound=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--out-params", required=True)
    p.add_argument("--out-msk", required=True)
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("extract", help="issue a private key for an identity")
    p.add_argument("--params", required=True)
    p.add_argument("--msk", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("encrypt", help="encrypt a message file to an identity")
    p.add_argument("--params", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext file with a private key")
    p.add_argument("--params", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("analyze", help="combinatorial and statistical reports")
    asub = p.add_subparsers(dest="analysis", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "tsv"), default="text")
        sp.add_argument("--out", help="also write the report as a MODLAT1 report file")
        sp.set_defaults(func=cmd_analyze)

    sp = asub.add_parser("gauss", help="Gaussian binomial coefficient")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    common(sp)

    sp = asub.add_parser("rank-dist", help="rank distribution of a random matrix")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--trials", type=int, default=0, help="add a Monte Carlo comparison")
    sp.add_argument("--seed", type=_u64, default=0)
    common(sp)

    sp = asub.add_parser("dims", help="dimension chain statistics of protocol runs")
    _policy_flags(sp, default_policy="vector16ths")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=_u64, default=0)
    common(sp)

    sp = asub.add_parser("bdh", help="exhaustive session-key recovery on toy parameters")
    _policy_flags(sp, default_policy="geometry5")
    sp.add_argument("--instances", type=int, default=100)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--seed", type=_u64, default=0)
    common(sp)

    sp = asub.add_parser("game", help="IND-ID-CPA game")
    _policy_flags(sp, default_policy="geometry5")
    sp.add_argument("--adversary", choices=sorted(_ADVERSARIES), default="coin")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--q-id", type=int, default=0)
    sp.add_argument("--seed", type=_u64, default=0)
    common(sp)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"modlat: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"modlat: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
