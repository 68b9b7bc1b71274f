"""Text file envelopes for keys, ciphertexts and reports.

Every file starts with::

    MODLAT1
    kind=<params|masterkey|privkey|ciphertext|report>
    version=1

followed by the kind's fields in a fixed order, one ``key=value`` per
line. A subspace field is a ``subspace=<name>`` line followed by the
canonical subspace block from :mod:`modlat.serial`. Parsing is strict:
anything that would not be re-emitted byte for byte is rejected.
"""
from __future__ import annotations

import re
from typing import Iterator

from .ibe import Ciphertext, MasterKey, ParamPolicy, PrivateKey, PublicParams
from .lattice import Subspace
from .serial import FormatError, read_subspace, subspace_to_text

MAGIC = "MODLAT1"
VERSION = 1
KINDS = ("params", "masterkey", "privkey", "ciphertext", "report")

_SCHEMAS = {
    "params": [("policy", "word"), ("q", "int"), ("n", "int"), ("msgbits", "int"),
               ("issuance_bound", "int"), ("d", "subspace"), ("P", "subspace"), ("P_pub", "subspace")],
    "masterkey": [("params", "hex"), ("issued", "int"), ("s", "subspace")],
    "privkey": [("params", "hex"), ("id", "hex"), ("S_ID", "subspace")],
    "ciphertext": [("params", "hex"), ("bits", "int"), ("V", "hex"), ("U", "subspace")],
    "report": [("name", "word"), ("format", "word"), ("body", "text")],
}
_INT = re.compile(r"0|[1-9][0-9]*")
_HEX = re.compile(r"(?:[0-9a-f]{2})*")
_WORD = re.compile(r"[A-Za-z0-9_.-]+")


def _emit(kind: str, values: dict) -> str:
    out = [f"{MAGIC}\n", f"kind={kind}\n", f"version={VERSION}\n"]
    for name, typ in _SCHEMAS[kind]:
        v = values[name]
        if typ == "subspace":
            out.append(f"subspace={name}\n")
            out.append(subspace_to_text(v))
        elif typ == "hex":
            out.append(f"{name}={v.hex()}\n")
        elif typ == "text":
            out.append(f"{name}\n")
            out.append(v if v.endswith("\n") or not v else v + "\n")
        else:
            out.append(f"{name}={v}\n")
    return "".join(out)


def _field(lines: Iterator[str], name: str) -> str:
    try:
        line = next(lines)
    except StopIteration:
        raise FormatError(f"missing field {name!r}") from None
    prefix = f"{name}="
    if not line.startswith(prefix):
        raise FormatError(f"expected {prefix!r}, got {line!r}")
    return line[len(prefix):]


def parse_envelope(text: str) -> tuple[str, dict]:
    """Split a file into its kind and typed field values."""
    if not text.endswith("\n"):
        raise FormatError("file must end with a newline")
    lines = iter(text[:-1].split("\n"))
    if next(lines, None) != MAGIC:
        raise FormatError(f"missing {MAGIC} magic line")
    kind = _field(lines, "kind")
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind!r}")
    version = _field(lines, "version")
    if version != str(VERSION):
        raise FormatError(f"unsupported version {version!r}")
    values: dict = {}
    for name, typ in _SCHEMAS[kind]:
        if typ == "subspace":
            if _field(lines, "subspace") != name:
                raise FormatError(f"expected subspace {name!r}")
            values[name] = read_subspace(lines)
        elif typ == "text":
            if next(lines, None) != name:
                raise FormatError(f"expected {name!r} section")
            rest = list(lines)
            values[name] = "\n".join(rest) + "\n" if rest else ""
        else:
            raw = _field(lines, name)
            if typ == "int":
                if not _INT.fullmatch(raw):
                    raise FormatError(f"{name} must be a canonical decimal, got {raw!r}")
                values[name] = int(raw)
            elif typ == "hex":
                if not _HEX.fullmatch(raw):
                    raise FormatError(f"{name} must be lowercase hex, got {raw!r}")
                values[name] = bytes.fromhex(raw)
            else:
                if not _WORD.fullmatch(raw):
                    raise FormatError(f"bad value for {name}: {raw!r}")
                values[name] = raw
    leftover = next(lines, None)
    if leftover is not None:
        raise FormatError(f"trailing data: {leftover!r}")
    return kind, values


def _expect(text: str, kind: str) -> dict:
    got, values = parse_envelope(text)
    if got != kind:
        raise FormatError(f"expected a {kind} file, got {got}")
    return values


def _in_lattice(pub: PublicParams, *xs: Subspace) -> None:
    for x in xs:
        if not pub.policy.lattice.contains(x):
            raise FormatError("subspace does not match the parameters' field or dimension")


# -- public params ---------------------------------------------------------

def dump_params(pub: PublicParams) -> str:
    p = pub.policy
    return _emit("params", {"policy": p.name, "q": p.q, "n": p.n, "msgbits": p.message_bits,
                            "issuance_bound": p.issuance_bound, "d": pub.d, "P": pub.P, "P_pub": pub.P_pub})


def load_params(text: str) -> PublicParams:
    v = _expect(text, "params")
    try:
        policy = ParamPolicy(v["policy"], v["n"], v["q"], v["msgbits"], v["issuance_bound"])
    except ValueError as exc:
        raise FormatError(f"invalid policy: {exc}") from None
    pub = PublicParams(policy, v["d"], v["P"], v["P_pub"])
    _in_lattice(pub, pub.d, pub.P, pub.P_pub)
    return pub


# -- master key --------------------------------------------------------------

def dump_master_key(msk: MasterKey, pub: PublicParams) -> str:
    return _emit("masterkey", {"params": pub.digest, "issued": msk.issued, "s": msk.s})


def load_master_key(text: str) -> tuple[MasterKey, bytes]:
    """Returns the key and the digest of the parameters it belongs to."""
    v = _expect(text, "masterkey")
    return MasterKey(v["s"], v["issued"]), v["params"]


# -- private key -------------------------------------------------------------

def dump_private_key(key: PrivateKey, pub: PublicParams) -> str:
    return _emit("privkey", {"params": pub.digest, "id": key.id, "S_ID": key.S_ID})


def load_private_key(text: str) -> tuple[PrivateKey, bytes]:
    v = _expect(text, "privkey")
    return PrivateKey(v["id"], v["S_ID"]), v["params"]


# -- ciphertext --------------------------------------------------------------

def dump_ciphertext(c: Ciphertext) -> str:
    return _emit("ciphertext", {"params": bytes.fromhex(c.header), "bits": c.bits, "V": c.V, "U": c.U})


def load_ciphertext(text: str) -> Ciphertext:
    v = _expect(text, "ciphertext")
    if len(v["V"]) != (v["bits"] + 7) // 8:
        raise FormatError(f"V has {len(v['V'])} bytes but bits={v['bits']}")
    return Ciphertext(v["U"], v["V"], v["bits"], v["params"].hex())


# -- reports -----------------------------------------------------------------

def dump_report(name: str, fmt: str, body: str) -> str:
    return _emit("report", {"name": name, "format": fmt, "body": body})


def load_report(text: str) -> tuple[str, str, str]:
    v = _expect(text, "report")
    return v["name"], v["format"], v["body"]
