"""Reader/writer for DTNS tensors and run manifests (standard library only)."""

import array
import hashlib
import json
import os
import struct
import sys

MAGIC = b"DTNS"
VERSION = 1
DTYPES = {1: "d", 2: "I"}  # binary64, uint32; both little-endian on disk


class FormatError(ValueError):
    def __init__(self, field, message):
        super().__init__(message)
        self.field = field


def decode(data):
    if len(data) < 4 or data[:4] != MAGIC:
        raise FormatError("magic", "bad magic")
    if len(data) < 8:
        raise FormatError("header", "truncated header")
    version, dtype, ndim = struct.unpack_from("<HBB", data, 4)
    if version != VERSION:
        raise FormatError("version", f"unsupported version {version}")
    if dtype not in DTYPES:
        raise FormatError("dtype", f"unsupported dtype {dtype}")
    if len(data) < 8 + 8 * ndim:
        raise FormatError("header", "truncated dims")
    dims = list(struct.unpack_from(f"<{ndim}Q", data, 8))
    count = 1
    for d in dims:
        count *= d
    values = array.array(DTYPES[dtype])
    offset = 8 + 8 * ndim
    if len(data) - offset != count * values.itemsize:
        raise FormatError("payload", "payload length does not match dims")
    values.frombytes(data[offset:])
    if sys.byteorder != "little":
        values.byteswap()
    return dims, values


def encode(dims, values):
    code = {"d": 1, "I": 2}[values.typecode]
    body = array.array(values.typecode, values)
    if sys.byteorder != "little":
        body.byteswap()
    return MAGIC + struct.pack(f"<HBB{len(dims)}Q", VERSION, code, len(dims), *dims) + body.tobytes()


def read(path):
    with open(path, "rb") as f:
        return decode(f.read())


def write(path, dims, values):
    with open(path, "wb") as f:
        f.write(encode(dims, values))


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def verify_manifest(manifest_path):
    """Returns a list of problems; empty when every file is present and matches."""
    with open(manifest_path) as f:
        manifest = json.load(f)
    root = os.path.dirname(os.path.abspath(manifest_path))
    problems = []
    seen = set()
    for entry in manifest["files"]:
        rel = entry["path"]
        if rel in seen:
            problems.append(f"{rel}: listed twice")
        seen.add(rel)
        path = os.path.join(root, rel)
        if not os.path.exists(path):
            problems.append(f"{rel}: missing")
        elif sha256(path) != entry["checksum"]:
            problems.append(f"{rel}: checksum mismatch")
    return problems


if __name__ == "__main__":
    for p in sys.argv[1:]:
        if p.endswith(".json"):
            issues = verify_manifest(p)
            print(p, "ok" if not issues else "; ".join(issues))
        else:
            dims, values = read(p)
            print(p, dims, values.typecode, len(values))
