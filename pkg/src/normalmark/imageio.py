"""Bit-exact file formats: binary PGM images, raw float images, watermark keys.

All multi-byte fields are little-endian and fixed-width: keys carry eigenvector
matrices that must survive serialization bit-exactly or extraction degrades.
Readers reject malformed input with a diagnostic instead of returning partial
data.
"""

import struct

import numpy as np

from .codec import METHOD_DUAL, METHOD_NAMES, METHOD_SKEW, METHOD_SVD, METHOD_SYM, WatermarkKey

PGM_MAGIC = b"P5"
FLOAT_MAGIC = b"NMIF"
KEY_MAGIC = b"NMWK"
KEY_VERSION = 1


class FormatError(ValueError):
    """Malformed or unsupported file content."""


# ---------------------------------------------------------------- PGM (u8)

def write_pgm(img):
    img = np.asarray(img)
    if img.dtype != np.uint8 or img.ndim != 2:
        raise FormatError(f"write_pgm: need a 2-D u8 array, got {img.dtype} {img.shape}")
    rows, cols = img.shape
    return b"P5\n%d %d\n255\n" % (cols, rows) + img.tobytes()


def read_pgm(data):
    if not data.startswith(PGM_MAGIC):
        raise FormatError("read_pgm: not a binary PGM (bad magic)")
    # header is the magic plus three ASCII integers; '#' comments run to EOL
    pos = 2
    fields = []
    while len(fields) < 3:
        if pos >= len(data):
            raise FormatError("read_pgm: truncated header")
        ch = data[pos : pos + 1]
        if ch == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif ch.isspace():
            pos += 1
        elif ch.isdigit():
            start = pos
            while pos < len(data) and data[pos : pos + 1].isdigit():
                pos += 1
            fields.append(int(data[start:pos]))
        else:
            raise FormatError(f"read_pgm: unexpected byte {ch!r} in header")
    cols, rows, maxval = fields
    if maxval != 255:
        raise FormatError(f"read_pgm: unsupported maxval {maxval} (only 255)")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError("read_pgm: missing whitespace before raster")
    pos += 1  # single whitespace byte separates header from raster
    raster = data[pos:]
    if len(raster) != rows * cols:
        raise FormatError(
            f"read_pgm: raster is {len(raster)} bytes, expected {rows * cols}"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(rows, cols).copy()


# ------------------------------------------------------- float image (NMIF)

def write_float_image(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise FormatError(f"write_float_image: need a 2-D array, got shape {img.shape}")
    rows, cols = img.shape
    return FLOAT_MAGIC + struct.pack("<II", rows, cols) + _f64(img)


def read_float_image(data):
    if not data.startswith(FLOAT_MAGIC):
        raise FormatError("read_float_image: bad magic")
    if len(data) < 12:
        raise FormatError("read_float_image: truncated header")
    rows, cols = struct.unpack_from("<II", data, 4)
    expected = 12 + 8 * rows * cols
    if len(data) != expected:
        raise FormatError(
            f"read_float_image: {len(data)} bytes, expected {expected} for {rows} x {cols}"
        )
    flat = np.frombuffer(data, dtype="<f8", count=rows * cols, offset=12)
    return flat.reshape(rows, cols).astype(np.float64)


# ---------------------------------------------------------- key file (NMWK)

# payload field order per method; (name, kind, size-fn) with sizes in values
_KEY_FIELDS = {
    METHOD_SYM: (
        ("lam_bx", "real", lambda n, m: n),
        ("u_bw", "real", lambda n, m: m * m),
        ("tri_w", "real", lambda n, m: m * (m + 1) // 2),
    ),
    METHOD_SKEW: (
        ("lam_cx", "real", lambda n, m: n),
        ("u_cw", "complex", lambda n, m: m * m),
        ("tri_w", "real", lambda n, m: m * (m + 1) // 2),
    ),
    METHOD_DUAL: (
        ("lam_bx", "real", lambda n, m: n),
        ("lam_cx", "real", lambda n, m: n),
        ("u_bw", "real", lambda n, m: m * m),
        ("u_cw", "complex", lambda n, m: m * m),
    ),
    METHOD_SVD: (
        ("s_x", "real", lambda n, m: n),
        ("u_w", "real", lambda n, m: m * m),
        ("v_w", "real", lambda n, m: m * m),
    ),
}

_SHAPES = {
    "lam_bx": lambda n, m: (n,),
    "lam_cx": lambda n, m: (n,),
    "s_x": lambda n, m: (n,),
    "tri_w": lambda n, m: (m * (m + 1) // 2,),
    "u_bw": lambda n, m: (m, m),
    "u_cw": lambda n, m: (m, m),
    "u_w": lambda n, m: (m, m),
    "v_w": lambda n, m: (m, m),
}


def _f64(arr):
    return np.ascontiguousarray(arr, dtype="<f8").tobytes()


def _c128(arr):
    # interleaved (re, im) pairs, row-major
    flat = np.ascontiguousarray(arr, dtype=np.complex128).reshape(-1)
    inter = np.empty(2 * flat.size)
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    return _f64(inter)


def write_key(key):
    if key.method not in _KEY_FIELDS:
        raise FormatError(f"write_key: unknown method {key.method!r}")
    out = [
        KEY_MAGIC,
        struct.pack("<BBd II", KEY_VERSION, key.method, key.alpha, key.n, key.m),
    ]
    for name, kind, size in _KEY_FIELDS[key.method]:
        arr = getattr(key, name)
        if arr is None:
            raise FormatError(f"write_key: method {key.method} key is missing {name}")
        arr = np.asarray(arr)
        if arr.size != size(key.n, key.m):
            raise FormatError(
                f"write_key: {name} has {arr.size} values, expected {size(key.n, key.m)}"
            )
        out.append(_c128(arr) if kind == "complex" else _f64(arr))
    return b"".join(out)


def read_key(data):
    key, used = _read_key_prefix(data)
    if used != len(data):
        raise FormatError(f"read_key: {len(data) - used} trailing bytes after key")
    return key


def write_keys(keys):
    """Concatenated key records, for block-mode embeddings."""
    return b"".join(write_key(k) for k in keys)


def read_keys(data):
    """Read concatenated key records until the byte stream is exhausted."""
    keys = []
    pos = 0
    while pos < len(data):
        key, used = _read_key_prefix(data[pos:])
        keys.append(key)
        pos += used
    if not keys:
        raise FormatError("read_keys: empty key stream")
    return keys


def _read_key_prefix(data):
    header = struct.calcsize("<BBd II")
    if len(data) < 4 + header:
        raise FormatError("read_key: truncated header")
    if data[:4] != KEY_MAGIC:
        raise FormatError("read_key: bad magic")
    version, method, alpha, n, m = struct.unpack_from("<BBd II", data, 4)
    if version != KEY_VERSION:
        raise FormatError(f"read_key: unsupported version {version}")
    if method not in _KEY_FIELDS:
        raise FormatError(f"read_key: unknown method byte {method}")
    if m > n:
        raise FormatError(f"read_key: watermark side {m} exceeds host side {n}")
    pos = 4 + header
    fields = {}
    for name, kind, size in _KEY_FIELDS[method]:
        values = size(n, m)
        nbytes = 8 * values * (2 if kind == "complex" else 1)
        if len(data) < pos + nbytes:
            raise FormatError(f"read_key: truncated payload in {name}")
        flat = np.frombuffer(data, dtype="<f8", count=nbytes // 8, offset=pos)
        if kind == "complex":
            arr = (flat[0::2] + 1j * flat[1::2]).astype(np.complex128)
        else:
            arr = flat.astype(np.float64)
        fields[name] = arr.reshape(_SHAPES[name](n, m))
        pos += nbytes
    return (
        WatermarkKey(method=method, alpha=alpha, n=n, m=m, **fields),
        pos,
    )


# ------------------------------------------------------------ file helpers

def load_image(path):
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_image(path, img):
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))


def load_float_image(path):
    with open(path, "rb") as fh:
        return read_float_image(fh.read())


def save_float_image(path, img):
    with open(path, "wb") as fh:
        fh.write(write_float_image(img))


def load_key(path):
    """Read one key, or a list of keys when the file holds several records."""
    with open(path, "rb") as fh:
        data = fh.read()
    keys = read_keys(data)
    return keys[0] if len(keys) == 1 else keys


def save_key(path, key):
    with open(path, "wb") as fh:
        fh.write(write_keys(key) if isinstance(key, (list, tuple)) else write_key(key))
