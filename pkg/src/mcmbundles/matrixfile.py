"""Plain-text presentation files.

    # comment
    n 2
    source -2
    target -1 -1 0
    row x1 - 2*x0
    row x2 - 3*x0
    row x0^2 + x1*x2

One ``row`` line per target twist; entries within a row are separated by
``;`` and ``0`` stands for a zero entry.  Twist lists are whitespace
separated integers; ``source`` may be empty.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from .cohomology import make_bundle
from .forms import parse_form


class MatrixFileError(ValueError):
    pass


def parse_matrix_text(text, provenance="matrix"):
    n = source = target = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "n":
                n = int(rest)
            elif key == "source":
                source = tuple(int(x) for x in rest.split())
            elif key == "target":
                target = tuple(int(x) for x in rest.split())
            elif key == "row":
                rows.append([e.strip() for e in rest.split(";")] if rest else [])
            else:
                raise MatrixFileError(f"unknown keyword {key!r}")
        except ValueError as exc:
            raise MatrixFileError(f"line {lineno}: {exc}") from None
    if n is None or target is None:
        raise MatrixFileError("missing 'n' or 'target' line")
    source = source or ()
    if len(rows) != len(target):
        raise MatrixFileError(f"{len(rows)} rows for {len(target)} target twists")
    phi = []
    for i, row in enumerate(rows):
        if len(row) != len(source) and not (not source and row == [""]):
            raise MatrixFileError(f"row {i + 1} has {len(row)} entries, expected {len(source)}")
        out = []
        for j, text_ in enumerate(row[: len(source)]):
            want = target[i] - source[j]
            f = parse_form(text_, n)
            if not f.is_zero() and f.degree != want:
                raise MatrixFileError(
                    f"entry ({i + 1},{j + 1}) has degree {f.degree}, expected {want}"
                )
            out.append(f if not f.is_zero() else 0)
        phi.append(out)
    return make_bundle(n, source, target, phi, provenance)


def load_matrix_file(path, sha256=None):
    path = Path(path).resolve()
    data = path.read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if sha256 is not None and not digest.startswith(sha256):
        raise MatrixFileError(f"{path} changed since the provenance was recorded")
    prov = f"matrix(file={str(path)!r},sha256={digest[:16]!r})"
    return parse_matrix_text(data.decode("utf-8"), prov)
