"""Binary PGM (P5) readers and writers for masks and verdict maps.

Images are written top row first, so row 0 of the file is the grid's top
row (largest imaginary part).  A single comment line in the header carries
the grid geometry (origin, pixel) plus the mask kind or the map budgets;
floats are stored via repr and round-trip exactly.

Pixel values: masks use 0 (off) / 255 (on); verdict maps use 0 (diverge),
128 (undetermined), 255 (converge).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .geometry import COMPACT, DOMAIN, OPEN, Grid, RegionMask
from .series import ConvergenceMap, Verdict

MASK_TAG = "sigmaconv-mask"
MAP_TAG = "sigmaconv-map"

_MAP_VALUES = {Verdict.DIVERGE: 0, Verdict.UNDETERMINED: 128,
               Verdict.CONVERGE: 255}
_MAP_VERDICTS = {v: k for k, v in _MAP_VALUES.items()}


def _meta_line(tag: str, fields: dict[str, str]) -> str:
    parts = [tag] + [f"{k}={v}" for k, v in fields.items()]
    return " ".join(parts)


def _parse_meta(comment: str) -> tuple[str, dict[str, str]]:
    parts = comment.split()
    if not parts:
        raise ValueError("empty metadata comment")
    fields = {}
    for part in parts[1:]:
        if "=" not in part:
            raise ValueError(f"malformed metadata field {part!r}")
        k, _, v = part.partition("=")
        fields[k] = v
    return parts[0], fields


def _grid_fields(grid: Grid) -> dict[str, str]:
    return {"origin": f"{grid.origin.real!r},{grid.origin.imag!r}",
            "pixel": repr(grid.pixel)}


def _grid_from_fields(fields: dict[str, str], width: int, height: int) -> Grid:
    ox, _, oy = fields["origin"].partition(",")
    return Grid(complex(float(ox), float(oy)), float(fields["pixel"]),
                width, height)


def _write_pgm(path: str | Path, rows: np.ndarray, comment: str) -> None:
    height, width = rows.shape
    header = f"P5\n# {comment}\n{width} {height}\n255\n"
    # file rows run top-down; grid rows run bottom-up
    body = np.ascontiguousarray(rows[::-1, :]).tobytes()
    Path(path).write_bytes(header.encode("ascii") + body)


def _read_pgm(path: str | Path) -> tuple[int, int, np.ndarray, list[str]]:
    data = Path(path).read_bytes()
    comments: list[str] = []
    tokens: list[int] = []
    pos = 0
    # header = 4 whitespace-separated tokens, with '#' comments to EOL
    while len(tokens) < 4 and pos < len(data):
        c = data[pos:pos + 1]
        if c == b"#":
            eol = data.find(b"\n", pos)
            if eol < 0:
                raise ValueError(f"{path}: unterminated comment")
            comments.append(data[pos + 1:eol].decode("ascii").strip())
            pos = eol + 1
        elif c.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace() \
                    and data[end:end + 1] != b"#":
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if len(tokens) < 4:
        raise ValueError(f"{path}: truncated PGM header")
    if tokens[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (magic {tokens[0]!r})")
    width, height, maxval = (int(t) for t in tokens[1:4])
    if maxval != 255:
        raise ValueError(f"{path}: expected maxval 255, got {maxval}")
    pos += 1  # single whitespace byte after maxval
    body = data[pos:pos + width * height]
    if len(body) != width * height:
        raise ValueError(f"{path}: pixel data truncated")
    rows = np.frombuffer(body, dtype=np.uint8).reshape(height, width)
    return width, height, rows[::-1, :].copy(), comments


def write_mask_pgm(mask: RegionMask, path: str | Path) -> None:
    fields = _grid_fields(mask.grid)
    fields["kind"] = mask.kind
    rows = np.where(mask.bits, 255, 0).astype(np.uint8)
    _write_pgm(path, rows, _meta_line(MASK_TAG, fields))


def read_mask_pgm(path: str | Path) -> RegionMask:
    width, height, rows, comments = _read_pgm(path)
    meta = None
    for comment in comments:
        tag, fields = _parse_meta(comment)
        if tag == MASK_TAG:
            meta = fields
            break
    if meta is None:
        raise ValueError(f"{path}: missing {MASK_TAG} metadata comment")
    kind = meta.get("kind", COMPACT)
    if kind not in (COMPACT, OPEN, DOMAIN):
        raise ValueError(f"{path}: unknown mask kind {kind!r}")
    bad = ~np.isin(rows, (0, 255))
    if bad.any():
        raise ValueError(f"{path}: mask pixels must be 0 or 255")
    grid = _grid_from_fields(meta, width, height)
    return RegionMask(grid, rows == 255, kind)


def write_map_pgm(cmap: ConvergenceMap, path: str | Path) -> None:
    fields = _grid_fields(cmap.grid)
    fields["N"] = str(cmap.N)
    fields["B"] = repr(cmap.B)
    fields["M"] = repr(cmap.M)
    lut = np.zeros(256, dtype=np.uint8)
    for verdict, value in _MAP_VALUES.items():
        lut[int(verdict)] = value
    _write_pgm(path, lut[cmap.verdicts], _meta_line(MAP_TAG, fields))


def read_map_pgm(path: str | Path) -> tuple[Grid, np.ndarray, dict[str, float]]:
    """Returns (grid, verdict array, budgets {'N', 'B', 'M'}).

    Tail-sup exponents are not stored in the image; reports and sidecars
    carry any further detail.
    """
    width, height, rows, comments = _read_pgm(path)
    meta = None
    for comment in comments:
        tag, fields = _parse_meta(comment)
        if tag == MAP_TAG:
            meta = fields
            break
    if meta is None:
        raise ValueError(f"{path}: missing {MAP_TAG} metadata comment")
    bad = ~np.isin(rows, (0, 128, 255))
    if bad.any():
        raise ValueError(f"{path}: map pixels must be 0, 128 or 255")
    verdicts = np.empty(rows.shape, dtype=np.int8)
    for value, verdict in _MAP_VERDICTS.items():
        verdicts[rows == value] = verdict
    grid = _grid_from_fields(meta, width, height)
    budgets = {"N": int(meta["N"]), "B": float(meta["B"]),
               "M": float(meta["M"])}
    if not math.isfinite(budgets["B"]) or not math.isfinite(budgets["M"]):
        raise ValueError(f"{path}: non-finite budgets in metadata")
    return grid, verdicts, budgets
