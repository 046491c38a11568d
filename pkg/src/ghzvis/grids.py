"""Named settings grids and the plain-text grid file format.

A grid file holds one line per party with that party's azimuths in radians,
separated by whitespace.  ``#`` starts a comment; blank lines are skipped::

    # Mermin settings
    0 1.5707963267949
    0 1.5707963267949
    0 1.5707963267949
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, TextIO

from .quantum import SettingsGrid

PI = math.pi


class GridFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<grid>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def mermin_grid(parties: int = 3) -> SettingsGrid:
    """Two settings {0, pi/2} per party."""
    return SettingsGrid.from_angles([[0.0, PI / 2]] * parties)


def chsh_grid() -> SettingsGrid:
    """Two-party settings maximizing the CHSH value of cos(alpha + beta)."""
    return SettingsGrid.from_angles([[0.0, PI / 2], [PI / 4, -PI / 4]])


def five_setting_grid() -> SettingsGrid:
    """Five equally spaced settings per party, pi/8 apart."""
    alpha = [0.0, PI / 8, PI / 4, 3 * PI / 8, PI / 2]
    beta = [-PI / 4, -PI / 8, 0.0, PI / 8, PI / 4]
    return SettingsGrid.from_angles([alpha, beta, list(beta)])


def single_setting_grid(parties: int = 3) -> SettingsGrid:
    return SettingsGrid.from_angles([[0.0]] * parties)


PRESET_GRIDS = {
    "paper-2": mermin_grid,
    "paper-5": five_setting_grid,
    "chsh": chsh_grid,
    "single": single_setting_grid,
}


def format_angle(x: float) -> str:
    return f"{x:.12g}"


def parse_grid(lines: Iterable[str], source: str = "<grid>") -> SettingsGrid:
    parties = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        row = []
        for token in text.split():
            try:
                value = float(token)
            except ValueError:
                raise GridFileError(f"cannot parse angle {token!r}", lineno, source) from None
            if not math.isfinite(value):
                raise GridFileError(f"angle {token!r} is not finite", lineno, source)
            row.append(value)
        parties.append(row)
    if len(parties) < 2:
        raise GridFileError(f"need at least 2 party lines, found {len(parties)}", None, source)
    return SettingsGrid.from_angles(parties)


def read_grid(path: str | Path) -> SettingsGrid:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GridFileError(f"cannot read grid file: {exc.strerror}", None, str(path)) from None
    return parse_grid(text.splitlines(), str(path))


def write_grid(grid: SettingsGrid, out: TextIO, comment: str | None = None) -> None:
    if comment:
        for line in comment.splitlines():
            out.write(f"# {line}\n")
    for party in grid.angles():
        out.write(" ".join(format_angle(a) for a in party) + "\n")
