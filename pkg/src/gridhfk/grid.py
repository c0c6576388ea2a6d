"""Grid diagrams: representation, validation, file format and winding numbers.

Coordinates: columns are indexed left to right and rows bottom to top, both
starting at 0.  The dot of cell ``(c, r)`` sits at ``(c + 1/2, r + 1/2)``;
lattice points are the integer vertices ``(i, j)`` with ``0 <= i, j <= n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class GridError(ValueError):
    """Raised for malformed grid files and invalid grid diagrams."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class GridDiagram:
    """An ``n x n`` grid with one X (black) and one O (white) dot per row and column.

    ``x_rows[c]`` is the row of the X in column ``c``; ``o_rows[c]`` likewise
    for the O.  Vertical strands run X -> O, horizontal strands O -> X.
    """

    n: int
    x_rows: tuple
    o_rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "x_rows", tuple(int(r) for r in self.x_rows))
        object.__setattr__(self, "o_rows", tuple(int(r) for r in self.o_rows))
        problems = validate(self)
        if problems:
            raise GridError(problems)

    @property
    def x_cols(self):
        """Inverse of ``x_rows``: column of the X in each row."""
        inv = [0] * self.n
        for c, r in enumerate(self.x_rows):
            inv[r] = c
        return tuple(inv)

    @property
    def o_cols(self):
        inv = [0] * self.n
        for c, r in enumerate(self.o_rows):
            inv[r] = c
        return tuple(inv)

    def __str__(self):
        return serialize_grid(self)


def _is_permutation(seq, n):
    return len(seq) == n and sorted(seq) == list(range(n))


def component_count(n, x_rows, o_rows):
    """Number of components of the link traced by the grid."""
    x_cols = [0] * n
    for c, r in enumerate(x_rows):
        x_cols[r] = c
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        c = start
        while not seen[c]:
            seen[c] = True
            # up/down the column to the O, then along its row to the X
            c = x_cols[o_rows[c]]
    return count


def validate(g):
    """Return a list of human-readable problems with ``g`` (empty when valid)."""
    problems = []
    n, xs, os_ = g.n, list(g.x_rows), list(g.o_rows)
    if n < 2:
        problems.append(f"grid size must be at least 2, got {n}")
    if len(xs) != n or len(os_) != n:
        problems.append(
            f"size mismatch: n={n} but X has {len(xs)} entries and O has {len(os_)}"
        )
        return problems
    if not _is_permutation(xs, n):
        problems.append(f"X rows {xs} are not a permutation of 0..{n - 1}")
    if not _is_permutation(os_, n):
        problems.append(f"O rows {os_} are not a permutation of 0..{n - 1}")
    clash = [c for c in range(n) if xs[c] == os_[c]]
    if clash:
        problems.append(f"X and O share cells in columns {clash}")
    if not problems:
        k = component_count(n, xs, os_)
        if k != 1:
            problems.append(f"diagram is a {k}-component link, not a knot")
    return problems


def parse_grid(text):
    """Parse the grid file format.

    Optional ``#`` comment lines, then a line holding ``n``, then
    ``X: r0 ... r(n-1)`` and ``O: r0 ... r(n-1)``.  A single line with ``/``
    separators (``"5 / X: ... / O: ..."``) is accepted as well.
    """
    lines = []
    for raw in text.replace("/", "\n").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    if len(lines) != 3:
        raise GridError(f"expected 3 non-comment lines (n, X:, O:), got {len(lines)}")
    try:
        n = int(lines[0])
    except ValueError:
        raise GridError(f"bad size line {lines[0]!r}") from None
    rows = {}
    for line in lines[1:]:
        tag, sep, rest = line.partition(":")
        tag = tag.strip().upper()
        if not sep or tag not in ("X", "O") or tag in rows:
            raise GridError(f"bad dot line {line!r}")
        try:
            rows[tag] = [int(tok) for tok in rest.split()]
        except ValueError:
            raise GridError(f"non-integer entry in {line!r}") from None
    return GridDiagram(n, rows["X"], rows["O"])


def serialize_grid(g):
    return (
        f"{g.n}\n"
        f"X: {' '.join(map(str, g.x_rows))}\n"
        f"O: {' '.join(map(str, g.o_rows))}\n"
    )


def load_grid(path):
    with open(path) as fh:
        return parse_grid(fh.read())


def torus_grid(p, q):
    """Grid of size ``p + q`` for the ``(p, q)`` torus knot (up to mirror)."""
    if p < 1 or q < 1 or p + q < 2:
        raise GridError(f"torus parameters must be positive, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise GridError(f"T({p},{q}) is a link: gcd({p},{q}) != 1")
    n = p + q
    return GridDiagram(n, range(n), [(c + p) % n for c in range(n)])


def mirror_grid(g):
    """Reverse the columns; presents the mirror knot."""
    return GridDiagram(g.n, g.x_rows[::-1], g.o_rows[::-1])


def unknot_grid(n=2):
    """Smallest-looking unknot of size ``n``: X on the diagonal, O just above."""
    return GridDiagram(n, range(n), [(c + 1) % n for c in range(n)])


@dataclass(frozen=True)
class WindingTable:
    """Winding numbers of the knot around every lattice point, plus ``a``.

    ``w`` has shape ``(n + 1, n + 1)`` and is indexed ``w[i, j]`` for the
    lattice point ``(i, j)``.  ``a`` is the Alexander shift as a Fraction.
    """

    n: int
    w: np.ndarray
    a: Fraction


def _strand_signs(g):
    # +1 for a column whose strand runs upward (X below O)
    return [1 if o > x else -1 for x, o in zip(g.x_rows, g.o_rows)]


def winding_numbers(g, direction="right"):
    """Winding number at each lattice point by ray casting.

    A horizontal ray from ``(i, j)`` meets the vertical strand of column ``c``
    iff ``min(x, o) < j <= max(x, o)``.  Counterclockwise loops count +1, so
    an upward strand crossing a rightward ray contributes +1 and a leftward
    ray sees the opposite sign.
    """
    n = g.n
    signs = _strand_signs(g)
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    for c in range(n):
        lo, hi = sorted((g.x_rows[c], g.o_rows[c]))
        # strand sits at x = c + 1/2
        if direction == "right":
            w[: c + 1, lo + 1 : hi + 1] += signs[c]
        elif direction == "left":
            w[c + 1 :, lo + 1 : hi + 1] -= signs[c]
        else:
            raise ValueError(f"unknown ray direction {direction!r}")
    return w


def winding_table(g):
    w = winding_numbers(g)
    w.setflags(write=False)
    corner_sum = 0
    for rows in (g.x_rows, g.o_rows):
        for c, r in enumerate(rows):
            corner_sum += int(w[c, r] + w[c + 1, r] + w[c, r + 1] + w[c + 1, r + 1])
    a = Fraction(corner_sum, 8) - Fraction(g.n - 1, 2)
    return WindingTable(g.n, w, a)
