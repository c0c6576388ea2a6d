"""Grid moves and a randomized simplifier.

Moves: cyclic translation, commutation of adjacent columns or rows whose
strands do not interleave, stabilization (one dot becomes an L of three
dots in a new 2x2 block) and its inverse, destabilization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .grid import GridDiagram, GridError

CORNERS = ("SW", "SE", "NW", "NE")
_CORNER_OFFSETS = {"SW": (0, 0), "SE": (1, 0), "NW": (0, 1), "NE": (1, 1)}


class IllegalMove(GridError):
    pass


@dataclass(frozen=True)
class Move:
    """A grid move.

    ``kind`` is one of ``translate_x``, ``translate_y``, ``commute_columns``,
    ``commute_rows``, ``stabilize``, ``destabilize``.  For commutations
    ``index`` is the lower of the two swapped lines.  A stabilization acts on
    the dot of type ``dot`` ('X' or 'O') in column ``index``; ``variant``
    names the empty corner of the new 2x2 block.  A destabilization names
    the lower-left cell ``(index, row)`` of the block it collapses.
    """

    kind: str
    index: int = 0
    row: int = 0
    dot: str = "X"
    variant: str = "SW"


def _dots(g):
    return [(c, g.x_rows[c], "X") for c in range(g.n)] + [
        (c, g.o_rows[c], "O") for c in range(g.n)
    ]


def _from_dots(n, dots):
    x = [None] * n
    o = [None] * n
    for c, r, kind in dots:
        target = x if kind == "X" else o
        if target[c] is not None:
            raise IllegalMove(f"two {kind} dots in column {c}")
        target[c] = r
    if None in x or None in o:
        raise IllegalMove("move left a column without a dot")
    return GridDiagram(n, x, o)


def _interleaved(a, b):
    (a0, a1), (b0, b1) = sorted(a), sorted(b)
    return (a0 < b0 < a1 < b1) or (b0 < a0 < b1 < a1)


def commutation_legal(g, index, rows=False):
    n = g.n
    if not 0 <= index < n - 1:
        return False
    if rows:
        xc, oc = g.x_cols, g.o_cols
        return not _interleaved((xc[index], oc[index]), (xc[index + 1], oc[index + 1]))
    return not _interleaved(
        (g.x_rows[index], g.o_rows[index]), (g.x_rows[index + 1], g.o_rows[index + 1])
    )


def destabilization_pattern(g, c, r):
    """Describe the L-shaped triple in the block at ``(c, r)``, or None.

    Returns ``(majority_kind, minority_cell, empty_cell)``.
    """
    n = g.n
    if n <= 2 or not (0 <= c < n - 1 and 0 <= r < n - 1):
        return None
    cells = {}
    for dc in (0, 1):
        for dr in (0, 1):
            col, row = c + dc, r + dr
            if g.x_rows[col] == row:
                cells[(col, row)] = "X"
            elif g.o_rows[col] == row:
                cells[(col, row)] = "O"
    if len(cells) != 3:
        return None
    kinds = sorted(cells.values())
    majority = kinds[1]
    minority_cell = next(p for p, k in cells.items() if k != majority)
    empty = next(
        (c + dc, r + dr)
        for dc in (0, 1)
        for dr in (0, 1)
        if (c + dc, r + dr) not in cells
    )
    # the two majority dots must sit on a diagonal, the minority opposite the hole
    if minority_cell[0] == empty[0] or minority_cell[1] == empty[1]:
        return None
    return majority, minority_cell, empty


def apply_move(g, m):
    """Apply ``m`` to ``g``; raises :class:`IllegalMove` when not legal."""
    n = g.n
    if m.kind == "translate_x":
        k = m.index % n if m.index else 1
        return GridDiagram(n, g.x_rows[-k:] + g.x_rows[:-k], g.o_rows[-k:] + g.o_rows[:-k])
    if m.kind == "translate_y":
        k = m.index % n if m.index else 1
        return GridDiagram(
            n, [(r + k) % n for r in g.x_rows], [(r + k) % n for r in g.o_rows]
        )
    if m.kind == "commute_columns":
        if not commutation_legal(g, m.index):
            raise IllegalMove(f"columns {m.index}, {m.index + 1} interleave")
        i = m.index
        x, o = list(g.x_rows), list(g.o_rows)
        x[i], x[i + 1] = x[i + 1], x[i]
        o[i], o[i + 1] = o[i + 1], o[i]
        return GridDiagram(n, x, o)
    if m.kind == "commute_rows":
        if not commutation_legal(g, m.index, rows=True):
            raise IllegalMove(f"rows {m.index}, {m.index + 1} interleave")
        i = m.index
        swap = {i: i + 1, i + 1: i}
        return GridDiagram(
            n, [swap.get(r, r) for r in g.x_rows], [swap.get(r, r) for r in g.o_rows]
        )
    if m.kind == "stabilize":
        return _stabilize(g, m)
    if m.kind == "destabilize":
        return _destabilize(g, m)
    raise IllegalMove(f"unknown move kind {m.kind!r}")


def _stabilize(g, m):
    n = g.n
    if m.dot not in ("X", "O") or m.variant not in CORNERS or not 0 <= m.index < n:
        raise IllegalMove(f"bad stabilization {m}")
    c = m.index
    r = g.x_rows[c] if m.dot == "X" else g.o_rows[c]
    other = "O" if m.dot == "X" else "X"
    ec, er = _CORNER_OFFSETS[m.variant]
    ec, er = c + ec, r + er
    oc, orow = 2 * c + 1 - ec, 2 * r + 1 - er  # diagonally opposite the hole

    def shift(col, row):
        return col + (col > c), row + (row > r)

    dots = []
    for col, row, kind in _dots(g):
        if (col, row) == (c, r):
            continue
        if col == c:
            # partner in the same column moves into the hole's column
            dots.append((ec, shift(col, row)[1], kind))
        elif row == r:
            dots.append((shift(col, row)[0], er, kind))
        else:
            dots.append((*shift(col, row), kind))
    dots.append((oc, er, m.dot))
    dots.append((ec, orow, m.dot))
    dots.append((oc, orow, other))
    return _from_dots(n + 1, dots)


def _destabilize(g, m):
    pattern = destabilization_pattern(g, m.index, m.row)
    if pattern is None:
        raise IllegalMove(f"no destabilizable block at ({m.index}, {m.row})")
    majority, (mc, mr), (ec, er) = pattern
    block = {(m.index + dc, m.row + dr) for dc in (0, 1) for dr in (0, 1)}
    dots = [d for d in _dots(g) if (d[0], d[1]) not in block]
    dots.append((ec, er, majority))
    squeezed = [(col - (col > mc), row - (row > mr), kind) for col, row, kind in dots]
    return _from_dots(g.n - 1, squeezed)


def legal_moves(g, stabilizations=True):
    """Every legal move on ``g`` in a fixed order."""
    n = g.n
    moves = [Move("translate_x"), Move("translate_y")]
    moves += [Move("commute_columns", i) for i in range(n - 1) if commutation_legal(g, i)]
    moves += [
        Move("commute_rows", i) for i in range(n - 1) if commutation_legal(g, i, rows=True)
    ]
    if stabilizations:
        moves += [
            Move("stabilize", c, dot=dot, variant=v)
            for dot in ("X", "O")
            for c in range(n)
            for v in CORNERS
        ]
    moves += destabilizations(g)
    return moves


def destabilizations(g):
    return [
        Move("destabilize", c, row=r)
        for c in range(g.n - 1)
        for r in range(g.n - 1)
        if destabilization_pattern(g, c, r) is not None
    ]


def simplify(g, seed=0, budget=1000, stabilize_prob=1 / 16, trajectory=None):
    """Random walk over grid moves that always destabilizes when it can.

    Translations expose blocks that straddle the edge of the square.  The
    smallest grid met is returned (the first one found at that size).
    """
    rng = random.Random(seed)
    best = current = g
    if trajectory is not None:
        trajectory.append(g.n)
    for _ in range(budget):
        if best.n == 2:
            break
        destab = destabilizations(current)
        if destab:
            current = apply_move(current, destab[0])
        else:
            if rng.random() < stabilize_prob:
                move = Move(
                    "stabilize",
                    rng.randrange(current.n),
                    dot=rng.choice("XO"),
                    variant=rng.choice(CORNERS),
                )
            else:
                options = legal_moves(current, stabilizations=False)
                move = rng.choice(options)
            current = apply_move(current, move)
        if trajectory is not None and current.n != trajectory[-1]:
            trajectory.append(current.n)
        if current.n < best.n:
            best = current
    return best
