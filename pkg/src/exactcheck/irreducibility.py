"""
Constructive paths of licit jumps between configurations of a closed box.

The box B_p has side s = 2p+1 and no wraparound. Contents are listed along
a snake path through the box and bubble-sorted into the target order:

* particle next to a hole: one jump;
* two holes: nothing to do;
* two particles at adjacent a, b: route two holes onto the other corners
  c, d of a 2x2 square a b / d c (breadth-first search over hole pairs that
  never touches a or b), rotate (A a->d, B b->a, A d->c, A c->b), then play
  the hole moves back in reverse so every other site is restored.

Particles with equal angles keep their relative order, so only genuine
inversions are swapped.
"""

from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import IrreducibilityError, SizeBudgetError
from src.lattice import Configuration

Jump = Tuple[int, int]

# frozen constant for lengths <= C p^4 on the tested boxes (p <= 2)
PATH_CONSTANT = 2000


class BoxState:
    """Mutable contents of the box: None for a hole, else the angle."""

    def __init__(self, side: int, contents: Sequence[Optional[float]]):
        self.side = side
        self.cells: List[Optional[float]] = list(contents)
        self.jumps: List[Jump] = []

    @classmethod
    def from_configuration(cls, config: Configuration) -> "BoxState":
        cells = [
            float(config.angle[s]) if config.occupancy[s] else None for s in range(config.geometry.n_sites)
        ]
        return cls(config.side, cells)

    def neighbours(self, site: int) -> List[int]:
        r, c = divmod(site, self.side)
        out = []
        if r > 0:
            out.append(site - self.side)
        if r + 1 < self.side:
            out.append(site + self.side)
        if c > 0:
            out.append(site - 1)
        if c + 1 < self.side:
            out.append(site + 1)
        return out

    def jump(self, origin: int, target: int):
        if self.cells[origin] is None or self.cells[target] is not None:
            raise IrreducibilityError(f"illegal jump {origin} -> {target}")
        if target not in self.neighbours(origin):
            raise IrreducibilityError(f"jump {origin} -> {target} is not nearest-neighbour")
        self.cells[target], self.cells[origin] = self.cells[origin], None
        self.jumps.append((origin, target))

    def move_hole(self, hole: int, target: int):
        """Hole at `hole` moves to `target`: the particle there (if any) jumps in."""
        if self.cells[target] is not None:
            self.jump(target, hole)

    @property
    def holes(self) -> List[int]:
        return [s for s, v in enumerate(self.cells) if v is None]


def snake_path(side: int) -> List[int]:
    path = []
    for r in range(side):
        cols = range(side) if r % 2 == 0 else range(side - 1, -1, -1)
        path.extend(r * side + c for c in cols)
    return path


def _square_corners(state: BoxState, a: int, b: int) -> Tuple[int, int]:
    """(d, c) completing the square a b / d c, with d ~ a and c ~ b."""
    side = state.side
    ra, ca = divmod(a, side)
    rb, cb = divmod(b, side)
    if ra == rb:
        offsets = [(1, 0), (-1, 0)]
    else:
        offsets = [(0, 1), (0, -1)]
    for dr, dc in offsets:
        if 0 <= ra + dr < side and 0 <= ca + dc < side:
            return (ra + dr) * side + (ca + dc), (rb + dr) * side + (cb + dc)
    raise IrreducibilityError(f"no square around edge {a}-{b}")


def _route_holes(state: BoxState, blocked: Tuple[int, int], goal: Tuple[int, int]) -> List[Tuple[int, int]]:
    """
    Hole moves (from, to) bringing two holes onto `goal` without touching
    `blocked`. Breadth-first search over unordered pairs of hole positions.
    """
    holes = [h for h in state.holes if h not in blocked]
    if len(holes) < 2:
        raise IrreducibilityError("fewer than two free holes")
    start = tuple(sorted(holes[:2]))
    target = tuple(sorted(goal))
    parent: Dict[Tuple[int, int], Optional[Tuple[Tuple[int, int], Tuple[int, int]]]] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        if pair == target:
            break
        for i in (0, 1):
            here, other = pair[i], pair[1 - i]
            for nxt in state.neighbours(here):
                if nxt in blocked or nxt == other:
                    continue
                key = tuple(sorted((nxt, other)))
                if key not in parent:
                    parent[key] = (pair, (here, nxt))
                    queue.append(key)
    if target not in parent:
        raise IrreducibilityError(f"holes cannot reach {goal}")
    moves = []
    node = target
    while parent[node] is not None:
        prev, move = parent[node]
        moves.append(move)
        node = prev
    return moves[::-1]


def _swap_particles(state: BoxState, a: int, b: int):
    d, c = _square_corners(state, a, b)
    moves = _route_holes(state, (a, b), (c, d))
    for origin, target in moves:
        state.move_hole(origin, target)
    state.jump(a, d)
    state.jump(b, a)
    state.jump(d, c)
    state.jump(c, b)
    for origin, target in reversed(moves):
        state.move_hole(target, origin)


def _target_ranks(current: List[Optional[float]], target: List[Optional[float]]) -> List[int]:
    """Position in `target` of every item of `current`, matching equal items in order."""
    slots: Dict[Optional[float], deque] = {}
    for pos, value in enumerate(target):
        slots.setdefault(value, deque()).append(pos)
    try:
        return [slots[value].popleft() for value in current]
    except (KeyError, IndexError):
        raise IrreducibilityError("configurations differ in particle number or angle multiset")


def irreducibility_path(a: Configuration, b: Configuration, p: int) -> List[Jump]:
    """
    Licit jumps taking `a` to `b`, both given as configurations on the box
    B_p stored as a side 2p+1 grid (wraparound is never used).
    """
    side = 2 * p + 1
    if a.side != side or b.side != side:
        raise IrreducibilityError(f"configurations must live on a box of side {side}")
    start = BoxState.from_configuration(a)
    goal = BoxState.from_configuration(b)
    if len(start.holes) < 2 or len(goal.holes) < 2:
        raise IrreducibilityError("exchange dynamics with fewer than two holes is not irreducible")
    if sorted(v for v in start.cells if v is not None) != sorted(v for v in goal.cells if v is not None):
        raise IrreducibilityError("configurations differ in particle number or angle multiset")

    path = snake_path(side)
    ranks = _target_ranks([start.cells[s] for s in path], [goal.cells[s] for s in path])
    # bubble sort along the path, mirroring every swap physically
    n = len(path)
    for sweep in range(n):
        swapped = False
        for k in range(n - 1 - sweep):
            if ranks[k] <= ranks[k + 1]:
                continue
            x, y = path[k], path[k + 1]
            vx, vy = start.cells[x], start.cells[y]
            if vx is not None and vy is not None:
                _swap_particles(start, x, y)
            elif vx is not None:
                start.jump(x, y)
            elif vy is not None:
                start.jump(y, x)
            ranks[k], ranks[k + 1] = ranks[k + 1], ranks[k]
            swapped = True
        if not swapped:
            break
    if start.cells != goal.cells:
        raise IrreducibilityError("path construction did not reach the target")
    return start.jumps


def replay_path(a: Configuration, jumps: Sequence[Jump]) -> Configuration:
    """Apply the jumps with full legality checks and return the end configuration."""
    state = BoxState.from_configuration(a)
    for origin, target in jumps:
        state.jump(int(origin), int(target))
    occupancy = np.array([v is not None for v in state.cells], dtype=np.uint8)
    angle = np.array([v if v is not None else 0.0 for v in state.cells])
    return Configuration.from_arrays(a.geometry, occupancy, angle)


def length_bound(p: int) -> int:
    return PATH_CONSTANT * p**4


def bfs_distance(a: Configuration, b: Configuration, max_states: int = 200_000) -> int:
    """Geodesic number of licit jumps from a to b (closed box), -1 if unreachable."""
    start = BoxState.from_configuration(a)
    goal = tuple(BoxState.from_configuration(b).cells)
    origin = tuple(start.cells)
    if origin == goal:
        return 0
    seen = {origin: 0}
    queue = deque([origin])
    while queue:
        cells = queue.popleft()
        depth = seen[cells]
        for site, value in enumerate(cells):
            if value is None:
                continue
            for nxt in start.neighbours(site):
                if cells[nxt] is not None:
                    continue
                moved = list(cells)
                moved[nxt], moved[site] = value, None
                key = tuple(moved)
                if key in seen:
                    continue
                if key == goal:
                    return depth + 1
                seen[key] = depth + 1
                if len(seen) > max_states:
                    raise SizeBudgetError(f"BFS exceeded {max_states} configurations")
                queue.append(key)
    return -1
