"""Binary tree over candidate tips for O(log n) probabilistic selection.

Every row carries the tip's trail score plus two subtree aggregates: the
subscore (sum of scores of the row and all descendants) and the subcount
(number of rows in the subtree). An in-order traversal yields tips
best-first, so a tip's rank is its in-order position.

Selection walks down from the root, narrowing an interval: exploration
draws a value in [0, root subscore) and splits it against subscores;
convergence draws in [0, sum of a^rank) with a = df^j and splits against
geometric-series masses computed in closed form from the subcounts.

Row keys are tuples that sort best-first. The final two components must
be a jitter tiebreak and the tip id; ``key[:-2]`` is the jitter-free part
used when selection must be deterministic (df^j below noise level, where
ties fall back to the lowest tip id).
"""

from __future__ import annotations

from typing import Iterator, Mapping

from .scoring import geometric_sum

_DETERMINISTIC_EPS = 1e-12


class _Row:
    __slots__ = ("tip_id", "key", "score", "left", "right", "parent", "subscore", "subcount")

    def __init__(self, tip_id: int, key: tuple, score: float):
        self.tip_id = tip_id
        self.key = key
        self.score = score
        self.left: _Row | None = None
        self.right: _Row | None = None
        self.parent: _Row | None = None
        self.subscore = score
        self.subcount = 1


class TipSelectionTable:
    def __init__(self) -> None:
        self._rows: dict[int, _Row] = {}
        self._root: _Row | None = None

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, tip_id: int) -> bool:
        return tip_id in self._rows

    @property
    def root_subscore(self) -> float:
        return self._root.subscore if self._root is not None else 0.0

    @property
    def root_subcount(self) -> int:
        return self._root.subcount if self._root is not None else 0

    # -- mutation ----------------------------------------------------------

    def insert(self, tip_id: int, key: tuple, score: float) -> None:
        if tip_id in self._rows:
            raise ValueError(f"tip {tip_id} already present")
        row = _Row(tip_id, key, score)
        self._rows[tip_id] = row
        node = self._root
        if node is None:
            self._root = row
            return
        while True:
            node.subscore += score
            node.subcount += 1
            if key < node.key:
                if node.left is None:
                    node.left = row
                    row.parent = node
                    return
                node = node.left
            else:
                if node.right is None:
                    node.right = row
                    row.parent = node
                    return
                node = node.right

    def remove(self, tip_id: int) -> None:
        try:
            row = self._rows.pop(tip_id)
        except KeyError:
            raise KeyError(f"tip {tip_id} not in table") from None
        if row.left is not None and row.right is not None:
            succ = row.right
            while succ.left is not None:
                succ = succ.left
            fix_from = succ if succ.parent is row else succ.parent
            self._replace_in_parent(succ, succ.right)
            succ.left = row.left
            succ.right = row.right
            if succ.left is not None:
                succ.left.parent = succ
            if succ.right is not None:
                succ.right.parent = succ
            self._replace_in_parent(row, succ)
            node = fix_from
        else:
            child = row.left if row.left is not None else row.right
            self._replace_in_parent(row, child)
            node = row.parent
        while node is not None:
            self._refresh(node)
            node = node.parent

    def _replace_in_parent(self, node: _Row, child: _Row | None) -> None:
        p = node.parent
        if child is not None:
            child.parent = p
        if p is None:
            self._root = child
        elif p.left is node:
            p.left = child
        else:
            p.right = child

    @staticmethod
    def _refresh(node: _Row) -> None:
        sc, ct = node.score, 1
        if node.left is not None:
            sc += node.left.subscore
            ct += node.left.subcount
        if node.right is not None:
            sc += node.right.subscore
            ct += node.right.subcount
        node.subscore = sc
        node.subcount = ct

    # -- traversal ---------------------------------------------------------

    def _iter_rows(self) -> Iterator[_Row]:
        stack: list[_Row] = []
        node = self._root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node
            node = node.right

    def in_order(self) -> list[int]:
        """Tip ids by rank, rank 0 first."""
        return [row.tip_id for row in self._iter_rows()]

    def height(self) -> int:
        best = 0
        stack: list[tuple[_Row, int]] = [(self._root, 1)] if self._root else []
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if node.left is not None:
                stack.append((node.left, d + 1))
            if node.right is not None:
                stack.append((node.right, d + 1))
        return best

    def rows(self) -> dict[int, dict]:
        """Structural snapshot (tip id keyed), for inspection and tests."""
        out = {}
        for row in self._rows.values():
            out[row.tip_id] = {
                "score": row.score,
                "left": row.left.tip_id if row.left else None,
                "right": row.right.tip_id if row.right else None,
                "subscore": row.subscore,
                "subcount": row.subcount,
            }
        return out

    @classmethod
    def from_rows(cls, spec: Mapping[int, tuple[float, int | None, int | None]], root: int) -> "TipSelectionTable":
        """Build a table with an explicit shape; aggregates are recomputed
        by the table's own bookkeeping. Used to load published fixtures."""
        table = cls()
        rows = {tid: _Row(tid, (-score, 0.0, tid), score) for tid, (score, _, _) in spec.items()}
        for tid, (_, left, right) in spec.items():
            row = rows[tid]
            if left is not None:
                row.left = rows[left]
                rows[left].parent = row
            if right is not None:
                row.right = rows[right]
                rows[right].parent = row
        table._rows = rows
        table._root = rows[root]
        # bottom-up refresh
        order: list[_Row] = []
        stack = [table._root]
        while stack:
            node = stack.pop()
            order.append(node)
            if node.left is not None:
                stack.append(node.left)
            if node.right is not None:
                stack.append(node.right)
        for node in reversed(order):
            cls._refresh(node)
        return table

    # -- selection ---------------------------------------------------------

    def select_explore(self, rng) -> int:
        """Tip drawn with probability proportional to its trail score; if
        every candidate scores 0, uniformly at random."""
        node = self._root
        if node is None:
            raise LookupError("empty selection table")
        total = node.subscore
        if total <= 0.0:
            return self._select_uniform(rng)
        x = rng.random() * total
        while True:
            if node.left is not None:
                ls = node.left.subscore
                if x < ls:
                    node = node.left
                    continue
                x -= ls
            if x < node.score or node.right is None:
                return node.tip_id
            x -= node.score
            node = node.right

    def select_converge(self, df: float, j: int, rng) -> int:
        """Tip of rank r drawn with probability (df^j)^r, normalised."""
        if self._root is None:
            raise LookupError("empty selection table")
        if not 0.0 <= df < 1.0:
            raise ValueError("df must be in [0, 1)")
        if j < 0:
            raise ValueError("j must be >= 0")
        n = self._root.subcount
        if n == 1:
            return self._root.tip_id
        if df == 0.0:
            return self._select_best_deterministic()
        a = df**j
        if a < _DETERMINISTIC_EPS:
            return self._select_best_deterministic()
        if a >= 1.0:  # j == 0: every rank equally likely
            return self._select_uniform(rng)
        x = rng.random() * geometric_sum(a, 0, n - 1)
        node, base = self._root, 0
        while True:
            lc = node.left.subcount if node.left is not None else 0
            if lc:
                left_mass = geometric_sum(a, base, base + lc - 1)
                if x < left_mass:
                    node = node.left
                    continue
                x -= left_mass
            if x < a ** (base + lc) or node.right is None:
                return node.tip_id
            x -= a ** (base + lc)
            base += lc + 1
            node = node.right

    def _select_uniform(self, rng) -> int:
        n = self._root.subcount
        r = int(rng.random() * n)
        if r >= n:
            r = n - 1
        node = self._root
        while True:
            lc = node.left.subcount if node.left is not None else 0
            if r < lc:
                node = node.left
            elif r == lc:
                return node.tip_id
            else:
                r -= lc + 1
                node = node.right

    def _select_best_deterministic(self) -> int:
        # Jitter separates equal scores in the tree order; a pure best-first
        # pick must ignore it, so scan the leading tie group for the lowest
        # tip id (the group is a prefix of the in-order traversal).
        best_id: int | None = None
        prefix = None
        for row in self._iter_rows():
            if prefix is None:
                prefix = row.key[:-2]
                best_id = row.tip_id
            elif row.key[:-2] != prefix:
                break
            elif row.tip_id < best_id:
                best_id = row.tip_id
        return best_id
