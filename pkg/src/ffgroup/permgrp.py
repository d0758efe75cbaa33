"""Permutation action of GL_n(q) on nonzero vectors, and group orders.

Point ``v`` in ``1 .. q^n - 1`` is the vector whose i-th coordinate is the
i-th little-endian base-q digit of ``v``. Internally permutations are
0-based numpy arrays (array index ``v - 1``); composition is
``(s * t)(x) = s(t(x))`` so that ``matrix_to_perm`` is a homomorphism for the
left action.

Group orders come from a deterministic Schreier-Sims run. When the caller
knows an upper bound for the order (e.g. ``|GL_n(q)|``) the run stops as
soon as the transversal sizes multiply to it; the partial chain at that point
is already a complete BSGS.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np

from . import config
from .errors import BudgetExceeded, EmptyGeneratorList, SingularMatrix
from .matgf import Mat, field_matmul, mat_det


class Perm:
    """A permutation of ``1 .. degree``."""

    __slots__ = ("images", "_key")

    def __init__(self, images, check: bool = True, zero_based: bool = True):
        arr = np.asarray(images, dtype=np.int32)
        if not zero_based:
            arr = arr - 1
        if check:
            if arr.ndim != 1 or not np.array_equal(np.sort(arr), np.arange(arr.size)):
                raise ValueError("not a permutation")
        arr.setflags(write=False)
        self.images = arr
        self._key = None

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(np.arange(degree, dtype=np.int32), check=False)

    @property
    def degree(self) -> int:
        return self.images.size

    def __call__(self, point: int) -> int:
        return int(self.images[point - 1]) + 1

    def __mul__(self, other: Perm) -> Perm:
        return Perm(self.images[other.images], check=False)

    def inverse(self) -> Perm:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.images.size, dtype=np.int32)
        return Perm(inv, check=False)

    def is_identity(self) -> bool:
        return bool(np.all(self.images == np.arange(self.images.size)))

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.images.tobytes()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x + 1)
                x = int(self.images[x])
            out.append(tuple(cyc))
        return out

    def __repr__(self):
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles()) + ")" if self.cycles() else "Perm(())"


# vectors <-> points


def _check_points(ctx, n: int, budget: int | None) -> int:
    budget = config.point_budget() if budget is None else budget
    if ctx.q**n > budget:
        raise BudgetExceeded(f"q^n = {ctx.q}^{n} exceeds point budget {budget}")
    return ctx.q**n - 1


def point_vectors(ctx, n: int) -> np.ndarray:
    """n x (q^n - 1) array; column v-1 holds the coordinates of point v."""
    pts = np.arange(1, ctx.q**n, dtype=np.int64)
    return np.stack([(pts // ctx.q**i) % ctx.q for i in range(n)])


def vector_to_point(ctx, vec) -> int:
    return sum(int(c) * ctx.q**i for i, c in enumerate(vec))


def point_to_vector(ctx, n: int, point: int) -> list[int]:
    return [(point // ctx.q**i) % ctx.q for i in range(n)]


_vector_cache: dict = {}


def matrix_to_perm(A: Mat, budget: int | None = None, check: bool = True) -> Perm:
    ctx, n = A.ctx, A.n
    _check_points(ctx, n, budget)
    if check and mat_det(A) == 0:
        raise SingularMatrix("only invertible matrices act as permutations")
    key = (id(ctx), n)
    if key not in _vector_cache:
        _vector_cache[key] = (point_vectors(ctx, n), ctx.q ** np.arange(n, dtype=np.int64))
    vecs, weights = _vector_cache[key]
    images = weights @ field_matmul(ctx, A.a, vecs) - 1
    return Perm(images, check=False)


_projective_cache: dict = {}


def projective_classes(ctx, n: int, budget: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Projective points of F_q^n.

    Returns ``(reps, cls)``: ``reps`` are the 0-based indices of the least
    point on each line, ``cls[v - 1]`` is the line index of point ``v``.
    """
    _check_points(ctx, n, budget)
    key = (id(ctx), n)
    if key not in _projective_cache:
        vecs = point_vectors(ctx, n)
        weights = ctx.q ** np.arange(n, dtype=np.int64)
        least = np.arange(1, ctx.q**n, dtype=np.int64)
        for c in range(2, ctx.q):
            scaled = ctx.vmul(np.full_like(vecs, c), vecs)
            least = np.minimum(least, weights @ scaled)
        reps, cls = np.unique(least - 1, return_inverse=True)
        _projective_cache[key] = (reps, cls.astype(np.int32))
    return _projective_cache[key]


def matrix_to_projective_perm(A: Mat, budget: int | None = None) -> Perm:
    """Action of A on the lines of F_q^n, lines numbered by their least point."""
    reps, cls = projective_classes(A.ctx, A.n, budget)
    full = matrix_to_perm(A, budget)
    return Perm(cls[full.images[reps]], check=False)


def singer_group_order(mats: list[Mat], budget: int | None = None) -> int:
    """Order of a matrix group known to contain a Singer cycle.

    Such a group contains every scalar matrix, so its order is (q - 1) times
    the order of its image on projective points.
    """
    ctx, n = mats[0].ctx, mats[0].n
    perms = [matrix_to_projective_perm(m, budget) for m in mats]
    scalars = ctx.q - 1
    bound = gl_order(n, ctx.q) // scalars
    if all(p.is_identity() for p in perms):
        return scalars
    return scalars * group_order(perms, bound)


def perm_to_matrix(perm: Perm, ctx, n: int) -> Mat:
    """Inverse of :func:`matrix_to_perm` on its image: read off images of e_1..e_n."""
    cols = [point_to_vector(ctx, n, perm(ctx.q**i)) for i in range(n)]
    return Mat(ctx, np.array(cols, dtype=np.int64).T)


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


# Schreier-Sims


# untouched rows of np.empty cost no memory, so a full-height transversal is
# reserved up front unless it would be huge
_RESERVE_BYTES = 1 << 26


def _initial_rows(degree: int, itemsize: int) -> int:
    return degree if degree * degree * itemsize <= _RESERVE_BYTES else min(degree, 16)


def _point_dtype(degree: int):
    return np.int16 if degree <= np.iinfo(np.int16).max else np.int32


class _Level:
    """One stabiliser-chain level: base point, generators, orbit, transversal.

    Row r of ``U`` is the transversal element mapping the base point to
    ``points[r]``; ``UI`` holds the inverses. ``done[g]`` counts the orbit rows
    whose Schreier generator for generator g has already been sifted.
    """

    __slots__ = ("base", "gens", "pos", "points", "size", "U", "UI", "done", "_ident")

    def __init__(self, base: int, ident: np.ndarray):
        degree = ident.size
        self.base = base
        self.gens: list[np.ndarray] = []
        self.done: list[int] = []
        self.pos = np.full(degree, -1, dtype=np.int64)
        self.points = np.empty(degree, dtype=np.int64)
        self.U = np.empty((_initial_rows(degree, ident.itemsize), degree), dtype=ident.dtype)
        self.UI = np.empty_like(self.U)
        self.size = 0
        self._ident = ident
        self._append(np.array([base]), ident[None, :])

    def _append(self, pts: np.ndarray, rows: np.ndarray) -> None:
        m = pts.size
        need = self.size + m
        if need > self.U.shape[0]:
            cap = min(self.pos.size, max(need, 2 * self.U.shape[0]))
            for name in ("U", "UI"):
                old = getattr(self, name)
                new = np.empty((cap, old.shape[1]), dtype=old.dtype)
                new[: self.size] = old[: self.size]
                setattr(self, name, new)
        s = slice(self.size, need)
        self.U[s] = rows
        if m == 1:
            self.UI[self.size, rows[0]] = self._ident
        else:
            inv = np.empty_like(rows)
            inv[np.arange(m)[:, None], rows] = self._ident[None, :]
            self.UI[s] = inv
        self.points[s] = pts
        self.pos[pts] = np.arange(self.size, need)
        self.size = need

    def add_gen(self, g: np.ndarray) -> None:
        self.gens.append(g)
        self.done.append(0)
        frontier = np.arange(self.size)
        gen_ids = [len(self.gens) - 1]
        while frontier.size:
            start = self.size
            for gi in gen_ids:
                g = self.gens[gi]
                imgs = g[self.points[frontier]]
                fresh = self.pos[imgs] < 0
                if not fresh.any():
                    continue
                imgs, src = imgs[fresh], frontier[fresh]
                if imgs.size > 1:
                    _, first = np.unique(imgs, return_index=True)
                    first.sort()
                    imgs, src = imgs[first], src[first]
                self._append(imgs, g[self.U[src]])
            frontier = np.arange(start, self.size)
            gen_ids = range(len(self.gens))

    def copy(self) -> _Level:
        new = _Level.__new__(_Level)
        new.base, new.size, new._ident = self.base, self.size, self._ident
        new.gens, new.done = list(self.gens), list(self.done)
        new.pos, new.points = self.pos.copy(), self.points.copy()
        for name in ("U", "UI"):
            old = getattr(self, name)
            arr = np.empty_like(old)
            arr[: self.size] = old[: self.size]
            setattr(new, name, arr)
        return new

    def next_pending(self) -> int | None:
        # orbit-row-major order: the generator with the least progress goes next
        best = None
        for gi, d in enumerate(self.done):
            if d < self.size and (best is None or d < self.done[best]):
                best = gi
        return best

    def transversal(self) -> list[np.ndarray]:
        return [self.U[r] for r in range(self.size)]


class BSGS:
    """Base and strong generating set with explicit transversals."""

    def __init__(self, degree: int, levels: list[_Level]):
        self.degree = degree
        self._levels = levels

    @property
    def base(self) -> list[int]:
        return [lv.base + 1 for lv in self._levels]

    @property
    def transversal_sizes(self) -> list[int]:
        return [lv.size for lv in self._levels]

    @property
    def strong_generators(self) -> list[Perm]:
        seen, out = set(), []
        for lv in self._levels:
            for g in lv.gens:
                k = g.tobytes()
                if k not in seen:
                    seen.add(k)
                    out.append(Perm(g, check=False))
        return out

    def order(self) -> int:
        out = 1
        for s in self.transversal_sizes:
            out *= s
        return out

    def contains(self, perm: Perm) -> bool:
        h = perm.images
        for lv in self._levels:
            r = lv.pos[h[lv.base]]
            if r < 0:
                return False
            h = lv.UI[r][h]
        return bool(np.all(h == np.arange(h.size)))

    def elements(self):
        """Every group element exactly once, as ``u_1 * u_2 * ... * u_k``."""
        ident = np.arange(self.degree, dtype=np.int32)
        reps = [lv.transversal() for lv in self._levels]
        for combo in itertools.product(*reps):
            g = ident
            for u in reversed(combo):
                g = u[g]
            yield Perm(g, check=False)


_MAX_BATCH = 512


def _first_failure(levels: list[_Level], H: np.ndarray, start: int, ident: np.ndarray) -> int | None:
    """Index of the first row of H that does not sift through levels[start:]."""
    m = fail = H.shape[0]
    for lv in levels[start:]:
        r = lv.pos[H[:, lv.base]]
        bad = np.flatnonzero(r < 0)
        if bad.size:
            fail = min(fail, int(bad[0]))
        if fail == 0:
            return 0
        H = np.take_along_axis(lv.UI[r[:fail]], H[:fail], axis=1)
    rest = np.flatnonzero((H != ident).any(axis=1))
    if rest.size:
        fail = int(rest[0])
    return fail if fail < m else None


def _sift(levels: list[_Level], h: np.ndarray, start: int) -> tuple[np.ndarray, int]:
    for j in range(start, len(levels)):
        lv = levels[j]
        r = lv.pos[h[lv.base]]
        if r < 0:
            return h, j
        h = lv.UI[r][h]
    return h, len(levels)


# first levels keyed by (generator, base point); callers often pair one fixed
# generator (a Singer cycle) with many others
_seed_cache: dict = {}
_SEED_CACHE_SIZE = 16


def _seed_level(g: np.ndarray, base: int, ident: np.ndarray) -> _Level:
    key = (g.tobytes(), base)
    level = _seed_cache.get(key)
    if level is None:
        level = _Level(base, ident)
        level.add_gen(g)
        if len(_seed_cache) >= _SEED_CACHE_SIZE:
            _seed_cache.clear()
        _seed_cache[key] = level
    return level.copy()


def schreier_sims(gens: list[Perm], bound: int | None = None) -> BSGS:
    """Deterministic Schreier-Sims; base points are least moved points.

    ``bound``, if given, is the order of a known overgroup; the run stops as
    soon as the transversal sizes multiply to it.
    """
    if not gens:
        raise EmptyGeneratorList("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators act on different point sets")
    ident = np.arange(degree, dtype=_point_dtype(degree))
    seen, arrays = set(), []
    for g in gens:
        if g.is_identity() or g.key() in seen:
            continue
        seen.add(g.key())
        arrays.append(g.images.astype(ident.dtype))
    if not arrays:
        return BSGS(degree, [])

    def least_moved(h: np.ndarray) -> int:
        return int(np.flatnonzero(h != ident)[0])

    levels = [_seed_level(arrays[0], min(least_moved(g) for g in arrays), ident)]
    for g in arrays[1:]:
        levels[0].add_gen(g)

    def current_order() -> int:
        out = 1
        for lv in levels:
            out *= lv.size
        return out

    if bound is not None and current_order() == bound:
        return BSGS(degree, levels)
    batch = 4
    while True:
        # any processing order satisfies the Sims criterion once every queue
        # is empty; shallow levels first finds the big stabilisers soonest
        for i, lv in enumerate(levels):
            gi = lv.next_pending()
            if gi is not None:
                break
        else:
            break
        g = lv.gens[gi]
        rows = np.arange(lv.done[gi], min(lv.size, lv.done[gi] + batch))
        H = np.take_along_axis(lv.UI[lv.pos[g[lv.points[rows]]]], g[lv.U[rows]], axis=1)
        fail = _first_failure(levels, H, i + 1, ident)
        if fail is None:
            lv.done[gi] = int(rows[-1]) + 1
            batch = min(2 * batch, _MAX_BATCH)
            continue
        lv.done[gi] = int(rows[fail]) + 1
        batch = 4
        y, j = _sift(levels, H[fail], i + 1)
        if j == len(levels):
            levels.append(_Level(least_moved(y), ident))
        for lvl in levels[i + 1 : j + 1]:
            lvl.add_gen(y)
        if bound is not None:
            order = current_order()
            if order == bound:
                break
            if order > bound:
                raise ValueError(f"group order exceeds the supplied bound {bound}")
    return BSGS(degree, levels)


def group_order(gens: list[Perm], bound: int | None = None) -> int:
    return schreier_sims(gens, bound).order()


class Overflow:
    """Returned by :func:`closure_oracle` when the group is larger than the cap."""

    def __init__(self, cap: int):
        self.cap = cap

    def __repr__(self):
        return f"Overflow(cap={self.cap})"

    def __eq__(self, other):
        return isinstance(other, Overflow)

    __hash__ = None


def closure_oracle(gens: list[Perm], cap: int) -> list[Perm] | Overflow:
    """Breadth-first closure of ``gens``; independent of Schreier-Sims."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not gens:
        raise EmptyGeneratorList("need at least one generator")
    ident = Perm.identity(gens[0].degree)
    elements = {ident.key(): ident}
    queue = deque([ident])
    while queue:
        e = queue.popleft()
        for s in gens:
            t = s * e
            if t.key() not in elements:
                if len(elements) >= cap:
                    return Overflow(cap)
                elements[t.key()] = t
                queue.append(t)
    return list(elements.values())


def gl_generators(ctx, n: int) -> list[Mat]:
    """Transvection I + E_12, the canonical Singer cycle, and diag(w, 1, ..., 1)."""
    from .fieldext import singer_generator

    _, singer = singer_generator(ctx, n)
    gens = [singer]
    if n >= 2:
        t = np.eye(n, dtype=np.int64)
        t[0, 1] = 1
        gens.append(Mat(ctx, t))
    if ctx.q > 2:
        w = next(x for x in range(1, ctx.q) if ctx.is_primitive(x))
        d = np.eye(n, dtype=np.int64)
        d[0, 0] = w
        gens.append(Mat(ctx, d))
    return gens


def gl_bsgs(ctx, n: int, budget: int | None = None) -> BSGS:
    perms = [matrix_to_perm(m, budget) for m in gl_generators(ctx, n)]
    return schreier_sims(perms)


def enumerate_gl(ctx, n: int, budget: int | None = None):
    """All of GL_n(q) as matrices, via transversal products of its BSGS."""
    for perm in gl_bsgs(ctx, n, budget).elements():
        yield perm_to_matrix(perm, ctx, n)
