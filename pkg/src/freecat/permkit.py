"""Permutations, n-paths and loops, and the relational flow formulas.

Permutations are stored 0-based (``images[i]`` is the image of ``i``) and
printed 1-based in one-line notation.  Two independent routes are provided
for the feedback analysis: iterated path chasing, and relational algebra
(union, composition, reflexive-transitive closure) over the block
decomposition of a permutation.  They are cross-checked in the tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

from .errors import TypeMismatch


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, k: int) -> Perm:
        return cls(tuple(range(k)))

    @classmethod
    def from_one_line(cls, *images: int) -> Perm:
        """Build from 1-based one-line notation, e.g. ``Perm.from_one_line(2, 4, 3, 1)``."""
        return cls(tuple(i - 1 for i in images))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def one_line(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.images)

    def __str__(self) -> str:
        return "(" + ",".join(str(i) for i in self.one_line()) + ")"


def perm_compose(sigma: Perm, pi: Perm) -> Perm:
    """sigma after pi."""
    if len(sigma) != len(pi):
        raise TypeMismatch(f"cannot compose permutations of sizes {len(sigma)} and {len(pi)}")
    return Perm(tuple(sigma.images[j] for j in pi.images))


def perm_tensor(pi: Perm, sigma: Perm) -> Perm:
    n = len(pi)
    return Perm(pi.images + tuple(j + n for j in sigma.images))


def cycles(pi: Perm) -> list[tuple[int, ...]]:
    """All cycles, each rotated to start at its least element, sorted."""
    seen = set()
    out = []
    for start in range(len(pi)):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        j = pi(start)
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = pi(j)
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class PathAnalysis:
    """Feedback geometry of a permutation of n visible + m hidden points.

    ``io_paths[i]`` is the full sequence ``i, pi(i), ..., j`` ending at the
    first visible index; ``hidden_visits[i]`` its hidden interior; ``loops``
    the cycles inside the hidden part.
    """

    n: int
    io_perm: Perm
    io_paths: tuple[tuple[int, ...], ...]
    hidden_visits: tuple[frozenset[int], ...]
    loops: tuple[tuple[int, ...], ...]


def analyze(pi: Perm, n: int) -> PathAnalysis:
    k = len(pi)
    if not 0 <= n <= k:
        raise ValueError(f"visible count {n} out of range for size {k}")
    paths = []
    io = []
    for i in range(n):
        seq = [i]
        j = pi(i)
        steps = 1
        while j >= n:
            seq.append(j)
            j = pi(j)
            steps += 1
            if steps > k:
                raise AssertionError("n-path did not terminate")
        seq.append(j)
        paths.append(tuple(seq))
        io.append(j)
    visits = tuple(frozenset(p[1:-1]) for p in paths)
    on_paths = set().union(*visits) if visits else set()
    loops = tuple(c for c in cycles(pi) if c[0] >= n and c[0] not in on_paths)
    return PathAnalysis(n, Perm(tuple(io)), tuple(paths), visits, loops)


# --- relational algebra ---------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """A finite binary relation; composition ``r.then(s)`` is ``r ; s``."""

    pairs: frozenset[tuple[Hashable, Hashable]]

    @classmethod
    def of(cls, pairs: Iterable[tuple[Hashable, Hashable]]) -> Relation:
        return cls(frozenset(pairs))

    @classmethod
    def identity(cls, carrier: Iterable[Hashable]) -> Relation:
        return cls(frozenset((x, x) for x in carrier))

    def __or__(self, other: Relation) -> Relation:
        return Relation(self.pairs | other.pairs)

    def __and__(self, other: Relation) -> Relation:
        return Relation(self.pairs & other.pairs)

    def then(self, other: Relation) -> Relation:
        succ: dict = {}
        for a, b in other.pairs:
            succ.setdefault(a, []).append(b)
        return Relation(frozenset((x, z) for x, y in self.pairs for z in succ.get(y, ())))

    def star(self, carrier: Iterable[Hashable]) -> Relation:
        """Reflexive-transitive closure on ``carrier``, iterated to the fixed point."""
        acc = Relation.identity(carrier)
        while True:
            nxt = acc | acc.then(self)
            if nxt == acc:
                return acc
            acc = nxt

    def is_partial_injection(self) -> bool:
        src = [a for a, _ in self.pairs]
        tgt = [b for _, b in self.pairs]
        return len(set(src)) == len(src) and len(set(tgt)) == len(tgt)

    def as_dict(self) -> dict:
        return dict(self.pairs)


@dataclass(frozen=True)
class PartialInjection(Relation):
    """A relation that is functional and injective."""

    def __post_init__(self):
        if not self.is_partial_injection():
            raise ValueError("relation is not a partial injection")


def _block(pi: Perm, rows: range, cols: range, tag_in=None, tag_out=None) -> PartialInjection:
    def t(tag, x):
        return x if tag is None else (tag, x)

    return PartialInjection(
        frozenset((t(tag_in, i), t(tag_out, pi(i))) for i in rows if pi(i) in cols)
    )


def io_perm_relational(pi: Perm, n: int) -> Perm:
    k = len(pi)
    vis, hid = range(n), range(n, k)
    p11 = _block(pi, vis, vis)
    p12 = _block(pi, vis, hid)
    p21 = _block(pi, hid, vis)
    p22 = _block(pi, hid, hid)
    p = p11 | p12.then(p22.star(hid)).then(p21)
    table = p.as_dict()
    if len(table) != n or not p.is_partial_injection():
        raise AssertionError("relational io permutation is not a bijection")
    return Perm(tuple(table[i] for i in range(n)))


def loop_membership(pi: Perm, n: int) -> frozenset[int]:
    """Hidden indices lying on loops, via closure-meets-diagonal."""
    hid = range(n, len(pi))
    p22 = _block(pi, hid, hid)
    # the reflexive part of the star is excluded: j is on a loop iff it
    # returns to itself after at least one step
    plus = p22.then(p22.star(hid))
    return frozenset(a for a, b in (plus & Relation.identity(hid)).pairs)


# --- execution formula ----------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """Block sizes for composing pi : (n, m) -> (p, q) with sigma : (p, q) -> (r, s).

    pi acts on [A+ (n), B- (q)] -> [B+ (p), A- (m)];
    sigma acts on [B+ (p), C- (s)] -> [C+ (r), B- (q)].
    """

    n: int
    m: int
    p: int
    q: int
    r: int
    s: int

    @classmethod
    def infer(cls, pi: Perm, sigma: Perm, n: int, p: int, r: int) -> Profile:
        q = len(pi) - n
        m = len(pi) - p
        s = len(sigma) - p
        if q < 0 or m < 0 or s < 0 or len(sigma) - r != q:
            raise TypeMismatch(
                f"block sizes do not match: |pi|={len(pi)}, |sigma|={len(sigma)}, n={n}, p={p}, r={r}"
            )
        return cls(n, m, p, q, r, s)


def _exec_blocks(pi: Perm, sigma: Perm, pr: Profile):
    """Tagged partial injections for the eight blocks.

    Points are tagged 'A+', 'A-', 'B+', 'B-', 'C+', 'C-' with 0-based offsets.
    """

    def dom_pi(i):
        return ("A+", i) if i < pr.n else ("B-", i - pr.n)

    def cod_pi(j):
        return ("B+", j) if j < pr.p else ("A-", j - pr.p)

    def dom_sg(i):
        return ("B+", i) if i < pr.p else ("C-", i - pr.p)

    def cod_sg(j):
        return ("C+", j) if j < pr.r else ("B-", j - pr.r)

    pi_rel = [(dom_pi(i), cod_pi(pi(i))) for i in range(len(pi))]
    sg_rel = [(dom_sg(i), cod_sg(sigma(i))) for i in range(len(sigma))]

    def blk(rel, a, b):
        return PartialInjection(frozenset((x, y) for x, y in rel if x[0] == a and y[0] == b))

    return {
        "pi_AA": blk(pi_rel, "A+", "A-"),
        "pi_AB": blk(pi_rel, "A+", "B+"),
        "pi_BA": blk(pi_rel, "B-", "A-"),
        "pi_BB": blk(pi_rel, "B-", "B+"),
        "sg_BB": blk(sg_rel, "B+", "B-"),
        "sg_BC": blk(sg_rel, "B+", "C+"),
        "sg_CB": blk(sg_rel, "C-", "B-"),
        "sg_CC": blk(sg_rel, "C-", "C+"),
    }


def _loop_cycles(step: dict, members: Iterable) -> tuple[tuple, ...]:
    out = []
    seen = set()
    for start in sorted(members):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = step[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = step[nxt]
        i = cyc.index(min(cyc))
        out.append(tuple(cyc[i:] + cyc[:i]))
    return tuple(sorted(out))


def execution(pi: Perm, sigma: Perm, *, n: int, p: int, r: int) -> tuple[Perm, tuple[tuple, ...]]:
    """Relational execution formula.

    Returns the composite permutation on [A+, C-] -> [C+, A-] and the loops
    formed in the B feedback zone, each a cycle of tagged points
    ``('B+', j)`` / ``('B-', l)`` rotated to its least point.
    """
    pr = Profile.infer(pi, sigma, n, p, r)
    b = _exec_blocks(pi, sigma, pr)
    bminus = [("B-", j) for j in range(pr.q)]
    bplus = [("B+", j) for j in range(pr.p)]
    # (pi_{B-B+} ; sigma_{B+B-})* on B-, and (sigma_{B+B-} ; pi_{B-B+})* on B+
    loop_minus = b["pi_BB"].then(b["sg_BB"])
    loop_plus = b["sg_BB"].then(b["pi_BB"])
    star_minus = loop_minus.star(bminus)
    star_plus = loop_plus.star(bplus)
    theta_AA = b["pi_AA"] | b["pi_AB"].then(b["sg_BB"]).then(star_minus).then(b["pi_BA"])
    theta_AC = b["pi_AB"].then(star_plus).then(b["sg_BC"])
    theta_CA = b["sg_CB"].then(star_minus).then(b["pi_BA"])
    theta_CC = b["sg_CC"] | b["sg_CB"].then(b["pi_BB"]).then(star_plus).then(b["sg_BC"])
    theta = (theta_AA | theta_AC | theta_CA | theta_CC).as_dict()

    def dom_idx(x):
        return x[1] if x[0] == "A+" else pr.n + x[1]

    def cod_idx(y):
        return y[1] if y[0] == "C+" else pr.r + y[1]

    k = pr.n + pr.s
    images = [None] * k
    for x, y in theta.items():
        images[dom_idx(x)] = cod_idx(y)
    if None in images:
        raise AssertionError("execution formula did not produce a total map")
    plus_minus = loop_minus.then(star_minus)
    plus_plus = loop_plus.then(star_plus)
    on_loops = {a for a, c in plus_minus.pairs if a == c} | {a for a, c in plus_plus.pairs if a == c}
    step = {}
    for x, y in b["pi_BB"].pairs | b["sg_BB"].pairs:
        step[x] = y
    return Perm(tuple(images)), _loop_cycles(step, on_loops)


@dataclass(frozen=True)
class Flow:
    """Result of chasing tokens through two composed permutations.

    ``paths[i]`` lists the hops taken from composite input ``i``: each hop is
    ``('pi', idx)`` or ``('sigma', idx)`` naming the domain index whose
    strand is traversed.  ``loops`` lists closed hop cycles, each rotated to
    start at its least hop.
    """

    theta: Perm
    paths: tuple[tuple[tuple[str, int], ...], ...]
    loops: tuple[tuple[tuple[str, int], ...], ...]


def execution_walk(pi: Perm, sigma: Perm, *, n: int, p: int, r: int) -> Flow:
    """Path-chasing counterpart of :func:`execution`, recording the hops."""
    pr = Profile.infer(pi, sigma, n, p, r)
    k = pr.n + pr.s
    images = []
    paths = []
    used = set()
    limit = len(pi) + len(sigma) + 1
    for i in range(k):
        hops = []
        side, idx = ("pi", i) if i < pr.n else ("sigma", pr.p + i - pr.n)
        while True:
            hops.append((side, idx))
            used.add((side, idx))
            if len(hops) > limit:
                raise AssertionError("token walk did not terminate")
            if side == "pi":
                j = pi(idx)
                if j >= pr.p:
                    images.append(pr.r + j - pr.p)
                    break
                side, idx = "sigma", j
            else:
                j = sigma(idx)
                if j < pr.r:
                    images.append(j)
                    break
                side, idx = "pi", pr.n + j - pr.r
        paths.append(tuple(hops))
    loops = []
    for start in [("pi", pr.n + j) for j in range(pr.q)]:
        if start in used:
            continue
        cyc = []
        side, idx = start
        while (side, idx) not in used:
            used.add((side, idx))
            cyc.append((side, idx))
            if side == "pi":
                side, idx = "sigma", pi(idx)
            else:
                side, idx = "pi", pr.n + sigma(idx) - pr.r
        loops.append(tuple(cyc))
    return Flow(Perm(tuple(images)), tuple(paths), tuple(loops))


def flow_loop_points(flow_loop: tuple[tuple[str, int], ...], pr: Profile) -> tuple:
    """Translate a hop cycle into the tagged B+/B- points it passes through."""
    pts = [("B-", idx - pr.n) if side == "pi" else ("B+", idx) for side, idx in flow_loop]
    i = pts.index(min(pts))
    return tuple(pts[i:] + pts[:i])
