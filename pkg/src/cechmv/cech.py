"""Multigraded Čech machinery for monomial sequences.

Everything here works one multidegree b at a time.  Over a monomial quotient
R/J every localization piece is 0- or 1-dimensional, so the degree-b slice of
a Čech complex is a finite complex with entries indexed by subsets of the
generator sequence and matrices with entries in {-1, 0, +1}.

Two independent routes are kept deliberately separate:

* ``cech_complex`` / ``cech_multicomplex`` feed the lattice and filtration
  machinery (CochainComplex / Multicomplex / spectral);
* ``local_cohomology_oracle`` builds its matrices inline and only calls the
  exact rank routine, so it shares no complex-assembly code with the route it
  is used to audit.

The piece pattern of a degree (which localizations are alive) determines
every matrix in both routes, so degrees with equal patterns are
computationally identical; ``degree_classes`` groups a window by pattern and
the verifiers compute once per class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .grading import (
    Exps,
    MonomialIdeal,
    format_monomial,
    localized_piece_dim,
    monomial_mul,
    parse_monomial,
    product_sequence,
    support_mask,
    window_degrees,
)
from .linalg import Field, mul, rank
from .multicomplex import (
    COMMUTATIVE,
    CochainComplex,
    Multicomplex,
    Point,
    Region,
    augment_interior,
    cohomology_map,
    puncture,
    restrict,
    totalize,
)

Window = tuple[Exps, Exps]


@dataclass(frozen=True)
class CechProblem:
    """Module M = R/J with n groups of monomial generators and a degree window."""

    field: Field
    num_vars: int
    groups: tuple[tuple[Exps, ...], ...]
    quotient: MonomialIdeal
    window: Window

    def __post_init__(self):
        if self.num_vars < 1:
            raise InputError("need at least one variable")
        if not self.groups:
            raise InputError("need at least one generator group")
        for gi, group in enumerate(self.groups):
            if not group:
                raise InputError(f"group {gi + 1} is empty")
            for g in group:
                if len(g) != self.num_vars or any(e < 0 for e in g):
                    raise InputError(f"bad monomial {g} in group {gi + 1}")
        if self.quotient.num_vars != self.num_vars:
            raise InputError("quotient ideal has the wrong variable count")
        lo, hi = self.window
        if len(lo) != self.num_vars or len(hi) != self.num_vars:
            raise InputError("window arity does not match the variable count")
        if any(a > b for a, b in zip(lo, hi)):
            raise InputError("window is empty (lo > hi)")

    @property
    def n(self) -> int:
        return len(self.groups)

    def in_window(self, b: Exps) -> bool:
        lo, hi = self.window
        return len(b) == self.num_vars and all(a <= x <= c for x, a, c in zip(b, lo, hi))

    def degrees(self) -> list[Exps]:
        return [tuple(b) for b in window_degrees(self.window)]

    @staticmethod
    def from_text(field: Field, num_vars: int, groups: list[list[str]],
                  quotient: list[str] | None = None, window: Window | None = None) -> "CechProblem":
        gs = tuple(tuple(parse_monomial(t, num_vars) for t in grp) for grp in groups)
        q = MonomialIdeal(num_vars, tuple(parse_monomial(t, num_vars) for t in (quotient or [])))
        if window is None:
            window = default_window(num_vars, gs, q)
        return CechProblem(field, num_vars, gs, q, window)


def default_window(num_vars: int, groups, quotient: MonomialIdeal) -> Window:
    """Per coordinate, [-(g+1), g+1] with g the largest exponent appearing in
    any group or quotient generator."""
    g = [0] * num_vars
    for grp in groups:
        for mono in grp:
            for j, e in enumerate(mono):
                g[j] = max(g[j], e)
    for mono in quotient.gens:
        for j, e in enumerate(mono):
            g[j] = max(g[j], e)
    lo = tuple(-(e + 1) for e in g)
    hi = tuple(e + 1 for e in g)
    return (lo, hi)


def piece_pattern(problem: CechProblem, b: Exps) -> tuple[int, ...]:
    """Aliveness of every localization support at degree b.  All complexes the
    problem can produce at b are determined by this tuple."""
    m = problem.num_vars
    return tuple(localized_piece_dim(mask, problem.quotient, b) for mask in range(1 << m))


def degree_classes(problem: CechProblem) -> list[tuple[tuple[int, ...], list[Exps]]]:
    """Window degrees grouped by piece pattern, each class in lex order, the
    classes ordered by their first member."""
    by_pat: dict[tuple[int, ...], list[Exps]] = {}
    order: list[tuple[int, ...]] = []
    for b in problem.degrees():
        pat = piece_pattern(problem, b)
        if pat not in by_pat:
            by_pat[pat] = []
            order.append(pat)
        by_pat[pat].append(b)
    return [(pat, by_pat[pat]) for pat in order]


# ---------------------------------------------------------------------------
# engine-side constructions


def cech_complex(field: Field, seq: tuple[Exps, ...], quotient: MonomialIdeal,
                 b: Exps, truncated: bool = False) -> CochainComplex:
    """Degree-b slice of the Čech complex on ``seq`` over R/J.

    Slot t is the sum over t-element index subsets S of the piece of
    (R/J) localized at the product over S; maps are alternating-sign
    localization maps.  ``truncated`` drops slot 0.
    """
    if not seq:
        raise InputError("empty generator sequence")
    length = len(seq)
    masks = {}
    piece = {}

    def alive(s: tuple[int, ...]) -> int:
        if s not in piece:
            mk = 0
            for i in s:
                mk |= support_mask(seq[i])
            masks[s] = mk
            piece[s] = localized_piece_dim(mk, quotient, b)
        return piece[s]

    kept: dict[int, list[tuple[int, ...]]] = {}
    for t in range(0 if not truncated else 1, length + 1):
        lst = [s for s in itertools.combinations(range(length), t) if alive(s)]
        if lst:
            kept[t] = lst
    dims = {t: len(lst) for t, lst in kept.items()}
    d = {}
    for t, lst in kept.items():
        nxt = kept.get(t + 1)
        if not nxt:
            continue
        index = {s: k for k, s in enumerate(nxt)}
        mat = field.zeros(len(nxt), len(lst))
        wrote = False
        for col, s in enumerate(lst):
            inside = set(s)
            for j in range(length):
                if j in inside:
                    continue
                tgt = tuple(sorted(inside | {j}))
                row = index.get(tgt)
                if row is None:
                    continue
                sign = -1 if sum(1 for i in s if i < j) % 2 else 1
                mat[row, col] = sign
                wrote = True
        if wrote:
            d[t] = field.normalize(mat)
    blocks = {t: tuple((s, 1) for s in lst) for t, lst in kept.items()}
    return CochainComplex(field, dims, d, blocks)


def cech_multicomplex(problem: CechProblem, b: Exps, punctured: bool = False) -> Multicomplex:
    """The n-axis lattice of iterated Čech slots at degree b.

    The entry at q = (q_1..q_n) is the sum over choices of a q_i-subset S_i of
    each group of the piece of R/J localized at the product of all chosen
    generators; axis i acts by that group's alternating-sign maps, and the
    axes commute.  ``punctured`` removes the origin entry.
    """
    if not problem.in_window(b):
        raise InputError(f"degree {b} outside the window {problem.window}")
    f = problem.field
    J = problem.quotient
    groups = problem.groups
    n = problem.n
    sizes = [len(g) for g in groups]
    gmasks = [[support_mask(g) for g in grp] for grp in groups]
    piece_cache: dict[int, int] = {}

    def alive(mask: int) -> int:
        if mask not in piece_cache:
            piece_cache[mask] = localized_piece_dim(mask, J, b)
        return piece_cache[mask]

    subset_lists = [
        {t: list(itertools.combinations(range(sz), t)) for t in range(sz + 1)} for sz in sizes
    ]
    dims: dict[Point, int] = {}
    pblocks: dict[Point, tuple] = {}
    labels: dict[Point, tuple[str, ...]] = {}
    index: dict[Point, dict[tuple, int]] = {}
    box_lo = (0,) * n
    box_hi = tuple(sizes)
    for q in itertools.product(*[range(sz + 1) for sz in sizes]):
        kept = []
        for combo in itertools.product(*[subset_lists[i][q[i]] for i in range(n)]):
            mask = 0
            for i, s in enumerate(combo):
                for k in s:
                    mask |= gmasks[i][k]
            if alive(mask):
                kept.append(combo)
        if not kept:
            continue
        dims[q] = len(kept)
        pblocks[q] = tuple((combo, 1) for combo in kept)
        labels[q] = tuple(
            "|".join("{" + ",".join(format_monomial(groups[i][k]) for k in s) + "}"
                     for i, s in enumerate(combo))
            for combo in kept
        )
        index[q] = {combo: pos for pos, combo in enumerate(kept)}
    diffs: dict[tuple[Point, int], np.ndarray] = {}
    for q, kept_idx in index.items():
        for i in range(n):
            tq = q[:i] + (q[i] + 1,) + q[i + 1 :]
            tidx = index.get(tq)
            if tidx is None:
                continue
            mat = f.zeros(dims[tq], dims[q])
            wrote = False
            for combo, col in kept_idx.items():
                s = combo[i]
                inside = set(s)
                for j in range(sizes[i]):
                    if j in inside:
                        continue
                    tcombo = combo[:i] + (tuple(sorted(inside | {j})),) + combo[i + 1 :]
                    row = tidx.get(tcombo)
                    if row is None:
                        continue
                    sign = -1 if sum(1 for k in s if k < j) % 2 else 1
                    mat[row, col] = sign
                    wrote = True
            if wrote:
                diffs[(q, i)] = f.normalize(mat)
    mc = Multicomplex(f, n, (box_lo, box_hi), dims, diffs, COMMUTATIVE, labels, pblocks)
    return puncture(mc) if punctured else mc


# ---------------------------------------------------------------------------
# result tables


@dataclass(frozen=True)
class CohomologyTable:
    """Dimensions per (index i, multidegree b) over a window.

    ``convention`` records what index 0 means: "h" tables hold the cohomology
    of the full complex by raw slot degree; "hcheck" tables hold the truncated
    complex's cohomology shifted down by one (index i is raw slot i+1).
    """

    num_vars: int
    i_min: int
    i_max: int
    window: Window
    convention: str
    dims: dict[tuple[int, Exps], int]

    def get(self, i: int, b: Exps) -> int:
        return self.dims.get((i, b), 0)

    def csv_rows(self):
        header = ["i"] + [f"b{j + 1}" for j in range(self.num_vars)] + ["dim"]
        yield header
        for i in range(self.i_min, self.i_max + 1):
            for b in window_degrees(self.window):
                yield [i, *b, self.get(i, tuple(b))]

    def to_csv(self) -> str:
        return "\n".join(",".join(str(x) for x in row) for row in self.csv_rows()) + "\n"

    def to_json(self) -> dict:
        return {
            "convention": self.convention,
            "i_range": [self.i_min, self.i_max],
            "window": [list(self.window[0]), list(self.window[1])],
            "entries": [
                {"i": i, "b": list(b), "dim": d}
                for (i, b), d in sorted(self.dims.items())
                if d
            ],
        }


# ---------------------------------------------------------------------------
# the oracle: inline matrices, rank calls only


def _oracle_vectors(field: Field, seq: tuple[Exps, ...], quotient: MonomialIdeal,
                    b: Exps) -> tuple[list[int], list[int]]:
    """Slot dimensions (0..L) and differential ranks (0..L-1) of the full
    degree-b Čech complex on ``seq``, built directly from subsets."""
    length = len(seq)
    piece: dict[tuple[int, ...], int] = {}
    mask_cache: dict[int, int] = {}

    def alive(s: tuple[int, ...]) -> int:
        if s not in piece:
            mk = 0
            for i in s:
                mk |= support_mask(seq[i])
            if mk not in mask_cache:
                mask_cache[mk] = localized_piece_dim(mk, quotient, b)
            piece[s] = mask_cache[mk]
        return piece[s]

    kept = [
        [s for s in itertools.combinations(range(length), t) if alive(s)]
        for t in range(length + 1)
    ]
    dims = [len(k) for k in kept]
    ranks = []
    for t in range(length):
        if not dims[t] or not dims[t + 1]:
            ranks.append(0)
            continue
        index = {s: k for k, s in enumerate(kept[t + 1])}
        mat = field.zeros(dims[t + 1], dims[t])
        for col, s in enumerate(kept[t]):
            inside = set(s)
            for j in range(length):
                if j in inside:
                    continue
                row = index.get(tuple(sorted(inside | {j})))
                if row is None:
                    continue
                mat[row, col] = -1 if sum(1 for i in s if i < j) % 2 else 1
        ranks.append(rank(field, field.normalize(mat)))
    return dims, ranks


def _vectors_to_raw(dims: list[int], ranks: list[int], truncated: bool) -> dict[int, int]:
    """Raw-slot cohomology dims of the full complex, or of the complex with
    slot 0 removed (same matrices, d_0 discarded)."""
    length = len(dims) - 1
    out = {}
    for t in range(0 if not truncated else 1, length + 1):
        up = ranks[t] if t < length else 0
        down = ranks[t - 1] if t >= 1 and not (truncated and t == 1) else 0
        h = dims[t] - up - down
        if h:
            out[t] = h
    return out


def local_cohomology_oracle(field: Field, seq: tuple[Exps, ...], quotient: MonomialIdeal,
                            window: Window, augmented: bool = True,
                            jobs: int = 1) -> CohomologyTable:
    """Independent dimension table over the window.

    augmented=True: index i is the i-th cohomology of the full complex (the
    module sits in slot 0).  augmented=False: the slot-0 module is removed
    and index i means raw slot i+1 (the "hcheck" convention), so index 0 is
    the kernel of the first surviving map.
    """
    num_vars = len(window[0])
    degrees = [tuple(b) for b in window_degrees(window)]
    if jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            vecs = pool.starmap(
                oracle_degree_job,
                [(field, seq, quotient, b) for b in degrees],
                chunksize=max(1, len(degrees) // (4 * jobs)),
            )
        results = dict(zip(degrees, vecs))
    else:
        results = {b: oracle_degree_job(field, seq, quotient, b) for b in degrees}
    dims: dict[tuple[int, Exps], int] = {}
    for b in degrees:
        dvec, rvec = results[b]
        raw = _vectors_to_raw(dvec, rvec, truncated=not augmented)
        for t, h in raw.items():
            i = t if augmented else t - 1
            dims[(i, b)] = h
    i_min = 0
    i_max = len(seq) if augmented else len(seq) - 1
    return CohomologyTable(num_vars, i_min, i_max, window,
                           "h" if augmented else "hcheck", dims)


def oracle_degree_job(field: Field, seq: tuple[Exps, ...], quotient: MonomialIdeal,
                      b: Exps) -> tuple[list[int], list[int]]:
    """Pure per-degree oracle computation (safe to run in a worker process)."""
    return _oracle_vectors(field, seq, quotient, b)


class OracleCache:
    """Per-problem memo of oracle slot/rank vectors for every sequence the
    verifiers need, shared across variants and degrees.

    Degrees with equal piece patterns share vectors.  ``raw`` exposes raw-slot
    cohomology of the full ("full") or slot-0-dropped ("truncated") complex on
    the concatenation ("concat") or generator-products ("product") of a subset
    of groups.
    """

    def __init__(self, problem: CechProblem):
        self.problem = problem
        self._pat: dict[Exps, tuple[int, ...]] = {}
        self._vecs: dict[tuple, tuple[list[int], list[int]]] = {}
        self._seqs: dict[tuple, tuple[Exps, ...]] = {}

    def pattern(self, b: Exps) -> tuple[int, ...]:
        if b not in self._pat:
            self._pat[b] = piece_pattern(self.problem, b)
        return self._pat[b]

    def seq(self, kind: str, subset: tuple[int, ...]) -> tuple[Exps, ...]:
        key = (kind, subset)
        if key not in self._seqs:
            groups = [self.problem.groups[i] for i in subset]
            if kind == "concat":
                self._seqs[key] = tuple(g for grp in groups for g in grp)
            elif kind == "product":
                self._seqs[key] = product_sequence(tuple(groups))
            else:
                raise InputError(f"unknown sequence kind {kind!r}")
        return self._seqs[key]

    def vectors(self, seq: tuple[Exps, ...], b: Exps) -> tuple[list[int], list[int]]:
        key = (seq, self.pattern(b))
        if key not in self._vecs:
            self._vecs[key] = _oracle_vectors(self.problem.field, seq,
                                              self.problem.quotient, b)
        return self._vecs[key]

    def raw(self, kind: str, subset: tuple[int, ...], mode: str, t: int, b: Exps) -> int:
        """dim of raw slot-t cohomology; mode "full" keeps slot 0, mode
        "truncated" removes it (so t=0 is always 0 there)."""
        seq = self.seq(kind, subset)
        if not seq:
            if mode == "full":
                return localized_piece_dim(0, self.problem.quotient, b) if t == 0 else 0
            return 0
        if t < 0 or t > len(seq) or (mode == "truncated" and t == 0):
            return 0
        dims, ranks = self.vectors(seq, b)
        length = len(seq)
        up = ranks[t] if t < length else 0
        if mode == "truncated":
            down = ranks[t - 1] if t >= 2 else 0
        else:
            down = ranks[t - 1] if t >= 1 else 0
        return dims[t] - up - down

    def table(self, kind: str, subset: tuple[int, ...], mode: str) -> CohomologyTable:
        seq = self.seq(kind, subset)
        p = self.problem
        dims: dict[tuple[int, Exps], int] = {}
        for b in p.degrees():
            top = len(seq) if seq else 0
            for t in range(0, top + 1):
                h = self.raw(kind, subset, mode, t, b)
                if h:
                    i = t if mode == "full" else t - 1
                    dims[(i, b)] = h
        i_max = len(seq) if mode == "full" else max(len(seq) - 1, 0)
        return CohomologyTable(p.num_vars, 0, i_max, p.window,
                               "h" if mode == "full" else "hcheck", dims)


# ---------------------------------------------------------------------------
# verifications


def verify_product_vs_interior(problem: CechProblem, cache: OracleCache | None = None) -> dict:
    """Audit, per window degree, the dimension identities tying the interior
    of the Čech lattice to the single product-sequence complex:

    * raw H^{i+n-1} of the augmented interior equals the product oracle's H^i;
    * for every nonempty group subset of size p, raw H^{i+p-1} of the interior
      totalization equals the subset's product oracle at truncated slot i;
    * the two first-slot kernels (lattice route and product route) agree;
    * the four-term dimension identity
      h^{n-1} - dim M_b + dim ker - h^n = 0 holds.

    Degrees are grouped by piece pattern; one computation covers each class.
    """
    cache = cache or OracleCache(problem)
    n = problem.n
    all_groups = tuple(range(n))
    mismatches: list[dict] = []
    checked = 0
    subsets = [s for p in range(1, n + 1) for s in itertools.combinations(range(n), p)]
    for _pat, members in degree_classes(problem):
        b0 = members[0]
        mc = cech_multicomplex(problem, b0)
        plus = augment_interior(mc, all_groups)
        plus_h = plus.cohomology_dims()
        prod_len = len(cache.seq("product", all_groups))
        sub_h = {}
        for s in subsets:
            sub_h[s] = totalize(restrict(mc, Region.interior(s, n))).cohomology_dims()
        m_dim = localized_piece_dim(0, problem.quotient, b0)
        dker_lattice = sub_h[all_groups].get(n, 0)
        issues: list[dict] = []
        top_i = max(prod_len + 1, max(plus_h, default=0) - n + 2)
        for i in range(0, top_i + 1):
            want = cache.raw("product", all_groups, "full", i, b0)
            got = plus_h.get(i + n - 1, 0)
            if got != want:
                issues.append({"check": "h", "i": i, "got": got, "want": want})
        for s in subsets:
            p = len(s)
            sub_len = len(cache.seq("product", s))
            top = max(sub_len + 1, max(sub_h[s], default=0) - p + 2)
            for i in range(1, top + 1):
                want = cache.raw("product", s, "truncated", i, b0)
                got = sub_h[s].get(i + p - 1, 0)
                if got != want:
                    issues.append({"check": "truncated", "subset": list(s), "i": i,
                                   "got": got, "want": want})
        dker_product = cache.raw("product", all_groups, "truncated", 1, b0)
        if dker_lattice != dker_product:
            issues.append({"check": "kernels", "got": dker_lattice, "want": dker_product})
        four = plus_h.get(n - 1, 0) - m_dim + dker_lattice - plus_h.get(n, 0)
        if four != 0:
            issues.append({"check": "four_term", "value": four})
        checked += len(members)
        for issue in issues:
            for b in members:
                mismatches.append({"degree": list(b), **issue})
    return {
        "degrees_checked": checked,
        "mismatches": mismatches,
        "pass": not mismatches,
    }


class _AugmentedFiber:
    """Degree-b augmented interior complex plus the bookkeeping needed to map
    its basis elements across degrees (each element is a choice of generator
    subsets, whose localization support never changes)."""

    def __init__(self, problem: CechProblem, b: Exps):
        self.problem = problem
        self.b = b
        n = problem.n
        mc = cech_multicomplex(problem, b)
        self.plus = augment_interior(mc, tuple(range(n)))
        self.keys: dict[int, list] = {}
        self.positions: dict[int, dict] = {}
        inner = restrict(mc, Region.interior_all(n))
        by_degree: dict[int, list[Point]] = {}
        for q in inner.points():
            by_degree.setdefault(sum(q), []).append(q)
        for m in self.plus.dims:
            keys: list = []
            if m == n - 1:
                if self.plus.dim(m):
                    keys.append("aug")
            else:
                for q in sorted(by_degree.get(m, [])):
                    for combo, _ in inner.point_blocks[q]:
                        keys.append((q, combo))
            self.keys[m] = keys
            self.positions[m] = {k: i for i, k in enumerate(keys)}

    def h_reps_dims(self) -> dict[int, int]:
        return self.plus.cohomology_dims()


def _step_chain(src: _AugmentedFiber, dst: _AugmentedFiber) -> dict[int, np.ndarray]:
    """Multiplication-by-monomial chain map between two fibers: each basis
    element maps to its namesake if that one is still alive."""
    f = src.problem.field
    chain = {}
    for m in sorted(set(src.plus.dims) | set(dst.plus.dims)):
        mat = f.zeros(dst.plus.dim(m), src.plus.dim(m))
        for col, key in enumerate(src.keys.get(m, [])):
            row = dst.positions.get(m, {}).get(key)
            if row is not None:
                mat[row, col] = 1
        chain[m] = mat
    return chain


def annihilation_report(problem: CechProblem, bound: int, cache: OracleCache | None = None) -> dict:
    """Check that every cohomology class of the augmented interior complex is
    killed, within the window, by a power of each generator-product monomial.

    For each degree b with classes, each product generator g and each power
    N <= bound with b + N*deg(g) still in the window, the induced map on
    cohomology is composed step by step; a class counts as annihilated once
    its image vanishes.  Classes whose testing walks leave the window before
    vanishing are reported as inconclusive, not failed.
    """
    if bound < 1:
        raise InputError("annihilation bound must be at least 1")
    gens = product_sequence(problem.groups)
    lo, hi = problem.window

    def inside(b: Exps) -> bool:
        return all(a <= x <= c for x, a, c in zip(b, lo, hi))

    if not any(inside(monomial_mul(b, g)) for b in problem.degrees() for g in set(gens)):
        raise InputError("window too small to test annihilation for any exponent")

    fibers: dict[Exps, _AugmentedFiber] = {}
    induced_cache: dict[tuple[Exps, Exps], dict[int, np.ndarray]] = {}

    def fiber(b: Exps) -> _AugmentedFiber:
        if b not in fibers:
            fibers[b] = _AugmentedFiber(problem, b)
        return fibers[b]

    def induced(b: Exps, g: Exps) -> dict[int, np.ndarray]:
        key = (b, g)
        if key not in induced_cache:
            src, dst = fiber(b), fiber(monomial_mul(b, g))
            induced_cache[key] = cohomology_map(src.plus, dst.plus, _step_chain(src, dst))
        return induced_cache[key]

    f = problem.field
    rows: list[dict] = []
    total_pairs = 0
    annihilated_pairs = 0
    inconclusive: list[dict] = []
    for b in problem.degrees():
        hdims = fiber(b).h_reps_dims()
        for m, k in sorted(hdims.items()):
            if not k:
                continue
            for g in sorted(set(gens)):
                total_pairs += k
                cum = f.eye(k)
                cur = b
                found = [None] * k
                ran_out = False
                for nstep in range(1, bound + 1):
                    nxt = monomial_mul(cur, g)
                    if not inside(nxt):
                        ran_out = True
                        break
                    step = induced(cur, g).get(m)
                    if step is None:
                        step = f.zeros(0, cum.shape[0])
                    cum = mul(f, step, cum)
                    for col in range(k):
                        if found[col] is None and not np.any(cum[:, col] if cum.size else []):
                            found[col] = nstep
                    cur = nxt
                    if all(x is not None for x in found):
                        break
                done = sum(1 for x in found if x is not None)
                annihilated_pairs += done
                row = {
                    "degree": list(b),
                    "slot": m,
                    "generator": format_monomial(g),
                    "classes": k,
                    "annihilated_at": [x if x is not None else None for x in found],
                }
                rows.append(row)
                if done < k:
                    inconclusive.append({**row, "window_exhausted": ran_out})
    return {
        "bound": bound,
        "pairs": total_pairs,
        "annihilated": annihilated_pairs,
        "inconclusive": inconclusive,
        "rows": rows,
        "pass": not inconclusive,
    }
