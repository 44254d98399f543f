"""Drivers for the four lattice spectral sequences of a Čech problem.

Each variant fixes one filtration of one complex built from the degree-b
Čech lattice:

* 1a - wedge filtration of the face half of the Koszul split, top wedge level
  dropped, on the full lattice; first page made of sum-ideal cohomologies,
  abutting the product-sequence cohomology (raw slot m-n+1 of the full
  product complex).
* 1b - wedge filtration of the face half on the punctured lattice; first page
  made of slot-0-dropped sum-ideal cohomologies, abutting raw slot m-n+1 of
  the truncated product complex.
* 2a - nonzero-coordinate-count filtration of the cube-extended lattice;
  first page made of subset-product cohomologies, abutting the concatenated
  (sum-ideal) cohomology at raw slot m.
* 2b - the same count filtration on the punctured lattice, truncated flavors.

First pages and abutments are checked dimensionwise against the independent
oracle; degrees are grouped by piece pattern so each distinct computation
runs once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .cech import CechProblem, OracleCache, cech_multicomplex, degree_classes
from .errors import ContractError, InputError
from .grading import Exps
from .linalg import image, kernel_space, rank
from .multicomplex import cube_extension, koszul_split
from .spectral import (
    FilteredComplex,
    Page,
    SpectralSequence,
    coordinate_filtration,
    nonzero_count_filtration,
    truncated_face_filtration,
)

VARIANTS = ("1a", "1b", "2a", "2b")


def _assemble(problem: CechProblem, variant: str, b: Exps) -> FilteredComplex:
    if variant not in VARIANTS:
        raise InputError(f"unknown variant {variant!r}")
    punctured = variant in ("1b", "2b")
    mc = cech_multicomplex(problem, b, punctured=punctured)
    if variant == "1a":
        return truncated_face_filtration(koszul_split(mc).face_part)
    if variant == "1b":
        return coordinate_filtration(koszul_split(mc).face_part, 0)
    if variant == "2a":
        return nonzero_count_filtration(cube_extension(mc), skip_axis=0)
    return nonzero_count_filtration(mc)


def _expected_e1(cache: OracleCache, variant: str, p: int, q: int, b: Exps) -> int:
    """Oracle value for the engine cell (p, q) of the first page."""
    prob = cache.problem
    n = prob.n
    if variant in ("1a", "1b"):
        size = n - p
        if size < 0 or (variant == "1a" and p > n - 1):
            return 0
        mode = "full" if variant == "1a" else "truncated"
        return sum(
            cache.raw("concat", s, mode, q, b)
            for s in itertools.combinations(range(n), size)
        )
    size = p
    if size < 1 or size > n:
        return 0
    mode = "full" if variant == "2a" else "truncated"
    return sum(
        cache.raw("product", s, mode, q + 1, b)
        for s in itertools.combinations(range(n), size)
    )


def _expected_abutment(cache: OracleCache, variant: str, m: int, b: Exps) -> int:
    n = cache.problem.n
    if variant == "1a":
        return cache.raw("product", tuple(range(n)), "full", m - n + 1, b)
    if variant == "1b":
        return cache.raw("product", tuple(range(n)), "truncated", m - n + 1, b)
    if variant == "2a":
        return cache.raw("concat", tuple(range(n)), "full", m, b)
    return cache.raw("concat", tuple(range(n)), "truncated", m, b)


@dataclass
class ClassRun:
    """One spectral-sequence computation, valid for every degree in members."""

    members: list[Exps]
    pages: list[Page]
    width: int
    stabilized_at: int | None
    einf_dims: dict[tuple[int, int], int]
    h_dims: dict[int, int]
    graded: dict[int, dict[int, int]]
    e1_mismatches: list[dict]
    abutment_mismatches: list[dict]


@dataclass
class MvssRun:
    problem: CechProblem
    variant: str
    classes: list[ClassRun]
    failures: list[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def degree_report(self) -> list[dict]:
        out = []
        f = self.problem.field
        for cls in self.classes:
            pages_json = [pg.to_json(f) for pg in cls.pages]
            for b in cls.members:
                out.append(
                    {
                        "variant": self.variant,
                        "degree": list(b),
                        "pages": pages_json,
                        "stabilized_at": cls.stabilized_at,
                        "e1_check": {
                            "pass": not cls.e1_mismatches,
                            "mismatches": cls.e1_mismatches,
                        },
                        "abutment_check": {
                            "pass": not cls.abutment_mismatches,
                            "mismatches": cls.abutment_mismatches,
                        },
                    }
                )
        out.sort(key=lambda r: r["degree"])
        return out

    def summary_text(self) -> str:
        n_deg = sum(len(c.members) for c in self.classes)
        status = "pass" if self.ok else f"FAIL ({len(self.failures)} mismatches)"
        return (
            f"variant {self.variant}: {n_deg} degrees in {len(self.classes)} classes, {status}"
        )


def _stabilized_at(field, pages: list[Page]) -> int | None:
    """Smallest r whose page equals every later computed page with all maps
    of rank zero; None if that never happens within the computed horizon."""
    last = len(pages) - 1
    stable_from = None
    for r in range(last, 0, -1):
        pg = pages[r]
        if pg.cells != pages[last].cells:
            break
        if any(rank(field, m) for m in pg.maps.values()):
            break
        stable_from = r
    return stable_from


def run_variant(problem: CechProblem, variant: str, cache: OracleCache | None = None,
                pages_r: int | None = None, check: bool = True) -> MvssRun:
    """Compute the chosen spectral sequence over the whole window and audit
    its first page and abutment against the oracle."""
    cache = cache or OracleCache(problem)
    n = problem.n
    run = MvssRun(problem, variant, [])
    for _pat, members in degree_classes(problem):
        b0 = members[0]
        fc = _assemble(problem, variant, b0)
        ss = SpectralSequence(fc, check=check)
        width = max(fc.width, 1) if fc.total.dims else 1
        r_top = max(width + 1, pages_r if pages_r is not None else 0)
        pages = [ss.page(r) for r in range(r_top + 1)]
        page_inf, ab = ss.infinity()
        einf = dict(pages[width].cells)
        if page_inf.cells != einf:
            raise ContractError("infinity page differs from the width page")

        # first-page audit (engine coordinates)
        e1 = pages[1]
        p_lo = 0
        p_hi = n if variant != "1a" else n - 1
        q_hi = max(
            [q for (_p, q) in e1.cells] + [sum(len(g) for g in problem.groups) + 1]
        )
        q_lo = min([q for (_p, q) in e1.cells] + [-1])
        e1_mism = []
        for p in range(p_lo, p_hi + 1):
            for q in range(q_lo, q_hi + 1):
                want = _expected_e1(cache, variant, p, q, b0)
                got = e1.dim(p, q)
                if got != want:
                    e1_mism.append({"p": p, "q": q, "got": got, "want": want})
        for (p, q), d in e1.cells.items():
            if d and not (p_lo <= p <= p_hi and q_lo <= q <= q_hi):
                e1_mism.append({"p": p, "q": q, "got": d, "want": 0})

        # abutment audit
        m_vals = set(ab.h_dims) | set(fc.total.dims)
        span = n + sum(len(g) for g in problem.groups) + 2
        m_vals.update(range(0, span))
        ab_mism = []
        for m in sorted(m_vals):
            want = _expected_abutment(cache, variant, m, b0)
            got = ab.h_dims.get(m, 0) if fc.total.dims else 0
            if got != want:
                ab_mism.append({"m": m, "got": got, "want": want})

        graded = {m: ab.graded(m) for m in ab.h_dims} if fc.total.dims else {}
        cls = ClassRun(
            members=members,
            pages=pages,
            width=width,
            stabilized_at=_stabilized_at(problem.field, pages),
            einf_dims=einf,
            h_dims={m: d for m, d in ab.h_dims.items() if d} if fc.total.dims else {},
            graded=graded,
            e1_mismatches=e1_mism,
            abutment_mismatches=ab_mism,
        )
        run.classes.append(cls)
        for b in members:
            for mm in e1_mism:
                run.failures.append({"variant": variant, "degree": list(b), "kind": "e1", **mm})
            for mm in ab_mism:
                run.failures.append(
                    {"variant": variant, "degree": list(b), "kind": "abutment", **mm}
                )
    return run


def run_all_variants(problem: CechProblem, cache: OracleCache | None = None,
                     pages_r: int | None = None) -> dict[str, MvssRun]:
    cache = cache or OracleCache(problem)
    return {v: run_variant(problem, v, cache, pages_r) for v in VARIANTS}


def mv_les(problem: CechProblem, cache: OracleCache | None = None,
           runs: dict[str, MvssRun] | None = None) -> dict:
    """Assemble the two-group long exact sequence per degree and verify its
    exactness by rank bookkeeping.

    The connecting rank is inferred from exactness at the product term; the
    two independent joint identities (at the sum term and at the middle term)
    are then checked against the boundary maps of the two first pages.
    """
    if problem.n != 2:
        raise InputError("long exact sequence driver needs exactly two groups")
    cache = cache or OracleCache(problem)
    if runs is None:
        runs = {v: run_variant(problem, v, cache) for v in ("1a", "2a")}
    f = problem.field
    by_degree_1a = {}
    by_degree_2a = {}
    for cls in runs["1a"].classes:
        for b in cls.members:
            by_degree_1a[b] = cls
    for cls in runs["2a"].classes:
        for b in cls.members:
            by_degree_2a[b] = cls
    top = sum(len(g) for g in problem.groups) + 2
    degrees_out = []
    failures = []
    for b in problem.degrees():
        p1a = by_degree_1a[b].pages[1] if by_degree_1a[b].pages else None
        p2a = by_degree_2a[b].pages[1] if by_degree_2a[b].pages else None
        h_sum = {i: cache.raw("concat", (0, 1), "full", i, b) for i in range(top)}
        h_mid = {
            i: cache.raw("concat", (0,), "full", i, b) + cache.raw("concat", (1,), "full", i, b)
            for i in range(top)
        }
        h_prod = {i: cache.raw("product", (0, 1), "full", i, b) for i in range(top)}
        alpha = {i: (p1a.map_rank(f, 0, i) if p1a else 0) for i in range(top)}
        beta = {i: (p2a.map_rank(f, 1, i - 1) if p2a else 0) for i in range(top)}
        delta = {i: h_prod[i] - beta[i] for i in range(top)}
        joints = []
        ok = True
        for i in range(top):
            lhs = h_sum[i] - alpha[i]
            rhs = delta[i - 1] if i >= 1 else 0
            good = lhs == rhs
            joints.append({"i": i, "at": "sum", "kernel": lhs, "image": rhs, "ok": good})
            ok = ok and good
            good = h_mid[i] == alpha[i] + beta[i]
            joints.append(
                {"i": i, "at": "middle", "dim": h_mid[i],
                 "kernel_plus_image": alpha[i] + beta[i], "ok": good}
            )
            ok = ok and good
            if delta[i] < 0 or alpha[i] > min(h_sum[i], h_mid[i]) or beta[i] > min(h_mid[i], h_prod[i]):
                joints.append({"i": i, "at": "ranks", "ok": False})
                ok = False
        entry = {
            "degree": list(b),
            "dims": {"sum": h_sum, "middle": h_mid, "product": h_prod},
            "ranks": {"alpha": alpha, "beta": beta, "delta": delta},
            "joints": joints,
            "pass": ok,
        }
        degrees_out.append(entry)
        if not ok:
            failures.append(entry)
    return {"degrees": degrees_out, "failures": failures, "pass": not failures}


def infinity_filtration_report(run: MvssRun, cache: OracleCache | None = None) -> dict:
    """For a three-group 1a run, recompute the three graded pieces of each
    abutment degree from the first- and second-page maps and match them
    against the engine's limit page and the oracle.

    With d1 maps written phi (out of the leftmost column in the top relevant
    row), phi' and psi' (one row down), psi'' (two rows down), the pieces of
    the abutment at total degree m are:

      top piece      dim ker(phi)  - rank(d2 out of the phi cell),
      middle piece   dim ker(psi') - rank(phi'),
      bottom piece   dim coker(psi'') - rank(d2 into the coker cell).

    The middle piece is recomputed independently through subspace quotients.
    """
    problem = run.problem
    if problem.n != 3 or run.variant != "1a":
        raise InputError("infinity filtration report needs a three-group 1a run")
    f = problem.field
    cache = cache or OracleCache(problem)
    degrees = []
    failures = []
    for cls in run.classes:
        b0 = cls.members[0]
        if not cls.pages:
            continue
        p1, p2 = cls.pages[1], cls.pages[2]
        einf = cls.einf_dims
        m_vals = sorted({p + q for (p, q) in einf} | {p + q for (p, q) in p1.cells} | {2, 3})
        rows = []
        ok = True
        for m in m_vals:
            def d1(p, q):
                return p1.maps.get((p, q))

            def nullity(p, q):
                mat = d1(p, q)
                return p1.dim(p, q) - (rank(f, mat) if mat is not None else 0)

            def rank2(p, q):
                mat = p2.maps.get((p, q))
                return rank(f, mat) if mat is not None else 0

            top = nullity(0, m) - rank2(0, m)
            mid = nullity(1, m - 1) - (rank(f, d1(0, m - 1)) if d1(0, m - 1) is not None else 0)
            coker = p1.dim(2, m - 2) - (rank(f, d1(1, m - 2)) if d1(1, m - 2) is not None else 0)
            bottom = coker - rank2(0, m - 1)
            want = {
                (0, m): einf.get((0, m), 0),
                (1, m - 1): einf.get((1, m - 1), 0),
                (2, m - 2): einf.get((2, m - 2), 0),
            }
            got = {(0, m): top, (1, m - 1): mid, (2, m - 2): bottom}
            oracle_total = cache.raw("product", (0, 1, 2), "full", m - 2, b0)
            row_ok = got == want and sum(got.values()) == oracle_total

            # middle piece again, via explicit subspaces
            psi_p = d1(1, m - 1)
            phi_p = d1(0, m - 1)
            if psi_p is not None:
                ker = kernel_space(f, psi_p)
                img = image(f, phi_p) if phi_p is not None else image(f, f.zeros(psi_p.shape[1], 0))
                if not ker.contains(img):
                    row_ok = False
                else:
                    if ker.quotient_reps(img).shape[0] != mid:
                        row_ok = False
            rows.append(
                {
                    "total_degree": m,
                    "abutment_index": m - 2,
                    "pieces": {
                        "top": [top, want[(0, m)]],
                        "middle": [mid, want[(1, m - 1)]],
                        "bottom": [bottom, want[(2, m - 2)]],
                    },
                    "oracle": oracle_total,
                    "ok": row_ok,
                }
            )
            ok = ok and row_ok
        for b in cls.members:
            entry = {"degree": list(b), "rows": rows, "pass": ok}
            degrees.append(entry)
            if not ok:
                failures.append(entry)
    degrees.sort(key=lambda r: r["degree"])
    return {"variant": "1a", "degrees": degrees, "failures": failures, "pass": not failures}
