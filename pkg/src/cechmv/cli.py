"""Command-line front end.

Two commands:

* ``compute <job.json>`` reads a job description, runs the requested tasks
  over the job's degree window, writes ``cohomology.csv``,
  ``pages_<variant>.json`` and an aggregate ``report.json`` to the output
  directory, and prints a one-line summary per task.  Exit code 0 means all
  verifications passed, 1 means the input was rejected, 2 means some
  verification failed.
* ``selftest`` runs the randomized structural property suites on generated
  multicomplexes and small problems.  Deterministic for a fixed seed.

Report files contain no timestamps or absolute paths, so identical inputs
produce byte-identical outputs regardless of worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .cech import (
    CechProblem,
    OracleCache,
    cech_multicomplex,
    default_window,
    degree_classes,
    verify_product_vs_interior,
)
from .errors import ContractError, InputError, InternalCheckError
from .grading import MonomialIdeal, parse_monomial
from .linalg import DEFAULT_PRIME, PrimeField, RationalField, is_prime, mul
from .multicomplex import (
    CochainComplex,
    koszul_complex,
    sign_twist,
    tensor_product,
    totalize,
    validate,
)
from .mvss import infinity_filtration_report, mv_les, run_variant
from .spectral import region_convergence_report, split_column_report

TASK_ORDER = ("cohomology", "verify34", "props2", "mvss:1a", "mvss:1b", "mvss:2a", "mvss:2b", "les")


def _parse_field(obj) -> PrimeField | RationalField:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError('field must be {"prime": p} or {"rational": true}')
    if "prime" in obj:
        p = obj["prime"]
        if not isinstance(p, int) or p < 2:
            raise InputError(f"modulus must be an integer >= 2, got {p!r}")
        if not is_prime(p):
            raise InputError(f"modulus not prime: {p}")
        return PrimeField(p)
    if "rational" in obj:
        if obj["rational"] is not True:
            raise InputError('field: "rational" must be true')
        return RationalField()
    raise InputError(f"unknown field description {obj!r}")


def load_job(path: str) -> tuple[CechProblem, list[str], int | None]:
    """Parse and validate a job file; returns (problem, tasks, pages)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read job file: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"job file is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise InputError("job file must contain a JSON object")
    allowed = {"field", "variables", "quotient", "groups", "window", "tasks", "pages"}
    for key in raw:
        if key not in allowed:
            raise InputError(f"unknown job field {key!r}")
    for key in ("field", "variables", "groups", "tasks"):
        if key not in raw:
            raise InputError(f"missing job field {key!r}")
    field = _parse_field(raw["field"])
    m = raw["variables"]
    if not isinstance(m, int) or m < 1:
        raise InputError(f"variables must be a positive integer, got {m!r}")
    quo = raw.get("quotient", [])
    if not isinstance(quo, list) or not all(isinstance(t, str) for t in quo):
        raise InputError("quotient must be a list of monomial strings")
    groups = raw["groups"]
    if (
        not isinstance(groups, list)
        or not groups
        or not all(isinstance(g, list) and g and all(isinstance(t, str) for t in g) for g in groups)
    ):
        raise InputError("groups must be a nonempty list of nonempty monomial lists")
    gens = tuple(tuple(parse_monomial(t, m) for t in g) for g in groups)
    quotient = MonomialIdeal(m, tuple(parse_monomial(t, m) for t in quo))
    if "window" in raw:
        w = raw["window"]
        if (
            not isinstance(w, list)
            or len(w) != 2
            or not all(isinstance(side, list) and len(side) == m for side in w)
            or not all(isinstance(x, int) for side in w for x in side)
        ):
            raise InputError(f"window must be [[lo_1..lo_{m}], [hi_1..hi_{m}]]")
        window = (tuple(w[0]), tuple(w[1]))
    else:
        window = default_window(m, gens, quotient)
    tasks_raw = raw["tasks"]
    if not isinstance(tasks_raw, list) or not tasks_raw or not all(isinstance(t, str) for t in tasks_raw):
        raise InputError("tasks must be a nonempty list of task names")
    tasks: list[str] = []
    for t in tasks_raw:
        if t not in TASK_ORDER:
            raise InputError(f"unknown task {t!r}; choose from {', '.join(TASK_ORDER)}")
        if t not in tasks:
            tasks.append(t)
    tasks.sort(key=TASK_ORDER.index)
    pages = raw.get("pages")
    if pages is not None and (not isinstance(pages, int) or pages < 0):
        raise InputError(f"pages must be a nonnegative integer, got {pages!r}")
    problem = CechProblem(field, m, gens, quotient, window)
    if "les" in tasks and problem.n != 2:
        raise InputError("task 'les' needs exactly two generator groups")
    return problem, tasks, pages


def _trim_pages(entries: list[dict], pages: int | None) -> list[dict]:
    if pages is None:
        return entries
    out = []
    for e in entries:
        e2 = dict(e)
        e2["pages"] = [pg for pg in e["pages"] if pg["r"] <= pages]
        out.append(e2)
    return out


def run_unit(problem: CechProblem, unit: str, pages: int | None) -> tuple[dict, dict[str, str]]:
    """Execute one task; returns (report payload, files to write)."""
    cache = OracleCache(problem)
    if unit == "cohomology":
        table = cache.table("product", tuple(range(problem.n)), "full")
        payload = {
            "pass": True,
            "file": "cohomology.csv",
            "nonzero_entries": sum(1 for v in table.dims.values() if v),
            "table": table.to_json(),
        }
        return payload, {"cohomology.csv": table.to_csv()}
    if unit == "verify34":
        rep = verify_product_vs_interior(problem, cache)
        return rep, {}
    if unit == "props2":
        violations = []
        checked = 0
        for _pat, members in degree_classes(problem):
            mc = cech_multicomplex(problem, members[0])
            bad = validate(mc)
            if mc.dims:
                bad.extend(region_convergence_report(mc))
            checked += len(members)
            for msg in bad:
                for b in members:
                    violations.append({"degree": list(b), "message": msg})
        return {"pass": not violations, "degrees_checked": checked, "violations": violations}, {}
    if unit.startswith("mvss:"):
        variant = unit.split(":", 1)[1]
        run = run_variant(problem, variant, cache, pages_r=pages)
        entries = _trim_pages(run.degree_report(), pages)
        payload = {
            "pass": run.ok,
            "summary": run.summary_text(),
            "failures": run.failures,
            "classes": len(run.classes),
            "stabilized_at": sorted(
                {c.stabilized_at for c in run.classes if c.stabilized_at is not None}
            ),
            "file": f"pages_{variant}.json",
        }
        if variant == "1a" and problem.n == 3:
            payload["infinity_filtration"] = infinity_filtration_report(run, cache)
            payload["pass"] = payload["pass"] and payload["infinity_filtration"]["pass"]
        files = {
            f"pages_{variant}.json": json.dumps(
                {"variant": variant, "degrees": entries}, sort_keys=True, indent=1
            )
            + "\n"
        }
        return payload, files
    if unit == "les":
        rep = mv_les(problem, cache)
        slim = {
            "pass": rep["pass"],
            "failures": rep["failures"],
            "degrees_checked": len(rep["degrees"]),
            "nontrivial_degrees": [
                {
                    "degree": e["degree"],
                    "ranks": {
                        k: {i: v for i, v in vv.items() if v} for k, vv in e["ranks"].items()
                    },
                }
                for e in rep["degrees"]
                if any(v for vv in e["dims"].values() for v in vv.values())
            ],
        }
        return slim, {}
    raise InputError(f"unknown task {unit!r}")


def _unit_worker(args) -> tuple[str, dict, dict[str, str]]:
    problem, unit, pages = args
    try:
        payload, files = run_unit(problem, unit, pages)
    except (ContractError, InternalCheckError) as e:
        payload, files = {"pass": False, "internal_error": str(e)}, {}
    return unit, payload, files


def cmd_compute(args) -> int:
    try:
        problem, tasks, job_pages = load_job(args.job)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    pages = args.pages if args.pages is not None else job_pages
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    work = [(problem, t, pages) for t in tasks]
    if jobs > 1 and len(work) > 1:
        import multiprocessing

        with multiprocessing.Pool(min(jobs, len(work))) as pool:
            results = pool.map(_unit_worker, work)
    else:
        results = [_unit_worker(w) for w in work]
    results.sort(key=lambda r: TASK_ORDER.index(r[0]))
    all_files: dict[str, str] = {}
    report = {
        "job": {
            "field": {"prime": problem.field.p} if isinstance(problem.field, PrimeField) else {"rational": True},
            "variables": problem.num_vars,
            "groups": [[list(g) for g in grp] for grp in problem.groups],
            "quotient": [list(g) for g in problem.quotient.gens],
            "window": [list(problem.window[0]), list(problem.window[1])],
            "tasks": tasks,
            "pages": pages,
        },
        "results": {},
    }
    ok = True
    for unit, payload, files in results:
        report["results"][unit] = payload
        all_files.update(files)
        ok = ok and payload.get("pass", True)
    report["pass"] = ok
    all_files["report.json"] = json.dumps(report, sort_keys=True, indent=1) + "\n"
    for name, content in sorted(all_files.items()):
        with open(os.path.join(outdir, name), "w", encoding="utf-8") as fh:
            fh.write(content)
    for unit, payload, _files in results:
        status = "pass" if payload.get("pass", True) else "FAIL"
        extra = payload.get("summary", "")
        print(f"{unit}: {status}" + (f"  {extra}" if extra else ""))
    print(f"wrote {', '.join(sorted(all_files))} to {outdir}")
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# selftest


def _random_complex(f, rng, max_len=3, max_dim=3) -> CochainComplex:
    length = int(rng.integers(1, max_len + 1))
    dims = {}
    start = int(rng.integers(0, 2))
    for t in range(start, start + length):
        d = int(rng.integers(0, max_dim + 1))
        if d:
            dims[t] = d
    if not dims:
        dims = {0: 1}
    d = {}
    for t in sorted(dims):
        if t + 1 in dims:
            d[t] = f.array(rng.integers(0, 5, size=(dims[t + 1], dims[t])).tolist())
    # square-zero by construction: zero out a map whenever it composes badly
    for t in sorted(d):
        if t + 1 in d and np.any(mul(f, d[t + 1], d[t])):
            d[t + 1] = f.array(np.zeros_like(d[t + 1], dtype=int).tolist())
    return CochainComplex(f, dims, d)


def _random_tensor_mc(f, rng, max_axes: int):
    n = int(rng.integers(1, max_axes + 1))
    factors = [_random_complex(f, rng) for _ in range(n)]
    mc = tensor_product(factors)
    if rng.integers(0, 2):
        mc = sign_twist(mc)
    return mc


def cmd_selftest(args) -> int:
    rng = np.random.default_rng(args.seed)
    f = PrimeField(DEFAULT_PRIME)
    failures: list[str] = []

    if args.corrupt_signs:
        cx = koszul_complex(f, 2, 1)
        mc = tensor_product([cx, cx])
        key = ((0, 0), 0)
        mat = mc.diffs[key].copy()
        r, c = (int(x) for x in np.argwhere(mat != 0)[0])
        mat[r, c] = -mat[r, c]
        mc.diffs[key] = f.normalize(mat)
        bad = validate(mc)
        if bad:
            print("sign corruption detected:")
            for msg in bad:
                print(f"  d o d != 0: {msg}")
            return 2
        print("corruption not detected")
        return 2

    # suite 1: scaffold exactness
    for n in range(1, max(2, args.max_groups) + 1):
        for dim in (1, 2):
            cx = koszul_complex(f, n, dim)
            cx.check_complex()
            h = cx.cohomology_dims()
            if h:
                failures.append(f"scaffold n={n} dim={dim} not exact: {h}")

    # suite 2: sign-twist involution and totalization invariance
    for trial in range(30):
        mc = _random_tensor_mc(f, rng, args.max_vars)
        tw = sign_twist(mc)
        back = sign_twist(tw)
        for key, mat in mc.diffs.items():
            if np.any(back.diffs[key] != mat):
                failures.append(f"twist not involutive at {key} (trial {trial})")
                break
        if totalize(mc).cohomology_dims() != totalize(tw).cohomology_dims():
            failures.append(f"totalization dims changed under twist (trial {trial})")

    # suite 3: split-column collapse on random lattices
    for trial in range(20):
        mc = _random_tensor_mc(f, rng, args.max_vars)
        for msg in split_column_report(mc):
            failures.append(f"trial {trial}: {msg}")

    # suite 4: page-one and abutment accounting for the four region sequences
    for trial in range(12):
        mc = _random_tensor_mc(f, rng, min(args.max_vars, 3))
        for msg in region_convergence_report(mc):
            failures.append(f"trial {trial}: {msg}")

    # suite 5: small random problems end to end
    for trial in range(5):
        m = int(rng.integers(1, args.max_vars + 1))
        n = int(rng.integers(1, args.max_groups + 1))
        groups = []
        for _ in range(n):
            grp = []
            for _ in range(int(rng.integers(1, 3))):
                g = tuple(int(x) for x in rng.integers(0, 3, size=m))
                grp.append(g if any(g) else tuple([1] + [0] * (m - 1)))
            groups.append(tuple(grp))
        quotient = MonomialIdeal(m, ())
        prob = CechProblem(f, m, tuple(groups), quotient, ((-2,) * m, (2,) * m))
        cache = OracleCache(prob)
        rep = verify_product_vs_interior(prob, cache)
        if not rep["pass"]:
            failures.append(f"problem trial {trial}: {rep['mismatches'][:2]}")
        run = run_variant(prob, "2a", cache)
        if not run.ok:
            failures.append(f"problem trial {trial} 2a: {run.failures[:2]}")

    if failures:
        print(f"selftest FAILED ({len(failures)} problems):")
        for msg in failures[:20]:
            print(f"  {msg}")
        return 2
    print("selftest passed: scaffold exactness, twist involution, split collapse, "
          "region accounting, end-to-end problems")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cechmv",
        description="Multigraded Čech lattices, their spectral sequences, and oracle audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    pc = sub.add_parser("compute", help="run the tasks of a JSON job file")
    pc.add_argument("job", help="path to the job file")
    pc.add_argument("--out", default=".", help="output directory (default: current)")
    pc.add_argument("--jobs", type=int, default=0, help="worker processes (default: cpu count)")
    pc.add_argument("--pages", type=int, default=None, help="highest page to include in dumps")
    pc.set_defaults(func=cmd_compute)
    ps = sub.add_parser("selftest", help="run the randomized property suites")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--max-vars", type=int, default=3)
    ps.add_argument("--max-groups", type=int, default=3)
    ps.add_argument("--corrupt-signs", action="store_true", help=argparse.SUPPRESS)
    ps.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
