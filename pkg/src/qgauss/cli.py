"""Command-line front end: scenario-driven moments, dimension reports, and
the verification suites, with machine-readable output.

Exit codes: 0 success, 1 failed verification, 2 invalid scenario or
violated precondition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import dimensions, matmodel, moments, qfock, semigroup
from .copies import FreeHaarBackend, PermGroupBackend, TensorBackend, axiom_check
from .algebra import cyclic_group, group_algebra
from .errors import QGaussError
from .partitions import Partition12, enumerate_pair_singleton
from .qpoly import QPoly
from .scenario import Scenario, ScenarioError


def _emit(doc: str, out_path):
    if out_path:
        with open(out_path, "w") as f:
            f.write(doc)
    else:
        sys.stdout.write(doc)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_moment(args) -> int:
    sc = Scenario.load(args.scenario)
    if args.q:
        sc.q_values = [Fraction(x) for x in args.q.split(",")]
    result = {"word_length": len(sc.word), "backend": sc.backend.name}
    if sc.Q is not None:
        value = moments.q_matrix_moment(sc.word, sc.colors, sc.Q,
                                        sc.backend, sc.cfg)
        result["value"] = str(value)
        result["kind"] = "q_matrix"
    elif sc.n is not None:
        poly = moments.finite_n_moment(sc.word, sc.backend, sc.n, sc.cfg)
        result["qpoly"] = poly.to_strings()
        result["n"] = sc.n
        result["kind"] = "finite_n"
        result["evaluations"] = {str(q): str(poly.eval(q))
                                 for q in sc.q_values}
    else:
        poly = moments.moment(sc.word, sc.backend, sc.cfg)
        result["qpoly"] = poly.to_strings()
        result["kind"] = "limit"
        result["evaluations"] = {str(q): str(poly.eval(q))
                                 for q in sc.q_values}
    _emit(_json(result), args.out)
    return 0


def cmd_dims(args) -> int:
    sc = Scenario.load(args.scenario)
    k_max = int(sc.dims.get("k_max", 2))
    offset = int(sc.dims.get("max_m_offset", 4))
    report = dimensions.growth_report(sc.backend, k_max, max_m_offset=offset)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["k", "dim_scalar", "bound", "stabilized_at_m"])
        for row in report["rows"]:
            writer.writerow(row)
        _emit(buf.getvalue(), args.out)
    else:
        doc = {"backend": report["backend"],
               "rows": [{"k": k, "dim_scalar": d, "bound": b,
                         "stabilized_at_m": s}
                        for k, d, b, s in report["rows"]],
               "fit_slope": report["fit_slope"],
               "d_estimate": report["d_estimate"]}
        _emit(_json(doc), args.out)
    return 0


# ---------------------------------------------------------------------
# verification suites


def _suite_oracle():
    """Engine vs Fock oracle on short pure words."""
    from itertools import product
    backend = FreeHaarBackend(3)
    cfg = qfock.FockConfig(dim_H=2, max_degree=3)
    checks = []
    basis = [cfg.basis_vector(b) for b in range(2)]
    for m in (2, 3, 4):
        for vecs in product(basis, repeat=m):
            word = [(backend.A_one, h) for h in vecs]
            ok = moments.moment(word, backend, cfg) == \
                qfock.vacuum_moment(list(vecs), cfg)
            checks.append({"check": f"oracle m={m}", "ok": ok})
            if not ok:
                return checks
    return checks


def _suite_axioms():
    checks = []
    backends = [
        ("tensor(Z2,Z2)", TensorBackend(
            group_algebra(cyclic_group(2)), group_algebra(cyclic_group(2)), 3)),
        ("perm_group(d=1)", PermGroupBackend(1, 3)),
        ("free_haar", FreeHaarBackend(3)),
    ]
    for name, backend in backends:
        report = axiom_check(backend, word_len=3)
        for ax in ("axiom1", "axiom2", "axiom3", "axiom4", "axiom5"):
            checks.append({"check": f"{name}:{ax}", "ok": report[ax]["ok"],
                           "witness": report[ax]["witness"]})
    return checks


def _suite_semigroup():
    checks = []
    backend = FreeHaarBackend(4)
    cfg = qfock.FockConfig(dim_H=1, max_degree=4)
    u = backend.S["u"]
    h = (Fraction(1),)
    for s in (1, 2):
        sigma = Partition12.make(s, [], range(1, s + 1))
        w = moments.reduce(sigma, [u] * s, [h] * s, backend, cfg)
        tests = [moments.reduce(sigma, [u] * s, [h] * s, backend, cfg)]
        for c in (Fraction(1), Fraction(3, 5), Fraction(1, 2)):
            rep = semigroup.alpha_theta_projected_moment(w, c, tests)
            checks.append({"check": f"alpha_theta deg={s} c={c}",
                           "ok": rep["certified"]})
    return checks


def _suite_matmodel(seed, samples):
    checks = []
    h = (Fraction(1),)
    word = [(None, h)] * 4
    for q0, label in ((Fraction(-1), "-1"), (Fraction(0), "0"),
                      (Fraction(1, 2), "1/2"), (Fraction(1), "1")):
        est = matmodel.mc_moment(word, [[q0]], n=8, samples=samples,
                                 seed=seed)
        checks.append({"check": f"mc s^4 Q={label}", "ok": abs(est.z) <= 3,
                       "mean": est.mean, "target": est.target, "z": est.z})
    return checks


def cmd_verify(args) -> int:
    suites = {
        "oracle": lambda: _suite_oracle(),
        "axioms": lambda: _suite_axioms(),
        "semigroup": lambda: _suite_semigroup(),
        "matmodel": lambda: _suite_matmodel(args.seed, args.samples),
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    lines = []
    failed = False
    for name in names:
        for check in suites[name]():
            check["suite"] = name
            lines.append(json.dumps(check, sort_keys=True))
            if not check["ok"]:
                failed = True
    _emit("\n".join(lines) + "\n", args.out)
    return 1 if failed else 0


# ---------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qgauss",
        description="Exact moments, Wick-word algebra, dimension growth, "
                    "and stochastic checks for generalized q-gaussian "
                    "structures.")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker count (results are deterministic; the "
                        "current implementation runs sequentially)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_m = sub.add_parser("moment", help="compute a moment from a scenario")
    p_m.add_argument("--scenario", required=True)
    p_m.add_argument("--q", help="comma-separated rational q values")
    p_m.add_argument("--out")
    p_m.set_defaults(func=cmd_moment)

    p_d = sub.add_parser("dims", help="dimension growth report")
    p_d.add_argument("--scenario", required=True)
    p_d.add_argument("--format", choices=("json", "csv"), default="json")
    p_d.add_argument("--out")
    p_d.set_defaults(func=cmd_dims)

    p_v = sub.add_parser("verify", help="run a verification suite")
    p_v.add_argument("suite", choices=("oracle", "axioms", "semigroup",
                                       "matmodel", "all"))
    p_v.add_argument("--seed", type=int, default=42)
    p_v.add_argument("--samples", type=int, default=2000)
    p_v.add_argument("--out")
    p_v.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, QGaussError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
