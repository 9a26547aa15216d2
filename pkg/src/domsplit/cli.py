"""Batch front-end: load system files, run one experiment, write reports.

Exit codes: 0 success, 2 mathematically negative verdict (not dominated /
infeasible), 1 tool error.  All outputs embed the tool version, the digest
of the resolved configuration and the seed, and are byte-identical across
runs with the same configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    FeasibilityParams,
    conjugacy_delta,
    conjugacy_threshold,
    delta_max,
    gamma_feasible_constant,
    gamma_feasible_narrow,
    sl2_feasible,
)
from .domination import construct_splitting, domination_test
from .errors import ConfigError, DomsplitError
from .fileio import (
    load_document,
    certificate_to_dict,
    file_digest,
    frame_to_dict,
    load_cocycle,
    load_shift,
    payload_digest,
    report_to_dict,
    write_csv,
    write_json,
)
from .sampling import SamplePlan
from .sft import enumerate_periodic, random_word
from .shadowlab import error_terms, kalinin_gap, shadow_pair, singular_comparison
from .spectrum import classify, spectrum_report

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--shift", help="shift space file (JSON/TOML)")
    common.add_argument("--cocycle", help="cocycle generator file (JSON/TOML)")
    common.add_argument("--out", help="output directory (default .)")
    common.add_argument("--seed", type=int, help="RNG seed recorded in every output")
    common.add_argument("--threads", type=int, help="worker threads (default 1)")
    common.add_argument("--config", help="TOML/JSON config with one table per command")

    p = argparse.ArgumentParser(prog="domsplit", description=__doc__)
    p.add_argument("--version", action="version", version=f"domsplit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("periodic", parents=[common], help="enumerate periodic orbits")
    sp.add_argument("--max-period", type=int, dest="max_period")

    sp = sub.add_parser("spectrum", parents=[common], help="periodic exponent intervals")
    sp.add_argument("--max-period", type=int, dest="max_period")
    sp.add_argument("--center", help="comma-separated target exponents")
    sp.add_argument("--delta", type=float)

    sp = sub.add_parser("dominate", parents=[common], help="singular-value-gap test")
    sp.add_argument("--k", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--max-period", type=int, dest="max_period")
    sp.add_argument("--samples", type=int)

    sp = sub.add_parser("split", parents=[common], help="construct splitting frames")
    sp.add_argument("--k", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--samples", type=int)

    sp = sub.add_parser("shadow", parents=[common], help="shadowing error tables")
    sp.add_argument("--depth", type=int, help="agreement radius / series length")
    sp.add_argument("--pad", type=int, help="extra target radius beyond agreement")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--center", help="top exponent for the norm-excess series")
    sp.add_argument("--max-period", type=int, dest="max_period")
    sp.add_argument("--samples", type=int)

    sp = sub.add_parser("bounds", parents=[common], help="feasibility calculators")
    sp.add_argument(
        "calc",
        choices=[
            "gamma-constant",
            "gamma-narrow",
            "delta-max",
            "sl2",
            "conjugacy-delta",
            "threshold",
        ],
    )
    sp.add_argument("--exponents", help="comma-separated exponent list")
    sp.add_argument("--k", type=int)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--eps0", type=float)
    sp.add_argument("--kappa", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--lam", type=float)
    sp.add_argument("--lam1", type=float)
    sp.add_argument("--lam2", type=float)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--omega", type=float)
    return p


class _Resolver:
    """Flag value -> config table value -> hard default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.table = {}
        if getattr(args, "config", None):
            doc = load_document(args.config)
            self.table = doc.get(args.command, {})
        self.used: dict = {}

    def get(self, name: str, default=None, required: bool = False):
        value = getattr(self.args, name, None)
        if value is None:
            value = self.table.get(name, default)
        if value is None and required:
            raise ConfigError(f"missing required parameter --{name.replace('_', '-')}")
        self.used[name] = value
        return value


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse float list '{text}'") from None


def _meta(command: str, resolver: _Resolver, inputs: dict) -> dict:
    # the output location is not part of the experiment's identity
    params = {k: v for k, v in resolver.used.items() if k != "out"}
    digest_source = {"command": command, "params": params}
    digest_source.update(inputs)
    return {
        "version": __version__,
        "config_digest": payload_digest(digest_source),
        "seed": resolver.used.get("seed", 0),
    }


def _load_systems(res: _Resolver, need_cocycle: bool = True):
    shift_path = res.get("shift", required=True)
    shift = load_shift(shift_path)
    inputs = {"shift_sha": file_digest(shift_path)}
    A = None
    if need_cocycle:
        cocycle_path = res.get("cocycle", required=True)
        A = load_cocycle(cocycle_path, shift)
        inputs["cocycle_sha"] = file_digest(cocycle_path)
    return shift, A, inputs


def _out_dir(res: _Resolver) -> Path:
    out = Path(res.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_periodic(res: _Resolver) -> int:
    shift, _, inputs = _load_systems(res, need_cocycle=False)
    max_period = int(res.get("max_period", 6))
    res.get("seed", 0)
    out = _out_dir(res)
    orbits = []
    for n in range(1, max_period + 1):
        orbits.extend({"period": n, "word": str(p)} for p in enumerate_periodic(shift, n))
    payload = {
        "meta": _meta("periodic", res, inputs),
        "closing_constant": shift.closing_constant,
        "orbits": orbits,
    }
    write_json(out / "orbits.json", payload)
    return EXIT_OK


def _cmd_spectrum(res: _Resolver) -> int:
    shift, A, inputs = _load_systems(res)
    max_period = int(res.get("max_period", 6))
    center_text = res.get("center")
    delta = float(res.get("delta", 0.0))
    threads = int(res.get("threads", 1))
    res.get("seed", 0)
    out = _out_dir(res)
    report = spectrum_report(A, shift, max_period, threads=threads)
    payload = {"meta": _meta("spectrum", res, inputs)}
    payload.update(report_to_dict(report))
    if center_text is not None:
        center = _parse_floats(center_text)
        verdict = classify(report, center, delta)
        payload["classification"] = verdict.value
        payload["center"] = center
        payload["delta"] = delta
    write_json(out / "spectrum.json", payload)
    d = report.dimension
    header = ["period", "orbit", *[f"chi_{i + 1}" for i in range(d)]]
    rows = [
        (row.orbit.period, str(row.orbit).replace(",", ";"), *map(float, row.exponents))
        for row in report.rows
    ]
    write_csv(out / "spectrum.csv", header, rows, payload["meta"])
    return EXIT_OK


def _cmd_dominate(res: _Resolver) -> int:
    shift, A, inputs = _load_systems(res)
    k = int(res.get("k", 1))
    depth = int(res.get("depth", 30))
    plan = SamplePlan(
        max_period=int(res.get("max_period", 8)),
        n_random=int(res.get("samples", 20)),
        seed=int(res.get("seed", 0)),
    )
    threads = int(res.get("threads", 1))
    out = _out_dir(res)
    cert = domination_test(A, shift, k, depth, plan, threads=threads, keep_series=True)
    meta = _meta("dominate", res, inputs)
    payload = {"meta": meta}
    payload.update(certificate_to_dict(cert))
    write_json(out / "certificate.json", payload)
    rows = []
    for label, series in zip(cert.sample_labels, cert.sample_log_gaps):
        for n, logg in enumerate(series, start=1):
            rows.append((n, float(np.exp(logg)), label.replace(",", ";")))
    write_csv(out / "gaps.csv", ["n", "g_n", "orbit_id"], rows, meta)
    return EXIT_OK if cert.dominated else EXIT_NEGATIVE


def _cmd_split(res: _Resolver) -> int:
    shift, A, inputs = _load_systems(res)
    k = int(res.get("k", 1))
    depth = int(res.get("depth", 20))
    n_samples = int(res.get("samples", 5))
    seed = int(res.get("seed", 0))
    out = _out_dir(res)
    rng = np.random.default_rng(seed)
    radius = depth + A.radius
    frames = []
    for i in range(n_samples):
        w = random_word(shift, 2 * radius + 1, rng, anchor=radius)
        frames.append((f"w{i}", construct_splitting(A, w, k, depth=depth)))
    meta = _meta("split", res, inputs)
    payload = {
        "meta": meta,
        "frames": [dict(sample=label, **frame_to_dict(f)) for label, f in frames],
    }
    write_json(out / "frames.json", payload)
    rows = [(label, f.depth, float(f.residual)) for label, f in frames]
    write_csv(out / "residuals.csv", ["sample", "depth", "residual"], rows, meta)
    return EXIT_OK


def _cmd_shadow(res: _Resolver) -> int:
    shift, A, inputs = _load_systems(res)
    depth = int(res.get("depth", 15))
    pad = int(res.get("pad", 5))
    gamma = float(res.get("gamma", 0.3))
    center_text = res.get("center")
    plan = SamplePlan(
        max_period=int(res.get("max_period", 6)),
        n_random=int(res.get("samples", 10)),
        seed=int(res.get("seed", 0)),
    )
    out = _out_dir(res)
    meta = _meta("shadow", res, inputs)
    rng = np.random.default_rng(plan.seed)
    radius = depth + pad
    target = random_word(shift, 2 * radius + 1, rng, anchor=radius)
    pair = shadow_pair(target, shift, radius=depth)

    err_rows = [
        (row.position, row.actual, row.bound, "PASS" if row.passed else "FAIL")
        for row in error_terms(A, pair)
    ]
    write_csv(out / "shadow_errors.csv", ["i", "actual", "bound", "status"], err_rows, meta)

    cmp_rows = [
        (
            row.steps,
            row.index,
            row.sigma_orbit,
            row.sigma_shadow,
            row.difference,
            row.bound,
            "PASS" if row.passed else "FAIL",
        )
        for row in singular_comparison(A, shift, target, gamma, radius=depth)
    ]
    write_csv(
        out / "singular_comparison.csv",
        ["steps", "index", "sigma_orbit", "sigma_shadow", "difference", "bound", "status"],
        cmp_rows,
        meta,
    )

    summary = {
        "meta": meta,
        "target": ",".join(str(s) for s in target.symbols),
        "shadow": str(pair.shadow),
        "agreement_radius": pair.radius,
        "errors_all_pass": all(r[3] == "PASS" for r in err_rows),
        "comparison_all_pass": all(r[6] == "PASS" for r in cmp_rows),
    }
    if center_text is not None:
        lam1 = _parse_floats(center_text)[0]
        excess = kalinin_gap(A, shift, lam1, depth, plan)
        ns = np.arange(1, depth + 1)
        c_obs = float(np.exp(np.max(ns * excess)))
        bound = np.log(c_obs) / ns
        k_rows = [
            (int(n), float(e), float(b), "PASS" if e <= b + 1e-9 else "FAIL")
            for n, e, b in zip(ns, excess, bound)
        ]
        write_csv(out / "kalinin.csv", ["n", "excess", "bound", "status"], k_rows, meta)
        summary["norm_excess_constant"] = c_obs
    write_json(out / "shadow.json", summary)
    return EXIT_OK


def _cmd_bounds(res: _Resolver) -> int:
    calc = res.get("calc", required=True)
    res.get("seed", 0)
    out = _out_dir(res)
    negative = False
    if calc == "gamma-constant":
        params = FeasibilityParams(
            exponents=tuple(_parse_floats(res.get("exponents", required=True))),
            beta=float(res.get("beta", required=True)),
            mu=float(res.get("mu", required=True)),
            eps=float(res.get("eps", required=True)),
            eps0=float(res.get("eps0", required=True)),
            kappa=float(res.get("kappa", required=True)),
        )
        r = gamma_feasible_constant(params, int(res.get("k", 1)))
        result = {
            "feasible": r.feasible,
            "gamma_interval": list(r.gamma_interval),
            "binding_constraints": list(r.binding_constraints),
        }
        negative = not r.feasible
    elif calc == "gamma-narrow":
        r = gamma_feasible_narrow(
            beta=float(res.get("beta", required=True)),
            mu=float(res.get("mu", required=True)),
            lam1=float(res.get("lam1", required=True)),
            lam2=float(res.get("lam2", required=True)),
            delta=float(res.get("delta", required=True)),
            eps=float(res.get("eps", 0.0)),
            kappa=float(res.get("kappa", 0.0)),
        )
        result = {
            "feasible": r.feasible,
            "gamma_interval": list(r.gamma_interval),
            "binding_constraints": list(r.binding_constraints),
        }
        negative = not r.feasible
    elif calc == "delta-max":
        result = {
            "delta_max": delta_max(
                float(res.get("beta", required=True)),
                float(res.get("lam1", required=True)),
                float(res.get("lam2", required=True)),
            )
        }
    elif calc == "sl2":
        ok = sl2_feasible(
            float(res.get("lam", required=True)),
            float(res.get("beta", required=True)),
            float(res.get("delta", required=True)),
        )
        result = {"feasible": ok}
        negative = not ok
    elif calc == "conjugacy-delta":
        result = {
            "delta": conjugacy_delta(
                float(res.get("theta", required=True)),
                float(res.get("omega", required=True)),
                float(res.get("lam", required=True)),
            )
        }
    else:
        result = {"threshold": conjugacy_threshold()}
    payload = {"meta": _meta("bounds", res, {}), "calc": calc, "result": result}
    write_json(out / "bounds.json", payload)
    print(json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_NEGATIVE if negative else EXIT_OK


_COMMANDS = {
    "periodic": _cmd_periodic,
    "spectrum": _cmd_spectrum,
    "dominate": _cmd_dominate,
    "split": _cmd_split,
    "shadow": _cmd_shadow,
    "bounds": _cmd_bounds,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # keep exit code 2 reserved for negative verdicts; usage errors are tool errors
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        res = _Resolver(args)
        return _COMMANDS[args.command](res)
    except (DomsplitError, OSError) as exc:
        print(f"domsplit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
