"""System description files (JSON/TOML) and deterministic report writers."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .cocycle import FiniteRangeCocycle, build_cocycle
from .domination import DominationCertificate, SplittingFrame
from .errors import ConfigError
from .sft import ShiftSpace, build_shift, enumerate_words
from .spectrum import SpectrumReport


def load_document(path: str | Path) -> dict:
    path = Path(path)
    text = path.read_bytes()
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(text.decode("utf-8"))
        return json.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


def load_shift(path: str | Path) -> ShiftSpace:
    """Read `{"alphabet": m, "transition": [[0/1,...],...]}` from JSON or TOML."""
    doc = load_document(path)
    try:
        transition = doc["transition"]
        alphabet = doc["alphabet"]
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from None
    shift = build_shift(transition)
    if shift.alphabet_size != alphabet:
        raise ConfigError(
            f"{path}: alphabet says {alphabet} but transition is {shift.alphabet_size}x{shift.alphabet_size}"
        )
    return shift


def load_cocycle(path: str | Path, shift: ShiftSpace | None = None) -> FiniteRangeCocycle:
    """Read a generator table from JSON or TOML.

    Expected keys: dimension, range, beta, matrices (window string -> nested
    rows).  Window strings are comma-separated symbols, e.g. "1,2,1".  When a
    shift is given, the table's domain is checked against it.
    """
    doc = load_document(path)
    for key in ("dimension", "range", "beta", "matrices"):
        if key not in doc:
            raise ConfigError(f"{path}: missing key '{key}'")
    matrices = {}
    for window, rows in doc["matrices"].items():
        try:
            key = tuple(int(s) for s in str(window).split(","))
        except ValueError:
            raise ConfigError(f"{path}: bad window key '{window}'") from None
        matrices[key] = rows
    A = build_cocycle(matrices, beta=doc["beta"])
    if A.dimension != doc["dimension"] or A.radius != doc["range"]:
        raise ConfigError(
            f"{path}: declared dimension/range ({doc['dimension']},{doc['range']}) "
            f"disagree with table ({A.dimension},{A.radius})"
        )
    if shift is not None:
        check_cocycle_domain(A, shift)
    return A


def check_cocycle_domain(A: FiniteRangeCocycle, shift: ShiftSpace) -> None:
    """Require the generator table to cover exactly the admissible windows."""
    width = 2 * A.radius + 1
    admissible = {w.symbols for w in enumerate_words(shift, width)}
    keys = set(A.table)
    missing = admissible - keys
    extra = keys - admissible
    if missing or extra:
        raise ConfigError(
            f"generator table mismatch: missing {sorted(missing)}, extra {sorted(extra)}"
        )


def fmt(x: float) -> str:
    """Locale-free decimal with 17 significant digits (exact double round-trip)."""
    return format(float(x), ".17g")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def file_digest(path: str | Path) -> str:
    return sha256_hex(Path(path).read_bytes())


def payload_digest(obj) -> str:
    return sha256_hex(json.dumps(obj, sort_keys=True).encode("utf-8"))


def write_json(path: str | Path, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def write_csv(path: str | Path, header: list[str], rows, meta: dict) -> None:
    """CSV with '# key=value' comment lines, '.' decimals, 17 significant digits."""
    lines = [f"# {key}={value}" for key, value in sorted(meta.items())]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def report_to_dict(report: SpectrumReport) -> dict:
    return {
        "max_period": report.max_period,
        "intervals": [
            {
                "index": i + 1,
                "lo": float(report.lo[i]),
                "hi": float(report.hi[i]),
                "lo_witness": str(report.lo_witness[i]),
                "hi_witness": str(report.hi_witness[i]),
            }
            for i in range(report.dimension)
        ],
    }


def certificate_to_dict(cert: DominationCertificate) -> dict:
    return {
        "index": cert.index,
        "verdict": "dominated" if cert.dominated else "not_dominated",
        "evidence": "empirical (finite samples, not a proof)",
        "fitted_c": cert.fitted_c,
        "fitted_tau": cert.fitted_tau,
        "bound_c": cert.bound_c,
        "bound_tau": cert.bound_tau,
        "fit_residual": cert.fit_residual,
        "depth": cert.depth,
        "max_period": cert.plan.max_period,
        "n_random": cert.plan.n_random,
        "seed": cert.plan.seed,
        "log_max_gap": [float(v) for v in cert.log_max_gap],
        "samples": list(cert.sample_labels),
    }


def frame_to_dict(frame: SplittingFrame) -> dict:
    return {
        "index": frame.index,
        "depth": frame.depth,
        "residual": frame.residual,
        "window": ",".join(str(s) for s in frame.window.symbols),
        "anchor": frame.window.anchor,
        "E": [[float(v) for v in row] for row in frame.E],
        "F": [[float(v) for v in row] for row in frame.F],
    }
