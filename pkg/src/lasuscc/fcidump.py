"""FCIDUMP interchange and job configuration.

The FCIDUMP two-body records are interpreted in chemist notation (pq|rs) —
the de-facto convention for this format: a record ``value i j k l`` with all
indices nonzero contributes to g[i-1, j-1, k-1, l-1] and its 8-fold symmetry
partners; ``value i j 0 0`` is one-body; ``value 0 0 0 0`` is the constant.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .fock import Sector
from .geometry import Geometry, h2_clusters
from .integrals import IntegralSet


class FcidumpParseError(ValueError):
    """FCIDUMP syntax or consistency problem, with the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class JobValidationError(ValueError):
    """Job-file schema or consistency problem, with a JSON pointer path."""

    def __init__(self, message: str, json_path: str = "$"):
        self.json_path = json_path
        super().__init__(f"{json_path}: {message}")


# ---------------------------------------------------------------------------
# Fragment layout


@dataclass(frozen=True)
class Fragment:
    orbitals: tuple[int, ...]
    n_alpha: int
    n_beta: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "orbitals", tuple(int(i) for i in self.orbitals))
        if len(set(self.orbitals)) != len(self.orbitals):
            raise ValueError(f"repeated orbital in fragment {self.orbitals}")
        if not 0 <= self.n_alpha <= len(self.orbitals):
            raise ValueError(f"n_alpha={self.n_alpha} exceeds fragment size {len(self.orbitals)}")
        if not 0 <= self.n_beta <= len(self.orbitals):
            raise ValueError(f"n_beta={self.n_beta} exceeds fragment size {len(self.orbitals)}")

    @property
    def n_orb(self) -> int:
        return len(self.orbitals)

    @property
    def sector(self) -> Sector:
        return Sector(self.n_orb, self.n_alpha, self.n_beta)


@dataclass(frozen=True)
class FragmentLayout:
    """Ordered partition of the active orbitals into fragments."""

    fragments: tuple[Fragment, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "fragments", tuple(self.fragments))
        seen: dict[int, int] = {}
        for k, frag in enumerate(self.fragments):
            for orb in frag.orbitals:
                if orb in seen:
                    raise ValueError(
                        f"orbital {orb} appears in fragments {seen[orb]} and {k}"
                    )
                seen[orb] = k
        if sorted(seen) != list(range(len(seen))):
            missing = sorted(set(range(max(seen) + 1)) - set(seen))
            raise ValueError(f"fragment orbitals must cover 0..n_orb-1; missing {missing}")

    @property
    def n_fragments(self) -> int:
        return len(self.fragments)

    @property
    def n_orb(self) -> int:
        return sum(f.n_orb for f in self.fragments)

    @property
    def n_alpha(self) -> int:
        return sum(f.n_alpha for f in self.fragments)

    @property
    def n_beta(self) -> int:
        return sum(f.n_beta for f in self.fragments)

    @property
    def n_electrons(self) -> int:
        return self.n_alpha + self.n_beta

    @property
    def sector(self) -> Sector:
        return Sector(self.n_orb, self.n_alpha, self.n_beta)

    def fragment_of_orbital(self, orbital: int) -> int:
        for k, frag in enumerate(self.fragments):
            if orbital in frag.orbitals:
                return k
        raise ValueError(f"orbital {orbital} not in layout")

    @classmethod
    def from_json(cls, data: list[dict]) -> "FragmentLayout":
        return cls(
            tuple(
                Fragment(tuple(f["orbitals"]), int(f["n_alpha"]), int(f["n_beta"]))
                for f in data
            )
        )

    @classmethod
    def from_counts(
        cls,
        sizes: "list[int]",
        electrons: "list[tuple[int, int]]",
    ) -> "FragmentLayout":
        """Consecutive orbital blocks: fragment k gets the next sizes[k]
        orbitals and (n_alpha, n_beta) = electrons[k]."""
        if len(sizes) != len(electrons):
            raise ValueError("sizes and electrons must have equal length")
        fragments = []
        start = 0
        for size, (n_alpha, n_beta) in zip(sizes, electrons):
            fragments.append(
                Fragment(tuple(range(start, start + size)), int(n_alpha), int(n_beta))
            )
            start += size
        return cls(tuple(fragments))

    def to_json(self) -> list[dict]:
        return [
            {"orbitals": list(f.orbitals), "n_alpha": f.n_alpha, "n_beta": f.n_beta}
            for f in self.fragments
        ]


# ---------------------------------------------------------------------------
# FCIDUMP reader / writer

_HEADER_INT = {
    "NORB": re.compile(r"NORB\s*=\s*(-?\d+)", re.I),
    "NELEC": re.compile(r"NELEC\s*=\s*(-?\d+)", re.I),
    "MS2": re.compile(r"MS2\s*=\s*(-?\d+)", re.I),
}


def _canonical_two_body(i: int, j: int, k: int, l: int) -> tuple[int, int, int, int]:
    """Canonical representative of the 8-fold symmetry orbit (0-based)."""
    ij = (max(i, j), min(i, j))
    kl = (max(k, l), min(k, l))
    if ij < kl:
        ij, kl = kl, ij
    return (*ij, *kl)


def read_fcidump(path: str | Path) -> IntegralSet:
    """Parse an FCIDUMP file into an IntegralSet.

    Tolerates case/whitespace/line-ending variants, Fortran ``D`` exponents,
    multi-line headers ending in ``&END`` or ``/``, and either
    symmetry-reduced or fully expanded two-body records.  Conflicting
    duplicates (difference > 1e-10) raise FcidumpParseError with the line
    number.
    """
    path = Path(path)
    text = path.read_text()
    lines = text.splitlines()

    # --- header ---
    header_lines: list[str] = []
    body_start = None
    in_header = False
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not in_header:
            if not stripped:
                continue
            if not stripped.upper().startswith("&FCI"):
                raise FcidumpParseError("expected '&FCI' namelist header", ln)
            in_header = True
        header_lines.append(stripped)
        if "&END" in stripped.upper() or stripped.endswith("/") or stripped == "/":
            body_start = ln
            break
    if body_start is None:
        raise FcidumpParseError("header never terminated with '&END' or '/'", len(lines))
    header = " ".join(header_lines)

    fields: dict[str, int | None] = {}
    for name, rx in _HEADER_INT.items():
        m = rx.search(header)
        fields[name] = int(m.group(1)) if m else None
    if fields["NORB"] is None:
        raise FcidumpParseError("header missing NORB", body_start)
    n_orb = fields["NORB"]
    if n_orb <= 0:
        raise FcidumpParseError(f"invalid NORB={n_orb}", body_start)

    e_core = 0.0
    e_core_line: int | None = None
    h_entries: dict[tuple[int, int], tuple[float, int]] = {}
    g_entries: dict[tuple[int, int, int, int], tuple[float, int]] = {}

    for ln, raw in enumerate(lines[body_start:], start=body_start + 1):
        stripped = raw.strip()
        if not stripped:
            continue
        tokens = stripped.split()
        if len(tokens) != 5:
            raise FcidumpParseError(
                f"expected 'value i j k l' (5 fields), got {len(tokens)}", ln
            )
        try:
            value = float(tokens[0].upper().replace("D", "E"))
        except ValueError:
            raise FcidumpParseError(f"bad value field {tokens[0]!r}", ln) from None
        try:
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError:
            raise FcidumpParseError(f"bad index field in {tokens[1:]!r}", ln) from None
        for idx in (i, j, k, l):
            if idx < 0 or idx > n_orb:
                raise FcidumpParseError(f"orbital index {idx} outside 1..{n_orb}", ln)

        n_zero = sum(1 for t in (i, j, k, l) if t == 0)
        if n_zero == 4:
            if e_core_line is not None and abs(value - e_core) > 1e-10:
                raise FcidumpParseError(
                    f"conflicting core energy {value!r} (earlier line {e_core_line})", ln
                )
            e_core = value
            e_core_line = ln
        elif k == 0 and l == 0 and i > 0 and j > 0:
            key = (max(i, j) - 1, min(i, j) - 1)
            if key in h_entries and abs(h_entries[key][0] - value) > 1e-10:
                raise FcidumpParseError(
                    f"conflicting one-body entry {i} {j} "
                    f"(earlier line {h_entries[key][1]})",
                    ln,
                )
            h_entries[key] = (value, ln)
        elif 0 not in (i, j, k, l):
            key = _canonical_two_body(i - 1, j - 1, k - 1, l - 1)
            if key in g_entries and abs(g_entries[key][0] - value) > 1e-10:
                raise FcidumpParseError(
                    f"conflicting two-body entry {i} {j} {k} {l} "
                    f"(earlier line {g_entries[key][1]})",
                    ln,
                )
            g_entries[key] = (value, ln)
        else:
            raise FcidumpParseError(
                f"unsupported index pattern {i} {j} {k} {l} (partial zeros)", ln
            )

    h = np.zeros((n_orb, n_orb))
    for (a, b), (value, _) in h_entries.items():
        h[a, b] = h[b, a] = value
    g = np.zeros((n_orb,) * 4)
    for (a, b, c, d), (value, _) in g_entries.items():
        for p, q in ((a, b), (b, a)):
            for r, s in ((c, d), (d, c)):
                g[p, q, r, s] = value
                g[r, s, p, q] = value

    out = IntegralSet(
        n_orb=n_orb,
        e_core=e_core,
        h=h,
        g=g,
        n_electrons=fields["NELEC"],
        ms2=fields["MS2"],
        source=str(path),
    )
    out.validate(tol=1e-12)
    return out


def write_fcidump(
    ints: IntegralSet,
    path: str | Path,
    n_electrons: int | None = None,
    ms2: int | None = None,
    threshold: float = 1e-14,
) -> None:
    """Write an IntegralSet in canonical FCIDUMP form.

    Entries appear as two-body (i>=j, k>=l, (ij)>=(kl), ascending), then
    one-body (i>=j ascending), then the core energy; values use 16-digit
    scientific notation, giving deterministic bytes for identical input.
    """
    n = ints.n_orb
    nelec = n_electrons if n_electrons is not None else (ints.n_electrons or 0)
    spin = ms2 if ms2 is not None else (ints.ms2 or 0)
    lines = [
        f"&FCI NORB={n},NELEC={nelec},MS2={spin},",
        "  ORBSYM=" + ",".join(["1"] * n) + ",",
        "  ISYM=1,",
        "&END",
    ]

    def fmt(value: float, i: int, j: int, k: int, l: int) -> str:
        return f" {value: .16E} {i:4d} {j:4d} {k:4d} {l:4d}"

    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(i + 1):
                for l in range(k + 1):
                    if k * (k + 1) // 2 + l > ij:
                        continue
                    value = float(ints.g[i, j, k, l])
                    if abs(value) > threshold:
                        lines.append(fmt(value, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            value = float(ints.h[i, j])
            if abs(value) > threshold:
                lines.append(fmt(value, i + 1, j + 1, 0, 0))
    lines.append(fmt(float(ints.e_core), 0, 0, 0, 0))
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Job configuration


@dataclass
class OptimizerSettings:
    gradient_tolerance: float = 1e-9
    energy_tolerance: float = 1e-12
    max_iterations: int = 500
    warm_start: bool = True


@dataclass
class TrotterSettings:
    mode: str = "trotter1"
    kernel: str = "auto"


@dataclass
class ReferenceSettings:
    method: str = "casci"
    dense_threshold: int = 20000


@dataclass
class JobConfig:
    """Validated job description: system source, fragment layout, run settings."""

    geometry: Geometry | None
    fcidump_path: Path | None
    layout: FragmentLayout
    epsilon_ladder: tuple[float, ...]
    optimizer: OptimizerSettings
    trotter: TrotterSettings
    reference: ReferenceSettings
    report_path: str | None = None
    csv_path: str | None = None
    job_dir: Path = field(default_factory=Path)

    @property
    def source_kind(self) -> str:
        return "fcidump" if self.fcidump_path is not None else "geometry"


_DEFAULT_LADDER = (0.1, 0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001, 0.0)


def _schema() -> dict:
    with resources.files("lasuscc.data").joinpath("job.schema.json").open() as fh:
        return json.load(fh)


def read_job(path: str | Path) -> JobConfig:
    """Load and validate a JSON job file.

    Schema violations and cross-field inconsistencies raise
    JobValidationError carrying a JSON pointer path to the offending field.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise JobValidationError(f"invalid JSON: {exc}") from exc

    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: e.json_path)
    if errors:
        first = errors[0]
        raise JobValidationError(first.message, first.json_path)

    system = data["system"]
    geometry: Geometry | None = None
    fcidump_path: Path | None = None
    if "geometry" in system:
        spec = system["geometry"]
        atoms = tuple((sym, tuple(xyz)) for sym, xyz in spec["atoms"])
        try:
            geometry = Geometry(
                atoms,
                charge=int(spec.get("charge", 0)),
                spin_multiplicity=int(spec.get("spin_multiplicity", 1)),
            )
        except ValueError as exc:
            raise JobValidationError(str(exc), "$.system.geometry") from exc
    elif "h2_clusters" in system:
        spec = system["h2_clusters"]
        try:
            geometry = h2_clusters(
                int(spec["n_units"]),
                float(spec["separation"]),
                float(spec.get("bond_length", 1.0)),
                charge=int(spec.get("charge", 0)),
                spin_multiplicity=int(spec.get("spin_multiplicity", 1)),
            )
        except ValueError as exc:
            raise JobValidationError(str(exc), "$.system.h2_clusters") from exc
    else:
        fcidump_path = Path(system["fcidump"])
        if not fcidump_path.is_absolute():
            fcidump_path = path.parent / fcidump_path

    try:
        layout = FragmentLayout.from_json(data["fragments"])
    except ValueError as exc:
        raise JobValidationError(str(exc), "$.fragments") from exc

    ladder = tuple(float(x) for x in data.get("epsilon_ladder", _DEFAULT_LADDER))
    for a, b in zip(ladder, ladder[1:]):
        if b >= a:
            raise JobValidationError(
                f"epsilon ladder must be strictly decreasing, got {a} before {b}",
                "$.epsilon_ladder",
            )
    if ladder[-1] < 0:
        raise JobValidationError("epsilon ladder must end >= 0", "$.epsilon_ladder")

    opt = OptimizerSettings(**data.get("optimizer", {}))
    trotter = TrotterSettings(**data.get("trotter", {}))
    reference = ReferenceSettings(**data.get("reference", {}))
    output = data.get("output", {})

    # Cross-field checks against the system source.
    if geometry is not None:
        if layout.n_electrons != geometry.n_electrons:
            raise JobValidationError(
                f"fragment electrons {layout.n_electrons} != system electrons "
                f"{geometry.n_electrons}",
                "$.fragments",
            )
        if layout.n_orb != len(geometry.atoms):
            raise JobValidationError(
                f"fragment orbitals cover {layout.n_orb} orbitals but the native "
                f"hydrogen basis has {len(geometry.atoms)}",
                "$.fragments",
            )
        if layout.n_alpha - layout.n_beta != geometry.n_alpha - geometry.n_beta:
            raise JobValidationError(
                f"fragment spin projection {layout.n_alpha - layout.n_beta} != "
                f"geometry spin projection {geometry.n_alpha - geometry.n_beta}",
                "$.fragments",
            )
    elif fcidump_path is not None and fcidump_path.exists():
        header = read_fcidump(fcidump_path)
        if header.n_electrons is not None and layout.n_electrons != header.n_electrons:
            raise JobValidationError(
                f"fragment electrons {layout.n_electrons} != NELEC {header.n_electrons}",
                "$.fragments",
            )
        if layout.n_orb != header.n_orb:
            raise JobValidationError(
                f"fragment orbitals cover {layout.n_orb} orbitals but NORB is "
                f"{header.n_orb}",
                "$.fragments",
            )

    return JobConfig(
        geometry=geometry,
        fcidump_path=fcidump_path,
        layout=layout,
        epsilon_ladder=ladder,
        optimizer=opt,
        trotter=trotter,
        reference=reference,
        report_path=output.get("report"),
        csv_path=output.get("csv"),
        job_dir=path.parent,
    )
