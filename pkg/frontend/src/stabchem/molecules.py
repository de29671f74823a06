"""Molecule specifications, geometry parametrizations, and the .mol format.

A specification bundles a base geometry (angstrom) with the basis name,
charge, spin multiplicity, and an optional one-dimensional scan.  Scans are
named parametrizations: a registry entry maps a single scalar to a full
geometry, so every point of a dissociation curve is rebuilt from the same
rule rather than edited by hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .basis import ATOMIC_NUMBER
from .errors import ParseError

BOHR_PER_ANGSTROM = 1.8897259886

Geometry = tuple[tuple[str, tuple[float, float, float]], ...]

# Pinned structural constants for the built-in parametrizations.
WATER_ANGLE_DEG = 105.0
WATER_OH_EQUILIBRIUM = 0.9572
BENZENE_CC_EQUILIBRIUM = 1.39
BENZENE_CH_EQUILIBRIUM = 1.09


def _h2_geometry(distance: float) -> Geometry:
    return (
        ("H", (0.0, 0.0, 0.0)),
        ("H", (0.0, 0.0, distance)),
    )


def _water_geometry(oh_distance: float) -> Geometry:
    # Both O-H bonds stretched together; the H-O-H angle stays fixed.
    half = math.radians(WATER_ANGLE_DEG) / 2.0
    x = oh_distance * math.sin(half)
    z = oh_distance * math.cos(half)
    return (
        ("O", (0.0, 0.0, 0.0)),
        ("H", (x, 0.0, z)),
        ("H", (-x, 0.0, z)),
    )


def _benzene_geometry(cc_distance: float, ch_distance: float) -> Geometry:
    # Regular hexagon in the xy plane; each H sits radially outside its C.
    # Hexagon side length equals the circumradius.
    atoms: list[tuple[str, tuple[float, float, float]]] = []
    r_c = cc_distance
    r_h = cc_distance + ch_distance
    for k in range(6):
        angle = math.pi * k / 3.0
        c, s = math.cos(angle), math.sin(angle)
        atoms.append(("C", (r_c * c, r_c * s, 0.0)))
        atoms.append(("H", (r_h * c, r_h * s, 0.0)))
    return tuple(atoms)


def _benzene_uniform(cc_distance: float) -> Geometry:
    # All bonds scaled by the same factor relative to equilibrium.
    scale = cc_distance / BENZENE_CC_EQUILIBRIUM
    return _benzene_geometry(cc_distance, BENZENE_CH_EQUILIBRIUM * scale)


def _benzene_cc_only(cc_distance: float) -> Geometry:
    return _benzene_geometry(cc_distance, BENZENE_CH_EQUILIBRIUM)


# name -> (builder, description).  Each builder maps one scalar (angstrom)
# to a complete geometry.
PARAMETRIZATIONS = {
    "hh_distance": (_h2_geometry, "H-H bond length"),
    "oh_distance": (_water_geometry, "symmetric O-H stretch at fixed angle"),
    "cc_uniform": (_benzene_uniform, "hexagon C-C with C-H scaled in ratio"),
    "cc_only": (_benzene_cc_only, "hexagon C-C with C-H fixed"),
}


@dataclass(frozen=True)
class Scan:
    """A named parametrization plus the grid of values to visit."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in PARAMETRIZATIONS:
            known = ", ".join(sorted(PARAMETRIZATIONS))
            raise ValueError(f"unknown scan parameter {self.name!r} (known: {known})")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("scan needs at least one value")
        if any(not math.isfinite(v) or v <= 0.0 for v in vals):
            raise ValueError("scan values must be finite and positive")
        increasing = all(a < b for a, b in zip(vals, vals[1:]))
        decreasing = all(a > b for a, b in zip(vals, vals[1:]))
        if len(vals) > 1 and not (increasing or decreasing):
            raise ValueError("scan values must be strictly monotone")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class MoleculeSpec:
    """What to compute: geometry, basis, charge, multiplicity, optional scan.

    Geometry coordinates are in angstrom.  The multiplicity selects the spin
    sector for correlated references; the mean-field stage is closed-shell
    and only runs for singlets with an even electron count.
    """

    name: str
    geometry: Geometry
    basis: str = "STO-3G"
    charge: int = 0
    multiplicity: int = 1
    scan: Scan | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.geometry:
            raise ValueError("geometry must be non-empty")
        for element, xyz in self.geometry:
            if element not in ATOMIC_NUMBER:
                raise ValueError(f"no basis tabulated for element {element!r}")
            if len(xyz) != 3 or any(not math.isfinite(c) for c in xyz):
                raise ValueError(f"bad coordinates for {element}: {xyz!r}")
        if self.basis != "STO-3G":
            raise ValueError(f"only the STO-3G basis is supported, got {self.basis!r}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        if self.n_electrons < 1:
            raise ValueError("molecule has no electrons")
        # (n_e + mult - 1) must split into integer alpha/beta counts.
        if (self.n_electrons + self.multiplicity - 1) % 2 != 0:
            raise ValueError(
                f"multiplicity {self.multiplicity} impossible for "
                f"{self.n_electrons} electrons"
            )

    @property
    def n_electrons(self) -> int:
        return sum(ATOMIC_NUMBER[el] for el, _ in self.geometry) - self.charge

    @property
    def elements(self) -> tuple[str, ...]:
        return tuple(el for el, _ in self.geometry)

    def formula(self) -> str:
        counts: dict[str, int] = {}
        for el in self.elements:
            counts[el] = counts.get(el, 0) + 1
        # Hill order: C first, H second, rest alphabetical.
        keys = sorted(counts, key=lambda e: (e != "C", e != "H", e))
        return "".join(f"{el}{counts[el] if counts[el] > 1 else ''}" for el in keys)

    def geometry_at(self, value: float | None) -> Geometry:
        """Geometry for one scan value (or the base geometry for None)."""
        if value is None:
            return self.geometry
        if self.scan is None:
            raise ValueError("spec has no scan; cannot rebuild geometry from a value")
        builder, _ = PARAMETRIZATIONS[self.scan.name]
        return builder(float(value))


def coords_bohr(geometry: Geometry):
    import numpy as np

    return np.array([xyz for _, xyz in geometry], dtype=np.float64) * BOHR_PER_ANGSTROM


# -- built-in systems --------------------------------------------------------
#
# Each builtin carries a default scan grid, so a bare name on the command
# line already describes a full dissociation curve.

H2_DEFAULT_GRID = (
    0.3, 0.4, 0.5, 0.6, 0.7, 0.74, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5,
    1.6, 1.7, 1.8, 1.9, 2.0, 2.1, 2.2, 2.3, 2.4, 2.5, 2.6, 2.7, 2.8, 2.9, 3.0,
)
WATER_DEFAULT_GRID = (
    0.7, 0.8, 0.9, 0.9572, 1.0, 1.1, 1.2, 1.4, 1.6, 1.8,
    2.0, 2.4, 2.8, 3.2, 3.6, 4.0,
)
BENZENE_DEFAULT_GRID = (1.39, 2.0, 3.0, 4.0, 5.0)


def h2_spec(
    distance: float = 0.74,
    scan_values: tuple[float, ...] = H2_DEFAULT_GRID,
) -> MoleculeSpec:
    scan = Scan("hh_distance", scan_values) if scan_values else None
    return MoleculeSpec("h2", _h2_geometry(distance), scan=scan)


def water_spec(
    oh_distance: float = WATER_OH_EQUILIBRIUM,
    scan_values: tuple[float, ...] = WATER_DEFAULT_GRID,
) -> MoleculeSpec:
    scan = Scan("oh_distance", scan_values) if scan_values else None
    return MoleculeSpec(
        "h2o",
        _water_geometry(oh_distance),
        scan=scan,
        metadata={
            "oh_equilibrium": repr(WATER_OH_EQUILIBRIUM),
            "hoh_angle_deg": repr(WATER_ANGLE_DEG),
        },
    )


def benzene_spec(
    cc_distance: float = BENZENE_CC_EQUILIBRIUM,
    scan_values: tuple[float, ...] = BENZENE_DEFAULT_GRID,
    uniform: bool = True,
) -> MoleculeSpec:
    name = "cc_uniform" if uniform else "cc_only"
    builder, _ = PARAMETRIZATIONS[name]
    scan = Scan(name, scan_values) if scan_values else None
    return MoleculeSpec("benzene", builder(cc_distance), scan=scan)


BUILTIN_SPECS = {
    "h2": h2_spec,
    "h2o": water_spec,
    "benzene": benzene_spec,
}


# -- .mol file format --------------------------------------------------------
#
# Structured text, one item per line.  '#' starts a comment.  Directives:
#   %name <identifier>
#   %basis <name>
#   %charge <int>
#   %multiplicity <int>
#   %scan <parameter> <v1> <v2> ...
#   %meta <key> <value...>
# Atom lines: "atom <element> <x> <y> <z>" with coordinates in angstrom.


def parse_molecule(text: str, source: str = "<string>") -> MoleculeSpec:
    name = "molecule"
    basis = "STO-3G"
    charge = 0
    multiplicity = 1
    scan: Scan | None = None
    metadata: dict = {}
    atoms: list[tuple[str, tuple[float, float, float]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        head = parts[0]
        try:
            if head == "%name":
                if len(parts) != 2:
                    raise ValueError("expected one token")
                name = parts[1]
            elif head == "%basis":
                if len(parts) != 2:
                    raise ValueError("expected one token")
                basis = parts[1]
            elif head == "%charge":
                charge = int(parts[1])
            elif head == "%multiplicity":
                multiplicity = int(parts[1])
            elif head == "%scan":
                if len(parts) < 3:
                    raise ValueError("expected '%scan name v1 [v2 ...]'")
                scan = Scan(parts[1], tuple(float(v) for v in parts[2:]))
            elif head == "%meta":
                kv = body.split(None, 2)
                if len(kv) < 3:
                    raise ValueError("expected '%meta key value'")
                metadata[kv[1]] = kv[2]
            elif head == "atom":
                if len(parts) != 5:
                    raise ValueError("expected 'atom El x y z'")
                atoms.append((parts[1], (float(parts[2]), float(parts[3]), float(parts[4]))))
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise ParseError(f"{source}:{lineno}: {exc} in line {raw.strip()!r}") from exc

    try:
        return MoleculeSpec(
            name=name,
            geometry=tuple(atoms),
            basis=basis,
            charge=charge,
            multiplicity=multiplicity,
            scan=scan,
            metadata=metadata,
        )
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from exc


def load_molecule(path) -> MoleculeSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_molecule(text, source=str(path))


def serialize_molecule(spec: MoleculeSpec) -> str:
    lines = [f"%name {spec.name}", f"%basis {spec.basis}"]
    if spec.charge:
        lines.append(f"%charge {spec.charge}")
    if spec.multiplicity != 1:
        lines.append(f"%multiplicity {spec.multiplicity}")
    if spec.scan is not None:
        values = " ".join(repr(v) for v in spec.scan.values)
        lines.append(f"%scan {spec.scan.name} {values}")
    for key in sorted(spec.metadata):
        lines.append(f"%meta {key} {spec.metadata[key]}")
    for element, (x, y, z) in spec.geometry:
        lines.append(f"atom {element} {x!r} {y!r} {z!r}")
    return "\n".join(lines) + "\n"


def save_molecule(path, spec: MoleculeSpec) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_molecule(spec))
