"""STO-3G basis set: embedded parameters and contracted Gaussian construction.

Each atomic orbital is a fixed contraction of three primitive Cartesian
Gaussians.  Only the elements appearing in the bundled studies (H, C, O)
are tabulated; asking for anything else raises ParseError.  Exponents are
the standard published values with the atomic scale factors already
folded in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError

ATOMIC_NUMBER = {"H": 1, "C": 6, "O": 8}

# contraction weights shared by every element (the defining STO-3G fits)
_D_1S = (0.1543289673, 0.5353281423, 0.4446345422)
_D_2S = (-0.09996722919, 0.3995128261, 0.7001154689)
_D_2P = (0.1559162750, 0.6076837186, 0.3919573931)

# per-element primitive exponents, one tuple per shell
_EXPONENTS = {
    "H": {"1s": (3.425250914, 0.6239137298, 0.1688554040)},
    "C": {
        "1s": (71.61683735, 13.04509632, 3.530512160),
        "2sp": (2.941249355, 0.6834830964, 0.2222899159),
    },
    "O": {
        "1s": (130.7093214, 23.80886605, 6.443608313),
        "2sp": (5.033151319, 1.169596125, 0.3803889600),
    },
}

_P_POWERS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
_P_NAMES = ("2px", "2py", "2pz")


@dataclass(frozen=True)
class BasisFunction:
    """One contracted Cartesian Gaussian.

    coefficients include both the primitive normalization factors and the
    overall contraction renormalization, so raw primitives can be summed
    directly inside the integral routines.
    """

    center: np.ndarray
    powers: tuple[int, int, int]
    exponents: np.ndarray
    coefficients: np.ndarray
    atom_index: int
    name: str = field(default="", compare=False)

    @property
    def total_angular_momentum(self) -> int:
        return sum(self.powers)


def _double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def _primitive_norm(alpha: float, powers: tuple[int, int, int]) -> float:
    l, m, n = powers
    total = l + m + n
    denom = (
        _double_factorial(2 * l - 1)
        * _double_factorial(2 * m - 1)
        * _double_factorial(2 * n - 1)
    )
    return (2.0 * alpha / math.pi) ** 0.75 * math.sqrt(
        (4.0 * alpha) ** total / denom
    )


def _contracted(
    center: np.ndarray,
    powers: tuple[int, int, int],
    exps: tuple[float, ...],
    weights: tuple[float, ...],
    atom_index: int,
    name: str,
) -> BasisFunction:
    alphas = np.asarray(exps, dtype=np.float64)
    coeffs = np.array(
        [w * _primitive_norm(a, powers) for w, a in zip(weights, alphas)]
    )
    # renormalize the contraction; the published weights leave the
    # self-overlap a fraction of a percent off unity
    l, m, n = powers
    total = l + m + n
    fac = (
        _double_factorial(2 * l - 1)
        * _double_factorial(2 * m - 1)
        * _double_factorial(2 * n - 1)
    )
    pair_sum = 0.0
    for ci, ai in zip(coeffs, alphas):
        for cj, aj in zip(coeffs, alphas):
            p = ai + aj
            pair_sum += ci * cj * (math.pi / p) ** 1.5 * fac / (2.0 * p) ** total
    coeffs = coeffs / math.sqrt(pair_sum)
    return BasisFunction(
        center=center,
        powers=powers,
        exponents=alphas,
        coefficients=coeffs,
        atom_index=atom_index,
        name=name,
    )


def atom_basis(
    element: str, center: np.ndarray, atom_index: int
) -> list[BasisFunction]:
    """All contracted functions of one atom, centered at `center` (bohr)."""
    try:
        shells = _EXPONENTS[element]
    except KeyError:
        raise ParseError(
            f"element {element!r} is not tabulated (have H, C, O)"
        ) from None
    center = np.asarray(center, dtype=np.float64)
    out = [_contracted(center, (0, 0, 0), shells["1s"], _D_1S, atom_index, "1s")]
    if "2sp" in shells:
        sp = shells["2sp"]
        out.append(_contracted(center, (0, 0, 0), sp, _D_2S, atom_index, "2s"))
        for powers, name in zip(_P_POWERS, _P_NAMES):
            out.append(_contracted(center, powers, sp, _D_2P, atom_index, name))
    return out


def build_basis(
    elements: list[str], coords_bohr: np.ndarray
) -> list[BasisFunction]:
    functions: list[BasisFunction] = []
    for idx, (el, xyz) in enumerate(zip(elements, coords_bohr)):
        functions.extend(atom_basis(el, xyz, idx))
    return functions


def n_electrons(elements: list[str], charge: int) -> int:
    return sum(ATOMIC_NUMBER[el] for el in elements) - charge
