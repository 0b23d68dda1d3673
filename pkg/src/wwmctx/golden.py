"""Published reference values used as golden data.

Closed forms are stored as expression strings over ``sqrt`` and evaluated in
a fixed namespace, so the report can print the string next to the number.
Grids use the ``[x_p][x_q]`` orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_NS = {"__builtins__": {}, "sqrt": math.sqrt}


@dataclass(frozen=True)
class ClosedForm:
    text: str

    @property
    def value(self) -> float:
        return float(eval(self.text, _NS))  # noqa: S307 - constant strings only


# Phase exponents (a1, a2, a3): state = (w**a1 phi1 + w**a2 phi2 + w**a3 phi3)/sqrt(3)
# with w = exp(2 pi i/3); None marks the three basis states.
QUTRIT_STATE_ROWS: list[tuple[str, tuple[int, int, int] | None]] = [
    ("phi1", None),
    ("phi2", None),
    ("phi3", None),
    ("sup(0,0,0)", (0, 0, 0)),
    ("sup(0,1,2)", (0, 1, 2)),
    ("sup(0,2,1)", (0, 2, 1)),
    ("sup(0,2,2)", (0, 2, 2)),
    ("sup(2,2,0)", (2, 2, 0)),
    ("sup(2,0,2)", (2, 0, 2)),
    ("sup(1,1,0)", (1, 1, 0)),
    ("sup(0,1,1)", (0, 1, 1)),
    ("sup(1,0,1)", (1, 0, 1)),
]

_SUP_EXACT = "5-5*sqrt(5)/3"

# (exact, h0, correction) for the pair-product witness of the pentagon
PAIR_WITNESS_TABLE: dict[str, tuple[ClosedForm, ClosedForm, ClosedForm]] = {
    label: tuple(ClosedForm(t) for t in row)
    for label, row in [
        ("phi1", ("5-2*sqrt(5)", "(25-9*sqrt(5))/12", "5*(7-3*sqrt(5))/12")),
        ("phi2", ("5-2*sqrt(5)", "(25-9*sqrt(5))/12", "5*(7-3*sqrt(5))/12")),
        ("phi3", ("5-sqrt(5)", "(5-sqrt(5))/6", "5*(5-sqrt(5))/6")),
        ("sup(0,0,0)", (_SUP_EXACT, "43/18-5*sqrt(5)/6", "47/18-5*sqrt(5)/6")),
        ("sup(0,1,2)", (_SUP_EXACT, "(47-15*sqrt(5))/36", "133/36-5*sqrt(5)/4")),
        ("sup(0,2,1)", (_SUP_EXACT, "(47-15*sqrt(5))/36", "133/36-5*sqrt(5)/4")),
        ("sup(0,2,2)", (_SUP_EXACT, "(65-21*sqrt(5))/36", "(115-39*sqrt(5))/36")),
        ("sup(2,2,0)", (_SUP_EXACT, "(25-9*sqrt(5))/18", "65/18-7*sqrt(5)/6")),
        ("sup(2,0,2)", (_SUP_EXACT, "(65-21*sqrt(5))/36", "(115-39*sqrt(5))/36")),
        ("sup(1,1,0)", (_SUP_EXACT, "(25-9*sqrt(5))/18", "65/18-7*sqrt(5)/6")),
        ("sup(0,1,1)", (_SUP_EXACT, "(65-21*sqrt(5))/36", "(115-39*sqrt(5))/36")),
        ("sup(1,0,1)", (_SUP_EXACT, "(65-21*sqrt(5))/36", "(115-39*sqrt(5))/36")),
    ]
}


def _support_grid(points) -> np.ndarray:
    g = np.zeros((3, 3))
    for p, q in points:
        g[p, q] = 1.0 / 3.0
    return g


# Support points (x_p, x_q) of the published state grids, value 1/3 each.
PUBLISHED_STATE_GRIDS: dict[str, np.ndarray] = {
    "phi1": _support_grid([(0, 0), (1, 0), (2, 0)]),
    "phi2": _support_grid([(0, 1), (1, 1), (2, 1)]),
    "phi3": _support_grid([(0, 2), (1, 2), (2, 2)]),
    "sup(0,0,0)": _support_grid([(2, 0), (2, 1), (2, 2)]),
    "sup(0,1,2)": _support_grid([(1, 0), (1, 1), (1, 2)]),
    "sup(0,2,1)": _support_grid([(2, 0), (2, 1), (2, 2)]),
    "sup(0,2,2)": _support_grid([(0, 0), (1, 1), (2, 2)]),
    "sup(2,2,0)": _support_grid([(0, 2), (1, 0), (2, 1)]),
    "sup(2,0,2)": _support_grid([(0, 1), (1, 2), (2, 0)]),
    "sup(1,1,0)": _support_grid([(0, 2), (1, 1), (2, 0)]),
    "sup(0,1,1)": _support_grid([(0, 0), (1, 2), (2, 1)]),
    "sup(1,0,1)": _support_grid([(0, 1), (1, 0), (2, 2)]),
}


def _rows(r0, r1):
    return [[ClosedForm(t) for t in r0], [ClosedForm(t) for t in r1], [ClosedForm(t) for t in r1]]


# State-normalized symbols of the five pentagon projectors (rows x_p = 1, 2 coincide).
PUBLISHED_PROJECTOR_GRIDS: list[list[list[ClosedForm]]] = [
    _rows(
        ["(sqrt(5)+4*sqrt(5*(3*sqrt(5)-5))+5)/60",
         "(-5*sqrt(5)-4*sqrt(5*(sqrt(5)+1))+15)/60",
         "(sqrt(5)-5*sqrt(2/(sqrt(5)+5)))/15"],
        ["(sqrt(5)-2*sqrt(5*(3*sqrt(5)-5))+5)/60",
         "(-5*sqrt(5)+2*sqrt(5*(sqrt(5)+1))+15)/60",
         "(sqrt(10-2*sqrt(5))+4)/(12*sqrt(5))"],
    ),
    _rows(
        ["(5-sqrt(5))/15", "2/3*sqrt(1/sqrt(5)-1/5)", "1/(3*sqrt(5))"],
        ["(5-sqrt(5))/15", "-1/3*sqrt(1/sqrt(5)-1/5)", "1/(3*sqrt(5))"],
    ),
    _rows(
        ["(sqrt(5)-4*sqrt(5*(3*sqrt(5)-5))+5)/60",
         "(-5*sqrt(5)-4*sqrt(5*(sqrt(5)+1))+15)/60",
         "(sqrt(10-2*sqrt(5))+2)/(6*sqrt(5))"],
        ["(sqrt(5)+2*sqrt(5*(3*sqrt(5)-5))+5)/60",
         "(-5*sqrt(5)+2*sqrt(5*(sqrt(5)+1))+15)/60",
         "1/(3*sqrt(5))-1/(3*sqrt(2*(sqrt(5)+5)))"],
    ),
    _rows(
        ["(2*5**0.75*sqrt(2)-2*sqrt(5)+5)/30",
         "(2*sqrt(10*(sqrt(5)-2))+5)/30",
         "(sqrt(1-2/sqrt(5))+1/sqrt(5))/3"],
        ["(-5**0.75*sqrt(2)-2*sqrt(5)+5)/30",
         "(5-sqrt(10*(sqrt(5)-2)))/30",
         "-(sqrt(5-2*sqrt(5))-2)/(6*sqrt(5))"],
    ),
    _rows(
        ["(-2*5**0.75*sqrt(2)-2*sqrt(5)+5)/30",
         "(2*sqrt(10*(sqrt(5)-2))+5)/30",
         "-(sqrt(5-2*sqrt(5))-1)/(3*sqrt(5))"],
        ["(5**0.75*sqrt(2)-2*sqrt(5)+5)/30",
         "(5-sqrt(10*(sqrt(5)-2)))/30",
         "(sqrt(5-2*sqrt(5))+2)/(6*sqrt(5))"],
    ),
]


def projector_grid_values() -> np.ndarray:
    """The five published projector grids as a ``(5, 3, 3)`` float array."""
    return np.array([[[c.value for c in row] for row in grid] for grid in PUBLISHED_PROJECTOR_GRIDS])


# Spectral and bound facts quoted with the constructions.
KCSB_SIGMA_EIGENVALUES = (ClosedForm("sqrt(5)"), ClosedForm("(5-sqrt(5))/2"), ClosedForm("(5-sqrt(5))/2"))
KCSB_PAIR_QUANTUM_BOUND = ClosedForm("5-sqrt(5)")
KCSB_CLASSICAL_BOUND = 2.0
YU_OH_VALUES = {
    "dichotomic_quantum": ClosedForm("25/3"),
    "dichotomic_classical": ClosedForm("8"),
    "h_sum_quantum": ClosedForm("4/3"),
    "h_sum_classical": ClosedForm("1"),
    "h_square_quantum": ClosedForm("16/9"),
    "h_square_h0": ClosedForm("16/27"),
    "h_square_correction": ClosedForm("32/27"),
}
