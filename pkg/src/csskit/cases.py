"""Registry of the seven space-time families and their 22 radiation cases.

Each family is labeled "N.N0" where N counts commuting Killing vectors in
the separable structure and N0 of them are null. Within a family, cases
are numbered by which components of the separated wave covector vanish
identically (case 1 is the generic one). The (type, case) label is the
stable cross-reference key used in reports and the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = ["CssType", "FnSlot", "CaseInfo", "REGISTRY", "case_info", "all_cases"]


class CssType(Enum):
    T30 = "3.0"
    T31 = "3.1"
    T20 = "2.0"
    T21 = "2.1"
    T10 = "1.0"
    T11 = "1.1"
    T00 = "0.0"

    @property
    def n(self) -> int:
        return int(self.value[0])

    @property
    def n0(self) -> int:
        return int(self.value[2])

    @classmethod
    def from_label(cls, label: str) -> "CssType":
        for t in cls:
            if t.value == label:
                return t
        raise KeyError(f"unknown space-time type {label!r}")


@dataclass(frozen=True)
class FnSlot:
    """A required scalar function of one privileged coordinate."""

    name: str
    axis: int


@dataclass(frozen=True)
class CaseInfo:
    type: CssType
    case: int
    metric_fns: tuple[FnSlot, ...]
    free_fns: tuple[FnSlot, ...]  # user-chosen wave-covector components
    constants: tuple[str, ...]
    invariant_args: tuple[str, str, str]
    radical_slots: tuple[int, ...]  # L components defined by radicals (sign-flippable)
    constraints: tuple[str, ...]  # human-readable identities a valid model satisfies
    split_ok: bool  # split signature (2,2) accepted (no Lorentzian examples exist)
    notes: str = ""

    @property
    def label(self) -> str:
        return f"({self.type.value}) case {self.case}"

    def function_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.metric_fns + self.free_fns)


def _slots(axis_map: dict[str, int]) -> tuple[FnSlot, ...]:
    return tuple(FnSlot(name, axis) for name, axis in axis_map.items())


_F30 = _slots({"a0": 0, "b0": 0, "c0": 0, "d0": 0, "e0": 0, "f0": 0})
_F31 = _slots({"a0": 0, "b0": 0, "c0": 0, "d0": 0, "f0": 0})
_F20 = _slots({"a0": 0, "b0": 0, "c0": 0, "a1": 1, "b1": 1, "c1": 1, "s": 0})
_F21 = _slots({"a0": 0, "b0": 0, "c0": 0, "a1": 1, "b1": 1, "c1": 1, "f1": 1})
_F1X = _slots({"t1": 1, "t2": 2, "t3": 3, "w1": 1, "w2": 2, "w3": 3})
_F00 = _slots({"a0": 0, "a1": 1, "a2": 2, "a3": 3, "b0": 0, "b1": 1, "b2": 2, "b3": 3})

_ABG = ("alpha", "beta", "gamma")

_T00_NOTE = "three components of the wave vector can not be zero"

_CASES = [
    CaseInfo(
        CssType.T30, 1, _F30, (), _ABG, ("X", "Y", "Z"), (0,), (), False
    ),
    CaseInfo(
        CssType.T30, 2, _F30, (), _ABG, ("x0", "Y", "Z"), (),
        ("alpha^2*a0 + 2*alpha*beta*b0 + beta^2*d0 + 2*alpha*gamma*c0"
         " + 2*beta*gamma*e0 + gamma^2*f0 = 0",),
        False,
    ),
    CaseInfo(
        CssType.T30, 3, _F30, (), _ABG, ("x0", "x1", "Z"), (),
        ("alpha^2*a0 + 2*alpha*beta*b0 + beta^2*d0 + 2*alpha*gamma*c0"
         " + 2*beta*gamma*e0 + gamma^2*f0 = 0",
         "alpha*a0 + beta*b0 + gamma*c0 = 0"),
        False,
    ),
    CaseInfo(
        CssType.T31, 1, _F31, (), _ABG, ("X", "Y", "Z"), (), (), False
    ),
    CaseInfo(
        CssType.T31, 2, _F31, (FnSlot("L0", 0),), _ABG, ("x0", "Y", "Z"), (),
        ("alpha + beta*a0 + gamma*b0 = 0",
         "beta^2*c0 + 2*beta*gamma*f0 + gamma^2*d0 = 0"),
        True,
        notes="Lorentzian only when alpha = beta = gamma = 0 (free L0); "
        "constrained branches force det g >= 0",
    ),
    CaseInfo(
        CssType.T31, 3, _F31, (), _ABG, ("x0", "x1", "Z"), (),
        ("alpha + beta*a0 + gamma*b0 = 0",
         "beta^2*c0 + 2*beta*gamma*f0 + gamma^2*d0 = 0"),
        True,
        notes="no Lorentzian examples: the constraints force det g >= 0",
    ),
    CaseInfo(
        CssType.T20, 1, _F20, (), _ABG, ("X", "Y", "Z"), (0, 1), (), False
    ),
    CaseInfo(
        CssType.T20, 2, _F20, (), _ABG, ("x0", "Y", "Z"), (1,),
        ("alpha^2*a0 + 2*alpha*beta*b0 + beta^2*c0 = gamma",),
        False,
    ),
    CaseInfo(
        CssType.T20, 3, _F20, (), _ABG, ("x0", "x1", "Z"), (),
        ("alpha^2*a0 + 2*alpha*beta*b0 + beta^2*c0 = gamma",
         "alpha^2*a1 + 2*alpha*beta*b1 + beta^2*c1 = -gamma"),
        False,
    ),
    CaseInfo(
        CssType.T21, 1, _F21, (), _ABG, ("X", "Y", "Z"), (0,), (), False
    ),
    CaseInfo(
        CssType.T21, 2, _F21, (), ("alpha", "sigma"), ("x1", "Y", "Z"), (0,),
        ("a1 = 0", "f1 = 0"),
        True,
        notes="no Lorentzian examples: det g = -a0 > 0 whenever L0 is real",
    ),
    CaseInfo(
        CssType.T21, 3, _F21, (), ("alpha", "beta", "gamma", "p", "q", "r"),
        ("x0", "Y", "Z"), (),
        ("alpha^2*a0 + 2*alpha*beta*b0 + beta^2*c0 = gamma",
         "p*(alpha*a0 + beta*b0) + q*(alpha*b0 + beta*c0) = r"),
        False,
    ),
    CaseInfo(
        CssType.T21, 4, _F21, (FnSlot("L1", 1),), (), ("x0", "x1", "Z"), (), (), False
    ),
    CaseInfo(
        CssType.T10, 1, _F1X, (), _ABG, ("X", "Y", "Z"), (1, 2, 3), (), False
    ),
    CaseInfo(
        CssType.T10, 2, _F1X, (), _ABG, ("x1", "Y", "Z"), (2, 3),
        ("alpha^2*w1 = beta*t1 + gamma",),
        False,
    ),
    CaseInfo(
        CssType.T10, 3, _F1X, (), _ABG, ("x2", "x3", "Y"), (1,),
        ("alpha^2*w2 = beta*t2 + gamma", "alpha^2*w3 = beta*t3 + gamma"),
        False,
    ),
    CaseInfo(
        CssType.T11, 1, _F1X, (), _ABG, ("X", "Y", "Z"), (2, 3), (), False
    ),
    CaseInfo(
        CssType.T11, 2, _F1X, (FnSlot("L1", 1),), ("beta",), ("x1", "Y", "Z"), (2, 3),
        ("t1 = 0",),
        True,
        notes="no Lorentzian examples: real L2, L3 force V2*V3 < 0",
    ),
    CaseInfo(
        CssType.T11, 3, _F1X, (), ("alpha", "beta", "gamma", "p", "q"),
        ("x3", "Y", "Z"), (2,),
        ("alpha^2*w3 = beta*t3 + gamma", "p*alpha = q*beta"),
        False,
    ),
    CaseInfo(
        CssType.T00, 1, _F00, (), _ABG, ("X", "Y", "Z"), (0, 1, 2, 3), (), False,
        notes=_T00_NOTE,
    ),
    CaseInfo(
        CssType.T00, 2, _F00, (), _ABG, ("x0", "X", "Y"), (1, 2, 3),
        ("alpha*a0 + beta*b0 + gamma = 0",),
        False,
        notes=_T00_NOTE,
    ),
    CaseInfo(
        CssType.T00, 3, _F00, (), _ABG, ("x0", "x1", "Y"), (2, 3),
        ("alpha*a0 + beta*b0 + gamma = 0", "alpha*a1 + beta*b1 + gamma = 0"),
        False,
        notes=_T00_NOTE,
    ),
]

REGISTRY: dict[tuple[CssType, int], CaseInfo] = {(c.type, c.case): c for c in _CASES}


def case_info(type_: CssType, case: int) -> CaseInfo:
    try:
        return REGISTRY[(type_, case)]
    except KeyError:
        valid = sorted(c.case for c in _CASES if c.type is type_)
        raise KeyError(
            f"type {type_.value} has no case {case}; valid cases: {valid}"
        ) from None


def all_cases() -> list[CaseInfo]:
    return list(_CASES)
