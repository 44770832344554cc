"""JSON encodings for windows, triples, subcharacters and verdicts.

Rational quantities are written as ``"num/den"`` strings (``"1"`` for
integers), elements as lists of coordinates, complex numbers as ``[re, im]``.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .gabor import BasisReport, ClassificationVerdict, LocalizedBasis
from .groups import GroupMismatch, GroupSpec, parse_group
from .phase import ExactScalar, UnitPhase
from .second_degree import Subcharacter
from .symplectic import IsotropicTriple
from .tf import Window


def rational(q) -> str:
    return str(Fraction(q))


def element(x) -> list:
    return [int(c) for c in x]


def cplx(c: complex) -> list:
    return [float(np.real(c)), float(np.imag(c))]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def window_to_json(f: Window) -> dict:
    A = f.group
    out = {"group": str(A), "values": [cplx(v) for v in f.values]}
    if f.exact is not None:
        e = f.exact
        out["support"] = [element(A.element(i)) for i in e.support]
        out["phases"] = [str(p) for p in e.phases]
        if len(set(e.mags)) <= 1:
            m = e.mags[0] if e.mags else Fraction(1)
            out["mag_sq"] = rational(m * m * e.scale_sq)
        else:
            out["mags"] = [rational(m) for m in e.mags]
            out["scale_sq"] = rational(e.scale_sq)
    return out


def _parse_element(A: GroupSpec, item):
    if isinstance(item, int):
        if A.rank != 1:
            raise GroupMismatch(f"bare integer {item} is not an element of {A}")
        return A.reduce((item,))
    return A.reduce(tuple(item))


def _parse_rational(s) -> Fraction:
    if isinstance(s, float):
        raise ValueError("rational fields must be strings or integers")
    return Fraction(s)


def window_from_json(obj: dict, group: GroupSpec | None = None) -> Window:
    """Read a dense ``values`` window, or an exact ``support``/``phases`` one.

    An exact window has a common magnitude given as ``"mag"`` (rational) or
    ``"mag_sq"`` (its square, for magnitudes like ``2^(-1/2)``), or per-point
    ``"mags"`` with an optional ``"scale_sq"``.
    """
    A = parse_group(obj["group"]) if "group" in obj else group
    if A is None:
        raise ValueError("window file names no group")
    if group is not None and group != A:
        raise GroupMismatch(f"window is on {A}, expected {group}")
    if "support" in obj:
        supp = [_parse_element(A, s) for s in obj["support"]]
        phases = obj.get("phases", ["0"] * len(supp))
        if len(phases) != len(supp):
            raise ValueError("support and phases differ in length")
        if "mags" in obj:
            mags = [_parse_rational(m) for m in obj["mags"]]
            scale_sq = _parse_rational(obj.get("scale_sq", "1"))
        else:
            if "mag_sq" in obj:
                scale_sq = _parse_rational(obj["mag_sq"])
            else:
                m = _parse_rational(obj.get("mag", "1"))
                scale_sq = m * m
            mags = [Fraction(1)] * len(supp)
        if len(set(supp)) != len(supp):
            raise ValueError("repeated support element")
        entries = {x: ExactScalar(m, UnitPhase.of(p)) for x, m, p in zip(supp, mags, phases)}
        return Window.from_exact(A, entries, scale_sq)
    vals = obj["values"]
    return Window(A, [complex(*v) if isinstance(v, list) else complex(v) for v in vals])


def triple_to_json(t: IsotropicTriple) -> dict:
    return {
        "H": [element(g) for g, _ in t.H.canonical_basis],
        "K": [element(g) for g, _ in t.K.canonical_basis],
        "phi": [element(x) for x in t.phi.images],
        "measure": rational(t.measure),
        "maximal": bool(t.is_maximal),
    }


def subcharacter_to_json(h: Subcharacter) -> dict:
    A = h.group
    return {
        "group": str(A),
        "H": [element(g) for g, _ in h.H.canonical_basis],
        "phi": [element(x) for x in h.phi.images],
        "phases": {",".join(map(str, x)): str(h.character(x)) for x in sorted(h.character.values)},
        "normalized": h.normalized,
    }


def atlas_to_json(A: GroupSpec, triples: list) -> dict:
    out = {"group": str(A), "count": len(triples), "triples": [triple_to_json(t) for t in triples]}
    if A.rank == 1:
        N = A.order
        s = sum(b for b in range(1, N + 1) if N % b == 0)
        out["divisor_sum"] = s
        out["divisor_sum_check"] = s == len(triples)
    return out


def basis_to_json(basis: LocalizedBasis, report: BasisReport, measure: Fraction) -> dict:
    return {
        "window": window_to_json(basis.window),
        "subcharacter": subcharacter_to_json(basis.subcharacter),
        "lattice": [[element(x), element(xi)] for x, xi in basis.lattice],
        "gram_max_offdiag": report.gram_max_offdiag,
        "gram_max_diag_dev": report.gram_max_diag_dev,
        "rank": report.rank,
        "size": report.size,
        "support_measure": rational(measure),
        "orthonormal_basis": report.is_basis,
    }


def verdict_to_json(v: ClassificationVerdict) -> dict:
    out = {"kind": v.kind, "support_measure": rational(v.support_measure)}
    if not v.optimizer:
        out["failed"] = v.failed
        return out
    out["witness"] = {
        "c": cplx(v.c),
        "x0": element(v.x0),
        "h": subcharacter_to_json(v.h),
        "triple": triple_to_json(v.triple),
    }
    out["residual"] = v.residual
    return out
