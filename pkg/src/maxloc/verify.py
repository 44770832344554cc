"""Cross-module invariant suites run on a single group (used by ``maxloc verify``)."""

from __future__ import annotations

import itertools

import numpy as np

from .gabor import (
    GaborSystem,
    build_max_localized_basis,
    classify_optimizer,
    common_eigenfunction_basis,
    is_orthonormal_basis,
    tiling_check,
)
from .groups import GroupSpec, enumerate_subgroups, phase_space
from .lieb import lieb_check
from .second_degree import ambiguity_closed_form, subcharacter, verify_second_degree
from .symplectic import enumerate_maximal_isotropic, is_isotropic, subgroup_from_triple
from .tf import Window, ambiguity, index_point, support, tf_shift

LIEB_PS = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0)


def random_window(A: GroupSpec, rng: np.random.Generator, sparse: bool = True) -> Window:
    n = A.order
    vals = rng.normal(size=n) + 1j * rng.normal(size=n)
    if sparse:
        keep = rng.random(n) < rng.uniform(0.2, 1.0)
        keep[rng.integers(n)] = True
        vals = vals * keep
    return Window(A, vals)


def random_point(A: GroupSpec, rng: np.random.Generator) -> tuple:
    return index_point(A, int(rng.integers(A.order**2)))


def unit_phase(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def suite_uncertainty(A, rng, samples):
    ok = all(support(ambiguity(random_window(A, rng))).measure >= 1 for _ in range(samples))
    return ok, samples


def suite_atlas(A, triples):
    if A.order > 16:
        return None, 0
    P = phase_space(A)
    brute = {G.indices for G in enumerate_subgroups(P) if G.order == A.order and is_isotropic(G, "direct")}
    built = {subgroup_from_triple(t).indices for t in triples}
    return brute == built and len(built) == len(triples), len(brute)


def suite_second_degree(triples):
    return all(verify_second_degree(subcharacter(t.H, t.phi).character) for t in triples), len(triples)


def suite_closed_form(triples):
    ok = True
    for t in triples:
        h = subcharacter(t.H, t.phi)
        ok &= ambiguity_closed_form(h).exact.equals(ambiguity(h.window()).exact)
    return ok, len(triples)


def suite_bases(A, triples):
    ok = True
    for t in triples:
        b = build_max_localized_basis(t)
        ok &= is_orthonormal_basis(GaborSystem(b.window, b.lattice)).is_basis
        ok &= tiling_check(A, b.lattice, b.subgroup)
        if len(b.lattice) > 1:
            dup = b.lattice[:-1] + [b.lattice[0]]
            ok &= not is_orthonormal_basis(GaborSystem(b.window, dup)).is_basis
            ok &= not is_orthonormal_basis(GaborSystem(b.window, b.lattice[:-1])).is_basis
    return ok, len(triples)


def perturbation_point(f: Window, rng) -> tuple | None:
    """A point outside the support of ``f`` when there is one, else any point."""
    A = f.group
    if A.order == 1:
        return None
    outside = np.flatnonzero(np.abs(f.values) == 0)
    pool = outside if outside.size else np.arange(A.order)
    return A.element(int(rng.choice(pool)))


def suite_classification(A, triples, rng, samples):
    ok = True
    for _ in range(samples):
        t = triples[int(rng.integers(len(triples)))]
        h = subcharacter(t.H, t.phi, normalized=True).window()
        f = tf_shift(h, random_point(A, rng)).scaled(unit_phase(rng) * rng.uniform(0.5, 2))
        v = classify_optimizer(f)
        ok &= v.optimizer and v.residual <= 1e-9
        y = perturbation_point(f, rng)
        if y is not None and (t.H.order > 1 or abs(f.values[A.index(y)]) == 0):
            bumped = Window(A, f.values + 0.1 * Window.delta(A, y).values)
            w = classify_optimizer(bumped)
            ok &= (not w.optimizer) and w.support_measure > 1
    return ok, samples


def suite_lieb(A, rng, samples):
    ok = True
    for _ in range(samples):
        f = random_window(A, rng).normalized()
        g = random_window(A, rng).normalized()
        for p in LIEB_PS:
            ok &= lieb_check(f, g, p).margin >= -1e-12
    return ok, samples


def suite_eigen(A, rng, samples):
    pts = [index_point(A, i) for i in range(A.order**2)]
    pairs = list(itertools.combinations(pts, 2))
    if len(pairs) > samples:
        pairs = [pairs[i] for i in sorted(rng.choice(len(pairs), size=samples, replace=False))]
    ok = True
    for S in pairs:
        r = common_eigenfunction_basis(A, S)
        ok &= (r.residual <= 1e-12) if r.success else bool(r.witness[2])
    return ok, len(pairs)


def run_suites(A: GroupSpec, seed: int = 0, samples: int = 50) -> dict:
    """Run every suite; each entry reports ``passed`` (``None`` if skipped) and ``checked``."""
    rng = np.random.default_rng(seed)
    triples = enumerate_maximal_isotropic(A)
    results = {
        "uncertainty": suite_uncertainty(A, rng, samples),
        "atlas": suite_atlas(A, triples),
        "second_degree": suite_second_degree(triples),
        "closed_form": suite_closed_form(triples),
        "bases": suite_bases(A, triples),
        "classification": suite_classification(A, triples, rng, samples),
        "lieb": suite_lieb(A, rng, samples),
        "eigenbasis": suite_eigen(A, rng, samples),
    }
    return {k: {"passed": None if ok is None else bool(ok), "checked": int(n)} for k, (ok, n) in results.items()}
