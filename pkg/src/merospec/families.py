"""Seeded instance families for tests and the verification harness.

Every family is generated from an explicit seed so runs are reproducible
bit for bit.  Members carry the independently known data (winding numbers,
partial multiplicities, planted eigenvalue structure) used as oracles.
"""

from dataclasses import dataclass, field

import numpy as np

from .birman_schwinger import FactoredPerturbation
from .matfun import MatrixFunction, from_pencil, product

__all__ = [
    "jordan_block", "block_diag", "well_conditioned_similarity",
    "PlantedMatrix", "planted_jordan_matrix", "diagonal_power_function",
    "conjugated", "FamilyMember", "rational_family",
    "PerturbationInstance", "perturbation_family", "random_theta",
]


def jordan_block(lam, size):
    return lam * np.eye(size, dtype=complex) + np.eye(size, k=1, dtype=complex)


def block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def well_conditioned_similarity(rng, n, strength=0.3):
    """Random invertible similarity with condition number below ~2."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(g)
    r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    r *= strength / np.linalg.norm(r, 2)
    return q @ (np.eye(n) + r)


def _lattice_eigenvalues(rng, count):
    """Distinct complex values with mutual distance >= 1."""
    grid = [complex(a, b) for a in range(-3, 4) for b in range(-3, 4)]
    picks = rng.choice(len(grid), size=count, replace=False)
    return [grid[i] for i in picks]


@dataclass
class PlantedMatrix:
    """Matrix with known Jordan structure.

    ``structure`` maps each planted eigenvalue to its list of Jordan block
    sizes; algebraic multiplicity is the sum, geometric the count.
    """

    matrix: np.ndarray = field(repr=False)
    structure: dict

    def algebraic(self, z0):
        return sum(self.structure[z0])

    def geometric(self, z0):
        return len(self.structure[z0])

    @property
    def eigenvalues(self):
        return list(self.structure)


def planted_jordan_matrix(rng, n, max_block=4, max_eigs=3):
    """Similarity transform of a random Jordan form of size n."""
    n_eigs = int(rng.integers(1, min(max_eigs, n) + 1))
    eigs = _lattice_eigenvalues(rng, n_eigs)
    structure = {e: [] for e in eigs}
    remaining = n
    while remaining > 0:
        e = eigs[int(rng.integers(0, n_eigs))]
        b = int(rng.integers(1, min(max_block, remaining) + 1))
        structure[e].append(b)
        remaining -= b
    structure = {e: sorted(bs) for e, bs in structure.items() if bs}
    blocks = [jordan_block(e, b) for e, bs in structure.items() for b in bs]
    s = well_conditioned_similarity(rng, n)
    matrix = s @ block_diag(blocks) @ np.linalg.inv(s)
    return PlantedMatrix(matrix=matrix, structure=structure)


def diagonal_power_function(z0, exponents):
    """z -> diag((z - z0)^k_i) with its exact derivative.

    Negative exponents give poles at z0; the determinant winds sum(k_i)
    times around any small circle at z0.
    """
    exps = np.asarray(exponents, dtype=int)
    z0 = complex(z0)

    def ev(z):
        return np.diag((z - z0) ** exps.astype(complex))

    def dv(z):
        vals = np.zeros(len(exps), dtype=complex)
        nz = exps != 0
        vals[nz] = exps[nz] * (z - z0) ** (exps[nz].astype(complex) - 1)
        return np.diag(vals)

    hints = (z0,) if np.any(exps != 0) else ()
    return MatrixFunction(ev, (len(exps), len(exps)), deriv_fn=dv,
                          singular_hints=hints)


def conjugated(f, s):
    """Constant similarity s f(z) s^{-1}; preserves all multiplicity data."""
    s = np.asarray(s, dtype=complex)
    si = np.linalg.inv(s)

    def ev(z):
        return s @ f(z) @ si

    dv = None
    if f.has_derivative:
        def dv(z):
            return s @ f.deriv(z) @ si

    return MatrixFunction(ev, f.shape, deriv_fn=dv,
                          singular_hints=f.singular_hints)


@dataclass
class FamilyMember:
    """One rational matrix function with its independently known data."""

    fun: MatrixFunction = field(repr=False)
    z0: complex
    winding: int                 # sum of determinant zero orders minus poles
    label: str
    analytic: bool = True
    partial_multiplicities: list = None  # ascending, when known a priori


def _analytic_exponents(rng, n):
    exps = rng.integers(0, 4, size=n)
    if not np.any(exps > 0):
        exps[int(rng.integers(0, n))] = 1 + int(rng.integers(0, 3))
    return exps


def rational_family(seed, count, z0=0.0, analytic_only=True):
    """Seeded family: diagonal powers, Jordan pencils, similarity
    conjugates, and products, all centered at z0.

    With ``analytic_only`` every member is analytic with a zero of finite
    type at z0; otherwise negative diagonal exponents (poles) are mixed in
    and only the winding oracle remains known.
    """
    rng = np.random.default_rng(seed)
    members = []
    kinds = ["diag", "jordan", "conjugate", "product"]
    for i in range(count):
        kind = kinds[i % len(kinds)]
        n = int(rng.integers(2, 6))
        if kind == "diag":
            exps = _analytic_exponents(rng, n) if analytic_only \
                else rng.integers(-2, 4, size=n)
            fun = diagonal_power_function(z0, exps)
            pm = sorted(int(k) for k in exps if k > 0)
            members.append(FamilyMember(
                fun=fun, z0=z0, winding=int(exps.sum()),
                label=f"diag{i}:{list(map(int, exps))}",
                analytic=bool(np.all(exps >= 0)),
                partial_multiplicities=pm if np.all(exps >= 0) else None))
        elif kind == "jordan":
            blocks = []
            total = 0
            while total < n:
                b = int(rng.integers(1, min(3, n - total) + 1))
                blocks.append(b)
                total += b
            extra = _lattice_eigenvalues(rng, 2)
            others = [e for e in extra if abs(e - z0) >= 1.0][:1]
            mats = [jordan_block(z0, b) for b in blocks]
            mats += [jordan_block(e, 1) for e in others]
            t = block_diag(mats)
            s = well_conditioned_similarity(rng, t.shape[0])
            t = s @ t @ np.linalg.inv(s)
            fun = from_pencil(t, np.eye(t.shape[0]))
            members.append(FamilyMember(
                fun=fun, z0=z0, winding=int(sum(blocks)),
                label=f"jordan{i}:{sorted(blocks)}",
                partial_multiplicities=sorted(blocks)))
        elif kind == "conjugate":
            exps = _analytic_exponents(rng, n) if analytic_only \
                else rng.integers(-2, 4, size=n)
            s = well_conditioned_similarity(rng, n)
            fun = conjugated(diagonal_power_function(z0, exps), s)
            pm = sorted(int(k) for k in exps if k > 0)
            members.append(FamilyMember(
                fun=fun, z0=z0, winding=int(exps.sum()),
                label=f"conj{i}:{list(map(int, exps))}",
                analytic=bool(np.all(exps >= 0)),
                partial_multiplicities=pm if np.all(exps >= 0) else None))
        else:
            exps1 = _analytic_exponents(rng, n) if analytic_only \
                else rng.integers(-2, 3, size=n)
            exps2 = _analytic_exponents(rng, n) if analytic_only \
                else rng.integers(-2, 3, size=n)
            s = well_conditioned_similarity(rng, n)
            fun = product(conjugated(diagonal_power_function(z0, exps1), s),
                          diagonal_power_function(z0, exps2))
            members.append(FamilyMember(
                fun=fun, z0=z0, winding=int(exps1.sum() + exps2.sum()),
                label=f"prod{i}:{list(map(int, exps1))}x{list(map(int, exps2))}",
                analytic=bool(np.all(exps1 >= 0) and np.all(exps2 >= 0))))
    return members


@dataclass
class PerturbationInstance:
    pert: FactoredPerturbation
    label: str
    shared_eigenvalues: list  # eigenvalues untouched by the perturbation


def perturbation_family(seed, count, n_max=12, k_max=4):
    """Seeded factored perturbations, including engineered instances whose
    perturbation leaves a block (and its eigenvalues) untouched."""
    rng = np.random.default_rng(seed)
    instances = []
    for i in range(count):
        n = int(rng.integers(2, n_max + 1))
        k = int(rng.integers(1, k_max + 1))
        style = i % 4
        shared = []
        if style == 0:
            h0 = np.diag(np.array(_lattice_eigenvalues(rng, n)))
        elif style == 1:
            h0 = planted_jordan_matrix(rng, n, max_block=3).matrix
        elif style == 2 and n >= 3:
            # Shared block: the perturbation has zero columns there.
            s = int(rng.integers(1, min(2, n - 2) + 1))
            eigs = _lattice_eigenvalues(rng, n - s + 1)
            shared = [eigs[0]] * s
            h0 = np.diag(np.array(shared + eigs[1:]))
        else:
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            h0 = np.diag(np.array(_lattice_eigenvalues(rng, n))) + 0.1 * g
        v1 = 0.5 * (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n)))
        v2 = 0.5 * (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n)))
        if shared:
            v1[:, :len(shared)] = 0.0
            v2[:, :len(shared)] = 0.0
        instances.append(PerturbationInstance(
            pert=FactoredPerturbation(h0=h0, v1=v1, v2=v2),
            label=f"pert{i}:n={n},k={k},style={style}",
            shared_eigenvalues=[complex(e) for e in dict.fromkeys(shared)]))
    return instances


def random_theta(rng, h, scale=1.0):
    """Random dense boundary parameter of size h x h."""
    return scale * (rng.standard_normal((h, h))
                    + 1j * rng.standard_normal((h, h)))
