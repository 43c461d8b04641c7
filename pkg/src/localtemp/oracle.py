"""Dense verification of the analytic building blocks on small spin chains.

Everything here is brute force on purpose: build the full 2^n Hamiltonian,
diagonalize it, and measure the quantities the analytic modules predict
(product-state interaction moments, the energy distribution w_a, diagonal
and off-diagonal elements of the thermal state in the product basis). No
Gaussian or thermodynamic-limit approximation enters, so any disagreement
beyond numerical noise points at the formulas, not at the check.

Basis conventions (fixed so golden vectors are reproducible): site j maps to
bit j of the basis index, so site 0 is the lowest-order bit; spin-up is bit
value 0, with sigma^z = diag(1, -1), making the single-site Hamiltonian
-B sigma^z = diag(-B, +B). sigma^y sigma^y is assembled as
-(i sigma^y) x (i sigma^y), keeping all matrices real. The product basis
matrix is the Kronecker power of the group eigenvector matrix with group 0
on the low index bits.

Caveats baked into the checks: for periodic chains only ground-energy
comparisons at O(1/n) tolerance are meaningful (no fermion parity-sector
bookkeeping), and with exactly two groups on a ring both junctions couple
the same pair, so the per-junction width sum does not apply there.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .canonical import AccuracyParams, energy_window
from .harmonic import HarmonicModel
from .ising import GroupOccupations, IsingModel, group_energy

__all__ = [
    "Boundary",
    "DenseThermalSystem",
    "ProductBasisData",
    "OffDiagReport",
    "build_hamiltonian",
    "product_basis",
    "thermal_state",
    "product_statistics",
    "w_a_distribution",
    "distribution_moments",
    "rho_product_diag",
    "rho_product_offdiag_max",
    "adjacent_junction_covariance",
    "occupations_by_energy",
    "harmonic_mode_check",
]

_MAX_SITES = 14

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
# i * sigma^y; sigma^y sigma^y = -(i sigma^y) x (i sigma^y)
_IY = np.array([[0.0, 1.0], [-1.0, 0.0]])


class Boundary(enum.Enum):
    OPEN = "Open"
    PERIODIC = "Periodic"


def _site_op(op: np.ndarray, j: int, n_sites: int) -> np.ndarray:
    """Embed a single-site operator at site j (bit j of the basis index)."""
    return np.kron(np.eye(2 ** (n_sites - 1 - j)), np.kron(op, np.eye(2**j)))


def _bond_term(model: IsingModel, i: int, j: int, n_sites: int) -> np.ndarray:
    xx = _site_op(_SX, i, n_sites) @ _site_op(_SX, j, n_sites)
    yy = -(_site_op(_IY, i, n_sites) @ _site_op(_IY, j, n_sites))
    return -0.5 * model.jx * xx - 0.5 * model.jy * yy


def build_hamiltonian(
    n_sites: int, model: IsingModel, boundary: Boundary = Boundary.OPEN
) -> np.ndarray:
    """Dense chain Hamiltonian sum_i -B sz_i - (Jx/2) sx sx - (Jy/2) sy sy."""
    if not 1 <= n_sites <= _MAX_SITES:
        raise ValueError(f"n_sites must be between 1 and {_MAX_SITES}")
    dim = 2**n_sites
    h = np.zeros((dim, dim))
    for j in range(n_sites):
        h -= model.b_field * _site_op(_SZ, j, n_sites)
    for i in range(n_sites - 1):
        h += _bond_term(model, i, i + 1, n_sites)
    if boundary is Boundary.PERIODIC and n_sites > 1:
        h += _bond_term(model, n_sites - 1, 0, n_sites)
    return h


@dataclass(eq=False)
class DenseThermalSystem:
    """Exactly diagonalized chain plus inverse temperature.

    Treat instances as immutable after construction; all queries only read.
    """

    n_sites: int
    hamiltonian: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    beta: float

    def __post_init__(self) -> None:
        dim = 2**self.n_sites
        if self.hamiltonian.shape != (dim, dim):
            raise ValueError("hamiltonian shape inconsistent with n_sites")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        scale = max(1.0, float(np.max(np.abs(self.hamiltonian))))
        if np.max(np.abs(self.hamiltonian - self.hamiltonian.T)) > 1e-12 * scale:
            raise ValueError("hamiltonian must be symmetric")
        norm = max(1.0, float(np.max(np.abs(self.eigenvalues))))
        residual = self.hamiltonian @ self.eigenvectors - self.eigenvectors * (
            self.eigenvalues[None, :]
        )
        worst = float(np.max(np.linalg.norm(residual, axis=0)))
        if worst > 1e-9 * norm:
            raise ValueError(f"eigendecomposition residual too large: {worst:g}")

    @classmethod
    def solve(cls, hamiltonian: np.ndarray, beta: float) -> "DenseThermalSystem":
        dim = hamiltonian.shape[0]
        n_sites = int(round(math.log2(dim)))
        if 2**n_sites != dim:
            raise ValueError("hamiltonian dimension must be a power of two")
        if n_sites > _MAX_SITES:
            raise ValueError(f"n_sites must be between 1 and {_MAX_SITES}")
        vals, vecs = np.linalg.eigh(hamiltonian)
        return cls(
            n_sites=n_sites,
            hamiltonian=hamiltonian,
            eigenvalues=vals,
            eigenvectors=vecs,
            beta=beta,
        )


@dataclass(eq=False)
class ProductBasisData:
    """Spectra of the decoupled groups and the interaction they leave over.

    group_eigs holds one (eigenvalues, eigenvectors) pair per group, all
    identical here since the groups are congruent; product_energies[a] is
    E_a = sum of group eigenvalues selected by a; interaction_matrix is
    I = H - H_0 rotated into the product basis.
    """

    group_size: int
    group_eigs: tuple[tuple[np.ndarray, np.ndarray], ...]
    product_energies: np.ndarray
    interaction_matrix: np.ndarray
    basis_matrix: np.ndarray

    def __post_init__(self) -> None:
        dim = 1
        for vals, vecs in self.group_eigs:
            gram = vecs.T @ vecs
            if np.max(np.abs(gram - np.eye(gram.shape[0]))) > 1e-12:
                raise ValueError("group eigenbasis not orthonormal")
            dim *= vals.size
        if dim != self.product_energies.size:
            raise ValueError("group dimensions inconsistent with product basis")

    @property
    def n_groups(self) -> int:
        return len(self.group_eigs)


def _group_indices(a: int, group_size: int, n_groups: int) -> list[int]:
    dim = 2**group_size
    return [(a >> (group_size * g)) % dim for g in range(n_groups)]


def product_basis(
    n_sites: int,
    group_size: int,
    model: IsingModel,
    boundary: Boundary = Boundary.OPEN,
) -> ProductBasisData:
    """Partition the chain into equal groups and set up the product basis."""
    if n_sites % group_size != 0:
        raise ValueError("group_size must divide n_sites")
    n_groups = n_sites // group_size
    h_full = build_hamiltonian(n_sites, model, boundary)
    h_group = build_hamiltonian(group_size, model, Boundary.OPEN)
    vals, vecs = np.linalg.eigh(h_group)

    dim_group = 2**group_size
    h0 = np.zeros_like(h_full)
    for g in range(n_groups):
        h0 += np.kron(
            np.eye(2 ** (group_size * (n_groups - 1 - g))),
            np.kron(h_group, np.eye(2 ** (group_size * g))),
        )

    # group 0 lives on the low bits, i.e. the last Kronecker factor
    basis = functools.reduce(np.kron, [vecs] * n_groups)

    energies = np.zeros(2**n_sites)
    indices = np.arange(2**n_sites)
    for g in range(n_groups):
        energies += vals[(indices >> (group_size * g)) % dim_group]

    interaction = basis.T @ (h_full - h0) @ basis
    return ProductBasisData(
        group_size=group_size,
        group_eigs=tuple((vals, vecs) for _ in range(n_groups)),
        product_energies=energies,
        interaction_matrix=interaction,
        basis_matrix=basis,
    )


def thermal_state(sys: DenseThermalSystem) -> tuple[float, np.ndarray]:
    """Log partition function and canonical weights over the eigenstates."""
    exponents = -sys.beta * sys.eigenvalues
    log_z = float(logsumexp(exponents))
    return log_z, np.exp(exponents - log_z)


def product_statistics(pb: ProductBasisData, a: int) -> tuple[float, float]:
    """Exact (eps_a, delta_sq_a) of the interaction in product state a."""
    if not 0 <= a < pb.product_energies.size:
        raise IndexError("product state index out of range")
    row = pb.interaction_matrix[a]
    eps = float(row[a])
    return eps, float(row @ row - eps * eps)


def _product_column(pb: ProductBasisData, a: int) -> np.ndarray:
    idx = _group_indices(a, pb.group_size, pb.n_groups)
    cols = [pb.group_eigs[g][1][:, idx[g]] for g in reversed(range(pb.n_groups))]
    return functools.reduce(np.kron, cols)


def w_a_distribution(
    sys: DenseThermalSystem, pb: ProductBasisData, a: int
) -> list[tuple[float, float]]:
    """Energy distribution w_a: (E_phi, |<a|phi>|^2), degeneracy-aggregated.

    Probabilities of eigenvalues closer than 1e-9 are merged so the result
    does not depend on the arbitrary rotation inside degenerate subspaces.
    """
    amps = sys.eigenvectors.T @ _product_column(pb, a)
    probs = amps**2
    out: list[tuple[float, float]] = []
    bin_start = None
    bin_energies: list[float] = []
    bin_prob = 0.0
    for e, p in zip(sys.eigenvalues, probs):
        e = float(e)
        if bin_start is not None and e - bin_start > 1e-9:
            out.append((sum(bin_energies) / len(bin_energies), bin_prob))
            bin_start, bin_energies, bin_prob = None, [], 0.0
        if bin_start is None:
            bin_start = e
        bin_energies.append(e)
        bin_prob += float(p)
    if bin_energies:
        out.append((sum(bin_energies) / len(bin_energies), bin_prob))
    return out


def distribution_moments(
    dist: Sequence[tuple[float, float]],
) -> tuple[float, float, float]:
    """(mean, variance, skewness) of a discrete distribution; skewness is 0
    for zero-width distributions."""
    e = np.asarray([d[0] for d in dist])
    p = np.asarray([d[1] for d in dist])
    mean = float(p @ e)
    var = float(p @ (e - mean) ** 2)
    if var <= 0.0:
        return mean, var, 0.0
    m3 = float(p @ (e - mean) ** 3)
    return mean, var, m3 / var**1.5


def rho_product_diag(sys: DenseThermalSystem, pb: ProductBasisData) -> np.ndarray:
    """Exact diagonal <a|rho|a> of the thermal state in the product basis."""
    _, weights = thermal_state(sys)
    overlap = pb.basis_matrix.T @ sys.eigenvectors
    return (overlap**2) @ weights


@dataclass(frozen=True)
class OffDiagReport:
    """Measured off-diagonal magnitudes of rho in the product basis.

    max_offdiag and max_coherence (the largest |rho_ab| / sqrt(rho_aa rho_bb))
    run over all pairs a != b. The windowed numbers restrict both states to
    those whose every group energy lies in the alpha-window: min_diag_window
    is the smallest diagonal entry there and ratio_min_diag the windowed
    off-diagonal maximum over it. No pass/fail threshold is attached;
    callers decide what "small" means.
    """

    max_offdiag: float
    min_diag_window: float
    ratio_min_diag: float
    max_coherence: float


def rho_product_offdiag_max(
    sys: DenseThermalSystem,
    pb: ProductBasisData,
    acc: AccuracyParams = AccuracyParams(),
) -> OffDiagReport:
    """Measure how far rho is from diagonal in the product basis."""
    _, weights = thermal_state(sys)
    overlap = pb.basis_matrix.T @ sys.eigenvectors
    rho = (overlap * weights) @ overlap.T
    diag = np.diag(rho).copy()
    off = np.abs(rho - np.diag(diag))
    max_offdiag = float(np.max(off))
    max_coherence = float(np.max(off / np.sqrt(np.outer(diag, diag))))

    # window per group: thermal excess energy split over the groups
    e_ground = float(np.min(sys.eigenvalues))
    e_thermal = float(weights @ sys.eigenvalues)
    vals = pb.group_eigs[0][0]
    window = energy_window(
        e_bar_total=e_thermal - e_ground,
        e0_total=e_ground,
        n_groups=pb.n_groups,
        acc=acc,
        e_mu_min=float(vals[0]),
        e_mu_max=float(vals[-1]),
    )
    indices = np.arange(pb.product_energies.size)
    inside = np.ones(indices.size, dtype=bool)
    dim_group = 2**pb.group_size
    for g in range(pb.n_groups):
        ge = vals[(indices >> (pb.group_size * g)) % dim_group]
        inside &= (ge >= window.e_min) & (ge <= window.e_max)
    if not np.any(inside):
        return OffDiagReport(max_offdiag, math.nan, math.nan, max_coherence)

    sub = rho[np.ix_(inside, inside)]
    sub_diag = np.diag(sub).copy()
    sub_off = np.abs(sub - np.diag(sub_diag))
    min_diag = float(np.min(sub_diag))
    return OffDiagReport(
        max_offdiag=max_offdiag,
        min_diag_window=min_diag,
        ratio_min_diag=float(np.max(sub_off) / min_diag),
        max_coherence=max_coherence,
    )


def adjacent_junction_covariance(
    n_sites: int,
    group_size: int,
    model: IsingModel,
    boundary: Boundary = Boundary.OPEN,
) -> float:
    """Largest |<I_v I_{v+1}>_a - <I_v>_a <I_{v+1}>_a| over product states.

    The analytic width sum Delta_a^2 = sum_mu Delta_mu^2 assumes this
    covariance between neighbouring junction operators vanishes; here it is
    measured instead of assumed.
    """
    pb = product_basis(n_sites, group_size, model, boundary)
    n_groups = n_sites // group_size
    n_junctions = n_groups - 1 + (1 if boundary is Boundary.PERIODIC else 0)
    if n_junctions < 2:
        raise ValueError("need at least two junctions")
    ops = []
    for v in range(n_junctions):
        i = (v + 1) * group_size - 1
        j = ((v + 1) * group_size) % n_sites
        ops.append(pb.basis_matrix.T @ _bond_term(model, i, j, n_sites) @ pb.basis_matrix)
    worst = 0.0
    for v in range(n_junctions - 1):
        left, right = ops[v], ops[v + 1]
        cross = np.einsum("ab,ba->a", left, right)
        cov = cross - np.diag(left) * np.diag(right)
        worst = max(worst, float(np.max(np.abs(cov))))
    return worst


def occupations_by_energy(model: IsingModel, n: int) -> list[GroupOccupations]:
    """Occupation vectors ordered by their formula energy, ascending.

    Aligns the dense eigenvalue order (from eigh) with occupation bitstrings
    so per-state formulas can be compared index by index. Only meaningful
    where the formula is the exact group spectrum (L = 0) and requires the
    2^n energies to be nondegenerate.
    """
    states = []
    for pattern in range(2**n):
        occ = GroupOccupations(tuple((pattern >> l) & 1 for l in range(n)))
        states.append((group_energy(occ, model), occ))
    states.sort(key=lambda s: s[0])
    for (e_lo, _), (e_hi, _) in zip(states, states[1:]):
        if e_hi - e_lo < 1e-9:
            raise ValueError(
                "degenerate group spectrum; cannot match occupations by energy"
            )
    return [occ for _, occ in states]


def harmonic_mode_check(n: int, model: HarmonicModel) -> float:
    """Worst deviation between dynamical-matrix eigenvalues and the mode law.

    The open-chain dynamical matrix (diagonal 2 omega0^2, off-diagonal
    -omega0^2) must have eigenvalues 4 omega0^2 sin^2(pi l / (2(n+1))).
    """
    if not 1 <= n <= 64:
        raise ValueError("n must be between 1 and 64")
    w2 = model.omega0**2
    dyn = 2.0 * w2 * np.eye(n) - w2 * (np.eye(n, k=1) + np.eye(n, k=-1))
    got = np.linalg.eigvalsh(dyn)
    l = np.arange(1, n + 1)
    expected = 4.0 * w2 * np.sin(math.pi * l / (2.0 * (n + 1))) ** 2
    return float(np.max(np.abs(got - expected)))
