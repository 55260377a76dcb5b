"""Random two-body qubit Hamiltonians and their non-interacting register basis.

The model is an n-qubit register with random level splittings and random
pair couplings:

    H = sum_i L_i sigma_i^z + sum_(i<j) J_ij C_i C_j

where the splittings L_i are drawn uniformly from
[delta0 - delta/2, delta0 + delta/2], the couplings J_ij uniformly from
[-j_bound, j_bound] over the configured pair topology, and the coupling
operator C is either sigma^x (transverse, the default: it mixes register
states) or sigma^z (diagonal control case).

Conventions: qubit ``i`` maps to bit position ``n - 1 - i`` of the basis
index, so qubit 0 is the leading factor in a Kronecker-product expansion,
and a cleared bit means sigma^z eigenvalue +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TRANSVERSE_XX = "transverse-xx"
DIAGONAL_ZZ = "diagonal-zz"
CHAIN = "chain"
ALL_PAIRS = "all-pairs"

# Dense storage of 2^n doubles per eigenvector column; 14 qubits = 16384^2
# doubles = 2 GiB working set for the solver, the desk-scale ceiling.
MAX_QUBITS = 14


@dataclass(frozen=True)
class ModelConfig:
    """Ensemble specification for one family of disorder realizations."""

    n: int
    j_bound: float
    delta0: float = 1.0
    delta: float = 1.0
    topology: str = CHAIN
    coupling_op: str = TRANSVERSE_XX
    master_seed: int = 0

    def validate(self) -> list[str]:
        """Return all invariant violations, empty when the config is usable."""
        errors = []
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            errors.append(f"n: qubit count must be a positive integer (got {self.n!r})")
        elif self.n > MAX_QUBITS:
            errors.append(
                f"n: {self.n} qubits means dimension 2^{self.n}; "
                f"the dense workbench is capped at n = {MAX_QUBITS}"
            )
        if self.delta < 0:
            errors.append(f"delta: splitting spread must be >= 0 (got {self.delta})")
        if self.j_bound < 0:
            errors.append(f"j_bound: coupling bound must be >= 0 (got {self.j_bound})")
        if not self.delta / 2 < self.delta0:
            errors.append(
                f"delta0/delta: need delta/2 < delta0 so every splitting stays positive "
                f"(got delta0={self.delta0}, delta={self.delta})"
            )
        if self.topology not in (CHAIN, ALL_PAIRS):
            errors.append(f"topology: expected '{CHAIN}' or '{ALL_PAIRS}' (got {self.topology!r})")
        if self.coupling_op not in (TRANSVERSE_XX, DIAGONAL_ZZ):
            errors.append(
                f"coupling_op: expected '{TRANSVERSE_XX}' or '{DIAGONAL_ZZ}' "
                f"(got {self.coupling_op!r})"
            )
        return errors

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def j_over_delta0(self) -> float:
        return self.j_bound / self.delta0

    def pairs(self) -> list[tuple[int, int]]:
        """Coupled qubit pairs (i < j) for the configured topology."""
        if self.topology == ALL_PAIRS:
            return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]
        return [(i, i + 1) for i in range(self.n - 1)]


@dataclass(frozen=True)
class CouplingDraw:
    """One disorder realization: splittings and pair couplings."""

    splittings: np.ndarray
    couplings: dict[tuple[int, int], float]
    realization_index: int

    @property
    def n(self) -> int:
        return len(self.splittings)


@dataclass(frozen=True)
class RegisterBasis:
    """Unperturbed energies of the 2^n bitstring states, index = bitstring."""

    energies: np.ndarray
    order: np.ndarray = field(repr=False)  # argsort of energies

    @property
    def dim(self) -> int:
        return len(self.energies)


def realization_rng(master_seed: int, realization_index: int) -> np.random.Generator:
    """Independent, order-free stream for one realization.

    Splittable counter scheme: the (master_seed, realization_index) pair keys
    a SeedSequence, so realization k has the same stream whether or not any
    other realization was drawn first, and ensembles parallelize safely.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(realization_index,))
    return np.random.Generator(np.random.Philox(ss))


def draw_couplings(config: ModelConfig, realization_index: int = 0) -> CouplingDraw:
    """Draw one realization of splittings and couplings for ``config``.

    Deterministic for a given (master_seed, realization_index). Splittings
    are uniform on [delta0 - delta/2, delta0 + delta/2]; couplings uniform on
    [-j_bound, j_bound], one per pair of the configured topology.
    """
    rng = realization_rng(config.master_seed, realization_index)
    lo = config.delta0 - config.delta / 2
    hi = config.delta0 + config.delta / 2
    splittings = rng.uniform(lo, hi, config.n)
    splittings.flags.writeable = False
    pairs = config.pairs()
    values = rng.uniform(-config.j_bound, config.j_bound, len(pairs))
    couplings = dict(zip(pairs, values.tolist()))
    return CouplingDraw(splittings=splittings, couplings=couplings,
                        realization_index=realization_index)


def _sign_table(n: int) -> np.ndarray:
    """(n, 2^n) table of sigma^z eigenvalues: entry [q, a] is +-1 for qubit q in state a."""
    idx = np.arange(1 << n)
    table = np.empty((n, 1 << n))
    for q in range(n):
        table[q] = 1.0 - 2.0 * ((idx >> (n - 1 - q)) & 1)
    return table


def register_basis(draw: CouplingDraw, config: ModelConfig) -> RegisterBasis:
    """Unperturbed register energies E_a for every bitstring state.

    For the transverse coupling these are the pure splitting sums
    E_a = sum_k s_k(a) L_k; the eigenvector weights of the interacting
    Hamiltonian are plotted against exactly these. For the diagonal-zz
    control case the zz terms are part of the (still diagonal) Hamiltonian,
    so they are folded in here too.
    """
    n = draw.n
    signs = _sign_table(n)
    energies = draw.splittings @ signs
    if config.coupling_op == DIAGONAL_ZZ:
        for (i, j), val in draw.couplings.items():
            energies += val * signs[i] * signs[j]
    energies.flags.writeable = False
    order = np.argsort(energies, kind="stable")
    order.flags.writeable = False
    return RegisterBasis(energies=energies, order=order)


def build_hamiltonian(draw: CouplingDraw, config: ModelConfig) -> np.ndarray:
    """Dense symmetric 2^n x 2^n matrix of one realization.

    The diagonal carries the splitting sums. The transverse coupling adds
    J_ij at (a, b) exactly when bitstrings a and b differ in the two bits of
    a coupled pair (sigma^x sigma^x flips both); the zz variant stays
    exactly diagonal.
    """
    n = draw.n
    if n > MAX_QUBITS:
        raise ValueError(
            f"dimension overflow: n = {n} gives a 2^{n} x 2^{n} dense matrix; "
            f"the cap is n = {MAX_QUBITS}"
        )
    dim = 1 << n
    signs = _sign_table(n)
    diag = draw.splittings @ signs
    if config.coupling_op == DIAGONAL_ZZ:
        for (i, j), val in draw.couplings.items():
            diag = diag + val * signs[i] * signs[j]
        matrix = np.diag(diag)
    else:
        matrix = np.diag(diag)
        idx = np.arange(dim)
        for (i, j), val in draw.couplings.items():
            mask = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
            matrix[idx, idx ^ mask] += val
    matrix.flags.writeable = False
    return matrix
