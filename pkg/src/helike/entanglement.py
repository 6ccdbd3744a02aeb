"""One-particle reduced density matrix and entanglement entropies.

For an L = 0 CI state the RDM is block-diagonal in (l, m) with identical
blocks for every m, so the spatial coefficients are folded into one square
matrix per l (symmetric for singlets, antisymmetric for triplets) and each
occupation eigenvalue carries degeneracy 2l+1.  The explicit m-resolved
construction is kept in crosscheck.py as the test oracle for this folding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ci import CIState, ConfigList
from .errors import (
    InconsistentInputError,
    InvalidParameterError,
    NegativeEigenvalueError,
)

EIGENVALUE_FLOOR = 1e-14
CLAMP_TOL = 1e-10
TRACE_TOL = 1e-10


@dataclass
class CoefficientBlocks:
    """Per-l radial coefficient matrices of one CI state.

    blocks[l][i, j] couples radial indices i = n - l - 1 and j = n' - l - 1;
    symmetric for S = 0, antisymmetric for S = 1.  The squared Frobenius
    norms over all l sum to the CI-vector norm (unity).
    """

    S: int
    blocks: dict[int, np.ndarray] = field(default_factory=dict)


def coefficient_blocks(state: CIState, configs: ConfigList) -> CoefficientBlocks:
    """Fold CI configuration amplitudes into per-l coefficient matrices.

    A distinct-orbital amplitude T splits as +-T/sqrt(2) over the (n, n')
    and (n', n) entries; a same-orbital singlet amplitude sits on the
    diagonal with weight T (the CSF's 1/sqrt(2) convention undone), so the
    reconstructed two-particle state is exactly the CI state.
    """
    if len(state.coefficients) != len(configs):
        raise InconsistentInputError(
            "state vector length does not match the configuration list"
        )
    if state.S != configs.S:
        raise InconsistentInputError("state and configuration spins differ")
    sign = 1.0 if configs.S == 0 else -1.0
    sizes = {}
    for cfg in configs:
        sizes[cfg.l] = max(sizes.get(cfg.l, 0), cfg.n2 - cfg.l)
    blocks = {l: np.zeros((m, m)) for l, m in sizes.items()}
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for cfg, amp in zip(configs, state.coefficients):
        i, j = cfg.n1 - cfg.l - 1, cfg.n2 - cfg.l - 1
        blk = blocks[cfg.l]
        if i == j:
            blk[i, i] += amp
        else:
            blk[i, j] += amp * inv_sqrt2
            blk[j, i] += sign * amp * inv_sqrt2
    return CoefficientBlocks(S=configs.S, blocks=blocks)


def blocks_to_coefficients(blocks: CoefficientBlocks,
                           configs: ConfigList) -> np.ndarray:
    """Inverse of coefficient_blocks (round-trip check helper)."""
    out = np.zeros(len(configs))
    sqrt2 = math.sqrt(2.0)
    for row, cfg in enumerate(configs):
        i, j = cfg.n1 - cfg.l - 1, cfg.n2 - cfg.l - 1
        blk = blocks.blocks[cfg.l]
        out[row] = blk[i, i] if i == j else blk[i, j] * sqrt2
    return out


def reduced_density_matrix(blocks: CoefficientBlocks) -> dict[int, np.ndarray]:
    """Per-l RDM blocks rho^l = C^l (C^l)^T / (2l+1), normalized to unit trace.

    Hermitian positive-semidefinite by construction; the weighted traces
    sum(2l+1) Tr rho^l add up to 1 for a normalized state (asserted to
    1e-10 before the final renormalization).
    """
    rho = {}
    total = 0.0
    for l, C in blocks.blocks.items():
        block = (C @ C.T) / (2 * l + 1)
        rho[l] = block
        total += (2 * l + 1) * np.trace(block)
    if abs(total - 1.0) > TRACE_TOL:
        raise InconsistentInputError(
            f"pre-normalization trace {total} deviates from 1 beyond {TRACE_TOL}"
        )
    for l in rho:
        rho[l] /= total
    return rho


@dataclass
class RdmSpectrum:
    """Occupation eigenvalues with angular degeneracies.

    Entries (lam, g, l): eigenvalue lam of the per-(l, m) block, degeneracy
    g = 2l+1, block label l.  sum(g * lam) = 1.
    """

    eigenvalues: np.ndarray
    degeneracies: np.ndarray
    l_labels: np.ndarray

    def weighted_sum(self, f) -> float:
        return float(np.dot(self.degeneracies, f(self.eigenvalues)))

    def purity(self) -> float:
        """Tr rho^2 = sum g lam^2."""
        return self.weighted_sum(np.square)


def rdm_spectrum(rho: dict[int, np.ndarray]) -> RdmSpectrum:
    """Eigendecompose every l block; clamp tiny negatives, attach 2l+1."""
    lams, gs, ls = [], [], []
    for l in sorted(rho):
        lam = np.linalg.eigvalsh(rho[l])
        if lam.min() < -CLAMP_TOL:
            raise NegativeEigenvalueError(
                f"RDM block l={l} has eigenvalue {lam.min()}"
            )
        lam = np.clip(lam, 0.0, 1.0)
        lams.append(lam[::-1])
        gs.append(np.full(len(lam), 2 * l + 1))
        ls.append(np.full(len(lam), l))
    return RdmSpectrum(
        eigenvalues=np.concatenate(lams),
        degeneracies=np.concatenate(gs).astype(float),
        l_labels=np.concatenate(ls),
    )


def state_spectrum(state: CIState, configs: ConfigList) -> RdmSpectrum:
    """Convenience: CI state -> occupation spectrum."""
    return rdm_spectrum(reduced_density_matrix(coefficient_blocks(state, configs)))


def von_neumann_entropy(spectrum: RdmSpectrum) -> float:
    """S_vN = -sum g lam log2 lam; eigenvalues below 1e-14 contribute zero."""
    lam = spectrum.eigenvalues
    g = spectrum.degeneracies
    mask = lam > EIGENVALUE_FLOOR
    lm = lam[mask]
    return float(-np.dot(g[mask], lm * np.log2(lm)))


def linear_entropy(spectrum: RdmSpectrum) -> float:
    """S_L = 1 - sum g lam^2."""
    return 1.0 - spectrum.purity()


def spin_weighted_entanglement(purity: float, spin_case: str) -> float:
    """Entanglement xi of the full (spatial x spin) two-fermion state.

    spin_case 'sz0' covers singlets and S_z = 0 triplets (spin purity 1/2):
    xi = 1 - purity.  spin_case 'triplet_polarized' covers S_z = +-1
    triplets (spin purity 1): xi = 1 - 2 * purity.
    """
    if not 0.0 < purity <= 1.0:
        raise InvalidParameterError(f"purity {purity} outside (0, 1]")
    if spin_case == "sz0":
        return 1.0 - purity
    if spin_case == "triplet_polarized":
        return 1.0 - 2.0 * purity
    raise InvalidParameterError(f"unknown spin case {spin_case!r}")
