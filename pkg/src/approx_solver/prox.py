"""
Prox Module
Block-separable regularizers and their closed-form proximal steps
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, ProxError, UnsupportedCombinationError


class RegularizerKind(str, Enum):
    ZERO = "none"
    L1 = "l1"
    BOX_LINEAR = "box-linear"


@dataclass(frozen=True)
class SeparableRegularizer:
    """
    psi(x) = sum_i psi_i(x^(i)), identical on every coordinate.

    ZERO:        psi_i = 0
    L1:          psi_i(t) = lam |t|
    BOX_LINEAR:  psi_i(t) = c t + indicator(lo <= t <= hi)
    """
    kind: RegularizerKind = RegularizerKind.ZERO
    lam: float = 0.0
    lo: float = 0.0
    hi: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if self.kind is RegularizerKind.L1 and self.lam < 0:
            raise ConfigurationError(f"lambda must be nonnegative, got {self.lam}")
        if self.kind is RegularizerKind.BOX_LINEAR and self.lo > self.hi:
            raise ConfigurationError(f"empty box [{self.lo}, {self.hi}]")

    @classmethod
    def zero(cls):
        return cls(RegularizerKind.ZERO)

    @classmethod
    def l1(cls, lam: float):
        return cls(RegularizerKind.L1, lam=lam)

    @classmethod
    def box_linear(cls, lo: float, hi: float, c: float):
        return cls(RegularizerKind.BOX_LINEAR, lo=lo, hi=hi, c=c)

    def contains(self, x) -> bool:
        """True when psi(x) is finite"""
        if self.kind is not RegularizerKind.BOX_LINEAR:
            return True
        x = np.asarray(x)
        return bool(np.all((x >= self.lo) & (x <= self.hi)))

    def project(self, x) -> np.ndarray:
        """Nearest point of dom psi"""
        x = np.asarray(x, dtype=np.float64)
        if self.kind is RegularizerKind.BOX_LINEAR:
            return np.clip(x, self.lo, self.hi)
        return x.copy()


def psi_value(reg: SeparableRegularizer, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if reg.kind is RegularizerKind.ZERO:
        return 0.0
    if reg.kind is RegularizerKind.L1:
        return float(reg.lam * np.abs(x).sum())
    if not reg.contains(x):
        return float("inf")
    return float(reg.c * x.sum())


def soft_threshold(x, threshold):
    return np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)


def prox_step(reg: SeparableRegularizer, z_i, g, a: float) -> np.ndarray:
    """
    Minimize <g, z> + (a/2)||z - z_i||^2 + psi_i(z) over one block

    Args:
        reg: Regularizer
        z_i: Current block value
        g: Block gradient
        a: Stiffness n theta v_i / tau, must be positive

    Returns:
        The unique minimizer, same shape as z_i
    """
    if not a > 0:
        raise ProxError(f"prox stiffness must be positive, got {a}")
    z_i = np.asarray(z_i, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    point = z_i - g / a
    if reg.kind is RegularizerKind.ZERO:
        return point
    if z_i.size != 1:
        raise UnsupportedCombinationError(
            f"closed-form prox for {reg.kind.value} needs unit blocks, got size {z_i.size}")
    if reg.kind is RegularizerKind.L1:
        return soft_threshold(point, reg.lam / a)
    return np.clip(z_i - (g + reg.c) / a, reg.lo, reg.hi)


def prox_increment(reg: SeparableRegularizer, z_i, g, a: float) -> np.ndarray:
    """
    argmin_t <g, t> + (a/2)||t||^2 + psi_i(z_i + t), i.e. the step t
    taken by the efficient iteration
    """
    return prox_step(reg, z_i, g, a) - np.asarray(z_i, dtype=np.float64)
