"""Extended state observers in the error domain.

Three extended-state representations are supported, each with two observer
architectures:

* ``standard3``  -- state [e, de, f], f the lumped total disturbance;
* ``extended5``  -- state [e, de, f, df, ddf], two extra disturbance derivatives;
* ``resonant5``  -- state [e, de, f, df_o, ddf_o], where the oscillatory
  disturbance component obeys the harmonic model ddf_o = -omega_r**2 * f_o.

The :class:`LuenbergerEso` places all observer poles at ``-omega_o`` through
binomial output-injection gains. The :class:`AmObserver` is the low-power
cascade alternative (Astolfi/Marconi construction): second-order blocks whose
injection gains grow at most like ``omega_o**2``, which limits measurement
noise amplification at high bandwidth.

Both observers consume the measured control error ``y = e + w`` and the
normalized input ``u_eff = (tau - h_m_hat)/J_hat``, and both expose the
estimate triple (e_hat, de_hat, f_hat) used by the controller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

STANDARD3 = "standard3"
EXTENDED5 = "extended5"
RESONANT5 = "resonant5"
_VARIANTS = (STANDARD3, EXTENDED5, RESONANT5)


@dataclass(frozen=True)
class EsoStructure:
    """Extended-state representation selector; omega_r only matters for resonant5."""

    variant: str
    omega_r: float = 0.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown structure variant {self.variant!r}")
        if self.variant == RESONANT5 and not self.omega_r > 0.0:
            raise ValueError("resonant5 requires omega_r > 0")

    @property
    def n(self) -> int:
        return 3 if self.variant == STANDARD3 else 5

    @classmethod
    def standard3(cls) -> "EsoStructure":
        return cls(STANDARD3)

    @classmethod
    def extended5(cls) -> "EsoStructure":
        return cls(EXTENDED5)

    @classmethod
    def resonant5(cls, omega_r: float) -> "EsoStructure":
        return cls(RESONANT5, omega_r)


@dataclass(frozen=True)
class EsoInput:
    """Per-instant observer inputs: noisy error measurement and normalized torque."""

    y: float
    u_eff: float


def luenberger_gains(n: int, omega_o: float) -> np.ndarray:
    """Binomial gain vector placing all n observer poles at -omega_o."""
    if n not in (3, 5):
        raise ValueError(f"unsupported observer order {n}; expected 3 or 5")
    if not omega_o > 0.0:
        raise ValueError("omega_o must be positive")
    return np.array([math.comb(n, k) * omega_o**k for k in range(1, n + 1)])


def structure_matrices(s: EsoStructure) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """State-space quadruple (A, b, c, d) of the selected extended-state model.

    A is the n x n chain (shift) matrix, with the last row replaced by the
    harmonic-oscillator coupling [0, 0, 0, -omega_r**2, 0] for resonant5.
    b injects the normalized input into the rate equation, c reads the first
    state, and d marks where the unmodeled disturbance derivative enters.
    """
    n = s.n
    a = np.zeros((n, n))
    for i in range(n - 1):
        a[i, i + 1] = 1.0
    b = np.zeros((n, 1))
    b[1, 0] = 1.0
    c = np.zeros((1, n))
    c[0, 0] = 1.0
    d = np.zeros((n, 1))
    if s.variant == RESONANT5:
        a[4, 3] = -s.omega_r**2
        d[2, 0] = 1.0
    else:
        d[n - 1, 0] = 1.0
    return a, b, c, d


def am_default_gains(n: int) -> list[np.ndarray]:
    """Per-block gain pairs for the low-power cascade observer."""
    if n == 3:
        pairs = [(0.8, 0.48), (0.8, 0.16)]
    elif n == 5:
        pairs = [(0.6, 0.36), (0.6, 0.135), (0.6, 0.06), (0.6, 0.025)]
    else:
        raise ValueError(f"unsupported observer order {n}; expected 3 or 5")
    return [np.array(p) for p in pairs]


@dataclass
class LuenbergerEso:
    """High-gain Luenberger observer with all poles at -omega_o."""

    structure: EsoStructure
    omega_o: float
    state: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not self.omega_o > 0.0:
            raise ValueError("omega_o must be positive")
        self.gains = luenberger_gains(self.structure.n, self.omega_o)
        a, b, c, d = structure_matrices(self.structure)
        self.a = a
        self.b = b[:, 0]
        self.c = c[0]
        self.d = d[:, 0]
        if self.state is None:
            self.state = np.zeros(self.structure.n)
        else:
            self.state = np.asarray(self.state, dtype=float).copy()
            if self.state.shape != (self.structure.n,):
                raise ValueError(f"state must have length {self.structure.n}")

    @property
    def n(self) -> int:
        return self.structure.n

    def derivative(self, inp: EsoInput, state: np.ndarray | None = None) -> np.ndarray:
        """dx_hat/dt = A x_hat - b u_eff + l (y - c x_hat)."""
        x = self.state if state is None else np.asarray(state, dtype=float)
        return self.a @ x - self.b * inp.u_eff + self.gains * (inp.y - x[0])

    def estimates(self, state: np.ndarray | None = None) -> tuple[float, float, float]:
        """(e_hat, de_hat, f_hat); the third state is the total disturbance."""
        x = self.state if state is None else state
        return float(x[0]), float(x[1]), float(x[2])

    def linear_realization(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(F, g_y, g_u) with dx_hat/dt = F x_hat + g_y y + g_u u_eff."""
        f = self.a - np.outer(self.gains, self.c)
        return f, self.gains.copy(), -self.b.copy()


@dataclass
class AmObserver:
    """Low-power cascade observer (Astolfi/Marconi form).

    State xi concatenates n-1 second-order blocks eta_1..eta_{n-1}; the
    extended-state estimate is read out as [eta_1(1), eta_1(2), eta_2(2), ...].
    Block i is driven by the local estimation error: eps_1 = y - eta_1(1) and
    eps_i = eta_{i-1}(2) - eta_i(1), with injection gains omega_o*alpha_i1 and
    omega_o**2*alpha_i2.
    """

    structure: EsoStructure
    omega_o: float
    alphas: list[np.ndarray] = field(default=None)  # type: ignore[assignment]
    state: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not self.omega_o > 0.0:
            raise ValueError("omega_o must be positive")
        n = self.structure.n
        if self.alphas is None:
            self.alphas = am_default_gains(n)
        else:
            self.alphas = [np.asarray(a, dtype=float) for a in self.alphas]
            if len(self.alphas) != n - 1 or any(a.shape != (2,) for a in self.alphas):
                raise ValueError(f"need {n - 1} gain pairs of length 2")
        if self.state is None:
            self.state = np.zeros(2 * (n - 1))
        else:
            self.state = np.asarray(self.state, dtype=float).copy()
            if self.state.shape != (2 * (n - 1),):
                raise ValueError(f"state must have length {2 * (n - 1)}")

    @property
    def n(self) -> int:
        return self.structure.n

    def _phi(self, i: int, successor: float, u_eff: float, xi: np.ndarray) -> float:
        """Chain map of the selected structure with the successor state injected."""
        n = self.structure.n
        if i == 2:
            return successor - u_eff
        if i == n:
            if self.structure.variant == RESONANT5:
                return -self.structure.omega_r**2 * xi[5]
            return 0.0
        return successor

    def derivative(self, inp: EsoInput, state: np.ndarray | None = None) -> np.ndarray:
        xi = self.state if state is None else np.asarray(state, dtype=float)
        n = self.structure.n
        w = self.omega_o
        w2 = w * w
        out = np.empty(2 * (n - 1))
        for i in range(1, n):
            eps = (inp.y - xi[0]) if i == 1 else (xi[2 * i - 3] - xi[2 * i - 2])
            a1, a2 = self.alphas[i - 1]
            top = self._phi(i, xi[2 * i - 1], inp.u_eff, xi)
            if i < n - 1:
                bot = self._phi(i + 1, xi[2 * i + 1], inp.u_eff, xi)
            else:
                bot = self._phi(n, 0.0, inp.u_eff, xi)
            out[2 * i - 2] = top + w * a1 * eps
            out[2 * i - 1] = bot + w2 * a2 * eps
        return out

    def extract(self, state: np.ndarray | None = None) -> np.ndarray:
        """Extended-state estimate z_hat = L xi (block-diagonal read-out)."""
        xi = self.state if state is None else np.asarray(state, dtype=float)
        n = self.structure.n
        out = np.empty(n)
        out[0] = xi[0]
        out[1] = xi[1]
        for k in range(2, n):
            out[k] = xi[2 * k - 1]
        return out

    def estimates(self, state: np.ndarray | None = None) -> tuple[float, float, float]:
        z = self.extract(state)
        return float(z[0]), float(z[1]), float(z[2])

    def linear_realization(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(F, g_y, g_u) assembled by probing the block dynamics with basis states."""
        m = 2 * (self.structure.n - 1)
        zero = np.zeros(m)
        f = np.empty((m, m))
        for j in range(m):
            basis = np.zeros(m)
            basis[j] = 1.0
            f[:, j] = self.derivative(EsoInput(0.0, 0.0), basis)
        g_y = self.derivative(EsoInput(1.0, 0.0), zero)
        g_u = self.derivative(EsoInput(0.0, 1.0), zero)
        return f, g_y, g_u


def make_observer(
    tag: str,
    omega_o: float,
    omega_r: float | None = None,
    alphas: list[np.ndarray] | None = None,
) -> LuenbergerEso | AmObserver:
    """Build an observer from its benchmark tag.

    Tags: eso3, eso5, reso (Luenberger) and am_eso3, am_eso5, am_reso
    (low-power cascade). Resonant tags require omega_r.
    """
    base = tag[3:] if tag.startswith("am_") else tag
    if base == "eso3":
        structure = EsoStructure.standard3()
    elif base == "eso5":
        structure = EsoStructure.extended5()
    elif base == "reso":
        if omega_r is None:
            raise ValueError("resonant observers require omega_r")
        structure = EsoStructure.resonant5(omega_r)
    else:
        raise ValueError(f"unknown observer tag {tag!r}")
    if tag.startswith("am_"):
        return AmObserver(structure, omega_o, alphas=alphas)
    return LuenbergerEso(structure, omega_o)


def observer_tag(obs: LuenbergerEso | AmObserver) -> str:
    """Benchmark tag of an observer instance (inverse of make_observer)."""
    base = {STANDARD3: "eso3", EXTENDED5: "eso5", RESONANT5: "reso"}[obs.structure.variant]
    return f"am_{base}" if isinstance(obs, AmObserver) else base
