"""Tensor-product state of particle mode, spin, wall angle and (optionally) wall position.

Units: hbar = 1 throughout. Angular momenta come out in units of hbar and
linear momenta in the same units as the configured box momentum p0.

Grid conventions
----------------
The wall angle lives on ``G`` points ``theta_j = -pi + 2 pi j / G``. Packet samples
are discrete amplitudes with ``sum |phi_j|^2 = 1``, so a quadrature of ``f(theta)``
against ``|Phi|^2`` is simply ``sum f(theta_j) |phi_j|^2``. The Fourier view is the
orthonormal DFT in fftshift order, i.e. modes ``m = -G/2 .. G/2 - 1``.

A ``JointState`` only stores the rotor columns where the initial packet is
nonzero (``rotor_support``). Every period is diagonal in the wall angle, so the
other columns remain exactly zero and are never allocated.
"""
import logging
from typing import Iterable, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from cheshire.constants import IDENTITY_TOL, POSTSELECT_FLOOR, SUPPORT_TOL, UNITARY_TOL
from cheshire.errors import DimensionMismatch, NormalizationError, PostSelectionFailed

logger = logging.getLogger("cheshire.state")

LEFT = 0
RIGHT = 1
FIRST_OUT = 2

RotorFamily = Literal["gaussian", "raised_cosine", "skewed"]
WallFamily = Literal["raised_cosine", "gaussian"]


class ParticleMode(BaseModel):
    model_config = ConfigDict(frozen=True)

    tag: Literal["Left", "Right", "Out"]
    k: int = Field(default=0, ge=0)

    @classmethod
    def left(cls) -> "ParticleMode":
        return cls(tag="Left")

    @classmethod
    def right(cls) -> "ParticleMode":
        return cls(tag="Right")

    @classmethod
    def out(cls, k: int) -> "ParticleMode":
        return cls(tag="Out", k=k)

    def index(self, n_rounds: int) -> int:
        if self.tag == "Left":
            return LEFT
        if self.tag == "Right":
            return RIGHT
        if not 1 <= self.k <= 2 * n_rounds:
            raise IndexError(f"Out({self.k}) outside 1..{2 * n_rounds}")
        return FIRST_OUT + self.k - 1


def mode_count(n_rounds: int) -> int:
    return 2 * n_rounds + 2


def mode_space(n_rounds: int) -> list[ParticleMode]:
    return [ParticleMode.left(), ParticleMode.right()] + [
        ParticleMode.out(k) for k in range(1, 2 * n_rounds + 1)
    ]


class SpinVector:
    """Spin-1/2 coefficients in the z basis."""

    def __init__(self, up_z: complex, down_z: complex):
        self.coefficients = np.array([up_z, down_z], dtype=complex)

    @property
    def up_z_amp(self) -> complex:
        return complex(self.coefficients[0])

    @property
    def down_z_amp(self) -> complex:
        return complex(self.coefficients[1])

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2)))

    @classmethod
    def up_z(cls) -> "SpinVector":
        return cls(1.0, 0.0)

    @classmethod
    def down_z(cls) -> "SpinVector":
        return cls(0.0, 1.0)

    @classmethod
    def up_x(cls) -> "SpinVector":
        return cls(1 / np.sqrt(2), 1 / np.sqrt(2))

    @classmethod
    def down_x(cls) -> "SpinVector":
        return cls(1 / np.sqrt(2), -1 / np.sqrt(2))

    @classmethod
    def up_theta(cls, theta: float) -> "SpinVector":
        return cls(np.cos(theta / 2), -1j * np.sin(theta / 2))

    @classmethod
    def down_theta(cls, theta: float) -> "SpinVector":
        return cls(-1j * np.sin(theta / 2), np.cos(theta / 2))

    @classmethod
    def named(cls, name: str) -> "SpinVector":
        factories = {"up_z": cls.up_z, "down_z": cls.down_z, "up_x": cls.up_x, "down_x": cls.down_x}
        if name not in factories:
            raise ValueError(f"Unknown spin state: {name}")
        return factories[name]()

    def overlap(self, other: "SpinVector") -> complex:
        """<self|other>"""
        return complex(np.vdot(self.coefficients, other.coefficients))

    def __repr__(self):
        return f"SpinVector({self.up_z_amp:.6g}, {self.down_z_amp:.6g})"


def rotor_grid(grid_size: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(grid_size) / grid_size


def _wrapped(values: np.ndarray) -> np.ndarray:
    return (values + np.pi) % (2 * np.pi) - np.pi


class RotorPacket:
    """Wave function of the wall angle, with grid and Fourier views."""

    def __init__(self, theta_samples: np.ndarray, delta_theta: float | None = None, center: float = 0.0):
        samples = np.asarray(theta_samples, dtype=complex)
        grid_size = samples.shape[0]
        if grid_size < 2 or grid_size & (grid_size - 1):
            raise ValueError(f"Rotor grid size must be a power of two, got {grid_size}")
        self.theta_samples = samples
        self.delta_theta = delta_theta
        self.center = center

    @classmethod
    def build(
        cls,
        grid_size: int = 256,
        delta_theta: float = 0.05,
        family: RotorFamily = "gaussian",
        center: float = 0.0,
    ) -> "RotorPacket":
        theta = rotor_grid(grid_size)
        offset = _wrapped(theta - center)
        inside = np.abs(offset) <= delta_theta
        u = np.where(inside, offset, 0.0)
        if family == "gaussian":
            sigma = delta_theta / 3
            shape = np.exp(-(u**2) / (4 * sigma**2))
        elif family == "raised_cosine":
            shape = np.cos(np.pi * u / (2 * delta_theta)) ** 2
        elif family == "skewed":
            shape = np.cos(np.pi * u / (2 * delta_theta)) ** 2 * (1 + 0.6 * u / delta_theta)
        else:
            raise ValueError(f"Unknown rotor packet family: {family}")
        samples = np.where(inside, shape, 0.0).astype(complex)
        total = np.sqrt(np.sum(np.abs(samples) ** 2))
        if total == 0:
            raise ValueError(f"No grid point of a {grid_size}-point grid falls inside |theta| <= {delta_theta}")
        packet = cls(samples / total, delta_theta=delta_theta, center=center)
        logger.debug(
            f"Built {family} rotor packet: G={grid_size}, delta_theta={delta_theta}, "
            f"support={packet.support.size} points, edge_weight={packet.edge_weight:.2e}"
        )
        return packet

    @classmethod
    def from_samples(cls, samples: np.ndarray, delta_theta: float | None = None) -> "RotorPacket":
        samples = np.asarray(samples, dtype=complex)
        return cls(samples / np.sqrt(np.sum(np.abs(samples) ** 2)), delta_theta=delta_theta)

    @property
    def grid_size(self) -> int:
        return self.theta_samples.shape[0]

    @property
    def theta(self) -> np.ndarray:
        return rotor_grid(self.grid_size)

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.grid_size

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.grid_size // 2, self.grid_size // 2)

    @property
    def fourier_view(self) -> np.ndarray:
        return np.fft.fftshift(np.fft.fft(self.theta_samples, norm="ortho"))

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.theta_samples) ** 2)))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.theta_samples)

    @property
    def edge_weight(self) -> float:
        """Spectral weight in the outermost Fourier mode pair."""
        view = self.fourier_view
        return float(np.abs(view[0]) ** 2 + np.abs(view[-1]) ** 2)

    def density(self) -> np.ndarray:
        return np.abs(self.theta_samples) ** 2

    def times_phase(self, k: float) -> "RotorPacket":
        """Packet multiplied by exp(-i k theta)."""
        return RotorPacket(
            self.theta_samples * np.exp(-1j * k * self.theta), delta_theta=self.delta_theta, center=self.center
        )

    def __repr__(self):
        return f"RotorPacket(G={self.grid_size}, delta_theta={self.delta_theta}, support={self.support.size})"


class WallPacket:
    """Wave function of the wall position x_w on a periodic grid over [-X, X)."""

    def __init__(self, x_samples: np.ndarray, extent: float, delta_x: float, box_momentum: float = 0.0):
        self.x_samples = np.asarray(x_samples, dtype=complex)
        self.extent = extent
        self.delta_x = delta_x
        self.box_momentum = box_momentum

    @classmethod
    def build(
        cls,
        grid_size: int = 1024,
        delta_x: float = 1.0,
        box_momentum: float = 0.0,
        family: WallFamily = "raised_cosine",
        extent: float | None = None,
    ) -> "WallPacket":
        extent = 8 * delta_x if extent is None else extent
        x = -extent + 2 * extent * np.arange(grid_size) / grid_size
        inside = np.abs(x) <= delta_x
        u = np.where(inside, x, 0.0)
        if family == "raised_cosine":
            shape = np.cos(np.pi * u / (2 * delta_x)) ** 2
        elif family == "gaussian":
            sigma = delta_x / 3
            shape = np.exp(-(u**2) / (4 * sigma**2))
        else:
            raise ValueError(f"Unknown wall packet family: {family}")
        samples = np.where(inside, shape, 0.0).astype(complex)
        return cls(samples / np.sqrt(np.sum(np.abs(samples) ** 2)), extent, delta_x, box_momentum)

    @property
    def grid_size(self) -> int:
        return self.x_samples.shape[0]

    @property
    def x(self) -> np.ndarray:
        return -self.extent + 2 * self.extent * np.arange(self.grid_size) / self.grid_size

    @property
    def spacing(self) -> float:
        return 2 * self.extent / self.grid_size

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.grid_size, d=self.spacing)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.x_samples) ** 2)))

    def reflection_phase(self) -> np.ndarray:
        """exp(-i 2 p0 x_w), the factor a reflection off the wall stamps on the state."""
        if self.box_momentum == 0.0:
            return np.ones(self.grid_size, dtype=complex)
        return np.exp(-2j * self.box_momentum * self.x)

    def boosted(self, q: float) -> "WallPacket":
        """Packet multiplied by exp(i q x_w)."""
        return WallPacket(self.x_samples * np.exp(1j * q * self.x), self.extent, self.delta_x, self.box_momentum)

    def __repr__(self):
        return f"WallPacket(P={self.grid_size}, delta_x={self.delta_x}, p0={self.box_momentum})"


class JointState:
    """Amplitudes indexed (particle mode, spin z, rotor support column[, wall grid])."""

    def __init__(
        self,
        amplitudes: np.ndarray,
        n_rounds: int,
        rotor_grid_size: int,
        rotor_support: np.ndarray,
        wall: WallPacket | None = None,
    ):
        self.amplitudes = amplitudes
        self.n_rounds = n_rounds
        self.rotor_grid_size = rotor_grid_size
        self.rotor_support = np.asarray(rotor_support, dtype=int)
        self.wall = wall
        expected = (mode_count(n_rounds), 2, self.rotor_support.size) + (() if wall is None else (wall.grid_size,))
        if amplitudes.shape != expected:
            raise DimensionMismatch(f"Amplitude shape {amplitudes.shape} does not match {expected}")

    @classmethod
    def initial(
        cls,
        n_rounds: int,
        rotor: RotorPacket,
        spin: SpinVector | None = None,
        mode: ParticleMode | None = None,
        wall: WallPacket | None = None,
    ) -> "JointState":
        """|mode>|spin>|Phi>[|Psi>], by default |L>|up_z>|Phi>."""
        spin = SpinVector.up_z() if spin is None else spin
        mode = ParticleMode.left() if mode is None else mode
        support = rotor.support
        amplitudes = np.zeros((mode_count(n_rounds), 2, support.size), dtype=complex)
        amplitudes[mode.index(n_rounds)] = np.outer(spin.coefficients, rotor.theta_samples[support])
        if wall is not None:
            amplitudes = amplitudes[..., np.newaxis] * wall.x_samples
        return cls(amplitudes, n_rounds, rotor.grid_size, support, wall)

    @property
    def dims(self) -> tuple[int, ...]:
        return (mode_count(self.n_rounds), 2, self.rotor_grid_size) + (
            () if self.wall is None else (self.wall.grid_size,)
        )

    @property
    def theta(self) -> np.ndarray:
        """Wall angles of the stored rotor columns."""
        return rotor_grid(self.rotor_grid_size)[self.rotor_support]

    def with_amplitudes(self, amplitudes: np.ndarray) -> "JointState":
        return JointState(amplitudes, self.n_rounds, self.rotor_grid_size, self.rotor_support, self.wall)

    def branch(self, mode: ParticleMode, spin_bra: SpinVector) -> np.ndarray:
        """<mode, spin|state>, an array over (rotor support[, wall grid])."""
        block = self.amplitudes[mode.index(self.n_rounds)]
        return np.tensordot(spin_bra.coefficients.conj(), block, axes=(0, 0))

    def full_rotor(self, columns: np.ndarray) -> np.ndarray:
        """Scatter values on the stored support back onto the full rotor grid (axis 0)."""
        full = np.zeros((self.rotor_grid_size,) + columns.shape[1:], dtype=columns.dtype)
        full[self.rotor_support] = columns
        return full

    def __repr__(self):
        return f"JointState(dims={self.dims}, stored={self.amplitudes.shape})"


def norm(state: JointState) -> float:
    return float(np.sqrt(np.sum(np.abs(state.amplitudes) ** 2)))


def project(
    state: JointState,
    mode_filter: Iterable[ParticleMode],
    spin_bra: SpinVector | None = None,
) -> tuple[float, JointState]:
    """Apply the projector onto ``mode_filter`` (and ``spin_bra`` if given).

    Returns the probability of the outcome and the renormalized post-measurement
    state; ``state`` itself is not modified.
    """
    if spin_bra is not None and abs(spin_bra.norm - 1) > IDENTITY_TOL:
        raise NormalizationError(f"Spin bra must be unit norm, got {spin_bra.norm}")
    keep = sorted({mode.index(state.n_rounds) for mode in mode_filter})
    projected = np.zeros_like(state.amplitudes)
    projected[keep] = state.amplitudes[keep]
    if spin_bra is not None:
        ket = spin_bra.coefficients
        overlap = np.tensordot(ket.conj(), projected, axes=(0, 1))
        projected = np.moveaxis(np.multiply.outer(ket, overlap), 0, 1)
    probability = float(np.sum(np.abs(projected) ** 2))
    if probability < POSTSELECT_FLOOR:
        logger.error(f"Post-selection failed: probability {probability:.3e}")
        raise PostSelectionFailed("Post-selection failed", {"probability": probability})
    reduced = state.with_amplitudes(projected / np.sqrt(probability))
    logger.debug(f"Projected onto {len(keep)} mode(s): probability={probability:.12f}")
    return probability, reduced


def rotor_marginal(state: JointState) -> np.ndarray:
    weights = np.abs(state.amplitudes) ** 2
    axes = (0, 1) + tuple(range(3, weights.ndim))
    return state.full_rotor(np.sum(weights, axis=axes))


def require_unit_norm(value: float, what: str):
    if abs(value - 1) > UNITARY_TOL:
        logger.error(f"{what} is not normalized (norm={value:.15f})")
        raise NormalizationError(f"{what} is not normalized (norm={value:.15f})")


def expectation_Lx(packet: RotorPacket) -> float:
    """<L_x> = sum_m m |c_m|^2 in units of hbar."""
    require_unit_norm(packet.norm, "Rotor packet")
    return float(np.sum(packet.modes * np.abs(packet.fourier_view) ** 2))


def expectation_Lx_quadrature(packet: RotorPacket) -> float:
    """<L_x> from the grid view, sum conj(phi) (-i d/dtheta) phi with a spectral derivative."""
    require_unit_norm(packet.norm, "Rotor packet")
    m = np.fft.fftfreq(packet.grid_size, d=1.0 / packet.grid_size)
    derivative = np.fft.ifft(m * np.fft.fft(packet.theta_samples))
    return float(np.real(np.vdot(packet.theta_samples, derivative)))


def expectation_p(packet: WallPacket) -> float:
    """<p> of the wall, standard (fftfreq) wavenumber ordering."""
    require_unit_norm(packet.norm, "Wall packet")
    spectrum = np.abs(np.fft.fft(packet.x_samples, norm="ortho")) ** 2
    return float(np.sum(packet.wavenumbers * spectrum))


def joint_expectation_Lx(state: JointState) -> float:
    """<L_x> of the wall angle on a normalized joint state."""
    require_unit_norm(norm(state), "Joint state")
    modes = np.fft.fftfreq(state.rotor_grid_size, d=1.0 / state.rotor_grid_size)
    total = 0.0
    for block in _occupied_blocks(state):
        spectrum = np.abs(np.fft.fft(state.full_rotor(block), axis=0, norm="ortho")) ** 2
        total += float(np.sum(np.tensordot(modes, spectrum, axes=(0, 0))))
    return total


def joint_expectation_p(state: JointState) -> float:
    """<p> of the wall position factor on a normalized joint state."""
    if state.wall is None:
        raise DimensionMismatch("State carries no wall-position factor")
    require_unit_norm(norm(state), "Joint state")
    k = state.wall.wavenumbers
    total = 0.0
    for block in _occupied_blocks(state):
        spectrum = np.abs(np.fft.fft(block, axis=-1, norm="ortho")) ** 2
        total += float(np.sum(spectrum * k))
    return total


def _occupied_blocks(state: JointState):
    """Yield the (rotor[, wall]) blocks of every (mode, spin) pair that carries amplitude."""
    for mode_index in range(state.amplitudes.shape[0]):
        for spin_index in range(2):
            block = state.amplitudes[mode_index, spin_index]
            if np.any(block):
                yield block


def fidelity(a, b) -> float:
    """|<a|b>|^2 for two packets or two joint states of the same kind and dims."""
    if type(a) is not type(b):
        raise DimensionMismatch(f"Cannot compare {type(a).__name__} with {type(b).__name__}")
    if isinstance(a, RotorPacket):
        left, right = a.theta_samples, b.theta_samples
    elif isinstance(a, WallPacket):
        left, right = a.x_samples, b.x_samples
    elif isinstance(a, JointState):
        if a.dims != b.dims or not np.array_equal(a.rotor_support, b.rotor_support):
            raise DimensionMismatch(f"Joint states differ: {a.dims} vs {b.dims}")
        left, right = a.amplitudes, b.amplitudes
    else:
        raise TypeError(f"fidelity is not defined for {type(a).__name__}")
    if left.shape != right.shape:
        raise DimensionMismatch(f"Shapes differ: {left.shape} vs {right.shape}")
    for values, what in ((left, "first argument"), (right, "second argument")):
        require_unit_norm(float(np.sqrt(np.sum(np.abs(values) ** 2))), f"Fidelity {what}")
    return float(np.abs(np.vdot(left, right)) ** 2)


def vanishes_outside(packet: RotorPacket) -> bool:
    """True when the samples vanish outside [center - delta_theta, center + delta_theta]."""
    if packet.delta_theta is None:
        return True
    outside = np.abs(_wrapped(packet.theta - packet.center)) > packet.delta_theta
    return bool(np.all(np.abs(packet.theta_samples[outside]) < SUPPORT_TOL))
