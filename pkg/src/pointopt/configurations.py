"""Interaction supports on the loop, the circle and the sphere."""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, SamplingError, UnsupportedConfigurationError

TWO_PI = 2.0 * math.pi
MIN_GAP = 1e-9
UNIT_TOL = 1e-12
SCHEMA_VERSION = 1
SHARP_SIZES = (2, 3, 4, 6, 12)


class Setting(str, enum.Enum):
    LOOP = "loop"
    CIRCLE2 = "circle2"
    CIRCLE3 = "circle3"
    SPHERE = "sphere"

    @property
    def nu(self) -> int:
        return {"loop": 1, "circle2": 2, "circle3": 3, "sphere": 3}[self.value]

    @property
    def angular(self) -> bool:
        """Sites are angles (loop and circles) rather than unit vectors."""
        return self is not Setting.SPHERE


@dataclass(frozen=True, eq=False)
class Configuration:
    """An immutable N-point interaction support.

    Loop and circle sites are strictly increasing angles in [0, 2*pi); sphere
    sites are unit 3-vectors.
    """

    setting: Setting
    sites: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        setting = Setting(self.setting)
        object.__setattr__(self, "setting", setting)
        sites = np.array(self.sites, dtype=float)
        if setting.angular:
            if sites.ndim != 1 or sites.size < 1:
                raise ArgumentError("angular sites must be a non-empty 1-d array")
            if np.any(sites < 0) or np.any(sites >= TWO_PI):
                raise ArgumentError("angles must lie in [0, 2*pi)")
            if sites.size > 1:
                gaps = np.diff(np.append(sites, sites[0] + TWO_PI))
                if np.any(gaps <= MIN_GAP):
                    raise ArgumentError("angles must be strictly increasing with gaps > 1e-9")
        else:
            if sites.ndim != 2 or sites.shape[1] != 3 or sites.shape[0] < 1:
                raise ArgumentError("sphere sites must have shape (N, 3)")
            if np.any(np.abs(np.linalg.norm(sites, axis=1) - 1.0) > UNIT_TOL):
                raise ArgumentError("sphere sites must be unit vectors")
            if len(sites) > 1 and _pairwise_min(sites) <= MIN_GAP:
                raise ArgumentError("sphere sites must be pairwise separated by > 1e-9")
        sites.setflags(write=False)
        object.__setattr__(self, "sites", sites)

    @property
    def N(self) -> int:
        return len(self.sites)

    @classmethod
    def from_angles(cls, setting, angles, seed=None):
        """Reduce angles mod 2*pi and sort them."""
        a = np.sort(np.mod(np.asarray(angles, dtype=float), TWO_PI))
        a[a >= TWO_PI] = 0.0
        return cls(setting, np.sort(a), seed)

    @classmethod
    def from_vectors(cls, vectors, seed=None):
        v = np.asarray(vectors, dtype=float)
        return cls(Setting.SPHERE, v / np.linalg.norm(v, axis=1, keepdims=True), seed)

    def points(self) -> np.ndarray:
        """Ambient Euclidean coordinates (circle sites in the x-y plane)."""
        if self.setting.angular:
            return np.column_stack([np.cos(self.sites), np.sin(self.sites)])
        return np.array(self.sites)

    def rotated(self, rotation) -> "Configuration":
        """Rigid rotation: an angle for angular settings, a 3x3 matrix on the sphere."""
        if self.setting.angular:
            return Configuration.from_angles(self.setting, self.sites + float(rotation), self.seed)
        return Configuration.from_vectors(self.sites @ np.asarray(rotation).T, self.seed)

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "setting": self.setting.value,
            "N": self.N,
            "sites": self.sites.tolist(),
        }
        if self.seed is not None:
            d["seed"] = self.seed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Configuration":
        version = d.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ArgumentError(f"unsupported schema_version {version}")
        setting = Setting(d["setting"])
        sites = d["sites"]
        if "N" in d and len(sites) != d["N"]:
            raise ArgumentError("N does not match the number of sites")
        # no re-normalisation, so a round trip is bit-exact
        return cls(setting, np.asarray(sites, dtype=float), d.get("seed"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class DistanceData:
    chordal: np.ndarray
    geodesic: np.ndarray | None = None
    angular: np.ndarray | None = None


@dataclass(frozen=True)
class SharpConfig:
    name: str
    N: int
    inner_products: tuple[float, ...]
    m: int = field(init=False)
    design_strength: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "m", len(self.inner_products))
        object.__setattr__(self, "design_strength", 2 * len(self.inner_products) - 1)


def _pairwise_min(points):
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    iu = np.triu_indices(len(points), 1)
    return dist[iu].min()


# ---------------------------------------------------------------------------
# Canonical and random configurations


def canonical_loop(N: int, setting=Setting.LOOP) -> Configuration:
    """Equidistant angles pi(2j-1)/N, j = 1..N."""
    if int(N) != N or N < 2:
        raise ArgumentError("N must be an integer >= 2")
    j = np.arange(1, N + 1)
    return Configuration(setting, math.pi * (2 * j - 1) / N)


def canonical_circle(N: int, setting=Setting.CIRCLE2) -> Configuration:
    """Vertices of the regular N-gon on the unit circle."""
    if Setting(setting) is Setting.SPHERE:
        raise ArgumentError("canonical_circle needs a circle setting")
    return canonical_loop(N, setting)


def canonical_config(setting, N: int) -> Configuration:
    """The conjectured or proven maximiser for a setting: N-gon or sharp solid."""
    setting = Setting(setting)
    if setting is Setting.SPHERE:
        return sharp_sphere(N)[0]
    return canonical_loop(N, setting)


_PHI = (1.0 + math.sqrt(5.0)) / 2.0


def _icosahedron():
    v = []
    for s1, s2 in itertools.product((1.0, -1.0), repeat=2):
        base = (0.0, s1, s2 * _PHI)
        for shift in range(3):
            v.append(base[-shift:] + base[:-shift] if shift else base)
    return np.array(v) / math.sqrt(1.0 + _PHI**2)


def sharp_sphere(N: int) -> tuple[Configuration, SharpConfig]:
    """Universally optimal sphere configuration in a fixed reference orientation."""
    if N == 2:
        pts = [[0, 0, 1], [0, 0, -1]]
        info = SharpConfig("antipodal-pair", 2, (-1.0,))
    elif N == 3:
        a = TWO_PI / 3
        pts = [[math.cos(j * a), math.sin(j * a), 0.0] for j in range(3)]
        info = SharpConfig("triangle", 3, (-0.5,))
    elif N == 4:
        pts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3.0)
        info = SharpConfig("tetrahedron", 4, (-1.0 / 3.0,))
    elif N == 6:
        pts = np.vstack([np.eye(3), -np.eye(3)])
        info = SharpConfig("octahedron", 6, (-1.0, 0.0))
    elif N == 12:
        pts = _icosahedron()
        r5 = 1.0 / math.sqrt(5.0)
        info = SharpConfig("icosahedron", 12, (-1.0, -r5, r5))
    else:
        raise UnsupportedConfigurationError(
            f"N={N} has no sharp configuration on the sphere; only N in {SHARP_SIZES} "
            "are universally optimal (cube and dodecahedron do not qualify for universality)"
        )
    return Configuration.from_vectors(pts), info


def random_config(setting, N: int, seed: int, max_attempts: int = 1000) -> Configuration:
    """Uniform i.i.d. sites, deterministic in ``seed``."""
    setting = Setting(setting)
    if int(N) != N or N < 2:
        raise ArgumentError("N must be an integer >= 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        try:
            if setting.angular:
                return Configuration.from_angles(setting, rng.uniform(0.0, TWO_PI, N), seed)
            g = rng.standard_normal((N, 3))
            return Configuration.from_vectors(g, seed)
        except ArgumentError:
            continue
    raise SamplingError(f"could not draw {N} separated sites in {max_attempts} attempts")


def random_rotation(rng) -> np.ndarray:
    """Haar-random element of SO(3)."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


# ---------------------------------------------------------------------------
# Distances, congruence, designs


def distances(config: Configuration) -> DistanceData:
    if config.setting.angular:
        delta = np.abs(config.sites[:, None] - config.sites[None, :])
        angle = np.minimum(delta, TWO_PI - delta)
        chord = 2.0 * np.sin(0.5 * angle)
        if config.setting is Setting.LOOP:
            return DistanceData(chordal=chord, geodesic=angle)
        return DistanceData(chordal=chord, angular=angle)
    p = config.sites
    diff = p[:, None, :] - p[None, :, :]
    return DistanceData(chordal=np.sqrt((diff**2).sum(-1)))


def distance_multiset(config: Configuration) -> np.ndarray:
    """Sorted chordal distances over unordered pairs."""
    chord = distances(config).chordal
    iu = np.triu_indices(config.N, 1)
    return np.sort(chord[iu])


def gram_spectrum(config: Configuration) -> np.ndarray:
    p = config.points()
    return np.sort(np.linalg.eigvalsh(p @ p.T))


def is_congruent(a: Configuration, b: Configuration, tol: float = 1e-8) -> bool:
    """Operational congruence: equal distance multisets (and Gram spectra on the sphere)."""
    if a.setting is not b.setting or a.N != b.N:
        raise ArgumentError("congruence needs configurations with equal setting and N")
    if np.max(np.abs(distance_multiset(a) - distance_multiset(b)), initial=0.0) > tol:
        return False
    if a.setting is Setting.SPHERE:
        return bool(np.max(np.abs(gram_spectrum(a) - gram_spectrum(b))) <= tol)
    return True


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def monomial_sphere_average(a: int, b: int, c: int) -> float:
    """Average of x^a y^b z^c over the unit sphere with normalised surface measure."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    num = _double_factorial(a - 1) * _double_factorial(b - 1) * _double_factorial(c - 1)
    return num / _double_factorial(a + b + c + 1)


def spherical_design_strength(config: Configuration, M_max: int = 8, tol: float = 1e-10) -> int:
    """Largest M <= M_max for which ``config`` is a spherical M-design (0 if none)."""
    if config.setting is not Setting.SPHERE:
        raise ArgumentError("design strength is defined for sphere configurations")
    if M_max < 0 or M_max > 8:
        raise ArgumentError("M_max must lie in 0..8")
    x, y, z = config.sites.T
    strength = 0
    for degree in range(1, M_max + 1):
        for a in range(degree + 1):
            for b in range(degree - a + 1):
                c = degree - a - b
                avg = float(np.mean(x**a * y**b * z**c))
                if abs(avg - monomial_sphere_average(a, b, c)) > tol:
                    return strength
        strength = degree
    return strength


def inner_product_set(config: Configuration, decimals: int = 9) -> list[float]:
    """Distinct inner products between distinct sphere sites."""
    g = config.sites @ config.sites.T
    iu = np.triu_indices(config.N, 1)
    return sorted(set(np.round(g[iu], decimals).tolist()))


def consecutive_gaps(config: Configuration) -> np.ndarray:
    """Cyclic gaps between consecutive angles, including the wrap-around gap."""
    if not config.setting.angular:
        raise ArgumentError("gaps are defined for angular settings")
    s = config.sites
    return np.diff(np.append(s, s[0] + TWO_PI))


def named_config(name: str, setting=None, N: int | None = None) -> Configuration:
    """Built-in configurations addressable by name from the CLI."""
    solids = {"pair": 2, "antipodal-pair": 2, "triangle": 3, "tetrahedron": 4,
              "octahedron": 6, "icosahedron": 12}
    if name in solids:
        return sharp_sphere(solids[name])[0]
    if name == "canonical":
        if setting is None or N is None:
            raise ArgumentError("'canonical' needs a setting and N")
        return canonical_config(setting, N)
    raise ArgumentError(f"unknown configuration name {name!r}")
