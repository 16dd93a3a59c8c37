"""Partitions, Maya diagrams, charged partitions and configurations of
particles and holes.

Half-integers are stored doubled (2p is an odd integer) so that all
combinatorics is exact integer arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools

from .errors import MalformedDiagram

PLUS, MINUS = 1, -1
COLORS = (PLUS, MINUS)


@dataclass(frozen=True, order=True)
class Partition:
    rows: tuple = ()

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows):
            raise MalformedDiagram("partition rows must be positive: %r" % (rows,))
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise MalformedDiagram("partition rows must weakly decrease: %r" % (rows,))
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return "Partition(%r)" % (self.rows,)

    @property
    def weight(self):
        return sum(self.rows)

    def row(self, i):
        """lambda_i with 1-based i, zero beyond the last row."""
        return self.rows[i - 1] if 1 <= i <= len(self.rows) else 0

    def transpose(self):
        if not self.rows:
            return self
        return Partition(tuple(sum(1 for r in self.rows if r >= j) for j in range(1, self.rows[0] + 1)))

    def col(self, j):
        return sum(1 for r in self.rows if r >= j)

    def boxes(self):
        for i, r in enumerate(self.rows, start=1):
            for j in range(1, r + 1):
                yield i, j

    def frobenius(self):
        """Frobenius coordinates (lambda_i - i + 1/2, lambda'_j - j + 1/2), doubled."""
        d = sum(1 for i, r in enumerate(self.rows, start=1) if r >= i)
        lt = self.transpose()
        a = tuple(2 * (self.row(i) - i) + 1 for i in range(1, d + 1))
        b = tuple(2 * (lt.row(j) - j) + 1 for j in range(1, d + 1))
        return a, b


EMPTY = Partition(())


def hook_arm_leg(lam, i, j):
    """Arm, leg and hook of box (i, j), extended outside lam."""
    arm = lam.row(i) - j
    leg = lam.col(j) - i
    return arm, leg, arm + leg + 1


@lru_cache(maxsize=None)
def partitions_of(n):
    """All partitions of n in reverse lexicographic order."""
    if n == 0:
        return (EMPTY,)
    out = []

    def rec(rem, cap, acc):
        if rem == 0:
            out.append(Partition(tuple(acc)))
            return
        for r in range(min(rem, cap), 0, -1):
            acc.append(r)
            rec(rem - r, r, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def partitions_upto(n):
    for k in range(n + 1):
        yield from partitions_of(k)


@dataclass(frozen=True)
class MayaDiagram:
    """Particles (positive) and holes (negative), both as doubled odd integers.

    particles strictly decrease, holes strictly increase.
    """

    particles: tuple = ()
    holes: tuple = ()

    def __post_init__(self):
        p = tuple(int(x) for x in self.particles)
        h = tuple(int(x) for x in self.holes)
        if any(x <= 0 or x % 2 != 1 for x in p):
            raise MalformedDiagram("particles must be positive half-integers: %r" % (p,))
        if any(x >= 0 or x % 2 != 1 for x in h):
            raise MalformedDiagram("holes must be negative half-integers: %r" % (h,))
        if any(p[i] <= p[i + 1] for i in range(len(p) - 1)):
            raise MalformedDiagram("particles must strictly decrease: %r" % (p,))
        if any(h[i] >= h[i + 1] for i in range(len(h) - 1)):
            raise MalformedDiagram("holes must strictly increase: %r" % (h,))
        object.__setattr__(self, "particles", p)
        object.__setattr__(self, "holes", h)

    @property
    def charge(self):
        return len(self.particles) - len(self.holes)

    @classmethod
    def from_halves(cls, particles, holes):
        return cls(tuple(int(2 * Fraction(x)) for x in particles),
                   tuple(int(2 * Fraction(x)) for x in holes))

    def particle_values(self):
        return [Fraction(x, 2) for x in self.particles]

    def hole_values(self):
        """The positive numbers q_i with holes at -q_i, decreasing."""
        return [Fraction(-x, 2) for x in self.holes]


@dataclass(frozen=True)
class ChargedPartition:
    shape: Partition
    charge: int


def charged_to_maya(cp):
    """Occupied sites are lambda_i - i + 1/2 + Q; particles are the occupied
    positive sites, holes the empty negative ones."""
    lam, Q = cp.shape, cp.charge
    L = len(lam) + abs(Q) + 1
    occ = [2 * (lam.row(i) - i + Q) + 1 for i in range(1, L + 1)]
    floor = occ[-1]
    occset = set(occ)
    particles = tuple(x for x in occ if x > 0)
    holes = tuple(x for x in range(floor + 2, 0, 2) if x not in occset)
    return MayaDiagram(particles, holes)


def maya_to_charged(m):
    Q = m.charge
    hole_set = set(m.holes)
    low = min(m.holes) if m.holes else -1
    negs = [x for x in range(-1, low - 2 * (len(m.particles) + 2), -2) if x not in hole_set]
    occ = list(m.particles) + negs
    rows = []
    for i, s2 in enumerate(occ, start=1):
        r2 = s2 + 2 * i - 1 - 2 * Q
        if r2 % 2:
            raise MalformedDiagram("inconsistent Maya diagram %r" % (m,))
        rows.append(r2 // 2)
    while rows and rows[-1] == 0:
        rows.pop()
    if any(r < 0 for r in rows):
        raise MalformedDiagram("inconsistent Maya diagram %r" % (m,))
    return ChargedPartition(Partition(tuple(rows)), Q)


def position_sum(m):
    """Sum of particle positions and hole depths, exact."""
    return sum((Fraction(x, 2) for x in m.particles), Fraction(0)) + sum(
        (Fraction(-x, 2) for x in m.holes), Fraction(0))


@dataclass(frozen=True)
class AnnulusConfig:
    """Particles I (Fourier index 2p > 0, color) and holes J (-2q < 0, color)."""

    I: tuple = ()
    J: tuple = ()

    @property
    def balanced(self):
        return len(self.I) == len(self.J)

    @property
    def proper(self):
        return all(p > 0 for p, _ in self.I) and all(q < 0 for q, _ in self.J)

    @property
    def charge(self):
        """m = #I(+) - #J(+)."""
        return sum(1 for _, c in self.I if c == PLUS) - sum(1 for _, c in self.J if c == PLUS)

    def maya(self, color):
        p = tuple(sorted((x for x, c in self.I if c == color), reverse=True))
        h = tuple(sorted(x for x, c in self.J if c == color))
        return MayaDiagram(p, h)

    def charged(self):
        """(Y+, Y-, m) of the two colors."""
        yp = maya_to_charged(self.maya(PLUS))
        ym = maya_to_charged(self.maya(MINUS))
        return yp.shape, ym.shape, yp.charge

    @property
    def weight(self):
        yp, ym, m = self.charged()
        return yp.weight + ym.weight + m * m


EMPTY_ANNULUS = AnnulusConfig((), ())


def annulus_from_charged(yp, ym, m):
    mp = charged_to_maya(ChargedPartition(yp, m))
    mm = charged_to_maya(ChargedPartition(ym, -m))
    I = tuple((x, PLUS) for x in mp.particles) + tuple((x, MINUS) for x in mm.particles)
    J = tuple((x, PLUS) for x in mp.holes) + tuple((x, MINUS) for x in mm.holes)
    return AnnulusConfig(I, J)


def annulus_configs(max_weight, max_charge):
    """Single-annulus configurations with |Y+|+|Y-|+m^2 <= max_weight,
    ordered by charge (0, 1, -1, 2, -2, ...) then by the partition pair."""
    out = []
    charges = [0]
    for m in range(1, max_charge + 1):
        charges += [m, -m]
    for m in charges:
        budget = max_weight - m * m
        if budget < 0:
            continue
        for w in range(budget + 1):
            for wp in range(w + 1):
                for yp in partitions_of(wp):
                    for ym in partitions_of(w - wp):
                        out.append(annulus_from_charged(yp, ym, m))
    return out


def enumerate_configs(max_weight, max_charge, annuli):
    """Proper balanced configurations over several annuli, as tuples of
    AnnulusConfig, each annulus within the weight and charge bounds."""
    per = annulus_configs(max_weight, max_charge)
    for combo in itertools.product(per, repeat=annuli):
        yield combo


def window_configs(Q):
    """All proper balanced single-annulus configurations with Fourier
    indices p <= Q - 1/2, for two colors."""
    pos = [(2 * k + 1, c) for k in range(Q) for c in COLORS]
    neg = [(-(2 * k + 1), c) for k in range(Q) for c in COLORS]
    out = []
    for size in range(len(pos) + 1):
        for I in itertools.combinations(pos, size):
            for J in itertools.combinations(neg, size):
                out.append(AnnulusConfig(I, J))
    return out
