"""Truncated tensor-product spectra and their closures.

The spectrum of an infinite tensor product of diagonal positive operators is
the closure of all finite products of eigenvalues.  Here the finite products
are enumerated exactly (points are PosReal, deduplicated by formal equality of
their logarithms) and the closure is classified through `mult_closure`.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

from .blocks import Block, DualFreeGroup, Hnuq, SUq2
from .exactnum import DEFAULT_PRECISION
from .qlinear import ConstantRegistry, MultClosure, PosReal, mult_closure
from .sets import ClosedMultSet

POINT_CAP = 200_000


class SpectrumCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class DiscreteSpectrum:
    """A finite set of positive points, plus 0 when `includes_zero`."""

    points: frozenset
    includes_zero: bool = False

    @classmethod
    def of(cls, points, includes_zero: bool = False) -> "DiscreteSpectrum":
        pts = []
        for p in points:
            if not isinstance(p, PosReal):
                p = PosReal.rational(p)
            pts.append(p)
        return cls(frozenset(pts), includes_zero)

    @classmethod
    def cyclic_window(cls, generator: PosReal, lo: int, hi: int, includes_zero: bool = True) -> "DiscreteSpectrum":
        """{generator^n : lo <= n <= hi}, with 0 by default (the closure of a cyclic spectrum)."""
        return cls(frozenset(generator ** n for n in range(lo, hi + 1)), includes_zero)

    def __len__(self):
        return len(self.points) + (1 if self.includes_zero else 0)

    def contains_one(self) -> bool:
        return any(p.is_one() for p in self.points)

    def issubset(self, other: "DiscreteSpectrum") -> bool:
        return self.points <= other.points and (other.includes_zero or not self.includes_zero)

    def sorted_points(self, registry: ConstantRegistry | None = None, precision: int = DEFAULT_PRECISION):
        """Points ordered by the midpoint of a certified enclosure of their logarithm."""
        registry = registry or ConstantRegistry()

        def key(p):
            iv = registry.enclose(p.log, precision)
            return ((iv.lo + iv.hi) / 2, str(p))

        return sorted(self.points, key=key)

    def listing(self, registry: ConstantRegistry | None = None):
        out = ["0"] if self.includes_zero else []
        return out + [str(p) for p in self.sorted_points(registry)]

    def to_json(self, registry: ConstantRegistry | None = None):
        return {"includes_zero": self.includes_zero, "points": self.listing(registry), "size": len(self)}


def truncated_product_spectrum(spectra, N: int | None = None, cap: int = POINT_CAP) -> DiscreteSpectrum:
    """{x_1 ... x_N : x_i in Sp_i}, with 0 present iff some factor contains 0."""
    spectra = list(spectra)
    if N is None:
        N = len(spectra)
    if not 1 <= N <= len(spectra):
        raise ValueError(f"N = {N} must lie in [1, {len(spectra)}]")
    acc = {PosReal.rational(1)}
    zero = False
    for sp in spectra[:N]:
        zero = zero or sp.includes_zero
        if len(acc) * max(1, len(sp.points)) > cap:
            raise SpectrumCapExceeded(f"product spectrum would exceed {cap} points")
        acc = {a * b for a in acc for b in sp.points}
    return DiscreteSpectrum(frozenset(acc), zero)


def brute_force_product(spectra) -> DiscreteSpectrum:
    """Reference enumeration over the full Cartesian product, for cross-checking."""
    spectra = list(spectra)
    pts = set()
    for combo in itertools.product(*[sorted(s.points, key=str) for s in spectra]):
        x = PosReal.rational(1)
        for c in combo:
            x = x * c
        pts.add(x)
    return DiscreteSpectrum(frozenset(pts), any(s.includes_zero for s in spectra))


def block_spectrum(block: Block, window: int = 1) -> DiscreteSpectrum:
    """Modular spectrum of the Haar state of one block truncated to exponents [-window, window]."""
    if isinstance(block, (SUq2, Hnuq)):
        return DiscreteSpectrum.cyclic_window(PosReal(block.q.log_abs * 2), -window, window)
    if isinstance(block, DualFreeGroup):
        return DiscreteSpectrum.of([1])
    raise ValueError(f"no modular spectrum model for {block.kind}")


@dataclass(frozen=True)
class CyclicFactor:
    """An infinitely repeated factor whose spectrum is the closure of generator^Z (with 0), or {1}."""

    generator: PosReal | None  # None: the spectrum {1}
    includes_zero: bool = True


def limit_spectrum_classify(factors, registry: ConstantRegistry | None = None) -> ClosedMultSet:
    """Closure of the products of finitely many distinct cyclic spectra, each repeated infinitely."""
    registry = registry or ConstantRegistry()
    gens, zero = [], False
    for f in factors:
        if not isinstance(f, CyclicFactor):
            raise ValueError("limit classification expects CyclicFactor descriptions")
        zero = zero or f.includes_zero
        if f.generator is None or f.generator.is_one():
            continue
        s = registry.sign(f.generator.log)
        if s is None:
            raise ValueError(f"cannot certify {f.generator} != 1")
        g = f.generator if s < 0 else f.generator.inverse()
        if g not in gens:
            gens.append(g)
        zero = True  # r^n -> 0 along a cyclic spectrum
    closure = mult_closure(gens, registry) if gens else MultClosure("trivial")
    return ClosedMultSet(zero, closure)


@dataclass(frozen=True)
class NestingVerdict:
    nested: bool
    contained_in_limit: bool
    sizes: tuple
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.nested and self.contained_in_limit

    def to_json(self):
        return {"nested": self.nested, "contained_in_limit": self.contained_in_limit,
                "sizes": list(self.sizes), "detail": self.detail}


def _in_limit(p: PosReal, limit: ClosedMultSet) -> bool:
    if limit.kind == "dense":
        return True
    if limit.kind == "trivial":
        return p.is_one()
    if limit.kind == "cyclic":
        g = limit.generator.log
        if p.log.is_zero():
            return True
        m, c = g.terms[0]
        n = p.log.coefficient(m) / c
        return n.denominator == 1 and p.log == g * n
    return False


def nested_truncation_check(spectra, N_max: int, limit: ClosedMultSet | None = None) -> NestingVerdict:
    """Check Sp_N ⊆ Sp_{N+1} for N < N_max and that every truncation point lies in the limit set."""
    spectra = list(spectra)
    for i, sp in enumerate(spectra[:N_max]):
        if not sp.contains_one():
            return NestingVerdict(False, False, (), f"factor {i} does not contain 1")
    chain = [truncated_product_spectrum(spectra, n) for n in range(1, N_max + 1)]
    nested = all(a.issubset(b) for a, b in zip(chain, chain[1:]))
    contained = True
    detail = ""
    if limit is not None:
        for n, sp in enumerate(chain, start=1):
            bad = [p for p in sp.points if not _in_limit(p, limit)]
            if bad or (sp.includes_zero and not limit.zero):
                contained = False
                detail = f"truncation {n} has points outside {limit}"
                break
    return NestingVerdict(nested, contained, tuple(len(c) for c in chain), detail)


def spec_spectra(spec, N: int, window: int = 1):
    """Truncated spectra of the first N factors of a product specification."""
    from .products import sequence_prefix

    out = []
    for _label, logq, count in sequence_prefix(spec, N):
        sp = DiscreteSpectrum.of([1]) if logq is None else \
            DiscreteSpectrum.cyclic_window(PosReal(logq * 2), -window, window)
        out.extend([sp] * count)
    return out


def spec_limit(spec, registry: ConstantRegistry | None = None) -> ClosedMultSet:
    """Limit classification for a specification whose blocks all repeat infinitely."""
    factors = []
    for e in spec.entries:
        if not e.infinite:
            raise ValueError("the limit classification needs every block repeated infinitely")
        if isinstance(e.block, DualFreeGroup):
            factors.append(CyclicFactor(None, False))
        elif isinstance(e.block, Hnuq):
            factors.append(CyclicFactor(PosReal(e.block.q.log_abs * 2)))
        else:
            raise ValueError(f"no modular spectrum model for {e.block.kind}")
    return limit_spectrum_classify(factors, registry or spec.registry)


__all__ = [
    "CyclicFactor", "DiscreteSpectrum", "NestingVerdict", "POINT_CAP", "SpectrumCapExceeded",
    "block_spectrum", "brute_force_product", "limit_spectrum_classify", "nested_truncation_check",
    "spec_limit", "spec_spectra", "truncated_product_spectrum",
]
