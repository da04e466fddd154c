"""Correspondences, fibre products, composition and indices.

The calculus here is category-generic.  A :class:`Context` supplies the
objects and maps of one concrete category (abelian groups, lattices over an
order, finite rings) together with the forgetful passage to abelian groups,
which is where kernel orders and cokernel indices are measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import EndpointMismatch, NotIsogeny, ObjectMismatch


class Context:
    """Interface a concrete category has to implement.

    Maps are opaque to this module; contexts must be stateless.
    """

    name = "abstract"

    def source(self, f):
        raise NotImplementedError

    def target(self, f):
        raise NotImplementedError

    def identity(self, obj):
        raise NotImplementedError

    def compose(self, g, f):
        """The map ``g o f``."""
        raise NotImplementedError

    def same_object(self, a, b) -> bool:
        return a == b

    def maps_equal(self, f, g) -> bool:
        return f == g

    def certify(self, f):
        """Return an :class:`~commensur.abelian.IsogenyCertificate` or raise NotIsogeny."""
        raise NotImplementedError

    def fibre_product(self, f, h):
        """``(W, p0, p1)`` for the diagram ``X -f-> M <-h- Y``."""
        raise NotImplementedError

    def lift(self, fp, a, b):
        """The unique map ``T -> W`` into a fibre product with legs ``a``, ``b``."""
        raise NotImplementedError

    def canonicalize(self, corr: "Correspondence") -> "Correspondence":
        return corr

    def encode_object(self, obj) -> Any:
        raise NotImplementedError

    def encode_map(self, f) -> Any:
        raise NotImplementedError

    def decode_object(self, data):
        raise NotImplementedError

    def decode_map(self, data):
        raise NotImplementedError


@dataclass(frozen=True)
class Correspondence:
    """A roof ``X <-f- W -g-> Y``."""

    w: Any
    f: Any
    g: Any
    ctx: Context

    def __post_init__(self):
        if not (self.ctx.same_object(self.ctx.source(self.f), self.w)
                and self.ctx.same_object(self.ctx.source(self.g), self.w)):
            raise ObjectMismatch("both legs must start at the apex")

    @property
    def left(self):
        return self.ctx.target(self.f)

    @property
    def right(self):
        return self.ctx.target(self.g)

    def to_json(self) -> dict:
        return {
            "apex": self.ctx.encode_object(self.w),
            "left": self.ctx.encode_map(self.f),
            "right": self.ctx.encode_map(self.g),
        }

    @classmethod
    def from_json(cls, data, ctx: Context) -> "Correspondence":
        return cls(ctx.decode_object(data["apex"]), ctx.decode_map(data["left"]),
                   ctx.decode_map(data["right"]), ctx)


@dataclass(frozen=True)
class Commensurability:
    base: Correspondence
    left_cert: Any
    right_cert: Any

    @property
    def index(self) -> Fraction:
        return self.right_cert.index / self.left_cert.index


@dataclass(frozen=True)
class EquivalenceWitness:
    w: Any
    p: Any
    q: Any


def certify(c: Correspondence) -> Commensurability:
    """Upgrade a correspondence to a commensurability; raises NotIsogeny."""
    return Commensurability(c, c.ctx.certify(c.f), c.ctx.certify(c.g))


def is_commensurability(c: Correspondence) -> bool:
    try:
        certify(c)
    except NotIsogeny:
        return False
    return True


def index(c) -> Fraction:
    """Index ``i(g) / i(f)`` of a commensurability (certifies it if needed)."""
    if isinstance(c, Correspondence):
        c = certify(c)
    return c.index


def from_isogeny(f, ctx: Context) -> Commensurability:
    """The commensurability ``(L, id, f)`` attached to an isogeny ``f: L -> M``."""
    src = ctx.source(f)
    return certify(Correspondence(src, ctx.identity(src), f, ctx))


def from_map(f, ctx: Context) -> Correspondence:
    src = ctx.source(f)
    return Correspondence(src, ctx.identity(src), f, ctx)


def inverse(c):
    if isinstance(c, Commensurability):
        return Commensurability(inverse(c.base), c.right_cert, c.left_cert)
    return Correspondence(c.w, c.g, c.f, c.ctx)


def compose(c, d):
    """Composite ``d o c`` of ``c: L <-> M`` and ``d: M <-> N``.

    The apex is the fibre product of the two apexes over ``M``; the context
    may then shrink it to a canonical presentation.
    """
    base_c = c.base if isinstance(c, Commensurability) else c
    base_d = d.base if isinstance(d, Commensurability) else d
    ctx = base_c.ctx
    if not ctx.same_object(base_c.right, base_d.left):
        raise ObjectMismatch("right end of the first correspondence is not the left end of the second")
    w, p0, p1 = ctx.fibre_product(base_c.g, base_d.f)
    out = ctx.canonicalize(Correspondence(w, ctx.compose(base_c.f, p0), ctx.compose(base_d.g, p1), ctx))
    if isinstance(c, Commensurability) and isinstance(d, Commensurability):
        return certify(out)
    return out


def verify_equivalence(c: Correspondence, d: Correspondence, w: EquivalenceWitness) -> bool:
    """Check that ``w = (W, p, q)`` witnesses the equivalence of ``c`` and ``d``.

    Needs ``p: W -> X_c`` and ``q: W -> X_d`` both isogenies with
    ``f_c p == f_d q`` and ``g_c p == g_d q``.
    """
    if isinstance(c, Commensurability):
        c = c.base
    if isinstance(d, Commensurability):
        d = d.base
    ctx = c.ctx
    if not (ctx.same_object(c.left, d.left) and ctx.same_object(c.right, d.right)):
        raise EndpointMismatch("correspondences have different endpoints")
    if not (ctx.same_object(ctx.source(w.p), w.w) and ctx.same_object(ctx.source(w.q), w.w)):
        return False
    if not (ctx.same_object(ctx.target(w.p), c.w) and ctx.same_object(ctx.target(w.q), d.w)):
        return False
    try:
        ctx.certify(w.p)
        ctx.certify(w.q)
    except NotIsogeny:
        return False
    return (ctx.maps_equal(ctx.compose(c.f, w.p), ctx.compose(d.f, w.q))
            and ctx.maps_equal(ctx.compose(c.g, w.p), ctx.compose(d.g, w.q)))


def inverse_law_witness(c: Correspondence):
    """Witness that ``c^-1 o c`` is equivalent to ``(L, id, id)``.

    Returns ``(composite, identity_corr, witness)``; the witness is the
    diagonal of the apex into the fibre product paired with the left leg.
    """
    if isinstance(c, Commensurability):
        c = c.base
    ctx = c.ctx
    fp = ctx.fibre_product(c.g, c.g)
    w, p0, p1 = fp
    composite = Correspondence(w, ctx.compose(c.f, p0), ctx.compose(c.f, p1), ctx)
    diag = ctx.lift(fp, ctx.identity(c.w), ctx.identity(c.w))
    ident = Correspondence(c.left, ctx.identity(c.left), ctx.identity(c.left), ctx)
    return composite, ident, EquivalenceWitness(c.w, diag, c.f)


def reflexive_witness(c: Correspondence) -> EquivalenceWitness:
    if isinstance(c, Commensurability):
        c = c.base
    return EquivalenceWitness(c.w, c.ctx.identity(c.w), c.ctx.identity(c.w))
