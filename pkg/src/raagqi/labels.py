"""Quasi-isometry class labels for graph groups.

A label is a value attached to a group so that equal labels always mean
quasi-isometric groups.  Some label families are also *complete*: within
the family, unequal labels mean provably non-quasi-isometric groups.
Families built on canonical graph codes without such a completeness
theorem are marked unsound, and comparisons involving them answer
"unknown" rather than guess.

Three-valued comparisons return one of the strings "equal", "different"
or "unknown".  "equal" and "different" are claims; "unknown" is not.
"""

from dataclasses import dataclass, field
from hashlib import blake2b


def short_code(code):
    """Stable 8-hex-digit digest of a canonical code, for display only."""
    return blake2b(code, digest_size=4).hexdigest()


class QiClassLabel:
    """Base class for quasi-isometry class labels.

    Subclasses are frozen dataclasses; value equality is label equality.
    """

    @property
    def sound(self):
        raise NotImplementedError

    def sort_key(self):
        raise NotImplementedError

    def render(self):
        raise NotImplementedError

    def __repr__(self):
        return self.render()


@dataclass(frozen=True, repr=False)
class Abelian(QiClassLabel):
    """Z^rank with rank 0 or rank >= 2; rank 1 lives in TwoEnded."""

    rank: int

    def __post_init__(self):
        if self.rank < 0 or self.rank == 1:
            raise ValueError("abelian rank must be 0 or >= 2, got %d" % self.rank)

    @property
    def sound(self):
        return True

    def sort_key(self):
        return ("abelian", self.rank)

    def render(self):
        return "1" if self.rank == 0 else "Z^%d" % self.rank


@dataclass(frozen=True, repr=False)
class TwoEnded(QiClassLabel):
    """The class of Z: all two-ended groups."""

    @property
    def sound(self):
        return True

    def sort_key(self):
        return ("two-ended",)

    def render(self):
        return "Z"


@dataclass(frozen=True, repr=False)
class FreeNonAbelian(QiClassLabel):
    """The class of F_n for any n >= 2; all such are quasi-isometric."""

    @property
    def sound(self):
        return True

    def sort_key(self):
        return ("free",)

    def render(self):
        return "F"


@dataclass(frozen=True, repr=False)
class FiniteOutBase(QiClassLabel):
    """Class of a group commensurable to one with finite outer
    automorphism group, keyed by the canonical code of the base graph.

    Sound both ways for graphs in this family: such groups are
    quasi-isometric exactly when their base graphs are isomorphic.  The
    base graph is always connected, not a clique and not a join.
    """

    code: bytes

    @property
    def sound(self):
        return True

    def sort_key(self):
        return ("finite-out", self.code)

    def render(self):
        return "rigid[%s]" % short_code(self.code)


@dataclass(frozen=True, repr=False)
class Product(QiClassLabel):
    """Z^clique_rank x A_1 x ... x A_k for a graph splitting as a
    nontrivial join, with non-clique factor labels sorted.

    Direct product decompositions along maximal join decompositions are
    preserved by quasi-isometries factor by factor, so the clique rank
    and factor count are always comparable even when a factor label is
    itself unsound.
    """

    clique_rank: int
    factors: tuple

    def __post_init__(self):
        ordered = tuple(sorted(self.factors, key=lambda l: l.sort_key()))
        object.__setattr__(self, "factors", ordered)
        if self.clique_rank + len(ordered) < 2 or not ordered:
            raise ValueError("product label needs a nontrivial join shape")

    @property
    def sound(self):
        return all(f.sound for f in self.factors)

    def sort_key(self):
        return ("product", self.clique_rank, tuple(f.sort_key() for f in self.factors))

    def render(self):
        parts = []
        if self.clique_rank == 1:
            parts.append("Z")
        elif self.clique_rank:
            parts.append("Z^%d" % self.clique_rank)
        parts.extend(f.render() for f in self.factors)
        return " x ".join(parts)


@dataclass(frozen=True, repr=False)
class UnknownClass(QiClassLabel):
    """Fallback class keyed by the canonical code of the graph itself.

    Equal tokens mean isomorphic graphs, hence equal groups, so equality
    is still a sound positive; nothing else can be concluded.  Only
    assigned to connected graphs that are neither cliques nor joins.
    """

    token: bytes

    @property
    def sound(self):
        return False

    def sort_key(self):
        return ("unknown", self.token)

    def render(self):
        return "unknown[%s]" % short_code(self.token)


@dataclass(frozen=True)
class FreeProductNormalForm:
    """Quasi-isometry data of a free product of countably many factors.

    Two infinitely-ended free products of two-ended, free and one-ended
    groups are quasi-isometric exactly when the *sets* of
    quasi-isometry classes of their one-ended factors agree, so only
    ``one_ended``, ``unknown`` and ``ends`` take part in equality.  The
    remaining fields are descriptive: they record how the normal form
    was assembled but carry no extra quasi-isometry information.
    """

    one_ended: frozenset
    unknown: frozenset
    ends: str  # "none", "one", "two" or "infinite"
    zero_factors: int = field(default=0, compare=False)
    free_factors: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "one_ended", frozenset(self.one_ended))
        object.__setattr__(self, "unknown", frozenset(self.unknown))
        if self.ends not in ("none", "one", "two", "infinite"):
            raise ValueError("bad ends value %r" % self.ends)

    @classmethod
    def from_labels(cls, labels):
        """Normal form of the free product of the labelled groups.

        Trivial factors are dropped, free factors are pooled, and any
        nested free-product factors are flattened into this one.
        """
        one_ended = set()
        unknown = set()
        zero = 0
        free = 0
        count = 0
        for lab in labels:
            if isinstance(lab, Abelian) and lab.rank == 0:
                zero += 1
            elif isinstance(lab, TwoEnded):
                free += 1
                count += 1
            elif isinstance(lab, FreeNonAbelian):
                free += 1
                count += 2
            elif isinstance(lab, FreeProductNF):
                nf = lab.nf
                one_ended |= nf.one_ended
                unknown |= nf.unknown
                free += nf.free_factors
                count += 2
            elif lab.sound:
                one_ended.add(lab)
                count += 1
            else:
                unknown.add(lab)
                count += 1
        if count == 0:
            ends = "none"
        elif count >= 2:
            ends = "infinite"
        elif free:
            ends = "two"
        else:
            ends = "one"
        return cls(frozenset(one_ended), frozenset(unknown), ends,
                   zero_factors=zero, free_factors=free)

    def sound_vs(self, other):
        """Three-valued comparison of two normal forms."""
        if self == other:
            return "equal"
        if self.ends != other.ends:
            return "different"
        if not self.unknown and not other.unknown:
            return "different"
        return "unknown"

    def factor_labels(self):
        """All factor labels that take part in comparison, sorted."""
        return tuple(sorted(self.one_ended | self.unknown,
                            key=lambda l: l.sort_key()))

    def render(self):
        parts = [l.render() for l in self.factor_labels()]
        if self.free_factors or not parts:
            parts.append("F")
        return "[%s | ends=%s]" % (" * ".join(parts), self.ends)


@dataclass(frozen=True, repr=False)
class FreeProductNF(QiClassLabel):
    """Class of a free product that is not itself free, abelian or a
    single one-ended group, wrapping its normal form."""

    nf: FreeProductNormalForm

    def __post_init__(self):
        if self.nf.ends != "infinite" or not (self.nf.one_ended or self.nf.unknown):
            raise ValueError("degenerate free product; use free_product_label")

    @property
    def sound(self):
        return not self.nf.unknown

    def sort_key(self):
        return ("free-product", self.nf.ends,
                tuple(l.sort_key() for l in self.nf.factor_labels()))

    def render(self):
        return self.nf.render()


def abelian(rank):
    """Label of Z^rank, folding rank 1 into the two-ended class."""
    if rank < 0:
        raise ValueError("negative rank")
    if rank == 1:
        return TwoEnded()
    return Abelian(rank)


def free_product_label(labels):
    """Label of the free product of the labelled groups, normalized.

    Trivial products collapse to their only factor; products of free
    and two-ended groups collapse to the free class.
    """
    nf = FreeProductNormalForm.from_labels(labels)
    if nf.ends == "none":
        return abelian(0)
    if nf.ends == "two":
        return TwoEnded()
    if not nf.one_ended and not nf.unknown:
        return FreeNonAbelian()
    if nf.ends == "one":
        (only,) = tuple(nf.one_ended | nf.unknown)
        return only
    return FreeProductNF(nf)


def ends_of_label(label):
    """Number of ends of any group in the class: "none" (finite),
    "one", "two" or "infinite"."""
    if isinstance(label, Abelian):
        return "none" if label.rank == 0 else "one"
    if isinstance(label, TwoEnded):
        return "two"
    if isinstance(label, FreeNonAbelian):
        return "infinite"
    if isinstance(label, FreeProductNF):
        return label.nf.ends
    return "one"


def _has_perfect_matching(left, right, ok):
    """Hall-style bipartite matching test via augmenting paths."""
    if len(left) != len(right):
        return False
    match_r = [None] * len(right)

    def augment(i, seen):
        for j in range(len(right)):
            if ok(left[i], right[j]) and j not in seen:
                seen.add(j)
                if match_r[j] is None or augment(match_r[j], seen):
                    match_r[j] = i
                    return True
        return False

    return all(augment(i, set()) for i in range(len(left)))


def compare_labels(a, b):
    """Three-valued quasi-isometry comparison of two class labels.

    "equal" and "different" are sound claims; ties that would require
    classification power we do not have come back "unknown".
    """
    if a == b:
        return "equal"
    ea, eb = ends_of_label(a), ends_of_label(b)
    if ea != eb:
        return "different"
    if ea == "infinite":
        if isinstance(a, FreeProductNF) and isinstance(b, FreeProductNF):
            return a.nf.sound_vs(b.nf)
        # a free group against a free product with a one-ended factor
        return "different"
    if ea in ("none", "two"):
        return "equal"
    # both one-ended: compare maximal direct product decompositions,
    # which quasi-isometries preserve factor by factor
    sa, sb = _product_shape(a), _product_shape(b)
    if sa != sb:
        return "different"
    if isinstance(a, Product) and isinstance(b, Product):
        if _has_perfect_matching(
                a.factors, b.factors,
                lambda x, y: compare_labels(x, y) != "different"):
            return "unknown"
        return "different"
    if isinstance(a, FiniteOutBase) and isinstance(b, FiniteOutBase):
        # complete family: distinct base graphs are never quasi-isometric
        return "different"
    return "unknown"


def _product_shape(label):
    """(clique rank, count of non-clique factors) of the maximal direct
    product decomposition shared by every group in the class."""
    if isinstance(label, Abelian):
        return (label.rank, 0)
    if isinstance(label, Product):
        return (label.clique_rank, len(label.factors))
    return (0, 1)
