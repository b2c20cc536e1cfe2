"""Primitive datatypes, facets, derived datatypes and an exact unary solver.

Numbers are always ``fractions.Fraction``.  A derived datatype is a small
immutable tree over one primitive datatype; ``dsat`` decides whether a
conjunction of such trees has a common value and produces a witness.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence, Union as TUnion


def cache_hash(cls):
    """Remember the dataclass hash of each instance; deep trees get hashed a lot."""
    raw = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = raw(self)
            object.__setattr__(self, "_hash", h)
            return h
    cls.__hash__ = __hash__
    return cls


class DatatypeError(TypeError):
    """Raised when values or expressions of different datatypes are mixed."""


class PrimitiveDatatype(enum.Enum):
    STRING = "string"
    NATURAL = "natural"
    INTEGER = "integer"
    RATIONAL = "rational"
    REAL = "real"

    @property
    def is_numeric(self) -> bool:
        return self is not PrimitiveDatatype.STRING

    @property
    def is_discrete(self) -> bool:
        return self in (PrimitiveDatatype.NATURAL, PrimitiveDatatype.INTEGER)

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "PrimitiveDatatype":
        try:
            return cls(name)
        except ValueError:
            raise DatatypeError(f"unknown datatype {name!r}") from None


STRING = PrimitiveDatatype.STRING
NATURAL = PrimitiveDatatype.NATURAL
INTEGER = PrimitiveDatatype.INTEGER
RATIONAL = PrimitiveDatatype.RATIONAL
REAL = PrimitiveDatatype.REAL


def to_fraction(x) -> Fraction:
    """Exact conversion; floats are refused so that no rounding sneaks in."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise DatatypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_number(x)
    raise DatatypeError(f"cannot use {x!r} as an exact number")


def parse_number(text: str) -> Fraction:
    """Parse ``12``, ``-0.75`` or ``1/3`` into an exact rational."""
    t = text.strip()
    try:
        if "/" in t:
            p, q = t.split("/")
            if not q.strip().isdigit() or int(q) == 0:
                raise ValueError
            return Fraction(int(p), int(q))
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise DatatypeError(f"not a number: {text!r}") from None


def format_number(x: Fraction) -> str:
    """Exact decimal when the expansion terminates, ``p/q`` otherwise."""
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = abs(x) * 10**digits
    whole = str(int(scaled)).rjust(digits + 1, "0")
    s = whole[:-digits] + "." + whole[-digits:]
    s = s.rstrip("0").rstrip(".")
    return "-" + s if x < 0 else s


@dataclass(frozen=True)
class Value:
    datatype: PrimitiveDatatype
    data: TUnion[str, Fraction]

    def __post_init__(self):
        dt = self.datatype
        if dt is STRING:
            if not isinstance(self.data, str):
                raise DatatypeError(f"string value expected, got {self.data!r}")
            return
        if isinstance(self.data, str):
            raise DatatypeError(f"{dt} value expected, got string {self.data!r}")
        num = to_fraction(self.data)
        object.__setattr__(self, "data", num)
        if dt.is_discrete and num.denominator != 1:
            raise DatatypeError(f"{format_number(num)} is not a {dt}")
        if dt is NATURAL and num < 0:
            raise DatatypeError(f"{format_number(num)} is not a natural")

    @property
    def kind(self) -> str:
        return "str" if self.datatype is STRING else "num"

    @property
    def num(self) -> Fraction:
        if self.datatype is STRING:
            raise DatatypeError("string value has no numeric part")
        return self.data  # type: ignore[return-value]

    def __str__(self) -> str:
        return format_value(self)


def num(datatype: PrimitiveDatatype, x) -> Value:
    return Value(datatype, to_fraction(x))


def string(s: str) -> Value:
    return Value(STRING, s)


def quote(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def format_value(v: Value) -> str:
    if v.datatype is STRING:
        return quote(v.data)  # type: ignore[arg-type]
    return format_number(v.num)


# -- facets -----------------------------------------------------------------

class FacetOp(enum.Enum):
    EQ = "="
    LT = "<"
    LEQ = "<="
    GT = ">"
    GEQ = ">="


_NEGATED_ORDER = {FacetOp.LT: FacetOp.GEQ, FacetOp.GEQ: FacetOp.LT,
                  FacetOp.GT: FacetOp.LEQ, FacetOp.LEQ: FacetOp.GT}


@dataclass(frozen=True)
class Facet:
    op: FacetOp
    bound: Value

    def __post_init__(self):
        if self.bound.datatype is STRING and self.op is not FacetOp.EQ:
            raise DatatypeError("strings only support the equality facet")

    def holds(self, v: Value) -> bool:
        if self.op is FacetOp.EQ:
            return v.data == self.bound.data
        a, b = v.num, self.bound.num
        return {FacetOp.LT: a < b, FacetOp.LEQ: a <= b,
                FacetOp.GT: a > b, FacetOp.GEQ: a >= b}[self.op]


@dataclass(frozen=True)
class FacetAnd:
    parts: tuple


@dataclass(frozen=True)
class FacetOr:
    parts: tuple


@dataclass(frozen=True)
class FacetNot:
    part: object


FacetFormula = TUnion[Facet, FacetAnd, FacetOr, FacetNot]


def facet_holds(f: FacetFormula, v: Value) -> bool:
    if isinstance(f, Facet):
        return f.holds(v)
    if isinstance(f, FacetAnd):
        return all(facet_holds(p, v) for p in f.parts)
    if isinstance(f, FacetOr):
        return any(facet_holds(p, v) for p in f.parts)
    return not facet_holds(f.part, v)


def negate_facet(f: FacetFormula) -> FacetFormula:
    """Syntactic negation.

    Results only negate equality facets, and on such formulas negating
    twice is the identity.
    """
    if isinstance(f, Facet):
        if f.op is FacetOp.EQ:
            return FacetNot(f)
        return Facet(_NEGATED_ORDER[f.op], f.bound)
    if isinstance(f, FacetNot):
        return _positive(f.part)
    if isinstance(f, FacetAnd):
        return FacetOr(tuple(negate_facet(p) for p in f.parts))
    return FacetAnd(tuple(negate_facet(p) for p in f.parts))


def _positive(f: FacetFormula) -> FacetFormula:
    """f itself, with every negation above an order facet pushed inwards."""
    if isinstance(f, Facet):
        return f
    if isinstance(f, FacetNot):
        return negate_facet(f.part)
    return type(f)(tuple(_positive(p) for p in f.parts))


def facet_bounds(f: FacetFormula) -> Iterable[Value]:
    if isinstance(f, Facet):
        yield f.bound
    elif isinstance(f, FacetNot):
        yield from facet_bounds(f.part)
    else:
        for p in f.parts:
            yield from facet_bounds(p)


# -- derived datatypes ------------------------------------------------------

class DerivedDatatype:
    """Base class of the derived-datatype tree; every node knows its base."""

    base: PrimitiveDatatype

    def __str__(self) -> str:
        return format_datatype(self)


@dataclass(frozen=True)
class Whole(DerivedDatatype):
    base: PrimitiveDatatype


@dataclass(frozen=True)
class OneOf(DerivedDatatype):
    base: PrimitiveDatatype
    values: tuple

    def __post_init__(self):
        for v in self.values:
            if v.datatype is not self.base:
                raise DatatypeError(f"{v} is not a {self.base} value")


@dataclass(frozen=True)
class Restriction(DerivedDatatype):
    base: PrimitiveDatatype
    formula: object

    def __post_init__(self):
        for b in facet_bounds(self.formula):
            if b.datatype is not self.base:
                raise DatatypeError(f"facet bound {b} is not a {self.base} value")


@dataclass(frozen=True)
class Union(DerivedDatatype):
    left: DerivedDatatype
    right: DerivedDatatype
    base: PrimitiveDatatype = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "base", _common_base(self.left, self.right))


@dataclass(frozen=True)
class Intersection(DerivedDatatype):
    left: DerivedDatatype
    right: DerivedDatatype
    base: PrimitiveDatatype = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "base", _common_base(self.left, self.right))


@dataclass(frozen=True)
class Difference(DerivedDatatype):
    left: DerivedDatatype
    right: DerivedDatatype
    base: PrimitiveDatatype = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "base", _common_base(self.left, self.right))


def _common_base(a: DerivedDatatype, b: DerivedDatatype) -> PrimitiveDatatype:
    if a.base is not b.base:
        raise DatatypeError(f"cannot combine {a.base} with {b.base}")
    return a.base


def restrict(base: PrimitiveDatatype, *facets: tuple) -> Restriction:
    """restrict(REAL, (">=", 0), ("<=", 9)) builds real[>= 0 and <= 9]."""
    fs = tuple(Facet(FacetOp(op), bound if isinstance(bound, Value) else
                     (string(bound) if base is STRING else num(base, bound)))
               for op, bound in facets)
    return Restriction(base, fs[0] if len(fs) == 1 else FacetAnd(fs))


def one_of(base: PrimitiveDatatype, *values) -> OneOf:
    vals = tuple(v if isinstance(v, Value) else
                 (string(v) if base is STRING else num(base, v)) for v in values)
    return OneOf(base, vals)


def empty(base: PrimitiveDatatype) -> OneOf:
    return OneOf(base, ())


def value_in(e: DerivedDatatype, v: Value) -> bool:
    if v.datatype is not e.base:
        raise DatatypeError(f"{v} is a {v.datatype} value, expression is over {e.base}")
    if isinstance(e, Whole):
        return True
    if isinstance(e, OneOf):
        return any(v.data == w.data for w in e.values)
    if isinstance(e, Restriction):
        return facet_holds(e.formula, v)
    if isinstance(e, Union):
        return value_in(e.left, v) or value_in(e.right, v)
    if isinstance(e, Intersection):
        return value_in(e.left, v) and value_in(e.right, v)
    if isinstance(e, Difference):
        return value_in(e.left, v) and not value_in(e.right, v)
    raise TypeError(f"not a derived datatype: {e!r}")


@lru_cache(maxsize=1 << 16)
def complement(e: DerivedDatatype) -> DerivedDatatype:
    """D minus e.

    Involutive on its own results (complement of a complement of a
    complement is the first complement), which keeps closures finite.
    """
    d = e.base
    if isinstance(e, Whole):
        return empty(d)
    if isinstance(e, OneOf) and not e.values:
        return Whole(d)
    if isinstance(e, Difference) and e.left == Whole(d):
        return e.right
    if isinstance(e, Restriction):
        return Restriction(d, negate_facet(e.formula))
    if isinstance(e, Union):
        return Intersection(complement(e.left), complement(e.right))
    if isinstance(e, Intersection):
        return Union(complement(e.left), complement(e.right))
    return Difference(Whole(d), e)


def constants(e: DerivedDatatype) -> set:
    """All values mentioned anywhere in e."""
    if isinstance(e, Whole):
        return set()
    if isinstance(e, OneOf):
        return set(e.values)
    if isinstance(e, Restriction):
        return set(facet_bounds(e.formula))
    return constants(e.left) | constants(e.right)


# -- numeric normal form ----------------------------------------------------

@dataclass(frozen=True)
class Bound:
    value: Fraction
    strict: bool


@dataclass(frozen=True)
class NumericShape:
    lower: Optional[Bound]
    upper: Optional[Bound]
    excluded: frozenset = frozenset()
    integral: bool = False

    def contains(self, x: Fraction) -> bool:
        if self.integral and x.denominator != 1:
            return False
        if self.lower is not None:
            if x < self.lower.value or (self.lower.strict and x == self.lower.value):
                return False
        if self.upper is not None:
            if x > self.upper.value or (self.upper.strict and x == self.upper.value):
                return False
        return x not in self.excluded

    def interval_empty(self) -> bool:
        lo, hi = self.lower, self.upper
        if lo is None or hi is None:
            return False
        if lo.value > hi.value:
            return True
        return lo.value == hi.value and (lo.strict or hi.strict)

    def is_empty(self) -> bool:
        if self.interval_empty():
            return True
        if not self.integral:
            if self.lower is not None and self.upper is not None \
                    and self.lower.value == self.upper.value:
                return self.lower.value in self.excluded
            return False
        first, last = self._integer_range()
        if first is None or last is None:
            return False
        if first > last:
            return True
        holes = sum(1 for x in self.excluded if x.denominator == 1 and first <= x <= last)
        return last - first + 1 <= holes

    def _integer_range(self):
        first = last = None
        if self.lower is not None:
            v, strict = self.lower.value, self.lower.strict
            first = math.floor(v) + 1 if (strict or v.denominator != 1) else int(v)
        if self.upper is not None:
            v, strict = self.upper.value, self.upper.strict
            last = math.ceil(v) - 1 if (strict or v.denominator != 1) else int(v)
        return first, last

    def witness(self) -> Optional[Fraction]:
        if self.is_empty():
            return None
        bad = self.excluded
        if self.integral:
            first, last = self._integer_range()
            if first is not None:
                x = first
                while x in bad:
                    x += 1
                return Fraction(x)
            if last is not None:
                x = last
                while x in bad:
                    x -= 1
                return Fraction(x)
            return _spiral(bad, Fraction(0))
        lo, hi = self.lower, self.upper
        if lo is not None and hi is not None:
            if lo.value == hi.value:
                return lo.value
            x = (lo.value + hi.value) / 2
            while x in bad:
                x = (lo.value + x) / 2
            return x
        if lo is not None:
            x = lo.value + 1
            while x in bad:
                x += 1
            return x
        if hi is not None:
            x = hi.value - 1
            while x in bad:
                x -= 1
            return x
        return _spiral(bad, Fraction(0))

    def __str__(self) -> str:
        lo = "(-inf" if self.lower is None else \
            ("(" if self.lower.strict else "[") + format_number(self.lower.value)
        hi = "+inf)" if self.upper is None else \
            format_number(self.upper.value) + (")" if self.upper.strict else "]")
        s = f"{lo}, {hi}"
        if self.excluded:
            s += " \\ {" + ", ".join(format_number(x) for x in sorted(self.excluded)) + "}"
        if self.integral:
            s += " integral"
        return s


def _spiral(bad, start: Fraction) -> Fraction:
    k = 0
    while True:
        for x in (start + k, start - k):
            if x not in bad:
                return x
        k += 1


def _max_lower(a: Optional[Bound], b: Optional[Bound]) -> Optional[Bound]:
    if a is None:
        return b
    if b is None:
        return a
    if a.value != b.value:
        return a if a.value > b.value else b
    return Bound(a.value, a.strict or b.strict)


def _min_upper(a: Optional[Bound], b: Optional[Bound]) -> Optional[Bound]:
    if a is None:
        return b
    if b is None:
        return a
    if a.value != b.value:
        return a if a.value < b.value else b
    return Bound(a.value, a.strict or b.strict)


def _make_shape(lower, upper, excluded, integral) -> NumericShape:
    s = NumericShape(lower, upper, frozenset(), integral)
    inside = frozenset(x for x in excluded if s.contains(x))
    return NumericShape(lower, upper, inside, integral)


def intersect_shapes(a: NumericShape, b: NumericShape) -> NumericShape:
    return _make_shape(_max_lower(a.lower, b.lower), _min_upper(a.upper, b.upper),
                       a.excluded | b.excluded, a.integral or b.integral)


def _domain_shape(d: PrimitiveDatatype) -> NumericShape:
    if d is NATURAL:
        return NumericShape(Bound(Fraction(0), False), None, frozenset(), True)
    return NumericShape(None, None, frozenset(), d is INTEGER)


def _point(x: Fraction) -> NumericShape:
    return NumericShape(Bound(x, False), Bound(x, False))


def _shape_complement(s: NumericShape) -> list:
    out = []
    if s.lower is not None:
        out.append(NumericShape(None, Bound(s.lower.value, not s.lower.strict)))
    if s.upper is not None:
        out.append(NumericShape(Bound(s.upper.value, not s.upper.strict), None))
    out.extend(_point(x) for x in sorted(s.excluded))
    return out


def _within(a: NumericShape, b: NumericShape) -> bool:
    """A sufficient test for a being a subset of b."""
    if b.integral and not a.integral:
        return False
    if b.lower is not None:
        lo = a.lower
        if lo is None or lo.value < b.lower.value or \
                (lo.value == b.lower.value and b.lower.strict and not lo.strict):
            return False
    if b.upper is not None:
        hi = a.upper
        if hi is None or hi.value > b.upper.value or \
                (hi.value == b.upper.value and b.upper.strict and not hi.strict):
            return False
    return not any(a.contains(x) for x in b.excluded)


def _prune(shapes: list) -> list:
    """Drop empty shapes and shapes inside another one; the union is unchanged."""
    kept = []
    for s in shapes:
        if s.is_empty() or any(_within(s, k) for k in kept):
            continue
        kept = [k for k in kept if not _within(k, s)]
        kept.append(s)
    return kept


def _cross(xs: list, ys: list) -> list:
    res = []
    for a in xs:
        for b in ys:
            c = intersect_shapes(a, b)
            if not c.interval_empty():
                res.append(c)
    return _prune(res)


def _complement_shapes(shapes: list, d: PrimitiveDatatype) -> list:
    result = [_domain_shape(d)]
    for s in shapes:
        # over a discrete base the domain shape is integral, so the
        # non-integer gaps of an integral shape never matter
        comp = [intersect_shapes(c, _domain_shape(d)) for c in _shape_complement(s)]
        result = _cross(result, comp)
    return result


def _formula_shapes(f, d: PrimitiveDatatype) -> list:
    if isinstance(f, Facet):
        x = f.bound.num
        if f.op is FacetOp.EQ:
            return [_point(x)]
        if f.op is FacetOp.LT:
            return [NumericShape(None, Bound(x, True))]
        if f.op is FacetOp.LEQ:
            return [NumericShape(None, Bound(x, False))]
        if f.op is FacetOp.GT:
            return [NumericShape(Bound(x, True), None)]
        return [NumericShape(Bound(x, False), None)]
    if isinstance(f, FacetNot):
        inner = [intersect_shapes(s, _domain_shape(d)) for s in _formula_shapes(f.part, d)]
        return _complement_shapes(inner, d)
    if isinstance(f, FacetAnd):
        return reduce(_cross, (_formula_shapes(p, d) for p in f.parts), [NumericShape(None, None)])
    return [s for p in f.parts for s in _formula_shapes(p, d)]


def shapes_of(e: DerivedDatatype) -> list:
    """Disjunction of shapes denoting exactly the value set of e."""
    d = e.base
    if not d.is_numeric:
        raise DatatypeError("numeric expression expected")
    dom = _domain_shape(d)
    if isinstance(e, Whole):
        return [dom]
    if isinstance(e, OneOf):
        return [intersect_shapes(_point(v.num), dom) for v in e.values]
    if isinstance(e, Restriction):
        return [intersect_shapes(s, dom) for s in _formula_shapes(e.formula, d)
                if not intersect_shapes(s, dom).interval_empty()]
    if isinstance(e, Union):
        return shapes_of(e.left) + shapes_of(e.right)
    if isinstance(e, Intersection):
        return _cross(shapes_of(e.left), shapes_of(e.right))
    if isinstance(e, Difference):
        return _cross(shapes_of(e.left), _complement_shapes(shapes_of(e.right), d))
    raise TypeError(f"not a derived datatype: {e!r}")


def _check_same_base(conj: Sequence[DerivedDatatype], datatype=None) -> PrimitiveDatatype:
    bases = {e.base for e in conj}
    if datatype is not None:
        bases.add(datatype)
    if len(bases) > 1:
        raise DatatypeError("mixed datatypes in conjunction: " +
                            ", ".join(sorted(b.value for b in bases)))
    if not bases:
        raise DatatypeError("empty conjunction needs an explicit datatype")
    return bases.pop()


def normalize_numeric(conj: Sequence[DerivedDatatype], datatype=None) -> list:
    d = _check_same_base(conj, datatype)
    if not d.is_numeric:
        raise DatatypeError("normalize_numeric needs a numeric datatype")
    acc = [_domain_shape(d)]
    for e in conj:
        acc = _cross(acc, shapes_of(e))
    return acc


# -- strings ----------------------------------------------------------------

@dataclass(frozen=True)
class StringSet:
    """Either exactly ``items`` (finite) or every string except ``items``."""
    finite: bool
    items: frozenset

    def contains(self, s: str) -> bool:
        return (s in self.items) == self.finite

    def is_empty(self) -> bool:
        return self.finite and not self.items

    def intersect(self, other: "StringSet") -> "StringSet":
        if self.finite and other.finite:
            return StringSet(True, self.items & other.items)
        if self.finite:
            return StringSet(True, self.items - other.items)
        if other.finite:
            return StringSet(True, other.items - self.items)
        return StringSet(False, self.items | other.items)

    def union(self, other: "StringSet") -> "StringSet":
        return self.negate().intersect(other.negate()).negate()

    def negate(self) -> "StringSet":
        return StringSet(not self.finite, self.items)

    def witness(self) -> Optional[str]:
        if self.finite:
            return min(self.items) if self.items else None
        k = 0
        while f"w{k}" in self.items:
            k += 1
        return f"w{k}"

    def __str__(self) -> str:
        body = ", ".join(quote(s) for s in sorted(self.items))
        return "{" + body + "}" if self.finite else "string \\ {" + body + "}"


ALL_STRINGS = StringSet(False, frozenset())


def _formula_strings(f) -> StringSet:
    if isinstance(f, Facet):
        return StringSet(True, frozenset([f.bound.data]))
    if isinstance(f, FacetNot):
        return _formula_strings(f.part).negate()
    if isinstance(f, FacetAnd):
        return reduce(StringSet.intersect, (_formula_strings(p) for p in f.parts), ALL_STRINGS)
    return reduce(StringSet.union, (_formula_strings(p) for p in f.parts), StringSet(True, frozenset()))


def string_set(e: DerivedDatatype) -> StringSet:
    if isinstance(e, Whole):
        return ALL_STRINGS
    if isinstance(e, OneOf):
        return StringSet(True, frozenset(v.data for v in e.values))
    if isinstance(e, Restriction):
        return _formula_strings(e.formula)
    if isinstance(e, Union):
        return string_set(e.left).union(string_set(e.right))
    if isinstance(e, Intersection):
        return string_set(e.left).intersect(string_set(e.right))
    if isinstance(e, Difference):
        return string_set(e.left).intersect(string_set(e.right).negate())
    raise TypeError(f"not a derived datatype: {e!r}")


# -- satisfiability ---------------------------------------------------------

def dsat(conj: Sequence[DerivedDatatype], datatype: Optional[PrimitiveDatatype] = None
         ) -> Optional[Value]:
    """Common value of all conjuncts, or None when there is none."""
    d = _check_same_base(conj, datatype)
    if d is STRING:
        s = reduce(StringSet.intersect, (string_set(e) for e in conj), ALL_STRINGS)
        w = s.witness()
        return None if w is None else Value(STRING, w)
    for shape in normalize_numeric(conj, d):
        x = shape.witness()
        if x is not None:
            return Value(d, x)
    return None


def witness(e: DerivedDatatype) -> Optional[Value]:
    return dsat([e])


def is_empty(e: DerivedDatatype) -> bool:
    return dsat([e]) is None


# -- text form --------------------------------------------------------------

def format_facet(f, top: bool = True) -> str:
    if isinstance(f, Facet):
        return f"{f.op.value} {format_value(f.bound)}"
    if isinstance(f, FacetNot):
        inner = format_facet(f.part, top=False)
        return f"not {inner}"
    word = " and " if isinstance(f, FacetAnd) else " or "
    body = word.join(format_facet(p, top=False) for p in f.parts)
    return body if top else f"({body})"


@lru_cache(maxsize=1 << 16)
def format_datatype(e: DerivedDatatype) -> str:
    if isinstance(e, Whole):
        return e.base.value
    if isinstance(e, OneOf):
        return e.base.value + "{" + ", ".join(format_value(v) for v in e.values) + "}"
    if isinstance(e, Restriction):
        return f"{e.base.value}[{format_facet(e.formula)}]"
    sym = {Union: "|", Intersection: "&", Difference: "\\"}[type(e)]
    return f"({format_datatype(e.left)} {sym} {format_datatype(e.right)})"


for _cls in (Value, Facet, FacetAnd, FacetOr, FacetNot, Whole, OneOf, Restriction, Union,
             Intersection, Difference):
    cache_hash(_cls)
