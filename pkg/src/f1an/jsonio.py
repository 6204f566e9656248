"""JSON encoding of numbers, norm values and elements.

Numbers are written as exact rationals (``"13/4"``) when possible and as
decimals with 12 significant digits otherwise.  Element documents are
recognised by their keys.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .errors import InvalidElement
from .numeric import NormValue
from .perfectoid import PuiseuxPoly
from .scalars import (
    ArchInt,
    Complex,
    Padic,
    PrimeField,
    RationalTrivial,
    Real,
    Scalar,
    default_precision,
)
from .witt import FFElement, WittVector


def parse_rational(x) -> Fraction:
    """``3``, ``"3/4"``, ``"0.75"`` or ``{"num": 3, "den": 4}``."""
    try:
        if isinstance(x, dict):
            return Fraction(int(x["num"]), int(x.get("den", 1)))
        if isinstance(x, bool):
            raise TypeError
        if isinstance(x, float):
            return Fraction(str(x))
        return Fraction(x)
    except (TypeError, ValueError, KeyError, ZeroDivisionError):
        raise InvalidElement(f"not a rational number: {x!r}") from None


def number_to_json(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return f"{float(x):.12g}"


def norm_to_json(v: NormValue) -> dict:
    out: dict[str, Any] = {"log2": None if v.is_zero else v.log2}
    fr = v.as_fraction()
    if fr is not None:
        out["value"] = str(fr)
    else:
        out["value"] = f"{float(v):.12g}"
        if v.is_exact:
            out["exact"] = v.describe()
    return out


# rings and scalars


def ring_from_json(obj) -> Any:
    if isinstance(obj, str):
        obj = {"kind": obj}
    kind = obj.get("kind")
    if kind == "padic":
        return Padic(int(obj["p"]), int(obj.get("N", default_precision())))
    if kind in ("fp", "prime-field"):
        return PrimeField(int(obj["p"]))
    if kind == "rational":
        return RationalTrivial()
    if kind == "archint":
        return ArchInt(parse_rational(obj.get("beta", 1)))
    if kind == "real":
        return Real(parse_rational(obj.get("eps", 1)))
    if kind == "complex":
        return Complex(parse_rational(obj.get("eps", 1)))
    raise InvalidElement(f"unknown ring {obj!r}")


def ring_to_json(ring) -> dict:
    if isinstance(ring, Padic):
        return {"kind": "padic", "p": ring.p, "N": ring.N}
    if isinstance(ring, PrimeField):
        return {"kind": "fp", "p": ring.p}
    if isinstance(ring, RationalTrivial):
        return {"kind": "rational"}
    if isinstance(ring, ArchInt):
        return {"kind": "archint", "beta": str(ring.beta)}
    if isinstance(ring, Complex):
        return {"kind": "complex", "eps": str(ring.eps)}
    if isinstance(ring, Real):
        return {"kind": "real", "eps": str(ring.eps)}
    raise InvalidElement(f"cannot encode ring {ring!r}")


def scalar_value_to_json(c: Scalar):
    ring = c.ring
    if isinstance(ring, Padic):
        v, u, _ = c.value
        if v is None:
            return "0"
        return str(Fraction(u) * Fraction(ring.p) ** v)
    if isinstance(ring, Complex):
        return [c.value.real, c.value.imag]
    if isinstance(ring, Real):
        return c.value
    return str(c.value)


def scalar_value_from_json(ring, v) -> Scalar:
    if isinstance(ring, Complex):
        if isinstance(v, list):
            return ring.make(complex(float(v[0]), float(v[1])))
        return ring.make(complex(v))
    if isinstance(ring, Real):
        return ring.make(float(v))
    return ring.make(parse_rational(v))


def scalar_to_json(c: Scalar) -> dict:
    return {"ring": ring_to_json(c.ring), "value": scalar_value_to_json(c)}


# elements


def _base_from_json(obj: dict):
    from .monoids import GeometricMonoid
    from .normcore import FiniteNormedSet

    kind = obj.get("kind", "monoid")
    if kind == "monoid":
        neg = obj.get("neg_radius")
        pos = obj.get("radius", "1/2")
        if "radii" in obj:
            neg, pos = obj["radii"]
        return GeometricMonoid(
            obj.get("carrier", "Q+"),
            parse_rational(pos),
            neg_radius=None if neg is None else parse_rational(neg),
            denominator=int(obj.get("denominator", 1)),
            prime=obj.get("prime"),
        )
    if kind == "set":
        elems = obj["elements"]
        return FiniteNormedSet(["*", *elems], "*", {k: parse_rational(v) for k, v in elems.items()})
    raise InvalidElement(f"unknown base {obj!r}")


def _base_to_json(base) -> dict:
    from .monoids import GeometricMonoid

    if isinstance(base, GeometricMonoid):
        out = {"kind": "monoid", "carrier": base.carrier}
        if base.two_sided:
            out["radii"] = [_nv_text(base.neg_radius), _nv_text(base.radius)]
        else:
            out["radius"] = _nv_text(base.radius)
        if base.denominator != 1:
            out["denominator"] = base.denominator
        if base.prime is not None:
            out["prime"] = base.prime
        return out
    return {"kind": "set", "elements": {str(x): _nv_text(base.norm(x)) for x in base.nonbase()}}


def _nv_text(v: NormValue) -> str:
    fr = v.as_fraction()
    if fr is None:
        raise InvalidElement("only rational radii and norms can be encoded")
    return str(fr)


def load_element(obj: dict):
    """Build an element from a JSON document, recognising its kind by keys."""
    from .basechange import F1Element
    from .monoids import GeometricMonoid

    if not isinstance(obj, dict):
        raise InvalidElement("an element document must be a JSON object")
    try:
        if "digits" in obj:
            return WittVector.from_json(obj)
        if "base" in obj:
            base = _base_from_json(obj["base"])
            ring_obj = obj.get("ring", "padic")
            if isinstance(ring_obj, str):
                ring_obj = {"kind": ring_obj, **{k: obj[k] for k in ("p", "N", "eps", "beta") if k in obj}}
            ring = ring_from_json(ring_obj)
            support = {}
            for t in obj.get("terms", []):
                key = parse_rational(t["exp"]) if isinstance(base, GeometricMonoid) else t["elem"]
                c = t.get("coeff", 1)
                if isinstance(c, dict):
                    c = c.get("value", 0)
                support[key] = scalar_value_from_json(ring, c)
            return F1Element(base, support, ring)
        if "terms" in obj and "p" in obj:
            terms = obj["terms"]
            if any("n" in t for t in terms):
                return FFElement.from_json(obj)
            return PuiseuxPoly.from_json(obj)
        if "ring" in obj and "value" in obj:
            ring = ring_from_json(obj["ring"] if isinstance(obj["ring"], dict) else {"kind": obj["ring"], **obj})
            return scalar_value_from_json(ring, obj["value"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidElement(f"malformed element document: {exc}") from None
    raise InvalidElement("cannot recognise the element document")


def dump_element(x) -> dict:
    from .basechange import F1Element
    from .monoids import GeometricMonoid

    if isinstance(x, (WittVector, FFElement, PuiseuxPoly)):
        return x.to_json()
    if isinstance(x, Scalar):
        return scalar_to_json(x)
    if isinstance(x, F1Element):
        terms = []
        for k in sorted(x.support, key=lambda k: (str(type(k)), k)):
            c = scalar_value_to_json(x.support[k])
            if isinstance(x.base, GeometricMonoid):
                terms.append({"exp": {"num": k.numerator, "den": k.denominator}, "coeff": {"value": c}})
            else:
                terms.append({"elem": k, "coeff": {"value": c}})
        return {"base": _base_to_json(x.base), "ring": ring_to_json(x.ring), "terms": terms}
    raise InvalidElement(f"cannot encode {type(x).__name__}")
