"""Real-zero polynomials, interlacers and determinantal representations.

Polynomials and pencils are passed as dicts in the JSON formats used by the
command line tool (or as polynomial text); reports come back as dicts.
Points are sequences of numbers or rational strings such as "1/2".
"""

import json
from fractions import Fraction

import numpy as np

from . import _core
from ._core import ConstructionError, ParseError

__all__ = [
    "ConstructionError",
    "ParseError",
    "parse_polynomial",
    "rz_check",
    "hermite_check",
    "membership",
    "interlace",
    "construct",
    "verify",
    "cross_check",
    "realify",
    "det_poly",
    "pencil_at",
    "corpus_names",
    "corpus_instance",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def _point(x):
    if x is None:
        return []
    return [v if isinstance(v, str) else str(Fraction(v)) for v in x]


def parse_polynomial(text):
    return json.loads(_core.parse_polynomial(text))


def rz_check(poly, x0=None, lines=200, tol=1e-8, seed=0, mode=""):
    return json.loads(_core.rz_check(_text(poly), _point(x0), lines, tol, seed, mode))


def hermite_check(poly, x0=None, samples=200, tol=1e-8, seed=0, mode=""):
    return json.loads(_core.hermite_check(_text(poly), _point(x0), samples, tol, seed, mode))


def membership(poly, x, x0=None, tol=1e-9, mode=""):
    """Levels p(x) >= 0, p'(x) >= 0, ... of the nested description; inside iff all hold."""
    levels = _core.membership_levels(_text(poly), _point(x), _point(x0), tol, mode)
    return all(levels), levels


def interlace(poly, q=None, x0=None, lines=200, tol=1e-8, seed=0, mode=""):
    qtext = None if q is None else _text(q)
    return json.loads(_core.interlace(_text(poly), qtext, _point(x0), lines, tol, seed, mode))


def construct(poly, x0=None, seed=0, mode=""):
    return json.loads(_core.construct(_text(poly), _point(x0), seed, mode))


def verify(pencil, poly, x0=None, tol=1e-6, samples=200, seed=0, mode=""):
    return json.loads(_core.verify(_text(pencil), _text(poly), _point(x0), tol, samples, seed, mode))


def cross_check(pencil, x0=None, lines=100, tol=1e-8, seed=0, mode=""):
    return json.loads(_core.cross_check(_text(pencil), _point(x0), lines, tol, seed, mode))


def realify(pencil):
    return json.loads(_core.realify(_text(pencil)))


def det_poly(pencil):
    return json.loads(_core.det_poly(_text(pencil)))


def pencil_at(pencil, x):
    return np.asarray(_core.pencil_at(_text(pencil), [float(v) for v in x]))


def corpus_names():
    return list(_core.corpus_names())


def corpus_instance(name):
    return json.loads(_core.corpus_instance(name))
