"""Flat orbifolds: Teichmueller dimensions, collapse limits and the wallpaper table.

Groups are passed as catalog keys ("G3", "p4g", "K(5)") or as dicts in the
group JSON format ({"dimension", "generators", "gram", "name"}).
"""

import json as _json

from . import _cxx
from ._cxx import FlatorbError, beta_n, catalog_list, theta_n

__all__ = [
    "FlatorbError",
    "beta_n",
    "catalog_entry",
    "catalog_list",
    "check_entry",
    "classify",
    "collapse",
    "covering_radius",
    "first_homology",
    "holonomy_order",
    "is_torsion_free",
    "normalize",
    "render_svg",
    "special_basis",
    "teich",
    "theta_n",
    "verify_theorem_c",
]


def _spec(group):
    return group if isinstance(group, str) else _json.dumps(group)


def catalog_entry(key):
    return _json.loads(_cxx.catalog_entry(key))


def check_entry(key, seed=0):
    return _cxx.check_entry(key, seed)


def normalize(group):
    return _json.loads(_cxx.normalize(_spec(group)))


def holonomy_order(group):
    return _cxx.holonomy_order(_spec(group))


def is_torsion_free(group):
    return _cxx.is_torsion_free(_spec(group))


def first_homology(group):
    return _cxx.first_homology(_spec(group))


def classify(group):
    return _json.loads(_cxx.classify(_spec(group)))


def teich(group, seed=0):
    total, exact, summary = _cxx.teich(_spec(group), seed)
    return {"total_dim": total, "invariant_form_dim": exact, "summary": summary}


def collapse(group, subspace):
    """subspace: "1,0,0" or "1,0,0;0,1,0" (rows span the collapsed directions)."""
    label, quotient = _cxx.collapse(_spec(group), subspace)
    return {"label": _json.loads(label), "quotient": _json.loads(quotient)}


def special_basis(basis):
    """basis: list of basis vectors."""
    vectors, r0, norms, angles = _cxx.special_basis(basis)
    return {"vectors": vectors, "R0": r0, "norms": norms, "angles": angles}


def covering_radius(basis, eps=1e-4):
    return _cxx.covering_radius(basis, eps)


def verify_theorem_c(seed=0):
    ok, labels, missing, extra = _cxx.verify_theorem_c(seed)
    return {"pass": ok, "labels": labels, "missing": missing, "extra": extra}


def render_svg(group):
    return _cxx.render_svg(_spec(group))
