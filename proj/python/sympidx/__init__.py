"""Bott functions, Conley-Zehnder indices and index recurrence for symplectic paths."""

import json

from ._sympidx import (
    Error,
    Path,
    bott,
    bott_plus,
    cz_index,
    defect,
    direct_sum,
    inverse,
    iterate,
    mean_index,
    mu_rs,
    nullity,
    perturbed_gamma0,
    product,
    sdc,
    splitting_numbers,
)
from . import _sympidx

SCHEMA_VERSION = 1


def realize(spec, resolution=2048):
    """Realize a path from a spec dict (the "path" member of a path document) or a full document."""
    if isinstance(spec, str):
        text = spec
    else:
        doc = spec if "schema_version" in spec else {"schema_version": SCHEMA_VERSION, "path": spec}
        text = json.dumps(doc)
    return _sympidx.realize_json(text, resolution)


def index_report(path, grid=64):
    return json.loads(_sympidx.index_report_json(path, grid))


def find_irt(paths, eta=0.5, ell0=1, N=1, k_bound=100000):
    out = _sympidx.find_irt_json(list(paths), eta, ell0, N, k_bound)
    return None if out is None else json.loads(out)


def verify_irt(paths, certificate):
    return json.loads(_sympidx.verify_irt_json(list(paths), json.dumps(certificate)))


__all__ = [
    "Error", "Path", "SCHEMA_VERSION", "bott", "bott_plus", "cz_index", "defect", "direct_sum", "find_irt",
    "index_report", "inverse", "iterate", "mean_index", "mu_rs", "nullity", "perturbed_gamma0", "product",
    "realize", "sdc", "splitting_numbers", "verify_irt",
]
