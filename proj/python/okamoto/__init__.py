"""Slices of Okamoto's functions: exact orbit dynamics and certificates."""

import json

from ._okamoto import OkamotoError, exit_code, render_svg
from . import _okamoto

__all__ = [
    "OkamotoError",
    "certificate",
    "check",
    "slice",
    "bonacci_verify",
    "dimension",
    "render_svg",
    "exit_code",
]


def certificate(kind, **params):
    return json.loads(_okamoto.make_certificate(kind, json.dumps(params)))


def check(cert):
    return json.loads(_okamoto.check(json.dumps(cert)))


def slice(q, y, depth=48, oracle=False):
    return certificate("slice", q=str(q), y=str(y), depth=depth, oracle=oracle)


def bonacci_verify(k=3, m=1, delta="(01)*", depth=60):
    return certificate("bonacci-verify", k=k, m=m, delta=delta, depth=depth)


def dimension(q, y, method="mass", **params):
    return certificate("dimension", q=str(q), y=str(y), method=method, **params)
