"""Python access to the potential-center library."""

import json as _json

from ._potcenter import (
    Body as _Body,
    PotcenterError,
    closed_form_root,
    hausdorff_distance,
    lower_bound_r_tilde,
    r_tilde,
)
from . import _potcenter as _core

__all__ = [
    "PotcenterError",
    "ball",
    "annulus",
    "dumbbell",
    "polygon",
    "evaluate",
    "find_centers",
    "unfolded_region",
    "r_tilde",
    "closed_form_root",
    "lower_bound_r_tilde",
    "hausdorff_distance",
    "run",
]


def _body(spec, cone):
    if cone is not None:
        kappa, delta = cone
        spec["cone"] = {"kappa": kappa, "delta": "inf" if delta == float("inf") else delta}
    return _Body.from_json(_json.dumps(spec))


def ball(radius=1.0, center=None, dim=2, cone=None):
    center = list(center) if center is not None else [0.0] * dim
    return _body({"dim": len(center), "shape": "ball", "center": center, "radius": radius}, cone)


def annulus(r_in=1.0, r_out=3.0, center=None, dim=2, cone=None):
    center = list(center) if center is not None else [0.0] * dim
    return _body({"dim": len(center), "shape": "annulus", "center": center, "r_in": r_in, "r_out": r_out}, cone)


def dumbbell(epsilon=0.2, dim=2, cone=None):
    return _body({"dim": dim, "shape": "dumbbell", "epsilon": epsilon}, cone)


def polygon(vertices, cone=None):
    return _body({"dim": 2, "shape": "polygon", "vertices": [list(v) for v in vertices]}, cone)


def _kernel(kernel):
    """Accepts a dict such as {"type": "poisson", "h": 0.1}."""
    return _json.dumps(kernel)


def evaluate(body, kernel, x, with_complement=False):
    return _core.evaluate(body, _kernel(kernel), list(x), with_complement)


def find_centers(body, kernel, resolution=0.0, exhaustive=False):
    return _core.find_centers(body, _kernel(kernel), resolution, exhaustive)


def unfolded_region(body, direction_count=256):
    return _core.unfolded_region(body, direction_count)


def run(config, out_dir, svg=False):
    """Runs an experiment config (dict) and returns (result dict, written files)."""
    text, files = _core.run_config(_json.dumps(config), str(out_dir), svg)
    return _json.loads(text), files
