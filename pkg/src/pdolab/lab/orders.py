"""Closed-form critical symbol orders for each studied inequality.

Tags name the inequality being probed:

``lp``            L^p boundedness, ``1 < p < inf``
``sharp-p``       ``M#(T f) <~ M_p f``, ``1 < p <= 2``
``sharp-eps``     ``M#_eps(T f) <~ M f``, ``0 < rho <= 1``
``sharp-rough``   ``M#(T* f) <~ M f`` for rough symbols, ``0 < rho < 1``, dual only
``weighted``      weighted L^p with ``w in A_{p/r}``, ``1 <= r <= 2``
``weak11``        weighted weak (1,1) (and A_p bounds), ``0 < rho <= 1``
``atom-lp``       H^p -> L^p, ``0 < p <= 1``
``hp``            H^p -> H^p, ``0 < p < 1``
``molecule``      images of atoms as molecules; same orders as ``hp``
"""

from __future__ import annotations

TAGS = ("lp", "sharp-p", "sharp-eps", "sharp-rough", "weighted", "weak11", "atom-lp", "hp", "molecule")


def _excess(rho, delta):
    return max(delta - rho, 0.0)


def critical_order(
    tag: str,
    n: int,
    p: float | None = None,
    r: float | None = None,
    rho: float = 1.0,
    delta: float = 0.0,
    dual: bool = False,
) -> float:
    if tag not in TAGS:
        raise ValueError(f"unknown experiment tag {tag!r}; expected one of {TAGS}")
    if not 0 <= rho <= 1 or not 0 <= delta < 1:
        raise ValueError("need 0 <= rho <= 1 and 0 <= delta < 1")
    ex = _excess(rho, delta)

    if tag == "lp":
        _need(p is not None and p > 1, "lp needs 1 < p < inf")
        base = -n * (1 - rho) * abs(0.5 - 1 / p)
        if dual:
            return base - n * ex * (1 - 1 / min(p, 2))
        return base - n * ex / max(p, 2)

    if tag == "sharp-p":
        _need(p is not None and 1 < p <= 2, "sharp-p needs 1 < p <= 2")
        base = -n * (1 - rho) / p
        return base - n / 2 * ex if dual else base

    if tag in ("sharp-eps", "weak11"):
        _need(rho > 0, f"{tag} needs rho > 0")
        return -n * (1 - rho)

    if tag == "sharp-rough":
        _need(0 < rho < 1, "sharp-rough needs 0 < rho < 1")
        _need(dual, "sharp-rough concerns the dual operator only")
        return -n * (1 - rho)

    if tag == "weighted":
        _need(r is not None and 1 <= r <= 2, "weighted needs 1 <= r <= 2")
        _need(p is not None and p >= r and p > 1, "weighted needs p >= r and p > 1")
        base = -n / r * (1 - rho)
        return base - n / 2 * ex if dual else base

    # atom-lp, hp, molecule
    _need(p is not None and 0 < p <= 1, f"{tag} needs 0 < p <= 1")
    if tag in ("hp", "molecule"):
        _need(p < 1, f"{tag} needs p < 1")
    base = -n * (1 - rho) * (1 / p - 0.5)
    return base if dual else base - n / 2 * ex


def _need(cond, msg):
    if not cond:
        raise ValueError(msg)
