"""
Functional-equation residuals log_G(xy) = Phi(log_G x, log_G y)
"""
from typing import Callable, Dict, Iterable, Tuple

import numpy as np

from group_md.exceptions import UnsupportedFamily
from group_md.links.base import LinkFunction

GroupLaw = Callable[[LinkFunction, np.ndarray, np.ndarray], np.ndarray]


def _natural(link, x, y):
    return x + y


def _tsallis(link, x, y):
    return x + y + (1.0 - link.q) * x * y


def _kaniadakis(link, x, y):
    k2 = link.kappa ** 2
    return x * np.sqrt(1.0 + k2 * y ** 2) + y * np.sqrt(1.0 + k2 * x ** 2)


GROUP_LAWS: Dict[str, GroupLaw] = {
    'natural': _natural,
    'tsallis': _tsallis,
    'kaniadakis1': _kaniadakis,
}


def group_law_check(link: LinkFunction, pairs: Iterable[Tuple[float, float]]) -> float:
    """
    Max absolute residual of the group law over (x, y) pairs

    Raises:
        UnsupportedFamily: If the family has no closed-form Phi
    """
    law = GROUP_LAWS.get(link.family.family_id)
    if law is None:
        raise UnsupportedFamily(
            f"No closed-form group law for {link.family.family_id}. "
            f"Supported families: {', '.join(GROUP_LAWS)}"
        )
    pairs = np.asarray(list(pairs), dtype=float).reshape(-1, 2)
    if pairs.size == 0:
        return 0.0
    x, y = pairs[:, 0], pairs[:, 1]
    lhs = np.asarray(link.eval_log(x * y), dtype=float)
    rhs = law(link, np.asarray(link.eval_log(x), dtype=float), np.asarray(link.eval_log(y), dtype=float))
    return float(np.max(np.abs(lhs - rhs)))
