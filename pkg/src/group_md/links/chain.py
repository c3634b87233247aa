"""
Chain link functions: alternating compositions of group logarithms and
group exponentials applied on top of the natural logarithm
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from group_md.exceptions import DomainError, ParamError
from group_md.links.base import LinkFunction
from group_md.models.link_family import LinkFamily, LinkRole


class ChainLink(LinkFunction):
    """
    log(w) = chi(ln w), with chi = G_1 o G_2 o ... o G_m where each G_i is a
    constituent's log (role "log") or exp (role "exp"), outermost first.

    Evaluation is plain functional composition of the constituents, never
    series inversion. The inverse applies the steps outermost first with
    roles swapped and finishes with exp.

    A step pair that undoes itself is the identity only where the inner
    exponential does not clip. For [(tsallis q, log), (tsallis q, exp)] that
    means ln w >= -1/(1-q), i.e. w >= exp(-1/(1-q)); below it exp_q clips
    to 0 and the chain returns the floor log_q(0) = -1/(1-q).
    """

    family_id = "chain"

    def __init__(self, family: LinkFamily, constituents: Sequence[LinkFunction],
                 domain_lo: Optional[float] = None, domain_hi: Optional[float] = None):
        if len(constituents) != len(family.steps):
            raise ParamError(
                f"Chain has {len(family.steps)} steps but {len(constituents)} constituents"
            )
        self.steps: Tuple[Tuple[LinkFunction, LinkRole], ...] = tuple(
            (link, role) for link, (_, role) in zip(constituents, family.steps)
        )
        super().__init__(family, domain_lo, domain_hi)

    def _validate(self) -> None:
        if not self.steps:
            raise ParamError("Chain must have at least one step")
        roles = [role for _, role in self.steps]
        for prev, cur in zip(roles, roles[1:]):
            if prev is cur:
                raise ParamError(f"Chain roles must alternate: {self.descriptor}")
        try:
            with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
                at_zero = self._log(np.zeros(1))
            self._finite_at_zero = bool(np.all(np.isfinite(at_zero)))
        except DomainError:
            self._finite_at_zero = False

    def finite_at_zero(self) -> bool:
        return self._finite_at_zero

    @staticmethod
    def _apply(link: LinkFunction, role: LinkRole, x: np.ndarray) -> np.ndarray:
        if role is LinkRole.EXP:
            return np.asarray(link.eval_exp(x), dtype=float)
        if link.finite_at_zero():
            return np.asarray(link.eval_log(x), dtype=float)
        # continuous extension log(0) = -inf for divergent constituents
        out = np.full(x.shape, -np.inf)
        positive = x != 0
        if positive.any():
            out[positive] = link.eval_log(x[positive])
        return out

    def _log(self, w: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.log(w))
        for link, role in reversed(self.steps):
            x = self._apply(link, role, x)
        return x.reshape(np.shape(w))

    def _exp(self, x: np.ndarray) -> np.ndarray:
        y = np.atleast_1d(x).astype(float)
        for link, role in self.steps:
            inverse = LinkRole.LOG if role is LinkRole.EXP else LinkRole.EXP
            y = self._apply(link, inverse, y)
        return np.exp(y).reshape(np.shape(x))
