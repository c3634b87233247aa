"""
Link factory for creating link functions from families or descriptors
"""
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from group_md.exceptions import ParamError, UnsupportedFamily
from group_md.links.base import LinkFunction
from group_md.links.chain import ChainLink
from group_md.links.euler import EulerLink
from group_md.links.exponential import StretchedExpLink, SuperExpLink
from group_md.links.kaniadakis import Kaniadakis3Link, KaniadakisLink
from group_md.links.natural import NaturalLink
from group_md.links.tsallis import TsallisLink
from group_md.models.link_family import LinkFamily, LinkRole

FamilyLike = Union[str, LinkFamily]


class LinkFactory:
    """Factory for creating link functions"""

    _links = {
        'natural': NaturalLink,
        'tsallis': TsallisLink,
        'kaniadakis1': KaniadakisLink,
        'kaniadakis3': Kaniadakis3Link,
        'euler': EulerLink,
        'stretched_exp': StretchedExpLink,
        'super_exp': SuperExpLink,
        'chain': ChainLink,
    }

    @classmethod
    def create_link(cls, family: FamilyLike, domain_lo: Optional[float] = None,
                    domain_hi: Optional[float] = None) -> LinkFunction:
        """
        Create a link function

        Args:
            family: LinkFamily or descriptor string such as "tsallis:q=0.25"
            domain_lo: Lower end of the validated domain (family default if None)
            domain_hi: Upper end of the validated domain (family default if None)

        Returns:
            LinkFunction instance

        Raises:
            ParseError: If the descriptor is malformed
            UnsupportedFamily: If the family is not registered
            ParamError: If parameters violate the family invariants
        """
        if isinstance(family, str):
            family = LinkFamily.from_descriptor(family)

        family_id = family.family_id.lower()
        if family_id not in cls._links:
            raise UnsupportedFamily(
                f"Unsupported link family: {family.family_id}. "
                f"Supported families: {', '.join(cls._links.keys())}"
            )

        link_class = cls._links[family_id]
        if family_id == 'chain':
            constituents = [cls.create_link(step) for step, _ in family.steps]
            return link_class(family, constituents, domain_lo, domain_hi)
        return link_class(family, domain_lo, domain_hi)

    @classmethod
    def register_link(cls, family_id: str, link_class: type) -> None:
        """
        Register a new link family

        Args:
            family_id: Identifier used in descriptors
            link_class: LinkFunction subclass to register
        """
        cls._links[family_id.lower()] = link_class

    @classmethod
    def get_supported_families(cls) -> list:
        """Get list of supported link families"""
        return list(cls._links.keys())


@lru_cache(maxsize=256)
def get_link(descriptor: str) -> LinkFunction:
    """Shared link instance for a descriptor (links are immutable)"""
    return LinkFactory.create_link(descriptor)


def compose_chain(steps: Sequence[Tuple[FamilyLike, Union[LinkRole, str]]]) -> LinkFunction:
    """
    Build a chain link from (family, role) steps, outermost first

    Args:
        steps: Nonempty list of (family or descriptor, "log" | "exp")

    Returns:
        LinkFunction whose log is the composed map applied to ln w

    Raises:
        ParamError: If steps is empty or roles do not alternate
    """
    if not steps:
        raise ParamError("Chain must have at least one step")
    parsed: List[Tuple[LinkFamily, LinkRole]] = []
    for family, role in steps:
        if isinstance(family, str):
            family = LinkFamily.from_descriptor(family)
        parsed.append((family, LinkRole(role)))
    return LinkFactory.create_link(LinkFamily.chain(parsed))
