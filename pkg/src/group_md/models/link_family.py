"""
Link family descriptors

A family is addressed by a string "family:param=value,param=value", e.g.
"tsallis:q=0.25" or "chain:[tsallis:q=0.5>log|kaniadakis1:kappa=0.5>exp]".
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

from group_md.exceptions import ParseError


class LinkRole(Enum):
    """Role of a constituent inside a chain"""
    LOG = "log"
    EXP = "exp"


# Canonical parameter order per family
FAMILY_PARAMS: Dict[str, Tuple[str, ...]] = {
    "natural": (),
    "tsallis": ("q",),
    "kaniadakis1": ("kappa",),
    "kaniadakis3": ("kappa", "r", "lam"),
    "euler": ("a", "b"),
    "stretched_exp": ("alpha", "gamma"),
    "super_exp": ("alpha", "gamma"),
    "chain": (),
}


@dataclass(frozen=True)
class LinkFamily:
    """Parameterized link family; chains carry their ordered steps"""
    family_id: str
    params: Tuple[Tuple[str, float], ...] = ()
    steps: Tuple[Tuple["LinkFamily", LinkRole], ...] = field(default=())

    @classmethod
    def of(cls, family_id: str, **params: float) -> "LinkFamily":
        """Build a non-chain family from keyword parameters"""
        if family_id not in FAMILY_PARAMS or family_id == "chain":
            raise ParseError(f"Unknown link family: {family_id}")
        names = FAMILY_PARAMS[family_id]
        missing = [n for n in names if n not in params]
        extra = [n for n in params if n not in names]
        if missing or extra:
            raise ParseError(
                f"Family {family_id} expects parameters {names}, "
                f"missing {missing}, unexpected {extra}"
            )
        return cls(family_id, tuple((n, float(params[n])) for n in names))

    @classmethod
    def chain(cls, steps: List[Tuple["LinkFamily", LinkRole]]) -> "LinkFamily":
        """Build a chain family from (family, role) steps, outermost first"""
        return cls("chain", (), tuple((fam, LinkRole(role)) for fam, role in steps))

    @property
    def param_dict(self) -> Dict[str, float]:
        return dict(self.params)

    def param(self, name: str) -> float:
        """Get a parameter value by name"""
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(f"Family {self.family_id} has no parameter {name}")

    def with_param(self, name: str, value: float) -> "LinkFamily":
        """Copy with one parameter replaced"""
        if name not in FAMILY_PARAMS.get(self.family_id, ()):
            raise ParseError(f"Family {self.family_id} has no parameter {name}")
        return LinkFamily(
            self.family_id,
            tuple((k, float(value) if k == name else v) for k, v in self.params),
            self.steps,
        )

    @property
    def descriptor(self) -> str:
        if self.family_id == "chain":
            inner = "|".join(f"{fam.descriptor}>{role.value}" for fam, role in self.steps)
            return f"chain:[{inner}]"
        if not self.params:
            return self.family_id
        body = ",".join(f"{k}={v!r}" for k, v in self.params)
        return f"{self.family_id}:{body}"

    def __str__(self) -> str:
        return self.descriptor

    @classmethod
    def from_descriptor(cls, text: str) -> "LinkFamily":
        """
        Parse a descriptor string

        Args:
            text: Descriptor such as "tsallis:q=0.25"

        Returns:
            LinkFamily

        Raises:
            ParseError: If the descriptor is malformed
        """
        text = text.strip()
        if not text:
            raise ParseError("Empty link descriptor")

        family_id, _, body = text.partition(":")
        family_id = family_id.strip().lower()

        if family_id == "chain":
            body = body.strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise ParseError(f"Chain descriptor must be bracketed: {text}")
            steps = []
            for part in _split_top_level(body[1:-1], "|"):
                fam_text, sep, role_text = part.rpartition(">")
                if not sep:
                    raise ParseError(f"Chain step needs a '>log' or '>exp' role: {part}")
                try:
                    role = LinkRole(role_text.strip().lower())
                except ValueError:
                    raise ParseError(f"Unknown chain role '{role_text}' in {text}")
                steps.append((cls.from_descriptor(fam_text), role))
            if not steps:
                raise ParseError(f"Chain has no steps: {text}")
            return cls.chain(steps)

        if family_id not in FAMILY_PARAMS:
            raise ParseError(
                f"Unknown link family '{family_id}'. "
                f"Supported families: {', '.join(FAMILY_PARAMS)}"
            )

        params: Dict[str, float] = {}
        if body.strip():
            for item in body.split(","):
                key, eq, value = item.partition("=")
                if not eq:
                    raise ParseError(f"Malformed parameter '{item}' in {text}")
                try:
                    params[key.strip()] = float(value)
                except ValueError:
                    raise ParseError(f"Parameter {key.strip()} is not a number in {text}")
        return cls.of(family_id, **params)


def _split_top_level(text: str, sep: str) -> List[str]:
    """Split on sep, ignoring separators nested inside brackets"""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if current or parts:
        parts.append("".join(current))
    return [p for p in (s.strip() for s in parts) if p]
