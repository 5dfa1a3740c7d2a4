"""Constructor tables for the extended calculus."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CtorTable:
    types: dict = field(default_factory=dict)  # type -> [(ctor, arity)]

    def __post_init__(self):
        self._info = {}
        for ty, cs in self.types.items():
            for i, (c, n) in enumerate(cs):
                if c in self._info:
                    raise ValueError(f"constructor {c} declared twice")
                self._info[c] = (ty, n, i)

    def has(self, ctor: str) -> bool:
        return ctor in self._info

    def type_of(self, ctor: str) -> str:
        return self._info[ctor][0]

    def arity(self, ctor: str) -> int:
        return self._info[ctor][1]

    def ctors(self, ty: str) -> list:
        return list(self.types[ty])

    @classmethod
    def parse(cls, text: str) -> "CtorTable":
        """Lines of the form ``List: Nil/0, Cons/2``; ``--`` starts a comment."""
        types = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("--", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise ValueError(f"line {lineno}: expected 'Type: C/n, ...'")
            ty, rest = (p.strip() for p in line.split(":", 1))
            cs = []
            for item in rest.split(","):
                name, _, n = item.strip().partition("/")
                if not name or not n.strip().isdigit():
                    raise ValueError(f"line {lineno}: bad constructor {item.strip()!r}")
                cs.append((name.strip(), int(n)))
            types[ty] = cs
        return cls(types)

    @classmethod
    def load(cls, path) -> "CtorTable":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())


DEFAULT_TABLE = CtorTable({
    "Bool": [("False", 0), ("True", 0)],
    "List": [("Nil", 0), ("Cons", 2)],
    "Pair": [("Pair", 2)],
})
