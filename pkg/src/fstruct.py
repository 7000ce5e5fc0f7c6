"""Flat feature structures: atoms, variables, explicit bindings and unification.

Storage and unification go through `nltk.featstruct`. A `FeatureStructure` wraps a
frozen `FeatStruct`; bindings are the nltk `{Variable: value}` table held in an
immutable `Bindings`, so a derivation rolls back by keeping the older bindings.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass

from nltk.featstruct import FeatStruct, UnificationFailure, substitute_bindings
from nltk.featstruct import unify as unify_featstructs
from nltk.sem.logic import Variable

Var = Variable


@dataclass(frozen=True, order=True)
class Atom:
    symbol: str

    def __post_init__(self):
        if not self.symbol:
            raise ValueError("atom symbols can't be empty")

    def __str__(self) -> str:
        return self.symbol


FeatureValue = Atom | Var


def parse_value(text: str) -> FeatureValue:
    """Capitalised names are variables, anything else an atom."""
    if text[:1].isupper():
        return Var(text)
    return Atom(text)


def _frozen(entries: Mapping[str, FeatureValue]) -> FeatStruct:
    fs = FeatStruct({name: entries[name] for name in sorted(entries)})
    fs.freeze()
    return fs


class FeatureStructure(Mapping[str, FeatureValue]):
    """Immutable map from feature names to atoms or variables, backed by a frozen FeatStruct."""

    __slots__ = ("_fs",)

    def __init__(self, entries: Mapping[str, FeatureValue] | None = None, **features: str):
        merged = dict(entries or {})
        for name, value in features.items():
            merged[name] = parse_value(value)
        self._fs = _frozen(merged)

    @property
    def featstruct(self) -> FeatStruct:
        return self._fs

    def __getitem__(self, name: str) -> FeatureValue:
        return self._fs[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._fs.keys())

    def __len__(self) -> int:
        return len(self._fs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FeatureStructure):
            return self._fs == other._fs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._fs)

    def __repr__(self) -> str:
        return f"FeatureStructure({str(self)})"

    def __str__(self) -> str:
        return "{" + ", ".join(f"{name}={value}" for name, value in self.items()) + "}"

    def symbol(self, name: str) -> str | None:
        """Atom symbol for a feature, None if absent or still a variable."""
        value = self._fs.get(name)
        return value.symbol if isinstance(value, Atom) else None

    def variables(self) -> set[Var]:
        return set(self._fs.variables())


EMPTY = FeatureStructure()


class Bindings(Mapping[Var, FeatureValue]):
    """Immutable view of an nltk bindings table. Unification works on a copy."""

    __slots__ = ("_table",)

    def __init__(self, table: Mapping[Var, FeatureValue] | None = None):
        self._table = dict(table or {})

    def __getitem__(self, var: Var) -> FeatureValue:
        return self._table[var]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def __repr__(self) -> str:
        inner = ", ".join(f"{var}↦{value}" for var, value in sorted(self._table.items()))
        return f"Bindings({inner})"

    def table(self) -> dict[Var, FeatureValue]:
        return dict(self._table)

    def walk(self, value: FeatureValue) -> FeatureValue:
        """End of a binding chain: an atom or an unbound variable."""
        if not isinstance(value, Var):
            return value
        return substitute_bindings(FeatStruct(value=value), self._table)["value"]


@dataclass(frozen=True)
class Failure:
    """Unification clash. A value, not an exception.

    `left` is None when the clash is a required feature missing on one side.
    """
    feature: str
    left: FeatureValue | None
    right: FeatureValue | None
    address: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        where = f" at {self.address}" if self.address is not None else ""
        if self.left is None:
            return f"feature '{self.feature}' required but absent{where}"
        return f"clash on '{self.feature}': {self.left} vs {self.right}{where}"

    def at(self, address: tuple[int, ...]) -> Failure:
        if self.address is not None:
            return self
        return Failure(self.feature, self.left, self.right, tuple(address))


def unify(a: FeatureStructure, b: FeatureStructure,
          env: Bindings | None = None) -> tuple[FeatureStructure, Bindings] | Failure:
    """Union of both structures with shared features unified.

    Returns the merged structure (bound variables substituted) and the extended
    bindings, or a Failure naming the first clashing feature in lexicographic order.
    """
    table = env.table() if env is not None else {}
    clashes: list[Failure] = []

    def record(left, right, path):
        clashes.append(Failure(path[-1], left, right))
        return UnificationFailure

    merged = unify_featstructs(a.featstruct, b.featstruct, bindings=table, fail=record, rename_vars=False)
    if merged is None:
        return clashes[0]
    return FeatureStructure(dict(merged)), Bindings(table)


def subsumes(general: FeatureStructure, specific: FeatureStructure, env: Bindings | None = None) -> bool:
    """True when unifying `general` into `specific` adds nothing once bindings are applied."""
    outcome = unify(specific, general, env)
    if isinstance(outcome, Failure):
        return False
    merged, env = outcome
    return resolve(merged, env) == resolve(specific, env)


def overwrite(fs: FeatureStructure, feature: str, value: FeatureValue) -> FeatureStructure:
    entries = dict(fs)
    entries[feature] = value
    return FeatureStructure(entries)


def remove(fs: FeatureStructure, feature: str) -> FeatureStructure:
    if feature not in fs:
        return fs
    return FeatureStructure({name: value for name, value in fs.items() if name != feature})


def resolve(fs: FeatureStructure, env: Bindings) -> FeatureStructure:
    """Replace every bound variable by the end of its binding chain."""
    return FeatureStructure(dict(substitute_bindings(fs.featstruct, env.table())))


def satisfies(fs: FeatureStructure, required: frozenset[str] | set[str]) -> str | None:
    """First required feature missing from fs, or None."""
    for name in sorted(required):
        if name not in fs:
            return name
    return None
