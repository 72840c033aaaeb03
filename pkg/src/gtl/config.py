"""Typed/untyped assignments for the configurable modules of a program."""
from __future__ import annotations

from dataclasses import dataclass

from .syntax.ast import Lang


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    """One point of the configuration lattice.

    ``modules`` lists the configurable modules in declaration order; the
    first module is the most significant bit of ``bits``.
    """

    modules: tuple
    bits: int

    @property
    def size(self):
        return len(self.modules)

    def bit(self, name):
        i = self.modules.index(name)
        return (self.bits >> (self.size - 1 - i)) & 1

    def is_typed(self, module):
        if module.lang is Lang.TYPED:
            return True
        if module.lang is Lang.UNTYPED:
            return False
        return bool(self.bit(module.name))

    @property
    def bitstring(self):
        return format(self.bits, f"0{self.size}b") if self.size else ""

    @property
    def typed_count(self):
        return bin(self.bits).count("1")

    def __str__(self):
        return self.bitstring or "-"

    @classmethod
    def for_program(cls, modules, spec="typed"):
        """Parse ``spec``: a bit string, or the keywords ``typed``/``untyped``."""
        names = configurable_modules(modules)
        n = len(names)
        if spec == "typed":
            return cls(names, (1 << n) - 1)
        if spec == "untyped":
            return cls(names, 0)
        if isinstance(spec, int):
            bits = spec
        else:
            if len(spec) != n or set(spec) - {"0", "1"}:
                raise ConfigError(
                    f"configuration must be {n} bits for modules {', '.join(names) or '(none)'}"
                    f", got {spec!r}"
                )
            bits = int(spec, 2) if n else 0
        if not 0 <= bits < (1 << n) or (n == 0 and bits):
            raise ConfigError(f"configuration {bits} out of range for {n} modules")
        return cls(names, bits)


def configurable_modules(modules):
    return tuple(m.name for m in modules if m.lang is Lang.CONFIGURABLE)
