"""Exception hierarchy shared by every lpvec module."""

from __future__ import annotations

from typing import Optional


class LpvecError(Exception):
    """Base class for all errors raised by lpvec."""


class UsageError(LpvecError):
    """Invalid command-line usage or flag combination."""


class ProgramSyntaxError(LpvecError, ValueError):
    """A program or constraint file could not be parsed."""

    def __init__(
        self,
        message: str,
        line: int,
        column: int,
        source_line: Optional[str] = None,
        path: Optional[str] = None,
    ):
        self.message = message
        self.line = line
        self.column = column
        self.source_line = source_line
        self.path = path
        super().__init__(self._render())

    def _render(self) -> str:
        where = f"{self.path}:" if self.path else "line "
        text = f"{where}{self.line}:{self.column}: {self.message}"
        if self.source_line is not None:
            caret = " " * max(self.column - 1, 0) + "^"
            text += f"\n  {self.source_line}\n  {caret}"
        return text

    def with_path(self, path: str) -> "ProgramSyntaxError":
        return ProgramSyntaxError(
            self.message, self.line, self.column, self.source_line, path
        )


class NotSingleDefinedError(LpvecError, ValueError):
    """An operation that requires an SD program received a non-SD one."""

    def __init__(self, head: str, count: int, operation: str):
        self.head = head
        self.count = count
        super().__init__(
            f"{operation} requires a singly defined program, but atom '{head}' "
            f"heads {count} rules. Transform the program to a d-program first "
            "(lpvec transform) or solve it with a matrix method."
        )


class DimensionMismatchError(LpvecError, ValueError):
    """Operand shapes are incompatible."""


class InfeasibleSpecError(LpvecError, ValueError):
    """A generator specification cannot produce a program."""


class FixpointDivergenceError(LpvecError, RuntimeError):
    """A fixpoint loop exceeded its proven iteration bound."""
