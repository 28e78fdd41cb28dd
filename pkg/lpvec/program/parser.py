"""
Program file format

    % comment
    p.                  fact
    h :- b1, b2.        conjunctive rule
    h :- b1 ; b2.       disjunctive rule (d-rule)
    :- b1, b2.          constraint

Atom names match ``[a-z][A-Za-z0-9_]*``. A clause may span lines.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from lpvec.errors import ProgramSyntaxError
from lpvec.program.model import (
    AtomTable,
    ConstraintSet,
    DefiniteProgram,
    Rule,
    RuleKind,
    dedupe_rules,
)

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f]+)"
    r"|(?P<nl>\n)"
    r"|(?P<comment>%[^\n]*)"
    r"|(?P<neck>:-)"
    r"|(?P<atom>[a-z][A-Za-z0-9_]*)"
    r"|(?P<comma>,)"
    r"|(?P<semi>;)"
    r"|(?P<dot>\.)"
)
_JUNK_RE = re.compile(r"[^\s,;.%]+|\S")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class _Clause:
    head: Optional[_Token]
    body: Tuple[_Token, ...]
    kind: RuleKind
    start: _Token


def _tokenize(text: str) -> Iterator[_Token]:
    lines = text.split("\n")
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            junk = _JUNK_RE.match(text, pos)
            bad = junk.group(0) if junk else text[pos]
            raise ProgramSyntaxError(
                f"unknown token '{bad}' (atoms must match [a-z][A-Za-z0-9_]*)",
                line,
                pos - line_start + 1,
                lines[line - 1],
            )
        kind = match.lastgroup or ""
        if kind == "nl":
            line += 1
            line_start = match.end()
        elif kind not in ("ws", "comment"):
            yield _Token(kind, match.group(0), line, pos - line_start + 1)
        pos = match.end()


class _ClauseReader:
    def __init__(self, text: str):
        self._lines = text.split("\n")
        self._tokens = list(_tokenize(text))
        self._pos = 0

    def error(self, message: str, token: Optional[_Token]) -> ProgramSyntaxError:
        if token is None:
            last = len(self._lines)
            return ProgramSyntaxError(
                message, last, len(self._lines[-1]) + 1, self._lines[-1]
            )
        return ProgramSyntaxError(
            message, token.line, token.column, self._lines[token.line - 1]
        )

    def _peek(self) -> Optional[_Token]:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _take(self) -> Optional[_Token]:
        token = self._peek()
        if token is not None:
            self._pos += 1
        return token

    def _expect_atom(self, after: str) -> _Token:
        token = self._take()
        if token is None:
            raise self.error(
                f"expected an atom after {after}, found end of input", None
            )
        if token.kind != "atom":
            raise self.error(
                f"expected an atom after {after}, found '{token.text}'", token
            )
        return token

    def clauses(self) -> Iterator[_Clause]:
        while self._peek() is not None:
            yield self._clause()

    def _clause(self) -> _Clause:
        start = self._take()
        assert start is not None
        head: Optional[_Token] = None
        if start.kind == "atom":
            head = start
            follow = self._take()
            if follow is None:
                raise self.error(
                    f"clause for '{head.text}' is not terminated by '.'", None
                )
            if follow.kind == "dot":
                return _Clause(head, (), RuleKind.CONJUNCTIVE, start)
            if follow.kind != "neck":
                raise self.error(
                    f"expected '.' or ':-' after '{head.text}', found '{follow.text}'",
                    follow,
                )
        elif start.kind != "neck":
            raise self.error(
                f"empty head: a clause must start with an atom or ':-', "
                f"found '{start.text}'",
                start,
            )

        body = [self._expect_atom("':-'")]
        separator: Optional[str] = None
        while True:
            token = self._take()
            if token is None:
                raise self.error("clause is not terminated by '.'", None)
            if token.kind == "dot":
                break
            if token.kind not in ("comma", "semi"):
                raise self.error(
                    f"expected ',', ';' or '.' in rule body, found '{token.text}'",
                    token,
                )
            if separator is not None and token.kind != separator:
                raise self.error(
                    "cannot mix ',' and ';' in one rule body", token
                )
            separator = token.kind
            body.append(self._expect_atom(f"'{token.text}'"))

        kind = RuleKind.DISJUNCTIVE if separator == "semi" else RuleKind.CONJUNCTIVE
        if head is None and kind is RuleKind.DISJUNCTIVE:
            raise self.error(
                "empty head: a disjunctive body needs a head atom "
                "(constraints are conjunctive)",
                start,
            )
        return _Clause(head, tuple(body), kind, start)


def _parse_clauses(
    clauses: List[_Clause], intern: Callable[[_Token], Optional[int]]
) -> Tuple[List[Rule], List[Tuple[int, ...]]]:
    rules: List[Rule] = []
    constraints: List[Tuple[int, ...]] = []
    for clause in clauses:
        if clause.head is None:
            ids = [intern(token) for token in clause.body]
            if any(i is None for i in ids):
                continue
            constraints.append(tuple(i for i in ids if i is not None))
            continue
        head_id = intern(clause.head)
        body_ids = tuple(intern(token) for token in clause.body)
        assert head_id is not None and all(b is not None for b in body_ids)
        rules.append(Rule(head_id, body_ids, clause.kind))  # type: ignore[arg-type]
    return rules, constraints


def parse_program(text: str) -> Tuple[DefiniteProgram, ConstraintSet]:
    """Parse program text into an interned program and its constraints.

    Atom ids follow first appearance. Repeated body atoms and repeated
    rules are collapsed.
    """
    names: Dict[str, int] = {}

    def intern(token: _Token) -> int:
        if token.text not in names:
            names[token.text] = len(names)
        return names[token.text]

    rules, constraints = _parse_clauses(list(_ClauseReader(text).clauses()), intern)
    program = DefiniteProgram(AtomTable(tuple(names)), dedupe_rules(rules))
    logger.debug(
        "Parsed %d atoms, %d rules, %d constraints",
        program.n,
        len(program.rules),
        len(constraints),
    )
    return program, ConstraintSet(tuple(constraints))


def parse_constraints(text: str, atoms: AtomTable) -> ConstraintSet:
    """Parse a constraint-only file against an existing atom table.

    Constraints over atoms the program never mentions cannot fire and are
    dropped.
    """
    unknown: List[str] = []

    def lookup(token: _Token) -> Optional[int]:
        if token.text in atoms:
            return atoms.id_of(token.text)
        unknown.append(token.text)
        return None

    reader = _ClauseReader(text)
    clauses = list(reader.clauses())
    for clause in clauses:
        if clause.head is not None:
            raise reader.error(
                f"constraint files may only contain ':- ...' clauses, found a rule "
                f"for '{clause.head.text}'",
                clause.start,
            )
    _, constraints = _parse_clauses(clauses, lookup)
    if unknown:
        logger.warning(
            "Dropping constraints over atoms absent from the program: %s",
            ", ".join(sorted(set(unknown))),
        )
    return ConstraintSet(tuple(constraints))


def serialize_program(
    program: DefiniteProgram, constraints: Optional[ConstraintSet] = None
) -> str:
    """Render a program (and optional constraints) in the program file format."""
    lines = [program.rule_text(rule) for rule in program.rules]
    if constraints is not None:
        lines.extend(
            constraints.constraint_text(i, program.atoms)
            for i in range(len(constraints))
        )
    return "".join(line + "\n" for line in lines)
