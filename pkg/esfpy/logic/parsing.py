"""
Input surface for propositional formulas.

Formulas are evaluated straight into world masks while parsing, nothing syntactic survives.
Readers follow the `read_x(ctx, at) -> (post_read_at, value)` convention over a token list.

Grammar, loosest first:

    iff     := implies ( "<->" implies )*
    implies := or ( "->" implies )?          right associative
    or      := and ( "|" and )*
    and     := not ( "&" not )*
    not     := "!" not | atom
    atom    := IDENT | "T" | "F" | "⊤" | "⊥" | "(" iff ")" | "{" [ WORLD ( "," WORLD )* ] "}"
"""

import logging
import re
from dataclasses import dataclass
from typing import List, Tuple

from esfpy.logic.worlds import BeliefSet, VarSet
from esfpy.types import WorldMask

logger = logging.getLogger(__name__)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}: '{text}'")


class UnknownVariableError(FormulaSyntaxError):
    def __init__(self, name: str, position: int, text: str, varset: VarSet):
        self.name = name
        super().__init__(f"Unknown variable '{name}' (known: {', '.join(varset.names)})", position, text)


_TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<iff><->)|(?P<implies>->)|(?P<op>[!&|(){},])|(?P<const>[⊤⊥])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<bits>[01]+))"
)


@dataclass(frozen=True)
class Token:
    position: int
    kind: str
    text: str


@dataclass
class _Context:
    source: str
    tokens: List[Token]
    varset: VarSet

    def peek(self, at: int) -> Token | None:
        return self.tokens[at] if at < len(self.tokens) else None

    def fail(self, message: str, at: int):
        token = self.peek(at)
        position = token.position if token else len(self.source)
        raise FormulaSyntaxError(message, position, self.source)


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    offset = 0
    while offset < len(source):
        if source[offset:].strip() == "":
            break
        match = _TOKEN_PATTERN.match(source, offset)
        if match is None or match.end() == offset:
            stripped = len(source[offset:]) - len(source[offset:].lstrip())
            raise FormulaSyntaxError("Unexpected character", offset + stripped, source)
        kind = match.lastgroup
        assert kind is not None
        text = match.group(kind)
        tokens.append(Token(match.start(kind), "op" if kind in ("iff", "implies") else kind, text))
        offset = match.end()
    return tokens


def variable_mask(varset: VarSet, name: str) -> WorldMask:
    mask = 0
    for world in varset.worlds():
        if varset.holds(world, name):
            mask |= 1 << world
    return mask


def read_iff(ctx: _Context, at: int) -> Tuple[int, WorldMask]:
    at, left = read_implies(ctx, at)
    full = ctx.varset.full_mask
    while (token := ctx.peek(at)) is not None and token.text == "<->":
        at, right = read_implies(ctx, at + 1)
        left = ~(left ^ right) & full
    return at, left


def read_implies(ctx: _Context, at: int) -> Tuple[int, WorldMask]:
    at, left = read_or(ctx, at)
    token = ctx.peek(at)
    if token is not None and token.text == "->":
        # right associative: a -> b -> c is a -> (b -> c)
        at, right = read_implies(ctx, at + 1)
        return at, (~left & ctx.varset.full_mask) | right
    return at, left


def read_or(ctx: _Context, at: int) -> Tuple[int, WorldMask]:
    at, left = read_and(ctx, at)
    while (token := ctx.peek(at)) is not None and token.text == "|":
        at, right = read_and(ctx, at + 1)
        left |= right
    return at, left


def read_and(ctx: _Context, at: int) -> Tuple[int, WorldMask]:
    at, left = read_not(ctx, at)
    while (token := ctx.peek(at)) is not None and token.text == "&":
        at, right = read_not(ctx, at + 1)
        left &= right
    return at, left


def read_not(ctx: _Context, at: int) -> Tuple[int, WorldMask]:
    token = ctx.peek(at)
    if token is not None and token.text == "!":
        at, operand = read_not(ctx, at + 1)
        return at, ~operand & ctx.varset.full_mask
    return read_atom(ctx, at)


def read_atom(ctx: _Context, at: int) -> Tuple[int, WorldMask]:
    token = ctx.peek(at)
    if token is None:
        ctx.fail("Unexpected end of formula", at)
    assert token is not None  # fail raises

    match token.kind, token.text:
        case "const", "⊤":
            return at + 1, ctx.varset.full_mask
        case "const", "⊥":
            return at + 1, 0
        # T and F win over variables of the same name
        case "ident", "T":
            return at + 1, ctx.varset.full_mask
        case "ident", "F":
            return at + 1, 0
        case "ident", name:
            if name not in ctx.varset.names:
                raise UnknownVariableError(name, token.position, ctx.source, ctx.varset)
            return at + 1, variable_mask(ctx.varset, name)
        case "op", "(":
            at, inner = read_iff(ctx, at + 1)
            closing = ctx.peek(at)
            if closing is None or closing.text != ")":
                ctx.fail("Expected ')'", at)
            return at + 1, inner
        case "op", "{":
            return read_world_list(ctx, at + 1)
        case _:
            ctx.fail(f"Unexpected '{token.text}'", at)
    raise AssertionError("unreachable")


def read_world_list(ctx: _Context, at: int) -> Tuple[int, WorldMask]:
    # reads the worlds after an opening brace up to and including the closing brace
    mask = 0
    token = ctx.peek(at)
    if token is not None and token.text == "}":
        return at + 1, mask  # {} is inconsistent
    while True:
        token = ctx.peek(at)
        if token is None or token.kind != "bits":
            ctx.fail("Expected a world such as 01", at)
        assert token is not None
        try:
            world = ctx.varset.world(token.text)
        except ValueError:
            raise FormulaSyntaxError(f"'{token.text}' is not a world over {ctx.varset.count} variables",
                                     token.position, ctx.source)
        mask |= 1 << world
        at += 1
        separator = ctx.peek(at)
        if separator is not None and separator.text == ",":
            at += 1
            continue
        if separator is not None and separator.text == "}":
            return at + 1, mask
        ctx.fail("Expected ',' or '}'", at)


def parse_formula(text: str, varset: VarSet = VarSet()) -> BeliefSet:
    ctx = _Context(text, tokenize(text), varset)
    if not ctx.tokens:
        raise FormulaSyntaxError("Empty formula", 0, text)
    at, mask = read_iff(ctx, 0)
    if at != len(ctx.tokens):
        ctx.fail("Trailing input", at)
    logger.debug("parsed %r into mask %#x", text, mask)
    return BeliefSet(mask, varset.world_count)


def format_belief_set(beliefs: BeliefSet, varset: VarSet | None = None) -> str:
    if not beliefs.consistent:
        return "⊥"
    if beliefs.is_everything:
        return "⊤"
    varset = varset or VarSet.of_size(beliefs.world_count.bit_length() - 1)
    return "{" + ",".join(varset.render(w) for w in beliefs.worlds()) + "}"
