"""Structure-definition files: JSON descriptions of a group backend, its
generating alphabet, and a regular language.

Schema::

    {
      "name": str,
      "group": {"kind": "free_abelian" | "free_group" | "finite_table",
                "rank": int,              # free_abelian, free_group
                "table": [[int, ...]],    # finite_table
                "identity": int},         # finite_table
      "generators": [{"symbol": str, "inverse": str, "image": ...}, ...],
      "language": {"regex": str} | {"automaton": {...}}
    }

Generator images are rank-length integer vectors for free_abelian, element
indices for finite_table, and reduced words over the declared symbols for
free_group, where the i-th declared inverse pair names the i-th basis
element.  Generator declaration order is the alphabet order, so it fixes
the enumeration order of every deterministic search downstream.

Validation failures raise :class:`StructureFileError` naming the offending
field.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .alphabet import GeneratorAlphabet
from .automata import FiniteAutomaton, compile_regex
from .checkers import Structure
from .errors import AutostructError, StructureFileError
from .groups import (Element, FiniteTableBackend, FreeAbelianBackend,
                     FreeGroupBackend, GroupBackend)

GROUP_KINDS = ("free_abelian", "free_group", "finite_table")


def parse_structure_file(path: Union[str, Path]) -> Structure:
    """Load and validate a structure-definition file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StructureFileError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureFileError(f"{path}: malformed JSON: {exc}") from exc
    return parse_structure(data, origin=str(path))


def parse_structure(data: dict, origin: str = "structure data") -> Structure:
    if not isinstance(data, dict):
        raise StructureFileError(f"{origin}: top level must be an object")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise StructureFileError(f"{origin}: field 'name' must be a string")
    group = _require(data, "group", dict, origin)
    generators = _require(data, "generators", list, origin)
    language = _require(data, "language", dict, origin)
    alphabet = _parse_alphabet(generators, origin)
    backend = _parse_backend(group, alphabet, generators, origin)
    automaton = _parse_language(language, alphabet, origin)
    return Structure(backend, automaton, name=name)


def _require(data: dict, key: str, kind: type, origin: str):
    value = data.get(key)
    if not isinstance(value, kind):
        raise StructureFileError(
            f"{origin}: field {key!r} must be a {kind.__name__}")
    return value


def _parse_alphabet(generators: list, origin: str) -> GeneratorAlphabet:
    symbols: list[str] = []
    inversion: dict[str, str] = {}
    for i, entry in enumerate(generators):
        where = f"{origin}: generators[{i}]"
        if not isinstance(entry, dict):
            raise StructureFileError(f"{where} must be an object")
        symbol = entry.get("symbol")
        inverse = entry.get("inverse")
        if not isinstance(symbol, str) or not isinstance(inverse, str):
            raise StructureFileError(
                f"{where}: 'symbol' and 'inverse' must be strings")
        if symbol in inversion and inversion[symbol] != inverse:
            raise StructureFileError(
                f"{where}: symbol {symbol!r} redeclared with a different "
                f"inverse")
        symbols.append(symbol)
        inversion[symbol] = inverse
    for symbol, inverse in inversion.items():
        if inversion.get(inverse) != symbol:
            raise StructureFileError(
                f"{origin}: generators: inverse pairing of {symbol!r} and "
                f"{inverse!r} is not an involution")
    try:
        return GeneratorAlphabet(symbols, inversion)
    except AutostructError as exc:
        raise StructureFileError(f"{origin}: generators: {exc}") from exc


def _parse_backend(group: dict, alphabet: GeneratorAlphabet,
                   generators: list, origin: str) -> GroupBackend:
    kind = group.get("kind")
    if kind not in GROUP_KINDS:
        raise StructureFileError(
            f"{origin}: group.kind must be one of {', '.join(GROUP_KINDS)}")
    try:
        if kind == "free_abelian":
            rank = _rank(group, origin)
            images = {e["symbol"]: _vector_image(e, rank, origin, i)
                      for i, e in enumerate(generators)}
            return FreeAbelianBackend(rank, alphabet, images)
        if kind == "free_group":
            rank = _rank(group, origin)
            images = {e["symbol"]: _word_image(e, alphabet, rank, origin, i)
                      for i, e in enumerate(generators)}
            return FreeGroupBackend(rank, alphabet, images)
        table = group.get("table")
        identity = group.get("identity")
        if not isinstance(table, list) or not isinstance(identity, int):
            raise StructureFileError(
                f"{origin}: finite_table group needs 'table' (list of rows) "
                f"and 'identity' (int)")
        images = {}
        for i, e in enumerate(generators):
            image = e.get("image")
            if not isinstance(image, int):
                raise StructureFileError(
                    f"{origin}: generators[{i}].image must be an element "
                    f"index")
            images[e["symbol"]] = image
        rows = [tuple(row) for row in table]
        return FiniteTableBackend(rows, identity, alphabet, images)
    except StructureFileError:
        raise
    except AutostructError as exc:
        raise StructureFileError(f"{origin}: group: {exc}") from exc


def _rank(group: dict, origin: str) -> int:
    rank = group.get("rank")
    if not isinstance(rank, int) or rank < 1:
        raise StructureFileError(
            f"{origin}: group.rank must be a positive integer")
    return rank


def _vector_image(entry: dict, rank: int, origin: str, i: int) -> Element:
    image = entry.get("image")
    if (not isinstance(image, list) or len(image) != rank
            or not all(isinstance(c, int) for c in image)):
        raise StructureFileError(
            f"{origin}: generators[{i}].image must be a length-{rank} "
            f"integer vector")
    return tuple(image)


def _word_image(entry: dict, alphabet: GeneratorAlphabet, rank: int,
                origin: str, i: int) -> Element:
    """Free-group image given as a word over the declared symbols; the n-th
    declared inverse pair denotes the n-th free basis element."""
    image = entry.get("image")
    if not isinstance(image, str):
        raise StructureFileError(
            f"{origin}: generators[{i}].image must be a word over the "
            f"declared symbols")
    basis: dict[str, int] = {}
    index = 0
    for symbol in alphabet:
        if symbol not in basis:
            index += 1
            if index > rank:
                raise StructureFileError(
                    f"{origin}: more generator pairs than group rank")
            basis[symbol] = index
            basis[alphabet.inverse(symbol)] = -index
    letters = []
    for ch in image:
        if ch not in basis:
            raise StructureFileError(
                f"{origin}: generators[{i}].image uses unknown symbol "
                f"{ch!r}")
        letters.append(basis[ch])
    return _free_reduce_indices(letters)


def _free_reduce_indices(letters: list[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in letters:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def _parse_language(language: dict, alphabet: GeneratorAlphabet,
                    origin: str) -> FiniteAutomaton:
    if "regex" in language:
        regex = language["regex"]
        if not isinstance(regex, str):
            raise StructureFileError(
                f"{origin}: language.regex must be a string")
        try:
            return compile_regex(regex, alphabet)
        except AutostructError as exc:
            raise StructureFileError(
                f"{origin}: language.regex: {exc}") from exc
    if "automaton" in language:
        try:
            return FiniteAutomaton.from_json(language["automaton"], alphabet)
        except AutostructError as exc:
            raise StructureFileError(
                f"{origin}: language.automaton: {exc}") from exc
    raise StructureFileError(
        f"{origin}: language needs either 'regex' or 'automaton'")


def serialize_structure(structure: Structure, name: str = "") -> dict:
    """Serialize a structure to the file schema (automaton language form).

    The language is emitted as its trimmed deterministic automaton, so the
    output is independent of how the structure was first described.
    """
    backend = structure.backend
    alphabet = structure.alphabet
    group: dict
    if isinstance(backend, FreeAbelianBackend):
        group = {"kind": "free_abelian", "rank": backend.rank}

        def image_json(symbol: str):
            return list(backend.images[symbol])
    elif isinstance(backend, FreeGroupBackend):
        group = {"kind": "free_group", "rank": backend.rank}
        names = _basis_names(alphabet)

        def image_json(symbol: str):
            return "".join(names[c] for c in backend.images[symbol])
    elif isinstance(backend, FiniteTableBackend):
        group = {"kind": "finite_table",
                 "table": [list(row) for row in backend.table],
                 "identity": backend.identity()}

        def image_json(symbol: str):
            return backend.images[symbol]
    else:
        raise StructureFileError(
            f"cannot serialize backend kind {backend.kind!r}")
    generators = [{"symbol": s, "inverse": alphabet.inverse(s),
                   "image": image_json(s)} for s in alphabet]
    return {
        "name": name or structure.name,
        "group": group,
        "generators": generators,
        "language": {"automaton": structure.dfa.to_json()},
    }


def _basis_names(alphabet: GeneratorAlphabet) -> dict[int, str]:
    names: dict[int, str] = {}
    index = 0
    seen: set[str] = set()
    for symbol in alphabet:
        if symbol in seen:
            continue
        index += 1
        names[index] = symbol
        names[-index] = alphabet.inverse(symbol)
        seen.add(symbol)
        seen.add(alphabet.inverse(symbol))
    return names


def write_structure_file(structure: Structure, path: Union[str, Path],
                         name: str = "") -> None:
    data = serialize_structure(structure, name)
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
