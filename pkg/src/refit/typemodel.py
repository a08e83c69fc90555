"""Java-like type IR, class environment, method signatures, and corpus loading.

Every later stage (featurization, distance, alignment, synthesis, execution)
consumes the small set of immutable types defined here.  Boxed primitive
names are normalized away at parse time, so downstream code only ever sees
the canonical primitive names.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class RefitError(Exception):
    """Base class for all engine errors."""


class TypeSyntaxError(RefitError):
    """Malformed type or signature text."""


class UnknownClassError(RefitError):
    """A reference type does not resolve in the enclosing environment."""


class NotACollectionError(RefitError):
    """category() applied to a non-collection type."""


class UnclassifiableError(RefitError):
    """typeClass() applied to void, a wildcard, or a bare type parameter."""


class SchemaError(RefitError):
    """Corpus or query file violates the expected schema."""


# ---------------------------------------------------------------------------
# Type IR


class Type:
    """Base class for the type IR; all concrete types are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Prim(Type):
    name: str


@dataclass(frozen=True)
class Collection(Type):
    raw: str
    args: tuple[Type, ...] = ()


@dataclass(frozen=True)
class Array(Type):
    elem: Type


@dataclass(frozen=True)
class Wildcard(Type):
    pass


@dataclass(frozen=True)
class TypeParam(Type):
    name: str


@dataclass(frozen=True)
class Ref(Type):
    class_name: str


@dataclass(frozen=True)
class Void(Type):
    pass


VOID = Void()
WILDCARD = Wildcard()

PRIMITIVE_NAMES = frozenset(
    {"byte", "short", "int", "long", "float", "double", "boolean", "char", "String"}
)
NUMERIC_NAMES = frozenset({"byte", "short", "int", "long", "float", "double"})
BOXED_TO_PRIM = {
    "Byte": "byte",
    "Short": "short",
    "Integer": "int",
    "Long": "long",
    "Float": "float",
    "Double": "double",
    "Boolean": "boolean",
    "Character": "char",
}

# Built-in collections grouped into their four canonical categories.
COLLECTION_CATEGORY = {
    "Vector": "Vector",
    "List": "List",
    "ArrayList": "List",
    "LinkedList": "List",
    "Set": "Set",
    "HashSet": "Set",
    "LinkedHashSet": "Set",
    "TreeSet": "Set",
    "EnumSet": "Set",
    "Map": "Map",
    "HashMap": "Map",
    "LinkedHashMap": "Map",
    "TreeMap": "Map",
    "EnumMap": "Map",
}
_MAP_RAWS = frozenset(r for r, c in COLLECTION_CATEGORY.items() if c == "Map")


def is_numeric(t: Type) -> bool:
    return isinstance(t, Prim) and t.name in NUMERIC_NAMES


def category(t: Type) -> str:
    """Canonical collection family (Vector, List, Set, or Map) of a collection type."""
    if not isinstance(t, Collection):
        raise NotACollectionError(f"not a collection type: {print_type(t)}")
    return COLLECTION_CATEGORY[t.raw]


def type_class(t: Type) -> str:
    """Coarse class of a type: 'primitive', 'collection', or 'reference'."""
    if isinstance(t, Prim):
        return "primitive"
    if isinstance(t, (Collection, Array)):
        return "collection"
    if isinstance(t, Ref):
        return "reference"
    raise UnclassifiableError(f"type has no class: {print_type(t)}")


# ---------------------------------------------------------------------------
# Class environment


@dataclass(frozen=True)
class ClassDef:
    """A user-defined reference type with an ordered field list.

    constructible: a constructor taking all fields in declaration order exists.
    gettable: per-field getters exist (field f -> getF()).
    """

    name: str
    fields: tuple[tuple[str, Type], ...]
    constructible: bool = True
    gettable: bool = True

    def __post_init__(self):
        names = [n for n, _ in self.fields]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate field names in class {self.name}")
        for fname, ftype in self.fields:
            if isinstance(ftype, (Void, Wildcard)):
                raise SchemaError(
                    f"class {self.name} field {fname} has illegal type {print_type(ftype)}"
                )

    def field_type(self, fname: str) -> Type:
        for n, t in self.fields:
            if n == fname:
                return t
        raise UnknownClassError(f"class {self.name} has no field {fname}")

    def getter_name(self, fname: str) -> str:
        return "get" + fname[0].upper() + fname[1:]


class TypeEnv:
    """Immutable-after-build map from class name to ClassDef."""

    def __init__(self, classes: dict[str, ClassDef] | None = None):
        self.classes: dict[str, ClassDef] = dict(classes or {})

    def resolve(self, name: str) -> ClassDef:
        try:
            return self.classes[name]
        except KeyError:
            raise UnknownClassError(f"unknown class: {name}") from None

    def add(self, cls: ClassDef) -> None:
        if cls.name in self.classes:
            raise SchemaError(f"class {cls.name} defined twice")
        self.classes[cls.name] = cls

    def extended(self, extra: list[ClassDef]) -> "TypeEnv":
        env = TypeEnv(self.classes)
        for cls in extra:
            env.add(cls)
        return env

    def check_resolvable(self, t: Type) -> None:
        """Raise UnknownClassError if any Ref reachable from t does not resolve."""
        for name in direct_class_refs(t):
            self.resolve(name)


def direct_class_refs(t: Type) -> set[str]:
    """Class names mentioned directly in a type expression."""
    if isinstance(t, Ref):
        return {t.class_name}
    if isinstance(t, Collection):
        out: set[str] = set()
        for a in t.args:
            out |= direct_class_refs(a)
        return out
    if isinstance(t, Array):
        return direct_class_refs(t.elem)
    return set()


def transitive_class_refs(roots: set[str], env: TypeEnv) -> set[str]:
    """Closure of class names reachable through field types."""
    seen: set[str] = set()
    todo = sorted(roots)
    while todo:
        name = todo.pop()
        if name in seen:
            continue
        seen.add(name)
        cls = env.resolve(name)
        for _, ftype in cls.fields:
            for ref in direct_class_refs(ftype):
                if ref not in seen:
                    todo.append(ref)
    return seen


# ---------------------------------------------------------------------------
# Signatures and parameter slots


@dataclass(frozen=True)
class MethodSignature:
    name: str
    params: tuple[tuple[str, Type], ...]
    return_type: Type

    def __post_init__(self):
        names = [n for n, _ in self.params]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate parameter names in {self.name}")
        for pname, ptype in self.params:
            if isinstance(ptype, Void):
                raise SchemaError(f"parameter {pname} of {self.name} is void")


@dataclass(frozen=True)
class ParamSlot:
    """One alignable position of a signature: an input param or the return value.

    index is 0 for the return slot and 1..n for inputs, matching the
    1-based parameter indexing used in test files.
    """

    kind: str  # "input" | "return"
    index: int
    name: str
    type: Type


def param_slots(sig: MethodSignature) -> list[ParamSlot]:
    """Input slots in declaration order; a return slot appended iff non-void."""
    slots = [
        ParamSlot("input", i + 1, pname, ptype)
        for i, (pname, ptype) in enumerate(sig.params)
    ]
    if not isinstance(sig.return_type, Void):
        slots.append(ParamSlot("return", 0, "return", sig.return_type))
    return slots


# ---------------------------------------------------------------------------
# Type expression parsing / printing


def _is_type_param_name(name: str) -> bool:
    # Single uppercase letter, optionally followed by digits: E, K, V, T, E1.
    return name[0].isupper() and (len(name) == 1 or name[1:].isdigit())


class _TypeParser:
    def __init__(self, text: str, env: TypeEnv):
        self.text = text
        self.pos = 0
        self.env = env

    def error(self, msg: str):
        raise TypeSyntaxError(f"{msg} at offset {self.pos} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected identifier")
        return self.text[start : self.pos]

    def parse(self) -> Type:
        t = self.type_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return t

    def type_expr(self) -> Type:
        self.skip_ws()
        if self.peek() == "?":
            self.pos += 1
            base: Type = WILDCARD
        else:
            base = self.named_type()
        # Array suffixes bind outermost: int[][] is Array(Array(int)).
        while True:
            self.skip_ws()
            if self.text.startswith("[]", self.pos):
                if isinstance(base, Void):
                    self.error("array of void")
                self.pos += 2
                base = Array(base)
            else:
                return base

    def named_type(self) -> Type:
        name = self.ident()
        name = BOXED_TO_PRIM.get(name, name)
        self.skip_ws()
        args: tuple[Type, ...] = ()
        if self.peek() == "<":
            self.pos += 1
            parts = [self.type_expr()]
            self.skip_ws()
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.type_expr())
                self.skip_ws()
            self.expect(">")
            args = tuple(parts)
        if name == "void":
            if args:
                self.error("void cannot be parameterized")
            return VOID
        if name in COLLECTION_CATEGORY:
            arity = 2 if name in _MAP_RAWS else 1
            if args and len(args) != arity:
                self.error(f"{name} takes {arity} type argument(s)")
            return Collection(name, args)
        if args:
            self.error(f"{name} is not a generic collection")
        if name in PRIMITIVE_NAMES:
            return Prim(name)
        if name in self.env.classes:
            return Ref(name)
        if _is_type_param_name(name):
            return TypeParam(name)
        raise UnknownClassError(f"unknown class: {name}")


def parse_type(text: str, env: TypeEnv | None = None) -> Type:
    """Parse a type expression; boxed primitives normalize to their primitive."""
    return _TypeParser(text, env or TypeEnv()).parse()


def print_type(t: Type) -> str:
    """Canonical rendering; parse_type(print_type(t)) == t for well-formed t."""
    if isinstance(t, Prim):
        return t.name
    if isinstance(t, Collection):
        if not t.args:
            return t.raw
        return f"{t.raw}<{', '.join(print_type(a) for a in t.args)}>"
    if isinstance(t, Array):
        return print_type(t.elem) + "[]"
    if isinstance(t, Wildcard):
        return "?"
    if isinstance(t, TypeParam):
        return t.name
    if isinstance(t, Ref):
        return t.class_name
    if isinstance(t, Void):
        return "void"
    raise TypeSyntaxError(f"unprintable type: {t!r}")


def parse_signature(text: str, env: TypeEnv) -> MethodSignature:
    """Parse 'name(p1: T1, p2: T2) -> T' into a MethodSignature."""
    head, sep, ret_text = text.partition("->")
    if not sep:
        raise TypeSyntaxError("signature needs '-> returnType'")
    head = head.strip()
    if not head.endswith(")") or "(" not in head:
        raise TypeSyntaxError("signature needs 'name(params)'")
    name, _, params_text = head[:-1].partition("(")
    params: list[tuple[str, Type]] = []
    params_text = params_text.strip()
    if params_text:
        for part in _split_top_level(params_text):
            pname, psep, ptext = part.partition(":")
            if not psep:
                raise TypeSyntaxError(f"parameter needs 'name: Type': {part!r}")
            params.append((pname.strip(), parse_type(ptext.strip(), env)))
    return MethodSignature(name.strip(), tuple(params), parse_type(ret_text.strip(), env))


def _split_top_level(text: str) -> list[str]:
    """Split on commas that are not nested inside angle brackets."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


# ---------------------------------------------------------------------------
# Corpus


@dataclass(frozen=True)
class CorpusEntry:
    """One reusable method: a signature, its doc text, and an executable builtin."""

    id: str
    signature: MethodSignature
    doc: str
    class_refs: tuple[str, ...]
    builtin_key: str
    out_params: frozenset[int] = frozenset()
    unresolvable: bool = False  # transitive class refs exceed the dependency cap


def class_from_json(obj: dict, env: TypeEnv) -> ClassDef:
    name = obj["name"]
    # Register the name before parsing fields so recursive classes resolve.
    placeholder = ClassDef(name, ())
    env.add(placeholder)
    try:
        fields = tuple((fn, parse_type(ft, env)) for fn, ft in obj.get("fields", []))
    except RefitError:
        del env.classes[name]
        raise
    cls = ClassDef(
        name,
        fields,
        constructible=bool(obj.get("constructible", True)),
        gettable=bool(obj.get("gettable", True)),
    )
    env.classes[name] = cls
    return cls


def _method_from_json(obj: dict, env: TypeEnv, dependency_cap: int) -> CorpusEntry:
    params = tuple((pn, parse_type(pt, env)) for pn, pt in obj.get("params", []))
    sig = MethodSignature(obj["name"], params, parse_type(obj.get("returns", "void"), env))
    refs: set[str] = set()
    for _, pt in sig.params:
        refs |= direct_class_refs(pt)
    refs |= direct_class_refs(sig.return_type)
    closure = transitive_class_refs(refs, env)
    return CorpusEntry(
        id=obj["id"],
        signature=sig,
        doc=obj.get("doc", ""),
        class_refs=tuple(sorted(refs)),
        builtin_key=obj["builtin"],
        out_params=frozenset(int(i) for i in obj.get("outParams", [])),
        unresolvable=len(closure) > dependency_cap,
    )


def load_corpus(path: str, dependency_cap: int = 10) -> tuple[TypeEnv, list[CorpusEntry]]:
    """Load a JSON-Lines corpus: class lines first, then the methods using them.

    Entry order is file order.  Entries whose transitive class dependencies
    exceed the cap are kept but flagged unresolvable.
    """
    env = TypeEnv()
    entries: list[CorpusEntry] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            try:
                if "class" in obj:
                    class_from_json(obj["class"], env)
                elif "method" in obj:
                    entry = _method_from_json(obj["method"], env, dependency_cap)
                    if entry.id in seen_ids:
                        raise SchemaError(f"duplicate entry id {entry.id}")
                    seen_ids.add(entry.id)
                    entries.append(entry)
                else:
                    raise SchemaError("line must contain 'class' or 'method'")
            except UnknownClassError as exc:
                raise UnknownClassError(f"{path}:{lineno}: {exc}") from None
            except SchemaError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"{path}:{lineno}: bad record: {exc!r}") from None
    return env, entries
