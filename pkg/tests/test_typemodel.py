import random

import pytest

from refit.typemodel import (
    Array,
    ClassDef,
    Collection,
    MethodSignature,
    NotACollectionError,
    Prim,
    Ref,
    SchemaError,
    TypeEnv,
    TypeParam,
    TypeSyntaxError,
    UnclassifiableError,
    UnknownClassError,
    Void,
    Wildcard,
    category,
    load_corpus,
    param_slots,
    parse_signature,
    parse_type,
    print_type,
    type_class,
)

from conftest import INT, LONG, VOID, random_env, random_type


def test_parse_boxed_normalizes():
    assert parse_type("Integer") == Prim("int")
    assert parse_type("Double") == Prim("double")
    assert parse_type("Boolean") == Prim("boolean")


def test_parse_keyword_and_structure():
    assert parse_type("void") == Void()
    assert parse_type("Vector<Vector<Integer>>") == Collection(
        "Vector", (Collection("Vector", (Prim("int"),)),)
    )
    assert parse_type("int[][]") == Array(Array(INT))
    assert parse_type("?") == Wildcard()
    assert parse_type("E") == TypeParam("E")
    assert parse_type("Map<Integer, String>") == Collection(
        "Map", (Prim("int"), Prim("String"))
    )


def test_parse_ref_requires_env(point_env):
    assert parse_type("Point", point_env) == Ref("Point")
    with pytest.raises(UnknownClassError):
        parse_type("Widget", point_env)


def test_parse_rejects_malformed():
    for bad in ["Vector<", "int[", "List<int,int>", "Map<int>", "void[]", "int<long>", ""]:
        with pytest.raises((TypeSyntaxError, UnknownClassError)):
            parse_type(bad)


def test_print_parse_round_trip(point_env):
    rng = random.Random(7)
    env = random_env()
    for _ in range(500):
        t = random_type(rng)
        assert parse_type(print_type(t), env) == t
    for text in ["ListNode", "Vector<Point>", "Point[]"]:
        t = parse_type(text, point_env)
        assert parse_type(print_type(t), point_env) == t


def test_category_table():
    assert category(parse_type("ArrayList<Integer>")) == "List"
    assert category(parse_type("TreeMap<Integer, Integer>")) == "Map"
    assert category(parse_type("Vector<Integer>")) == "Vector"
    assert category(parse_type("LinkedHashSet<Integer>")) == "Set"
    with pytest.raises(NotACollectionError):
        category(INT)
    # unknown raw collection names are rejected at parse time
    with pytest.raises((TypeSyntaxError, UnknownClassError)):
        parse_type("Deque<Integer>")
    with pytest.raises(UnknownClassError):
        parse_type("Deque")


def test_type_class(point_env):
    assert type_class(LONG) == "primitive"
    assert type_class(Array(Ref("Point"))) == "collection"
    assert type_class(Ref("Point")) == "reference"
    for t in (Void(), Wildcard(), TypeParam("E")):
        with pytest.raises(UnclassifiableError):
            type_class(t)


def test_param_slots_orders_inputs_then_return(point_env):
    s = MethodSignature("f", (("p", Ref("Point")), ("n", LONG)), VOID)
    slots = param_slots(s)
    assert [(x.kind, x.index, x.name) for x in slots] == [
        ("input", 1, "p"),
        ("input", 2, "n"),
    ]
    s2 = MethodSignature("g", (("a", INT),), INT)
    slots2 = param_slots(s2)
    assert [(x.kind, x.index) for x in slots2] == [("input", 1), ("return", 0)]
    assert param_slots(MethodSignature("h", (), VOID)) == []


def test_signature_validation():
    with pytest.raises(SchemaError):
        MethodSignature("f", (("a", INT), ("a", LONG)), VOID)
    with pytest.raises(SchemaError):
        MethodSignature("f", (("a", VOID),), VOID)
    with pytest.raises(SchemaError):
        ClassDef("C", (("x", INT), ("x", INT)))


def test_parse_signature(point_env):
    s = parse_signature("drawLine(pt: Point, res: Vector<Point>) -> void", point_env)
    assert s.name == "drawLine"
    assert s.params[0] == ("pt", Ref("Point"))
    assert s.params[1] == ("res", Collection("Vector", (Ref("Point"),)))
    assert s.return_type == VOID
    with pytest.raises(TypeSyntaxError):
        parse_signature("nope", point_env)


def _write_corpus(tmp_path, lines):
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_load_corpus_basic(tmp_path):
    path = _write_corpus(tmp_path, [
        '{"class": {"name": "P", "fields": [["x", "int"]], "constructible": true, "gettable": true}}',
        '{"class": {"name": "Q", "fields": [["p", "P"]]}}',
        '{"method": {"id": "m1", "name": "f", "doc": "d", "params": [["a", "P"]], "returns": "void", "builtin": "k"}}',
    ])
    env, entries = load_corpus(path)
    assert set(env.classes) == {"P", "Q"}
    assert len(entries) == 1
    assert entries[0].id == "m1"
    assert entries[0].class_refs == ("P",)
    assert not entries[0].unresolvable


def test_load_corpus_empty(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    env, entries = load_corpus(str(path))
    assert env.classes == {} and entries == []


def test_load_corpus_deterministic_order(tmp_path):
    lines = [
        f'{{"method": {{"id": "m{i}", "name": "f{i}", "doc": "", "params": [], "returns": "int", "builtin": "k"}}}}'
        for i in range(5)
    ]
    path = _write_corpus(tmp_path, lines)
    first = load_corpus(path)[1]
    second = load_corpus(path)[1]
    assert [e.id for e in first] == [f"m{i}" for i in range(5)]
    assert [e.id for e in first] == [e.id for e in second]


def test_load_corpus_schema_error_carries_line(tmp_path):
    path = _write_corpus(tmp_path, ['{"what": 1}'])
    with pytest.raises(SchemaError, match=":1:"):
        load_corpus(path)
    path2 = _write_corpus(tmp_path, ["not json"])
    with pytest.raises(SchemaError, match=":1:"):
        load_corpus(path2)


def test_load_corpus_unknown_class(tmp_path):
    path = _write_corpus(tmp_path, [
        '{"method": {"id": "m", "name": "f", "doc": "", "params": [["a", "Mystery"]], "returns": "void", "builtin": "k"}}',
    ])
    with pytest.raises(UnknownClassError):
        load_corpus(path)


def test_dependency_cap_flags_entry(tmp_path):
    # A chain of 11 classes linked through fields: the method referencing its
    # head exceeds the default cap of 10 and is flagged, not dropped.
    lines = ['{"class": {"name": "C10", "fields": [["v", "int"]]}}']
    for i in range(9, -1, -1):
        lines.append(
            f'{{"class": {{"name": "C{i}", "fields": [["next", "C{i + 1}"]]}}}}'
        )
    lines.append(
        '{"method": {"id": "deep", "name": "f", "doc": "", "params": [["a", "C0"]], "returns": "void", "builtin": "k"}}'
    )
    lines.append(
        '{"method": {"id": "shallow", "name": "g", "doc": "", "params": [["a", "C10"]], "returns": "void", "builtin": "k"}}'
    )
    path = _write_corpus(tmp_path, lines)
    _, entries = load_corpus(path)
    assert entries[0].unresolvable
    assert not entries[1].unresolvable
    _, relaxed = load_corpus(path, dependency_cap=11)
    assert not relaxed[0].unresolvable


def test_recursive_class_in_corpus(tmp_path):
    path = _write_corpus(tmp_path, [
        '{"class": {"name": "Node", "fields": [["key", "int"], ["next", "Node"]]}}',
        '{"method": {"id": "m", "name": "f", "doc": "", "params": [["n", "Node"]], "returns": "void", "builtin": "k"}}',
    ])
    env, entries = load_corpus(path)
    assert env.resolve("Node").fields[1][1] == Ref("Node")
    assert not entries[0].unresolvable
