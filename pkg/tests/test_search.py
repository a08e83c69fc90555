import pytest

from refit.search import build_index, keyword_search, tokenize
from refit.typemodel import CorpusEntry, MethodSignature, Prim, Void


def entry(entry_id: str, name: str, doc: str) -> CorpusEntry:
    return CorpusEntry(
        id=entry_id,
        signature=MethodSignature(name, (("a", Prim("int")),), Void()),
        doc=doc,
        class_refs=(),
        builtin_key="noop",
    )


def test_tokenize_splits_identifiers():
    assert tokenize("drawLine") == ["draw", "line"]
    assert tokenize("HTTPServer") == ["http", "server"]
    assert tokenize("snake_case_name") == ["snake", "case", "name"]
    assert tokenize("with-punct! and.dots") == ["with", "punct", "and", "dots"]
    assert tokenize("") == []


def test_index_contents():
    idx = build_index([entry("e1", "drawLine", "render a segment")])
    assert idx.entry_order == ["e1"]
    assert set(idx.postings["e1"]) == {"draw", "line", "render", "a", "segment"}
    assert idx.vocabulary["draw"] == 1


def test_empty_corpus():
    idx = build_index([])
    assert keyword_search(idx, "anything", 5) == []


def test_duplicate_docs_both_indexed():
    idx = build_index([entry("e1", "sum", "add values"), entry("e2", "sum", "add values")])
    hits = keyword_search(idx, "add values", 10)
    assert [h[0] for h in hits] == ["e1", "e2"]  # tie broken by corpus order
    assert hits[0][1] == pytest.approx(hits[1][1])


def test_relevant_entry_found_with_positive_score():
    idx = build_index([
        entry("sieve", "sievePrimes", "prime numbers sieve"),
        entry("bres", "bresenham", "raster line points between two points using Bresenham's algorithm"),
    ])
    hits = keyword_search(idx, "Bresenham line", 10)
    assert hits and hits[0][0] == "bres"
    assert hits[0][1] > 0


def test_no_overlap_returns_empty():
    idx = build_index([entry("e1", "transpose", "swap rows and columns")])
    assert keyword_search(idx, "zebra quantum", 10) == []


def test_k_limits_and_prefix_monotonicity():
    entries = [entry(f"e{i}", f"sort{i}", "sort the values ascending") for i in range(6)]
    idx = build_index(entries)
    top1 = keyword_search(idx, "sort values", 1)
    assert len(top1) == 1
    for k in range(1, 7):
        top_k = keyword_search(idx, "sort values", k)
        top_k1 = keyword_search(idx, "sort values", k + 1)
        assert top_k == top_k1[: len(top_k)]
    with pytest.raises(ValueError):
        keyword_search(idx, "sort", 0)


def test_determinism():
    entries = [entry(f"e{i}", f"name{i}", f"doc words {i % 3}") for i in range(10)]
    idx1, idx2 = build_index(entries), build_index(entries)
    assert keyword_search(idx1, "doc words", 10) == keyword_search(idx2, "doc words", 10)
