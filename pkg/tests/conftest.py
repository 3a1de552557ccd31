from pathlib import Path

import pytest

from cxxrefactor.evaluation import bundled_corpus

DATA = Path(__file__).parent / "data"


def read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def corpus_pairs():
    """(fixture id, before path, after path) for every bundled fixture."""
    root = bundled_corpus()
    return [(d.name, d / "before.cpp", d / "after.cpp")
            for d in sorted(root.iterdir()) if (d / "manifest.json").is_file()]


def all_fixture_files():
    files = [DATA / "listing1.cpp", DATA / "listing2.cpp",
             DATA / "multi_inheritance" / "before.cpp", DATA / "multi_inheritance" / "after.cpp",
             DATA / "arith" / "before.cpp", DATA / "arith" / "after.cpp"]
    for _, b, a in corpus_pairs():
        files += [b, a]
    return files


@pytest.fixture
def listing1() -> str:
    return read(DATA / "listing1.cpp")


@pytest.fixture
def listing2() -> str:
    return read(DATA / "listing2.cpp")
