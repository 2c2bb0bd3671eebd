import pytest

from smm110 import StorageGraph, corpus_listing1, corpus_listing2, load


def brute_step(row, rule):
    """Independent ECA step: index the rule's printed binary string."""
    bits = format(rule, "08b")  # bits[0] is the 111 outcome
    w = len(row)
    out = []
    for i in range(w):
        idx = int(f"{row[(i - 1) % w]}{row[i]}{row[(i + 1) % w]}", 2)
        out.append(int(bits[7 - idx]))
    return tuple(out)


@pytest.fixture
def listing1():
    return corpus_listing1()


@pytest.fixture
def listing2():
    return corpus_listing2()


@pytest.fixture
def listing1_machine(listing1):
    m = load(listing1, StorageGraph())
    m.run()
    return m
