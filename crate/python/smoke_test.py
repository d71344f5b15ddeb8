"""Smoke test for the ramdeg extension module.

Build first:
    cargo build --release -p ramdeg-python
    cp target/release/libramdeg_python.so python/ramdeg.so
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import ramdeg  # noqa: E402


def main():
    c3 = ramdeg.Structure("chain3")
    assert c3.size == 3
    assert c3.automorphism_count() == 1
    assert ramdeg.Structure("cycle4").automorphism_count() == 8
    assert ramdeg.Structure("chain2").embeddings(c3) == [[0, 1], [0, 2], [1, 2]]

    chains = ramdeg.Category.from_pool("chains_le6")
    assert len(chains) == 6
    assert chains.arrow("C6", "C3", "C2", k=2, t=1)
    assert not chains.arrow("C5", "C3", "C2", k=2, t=1)
    bad = chains.find_bad_coloring("C5", "C3", "C2", k=2, t=1)
    assert bad is not None and len(bad) == 10
    assert chains.big_degree("C4", "C2") == 6

    graphs = ramdeg.Category(
        [("K2", ramdeg.Structure("clique2")), ("P3", ramdeg.Structure("path3"))]
    )
    assert graphs.big_degree("P3", "K2", mor=True) == 4
    assert graphs.big_degree("P3", "K2") == 2
    report = json.loads(graphs.big_degree_report("P3", "K2", mor=True))
    assert report["value"] == {"exact": 4}

    try:
        graphs.big_degree("P3", "nope")
    except KeyError:
        pass
    else:
        raise AssertionError("unknown object accepted")

    suite = json.loads(ramdeg.verify("mult"))
    assert suite["violations"] == 0 and suite["verified"] > 0
    assert "cocone" in ramdeg.SUITES
    print("python smoke test passed")


if __name__ == "__main__":
    main()
