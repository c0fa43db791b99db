"""Smoke test for the qentangle_py extension module.

Build the extension and put it on the path first, e.g.

    cargo build -p qentangle-py --release
    ln -sf ../target/release/libqentangle_py.so python/qentangle_py.so
    python3 python/smoke_test.py

Values are cross-checked against plain numpy where that is cheap.
"""

import math
import sys

import numpy as np

import qentangle_py as q


def close(a, b, tol=1e-10):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol


def main():
    failures = []

    def check(name, ok):
        print(("ok   " if ok else "FAIL ") + name)
        if not ok:
            failures.append(name)

    # tensor products and adjoints against numpy
    rng = np.random.default_rng(5)
    a = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    b = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    check("kron", close(q.kron(a.tolist(), b.tolist()), np.kron(a, b)))
    check("dagger", close(q.dagger(a.tolist()), a.conj().T))

    # CZ built from the entangler equals diag(1, 1, 1, -1)
    check("cz", close(q.cz_gate(), np.diag([1, 1, 1, -1])))
    ent = q.build_entangler([1, 1, 1, -1])
    check("cz entangler unitary", ent.unitary and close(ent.matrix, np.diag([1, 1, 1, -1])))
    report = q.verify_entangler(ent)
    w2 = report["classification"]["classes"][0]
    check("cz output is maximally entangled", w2["tag"] == "W2" and abs(w2["aggregate"] - 1.0) < 1e-10)

    # phase-locked operators
    check("delta(pi/2)", close(q.delta(math.pi / 2), [[1, 1j], [-1j, 1]]))
    sy = np.array([[0, -1j], [1j, 0]])
    check("tensor operator", close(q.tensor_operator(["Y", "Y", "I"]), np.kron(np.kron(sy, sy), np.eye(2))))
    check("povm resolution", q.povm_resolution_check(2, 8) < 1e-12)

    # two-qubit concurrence against 2|ad - bc|
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    amps /= np.linalg.norm(amps)
    s = q.State(amps.tolist())
    expected = 2 * abs(amps[0] * amps[3] - amps[1] * amps[2])
    check("two-qubit concurrence", abs(q.class_concurrence(s, "W", norm="raw") - expected) < 1e-12)

    # canonical states
    ghz = q.State.ghz(4)
    rep = q.classify(ghz)
    by_tag = {c["tag"]: c for c in rep["classes"]}
    check("ghz4 classes", by_tag["GHZ4"]["nonzero"] and not by_tag["W4"]["nonzero"])
    check("ghz4 not separable", not ghz.is_fully_separable())
    w = q.State.w(3)
    check("w3 canonical unit", abs(q.class_concurrence(w, "W") - 1.0) < 1e-10)
    prod = q.State.product([(1, 0), (1 / math.sqrt(2), 1 / math.sqrt(2)), (0.6, 0.8j)])
    check("product separable", prod.is_fully_separable() and prod.schmidt_rank([1]) == 1)
    rho = np.array(ghz.reduced_density([1]))
    check("reduced density", close(rho, np.eye(2) / 2))

    # seeded audit is reproducible
    r1 = q.audit(3, samples=50, seed=3)
    r2 = q.audit(3, samples=50, seed=3)
    check("audit reproducible", r1 == r2 and r1["ghz3_w3_discrepancy"]["reproduced"])

    # errors surface as ValueError
    try:
        q.build_entangler([1, 0.5])
        check("non-unit amplitude rejected", False)
    except ValueError:
        check("non-unit amplitude rejected", True)

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
