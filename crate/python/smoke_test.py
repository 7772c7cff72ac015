"""Quick check that the qspeed extension imports and its main entry points run."""

import math

import qspeed


def main():
    dj = qspeed.deutsch_jozsa(qspeed.Oracle.constant(3, False))
    assert dj["verdict"] == "CONSTANT" and abs(dj["zero_probability"] - 1) < 1e-9
    assert qspeed.deutsch_jozsa(qspeed.Oracle.balanced(3))["verdict"] == "BALANCED"

    g = qspeed.grover_search(qspeed.Oracle.marked(3, [5]), seed=1)
    assert g["x"] == 5 and abs(g["success_probability"] - 0.9453) < 1e-3

    s = qspeed.StateVector(2)
    s.h(0)
    s.cnot(0, 1)
    probs = s.probabilities([0, 1])
    assert abs(probs[0] - 0.5) < 1e-12 and abs(probs[3] - 0.5) < 1e-12

    u = [[1, 0], [0, complex(math.cos(2 * math.pi * 0.25), math.sin(2 * math.pi * 0.25))]]
    pe = qspeed.phase_estimate(u, qspeed.StateVector(1, 1), 3, 0.1, seed=2)
    assert abs(pe["phase"] - 0.25) < 1 / 8

    f = qspeed.shor_factor(15, seed=7)["factor"]
    assert f in (3, 5)

    c = qspeed.quantum_count(qspeed.Oracle.marked(3, []), m=3)
    assert c["m_hat"] == 0

    exact = qspeed.speed_prior("1111")["value"]
    assert abs(exact - sum(2.0 ** -(i + 4) for i in range(7, 17))) < 1e-15

    assert qspeed.laplace_rule(0, 10**12) == 1 / (10**12 + 2)

    ep = qspeed.run_episode("coin:0.5", "random", 50, seed=3)
    assert len(ep["steps"]) == 50

    try:
        qspeed.speed_prior("1" * 13)
    except qspeed.ResourceError:
        pass
    else:
        raise AssertionError("enumeration cap not enforced")

    print("qspeed smoke test passed")


if __name__ == "__main__":
    main()
