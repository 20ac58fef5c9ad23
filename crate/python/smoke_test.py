"""Smoke test for the Python bindings.

Build and install first:
    cd crates/python && maturin develop --release
"""

import math

import blochmaps as bm


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol


def main():
    # Complete positivity of unital maps.
    assert bm.bloch_inequalities([1.0, 1.0, 1.0]).is_completely_positive
    v = bm.bloch_inequalities([1.0, -1.0, 1.0])
    assert v.is_positive and not v.is_completely_positive
    assert v.violated_inequality == 2
    assert bm.lifetime_inequalities([6.0, 5.0, 1.0])
    assert not bm.lifetime_inequalities([6.0, 3.0, 1.0])

    m = bm.BlochMap([0.5, 0.5, 0.5])
    assert m.choi_test().is_completely_positive
    ks = m.kraus()
    # Σ K†K = I
    for i in range(2):
        for j in range(2):
            s = sum(k[r][i].conjugate() * k[r][j] for k in ks for r in range(2))
            assert close(s, 1.0 if i == j else 0.0)

    amp = bm.BlochMap([0.6, 0.6, 0.36], [0.0, 0.0, 0.64])
    assert len(amp.kraus()) == 2
    out = amp.apply([0.0, 0.0, -1.0])
    assert close(out[2], 0.28)

    # Dephasing: eigenvalues (0, -4D, -4D, 0).
    basis = bm.DampingBasis.dephasing(0.25)
    want = [0.0, -1.0, -1.0, 0.0]
    assert all(close(e.real, w) and close(e.imag, 0.0) for e, w in zip(basis.eigenvalues, want))
    b = basis.evolve([1.0, 0.0, 0.0], 2.0)
    assert close(b[0], math.exp(-2.0))

    # Damping basis and ODE agree for a driven system.
    driven = bm.DampingBasis([1.0, 0.7, 0.5], rabi=1.0)
    times, states = bm.integrate_bloch([1.0, 0.7, 0.5], [1.0, 0.0, 0.0], 3.0, 0.01, rabi=1.0)
    last = driven.evolve([1.0, 0.0, 0.0], times[-1])
    assert all(close(x, y, 1e-8) for x, y in zip(last, states[-1]))

    # Telegraph channel.
    ch = bm.TelegraphChannel(1.0, 4.0)
    assert ch.regime == "oscillatory"
    assert close(ch.lam(0.0), 1.0)
    roots = ch.separability_times(5.0)
    assert roots and all(abs(ch.lam(t)) < 1e-9 for t in roots)
    assert bm.TelegraphChannel(0.25, 1.0).regime == "critical"
    assert close(bm.white_noise_lambda(1.0, 2.0), math.exp(-2.0))

    # Peres spectrum of the dephased Bell pair.
    ev = bm.peres_eigenvalues(bm.BlochMap([0.4, 0.4, 1.0]))
    assert all(close(x, y) for x, y in zip(ev, [-0.2, 0.2, 0.5, 0.5]))

    # Ensemble against the closed form.
    ens = bm.ensemble_average("telegraph", [1.0, 0.0, 0.0], 4.0, 0.5, 2000, seed=1, a=1.0, tau=2.0)
    for t, mean, se in zip(ens["times"], ens["mean"], ens["se"]):
        p = bm.TelegraphChannel(1.0, 2.0).lam(t)
        assert abs(mean[0] - p) <= 4 * se[0] + 1e-12, (t, mean[0], p)
    again = bm.ensemble_average("telegraph", [1.0, 0.0, 0.0], 4.0, 0.5, 2000, seed=1, a=1.0, tau=2.0)
    assert again["mean"] == ens["mean"]

    assert abs(bm.cp_fraction(41) - 1.0 / 3.0) < 0.02

    try:
        bm.TelegraphChannel(-1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative amplitude accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
