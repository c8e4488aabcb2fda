#!/usr/bin/env python3
"""Regenerate the JSON documents under samples/."""

import json
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "samples"


def enc(m):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def channel(kraus):
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    dout, din = kraus[0].shape
    gram = sum(k.conj().T @ k for k in kraus)
    assert np.abs(gram - np.eye(din)).max() < 1e-12
    return {"dim_in": din, "dim_out": dout, "kraus": [enc(k) for k in kraus]}


def random_channel(din, dout, nk, rng):
    assert dout * nk >= din
    g = rng.normal(size=(dout * nk, din)) + 1j * rng.normal(size=(dout * nk, din))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return channel([q[i * dout:(i + 1) * dout] for i in range(nk)])


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    rng = np.random.default_rng(20240601)
    i2, x = np.eye(2), np.array([[0, 1], [1, 0]])
    y, z = np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])

    write("identity_qubit.json", channel([i2]))
    write("identity_qutrit.json", channel([np.eye(3)]))
    p = 0.25
    write("dephasing_p025.json", channel([np.sqrt(1 - p) * i2, np.sqrt(p) * z]))
    keep = np.zeros((3, 2)); keep[0, 0] = keep[1, 1] = np.sqrt(1 - p)
    e0 = np.zeros((3, 2)); e0[2, 0] = np.sqrt(p)
    e1 = np.zeros((3, 2)); e1[2, 1] = np.sqrt(p)
    write("erasure_p025.json", channel([keep, e0, e1]))
    q = 0.5
    write("depolarizing_p05.json",
          channel([np.sqrt(1 - 3 * q / 4) * i2] + [np.sqrt(q / 4) * s for s in (x, y, z)]))
    write("random_qutrit_6kraus.json", random_channel(3, 3, 6, rng))
    write("random_d10_to_qubit.json", random_channel(10, 2, 6, rng))
    write("random_d16_to_4.json", random_channel(16, 4, 5, rng))

    write("malformed_kraus.json", {"dim_in": 2, "dim_out": 2, "kraus": [enc(i2), enc(z)]})

    write("half.json", {"matrix": enc(i2 / 2)})
    write("bell_pair.json", {"matrix": enc(np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2), "dims": [2, 2]})
    lam = 2.0 ** -np.arange(1, 11)
    write("geometric_d10.json", {"matrix": enc(np.diag(lam / lam.sum()))})
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho3 = g @ g.conj().T
    write("random_qutrit_state.json", {"matrix": enc(rho3 / np.trace(rho3).real)})

    write("hamiltonian_qutrit.json", {"matrix": enc(np.diag([0.0, 1.0, 2.0]))})
    write("oscillator_d16.json", {"matrix": enc(np.diag(np.arange(16.0)))})

    diag_a = {"matrix": enc(np.diag([0.4, 0.3, 0.2, 0.1]))}
    diag_b = {"matrix": enc(np.diag([0.1, 0.2, 0.3, 0.4]))}
    write("sweep_lemma1_diagonal.json",
          {"lemma": "lemma1", "seed": 1, "a": diag_a, "b": diag_b, "ladder": {"kind": "coordinate"}})
    write("sweep_lemma1_nonmonotone.json",
          {"lemma": "lemma1", "seed": 1, "a": diag_a, "b": diag_b,
           "ladder": {"kind": "explicit",
                      "projectors": [enc(np.diag([1, 1, 0, 0])), enc(np.diag([1, 0, 0, 0])), enc(np.eye(4))]}})
    write("sweep_lemma3_geometric.json",
          {"lemma": "lemma3", "seed": 2, "channel": "random_d10_to_qubit.json", "state": "geometric_d10.json"})
    write("sweep_lemma4_qutrit.json",
          {"lemma": "lemma4", "seed": 3, "channel": "random_qutrit_6kraus.json", "state": "random_qutrit_state.json"})
    write("sweep_theorem1_dephasing.json",
          {"lemma": "theorem1-proof", "seed": 4, "channel": "dephasing_p025.json", "state": "half.json"})
    write("sweep_lemma8_scaled.json",
          {"lemma": "lemma8", "seed": 5, "a": "random_qutrit_state.json", "b": {"matrix": enc(np.eye(3))},
           "ladder": {"kind": "scaled", "steps": 30}})
    write("sweep_lemma8_coordinate.json",
          {"lemma": "lemma8", "seed": 5, "a": diag_a, "b": {"matrix": enc(np.diag([0.5, 0.5, 1.0, 2.0]))},
           "ladder": {"kind": "coordinate"}})
    write("sweep_lemma7.json", {"lemma": "lemma7", "seed": 6, "count": 500, "dims": [2, 5]})
    write("sweep_example2_qutrit.json",
          {"lemma": "example2", "seed": 7, "channel": "random_qutrit_6kraus.json", "state": "random_qutrit_state.json"})
    write("sweep_continuity_oscillator.json",
          {"lemma": "continuity", "seed": 8, "channel": "random_d16_to_4.json", "hamiltonian": "oscillator_d16.json",
           "betas": [1.0, 0.9, 0.8, 0.7, 0.6, 0.55, 0.52, 0.51, 0.5]})


if __name__ == "__main__":
    main()
