# Copyright 2026 The cerfold Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Dense density-matrix reference values frozen into the C++ tests.

Everything here works on explicit 2^n x 2^n matrices with numpy/scipy and
shares no code with the library. Run with `python3 derive_values.py`.
"""

import itertools
import json
import pathlib

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def op(label):
    out = np.array([[1.0 + 0j]])
    for c in label:
        out = np.kron(out, PAULI[c])
    return out


def labels(n):
    return ["".join(t) for t in itertools.product("IXYZ", repeat=n)]


def load_model(path):
    doc = json.loads(path.read_text())
    n = doc["n"]
    h = sum((t["h"] * op(t["pauli"]) for t in doc.get("hamiltonian", [])),
            np.zeros((2**n, 2**n), dtype=complex))
    jumps = []
    for j in doc.get("jumps", []):
        jumps.append(sum((complex(t.get("re", 0.0), t.get("im", 0.0)) * op(t["pauli"])
                          for t in j["terms"]), np.zeros((2**n, 2**n), dtype=complex)))
    for i, t in enumerate(doc.get("t1t2", [])):
        q = t.get("qubit", i)
        g1 = t["cycle_time"] / t["t1"]
        gphi = t["cycle_time"] * (1.0 / t["t2"] - 0.5 / t["t1"])
        lower = np.array([[0, 1], [0, 0]], dtype=complex)
        ops = [I2] * n
        ops[q] = np.sqrt(g1) * lower
        jumps.append(kron_all(ops))
        ops = [I2] * n
        ops[q] = np.sqrt(gphi / 2.0) * PAULI["Z"]
        jumps.append(kron_all(ops))
    return n, h, jumps


def kron_all(ops):
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


def lindblad(h, jumps, rho):
    out = -1j * (h @ rho - rho @ h)
    for l in jumps:
        ld = l.conj().T
        out += l @ rho @ ld - 0.5 * (ld @ l @ rho + rho @ ld @ l)
    return out


def pauli_generator(n, h, jumps):
    labs = labels(n)
    d = 2**n
    t = np.zeros((len(labs), len(labs)))
    for c, p in enumerate(labs):
        img = lindblad(h, jumps, op(p))
        for r, q in enumerate(labs):
            t[r, c] = np.real(np.trace(op(q) @ img)) / d
    return labs, t


def superop(n, h, jumps):
    """Column-stacked superoperator, built by applying the map to basis matrices."""
    d = 2**n
    s = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[k] = 1.0
        rho = e.reshape((d, d), order="F")
        s[:, k] = lindblad(h, jumps, rho).reshape(-1, order="F")
    return s


def apply_super(s, rho):
    d = rho.shape[0]
    return (s @ rho.reshape(-1, order="F")).reshape((d, d), order="F")


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def folded_mean(n, h, jumps, cycle, x, m, prep, meas):
    """Average over every choice of Pauli easy layers of the frame-corrected
    expectation of `meas`."""
    e = expm(superop(n, h, jumps))
    d = 2**n
    labs = labels(n)
    total = 0.0
    count = 0
    cx = np.linalg.matrix_power(cycle, x)
    for layers in itertools.product(labs, repeat=m + 1):
        rho = prep.copy()
        ideal = np.eye(d, dtype=complex)
        for k in range(m):
            g = op(layers[k])
            rho = g @ rho @ g.conj().T
            ideal = g @ ideal
            for _ in range(x):
                rho = apply_super(e, rho)
                rho = cycle @ rho @ cycle.conj().T
            ideal = cx @ ideal
        g = op(layers[m])
        rho = g @ rho @ g.conj().T
        ideal = g @ ideal
        noiseless = ideal @ prep @ ideal.conj().T
        sign = np.real(np.trace(meas @ noiseless))
        total += sign * np.real(np.trace(meas @ rho))
        count += 1
    return total / count


def single_circuit(n, h, jumps, cycle, x, layers, prep, meas):
    e = expm(superop(n, h, jumps))
    d = 2**n
    cx = np.linalg.matrix_power(cycle, x)
    rho = prep.copy()
    ideal = np.eye(d, dtype=complex)
    for k, lab in enumerate(layers):
        if k > 0:
            for _ in range(x):
                rho = apply_super(e, rho)
                rho = cycle @ rho @ cycle.conj().T
            ideal = cx @ ideal
        g = op(lab)
        rho = g @ rho @ g.conj().T
        ideal = g @ ideal
    noiseless = ideal @ prep @ ideal.conj().T
    sign = np.real(np.trace(meas @ noiseless))
    return sign * np.real(np.trace(meas @ rho))


def main():
    np.set_printoptions(precision=17)
    # Two-qubit generator and channel.
    n, h, jumps = load_model(CONFIGS / "two_qubit_noise.json")
    labs, t = pauli_generator(n, h, jumps)
    print("two-qubit generator nonzero entries (row <- col):")
    for r in range(len(labs)):
        for c in range(len(labs)):
            if abs(t[r, c]) > 1e-15:
                print(f"  {labs[r]} <- {labs[c]}: {t[r, c]!r}")
    for x in (1.0, 7.0):
        ch = expm(x * t)
        print(f"two-qubit fidelities x={x}:",
              {labs[i]: repr(ch[i, i]) for i in range(len(labs))})
    print("two-qubit channel entry XZ <- YI:", repr(expm(t)[labs.index("XZ"), labs.index("YI")]))

    # Single-qubit model from configs.
    n1, h1, j1 = load_model(CONFIGS / "single_qubit_noise.json")
    labs1, t1 = pauli_generator(n1, h1, j1)
    print("single-qubit generator:\n", repr(t1))
    print("single-qubit exp(3 L) diag:", [repr(v) for v in np.diag(expm(3 * t1))])

    # Folded CNOT average, measured qubit 1, ancilla prep |+>, control in |0>.
    plus = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    zero = np.array([[1, 0], [0, 0]], dtype=complex)
    yplus = np.array([[0.5, -0.5j], [0.5j, 0.5]], dtype=complex)
    for name, state, meas in (("X", plus, "IX"), ("Y", yplus, "IY"), ("Z", zero, "IZ")):
        prep = np.kron(zero, state)
        v = folded_mean(n, h, jumps, CNOT, 3, 2, prep, op(meas))
        print(f"folded CNOT mean basis {name} x=3 m=2: {v!r}")

    # One explicit circuit.
    prep = np.kron(zero, plus)
    layers = ["XY", "ZI", "YX"]
    v = single_circuit(n, h, jumps, CNOT, 3, layers, prep, op("IX"))
    print(f"explicit CNOT circuit {layers} x=3 basis X: {v!r}")

    # X-gate cycle on one qubit with the single-qubit model.
    xg = PAULI["X"]
    for name, state, meas in (("X", plus, "X"), ("Y", yplus, "Y"), ("Z", zero, "Z")):
        v = folded_mean(n1, h1, j1, xg, 3, 3, state, op(meas))
        print(f"folded X-gate mean basis {name} x=3 m=3: {v!r}")

    # Relaxation model: exact channel fidelities per cycle.
    n3, h3, j3 = load_model(CONFIGS / "ancilla_noise.json")
    labs3, t3 = pauli_generator(n3, h3, j3)
    ch3 = expm(t3)
    for lab in ("IIX", "IIY", "IIZ", "ZII", "XXI"):
        i = labs3.index(lab)
        print(f"ancilla model f_{lab} = {ch3[i, i]!r}, generator diag = {t3[i, i]!r}")
    i, k = labs3.index("IIZ"), labs3.index("III")
    print(f"ancilla model T1 feed IIZ <- III: {t3[i, k]!r}")


if __name__ == "__main__":
    main()
