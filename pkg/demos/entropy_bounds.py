"""How fast can noise raise the rank?

Concavity of the von Neumann entropy bounds the entropy one layer of
independent one-qubit channels can add by the Shannon entropy of the channel
weights, summed over the qubits. Reading ``2**S`` as an effective rank turns
that into a per-qubit growth factor ``gamma`` that is small for realistic
``p``, which is why a truncated factor stays narrow.

    python demos/entropy_bounds.py
"""
from __future__ import annotations

import math

from lret import RandomCircuitSpec, entropy_change_bound, make_channel, random_circuit, rank_growth_factor
from lret.fdm import fdm_apply_layer, initial_density
from lret.metrics import effective_rank, shannon_bits, von_neumann_entropy

N, DEPTH = 5, 10


def main():
    for kind, channel in (("bit_flip", "bitflip"), ("depolarizing", "depolarizing")):
        print(f"{kind}: gamma(p=0.001) = {rank_growth_factor(kind, 0.001):.4f}")
        for p in (0.001, 0.01):
            exact = entropy_change_bound(kind, p, N)
            approx = entropy_change_bound(kind, p, N, first_order=True)
            print(f"  p={p:<6} layer bound {exact:.4f} bits (first order {approx:.4f})")

    p = 0.01
    bound = N * shannon_bits(make_channel("depolarizing", p).weights)
    circuit = random_circuit(RandomCircuitSpec(N, DEPTH, seed=3, channel="depolarizing", p=p))
    rho = initial_density(N)
    s = 0.0
    print(f"\nrandom circuit, N={N}, depolarizing p={p}; per-layer bound {bound:.4f} bits")
    print("layer  entropy  increase  2**S    e**S")
    for d, layer in enumerate(circuit.layers):
        rho = fdm_apply_layer(layer, rho)
        s_next = von_neumann_entropy(rho)
        print(f"{d:5d}  {s_next:7.4f}  {s_next - s:8.4f}  {effective_rank(s_next):5.2f}  "
              f"{effective_rank(s_next, base=math.e):5.2f}")
        s = s_next


if __name__ == "__main__":
    main()
