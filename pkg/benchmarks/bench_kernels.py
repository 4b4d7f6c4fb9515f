"""Compare the compiled and pure-Python kernels on circuit evaluation and attractor solving.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from wnash import _pykernels, kernels
from wnash.circuit import all_inputs
from wnash.games import ReachabilityGame, _csr
from wnash.oracle import gen_random_circuit


def circuit_case(inputs, gates, seed=1):
    c = gen_random_circuit(random.Random(seed), inputs, 16, gates)
    op, a, b, outs = c.compiled
    return (op, a, b, inputs, outs, all_inputs(inputs))


def game_case(n, seed=1):
    rng = random.Random(seed)
    names = list(range(n))
    edges = [(u, rng.randrange(n)) for u in names for _ in range(3)]
    owners = [rng.random() < 0.5 for _ in names]
    g = ReachabilityGame(
        [u for u in names if owners[u]], [u for u in names if not owners[u]],
        edges, {u for u in names if rng.random() < 0.05},
    )
    return _csr(g)


def bench(label, args, fn_name, repeat):
    times = {}
    for name, mod in (("python", _pykernels), ("cython", kernels)):
        fn = getattr(mod, fn_name)
        times[name] = min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))
    speedup = times["python"] / times["cython"]
    print(f"{label:<38} python {times['python'] * 1e3:9.2f} ms   "
          f"{kernels.BACKEND} {times['cython'] * 1e3:9.2f} ms   x{speedup:6.1f}")


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if kernels.BACKEND != "cython":
        print("compiled extension not available; both columns use the pure-Python kernels")
    for inputs, gates in ((8, 200), (12, 500), (16, 1000)):
        bench(f"eval_batch 2^{inputs} rows x {gates} gates", circuit_case(inputs, gates), "eval_batch", args.repeat)
    for n in (1_000, 20_000, 200_000):
        bench(f"attractor_ranks {n} states", game_case(n), "attractor_ranks", args.repeat)


if __name__ == "__main__":
    main()
