import argparse
import logging
import sys

from clustering import algorithm1
from config.settings import settings
from control import assemble_glocal, design_glocal, verify_observer_conditions
from decomposition import decompose, robust_decompose, verify_superposition
from network_model import ClusterSet, Perturbation, benchmark_network, clustered_system
from simulation import compare_to_reference, hankel_singular_values
from subspace import existence_check


def check_benchmark(n0: int = 1, hankel_n0: int = 0) -> bool:
    """Walk the nine-component benchmark through every stage and print the verdicts.

    Returns False when the Hankel values (computed only if ``hankel_n0``)
    leave a reference value unmatched.
    """
    net, expected = benchmark_network(n0)
    cs = clustered_system(net, expected)

    print("=" * 60)
    print(f"Benchmark n0={n0}: {net.N0} components, clusters {expected}")
    print("=" * 60)
    print(existence_check(cs).summary())

    bipartition = ClusterSet.from_lists([range(5 * n0), range(5 * n0, 9 * n0)], net.N0)
    found, trace = algorithm1(net.state_matrix(), bipartition)
    print(f"\nClustering from {bipartition}: {found} after {trace.refinements} refinements")

    hd = decompose(cs)
    print(f"\nDecomposition residual: {hd.max_residual:.2e}")
    print(f"Superposition replay error: {verify_superposition(cs, hd, trials=3):.2e}")

    controller = design_glocal(cs, hd)
    for obs in controller.observers:
        residuals = verify_observer_conditions(cs, obs, hd)
        print(f"  observer {obs.cluster + 1}: max condition residual {max(residuals.values()):.2e}")
    loop = assemble_glocal(cs, hd, controller)
    print(f"\nGlocal loop: abscissa {loop.abscissa():.3e}, deflated {loop.deflated_abscissa():.3e}")
    print(f"Local-only deflated abscissa: {assemble_glocal(cs, hd, controller.local_only()).deflated_abscissa():.3e}")

    perturbed, clusters = benchmark_network(n0, Perturbation(0.2, seed=0))
    pcs = clustered_system(perturbed, clusters)
    rd = robust_decompose(pcs)
    print(f"\nPerturbed benchmark: exact decomposition exists: {existence_check(pcs).overall}")
    print(f"  leakage {rd.total_leakage:.3e}, augmented replay error "
          f"{verify_superposition(pcs, rd, trials=3):.2e}")

    if hankel_n0:
        big, big_clusters = benchmark_network(hankel_n0)
        bcs = clustered_system(big, big_clusters)
        result = hankel_singular_values(bcs.A, bcs.input_matrix(), bcs.output_matrix())
        comparison = compare_to_reference(result.distinct(1e-6))
        print(f"\nHankel values (n0={hankel_n0}): {[round(v, 3) for v in result.distinct(1e-6)[:8]]}")
        print(f"  deflated modes: {result.n_deflated}, reference matched: {comparison.matched}")
        if not comparison.ok:
            misses = ", ".join(f"{ref} (closest {value:.3f})" for ref, value in comparison.closest.items())
            print(f"  FAIL: reference values without a match within ±{comparison.band}: {misses}")
            return False
    return True


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Benchmark walkthrough")
    parser.add_argument("--n0", type=int, default=1, help="benchmark replication factor")
    parser.add_argument("--hankel-n0", type=int, default=0,
                        help="also compare Hankel values at this replication factor (0 skips)")
    args = parser.parse_args()
    logging.basicConfig(level=settings.LOG_LEVEL)
    sys.exit(0 if check_benchmark(args.n0, args.hankel_n0) else 1)
