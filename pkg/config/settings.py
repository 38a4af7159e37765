import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _float_env(name: str, default: str) -> float:
    return float(os.getenv(name, default))


class Settings:
    # Output
    OUTPUT_DIR = os.getenv('GLOCAL_OUTPUT_DIR', 'glocal_output')
    LOG_LEVEL = os.getenv('GLOCAL_LOG_LEVEL', 'INFO')
    CSV_FLOAT_FORMAT = '%.17g'

    # Numerical tolerances
    RANK_TOL = _float_env('GLOCAL_RANK_TOL', '1e-9')
    INCLUSION_TOL = _float_env('GLOCAL_INCLUSION_TOL', '1e-8')
    RESIDUAL_TOL = _float_env('GLOCAL_RESIDUAL_TOL', '1e-10')
    ROW_TOL = 1e-8
    DEFLATE_TOL = 1e-6
    SYMMETRY_TOL = 1e-10

    # Simulation
    SIM_STEP = _float_env('GLOCAL_SIM_STEP', '1e-3')
    SIM_HORIZON = _float_env('GLOCAL_SIM_HORIZON', '10.0')

    # LQR weights (angle, frequency) and input/observer weights
    Q_THETA = 1.0
    Q_OMEGA = 1e4
    R_WEIGHT = 1e2
    OBSERVER_WEIGHT = 1e3
    ERROR_WEIGHT = 1.0

    # Benchmark network: (inertia, damping) per group and group sizes per n0
    BENCHMARK_PARAMETERS = ((3.0, 0.4), (2.0, 0.3), (1.0, 0.2))
    BENCHMARK_GROUP_SIZES = (3, 2, 4)
    COUPLING_WEIGHT = 1.0

    # Bench
    BENCH_N0 = (10, 15, 20, 25)
    BENCH_REPETITIONS = 3

    # Error-gain frequency grid: logspace(GAIN_GRID[0], GAIN_GRID[1], GAIN_GRID[2])
    GAIN_GRID = (-2.0, 2.0, 200)

    # Quoted Hankel singular values for n0 = 20 and their acceptance band
    HANKEL_REFERENCE = (1.3, 1.6, 1.7, 2.4, 2.5)
    HANKEL_BAND = 0.05

settings = Settings()
