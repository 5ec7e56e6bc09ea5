from .kernels import backend
from .sampler import OracleResult, oracle_grid_sample

__all__ = ["OracleResult", "backend", "oracle_grid_sample"]
