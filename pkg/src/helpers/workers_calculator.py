"""Hardware detection and bench worker sizing"""
import os
from typing import Optional, Tuple

import psutil


class WorkerCalculator:
    """Size the bench pool: one CPU-bound cell per physical core, capped by RAM"""

    MB_PER_WORKER = 200  # oracle enumeration keeps a trace and its satisfaction signals alive
    MIN_WORKERS, MAX_WORKERS = 1, 32

    @staticmethod
    def get_physical_cores() -> int:
        """Physical CPU cores (not threads)"""
        try:
            physical = psutil.cpu_count(logical=False)
            if physical and physical > 0:
                return physical
        except Exception:
            pass
        return max((os.cpu_count() or 2) // 2, 1)

    @staticmethod
    def get_logical_cores() -> int:
        return os.cpu_count() or 2

    @staticmethod
    def get_available_memory_gb() -> float:
        try:
            return psutil.virtual_memory().available / (1024 ** 3)
        except Exception:
            return 4.0

    @staticmethod
    def calculate_optimal_workers(
        physical_cores: Optional[int] = None,
        available_memory_gb: Optional[float] = None,
        jobs: Optional[int] = None,
    ) -> Tuple[int, str]:
        """Returns: (worker_count, info_string)"""
        if physical_cores is None:
            physical_cores = WorkerCalculator.get_physical_cores()
        if available_memory_gb is None:
            available_memory_gb = WorkerCalculator.get_available_memory_gb()

        workers = physical_cores
        workers = min(workers, int(available_memory_gb * 1024 / WorkerCalculator.MB_PER_WORKER))
        if jobs is not None:
            workers = min(workers, jobs)
        workers = max(WorkerCalculator.MIN_WORKERS, min(WorkerCalculator.MAX_WORKERS, workers))

        info = (
            f"CPU: {physical_cores} cores ({WorkerCalculator.get_logical_cores()} threads) | "
            f"RAM: {available_memory_gb:.1f}GB | Workers: {workers}"
        )
        return workers, info
