"""Self-check canaries for the chipfire service."""

import asyncio
import logging
import time
from collections.abc import Callable
from typing import Any, Dict

from chipfire.divisors import rank_at_least
from chipfire.families import crown, cycle
from chipfire.gonality import alpha_r, gonality
from chipfire.repro import matched_pair_divisor

logger = logging.getLogger(__name__)


def _c4_gon2() -> int:
    return gonality(cycle(4), 2).minimum_degree or -1


def _crown10_alpha2() -> int:
    return alpha_r(crown(10), 2).alpha


def _crown10_rank() -> int:
    return int(rank_at_least(crown(10), matched_pair_divisor(5), 2))


CANARIES: dict[str, tuple[Callable[[], int], int]] = {
    "gonality": (_c4_gon2, 3),
    "independence": (_crown10_alpha2, 2),
    "rank": (_crown10_rank, 1),
}


class HealthMonitor:
    """Runs small computations with known answers."""

    def __init__(self, slow_after: float = 2.0, canaries: dict | None = None):
        self.slow_after = slow_after
        self.canaries = canaries if canaries is not None else CANARIES

    async def check_all(self) -> Dict[str, Any]:
        """
        Run every canary.

        Returns:
            Health status dict with:
            - status: "healthy" | "degraded" | "unhealthy"
            - checks: one entry per canary
        """
        checks = {name: await self._check(name) for name in self.canaries}

        if all(c["status"] == "ok" for c in checks.values()):
            overall_status = "healthy"
        elif any(c["status"] == "error" for c in checks.values()):
            overall_status = "unhealthy"
        else:
            overall_status = "degraded"

        return {"status": overall_status, "checks": checks}

    async def _check(self, name: str) -> Dict[str, Any]:
        """
        Run one canary off the event loop.

        Returns:
            {"status": "ok" | "warning" | "error", ...}
            A wrong answer is an error; a right answer that took longer
            than ``slow_after`` seconds is a warning.
        """
        compute, expected = self.canaries[name]
        started = time.monotonic()
        try:
            value = await asyncio.to_thread(compute)
        except Exception as e:
            logger.error(f"Canary {name} failed: {e}")
            return {"status": "error", "error": f"Unexpected: {str(e)}"}
        elapsed = round(time.monotonic() - started, 3)

        if value != expected:
            logger.error(f"Canary {name} computed {value}, expected {expected}")
            return {
                "status": "error",
                "error": f"computed {value}, expected {expected}",
                "elapsed_seconds": elapsed,
            }
        if elapsed > self.slow_after:
            logger.warning(f"Canary {name} took {elapsed}s")
            return {"status": "warning", "value": value, "elapsed_seconds": elapsed}
        return {"status": "ok", "value": value, "elapsed_seconds": elapsed}
