import time
from typing import Any, Callable, Dict, Optional

from observability.logger import app_logger
from observability.metrics import metrics_collector


class RefinementLoop:
    """
    Iterates a refinement step until a stopping condition is met or the
    iteration budget runs out. Each step returns a dict whose "output" feeds
    the next iteration.
    """

    def __init__(self, name: str = "RefinementLoop", max_iterations: int = 10):
        self.name = name
        self.max_iterations = max_iterations

    def execute(self, task: str, initial_data: Any,
                step: Callable[[Any, int], Dict[str, Any]],
                stopping_condition: Callable[[Dict[str, Any]], bool],
                max_iterations: Optional[int] = None) -> Dict[str, Any]:
        """
        Run step until stopping_condition holds.

        Args:
            task: Name of the refinement, used in logs and metrics
            initial_data: Input to the first step
            step: Function (data, iteration) -> result dict; result["output"] feeds the next step
            stopping_condition: Function that returns True when the loop should stop
            max_iterations: Iteration budget (default: self.max_iterations)

        Returns:
            Dict with success, converged, total_iterations and final_result, or
            success False with the error and exception raised by a step
        """

        start_time = time.time()
        max_iter = max_iterations or self.max_iterations

        try:
            iterations = []
            current_data = initial_data
            iteration_count = 0
            converged = False

            while iteration_count < max_iter:
                iteration_count += 1
                iteration_result = step(current_data, iteration_count)
                iterations.append(iteration_result)

                if stopping_condition(iteration_result):
                    converged = True
                    break

                current_data = iteration_result.get("output", current_data)

            duration_ms = (time.time() - start_time) * 1000
            metrics_collector.record_operation(f"{self.name}.{task}", duration_ms)
            app_logger.log_event(
                "refinement_stopped",
                {
                    "loop": self.name,
                    "task": task,
                    "converged": converged,
                    "iterations": iteration_count
                },
                level="debug"
            )

            return {
                "success": True,
                "task": task,
                "converged": converged,
                "total_iterations": iteration_count,
                "final_result": iterations[-1] if iterations else None,
                "duration_ms": duration_ms
            }

        except Exception as e:
            duration_ms = (time.time() - start_time) * 1000

            app_logger.log_error("refinement_error", str(e), {"loop": self.name, "task": task})
            metrics_collector.record_error("refinement_error")

            return {
                "success": False,
                "task": task,
                "error": str(e),
                "exception": e,
                "duration_ms": duration_ms
            }


contour_loop = RefinementLoop("ContourRefinement", max_iterations=14)
newton_loop = RefinementLoop("NewtonRefinement", max_iterations=50)
