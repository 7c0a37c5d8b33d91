from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the root finder, solver and verifier.

    ``tol_theta`` is an absolute tolerance on slope values, ``tol_residual``
    on the root equation, ``tol_feas`` on constraint slacks and ``tol_kkt``
    on the optimality residuals.
    """

    tol_theta: float = 1e-10
    tol_residual: float = 1e-9
    tol_feas: float = 1e-9
    tol_kkt: float = 1e-8
    max_expansions: int = 200

    def __post_init__(self):
        for name in ("tol_theta", "tol_residual", "tol_feas", "tol_kkt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_expansions < 1:
            raise ValueError("max_expansions must be >= 1")


DEFAULT_TOLERANCES = Tolerances()
