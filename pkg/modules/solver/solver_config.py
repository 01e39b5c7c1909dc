"""
Solver settings.
"""

import enum


class Scheme(enum.Enum):
    """
    Time stepping variant.
    """

    FULLY_IMPLICIT = "fully_implicit"
    SEMI_IMPLICIT = "semi_implicit"


class SolverConfig:  # pylint: disable=too-many-instance-attributes
    """
    Tolerances, scheme and stabilization constants.

    penalty None means sigma = 10 k^2.
    """

    __create_key = object()

    @classmethod
    def create(
        cls,
        scheme: "Scheme | str" = Scheme.FULLY_IMPLICIT,
        fixed_point_tol: float = 1.0e-8,
        max_fixed_point_iters: int = 100,
        linear_solver_tol: float = 1.0e-12,
        c_s: float = 1.0e-8,
        penalty: "float | None" = None,
        load_quadrature_degree: int = 14,
        slab1_iteration_warning: int = 20,
    ) -> "tuple[True, SolverConfig] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a SolverConfig object.
        """
        try:
            scheme = Scheme(scheme)
        except ValueError:
            return False, None

        if fixed_point_tol <= 0.0 or linear_solver_tol <= 0.0 or c_s <= 0.0:
            return False, None

        if max_fixed_point_iters < 1 or load_quadrature_degree < 1:
            return False, None

        if penalty is not None and penalty <= 0.0:
            return False, None

        return True, SolverConfig(
            cls.__create_key,
            scheme,
            fixed_point_tol,
            max_fixed_point_iters,
            linear_solver_tol,
            c_s,
            penalty,
            load_quadrature_degree,
            slab1_iteration_warning,
        )

    @classmethod
    def from_mapping(cls, settings: dict) -> "tuple[True, SolverConfig] | tuple[False, None]":
        """
        Create from the `solver` section of a YAML config (unknown keys are rejected).
        """
        try:
            return cls.create(**settings)
        except TypeError:
            return False, None

    def __init__(
        self,
        class_private_create_key: object,
        scheme: Scheme,
        fixed_point_tol: float,
        max_fixed_point_iters: int,
        linear_solver_tol: float,
        c_s: float,
        penalty: "float | None",
        load_quadrature_degree: int,
        slab1_iteration_warning: int,
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is SolverConfig.__create_key, "Use create() method"

        self.scheme = scheme
        self.fixed_point_tol = fixed_point_tol
        self.max_fixed_point_iters = max_fixed_point_iters
        self.linear_solver_tol = linear_solver_tol
        self.c_s = c_s
        self.penalty = penalty
        self.load_quadrature_degree = load_quadrature_degree
        self.slab1_iteration_warning = slab1_iteration_warning

    def penalty_for(self, degree: int) -> float:
        """
        sigma, defaulting to 10 k^2.
        """
        if self.penalty is None:
            return 10.0 * degree**2

        return self.penalty

    def __repr__(self) -> str:
        return (
            f"scheme: {self.scheme.value}, fixed_point_tol: {self.fixed_point_tol}, "
            f"max_fixed_point_iters: {self.max_fixed_point_iters}, "
            f"linear_solver_tol: {self.linear_solver_tol}, c_s: {self.c_s}, "
            f"penalty: {self.penalty}"
        )
