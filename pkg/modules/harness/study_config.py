"""
Study configuration: which case to run on which space-time discretizations.
"""

import enum
import math

from ..solver import solver_config


# Error components that can carry an expected-rate band
RATE_COMPONENTS = ("err_u", "linf_l2", "a_norm", "gamma_jump", "p_final")


class StudyMode(enum.Enum):
    """
    space_time: paired (mesh, tau) refinement, rates in h
    time_only: one mesh, tau refinement, rates in tau
    nu_sweep: one discretization, several viscosities, plateau check
    """

    SPACE_TIME = "space_time"
    TIME_ONLY = "time_only"
    NU_SWEEP = "nu_sweep"


class MeshSource:
    """
    Structured unit-square mesh with n cells per side, or a Triangle .node/.ele pair.
    """

    def __init__(
        self,
        cells_per_side: "int | None" = None,
        node_path: "str | None" = None,
        ele_path: "str | None" = None,
    ) -> None:
        self.cells_per_side = cells_per_side
        self.node_path = node_path
        self.ele_path = ele_path

    @property
    def is_structured(self) -> bool:
        """
        Whether the mesh is generated.
        """
        return self.cells_per_side is not None

    def __repr__(self) -> str:
        if self.is_structured:
            return f"structured n={self.cells_per_side}"

        return f"triangle {self.node_path} {self.ele_path}"


class LevelSpec:
    """
    One run of a study, index in config order.
    """

    def __init__(self, index: int, mesh_source: MeshSource, tau: float, viscosity: float) -> None:
        self.index = index
        self.mesh_source = mesh_source
        self.tau = tau
        self.viscosity = viscosity

    def __repr__(self) -> str:
        return f"level {self.index}: {self.mesh_source}, tau={self.tau}, nu={self.viscosity}"


def _parse_mesh(entry: object) -> "MeshSource | None":
    if isinstance(entry, bool):
        return None

    if isinstance(entry, int):
        return MeshSource(cells_per_side=entry) if entry >= 1 else None

    if isinstance(entry, dict) and "node" in entry and "ele" in entry:
        return MeshSource(node_path=str(entry["node"]), ele_path=str(entry["ele"]))

    return None


class StudyConfig:  # pylint: disable=too-many-instance-attributes
    """
    Parsed study file with CLI overrides applied.
    """

    __create_key = object()

    @classmethod
    def create(
        cls,
        settings: dict,
        solver_defaults: "dict | None" = None,
        overrides: "dict | None" = None,
    ) -> "tuple[True, StudyConfig] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a StudyConfig object.

        Parameters:
            settings: Study file contents.
            solver_defaults: `solver` section of config.yaml, overridden by study keys.
            overrides: CLI values (out, mode, scheme, k); None entries are ignored.

        Returns:
            A tuple containing success status and the StudyConfig object (or None on failure).
        """
        merged = dict(settings)
        for key, value in (overrides or {}).items():
            if value is not None:
                merged[key] = value

        try:
            degree = int(merged.get("k", 1))
            time_degree = int(merged.get("ell", degree))
            case = str(merged["case"])
            mode = StudyMode(merged.get("mode", StudyMode.SPACE_TIME.value))
            viscosities = [float(value) for value in merged.get("nu_list", [merged.get("nu", 1.0)])]
            taus = [float(value) for value in merged.get("taus", [])]
            final_time = float(merged.get("final_time", 1.0))
            rate_window = int(merged.get("rate_window", 2))
            bands = {
                str(component): (float(band[0]), float(band[1]))
                for component, band in merged.get("rate_bands", {}).items()
            }
            plateau_tolerance = float(merged.get("plateau_tolerance", 0.1))
            plateau_max_nu = float(merged.get("plateau_max_nu", 1.0e-3))
        except (KeyError, TypeError, ValueError, IndexError):
            return False, None

        meshes = [_parse_mesh(entry) for entry in merged.get("meshes", [])]
        if not meshes or any(mesh_source is None for mesh_source in meshes):
            return False, None

        if degree not in (1, 2) or time_degree < 0:
            return False, None

        if not taus or any(tau <= 0.0 for tau in taus) or final_time <= 0.0:
            return False, None

        if any(viscosity <= 0.0 for viscosity in viscosities) or rate_window < 1:
            return False, None

        if any(component not in RATE_COMPONENTS for component in bands):
            return False, None

        solver_settings = dict(solver_defaults or {})
        for key in (
            "fixed_point_tol",
            "max_fixed_point_iters",
            "linear_solver_tol",
            "c_s",
            "load_quadrature_degree",
            "slab1_iteration_warning",
        ):
            if key in merged:
                solver_settings[key] = merged[key]
        solver_settings["scheme"] = merged.get("scheme", "fully_implicit")
        solver_settings["penalty"] = merged.get("sigma")

        result, config = solver_config.SolverConfig.from_mapping(solver_settings)
        if not result:
            return False, None

        # Get Pylance to stop complaining
        assert config is not None

        return True, StudyConfig(
            cls.__create_key,
            case=case,
            mode=mode,
            degree=degree,
            time_degree=time_degree,
            viscosities=viscosities,
            meshes=meshes,
            taus=taus,
            final_time=final_time,
            solver=config,
            output_directory=str(merged.get("output_directory", "results")),
            rate_bands=bands,
            rate_window=rate_window,
            plateau_tolerance=plateau_tolerance,
            plateau_max_nu=plateau_max_nu,
        )

    def __init__(
        self,
        class_private_create_key: object,
        case: str,
        mode: StudyMode,
        degree: int,
        time_degree: int,
        viscosities: "list[float]",
        meshes: "list[MeshSource]",
        taus: "list[float]",
        final_time: float,
        solver: solver_config.SolverConfig,
        output_directory: str,
        rate_bands: "dict[str, tuple[float, float]]",
        rate_window: int,
        plateau_tolerance: float,
        plateau_max_nu: float,
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is StudyConfig.__create_key, "Use create() method"

        self.case = case
        self.mode = mode
        self.degree = degree
        self.time_degree = time_degree
        self.viscosities = viscosities
        self.meshes = meshes
        self.taus = taus
        self.final_time = final_time
        self.solver = solver
        self.output_directory = output_directory
        self.rate_bands = rate_bands
        self.rate_window = rate_window
        self.plateau_tolerance = plateau_tolerance
        self.plateau_max_nu = plateau_max_nu

    def slab_count(self, tau: float) -> "tuple[True, int] | tuple[False, None]":
        """
        Number of uniform slabs of length tau covering [0, T]; tau must divide T.
        """
        count = round(self.final_time / tau)
        if count < 1 or not math.isclose(count * tau, self.final_time, rel_tol=1.0e-9):
            return False, None

        return True, count

    def levels(self) -> "tuple[True, list[LevelSpec]] | tuple[False, None]":
        """
        Runs of the study in config order.
        """
        if self.mode == StudyMode.SPACE_TIME:
            if len(self.meshes) != len(self.taus) or len(self.viscosities) != 1:
                return False, None
            pairs = zip(self.meshes, self.taus, self.viscosities * len(self.taus))
        elif self.mode == StudyMode.TIME_ONLY:
            if len(self.meshes) != 1 or len(self.viscosities) != 1:
                return False, None
            pairs = zip(self.meshes * len(self.taus), self.taus, self.viscosities * len(self.taus))
        else:
            if len(self.meshes) != 1 or len(self.taus) != 1:
                return False, None
            count = len(self.viscosities)
            pairs = zip(self.meshes * count, self.taus * count, self.viscosities)

        levels = [
            LevelSpec(index, mesh_source, tau, viscosity)
            for index, (mesh_source, tau, viscosity) in enumerate(pairs)
        ]
        if any(not self.slab_count(level.tau)[0] for level in levels):
            return False, None

        return True, levels
