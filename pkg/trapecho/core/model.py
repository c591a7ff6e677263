"""
Physical constants and the trap / numerics configuration objects.

All fields are SI. PhysicalConstants checks itself on construction, the
configs through `validate`. They are treated as immutable afterwards, so
they can be shared freely between scan workers.
"""
import math
import numbers

from scipy import constants as csts

from trapecho.core.errors import ConfigError

RB85_MASS = 84.911789738 * csts.physical_constants['atomic mass constant'][0]
RB85_OMEGA_HF = 2 * math.pi * 3.035732439e9
RB85_LAMBDA_D1 = 795.0e-9
RB85_LAMBDA_D2 = 780.241e-9

TRAP_KINDS = ('gaussian', 'harmonic')
SOLVERS = ('dvr', 'fd')
# Differential light shift from the D1 line alone, or from D1 and D2 with
# the 1:2 line strengths of a linearly polarized trap.
EPSILON_MODELS = ('d1', 'd1_d2')


def _require_positive(section, name, value):
    if (not isinstance(value, numbers.Real) or isinstance(value, bool)
            or not value > 0 or not math.isfinite(value)):
        raise ConfigError("{}.{}".format(section, name),
                          "must be finite and > 0, got {}".format(value))


class PhysicalConstants(object):
    def __init__(
            self,
            hbar=csts.hbar,
            k_B=csts.k,
            gravity_g=9.81,
            atom_mass=RB85_MASS,
            omega_HF=RB85_OMEGA_HF,
            lambda_D1=RB85_LAMBDA_D1,
            lambda_D2=RB85_LAMBDA_D2,
            speed_of_light=csts.c,
    ):
        self.hbar = float(hbar)
        self.k_B = float(k_B)
        self.gravity_g = float(gravity_g)
        self.atom_mass = float(atom_mass)
        self.omega_HF = float(omega_HF)
        self.lambda_D1 = float(lambda_D1)
        self.lambda_D2 = float(lambda_D2)
        self.speed_of_light = float(speed_of_light)
        for name in ('hbar', 'k_B', 'gravity_g', 'atom_mass', 'omega_HF',
                     'lambda_D1', 'lambda_D2', 'speed_of_light'):
            _require_positive('constants', name, getattr(self, name))

    def to_dict(self):
        return dict(
            hbar=self.hbar,
            k_B=self.k_B,
            gravity_g=self.gravity_g,
            atom_mass=self.atom_mass,
            omega_HF=self.omega_HF,
            lambda_D1=self.lambda_D1,
            lambda_D2=self.lambda_D2,
        )


class TrapConfig(object):
    """
    Transverse trap parameters.

    :param kind: 'gaussian' for the dipole trap itself, 'harmonic' to run
    on the harmonic surrogate directly.
    :param trap_depth_U0: Depth in J. When None the depth is
    depth_ratio * k_B * temperature_T.
    :param epsilon_override: Use this ε instead of deriving it from the
    wavelength.
    :param epsilon_model: Which lines set ε(λ), one of EPSILON_MODELS.
    :param oscillation_time: Pins the transverse oscillation period (s)
    instead of deriving it from the Gaussian curvature.
    """
    def __init__(
            self,
            kind='gaussian',
            waist_w0=50e-6,
            trap_depth_U0=None,
            depth_ratio=1.5,
            wavelength_lambda=None,
            temperature_T=20e-6,
            clip_ratio=1.5,
            gravity_enabled=True,
            epsilon_override=None,
            oscillation_time=None,
            epsilon_model='d1',
    ):
        self.kind = kind
        self.waist_w0 = waist_w0
        self.trap_depth_U0 = trap_depth_U0
        self.depth_ratio = depth_ratio
        self.wavelength_lambda = wavelength_lambda
        self.temperature_T = temperature_T
        self.clip_ratio = clip_ratio
        self.gravity_enabled = bool(gravity_enabled)
        self.epsilon_override = epsilon_override
        self.oscillation_time = oscillation_time
        self.epsilon_model = epsilon_model

    def validate(self, constants):
        if self.kind not in TRAP_KINDS:
            raise ConfigError('trap.kind',
                              "must be one of {}".format(TRAP_KINDS))
        _require_positive('trap', 'waist_w0', self.waist_w0)
        _require_positive('trap', 'temperature_T', self.temperature_T)
        _require_positive('trap', 'clip_ratio', self.clip_ratio)
        if self.trap_depth_U0 is None:
            _require_positive('trap', 'depth_ratio', self.depth_ratio)
        else:
            _require_positive('trap', 'trap_depth_U0', self.trap_depth_U0)
        if self.oscillation_time is not None:
            _require_positive('trap', 'oscillation_time',
                              self.oscillation_time)
        if self.epsilon_model not in EPSILON_MODELS:
            raise ConfigError('trap.epsilon_model',
                              "must be one of {}".format(EPSILON_MODELS))
        if self.epsilon_override is None:
            if self.wavelength_lambda is None:
                raise ConfigError(
                    'trap.wavelength_lambda',
                    "required when epsilon_override is not given")
            _require_positive('trap', 'wavelength_lambda',
                              self.wavelength_lambda)
            if self.wavelength_lambda <= constants.lambda_D1:
                raise ConfigError(
                    'trap.wavelength_lambda',
                    "must be red of the D1 line ({} m), got {} m".format(
                        constants.lambda_D1, self.wavelength_lambda))
        elif not (isinstance(self.epsilon_override, numbers.Real)
                  and math.isfinite(self.epsilon_override)
                  and self.epsilon_override >= 0):
            raise ConfigError('trap.epsilon_override',
                              "must be finite and >= 0")
        return self

    def depth(self, constants):
        """Trap depth U0 in J."""
        if self.trap_depth_U0 is not None:
            return float(self.trap_depth_U0)
        return self.depth_ratio * constants.k_B * self.temperature_T

    def thermal_energy(self, constants):
        return constants.k_B * self.temperature_T

    def trap_frequency(self, constants):
        """
        Transverse angular frequency of branch 1 in rad/s.

        Uses the pinned oscillation time when set, otherwise the curvature
        of -U0 exp(-2 q^2 / w0^2) at the bottom, sqrt(4 U0 / (m w0^2)).
        """
        if self.oscillation_time is not None:
            return 2 * math.pi / self.oscillation_time
        return math.sqrt(4 * self.depth(constants)
                         / (constants.atom_mass * self.waist_w0 ** 2))

    def to_dict(self):
        return dict(
            kind=self.kind,
            waist_w0=self.waist_w0,
            trap_depth_U0=self.trap_depth_U0,
            depth_ratio=self.depth_ratio,
            wavelength_lambda=self.wavelength_lambda,
            temperature_T=self.temperature_T,
            clip_ratio=self.clip_ratio,
            gravity_enabled=self.gravity_enabled,
            epsilon_override=self.epsilon_override,
            oscillation_time=self.oscillation_time,
            epsilon_model=self.epsilon_model,
        )


class NumericsConfig(object):
    """
    :param domain_halfwidth: Half-width of the grid in m, or 'auto'.
    :param basis_cutoff_energy: Bound-state cutoff in J measured on the
    branch-1 energy scale; None means the potential value at the domain edge.
    :param thermal_quanta: k_B T / (hbar omega) per axis to simulate at.
    None runs the physical regime.
    :param scan_parallelism: Upper bound on concurrent scan workers.
    """
    def __init__(
            self,
            grid_points_per_axis=512,
            domain_halfwidth='auto',
            basis_cutoff_energy=None,
            dimensionality=1,
            scan_parallelism=1,
            thermal_quanta=50.0,
            solver='dvr',
            max_states=None,
            cache_dir=None,
    ):
        self.grid_points_per_axis = grid_points_per_axis
        self.domain_halfwidth = domain_halfwidth
        self.basis_cutoff_energy = basis_cutoff_energy
        self.dimensionality = dimensionality
        self.scan_parallelism = scan_parallelism
        self.thermal_quanta = thermal_quanta
        self.solver = solver
        self.max_states = max_states
        self.cache_dir = cache_dir

    def validate(self):
        if (not isinstance(self.grid_points_per_axis, int)
                or self.grid_points_per_axis < 64):
            raise ConfigError('numerics.grid_points_per_axis',
                              "must be an integer >= 64")
        if self.domain_halfwidth != 'auto':
            _require_positive('numerics', 'domain_halfwidth',
                              self.domain_halfwidth)
        if self.dimensionality not in (1, 2):
            raise ConfigError('numerics.dimensionality', "must be 1 or 2")
        if (not isinstance(self.scan_parallelism, int)
                or self.scan_parallelism < 1):
            raise ConfigError('numerics.scan_parallelism',
                              "must be an integer >= 1")
        if self.thermal_quanta is not None:
            _require_positive('numerics', 'thermal_quanta',
                              self.thermal_quanta)
        if self.solver not in SOLVERS:
            raise ConfigError('numerics.solver',
                              "must be one of {}".format(SOLVERS))
        if self.max_states is not None and (
                not isinstance(self.max_states, int) or self.max_states < 2):
            raise ConfigError('numerics.max_states',
                              "must be an integer >= 2")
        return self

    def to_dict(self):
        return dict(
            grid_points_per_axis=self.grid_points_per_axis,
            domain_halfwidth=self.domain_halfwidth,
            basis_cutoff_energy=self.basis_cutoff_energy,
            dimensionality=self.dimensionality,
            scan_parallelism=self.scan_parallelism,
            thermal_quanta=self.thermal_quanta,
            solver=self.solver,
            max_states=self.max_states,
            cache_dir=self.cache_dir,
        )
