"""
Potential containers: one axis of one branch, and the two-branch pair.

Everything here is in internal units (see trapecho.core.units).
"""
from collections import OrderedDict

import numpy as np

GAUSSIAN = 'gaussian'
HARMONIC = 'harmonic'
CUSTOM = 'custom'
KINDS = (GAUSSIAN, HARMONIC, CUSTOM)

# Only the vertical axis feels gravity.
VERTICAL_AXIS = 'y'


def uniform_grid(halfwidth, n_points):
    return np.linspace(-halfwidth, halfwidth, n_points)


class AxisPotential(object):
    """
    Potential samples on a uniform grid plus the analytic description they
    came from.

    :param grid: Strictly increasing, uniformly spaced positions.
    :param values: Total potential (optical + gravity) at `grid`.
    :param label: Axis name, 'x' or 'y'.
    :param kind: One of 'gaussian', 'harmonic', 'custom'.
    :param params: Analytic parameters. Gaussian: depth, width, scale, tilt.
    Harmonic: omega, center, offset, mass.
    :param optical: State-dependent part of `values` (gravity removed).
    :param mass: Internal particle mass; the kinetic term is
    -1/(2 mass) d^2/dq^2.
    """
    def __init__(self, grid, values, label, kind, params=None, optical=None,
                 mass=None):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        assert kind in KINDS, kind
        assert grid.ndim == 1 and grid.shape == values.shape
        steps = np.diff(grid)
        if not np.all(steps > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValueError("grid must be uniformly spaced")
        if not np.all(np.isfinite(values)):
            raise ValueError("potential values must be finite")
        self.grid = grid
        self.values = values
        self.label = label
        self.kind = kind
        self.params = dict(params or {})
        self.optical = values if optical is None else np.asarray(optical)
        self.mass = mass

    def resampled(self, n_points):
        """
        Same potential on a grid of `n_points` spanning the same domain.
        Analytic kinds are re-evaluated, custom ones interpolated.
        """
        grid = uniform_grid(self.halfwidth, n_points) \
            + 0.5 * (self.grid[-1] + self.grid[0])
        p = self.params
        if self.kind == GAUSSIAN:
            optical = -p['scale'] * p['depth'] * np.exp(
                -2.0 * grid ** 2 / p['width'] ** 2)
            values = optical + p['tilt'] * grid
        elif self.kind == HARMONIC:
            optical = -p['scale'] + 0.5 * p['curvature'] * grid ** 2
            values = p['offset'] + 0.5 * p['curvature'] * (
                grid - p['center']) ** 2
        else:
            values = np.interp(grid, self.grid, self.values)
            optical = np.interp(grid, self.grid, self.optical)
        return AxisPotential(grid, values, self.label, self.kind,
                             params=p, optical=optical, mass=self.mass)

    @property
    def spacing(self):
        return self.grid[1] - self.grid[0]

    @property
    def halfwidth(self):
        return 0.5 * (self.grid[-1] - self.grid[0])

    @property
    def edge_value(self):
        """Lowest potential value at either end of the domain."""
        return min(self.values[0], self.values[-1])

    @property
    def minimum(self):
        if self.kind == HARMONIC:
            return self.params['offset']
        return float(np.min(self.values))

    def argmin_position(self):
        return self.grid[int(np.argmin(self.values))]


class PotentialPair(object):
    """
    Branch potentials V1, V2 on shared grids, one entry per Cartesian axis.

    v2 holds the motional part only; the hyperfine offset e_hf is kept
    separately so that V2_total = v2 + e_hf.

    :param epsilon: Physical perturbation strength.
    :param epsilon_eff: Strength actually simulated (differs under a
    desk-scale reduction).
    """
    def __init__(self, v1, v2, epsilon, epsilon_eff, e_hf, units):
        assert list(v1.keys()) == list(v2.keys())
        for label in v1:
            if not np.array_equal(v1[label].grid, v2[label].grid):
                raise ValueError(
                    "branches must share the grid on axis {}".format(label))
        self.v1 = OrderedDict(v1)
        self.v2 = OrderedDict(v2)
        self.epsilon = epsilon
        self.epsilon_eff = epsilon_eff
        self.e_hf = e_hf
        self.units = units

    @property
    def axes(self):
        return list(self.v1.keys())

    @property
    def kind(self):
        return self.v1[self.axes[0]].kind

    def branch(self, index):
        assert index in (1, 2)
        return self.v1 if index == 1 else self.v2

    def scaled(self, epsilon):
        """
        Same branch 1 and grid, branch 2 rebuilt for a new physical eps.
        """
        epsilon_eff = self.units.effective_epsilon(epsilon)
        factor = 1.0 + epsilon_eff
        v2 = OrderedDict()
        for label, a1 in self.v1.items():
            p = dict(a1.params)
            gravity = a1.values - a1.optical
            if a1.kind == HARMONIC:
                curvature = p['curvature'] * factor
                p.update(curvature=curvature,
                         scale=p['scale'] * factor,
                         omega=np.sqrt(curvature / p['mass']),
                         center=-p['tilt'] / curvature,
                         offset=-p['scale'] * factor
                         - p['tilt'] ** 2 / (2 * curvature))
                optical = -p['scale'] + 0.5 * curvature * a1.grid ** 2
                values = p['offset'] + 0.5 * curvature * (
                    a1.grid - p['center']) ** 2
            else:
                if a1.kind == GAUSSIAN:
                    p['scale'] = p['scale'] * factor
                optical = factor * a1.optical
                values = optical + gravity
            v2[label] = AxisPotential(a1.grid, values, label, a1.kind,
                                      params=p, optical=optical, mass=a1.mass)
        return PotentialPair(self.v1, v2, epsilon, epsilon_eff, self.e_hf,
                             self.units)

    def sag_displacement(self, label):
        """
        center2 - center1 for harmonic pairs; equals g/omega1^2 -
        g/omega2^2 (internal length units) on the vertical axis.
        """
        v1, v2 = self.v1[label], self.v2[label]
        if v1.kind != HARMONIC:
            raise ValueError("sag displacement needs a harmonic pair")
        return v2.params['center'] - v1.params['center']

    def describe(self):
        info = OrderedDict(
            kind=self.kind,
            axes=self.axes,
            epsilon=self.epsilon,
            epsilon_eff=self.epsilon_eff,
        )
        if self.kind == HARMONIC:
            for label in self.axes:
                info['omega1_' + label] = self.v1[label].params['omega']
                info['omega2_' + label] = self.v2[label].params['omega']
                info['sag_' + label] = self.sag_displacement(label)
        return info
