"""
Internal unit system.

Lengths are measured in w0, energies in U0 and times in hbar_eff / U0, so
hbar_eff = 1 internally and the kinetic operator reads -kinetic * d^2/dq^2.

hbar_eff equals hbar unless a desk-scale reduction is requested. The
reduction simulates k_B T / (hbar omega) = thermal_quanta instead of the
physical value N_phys by scaling hbar_eff = R hbar and epsilon_eff = R
epsilon with R = N_phys / thermal_quanta. U0, w0, m, g and T stay
untouched, which keeps the classical trap, the oscillation period in
seconds, epsilon * n and (d / a)^2 * n unchanged.
"""

LENGTH = 'length'
ENERGY = 'energy'
TIME = 'time'
FREQUENCY = 'frequency'


class UnitScales(object):
    def __init__(self, length, energy, hbar_eff, atom_mass, gravity_g,
                 desk_factor=1.0, thermal_energy=None):
        self.length = length
        self.energy = energy
        self.hbar_eff = hbar_eff
        self.desk_factor = desk_factor
        self.time = hbar_eff / energy
        # Internal mass so that kinetic = 1 / (2 mass).
        self.mass = atom_mass * length ** 2 * energy / hbar_eff ** 2
        self.kinetic = 1.0 / (2.0 * self.mass)
        self.gravity_tilt = atom_mass * gravity_g * length / energy
        self.thermal_energy = thermal_energy
        self._scales = {
            LENGTH: self.length,
            ENERGY: self.energy,
            TIME: self.time,
            FREQUENCY: 1.0 / self.time,
        }

    def to_internal(self, value, kind):
        return value / self._scales[kind]

    def from_internal(self, value, kind):
        return value * self._scales[kind]

    def effective_epsilon(self, epsilon):
        return self.desk_factor * epsilon

    def to_dict(self):
        return dict(
            length_m=self.length,
            energy_J=self.energy,
            time_s=self.time,
            hbar_eff=self.hbar_eff,
            desk_factor=self.desk_factor,
            kinetic=self.kinetic,
            gravity_tilt=self.gravity_tilt,
        )


def physical_thermal_quanta(constants, trap):
    """k_B T / (hbar omega) of the physical trap."""
    omega = trap.trap_frequency(constants)
    return trap.thermal_energy(constants) / (constants.hbar * omega)


def desk_factor(constants, trap, numerics=None):
    if numerics is None or numerics.thermal_quanta is None:
        return 1.0
    return max(1.0, physical_thermal_quanta(constants, trap)
               / numerics.thermal_quanta)


def natural_units(constants, trap, numerics=None):
    """
    :return: UnitScales with length -> w0, energy -> U0, time ->
    hbar_eff / U0.
    """
    factor = desk_factor(constants, trap, numerics)
    return UnitScales(
        length=trap.waist_w0,
        energy=trap.depth(constants),
        hbar_eff=factor * constants.hbar,
        atom_mass=constants.atom_mass,
        gravity_g=constants.gravity_g,
        desk_factor=factor,
        thermal_energy=trap.thermal_energy(constants),
    )